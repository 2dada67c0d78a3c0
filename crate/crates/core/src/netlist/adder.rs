//! Structural adder generators.
//!
//! Every architecture has inputs `A0..A{w-1}`, `B0..B{w-1}`, `Cin` (in that
//! order, bit 0 least significant) and outputs `S0..S{w-1}`, `Cout`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{GateKind, NetId, Netlist, NetlistBuilder};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AdderArch {
    RippleCarry,
    CarryLookahead,
    CarrySkip,
    KoggeStone,
}

impl AdderArch {
    pub const ALL: [AdderArch; 4] = [
        AdderArch::RippleCarry,
        AdderArch::CarryLookahead,
        AdderArch::CarrySkip,
        AdderArch::KoggeStone,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            AdderArch::RippleCarry => "ripple-carry",
            AdderArch::CarryLookahead => "carry-lookahead",
            AdderArch::CarrySkip => "carry-skip",
            AdderArch::KoggeStone => "kogge-stone",
        }
    }
}

impl fmt::Display for AdderArch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for AdderArch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "ripple-carry" | "rca" | "ripple" => Ok(AdderArch::RippleCarry),
            "carry-lookahead" | "cla" => Ok(AdderArch::CarryLookahead),
            "carry-skip" | "csa" | "skip" => Ok(AdderArch::CarrySkip),
            "kogge-stone" | "ksa" => Ok(AdderArch::KoggeStone),
            _ => Err(Error::InvalidArgument(format!("unknown adder architecture `{s}`"))),
        }
    }
}

/// Block size of the carry-lookahead and carry-skip adders.
const BLOCK: usize = 4;

struct Gen {
    b: NetlistBuilder,
}

impl Gen {
    fn gate(&mut self, kind: GateKind, fanin: Vec<NetId>) -> NetId {
        self.b.add_fresh_gate(kind, fanin, "w")
    }

    fn and(&mut self, fanin: Vec<NetId>) -> NetId {
        if fanin.len() == 1 {
            return fanin[0];
        }
        self.gate(GateKind::And, fanin)
    }

    fn or(&mut self, fanin: Vec<NetId>) -> NetId {
        if fanin.len() == 1 {
            return fanin[0];
        }
        self.gate(GateKind::Or, fanin)
    }

    fn xor(&mut self, a: NetId, b: NetId) -> NetId {
        self.gate(GateKind::Xor, vec![a, b])
    }

    /// Full adder; returns (sum, carry-out).
    fn full_adder(&mut self, a: NetId, b: NetId, c: NetId) -> (NetId, NetId) {
        let p = self.xor(a, b);
        let s = self.xor(p, c);
        let g = self.and(vec![a, b]);
        let t = self.and(vec![p, c]);
        let co = self.or(vec![g, t]);
        (s, co)
    }
}

pub fn gen_adder(arch: AdderArch, width: usize) -> Result<Netlist> {
    if width == 0 {
        return Err(Error::InvalidArgument("adder width must be at least 1".into()));
    }
    let mut g = Gen {
        b: NetlistBuilder::new(format!("{}_{width}", arch.slug())),
    };
    let a: Vec<NetId> = (0..width).map(|i| g.b.add_input(&format!("A{i}"))).collect();
    let bb: Vec<NetId> = (0..width).map(|i| g.b.add_input(&format!("B{i}"))).collect();
    let cin = g.b.add_input("Cin");
    let sum_names: Vec<String> = (0..width).map(|i| format!("S{i}")).collect();

    let (sums, cout) = match arch {
        AdderArch::RippleCarry => ripple(&mut g, &a, &bb, cin),
        AdderArch::CarryLookahead => lookahead(&mut g, &a, &bb, cin),
        AdderArch::CarrySkip => skip(&mut g, &a, &bb, cin),
        AdderArch::KoggeStone => kogge_stone(&mut g, &a, &bb, cin),
    };

    for (net, name) in sums.into_iter().zip(&sum_names) {
        let o = name_output(&mut g, net, name);
        g.b.outputs.push(o);
    }
    let o = name_output(&mut g, cout, "Cout");
    g.b.outputs.push(o);
    g.b.finish()
}

/// Gives `net` the output name `name`, through a buffer when `net` is a
/// primary input or already an output.
fn name_output(g: &mut Gen, net: NetId, name: &str) -> NetId {
    if g.b.inputs.contains(&net) || g.b.outputs.contains(&net) {
        let target = g.b.intern(name);
        return g.b.add_gate_ids(GateKind::Buf, vec![net], target);
    }
    g.b.rename(net, name).expect("output names are never generated internally");
    net
}

fn ripple(g: &mut Gen, a: &[NetId], b: &[NetId], cin: NetId) -> (Vec<NetId>, NetId) {
    let mut carry = cin;
    let mut sums = Vec::with_capacity(a.len());
    for i in 0..a.len() {
        let (s, c) = g.full_adder(a[i], b[i], carry);
        sums.push(s);
        carry = c;
    }
    (sums, carry)
}

/// Flat two-level lookahead inside 4-bit blocks, blocks chained by their carry.
fn lookahead(g: &mut Gen, a: &[NetId], b: &[NetId], cin: NetId) -> (Vec<NetId>, NetId) {
    let w = a.len();
    let p: Vec<NetId> = (0..w).map(|i| g.xor(a[i], b[i])).collect();
    let gen: Vec<NetId> = (0..w).map(|i| g.and(vec![a[i], b[i]])).collect();
    let mut sums = Vec::with_capacity(w);
    let mut block_cin = cin;
    for start in (0..w).step_by(BLOCK) {
        let end = (start + BLOCK).min(w);
        let mut carry_in = block_cin;
        for i in start..end {
            sums.push(g.xor(p[i], carry_in));
            // c_{i+1} = g_i + p_i g_{i-1} + ... + p_i..p_start c_start
            let mut terms = vec![gen[i]];
            for j in (start..i).rev() {
                let mut f: Vec<NetId> = (j + 1..=i).map(|k| p[k]).collect();
                f.push(gen[j]);
                terms.push(g.and(f));
            }
            let mut f: Vec<NetId> = (start..=i).map(|k| p[k]).collect();
            f.push(block_cin);
            terms.push(g.and(f));
            carry_in = g.or(terms);
        }
        block_cin = carry_in;
    }
    (sums, block_cin)
}

/// Ripple blocks with a bypass multiplexed in by the block propagate.
fn skip(g: &mut Gen, a: &[NetId], b: &[NetId], cin: NetId) -> (Vec<NetId>, NetId) {
    let w = a.len();
    let mut sums = Vec::with_capacity(w);
    let mut block_cin = cin;
    for start in (0..w).step_by(BLOCK) {
        let end = (start + BLOCK).min(w);
        let mut carry = block_cin;
        let mut props = Vec::with_capacity(end - start);
        for i in start..end {
            let p = g.xor(a[i], b[i]);
            props.push(p);
            sums.push(g.xor(p, carry));
            let gi = g.and(vec![a[i], b[i]]);
            let t = g.and(vec![p, carry]);
            carry = g.or(vec![gi, t]);
        }
        props.push(block_cin);
        let bypass = g.and(props);
        block_cin = g.or(vec![carry, bypass]);
    }
    (sums, block_cin)
}

/// Parallel-prefix (Kogge-Stone) carry network, carry-in folded into bit 0.
fn kogge_stone(g: &mut Gen, a: &[NetId], b: &[NetId], cin: NetId) -> (Vec<NetId>, NetId) {
    let w = a.len();
    let p: Vec<NetId> = (0..w).map(|i| g.xor(a[i], b[i])).collect();
    let mut gg: Vec<NetId> = (0..w).map(|i| g.and(vec![a[i], b[i]])).collect();
    let t = g.and(vec![p[0], cin]);
    gg[0] = g.or(vec![gg[0], t]);
    let mut pp = p.clone();
    let mut d = 1;
    while d < w {
        let (prev_g, prev_p) = (gg.clone(), pp.clone());
        for i in d..w {
            let t = g.and(vec![prev_p[i], prev_g[i - d]]);
            gg[i] = g.or(vec![prev_g[i], t]);
            if i >= 2 * d {
                pp[i] = g.and(vec![prev_p[i], prev_p[i - d]]);
            }
        }
        d *= 2;
    }
    let mut sums = Vec::with_capacity(w);
    sums.push(g.xor(p[0], cin));
    for i in 1..w {
        sums.push(g.xor(p[i], gg[i - 1]));
    }
    (sums, gg[w - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{random_vectors, TestVector};

    /// Drives the adder with integer operands; returns (sum, carry).
    fn add(n: &Netlist, w: usize, x: u64, y: u64, c: bool) -> (u64, bool) {
        let mut bits = Vec::with_capacity(2 * w + 1);
        bits.extend((0..w).map(|i| x >> i & 1 == 1));
        bits.extend((0..w).map(|i| y >> i & 1 == 1));
        bits.push(c);
        let out = n.evaluate_outputs(&TestVector::new(bits)).unwrap();
        let sum = (0..w).fold(0u64, |acc, i| acc | (out[i] as u64) << i);
        (sum, out[w])
    }

    #[test]
    fn one_bit_full_adder() {
        let n = gen_adder(AdderArch::RippleCarry, 1).unwrap();
        assert_eq!(add(&n, 1, 1, 1, false), (0, true));
        assert_eq!(n.inputs().len(), 3);
        assert_eq!(n.outputs().len(), 2);
    }

    #[test]
    fn all_architectures_exhaustive_up_to_width_8() {
        for w in 1..=8usize {
            for arch in AdderArch::ALL {
                let n = gen_adder(arch, w).unwrap();
                assert_eq!(n.inputs().len(), 2 * w + 1);
                assert_eq!(n.output_names().last(), Some(&"Cout"));
                let m = 1u64 << w;
                // exhaustive for small widths, a strided sweep for 7-8 bits
                let step = if w <= 6 { 1 } else { 3 };
                for x in (0..m).step_by(step) {
                    for y in 0..m {
                        for c in [false, true] {
                            let full = x + y + c as u64;
                            assert_eq!(add(&n, w, x, y, c), (full & (m - 1), full >> w == 1), "{arch} w={w}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn kogge_stone_equals_ripple_at_width_4() {
        let k = gen_adder(AdderArch::KoggeStone, 4).unwrap();
        let r = gen_adder(AdderArch::RippleCarry, 4).unwrap();
        for code in 0..1u64 << 9 {
            let v = TestVector::from_index(code, 9);
            assert_eq!(k.evaluate_outputs(&v).unwrap(), r.evaluate_outputs(&v).unwrap());
        }
    }

    #[test]
    fn width_64_random_equivalence() {
        let nets: Vec<Netlist> = AdderArch::ALL.iter().map(|&a| gen_adder(a, 64).unwrap()).collect();
        for v in random_vectors(129, 10_000, 11) {
            let reference = nets[0].evaluate_outputs(&v).unwrap();
            for n in &nets[1..] {
                assert_eq!(n.evaluate_outputs(&v).unwrap(), reference, "{}", n.name());
            }
        }
    }

    #[test]
    fn lookahead_is_larger_than_ripple() {
        let cla = gen_adder(AdderArch::CarryLookahead, 64).unwrap().gate_count();
        let rca = gen_adder(AdderArch::RippleCarry, 64).unwrap().gate_count();
        assert!(cla > rca, "cla={cla} rca={rca}");
    }

    #[test]
    fn zero_width_rejected() {
        assert!(gen_adder(AdderArch::KoggeStone, 0).is_err());
    }
}
