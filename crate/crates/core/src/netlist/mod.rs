//! Combinational gate-level netlist IR.
//!
//! A [`Netlist`] is immutable once built. Construction goes through
//! [`NetlistBuilder`], which interns nets by name and validates the usual
//! structural invariants (single driver, no undefined nets, acyclic) in
//! [`NetlistBuilder::finish`].

mod adder;
mod bench;
mod expr;
mod sim;

pub use adder::{gen_adder, AdderArch};
pub use bench::{parse_bench, parse_bench_named, write_bench};
pub use expr::parse_expr;
pub use sim::{lane_mask, lane_vector, pack_vectors, random_vectors, TestVector, VectorStream};

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a net inside one [`Netlist`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NetId(pub u32);

impl NetId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

pub const MAX_GATE_ARITY: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    And,
    Nand,
    Or,
    Nor,
    Xor,
    Xnor,
    Not,
    Buf,
}

impl GateKind {
    pub const ALL: [GateKind; 8] = [
        GateKind::And,
        GateKind::Nand,
        GateKind::Or,
        GateKind::Nor,
        GateKind::Xor,
        GateKind::Xnor,
        GateKind::Not,
        GateKind::Buf,
    ];

    /// Inclusive range of legal fan-in counts.
    pub fn arity_range(self) -> (usize, usize) {
        match self {
            GateKind::Not | GateKind::Buf => (1, 1),
            GateKind::Xor | GateKind::Xnor => (2, 2),
            _ => (2, MAX_GATE_ARITY),
        }
    }

    pub fn accepts_arity(self, arity: usize) -> bool {
        let (lo, hi) = self.arity_range();
        (lo..=hi).contains(&arity)
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Nand => "NAND",
            GateKind::Or => "OR",
            GateKind::Nor => "NOR",
            GateKind::Xor => "XOR",
            GateKind::Xnor => "XNOR",
            GateKind::Not => "NOT",
            GateKind::Buf => "BUF",
        }
    }

    /// Truth-table output for one input pattern.
    pub fn eval(self, inputs: impl IntoIterator<Item = bool>) -> bool {
        let mut it = inputs.into_iter();
        match self {
            GateKind::And => it.all(|b| b),
            GateKind::Nand => !it.all(|b| b),
            GateKind::Or => it.any(|b| b),
            GateKind::Nor => !it.any(|b| b),
            GateKind::Xor => it.fold(false, |acc, b| acc ^ b),
            GateKind::Xnor => !it.fold(false, |acc, b| acc ^ b),
            GateKind::Not => !it.next().unwrap_or(false),
            GateKind::Buf => it.next().unwrap_or(false),
        }
    }

    /// Bitwise evaluation over 64 packed patterns.
    pub fn eval_words(self, inputs: impl IntoIterator<Item = u64>) -> u64 {
        let mut it = inputs.into_iter();
        match self {
            GateKind::And => it.fold(!0, |acc, w| acc & w),
            GateKind::Nand => !it.fold(!0, |acc, w| acc & w),
            GateKind::Or => it.fold(0, |acc, w| acc | w),
            GateKind::Nor => !it.fold(0, |acc, w| acc | w),
            GateKind::Xor => it.fold(0, |acc, w| acc ^ w),
            GateKind::Xnor => !it.fold(0, |acc, w| acc ^ w),
            GateKind::Not => !it.next().unwrap_or(0),
            GateKind::Buf => it.next().unwrap_or(0),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "AND" => GateKind::And,
            "NAND" => GateKind::Nand,
            "OR" => GateKind::Or,
            "NOR" => GateKind::Nor,
            "XOR" => GateKind::Xor,
            "XNOR" => GateKind::Xnor,
            "NOT" | "INV" => GateKind::Not,
            "BUF" | "BUFF" => GateKind::Buf,
            _ => return Err(Error::UnsupportedGate(s.to_string())),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub fanin: Vec<NetId>,
    pub output: NetId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Driver {
    Input(usize),
    Gate(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Netlist {
    name: String,
    net_names: Vec<String>,
    by_name: HashMap<String, NetId>,
    inputs: Vec<NetId>,
    outputs: Vec<NetId>,
    gates: Vec<Gate>,
    drivers: Vec<Driver>,
    topo: Vec<usize>,
}

impl Netlist {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_nets(&self) -> usize {
        self.net_names.len()
    }

    pub fn net_name(&self, id: NetId) -> &str {
        &self.net_names[id.index()]
    }

    pub fn net_id(&self, name: &str) -> Option<NetId> {
        self.by_name.get(name).copied()
    }

    pub fn nets(&self) -> impl Iterator<Item = NetId> + '_ {
        (0..self.net_names.len() as u32).map(NetId)
    }

    pub fn inputs(&self) -> &[NetId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[NetId] {
        &self.outputs
    }

    pub fn input_names(&self) -> Vec<&str> {
        self.inputs.iter().map(|&n| self.net_name(n)).collect()
    }

    pub fn output_names(&self) -> Vec<&str> {
        self.outputs.iter().map(|&n| self.net_name(n)).collect()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn driver(&self, net: NetId) -> Driver {
        self.drivers[net.index()]
    }

    pub fn driving_gate(&self, net: NetId) -> Option<&Gate> {
        match self.drivers[net.index()] {
            Driver::Gate(g) => Some(&self.gates[g]),
            Driver::Input(_) => None,
        }
    }

    pub fn is_input(&self, net: NetId) -> bool {
        matches!(self.drivers[net.index()], Driver::Input(_))
    }

    pub fn is_output(&self, net: NetId) -> bool {
        self.outputs.contains(&net)
    }

    /// Gate indices in topological order.
    pub fn topo_order(&self) -> &[usize] {
        &self.topo
    }

    /// A NOT gate fed directly by a primary input and not itself a primary
    /// output is a complemented input literal: it is free in the area proxy
    /// and is not a counted signal.
    pub fn is_input_literal(&self, gate: &Gate) -> bool {
        gate.kind == GateKind::Not && self.is_input(gate.fanin[0]) && !self.is_output(gate.output)
    }

    /// Area proxy: number of gates excluding complemented input literals.
    pub fn gate_count(&self) -> usize {
        self.gates.iter().filter(|g| !self.is_input_literal(g)).count()
    }

    /// Counted signals (gate outputs except input literals), ascending by net index.
    pub fn signal_universe(&self) -> Vec<NetId> {
        let mut nets: Vec<NetId> = self
            .gates
            .iter()
            .filter(|g| !self.is_input_literal(g))
            .map(|g| g.output)
            .collect();
        nets.sort();
        nets
    }

    /// Primary inputs in the transitive fan-in of `net`, in input declaration order.
    pub fn cone_inputs(&self, net: NetId) -> Vec<NetId> {
        let mut seen = vec![false; self.num_nets()];
        let mut stack = vec![net];
        while let Some(n) = stack.pop() {
            if std::mem::replace(&mut seen[n.index()], true) {
                continue;
            }
            if let Driver::Gate(g) = self.drivers[n.index()] {
                stack.extend(self.gates[g].fanin.iter().copied());
            }
        }
        self.inputs.iter().copied().filter(|n| seen[n.index()]).collect()
    }

    /// Reference single-vector evaluator: returns one value per net.
    pub fn evaluate(&self, vector: &TestVector) -> Result<Vec<bool>> {
        if vector.len() != self.inputs.len() {
            return Err(Error::ArityMismatch {
                expected: self.inputs.len(),
                actual: vector.len(),
            });
        }
        let mut values = vec![false; self.num_nets()];
        for (&net, &bit) in self.inputs.iter().zip(vector.bits()) {
            values[net.index()] = bit;
        }
        for &g in &self.topo {
            let gate = &self.gates[g];
            values[gate.output.index()] = gate.kind.eval(gate.fanin.iter().map(|n| values[n.index()]));
        }
        Ok(values)
    }

    /// Primary output values for one vector.
    pub fn evaluate_outputs(&self, vector: &TestVector) -> Result<Vec<bool>> {
        let values = self.evaluate(vector)?;
        Ok(self.outputs.iter().map(|n| values[n.index()]).collect())
    }

    /// Bit-parallel evaluation: `input_words[i]` packs 64 patterns for input `i`.
    /// Returns one word per net.
    pub fn simulate_words(&self, input_words: &[u64]) -> Result<Vec<u64>> {
        if input_words.len() != self.inputs.len() {
            return Err(Error::ArityMismatch {
                expected: self.inputs.len(),
                actual: input_words.len(),
            });
        }
        let mut values = vec![0u64; self.num_nets()];
        for (&net, &w) in self.inputs.iter().zip(input_words) {
            values[net.index()] = w;
        }
        for &g in &self.topo {
            let gate = &self.gates[g];
            values[gate.output.index()] = gate.kind.eval_words(gate.fanin.iter().map(|n| values[n.index()]));
        }
        Ok(values)
    }

    /// Builder pre-populated with this netlist, for derived designs.
    pub fn to_builder(&self) -> NetlistBuilder {
        let mut b = NetlistBuilder::new(self.name.clone());
        for name in &self.net_names {
            b.intern(name);
        }
        for &i in &self.inputs {
            b.add_input(self.net_name(i));
        }
        for g in &self.gates {
            b.add_gate_ids(g.kind, g.fanin.clone(), g.output);
        }
        for &o in &self.outputs {
            b.add_output(self.net_name(o));
        }
        b
    }
}

/// Incremental netlist constructor. Nets are interned by name on first
/// mention, so gates may reference nets before they are driven.
#[derive(Debug, Clone, Default)]
pub struct NetlistBuilder {
    name: String,
    net_names: Vec<String>,
    by_name: HashMap<String, NetId>,
    inputs: Vec<NetId>,
    outputs: Vec<NetId>,
    gates: Vec<Gate>,
}

impl NetlistBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        NetlistBuilder {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn intern(&mut self, name: &str) -> NetId {
        if let Some(&id) = self.by_name.get(name) {
            return id;
        }
        let id = NetId(self.net_names.len() as u32);
        self.net_names.push(name.to_string());
        self.by_name.insert(name.to_string(), id);
        id
    }

    pub fn contains(&self, name: &str) -> bool {
        self.by_name.contains_key(name)
    }

    pub fn net_name(&self, id: NetId) -> &str {
        &self.net_names[id.index()]
    }

    /// Fresh net name with the given prefix that collides with nothing interned.
    pub fn fresh_name(&self, prefix: &str) -> String {
        let mut k = self.net_names.len();
        loop {
            let candidate = format!("{prefix}{k}");
            if !self.by_name.contains_key(&candidate) {
                return candidate;
            }
            k += 1;
        }
    }

    pub fn rename(&mut self, id: NetId, new_name: &str) -> Result<()> {
        if self.by_name.contains_key(new_name) {
            return Err(Error::InvalidNetlist(format!("net name `{new_name}` already in use")));
        }
        let old = std::mem::replace(&mut self.net_names[id.index()], new_name.to_string());
        self.by_name.remove(&old);
        self.by_name.insert(new_name.to_string(), id);
        Ok(())
    }

    pub fn add_input(&mut self, name: &str) -> NetId {
        let id = self.intern(name);
        self.inputs.push(id);
        id
    }

    pub fn add_output(&mut self, name: &str) -> NetId {
        let id = self.intern(name);
        self.outputs.push(id);
        id
    }

    pub fn set_outputs(&mut self, outputs: Vec<NetId>) {
        self.outputs = outputs;
    }

    pub fn outputs(&self) -> &[NetId] {
        &self.outputs
    }

    pub fn add_gate(&mut self, kind: GateKind, fanin: &[&str], output: &str) -> NetId {
        let fanin = fanin.iter().map(|n| self.intern(n)).collect();
        let output = self.intern(output);
        self.add_gate_ids(kind, fanin, output)
    }

    pub fn add_gate_ids(&mut self, kind: GateKind, fanin: Vec<NetId>, output: NetId) -> NetId {
        self.gates.push(Gate { kind, fanin, output });
        output
    }

    /// Adds a gate driving a freshly named net.
    pub fn add_fresh_gate(&mut self, kind: GateKind, fanin: Vec<NetId>, prefix: &str) -> NetId {
        let name = self.fresh_name(prefix);
        let output = self.intern(&name);
        self.add_gate_ids(kind, fanin, output)
    }

    pub fn finish(self) -> Result<Netlist> {
        let NetlistBuilder {
            name,
            net_names,
            by_name,
            inputs,
            outputs,
            gates,
        } = self;
        let n = net_names.len();
        if inputs.is_empty() {
            return Err(Error::InvalidNetlist("netlist has no primary inputs".into()));
        }
        if outputs.is_empty() {
            return Err(Error::InvalidNetlist("netlist has no primary outputs".into()));
        }
        let mut drivers: Vec<Option<Driver>> = vec![None; n];
        for (i, &net) in inputs.iter().enumerate() {
            if drivers[net.index()].replace(Driver::Input(i)).is_some() {
                return Err(Error::DuplicateDriver(net_names[net.index()].clone()));
            }
        }
        for (g, gate) in gates.iter().enumerate() {
            if !gate.kind.accepts_arity(gate.fanin.len()) {
                return Err(Error::InvalidArity {
                    kind: gate.kind.to_string(),
                    net: net_names[gate.output.index()].clone(),
                    arity: gate.fanin.len(),
                });
            }
            if drivers[gate.output.index()].replace(Driver::Gate(g)).is_some() {
                return Err(Error::DuplicateDriver(net_names[gate.output.index()].clone()));
            }
        }
        let mut seen_out = vec![false; n];
        for &o in &outputs {
            if std::mem::replace(&mut seen_out[o.index()], true) {
                return Err(Error::InvalidNetlist(format!(
                    "duplicate primary output `{}`",
                    net_names[o.index()]
                )));
            }
        }
        let drivers: Vec<Driver> = drivers
            .into_iter()
            .enumerate()
            .map(|(i, d)| d.ok_or_else(|| Error::UndefinedNet(net_names[i].clone())))
            .collect::<Result<_>>()?;

        // Kahn's algorithm over gates.
        let mut pending: Vec<usize> = gates
            .iter()
            .map(|g| g.fanin.iter().filter(|f| matches!(drivers[f.index()], Driver::Gate(_))).count())
            .collect();
        let mut readers: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (g, gate) in gates.iter().enumerate() {
            for f in &gate.fanin {
                if matches!(drivers[f.index()], Driver::Gate(_)) {
                    readers[f.index()].push(g);
                }
            }
        }
        let mut ready: Vec<usize> = (0..gates.len()).filter(|&g| pending[g] == 0).rev().collect();
        let mut topo = Vec::with_capacity(gates.len());
        while let Some(g) = ready.pop() {
            topo.push(g);
            for &r in readers[gates[g].output.index()].iter().rev() {
                pending[r] -= 1;
                if pending[r] == 0 {
                    ready.push(r);
                }
            }
        }
        if topo.len() != gates.len() {
            let stuck = (0..gates.len()).find(|&g| pending[g] > 0).expect("cycle leaves a gate pending");
            return Err(Error::Cycle(net_names[gates[stuck].output.index()].clone()));
        }
        Ok(Netlist {
            name,
            net_names,
            by_name,
            inputs,
            outputs,
            gates,
            drivers,
            topo,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn and2() -> Netlist {
        let mut b = NetlistBuilder::new("and2");
        b.add_input("A");
        b.add_input("B");
        b.add_gate(GateKind::And, &["A", "B"], "Z");
        b.add_output("Z");
        b.finish().unwrap()
    }

    #[test]
    fn evaluate_and() {
        let n = and2();
        let v = n.evaluate(&TestVector::new(vec![true, false])).unwrap();
        assert!(!v[n.net_id("Z").unwrap().index()]);
        let v = n.evaluate(&TestVector::new(vec![true, true])).unwrap();
        assert!(v[n.net_id("Z").unwrap().index()]);
    }

    #[test]
    fn evaluate_rejects_wrong_arity() {
        let n = and2();
        assert!(matches!(
            n.evaluate(&TestVector::new(vec![true])),
            Err(Error::ArityMismatch { expected: 2, actual: 1 })
        ));
    }

    #[test]
    fn xor_of_same_net_is_constant_zero() {
        let mut b = NetlistBuilder::new("x");
        b.add_input("A");
        b.add_gate(GateKind::Xor, &["A", "A"], "Z");
        b.add_output("Z");
        let n = b.finish().unwrap();
        for bit in [false, true] {
            assert_eq!(n.evaluate_outputs(&TestVector::new(vec![bit])).unwrap(), vec![false]);
        }
    }

    #[test]
    fn and_chain_true_only_at_all_ones() {
        let n = parse_bench("INPUT(A)\nINPUT(B)\nINPUT(C)\nOUTPUT(X)\nY = AND(A, B)\nX = AND(Y, C)\n").unwrap();
        for code in 0..8u32 {
            let v = TestVector::from_index(code as u64, 3);
            let out = n.evaluate_outputs(&v).unwrap()[0];
            assert_eq!(out, code == 7);
        }
    }

    #[test]
    fn wire_through_has_zero_gates() {
        let mut b = NetlistBuilder::new("wire");
        b.add_input("A");
        b.add_output("A");
        let n = b.finish().unwrap();
        assert_eq!(n.gate_count(), 0);
        assert!(n.signal_universe().is_empty());
    }

    #[test]
    fn rejects_bad_arity() {
        let mut b = NetlistBuilder::new("bad");
        b.add_input("A");
        b.add_input("B");
        b.add_gate(GateKind::Not, &["A", "B"], "Z");
        b.add_output("Z");
        assert!(matches!(b.finish(), Err(Error::InvalidArity { .. })));
    }

    #[test]
    fn rejects_missing_ports() {
        let mut b = NetlistBuilder::new("no_out");
        b.add_input("A");
        assert!(matches!(b.finish(), Err(Error::InvalidNetlist(_))));
    }

    #[test]
    fn input_literal_is_not_counted() {
        let mut b = NetlistBuilder::new("lit");
        b.add_input("A");
        b.add_input("C");
        b.add_gate(GateKind::Not, &["C"], "C_n");
        b.add_gate(GateKind::And, &["A", "C_n"], "Z");
        b.add_output("Z");
        let n = b.finish().unwrap();
        assert_eq!(n.gate_count(), 1);
        assert_eq!(n.signal_universe(), vec![n.net_id("Z").unwrap()]);
    }

    #[test]
    fn word_eval_matches_scalar_eval() {
        for kind in GateKind::ALL {
            let arity = kind.arity_range().0.max(2).min(kind.arity_range().1);
            for pattern in 0..(1u32 << arity) {
                let bits: Vec<bool> = (0..arity).map(|j| pattern >> (arity - 1 - j) & 1 == 1).collect();
                let words: Vec<u64> = bits.iter().map(|&b| if b { !0 } else { 0 }).collect();
                let scalar = kind.eval(bits.iter().copied());
                assert_eq!(kind.eval_words(words) == !0, scalar, "{kind} {pattern}");
            }
        }
    }
}
