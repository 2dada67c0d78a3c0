//! Truth tables, cubes, and Quine–McCluskey minimization with Petrick's
//! method for the final cover.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::netlist::{NetId, Netlist, TestVector};

/// Widest output cone the optimizer accepts.
pub const MAX_CONE_INPUTS: usize = 12;

/// Residual prime count up to which Petrick's method is used.
pub const PETRICK_LIMIT: usize = 16;

/// Output bits over `inputs`; bit `i` is pattern `i` with the first input
/// as the most significant bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    inputs: Vec<String>,
    bits: Vec<bool>,
}

impl TruthTable {
    pub fn new(inputs: Vec<String>, bits: Vec<bool>) -> Result<Self> {
        if inputs.len() > MAX_CONE_INPUTS {
            return Err(Error::Capacity {
                what: "truth-table inputs",
                actual: inputs.len(),
                limit: MAX_CONE_INPUTS,
            });
        }
        if bits.len() != 1 << inputs.len() {
            return Err(Error::InvalidArgument(format!(
                "truth table over {} inputs needs {} bits, got {}",
                inputs.len(),
                1usize << inputs.len(),
                bits.len()
            )));
        }
        Ok(TruthTable { inputs, bits })
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn width(&self) -> usize {
        self.inputs.len()
    }

    pub fn on_set(&self) -> Vec<u32> {
        (0..self.bits.len() as u32).filter(|&m| self.bits[m as usize]).collect()
    }

    pub fn to_bitstring(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// Exhaustive table of `output` over the primary inputs in its cone.
/// Inputs outside the cone are held at 0.
pub fn cone_truth_table(netlist: &Netlist, output: NetId) -> Result<TruthTable> {
    let cone = netlist.cone_inputs(output);
    if cone.len() > MAX_CONE_INPUTS {
        return Err(Error::Capacity {
            what: "output cone inputs",
            actual: cone.len(),
            limit: MAX_CONE_INPUTS,
        });
    }
    let positions: Vec<usize> = cone
        .iter()
        .map(|n| netlist.inputs().iter().position(|i| i == n).expect("cone input is a primary input"))
        .collect();
    let k = cone.len();
    let mut bits = Vec::with_capacity(1 << k);
    for code in 0..1u64 << k {
        let mut v = vec![false; netlist.inputs().len()];
        for (j, &p) in positions.iter().enumerate() {
            v[p] = code >> (k - 1 - j) & 1 == 1;
        }
        bits.push(netlist.evaluate(&TestVector::new(v))?[output.index()]);
    }
    TruthTable::new(cone.iter().map(|&n| netlist.net_name(n).to_string()).collect(), bits)
}

/// Product term over a table's inputs. Bit `w-1-j` of `care`/`value`
/// refers to input `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cube {
    pub care: u32,
    pub value: u32,
}

impl Cube {
    pub fn covers(&self, minterm: u32) -> bool {
        minterm & self.care == self.value
    }

    pub fn literal_count(&self) -> u32 {
        self.care.count_ones()
    }

    /// `(input index, polarity)` pairs in input order.
    pub fn literals(&self, width: usize) -> Vec<(usize, bool)> {
        (0..width)
            .filter_map(|j| {
                let bit = 1u32 << (width - 1 - j);
                (self.care & bit != 0).then_some((j, self.value & bit != 0))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    pub inputs: Vec<String>,
    pub cubes: Vec<Cube>,
}

impl Cover {
    pub fn width(&self) -> usize {
        self.inputs.len()
    }

    pub fn eval(&self, minterm: u32) -> bool {
        self.cubes.iter().any(|c| c.covers(minterm))
    }

    /// True when the cover reproduces the table exactly.
    pub fn implements(&self, tt: &TruthTable) -> bool {
        self.inputs == tt.inputs && (0..tt.bits.len() as u32).all(|m| self.eval(m) == tt.bits[m as usize])
    }

    pub fn cube_literals(&self) -> Vec<Vec<(usize, bool)>> {
        self.cubes.iter().map(|c| c.literals(self.width())).collect()
    }
}

impl fmt::Display for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cubes.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .cube_literals()
            .iter()
            .map(|lits| {
                if lits.is_empty() {
                    return "1".to_string();
                }
                lits.iter()
                    .map(|&(j, pos)| format!("{}{}", if pos { "" } else { "!" }, self.inputs[j]))
                    .collect::<Vec<_>>()
                    .join("")
            })
            .collect();
        f.write_str(&terms.join("+"))
    }
}

/// All prime implicants of the on-set by iterated pairwise combination.
pub fn prime_implicants(width: usize, on_set: &[u32]) -> Vec<Cube> {
    let full = if width == 0 { 0 } else { u32::MAX >> (32 - width) };
    // (value, dash) with value bits cleared under dash
    let mut level: BTreeSet<(u32, u32)> = on_set.iter().map(|&m| (m, 0)).collect();
    let mut primes: Vec<Cube> = Vec::new();
    while !level.is_empty() {
        let items: Vec<(u32, u32)> = level.iter().copied().collect();
        let lookup: HashSet<(u32, u32)> = items.iter().copied().collect();
        let mut combined: HashSet<(u32, u32)> = HashSet::new();
        let mut next = BTreeSet::new();
        for &(v, d) in &items {
            for bit in 0..width {
                let b = 1u32 << bit;
                if d & b != 0 || v & b != 0 {
                    continue;
                }
                let partner = (v | b, d);
                if lookup.contains(&partner) {
                    combined.insert((v, d));
                    combined.insert(partner);
                    next.insert((v, d | b));
                }
            }
        }
        for &(v, d) in &items {
            if !combined.contains(&(v, d)) {
                primes.push(Cube {
                    care: full & !d,
                    value: v,
                });
            }
        }
        level = next;
    }
    sort_cubes(&mut primes, width);
    primes
}

/// Deterministic order: by literal sequence in input order.
fn sort_cubes(cubes: &mut [Cube], width: usize) {
    cubes.sort_by_key(|c| c.literals(width).into_iter().map(|(j, p)| (j, !p)).collect::<Vec<_>>());
}

/// Two-level minimization: prime implicants, essential primes, then an
/// exact minimum residual cover (Petrick) or greedy set cover.
pub fn qm_minimize(tt: &TruthTable) -> Cover {
    let width = tt.width();
    let on = tt.on_set();
    let primes = prime_implicants(width, &on);
    let mut chosen: Vec<usize> = Vec::new();
    for &m in &on {
        let mut covering = (0..primes.len()).filter(|&p| primes[p].covers(m));
        if let (Some(only), None) = (covering.next(), covering.next()) {
            if !chosen.contains(&only) {
                chosen.push(only);
            }
        }
    }
    let residual_terms: Vec<u32> = on
        .iter()
        .copied()
        .filter(|&m| !chosen.iter().any(|&p| primes[p].covers(m)))
        .collect();
    if !residual_terms.is_empty() {
        let candidates: Vec<usize> = (0..primes.len()).filter(|p| !chosen.contains(p)).collect();
        let extra = if candidates.len() <= PETRICK_LIMIT {
            petrick(&primes, &candidates, &residual_terms)
        } else {
            greedy_cover(&primes, &candidates, &residual_terms)
        };
        chosen.extend(extra);
    }
    let mut cubes: Vec<Cube> = chosen.into_iter().map(|p| primes[p]).collect();
    sort_cubes(&mut cubes, width);
    Cover {
        inputs: tt.inputs.clone(),
        cubes,
    }
}

/// Expands the product of per-minterm prime sums with absorption and
/// returns the cheapest product (fewest cubes, then fewest literals).
fn petrick(primes: &[Cube], candidates: &[usize], minterms: &[u32]) -> Vec<usize> {
    let mut products: Vec<u32> = vec![0];
    for &m in minterms {
        let clause: Vec<u32> = candidates
            .iter()
            .enumerate()
            .filter(|(_, &p)| primes[p].covers(m))
            .map(|(i, _)| 1u32 << i)
            .collect();
        let mut next: BTreeSet<u32> = BTreeSet::new();
        for &p in &products {
            if clause.iter().any(|&c| p & c != 0) {
                next.insert(p);
            } else {
                next.extend(clause.iter().map(|&c| p | c));
            }
        }
        products = absorb(next.into_iter().collect());
    }
    let cost = |mask: u32| -> (u32, u32, u32) {
        let lits = (0..candidates.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| primes[candidates[i]].literal_count())
            .sum();
        (mask.count_ones(), lits, mask.reverse_bits())
    };
    let best = products.into_iter().min_by_key(|&m| cost(m)).expect("on-set is covered by its primes");
    (0..candidates.len()).filter(|i| best >> i & 1 == 1).map(|i| candidates[i]).collect()
}

/// Drops every product that is a superset of another.
fn absorb(mut products: Vec<u32>) -> Vec<u32> {
    products.sort_by_key(|p| (p.count_ones(), *p));
    let mut kept: Vec<u32> = Vec::with_capacity(products.len());
    for p in products {
        if !kept.iter().any(|&k| k & !p == 0) {
            kept.push(p);
        }
    }
    kept
}

fn greedy_cover(primes: &[Cube], candidates: &[usize], minterms: &[u32]) -> Vec<usize> {
    let mut left: Vec<u32> = minterms.to_vec();
    let mut picked = Vec::new();
    while !left.is_empty() {
        let &best = candidates
            .iter()
            .filter(|p| !picked.contains(*p))
            .max_by_key(|&&p| {
                let gain = left.iter().filter(|&&m| primes[p].covers(m)).count();
                (gain, std::cmp::Reverse(primes[p].literal_count()), std::cmp::Reverse(p))
            })
            .expect("residual minterms are covered by some prime");
        left.retain(|&m| !primes[best].covers(m));
        picked.push(best);
    }
    picked
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_expr;

    fn table(expr: &str) -> TruthTable {
        let n = parse_expr("X", expr).unwrap();
        cone_truth_table(&n, n.net_id("X").unwrap()).unwrap()
    }

    #[test]
    fn and_table() {
        assert_eq!(table("AB").to_bitstring(), "0001");
    }

    #[test]
    fn reconvergent_example_on_set() {
        assert_eq!(table("(CB+A!C)A+DA").on_set().len(), 7);
    }

    #[test]
    fn constant_cone() {
        let n = crate::netlist::parse_bench("INPUT(A)\nOUTPUT(Z)\nZ = XOR(A, A)\n").unwrap();
        let tt = cone_truth_table(&n, n.net_id("Z").unwrap()).unwrap();
        assert_eq!(tt.to_bitstring(), "00");
        assert!(qm_minimize(&tt).cubes.is_empty());
    }

    #[test]
    fn cone_too_wide() {
        let n = parse_expr("X", "ABCDEFGHIJKLM").unwrap();
        assert!(matches!(
            cone_truth_table(&n, n.net_id("X").unwrap()),
            Err(Error::Capacity { actual: 13, .. })
        ));
    }

    #[test]
    fn minimize_examples() {
        assert_eq!(qm_minimize(&table("AB+BC(B+C)")).to_string(), "AB+BC");
        assert_eq!(qm_minimize(&table("AC+A!B!C+ABC")).to_string(), "A!B+AC");
        assert_eq!(qm_minimize(&table("(CB+A!C)A+DA")).to_string(), "AB+A!C+AD");
        assert_eq!(qm_minimize(&table("ADC+ABD")).to_string(), "ABD+ACD");
    }

    #[test]
    fn tautology_is_single_empty_cube() {
        let tt = TruthTable::new(vec!["A".into(), "B".into()], vec![true; 4]).unwrap();
        let c = qm_minimize(&tt);
        assert_eq!(c.cubes, vec![Cube { care: 0, value: 0 }]);
        assert_eq!(c.to_string(), "1");
    }

    #[test]
    fn cyclic_core_uses_petrick() {
        // f = sum m(0,1,2,5,6,7): no essential primes, minimum is 3 cubes.
        let bits = (0..8).map(|m| [0, 1, 2, 5, 6, 7].contains(&m)).collect();
        let tt = TruthTable::new(vec!["A".into(), "B".into(), "C".into()], bits).unwrap();
        let c = qm_minimize(&tt);
        assert!(c.implements(&tt));
        assert_eq!(c.cubes.len(), 3);
        assert_eq!(prime_implicants(3, &tt.on_set()).len(), 6);
    }

    #[test]
    fn table_size_validated() {
        assert!(TruthTable::new(vec!["A".into()], vec![true]).is_err());
    }

    #[test]
    fn greedy_matches_on_small_instance() {
        let primes = vec![
            Cube { care: 0b110, value: 0b000 },
            Cube { care: 0b011, value: 0b001 },
            Cube { care: 0b101, value: 0b101 },
        ];
        let picked = greedy_cover(&primes, &[0, 1, 2], &[0, 1, 5]);
        let minterms_covered = [0u32, 1, 5].iter().all(|&m| picked.iter().any(|&p| primes[p].covers(m)));
        assert!(minterms_covered);
    }
}
