//! Logic probabilities, rareness, and the design-level rareness metrics.
//!
//! Three estimators produce a [`RarenessReport`]:
//!
//! * [`propagate_itm`]: per gate, the Kronecker product of the fan-in
//!   probability vectors times the gate's transfer matrix. Fan-ins are
//!   assumed independent, so reconvergent fan-out gives approximate values.
//! * [`exact_probabilities`]: exhaustive enumeration (≤ 24 inputs).
//! * [`simulate_rareness`]: frequencies over seeded random vectors.
//!
//! The counted signal universe is every gate output except complemented
//! input literals (see [`Netlist::signal_universe`]).

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netlist::{lane_mask, GateKind, NetId, Netlist, VectorStream};

const PROB_TOLERANCE: f64 = 1e-12;

/// Largest input count accepted by [`exact_probabilities`].
pub const MAX_EXACT_INPUTS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityVector {
    p0: f64,
    p1: f64,
}

impl ProbabilityVector {
    pub const UNIFORM: ProbabilityVector = ProbabilityVector { p0: 0.5, p1: 0.5 };

    pub fn new(p0: f64, p1: f64) -> Result<Self> {
        if !(p0 >= 0.0 && p1 >= 0.0 && (p0 + p1 - 1.0).abs() <= PROB_TOLERANCE) {
            return Err(Error::InvalidProbability { p0, p1 });
        }
        Ok(ProbabilityVector { p0, p1 })
    }

    /// Vector with `P(1) = p1`.
    pub fn from_p1(p1: f64) -> Result<Self> {
        Self::new(1.0 - p1, p1)
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn prob(&self, bit: bool) -> f64 {
        if bit {
            self.p1
        } else {
            self.p0
        }
    }

    pub fn rareness(&self) -> f64 {
        rareness_of(self)
    }

    /// The less probable value; ties resolve to 1.
    pub fn rare_value(&self) -> bool {
        self.p1 <= self.p0
    }
}

pub fn rareness_of(pv: &ProbabilityVector) -> f64 {
    pv.p0.min(pv.p1)
}

/// One-hot truth table of a gate: row `i` is the output distribution for
/// input pattern `i`, first fan-in as the most significant bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferMatrix {
    kind: GateKind,
    arity: usize,
    rows: Vec<[u8; 2]>,
}

impl TransferMatrix {
    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn rows(&self) -> &[[u8; 2]] {
        &self.rows
    }

    /// Column sums of `diag(kron) × ITM`.
    pub fn apply(&self, kron: &[f64]) -> (f64, f64) {
        debug_assert_eq!(kron.len(), self.rows.len());
        kron.iter().zip(&self.rows).fold((0.0, 0.0), |(z, o), (&w, row)| {
            (z + w * row[0] as f64, o + w * row[1] as f64)
        })
    }
}

pub fn itm(kind: GateKind, arity: usize) -> Result<TransferMatrix> {
    if !kind.accepts_arity(arity) {
        return Err(Error::InvalidArity {
            kind: kind.to_string(),
            net: String::new(),
            arity,
        });
    }
    let rows = (0..1usize << arity)
        .map(|i| {
            let out = kind.eval((0..arity).map(|j| i >> (arity - 1 - j) & 1 == 1));
            if out {
                [0, 1]
            } else {
                [1, 0]
            }
        })
        .collect();
    Ok(TransferMatrix { kind, arity, rows })
}

/// Diagonal of `P(x_1) ⊗ P(x_2) ⊗ ... ⊗ P(x_k)`, first factor most significant.
pub fn kronecker_diagonal(vectors: &[ProbabilityVector]) -> Vec<f64> {
    let mut acc = vec![1.0];
    for pv in vectors {
        acc = acc.iter().flat_map(|&x| [x * pv.p0, x * pv.p1]).collect();
    }
    acc
}

/// Transfer-matrix propagation under uniform inputs.
pub fn propagate_itm_uniform(netlist: &Netlist) -> Vec<ProbabilityVector> {
    let probs = netlist.inputs().iter().map(|&i| (i, ProbabilityVector::UNIFORM)).collect();
    propagate_itm(netlist, &probs).expect("uniform probabilities cover every input")
}

/// Probability vector of every net, indexed by [`NetId`].
pub fn propagate_itm(
    netlist: &Netlist,
    input_probs: &HashMap<NetId, ProbabilityVector>,
) -> Result<Vec<ProbabilityVector>> {
    let mut probs = vec![ProbabilityVector::UNIFORM; netlist.num_nets()];
    for &i in netlist.inputs() {
        probs[i.index()] = *input_probs
            .get(&i)
            .ok_or_else(|| Error::MissingProbability(netlist.net_name(i).to_string()))?;
    }
    let mut cache: HashMap<(GateKind, usize), TransferMatrix> = HashMap::new();
    for &g in netlist.topo_order() {
        let gate = &netlist.gates()[g];
        let k = gate.fanin.len();
        let m = match cache.entry((gate.kind, k)) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => e.insert(itm(gate.kind, k)?),
        };
        let fanin: Vec<ProbabilityVector> = gate.fanin.iter().map(|n| probs[n.index()]).collect();
        let (p0, p1) = m.apply(&kronecker_diagonal(&fanin));
        // renormalize away accumulated rounding
        let total = p0 + p1;
        probs[gate.output.index()] = ProbabilityVector {
            p0: p0 / total,
            p1: p1 / total,
        };
    }
    Ok(probs)
}

/// Per-net count of input vectors driving the net to 1, by enumeration.
pub fn exact_one_counts(netlist: &Netlist) -> Result<Vec<u64>> {
    let k = netlist.inputs().len();
    if k > MAX_EXACT_INPUTS {
        return Err(Error::Capacity {
            what: "primary inputs for exact enumeration",
            actual: k,
            limit: MAX_EXACT_INPUTS,
        });
    }
    let total: u64 = 1 << k;
    let mut counts = vec![0u64; netlist.num_nets()];
    let mut words = vec![0u64; k];
    // Input i is bit (k-1-i) of the pattern index; pattern = block*64 + lane.
    let low = k.min(6);
    let blocks = total.div_ceil(64);
    for block in 0..blocks {
        let lanes = (total - block * 64).min(64) as usize;
        for (i, word) in words.iter_mut().enumerate() {
            let bit = k - 1 - i;
            *word = if bit < low {
                pattern_word(bit)
            } else if (block * 64) >> bit & 1 == 1 {
                !0
            } else {
                0
            };
        }
        let values = netlist.simulate_words(&words)?;
        let mask = lane_mask(lanes);
        for (c, v) in counts.iter_mut().zip(&values) {
            *c += (v & mask).count_ones() as u64;
        }
    }
    Ok(counts)
}

/// Word whose lane `j` holds bit `bit` of `j`.
fn pattern_word(bit: usize) -> u64 {
    (0..64u64).filter(|j| j >> bit & 1 == 1).fold(0, |acc, j| acc | 1 << j)
}

pub fn exact_probabilities(netlist: &Netlist) -> Result<Vec<ProbabilityVector>> {
    let total = (1u64 << netlist.inputs().len()) as f64;
    Ok(exact_one_counts(netlist)?
        .into_iter()
        .map(|ones| {
            let p1 = ones as f64 / total;
            ProbabilityVector { p0: 1.0 - p1, p1 }
        })
        .collect())
}

/// Per-net count of ones over the first `n_vectors` vectors of the seeded
/// [`VectorStream`].
pub fn simulate_one_counts(netlist: &Netlist, n_vectors: usize, seed: u64) -> Result<Vec<u64>> {
    let mut stream = VectorStream::new(netlist.inputs().len(), seed);
    let mut counts = vec![0u64; netlist.num_nets()];
    let mut remaining = n_vectors;
    while remaining > 0 {
        let block = stream.next_block();
        let lanes = remaining.min(64);
        let values = netlist.simulate_words(&block)?;
        let mask = lane_mask(lanes);
        for (c, v) in counts.iter_mut().zip(&values) {
            *c += (v & mask).count_ones() as u64;
        }
        remaining -= lanes;
    }
    Ok(counts)
}

pub fn simulate_rareness(netlist: &Netlist, n_vectors: usize, seed: u64) -> Result<RarenessReport> {
    if n_vectors == 0 {
        return Err(Error::InvalidArgument("simulation needs at least one vector".into()));
    }
    let counts = simulate_one_counts(netlist, n_vectors, seed)?;
    let n = n_vectors as u64;
    let probs = counts
        .iter()
        .map(|&ones| ProbabilityVector {
            p0: (n - ones) as f64 / n as f64,
            p1: ones as f64 / n as f64,
        })
        .collect();
    // rare value from integer counts so float rounding cannot flip a tie
    let rare = counts.iter().map(|&ones| 2 * ones <= n).collect();
    let mut report = RarenessReport::from_probabilities(netlist, Method::Simulation, probs);
    report.rare_values = rare;
    report.seed = Some(seed);
    report.vectors = Some(n_vectors);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Itm,
    Exact,
    Simulation,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "itm" => Ok(Method::Itm),
            "exact" => Ok(Method::Exact),
            "sim" | "simulation" => Ok(Method::Simulation),
            _ => Err(Error::InvalidArgument(format!("unknown method `{s}`"))),
        }
    }
}

/// How many of the rarest signals to average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TopN {
    All,
    N(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RarenessReport {
    pub method: Method,
    pub seed: Option<u64>,
    pub vectors: Option<usize>,
    probabilities: Vec<ProbabilityVector>,
    rare_values: Vec<bool>,
    universe: Vec<NetId>,
}

impl RarenessReport {
    pub fn from_probabilities(netlist: &Netlist, method: Method, probabilities: Vec<ProbabilityVector>) -> Self {
        let rare_values = probabilities.iter().map(ProbabilityVector::rare_value).collect();
        RarenessReport {
            method,
            seed: None,
            vectors: None,
            probabilities,
            rare_values,
            universe: netlist.signal_universe(),
        }
    }

    pub fn itm(netlist: &Netlist) -> Self {
        Self::from_probabilities(netlist, Method::Itm, propagate_itm_uniform(netlist))
    }

    pub fn exact(netlist: &Netlist) -> Result<Self> {
        Ok(Self::from_probabilities(netlist, Method::Exact, exact_probabilities(netlist)?))
    }

    pub fn compute(netlist: &Netlist, method: Method, vectors: usize, seed: u64) -> Result<Self> {
        match method {
            Method::Itm => Ok(Self::itm(netlist)),
            Method::Exact => Self::exact(netlist),
            Method::Simulation => simulate_rareness(netlist, vectors, seed),
        }
    }

    pub fn universe(&self) -> &[NetId] {
        &self.universe
    }

    pub fn probability(&self, net: NetId) -> ProbabilityVector {
        self.probabilities[net.index()]
    }

    pub fn probabilities(&self) -> &[ProbabilityVector] {
        &self.probabilities
    }

    pub fn omega(&self, net: NetId) -> f64 {
        self.probabilities[net.index()].rareness()
    }

    pub fn rare_value(&self, net: NetId) -> bool {
        self.rare_values[net.index()]
    }

    /// Universe signals sorted by ascending rareness, ties by net index.
    pub fn ranked(&self) -> Vec<(NetId, f64)> {
        let mut v: Vec<(NetId, f64)> = self.universe.iter().map(|&n| (n, self.omega(n))).collect();
        v.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        v
    }

    pub fn rarest(&self) -> Result<f64> {
        self.universe
            .iter()
            .map(|&n| self.omega(n))
            .min_by(f64::total_cmp)
            .ok_or(Error::EmptyUniverse)
    }

    pub fn avg_rareness(&self, n: TopN) -> Result<f64> {
        let ranked = self.ranked();
        if ranked.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        let n = match n {
            TopN::All => ranked.len(),
            TopN::N(0) => return Err(Error::InvalidArgument("average over zero signals".into())),
            TopN::N(n) if n > ranked.len() => {
                return Err(Error::InvalidArgument(format!(
                    "cannot average {n} signals out of {}",
                    ranked.len()
                )))
            }
            TopN::N(n) => n,
        };
        Ok(ranked[..n].iter().map(|&(_, w)| w).sum::<f64>() / n as f64)
    }

    pub fn count_below(&self, tau: f64, strict: bool) -> usize {
        self.universe
            .iter()
            .filter(|&&n| {
                let w = self.omega(n);
                if strict {
                    w < tau
                } else {
                    w <= tau
                }
            })
            .count()
    }

    /// The three design metrics for the given settings.
    pub fn metrics(&self, settings: &MetricSettings) -> Result<Metrics> {
        let top_n = settings.top_n.min(self.universe.len()).max(1);
        Ok(Metrics {
            omega_min: self.rarest()?,
            mu_all: self.avg_rareness(TopN::All)?,
            top_n,
            mu_top_n: self.avg_rareness(TopN::N(top_n))?,
            rho: Rho {
                tau: settings.tau,
                strict: settings.strict,
                count: self.count_below(settings.tau, settings.strict),
            },
        })
    }

    pub fn to_json(&self, netlist: &Netlist, settings: &MetricSettings, decimals: Option<u32>) -> Result<ReportJson> {
        let t = |x: f64| decimals.map_or(x, |d| truncate(x, d));
        let signals = self
            .universe
            .iter()
            .map(|&n| {
                let pv = self.probability(n);
                SignalJson {
                    net: netlist.net_name(n).to_string(),
                    p0: t(pv.p0),
                    p1: t(pv.p1),
                    omega: t(pv.rareness()),
                    rare_value: self.rare_value(n) as u8,
                }
            })
            .collect();
        let m = self.metrics(settings)?;
        Ok(ReportJson {
            design: netlist.name().to_string(),
            method: self.method,
            seed: self.seed,
            vectors: self.vectors,
            signals,
            metrics: MetricsJson {
                omega_min: t(m.omega_min),
                mu_all: t(m.mu_all),
                top_n: m.top_n,
                mu_top_n: t(m.mu_top_n),
                rho: m.rho,
            },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSettings {
    pub tau: f64,
    pub strict: bool,
    pub top_n: usize,
}

impl Default for MetricSettings {
    fn default() -> Self {
        MetricSettings {
            tau: 0.2,
            strict: true,
            top_n: 100,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rho {
    pub tau: f64,
    pub strict: bool,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub omega_min: f64,
    pub mu_all: f64,
    pub top_n: usize,
    #[serde(rename = "mu_topN")]
    pub mu_top_n: f64,
    pub rho: Rho,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignalJson {
    pub net: String,
    pub p0: f64,
    pub p1: f64,
    pub omega: f64,
    pub rare_value: u8,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricsJson {
    pub omega_min: f64,
    pub mu_all: f64,
    pub top_n: usize,
    #[serde(rename = "mu_topN")]
    pub mu_top_n: f64,
    pub rho: Rho,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportJson {
    pub design: String,
    pub method: Method,
    pub seed: Option<u64>,
    pub vectors: Option<usize>,
    pub signals: Vec<SignalJson>,
    pub metrics: MetricsJson,
}

/// Truncates toward zero at `decimals` places (0.21875 -> 0.2187 at 4).
pub fn truncate(x: f64, decimals: u32) -> f64 {
    if x < 0.0 {
        return -truncate(-x, decimals);
    }
    let scale = 10f64.powi(decimals as i32);
    // nudge so values like 0.3 stored as 0.29999... do not lose a digit
    (x * scale + 1e-9).floor() / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{parse_bench, parse_expr, NetlistBuilder};

    fn pv(p0: f64, p1: f64) -> ProbabilityVector {
        ProbabilityVector::new(p0, p1).unwrap()
    }

    #[test]
    fn transfer_matrices() {
        assert_eq!(itm(GateKind::And, 2).unwrap().rows(), &[[1, 0], [1, 0], [1, 0], [0, 1]]);
        assert_eq!(itm(GateKind::Or, 2).unwrap().rows(), &[[1, 0], [0, 1], [0, 1], [0, 1]]);
        assert_eq!(itm(GateKind::Not, 1).unwrap().rows(), &[[0, 1], [1, 0]]);
        assert_eq!(itm(GateKind::Xor, 2).unwrap().rows(), &[[1, 0], [0, 1], [0, 1], [1, 0]]);
        assert!(itm(GateKind::Xor, 3).is_err());
        assert!(itm(GateKind::And, 17).is_err());
        for kind in GateKind::ALL {
            let (lo, hi) = kind.arity_range();
            for k in lo..=hi.min(5) {
                for row in itm(kind, k).unwrap().rows() {
                    assert_eq!(row[0] + row[1], 1);
                }
            }
        }
    }

    #[test]
    fn rareness_examples() {
        assert_eq!(rareness_of(&pv(0.9, 0.1)), 0.1);
        assert_eq!(rareness_of(&pv(0.5, 0.5)), 0.5);
        assert_eq!(rareness_of(&pv(0.75, 0.25)), 0.25);
        assert!(ProbabilityVector::new(0.6, 0.6).is_err());
        assert!(ProbabilityVector::new(-0.1, 1.1).is_err());
    }

    #[test]
    fn and_gate_uniform() {
        let n = parse_expr("Z", "AB").unwrap();
        let p = propagate_itm_uniform(&n)[n.net_id("Z").unwrap().index()];
        assert!((p.p0() - 0.75).abs() < 1e-12 && (p.p1() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn missing_input_probability() {
        let n = parse_expr("Z", "AB").unwrap();
        let probs = HashMap::from([(n.inputs()[0], ProbabilityVector::UNIFORM)]);
        assert_eq!(propagate_itm(&n, &probs), Err(Error::MissingProbability("B".into())));
    }

    #[test]
    fn nonuniform_inputs() {
        let n = parse_expr("Z", "A+B").unwrap();
        let probs = HashMap::from([(n.inputs()[0], pv(0.9, 0.1)), (n.inputs()[1], pv(0.8, 0.2))]);
        let z = propagate_itm(&n, &probs).unwrap()[n.net_id("Z").unwrap().index()];
        assert!((z.p0() - 0.72).abs() < 1e-12);
    }

    #[test]
    fn aliased_fanin_exposes_independence_assumption() {
        let mut b = NetlistBuilder::new("alias");
        b.add_input("A");
        b.add_gate(GateKind::And, &["A", "A"], "Z");
        b.add_output("Z");
        let n = b.finish().unwrap();
        let z = n.net_id("Z").unwrap().index();
        assert_eq!(exact_probabilities(&n).unwrap()[z].p1(), 0.5);
        assert_eq!(propagate_itm_uniform(&n)[z].p1(), 0.25);
    }

    #[test]
    fn exact_on_reconvergent_circuit() {
        let n = parse_expr("X", "(CB+A!C)A+DA").unwrap();
        let x = n.net_id("X").unwrap().index();
        assert_eq!(exact_probabilities(&n).unwrap()[x].p1(), 7.0 / 16.0);
        assert_eq!(propagate_itm_uniform(&n)[x].p1(), 0.4140625);
    }

    #[test]
    fn exact_counts_on_wide_circuit() {
        // 8 inputs exercises both the in-word and across-block pattern bits.
        let n = parse_expr("X", "ABCDEFGH").unwrap();
        let counts = exact_one_counts(&n).unwrap();
        assert_eq!(counts[n.net_id("X").unwrap().index()], 1);
        assert_eq!(counts[n.net_id("A").unwrap().index()], 128);
        assert_eq!(counts[n.net_id("H").unwrap().index()], 128);
    }

    #[test]
    fn exact_rejects_too_many_inputs() {
        let n = crate::netlist::gen_adder(crate::netlist::AdderArch::RippleCarry, 12).unwrap();
        assert!(matches!(exact_probabilities(&n), Err(Error::Capacity { actual: 25, .. })));
    }

    #[test]
    fn simulation_of_constant_net() {
        let n = parse_bench("INPUT(A)\nOUTPUT(Z)\nZ = XOR(A, A)\n").unwrap();
        for seed in [0, 1, 99] {
            let r = simulate_rareness(&n, 500, seed).unwrap();
            assert_eq!(r.omega(n.net_id("Z").unwrap()), 0.0);
            assert!(r.rare_value(n.net_id("Z").unwrap()));
        }
    }

    #[test]
    fn simulation_is_deterministic_and_close() {
        let n = parse_expr("X", "ABC").unwrap();
        let x = n.net_id("X").unwrap();
        let mut within = 0;
        for seed in 0..100 {
            let a = simulate_rareness(&n, 10_000, seed).unwrap();
            assert_eq!(a, simulate_rareness(&n, 10_000, seed).unwrap());
            // 3 sigma of the binomial is 0.0099; 5 sigma never trips in practice
            assert!((a.omega(x) - 0.125).abs() <= 0.0166, "seed {seed}: {}", a.omega(x));
            within += ((a.omega(x) - 0.125).abs() <= 0.01) as usize;
        }
        assert!(within >= 97, "{within}/100 within 0.01");
        assert!(simulate_rareness(&n, 0, 1).is_err());
    }

    #[test]
    fn simulation_matches_scalar_evaluation() {
        let n = parse_bench(
            "INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(z)\nx = NAND(a, b)\ny = XOR(x, c)\nz = NOR(y, a, b)\n",
        )
        .unwrap();
        let nv = 333;
        let counts = simulate_one_counts(&n, nv, 17).unwrap();
        let mut expected = vec![0u64; n.num_nets()];
        for v in crate::netlist::random_vectors(3, nv, 17) {
            for (c, bit) in expected.iter_mut().zip(n.evaluate(&v).unwrap()) {
                *c += bit as u64;
            }
        }
        assert_eq!(counts, expected);
    }

    #[test]
    fn metric_examples() {
        let n = parse_expr("X", "AB+C").unwrap();
        let r = RarenessReport::itm(&n);
        assert_eq!(r.avg_rareness(TopN::N(1)).unwrap(), r.rarest().unwrap());
        assert!(r.avg_rareness(TopN::N(0)).is_err());
        assert!(r.avg_rareness(TopN::N(3)).is_err());
        assert_eq!(r.count_below(0.0, true), 0);
        assert_eq!(r.count_below(0.0, false), 0);
        assert_eq!(r.count_below(0.25, true), 0);
        assert_eq!(r.count_below(0.25, false), 1);
    }

    #[test]
    fn empty_universe() {
        let n = parse_bench("INPUT(A)\nOUTPUT(A)\n").unwrap();
        let r = RarenessReport::itm(&n);
        assert_eq!(r.rarest(), Err(Error::EmptyUniverse));
    }

    #[test]
    fn two_signal_minimum() {
        // two signals at 0.1 and 0.05
        let mut b = NetlistBuilder::new("two");
        b.add_input("A");
        b.add_gate(GateKind::Buf, &["A"], "S");
        b.add_gate(GateKind::Buf, &["A"], "T");
        b.add_output("S");
        b.add_output("T");
        let n = b.finish().unwrap();
        let mut probs = vec![ProbabilityVector::UNIFORM; n.num_nets()];
        probs[n.net_id("S").unwrap().index()] = pv(0.9, 0.1);
        probs[n.net_id("T").unwrap().index()] = pv(0.05, 0.95);
        let r = RarenessReport::from_probabilities(&n, Method::Itm, probs);
        assert_eq!(r.rarest().unwrap(), 0.05);
        assert!(!r.rare_value(n.net_id("T").unwrap()));
    }

    #[test]
    fn truncation() {
        assert_eq!(truncate(0.21875, 4), 0.2187);
        assert_eq!(truncate(0.3033854166, 4), 0.3033);
        assert_eq!(truncate(0.321875, 4), 0.3218);
        assert_eq!(truncate(0.3, 2), 0.3);
        assert_eq!(truncate(0.1875, 2), 0.18);
    }

    #[test]
    fn json_shape() {
        let n = parse_expr("X", "AB").unwrap();
        let r = RarenessReport::itm(&n);
        let v = serde_json::to_value(r.to_json(&n, &MetricSettings::default(), Some(4)).unwrap()).unwrap();
        assert_eq!(v["method"], "itm");
        assert_eq!(v["signals"][0]["net"], "X");
        assert_eq!(v["signals"][0]["omega"], 0.25);
        assert_eq!(v["signals"][0]["rare_value"], 1);
        assert_eq!(v["metrics"]["rho"]["count"], 0);
        assert!(v["metrics"].get("mu_topN").is_some());
    }
}
