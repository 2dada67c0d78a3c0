//! Trojan-detection test generation: statistical N-detect with bit-flip
//! improvement, and SAT-based activation of cliques of compatible rare
//! nodes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netlist::{lane_mask, pack_vectors, random_vectors, NetId, Netlist, TestVector};
use crate::rareness::{simulate_rareness, RarenessReport};
use crate::sat::{Assignability, SatOracle};

pub const DEFAULT_TAU: f64 = 0.2;
pub const DEFAULT_N_DETECT: usize = 1000;
pub const DEFAULT_RANDOM_POOL: usize = 10_000;

/// A net together with its rare value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RareNode {
    pub net: NetId,
    pub value: bool,
    pub omega: f64,
}

/// Universe signals with ω strictly below `tau`, in net-index order.
pub fn rare_nodes(report: &RarenessReport, tau: f64) -> Vec<RareNode> {
    report
        .universe()
        .iter()
        .filter(|&&n| report.omega(n) < tau)
        .map(|&n| RareNode {
            net: n,
            value: report.rare_value(n),
            omega: report.omega(n),
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub algorithm: String,
    pub tau: f64,
    pub seed: u64,
    pub random_pool: usize,
    pub rare_nodes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_detect: Option<usize>,
    /// Rare nodes left below their quota.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unmet: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cliques: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split_cliques: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sat_queries: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped_queries: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TestSet {
    pub vectors: Vec<TestVector>,
    pub provenance: Provenance,
}

const PROVENANCE_TAG: &str = "# provenance ";

impl TestSet {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Plain text: a provenance comment line, then one bitstring per line
    /// in primary-input order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(PROVENANCE_TAG);
        s.push_str(&serde_json::to_string(&self.provenance).expect("provenance serializes"));
        s.push('\n');
        for v in &self.vectors {
            s.push_str(&v.to_bitstring());
            s.push('\n');
        }
        s
    }

    /// Parses the text format. Comment lines are skipped; a provenance
    /// line, if present, is restored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut set = TestSet::default();
        let mut width = None;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if let Some(json) = line.strip_prefix(PROVENANCE_TAG.trim_end()) {
                set.provenance = serde_json::from_str(json.trim())
                    .map_err(|e| Error::syntax(i + 1, 1, format!("bad provenance: {e}")))?;
                continue;
            }
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v: TestVector = line.parse().map_err(|_| Error::syntax(i + 1, 1, "expected a bitstring"))?;
            match width {
                None => width = Some(v.len()),
                Some(w) if w != v.len() => {
                    return Err(Error::syntax(i + 1, 1, format!("vector has {} bits, expected {w}", v.len())))
                }
                _ => {}
            }
            set.vectors.push(v);
        }
        Ok(set)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("test set serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("test set JSON: {e}")))
    }

    pub fn check_width(&self, netlist: &Netlist) -> Result<()> {
        let w = netlist.inputs().len();
        match self.vectors.iter().find(|v| v.len() != w) {
            Some(v) => Err(Error::ArityMismatch {
                expected: w,
                actual: v.len(),
            }),
            None => Ok(()),
        }
    }
}

/// Per-vector bitsets of activated rare nodes, one `Vec<u64>` per vector.
fn activation_sets(netlist: &Netlist, vectors: &[TestVector], nodes: &[RareNode]) -> Result<Vec<Vec<u64>>> {
    let width = netlist.inputs().len();
    let words_per = nodes.len().div_ceil(64);
    let chunks: Vec<&[TestVector]> = vectors.chunks(64).collect();
    let per_chunk: Vec<Vec<Vec<u64>>> = chunks
        .par_iter()
        .map(|chunk| {
            let values = netlist.simulate_words(&pack_vectors(chunk, width))?;
            let mut sets = vec![vec![0u64; words_per]; chunk.len()];
            for (k, node) in nodes.iter().enumerate() {
                let w = values[node.net.index()];
                let hit = if node.value { w } else { !w } & lane_mask(chunk.len());
                for (lane, set) in sets.iter_mut().enumerate() {
                    if hit >> lane & 1 == 1 {
                        set[k / 64] |= 1 << (k % 64);
                    }
                }
            }
            Ok(sets)
        })
        .collect::<Result<_>>()?;
    Ok(per_chunk.into_iter().flatten().collect())
}

fn activates(values: &[bool], node: &RareNode) -> bool {
    values[node.net.index()] == node.value
}

/// Number of vectors in `tests` driving each node to its rare value.
pub fn n_detect_profile(netlist: &Netlist, tests: &[TestVector], nodes: &[RareNode]) -> Result<Vec<usize>> {
    let w = netlist.inputs().len();
    if let Some(v) = tests.iter().find(|v| v.len() != w) {
        return Err(Error::ArityMismatch {
            expected: w,
            actual: v.len(),
        });
    }
    let sets = activation_sets(netlist, tests, nodes)?;
    Ok((0..nodes.len())
        .map(|k| sets.iter().filter(|s| s[k / 64] >> (k % 64) & 1 == 1).count())
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeroConfig {
    pub tau: f64,
    pub n_detect: usize,
    pub n_random: usize,
    pub seed: u64,
}

impl Default for MeroConfig {
    fn default() -> Self {
        MeroConfig {
            tau: DEFAULT_TAU,
            n_detect: DEFAULT_N_DETECT,
            n_random: DEFAULT_RANDOM_POOL,
            seed: 0,
        }
    }
}

/// Counters from one MERO run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeroStats {
    pub flips_tried: usize,
    pub flips_kept: usize,
    /// Smallest gain of any kept flip; kept flips always gain at least 1.
    pub min_kept_gain: Option<usize>,
    /// Vectors whose hill-climb started from the sorted pool.
    pub vectors_processed: usize,
    pub stopped_early: bool,
}

pub fn mero(netlist: &Netlist, cfg: &MeroConfig) -> Result<TestSet> {
    mero_with_stats(netlist, cfg).map(|(t, _)| t)
}

/// Statistical N-detect generation. The random pool is ranked by how many
/// rare nodes each vector activates; each vector is then hill-climbed by
/// single-bit flips in input order, a flip surviving only if it strictly
/// increases the number of activated nodes still short of `n_detect`.
/// Vectors that make progress on some quota are emitted.
pub fn mero_with_stats(netlist: &Netlist, cfg: &MeroConfig) -> Result<(TestSet, MeroStats)> {
    if cfg.n_random == 0 || cfg.n_detect == 0 {
        return Err(Error::InvalidArgument("n_random and N must be at least 1".into()));
    }
    let width = netlist.inputs().len();
    let report = simulate_rareness(netlist, cfg.n_random, cfg.seed)?;
    let nodes = rare_nodes(&report, cfg.tau);
    let mut provenance = Provenance {
        algorithm: "mero".into(),
        tau: cfg.tau,
        seed: cfg.seed,
        random_pool: cfg.n_random,
        rare_nodes: nodes.len(),
        n_detect: Some(cfg.n_detect),
        ..Default::default()
    };
    let mut stats = MeroStats::default();
    if nodes.is_empty() {
        return Ok((
            TestSet {
                vectors: Vec::new(),
                provenance,
            },
            stats,
        ));
    }
    let pool = random_vectors(width, cfg.n_random, cfg.seed);
    let sets = activation_sets(netlist, &pool, &nodes)?;
    let mut order: Vec<(usize, u32)> = sets
        .iter()
        .enumerate()
        .map(|(i, s)| (i, s.iter().map(|w| w.count_ones()).sum()))
        .collect();
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut counts = vec![0usize; nodes.len()];
    let mut emitted = Vec::new();
    let unmet_score = |values: &[bool], counts: &[usize]| {
        nodes
            .iter()
            .zip(counts)
            .filter(|(n, &c)| c < cfg.n_detect && activates(values, n))
            .count()
    };
    for &(idx, _) in &order {
        if counts.iter().all(|&c| c >= cfg.n_detect) {
            stats.stopped_early = true;
            break;
        }
        stats.vectors_processed += 1;
        let mut v = pool[idx].clone();
        let mut values = netlist.evaluate(&v)?;
        let mut score = unmet_score(&values, &counts);
        for bit in 0..width {
            stats.flips_tried += 1;
            v.flip(bit);
            let trial = netlist.evaluate(&v)?;
            let s = unmet_score(&trial, &counts);
            if s > score {
                let gain = s - score;
                stats.flips_kept += 1;
                stats.min_kept_gain = Some(stats.min_kept_gain.map_or(gain, |g| g.min(gain)));
                score = s;
                values = trial;
            } else {
                v.flip(bit);
            }
        }
        if score > 0 {
            for (c, n) in counts.iter_mut().zip(&nodes) {
                if activates(&values, n) {
                    *c += 1;
                }
            }
            emitted.push(v);
        }
    }
    provenance.unmet = nodes
        .iter()
        .zip(&counts)
        .filter(|(_, &c)| c < cfg.n_detect)
        .map(|(n, _)| netlist.net_name(n.net).to_string())
        .collect();
    Ok((
        TestSet {
            vectors: emitted,
            provenance,
        },
        stats,
    ))
}

/// Pairwise co-activation graph over rare nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct CompatGraph {
    pub nodes: Vec<RareNode>,
    adjacency: Vec<Vec<usize>>,
    /// Pair queries that ran out of solver budget; treated as non-edges.
    pub skipped: usize,
    /// Solver calls made while building the graph.
    pub queries: u64,
}

impl CompatGraph {
    pub fn from_edges(nodes: Vec<RareNode>, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for &(a, b) in edges {
            if a == b || a >= nodes.len() || b >= nodes.len() {
                return Err(Error::InvalidArgument(format!("bad edge ({a}, {b})")));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(CompatGraph {
            nodes,
            adjacency,
            skipped: 0,
            queries: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|a| self.adjacency[a].iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }
}

fn literals(nodes: &[RareNode], group: &[usize]) -> Vec<(NetId, bool)> {
    group.iter().map(|&i| (nodes[i].net, nodes[i].value)).collect()
}

/// Queries every unordered node pair once.
pub fn build_compat_graph(netlist: &Netlist, nodes: &[RareNode]) -> Result<CompatGraph> {
    build_compat_graph_with(&SatOracle::new(netlist), nodes)
}

pub fn build_compat_graph_with(oracle: &SatOracle<'_>, nodes: &[RareNode]) -> Result<CompatGraph> {
    let before = oracle.queries();
    let pairs: Vec<(usize, usize)> = (0..nodes.len())
        .flat_map(|a| (a + 1..nodes.len()).map(move |b| (a, b)))
        .collect();
    let answers: Vec<Assignability> = pairs
        .par_iter()
        .map(|&(a, b)| oracle.query(&literals(nodes, &[a, b])))
        .collect::<Result<_>>()?;
    let mut edges = Vec::new();
    let mut skipped = 0;
    for (&pair, ans) in pairs.iter().zip(&answers) {
        match ans {
            Assignability::Witness(_) => edges.push(pair),
            Assignability::Impossible => {}
            Assignability::BudgetExceeded => {
                log::warn!("pair query {pair:?} exceeded the solver budget; no edge");
                skipped += 1;
            }
        }
    }
    let mut g = CompatGraph::from_edges(nodes.to_vec(), &edges)?;
    g.skipped = skipped;
    g.queries = oracle.queries() - before;
    Ok(g)
}

/// Greedy clique partition. Each clique is seeded with the lowest-index
/// uncovered node and grown by the uncovered node adjacent to all members
/// with the most uncovered neighbors (ties: lowest index). Members are
/// listed in the order they were added.
pub fn clique_partition(graph: &CompatGraph) -> Vec<Vec<usize>> {
    let n = graph.len();
    let mut covered = vec![false; n];
    let mut out = Vec::new();
    while let Some(seed) = (0..n).find(|&v| !covered[v]) {
        covered[seed] = true;
        let mut clique = vec![seed];
        let mut candidates: Vec<usize> = graph.neighbors(seed).iter().copied().filter(|&v| !covered[v]).collect();
        while !candidates.is_empty() {
            let degree = |v: usize| graph.neighbors(v).iter().filter(|&&u| !covered[u]).count();
            let &pick = candidates
                .iter()
                .max_by(|&&a, &&b| degree(a).cmp(&degree(b)).then(b.cmp(&a)))
                .expect("nonempty");
            covered[pick] = true;
            clique.push(pick);
            candidates.retain(|&v| v != pick && graph.has_edge(v, pick));
        }
        out.push(clique);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TarmacConfig {
    pub tau: f64,
    pub n_random: usize,
    pub seed: u64,
}

impl Default for TarmacConfig {
    fn default() -> Self {
        TarmacConfig {
            tau: DEFAULT_TAU,
            n_random: DEFAULT_RANDOM_POOL,
            seed: 0,
        }
    }
}

/// One activation group and the vector that activates all of it.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivationGroup {
    pub nodes: Vec<usize>,
    pub vector: TestVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TarmacRun {
    pub tests: TestSet,
    pub graph: CompatGraph,
    pub cliques: Vec<Vec<usize>>,
    pub groups: Vec<ActivationGroup>,
    /// Nodes no vector could activate even alone.
    pub dropped: Vec<usize>,
}

pub fn tarmac(netlist: &Netlist, cfg: &TarmacConfig) -> Result<TestSet> {
    tarmac_run(netlist, cfg).map(|r| r.tests)
}

/// Clique-activation generation: rare nodes from simulation, pairwise
/// compatibility graph, greedy clique partition, then one solver witness
/// per clique. A clique that is not jointly satisfiable loses its
/// last-added members until the rest is; the removed members are retried
/// as a new group.
pub fn tarmac_run(netlist: &Netlist, cfg: &TarmacConfig) -> Result<TarmacRun> {
    if cfg.n_random == 0 {
        return Err(Error::InvalidArgument("n_random must be at least 1".into()));
    }
    let report = simulate_rareness(netlist, cfg.n_random, cfg.seed)?;
    let nodes = rare_nodes(&report, cfg.tau);
    tarmac_on_nodes(netlist, nodes, cfg)
}

pub fn tarmac_on_nodes(netlist: &Netlist, nodes: Vec<RareNode>, cfg: &TarmacConfig) -> Result<TarmacRun> {
    let oracle = SatOracle::new(netlist);
    let graph = build_compat_graph_with(&oracle, &nodes)?;
    let cliques = clique_partition(&graph);
    let mut groups = Vec::new();
    let mut dropped = Vec::new();
    let mut split = 0;
    for clique in &cliques {
        let mut pending = clique.clone();
        let mut first = true;
        while !pending.is_empty() {
            let mut group = pending.clone();
            let vector = loop {
                match oracle.query(&literals(&nodes, &group))? {
                    Assignability::Witness(v) => break Some(v),
                    _ if group.len() == 1 => break None,
                    _ => {
                        group.pop();
                    }
                }
            };
            if group.len() < pending.len() && first {
                split += 1;
            }
            first = false;
            match vector {
                Some(vector) => {
                    let values = netlist.evaluate(&vector)?;
                    if !group.iter().all(|&i| activates(&values, &nodes[i])) {
                        return Err(Error::Internal("group witness does not activate the group".into()));
                    }
                    pending.retain(|i| !group.contains(i));
                    groups.push(ActivationGroup { nodes: group, vector });
                }
                None => {
                    dropped.push(group[0]);
                    pending.retain(|&i| i != group[0]);
                }
            }
        }
    }
    if !dropped.is_empty() {
        log::info!("{} rare nodes cannot be activated", dropped.len());
    }
    let provenance = Provenance {
        algorithm: "tarmac".into(),
        tau: cfg.tau,
        seed: cfg.seed,
        random_pool: cfg.n_random,
        rare_nodes: nodes.len(),
        unmet: dropped.iter().map(|&i| netlist.net_name(nodes[i].net).to_string()).collect(),
        edges: Some(graph.edge_count()),
        cliques: Some(cliques.len()),
        split_cliques: Some(split),
        sat_queries: Some(oracle.queries()),
        skipped_queries: Some(graph.skipped),
        ..Default::default()
    };
    let tests = TestSet {
        vectors: groups.iter().map(|g| g.vector.clone()).collect(),
        provenance,
    };
    Ok(TarmacRun {
        tests,
        graph,
        cliques,
        groups,
        dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{parse_bench, parse_expr};

    fn node(n: &Netlist, name: &str, value: bool) -> RareNode {
        RareNode {
            net: n.net_id(name).unwrap(),
            value,
            omega: 0.0,
        }
    }

    #[test]
    fn rare_nodes_of_and_chain() {
        let n = parse_expr("X", "ABC").unwrap();
        let r = RarenessReport::itm(&n);
        let nodes = rare_nodes(&r, 0.2);
        assert_eq!(nodes.len(), 1);
        assert_eq!(nodes[0].net, n.net_id("X").unwrap());
        assert!(nodes[0].value);
        assert_eq!(nodes[0].omega, 0.125);
        assert!(rare_nodes(&r, 0.0).is_empty());
    }

    #[test]
    fn rare_nodes_of_reconvergent_circuit() {
        let n = parse_expr("X", "(CB+A!C)A+DA").unwrap();
        let nodes = rare_nodes(&RarenessReport::itm(&n), 0.25);
        assert_eq!(nodes.len(), 1);
        let g = n.driving_gate(nodes[0].net).unwrap();
        assert!(g.fanin.iter().any(|&f| n.net_name(f) == "A"));
    }

    #[test]
    fn mero_finds_unique_activator() {
        let n = parse_expr("X", "ABC").unwrap();
        for seed in 0..10 {
            let cfg = MeroConfig {
                tau: 0.2,
                n_detect: 1,
                n_random: 64,
                seed,
            };
            let t = mero(&n, &cfg).unwrap();
            assert!(t.vectors.iter().any(|v| v.to_bitstring() == "111"), "seed {seed}");
            assert_eq!(mero(&n, &cfg).unwrap(), t);
        }
        let none = mero(&n, &MeroConfig { tau: 0.0, n_detect: 1, n_random: 64, seed: 0 }).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn mero_meets_quota() {
        let n = crate::netlist::gen_adder(crate::netlist::AdderArch::RippleCarry, 3).unwrap();
        let cfg = MeroConfig {
            tau: 0.3,
            n_detect: 4,
            n_random: 256,
            seed: 9,
        };
        let (t, stats) = mero_with_stats(&n, &cfg).unwrap();
        let nodes = rare_nodes(&simulate_rareness(&n, 256, 9).unwrap(), 0.3);
        let prof = n_detect_profile(&n, &t.vectors, &nodes).unwrap();
        for (nd, c) in nodes.iter().zip(&prof) {
            let unmet = t.provenance.unmet.contains(&n.net_name(nd.net).to_string());
            assert!(*c >= 4 || unmet);
        }
        assert!(stats.min_kept_gain.is_none_or(|g| g >= 1));
        assert!(stats.flips_kept <= stats.flips_tried);
    }

    #[test]
    fn profile_counts() {
        let n = parse_expr("X", "ABC").unwrap();
        let nodes = vec![node(&n, "X", true)];
        assert_eq!(n_detect_profile(&n, &[], &nodes).unwrap(), vec![0]);
        let tests: Vec<TestVector> = ["111", "110", "111"].iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(n_detect_profile(&n, &tests, &nodes).unwrap(), vec![2]);
        assert!(n_detect_profile(&n, &["11".parse().unwrap()], &nodes).is_err());
    }

    #[test]
    fn compat_graph_edges() {
        let n = parse_bench(
            "INPUT(A)\nINPUT(B)\nINPUT(C)\nINPUT(D)\nOUTPUT(P)\nOUTPUT(Q)\nOUTPUT(R)\nP = AND(A, B)\nQ = AND(C, D)\nR = NOR(A, B)\n",
        )
        .unwrap();
        let nodes = vec![node(&n, "P", true), node(&n, "Q", true), node(&n, "R", true)];
        let g = build_compat_graph(&n, &nodes).unwrap();
        assert_eq!(g.queries, 3);
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
        let single = build_compat_graph(&n, &nodes[..1]).unwrap();
        assert_eq!(single.edge_count(), 0);
        assert_eq!(single.queries, 0);
    }

    fn dummy(k: usize) -> Vec<RareNode> {
        (0..k)
            .map(|i| RareNode {
                net: NetId(i as u32),
                value: true,
                omega: 0.1,
            })
            .collect()
    }

    #[test]
    fn partition_shapes() {
        let all: Vec<(usize, usize)> = (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).collect();
        let k4 = CompatGraph::from_edges(dummy(4), &all).unwrap();
        assert_eq!(clique_partition(&k4), vec![vec![0, 1, 2, 3]]);
        let empty = CompatGraph::from_edges(dummy(3), &[]).unwrap();
        assert_eq!(clique_partition(&empty), vec![vec![0], vec![1], vec![2]]);
        let path = CompatGraph::from_edges(dummy(3), &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(clique_partition(&path), vec![vec![0, 1], vec![2]]);
        assert!(CompatGraph::from_edges(dummy(2), &[(1, 1)]).is_err());
    }

    #[test]
    fn partition_prefers_high_degree() {
        // 0-1, 0-2, 2-3: node 2 has more uncovered neighbors than 1
        let g = CompatGraph::from_edges(dummy(4), &[(0, 1), (0, 2), (2, 3)]).unwrap();
        assert_eq!(clique_partition(&g), vec![vec![0, 2], vec![1], vec![3]]);
    }

    #[test]
    fn tarmac_disjoint_pair() {
        let n = parse_bench("INPUT(A)\nINPUT(B)\nINPUT(C)\nINPUT(D)\nOUTPUT(P)\nOUTPUT(Q)\nP = AND(A, B)\nQ = AND(C, D)\n").unwrap();
        let nodes = vec![node(&n, "P", true), node(&n, "Q", true)];
        let run = tarmac_on_nodes(&n, nodes, &TarmacConfig::default()).unwrap();
        assert_eq!(run.tests.vectors.len(), 1);
        assert_eq!(run.tests.vectors[0].to_bitstring(), "1111");
        let tiny = parse_expr("X", "A+B").unwrap();
        let t = tarmac(&tiny, &TarmacConfig { tau: 0.2, n_random: 64, seed: 0 }).unwrap();
        assert!(t.is_empty());
    }

    #[test]
    fn parity_gadget_splits() {
        let n = parse_bench(
            "INPUT(A)\nINPUT(B)\nINPUT(C)\nINPUT(D)\nINPUT(E)\nINPUT(F)\nINPUT(G)\nINPUT(H)\nINPUT(I)\n\
             OUTPUT(U)\nOUTPUT(V)\nOUTPUT(W)\n\
             XAB = XOR(A, B)\nXBC = XOR(B, C)\nXAC = XOR(A, C)\n\
             U = AND(XAB, D, E)\nV = AND(XBC, F, G)\nW = AND(XAC, H, I)\n",
        )
        .unwrap();
        let run = tarmac_run(&n, &TarmacConfig { tau: 0.2, n_random: 4096, seed: 1 }).unwrap();
        let names: Vec<&str> = run.graph.nodes.iter().map(|r| n.net_name(r.net)).collect();
        assert_eq!(names, vec!["U", "V", "W"]);
        assert_eq!(run.graph.edge_count(), 3);
        assert_eq!(run.cliques.len(), 1);
        assert_eq!(run.groups.len(), 2);
        assert_eq!(run.tests.provenance.split_cliques, Some(1));
        for g in &run.groups {
            let values = n.evaluate(&g.vector).unwrap();
            assert!(g.nodes.iter().all(|&i| activates(&values, &run.graph.nodes[i])));
        }
    }

    #[test]
    fn text_and_json_roundtrip() {
        let t = TestSet {
            vectors: vec!["0101".parse().unwrap(), "1111".parse().unwrap()],
            provenance: Provenance {
                algorithm: "mero".into(),
                tau: 0.2,
                seed: 3,
                random_pool: 10,
                rare_nodes: 2,
                n_detect: Some(5),
                ..Default::default()
            },
        };
        let text = t.to_text();
        assert_eq!(TestSet::from_text(&text).unwrap(), t);
        assert_eq!(TestSet::from_text(&format!("# tool header\n{text}")).unwrap(), t);
        assert_eq!(TestSet::from_json(&t.to_json()).unwrap(), t);
        assert!(TestSet::from_text("0101\n011\n").is_err());
        assert!(TestSet::from_text("01x\n").is_err());
    }
}
