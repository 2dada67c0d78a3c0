//! Rare-signal trigger sampling, trigger/payload insertion and Trojan
//! bundle storage.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netlist::{lane_mask, pack_vectors, parse_bench_named, write_bench, GateKind, NetId, Netlist, TestVector};
use crate::rareness::RarenessReport;
use crate::sat::{Assignability, SatOracle};
use crate::testgen::rare_nodes;

pub const MIN_TRIGGER_WIDTH: usize = 2;
pub const MAX_TRIGGER_WIDTH: usize = 8;
/// Sampling draws allowed per requested trigger.
pub const DRAWS_PER_TRIGGER: usize = 50;

/// Conjunction of nets at their rare values, with an activating input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trigger {
    pub literals: Vec<(NetId, bool)>,
    pub witness: TestVector,
}

impl Trigger {
    pub fn q(&self) -> usize {
        self.literals.len()
    }

    pub fn is_active(&self, values: &[bool]) -> bool {
        self.literals.iter().all(|&(n, b)| values[n.index()] == b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrojanInstance {
    pub trigger: Trigger,
    /// Net in the golden design whose primary output the payload flips.
    pub payload_net: NetId,
    pub infected: Netlist,
}

impl TrojanInstance {
    pub fn witness(&self) -> &TestVector {
        &self.trigger.witness
    }
}

/// Draws `count` distinct feasible triggers of width `q` from the nets of
/// `report` with ω < τ. Subsets are sampled uniformly with a seeded
/// xoshiro256++ stream; each is kept only if the solver finds an input
/// activating all of its literals.
pub fn sample_triggers(
    netlist: &Netlist,
    report: &RarenessReport,
    tau: f64,
    q: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<Trigger>> {
    if !(MIN_TRIGGER_WIDTH..=MAX_TRIGGER_WIDTH).contains(&q) {
        return Err(Error::InvalidArgument(format!(
            "trigger width {q} outside {MIN_TRIGGER_WIDTH}..={MAX_TRIGGER_WIDTH}"
        )));
    }
    if count == 0 {
        return Err(Error::InvalidArgument("trojan count must be at least 1".into()));
    }
    let rare = rare_nodes(report, tau);
    if rare.len() < q {
        return Err(Error::Sampling(format!(
            "only {} signals have rareness below {tau}, fewer than the trigger width {q}",
            rare.len()
        )));
    }
    let oracle = SatOracle::new(netlist);
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let budget = DRAWS_PER_TRIGGER * count;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    let (mut draws, mut infeasible, mut unknown) = (0usize, 0usize, 0usize);
    while out.len() < count && draws < budget {
        draws += 1;
        let mut picks = sample(&mut rng, rare.len(), q).into_vec();
        picks.sort_unstable();
        if !seen.insert(picks.clone()) {
            continue;
        }
        let literals: Vec<(NetId, bool)> = picks.iter().map(|&i| (rare[i].net, rare[i].value)).collect();
        match oracle.query(&literals)? {
            Assignability::Witness(witness) => out.push(Trigger { literals, witness }),
            Assignability::Impossible => infeasible += 1,
            Assignability::BudgetExceeded => unknown += 1,
        }
    }
    if out.is_empty() {
        return Err(Error::Sampling(format!(
            "no feasible trigger after {draws} draws ({} distinct, {infeasible} infeasible, {unknown} over solver budget)",
            seen.len()
        )));
    }
    if out.len() < count {
        log::warn!("sampled {} of {count} requested triggers within {draws} draws", out.len());
    }
    Ok(out)
}

/// Adds an AND over the trigger literals and XORs it into the primary
/// output driven by `payload`. The output keeps its name; the original
/// driver is renamed.
pub fn insert(netlist: &Netlist, trigger: &Trigger, payload: NetId) -> Result<Netlist> {
    let Some(pos) = netlist.outputs().iter().position(|&o| o == payload) else {
        return Err(Error::InvalidArgument(format!(
            "payload `{}` does not drive a primary output",
            netlist.net_name(payload)
        )));
    };
    if netlist.is_input(payload) {
        return Err(Error::InvalidArgument(format!(
            "payload `{}` is a primary input",
            netlist.net_name(payload)
        )));
    }
    if trigger.literals.iter().any(|&(n, _)| n == payload) {
        return Err(Error::InvalidArgument(format!(
            "payload `{}` is part of the trigger",
            netlist.net_name(payload)
        )));
    }
    if trigger.q() < MIN_TRIGGER_WIDTH {
        return Err(Error::InvalidArgument("trigger needs at least two literals".into()));
    }
    let mut b = netlist.to_builder();
    let out_name = netlist.net_name(payload).to_string();
    let renamed = b.fresh_name(&format!("{out_name}_golden"));
    b.rename(payload, &renamed)?;
    let lits: Vec<NetId> = trigger
        .literals
        .iter()
        .map(|&(n, v)| if v { n } else { b.add_fresh_gate(GateKind::Not, vec![n], "trojan_inv") })
        .collect();
    let fire = b.add_fresh_gate(GateKind::And, lits, "trojan_trigger");
    let flipped = b.intern(&out_name);
    b.add_gate_ids(GateKind::Xor, vec![payload, fire], flipped);
    let mut outs = b.outputs().to_vec();
    outs[pos] = flipped;
    b.set_outputs(outs);
    b.finish()
}

/// Samples triggers and attaches each to a primary output chosen with the
/// same seed. Outputs driven directly by inputs, or by a trigger net, are
/// never chosen.
pub fn inject(netlist: &Netlist, report: &RarenessReport, tau: f64, q: usize, count: usize, seed: u64) -> Result<Vec<TrojanInstance>> {
    let triggers = sample_triggers(netlist, report, tau, q, count, seed)?;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut out = Vec::with_capacity(triggers.len());
    for trigger in triggers {
        let candidates: Vec<NetId> = netlist
            .outputs()
            .iter()
            .copied()
            .filter(|&o| !netlist.is_input(o) && trigger.literals.iter().all(|&(n, _)| n != o))
            .collect();
        if candidates.is_empty() {
            log::warn!("no payload output available for a sampled trigger; skipped");
            continue;
        }
        let payload = candidates[rng.random_range(0..candidates.len())];
        let infected = insert(netlist, &trigger, payload)?;
        let inst = TrojanInstance {
            trigger,
            payload_net: payload,
            infected,
        };
        if !is_detected(netlist, &inst.infected, std::slice::from_ref(inst.witness()))? {
            return Err(Error::Internal("inserted trojan is not exposed by its witness".into()));
        }
        out.push(inst);
    }
    if out.is_empty() {
        return Err(Error::Sampling("no trojan could be attached to a primary output".into()));
    }
    Ok(out)
}

fn check_interface(golden: &Netlist, infected: &Netlist) -> Result<()> {
    if golden.input_names() != infected.input_names() {
        return Err(Error::InterfaceMismatch("primary inputs differ".into()));
    }
    if golden.output_names() != infected.output_names() {
        return Err(Error::InterfaceMismatch("primary outputs differ".into()));
    }
    Ok(())
}

/// True iff some vector makes a primary output of `infected` differ from
/// `golden`.
pub fn is_detected(golden: &Netlist, infected: &Netlist, tests: &[TestVector]) -> Result<bool> {
    check_interface(golden, infected)?;
    let width = golden.inputs().len();
    for chunk in tests.chunks(64) {
        for v in chunk {
            if v.len() != width {
                return Err(Error::ArityMismatch {
                    expected: width,
                    actual: v.len(),
                });
            }
        }
        let words = pack_vectors(chunk, width);
        let g = golden.simulate_words(&words)?;
        let i = infected.simulate_words(&words)?;
        let mask = lane_mask(chunk.len());
        let differs = golden
            .outputs()
            .iter()
            .zip(infected.outputs())
            .any(|(&a, &b)| (g[a.index()] ^ i[b.index()]) & mask != 0);
        if differs {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiteralJson {
    pub net: String,
    pub value: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrojanJson {
    pub trigger: Vec<LiteralJson>,
    pub payload: String,
    pub witness: TestVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleJson {
    pub design: String,
    pub trojans: Vec<TrojanJson>,
}

/// Golden netlist with its infected variants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrojanBundle {
    pub golden: Netlist,
    pub trojans: Vec<TrojanInstance>,
}

pub const GOLDEN_FILE: &str = "golden.bench";
pub const MANIFEST_FILE: &str = "trojans.json";

pub fn infected_file(k: usize) -> String {
    format!("infected_{k}.bench")
}

impl TrojanBundle {
    pub fn manifest(&self) -> BundleJson {
        let g = &self.golden;
        BundleJson {
            design: g.name().to_string(),
            trojans: self
                .trojans
                .iter()
                .map(|t| TrojanJson {
                    trigger: t
                        .trigger
                        .literals
                        .iter()
                        .map(|&(n, v)| LiteralJson {
                            net: g.net_name(n).to_string(),
                            value: u8::from(v),
                        })
                        .collect(),
                    payload: g.net_name(t.payload_net).to_string(),
                    witness: t.trigger.witness.clone(),
                })
                .collect(),
        }
    }

    /// File name and content pairs making up the bundle directory.
    pub fn files(&self) -> Result<Vec<(String, String)>> {
        let mut out = vec![(GOLDEN_FILE.to_string(), write_bench(&self.golden))];
        for (k, t) in self.trojans.iter().enumerate() {
            out.push((infected_file(k), write_bench(&t.infected)));
        }
        let json = serde_json::to_string_pretty(&self.manifest()).map_err(|e| Error::Internal(e.to_string()))?;
        out.push((MANIFEST_FILE.to_string(), json + "\n"));
        Ok(out)
    }

    pub fn from_parts(golden: Netlist, infected: Vec<Netlist>, manifest: &BundleJson) -> Result<Self> {
        if infected.len() != manifest.trojans.len() {
            return Err(Error::InvalidArgument(format!(
                "manifest lists {} trojans but {} infected netlists were given",
                manifest.trojans.len(),
                infected.len()
            )));
        }
        let lookup = |name: &str| {
            golden
                .net_id(name)
                .ok_or_else(|| Error::InvalidArgument(format!("manifest net `{name}` is not in the golden netlist")))
        };
        let mut trojans = Vec::with_capacity(infected.len());
        for (t, inf) in manifest.trojans.iter().zip(infected) {
            check_interface(&golden, &inf)?;
            let literals = t
                .trigger
                .iter()
                .map(|l| Ok((lookup(&l.net)?, l.value != 0)))
                .collect::<Result<Vec<_>>>()?;
            trojans.push(TrojanInstance {
                trigger: Trigger {
                    literals,
                    witness: t.witness.clone(),
                },
                payload_net: lookup(&t.payload)?,
                infected: inf,
            });
        }
        Ok(TrojanBundle { golden, trojans })
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let read = |name: &str| {
            fs::read_to_string(dir.join(name)).map_err(|e| Error::Io(format!("{}: {e}", dir.join(name).display())))
        };
        let manifest: BundleJson = serde_json::from_str(&read(MANIFEST_FILE)?)
            .map_err(|e| Error::InvalidArgument(format!("{MANIFEST_FILE}: {e}")))?;
        let golden = parse_bench_named(&manifest.design, &read(GOLDEN_FILE)?)?;
        let infected = (0..manifest.trojans.len())
            .map(|k| parse_bench_named(&format!("{}_infected_{k}", manifest.design), &read(&infected_file(k))?))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(golden, infected, &manifest)
    }

    /// Re-checks every witness against the stored trigger and the
    /// golden/infected pair.
    pub fn verify(&self) -> Result<()> {
        for (k, t) in self.trojans.iter().enumerate() {
            let values = self.golden.evaluate(t.witness())?;
            if !t.trigger.is_active(&values) {
                return Err(Error::InvalidArgument(format!("trojan {k}: witness does not activate its trigger")));
            }
            if !is_detected(&self.golden, &t.infected, std::slice::from_ref(t.witness()))? {
                return Err(Error::InvalidArgument(format!("trojan {k}: witness does not expose the payload")));
            }
        }
        Ok(())
    }
}
