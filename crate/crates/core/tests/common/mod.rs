//! Seeded generators shared by the integration suites.
#![allow(dead_code)]

use rand::Rng;
use rarenet_core::netlist::{GateKind, Netlist, NetlistBuilder};

fn pick_kind(rng: &mut impl Rng) -> GateKind {
    const WEIGHTED: [(GateKind, u32); 8] = [
        (GateKind::And, 5),
        (GateKind::Nand, 4),
        (GateKind::Or, 5),
        (GateKind::Nor, 4),
        (GateKind::Xor, 2),
        (GateKind::Xnor, 1),
        (GateKind::Not, 2),
        (GateKind::Buf, 1),
    ];
    let total: u32 = WEIGHTED.iter().map(|w| w.1).sum();
    let mut r = rng.random_range(0..total);
    for (k, w) in WEIGHTED {
        if r < w {
            return k;
        }
        r -= w;
    }
    unreachable!()
}

fn arity(kind: GateKind, rng: &mut impl Rng) -> usize {
    match kind {
        GateKind::Not | GateKind::Buf => 1,
        GateKind::Xor | GateKind::Xnor => 2,
        _ => rng.random_range(2..=4),
    }
}

/// Random DAG with reconvergent fan-out. Gates draw fan-ins mostly from
/// recent nets; every net without fan-out becomes an output.
pub fn random_circuit(rng: &mut impl Rng, n_inputs: usize, n_gates: usize) -> Netlist {
    let mut b = NetlistBuilder::new("random");
    let mut nets: Vec<String> = (0..n_inputs).map(|i| format!("i{i}")).collect();
    for n in &nets {
        b.add_input(n);
    }
    let mut fanout = vec![0usize; n_inputs + n_gates];
    for k in 0..n_gates {
        let kind = pick_kind(rng);
        let a = arity(kind, rng).min(nets.len());
        let kind = if a == 1 && !matches!(kind, GateKind::Not | GateKind::Buf) { GateKind::Not } else { kind };
        let a = if matches!(kind, GateKind::Xor | GateKind::Xnor) && nets.len() < 2 { 1 } else { a };
        let kind = if a == 1 && matches!(kind, GateKind::Xor | GateKind::Xnor) { GateKind::Buf } else { kind };
        let mut picks: Vec<usize> = Vec::new();
        while picks.len() < a {
            let idx = if rng.random_bool(0.6) {
                let lo = nets.len().saturating_sub(8);
                rng.random_range(lo..nets.len())
            } else {
                rng.random_range(0..nets.len())
            };
            if !picks.contains(&idx) {
                picks.push(idx);
            }
        }
        for &p in &picks {
            fanout[p] += 1;
        }
        let fanin: Vec<&str> = picks.iter().map(|&p| nets[p].as_str()).collect();
        let out = format!("g{k}");
        b.add_gate(kind, &fanin, &out);
        nets.push(out);
    }
    for (i, n) in nets.iter().enumerate().skip(n_inputs) {
        if fanout[i] == 0 {
            b.add_output(n);
        }
    }
    b.finish().expect("generator builds valid netlists")
}

/// Random fan-out-free circuit: every net feeds at most one gate.
pub fn random_tree(rng: &mut impl Rng, max_inputs: usize, max_gates: usize) -> Netlist {
    let n_inputs = rng.random_range(2..=max_inputs);
    let target = rng.random_range(1..=max_gates);
    let mut b = NetlistBuilder::new("tree");
    let mut free: Vec<String> = (0..n_inputs).map(|i| format!("i{i}")).collect();
    for n in &free {
        b.add_input(n);
    }
    let mut gates = 0;
    let mut outs = Vec::new();
    while gates < target && !free.is_empty() {
        let mut kind = pick_kind(rng);
        let mut a = arity(kind, rng).min(free.len());
        if a == 1 && !matches!(kind, GateKind::Not | GateKind::Buf) {
            kind = GateKind::Not;
        }
        if free.len() < 2 && matches!(kind, GateKind::Xor | GateKind::Xnor) {
            kind = GateKind::Buf;
            a = 1;
        }
        let mut fanin = Vec::new();
        for _ in 0..a {
            let i = rng.random_range(0..free.len());
            fanin.push(free.swap_remove(i));
        }
        let out = format!("g{gates}");
        let refs: Vec<&str> = fanin.iter().map(String::as_str).collect();
        b.add_gate(kind, &refs, &out);
        outs.retain(|o| !fanin.contains(o));
        outs.push(out.clone());
        free.push(out);
        gates += 1;
    }
    for o in &outs {
        b.add_output(o);
    }
    b.finish().expect("generator builds valid trees")
}

/// Expression over the first `letters` capital letters.
#[derive(Debug, Clone)]
pub enum Ast {
    Lit(char),
    Not(Box<Ast>),
    And(Vec<Ast>),
    Or(Vec<Ast>),
}

impl Ast {
    pub fn eval(&self, value: &dyn Fn(char) -> bool) -> bool {
        match self {
            Ast::Lit(c) => value(*c),
            Ast::Not(a) => !a.eval(value),
            Ast::And(xs) => xs.iter().all(|x| x.eval(value)),
            Ast::Or(xs) => xs.iter().any(|x| x.eval(value)),
        }
    }

    pub fn render(&self) -> String {
        let wrap = |a: &Ast| match a {
            Ast::Lit(_) | Ast::Not(_) => a.render(),
            _ => format!("({})", a.render()),
        };
        match self {
            Ast::Lit(c) => c.to_string(),
            Ast::Not(a) => format!("!{}", wrap(a)),
            Ast::And(xs) => xs.iter().map(wrap).collect(),
            Ast::Or(xs) => xs.iter().map(Ast::render).collect::<Vec<_>>().join("+"),
        }
    }
}

pub fn random_ast(rng: &mut impl Rng, letters: u8, depth: u32) -> Ast {
    if depth == 0 || rng.random_bool(0.25) {
        let c = (b'A' + rng.random_range(0..letters)) as char;
        return if rng.random_bool(0.3) { Ast::Not(Box::new(Ast::Lit(c))) } else { Ast::Lit(c) };
    }
    match rng.random_range(0..5) {
        0 => Ast::Not(Box::new(random_ast(rng, letters, depth - 1))),
        1 | 2 => Ast::And((0..rng.random_range(2..=3)).map(|_| random_ast(rng, letters, depth - 1)).collect()),
        _ => Ast::Or((0..rng.random_range(2..=3)).map(|_| random_ast(rng, letters, depth - 1)).collect()),
    }
}
