//! Single-literal factoring of a two-level cover, and rebuilding factored
//! forms into a structurally hashed 2-input gate netlist.

use std::collections::{HashMap, HashSet};
use std::fmt;

use super::cover::Cover;
use crate::error::{Error, Result};
use crate::netlist::{GateKind, NetId, Netlist, NetlistBuilder};

/// Factored expression over a form's input list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(bool),
    Lit { input: usize, positive: bool },
    And(Vec<Expr>),
    Or(Vec<Expr>),
}

impl Expr {
    /// Gates the rebuilt expression costs: an n-ary node lowers to n-1
    /// two-input gates, literals are free.
    pub fn gate_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Lit { .. } => 0,
            Expr::And(xs) | Expr::Or(xs) => xs.len() - 1 + xs.iter().map(Expr::gate_count).sum::<usize>(),
        }
    }

    pub fn eval(&self, assignment: &dyn Fn(usize) -> bool) -> bool {
        match self {
            Expr::Const(b) => *b,
            Expr::Lit { input, positive } => assignment(*input) == *positive,
            Expr::And(xs) => xs.iter().all(|x| x.eval(assignment)),
            Expr::Or(xs) => xs.iter().any(|x| x.eval(assignment)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredForm {
    pub inputs: Vec<String>,
    pub expr: Expr,
}

impl FactoredForm {
    pub fn gate_count(&self) -> usize {
        self.expr.gate_count()
    }

    /// Renders in the expression grammar accepted by `parse_expr` when
    /// inputs are single letters.
    pub fn render(&self) -> String {
        fn go(e: &Expr, names: &[String], parent_and: bool) -> String {
            match e {
                Expr::Const(b) => (if *b { "1" } else { "0" }).to_string(),
                Expr::Lit { input, positive } => {
                    format!("{}{}", if *positive { "" } else { "!" }, names[*input])
                }
                Expr::And(xs) => xs.iter().map(|x| go(x, names, true)).collect::<Vec<_>>().join(""),
                Expr::Or(xs) => {
                    let s = xs.iter().map(|x| go(x, names, false)).collect::<Vec<_>>().join("+");
                    if parent_and {
                        format!("({s})")
                    } else {
                        s
                    }
                }
            }
        }
        go(&self.expr, &self.inputs, false)
    }
}

impl fmt::Display for FactoredForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

type Literal = (usize, bool);

fn lit(l: Literal) -> Expr {
    Expr::Lit {
        input: l.0,
        positive: l.1,
    }
}

fn product(lits: &[Literal]) -> Expr {
    match lits {
        [] => Expr::Const(true),
        [l] => lit(*l),
        _ => Expr::And(lits.iter().copied().map(lit).collect()),
    }
}

fn sum(mut terms: Vec<Expr>) -> Expr {
    match terms.len() {
        0 => Expr::Const(false),
        1 => terms.pop().unwrap(),
        _ => Expr::Or(terms),
    }
}

fn sop(cubes: &[Vec<Literal>]) -> Expr {
    if cubes.iter().any(|c| c.is_empty()) {
        return Expr::Const(true);
    }
    sum(cubes.iter().map(|c| product(c)).collect())
}

/// `l·q + r`, with `q = 1` collapsing to `l`.
fn assemble(l: Literal, quotient: Expr, remainder: Option<Expr>) -> Expr {
    let head = match quotient {
        Expr::Const(true) => lit(l),
        q => Expr::And(vec![lit(l), q]),
    };
    match remainder {
        None => head,
        Some(Expr::Or(mut rest)) => {
            rest.insert(0, head);
            Expr::Or(rest)
        }
        Some(r) => Expr::Or(vec![head, r]),
    }
}

/// Acceptance test for one factoring step, given the whole expression
/// before and after the step.
pub type AcceptStep<'a> = dyn Fn(&Expr, &Expr) -> bool + 'a;

/// Gate-count-only factoring: extract a literal whenever that shrinks the
/// rebuilt expression.
pub fn factor_common_literal(cover: &Cover) -> FactoredForm {
    factor_with(cover, &|before, after| after.gate_count() < before.gate_count())
}

/// Greedy single-literal factoring with a caller-supplied step filter.
///
/// At each level the literal occurring in the most cubes (ties: lowest
/// input name, positive before negative) is divided out; the step is kept
/// only if `accept` approves the whole resulting expression. Quotient and
/// remainder are then factored recursively.
pub fn factor_with(cover: &Cover, accept: &AcceptStep<'_>) -> FactoredForm {
    let cubes = cover.cube_literals();
    let mut order: Vec<usize> = (0..cover.inputs.len()).collect();
    order.sort_by(|&a, &b| cover.inputs[a].cmp(&cover.inputs[b]).then(a.cmp(&b)));
    let rank: Vec<usize> = {
        let mut r = vec![0; order.len()];
        for (pos, &i) in order.iter().enumerate() {
            r[i] = pos;
        }
        r
    };
    let identity = |e: Expr| e;
    let expr = factor_rec(&cubes, &rank, &identity, accept);
    FactoredForm {
        inputs: cover.inputs.clone(),
        expr,
    }
}

fn factor_rec(cubes: &[Vec<Literal>], rank: &[usize], wrap: &dyn Fn(Expr) -> Expr, accept: &AcceptStep<'_>) -> Expr {
    let flat = sop(cubes);
    if cubes.len() < 2 || matches!(flat, Expr::Const(_)) {
        return flat;
    }
    let mut counts: HashMap<Literal, usize> = HashMap::new();
    for c in cubes {
        for &l in c {
            *counts.entry(l).or_default() += 1;
        }
    }
    let (&best, &count) = counts
        .iter()
        .max_by(|(la, ca), (lb, cb)| {
            ca.cmp(cb)
                .then_with(|| rank[lb.0].cmp(&rank[la.0]))
                .then_with(|| la.1.cmp(&lb.1))
        })
        .expect("non-constant cover has literals");
    if count < 2 {
        return flat;
    }
    let (with, without): (Vec<_>, Vec<_>) = cubes.iter().partition(|c| c.contains(&best));
    let quotient: Vec<Vec<Literal>> = with
        .iter()
        .map(|c| c.iter().copied().filter(|&l| l != best).collect())
        .collect();
    let remainder: Vec<Vec<Literal>> = without.into_iter().cloned().collect();
    let rem_expr = |r: &[Vec<Literal>]| (!r.is_empty()).then(|| sop(r));

    let candidate = assemble(best, sop(&quotient), rem_expr(&remainder));
    if !accept(&wrap(flat.clone()), &wrap(candidate)) {
        return flat;
    }
    let rem_flat = rem_expr(&remainder);
    let q = factor_rec(
        &quotient,
        rank,
        &|qe| wrap(assemble(best, qe, rem_flat.clone())),
        accept,
    );
    let r = if remainder.is_empty() {
        None
    } else {
        let q_done = q.clone();
        Some(factor_rec(
            &remainder,
            rank,
            &|re| wrap(assemble(best, q_done.clone(), Some(re))),
            accept,
        ))
    };
    assemble(best, q, r)
}

/// Rebuilds one factored form per named output over the primary inputs
/// `inputs` (declaration order preserved). Products and sums lower to
/// left-associative 2-input gates; identical gates are shared.
pub fn rebuild(name: &str, inputs: &[String], forms: &[(String, FactoredForm)]) -> Result<Netlist> {
    let reserved: HashSet<&str> = forms
        .iter()
        .map(|(o, _)| o.as_str())
        .chain(inputs.iter().map(String::as_str))
        .collect();
    let mut rb = Rebuilder {
        b: NetlistBuilder::new(name),
        hashed: HashMap::new(),
        inverted: HashMap::new(),
        reserved,
        counter: 0,
    };
    for i in inputs {
        rb.b.add_input(i);
    }
    let mut outputs: Vec<NetId> = Vec::with_capacity(forms.len());
    for (out, form) in forms {
        if matches!(form.expr, Expr::Const(_)) {
            return Err(Error::ConstantOutput(out.clone()));
        }
        let map: Vec<NetId> = form
            .inputs
            .iter()
            .map(|n| {
                if !inputs.contains(n) {
                    return Err(Error::InvalidArgument(format!("form input `{n}` is not a primary input")));
                }
                Ok(rb.b.intern(n))
            })
            .collect::<Result<_>>()?;
        let net = rb.lower(&form.expr, &map)?;
        let is_input = inputs.iter().any(|i| rb.b.net_name(net) == i);
        let o = if rb.b.net_name(net) == out {
            net
        } else if !is_input && !outputs.contains(&net) && !rb.inverted.values().any(|&v| v == net) {
            rb.b.rename(net, out)?;
            net
        } else {
            let target = rb.b.intern(out);
            rb.b.add_gate_ids(GateKind::Buf, vec![net], target)
        };
        outputs.push(o);
    }
    for o in &outputs {
        let name = rb.b.net_name(*o).to_string();
        rb.b.add_output(&name);
    }
    rb.b.finish()
}

struct Rebuilder<'a> {
    b: NetlistBuilder,
    hashed: HashMap<(GateKind, NetId, NetId), NetId>,
    inverted: HashMap<NetId, NetId>,
    reserved: HashSet<&'a str>,
    counter: usize,
}

impl Rebuilder<'_> {
    fn fresh(&mut self, prefix: &str) -> NetId {
        loop {
            let name = format!("{prefix}{}", self.counter);
            self.counter += 1;
            if !self.reserved.contains(name.as_str()) && !self.b.contains(&name) {
                return self.b.intern(&name);
            }
        }
    }

    fn lower(&mut self, e: &Expr, map: &[NetId]) -> Result<NetId> {
        Ok(match e {
            Expr::Const(_) => return Err(Error::Internal("constant inside factored expression".into())),
            Expr::Lit { input, positive: true } => map[*input],
            Expr::Lit { input, positive: false } => {
                let x = map[*input];
                if let Some(&n) = self.inverted.get(&x) {
                    n
                } else {
                    let n = self.fresh("_inv");
                    self.b.add_gate_ids(GateKind::Not, vec![x], n);
                    self.inverted.insert(x, n);
                    n
                }
            }
            Expr::And(xs) => self.chain(GateKind::And, xs, map)?,
            Expr::Or(xs) => self.chain(GateKind::Or, xs, map)?,
        })
    }

    fn chain(&mut self, kind: GateKind, xs: &[Expr], map: &[NetId]) -> Result<NetId> {
        let mut acc = self.lower(&xs[0], map)?;
        for x in &xs[1..] {
            let rhs = self.lower(x, map)?;
            let key = (kind, acc.min(rhs), acc.max(rhs));
            acc = match self.hashed.get(&key) {
                Some(&n) => n,
                None => {
                    let n = self.fresh("_g");
                    self.b.add_gate_ids(kind, vec![acc, rhs], n);
                    self.hashed.insert(key, n);
                    n
                }
            };
        }
        Ok(acc)
    }
}
