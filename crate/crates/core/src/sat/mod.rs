//! CNF formulas, Tseitin encoding of netlists and a deterministic CDCL
//! solver.

mod solver;

use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::netlist::{GateKind, NetId, Netlist, TestVector};

/// Decision budget applied per solver call unless overridden.
pub const DEFAULT_DECISION_BUDGET: u64 = 10_000_000;

/// Clauses over variables `1..=num_vars`; a literal is a signed variable
/// index, negative meaning complemented.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    pub fn new(num_vars: usize) -> Self {
        Cnf {
            num_vars,
            clauses: Vec::new(),
        }
    }

    fn check_lit(&self, l: i32) -> Result<()> {
        if l == 0 || l.unsigned_abs() as usize > self.num_vars {
            return Err(Error::InvalidArgument(format!(
                "literal {l} outside variables 1..={}",
                self.num_vars
            )));
        }
        Ok(())
    }

    /// Appends a clause. An empty clause is accepted and makes the formula
    /// unsatisfiable.
    pub fn add_clause(&mut self, lits: &[i32]) -> Result<()> {
        for &l in lits {
            self.check_lit(l)?;
        }
        self.clauses.push(lits.to_vec());
        Ok(())
    }

    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| lit_value(model, l)))
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let _ = write!(s, "{l} ");
            }
            s.push_str("0\n");
        }
        s
    }

    pub fn from_dimacs(text: &str) -> Result<Self> {
        let mut cnf: Option<Cnf> = None;
        let mut current: Vec<i32> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let f: Vec<&str> = rest.split_whitespace().collect();
                let vars = match f.as_slice() {
                    ["cnf", v, _] => v.parse::<usize>().ok(),
                    _ => None,
                }
                .ok_or_else(|| Error::syntax(i + 1, 1, "malformed problem line"))?;
                cnf = Some(Cnf::new(vars));
                continue;
            }
            let c = cnf
                .as_mut()
                .ok_or_else(|| Error::syntax(i + 1, 1, "clause before problem line"))?;
            for tok in line.split_whitespace() {
                let l: i32 = tok
                    .parse()
                    .map_err(|_| Error::syntax(i + 1, 1, format!("bad literal `{tok}`")))?;
                if l == 0 {
                    c.add_clause(&current)?;
                    current.clear();
                } else {
                    current.push(l);
                }
            }
        }
        let mut cnf = cnf.ok_or_else(|| Error::syntax(1, 1, "missing problem line"))?;
        if !current.is_empty() {
            cnf.add_clause(&current)?;
        }
        Ok(cnf)
    }
}

/// Value of a DIMACS literal under a model indexed by `variable - 1`.
pub fn lit_value(model: &[bool], lit: i32) -> bool {
    model[lit.unsigned_abs() as usize - 1] == (lit > 0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatOutcome {
    /// Full assignment, indexed by `variable - 1`.
    Sat(Vec<bool>),
    Unsat,
    BudgetExceeded,
}

pub fn solve(cnf: &Cnf, assumptions: &[i32]) -> Result<SatOutcome> {
    solve_with_budget(cnf, assumptions, DEFAULT_DECISION_BUDGET)
}

pub fn solve_with_budget(cnf: &Cnf, assumptions: &[i32], budget: u64) -> Result<SatOutcome> {
    for &a in assumptions {
        cnf.check_lit(a)?;
    }
    let mut s = solver::Solver::new(cnf);
    let out = s.solve(assumptions, budget);
    log::trace!("sat: {} decisions, {} conflicts", s.decisions, s.conflicts);
    Ok(out)
}

/// Net ↔ variable correspondence: net `i` is variable `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarMap {
    num_nets: usize,
}

impl VarMap {
    pub fn var(&self, net: NetId) -> i32 {
        net.0 as i32 + 1
    }

    pub fn lit(&self, net: NetId, value: bool) -> i32 {
        if value {
            self.var(net)
        } else {
            -self.var(net)
        }
    }

    pub fn net(&self, var: i32) -> Option<NetId> {
        let v = var.unsigned_abs() as usize;
        (1..=self.num_nets).contains(&v).then(|| NetId(v as u32 - 1))
    }

    pub fn len(&self) -> usize {
        self.num_nets
    }

    pub fn is_empty(&self) -> bool {
        self.num_nets == 0
    }
}

pub fn tseitin(netlist: &Netlist) -> (Cnf, VarMap) {
    let map = VarMap {
        num_nets: netlist.num_nets(),
    };
    let mut cnf = Cnf::new(netlist.num_nets());
    for g in netlist.gates() {
        let z = map.var(g.output);
        let ins: Vec<i32> = g.fanin.iter().map(|&n| map.var(n)).collect();
        encode_gate(&mut cnf.clauses, g.kind, z, &ins);
    }
    (cnf, map)
}

fn encode_gate(out: &mut Vec<Vec<i32>>, kind: GateKind, z: i32, ins: &[i32]) {
    // Inverting kinds encode the base function on ¬z.
    let (base, zl) = match kind {
        GateKind::Nand => (GateKind::And, -z),
        GateKind::Nor => (GateKind::Or, -z),
        GateKind::Xnor => (GateKind::Xor, -z),
        GateKind::Not => (GateKind::Buf, -z),
        k => (k, z),
    };
    match base {
        GateKind::And => {
            for &a in ins {
                out.push(vec![-zl, a]);
            }
            let mut big = vec![zl];
            big.extend(ins.iter().map(|a| -a));
            out.push(big);
        }
        GateKind::Or => {
            for &a in ins {
                out.push(vec![zl, -a]);
            }
            let mut big = vec![-zl];
            big.extend_from_slice(ins);
            out.push(big);
        }
        GateKind::Xor => {
            let (a, b) = (ins[0], ins[1]);
            out.push(vec![-zl, a, b]);
            out.push(vec![-zl, -a, -b]);
            out.push(vec![zl, -a, b]);
            out.push(vec![zl, a, -b]);
        }
        GateKind::Buf => {
            out.push(vec![-zl, ins[0]]);
            out.push(vec![zl, -ins[0]]);
        }
        _ => unreachable!("inverting kinds mapped above"),
    }
}

/// Result of one assignability query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Assignability {
    Witness(TestVector),
    Impossible,
    BudgetExceeded,
}

/// A netlist encoded once and queried repeatedly; safe to share across
/// threads.
#[derive(Debug)]
pub struct SatOracle<'a> {
    netlist: &'a Netlist,
    cnf: Cnf,
    map: VarMap,
    budget: u64,
    queries: AtomicU64,
}

impl<'a> SatOracle<'a> {
    pub fn new(netlist: &'a Netlist) -> Self {
        Self::with_budget(netlist, DEFAULT_DECISION_BUDGET)
    }

    pub fn with_budget(netlist: &'a Netlist, budget: u64) -> Self {
        let (cnf, map) = tseitin(netlist);
        SatOracle {
            netlist,
            cnf,
            map,
            budget,
            queries: AtomicU64::new(0),
        }
    }

    pub fn netlist(&self) -> &Netlist {
        self.netlist
    }

    /// Number of solver calls made so far.
    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    /// Finds a primary-input vector putting every constrained net at its
    /// value. A returned witness has been checked by simulation.
    pub fn query(&self, constraints: &[(NetId, bool)]) -> Result<Assignability> {
        for &(n, _) in constraints {
            if n.index() >= self.netlist.num_nets() {
                return Err(Error::InvalidArgument(format!("net id {} out of range", n.0)));
            }
        }
        self.queries.fetch_add(1, Ordering::Relaxed);
        let assumptions: Vec<i32> = constraints.iter().map(|&(n, v)| self.map.lit(n, v)).collect();
        match solve_with_budget(&self.cnf, &assumptions, self.budget)? {
            SatOutcome::Unsat => Ok(Assignability::Impossible),
            SatOutcome::BudgetExceeded => Ok(Assignability::BudgetExceeded),
            SatOutcome::Sat(model) => {
                let bits = self
                    .netlist
                    .inputs()
                    .iter()
                    .map(|&i| model[self.map.var(i) as usize - 1])
                    .collect();
                let v = TestVector::new(bits);
                let values = self.netlist.evaluate(&v)?;
                if constraints.iter().any(|&(n, b)| values[n.index()] != b) {
                    return Err(Error::Internal("solver witness fails simulation".into()));
                }
                Ok(Assignability::Witness(v))
            }
        }
    }
}

/// One-shot assignability check. A query that runs out of budget is
/// reported as `None` and logged.
pub fn check_assignable(netlist: &Netlist, constraints: &[(NetId, bool)]) -> Result<Option<TestVector>> {
    match SatOracle::new(netlist).query(constraints)? {
        Assignability::Witness(v) => Ok(Some(v)),
        Assignability::Impossible => Ok(None),
        Assignability::BudgetExceeded => {
            log::warn!("assignability query exceeded the decision budget; treating as infeasible");
            Ok(None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{parse_bench, parse_expr};

    fn cnf(n: usize, cs: &[&[i32]]) -> Cnf {
        let mut c = Cnf::new(n);
        for cl in cs {
            c.add_clause(cl).unwrap();
        }
        c
    }

    #[test]
    fn trivial_unsat() {
        assert_eq!(solve(&cnf(1, &[&[1], &[-1]]), &[]).unwrap(), SatOutcome::Unsat);
        assert_eq!(solve(&cnf(1, &[&[]]), &[]).unwrap(), SatOutcome::Unsat);
    }

    #[test]
    fn assumption_forces_propagation() {
        match solve(&cnf(2, &[&[1, 2]]), &[-1]).unwrap() {
            SatOutcome::Sat(m) => assert_eq!(m, vec![false, true]),
            o => panic!("{o:?}"),
        }
        assert_eq!(solve(&cnf(1, &[&[1]]), &[-1]).unwrap(), SatOutcome::Unsat);
    }

    #[test]
    fn rejects_bad_literals() {
        let mut c = Cnf::new(2);
        assert!(c.add_clause(&[3]).is_err());
        assert!(c.add_clause(&[0]).is_err());
        assert!(solve(&c, &[5]).is_err());
    }

    #[test]
    fn pigeonhole_unsat() {
        // 4 pigeons, 3 holes: var p*3+h+1.
        let mut c = Cnf::new(12);
        for p in 0..4 {
            c.add_clause(&[(p * 3 + 1), (p * 3 + 2), (p * 3 + 3)]).unwrap();
        }
        for h in 0..3 {
            for p in 0..4 {
                for q in p + 1..4 {
                    c.add_clause(&[-(p * 3 + h + 1), -(q * 3 + h + 1)]).unwrap();
                }
            }
        }
        assert_eq!(solve(&c, &[]).unwrap(), SatOutcome::Unsat);
    }

    #[test]
    fn budget_exceeded_is_distinct() {
        let mut c = Cnf::new(30);
        for v in 1..30 {
            c.add_clause(&[v, v + 1]).unwrap();
        }
        assert_eq!(solve_with_budget(&c, &[], 0).unwrap(), SatOutcome::BudgetExceeded);
        assert!(matches!(solve(&c, &[]).unwrap(), SatOutcome::Sat(_)));
    }

    #[test]
    fn dimacs_roundtrip() {
        let c = cnf(3, &[&[1, -2], &[2, 3], &[-1]]);
        let text = c.to_dimacs();
        assert!(text.starts_with("p cnf 3 3\n"));
        assert_eq!(Cnf::from_dimacs(&text).unwrap(), c);
        let with_comments = format!("c hello\n{text}");
        assert_eq!(Cnf::from_dimacs(&with_comments).unwrap(), c);
        assert!(Cnf::from_dimacs("1 2 0\n").is_err());
    }

    #[test]
    fn and_encoding_clauses() {
        let n = parse_bench("INPUT(A)\nINPUT(B)\nOUTPUT(Z)\nZ = AND(A, B)\n").unwrap();
        let (c, m) = tseitin(&n);
        let (a, b, z) = (
            m.var(n.net_id("A").unwrap()),
            m.var(n.net_id("B").unwrap()),
            m.var(n.net_id("Z").unwrap()),
        );
        assert_eq!(c.clauses, vec![vec![-z, a], vec![-z, b], vec![z, -a, -b]]);
        let n = parse_bench("INPUT(A)\nOUTPUT(Z)\nZ = NOT(A)\n").unwrap();
        assert_eq!(tseitin(&n).0.clauses.len(), 2);
    }

    #[test]
    fn unique_activating_input() {
        let n = parse_expr("X", "ABC").unwrap();
        let (c, m) = tseitin(&n);
        let x = n.net_id("X").unwrap();
        match solve(&c, &[m.lit(x, true)]).unwrap() {
            SatOutcome::Sat(model) => {
                for i in n.inputs() {
                    assert!(model[m.var(*i) as usize - 1]);
                }
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn assignable_queries() {
        let n = parse_bench("INPUT(A)\nINPUT(B)\nOUTPUT(X)\nOUTPUT(Y)\nX = AND(A, B)\nY = NOR(A, B)\n").unwrap();
        let (x, y) = (n.net_id("X").unwrap(), n.net_id("Y").unwrap());
        assert_eq!(check_assignable(&n, &[(x, true)]).unwrap().unwrap().to_bitstring(), "11");
        assert_eq!(check_assignable(&n, &[(x, true), (y, true)]).unwrap(), None);
    }

    #[test]
    fn assignable_inner_node() {
        let n = parse_expr("X", "(CB+A!C)A+DA").unwrap();
        // the AND of the first OR with A
        let g = n
            .gates()
            .iter()
            .find(|g| {
                g.kind == GateKind::And
                    && g.fanin.iter().any(|&f| n.net_name(f) == "A")
                    && g.fanin.iter().any(|&f| n.driving_gate(f).is_some_and(|d| d.kind == GateKind::Or))
            })
            .unwrap();
        let v = check_assignable(&n, &[(g.output, true)]).unwrap().unwrap();
        let (a, b, c) = (v.get(0), v.get(1), v.get(2));
        assert!(a && (!c || b));
    }

    #[test]
    fn oracle_counts_queries() {
        let n = parse_expr("X", "AB").unwrap();
        let o = SatOracle::new(&n);
        let x = n.net_id("X").unwrap();
        o.query(&[(x, true)]).unwrap();
        o.query(&[(x, false)]).unwrap();
        assert_eq!(o.queries(), 2);
        assert!(o.query(&[(NetId(99), true)]).is_err());
    }
}
