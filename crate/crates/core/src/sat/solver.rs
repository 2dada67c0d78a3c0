//! Conflict-driven clause-learning solver: two watched literals, first-UIP
//! learning, VSIDS-style activities with index tie-breaking, phase saving
//! and Luby restarts. No randomness anywhere.

use super::{Cnf, SatOutcome};

type Lit = u32;

const UNDEF: u8 = 0;
const TRUE: u8 = 1;
const FALSE: u8 = 2;
const NO_REASON: usize = usize::MAX;
const RESTART_BASE: u64 = 100;

fn to_lit(dimacs: i32) -> Lit {
    let v = dimacs.unsigned_abs() - 1;
    v * 2 + u32::from(dimacs < 0)
}

fn var(l: Lit) -> usize {
    (l >> 1) as usize
}

fn luby(mut i: u64) -> u64 {
    // 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != i {
        size = (size - 1) >> 1;
        seq -= 1;
        i %= size;
    }
    1 << seq
}

pub(super) struct Solver {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    assigns: Vec<u8>,
    level: Vec<u32>,
    reason: Vec<usize>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    heap: Heap,
    saved_neg: Vec<bool>,
    seen: Vec<bool>,
    unsat: bool,
    pub(super) decisions: u64,
    pub(super) conflicts: u64,
}

impl Solver {
    pub(super) fn new(cnf: &Cnf) -> Self {
        let n = cnf.num_vars;
        let mut s = Solver {
            clauses: Vec::with_capacity(cnf.clauses.len()),
            watches: vec![Vec::new(); 2 * n],
            assigns: vec![UNDEF; n],
            level: vec![0; n],
            reason: vec![NO_REASON; n],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; n],
            var_inc: 1.0,
            heap: Heap::new(n),
            saved_neg: vec![true; n],
            seen: vec![false; n],
            unsat: false,
            decisions: 0,
            conflicts: 0,
        };
        for c in &cnf.clauses {
            s.add_input_clause(c);
        }
        s
    }

    fn value(&self, l: Lit) -> u8 {
        match self.assigns[var(l)] {
            UNDEF => UNDEF,
            a => {
                if (a == TRUE) != (l & 1 == 1) {
                    TRUE
                } else {
                    FALSE
                }
            }
        }
    }

    fn add_input_clause(&mut self, c: &[i32]) {
        if self.unsat {
            return;
        }
        let mut lits: Vec<Lit> = c.iter().map(|&l| to_lit(l)).collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] ^ 1 == w[1]) {
            return;
        }
        match lits.len() {
            0 => self.unsat = true,
            1 => match self.value(lits[0]) {
                FALSE => self.unsat = true,
                TRUE => {}
                _ => self.enqueue(lits[0], NO_REASON),
            },
            _ => {
                self.attach(lits);
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>) -> usize {
        let ci = self.clauses.len();
        self.watches[lits[0] as usize].push(ci);
        self.watches[lits[1] as usize].push(ci);
        self.clauses.push(lits);
        ci
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    fn enqueue(&mut self, l: Lit, reason: usize) {
        let v = var(l);
        self.assigns[v] = if l & 1 == 1 { FALSE } else { TRUE };
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let false_lit = self.trail[self.qhead] ^ 1;
            self.qhead += 1;
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let (mut i, mut j) = (0, 0);
            let mut conflict = None;
            while i < ws.len() {
                let ci = ws[i];
                i += 1;
                if self.clauses[ci][0] == false_lit {
                    self.clauses[ci].swap(0, 1);
                }
                let first = self.clauses[ci][0];
                if self.value(first) == TRUE {
                    ws[j] = ci;
                    j += 1;
                    continue;
                }
                let len = self.clauses[ci].len();
                let mut moved = false;
                for k in 2..len {
                    let lk = self.clauses[ci][k];
                    if self.value(lk) != FALSE {
                        self.clauses[ci].swap(1, k);
                        self.watches[lk as usize].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = ci;
                j += 1;
                if self.value(first) == FALSE {
                    conflict = Some(ci);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                } else {
                    self.enqueue(first, ci);
                }
            }
            ws.truncate(j);
            self.watches[false_lit as usize] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v, &self.activity);
    }

    fn analyze(&mut self, mut confl: usize) -> (Vec<Lit>, usize) {
        let current = self.decision_level() as u32;
        let mut learnt: Vec<Lit> = vec![0];
        let mut pending = 0usize;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        loop {
            let start = usize::from(p.is_some());
            for k in start..self.clauses[confl].len() {
                let q = self.clauses[confl][k];
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump(v);
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        pending += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[var(self.trail[idx])] {
                    break;
                }
            }
            let lit = self.trail[idx];
            let v = var(lit);
            self.seen[v] = false;
            pending -= 1;
            p = Some(lit);
            if pending == 0 {
                break;
            }
            confl = self.reason[v];
        }
        learnt[0] = p.expect("conflict has a UIP") ^ 1;
        for &l in &learnt[1..] {
            self.seen[var(l)] = false;
        }
        let mut bt = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for k in 2..learnt.len() {
                if self.level[var(learnt[k])] > self.level[var(learnt[max_i])] {
                    max_i = k;
                }
            }
            learnt.swap(1, max_i);
            bt = self.level[var(learnt[1])] as usize;
        }
        (learnt, bt)
    }

    fn cancel_until(&mut self, lvl: usize) {
        if self.decision_level() <= lvl {
            return;
        }
        let keep = self.trail_lim[lvl];
        for k in (keep..self.trail.len()).rev() {
            let l = self.trail[k];
            let v = var(l);
            self.saved_neg[v] = l & 1 == 1;
            self.assigns[v] = UNDEF;
            self.reason[v] = NO_REASON;
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(keep);
        self.trail_lim.truncate(lvl);
        self.qhead = keep;
    }

    fn pick_branch(&mut self) -> Option<usize> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assigns[v] == UNDEF {
                return Some(v);
            }
        }
        None
    }

    pub(super) fn solve(&mut self, assumptions: &[i32], budget: u64) -> SatOutcome {
        if self.unsat {
            return SatOutcome::Unsat;
        }
        let assumptions: Vec<Lit> = assumptions.iter().map(|&l| to_lit(l)).collect();
        let mut restart_idx = 0u64;
        let mut restart_left = luby(restart_idx) * RESTART_BASE;
        loop {
            if let Some(confl) = self.propagate() {
                self.conflicts += 1;
                if self.decision_level() == 0 {
                    self.unsat = true;
                    return SatOutcome::Unsat;
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let asserting = learnt[0];
                    let ci = self.attach(learnt);
                    self.enqueue(asserting, ci);
                }
                self.var_inc /= 0.95;
                restart_left -= 1;
                if restart_left == 0 {
                    restart_idx += 1;
                    restart_left = luby(restart_idx) * RESTART_BASE;
                    self.cancel_until(0);
                }
                continue;
            }
            if self.decision_level() < assumptions.len() {
                let a = assumptions[self.decision_level()];
                match self.value(a) {
                    TRUE => self.trail_lim.push(self.trail.len()),
                    FALSE => {
                        self.cancel_until(0);
                        return SatOutcome::Unsat;
                    }
                    _ => {
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(a, NO_REASON);
                    }
                }
                continue;
            }
            let Some(v) = self.pick_branch() else {
                let model = self.assigns.iter().map(|&a| a == TRUE).collect();
                self.cancel_until(0);
                return SatOutcome::Sat(model);
            };
            if self.decisions >= budget {
                self.heap.insert(v, &self.activity);
                self.cancel_until(0);
                return SatOutcome::BudgetExceeded;
            }
            self.decisions += 1;
            self.trail_lim.push(self.trail.len());
            let l = (v as u32) * 2 + u32::from(self.saved_neg[v]);
            self.enqueue(l, NO_REASON);
        }
    }
}

/// Max-heap over variables keyed by activity; equal activities pop the
/// lowest index first.
struct Heap {
    items: Vec<usize>,
    pos: Vec<usize>,
}

const ABSENT: usize = usize::MAX;

impl Heap {
    fn new(n: usize) -> Self {
        Heap {
            items: (0..n).collect(),
            pos: (0..n).collect(),
        }
    }

    fn before(a: usize, b: usize, act: &[f64]) -> bool {
        act[a] > act[b] || (act[a] == act[b] && a < b)
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.items[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if !Self::before(v, self.items[parent], act) {
                break;
            }
            self.items[i] = self.items[parent];
            self.pos[self.items[i]] = i;
            i = parent;
        }
        self.items[i] = v;
        self.pos[v] = i;
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.items[i];
        loop {
            let l = 2 * i + 1;
            if l >= self.items.len() {
                break;
            }
            let r = l + 1;
            let child = if r < self.items.len() && Self::before(self.items[r], self.items[l], act) {
                r
            } else {
                l
            };
            if !Self::before(self.items[child], v, act) {
                break;
            }
            self.items[i] = self.items[child];
            self.pos[self.items[i]] = i;
            i = child;
        }
        self.items[i] = v;
        self.pos[v] = i;
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.pos[v] != ABSENT {
            return;
        }
        self.items.push(v);
        self.pos[v] = self.items.len() - 1;
        self.up(self.items.len() - 1, act);
    }

    fn increased(&mut self, v: usize, act: &[f64]) {
        if self.pos[v] != ABSENT {
            self.up(self.pos[v], act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.items.first()?;
        let last = self.items.pop().expect("nonempty");
        self.pos[top] = ABSENT;
        if !self.items.is_empty() {
            self.items[0] = last;
            self.pos[last] = 0;
            self.down(0, act);
        }
        Some(top)
    }
}
