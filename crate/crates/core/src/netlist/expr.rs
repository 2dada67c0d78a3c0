//! Boolean expression front end.
//!
//! ```text
//! expr   = term { "+" term } ;
//! term   = factor { [ "*" ] factor } ;
//! factor = "!" factor | "(" expr ")" | letter ;
//! letter = "A".."Z" | "a".."z" ;
//! ```
//!
//! Each letter is a primary input (declared in alphabetical order). Sums
//! and products lower to left-associative chains of 2-input OR/AND gates.
//! `!x` on a letter is a complemented input literal; `!( ... )` lowers to a
//! NOT gate.

use std::collections::BTreeSet;

use super::{GateKind, NetId, Netlist, NetlistBuilder};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Ast {
    Lit(char, bool),
    Not(Box<Ast>),
    And(Vec<Ast>),
    Or(Vec<Ast>),
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&mut self) -> Option<char> {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
        self.chars.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::syntax(1, self.pos + 1, msg)
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut terms = vec![self.term()?];
        while self.peek() == Some('+') {
            self.pos += 1;
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Ast::Or(terms) })
    }

    fn term(&mut self) -> Result<Ast> {
        let mut factors = vec![self.factor()?];
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    factors.push(self.factor()?);
                }
                Some(c) if c == '!' || c == '(' || c.is_ascii_alphabetic() => factors.push(self.factor()?),
                _ => break,
            }
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Ast::And(factors) })
    }

    fn factor(&mut self) -> Result<Ast> {
        match self.peek() {
            Some('!') => {
                self.pos += 1;
                Ok(match self.factor()? {
                    Ast::Lit(c, positive) => Ast::Lit(c, !positive),
                    Ast::Not(inner) => *inner,
                    other => Ast::Not(Box::new(other)),
                })
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(')') => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    Some(c) => Err(self.err(format!("expected `)`, found `{c}`"))),
                    None => Err(self.err("expected `)`, found end of expression")),
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                self.pos += 1;
                Ok(Ast::Lit(c, true))
            }
            Some(c) => Err(self.err(format!("unexpected `{c}`"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

fn collect_letters(ast: &Ast, out: &mut BTreeSet<char>) {
    match ast {
        Ast::Lit(c, _) => {
            out.insert(*c);
        }
        Ast::Not(inner) => collect_letters(inner, out),
        Ast::And(xs) | Ast::Or(xs) => xs.iter().for_each(|x| collect_letters(x, out)),
    }
}

struct Lowering {
    b: NetlistBuilder,
    literals: std::collections::HashMap<char, NetId>,
}

impl Lowering {
    fn literal(&mut self, c: char, positive: bool) -> NetId {
        let input = self.b.intern(&c.to_string());
        if positive {
            return input;
        }
        if let Some(&n) = self.literals.get(&c) {
            return n;
        }
        let base = format!("{c}_n");
        let name = if self.b.contains(&base) { self.b.fresh_name(&base) } else { base };
        let net = self.b.intern(&name);
        self.b.add_gate_ids(GateKind::Not, vec![input], net);
        self.literals.insert(c, net);
        net
    }

    fn lower(&mut self, ast: &Ast) -> NetId {
        match ast {
            Ast::Lit(c, positive) => self.literal(*c, *positive),
            Ast::Not(inner) => {
                let x = self.lower(inner);
                self.b.add_fresh_gate(GateKind::Not, vec![x], "n")
            }
            Ast::And(xs) => self.chain(GateKind::And, xs),
            Ast::Or(xs) => self.chain(GateKind::Or, xs),
        }
    }

    fn chain(&mut self, kind: GateKind, xs: &[Ast]) -> NetId {
        let mut acc = self.lower(&xs[0]);
        for x in &xs[1..] {
            let rhs = self.lower(x);
            acc = self.b.add_fresh_gate(kind, vec![acc, rhs], "n");
        }
        acc
    }
}

/// Builds a single-output netlist named `name` from a Boolean expression.
pub fn parse_expr(name: &str, expr: &str) -> Result<Netlist> {
    let mut p = Parser {
        chars: expr.chars().collect(),
        pos: 0,
    };
    if p.peek().is_none() {
        return Err(Error::InvalidArgument("empty expression".into()));
    }
    let ast = p.expr()?;
    if let Some(c) = p.peek() {
        return Err(p.err(format!("unexpected `{c}`")));
    }
    let mut letters = BTreeSet::new();
    collect_letters(&ast, &mut letters);
    if letters.iter().any(|c| c.to_string() == name) {
        return Err(Error::InvalidArgument(format!(
            "output name `{name}` collides with an input letter"
        )));
    }

    let mut low = Lowering {
        b: NetlistBuilder::new(name),
        literals: Default::default(),
    };
    for c in &letters {
        low.b.add_input(&c.to_string());
    }
    let root = match &ast {
        Ast::Lit(c, positive) => {
            let input = low.b.intern(&c.to_string());
            let kind = if *positive { GateKind::Buf } else { GateKind::Not };
            low.b.add_fresh_gate(kind, vec![input], "n")
        }
        other => low.lower(other),
    };
    low.b.rename(root, name)?;
    low.b.add_output(name);
    low.b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::TestVector;

    fn truth(n: &Netlist) -> Vec<bool> {
        let k = n.inputs().len();
        (0..1u64 << k)
            .map(|c| n.evaluate_outputs(&TestVector::from_index(c, k)).unwrap()[0])
            .collect()
    }

    #[test]
    fn single_and() {
        let n = parse_expr("X", "AB").unwrap();
        assert_eq!(n.gate_count(), 1);
        assert_eq!(n.num_nets(), 3);
        assert_eq!(n.input_names(), vec!["A", "B"]);
        assert_eq!(truth(&n), vec![false, false, false, true]);
    }

    #[test]
    fn reconvergent_original_has_six_counted_gates() {
        let n = parse_expr("X", "(CB+A!C)A+DA").unwrap();
        assert_eq!(n.gate_count(), 6);
        assert_eq!(n.signal_universe().len(), 6);
        // one literal inverter, not counted
        assert_eq!(n.gates().len(), 7);
    }

    #[test]
    fn reconvergent_optimized_has_five_gates() {
        assert_eq!(parse_expr("X", "(AB+A!C)+DA").unwrap().gate_count(), 5);
    }

    #[test]
    fn small_expression_gate_counts() {
        assert_eq!(parse_expr("X", "AB+BC(B+C)").unwrap().gate_count(), 5);
        assert_eq!(parse_expr("X", "AC+A!B!C+ABC").unwrap().gate_count(), 7);
        assert_eq!(parse_expr("X", "ADC+ABD").unwrap().gate_count(), 5);
    }

    #[test]
    fn star_and_juxtaposition_agree() {
        assert_eq!(truth(&parse_expr("X", "A*B+C").unwrap()), truth(&parse_expr("X", "AB+C").unwrap()));
    }

    #[test]
    fn negated_subexpression_adds_counted_not() {
        let n = parse_expr("X", "!(AB)+C").unwrap();
        assert_eq!(n.gate_count(), 3);
        assert_eq!(truth(&n), truth(&parse_expr("X", "!A+!B+C").unwrap()));
    }

    #[test]
    fn literal_inverter_is_shared() {
        let n = parse_expr("X", "A!C+B!C").unwrap();
        assert_eq!(n.gates().iter().filter(|g| g.kind == GateKind::Not).count(), 1);
    }

    #[test]
    fn bare_literal_becomes_buffer() {
        let n = parse_expr("X", "A").unwrap();
        assert_eq!(n.gate_count(), 1);
        assert_eq!(truth(&n), vec![false, true]);
        let n = parse_expr("X", "!A").unwrap();
        assert_eq!(truth(&n), vec![true, false]);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_expr("X", "  "), Err(Error::InvalidArgument(_))));
        assert!(matches!(parse_expr("X", "A+"), Err(Error::Syntax { column: 3, .. })));
        assert!(matches!(parse_expr("X", "(AB"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("X", "A)"), Err(Error::Syntax { column: 2, .. })));
        assert!(matches!(parse_expr("A", "AB"), Err(Error::InvalidArgument(_))));
    }
}
