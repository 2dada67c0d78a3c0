//! ISCAS-style BENCH reader and writer.
//!
//! ```text
//! file    = { line } ;
//! line    = [ stmt ] [ "#" comment ] newline ;
//! stmt    = "INPUT" "(" name ")" | "OUTPUT" "(" name ")"
//!         | name "=" kind "(" name { "," name } ")" ;
//! kind    = "AND" | "NAND" | "OR" | "NOR" | "XOR" | "XNOR" | "NOT" | "BUF" | "BUFF" ;
//! name    = { any char except whitespace, "(", ")", ",", "=", "#" }- ;
//! ```
//!
//! Keywords and gate kinds are case-insensitive; net names are kept verbatim.

use std::fmt::Write;

use super::{GateKind, Netlist, NetlistBuilder};
use crate::error::{Error, Result};

struct Cursor {
    line: usize,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Cursor {
    fn new(line: usize, src: &str) -> Self {
        Cursor {
            line,
            chars: src.chars().enumerate().map(|(i, c)| (i + 1, c)).collect(),
            pos: 0,
        }
    }

    fn column(&self) -> usize {
        self.chars.get(self.pos).map_or(self.chars.len() + 1, |&(c, _)| c)
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|&(_, c)| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::syntax(self.line, self.column(), msg)
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.err(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.err(format!("expected `{want}`, found end of line"))),
        }
    }

    fn name(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|&(_, c)| !c.is_whitespace() && !matches!(c, '(' | ')' | ',' | '=' | '#'))
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected identifier"));
        }
        Ok(self.chars[start..self.pos].iter().map(|&(_, c)| c).collect())
    }

    fn end(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.err(format!("unexpected `{c}` after statement"))),
        }
    }
}

pub fn parse_bench(text: &str) -> Result<Netlist> {
    parse_bench_named("bench", text)
}

/// Like [`parse_bench`] but sets the design name.
pub fn parse_bench_named(name: &str, text: &str) -> Result<Netlist> {
    let mut b = NetlistBuilder::new(name);
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor::new(lineno + 1, line);
        let head = cur.name()?;
        match cur.peek() {
            Some('(') => {
                let upper = head.to_ascii_uppercase();
                if upper != "INPUT" && upper != "OUTPUT" {
                    return Err(Error::syntax(lineno + 1, 1, format!("unknown directive `{head}`")));
                }
                cur.expect('(')?;
                let net = cur.name()?;
                cur.expect(')')?;
                cur.end()?;
                if upper == "INPUT" {
                    b.add_input(&net);
                } else {
                    b.add_output(&net);
                }
            }
            Some('=') => {
                cur.expect('=')?;
                let kind_col = {
                    cur.skip_ws();
                    cur.column()
                };
                let kind_name = cur.name()?;
                let kind: GateKind = kind_name.parse().map_err(|e| match e {
                    Error::UnsupportedGate(k) => Error::UnsupportedGate(format!(
                        "{k} (line {}, column {kind_col})",
                        lineno + 1
                    )),
                    other => other,
                })?;
                cur.expect('(')?;
                let mut fanin = vec![cur.name()?];
                while cur.peek() == Some(',') {
                    cur.expect(',')?;
                    fanin.push(cur.name()?);
                }
                cur.expect(')')?;
                cur.end()?;
                let refs: Vec<&str> = fanin.iter().map(String::as_str).collect();
                b.add_gate(kind, &refs, &head);
            }
            _ => return Err(cur.err("expected `(` or `=`")),
        }
    }
    b.finish()
}

/// Writes `INPUT`, `OUTPUT`, then gate lines in stored order. No header.
pub fn write_bench(netlist: &Netlist) -> String {
    let mut s = String::new();
    for name in netlist.input_names() {
        let _ = writeln!(s, "INPUT({name})");
    }
    for name in netlist.output_names() {
        let _ = writeln!(s, "OUTPUT({name})");
    }
    for g in netlist.gates() {
        let args: Vec<&str> = g.fanin.iter().map(|&n| netlist.net_name(n)).collect();
        let _ = writeln!(s, "{} = {}({})", netlist.net_name(g.output), g.kind, args.join(", "));
    }
    s
}
