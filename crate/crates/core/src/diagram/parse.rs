use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::LinkDiagram;
use crate::error::{Error, Result};

struct Scanner<'a> {
    s: &'a [u8],
    i: usize,
}

impl<'a> Scanner<'a> {
    fn skip_ws(&mut self) {
        while self.i < self.s.len() {
            match self.s[self.i] {
                b'#' => {
                    while self.i < self.s.len() && self.s[self.i] != b'\n' {
                        self.i += 1;
                    }
                }
                c if c.is_ascii_whitespace() || c == b',' => self.i += 1,
                _ => break,
            }
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.i).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.error(alloc::format!("expected '{}'", c as char)))
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.i;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.error("expected a number".into()));
        }
        core::str::from_utf8(&self.s[start..self.i])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.error("number out of range".into()))
    }

    fn error(&self, msg: String) -> Error {
        Error::MalformedPD(alloc::format!("{msg} at byte {}", self.i))
    }
}

/// Parses the text format: an optional `U n`, then `X(a,b,c,d)` terms, then an
/// optional `S(+,-,…)`. `#` starts a comment.
pub fn parse_pd(text: &str) -> Result<LinkDiagram> {
    let mut sc = Scanner { s: text.as_bytes(), i: 0 };
    let mut crossings = Vec::new();
    let mut free = None;
    let mut signs = None;
    loop {
        sc.skip_ws();
        let Some(c) = sc.peek() else { break };
        sc.i += 1;
        match c {
            b'U' if free.is_none() && crossings.is_empty() => free = Some(sc.number()?),
            b'X' if signs.is_none() => {
                sc.expect(b'(')?;
                let mut q = [0u32; 4];
                for slot in &mut q {
                    *slot = sc.number()?;
                }
                sc.expect(b')')?;
                crossings.push(q);
            }
            b'S' if signs.is_none() => {
                sc.expect(b'(')?;
                let mut s = Vec::new();
                loop {
                    sc.skip_ws();
                    match sc.peek() {
                        Some(b'+') => s.push(1i8),
                        Some(b'-') => s.push(-1),
                        Some(b')') => break,
                        _ => return Err(sc.error("expected '+', '-' or ')'".into())),
                    }
                    sc.i += 1;
                }
                sc.i += 1;
                signs = Some(s);
            }
            _ => {
                sc.i -= 1;
                return Err(sc.error(alloc::format!("unexpected '{}'", c as char)));
            }
        }
    }
    LinkDiagram::new(crossings, free.unwrap_or(0), signs)
}

/// Canonical text form; always carries the sign line so it reparses verbatim.
pub fn serialize(d: &LinkDiagram) -> String {
    let mut out = String::new();
    if d.free_loops() > 0 {
        let _ = writeln!(out, "U {}", d.free_loops());
    }
    let terms: Vec<String> = d
        .crossings()
        .iter()
        .map(|q| alloc::format!("X({},{},{},{})", q[0], q[1], q[2], q[3]))
        .collect();
    if !terms.is_empty() {
        let _ = writeln!(out, "{}", terms.join(" "));
        let signs: Vec<&str> = d.signs().iter().map(|&s| if s > 0 { "+" } else { "-" }).collect();
        let _ = writeln!(out, "S({})", signs.join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_with_header() {
        let d = parse_pd("U 1\n").unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.components().len(), 1);
    }

    #[test]
    fn kink_and_trefoil() {
        let k = parse_pd("X(1,2,2,1)").unwrap();
        assert_eq!(k.arc_count(), 2);
        let t = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        assert_eq!(t.crossing_count(), 3);
        assert_eq!(t.arc_count(), 6);
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_pd("X(1,2,2)"), Err(Error::MalformedPD(_))));
        assert!(matches!(parse_pd("Y(1,2,2,1)"), Err(Error::MalformedPD(_))));
        assert!(matches!(parse_pd("X(1,2,2,1) S(+,*)"), Err(Error::MalformedPD(_))));
    }

    #[test]
    fn roundtrip() {
        for text in ["U 2", "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)", "U 1\nX(1,1,2,2)", ""] {
            let d = parse_pd(text).unwrap();
            assert_eq!(parse_pd(&serialize(&d)).unwrap(), d);
        }
    }
}
