//! Loader for `data/case_tables.txt`: selector-indexed pairs of affine forms
//! that must not vanish mod 9.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const SOURCE: &str = include_str!("../../data/case_tables.txt");

/// Integer affine form over variables x0, x1, ... of one letter.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AffineForm {
    pub coeffs: BTreeMap<usize, i64>,
    pub constant: i64,
}

impl AffineForm {
    fn scale(mut self, k: i64) -> Self {
        self.constant *= k;
        for c in self.coeffs.values_mut() {
            *c *= k;
        }
        self
    }

    fn add(mut self, other: AffineForm, sign: i64) -> Self {
        self.constant += sign * other.constant;
        for (i, c) in other.coeffs {
            *self.coeffs.entry(i).or_insert(0) += sign * c;
        }
        self
    }

    fn is_constant(&self) -> bool {
        self.coeffs.values().all(|&c| c == 0)
    }

    /// Value modulo m, with missing variables read as 0.
    pub fn eval_mod(&self, vars: &[i64], m: i64) -> i64 {
        let mut acc = self.constant.rem_euclid(m);
        for (&i, &c) in &self.coeffs {
            let v = vars.get(i).copied().unwrap_or(0);
            acc = (acc + c.rem_euclid(m) * v.rem_euclid(m)) % m;
        }
        acc
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    letter: u8,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<i64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| self.err("expected a number"))
    }

    fn variable(&mut self) -> Result<usize> {
        if self.peek() != Some(self.letter) {
            return Err(self.err("expected a variable"));
        }
        self.pos += 1;
        Ok(self.number()? as usize)
    }

    fn expr(&mut self) -> Result<AffineForm> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(self.term()?, 1);
            } else if self.eat(b'-') {
                acc = acc.add(self.term()?, -1);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<AffineForm> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let rhs = self.factor()?;
            acc = if acc.is_constant() {
                rhs.scale(acc.constant)
            } else if rhs.is_constant() {
                acc.scale(rhs.constant)
            } else {
                return Err(self.err("product of two non-constant forms"));
            };
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<AffineForm> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.factor()?.scale(-1))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(AffineForm { constant: self.number()?, ..Default::default() }),
            Some(b's') if self.src[self.pos..].starts_with(b"sum(") => {
                self.pos += 4;
                let lo = self.variable()?;
                if !(self.eat(b'.') && self.eat(b'.')) {
                    return Err(self.err("expected '..'"));
                }
                let hi = self.variable()?;
                if !self.eat(b')') || hi < lo {
                    return Err(self.err("malformed sum range"));
                }
                Ok(AffineForm { coeffs: (lo..=hi).map(|i| (i, 1)).collect(), constant: 0 })
            }
            _ => {
                let i = self.variable()?;
                Ok(AffineForm { coeffs: BTreeMap::from([(i, 1)]), constant: 0 })
            }
        }
    }
}

/// Parses an affine expression in variables `<letter><index>`.
pub fn parse_form(text: &str, letter: char) -> Result<AffineForm> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, letter: letter as u8 };
    let f = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(f)
}

#[derive(Clone, Debug)]
pub struct Case {
    pub label: String,
    pub selector: [i64; 6],
    pub forms: [AffineForm; 2],
    pub texts: [String; 2],
}

#[derive(Clone, Debug)]
pub struct CaseTable {
    pub name: String,
    pub letter: char,
    pub cases: Vec<Case>,
}

impl CaseTable {
    pub fn lookup(&self, selector: &[i64; 6]) -> Option<&Case> {
        self.cases.iter().find(|c| &c.selector == selector)
    }
}

#[derive(Clone, Debug)]
pub struct CaseTables {
    pub variants: BTreeMap<String, String>,
    pub tables: BTreeMap<String, CaseTable>,
}

impl CaseTables {
    pub fn parse(src: &str) -> Result<Self> {
        let mut variants = BTreeMap::new();
        let mut tables: BTreeMap<String, CaseTable> = BTreeMap::new();
        for (lineno, raw) in src.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: &str| Error::Parse { pos: lineno + 1, msg: format!("case tables: {msg}") };
            if let Some(rest) = line.strip_prefix("variant ") {
                let (k, v) = rest.split_once('=').ok_or_else(|| bad("variant needs '='"))?;
                variants.insert(k.trim().to_string(), v.trim().to_string());
                continue;
            }
            let parts: Vec<&str> = line.split('|').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(bad("expected three '|'-separated fields"));
            }
            let head: Vec<&str> = parts[0].split_whitespace().collect();
            if head.len() != 3 {
                return Err(bad("expected '<table> <case> <selector>'"));
            }
            let letter = match head[0] {
                "deg8" => 'a',
                "ergbm" => 'c',
                "ergbm2" => 'b',
                other => return Err(bad(&format!("unknown table {other}"))),
            };
            let sel: Vec<i64> =
                head[2].split(',').map(|s| s.parse().map_err(|_| bad("bad selector"))).collect::<Result<_>>()?;
            let selector: [i64; 6] = sel.try_into().map_err(|_| bad("selector needs six entries"))?;
            let forms = [parse_form(parts[1], letter)?, parse_form(parts[2], letter)?];
            let table = tables.entry(head[0].to_string()).or_insert_with(|| CaseTable {
                name: head[0].to_string(),
                letter,
                cases: Vec::new(),
            });
            if table.lookup(&selector).is_some() {
                return Err(bad("duplicate selector"));
            }
            table.cases.push(Case {
                label: head[1].to_string(),
                selector,
                forms,
                texts: [parts[1].to_string(), parts[2].to_string()],
            });
        }
        Ok(Self { variants, tables })
    }

    pub fn table(&self, name: &str) -> &CaseTable {
        &self.tables[name]
    }
}

/// The embedded tables, parsed once.
pub fn case_tables() -> &'static CaseTables {
    static TABLES: OnceLock<CaseTables> = OnceLock::new();
    TABLES.get_or_init(|| CaseTables::parse(SOURCE).expect("embedded case tables parse"))
}
