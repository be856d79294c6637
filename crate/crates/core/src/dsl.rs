//! A line-oriented text format for contexts.
//!
//! ```text
//! # Z6 x Z6 over itself
//! ring 6 x 6
//! module [6] x [6]
//! submodule P = gen (0|1)
//! phi f = zero
//! phi t = table { P -> P, default empty }
//! multset S = gen (3|1)
//! cap 1024
//! ```
//!
//! Elements list residues per block, comma separated, with ring factors
//! separated by `|`. Ring elements carry one residue per factor. A ring with
//! several factors is split after the first one (override with `split K`)
//! so that `product` φ functions apply.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Diagnostic, Error, Result};
use crate::module::{ModuleCtx, MultSet, Submodule};
use crate::phi::{PhiSpec, PhiTable};
use crate::ring::FiniteRing;

/// A module element written as residues grouped by ring factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElemLit(pub Vec<Vec<u64>>);

/// A ring element written as one residue per factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingLit(pub Vec<u64>);

/// Right-hand side of a table entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableValue {
    Empty,
    Sub(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhiDef {
    Empty,
    Zero,
    PhiN(u32),
    Omega,
    Product(String, String),
    /// Entries in order; unlisted submodules map to the empty set.
    Table(Vec<(String, TableValue)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Submodule { name: String, gens: Vec<ElemLit> },
    Phi { name: String, def: PhiDef },
    MultSet { name: String, gens: Vec<RingLit> },
}

impl Item {
    pub fn name(&self) -> &str {
        match self {
            Item::Submodule { name, .. } | Item::Phi { name, .. } | Item::MultSet { name, .. } => {
                name
            }
        }
    }
}

/// A validated context description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextSpec {
    pub moduli: Vec<u64>,
    /// Block orders per ring factor.
    pub blocks: Vec<Vec<u64>>,
    /// Split point for multi-factor rings; `None` means after the first factor.
    pub split: Option<usize>,
    pub cap: Option<usize>,
    pub items: Vec<Item>,
}

/// A spec turned into live objects, names kept in declaration order.
#[derive(Clone, Debug)]
pub struct Session {
    pub ctx: ModuleCtx,
    pub cap: Option<usize>,
    pub submodules: Vec<(String, Submodule)>,
    pub phis: Vec<(String, PhiSpec)>,
    pub mult_sets: Vec<(String, MultSet)>,
}

impl Session {
    pub fn submodule(&self, name: &str) -> Option<&Submodule> {
        self.submodules
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
    }

    pub fn phi(&self, name: &str) -> Option<&PhiSpec> {
        self.phis.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    pub fn mult_set(&self, name: &str) -> Option<&MultSet> {
        self.mult_sets
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
    }
}

// ---------------------------------------------------------------- lexing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Num(u64),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

const SYMBOLS: [&str; 11] = ["->", "(", ")", "[", "]", "{", "}", ",", "|", "=", "-"];

fn lex(text: &str, line: usize) -> std::result::Result<Vec<Token>, Diagnostic> {
    let text = text.split('#').next().unwrap_or("");
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s
                .parse()
                .map_err(|_| diag(line, col, format!("number `{s}` is too large")))?;
            out.push(Token {
                tok: Tok::Num(n),
                col,
            });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Word(chars[start..i].iter().collect()),
                col,
            });
        } else {
            let rest: String = chars[i..].iter().take(2).collect();
            let sym = SYMBOLS
                .iter()
                .find(|s| rest.starts_with(*s))
                .ok_or_else(|| diag(line, col, format!("unexpected character `{c}`")))?;
            i += sym.chars().count();
            out.push(Token {
                tok: Tok::Sym(sym),
                col,
            });
        }
    }
    Ok(out)
}

fn diag(line: usize, column: usize, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        line,
        column,
        message: message.into(),
    }
}

struct Cursor {
    toks: Vec<Token>,
    pos: usize,
    line: usize,
    end: usize,
}

type PResult<T> = std::result::Result<T, Diagnostic>;

impl Cursor {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.col)
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(diag(self.line, self.col(), msg))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn describe(&self) -> String {
        self.peek().map_or("end of line".into(), |t| t.to_string())
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(t)) if *t == s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`, found {}", self.describe()))
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Word(t)) if t == w) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_word(&mut self, w: &str) -> PResult<()> {
        if self.eat_word(w) {
            Ok(())
        } else {
            self.err(format!("expected `{w}`, found {}", self.describe()))
        }
    }

    fn number(&mut self) -> PResult<(u64, usize)> {
        let col = self.col();
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok((n, col))
            }
            _ => self.err(format!("expected a number, found {}", self.describe())),
        }
    }

    fn name(&mut self) -> PResult<(String, usize)> {
        let col = self.col();
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok((w, col))
            }
            _ => self.err(format!("expected a name, found {}", self.describe())),
        }
    }

    fn finish(&self) -> PResult<()> {
        if self.pos < self.toks.len() {
            self.err(format!(
                "unexpected {} at end of statement",
                self.describe()
            ))
        } else {
            Ok(())
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

// ---------------------------------------------------------------- parsing

/// A statement with the columns needed for semantic diagnostics.
enum Stmt {
    Ring(Vec<(u64, usize)>),
    Module(Vec<(Vec<(u64, usize)>, usize)>),
    Split(u64, usize),
    Cap(u64, usize),
    Submodule(String, usize, Vec<(ElemLit, usize)>),
    Phi(String, usize, PhiDefPos),
    MultSet(String, usize, Vec<(RingLit, usize)>),
}

/// A name with the column it was written at.
type Named = (String, usize);

enum PhiDefPos {
    Plain(PhiDef),
    Product(Named, Named),
    Table(Vec<(Named, Option<Named>)>),
}

const KEYWORDS: [&str; 7] = [
    "ring",
    "module",
    "split",
    "cap",
    "submodule",
    "phi",
    "multset",
];

fn parse_numbers_x(c: &mut Cursor) -> PResult<Vec<(u64, usize)>> {
    let mut out = vec![c.number()?];
    while c.eat_word("x") {
        out.push(c.number()?);
    }
    Ok(out)
}

fn parse_group(c: &mut Cursor) -> PResult<(Vec<(u64, usize)>, usize)> {
    let col = c.col();
    c.expect_sym("[")?;
    let mut out = Vec::new();
    if !c.eat_sym("]") {
        loop {
            out.push(c.number()?);
            if c.eat_sym("]") {
                break;
            }
            c.expect_sym(",")?;
        }
    }
    Ok((out, col))
}

fn parse_elem(c: &mut Cursor) -> PResult<(ElemLit, usize)> {
    let col = c.col();
    c.expect_sym("(")?;
    let mut groups = vec![Vec::new()];
    loop {
        if c.eat_sym(")") {
            break;
        }
        if c.eat_sym("|") {
            groups.push(Vec::new());
            continue;
        }
        let group = groups.last_mut().expect("groups is nonempty");
        if !group.is_empty() {
            c.expect_sym(",")?;
        }
        groups
            .last_mut()
            .expect("groups is nonempty")
            .push(c.number()?.0);
    }
    Ok((ElemLit(groups), col))
}

fn parse_ring_elem(c: &mut Cursor) -> PResult<(RingLit, usize)> {
    let col = c.col();
    if let Some(Tok::Num(_)) = c.peek() {
        return Ok((RingLit(vec![c.number()?.0]), col));
    }
    c.expect_sym("(")?;
    let mut out = vec![c.number()?.0];
    while c.eat_sym("|") {
        out.push(c.number()?.0);
    }
    c.expect_sym(")")?;
    Ok((RingLit(out), col))
}

fn parse_phi_def(c: &mut Cursor) -> PResult<PhiDefPos> {
    let (word, col) = c.name()?;
    Ok(match word.as_str() {
        "empty" => PhiDefPos::Plain(PhiDef::Empty),
        "zero" => PhiDefPos::Plain(PhiDef::Zero),
        "omega" => PhiDefPos::Plain(PhiDef::Omega),
        "phin" => {
            let (k, kcol) = c.number()?;
            if k > u32::MAX as u64 {
                return Err(diag(c.line, kcol, "phin exponent is too large"));
            }
            PhiDefPos::Plain(PhiDef::PhiN(k as u32))
        }
        "product" => PhiDefPos::Product(c.name()?, c.name()?),
        "table" => {
            c.expect_sym("{")?;
            let mut entries = Vec::new();
            if !c.eat_sym("}") {
                loop {
                    if c.eat_word("default") {
                        c.expect_word("empty")?;
                        c.expect_sym("}")?;
                        break;
                    }
                    let key = c.name()?;
                    c.expect_sym("->")?;
                    let value = c.name()?;
                    let value = if value.0 == "empty" {
                        None
                    } else {
                        Some(value)
                    };
                    entries.push((key, value));
                    if c.eat_sym("}") {
                        break;
                    }
                    // the comma before `default` is optional
                    if !c.eat_sym(",") && !matches!(c.peek(), Some(Tok::Word(w)) if w == "default")
                    {
                        c.expect_sym(",")?;
                    }
                }
            }
            PhiDefPos::Table(entries)
        }
        other => {
            return Err(diag(c.line, col, format!("unknown phi kind `{other}`")));
        }
    })
}

fn parse_stmt(c: &mut Cursor) -> PResult<Stmt> {
    let (kw, col) = c.name()?;
    let stmt = match kw.as_str() {
        "ring" => Stmt::Ring(parse_numbers_x(c)?),
        "module" => {
            let mut groups = vec![parse_group(c)?];
            while c.eat_word("x") {
                groups.push(parse_group(c)?);
            }
            Stmt::Module(groups)
        }
        "split" => {
            let (k, kcol) = c.number()?;
            Stmt::Split(k, kcol)
        }
        "cap" => {
            let (k, kcol) = c.number()?;
            Stmt::Cap(k, kcol)
        }
        "submodule" => {
            let (name, ncol) = c.name()?;
            c.expect_sym("=")?;
            c.expect_word("gen")?;
            let mut gens = Vec::new();
            while !c.at_end() {
                gens.push(parse_elem(c)?);
            }
            Stmt::Submodule(name, ncol, gens)
        }
        "phi" => {
            let (name, ncol) = c.name()?;
            c.expect_sym("=")?;
            Stmt::Phi(name, ncol, parse_phi_def(c)?)
        }
        "multset" => {
            let (name, ncol) = c.name()?;
            c.expect_sym("=")?;
            c.expect_word("gen")?;
            let mut gens = Vec::new();
            while !c.at_end() {
                gens.push(parse_ring_elem(c)?);
            }
            Stmt::MultSet(name, ncol, gens)
        }
        other => {
            return Err(diag(
                c.line,
                col,
                format!(
                    "unknown keyword `{other}` (expected one of {})",
                    KEYWORDS.join(", ")
                ),
            ));
        }
    };
    c.finish()?;
    Ok(stmt)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Submodule,
    Phi,
    MultSet,
}

impl Kind {
    fn noun(self) -> &'static str {
        match self {
            Kind::Submodule => "submodule",
            Kind::Phi => "phi",
            Kind::MultSet => "multset",
        }
    }
}

/// Parses and validates a context description.
///
/// Every problem found is reported with its line and column.
pub fn parse_spec(text: &str) -> Result<ContextSpec> {
    let mut diags = Vec::new();
    let mut stmts = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = match lex(raw, line) {
            Ok(t) => t,
            Err(d) => {
                diags.push(d);
                continue;
            }
        };
        if toks.is_empty() {
            continue;
        }
        let mut c = Cursor {
            toks,
            pos: 0,
            line,
            end: raw
                .split('#')
                .next()
                .unwrap_or("")
                .trim_end()
                .chars()
                .count()
                + 1,
        };
        match parse_stmt(&mut c) {
            Ok(s) => stmts.push((line, s)),
            Err(d) => diags.push(d),
        }
    }
    let spec = validate(stmts, &mut diags);
    match spec {
        Some(spec) if diags.is_empty() => Ok(spec),
        _ => {
            diags.sort_by_key(|d| (d.line, d.column));
            Err(Error::Parse(diags))
        }
    }
}

fn validate(stmts: Vec<(usize, Stmt)>, diags: &mut Vec<Diagnostic>) -> Option<ContextSpec> {
    let mut moduli: Option<Vec<u64>> = None;
    let mut blocks: Option<Vec<Vec<u64>>> = None;
    let mut split = None;
    let mut cap = None;
    let mut items = Vec::new();
    let mut names: HashMap<String, Kind> = HashMap::new();
    let mut seen_module = false;

    for (line, stmt) in stmts {
        // everything but `ring` needs the ring
        if !matches!(stmt, Stmt::Ring(_)) && moduli.is_none() {
            diags.push(diag(line, 1, "`ring` must be declared first"));
            continue;
        }
        match stmt {
            Stmt::Ring(ns) => {
                if moduli.is_some() {
                    diags.push(diag(line, 1, "duplicate `ring` declaration"));
                    continue;
                }
                let mut ok = true;
                for &(n, col) in &ns {
                    if n < 2 {
                        diags.push(diag(
                            line,
                            col,
                            format!("ring modulus {n} must be at least 2"),
                        ));
                        ok = false;
                    }
                }
                let ns: Vec<u64> = ns.into_iter().map(|(n, _)| n).collect();
                if ok {
                    if let Err(e) = FiniteRing::new(&ns) {
                        diags.push(diag(line, 1, e.to_string()));
                    }
                }
                moduli = Some(ns);
            }
            Stmt::Module(groups) => {
                let ns = moduli.as_ref().expect("checked above");
                if seen_module {
                    diags.push(diag(line, 1, "duplicate `module` declaration"));
                    continue;
                }
                seen_module = true;
                if !items.is_empty() {
                    diags.push(diag(
                        line,
                        1,
                        "`module` must come before submodules, phis and multsets",
                    ));
                }
                if groups.len() != ns.len() {
                    diags.push(diag(
                        line,
                        1,
                        format!(
                            "{} block groups for a ring with {} factors",
                            groups.len(),
                            ns.len()
                        ),
                    ));
                    continue;
                }
                let mut out = Vec::new();
                for ((group, _), &n) in groups.iter().zip(ns) {
                    for &(m, col) in group {
                        if m == 0 || n % m != 0 {
                            diags.push(diag(
                                line,
                                col,
                                format!("block order {m} does not divide {n}"),
                            ));
                        }
                    }
                    out.push(group.iter().map(|&(m, _)| m).collect());
                }
                blocks = Some(out);
            }
            Stmt::Split(k, col) => {
                let factors = moduli.as_ref().expect("checked above").len();
                if k == 0 || k as usize >= factors {
                    diags.push(diag(
                        line,
                        col,
                        format!("split must lie between 1 and {}", factors.saturating_sub(1)),
                    ));
                } else if split.is_some() {
                    diags.push(diag(line, 1, "duplicate `split` declaration"));
                } else {
                    split = Some(k as usize);
                }
            }
            Stmt::Cap(k, col) => {
                if k == 0 {
                    diags.push(diag(line, col, "cap must be positive"));
                } else if cap.is_some() {
                    diags.push(diag(line, 1, "duplicate `cap` declaration"));
                } else {
                    cap = Some(k as usize);
                }
            }
            Stmt::Submodule(name, ncol, gens) => {
                let ns = moduli.as_ref().expect("checked above");
                let bl = blocks.get_or_insert_with(|| ns.iter().map(|&n| vec![n]).collect());
                seen_module = true;
                for (e, col) in &gens {
                    check_elem(e, bl, line, *col, diags);
                }
                if declare(&mut names, &name, Kind::Submodule, line, ncol, diags) {
                    items.push(Item::Submodule {
                        name,
                        gens: gens.into_iter().map(|(e, _)| e).collect(),
                    });
                }
            }
            Stmt::Phi(name, ncol, def) => {
                let ns = moduli.as_ref().expect("checked above");
                blocks.get_or_insert_with(|| ns.iter().map(|&n| vec![n]).collect());
                seen_module = true;
                let def = match def {
                    PhiDefPos::Plain(d) => d,
                    PhiDefPos::Product((a, acol), (b, bcol)) => {
                        if ns.len() < 2 {
                            diags.push(diag(
                                line,
                                ncol,
                                "product phi needs a ring with at least two factors",
                            ));
                        }
                        require(&names, &a, Kind::Phi, line, acol, diags);
                        require(&names, &b, Kind::Phi, line, bcol, diags);
                        PhiDef::Product(a, b)
                    }
                    PhiDefPos::Table(entries) => {
                        let mut out = Vec::new();
                        for ((k, kcol), v) in entries {
                            require(&names, &k, Kind::Submodule, line, kcol, diags);
                            let v = match v {
                                None => TableValue::Empty,
                                Some((v, vcol)) => {
                                    require(&names, &v, Kind::Submodule, line, vcol, diags);
                                    TableValue::Sub(v)
                                }
                            };
                            out.push((k, v));
                        }
                        PhiDef::Table(out)
                    }
                };
                if declare(&mut names, &name, Kind::Phi, line, ncol, diags) {
                    items.push(Item::Phi { name, def });
                }
            }
            Stmt::MultSet(name, ncol, gens) => {
                let ns = moduli.as_ref().expect("checked above");
                blocks.get_or_insert_with(|| ns.iter().map(|&n| vec![n]).collect());
                seen_module = true;
                for (r, col) in &gens {
                    if r.0.len() != ns.len() {
                        diags.push(diag(
                            line,
                            *col,
                            format!(
                                "ring element has {} residues for {} factors",
                                r.0.len(),
                                ns.len()
                            ),
                        ));
                    } else if let Some((v, n)) = r.0.iter().zip(ns).find(|(v, n)| v >= n) {
                        diags.push(diag(
                            line,
                            *col,
                            format!("residue {v} out of range for Z{n}"),
                        ));
                    }
                }
                if declare(&mut names, &name, Kind::MultSet, line, ncol, diags) {
                    items.push(Item::MultSet {
                        name,
                        gens: gens.into_iter().map(|(r, _)| r).collect(),
                    });
                }
            }
        }
    }
    let Some(moduli) = moduli else {
        // a malformed `ring` line has already been reported
        if diags.is_empty() {
            diags.push(diag(1, 1, "missing `ring` declaration"));
        }
        return None;
    };
    let blocks = blocks.unwrap_or_else(|| moduli.iter().map(|&n| vec![n]).collect());
    // the default split is spelled out nowhere
    let split = split.filter(|&k| k != 1);
    Some(ContextSpec {
        moduli,
        blocks,
        split,
        cap,
        items,
    })
}

fn declare(
    names: &mut HashMap<String, Kind>,
    name: &str,
    kind: Kind,
    line: usize,
    col: usize,
    diags: &mut Vec<Diagnostic>,
) -> bool {
    if ["empty", "default"].contains(&name) {
        diags.push(diag(line, col, format!("`{name}` is reserved")));
        return false;
    }
    if let Some(prev) = names.get(name) {
        diags.push(diag(
            line,
            col,
            format!("duplicate name `{name}` (already a {})", prev.noun()),
        ));
        return false;
    }
    names.insert(name.to_string(), kind);
    true
}

fn require(
    names: &HashMap<String, Kind>,
    name: &str,
    kind: Kind,
    line: usize,
    col: usize,
    diags: &mut Vec<Diagnostic>,
) {
    match names.get(name) {
        Some(k) if *k == kind => {}
        Some(k) => diags.push(diag(
            line,
            col,
            format!("`{name}` is a {}, expected a {}", k.noun(), kind.noun()),
        )),
        None => diags.push(diag(
            line,
            col,
            format!("undefined {} `{name}`", kind.noun()),
        )),
    }
}

fn check_elem(
    e: &ElemLit,
    blocks: &[Vec<u64>],
    line: usize,
    col: usize,
    diags: &mut Vec<Diagnostic>,
) {
    // `()` is the zero element of a module with a single empty group
    let groups: Vec<&[u64]> = e.0.iter().map(Vec::as_slice).collect();
    if groups.len() != blocks.len() {
        diags.push(diag(
            line,
            col,
            format!(
                "element has {} groups for {} ring factors",
                groups.len(),
                blocks.len()
            ),
        ));
        return;
    }
    for (g, b) in groups.iter().zip(blocks) {
        if g.len() != b.len() {
            diags.push(diag(
                line,
                col,
                format!(
                    "element group has {} residues for {} blocks",
                    g.len(),
                    b.len()
                ),
            ));
            return;
        }
        if let Some((v, m)) = g.iter().zip(b).find(|(v, m)| v >= m) {
            diags.push(diag(
                line,
                col,
                format!("residue {v} out of range for block of order {m}"),
            ));
            return;
        }
    }
}

// ---------------------------------------------------------------- printing

fn join<T: fmt::Display>(xs: impl IntoIterator<Item = T>, sep: &str) -> String {
    xs.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

impl fmt::Display for ElemLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", join(self.0.iter().map(|g| join(g, ",")), "|"))
    }
}

impl fmt::Display for RingLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", join(&self.0, "|"))
    }
}

impl fmt::Display for PhiDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiDef::Empty => write!(f, "empty"),
            PhiDef::Zero => write!(f, "zero"),
            PhiDef::PhiN(k) => write!(f, "phin {k}"),
            PhiDef::Omega => write!(f, "omega"),
            PhiDef::Product(a, b) => write!(f, "product {a} {b}"),
            PhiDef::Table(entries) => {
                write!(f, "table {{ ")?;
                for (k, v) in entries {
                    match v {
                        TableValue::Empty => write!(f, "{k} -> empty, ")?,
                        TableValue::Sub(s) => write!(f, "{k} -> {s}, ")?,
                    }
                }
                write!(f, "default empty }}")
            }
        }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Submodule { name, gens } => {
                write!(f, "submodule {name} = gen")?;
                for g in gens {
                    write!(f, " {g}")?;
                }
                Ok(())
            }
            Item::Phi { name, def } => write!(f, "phi {name} = {def}"),
            Item::MultSet { name, gens } => {
                write!(f, "multset {name} = gen")?;
                for g in gens {
                    write!(f, " {g}")?;
                }
                Ok(())
            }
        }
    }
}

/// The canonical form; parsing it gives back an equal spec.
impl fmt::Display for ContextSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ring {}", join(&self.moduli, " x "))?;
        writeln!(
            f,
            "module {}",
            join(
                self.blocks.iter().map(|b| format!("[{}]", join(b, ","))),
                " x "
            )
        )?;
        if let Some(k) = self.split {
            writeln!(f, "split {k}")?;
        }
        if let Some(c) = self.cap {
            writeln!(f, "cap {c}")?;
        }
        for item in &self.items {
            writeln!(f, "{item}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- building

impl ContextSpec {
    pub fn ring(&self) -> Result<FiniteRing> {
        FiniteRing::new(&self.moduli)
    }

    /// The module context, split for products when the ring has several factors.
    pub fn context(&self) -> Result<ModuleCtx> {
        let ctx = ModuleCtx::new(&self.ring()?, self.blocks.clone())?;
        if self.moduli.len() > 1 {
            ctx.with_split(self.split.unwrap_or(1))
        } else {
            Ok(ctx)
        }
    }

    /// Builds every named object.
    pub fn build(&self) -> Result<Session> {
        let ctx = self.context()?;
        let ring = ctx.ring().clone();
        let mut session = Session {
            ctx: ctx.clone(),
            cap: self.cap,
            submodules: Vec::new(),
            phis: Vec::new(),
            mult_sets: Vec::new(),
        };
        for item in &self.items {
            match item {
                Item::Submodule { name, gens } => {
                    let elems = gens
                        .iter()
                        .map(|g| ctx.elem_grouped(&g.0))
                        .collect::<Result<Vec<_>>>()?;
                    session
                        .submodules
                        .push((name.clone(), ctx.generate(&elems)?));
                }
                Item::Phi { name, def } => {
                    let phi = self.build_phi(def, &session)?;
                    session.phis.push((name.clone(), phi));
                }
                Item::MultSet { name, gens } => {
                    let elems = gens
                        .iter()
                        .map(|g| ring.elem(&g.0))
                        .collect::<Result<Vec<_>>>()?;
                    session
                        .mult_sets
                        .push((name.clone(), MultSet::generate(&ring, &elems)?));
                }
            }
        }
        Ok(session)
    }

    fn build_phi(&self, def: &PhiDef, session: &Session) -> Result<PhiSpec> {
        let missing = |n: &str| Error::InvalidArgument(format!("undefined name `{n}`"));
        Ok(match def {
            PhiDef::Empty => PhiSpec::Empty,
            PhiDef::Zero => PhiSpec::Zero,
            PhiDef::PhiN(k) => PhiSpec::PhiN(*k),
            PhiDef::Omega => PhiSpec::Omega,
            PhiDef::Product(a, b) => {
                let a = session.phi(a).ok_or_else(|| missing(a))?;
                let b = session.phi(b).ok_or_else(|| missing(b))?;
                // factor φ functions are evaluated on the factor modules
                PhiSpec::product(a.clone(), b.clone())
            }
            PhiDef::Table(entries) => {
                let mut out = Vec::new();
                for (k, v) in entries {
                    let key = session.submodule(k).ok_or_else(|| missing(k))?.clone();
                    let value = match v {
                        TableValue::Empty => None,
                        TableValue::Sub(s) => {
                            Some(session.submodule(s).ok_or_else(|| missing(s))?.clone())
                        }
                    };
                    out.push((key, value));
                }
                PhiSpec::Table(PhiTable::new(&session.ctx, out)?)
            }
        })
    }
}
