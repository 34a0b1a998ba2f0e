//! Line-oriented workspace files:
//!
//! ```text
//! ring NAME { family=artin|dvr|semigroup p=PRIME [vars=[..] ideal=[monomials]] [gens=[ints]] }
//! module NAME { ring=NAME kind=KIND ... }
//! ideal NAME { ring=NAME gens=[..] }
//! ```
//!
//! Module kinds: `frac_ideal gens=[..]`, `quotient gens=[..]` (R modulo the ideal),
//! `residue_field`, `direct_sum of=[names]`, `free rank=N`, `canonical`,
//! `blowup ideal=NAME`. `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use subext_core::dcoeff::{Coeff, Fp, Local};
use subext_core::modules::CoeffModule;
use subext_core::rings::{build_ring, AnyRing, Family, FracIdeal, RingHandle, RingSpec, REDUCTION_BUDGET};

use crate::elem::{parse_elem, parse_ring_elem};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WorkspaceError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("line {line}: {label:?} is already defined")]
    Duplicate { line: usize, label: String },
    #[error("line {line}: {source}")]
    Core {
        line: usize,
        #[source]
        source: subext_core::Error,
    },
}

impl WorkspaceError {
    pub fn code(&self) -> &'static str {
        match self {
            WorkspaceError::Parse(_) => "ParseError",
            WorkspaceError::Duplicate { .. } => "DuplicateLabel",
            WorkspaceError::Core { source, .. } => source.code(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Value {
    Atom(String),
    List(Vec<String>),
}

#[derive(Clone, Debug)]
struct Field {
    key: String,
    value: Value,
    col: usize,
}

#[derive(Clone, Debug)]
struct Decl {
    keyword: String,
    name: String,
    fields: Vec<Field>,
    line: usize,
    name_col: usize,
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    _src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        let mut chars: Vec<char> = Vec::new();
        let mut in_str = false;
        for c in src.chars() {
            if c == '"' {
                in_str = !in_str;
            }
            if c == '#' && !in_str {
                break;
            }
            chars.push(c);
        }
        Lexer {
            chars,
            pos: 0,
            line,
            _src: src,
        }
    }

    fn err(&self, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col,
            msg: msg.into(),
        }
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(self.err(self.col(), format!("expected '{c}', found '{x}'"))),
            None => Err(self.err(self.col(), format!("expected '{c}' before end of line"))),
        }
    }

    fn word(&mut self) -> Result<(String, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            if c.is_alphanumeric() || "_.-^*".contains(c) {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            let found = self.chars.get(self.pos).map(|c| format!("'{c}'")).unwrap_or("end of line".into());
            return Err(self.err(start + 1, format!("expected a name or number, found {found}")));
        }
        Ok((self.chars[start..self.pos].iter().collect(), start + 1))
    }

    fn quoted(&mut self) -> Result<String, ParseError> {
        let start = self.col();
        self.expect('"')?;
        let mut s = String::new();
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            self.pos += 1;
            if c == '"' {
                return Ok(s);
            }
            s.push(c);
        }
        Err(self.err(start, "unterminated string"))
    }

    fn item(&mut self) -> Result<String, ParseError> {
        if self.peek() == Some('"') {
            self.quoted()
        } else {
            Ok(self.word()?.0)
        }
    }

    fn value(&mut self) -> Result<Value, ParseError> {
        if self.peek() != Some('[') {
            return Ok(Value::Atom(self.item()?));
        }
        self.pos += 1;
        let mut items = Vec::new();
        if self.peek() == Some(']') {
            self.pos += 1;
            return Ok(Value::List(items));
        }
        loop {
            items.push(self.item()?);
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(']') => {
                    self.pos += 1;
                    return Ok(Value::List(items));
                }
                Some(c) => return Err(self.err(self.col(), format!("expected ',' or ']', found '{c}'"))),
                None => return Err(self.err(self.col(), "unterminated list")),
            }
        }
    }
}

fn parse_line(text: &str, line: usize) -> Result<Option<Decl>, ParseError> {
    let mut lx = Lexer::new(text, line);
    if lx.at_end() {
        return Ok(None);
    }
    let (keyword, kcol) = lx.word()?;
    if !["ring", "module", "ideal"].contains(&keyword.as_str()) {
        return Err(lx.err(kcol, format!("unknown declaration {keyword:?} (expected ring, module or ideal)")));
    }
    let (name, name_col) = lx.word()?;
    lx.expect('{')?;
    let mut fields: Vec<Field> = Vec::new();
    loop {
        if lx.peek() == Some('}') {
            lx.pos += 1;
            break;
        }
        if lx.at_end() {
            return Err(lx.err(lx.col(), "missing '}'"));
        }
        let (key, col) = lx.word()?;
        lx.expect('=')?;
        let value = lx.value()?;
        if fields.iter().any(|f| f.key == key) {
            return Err(lx.err(col, format!("key {key:?} given twice")));
        }
        fields.push(Field { key, value, col });
    }
    if !lx.at_end() {
        return Err(lx.err(lx.col(), "trailing input after '}'"));
    }
    Ok(Some(Decl {
        keyword,
        name,
        fields,
        line,
        name_col,
    }))
}

/// A module over either kind of ring.
#[derive(Clone, Debug)]
pub enum AnyModule {
    Artin(Arc<CoeffModule<Fp>>),
    Curve(Arc<CoeffModule<Local>>),
}

#[derive(Clone, Debug)]
pub enum AnyIdeal {
    Artin(FracIdeal<Fp>),
    Curve(FracIdeal<Local>),
}

/// Access to workspace objects of one coefficient type.
pub trait WsCoeff: Coeff {
    fn ring_of(r: &AnyRing) -> Option<&Arc<RingHandle<Self>>>;
    fn module_of(m: &AnyModule) -> Option<&Arc<CoeffModule<Self>>>;
    fn ideal_of(i: &AnyIdeal) -> Option<&FracIdeal<Self>>;
    fn wrap_module(m: Arc<CoeffModule<Self>>) -> AnyModule;
    fn wrap_ideal(i: FracIdeal<Self>) -> AnyIdeal;
    /// B(I) as a module, when the family supports it.
    fn blowup_module(i: &FracIdeal<Self>) -> subext_core::Result<Arc<CoeffModule<Self>>>;
}

impl WsCoeff for Fp {
    fn ring_of(r: &AnyRing) -> Option<&Arc<RingHandle<Fp>>> {
        match r {
            AnyRing::Artin(a) => Some(a),
            _ => None,
        }
    }
    fn module_of(m: &AnyModule) -> Option<&Arc<CoeffModule<Fp>>> {
        match m {
            AnyModule::Artin(a) => Some(a),
            _ => None,
        }
    }
    fn ideal_of(i: &AnyIdeal) -> Option<&FracIdeal<Fp>> {
        match i {
            AnyIdeal::Artin(a) => Some(a),
            _ => None,
        }
    }
    fn wrap_module(m: Arc<CoeffModule<Fp>>) -> AnyModule {
        AnyModule::Artin(m)
    }
    fn wrap_ideal(i: FracIdeal<Fp>) -> AnyIdeal {
        AnyIdeal::Artin(i)
    }
    fn blowup_module(_: &FracIdeal<Fp>) -> subext_core::Result<Arc<CoeffModule<Fp>>> {
        Err(subext_core::Error::WrongFamily("blow-ups need a curve ring".into()))
    }
}

impl WsCoeff for Local {
    fn ring_of(r: &AnyRing) -> Option<&Arc<RingHandle<Local>>> {
        match r {
            AnyRing::Curve(a) => Some(a),
            _ => None,
        }
    }
    fn module_of(m: &AnyModule) -> Option<&Arc<CoeffModule<Local>>> {
        match m {
            AnyModule::Curve(a) => Some(a),
            _ => None,
        }
    }
    fn ideal_of(i: &AnyIdeal) -> Option<&FracIdeal<Local>> {
        match i {
            AnyIdeal::Curve(a) => Some(a),
            _ => None,
        }
    }
    fn wrap_module(m: Arc<CoeffModule<Local>>) -> AnyModule {
        AnyModule::Curve(m)
    }
    fn wrap_ideal(i: FracIdeal<Local>) -> AnyIdeal {
        AnyIdeal::Curve(i)
    }
    fn blowup_module(i: &FracIdeal<Local>) -> subext_core::Result<Arc<CoeffModule<Local>>> {
        Ok(CoeffModule::from_frac_ideal(&i.blow_up_module(REDUCTION_BUDGET)?.0))
    }
}

#[derive(Clone, Debug)]
pub struct ModuleEntry {
    pub ring: String,
    pub module: AnyModule,
}

#[derive(Clone, Debug)]
pub struct IdealEntry {
    pub ring: String,
    pub ideal: AnyIdeal,
}

/// Validated handles, by label.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub rings: BTreeMap<String, AnyRing>,
    pub modules: BTreeMap<String, ModuleEntry>,
    pub ideals: BTreeMap<String, IdealEntry>,
    /// Module labels per ring, in declaration order.
    pub modules_by_ring: BTreeMap<String, Vec<String>>,
}

impl Workspace {
    pub fn ring<T: WsCoeff>(&self, label: &str) -> Option<&Arc<RingHandle<T>>> {
        self.rings.get(label).and_then(T::ring_of)
    }

    pub fn module<T: WsCoeff>(&self, label: &str) -> Option<&Arc<CoeffModule<T>>> {
        self.modules.get(label).and_then(|e| T::module_of(&e.module))
    }

    pub fn ideal<T: WsCoeff>(&self, label: &str) -> Option<&FracIdeal<T>> {
        self.ideals.get(label).and_then(|e| T::ideal_of(&e.ideal))
    }

    /// Labels of rings of one coefficient type, sorted.
    pub fn ring_labels<T: WsCoeff>(&self) -> Vec<String> {
        self.rings.iter().filter(|(_, r)| T::ring_of(r).is_some()).map(|(k, _)| k.clone()).collect()
    }

    /// Modules declared over a ring, in declaration order.
    pub fn modules_over<T: WsCoeff>(&self, ring: &str) -> Vec<(String, Arc<CoeffModule<T>>)> {
        self.modules_by_ring
            .get(ring)
            .into_iter()
            .flatten()
            .filter_map(|l| self.module::<T>(l).map(|m| (l.clone(), m.clone())))
            .collect()
    }
}

struct Fields<'a> {
    decl: &'a Decl,
}

impl<'a> Fields<'a> {
    fn err(&self, col: usize, msg: impl Into<String>) -> WorkspaceError {
        WorkspaceError::Parse(ParseError {
            line: self.decl.line,
            col,
            msg: msg.into(),
        })
    }

    fn get(&self, key: &str) -> Option<&'a Field> {
        self.decl.fields.iter().find(|f| f.key == key)
    }

    fn atom(&self, key: &str) -> Result<Option<(&'a str, usize)>, WorkspaceError> {
        match self.get(key) {
            None => Ok(None),
            Some(Field { value: Value::Atom(s), col, .. }) => Ok(Some((s.as_str(), *col))),
            Some(f) => Err(self.err(f.col, format!("{key} expects a single value"))),
        }
    }

    fn need_atom(&self, key: &str) -> Result<(&'a str, usize), WorkspaceError> {
        self.atom(key)?.ok_or_else(|| self.err(self.decl.name_col, format!("missing {key}=")))
    }

    fn list(&self, key: &str) -> Result<Option<(&'a [String], usize)>, WorkspaceError> {
        match self.get(key) {
            None => Ok(None),
            Some(Field { value: Value::List(v), col, .. }) => Ok(Some((v.as_slice(), *col))),
            Some(f) => Err(self.err(f.col, format!("{key} expects a list [..]"))),
        }
    }

    fn need_list(&self, key: &str) -> Result<(&'a [String], usize), WorkspaceError> {
        self.list(key)?.ok_or_else(|| self.err(self.decl.name_col, format!("missing {key}=[..]")))
    }

    fn only(&self, allowed: &[&str]) -> Result<(), WorkspaceError> {
        for f in &self.decl.fields {
            if !allowed.contains(&f.key.as_str()) {
                return Err(self.err(f.col, format!("unexpected key {:?} for {}", f.key, self.decl.keyword)));
            }
        }
        Ok(())
    }
}

fn parse_u32(s: &str, f: &Fields, col: usize) -> Result<u32, WorkspaceError> {
    s.parse::<u32>().map_err(|_| f.err(col, format!("expected a non-negative integer, found {s:?}")))
}

/// "x^2*y" as an exponent vector over the given variables.
fn parse_monomial(s: &str, vars: &[String], f: &Fields, col: usize) -> Result<Vec<u32>, WorkspaceError> {
    let mut exps = vec![0u32; vars.len()];
    for part in s.split('*') {
        let (name, e) = match part.split_once('^') {
            Some((n, e)) => (n.trim(), parse_u32(e.trim(), f, col)?),
            None => (part.trim(), 1),
        };
        let k = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| f.err(col, format!("unknown variable {name:?} in {s:?}")))?;
        exps[k] += e;
    }
    Ok(exps)
}

fn ring_spec(f: &Fields) -> Result<RingSpec, WorkspaceError> {
    let (fam, fcol) = f.need_atom("family")?;
    let (p, pcol) = f.need_atom("p")?;
    let p: u16 = p.parse().map_err(|_| f.err(pcol, format!("p must be a prime, found {p:?}")))?;
    let family = match fam {
        "dvr" => {
            f.only(&["family", "p"])?;
            Family::Dvr
        }
        "semigroup" => {
            f.only(&["family", "p", "gens"])?;
            let (g, col) = f.need_list("gens")?;
            Family::Semigroup {
                gens: g.iter().map(|s| parse_u32(s, f, col)).collect::<Result<_, _>>()?,
            }
        }
        "artin" => {
            f.only(&["family", "p", "vars", "ideal"])?;
            let (vars, _) = f.need_list("vars")?;
            let (ideal, col) = f.need_list("ideal")?;
            let ideal = ideal.iter().map(|m| parse_monomial(m, vars, f, col)).collect::<Result<_, _>>()?;
            Family::Artin {
                vars: vars.to_vec(),
                ideal,
            }
        }
        other => return Err(f.err(fcol, format!("unknown family {other:?}"))),
    };
    Ok(RingSpec {
        p,
        family,
        label: Some(f.decl.name.clone()),
    })
}

fn core_err(line: usize) -> impl Fn(subext_core::Error) -> WorkspaceError {
    move |source| WorkspaceError::Core { line, source }
}

fn build_module<T: WsCoeff>(ws: &Workspace, ring: &Arc<RingHandle<T>>, rlabel: &str, f: &Fields) -> Result<AnyModule, WorkspaceError> {
    let line = f.decl.line;
    let (kind, kcol) = f.need_atom("kind")?;
    let elems = |key: &str| -> Result<Vec<subext_core::rings::FracElem<T>>, WorkspaceError> {
        let (g, col) = f.need_list(key)?;
        g.iter().map(|s| parse_elem(ring, s).map_err(|m| f.err(col, m))).collect()
    };
    let m = match kind {
        "frac_ideal" => {
            f.only(&["ring", "kind", "gens"])?;
            let g = elems("gens")?;
            let shift = g.iter().map(|x| x.shift).max().unwrap_or(0);
            let amb: Vec<Vec<T>> = g.iter().map(|x| rescale(ring, x, shift)).collect();
            CoeffModule::from_frac_ideal(&FracIdeal::from_ambient(ring, shift, amb))
        }
        "quotient" => {
            f.only(&["ring", "kind", "gens"])?;
            let (g, col) = f.need_list("gens")?;
            let xs = g.iter().map(|s| parse_ring_elem(ring, s).map_err(|m| f.err(col, m))).collect::<Result<Vec<_>, _>>()?;
            CoeffModule::from_quotient(&FracIdeal::from_elems(ring, &xs)).map_err(core_err(line))?
        }
        "residue_field" => {
            f.only(&["ring", "kind"])?;
            CoeffModule::residue_field(ring)
        }
        "free" => {
            f.only(&["ring", "kind", "rank"])?;
            let (r, col) = f.need_atom("rank")?;
            CoeffModule::free(ring, parse_u32(r, f, col)? as usize)
        }
        "canonical" => {
            f.only(&["ring", "kind"])?;
            CoeffModule::canonical_module(ring).map_err(core_err(line))?
        }
        "blowup" => {
            f.only(&["ring", "kind", "ideal"])?;
            let (i, col) = f.need_atom("ideal")?;
            let ideal = ws.ideal::<T>(i).ok_or_else(|| f.err(col, format!("unknown ideal {i:?}")))?;
            if ws.ideals[i].ring != rlabel {
                return Err(f.err(col, format!("ideal {i:?} lives over another ring")));
            }
            T::blowup_module(ideal).map_err(core_err(line))?
        }
        "direct_sum" => {
            f.only(&["ring", "kind", "of"])?;
            let (names, col) = f.need_list("of")?;
            let mut parts = Vec::new();
            for n in names {
                let e = ws.modules.get(n).ok_or_else(|| f.err(col, format!("unknown module {n:?}")))?;
                if e.ring != rlabel {
                    return Err(f.err(col, format!("module {n:?} lives over another ring")));
                }
                parts.push(T::module_of(&e.module).expect("ring type matches").clone());
            }
            CoeffModule::direct_sum(ring, &parts)
        }
        other => return Err(f.err(kcol, format!("unknown module kind {other:?}"))),
    };
    Ok(T::wrap_module(m))
}

/// s^{-shift}-normalised ambient vector of x.
fn rescale<T: Coeff>(ring: &Arc<RingHandle<T>>, x: &subext_core::rings::FracElem<T>, shift: u32) -> Vec<T> {
    let d = T::t_pow(ring.prime(), shift - x.shift);
    x.v.iter().map(|c| c.mul(&d)).collect()
}

fn build_ideal<T: WsCoeff>(ring: &Arc<RingHandle<T>>, f: &Fields) -> Result<AnyIdeal, WorkspaceError> {
    f.only(&["ring", "gens"])?;
    let (g, col) = f.need_list("gens")?;
    let xs = g.iter().map(|s| parse_elem(ring, s).map_err(|m| f.err(col, m))).collect::<Result<Vec<_>, _>>()?;
    let shift = xs.iter().map(|x| x.shift).max().unwrap_or(0);
    let amb = xs.iter().map(|x| rescale(ring, x, shift)).collect();
    Ok(T::wrap_ideal(FracIdeal::from_ambient(ring, shift, amb)))
}

fn ring_label_of<'a>(ws: &'a Workspace, f: &Fields) -> Result<(&'a AnyRing, String), WorkspaceError> {
    let (r, col) = f.need_atom("ring")?;
    let ring = ws.rings.get(r).ok_or_else(|| f.err(col, format!("unknown ring {r:?}")))?;
    Ok((ring, r.to_string()))
}

/// Parses and validates a workspace.
pub fn parse_workspace(text: &str) -> Result<Workspace, WorkspaceError> {
    let mut ws = Workspace::default();
    for (i, raw) in text.lines().enumerate() {
        let Some(decl) = parse_line(raw, i + 1)? else { continue };
        let line = decl.line;
        let taken = ws.rings.contains_key(&decl.name) || ws.modules.contains_key(&decl.name) || ws.ideals.contains_key(&decl.name);
        if taken {
            return Err(WorkspaceError::Duplicate {
                line,
                label: decl.name.clone(),
            });
        }
        let f = Fields { decl: &decl };
        match decl.keyword.as_str() {
            "ring" => {
                let spec = ring_spec(&f)?;
                let ring = build_ring(&spec).map_err(core_err(line))?;
                ws.rings.insert(decl.name.clone(), ring);
            }
            "module" => {
                let (ring, rlabel) = ring_label_of(&ws, &f)?;
                let module = match ring {
                    AnyRing::Artin(r) => build_module(&ws, &r.clone(), &rlabel, &f)?,
                    AnyRing::Curve(r) => build_module(&ws, &r.clone(), &rlabel, &f)?,
                };
                ws.modules_by_ring.entry(rlabel.clone()).or_default().push(decl.name.clone());
                ws.modules.insert(decl.name.clone(), ModuleEntry { ring: rlabel, module });
            }
            _ => {
                let (ring, rlabel) = ring_label_of(&ws, &f)?;
                let ideal = match ring {
                    AnyRing::Artin(r) => build_ideal(&r.clone(), &f)?,
                    AnyRing::Curve(r) => build_ideal(&r.clone(), &f)?,
                };
                ws.ideals.insert(decl.name.clone(), IdealEntry { ring: rlabel, ideal });
            }
        }
    }
    Ok(ws)
}

/// The desk-scale workspace shipped with the binary.
pub const BUNDLED: &str = include_str!("../workspace/desk.ws");

pub fn bundled() -> Workspace {
    parse_workspace(BUNDLED).expect("bundled workspace is valid")
}

impl fmt::Display for AnyModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyModule::Artin(m) => write!(f, "{m:?}"),
            AnyModule::Curve(m) => write!(f, "{m:?}"),
        }
    }
}
