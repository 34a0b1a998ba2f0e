//! One-shot computations on workspace objects, answered as JSON.

use std::sync::Arc;

use serde_json::{json, Value};
use subext_core::dcoeff::{Fp, Local};
use subext_core::ext::{ext1, ExtPresentation};
use subext_core::modules::CoeffModule;
use subext_core::rings::{ring_invariants, AnyRing, FracIdeal};
use subext_core::subfun::{ext1_sub, NumFn, SubExt};
use subext_core::ulrich::ext1_ul;

use crate::workspace::{AnyModule, Workspace, WsCoeff};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{code}: {message}")]
pub struct ComputeError {
    pub code: String,
    pub message: String,
}

impl ComputeError {
    fn new(code: &str, message: impl Into<String>) -> Self {
        ComputeError {
            code: code.into(),
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "code": self.code, "message": self.message } })
    }
}

impl From<subext_core::Error> for ComputeError {
    fn from(e: subext_core::Error) -> Self {
        ComputeError::new(e.code(), e.to_string())
    }
}

type Res<T> = Result<T, ComputeError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    RingInfo { ring: String },
    ModInvariants { module: String },
    Ext { m: String, n: String },
    /// `phis` entries: `mu`, `nu:IDEAL`, `et:IDEAL`, `hom-from:MODULE`, `hom-to:MODULE`, `tensor:MODULE`.
    /// IDEAL is a workspace ideal label, `m` or `m^k`.
    ExtSub { m: String, n: String, phis: Vec<String>, list: bool },
    ExtUl { m: String, n: String, ideal: String, s: u8 },
    /// The sequence of the class with the given D-coordinates.
    Middle { m: String, n: String, class: Vec<String> },
}

fn unknown(what: &str, l: &str) -> ComputeError {
    ComputeError::new("UnknownLabel", format!("no {what} {l:?}"))
}

pub fn run(ws: &Workspace, cmd: &Command, budget: u64) -> Res<Value> {
    let first = match cmd {
        Command::RingInfo { ring } => return ring_info(ws, ring),
        Command::ModInvariants { module } => module,
        Command::Ext { m, .. } | Command::ExtSub { m, .. } | Command::ExtUl { m, .. } | Command::Middle { m, .. } => m,
    };
    let e = ws.modules.get(first).ok_or_else(|| unknown("module", first))?;
    match e.module {
        AnyModule::Curve(_) => run_typed::<Local>(ws, &e.ring, cmd, budget),
        AnyModule::Artin(_) => run_typed::<Fp>(ws, &e.ring, cmd, budget),
    }
}

fn ring_info(ws: &Workspace, label: &str) -> Res<Value> {
    let r = ws.rings.get(label).ok_or_else(|| unknown("ring", label))?;
    let inv = ring_invariants(r)?;
    let mut v = json!({
        "ring": label,
        "p": match r { AnyRing::Artin(a) => a.prime(), AnyRing::Curve(c) => c.prime() },
        "dim": inv.dim,
        "depth": inv.depth,
        "embdim": inv.embdim,
        "multiplicity": inv.multiplicity,
        "type": inv.cm_type,
        "regular": inv.is_regular,
        "gorenstein": inv.is_gorenstein,
        "minimal_multiplicity": inv.has_minimal_multiplicity,
        "almost_gorenstein": inv.is_almost_gorenstein,
    });
    match r {
        AnyRing::Curve(c) => {
            if let Some(sg) = c.semigroup() {
                v["semigroup"] = json!({
                    "gens": sg.gens(),
                    "conductor": sg.conductor(),
                    "frobenius": sg.frobenius(),
                    "symmetric": sg.is_symmetric(),
                });
            }
            v["rank_over_d"] = json!(c.rank());
        }
        AnyRing::Artin(a) => {
            v["length"] = json!(a.rank());
            v["variables"] = json!(a.variables());
        }
    }
    Ok(v)
}

fn module_json<T: WsCoeff>(m: &Arc<CoeffModule<T>>) -> Value {
    let res = m.resolution(2);
    json!({
        "mu": m.mu(),
        "length": m.length().ok(),
        "free_rank": m.free_rank(),
        "torsion": m.torsion(),
        "depth": m.depth01(),
        "mcm": m.is_mcm(),
        "loewy_length": m.torsion_part().loewy_length(),
        "betti": res.betti,
    })
}

fn ext_json<T: WsCoeff>(e: &ExtPresentation<T>) -> Value {
    let (tors, free) = e.invariants();
    json!({
        "length": e.length().ok(),
        "classes": e.size(),
        "torsion": tors,
        "free_rank": free,
        "generators": e.module.ngens(),
        "betti": e.betti(),
    })
}

fn span_json<T: WsCoeff>(s: &SubExt<T>) -> Value {
    let (tors, free) = s.invariants();
    json!({
        "length": s.span.length().ok(),
        "torsion": tors,
        "free_rank": free,
        "closed": s.certificate.is_closed(),
        "violations": s.certificate.violations,
    })
}

fn ideal_arg<T: WsCoeff>(ws: &Workspace, ring: &str, r: &Arc<subext_core::rings::RingHandle<T>>, s: &str) -> Res<FracIdeal<T>> {
    if s == "m" {
        return Ok(FracIdeal::maximal(r));
    }
    if let Some(k) = s.strip_prefix("m^") {
        let k: u32 = k.parse().map_err(|_| ComputeError::new("ParseError", format!("bad power in {s:?}")))?;
        return Ok(FracIdeal::maximal(r).power(k));
    }
    let e = ws.ideals.get(s).ok_or_else(|| unknown("ideal", s))?;
    if e.ring != ring {
        return Err(ComputeError::new("RingMismatch", format!("ideal {s:?} is over {}", e.ring)));
    }
    ws.ideal::<T>(s).cloned().ok_or_else(|| ComputeError::new("RingMismatch", format!("ideal {s:?} has the wrong ring family")))
}

fn module_arg<T: WsCoeff>(ws: &Workspace, ring: &str, l: &str) -> Res<Arc<CoeffModule<T>>> {
    let e = ws.modules.get(l).ok_or_else(|| unknown("module", l))?;
    if e.ring != ring {
        return Err(ComputeError::new("RingMismatch", format!("module {l:?} is over {}, expected {ring}", e.ring)));
    }
    ws.module::<T>(l).cloned().ok_or_else(|| ComputeError::new("RingMismatch", format!("module {l:?} has the wrong ring family")))
}

fn numfn_arg<T: WsCoeff>(ws: &Workspace, ring: &str, r: &Arc<subext_core::rings::RingHandle<T>>, s: &str) -> Res<NumFn<T>> {
    let (head, arg) = s.split_once(':').unwrap_or((s, ""));
    Ok(match head {
        "mu" => NumFn::Mu,
        "nu" => NumFn::Nu(ideal_arg(ws, ring, r, arg)?),
        "et" => NumFn::Et(ideal_arg(ws, ring, r, arg)?),
        "hom-from" => NumFn::LenHomFrom(module_arg(ws, ring, arg)?),
        "hom-to" => NumFn::LenHomTo(module_arg(ws, ring, arg)?),
        "tensor" => NumFn::LenTensor(module_arg(ws, ring, arg)?),
        _ => return Err(ComputeError::new("ParseError", format!("unknown function {s:?}; use mu, nu:I, et:I, hom-from:C, hom-to:C or tensor:C"))),
    })
}

fn run_typed<T: WsCoeff>(ws: &Workspace, ring: &str, cmd: &Command, budget: u64) -> Res<Value> {
    let r = ws.ring::<T>(ring).ok_or_else(|| unknown("ring", ring))?.clone();
    let pair = |m: &str, n: &str| -> Res<ExtPresentation<T>> { Ok(ext1(&module_arg::<T>(ws, ring, m)?, &module_arg::<T>(ws, ring, n)?)?) };
    match cmd {
        Command::RingInfo { .. } => unreachable!("handled before dispatch"),
        Command::ModInvariants { module } => Ok(module_json(&module_arg::<T>(ws, ring, module)?)),
        Command::Ext { m, n } => Ok(ext_json(&pair(m, n)?)),
        Command::ExtSub { m, n, phis, list } => {
            let e = pair(m, n)?;
            let fns: Vec<NumFn<T>> = phis.iter().map(|p| numfn_arg(ws, ring, &r, p)).collect::<Res<_>>()?;
            let s = ext1_sub(&e, &fns, budget)?;
            let mut v = json!({
                "functions": fns.iter().map(|f| f.name()).collect::<Vec<_>>(),
                "ext": ext_json(&e),
                "total_classes": s.total,
                "sub_classes": s.len(),
                "span": span_json(&s),
            });
            if *list {
                let cls: Vec<Vec<String>> = s.classes.iter().map(|c| c.coords.iter().map(|x| x.to_string()).collect()).collect();
                v["classes"] = json!(cls);
            }
            Ok(v)
        }
        Command::ExtUl { m, n, ideal, s } => {
            let e = pair(m, n)?;
            let i = ideal_arg(ws, ring, &r, ideal)?;
            let u = ext1_ul(&e, &i, *s, budget)?;
            Ok(json!({
                "ext": ext_json(&e),
                "s": s,
                "ul_classes": u.ul.len(),
                "nu_classes": u.nu.len(),
                "agree": u.agree(),
                "ul_span": span_json(&u.ul),
            }))
        }
        Command::Middle { m, n, class } => {
            let e = pair(m, n)?;
            let gens = e.module.ngens();
            if class.len() != gens {
                return Err(ComputeError::new("Invalid", format!("the class needs {gens} coordinates, got {}", class.len())));
            }
            let p = r.prime();
            let mut coords = Vec::new();
            for c in class {
                let d = d_digits(p, c).map_err(|msg| ComputeError::new("ParseError", msg))?;
                coords.push(T::from_digits(p, &d));
            }
            let c = e.class(coords);
            let s = e.middle(&c);
            Ok(json!({
                "zero": e.is_zero(&c),
                "split": s.is_split()?,
                "exact": s.is_exact(),
                "mu_additive": NumFn::Mu.is_additive(&s)?,
                "middle": module_json(&s.x),
            }))
        }
    }
}

/// t-adic digits of a polynomial in t with integer coefficients, e.g. "1 + 2*t^3".
fn d_digits(p: u16, s: &str) -> Result<Vec<u16>, String> {
    let mut d: Vec<i64> = Vec::new();
    for term in s.split('+').map(str::trim) {
        let (c, k) = match term.split_once('t') {
            None => (term, 0usize),
            Some((c, e)) => {
                let c = c.trim_end_matches('*');
                let k = match e.strip_prefix('^') {
                    Some(k) => k.parse().map_err(|_| format!("bad exponent in {term:?}"))?,
                    None if e.is_empty() => 1,
                    None => return Err(format!("bad term {term:?}")),
                };
                (if c.is_empty() { "1" } else { c }, k)
            }
        };
        let c: i64 = c.parse().map_err(|_| format!("bad coefficient in {term:?}"))?;
        if d.len() <= k {
            d.resize(k + 1, 0);
        }
        d[k] += c;
    }
    Ok(d.into_iter().map(|x| x.rem_euclid(p as i64) as u16).collect())
}
