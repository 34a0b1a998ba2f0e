//! Element syntax: F_p-linear combinations of monomials, `t^k` (k may be negative)
//! for curve rings and products of variable powers for Artinian rings.

use std::sync::Arc;

use subext_core::dcoeff::Coeff;
use subext_core::rings::{FracElem, RingHandle};

struct Term {
    coef: i64,
    exps: Vec<i64>,
}

fn parse_int(s: &str) -> Result<i64, String> {
    s.trim().parse::<i64>().map_err(|_| format!("expected an integer, found {s:?}"))
}

/// Splits "a + b - c" into signed terms; a leading sign is allowed.
fn signed_terms(s: &str) -> Result<Vec<(i64, String)>, String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut sign = 1i64;
    let mut after_caret = false;
    for ch in s.chars() {
        match ch {
            '+' | '-' if !after_caret => {
                if !cur.trim().is_empty() {
                    out.push((sign, cur.trim().to_string()));
                } else if !out.is_empty() || !cur.is_empty() {
                    return Err(format!("empty term in {s:?}"));
                }
                cur.clear();
                sign = if ch == '-' { -1 } else { 1 };
            }
            c if c.is_whitespace() => {}
            c => {
                after_caret = c == '^';
                cur.push(c);
                continue;
            }
        }
        after_caret = false;
    }
    if cur.trim().is_empty() {
        return Err(format!("empty term in {s:?}"));
    }
    out.push((sign, cur.trim().to_string()));
    Ok(out)
}

fn parse_terms(s: &str, vars: &[String]) -> Result<Vec<Term>, String> {
    let mut out = Vec::new();
    for (sign, t) in signed_terms(s)? {
        let mut coef = sign;
        let mut exps = vec![0i64; vars.len()];
        for f in t.split('*') {
            if f.is_empty() {
                return Err(format!("empty factor in {t:?}"));
            }
            if f.chars().all(|c| c.is_ascii_digit()) {
                coef *= parse_int(f)?;
                continue;
            }
            let (name, e) = match f.split_once('^') {
                Some((n, e)) => (n, parse_int(e)?),
                None => (f, 1),
            };
            let k = vars
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| format!("unknown variable {name:?}"))?;
            exps[k] += e;
        }
        out.push(Term { coef, exps });
    }
    Ok(out)
}

/// An element of the total quotient ring (curve rings) or of R (Artinian rings).
pub fn parse_elem<T: Coeff>(ring: &Arc<RingHandle<T>>, s: &str) -> Result<FracElem<T>, String> {
    let p = ring.prime();
    let n = ring.amb_rank();
    if let Some(vars) = ring.variables() {
        let mut v = vec![T::zero(p); n];
        for t in parse_terms(s, vars)? {
            if t.exps.iter().any(|&e| e < 0) {
                return Err("negative exponent in an Artinian ring".into());
            }
            let ex: Vec<u32> = t.exps.iter().map(|&e| e as u32).collect();
            let mono = ring.monomial(&ex).ok_or_else(|| format!("bad monomial in {s:?}"))?;
            let c = T::from_i64(p, t.coef);
            v = v.iter().zip(&mono).map(|(a, b)| a.add(&c.mul(b))).collect();
        }
        return Ok(FracElem { shift: 0, v });
    }
    let e = ring.scalar_exp().ok_or("ring has no variables")? as i64;
    let terms = parse_terms(s, &["t".to_string()])?;
    let lo = terms.iter().map(|t| t.exps[0]).min().unwrap_or(0);
    let shift = if lo < 0 { (-lo + e - 1) / e } else { 0 };
    let mut v = vec![T::zero(p); n];
    for t in &terms {
        let a = ring.amb_t_pow((t.exps[0] + shift * e) as u32);
        let c = T::from_i64(p, t.coef);
        v = v.iter().zip(&a).map(|(x, y)| x.add(&c.mul(y))).collect();
    }
    Ok(FracElem { shift: shift as u32, v })
}

/// An element of R in R coordinates.
pub fn parse_ring_elem<T: Coeff>(ring: &Arc<RingHandle<T>>, s: &str) -> Result<Vec<T>, String> {
    let x = parse_elem(ring, s)?;
    if x.shift != 0 {
        return Err(format!("{s:?} is not in R"));
    }
    ring.from_ambient(&x.v).ok_or_else(|| format!("{s:?} is not in R"))
}
