//! Dense polynomials over F_p, coefficients stored low degree first.

pub(crate) fn inv_mod(a: u16, p: u16) -> u16 {
    debug_assert!(a % p != 0);
    let (mut e, mut base, mut acc) = (p as u32 - 2, a as u32 % p as u32, 1u32);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u32;
        }
        base = base * base % p as u32;
        e >>= 1;
    }
    acc as u16
}

pub(crate) fn trim(v: &mut Vec<u16>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn add(a: &[u16], b: &[u16], p: u16) -> Vec<u16> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = *a.get(i).unwrap_or(&0) as u32 + *b.get(i).unwrap_or(&0) as u32;
        out.push((x % p as u32) as u16);
    }
    trim(&mut out);
    out
}

pub(crate) fn neg(a: &[u16], p: u16) -> Vec<u16> {
    a.iter().map(|&x| if x == 0 { 0 } else { p - x }).collect()
}

pub(crate) fn mul(a: &[u16], b: &[u16], p: u16) -> Vec<u16> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] = (acc[i + j] + x as u32 * y as u32) % p as u32;
        }
    }
    let mut out: Vec<u16> = acc.into_iter().map(|x| x as u16).collect();
    trim(&mut out);
    out
}

pub(crate) fn scale(a: &[u16], c: u16, p: u16) -> Vec<u16> {
    let mut out: Vec<u16> = a
        .iter()
        .map(|&x| (x as u32 * c as u32 % p as u32) as u16)
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn divrem(a: &[u16], b: &[u16], p: u16) -> (Vec<u16>, Vec<u16>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = inv_mod(*b.last().unwrap(), p) as u32;
    let mut q = vec![0u16; r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = (*r.last().unwrap() as u32 * lead_inv % p as u32) as u16;
        q[shift] = c;
        for (j, &y) in b.iter().enumerate() {
            let sub = c as u32 * y as u32 % p as u32;
            let cur = r[shift + j] as u32;
            r[shift + j] = ((cur + p as u32 - sub) % p as u32) as u16;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// Monic gcd.
pub(crate) fn gcd(a: &[u16], b: &[u16], p: u16) -> Vec<u16> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&l) = x.last() {
        x = scale(&x, inv_mod(l, p), p);
    }
    x
}

/// Order of vanishing at t = 0; `None` for the zero polynomial.
pub(crate) fn val(a: &[u16]) -> Option<u32> {
    a.iter().position(|&x| x != 0).map(|i| i as u32)
}

/// First `k` coefficients of the power series 1/d, d(0) != 0.
pub(crate) fn series_inv(d: &[u16], k: usize, p: u16) -> Vec<u16> {
    let c0 = inv_mod(d[0], p) as u32;
    let pm = p as u32;
    let mut out = vec![0u16; k];
    for n in 0..k {
        let mut s: u32 = if n == 0 { 1 } else { 0 };
        for j in 1..=n.min(d.len().saturating_sub(1)) {
            s = (s + pm - (d[j] as u32 * out[n - j] as u32) % pm) % pm;
        }
        out[n] = (s * c0 % pm) as u16;
    }
    out
}

pub(crate) fn truncate(a: &[u16], k: usize) -> Vec<u16> {
    let mut v: Vec<u16> = a.iter().take(k).copied().collect();
    trim(&mut v);
    v
}
