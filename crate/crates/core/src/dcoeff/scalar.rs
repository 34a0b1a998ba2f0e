use std::fmt;
use std::hash::Hash;

use super::poly;

/// Largest prime accepted for a coefficient base.
pub const MAX_PRIME: u16 = 257;

pub fn is_prime(p: u16) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u16;
    while (d as u32) * (d as u32) <= p as u32 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Scalars of a coefficient base D: either F_p or F_p[t] localized at (t).
///
/// The prime travels with every value, so constants are built with an explicit `p`.
pub trait Coeff: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// True when D is a field (no uniformizer, no torsion).
    const IS_FIELD: bool;

    fn prime(&self) -> u16;
    fn zero(p: u16) -> Self;
    fn one(p: u16) -> Self;
    fn from_i64(p: u16, v: i64) -> Self;
    /// Σ d_k t^k. Over a field only `d[0]` is used.
    fn from_digits(p: u16, d: &[u16]) -> Self;
    /// t^k; over a field t is read as 0, so only t^0 is nonzero.
    fn t_pow(p: u16, k: u32) -> Self;

    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;

    /// t-adic valuation, `None` for zero. Nonzero field elements have valuation 0.
    fn val(&self) -> Option<u32>;
    /// x with o·x = self, when it exists in D.
    fn div_exact(&self, o: &Self) -> Option<Self>;
    /// Canonical representative modulo t^k (`None`: no reduction).
    fn reduce(&self, k: Option<u32>) -> Self;
    /// First `k` t-adic digits.
    fn digits(&self, k: u32) -> Vec<u16>;

    fn is_unit(&self) -> bool {
        self.val() == Some(0)
    }
    fn is_one(&self) -> bool {
        *self == Self::one(self.prime())
    }
    fn residue(&self) -> u16 {
        self.digits(1)[0]
    }
    fn unit_inv(&self) -> Self {
        Self::one(self.prime())
            .div_exact(self)
            .expect("inverse of a non-unit")
    }
}

/// Residue class modulo p.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp {
    p: u16,
    v: u16,
}

impl Fp {
    pub fn new(p: u16, v: i64) -> Self {
        Fp {
            p,
            v: v.rem_euclid(p as i64) as u16,
        }
    }
    pub fn value(&self) -> u16 {
        self.v
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Coeff for Fp {
    const IS_FIELD: bool = true;

    fn prime(&self) -> u16 {
        self.p
    }
    fn zero(p: u16) -> Self {
        Fp { p, v: 0 }
    }
    fn one(p: u16) -> Self {
        Fp { p, v: 1 % p }
    }
    fn from_i64(p: u16, v: i64) -> Self {
        Fp::new(p, v)
    }
    fn from_digits(p: u16, d: &[u16]) -> Self {
        Fp::new(p, d.first().copied().unwrap_or(0) as i64)
    }
    fn t_pow(p: u16, k: u32) -> Self {
        if k == 0 {
            Self::one(p)
        } else {
            Self::zero(p)
        }
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn add(&self, o: &Self) -> Self {
        Fp {
            p: self.p,
            v: ((self.v as u32 + o.v as u32) % self.p as u32) as u16,
        }
    }
    fn sub(&self, o: &Self) -> Self {
        Fp {
            p: self.p,
            v: ((self.v as u32 + self.p as u32 - o.v as u32) % self.p as u32) as u16,
        }
    }
    fn neg(&self) -> Self {
        Fp {
            p: self.p,
            v: if self.v == 0 { 0 } else { self.p - self.v },
        }
    }
    fn mul(&self, o: &Self) -> Self {
        Fp {
            p: self.p,
            v: (self.v as u32 * o.v as u32 % self.p as u32) as u16,
        }
    }
    fn val(&self) -> Option<u32> {
        if self.v == 0 {
            None
        } else {
            Some(0)
        }
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        if o.v == 0 {
            return if self.v == 0 { Some(*self) } else { None };
        }
        Some(self.mul(&Fp {
            p: self.p,
            v: poly::inv_mod(o.v, self.p),
        }))
    }
    fn reduce(&self, k: Option<u32>) -> Self {
        match k {
            Some(0) => Self::zero(self.p),
            _ => *self,
        }
    }
    fn digits(&self, k: u32) -> Vec<u16> {
        let mut d = vec![0u16; k as usize];
        if k > 0 {
            d[0] = self.v;
        }
        d
    }
}

/// Element of F_p[t]_(t): reduced fraction num/den with den(0) = 1.
/// An empty `den` stands for the constant 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Local {
    p: u16,
    num: Vec<u16>,
    den: Vec<u16>,
}

impl Local {
    /// Builds num/den; panics if den(0) = 0.
    pub fn frac(p: u16, num: &[u16], den: &[u16]) -> Self {
        let mut n: Vec<u16> = num.iter().map(|&x| x % p).collect();
        let mut d: Vec<u16> = den.iter().map(|&x| x % p).collect();
        poly::trim(&mut n);
        poly::trim(&mut d);
        assert!(
            !d.is_empty() && d[0] != 0,
            "denominator must have nonzero constant term"
        );
        Self::normalized(p, n, d)
    }

    pub fn poly(p: u16, num: &[u16]) -> Self {
        let mut n: Vec<u16> = num.iter().map(|&x| x % p).collect();
        poly::trim(&mut n);
        Local {
            p,
            num: n,
            den: Vec::new(),
        }
    }

    pub fn numerator(&self) -> &[u16] {
        &self.num
    }

    pub fn denominator(&self) -> Vec<u16> {
        if self.den.is_empty() {
            vec![1]
        } else {
            self.den.clone()
        }
    }

    fn normalized(p: u16, mut num: Vec<u16>, mut den: Vec<u16>) -> Self {
        poly::trim(&mut num);
        poly::trim(&mut den);
        if num.is_empty() {
            return Local {
                p,
                num,
                den: Vec::new(),
            };
        }
        if den.is_empty() || (den.len() == 1 && den[0] == 1) {
            return Local {
                p,
                num,
                den: Vec::new(),
            };
        }
        let g = poly::gcd(&num, &den, p);
        if g.len() > 1 {
            num = poly::divrem(&num, &g, p).0;
            den = poly::divrem(&den, &g, p).0;
        }
        let c = poly::inv_mod(den[0], p);
        if c != 1 {
            num = poly::scale(&num, c, p);
            den = poly::scale(&den, c, p);
        }
        if den.len() == 1 {
            den.clear();
        }
        Local { p, num, den }
    }

    fn den_or_one(&self) -> Vec<u16> {
        if self.den.is_empty() {
            vec![1]
        } else {
            self.den.clone()
        }
    }
}

impl fmt::Display for Local {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn show(c: &[u16]) -> String {
            if c.is_empty() {
                return "0".into();
            }
            let mut parts = Vec::new();
            for (i, &x) in c.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let term = match (i, x) {
                    (0, _) => format!("{x}"),
                    (1, 1) => "t".to_string(),
                    (1, _) => format!("{x}t"),
                    (_, 1) => format!("t^{i}"),
                    _ => format!("{x}t^{i}"),
                };
                parts.push(term);
            }
            parts.join("+")
        }
        if self.den.is_empty() {
            write!(f, "{}", show(&self.num))
        } else {
            write!(f, "({})/({})", show(&self.num), show(&self.den))
        }
    }
}

impl Coeff for Local {
    const IS_FIELD: bool = false;

    fn prime(&self) -> u16 {
        self.p
    }
    fn zero(p: u16) -> Self {
        Local {
            p,
            num: Vec::new(),
            den: Vec::new(),
        }
    }
    fn one(p: u16) -> Self {
        Local::poly(p, &[1])
    }
    fn from_i64(p: u16, v: i64) -> Self {
        Local::poly(p, &[v.rem_euclid(p as i64) as u16])
    }
    fn from_digits(p: u16, d: &[u16]) -> Self {
        Local::poly(p, d)
    }
    fn t_pow(p: u16, k: u32) -> Self {
        let mut v = vec![0u16; k as usize + 1];
        v[k as usize] = 1;
        Local::poly(p, &v)
    }
    fn is_zero(&self) -> bool {
        self.num.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        if self.den.is_empty() && o.den.is_empty() {
            return Local {
                p: self.p,
                num: poly::add(&self.num, &o.num, self.p),
                den: Vec::new(),
            };
        }
        if self.den == o.den {
            return Self::normalized(self.p, poly::add(&self.num, &o.num, self.p), self.den.clone());
        }
        let (d1, d2) = (self.den_or_one(), o.den_or_one());
        let n = poly::add(
            &poly::mul(&self.num, &d2, self.p),
            &poly::mul(&o.num, &d1, self.p),
            self.p,
        );
        Self::normalized(self.p, n, poly::mul(&d1, &d2, self.p))
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn neg(&self) -> Self {
        Local {
            p: self.p,
            num: poly::neg(&self.num, self.p),
            den: self.den.clone(),
        }
    }
    fn mul(&self, o: &Self) -> Self {
        if self.num.is_empty() || o.num.is_empty() {
            return Self::zero(self.p);
        }
        if self.den.is_empty() && o.den.is_empty() {
            return Local {
                p: self.p,
                num: poly::mul(&self.num, &o.num, self.p),
                den: Vec::new(),
            };
        }
        Self::normalized(
            self.p,
            poly::mul(&self.num, &o.num, self.p),
            poly::mul(&self.den_or_one(), &o.den_or_one(), self.p),
        )
    }
    fn val(&self) -> Option<u32> {
        poly::val(&self.num)
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        if self.num.is_empty() {
            return Some(Self::zero(self.p));
        }
        let vb = o.val()? as usize;
        let va = self.val().unwrap() as usize;
        if vb > va {
            return None;
        }
        let p = self.p;
        let a_core = &self.num[va..];
        let b_core = &o.num[vb..];
        let mut num = vec![0u16; va - vb];
        num.extend(poly::mul(a_core, &o.den_or_one(), p));
        let den = poly::mul(&self.den_or_one(), b_core, p);
        Some(Self::normalized(p, num, den))
    }
    fn reduce(&self, k: Option<u32>) -> Self {
        let k = match k {
            None => return self.clone(),
            Some(k) => k as usize,
        };
        if self.den.is_empty() {
            if self.num.len() <= k {
                return self.clone();
            }
            return Local::poly(self.p, &poly::truncate(&self.num, k));
        }
        let inv = poly::series_inv(&self.den, k, self.p);
        let prod = poly::mul(&poly::truncate(&self.num, k), &inv, self.p);
        Local::poly(self.p, &poly::truncate(&prod, k))
    }
    fn digits(&self, k: u32) -> Vec<u16> {
        let r = self.reduce(Some(k));
        let mut d = r.num;
        d.resize(k as usize, 0);
        d
    }
}
