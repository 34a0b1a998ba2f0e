use num_integer::Integer;

use crate::{Error, Result};

/// A numerical semigroup, kept with its minimal generators and a membership table
/// up to the conductor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semigroup {
    gens: Vec<u32>,
    /// member[v] for 0 <= v < conductor; everything from the conductor on is a member.
    member: Vec<bool>,
}

impl Semigroup {
    pub fn new(raw: &[u32]) -> Result<Self> {
        let mut g: Vec<u32> = raw.iter().copied().filter(|&x| x > 0).collect();
        g.sort_unstable();
        g.dedup();
        if g.is_empty() || g.iter().fold(0u32, |a, &b| a.gcd(&b)) != 1 {
            return Err(Error::BadSemigroup(raw.to_vec()));
        }
        // Frobenius number is below a1 * ak, so that bound is enough for the table.
        let bound = (g[0] * g[g.len() - 1]) as usize + 1;
        let mut member = vec![false; bound];
        member[0] = true;
        for v in 1..bound {
            member[v] = g.iter().any(|&a| v >= a as usize && member[v - a as usize]);
        }
        let conductor = member.iter().rposition(|&m| !m).map_or(0, |i| i + 1);
        member.truncate(conductor);
        let minimal: Vec<u32> = g
            .iter()
            .copied()
            .filter(|&a| {
                // a is redundant when a - b is a member for some smaller generator b
                !g.iter()
                    .any(|&b| b < a && Self::in_table(&member, (a - b) as i64))
            })
            .collect();
        Ok(Semigroup {
            gens: minimal,
            member,
        })
    }

    fn in_table(member: &[bool], v: i64) -> bool {
        v >= 0 && (v as usize >= member.len() || member[v as usize])
    }

    pub fn naturals() -> Self {
        Semigroup::new(&[1]).expect("N is a semigroup")
    }

    pub fn gens(&self) -> &[u32] {
        &self.gens
    }

    pub fn multiplicity(&self) -> u32 {
        self.gens[0]
    }

    pub fn contains(&self, v: i64) -> bool {
        Self::in_table(&self.member, v)
    }

    /// Least c with c + N inside the semigroup.
    pub fn conductor(&self) -> u32 {
        self.member.len() as u32
    }

    /// Largest gap, -1 for N.
    pub fn frobenius(&self) -> i64 {
        self.conductor() as i64 - 1
    }

    pub fn gaps(&self) -> Vec<u32> {
        (0..self.conductor()).filter(|&v| !self.member[v as usize]).collect()
    }

    /// Smallest member congruent to r modulo e, for each r < e (e must be a member).
    pub fn apery(&self, e: u32) -> Vec<u32> {
        (0..e)
            .map(|r| {
                (r..)
                    .step_by(e as usize)
                    .find(|&v| self.contains(v as i64))
                    .expect("cofinite set")
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        let f = self.frobenius();
        (0..=f).all(|v| self.contains(v) != self.contains(f - v))
    }

    /// Builds the semigroup generated by a valuation set given by residue minima.
    pub fn from_residue_minima(minima: &[u32]) -> Result<Self> {
        let e = minima.len() as u32;
        let mut g = minima.to_vec();
        g.push(e);
        Semigroup::new(&g)
    }
}
