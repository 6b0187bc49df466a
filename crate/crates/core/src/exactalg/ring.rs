use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// The coefficient ring `Z/p^e`. With `e = 1` this is the prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RingRepr", into = "RingRepr")]
pub struct RingSpec {
    p: u32,
    e: u32,
    q: u32,
}

#[derive(Serialize, Deserialize)]
struct RingRepr {
    p: u32,
    e: u32,
}

impl TryFrom<RingRepr> for RingSpec {
    type Error = AlgebraError;
    fn try_from(r: RingRepr) -> Result<Self, Self::Error> {
        RingSpec::new(r.p, r.e)
    }
}

impl From<RingSpec> for RingRepr {
    fn from(r: RingSpec) -> Self {
        RingRepr { p: r.p, e: r.e }
    }
}

pub const SUPPORTED_PRIMES: [u32; 4] = [2, 3, 5, 7];

impl RingSpec {
    pub fn new(p: u32, e: u32) -> Result<Self, AlgebraError> {
        if !SUPPORTED_PRIMES.contains(&p) {
            return Err(AlgebraError::UnsupportedRing { p, e });
        }
        if e == 0 || e > 4 {
            return Err(AlgebraError::UnsupportedRing { p, e });
        }
        Ok(RingSpec { p, e, q: p.pow(e) })
    }

    /// The residue field `F_p`.
    pub fn field(p: u32) -> Result<Self, AlgebraError> {
        Self::new(p, 1)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }

    /// `p^e`, the number of ring elements.
    #[inline]
    pub fn modulus(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn is_field(&self) -> bool {
        self.e == 1
    }

    pub fn residue_field(&self) -> RingSpec {
        RingSpec { p: self.p, e: 1, q: self.p }
    }

    #[inline]
    pub fn reduce(&self, a: i64) -> u32 {
        a.rem_euclid(self.q as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a * b) % self.q
    }

    /// `p^k` as a ring element (zero once `k >= e`).
    #[inline]
    pub fn p_pow(&self, k: u32) -> u32 {
        if k >= self.e {
            0
        } else {
            self.p.pow(k)
        }
    }

    /// The p-adic valuation; `e` for zero.
    pub fn valuation(&self, a: u32) -> u32 {
        if a == 0 {
            return self.e;
        }
        let mut k = 0;
        let mut x = a;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            k += 1;
        }
        k
    }

    #[inline]
    pub fn is_unit(&self, a: u32) -> bool {
        !a.is_multiple_of(self.p)
    }

    /// Inverse of a unit.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if !self.is_unit(a) {
            return None;
        }
        let (mut r0, mut r1) = (self.q as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let qt = r0 / r1;
            (r0, r1) = (r1, r0 - qt * r1);
            (t0, t1) = (t1, t0 - qt * t1);
        }
        Some(self.reduce(t0))
    }

    /// Writes a nonzero `a` as `u * p^k` and returns `(k, u^{-1})`.
    pub fn split_unit(&self, a: u32) -> (u32, u32) {
        debug_assert!(a != 0);
        let k = self.valuation(a);
        let u = a / self.p.pow(k);
        (k, self.inv(u).expect("unit part is invertible"))
    }

    /// Iterator over all ring elements.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    /// Units of the ring.
    pub fn units(&self) -> impl Iterator<Item = u32> + '_ {
        (1..self.q).filter(move |a| self.is_unit(*a))
    }

    /// A generator of the cyclic group `F_p^x` (smallest such residue).
    pub fn primitive_root(&self) -> u32 {
        let p = self.p;
        if p == 2 {
            return 1;
        }
        (2..p)
            .find(|&g| {
                let mut x = 1u32;
                for k in 1..p - 1 {
                    x = x * g % p;
                    if x == 1 && k < p - 1 {
                        return false;
                    }
                }
                true
            })
            .expect("F_p^x is cyclic")
    }
}

impl std::fmt::Display for RingSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.e == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "Z/{}^{}", self.p, self.e)
        }
    }
}
