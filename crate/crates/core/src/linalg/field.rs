use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default modulus for every computation.
pub const DEFAULT_PRIME: u64 = 32003;
/// Second modulus used for cross-checks.
pub const SECONDARY_PRIME: u64 = 65521;

/// Largest modulus accepted; products of two reduced elements must fit a
/// `u64` with plenty of room for lazy accumulation.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// The prime field GF(p). Elements are `u64` values in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u64,
}

impl TryFrom<u64> for PrimeField {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.p
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut k = 3;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 2;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p <= 2 || p > MAX_PRIME || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn default_field() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.p
    }

    /// Fails unless `p > d`.
    pub fn check_degree(self, d: usize) -> Result<()> {
        if (d as u64) >= self.p {
            Err(Error::FieldTooSmall { p: self.p, d })
        } else {
            Ok(())
        }
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u64 {
        x % self.p
    }

    pub fn from_i64(self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    /// Representative in `(-p/2, p/2]`, handy for display.
    pub fn to_signed(self, x: u64) -> i64 {
        if x > self.p / 2 {
            x as i64 - self.p as i64
        } else {
            x as i64
        }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in GF({})", self.p);
        self.pow(a, self.p - 2)
    }

    /// Converts a small non-negative integer (a degree, an exponent) into
    /// the field.
    #[inline]
    pub fn from_usize(self, n: usize) -> u64 {
        (n as u64) % self.p
    }

    pub fn is_square(self, a: u64) -> bool {
        let a = a % self.p;
        a == 0 || self.pow(a, (self.p - 1) / 2) == 1
    }

    /// Square root by Tonelli–Shanks; `None` for non-residues.
    pub fn sqrt(self, a: u64) -> Option<u64> {
        let a = a % self.p;
        if a == 0 {
            return Some(0);
        }
        if !self.is_square(a) {
            return None;
        }
        let p = self.p;
        if p % 4 == 3 {
            return Some(self.pow(a, (p + 1) / 4));
        }
        let mut q = p - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let mut z = 2;
        while self.is_square(z) {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let b = self.pow(c, 1 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }
}

impl std::fmt::Display for PrimeField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites_and_two() {
        assert_eq!(PrimeField::new(2), Err(Error::NotPrime(2)));
        assert_eq!(PrimeField::new(9), Err(Error::NotPrime(9)));
        assert_eq!(PrimeField::new(32001), Err(Error::NotPrime(32001)));
        assert!(PrimeField::new(32003).is_ok());
        assert!(PrimeField::new(65521).is_ok());
    }

    #[test]
    fn inverse_and_sqrt() {
        for p in [5u64, 13, 17, 32003, 65521] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p.min(400) {
                assert_eq!(f.mul(a, f.inv(a)), 1);
                let sq = f.mul(a, a);
                let r = f.sqrt(sq).unwrap();
                assert_eq!(f.mul(r, r), sq);
            }
        }
    }

    #[test]
    fn non_residue_has_no_root() {
        let f = PrimeField::new(13).unwrap();
        // squares mod 13: 1, 4, 9, 3, 12, 10
        assert!(f.sqrt(2).is_none());
        assert!(f.sqrt(5).is_none());
        assert_eq!(f.sqrt(10).map(|r| f.mul(r, r)), Some(10));
    }

    #[test]
    fn degree_guard() {
        let f = PrimeField::new(7).unwrap();
        assert!(f.check_degree(6).is_ok());
        assert_eq!(f.check_degree(7), Err(Error::FieldTooSmall { p: 7, d: 7 }));
    }
}
