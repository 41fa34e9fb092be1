use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The coefficient ring Z/p^e with e = 1 or 2.
///
/// All element arithmetic is done on `u32` residues in `[0, p^e)`; the
/// context carries enough structure to normalize, invert units and split
/// elements into `unit * p^v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingCtx {
    p: u32,
    e: u8,
    modulus: u32,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl RingCtx {
    pub fn new(p: u32, e: u8) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e != 1 && e != 2 {
            return Err(Error::BadExponent(e));
        }
        let modulus = p.checked_pow(e as u32).ok_or_else(|| {
            Error::domain(format!("modulus p^e = {p}^{e} does not fit in u32"))
        })?;
        Ok(RingCtx { p, e, modulus })
    }

    /// The field F_p.
    pub fn fp(p: u32) -> Result<Self> {
        RingCtx::new(p, 1)
    }

    /// The ring Z/p^2.
    pub fn zp2(p: u32) -> Result<Self> {
        RingCtx::new(p, 2)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u8 {
        self.e
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// The residue field F_p of this ring.
    pub fn residue_field(&self) -> RingCtx {
        RingCtx {
            p: self.p,
            e: 1,
            modulus: self.p,
        }
    }

    pub fn reduce_i64(&self, x: i64) -> u32 {
        x.rem_euclid(self.modulus as i64) as u32
    }

    pub fn reduce_u64(&self, x: u64) -> u32 {
        (x % self.modulus as u64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.modulus as u64) as u32
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + (self.modulus - b) as u64;
        (s % self.modulus as u64) as u32
    }

    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.modulus as u64) as u32
    }

    pub fn is_unit(&self, a: u32) -> bool {
        a % self.p != 0
    }

    /// Inverse of a unit; `None` for non-units.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if !self.is_unit(a) {
            return None;
        }
        // Z/p^e is finite; extended Euclid on (a, modulus).
        let (mut r0, mut r1) = (self.modulus as i64, (a % self.modulus) as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(self.reduce_i64(t0))
    }

    /// p-adic valuation of a residue; the valuation of 0 is `e`.
    pub fn valuation(&self, a: u32) -> u8 {
        if a == 0 {
            return self.e;
        }
        let mut v = 0u8;
        let mut x = a;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// Splits `a = unit * p^v`, returning `(v, unit)`. For `a = 0` returns `(e, 1)`.
    pub fn val_unit(&self, a: u32) -> (u8, u32) {
        if a == 0 {
            return (self.e, 1);
        }
        let v = self.valuation(a);
        (v, a / self.p.pow(v as u32))
    }

    pub fn pow_p(&self, v: u8) -> u32 {
        self.p.pow(v as u32)
    }

    /// Smallest quadratic non-residue unit mod p (requires odd p).
    pub fn nonresidue(&self) -> Result<u32> {
        if self.p == 2 {
            return Err(Error::domain(
                "no quadratic non-residue unit exists mod 2; p must be odd",
            ));
        }
        let p = self.p as u64;
        'cand: for d in 2..p {
            for x in 1..p {
                if (x * x) % p == d {
                    continue 'cand;
                }
            }
            return Ok(self.reduce_u64(d));
        }
        unreachable!("odd prime fields always contain a non-residue")
    }

    /// All quadratic non-residue units mod p, as residues of this ring.
    pub fn nonresidues(&self) -> Vec<u32> {
        let p = self.p as u64;
        let squares: std::collections::BTreeSet<u64> = (1..p).map(|x| (x * x) % p).collect();
        (2..p)
            .filter(|d| !squares.contains(d))
            .map(|d| self.reduce_u64(d))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_and_reduction() {
        let r = RingCtx::zp2(3).unwrap();
        assert_eq!(r.modulus(), 9);
        assert_eq!(r.reduce_i64(-1), 8);
        assert_eq!(r.add(5, 7), 3);
        assert_eq!(r.mul(4, 7), 1);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(RingCtx::new(4, 1).is_err());
        assert!(RingCtx::new(3, 3).is_err());
        assert!(RingCtx::new(1, 1).is_err());
    }

    #[test]
    fn unit_inverse() {
        let r = RingCtx::zp2(5).unwrap();
        for a in 0..25 {
            match r.inv(a) {
                Some(b) => assert_eq!(r.mul(a, b), 1),
                None => assert!(a % 5 == 0),
            }
        }
    }

    #[test]
    fn valuation_split() {
        let r = RingCtx::zp2(3).unwrap();
        assert_eq!(r.val_unit(6), (1, 2));
        assert_eq!(r.val_unit(4), (0, 4));
        assert_eq!(r.val_unit(0), (2, 1));
    }

    #[test]
    fn nonresidue_is_not_a_square() {
        for p in [3u32, 5, 7, 11] {
            let r = RingCtx::fp(p).unwrap();
            let d = r.nonresidue().unwrap();
            for x in 0..p {
                assert_ne!((x * x) % p, d);
            }
        }
        assert_eq!(RingCtx::fp(3).unwrap().nonresidue().unwrap(), 2);
        assert_eq!(RingCtx::fp(5).unwrap().nonresidue().unwrap(), 2);
    }
}
