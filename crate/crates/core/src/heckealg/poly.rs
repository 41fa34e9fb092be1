use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Laurent polynomial in the formal variable p with exact integer
/// coefficients. Equality is coefficient-wise; evaluation is exact.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IntPoly {
    // exponent -> coefficient, zero coefficients never stored
    terms: BTreeMap<i32, i64>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn one() -> Self {
        IntPoly::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        let mut t = BTreeMap::new();
        if c != 0 {
            t.insert(0, c);
        }
        IntPoly { terms: t }
    }

    /// c * p^e.
    pub fn monomial(c: i64, e: i32) -> Self {
        let mut t = BTreeMap::new();
        if c != 0 {
            t.insert(e, c);
        }
        IntPoly { terms: t }
    }

    /// p^e.
    pub fn p_pow(e: i32) -> Self {
        IntPoly::monomial(1, e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i32) -> i64 {
        self.terms.get(&e).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// True when no negative powers of p occur.
    pub fn is_polynomial(&self) -> bool {
        self.min_exp().map_or(true, |e| e >= 0)
    }

    fn insert(&mut self, e: i32, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(e).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn shift(&self, e: i32) -> IntPoly {
        IntPoly {
            terms: self.terms.iter().map(|(&k, &v)| (k + e, v)).collect(),
        }
    }

    /// Exact evaluation at an integer p (p != 0 required if negative
    /// exponents occur, and the result must be an integer).
    pub fn eval_i128(&self, p: i128) -> i128 {
        let shift = self.min_exp().unwrap_or(0).min(0);
        // multiply through by p^-shift, evaluate, then divide back
        let mut acc: i128 = 0;
        for (&e, &c) in &self.terms {
            acc += c as i128 * p.pow((e - shift) as u32);
        }
        if shift == 0 {
            acc
        } else {
            let d = p.pow((-shift) as u32);
            assert_eq!(acc % d, 0, "evaluation is not integral");
            acc / d
        }
    }

    /// Evaluation modulo m at a residue r; r must be a unit mod m when
    /// negative exponents occur.
    pub fn eval_mod(&self, r: u64, m: u64) -> u64 {
        assert!(m > 1);
        let r = r % m;
        let rinv = self.min_exp().map_or(0, |e| if e < 0 { inv_mod(r, m) } else { 0 });
        let mut acc: u64 = 0;
        for (&e, &c) in &self.terms {
            let base = if e >= 0 { r } else { rinv };
            let pw = pow_mod(base, e.unsigned_abs() as u64, m);
            let c_mod = c.rem_euclid(m as i64) as u64;
            acc = (acc + c_mod * pw) % m;
        }
        acc
    }

    /// Exact division; panics if the divisor does not divide evenly.
    /// Both operands are normalized by p-power shifts first, so Laurent
    /// inputs are fine.
    pub fn div_exact(&self, rhs: &IntPoly) -> IntPoly {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return IntPoly::zero();
        }
        let ls = self.min_exp().unwrap();
        let rs = rhs.min_exp().unwrap();
        let mut num = self.shift(-ls);
        let den = rhs.shift(-rs);
        let dlead_exp = den.max_exp().unwrap();
        let dlead = den.coeff(dlead_exp);
        let mut q = IntPoly::zero();
        while !num.is_zero() {
            let nlead_exp = num.max_exp().unwrap();
            let nlead = num.coeff(nlead_exp);
            assert!(
                nlead_exp >= dlead_exp && nlead % dlead == 0,
                "inexact polynomial division"
            );
            let t = IntPoly::monomial(nlead / dlead, nlead_exp - dlead_exp);
            num = &num - &(&t * &den);
            q = &q + &t;
        }
        q.shift(ls - rs)
    }

    /// Gaussian binomial [n choose k]_p as a polynomial.
    pub fn gaussian_binomial(n: usize, k: usize) -> IntPoly {
        if k > n {
            return IntPoly::zero();
        }
        let mut acc = IntPoly::one();
        for i in 1..=k {
            let num = &IntPoly::p_pow((n - k + i) as i32) - &IntPoly::one();
            let den = &IntPoly::p_pow(i as i32) - &IntPoly::one();
            acc = (&acc * &num).div_exact(&den);
        }
        acc
    }
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert_eq!(r0, 1, "not a unit");
    t0.rem_euclid(m as i128) as u64
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (&e, &c) in &rhs.terms {
            out.insert(e, c);
        }
        out
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (&e, &c) in &rhs.terms {
            out.insert(e, -c);
        }
        out
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        let mut out = IntPoly::zero();
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &rhs.terms {
                out.insert(e1 + e2, c1.checked_mul(c2).expect("coefficient overflow"));
            }
        }
        out
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            terms: self.terms.iter().map(|(&e, &c)| (e, -c)).collect(),
        }
    }
}

impl std::fmt::Display for IntPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, &c) in self.terms.iter().rev() {
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.unsigned_abs();
            match e {
                0 => write!(f, "{mag}")?,
                1 => {
                    if mag == 1 {
                        write!(f, "p")?
                    } else {
                        write!(f, "{mag}p")?
                    }
                }
                _ => {
                    if mag == 1 {
                        write!(f, "p^{e}")?
                    } else {
                        write!(f, "{mag}p^{e}")?
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_eval() {
        let a = &IntPoly::p_pow(2) - &IntPoly::one(); // p^2 - 1
        let b = &IntPoly::p_pow(1) + &IntPoly::one(); // p + 1
        let q = a.div_exact(&b);
        assert_eq!(q, &IntPoly::p_pow(1) - &IntPoly::one());
        assert_eq!(a.eval_i128(5), 24);
    }

    #[test]
    fn laurent_eval() {
        // (p^3 - 1) / p^4 = p^-1 - p^-4
        let f = &IntPoly::monomial(1, -1) - &IntPoly::monomial(1, -4);
        assert_eq!(f.eval_mod(8, 9), {
            // p = -1 mod 9: p^-1 = -1, p^-4 = 1 -> -1 - 1 = -2 = 7
            7
        });
    }

    #[test]
    fn gaussian_binomial_polynomials() {
        let g = IntPoly::gaussian_binomial(4, 2);
        // [4 2]_p = p^4 + p^3 + 2p^2 + p + 1
        let expect = {
            let mut s = IntPoly::zero();
            for (c, e) in [(1, 4), (1, 3), (2, 2), (1, 1), (1, 0)] {
                s = &s + &IntPoly::monomial(c, e);
            }
            s
        };
        assert_eq!(g, expect);
        assert_eq!(g.eval_i128(3), 130);
    }

    #[test]
    fn display_formatting() {
        let f = &(&IntPoly::p_pow(6) + &IntPoly::monomial(2, 5)) - &IntPoly::monomial(2, 2);
        assert_eq!(f.to_string(), "p^6 + 2p^5 - 2p^2");
    }
}
