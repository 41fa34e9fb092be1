use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lagrange::b;

use super::corank::corank_count_poly;
use super::poly::IntPoly;

/// Formal basis symbols for cycle-class expansions: single-flag symbols
/// y_j / z_j and pair-flag symbols y_{j,k} / z_{j,k}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BasisSymbol {
    Y(usize),
    Z(usize),
    Yjk(usize, usize),
    Zjk(usize, usize),
}

impl std::fmt::Display for BasisSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BasisSymbol::Y(j) => write!(f, "y{j}"),
            BasisSymbol::Z(j) => write!(f, "z{j}"),
            BasisSymbol::Yjk(j, k) => write!(f, "y{j}{k}"),
            BasisSymbol::Zjk(j, k) => write!(f, "z{j}{k}"),
        }
    }
}

/// A linear combination of basis symbols with Laurent-polynomial
/// coefficients in p.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PhiExpansion {
    terms: BTreeMap<BasisSymbol, IntPoly>,
}

impl PhiExpansion {
    pub fn add_term(&mut self, sym: BasisSymbol, coeff: IntPoly) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(sym).or_default();
        let sum = &*entry + &coeff;
        if sum.is_zero() {
            self.terms.remove(&sym);
        } else {
            *entry = sum;
        }
    }

    pub fn coeff(&self, sym: BasisSymbol) -> IntPoly {
        self.terms.get(&sym).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (BasisSymbol, &IntPoly)> {
        self.terms.iter().map(|(&s, c)| (s, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl std::fmt::Display for PhiExpansion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, c)| format!("({c}) {s}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Admissible index pairs (j, k) of the corank decomposition for type
/// index i: 0 <= j, k <= g and k - j >= i.
pub fn admissible_pairs(g: usize, i: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 0..=g {
        for k in (j + i)..=g {
            out.push((j, k));
        }
    }
    out
}

/// Corank decomposition coefficients: (j, k) -> R_{k-j}(i) * p^-b(k-j),
/// as exact Laurent polynomials.
pub fn decomposition_coeffs(g: usize, i: usize) -> Result<BTreeMap<(usize, usize), IntPoly>> {
    if i == 0 || i >= g || g > 4 {
        return Err(Error::domain(format!(
            "decomposition defined for 1 <= i <= g-1, g <= 4; got g={g}, i={i}"
        )));
    }
    let mut out = BTreeMap::new();
    for (j, k) in admissible_pairs(g, i) {
        let nu = k - j;
        let coeff = corank_count_poly(nu, i).shift(-(b(nu) as i32));
        out.insert((j, k), coeff);
    }
    Ok(out)
}

/// Pair-flag coefficients for the ordinary model: the coefficient of
/// y_{j,k} is R_{k-j}(i) * p^(-b(k-j) + b(g-j) + b(g-k)). Every combined
/// coefficient must come out a genuine polynomial.
pub fn ordinary_pair_coeffs(g: usize, i: usize) -> Result<PhiExpansion> {
    let dec = decomposition_coeffs(g, i)?;
    let mut out = PhiExpansion::default();
    for ((j, k), c) in dec {
        let coeff = c.shift((b(g - j) + b(g - k)) as i32);
        if !coeff.is_polynomial() {
            return Err(Error::invariant(format!(
                "combined coefficient for y{j}{k} is not integral: {coeff}"
            )));
        }
        out.add_term(BasisSymbol::Yjk(j, k), coeff);
    }
    Ok(out)
}

/// Single-flag expansion of one correspondence term against the flag
/// stratification: coefficient pair (on z_{j-1}, on z_j) is
/// (p^(b(g-j)+g-j), p^b(g-j)).
pub fn phi_single_expansion(g: usize, j: usize) -> (IntPoly, IntPoly) {
    assert!(j <= g);
    let low = IntPoly::p_pow((b(g - j) + g - j) as i32);
    let high = IntPoly::p_pow(b(g - j) as i32);
    (low, high)
}

/// Sums the single-flag expansions over j = 0..g and checks the closed
/// form: the coefficient of z_j must be p^b(g-j) + p^(b(g-j)-1).
pub fn single_flag_sum(g: usize) -> Result<PhiExpansion> {
    let mut out = PhiExpansion::default();
    for j in 0..=g {
        let (low, high) = phi_single_expansion(g, j);
        if j >= 1 {
            out.add_term(BasisSymbol::Z(j - 1), low);
        }
        if j <= g - 1 {
            out.add_term(BasisSymbol::Z(j), high);
        }
        // z_g and z_{-1} are 0 by convention
    }
    for j in 0..g {
        let expect = &IntPoly::p_pow(b(g - j) as i32) + &IntPoly::p_pow(b(g - j) as i32 - 1);
        let got = out.coeff(BasisSymbol::Z(j));
        if got != expect {
            return Err(Error::invariant(format!(
                "single-flag sum coefficient of z{j} is {got}, closed form says {expect}"
            )));
        }
    }
    Ok(out)
}

/// Pair-flag coefficients for the non-ordinary model: substitutes the
/// four-term expansion
///   p^(b(g-j)+b(g-k)) [z_{j,k} + p^(g-j) z_{j-1,k} + p^(g-k) z_{j,k-1}
///                      + p^(2g-j-k) z_{j-1,k-1}]
/// into the corank decomposition and collects z_{j,k} coefficients
/// (indices clamped to 0..g-1; out-of-range symbols vanish).
pub fn nonordinary_pair_coeffs(g: usize, i: usize) -> Result<PhiExpansion> {
    let dec = decomposition_coeffs(g, i)?;
    let mut out = PhiExpansion::default();
    for ((jp, kp), c) in dec {
        let scale = c.shift((b(g - jp) + b(g - kp)) as i32);
        // (target z index, extra power of p)
        let candidates: [(i64, i64, usize); 4] = [
            (jp as i64, kp as i64, 0),
            (jp as i64 - 1, kp as i64, g - jp),
            (jp as i64, kp as i64 - 1, g - kp),
            (jp as i64 - 1, kp as i64 - 1, (g - jp) + (g - kp)),
        ];
        for (tj, tk, extra) in candidates {
            if tj < 0 || tk < 0 {
                continue;
            }
            let (tj, tk) = (tj as usize, tk as usize);
            if tj > g - 1 || tk > g - 1 {
                continue;
            }
            let coeff = scale.shift(extra as i32);
            debug_assert!(coeff.is_polynomial());
            out.add_term(BasisSymbol::Zjk(tj, tk), coeff);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(i64, i32)]) -> IntPoly {
        let mut s = IntPoly::zero();
        for &(c, e) in terms {
            s = &s + &IntPoly::monomial(c, e);
        }
        s
    }

    #[test]
    fn decomposition_g3_i1() {
        let dec = decomposition_coeffs(3, 1).unwrap();
        assert_eq!(dec.len(), 6);
        // 1/p on the three adjacent pairs
        for jk in [(0, 1), (1, 2), (2, 3)] {
            assert_eq!(dec[&jk], IntPoly::monomial(1, -1));
        }
        // (p^2-1)/p^3
        for jk in [(0, 2), (1, 3)] {
            assert_eq!(dec[&jk], poly(&[(1, -1), (-1, -3)]));
        }
        // (p^3-1)/p^4
        assert_eq!(dec[&(0, 3)], poly(&[(1, -1), (-1, -4)]));
    }

    #[test]
    fn decomposition_excludes_small_gaps() {
        let dec = decomposition_coeffs(3, 2).unwrap();
        assert!(!dec.contains_key(&(0, 1)));
        assert!(dec.contains_key(&(0, 2)));
        assert!(dec.contains_key(&(1, 3)));
        assert!(dec.contains_key(&(0, 3)));
        assert_eq!(dec.len(), 3);
    }

    #[test]
    fn ordinary_pairs_g3_i1() {
        let e = ordinary_pair_coeffs(3, 1).unwrap();
        assert_eq!(e.coeff(BasisSymbol::Yjk(0, 1)), IntPoly::p_pow(8));
        assert_eq!(e.coeff(BasisSymbol::Yjk(1, 2)), IntPoly::p_pow(3));
        assert_eq!(e.coeff(BasisSymbol::Yjk(2, 3)), IntPoly::one());
        assert_eq!(e.coeff(BasisSymbol::Yjk(0, 2)), poly(&[(1, 6), (-1, 4)]));
        assert_eq!(e.coeff(BasisSymbol::Yjk(1, 3)), poly(&[(1, 2), (-1, 0)]));
        // The consistent value for y03 is p^5 - p^2 = p^2 (p^3 - 1); the
        // printed source table shows p^3 - 1, which fails both the
        // substitution identity and the measured fiber census.
        assert_eq!(e.coeff(BasisSymbol::Yjk(0, 3)), poly(&[(1, 5), (-1, 2)]));
    }

    #[test]
    fn integrality_holds_up_to_g4() {
        for g in 2..=4usize {
            for i in 1..g {
                let e = ordinary_pair_coeffs(g, i).unwrap();
                assert!(!e.is_empty());
                for (_, c) in e.terms() {
                    assert!(c.is_polynomial());
                }
            }
        }
    }

    #[test]
    fn single_flag_sum_matches_closed_form() {
        for g in 1..=4usize {
            let e = single_flag_sum(g).unwrap();
            assert_eq!(e.len(), g);
        }
        let e = single_flag_sum(3).unwrap();
        assert_eq!(e.coeff(BasisSymbol::Z(0)), poly(&[(1, 6), (1, 5)]));
        assert_eq!(e.coeff(BasisSymbol::Z(2)), poly(&[(1, 1), (1, 0)]));
    }

    #[test]
    fn nonordinary_pairs_g3_i1() {
        let e = nonordinary_pair_coeffs(3, 1).unwrap();
        assert_eq!(e.coeff(BasisSymbol::Zjk(0, 0)), IntPoly::p_pow(10));
        assert_eq!(
            e.coeff(BasisSymbol::Zjk(0, 1)),
            poly(&[(1, 8), (1, 7), (1, 6), (-1, 5)])
        );
        assert_eq!(e.coeff(BasisSymbol::Zjk(1, 1)), IntPoly::p_pow(4));
        assert_eq!(
            e.coeff(BasisSymbol::Zjk(0, 2)),
            poly(&[(1, 6), (2, 5), (-2, 2)])
        );
        assert_eq!(
            e.coeff(BasisSymbol::Zjk(1, 2)),
            poly(&[(1, 3), (1, 2), (1, 1), (-1, 0)])
        );
        assert_eq!(e.coeff(BasisSymbol::Zjk(2, 2)), IntPoly::one());
        assert_eq!(e.len(), 6);
    }
}
