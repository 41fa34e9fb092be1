use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::lagrange::b;

use super::poly::{inv_mod, IntPoly};

/// An element of the torus Hecke algebra: an integer combination of
/// monomials in the commuting variables U_1..U_g, V_1..V_g.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusOp {
    g: usize,
    // (U exponents, V exponents) -> coefficient
    terms: BTreeMap<(Vec<u8>, Vec<u8>), i64>,
    // true for operators in the image of the spherical embedding, whose
    // eigenvalues must have a-hat exponent divisible by g
    hecke_image: bool,
}

impl TorusOp {
    pub fn zero(g: usize) -> Self {
        TorusOp {
            g,
            terms: BTreeMap::new(),
            hecke_image: false,
        }
    }

    pub fn one(g: usize) -> Self {
        let mut t = BTreeMap::new();
        t.insert((vec![0; g], vec![0; g]), 1);
        TorusOp {
            g,
            terms: t,
            hecke_image: false,
        }
    }

    pub fn u(g: usize, i: usize) -> Self {
        assert!((1..=g).contains(&i));
        let mut ue = vec![0u8; g];
        ue[i - 1] = 1;
        let mut t = BTreeMap::new();
        t.insert((ue, vec![0; g]), 1);
        TorusOp {
            g,
            terms: t,
            hecke_image: false,
        }
    }

    pub fn v(g: usize, i: usize) -> Self {
        assert!((1..=g).contains(&i));
        let mut ve = vec![0u8; g];
        ve[i - 1] = 1;
        let mut t = BTreeMap::new();
        t.insert((vec![0; g], ve), 1);
        TorusOp {
            g,
            terms: t,
            hecke_image: false,
        }
    }

    /// U_I = prod_{i in I} U_i * prod_{i not in I} V_i.
    pub fn u_subset(g: usize, set: &BTreeSet<usize>) -> Self {
        let mut ue = vec![0u8; g];
        let mut ve = vec![0u8; g];
        for i in 1..=g {
            if set.contains(&i) {
                ue[i - 1] = 1;
            } else {
                ve[i - 1] = 1;
            }
        }
        let mut t = BTreeMap::new();
        t.insert((ue, ve), 1);
        TorusOp {
            g,
            terms: t,
            hecke_image: false,
        }
    }

    /// Spherical image of the i-th standard generator:
    /// S_T(Phi_i) = sum over #I = i of U_I.
    pub fn phi(g: usize, i: usize) -> Self {
        assert!(i <= g);
        let mut out = TorusOp::zero(g);
        for mask in 0u32..(1 << g) {
            if mask.count_ones() as usize != i {
                continue;
            }
            let set: BTreeSet<usize> = (1..=g).filter(|&j| mask & (1 << (j - 1)) != 0).collect();
            out = out.add(&TorusOp::u_subset(g, &set));
        }
        out.hecke_image = true;
        out
    }

    /// T_p's image: sum of all Phi_i.
    pub fn t_p(g: usize) -> Self {
        let mut out = TorusOp::zero(g);
        for i in 0..=g {
            out = out.add(&TorusOp::phi(g, i));
        }
        out.hecke_image = true;
        out
    }

    /// prod_{i=1..g} (U_i + V_i).
    pub fn product_u_plus_v(g: usize) -> Self {
        let mut out = TorusOp::one(g);
        for i in 1..=g {
            out = out.mul(&TorusOp::u(g, i).add(&TorusOp::v(g, i)));
        }
        out
    }

    pub fn add(&self, rhs: &TorusOp) -> TorusOp {
        assert_eq!(self.g, rhs.g);
        let mut out = self.clone();
        for (k, &c) in &rhs.terms {
            let e = out.terms.entry(k.clone()).or_insert(0);
            *e += c;
            if *e == 0 {
                out.terms.remove(k);
            }
        }
        out.hecke_image = self.hecke_image && rhs.hecke_image;
        out
    }

    pub fn mul(&self, rhs: &TorusOp) -> TorusOp {
        assert_eq!(self.g, rhs.g);
        let mut out = TorusOp::zero(self.g);
        for ((u1, v1), &c1) in &self.terms {
            for ((u2, v2), &c2) in &rhs.terms {
                let u: Vec<u8> = u1.iter().zip(u2).map(|(a, b)| a + b).collect();
                let v: Vec<u8> = v1.iter().zip(v2).map(|(a, b)| a + b).collect();
                *out.terms.entry((u, v)).or_insert(0) += c1 * c2;
            }
        }
        out.terms.retain(|_, c| *c != 0);
        out.hecke_image = self.hecke_image && rhs.hecke_image;
        out
    }

    pub fn mark_hecke_image(mut self) -> Self {
        self.hecke_image = true;
        self
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
}

/// Which cohomology layer the eigenvector basis lives in: the middle
/// layer indexes the basis by all subsets of {1..g}; the layer one below
/// restricts to subsets of {2..g} and pins b_1 = p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightClass {
    Middle,
    SubMiddle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SatakeParams {
    pub g: usize,
    pub weight: WeightClass,
}

/// A formal eigenvalue: integer combination of monomials
/// a-hat^m * prod b_i^{e_i}, where a-hat^g = a_0.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Eigenvalue {
    // (a-hat exponent, b exponents) -> coefficient
    terms: BTreeMap<(u32, Vec<u8>), i64>,
}

impl Eigenvalue {
    pub fn terms(&self) -> impl Iterator<Item = ((u32, Vec<u8>), i64)> + '_ {
        self.terms.iter().map(|(k, &c)| (k.clone(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert(&mut self, key: (u32, Vec<u8>), c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn single(a_hat: u32, b_exps: Vec<u8>) -> Self {
        let mut e = Eigenvalue::default();
        e.insert((a_hat, b_exps), 1);
        e
    }

    pub fn mul(&self, rhs: &Eigenvalue) -> Eigenvalue {
        let mut out = Eigenvalue::default();
        for ((a1, b1), c1) in self.terms() {
            for ((a2, b2), c2) in rhs.terms() {
                let b: Vec<u8> = b1.iter().zip(&b2).map(|(x, y)| x + y).collect();
                out.insert((a1 + a2, b), c1 * c2);
            }
        }
        out
    }
}

impl std::fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for ((ah, bs), c) in &self.terms {
            let mut s = String::new();
            if *c != 1 {
                s.push_str(&c.to_string());
            }
            if *ah > 0 {
                let g = bs.len() as u32;
                if g > 0 && *ah % g == 0 {
                    let k = ah / g;
                    if k == 1 {
                        s.push_str("a0");
                    } else {
                        s.push_str(&format!("a0^{k}"));
                    }
                } else {
                    s.push_str(&format!("ahat^{ah}"));
                }
            }
            for (i, &e) in bs.iter().enumerate() {
                if e == 1 {
                    s.push_str(&format!("b{}", i + 1));
                } else if e > 1 {
                    s.push_str(&format!("b{}^{}", i + 1, e));
                }
            }
            if s.is_empty() {
                s.push('1');
            }
            parts.push(s);
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Eigenvalue of a torus operator on the basis vector labelled by the
/// subset I. Each variable acts diagonally: U_i contributes a-hat when
/// i is in I and a-hat*b_i otherwise; V_i does the opposite.
pub fn satake_eigenvalue(
    op: &TorusOp,
    subset: &BTreeSet<usize>,
    params: &SatakeParams,
) -> Result<Eigenvalue> {
    let g = params.g;
    if op.g() != g {
        return Err(Error::domain("operator genus mismatch"));
    }
    let lo = match params.weight {
        WeightClass::Middle => 1usize,
        WeightClass::SubMiddle => 2usize,
    };
    if subset.iter().any(|&i| i < lo || i > g) {
        return Err(Error::domain(format!(
            "basis subset must lie in {{{lo}..{g}}}"
        )));
    }

    let mut out = Eigenvalue::default();
    for ((ue, ve), &c) in &op.terms {
        let mut a_hat = 0u32;
        let mut b_exps = vec![0u8; g];
        for i in 1..=g {
            let inside = subset.contains(&i);
            let uexp = ue[i - 1] as u32;
            let vexp = ve[i - 1] as u32;
            a_hat += uexp + vexp;
            // U_i brings b_i when i is outside I; V_i when i is inside.
            let bexp = if inside { vexp } else { uexp };
            b_exps[i - 1] += bexp as u8;
        }
        if op.hecke_image && a_hat % g as u32 != 0 {
            return Err(Error::invariant(format!(
                "spherical-image operator produced a-hat exponent {a_hat} not divisible by g={g}"
            )));
        }
        let mut term = Eigenvalue::default();
        term.insert((a_hat, b_exps), c);
        out = {
            let mut sum = out;
            for (k, cc) in term.terms() {
                sum.insert(k, cc);
            }
            sum
        };
    }
    Ok(out)
}

/// Residue data for the congruence specializations: M = l^n with l an odd
/// prime, unit residues a != b mod l, and the free mod-M^2 lifts of p and
/// b_2 (c_p and c_b2). The forced assignments are
///   a_0 = 1 + a M, b_2 = 1 + c_b2 M, b_3 = -1 + (a+b) M, b_1 = p = -1 + c_p M.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CongruenceSpec {
    pub l: u32,
    pub n: u32,
    pub m: u64,
    pub a: u64,
    pub b: u64,
    pub c_p: u64,
    pub c_b2: u64,
}

impl CongruenceSpec {
    pub fn new(l: u32, n: u32, a: u64, b: u64, c_p: u64, c_b2: u64) -> Result<Self> {
        if l == 2 {
            return Err(Error::domain("l = 2 is rejected; l must be an odd prime"));
        }
        if !crate::finmod::is_prime(l as u64) {
            return Err(Error::NotPrime(l as u64));
        }
        if n == 0 {
            return Err(Error::domain("exponent n must be positive"));
        }
        let m = (l as u64).pow(n);
        let (a, b) = (a % m, b % m);
        if a % l as u64 == 0 || b % l as u64 == 0 {
            return Err(Error::domain("a and b must be units mod l"));
        }
        if a % l as u64 == b % l as u64 {
            return Err(Error::domain("a and b must differ mod l"));
        }
        Ok(CongruenceSpec {
            l,
            n,
            m,
            a,
            b,
            c_p: c_p % m,
            c_b2: c_b2 % m,
        })
    }

    pub fn m2(&self) -> u64 {
        self.m * self.m
    }

    /// p mod M^2 (p = -1 + c_p M).
    pub fn p_residue_m2(&self) -> u64 {
        (self.m2() - 1 + self.c_p * self.m) % self.m2()
    }

    /// p mod M; always -1.
    pub fn p_residue_m(&self) -> u64 {
        self.m - 1
    }

    /// Assignments of (a_0, b_1, b_2, b_3) mod M^2; only defined for the
    /// genus-3 sub-middle layer.
    pub fn weil_residues_m2(&self) -> [u64; 4] {
        let m2 = self.m2();
        let a0 = (1 + self.a * self.m) % m2;
        let b1 = self.p_residue_m2();
        let b2 = (1 + self.c_b2 * self.m) % m2;
        let b3 = (m2 - 1 + (self.a + self.b) % self.m * self.m) % m2;
        [a0, b1, b2, b3]
    }

    /// True when the chosen mod-M^2 lifts satisfy a_0^2 b_1 b_2 b_3 = p^6
    /// (the product relation of the four Frobenius eigenvalue pairs).
    pub fn weil_consistent(&self) -> bool {
        let m2 = self.m2();
        let [a0, b1, b2, b3] = self.weil_residues_m2();
        let lhs = a0 * a0 % m2 * b1 % m2 * b2 % m2 * b3 % m2;
        let p = self.p_residue_m2();
        let rhs = super::poly::pow_mod(p, 6, m2);
        lhs == rhs
    }

    /// Sweep of all admissible (a, b) for fixed lifts.
    pub fn sweep_ab(l: u32, n: u32, c_p: u64, c_b2: u64) -> Vec<CongruenceSpec> {
        let m = (l as u64).pow(n);
        let mut out = Vec::new();
        for a in 1..m {
            for b in 1..m {
                if let Ok(s) = CongruenceSpec::new(l, n, a, b, c_p, c_b2) {
                    out.push(s);
                }
            }
        }
        out
    }
}

/// Evaluates a formal eigenvalue mod M or M^2 under a congruence spec
/// (genus-3 sub-middle layer: b_1 is the image of p).
pub fn specialize_eigenvalue(
    ev: &Eigenvalue,
    spec: &CongruenceSpec,
    square: bool,
) -> Result<u64> {
    let m = if square { spec.m2() } else { spec.m };
    let [a0, b1, b2, b3] = spec.weil_residues_m2();
    let vals = [a0 % m, b1 % m, b2 % m, b3 % m];
    let mut acc: u64 = 0;
    for ((a_hat, b_exps), c) in ev.terms() {
        if b_exps.len() != 3 {
            return Err(Error::domain(
                "specialization is defined for genus-3 eigenvalues",
            ));
        }
        if a_hat % 3 != 0 {
            return Err(Error::invariant(format!(
                "a-hat exponent {a_hat} not divisible by g=3; cannot specialize"
            )));
        }
        let mut term = super::poly::pow_mod(vals[0], (a_hat / 3) as u64, m);
        for (i, &e) in b_exps.iter().enumerate() {
            term = term * super::poly::pow_mod(vals[i + 1], e as u64, m) % m;
        }
        let c_mod = c.rem_euclid(m as i64) as u64;
        acc = (acc + c_mod * term) % m;
    }
    Ok(acc)
}

/// Evaluates a Laurent polynomial in p at the spec's p-residue.
pub fn specialize_poly(f: &IntPoly, spec: &CongruenceSpec, square: bool) -> u64 {
    let m = if square { spec.m2() } else { spec.m };
    let p = if square {
        spec.p_residue_m2()
    } else {
        spec.p_residue_m()
    };
    f.eval_mod(p, m)
}

/// The T_p eigenvalue a_p = a_0 (1+b_1)(1+b_2)(1+b_3) as a formal sum;
/// each factor U_i + V_i contributes a-hat (1 + b_i) on every basis
/// vector.
pub fn t_p_eigenvalue(g: usize) -> Eigenvalue {
    let mut out = Eigenvalue::single(0, vec![0; g]);
    for i in 0..g {
        let mut factor = Eigenvalue::default();
        factor.insert((1, vec![0; g]), 1);
        let mut with_b = vec![0u8; g];
        with_b[i] = 1;
        factor.insert((1, with_b), 1);
        out = out.mul(&factor);
    }
    out
}

/// Weil-relation check mod M^2: a_0^2 prod b_i = p^{b(g)} for g = 3
/// under every weil-consistent spec.
pub fn weil_relation_holds(spec: &CongruenceSpec) -> bool {
    let m2 = spec.m2();
    let [a0, b1, b2, b3] = spec.weil_residues_m2();
    let lhs = a0 * a0 % m2 * b1 % m2 * b2 % m2 * b3 % m2;
    let rhs = super::poly::pow_mod(spec.p_residue_m2(), b(3) as u64, m2);
    lhs == rhs
}

/// Modular inverse helper re-exported for pipeline use.
pub fn unit_inverse(a: u64, m: u64) -> u64 {
    inv_mod(a, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn operator_identity_sum_phi_equals_product() {
        for g in 1..=4 {
            let sum = TorusOp::t_p(g);
            let prod = TorusOp::product_u_plus_v(g);
            assert_eq!(sum.terms, prod.terms, "g={g}");
            assert_eq!(sum.num_terms(), 1 << g);
        }
    }

    #[test]
    fn eigenvalue_table_on_f3() {
        // g=3, basis subset {3}: the eight U/V products act through
        // a_0 times the symmetric-difference product of b's.
        let params = SatakeParams {
            g: 3,
            weight: WeightClass::SubMiddle,
        };
        let f3 = set(&[3]);
        let cases: [(&[usize], Vec<u8>); 8] = [
            (&[1, 2, 3], vec![1, 1, 0]), // U1U2U3 -> a0 b1 b2
            (&[1, 2], vec![1, 1, 1]),    // U1U2V3 -> a0 b1 b2 b3
            (&[1, 3], vec![1, 0, 0]),    // U1V2U3 -> a0 b1
            (&[1], vec![1, 0, 1]),       // U1V2V3 -> a0 b1 b3
            (&[2, 3], vec![0, 1, 0]),    // V1U2U3 -> a0 b2
            (&[2], vec![0, 1, 1]),       // V1U2V3 -> a0 b2 b3
            (&[3], vec![0, 0, 0]),       // V1V2U3 -> a0
            (&[], vec![0, 0, 1]),        // V1V2V3 -> a0 b3
        ];
        for (i_set, b_exps) in cases {
            let op = TorusOp::u_subset(3, &set(i_set));
            let ev = satake_eigenvalue(&op, &f3, &params).unwrap();
            assert_eq!(ev, Eigenvalue::single(3, b_exps), "I={i_set:?}");
        }
    }

    #[test]
    fn t_p_eigenvalue_factors() {
        // On any basis vector T_p acts by a_0 prod (1 + b_i).
        let params = SatakeParams {
            g: 3,
            weight: WeightClass::SubMiddle,
        };
        for subset in [set(&[]), set(&[2]), set(&[3]), set(&[2, 3])] {
            let ev = satake_eigenvalue(&TorusOp::t_p(3), &subset, &params).unwrap();
            assert_eq!(ev, t_p_eigenvalue(3), "subset {subset:?}");
        }
    }

    #[test]
    fn residue_pattern_mod_m() {
        let spec = CongruenceSpec::new(3, 2, 1, 2, 0, 0).unwrap();
        let params = SatakeParams {
            g: 3,
            weight: WeightClass::SubMiddle,
        };
        let f3 = set(&[3]);
        let mut pattern = Vec::new();
        for i in 0..=3 {
            let ev = satake_eigenvalue(&TorusOp::phi(3, i), &f3, &params).unwrap();
            pattern.push(specialize_eigenvalue(&ev, &spec, false).unwrap());
        }
        // -1, 1, 1, -1 mod 9
        assert_eq!(pattern, vec![8, 1, 1, 8]);
    }

    #[test]
    fn a_p_vanishes_mod_m_squared() {
        for spec in CongruenceSpec::sweep_ab(3, 2, 4, 7) {
            let v = specialize_eigenvalue(&t_p_eigenvalue(3), &spec, true).unwrap();
            assert_eq!(v, 0, "spec {spec:?}");
        }
    }

    #[test]
    fn weil_relation_under_consistent_lifts() {
        // c_b2 = b - a - 5 c_p makes the product relation hold mod M^2.
        let (l, n) = (3u32, 2u32);
        let m = 9u64;
        for a in 1..m {
            for b in 1..m {
                for c_p in 0..m {
                    let c_b2 = (b + 10 * m - a - 5 * c_p) % m;
                    if let Ok(spec) = CongruenceSpec::new(l, n, a, b, c_p, c_b2) {
                        assert!(weil_relation_holds(&spec), "spec {spec:?}");
                        assert!(spec.weil_consistent());
                    }
                }
            }
        }
    }

    #[test]
    fn spec_validation() {
        assert!(CongruenceSpec::new(2, 2, 1, 2, 0, 0).is_err()); // l = 2
        assert!(CongruenceSpec::new(3, 2, 3, 2, 0, 0).is_err()); // a not unit
        assert!(CongruenceSpec::new(3, 2, 1, 4, 0, 0).is_err()); // a = b mod 3
        assert!(CongruenceSpec::new(3, 2, 1, 2, 0, 0).is_ok());
    }
}
