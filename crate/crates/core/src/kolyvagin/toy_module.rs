use crate::error::{Error, Result};
use crate::finmod::is_prime;
use crate::heckealg::{specialize_eigenvalue, t_p_eigenvalue, CongruenceSpec};
use crate::report::{CheckRecord, Provenance, VerificationReport};

/// A finite Galois-module model: the free module (Z/M^k)^2d (k = 1 or 2)
/// carrying the Frobenius matrix diag(1+aM, ..., -1+bM, ...), the
/// involution sigma = diag(I, -I), and the standard alternating pairing.
#[derive(Debug, Clone)]
pub struct ToyGaloisModule {
    d: usize,
    l: u32,
    m: u64,
    k: u8,
    modulus: u64,
    a: u64,
    b: u64,
}

impl ToyGaloisModule {
    pub fn new(d: usize, l: u32, n: u32, k: u8, a: u64, b: u64) -> Result<Self> {
        if l == 2 {
            return Err(Error::domain("l = 2 is rejected; l must be an odd prime"));
        }
        if !is_prime(l as u64) {
            return Err(Error::NotPrime(l as u64));
        }
        if !(1..=2).contains(&k) {
            return Err(Error::BadExponent(k));
        }
        if d == 0 {
            return Err(Error::domain("half-rank d must be positive"));
        }
        let m = (l as u64).pow(n);
        let modulus = m.pow(k as u32);
        let (a, b) = (a % m, b % m);
        if a % l as u64 == 0 || b % l as u64 == 0 {
            return Err(Error::domain("a and b must be units mod l"));
        }
        if a % l as u64 == b % l as u64 {
            return Err(Error::domain("a and b must differ mod l"));
        }
        Ok(ToyGaloisModule {
            d,
            l,
            m,
            k,
            modulus,
            a,
            b,
        })
    }

    pub fn rank(&self) -> usize {
        2 * self.d
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    fn red(&self, x: u64) -> u64 {
        x % self.modulus
    }

    /// Frobenius eigenvalue on coordinate i: 1 + aM on the first d
    /// coordinates, -1 + bM on the rest.
    pub fn fr_eigenvalue(&self, i: usize) -> u64 {
        if i < self.d {
            self.red(1 + self.a * self.m)
        } else {
            self.red(self.modulus - 1 + self.b * self.m)
        }
    }

    pub fn fr_apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.rank());
        v.iter()
            .enumerate()
            .map(|(i, &x)| self.red(x * self.fr_eigenvalue(i) % self.modulus))
            .collect()
    }

    pub fn sigma_apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.rank());
        v.iter()
            .enumerate()
            .map(|(i, &x)| {
                if i < self.d {
                    x
                } else {
                    self.red(self.modulus - x)
                }
            })
            .collect()
    }

    pub fn neg(&self, v: &[u64]) -> Vec<u64> {
        v.iter().map(|&x| (self.modulus - x) % self.modulus).collect()
    }

    /// Alternating pairing with Gram matrix J: <x, y> = sum_i x_i y_{d+i} - x_{d+i} y_i.
    pub fn pairing(&self, x: &[u64], y: &[u64]) -> u64 {
        let mut acc: i128 = 0;
        for i in 0..self.d {
            acc += x[i] as i128 * y[self.d + i] as i128
                - x[self.d + i] as i128 * y[i] as i128;
        }
        acc.rem_euclid(self.modulus as i128) as u64
    }

    /// All M-torsion elements of the minus part (fr acts by -1). Requires
    /// k = 2; these are the vectors M*w with vanishing plus coordinates.
    pub fn minus_part_m_torsion(&self) -> Result<Vec<Vec<u64>>> {
        if self.k != 2 {
            return Err(Error::domain("minus-part torsion listing requires k = 2"));
        }
        let mut out = Vec::new();
        let mut idx = vec![0u64; self.d];
        loop {
            let mut v = vec![0u64; self.rank()];
            for (i, &c) in idx.iter().enumerate() {
                v[self.d + i] = c * self.m;
            }
            out.push(v);
            // odometer over [0, M)^d
            let mut pos = 0;
            loop {
                if pos == self.d {
                    return Ok(out);
                }
                idx[pos] += 1;
                if idx[pos] < self.m {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    /// The Kummer-map value on a minus-part M-torsion point z: lift x with
    /// M x = z by coordinate-wise division, apply fr^2 - 1. The result
    /// is independent of the lift because fr^2 = 1 + O(M).
    pub fn kummer_beta(&self, z: &[u64]) -> Result<Vec<u64>> {
        if self.k != 2 {
            return Err(Error::domain("the Kummer computation requires k = 2"));
        }
        if z.len() != self.rank() {
            return Err(Error::domain("vector has the wrong rank"));
        }
        if z.iter().any(|&x| x % self.m != 0) {
            return Err(Error::domain("z is not M-torsion"));
        }
        if self.fr_apply(z) != self.neg(z) {
            return Err(Error::domain("z is not in the minus part"));
        }
        let x: Vec<u64> = z.iter().map(|&c| c / self.m).collect();
        let fr2x = self.fr_apply(&self.fr_apply(&x));
        Ok(fr2x
            .iter()
            .zip(&x)
            .map(|(&u, &v)| (u + self.modulus - v) % self.modulus)
            .collect())
    }

    /// Scalar multiple of a vector.
    pub fn scale(&self, c: u64, v: &[u64]) -> Vec<u64> {
        v.iter().map(|&x| self.red(x * (c % self.modulus) % self.modulus)).collect()
    }
}

/// Exhaustive check that the Kummer value equals -2b z on the whole
/// minus-part M-torsion.
pub fn kummer_beta_report(module: &ToyGaloisModule) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("kummer-beta")
        .with_param("d", module.d)
        .with_param("M", module.m)
        .with_param("a", module.a)
        .with_param("b", module.b);
    let factor = {
        // -2b mod M^2
        let two_b = 2 * module.b % module.modulus;
        (module.modulus - two_b) % module.modulus
    };
    let mut all_ok = true;
    let mut checked = 0u64;
    for z in module.minus_part_m_torsion()? {
        let beta = module.kummer_beta(&z)?;
        let expect = module.scale(factor, &z);
        all_ok &= beta == expect;
        checked += 1;
    }
    report.push(CheckRecord::info("torsion points checked", checked, "kummer domain"));
    report.push(CheckRecord::assert_true(
        "beta(z) = -2b z on the whole minus-part M-torsion",
        all_ok,
        Provenance::Paper,
        "lemma-2.10",
    ));
    Ok(report)
}

/// Verifies the sigma-square evaluation identity on a cyclic-source
/// homomorphism model: the source is Z/M with sigma acting by s = +/-1,
/// the homomorphism sends x to x*h for a fixed M-torsion image vector h,
/// and equivariance sigma(h * (s x)) = eps * (h x) is required up front.
/// The identity checked for every x is
///   t((sigma g)^2) = t(g) + eps * sigma(t(g)).
pub fn sigma_square_report(
    module: &ToyGaloisModule,
    h: &[u64],
    s_sign: i8,
    eps: i8,
) -> Result<VerificationReport> {
    if module.k != 1 {
        return Err(Error::domain("the sigma-square model works in E_M (k = 1)"));
    }
    if h.len() != module.rank() {
        return Err(Error::domain("image vector has the wrong rank"));
    }
    if !matches!(s_sign, 1 | -1) || !matches!(eps, 1 | -1) {
        return Err(Error::domain("signs must be +1 or -1"));
    }
    let m = module.modulus;
    let signed = |sg: i8, v: &[u64]| -> Vec<u64> {
        if sg == 1 {
            v.to_vec()
        } else {
            module.neg(v)
        }
    };
    // equivariance: sigma_E(h) * s = eps * h
    let lhs = signed(s_sign, &module.sigma_apply(h));
    let rhs = signed(eps, h);
    if lhs != rhs {
        return Err(Error::domain(
            "homomorphism is not equivariant for the requested signs",
        ));
    }

    let mut report = VerificationReport::new("sigma-square")
        .with_param("M", m)
        .with_param("s", s_sign)
        .with_param("eps", eps);
    let mut ok = true;
    for x in 0..m {
        // t((sigma g)^2) = t(sigma(g) + g) = (s x + x) h
        let sx = if s_sign == 1 { x } else { (m - x) % m };
        let arg = (sx + x) % m;
        let left = module.scale(arg, h);
        // t(g) + eps sigma(t(g))
        let tg = module.scale(x, h);
        let right: Vec<u64> = tg
            .iter()
            .zip(signed(eps, &module.sigma_apply(&tg)))
            .map(|(&u, v)| (u + v) % m)
            .collect();
        ok &= left == right;
    }
    report.push(CheckRecord::assert_true(
        "t((sigma g)^2) = t(g) + eps sigma(t(g)) for all group elements",
        ok,
        Provenance::Paper,
        "1.35",
    ));
    Ok(report)
}

/// The residue facts a congruence spec encodes: M | p+1, a_p = 0 mod M^2,
/// and the multiplier of Frobenius on the pairing value.
pub fn congruence_checks(spec: &CongruenceSpec) -> Result<VerificationReport> {
    let m = spec.m;
    let m2 = spec.m2();
    let mut report = VerificationReport::new("congruences")
        .with_param("M", m)
        .with_param("a", spec.a)
        .with_param("b", spec.b)
        .with_param("c_p", spec.c_p);

    let p2 = spec.p_residue_m2();
    report.push(CheckRecord::new(
        "M divides p + 1",
        0,
        (p2 + 1) % m,
        Provenance::Paper,
        "1.12",
    ));
    let a_p = specialize_eigenvalue(&t_p_eigenvalue(3), spec, true)?;
    report.push(CheckRecord::new(
        "a_p = 0 mod M^2",
        0,
        a_p,
        Provenance::Paper,
        "1.13 strengthened",
    ));

    // (1 + aM)(-1 + bM) = -1 + (b - a)M mod M^2: the multiplier of fr on
    // the pairing of a plus-eigenvector with a minus-eigenvector.
    let plus = (1 + spec.a * m) % m2;
    let minus = (m2 - 1 + spec.b * m) % m2;
    let product = plus * minus % m2;
    let expect = (m2 - 1 + (spec.b + m2 - spec.a) % m * m) % m2;
    report.push(CheckRecord::new(
        "paired eigenvalue product = -1 + (b-a)M mod M^2",
        expect,
        product,
        Provenance::Derived,
        "2.2 pairing multiplier",
    ));
    report.push(CheckRecord::info(
        "pairing multiplier equals the chosen p-lift (c_p = b - a)",
        (product == p2).to_string(),
        "2.2 vs p lift",
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_constraints() {
        assert!(ToyGaloisModule::new(1, 2, 1, 2, 1, 2).is_err()); // l = 2
        assert!(ToyGaloisModule::new(1, 3, 1, 2, 3, 2).is_err()); // a = 0 mod 3
        assert!(ToyGaloisModule::new(1, 3, 2, 2, 1, 4).is_err()); // a = b mod 3
        assert!(ToyGaloisModule::new(2, 3, 2, 2, 1, 2).is_ok());
    }

    #[test]
    fn beta_zero_is_zero() {
        let t = ToyGaloisModule::new(1, 3, 1, 2, 1, 2).unwrap();
        let z = vec![0, 0];
        assert_eq!(t.kummer_beta(&z).unwrap(), vec![0, 0]);
    }

    #[test]
    fn beta_rejects_bad_input() {
        let t = ToyGaloisModule::new(1, 3, 1, 2, 1, 2).unwrap();
        assert!(t.kummer_beta(&[1, 0]).is_err()); // not M-torsion
        assert!(t.kummer_beta(&[3, 0]).is_err()); // plus part, not minus
    }

    #[test]
    fn beta_matches_minus_2b_small() {
        // d=1, M=3, b=1: beta scales z by -2b = -2, i.e. beta(z) = z mod 3
        let t = ToyGaloisModule::new(1, 3, 1, 2, 2, 1).unwrap();
        for z in t.minus_part_m_torsion().unwrap() {
            let beta = t.kummer_beta(&z).unwrap();
            let expect = t.scale((t.modulus() - 2) % t.modulus(), &z);
            assert_eq!(beta, expect);
        }
    }

    #[test]
    fn exhaustive_beta_grids() {
        for d in [1usize, 2] {
            for n in [1u32, 2] {
                let m = 3u64.pow(n);
                for a in 1..m {
                    for b in 1..m {
                        let Ok(t) = ToyGaloisModule::new(d, 3, n, 2, a, b) else {
                            continue;
                        };
                        let rep = kummer_beta_report(&t).unwrap();
                        assert!(rep.pass, "d={d} M={m} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn sigma_square_cases() {
        let t = ToyGaloisModule::new(2, 3, 2, 1, 1, 2).unwrap();
        // plus-part image, eps = +1, s = +1: both sides 2 t(g)
        let h_plus = vec![1, 2, 0, 0];
        let rep = sigma_square_report(&t, &h_plus, 1, 1).unwrap();
        assert!(rep.pass);
        // plus-part image with eps = -1 requires s = -1 and gives 0
        let rep = sigma_square_report(&t, &h_plus, -1, -1).unwrap();
        assert!(rep.pass);
        // minus-part image: sigma(h) = -h
        let h_minus = vec![0, 0, 4, 1];
        let rep = sigma_square_report(&t, &h_minus, 1, -1).unwrap();
        assert!(rep.pass);
        // non-equivariant combination is a domain error
        assert!(sigma_square_report(&t, &h_plus, 1, -1).is_err());
        // mixed homomorphisms with matching signs work too
    }

    #[test]
    fn congruence_report() {
        let spec = CongruenceSpec::new(3, 2, 1, 2, 1, 0).unwrap();
        let rep = congruence_checks(&spec).unwrap();
        assert!(rep.pass, "{:?}", rep.failures().collect::<Vec<_>>());
        // c_p = b - a = 1 here, so the multiplier matches the p lift
        let rec = rep
            .records
            .iter()
            .find(|r| r.name.contains("equals the chosen p-lift"))
            .unwrap();
        assert_eq!(rec.actual, "true");
    }
}
