use crate::error::{Error, Result};
use crate::report::{CheckRecord, Provenance, VerificationReport};

/// Integer polynomial in one variable, dense low-to-high coefficients.
type ZPoly = Vec<i128>;

fn zpoly_mul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn zpoly_add(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect()
}

type IMatrix = Vec<Vec<i128>>;

fn mat_mul(a: &IMatrix, b: &IMatrix) -> IMatrix {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![0i128; m]; n];
    for i in 0..n {
        for t in 0..k {
            if a[i][t] == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += a[i][t] * b[t][j];
            }
        }
    }
    out
}

fn mat_apply(a: &IMatrix, v: &[i128]) -> Vec<i128> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(&x, &y)| x * y).sum())
        .collect()
}

fn mat_identity(n: usize) -> IMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

/// Characteristic polynomial det(Z I - D) by cofactor expansion with
/// polynomial entries; fine for the small ranks used here.
fn char_poly(d: &IMatrix) -> ZPoly {
    let n = d.len();
    // matrix of linear polynomials: entry (i,j) = (i==j) Z - d[i][j]
    let entries: Vec<Vec<ZPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        vec![-d[i][j], 1]
                    } else {
                        vec![-d[i][j]]
                    }
                })
                .collect()
        })
        .collect();
    poly_det(&entries)
}

fn poly_det(m: &[Vec<ZPoly>]) -> ZPoly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc: ZPoly = vec![0];
    for col in 0..n {
        let minor: Vec<Vec<ZPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != col)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let mut term = zpoly_mul(&m[0][col], &poly_det(&minor));
        if col % 2 == 1 {
            for c in term.iter_mut() {
                *c = -*c;
            }
        }
        acc = zpoly_add(&acc, &term);
    }
    acc
}

/// A free module Z^(r+1) with a distinguished line C0 = Z e_0, two
/// commuting operators preserving C0, and the evaluation map cl reading
/// the e_0-coordinate of C0-elements. The quotient characteristic
/// polynomials Q_m turn arbitrary vectors into C0-elements.
#[derive(Debug, Clone)]
pub struct ToyChowModel {
    r: usize,
    ops: [IMatrix; 2],
    eigen: [i128; 2],
    charpolys: [ZPoly; 2],
}

impl ToyChowModel {
    /// Both operators must commute and preserve C0 (first column zero
    /// below the diagonal entry).
    pub fn new(t1: IMatrix, t2: IMatrix) -> Result<Self> {
        let n = t1.len();
        if n < 2 || t2.len() != n || t1.iter().any(|r| r.len() != n) || t2.iter().any(|r| r.len() != n)
        {
            return Err(Error::domain("operators must be square of equal size >= 2"));
        }
        if mat_mul(&t1, &t2) != mat_mul(&t2, &t1) {
            return Err(Error::domain("operators do not commute"));
        }
        for t in [&t1, &t2] {
            if (1..n).any(|i| t[i][0] != 0) {
                return Err(Error::domain("operator does not preserve C0 = Z e_0"));
            }
        }
        let eigen = [t1[0][0], t2[0][0]];
        let block = |t: &IMatrix| -> IMatrix {
            (1..n).map(|i| (1..n).map(|j| t[i][j]).collect()).collect()
        };
        let charpolys = [char_poly(&block(&t1)), char_poly(&block(&t2))];
        Ok(ToyChowModel {
            r: n - 1,
            ops: [t1, t2],
            eigen,
            charpolys,
        })
    }

    pub fn rank(&self) -> usize {
        self.r + 1
    }

    pub fn charpoly(&self, which: usize) -> &ZPoly {
        &self.charpolys[which]
    }

    pub fn eigenvalue(&self, which: usize) -> i128 {
        self.eigen[which]
    }

    /// phi_m(v) = sum_j b_{m,j} T_m^j v; lands in C0 by Cayley-Hamilton
    /// on the quotient.
    pub fn phi(&self, which: usize, v: &[i128]) -> Result<Vec<i128>> {
        let t = &self.ops[which];
        let q = &self.charpolys[which];
        let mut acc = vec![0i128; self.rank()];
        let mut power = v.to_vec();
        for (j, &coef) in q.iter().enumerate() {
            if j > 0 {
                power = mat_apply(t, &power);
            }
            for (a, &x) in acc.iter_mut().zip(&power) {
                *a += coef * x;
            }
        }
        if acc[1..].iter().any(|&x| x != 0) {
            return Err(Error::invariant(
                "phi image did not land in C0; quotient polynomial is wrong",
            ));
        }
        Ok(acc)
    }

    /// cl on C0: the e_0 coordinate.
    pub fn cl(&self, v: &[i128]) -> i128 {
        v[0]
    }

    /// Q_m(a_m) = sum_j b_{m,j} a_m^j.
    pub fn q_at_eigenvalue(&self, which: usize) -> i128 {
        let a = self.eigen[which];
        self.charpolys[which]
            .iter()
            .enumerate()
            .map(|(j, &c)| c * a.pow(j as u32))
            .sum()
    }

    /// The two evaluation orders of the double sum agree:
    ///   Q_1(a_1) cl(phi_2(v)) = Q_2(a_2) cl(phi_1(v)).
    pub fn proportionality(&self, v: &[i128]) -> Result<(i128, i128)> {
        let lhs = self.q_at_eigenvalue(0) * self.cl(&self.phi(1, v)?);
        let rhs = self.q_at_eigenvalue(1) * self.cl(&self.phi(0, v)?);
        Ok((lhs, rhs))
    }
}

/// Builds a model from a C0-preserving integer matrix and a polynomial
/// in it (guaranteeing commutation), then checks proportionality on a
/// given vector.
pub fn proportionality_report(t1: IMatrix, poly_coeffs: &[i128], v: &[i128]) -> Result<VerificationReport> {
    let n = t1.len();
    let mut t2 = vec![vec![0i128; n]; n];
    let mut power = mat_identity(n);
    for (j, &c) in poly_coeffs.iter().enumerate() {
        if j > 0 {
            power = mat_mul(&power, &t1);
        }
        for i in 0..n {
            for k in 0..n {
                t2[i][k] += c * power[i][k];
            }
        }
    }
    let model = ToyChowModel::new(t1, t2)?;
    let mut report = VerificationReport::new("chow-proportionality").with_param("r", model.r);
    let (lhs, rhs) = model.proportionality(v)?;
    report.push(CheckRecord::new(
        "double-sum evaluation orders agree",
        lhs,
        rhs,
        Provenance::Paper,
        "prop-3.1",
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_poly_small() {
        // charpoly of [[2,1],[0,3]] = (Z-2)(Z-3) = Z^2 -5Z + 6
        let d = vec![vec![2, 1], vec![0, 3]];
        assert_eq!(char_poly(&d), vec![6, -5, 1]);
    }

    #[test]
    fn rank_one_quotient_case() {
        // r = 1: Q(Z) = Z - q with q the quotient eigenvalue, so
        // cl(phi(v)) = (a - q) * cl-component relationship on e_0 inputs.
        let t1 = vec![vec![5, 1], vec![0, 3]]; // a = 5, Q(Z) = Z - 3
        let t2 = vec![vec![7, 1], vec![0, 5]]; // t1 + 2I, commutes
        let model = ToyChowModel::new(t1, t2).unwrap();
        assert_eq!(model.charpoly(0), &vec![-3, 1]);
        let v = vec![1, 0]; // v in C0
        let img = model.phi(0, &v).unwrap();
        // (T - 3) e0 = (5-3) e0
        assert_eq!(img, vec![2, 0]);
    }

    #[test]
    fn non_commuting_rejected() {
        let t1 = vec![vec![1, 1, 0], vec![0, 2, 1], vec![0, 0, 3]];
        let t2 = vec![vec![1, 0, 1], vec![0, 3, 0], vec![0, 1, 2]];
        assert!(ToyChowModel::new(t1, t2).is_err());
    }

    #[test]
    fn proportionality_on_polynomial_pairs() {
        let t1 = vec![vec![3, 1, 2], vec![0, 1, 1], vec![0, 2, 0]];
        // t2 = t1^2 + 2 t1 + 1
        let rep = proportionality_report(t1, &[1, 2, 1], &[5, -3, 2]).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn degenerate_vector_in_c0() {
        let t1 = vec![vec![4, 7], vec![0, 2]];
        let rep = proportionality_report(t1, &[3, 1], &[9, 0]).unwrap();
        assert!(rep.pass);
    }
}
