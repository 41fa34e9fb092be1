use crate::error::{Error, Result};
use crate::finmod::{howell_form, Matrix, RingCtx};
use crate::lagrange::b;

use super::poly::IntPoly;

/// Number of invertible symmetric r x r matrices over F_p, as a
/// polynomial in p. Recursion: every symmetric matrix has a unique
/// nondegenerate quotient, so p^b(r) = sum_s [r choose s]_p * c_s.
pub fn invertible_symmetric_poly(r: usize) -> IntPoly {
    let mut acc = IntPoly::p_pow(b(r) as i32);
    for s in 0..r {
        let term = &IntPoly::gaussian_binomial(r, s) * &invertible_symmetric_poly(s);
        acc = &acc - &term;
    }
    acc
}

/// R_n(i): number of symmetric n x n matrices over F_p of corank exactly
/// i, as a polynomial in p. Counting by kernel: [n choose i]_p choices of
/// kernel times a nondegenerate form on the quotient.
pub fn corank_count_poly(n: usize, i: usize) -> IntPoly {
    if i > n {
        return IntPoly::zero();
    }
    &IntPoly::gaussian_binomial(n, i) * &invertible_symmetric_poly(n - i)
}

/// Brute-force R_n(i,p): scans all p^b(n) symmetric matrices and ranks
/// them over F_p.
pub fn corank_count_brute(n: usize, p: u32, i: usize) -> Result<u64> {
    Ok(*symmetric_corank_census(n, p)?
        .get(i)
        .unwrap_or(&0))
}

/// Census of symmetric n x n matrices over F_p by corank; entry i is the
/// number of matrices with corank exactly i.
pub fn symmetric_corank_census(n: usize, p: u32) -> Result<Vec<u64>> {
    if n > 4 {
        return Err(Error::Unsupported(format!(
            "symmetric census limited to n <= 4, got {n}"
        )));
    }
    let ctx = RingCtx::fp(p)?;
    let free = b(n);
    let total = (p as u64).pow(free as u32);
    let mut census = vec![0u64; n + 1];
    for idx in 0..total {
        let mut m = Matrix::zero(ctx, n, n);
        let mut t = idx;
        for i in 0..n {
            for j in i..n {
                let v = (t % p as u64) as u32;
                t /= p as u64;
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        let rank = howell_form(&m).rows();
        census[n - rank] += 1;
    }
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_closed_forms() {
        assert_eq!(corank_count_poly(1, 1), IntPoly::one());
        assert_eq!(
            corank_count_poly(2, 1),
            &IntPoly::p_pow(2) - &IntPoly::one()
        );
        // R_3(1) = p^2 (p^3 - 1)
        assert_eq!(
            corank_count_poly(3, 1),
            &IntPoly::p_pow(5) - &IntPoly::p_pow(2)
        );
    }

    #[test]
    fn census_sums_to_all_matrices_and_matches_polys() {
        for n in 1..=3 {
            for p in [2u32, 3, 5] {
                let census = symmetric_corank_census(n, p).unwrap();
                let total: u64 = census.iter().sum();
                assert_eq!(total, (p as u64).pow(b(n) as u32), "n={n} p={p}");
                for (i, &cnt) in census.iter().enumerate() {
                    let poly = corank_count_poly(n, i);
                    assert_eq!(
                        poly.eval_i128(p as i128),
                        cnt as i128,
                        "R_{n}({i}) at p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn zero_corank_is_invertible_count() {
        let census = symmetric_corank_census(2, 3).unwrap();
        // p^3 - p^2 invertible symmetric 2x2 matrices
        assert_eq!(census[0], 27 - 9);
        assert_eq!(census[1], 8); // p^2 - 1
        assert_eq!(census[2], 1); // zero matrix
    }
}
