use serde::{Deserialize, Serialize};

use crate::finmod::{kernel, standard_gram, Matrix, RingCtx, Submodule};

/// The ambient symplectic module (Z/p^e)^2g with the standard Gram matrix
/// J = [[0, I], [-I, 0]].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymplecticSpace {
    ctx: RingCtx,
    g: usize,
    gram: Matrix,
}

impl SymplecticSpace {
    pub fn new(g: usize, ctx: RingCtx) -> Self {
        SymplecticSpace {
            ctx,
            g,
            gram: standard_gram(ctx, g),
        }
    }

    pub fn ctx(&self) -> RingCtx {
        self.ctx
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn dim(&self) -> usize {
        2 * self.g
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// <x, y> = x^T J y.
    pub fn pairing(&self, x: &[u32], y: &[u32]) -> u32 {
        let ctx = self.ctx;
        let n = self.dim();
        assert_eq!(x.len(), n);
        assert_eq!(y.len(), n);
        // J has a single +/-1 per row; expand directly.
        let mut acc: i64 = 0;
        for i in 0..self.g {
            acc += x[i] as i64 * y[self.g + i] as i64 - x[self.g + i] as i64 * y[i] as i64;
        }
        ctx.reduce_i64(acc)
    }

    /// Orthogonal complement W^perp = {v : <w, v> = 0 for all w in W}.
    pub fn orthogonal(&self, w: &Submodule) -> Submodule {
        assert_eq!(w.ambient_rank(), self.dim());
        kernel(&w.gens().mul(&self.gram))
    }

    /// Every pair of generators pairs to zero.
    pub fn is_isotropic(&self, w: &Submodule) -> bool {
        let rows: Vec<&[u32]> = w.gens().iter_rows().collect();
        for (i, a) in rows.iter().enumerate() {
            for b in rows.iter().skip(i) {
                if self.pairing(a, b) != 0 {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(g: usize, p: u32, e: u8) -> SymplecticSpace {
        SymplecticSpace::new(g, RingCtx::new(p, e).unwrap())
    }

    fn basis_vec(n: usize, i: usize) -> Vec<u32> {
        let mut v = vec![0u32; n];
        v[i] = 1;
        v
    }

    #[test]
    fn pairing_on_basis() {
        let s = space(3, 3, 1);
        let e1 = basis_vec(6, 0);
        let e2 = basis_vec(6, 1);
        let e4 = basis_vec(6, 3);
        assert_eq!(s.pairing(&e1, &e4), 1);
        assert_eq!(s.pairing(&e4, &e1), 2); // = -1
        assert_eq!(s.pairing(&e1, &e2), 0);
        assert_eq!(s.pairing(&e1, &e1), 0);
    }

    #[test]
    fn pairing_is_alternating_and_bilinear() {
        let s = space(2, 5, 2);
        let x = vec![1, 7, 3, 24];
        let y = vec![2, 0, 11, 5];
        let ctx = s.ctx();
        assert_eq!(s.pairing(&x, &x), 0);
        assert_eq!(s.pairing(&x, &y), ctx.neg(s.pairing(&y, &x)));
        let x2: Vec<u32> = x.iter().map(|&v| ctx.mul(v, 3)).collect();
        assert_eq!(s.pairing(&x2, &y), ctx.mul(3, s.pairing(&x, &y)));
    }

    #[test]
    fn zero_orthogonal_is_full() {
        let s = space(2, 2, 2);
        let zero = Submodule::zero(s.ctx(), 4);
        assert_eq!(s.orthogonal(&zero), Submodule::full(s.ctx(), 4));
    }

    #[test]
    fn lagrangian_is_self_orthogonal() {
        for (p, e) in [(2u32, 1u8), (3, 1), (2, 2), (3, 2)] {
            let s = space(3, p, e);
            let w = Submodule::from_rows(
                s.ctx(),
                &[
                    vec![1, 0, 0, 0, 0, 0],
                    vec![0, 1, 0, 0, 0, 0],
                    vec![0, 0, 1, 0, 0, 0],
                ],
                6,
            );
            assert_eq!(s.orthogonal(&w), w);
        }
    }

    #[test]
    fn orthogonal_cardinality_and_involution() {
        let s = space(3, 2, 2);
        let ctx = s.ctx();
        // p*B is its own orthogonal complement: both have index p^6.
        let pb = Submodule::canonicalize(&Matrix::identity(ctx, 6).scale(2));
        let perp = s.orthogonal(&pb);
        assert_eq!(perp, pb);
        assert_eq!(pb.log_size(), 6);

        let w = Submodule::from_rows(ctx, &[vec![1, 2, 0, 0, 3, 1], vec![0, 2, 0, 1, 0, 0]], 6);
        let wp = s.orthogonal(&w);
        assert_eq!(w.log_size() + wp.log_size(), 12); // |W| |W^perp| = p^(2g e)
        assert_eq!(s.orthogonal(&wp), w);
    }
}
