use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::matrix::Matrix;
use super::ring::RingCtx;
use super::submodule::Submodule;

/// Multiplication by sqrt(d) on the symplectic ambient module (Z/p^e)^2g:
/// a matrix omega with omega^2 = d*I and omega^T J = -J omega, where d is a
/// quadratic non-residue unit. Adjoining omega makes the ambient module a
/// module over the quadratic extension of the base ring, so omega-stable
/// submodules of even rank behave like spaces over that extension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fp2Structure {
    ctx: RingCtx,
    g: usize,
    d: u32,
    omega: Matrix,
}

impl Fp2Structure {
    /// Hyperbolic-pair construction: on each pair (e_i, e_{g+i}) the map
    /// sends e_i -> e_{g+i} and e_{g+i} -> d*e_i, giving the block matrix
    /// [[0, d*I], [I, 0]].
    pub fn standard(g: usize, ctx: RingCtx) -> Result<Fp2Structure> {
        if ctx.p() == 2 {
            return Err(Error::domain(
                "F_{p^2}-structures require odd p (omega^2 must be a non-residue unit)",
            ));
        }
        let d = ctx.residue_field().nonresidue()?;
        Fp2Structure::with_nonresidue(g, ctx, d)
    }

    pub fn with_nonresidue(g: usize, ctx: RingCtx, d: u32) -> Result<Fp2Structure> {
        if ctx.p() == 2 {
            return Err(Error::domain("F_{p^2}-structures require odd p"));
        }
        let fp = ctx.residue_field();
        if !fp.nonresidues().contains(&(d % ctx.p())) {
            return Err(Error::domain(format!(
                "d = {d} is not a quadratic non-residue unit mod {}",
                ctx.p()
            )));
        }
        let n = 2 * g;
        let mut omega = Matrix::zero(ctx, n, n);
        for i in 0..g {
            omega.set(g + i, i, 1); // omega e_i = e_{g+i}
            omega.set(i, g + i, ctx.reduce_u64(d as u64)); // omega e_{g+i} = d e_i
        }
        let s = Fp2Structure { ctx, g, d, omega };
        debug_assert!(s.check_invariants().is_ok());
        Ok(s)
    }

    /// Conjugates omega by a symplectic matrix; both invariants are
    /// preserved, giving a different realization of the same extension.
    pub fn conjugate(&self, s: &Matrix) -> Fp2Structure {
        let n = 2 * self.g;
        assert_eq!((s.rows(), s.cols()), (n, n));
        let sinv = invert(s).expect("conjugating matrix must be invertible");
        Fp2Structure {
            ctx: self.ctx,
            g: self.g,
            d: self.d,
            omega: s.mul(&self.omega).mul(&sinv),
        }
    }

    pub fn ctx(&self) -> RingCtx {
        self.ctx
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn omega(&self) -> &Matrix {
        &self.omega
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        self.omega.apply(v)
    }

    /// omega^2 = d*I and omega^T J = -J omega, as exact matrix identities.
    pub fn check_invariants(&self) -> Result<()> {
        let n = 2 * self.g;
        let d_ident = Matrix::scalar(self.ctx, n, self.d);
        if self.omega.mul(&self.omega) != d_ident {
            return Err(Error::invariant("omega^2 != d * I"));
        }
        let j = standard_gram(self.ctx, self.g);
        let lhs = self.omega.transpose().mul(&j);
        let rhs = j.mul(&self.omega).scale(self.ctx.neg(1));
        if lhs != rhs {
            return Err(Error::invariant("omega is not anti-self-adjoint for J"));
        }
        Ok(())
    }

    /// The omega-closure span(W + omega W) of a submodule.
    pub fn omega_closure(&self, w: &Submodule) -> Submodule {
        let img = w.gens().mul(&self.omega.transpose());
        Submodule::canonicalize(&w.gens().stack(&img))
    }

    pub fn is_stable(&self, w: &Submodule) -> bool {
        &self.omega_closure(w) == w
    }

    /// Dimension of the omega-closure over the quadratic extension:
    /// half the F_p-dimension of span(W + omega W). Over Z/p^2 the rank is
    /// read from the module type of the closure.
    pub fn omega_span_dim(&self, w: &Submodule) -> usize {
        let closure = self.omega_closure(w);
        let t = closure.module_type();
        if self.ctx.e() == 1 {
            debug_assert_eq!(t.a % 2, 0, "omega-closure has even dimension");
            t.a / 2
        } else {
            let total = t.log_size();
            debug_assert_eq!(total % 2, 0);
            total / 2
        }
    }
}

/// The standard symplectic Gram matrix J = [[0, I], [-I, 0]] of size 2g.
pub fn standard_gram(ctx: RingCtx, g: usize) -> Matrix {
    let n = 2 * g;
    let mut j = Matrix::zero(ctx, n, n);
    for i in 0..g {
        j.set(i, g + i, 1);
        j.set(g + i, i, ctx.neg(1));
    }
    j
}

/// Inverse of a square matrix over Z/p^e, when it exists.
pub fn invert(m: &Matrix) -> Option<Matrix> {
    let ctx = m.ctx();
    let n = m.rows();
    if m.cols() != n {
        return None;
    }
    // Gauss-Jordan with unit pivots; a matrix over Z/p^e is invertible
    // iff its reduction mod p is.
    let mut a = m.clone();
    let mut inv = Matrix::identity(ctx, n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| ctx.is_unit(a.get(r, col)))?;
        if pivot != col {
            for c in 0..n {
                let (x, y) = (a.get(col, c), a.get(pivot, c));
                a.set(col, c, y);
                a.set(pivot, c, x);
                let (x, y) = (inv.get(col, c), inv.get(pivot, c));
                inv.set(col, c, y);
                inv.set(pivot, c, x);
            }
        }
        let u = ctx.inv(a.get(col, col)).expect("pivot is a unit");
        for c in 0..n {
            a.set(col, c, ctx.mul(a.get(col, c), u));
            inv.set(col, c, ctx.mul(inv.get(col, c), u));
        }
        for r in 0..n {
            if r != col && a.get(r, col) != 0 {
                let f = a.get(r, col);
                for c in 0..n {
                    let av = ctx.sub(a.get(r, c), ctx.mul(f, a.get(col, c)));
                    a.set(r, c, av);
                    let iv = ctx.sub(inv.get(r, c), ctx.mul(f, inv.get(col, c)));
                    inv.set(r, c, iv);
                }
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g1_p3_matches_block_form() {
        let ctx = RingCtx::fp(3).unwrap();
        let f = Fp2Structure::with_nonresidue(1, ctx, 2).unwrap();
        assert_eq!(f.omega(), &Matrix::from_rows(ctx, &[vec![0, 2], vec![1, 0]]));
        assert_eq!(
            f.omega().mul(f.omega()),
            Matrix::scalar(ctx, 2, 2)
        );
    }

    #[test]
    fn invariants_hold_for_small_genera_and_primes() {
        for p in [3u32, 5] {
            for e in [1u8, 2] {
                let ctx = RingCtx::new(p, e).unwrap();
                for g in 1..=4 {
                    let f = Fp2Structure::standard(g, ctx).unwrap();
                    f.check_invariants().unwrap();
                }
            }
        }
    }

    #[test]
    fn rejects_p_equals_2_and_residues() {
        assert!(Fp2Structure::standard(2, RingCtx::fp(2).unwrap()).is_err());
        // 4 = 2^2 is a residue mod 5
        assert!(Fp2Structure::with_nonresidue(1, RingCtx::fp(5).unwrap(), 4).is_err());
    }

    #[test]
    fn omega_span_of_a_line_has_dimension_one() {
        let ctx = RingCtx::fp(5).unwrap();
        let f = Fp2Structure::standard(3, ctx).unwrap();
        let e1 = Submodule::from_rows(ctx, &[vec![1, 0, 0, 0, 0, 0]], 6);
        let closure = f.omega_closure(&e1);
        assert_eq!(closure.module_type().a, 2); // e1 and omega e1 = e4
        assert_eq!(f.omega_span_dim(&e1), 1);
        assert!(f.is_stable(&closure));
    }

    #[test]
    fn inversion_round_trip() {
        let ctx = RingCtx::zp2(3).unwrap();
        let m = Matrix::from_rows(ctx, &[vec![1, 2, 0], vec![0, 1, 3], vec![4, 0, 1]]);
        let inv = invert(&m).unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(ctx, 3));
        assert_eq!(inv.mul(&m), Matrix::identity(ctx, 3));
    }
}
