use crate::error::{Error, Result};
use crate::finmod::{Fp2Structure, Matrix, ModuleType, RingCtx, Submodule};
use crate::lagrange::{enumerate_isotropic, enumerate_tp, SymplecticSpace};

/// The fixed stratification data against which enumerated submodules are
/// classified: a maximal isotropic flag piece, a lower-dimensional
/// isotropic piece with its orthogonal, and optionally the quadratic
/// extension structure that picks them out.
#[derive(Debug, Clone)]
pub struct FlagData {
    pub space: SymplecticSpace,
    pub d_g: Option<Submodule>,
    pub d_g1: Option<Submodule>,
    pub d_g1_perp: Option<Submodule>,
    pub fp2: Option<Fp2Structure>,
}

impl FlagData {
    pub fn ctx(&self) -> RingCtx {
        self.space.ctx()
    }

    pub fn g(&self) -> usize {
        self.space.g()
    }

    fn validate(&self) -> Result<()> {
        if let Some(dg) = &self.d_g {
            if !self.space.is_isotropic(dg) {
                return Err(Error::invariant("D_g is not isotropic"));
            }
        }
        if let (Some(d1), Some(d1p)) = (&self.d_g1, &self.d_g1_perp) {
            if &self.space.orthogonal(d1) != d1p {
                return Err(Error::invariant("D_{g-1}^perp mismatch"));
            }
            if !d1p.contains_submodule(d1) {
                return Err(Error::invariant("D_{g-1} is not isotropic"));
            }
            if let Some(f) = &self.fp2 {
                if !f.is_stable(d1) {
                    return Err(Error::invariant("D_{g-1} is not omega-stable"));
                }
            }
        }
        Ok(())
    }
}

/// Ordinary model over F_p: D_g is the second coordinate Lagrangian
/// span{e_{g+1}, ..., e_{2g}}.
pub fn ordinary_fp(g: usize, p: u32) -> Result<FlagData> {
    let ctx = RingCtx::fp(p)?;
    let space = SymplecticSpace::new(g, ctx);
    let n = 2 * g;
    let mut m = Matrix::zero(ctx, g, n);
    for i in 0..g {
        m.set(i, g + i, 1);
    }
    let flag = FlagData {
        space,
        d_g: Some(Submodule::canonicalize(&m)),
        d_g1: None,
        d_g1_perp: None,
        fp2: None,
    };
    flag.validate()?;
    Ok(flag)
}

/// Non-ordinary model over F_p (odd p, g >= 2): D_{g-1} is the first
/// omega-stable isotropic (g-1)-subspace in canonical order.
pub fn nonordinary_fp(g: usize, p: u32, d: Option<u32>, budget: u128) -> Result<FlagData> {
    let ctx = RingCtx::fp(p)?;
    if (g - 1) % 2 != 0 {
        return Err(Error::domain(format!(
            "omega-stable flags need even dimension; g - 1 = {} is odd",
            g - 1
        )));
    }
    let space = SymplecticSpace::new(g, ctx);
    let fp2 = match d {
        Some(d) => Fp2Structure::with_nonresidue(g, ctx, d)?,
        None => Fp2Structure::standard(g, ctx)?,
    };
    let d_g1 = first_stable_isotropic(g, g - 1, p, &fp2, budget)?;
    let d_g1_perp = space.orthogonal(&d_g1);
    let flag = FlagData {
        space,
        d_g: None,
        d_g1: Some(d_g1),
        d_g1_perp: Some(d_g1_perp),
        fp2: Some(fp2),
    };
    flag.validate()?;
    Ok(flag)
}

/// Variant of the non-ordinary model with a caller-supplied flag (used
/// by the flag-independence checks). The flag must be omega-stable
/// isotropic of dimension g-1.
pub fn nonordinary_fp_with_flag(
    g: usize,
    p: u32,
    fp2: Fp2Structure,
    d_g1: Submodule,
) -> Result<FlagData> {
    let ctx = RingCtx::fp(p)?;
    let space = SymplecticSpace::new(g, ctx);
    let d_g1_perp = space.orthogonal(&d_g1);
    let flag = FlagData {
        space,
        d_g: None,
        d_g1: Some(d_g1),
        d_g1_perp: Some(d_g1_perp),
        fp2: Some(fp2),
    };
    flag.validate()?;
    Ok(flag)
}

/// Even-genus model over F_p: D_g itself is omega-stable maximal
/// isotropic (first in canonical order).
pub fn even_genus_fp(g: usize, p: u32, budget: u128) -> Result<FlagData> {
    let ctx = RingCtx::fp(p)?;
    if g % 2 != 0 {
        return Err(Error::domain("even-genus flag requires even g"));
    }
    let space = SymplecticSpace::new(g, ctx);
    let fp2 = Fp2Structure::standard(g, ctx)?;
    let d_g = first_stable_isotropic(g, g, p, &fp2, budget)?;
    let flag = FlagData {
        space,
        d_g: Some(d_g),
        d_g1: None,
        d_g1_perp: None,
        fp2: Some(fp2),
    };
    flag.validate()?;
    Ok(flag)
}

fn first_stable_isotropic(
    g: usize,
    dim: usize,
    p: u32,
    fp2: &Fp2Structure,
    budget: u128,
) -> Result<Submodule> {
    let list = if dim == g {
        enumerate_tp(g, p, budget)?
    } else {
        enumerate_isotropic(g, dim, p, budget)?
    };
    list.into_iter()
        .find(|w| fp2.is_stable(w))
        .ok_or_else(|| Error::domain("no omega-stable isotropic subspace of this dimension"))
}

/// Ordinary model over Z/p^2: D_g is the free isotropic direct summand
/// span{e_1, ..., e_g}.
pub fn ordinary_zp2(g: usize, p: u32) -> Result<FlagData> {
    let ctx = RingCtx::zp2(p)?;
    let space = SymplecticSpace::new(g, ctx);
    let n = 2 * g;
    let mut m = Matrix::zero(ctx, g, n);
    for i in 0..g {
        m.set(i, i, 1);
    }
    let flag = FlagData {
        space,
        d_g: Some(Submodule::canonicalize(&m)),
        d_g1: None,
        d_g1_perp: None,
        fp2: None,
    };
    flag.validate()?;
    Ok(flag)
}

/// Non-ordinary model over Z/p^2 for g = 3: a free rank-2 isotropic
/// direct summand D_2. For odd p the summand is omega-stable (a free
/// rank-1 module over the quadratic extension), generated by the first
/// vector u in coordinate order with <u, omega u> = 0 whose pair
/// (u, omega u) spans a free rank-2 module. At p = 2 there is no omega
/// and the coordinate flag span{e_1, e_2} is used.
pub fn nonordinary_zp2(g: usize, p: u32) -> Result<FlagData> {
    if g != 3 {
        return Err(Error::Unsupported(
            "the non-ordinary Z/p^2 flag is implemented for g = 3".into(),
        ));
    }
    let ctx = RingCtx::zp2(p)?;
    let space = SymplecticSpace::new(g, ctx);
    let n = 2 * g;
    if p == 2 {
        let mut m = Matrix::zero(ctx, 2, n);
        m.set(0, 0, 1);
        m.set(1, 1, 1);
        let flag = FlagData {
            space,
            d_g: None,
            d_g1: Some(Submodule::canonicalize(&m)),
            d_g1_perp: None,
            fp2: None,
        };
        let d1 = flag.d_g1.clone().unwrap();
        let mut flag = flag;
        flag.d_g1_perp = Some(flag.space.orthogonal(&d1));
        flag.validate()?;
        return Ok(flag);
    }

    let fp2 = Fp2Structure::standard(g, ctx)?;
    let modulus = ctx.modulus() as u64;
    let total = modulus.pow(n as u32);
    let mut found: Option<Submodule> = None;
    'scan: for idx in 1..total {
        let mut u = vec![0u32; n];
        let mut t = idx;
        for c in (0..n).rev() {
            u[c] = (t % modulus) as u32;
            t /= modulus;
        }
        if !u.iter().any(|&x| ctx.is_unit(x)) {
            continue;
        }
        let omega_u = fp2.apply(&u);
        if space.pairing(&u, &omega_u) != 0 {
            continue;
        }
        let flat: Vec<u32> = u.iter().chain(omega_u.iter()).copied().collect();
        let sub = Submodule::canonicalize(&Matrix::from_flat(ctx, 2, n, flat));
        if sub.module_type() == (ModuleType { a: 0, b: 2 }) {
            found = Some(sub);
            break 'scan;
        }
    }
    let d_g1 = found.ok_or_else(|| Error::domain("no omega-stable free isotropic plane found"))?;
    let d_g1_perp = space.orthogonal(&d_g1);
    let flag = FlagData {
        space,
        d_g: None,
        d_g1: Some(d_g1),
        d_g1_perp: Some(d_g1_perp),
        fp2: Some(fp2),
    };
    flag.validate()?;
    Ok(flag)
}

/// A symplectic transvection x -> x + c <x, v> v over the flag's ring,
/// as a matrix acting on row vectors from the right.
pub fn transvection(space: &SymplecticSpace, v: &[u32], c: u32) -> Matrix {
    let ctx = space.ctx();
    let n = space.dim();
    let mut m = Matrix::identity(ctx, n);
    for i in 0..n {
        let mut e = vec![0u32; n];
        e[i] = 1;
        let coef = ctx.mul(c, space.pairing(&e, v));
        if coef != 0 {
            for (jj, &vj) in v.iter().enumerate() {
                let cur = m.get(i, jj);
                m.set(i, jj, ctx.add(cur, ctx.mul(coef, vj)));
            }
        }
    }
    m
}

/// Applies a matrix to a submodule (rows act from the right).
pub fn transform(sub: &Submodule, m: &Matrix) -> Submodule {
    Submodule::canonicalize(&sub.gens().mul(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordinary_flags() {
        let f = ordinary_fp(3, 2).unwrap();
        let dg = f.d_g.unwrap();
        assert_eq!(dg.module_type().a, 3);
        let f = ordinary_zp2(3, 3).unwrap();
        let dg = f.d_g.unwrap();
        assert_eq!(dg.module_type(), ModuleType { a: 0, b: 3 });
    }

    #[test]
    fn nonordinary_fp_flag_is_stable_plane() {
        let f = nonordinary_fp(3, 3, None, crate::lagrange::DEFAULT_BUDGET).unwrap();
        let d1 = f.d_g1.as_ref().unwrap();
        assert_eq!(d1.module_type().a, 2);
        assert!(f.fp2.as_ref().unwrap().is_stable(d1));
        assert!(f.space.is_isotropic(d1));
    }

    #[test]
    fn nonordinary_zp2_flags() {
        let f2 = nonordinary_zp2(3, 2).unwrap();
        assert_eq!(
            f2.d_g1.as_ref().unwrap().module_type(),
            ModuleType { a: 0, b: 2 }
        );
        let f3 = nonordinary_zp2(3, 3).unwrap();
        let d1 = f3.d_g1.as_ref().unwrap();
        assert_eq!(d1.module_type(), ModuleType { a: 0, b: 2 });
        assert!(f3.fp2.as_ref().unwrap().is_stable(d1));
        assert!(f3.space.is_isotropic(d1));
    }

    #[test]
    fn transvections_are_symplectic() {
        let ctx = RingCtx::fp(3).unwrap();
        let space = SymplecticSpace::new(2, ctx);
        let t = transvection(&space, &[1, 2, 0, 1], 2);
        // check <xT, yT> = <x, y> on a basis sample
        for i in 0..4 {
            for j in 0..4 {
                let mut x = vec![0u32; 4];
                let mut y = vec![0u32; 4];
                x[i] = 1;
                y[j] = 1;
                let xt = {
                    let m = Matrix::from_flat(ctx, 1, 4, x.clone()).mul(&t);
                    m.row_vec(0)
                };
                let yt = {
                    let m = Matrix::from_flat(ctx, 1, 4, y.clone()).mul(&t);
                    m.row_vec(0)
                };
                assert_eq!(space.pairing(&xt, &yt), space.pairing(&x, &y));
            }
        }
    }
}
