use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::finmod::{howell_form, kernel, Matrix, RingCtx, Submodule};

use super::symplectic::SymplecticSpace;

/// Default cap on the number of submodules an enumeration may produce.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// b(n) = n(n+1)/2.
pub fn b(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Gaussian binomial [n choose k]_p as an exact integer.
pub fn gaussian_binomial(n: usize, k: usize, p: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= p.pow((n - i) as u32) - 1;
        den *= p.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Number of maximal isotropic subspaces of F_p^2g: prod_{i=1..g} (p^i + 1).
pub fn lagrangian_count(g: usize, p: u128) -> u128 {
    (1..=g).map(|i| p.pow(i as u32) + 1).product()
}

/// Number of isotropic j-subspaces of F_p^2g.
pub fn isotropic_count(g: usize, j: usize, p: u128) -> u128 {
    gaussian_binomial(g, j, p) * ((g - j + 1)..=g).map(|i| p.pow(i as u32) + 1).product::<u128>()
}

/// Predicted size of the type-(g, i) family over Z/p^2: each isotropic
/// (g-i)-subspace mod p carries p^b(g-i) lifts.
pub fn tpi_count(g: usize, i: usize, p: u128) -> u128 {
    isotropic_count(g, g - i, p) * p.pow(b(g - i) as u32)
}

fn check_budget(predicted: u128, cap: u128) -> Result<()> {
    if predicted > cap {
        Err(Error::Budget { predicted, cap })
    } else {
        Ok(())
    }
}

/// All vectors of the row span of an F_p matrix (coefficient odometer).
pub fn span_vectors_fp(gens: &Matrix) -> Vec<Vec<u32>> {
    let ctx = gens.ctx();
    debug_assert_eq!(ctx.e(), 1);
    let p = ctx.p() as u64;
    let k = gens.rows();
    let n = gens.cols();
    let total = p.pow(k as u32);
    let mut out = Vec::with_capacity(total as usize);
    for idx in 0..total {
        let mut v = vec![0u32; n];
        let mut t = idx;
        for r in 0..k {
            let c = (t % p) as u32;
            t /= p;
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(gens.row(r)) {
                    *x = ctx.add(*x, ctx.mul(c, y));
                }
            }
        }
        out.push(v);
    }
    out
}

/// Solves A x = rhs over F_p. Returns a particular solution and a basis of
/// the homogeneous solution space, or None when inconsistent.
pub fn solve_affine_fp(a: &Matrix, rhs: &[u32]) -> Option<(Vec<u32>, Vec<Vec<u32>>)> {
    let ctx = a.ctx();
    debug_assert_eq!(ctx.e(), 1);
    let rows = a.rows();
    let cols = a.cols();
    assert_eq!(rhs.len(), rows);

    let mut aug = Matrix::zero(ctx, rows, cols + 1);
    for r in 0..rows {
        for c in 0..cols {
            aug.set(r, c, a.get(r, c));
        }
        aug.set(r, cols, rhs[r]);
    }
    let red = howell_form(&aug);
    let mut particular = vec![0u32; cols];
    for row in red.iter_rows() {
        let pivot = row.iter().position(|&x| x != 0).expect("no zero rows");
        if pivot == cols {
            return None; // 0 = nonzero
        }
        particular[pivot] = row[cols];
    }
    // The particular solution sets free variables to zero; pivots of the
    // reduced system read the rhs column directly (pivot entries are 1 and
    // pivot columns are cleared elsewhere).
    let hom = kernel(a);
    let basis: Vec<Vec<u32>> = hom.gens().iter_rows().map(|r| r.to_vec()).collect();
    debug_assert!(a.apply(&particular).iter().zip(rhs).all(|(x, y)| x == y));
    Some((particular, basis))
}

/// All maximal isotropic subspaces of F_p^2g, as sorted canonical forms.
///
/// Graph parameterization over the splitting X = <e_0..e_{g-1}>,
/// Y = <e_g..e_{2g-1}>: a maximal isotropic W projects onto a subspace
/// P of X, contains U = ann(P) = (W ∩ Y), and between them is the graph
/// of a map P -> Y/U given by a symmetric matrix in the pivot-dual
/// coordinates. Every (P, symmetric matrix) pair yields a distinct W and
/// every W arises once, so no filtering or deduplication is needed.
pub fn enumerate_tp(g: usize, p: u32, cap: u128) -> Result<Vec<Submodule>> {
    if g == 0 || g > 4 {
        return Err(Error::Unsupported(format!(
            "maximal isotropic enumeration supports 1 <= g <= 4, got {g}"
        )));
    }
    let ctx = RingCtx::fp(p)?;
    check_budget(lagrangian_count(g, p as u128), cap)?;
    let space = SymplecticSpace::new(g, ctx);
    let n = 2 * g;

    // All subspaces P of X, as RREF bases in the first g coordinates.
    let mut projections: Vec<Submodule> = Vec::new();
    for m in 0..=g {
        projections.extend(grassmannian_fp(g, m, p)?);
    }

    let chunks: Vec<Vec<Submodule>> = projections
        .par_iter()
        .map(|p_sub| {
            let m = p_sub.num_gens();
            let pivot_cols: Vec<usize> = p_sub.pivots().iter().map(|&(c, _)| c).collect();

            // U = ann(P) inside Y: y with sum_c x[c] * y[g+c] = 0 for all
            // rows x of P.
            let u_basis: Vec<Vec<u32>> = {
                let ann = kernel(p_sub.gens());
                ann.gens()
                    .iter_rows()
                    .map(|r| {
                        let mut v = vec![0u32; n];
                        for (c, &x) in r.iter().enumerate() {
                            v[g + c] = x;
                        }
                        v
                    })
                    .collect()
            };
            debug_assert_eq!(u_basis.len(), g - m);

            let mut out = Vec::new();
            // Symmetric m x m matrices S; row i of the graph part is
            // x_i + sum_j S[i][j] e_{g + pivot_col(j)}.
            let upper = m * (m + 1) / 2;
            let total = (p as u64).pow(upper as u32);
            for idx in 0..total {
                let mut s = vec![vec![0u32; m]; m];
                let mut t = idx;
                for i in 0..m {
                    for j in i..m {
                        let v = (t % p as u64) as u32;
                        t /= p as u64;
                        s[i][j] = v;
                        s[j][i] = v;
                    }
                }
                let mut rows: Vec<Vec<u32>> = Vec::with_capacity(g);
                for i in 0..m {
                    let mut v = vec![0u32; n];
                    for (c, &x) in p_sub.gens().row(i).iter().enumerate() {
                        v[c] = x;
                    }
                    for j in 0..m {
                        v[g + pivot_cols[j]] = s[i][j];
                    }
                    rows.push(v);
                }
                rows.extend(u_basis.iter().cloned());
                let flat: Vec<u32> = rows.iter().flatten().copied().collect();
                let sub = Submodule::canonicalize(&Matrix::from_flat(ctx, g, n, flat));
                debug_assert!(space.is_isotropic(&sub));
                debug_assert_eq!(sub.num_gens(), g);
                out.push(sub);
            }
            out
        })
        .collect();

    let mut out: Vec<Submodule> = chunks.into_iter().flatten().collect();
    out.sort_unstable();
    let expected = lagrangian_count(g, p as u128);
    if out.len() as u128 != expected {
        return Err(Error::invariant(format!(
            "maximal isotropic enumeration produced {} subspaces, closed form predicts {expected}",
            out.len()
        )));
    }
    if !out.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::invariant(
            "maximal isotropic enumeration produced duplicates",
        ));
    }
    Ok(out)
}

/// All isotropic j-subspaces of F_p^2g for j <= g, by extension search:
/// an isotropic U extends by any v in U^perp \ U.
pub fn enumerate_isotropic(g: usize, j: usize, p: u32, cap: u128) -> Result<Vec<Submodule>> {
    let ctx = RingCtx::fp(p)?;
    if j > g {
        return Err(Error::domain(format!(
            "isotropic subspaces of F_p^{} have dimension at most {g}, requested {j}",
            2 * g
        )));
    }
    check_budget(isotropic_count(g, j, p as u128), cap)?;
    let space = SymplecticSpace::new(g, ctx);
    let n = 2 * g;

    let mut level: Vec<Submodule> = vec![Submodule::zero(ctx, n)];
    for _ in 0..j {
        let next: HashSet<Submodule> = level
            .par_iter()
            .map(|u| {
                let perp = space.orthogonal(u);
                let mut found = Vec::new();
                for v in span_vectors_fp(perp.gens()) {
                    if v.iter().all(|&x| x == 0) || u.contains(&v) {
                        continue;
                    }
                    let ext = Matrix::from_flat(ctx, 1, n, v);
                    found.push(Submodule::canonicalize(&u.gens().stack(&ext)));
                }
                found
            })
            .flatten()
            .collect();
        level = next.into_iter().collect();
        level.sort_unstable();
    }
    debug_assert_eq!(level.len() as u128, isotropic_count(g, j, p as u128));
    Ok(level)
}

/// Data for lifting an isotropic mod-p subspace to isotropic Z/p^2
/// submodules of type (Z/p^2)^(g-i) + (Z/p)^2i.
///
/// For W of that type, W2 = pW is an isotropic (g-i)-subspace of
/// pB = F_p^2g, W4 = W[p] = W ∩ pB equals W2^perp, and W is recovered as
/// span{v_k + p t_k} + W4 where p v_k runs over a basis of W2 and the
/// correction classes t_k range over solutions of a linear system.
struct LiftSystem {
    /// complement coordinates representing F_p^2g / W4
    free_cols: Vec<usize>,
    particular: Vec<u32>,
    basis: Vec<Vec<u32>>,
    w4_rows: Vec<Vec<u32>>,
    w2_rows: Vec<Vec<u32>>,
}

fn lift_system(space_fp: &SymplecticSpace, w2: &Submodule) -> Option<LiftSystem> {
    let fp = space_fp.ctx();
    let n = space_fp.dim();
    let k = w2.num_gens();

    let w4 = space_fp.orthogonal(w2);
    if !w4.contains_submodule(w2) {
        return None; // W2 not isotropic
    }
    let pivot_cols: HashSet<usize> = w4.pivots().iter().map(|&(c, _)| c).collect();
    let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    debug_assert_eq!(free_cols.len(), k);

    let w2_rows: Vec<Vec<u32>> = w2.gens().iter_rows().map(|r| r.to_vec()).collect();
    let w4_rows: Vec<Vec<u32>> = w4.gens().iter_rows().map(|r| r.to_vec()).collect();

    // Unknowns x[k][c]: t_k = sum_c x[k][c] e_c. Constraint for a < b:
    //   c0_ab + [t_a, u_b] + [u_a, t_b] = 0 (mod p)
    // where c0_ab = <v_a, v_b>/p over Z/p^2 for the coordinate lifts v.
    let zp2 = RingCtx::zp2(fp.p()).ok()?;
    let space2 = SymplecticSpace::new(space_fp.g(), zp2);
    let nvars = k * k;
    let var = |row: usize, cidx: usize| row * k + cidx;

    let mut rows_a: Vec<Vec<u32>> = Vec::new();
    let mut rhs: Vec<u32> = Vec::new();
    for a in 0..k {
        for bb in (a + 1)..k {
            let mut row = vec![0u32; nvars];
            for (ci, &c) in free_cols.iter().enumerate() {
                let mut e = vec![0u32; n];
                e[c] = 1;
                // [e_c, u_b] x[a][c]
                let coef1 = space_fp.pairing(&e, &w2_rows[bb]);
                row[var(a, ci)] = fp.add(row[var(a, ci)], coef1);
                // [u_a, e_c] x[b][c]
                let coef2 = space_fp.pairing(&w2_rows[a], &e);
                row[var(bb, ci)] = fp.add(row[var(bb, ci)], coef2);
            }
            let va: Vec<u32> = w2_rows[a].clone();
            let vb: Vec<u32> = w2_rows[bb].clone();
            let pairing2 = space2.pairing(&va, &vb);
            debug_assert_eq!(pairing2 % fp.p(), 0, "W2 must be isotropic mod p");
            let c0 = (pairing2 / fp.p()) % fp.p();
            rhs.push(fp.neg(c0));
            rows_a.push(row);
        }
    }

    let (particular, basis) = if rows_a.is_empty() {
        (
            vec![0u32; nvars],
            (0..nvars)
                .map(|i| {
                    let mut v = vec![0u32; nvars];
                    v[i] = 1;
                    v
                })
                .collect(),
        )
    } else {
        let flat: Vec<u32> = rows_a.iter().flatten().copied().collect();
        let sys = Matrix::from_flat(fp, rows_a.len(), nvars, flat);
        solve_affine_fp(&sys, &rhs)?
    };

    Some(LiftSystem {
        free_cols,
        particular,
        basis,
        w4_rows,
        w2_rows,
    })
}

fn build_lift(
    zp2: RingCtx,
    n: usize,
    sys: &LiftSystem,
    x: &[u32],
) -> Submodule {
    let p = zp2.p();
    let k = sys.w2_rows.len();
    let mut rows: Vec<Vec<u32>> = Vec::with_capacity(k + sys.w4_rows.len());
    for (a, u) in sys.w2_rows.iter().enumerate() {
        let mut w: Vec<u32> = u.clone(); // coordinate lift of u (p*w = image of u in pB)
        for (ci, &c) in sys.free_cols.iter().enumerate() {
            let coef = x[a * k + ci];
            if coef != 0 {
                w[c] = zp2.add(w[c], zp2.mul(p, coef));
            }
        }
        rows.push(w);
    }
    for t in &sys.w4_rows {
        rows.push(t.iter().map(|&v| zp2.mul(p, v)).collect());
    }
    let flat: Vec<u32> = rows.iter().flatten().copied().collect();
    Submodule::canonicalize(&Matrix::from_flat(zp2, rows.len(), n, flat))
}

/// All isotropic submodules of (Z/p^2)^2g isomorphic to
/// (Z/p^2)^(g-i) + (Z/p)^2i, as sorted canonical forms.
pub fn enumerate_tpi(g: usize, i: usize, p: u32, cap: u128) -> Result<Vec<Submodule>> {
    if g < 2 || i == 0 || i >= g {
        return Err(Error::domain(format!(
            "type index must satisfy 1 <= i <= g-1; got g={g}, i={i}"
        )));
    }
    let predicted = tpi_count(g, i, p as u128);
    check_budget(predicted, cap)?;
    let fp = RingCtx::fp(p)?;
    let zp2 = RingCtx::zp2(p)?;
    let space_fp = SymplecticSpace::new(g, fp);
    let n = 2 * g;
    let expected_lifts = (p as u128).pow(b(g - i) as u32);

    let planes = enumerate_isotropic(g, g - i, p, cap)?;
    let chunks: Vec<Vec<Submodule>> = planes
        .par_iter()
        .map(|w2| {
            let sys = lift_system(&space_fp, w2).expect("enumerated W2 is isotropic");
            let combos = span_vectors_fp(&{
                let nvars = sys.particular.len();
                let flat: Vec<u32> = sys.basis.iter().flatten().copied().collect();
                Matrix::from_flat(fp, sys.basis.len(), nvars, flat)
            });
            debug_assert_eq!(combos.len() as u128, expected_lifts);
            combos
                .into_iter()
                .map(|h| {
                    let x: Vec<u32> = sys
                        .particular
                        .iter()
                        .zip(&h)
                        .map(|(&a, &b)| fp.add(a, b))
                        .collect();
                    build_lift(zp2, n, &sys, &x)
                })
                .collect()
        })
        .collect();

    let mut out: Vec<Submodule> = chunks.into_iter().flatten().collect();
    out.sort_unstable();
    debug_assert_eq!(out.len() as u128, predicted);
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]), "lifts are distinct");
    Ok(out)
}

/// Number of type-(g, i) isotropic submodules over a fixed torsion part
/// W4 = W ∩ pB. The admissible W4 are the p-torsion submodules whose
/// mod-p image is the orthogonal complement of an isotropic subspace.
pub fn lift_count(w4: &Submodule, g: usize) -> Result<u128> {
    let ctx = w4.ctx();
    if ctx.e() != 2 {
        return Err(Error::domain("W4 must live over Z/p^2"));
    }
    let n = 2 * g;
    if w4.ambient_rank() != n {
        return Err(Error::domain("W4 has the wrong ambient rank"));
    }
    let t = w4.module_type();
    if t.b != 0 {
        return Err(Error::domain("W4 must be p-torsion"));
    }
    if t.a <= g {
        return Err(Error::domain(format!(
            "W4 must have rank g+i with i >= 1; got rank {}",
            t.a
        )));
    }
    let i = t.a - g;
    if i >= g {
        return Err(Error::domain("W4 rank implies i >= g"));
    }
    let p = ctx.p();
    let fp = ctx.residue_field();
    let space_fp = SymplecticSpace::new(g, fp);

    // View W4 inside pB as an F_p-subspace: rows are p * (reduced rows).
    let rows: Vec<Vec<u32>> = w4
        .gens()
        .iter_rows()
        .map(|r| {
            r.iter()
                .map(|&x| {
                    debug_assert_eq!(x % p, 0);
                    (x / p) % p
                })
                .collect()
        })
        .collect();
    let flat: Vec<u32> = rows.iter().flatten().copied().collect();
    let w4_bar = Submodule::canonicalize(&Matrix::from_flat(fp, rows.len(), n, flat));
    let w2_bar = space_fp.orthogonal(&w4_bar);
    if !w4_bar.contains_submodule(&w2_bar) {
        return Err(Error::domain(
            "W4 is not coisotropic: its orthogonal is not contained in it",
        ));
    }
    if w2_bar.module_type().a != g - i {
        return Err(Error::domain("W4 orthogonal has unexpected dimension"));
    }
    let sys = lift_system(&space_fp, &w2_bar)
        .ok_or_else(|| Error::domain("no isotropic lift exists over this W4"))?;
    debug_assert_eq!(sys.w4_rows.len(), g + i);
    Ok((p as u128).pow(sys.basis.len() as u32))
}

/// All j-dimensional subspaces of F_p^m (reduced echelon cell fill).
pub fn grassmannian_fp(m: usize, j: usize, p: u32) -> Result<Vec<Submodule>> {
    let ctx = RingCtx::fp(p)?;
    if j > m {
        return Ok(Vec::new());
    }
    if j == 0 {
        return Ok(vec![Submodule::zero(ctx, m)]);
    }
    let mut out = Vec::new();
    // iterate pivot sets (strictly increasing j-subsets of 0..m)
    let mut pivots: Vec<usize> = (0..j).collect();
    loop {
        let pivot_set: HashSet<usize> = pivots.iter().copied().collect();
        let mut free_positions: Vec<(usize, usize)> = Vec::new();
        for (row, &pc) in pivots.iter().enumerate() {
            for c in (pc + 1)..m {
                if !pivot_set.contains(&c) {
                    free_positions.push((row, c));
                }
            }
        }
        let total = (p as u64).pow(free_positions.len() as u32);
        for idx in 0..total {
            let mut mat = Matrix::zero(ctx, j, m);
            for (row, &pc) in pivots.iter().enumerate() {
                mat.set(row, pc, 1);
            }
            let mut t = idx;
            for &(row, c) in &free_positions {
                mat.set(row, c, (t % p as u64) as u32);
                t /= p as u64;
            }
            let sub = Submodule::canonicalize(&mat);
            debug_assert_eq!(sub.gens(), &mat);
            out.push(sub);
        }
        // next combination
        let mut k = j;
        loop {
            if k == 0 {
                out.sort_unstable();
                debug_assert_eq!(out.len() as u128, gaussian_binomial(m, j, p as u128));
                return Ok(out);
            }
            k -= 1;
            if pivots[k] + 1 <= m - (j - k) {
                pivots[k] += 1;
                for l in (k + 1)..j {
                    pivots[l] = pivots[l - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Every submodule of the free module (Z/p^e)^m, by closure under
/// single-vector extensions. Intended for small coefficient modules
/// (m <= 3) backing generalized Grassmannian point sets.
pub fn all_submodules(ctx: RingCtx, m: usize) -> Vec<Submodule> {
    let modulus = ctx.modulus() as u64;
    let total = modulus.pow(m as u32);
    let vectors: Vec<Vec<u32>> = (0..total)
        .map(|idx| {
            let mut v = Vec::with_capacity(m);
            let mut t = idx;
            for _ in 0..m {
                v.push((t % modulus) as u32);
                t /= modulus;
            }
            v
        })
        .collect();

    let mut seen: HashSet<Submodule> = HashSet::new();
    let mut frontier = vec![Submodule::zero(ctx, m)];
    seen.insert(frontier[0].clone());
    while let Some(u) = frontier.pop() {
        for v in &vectors {
            if u.contains(v) {
                continue;
            }
            let ext = Matrix::from_flat(ctx, 1, m, v.clone());
            let bigger = Submodule::canonicalize(&u.gens().stack(&ext));
            if seen.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    let mut out: Vec<Submodule> = seen.into_iter().collect();
    out.sort_unstable();
    out
}
