use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::ring::RingCtx;

/// Abstract isomorphism type of a finite module over Z/p^2:
/// `(Z/p)^a ⊕ (Z/p^2)^b`. Over F_p the type is always `(rank, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModuleType {
    pub a: usize,
    pub b: usize,
}

impl ModuleType {
    /// log_p of the cardinality: |W| = p^(a + 2b).
    pub fn log_size(&self) -> usize {
        self.a + 2 * self.b
    }
}

/// A submodule of (Z/p^e)^n held in canonical form.
///
/// The generator matrix is the Howell normal form of any generating set:
/// pivots are powers of p at strictly increasing columns, entries above a
/// pivot p^k are reduced mod p^k, and the row list is closed under
/// multiplication by p (annihilator rows included). Two generating sets
/// span the same submodule iff their canonical forms are identical, so
/// submodules can be compared, hashed and sorted by their `gens` alone.
/// For e = 1 this is the reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Submodule {
    gens: Matrix,
}

/// Howell normal form of a matrix over Z/p^e (e = 1 or 2).
pub fn howell_form(mat: &Matrix) -> Matrix {
    let ctx = mat.ctx();
    let cols = mat.cols();
    let e = ctx.e();

    let mut pool: Vec<Vec<u32>> = mat
        .iter_rows()
        .filter(|r| r.iter().any(|&x| x != 0))
        .map(|r| r.to_vec())
        .collect();
    let mut out: Vec<(usize, u8, Vec<u32>)> = Vec::new(); // (pivot col, pivot valuation, row)

    for col in 0..cols {
        // Pick the row whose entry at `col` has minimal valuation.
        let mut best: Option<(usize, u8)> = None;
        for (i, row) in pool.iter().enumerate() {
            if row[col] != 0 {
                let v = ctx.valuation(row[col]);
                if best.map_or(true, |(_, bv)| v < bv) {
                    best = Some((i, v));
                }
            }
        }
        let Some((idx, val)) = best else { continue };
        let mut pivot_row = pool.swap_remove(idx);

        // Normalize so the pivot entry is exactly p^val.
        let (_, unit) = ctx.val_unit(pivot_row[col]);
        let uinv = ctx.inv(unit).expect("unit part is invertible");
        for x in pivot_row.iter_mut() {
            *x = ctx.mul(*x, uinv);
        }
        debug_assert_eq!(pivot_row[col], ctx.pow_p(val));

        // Eliminate the column from the remaining pool rows.
        let pk = ctx.pow_p(val);
        for row in pool.iter_mut() {
            if row[col] != 0 {
                debug_assert!(ctx.valuation(row[col]) >= val);
                let q = row[col] / pk;
                for (x, &pv) in row.iter_mut().zip(pivot_row.iter()) {
                    *x = ctx.sub(*x, ctx.mul(q, pv));
                }
                debug_assert_eq!(row[col], 0);
            }
        }

        // Keep the span closed under multiplication by p: the annihilator
        // multiple p^(e-val) * row has support strictly to the right.
        if val > 0 && val < e {
            let mult = ctx.pow_p(e - val);
            let ann: Vec<u32> = pivot_row.iter().map(|&x| ctx.mul(x, mult)).collect();
            if ann.iter().any(|&x| x != 0) {
                pool.push(ann);
            }
        }

        out.push((col, val, pivot_row));
    }
    debug_assert!(pool.iter().all(|r| r.iter().all(|&x| x == 0)));

    // Reduce entries above each pivot mod p^val.
    for j in 0..out.len() {
        let (pc, pv, _) = out[j];
        let pk = ctx.pow_p(pv);
        for i in 0..j {
            let cur = out[i].2[pc];
            let q = cur / pk;
            if q != 0 {
                let pivot_row = out[j].2.clone();
                for (x, &pvx) in out[i].2.iter_mut().zip(pivot_row.iter()) {
                    *x = ctx.sub(*x, ctx.mul(q, pvx));
                }
            }
            debug_assert!(out[i].2[pc] < pk);
        }
    }

    let rows: Vec<Vec<u32>> = out.into_iter().map(|(_, _, r)| r).collect();
    let flat: Vec<u32> = rows.iter().flatten().copied().collect();
    Matrix::from_flat(ctx, rows.len(), cols, flat)
}

impl Submodule {
    /// Canonicalizes a generating set. Zero rows are allowed; the empty
    /// span is the zero submodule.
    pub fn canonicalize(gens: &Matrix) -> Submodule {
        Submodule {
            gens: howell_form(gens),
        }
    }

    pub fn zero(ctx: RingCtx, ambient: usize) -> Submodule {
        Submodule {
            gens: Matrix::zero(ctx, 0, ambient),
        }
    }

    pub fn full(ctx: RingCtx, ambient: usize) -> Submodule {
        Submodule::canonicalize(&Matrix::identity(ctx, ambient))
    }

    pub fn from_rows(ctx: RingCtx, rows: &[Vec<i64>], ambient: usize) -> Submodule {
        if rows.is_empty() {
            return Submodule::zero(ctx, ambient);
        }
        assert!(rows.iter().all(|r| r.len() == ambient));
        Submodule::canonicalize(&Matrix::from_rows(ctx, rows))
    }

    pub fn ctx(&self) -> RingCtx {
        self.gens.ctx()
    }

    pub fn ambient_rank(&self) -> usize {
        self.gens.cols()
    }

    /// Canonical generator matrix (Howell form, no zero rows).
    pub fn gens(&self) -> &Matrix {
        &self.gens
    }

    pub fn num_gens(&self) -> usize {
        self.gens.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.rows() == 0
    }

    /// Pivot (column, valuation) pairs of the canonical form.
    pub fn pivots(&self) -> Vec<(usize, u8)> {
        let ctx = self.ctx();
        self.gens
            .iter_rows()
            .map(|r| {
                let col = r.iter().position(|&x| x != 0).expect("no zero rows");
                (col, ctx.valuation(r[col]))
            })
            .collect()
    }

    /// log_p of the cardinality of the submodule.
    pub fn log_size(&self) -> usize {
        let e = self.ctx().e() as usize;
        self.pivots().iter().map(|&(_, v)| e - v as usize).sum()
    }

    /// Membership test by reduction against the canonical rows.
    pub fn contains(&self, v: &[u32]) -> bool {
        let ctx = self.ctx();
        assert_eq!(v.len(), self.ambient_rank());
        let mut v: Vec<u32> = v.iter().map(|&x| ctx.reduce_u64(x as u64)).collect();
        for (row, (col, val)) in self.gens.iter_rows().zip(self.pivots()) {
            if v[col] == 0 {
                continue;
            }
            if ctx.valuation(v[col]) < val {
                return false;
            }
            let q = v[col] / ctx.pow_p(val);
            for (x, &r) in v.iter_mut().zip(row.iter()) {
                *x = ctx.sub(*x, ctx.mul(q, r));
            }
        }
        v.iter().all(|&x| x == 0)
    }

    pub fn contains_submodule(&self, other: &Submodule) -> bool {
        other.gens.iter_rows().all(|r| self.contains(r))
    }

    /// Abstract module type (a, b) with |W| = p^(a+2b).
    pub fn module_type(&self) -> ModuleType {
        let s = self.log_size();
        if self.ctx().e() == 1 {
            return ModuleType { a: s, b: 0 };
        }
        let b = self.mul_p().log_size();
        ModuleType { a: s - 2 * b, b }
    }

    /// The submodule p*W.
    pub fn mul_p(&self) -> Submodule {
        Submodule::canonicalize(&self.gens.scale(self.ctx().p()))
    }

    /// Sum of submodules (join).
    pub fn sum(&self, other: &Submodule) -> Submodule {
        Submodule::canonicalize(&self.gens.stack(other.gens()))
    }

    /// Annihilator with respect to the dot product: {v : w . v = 0 for all w}.
    pub fn annihilator(&self) -> Submodule {
        kernel(&self.gens)
    }

    /// Intersection via the double-annihilator identity
    /// (W ∩ D)° = W° + D°, valid over Z/p^e.
    pub fn intersect(&self, other: &Submodule) -> Submodule {
        assert_eq!(self.ambient_rank(), other.ambient_rank());
        let wa = self.annihilator();
        let da = other.annihilator();
        wa.sum(&da).annihilator()
    }

    /// Image under reduction mod p, canonicalized over F_p.
    pub fn reduce_mod_p(&self) -> Submodule {
        Submodule::canonicalize(&self.gens.reduce_mod_p())
    }

    /// Compact render of the canonical generators, for reports.
    pub fn render(&self) -> String {
        let rows: Vec<String> = self
            .gens
            .iter_rows()
            .map(|r| {
                let xs: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", xs.join(","))
            })
            .collect();
        format!("<{}>", rows.join(" "))
    }
}

/// Solution space {v : M v = 0} over Z/p^e, as a canonical submodule.
///
/// For e = 1 this is the plain nullspace. For e = 2 it is assembled from
/// F_p data: unit-order solutions are lifts v0 + p*v1 of mod-p kernel
/// vectors whose defect (M v0)/p lands in the mod-p column space, and
/// p-torsion solutions are p times arbitrary mod-p kernel vectors.
pub fn kernel(mat: &Matrix) -> Submodule {
    let ctx = mat.ctx();
    let n = mat.cols();
    if ctx.e() == 1 {
        return nullspace_fp(mat);
    }

    let fp = ctx.residue_field();
    let mbar = mat.reduce_mod_p();
    let k0 = nullspace_fp(&mbar); // basis of ker(M mod p)
    let k0_rows: Vec<Vec<u32>> = k0.gens().iter_rows().map(|r| r.to_vec()).collect();

    // Defect vectors w_i = (M v0_i)/p mod p for coordinate lifts v0_i.
    let mut defects: Vec<Vec<u32>> = Vec::new();
    for v0 in &k0_rows {
        let mv = mat.apply(v0);
        let w: Vec<u32> = mv
            .iter()
            .map(|&x| {
                debug_assert_eq!(x % ctx.p(), 0);
                (x / ctx.p()) % ctx.p()
            })
            .collect();
        defects.push(w);
    }

    // Solve W c + Mbar u = 0 over F_p for (c, u); the c-part tells which
    // combinations of kernel vectors lift, the u-part completes the lift.
    let m_rows = mat.rows();
    let k = k0_rows.len();
    let combined = if k > 0 {
        let mut comb = Matrix::zero(fp, m_rows, k + n);
        for r in 0..m_rows {
            for (i, w) in defects.iter().enumerate() {
                comb.set(r, i, w[r]);
            }
            for c in 0..n {
                comb.set(r, k + c, mbar.get(r, c));
            }
        }
        nullspace_fp(&comb)
    } else {
        Submodule::zero(fp, n)
    };

    let mut gens_rows: Vec<Vec<u32>> = Vec::new();
    if k > 0 {
        for sol in combined.gens().iter_rows() {
            let c_part = &sol[..k];
            if c_part.iter().all(|&x| x == 0) {
                continue;
            }
            let u_part = &sol[k..];
            // v = sum c_i * v0_i + p * u
            let mut v = vec![0u32; n];
            for (ci, v0) in c_part.iter().zip(&k0_rows) {
                if *ci != 0 {
                    for (x, &y) in v.iter_mut().zip(v0.iter()) {
                        *x = ctx.add(*x, ctx.mul(*ci, y));
                    }
                }
            }
            for (x, &u) in v.iter_mut().zip(u_part.iter()) {
                *x = ctx.add(*x, ctx.mul(ctx.p(), u));
            }
            debug_assert!(mat.apply(&v).iter().all(|&x| x == 0));
            gens_rows.push(v);
        }
    }
    // p-torsion solutions.
    for v0 in &k0_rows {
        gens_rows.push(v0.iter().map(|&x| ctx.mul(ctx.p(), x)).collect());
    }

    if gens_rows.is_empty() {
        return Submodule::zero(ctx, n);
    }
    let flat: Vec<u32> = gens_rows.iter().flatten().copied().collect();
    Submodule::canonicalize(&Matrix::from_flat(ctx, gens_rows.len(), n, flat))
}

/// Nullspace over F_p via reduced row echelon form.
fn nullspace_fp(mat: &Matrix) -> Submodule {
    let ctx = mat.ctx();
    debug_assert_eq!(ctx.e(), 1);
    let n = mat.cols();
    let rref = howell_form(mat);
    let pivots: Vec<usize> = rref
        .iter_rows()
        .map(|r| r.iter().position(|&x| x != 0).expect("no zero rows"))
        .collect();
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis: Vec<Vec<u32>> = Vec::new();
    for free in 0..n {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![0u32; n];
        v[free] = 1;
        for (row, &pc) in rref.iter_rows().zip(&pivots) {
            v[pc] = ctx.neg(row[free]);
        }
        basis.push(v);
    }
    if basis.is_empty() {
        return Submodule::zero(ctx, n);
    }
    let flat: Vec<u32> = basis.iter().flatten().copied().collect();
    Submodule::canonicalize(&Matrix::from_flat(ctx, basis.len(), n, flat))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4() -> RingCtx {
        RingCtx::zp2(2).unwrap()
    }

    /// Brute-force span of a generator matrix, as a sorted element list.
    /// Test oracle only.
    pub fn brute_span(gens: &Matrix) -> Vec<Vec<u32>> {
        let ctx = gens.ctx();
        let m = ctx.modulus();
        let k = gens.rows();
        let n = gens.cols();
        let mut out: std::collections::BTreeSet<Vec<u32>> = std::collections::BTreeSet::new();
        let total = (m as u64).pow(k as u32);
        for idx in 0..total {
            let mut coeffs = Vec::with_capacity(k);
            let mut t = idx;
            for _ in 0..k {
                coeffs.push((t % m as u64) as u32);
                t /= m as u64;
            }
            let mut v = vec![0u32; n];
            for (c, row) in coeffs.iter().zip(gens.iter_rows()) {
                for (x, &y) in v.iter_mut().zip(row.iter()) {
                    *x = ctx.add(*x, ctx.mul(*c, y));
                }
            }
            out.insert(v);
        }
        out.into_iter().collect()
    }

    #[test]
    fn identity_case_full_module() {
        let s = Submodule::from_rows(z4(), &[vec![1, 0], vec![0, 1]], 2);
        assert_eq!(s, Submodule::full(z4(), 2));
        assert_eq!(s.log_size(), 4);
    }

    #[test]
    fn duplicate_generators_collapse() {
        let a = Submodule::from_rows(z4(), &[vec![2, 0]], 2);
        let b = Submodule::from_rows(z4(), &[vec![2, 0], vec![2, 0]], 2);
        assert_eq!(a, b);
    }

    #[test]
    fn all_single_generator_submodules_of_z4_squared() {
        // Canonical forms are pairwise distinct iff spans differ.
        let ctx = z4();
        let mut seen: Vec<(Submodule, Vec<Vec<u32>>)> = Vec::new();
        for x in 0..4i64 {
            for y in 0..4i64 {
                let m = Matrix::from_rows(ctx, &[vec![x, y]]);
                let canon = Submodule::canonicalize(&m);
                let span = brute_span(&m);
                seen.push((canon, span));
            }
        }
        for i in 0..seen.len() {
            for j in 0..seen.len() {
                assert_eq!(
                    seen[i].0 == seen[j].0,
                    seen[i].1 == seen[j].1,
                    "canonical form equality must match span equality"
                );
            }
        }
    }

    #[test]
    fn membership_agrees_with_exhaustive_span() {
        let ctx = z4();
        let m = Matrix::from_rows(ctx, &[vec![2, 1, 0], vec![0, 2, 2]]);
        let s = Submodule::canonicalize(&m);
        let span = brute_span(&m);
        let mut count = 0usize;
        for a in 0..4u32 {
            for b in 0..4u32 {
                for c in 0..4u32 {
                    let v = vec![a, b, c];
                    let inside = span.binary_search(&v).is_ok();
                    assert_eq!(s.contains(&v), inside);
                    if inside {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, 1usize << s.log_size());
    }

    #[test]
    fn module_type_examples() {
        let ctx = z4();
        let zero = Submodule::zero(ctx, 2);
        assert_eq!(zero.module_type(), ModuleType { a: 0, b: 0 });

        let torsion_line = Submodule::from_rows(ctx, &[vec![2, 0]], 2);
        assert_eq!(torsion_line.module_type(), ModuleType { a: 1, b: 0 });

        let mixed = Submodule::from_rows(ctx, &[vec![1, 0], vec![0, 2]], 2);
        assert_eq!(mixed.module_type(), ModuleType { a: 1, b: 1 });
        assert_eq!(mixed.log_size(), 3); // |W| = 8
    }

    #[test]
    fn howell_handles_non_unit_pivot_span() {
        // span{(2,1)} over Z/4 contains (0,2); the canonical form must
        // expose the second pivot.
        let ctx = z4();
        let s = Submodule::from_rows(ctx, &[vec![2, 1]], 2);
        assert_eq!(s.num_gens(), 2);
        assert!(s.contains(&[0, 2]));
        assert_eq!(s.log_size(), 2);
    }

    #[test]
    fn kernel_matches_brute_force() {
        for p in [2u32, 3] {
            for e in [1u8, 2] {
                let ctx = RingCtx::new(p, e).unwrap();
                let m = Matrix::from_rows(
                    ctx,
                    &[vec![1, 2, 3, 0], vec![0, p as i64, 1, 1], vec![1, 2, 3, 0]],
                );
                let ker = kernel(&m);
                let modulus = ctx.modulus();
                let mut expected = 0usize;
                for idx in 0..(modulus as u64).pow(4) {
                    let mut v = Vec::with_capacity(4);
                    let mut t = idx;
                    for _ in 0..4 {
                        v.push((t % modulus as u64) as u32);
                        t /= modulus as u64;
                    }
                    let is_sol = m.apply(&v).iter().all(|&x| x == 0);
                    assert_eq!(ker.contains(&v), is_sol, "p={p} e={e} v={v:?}");
                    if is_sol {
                        expected += 1;
                    }
                }
                let size = (p as usize).pow(ker.log_size() as u32);
                assert_eq!(size, expected);
            }
        }
    }

    #[test]
    fn intersection_matches_brute_force() {
        let ctx = z4();
        let w = Submodule::from_rows(ctx, &[vec![1, 0, 2], vec![0, 2, 0]], 3);
        let d = Submodule::from_rows(ctx, &[vec![1, 2, 0], vec![0, 0, 1]], 3);
        let i = w.intersect(&d);
        for a in 0..4u32 {
            for b in 0..4u32 {
                for c in 0..4u32 {
                    let v = vec![a, b, c];
                    assert_eq!(i.contains(&v), w.contains(&v) && d.contains(&v));
                }
            }
        }
    }

    #[test]
    fn reduction_commutes_with_canonicalization() {
        let ctx = RingCtx::zp2(3).unwrap();
        let m = Matrix::from_rows(ctx, &[vec![3, 4, 1], vec![6, 2, 5]]);
        let a = Submodule::canonicalize(&m).reduce_mod_p();
        let b = Submodule::canonicalize(&m.reduce_mod_p());
        assert_eq!(a, b);
    }
}
