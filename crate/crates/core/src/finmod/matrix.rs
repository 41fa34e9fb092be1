use serde::{Deserialize, Serialize};

use super::ring::RingCtx;

/// A dense matrix over Z/p^e, row-major, entries always reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Matrix {
    ctx: RingCtx,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl Matrix {
    pub fn zero(ctx: RingCtx, rows: usize, cols: usize) -> Self {
        Matrix {
            ctx,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(ctx: RingCtx, n: usize) -> Self {
        let mut m = Matrix::zero(ctx, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn scalar(ctx: RingCtx, n: usize, c: u32) -> Self {
        let mut m = Matrix::zero(ctx, n, n);
        let c = ctx.reduce_u64(c as u64);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    /// Builds a matrix from integer rows, reducing entries mod p^e.
    pub fn from_rows(ctx: RingCtx, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&x| ctx.reduce_i64(x)));
        }
        Matrix {
            ctx,
            rows: r,
            cols: c,
            entries,
        }
    }

    pub fn from_flat(ctx: RingCtx, rows: usize, cols: usize, entries: Vec<u32>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        let entries = entries
            .into_iter()
            .map(|x| ctx.reduce_u64(x as u64))
            .collect();
        Matrix {
            ctx,
            rows,
            cols,
            entries,
        }
    }

    pub fn ctx(&self) -> RingCtx {
        self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.entries[r * self.cols + c] = self.ctx.reduce_u64(v as u64);
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<u32> {
        self.row(r).to_vec()
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[u32]> {
        self.entries.chunks(self.cols)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zero(self.ctx, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(c, r, self.get(r, c));
            }
        }
        m
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        assert_eq!(self.ctx, other.ctx);
        let mut m = Matrix::zero(self.ctx, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = self.ctx.add(m.get(r, c), self.ctx.mul(a, other.get(k, c)));
                    m.entries[r * other.cols + c] = v;
                }
            }
        }
        m
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| self.ctx.add(a, b))
            .collect();
        Matrix {
            ctx: self.ctx,
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| self.ctx.sub(a, b))
            .collect();
        Matrix {
            ctx: self.ctx,
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let c = self.ctx.reduce_u64(c as u64);
        let entries = self.entries.iter().map(|&a| self.ctx.mul(a, c)).collect();
        Matrix {
            ctx: self.ctx,
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Vertical stack; both matrices must share the context and column count.
    pub fn stack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.ctx, other.ctx);
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Matrix {
            ctx: self.ctx,
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Applies this matrix to a column vector.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u64;
                for c in 0..self.cols {
                    acc += self.get(r, c) as u64 * v[c] as u64;
                }
                self.ctx.reduce_u64(acc)
            })
            .collect()
    }

    /// Entry-wise reduction to the residue field (identity when e = 1).
    pub fn reduce_mod_p(&self) -> Matrix {
        let fp = self.ctx.residue_field();
        let entries = self
            .entries
            .iter()
            .map(|&x| x % self.ctx.p())
            .collect();
        Matrix {
            ctx: fp,
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Reinterprets an F_p matrix in Z/p^2 (entries unchanged).
    pub fn lift_to(&self, ctx: RingCtx) -> Matrix {
        assert_eq!(self.ctx.p(), ctx.p());
        Matrix {
            ctx,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.clone(),
        }
    }
}

impl std::fmt::Display for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in 0..self.rows {
            writeln!(f, "{:?}", self.row(r))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_is_associative() {
        let ctx = RingCtx::zp2(3).unwrap();
        let a = Matrix::from_rows(ctx, &[vec![1, 2], vec![3, 4]]);
        let b = Matrix::from_rows(ctx, &[vec![5, 6], vec![7, 8]]);
        let c = Matrix::from_rows(ctx, &[vec![2, 0], vec![1, 1]]);
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn reduction_mod_p_is_a_ring_hom() {
        let ctx = RingCtx::zp2(3).unwrap();
        let a = Matrix::from_rows(ctx, &[vec![4, 7], vec![8, 2]]);
        let b = Matrix::from_rows(ctx, &[vec![3, 1], vec![5, 6]]);
        assert_eq!(
            a.mul(&b).reduce_mod_p(),
            a.reduce_mod_p().mul(&b.reduce_mod_p())
        );
        assert_eq!(
            a.add(&b).reduce_mod_p(),
            a.reduce_mod_p().add(&b.reduce_mod_p())
        );
    }
}
