//! Projective points of PG(m,q) and exact matrix algebra over GF(q):
//! rank, reduced row-echelon form, right kernels, hyperplane spans, incidence.
//!
//! Points and hyperplane duals are stored normalized (first nonzero coordinate
//! equal to 1), so equality is plain coordinate equality. Elimination pivots on
//! the first nonzero entry in column order with rows in given order; over an
//! exact field pivot choice only affects determinism, not correctness.

use crate::error::{Error, Result};
use crate::field::{Fe, Field};

/// A point of PG(m,q): m+1 coordinates, not all zero, normalized.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    pub coords: Vec<Fe>,
}

/// A hyperplane of PG(m,q) as its dual coefficient vector, normalized.
/// Represents sum_i coords[i] * X_i = 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualVector {
    pub coords: Vec<Fe>,
}

/// Scale a coordinate vector so its first nonzero entry is 1.
pub fn normalize_coords(field: &Field, v: &[Fe]) -> Result<Vec<Fe>> {
    let lead = v.iter().position(|&x| !field.is_zero(x)).ok_or(Error::ZeroVector)?;
    let inv = field.inv(v[lead])?;
    Ok(v.iter().map(|&x| field.mul(x, inv)).collect())
}

pub fn normalize(field: &Field, v: &[Fe]) -> Result<ProjPoint> {
    Ok(ProjPoint { coords: normalize_coords(field, v)? })
}

pub fn normalize_dual(field: &Field, v: &[Fe]) -> Result<DualVector> {
    Ok(DualVector { coords: normalize_coords(field, v)? })
}

/// True iff the point lies on the hyperplane; scale-invariant in both arguments.
pub fn incident(field: &Field, h: &DualVector, p: &ProjPoint) -> bool {
    debug_assert_eq!(h.coords.len(), p.coords.len());
    field.is_zero(field.dot(&h.coords, &p.coords))
}

/// PG(m,q) with a fixed enumeration order: points sorted lexicographically by
/// their normalized coordinate encodings. Index arithmetic supports splitting
/// scans into contiguous ranges.
#[derive(Clone, Debug)]
pub struct PgSpace {
    field: Field,
    dim: usize,
    /// counts[k] = |PG(k,q)| for k <= dim
    counts: Vec<u64>,
}

impl PgSpace {
    pub fn new(field: Field, dim: usize) -> PgSpace {
        let q = field.q() as u64;
        // counts[k] = 1 + q + ... + q^k
        let mut counts = Vec::with_capacity(dim + 1);
        let mut acc = 0u64;
        let mut qpow = 1u64;
        for _ in 0..=dim {
            acc += qpow;
            counts.push(acc);
            qpow = qpow.checked_mul(q).expect("PG size overflow");
        }
        PgSpace { field, dim, counts }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of points, (q^(m+1) - 1)/(q - 1).
    pub fn len(&self) -> u64 {
        self.counts[self.dim]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Write the normalized coordinates of the idx-th point into `out`
    /// (length dim+1) without allocating.
    pub fn point_at_into(&self, idx: u64, out: &mut [Fe]) {
        debug_assert_eq!(out.len(), self.dim + 1);
        debug_assert!(idx < self.len());
        let q = self.field.q() as u64;
        let mut pos = 0usize;
        let mut d = self.dim;
        loop {
            if d == 0 {
                out[pos] = self.field.one();
                return;
            }
            let sub = self.counts[d - 1];
            if idx < sub {
                out[pos] = self.field.zero();
                pos += 1;
                d -= 1;
            } else {
                out[pos] = self.field.one();
                // remaining d coordinates: big-endian base-q digits, so the
                // last coordinate varies fastest
                let mut rest = idx - sub;
                for j in (0..d).rev() {
                    out[pos + 1 + j] = self.field.decode((rest % q) as u32).expect("digit < q");
                    rest /= q;
                }
                return;
            }
        }
    }

    pub fn point_at(&self, idx: u64) -> ProjPoint {
        let mut coords = vec![self.field.zero(); self.dim + 1];
        self.point_at_into(idx, &mut coords);
        ProjPoint { coords }
    }

    /// Inverse of `point_at` for a normalized point.
    pub fn index_of(&self, p: &ProjPoint) -> u64 {
        debug_assert_eq!(p.coords.len(), self.dim + 1);
        let q = self.field.q() as u64;
        let mut idx = 0u64;
        let mut pos = 0usize;
        let mut d = self.dim;
        loop {
            let c = p.coords[pos];
            if self.field.is_zero(c) {
                debug_assert!(d > 0, "zero vector is not a point");
                pos += 1;
                d -= 1;
                continue;
            }
            debug_assert_eq!(c, self.field.one(), "point must be normalized");
            if d == 0 {
                return idx;
            }
            idx += self.counts[d - 1];
            let mut value = 0u64;
            for j in 1..=d {
                value = value * q + self.field.encode(p.coords[pos + j]) as u64;
            }
            return idx + value;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = ProjPoint> + '_ {
        (0..self.len()).map(move |i| self.point_at(i))
    }
}

/// Dense matrix over GF(q), row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixGF {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Fe>,
}

/// Result of reduction: the RREF itself, its pivot columns, and the row-operation
/// matrix R with rref = R * original (R is rows x rows, invertible).
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: MatrixGF,
    pub pivots: Vec<usize>,
    pub basis_change: MatrixGF,
}

impl MatrixGF {
    pub fn new(rows: usize, cols: usize, data: Vec<Fe>) -> MatrixGF {
        assert_eq!(rows * cols, data.len());
        MatrixGF { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> MatrixGF {
        MatrixGF { rows, cols, data: vec![Fe::default(); rows * cols] }
    }

    pub fn identity(n: usize, field: &Field) -> MatrixGF {
        let mut m = MatrixGF::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Fe>]) -> MatrixGF {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend_from_slice(row);
        }
        MatrixGF { rows: r, cols: c, data }
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Fe> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Stack another matrix below this one (same column count).
    pub fn stacked(&self, other: &MatrixGF) -> MatrixGF {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        MatrixGF { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Row vector times matrix: v * M.
    pub fn row_vec_mul(&self, field: &Field, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![field.zero(); self.cols];
        for (i, &vi) in v.iter().enumerate() {
            if field.is_zero(vi) {
                continue;
            }
            for j in 0..self.cols {
                out[j] = field.add(out[j], field.mul(vi, self[(i, j)]));
            }
        }
        out
    }

    /// Matrix times column vector: M * v.
    pub fn mat_vec_mul(&self, field: &Field, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| field.dot(self.row(i), v)).collect()
    }

    /// Exact rank via Gaussian elimination.
    pub fn rank(&self, field: &Field) -> usize {
        let mut m = self.clone();
        let mut r = 0usize;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| !field.is_zero(m[(i, col)])) else {
                continue;
            };
            m.swap_rows(r, piv);
            let inv = field.inv(m[(r, col)]).expect("pivot nonzero");
            for j in col..m.cols {
                m[(r, j)] = field.mul(m[(r, j)], inv);
            }
            for i in r + 1..m.rows {
                let f = m[(i, col)];
                if field.is_zero(f) {
                    continue;
                }
                for j in col..m.cols {
                    let s = field.mul(f, m[(r, j)]);
                    m[(i, j)] = field.sub(m[(i, j)], s);
                }
            }
            r += 1;
        }
        r
    }

    /// Reduced row-echelon form with pivot record and basis-change matrix.
    pub fn rref(&self, field: &Field) -> Rref {
        let mut m = self.clone();
        let mut ops = MatrixGF::identity(self.rows, field);
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| !field.is_zero(m[(i, col)])) else {
                continue;
            };
            m.swap_rows(r, piv);
            ops.swap_rows(r, piv);
            let inv = field.inv(m[(r, col)]).expect("pivot nonzero");
            for j in 0..m.cols {
                m[(r, j)] = field.mul(m[(r, j)], inv);
            }
            for j in 0..ops.cols {
                ops[(r, j)] = field.mul(ops[(r, j)], inv);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m[(i, col)];
                if field.is_zero(f) {
                    continue;
                }
                for j in 0..m.cols {
                    let s = field.mul(f, m[(r, j)]);
                    m[(i, j)] = field.sub(m[(i, j)], s);
                }
                for j in 0..ops.cols {
                    let s = field.mul(f, ops[(r, j)]);
                    ops[(i, j)] = field.sub(ops[(i, j)], s);
                }
            }
            pivots.push(col);
            r += 1;
        }
        Rref { matrix: m, pivots, basis_change: ops }
    }

    /// Basis of the right kernel {v : M v = 0}, each vector normalized,
    /// in order of the free columns. Size = cols - rank.
    pub fn right_kernel(&self, field: &Field) -> Vec<Vec<Fe>> {
        let Rref { matrix: m, pivots, .. } = self.rref(field);
        let mut basis = Vec::new();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut v = vec![field.zero(); self.cols];
            v[free] = field.one();
            for (col, rowopt) in pivot_set.iter().enumerate() {
                if let Some(row) = rowopt {
                    v[col] = field.neg(m[(*row, free)]);
                }
            }
            basis.push(normalize_coords(field, &v).expect("kernel vector nonzero"));
        }
        basis
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for MatrixGF {
    type Output = Fe;
    fn index(&self, (i, j): (usize, usize)) -> &Fe {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatrixGF {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Fe {
        &mut self.data[i * self.cols + j]
    }
}

/// The unique hyperplane through m points of PG(m,q), if they span one.
/// None signals a rank-deficient input (a meaningful negative certificate
/// for track condition (i), not a fatal error).
pub fn hyperplane_span(field: &Field, points: &[ProjPoint]) -> Option<DualVector> {
    let m = points.len();
    debug_assert!(points.iter().all(|p| p.coords.len() == m + 1));
    let mat = MatrixGF::from_rows(&points.iter().map(|p| p.coords.clone()).collect::<Vec<_>>());
    if mat.rank(field) < m {
        return None;
    }
    let kernel = mat.right_kernel(field);
    debug_assert_eq!(kernel.len(), 1);
    Some(DualVector { coords: kernel.into_iter().next().unwrap() })
}

/// Write a matrix in the interchange text format: first line "rows cols q",
/// then one row per line of space-separated integer-encoded elements.
pub fn matrix_to_text(field: &Field, m: &MatrixGF) -> String {
    let mut out = format!("{} {} {}\n", m.rows, m.cols, field.q());
    for i in 0..m.rows {
        let row: Vec<String> = m.row(i).iter().map(|&x| field.encode(x).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parse the text format back into a field and matrix.
pub fn matrix_from_text(text: &str) -> Result<(Field, MatrixGF)> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let parts: Vec<u64> = header
        .split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|e| Error::Parse(format!("bad header: {e}"))))
        .collect::<Result<_>>()?;
    let [rows, cols, q] = parts[..] else {
        return Err(Error::Parse("header must be 'rows cols q'".into()));
    };
    let field = Field::from_order(q)?;
    let mut data = Vec::with_capacity((rows * cols) as usize);
    for _ in 0..rows {
        let line = lines.next().ok_or_else(|| Error::Parse("missing matrix row".into()))?;
        for tok in line.split_whitespace() {
            let e: u32 = tok.parse().map_err(|e| Error::Parse(format!("bad entry: {e}")))?;
            data.push(field.decode(e)?);
        }
    }
    if data.len() != (rows * cols) as usize {
        return Err(Error::Parse("matrix entry count mismatch".into()));
    }
    Ok((field, MatrixGF::new(rows as usize, cols as usize, data)))
}
