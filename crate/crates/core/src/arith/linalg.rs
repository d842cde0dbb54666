use num_traits::{One, Zero};

use super::{inv_mod, residue, Rational, ValuationConfig};

/// Dense matrix over `Q`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        QMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_columns(columns: Vec<Vec<Rational>>) -> Self {
        Self::from_rows(columns).transpose()
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| super::rat(x)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Rational> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = a * other.get(k, j);
                    out.data[i * other.cols + j] += v;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "matrix/vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Rational::zero(), |acc, j| acc + self.get(i, j) * &v[j])
            })
            .collect()
    }

    /// Multiplies column `j` by `factor`.
    pub fn scale_column(&mut self, j: usize, factor: &Rational) {
        for i in 0..self.rows {
            let v = self.get(i, j) * factor;
            self.set(i, j, v);
        }
    }

    pub fn rank(&self) -> usize {
        row_reduce(&mut self.to_rows(), self.cols).len()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut r = self.row(i);
                r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                r
            })
            .collect();
        let pivots = row_reduce(&mut aug, n);
        if pivots.len() != n {
            return None;
        }
        Some(QMatrix::from_rows(
            aug.into_iter().take(n).map(|r| r[n..].to_vec()).collect(),
        ))
    }

    /// Solves `self * x = b` for square invertible `self`.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        Some(self.inverse()?.mul_vec(b))
    }
}

/// Gauss-Jordan elimination on the first `ncols` columns. Returns pivot
/// columns; `rows` ends up in reduced row echelon form on those columns.
fn row_reduce(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in 0..rows[i].len() {
                    let d = &f * &rows[r][k];
                    rows[i][k] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_of_vectors(vectors: &[Vec<Rational>]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let mut rows = vectors.to_vec();
    row_reduce(&mut rows, first.len()).len()
}

/// Basis of `{x : row . x = 0 for every row}` in `Q^ncols`.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = row_reduce(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[ri][f].clone();
            }
            v
        })
        .collect()
}

/// Dense matrix over `F_p`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    p: u64,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn from_columns(columns: &[Vec<u64>], p: u64) -> Self {
        let rows = columns.first().map_or(0, Vec::len);
        let cols = columns.len();
        let mut data = vec![0; rows * cols];
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, &v) in c.iter().enumerate() {
                data[i * cols + j] = v % p;
            }
        }
        FpMatrix { rows, cols, p, data }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        let cols: Vec<Vec<u64>> = (0..n)
            .map(|j| (0..n).map(|i| u64::from(i == j)).collect())
            .collect();
        Self::from_columns(&cols, p)
    }

    /// Reduction of a matrix over `Q` whose entries all have nonnegative valuation.
    pub fn reduce(m: &QMatrix, cfg: ValuationConfig) -> Option<Self> {
        let columns = m
            .columns()
            .iter()
            .map(|c| c.iter().map(|x| residue(x, cfg)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        if columns.is_empty() {
            return Some(FpMatrix { rows: m.nrows(), cols: 0, p: cfg.p(), data: vec![] });
        }
        Some(Self::from_columns(&columns, cfg.p()))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Lifts entries to integers in `0..p`.
    pub fn lift(&self) -> QMatrix {
        QMatrix::from_rows(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| super::rat(self.get(i, j) as i64)).collect())
                .collect(),
        )
    }

    pub fn rank(&self) -> usize {
        rank_mod_p(
            (0..self.rows)
                .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
                .collect(),
            self.p,
        )
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Unique solution of `self * x = b` for an invertible square matrix.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        if !self.is_invertible() || b.len() != self.rows {
            return None;
        }
        let p = self.p;
        let n = self.rows;
        let mut a: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut row = self.data[i * n..(i + 1) * n].to_vec();
                row.push(b[i] % p);
                row
            })
            .collect();
        for c in 0..n {
            let pr = (c..n).find(|&i| a[i][c] != 0)?;
            a.swap(c, pr);
            let inv = inv_mod(a[c][c], p);
            for v in a[c].iter_mut() {
                *v = ((*v as u128 * inv as u128) % p as u128) as u64;
            }
            for i in 0..n {
                if i != c && a[i][c] != 0 {
                    let f = a[i][c];
                    for k in 0..=n {
                        let sub = ((f as u128 * a[c][k] as u128) % p as u128) as u64;
                        a[i][k] = (a[i][k] + p - sub) % p;
                    }
                }
            }
        }
        Some(a.into_iter().map(|row| row[n]).collect())
    }
}

/// Rank over `F_p` of the given rows.
pub(crate) fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] % p != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = inv_mod(rows[r][c] % p, p);
        for v in rows[r].iter_mut() {
            *v = ((*v as u128 * inv as u128) % p as u128) as u64;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] % p != 0 {
                let f = rows[i][c] % p;
                for k in 0..ncols {
                    let sub = ((f as u128 * rows[r][k] as u128) % p as u128) as u64;
                    rows[i][k] = (rows[i][k] % p + p - sub) % p;
                }
            }
        }
        r += 1;
    }
    r
}

/// Rank over `F_p` of a list of vectors.
pub(crate) fn rank_of_vectors_mod_p(vectors: &[Vec<u64>], p: u64) -> usize {
    rank_mod_p(vectors.to_vec(), p)
}
