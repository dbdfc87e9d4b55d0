use super::field::PrimeField;

/// Dense row-major matrix over a prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// An empty matrix with a fixed column count, to be filled with
    /// [`Matrix::push_row`].
    pub fn with_cols(field: PrimeField, cols: usize) -> Self {
        Matrix::zeros(field, 0, cols)
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from signed integers, reducing every entry.
    pub fn from_i64(field: PrimeField, rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(rows * cols, entries.len(), "entry count must be rows * cols");
        Matrix {
            field,
            rows,
            cols,
            data: entries.iter().map(|&x| field.from_i64(x)).collect(),
        }
    }

    pub fn from_rows<R: AsRef<[u64]>>(field: PrimeField, cols: usize, rows: &[R]) -> Self {
        let mut m = Matrix::with_cols(field, cols);
        for r in rows {
            m.push_row(r.as_ref());
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: &[u64]) {
        assert_eq!(row.len(), self.cols, "row length must equal column count");
        let p = self.field.modulus();
        self.data.extend(row.iter().map(|&x| x % p));
        self.rows += 1;
    }

    /// Appends all rows of `other`.
    pub fn append(&mut self, other: &Matrix) {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.field, other.field);
        self.data.extend_from_slice(&other.data);
        self.rows += other.rows;
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    /// `self · v`.
    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// Rank over GF(p). See [`rank`].
    pub fn rank(&self) -> usize {
        rank(self)
    }

    /// Canonical basis of the right kernel. See [`nullspace_basis`].
    pub fn nullspace_basis(&self) -> Vec<Vec<u64>> {
        nullspace_basis(self)
    }
}

/// Rank by forward Gaussian elimination.
///
/// The pivot is the first nonzero entry of the current column, scanning
/// rows top to bottom. Row updates are accumulated without reduction and
/// only reduced when a row is about to become a pivot or the accumulation
/// budget is spent, which keeps the inner loop free of divisions.
pub fn rank(m: &Matrix) -> usize {
    let f = m.field;
    let p = f.modulus();
    let (rows, cols) = (m.rows, m.cols);
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut a = m.data.clone();
    // Number of `+= g * x` updates an entry can absorb before overflowing.
    let budget = (u64::MAX - p) / ((p - 1) * (p - 1));
    let mut pending = 0u64;
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        if pending >= budget {
            for x in a[r * cols..].iter_mut() {
                *x %= p;
            }
            pending = 0;
        }
        let mut pivot = None;
        for i in r..rows {
            let x = a[i * cols + col] % p;
            a[i * cols + col] = x;
            if x != 0 {
                pivot = Some(i);
                break;
            }
        }
        let Some(pi) = pivot else { continue };
        if pi != r {
            let (top, bottom) = a.split_at_mut(pi * cols);
            top[r * cols..(r + 1) * cols].swap_with_slice(&mut bottom[..cols]);
        }
        let (head, tail) = a.split_at_mut((r + 1) * cols);
        let prow = &mut head[r * cols..];
        let inv = f.inv(prow[col] % p);
        for x in prow[col..].iter_mut() {
            *x = (*x % p) * inv % p;
        }
        let prow = &prow[col..];
        for row in tail.chunks_exact_mut(cols) {
            let lead = row[col] % p;
            if lead == 0 {
                row[col] = 0;
                continue;
            }
            let g = p - lead;
            for (x, &y) in row[col..].iter_mut().zip(prow) {
                *x += g * y;
            }
        }
        pending += 1;
        r += 1;
    }
    r
}

/// Reduced row echelon form; returns the pivot columns.
fn rref(m: &Matrix) -> (Vec<u64>, Vec<usize>) {
    let f = m.field;
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.data.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(pi) = (r..rows).find(|&i| a[i * cols + col] != 0) else {
            continue;
        };
        if pi != r {
            for j in 0..cols {
                a.swap(pi * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(a[r * cols + col]);
        for j in col..cols {
            a[r * cols + j] = f.mul(a[r * cols + j], inv);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let lead = a[i * cols + col];
            if lead == 0 {
                continue;
            }
            for j in col..cols {
                let v = f.mul(lead, a[r * cols + j]);
                a[i * cols + j] = f.sub(a[i * cols + j], v);
            }
        }
        pivots.push(col);
        r += 1;
    }
    (a, pivots)
}

/// Basis of `{v : m·v = 0}`.
///
/// One vector per free column of the reduced row echelon form: it has a 1
/// in its free column and 0 in every other free column, so the basis is
/// canonical for the row space of `m`.
pub fn nullspace_basis(m: &Matrix) -> Vec<Vec<u64>> {
    let f = m.field;
    let cols = m.cols;
    let (a, pivots) = rref(m);
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(a[i * cols + free]);
        }
        debug_assert!(m.mul_vec(&v).iter().all(|&x| x == 0));
        basis.push(v);
    }
    basis
}
