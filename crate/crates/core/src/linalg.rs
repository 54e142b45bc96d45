//! Sparse exact linear algebra over the rationals.
//!
//! Matrices are stored row-major as sorted sparse rows. All rank, kernel and
//! solve computations go through [`Echelon`], a reduced row-echelon form
//! computed by exact Gauss-Jordan elimination.

use std::fmt;

use crate::rational::Rational;

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Rational)>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds from arbitrary `(index, value)` pairs, summing duplicates.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut entries: Vec<(usize, Rational)> = pairs.into_iter().collect();
        entries.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, Rational)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc += v,
                _ => out.push((i, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        SparseVec { entries: out }
    }

    pub fn from_dense(v: &[Rational]) -> Self {
        SparseVec {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> Rational {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn leading(&self) -> Option<&(usize, Rational)> {
        self.entries.first()
    }

    pub fn scale(&self, c: &Rational) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Rational, other: &SparseVec) -> SparseVec {
        if c.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, c * &b[j].1));
                j += 1;
            } else {
                let v = &a[i].1 + &(c * &b[j].1);
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn dot_dense(&self, x: &[Rational]) -> Rational {
        self.entries.iter().map(|(i, v)| v * &x[*i]).sum()
    }

    pub fn shifted(&self, offset: usize) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (i + offset, v.clone())).collect(),
        }
    }
}

/// Sparse rational matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![SparseVec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, Rational::one())))
    }

    pub fn from_rows(cols: usize, data: Vec<SparseVec>) -> Self {
        debug_assert!(data.iter().all(|r| r.entries.last().is_none_or(|(c, _)| *c < cols)));
        Matrix { rows: data.len(), cols, data }
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix {
            rows: rows.len(),
            cols,
            data: rows.iter().map(|r| SparseVec::from_dense(r)).collect(),
        }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Self {
        let mut buckets: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r},{c}) outside {rows}x{cols}");
            buckets[r].push((c, v));
        }
        Matrix {
            rows,
            cols,
            data: buckets.into_iter().map(SparseVec::from_pairs).collect(),
        }
    }

    /// Matrix whose columns are the given dense vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        Self::from_triplets(
            rows,
            columns.len(),
            columns.iter().enumerate().flat_map(|(c, col)| {
                col.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(move |(r, v)| (r, c, v.clone()))
            }),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &SparseVec {
        &self.data[r]
    }

    pub fn row_vecs(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.data[r].get(c)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(SparseVec::is_zero)
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        self.data.iter().map(|r| r.to_dense(self.cols)).collect()
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.cols, "dimension mismatch in mul_vec");
        self.data.iter().map(|r| r.dot_dense(x)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_triplets(
            self.cols,
            self.rows,
            self.data
                .iter()
                .enumerate()
                .flat_map(|(r, row)| row.entries.iter().map(move |(c, v)| (*c, r, v.clone()))),
        )
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc = SparseVec::new();
                for (k, v) in &row.entries {
                    acc = acc.add_scaled(v, &other.data[*k]);
                }
                acc
            })
            .collect();
        Matrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.add_scaled(&Rational::one(), other)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add_scaled(&Rational::from_int(-1), other)
    }

    pub fn add_scaled(&self, c: &Rational, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add_scaled(c, b)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| r.scale(c)).collect(),
        }
    }

    /// Commutator `AB - BA`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (r2, c2) = (other.rows, other.cols);
        let mut triplets = Vec::new();
        for (i, row) in self.data.iter().enumerate() {
            for (j, a) in &row.entries {
                for (k, orow) in other.data.iter().enumerate() {
                    for (l, b) in &orow.entries {
                        triplets.push((i * r2 + k, j * c2 + l, a * b));
                    }
                }
            }
        }
        Matrix::from_triplets(self.rows * r2, self.cols * c2, triplets)
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[Matrix]) -> Matrix {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        for b in blocks {
            assert_eq!(b.cols, cols, "column mismatch in vstack");
            data.extend(b.data.iter().cloned());
        }
        Matrix { rows: data.len(), cols, data }
    }

    pub fn rank(&self) -> usize {
        Echelon::of(self).rank()
    }

    /// Canonical basis of the null space (see [`Echelon::kernel_basis`]).
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        Echelon::of(self).kernel_basis()
    }

    /// A particular solution of `self * x = b` with all free variables zero.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        self.solve_many(std::slice::from_ref(&b.to_vec())).pop().unwrap()
    }

    /// Solves `self * x = b` for several right-hand sides with one elimination.
    pub fn solve_many(&self, rhs: &[Vec<Rational>]) -> Vec<Option<Vec<Rational>>> {
        let n = self.cols;
        let aug_cols = n + rhs.len();
        let data: Vec<SparseVec> = (0..self.rows)
            .map(|r| {
                let extra = rhs
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| !b[r].is_zero())
                    .map(|(j, b)| (n + j, b[r].clone()));
                SparseVec::from_pairs(self.data[r].entries.iter().cloned().chain(extra))
            })
            .collect();
        let aug = Matrix { rows: self.rows, cols: aug_cols, data };
        let ech = Echelon::with_pivot_limit(&aug, n);
        (0..rhs.len())
            .map(|j| {
                let col = n + j;
                if ech.residual.iter().any(|r| !r.get(col).is_zero()) {
                    return None;
                }
                let mut x = vec![Rational::zero(); n];
                for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                    x[p] = row.get(col);
                }
                Some(x)
            })
            .collect()
    }
}

/// Reduced row-echelon form.
///
/// Every stored row has a leading 1 at its pivot column and zeros at all other
/// pivot columns. Rows are ordered by pivot column.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    pivots: Vec<usize>,
    rows: Vec<SparseVec>,
    /// Rows that vanished on the pivot-eligible columns but not beyond them.
    residual: Vec<SparseVec>,
}

impl Echelon {
    pub fn of(m: &Matrix) -> Self {
        Self::with_pivot_limit(m, m.cols)
    }

    /// Row-reduces `m`, only allowing pivots in columns `< limit`.
    pub fn with_pivot_limit(m: &Matrix, limit: usize) -> Self {
        Self::from_vectors(m.cols, limit, m.data.iter().cloned())
    }

    fn from_vectors(cols: usize, limit: usize, rows: impl Iterator<Item = SparseVec>) -> Self {
        // pivot_of[c] = index into `basis` of the row pivoting at column c.
        let mut pivot_of: Vec<Option<usize>> = vec![None; limit];
        let mut basis: Vec<SparseVec> = Vec::new();
        let mut residual = Vec::new();
        for row in rows {
            let reduced = reduce_against(row, &pivot_of, &basis, limit);
            match reduced.leading() {
                None => {}
                Some((c, _)) if *c >= limit => residual.push(reduced),
                Some((c, lead)) => {
                    let c = *c;
                    let normalized = reduced.scale(&lead.recip());
                    pivot_of[c] = Some(basis.len());
                    basis.push(normalized);
                }
            }
        }
        // Back-substitution: clear every pivot column from the other rows,
        // working from the rightmost pivot so each row is touched once per pivot.
        let mut order: Vec<usize> = (0..limit).filter(|c| pivot_of[*c].is_some()).collect();
        order.sort_unstable();
        for &c in order.iter().rev() {
            let pr = pivot_of[c].unwrap();
            let pivot_row = basis[pr].clone();
            for (i, row) in basis.iter_mut().enumerate() {
                if i == pr {
                    continue;
                }
                let v = row.get(c);
                if !v.is_zero() {
                    *row = row.add_scaled(&-v, &pivot_row);
                }
            }
        }
        let pivots = order;
        let rows = pivots.iter().map(|c| basis[pivot_of[*c].unwrap()].clone()).collect();
        Echelon { cols, pivots, rows, residual }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Null-space basis, itself returned in reduced row-echelon normal form so
    /// that the result depends only on the subspace.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let raw: Vec<SparseVec> = (0..self.cols)
            .filter(|c| !is_pivot[*c])
            .map(|f| {
                let mut pairs = vec![(f, Rational::one())];
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    let v = row.get(f);
                    if !v.is_zero() {
                        pairs.push((p, -v));
                    }
                }
                SparseVec::from_pairs(pairs)
            })
            .collect();
        let canon = Echelon::from_vectors(self.cols, self.cols, raw.into_iter());
        canon.rows.iter().map(|r| r.to_dense(self.cols)).collect()
    }
}

fn reduce_against(
    row: SparseVec,
    pivot_of: &[Option<usize>],
    basis: &[SparseVec],
    limit: usize,
) -> SparseVec {
    let mut row = row;
    // Repeatedly eliminate the first entry sitting on an existing pivot column.
    // Entries before the cursor are never pivot columns again, since every
    // basis row is zero left of its own pivot.
    let mut cursor = 0usize;
    loop {
        let next = row
            .entries
            .iter()
            .find(|(c, _)| *c >= cursor && *c < limit && pivot_of[*c].is_some())
            .map(|(c, v)| (*c, v.clone()));
        match next {
            None => return row,
            Some((c, v)) => {
                let pr = &basis[pivot_of[c].unwrap()];
                row = row.add_scaled(&-v, pr);
                cursor = c + 1;
            }
        }
    }
}

/// Canonical basis (reduced row-echelon rows) of the span of `vectors`.
pub fn row_space_basis(len: usize, vectors: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let ech = Echelon::from_vectors(len, len, vectors.iter().map(|v| SparseVec::from_dense(v)));
    ech.rows.iter().map(|r| r.to_dense(len)).collect()
}

/// A subspace held in reduced row-echelon form, supporting exact coordinate
/// extraction: the coefficient of basis vector `i` in `v` is `v[pivot_i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    len: usize,
    pivots: Vec<usize>,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn spanned_by(len: usize, vectors: &[Vec<Rational>]) -> Self {
        let ech = Echelon::from_vectors(len, len, vectors.iter().map(|v| SparseVec::from_dense(v)));
        Subspace {
            len,
            pivots: ech.pivots.clone(),
            basis: ech.rows.iter().map(|r| r.to_dense(len)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.len
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is outside the span.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let coords: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rebuilt = vec![Rational::zero(); self.len];
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (r, x) in rebuilt.iter_mut().zip(b) {
                if !x.is_zero() {
                    *r += c * x;
                }
            }
        }
        (rebuilt.as_slice() == v).then_some(coords)
    }
}
