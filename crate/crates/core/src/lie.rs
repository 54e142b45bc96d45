//! Exterior algebra over a finite-dimensional Lie algebra: the homology
//! boundary, Lie kernels, the Schouten bracket, the extended adjoint action
//! and Betti numbers with trivial coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::exterior::{merge_sign, sort_with_sign, without, ExteriorBasis, IndexTuple};
use crate::linalg::{Matrix, Subspace};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("degree {k} out of range 0..={dim}")]
    DegreeOutOfRange { k: usize, dim: usize },
    #[error("structure constant ({i},{j},{k}) needs 1 <= i < j <= {dim} and k <= {dim}")]
    BadStructure { i: usize, j: usize, k: usize, dim: usize },
    #[error("expected {expected} basis names, got {got}")]
    BadNames { expected: usize, got: usize },
    #[error("multivectors belong to algebras of different dimension ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("Schouten bracket needs degrees >= 1, got {0} and {1}")]
    DegreeZero(usize, usize),
    #[error("expected a degree-1 multivector, got degree {0}")]
    NotDegreeOne(usize),
    #[error("unknown catalog algebra `{0}`")]
    UnknownCatalog(String),
}

/// Element of Λᵏ𝔤: sparse map from increasing index tuples to coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiVector {
    dim: usize,
    degree: usize,
    terms: BTreeMap<IndexTuple, Rational>,
}

impl MultiVector {
    pub fn zero(dim: usize, degree: usize) -> Self {
        MultiVector { dim, degree, terms: BTreeMap::new() }
    }

    /// The scalar 1 in Λ⁰𝔤.
    pub fn one(dim: usize) -> Self {
        Self::from_terms(dim, 0, [(vec![], Rational::one())])
    }

    /// Basis element eᵢ (0-based).
    pub fn basis(dim: usize, i: usize) -> Self {
        Self::from_terms(dim, 1, [(vec![i], Rational::one())])
    }

    /// Wedge of basis elements in the given order, e.g. `[1,0]` is e₂∧e₁ = −e₁∧e₂.
    pub fn decomposable(dim: usize, indices: &[usize]) -> Self {
        Self::from_terms(dim, indices.len(), [(indices.to_vec(), Rational::one())])
    }

    /// Builds from unsorted tuples; each tuple is sorted with its sign and
    /// tuples with repeated indices vanish.
    pub fn from_terms(
        dim: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (IndexTuple, Rational)>,
    ) -> Self {
        let mut mv = Self::zero(dim, degree);
        for (t, c) in terms {
            mv.add_term(t, c);
        }
        mv
    }

    /// Adds `c · e_t` where `t` need not be sorted.
    pub fn add_term(&mut self, mut t: IndexTuple, c: Rational) {
        assert_eq!(t.len(), self.degree, "tuple length must equal the degree");
        assert!(t.iter().all(|&i| i < self.dim), "index out of range");
        let s = sort_with_sign(&mut t);
        if s == 0 || c.is_zero() {
            return;
        }
        let c = if s < 0 { -c } else { c };
        match self.terms.entry(t) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<IndexTuple, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, t: &[usize]) -> Rational {
        self.terms.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.dim, self.degree, self.terms.iter().map(|(t, v)| (t.clone(), v * c)))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree), "shape mismatch");
        let mut out = self.clone();
        for (t, v) in &other.terms {
            out.add_term(t.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Rational::from_int(-1)))
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let (s, t) = merge_sign(a, b);
                if s != 0 {
                    out.add_term(t, Rational::from_int(s as i64) * x * y);
                }
            }
        }
        out
    }

    /// Coordinates in the lexicographic basis of Λᵏ.
    pub fn to_vector(&self, basis: &ExteriorBasis) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); basis.len()];
        for (t, c) in &self.terms {
            v[basis.index_of(t).expect("tuple in basis")] = c.clone();
        }
        v
    }

    pub fn from_vector(basis: &ExteriorBasis, v: &[Rational]) -> Self {
        let mut mv = Self::zero(basis.n(), basis.k());
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                mv.terms.insert(basis.tuple(i).clone(), c.clone());
            }
        }
        mv
    }

    /// Renders with the given basis labels, e.g. `e1∧e2 - 1/2 e3∧e4`.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (n, (t, c)) in self.terms.iter().enumerate() {
            let body = if t.is_empty() {
                "1".to_string()
            } else {
                t.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>().join("∧")
            };
            let mag = c.abs();
            let coeff = if mag.is_one() && !t.is_empty() { String::new() } else { format!("{mag} ") };
            let coeff = if t.is_empty() { mag.to_string() } else { format!("{coeff}{body}") };
            match (n, c.is_negative()) {
                (0, false) => out.push_str(&coeff),
                (0, true) => {
                    out.push('-');
                    out.push_str(&coeff);
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&coeff);
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&coeff);
                }
            }
        }
        out
    }
}

impl fmt::Display for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.dim).map(|i| format!("e{i}")).collect();
        f.write_str(&self.display_with(&names))
    }
}

impl fmt::Debug for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Λ{}[{}]", self.degree, self)
    }
}

/// Matrix together with labels for the domain and codomain bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    pub matrix: Matrix,
    pub domain: Vec<String>,
    pub codomain: Vec<String>,
}

impl LinearMap {
    pub fn new(matrix: Matrix, domain: Vec<String>, codomain: Vec<String>) -> Self {
        assert_eq!(matrix.cols(), domain.len(), "domain labels");
        assert_eq!(matrix.rows(), codomain.len(), "codomain labels");
        LinearMap { matrix, domain, codomain }
    }
}

/// Outcome of checking the Jacobi identity on all basis triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiReport {
    /// First failing triple (0-based, i<j<l) with its cyclic-sum residual.
    pub failure: Option<((usize, usize, usize), Vec<Rational>)>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Lie algebra given by structure constants over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    label: String,
    dim: usize,
    /// `(i, j, k, c)`, 0-based, `i < j`: [eᵢ,eⱼ] has eₖ-coefficient c.
    structure: Vec<(usize, usize, usize, Rational)>,
    /// `table[i][j]` = sparse expansion of [eᵢ,eⱼ] for all i, j.
    table: Vec<Vec<Vec<(usize, Rational)>>>,
    names: Vec<String>,
}

impl LieAlgebra {
    /// Builds an algebra from 0-based structure constants. Duplicate entries
    /// are summed. The Jacobi identity is not enforced here; see
    /// [`LieAlgebra::validate_jacobi`].
    pub fn new(
        label: impl Into<String>,
        dim: usize,
        structure: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
        names: Option<Vec<String>>,
    ) -> Result<Self, LieError> {
        let names = match names {
            Some(n) if n.len() != dim => {
                return Err(LieError::BadNames { expected: dim, got: n.len() })
            }
            Some(n) => n,
            None => (1..=dim).map(|i| format!("e{i}")).collect(),
        };
        let mut acc: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
        for (i, j, k, c) in structure {
            if i >= j || j >= dim || k >= dim {
                return Err(LieError::BadStructure { i: i + 1, j: j + 1, k: k + 1, dim });
            }
            *acc.entry((i, j, k)).or_insert_with(Rational::zero) += c;
        }
        let structure: Vec<_> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((i, j, k), c)| (i, j, k, c)).collect();
        let mut table = vec![vec![Vec::new(); dim]; dim];
        for (i, j, k, c) in &structure {
            table[*i][*j].push((*k, c.clone()));
            table[*j][*i].push((*k, -c));
        }
        Ok(LieAlgebra { label: label.into(), dim, structure, table, names })
    }

    pub fn abelian(dim: usize) -> Self {
        Self::new(format!("abelian{dim}"), dim, [], None).unwrap()
    }

    /// su(2): [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2.
    pub fn su2() -> Self {
        Self::new("su2", 3, cyclic3(), None).unwrap()
    }

    /// so(3) with the same structure constants as su(2), labelled L1..L3.
    pub fn so3() -> Self {
        Self::new("so3", 3, cyclic3(), Some(vec!["L1".into(), "L2".into(), "L3".into()])).unwrap()
    }

    /// Heisenberg algebra: [X,Y]=Z.
    pub fn h3() -> Self {
        Self::new(
            "h3",
            3,
            [(0, 1, 2, Rational::one())],
            Some(vec!["X".into(), "Y".into(), "Z".into()]),
        )
        .unwrap()
    }

    /// so(4) with basis M12, M13, M14, M23, M24, M34, where Mᵢⱼ = Eᵢⱼ − Eⱼᵢ
    /// and the bracket is the matrix commutator.
    pub fn so4() -> Self {
        let pairs = so4_pairs();
        let mats: Vec<Matrix> = pairs.iter().map(|&(i, j)| so_generator(4, i, j)).collect();
        let mut structure = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                let c = mats[a].commutator(&mats[b]);
                for (k, &(i, j)) in pairs.iter().enumerate() {
                    let v = c.get(i, j);
                    if !v.is_zero() {
                        structure.push((a, b, k, v));
                    }
                }
            }
        }
        let names = pairs.iter().map(|(i, j)| format!("M{}{}", i + 1, j + 1)).collect();
        Self::new("so4", 6, structure, Some(names)).unwrap()
    }

    /// u(2) = ℝ ⊕ su(2): E0 central, E1..E3 with su(2) brackets.
    pub fn u2() -> Self {
        let structure = cyclic3().into_iter().map(|(i, j, k, c)| (i + 1, j + 1, k + 1, c));
        let names = (0..4).map(|i| format!("E{i}")).collect();
        Self::new("u2", 4, structure, Some(names)).unwrap()
    }

    /// Catalog lookup: `abelianN`, `su2`, `so3`, `so4`, `u2`, `h3`.
    pub fn catalog(name: &str) -> Result<Self, LieError> {
        match name {
            "su2" => Ok(Self::su2()),
            "so3" => Ok(Self::so3()),
            "so4" => Ok(Self::so4()),
            "u2" => Ok(Self::u2()),
            "h3" | "heisenberg" => Ok(Self::h3()),
            _ => name
                .strip_prefix("abelian")
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|d| (1..=12).contains(d))
                .map(Self::abelian)
                .ok_or_else(|| LieError::UnknownCatalog(name.to_string())),
        }
    }

    pub const CATALOG: [&'static str; 6] = ["abelian3", "su2", "so3", "so4", "u2", "h3"];

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Structure constants `(i, j, k, c)` with i < j, 0-based.
    pub fn structure(&self) -> &[(usize, usize, usize, Rational)] {
        &self.structure
    }

    pub fn is_abelian(&self) -> bool {
        self.structure.is_empty()
    }

    /// Sparse expansion of [eᵢ, eⱼ].
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.table[i][j]
    }

    /// Bracket of coordinate vectors.
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = a * b;
                for (k, c) in &self.table[i][j] {
                    out[*k] += &ab * c;
                }
            }
        }
        out
    }

    /// Matrix of ad_{eᵢ} on 𝔤: column j holds [eᵢ, eⱼ].
    pub fn ad_matrix(&self, i: usize) -> Matrix {
        Matrix::from_triplets(
            self.dim,
            self.dim,
            (0..self.dim).flat_map(|j| self.table[i][j].iter().map(move |(k, c)| (*k, j, c.clone()))),
        )
    }

    pub fn validate_jacobi(&self) -> JacobiReport {
        let d = self.dim;
        let e = |i: usize| {
            let mut v = vec![Rational::zero(); d];
            v[i] = Rational::one();
            v
        };
        for i in 0..d {
            for j in i + 1..d {
                for l in j + 1..d {
                    let (a, b, c) = (e(i), e(j), e(l));
                    let t1 = self.bracket(&self.bracket(&a, &b), &c);
                    let t2 = self.bracket(&self.bracket(&b, &c), &a);
                    let t3 = self.bracket(&self.bracket(&c, &a), &b);
                    let r: Vec<Rational> =
                        (0..d).map(|m| &t1[m] + &t2[m] + &t3[m]).collect();
                    if r.iter().any(|x| !x.is_zero()) {
                        return JacobiReport { failure: Some(((i, j, l), r)) };
                    }
                }
            }
        }
        JacobiReport { failure: None }
    }

    fn check_degree(&self, k: usize) -> Result<(), LieError> {
        if k > self.dim {
            Err(LieError::DegreeOutOfRange { k, dim: self.dim })
        } else {
            Ok(())
        }
    }

    /// Expansion of [eₐ, e_b] as a degree-1 multivector.
    #[cfg(test)]
    fn bracket_mv(&self, a: usize, b: usize) -> MultiVector {
        MultiVector::from_terms(self.dim, 1, self.table[a][b].iter().map(|(k, c)| (vec![*k], c.clone())))
    }

    /// ∂(ξ₁∧⋯∧ξₖ) = Σ_{i<j} (−1)^{i+j} [ξᵢ,ξⱼ]∧ξ₁∧⋯ξ̂ᵢ⋯ξ̂ⱼ⋯∧ξₖ.
    pub fn boundary(&self, p: &MultiVector) -> MultiVector {
        assert_eq!(p.dim, self.dim, "algebra mismatch");
        let k = p.degree;
        let mut out = MultiVector::zero(self.dim, k.saturating_sub(1));
        if k < 2 {
            return out;
        }
        for (t, c) in &p.terms {
            for i in 0..k {
                for j in i + 1..k {
                    let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                    let rest = without(&without(t, j), i);
                    for (m, s) in &self.table[t[i]][t[j]] {
                        let mut tup = vec![*m];
                        tup.extend_from_slice(&rest);
                        out.add_term(tup, Rational::from_int(sign) * s * c);
                    }
                }
            }
        }
        out
    }

    /// Matrix of ∂ₖ : Λᵏ𝔤 → Λᵏ⁻¹𝔤 in the lexicographic bases.
    pub fn boundary_matrix(&self, k: usize) -> Result<LinearMap, LieError> {
        self.check_degree(k)?;
        let dom = ExteriorBasis::new(self.dim, k);
        let domain = self.basis_labels(&dom);
        if k == 0 {
            return Ok(LinearMap::new(Matrix::zeros(0, 1), domain, vec![]));
        }
        let cod = ExteriorBasis::new(self.dim, k - 1);
        let mut trip = Vec::new();
        for (col, t) in dom.tuples().iter().enumerate() {
            let img = self.boundary(&MultiVector::decomposable(self.dim, t));
            for (u, c) in img.terms() {
                trip.push((cod.index_of(u).unwrap(), col, c.clone()));
            }
        }
        let m = Matrix::from_triplets(cod.len(), dom.len(), trip);
        Ok(LinearMap::new(m, domain, self.basis_labels(&cod)))
    }

    /// Labels like `e1∧e3` for a basis of Λᵏ𝔤 (`1` for k = 0).
    pub fn basis_labels(&self, b: &ExteriorBasis) -> Vec<String> {
        b.tuples()
            .iter()
            .map(|t| {
                if t.is_empty() {
                    "1".to_string()
                } else {
                    t.iter().map(|&i| self.names[i].as_str()).collect::<Vec<_>>().join("∧")
                }
            })
            .collect()
    }

    /// The Lie kernel Ρ_{𝔤,k} = ker ∂ₖ.
    pub fn lie_kernel(&self, k: usize) -> Result<LieKernel, LieError> {
        let map = self.boundary_matrix(k)?;
        let basis = ExteriorBasis::new(self.dim, k);
        let space = Subspace::spanned_by(basis.len(), &map.matrix.kernel());
        Ok(LieKernel { k, basis, space })
    }

    pub fn lie_kernel_basis(&self, k: usize) -> Result<Vec<MultiVector>, LieError> {
        Ok(self.lie_kernel(k)?.basis())
    }

    /// Schouten bracket of multivectors of degrees k, l ≥ 1.
    pub fn schouten(&self, p: &MultiVector, q: &MultiVector) -> Result<MultiVector, LieError> {
        if p.dim != self.dim || q.dim != self.dim {
            return Err(LieError::DimensionMismatch(p.dim, q.dim));
        }
        let (k, l) = (p.degree, q.degree);
        if k == 0 || l == 0 {
            return Err(LieError::DegreeZero(k, l));
        }
        let mut out = MultiVector::zero(self.dim, k + l - 1);
        for (x, a) in &p.terms {
            for (y, b) in &q.terms {
                let ab = a * b;
                for i in 0..k {
                    let xr = without(x, i);
                    for j in 0..l {
                        let yr = without(y, j);
                        let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                        for (m, c) in &self.table[x[i]][y[j]] {
                            let mut tup = vec![*m];
                            tup.extend_from_slice(&xr);
                            tup.extend_from_slice(&yr);
                            out.add_term(tup, Rational::from_int(sign) * c * &ab);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// ad_ξ p = Σᵢ Y₁∧⋯∧[ξ,Yᵢ]∧⋯∧Yₖ, extended linearly.
    pub fn ad_action(&self, xi: &MultiVector, p: &MultiVector) -> Result<MultiVector, LieError> {
        if xi.degree != 1 {
            return Err(LieError::NotDegreeOne(xi.degree));
        }
        if xi.dim != self.dim || p.dim != self.dim {
            return Err(LieError::DimensionMismatch(xi.dim, p.dim));
        }
        let mut out = MultiVector::zero(self.dim, p.degree);
        for (s, a) in &xi.terms {
            for (t, b) in &p.terms {
                let ab = a * b;
                for i in 0..t.len() {
                    for (m, c) in &self.table[s[0]][t[i]] {
                        let mut tup = t.clone();
                        tup[i] = *m;
                        out.add_term(tup, c * &ab);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix of ad_{eᵢ} on Λᵏ𝔤 in the lexicographic basis.
    pub fn ad_matrix_on(&self, i: usize, k: usize) -> Matrix {
        let b = ExteriorBasis::new(self.dim, k);
        let xi = MultiVector::basis(self.dim, i);
        let mut trip = Vec::new();
        for (col, t) in b.tuples().iter().enumerate() {
            let img = self.ad_action(&xi, &MultiVector::decomposable(self.dim, t)).unwrap();
            for (u, c) in img.terms() {
                trip.push((b.index_of(u).unwrap(), col, c.clone()));
            }
        }
        Matrix::from_triplets(b.len(), b.len(), trip)
    }

    /// dim Hᵏ(𝔤) with trivial coefficients. The cochain differential on
    /// Λᵏ𝔤* is the transpose of ∂ₖ₊₁, so this is C(d,k) − rank ∂ₖ − rank ∂ₖ₊₁.
    pub fn ce_betti(&self, k: usize) -> Result<usize, LieError> {
        self.check_degree(k)?;
        let dim_k = ExteriorBasis::new(self.dim, k).len();
        let r_in = self.boundary_matrix(k)?.matrix.rank();
        let r_out = if k < self.dim { self.boundary_matrix(k + 1)?.matrix.rank() } else { 0 };
        Ok(dim_k - r_in - r_out)
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        let ranks: Vec<usize> =
            (0..=self.dim).map(|k| self.boundary_matrix(k).unwrap().matrix.rank()).collect();
        (0..=self.dim)
            .map(|k| {
                let dim_k = ExteriorBasis::new(self.dim, k).len();
                dim_k - ranks[k] - ranks.get(k + 1).copied().unwrap_or(0)
            })
            .collect()
    }
}

fn cyclic3() -> Vec<(usize, usize, usize, Rational)> {
    vec![
        (0, 1, 2, Rational::one()),
        (1, 2, 0, Rational::one()),
        (0, 2, 1, Rational::from_int(-1)),
    ]
}

pub(crate) fn so4_pairs() -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            v.push((i, j));
        }
    }
    v
}

/// Eᵢⱼ − Eⱼᵢ in dimension n.
pub(crate) fn so_generator(n: usize, i: usize, j: usize) -> Matrix {
    Matrix::from_triplets(n, n, [(i, j, Rational::one()), (j, i, Rational::from_int(-1))])
}

/// A computed Lie kernel with exact coordinate extraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieKernel {
    k: usize,
    basis: ExteriorBasis,
    space: Subspace,
}

impl LieKernel {
    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn exterior_basis(&self) -> &ExteriorBasis {
        &self.basis
    }

    pub fn basis(&self) -> Vec<MultiVector> {
        self.space.basis().iter().map(|v| MultiVector::from_vector(&self.basis, v)).collect()
    }

    pub fn basis_vectors(&self) -> &[Vec<Rational>] {
        self.space.basis()
    }

    /// Coordinates of `p` in the kernel basis, or `None` if `p ∉ Ρ`.
    pub fn coordinates(&self, p: &MultiVector) -> Option<Vec<Rational>> {
        if p.degree() != self.k {
            return None;
        }
        self.space.coordinates(&p.to_vector(&self.basis))
    }

    /// Matrix of ad_{eᵢ} restricted to the kernel, in kernel coordinates.
    pub fn ad_matrix(&self, alg: &LieAlgebra, i: usize) -> Matrix {
        let xi = MultiVector::basis(alg.dim(), i);
        let cols: Vec<Vec<Rational>> = self
            .basis()
            .iter()
            .map(|p| {
                let img = alg.ad_action(&xi, p).unwrap();
                self.coordinates(&img).expect("ad preserves the Lie kernel")
            })
            .collect();
        Matrix::from_columns(self.dim(), &cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn all_catalog() -> Vec<LieAlgebra> {
        LieAlgebra::CATALOG.iter().map(|n| LieAlgebra::catalog(n).unwrap()).collect()
    }

    #[test]
    fn jacobi_catalog() {
        for l in all_catalog() {
            assert!(l.validate_jacobi().passed(), "{}", l.label());
        }
    }

    #[test]
    fn jacobi_diagonal_rescaling_still_a_lie_algebra() {
        // [e3,e1] = 2e2 only rescales a diagonal structure; Jacobi still holds.
        let l = LieAlgebra::new(
            "bad",
            3,
            [(0, 1, 2, q(1)), (1, 2, 0, q(1)), (0, 2, 1, q(-2))],
            None,
        )
        .unwrap();
        assert!(l.validate_jacobi().passed());
    }

    #[test]
    fn jacobi_failure_reported() {
        // [e3,e1] = e1 + e2
        let l = LieAlgebra::new(
            "bad",
            3,
            [(0, 1, 2, q(1)), (1, 2, 0, q(1)), (0, 2, 0, q(-1)), (0, 2, 1, q(-1))],
            None,
        )
        .unwrap();
        let r = l.validate_jacobi();
        let ((i, j, k), res) = r.failure.unwrap();
        assert_eq!((i, j, k), (0, 1, 2));
        assert!(res.iter().any(|x| !x.is_zero()));
    }

    #[test]
    fn so4_brackets() {
        let l = LieAlgebra::so4();
        // [M12, M23] = M13
        let x = l.bracket_mv(0, 3);
        assert_eq!(x, MultiVector::basis(6, 1));
        // [M12, M34] = 0
        assert!(l.bracket_mv(0, 5).is_zero());
    }

    #[test]
    fn boundary_su2() {
        let l = LieAlgebra::su2();
        let b = l.boundary(&MultiVector::decomposable(3, &[0, 1]));
        assert_eq!(b, MultiVector::basis(3, 2).scale(&q(-1)));
        assert!(l.boundary(&MultiVector::decomposable(3, &[0, 1, 2])).is_zero());
        assert!(LieAlgebra::abelian(4).boundary_matrix(2).unwrap().matrix.is_zero());
    }

    #[test]
    fn boundary_squares_to_zero() {
        for l in all_catalog() {
            for k in 2..=l.dim() {
                let a = l.boundary_matrix(k).unwrap().matrix;
                let b = l.boundary_matrix(k - 1).unwrap().matrix;
                assert!(b.mul(&a).is_zero(), "{} k={k}", l.label());
            }
        }
    }

    #[test]
    fn kernels() {
        assert_eq!(LieAlgebra::abelian(3).lie_kernel(2).unwrap().dim(), 3);
        let su2 = LieAlgebra::su2();
        assert_eq!(su2.lie_kernel(2).unwrap().dim(), 0);
        let k3 = su2.lie_kernel_basis(3).unwrap();
        assert_eq!(k3, vec![MultiVector::decomposable(3, &[0, 1, 2])]);
        let so4 = LieAlgebra::so4();
        assert_eq!(so4.lie_kernel(2).unwrap().dim(), 9);
        assert_eq!(so4.lie_kernel(3).unwrap().dim(), 11);
    }

    #[test]
    fn schouten_examples() {
        let l = LieAlgebra::su2();
        let e = |i| MultiVector::basis(3, i);
        assert!(l.schouten(&MultiVector::decomposable(3, &[0, 1]), &e(2)).unwrap().is_zero());
        assert_eq!(l.schouten(&e(0), &e(1)).unwrap(), e(2));
        let a = LieAlgebra::abelian(3);
        assert!(a.schouten(&MultiVector::decomposable(3, &[0, 1]), &e(2)).unwrap().is_zero());
        assert!(l.schouten(&MultiVector::one(3), &e(0)).is_err());
    }

    #[test]
    fn ad_examples() {
        let l = LieAlgebra::su2();
        let e = |i| MultiVector::basis(3, i);
        assert!(l.ad_action(&e(0), &MultiVector::decomposable(3, &[1, 2])).unwrap().is_zero());
        assert_eq!(l.ad_action(&e(2), &e(0)).unwrap(), e(1));
        assert!(l.ad_action(&MultiVector::decomposable(3, &[0, 1]), &e(0)).is_err());
    }

    #[test]
    fn betti_tables() {
        assert_eq!(LieAlgebra::abelian(3).betti_numbers(), vec![1, 3, 3, 1]);
        assert_eq!(LieAlgebra::su2().betti_numbers(), vec![1, 0, 0, 1]);
        assert_eq!(LieAlgebra::h3().ce_betti(1).unwrap(), 2);
        assert_eq!(LieAlgebra::so4().betti_numbers(), vec![1, 0, 0, 2, 0, 0, 1]);
        assert_eq!(LieAlgebra::u2().betti_numbers(), vec![1, 1, 0, 1, 1]);
        for l in all_catalog() {
            assert_eq!(l.ce_betti(0).unwrap(), 1);
        }
    }

    #[test]
    fn boundary_of_kernel_wedge_is_signed_bracket() {
        // For p in the kernel: ∂(p∧ξ) = (−1)ᵏ[p,ξ], equivalently ∂(ξ∧p) = [p,ξ].
        for l in all_catalog() {
            for k in 1..l.dim() {
                let sign = q(if k % 2 == 0 { 1 } else { -1 });
                for p in l.lie_kernel_basis(k).unwrap() {
                    for i in 0..l.dim() {
                        let xi = MultiVector::basis(l.dim(), i);
                        let br = l.schouten(&p, &xi).unwrap();
                        assert_eq!(l.boundary(&p.wedge(&xi)), br.scale(&sign));
                        assert_eq!(l.boundary(&xi.wedge(&p)), br);
                    }
                }
            }
        }
    }

    #[test]
    fn literal_boundary_bracket_identity_fails_in_odd_degree() {
        let l = LieAlgebra::su2();
        let (p, xi) = (MultiVector::basis(3, 0), MultiVector::basis(3, 1));
        assert_ne!(l.boundary(&p.wedge(&xi)), l.schouten(&p, &xi).unwrap());
    }

    #[test]
    fn ad_is_schouten_and_preserves_kernel() {
        for l in all_catalog() {
            for k in 1..=l.dim() {
                let ker = l.lie_kernel(k).unwrap();
                for p in ker.basis() {
                    for i in 0..l.dim() {
                        let xi = MultiVector::basis(l.dim(), i);
                        let ad = l.ad_action(&xi, &p).unwrap();
                        assert_eq!(ad, l.schouten(&xi, &p).unwrap());
                        assert!(ker.coordinates(&ad).is_some());
                    }
                }
            }
        }
    }

    fn arb_mv(dim: usize, degree: usize) -> impl Strategy<Value = MultiVector> {
        let n = ExteriorBasis::new(dim, degree).len();
        proptest::collection::vec(-3i64..=3, n).prop_map(move |c| {
            let b = ExteriorBasis::new(dim, degree);
            MultiVector::from_vector(&b, &c.into_iter().map(Rational::from_int).collect::<Vec<_>>())
        })
    }

    proptest! {
        #[test]
        fn schouten_graded_antisymmetry(
            (p, r) in (1usize..=3, 1usize..=3)
                .prop_flat_map(|(k, l)| (arb_mv(6, k), arb_mv(6, l)))
        ) {
            let alg = LieAlgebra::so4();
            let e = (p.degree() - 1) * (r.degree() - 1);
            let sign = q(if e % 2 == 0 { -1 } else { 1 });
            prop_assert_eq!(alg.schouten(&p, &r).unwrap(), alg.schouten(&r, &p).unwrap().scale(&sign));
        }

        #[test]
        fn wedge_graded_commutative(p in arb_mv(4, 2), r in arb_mv(4, 1)) {
            prop_assert_eq!(p.wedge(&r), r.wedge(&p));
        }

        #[test]
        fn boundary_is_linear(p in arb_mv(4, 2), r in arb_mv(4, 2)) {
            let l = LieAlgebra::u2();
            prop_assert_eq!(l.boundary(&p.add(&r)), l.boundary(&p).add(&l.boundary(&r)));
        }
    }
}
