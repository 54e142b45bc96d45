//! Chevalley–Eilenberg cohomology with coefficients in a finite-dimensional
//! 𝔤-module.
//!
//! A k-cochain is stored as its values on the lexicographic basis of Λᵏ𝔤,
//! so alternation is built into the representation. Flattened cochain
//! vectors use the index `tuple_index * dim_R + r`.

use thiserror::Error;

use crate::exterior::{sort_with_sign, without, ExteriorBasis};
use crate::lie::{LieAlgebra, LieError, LieKernel};
use crate::linalg::{Echelon, Matrix};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GModuleError {
    #[error("module has {got} action matrices but the algebra has dimension {expected}")]
    ModuleMismatch { expected: usize, got: usize },
    #[error("action matrix {index} is {rows}x{cols}, expected {dim}x{dim}")]
    BadMatrix { index: usize, rows: usize, cols: usize, dim: usize },
    #[error("cochain has shape {got:?}, expected {expected:?}")]
    BadCochain { expected: (usize, usize), got: (usize, usize) },
    #[error("cochain is not a cocycle")]
    NotCocycle,
    #[error("cocycle is not exact")]
    NotExact,
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// Finite-dimensional representation: one action matrix per basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule {
    label: String,
    dim: usize,
    rho: Vec<Matrix>,
}

/// First basis pair (i<j) violating ρ([eᵢ,eⱼ]) = [ρ(eᵢ),ρ(eⱼ)], if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleReport {
    pub failure: Option<(usize, usize)>,
}

impl ModuleReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl GModule {
    pub fn new(label: impl Into<String>, dim: usize, rho: Vec<Matrix>) -> Result<Self, GModuleError> {
        for (index, m) in rho.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(GModuleError::BadMatrix { index, rows: m.rows(), cols: m.cols(), dim });
            }
        }
        Ok(GModule { label: label.into(), dim, rho })
    }

    pub fn trivial(alg: &LieAlgebra, dim: usize) -> Self {
        GModule { label: "trivial".into(), dim, rho: vec![Matrix::zeros(dim, dim); alg.dim()] }
    }

    pub fn adjoint(alg: &LieAlgebra) -> Self {
        GModule {
            label: "adjoint".into(),
            dim: alg.dim(),
            rho: (0..alg.dim()).map(|i| alg.ad_matrix(i)).collect(),
        }
    }

    /// The dual module: ρ*(ξ) = −ρ(ξ)ᵀ.
    pub fn dual(&self) -> Self {
        let m1 = Rational::from_int(-1);
        GModule {
            label: format!("({})*", self.label),
            dim: self.dim,
            rho: self.rho.iter().map(|m| m.transpose().scale(&m1)).collect(),
        }
    }

    /// ρ(ξ) = ρ_A(ξ) ⊗ 1 + 1 ⊗ ρ_B(ξ), indexed `a * dim_B + b`.
    pub fn tensor(&self, other: &GModule) -> Result<Self, GModuleError> {
        if self.rho.len() != other.rho.len() {
            return Err(GModuleError::ModuleMismatch { expected: self.rho.len(), got: other.rho.len() });
        }
        let ia = Matrix::identity(self.dim);
        let ib = Matrix::identity(other.dim);
        let rho = self
            .rho
            .iter()
            .zip(&other.rho)
            .map(|(a, b)| a.kron(&ib).add(&ia.kron(b)))
            .collect();
        Ok(GModule { label: format!("{}⊗{}", self.label, other.label), dim: self.dim * other.dim, rho })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rho(&self, i: usize) -> &Matrix {
        &self.rho[i]
    }

    pub fn action_matrices(&self) -> &[Matrix] {
        &self.rho
    }

    fn check(&self, alg: &LieAlgebra) -> Result<(), GModuleError> {
        if self.rho.len() != alg.dim() {
            return Err(GModuleError::ModuleMismatch { expected: alg.dim(), got: self.rho.len() });
        }
        Ok(())
    }

    /// ρ applied to a general element Σ cᵢeᵢ.
    pub fn rho_of(&self, xi: &[Rational]) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (c, r) in xi.iter().zip(&self.rho) {
            if !c.is_zero() {
                m = m.add_scaled(c, r);
            }
        }
        m
    }

    pub fn validate(&self, alg: &LieAlgebra) -> Result<ModuleReport, GModuleError> {
        self.check(alg)?;
        let d = alg.dim();
        for i in 0..d {
            for j in i + 1..d {
                let mut br = vec![Rational::zero(); d];
                for (k, c) in alg.bracket_basis(i, j) {
                    br[*k] = c.clone();
                }
                let lhs = self.rho_of(&br);
                let rhs = self.rho[i].commutator(&self.rho[j]);
                if lhs != rhs {
                    return Ok(ModuleReport { failure: Some((i, j)) });
                }
            }
        }
        Ok(ModuleReport { failure: None })
    }
}

/// Alternating k-cochain with values in R: `values[t]` is f(e_t) for the
/// t-th increasing tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub dim_r: usize,
    pub values: Vec<Vec<Rational>>,
}

impl Cochain {
    pub fn zero(alg_dim: usize, degree: usize, dim_r: usize) -> Self {
        let n = ExteriorBasis::new(alg_dim, degree).len();
        Cochain { degree, dim_r, values: vec![vec![Rational::zero(); dim_r]; n] }
    }

    pub fn flatten(&self) -> Vec<Rational> {
        self.values.iter().flatten().cloned().collect()
    }

    pub fn from_flat(degree: usize, dim_r: usize, flat: &[Rational]) -> Self {
        let values = if dim_r == 0 {
            Vec::new()
        } else {
            flat.chunks(dim_r).map(|c| c.to_vec()).collect()
        };
        Cochain { degree, dim_r, values }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(Rational::is_zero)
    }
}

/// Matrix of δₖ : Cᵏ(𝔤,R) → Cᵏ⁺¹(𝔤,R).
pub fn ce_module_differential(m: &GModule, alg: &LieAlgebra, k: usize) -> Result<Matrix, GModuleError> {
    m.check(alg)?;
    let d = alg.dim();
    let r = m.dim;
    let src = ExteriorBasis::new(d, k);
    let dst = ExteriorBasis::new(d, k + 1);
    let mut trip = Vec::new();
    for (row_block, t) in dst.tuples().iter().enumerate() {
        for_each_term(alg, t, &src, |kind, u, sign| match kind {
            Term::Action(xi) => {
                for (a, row) in m.rho[xi].row_vecs().iter().enumerate() {
                    for (b, v) in row.entries() {
                        trip.push((row_block * r + a, u * r + b, Rational::from_int(sign) * v));
                    }
                }
            }
            Term::Bracket(c) => {
                for a in 0..r {
                    trip.push((row_block * r + a, u * r + a, Rational::from_int(sign) * c));
                }
            }
        });
    }
    Ok(Matrix::from_triplets(dst.len() * r, src.len() * r, trip))
}

/// δₖ applied directly to a cochain, without assembling the matrix.
pub fn apply_differential(m: &GModule, alg: &LieAlgebra, f: &Cochain) -> Result<Cochain, GModuleError> {
    m.check(alg)?;
    let d = alg.dim();
    let src = ExteriorBasis::new(d, f.degree);
    if f.values.len() != src.len() || f.dim_r != m.dim {
        return Err(GModuleError::BadCochain {
            expected: (src.len(), m.dim),
            got: (f.values.len(), f.dim_r),
        });
    }
    let dst = ExteriorBasis::new(d, f.degree + 1);
    let mut out = Cochain::zero(d, f.degree + 1, m.dim);
    for (row_block, t) in dst.tuples().iter().enumerate() {
        let acc = &mut out.values[row_block];
        for_each_term(alg, t, &src, |kind, u, sign| match kind {
            Term::Action(xi) => {
                let img = m.rho[xi].mul_vec(&f.values[u]);
                for (a, v) in img.into_iter().enumerate() {
                    if !v.is_zero() {
                        acc[a] += Rational::from_int(sign) * v;
                    }
                }
            }
            Term::Bracket(c) => {
                let s = Rational::from_int(sign) * c;
                for (a, v) in f.values[u].iter().enumerate() {
                    if !v.is_zero() {
                        acc[a] += &s * v;
                    }
                }
            }
        });
    }
    Ok(out)
}

enum Term<'a> {
    Action(usize),
    Bracket(&'a Rational),
}

/// Enumerates the terms of (δf)(e_t):
/// Σᵢ(−1)^{i+1} ξᵢ·f(…ξ̂ᵢ…) + Σ_{i<j}(−1)^{i+j} f([ξᵢ,ξⱼ],…ξ̂ᵢ…ξ̂ⱼ…),
/// passing the source tuple index and the overall sign.
fn for_each_term<'a>(
    alg: &'a LieAlgebra,
    t: &[usize],
    src: &ExteriorBasis,
    mut emit: impl FnMut(Term<'a>, usize, i64),
) {
    let n = t.len();
    for i in 0..n {
        // 0-based i: (−1)^{(i+1)+1} = (−1)^i
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let u = src.index_of(&without(t, i)).unwrap();
        emit(Term::Action(t[i]), u, sign);
    }
    for i in 0..n {
        for j in i + 1..n {
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            let rest = without(&without(t, j), i);
            for (m, c) in alg.bracket_basis(t[i], t[j]) {
                let mut tup = vec![*m];
                tup.extend_from_slice(&rest);
                let s = sort_with_sign(&mut tup);
                if s != 0 {
                    emit(Term::Bracket(c), src.index_of(&tup).unwrap(), sign * s as i64);
                }
            }
        }
    }
}

/// dim Hᵏ(𝔤, R) = dim Cᵏ − rank δₖ − rank δₖ₋₁.
pub fn module_cohomology_dim(m: &GModule, alg: &LieAlgebra, k: usize) -> Result<usize, GModuleError> {
    if k > alg.dim() {
        return Err(LieError::DegreeOutOfRange { k, dim: alg.dim() }.into());
    }
    let dim_c = ExteriorBasis::new(alg.dim(), k).len() * m.dim;
    let r_out = ce_module_differential(m, alg, k)?.rank();
    let r_in = if k == 0 { 0 } else { ce_module_differential(m, alg, k - 1)?.rank() };
    Ok(dim_c - r_out - r_in)
}

/// Basis of the invariants ∩ᵢ ker ρ(eᵢ) = H⁰(𝔤, R), in echelon normal form.
pub fn invariants_basis(m: &GModule, alg: &LieAlgebra) -> Result<Vec<Vec<Rational>>, GModuleError> {
    m.check(alg)?;
    Ok(Matrix::vstack(&m.rho).kernel())
}

/// Ρ*_{𝔤,k} with ρ(ξ) = −(ad_ξ restricted to the kernel)ᵀ, together with
/// the kernel it is built on.
pub fn dual_lie_kernel_module(alg: &LieAlgebra, k: usize) -> Result<(GModule, LieKernel), GModuleError> {
    let ker = alg.lie_kernel(k)?;
    let m1 = Rational::from_int(-1);
    let rho = (0..alg.dim()).map(|i| ker.ad_matrix(alg, i).transpose().scale(&m1)).collect();
    let module = GModule { label: format!("P*_{k}"), dim: ker.dim(), rho };
    Ok((module, ker))
}

/// Rank of the bracket map (ξ, p) ↦ [ξ, p] onto the Lie kernel.
pub fn bracket_image_rank(alg: &LieAlgebra, ker: &LieKernel) -> usize {
    let blocks: Vec<Matrix> = (0..alg.dim()).map(|i| ker.ad_matrix(alg, i).transpose()).collect();
    Matrix::vstack(&blocks).rank()
}

/// Finds l with δₖ₋₁ l = c, choosing zero for every free variable.
pub fn coboundary_solve(m: &GModule, alg: &LieAlgebra, c: &Cochain) -> Result<Cochain, GModuleError> {
    if !apply_differential(m, alg, c)?.is_zero() {
        return Err(GModuleError::NotCocycle);
    }
    if c.degree == 0 {
        return if c.is_zero() { Ok(c.clone()) } else { Err(GModuleError::NotExact) };
    }
    let delta = ce_module_differential(m, alg, c.degree - 1)?;
    match delta.solve(&c.flatten()) {
        Some(x) => Ok(Cochain::from_flat(c.degree - 1, m.dim, &x)),
        None => Err(GModuleError::NotExact),
    }
}

/// Echelon form of δ₀ = (ρ(e₁); …; ρ(e_d)), reusable across several solves.
pub fn delta0_echelon(m: &GModule) -> Echelon {
    Echelon::of(&Matrix::vstack(&m.rho))
}
