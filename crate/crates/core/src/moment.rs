//! Weak homotopy moment maps: construction, verification, the equivariance
//! cocycle Σ, equivariantization and the existence/uniqueness diagnostics.
//!
//! Sign conventions. A weak k-moment map satisfies
//! d f(p) = −ζ(k)·V_p⌟ω for p in the Lie kernel, with
//! ζ(k) = −(−1)^{k(k+1)/2}. The action's bracket sign s, defined by
//! [V_ξ,V_η] = s·V_{[ξ,η]}, enters wherever vector-field brackets are
//! traded for algebra brackets; every constructor re-verifies the defining
//! equation before returning.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::action::{ActionError, ClosedFormsModule, LieAction, MultisympForm};
use crate::gmodule::{
    apply_differential, coboundary_solve, dual_lie_kernel_module, invariants_basis, module_cohomology_dim, Cochain,
    GModule, GModuleError,
};
use crate::lie::{LieAlgebra, LieError, LieKernel, MultiVector};
use crate::linalg::Matrix;
use crate::polyform::{lie_derivative, poincare_homotopy, PolyForm};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MomentError {
    #[error("generator {0} does not preserve omega")]
    NotMultisymplectic(usize),
    #[error("action lives on R^{action} but omega on R^{omega}")]
    DimensionMismatch { action: usize, omega: usize },
    #[error("degree {k} outside 1..={max}")]
    DegreeOutOfRange { k: usize, max: usize },
    #[error("hypothesis fails: {0}")]
    HypothesisFails(String),
    #[error("ill-defined: {0}")]
    IllDefined(String),
    #[error("inconsistent moment map: {0}")]
    Inconsistent(String),
    #[error("maps are defined on different degrees or kernels")]
    Incompatible,
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Module(#[from] GModuleError),
}

/// ζ(k) = −(−1)^{k(k+1)/2}.
pub fn zeta(k: usize) -> i64 {
    if (k * (k + 1) / 2).is_multiple_of(2) {
        -1
    } else {
        1
    }
}

/// A multisymplectic action: the action preserves ω.
#[derive(Clone, Debug)]
pub struct MomentProblem {
    action: LieAction,
    omega: MultisympForm,
}

impl MomentProblem {
    pub fn new(action: LieAction, omega: MultisympForm) -> Result<Self, MomentError> {
        if action.n_ambient() != omega.n_ambient() {
            return Err(MomentError::DimensionMismatch { action: action.n_ambient(), omega: omega.n_ambient() });
        }
        if let Some((i, _)) = action.check_multisymplectic(&omega).residuals.first() {
            return Err(MomentError::NotMultisymplectic(i + 1));
        }
        Ok(MomentProblem { action, omega })
    }

    pub fn action(&self) -> &LieAction {
        &self.action
    }

    pub fn omega(&self) -> &MultisympForm {
        &self.omega
    }

    pub fn algebra(&self) -> &LieAlgebra {
        self.action.algebra()
    }

    /// Largest k with a (possibly empty) k-th component: min(plectic degree, dim 𝔤).
    pub fn max_degree(&self) -> usize {
        self.omega.plectic_degree().min(self.algebra().dim())
    }

    /// Degree n−k of the values f_k(p).
    pub fn value_degree(&self, k: usize) -> usize {
        self.omega.plectic_degree() - k
    }

    fn check_degree(&self, k: usize) -> Result<(), MomentError> {
        if k == 0 || k > self.max_degree() {
            return Err(MomentError::DegreeOutOfRange { k, max: self.max_degree() });
        }
        Ok(())
    }

    /// −ζ(k)·V_p⌟ω, the prescribed value of d f_k(p).
    pub fn target(&self, p: &MultiVector) -> PolyForm {
        let c = Rational::from_int(-zeta(p.degree()));
        self.action.contract(p, self.omega.omega()).scale(&c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Poincare,
    Exactness,
    Brackets,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Poincare, Method::Exactness, Method::Brackets];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Poincare => "poincare",
            Method::Exactness => "exactness",
            Method::Brackets => "brackets",
        })
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "poincare" => Ok(Method::Poincare),
            "exactness" => Ok(Method::Exactness),
            "brackets" => Ok(Method::Brackets),
            _ => Err(format!("unknown method `{s}` (expected poincare, exactness or brackets)")),
        }
    }
}

/// The k-th component of a weak moment map, given on the canonical Lie
/// kernel basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakMomentMap {
    degree: usize,
    kernel: LieKernel,
    values: Vec<PolyForm>,
}

impl WeakMomentMap {
    /// Wraps given values; no verification is performed.
    pub fn from_values(problem: &MomentProblem, k: usize, values: Vec<PolyForm>) -> Result<Self, MomentError> {
        problem.check_degree(k)?;
        let kernel = problem.algebra().lie_kernel(k)?;
        let deg = problem.value_degree(k);
        if values.len() != kernel.dim() || values.iter().any(|v| v.degree() != deg) {
            return Err(MomentError::Incompatible);
        }
        Ok(WeakMomentMap { degree: k, kernel, values })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn zeta(&self) -> i64 {
        zeta(self.degree)
    }

    pub fn kernel(&self) -> &LieKernel {
        &self.kernel
    }

    pub fn values(&self) -> &[PolyForm] {
        &self.values
    }

    pub fn value(&self, j: usize) -> &PolyForm {
        &self.values[j]
    }

    /// f on an arbitrary kernel element given in kernel coordinates.
    pub fn evaluate(&self, coords: &[Rational]) -> PolyForm {
        let deg = self.values.first().map_or(0, PolyForm::degree);
        let n = self.values.first().map_or(0, PolyForm::n);
        let mut out = PolyForm::zero(n, deg);
        for (c, v) in coords.iter().zip(&self.values) {
            if !c.is_zero() {
                out = out.add_scaled(c, v);
            }
        }
        out
    }

    /// Returns f + g entrywise.
    pub fn add_values(&self, g: &[PolyForm]) -> WeakMomentMap {
        let values = self.values.iter().zip(g).map(|(a, b)| a.add(b)).collect();
        WeakMomentMap { degree: self.degree, kernel: self.kernel.clone(), values }
    }

    /// Canonical text: one line `f_k(p) = form` per kernel basis element.
    pub fn render(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (p, v) in self.kernel.basis().iter().zip(&self.values) {
            out.push_str(&format!("f_{}({}) = {}\n", self.degree, p.display_with(names), v));
        }
        out
    }
}

fn verified(problem: &MomentProblem, map: WeakMomentMap) -> Result<WeakMomentMap, MomentError> {
    let report = verify_moment(problem, &map);
    match report.residuals.first() {
        None => Ok(map),
        Some((j, r)) => Err(MomentError::IllDefined(format!(
            "defining equation fails on kernel element {} (residual {r})",
            j + 1
        ))),
    }
}

/// f_k(p) = −ζ(k)·K(V_p⌟ω), with K the Poincaré homotopy.
pub fn construct_via_poincare(problem: &MomentProblem, k: usize) -> Result<WeakMomentMap, MomentError> {
    problem.check_degree(k)?;
    let kernel = problem.algebra().lie_kernel(k)?;
    let values = kernel
        .basis()
        .par_iter()
        .map(|p| {
            let target = problem.target(p);
            if !target.is_closed() {
                return Err(MomentError::Inconsistent("V_p⌟ω is not closed".into()));
            }
            Ok(poincare_homotopy(&target).expect("positive degree"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    verified(problem, WeakMomentMap { degree: k, kernel, values })
}

/// Requires Hᵏ(𝔤) = 0. Each p is lifted to q with ∂q = p and
/// f_k(p) = −ζ(k)·s·(−1)^{k+1}·V_q⌟ω.
pub fn construct_via_exactness(problem: &MomentProblem, k: usize) -> Result<WeakMomentMap, MomentError> {
    problem.check_degree(k)?;
    let alg = problem.algebra();
    let betti = alg.ce_betti(k)?;
    if betti != 0 {
        return Err(MomentError::HypothesisFails(format!("H^{k}(g) has dimension {betti}")));
    }
    let kernel = alg.lie_kernel(k)?;
    let lift = alg.boundary_matrix(k + 1)?.matrix;
    let up = crate::exterior::ExteriorBasis::new(alg.dim(), k + 1);
    let sign = zeta(k) * problem.action.bracket_sign() as i64 * if k.is_multiple_of(2) { 1 } else { -1 };
    let c = Rational::from_int(sign);
    let lifts = lift.solve_many(kernel.basis_vectors());
    let values = lifts
        .into_par_iter()
        .map(|q| {
            let q = q.expect("Lie kernel equals the boundary image when the cohomology vanishes");
            let q = MultiVector::from_vector(&up, &q);
            problem.action.contract(&q, problem.omega.omega()).scale(&c)
        })
        .collect();
    verified(problem, WeakMomentMap { degree: k, kernel, values })
}

/// Requires H⁰(𝔤, Ρ*_k) = 0, so each p decomposes as Σ c [q, ξ] with q in
/// the kernel; then f_k(p) = ζ(k)·s·(−1)ᵏ Σ c·V_q⌟V_ξ⌟ω. Independence of the
/// decomposition is checked on every null combination.
pub fn construct_on_brackets(problem: &MomentProblem, k: usize) -> Result<WeakMomentMap, MomentError> {
    problem.check_degree(k)?;
    let alg = problem.algebra();
    let d = alg.dim();
    let kernel = alg.lie_kernel(k)?;
    let basis = kernel.basis();
    let kd = kernel.dim();
    // column (j, i) ↦ [q_j, e_i] in kernel coordinates
    let mut cols = Vec::with_capacity(kd * d);
    for q in &basis {
        for i in 0..d {
            let b = alg.schouten(q, &MultiVector::basis(d, i))?;
            cols.push(kernel.coordinates(&b).expect("bracket with the algebra preserves the kernel"));
        }
    }
    let bracket = Matrix::from_columns(kd, &cols);
    let rank = bracket.rank();
    if rank != kd {
        return Err(MomentError::HypothesisFails(format!(
            "H^0(g, P*_{k}) has dimension {}",
            kd - rank
        )));
    }
    let sign = zeta(k) * problem.action.bracket_sign() as i64 * if k.is_multiple_of(2) { 1 } else { -1 };
    let c = Rational::from_int(sign);
    let omega = problem.omega.omega();
    // V_q⌟V_ξ⌟ω for every pair, in column order
    let pieces: Vec<PolyForm> = (0..kd * d)
        .into_par_iter()
        .map(|col| {
            let (j, i) = (col / d, col % d);
            let inner = problem.action.generator(i).interior(omega);
            problem.action.contract(&basis[j], &inner).scale(&c)
        })
        .collect();
    let combine = |coeffs: &[Rational]| {
        let mut out = PolyForm::zero(problem.action.n_ambient(), problem.value_degree(k));
        for (a, piece) in coeffs.iter().zip(&pieces) {
            if !a.is_zero() {
                out = out.add_scaled(a, piece);
            }
        }
        out
    };
    for null in bracket.kernel() {
        if !combine(&null).is_closed() {
            return Err(MomentError::IllDefined("value depends on the bracket decomposition".into()));
        }
    }
    let mut values = Vec::with_capacity(kd);
    for j in 0..kd {
        let mut e = vec![Rational::zero(); kd];
        e[j] = Rational::one();
        let coeffs = bracket.solve(&e).expect("bracket map is onto");
        values.push(combine(&coeffs));
    }
    verified(problem, WeakMomentMap { degree: k, kernel, values })
}

pub fn construct(problem: &MomentProblem, k: usize, method: Method) -> Result<WeakMomentMap, MomentError> {
    match method {
        Method::Poincare => construct_via_poincare(problem, k),
        Method::Exactness => construct_via_exactness(problem, k),
        Method::Brackets => construct_on_brackets(problem, k),
    }
}

/// Nonzero residuals d f(p) + ζ(k)·V_p⌟ω by kernel index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub residuals: Vec<(usize, PolyForm)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.residuals.is_empty()
    }
}

pub fn verify_moment(problem: &MomentProblem, map: &WeakMomentMap) -> VerifyReport {
    let residuals = map
        .kernel
        .basis()
        .par_iter()
        .zip(map.values.par_iter())
        .enumerate()
        .map(|(j, (p, f))| (j, f.exterior_d().sub(&problem.target(p))))
        .filter(|(_, r)| !r.is_zero())
        .collect();
    VerifyReport { residuals }
}

/// Matrices of ad_{eᵢ} on the kernel, in kernel coordinates.
fn kernel_ad(alg: &LieAlgebra, kernel: &LieKernel) -> Vec<Matrix> {
    (0..alg.dim()).map(|i| kernel.ad_matrix(alg, i)).collect()
}

/// (ξ·Φ)(p_j) = −Φ([ξ,p_j]) + s·L_{V_ξ}Φ(p_j) for Φ in Ρ*⊗Ω.
fn act(problem: &MomentProblem, ad: &Matrix, xi: usize, phi: &[PolyForm]) -> Vec<PolyForm> {
    let s = problem.action.sign();
    let v = problem.action.generator(xi);
    (0..phi.len())
        .map(|j| {
            let mut out = lie_derivative(v, &phi[j]).scale(&s);
            for (m, f) in phi.iter().enumerate() {
                let a = ad.get(m, j);
                if !a.is_zero() {
                    out = out.add_scaled(&-a, f);
                }
            }
            out
        })
        .collect()
}

/// Σₖ(ξ)(p) = f([ξ,p]) − s·L_{V_ξ} f(p), indexed `[ξ][j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaCocycle {
    pub degree: usize,
    pub entries: Vec<Vec<PolyForm>>,
}

impl SigmaCocycle {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(PolyForm::is_zero)
    }

    /// Largest coefficient degree among the entries (0 if all vanish).
    pub fn max_coefficient_degree(&self) -> u32 {
        self.entries.iter().flatten().filter_map(PolyForm::coefficient_degree).max().unwrap_or(0)
    }

    pub fn render(&self, alg: &LieAlgebra, kernel: &LieKernel) -> String {
        let basis = kernel.basis();
        let mut out = String::new();
        for (i, row) in self.entries.iter().enumerate() {
            for (p, v) in basis.iter().zip(row) {
                if !v.is_zero() {
                    out.push_str(&format!(
                        "Sigma_{}({})({}) = {}\n",
                        self.degree,
                        alg.names()[i],
                        p.display_with(alg.names()),
                        v
                    ));
                }
            }
        }
        out
    }
}

pub fn sigma(problem: &MomentProblem, map: &WeakMomentMap) -> Result<SigmaCocycle, MomentError> {
    let alg = problem.algebra();
    let ads = kernel_ad(alg, &map.kernel);
    let entries: Vec<Vec<PolyForm>> = (0..alg.dim())
        .into_par_iter()
        .map(|i| act(problem, &ads[i], i, &map.values).into_iter().map(|f| f.neg()).collect())
        .collect();
    if entries.iter().flatten().any(|e| !e.is_closed()) {
        return Err(MomentError::Inconsistent("an entry of Sigma is not closed".into()));
    }
    Ok(SigmaCocycle { degree: map.degree, entries })
}

/// Failures of (δΣ)(ξ,η)(p) = ξ·Σ(η)(p) − η·Σ(ξ)(p) − Σ([ξ,η])(p) = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleReport {
    /// ((ξ, η), kernel index, residual), 0-based.
    pub failures: Vec<((usize, usize), usize, PolyForm)>,
}

impl CocycleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks δΣ = 0 directly on forms, with no truncation.
pub fn check_sigma_cocycle(problem: &MomentProblem, kernel: &LieKernel, s: &SigmaCocycle) -> CocycleReport {
    let alg = problem.algebra();
    let d = alg.dim();
    let ads = kernel_ad(alg, kernel);
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect();
    let failures = pairs
        .par_iter()
        .flat_map_iter(|&(i, j)| {
            let a = act(problem, &ads[i], i, &s.entries[j]);
            let b = act(problem, &ads[j], j, &s.entries[i]);
            let mut out = Vec::new();
            for m in 0..kernel.dim() {
                let mut r = a[m].sub(&b[m]);
                for (c, coef) in alg.bracket_basis(i, j) {
                    r = r.add_scaled(&-coef.clone(), &s.entries[*c][m]);
                }
                if !r.is_zero() {
                    out.push(((i, j), m, r));
                }
            }
            out
        })
        .collect();
    CocycleReport { failures }
}

/// Ρ*_k ⊗ (closed (n−k)-forms of coefficient degree ≤ D), the coefficient
/// module for Σ.
#[derive(Clone, Debug)]
pub struct EquivarianceModule {
    pub degree: usize,
    pub kernel: LieKernel,
    pub closed: ClosedFormsModule,
    pub module: GModule,
}

impl EquivarianceModule {
    pub fn new(problem: &MomentProblem, k: usize, max_degree: u32) -> Result<Self, MomentError> {
        problem.check_degree(k)?;
        let (dual, kernel) = dual_lie_kernel_module(problem.algebra(), k)?;
        let closed = problem.action.closed_forms_module(problem.value_degree(k), max_degree)?;
        let module = dual.tensor(closed.module())?;
        Ok(EquivarianceModule { degree: k, kernel, closed, module })
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    /// Module coordinates of Φ ∈ Ρ*⊗Ω given by its values on the kernel
    /// basis, or `None` if a value leaves the truncation.
    pub fn coordinates(&self, phi: &[PolyForm]) -> Option<Vec<Rational>> {
        let mut out = Vec::with_capacity(self.dim());
        for f in phi {
            out.extend(self.closed.coordinates(f)?);
        }
        Some(out)
    }

    /// Inverse of [`coordinates`](Self::coordinates).
    pub fn values(&self, coords: &[Rational]) -> Vec<PolyForm> {
        let c = self.closed.dim();
        (0..self.kernel.dim()).map(|j| self.closed.form_of(&coords[j * c..(j + 1) * c])).collect()
    }

    pub fn cochain(&self, s: &SigmaCocycle) -> Option<Cochain> {
        let values = s.entries.iter().map(|row| self.coordinates(row)).collect::<Option<Vec<_>>>()?;
        Some(Cochain { degree: 1, dim_r: self.dim(), values })
    }

    pub fn h0(&self, alg: &LieAlgebra) -> Result<usize, MomentError> {
        Ok(invariants_basis(&self.module, alg)?.len())
    }

    pub fn h1(&self, alg: &LieAlgebra) -> Result<usize, MomentError> {
        Ok(module_cohomology_dim(&self.module, alg, 1)?)
    }
}

/// Outcome of an equivariantization attempt.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Equivariantization {
    /// f + l with δl = Σ; the repaired map is verified and has Σ ≡ 0.
    Repaired { map: WeakMomentMap, correction: Vec<PolyForm> },
    /// No l exists in the degree-D truncation.
    Obstructed { max_degree: u32 },
}

/// Solves δ₀l = Σ in C⁰(𝔤, Ρ*⊗Ω_cl^{≤D}) and returns f + l.
pub fn make_equivariant(
    problem: &MomentProblem,
    map: &WeakMomentMap,
    max_degree: u32,
) -> Result<Equivariantization, MomentError> {
    let s = sigma(problem, map)?;
    let m = EquivarianceModule::new(problem, map.degree, max_degree)?;
    let cochain = m
        .cochain(&s)
        .ok_or_else(|| MomentError::HypothesisFails(format!("Sigma leaves the degree-{max_degree} truncation")))?;
    let l = match coboundary_solve(&m.module, problem.algebra(), &cochain) {
        Ok(l) => l,
        Err(GModuleError::NotExact) => return Ok(Equivariantization::Obstructed { max_degree }),
        Err(e) => return Err(e.into()),
    };
    let zero = vec![Rational::zero(); m.dim()];
    let correction = m.values(l.values.first().unwrap_or(&zero));
    let repaired = map.add_values(&correction);
    if !verify_moment(problem, &repaired).passed() {
        return Err(MomentError::Inconsistent("correction is not closed".into()));
    }
    if !sigma(problem, &repaired)?.is_zero() {
        return Err(MomentError::Inconsistent("repaired map is not equivariant".into()));
    }
    Ok(Equivariantization::Repaired { map: repaired, correction })
}

/// Quotient-level and strong-level morphism checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismReport {
    /// (ξ, kernel index) where d f([ξ,p]) ≠ s·d L_{V_ξ} f(p).
    pub quotient_failures: Vec<(usize, usize)>,
    /// f([ξ,p]) = s·L_{V_ξ} f(p) for all pairs, i.e. Σ = 0.
    pub strong: bool,
}

impl MorphismReport {
    pub fn quotient_passed(&self) -> bool {
        self.quotient_failures.is_empty()
    }
}

pub fn check_module_morphism(problem: &MomentProblem, map: &WeakMomentMap) -> MorphismReport {
    let alg = problem.algebra();
    let ads = kernel_ad(alg, &map.kernel);
    let s = problem.action.sign();
    let mut quotient_failures = Vec::new();
    let mut strong = true;
    for (i, ad) in ads.iter().enumerate() {
        let v = problem.action.generator(i);
        for j in 0..map.kernel.dim() {
            let col: Vec<Rational> = (0..map.kernel.dim()).map(|m| ad.get(m, j)).collect();
            let lhs = map.evaluate(&col);
            let rhs = lie_derivative(v, &map.values[j]).scale(&s);
            let diff = lhs.sub(&rhs);
            if !diff.is_zero() {
                strong = false;
                if !diff.is_closed() {
                    quotient_failures.push((i, j));
                }
            }
        }
    }
    MorphismReport { quotient_failures, strong }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    /// Every difference f(p) − g(p) is closed.
    pub differences_closed: bool,
    pub both_equivariant: bool,
    /// Whether f − g is an invariant of Ρ*⊗Ω (only meaningful when both
    /// maps are equivariant).
    pub difference_invariant: Option<bool>,
    pub difference_zero: bool,
    /// dim H⁰(𝔤, Ρ*⊗Ω_cl^{≤D}).
    pub invariant_dim: usize,
    /// Equivariant maps are unique within the truncation.
    pub unique: bool,
}

pub fn uniqueness_check(
    problem: &MomentProblem,
    f: &WeakMomentMap,
    g: &WeakMomentMap,
    max_degree: u32,
) -> Result<UniquenessReport, MomentError> {
    if f.degree != g.degree || f.kernel != g.kernel {
        return Err(MomentError::Incompatible);
    }
    let diff: Vec<PolyForm> = f.values.iter().zip(&g.values).map(|(a, b)| a.sub(b)).collect();
    let differences_closed = diff.iter().all(PolyForm::is_closed);
    let both_equivariant = sigma(problem, f)?.is_zero() && sigma(problem, g)?.is_zero();
    let alg = problem.algebra();
    let ads = kernel_ad(alg, &f.kernel);
    let difference_invariant = both_equivariant
        .then(|| (0..alg.dim()).all(|i| act(problem, &ads[i], i, &diff).iter().all(PolyForm::is_zero)));
    let invariant_dim = EquivarianceModule::new(problem, f.degree, max_degree)?.h0(alg)?;
    Ok(UniquenessReport {
        differences_closed,
        both_equivariant,
        difference_invariant,
        difference_zero: diff.iter().all(PolyForm::is_zero),
        invariant_dim,
        unique: invariant_dim == 0,
    })
}

/// One existence/uniqueness criterion evaluated on stored dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub route: &'static str,
    pub hypothesis: String,
    /// `None` when the needed dimension was not computed.
    pub holds: Option<bool>,
    pub conclusion: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeDiagnostic {
    pub k: usize,
    pub kernel_dim: usize,
    /// dim Hᵏ(𝔤).
    pub betti: usize,
    /// dim H⁰(𝔤, Ρ*_k).
    pub h0_dual_kernel: usize,
    /// dim of invariant closed (n−k)-forms of coefficient degree ≤ D.
    pub invariant_closed_forms: usize,
    /// dim Ρ*⊗Ω_cl^{≤D}.
    pub module_dim: usize,
    /// dim H⁰(𝔤, Ρ*⊗Ω_cl^{≤D}).
    pub h0_module: usize,
    /// dim H¹(𝔤, Ρ*⊗Ω_cl^{≤D}); skipped when the cochain space is too large.
    pub h1_module: Option<usize>,
    pub verdicts: Vec<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagnosticReport {
    pub max_poly_degree: u32,
    pub degrees: Vec<DegreeDiagnostic>,
}

/// H¹ of the truncated module is computed only below this many 2-cochain coordinates.
pub const H1_COCHAIN_LIMIT: usize = 20_000;

pub fn existence_diagnostic(
    problem: &MomentProblem,
    degrees: &[usize],
    max_degree: u32,
) -> Result<DiagnosticReport, MomentError> {
    let alg = problem.algebra();
    let d = alg.dim();
    let rows = degrees
        .iter()
        .map(|&k| {
            problem.check_degree(k)?;
            let betti = alg.ce_betti(k)?;
            let (dual, kernel) = dual_lie_kernel_module(alg, k)?;
            let h0_dual_kernel = invariants_basis(&dual, alg)?.len();
            let invariant_closed_forms =
                problem.action.invariant_closed_forms(problem.value_degree(k), max_degree).dim();
            let m = EquivarianceModule::new(problem, k, max_degree)?;
            let h0_module = m.h0(alg)?;
            let c2 = d * d.saturating_sub(1) / 2 * m.dim();
            let h1_module = if c2 <= H1_COCHAIN_LIMIT { Some(m.h1(alg)?) } else { None };
            let verdicts = vec![
                Verdict {
                    route: "exactness",
                    hypothesis: format!("H^{k}(g) = 0"),
                    holds: Some(betti == 0),
                    conclusion: "a weak moment map exists (lift through the boundary)",
                },
                Verdict {
                    route: "brackets",
                    hypothesis: format!("H^0(g, P*_{k}) = 0"),
                    holds: Some(h0_dual_kernel == 0),
                    conclusion: "a weak moment map exists (kernel spanned by brackets)",
                },
                Verdict {
                    route: "invariant-forms",
                    hypothesis: "H^0(g, P* (x) closed forms) = 0 and H^0(g, closed forms) != 0".into(),
                    holds: Some(h0_module == 0 && invariant_closed_forms != 0),
                    conclusion: "a weak moment map exists",
                },
                Verdict {
                    route: "equivariantization",
                    hypothesis: "H^1(g, P* (x) closed forms) = 0".into(),
                    holds: h1_module.map(|h| h == 0),
                    conclusion: "every weak moment map can be made equivariant (within the truncation)",
                },
                Verdict {
                    route: "uniqueness",
                    hypothesis: "H^0(g, P* (x) closed forms) = 0".into(),
                    holds: Some(h0_module == 0),
                    conclusion: "an equivariant weak moment map is unique (within the truncation)",
                },
                Verdict {
                    route: "poincare",
                    hypothesis: "ambient space is R^n (every closed form is exact)".into(),
                    holds: Some(true),
                    conclusion: "a weak moment map exists (homotopy operator)",
                },
            ];
            Ok(DegreeDiagnostic {
                k,
                kernel_dim: kernel.dim(),
                betti,
                h0_dual_kernel,
                invariant_closed_forms,
                module_dim: m.dim(),
                h0_module,
                h1_module,
                verdicts,
            })
        })
        .collect::<Result<Vec<_>, MomentError>>()?;
    Ok(DiagnosticReport { max_poly_degree: max_degree, degrees: rows })
}

/// Whether `m`'s δ applied to the module image of Σ vanishes; the module
/// counterpart of [`check_sigma_cocycle`].
pub fn sigma_cocycle_in_module(
    problem: &MomentProblem,
    m: &EquivarianceModule,
    s: &SigmaCocycle,
) -> Result<Option<bool>, MomentError> {
    let Some(c) = m.cochain(s) else { return Ok(None) };
    Ok(Some(apply_differential(&m.module, problem.algebra(), &c)?.is_zero()))
}
