//! Lie algebra actions on ℝⁿ by polynomial vector fields, multisymplectic
//! forms, and finite-dimensional truncations of closed forms.

use thiserror::Error;

use crate::gmodule::GModule;
use crate::lie::{LieAlgebra, MultiVector};
use crate::linalg::{Matrix, Subspace};
use crate::polyform::{
    lie_derivative, parse_vector_field, vf_bracket, FormIndexer, FormSpace, PolyForm, PolyMultiField,
    PolyVectorField,
};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("expected {expected} generators, got {got}")]
    GeneratorCount { expected: usize, got: usize },
    #[error("generator {index} lives on R^{got}, expected R^{expected}")]
    GeneratorDimension { index: usize, expected: usize, got: usize },
    #[error("not an action: [V_{i}, V_{j}] is not ±V of the bracket", i = .pair.0 + 1, j = .pair.1 + 1)]
    NotAnAction { pair: (usize, usize) },
    #[error("form is not closed")]
    NotClosed,
    #[error("form of degree {0} cannot be multisymplectic (need degree >= 2)")]
    DegreeTooLow(usize),
    #[error("form is degenerate at the sample point {0}")]
    Degenerate(String),
    #[error("infinitesimal generator needs degree >= 1")]
    DegreeZero,
    #[error("L_V(e{generator}) leaves the degree-{max_degree} truncation; raise the degree bound")]
    EscapesTruncation { generator: usize, max_degree: u32 },
    #[error("unknown catalog action `{0}`")]
    UnknownCatalog(String),
}

/// Closed nondegenerate form ω of degree (plectic degree + 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultisympForm {
    omega: PolyForm,
}

/// Points where nondegeneracy is certified (besides the origin).
const SAMPLE_POINTS: [[i64; 3]; 3] = [[1, 2, 3], [-1, 1, 2], [2, -3, 1]];

impl MultisympForm {
    pub fn new(omega: PolyForm) -> Result<Self, ActionError> {
        if omega.degree() < 2 {
            return Err(ActionError::DegreeTooLow(omega.degree()));
        }
        if !omega.is_closed() {
            return Err(ActionError::NotClosed);
        }
        let n = omega.n();
        let mut points = vec![vec![Rational::zero(); n]];
        for s in SAMPLE_POINTS {
            points.push((0..n).map(|i| Rational::from_int(s[i % 3] + i as i64 / 3)).collect());
        }
        for pt in points {
            let at = omega.evaluate_at(&pt);
            let space = FormSpace::new(n, at.degree() - 1, 0);
            let cols: Vec<Vec<Rational>> = (0..n)
                .map(|i| space.to_vector(&PolyVectorField::coordinate(n, i).interior(&at)).unwrap())
                .collect();
            if Matrix::from_columns(space.dim(), &cols).rank() < n {
                let s: Vec<String> = pt.iter().map(Rational::to_string).collect();
                return Err(ActionError::Degenerate(format!("({})", s.join(","))));
            }
        }
        Ok(MultisympForm { omega })
    }

    pub fn omega(&self) -> &PolyForm {
        &self.omega
    }

    pub fn n_ambient(&self) -> usize {
        self.omega.n()
    }

    /// The multisymplectic degree: ω is an (n+1)-form.
    pub fn plectic_degree(&self) -> usize {
        self.omega.degree() - 1
    }
}

/// Result of comparing [V_ξ,V_η] with V_{[ξ,η]} over all basis pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionReport {
    /// Detected sign s with [V_ξ,V_η] = s·V_{[ξ,η]}; `None` on failure.
    pub bracket_sign: Option<i32>,
    /// Whether some pair actually determined the sign (false when every
    /// bracket on both sides vanishes).
    pub sign_determined: bool,
    /// First failing pair (0-based) with the residuals against both signs.
    pub failure: Option<((usize, usize), PolyVectorField)>,
}

impl ActionReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Determines the uniform bracket sign of a candidate action. When every
/// bracket vanishes on both sides the sign is undetermined and reported as −1.
pub fn validate_action(alg: &LieAlgebra, gens: &[PolyVectorField]) -> Result<ActionReport, ActionError> {
    if gens.len() != alg.dim() {
        return Err(ActionError::GeneratorCount { expected: alg.dim(), got: gens.len() });
    }
    let n = gens.first().map_or(0, PolyVectorField::n);
    for (index, g) in gens.iter().enumerate() {
        if g.n() != n {
            return Err(ActionError::GeneratorDimension { index, expected: n, got: g.n() });
        }
    }
    let mut sign: Option<i32> = None;
    for i in 0..alg.dim() {
        for j in i + 1..alg.dim() {
            let lhs = vf_bracket(&gens[i], &gens[j]).expect("same dimension");
            let mut rhs = PolyVectorField::zero(n);
            for (k, c) in alg.bracket_basis(i, j) {
                rhs = rhs.add_scaled(c, &gens[*k]);
            }
            let ok_plus = lhs == rhs;
            let ok_minus = lhs == rhs.scale(&Rational::from_int(-1));
            let found = match (ok_plus, ok_minus) {
                (true, true) => continue,
                (true, false) => 1,
                (false, true) => -1,
                (false, false) => {
                    return Ok(ActionReport {
                        bracket_sign: None,
                        sign_determined: false,
                        failure: Some(((i, j), lhs.sub(&rhs))),
                    })
                }
            };
            match sign {
                Some(s) if s != found => {
                    let residual = lhs.add_scaled(&Rational::from_int(-(s as i64)), &rhs);
                    return Ok(ActionReport { bracket_sign: None, sign_determined: true, failure: Some(((i, j), residual)) });
                }
                _ => sign = Some(found),
            }
        }
    }
    Ok(ActionReport { bracket_sign: Some(sign.unwrap_or(-1)), sign_determined: sign.is_some(), failure: None })
}

/// Residual of L_{V_ξ}ω for one generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultisympReport {
    /// Nonzero residuals L_{V_{eᵢ}}ω, by 0-based generator index.
    pub residuals: Vec<(usize, PolyForm)>,
}

impl MultisympReport {
    pub fn passed(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// A validated action ξ ↦ V_ξ of a Lie algebra on ℝⁿ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAction {
    algebra: LieAlgebra,
    n: usize,
    generators: Vec<PolyVectorField>,
    bracket_sign: i32,
}

impl LieAction {
    pub fn new(algebra: LieAlgebra, generators: Vec<PolyVectorField>) -> Result<Self, ActionError> {
        let report = validate_action(&algebra, &generators)?;
        if let Some((pair, _)) = report.failure {
            return Err(ActionError::NotAnAction { pair });
        }
        let n = generators.first().map_or(0, PolyVectorField::n);
        Ok(LieAction { algebra, n, generators, bracket_sign: report.bracket_sign.unwrap() })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn n_ambient(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PolyVectorField] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &PolyVectorField {
        &self.generators[i]
    }

    /// s in [V_ξ,V_η] = s·V_{[ξ,η]}.
    pub fn bracket_sign(&self) -> i32 {
        self.bracket_sign
    }

    pub fn sign(&self) -> Rational {
        Rational::from_int(self.bracket_sign as i64)
    }

    /// V_ξ for a coordinate vector ξ.
    pub fn field_of(&self, xi: &[Rational]) -> PolyVectorField {
        let mut v = PolyVectorField::zero(self.n);
        for (c, g) in xi.iter().zip(&self.generators) {
            if !c.is_zero() {
                v = v.add_scaled(c, g);
            }
        }
        v
    }

    pub fn check_multisymplectic(&self, w: &MultisympForm) -> MultisympReport {
        let residuals = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| (i, lie_derivative(g, w.omega())))
            .filter(|(_, r)| !r.is_zero())
            .collect();
        MultisympReport { residuals }
    }

    /// V_p = Σ_t c_t V_{t₁}∧⋯∧V_{tₖ}.
    pub fn infinitesimal_generator(&self, p: &MultiVector) -> Result<PolyMultiField, ActionError> {
        if p.degree() == 0 {
            return Err(ActionError::DegreeZero);
        }
        let mut out = PolyMultiField::zero(self.n, p.degree());
        for (t, c) in p.terms() {
            let factors: Vec<PolyVectorField> = t.iter().map(|&i| self.generators[i].clone()).collect();
            out = out.add_scaled(c, &PolyMultiField::decomposable(self.n, &factors));
        }
        Ok(out)
    }

    /// V_p⌟τ, with the convention that a degree-0 p acts by scalar multiplication.
    pub fn contract(&self, p: &MultiVector, tau: &PolyForm) -> PolyForm {
        if p.degree() == 0 {
            return tau.scale(&p.coefficient(&[]));
        }
        self.infinitesimal_generator(p).unwrap().contract(tau).expect("degree fits")
    }

    /// Basis of {α : deg α = p, coefficient degree ≤ D, dα = 0, L_{V_ξ}α = 0 ∀ξ},
    /// solved as one joint linear system over the monomial basis.
    pub fn invariant_closed_forms(&self, p: usize, max_degree: u32) -> InvariantFormSpace {
        let space = FormSpace::new(self.n, p, max_degree);
        let blocks = self.generators.len() + 1;
        let mut indexers: Vec<FormIndexer> = (0..blocks).map(|_| FormIndexer::new()).collect();
        let mut entries: Vec<Vec<(usize, usize, Rational)>> = vec![Vec::new(); blocks];
        for j in 0..space.dim() {
            let b = space.basis_form(j);
            let mut images = vec![b.exterior_d()];
            images.extend(self.generators.iter().map(|g| lie_derivative(g, &b)));
            for (blk, img) in images.iter().enumerate() {
                for (r, c) in indexers[blk].sparse(img) {
                    entries[blk].push((r, j, c));
                }
            }
        }
        let mut offset = 0;
        let mut trip = Vec::new();
        for (blk, e) in entries.into_iter().enumerate() {
            trip.extend(e.into_iter().map(|(r, j, c)| (r + offset, j, c)));
            offset += indexers[blk].len();
        }
        let system = Matrix::from_triplets(offset, space.dim(), trip);
        let basis: Vec<PolyForm> = system.kernel().iter().map(|v| space.from_vector(v)).collect();
        let module_view = GModule::trivial(&self.algebra, basis.len());
        InvariantFormSpace { form_degree: p, max_degree, basis, module_view }
    }

    /// Closed p-forms of coefficient degree ≤ D as a 𝔤-module under
    /// ρ(ξ) = s·L_{V_ξ}, where s is the bracket sign (this makes ρ a
    /// representation for either sign convention).
    pub fn closed_forms_module(&self, p: usize, max_degree: u32) -> Result<ClosedFormsModule, ActionError> {
        let space = FormSpace::new(self.n, p, max_degree);
        let target = FormSpace::new(self.n, p + 1, max_degree.saturating_sub(1));
        let cols: Vec<Vec<Rational>> = (0..space.dim())
            .map(|j| {
                let d = space.basis_form(j).exterior_d();
                if p + 1 > self.n {
                    Vec::new()
                } else {
                    target.to_vector(&d).expect("d lowers the coefficient degree")
                }
            })
            .collect();
        let rows = if p + 1 > self.n { 0 } else { target.dim() };
        let closed = Subspace::spanned_by(space.dim(), &Matrix::from_columns(rows, &cols).kernel());
        let s = self.sign();
        let mut rho = Vec::with_capacity(self.generators.len());
        for (gi, g) in self.generators.iter().enumerate() {
            let mut columns = Vec::with_capacity(closed.dim());
            for v in closed.basis() {
                let img = lie_derivative(g, &space.from_vector(v)).scale(&s);
                let coords = space
                    .to_vector(&img)
                    .and_then(|w| closed.coordinates(&w))
                    .ok_or(ActionError::EscapesTruncation { generator: gi + 1, max_degree })?;
                columns.push(coords);
            }
            rho.push(Matrix::from_columns(closed.dim(), &columns));
        }
        let module = GModule::new(format!("Ω{p}_cl(≤{max_degree})"), closed.dim(), rho)
            .expect("square action matrices");
        Ok(ClosedFormsModule { p, max_degree, space, closed, module })
    }

    /// Residual of the extended Cartan identity for p = ξ₁∧⋯∧ξₖ (basis indices
    /// in the given order):
    ///
    /// (−1)ᵏ d(V_p⌟τ) − [ s·V_{∂p}⌟τ + Σᵢ(−1)ⁱ (V₁∧⋯V̂ᵢ⋯∧Vₖ)⌟L_{Vᵢ}τ + V_p⌟dτ ].
    ///
    /// The bracket sign s enters through V_{∂p}; for s = +1 this is the
    /// identity verbatim.
    pub fn extended_cartan_residual(&self, factors: &[usize], tau: &PolyForm) -> PolyForm {
        let k = factors.len();
        assert!(k >= 1 && k <= tau.degree(), "need 1 <= k <= deg τ");
        let n = self.n;
        let d = self.algebra.dim();
        let p = MultiVector::decomposable(d, factors);
        let vp = PolyMultiField::decomposable(n, &self.fields(factors));
        let sign_k = Rational::from_int(if k.is_multiple_of(2) { 1 } else { -1 });
        let lhs = vp.contract(tau).unwrap().exterior_d().scale(&sign_k);

        let dp = self.algebra.boundary(&p);
        let mut rhs = if k >= 2 {
            self.contract(&dp, tau).scale(&self.sign())
        } else {
            PolyForm::zero(n, tau.degree() - k + 1)
        };
        for i in 0..k {
            let hat: Vec<usize> = factors.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, f)| *f).collect();
            let l_tau = lie_derivative(&self.generators[factors[i]], tau);
            let term = PolyMultiField::decomposable(n, &self.fields(&hat)).contract(&l_tau).unwrap();
            // 1-based position i+1
            let s = Rational::from_int(if (i + 1) % 2 == 0 { 1 } else { -1 });
            rhs = rhs.add_scaled(&s, &term);
        }
        if tau.degree() < n {
            rhs = rhs.add(&vp.contract(&tau.exterior_d()).unwrap());
        }
        lhs.sub(&rhs)
    }

    fn fields(&self, idx: &[usize]) -> Vec<PolyVectorField> {
        idx.iter().map(|&i| self.generators[i].clone()).collect()
    }
}

/// Invariant closed forms of one degree, truncated by coefficient degree.
#[derive(Clone, Debug)]
pub struct InvariantFormSpace {
    pub form_degree: usize,
    pub max_degree: u32,
    pub basis: Vec<PolyForm>,
    /// The invariants as a (trivial) 𝔤-module.
    pub module_view: GModule,
}

impl InvariantFormSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Whether `form` lies in the span of the basis.
    pub fn contains(&self, form: &PolyForm) -> bool {
        let space = FormSpace::new(form.n(), self.form_degree, self.max_degree);
        let Some(v) = space.to_vector(form) else { return false };
        let vecs: Vec<Vec<Rational>> = self.basis.iter().map(|b| space.to_vector(b).unwrap()).collect();
        Subspace::spanned_by(space.dim(), &vecs).coordinates(&v).is_some()
    }
}

/// Closed p-forms of bounded coefficient degree with their 𝔤-action.
#[derive(Clone, Debug)]
pub struct ClosedFormsModule {
    pub p: usize,
    pub max_degree: u32,
    space: FormSpace,
    closed: Subspace,
    module: GModule,
}

impl ClosedFormsModule {
    pub fn dim(&self) -> usize {
        self.closed.dim()
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn form(&self, i: usize) -> PolyForm {
        self.space.from_vector(&self.closed.basis()[i])
    }

    pub fn form_of(&self, coords: &[Rational]) -> PolyForm {
        let mut v = vec![Rational::zero(); self.space.dim()];
        for (c, b) in coords.iter().zip(self.closed.basis()) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x += c * y;
                }
            }
        }
        self.space.from_vector(&v)
    }

    /// Coordinates of a closed form, or `None` if it is not closed or leaves
    /// the truncation.
    pub fn coordinates(&self, form: &PolyForm) -> Option<Vec<Rational>> {
        self.closed.coordinates(&self.space.to_vector(form)?)
    }
}

/// Names of the bundled actions.
pub const CATALOG_ACTIONS: [&str; 4] = ["abelian_r3", "so3_r3", "so4_r4", "u2_r4"];

/// Generator expressions of the bundled actions, as `(algebra, n, generators)`.
pub fn catalog_generators(name: &str) -> Option<(&'static str, usize, Vec<&'static str>)> {
    Some(match name {
        "abelian_r3" => ("abelian3", 3, vec!["d/dx1", "d/dx2", "d/dx3"]),
        "so3_r3" => (
            "so3",
            3,
            vec!["x3*d/dx2 - x2*d/dx3", "-x3*d/dx1 + x1*d/dx3", "x2*d/dx1 - x1*d/dx2"],
        ),
        "so4_r4" => (
            "so4",
            4,
            vec![
                "x1*d/dx2 - x2*d/dx1",
                "x1*d/dx3 - x3*d/dx1",
                "x1*d/dx4 - x4*d/dx1",
                "x2*d/dx3 - x3*d/dx2",
                "x2*d/dx4 - x4*d/dx2",
                "x3*d/dx4 - x4*d/dx3",
            ],
        ),
        // E0 is multiplication by i on ℂ² = ℍ; E1..E3 are half right
        // multiplication by i, j, k, which commute with it.
        "u2_r4" => (
            "u2",
            4,
            vec![
                "-x2*d/dx1 + x1*d/dx2 - x4*d/dx3 + x3*d/dx4",
                "-1/2*x2*d/dx1 + 1/2*x1*d/dx2 + 1/2*x4*d/dx3 - 1/2*x3*d/dx4",
                "-1/2*x3*d/dx1 - 1/2*x4*d/dx2 + 1/2*x1*d/dx3 + 1/2*x2*d/dx4",
                "-1/2*x4*d/dx1 + 1/2*x3*d/dx2 - 1/2*x2*d/dx3 + 1/2*x1*d/dx4",
            ],
        ),
        _ => return None,
    })
}

/// A bundled action with the volume form.
pub fn catalog_action(name: &str) -> Result<(LieAction, MultisympForm), ActionError> {
    let (alg, n, gens) = catalog_generators(name).ok_or_else(|| ActionError::UnknownCatalog(name.into()))?;
    let alg = LieAlgebra::catalog(alg).expect("catalog algebra");
    let gens = gens.iter().map(|g| parse_vector_field(g, n).expect("catalog generator")).collect();
    let action = LieAction::new(alg, gens)?;
    let omega = MultisympForm::new(PolyForm::volume(n))?;
    Ok((action, omega))
}
