use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use super::{Monomial, PolyScalar};
use crate::exterior::{merge_sign, one_based, sort_with_sign, without, ExteriorBasis, IndexTuple};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("ambient dimensions differ ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("cannot contract a degree-{field} multivector field into a {form}-form")]
    DegreeTooHigh { field: usize, form: usize },
    #[error("homotopy operator needs a form of degree >= 1")]
    DegreeZero,
}

/// Differential form on ℝⁿ with polynomial coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyForm {
    n: usize,
    degree: usize,
    terms: BTreeMap<IndexTuple, PolyScalar>,
}

impl PolyForm {
    pub fn zero(n: usize, degree: usize) -> Self {
        PolyForm { n, degree, terms: BTreeMap::new() }
    }

    /// dx^{i₁}∧⋯∧dx^{iₚ} for 0-based indices in the given order.
    pub fn dx(n: usize, indices: &[usize]) -> Self {
        let mut f = Self::zero(n, indices.len());
        f.add_term(indices.to_vec(), PolyScalar::one(n));
        f
    }

    /// dx¹∧⋯∧dxⁿ.
    pub fn volume(n: usize) -> Self {
        Self::dx(n, &(0..n).collect::<Vec<_>>())
    }

    pub fn from_scalar(a: PolyScalar) -> Self {
        let mut f = Self::zero(a.n(), 0);
        f.add_term(vec![], a);
        f
    }

    /// Adds `a · dx^t` for an unsorted tuple `t`.
    pub fn add_term(&mut self, mut t: IndexTuple, a: PolyScalar) {
        assert_eq!(t.len(), self.degree, "tuple length must equal the form degree");
        let s = sort_with_sign(&mut t);
        if s == 0 || a.is_zero() {
            return;
        }
        let a = if s < 0 { a.neg() } else { a };
        match self.terms.entry(t) {
            Entry::Vacant(v) => {
                v.insert(a);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&a);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Adds `c · x^m dx^t` for a sorted tuple.
    pub fn add_monomial(&mut self, t: IndexTuple, m: Monomial, c: Rational) {
        self.add_term(t, PolyScalar::monomial(m, c));
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<IndexTuple, PolyScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, t: &[usize]) -> PolyScalar {
        self.terms.get(t).cloned().unwrap_or_else(|| PolyScalar::zero(self.n))
    }

    /// Largest total degree among the coefficients (`None` for the zero form).
    pub fn coefficient_degree(&self) -> Option<u32> {
        self.terms.values().filter_map(PolyScalar::degree).max()
    }

    /// Iterates over `(tuple, monomial, coefficient)`.
    pub fn monomial_terms(&self) -> impl Iterator<Item = (&IndexTuple, &Monomial, &Rational)> {
        self.terms.iter().flat_map(|(t, a)| a.terms().iter().map(move |(m, c)| (t, m, c)))
    }

    pub fn add(&self, other: &PolyForm) -> PolyForm {
        self.add_scaled(&Rational::one(), other)
    }

    pub fn sub(&self, other: &PolyForm) -> PolyForm {
        self.add_scaled(&Rational::from_int(-1), other)
    }

    pub fn add_scaled(&self, c: &Rational, other: &PolyForm) -> PolyForm {
        assert_eq!((self.n, self.degree), (other.n, other.degree), "form shape mismatch");
        let mut out = self.clone();
        for (t, a) in &other.terms {
            out.add_term(t.clone(), a.scale(c));
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> PolyForm {
        let mut out = PolyForm::zero(self.n, self.degree);
        if c.is_zero() {
            return out;
        }
        for (t, a) in &self.terms {
            out.terms.insert(t.clone(), a.scale(c));
        }
        out
    }

    pub fn neg(&self) -> PolyForm {
        self.scale(&Rational::from_int(-1))
    }

    pub fn mul_scalar(&self, a: &PolyScalar) -> PolyForm {
        let mut out = PolyForm::zero(self.n, self.degree);
        for (t, b) in &self.terms {
            out.add_term(t.clone(), a.mul(b));
        }
        out
    }

    pub fn wedge(&self, other: &PolyForm) -> Result<PolyForm, FormError> {
        if self.n != other.n {
            return Err(FormError::DimensionMismatch(self.n, other.n));
        }
        let mut out = PolyForm::zero(self.n, self.degree + other.degree);
        if out.degree > self.n {
            return Ok(out);
        }
        for (s, a) in &self.terms {
            for (t, b) in &other.terms {
                let (sign, u) = merge_sign(s, t);
                if sign != 0 {
                    let ab = a.mul(b);
                    out.add_term(u, if sign < 0 { ab.neg() } else { ab });
                }
            }
        }
        Ok(out)
    }

    /// d(a dx^I) = Σᵢ ∂a/∂xᵢ dxⁱ∧dx^I.
    pub fn exterior_d(&self) -> PolyForm {
        let mut out = PolyForm::zero(self.n, self.degree + 1);
        if self.degree >= self.n {
            return out;
        }
        for (t, a) in &self.terms {
            for i in 0..self.n {
                if t.contains(&i) {
                    continue;
                }
                let da = a.partial(i);
                if da.is_zero() {
                    continue;
                }
                let mut u = vec![i];
                u.extend_from_slice(t);
                out.add_term(u, da);
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.exterior_d().is_zero()
    }

    /// ι_∂ⱼ: contraction with a coordinate field.
    pub(crate) fn interior_coordinate(&self, j: usize) -> PolyForm {
        let mut out = PolyForm::zero(self.n, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (t, a) in &self.terms {
            if let Some(pos) = t.iter().position(|&i| i == j) {
                let a = if pos % 2 == 0 { a.clone() } else { a.neg() };
                out.add_term(without(t, pos), a);
            }
        }
        out
    }

    /// Evaluates the coefficients at a point, leaving a constant form.
    pub fn evaluate_at(&self, point: &[Rational]) -> PolyForm {
        let mut out = PolyForm::zero(self.n, self.degree);
        for (t, a) in &self.terms {
            out.add_term(t.clone(), PolyScalar::constant(self.n, a.evaluate(point)));
        }
        out
    }
}

impl fmt::Display for PolyForm {
    /// Renders in the input grammar, e.g. `1/2*x2*dx(1) - 1/2*x1*dx(2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        let mut first = true;
        for (t, a) in &self.terms {
            let suffix = if t.is_empty() { None } else { Some(format!("dx({})", one_based(t))) };
            a.write_terms(suffix.as_deref(), &mut first, &mut out);
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ω{}[{}]", self.degree, self)
    }
}

/// Poincaré homotopy operator toward the origin:
/// K(a·x^μ dx^{i₁…iₚ}) = 1/(|μ|+p) Σⱼ(−1)^{j−1} x^{iⱼ}·a·x^μ dx^{…îⱼ…}.
pub fn poincare_homotopy(alpha: &PolyForm) -> Result<PolyForm, FormError> {
    let p = alpha.degree();
    if p == 0 {
        return Err(FormError::DegreeZero);
    }
    let mut out = PolyForm::zero(alpha.n(), p - 1);
    for (t, m, c) in alpha.monomial_terms() {
        let w = Rational::new(1, (m.degree() as usize + p) as i64);
        for j in 0..p {
            let sign = if j % 2 == 0 { Rational::one() } else { Rational::from_int(-1) };
            out.add_monomial(without(t, j), m.times_var(t[j]), c * &w * sign);
        }
    }
    Ok(out)
}

/// Assigns consecutive indices to `(tuple, monomial)` pairs on demand, so
/// forms of any shape can be written as coordinate vectors of one system.
#[derive(Clone, Debug, Default)]
pub struct FormIndexer {
    index: HashMap<(IndexTuple, Monomial), usize>,
}

impl FormIndexer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Sparse `(index, coefficient)` pairs of `form`, registering new keys.
    pub fn sparse(&mut self, form: &PolyForm) -> Vec<(usize, Rational)> {
        form.monomial_terms()
            .map(|(t, m, c)| {
                let next = self.index.len();
                let i = *self.index.entry((t.clone(), m.clone())).or_insert(next);
                (i, c.clone())
            })
            .collect()
    }
}

/// Basis of p-forms on ℝⁿ with coefficient degree ≤ D: all x^μ dx^I with
/// I increasing and |μ| ≤ D, ordered by tuple, then monomial.
#[derive(Clone, Debug)]
pub struct FormSpace {
    n: usize,
    p: usize,
    max_degree: u32,
    keys: Vec<(IndexTuple, Monomial)>,
    index: HashMap<(IndexTuple, Monomial), usize>,
}

impl FormSpace {
    pub fn new(n: usize, p: usize, max_degree: u32) -> Self {
        let monos = Monomial::up_to_degree(n, max_degree);
        let mut keys = Vec::new();
        for t in ExteriorBasis::new(n, p).tuples() {
            for m in &monos {
                keys.push((t.clone(), m.clone()));
            }
        }
        let index = keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        FormSpace { n, p, max_degree, keys, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn dim(&self) -> usize {
        self.keys.len()
    }

    pub fn basis_form(&self, i: usize) -> PolyForm {
        let (t, m) = &self.keys[i];
        let mut f = PolyForm::zero(self.n, self.p);
        f.add_monomial(t.clone(), m.clone(), Rational::one());
        f
    }

    /// Coordinates of `form`, or `None` if it leaves the truncation.
    pub fn to_vector(&self, form: &PolyForm) -> Option<Vec<Rational>> {
        if form.degree() != self.p || form.n() != self.n {
            return None;
        }
        let mut v = vec![Rational::zero(); self.dim()];
        for (t, m, c) in form.monomial_terms() {
            v[*self.index.get(&(t.clone(), m.clone()))?] = c.clone();
        }
        Some(v)
    }

    pub fn from_vector(&self, v: &[Rational]) -> PolyForm {
        let mut f = PolyForm::zero(self.n, self.p);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let (t, m) = &self.keys[i];
                f.add_monomial(t.clone(), m.clone(), c.clone());
            }
        }
        f
    }
}
