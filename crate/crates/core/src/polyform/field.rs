use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use super::form::{FormError, PolyForm};
use super::PolyScalar;
use crate::exterior::{merge_sign, sort_with_sign, IndexTuple};
use crate::rational::Rational;

/// Vector field Σ Xⁱ ∂/∂xⁱ with polynomial components.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyVectorField {
    comps: Vec<PolyScalar>,
}

impl PolyVectorField {
    pub fn zero(n: usize) -> Self {
        PolyVectorField { comps: vec![PolyScalar::zero(n); n] }
    }

    pub fn from_components(comps: Vec<PolyScalar>) -> Self {
        let n = comps.len();
        assert!(comps.iter().all(|c| c.n() == n), "component count must equal n");
        PolyVectorField { comps }
    }

    /// ∂/∂xᵢ (0-based).
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.comps[i] = PolyScalar::one(n);
        v
    }

    /// The linear field x ↦ A x, i.e. Σᵢⱼ Aᵢⱼ xⱼ ∂ᵢ.
    pub fn linear(a: &[Vec<Rational>]) -> Self {
        let n = a.len();
        let comps = a
            .iter()
            .map(|row| {
                let mut s = PolyScalar::zero(n);
                for (j, c) in row.iter().enumerate() {
                    s.add_assign_scaled(c, &PolyScalar::var(n, j));
                }
                s
            })
            .collect();
        PolyVectorField { comps }
    }

    pub fn n(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[PolyScalar] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &PolyScalar {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(PolyScalar::is_zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.comps.iter().filter_map(PolyScalar::degree).max()
    }

    /// True when every component is homogeneous linear (or zero).
    pub fn is_linear(&self) -> bool {
        self.comps.iter().all(|c| c.terms().keys().all(|m| m.degree() == 1))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(&Rational::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(&Rational::from_int(-1), other)
    }

    pub fn add_scaled(&self, c: &Rational, other: &Self) -> Self {
        PolyVectorField {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| {
                    let mut s = a.clone();
                    s.add_assign_scaled(c, b);
                    s
                })
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PolyVectorField { comps: self.comps.iter().map(|a| a.scale(c)).collect() }
    }

    /// X(f) = Σ Xⁱ ∂f/∂xⁱ.
    pub fn apply(&self, f: &PolyScalar) -> PolyScalar {
        let mut out = PolyScalar::zero(self.n());
        for (i, x) in self.comps.iter().enumerate() {
            if !x.is_zero() {
                out = out.add(&x.mul(&f.partial(i)));
            }
        }
        out
    }

    /// ι_X α = α(X, ·).
    pub fn interior(&self, alpha: &PolyForm) -> PolyForm {
        let mut out = PolyForm::zero(alpha.n(), alpha.degree().saturating_sub(1));
        for (j, x) in self.comps.iter().enumerate() {
            if !x.is_zero() {
                out = out.add(&alpha.interior_coordinate(j).mul_scalar(x));
            }
        }
        out
    }
}

impl fmt::Display for PolyVectorField {
    /// Renders as `x3*d/dx1 - x1*d/dx3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        let mut first = true;
        for (i, c) in self.comps.iter().enumerate() {
            c.write_terms(Some(&format!("d/dx{}", i + 1)), &mut first, &mut out);
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for PolyVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// [X,Y]ⁱ = Σⱼ Xʲ∂ⱼYⁱ − Yʲ∂ⱼXⁱ.
pub fn vf_bracket(x: &PolyVectorField, y: &PolyVectorField) -> Result<PolyVectorField, FormError> {
    if x.n() != y.n() {
        return Err(FormError::DimensionMismatch(x.n(), y.n()));
    }
    Ok(PolyVectorField {
        comps: (0..x.n()).map(|i| x.apply(&y.comps[i]).sub(&y.apply(&x.comps[i]))).collect(),
    })
}

/// L_X α = d(ι_X α) + ι_X dα.
pub fn lie_derivative(x: &PolyVectorField, alpha: &PolyForm) -> PolyForm {
    let a = if alpha.degree() == 0 {
        PolyForm::zero(alpha.n(), 0)
    } else {
        x.interior(alpha).exterior_d()
    };
    let b = if alpha.degree() >= alpha.n() {
        PolyForm::zero(alpha.n(), alpha.degree())
    } else {
        x.interior(&alpha.exterior_d())
    };
    a.add(&b)
}

/// Multivector field Σ c_J ∂_{j₁}∧⋯∧∂_{jₖ}, stored expanded.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMultiField {
    n: usize,
    degree: usize,
    terms: BTreeMap<IndexTuple, PolyScalar>,
}

impl PolyMultiField {
    pub fn zero(n: usize, degree: usize) -> Self {
        PolyMultiField { n, degree, terms: BTreeMap::new() }
    }

    /// The constant function 1 as a degree-0 multivector field.
    pub fn one(n: usize) -> Self {
        let mut m = Self::zero(n, 0);
        m.add_term(vec![], PolyScalar::one(n));
        m
    }

    pub fn from_field(x: &PolyVectorField) -> Self {
        let mut m = Self::zero(x.n(), 1);
        for (i, c) in x.components().iter().enumerate() {
            m.add_term(vec![i], c.clone());
        }
        m
    }

    /// X₁∧⋯∧Xₖ in the given order.
    pub fn decomposable(n: usize, factors: &[PolyVectorField]) -> Self {
        factors.iter().fold(Self::one(n), |acc, x| acc.wedge(&Self::from_field(x)))
    }

    pub fn add_term(&mut self, mut t: IndexTuple, a: PolyScalar) {
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

    pub fn add_scaled(&self, c: &Rational, other: &Self) -> Self {
        assert_eq!((self.n, self.degree), (other.n, other.degree), "shape mismatch");
        let mut out = self.clone();
        for (t, a) in &other.terms {
            out.add_term(t.clone(), a.scale(c));
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::zero(self.n, self.degree).add_scaled(c, self)
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n, self.degree + other.degree);
        for (s, a) in &self.terms {
            for (t, b) in &other.terms {
                let (sign, u) = merge_sign(s, t);
                if sign != 0 {
                    let ab = a.mul(b);
                    out.add_term(u, if sign < 0 { ab.neg() } else { ab });
                }
            }
        }
        out
    }

    /// X⌟α with X₁∧⋯∧Xₖ⌟α = ι_{Xₖ}∘⋯∘ι_{X₁}α = α(X₁,…,Xₖ,·).
    pub fn contract(&self, alpha: &PolyForm) -> Result<PolyForm, FormError> {
        if self.n != alpha.n() {
            return Err(FormError::DimensionMismatch(self.n, alpha.n()));
        }
        if self.degree > alpha.degree() {
            return Err(FormError::DegreeTooHigh { field: self.degree, form: alpha.degree() });
        }
        let mut out = PolyForm::zero(self.n, alpha.degree() - self.degree);
        for (t, c) in &self.terms {
            let mut a = alpha.clone();
            for &j in t {
                a = a.interior_coordinate(j);
            }
            out = out.add(&a.mul_scalar(c));
        }
        Ok(out)
    }
}

impl fmt::Debug for PolyMultiField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(t, a)| {
                let d: Vec<String> = t.iter().map(|i| format!("d/dx{}", i + 1)).collect();
                format!("({a})*{}", d.join("∧"))
            })
            .collect();
        write!(f, "Γ{}[{}]", self.degree, parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::super::form::tests::arb_form;
    use super::super::{parse_form, parse_vector_field, FormSpace};
    use super::*;
    use proptest::prelude::*;

    fn f(n: usize, s: &str) -> PolyForm {
        parse_form(s, n).unwrap()
    }

    fn v(n: usize, s: &str) -> PolyVectorField {
        parse_vector_field(s, n).unwrap()
    }

    #[test]
    fn contract_examples() {
        let vol = f(3, "dx(1,2,3)");
        let (d1, d2, d3) = (v(3, "d/dx1"), v(3, "d/dx2"), v(3, "d/dx3"));
        let x12 = PolyMultiField::decomposable(3, &[d1.clone(), d2.clone()]);
        assert_eq!(x12.contract(&vol).unwrap(), f(3, "dx(3)"));
        let x21 = PolyMultiField::decomposable(3, &[d2, d1]);
        assert_eq!(x21.contract(&vol).unwrap(), f(3, "-dx(3)"));
        let r = f(3, "x1*dx(1) + x2*dx(2) + x3*dx(3)");
        assert_eq!(PolyMultiField::from_field(&d3).contract(&r).unwrap(), f(3, "x3"));
        assert!(x12.contract(&f(3, "dx(1)")).is_err());
    }

    #[test]
    fn lie_derivative_examples() {
        assert_eq!(lie_derivative(&v(2, "d/dx1"), &f(2, "x1*dx(2)")), f(2, "dx(2)"));
        let rot = v(2, "-x2*d/dx1 + x1*d/dx2");
        assert!(lie_derivative(&rot, &f(2, "x1*dx(1) + x2*dx(2)")).is_zero());
    }

    #[test]
    fn bracket_examples() {
        let b = vf_bracket(&v(2, "d/dx1"), &v(2, "x1*d/dx2")).unwrap();
        assert_eq!(b, v(2, "d/dx2"));
        let x = v(3, "x1^2*d/dx3 - x2*d/dx1");
        assert!(vf_bracket(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn rotation_fields_close() {
        // V1 = x3∂2 − x2∂3 etc. satisfy [V1,V2] = V3 cyclically
        let v1 = v(3, "x3*d/dx2 - x2*d/dx3");
        let v2 = v(3, "-x3*d/dx1 + x1*d/dx3");
        let v3 = v(3, "x2*d/dx1 - x1*d/dx2");
        assert_eq!(vf_bracket(&v1, &v2).unwrap(), v3);
        assert_eq!(vf_bracket(&v2, &v3).unwrap(), v1);
        assert_eq!(vf_bracket(&v3, &v1).unwrap(), v2);
    }

    #[test]
    fn display_field() {
        assert_eq!(v(3, "x3*d/dx1 - x1*d/dx3").to_string(), "x3*d/dx1 - x1*d/dx3");
    }

    fn arb_field(n: usize, max_deg: u32) -> impl Strategy<Value = PolyVectorField> {
        let space = FormSpace::new(n, 0, max_deg);
        let dim = space.dim();
        proptest::collection::vec(proptest::collection::vec((0..dim, -3i64..=3), 0..4), n).prop_map(
            move |cs| {
                PolyVectorField::from_components(
                    cs.into_iter()
                        .map(|entries| {
                            let mut v = vec![Rational::zero(); dim];
                            for (i, c) in entries {
                                v[i] += Rational::from_int(c);
                            }
                            space.from_vector(&v).coefficient(&[])
                        })
                        .collect(),
                )
            },
        )
    }

    fn arb_fields() -> impl Strategy<Value = Vec<PolyVectorField>> {
        proptest::collection::vec(arb_field(4, 1), 1..=3)
    }

    /// L_X(a dx^I) = X(a) dx^I + Σⱼ a dx^{i₁}∧⋯∧d(X^{iⱼ})∧⋯∧dx^{iₚ}.
    fn lie_derivative_oracle(x: &PolyVectorField, alpha: &PolyForm) -> PolyForm {
        let n = alpha.n();
        let mut out = PolyForm::zero(n, alpha.degree());
        for (t, a) in alpha.terms() {
            out.add_term(t.clone(), x.apply(a));
            for j in 0..t.len() {
                let dxi = PolyForm::from_scalar(x.component(t[j]).clone()).exterior_d();
                for (u, b) in dxi.terms() {
                    let mut tup = t.clone();
                    tup[j] = u[0];
                    out.add_term(tup, a.mul(b));
                }
            }
        }
        out
    }

    /// α(X₁,…,Xₖ,·) by full antisymmetrized evaluation on coordinate slots.
    fn contract_oracle(xs: &[PolyVectorField], alpha: &PolyForm) -> PolyForm {
        let n = alpha.n();
        let k = xs.len();
        let mut out = PolyForm::zero(n, alpha.degree() - k);
        for (t, a) in alpha.terms() {
            // choose which k positions of t receive X₁..Xₖ, in every order
            let p = t.len();
            let mut perm: Vec<usize> = (0..p).collect();
            permutations(&mut perm, 0, &mut |perm| {
                // slots perm[0..k] get X's, remaining slots stay as dx in order
                let rest: Vec<usize> = perm[k..].to_vec();
                if rest.windows(2).any(|w| w[0] > w[1]) {
                    return;
                }
                let mut sorted = perm.to_vec();
                let sign = sort_with_sign(&mut sorted);
                let mut coeff = a.scale(&Rational::from_int(sign as i64));
                for (slot, x) in perm[..k].iter().zip(xs) {
                    coeff = coeff.mul(x.component(t[*slot]));
                }
                out.add_term(rest.iter().map(|&s| t[s]).collect(), coeff);
            });
        }
        out
    }

    fn permutations(v: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
        if i == v.len() {
            f(v);
            return;
        }
        for j in i..v.len() {
            v.swap(i, j);
            permutations(v, i + 1, f);
            v.swap(i, j);
        }
    }

    proptest! {
        #[test]
        fn cartan_matches_oracle(
            x in arb_field(4, 2),
            a in (0usize..=4).prop_flat_map(|p| arb_form(4, p, 2)),
        ) {
            prop_assert_eq!(lie_derivative(&x, &a), lie_derivative_oracle(&x, &a));
        }

        #[test]
        fn lie_derivative_leibniz(
            x in arb_field(3, 1),
            a in (0usize..=1).prop_flat_map(|p| arb_form(3, p, 2)),
            b in (0usize..=2).prop_flat_map(|p| arb_form(3, p, 1)),
        ) {
            let lhs = lie_derivative(&x, &a.wedge(&b).unwrap());
            let rhs = lie_derivative(&x, &a).wedge(&b).unwrap()
                .add(&a.wedge(&lie_derivative(&x, &b)).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn contract_decomposable_matches_iterated_and_oracle(
            xs in arb_fields(),
            a in arb_form(4, 3, 1),
        ) {
            let multi = PolyMultiField::decomposable(4, &xs).contract(&a).unwrap();
            let mut iter = a.clone();
            for x in &xs {
                iter = x.interior(&iter);
            }
            prop_assert_eq!(&multi, &iter);
            prop_assert_eq!(&multi, &contract_oracle(&xs, &a));
        }

        #[test]
        fn bracket_commutes_with_lie_derivative(
            x in arb_field(3, 1),
            y in arb_field(3, 1),
            a in (0usize..=2).prop_flat_map(|p| arb_form(3, p, 1)),
        ) {
            let lhs = lie_derivative(&vf_bracket(&x, &y).unwrap(), &a);
            let rhs = lie_derivative(&x, &lie_derivative(&y, &a))
                .sub(&lie_derivative(&y, &lie_derivative(&x, &a)));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
