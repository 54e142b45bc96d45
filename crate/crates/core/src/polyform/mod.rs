//! Polynomial differential forms and multivector fields on ℝⁿ.

mod field;
mod form;
mod parse;

pub use field::{lie_derivative, vf_bracket, PolyMultiField, PolyVectorField};
pub use form::{poincare_homotopy, FormError, FormIndexer, FormSpace, PolyForm};
pub use parse::{parse_form, parse_scalar, parse_vector_field, ParseError, ParseErrorKind};
pub(crate) use parse::{parse_form_at, parse_vector_field_at, Origin};

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::rational::Rational;

/// Exponent vector of x₁^μ₁⋯xₙ^μₙ.
///
/// Ordered by total degree, then so that x₁ sorts before x₂ within a degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn times_var(&self, i: usize) -> Monomial {
        let mut e = self.0.clone();
        e[i] += 1;
        Monomial(e)
    }

    /// ∂/∂xᵢ as (multiplier, monomial), or `None` if the exponent is zero.
    pub fn partial(&self, i: usize) -> Option<(u32, Monomial)> {
        let k = self.0[i];
        if k == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[i] -= 1;
        Some((k, Monomial(e)))
    }

    /// All monomials in n variables of total degree exactly `d`, in order.
    pub fn of_degree(n: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        if n == 0 {
            if d == 0 {
                out.push(Monomial(vec![]));
            }
            return out;
        }
        rec(0, d, &mut cur, &mut out);
        out
    }

    /// All monomials of total degree ≤ `d`, in order.
    pub fn up_to_degree(n: usize, d: u32) -> Vec<Monomial> {
        (0..=d).flat_map(|k| Monomial::of_degree(n, k)).collect()
    }

    fn write_factors(&self, out: &mut Vec<String>) {
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => out.push(format!("x{}", i + 1)),
                _ => out.push(format!("x{}^{}", i + 1, e)),
            }
        }
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::one();
        for (x, &e) in point.iter().zip(&self.0) {
            if e > 0 {
                acc *= &x.pow(e);
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut v = Vec::new();
        self.write_factors(&mut v);
        if v.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&v.join("*"))
        }
    }
}

/// Polynomial in x₁..xₙ with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyScalar {
    n: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl PolyScalar {
    pub fn zero(n: usize) -> Self {
        PolyScalar { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Monomial::one(n), c);
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Monomial::var(n, i), Rational::one());
        p
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(m.n());
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.n(), self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one(self.n)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_assign_scaled(&mut self, c: &Rational, other: &PolyScalar) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), c * v);
        }
    }

    pub fn add(&self, other: &PolyScalar) -> PolyScalar {
        let mut out = self.clone();
        out.add_assign_scaled(&Rational::one(), other);
        out
    }

    pub fn sub(&self, other: &PolyScalar) -> PolyScalar {
        let mut out = self.clone();
        out.add_assign_scaled(&Rational::from_int(-1), other);
        out
    }

    pub fn scale(&self, c: &Rational) -> PolyScalar {
        if c.is_zero() {
            return PolyScalar::zero(self.n);
        }
        PolyScalar { n: self.n, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn neg(&self) -> PolyScalar {
        self.scale(&Rational::from_int(-1))
    }

    pub fn mul(&self, other: &PolyScalar) -> PolyScalar {
        let mut out = PolyScalar::zero(self.n);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }

    pub fn partial(&self, i: usize) -> PolyScalar {
        let mut out = PolyScalar::zero(self.n);
        for (m, c) in &self.terms {
            if let Some((k, dm)) = m.partial(i) {
                out.add_term(dm, c * Rational::from_int(k as i64));
            }
        }
        out
    }

    pub fn times_var(&self, i: usize) -> PolyScalar {
        PolyScalar {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.times_var(i), c.clone())).collect(),
        }
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        self.terms.iter().map(|(m, c)| c * m.evaluate(point)).sum()
    }

    /// Writes signed terms, each multiplied by the trailing `suffix` factor.
    pub(crate) fn write_terms(&self, suffix: Option<&str>, first: &mut bool, out: &mut String) {
        for (m, c) in &self.terms {
            let mut factors = Vec::new();
            let mag = c.abs();
            let has_body = m.degree() > 0 || suffix.is_some();
            if !mag.is_one() || !has_body {
                factors.push(mag.to_string());
            }
            m.write_factors(&mut factors);
            if let Some(s) = suffix {
                factors.push(s.to_string());
            }
            let body = factors.join("*");
            match (*first, c.is_negative()) {
                (true, false) => out.push_str(&body),
                (true, true) => {
                    out.push('-');
                    out.push_str(&body);
                }
                (false, false) => {
                    out.push_str(" + ");
                    out.push_str(&body);
                }
                (false, true) => {
                    out.push_str(" - ");
                    out.push_str(&body);
                }
            }
            *first = false;
        }
    }
}

impl fmt::Display for PolyScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        self.write_terms(None, &mut true, &mut out);
        f.write_str(&out)
    }
}

impl fmt::Debug for PolyScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
