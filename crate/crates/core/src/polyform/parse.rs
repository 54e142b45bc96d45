//! Expression grammar for scalars, forms and vector fields:
//!
//! ```text
//! expr   := [sign] term (sign term)*
//! term   := factor ('*' factor)*
//! factor := INT ['/' INT] | 'x' INT ['^' INT] | 'dx' '(' INT (',' INT)* ')' | 'd/dx' INT
//! ```
//!
//! Indices are 1-based. Coefficients are exact rationals.

use std::fmt;

use super::field::PolyVectorField;
use super::form::PolyForm;
use super::{Monomial, PolyScalar};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Semantic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::Semantic => "semantic error",
        };
        write!(f, "line {}, column {}: {kind}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected one of: {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(String),
    Var(String),
    Dx,
    Field(String),
    Slash,
    Star,
    Plus,
    Minus,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(s) => format!("number `{s}`"),
            Tok::Var(s) => format!("`x{s}`"),
            Tok::Dx => "`dx`".into(),
            Tok::Field(s) => format!("`d/dx{s}`"),
            Tok::Slash => "`/`".into(),
            Tok::Star => "`*`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

/// Source position context: `line` and the column of the first character.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Origin {
    pub line: usize,
    pub column: usize,
}

impl Default for Origin {
    fn default() -> Self {
        Origin { line: 1, column: 1 }
    }
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn err(kind: ParseErrorKind, o: Origin, col: usize, msg: impl Into<String>, expected: &[&str]) -> ParseError {
    ParseError {
        kind,
        line: o.line,
        column: o.column + col,
        message: msg.into(),
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

impl Lexer {
    fn run(text: &str, o: Origin) -> Result<Self, ParseError> {
        let chars: Vec<char> = text.chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        let digits = |i: usize| {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            j
        };
        while i < chars.len() {
            let c = chars[i];
            let start = i;
            match c {
                ' ' | '\t' | '\r' => {
                    i += 1;
                    continue;
                }
                '0'..='9' => {
                    let j = digits(i);
                    if j < chars.len() && (chars[j] == '.' || chars[j] == 'e' || chars[j] == 'E') {
                        return Err(err(
                            ParseErrorKind::Semantic,
                            o,
                            start,
                            "non-rational literal; write exact rationals as p/q",
                            &[],
                        ));
                    }
                    toks.push((Tok::Int(chars[i..j].iter().collect()), start));
                    i = j;
                }
                '.' => {
                    return Err(err(
                        ParseErrorKind::Semantic,
                        o,
                        start,
                        "non-rational literal; write exact rationals as p/q",
                        &[],
                    ))
                }
                'x' => {
                    let j = digits(i + 1);
                    if j == i + 1 {
                        return Err(err(ParseErrorKind::Syntax, o, i + 1, "missing variable index", &["integer"]));
                    }
                    toks.push((Tok::Var(chars[i + 1..j].iter().collect()), start));
                    i = j;
                }
                'd' => {
                    let rest: String = chars[i..].iter().take(4).collect();
                    if rest.starts_with("d/dx") {
                        let j = digits(i + 4);
                        if j == i + 4 {
                            return Err(err(ParseErrorKind::Syntax, o, i + 4, "missing coordinate index", &["integer"]));
                        }
                        toks.push((Tok::Field(chars[i + 4..j].iter().collect()), start));
                        i = j;
                    } else if rest.starts_with("dx") {
                        toks.push((Tok::Dx, start));
                        i += 2;
                    } else {
                        return Err(err(ParseErrorKind::Syntax, o, start, "unexpected `d`", &["dx(", "d/dx"]));
                    }
                }
                '/' => {
                    toks.push((Tok::Slash, start));
                    i += 1;
                }
                '*' => {
                    toks.push((Tok::Star, start));
                    i += 1;
                }
                '+' => {
                    toks.push((Tok::Plus, start));
                    i += 1;
                }
                '-' => {
                    toks.push((Tok::Minus, start));
                    i += 1;
                }
                '^' => {
                    toks.push((Tok::Caret, start));
                    i += 1;
                }
                '(' => {
                    toks.push((Tok::LParen, start));
                    i += 1;
                }
                ')' => {
                    toks.push((Tok::RParen, start));
                    i += 1;
                }
                ',' => {
                    toks.push((Tok::Comma, start));
                    i += 1;
                }
                other => {
                    return Err(err(
                        ParseErrorKind::Syntax,
                        o,
                        start,
                        format!("unexpected character `{other}`"),
                        &[],
                    ))
                }
            }
        }
        toks.push((Tok::End, chars.len()));
        Ok(Lexer { toks })
    }
}

/// One product term: coefficient · monomial · wedge of dx's · optional ∂.
#[derive(Debug)]
struct Term {
    coeff: Rational,
    mono: Monomial,
    dx: Option<Vec<usize>>,
    field: Option<usize>,
    column: usize,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    n: usize,
    origin: Origin,
}

const FACTOR: &[&str] = &["number", "x<i>", "dx(...)", "d/dx<i>"];
const AFTER_FACTOR: &[&str] = &["*", "+", "-", "end of input"];

impl Parser {
    fn peek(&self) -> &(Tok, usize) {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax(&self, col: usize, msg: String, expected: &[&str]) -> ParseError {
        err(ParseErrorKind::Syntax, self.origin, col, msg, expected)
    }

    fn semantic(&self, col: usize, msg: String) -> ParseError {
        err(ParseErrorKind::Semantic, self.origin, col, msg, &[])
    }

    fn index(&self, s: &str, col: usize) -> Result<usize, ParseError> {
        match s.parse::<usize>() {
            Ok(i) if (1..=self.n).contains(&i) => Ok(i - 1),
            _ => Err(self.semantic(col, format!("index {s} out of range 1..={}", self.n))),
        }
    }

    fn expr(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut terms = Vec::new();
        let mut negate = false;
        match self.peek().0 {
            Tok::Minus => {
                self.bump();
                negate = true;
            }
            Tok::Plus => {
                self.bump();
            }
            _ => {}
        }
        loop {
            let mut t = self.term()?;
            if negate {
                t.coeff = -t.coeff;
            }
            terms.push(t);
            let (tok, col) = self.peek().clone();
            match tok {
                Tok::Plus => negate = false,
                Tok::Minus => negate = true,
                Tok::End => return Ok(terms),
                other => {
                    return Err(self.syntax(col, format!("unexpected {}", other.describe()), AFTER_FACTOR))
                }
            }
            self.bump();
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let column = self.origin.column + self.peek().1;
        let mut t = Term {
            coeff: Rational::one(),
            mono: Monomial::one(self.n),
            dx: None,
            field: None,
            column,
        };
        self.factor(&mut t)?;
        while self.peek().0 == Tok::Star {
            self.bump();
            self.factor(&mut t)?;
        }
        Ok(t)
    }

    fn factor(&mut self, t: &mut Term) -> Result<(), ParseError> {
        let (tok, col) = self.bump();
        match tok {
            Tok::Int(num) => {
                let mut text = num;
                if self.peek().0 == Tok::Slash {
                    let (_, scol) = self.bump();
                    match self.bump() {
                        (Tok::Int(den), _) => {
                            text = format!("{text}/{den}");
                        }
                        _ => return Err(self.syntax(scol, "incomplete fraction".into(), &["integer denominator"])),
                    }
                }
                let r: Rational =
                    text.parse().map_err(|e| self.semantic(col, format!("bad rational `{text}`: {e}")))?;
                t.coeff *= &r;
            }
            Tok::Var(idx) => {
                let i = self.index(&idx, col)?;
                let mut e = 1u32;
                if self.peek().0 == Tok::Caret {
                    let (_, ccol) = self.bump();
                    match self.bump() {
                        (Tok::Int(s), scol) => {
                            e = s
                                .parse::<u32>()
                                .ok()
                                .filter(|e| *e <= 64)
                                .ok_or_else(|| self.semantic(scol, format!("exponent {s} too large")))?;
                        }
                        _ => {
                            return Err(self.syntax(ccol, "`^` must be followed by an exponent".into(), &["integer exponent"]));
                        }
                    }
                }
                let mut m = t.mono.clone();
                for _ in 0..e {
                    m = m.times_var(i);
                }
                t.mono = m;
            }
            Tok::Dx => {
                let (open, ocol) = self.bump();
                if open != Tok::LParen {
                    return Err(self.syntax(ocol, format!("unexpected {}", open.describe()), &["("]));
                }
                let mut idx = Vec::new();
                loop {
                    match self.bump() {
                        (Tok::Int(s), icol) => idx.push(self.index(&s, icol)?),
                        (other, icol) => {
                            return Err(self.syntax(icol, format!("unexpected {}", other.describe()), &["integer"]))
                        }
                    }
                    match self.bump() {
                        (Tok::Comma, _) => continue,
                        (Tok::RParen, _) => break,
                        (other, icol) => {
                            return Err(self.syntax(icol, format!("unexpected {}", other.describe()), &[",", ")"]))
                        }
                    }
                }
                t.dx.get_or_insert_with(Vec::new).extend(idx);
            }
            Tok::Field(idx) => {
                let i = self.index(&idx, col)?;
                if t.field.is_some() {
                    return Err(self.semantic(col, "more than one d/dx in a term".into()));
                }
                t.field = Some(i);
            }
            other => return Err(self.syntax(col, format!("unexpected {}", other.describe()), FACTOR)),
        }
        Ok(())
    }
}

fn parse_terms(text: &str, n: usize, origin: Origin) -> Result<Vec<Term>, ParseError> {
    let lex = Lexer::run(text, origin)?;
    let mut p = Parser { toks: lex.toks, pos: 0, n, origin };
    if p.peek().0 == Tok::End {
        return Err(p.syntax(p.peek().1, "empty expression".into(), FACTOR));
    }
    p.expr()
}

fn semantic_at(origin: Origin, column: usize, msg: &str) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Semantic,
        line: origin.line,
        column,
        message: msg.to_string(),
        expected: vec![],
    }
}

pub(crate) fn parse_form_at(text: &str, n: usize, origin: Origin) -> Result<PolyForm, ParseError> {
    let terms = parse_terms(text, n, origin)?;
    let degree = terms[0].dx.as_ref().map_or(0, Vec::len);
    let mut out = PolyForm::zero(n, degree);
    for t in terms {
        if t.field.is_some() {
            return Err(semantic_at(origin, t.column, "vector field term in a differential form"));
        }
        let dx = t.dx.unwrap_or_default();
        if dx.len() != degree {
            return Err(semantic_at(origin, t.column, "terms of different form degree"));
        }
        if degree > n {
            return Err(semantic_at(origin, t.column, "form degree exceeds the ambient dimension"));
        }
        out.add_term(dx, PolyScalar::monomial(t.mono, t.coeff));
    }
    Ok(out)
}

pub(crate) fn parse_vector_field_at(text: &str, n: usize, origin: Origin) -> Result<PolyVectorField, ParseError> {
    let terms = parse_terms(text, n, origin)?;
    let mut comps = vec![PolyScalar::zero(n); n];
    for t in terms {
        if t.dx.is_some() {
            return Err(semantic_at(origin, t.column, "dx in a vector field"));
        }
        match t.field {
            Some(i) => comps[i].add_term(t.mono, t.coeff),
            None if t.coeff.is_zero() => {}
            None => return Err(semantic_at(origin, t.column, "vector field term without d/dx")),
        }
    }
    Ok(PolyVectorField::from_components(comps))
}

/// Parses a differential form in ambient dimension `n`.
pub fn parse_form(text: &str, n: usize) -> Result<PolyForm, ParseError> {
    parse_form_at(text, n, Origin::default())
}

/// Parses a vector field such as `x3*d/dx1 - x1*d/dx3`.
pub fn parse_vector_field(text: &str, n: usize) -> Result<PolyVectorField, ParseError> {
    parse_vector_field_at(text, n, Origin::default())
}

/// Parses a polynomial function.
pub fn parse_scalar(text: &str, n: usize) -> Result<PolyScalar, ParseError> {
    let f = parse_form(text, n)?;
    if f.degree() != 0 {
        return Err(semantic_at(Origin::default(), 1, "expected a function, found a form"));
    }
    Ok(f.coefficient(&[]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grammar_examples() {
        let a = parse_form("3/2 * x1^2*x3 * dx(1,2)", 3).unwrap();
        assert_eq!(a.degree(), 2);
        assert_eq!(a.to_string(), "3/2*x1^2*x3*dx(1,2)");
        let v = parse_vector_field("x3*d/dx1 - x1*d/dx3", 3).unwrap();
        assert_eq!(v.component(0).to_string(), "x3");
        assert_eq!(v.component(2).to_string(), "-x1");
        assert_eq!(parse_form("dx(2,1)", 2).unwrap(), parse_form("-dx(1,2)", 2).unwrap());
        assert_eq!(parse_form("dx(1)*dx(2)", 2).unwrap(), parse_form("dx(1,2)", 2).unwrap());
        assert_eq!(parse_scalar("-x1 + 1/3", 2).unwrap().to_string(), "1/3 - x1");
    }

    #[test]
    fn dangling_exponent_points_at_caret() {
        let e = parse_form("x1^", 3).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        assert_eq!(e.column, 3);
        assert!(e.expected.contains(&"integer exponent".to_string()));
        let e = parse_form("  2*x1^ + x2", 3).unwrap_err();
        assert_eq!(e.column, 7);
    }

    #[test]
    fn out_of_range_index_is_semantic() {
        let e = parse_vector_field("x5*d/dx1", 4).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Semantic);
        assert_eq!(e.column, 1);
        let e = parse_form("dx(1,5)", 4).unwrap_err();
        assert_eq!((e.kind, e.column), (ParseErrorKind::Semantic, 6));
    }

    #[test]
    fn decimals_rejected() {
        let e = parse_form("1.5*x1", 2).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Semantic);
        assert!(parse_form("1/0", 2).is_err());
    }

    #[test]
    fn syntax_errors_report_expected_tokens() {
        let e = parse_form("x1 x2", 2).unwrap_err();
        assert_eq!((e.kind, e.column), (ParseErrorKind::Syntax, 4));
        assert!(e.expected.contains(&"*".to_string()));
        let e = parse_form("", 2).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        let e = parse_form("2 + * x1", 2).unwrap_err();
        assert_eq!(e.column, 5);
        let e = parse_form("dx(1,", 2).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
    }

    #[test]
    fn mixed_degrees_rejected() {
        let e = parse_form("dx(1) + dx(1,2)", 2).unwrap_err();
        assert_eq!((e.kind, e.column), (ParseErrorKind::Semantic, 9));
        assert!(parse_vector_field("x1", 2).is_err());
        assert!(parse_form("d/dx1", 2).is_err());
    }
}
