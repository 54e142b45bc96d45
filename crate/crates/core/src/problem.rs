//! Problem files: a line-oriented sectioned format.
//!
//! ```text
//! # rotations of R^3
//! [algebra]
//! algebra = "so3"            # or: dim = 3, names = a, b, c, [a, b] = c, ...
//! [action]
//! n = 3
//! L1 = x3*d/dx2 - x2*d/dx3   # one generator per basis element, by name
//! L2 = -x3*d/dx1 + x1*d/dx3
//! L3 = x2*d/dx1 - x1*d/dx2
//! [omega]
//! omega = dx(1,2,3)
//! [options]
//! max_poly_degree = 2
//! k = 1, 2
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::lie::LieAlgebra;
use crate::polyform::{parse_form_at, parse_vector_field_at, Origin, ParseError, ParseErrorKind, PolyForm, PolyVectorField};
use crate::rational::Rational;

/// How the algebra was given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraSpec {
    Catalog(String),
    /// Structure constants: `brackets[(i, j)]` is [eᵢ, eⱼ] for i < j.
    Inline { names: Vec<String>, brackets: BTreeMap<(usize, usize), Vec<(usize, Rational)>> },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub max_poly_degree: Option<u32>,
    pub degrees: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub algebra_spec: AlgebraSpec,
    pub algebra: LieAlgebra,
    pub n: usize,
    pub generators: Vec<PolyVectorField>,
    pub omega: PolyForm,
    pub options: Options,
}

struct Stmt {
    line: usize,
    key: String,
    key_col: usize,
    value: String,
    value_col: usize,
}

const SECTIONS: [&str; 4] = ["algebra", "action", "omega", "options"];

fn syntax(line: usize, column: usize, message: impl Into<String>, expected: &[&str]) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Syntax,
        line,
        column,
        message: message.into(),
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

fn semantic(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { kind: ParseErrorKind::Semantic, line, column, message: message.into(), expected: vec![] }
}

/// 1-based character column of byte offset `b` in `s`.
fn col(s: &str, b: usize) -> usize {
    s[..b].chars().count() + 1
}

fn split_sections(text: &str) -> Result<BTreeMap<&'static str, (usize, Vec<Stmt>)>, ParseError> {
    let mut out: BTreeMap<&'static str, (usize, Vec<Stmt>)> = BTreeMap::new();
    let mut current: Option<&'static str> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap();
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let lead = body.len() - body.trim_start().len();
        if trimmed.starts_with('[') && !trimmed.contains('=') {
            let Some(name) = trimmed.strip_prefix('[').and_then(|t| t.strip_suffix(']')) else {
                return Err(syntax(line, col(body, lead + trimmed.len()), "unterminated section header", &["]"]));
            };
            let name = name.trim();
            let Some(sec) = SECTIONS.iter().find(|s| **s == name) else {
                return Err(syntax(line, col(body, lead + 1), format!("unknown section `{name}`"), &SECTIONS));
            };
            if out.contains_key(sec) {
                return Err(semantic(line, col(body, lead), format!("duplicate section [{sec}]")));
            }
            out.insert(sec, (line, Vec::new()));
            current = Some(sec);
            continue;
        }
        let Some(sec) = current else {
            return Err(syntax(line, col(body, lead), "statement outside a section", &["[algebra]"]));
        };
        let Some(eq) = body.find('=') else {
            return Err(syntax(line, col(body, lead + trimmed.len()), "missing `=`", &["="]));
        };
        let key = body[..eq].trim().to_string();
        if key.is_empty() {
            return Err(syntax(line, col(body, eq), "missing key before `=`", &["key"]));
        }
        let rest = &body[eq + 1..];
        let vlead = rest.len() - rest.trim_start().len();
        let value = rest.trim().to_string();
        if value.is_empty() {
            return Err(syntax(line, col(body, eq + 1) + 1, "missing value after `=`", &["value"]));
        }
        out.get_mut(sec).unwrap().1.push(Stmt {
            line,
            key,
            key_col: col(body, lead),
            value,
            value_col: col(body, eq + 1 + vlead),
        });
    }
    Ok(out)
}

fn require<'a>(
    sections: &'a BTreeMap<&'static str, (usize, Vec<Stmt>)>,
    name: &str,
    last_line: usize,
) -> Result<&'a (usize, Vec<Stmt>), ParseError> {
    sections
        .get(name)
        .ok_or_else(|| syntax(last_line, 1, format!("missing section [{name}]"), &[&format!("[{name}]")]))
}

fn parse_uint(s: &Stmt, text: &str, offset: usize) -> Result<usize, ParseError> {
    let t = text.trim();
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        let kind = if t.contains('.') { "non-rational literal" } else { "expected a non-negative integer" };
        if t.contains('.') {
            return Err(semantic(s.line, s.value_col + offset, kind));
        }
        return Err(syntax(s.line, s.value_col + offset, kind, &["integer"]));
    }
    t.parse().map_err(|_| semantic(s.line, s.value_col + offset, "integer out of range"))
}

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic()) && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

/// `[sign] term (sign term)*`, `term := RATIONAL ['*' NAME] | NAME`.
fn parse_combination(s: &Stmt, names: &[String]) -> Result<Vec<(usize, Rational)>, ParseError> {
    let v = &s.value;
    let bytes = v.as_bytes();
    let mut pos = 0;
    let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut first = true;
    let skip = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos] == b' ' {
            *pos += 1;
        }
    };
    let at = |pos: usize| s.value_col + col(v, pos) - 1;
    loop {
        skip(&mut pos);
        let mut sign = Rational::one();
        if pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
            if bytes[pos] == b'-' {
                sign = -sign;
            }
            pos += 1;
            skip(&mut pos);
        } else if !first {
            return Err(syntax(s.line, at(pos), "expected `+` or `-`", &["+", "-"]));
        }
        first = false;
        let start = pos;
        while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || b"/_.".contains(&bytes[pos])) {
            pos += 1;
        }
        let tok = &v[start..pos];
        let mut coeff = Rational::one();
        let name_tok;
        if tok.starts_with(|c: char| c.is_ascii_digit()) {
            if tok.contains('.') {
                return Err(semantic(s.line, at(start), "non-rational literal"));
            }
            coeff = tok.parse().map_err(|_| syntax(s.line, at(start), "malformed number", &["integer", "p/q"]))?;
            skip(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
                skip(&mut pos);
                let ns = pos;
                while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                    pos += 1;
                }
                name_tok = Some((ns, &v[ns..pos]));
            } else {
                name_tok = None;
            }
        } else {
            name_tok = Some((start, tok));
        }
        match name_tok {
            Some((ns, name)) => {
                if name.is_empty() {
                    return Err(syntax(s.line, at(ns), "expected a basis element", &["name"]));
                }
                let idx = names
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| semantic(s.line, at(ns), format!("unknown basis element `{name}`")))?;
                *out.entry(idx).or_insert_with(Rational::zero) += sign * coeff;
            }
            None if coeff.is_zero() => {}
            None => return Err(syntax(s.line, at(pos), "constant term in a bracket", &["*"])),
        }
        skip(&mut pos);
        if pos >= bytes.len() {
            break;
        }
    }
    Ok(out.into_iter().filter(|(_, c)| !c.is_zero()).collect())
}

fn parse_algebra(sec: &(usize, Vec<Stmt>)) -> Result<(AlgebraSpec, LieAlgebra), ParseError> {
    let (hline, stmts) = sec;
    if let Some(s) = stmts.iter().find(|s| s.key == "algebra") {
        if let Some(other) = stmts.iter().find(|t| t.key != "algebra") {
            return Err(semantic(other.line, other.key_col, "catalog algebra takes no further statements"));
        }
        let name = s.value.trim_matches('"');
        let alg = LieAlgebra::catalog(name).map_err(|_| ParseError {
            kind: ParseErrorKind::Semantic,
            line: s.line,
            column: s.value_col,
            message: format!("unknown algebra `{name}`"),
            expected: LieAlgebra::CATALOG.iter().map(|c| c.to_string()).collect(),
        })?;
        return Ok((AlgebraSpec::Catalog(name.to_string()), alg));
    }
    let dim_stmt = stmts
        .iter()
        .find(|s| s.key == "dim")
        .ok_or_else(|| syntax(*hline, 1, "[algebra] needs `algebra = NAME` or `dim = N`", &["algebra", "dim"]))?;
    let dim = parse_uint(dim_stmt, &dim_stmt.value, 0)?;
    let names: Vec<String> = match stmts.iter().find(|s| s.key == "names") {
        Some(s) => {
            let mut names = Vec::new();
            let mut off = 0;
            for part in s.value.split(',') {
                let t = part.trim();
                let c = s.value_col + col(&s.value, off + (part.len() - part.trim_start().len())) - 1;
                if !is_ident(t) {
                    return Err(syntax(s.line, c, format!("invalid name `{t}`"), &["identifier"]));
                }
                if names.iter().any(|n| n == t) {
                    return Err(semantic(s.line, c, format!("duplicate name `{t}`")));
                }
                names.push(t.to_string());
                off += part.len() + 1;
            }
            if names.len() != dim {
                return Err(semantic(s.line, s.value_col, format!("expected {dim} names, got {}", names.len())));
            }
            names
        }
        None => (1..=dim).map(|i| format!("e{i}")).collect(),
    };
    let mut brackets = BTreeMap::new();
    for s in stmts {
        match s.key.as_str() {
            "dim" | "names" => continue,
            k if k.starts_with('[') => {
                let inner = k
                    .strip_prefix('[')
                    .and_then(|t| t.strip_suffix(']'))
                    .ok_or_else(|| syntax(s.line, s.key_col + k.chars().count(), "unterminated bracket", &["]"]))?;
                let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
                if parts.len() != 2 {
                    return Err(syntax(s.line, s.key_col, "bracket needs two basis elements", &["[a, b]"]));
                }
                let idx = |name: &str| {
                    names
                        .iter()
                        .position(|n| n == name)
                        .ok_or_else(|| semantic(s.line, s.key_col + 1, format!("unknown basis element `{name}`")))
                };
                let (i, j) = (idx(parts[0])?, idx(parts[1])?);
                if i == j {
                    return Err(semantic(s.line, s.key_col, "bracket of an element with itself"));
                }
                let mut rhs = parse_combination(s, &names)?;
                let key = if i < j {
                    (i, j)
                } else {
                    rhs.iter_mut().for_each(|(_, c)| *c = -c.clone());
                    (j, i)
                };
                if brackets.insert(key, rhs).is_some() {
                    return Err(semantic(s.line, s.key_col, "bracket given twice"));
                }
            }
            k => {
                return Err(syntax(s.line, s.key_col, format!("unknown key `{k}`"), &["dim", "names", "[a, b]"]))
            }
        }
    }
    let structure: Vec<_> = brackets
        .iter()
        .flat_map(|(&(i, j), rhs)| rhs.iter().map(move |(k, c)| (i, j, *k, c.clone())))
        .collect();
    let alg = LieAlgebra::new("inline", dim, structure, Some(names.clone())).expect("indices checked");
    Ok((AlgebraSpec::Inline { names, brackets }, alg))
}

/// Parses and validates a problem file. Errors carry line and column.
pub fn parse_problem(text: &str) -> Result<ProblemFile, ParseError> {
    let sections = split_sections(text)?;
    let last = text.lines().count().max(1);
    let (algebra_spec, algebra) = parse_algebra(require(&sections, "algebra", last)?)?;

    let (aline, action) = require(&sections, "action", last)?;
    let n_stmt = action
        .iter()
        .find(|s| s.key == "n")
        .ok_or_else(|| syntax(*aline, 1, "[action] needs `n = DIM`", &["n"]))?;
    let n = parse_uint(n_stmt, &n_stmt.value, 0)?;
    if n == 0 {
        return Err(semantic(n_stmt.line, n_stmt.value_col, "ambient dimension must be positive"));
    }
    let mut generators: Vec<Option<PolyVectorField>> = vec![None; algebra.dim()];
    for s in action.iter().filter(|s| s.key != "n") {
        let idx = algebra.names().iter().position(|nm| *nm == s.key).ok_or_else(|| ParseError {
            kind: ParseErrorKind::Semantic,
            line: s.line,
            column: s.key_col,
            message: format!("`{}` is not a basis element", s.key),
            expected: algebra.names().to_vec(),
        })?;
        if generators[idx].is_some() {
            return Err(semantic(s.line, s.key_col, format!("generator `{}` given twice", s.key)));
        }
        let origin = Origin { line: s.line, column: s.value_col };
        generators[idx] = Some(parse_vector_field_at(&s.value, n, origin)?);
    }
    let generators = generators
        .into_iter()
        .enumerate()
        .map(|(i, g)| g.ok_or_else(|| semantic(*aline, 1, format!("missing generator for `{}`", algebra.names()[i]))))
        .collect::<Result<Vec<_>, _>>()?;

    let (oline, om) = require(&sections, "omega", last)?;
    let mut omega = None;
    for s in om {
        if s.key != "omega" || omega.is_some() {
            return Err(syntax(s.line, s.key_col, format!("unexpected `{}`", s.key), &["omega"]));
        }
        omega = Some(parse_form_at(&s.value, n, Origin { line: s.line, column: s.value_col })?);
    }
    let omega = omega.ok_or_else(|| syntax(*oline, 1, "[omega] needs `omega = FORM`", &["omega"]))?;

    let mut options = Options::default();
    if let Some((_, stmts)) = sections.get("options") {
        for s in stmts {
            match s.key.as_str() {
                "max_poly_degree" if options.max_poly_degree.is_none() => {
                    let d = parse_uint(s, &s.value, 0)?;
                    options.max_poly_degree =
                        Some(u32::try_from(d).map_err(|_| semantic(s.line, s.value_col, "degree out of range"))?);
                }
                "k" if options.degrees.is_none() => {
                    let mut ks = Vec::new();
                    let mut off = 0;
                    for part in s.value.split(',') {
                        let lead = part.len() - part.trim_start().len();
                        let k = parse_uint(s, part, col(&s.value, off + lead) - 1)?;
                        if k == 0 || k > algebra.dim() {
                            return Err(semantic(
                                s.line,
                                s.value_col + col(&s.value, off + lead) - 1,
                                format!("degree {k} outside 1..={}", algebra.dim()),
                            ));
                        }
                        ks.push(k);
                        off += part.len() + 1;
                    }
                    ks.sort_unstable();
                    ks.dedup();
                    options.degrees = Some(ks);
                }
                k => {
                    return Err(syntax(s.line, s.key_col, format!("unexpected `{k}`"), &["max_poly_degree", "k"]))
                }
            }
        }
    }
    Ok(ProblemFile { algebra_spec, algebra, n, generators, omega, options })
}

impl ProblemFile {
    /// Canonical text; `parse_problem(p.serialize())` reproduces `p`.
    pub fn serialize(&self) -> String {
        let mut out = String::from("[algebra]\n");
        match &self.algebra_spec {
            AlgebraSpec::Catalog(name) => writeln!(out, "algebra = \"{name}\"").unwrap(),
            AlgebraSpec::Inline { names, brackets } => {
                writeln!(out, "dim = {}", names.len()).unwrap();
                writeln!(out, "names = {}", names.join(", ")).unwrap();
                for (&(i, j), rhs) in brackets {
                    let mut s = String::new();
                    for (k, c) in rhs {
                        let mag = c.abs();
                        let body = if mag.is_one() { names[*k].clone() } else { format!("{mag}*{}", names[*k]) };
                        match (s.is_empty(), c.is_negative()) {
                            (true, false) => s.push_str(&body),
                            (true, true) => s.push_str(&format!("-{body}")),
                            (false, false) => s.push_str(&format!(" + {body}")),
                            (false, true) => s.push_str(&format!(" - {body}")),
                        }
                    }
                    if s.is_empty() {
                        s.push('0');
                    }
                    writeln!(out, "[{}, {}] = {s}", names[i], names[j]).unwrap();
                }
            }
        }
        writeln!(out, "[action]\nn = {}", self.n).unwrap();
        for (name, g) in self.algebra.names().iter().zip(&self.generators) {
            writeln!(out, "{name} = {g}").unwrap();
        }
        writeln!(out, "[omega]\nomega = {}", self.omega).unwrap();
        if self.options != Options::default() {
            out.push_str("[options]\n");
            if let Some(d) = self.options.max_poly_degree {
                writeln!(out, "max_poly_degree = {d}").unwrap();
            }
            if let Some(ks) = &self.options.degrees {
                let ks: Vec<String> = ks.iter().map(usize::to_string).collect();
                writeln!(out, "k = {}", ks.join(", ")).unwrap();
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SO4: &str = "[algebra]\nalgebra = \"so4\"\n[action]\nn = 4\n\
        M12 = x1*d/dx2 - x2*d/dx1\nM13 = x1*d/dx3 - x3*d/dx1\nM14 = x1*d/dx4 - x4*d/dx1\n\
        M23 = x2*d/dx3 - x3*d/dx2\nM24 = x2*d/dx4 - x4*d/dx2\nM34 = x3*d/dx4 - x4*d/dx3\n\
        [omega]\nomega = dx(1,2,3,4)\n";

    #[test]
    fn parses_catalog_problem() {
        let p = parse_problem(SO4).unwrap();
        assert_eq!(p.algebra.label(), "so4");
        assert_eq!(p.generators.len(), 6);
        assert_eq!(p.omega, PolyForm::volume(4));
        assert_eq!(parse_problem(&p.serialize()).unwrap(), p);
    }

    #[test]
    fn malformed_exponent() {
        let text = SO4.replace("M12 = x1*d/dx2", "M12 = x1^*d/dx2");
        let e = parse_problem(&text).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        assert_eq!((e.line, e.column), (5, 9));
    }

    #[test]
    fn out_of_range_variable() {
        let text = SO4.replace("M34 = x3*d/dx4", "M34 = x5*d/dx4");
        let e = parse_problem(&text).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Semantic);
        assert_eq!((e.line, e.column), (10, 7));
    }

    #[test]
    fn inline_algebra_round_trip() {
        let text = "# heisenberg\n[algebra]\ndim = 3\nnames = X, Y, Z\n[Y, X] = -Z   # reversed order\n\
            [action]\nn = 3\nX = d/dx1\nY = d/dx2 + x1*d/dx3\nZ = d/dx3\n[omega]\nomega = dx(1,2,3)\n\
            [options]\nk = 2, 1\nmax_poly_degree = 3\n";
        let p = parse_problem(text).unwrap();
        assert_eq!(p.algebra.bracket_basis(0, 1), &[(2, Rational::one())]);
        assert_eq!(p.options.degrees, Some(vec![1, 2]));
        let s = p.serialize();
        assert!(s.contains("[X, Y] = Z\n"), "{s}");
        let q = parse_problem(&s).unwrap();
        assert_eq!(q, p);
        assert_eq!(q.serialize(), s);
    }

    #[test]
    fn structural_errors() {
        let e = parse_problem("n = 3\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        let e = parse_problem("[algebra]\nalgebra = \"so5\"\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Semantic);
        assert_eq!(e.column, 11);
        let e = parse_problem("[algebra]\nalgebra = su2\n[action]\nn = 3\ne1 = d/dx1\n").unwrap_err();
        assert!(e.message.contains("missing generator"), "{e}");
        let e = parse_problem("[algebra]\ndim = 2\n[e1, e2] = 1.5*e1\n").unwrap_err();
        assert_eq!((e.kind, e.column), (ParseErrorKind::Semantic, 12));
        let e = parse_problem("[algebra]\ndim = 2\n[e1, e2] = e1 e2\n").unwrap_err();
        assert_eq!((e.kind, e.column), (ParseErrorKind::Syntax, 15));
        let e = parse_problem("[bogus]\n").unwrap_err();
        assert_eq!(e.expected.len(), 4);
    }
}
