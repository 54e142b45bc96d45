//! Command execution behind the `momentkit` binary. Each command produces a
//! text report, a JSON value with the same content, and an exit status.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::action::{validate_action, LieAction, MultisympForm};
use crate::lie::LieAlgebra;
use crate::moment::{
    check_module_morphism, check_sigma_cocycle, construct, existence_diagnostic, make_equivariant, sigma,
    verify_moment, DiagnosticReport, Equivariantization, Method, MomentError, MomentProblem,
};
use crate::problem::ProblemFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Cohomology,
    Kernel,
    CheckAction,
    Invariants,
    Diagnose,
    Construct,
    Equivariance,
    Report,
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub degrees: Option<Vec<usize>>,
    pub max_poly_degree: Option<u32>,
    pub method: Option<Method>,
}

#[derive(Clone, Debug)]
pub struct Output {
    pub text: String,
    pub json: Value,
    pub exit: i32,
}

impl Output {
    fn input_error(msg: String) -> Self {
        Output { text: format!("error: {msg}\n"), json: json!({ "error": msg }), exit: EXIT_INPUT_ERROR }
    }
}

struct Ctx<'a> {
    file: &'a ProblemFile,
    opts: &'a RunOptions,
}

impl Ctx<'_> {
    fn alg(&self) -> &LieAlgebra {
        &self.file.algebra
    }

    fn max_poly_degree(&self) -> Option<u32> {
        self.opts.max_poly_degree.or(self.file.options.max_poly_degree)
    }

    fn degrees(&self, max: usize) -> Result<Vec<usize>, String> {
        let ks = match self.opts.degrees.as_ref().or(self.file.options.degrees.as_ref()) {
            Some(ks) => ks.clone(),
            None => (1..=max).collect(),
        };
        if let Some(k) = ks.iter().find(|&&k| k == 0 || k > max) {
            return Err(format!("degree {k} outside 1..={max}"));
        }
        Ok(ks)
    }

    fn plectic_degree(&self) -> usize {
        self.file.omega.degree().saturating_sub(1)
    }

    fn problem(&self) -> Result<MomentProblem, String> {
        let action = LieAction::new(self.file.algebra.clone(), self.file.generators.clone()).map_err(|e| e.to_string())?;
        let omega = MultisympForm::new(self.file.omega.clone()).map_err(|e| e.to_string())?;
        MomentProblem::new(action, omega).map_err(|e| e.to_string())
    }
}

/// Runs one command. Input errors (bad degrees) give exit 2; failed checks
/// or unmet prerequisites give exit 1.
pub fn run_command(cmd: Command, file: &ProblemFile, opts: &RunOptions) -> Output {
    let ctx = Ctx { file, opts };
    let r = match cmd {
        Command::Cohomology => Ok(cohomology(&ctx)),
        Command::Kernel => kernel(&ctx),
        Command::CheckAction => Ok(check_action(&ctx)),
        Command::Invariants => invariants(&ctx),
        Command::Diagnose => diagnose(&ctx),
        Command::Construct => construct_cmd(&ctx),
        Command::Equivariance => equivariance(&ctx),
        Command::Report => report(&ctx),
    };
    r.unwrap_or_else(Output::input_error)
}

fn jacobi_failure(alg: &LieAlgebra) -> Option<Output> {
    let (ijk, _) = alg.validate_jacobi().failure?;
    let n = alg.names();
    let msg = format!("Jacobi identity fails on ({}, {}, {})", n[ijk.0], n[ijk.1], n[ijk.2]);
    Some(Output { text: format!("{msg}\n"), json: json!({ "jacobi_failure": [n[ijk.0], n[ijk.1], n[ijk.2]] }), exit: EXIT_CHECK_FAILED })
}

fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(c, s)| {
                let pad = widths[c] - s.chars().count();
                if c == 0 {
                    format!("{s}{}", " ".repeat(pad))
                } else {
                    format!("{}{s}", " ".repeat(pad))
                }
            })
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn betti_table(alg: &LieAlgebra) -> (String, Vec<usize>, Vec<usize>) {
    let betti = alg.betti_numbers();
    let kernels: Vec<usize> = (1..=alg.dim()).map(|k| alg.lie_kernel(k).unwrap().dim()).collect();
    let mut rows = vec![vec!["k".to_string()], vec!["dim H^k".to_string()], vec!["dim P_k".to_string()]];
    for k in 0..=alg.dim() {
        rows[0].push(k.to_string());
        rows[1].push(betti[k].to_string());
        rows[2].push(if k == 0 { "-".into() } else { kernels[k - 1].to_string() });
    }
    (table(&rows), betti, kernels)
}

fn cohomology(ctx: &Ctx) -> Output {
    let alg = ctx.alg();
    if let Some(o) = jacobi_failure(alg) {
        return o;
    }
    let (t, betti, kernels) = betti_table(alg);
    Output {
        text: format!("algebra {} (dimension {})\n{t}", alg.label(), alg.dim()),
        json: json!({ "algebra": alg.label(), "dim": alg.dim(), "betti": betti, "kernel_dims": kernels }),
        exit: EXIT_OK,
    }
}

fn kernel(ctx: &Ctx) -> Result<Output, String> {
    let alg = ctx.alg();
    if let Some(o) = jacobi_failure(alg) {
        return Ok(o);
    }
    let mut text = String::new();
    let mut entries = Vec::new();
    for k in ctx.degrees(alg.dim())? {
        let basis = alg.lie_kernel_basis(k).unwrap();
        writeln!(text, "P_{k} (dimension {})", basis.len()).unwrap();
        let shown: Vec<String> = basis.iter().map(|p| p.display_with(alg.names())).collect();
        for (i, p) in shown.iter().enumerate() {
            writeln!(text, "  p{} = {p}", i + 1).unwrap();
        }
        entries.push(json!({ "k": k, "basis": shown }));
    }
    Ok(Output { text, json: json!({ "kernels": entries }), exit: EXIT_OK })
}

fn check_action(ctx: &Ctx) -> Output {
    let alg = ctx.alg();
    let names = alg.names();
    let mut text = format!("action of {} on R^{}\n", alg.label(), ctx.file.n);
    let mut exit = EXIT_OK;
    let mut j = serde_json::Map::new();
    if let Some(o) = jacobi_failure(alg) {
        return o;
    }
    match validate_action(alg, &ctx.file.generators) {
        Err(e) => {
            writeln!(text, "brackets: FAIL ({e})").unwrap();
            j.insert("brackets".into(), json!({ "pass": false, "error": e.to_string() }));
            exit = EXIT_CHECK_FAILED;
        }
        Ok(r) => match r.failure {
            Some(((a, b), residual)) => {
                writeln!(
                    text,
                    "brackets: FAIL at [V_{0}, V_{1}] vs V_[{0}, {1}] (residual {residual})",
                    names[a], names[b]
                )
                .unwrap();
                j.insert(
                    "brackets".into(),
                    json!({ "pass": false, "pair": [names[a], names[b]], "residual": residual.to_string() }),
                );
                exit = EXIT_CHECK_FAILED;
            }
            None => {
                let s = r.bracket_sign.unwrap();
                let note = if r.sign_determined { "" } else { ", all brackets vanish" };
                writeln!(text, "brackets: pass ([V_a, V_b] = {}V_[a,b]{note})", if s > 0 { "" } else { "-" }).unwrap();
                j.insert("brackets".into(), json!({ "pass": true, "sign": s, "determined": r.sign_determined }));
            }
        },
    }
    match MultisympForm::new(ctx.file.omega.clone()) {
        Err(e) => {
            writeln!(text, "omega: FAIL ({e})").unwrap();
            j.insert("omega".into(), json!({ "pass": false, "error": e.to_string() }));
            exit = EXIT_CHECK_FAILED;
        }
        Ok(w) => {
            writeln!(text, "omega: closed and nondegenerate (plectic degree {})", w.plectic_degree()).unwrap();
            j.insert("omega".into(), json!({ "pass": true, "plectic_degree": w.plectic_degree() }));
            let mut bad = Vec::new();
            for (i, g) in ctx.file.generators.iter().enumerate() {
                let r = crate::polyform::lie_derivative(g, &ctx.file.omega);
                if !r.is_zero() {
                    writeln!(text, "preservation: FAIL L_V({}) omega = {r}", names[i]).unwrap();
                    bad.push(json!({ "generator": names[i], "residual": r.to_string() }));
                }
            }
            if bad.is_empty() {
                writeln!(text, "preservation: pass").unwrap();
            } else {
                exit = EXIT_CHECK_FAILED;
            }
            j.insert("preservation".into(), json!({ "pass": bad.is_empty(), "failures": bad }));
        }
    }
    Output { text, json: Value::Object(j), exit }
}

fn invariants(ctx: &Ctx) -> Result<Output, String> {
    let action = match LieAction::new(ctx.file.algebra.clone(), ctx.file.generators.clone()) {
        Ok(a) => a,
        Err(e) => return Ok(check_failed(format!("action: {e}"))),
    };
    let plectic = ctx.plectic_degree();
    let d = ctx.max_poly_degree().unwrap_or(1);
    let mut text = String::new();
    let mut entries = Vec::new();
    for k in ctx.degrees(plectic.min(ctx.alg().dim()))? {
        let p = plectic - k;
        let inv = action.invariant_closed_forms(p, d);
        writeln!(text, "invariant closed {p}-forms, coefficient degree <= {d}: dimension {}", inv.dim()).unwrap();
        let shown: Vec<String> = inv.basis.iter().map(|b| b.to_string()).collect();
        for b in &shown {
            writeln!(text, "  {b}").unwrap();
        }
        entries.push(json!({ "k": k, "form_degree": p, "basis": shown }));
    }
    Ok(Output { text, json: json!({ "max_poly_degree": d, "invariants": entries }), exit: EXIT_OK })
}

fn check_failed(msg: String) -> Output {
    Output { text: format!("{msg}\n"), json: json!({ "failure": msg }), exit: EXIT_CHECK_FAILED }
}

fn render_diagnostic(alg: &LieAlgebra, r: &DiagnosticReport) -> String {
    let (betti, _, _) = betti_table(alg);
    let mut text = format!("algebra {} (dimension {})\n{betti}\n", alg.label(), alg.dim());
    let mut rows = vec![["k", "dim P_k", "H^k(g)", "H^0(g,P*)", "inv. forms", "dim M", "H^0(M)", "H^1(M)"]
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()];
    for d in &r.degrees {
        rows.push(vec![
            d.k.to_string(),
            d.kernel_dim.to_string(),
            d.betti.to_string(),
            d.h0_dual_kernel.to_string(),
            d.invariant_closed_forms.to_string(),
            d.module_dim.to_string(),
            d.h0_module.to_string(),
            d.h1_module.map_or("skipped".into(), |h| h.to_string()),
        ]);
    }
    writeln!(text, "M = P*_k (x) closed (n-k)-forms of coefficient degree <= {}", r.max_poly_degree).unwrap();
    text.push_str(&table(&rows));
    for d in &r.degrees {
        writeln!(text, "k = {}", d.k).unwrap();
        for v in &d.verdicts {
            let mark = match v.holds {
                Some(true) => "yes",
                Some(false) => "no",
                None => "?",
            };
            writeln!(text, "  [{mark:>3}] {}: {} => {}", v.route, v.hypothesis, v.conclusion).unwrap();
        }
    }
    text
}

fn diagnose(ctx: &Ctx) -> Result<Output, String> {
    let pr = match ctx.problem() {
        Ok(p) => p,
        Err(e) => return Ok(check_failed(e)),
    };
    let ks = ctx.degrees(pr.max_degree())?;
    let d = ctx.max_poly_degree().unwrap_or(1);
    let r = existence_diagnostic(&pr, &ks, d).map_err(|e| e.to_string())?;
    Ok(Output {
        text: render_diagnostic(pr.algebra(), &r),
        json: json!({ "betti": pr.algebra().betti_numbers(), "diagnostic": r }),
        exit: EXIT_OK,
    })
}

fn construct_cmd(ctx: &Ctx) -> Result<Output, String> {
    let pr = match ctx.problem() {
        Ok(p) => p,
        Err(e) => return Ok(check_failed(e)),
    };
    let method = ctx.opts.method.unwrap_or(Method::Poincare);
    let names = pr.algebra().names();
    let mut text = format!("method: {method}\n");
    let mut entries = Vec::new();
    let mut exit = EXIT_OK;
    for k in ctx.degrees(pr.max_degree())? {
        match construct(&pr, k, method) {
            Ok(f) => {
                let v = verify_moment(&pr, &f);
                writeln!(text, "k = {k}").unwrap();
                text.push_str(&f.render(names));
                writeln!(
                    text,
                    "verification: {} ({} nonzero residuals)",
                    if v.passed() { "pass" } else { "FAIL" },
                    v.residuals.len()
                )
                .unwrap();
                if !v.passed() {
                    exit = EXIT_CHECK_FAILED;
                }
                entries.push(map_json(&pr, k, &f, v.residuals.len()));
            }
            Err(e) => {
                writeln!(text, "k = {k}\n{e}").unwrap();
                entries.push(json!({ "k": k, "error": e.to_string() }));
                exit = EXIT_CHECK_FAILED;
            }
        }
    }
    Ok(Output { text, json: json!({ "method": method, "components": entries }), exit })
}

fn map_json(pr: &MomentProblem, k: usize, f: &crate::moment::WeakMomentMap, residuals: usize) -> Value {
    let names = pr.algebra().names();
    let values: Vec<Value> = f
        .kernel()
        .basis()
        .iter()
        .zip(f.values())
        .map(|(p, v)| json!({ "p": p.display_with(names), "f": v.to_string() }))
        .collect();
    json!({ "k": k, "zeta": f.zeta(), "values": values, "nonzero_residuals": residuals })
}

fn equivariance(ctx: &Ctx) -> Result<Output, String> {
    let pr = match ctx.problem() {
        Ok(p) => p,
        Err(e) => return Ok(check_failed(e)),
    };
    let method = ctx.opts.method.unwrap_or(Method::Poincare);
    let names = pr.algebra().names();
    let mut text = String::new();
    let mut entries = Vec::new();
    let mut exit = EXIT_OK;
    for k in ctx.degrees(pr.max_degree())? {
        let f = match construct(&pr, k, method) {
            Ok(f) => f,
            Err(e) => {
                writeln!(text, "k = {k}: {e}").unwrap();
                entries.push(json!({ "k": k, "error": e.to_string() }));
                exit = EXIT_CHECK_FAILED;
                continue;
            }
        };
        let s = sigma(&pr, &f).map_err(|e| e.to_string())?;
        let d = ctx.max_poly_degree().unwrap_or_else(|| s.max_coefficient_degree());
        writeln!(text, "k = {k} (method {method}, coefficient degree <= {d})").unwrap();
        let rendered = s.render(pr.algebra(), f.kernel());
        if rendered.is_empty() {
            text.push_str("Sigma = 0\n");
        } else {
            text.push_str(&rendered);
        }
        let cocycle = check_sigma_cocycle(&pr, f.kernel(), &s);
        writeln!(text, "cocycle: {}", if cocycle.passed() { "pass" } else { "FAIL" }).unwrap();
        if !cocycle.passed() {
            exit = EXIT_CHECK_FAILED;
        }
        let morph = check_module_morphism(&pr, &f);
        writeln!(
            text,
            "morphism: quotient {}, strong {}",
            if morph.quotient_passed() { "pass" } else { "FAIL" },
            if morph.strong { "pass" } else { "fail" }
        )
        .unwrap();
        if !morph.quotient_passed() {
            exit = EXIT_CHECK_FAILED;
        }
        let eq = match make_equivariant(&pr, &f, d) {
            Ok(Equivariantization::Repaired { map, correction }) => {
                if correction.iter().all(|c| c.is_zero()) {
                    writeln!(text, "equivariant: already (correction 0)").unwrap();
                } else {
                    writeln!(text, "equivariantized map:").unwrap();
                    text.push_str(&map.render(names));
                }
                json!({ "status": "repaired", "map": map_json(&pr, k, &map, 0) })
            }
            Ok(Equivariantization::Obstructed { max_degree }) => {
                writeln!(text, "equivariantization: obstructed within coefficient degree <= {max_degree}").unwrap();
                json!({ "status": "obstructed", "max_poly_degree": max_degree })
            }
            Err(e @ MomentError::HypothesisFails(_)) => {
                writeln!(text, "equivariantization: {e}").unwrap();
                json!({ "status": "skipped", "reason": e.to_string() })
            }
            Err(e) => return Err(e.to_string()),
        };
        let sigma_json: Vec<Vec<String>> =
            s.entries.iter().map(|row| row.iter().map(|e| e.to_string()).collect()).collect();
        entries.push(json!({
            "k": k,
            "max_poly_degree": d,
            "sigma": sigma_json,
            "cocycle": cocycle.passed(),
            "morphism": { "quotient": morph.quotient_passed(), "strong": morph.strong },
            "equivariantization": eq,
        }));
    }
    Ok(Output { text, json: json!({ "method": method, "degrees": entries }), exit })
}

fn report(ctx: &Ctx) -> Result<Output, String> {
    let mut text = String::new();
    let mut j = serde_json::Map::new();
    let mut exit = EXIT_OK;
    let mut section = |name: &str, o: Output, exit: &mut i32| {
        writeln!(text, "== {name} ==").unwrap();
        text.push_str(&o.text);
        text.push('\n');
        j.insert(name.to_string(), o.json);
        *exit = (*exit).max(o.exit);
    };
    section("cohomology", cohomology(ctx), &mut exit);
    section("kernel", kernel(ctx)?, &mut exit);
    section("check-action", check_action(ctx), &mut exit);
    section("invariants", invariants(ctx)?, &mut exit);
    section("diagnose", diagnose(ctx)?, &mut exit);
    for m in Method::ALL {
        let opts = RunOptions { method: Some(m), ..ctx.opts.clone() };
        let sub = Ctx { file: ctx.file, opts: &opts };
        let mut o = construct_cmd(&sub)?;
        // unmet hypotheses of the cohomological routes are findings, not failures
        if m != Method::Poincare {
            o.exit = EXIT_OK;
        }
        section(&format!("construct {m}"), o, &mut exit);
    }
    section("equivariance", equivariance(ctx)?, &mut exit);
    Ok(Output { text, json: Value::Object(j), exit })
}
