//! Acceptance suite: one line per criterion, exit status nonzero only on
//! failures that are not listed in `KNOWN_FAILURES`.

mod common;

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use momentkit::action::{catalog_action, validate_action, CATALOG_ACTIONS};
use momentkit::gmodule::{apply_differential, ce_module_differential, dual_lie_kernel_module, Cochain, GModule};
use momentkit::moment::{
    check_module_morphism, check_sigma_cocycle, construct, make_equivariant, sigma, sigma_cocycle_in_module,
    verify_moment, EquivarianceModule, Equivariantization, Method, MomentError, MomentProblem, WeakMomentMap,
};
use momentkit::polyform::{lie_derivative, parse_form, poincare_homotopy, Monomial, PolyForm};
use momentkit::{LieAlgebra, MultiVector, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria expected to fail; see the decisions ledger.
const KNOWN_FAILURES: [u32; 1] = [3];

const COMPLEX_BUDGET: Duration = Duration::from_secs(5);
const SUITE_BUDGET: Duration = Duration::from_secs(60);
const HOMOTOPY_CASES: usize = 240;
const HOMOTOPY_MAX_COEFF_DEGREE: u32 = 6;
const CARTAN_MAX_COEFF_DEGREE: u32 = 2;
const CARTAN_RANDOM_FORMS: usize = 2;

const SEED_CARTAN: u64 = 0x5eed_0004;
const SEED_HOMOTOPY: u64 = 0x5eed_0005;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn problem(name: &str) -> MomentProblem {
    let (a, w) = catalog_action(name).expect("catalog action");
    MomentProblem::new(a, w).expect("multisymplectic")
}

fn random_form(rng: &mut ChaCha8Rng, n: usize, p: usize, max_deg: u32, terms: usize) -> PolyForm {
    let mut out = PolyForm::zero(n, p);
    let idx: Vec<usize> = (0..n).collect();
    for _ in 0..terms {
        let mut t: Vec<usize> = idx.choose_multiple(rng, p).cloned().collect();
        t.sort_unstable();
        let deg = rng.gen_range(0..=max_deg);
        let mut e = vec![0u32; n];
        for _ in 0..deg {
            e[rng.gen_range(0..n)] += 1;
        }
        let num = loop {
            let v = rng.gen_range(-6i64..=6);
            if v != 0 {
                break v;
            }
        };
        out.add_monomial(t, Monomial::from_exponents(e), Rational::new(num, rng.gen_range(1..=4)));
    }
    out
}

/// A constructed map together with where it came from.
struct Built {
    action: &'static str,
    label: String,
    map: WeakMomentMap,
}

struct Context {
    problems: Vec<(&'static str, MomentProblem)>,
    built: Vec<Built>,
    skipped: Vec<String>,
}

impl Context {
    fn problem(&self, name: &str) -> &MomentProblem {
        &self.problems.iter().find(|(n, _)| *n == name).unwrap().1
    }

    fn find(&self, action: &str, label: &str) -> &WeakMomentMap {
        &self.built.iter().find(|b| b.action == action && b.label == label).unwrap().map
    }
}

/// Builds every map the constructors admit, plus a closed perturbation of
/// the rotation map used by the equivariantization criterion.
fn build_context() -> Result<Context, String> {
    let problems: Vec<(&'static str, MomentProblem)> = CATALOG_ACTIONS.iter().map(|n| (*n, problem(n))).collect();
    let mut built = Vec::new();
    let mut skipped = Vec::new();
    for (name, pr) in &problems {
        for k in 1..=pr.max_degree() {
            for m in Method::ALL {
                match construct(pr, k, m) {
                    Ok(map) => built.push(Built { action: name, label: format!("{m} k={k}"), map }),
                    Err(MomentError::HypothesisFails(_)) => skipped.push(format!("{name} {m} k={k}")),
                    Err(e) => return Err(format!("{name} {m} k={k}: {e}")),
                }
            }
        }
    }
    let so3 = &problems.iter().find(|(n, _)| *n == "so3_r3").unwrap().1;
    let f = built.iter().find(|b| b.action == "so3_r3" && b.label == "poincare k=1").unwrap();
    let mut bump = vec![PolyForm::zero(3, 1); f.map.kernel().dim()];
    bump[0] = parse_form("dx(1)", 3).unwrap();
    let g = f.map.add_values(&bump);
    if !verify_moment(so3, &g).passed() {
        return Err("perturbed rotation map fails the defining equation".into());
    }
    built.push(Built { action: "so3_r3", label: "perturbed k=1".into(), map: g });
    Ok(Context { problems, built, skipped })
}

fn c1_complex_axioms(_: &Context) -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for alg in common::catalog() {
        let d = alg.dim();
        for k in 2..=d {
            let a = alg.boundary_matrix(k).map_err(|e| e.to_string())?.matrix;
            let b = alg.boundary_matrix(k - 1).map_err(|e| e.to_string())?.matrix;
            ensure(b.mul(&a).is_zero(), format!("{}: ∂∂ ≠ 0 at k={k}", alg.label()))?;
            checked += 1;
        }
        let mut modules: Vec<GModule> = vec![GModule::trivial(&alg, 1), GModule::adjoint(&alg), GModule::adjoint(&alg).dual()];
        for k in 1..=d {
            let (m, _) = dual_lie_kernel_module(&alg, k).map_err(|e| e.to_string())?;
            if m.dim() > 0 {
                modules.push(m);
            }
        }
        for m in &modules {
            checked += delta_squared(m, &alg)?;
        }
    }
    for name in CATALOG_ACTIONS {
        let pr = problem(name);
        let alg = pr.algebra();
        for k in 1..=pr.max_degree() {
            let m = EquivarianceModule::new(&pr, k, 1).map_err(|e| e.to_string())?;
            if m.dim() > 0 {
                checked += delta_squared(&m.module, alg)?;
            }
        }
    }
    let t = start.elapsed();
    ensure(t < COMPLEX_BUDGET, format!("took {t:.2?}, budget {COMPLEX_BUDGET:?}"))?;
    Ok(format!("{checked} compositions vanish exactly, {t:.2?}"))
}

fn delta_squared(m: &GModule, alg: &LieAlgebra) -> Result<usize, String> {
    let rep = m.validate(alg).map_err(|e| e.to_string())?;
    ensure(rep.passed(), format!("{}: {} is not a module", alg.label(), m.label()))?;
    let d = alg.dim();
    let mut checked = 0;
    for k in 0..d.saturating_sub(1) {
        let a = ce_module_differential(m, alg, k).map_err(|e| e.to_string())?;
        let b = ce_module_differential(m, alg, k + 1).map_err(|e| e.to_string())?;
        ensure(b.mul(&a).is_zero(), format!("{}: δδ ≠ 0 at k={k} on {}", alg.label(), m.label()))?;
        checked += 1;
    }
    Ok(checked)
}

fn c2_betti(_: &Context) -> Outcome {
    let pinned: [(&str, Vec<Option<usize>>); 4] = [
        ("abelian3", vec![Some(1), Some(3), Some(3), Some(1)]),
        ("su2", vec![Some(1), Some(0), Some(0), Some(1)]),
        ("h3", vec![None, Some(2), None, None]),
        ("so4", vec![Some(1), Some(0), Some(0), Some(2), Some(0), Some(0), Some(1)]),
    ];
    for (name, want) in &pinned {
        let alg = LieAlgebra::catalog(name).map_err(|e| e.to_string())?;
        let got = alg.betti_numbers();
        ensure(got.len() == want.len(), format!("{name}: length {}", got.len()))?;
        for (k, (g, w)) in got.iter().zip(want).enumerate() {
            if let Some(w) = w {
                ensure(g == w, format!("{name}: dim H^{k} = {g}, expected {w}"))?;
            }
        }
    }
    for alg in common::catalog() {
        let got = alg.betti_numbers();
        let oracle = common::betti_oracle(&alg);
        ensure(got == oracle, format!("{}: {got:?} vs oracle {oracle:?}", alg.label()))?;
    }
    Ok("pinned tables and integer-rank oracle agree on all catalog algebras".into())
}

fn c3_boundary_of_wedge(_: &Context) -> Outcome {
    let mut total = 0;
    let mut literal_fail = Vec::new();
    let mut signed_fail = 0;
    for alg in common::catalog() {
        let d = alg.dim();
        for k in 1..d {
            for p in alg.lie_kernel_basis(k).map_err(|e| e.to_string())? {
                for i in 0..d {
                    let xi = MultiVector::basis(d, i);
                    let lhs = alg.boundary(&p.wedge(&xi));
                    let rhs = alg.schouten(&p, &xi).map_err(|e| e.to_string())?;
                    total += 1;
                    if lhs != rhs {
                        literal_fail.push((alg.label().to_string(), k));
                    }
                    if lhs != rhs.scale(&Rational::sign_power(k)) {
                        signed_fail += 1;
                    }
                }
            }
        }
    }
    let signed = format!("signed form ∂(p∧ξ) = (-1)^k [p,ξ] fails on {signed_fail}/{total}");
    if literal_fail.is_empty() && signed_fail == 0 {
        return Ok(format!("{total} cases; {signed}"));
    }
    let mut ks: Vec<usize> = literal_fail.iter().map(|(_, k)| *k).collect();
    ks.sort_unstable();
    ks.dedup();
    Err(format!("literal identity fails on {}/{total} cases, k in {ks:?}; {signed}", literal_fail.len()))
}

fn c4_extended_cartan(ctx: &Context) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED_CARTAN);
    let mut cases = 0;
    for (name, pr) in &ctx.problems {
        let a = pr.action();
        let d = a.algebra().dim();
        let n = a.n_ambient();
        let omega = pr.omega().omega().clone();
        let mut tuples: Vec<Vec<usize>> = Vec::new();
        for i in 0..d {
            tuples.push(vec![i]);
            for j in (0..d).filter(|&j| j != i) {
                tuples.push(vec![i, j]);
                for l in (0..d).filter(|&l| l != i && l != j) {
                    tuples.push(vec![i, j, l]);
                }
            }
        }
        for t in &tuples {
            let mut taus = vec![omega.clone()];
            for _ in 0..CARTAN_RANDOM_FORMS {
                let p = rng.gen_range(t.len()..=n);
                taus.push(random_form(&mut rng, n, p, CARTAN_MAX_COEFF_DEGREE, 4));
            }
            for tau in &taus {
                let r = a.extended_cartan_residual(t, tau);
                ensure(r.is_zero(), format!("{name} factors {t:?}, τ = {tau}: residual {r}"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} residuals are the zero form"))
}

fn c5_homotopy(_: &Context) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED_HOMOTOPY);
    let n = 4;
    for case in 0..HOMOTOPY_CASES {
        let p = 1 + case % 4;
        let terms = rng.gen_range(1..=6);
        let alpha = random_form(&mut rng, n, p, HOMOTOPY_MAX_COEFF_DEGREE, terms);
        let dk = poincare_homotopy(&alpha).map_err(|e| e.to_string())?.exterior_d();
        let kd = poincare_homotopy(&alpha.exterior_d()).map_err(|e| e.to_string())?;
        let back = dk.add(&kd);
        ensure(back == alpha, format!("case {case}: dK+Kd of {alpha} is {back}"))?;
    }
    Ok(format!("dK + Kd = id on {HOMOTOPY_CASES} random forms, n = {n}"))
}

fn c6_construction(ctx: &Context) -> Outcome {
    for b in &ctx.built {
        let pr = ctx.problem(b.action);
        let r = verify_moment(pr, &b.map);
        ensure(r.passed(), format!("{} {}: {} nonzero residuals", b.action, b.label, r.residuals.len()))?;
    }
    let pr = ctx.problem("abelian_r3");
    let f2 = ctx.find("abelian_r3", "poincare k=2");
    let c = f2.kernel().coordinates(&MultiVector::decomposable(3, &[0, 1])).ok_or("e1∧e2 not in kernel")?;
    let want = parse_form("-x3", 3).unwrap();
    ensure(f2.evaluate(&c) == want, format!("f_2(e1∧e2) = {}", f2.evaluate(&c)))?;
    let f1 = ctx.find("abelian_r3", "poincare k=1");
    let c = f1.kernel().coordinates(&MultiVector::basis(3, 2)).ok_or("e3 not in kernel")?;
    let want = parse_form("-1/2*x1*dx(2) + 1/2*x2*dx(1)", 3).unwrap();
    ensure(f1.evaluate(&c) == want, format!("f_1(e3) = {}", f1.evaluate(&c)))?;
    ensure(pr.max_degree() == 2, "translations: unexpected degree range")?;
    let so3_empty = ctx.find("so3_r3", "poincare k=2").values().is_empty();
    ensure(so3_empty, "rotations k=2: expected an empty kernel")?;
    Ok(format!(
        "{} maps verified exactly, {} constructions skipped on unmet hypotheses; translation values match",
        ctx.built.len(),
        ctx.skipped.len()
    ))
}

fn c7_u2(ctx: &Context) -> Outcome {
    let pr = ctx.problem("u2_r4");
    let a = pr.action();
    let rep = validate_action(&LieAlgebra::u2(), a.generators()).map_err(|e| e.to_string())?;
    ensure(rep.passed() && rep.bracket_sign == Some(1), format!("u(2) validation: {rep:?}"))?;
    let ms = a.check_multisymplectic(pr.omega());
    ensure(ms.passed(), "volume form is not preserved")?;
    let kahler = parse_form("dx(1,2) + dx(3,4)", 4).unwrap();
    for (i, v) in a.generators().iter().enumerate() {
        ensure(lie_derivative(v, &kahler).is_zero(), format!("generator {i} moves dx(1,2) + dx(3,4)"))?;
    }
    let euler = parse_form("x1*dx(1) + x2*dx(2) + x3*dx(3) + x4*dx(4)", 4).unwrap();
    let one = a.invariant_closed_forms(1, 1);
    ensure(one.contains(&euler), "Σ xᵢdxᵢ is not an invariant closed 1-form")?;
    let two = a.invariant_closed_forms(2, 0);
    ensure(two.contains(&kahler), "dx(1,2) + dx(3,4) is not an invariant constant 2-form")?;
    Ok(format!(
        "action validates with s = +1, preserves vol; invariant closed 1-forms (D=1) dim {}, constant 2-forms dim {}",
        one.dim(),
        two.dim()
    ))
}

fn c8_so4(ctx: &Context) -> Outcome {
    let a = ctx.problem("so4_r4").action();
    let two = a.invariant_closed_forms(2, 0);
    ensure(two.dim() == 0, format!("invariant constant 2-forms have dim {}", two.dim()))?;
    let euler = parse_form("x1*dx(1) + x2*dx(2) + x3*dx(3) + x4*dx(4)", 4).unwrap();
    let one = a.invariant_closed_forms(1, 1);
    ensure(one.contains(&euler), "Σ xᵢdxᵢ is not an invariant closed 1-form")?;
    Ok(format!("invariant constant 2-forms = {{0}}; invariant closed 1-forms (D=1) dim {}", one.dim()))
}

fn c9_sigma_cocycle(ctx: &Context) -> Outcome {
    let mut nonzero = 0;
    for b in &ctx.built {
        let pr = ctx.problem(b.action);
        let s = sigma(pr, &b.map).map_err(|e| format!("{} {}: {e}", b.action, b.label))?;
        if !s.is_zero() {
            nonzero += 1;
        }
        let direct = check_sigma_cocycle(pr, b.map.kernel(), &s);
        ensure(direct.passed(), format!("{} {}: direct δΣ ≠ 0", b.action, b.label))?;
        if b.map.kernel().dim() == 0 {
            continue;
        }
        let m = EquivarianceModule::new(pr, b.map.degree(), s.max_coefficient_degree()).map_err(|e| e.to_string())?;
        let in_module = sigma_cocycle_in_module(pr, &m, &s).map_err(|e| e.to_string())?;
        ensure(in_module == Some(true), format!("{} {}: module δΣ = {in_module:?}", b.action, b.label))?;
    }
    // negative control: a corrupted Σ must be rejected by both routes
    let pr = ctx.problem("so3_r3");
    let f = ctx.find("so3_r3", "perturbed k=1");
    let mut s = sigma(pr, f).map_err(|e| e.to_string())?;
    s.entries[0][1] = parse_form("x3*dx(1) + x1*dx(3)", 3).unwrap();
    ensure(!check_sigma_cocycle(pr, f.kernel(), &s).passed(), "corrupted Σ passes the direct check")?;
    let m = EquivarianceModule::new(pr, 1, 1).map_err(|e| e.to_string())?;
    let in_module = sigma_cocycle_in_module(pr, &m, &s).map_err(|e| e.to_string())?;
    ensure(in_module == Some(false), "corrupted Σ passes the module check")?;
    Ok(format!(
        "δΣ = 0 on forms and in the truncated module for {} maps ({nonzero} with Σ ≠ 0); corrupted Σ rejected",
        ctx.built.len()
    ))
}

fn c10_morphism(ctx: &Context) -> Outcome {
    for b in &ctx.built {
        let pr = ctx.problem(b.action);
        let r = check_module_morphism(pr, &b.map);
        ensure(r.quotient_passed(), format!("{} {}: quotient fails at {:?}", b.action, b.label, r.quotient_failures))?;
        let zero = sigma(pr, &b.map).map_err(|e| e.to_string())?.is_zero();
        ensure(r.strong == zero, format!("{} {}: strong = {}, Σ = 0 is {zero}", b.action, b.label, r.strong))?;
    }
    let pr = ctx.problem("so4_r4");
    let f = ctx.find("so4_r4", "exactness k=2");
    let d = sigma(pr, f).map_err(|e| e.to_string())?.max_coefficient_degree();
    let repaired = match make_equivariant(pr, f, d).map_err(|e| e.to_string())? {
        Equivariantization::Repaired { map, .. } => map,
        Equivariantization::Obstructed { max_degree } => return Err(format!("so(4) obstructed at D={max_degree}")),
    };
    ensure(check_module_morphism(pr, &repaired).strong, "so(4) equivariant map fails the strong form")?;
    let pr = ctx.problem("abelian_r3");
    let t = ctx.find("abelian_r3", "poincare k=2");
    let r = check_module_morphism(pr, t);
    ensure(r.quotient_passed() && !r.strong, "translations: expected quotient pass, strong fail")?;
    let s = sigma(pr, t).map_err(|e| e.to_string())?;
    let minus_one = parse_form("-1", 3).unwrap();
    ensure(s.entries.iter().flatten().any(|e| *e == minus_one), "translations: no Σ entry equals -1")?;
    Ok(format!(
        "quotient form holds on {} maps; strong form holds on the equivariant so(4) map and fails on translations (Σ entry -1)",
        ctx.built.len()
    ))
}

fn c11_equivariantization(ctx: &Context) -> Outcome {
    let pr = ctx.problem("abelian_r3");
    let t = ctx.find("abelian_r3", "poincare k=2");
    match make_equivariant(pr, t, 0).map_err(|e| e.to_string())? {
        Equivariantization::Obstructed { max_degree: 0 } => {}
        other => return Err(format!("translations: expected obstruction at D=0, got {other:?}")),
    }
    let pr = ctx.problem("so3_r3");
    let g = ctx.find("so3_r3", "perturbed k=1");
    let s = sigma(pr, g).map_err(|e| e.to_string())?;
    ensure(!s.is_zero(), "perturbed rotation map is already equivariant")?;
    let d = s.max_coefficient_degree();
    let m = EquivarianceModule::new(pr, 1, d).map_err(|e| e.to_string())?;
    let h1 = m.h1(pr.algebra()).map_err(|e| e.to_string())?;
    ensure(h1 == 0, format!("truncated H^1 = {h1}"))?;
    let (map, l) = match make_equivariant(pr, g, d).map_err(|e| e.to_string())? {
        Equivariantization::Repaired { map, correction } => (map, correction),
        Equivariantization::Obstructed { max_degree } => return Err(format!("obstructed at D={max_degree}")),
    };
    let coords = m.coordinates(&l).ok_or("correction leaves the truncation")?;
    let l0 = Cochain::from_flat(0, m.dim(), &coords);
    let dl = apply_differential(&m.module, pr.algebra(), &l0).map_err(|e| e.to_string())?;
    ensure(Some(dl) == m.cochain(&s), "δl ≠ Σ")?;
    ensure(verify_moment(pr, &map).passed(), "repaired map fails the defining equation")?;
    ensure(sigma(pr, &map).map_err(|e| e.to_string())?.is_zero(), "repaired map has Σ ≠ 0")?;
    Ok(format!("translations obstructed at D=0; rotations (D={d}, module dim {}, H^1 = 0) repaired with δl = Σ", m.dim()))
}

fn c12_timing_and_determinism(started: Instant) -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems");
    let mut runs = 0;
    for name in CATALOG_ACTIONS {
        let file = dir.join(format!("{name}.mmk"));
        for format in ["text", "machine"] {
            let run = || {
                Command::new(env!("CARGO_BIN_EXE_momentkit"))
                    .args(["report", file.to_str().unwrap(), "--format", format])
                    .output()
                    .map_err(|e| e.to_string())
            };
            let (a, b) = (run()?, run()?);
            ensure(a.status.code() == Some(0), format!("{name} report exited with {:?}", a.status.code()))?;
            ensure(a.stdout == b.stdout && a.status == b.status, format!("{name} {format}: output differs between runs"))?;
            runs += 2;
        }
    }
    let t = started.elapsed();
    ensure(t < SUITE_BUDGET, format!("suite took {t:.2?}, budget {SUITE_BUDGET:?}"))?;
    Ok(format!("{runs} CLI runs byte-identical in pairs; suite {t:.2?}"))
}

fn main() -> ExitCode {
    let started = Instant::now();
    let ctx = match build_context() {
        Ok(c) => c,
        Err(e) => {
            println!("setup FAIL: {e}");
            return ExitCode::FAILURE;
        }
    };
    type Check = fn(&Context) -> Outcome;
    let checks: [(u32, &str, Check); 11] = [
        (1, "complex axioms", c1_complex_axioms),
        (2, "Betti tables", c2_betti),
        (3, "boundary of p∧ξ equals [p,ξ]", c3_boundary_of_wedge),
        (4, "extended Cartan identity", c4_extended_cartan),
        (5, "homotopy operator", c5_homotopy),
        (6, "moment construction", c6_construction),
        (7, "u(2) on R^4", c7_u2),
        (8, "so(4) on R^4", c8_so4),
        (9, "Sigma cocycle", c9_sigma_cocycle),
        (10, "morphism property", c10_morphism),
        (11, "equivariantization", c11_equivariantization),
    ];
    let mut results: Vec<(u32, &str, Outcome)> = checks.iter().map(|(i, name, f)| (*i, *name, f(&ctx))).collect();
    results.push((12, "runtime and determinism", c12_timing_and_determinism(started)));

    let mut unexpected = Vec::new();
    let mut known = Vec::new();
    for (i, name, r) in &results {
        match r {
            Ok(detail) => println!("criterion {i:>2} PASS  {name}: {detail}"),
            Err(detail) => {
                println!("criterion {i:>2} FAIL  {name}: {detail}");
                if KNOWN_FAILURES.contains(i) {
                    known.push(*i);
                } else {
                    unexpected.push(*i);
                }
            }
        }
    }
    let passed = results.iter().filter(|r| r.2.is_ok()).count();
    println!(
        "summary: {passed}/{} passed; known failures {known:?}; unexpected failures {unexpected:?}",
        results.len()
    );
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
