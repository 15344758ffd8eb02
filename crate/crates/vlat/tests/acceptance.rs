//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary (no libtest harness) so the verdict lines are
//! always visible. Exits non-zero if any criterion fails, except those in
//! `KNOWN_UNATTAINABLE`, which are still run and reported at full strength;
//! set `VLAT_STRICT=1` to make those fatal too.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::process::Command;
use std::time::Instant;

use rand::Rng;
use vlat::random::{case_rng, random_poly};
use vlat::suites::{verify_identities, verify_lattice, verify_norms, LatticeConfig, RunConfig};
use vlat_core::inner::{blaschke_series, inner_modulus_check, BlaschkeZero, InnerSpec};
use vlat_core::lattice::{carleson_integral, suggested_trunc_degree, CarlesonVerdict, IdealSpec, ZeroChain};
use vlat_core::operators::{apply_riemann_liouville, iterated_integral};
use vlat_core::series::{FloatPoly, RationalPoly};
use vlat_core::spaces::decompose;
use vlat_core::{Mode, C64};

/// Criteria that cannot be met as stated; see the README.
const KNOWN_UNATTAINABLE: &[u32] = &[8];

struct Verdict {
    id: u32,
    pass: bool,
}

fn report(id: u32, title: &str, pass: bool, detail: String, start: Instant) -> Verdict {
    println!(
        "{} criterion {id:>2} {title}: {detail} [{:.2} s]",
        if pass { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    Verdict { id, pass }
}

fn intertwining() -> Verdict {
    let start = Instant::now();
    let exact = verify_identities(&RunConfig::default()).unwrap();
    let float = verify_identities(&RunConfig { mode: Mode::Float, ..RunConfig::default() }).unwrap();
    let pass = exact.count("intertwining") == 1000
        && exact.failures_of("intertwining") == 0
        && exact.worst("intertwining") == 0.0
        && float.failures_of("intertwining") == 0
        && float.worst("intertwining") <= 1e-12;
    report(
        1,
        "intertwining",
        pass,
        format!(
            "rational: {} cases, {} failures, worst residual {:e}; float: worst relative residual {:e}",
            exact.count("intertwining"),
            exact.failures_of("intertwining"),
            exact.worst("intertwining"),
            float.worst("intertwining")
        ),
        start,
    )
}

fn inverse_pair() -> Verdict {
    let start = Instant::now();
    let r = verify_identities(&RunConfig::default()).unwrap();
    let checks = ["inverse_left", "inverse_right"];
    let pass = checks.iter().all(|c| r.count(c) == 1000 && r.failures_of(c) == 0 && r.worst(c) == 0.0);
    report(
        2,
        "inverse pair",
        pass,
        format!(
            "D^n V_n: {} failures; V_n D^n on z^n-multiples: {} failures (rational, 1000 cases each)",
            r.failures_of("inverse_left"),
            r.failures_of("inverse_right")
        ),
        start,
    )
}

fn iterated_integrals() -> Verdict {
    let start = Instant::now();
    let mut cases = 0;
    let mut failures = 0;
    for case in 0..50u64 {
        let f: RationalPoly = random_poly(&mut case_rng(3, case), 60);
        for n in 1..=8 {
            cases += 1;
            failures += usize::from(iterated_integral(&f, n) != apply_riemann_liouville(&f, n));
        }
    }
    report(3, "iterated integral", failures == 0, format!("{cases} cases (n ≤ 8, degree ≤ 60), {failures} mismatches"), start)
}

/// Gauss–Legendre nodes and weights on [0, 1], by Newton iteration on the
/// Legendre polynomial.
fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    (1..=m)
        .map(|i| {
            let mut x = (PI * (i as f64 - 0.25) / (m as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=m {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            ((1.0 + x) / 2.0, w / 2.0)
        })
        .collect()
}

/// `(1/(n−1)!) ∫_0^z (z−w)^{n−1} w^k dw` along the segment `w = tz`.
fn riemann_liouville_quadrature(n: usize, k: usize, z: C64, rule: &[(f64, f64)]) -> C64 {
    let fact: f64 = (1..n).map(|m| m as f64).product();
    let integral: C64 = rule
        .iter()
        .map(|&(t, w)| {
            let wz = z * t;
            (z - wz).powu(n as u32 - 1) * wz.powu(k as u32) * z * w
        })
        .sum();
    integral / fact
}

fn quadrature_cross_check() -> Verdict {
    let start = Instant::now();
    let rule = gauss_legendre(24);
    let golden = PI * (3.0 - 5f64.sqrt());
    let points: Vec<C64> = (0..20).map(|j| C64::from_polar(0.95 * (j + 1) as f64 / 20.0, golden * j as f64)).collect();
    let mut worst: f64 = 0.0;
    for n in 1..=3 {
        for k in 0..=10 {
            let image = apply_riemann_liouville(&FloatPoly::monomial(k, C64::new(1.0, 0.0)), n);
            for &z in &points {
                worst = worst.max((image.evaluate_c64(z) - riemann_liouville_quadrature(n, k, z, &rule)).norm());
            }
        }
    }
    report(4, "Riemann–Liouville quadrature", worst <= 1e-9, format!("worst |coefficient − quadrature| = {worst:e} over 660 evaluations"), start)
}

fn embedding() -> Verdict {
    let start = Instant::now();
    let r = verify_norms(&RunConfig { trials: 1000, n_max: 1, degree: 30, mode: Mode::Float, ..RunConfig::default() }, None).unwrap();
    let ratio = r.cases.iter().filter(|c| c.check == "pointwise_bound").map(|c| c.ratio()).fold(0.0, f64::max);
    let pass = r.count("pointwise_bound") == 1000 && r.failures_of("pointwise_bound") == 0;
    report(
        5,
        "sup-norm embedding",
        pass,
        format!("{} cases, {} violations, worst sup/‖f‖_S1 ratio {:.4} against constant 2", r.count("pointwise_bound"), r.failures_of("pointwise_bound"), 2.0 * ratio),
        start,
    )
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|m| m as f64).product()
}

fn nesting_and_products() -> Verdict {
    let start = Instant::now();
    let r = verify_norms(&RunConfig { trials: 1000, n_max: 4, degree: 20, mode: Mode::Float, ..RunConfig::default() }, None).unwrap();
    // Constants from their closed forms, independently of the library.
    let mut constants_ok = true;
    for k in 1..=4usize {
        let c = (factorial(k) * factorial(k) + 1.0).sqrt();
        let d = c * c;
        for (key, expected) in [(format!("nesting[{k}]"), c), (format!("derivative_nesting[{k}]"), (d + 1.0).sqrt())] {
            let used = r.summary[&key]["constant"].as_f64().unwrap();
            constants_ok &= (used - expected).abs() <= 1e-12 * expected;
        }
    }
    constants_ok &= r.summary["submultiplicative[1]"]["constant"].as_f64() == Some(4.0);
    let checks = ["nesting", "derivative_nesting", "submultiplicative"];
    let violations: usize = checks.iter().map(|c| r.failures_of(c)).sum();
    let cases: usize = checks.iter().map(|c| r.count(c)).sum();
    report(
        6,
        "nesting and submultiplicativity",
        violations == 0 && constants_ok && cases == 1000 * (4 + 4 + 4),
        format!("{cases} inequality checks over 1000 pairs (k ≤ 4), {violations} violations, constants match closed forms: {constants_ok}"),
        start,
    )
}

fn decomposition() -> Verdict {
    let start = Instant::now();
    let mut failures = 0;
    let mut cases = 0;
    for case in 0..200u64 {
        let f: RationalPoly = random_poly(&mut case_rng(7, case), 40);
        for n in 1..=5 {
            cases += 1;
            let d = decompose(&f, n);
            let again = decompose(&d.tail, n);
            let ok = d.reconstruct() == f && again.poly_part.is_zero() && again.tail == d.tail;
            failures += usize::from(!ok);
        }
    }
    report(7, "decomposition", failures == 0, format!("{cases} cases, {failures} failures (exact reconstruction and idempotence)"), start)
}

struct BlaschkeSample {
    zeros: Vec<BlaschkeZero>,
}

fn blaschke_samples() -> Vec<BlaschkeSample> {
    let mut out: Vec<BlaschkeSample> = (0..100u64)
        .map(|case| {
            let mut rng = case_rng(8, case);
            let count = rng.gen_range(1..=3);
            let zeros = (0..count)
                .map(|_| BlaschkeZero::new(C64::from_polar(0.9 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU)), 1))
                .collect();
            BlaschkeSample { zeros }
        })
        .collect();
    // The extreme allowed modulus.
    out.push(BlaschkeSample { zeros: vec![BlaschkeZero::new(C64::new(0.9, 0.0), 1)] });
    out
}

/// Worst boundary-modulus deviation and worst `|B(a)|`, at truncation `n`
/// (or the suggested one when `None`).
fn blaschke_errors(samples: &[BlaschkeSample], n: Option<usize>) -> (f64, f64, usize) {
    let mut boundary: f64 = 0.0;
    let mut at_zeros: f64 = 0.0;
    let mut max_n = 0;
    for s in samples {
        let inner = InnerSpec::new(s.zeros.clone(), vec![]).unwrap();
        let n = n.unwrap_or_else(|| suggested_trunc_degree(&inner, 1, 1e-10));
        max_n = max_n.max(n);
        let b = blaschke_series(&s.zeros, n);
        boundary = boundary.max(inner_modulus_check(&b, 4096, &[], 1e-6).boundary_worst);
        for z in &s.zeros {
            at_zeros = at_zeros.max(b.evaluate_c64(z.a).norm());
        }
    }
    (boundary, at_zeros, max_n)
}

fn inner_functions() -> Verdict {
    let start = Instant::now();
    let samples = blaschke_samples();
    let (boundary, at_zeros, _) = blaschke_errors(&samples, Some(64));
    let pass = boundary <= 1e-6 && at_zeros <= 1e-10;
    let verdict = report(
        8,
        "finite Blaschke series at N = 64",
        pass,
        format!("{} products, |a| ≤ 0.9: worst ||B| − 1| = {boundary:e} (tol 1e-6), worst |B(a)| = {at_zeros:e} (tol 1e-10)", samples.len()),
        start,
    );
    // Not a criterion: the same products at the library's suggested
    // truncation, to show the shortfall is truncation error only.
    let (boundary, at_zeros, max_n) = blaschke_errors(&samples, None);
    println!(
        "     companion: at the suggested truncation (up to N = {max_n}): worst ||B| − 1| = {boundary:e}, worst |B(a)| = {at_zeros:e} ({})",
        if boundary <= 1e-6 && at_zeros <= 1e-10 { "within tolerance" } else { "outside tolerance" }
    );
    verdict
}

fn lattice() -> Verdict {
    let start = Instant::now();
    let r = verify_lattice(&RunConfig { trials: 50, ..RunConfig::default() }, &LatticeConfig::default()).unwrap();
    let specs = r.count("validate");
    let exact = r.count("invariance_exact");
    let pass = r.failures == 0 && specs == 50 && r.count("membership") == 250 && r.count("span_distance") == 250 && exact > 0;
    report(
        9,
        "ideal membership and lattice invariance",
        pass,
        format!(
            "{specs} specs × 5 cofactors: membership failures {}, float invariance worst {:e} (tol 1e-10), exact invariance on {exact} atom-free specs with {} failures, worst scaled span distance {:e} (tol 1e-9)",
            r.failures_of("membership"),
            r.worst("invariance_float"),
            r.failures_of("invariance_exact"),
            r.worst("span_distance")
        ),
        start,
    )
}

fn carleson() -> Verdict {
    let start = Instant::now();
    // Oracle: ∫ log|e^{iθ} − 1| dθ = 0 (the mean of log|1 − z| on the circle).
    let single = IdealSpec::new(1, InnerSpec::trivial(), ZeroChain::new(vec![vec![0.0]]).unwrap(), 64, 1e-9).unwrap();
    let point = carleson_integral(&single, 1 << 16);
    let arc: Vec<f64> = (0..512).map(|j| FRAC_PI_2 * j as f64 / 511.0).collect();
    let dense = IdealSpec::new(1, InnerSpec::trivial(), ZeroChain::new(vec![arc]).unwrap(), 64, 1e-9).unwrap();
    let stress = carleson_integral(&dense, 1 << 12);
    let pass = point.value.abs() <= 1e-3 && point.verdict == CarlesonVerdict::Finite && stress.verdict == CarlesonVerdict::Divergent;
    report(
        10,
        "log-integrability",
        pass,
        format!("single point at 2^16 nodes: {:e} (tol 1e-3); dense arc verdict: {}", point.value, stress.verdict.as_str()),
        start,
    )
}

fn determinism() -> Verdict {
    let start = Instant::now();
    let run = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_vlat")).args(args).output().expect("binary runs");
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let suites: [&[&str]; 3] =
        [&["verify-identities"], &["verify-norms", "--seed", "5"], &["verify-lattice", "--trials", "10"]];
    let mut same = 0;
    for args in suites {
        same += usize::from(run(args) == run(args));
    }
    report(11, "determinism", same == suites.len(), format!("{same}/{} suites byte-identical across two runs", suites.len()), start)
}

fn main() {
    // libtest flags passed through by `cargo test` are ignored.
    let strict = std::env::var("VLAT_STRICT").is_ok_and(|v| v == "1");
    let verdicts = [
        intertwining(),
        inverse_pair(),
        iterated_integrals(),
        quadrature_cross_check(),
        embedding(),
        nesting_and_products(),
        decomposition(),
        inner_functions(),
        lattice(),
        carleson(),
        determinism(),
    ];
    let fatal: Vec<u32> =
        verdicts.iter().filter(|v| !v.pass && (strict || !KNOWN_UNATTAINABLE.contains(&v.id))).map(|v| v.id).collect();
    let passed = verdicts.iter().filter(|v| v.pass).count();
    println!("acceptance: {passed}/{} criteria pass", verdicts.len());
    if !fatal.is_empty() {
        println!("acceptance: unexpected failures: {fatal:?}");
        std::process::exit(1);
    }
}
