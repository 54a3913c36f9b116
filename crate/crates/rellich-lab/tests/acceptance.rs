//! Acceptance suite: end-to-end checks of the closed-form constants, the
//! identity and inequality layers, the sharpness sweeps, the discretized
//! oracle, and CLI determinism. Each test prints one PASS line.

use std::time::Instant;

use rellich_lab::constants::{
    hardy_rellich_alpha, hardy_rellich_constant, k3, n3_special_chain, rellich_constant,
    rellich_shift, schmincke_range, Params, SchminckeCase, SchminckeVariant,
};
use rellich_lab::functionals::{
    identity_363a_residual, sharpness_sweep, verify, FreeParams, ModeFunction, MultiModeFunction,
    QuadratureConfig, SphericalLemma,
};
use rellich_lab::oracle::{converge_study, discretize, min_quotient, Quotient, RadialGrid};
use rellich_lab::profiles::{
    log_plateau, nested_epsilon_schedule, random_profile, Profile, RadialProfile,
};
use rellich_lab::spectra::{eigenvalue, ModeIndex};

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn pass(criterion: u32, detail: &str) {
    println!("acceptance criterion {criterion}: PASS — {detail}");
}

fn single(j: u32, seed: u64, a: f64, b: f64, degree: u32) -> MultiModeFunction {
    MultiModeFunction::single(ModeFunction {
        j: ModeIndex(j),
        profile: random_profile(seed, a, b, degree).unwrap(),
    })
}

fn multi(seed: u64, a: f64, b: f64) -> MultiModeFunction {
    let terms = (0..3u32)
        .map(|j| ModeFunction {
            j: ModeIndex(j),
            profile: random_profile(seed + j as u64, a, b, 4).unwrap(),
        })
        .collect();
    MultiModeFunction::new(terms).unwrap()
}

#[test]
fn criterion_01_hardy_rellich_table() {
    let t0 = Instant::now();
    for n in 2..=10u32 {
        let p = Params::new(n, 0.0).unwrap();
        let got = hardy_rellich_constant(p);
        let (want, argmin) = match n {
            2 => (0.0, 1),
            3 => (25.0 / 36.0, 1),
            4 => (3.0, 1),
            _ => ((n * n) as f64 / 4.0, 0),
        };
        assert!(
            (got.value - want).abs() <= 1e-12,
            "A_{{{n},0}} = {}, want {want}",
            got.value
        );
        assert_eq!(got.argmin_j, ModeIndex(argmin), "argmin for n = {n}");
    }
    assert!(t0.elapsed().as_secs_f64() < 1.0);
    pass(1, "A_{n,0} table and argmins for n = 2..10, < 1 s");
}

#[test]
fn criterion_02_rellich_constants() {
    let t0 = Instant::now();
    for n in 5..=12u32 {
        let p = Params::new(n, 0.0).unwrap();
        let want = (n * n * (n - 4) * (n - 4)) as f64 / 16.0;
        let got = rellich_constant(p);
        assert!((got.value - want).abs() <= 1e-12 * want.max(1.0));
        // brute-force oracle over the first 201 modes
        let c = rellich_shift(p);
        let brute = (0..=200u32)
            .map(|j| {
                let l = eigenvalue(n, ModeIndex(j)).unwrap();
                (l + c) * (l + c)
            })
            .fold(f64::INFINITY, f64::min);
        assert!((got.value - brute).abs() <= 1e-12 * brute.max(1.0));
    }
    assert_eq!(rellich_constant(Params::new(4, 0.0).unwrap()).value, 0.0);
    assert_eq!(rellich_constant(Params::new(2, 2.0).unwrap()).value, 0.0);
    assert!(t0.elapsed().as_secs_f64() < 1.0);
    pass(2, "C_{n,0} = n^2(n-4)^2/16 vs brute-force scan, zeros exact, < 1 s");
}

#[test]
fn criterion_03_schmincke_ranges() {
    let cases = [
        (3u32, -0.5, SchminckeCase::Sec3CaseII),
        (4, -3.0, SchminckeCase::Sec3CaseII),
        (5, -6.5, SchminckeCase::Sec3CaseI),
    ];
    for (n, want, case) in cases {
        let r = schmincke_range(Params::new(n, 0.0).unwrap(), SchminckeVariant::Sec3);
        assert!((r.s_min - want).abs() <= 1e-12, "n = {n}: s_min = {}", r.s_min);
        assert_eq!(r.case, case, "n = {n}");
    }
    pass(3, "sec3 s_min = -1/2, -3, -13/2 at (3,0), (4,0), (5,0)");
}

#[test]
fn criterion_04_n3_chain() {
    let chain = n3_special_chain().unwrap();
    assert!((chain.s_at_alpha_hat_plus + 25.0 / 36.0).abs() <= 1e-12);
    assert!(k3(-25.0 / 36.0).unwrap().abs() <= 1e-15);
    let c30 = rellich_constant(Params::new(3, 0.0).unwrap()).value;
    assert!((c30 - 9.0 / 16.0).abs() <= 1e-15);
    assert!((k3(0.0).unwrap() - c30).abs() <= 1e-15);
    pass(4, "s(alpha_hat_+) = -25/36, K(-25/36) = 0, K(0) = C_{3,0} = 9/16");
}

#[test]
fn criterion_05_identity_suite() {
    use SphericalLemma::*;
    let t0 = Instant::now();
    let cfg = cfg();
    let mut seed = 0u64;
    // 5 x 5 x 4 = 100 seeded profiles over the module's parameter grid
    for n in [2u32, 3, 4, 5, 7] {
        for gamma in [-3.0, 0.0, 1.0, 2.0, 5.0] {
            let p = Params::new(n, gamma).unwrap();
            for j in [0u32, 1, 2, 5] {
                seed += 1;
                let mf = ModeFunction {
                    j: ModeIndex(j),
                    profile: random_profile(seed, 0.6, 2.4, 5).unwrap(),
                };
                let res = identity_363a_residual(&mf, p, &cfg).unwrap();
                assert!(res < 1e-8, "3.63a residual {res} at n={n}, gamma={gamma}, j={j}");
                for lemma in [L35, L36, L37, L38] {
                    let res = spherical(lemma, &mf, p, &cfg);
                    assert!(
                        res < 1e-8,
                        "{lemma:?} residual {res} at n={n}, gamma={gamma}, j={j}"
                    );
                }
            }
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 30.0, "identity suite took {dt:.1} s");
    pass(5, "3.63a and Lemma 3.5-3.8 residuals < 1e-8 on 100 seeded profiles, < 30 s");
}

fn spherical(
    lemma: SphericalLemma,
    mf: &ModeFunction,
    p: Params,
    cfg: &QuadratureConfig,
) -> f64 {
    rellich_lab::functionals::spherical_identity_residual(lemma, mf, p, cfg).unwrap()
}

/// One verify() call that must hold: margin >= -1e-9 * lhs.
fn holds(id: &str, p: Params, free: &FreeParams, f: &MultiModeFunction, cfg: &QuadratureConfig) {
    let rep = verify(id, p, free, f, cfg).unwrap();
    assert!(
        rep.preconditions_met,
        "{id} at (n, gamma) = ({}, {}): preconditions not met",
        p.n, p.gamma
    );
    assert!(
        rep.margin >= -1e-9 * rep.lhs.abs(),
        "{id} at (n, gamma) = ({}, {}): margin {} vs lhs {}",
        p.n,
        p.gamma,
        rep.margin,
        rep.lhs
    );
}

#[test]
fn criterion_06_inequality_property_suite() {
    let t0 = Instant::now();
    let cfg = cfg();
    let pm = |n, g| Params::new(n, g).unwrap();
    let fp = FreeParams::default;
    // seeded single- and multi-mode test functions
    let funcs = |seed: u64| [single(1, seed, 0.6, 2.4, 5), multi(seed + 10, 0.5, 3.0)];

    for f in funcs(1) {
        for (a, b) in [(0.0, 0.0), (1.0, 0.5), (2.0, -1.0)] {
            let free = FreeParams { alpha: Some(a), beta: Some(b), ..fp() };
            for p in [pm(5, 0.0), pm(3, 1.0), pm(7, -1.0)] {
                holds("2.1", p, &free, &f, &cfg);
            }
        }
        // Cauchy variant needs alpha(alpha - 4 + 2 gamma) >= 0
        for (a, b) in [(0.0, 0.0), (4.0, 1.0)] {
            let free = FreeParams { alpha: Some(a), beta: Some(b), ..fp() };
            for p in [pm(5, 0.0), pm(4, 1.0)] {
                holds("2.2", p, &free, &f, &cfg);
            }
        }
        for p in [pm(5, 0.0), pm(4, 2.0), pm(3, 1.0)] {
            holds("2.11", p, &fp(), &f, &cfg);
            holds("2.19", p, &fp(), &f, &cfg);
        }
        for p in [pm(8, 0.0), pm(4, 2.0), pm(5, 1.0)] {
            holds("2.16", p, &fp(), &f, &cfg);
        }
        for p in [pm(5, 0.0), pm(6, 1.0), pm(8, 3.0)] {
            holds("2.17", p, &fp(), &f, &cfg);
        }
        let absv = FreeParams { abs_gamma_variant: true, ..fp() };
        for p in [pm(6, -1.0), pm(7, -2.0)] {
            holds("2.17", p, &absv, &f, &cfg);
        }
        for p in [pm(5, 0.0), pm(3, 1.0), pm(6, -1.0)] {
            holds("2.18", p, &fp(), &f, &cfg);
        }
        for p in [pm(5, 0.0), pm(3, 0.0), pm(4, 1.0)] {
            for variant in [SchminckeVariant::Sec2, SchminckeVariant::Sec3] {
                let id = if variant == SchminckeVariant::Sec2 { "2.24" } else { "3.89" };
                let s_min = schmincke_range(p, variant).s_min;
                for s in [s_min, s_min + 0.5, s_min + 2.0] {
                    holds(id, p, &FreeParams { s: Some(s), ..fp() }, &f, &cfg);
                }
            }
        }
        for p in [pm(5, 0.0), pm(3, 0.0), pm(4, 1.0), pm(2, 3.0), pm(7, -1.0)] {
            holds("2.35", p, &fp(), &f, &cfg);
            holds("2.43", p, &fp(), &f, &cfg);
        }
        for (a, b, t) in [(1.0, 0.5, -0.5), (0.0, 0.0, -1.0), (2.0, -1.0, 0.5)] {
            let free = FreeParams { alpha: Some(a), beta: Some(b), tau: Some(t), ..fp() };
            for p in [pm(5, 0.0), pm(4, 1.0)] {
                holds("3.1", p, &free, &f, &cfg);
            }
        }
        for (a, b, t) in [(0.0, 0.0, -1.0), (4.0, 1.0, -0.5)] {
            let free = FreeParams { alpha: Some(a), beta: Some(b), tau: Some(t), ..fp() };
            for p in [pm(5, 0.0), pm(4, 1.0)] {
                holds("3.2", p, &free, &f, &cfg);
            }
        }
        for t in [-1.0, 0.0, 0.5] {
            let free = FreeParams { tau: Some(t), ..fp() };
            for p in [pm(5, 0.0), pm(3, 0.0), pm(6, -1.0)] {
                holds("3.38", p, &free, &f, &cfg);
            }
        }
        for p in [pm(5, 0.0), pm(4, 0.0), pm(3, 0.0), pm(7, 2.0), pm(6, -1.0)] {
            holds("3.44", p, &fp(), &f, &cfg);
            holds("3.59a", p, &fp(), &f, &cfg);
            holds("3.69a", p, &fp(), &f, &cfg);
        }
        for (a, b) in [(1.0, 0.5), (0.0, 0.0)] {
            for (id, t) in [("3.49", -0.5), ("3.51", -1.0)] {
                let free = FreeParams { alpha: Some(a), beta: Some(b), tau: Some(t), ..fp() };
                for p in [pm(5, 0.0), pm(4, 1.0)] {
                    holds(id, p, &free, &f, &cfg);
                }
            }
        }
        let p3 = pm(3, 0.0);
        for s in [-25.0 / 36.0, 0.0, 1.0] {
            holds("3.100", p3, &FreeParams { s: Some(s), ..fp() }, &f, &cfg);
            holds("3.115", p3, &FreeParams { s: Some(s), ..fp() }, &f, &cfg);
        }
        holds("3.115", p3, &FreeParams { s: Some(-0.5), ..fp() }, &f, &cfg);
    }
    // log-refined inequalities need support inside the unit ball
    for f in [single(1, 30, 0.2, 0.8, 4), multi(40, 0.25, 0.75)] {
        for (depth, eta) in [(1u32, 1.0), (2, std::f64::consts::E)] {
            let free = FreeParams {
                log_depth: Some(depth),
                radius: Some(1.0),
                eta: Some(eta),
                ..fp()
            };
            for p in [pm(5, 0.0), pm(7, 2.0)] {
                holds("3.48a", p, &free, &f, &cfg);
            }
            for p in [pm(5, 0.0), pm(6, 1.0)] {
                holds("4.31", p, &free, &f, &cfg);
            }
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 120.0, "inequality suite took {dt:.1} s");
    pass(6, "all listed inequality ids hold with margin >= -1e-9 lhs, < 2 min");
}

#[test]
fn criterion_07_sharpness_at_desk_scale() {
    let cfg = QuadratureConfig::sweep();
    let schedule = nested_epsilon_schedule(1.0, 11).unwrap(); // down to 2^-10
    for (n, gamma) in [(5u32, 0.0), (3, 0.0), (4, 2.0), (6, -1.0)] {
        let t0 = Instant::now();
        let p = Params::new(n, gamma).unwrap();
        let a = hardy_rellich_constant(p);
        let j0 = a.argmin_j;
        let lambda = eigenvalue(n, j0).unwrap();
        let shift = rellich_shift(p);
        let rellich_j0 = (lambda + shift) * (lambda + shift);
        let pts = sharpness_sweep(p, j0, 1.0, &schedule, true, &cfg).unwrap();
        assert_eq!(pts.len(), schedule.len());
        for w in pts.windows(2) {
            assert!(
                w[1].hardy_rellich_q <= w[0].hardy_rellich_q * (1.0 + 1e-9),
                "(n, gamma) = ({n}, {gamma}): hardy-rellich quotient not decreasing"
            );
            assert!(
                w[1].rellich_q <= w[0].rellich_q * (1.0 + 1e-9),
                "(n, gamma) = ({n}, {gamma}): rellich quotient not decreasing"
            );
        }
        let last = pts.last().unwrap();
        assert!(
            last.hardy_rellich_q <= 1.05 * a.value && last.hardy_rellich_q >= a.value * (1.0 - 1e-9),
            "(n, gamma) = ({n}, {gamma}): quotient {} vs A = {}",
            last.hardy_rellich_q,
            a.value
        );
        assert!(
            last.rellich_q <= 1.05 * rellich_j0 && last.rellich_q >= rellich_j0 * (1.0 - 1e-9),
            "(n, gamma) = ({n}, {gamma}): quotient {} vs C_j0 = {rellich_j0}",
            last.rellich_q
        );
        let dt = t0.elapsed().as_secs_f64();
        assert!(dt < 60.0, "(n, gamma) = ({n}, {gamma}) took {dt:.1} s");
    }
    pass(7, "eps-sweeps reach the sharp constants within 5% by eps = 2^-10, < 1 min/pair");
}

#[test]
fn criterion_08_oracle_independence() {
    let t0 = Instant::now();
    let grid = RadialGrid::new(1e-4, 1e4, 2000).unwrap();
    for (n, gamma, j) in [(5u32, 0.0, 0u32), (3, 0.0, 1), (4, 0.0, 1), (7, 2.0, 0), (3, -1.0, 2)] {
        let p = Params::new(n, gamma).unwrap();
        let jm = ModeIndex(j);
        let lambda = eigenvalue(n, jm).unwrap();
        let shift = rellich_shift(p);
        for (quotient, want) in [
            (Quotient::HardyRellich, hardy_rellich_alpha(p, jm)),
            (Quotient::Rellich, (lambda + shift) * (lambda + shift)),
        ] {
            let forms = discretize(p, jm, &grid, quotient).unwrap();
            let mu = min_quotient(&forms).unwrap().mu_min;
            assert!(
                (mu - want).abs() <= 0.02 * want.abs().max(1e-10),
                "(n, gamma, j) = ({n}, {gamma}, {j}) {quotient:?}: mu = {mu}, want {want}"
            );
        }
    }
    // widening the domain lowers the minimal quotient
    let rows = converge_study(
        Params::new(3, 0.0).unwrap(),
        ModeIndex(1),
        Quotient::Rellich,
        &[(1e-2, 1e2), (1e-3, 1e3), (1e-4, 1e4)],
        &[2000],
    )
    .unwrap();
    for w in rows.windows(2) {
        assert!(w[1].mu_min < w[0].mu_min, "mu_min not decreasing under widening");
    }
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < 60.0, "oracle suite took {dt:.1} s");
    pass(8, "discretized mu_min within 2% of the closed forms, monotone in the domain, < 1 min");
}

/// `r^p * psi(r)` with product-rule derivatives, for the 1-D near-extremal check.
struct PowerCutoff {
    p: f64,
    psi: RadialProfile,
}

impl Profile for PowerCutoff {
    fn support(&self) -> (f64, f64) {
        self.psi.support()
    }
    fn eval(&self, r: f64) -> f64 {
        r.powf(self.p) * self.psi.eval(r)
    }
    fn d1(&self, r: f64) -> f64 {
        r.powf(self.p - 1.0) * (self.p * self.psi.eval(r) + r * self.psi.d1(r))
    }
    fn d2(&self, r: f64) -> f64 {
        r.powf(self.p - 2.0)
            * (self.p * (self.p - 1.0) * self.psi.eval(r)
                + 2.0 * self.p * r * self.psi.d1(r)
                + r * r * self.psi.d2(r))
    }
    fn knots(&self) -> Vec<f64> {
        self.psi.knots()
    }
}

#[test]
fn criterion_09_one_dimensional_bounds() {
    let cfg = cfg();
    // strict lower bounds on 50 seeded nonzero profiles
    let mut seed = 100u64;
    for gamma in [-2.0, 0.0, 1.0, 3.0, 6.0] {
        let p = Params::new(3, gamma).unwrap();
        for _ in 0..10 {
            seed += 1;
            let f = single(0, seed, 0.7, 2.1, 5);
            for id in ["3.49a", "3.50a"] {
                let rep = verify(id, p, &FreeParams::default(), &f, &cfg).unwrap();
                assert!(
                    rep.margin > 0.0,
                    "{id} at gamma = {gamma}, seed {seed}: margin {}",
                    rep.margin
                );
            }
        }
    }
    // near-extremal family r^{(3-gamma)/2} * plateau cutoff approaches the
    // bound as the plateau (and its log-scale transitions) widen
    for gamma in [-2.0, 0.0, 6.0] {
        let p = Params::new(3, gamma).unwrap();
        let mut ratios = Vec::new();
        for w in [2.0f64, 4.0, 8.0, 16.0] {
            let psi = log_plateau((-w).exp(), w.exp(), w / 2.0).unwrap();
            let f = MultiModeFunction::single(ModeFunction {
                j: ModeIndex(0),
                profile: Box::new(PowerCutoff { p: (3.0 - gamma) / 2.0, psi }),
            });
            let rep = verify("3.49a", p, &FreeParams::default(), &f, &cfg).unwrap();
            ratios.push(rep.ratio.unwrap());
        }
        for w in ratios.windows(2) {
            assert!(w[1] < w[0], "gamma = {gamma}: quotient not decreasing: {ratios:?}");
        }
        let last = ratios.last().unwrap();
        assert!(
            (1.0..1.1).contains(last),
            "gamma = {gamma}: widest plateau reaches ratio {last}, want < 1.1"
        );
    }
    pass(9, "1-D bounds strict on 50 seeded profiles; near-extremal family within 10%");
}

#[test]
fn criterion_10_cli_determinism() {
    let bin = env!("CARGO_BIN_EXE_rellich-lab");
    let arg_sets: [&[&str]; 3] = [
        &["constants", "--n", "5", "--gamma", "0"],
        &[
            "verify", "--ineq", "3.44", "--n", "5", "--gamma", "0", "--profile",
            "poly:42,5,0.5,2.5", "--mode", "1",
        ],
        &[
            "sharpness", "--n", "5", "--gamma", "0", "--j0", "0", "--eps-start", "0.5",
            "--eps-steps", "3",
        ],
    ];
    for args in arg_sets {
        let run = || {
            let out = std::process::Command::new(bin).args(args).output().unwrap();
            assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
            out.stdout
        };
        let first = run();
        let second = run();
        assert_eq!(first, second, "{args:?}: output differs between runs");
        assert!(!first.is_empty());
    }
    pass(10, "repeated CLI runs produce byte-identical JSON");
}
