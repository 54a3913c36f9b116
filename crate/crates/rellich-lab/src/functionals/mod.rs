//! Per-mode weighted seminorms, assembly of every integral quantity entering
//! the inequalities, identity checks, inequality verdict reports, and the
//! sharpness sweep over shrinking cutoffs.
//!
//! Everything is mode-reduced: a function `f(r,theta) = F(r) phi_{j,1}(theta)`
//! with a unit-normalized spherical harmonic of degree `j` turns each
//! n-dimensional weighted integral into a 1-D radial integral, e.g.
//! `int |x|^{gamma-2} |df/dr|^2 = int_0^inf r^{gamma+n-3} |F'|^2 dr`.

pub mod quad;

pub use quad::{integrate, integrate_with_knots, QuadratureConfig};

use crate::constants::{self, Params};
use crate::profiles::{trial_radial, Profile, RadialProfile, TrialFunction};
use crate::spectra::{eigenvalue, log_refinement_weight, LogWeightParams, ModeIndex};
use crate::{Error, Result};

/// A single spherical mode: radial part `F` times the degree-`j` harmonic.
pub struct ModeFunction {
    pub j: ModeIndex,
    pub profile: RadialProfile,
}

/// Finitely many modes with distinct indices; orthogonality on the sphere
/// makes every integral additive across the terms.
pub struct MultiModeFunction {
    terms: Vec<ModeFunction>,
}

impl MultiModeFunction {
    pub fn new(terms: Vec<ModeFunction>) -> Result<Self> {
        for (i, a) in terms.iter().enumerate() {
            for b in &terms[i + 1..] {
                if a.j == b.j {
                    return Err(Error::Domain(format!("duplicate mode index j = {}", a.j.0)));
                }
            }
        }
        Ok(Self { terms })
    }

    pub fn single(m: ModeFunction) -> Self {
        Self { terms: vec![m] }
    }

    pub fn terms(&self) -> &[ModeFunction] {
        &self.terms
    }
}

/// The radial integrals of one mode. With `e = gamma + n`:
/// `m0 = int r^{e-5}|F|^2`, `m0_hi = int r^{e-3}|F|^2`,
/// `m1 = int r^{e-3}|F'|^2`, `m1_hi = int r^{e-1}|F'|^2`,
/// `m2 = int r^{e-1}|F''|^2`, and
/// `l = int r^{e-1} |-F'' - (n-1)F'/r + lambda_j F/r^2|^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeIntegrals {
    pub m0: f64,
    pub m0_hi: f64,
    pub m1: f64,
    pub m1_hi: f64,
    pub m2: f64,
    pub l: f64,
}

fn profile_integral(
    prof: &dyn Profile,
    g: &dyn Fn(f64) -> f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let (a, b) = prof.support();
    integrate_with_knots(g, a, b, &prof.knots(), cfg)
}

pub fn mode_integrals(mf: &ModeFunction, p: Params, cfg: &QuadratureConfig) -> Result<ModeIntegrals> {
    let lambda = eigenvalue(p.n, mf.j)?;
    let e = p.gamma + p.nf();
    let f = mf.profile.as_ref();
    let n1 = p.nf() - 1.0;
    Ok(ModeIntegrals {
        m0: profile_integral(f, &|r| r.powf(e - 5.0) * f.eval(r).powi(2), cfg)?,
        m0_hi: profile_integral(f, &|r| r.powf(e - 3.0) * f.eval(r).powi(2), cfg)?,
        m1: profile_integral(f, &|r| r.powf(e - 3.0) * f.d1(r).powi(2), cfg)?,
        m1_hi: profile_integral(f, &|r| r.powf(e - 1.0) * f.d1(r).powi(2), cfg)?,
        m2: profile_integral(f, &|r| r.powf(e - 1.0) * f.d2(r).powi(2), cfg)?,
        l: profile_integral(
            f,
            &|r| {
                let op = -f.d2(r) - n1 * f.d1(r) / r + lambda * f.eval(r) / (r * r);
                r.powf(e - 1.0) * op * op
            },
            cfg,
        )?,
    })
}

/// Relative residual of the exact expansion
/// `l = m2 + [2 lambda + (n-1)(1-gamma)] m1 + [lambda^2 + lambda (gamma+n-4)(2-gamma)] m0`.
pub fn identity_363a_residual(mf: &ModeFunction, p: Params, cfg: &QuadratureConfig) -> Result<f64> {
    let lambda = eigenvalue(p.n, mf.j)?;
    let mi = mode_integrals(mf, p, cfg)?;
    let rhs = mi.m2
        + (2.0 * lambda + (p.nf() - 1.0) * (1.0 - p.gamma)) * mi.m1
        + (lambda * lambda + lambda * (p.gamma + p.nf() - 4.0) * (2.0 - p.gamma)) * mi.m0;
    Ok((mi.l - rhs).abs() / mi.l.max(1e-300))
}

/// The four integration-by-parts identities used to expand the factorized
/// operator, in their mode-reduced 1-D form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphericalLemma {
    /// `int r^{g/2+n-1} {-r^{1-n} [r^{n-1} (r^{g/2-2} F)']'} F dr
    ///  = (2g - g^2/4 - ng/2 + n - 4) m0 + m1`
    L35,
    /// `int r^{g/2+n-2} (r^{g/2-2} F)' F dr = -(n/2) m0`
    L36,
    /// `-int r^{g-2} (r^{n-1} F')' F dr = -(g-2)(g+n-4)/2 m0 + m1`
    L37,
    /// `int r^{g+n-4} F' F dr = -(g+n-4)/2 m0`
    L38,
}

pub fn spherical_identity_residual(
    lemma: SphericalLemma,
    mf: &ModeFunction,
    p: Params,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let n = p.nf();
    let g = p.gamma;
    let f = mf.profile.as_ref();
    let mi = mode_integrals(mf, p, cfg)?;
    // derivatives of G = r^a F with a = g/2 - 2
    let a = g / 2.0 - 2.0;
    let gp = |r: f64| r.powf(a) * f.d1(r) + a * r.powf(a - 1.0) * f.eval(r);
    let gpp = |r: f64| {
        r.powf(a) * f.d2(r)
            + 2.0 * a * r.powf(a - 1.0) * f.d1(r)
            + a * (a - 1.0) * r.powf(a - 2.0) * f.eval(r)
    };
    let (lhs, rhs) = match lemma {
        SphericalLemma::L35 => {
            let lhs = profile_integral(
                f,
                &|r| -r.powf(g / 2.0 + n - 1.0) * (gpp(r) + (n - 1.0) * gp(r) / r) * f.eval(r),
                cfg,
            )?;
            let rhs = (2.0 * g - g * g / 4.0 - n * g / 2.0 + n - 4.0) * mi.m0 + mi.m1;
            (lhs, rhs)
        }
        SphericalLemma::L36 => {
            let lhs =
                profile_integral(f, &|r| r.powf(g / 2.0 + n - 2.0) * gp(r) * f.eval(r), cfg)?;
            (lhs, -(n / 2.0) * mi.m0)
        }
        SphericalLemma::L37 => {
            let lhs = profile_integral(
                f,
                &|r| {
                    -r.powf(g - 2.0)
                        * (r.powf(n - 1.0) * f.d2(r) + (n - 1.0) * r.powf(n - 2.0) * f.d1(r))
                        * f.eval(r)
                },
                cfg,
            )?;
            let rhs = -0.5 * (g - 2.0) * (g + n - 4.0) * mi.m0 + mi.m1;
            (lhs, rhs)
        }
        SphericalLemma::L38 => {
            let lhs = profile_integral(f, &|r| r.powf(g + n - 4.0) * f.d1(r) * f.eval(r), cfg)?;
            (lhs, -0.5 * (g + n - 4.0) * mi.m0)
        }
    };
    // m0 + m1 sets the scale of the identity; guards the degenerate cases
    // where both sides vanish and quadrature noise would dominate a ratio
    Ok((lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(mi.m0 + mi.m1).max(1e-300))
}

/// Sums over modes of every quantity appearing on either side of the
/// inequalities (mode-reduced weights shown with `e = gamma + n`):
/// `lap2 = sum l_j` is `int |x|^gamma |Delta f|^2`;
/// `grad_lo` (weight `gamma-2` gradient), `grad_hi` (weight `gamma`);
/// `pot_lo` (weight `gamma-4`), `pot_hi` (weight `gamma-2`);
/// `radial_dir` is `int |x|^{gamma-4} |x . grad f|^2`, `radial_dir_hi` its
/// weight `gamma-2` analogue; `sph_half`, `sph_half_dr`, `sph_full` are the
/// square-root and full Laplace--Beltrami terms.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Assembled {
    pub lap2: f64,
    pub grad_lo: f64,
    pub grad_hi: f64,
    pub pot_lo: f64,
    pub pot_hi: f64,
    pub radial_dir: f64,
    pub radial_dir_hi: f64,
    pub sph_half: f64,
    pub sph_half_dr: f64,
    pub sph_full: f64,
}

pub fn assemble(f: &MultiModeFunction, p: Params, cfg: &QuadratureConfig) -> Result<Assembled> {
    let mut out = Assembled::default();
    for mf in f.terms() {
        let lambda = eigenvalue(p.n, mf.j)?;
        let mi = mode_integrals(mf, p, cfg)?;
        out.lap2 += mi.l;
        out.grad_lo += mi.m1 + lambda * mi.m0;
        out.grad_hi += mi.m1_hi + lambda * mi.m0_hi;
        out.pot_lo += mi.m0;
        out.pot_hi += mi.m0_hi;
        out.radial_dir += mi.m1;
        out.radial_dir_hi += mi.m1_hi;
        out.sph_half += lambda * mi.m0;
        out.sph_half_dr += lambda * mi.m1;
        out.sph_full += lambda * lambda * mi.m0;
    }
    Ok(out)
}

/// Log-refined companion sums: the same weights multiplied by
/// `sum_k prod_p [ln_p(eta/r)]^{-2}`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LogrefAssembled {
    /// weight `gamma-4` potential term
    pub pot: f64,
    /// radial part of the weight `gamma-2` gradient term
    pub grad_radial: f64,
    /// spherical-gradient term (equals the weight `gamma-4` sphere-gradient sum)
    pub grad_sph: f64,
}

pub fn assemble_logref(
    f: &MultiModeFunction,
    p: Params,
    lw: &LogWeightParams,
    cfg: &QuadratureConfig,
) -> Result<LogrefAssembled> {
    let e = p.gamma + p.nf();
    let mut out = LogrefAssembled::default();
    for mf in f.terms() {
        let lambda = eigenvalue(p.n, mf.j)?;
        let prof = mf.profile.as_ref();
        let w = |r: f64| log_refinement_weight(lw, r).expect("support inside (0, R)");
        let pot =
            profile_integral(prof, &|r| r.powf(e - 5.0) * w(r) * prof.eval(r).powi(2), cfg)?;
        out.pot += pot;
        out.grad_radial +=
            profile_integral(prof, &|r| r.powf(e - 3.0) * w(r) * prof.d1(r).powi(2), cfg)?;
        out.grad_sph += lambda * pot;
    }
    Ok(out)
}

/// Free parameters of the inequality being verified; each id reads exactly
/// the fields it needs.
#[derive(Debug, Clone, Copy, Default)]
pub struct FreeParams {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub tau: Option<f64>,
    pub s: Option<f64>,
    /// depth `N` of the iterated-logarithm refinement
    pub log_depth: Option<u32>,
    pub eta: Option<f64>,
    /// ball radius `R` for the log-refined inequalities
    pub radius: Option<f64>,
    /// use the `4(n-4-|gamma|)` variant of id "2.17"
    pub abs_gamma_variant: bool,
}

fn need(v: Option<f64>, name: &str, id: &str) -> Result<f64> {
    v.ok_or_else(|| Error::Domain(format!("inequality {id} needs parameter {name}")))
}

/// Verdict for one inequality on one test function.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub ineq_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    /// `lhs/rhs`, omitted when `rhs <= 0` (trivial inequality)
    pub ratio: Option<f64>,
    pub constant_used: f64,
    pub preconditions_met: bool,
    pub quadrature_tol: f64,
}

fn report(
    id: &str,
    lhs: f64,
    rhs: f64,
    constant_used: f64,
    pre: bool,
    cfg: &QuadratureConfig,
) -> InequalityReport {
    InequalityReport {
        ineq_id: id.to_string(),
        lhs,
        rhs,
        margin: lhs - rhs,
        ratio: if rhs > 0.0 { Some(lhs / rhs) } else { None },
        constant_used,
        preconditions_met: pre,
        quadrature_tol: cfg.rel_tol,
    }
}

/// Evaluates both sides of the named inequality on `f`. Preconditions of the
/// underlying statement are recorded in the report, never enforced, so the
/// stated parameter ranges can be probed.
pub fn verify(
    ineq_id: &str,
    p: Params,
    free: &FreeParams,
    f: &MultiModeFunction,
    cfg: &QuadratureConfig,
) -> Result<InequalityReport> {
    let n = p.nf();
    let g = p.gamma;
    let asm = assemble(f, p, cfg)?;
    let r = match ineq_id {
        "2.1" => {
            let a = need(free.alpha, "alpha", ineq_id)?;
            let b = need(free.beta, "beta", ineq_id)?;
            let c = constants::thm21_coefficients(a, b, p);
            let rhs = c.c_grad * asm.grad_lo + c.c_radial * asm.radial_dir + c.c_pot * asm.pot_lo;
            report(ineq_id, asm.lap2, rhs, c.c_pot, true, cfg)
        }
        "2.2" => {
            let a = need(free.alpha, "alpha", ineq_id)?;
            let b = need(free.beta, "beta", ineq_id)?;
            let c = constants::thm21_coefficients(a, b, p);
            let cg = constants::thm21_cauchy_grad_coefficient(a, b, p);
            let rhs = cg * asm.grad_lo + c.c_pot * asm.pot_lo;
            report(ineq_id, asm.lap2, rhs, c.c_pot, c.cauchy_valid, cfg)
        }
        "2.11" => {
            let k = ((n - g) * (g + n - 4.0) / 4.0).powi(2);
            let pre = (g >= 2.0 && n >= g) || (g <= 2.0 && n >= 4.0 - g);
            report(ineq_id, asm.lap2, k * asm.pot_lo, k, pre, cfg)
        }
        "2.16" => {
            let k = ((n - g) / 2.0).powi(2);
            let pre = (g >= 2.0 && n >= g) || (g <= 2.0 && n >= 8.0 - 3.0 * g);
            report(ineq_id, asm.lap2, k * asm.grad_lo, k, pre, cfg)
        }
        "2.17" => {
            let (k, pre) = if free.abs_gamma_variant {
                (4.0 * (n - 4.0 - g.abs()), n >= 4.0 + g.abs())
            } else {
                (4.0 * (n - 4.0 - g), g >= 0.0 && n >= 4.0 + g)
            };
            report(ineq_id, asm.lap2, k * asm.grad_lo, k, pre, cfg)
        }
        "2.18" => {
            let k = (4.0 - 2.0 * g) * (g + n - 4.0);
            let pre = g <= 2.0 && n >= 4.0 - g;
            report(ineq_id, asm.lap2, k * asm.grad_lo, k, pre, cfg)
        }
        "2.19" => {
            let k = ((n - g) / 2.0).powi(2);
            let pre = (g >= 2.0 && n >= g) || (g <= 2.0 && n >= 4.0 - g);
            report(ineq_id, asm.lap2, k * asm.radial_dir, k, pre, cfg)
        }
        "2.24" | "3.89" => {
            let s = need(free.s, "s", ineq_id)?;
            let variant = if ineq_id == "2.24" {
                constants::SchminckeVariant::Sec2
            } else {
                constants::SchminckeVariant::Sec3
            };
            let k = constants::schmincke_rhs_constant(p, s);
            let pre = s >= constants::schmincke_range(p, variant).s_min;
            report(ineq_id, asm.lap2, -s * asm.grad_lo + k * asm.pot_lo, k, pre, cfg)
        }
        "2.26" => {
            let k = 0.5 * ((n - 2.0) * (n - 2.0) - (g - 2.0) * (g - 2.0));
            let pre = (g >= 2.0 && g >= n) || (g <= 2.0 && n <= 8.0 - 3.0 * g);
            report(ineq_id, asm.lap2, k * asm.grad_lo, k, pre, cfg)
        }
        "2.35" => {
            let k = constants::hardy_constant(p);
            report(ineq_id, asm.grad_hi, k * asm.pot_hi, k, true, cfg)
        }
        "2.43" => {
            let k = constants::hardy_constant(p);
            report(ineq_id, asm.radial_dir_hi, k * asm.pot_hi, k, true, cfg)
        }
        "3.1" | "3.2" => {
            let a = need(free.alpha, "alpha", ineq_id)?;
            let b = need(free.beta, "beta", ineq_id)?;
            let t = need(free.tau, "tau", ineq_id)?;
            let c = constants::thm31_coefficients(a, b, t, p);
            let sph = c.c_sph_half * asm.sph_half
                + c.c_sph_half_dr * asm.sph_half_dr
                + c.c_sph_full * asm.sph_full;
            let (rhs, pre) = if ineq_id == "3.1" {
                (
                    c.base.c_grad * asm.grad_lo
                        + c.base.c_radial * asm.radial_dir
                        + c.base.c_pot * asm.pot_lo
                        + sph,
                    true,
                )
            } else {
                (
                    constants::thm21_cauchy_grad_coefficient(a, b, p) * asm.grad_lo
                        + c.base.c_pot * asm.pot_lo
                        + sph,
                    c.base.cauchy_valid,
                )
            };
            report(ineq_id, asm.lap2, rhs, c.base.c_pot, pre, cfg)
        }
        "3.38" => {
            let t = need(free.tau, "tau", ineq_id)?;
            let shift = constants::rellich_shift(p);
            let k = shift * shift;
            let ch = 0.5 * (t * (g + n - 4.0).powi(2) + (n - 2.0) * (n - 2.0) - (g - 2.0) * (g - 2.0));
            let rhs = k * asm.pot_lo + ch * asm.sph_half - 2.0 * t * asm.sph_half_dr
                - t * (t + 2.0) * asm.sph_full;
            report(ineq_id, asm.lap2, rhs, k, true, cfg)
        }
        "3.44" => {
            let k = constants::rellich_constant(p).value;
            report(ineq_id, asm.lap2, k * asm.pot_lo, k, true, cfg)
        }
        "3.49" => {
            let a = need(free.alpha, "alpha", ineq_id)?;
            let b = need(free.beta, "beta", ineq_id)?;
            let t = need(free.tau, "tau", ineq_id)?;
            let c = constants::thm21_coefficients(a, b, p);
            let sph = -t * (2.0 * b + (g + n - 4.0) * (n / 2.0 - g / 2.0 - a));
            let rhs = c.c_grad * asm.grad_lo
                + c.c_radial * asm.radial_dir
                + c.c_pot * asm.pot_lo
                + sph * asm.sph_half
                - t * (t + 2.0) * asm.sph_full;
            report(ineq_id, asm.lap2, rhs, c.c_pot, t < 0.0, cfg)
        }
        "3.51" => {
            let a = need(free.alpha, "alpha", ineq_id)?;
            let b = need(free.beta, "beta", ineq_id)?;
            let t = need(free.tau, "tau", ineq_id)?;
            let c = constants::thm21_coefficients(a, b, p);
            let sph =
                -t * (2.0 * b + (g + n - 4.0) * (n / 2.0 - g / 2.0 - a) + (t + 2.0) * (n - 1.0));
            let rhs = c.c_grad * asm.grad_lo
                + c.c_radial * asm.radial_dir
                + c.c_pot * asm.pot_lo
                + sph * asm.sph_half;
            report(ineq_id, asm.lap2, rhs, c.c_pot, -2.0 < t && t < 0.0, cfg)
        }
        "3.59a" => {
            let mut rhs = 0.0;
            for mf in f.terms() {
                let lambda = eigenvalue(p.n, mf.j)?;
                let mi = mode_integrals(mf, p, cfg)?;
                rhs += constants::hardy_rellich_alpha(p, mf.j) * (mi.m1 + lambda * mi.m0);
            }
            let k = constants::hardy_rellich_constant(p).value;
            report(ineq_id, asm.lap2, rhs, k, true, cfg)
        }
        "3.69a" => {
            let k = constants::hardy_rellich_constant(p).value;
            report(ineq_id, asm.lap2, k * asm.grad_lo, k, true, cfg)
        }
        "3.100" => {
            let s = need(free.s, "s", ineq_id)?;
            let k = (4.0 * s + 25.0 / 9.0) / 16.0;
            let pre = p.n == 3 && g == 0.0 && s >= -25.0 / 36.0;
            report(ineq_id, asm.lap2, -s * asm.grad_lo + k * asm.pot_lo, k, pre, cfg)
        }
        "3.115" => {
            let s = need(free.s, "s", ineq_id)?;
            let k = constants::k3(s)?;
            let pre = p.n == 3 && g == 0.0;
            report(ineq_id, asm.lap2, -s * asm.grad_lo + k * asm.pot_lo, k, pre, cfg)
        }
        "3.49a" | "3.50a" => {
            // 1-D inequalities on the radial parts alone (no mode weights)
            let mut lhs = 0.0;
            let mut den = 0.0;
            let k = if ineq_id == "3.49a" {
                (1.0 - g).powi(2) * (3.0 - g).powi(2) / 16.0
            } else {
                (1.0 - g).powi(2) / 4.0
            };
            for mf in f.terms() {
                let prof = mf.profile.as_ref();
                if ineq_id == "3.49a" {
                    lhs += profile_integral(prof, &|r| r.powf(g) * prof.d2(r).powi(2), cfg)?;
                    den += profile_integral(prof, &|r| r.powf(g - 4.0) * prof.eval(r).powi(2), cfg)?;
                } else {
                    lhs += profile_integral(prof, &|r| r.powf(g) * prof.d1(r).powi(2), cfg)?;
                    den += profile_integral(prof, &|r| r.powf(g - 2.0) * prof.eval(r).powi(2), cfg)?;
                }
            }
            report(ineq_id, lhs, k * den, k, true, cfg)
        }
        "3.48a" | "4.31" => {
            let depth = free
                .log_depth
                .ok_or_else(|| Error::Domain(format!("inequality {ineq_id} needs log depth N")))?;
            let radius = need(free.radius, "radius", ineq_id)?;
            let eta = need(free.eta, "eta", ineq_id)?;
            for mf in f.terms() {
                let (_, hi) = mf.profile.support();
                if hi >= radius {
                    return Err(Error::Domain(format!(
                        "profile support must lie inside (0, {radius}), extends to {hi}"
                    )));
                }
            }
            let lw = LogWeightParams::new(depth, eta, radius)?;
            let lr = assemble_logref(f, p, &lw, cfg)?;
            let (rhs, k) = if ineq_id == "3.48a" {
                let c = constants::rellich_constant(p).value;
                let k = ((n - g).powi(2) + (n + g - 4.0).powi(2)) / 16.0;
                (c * asm.pot_lo + k * lr.pot, k)
            } else {
                let a = constants::hardy_rellich_constant(p).value;
                (
                    a * asm.grad_lo + 0.25 * lr.grad_radial + 0.5 * lr.grad_sph,
                    a,
                )
            };
            report(ineq_id, asm.lap2, rhs, k, true, cfg)
        }
        other => {
            return Err(Error::Unsupported(format!("unknown inequality id {other:?}")));
        }
    };
    Ok(r)
}

/// The two per-mode Rayleigh quotients of one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerModeQuotients {
    /// `l / m0`, bounded below by `(lambda_j + c)^2`
    pub rellich_q: f64,
    /// `l / (m1 + lambda_j m0)`, bounded below by `alpha_{n,gamma,lambda_j}`
    pub hardy_rellich_q: f64,
}

pub fn per_mode_quotients(
    mf: &ModeFunction,
    p: Params,
    cfg: &QuadratureConfig,
) -> Result<PerModeQuotients> {
    let lambda = eigenvalue(p.n, mf.j)?;
    let mi = mode_integrals(mf, p, cfg)?;
    let den_hr = mi.m1 + lambda * mi.m0;
    if mi.m0 <= 0.0 || den_hr <= 0.0 {
        return Err(Error::Degenerate("zero profile has no Rayleigh quotient".into()));
    }
    Ok(PerModeQuotients {
        rellich_q: mi.l / mi.m0,
        hardy_rellich_q: mi.l / den_hr,
    })
}

/// One row of the sharpness sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub epsilon: f64,
    pub hardy_rellich_q: f64,
    pub rellich_q: f64,
}

/// Evaluates the Rayleigh quotients of the near-extremal trial functions
/// `r^p psi_eps(r)` along a shrinking-`eps` schedule. As `eps -> 0` the
/// quotients approach the per-mode sharp constants. With `certify_a` the
/// dimensions where the trial family misses the sharp gradient constant
/// (`(n, gamma) = (2, 2)` and `(3, 1)`) are rejected.
pub fn sharpness_sweep(
    p: Params,
    j0: ModeIndex,
    radius: f64,
    schedule: &[f64],
    certify_a: bool,
    cfg: &QuadratureConfig,
) -> Result<Vec<SweepPoint>> {
    if certify_a && ((p.n == 2 && p.gamma == 2.0) || (p.n == 3 && p.gamma == 1.0)) {
        return Err(Error::Unsupported(format!(
            "trial family does not certify the gradient constant at (n, gamma) = ({}, {})",
            p.n, p.gamma
        )));
    }
    let mut out = Vec::with_capacity(schedule.len());
    for &eps in schedule {
        let t = TrialFunction::new(p, j0, eps, radius)?;
        let mf = ModeFunction {
            j: j0,
            profile: trial_radial(t)?,
        };
        let q = per_mode_quotients(&mf, p, cfg)?;
        out.push(SweepPoint {
            epsilon: eps,
            hardy_rellich_q: q.hardy_rellich_q,
            rellich_q: q.rellich_q,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{random_profile, smooth_bump};

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn bump_mode(j: u32) -> ModeFunction {
        ModeFunction {
            j: ModeIndex(j),
            profile: smooth_bump(1.0, 3.0).unwrap(),
        }
    }

    struct Scaled(f64, RadialProfile);
    impl Profile for Scaled {
        fn support(&self) -> (f64, f64) {
            self.1.support()
        }
        fn eval(&self, r: f64) -> f64 {
            self.0 * self.1.eval(r)
        }
        fn d1(&self, r: f64) -> f64 {
            self.0 * self.1.d1(r)
        }
        fn d2(&self, r: f64) -> f64 {
            self.0 * self.1.d2(r)
        }
        fn knots(&self) -> Vec<f64> {
            self.1.knots()
        }
    }

    struct Zero;
    impl Profile for Zero {
        fn support(&self) -> (f64, f64) {
            (1.0, 2.0)
        }
        fn eval(&self, _: f64) -> f64 {
            0.0
        }
        fn d1(&self, _: f64) -> f64 {
            0.0
        }
        fn d2(&self, _: f64) -> f64 {
            0.0
        }
    }

    #[test]
    fn integrals_against_trapezoid() {
        let p = Params::new(3, 0.0).unwrap();
        let mf = bump_mode(0);
        let mi = mode_integrals(&mf, p, &cfg()).unwrap();
        let prof = mf.profile.as_ref();
        let m = 1_000_000usize;
        let h = 2.0 / m as f64;
        let trap = |f: &dyn Fn(f64) -> f64| {
            let mut s = 0.0;
            for i in 0..=m {
                let w = if i == 0 || i == m { 0.5 } else { 1.0 };
                s += w * f(1.0 + i as f64 * h);
            }
            s * h
        };
        let e = 3.0; // gamma + n
        let t_m0 = trap(&|r| r.powf(e - 5.0) * prof.eval(r).powi(2));
        let t_m1 = trap(&|r| r.powf(e - 3.0) * prof.d1(r).powi(2));
        let t_m2 = trap(&|r| r.powf(e - 1.0) * prof.d2(r).powi(2));
        let t_l = trap(&|r| {
            let op = -prof.d2(r) - 2.0 * prof.d1(r) / r;
            r.powf(e - 1.0) * op * op
        });
        assert!((mi.m0 - t_m0).abs() / t_m0 < 1e-8);
        assert!((mi.m1 - t_m1).abs() / t_m1 < 1e-8);
        assert!((mi.m2 - t_m2).abs() / t_m2 < 1e-8);
        assert!((mi.l - t_l).abs() / t_l < 1e-8);
    }

    #[test]
    fn integrals_scale_quadratically() {
        let p = Params::new(4, 1.0).unwrap();
        let base = mode_integrals(&bump_mode(2), p, &cfg()).unwrap();
        let scaled = ModeFunction {
            j: ModeIndex(2),
            profile: Box::new(Scaled(2.0, smooth_bump(1.0, 3.0).unwrap())),
        };
        let mi = mode_integrals(&scaled, p, &cfg()).unwrap();
        for (a, b) in [
            (mi.m0, base.m0),
            (mi.m0_hi, base.m0_hi),
            (mi.m1, base.m1),
            (mi.m1_hi, base.m1_hi),
            (mi.m2, base.m2),
            (mi.l, base.l),
        ] {
            assert!((a - 4.0 * b).abs() < 1e-9 * a.abs().max(1.0));
        }
    }

    #[test]
    fn identity_363a() {
        let p = Params::new(5, 0.0).unwrap();
        assert!(identity_363a_residual(&bump_mode(0), p, &cfg()).unwrap() < 1e-8);

        let p = Params::new(4, 1.0).unwrap();
        let mf = ModeFunction {
            j: ModeIndex(2),
            profile: random_profile(7, 0.5, 2.5, 4).unwrap(),
        };
        assert!(identity_363a_residual(&mf, p, &cfg()).unwrap() < 1e-8);

        let zero = ModeFunction {
            j: ModeIndex(1),
            profile: Box::new(Zero),
        };
        assert_eq!(identity_363a_residual(&zero, p, &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn spherical_identities() {
        use SphericalLemma::*;
        let p = Params::new(3, 0.0).unwrap();
        for lemma in [L35, L36, L37, L38] {
            let res = spherical_identity_residual(lemma, &bump_mode(1), p, &cfg()).unwrap();
            assert!(res < 1e-8, "{lemma:?}: residual {res}");
        }
        // across a small parameter sample with seeded profiles
        for (n, gamma, seed) in [(2u32, -3.0, 1u64), (4, 1.0, 2), (5, 2.0, 3), (7, 5.0, 4)] {
            let p = Params::new(n, gamma).unwrap();
            let mf = ModeFunction {
                j: ModeIndex(1),
                profile: random_profile(seed, 0.8, 2.2, 5).unwrap(),
            };
            for lemma in [L35, L36, L37, L38] {
                let res = spherical_identity_residual(lemma, &mf, p, &cfg()).unwrap();
                assert!(res < 1e-8, "n={n}, gamma={gamma}, {lemma:?}: {res}");
            }
        }
        let zero = ModeFunction {
            j: ModeIndex(1),
            profile: Box::new(Zero),
        };
        assert_eq!(
            spherical_identity_residual(L36, &zero, p, &cfg()).unwrap(),
            0.0
        );
    }

    #[test]
    fn assemble_mode_additivity() {
        let p = Params::new(3, 0.0).unwrap();
        let single0 = assemble(&MultiModeFunction::single(bump_mode(0)), p, &cfg()).unwrap();
        let single1 = assemble(&MultiModeFunction::single(bump_mode(1)), p, &cfg()).unwrap();
        let both =
            assemble(&MultiModeFunction::new(vec![bump_mode(0), bump_mode(1)]).unwrap(), p, &cfg())
                .unwrap();
        assert!((both.lap2 - single0.lap2 - single1.lap2).abs() < 1e-10 * both.lap2);
        assert!((both.pot_lo - single0.pot_lo - single1.pot_lo).abs() < 1e-10 * both.pot_lo);
        // lambda_0 = 0 kills the spherical terms
        assert_eq!(single0.sph_half, 0.0);
        assert_eq!(single0.sph_full, 0.0);
        // grad_lo - radial_dir = sph_half
        assert!((both.grad_lo - both.radial_dir - both.sph_half).abs() < 1e-10 * both.grad_lo);
        assert!(MultiModeFunction::new(vec![bump_mode(1), bump_mode(1)]).is_err());
    }

    #[test]
    fn verify_rellich_and_hardy_examples() {
        let free = FreeParams::default();
        let p = Params::new(5, 0.0).unwrap();
        let f = MultiModeFunction::single(bump_mode(0));
        let rep = verify("3.44", p, &free, &f, &cfg()).unwrap();
        assert!(rep.margin > 0.0);
        assert!(rep.ratio.unwrap() >= 25.0 / 16.0 / rep.constant_used);
        assert!((rep.constant_used - 25.0 / 16.0).abs() < 1e-12);

        let p = Params::new(3, 0.0).unwrap();
        let rep = verify("2.35", p, &free, &f, &cfg()).unwrap();
        assert!((rep.constant_used - 0.25).abs() < 1e-15);
        assert!(rep.ratio.unwrap() >= 1.0);
    }

    #[test]
    fn verify_schmincke_and_k3_examples() {
        let p = Params::new(3, 0.0).unwrap();
        let f = MultiModeFunction::single(bump_mode(1));
        let rep = verify(
            "3.89",
            p,
            &FreeParams {
                s: Some(-0.5),
                ..Default::default()
            },
            &f,
            &cfg(),
        )
        .unwrap();
        assert!(rep.preconditions_met);
        assert!(rep.margin >= -1e-9 * rep.lhs.abs());

        // K(-25/36) = 0: reduces to the pure gradient-term bound
        let rep = verify(
            "3.115",
            p,
            &FreeParams {
                s: Some(-25.0 / 36.0),
                ..Default::default()
            },
            &f,
            &cfg(),
        )
        .unwrap();
        assert!(rep.constant_used.abs() < 1e-15);
        assert!(rep.margin >= -1e-9 * rep.lhs.abs());
        assert!(verify(
            "3.115",
            p,
            &FreeParams {
                s: Some(-0.8),
                ..Default::default()
            },
            &f,
            &cfg(),
        )
        .is_err());
    }

    #[test]
    fn verify_unknown_and_missing_params() {
        let p = Params::new(3, 0.0).unwrap();
        let f = MultiModeFunction::single(bump_mode(0));
        assert!(verify("9.99", p, &FreeParams::default(), &f, &cfg()).is_err());
        assert!(verify("2.1", p, &FreeParams::default(), &f, &cfg()).is_err());
    }

    #[test]
    fn per_mode_soundness_examples() {
        let cfg = cfg();
        let p = Params::new(5, 0.0).unwrap();
        let q = per_mode_quotients(&bump_mode(0), p, &cfg).unwrap();
        assert!(q.hardy_rellich_q >= 6.25);

        let p = Params::new(3, 0.0).unwrap();
        let q = per_mode_quotients(&bump_mode(1), p, &cfg).unwrap();
        assert!(q.hardy_rellich_q >= 25.0 / 36.0);

        let scaled = ModeFunction {
            j: ModeIndex(1),
            profile: Box::new(Scaled(3.0, smooth_bump(1.0, 3.0).unwrap())),
        };
        let qs = per_mode_quotients(&scaled, p, &cfg).unwrap();
        assert!((qs.rellich_q - q.rellich_q).abs() < 1e-8 * q.rellich_q);
        assert!((qs.hardy_rellich_q - q.hardy_rellich_q).abs() < 1e-8 * q.hardy_rellich_q);

        let zero = ModeFunction {
            j: ModeIndex(0),
            profile: Box::new(Zero),
        };
        assert!(per_mode_quotients(&zero, p, &cfg).is_err());
    }

    #[test]
    fn sweep_excluded_pairs() {
        let sched = [0.5, 0.25];
        let cfg = QuadratureConfig::sweep();
        assert!(sharpness_sweep(
            Params::new(3, 1.0).unwrap(),
            ModeIndex(0),
            1.0,
            &sched,
            true,
            &cfg
        )
        .is_err());
        assert!(sharpness_sweep(
            Params::new(2, 2.0).unwrap(),
            ModeIndex(0),
            1.0,
            &sched,
            true,
            &cfg
        )
        .is_err());
        // same pair without A-certification is fine
        assert!(sharpness_sweep(
            Params::new(3, 1.0).unwrap(),
            ModeIndex(0),
            1.0,
            &sched,
            false,
            &cfg
        )
        .is_ok());
    }
}
