//! Closed-form constants, coefficient sets, admissibility ranges, and
//! min-over-modes computations for the weighted Rellich, Hardy,
//! Hardy--Rellich, and Schmincke-type inequalities.

use crate::spectra::{eigenvalue, ModeIndex};
use crate::{Error, Result};

/// The pair `(n, gamma)` parameterizing every constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub n: u32,
    pub gamma: f64,
}

impl Params {
    pub fn new(n: u32, gamma: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("dimension n must be >= 2, got {n}")));
        }
        Ok(Self { n, gamma })
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }
}

/// Result of a min-over-modes computation, together with the index up to
/// which the scan is provably sufficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizerResult {
    pub value: f64,
    pub argmin_j: ModeIndex,
    pub scan_bound: ModeIndex,
}

/// Sharp weighted Hardy constant `((n-2+gamma)/2)^2`.
pub fn hardy_constant(p: Params) -> f64 {
    let c = (p.nf() - 2.0 + p.gamma) / 2.0;
    c * c
}

/// Shift `c = (n-2)^2/4 - (gamma-2)^2/4` appearing in the Rellich minimand
/// `(lambda_j + c)^2`.
pub fn rellich_shift(p: Params) -> f64 {
    let n = p.nf();
    (n - 2.0) * (n - 2.0) / 4.0 - (p.gamma - 2.0) * (p.gamma - 2.0) / 4.0
}

/// Sharp weighted Rellich constant `min_j (lambda_j + c)^2`.
///
/// The map `lambda -> (lambda + c)^2` is increasing for `lambda >= -c`, so the
/// scan stops at the first `j` with `lambda_j >= max(0, -c)`.
pub fn rellich_constant(p: Params) -> MinimizerResult {
    let c = rellich_shift(p);
    let threshold = (-c).max(0.0);
    let mut best = f64::INFINITY;
    let mut argmin = 0u32;
    let mut j = 0u32;
    loop {
        let lambda = eigenvalue(p.n, ModeIndex(j)).expect("n >= 2");
        let term = (lambda + c) * (lambda + c);
        if term < best {
            best = term;
            argmin = j;
        }
        if lambda >= threshold {
            break;
        }
        j += 1;
    }
    MinimizerResult {
        value: best,
        argmin_j: ModeIndex(argmin),
        scan_bound: ModeIndex(j),
    }
}

/// Per-mode Hardy--Rellich quotient bound `alpha_{n,gamma,lambda_j}`:
/// `(n-gamma)^2/4` for `j = 0` and `[q+lambda_j]^2/[d+lambda_j]` for `j >= 1`
/// with `q = (n+gamma-4)(n-gamma)/4`, `d = (n+gamma-4)^2/4`.
pub fn hardy_rellich_alpha(p: Params, j: ModeIndex) -> f64 {
    let n = p.nf();
    if j.0 == 0 {
        let a = (n - p.gamma) / 2.0;
        return a * a;
    }
    let lambda = eigenvalue(p.n, j).expect("n >= 2");
    let q = (n + p.gamma - 4.0) * (n - p.gamma) / 4.0;
    let d = (n + p.gamma - 4.0) * (n + p.gamma - 4.0) / 4.0;
    (q + lambda) * (q + lambda) / (d + lambda)
}

/// Sharp Hardy--Rellich constant `A_{n,gamma} = min_j alpha_{n,gamma,lambda_j}`.
///
/// Termination certificate: the derivative of `lambda -> (q+lambda)^2/(d+lambda)`
/// has the sign of `(q+lambda)(lambda+2d-q)`, which is nonnegative for
/// `lambda >= max(-q, q-2d)`; the scan covers all `j` with
/// `lambda_j < max(1, -q, q-2d)` plus the first one past it.
pub fn hardy_rellich_constant(p: Params) -> MinimizerResult {
    let n = p.nf();
    let q = (n + p.gamma - 4.0) * (n - p.gamma) / 4.0;
    let d = (n + p.gamma - 4.0) * (n + p.gamma - 4.0) / 4.0;
    let threshold = 1.0f64.max(-q).max(q - 2.0 * d);
    let mut best = f64::INFINITY;
    let mut argmin = 0u32;
    let mut j = 0u32;
    loop {
        let term = hardy_rellich_alpha(p, ModeIndex(j));
        if term < best {
            best = term;
            argmin = j;
        }
        let lambda = eigenvalue(p.n, ModeIndex(j)).expect("n >= 2");
        if j >= 1 && lambda >= threshold {
            break;
        }
        j += 1;
    }
    MinimizerResult {
        value: best,
        argmin_j: ModeIndex(argmin),
        scan_bound: ModeIndex(j),
    }
}

/// Whether the mode-tail condition guaranteeing monotonicity of
/// `alpha_{n,gamma,lambda_j}` in `j` holds for this particular `j >= 1`.
///
/// Condition (i): `gamma in [-8j+2, 2]`; otherwise (ii)/(iii) bound `n` from
/// below/above by `-2(gamma-3+j) -+ 2*sqrt(gamma^2/4 + (2j-1)gamma - 4j + 1)`.
pub fn lemma49_condition(p: Params, j: ModeIndex) -> bool {
    assert!(j.0 >= 1, "lemma49_condition requires j >= 1");
    let jf = j.0 as f64;
    let g = p.gamma;
    if (-8.0 * jf + 2.0..=2.0).contains(&g) {
        return true;
    }
    let disc = g * g / 4.0 + (2.0 * jf - 1.0) * g - 4.0 * jf + 1.0;
    if disc < 0.0 {
        // cannot happen for gamma outside [-8j+2, 2]; treat as not satisfied
        return false;
    }
    let root = disc.sqrt();
    let center = -2.0 * (g - 3.0 + jf);
    let n = p.nf();
    n >= center + 2.0 * root || n <= center - 2.0 * root
}

/// Smallest `j0 <= 64` such that the monotone-tail condition holds for every
/// `j` in `j0..=64`, if any.
pub fn lemma410_bound(p: Params) -> Option<ModeIndex> {
    const CAP: u32 = 64;
    let mut j0 = None;
    for j in (1..=CAP).rev() {
        if lemma49_condition(p, ModeIndex(j)) {
            j0 = Some(ModeIndex(j));
        } else {
            break;
        }
    }
    j0
}

/// The coefficient set of the two-free-parameter inequality underlying all of
/// the section-2 corollaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thm21Coefficients {
    pub alpha: f64,
    pub beta: f64,
    /// coefficient of `int |x|^{gamma-2} |grad f|^2`
    pub c_grad: f64,
    /// coefficient of `int |x|^{gamma-4} |x . grad f|^2`
    pub c_radial: f64,
    /// coefficient of `int |x|^{gamma-4} |f|^2`
    pub c_pot: f64,
    /// whether the Cauchy-estimated variant (radial term absorbed into the
    /// gradient term) applies, i.e. `alpha(alpha-4+2gamma) >= 0`
    pub cauchy_valid: bool,
}

pub fn thm21_coefficients(alpha: f64, beta: f64, p: Params) -> Thm21Coefficients {
    let n = p.nf();
    let g = p.gamma;
    Thm21Coefficients {
        alpha,
        beta,
        c_grad: alpha * (g + n - 4.0) - 2.0 * beta,
        c_radial: -alpha * (alpha - 4.0 + 2.0 * g),
        c_pot: beta * ((n - 4.0) * (alpha - 2.0) - beta + g * (n + alpha + g - 6.0)),
        cauchy_valid: alpha * (alpha - 4.0 + 2.0 * g) >= 0.0,
    }
}

/// Coefficient of the gradient term in the Cauchy-estimated variant:
/// `alpha(n-alpha-gamma) - 2 beta`.
pub fn thm21_cauchy_grad_coefficient(alpha: f64, beta: f64, p: Params) -> f64 {
    alpha * (p.nf() - alpha - p.gamma) - 2.0 * beta
}

/// Coefficient set with the additional spherical terms; `tau = 0` reduces to
/// [`Thm21Coefficients`] with all spherical coefficients zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thm31Coefficients {
    pub base: Thm21Coefficients,
    pub tau: f64,
    /// coefficient of the weight `gamma-4` `(-Delta_S)^{1/2} f` term
    pub c_sph_half: f64,
    /// coefficient of the weight `gamma-2` `(-Delta_S)^{1/2} df/dr` term
    pub c_sph_half_dr: f64,
    /// coefficient of the weight `gamma-4` `Delta_S f` term
    pub c_sph_full: f64,
}

pub fn thm31_coefficients(alpha: f64, beta: f64, tau: f64, p: Params) -> Thm31Coefficients {
    let n = p.nf();
    let g = p.gamma;
    Thm31Coefficients {
        base: thm21_coefficients(alpha, beta, p),
        tau,
        c_sph_half: -tau * ((g + n - 4.0) * (2.0 - alpha - g) + 2.0 * beta),
        c_sph_half_dr: -2.0 * tau,
        c_sph_full: -tau * (tau + 2.0),
    }
}

/// Spherical-term coefficient of the `tau in (-2, 0)` estimate
/// `-tau [2 beta + (gamma+n-4)(n/2 - gamma/2 - alpha) + (tau+2)(n-1)]`.
pub fn lemma314_coefficient(alpha: f64, beta: f64, tau: f64, p: Params) -> Result<f64> {
    if !(-2.0 < tau && tau < 0.0) {
        return Err(Error::Domain(format!("tau must lie in (-2, 0), got {tau}")));
    }
    let n = p.nf();
    let g = p.gamma;
    Ok(-tau * (2.0 * beta + (g + n - 4.0) * (n / 2.0 - g / 2.0 - alpha) + (tau + 2.0) * (n - 1.0)))
}

/// Which admissibility branch a Schmincke range comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchminckeCase {
    Sec2,
    Sec3CaseI,
    Sec3CaseII,
}

/// Admissible parameter range `[s_min, infinity)` of a Schmincke-type
/// inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchminckeRange {
    pub s_min: f64,
    pub case: SchminckeCase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchminckeVariant {
    Sec2,
    Sec3,
}

pub fn schmincke_range(p: Params, variant: SchminckeVariant) -> SchminckeRange {
    let n = p.nf();
    let dn = (n - 2.0) * (n - 2.0);
    let dg = (p.gamma - 2.0) * (p.gamma - 2.0);
    match variant {
        SchminckeVariant::Sec2 => SchminckeRange {
            s_min: -0.5 * (dn - dg),
            case: SchminckeCase::Sec2,
        },
        SchminckeVariant::Sec3 => {
            let half_width = (n - 1.0).sqrt();
            if (2.0 - half_width..=2.0 + half_width).contains(&p.gamma) {
                SchminckeRange {
                    s_min: -0.5 * (dn + dg),
                    case: SchminckeCase::Sec3CaseI,
                }
            } else {
                SchminckeRange {
                    s_min: -0.5 * (dn - dg) + 1.0 - n,
                    case: SchminckeCase::Sec3CaseII,
                }
            }
        }
    }
}

/// Potential-term constant `((gamma+n-4)/4)^2 [(gamma-n)^2 + 4s]` of the
/// Schmincke-type inequalities. Admissibility of `s` is the caller's concern.
pub fn schmincke_rhs_constant(p: Params, s: f64) -> f64 {
    let n = p.nf();
    let q = (p.gamma + n - 4.0) / 4.0;
    q * q * ((p.gamma - n) * (p.gamma - n) + 4.0 * s)
}

/// Piecewise potential constant `K(s)` of the improved `n = 3`, `gamma = 0`
/// Schmincke inequality.
pub fn k3(s: f64) -> Result<f64> {
    if s >= -0.5 {
        Ok((4.0 * s + 9.0) / 16.0)
    } else if s >= -25.0 / 36.0 {
        Ok((4.0 * s + 25.0 / 9.0) / 16.0)
    } else {
        Err(Error::Domain(format!("s = {s} below -25/36")))
    }
}

/// Literal evaluation of the two comparison predicates between the
/// Hardy--Rellich-type lower bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuperiorityPredicates {
    /// `(n-8)(n-4) > gamma(gamma-12)`
    pub over_4n44: bool,
    /// `(gamma+n-4)(3gamma+n-8) >= 0`
    pub over_42g: bool,
}

pub fn superiority_predicates(p: Params) -> SuperiorityPredicates {
    let n = p.nf();
    let g = p.gamma;
    SuperiorityPredicates {
        over_4n44: (n - 8.0) * (n - 4.0) > g * (g - 12.0),
        over_42g: (g + n - 4.0) * (3.0 * g + n - 8.0) >= 0.0,
    }
}

/// The chain of intermediate constants behind the `n = 3` improved Schmincke
/// bound, checked for internal consistency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct N3SpecialChain {
    pub a: f64,
    pub b_plus: f64,
    pub b_minus: f64,
    pub eps_plus: f64,
    pub eps_minus: f64,
    pub alpha_hat_plus: f64,
    pub alpha_hat_minus: f64,
    pub s_at_alpha_hat_plus: f64,
}

pub fn n3_special_chain() -> Result<N3SpecialChain> {
    let r72 = (7.0f64 / 2.0).sqrt();
    let a = -0.5;
    let b_plus = 0.75 + r72 / 3.0;
    let b_minus = 0.75 - r72 / 3.0;
    let eps_plus = r72 / 6.0;
    let eps_minus = -r72 / 6.0;
    let half_root = 0.5 * (65.0 / 9.0 - (8.0 / 3.0) * r72).sqrt();
    let alpha_hat_plus = 2.0 + half_root;
    let alpha_hat_minus = 2.0 - half_root;
    let s = |alpha: f64| alpha * alpha - 4.0 * alpha + 1.5 + (2.0 / 3.0) * r72;
    let s_plus = s(alpha_hat_plus);

    // discriminant condition with A = -1/2, B = B_+, eps = eps_+:
    // (2A+1)^2 (1+eps)^2 - 8(2A+1)(1+eps) - (8B-6)(1+eps) + 8 eps^2 + 8 >= 0
    let check_disc = |b: f64, eps: f64| {
        let t = 2.0 * a + 1.0;
        t * t * (1.0 + eps) * (1.0 + eps) - 8.0 * t * (1.0 + eps) - (8.0 * b - 6.0) * (1.0 + eps)
            + 8.0 * eps * eps
            + 8.0
    };
    for (b, eps) in [(b_plus, eps_plus), (b_minus, eps_minus)] {
        let d = check_disc(b, eps);
        if d < 0.0 {
            return Err(Error::Inconsistent(format!(
                "discriminant condition fails: {d} < 0 at B = {b}, eps = {eps}"
            )));
        }
    }
    if (s_plus + 25.0 / 36.0).abs() > 1e-12 {
        return Err(Error::Inconsistent(format!(
            "s(alpha_hat_plus) = {s_plus} differs from -25/36"
        )));
    }
    Ok(N3SpecialChain {
        a,
        b_plus,
        b_minus,
        eps_plus,
        eps_minus,
        alpha_hat_plus,
        alpha_hat_minus,
        s_at_alpha_hat_plus: s_plus,
    })
}

/// `G(t) = (At+B)/(Ct+D)`, nondecreasing on `[a, infinity)` when
/// `A, C, D, a > 0` and `AD - BC >= 0`.
pub fn remark_a2_g(t: f64, a_coef: f64, b_coef: f64, c_coef: f64, d_coef: f64, a: f64) -> Result<f64> {
    if !(a_coef > 0.0 && c_coef > 0.0 && d_coef > 0.0 && a > 0.0) {
        return Err(Error::Domain("G requires A, C, D, a > 0".into()));
    }
    if a_coef * d_coef - b_coef * c_coef < 0.0 {
        return Err(Error::Domain("G requires AD - BC >= 0".into()));
    }
    if t < a {
        return Err(Error::Domain(format!("t = {t} below a = {a}")));
    }
    Ok((a_coef * t + b_coef) / (c_coef * t + d_coef))
}

/// `P_n(gamma) = 5 gamma^2 + (2n-24) gamma + n^2 - 8n + 32`, nonnegative for
/// every `n >= 2` (its discriminant is `-16(n-2)^2`).
pub fn remark_a2_p(p: Params) -> f64 {
    let n = p.nf();
    let g = p.gamma;
    5.0 * g * g + (2.0 * n - 24.0) * g + n * n - 8.0 * n + 32.0
}
