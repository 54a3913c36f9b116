//! Smooth, compactly supported radial profiles with analytic first and second
//! derivatives: bumps, plateau cutoffs, power-times-cutoff trial radial parts,
//! and seeded random test profiles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constants::Params;
use crate::spectra::ModeIndex;
use crate::{Error, Result};

/// A twice continuously differentiable radial function supported on a compact
/// interval `[a, b]` with `a > 0`.
pub trait Profile: Send + Sync {
    /// Support interval `[a, b]`; the function and its derivatives vanish
    /// identically outside it.
    fn support(&self) -> (f64, f64);
    fn eval(&self, r: f64) -> f64;
    fn d1(&self, r: f64) -> f64;
    fn d2(&self, r: f64) -> f64;
    /// Interior points where the definition switches pieces; quadrature
    /// panels are split here.
    fn knots(&self) -> Vec<f64> {
        Vec::new()
    }
}

pub type RadialProfile = Box<dyn Profile>;

/// `exp(-1/(1-t^2))` on `|t| < 1` (0 outside) with `t` affine in `r`,
/// supported on `(a, b)`.
pub struct SmoothBump {
    a: f64,
    b: f64,
}

/// Value and first two `t`-derivatives of the bump kernel.
fn bump_kernel(t: f64) -> (f64, f64, f64) {
    if t.abs() >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let u = 1.0 - t * t;
    let f = (-1.0 / u).exp();
    // d/dt exp(-1/u) = f * (-2t/u^2); d/dt(-2t/u^2) = -2/u^2 - 8 t^2/u^3
    let g = -2.0 * t / (u * u);
    let gp = -2.0 / (u * u) - 8.0 * t * t / (u * u * u);
    (f, f * g, f * (g * g + gp))
}

impl SmoothBump {
    fn t(&self, r: f64) -> f64 {
        (2.0 * r - self.a - self.b) / (self.b - self.a)
    }

    fn scale(&self) -> f64 {
        2.0 / (self.b - self.a)
    }
}

impl Profile for SmoothBump {
    fn support(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    fn eval(&self, r: f64) -> f64 {
        bump_kernel(self.t(r)).0
    }

    fn d1(&self, r: f64) -> f64 {
        bump_kernel(self.t(r)).1 * self.scale()
    }

    fn d2(&self, r: f64) -> f64 {
        let s = self.scale();
        bump_kernel(self.t(r)).2 * s * s
    }
}

pub fn smooth_bump(a: f64, b: f64) -> Result<RadialProfile> {
    if !(0.0 < a && a < b) {
        return Err(Error::Domain(format!("need 0 < a < b, got a = {a}, b = {b}")));
    }
    Ok(Box::new(SmoothBump { a, b }))
}

/// Plateau cutoff: 1 on `[eps R/5, 4R/5]`, 0 on `(0, eps R/10]` and
/// `[9R/10, R)`, smooth-step transitions between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSpec {
    pub radius: f64,
    pub epsilon: f64,
}

impl CutoffSpec {
    pub fn new(radius: f64, epsilon: f64) -> Result<Self> {
        if radius <= 0.0 {
            return Err(Error::Domain(format!("radius must be > 0, got {radius}")));
        }
        if !(0.0 < epsilon && epsilon <= 1.0) {
            return Err(Error::Domain(format!("epsilon must lie in (0, 1], got {epsilon}")));
        }
        Ok(Self { radius, epsilon })
    }
}

/// Smooth step `s(t) = sigma(t) / (sigma(t) + sigma(1-t))`,
/// `sigma(t) = exp(-1/t)` for `t > 0`, 0 otherwise; returns
/// `(s, s', s'')`.
fn smooth_step(t: f64) -> (f64, f64, f64) {
    if t <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    if t >= 1.0 {
        return (1.0, 0.0, 0.0);
    }
    let s1 = (-1.0 / t).exp();
    let u = 1.0 - t;
    let s2 = (-1.0 / u).exp();
    let s1p = s1 / (t * t);
    let s2p = -s2 / (u * u);
    let s1pp = s1 * (1.0 / t.powi(4) - 2.0 / t.powi(3));
    let s2pp = s2 * (1.0 / u.powi(4) - 2.0 / u.powi(3));
    let d = s1 + s2;
    let dp = s1p + s2p;
    let n = s1p * s2 - s1 * s2p;
    let np = s1pp * s2 - s1 * s2pp;
    let s = s1 / d;
    let sp = n / (d * d);
    let spp = np / (d * d) - 2.0 * n * dp / (d * d * d);
    (s, sp, spp)
}

pub struct Cutoff {
    spec: CutoffSpec,
}

impl Cutoff {
    fn inner_lo(&self) -> f64 {
        self.spec.epsilon * self.spec.radius / 10.0
    }

    fn inner_hi(&self) -> f64 {
        self.spec.epsilon * self.spec.radius / 5.0
    }

    fn outer_lo(&self) -> f64 {
        4.0 * self.spec.radius / 5.0
    }

    fn outer_hi(&self) -> f64 {
        9.0 * self.spec.radius / 10.0
    }

    /// Value and derivatives in `r`, handling both transition bands.
    fn full(&self, r: f64) -> (f64, f64, f64) {
        if r <= self.inner_lo() || r >= self.outer_hi() {
            (0.0, 0.0, 0.0)
        } else if r < self.inner_hi() {
            let w = self.inner_lo(); // band width equals the left endpoint
            let (s, sp, spp) = smooth_step((r - self.inner_lo()) / w);
            (s, sp / w, spp / (w * w))
        } else if r <= self.outer_lo() {
            (1.0, 0.0, 0.0)
        } else {
            let w = self.spec.radius / 10.0;
            let (s, sp, spp) = smooth_step((self.outer_hi() - r) / w);
            (s, -sp / w, spp / (w * w))
        }
    }
}

impl Profile for Cutoff {
    fn support(&self) -> (f64, f64) {
        (self.inner_lo(), self.outer_hi())
    }

    fn eval(&self, r: f64) -> f64 {
        self.full(r).0
    }

    fn d1(&self, r: f64) -> f64 {
        self.full(r).1
    }

    fn d2(&self, r: f64) -> f64 {
        self.full(r).2
    }

    fn knots(&self) -> Vec<f64> {
        vec![self.inner_lo(), self.inner_hi(), self.outer_lo(), self.outer_hi()]
    }
}

pub fn cutoff(spec: CutoffSpec) -> RadialProfile {
    Box::new(Cutoff { spec })
}

/// Plateau equal to 1 on `[a, b]`, with smooth-step transitions of width
/// `log_width` in `ln r` on both sides; support is `[a e^{-w}, b e^{w}]`.
///
/// A transition of log-width `w` satisfies `|r psi'| <= c/w` and
/// `|r^2 psi''| <= c/w^2 + c/w`, so in any Rayleigh quotient whose integrands
/// scale like `r^{-1}` the transition bands contribute at the same ratio as
/// the plateau up to `O(1/w)`. Fixed-width bands instead contribute an
/// eps-independent constant that dominates the slowly growing plateau term,
/// which is why near-extremal families built from them only converge at
/// astronomically small cutoff parameters.
pub struct LogPlateau {
    a: f64,
    b: f64,
    w: f64,
}

impl LogPlateau {
    /// Value and first two derivatives in `r`.
    fn full(&self, r: f64) -> (f64, f64, f64) {
        let (lo, hi) = (self.a * (-self.w).exp(), self.b * self.w.exp());
        if r <= lo || r >= hi {
            (0.0, 0.0, 0.0)
        } else if r < self.a {
            let t = (r / self.a).ln() / self.w + 1.0;
            let (s, sp, spp) = smooth_step(t);
            // t' = 1/(w r), t'' = -1/(w r^2)
            let wr = self.w * r;
            (s, sp / wr, spp / (wr * wr) - sp / (wr * r))
        } else if r <= self.b {
            (1.0, 0.0, 0.0)
        } else {
            let t = 1.0 - (r / self.b).ln() / self.w;
            let (s, sp, spp) = smooth_step(t);
            // t' = -1/(w r), t'' = 1/(w r^2)
            let wr = self.w * r;
            (s, -sp / wr, spp / (wr * wr) + sp / (wr * r))
        }
    }
}

impl Profile for LogPlateau {
    fn support(&self) -> (f64, f64) {
        (self.a * (-self.w).exp(), self.b * self.w.exp())
    }

    fn eval(&self, r: f64) -> f64 {
        self.full(r).0
    }

    fn d1(&self, r: f64) -> f64 {
        self.full(r).1
    }

    fn d2(&self, r: f64) -> f64 {
        self.full(r).2
    }

    fn knots(&self) -> Vec<f64> {
        // subdivide each transition band geometrically so adaptive quadrature
        // panels never span more than about one e-folding
        let mut ks = Vec::new();
        let steps = (self.w / 0.7).ceil() as usize;
        for i in 0..=steps {
            let f = (-self.w * (1.0 - i as f64 / steps as f64)).exp();
            ks.push(self.a * f);
        }
        for i in 0..=steps {
            let f = (self.w * i as f64 / steps as f64).exp();
            ks.push(self.b * f);
        }
        ks
    }
}

/// Plateau cutoff with log-scale transitions; see [`LogPlateau`].
pub fn log_plateau(a: f64, b: f64, log_width: f64) -> Result<RadialProfile> {
    if !(0.0 < a && a < b) {
        return Err(Error::Domain(format!("need 0 < a < b, got a = {a}, b = {b}")));
    }
    if !(log_width > 0.0) {
        return Err(Error::Domain(format!("log width must be > 0, got {log_width}")));
    }
    Ok(Box::new(LogPlateau { a, b, w: log_width }))
}

/// The radial part `r^p psi_eps(r)` of the near-extremal trial function, with
/// `p = (4 - n - gamma + eps)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialFunction {
    pub params: Params,
    pub j0: ModeIndex,
    pub epsilon: f64,
    pub radius: f64,
    pub exponent_p: f64,
}

impl TrialFunction {
    pub fn new(params: Params, j0: ModeIndex, epsilon: f64, radius: f64) -> Result<Self> {
        if epsilon <= 0.0 {
            return Err(Error::Domain(format!("epsilon must be > 0, got {epsilon}")));
        }
        if radius <= 0.0 {
            return Err(Error::Domain(format!("radius must be > 0, got {radius}")));
        }
        Ok(Self {
            params,
            j0,
            epsilon,
            radius,
            exponent_p: (4.0 - params.nf() - params.gamma + epsilon) / 2.0,
        })
    }
}

struct TrialRadial {
    p: f64,
    cut: LogPlateau,
}

impl Profile for TrialRadial {
    fn support(&self) -> (f64, f64) {
        self.cut.support()
    }

    fn eval(&self, r: f64) -> f64 {
        self.cut.eval(r) * r.powf(self.p)
    }

    fn d1(&self, r: f64) -> f64 {
        let (c, c1, _) = self.cut.full(r);
        if c == 0.0 && c1 == 0.0 {
            return 0.0;
        }
        let rp = r.powf(self.p);
        c1 * rp + c * self.p * rp / r
    }

    fn d2(&self, r: f64) -> f64 {
        let (c, c1, c2) = self.cut.full(r);
        if c == 0.0 && c1 == 0.0 && c2 == 0.0 {
            return 0.0;
        }
        let rp = r.powf(self.p);
        c2 * rp + 2.0 * c1 * self.p * rp / r + c * self.p * (self.p - 1.0) * rp / (r * r)
    }

    fn knots(&self) -> Vec<f64> {
        self.cut.knots()
    }
}

pub fn trial_radial(t: TrialFunction) -> Result<RadialProfile> {
    if t.epsilon > 1.0 {
        return Err(Error::Domain(format!(
            "trial epsilon must lie in (0, 1], got {}",
            t.epsilon
        )));
    }
    // Plateau [eps R/5, 4R/5] as in the extremal family; the transitions are
    // log-scale with width growing like ln(1/eps), so both Rayleigh quotients
    // converge to the per-mode sharp constants at moderate eps instead of
    // requiring the asymptotic regime. Widening transitions also preserve the
    // pointwise nesting of the family along a decreasing eps schedule.
    let w = 2.5 * (10.0 / t.epsilon).ln();
    Ok(Box::new(TrialRadial {
        p: t.exponent_p,
        cut: LogPlateau {
            a: t.epsilon * t.radius / 5.0,
            b: 4.0 * t.radius / 5.0,
            w,
        },
    }))
}

struct PolyBump {
    coeffs: Vec<f64>,
    bump: SmoothBump,
}

impl PolyBump {
    /// Horner evaluation of the polynomial and its first two derivatives.
    fn poly(&self, r: f64) -> (f64, f64, f64) {
        let (mut p, mut p1, mut p2) = (0.0, 0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            p2 = p2 * r + 2.0 * p1;
            p1 = p1 * r + p;
            p = p * r + c;
        }
        (p, p1, p2)
    }
}

impl Profile for PolyBump {
    fn support(&self) -> (f64, f64) {
        self.bump.support()
    }

    fn eval(&self, r: f64) -> f64 {
        self.poly(r).0 * self.bump.eval(r)
    }

    fn d1(&self, r: f64) -> f64 {
        let (p, p1, _) = self.poly(r);
        p1 * self.bump.eval(r) + p * self.bump.d1(r)
    }

    fn d2(&self, r: f64) -> f64 {
        let (p, p1, p2) = self.poly(r);
        p2 * self.bump.eval(r) + 2.0 * p1 * self.bump.d1(r) + p * self.bump.d2(r)
    }
}

/// Seeded random polynomial (coefficients uniform in `[-1, 1]`) times a
/// smooth bump on `(a, b)`; the same seed always yields the same profile.
pub fn random_profile(seed: u64, a: f64, b: f64, degree: u32) -> Result<RadialProfile> {
    if degree > 8 {
        return Err(Error::Domain(format!("degree must be <= 8, got {degree}")));
    }
    if !(0.0 < a && a < b) {
        return Err(Error::Domain(format!("need 0 < a < b, got a = {a}, b = {b}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = (0..=degree).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    Ok(Box::new(PolyBump {
        coeffs,
        bump: SmoothBump { a, b },
    }))
}

/// Geometric schedule `eps_k = eps0 * 2^{-k}`; the cutoff construction makes
/// the corresponding plateaus pointwise nondecreasing along the schedule.
pub fn nested_epsilon_schedule(eps0: f64, steps: u32) -> Result<Vec<f64>> {
    if !(0.0 < eps0 && eps0 <= 1.0) {
        return Err(Error::Domain(format!("eps0 must lie in (0, 1], got {eps0}")));
    }
    Ok((0..steps).map(|k| eps0 * 0.5f64.powi(k as i32)).collect())
}
