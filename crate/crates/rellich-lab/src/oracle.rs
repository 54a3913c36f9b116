//! Independent brute-force estimation of the per-mode infimal Rayleigh
//! quotients: discretize the radial problem on a log-uniform grid and solve a
//! small banded generalized eigenvalue problem.
//!
//! In the log variable `t = ln r` the mode operator becomes
//! `B u = e^{-2t} [ -u'' - (n-2) u' + lambda u ]` (with `F(r) = u(t)`), which
//! a three-point stencil turns into a tridiagonal map; the numerator quadratic
//! form is then `B^T W B` with the quadrature weight `W = h r^{gamma+n}`
//! absorbing `dr = r dt`.
//!
//! The quotients are scale invariant, so clamping the ends (compact support
//! on the window) leaves an `O(1/ln^2(r_max/r_min))` gap above the infimum
//! that closes far too slowly in the window width. Instead we substitute
//! `u = r^{p*} w` with the balanced exponent `p* = (4 - n - gamma)/2`, which
//! makes every quadrature weight constant in `t`, and close the window
//! periodically in `w`. The near-extremal power `r^{p*}` is then the
//! admissible `w = const` mode, the kernel powers of the operator are not
//! periodic and stay excluded, and the discrete minimum lands within `O(h^2)`
//! of the infimum. The stencils are exponentially fitted (exact on
//! `r^{p*} e^{+-p* t}`) and the numerator carries a `(1 - h^2/12)^2` factor so
//! the minimum still decreases strictly as the window widens. Periodic
//! wrap-around is reconciled with the banded solver by interleaving the node
//! order (`0, M-1, 1, M-2, ...`), which folds the circulant coupling into
//! bandwidth 4.

use crate::constants::Params;
use crate::spectra::{eigenvalue, ModeIndex};
use crate::{Error, Result};

/// Log-uniform grid on `[r_min, r_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, points: usize) -> Result<Self> {
        if !(0.0 < r_min && r_min < r_max) {
            return Err(Error::Domain(format!(
                "need 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if points < 50 {
            return Err(Error::Domain(format!("need at least 50 points, got {points}")));
        }
        if points > 4000 {
            return Err(Error::Domain(format!("grid capped at 4000 points, got {points}")));
        }
        Ok(Self { r_min, r_max, points })
    }

    /// Log spacing.
    pub fn h(&self) -> f64 {
        (self.r_max / self.r_min).ln() / (self.points - 1) as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let t0 = self.r_min.ln();
        let h = self.h();
        (0..self.points).map(|i| (t0 + i as f64 * h).exp()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quotient {
    Rellich,
    HardyRellich,
}

/// Symmetric banded matrix stored by lower bands:
/// `bands[d][i] = A[i+d][i]`, `d = 0..=bw`.
#[derive(Debug, Clone, PartialEq)]
pub struct Banded {
    pub dim: usize,
    pub bands: Vec<Vec<f64>>,
}

impl Banded {
    fn zeros(dim: usize, bw: usize) -> Self {
        Self {
            dim,
            bands: (0..=bw).map(|d| vec![0.0; dim.saturating_sub(d)]).collect(),
        }
    }

    pub fn bandwidth(&self) -> usize {
        self.bands.len() - 1
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        for (d, band) in self.bands.iter().enumerate() {
            for (i, &a) in band.iter().enumerate() {
                if d == 0 {
                    y[i] += a * x[i];
                } else {
                    y[i + d] += a * x[i];
                    y[i] += a * x[i + d];
                }
            }
        }
        y
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        dot(x, &self.matvec(x))
    }

    /// Banded `A = L D L^T` without pivoting; fails on a vanishing pivot.
    fn ldlt(&self) -> Result<(Banded, Vec<f64>)> {
        let bw = self.bandwidth();
        let n = self.dim;
        let mut l = Banded::zeros(n, bw);
        let mut d = vec![0.0; n];
        let scale: f64 = self.bands[0].iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        for j in 0..n {
            let mut s = self.bands[0][j];
            for k in j.saturating_sub(bw)..j {
                s -= l.bands[j - k][k] * l.bands[j - k][k] * d[k];
            }
            if s.abs() < 1e-300 * scale.max(1.0) {
                return Err(Error::Numerical(format!("vanishing pivot {j} in LDL^T")));
            }
            d[j] = s;
            l.bands[0][j] = 1.0;
            for i in j + 1..(j + bw + 1).min(n) {
                let mut s = self.bands[i - j][j];
                for k in i.saturating_sub(bw)..j {
                    s -= l.bands[i - k][k] * l.bands[j - k][k] * d[k];
                }
                l.bands[i - j][j] = s / d[j];
            }
        }
        Ok((l, d))
    }

    /// `self - sigma * other`, elementwise on matching band layouts.
    fn shifted(&self, sigma: f64, other: &Banded) -> Banded {
        let mut out = self.clone();
        for (d, band) in out.bands.iter_mut().enumerate() {
            for (i, v) in band.iter_mut().enumerate() {
                *v -= sigma * other.bands[d][i];
            }
        }
        out
    }
}

/// Solves `L D L^T x = b`.
fn solve_ldlt(l: &Banded, d: &[f64], b: &[f64]) -> Vec<f64> {
    let n = l.dim;
    let bw = l.bandwidth();
    let mut y = b.to_vec();
    for i in 0..n {
        for k in i.saturating_sub(bw)..i {
            let yk = y[k];
            y[i] -= l.bands[i - k][k] * yk;
        }
    }
    for i in 0..n {
        y[i] /= d[i];
    }
    for i in (0..n).rev() {
        for k in i + 1..(i + bw + 1).min(n) {
            let yk = y[k];
            y[i] -= l.bands[k - i][i] * yk;
        }
    }
    y
}

/// Number of generalized eigenvalues of `(A, B)` strictly below `sigma`,
/// read off the pivot signs of `A - sigma B`; nudges `sigma` off exact
/// eigenvalues where the factorization breaks down.
fn inertia_below(a: &Banded, b: &Banded, sigma: f64) -> Result<usize> {
    let mut s = sigma;
    for _ in 0..6 {
        match a.shifted(s, b).ldlt() {
            Ok((_, d)) => return Ok(d.iter().filter(|&&x| x < 0.0).count()),
            Err(_) => s = s * (1.0 + 1e-12) + 1e-300,
        }
    }
    Err(Error::Numerical(format!("inertia probe failed near sigma = {sigma}")))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Double-double accumulator, needed because the form matrices span tens of
/// orders of magnitude and a plain f64 residual bottoms out near 1e-8.
#[derive(Clone, Copy, Default)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn add_prod(&mut self, a: f64, b: f64) {
        let p = a * b;
        let pe = a.mul_add(b, -p);
        let (s, e) = two_sum(self.hi, p);
        self.hi = s;
        self.lo += e + pe;
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

fn accumulate_matvec(m: &Banded, coeff: f64, xh: &[f64], xl: &[f64], acc: &mut [Dd]) {
    for (d, band) in m.bands.iter().enumerate() {
        for (i, &a) in band.iter().enumerate() {
            if d == 0 {
                acc[i].add_prod(coeff * a, xh[i]);
                acc[i].add_prod(coeff * a, xl[i]);
            } else {
                acc[i + d].add_prod(coeff * a, xh[i]);
                acc[i + d].add_prod(coeff * a, xl[i]);
                acc[i].add_prod(coeff * a, xh[i + d]);
                acc[i].add_prod(coeff * a, xl[i + d]);
            }
        }
    }
}

fn quadratic_form_dd(m: &Banded, xh: &[f64], xl: &[f64]) -> f64 {
    let mut rows = vec![Dd::default(); m.dim];
    accumulate_matvec(m, 1.0, xh, xl, &mut rows);
    let mut s = Dd::default();
    for (i, row) in rows.iter().enumerate() {
        s.add_prod(xh[i], row.value());
        s.add_prod(xl[i], row.value());
    }
    s.value()
}

/// Rows of `A v − μ B v` accumulated in double-double precision for a
/// double-double vector `v = vh + vl`.
fn residual_rows(a: &Banded, b: &Banded, mu: f64, vh: &[f64], vl: &[f64]) -> Vec<f64> {
    let mut acc = vec![Dd::default(); a.dim];
    accumulate_matvec(a, 1.0, vh, vl, &mut acc);
    accumulate_matvec(b, -mu, vh, vl, &mut acc);
    acc.iter().map(|d| d.value()).collect()
}

/// Discretized numerator and denominator quadratic forms in the balanced
/// periodic variable `w = r^{-p*} F`, folded to banded layout.
///
/// `index_of[g]` is the matrix index of grid node `g` and `balance[g]` the
/// factor `r_g^{p*}` that converts `w` values back to `F` values.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedForms {
    pub numerator: Banded,
    pub denominator: Banded,
    pub grid: RadialGrid,
    pub index_of: Vec<usize>,
    pub balance: Vec<f64>,
}

pub fn discretize(
    p: Params,
    j: ModeIndex,
    grid: &RadialGrid,
    quotient: Quotient,
) -> Result<DiscretizedForms> {
    let lambda = eigenvalue(p.n, j)?;
    let m = grid.points;
    let h = grid.h();
    let c = p.nf() - 2.0;
    let p_star = (4.0 - p.nf() - p.gamma) / 2.0;
    let x = p_star * h;
    // exponential fitting: stencil scales exact on e^{+-p* t}
    let (fit2, fit1) = if x.abs() > 1e-8 {
        (x * x / (2.0 * (x.cosh() - 1.0)), x / x.sinh())
    } else {
        (1.0, 1.0)
    };
    let zp = x.exp();
    let zm = (-x).exp();

    // interleaved order 0, M-1, 1, M-2, ... folds the wrap into bandwidth 4
    let index_of: Vec<usize> = (0..m)
        .map(|g| if 2 * g < m { 2 * g } else { 2 * (m - 1 - g) + 1 })
        .collect();
    let wrap = |g: usize, d: i64| -> usize {
        (((g as i64 + d) % m as i64 + m as i64) % m as i64) as usize
    };
    // accumulate w * (sum of coeff * w_node)^2 into a banded form
    let rank_one = |form: &mut Banded, entries: &[(usize, f64)], w: f64| {
        for &(ga, ca) in entries {
            let ia = index_of[ga];
            for &(gb, cb) in entries {
                let ib = index_of[gb];
                if ib >= ia {
                    form.bands[ib - ia][ia] += ca * cb * w;
                }
            }
        }
    };

    // operator row in w: constant coefficients thanks to the balanced weight
    let k_sub = (-fit2 / (h * h) + c * fit1 / (2.0 * h)) * zm;
    let k_diag = 2.0 * fit2 / (h * h) + lambda;
    let k_sup = (-fit2 / (h * h) - c * fit1 / (2.0 * h)) * zp;
    let w_num = h * (1.0 - h * h / 12.0).powi(2);
    let mut num = Banded::zeros(m, 4);
    for g in 0..m {
        let rows = [(wrap(g, -1), k_sub), (g, k_diag), (wrap(g, 1), k_sup)];
        rank_one(&mut num, &rows, w_num);
    }

    let den = match quotient {
        Quotient::Rellich => {
            // balanced M0 weight h r^{gamma+n-4} r^{2 p*} = h
            let mut den = Banded::zeros(m, 4);
            den.bands[0].iter_mut().for_each(|v| *v = h);
            den
        }
        Quotient::HardyRellich => {
            // M1 via the centered F' stencil in w, plus lambda M0
            let mut den = Banded::zeros(m, 4);
            for g in 0..m {
                let rows = [(wrap(g, -1), -zm / (2.0 * h)), (wrap(g, 1), zp / (2.0 * h))];
                rank_one(&mut den, &rows, h);
            }
            den.bands[0].iter_mut().for_each(|v| *v += lambda * h);
            den
        }
    };

    let balance: Vec<f64> = grid.nodes().iter().map(|&r| r.powf(p_star)).collect();
    Ok(DiscretizedForms {
        numerator: num,
        denominator: den,
        grid: grid.clone(),
        index_of,
        balance,
    })
}

/// Smallest generalized eigenpair of the discretized quotient.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub mu_min: f64,
    pub vector: Vec<f64>,
    pub residual_norm: f64,
}

/// Smallest `mu` with `A v = mu B v` via inverse iteration `x <- A^{-1} B x`
/// with a banded Cholesky factorization of `A`.
pub fn min_quotient(forms: &DiscretizedForms) -> Result<EigenResult> {
    let a = &forms.numerator;
    let b = &forms.denominator;
    let n = a.dim;

    let mut v: Vec<f64> = (0..n)
        .map(|i| {
            let x = (i + 1) as f64 / (n + 1) as f64;
            (std::f64::consts::PI * x).sin()
        })
        .collect();
    let num = a.quadratic_form(&v);
    let den = b.quadratic_form(&v);
    if den <= 0.0 {
        return Err(Error::Numerical("denominator form not positive".into()));
    }

    // Bracket the smallest generalized eigenvalue by Sylvester inertia:
    // the Rayleigh quotient of any vector sits at or above it, and the
    // numerator is positive semidefinite so zero is a lower bound.
    let mut lo = 0.0_f64;
    let mut hi = num / den;
    while inertia_below(a, b, hi)? == 0 {
        hi = 2.0 * hi + 1.0;
    }
    for _ in 0..120 {
        if hi - lo <= 1e-13 * hi.abs() {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if inertia_below(a, b, mid)? == 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // Shift a little below the eigenvalue: close enough for fast contraction,
    // far enough that A - sigma B stays numerically positive definite.
    let mut factor = None;
    for margin in [1e-6, 1e-4, 1e-2] {
        let sigma = lo - (margin * hi.abs()).max(1e-12);
        if let Ok(f) = a.shifted(sigma, b).ldlt() {
            factor = Some(f);
            break;
        }
    }
    let Some((l, d)) = factor else {
        return Err(Error::Numerical("shifted factorization failed".into()));
    };
    for _ in 0..8 {
        let bv = b.matvec(&v);
        let x = solve_ldlt(&l, &d, &bv);
        let norm = dot(&x, &x).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Numerical("inverse iteration produced a null vector".into()));
        }
        for (xi, s) in v.iter_mut().zip(&x) {
            *xi = s / norm;
        }
    }

    // Extra-precision refinement: the stiffness of the fourth-order stencil
    // amplifies rounding in the residual by ~1/h^4, so the eigenvector is
    // carried as a double-double pair and corrected with the shifted factor.
    let mut vh = v;
    let mut vl = vec![0.0; n];
    let mut mu = hi;
    let mut rel = f64::INFINITY;
    for _ in 0..30 {
        let num = quadratic_form_dd(a, &vh, &vl);
        let den = quadratic_form_dd(b, &vh, &vl);
        if den <= 0.0 {
            return Err(Error::Numerical("denominator form not positive on iterate".into()));
        }
        mu = num / den;
        let res = residual_rows(a, b, mu, &vh, &vl);
        let av = a.matvec(&vh);
        rel = dot(&res, &res).sqrt() / dot(&av, &av).sqrt().max(1e-300);
        if rel <= 1e-9 {
            break;
        }
        let delta = solve_ldlt(&l, &d, &res);
        for i in 0..n {
            let (s, e) = two_sum(vh[i], vl[i] - delta[i]);
            vh[i] = s;
            vl[i] = e;
        }
        let norm = dot(&vh, &vh).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Numerical("refinement produced a null vector".into()));
        }
        // power-of-two scaling keeps the double-double pair exact
        let scale = (norm.log2().round() as i32).clamp(-500, 500);
        let inv = (2.0f64).powi(-scale);
        for i in 0..n {
            vh[i] *= inv;
            vl[i] *= inv;
        }
    }
    if rel <= 1e-8 {
        // unfold to node order and restore F = r^{p*} w
        let mut out: Vec<f64> = (0..n)
            .map(|g| forms.balance[g] * vh[forms.index_of[g]])
            .collect();
        let peak = out.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        if peak > 0.0 && peak.is_finite() {
            out.iter_mut().for_each(|x| *x /= peak);
            let norm = dot(&out, &out).sqrt();
            out.iter_mut().for_each(|x| *x /= norm);
        }
        Ok(EigenResult {
            mu_min: mu,
            vector: out,
            residual_norm: rel,
        })
    } else {
        Err(Error::QuadratureConvergence {
            estimate: mu,
            error: rel,
        })
    }
}

/// One row of a convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergeRow {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    pub mu_min: f64,
}

/// `min_quotient` over the Cartesian product of domains and resolutions.
pub fn converge_study(
    p: Params,
    j: ModeIndex,
    quotient: Quotient,
    domains: &[(f64, f64)],
    points_list: &[usize],
) -> Result<Vec<ConvergeRow>> {
    let mut rows = Vec::new();
    for &(r_min, r_max) in domains {
        for &points in points_list {
            let grid = RadialGrid::new(r_min, r_max, points)?;
            let forms = discretize(p, j, &grid, quotient)?;
            let res = min_quotient(&forms)?;
            rows.push(ConvergeRow {
                r_min,
                r_max,
                points,
                mu_min: res.mu_min,
            });
        }
    }
    Ok(rows)
}
