//! Adaptive Gauss--Kronrod quadrature with panel pre-splitting at integrand
//! knots.

use crate::{Error, Result};

/// Tolerances and subdivision budget for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 200,
        }
    }
}

impl QuadratureConfig {
    /// Looser tolerance used by parameter sweeps.
    pub fn sweep() -> Self {
        Self {
            rel_tol: 1e-8,
            ..Self::default()
        }
    }
}

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights on the odd-index abscissae.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One Gauss--Kronrod 15/7 panel; returns (estimate, error_estimate).
fn gk15(g: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = g(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let fsum = g(c - x) + g(c + x);
        kronrod += WGK[i] * fsum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * fsum;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn panel(g: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Panel {
    let (value, error) = gk15(g, a, b);
    Panel { a, b, value, error }
}

/// Integral of `g` over `[a, b]`, with the initial panels split at the given
/// interior knots before adaptive bisection of the worst panel.
pub fn integrate_with_knots(
    g: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    knots: &[f64],
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(a < b) {
        return Err(Error::Domain(format!("empty or inverted interval [{a}, {b}]")));
    }
    let mut cuts: Vec<f64> = knots.iter().copied().filter(|&k| k > a && k < b).collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts);
    edges.push(b);

    let mut panels: Vec<Panel> = edges.windows(2).map(|w| panel(g, w[0], w[1])).collect();
    for _ in 0..cfg.max_subdivisions {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        if err <= cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
            return Ok(total);
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let Panel { a, b, .. } = panels[worst];
        let mid = 0.5 * (a + b);
        panels[worst] = panel(g, a, mid);
        panels.push(panel(g, mid, b));
    }
    let total: f64 = panels.iter().map(|p| p.value).sum();
    let err: f64 = panels.iter().map(|p| p.error).sum();
    if err <= cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
        Ok(total)
    } else {
        Err(Error::QuadratureConvergence {
            estimate: total,
            error: err,
        })
    }
}

pub fn integrate(g: &dyn Fn(f64) -> f64, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    integrate_with_knots(g, a, b, &[], cfg)
}
