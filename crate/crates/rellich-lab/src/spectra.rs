//! Spectral data of the Laplace--Beltrami operator on the unit sphere
//! `S^{n-1}` and iterated-logarithm refinement weights.
//!
//! The eigenvalues are `lambda_j = j(j+n-2)` with multiplicity
//! `m(lambda_j) = (2j+n-2)/(j+n-2) * C(j+n-2, n-2)`; everything downstream is
//! mode-reduced and only ever needs these two numbers, never the spherical
//! harmonics themselves.

use crate::{Error, Result};

/// Index of a spherical-harmonic mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeIndex(pub u32);

/// One eigenspace of `-Delta_{S^{n-1}}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereMode {
    pub j: ModeIndex,
    pub lambda: f64,
    pub multiplicity: u64,
}

fn check_dim(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension n must be >= 2, got {n}")));
    }
    Ok(())
}

/// Eigenvalue `lambda_j = j(j+n-2)` of `-Delta_{S^{n-1}}`.
pub fn eigenvalue(n: u32, j: ModeIndex) -> Result<f64> {
    check_dim(n)?;
    let j = j.0 as u64;
    Ok((j * (j + n as u64 - 2)) as f64)
}

/// Multiplicity of the eigenvalue `lambda_j`, computed in exact integer
/// arithmetic. Guarded against overflow for `j + n - 2 <= 62`.
pub fn multiplicity(n: u32, j: ModeIndex) -> Result<u64> {
    check_dim(n)?;
    let j = j.0 as u64;
    let n = n as u64;
    if j + n - 2 > 62 {
        return Err(Error::Domain(format!(
            "multiplicity overflow guard: j+n-2 = {} > 62",
            j + n - 2
        )));
    }
    if j == 0 {
        return Ok(1);
    }
    // (2j+n-2)/(j+n-2) * C(j+n-2, n-2) = C(j+n-2, n-2) + C(j+n-3, n-2)
    Ok(binomial(j + n - 2, n - 2) + binomial(j + n - 3, n - 2))
}

/// Binomial coefficient via the multiplicative formula, exact for the guarded
/// range.
fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The full spectral datum for mode `j`.
pub fn sphere_mode(n: u32, j: ModeIndex) -> Result<SphereMode> {
    Ok(SphereMode {
        j,
        lambda: eigenvalue(n, j)?,
        multiplicity: multiplicity(n, j)?,
    })
}

/// Iterated exponential `e_0 = 0`, `e_{j+1} = exp(e_j)`.
pub fn iterated_exp(j: u32) -> Result<f64> {
    if j > 4 {
        return Err(Error::Domain(format!(
            "iterated exponential overflows for j = {j} > 4"
        )));
    }
    let mut e = 0.0f64;
    for _ in 0..j {
        e = e.exp();
    }
    Ok(e)
}

/// Parameters of the iterated-logarithm refinement weight: depth `N`, length
/// scale `eta`, and ball radius `R`, with `eta >= e_N * R` required.
#[derive(Debug, Clone, Copy)]
pub struct LogWeightParams {
    depth: u32,
    eta: f64,
    radius: f64,
}

impl LogWeightParams {
    pub fn new(depth: u32, eta: f64, radius: f64) -> Result<Self> {
        if depth == 0 {
            return Err(Error::Domain("refinement depth N must be >= 1".into()));
        }
        if !(eta > 0.0) || !(radius > 0.0) {
            return Err(Error::Domain("eta and R must be positive".into()));
        }
        let floor = iterated_exp(depth)? * radius;
        // allow a whisker of rounding slack at the admissibility boundary
        if eta < floor * (1.0 - 1e-12) {
            return Err(Error::Domain(format!(
                "eta = {eta} below admissible floor e_N * R = {floor}"
            )));
        }
        Ok(Self { depth, eta, radius })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// The refinement weight
/// `sum_{k=1}^{N} prod_{p=1}^{k} [ln_p(eta/r)]^{-2}`
/// with `ln_1 = ln` and `ln_{k+1} = ln o ln_k`, positive and finite on `(0, R)`.
pub fn log_refinement_weight(params: &LogWeightParams, r: f64) -> Result<f64> {
    if !(r > 0.0 && r < params.radius) {
        return Err(Error::Domain(format!(
            "r = {r} outside (0, R) with R = {}",
            params.radius
        )));
    }
    let mut arg = params.eta / r;
    let mut sum = 0.0;
    let mut product = 1.0;
    for _ in 0..params.depth {
        arg = arg.ln();
        if arg <= 0.0 {
            return Err(Error::Domain(
                "iterated logarithm hit a nonpositive value; eta below e_N * R".into(),
            ));
        }
        product /= arg * arg;
        sum += product;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues() {
        assert_eq!(eigenvalue(3, ModeIndex(0)).unwrap(), 0.0);
        assert_eq!(eigenvalue(3, ModeIndex(1)).unwrap(), 2.0);
        assert_eq!(eigenvalue(5, ModeIndex(2)).unwrap(), 10.0);
        assert!(eigenvalue(1, ModeIndex(0)).is_err());
    }

    #[test]
    fn eigenvalues_strictly_increasing() {
        for n in 2..=8 {
            for j in 0..20 {
                let a = eigenvalue(n, ModeIndex(j)).unwrap();
                let b = eigenvalue(n, ModeIndex(j + 1)).unwrap();
                assert!(b > a, "n={n}, j={j}");
            }
        }
    }

    #[test]
    fn multiplicities() {
        assert_eq!(multiplicity(3, ModeIndex(0)).unwrap(), 1);
        assert_eq!(multiplicity(3, ModeIndex(1)).unwrap(), 3);
        assert_eq!(multiplicity(2, ModeIndex(4)).unwrap(), 2);
        // circle harmonics: cos/sin pairs for every j >= 1
        for j in 1..30 {
            assert_eq!(multiplicity(2, ModeIndex(j)).unwrap(), 2);
        }
        for n in 2..=8 {
            assert_eq!(multiplicity(n, ModeIndex(0)).unwrap(), 1);
        }
    }

    #[test]
    fn multiplicity_dimension_count() {
        // sum_{j<=J} m(lambda_j) = C(J+n-1, n-1) + C(J+n-2, n-1)
        for n in 2u64..=6 {
            for cap in 0u64..=8 {
                let total: u64 = (0..=cap)
                    .map(|j| multiplicity(n as u32, ModeIndex(j as u32)).unwrap())
                    .sum();
                let expected = binomial(cap + n - 1, n - 1) + binomial(cap + n - 2, n - 1);
                assert_eq!(total, expected, "n={n}, J={cap}");
            }
        }
    }

    #[test]
    fn iterated_exponentials() {
        assert_eq!(iterated_exp(0).unwrap(), 0.0);
        assert_eq!(iterated_exp(1).unwrap(), 1.0);
        assert!((iterated_exp(2).unwrap() - std::f64::consts::E).abs() < 1e-15);
        assert!(iterated_exp(5).is_err());
    }

    #[test]
    fn log_weight_direct_values() {
        let e = std::f64::consts::E;
        // N=1, r = eta/e: ln(e) = 1, weight 1
        let p = LogWeightParams::new(1, e * 10.0, 15.0).unwrap();
        let r = p.eta() / e;
        assert!((log_refinement_weight(&p, r).unwrap() - 1.0).abs() < 1e-14);
        // N=1, r = eta/e^2: [ln(e^2)]^{-2} = 1/4
        let r = p.eta() / (e * e);
        assert!((log_refinement_weight(&p, r).unwrap() - 0.25).abs() < 1e-14);
        // N=2, eta = e_2 * R, r = eta/e^e: ln_1 = e, ln_2 = 1,
        // weight = e^{-2} + e^{-2} = 2 e^{-2} (computed by hand)
        let p2 = LogWeightParams::new(2, e * 3.0, 3.0).unwrap();
        let r = p2.eta() / e.powf(e);
        let w = log_refinement_weight(&p2, r).unwrap();
        assert!((w - 2.0 * (-2.0f64).exp()).abs() < 1e-14, "w = {w}");
    }

    #[test]
    fn log_weight_increasing_in_r() {
        // eta/r shrinks toward e_N as r -> R, so every iterated logarithm
        // decreases and the weight grows monotonically in r
        for depth in 1..=2u32 {
            let radius = 1.5;
            let eta = iterated_exp(depth).unwrap() * radius;
            let p = LogWeightParams::new(depth, eta, radius).unwrap();
            let mut prev = 0.0;
            for k in 1..200 {
                let r = radius * k as f64 / 200.0;
                let w = log_refinement_weight(&p, r).unwrap();
                assert!(w > 0.0 && w.is_finite());
                assert!(w > prev, "depth={depth}, r={r}");
                prev = w;
            }
        }
    }

    #[test]
    fn log_weight_params_validated_eagerly() {
        assert!(LogWeightParams::new(1, 0.5, 1.0).is_err());
        assert!(LogWeightParams::new(2, 1.0, 1.0).is_err());
        assert!(LogWeightParams::new(0, 1.0, 1.0).is_err());
    }
}
