//! Qubit states and their phase-space probability families.
//!
//! The Husimi function of a state with Bloch vector `r⃗` is taken to be
//! `Q(n) = (1 + r⃗·n)/2` on the unit sphere, with reference measure
//! `dμ = dΩ/(2π)`. With this convention the Shannon entropy of `Q` is the
//! closed-form Wehrl entropy of [`wehrl_entropy`], and the Fisher metric of
//! the family is the one in [`crate::metriczoo::fisher_husimi_metric`].

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{integrate_sphere_about, QuadratureSpec};

/// Below this radius the escort normalizer and its derivative use their
/// power series.
const ESCORT_SERIES_RADIUS: f64 = 0.1;

/// Slack allowed on `|r⃗| ≤ 1` when accepting a point.
const BALL_SLACK: f64 = 1e-12;

/// A point of the Bloch ball in spherical coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub r: f64,
    /// Polar angle in `[0, π]`.
    pub theta1: f64,
    /// Azimuth in `[0, 2π)`.
    pub theta2: f64,
}

impl BlochVector {
    pub fn new(r: f64, theta1: f64, theta2: f64) -> Result<Self> {
        if !(r.is_finite() && theta1.is_finite() && theta2.is_finite()) {
            return Err(Error::Domain("Bloch coordinates must be finite".into()));
        }
        if !(0.0..=1.0 + BALL_SLACK).contains(&r) {
            return Err(Error::Domain(format!("radius {r} outside [0, 1]")));
        }
        if !(0.0..=PI).contains(&theta1) {
            return Err(Error::Domain(format!(
                "polar angle {theta1} outside [0, π]"
            )));
        }
        Ok(BlochVector {
            r: r.min(1.0),
            theta1,
            theta2: theta2.rem_euclid(2.0 * PI),
        })
    }

    /// State on the positive `z` axis.
    pub fn along_z(r: f64) -> Result<Self> {
        BlochVector::new(r, 0.0, 0.0)
    }

    pub fn from_cartesian(p: [f64; 3]) -> Result<Self> {
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        if r == 0.0 {
            return BlochVector::new(0.0, 0.0, 0.0);
        }
        let theta1 = (p[2] / r).clamp(-1.0, 1.0).acos();
        let theta2 = p[1].atan2(p[0]);
        BlochVector::new(r, theta1, theta2)
    }

    pub fn cartesian(&self) -> [f64; 3] {
        let (s1, c1) = self.theta1.sin_cos();
        let (s2, c2) = self.theta2.sin_cos();
        [self.r * s1 * c2, self.r * s1 * s2, self.r * c1]
    }

    /// Unit vector along the state; `ẑ` at the centre.
    pub fn direction(&self) -> [f64; 3] {
        let (s1, c1) = self.theta1.sin_cos();
        let (s2, c2) = self.theta2.sin_cos();
        [s1 * c2, s1 * s2, c1]
    }

    pub fn is_pure(&self) -> bool {
        self.r >= 1.0
    }
}

/// `W = log((1 - r)/(1 + r)) = log(λ₂/λ₁)`.
pub fn log_eigen_ratio(r: f64) -> f64 {
    -2.0 * r.atanh()
}

/// A 2×2 density matrix `ρ = (I + x σx + y σy + z σz)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    pub entries: [[Complex64; 2]; 2],
}

impl DensityMatrix {
    pub fn from_bloch(v: &BlochVector) -> Self {
        let [x, y, z] = v.cartesian();
        DensityMatrix {
            entries: [
                [
                    Complex64::new((1.0 + z) / 2.0, 0.0),
                    Complex64::new(x / 2.0, -y / 2.0),
                ],
                [
                    Complex64::new(x / 2.0, y / 2.0),
                    Complex64::new((1.0 - z) / 2.0, 0.0),
                ],
            ],
        }
    }

    /// Inverse of [`DensityMatrix::from_bloch`]; rejects non-states.
    pub fn bloch(&self) -> Result<BlochVector> {
        let e = &self.entries;
        if (e[0][1] - e[1][0].conj()).norm() > 1e-12
            || e[0][0].im.abs() > 1e-12
            || e[1][1].im.abs() > 1e-12
        {
            return Err(Error::Domain("matrix is not Hermitian".into()));
        }
        if (self.trace() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("trace {} is not 1", self.trace())));
        }
        let x = 2.0 * e[1][0].re;
        let y = 2.0 * e[1][0].im;
        let z = e[0][0].re - e[1][1].re;
        BlochVector::from_cartesian([x, y, z])
    }

    pub fn trace(&self) -> f64 {
        self.entries[0][0].re + self.entries[1][1].re
    }

    /// `(λ₁, λ₂) = ((1 + r)/2, (1 - r)/2)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let e = &self.entries;
        let half_tr = 0.5 * (e[0][0].re + e[1][1].re);
        let d = 0.5 * (e[0][0].re - e[1][1].re);
        let rad = (d * d + e[0][1].norm_sqr()).sqrt();
        (half_tr + rad, half_tr - rad)
    }

    pub fn determinant(&self) -> f64 {
        let e = &self.entries;
        (e[0][0] * e[1][1] - e[0][1] * e[1][0]).re
    }
}

/// The classical families of distributions attached to a qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseSpaceFamily {
    Husimi,
    /// Renormalised `q`-th power of the Husimi function.
    Escort {
        q: f64,
    },
    /// Circular complex Gaussian on `C²` with covariance `ρ`.
    Gaussian,
}

/// Reference measure of a family's sample space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceMeasure {
    /// `dΩ/(2π)` on the unit sphere.
    SphereOverTwoPi,
    /// Lebesgue measure on `C²`.
    ComplexPlane2,
}

/// A sample point of one of the families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SamplePoint {
    Direction([f64; 3]),
    Complex([Complex64; 2]),
}

impl PhaseSpaceFamily {
    pub fn escort(q: f64) -> Result<Self> {
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::Domain(format!(
                "entropic index must be positive, got {q}"
            )));
        }
        Ok(PhaseSpaceFamily::Escort { q })
    }

    pub fn reference_measure(&self) -> ReferenceMeasure {
        match self {
            PhaseSpaceFamily::Gaussian => ReferenceMeasure::ComplexPlane2,
            _ => ReferenceMeasure::SphereOverTwoPi,
        }
    }

    /// Entropic index; the Husimi family is `q = 1`.
    pub fn index(&self) -> Option<f64> {
        match *self {
            PhaseSpaceFamily::Husimi => Some(1.0),
            PhaseSpaceFamily::Escort { q } => Some(q),
            PhaseSpaceFamily::Gaussian => None,
        }
    }

    pub fn log_density(&self, state: &BlochVector, x: &SamplePoint) -> Result<f64> {
        match (self, x) {
            (PhaseSpaceFamily::Gaussian, SamplePoint::Complex(z)) => gaussian_log_density(state, z),
            (PhaseSpaceFamily::Gaussian, _) | (_, SamplePoint::Complex(_)) => Err(Error::Domain(
                "sample point does not match the family".into(),
            )),
            (_, SamplePoint::Direction(n)) => {
                let q = self.index().expect("sphere family");
                Ok(q * husimi_q(state, *n).ln() - escort_normalizer(q, state.r)?.ln())
            }
        }
    }

    /// Gradient of the log-density with respect to the cartesian Bloch
    /// coordinates `(x, y, z)` at a sphere sample point.
    pub fn score(&self, state: &BlochVector, n: [f64; 3]) -> Result<[f64; 3]> {
        let q = self.index().ok_or_else(|| {
            Error::Domain("score on the sphere needs a Husimi-type family".into())
        })?;
        let qv = husimi_q(state, n);
        let a = q / (2.0 * qv);
        // ∂ log Z / ∂x_i = (Z'/Z) x_i / r, and Z'(r)/r is regular at r = 0.
        let dlogz_over_r =
            escort_normalizer_derivative_over_r(q, state.r)? / escort_normalizer(q, state.r)?;
        let p = state.cartesian();
        Ok([
            a * n[0] - dlogz_over_r * p[0],
            a * n[1] - dlogz_over_r * p[1],
            a * n[2] - dlogz_over_r * p[2],
        ])
    }
}

/// `Q(n) = (1 + r⃗·n)/2`.
pub fn husimi_q(state: &BlochVector, n: [f64; 3]) -> f64 {
    let p = state.cartesian();
    0.5 * (1.0 + p[0] * n[0] + p[1] * n[1] + p[2] * n[2])
}

/// Generalised binomial coefficient `C(a, k)`.
fn binomial(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (a - j as f64) / (j as f64 + 1.0))
}

fn check_escort_args(q: f64, r: f64) -> Result<()> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::Domain(format!(
            "entropic index must be positive, got {q}"
        )));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("radius {r} outside [0, 1]")));
    }
    Ok(())
}

/// Series coefficients `c_j` with `Z(r) = Σ c_j r^{2j}`.
fn escort_series(q: f64) -> impl Iterator<Item = f64> {
    let lead = 2f64.powf(1.0 - q) / (q + 1.0);
    (0..60).map(move |j| lead * binomial(q + 1.0, 2 * j + 1))
}

/// `Z_q(r) = ∫ Q^q dμ`, the escort normalizer.
pub fn escort_normalizer(q: f64, r: f64) -> Result<f64> {
    check_escort_args(q, r)?;
    if r < ESCORT_SERIES_RADIUS {
        let r2 = r * r;
        let mut pow = 1.0;
        let mut sum = 0.0;
        for c in escort_series(q) {
            let term = c * pow;
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
            pow *= r2;
        }
        return Ok(sum);
    }
    Ok(2f64.powf(-q) * ((1.0 + r).powf(q + 1.0) - (1.0 - r).powf(q + 1.0)) / ((q + 1.0) * r))
}

/// `Z_q'(r) / r`, finite at `r = 0`.
fn escort_normalizer_derivative_over_r(q: f64, r: f64) -> Result<f64> {
    check_escort_args(q, r)?;
    if r < ESCORT_SERIES_RADIUS {
        let r2 = r * r;
        let mut pow = 1.0;
        let mut sum = 0.0;
        for (j, c) in escort_series(q).enumerate().skip(1) {
            let term = 2.0 * j as f64 * c * pow;
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
            pow *= r2;
        }
        return Ok(sum);
    }
    Ok(escort_normalizer_derivative(q, r)? / r)
}

/// `dZ_q/dr`.
pub fn escort_normalizer_derivative(q: f64, r: f64) -> Result<f64> {
    check_escort_args(q, r)?;
    if r < ESCORT_SERIES_RADIUS {
        return Ok(r * escort_normalizer_derivative_over_r(q, r)?);
    }
    let (p, m) = (1.0 + r, 1.0 - r);
    Ok(2f64.powf(-q)
        * ((p.powf(q) + m.powf(q)) / r - (p.powf(q + 1.0) - m.powf(q + 1.0)) / ((q + 1.0) * r * r)))
}

/// `Q(n)^q / Z_q`, a probability density with respect to `dΩ/(2π)`.
pub fn escort_density(q: f64, state: &BlochVector, n: [f64; 3]) -> Result<f64> {
    Ok(husimi_q(state, n).powf(q) / escort_normalizer(q, state.r)?)
}

/// Closed-form Wehrl entropy (Shannon entropy of the Husimi function).
pub fn wehrl_entropy(r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("radius {r} outside [0, 1]")));
    }
    if r < 0.1 {
        // log 2 − Σ_{k≥1} r^{2k} / (2k (4k² − 1))
        let r2 = r * r;
        let mut pow = r2;
        let mut sum = LN_2;
        for k in 1..200 {
            let kf = k as f64;
            let term = pow / (2.0 * kf * (4.0 * kf * kf - 1.0));
            sum -= term;
            if term < 1e-19 {
                break;
            }
            pow *= r2;
        }
        return Ok(sum);
    }
    // (1+r²)W − 2r log(1−r²) = (1−r)² log(1−r) − (1+r)² log(1+r)
    let m = 1.0 - r;
    let tail = if m > 0.0 { m * m * m.ln() } else { 0.0 };
    Ok((2.0 * r + 4.0 * r * LN_2 + tail - (1.0 + r).powi(2) * r.ln_1p()) / (4.0 * r))
}

fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// `S_vN = −Tr ρ log ρ`.
pub fn von_neumann_entropy(r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("radius {r} outside [0, 1]")));
    }
    Ok(-xlogx(0.5 * (1.0 + r)) - xlogx(0.5 * (1.0 - r)))
}

/// `−∫ Q log Q dμ` by sphere quadrature.
pub fn husimi_shannon_entropy(state: &BlochVector, spec: &QuadratureSpec) -> Result<f64> {
    let v = integrate_sphere_about(
        state.direction(),
        |n| {
            let q = husimi_q(state, n);
            -xlogx(q)
        },
        spec,
    )?;
    Ok(v / (2.0 * PI))
}

/// Covariance of the Gaussian family: the density matrix itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianCovariance {
    pub matrix: DensityMatrix,
    /// Set for pure states, where the covariance has a zero eigenvalue.
    pub singular: bool,
}

pub fn gaussian_covariance(state: &BlochVector) -> GaussianCovariance {
    GaussianCovariance {
        matrix: DensityMatrix::from_bloch(state),
        singular: state.r >= 1.0,
    }
}

/// `log p(z) = −2 log π − log det Σ − z† Σ⁻¹ z`.
fn gaussian_log_density(state: &BlochVector, z: &[Complex64; 2]) -> Result<f64> {
    let cov = gaussian_covariance(state);
    if cov.singular {
        return Err(Error::Domain(
            "Gaussian covariance is singular at a pure state".into(),
        ));
    }
    let e = cov.matrix.entries;
    let det = cov.matrix.determinant();
    // Σ⁻¹ = adj(Σ)/det
    let inv = [
        [e[1][1] / det, -e[0][1] / det],
        [-e[1][0] / det, e[0][0] / det],
    ];
    let mut quad = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            quad += z[i].conj() * inv[i][j] * z[j];
        }
    }
    Ok(-2.0 * PI.ln() - det.ln() - quad.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default().with_tol(1e-14, 1e-12)
    }

    #[test]
    fn cartesian_round_trip() {
        let v = BlochVector::new(0.7, 1.1, 4.0).unwrap();
        let back = BlochVector::from_cartesian(v.cartesian()).unwrap();
        assert!((back.r - v.r).abs() < 1e-14);
        assert!((back.theta1 - v.theta1).abs() < 1e-14);
        assert!((back.theta2 - v.theta2).abs() < 1e-14);
        assert!(BlochVector::new(1.2, 0.0, 0.0).is_err());
        assert!(BlochVector::new(0.5, 4.0, 0.0).is_err());
    }

    #[test]
    fn density_matrix_round_trip_and_spectrum() {
        let v = BlochVector::new(0.6, 0.4, 2.0).unwrap();
        let rho = DensityMatrix::from_bloch(&v);
        assert!((rho.trace() - 1.0).abs() < 1e-15);
        let (l1, l2) = rho.eigenvalues();
        assert!((l1 - 0.8).abs() < 1e-14 && (l2 - 0.2).abs() < 1e-14);
        let back = rho.bloch().unwrap();
        assert!((back.r - 0.6).abs() < 1e-14);
        assert!((log_eigen_ratio(0.6) - (l2 / l1).ln()).abs() < 1e-14);
    }

    #[test]
    fn husimi_examples() {
        let mixed = BlochVector::new(0.0, 0.0, 0.0).unwrap();
        assert_eq!(husimi_q(&mixed, [0.6, 0.0, 0.8]), 0.5);
        let pure = BlochVector::along_z(1.0).unwrap();
        assert_eq!(husimi_q(&pure, [0.0, 0.0, 1.0]), 1.0);
        let v = BlochVector::new(0.8, 2.0, 1.0).unwrap();
        let mass = integrate_sphere_about([0.0, 0.0, 1.0], |n| husimi_q(&v, n), &spec()).unwrap();
        assert_relative_eq!(mass / (2.0 * PI), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn escort_normalizer_examples() {
        for r in [0.0, 0.05, 0.3, 0.9, 1.0] {
            assert_relative_eq!(escort_normalizer(1.0, r).unwrap(), 1.0, epsilon = 1e-14);
        }
        assert_relative_eq!(escort_normalizer(2.0, 0.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_relative_eq!(
            escort_normalizer(2.0, 0.5).unwrap(),
            13.0 / 24.0,
            epsilon = 1e-15
        );
        assert!(escort_normalizer(0.0, 0.5).is_err());
    }

    #[test]
    fn escort_normalizer_matches_quadrature() {
        for q in [0.5, 1.0, 2.0, 3.0, 5.0] {
            for k in 1..=9 {
                let r = k as f64 / 10.0;
                let v = BlochVector::along_z(r).unwrap();
                let num =
                    integrate_sphere_about([0.0, 0.0, 1.0], |n| husimi_q(&v, n).powf(q), &spec())
                        .unwrap()
                        / (2.0 * PI);
                let z = escort_normalizer(q, r).unwrap();
                assert!((num - z).abs() < 1e-8, "q={q} r={r}: {num} vs {z}");
            }
        }
    }

    #[test]
    fn escort_normalizer_series_branch_is_continuous() {
        for q in [0.5, 2.0, 3.7] {
            let lo = escort_normalizer(q, ESCORT_SERIES_RADIUS * (1.0 - 1e-12)).unwrap();
            let hi = escort_normalizer(q, ESCORT_SERIES_RADIUS).unwrap();
            assert!((lo - hi).abs() < 1e-13, "q = {q}");
            let dlo =
                escort_normalizer_derivative(q, ESCORT_SERIES_RADIUS * (1.0 - 1e-12)).unwrap();
            let dhi = escort_normalizer_derivative(q, ESCORT_SERIES_RADIUS).unwrap();
            assert!((dlo - dhi).abs() < 1e-11, "q = {q}: {dlo} vs {dhi}");
        }
    }

    #[test]
    fn escort_density_examples() {
        let v = BlochVector::along_z(0.5).unwrap();
        assert_relative_eq!(
            escort_density(1.0, &v, [0.0, 0.0, 1.0]).unwrap(),
            husimi_q(&v, [0.0, 0.0, 1.0])
        );
        let mixed = BlochVector::along_z(0.0).unwrap();
        for q in [0.5, 2.0, 4.0] {
            assert_relative_eq!(
                escort_density(q, &mixed, [1.0, 0.0, 0.0]).unwrap(),
                0.5,
                epsilon = 1e-15
            );
        }
        assert_relative_eq!(
            escort_density(2.0, &v, [0.0, 0.0, 1.0]).unwrap(),
            27.0 / 26.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn wehrl_matches_quadrature_and_limits() {
        assert_relative_eq!(wehrl_entropy(0.0).unwrap(), LN_2, epsilon = 1e-15);
        assert_relative_eq!(wehrl_entropy(1.0).unwrap(), 0.5, epsilon = 1e-15);
        for k in 1..=9 {
            let r = k as f64 / 10.0;
            let num =
                husimi_shannon_entropy(&BlochVector::new(r, 0.3, 0.2).unwrap(), &spec()).unwrap();
            assert!((num - wehrl_entropy(r).unwrap()).abs() < 1e-7, "r = {r}");
        }
        // both branches agree at the switch
        let a = wehrl_entropy(0.1 - 1e-13).unwrap();
        let b = wehrl_entropy(0.1).unwrap();
        assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn wehrl_exceeds_von_neumann() {
        for k in 1..100 {
            let r = k as f64 / 100.0;
            assert!(wehrl_entropy(r).unwrap() > von_neumann_entropy(r).unwrap());
        }
    }

    #[test]
    fn von_neumann_examples() {
        assert_relative_eq!(von_neumann_entropy(0.0).unwrap(), LN_2, epsilon = 1e-15);
        assert_eq!(von_neumann_entropy(1.0).unwrap(), 0.0);
        let want = -0.75 * 0.75f64.ln() - 0.25 * 0.25f64.ln();
        assert_relative_eq!(von_neumann_entropy(0.5).unwrap(), want, epsilon = 1e-15);
        assert!((want - 0.562335).abs() < 1e-6);
    }

    #[test]
    fn gaussian_covariance_examples() {
        let c = gaussian_covariance(&BlochVector::along_z(0.0).unwrap());
        assert_eq!(c.matrix.entries[0][0].re, 0.5);
        assert_eq!(c.matrix.entries[0][1].norm(), 0.0);
        let c = gaussian_covariance(&BlochVector::along_z(0.5).unwrap());
        assert_eq!(
            (c.matrix.entries[0][0].re, c.matrix.entries[1][1].re),
            (0.75, 0.25)
        );
        assert!(!c.singular);
        assert!(gaussian_covariance(&BlochVector::along_z(1.0).unwrap()).singular);
    }

    #[test]
    fn score_has_zero_mean() {
        for fam in [
            PhaseSpaceFamily::Husimi,
            PhaseSpaceFamily::Escort { q: 2.5 },
        ] {
            let v = BlochVector::new(0.6, 0.9, 0.4).unwrap();
            for i in 0..3 {
                let m = integrate_sphere_about(
                    v.direction(),
                    |n| {
                        let q = fam.index().unwrap();
                        fam.score(&v, n).unwrap()[i] * escort_density(q, &v, n).unwrap()
                    },
                    &spec(),
                )
                .unwrap();
                assert!(m.abs() < 1e-10, "{fam:?} component {i}: {m}");
            }
        }
    }

    #[test]
    fn gaussian_density_integrates_along_a_ray() {
        // log-density at z = 0 is −2 log π − log det Σ
        let v = BlochVector::along_z(0.5).unwrap();
        let ld = PhaseSpaceFamily::Gaussian
            .log_density(&v, &SamplePoint::Complex([Complex64::new(0.0, 0.0); 2]))
            .unwrap();
        assert_relative_eq!(ld, -2.0 * PI.ln() - (0.75f64 * 0.25).ln(), epsilon = 1e-14);
        assert!(PhaseSpaceFamily::Gaussian
            .log_density(&v, &SamplePoint::Direction([0.0, 0.0, 1.0]))
            .is_err());
    }

    #[test]
    fn rotated_states_share_entropies() {
        let a = BlochVector::new(0.4, 0.1, 0.0).unwrap();
        let b = BlochVector::new(0.4, 2.5, 5.0).unwrap();
        let ea = husimi_shannon_entropy(&a, &spec()).unwrap();
        let eb = husimi_shannon_entropy(&b, &spec()).unwrap();
        assert!((ea - eb).abs() < 1e-10);
    }
}
