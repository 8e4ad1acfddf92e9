//! Fisher information matrices of the phase-space families, by quadrature
//! over the sample space (sphere families) or by the covariance trace
//! identity (Gaussian family).

use nalgebra::{Matrix2, Matrix3, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{integrate_1d, try_integrate_sphere_about, QuadratureSpec};
use crate::qstate::{
    escort_normalizer, escort_normalizer_derivative, gaussian_covariance, BlochVector,
    PhaseSpaceFamily,
};

/// States this close to the boundary are rejected: the density acquires zeros.
pub const BOUNDARY_MARGIN: f64 = 1e-6;

/// Tolerance of the score-identity health check.
const SCORE_TOL: f64 = 1e-8;

/// Chart in which a [`FisherMatrix`] is expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinates {
    /// `(r, θ₁, θ₂)`
    Spherical,
    /// `(x, y, z)`
    Cartesian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherMatrix {
    pub entries: Matrix3<f64>,
    pub coordinates: Coordinates,
    pub at: BlochVector,
}

/// `∂(x, y, z)/∂(r, θ₁, θ₂)` at `v`.
fn jacobian(v: &BlochVector) -> Matrix3<f64> {
    let (s1, c1) = v.theta1.sin_cos();
    let (s2, c2) = v.theta2.sin_cos();
    let r = v.r;
    Matrix3::new(
        s1 * c2,
        r * c1 * c2,
        -r * s1 * s2,
        s1 * s2,
        r * c1 * s2,
        r * s1 * c2,
        c1,
        -r * s1,
        0.0,
    )
}

impl FisherMatrix {
    pub fn to_spherical(&self) -> FisherMatrix {
        match self.coordinates {
            Coordinates::Spherical => *self,
            Coordinates::Cartesian => {
                let j = jacobian(&self.at);
                FisherMatrix {
                    entries: j.transpose() * self.entries * j,
                    coordinates: Coordinates::Spherical,
                    at: self.at,
                }
            }
        }
    }

    /// Fails where the spherical chart degenerates (`r = 0` or `θ₁ ∈ {0, π}`).
    pub fn to_cartesian(&self) -> Result<FisherMatrix> {
        match self.coordinates {
            Coordinates::Cartesian => Ok(*self),
            Coordinates::Spherical => {
                let inv = jacobian(&self.at)
                    .try_inverse()
                    .filter(|m| m.iter().all(|x| x.is_finite()))
                    .ok_or_else(|| {
                        Error::Domain("spherical chart is degenerate at this point".into())
                    })?;
                Ok(FisherMatrix {
                    entries: inv.transpose() * self.entries * inv,
                    coordinates: Coordinates::Cartesian,
                    at: self.at,
                })
            }
        }
    }

    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.entries).eigenvalues.min()
    }

    pub fn eigenvalues_sorted(&self) -> [f64; 3] {
        let e = SymmetricEigen::new(self.entries).eigenvalues;
        let mut v = [e[0], e[1], e[2]];
        v.sort_by(f64::total_cmp);
        v
    }

    /// `(A, B)` read off a cartesian matrix: radial and mean tangential eigenvalue.
    pub fn radial_tangential(&self) -> Result<(f64, f64)> {
        let c = self.to_cartesian()?;
        if self.at.r == 0.0 {
            let e = c.eigenvalues_sorted();
            let mean = (e[0] + e[1] + e[2]) / 3.0;
            return Ok((mean, mean));
        }
        let d = self.at.direction();
        let u = nalgebra::Vector3::new(d[0], d[1], d[2]);
        let a = (u.transpose() * c.entries * u)[0];
        Ok((a, 0.5 * (c.entries.trace() - a)))
    }
}

/// Fisher information matrix at `state`, in cartesian coordinates.
///
/// Sphere families: `I_ij = ∫ (∂ᵢ log p)(∂ⱼ log p) p dΩ/2π` with analytic
/// scores; the score expectation is checked to vanish first. Gaussian family:
/// `I_ij = tr(Σ⁻¹ ∂ᵢΣ Σ⁻¹ ∂ⱼΣ)` with `∂ᵢΣ = σᵢ/2`.
pub fn fisher_matrix(
    family: PhaseSpaceFamily,
    state: &BlochVector,
    spec: &QuadratureSpec,
) -> Result<FisherMatrix> {
    spec.validate()?;
    if state.r >= 1.0 - BOUNDARY_MARGIN {
        return Err(Error::Domain(format!(
            "state radius {} too close to the boundary",
            state.r
        )));
    }
    let entries = match family {
        PhaseSpaceFamily::Gaussian => gaussian_trace_identity(state),
        _ => sphere_fisher(family, state, spec)?,
    };
    Ok(FisherMatrix {
        entries,
        coordinates: Coordinates::Cartesian,
        at: *state,
    })
}

/// `E[∂ᵢ log p]` for a sphere family, which vanishes for a proper score.
pub fn score_mean(
    family: PhaseSpaceFamily,
    state: &BlochVector,
    spec: &QuadratureSpec,
) -> Result<[f64; 3]> {
    let q = family
        .index()
        .ok_or_else(|| Error::Domain("score mean needs a sphere family".into()))?;
    let z = escort_normalizer(q, state.r)?;
    let p = state.cartesian();
    let mut out = [0.0; 3];
    for (i, o) in out.iter_mut().enumerate() {
        *o = try_integrate_sphere_about(
            state.direction(),
            |n| {
                let qv = 0.5 * (1.0 + p[0] * n[0] + p[1] * n[1] + p[2] * n[2]);
                Ok(family.score(state, n)?[i] * qv.powf(q) / z)
            },
            spec,
        )? / (2.0 * std::f64::consts::PI);
    }
    Ok(out)
}

fn sphere_fisher(
    family: PhaseSpaceFamily,
    state: &BlochVector,
    spec: &QuadratureSpec,
) -> Result<Matrix3<f64>> {
    let q = family.index().expect("sphere family");
    let z = escort_normalizer(q, state.r)?;
    let axis = state.direction();
    let p = state.cartesian();
    let density = |n: [f64; 3]| {
        let qv = 0.5 * (1.0 + p[0] * n[0] + p[1] * n[1] + p[2] * n[2]);
        qv.powf(q) / z
    };
    let over = 1.0 / (2.0 * std::f64::consts::PI);
    for (i, mean) in score_mean(family, state, spec)?.iter().enumerate() {
        if mean.abs() > SCORE_TOL {
            return Err(Error::Internal(format!(
                "score identity violated: E[∂{i} log p] = {mean:e}"
            )));
        }
    }
    let mut m = Matrix3::zeros();
    for i in 0..3 {
        for j in i..3 {
            let v = try_integrate_sphere_about(
                axis,
                |n| {
                    let s = family.score(state, n)?;
                    Ok(s[i] * s[j] * density(n))
                },
                spec,
            )? * over;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(m)
}

fn pauli() -> [Matrix2<Complex64>; 3] {
    let (o, l, i) = (
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
    );
    [
        Matrix2::new(o, l, l, o),
        Matrix2::new(o, -i, i, o),
        Matrix2::new(l, o, o, -l),
    ]
}

fn gaussian_trace_identity(state: &BlochVector) -> Matrix3<f64> {
    let e = gaussian_covariance(state).matrix.entries;
    let sigma = Matrix2::new(e[0][0], e[0][1], e[1][0], e[1][1]);
    let inv = sigma
        .try_inverse()
        .expect("interior covariance is invertible");
    let d = pauli().map(|s| inv * s * Complex64::new(0.5, 0.0));
    Matrix3::from_fn(|i, j| (d[i] * d[j]).trace().re)
}

/// Below this radius the radial information is integrated numerically; the
/// moment expansion cancels like `1/r²` there.
const ESCORT_MOMENT_RADIUS: f64 = 0.25;

/// Radial Fisher information of the escort family,
/// `∫_{-1}^{1} (q u/(1 + r u) − Z′/Z)² ((1 + r u)/2)^q / Z du`.
///
/// Away from the origin the integrand is expanded in powers of
/// `w = 1 + r u` and integrated exactly. This keeps the weak endpoint
/// singularity `w^{q−2}` of `1 < q < 2` out of the quadrature and allows
/// `r = 1`.
pub fn escort_radial_information(q: f64, r: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("radius {r} outside [0, 1]")));
    }
    let z = escort_normalizer(q, r)?;
    let dlogz = escort_normalizer_derivative(q, r)? / z;
    if r >= ESCORT_MOMENT_RADIUS {
        let m = |a: f64| power_moment(a, r);
        let (m0, m1, m2) = (m(q), m(q - 1.0), m(q - 2.0));
        let sum = q * q / (r * r) * (m0 - 2.0 * m1 + m2) - 2.0 * dlogz * q / r * (m0 - m1)
            + dlogz * dlogz * m0;
        return Ok(sum / (r * z * 2f64.powf(q)));
    }
    integrate_1d(
        |u| {
            let w = 1.0 + r * u;
            (q * u / w - dlogz).powi(2) * (0.5 * w).powf(q) / z
        },
        -1.0,
        1.0,
        &spec.plain(),
    )
}

/// `∫_{1−r}^{1+r} w^a dw`, written to stay accurate as `a → −1`.
fn power_moment(a: f64, r: f64) -> f64 {
    let b = a + 1.0;
    let (lp, lm) = ((1.0 + r).ln(), (1.0 - r).ln());
    if b == 0.0 {
        lp - lm
    } else {
        ((b * lp).exp_m1() - (b * lm).exp_m1()) / b
    }
}

/// One grid point of [`extract_profile`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub r: f64,
    /// `(1 − r)/(1 + r)`
    pub t: f64,
    pub a: f64,
    pub b: f64,
    /// Implied generator `((1 + r) B)⁻¹`.
    pub f: f64,
}

#[derive(Debug, Clone, Default)]
pub struct Profile {
    pub rows: Vec<ProfileRow>,
    /// Grid points where the matrix build failed, with the cause.
    pub failures: Vec<(f64, Error)>,
}

/// Tabulates `A(r)`, `B(r)` and the implied `f(t)` of a family's Fisher
/// metric. States are placed on the `x` axis.
pub fn extract_profile(family: PhaseSpaceFamily, r_grid: &[f64], spec: &QuadratureSpec) -> Profile {
    let mut out = Profile::default();
    for &r in r_grid {
        let row = (|| {
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::Domain(format!("profile radius {r} outside (0, 1)")));
            }
            let state = BlochVector::new(r, std::f64::consts::FRAC_PI_2, 0.0)?;
            let (a, b) = fisher_matrix(family, &state, spec)?.radial_tangential()?;
            Ok(ProfileRow {
                r,
                t: (1.0 - r) / (1.0 + r),
                a,
                b,
                f: 1.0 / ((1.0 + r) * b),
            })
        })();
        match row {
            Ok(row) => out.rows.push(row),
            Err(e) => out.failures.push((r, e)),
        }
    }
    out
}
