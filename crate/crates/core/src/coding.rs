//! Asymptotic redundancy of universal coding over the Bloch ball.
//!
//! Redundancies grow as `(3/2) log N + c`. Only the constant `c` is
//! computed here; `N` stays symbolic.

use std::f64::consts::{E, PI};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::{integrate_1d, QuadratureSpec};
use crate::priors::{radial_marginal, Prior};

/// Radial density `w(r)` of a rotationally symmetric prior, with respect to
/// Lebesgue measure on the ball.
#[derive(Clone)]
pub struct RadialProfile {
    pub source: String,
    w: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("source", &self.source)
            .finish()
    }
}

impl RadialProfile {
    pub fn new<F>(source: impl Into<String>, w: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        RadialProfile {
            source: source.into(),
            w: Arc::new(w),
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.w)(r)
    }

    /// `4π ∫₀¹ w(r) r² dr`, which is 1 for a proper profile.
    pub fn normalization(&self, spec: &QuadratureSpec) -> Result<f64> {
        Ok(4.0 * PI * integrate_1d(|r| self.eval(r) * r * r, 0.0, 1.0, &spec.singular())?)
    }
}

/// `w(r) = m(r)/(4πr²)` for the radial marginal `m` of `p`.
pub fn w_profile(p: &Prior, spec: &QuadratureSpec) -> Result<RadialProfile> {
    if !p.rotationally_symmetric {
        return Err(Error::Domain(format!(
            "prior `{}` is not rotationally symmetric",
            p.id
        )));
    }
    let m = radial_marginal(p, spec);
    m(0.5)?;
    Ok(RadialProfile::new(p.id.clone(), move |r: f64| {
        // w is even in r, so clamping away from the origin costs nothing.
        let r = r.max(1e-8);
        m(r).unwrap_or(f64::NAN) / (4.0 * PI * r * r)
    }))
}

/// Constant term of the classical minimax redundancy for a three-parameter
/// family of Fisher volume `volume`: `log V − (3/2) log(2πe)`.
pub fn classical_redundancy_constant(volume: f64) -> f64 {
    volume.ln() - 1.5 * (2.0 * PI * E).ln()
}

/// Offset added to [`minimax_bracket`] to obtain the redundancy constant.
pub fn minimax_offset() -> f64 {
    -0.5 - 1.5 * (2.0 * PI).ln()
}

/// `(1/(2r)) log((1 − r)/(1 + r))`, with its limit −1 at the origin.
fn half_log_ratio(r: f64) -> f64 {
    if r < 1e-4 {
        // −1 − r²/3 − r⁴/5
        let s = r * r;
        -1.0 - s / 3.0 - s * s / 5.0
    } else {
        (-2.0 * r.atanh()) / (2.0 * r)
    }
}

/// `−log(1 − r²) + (1/(2r)) log((1 − r)/(1 + r)) − log w(r)`.
pub fn minimax_bracket(w: &RadialProfile, r: f64) -> f64 {
    -(-r * r).ln_1p() + half_log_ratio(r) - w.eval(r).ln()
}

/// Constant term of the quantum maximin redundancy under profile `w`:
/// the offset plus the `w`-average of [`minimax_bracket`].
pub fn quantum_maximin_constant(w: &RadialProfile, spec: &QuadratureSpec) -> Result<f64> {
    let integrand = |r: f64| {
        let wr = w.eval(r);
        if wr == 0.0 {
            return 0.0;
        }
        minimax_bracket(w, r) * r * r * wr
    };
    let avg =
        integrate_1d(integrand, 0.0, 1.0, &spec.singular()).map_err(|e| Error::Divergent {
            what: format!("maximin integral for `{}` ({e})", w.source),
            locus: 1.0,
        })?;
    Ok(minimax_offset() + 4.0 * PI * avg)
}

/// Spread `max − min` of the bracket over `grid`; zero for an equalizer.
pub fn bracket_spread(w: &RadialProfile, grid: &[f64]) -> f64 {
    let vals = grid.iter().map(|&r| minimax_bracket(w, r));
    let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    hi - lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::linspace;
    use crate::priors::prior_by_id;
    use approx::assert_abs_diff_eq;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::ball()
    }

    #[test]
    fn classical_constant() {
        assert_abs_diff_eq!(
            classical_redundancy_constant(1.39350989367660),
            -3.92499,
            epsilon = 5e-6
        );
        assert_abs_diff_eq!(
            classical_redundancy_constant((2.0 * PI * E).powf(1.5)),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn uniform_profile() {
        let w = w_profile(&prior_by_id("hs", &spec()).unwrap(), &spec()).unwrap();
        for r in [0.0, 0.3, 0.9] {
            assert_abs_diff_eq!(w.eval(r), 3.0 / (4.0 * PI), epsilon = 1e-12);
        }
        assert!(bracket_spread(&w, &linspace(0.01, 0.99, 99)) > 0.1);
    }

    #[test]
    fn gks_profile_closed_form_and_equalizer() {
        let w = w_profile(&prior_by_id("gks", &spec()).unwrap(), &spec()).unwrap();
        for r in [0.1, 0.5, 0.9] {
            let closed =
                0.0832258 * E / (1.0 - r * r) * ((1.0 - r) / (1.0 + r)).powf(1.0 / (2.0 * r));
            assert!((w.eval(r) / closed - 1.0).abs() < 1e-5);
        }
        let grid = linspace(0.01, 0.99, 99);
        assert!(bracket_spread(&w, &grid) < 1e-6);
        let maximin = quantum_maximin_constant(&w, &spec()).unwrap();
        let minimax = minimax_bracket(&w, 0.5) + minimax_offset();
        assert_abs_diff_eq!(maximin, minimax, epsilon = 1e-5);
        assert_abs_diff_eq!(maximin, -1.77062, epsilon = 1e-5);
    }

    #[test]
    fn catalog_constants() {
        for (id, want) in [
            ("hyb-hus", -1.77101),
            ("bures", -1.77421),
            ("hus", -1.88279),
            ("mc", -2.15667),
        ] {
            let w = w_profile(&prior_by_id(id, &spec()).unwrap(), &spec()).unwrap();
            assert_abs_diff_eq!(w.normalization(&spec()).unwrap(), 1.0, epsilon = 1e-7);
            let c = quantum_maximin_constant(&w, &spec()).unwrap();
            assert_abs_diff_eq!(c, want, epsilon = 1e-5);
            assert!(c <= -1.77062 + 1e-4);
        }
    }

    #[test]
    fn asymmetric_prior_rejected() {
        let p = crate::priors::wigner_prior(&spec()).unwrap();
        assert!(w_profile(&p, &spec()).is_err());
    }
}
