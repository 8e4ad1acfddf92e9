//! Monotone functions, rotationally symmetric metrics and the transforms
//! that move between them.
//!
//! A monotone metric on the Bloch ball is fixed by a function `f` through
//!
//! ```text
//! ds² = dr²/(1 − r²) + [(1 + r) f((1 − r)/(1 + r))]⁻¹ dn²,
//! dn² = r² dθ₁² + r² sin²θ₁ dθ₂².
//! ```
//!
//! Every metric here is stored as the pair `(A(r), B(r))` of
//! `ds² = A dr² + B dn²`.

use std::f64::consts::E;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, Matrix3, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fisher::escort_radial_information;
use crate::numerics::QuadratureSpec;
use crate::qstate::log_eigen_ratio;

/// Below this radius the Fisher–Husimi components are summed as series.
const HUSIMI_SERIES_RADIUS: f64 = 0.3;

/// Monotone-function identifiers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MonotoneId {
    /// `(1 + t)/2`, generating the minimal (Bures) metric.
    Bures,
    /// Morozova–Chentsov: `2(t − 1)² / ((1 + t) log² t)`.
    Mc,
    /// Grosse–Krattenthaler–Slater: `t^{t/(t−1)} / e`.
    Gks,
    /// Wigner–Yanase: `(√t + 1)²/4`.
    Wy,
    /// Maximal (Yuen–Lax): `2t/(1 + t)`.
    YuenLax,
    /// `t/(1 + t)`; tangential part of the Gaussian Fisher metric.
    Gauss,
    /// `(1 + t)²/√t`; not monotone.
    Hs,
    /// Tangential generator of the Husimi Fisher metric.
    Husimi,
    /// Tangential generator of the escort-Husimi Fisher metric of index `q`.
    Escort(f64),
    /// Explicit `q = 1/2` form `6 + 6√t + 2t − 4/(1 + t)`.
    HalfEscort,
    /// `f_Hus(t) − t − 1`.
    ConformalHusimi,
    /// Equates the Husimi Fisher volume element with a monotone one.
    Counterfactual,
}

/// A positive scalar function generating a rotationally symmetric metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotoneFunction {
    pub id: MonotoneId,
}

impl fmt::Display for MonotoneFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.id {
            MonotoneId::Bures => write!(f, "bures"),
            MonotoneId::Mc => write!(f, "mc"),
            MonotoneId::Gks => write!(f, "gks"),
            MonotoneId::Wy => write!(f, "wy"),
            MonotoneId::YuenLax => write!(f, "yuen-lax"),
            MonotoneId::Gauss => write!(f, "gauss"),
            MonotoneId::Hs => write!(f, "hs"),
            MonotoneId::Husimi => write!(f, "hus"),
            MonotoneId::Escort(q) => write!(f, "escort:{q}"),
            MonotoneId::HalfEscort => write!(f, "half-escort"),
            MonotoneId::ConformalHusimi => write!(f, "conformal-hus"),
            MonotoneId::Counterfactual => write!(f, "counterfactual"),
        }
    }
}

impl MonotoneFunction {
    pub const BURES: Self = MonotoneFunction {
        id: MonotoneId::Bures,
    };
    pub const MC: Self = MonotoneFunction { id: MonotoneId::Mc };
    pub const GKS: Self = MonotoneFunction {
        id: MonotoneId::Gks,
    };
    pub const WY: Self = MonotoneFunction { id: MonotoneId::Wy };
    pub const YUEN_LAX: Self = MonotoneFunction {
        id: MonotoneId::YuenLax,
    };
    pub const GAUSS: Self = MonotoneFunction {
        id: MonotoneId::Gauss,
    };
    pub const HS: Self = MonotoneFunction { id: MonotoneId::Hs };
    pub const HUSIMI: Self = MonotoneFunction {
        id: MonotoneId::Husimi,
    };
    pub const HALF_ESCORT: Self = MonotoneFunction {
        id: MonotoneId::HalfEscort,
    };
    pub const CONFORMAL_HUSIMI: Self = MonotoneFunction {
        id: MonotoneId::ConformalHusimi,
    };
    pub const COUNTERFACTUAL: Self = MonotoneFunction {
        id: MonotoneId::Counterfactual,
    };

    pub fn escort(q: f64) -> Result<Self> {
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::Domain(format!(
                "entropic index must be positive, got {q}"
            )));
        }
        Ok(MonotoneFunction {
            id: MonotoneId::Escort(q),
        })
    }

    /// The fixed catalog (escort functions excluded).
    pub fn catalog() -> Vec<MonotoneFunction> {
        vec![
            Self::BURES,
            Self::MC,
            Self::GKS,
            Self::WY,
            Self::YUEN_LAX,
            Self::GAUSS,
            Self::HS,
            Self::HUSIMI,
            Self::HALF_ESCORT,
            Self::CONFORMAL_HUSIMI,
            Self::COUNTERFACTUAL,
        ]
    }

    /// Parses `bures`, `mc`, `gks`, `wy`, `yuen-lax`, `gauss`, `hs`, `hus`,
    /// `escort:<q>`, `half-escort`, `conformal-hus`, `counterfactual`.
    pub fn parse(id: &str) -> Result<Self> {
        let f = match id {
            "bures" => Self::BURES,
            "mc" => Self::MC,
            "gks" => Self::GKS,
            "wy" => Self::WY,
            "yuen-lax" | "yl" => Self::YUEN_LAX,
            "gauss" => Self::GAUSS,
            "hs" => Self::HS,
            "hus" | "husimi" => Self::HUSIMI,
            "half-escort" => Self::HALF_ESCORT,
            "conformal-hus" => Self::CONFORMAL_HUSIMI,
            "counterfactual" => Self::COUNTERFACTUAL,
            other => match other.strip_prefix("escort:") {
                Some(q) => Self::escort(q.parse().map_err(|_| Error::UnknownId(id.to_string()))?)?,
                None => return Err(Error::UnknownId(id.to_string())),
            },
        };
        Ok(f)
    }

    /// `f(t)` for `t ≥ 0`; `t = 0` returns the limit (possibly infinite).
    pub fn eval(&self, t: f64) -> f64 {
        if t == 0.0 {
            return self.limit_at_0();
        }
        match self.id {
            MonotoneId::Bures => 0.5 * (1.0 + t),
            MonotoneId::Mc => {
                let s = t.ln();
                2.0 * expm1_over(s).powi(2) / (1.0 + t)
            }
            MonotoneId::Gks => {
                let s = t.ln();
                let expo = if s == 0.0 { 1.0 } else { -s / (-s).exp_m1() };
                (expo - 1.0).exp()
            }
            MonotoneId::Wy => 0.25 * (t.sqrt() + 1.0).powi(2),
            MonotoneId::YuenLax => 2.0 * t / (1.0 + t),
            MonotoneId::Gauss => t / (1.0 + t),
            MonotoneId::Hs => (1.0 + t).powi(2) / t.sqrt(),
            MonotoneId::Husimi => escort_f(1.0, t),
            MonotoneId::Escort(q) => escort_f(q, t),
            MonotoneId::HalfEscort => 6.0 + 6.0 * t.sqrt() + 2.0 * t - 4.0 / (1.0 + t),
            MonotoneId::ConformalHusimi => escort_f(1.0, t) - t - 1.0,
            MonotoneId::Counterfactual => counterfactual_f(t).unwrap_or(f64::NAN),
        }
    }

    pub fn value_at_1(&self) -> f64 {
        match self.id {
            MonotoneId::Bures
            | MonotoneId::Mc
            | MonotoneId::Gks
            | MonotoneId::Wy
            | MonotoneId::YuenLax
            | MonotoneId::ConformalHusimi => 1.0,
            MonotoneId::Gauss => 0.5,
            MonotoneId::Hs => 4.0,
            MonotoneId::Husimi => 3.0,
            MonotoneId::Escort(q) => 3.0 / (q * q),
            MonotoneId::HalfEscort => 12.0,
            MonotoneId::Counterfactual => 3.0 * 3f64.sqrt(),
        }
    }

    pub fn limit_at_0(&self) -> f64 {
        match self.id {
            MonotoneId::Bures => 0.5,
            MonotoneId::Mc
            | MonotoneId::YuenLax
            | MonotoneId::Gauss
            | MonotoneId::ConformalHusimi => 0.0,
            MonotoneId::Gks => 1.0 / E,
            MonotoneId::Wy => 0.25,
            MonotoneId::Hs | MonotoneId::Counterfactual => f64::INFINITY,
            MonotoneId::Husimi => 1.0,
            MonotoneId::Escort(q) => 1.0 / q,
            MonotoneId::HalfEscort => 2.0,
        }
    }

    /// Whether `f(t) = t f(1/t)` holds for this function.
    pub fn self_adjoint(&self) -> bool {
        true
    }

    /// Whether `f` is expected to be nondecreasing on `(0, ∞)`.
    pub fn claims_monotone_increasing(&self) -> bool {
        !matches!(self.id, MonotoneId::Hs | MonotoneId::Counterfactual)
    }
}

/// `expm1(s)/s`, equal to 1 at `s = 0`.
fn expm1_over(s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else {
        s.exp_m1() / s
    }
}

/// Escort tangential generator in closed (binomial) form, any real `q > 0`.
///
/// Evaluated in `s = log t`: the numerator is `(e^s − 1)²(e^{(q+1)s} − 1)`
/// and the denominator, divided by `(q − 1)`, is
/// `D(s) = e^{(q+1)s} − 1 − (1 + q) e^s (e^{(q−1)s} − 1)/(q − 1)`, which
/// vanishes like `s³` and is summed as a power series near `s = 0`.
/// `q = 1` gives the Husimi generator `(t − 1)³/(t² − 2t log t − 1)`.
pub fn escort_f(q: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 1.0 / q;
    }
    if !(t > 0.0) || !(q > 0.0) {
        return f64::NAN;
    }
    let s = t.ln();
    let numerator = expm1_over(s).powi(2) * (q + 1.0) * expm1_over((q + 1.0) * s);
    let denominator = escort_denominator_over_s3(q, s);
    numerator / (q * (1.0 + t) * denominator)
}

/// `D(s)/s³` (see [`escort_f`]).
fn escort_denominator_over_s3(q: f64, s: f64) -> f64 {
    if s.abs() * (q + 1.0).max(1.0) < 0.5 {
        // D(s) = Σ_{n≥3} d_n sⁿ/n!, d_n = (q+1)ⁿ − (1+q)·[n]_q
        let mut sum = 0.0;
        let mut qpow = 1.0; // q^{n-1}
        let mut bracket = 0.0; // [n]_q = Σ_{k<n} q^k
        let mut fact = 1.0;
        let mut spow = 1.0; // s^{n-3}
        let mut opow = 1.0; // (q+1)^n
        for n in 1..60 {
            bracket += qpow;
            qpow *= q;
            fact *= n as f64;
            opow *= q + 1.0;
            if n < 3 {
                continue;
            }
            let d = opow - (1.0 + q) * bracket;
            let term = d * spow / fact;
            sum += term;
            if n > 6 && term.abs() < 1e-18 * sum.abs() {
                break;
            }
            spow *= s;
        }
        return sum;
    }
    let e = if q == 1.0 {
        s
    } else {
        ((q - 1.0) * s).exp_m1() / (q - 1.0)
    };
    let d = ((q + 1.0) * s).exp_m1() - (1.0 + q) * s.exp() * e;
    d / (s * s * s)
}

/// Summation form of the escort generator for integer `q ≥ 2`:
/// `(q − 1) Σ_{i=0}^{q} tⁱ / (q (t + 1) Σ_{i=1}^{q−1} i (q − i) t^{i−1})`.
pub fn escort_f_sum(q: u32, t: f64) -> Result<f64> {
    if q < 2 {
        return Err(Error::Domain(format!(
            "summation form needs q >= 2, got {q}"
        )));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("t must be non-negative, got {t}")));
    }
    let num: f64 = (0..=q).rev().fold(0.0, |acc, _| acc * t + 1.0);
    let den: f64 = (1..q)
        .rev()
        .fold(0.0, |acc, i| acc * t + (i * (q - i)) as f64);
    Ok((q - 1) as f64 * num / (q as f64 * (t + 1.0) * den))
}

/// Counterfactual generator: the `f` for which the monotone volume element
/// equals that of the Husimi Fisher metric,
/// `√A_mono · B_mono(f) = √A_Hus · B_Hus`. In closed form
///
/// ```text
/// f(t) = √2 |1 − t|^{9/2} / ( 2 √t |t² − 1 − 2t log t| √|2 − 2t + (1 + t) log t| )
/// ```
///
/// which is self-adjoint, equals `3√3` at `t = 1` and is not monotone.
pub fn counterfactual_f(t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!(
            "counterfactual f needs t > 0, got {t}"
        )));
    }
    let s = t.ln();
    if s.abs() < 0.05 {
        if t <= 1.0 {
            return Ok(counterfactual_from_radius((1.0 - t) / (1.0 + t)));
        }
        return Ok(t * counterfactual_from_radius((t - 1.0) / (t + 1.0)));
    }
    let (d1, d2) = counterfactual_logs(t, s);
    Ok(2f64.sqrt() * (t - 1.0).abs().powf(4.5) / (2.0 * t.sqrt() * d1 * d2.sqrt()))
}

/// The alternative closed form
/// `√2 (t − 1)^{9/2} / (t (1 + t) √[(t² − 1 − 2t log t)² (2 − 2t + (1 + t) log t)])`,
/// taken on its real branch. It is monotonically decreasing on `(0, 1)` and
/// on `(1, ∞)` but differs from [`counterfactual_f`] by the factor
/// `2/(√t (1 + t))`, so it does not reproduce the Husimi volume element.
pub fn counterfactual_f_printed(t: f64) -> Result<f64> {
    let f = counterfactual_f(t)?;
    Ok(f * 2.0 / (t.sqrt() * (1.0 + t)))
}

fn counterfactual_logs(t: f64, s: f64) -> (f64, f64) {
    (
        (t * t - 1.0 - 2.0 * t * s).abs(),
        (2.0 - 2.0 * t + (1.0 + t) * s).abs(),
    )
}

/// `1 / ((1 + r) √(1 − r²) √A_Hus B_Hus)`, the counterfactual generator at
/// `t = (1 − r)/(1 + r)`.
fn counterfactual_from_radius(r: f64) -> f64 {
    let (a, b) = husimi_components(r);
    1.0 / ((1.0 + r) * (1.0 - r * r).sqrt() * a.sqrt() * b)
}

/// `(A_Hus(r), B_Hus(r))` of the Husimi Fisher metric.
pub fn husimi_components(r: f64) -> (f64, f64) {
    let r = r.abs();
    if r < HUSIMI_SERIES_RADIUS {
        // A = Σ r^{2k}/(2k+3),  B = Σ r^{2k}/((2k+1)(2k+3))
        let r2 = r * r;
        let (mut a, mut b, mut pow) = (0.0, 0.0, 1.0);
        for k in 0..80 {
            let kf = k as f64;
            a += pow / (2.0 * kf + 3.0);
            b += pow / ((2.0 * kf + 1.0) * (2.0 * kf + 3.0));
            pow *= r2;
            if pow < 1e-19 {
                break;
            }
        }
        return (a, b);
    }
    if r >= 1.0 {
        return (f64::INFINITY, 0.5);
    }
    let w = log_eigen_ratio(r);
    let r3 = r * r * r;
    (
        (-2.0 * r - w) / (2.0 * r3),
        (2.0 * r + (1.0 - r * r) * w) / (4.0 * r3),
    )
}

type Component = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A rotationally symmetric metric `ds² = A(r) dr² + B(r) dn²`.
#[derive(Clone)]
pub struct RadialMetric {
    radial: Component,
    tangential: Component,
    /// Which construction produced the metric.
    pub provenance: String,
    /// Whether the total volume is finite.
    pub normalizable: bool,
    /// Set when the tangential factor blows up at `r = 1`.
    pub boundary_divergent: bool,
}

impl fmt::Debug for RadialMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialMetric")
            .field("provenance", &self.provenance)
            .field("normalizable", &self.normalizable)
            .field("boundary_divergent", &self.boundary_divergent)
            .finish()
    }
}

impl RadialMetric {
    pub fn new<A, B>(provenance: impl Into<String>, radial: A, tangential: B) -> Self
    where
        A: Fn(f64) -> f64 + Send + Sync + 'static,
        B: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        RadialMetric {
            radial: Arc::new(radial),
            tangential: Arc::new(tangential),
            provenance: provenance.into(),
            normalizable: true,
            boundary_divergent: false,
        }
    }

    fn with_flags(mut self, normalizable: bool, boundary_divergent: bool) -> Self {
        self.normalizable = normalizable;
        self.boundary_divergent = boundary_divergent;
        self
    }

    /// Euclidean metric of the unit ball, `A = B = 1`.
    pub fn euclidean() -> Self {
        RadialMetric::new("euclidean", |_| 1.0, |_| 1.0)
    }

    pub fn a(&self, r: f64) -> f64 {
        (self.radial)(r)
    }

    pub fn b(&self, r: f64) -> f64 {
        (self.tangential)(r)
    }

    /// `√A · B · r²`: volume density with respect to `dr dθ₁ dθ₂`, per unit `sin θ₁`.
    pub fn volume_density(&self, r: f64) -> f64 {
        self.a(r).sqrt() * self.b(r) * r * r
    }

    /// Implied generator `f(t) = ((1 + r) B(r))⁻¹` at `t = (1 − r)/(1 + r)`.
    pub fn implied_f(&self, r: f64) -> (f64, f64) {
        ((1.0 - r) / (1.0 + r), 1.0 / ((1.0 + r) * self.b(r)))
    }

    /// Metric tensor in the `(r, θ₁, θ₂)` chart.
    pub fn tensor_spherical(&self, r: f64, theta1: f64) -> Matrix3<f64> {
        let bt = self.b(r) * r * r;
        Matrix3::from_diagonal(&nalgebra::Vector3::new(
            self.a(r),
            bt,
            bt * theta1.sin().powi(2),
        ))
    }

    /// Metric tensor in the cartesian chart at `p`:
    /// `g = A r̂r̂ᵀ + B (I − r̂r̂ᵀ)`.
    pub fn tensor_cartesian(&self, p: [f64; 3]) -> Matrix3<f64> {
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        let (a, b) = (self.a(r), self.b(r));
        let mut g = Matrix3::identity() * b;
        if r > 0.0 {
            for i in 0..3 {
                for j in 0..3 {
                    g[(i, j)] += (a - b) * p[i] * p[j] / (r * r);
                }
            }
        }
        g
    }
}

/// Monotone metric generated by `f`.
pub fn metric_from_f(f: MonotoneFunction) -> RadialMetric {
    let boundary_divergent = f.limit_at_0() == 0.0;
    // Volume density ~ (1 − r)^{-1/2} B(r): normalizable unless B blows up.
    let normalizable =
        !boundary_divergent && f.limit_at_0().is_finite() || matches!(f.id, MonotoneId::Mc);
    RadialMetric::new(
        format!("monotone({f})"),
        |r| 1.0 / (1.0 - r * r),
        move |r| {
            let t = (1.0 - r) / (1.0 + r);
            1.0 / ((1.0 + r) * f.eval(t))
        },
    )
    .with_flags(normalizable, boundary_divergent)
}

/// Fisher information metric of the Husimi family.
pub fn fisher_husimi_metric() -> RadialMetric {
    RadialMetric::new(
        "fisher-hus",
        |r| husimi_components(r).0,
        |r| husimi_components(r).1,
    )
}

/// `u(q)`: square of `Σ_{i=0}^{q} (q − 2i + 1)_{2i+1} r^{2i} / (2 (2i + 1)!)`,
/// where `(x)_n` is the rising factorial.
pub fn escort_radial_denominator(q: u32, r: f64) -> Result<f64> {
    if q < 1 {
        return Err(Error::Domain("u(q) needs q >= 1".into()));
    }
    Ok(escort_radial_denominator_root(q, r).powi(2))
}

fn escort_radial_denominator_root(q: u32, r: f64) -> f64 {
    let mut sum = 0.0;
    let mut fact = 1.0; // (2i+1)!
    for i in 0..=q {
        if i > 0 {
            fact *= (2 * i) as f64 * (2 * i + 1) as f64;
        }
        let start = q as f64 - 2.0 * i as f64 + 1.0;
        let rising: f64 = (0..=2 * i).map(|k| start + k as f64).product();
        sum += rising * r.powi(2 * i as i32) / (2.0 * fact);
    }
    sum
}

/// Closed-form radial component of the escort Fisher metric, when known.
pub fn escort_radial_closed(q: f64, r: f64) -> Option<f64> {
    let r2 = r * r;
    let r4 = r2 * r2;
    match q {
        1.0 => Some(husimi_components(r).0),
        2.0 => Some(12.0 / (3.0 + r2).powi(2)),
        3.0 => Some((3.0 - r2) / (1.0 + r2).powi(2)),
        4.0 => Some(80.0 * (5.0 - 2.0 * r2 + r4) / (3.0 * (5.0 + 10.0 * r2 + r4).powi(2))),
        5.0 => Some(3.0 * (5.0 - r2) * (5.0 + 3.0 * r4) / (3.0 + 10.0 * r2 + 3.0 * r4).powi(2)),
        8.0 => {
            let poly = 21.0 + 42.0 * r2 + 135.0 * r4 + 28.0 * r4 * r2 + 35.0 * r4 * r4
                - 6.0 * r4 * r4 * r2
                + r4 * r4 * r4;
            Some(144.0 * poly / (7.0 * escort_radial_denominator(8, r).ok()?))
        }
        _ => None,
    }
}

/// Fisher information metric of the escort-Husimi family of index `q`.
///
/// The tangential part always comes from [`escort_f`]. The radial part uses
/// the closed forms for `q ∈ {1, 2, 3, 4, 5, 8}` and otherwise the radial
/// Fisher information by quadrature.
pub fn escort_fisher_metric(q: f64) -> Result<RadialMetric> {
    let f = MonotoneFunction::escort(q)?;
    if q == 1.0 {
        return Ok(fisher_husimi_metric());
    }
    let tangential = move |r: f64| {
        let t = (1.0 - r) / (1.0 + r);
        1.0 / ((1.0 + r) * f.eval(t))
    };
    if escort_radial_closed(q, 0.5).is_some() {
        return Ok(RadialMetric::new(
            format!("fisher-escort:{q}"),
            move |r| escort_radial_closed(q, r).expect("closed form exists"),
            tangential,
        ));
    }
    let spec = QuadratureSpec::default().with_tol(1e-14, 1e-12);
    Ok(RadialMetric::new(
        format!("fisher-escort:{q}"),
        move |r| escort_radial_information(q, r, &spec).unwrap_or(f64::NAN),
        tangential,
    ))
}

/// Fisher metric of the complex Gaussian family with covariance `ρ`.
pub fn gaussian_fisher_metric() -> RadialMetric {
    RadialMetric::new(
        "fisher-gauss",
        |r| 2.0 * (1.0 + r * r) / (1.0 - r * r).powi(2),
        |r| 2.0 / (1.0 - r * r),
    )
    .with_flags(false, true)
}

/// Morozova–Chentsov function `c(p, q) = 1 / (q f(p/q))`.
pub fn morozova_chentsov(f: MonotoneFunction, p: f64, q: f64) -> Result<f64> {
    if !(p > 0.0 && q > 0.0) {
        return Err(Error::Domain(format!(
            "Morozova–Chentsov needs p, q > 0, got ({p}, {q})"
        )));
    }
    if p == q {
        return Ok(1.0 / (q * f.value_at_1()));
    }
    Ok(1.0 / (q * f.eval(p / q)))
}

/// Replaces the radial component by the monotone one, `1/(1 − r²)`.
pub fn hybridize(m: &RadialMetric) -> RadialMetric {
    let tangential = m.tangential.clone();
    RadialMetric::new(
        format!("hyb({})", m.provenance),
        |r| 1.0 / (1.0 - r * r),
        move |r| tangential(r),
    )
    .with_flags(m.normalizable, m.boundary_divergent)
}

/// Husimi Fisher radial component with the tangential part generated by `f`.
pub fn reverse_hybridize(f: MonotoneFunction) -> RadialMetric {
    let base = metric_from_f(f);
    let tangential = base.tangential.clone();
    RadialMetric::new(
        format!("rev-hyb({f})"),
        |r| husimi_components(r).0,
        move |r| tangential(r),
    )
    .with_flags(base.normalizable, base.boundary_divergent)
}

/// Conformal rescaling of the Husimi Fisher metric by
/// `s(r) = [(1 − r²) A_Hus(r)]⁻¹`, giving the monotone radial component.
/// The tangential part is then generated by `f_Hus(t) − t − 1`.
pub fn conformalize_husimi() -> (RadialMetric, MonotoneFunction) {
    let metric = RadialMetric::new(
        "conformal-hus",
        |r| 1.0 / (1.0 - r * r),
        |r| {
            let (a, b) = husimi_components(r);
            b / ((1.0 - r * r) * a)
        },
    )
    // B ~ 1/((1 − r)|log(1 − r)|) at the boundary: the volume diverges.
    .with_flags(false, true);
    (metric, MonotoneFunction::CONFORMAL_HUSIMI)
}

/// Looks up a metric by CLI identifier.
///
/// `q` is used by the escort-based identifiers.
pub fn metric_by_id(id: &str, q: Option<f64>) -> Result<RadialMetric> {
    let need_q = || q.ok_or_else(|| Error::Domain(format!("metric `{id}` needs --q")));
    Ok(match id {
        "fisher-hus" => fisher_husimi_metric(),
        "hyb-hus" => hybridize(&fisher_husimi_metric()),
        "fisher-gauss" => gaussian_fisher_metric(),
        "escort" | "fisher-escort" => escort_fisher_metric(need_q()?)?,
        "hyb-escort" => hybridize(&escort_fisher_metric(need_q()?)?),
        "rev-hyb-gks" => reverse_hybridize(MonotoneFunction::GKS),
        "conformal-hus" => conformalize_husimi().0,
        "euclidean" => RadialMetric::euclidean(),
        other => metric_from_f(MonotoneFunction::parse(other)?),
    })
}

/// Outcome of [`operator_monotonicity_sample`].
#[derive(Debug, Clone)]
pub struct MonotonicityReport {
    pub trials: usize,
    pub violations: usize,
    /// Up to ten `(K, H, min eigenvalue of f(H) − f(K))` triples.
    pub witnesses: Vec<(DMatrix<f64>, DMatrix<f64>, f64)>,
}

/// Eigenvalue threshold below which `f(H) − f(K)` counts as a violation.
pub const MONOTONICITY_THRESHOLD: f64 = -1e-9;

/// `f(M)` for a symmetric matrix via its eigendecomposition.
pub fn matrix_function<F: Fn(f64) -> f64>(f: F, m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = SymmetricEigen::new(m.clone());
    let mapped: Vec<f64> = eig.eigenvalues.iter().map(|&l| f(l.max(0.0))).collect();
    if mapped.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!(
            "function not finite on spectrum {:?}",
            eig.eigenvalues
        )));
    }
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(mapped));
    Ok(&eig.eigenvectors * d * eig.eigenvectors.transpose())
}

/// Smallest eigenvalue of `f(H) − f(K)`.
pub fn monotonicity_gap<F: Fn(f64) -> f64>(
    f: F,
    k: &DMatrix<f64>,
    h: &DMatrix<f64>,
) -> Result<f64> {
    let diff = matrix_function(&f, h)? - matrix_function(&f, k)?;
    let sym = (&diff + diff.transpose()) * 0.5;
    Ok(SymmetricEigen::new(sym).eigenvalues.min())
}

/// Samples pairs `0 < K ≤ H` of size `dim` and counts the pairs for which
/// `f(H) − f(K)` has an eigenvalue below [`MONOTONICITY_THRESHOLD`].
pub fn operator_monotonicity_sample<F>(
    f: F,
    dim: usize,
    trials: usize,
    seed: u64,
) -> Result<MonotonicityReport>
where
    F: Fn(f64) -> f64,
{
    if !(dim == 2 || dim == 3) {
        return Err(Error::Domain(format!(
            "dimension must be 2 or 3, got {dim}"
        )));
    }
    if trials == 0 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_psd = |rng: &mut ChaCha8Rng, scale: f64| {
        let a = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0) * scale);
        &a * a.transpose()
    };
    let mut report = MonotonicityReport {
        trials,
        violations: 0,
        witnesses: Vec::new(),
    };
    for _ in 0..trials {
        let scale = 10f64.powf(rng.gen_range(-1.0..1.0));
        let k = random_psd(&mut rng, scale) + DMatrix::identity(dim, dim) * 1e-3;
        let shrink = rng.gen_range(0.05..1.0);
        let h = &k + random_psd(&mut rng, scale * shrink);
        let (kmin, hmin) = (
            SymmetricEigen::new(k.clone()).eigenvalues.min(),
            SymmetricEigen::new(h.clone()).eigenvalues.min(),
        );
        let pert_min = SymmetricEigen::new(&h - &k).eigenvalues.min();
        if !(kmin > 0.0 && hmin > 0.0 && pert_min > -1e-12) {
            return Err(Error::Internal(format!(
                "sampled pair is not ordered positive definite (K {kmin}, H {hmin}, H-K {pert_min})"
            )));
        }
        let gap = monotonicity_gap(&f, &k, &h)?;
        if gap < MONOTONICITY_THRESHOLD {
            report.violations += 1;
            if report.witnesses.len() < 10 {
                report.witnesses.push((k, h, gap));
            }
        }
    }
    Ok(report)
}

/// Smallest eigenvalue of `(monotone tensor) − (Husimi Fisher tensor)` at a
/// point in the cartesian chart.
pub fn dominance_gap(monotone: &RadialMetric, r: f64, theta1: f64) -> f64 {
    let p = [r * theta1.sin(), 0.0, r * theta1.cos()];
    let diff = monotone.tensor_cartesian(p) - fisher_husimi_metric().tensor_cartesian(p);
    SymmetricEigen::new(diff).eigenvalues.min()
}
