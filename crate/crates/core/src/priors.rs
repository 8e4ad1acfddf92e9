//! Priors as normalized volume elements, relative entropy between them,
//! measurement likelihoods and posteriors.
//!
//! Densities are taken with respect to `dr dθ₁ dθ₂` and carry the
//! `r² sin θ₁` Jacobian. Internally a prior is stored as an unnormalized
//! density `ρ(r, n)` with respect to `dr dΩ` plus the constant divided out.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::metriczoo::{
    conformalize_husimi, escort_fisher_metric, fisher_husimi_metric, gaussian_fisher_metric,
    hybridize, metric_from_f, reverse_hybridize, MonotoneFunction, RadialMetric,
};
use crate::numerics::{
    integrate_1d, integrate_sphere, try_integrate_1d, try_integrate_ball,
    try_integrate_sphere_about, upper_end_divergence, QuadratureSpec,
};

type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type PointFn = Arc<dyn Fn(f64, [f64; 3]) -> f64 + Send + Sync>;
type WeightFn = Arc<dyn Fn([f64; 3]) -> f64 + Send + Sync>;

/// A probability density on the Bloch ball.
#[derive(Clone)]
pub struct Prior {
    pub id: String,
    /// Constant divided out of the unnormalized density.
    pub normalizer: f64,
    pub rotationally_symmetric: bool,
    /// `v(r)` when `ρ(r, n) = v(r) w(r n)`.
    radial: Option<RadialFn>,
    /// `w(r⃗)` of the factorized form; absent means `w = 1`.
    weight: Option<WeightFn>,
    /// Unnormalized density with respect to `dr dΩ`.
    rho: PointFn,
}

impl fmt::Debug for Prior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Prior")
            .field("id", &self.id)
            .field("normalizer", &self.normalizer)
            .field("rotationally_symmetric", &self.rotationally_symmetric)
            .finish()
    }
}

fn direction(theta1: f64, theta2: f64) -> [f64; 3] {
    let (s1, c1) = theta1.sin_cos();
    let (s2, c2) = theta2.sin_cos();
    [s1 * c2, s1 * s2, c1]
}

/// Keeps evaluation points off `r = 1`, where several densities are infinite.
fn interior(r: f64) -> f64 {
    r.min(1f64.next_down())
}

impl Prior {
    /// Rotationally symmetric prior with unnormalized radial factor `v`;
    /// the normalizer is `4π ∫₀¹ v(r) dr`.
    pub fn from_radial<F>(id: impl Into<String>, v: F, spec: &QuadratureSpec) -> Result<Prior>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let v: RadialFn = Arc::new(v);
        let total = 4.0 * PI * integrate_1d(|r| v(interior(r)), 0.0, 1.0, &spec.singular())?;
        Prior::radial_with_normalizer(id, v, total)
    }

    fn radial_with_normalizer(
        id: impl Into<String>,
        v: RadialFn,
        normalizer: f64,
    ) -> Result<Prior> {
        if !(normalizer > 0.0 && normalizer.is_finite()) {
            return Err(Error::Domain(format!(
                "normalizer {normalizer} is not a positive number"
            )));
        }
        let inner = v.clone();
        Ok(Prior {
            id: id.into(),
            normalizer,
            rotationally_symmetric: true,
            radial: Some(v),
            weight: None,
            rho: Arc::new(move |r, _| inner(r)),
        })
    }

    /// General prior from an unnormalized density `ρ(r, n)` with respect to
    /// `dr dΩ`, normalized by quadrature over the ball.
    pub fn from_point_density<F>(
        id: impl Into<String>,
        rho: F,
        spec: &QuadratureSpec,
    ) -> Result<Prior>
    where
        F: Fn(f64, [f64; 3]) -> f64 + Send + Sync + 'static,
    {
        let rho: PointFn = Arc::new(rho);
        let total = try_integrate_ball(
            |r, t1, t2| Ok(rho(interior(r), direction(t1, t2)) * t1.sin()),
            &spec.singular(),
        )?;
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::Domain(format!(
                "total mass {total} is not a positive number"
            )));
        }
        Ok(Prior {
            id: id.into(),
            normalizer: total,
            rotationally_symmetric: false,
            radial: None,
            weight: None,
            rho,
        })
    }

    /// Density with respect to `dr dθ₁ dθ₂`.
    pub fn density(&self, r: f64, theta1: f64, theta2: f64) -> f64 {
        (self.rho)(r, direction(theta1, theta2)) * theta1.sin() / self.normalizer
    }

    /// Density with respect to Lebesgue measure on the ball.
    pub fn lebesgue_density(&self, p: [f64; 3]) -> f64 {
        // ρ carries the r² of the volume element; at the origin take the limit.
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        let n = if r > 0.0 {
            [p[0] / r, p[1] / r, p[2] / r]
        } else {
            [0.0, 0.0, 1.0]
        };
        let r = r.max(1e-100);
        (self.rho)(r, n) / (r * r * self.normalizer)
    }

    /// `m(r)` for a rotationally symmetric prior.
    fn radial_marginal_symmetric(&self, r: f64) -> Option<f64> {
        match (&self.radial, &self.weight) {
            (Some(v), None) => Some(4.0 * PI * v(r) / self.normalizer),
            _ => None,
        }
    }

    fn weight(&self, p: [f64; 3]) -> f64 {
        self.weight.as_ref().map_or(1.0, |w| w(p))
    }

    fn rho(&self, r: f64, n: [f64; 3]) -> f64 {
        (self.rho)(r, n)
    }
}

/// Jeffreys-type prior: the normalized volume element of `m`.
///
/// Fails with [`Error::NonNormalizable`] when the partial volumes keep
/// growing as the cutoff approaches `r = 1`.
pub fn prior_from_metric(m: &RadialMetric, spec: &QuadratureSpec) -> Result<Prior> {
    if let Some((cutoff, partial)) = upper_end_divergence(|r| m.volume_density(r), 0.0, 1.0, spec) {
        return Err(Error::NonNormalizable {
            id: m.provenance.clone(),
            partial: 4.0 * PI * partial,
            cutoff,
        });
    }
    let metric = m.clone();
    Prior::from_radial(
        m.provenance.clone(),
        move |r| metric.volume_density(r),
        spec,
    )
}

/// Set of measurement axes with a common likelihood exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementScheme {
    /// One representative per antipodal pair, unit length.
    pub axes: Vec<[f64; 3]>,
    /// Likelihood exponent; `(measurement count)/(2 · axes)`.
    pub m: f64,
    pub kind: SchemeKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    Octahedron,
    Dodecahedron,
    Icosahedron,
    Custom,
}

fn normalized(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

impl MeasurementScheme {
    fn checked(axes: Vec<[f64; 3]>, m: f64, kind: SchemeKind) -> Result<Self> {
        if !(m >= 0.0 && m.is_finite()) {
            return Err(Error::Domain(format!(
                "likelihood exponent must be non-negative, got {m}"
            )));
        }
        Ok(MeasurementScheme { axes, m, kind })
    }

    pub fn octahedron(m: f64) -> Result<Self> {
        Self::checked(
            vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            m,
            SchemeKind::Octahedron,
        )
    }

    /// Ten axes through the twenty vertices of a regular dodecahedron.
    pub fn dodecahedron(m: f64) -> Result<Self> {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let ip = 1.0 / phi;
        let mut axes = vec![
            [1.0, 1.0, 1.0],
            [1.0, 1.0, -1.0],
            [1.0, -1.0, 1.0],
            [-1.0, 1.0, 1.0],
        ];
        for s in [1.0, -1.0] {
            axes.push([0.0, ip, s * phi]);
            axes.push([ip, s * phi, 0.0]);
            axes.push([s * phi, 0.0, ip]);
        }
        Self::checked(
            axes.into_iter().map(normalized).collect(),
            m,
            SchemeKind::Dodecahedron,
        )
    }

    /// Six axes through the twelve vertices of a regular icosahedron.
    pub fn icosahedron(m: f64) -> Result<Self> {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let mut axes = Vec::new();
        for s in [1.0, -1.0] {
            axes.push([0.0, 1.0, s * phi]);
            axes.push([1.0, s * phi, 0.0]);
            axes.push([s * phi, 0.0, 1.0]);
        }
        Self::checked(
            axes.into_iter().map(normalized).collect(),
            m,
            SchemeKind::Icosahedron,
        )
    }

    pub fn custom(axes: Vec<[f64; 3]>, m: f64) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Domain("a scheme needs at least one axis".into()));
        }
        Self::checked(
            axes.into_iter().map(normalized).collect(),
            m,
            SchemeKind::Custom,
        )
    }

    pub fn parse(kind: &str, m: f64) -> Result<Self> {
        match kind {
            "octahedron" => Self::octahedron(m),
            "dodecahedron" => Self::dodecahedron(m),
            "icosahedron" => Self::icosahedron(m),
            other => Err(Error::UnknownId(other.to_string())),
        }
    }
}

/// `∏ᵢ (1 − (nᵢ·r⃗)²)^m`, up to constant factors.
pub fn likelihood(scheme: &MeasurementScheme, point: [f64; 3]) -> f64 {
    if scheme.m == 0.0 {
        return 1.0;
    }
    scheme
        .axes
        .iter()
        .map(|a| {
            let d = a[0] * point[0] + a[1] * point[1] + a[2] * point[2];
            (1.0 - d * d).max(0.0)
        })
        .product::<f64>()
        .powf(scheme.m)
}

/// `p · likelihood`, renormalized. The result is not rotationally symmetric.
pub fn posterior(p: &Prior, scheme: &MeasurementScheme, spec: &QuadratureSpec) -> Result<Prior> {
    let id = format!("post({},{:?},m={})", p.id, scheme.kind, scheme.m);
    let zero_mass = |e: Error| match e {
        Error::Domain(_) => Error::Domain("posterior has zero total mass".into()),
        other => other,
    };
    let Some(v) = p.radial.clone() else {
        let base = p.rho.clone();
        let scheme = scheme.clone();
        return Prior::from_point_density(
            id,
            move |r, n| {
                let l = likelihood(&scheme, [r * n[0], r * n[1], r * n[2]]);
                if l == 0.0 {
                    0.0
                } else {
                    base(r, n) * l
                }
            },
            spec,
        )
        .map_err(zero_mass);
    };
    let old = p.weight.clone();
    let scheme_c = scheme.clone();
    let weight: WeightFn = Arc::new(move |x| {
        let l = likelihood(&scheme_c, x);
        if l == 0.0 {
            0.0
        } else {
            l * old.as_ref().map_or(1.0, |w| w(x))
        }
    });
    let (vr, wr) = (v.clone(), weight.clone());
    let rho: PointFn = Arc::new(move |r, n| vr(r) * wr([r * n[0], r * n[1], r * n[2]]));
    let w2 = weight.clone();
    let total = try_integrate_1d(
        |r| {
            let r = interior(r);
            let vr = v(r);
            if vr == 0.0 {
                return Ok(0.0);
            }
            Ok(vr * integrate_sphere(|n| w2([r * n[0], r * n[1], r * n[2]]), &spec.plain())?)
        },
        0.0,
        1.0,
        &spec.singular(),
    )?;
    if !(total > 0.0 && total.is_finite()) {
        return Err(zero_mass(Error::Domain(String::new())));
    }
    Ok(Prior {
        id,
        normalizer: total,
        rotationally_symmetric: false,
        radial: Some(v),
        weight: Some(weight),
        rho,
    })
}

/// `∫ p log(p/q)` in nats.
///
/// Two rotationally symmetric priors reduce to a radial integral; priors of
/// the form `v(r) w(r⃗)` to radial × sphere quadrature; anything else uses
/// the full ball quadrature.
pub fn kl_divergence(p: &Prior, q: &Prior, spec: &QuadratureSpec) -> Result<f64> {
    let offset = (q.normalizer / p.normalizer).ln();
    if let (Some(vp), Some(vq)) = (&p.radial, &q.radial) {
        if p.weight.is_none() && q.weight.is_none() {
            let integrand = |r: f64| -> Result<f64> {
                let r = interior(r);
                kl_term(vp(r), vq(r), offset, r).map(|t| 4.0 * PI * t / p.normalizer)
            };
            return try_integrate_1d(integrand, 0.0, 1.0, &spec.singular());
        }
        let integrand = |r: f64| -> Result<f64> {
            let r = interior(r);
            let (a, b) = (vp(r), vq(r));
            if a == 0.0 {
                return Ok(0.0);
            }
            let shell = try_integrate_sphere_about(
                [0.0, 0.0, 1.0],
                |n| {
                    let x = [r * n[0], r * n[1], r * n[2]];
                    kl_term(a * p.weight(x), b * q.weight(x), offset, r)
                },
                &spec.plain(),
            )?;
            Ok(shell / p.normalizer)
        };
        return try_integrate_1d(integrand, 0.0, 1.0, &spec.singular());
    }
    let integrand = |r: f64, t1: f64, t2: f64| -> Result<f64> {
        let r = interior(r);
        let n = direction(t1, t2);
        let (a, b) = (p.rho(r, n), q.rho(r, n));
        kl_term(a, b, offset, r).map(|t| t * t1.sin() / p.normalizer)
    };
    try_integrate_ball(integrand, &spec.singular())
}

/// `a (log a − log b + offset)` with the conventions `0 log 0 = 0`, and an
/// error when `b` vanishes under positive `a`.
fn kl_term(a: f64, b: f64, offset: f64, r: f64) -> Result<f64> {
    if a == 0.0 {
        return Ok(0.0);
    }
    if !(b > 0.0) {
        return Err(Error::Divergent {
            what: "second density vanishes where the first does not".into(),
            locus: r,
        });
    }
    Ok(a * ((a / b).ln() + offset))
}

/// Outcome of the comparative-noninformativity protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    PMoreNoninformative,
    QMoreNoninformative,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::PMoreNoninformative => "p_more_noninformative",
            Verdict::QMoreNoninformative => "q_more_noninformative",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoninformativityReport {
    pub kl_p_q: f64,
    pub kl_post_p_q: f64,
    pub kl_q_p: f64,
    pub kl_post_q_p: f64,
    pub verdict: Verdict,
}

/// `p` is more noninformative when updating `p` with the scheme's data
/// brings it closer to `q`, while updating `q` moves it away from `p`.
pub fn noninformativity_compare(
    p: &Prior,
    q: &Prior,
    scheme: &MeasurementScheme,
    spec: &QuadratureSpec,
) -> Result<NoninformativityReport> {
    let kl_p_q = kl_divergence(p, q, spec)?;
    let kl_q_p = kl_divergence(q, p, spec)?;
    let kl_post_p_q = kl_divergence(&posterior(p, scheme, spec)?, q, spec)?;
    let kl_post_q_p = kl_divergence(&posterior(q, scheme, spec)?, p, spec)?;
    let verdict = if kl_post_p_q < kl_p_q && kl_post_q_p > kl_q_p {
        Verdict::PMoreNoninformative
    } else if kl_post_q_p < kl_q_p && kl_post_p_q > kl_p_q {
        Verdict::QMoreNoninformative
    } else {
        Verdict::Inconclusive
    };
    Ok(NoninformativityReport {
        kl_p_q,
        kl_post_p_q,
        kl_q_p,
        kl_post_q_p,
        verdict,
    })
}

/// `∫∫ dz/√(1 − z²) ⋯` done analytically in `z`: the Wigner normalizer as a
/// 2D integral over the unit disc, in polar coordinates.
pub fn wigner_normalizer(spec: &QuadratureSpec) -> Result<f64> {
    let radial = |phi: f64| -> Result<f64> {
        let (s, c) = phi.sin_cos();
        integrate_1d(
            |rho: f64| {
                let rho = interior(rho);
                let r2 = rho * rho;
                2.0 * rho.acos() * rho / ((1.0 - r2 * c * c) * (1.0 - r2 * s * s)).sqrt()
            },
            0.0,
            1.0,
            &spec.singular(),
        )
    };
    // eightfold symmetry in φ
    Ok(8.0 * try_integrate_1d(radial, 0.0, PI / 4.0, &spec.plain())?)
}

/// Truncated product of arcsine densities,
/// `1/(N √((1 − x²)(1 − y²)(1 − z²)))` on the ball.
pub fn wigner_prior(spec: &QuadratureSpec) -> Result<Prior> {
    let normalizer = wigner_normalizer(spec)?;
    Ok(Prior {
        id: "wigner".into(),
        normalizer,
        rotationally_symmetric: false,
        radial: None,
        weight: None,
        rho: Arc::new(|r, n| {
            let r2 = r * r;
            r2 / ((1.0 - r2 * n[0] * n[0]) * (1.0 - r2 * n[1] * n[1]) * (1.0 - r2 * n[2] * n[2]))
                .sqrt()
        }),
    })
}

/// `m(r) = ∫∫ density dθ₁ dθ₂`.
pub fn radial_marginal(p: &Prior, spec: &QuadratureSpec) -> impl Fn(f64) -> Result<f64> {
    let p = p.clone();
    let spec = *spec;
    move |r| {
        if let Some(m) = p.radial_marginal_symmetric(r) {
            return Ok(m);
        }
        let over_angles = |t1: f64| -> Result<f64> {
            let mut acc = 0.0;
            for k in 0..4 {
                let lo = 0.5 * PI * k as f64;
                acc += integrate_1d(|t2| p.density(r, t1, t2), lo, lo + 0.5 * PI, &spec.plain())?;
            }
            Ok(acc)
        };
        Ok(try_integrate_1d(over_angles, 0.0, 0.5 * PI, &spec.plain())?
            + try_integrate_1d(over_angles, 0.5 * PI, PI, &spec.plain())?)
    }
}

/// Named priors: `bures`, `mc`, `hs`, `gks`, `wy`, `yuen-lax`, `gauss`,
/// `hus`, `hyb-hus`, `hyb-escort:<q>`, `esc:<q>`, `rev-hyb-gks`,
/// `conformal-hus`, `wigner`.
pub fn prior_by_id(id: &str, spec: &QuadratureSpec) -> Result<Prior> {
    let parse_q = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| Error::UnknownId(id.to_string()))
    };
    let metric = match id {
        "wigner" => return wigner_prior(spec),
        "hus" => fisher_husimi_metric(),
        "hyb-hus" => hybridize(&fisher_husimi_metric()),
        "rev-hyb-gks" => reverse_hybridize(MonotoneFunction::GKS),
        "conformal-hus" => conformalize_husimi().0,
        "gauss" => gaussian_fisher_metric(),
        "hs" => metric_from_f(MonotoneFunction::HS),
        other => {
            if let Some(q) = other.strip_prefix("hyb-escort:") {
                hybridize(&escort_fisher_metric(parse_q(q)?)?)
            } else if let Some(q) = other.strip_prefix("esc:") {
                escort_fisher_metric(parse_q(q)?)?
            } else {
                let f = MonotoneFunction::parse(other)?;
                if matches!(other, "hus" | "husimi") || other.starts_with("escort:") {
                    return Err(Error::UnknownId(id.to_string()));
                }
                metric_from_f(f)
            }
        }
    };
    let mut prior = prior_from_metric(&metric, spec)?;
    prior.id = id.to_string();
    Ok(prior)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default().with_tol(1e-12, 1e-10)
    }

    fn ball_spec() -> QuadratureSpec {
        QuadratureSpec::ball().with_tol(1e-9, 1e-7)
    }

    #[test]
    fn volumes() {
        let hus = prior_by_id("hus", &spec()).unwrap();
        assert!((hus.normalizer - 1.39350989367660).abs() < 1e-9);
        let hyb = prior_by_id("hyb-hus", &spec()).unwrap();
        assert!((hyb.normalizer - PI * PI * (4.0 - PI) / 2.0).abs() < 1e-9);
        let bures = prior_by_id("bures", &spec()).unwrap();
        assert_relative_eq!(bures.normalizer, PI * PI, max_relative = 1e-11);
        let r: f64 = 0.6;
        let t1: f64 = 0.8;
        assert_relative_eq!(
            bures.density(r, t1, 0.3),
            r * r * t1.sin() / (PI * PI * (1.0 - r * r).sqrt()),
            max_relative = 1e-11
        );
        let mc = prior_by_id("mc", &spec()).unwrap();
        assert!((1.0 / (4.0 * mc.normalizer) - 0.00513299).abs() < 5e-9);
        let gks = prior_by_id("gks", &spec()).unwrap();
        assert!((1.0 / gks.normalizer - 0.0832258).abs() < 5e-8);
        let hs = prior_by_id("hs", &spec()).unwrap();
        assert_relative_eq!(hs.normalizer, PI / 3.0, max_relative = 1e-11);
        assert_relative_eq!(
            hs.lebesgue_density([0.0; 3]),
            hs.lebesgue_density([0.0, 1e-3, 0.0]),
            max_relative = 1e-5
        );
        assert_relative_eq!(
            bures.lebesgue_density([0.0; 3]),
            1.0 / (PI * PI),
            max_relative = 1e-12
        );
    }

    #[test]
    fn non_normalizable_metrics_are_rejected() {
        for id in ["gauss", "yuen-lax", "conformal-hus"] {
            match prior_by_id(id, &spec()) {
                Err(Error::NonNormalizable {
                    partial, cutoff, ..
                }) => {
                    assert!(partial > 0.0 && cutoff < 1.0, "{id}")
                }
                other => panic!("{id}: {other:?}"),
            }
        }
        assert!(matches!(
            prior_by_id("nope", &spec()),
            Err(Error::UnknownId(_))
        ));
    }

    #[test]
    fn radial_kl_examples() {
        let s = spec();
        let bures = prior_by_id("bures", &s).unwrap();
        let hus = prior_by_id("hus", &s).unwrap();
        assert!((kl_divergence(&bures, &hus, &s).unwrap() - 0.130845).abs() < 1e-6);
        assert!((kl_divergence(&hus, &bures, &s).unwrap() - 0.0818197).abs() < 1e-6);
        assert!(kl_divergence(&hus, &hus, &s).unwrap().abs() < 1e-12);
    }

    #[test]
    fn marginals() {
        let s = spec();
        let hs = prior_by_id("hs", &s).unwrap();
        let bures = prior_by_id("bures", &s).unwrap();
        let (mh, mb) = (radial_marginal(&hs, &s), radial_marginal(&bures, &s));
        for r in [0.1, 0.5, 0.9] {
            assert_relative_eq!(mh(r).unwrap(), 3.0 * r * r, max_relative = 1e-11);
            assert_relative_eq!(
                mb(r).unwrap(),
                4.0 * r * r / (PI * (1.0 - r * r).sqrt()),
                max_relative = 1e-11
            );
        }
    }

    #[test]
    fn likelihood_examples() {
        let oct = MeasurementScheme::octahedron(1.0).unwrap();
        assert_eq!(likelihood(&oct, [0.0; 3]), 1.0);
        assert_eq!(likelihood(&oct, [1.0, 0.0, 0.0]), 0.0);
        let p = [0.3, -0.2, 0.5];
        assert_relative_eq!(
            likelihood(&oct, p),
            0.91 * 0.96 * 0.75,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            likelihood(&oct, p),
            likelihood(&oct, [p[2], p[0], p[1]]),
            max_relative = 1e-14
        );
        assert_eq!(MeasurementScheme::dodecahedron(1.0).unwrap().axes.len(), 10);
        assert_eq!(MeasurementScheme::icosahedron(1.0).unwrap().axes.len(), 6);
        assert!(MeasurementScheme::octahedron(-1.0).is_err());
    }

    #[test]
    fn posterior_normalizers() {
        let s = ball_spec();
        let bures = prior_by_id("bures", &spec()).unwrap();
        let p1 = posterior(&bures, &MeasurementScheme::octahedron(1.0).unwrap(), &s).unwrap();
        assert_relative_eq!(
            p1.normalizer / bures.normalizer,
            71.0 / 192.0,
            max_relative = 1e-8
        );
        assert!(!p1.rotationally_symmetric);
        let p0 = posterior(&bures, &MeasurementScheme::octahedron(0.0).unwrap(), &s).unwrap();
        assert_relative_eq!(p0.normalizer, bures.normalizer, max_relative = 1e-8);
        // octahedral symmetry of the posterior
        let a = p1.lebesgue_density([0.1, 0.2, 0.5]);
        let b = p1.lebesgue_density([-0.5, 0.1, -0.2]);
        assert_relative_eq!(a, b, max_relative = 1e-13);
    }

    #[test]
    fn wigner_normalizer_by_two_routes() {
        let n = wigner_normalizer(&spec()).unwrap();
        assert!((n - 6.61455516101).abs() < 1e-8, "{n}");
    }

    #[test]
    fn compare_with_itself_is_inconclusive() {
        let s = ball_spec();
        let hs = prior_by_id("hs", &spec()).unwrap();
        let rep =
            noninformativity_compare(&hs, &hs, &MeasurementScheme::octahedron(1.0).unwrap(), &s)
                .unwrap();
        assert_eq!(rep.verdict, Verdict::Inconclusive);
        assert!(rep.kl_p_q.abs() < 1e-12 && rep.kl_q_p.abs() < 1e-12);
        assert!(rep.kl_post_p_q > 0.0);
    }
}
