//! Scalar curvature, unit-volume curvature products and radial distances.
//!
//! Curvature is computed from the metric components alone: 4th-order
//! central differences give `∂g` and `∂∂g`, from which the Christoffel
//! symbols and the fully covariant Riemann tensor follow. Any chart can be
//! plugged in; rotationally symmetric metrics are handled in the cartesian
//! chart, which is regular at the fully mixed state.

use std::f64::consts::PI;

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::metriczoo::RadialMetric;
use crate::numerics::{integrate_1d, upper_end_divergence, QuadratureSpec};
use crate::priors::prior_from_metric;

/// `R[a][b][c][d]`, all indices down.
pub type Riemann = [[[[f64; 3]; 3]; 3]; 3];

/// How the samples of a [`CurvatureProfile`] were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvatureMethod {
    ClosedForm,
    Numeric,
}

#[derive(Debug, Clone)]
pub struct CurvatureProfile {
    pub r: Vec<f64>,
    pub k: Vec<f64>,
    pub method: CurvatureMethod,
}

/// Radii used to decide whether a metric has constant curvature.
const CONSTANCY_RADII: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

/// Allowed spread of `K` over [`CONSTANCY_RADII`], relative to `max(1, |K|)`.
const CONSTANCY_TOL: f64 = 1e-6;

/// Below this radius the closed Husimi curvature loses digits to
/// cancellation and the series is used instead.
const HUSIMI_SERIES_CUTOFF: f64 = 0.1;

struct Derivatives {
    g: Matrix3<f64>,
    dg: [Matrix3<f64>; 3],
    ddg: [[Matrix3<f64>; 3]; 3],
}

fn shifted(x: [f64; 3], k: usize, hk: f64, l: usize, hl: f64) -> [f64; 3] {
    let mut y = x;
    y[k] += hk;
    y[l] += hl;
    y
}

#[allow(clippy::needless_range_loop)]
fn derivatives<G: Fn([f64; 3]) -> Matrix3<f64>>(g: &G, x: [f64; 3], h: f64) -> Derivatives {
    let g0 = g(x);
    let mut dg = [Matrix3::zeros(); 3];
    let mut ddg = [[Matrix3::zeros(); 3]; 3];
    for k in 0..3 {
        let p1 = g(shifted(x, k, h, k, 0.0));
        let p2 = g(shifted(x, k, 2.0 * h, k, 0.0));
        let m1 = g(shifted(x, k, -h, k, 0.0));
        let m2 = g(shifted(x, k, -2.0 * h, k, 0.0));
        dg[k] = (m2 - p2 + (p1 - m1) * 8.0) / (12.0 * h);
        ddg[k][k] = ((p1 + m1) * 16.0 - p2 - m2 - g0 * 30.0) / (12.0 * h * h);
    }
    let cross = |k: usize, l: usize, s: f64| {
        (g(shifted(x, k, s, l, s)) - g(shifted(x, k, s, l, -s)) - g(shifted(x, k, -s, l, s))
            + g(shifted(x, k, -s, l, -s)))
            / (4.0 * s * s)
    };
    for k in 0..3 {
        for l in (k + 1)..3 {
            // Richardson on the h² term of the four-point cross stencil.
            let d = (cross(k, l, h) * 4.0 - cross(k, l, 2.0 * h)) / 3.0;
            ddg[k][l] = d;
            ddg[l][k] = d;
        }
    }
    Derivatives { g: g0, dg, ddg }
}

fn riemann_from(d: &Derivatives) -> Result<(Riemann, Matrix3<f64>)> {
    let ginv =
        d.g.try_inverse()
            .ok_or_else(|| Error::Domain("metric tensor is singular".into()))?;
    // Γ_{a,bc} then Γ^e_{bc}.
    let mut first = [[[0.0; 3]; 3]; 3];
    for (a, fa) in first.iter_mut().enumerate() {
        for (b, fab) in fa.iter_mut().enumerate() {
            for (c, v) in fab.iter_mut().enumerate() {
                *v = 0.5 * (d.dg[b][(a, c)] + d.dg[c][(a, b)] - d.dg[a][(b, c)]);
            }
        }
    }
    let mut second = [[[0.0; 3]; 3]; 3];
    for (e, se) in second.iter_mut().enumerate() {
        for (b, seb) in se.iter_mut().enumerate() {
            for (c, v) in seb.iter_mut().enumerate() {
                *v = (0..3).map(|a| ginv[(e, a)] * first[a][b][c]).sum();
            }
        }
    }
    let gd = |i: usize, j: usize, k: usize, l: usize| d.ddg[k][l][(i, j)];
    let mut rm = [[[[0.0; 3]; 3]; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for dd in 0..3 {
                    let mut v = 0.5
                        * (gd(a, dd, b, c) + gd(b, c, a, dd) - gd(a, c, b, dd) - gd(b, dd, a, c));
                    for e in 0..3 {
                        for f in 0..3 {
                            v += d.g[(e, f)]
                                * (second[e][b][c] * second[f][a][dd]
                                    - second[e][b][dd] * second[f][a][c]);
                        }
                    }
                    rm[a][b][c][dd] = v;
                }
            }
        }
    }
    Ok((rm, ginv))
}

/// Riemann tensor of the metric field `g` at `x`, by finite differences with step `h`.
pub fn riemann_tensor<G>(g: G, x: [f64; 3], h: f64) -> Result<Riemann>
where
    G: Fn([f64; 3]) -> Matrix3<f64>,
{
    Ok(riemann_from(&derivatives(&g, x, h))?.0)
}

/// Scalar curvature `g^{ac} g^{bd} R_{abcd}` of the metric field `g` at `x`.
pub fn scalar_curvature_of<G>(g: G, x: [f64; 3], h: f64) -> Result<f64>
where
    G: Fn([f64; 3]) -> Matrix3<f64>,
{
    let (rm, gi) = riemann_from(&derivatives(&g, x, h))?;
    let mut k = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    k += gi[(a, c)] * gi[(b, d)] * rm[a][b][c][d];
                }
            }
        }
    }
    if k.is_finite() {
        Ok(k)
    } else {
        Err(Error::Domain("non-finite curvature".into()))
    }
}

/// Scalar curvature of `A dr² + B dn²` at radius `r`.
///
/// Evaluated at `(r, 0, 0)` in the cartesian chart. The polar chart would
/// produce `K = O(r²)` as a difference of `O(r⁻²)` terms and lose most
/// digits near the centre. Two step sizes are combined to cancel the `h⁴`
/// error of the stencils.
pub fn scalar_curvature(m: &RadialMetric, r: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Domain(format!(
            "scalar curvature needs 0 ≤ r < 1, got {r}"
        )));
    }
    let h = 0.01 * (1.0 - r).min(0.5);
    if h < 1e-8 {
        return Err(Error::Domain(format!(
            "differentiation step underflows at r = {r}"
        )));
    }
    let k = |h: f64| scalar_curvature_of(|x| m.tensor_cartesian(x), [r, 0.0, 0.0], h);
    Ok((16.0 * k(h)? - k(2.0 * h)?) / 15.0)
}

/// Numeric curvature profile on `grid`.
pub fn curvature_profile(m: &RadialMetric, grid: &[f64]) -> Result<CurvatureProfile> {
    let k = grid
        .iter()
        .map(|&r| scalar_curvature(m, r))
        .collect::<Result<_>>()?;
    Ok(CurvatureProfile {
        r: grid.to_vec(),
        k,
        method: CurvatureMethod::Numeric,
    })
}

/// Closed-form curvature profile of the Husimi Fisher metric on `grid`.
pub fn husimi_curvature_profile(grid: &[f64]) -> Result<CurvatureProfile> {
    let k = grid
        .iter()
        .map(|&r| husimi_curvature_closed(r))
        .collect::<Result<_>>()?;
    Ok(CurvatureProfile {
        r: grid.to_vec(),
        k,
        method: CurvatureMethod::ClosedForm,
    })
}

/// Even-power series of the Husimi curvature about `r = 0`, through `r¹⁰`.
pub fn husimi_curvature_series(r: f64) -> f64 {
    let s = r * r;
    let c = [
        -6.0 / 5.0,
        -138.0 / 125.0,
        -32094.0 / 30625.0,
        -154474.0 / 153125.0,
        -57710054.0 / 58953125.0,
    ];
    s * c.iter().rev().fold(0.0, |acc, &ci| acc * s + ci)
}

/// Scalar curvature of the Husimi Fisher metric in closed form.
pub fn husimi_curvature_closed(r: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Domain(format!(
            "Husimi curvature needs 0 ≤ r < 1, got {r}"
        )));
    }
    if r < HUSIMI_SERIES_CUTOFF {
        return Ok(husimi_curvature_series(r));
    }
    let w = ((1.0 - r) / (1.0 + r)).ln();
    let (r2, r4) = (r * r, r.powi(4));
    let num = r
        * (-6.0 * r + w * (r2 - 3.0))
        * (-4.0 * r2 * (r2 - 3.0)
            + 6.0 * w * r * (2.0 - 3.0 * r2 + r4)
            + w * w * (3.0 - 8.0 * r2 + 5.0 * r4));
    let den = (w + 2.0 * r).powi(2) * (r2 - 1.0) * (-2.0 * r + w * (r2 - 1.0)).powi(2);
    Ok(num / den)
}

/// Largest absolute component of the Riemann tensor at the fully mixed
/// state, in the cartesian chart.
pub fn riemann_at_origin(m: &RadialMetric) -> Result<f64> {
    let rm = riemann_tensor(|x| m.tensor_cartesian(x), [0.0; 3], 1e-2)?;
    Ok(rm
        .iter()
        .flatten()
        .flatten()
        .flatten()
        .fold(0.0_f64, |acc, v| acc.max(v.abs())))
}

/// Samples `K` at a few radii and returns the common value, or
/// [`Error::NotConstantCurvature`] with the observed spread.
pub fn constant_curvature(m: &RadialMetric) -> Result<f64> {
    let ks = CONSTANCY_RADII
        .iter()
        .map(|&r| scalar_curvature(m, r))
        .collect::<Result<Vec<_>>>()?;
    let lo = ks.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ks.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = ks.iter().sum::<f64>() / ks.len() as f64;
    if hi - lo > CONSTANCY_TOL * mean.abs().max(1.0) {
        return Err(Error::NotConstantCurvature {
            id: m.provenance.clone(),
            spread: hi - lo,
        });
    }
    Ok(mean)
}

/// `K · V` for a constant-curvature metric of total volume `V`.
pub fn curvature_volume_product(m: &RadialMetric, spec: &QuadratureSpec) -> Result<f64> {
    let k = constant_curvature(m)?;
    Ok(k * prior_from_metric(m, spec)?.normalizer)
}

/// Volume of the unit `n`-sphere.
pub fn sphere_volume(n: u32) -> f64 {
    match n {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / (n as f64 - 1.0) * sphere_volume(n - 2),
    }
}

/// `n(n − 1) V_n^{2/n}`, the round-sphere value of the Yamabe invariant.
pub fn yamabe_formula(n: u32) -> f64 {
    let nf = n as f64;
    nf * (nf - 1.0) * sphere_volume(n).powf(2.0 / nf)
}

/// Upper bound on the unit-volume curvature of Yamabe metrics in three
/// dimensions, as quoted: `24 · 2^{1/3} π^{4/3}`.
///
/// This is not what [`yamabe_formula`] gives for `n = 3`.
pub fn yamabe_bound() -> f64 {
    24.0 * 2f64.cbrt() * PI.powf(4.0 / 3.0)
}

/// Minimal-metric curvature at the fully mixed state of `n`-level systems,
/// `(5n² − 4)(n² − 1)/8`.
pub fn min_monotone_curvature(n: u32) -> f64 {
    let n2 = (n * n) as f64;
    (5.0 * n2 - 4.0) * (n2 - 1.0) / 8.0
}

/// Distance from the fully mixed state along a radius, `∫₀^r √A`.
pub fn radial_distance(m: &RadialMetric, r: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!(
            "radial distance needs 0 ≤ r ≤ 1, got {r}"
        )));
    }
    let ds = |s: f64| m.a(s).sqrt();
    if r == 1.0 {
        if let Some((cutoff, partial)) = upper_end_divergence(ds, 0.0, 1.0, spec) {
            return Err(Error::Divergent {
                what: format!(
                    "radial distance under `{}` (partial {partial} at {cutoff})",
                    m.provenance
                ),
                locus: 1.0,
            });
        }
    }
    integrate_1d(ds, 0.0, r, &spec.singular())
}

/// Linear comparator profile for the Monge distance, reaching `π/8` at `r = 1`.
pub fn monge_distance(r: f64) -> f64 {
    PI / 8.0 * r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metriczoo::{
        conformalize_husimi, escort_fisher_metric, fisher_husimi_metric, gaussian_fisher_metric,
        metric_by_id, metric_from_f, MonotoneFunction,
    };
    use approx::assert_abs_diff_eq;

    fn warped(m: &RadialMetric, r: f64) -> f64 {
        // K of A dr² + C² dn² with C = r√B, by independent 1D differences.
        let c = |s: f64| s * m.b(s).sqrt();
        let h = 1e-3 * (1.0 - r).min(r);
        let d1 = |f: &dyn Fn(f64) -> f64| (f(r + h) - f(r - h)) / (2.0 * h);
        let (a, cc) = (m.a(r), c(r));
        let c1 = d1(&c);
        let c2 = (c(r + h) - 2.0 * cc + c(r - h)) / (h * h);
        let a1 = d1(&|s| m.a(s));
        2.0 * (1.0 - c1 * c1 / a) / (cc * cc) - 4.0 * (c2 / a - c1 * a1 / (2.0 * a * a)) / cc
    }

    #[test]
    fn constant_curvature_metrics() {
        for r in [0.05, 0.3, 0.6, 0.95] {
            assert_abs_diff_eq!(
                scalar_curvature(&metric_from_f(MonotoneFunction::BURES), r).unwrap(),
                6.0,
                epsilon = 1e-6
            );
            assert_abs_diff_eq!(
                scalar_curvature(&escort_fisher_metric(2.0).unwrap(), r).unwrap(),
                1.5,
                epsilon = 1e-6
            );
            assert_abs_diff_eq!(
                scalar_curvature(&metric_from_f(MonotoneFunction::WY), r).unwrap(),
                1.5,
                epsilon = 1e-6
            );
        }
        assert_eq!(min_monotone_curvature(2), 6.0);
    }

    #[test]
    fn engine_matches_warped_product_formula() {
        for id in ["fisher-hus", "gks", "mc", "hs", "yuen-lax"] {
            let m = metric_by_id(id, None).unwrap();
            for r in [0.2, 0.5, 0.8] {
                let k = scalar_curvature(&m, r).unwrap();
                assert!(
                    (k - warped(&m, r)).abs() < 1e-4 * k.abs().max(1.0),
                    "{id} {r}"
                );
            }
        }
    }

    #[test]
    fn maximal_metric_curvature_in_this_normalization() {
        let m = metric_from_f(MonotoneFunction::YUEN_LAX);
        for r in [0.1, 0.5, 0.9] {
            let k = scalar_curvature(&m, r).unwrap();
            assert!((k - 2.0 * (r * r - 6.0) / (1.0 - r * r)).abs() < 1e-6 * k.abs());
        }
    }

    #[test]
    fn husimi_numeric_matches_closed_form() {
        let m = fisher_husimi_metric();
        for i in 0..=90 {
            let r = 0.05 + 0.01 * i as f64;
            let k = scalar_curvature(&m, r).unwrap();
            assert_abs_diff_eq!(k, husimi_curvature_closed(r).unwrap(), epsilon = 1e-6);
        }
    }

    #[test]
    fn husimi_closed_form_shape() {
        let k = |r| husimi_curvature_closed(r).unwrap();
        assert_eq!(k(0.0), 0.0);
        assert!(k(0.8) < k(0.5) && k(0.5) < k(0.2) && k(0.2) < 0.0);
        assert!(k(1.0 - 1e-9) < -1e6);
        assert_abs_diff_eq!(k(0.3), husimi_curvature_series(0.3), epsilon = 1e-5);
        // Closed form and series agree across the switch.
        let w = 0.1 + 1e-12;
        assert_abs_diff_eq!(k(w), husimi_curvature_series(w), epsilon = 1e-11);
    }

    #[test]
    fn husimi_series_coefficients_from_numeric_fit() {
        // K/r² = c₁ + c₂ r² + c₃ r⁴ + c₄ r⁶: least squares on small radii.
        let m = fisher_husimi_metric();
        let rs: Vec<f64> = (1..=15).map(|i| 0.02 * i as f64).collect();
        let design = nalgebra::DMatrix::from_fn(rs.len(), 4, |i, j| rs[i].powi(2 * j as i32));
        let y = nalgebra::DVector::from_iterator(
            rs.len(),
            rs.iter()
                .map(|&r| scalar_curvature(&m, r).unwrap() / (r * r)),
        );
        let c = design.svd(true, true).solve(&y, 1e-14).unwrap();
        assert_abs_diff_eq!(c[0], -6.0 / 5.0, epsilon = 1e-3);
        assert_abs_diff_eq!(c[1], -138.0 / 125.0, epsilon = 1e-3);
    }

    #[test]
    fn riemann_tensor_at_mixed_state() {
        assert!(riemann_at_origin(&fisher_husimi_metric()).unwrap() < 1e-6);
        assert_eq!(riemann_at_origin(&RadialMetric::euclidean()).unwrap(), 0.0);
        assert!(riemann_at_origin(&metric_from_f(MonotoneFunction::BURES)).unwrap() > 0.5);
    }

    #[test]
    fn conformal_husimi_limit() {
        let m = conformalize_husimi().0;
        assert_abs_diff_eq!(
            scalar_curvature(&m, 0.0).unwrap(),
            -24.0 / 5.0,
            epsilon = 1e-6
        );
        assert_abs_diff_eq!(
            scalar_curvature(&m, 1e-3).unwrap(),
            -24.0 / 5.0,
            epsilon = 1e-4
        );
    }

    #[test]
    fn unit_volume_products() {
        let spec = QuadratureSpec::default();
        let pi2 = PI * PI;
        let cases = [
            (metric_from_f(MonotoneFunction::BURES), 6.0 * pi2),
            (metric_from_f(MonotoneFunction::WY), 6.0 * PI * (PI - 2.0)),
            (
                escort_fisher_metric(2.0).unwrap(),
                4.0 * pi2 - 6.0 * 3f64.sqrt() * PI,
            ),
        ];
        for (m, want) in &cases {
            let kv = curvature_volume_product(m, &spec).unwrap();
            assert_abs_diff_eq!(kv, *want, epsilon = 1e-6);
            assert!(kv < yamabe_bound());
        }
        assert!(matches!(
            curvature_volume_product(&fisher_husimi_metric(), &spec),
            Err(Error::NotConstantCurvature { .. })
        ));
    }

    #[test]
    fn yamabe_constants() {
        assert_abs_diff_eq!(yamabe_bound(), 139.13, epsilon = 5e-3);
        assert_abs_diff_eq!(sphere_volume(3), 2.0 * PI * PI, epsilon = 1e-14);
        assert_abs_diff_eq!(sphere_volume(2), 4.0 * PI, epsilon = 1e-14);
        // The quoted bound is not n(n − 1)V_n^{2/n} at n = 3.
        assert!((yamabe_formula(3) - yamabe_bound()).abs() > 90.0);
    }

    #[test]
    fn radial_distances() {
        let spec = QuadratureSpec::default();
        for f in MonotoneFunction::catalog() {
            let m = metric_from_f(f);
            assert_abs_diff_eq!(
                radial_distance(&m, 1.0, &spec).unwrap(),
                PI / 2.0,
                epsilon = 1e-9
            );
            assert_abs_diff_eq!(
                radial_distance(&m, 0.5, &spec).unwrap(),
                0.5f64.asin(),
                epsilon = 1e-12
            );
        }
        let hus = fisher_husimi_metric();
        assert_abs_diff_eq!(
            radial_distance(&hus, 1.0, &spec).unwrap(),
            PI / 4.5551532167057,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(monge_distance(1.0), PI / 8.0);
        assert!(matches!(
            radial_distance(&gaussian_fisher_metric(), 1.0, &spec),
            Err(Error::Divergent { .. })
        ));
        assert!(radial_distance(&hus, 1.1, &spec).is_err());
    }

    #[test]
    fn distance_dominance_chain() {
        let spec = QuadratureSpec::default();
        let hus = fisher_husimi_metric();
        for i in 1..=99 {
            let r = i as f64 / 100.0;
            let d = radial_distance(&hus, r, &spec).unwrap();
            assert!(r.asin() >= d && d >= monge_distance(r), "r = {r}");
        }
    }
}
