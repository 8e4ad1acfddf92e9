//! Deterministic quadrature and finite differences.
//!
//! Every integral in the crate goes through [`integrate_1d`], a globally
//! adaptive composite Gauss–Legendre rule. The sphere and ball integrators
//! are tensor products built on top of it. Panels are always summed in
//! left-to-right order, so results are bit-identical from run to run.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Hard cap on the number of panels a single 1D integral may use.
const MAX_PANELS: usize = 20_000;

/// How the endpoints of an interval are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointMode {
    Plain,
    /// The integrand may behave like `(b - x)^(-1/2)` at the upper end.
    /// Removed analytically with `x = a + (b - a) sin u`.
    InverseSqrtSingularity,
}

/// Parameters shared by all integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Gauss–Legendre nodes per panel.
    pub order: usize,
    /// Initial number of panels before adaptive refinement.
    pub panels: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub endpoint_mode: EndpointMode,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            order: 10,
            panels: 4,
            abs_tol: 1e-13,
            rel_tol: 1e-10,
            endpoint_mode: EndpointMode::Plain,
        }
    }
}

impl QuadratureSpec {
    pub fn new(
        order: usize,
        panels: usize,
        abs_tol: f64,
        rel_tol: f64,
        endpoint_mode: EndpointMode,
    ) -> Result<Self> {
        let spec = QuadratureSpec {
            order,
            panels,
            abs_tol,
            rel_tol,
            endpoint_mode,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Tolerances used for full three-dimensional integrals.
    pub fn ball() -> Self {
        QuadratureSpec {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            ..Default::default()
        }
    }

    pub fn with_tol(self, abs_tol: f64, rel_tol: f64) -> Self {
        QuadratureSpec {
            abs_tol,
            rel_tol,
            ..self
        }
    }

    pub fn with_mode(self, endpoint_mode: EndpointMode) -> Self {
        QuadratureSpec {
            endpoint_mode,
            ..self
        }
    }

    pub fn singular(self) -> Self {
        self.with_mode(EndpointMode::InverseSqrtSingularity)
    }

    pub fn plain(self) -> Self {
        self.with_mode(EndpointMode::Plain)
    }

    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(Error::InvalidSpec(format!(
                "order must be >= 2, got {}",
                self.order
            )));
        }
        if self.panels == 0 {
            return Err(Error::InvalidSpec("panels must be positive".into()));
        }
        let ok = |t: f64| t.is_finite() && t >= 0.0;
        if !ok(self.abs_tol) || !ok(self.rel_tol) {
            return Err(Error::InvalidSpec(
                "tolerances must be finite and non-negative".into(),
            ));
        }
        if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
            return Err(Error::InvalidSpec(
                "at least one tolerance must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Tolerance handed to nested (inner) integrals.
    fn inner(&self) -> Self {
        QuadratureSpec {
            abs_tol: self.abs_tol * 0.1,
            rel_tol: self.rel_tol * 0.1,
            endpoint_mode: EndpointMode::Plain,
            ..*self
        }
    }

    fn target(&self, estimate: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * estimate.abs())
    }
}

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Returns the cached `n`-point rule.
    pub fn get(n: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("gauss-legendre cache poisoned");
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(GaussLegendre::compute(n)))
            .clone()
    }

    fn compute(n: usize) -> GaussLegendre {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, pm1) = legendre_pair(n, x);
                dp = nf * (x * p - pm1) / (x * x - 1.0);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (p, pm1) = legendre_pair(n, x);
            if p != 0.0 || dp == 0.0 {
                dp = nf * (x * p - pm1) / (x * x - 1.0);
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[n - 1 - i] = x;
            nodes[i] = -x;
            weights[n - 1 - i] = w;
            weights[i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn apply<F>(&self, f: &mut F, a: f64, b: f64) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let y = f(mid + half * x)?;
            if !y.is_finite() {
                return Err(Error::Domain(format!(
                    "integrand is not finite at x = {}",
                    mid + half * x
                )));
            }
            sum += w * y;
        }
        Ok(sum * half)
    }
}

/// `(P_n(x), P_{n-1}(x))` by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// Nodes and weights of a composite rule on a finite interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Grid1D {
    /// Composite Gauss–Legendre grid with `panels` equal panels of `order` nodes.
    pub fn gauss_legendre(order: usize, panels: usize, a: f64, b: f64) -> Result<Grid1D> {
        if order < 1 || panels == 0 || !(a < b) {
            return Err(Error::InvalidSpec(format!(
                "bad grid request: order {order}, panels {panels}, [{a}, {b}]"
            )));
        }
        let rule = GaussLegendre::get(order);
        let width = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(order * panels);
        let mut weights = Vec::with_capacity(order * panels);
        for p in 0..panels {
            let lo = a + width * p as f64;
            let mid = lo + 0.5 * width;
            for (x, w) in rule.nodes().iter().zip(rule.weights()) {
                nodes.push(mid + 0.5 * width * x);
                weights.push(0.5 * width * w);
            }
        }
        Ok(Grid1D { nodes, weights })
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Error allowed on panels that could not be split further, relative to the
/// requested tolerance. Covers the roundoff floor next to log singularities.
const FROZEN_ERROR_ALLOWANCE: f64 = 100.0;

struct Panel {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    err: f64,
}

impl Panel {
    fn value(&self) -> f64 {
        self.left + self.right
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn make_panel<F>(rule: &GaussLegendre, f: &mut F, a: f64, b: f64, whole: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mid = 0.5 * (a + b);
    let left = rule.apply(f, a, mid)?;
    let right = rule.apply(f, mid, b)?;
    Ok(Panel {
        a,
        b,
        left,
        right,
        err: (whole - left - right).abs(),
    })
}

/// Adaptive integral of a fallible integrand over `[a, b]` with no
/// endpoint transformation.
fn adaptive<F>(f: &mut F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let rule = GaussLegendre::get(spec.order);
    let width = (b - a) / spec.panels as f64;
    let mut heap = BinaryHeap::with_capacity(4 * spec.panels);
    for p in 0..spec.panels {
        let lo = a + width * p as f64;
        let hi = if p + 1 == spec.panels { b } else { lo + width };
        let whole = rule.apply(f, lo, hi)?;
        heap.push(make_panel(&rule, f, lo, hi, whole)?);
    }
    let mut total: f64 = heap.iter().map(Panel::value).sum();
    let mut err: f64 = heap.iter().map(|p| p.err).sum();
    let mut previous = f64::NAN;
    // Panels that reached the minimum width keep their contribution but are
    // not split further; their residual error is judged at the end.
    let mut frozen: Vec<Panel> = Vec::new();
    let mut frozen_err = 0.0;
    let min_width = 1e-13 * a.abs().max(b.abs()).max(b - a);
    while err > spec.target(total) {
        if heap.len() + frozen.len() >= MAX_PANELS {
            return Err(Error::QuadratureFailure {
                estimate: total,
                previous,
            });
        }
        let Some(worst) = heap.pop() else { break };
        if (worst.b - worst.a) < min_width {
            frozen_err += worst.err;
            frozen.push(worst);
            continue;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let l = make_panel(&rule, f, worst.a, mid, worst.left)?;
        let r = make_panel(&rule, f, mid, worst.b, worst.right)?;
        previous = total;
        total += l.value() + r.value() - worst.value();
        err += l.err + r.err - worst.err;
        heap.push(l);
        heap.push(r);
        // Incremental updates drift; resynchronise occasionally.
        if heap.len() % 256 == 0 {
            err = heap.iter().chain(&frozen).map(|p| p.err).sum();
            total = heap.iter().chain(&frozen).map(Panel::value).sum();
        }
    }
    if frozen_err > FROZEN_ERROR_ALLOWANCE * spec.target(total) {
        return Err(Error::QuadratureFailure {
            estimate: total,
            previous,
        });
    }
    heap.extend(frozen);
    let mut panels = heap.into_vec();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    Ok(panels.iter().map(Panel::value).sum())
}

/// Fallible form of [`integrate_1d`], used when the integrand is itself an
/// integral.
pub fn try_integrate_1d<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "integration interval [{a}, {b}] is empty or infinite"
        )));
    }
    match spec.endpoint_mode {
        EndpointMode::Plain => adaptive(&mut f, a, b, spec),
        EndpointMode::InverseSqrtSingularity => {
            let len = b - a;
            let last = b.next_down();
            // g is integrated in δ = π/2 − u only down to the angle of the
            // last representable x below b; the sliver beyond is modelled.
            let angle = |w: f64| 2.0 * (0.5 * w / len).sqrt().asin();
            let delta_c = angle(b - last);
            let mut g = |u: f64| -> Result<f64> {
                let delta = FRAC_PI_2 - u;
                let x = (b - 2.0 * len * (0.5 * delta).sin().powi(2)).clamp(a, last);
                // Near b the node is rounded to a representable x; use the
                // angle that maps exactly to it so that g stays smooth.
                let w = b - x;
                let exact = if w < 0.25 * len { angle(w) } else { delta };
                Ok(f(x)? * len * exact.sin())
            };
            let body = adaptive(&mut g, 0.0, FRAC_PI_2 - delta_c, spec)?;
            // Without evaluable nodes in the sliver it is left out: it
            // weighs about δ_c ≈ 1e−8 of the total unless g is log-singular.
            Ok(body + singular_tail(&mut f, b, last, len, delta_c).unwrap_or(0.0))
        }
    }
}

/// `∫₀^{δ_c} g dδ` for the transformed integrand of the singular mode,
/// where `δ_c` is the smallest angle reachable in floating point.
///
/// `g` is fitted by `α + β ln δ + γ ln² δ` through three exactly
/// representable nodes, which captures the logarithmic endpoint behaviour
/// left after the square-root singularity is removed.
fn singular_tail<F>(f: &mut F, b: f64, last: f64, len: f64, delta_c: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let ulp = b - last;
    let mut node = |m: f64| -> Result<(f64, f64)> {
        let w = ulp * m;
        let d = 2.0 * (0.5 * w / len).sqrt().asin();
        Ok((d.ln(), f(b - w)? * len * d.sin()))
    };
    let (l0, g0) = node(1.0)?;
    let flat = delta_c * g0;
    if len < 1e6 * ulp {
        return Ok(flat);
    }
    let (l1, g1) = node(64.0)?;
    let (l2, g2) = node(4096.0)?;
    let m = nalgebra::Matrix3::new(1.0, l0, l0 * l0, 1.0, l1, l1 * l1, 1.0, l2, l2 * l2);
    let Some(c) = m.lu().solve(&nalgebra::Vector3::new(g0, g1, g2)) else {
        return Ok(flat);
    };
    let lc = delta_c.ln();
    let tail = delta_c * (c[0] + c[1] * (lc - 1.0) + c[2] * (lc * lc - 2.0 * lc + 2.0));
    Ok(if tail.is_finite() { tail } else { flat })
}

/// `∫_a^b f(x) dx` to within `max(abs_tol, rel_tol·|I|)`.
pub fn integrate_1d<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_1d(|x| Ok(f(x)), a, b, spec)
}

/// Cutoffs `b − ε` used by [`upper_end_divergence`].
const DIVERGENCE_PROBES: [f64; 3] = [1e-4, 1e-6, 1e-8];

/// Checks whether `∫_a^b f` diverges at `b` by comparing partial integrals
/// up to `b − 10⁻⁴`, `b − 10⁻⁶`, `b − 10⁻⁸`. A convergent integral gains
/// less in the last step than half of what it gained in the one before.
///
/// Returns the last partial integral and its cutoff when divergent.
pub fn upper_end_divergence<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Option<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let scale = (b - a).min(1.0);
    // The comparison is coarse; tight tolerances only make probes fail.
    let probe = spec
        .singular()
        .with_tol(spec.abs_tol.max(1e-10), spec.rel_tol.max(1e-8));
    let parts: Vec<(f64, Result<f64>)> = DIVERGENCE_PROBES
        .iter()
        .map(|eps| {
            let cut = b - eps * scale;
            (cut, integrate_1d(&f, a, cut, &probe))
        })
        .collect();
    let converges = match (&parts[0].1, &parts[1].1, &parts[2].1) {
        (Ok(x), Ok(y), Ok(z)) => z.is_finite() && (z - y).abs() < 0.5 * (y - x).abs(),
        _ => false,
    };
    if converges {
        return None;
    }
    parts
        .iter()
        .rev()
        .find_map(|(cut, v)| v.as_ref().ok().map(|&v| (*cut, v)))
        .or(Some((f64::NAN, f64::NAN)))
}

/// Number of trapezoid nodes in azimuth for a given spec.
fn azimuth_points(spec: &QuadratureSpec) -> usize {
    4 * spec.order.max(8)
}

/// Orthonormal frame `(e1, e2, axis)` with `axis` normalised.
pub fn frame_about(axis: [f64; 3]) -> [[f64; 3]; 3] {
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let k = if n > 0.0 {
        [axis[0] / n, axis[1] / n, axis[2] / n]
    } else {
        [0.0, 0.0, 1.0]
    };
    let helper = if k[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let d = helper[0] * k[0] + helper[1] * k[1] + helper[2] * k[2];
    let mut e1 = [
        helper[0] - d * k[0],
        helper[1] - d * k[1],
        helper[2] - d * k[2],
    ];
    let n1 = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    e1.iter_mut().for_each(|c| *c /= n1);
    let e2 = [
        k[1] * e1[2] - k[2] * e1[1],
        k[2] * e1[0] - k[0] * e1[2],
        k[0] * e1[1] - k[1] * e1[0],
    ];
    [e1, e2, k]
}

/// `∫ f(n) dΩ` over the unit sphere, with the polar axis along `axis`.
///
/// Adaptive Gauss–Legendre in `cos γ` times a uniform trapezoid rule in
/// azimuth. Integrands depending on `n` only through `n·axis` and low-order
/// trigonometric terms in azimuth are integrated essentially exactly.
pub fn integrate_sphere_about<F>(axis: [f64; 3], f: F, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn([f64; 3]) -> f64,
{
    try_integrate_sphere_about(axis, |n| Ok(f(n)), spec)
}

pub fn try_integrate_sphere_about<F>(axis: [f64; 3], f: F, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn([f64; 3]) -> Result<f64>,
{
    let [e1, e2, k] = frame_about(axis);
    let m = azimuth_points(spec);
    let (sines, cosines): (Vec<f64>, Vec<f64>) = (0..m)
        .map(|j| (2.0 * PI * j as f64 / m as f64).sin_cos())
        .unzip();
    let step = 2.0 * PI / m as f64;
    let inner = |u: f64| -> Result<f64> {
        let s = (1.0 - u * u).max(0.0).sqrt();
        let mut acc = 0.0;
        for (sp, cp) in sines.iter().zip(&cosines) {
            let (a, b) = (s * cp, s * sp);
            let n = [
                a * e1[0] + b * e2[0] + u * k[0],
                a * e1[1] + b * e2[1] + u * k[1],
                a * e1[2] + b * e2[2] + u * k[2],
            ];
            acc += f(n)?;
        }
        Ok(acc * step)
    };
    try_integrate_1d(inner, -1.0, 1.0, &spec.plain())
}

/// `∫ f(n) dΩ` over the unit sphere.
pub fn integrate_sphere<F>(f: F, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn([f64; 3]) -> f64,
{
    integrate_sphere_about([0.0, 0.0, 1.0], f, spec)
}

/// `∫∫∫ f(r, θ₁, θ₂) dr dθ₁ dθ₂` over `[0,1]×[0,π]×[0,2π]`.
///
/// No Jacobian is inserted: densities in this crate already carry
/// `r² sin θ₁`. All three directions are adaptive; the angular ranges are
/// split at the coordinate planes so that integrable singularities on the
/// axes sit on panel boundaries. `spec.endpoint_mode` applies to `r = 1`.
pub fn integrate_ball<F>(f: F, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64, f64, f64) -> f64,
{
    try_integrate_ball(|r, t1, t2| Ok(f(r, t1, t2)), spec)
}

pub fn try_integrate_ball<F>(f: F, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64, f64, f64) -> Result<f64>,
{
    spec.validate()?;
    let inner = spec.inner();
    let innermost = inner.inner();
    let shell = |r: f64| -> Result<f64> {
        let polar = |t1: f64| -> Result<f64> {
            let mut acc = 0.0;
            for q in 0..4 {
                let lo = FRAC_PI_2 * q as f64;
                acc += try_integrate_1d(|t2| f(r, t1, t2), lo, lo + FRAC_PI_2, &innermost)?;
            }
            Ok(acc)
        };
        Ok(try_integrate_1d(&polar, 0.0, FRAC_PI_2, &inner)?
            + try_integrate_1d(&polar, FRAC_PI_2, PI, &inner)?)
    };
    try_integrate_1d(shell, 0.0, 1.0, spec)
}

/// Fourth-order central difference estimate of `f'(x)` (`order = 1`) or
/// `f''(x)` (`order = 2`).
pub fn central_diff<F>(f: F, x: f64, order: u8, h: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Domain(format!("step must be positive, got {h}")));
    }
    let eval = |y: f64| -> Result<f64> {
        let v = f(y);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!(
                "function not finite at {y} (stencil around {x})"
            )))
        }
    };
    let (m2, m1, p1, p2) = (
        eval(x - 2.0 * h)?,
        eval(x - h)?,
        eval(x + h)?,
        eval(x + 2.0 * h)?,
    );
    match order {
        1 => Ok((m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h)),
        2 => {
            let c = eval(x)?;
            Ok((-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h))
        }
        _ => Err(Error::Domain(format!(
            "derivative order must be 1 or 2, got {order}"
        ))),
    }
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// `n` logarithmically spaced points from `a` to `b` inclusive.
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(a.ln(), b.ln(), n)
        .into_iter()
        .map(f64::exp)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tight() -> QuadratureSpec {
        QuadratureSpec::default().with_tol(1e-14, 1e-12)
    }

    #[test]
    fn gauss_legendre_weights_sum_to_two() {
        for n in [2, 3, 7, 10, 20, 33] {
            let rule = GaussLegendre::get(n);
            let s: f64 = rule.weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-14, "n = {n}: {s}");
            assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn grid_integrates_constant_to_length() {
        let g = Grid1D::gauss_legendre(5, 3, -0.5, 2.0).unwrap();
        assert_relative_eq!(g.integrate(|_| 1.0), 2.5, epsilon = 1e-14);
        assert!(g.nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn one_dimensional_examples() {
        let s = tight();
        assert_relative_eq!(
            integrate_1d(|_| 1.0, 0.0, 1.0, &s).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            integrate_1d(|r| r * r, 0.0, 1.0, &s).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-14
        );
        let v = integrate_1d(|r| r * r / (1.0 - r * r).sqrt(), 0.0, 1.0, &s.singular()).unwrap();
        assert_relative_eq!(v, PI / 4.0, max_relative = 1e-12);
    }

    #[test]
    fn singular_mode_integrates_arcsine_density() {
        let s = QuadratureSpec::default().with_tol(0.0, 1e-12).singular();
        let v = integrate_1d(|r| 1.0 / (1.0 - r * r).sqrt(), 0.0, 1.0, &s).unwrap();
        assert!((v - FRAC_PI_2).abs() <= 1e-12 * FRAC_PI_2);
    }

    #[test]
    fn log_endpoint_singularity_converges() {
        // ∫₀¹ log(1-r) dr = -1
        let v = integrate_1d(|r| (1.0 - r).ln(), 0.0, 1.0, &tight()).unwrap();
        assert!((v + 1.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn non_integrable_reports_failure() {
        let s = QuadratureSpec::default().with_tol(0.0, 1e-10);
        match integrate_1d(|r| 1.0 / (1.0 - r), 0.0, 1.0, &s) {
            Err(Error::QuadratureFailure { estimate, previous }) => {
                assert!(estimate.is_finite() && previous.is_finite());
            }
            other => panic!("expected quadrature failure, got {other:?}"),
        }
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::new(1, 4, 1e-9, 1e-9, EndpointMode::Plain).is_err());
        assert!(QuadratureSpec::new(4, 0, 1e-9, 1e-9, EndpointMode::Plain).is_err());
        assert!(QuadratureSpec::new(4, 4, 0.0, 0.0, EndpointMode::Plain).is_err());
        assert!(QuadratureSpec::new(4, 4, 0.0, 1e-9, EndpointMode::Plain).is_ok());
        assert!(integrate_1d(|x| x, 1.0, 0.0, &tight()).is_err());
    }

    #[test]
    fn sphere_examples() {
        let s = tight();
        assert_relative_eq!(
            integrate_sphere(|_| 1.0, &s).unwrap(),
            4.0 * PI,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            integrate_sphere(|n| n[2] * n[2], &s).unwrap(),
            4.0 * PI / 3.0,
            max_relative = 1e-13
        );
        let husimi = integrate_sphere(|n| (1.0 + 0.5 * n[2]) / 2.0, &s).unwrap() / (2.0 * PI);
        assert_relative_eq!(husimi, 1.0, epsilon = 1e-13);
    }

    #[test]
    fn sphere_rule_exact_for_polynomials() {
        // ∫ x⁴ y² z² dΩ = 4π · 4!·2!·2! / (2·(4+2+2+3)!!·...) via the monomial formula
        // ∫ x^{2a} y^{2b} z^{2c} dΩ = 2 Γ(a+½)Γ(b+½)Γ(c+½) / Γ(a+b+c+3/2)
        fn gamma_half(k: u32) -> f64 {
            // Γ(k + 1/2)
            let mut g = PI.sqrt();
            for j in 0..k {
                g *= j as f64 + 0.5;
            }
            g
        }
        let exact = 2.0 * gamma_half(2) * gamma_half(1) * gamma_half(1) / {
            // Γ(4 + 3/2) = Γ(5.5)
            gamma_half(5)
        };
        let s = tight();
        for axis in [[0.0, 0.0, 1.0], [0.3, -0.2, 0.9], [1.0, 1.0, 1.0]] {
            let v =
                integrate_sphere_about(axis, |n| n[0].powi(4) * n[1].powi(2) * n[2].powi(2), &s)
                    .unwrap();
            assert!((v - exact).abs() < 1e-12, "axis {axis:?}: {v} vs {exact}");
        }
    }

    #[test]
    fn ball_volume() {
        let v = integrate_ball(|r, t1, _| r * r * t1.sin(), &QuadratureSpec::ball()).unwrap();
        assert_relative_eq!(v, 4.0 * PI / 3.0, max_relative = 1e-9);
    }

    #[test]
    fn central_difference_examples() {
        assert_relative_eq!(
            central_diff(|x| x * x, 1.0, 1, 1e-3).unwrap(),
            2.0,
            epsilon = 1e-10
        );
        assert!(central_diff(f64::sin, 0.0, 2, 1e-3).unwrap().abs() < 1e-12);
        let w = |r: f64| ((1.0 - r) / (1.0 + r)).ln();
        assert_relative_eq!(
            central_diff(w, 0.5, 1, 1e-3).unwrap(),
            -8.0 / 3.0,
            epsilon = 1e-9
        );
        assert!(central_diff(|x: f64| x.ln(), 0.001, 1, 1e-3).is_err());
        assert!(central_diff(|x| x, 0.0, 3, 1e-3).is_err());
        assert!(central_diff(|x| x, 0.0, 1, 0.0).is_err());
    }

    #[test]
    fn frame_is_orthonormal() {
        for axis in [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.2, 0.5, -0.3]] {
            let f = frame_about(axis);
            for i in 0..3 {
                for j in 0..3 {
                    let d: f64 = (0..3).map(|c| f[i][c] * f[j][c]).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((d - want).abs() < 1e-14);
                }
            }
        }
    }
}
