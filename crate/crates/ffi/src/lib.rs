//! C interface to `blochgeo`.
//!
//! Metrics and priors are opaque handles created by `bg_*_new` and released
//! with the matching `bg_*_free`. Every fallible call returns a
//! [`BgStatus`] and writes its result through an out-pointer; on failure a
//! message is available from [`bg_last_error`] on the same thread.
//! Integrals use the library's default tolerances.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use blochgeo::coding::{classical_redundancy_constant, quantum_maximin_constant, w_profile};
use blochgeo::curvature::{radial_distance, scalar_curvature};
use blochgeo::goldens::GoldenConfig;
use blochgeo::metriczoo::{metric_by_id, RadialMetric};
use blochgeo::priors::{kl_divergence, prior_by_id, Prior};
use blochgeo::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BgStatus {
    Ok = 0,
    NullPointer = 1,
    /// A string argument is not valid UTF-8.
    InvalidString = 2,
    UnknownId = 3,
    Domain = 4,
    InvalidSpec = 5,
    QuadratureFailure = 6,
    NonNormalizable = 7,
    Divergent = 8,
    NotConstantCurvature = 9,
    Internal = 10,
    /// The library panicked; this is a bug.
    Panic = 11,
}

impl From<&Error> for BgStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidSpec(_) => BgStatus::InvalidSpec,
            Error::QuadratureFailure { .. } => BgStatus::QuadratureFailure,
            Error::Domain(_) => BgStatus::Domain,
            Error::NonNormalizable { .. } => BgStatus::NonNormalizable,
            Error::Divergent { .. } => BgStatus::Divergent,
            Error::NotConstantCurvature { .. } => BgStatus::NotConstantCurvature,
            Error::UnknownId(_) => BgStatus::UnknownId,
            Error::Internal(_) => BgStatus::Internal,
        }
    }
}

/// A rotationally symmetric Riemannian metric on the Bloch ball.
pub struct BgMetric(RadialMetric);

/// A normalized prior density on the Bloch ball.
pub struct BgPrior(Prior);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Runs `f`, turning errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), (BgStatus, String)>>(f: F) -> BgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            BgStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside blochgeo");
            BgStatus::Panic
        }
    }
}

fn lib<T>(r: blochgeo::Result<T>) -> Result<T, (BgStatus, String)> {
    r.map_err(|e| (BgStatus::from(&e), e.to_string()))
}

fn null(what: &str) -> (BgStatus, String) {
    (BgStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (BgStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (BgStatus::InvalidString, format!("{what} is not UTF-8")))
}

unsafe fn write<T>(out: *mut T, v: T, what: &str) -> Result<(), (BgStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

unsafe fn get<'a, T>(h: *const T, what: &str) -> Result<&'a T, (BgStatus, String)> {
    h.as_ref().ok_or_else(|| null(what))
}

fn config() -> GoldenConfig {
    GoldenConfig::default()
}

/// Message for the most recent failing call on this thread, or an empty
/// string. Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn bg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a metric from its identifier, e.g. `"bures"` or `"fisher-hus"`.
/// `q` is the escort index; pass NaN when the identifier does not use one.
///
/// # Safety
/// `id` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bg_metric_new(
    id: *const c_char,
    q: f64,
    out: *mut *mut BgMetric,
) -> BgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let id = read_str(id, "id")?;
        let m = lib(metric_by_id(id, (!q.is_nan()).then_some(q)))?;
        write(out, Box::into_raw(Box::new(BgMetric(m))), "out")
    })
}

/// Releases a metric. Null is ignored.
///
/// # Safety
/// `m` must come from [`bg_metric_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bg_metric_free(m: *mut BgMetric) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Radial and tangential components `A(r)`, `B(r)` of
/// `ds² = A dr² + B r² dΩ²`.
///
/// # Safety
/// `m` must be a live handle; `a` and `b` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bg_metric_components(
    m: *const BgMetric,
    r: f64,
    a: *mut f64,
    b: *mut f64,
) -> BgStatus {
    guard(|| {
        let m = &get(m, "metric")?.0;
        if !(0.0..=1.0).contains(&r) {
            return Err((BgStatus::Domain, format!("radius {r} outside [0, 1]")));
        }
        write(a, m.a(r), "a")?;
        write(b, m.b(r), "b")
    })
}

/// Scalar curvature at radius `0 ≤ r < 1`.
///
/// # Safety
/// `m` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bg_metric_scalar_curvature(
    m: *const BgMetric,
    r: f64,
    out: *mut f64,
) -> BgStatus {
    guard(|| {
        let m = &get(m, "metric")?.0;
        write(out, lib(scalar_curvature(m, r))?, "out")
    })
}

/// Distance from the fully mixed state to radius `r` along a radius.
///
/// # Safety
/// `m` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bg_metric_radial_distance(
    m: *const BgMetric,
    r: f64,
    out: *mut f64,
) -> BgStatus {
    guard(|| {
        let m = &get(m, "metric")?.0;
        write(out, lib(radial_distance(m, r, &config().spec))?, "out")
    })
}

/// Creates a prior from its identifier, e.g. `"bures"`, `"hus"`, `"wigner"`.
/// Fails with `NON_NORMALIZABLE` when the volume element cannot be normalized.
///
/// # Safety
/// `id` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bg_prior_new(id: *const c_char, out: *mut *mut BgPrior) -> BgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let id = read_str(id, "id")?;
        let p = lib(prior_by_id(id, &config().spec))?;
        write(out, Box::into_raw(Box::new(BgPrior(p))), "out")
    })
}

/// Releases a prior. Null is ignored.
///
/// # Safety
/// `p` must come from [`bg_prior_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bg_prior_free(p: *mut BgPrior) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Constant dividing the unnormalized density (the volume, for metric priors).
///
/// # Safety
/// `p` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bg_prior_normalizer(p: *const BgPrior, out: *mut f64) -> BgStatus {
    guard(|| write(out, get(p, "prior")?.0.normalizer, "out"))
}

/// Density with respect to Lebesgue measure at the Bloch vector `(x, y, z)`.
///
/// # Safety
/// `p` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bg_prior_density(
    p: *const BgPrior,
    x: f64,
    y: f64,
    z: f64,
    out: *mut f64,
) -> BgStatus {
    guard(|| {
        let p = &get(p, "prior")?.0;
        if x * x + y * y + z * z > 1.0 {
            return Err((BgStatus::Domain, "point outside the Bloch ball".into()));
        }
        write(out, p.lebesgue_density([x, y, z]), "out")
    })
}

/// Relative entropy `S(p || q)` in nats.
///
/// # Safety
/// `p`, `q` must be live handles; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bg_kl_divergence(
    p: *const BgPrior,
    q: *const BgPrior,
    out: *mut f64,
) -> BgStatus {
    guard(|| {
        let (p, q) = (&get(p, "p")?.0, &get(q, "q")?.0);
        write(out, lib(kl_divergence(p, q, &config().ball))?, "out")
    })
}

/// Constant `c` of the quantum redundancy `1.5 log N + c` under a
/// rotationally symmetric prior.
///
/// # Safety
/// `p` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bg_redundancy_constant(p: *const BgPrior, out: *mut f64) -> BgStatus {
    guard(|| {
        let p = &get(p, "prior")?.0;
        let spec = config().spec;
        let w = lib(w_profile(p, &spec))?;
        write(out, lib(quantum_maximin_constant(&w, &spec))?, "out")
    })
}

/// Classical redundancy constant for a three-parameter family of the given
/// Fisher volume. Returns NaN for a non-positive volume.
#[no_mangle]
pub extern "C" fn bg_classical_redundancy_constant(volume: f64) -> f64 {
    if volume > 0.0 {
        classical_redundancy_constant(volume)
    } else {
        f64::NAN
    }
}
