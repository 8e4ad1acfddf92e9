use std::ffi::{CStr, CString};
use std::ptr;

use blochgeo_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(bg_last_error()) }
        .to_str()
        .unwrap()
        .to_string()
}

fn metric(id: &str, q: f64) -> *mut BgMetric {
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { bg_metric_new(c(id).as_ptr(), q, &mut m) },
        BgStatus::Ok
    );
    m
}

fn prior(id: &str) -> *mut BgPrior {
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { bg_prior_new(c(id).as_ptr(), &mut p) },
        BgStatus::Ok
    );
    p
}

#[test]
fn bures_metric_through_the_abi() {
    let m = metric("bures", f64::NAN);
    let (mut a, mut b, mut k, mut d) = (0.0, 0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(bg_metric_components(m, 0.6, &mut a, &mut b), BgStatus::Ok);
        assert_eq!(bg_metric_scalar_curvature(m, 0.4, &mut k), BgStatus::Ok);
        assert_eq!(bg_metric_radial_distance(m, 1.0, &mut d), BgStatus::Ok);
        bg_metric_free(m);
    }
    assert!((a - 1.0 / 0.64).abs() < 1e-14);
    assert_eq!(b, 1.0);
    assert!((k - 6.0).abs() < 1e-8);
    // ∫₀¹ dr/√(1 − r²)
    assert!((d - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
}

#[test]
fn escort_needs_its_index() {
    let mut m = ptr::null_mut();
    let st = unsafe { bg_metric_new(c("escort").as_ptr(), f64::NAN, &mut m) };
    assert_eq!(st, BgStatus::Domain);
    assert!(m.is_null());
    assert!(last_error().contains("--q"));
    let m = metric("escort", 2.0);
    let (mut a, mut b) = (0.0, 0.0);
    unsafe {
        assert_eq!(bg_metric_components(m, 0.5, &mut a, &mut b), BgStatus::Ok);
        bg_metric_free(m);
    }
    assert!((a - 12.0 / 3.25f64.powi(2)).abs() < 1e-12);
}

#[test]
fn priors_and_relative_entropy() {
    let (bures, hus) = (prior("bures"), prior("hus"));
    let (mut v, mut kl, mut rho) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(bg_prior_normalizer(hus, &mut v), BgStatus::Ok);
        assert_eq!(bg_kl_divergence(bures, hus, &mut kl), BgStatus::Ok);
        assert_eq!(
            bg_prior_density(bures, 0.0, 0.0, 0.0, &mut rho),
            BgStatus::Ok
        );
        bg_prior_free(bures);
        bg_prior_free(hus);
    }
    assert!((v - 1.39350989367660).abs() < 1e-9);
    assert!((kl - 0.130845).abs() < 1e-4);
    assert!((rho - 1.0 / std::f64::consts::PI.powi(2)).abs() < 1e-12);
}

#[test]
fn redundancy_constants() {
    let gks = prior("gks");
    let mut c = 0.0;
    unsafe {
        assert_eq!(bg_redundancy_constant(gks, &mut c), BgStatus::Ok);
        bg_prior_free(gks);
    }
    assert!((c + 1.77062).abs() < 1e-5);
    assert!((bg_classical_redundancy_constant(1.39350989367660) + 3.92499).abs() < 1e-5);
    assert!(bg_classical_redundancy_constant(-1.0).is_nan());
}

#[test]
fn error_codes() {
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(
            bg_prior_new(c("gauss").as_ptr(), &mut p),
            BgStatus::NonNormalizable
        );
        assert!(last_error().contains("not normalizable"));
        assert_eq!(
            bg_prior_new(c("nope").as_ptr(), &mut p),
            BgStatus::UnknownId
        );
        assert_eq!(bg_prior_new(ptr::null(), &mut p), BgStatus::NullPointer);
        assert_eq!(
            bg_prior_new(c("hs").as_ptr(), ptr::null_mut()),
            BgStatus::NullPointer
        );
        let bad = [0xffu8, 0];
        assert_eq!(
            bg_prior_new(bad.as_ptr().cast(), &mut p),
            BgStatus::InvalidString
        );
        assert!(p.is_null());

        let m = metric("fisher-gauss", f64::NAN);
        let mut d = 0.0;
        assert_eq!(
            bg_metric_radial_distance(m, 1.0, &mut d),
            BgStatus::Divergent
        );
        assert_eq!(bg_metric_scalar_curvature(m, 1.0, &mut d), BgStatus::Domain);
        assert_eq!(
            bg_metric_scalar_curvature(m, 0.5, ptr::null_mut()),
            BgStatus::NullPointer
        );
        assert_eq!(
            bg_metric_scalar_curvature(ptr::null(), 0.5, &mut d),
            BgStatus::NullPointer
        );
        assert_eq!(bg_metric_scalar_curvature(m, 0.5, &mut d), BgStatus::Ok);
        assert_eq!(last_error(), "");
        bg_metric_free(m);

        let wigner = prior("wigner");
        assert_eq!(bg_redundancy_constant(wigner, &mut d), BgStatus::Domain);
        assert_eq!(
            bg_prior_density(wigner, 1.0, 1.0, 0.0, &mut d),
            BgStatus::Domain
        );
        bg_prior_free(wigner);
        bg_prior_free(ptr::null_mut());
        bg_metric_free(ptr::null_mut());
    }
}

#[test]
fn version_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(bg_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
