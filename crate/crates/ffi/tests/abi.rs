//! The C ABI exercised from Rust, plus a C program built against the header.

use std::ffi::c_char;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use subdiff::ffpe::{solve_ffpe, uniform_grid, FfpeProblem};
use subdiff::pricing::{subordinated_price_quadrature, Contract};
use subdiff::quadrature::QuadConfig;
use subdiff::specfun::AlphaIndex;
use subdiff::subdiffusion::ModelParams;
use subdiff::subordinator::{sample_inverse_batch, SimConfig};
use subdiff_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 512];
    let n = unsafe { subdiff_last_error_message(buf.as_mut_ptr(), buf.len()) };
    let bytes: Vec<u8> = buf[..n].iter().map(|&c| c as u8).collect();
    String::from_utf8(bytes).unwrap()
}

#[test]
fn scalar_functions_agree_with_the_library() {
    let mut v = 0.0;
    assert_eq!(unsafe { subdiff_gamma(0.5, &mut v) }, SubdiffStatus::Ok);
    assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-15);
    assert_eq!(unsafe { subdiff_f_alpha(0.5, 0.0, &mut v) }, SubdiffStatus::Ok);
    assert!((v - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-15);
    assert_eq!(
        unsafe { subdiff_mittag_leffler_neg(1.0, 2.0, &mut v) },
        SubdiffStatus::Ok
    );
    assert!((v - (-2.0f64).exp()).abs() < 1e-15);
    assert_eq!(
        unsafe { subdiff_inverse_density(0.5, 4.0, 0.0, &mut v) },
        SubdiffStatus::Ok
    );
    assert!((v - 0.5 / std::f64::consts::PI.sqrt()).abs() < 1e-15);
    assert_eq!(
        unsafe { subdiff_density(1.0, 1.0, 1.0, 0.0, 1e-12, &mut v) },
        SubdiffStatus::Ok
    );
    assert!((v - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-15);

    let quad = QuadConfig::new(1e-10, 1e-10, 4000).unwrap();
    let c = Contract::new(100.0, 90.0, 0.5).unwrap();
    let want = subordinated_price_quadrature(AlphaIndex::new(0.7).unwrap(), 0.8, &c, &quad).unwrap();
    assert_eq!(
        unsafe { subdiff_price_quadrature(0.7, 0.8, 100.0, 90.0, 0.5, 1e-10, &mut v) },
        SubdiffStatus::Ok
    );
    assert_eq!(v, want);

    let (mut price, mut se) = (0.0, 0.0);
    let status = unsafe { subdiff_price_mc(0.7, 0.8, 100.0, 90.0, 0.5, 5, 20_000, 0.05, &mut price, &mut se) };
    assert_eq!(status, SubdiffStatus::Ok);
    assert!((price - want).abs() < 4.0 * se, "{price} +- {se} vs {want}");
}

#[test]
fn errors_map_to_status_codes_with_messages() {
    let mut v = 0.0;
    assert_eq!(unsafe { subdiff_gamma(-3.0, &mut v) }, SubdiffStatus::Pole);
    assert!(last_error().contains("pole"));
    assert_eq!(
        unsafe { subdiff_f_alpha(1.5, 1.0, &mut v) },
        SubdiffStatus::InvalidParameter
    );
    assert!(last_error().contains("alpha"));
    assert_eq!(unsafe { subdiff_f_alpha(0.5, -1.0, &mut v) }, SubdiffStatus::Domain);
    assert_eq!(
        unsafe { subdiff_gamma(2.0, ptr::null_mut()) },
        SubdiffStatus::NullPointer
    );
    assert_eq!(last_error(), "`out` is null");
    assert_eq!(subdiff_last_error_length(), "`out` is null".len());
    subdiff_clear_error();
    assert_eq!(subdiff_last_error_length(), 0);
    assert_eq!(last_error(), "");
}

#[test]
fn error_message_truncates_to_buffer() {
    let mut v = 0.0;
    unsafe { subdiff_gamma(-1.0, &mut v) };
    let mut buf = [1 as c_char; 5];
    let n = unsafe { subdiff_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert_eq!(n, 4);
    assert_eq!(buf[4], 0);
    assert_eq!(unsafe { subdiff_last_error_message(ptr::null_mut(), 10) }, 0);
}

#[test]
fn sampler_handle_reproduces_library_batches() {
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { subdiff_sampler_new(0.6, 17, 0.1, 3.0, &mut h) },
        SubdiffStatus::Ok
    );
    let mut draws = vec![0.0; 256];
    assert_eq!(
        unsafe { subdiff_sampler_inverse(h, 2.0, draws.len(), draws.as_mut_ptr()) },
        SubdiffStatus::Ok
    );
    let cfg = SimConfig {
        seed: 17,
        n_paths: 256,
        dtau: 0.1,
        t_max: 3.0,
    };
    let want = sample_inverse_batch(AlphaIndex::new(0.6).unwrap(), 2.0, &cfg).unwrap();
    assert_eq!(draws, want);

    assert_eq!(
        unsafe { subdiff_sampler_stable(h, 1.0, draws.len(), draws.as_mut_ptr()) },
        SubdiffStatus::Ok
    );
    assert!(draws.iter().all(|&x| x > 0.0));
    assert_eq!(
        unsafe { subdiff_sampler_inverse(h, 5.0, 4, draws.as_mut_ptr()) },
        SubdiffStatus::InvalidParameter
    );
    assert_eq!(
        unsafe { subdiff_sampler_inverse(ptr::null(), 1.0, 4, draws.as_mut_ptr()) },
        SubdiffStatus::NullPointer
    );
    unsafe { subdiff_sampler_free(h) };
    unsafe { subdiff_sampler_free(ptr::null_mut()) };

    let mut bad = ptr::null_mut();
    assert_eq!(
        unsafe { subdiff_sampler_new(0.6, 1, -1.0, 3.0, &mut bad) },
        SubdiffStatus::InvalidParameter
    );
    assert!(bad.is_null());
}

#[test]
fn ffpe_handle_exposes_the_solution() {
    let mut h = ptr::null_mut();
    let status = unsafe { subdiff_ffpe_solve(0.8, 1.0, 6.0, 0.5, 0.5, 0.5, 0.9, &mut h) };
    assert_eq!(status, SubdiffStatus::Ok, "{}", last_error());
    let (mut nx, mut nt) = (0, 0);
    assert_eq!(unsafe { subdiff_ffpe_shape(h, &mut nx, &mut nt) }, SubdiffStatus::Ok);
    assert_eq!(nx, 25);

    let params = ModelParams::new(0.8, 1.0).unwrap();
    let xs = uniform_grid(-6.0, 6.0, 24);
    let problem = FfpeProblem::gaussian_start(params, xs.clone(), uniform_grid(0.0, 0.5, nt - 1), 0.5).unwrap();
    let sol = solve_ffpe(&problem).unwrap();

    let mut grid = vec![0.0; nx];
    assert_eq!(
        unsafe { subdiff_ffpe_x_grid(h, grid.as_mut_ptr(), nx) },
        SubdiffStatus::Ok
    );
    assert_eq!(grid, xs);
    let mut row = vec![0.0; nx];
    let mut t = 0.0;
    assert_eq!(
        unsafe { subdiff_ffpe_profile(h, nt - 1, &mut t, row.as_mut_ptr(), nx) },
        SubdiffStatus::Ok
    );
    assert_eq!(t, 0.5);
    assert_eq!(&row, sol.values.last().unwrap());

    assert_eq!(
        unsafe { subdiff_ffpe_profile(h, nt, &mut t, row.as_mut_ptr(), nx) },
        SubdiffStatus::InvalidParameter
    );
    assert_eq!(
        unsafe { subdiff_ffpe_x_grid(h, grid.as_mut_ptr(), nx - 1) },
        SubdiffStatus::BufferTooSmall
    );
    unsafe { subdiff_ffpe_free(h) };

    let mut bad = ptr::null_mut();
    let status = unsafe { subdiff_ffpe_solve(0.8, 1.0, 6.0, 0.5, 0.5, 0.5, 1.5, &mut bad) };
    assert_eq!(status, SubdiffStatus::InvalidParameter);
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps/<binary>.
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

fn have_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok()
}

#[test]
fn c_program_links_against_the_static_library() {
    let lib = target_dir().join("libsubdiff_ffi.a");
    if !have_cc() || !lib.exists() {
        eprintln!("skipping: cc or {} unavailable", lib.display());
        return;
    }
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"
#include <math.h>
#include <stdio.h>
#include "subdiff.h"

int main(void) {
    double v = 0.0;
    if (subdiff_f_alpha(0.5, 0.0, &v) != SUBDIFF_STATUS_OK) return 1;
    if (fabs(v - 0.5641895835477563) > 1e-15) return 2;
    if (subdiff_gamma(-2.0, &v) != SUBDIFF_STATUS_POLE) return 3;
    char msg[128];
    if (subdiff_last_error_message(msg, sizeof msg) == 0) return 4;
    SubdiffSampler *s = NULL;
    if (subdiff_sampler_new(0.7, 1, 0.05, 2.0, &s) != SUBDIFF_STATUS_OK) return 5;
    double draws[8];
    if (subdiff_sampler_inverse(s, 1.0, 8, draws) != SUBDIFF_STATUS_OK) return 6;
    subdiff_sampler_free(s);
    printf("%.17g\n", draws[0]);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let printed: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    let cfg = SimConfig {
        seed: 1,
        n_paths: 8,
        dtau: 0.05,
        t_max: 2.0,
    };
    let want = sample_inverse_batch(AlphaIndex::new(0.7).unwrap(), 1.0, &cfg).unwrap();
    assert_eq!(printed, want[0]);
}
