use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use lagcat_ffi::*;

const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

unsafe fn space(p: usize, q: usize) -> *mut LagcatSpace {
    let mut s = ptr::null_mut();
    assert_eq!(lagcat_space_new(p, q, false, &mut s), LagcatStatus::Ok);
    s
}

unsafe fn real(rows: usize, cols: usize, data: &[f64]) -> *mut LagcatMatrix {
    let mut m = ptr::null_mut();
    assert_eq!(lagcat_matrix_new_real(rows, cols, data.as_ptr(), &mut m), LagcatStatus::Ok);
    m
}

unsafe fn entries(m: *const LagcatMatrix) -> Vec<f64> {
    let (mut r, mut c) = (0, 0);
    assert_eq!(lagcat_matrix_shape(m, &mut r, &mut c), LagcatStatus::Ok);
    let mut out = Vec::new();
    for i in 0..r {
        for j in 0..c {
            let mut x = 0.0;
            assert_eq!(lagcat_matrix_get(m, i, j, &mut x, ptr::null_mut()), LagcatStatus::Ok);
            out.push(x);
        }
    }
    out
}

unsafe fn last_error() -> String {
    let p = lagcat_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

#[test]
fn rotation_roundtrip_through_handles() {
    unsafe {
        let v = space(1, 1);
        let u = real(2, 2, &[S, -S, S, S]);
        let mut c = ptr::null_mut();
        assert_eq!(lagcat_correspondence_from_u(v, v, u, ptr::null(), &mut c), LagcatStatus::Ok);

        let mut t = ptr::null_mut();
        assert_eq!(lagcat_correspondence_to_t(c, ptr::null(), &mut t), LagcatStatus::Ok);
        let want = [-2.0f64.sqrt(), 1.0, -1.0, 2.0f64.sqrt()];
        for (a, b) in entries(t).iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }

        let mut ok = false;
        assert_eq!(lagcat_is_lagrangian_graph(t, v, v, ptr::null(), &mut ok), LagcatStatus::Ok);
        assert!(ok);

        let mut back = ptr::null_mut();
        assert_eq!(lagcat_correspondence_from_t(v, v, t, ptr::null(), &mut back), LagcatStatus::Ok);
        let mut d = f64::NAN;
        assert_eq!(lagcat_correspondence_distance(c, back, &mut d), LagcatStatus::Ok);
        assert!(d < 1e-10);

        lagcat_correspondence_free(back);
        lagcat_matrix_free(t);
        lagcat_correspondence_free(c);
        lagcat_matrix_free(u);
        lagcat_space_free(v);
    }
}

#[test]
fn compose_methods_agree_and_identity_is_neutral() {
    unsafe {
        let v = space(1, 1);
        let u = real(2, 2, &[S, -S, S, S]);
        let mut c = ptr::null_mut();
        assert_eq!(lagcat_correspondence_from_u(v, v, u, ptr::null(), &mut c), LagcatStatus::Ok);
        let mut id = ptr::null_mut();
        assert_eq!(lagcat_correspondence_identity(v, ptr::null(), &mut id), LagcatStatus::Ok);

        let (mut f, mut b, mut ci) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(lagcat_compose(c, c, LagcatMethod::Formula, ptr::null(), &mut f), LagcatStatus::Ok);
        assert_eq!(lagcat_compose(c, c, LagcatMethod::BruteForce, ptr::null(), &mut b), LagcatStatus::Ok);
        assert_eq!(lagcat_compose(c, id, LagcatMethod::Formula, ptr::null(), &mut ci), LagcatStatus::Ok);

        let mut d = 1.0;
        assert_eq!(lagcat_correspondence_distance(f, b, &mut d), LagcatStatus::Ok);
        assert!(d < 1e-8, "formula vs brute force {d}");
        assert_eq!(lagcat_correspondence_distance(ci, c, &mut d), LagcatStatus::Ok);
        assert!(d < 1e-8, "identity {d}");

        for h in [f, b, ci, id, c] {
            lagcat_correspondence_free(h);
        }
        lagcat_matrix_free(u);
        lagcat_space_free(v);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let v = space(1, 1);
        let w = space(2, 1);

        let mut m = ptr::null_mut();
        assert_eq!(lagcat_matrix_new_real(2, 2, ptr::null(), &mut m), LagcatStatus::NullPointer);
        assert!(m.is_null());
        assert!(last_error().contains("NULL"));

        assert_eq!(
            lagcat_matrix_new_real(1, 1, [f64::NAN].as_ptr(), &mut m),
            LagcatStatus::InvalidArgument
        );

        // 2 * [[1, 0], [0, 1]] is not a partial isometry.
        let u = real(2, 2, &[2.0, 0.0, 0.0, 2.0]);
        let mut c = ptr::null_mut();
        assert_eq!(lagcat_correspondence_from_u(v, v, u, ptr::null(), &mut c), LagcatStatus::NotLagrangian);
        assert!(c.is_null());
        assert!(!last_error().is_empty());

        let mut out = [0.0];
        assert_eq!(lagcat_matrix_get(u, 5, 0, out.as_mut_ptr(), ptr::null_mut()), LagcatStatus::InvalidArgument);

        let mut ok = false;
        assert_eq!(lagcat_is_lagrangian_graph(u, v, w, ptr::null(), &mut ok), LagcatStatus::DimensionMismatch);

        lagcat_matrix_free(u);
        lagcat_space_free(v);
        lagcat_space_free(w);

        lagcat_matrix_free(ptr::null_mut());
        lagcat_space_free(ptr::null_mut());
        lagcat_correspondence_free(ptr::null_mut());
    }
}

#[test]
fn opposite_swaps_dimensions() {
    unsafe {
        let v = space(3, 1);
        let mut pv = ptr::null_mut();
        assert_eq!(lagcat_space_opposite(v, &mut pv), LagcatStatus::Ok);
        let (mut p, mut q) = (0, 0);
        assert_eq!(lagcat_space_dims(pv, &mut p, &mut q), LagcatStatus::Ok);
        assert_eq!((p, q), (1, 3));
        lagcat_space_free(pv);
        lagcat_space_free(v);
    }
}

#[test]
fn complex_matrix_entries() {
    unsafe {
        let mut m = ptr::null_mut();
        let re = [1.0, 2.0];
        let im = [0.5, -1.0];
        assert_eq!(lagcat_matrix_new_complex(1, 2, re.as_ptr(), im.as_ptr(), &mut m), LagcatStatus::Ok);
        assert!(lagcat_matrix_is_complex(m));
        let (mut a, mut b) = (0.0, 0.0);
        assert_eq!(lagcat_matrix_get(m, 0, 1, &mut a, &mut b), LagcatStatus::Ok);
        assert_eq!((a, b), (2.0, -1.0));
        lagcat_matrix_free(m);
    }
}

#[test]
fn version_and_defaults() {
    let v = unsafe { CStr::from_ptr(lagcat_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    let t = lagcat_tolerances_default();
    assert_eq!((t.proj, t.ortho, t.rank_cutoff), (1e-8, 1e-10, 1e-10));
}

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(manifest_dir().join("include/lagcat.h")).unwrap();
    let src = std::fs::read_to_string(manifest_dir().join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() > 15);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    for ty in ["typedef struct LagcatMatrix LagcatMatrix;", "LAGCAT_STATUS_OK = 0"] {
        assert!(header.contains(ty), "{ty}");
    }
}

/// Compiles `tests/c/smoke.c` against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("liblagcat_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest_dir().join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("cc");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout.contains("T = [-1.414214 1.000000; -1.000000 1.414214]"), "{stdout}");
    assert!(stdout.contains("bad u: status 5"), "{stdout}");
}
