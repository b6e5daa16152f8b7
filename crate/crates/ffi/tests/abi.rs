use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use wcospec_ffi::*;

const HYPERBOLIC: &str = r#"{"algebra":{"type":"disc"},
 "map":{"moebius":{"a":[1,0],"b":[0.5,0],"c":[0.5,0],"d":[1,0]}},
 "weight":{"coeffs":[[-2,0],[1,0]]}}"#;

const T2: &str = r#"{"algebra":{"type":"endomorphism"},
 "map":{"blaschke":{"zeros":[[0,0],[0,0]]}},
 "weight":{"coeffs":[[0.5,0],[-0.5,0]]}}"#;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(wco_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn analyze_and_query() {
    let spec = c(HYPERBOLIC);
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(wco_analyze(spec.as_ptr(), &mut r), WcoStatus::Ok);
        assert!(!r.is_null());
        assert_eq!(CStr::from_ptr(wco_report_case_tag(r)).to_str().unwrap(), "Prop7.1");
        let (mut rho, mut rho_min) = (0.0, 0.0);
        assert_eq!(wco_report_radii(r, &mut rho, &mut rho_min), WcoStatus::Ok);
        assert!((rho - 3.0).abs() < 1e-12 && (rho_min - 1.0).abs() < 1e-12);

        let mut m = WcoMembership::Out;
        let name = c("sigma");
        assert_eq!(wco_report_membership(r, name.as_ptr(), 0.0, 2.0, 1e-9, &mut m), WcoStatus::Ok);
        assert_eq!(m, WcoMembership::In);
        assert_eq!(wco_report_membership(r, name.as_ptr(), 0.5, 0.0, 1e-9, &mut m), WcoStatus::Ok);
        assert_eq!(m, WcoMembership::Out);
        let sf = c("sigma_sf");
        wco_report_membership(r, sf.as_ptr(), 2.0, 0.0, 1e-9, &mut m);
        assert_eq!(m, WcoMembership::Out);
        let bad = c("sigma_x");
        assert_eq!(wco_report_membership(r, bad.as_ptr(), 0.0, 0.0, 1e-9, &mut m), WcoStatus::Schema);

        let json = CStr::from_ptr(wco_report_json(r)).to_str().unwrap();
        let v: serde_json::Value = serde_json::from_str(json).unwrap();
        assert_eq!(v["report"]["case_tag"], "Prop7.1");

        let mut svg = ptr::null_mut();
        assert_eq!(wco_report_svg(r, 0.0, 0.0, 0.0, 0.0, 31, &mut svg), WcoStatus::Ok);
        assert!(CStr::from_ptr(svg).to_str().unwrap().starts_with("<?xml"));
        wco_string_free(svg);
        wco_report_free(r);
    }
}

#[test]
fn status_codes() {
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(wco_analyze(ptr::null(), &mut r), WcoStatus::NullArgument);
        let spec = c(HYPERBOLIC);
        assert_eq!(wco_analyze(spec.as_ptr(), ptr::null_mut()), WcoStatus::NullArgument);

        let broken = c("{\"algebra\": 3}");
        assert_eq!(wco_analyze(broken.as_ptr(), &mut r), WcoStatus::Schema);
        assert!(r.is_null());
        assert!(last_error().contains("schema"), "{}", last_error());

        let dependent = c(r#"{"algebra":{"type":"polydisc","n":2},
            "map":{"gammas_over_pi":[0.5,0.25]},"weight":{"coeffs":[[2,0]]}}"#);
        assert_eq!(wco_analyze(dependent.as_ptr(), &mut r), WcoStatus::Unsupported);

        let bytes = [0xffu8, 0];
        assert_eq!(wco_analyze(bytes.as_ptr().cast(), &mut r), WcoStatus::InvalidUtf8);

        assert_eq!(wco_report_flagged(ptr::null()), -1);
        assert!(wco_report_json(ptr::null()).is_null());
        wco_report_free(ptr::null_mut());
        wco_string_free(ptr::null_mut());
    }
}

#[test]
fn cited_flag_crosses_boundary() {
    let spec = c(T2);
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(wco_verify(spec.as_ptr(), &mut r), WcoStatus::Ok);
        assert_eq!(wco_report_flagged(r), 1);
        wco_report_free(r);
        let mut line = ptr::null_mut();
        assert_eq!(wco_classify_map(spec.as_ptr(), &mut line), WcoStatus::Ok);
        assert_eq!(CStr::from_ptr(line).to_str().unwrap(), "Blaschke degree 2 zeros=[0, 0] phase=1");
        wco_string_free(line);
        assert_eq!(CStr::from_ptr(wco_version()).to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn header_is_current() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/wcospec.h")).unwrap();
    for f in [
        "wco_analyze",
        "wco_verify",
        "wco_report_json",
        "wco_report_case_tag",
        "wco_report_radii",
        "wco_report_flagged",
        "wco_report_membership",
        "wco_report_svg",
        "wco_classify_map",
        "wco_report_free",
        "wco_string_free",
        "wco_last_error",
        "wco_version",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("typedef struct WcoReport WcoReport;"));
}

/// Compile the C smoke program against the header and static library.
#[test]
fn c_program_links() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap().to_path_buf();
    let lib = profile_dir.join("libwcospec_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let out_dir = std::env::temp_dir().join(format!("wcospec-ffi-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&out_dir).unwrap();
    let bin = out_dir.join("smoke");
    let status = Command::new(&cc)
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status();
    let Ok(status) = status else {
        eprintln!("skipping: no C compiler");
        return;
    };
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{:?}", out);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "Prop7.1 3.000000 1.000000 1 0");
    assert_eq!(lines.next().unwrap(), "Hyperbolic ζ₁=1 (|φ′|=1/3), ζ₂=−1 (|φ′|=3)");
    let _ = std::fs::remove_dir_all(&out_dir);
}
