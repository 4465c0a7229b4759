use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use spheridir_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    spheridir_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = spheridir_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

#[test]
fn measure_lifecycle_and_moments() {
    unsafe {
        let mut m = ptr::null_mut();
        let json = c(r#"{"type":"surface","d":2}"#);
        assert_eq!(spheridir_measure_from_json(json.as_ptr(), &mut m), SpheridirStatus::Ok);
        let mut d = 0usize;
        assert_eq!(spheridir_measure_dim(m, &mut d), SpheridirStatus::Ok);
        assert_eq!(d, 2);
        let mut out = ptr::null_mut();
        assert_eq!(spheridir_measure_moments_json(m, 2, &mut out), SpheridirStatus::Ok);
        let table = take(out);
        assert!(table.contains("\"1/3\""), "{table}");

        let mut check = ptr::null_mut();
        let t = c(&table);
        assert_eq!(spheridir_moment_check_json(t.as_ptr(), &mut check), SpheridirStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(check)).unwrap();
        assert_eq!(v["psd"], true);
        assert_eq!(v["toeplitz"], true);
        spheridir_measure_free(m);
    }
}

#[test]
fn richter_through_the_abi() {
    unsafe {
        let mut m = ptr::null_mut();
        let json = c(r#"{"type":"lambda_c","d":2,"lambda":"1","c":["1/2","-1/2"]}"#);
        assert_eq!(spheridir_measure_from_json(json.as_ptr(), &mut m), SpheridirStatus::Ok);
        let p = c(r#"{"d":2,"terms":[{"alpha":[1,0],"coeff":["1"]},{"alpha":[0,2],"coeff":[["0","2"]]}]}"#);
        let q = c(r#"{"d":2,"terms":[{"alpha":[1,1],"coeff":["-3/2"]}]}"#);
        let mut report = ptr::null_mut();
        let mut pass = false;
        let st = spheridir_verify_richter(m, p.as_ptr(), q.as_ptr(), 2, 1, 0, &mut report, &mut pass);
        assert_eq!(st, SpheridirStatus::Ok, "{}", last_error());
        assert!(pass);
        let v: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
        assert_eq!(v["mode"], "exact");
        assert_eq!(v["residual"]["re"], "0/1");
        spheridir_measure_free(m);
    }
}

#[test]
fn tuples_classify_and_round_trip() {
    unsafe {
        let mut t = ptr::null_mut();
        let json = c(r#"{"type":"hp","d":2,"p":"1"}"#);
        assert_eq!(spheridir_tuple_from_space_json(json.as_ptr(), 5, &mut t), SpheridirStatus::Ok);
        let mut v = SpheridirVerdict::Inconclusive;
        assert_eq!(spheridir_tuple_classify(t, 2, &mut v), SpheridirStatus::Ok);
        assert_eq!(v, SpheridirVerdict::Isometry);
        assert_eq!(spheridir_tuple_classify(t, 1, &mut v), SpheridirStatus::Ok);
        assert_ne!(v, SpheridirVerdict::Isometry);

        let mut wire = ptr::null_mut();
        assert_eq!(spheridir_tuple_to_json(t, &mut wire), SpheridirStatus::Ok);
        let wire = c(&take(wire));
        let mut t2 = ptr::null_mut();
        assert_eq!(spheridir_tuple_from_json(wire.as_ptr(), &mut t2), SpheridirStatus::Ok);
        assert_eq!(spheridir_tuple_classify(t2, 2, &mut v), SpheridirStatus::Ok);
        assert_eq!(v, SpheridirVerdict::Isometry);

        let mut k = ptr::null_mut();
        assert_eq!(spheridir_tuple_moment_kernel_json(t, 1, &mut k), SpheridirStatus::Precondition);
        assert!(last_error().contains("isometry"));
        assert_eq!(spheridir_tuple_moment_kernel_json(t, 2, &mut k), SpheridirStatus::Ok);
        spheridir_string_free(k);
        spheridir_tuple_free(t);
        spheridir_tuple_free(t2);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut m = ptr::null_mut();
        let bad = c("{not json");
        assert_eq!(spheridir_measure_from_json(bad.as_ptr(), &mut m), SpheridirStatus::Parse);
        assert!(!last_error().is_empty());
        assert!(m.is_null());

        let wrong = c(r#"{"type":"lambda_c","d":2,"lambda":"1","c":["0"]}"#);
        assert_eq!(spheridir_measure_from_json(wrong.as_ptr(), &mut m), SpheridirStatus::DimensionMismatch);
        assert_eq!(spheridir_measure_from_json(ptr::null(), &mut m), SpheridirStatus::NullPointer);
        let ok = c(r#"{"type":"surface","d":1}"#);
        assert_eq!(spheridir_measure_from_json(ok.as_ptr(), ptr::null_mut()), SpheridirStatus::NullPointer);
        assert!(spheridir_last_error_message().is_null() || !last_error().is_empty());

        let mut d = 0usize;
        assert_eq!(spheridir_measure_dim(ptr::null(), &mut d), SpheridirStatus::NullPointer);
        spheridir_measure_free(ptr::null_mut());
        spheridir_string_free(ptr::null_mut());
        assert!(!CStr::from_ptr(spheridir_version()).to_bytes().is_empty());
    }
}

#[test]
fn cli_entry_point() {
    let args: Vec<CString> = ["spheridir", "moments", "--d", "2", "--N", "2", "--out"]
        .iter()
        .map(|s| c(s))
        .collect();
    let dir = tempfile_dir();
    let out = c(dir.join("m.json").to_str().unwrap());
    let mut ptrs: Vec<*const c_char> = args.iter().map(|s| s.as_ptr()).collect();
    ptrs.push(out.as_ptr());
    unsafe {
        assert_eq!(spheridir_cli_run(ptrs.len(), ptrs.as_ptr()), 0);
    }
    let text = std::fs::read_to_string(dir.join("m.json")).unwrap();
    assert!(text.contains("\"schema\": \"spheridir/1\""));
    let bad: Vec<CString> = ["spheridir", "nonsense"].iter().map(|s| c(s)).collect();
    let bad: Vec<*const c_char> = bad.iter().map(|s| s.as_ptr()).collect();
    unsafe {
        assert_eq!(spheridir_cli_run(bad.len(), bad.as_ptr()), 2);
    }
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("spheridir-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn header_is_valid_c() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/spheridir.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "spheridir_measure_from_json",
        "spheridir_tuple_classify",
        "spheridir_last_error_message",
        "spheridir_string_free",
        "typedef struct SpheridirTuple SpheridirTuple",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let probe = tempfile_dir().join("probe.c");
    std::fs::write(&probe, "#include \"spheridir.h\"\nint main(void) { return spheridir_version() == 0; }\n").unwrap();
    let status = Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header.parent().unwrap())
        .arg(&probe)
        .status()
        .expect("C compiler available");
    assert!(status.success());
}
