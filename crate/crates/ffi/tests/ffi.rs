use std::ffi::{c_char, CStr, CString};
use std::ptr;

use selfsim_ffi::*;

const CANTOR: &str = r#"{"dimension": 1, "maps": [{"ratio": "1/3", "trans": [0]}, {"ratio": "1/3", "trans": ["2/3"]}]}"#;
const HALVES: &str = r#"{"dimension": 1, "maps": [{"ratio": "1/2", "trans": [0]}, {"ratio": "1/2", "trans": ["1/2"]}]}"#;

fn ifs(json: &str) -> *mut SfIfs {
    let text = CString::new(json).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { sf_ifs_from_json(text.as_ptr(), &mut out) },
        SfStatus::Ok
    );
    assert!(!out.is_null());
    out
}

fn map(json: &str) -> *mut SfMap {
    let text = CString::new(json).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { sf_map_from_json(text.as_ptr(), &mut out) },
        SfStatus::Ok
    );
    out
}

fn take(s: *mut c_char) -> serde_json::Value {
    assert!(!s.is_null());
    let v = serde_json::from_str(unsafe { CStr::from_ptr(s) }.to_str().unwrap()).unwrap();
    unsafe { sf_string_free(s) };
    v
}

fn last_error() -> String {
    let p = sf_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn ssc_statuses() {
    let c = ifs(CANTOR);
    assert_eq!(unsafe { sf_ifs_len(c) }, 2);
    assert_eq!(unsafe { sf_ifs_dim(c) }, 1);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { sf_check_ssc(c, 2, &mut out) }, SfStatus::Ok);
    let v = take(out);
    assert_eq!(v["status"], "certified");
    assert_eq!(v["gap"]["lower"], "1/9");
    let h = ifs(HALVES);
    assert_eq!(unsafe { sf_check_ssc(h, 2, &mut out) }, SfStatus::Refuted);
    assert_eq!(take(out)["point"][0], "1/2");
    unsafe {
        sf_ifs_free(c);
        sf_ifs_free(h);
    }
}

#[test]
fn openness_of_a_cylinder() {
    let c = ifs(CANTOR);
    let f = map(r#"{"ratio": "1/9", "trans": ["2/9"]}"#);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { sf_openness(c, f, 4, 8, &mut out) }, SfStatus::Ok);
    let v = take(out);
    assert_eq!(
        v["cells"]["base_words"],
        serde_json::json!(["1211", "1212", "1221", "1222"])
    );
    assert_eq!(
        unsafe { sf_certify_embedding(c, f, 8, &mut out) },
        SfStatus::Ok
    );
    assert_eq!(take(out)["generators"].as_array().unwrap().len(), 1);
    unsafe {
        sf_map_free(f);
        sf_ifs_free(c);
    }
}

#[test]
fn embedding_budget_exhaustion_is_unknown() {
    let c = ifs(CANTOR);
    let f = map(r#"{"ratio": "1/3", "trans": [5]}"#);
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { sf_certify_embedding(c, f, 4, &mut out) },
        SfStatus::Unknown
    );
    assert!(out.is_null());
    assert!(last_error().contains("budget"));
    unsafe {
        sf_map_free(f);
        sf_ifs_free(c);
    }
}

#[test]
fn commensurability() {
    let (r, rf) = (CString::new("1/9").unwrap(), CString::new("1/27").unwrap());
    let (mut k, mut p) = (0u64, 0u64);
    assert_eq!(
        unsafe { sf_commensurability(r.as_ptr(), rf.as_ptr(), &mut k, &mut p) },
        SfStatus::Ok
    );
    assert_eq!((k, p), (2, 3));
    let (r, rf) = (CString::new("1/2").unwrap(), CString::new("1/3").unwrap());
    assert_eq!(
        unsafe { sf_commensurability(r.as_ptr(), rf.as_ptr(), &mut k, &mut p) },
        SfStatus::Refuted
    );
    let bad = CString::new("1/0").unwrap();
    assert_eq!(
        unsafe { sf_commensurability(bad.as_ptr(), rf.as_ptr(), &mut k, &mut p) },
        SfStatus::InvalidArgument
    );
}

#[test]
fn symmetry() {
    let problem = CString::new(
        r#"{"phi": {"dimension": 1, "maps": [{"ratio": "1/3", "trans": [0]}, {"ratio": "1/3", "trans": ["2/3"]}]},
            "psi": {"dimension": 1, "maps": [{"ratio": "1/3", "orth": {"perm": [0], "signs": [-1]}, "trans": ["1/3"]},
                                             {"ratio": "1/3", "orth": {"perm": [0], "signs": [-1]}, "trans": ["2/3"]}]}}"#,
    )
    .unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { sf_symmetry(problem.as_ptr(), 4, 8, &mut out) },
        SfStatus::Counterevidence
    );
    assert_eq!(take(out)["failed"]["name"], "hull");
}

#[test]
fn null_and_malformed_arguments() {
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { sf_ifs_from_json(ptr::null(), &mut out) },
        SfStatus::NullPointer
    );
    assert!(last_error().contains("null"));
    let truncated = CString::new(r#"{"dimension": 1, "maps": ["#).unwrap();
    assert_eq!(
        unsafe { sf_ifs_from_json(truncated.as_ptr(), &mut out) },
        SfStatus::InvalidArgument
    );
    assert!(out.is_null());
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { sf_check_ssc(ptr::null(), 2, &mut s) },
        SfStatus::NullPointer
    );
    assert_eq!(unsafe { sf_ifs_len(ptr::null()) }, 0);
    unsafe {
        sf_ifs_free(ptr::null_mut());
        sf_string_free(ptr::null_mut());
    }
}

#[test]
fn errors_clear_on_success() {
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { sf_ifs_from_json(ptr::null(), &mut out) },
        SfStatus::NullPointer
    );
    let c = ifs(CANTOR);
    assert!(sf_last_error().is_null());
    unsafe { sf_ifs_free(c) };
}

#[test]
fn header_declares_every_export() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/selfsim.h")).unwrap();
    for name in [
        "sf_ifs_from_json",
        "sf_ifs_free",
        "sf_ifs_len",
        "sf_ifs_dim",
        "sf_map_from_json",
        "sf_map_free",
        "sf_check_ssc",
        "sf_chains",
        "sf_certify_embedding",
        "sf_openness",
        "sf_commensurability",
        "sf_symmetry",
        "sf_string_free",
        "sf_last_error",
        "sf_version",
    ] {
        assert!(
            header.contains(&format!("{name}(")),
            "{name} missing from header"
        );
    }
    assert!(header.contains("typedef struct SfIfs SfIfs;"));
    assert!(header.contains("SF_STATUS_COUNTEREVIDENCE = 4"));
    let version = unsafe { CStr::from_ptr(sf_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let dir = tempfile_dir();
    let src = dir.join("use_header.c");
    std::fs::write(
        &src,
        "#include \"selfsim.h\"\nint main(void) { SfIfs *h = 0; return sf_ifs_from_json(\"{}\", &h) == SF_STATUS_OK; }\n",
    )
    .unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = std::process::Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .status();
    match status {
        Ok(s) => assert!(s.success(), "{cc} rejected the header"),
        Err(e) => eprintln!("no C compiler ({cc}: {e}); header syntax not checked"),
    }
}

fn tempfile_dir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("selfsim-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
