//! Compiles and runs a C program against the generated header and the
//! static library.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "painleve.h"

int main(void) {
    PiiAiryQuad q;
    if (pii_airy_eval(1.0, &q) != PII_STATUS_OK) return 1;
    if (fabs(q.ai - 0.1352924163128814) > 1e-13) return 2;
    if (pii_airy_eval(99.0, &q) != PII_STATUS_DOMAIN) return 3;
    if (pii_last_error_message() == NULL) return 4;

    PiiParameters p = {1.0 / 3.0, -0.2, 3.5, 2.0};
    PiiReference *r = NULL;
    if (pii_reference_solve(&p, 513, 1e-12, &r) != PII_STATUS_OK) return 5;
    double e0, e1;
    PiiSolutionType kind;
    if (pii_reference_endpoints(r, &e0, &e1, &kind) != PII_STATUS_OK) return 6;
    PiiInstance inst;
    if (pii_convert(e0, e1, &p, &inst) != PII_STATUS_OK) return 7;
    printf("%s %.3f %.3f %.3f\n", kind == PII_SOLUTION_TYPE_A ? "A" : "B", inst.a, inst.b, inst.c);
    pii_reference_free(r);
    return 0;
}
"#;

fn staticlib() -> Option<PathBuf> {
    // test binaries live next to the library artifacts in target/<profile>/deps
    let deps = std::env::current_exe().ok()?.parent()?.to_path_buf();
    let lib = deps.join("libpainleve_ffi.a");
    lib.exists().then_some(lib)
}

fn include_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(include_dir().join("painleve.h")).unwrap();
    for name in [
        "pii_last_error_message",
        "pii_airy_eval",
        "pii_reference_solve",
        "pii_reference_free",
        "pii_reference_endpoints",
        "pii_reference_len",
        "pii_reference_profile",
        "pii_convert",
        "pii_series_new",
        "pii_series_free",
        "pii_series_extend",
        "pii_series_len",
        "pii_series_delta",
        "pii_series_approximant",
        "pii_direct_run",
        "typedef struct PiiReference PiiReference;",
        "PII_STATUS_PANIC = 10",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_links_and_runs() {
    let Some(lib) = staticlib() else {
        eprintln!("static library not found next to the test binary; skipping");
        return;
    };
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(include_dir())
        .arg(&src)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(out.status.success(), "cc failed: {}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "A -15.651 -14.912 -1.469");
}
