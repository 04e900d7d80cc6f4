//! Compiles and runs a C program against the generated header and static library.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include <string.h>
#include "xywave.h"

int main(void) {
    XywaveThermal *t = NULL;
    if (xywave_thermal_new(2.0, 0.0, 1e6, 1, &t) != XYWAVE_STATUS_OK) return 1;
    double g1 = 0.0;
    if (xywave_thermal_g(t, 1, &g1) != XYWAVE_STATUS_OK) return 2;
    xywave_thermal_free(t);
    if (fabs(g1 - sqrt(3.0) / M_PI) > 1e-4) return 3;

    XywaveWave *w = NULL;
    if (xywave_wave_new(0, 1.0, 1.5, &w) != XYWAVE_STATUS_INVALID_PARAMETER) return 4;
    if (strlen(xywave_last_error()) == 0) return 5;
    printf("%s\n", xywave_version());
    return 0;
}
"#;

/// `cargo test` builds only the rlib, so the static library is built here.
fn build_static_lib(profile_dir: &Path) -> PathBuf {
    let target_dir = profile_dir.parent().unwrap();
    let profile = profile_dir.file_name().unwrap().to_str().unwrap();
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let mut cmd = Command::new(cargo);
    cmd.args(["build", "--quiet", "-p", "xywave-ffi", "--lib", "--target-dir"]).arg(target_dir);
    if profile == "release" {
        cmd.arg("--release");
    }
    assert!(cmd.status().expect("cargo runs").success());
    profile_dir.join("libxywave.a")
}

#[test]
fn c_program_links_and_runs() {
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let lib = build_static_lib(exe.parent().unwrap().parent().unwrap());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-D_DEFAULT_SOURCE", "-Wall", "-Werror", "-o"])
        .arg(&bin)
        .arg(&src)
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl"])
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), env!("CARGO_PKG_VERSION"));
}
