//! Compiles and runs a small C program against the generated header and
//! the static library. Skips quietly when no C compiler is available.

use std::path::PathBuf;
use std::process::Command;

const C_SOURCE: &str = r#"
#include <stdio.h>
#include <string.h>
#include "ordalg.h"

int main(void) {
    const char *json =
        "{\"breaks\":[\"1/3\"],\"values\":[{\"re\":\"-1\",\"im\":\"0\"},{\"re\":\"1\",\"im\":\"0\"}]}";
    OrdalgStep *f = ordalg_step_parse(json);
    if (f == NULL) return 1;

    OrdalgStep *sq = ordalg_step_mul(f, f);
    char *norm = ordalg_step_sup_norm_sq(sq);
    if (norm == NULL || strcmp(norm, "1") != 0) return 2;
    ordalg_string_free(norm);

    char *kernel = ordalg_kernel("{\"space\":{\"kind\":\"chain\",\"n\":5}}");
    if (kernel == NULL || strcmp(kernel, "{\"components\":[]}") != 0) return 3;
    ordalg_string_free(kernel);

    if (ordalg_step_parse("{oops") != NULL) return 4;
    if (strlen(ordalg_last_error_message()) == 0) return 5;

    ordalg_step_free(sq);
    ordalg_step_free(f);
    return 0;
}
"#;

fn static_lib() -> Option<PathBuf> {
    // target/{profile}/libordalg_ffi.a, two levels above the test binary.
    let exe = std::env::current_exe().ok()?;
    let dir = exe.parent()?.parent()?;
    let lib = dir.join("libordalg_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler on PATH");
        return;
    }
    let Some(lib) = static_lib() else {
        eprintln!("skipping: static library not found next to the test binary");
        return;
    };
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let work = std::env::temp_dir().join(format!("ordalg-c-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&work).unwrap();
    let src = work.join("smoke.c");
    let bin = work.join("smoke");
    std::fs::write(&src, C_SOURCE).unwrap();

    let compile = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lm", "-o"])
        .arg(&bin)
        .output()
        .expect("cc runs");
    assert!(
        compile.status.success(),
        "cc failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&bin).output().expect("smoke binary runs");
    assert!(run.status.success(), "exit {:?}", run.status.code());
    let _ = std::fs::remove_dir_all(&work);
}
