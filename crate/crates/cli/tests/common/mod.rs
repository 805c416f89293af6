//! Frozen outputs shared by the regression test and the acceptance run.

use std::path::PathBuf;

use dualgraph_cli::run;

/// Fixture file name and the arguments producing it.
pub const FROZEN: [(&str, &[&str]); 2] = [
    ("fibers_8.txt", &["fibers", "--max", "8", "--validate"]),
    (
        "certificates_12.jsonl",
        &["verify-theorem", "--range", "1", "12", "--format", "json"],
    ),
];

pub fn frozen_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures/frozen")
        .join(name)
}

/// Compares each frozen output with a fresh run, byte for byte. With
/// `UPDATE_FIXTURES` set the files are rewritten instead.
pub fn check_frozen() -> Result<usize, String> {
    let update = std::env::var_os("UPDATE_FIXTURES").is_some();
    let mut bytes = 0;
    for (name, args) in FROZEN {
        let out = run(args.iter().copied());
        if out.code != 0 {
            return Err(format!("{name}: exit {} {}", out.code, out.stderr));
        }
        let path = frozen_path(name);
        if update {
            std::fs::write(&path, &out.stdout).map_err(|e| format!("{}: {e}", path.display()))?;
        }
        let frozen = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        if frozen != out.stdout.as_bytes() {
            let line = frozen
                .split(|&b| b == b'\n')
                .zip(out.stdout.lines())
                .position(|(a, b)| a != b.as_bytes())
                .map_or_else(|| "length".to_string(), |i| format!("line {}", i + 1));
            return Err(format!("{name} drifted at {line}"));
        }
        bytes += frozen.len();
    }
    Ok(bytes)
}
