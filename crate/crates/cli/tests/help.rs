//! Help text is pinned by golden files under `tests/help`; `BLESS=1` rewrites them.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

const COMMANDS: &[&[&str]] = &[
    &[],
    &["discrete"],
    &["discrete", "update"],
    &["discrete", "grid2p"],
    &["beta"],
    &["beta", "update"],
    &["beta", "select"],
    &["beta", "interval"],
    &["beta", "predict"],
    &["normal"],
    &["normal", "update"],
    &["normal", "predict"],
    &["mcmc"],
    &["mcmc", "gibbs-normal"],
    &["mcmc", "metropolis"],
    &["model"],
    &["model", "run"],
    &["hier"],
    &["hier", "props"],
    &["hier", "means"],
    &["reg"],
    &["reg", "linear"],
    &["reg", "logistic"],
    &["eval"],
    &["eval", "bf"],
    &["eval", "ppc"],
    &["eval", "sensitivity"],
];

fn golden(path: &[&str]) -> PathBuf {
    let name = if path.is_empty() { "main".to_string() } else { path.join("_") };
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/help").join(format!("{name}.txt"))
}

#[test]
fn help_text_matches_golden() {
    let bless = std::env::var_os("BLESS").is_some();
    let mut stale = Vec::new();
    for path in COMMANDS {
        let out = Command::new(env!("CARGO_BIN_EXE_bayes-primer")).args(*path).arg("--help").output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{path:?}");
        let text = String::from_utf8(out.stdout).unwrap();
        let file = golden(path);
        if bless {
            fs::create_dir_all(file.parent().unwrap()).unwrap();
            fs::write(&file, &text).unwrap();
        } else if fs::read_to_string(&file).ok().as_deref() != Some(text.as_str()) {
            stale.push(file.display().to_string());
        }
    }
    assert!(stale.is_empty(), "help text changed (rerun with BLESS=1): {stale:?}");
}

#[test]
fn every_flag_is_listed() {
    for path in COMMANDS.iter().filter(|p| p.len() == 2) {
        let out = Command::new(env!("CARGO_BIN_EXE_bayes-primer")).args(*path).arg("--help").output().unwrap();
        let text = String::from_utf8(out.stdout).unwrap();
        for flag in ["--seed", "--format", "--output", "--threads", "--help"] {
            assert!(text.contains(flag), "{path:?} help lacks {flag}");
        }
    }
}
