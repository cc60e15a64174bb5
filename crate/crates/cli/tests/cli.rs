use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

struct Env {
    dir: TempDir,
}

impl Env {
    fn new() -> Self {
        Env { dir: TempDir::new().unwrap() }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_zetadim"))
            .args(args)
            .env("ZETADIM_CACHE_DIR", self.path("cache"))
            .env_remove("RUST_LOG")
            .current_dir(self.dir.path())
            .output()
            .unwrap()
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn value(text: &str, key: &str) -> f64 {
    let line = text.lines().find(|l| l.starts_with(key)).unwrap_or_else(|| panic!("no `{key}` in\n{text}"));
    line[key.len()..].trim().parse().unwrap()
}

fn data_lines(p: &Path) -> Vec<String> {
    fs::read_to_string(p).unwrap().lines().filter(|l| !l.is_empty()).map(str::to_string).collect()
}

fn checksum(o: &Output) -> String {
    stdout(o).lines().find_map(|l| l.strip_prefix("sha256=")).unwrap().to_string()
}

#[test]
fn generate_primes_to_100() {
    let env = Env::new();
    let out = env.path("p.csv");
    let o = env.run(&["generate", "primes", "--limit", "100", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let lines = data_lines(&out);
    assert_eq!(lines.len(), 25);
    assert_eq!(lines.first().unwrap(), "2");
    assert_eq!(lines.last().unwrap(), "97");
    assert!(env.path("p.csv.meta").exists());
}

#[test]
fn generate_super_primes_to_100() {
    let env = Env::new();
    let out = env.path("sp.csv");
    let o = env.run(&["generate", "superprimes", "--limit", "100", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let got: Vec<String> = data_lines(&out);
    assert_eq!(got, ["3", "5", "11", "17", "31", "41", "59", "67", "83"]);
}

#[test]
fn repeat_generate_hits_cache_with_same_checksum() {
    let env = Env::new();
    let first = env.run(&["generate", "primes", "--limit", "1000", "--out", "a.csv"]);
    let second = env.run(&["generate", "primes", "--limit", "1000", "--out", "b.csv"]);
    assert!(stdout(&first).starts_with("generated"));
    assert!(stdout(&second).starts_with("cache hit"));
    assert_eq!(checksum(&first), checksum(&second));
    assert_eq!(fs::read(env.path("a.csv")).unwrap(), fs::read(env.path("b.csv")).unwrap());
}

#[test]
fn corrupted_cache_entry_is_regenerated() {
    let env = Env::new();
    let first = env.run(&["generate", "primes", "--limit", "200", "--out", "a.csv"]);
    let entry = fs::read_dir(env.path("cache"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|x| x == "csv"))
        .unwrap();
    fs::write(&entry, "4\n6\n").unwrap();
    let second = env.run(&["generate", "primes", "--limit", "200", "--out", "b.csv"]);
    assert!(stdout(&second).starts_with("generated"), "{}", stdout(&second));
    assert_eq!(checksum(&first), checksum(&second));
    assert_eq!(data_lines(&env.path("b.csv")).len(), 46);
}

#[test]
fn jsonl_output_round_trips() {
    let env = Env::new();
    let o = env.run(&["generate", "gaussian", "--radius", "40", "--out", "g.jsonl"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let lines = data_lines(&env.path("g.jsonl"));
    assert!(lines.iter().all(|l| l.starts_with('[') && l.ends_with(']')));
    let e = env.run(&["estimate", "g.jsonl", "--ladder", "2:32"]);
    assert!(e.status.success(), "{}", stderr(&e));
}

#[test]
fn squares_zeta_estimate_is_near_one_half() {
    let env = Env::new();
    let text: String = (1..=2000u64).map(|n| format!("{}\n", n * n)).collect();
    fs::write(env.path("sq.csv"), text).unwrap();
    let o = env.run(&["estimate", "sq.csv", "--mode", "zeta", "--plot", "plot.txt", "--out", "table.txt"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    let upper = value(&s, "upper ");
    assert!((upper - 0.5).abs() < 0.05, "upper {upper}");
    assert_eq!(fs::read_to_string(env.path("table.txt")).unwrap(), s);
    let plot = data_lines(&env.path("plot.txt"));
    assert!(plot.len() >= 4);
    assert!(plot.iter().all(|l| l.split_whitespace().count() == 2));
}

#[test]
fn abscissa_on_integers_is_near_one() {
    let env = Env::new();
    env.run(&["generate", "lattice", "--dim", "1", "--radius", "20000", "--out", "z.csv"]);
    let o = env.run(&["estimate", "z.csv", "--mode", "abscissa"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let a = value(&stdout(&o), "abscissa ");
    assert!((a - 1.0).abs() <= 0.1, "abscissa {a}");
}

#[test]
fn box_and_assouad_modes_run() {
    let env = Env::new();
    env.run(&["generate", "lattice", "--dim", "2", "--radius", "20", "--out", "z2.csv"]);
    let b = env.run(&["estimate", "z2.csv", "--mode", "box", "--ladder", "16:0.25"]);
    assert!(b.status.success(), "{}", stderr(&b));
    let upper = value(&stdout(&b), "upper ");
    assert!(upper > 1.0 && upper <= 2.0, "{upper}");
    let a = env.run(&["estimate", "z2.csv", "--mode", "assouad", "--seed", "3"]);
    assert!(a.status.success(), "{}", stderr(&a));
    let c = value(&stdout(&a), "assouad_certificate ");
    assert!(c >= 1.9, "{c}");
}

#[test]
fn empty_input_exits_with_data_error() {
    let env = Env::new();
    fs::write(env.path("empty.csv"), "").unwrap();
    let o = env.run(&["estimate", "empty.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("empty set"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let env = Env::new();
    let o = env.run(&["estimate", "x.csv", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn malformed_ladder_is_a_usage_error() {
    let env = Env::new();
    env.run(&["generate", "primes", "--limit", "100", "--out", "p.csv"]);
    let o = env.run(&["estimate", "p.csv", "--ladder", "1-8"]);
    assert_eq!(o.status.code(), Some(64), "{}", stderr(&o));
}

#[test]
fn patch_on_primes_finds_a_verifiable_witness() {
    let env = Env::new();
    env.run(&["generate", "primes", "--limit", "1000", "--out", "p.csv"]);
    let o = env.run(&["patch", "p.csv", "--k", "3", "--eps", "0.1", "--out", "w.csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("found"));
    let v = env.run(&["verify", "w.csv", "p.csv"]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
}

#[test]
fn verify_rejects_a_tampered_witness() {
    let env = Env::new();
    env.run(&["generate", "primes", "--limit", "1000", "--out", "p.csv"]);
    env.run(&["patch", "p.csv", "--k", "3", "--eps", "0", "--out", "w.csv"]);
    let text = fs::read_to_string(env.path("w.csv")).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let last = lines.len() - 1;
    lines[last] = "997".to_string();
    fs::write(env.path("w.csv"), lines.join("\n")).unwrap();
    let v = env.run(&["verify", "w.csv", "p.csv"]);
    assert_eq!(v.status.code(), Some(1));
}

#[test]
fn patch_not_found_exits_one() {
    let env = Env::new();
    fs::write(env.path("pow.csv"), "1\n10\n100\n1000\n10000\n").unwrap();
    let o = env.run(&["patch", "pow.csv", "--k", "3", "--eps", "0.01"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("not found"));
}

#[test]
fn report_contrasts_integers_and_squares() {
    let env = Env::new();
    env.run(&["generate", "lattice", "--radius", "20000", "--out", "z.csv"]);
    let z = env.run(&["report", "z.csv", "--k", "3", "--eps", "0.1"]);
    assert!(z.status.success(), "{}", stderr(&z));
    assert!(stdout(&z).contains("condition supported; witness found"));
    let text: String = (1..=1000u64).map(|n| format!("{}\n", n * n)).collect();
    fs::write(env.path("sq.csv"), text).unwrap();
    let s = env.run(&["report", "sq.csv", "--k", "3", "--eps", "0.1"]);
    assert!(s.status.success(), "{}", stderr(&s));
    assert!(stdout(&s).contains("condition not supported"));
}

#[test]
fn report_requires_k_and_eps() {
    let env = Env::new();
    env.run(&["generate", "primes", "--limit", "100", "--out", "p.csv"]);
    assert_eq!(env.run(&["report", "p.csv"]).status.code(), Some(64));
}

#[test]
fn output_is_deterministic() {
    let env = Env::new();
    env.run(&["generate", "primes", "--limit", "2000", "--out", "p.csv"]);
    for args in [
        vec!["estimate", "p.csv"],
        vec!["estimate", "p.csv", "--mode", "assouad", "--seed", "9"],
        vec!["patch", "p.csv", "--k", "4", "--eps", "0.05"],
        vec!["report", "p.csv", "--k", "3", "--eps", "0.2"],
    ] {
        let a = env.run(&args);
        let b = env.run(&args);
        assert_eq!(stdout(&a), stdout(&b), "{args:?}");
    }
}

#[test]
fn flags_override_config_which_overrides_defaults() {
    let env = Env::new();
    let text: String = (1..=2000u64).map(|n| format!("{}\n", n * n)).collect();
    fs::write(env.path("sq.csv"), text).unwrap();
    fs::write(env.path("cfg.conf"), "# settings\nwindow = 5\nmode=zeta\n").unwrap();
    let from_config = stdout(&env.run(&["--config", "cfg.conf", "estimate", "sq.csv"]));
    assert!(from_config.contains("# window 5"), "{from_config}");
    let from_flag = stdout(&env.run(&["--config", "cfg.conf", "estimate", "sq.csv", "--window", "3"]));
    assert!(from_flag.contains("# window 3"));
    let default = stdout(&env.run(&["estimate", "sq.csv"]));
    assert!(default.contains("# window 3"));
}

#[test]
fn cache_dir_flag_beats_environment() {
    let env = Env::new();
    let flag_dir = env.path("elsewhere");
    let o = env.run(&["--cache-dir", flag_dir.to_str().unwrap(), "cache", "path"]);
    assert_eq!(stdout(&o).trim(), flag_dir.to_str().unwrap());
    let o = env.run(&["cache", "path"]);
    assert_eq!(stdout(&o).trim(), env.path("cache").to_str().unwrap());
}

#[test]
fn cache_list_and_clear() {
    let env = Env::new();
    env.run(&["generate", "primes", "--limit", "100", "--out", "p.csv"]);
    env.run(&["generate", "superprimes", "--limit", "100", "--out", "s.csv"]);
    let list = stdout(&env.run(&["cache", "list"]));
    assert_eq!(list.lines().count(), 2);
    assert!(list.contains("superprimes limit=100 9 "));
    assert!(stdout(&env.run(&["cache", "clear"])).contains("removed 2"));
    assert_eq!(stdout(&env.run(&["cache", "list"])).lines().count(), 0);
}

#[test]
fn non_orthonormal_orientation_is_rejected() {
    let env = Env::new();
    env.run(&["generate", "lattice", "--dim", "2", "--radius", "10", "--out", "z2.csv"]);
    let o = env.run(&["patch", "z2.csv", "--k", "3", "--eps", "0.1", "--orientation", "1,1"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("unit vector"), "{}", stderr(&o));
    let ok = env.run(&["patch", "z2.csv", "--k", "3", "--eps", "0.1", "--orientation", "0.6,0.8"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
}

#[test]
fn powers_of_two_contain_a_loose_progression() {
    // 1024, 65536, 131072 lie within 0.01·65024 of 1024 + {0, 1, 2}·65024
    let env = Env::new();
    let text: String = (10..=30).map(|n| format!("{}\n", 1u64 << n)).collect();
    fs::write(env.path("pow2.csv"), text).unwrap();
    let o = env.run(&["patch", "pow2.csv", "--k", "3", "--eps", "0.01", "--out", "w.csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(env.run(&["verify", "w.csv", "pow2.csv"]).status.code(), Some(0));
}
