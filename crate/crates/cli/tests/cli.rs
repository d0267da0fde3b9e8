use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

struct Workdir {
    dir: TempDir,
    group: &'static str,
}

impl Workdir {
    fn new(group: &'static str) -> Self {
        Self { dir: tempfile::tempdir().unwrap(), group }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_ltras"))
            .current_dir(self.dir.path())
            .args(["--group", self.group])
            .args(args)
            .output()
            .unwrap()
    }

    fn ok(&self, args: &[&str]) -> Output {
        let out = self.run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        out
    }

    /// Keys k0..k{n-1}, ring, message and statement/witness.
    fn setup(&self, n: usize) {
        let mut keys = Vec::new();
        for i in 0..n {
            let name = format!("k{i}");
            self.ok(&["--seed", &(100 + i).to_string(), "--out", &name, "keygen"]);
            keys.push(name);
        }
        let mut args = vec!["--out", "ring", "ring-build"];
        args.extend(keys.iter().map(String::as_str));
        self.ok(&args);
        fs::write(self.path("msg"), b"pay bob 10").unwrap();
        fs::write(self.path("msg2"), b"pay bob 11").unwrap();
        self.ok(&["--seed", "7", "--out", "stmt", "genr", "--witness-out", "w"]);
    }

    fn presign(&self, out: &str, j: usize, t: usize, msg: &str) {
        let window = format!("{j},{t}");
        let keys: Vec<String> = (j..j + t).map(|i| format!("k{i}")).collect();
        let mut args = vec!["--out", out, "presign", "--ring", "ring", "--window", &window, "--message", msg];
        args.extend(["--statement", "stmt", "--keys"]);
        args.extend(keys.iter().map(String::as_str));
        self.ok(&args);
    }
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn full_flow(group: &'static str) {
    let wd = Workdir::new(group);
    wd.setup(5);
    wd.presign("psig", 1, 3, "msg");

    let out = wd.ok(&["preverify", "psig", "--ring", "ring", "--threshold", "3", "--message", "msg", "--statement", "stmt"]);
    assert_eq!(stdout(&out).trim(), "1");

    wd.ok(&["--out", "sig", "adapt", "psig", "--ring", "ring", "--threshold", "3", "--witness", "w"]);
    let out = wd.ok(&["verify", "sig", "--ring", "ring", "--threshold", "3", "--message", "msg"]);
    assert_eq!(stdout(&out).trim(), "1");

    wd.ok(&["--out", "w_ext", "ext", "psig", "sig", "--ring", "ring", "--threshold", "3", "--statement", "stmt"]);
    assert_eq!(fs::read(wd.path("w_ext")).unwrap(), fs::read(wd.path("w")).unwrap());

    // A second spend from an overlapping window links; a disjoint one does not.
    wd.presign("psig2", 2, 3, "msg2");
    wd.ok(&["--out", "sig2", "adapt", "psig2", "--ring", "ring", "--threshold", "3", "--witness", "w"]);
    let out = wd.ok(&["link", "sig", "sig2", "--ring", "ring", "--threshold", "3"]);
    assert_eq!(stdout(&out).trim(), "1");
    wd.presign("psig3", 4, 1, "msg2");
    wd.ok(&["--out", "sig3", "adapt", "psig3", "--ring", "ring", "--threshold", "1", "--witness", "w"]);
    let out = wd.run(&["link", "sig", "sig3", "--ring", "ring", "--threshold", "3", "--threshold-b", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).trim(), "0");
}

#[test]
fn full_flow_prod() {
    full_flow("prod");
}

#[test]
fn full_flow_toy() {
    full_flow("toy");
}

#[test]
fn false_verdicts_exit_one() {
    let wd = Workdir::new("prod");
    wd.setup(4);
    wd.presign("psig", 0, 2, "msg");
    let out = wd.run(&["preverify", "psig", "--ring", "ring", "--threshold", "2", "--message", "msg2", "--statement", "stmt"]);
    assert_eq!((out.status.code(), stdout(&out).trim().to_owned()), (Some(1), "0".to_owned()));

    wd.ok(&["--out", "sig", "adapt", "psig", "--ring", "ring", "--threshold", "2", "--witness", "w"]);
    let out = wd.run(&["verify", "sig", "--ring", "ring", "--threshold", "2", "--message", "msg2"]);
    assert_eq!(out.status.code(), Some(1));

    // ext on a signature that does not belong to the pre-signature.
    wd.presign("other", 2, 2, "msg");
    let out = wd.run(&["ext", "other", "sig", "--ring", "ring", "--threshold", "2", "--statement", "stmt"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).trim(), "⊥");

    // Adapting with the wrong witness.
    wd.ok(&["--seed", "8", "--out", "stmt2", "genr", "--witness-out", "w2"]);
    wd.ok(&["--out", "bad", "adapt", "psig", "--ring", "ring", "--threshold", "2", "--witness", "w2"]);
    let out = wd.run(&["verify", "bad", "--ring", "ring", "--threshold", "2", "--message", "msg"]);
    assert_eq!(out.status.code(), Some(1));
    let out = wd.run(&["ext", "psig", "bad", "--ring", "ring", "--threshold", "2", "--statement", "stmt"]);
    assert_eq!((out.status.code(), stdout(&out).trim().to_owned()), (Some(1), "⊥".to_owned()));
}

#[test]
fn usage_and_decode_errors_exit_two() {
    let wd = Workdir::new("prod");
    wd.setup(3);
    wd.presign("psig", 0, 2, "msg");

    // Wrong threshold changes the expected length.
    let out = wd.run(&["verify", "psig", "--ring", "ring", "--threshold", "1", "--message", "msg"]);
    assert_eq!(out.status.code(), Some(2));
    // A pre-signature is not a signature.
    let out = wd.run(&["verify", "psig", "--ring", "ring", "--threshold", "2", "--message", "msg"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("decoding"));
    // Toy objects are not production objects.
    let toy = Workdir::new("toy");
    toy.setup(3);
    let out = wd.run(&["verify", toy.path("ring").to_str().unwrap(), "--ring", toy.path("ring").to_str().unwrap(), "--threshold", "1", "--message", "msg"]);
    assert_eq!(out.status.code(), Some(2));

    let bad_window = wd.run(&["presign", "--ring", "ring", "--window", "2,2", "--message", "msg", "--statement", "stmt", "--keys", "k1", "k2"]);
    assert_eq!(bad_window.status.code(), Some(2));
    assert_eq!(wd.run(&["presign", "--ring", "ring"]).status.code(), Some(2));
    assert_eq!(wd.run(&["verify", "missing", "--ring", "ring", "--threshold", "1", "--message", "msg"]).status.code(), Some(2));
    assert_eq!(wd.run(&["frobnicate"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_ltras")).args(["--group", "big", "keygen"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(wd.run(&["--help"]).status.code(), Some(0));
}

#[test]
fn wraparound_needs_flag() {
    let wd = Workdir::new("toy");
    wd.setup(4);
    let base = ["presign", "--ring", "ring", "--window", "3,2", "--message", "msg", "--statement", "stmt", "--keys", "k3", "k0"];
    assert_eq!(wd.run(&base).status.code(), Some(2));
    let mut with_flag = vec!["--out", "psig"];
    with_flag.extend(base);
    with_flag.push("--wraparound");
    wd.ok(&with_flag);
    let out = wd.ok(&["preverify", "psig", "--ring", "ring", "--threshold", "2", "--message", "msg", "--statement", "stmt"]);
    assert_eq!(stdout(&out).trim(), "1");
}

#[test]
fn swap_demo_exit_codes_and_determinism() {
    let wd = Workdir::new("toy");
    let a = wd.ok(&["--seed", "5", "swap-demo"]);
    let b = wd.ok(&["--seed", "5", "swap-demo"]);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.lines().last().unwrap().contains("\"final_phase\":\"AliceClaimed\""));

    let out = wd.run(&["--seed", "5", "swap-demo", "--fault", "abort-after-3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("\"outcome\":\"NeitherConfirmed\""));
    assert_eq!(wd.run(&["swap-demo", "--fault", "explode"]).status.code(), Some(2));
}

#[test]
fn bench_csv_sizes() {
    let wd = Workdir::new("prod");
    let out = wd.ok(&["--seed", "1", "bench", "--sizes", "10,20", "--reps", "10"]);
    let csv = stdout(&out);
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "algorithm,n,t,mean_ns,reps,bytes,ours_formula_bytes,baseline_formula_bytes");
    let presign10: Vec<&str> = csv.lines().find(|l| l.starts_with("presign,10,")).unwrap().split(',').collect();
    assert_eq!(presign10[2], "5");
    assert_eq!(presign10[5], "512");
    assert_eq!(presign10[4], "10");
    let presign20: Vec<&str> = csv.lines().find(|l| l.starts_with("presign,20,")).unwrap().split(',').collect();
    assert_eq!(presign20[5], (21 * 32 + 10 * 32).to_string());
    assert_eq!(wd.run(&["bench", "--reps", "3"]).status.code(), Some(2));
}

#[test]
fn ring_build_accepts_public_keys_only_in_order() {
    let wd = Workdir::new("toy");
    wd.setup(3);
    wd.ok(&["--out", "ring_rev", "ring-build", "k2", "k1", "k0"]);
    assert_ne!(fs::read(wd.path("ring")).unwrap(), fs::read(wd.path("ring_rev")).unwrap());
    assert_eq!(wd.run(&["ring-build", "k0", "k0"]).status.code(), Some(2));
    assert_eq!(wd.run(&["ring-build", "stmt"]).status.code(), Some(2));
    assert!(Path::new(&wd.path("ring")).exists());
}
