use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use krmce::cli::{self, EXIT_BOTTOM, EXIT_MALFORMED, EXIT_OK, EXIT_USAGE};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("krmce").chain(args.iter().copied()), &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Setup {
    _dir: tempfile::TempDir,
    root: PathBuf,
}

impl Setup {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().to_path_buf();
        Setup { _dir: dir, root }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    fn keygen(&self, extra: &[&str]) -> (PathBuf, PathBuf) {
        let base = self.path("key");
        let mut args = vec!["keygen", "--seed", "11", "--out", s(&base)];
        args.extend_from_slice(extra);
        let r = run(&args);
        assert_eq!(r.code, EXIT_OK, "{}", r.err);
        (self.path("key.pk"), self.path("key.sk"))
    }
}

const LOW_THETA: [&str; 4] = ["--theta-num", "1", "--theta-den", "256"];
const SMALL_OTS: [&str; 4] = ["--ots-lambda", "32", "--ots-w", "64"];

fn round_trip(extra: &[&str], msg: &[u8]) {
    let st = Setup::new();
    let (pk, sk) = st.keygen(extra);
    let (m, c, back) = (st.path("m"), st.path("c"), st.path("back"));
    fs::write(&m, msg).unwrap();
    let mut enc = vec!["encrypt", "--key", s(&pk), "--in", s(&m), "--out", s(&c), "--seed", "3"];
    enc.extend_from_slice(&LOW_THETA);
    assert_eq!(run(&enc).code, EXIT_OK);
    let r = run(&["decrypt", "--key", s(&sk), "--in", s(&c), "--out", s(&back)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(fs::read(&back).unwrap(), msg);
}

#[test]
fn plain_round_trip() {
    // (4,2): l = 8 with a 4-bit pad leaves a 4-bit message in the high nibble.
    round_trip(&[], &[0xA0]);
    round_trip(&["--m", "6", "--t", "3"], &[0x5A, 0xC3, 0x70]);
}

#[test]
fn cca2_round_trip() {
    round_trip(&["--scheme", "cca2"], &[0x90]);
    let mut args = vec!["--scheme", "cca2", "--k", "4"];
    args.extend_from_slice(&SMALL_OTS);
    round_trip(&args, &[0x30]);
}

#[test]
fn cor_round_trip() {
    // τ·q = 15 message bits.
    let mut args = vec!["--scheme", "cor"];
    args.extend_from_slice(&SMALL_OTS);
    round_trip(&args, &[0xDE, 0xAC]);
}

#[test]
fn message_file_is_bit_exact() {
    let st = Setup::new();
    let (pk, _) = st.keygen(&[]);
    let (m, c) = (st.path("m"), st.path("c"));
    for bad in [&[0x0F][..], &[0xA0, 0x00], &[]] {
        fs::write(&m, bad).unwrap();
        let r = run(&["encrypt", "--key", s(&pk), "--in", s(&m), "--out", s(&c)]);
        assert_eq!(r.code, EXIT_MALFORMED, "{bad:?}");
    }
}

#[test]
fn seeded_commands_are_reproducible() {
    let st = Setup::new();
    let (pk, sk) = st.keygen(&["--scheme", "cca2", "--ots-lambda", "16", "--ots-w", "16"]);
    let pk1 = fs::read(&pk).unwrap();
    let sk1 = fs::read(&sk).unwrap();
    st.keygen(&["--scheme", "cca2", "--ots-lambda", "16", "--ots-w", "16"]);
    assert_eq!(fs::read(&pk).unwrap(), pk1);
    assert_eq!(fs::read(&sk).unwrap(), sk1);

    let m = st.path("m");
    fs::write(&m, [0x50]).unwrap();
    let cts: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let c = st.path(&format!("c{i}"));
            assert_eq!(run(&["encrypt", "--key", s(&pk), "--in", s(&m), "--out", s(&c), "--seed", "5"]).code, 0);
            fs::read(c).unwrap()
        })
        .collect();
    assert_eq!(cts[0], cts[1]);
}

#[test]
fn flipped_ciphertext_bytes_never_decrypt() {
    let st = Setup::new();
    let mut args = vec!["--scheme", "cca2"];
    args.extend_from_slice(&SMALL_OTS);
    let (pk, sk) = st.keygen(&args);
    let (m, c, out) = (st.path("m"), st.path("c"), st.path("out"));
    fs::write(&m, [0xC0]).unwrap();
    let mut enc = vec!["encrypt", "--key", s(&pk), "--in", s(&m), "--out", s(&c), "--seed", "8"];
    enc.extend_from_slice(&LOW_THETA);
    assert_eq!(run(&enc).code, 0);
    assert_eq!(run(&["decrypt", "--key", s(&sk), "--in", s(&c), "--out", s(&out)]).code, 0);

    let good = fs::read(&c).unwrap();
    let tampered = st.path("t");
    let mut bottoms = 0;
    for i in 0..good.len() {
        let mut bytes = good.clone();
        bytes[i] ^= 1 << (i % 8);
        fs::write(&tampered, &bytes).unwrap();
        let r = run(&["decrypt", "--key", s(&sk), "--in", s(&tampered), "--out", s(&out)]);
        assert!(r.code == EXIT_BOTTOM || r.code == EXIT_MALFORMED, "byte {i}: exit {}", r.code);
        if r.code == EXIT_BOTTOM {
            assert_eq!(r.err.trim(), "BOTTOM");
            bottoms += 1;
        }
    }
    // Structural bytes: 36 header, component count and eight lengths, then
    // λ and w for both vk and σ. Everything else is data and must give ⊥.
    let structural = 36 + 4 + 8 * 4 + 8 + 8;
    assert_eq!(bottoms, good.len() - structural);
    let last = good.len() - 1;
    let mut bytes = good.clone();
    bytes[last] ^= 0x80;
    fs::write(&tampered, &bytes).unwrap();
    assert_eq!(run(&["decrypt", "--key", s(&sk), "--in", s(&tampered), "--out", s(&out)]).code, EXIT_BOTTOM);
}

#[test]
fn malformed_inputs() {
    let st = Setup::new();
    let (pk, sk) = st.keygen(&[]);
    let (m, c, out) = (st.path("m"), st.path("c"), st.path("out"));
    fs::write(&m, [0x10]).unwrap();
    assert_eq!(run(&["encrypt", "--key", s(&pk), "--in", s(&m), "--out", s(&c)]).code, 0);

    // Key roles swapped, truncated and extended files, missing files.
    assert_eq!(run(&["decrypt", "--key", s(&pk), "--in", s(&c), "--out", s(&out)]).code, EXIT_MALFORMED);
    assert_eq!(run(&["encrypt", "--key", s(&sk), "--in", s(&m), "--out", s(&c)]).code, EXIT_MALFORMED);
    let ct = fs::read(&c).unwrap();
    for bytes in [ct[..ct.len() - 1].to_vec(), [ct.as_slice(), &[0]].concat(), b"KRMCE2\0\0".to_vec()] {
        fs::write(st.path("bad"), bytes).unwrap();
        let r = run(&["decrypt", "--key", s(&sk), "--in", s(&st.path("bad")), "--out", s(&out)]);
        assert_eq!(r.code, EXIT_MALFORMED);
    }
    let missing = st.path("missing");
    assert_eq!(run(&["decrypt", "--key", s(&missing), "--in", s(&c), "--out", s(&out)]).code, EXIT_MALFORMED);

    // A ciphertext for a different key shape.
    let other = st.path("other");
    assert_eq!(run(&["keygen", "--m", "5", "--t", "2", "--seed", "1", "--out", s(&other)]).code, 0);
    let r = run(&["decrypt", "--key", s(&st.path("other.sk")), "--in", s(&c), "--out", s(&out)]);
    assert_eq!(r.code, EXIT_MALFORMED);
}

#[test]
fn usage_errors() {
    let st = Setup::new();
    let base = st.path("k");
    for args in [
        &["keygen", "--m", "4", "--t", "4", "--out", s(&base)][..],
        &["keygen", "--m", "1", "--t", "2", "--out", s(&base)],
        &["keygen", "--theta-num", "1", "--theta-den", "8", "--out", s(&base)],
        &["keygen", "--scheme", "cor", "--k", "9", "--out", s(&base)],
        &["keygen", "--scheme", "cca2", "--k", "0", "--out", s(&base)],
        &["experiment", "unknown"],
        &["encrypt", "--key", "x"],
        &["params", "--t", "5"],
    ] {
        assert_eq!(run(args).code, EXIT_USAGE, "{args:?}");
    }
    assert!(!st.path("k.pk").exists());
}

#[test]
fn experiment_prints_report_line() {
    let r = run(&["experiment", "cpa-random-guess", "--trials", "200", "--seed", "4"]);
    assert_eq!(r.code, 0);
    let fields: Vec<&str> = r.out.split_whitespace().collect();
    assert_eq!(fields.len(), 5, "{}", r.out);
    assert_eq!(fields[0], "cpa-random-guess");
    assert_eq!(fields[1], "200");
    assert_eq!(fields[4], "0.069296");
    assert_eq!(r.out, run(&["experiment", "cpa-random-guess", "--trials", "200", "--seed", "4"]).out);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_krmce");
    let st = Setup::new();
    let (pk, sk) = st.keygen(&[]);

    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    assert_eq!(status(&["--help"]).status.code(), Some(EXIT_OK));
    assert_eq!(status(&["bogus"]).status.code(), Some(EXIT_USAGE));
    let o = status(&["params", "--m", "4", "--t", "2"]);
    assert_eq!(String::from_utf8_lossy(&o.stdout), "m=4 t=2 plaintext=8 ciphertext=16\n");

    // A random word is far from the code with high probability; try until one fails.
    let (m, c, out) = (st.path("m"), st.path("c"), st.path("out"));
    fs::write(&m, [0x20]).unwrap();
    assert_eq!(run(&["encrypt", "--key", s(&pk), "--in", s(&m), "--out", s(&c), "--seed", "1"]).code, 0);
    let ct = fs::read(&c).unwrap();
    let mut saw_bottom = false;
    for round in 0u8..32 {
        let mut bytes = ct.clone();
        let n = bytes.len();
        bytes[n - 2] ^= round.wrapping_mul(37) | 1;
        bytes[n - 1] ^= round.wrapping_mul(91);
        fs::write(&c, &bytes).unwrap();
        let o = status(&["decrypt", "--key", s(&sk), "--in", s(&c), "--out", s(&out)]);
        if o.status.code() == Some(EXIT_BOTTOM) {
            assert_eq!(String::from_utf8_lossy(&o.stderr).trim(), "BOTTOM");
            saw_bottom = true;
            break;
        }
    }
    assert!(saw_bottom);
}
