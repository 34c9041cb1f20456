//! Command-line front end. [`run`] returns the process exit code:
//! 0 success, 2 decryption failure (⊥), 3 malformed input or I/O error,
//! 4 usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::algebra::BitVec;
use crate::cca2::{self, Cca2Config, VkMode};
use crate::correlated::{self, CorCca2Config, CorrelatedParams};
use crate::harness::{self, code_sizes};
use crate::mceliece::{self, McElieceParams, Theta};
use crate::ots::{HashKind, OtsParams};
use crate::repetition::RepCiphertext;
use crate::wire::{self, Kind, WireError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BOTTOM: i32 = 2;
pub const EXIT_MALFORMED: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "krmce", version, about = "McEliece-based IND-CCA2 encryption toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Plaintext and ciphertext bit sizes for (m, t); the reference rows when omitted.
    Params {
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        t: Option<usize>,
    },
    /// Generate a key pair, writing <out>.pk and <out>.sk.
    Keygen {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Encrypt a message file under a public key file.
    Encrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        theta: ThetaArgs,
    },
    /// Decrypt a ciphertext file with a secret key file.
    Decrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a named security experiment and print `name trials wins advantage ci95`.
    Experiment {
        name: String,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Scheme {
    Plain,
    Cca2,
    Cor,
}

#[derive(Args, Debug)]
struct ThetaArgs {
    /// Bernoulli error rate numerator (default θ = 3t/4n).
    #[arg(long = "theta-num", requires = "theta_den")]
    theta_num: Option<u64>,
    #[arg(long = "theta-den", requires = "theta_num")]
    theta_den: Option<u64>,
}

#[derive(Args, Debug)]
struct Shape {
    #[arg(long, value_enum, default_value_t = Scheme::Plain)]
    scheme: Scheme,
    #[arg(long, default_value_t = 4)]
    m: u32,
    #[arg(long, default_value_t = 2)]
    t: usize,
    #[arg(long, default_value_t = 8)]
    k: usize,
    #[arg(long, default_value_t = 3)]
    q: u32,
    #[arg(long, default_value_t = 5)]
    tau: usize,
    #[arg(long = "ots-lambda", default_value_t = 256)]
    ots_lambda: usize,
    #[arg(long = "ots-w", default_value_t = 256)]
    ots_w: usize,
    #[command(flatten)]
    theta: ThetaArgs,
}

enum Failure {
    Bottom,
    Malformed(String),
    Usage(String),
}

impl From<WireError> for Failure {
    fn from(e: WireError) -> Self {
        Failure::Malformed(e.to_string())
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> CmdResult {
    fs::write(path, bytes).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn rng_for(seed: Option<u64>) -> ChaCha20Rng {
    match seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_entropy(),
    }
}

fn apply_theta(p: McElieceParams, t: &ThetaArgs) -> std::result::Result<McElieceParams, Failure> {
    match (t.theta_num, t.theta_den) {
        (Some(n), Some(d)) => Ok(p.with_theta(Theta::new(n, d)?)?),
        _ => Ok(p),
    }
}

fn with_suffix(base: &Path, ext: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// A message file holds exactly `⌈bits/8⌉` bytes, unused low bits zero.
fn read_message(path: &Path, bits: usize) -> std::result::Result<BitVec, Failure> {
    let bytes = read(path)?;
    if bytes.len() != bits.div_ceil(8) {
        return Err(Failure::Malformed(format!(
            "message must be {} bytes for {bits} bits, found {}",
            bits.div_ceil(8),
            bytes.len()
        )));
    }
    BitVec::from_bytes(&bytes, bits).ok_or_else(|| Failure::Malformed("message sets bits beyond its length".into()))
}

fn cmd_params(m: Option<u32>, t: Option<usize>, out: &mut dyn Write) -> CmdResult {
    let rows = match (m, t) {
        (Some(m), Some(t)) => vec![(m, t)],
        (None, None) => vec![(10, 50), (11, 32), (12, 40)],
        _ => return Err(Failure::Usage("--m and --t go together".into())),
    };
    for (m, t) in rows {
        let (l, n) = code_sizes(m, t)?;
        writeln!(out, "m={m} t={t} plaintext={l} ciphertext={n}").map_err(|e| Failure::Malformed(e.to_string()))?;
    }
    Ok(())
}

fn cmd_keygen(shape: &Shape, seed: Option<u64>, out: &Path) -> CmdResult {
    let base = apply_theta(McElieceParams::new(shape.m, shape.t)?, &shape.theta)?;
    let mut rng = rng_for(seed);
    let ots = OtsParams::new(shape.ots_lambda, shape.ots_w, HashKind::from_env())?;
    let (pk, sk) = match shape.scheme {
        Scheme::Plain => {
            let (pk, sk) = mceliece::keygen(&base, &mut rng)?;
            (wire::encode_mceliece_pk(&pk), wire::encode_mceliece_sk(&sk))
        }
        Scheme::Cca2 => {
            let cfg = Cca2Config::new(base, shape.k, ots, VkMode::Compressed)?;
            let kp = cca2::gen_cca2(&cfg, &mut rng)?;
            (wire::encode_cca2_pk(&kp.pk), wire::encode_cca2_sk(&kp.sk))
        }
        Scheme::Cor => {
            let cor = CorrelatedParams::new(shape.q, shape.k, shape.tau, base)?;
            let cfg = CorCca2Config::new(cor, ots, VkMode::Compressed)?;
            let kp = correlated::gen_cor_cca2(&cfg, &mut rng)?;
            (wire::encode_cor_pk(&kp.pk), wire::encode_cor_sk(&kp.sk))
        }
    };
    write(&with_suffix(out, "pk"), &pk)?;
    write(&with_suffix(out, "sk"), &sk)
}

fn cmd_encrypt(key: &Path, input: &Path, out: &Path, seed: Option<u64>, theta: &ThetaArgs) -> CmdResult {
    let bytes = read(key)?;
    let hash = HashKind::from_env();
    let mut rng = rng_for(seed);
    let ct = match wire::read_header(&bytes)?.kind {
        Kind::McEliecePk => {
            let pk = wire::decode_mceliece_pk(&bytes)?;
            let p = apply_theta(*pk.params(), theta)?;
            let pk = pk.with_params(p)?;
            let m = read_message(input, p.msg_len())?;
            let s = BitVec::random(p.pad_len(), &mut rng);
            let c = pk.encrypt(&p.encode_randomized(&m, &s)?, &mut rng)?;
            wire::encode_rep_ct(&p, &RepCiphertext { comps: vec![c] })
        }
        Kind::Cca2Pk => {
            let mut pk = wire::decode_cca2_pk(&bytes, hash)?;
            let p = apply_theta(pk.config.mcel, theta)?;
            pk.config.mcel = p;
            pk.pks = pk.pks.into_iter().map(|k| k.with_params(p)).collect::<crate::Result<_>>()?;
            let m = read_message(input, p.msg_len())?;
            let c = cca2::enc_cca2(&pk, &m, &mut rng)?;
            wire::encode_cca2_ct(&pk.config, &c)
        }
        Kind::CorPk => {
            let mut pk = wire::decode_cor_pk(&bytes, hash)?;
            let p = apply_theta(*pk.config.cor.mcel(), theta)?;
            pk.config.cor = pk.config.cor.with_mcel(p)?;
            let p = *pk.config.cor.mcel();
            pk.pks = pk.pks.into_iter().map(|k| k.with_params(p)).collect::<crate::Result<_>>()?;
            let m = read_message(input, pk.config.cor.msg_bits())?;
            let c = correlated::enc_cor_cca2(&pk, &m, &mut rng)?;
            wire::encode_cor_ct(&pk.config.cor, &c)
        }
        other => return Err(Failure::Malformed(format!("{other:?} is not a public key"))),
    };
    write(out, &ct)
}

fn same_shape(a: &McElieceParams, b: &McElieceParams) -> bool {
    (a.m(), a.t(), a.pad_len()) == (b.m(), b.t(), b.pad_len())
}

fn cmd_decrypt(key: &Path, input: &Path, out: &Path) -> CmdResult {
    let kb = read(key)?;
    let cb = read(input)?;
    let hash = HashKind::from_env();
    let (m, bits) = match wire::read_header(&kb)?.kind {
        Kind::McElieceSk => {
            let sk = wire::decode_mceliece_sk(&kb)?;
            let (p, c) = wire::decode_rep_ct(&cb)?;
            if !same_shape(&p, sk.params()) || c.k() != 1 {
                return Err(Failure::Malformed("ciphertext does not match key".into()));
            }
            let m = sk.decrypt(&c.comps[0]).and_then(|x| p.decode_randomized(&x).ok());
            (m, p.msg_len())
        }
        Kind::Cca2Sk => {
            let sk = wire::decode_cca2_sk(&kb, hash)?;
            let (p, c) = wire::decode_cca2_ct(&cb, hash)?;
            if !same_shape(&p, &sk.config.mcel) || c.c_prime.k() != sk.config.k {
                return Err(Failure::Malformed("ciphertext does not match key".into()));
            }
            (cca2::dec_cca2(&sk, &c), p.msg_len())
        }
        Kind::CorSk => {
            let sk = wire::decode_cor_sk(&kb, hash)?;
            let (p, c) = wire::decode_cor_ct(&cb, hash)?;
            if p != sk.config.cor {
                return Err(Failure::Malformed("ciphertext does not match key".into()));
            }
            (correlated::dec_cor_cca2(&sk, &c), p.msg_bits())
        }
        other => return Err(Failure::Malformed(format!("{other:?} is not a secret key"))),
    };
    let m = m.ok_or(Failure::Bottom)?;
    debug_assert_eq!(m.len(), bits);
    write(out, &m.to_bytes())
}

fn cmd_experiment(name: &str, trials: Option<usize>, seed: u64, out: &mut dyn Write) -> CmdResult {
    if !harness::NAMES.contains(&name) {
        return Err(Failure::Usage(format!(
            "unknown experiment {name:?}; known: {}",
            harness::NAMES.join(", ")
        )));
    }
    let report = harness::run_named(name, trials, seed)?;
    writeln!(out, "{report}").map_err(|e| Failure::Malformed(e.to_string()))
}

/// Parses `args` (including the program name) and runs one command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(stderr, "{text}") } else { write!(stdout, "{text}") };
            return code;
        }
    };
    let result = match &cli.cmd {
        Command::Params { m, t } => cmd_params(*m, *t, stdout),
        Command::Keygen { shape, seed, out } => cmd_keygen(shape, *seed, out),
        Command::Encrypt { key, input, out, seed, theta } => cmd_encrypt(key, input, out, *seed, theta),
        Command::Decrypt { key, input, out } => cmd_decrypt(key, input, out),
        Command::Experiment { name, trials, seed } => cmd_experiment(name, *trials, *seed, stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Bottom) => {
            let _ = writeln!(stderr, "BOTTOM");
            EXIT_BOTTOM
        }
        Err(Failure::Malformed(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_MALFORMED
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "usage error: {msg}");
            EXIT_USAGE
        }
    }
}
