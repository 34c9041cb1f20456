//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints exactly one PASS/FAIL line.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use krmce::algebra::{BitVec, Gf};
use krmce::cca2::{self, Cca2Config, Cca2Ciphertext, VkMode};
use krmce::cli;
use krmce::correlated::{self, rs_encode, rs_erasure_decode, CorCca2Config, CorrelatedParams};
use krmce::goppa::GoppaCode;
use krmce::harness::{exact_tail, run_named, trial_rng, BitFlip, LpnOracle};
use krmce::mceliece::{self, McElieceParams, Theta};
use krmce::ots::{self, HashKind, OtsParams, Signature};
use krmce::repetition::{self, RepCiphertext};
use krmce::wire;
use krmce::Error;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("krmce").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned())
}

fn c1_sizes() -> Outcome {
    let (code, out) = run_cli(&["params"]);
    ensure(code == 0, || format!("exit {code}"))?;
    let want = [(10, 50, 524, 1024), (11, 32, 1696, 2048), (12, 40, 3616, 4096)];
    let lines: Vec<&str> = out.lines().collect();
    ensure(lines.len() == want.len(), || format!("{} rows", lines.len()))?;
    for (line, (m, t, l, n)) in lines.iter().zip(want) {
        let expect = format!("m={m} t={t} plaintext={l} ciphertext={n}");
        ensure(*line == expect, || format!("{line:?} != {expect:?}"))?;
    }
    Ok("3 rows exact".into())
}

/// All weight ≤ t patterns of length n.
fn low_weight_patterns(n: usize, t: usize) -> Vec<BitVec> {
    let mut out = vec![BitVec::zeros(n)];
    let mut frontier = out.clone();
    for _ in 0..t {
        let mut next = Vec::new();
        for e in &frontier {
            let start = e.iter_ones().last().map_or(0, |j| j + 1);
            for j in start..n {
                let mut f = e.clone();
                f.set(j, true);
                next.push(f);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn c2_exhaustive_decoding() -> Outcome {
    let code = GoppaCode::generate(4, 2, &mut rng(2)).map_err(|e| e.to_string())?;
    let errors = low_weight_patterns(16, 2);
    ensure(errors.len() == 137, || format!("{} patterns", errors.len()))?;
    ensure(code.dimension() == 8, || format!("dimension {}", code.dimension()))?;
    let mut failures = 0usize;
    for x in 0u32..256 {
        let msg = BitVec::from_bools(&(0..8).map(|i| x >> (7 - i) & 1 == 1).collect::<Vec<_>>());
        let cw = code.encode(&msg);
        for e in &errors {
            let y = cw.xor(e);
            let ok = code.decode(&y).as_ref() == Some(e) && code.extract_message(&y.xor(e)) == msg;
            failures += !ok as usize;
        }
    }
    ensure(failures == 0, || format!("{failures} failures"))?;
    Ok("256 x 137 decoded, 0 failures".into())
}

fn c3_completeness() -> Outcome {
    let p = McElieceParams::new(8, 10).map_err(|e| e.to_string())?;
    let (pk, sk) = mceliece::keygen(&p, &mut rng(3)).map_err(|e| e.to_string())?;
    let trials = 10_000u64;
    let failures = (0..trials)
        .into_par_iter()
        .filter(|&i| {
            let mut r = trial_rng(3, i);
            let m = BitVec::random(p.msg_len(), &mut r);
            let s = BitVec::random(p.pad_len(), &mut r);
            let c = pk.encrypt(&p.encode_randomized(&m, &s).unwrap(), &mut r).unwrap();
            sk.decrypt(&c).and_then(|x| p.decode_randomized(&x).ok()) != Some(m)
        })
        .count();
    let theta = p.theta().value();
    let tail = exact_tail(256, 10, theta);
    let rate = failures as f64 / trials as f64;
    let sigma = (tail * (1.0 - tail) / trials as f64).sqrt();
    ensure((rate - tail).abs() <= 3.0 * sigma, || {
        format!("rate {rate:.5} vs tail {tail:.5}, 3σ = {:.5}", 3.0 * sigma)
    })?;
    Ok(format!("rate {rate:.5}, exact {tail:.5}, |Δ| = {:.2}σ", (rate - tail).abs() / sigma))
}

/// Tampered variants: bit flips, substitution of a component encrypting a
/// different plaintext, and splicing with a ciphertext of another message.
fn tamper(c: &RepCiphertext, pks: &[mceliece::PublicKey], p: &McElieceParams, r: &mut ChaCha20Rng) -> RepCiphertext {
    let mut t = c.clone();
    let j = r.gen_range(0..t.k());
    match r.gen_range(0..3) {
        0 => {
            for _ in 0..r.gen_range(1..=3) {
                let i = r.gen_range(0..t.bit_len());
                t.flip_bit(i);
            }
        }
        1 => {
            let x = BitVec::random(p.l(), r);
            t.comps[j] = pks[j].encrypt(&x, r).unwrap();
        }
        _ => {
            let other = repetition::enc_k(pks, &BitVec::random(p.msg_len(), r), r).unwrap();
            t.comps[j] = other.comps[j].clone();
        }
    }
    t
}

fn c4_verifiability() -> Outcome {
    let p = McElieceParams::new(4, 2).map_err(|e| e.to_string())?;
    let keysets: Vec<_> = (0..10).map(|s| repetition::gen_k(&p, 3, &mut rng(40 + s)).unwrap()).collect();
    let per = 1000u64;
    let results: Vec<(usize, usize, usize)> = (0..keysets.len() as u64 * per)
        .into_par_iter()
        .map(|trial| {
            let kp = &keysets[(trial / per) as usize];
            let mut r = trial_rng(4, trial);
            let m = BitVec::random(p.msg_len(), &mut r);
            let honest = repetition::enc_k(&kp.pks, &m, &mut r).unwrap();
            let tampered = tamper(&honest, &kp.pks, &p, &mut r);
            let (mut unsound, mut dependent, mut accepted) = (0, 0, 0);
            for c in [&honest, &tampered] {
                let v: Vec<bool> = (0..3).map(|i| repetition::verify(c, &kp.pks, i, &kp.sks[i])).collect();
                let dec = repetition::dec_k(&kp.sks, c);
                unsound += v.iter().any(|&b| b && dec.is_none()) as usize;
                dependent += v.iter().any(|&b| b != v[0]) as usize;
                accepted += v[0] as usize;
            }
            (unsound, dependent, accepted)
        })
        .collect();
    let unsound: usize = results.iter().map(|r| r.0).sum();
    let dependent: usize = results.iter().map(|r| r.1).sum();
    let accepted: usize = results.iter().map(|r| r.2).sum();
    ensure(unsound == 0, || format!("{unsound} cases of verify = 1 with dec_k = ⊥"))?;
    ensure(dependent == 0, || format!("{dependent} index-dependent verify outcomes"))?;
    Ok(format!("20000 ciphertexts, 0 violations, {accepted} verified"))
}

fn c5_tamper_rejection() -> Outcome {
    let cfg = Cca2Config::desk();
    let kp = cca2::gen_cca2(&cfg, &mut rng(5)).map_err(|e| e.to_string())?;
    let mut r = rng(55);
    let c_bits = cfg.k * cfg.mcel.n();
    let vk_bits = 2 * cfg.ots.lambda * cfg.ots.w;
    let regions = [(0, c_bits), (c_bits, c_bits + vk_bits), (c_bits + vk_bits, c_bits + vk_bits + cfg.ots.lambda * cfg.ots.w)];
    let mut honest: Vec<(BitVec, Cca2Ciphertext)> = Vec::new();
    while honest.len() < 100 {
        let m = BitVec::random(cfg.mcel.msg_len(), &mut r);
        let c = cca2::enc_cca2(&kp.pk, &m, &mut r).map_err(|e| e.to_string())?;
        if cca2::dec_cca2(&kp.sk, &c).as_ref() == Some(&m) {
            honest.push((m, c));
        }
    }
    let mut accepted = 0;
    let mut per_region = [0usize; 3];
    for flip in 0..1000 {
        let (_, c) = &honest[flip % honest.len()];
        let region = flip % 3;
        let (lo, hi) = regions[region];
        let mut t = c.clone();
        ensure(t.bit_len() == regions[2].1, || "unexpected ciphertext length".into())?;
        t.flip_bit(r.gen_range(lo..hi));
        per_region[region] += 1;
        accepted += cca2::dec_cca2(&kp.sk, &t).is_some() as usize;
    }
    ensure(accepted == 0, || format!("{accepted} of 1000 tampered ciphertexts decrypted"))?;
    Ok(format!("1000 flips (c′ {}, vk {}, σ {}) all ⊥", per_region[0], per_region[1], per_region[2]))
}

fn c6_prefix_attack() -> Outcome {
    let broken = run_named("prefix-attack-broken", Some(2000), 6).map_err(|e| e.to_string())?;
    let proper = run_named("prefix-attack-proper", Some(2000), 6).map_err(|e| e.to_string())?;
    ensure(broken.advantage() >= 0.45, || format!("broken: {broken}"))?;
    ensure(proper.advantage() <= 0.05, || format!("proper: {proper}"))?;
    Ok(format!("broken {:.4}, proper {:.4}", broken.advantage(), proper.advantage()))
}

fn c7_otsu() -> Outcome {
    let r = run_named("otsu-bitflip", Some(10_000), 7).map_err(|e| e.to_string())?;
    ensure(r.wins == 0, || format!("{r}"))?;
    let params = OtsParams::new(32, 128, HashKind::from_env()).map_err(|e| e.to_string())?;
    let kp = ots::ots_gen(&params, &mut rng(7));
    let first: Signature = ots::ots_sign(&kp.dsk, b"first").map_err(|e| e.to_string())?;
    ensure(ots::ots_verify(&kp.vk, b"first", &first), || "honest signature rejected".into())?;
    match ots::ots_sign(&kp.dsk, b"second") {
        Err(Error::KeyReused) => {}
        other => return Err(format!("second signing returned {other:?}")),
    }
    Ok("0 of 10000 forgeries, second signing refused".into())
}

fn honest_errors(p: &McElieceParams, k: usize, r: &mut ChaCha20Rng) -> Vec<BitVec> {
    (0..k)
        .map(|_| loop {
            let e = mceliece::sample_error(p.n(), p.theta(), r);
            if e.weight() <= p.t() {
                break e;
            }
        })
        .collect()
}

fn subsets(k: usize, tau: usize) -> Vec<Vec<usize>> {
    (0u32..1 << k).filter(|s| s.count_ones() as usize == tau).map(|s| (0..k).filter(|i| s >> i & 1 == 1).collect()).collect()
}

fn c8_correlated() -> Outcome {
    let params = CorrelatedParams::desk();
    let (q, k, tau) = (params.q(), params.k(), params.tau());
    let kp = correlated::gen_cor(&params, &mut rng(8)).map_err(|e| e.to_string())?;
    let all = subsets(k, tau);
    ensure(all.len() == 21, || format!("{} subsets", all.len()))?;
    let mut r = rng(88);
    for _ in 0..50 {
        let m = BitVec::random(params.msg_bits(), &mut r);
        let s = BitVec::random(params.pad_bits(), &mut r);
        let errors = honest_errors(params.mcel(), k, &mut r);
        let c = correlated::enc_cor_with(&params, &kp.pks, &m, &s, &errors).map_err(|e| e.to_string())?;
        ensure(correlated::dec_cor(&params, &kp.sks, &c) == Some(m.clone()), || "honest dec_cor failed".into())?;
        for sub in &all {
            let sks: Vec<_> = sub.iter().map(|&i| &kp.sks[i]).collect();
            ensure(correlated::verify_tau(&params, &c, &kp.pks, sub, &sks), || format!("subset {sub:?} rejected"))?;
        }
    }

    let field_size = 1u16 << q;
    let mut patterns = 0;
    for l in [params.l_msg(), params.l_vk()] {
        for keep in subsets(k, l) {
            patterns += 1;
            for _ in 0..64 {
                let msg: Vec<Gf> = (0..l).map(|_| Gf(r.gen_range(0..field_size))).collect();
                let cw = rs_encode(q, &msg, k).map_err(|e| e.to_string())?;
                let word: Vec<Option<Gf>> = (0..k).map(|i| keep.contains(&i).then_some(cw[i])).collect();
                ensure(rs_erasure_decode(q, &word, l) == Some(msg.clone()), || format!("l = {l}, kept {keep:?}"))?;
            }
        }
    }

    // Round trips need the completeness loss out of the way: at θ = 1/256 a
    // seven-component ciphertext fails with probability about 2·10⁻⁴.
    let low = params.mcel().with_theta(Theta::new(1, 256).unwrap()).unwrap();
    let cfg = CorCca2Config::new(params.with_mcel(low).unwrap(), OtsParams::desk(), VkMode::Compressed)
        .map_err(|e| e.to_string())?;
    let ckp = correlated::gen_cor_cca2(&cfg, &mut rng(888)).map_err(|e| e.to_string())?;
    for _ in 0..10 {
        let m = BitVec::random(cfg.cor.msg_bits(), &mut r);
        let c = correlated::enc_cor_cca2(&ckp.pk, &m, &mut r).map_err(|e| e.to_string())?;
        ensure(correlated::dec_cor_cca2(&ckp.sk, &c) == Some(m), || "PKE′ round trip failed".into())?;
    }
    Ok(format!("50 x 21 subsets verified, {patterns} erasure patterns, 10 PKE′ round trips"))
}

fn c9_lpn() -> Outcome {
    let theta = Theta::new(1, 8).unwrap();
    let queries = 10_000;
    let sigma = (theta.value() * (1.0 - theta.value()) / queries as f64).sqrt();
    let mut worst = 0.0f64;
    for secret in 0..10 {
        let mut r = rng(900 + secret);
        let oracle = LpnOracle::random(32, theta, &mut r);
        let noisy = (0..queries)
            .filter(|_| {
                let (a, b) = oracle.query(&mut r);
                b != oracle.secret().dot(&a)
            })
            .count();
        let dev = (noisy as f64 / queries as f64 - theta.value()).abs() / sigma;
        ensure(dev <= 3.0, || format!("secret {secret}: {dev:.2}σ"))?;
        worst = worst.max(dev);
    }
    Ok(format!("10 secrets, worst {worst:.2}σ"))
}

fn round_trip<T: PartialEq + std::fmt::Debug>(
    value: &T,
    encode: impl Fn(&T) -> Vec<u8>,
    decode: impl Fn(&[u8]) -> Result<T, wire::WireError>,
) -> Result<(), String> {
    let bytes = encode(value);
    let back = decode(&bytes).map_err(|e| e.to_string())?;
    ensure(&back == value, || "decoded value differs".into())?;
    ensure(encode(&back) == bytes, || "re-encoded bytes differ".into())
}

fn random_mcel(r: &mut ChaCha20Rng) -> McElieceParams {
    let (m, t) = *[(4, 2), (5, 2), (5, 3), (6, 3)].choose(r).unwrap();
    let p = McElieceParams::new(m, t).unwrap();
    p.with_pad_len(r.gen_range(1..p.l())).unwrap()
}

fn random_ots(r: &mut ChaCha20Rng) -> OtsParams {
    OtsParams::new(r.gen_range(1..=24), r.gen_range(1..=40), HashKind::from_env()).unwrap()
}

fn random_cor(r: &mut ChaCha20Rng) -> CorrelatedParams {
    let mcel = McElieceParams::new(4, 2).unwrap();
    let (q, k, tau) = *[(3, 7, 5), (2, 3, 2), (2, 4, 3)].choose(r).unwrap();
    CorrelatedParams::new(q, k, tau, mcel).unwrap()
}

fn random_ct(k: usize, p: &McElieceParams, ots: &OtsParams, r: &mut ChaCha20Rng) -> Cca2Ciphertext {
    let c_prime = RepCiphertext { comps: (0..k).map(|_| BitVec::random(p.n(), r)).collect() };
    let kp = ots::ots_gen(ots, r);
    let sigma = kp.dsk.sign(&wire::rep_ct_payload(&c_prime)).unwrap();
    Cca2Ciphertext { c_prime, vk: kp.vk, sigma }
}

fn one_object(kind: u16, i: u64) -> Result<(), String> {
    let hash = HashKind::from_env();
    let mut r = trial_rng(10 + kind as u64, i);
    let err = |e: Error| e.to_string();
    match kind {
        1 | 2 => {
            let (pk, sk) = mceliece::keygen(&random_mcel(&mut r), &mut r).map_err(err)?;
            round_trip(&pk, wire::encode_mceliece_pk, wire::decode_mceliece_pk)?;
            round_trip(&sk, wire::encode_mceliece_sk, wire::decode_mceliece_sk)
        }
        3 | 4 => {
            let mode = if r.gen() { VkMode::Compressed } else { VkMode::Raw };
            let ots = random_ots(&mut r);
            let k = if mode == VkMode::Raw { 2 * ots.lambda * ots.w } else { r.gen_range(1..=6) };
            let (ots, k) = if k > 12 { (OtsParams::new(1, 2, hash).unwrap(), 4) } else { (ots, k) };
            let cfg = Cca2Config::new(random_mcel(&mut r), k, ots, mode).map_err(err)?;
            let kp = cca2::gen_cca2(&cfg, &mut r).map_err(err)?;
            round_trip(&kp.pk, wire::encode_cca2_pk, |b| wire::decode_cca2_pk(b, hash))?;
            round_trip(&kp.sk, wire::encode_cca2_sk, |b| wire::decode_cca2_sk(b, hash))
        }
        5 => {
            let p = random_mcel(&mut r);
            let c = RepCiphertext { comps: (0..r.gen_range(1..=5)).map(|_| BitVec::random(p.n(), &mut r)).collect() };
            round_trip(&(p, c), |(p, c)| wire::encode_rep_ct(p, c), wire::decode_rep_ct)
        }
        6 => {
            let ots = random_ots(&mut r);
            let cfg = Cca2Config::new(random_mcel(&mut r), r.gen_range(1..=6), ots, VkMode::Compressed).map_err(err)?;
            let c = random_ct(cfg.k, &cfg.mcel, &ots, &mut r);
            let enc = |(_, c): &(McElieceParams, Cca2Ciphertext)| wire::encode_cca2_ct(&cfg, c);
            round_trip(&(cfg.mcel, c), enc, |b| wire::decode_cca2_ct(b, hash))
        }
        7 | 8 => {
            let cfg = CorCca2Config::new(random_cor(&mut r), random_ots(&mut r), VkMode::Compressed).map_err(err)?;
            let kp = correlated::gen_cor_cca2(&cfg, &mut r).map_err(err)?;
            round_trip(&kp.pk, wire::encode_cor_pk, |b| wire::decode_cor_pk(b, hash))?;
            round_trip(&kp.sk, wire::encode_cor_sk, |b| wire::decode_cor_sk(b, hash))
        }
        9 => {
            let cor = random_cor(&mut r);
            let c = random_ct(cor.k(), cor.mcel(), &random_ots(&mut r), &mut r);
            round_trip(&(cor, c), |(p, c)| wire::encode_cor_ct(p, c), |b| wire::decode_cor_ct(b, hash))
        }
        _ => unreachable!(),
    }
}

fn c10_serialization() -> Outcome {
    for kind in [1u16, 3, 5, 6, 7, 9] {
        let failures: Vec<String> = (0..1000u64).into_par_iter().filter_map(|i| one_object(kind, i).err()).collect();
        ensure(failures.is_empty(), || format!("kind {kind}: {} failures, first: {}", failures.len(), failures[0]))?;
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for scheme in ["plain", "cca2", "cor"] {
        let mut files = Vec::new();
        for run in 0..2 {
            let base = dir.path().join(format!("{scheme}{run}"));
            let (code, _) = run_cli(&["keygen", "--scheme", scheme, "--seed", "1010", "--out", base.to_str().unwrap()]);
            ensure(code == 0, || format!("keygen {scheme} exit {code}"))?;
            let pk = std::fs::read(base.with_extension("pk")).map_err(|e| e.to_string())?;
            let sk = std::fs::read(base.with_extension("sk")).map_err(|e| e.to_string())?;
            files.push((pk, sk));
        }
        ensure(files[0] == files[1], || format!("{scheme} keygen not reproducible"))?;
    }
    Ok("1000 objects of each of 9 kinds, keygen reproducible".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("sizes", c1_sizes, 1),
        ("exhaustive decoding (4,2)", c2_exhaustive_decoding, 30),
        ("completeness (8,10)", c3_completeness, 120),
        ("verifiability (4,2) k=3", c4_verifiability, 120),
        ("cca2 tamper rejection", c5_tamper_rejection, 60),
        ("prefix attack pair", c6_prefix_attack, 120),
        ("ots strong unforgeability", c7_otsu, 60),
        ("correlated scheme", c8_correlated, 180),
        ("lpn oracle statistics", c9_lpn, 30),
        ("serialization", c10_serialization, 60),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(d) if elapsed > Duration::from_secs(*limit) => Err(format!("{d}; exceeded {limit} s")),
            o => o,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failed += outcome.is_err() as usize;
        println!("criterion {:>2} {status} {name}: {detail} [{:.2} s]", i + 1, elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
