//! Timing sweep over ring sizes with `t = n/2`.

use std::fmt::Write as _;
use std::time::Instant;

use anyhow::{bail, Result};
use ltras::codec;
use ltras::group::{Group, GroupContext};
use ltras::ltras::{
    adapt, ext, gen_r, keygen_ring, link, preverify, presign, verify, KeyPair, Ring, Signature, SignerWindow,
};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub const MIN_REPS: usize = 10;
pub const DEFAULT_SIZES: [usize; 10] = [10, 20, 30, 40, 50, 60, 70, 80, 90, 100];
pub const CSV_HEADER: &str = "algorithm,n,t,mean_ns,reps,bytes,ours_formula_bytes,baseline_formula_bytes";

/// `link` pairs two signatures from the same window; `link-disjoint` pairs windows
/// with no key in common, which forces a full scan of both tag lists.
pub const ALGORITHMS: [&str; 7] = ["presign", "preverify", "adapt", "verify", "ext", "link", "link-disjoint"];

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub algorithm: &'static str,
    pub n: usize,
    pub t: usize,
    pub mean_ns: u64,
    pub reps: usize,
    /// Payload size of the object the algorithm produces or consumes.
    pub bytes: usize,
    pub ours_formula_bytes: usize,
    /// Size of the same object in the comparison scheme, from its published formula.
    pub baseline_formula_bytes: usize,
}

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.algorithm,
            self.n,
            self.t,
            self.mean_ns,
            self.reps,
            self.bytes,
            self.ours_formula_bytes,
            self.baseline_formula_bytes
        )
    }
}

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(out, "{}", r.csv_row());
    }
    out
}

pub fn threshold_for(n: usize) -> usize {
    (n / 2).max(1)
}

fn ours_bytes<G: Group>(n: usize, t: usize) -> usize {
    (n + 1) * G::SCALAR_LEN + t * G::ELEMENT_LEN
}

fn baseline_bytes<G: Group>(algorithm: &str, n: usize, t: usize) -> usize {
    match algorithm {
        "presign" | "preverify" => t * (n + 1) * G::SCALAR_LEN + t * G::ELEMENT_LEN,
        _ => t * (n + 1) * G::SCALAR_LEN + (t + 1) * G::ELEMENT_LEN,
    }
}

fn window<G: Group>(keys: &[KeyPair<G>], j: usize, t: usize) -> SignerWindow<G> {
    SignerWindow::new(j, keys[j..j + t].iter().map(KeyPair::secret).collect())
}

fn timed<T>(total: &mut u128, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    *total += start.elapsed().as_nanos();
    out
}

/// Benchmarks every algorithm for one ring size.
pub fn bench_cell<G: Group>(ctx: &GroupContext<G>, n: usize, reps: usize, seed: u64) -> Result<Vec<BenchRecord>> {
    if reps < MIN_REPS {
        bail!("at least {MIN_REPS} repetitions are required, got {reps}");
    }
    if n < 2 {
        bail!("ring size must be at least 2, got {n}");
    }
    let t = threshold_for(n);
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ n as u64);
    let keys = keygen_ring(ctx, n, &mut rng)?;
    let ring = Ring::new(keys.iter().map(KeyPair::public).collect())?;
    let signer = window(&keys, 0, t);
    let other = window(&keys, n - t, t);
    let message = b"bench message".as_slice();

    let sign = |rng: &mut ChaCha20Rng, win: &SignerWindow<G>| -> Result<Signature<G>> {
        let (stmt, w) = gen_r(ctx, rng);
        Ok(adapt(presign(ctx, &ring, win, message, &stmt, rng)?, &w))
    };
    let disjoint = sign(&mut rng, &other)?;
    let mut previous = sign(&mut rng, &signer)?;

    let mut totals = [0u128; ALGORITHMS.len()];
    let mut sizes = (0, 0);
    let mut verdicts = true;
    // One untimed warm-up pass, then `reps` timed ones.
    for rep in 0..=reps {
        let mut lap = [0u128; ALGORITHMS.len()];
        let (stmt, w) = gen_r(ctx, &mut rng);
        let psig = timed(&mut lap[0], || presign(ctx, &ring, &signer, message, &stmt, &mut rng))?;
        verdicts &= timed(&mut lap[1], || preverify(ctx, &ring, &psig, t, message, &stmt));
        let owned = psig.clone();
        let sig = timed(&mut lap[2], || adapt(owned, &w));
        verdicts &= timed(&mut lap[3], || verify(ctx, &ring, &sig, t, message));
        verdicts &= timed(&mut lap[4], || ext(ctx, &stmt, &psig, &sig)).is_ok();
        verdicts &= timed(&mut lap[5], || link(&sig, &previous));
        verdicts &= !timed(&mut lap[6], || link(&sig, &disjoint));
        sizes = (codec::encode_payload(&psig).len(), codec::encode_payload(&sig).len());
        previous = sig;
        if rep > 0 {
            for (total, l) in totals.iter_mut().zip(lap) {
                *total += l;
            }
        }
    }
    if !verdicts {
        bail!("an algorithm returned an unexpected verdict at n={n}");
    }

    Ok(ALGORITHMS
        .iter()
        .zip(totals)
        .map(|(&algorithm, total)| BenchRecord {
            algorithm,
            n,
            t,
            mean_ns: (total / reps as u128) as u64,
            reps,
            bytes: if matches!(algorithm, "presign" | "preverify") { sizes.0 } else { sizes.1 },
            ours_formula_bytes: ours_bytes::<G>(n, t),
            baseline_formula_bytes: baseline_bytes::<G>(algorithm, n, t),
        })
        .collect())
}

pub fn run_bench<G: Group>(ctx: &GroupContext<G>, sizes: &[usize], reps: usize, seed: u64) -> Result<Vec<BenchRecord>> {
    let mut records = Vec::with_capacity(sizes.len() * ALGORITHMS.len());
    for &n in sizes {
        records.extend(bench_cell(ctx, n, reps, seed)?);
    }
    Ok(records)
}
