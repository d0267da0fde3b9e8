//! The `ltras` command-line tool.
//!
//! Objects travel between invocations as files in the library's wire format. Verdict
//! commands print `1` or `0`; a failed extraction prints `⊥`.
//!
//! Exit codes: 0 success / true, 1 false / `⊥` / aborted swap, 2 usage or decode error.

pub mod bench;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use ltras::codec::{self, ObjectTag, SigShape, WireElement};
use ltras::group::{setup_group, AnyGroupContext, Group, GroupContext};
use ltras::ltras::{self as scheme, KeyPair, PreSignature, Ring, Signature, SignerWindow, StatementPair, Witness};
use ltras::swap::{self, AliceSetup, BobSetup, FaultPlan, Ledgers, Phase, SwapTerms};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ltras", version, about = "Linkable threshold ring adaptor signatures")]
pub struct Cli {
    /// Group backend.
    #[arg(long, global = true, default_value = "prod", value_parser = ["prod", "toy"])]
    pub group: String,
    /// Deterministic randomness.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the produced object here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// Signer window `j,t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowArg {
    pub start: usize,
    pub width: usize,
}

impl FromStr for WindowArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (j, t) = s.split_once(',').ok_or("expected j,t")?;
        let start = j.trim().parse().map_err(|e| format!("bad j: {e}"))?;
        let width = t.trim().parse().map_err(|e| format!("bad t: {e}"))?;
        Ok(Self { start, width })
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a key pair.
    Keygen,
    /// Sample a statement (W1, W2) and its witness.
    Genr {
        #[arg(long)]
        witness_out: PathBuf,
    },
    /// Assemble a ring from key-pair or public-key files, in order.
    RingBuild {
        #[arg(required = true)]
        keys: Vec<PathBuf>,
    },
    Presign {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        window: WindowArg,
        /// Key-pair files for the window, in window order.
        #[arg(long, num_args = 1.., required = true)]
        keys: Vec<PathBuf>,
        #[arg(long)]
        message: PathBuf,
        #[arg(long)]
        statement: PathBuf,
        /// Permit windows that wrap past the end of the ring.
        #[arg(long)]
        wraparound: bool,
    },
    Preverify {
        presig: PathBuf,
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        threshold: usize,
        #[arg(long)]
        message: PathBuf,
        #[arg(long)]
        statement: PathBuf,
    },
    Adapt {
        presig: PathBuf,
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        threshold: usize,
        #[arg(long)]
        witness: PathBuf,
    },
    Verify {
        sig: PathBuf,
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        threshold: usize,
        #[arg(long)]
        message: PathBuf,
    },
    /// Recover the witness from a pre-signature and its adapted signature.
    Ext {
        presig: PathBuf,
        sig: PathBuf,
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        threshold: usize,
        #[arg(long)]
        statement: PathBuf,
    },
    Link {
        sig_a: PathBuf,
        sig_b: PathBuf,
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        threshold: usize,
        /// Ring of the second signature, if different.
        #[arg(long)]
        ring_b: Option<PathBuf>,
        #[arg(long)]
        threshold_b: Option<usize>,
    },
    /// Run one simulated swap and print its transcript as JSON lines.
    SwapDemo {
        #[arg(long, default_value = "none")]
        fault: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        j: usize,
    },
    /// Time every algorithm over ring sizes with t = n/2 and print CSV.
    Bench {
        #[arg(long, default_value_t = bench::MIN_REPS)]
        reps: usize,
        #[arg(long, value_delimiter = ',', default_values_t = bench::DEFAULT_SIZES)]
        sizes: Vec<usize>,
    },
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match setup_group(&cli.group)? {
        AnyGroupContext::Prod(ctx) => Runner { cli, ctx, out }.run(),
        AnyGroupContext::Toy(ctx) => Runner { cli, ctx, out }.run(),
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        fs::read(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn decode_file<T: codec::Wire>(path: &Path, shape: T::Shape) -> Result<T> {
    let bytes = read_input(path)?;
    codec::decode(&bytes, shape).with_context(|| format!("decoding {}", path.display()))
}

struct Runner<'a, G: Group> {
    cli: &'a Cli,
    ctx: GroupContext<G>,
    out: &'a mut dyn Write,
}

impl<G: Group> Runner<'_, G> {
    fn rng(&self) -> ChaCha20Rng {
        match self.cli.seed {
            Some(seed) => ChaCha20Rng::seed_from_u64(seed),
            None => ChaCha20Rng::from_entropy(),
        }
    }

    fn emit(&mut self, bytes: &[u8]) -> Result<i32> {
        match &self.cli.out {
            Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?,
            None => self.out.write_all(bytes)?,
        }
        Ok(EXIT_OK)
    }

    fn verdict(&mut self, ok: bool) -> Result<i32> {
        writeln!(self.out, "{}", if ok { 1 } else { 0 })?;
        Ok(if ok { EXIT_OK } else { EXIT_FALSE })
    }

    fn ring(&self, path: &Path) -> Result<Ring<G>> {
        decode_file(path, ())
    }

    fn shape(ring: &Ring<G>, t: usize) -> Result<SigShape> {
        if t == 0 || t > ring.len() {
            bail!("threshold {t} outside [1, {}]", ring.len());
        }
        Ok(SigShape::new(ring.len(), t))
    }

    fn public_key(path: &Path) -> Result<G::Element> {
        let bytes = read_input(path)?;
        let key = match codec::peek_tag(&bytes)? {
            ObjectTag::KeyPair => codec::decode::<KeyPair<G>>(&bytes, ())?.public(),
            ObjectTag::Element => codec::decode::<WireElement<G>>(&bytes, ())?.0,
            other => bail!("{}: expected a key pair or public key, found {other:?}", path.display()),
        };
        Ok(key)
    }

    fn run(mut self) -> Result<i32> {
        let cli = self.cli;
        match &cli.command {
            Command::Keygen => {
                let kp = scheme::keygen(&self.ctx, &mut self.rng());
                self.emit(&codec::encode(&kp))
            }
            Command::Genr { witness_out } => {
                let (stmt, w) = scheme::gen_r(&self.ctx, &mut self.rng());
                fs::write(witness_out, codec::encode(&w))
                    .with_context(|| format!("writing {}", witness_out.display()))?;
                self.emit(&codec::encode(&stmt))
            }
            Command::RingBuild { keys } => {
                let keys = keys.iter().map(|p| Self::public_key(p)).collect::<Result<Vec<_>>>()?;
                let ring = Ring::<G>::new(keys)?;
                self.emit(&codec::encode(&ring))
            }
            Command::Presign { ring, window, keys, message, statement, wraparound } => {
                let ring = self.ring(ring)?;
                if keys.len() != window.width {
                    bail!("window width {} needs {} key files, got {}", window.width, window.width, keys.len());
                }
                let secrets = keys
                    .iter()
                    .map(|p| decode_file::<KeyPair<G>>(p, ()).map(|kp| kp.secret()))
                    .collect::<Result<Vec<_>>>()?;
                let mut win = SignerWindow::new(window.start, secrets);
                if *wraparound {
                    win = win.allow_wraparound();
                }
                let stmt: StatementPair<G> = decode_file(statement, ())?;
                let m = read_input(message)?;
                let psig = scheme::presign(&self.ctx, &ring, &win, &m, &stmt, &mut self.rng())?;
                self.emit(&codec::encode(&psig))
            }
            Command::Preverify { presig, ring, threshold, message, statement } => {
                let ring = self.ring(ring)?;
                let psig: PreSignature<G> = decode_file(presig, Self::shape(&ring, *threshold)?)?;
                let stmt: StatementPair<G> = decode_file(statement, ())?;
                let m = read_input(message)?;
                let ok = scheme::preverify(&self.ctx, &ring, &psig, *threshold, &m, &stmt);
                self.verdict(ok)
            }
            Command::Adapt { presig, ring, threshold, witness } => {
                let ring = self.ring(ring)?;
                let psig: PreSignature<G> = decode_file(presig, Self::shape(&ring, *threshold)?)?;
                let w: Witness<G> = decode_file(witness, ())?;
                self.emit(&codec::encode(&scheme::adapt(psig, &w)))
            }
            Command::Verify { sig, ring, threshold, message } => {
                let ring = self.ring(ring)?;
                let sig: Signature<G> = decode_file(sig, Self::shape(&ring, *threshold)?)?;
                let m = read_input(message)?;
                let ok = scheme::verify(&self.ctx, &ring, &sig, *threshold, &m);
                self.verdict(ok)
            }
            Command::Ext { presig, sig, ring, threshold, statement } => {
                let ring = self.ring(ring)?;
                let shape = Self::shape(&ring, *threshold)?;
                let psig: PreSignature<G> = decode_file(presig, shape)?;
                let sig: Signature<G> = decode_file(sig, shape)?;
                let stmt: StatementPair<G> = decode_file(statement, ())?;
                match scheme::ext(&self.ctx, &stmt, &psig, &sig) {
                    Ok(w) => self.emit(&codec::encode(&w)),
                    Err(_) => {
                        writeln!(self.out, "⊥")?;
                        Ok(EXIT_FALSE)
                    }
                }
            }
            Command::Link { sig_a, sig_b, ring, threshold, ring_b, threshold_b } => {
                let ring_a = self.ring(ring)?;
                let a: Signature<G> = decode_file(sig_a, Self::shape(&ring_a, *threshold)?)?;
                let ring_b = match ring_b {
                    Some(path) => self.ring(path)?,
                    None => ring_a,
                };
                let b: Signature<G> = decode_file(sig_b, Self::shape(&ring_b, threshold_b.unwrap_or(*threshold))?)?;
                self.verdict(scheme::link(&a, &b))
            }
            Command::SwapDemo { fault, n, t, j } => self.swap_demo(fault, *n, *t, *j),
            Command::Bench { reps, sizes } => {
                let records = bench::run_bench(&self.ctx, sizes, *reps, cli.seed.unwrap_or(0))?;
                self.emit(bench::to_csv(&records).as_bytes())
            }
        }
    }

    fn swap_demo(&mut self, fault: &str, n: usize, t: usize, j: usize) -> Result<i32> {
        let fault: FaultPlan = fault.parse()?;
        let seed = self.cli.seed.unwrap_or(0);
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let keys = scheme::keygen_ring(&self.ctx, n + 1, &mut rng)?;
        if t == 0 || j + t > n {
            return Err(anyhow!("window {j},{t} does not fit a ring of {n}"));
        }
        let ring = Ring::new(keys[..n].iter().map(KeyPair::public).collect())?;
        let window = SignerWindow::new(j, keys[j..j + t].iter().map(KeyPair::secret).collect());
        let alice = AliceSetup { ring, window };
        let bob = BobSetup { keypair: keys[n].clone() };
        let mut ledgers = Ledgers::new();
        let report = swap::run_swap(&self.ctx, &mut ledgers, alice, bob, SwapTerms::default(), fault, seed)?;
        let mut text = report.transcript.to_jsonl();
        text.push_str(&format!(
            "{{\"outcome\":\"{:?}\",\"final_phase\":\"{}\",\"chain_a_confirmed\":{},\"chain_b_confirmed\":{}}}\n",
            report.outcome,
            report.phase,
            ledgers.a.confirmed().len(),
            ledgers.b.confirmed().len()
        ));
        self.emit(text.as_bytes())?;
        Ok(if report.phase == Phase::AliceClaimed { EXIT_OK } else { EXIT_FALSE })
    }
}
