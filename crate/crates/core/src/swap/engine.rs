use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{CryptoRng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::{ChainId, LedgerSignature, MockLedger, Payer, RejectReason, SwapTransaction};
use crate::codec::{self, Wire};
use crate::group::{Group, GroupContext};
use crate::ltras::{self, KeyPair, LtrasError, PreSignature, Ring, Signature, SignerWindow, StatementPair, Witness};
use crate::schnorr_adaptor::{self, PlainPreSignature, PlainSignature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AbortPoint {
    AfterStep1,
    AfterStep2,
    AfterStep3,
    AfterStep4,
    AfterStep5,
}

impl AbortPoint {
    pub const ALL: [AbortPoint; 5] =
        [Self::AfterStep1, Self::AfterStep2, Self::AfterStep3, Self::AfterStep4, Self::AfterStep5];

    pub fn step(self) -> u8 {
        match self {
            Self::AfterStep1 => 1,
            Self::AfterStep2 => 2,
            Self::AfterStep3 => 3,
            Self::AfterStep4 => 4,
            Self::AfterStep5 => 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Corruption {
    /// Alice's pre-signature is altered in transit to Bob.
    TamperAlicePresig,
    /// Bob's pre-signature is altered in transit to Alice.
    TamperBobPresig,
    /// Alice spends from the same window on chain B before Bob's claim lands.
    ReplayAliceWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FaultPlan {
    #[default]
    None,
    Abort(AbortPoint),
    Corrupt(Corruption),
}

impl FaultPlan {
    pub const ALL: [FaultPlan; 9] = [
        Self::None,
        Self::Abort(AbortPoint::AfterStep1),
        Self::Abort(AbortPoint::AfterStep2),
        Self::Abort(AbortPoint::AfterStep3),
        Self::Abort(AbortPoint::AfterStep4),
        Self::Abort(AbortPoint::AfterStep5),
        Self::Corrupt(Corruption::TamperAlicePresig),
        Self::Corrupt(Corruption::TamperBobPresig),
        Self::Corrupt(Corruption::ReplayAliceWindow),
    ];

    fn aborts_after(self, step: u8) -> bool {
        matches!(self, Self::Abort(p) if p.step() == step)
    }
}

impl fmt::Display for FaultPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::None => f.write_str("none"),
            Self::Abort(p) => write!(f, "abort-after-{}", p.step()),
            Self::Corrupt(Corruption::TamperAlicePresig) => f.write_str("tamper-alice-presig"),
            Self::Corrupt(Corruption::TamperBobPresig) => f.write_str("tamper-bob-presig"),
            Self::Corrupt(Corruption::ReplayAliceWindow) => f.write_str("replay-alice-window"),
        }
    }
}

impl FromStr for FaultPlan {
    type Err = SwapError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.to_string() == s)
            .ok_or_else(|| SwapError::UnknownFaultPlan(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbortReason {
    PreverifyB,
    PreverifyM,
    Timeout { after_step: u8 },
    LedgerRejected { chain: ChainId, reason: RejectReason },
    ExtractionFailed,
}

impl fmt::Display for AbortReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PreverifyB => f.write_str("preverify_B"),
            Self::PreverifyM => f.write_str("preverify_M"),
            Self::Timeout { after_step } => write!(f, "timeout_after_step{after_step}"),
            Self::LedgerRejected { chain, reason } => write!(f, "ledger_{chain}:{reason}"),
            Self::ExtractionFailed => f.write_str("extraction_failed"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Init,
    BobCommitted,
    RingSelected,
    AliceCommitted,
    BobAdapted,
    BobClaimed,
    AliceClaimed,
    Aborted(AbortReason),
}

impl Phase {
    pub fn is_terminal(self) -> bool {
        matches!(self, Self::AliceClaimed | Self::Aborted(_))
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Aborted(reason) => write!(f, "Aborted({reason})"),
            other => fmt::Debug::fmt(other, f),
        }
    }
}

#[derive(Debug, Error)]
pub enum SwapError {
    #[error("invalid signer window: {0}")]
    InvalidWindow(#[from] LtrasError),
    #[error("swap amounts must be positive")]
    ZeroAmount,
    #[error("step expects phase {expected}, swap is in {found}")]
    OutOfOrder { expected: Phase, found: Phase },
    #[error("unknown fault plan {0:?}")]
    UnknownFaultPlan(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwapTerms {
    /// Paid by Alice's ring on chain B.
    pub alice_pays: u64,
    /// Paid by Bob's account on chain A.
    pub bob_pays: u64,
    pub nonce: u64,
}

impl Default for SwapTerms {
    fn default() -> Self {
        Self { alice_pays: 10, bob_pays: 7, nonce: 1 }
    }
}

pub struct AliceSetup<G: Group> {
    pub ring: Ring<G>,
    pub window: SignerWindow<G>,
}

pub struct BobSetup<G: Group> {
    pub keypair: KeyPair<G>,
}

pub struct Ledgers<G: Group> {
    pub a: MockLedger<G>,
    pub b: MockLedger<G>,
}

impl<G: Group> Ledgers<G> {
    pub fn new() -> Self {
        Self { a: MockLedger::new(ChainId::A), b: MockLedger::new(ChainId::B) }
    }
}

impl<G: Group> Default for Ledgers<G> {
    fn default() -> Self {
        Self::new()
    }
}

/// Everything produced so far. Fields fill in as the steps run.
pub struct SwapState<G: Group> {
    pub phase: Phase,
    pub statement: Option<StatementPair<G>>,
    /// Bob's witness; never sent to Alice.
    pub bob_witness: Option<Witness<G>>,
    pub tx_b: Option<SwapTransaction<G>>,
    /// Bob's pre-signature as received by Alice.
    pub presig_b: Option<PlainPreSignature<G>>,
    pub tx_a: Option<SwapTransaction<G>>,
    /// Alice's own copy of her pre-signature.
    pub presig_a: Option<PreSignature<G>>,
    /// Alice's pre-signature as received by Bob.
    pub presig_a_received: Option<PreSignature<G>>,
    pub sig_a: Option<Signature<G>>,
    pub extracted: Option<Witness<G>>,
    pub sig_b: Option<PlainSignature<G>>,
}

impl<G: Group> SwapState<G> {
    fn new() -> Self {
        Self {
            phase: Phase::Init,
            statement: None,
            bob_witness: None,
            tx_b: None,
            presig_b: None,
            tx_a: None,
            presig_a: None,
            presig_a_received: None,
            sig_a: None,
            extracted: None,
            sig_b: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranscriptRecord {
    pub step: u8,
    pub actor: &'static str,
    pub event: String,
    pub phase: String,
    /// SHA-256 (hex) of each artifact's wire encoding.
    pub artifacts: BTreeMap<&'static str, String>,
    pub verdicts: BTreeMap<&'static str, bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    pub records: Vec<TranscriptRecord>,
}

impl Transcript {
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for record in &self.records {
            out.push_str(&serde_json::to_string(record).expect("transcript records serialize"));
            out.push('\n');
        }
        out
    }
}

fn digest<T: Wire>(x: &T) -> String {
    hex::encode(Sha256::digest(codec::encode(x)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwapOutcome {
    BothConfirmed,
    NeitherConfirmed,
    OnlyChainA,
    OnlyChainB,
}

impl SwapOutcome {
    pub fn is_atomic(self) -> bool {
        matches!(self, Self::BothConfirmed | Self::NeitherConfirmed)
    }
}

pub struct SwapReport<G: Group> {
    pub phase: Phase,
    pub outcome: SwapOutcome,
    pub state: SwapState<G>,
    pub transcript: Transcript,
}

/// One swap between Alice (ring payer on chain B) and Bob (account payer on chain A).
///
/// Each `step*` call advances exactly one phase, or moves the swap to `Aborted`.
pub struct SwapSession<'l, G: Group, R> {
    ctx: &'l GroupContext<G>,
    ledgers: &'l mut Ledgers<G>,
    alice: AliceSetup<G>,
    bob: BobSetup<G>,
    terms: SwapTerms,
    fault: FaultPlan,
    rng: R,
    state: SwapState<G>,
    transcript: Transcript,
}

impl<'l, G: Group, R: RngCore + CryptoRng> SwapSession<'l, G, R> {
    pub fn new(
        ctx: &'l GroupContext<G>,
        ledgers: &'l mut Ledgers<G>,
        alice: AliceSetup<G>,
        bob: BobSetup<G>,
        terms: SwapTerms,
        fault: FaultPlan,
        rng: R,
    ) -> Result<Self, SwapError> {
        alice.window.validate(&alice.ring)?;
        if terms.alice_pays == 0 || terms.bob_pays == 0 {
            return Err(SwapError::ZeroAmount);
        }
        Ok(Self {
            ctx,
            ledgers,
            alice,
            bob,
            terms,
            fault,
            rng,
            state: SwapState::new(),
            transcript: Transcript::default(),
        })
    }

    pub fn phase(&self) -> Phase {
        self.state.phase
    }

    pub fn state(&self) -> &SwapState<G> {
        &self.state
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    fn expect(&self, expected: Phase) -> Result<(), SwapError> {
        if self.state.phase == expected {
            Ok(())
        } else {
            Err(SwapError::OutOfOrder { expected, found: self.state.phase })
        }
    }

    fn record(
        &mut self,
        step: u8,
        actor: &'static str,
        event: impl Into<String>,
        artifacts: Vec<(&'static str, String)>,
        verdicts: Vec<(&'static str, bool)>,
    ) {
        self.transcript.records.push(TranscriptRecord {
            step,
            actor,
            event: event.into(),
            phase: self.state.phase.to_string(),
            artifacts: artifacts.into_iter().collect(),
            verdicts: verdicts.into_iter().collect(),
        });
    }

    fn finish_step(&mut self, step: u8, next: Phase) -> Phase {
        self.state.phase = next;
        if self.fault.aborts_after(step) && !next.is_terminal() {
            if step < 5 {
                self.state.phase = Phase::Aborted(AbortReason::Timeout { after_step: step });
                self.record(step, "network", "party stopped responding", vec![], vec![]);
            } else {
                // Chain B has already settled; Alice's claim is only delayed.
                self.record(step, "network", "alice offline, resumes from chain B", vec![], vec![]);
            }
        }
        self.state.phase
    }

    fn abort(&mut self, step: u8, actor: &'static str, reason: AbortReason) -> Phase {
        self.state.phase = Phase::Aborted(reason);
        self.record(step, actor, "abort", vec![], vec![]);
        self.state.phase
    }

    /// Bob samples `(W, w)` and pre-signs his chain-A payment under `W1`.
    pub fn step1_bob_commit(&mut self) -> Result<Phase, SwapError> {
        self.expect(Phase::Init)?;
        let (statement, w) = ltras::gen_r(self.ctx, &mut self.rng);
        let tx_b = SwapTransaction {
            chain: ChainId::A,
            payer: Payer::Account(self.bob.keypair.public()),
            payee: "alice".into(),
            amount: self.terms.bob_pays,
            nonce: self.terms.nonce,
        };
        let mut presig =
            schnorr_adaptor::presign(self.ctx, &self.bob.keypair, &tx_b.message(), &statement.w1, &mut self.rng);
        if self.fault == FaultPlan::Corrupt(Corruption::TamperBobPresig) {
            presig.s_tilde = presig.s_tilde + G::scalar_one();
        }
        let artifacts = vec![
            ("statement", digest(&statement)),
            ("witness", digest(&w)),
            ("tx_b", digest(&tx_b)),
            ("presig_b", digest(&presig)),
        ];
        self.state.statement = Some(statement);
        self.state.bob_witness = Some(w);
        self.state.tx_b = Some(tx_b);
        self.state.presig_b = Some(presig);
        self.state.phase = Phase::BobCommitted;
        self.record(1, "bob", "commit statement and pre-sign tx_b", artifacts, vec![]);
        Ok(self.finish_step(1, Phase::BobCommitted))
    }

    /// Alice fixes the ring and her window.
    pub fn step2_alice_select_ring(&mut self) -> Result<Phase, SwapError> {
        self.expect(Phase::BobCommitted)?;
        self.state.phase = Phase::RingSelected;
        let artifacts = vec![("ring", digest(&self.alice.ring))];
        self.record(2, "alice", "select ring", artifacts, vec![]);
        Ok(self.finish_step(2, Phase::RingSelected))
    }

    /// Alice checks Bob's pre-signature, then pre-signs her chain-B payment under `W`.
    pub fn step3_alice_presign(&mut self) -> Result<Phase, SwapError> {
        self.expect(Phase::RingSelected)?;
        let statement = self.state.statement.expect("set in step 1");
        let tx_b = self.state.tx_b.as_ref().expect("set in step 1");
        let presig_b = self.state.presig_b.as_ref().expect("set in step 1");
        let ok = schnorr_adaptor::preverify(
            self.ctx,
            &self.bob.keypair.public(),
            presig_b,
            &tx_b.message(),
            &statement.w1,
        );
        if !ok {
            self.record(3, "alice", "preverify_B", vec![], vec![("preverify_B", false)]);
            return Ok(self.abort(3, "alice", AbortReason::PreverifyB));
        }

        let tx_a = self.ring_tx("bob", self.terms.alice_pays);
        let psig = ltras::presign(self.ctx, &self.alice.ring, &self.alice.window, &tx_a.message(), &statement, &mut self.rng)?;
        let mut sent = psig.clone();
        if self.fault == FaultPlan::Corrupt(Corruption::TamperAlicePresig) {
            sent.z_tilde = sent.z_tilde + G::scalar_one();
        }
        let artifacts = vec![("tx_a", digest(&tx_a)), ("presig_a", digest(&sent))];
        self.state.tx_a = Some(tx_a);
        self.state.presig_a = Some(psig);
        self.state.presig_a_received = Some(sent);
        self.state.phase = Phase::AliceCommitted;
        self.record(3, "alice", "pre-sign tx_a", artifacts, vec![("preverify_B", true)]);

        if self.fault == FaultPlan::Corrupt(Corruption::ReplayAliceWindow) {
            self.spend_window_elsewhere();
        }
        Ok(self.finish_step(3, Phase::AliceCommitted))
    }

    fn ring_tx(&self, payee: &str, amount: u64) -> SwapTransaction<G> {
        SwapTransaction {
            chain: ChainId::B,
            payer: Payer::Ring { ring: self.alice.ring.clone(), threshold: self.alice.window.width() },
            payee: payee.into(),
            amount,
            nonce: self.terms.nonce,
        }
    }

    /// Alice signs a conflicting chain-B payment with the same window and gets it confirmed.
    fn spend_window_elsewhere(&mut self) {
        let tx = self.ring_tx("alice-change", self.terms.alice_pays);
        let (statement, w) = ltras::gen_r(self.ctx, &mut self.rng);
        let psig = ltras::presign(self.ctx, &self.alice.ring, &self.alice.window, &tx.message(), &statement, &mut self.rng)
            .expect("window validated at setup");
        let sig = ltras::adapt(psig, &w);
        let artifacts = vec![("tx_conflict", digest(&tx)), ("sig_conflict", digest(&sig))];
        let accepted = self.ledgers.b.submit(self.ctx, tx, LedgerSignature::Ring(sig)).is_ok();
        self.record(3, "alice", "spend same window on chain B", artifacts, vec![("ledger_B_accept", accepted)]);
    }

    /// Bob checks Alice's pre-signature and completes it with `w`.
    pub fn step4_bob_adapt_and_claim(&mut self) -> Result<Phase, SwapError> {
        self.expect(Phase::AliceCommitted)?;
        let statement = self.state.statement.expect("set in step 1");
        let tx_a = self.state.tx_a.as_ref().expect("set in step 3");
        let received = self.state.presig_a_received.clone().expect("set in step 3");
        let t = self.alice.window.width();
        if !ltras::preverify(self.ctx, &self.alice.ring, &received, t, &tx_a.message(), &statement) {
            self.record(4, "bob", "preverify_M", vec![], vec![("preverify_M", false)]);
            return Ok(self.abort(4, "bob", AbortReason::PreverifyM));
        }
        let w = self.state.bob_witness.expect("set in step 1");
        let sig = ltras::adapt(received, &w);
        let artifacts = vec![("sig_a", digest(&sig))];
        self.state.sig_a = Some(sig);
        self.state.phase = Phase::BobAdapted;
        self.record(4, "bob", "adapt presig_a", artifacts, vec![("preverify_M", true)]);
        Ok(self.finish_step(4, Phase::BobAdapted))
    }

    /// Bob broadcasts `tx_a` with the adapted signature; chain B decides.
    pub fn step5_ledger_confirm(&mut self) -> Result<Phase, SwapError> {
        self.expect(Phase::BobAdapted)?;
        let tx = self.state.tx_a.clone().expect("set in step 3");
        let sig = self.state.sig_a.clone().expect("set in step 4");
        match self.ledgers.b.submit(self.ctx, tx, LedgerSignature::Ring(sig)) {
            Ok(_) => {
                self.state.phase = Phase::BobClaimed;
                self.record(5, "ledger_B", "confirm tx_a", vec![], vec![("ledger_B_accept", true)]);
                Ok(self.finish_step(5, Phase::BobClaimed))
            }
            Err(reason) => {
                self.record(5, "ledger_B", format!("reject tx_a: {reason}"), vec![], vec![("ledger_B_accept", false)]);
                Ok(self.abort(5, "ledger_B", AbortReason::LedgerRejected { chain: ChainId::B, reason }))
            }
        }
    }

    /// Alice reads `σ_a` from chain B, extracts `w` and claims Bob's payment on chain A.
    pub fn step6_alice_extract_and_claim(&mut self) -> Result<Phase, SwapError> {
        self.expect(Phase::BobClaimed)?;
        let statement = self.state.statement.expect("set in step 1");
        let tx_a = self.state.tx_a.as_ref().expect("set in step 3");
        let on_chain = match self.ledgers.b.find(&tx_a.id()).map(|e| &e.signature) {
            Some(LedgerSignature::Ring(sig)) => sig.clone(),
            _ => return Ok(self.abort(6, "alice", AbortReason::ExtractionFailed)),
        };
        let presig_a = self.state.presig_a.as_ref().expect("set in step 3");
        let w = match ltras::ext(self.ctx, &statement, presig_a, &on_chain) {
            Ok(w) => w,
            Err(_) => {
                self.record(6, "alice", "ext", vec![], vec![("ext", false)]);
                return Ok(self.abort(6, "alice", AbortReason::ExtractionFailed));
            }
        };
        let matches_bob = Some(w) == self.state.bob_witness;
        let presig_b = self.state.presig_b.expect("set in step 1");
        let sig_b = schnorr_adaptor::adapt(&presig_b, &w);
        let tx_b = self.state.tx_b.clone().expect("set in step 1");
        let artifacts = vec![("witness", digest(&w)), ("sig_b", digest(&sig_b))];
        self.state.extracted = Some(w);
        self.state.sig_b = Some(sig_b);
        match self.ledgers.a.submit(self.ctx, tx_b, LedgerSignature::Plain(sig_b)) {
            Ok(_) => {
                self.state.phase = Phase::AliceClaimed;
                let verdicts = vec![("ext", true), ("witness_matches_bob", matches_bob), ("ledger_A_accept", true)];
                self.record(6, "alice", "extract witness and claim tx_b", artifacts, verdicts);
                Ok(self.finish_step(6, Phase::AliceClaimed))
            }
            Err(reason) => {
                let verdicts = vec![("ext", true), ("witness_matches_bob", matches_bob), ("ledger_A_accept", false)];
                self.record(6, "alice", format!("reject tx_b: {reason}"), artifacts, verdicts);
                Ok(self.abort(6, "ledger_A", AbortReason::LedgerRejected { chain: ChainId::A, reason }))
            }
        }
    }

    /// Runs the remaining steps until the swap ends.
    pub fn run_to_end(&mut self) -> Result<Phase, SwapError> {
        while !self.state.phase.is_terminal() {
            match self.state.phase {
                Phase::Init => self.step1_bob_commit()?,
                Phase::BobCommitted => self.step2_alice_select_ring()?,
                Phase::RingSelected => self.step3_alice_presign()?,
                Phase::AliceCommitted => self.step4_bob_adapt_and_claim()?,
                Phase::BobAdapted => self.step5_ledger_confirm()?,
                Phase::BobClaimed => self.step6_alice_extract_and_claim()?,
                Phase::AliceClaimed | Phase::Aborted(_) => unreachable!(),
            };
        }
        Ok(self.state.phase)
    }

    pub fn outcome(&self) -> SwapOutcome {
        let on_a = self.state.tx_b.as_ref().is_some_and(|tx| self.ledgers.a.is_confirmed(&tx.id()));
        let on_b = self.state.tx_a.as_ref().is_some_and(|tx| self.ledgers.b.is_confirmed(&tx.id()));
        match (on_a, on_b) {
            (true, true) => SwapOutcome::BothConfirmed,
            (false, false) => SwapOutcome::NeitherConfirmed,
            (true, false) => SwapOutcome::OnlyChainA,
            (false, true) => SwapOutcome::OnlyChainB,
        }
    }

    pub fn into_report(self) -> SwapReport<G> {
        let outcome = self.outcome();
        SwapReport { phase: self.state.phase, outcome, state: self.state, transcript: self.transcript }
    }
}

/// Runs a full swap with randomness drawn from `ChaCha20Rng::seed_from_u64(seed)`.
pub fn run_swap<G: Group>(
    ctx: &GroupContext<G>,
    ledgers: &mut Ledgers<G>,
    alice: AliceSetup<G>,
    bob: BobSetup<G>,
    terms: SwapTerms,
    fault: FaultPlan,
    seed: u64,
) -> Result<SwapReport<G>, SwapError> {
    let rng = ChaCha20Rng::seed_from_u64(seed);
    let mut session = SwapSession::new(ctx, ledgers, alice, bob, terms, fault, rng)?;
    session.run_to_end()?;
    Ok(session.into_report())
}
