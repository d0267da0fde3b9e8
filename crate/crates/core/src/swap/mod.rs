//! Two in-process ledgers and the six-step cross-chain swap between them.
//!
//! Chain `A` settles single-key transfers authorised by Schnorr adaptor signatures;
//! chain `B` settles ring transfers authorised by LTRAS signatures and refuses any
//! signature whose link tags were already published.

mod engine;
mod ledger;

use std::fmt;

use serde::Serialize;
use sha2::{Digest, Sha256};

pub use self::engine::{
    run_swap, AbortPoint, AbortReason, AliceSetup, BobSetup, Corruption, FaultPlan, Ledgers, Phase,
    SwapError, SwapOutcome, SwapReport, SwapSession, SwapState, SwapTerms, Transcript, TranscriptRecord,
};
pub use self::ledger::{ConfirmedEntry, LedgerSignature, MockLedger, RejectReason};
use crate::codec;
use crate::group::Group;
use crate::ltras::Ring;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ChainId {
    /// Single-key chain (Schnorr adaptor signatures).
    A,
    /// Ring chain (LTRAS signatures with link-tag double-spend checks).
    B,
}

impl ChainId {
    pub fn as_byte(self) -> u8 {
        match self {
            Self::A => b'A',
            Self::B => b'B',
        }
    }

    pub fn from_byte(b: u8) -> Option<Self> {
        match b {
            b'A' => Some(Self::A),
            b'B' => Some(Self::B),
            _ => None,
        }
    }
}

impl fmt::Display for ChainId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::A => "A",
            Self::B => "B",
        })
    }
}

/// Who funds a transaction: one account on chain A, `t` hidden accounts of a ring on B.
pub enum Payer<G: Group> {
    Account(G::Element),
    Ring { ring: Ring<G>, threshold: usize },
}

impl<G: Group> Clone for Payer<G> {
    fn clone(&self) -> Self {
        match self {
            Self::Account(pk) => Self::Account(*pk),
            Self::Ring { ring, threshold } => Self::Ring { ring: ring.clone(), threshold: *threshold },
        }
    }
}

impl<G: Group> PartialEq for Payer<G> {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::Account(a), Self::Account(b)) => a == b,
            (Self::Ring { ring: ra, threshold: ta }, Self::Ring { ring: rb, threshold: tb }) => {
                ra == rb && ta == tb
            }
            _ => false,
        }
    }
}

impl<G: Group> fmt::Debug for Payer<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Account(pk) => f.debug_tuple("Account").field(pk).finish(),
            Self::Ring { ring, threshold } => f
                .debug_struct("Ring")
                .field("n", &ring.len())
                .field("threshold", threshold)
                .finish(),
        }
    }
}

/// A transfer; its canonical encoding is the signed message.
pub struct SwapTransaction<G: Group> {
    pub chain: ChainId,
    pub payer: Payer<G>,
    pub payee: String,
    pub amount: u64,
    pub nonce: u64,
}

impl<G: Group> SwapTransaction<G> {
    pub fn message(&self) -> Vec<u8> {
        codec::encode(self)
    }

    pub fn id(&self) -> [u8; 32] {
        Sha256::digest(self.message()).into()
    }
}

impl<G: Group> Clone for SwapTransaction<G> {
    fn clone(&self) -> Self {
        Self {
            chain: self.chain,
            payer: self.payer.clone(),
            payee: self.payee.clone(),
            amount: self.amount,
            nonce: self.nonce,
        }
    }
}

impl<G: Group> PartialEq for SwapTransaction<G> {
    fn eq(&self, other: &Self) -> bool {
        self.chain == other.chain
            && self.payer == other.payer
            && self.payee == other.payee
            && self.amount == other.amount
            && self.nonce == other.nonce
    }
}

impl<G: Group> fmt::Debug for SwapTransaction<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SwapTransaction")
            .field("chain", &self.chain)
            .field("payer", &self.payer)
            .field("payee", &self.payee)
            .field("amount", &self.amount)
            .field("nonce", &self.nonce)
            .finish()
    }
}
