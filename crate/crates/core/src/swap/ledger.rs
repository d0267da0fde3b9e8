use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use super::{ChainId, Payer, SwapTransaction};
use crate::group::{Group, GroupContext};
use crate::ltras::{self, Signature};
use crate::schnorr_adaptor::{self, PlainSignature};

/// The authorisation attached to a submitted transaction.
pub enum LedgerSignature<G: Group> {
    Plain(PlainSignature<G>),
    Ring(Signature<G>),
}

impl<G: Group> Clone for LedgerSignature<G> {
    fn clone(&self) -> Self {
        match self {
            Self::Plain(sig) => Self::Plain(*sig),
            Self::Ring(sig) => Self::Ring(sig.clone()),
        }
    }
}

impl<G: Group> fmt::Debug for LedgerSignature<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Plain(sig) => f.debug_tuple("Plain").field(sig).finish(),
            Self::Ring(sig) => f.debug_tuple("Ring").field(sig).finish(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    BadSignature,
    DoubleSpendLink,
    Malformed,
    AlreadyConfirmed,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::BadSignature => "bad-signature",
            Self::DoubleSpendLink => "double-spend-link",
            Self::Malformed => "malformed",
            Self::AlreadyConfirmed => "already-confirmed",
        })
    }
}

impl std::error::Error for RejectReason {}

pub struct ConfirmedEntry<G: Group> {
    pub txid: [u8; 32],
    pub tx: SwapTransaction<G>,
    pub signature: LedgerSignature<G>,
}

/// Append-only ledger. On chain B, admission doubles as the double-spend check: a
/// signature sharing any link tag with a confirmed one is refused.
pub struct MockLedger<G: Group> {
    chain: ChainId,
    confirmed: Vec<ConfirmedEntry<G>>,
    txids: HashSet<[u8; 32]>,
    published_tags: HashSet<G::ElementBytes>,
}

impl<G: Group> MockLedger<G> {
    pub fn new(chain: ChainId) -> Self {
        Self { chain, confirmed: Vec::new(), txids: HashSet::new(), published_tags: HashSet::new() }
    }

    pub fn chain(&self) -> ChainId {
        self.chain
    }

    pub fn confirmed(&self) -> &[ConfirmedEntry<G>] {
        &self.confirmed
    }

    pub fn published_tags(&self) -> &HashSet<G::ElementBytes> {
        &self.published_tags
    }

    pub fn is_confirmed(&self, txid: &[u8; 32]) -> bool {
        self.txids.contains(txid)
    }

    pub fn find(&self, txid: &[u8; 32]) -> Option<&ConfirmedEntry<G>> {
        self.confirmed.iter().find(|e| &e.txid == txid)
    }

    /// Validates and appends; returns the height of the new entry.
    pub fn submit(
        &mut self,
        ctx: &GroupContext<G>,
        tx: SwapTransaction<G>,
        signature: LedgerSignature<G>,
    ) -> Result<usize, RejectReason> {
        if tx.chain != self.chain {
            return Err(RejectReason::Malformed);
        }
        let message = tx.message();
        let txid = tx.id();
        if self.txids.contains(&txid) {
            return Err(RejectReason::AlreadyConfirmed);
        }
        match (&tx.payer, &signature) {
            (Payer::Account(pk), LedgerSignature::Plain(sig)) if self.chain == ChainId::A => {
                if !schnorr_adaptor::verify(ctx, pk, sig, &message) {
                    return Err(RejectReason::BadSignature);
                }
            }
            (Payer::Ring { ring, threshold }, LedgerSignature::Ring(sig)) if self.chain == ChainId::B => {
                if !ltras::verify(ctx, ring, sig, *threshold, &message) {
                    return Err(RejectReason::BadSignature);
                }
                if sig.tags.iter().any(|tag| self.published_tags.contains(tag.bytes())) {
                    return Err(RejectReason::DoubleSpendLink);
                }
                self.published_tags.extend(sig.tags.iter().map(|tag| *tag.bytes()));
            }
            _ => return Err(RejectReason::Malformed),
        }
        self.txids.insert(txid);
        self.confirmed.push(ConfirmedEntry { txid, tx, signature });
        Ok(self.confirmed.len() - 1)
    }
}

impl<G: Group> fmt::Debug for MockLedger<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MockLedger")
            .field("chain", &self.chain)
            .field("confirmed", &self.confirmed.len())
            .field("published_tags", &self.published_tags.len())
            .finish()
    }
}
