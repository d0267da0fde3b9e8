//! Linkable threshold ring adaptor signatures over prime-order groups, a single-key
//! Schnorr adaptor signature sharing the same hard relation, canonical wire formats,
//! and a two-ledger atomic-swap simulator built from both schemes.

pub mod codec;
pub mod group;
pub mod ltras;
pub mod schnorr_adaptor;
pub mod swap;
