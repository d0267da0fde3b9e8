//! Linkable `(t, n)`-threshold ring adaptor signatures.
//!
//! A signer holding the secrets for `t` consecutive keys of an `n`-key ring produces a
//! pre-signature bound to a hard-relation statement `(W1, W2) = (g^w, h^w)`. Anyone
//! knowing `w` can [`adapt`] it into a full [`Signature`]; the pair then reveals `w`
//! through [`ext`]. Every signature carries one link tag `h^sk` per secret used, and
//! [`link`] flags two signatures sharing any tag.
//!
//! The products over ring windows are evaluated as a single multi-exponentiation over
//! the ring keys (see `aggregate::window_exponents`), so signing and verification are
//! linear in `n` regardless of `t`.

mod aggregate;
mod types;

use std::collections::HashSet;

use rand::{CryptoRng, RngCore};
use thiserror::Error;

pub use self::aggregate::swt_aggregate;
use self::aggregate::{ring_commitment, tag_aggregate};
pub use self::types::{
    AggregateSet, KeyPair, LinkTag, PreSignature, Ring, Signature, SignerWindow, StatementPair,
    Witness,
};
use crate::group::{hash_to_scalar, random_scalar_nonzero, Group, GroupContext};

/// Domain tag for the rogue-key factor `d = H(PK)`.
pub const D_TAG: &[u8] = b"LTRAS/d";
/// Domain tag for the challenge `c = H(PK, R, T, m)`.
pub const C_TAG: &[u8] = b"LTRAS/c";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LtrasError {
    #[error("ring must contain at least one key")]
    EmptyRing,
    #[error("ring key {second} duplicates key {first}")]
    DuplicateKey { first: usize, second: usize },
    #[error("threshold {t} outside [1, {n}]")]
    ThresholdOutOfRange { t: usize, n: usize },
    #[error("window starting at {start} with width {width} does not fit a ring of {n} keys")]
    WindowOutOfRange { start: usize, width: usize, n: usize },
    #[error("expected {expected} link tags, got {actual}")]
    TagCountMismatch { expected: usize, actual: usize },
    #[error("expected {expected} decoy challenges, got {actual}")]
    NonceCountMismatch { expected: usize, actual: usize },
    #[error("window secret {offset} does not match ring key {index}")]
    KeyMismatch { offset: usize, index: usize },
    #[error("secret scalar must be nonzero")]
    ZeroSecret,
    #[error("a ring of {n} distinct keys exceeds the {max} nonzero secrets of the group")]
    RingTooLarge { n: usize, max: u64 },
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum ExtractError {
    #[error("pre-signature and signature carry different challenges or tags")]
    TranscriptMismatch,
    #[error("candidate witness does not satisfy the statement")]
    RelationFailed,
}

pub fn keygen<G: Group, R: RngCore + CryptoRng + ?Sized>(ctx: &GroupContext<G>, rng: &mut R) -> KeyPair<G> {
    KeyPair::generate(ctx, rng)
}

/// Samples `n` key pairs with pairwise distinct public keys, resampling collisions
/// (which only occur in practice on small test groups).
pub fn keygen_ring<G: Group, R: RngCore + CryptoRng + ?Sized>(
    ctx: &GroupContext<G>,
    n: usize,
    rng: &mut R,
) -> Result<Vec<KeyPair<G>>, LtrasError> {
    if ctx.order_bits() < 64 {
        let mut le = [0u8; 8];
        let order = ctx.order_le_bytes();
        le[..order.len().min(8)].copy_from_slice(&order[..order.len().min(8)]);
        let max = u64::from_le_bytes(le) - 1;
        if n as u64 > max {
            return Err(LtrasError::RingTooLarge { n, max });
        }
    }
    let mut seen = HashSet::with_capacity(n);
    let mut keys = Vec::with_capacity(n);
    while keys.len() < n {
        let kp = KeyPair::generate(ctx, rng);
        if seen.insert(G::encode_element(&kp.public())) {
            keys.push(kp);
        }
    }
    Ok(keys)
}

/// Samples `w` from `Z_p^*` and returns `((g^w, h^w), w)`.
pub fn gen_r<G: Group, R: RngCore + CryptoRng + ?Sized>(
    ctx: &GroupContext<G>,
    rng: &mut R,
) -> (StatementPair<G>, Witness<G>) {
    let w = Witness(random_scalar_nonzero::<G, R>(rng));
    (statement_for(ctx, &w), w)
}

pub fn statement_for<G: Group>(_ctx: &GroupContext<G>, w: &Witness<G>) -> StatementPair<G> {
    StatementPair { w1: G::exp_g(&w.scalar()), w2: G::exp_h(&w.scalar()) }
}

pub fn verify_relation<G: Group>(ctx: &GroupContext<G>, statement: &StatementPair<G>, w: &Witness<G>) -> bool {
    statement_for(ctx, w) == *statement
}

/// The signer's randomness: `r` and the challenges `c_i` for every `i != j`, in
/// increasing `i`.
pub struct PresignNonces<G: Group> {
    pub r: G::Scalar,
    pub decoys: Vec<G::Scalar>,
}

impl<G: Group> PresignNonces<G> {
    pub fn sample<R: RngCore + CryptoRng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let r = random_scalar_nonzero::<G, R>(rng);
        let decoys = (1..n).map(|_| random_scalar_nonzero::<G, R>(rng)).collect();
        Self { r, decoys }
    }
}

impl<G: Group> Clone for PresignNonces<G> {
    fn clone(&self) -> Self {
        Self { r: self.r, decoys: self.decoys.clone() }
    }
}

/// Intermediate values of one pre-signing run.
pub struct PresignTrace<G: Group> {
    pub d: G::Scalar,
    pub aggregate: AggregateSet<G>,
    pub commitment_r: G::Element,
    pub commitment_t: G::Element,
    pub challenge: G::Scalar,
    pub signer_challenge: G::Scalar,
    pub z_tilde: G::Scalar,
}

pub fn presign<G: Group, R: RngCore + CryptoRng + ?Sized>(
    ctx: &GroupContext<G>,
    ring: &Ring<G>,
    window: &SignerWindow<G>,
    message: &[u8],
    statement: &StatementPair<G>,
    rng: &mut R,
) -> Result<PreSignature<G>, LtrasError> {
    let nonces = PresignNonces::sample(ring.len(), rng);
    presign_with_nonces(ctx, ring, window, message, statement, &nonces)
}

/// Pre-signs with caller-supplied randomness.
pub fn presign_with_nonces<G: Group>(
    _ctx: &GroupContext<G>,
    ring: &Ring<G>,
    window: &SignerWindow<G>,
    message: &[u8],
    statement: &StatementPair<G>,
    nonces: &PresignNonces<G>,
) -> Result<PreSignature<G>, LtrasError> {
    window.validate(ring)?;
    presign_unchecked(ring, window, message, statement, nonces).map(|(psig, _)| psig)
}

/// Like [`presign_with_nonces`] but also returns every intermediate value.
pub fn presign_traced<G: Group>(
    ctx: &GroupContext<G>,
    ring: &Ring<G>,
    window: &SignerWindow<G>,
    message: &[u8],
    statement: &StatementPair<G>,
    nonces: &PresignNonces<G>,
) -> Result<(PreSignature<G>, PresignTrace<G>), LtrasError> {
    window.validate(ring)?;
    let (psig, inner) = presign_unchecked(ring, window, message, statement, nonces)?;
    let tags: Vec<G::Element> = psig.tags.iter().map(LinkTag::element).collect();
    let aggregate = swt_aggregate(ctx, ring, window.width(), &tags)?;
    debug_assert!(aggregate.l == inner.l);
    let trace = PresignTrace {
        d: ring.d(),
        aggregate,
        commitment_r: inner.commitment_r,
        commitment_t: inner.commitment_t,
        challenge: inner.challenge,
        signer_challenge: inner.signer_challenge,
        z_tilde: psig.z_tilde,
    };
    Ok((psig, trace))
}

struct PresignInner<G: Group> {
    l: G::Element,
    commitment_r: G::Element,
    commitment_t: G::Element,
    challenge: G::Scalar,
    signer_challenge: G::Scalar,
}

fn presign_unchecked<G: Group>(
    ring: &Ring<G>,
    window: &SignerWindow<G>,
    message: &[u8],
    statement: &StatementPair<G>,
    nonces: &PresignNonces<G>,
) -> Result<(PreSignature<G>, PresignInner<G>), LtrasError> {
    let n = ring.len();
    let t = window.width();
    let j = window.start();
    if nonces.decoys.len() != n - 1 {
        return Err(LtrasError::NonceCountMismatch { expected: n - 1, actual: nonces.decoys.len() });
    }
    let d = ring.d();

    let tags: Vec<LinkTag<G>> = window.secrets().iter().map(|sk| LinkTag::new(G::exp_h(sk))).collect();
    let l = tag_aggregate::<G>(d, tags.iter().map(LinkTag::element));

    // C with a zero placeholder at the signer's position.
    let mut challenges = Vec::with_capacity(n);
    let mut decoys = nonces.decoys.iter().copied();
    for i in 0..n {
        challenges.push(if i == j { G::scalar_zero() } else { decoys.next().expect("length checked") });
    }
    let decoy_sum = challenges.iter().fold(G::scalar_zero(), |acc, c| acc + *c);

    let ring_part = ring_commitment(ring, t, &challenges, None);
    let commitment_r = G::mul(&G::mul(&G::exp_g(&nonces.r), &statement.w1), &ring_part);
    let commitment_t = G::mul(
        &G::mul(&G::exp_h(&nonces.r), &statement.w2),
        &G::exp(&l, &decoy_sum),
    );

    let challenge = challenge_hash(ring, &commitment_r, &commitment_t, message);
    let signer_challenge = challenge - decoy_sum;
    challenges[j] = signer_challenge;

    let secret_sum = window.secrets().iter().fold(G::scalar_zero(), |acc, sk| acc + *sk);
    let z_tilde = nonces.r - signer_challenge * d * secret_sum;

    let psig = PreSignature { z_tilde, challenges, tags };
    let inner = PresignInner { l, commitment_r, commitment_t, challenge, signer_challenge };
    Ok((psig, inner))
}

/// `H(PK, R, T, m)` with the key list, `R`, `T` and `m` as separately framed parts.
pub fn challenge_hash<G: Group>(ring: &Ring<G>, r: &G::Element, t: &G::Element, message: &[u8]) -> G::Scalar {
    let r = G::encode_element(r);
    let t = G::encode_element(t);
    hash_to_scalar::<G>(C_TAG, &[ring.encoded_keys(), r.as_ref(), t.as_ref(), message])
}

fn shape_ok<G: Group>(ring: &Ring<G>, t: usize, challenges: &[G::Scalar], tags: &[LinkTag<G>]) -> bool {
    let n = ring.len();
    (1..=n).contains(&t) && challenges.len() == n && tags.len() == t
}

/// Recomputes `(g^resp · Π y_i^{c_i}, h^resp · Π l^{c_i})` and returns them with `Σ c_i`.
fn response_commitments<G: Group>(
    ring: &Ring<G>,
    t: usize,
    challenges: &[G::Scalar],
    tags: &[LinkTag<G>],
    response: &G::Scalar,
) -> (G::Element, G::Element, G::Scalar) {
    let sum = challenges.iter().fold(G::scalar_zero(), |acc, c| acc + *c);
    let l = tag_aggregate::<G>(ring.d(), tags.iter().map(LinkTag::element));
    let r = ring_commitment(ring, t, challenges, Some((G::generator(), *response)));
    let big_t = G::multi_exp(&[(G::second_generator(), *response), (l, sum)]);
    (r, big_t, sum)
}

pub fn preverify<G: Group>(
    _ctx: &GroupContext<G>,
    ring: &Ring<G>,
    psig: &PreSignature<G>,
    t: usize,
    message: &[u8],
    statement: &StatementPair<G>,
) -> bool {
    if !shape_ok(ring, t, &psig.challenges, &psig.tags) {
        return false;
    }
    let (r, big_t, sum) = response_commitments(ring, t, &psig.challenges, &psig.tags, &psig.z_tilde);
    let r = G::mul(&r, &statement.w1);
    let big_t = G::mul(&big_t, &statement.w2);
    sum == challenge_hash(ring, &r, &big_t, message)
}

/// `z = z̃ + w`; challenges and tags carry over unchanged.
pub fn adapt<G: Group>(psig: PreSignature<G>, w: &Witness<G>) -> Signature<G> {
    Signature { z: psig.z_tilde + w.scalar(), challenges: psig.challenges, tags: psig.tags }
}

pub fn verify<G: Group>(
    _ctx: &GroupContext<G>,
    ring: &Ring<G>,
    sig: &Signature<G>,
    t: usize,
    message: &[u8],
) -> bool {
    if !shape_ok(ring, t, &sig.challenges, &sig.tags) {
        return false;
    }
    let (r, big_t, sum) = response_commitments(ring, t, &sig.challenges, &sig.tags, &sig.z);
    sum == challenge_hash(ring, &r, &big_t, message)
}

/// Recovers `w = z - z̃`, accepting it only if it opens both halves of `statement`.
pub fn ext<G: Group>(
    ctx: &GroupContext<G>,
    statement: &StatementPair<G>,
    psig: &PreSignature<G>,
    sig: &Signature<G>,
) -> Result<Witness<G>, ExtractError> {
    if psig.challenges != sig.challenges || psig.tags != sig.tags {
        return Err(ExtractError::TranscriptMismatch);
    }
    let w = Witness::new(sig.z - psig.z_tilde).map_err(|_| ExtractError::RelationFailed)?;
    if verify_relation(ctx, statement, &w) {
        Ok(w)
    } else {
        Err(ExtractError::RelationFailed)
    }
}

/// True iff the two signatures share at least one link tag.
pub fn link<G: Group>(a: &Signature<G>, b: &Signature<G>) -> bool {
    tags_intersect(&a.tags, &b.tags)
}

pub fn tags_intersect<G: Group>(a: &[LinkTag<G>], b: &[LinkTag<G>]) -> bool {
    if a.len() * b.len() <= 64 {
        return a.iter().any(|x| b.iter().any(|y| x.bytes() == y.bytes()));
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut index: Vec<(u64, usize)> = small.iter().enumerate().map(|(i, x)| (prefix(x.bytes()), i)).collect();
    index.sort_unstable();
    large.iter().any(|y| {
        let key = prefix(y.bytes());
        let start = index.partition_point(|&(k, _)| k < key);
        index[start..].iter().take_while(|&&(k, _)| k == key).any(|&(_, i)| small[i].bytes() == y.bytes())
    })
}

fn prefix<B: AsRef<[u8]>>(bytes: &B) -> u64 {
    let mut head = [0u8; 8];
    let src = bytes.as_ref();
    let len = src.len().min(8);
    head[..len].copy_from_slice(&src[..len]);
    u64::from_le_bytes(head)
}

#[cfg(test)]
mod tests;
