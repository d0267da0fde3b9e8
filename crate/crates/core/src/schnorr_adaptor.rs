//! Single-key Schnorr adaptor signatures over the same group and the same statement
//! component `W1 = g^w` used by the ring scheme.
//!
//! Pre-signature: `R̂ = g^r · W1`, `c = H(pk, R̂, m)`, `s̃ = r + c·sk`.
//! Full signature: `s = s̃ + w`, valid when `c = H(pk, g^s · pk^{-c}, m)`.

use std::fmt;

use rand::{CryptoRng, RngCore};

use crate::group::{hash_to_scalar, random_scalar_nonzero, Group, GroupContext};
use crate::ltras::{ExtractError, KeyPair, Witness};

/// Domain tag for the Schnorr challenge.
pub const SCHNORR_TAG: &[u8] = b"LTRAS/schnorr";

/// `(c, s̃)`.
pub struct PlainPreSignature<G: Group> {
    pub c: G::Scalar,
    pub s_tilde: G::Scalar,
}

/// `(c, s)`.
pub struct PlainSignature<G: Group> {
    pub c: G::Scalar,
    pub s: G::Scalar,
}

macro_rules! impl_plain_traits {
    ($ty:ident, $resp:ident) => {
        impl<G: Group> Clone for $ty<G> {
            fn clone(&self) -> Self {
                *self
            }
        }

        impl<G: Group> Copy for $ty<G> {}

        impl<G: Group> PartialEq for $ty<G> {
            fn eq(&self, other: &Self) -> bool {
                self.c == other.c && self.$resp == other.$resp
            }
        }

        impl<G: Group> Eq for $ty<G> {}

        impl<G: Group> fmt::Debug for $ty<G> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_struct(stringify!($ty))
                    .field("c", &self.c)
                    .field(stringify!($resp), &self.$resp)
                    .finish()
            }
        }
    };
}

impl_plain_traits!(PlainPreSignature, s_tilde);
impl_plain_traits!(PlainSignature, s);

fn challenge<G: Group>(pk: &G::Element, commitment: &G::Element, message: &[u8]) -> G::Scalar {
    let pk = G::encode_element(pk);
    let commitment = G::encode_element(commitment);
    hash_to_scalar::<G>(SCHNORR_TAG, &[pk.as_ref(), commitment.as_ref(), message])
}

/// `g^resp · pk^{-c}`.
fn recommit<G: Group>(pk: &G::Element, c: &G::Scalar, resp: &G::Scalar) -> G::Element {
    G::multi_exp(&[(G::generator(), *resp), (*pk, -*c)])
}

pub fn presign<G: Group, R: RngCore + CryptoRng + ?Sized>(
    ctx: &GroupContext<G>,
    keypair: &KeyPair<G>,
    message: &[u8],
    w1: &G::Element,
    rng: &mut R,
) -> PlainPreSignature<G> {
    presign_with_nonce(ctx, keypair, message, w1, random_scalar_nonzero::<G, R>(rng))
}

pub fn presign_with_nonce<G: Group>(
    _ctx: &GroupContext<G>,
    keypair: &KeyPair<G>,
    message: &[u8],
    w1: &G::Element,
    r: G::Scalar,
) -> PlainPreSignature<G> {
    let commitment = G::mul(&G::exp_g(&r), w1);
    let c = challenge::<G>(&keypair.public(), &commitment, message);
    PlainPreSignature { c, s_tilde: r + c * keypair.secret() }
}

pub fn preverify<G: Group>(
    _ctx: &GroupContext<G>,
    pk: &G::Element,
    psig: &PlainPreSignature<G>,
    message: &[u8],
    w1: &G::Element,
) -> bool {
    let commitment = G::mul(&recommit::<G>(pk, &psig.c, &psig.s_tilde), w1);
    psig.c == challenge::<G>(pk, &commitment, message)
}

pub fn adapt<G: Group>(psig: &PlainPreSignature<G>, w: &Witness<G>) -> PlainSignature<G> {
    PlainSignature { c: psig.c, s: psig.s_tilde + w.scalar() }
}

pub fn verify<G: Group>(_ctx: &GroupContext<G>, pk: &G::Element, sig: &PlainSignature<G>, message: &[u8]) -> bool {
    sig.c == challenge::<G>(pk, &recommit::<G>(pk, &sig.c, &sig.s), message)
}

/// Recovers `w = s - s̃`, accepting it only if `g^w = W1`.
pub fn ext<G: Group>(
    _ctx: &GroupContext<G>,
    w1: &G::Element,
    psig: &PlainPreSignature<G>,
    sig: &PlainSignature<G>,
) -> Result<Witness<G>, ExtractError> {
    if psig.c != sig.c {
        return Err(ExtractError::TranscriptMismatch);
    }
    let w = Witness::new(sig.s - psig.s_tilde).map_err(|_| ExtractError::RelationFailed)?;
    if G::exp_g(&w.scalar()) == *w1 {
        Ok(w)
    } else {
        Err(ExtractError::RelationFailed)
    }
}
