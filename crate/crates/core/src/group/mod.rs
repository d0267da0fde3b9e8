//! Prime-order group backends.
//!
//! Every scheme in this crate is generic over [`Group`]. Two backends ship:
//! [`Ristretto255`] for real use and [`ToyGroup`], the order-101 subgroup of
//! `Z_607^*`, which is small enough to check exhaustively.

mod ristretto;
mod toy;

use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};

use rand::{CryptoRng, RngCore};
use sha2::{Digest, Sha512};
use thiserror::Error;

pub use self::ristretto::Ristretto255;
pub use self::toy::{ToyElement, ToyGroup, ToyScalar, TOY_MODULUS, TOY_ORDER};

/// Domain-separation string hashed to the group to obtain the second generator.
pub const SECOND_GENERATOR_SEED: &[u8] = b"LTRAS-generator-h-v1";

/// A cyclic group of prime order `p` with two generators and a scalar field `Z_p`.
///
/// Group elements are written multiplicatively throughout (`mul`, `exp`), even when
/// the backend is an elliptic curve.
pub trait Group: Copy + Clone + Default + fmt::Debug + Send + Sync + 'static {
    type Scalar: Copy
        + Eq
        + fmt::Debug
        + Send
        + Sync
        + Add<Output = Self::Scalar>
        + Sub<Output = Self::Scalar>
        + Mul<Output = Self::Scalar>
        + Neg<Output = Self::Scalar>;
    type Element: Copy + Eq + fmt::Debug + Send + Sync;
    /// Fixed-length canonical encoding of an element.
    type ElementBytes: AsRef<[u8]> + Copy + Eq + Ord + Hash + fmt::Debug + Send + Sync;

    /// Identifier used by `setup_group` and the `--group` flag.
    const BACKEND_ID: &'static str;
    const SECURITY_LABEL: &'static str;
    /// Encoded scalar size in bytes (`|Z_p|`).
    const SCALAR_LEN: usize;
    /// Encoded element size in bytes (`|G_p|`).
    const ELEMENT_LEN: usize;

    /// Group order `p`, little-endian.
    fn order_le_bytes() -> Vec<u8>;

    fn generator() -> Self::Element;
    fn second_generator() -> Self::Element;
    fn identity() -> Self::Element;

    fn mul(a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn invert_element(a: &Self::Element) -> Self::Element;
    fn exp(base: &Self::Element, e: &Self::Scalar) -> Self::Element;

    fn exp_g(e: &Self::Scalar) -> Self::Element {
        Self::exp(&Self::generator(), e)
    }

    fn exp_h(e: &Self::Scalar) -> Self::Element {
        Self::exp(&Self::second_generator(), e)
    }

    /// `Π base_i^{e_i}`. Variable time: only feed it public values.
    fn multi_exp(pairs: &[(Self::Element, Self::Scalar)]) -> Self::Element {
        pairs.iter().fold(Self::identity(), |acc, (base, e)| {
            Self::mul(&acc, &Self::exp(base, e))
        })
    }

    fn scalar_from_u64(v: u64) -> Self::Scalar;
    /// Multiplicative inverse; `None` for zero.
    fn invert_scalar(s: &Self::Scalar) -> Option<Self::Scalar>;
    /// Reduces a 64-byte digest (read little-endian) modulo `p`.
    fn scalar_from_digest(digest: &[u8; 64]) -> Self::Scalar;
    /// Uniform element of `Z_p` (may be zero).
    fn random_scalar<R: RngCore + CryptoRng + ?Sized>(rng: &mut R) -> Self::Scalar;

    /// Appends the fixed-width little-endian encoding of `s`.
    fn encode_scalar(s: &Self::Scalar, out: &mut Vec<u8>);
    /// Decodes exactly `SCALAR_LEN` bytes, rejecting values `>= p`.
    fn decode_scalar(bytes: &[u8]) -> Option<Self::Scalar>;
    fn encode_element(e: &Self::Element) -> Self::ElementBytes;
    /// Decodes exactly `ELEMENT_LEN` bytes, rejecting non-canonical encodings
    /// and anything outside the prime-order group.
    fn decode_element(bytes: &[u8]) -> Option<Self::Element>;

    fn scalar_zero() -> Self::Scalar {
        Self::scalar_from_u64(0)
    }

    fn scalar_one() -> Self::Scalar {
        Self::scalar_from_u64(1)
    }
}

/// Bit length of the group order.
pub fn order_bits<G: Group>() -> u32 {
    let bytes = G::order_le_bytes();
    match bytes.iter().rposition(|&b| b != 0) {
        Some(top) => top as u32 * 8 + (8 - bytes[top].leading_zeros()),
        None => 0,
    }
}

/// Builds the unambiguous preimage fed to the hash: the domain tag and each part are
/// prefixed with their length as a little-endian `u64`, and the part count is
/// written before the parts.
pub fn hash_preimage(domain_tag: &[u8], parts: &[&[u8]]) -> Vec<u8> {
    let total: usize = parts.iter().map(|p| p.len() + 8).sum::<usize>() + domain_tag.len() + 16;
    let mut out = Vec::with_capacity(total);
    out.extend_from_slice(&(domain_tag.len() as u64).to_le_bytes());
    out.extend_from_slice(domain_tag);
    out.extend_from_slice(&(parts.len() as u64).to_le_bytes());
    for part in parts {
        out.extend_from_slice(&(part.len() as u64).to_le_bytes());
        out.extend_from_slice(part);
    }
    out
}

/// SHA-512 over [`hash_preimage`], reduced into `Z_p`.
pub fn hash_to_scalar<G: Group>(domain_tag: &[u8], parts: &[&[u8]]) -> G::Scalar {
    let mut hasher = Sha512::new();
    hasher.update((domain_tag.len() as u64).to_le_bytes());
    hasher.update(domain_tag);
    hasher.update((parts.len() as u64).to_le_bytes());
    for part in parts {
        hasher.update((part.len() as u64).to_le_bytes());
        hasher.update(part);
    }
    let digest: [u8; 64] = hasher.finalize().into();
    G::scalar_from_digest(&digest)
}

/// Samples from `Z_p^*`, resampling on zero.
pub fn random_scalar_nonzero<G: Group, R: RngCore + CryptoRng + ?Sized>(rng: &mut R) -> G::Scalar {
    loop {
        let s = G::random_scalar(rng);
        if s != G::scalar_zero() {
            return s;
        }
    }
}

/// Public parameters `(p, G_p, g, h, H)`.
///
/// Immutable after construction; `h` is derived deterministically, never sampled.
pub struct GroupContext<G: Group> {
    g: G::Element,
    h: G::Element,
    _group: PhantomData<G>,
}

impl<G: Group> GroupContext<G> {
    pub fn new() -> Self {
        Self {
            g: G::generator(),
            h: G::second_generator(),
            _group: PhantomData,
        }
    }

    pub fn g(&self) -> G::Element {
        self.g
    }

    pub fn h(&self) -> G::Element {
        self.h
    }

    pub fn backend_id(&self) -> &'static str {
        G::BACKEND_ID
    }

    pub fn security_label(&self) -> &'static str {
        G::SECURITY_LABEL
    }

    pub fn order_le_bytes(&self) -> Vec<u8> {
        G::order_le_bytes()
    }

    pub fn order_bits(&self) -> u32 {
        order_bits::<G>()
    }

    pub fn hash_to_scalar(&self, domain_tag: &[u8], parts: &[&[u8]]) -> G::Scalar {
        hash_to_scalar::<G>(domain_tag, parts)
    }

    pub fn random_scalar_nonzero<R: RngCore + CryptoRng + ?Sized>(&self, rng: &mut R) -> G::Scalar {
        random_scalar_nonzero::<G, R>(rng)
    }

    pub fn mul(&self, a: &G::Element, b: &G::Element) -> G::Element {
        G::mul(a, b)
    }

    pub fn exp(&self, base: &G::Element, e: &G::Scalar) -> G::Element {
        G::exp(base, e)
    }

    pub fn multi_exp(&self, pairs: &[(G::Element, G::Scalar)]) -> G::Element {
        G::multi_exp(pairs)
    }
}

impl<G: Group> Default for GroupContext<G> {
    fn default() -> Self {
        Self::new()
    }
}

impl<G: Group> Clone for GroupContext<G> {
    fn clone(&self) -> Self {
        Self { g: self.g, h: self.h, _group: PhantomData }
    }
}

impl<G: Group> PartialEq for GroupContext<G> {
    fn eq(&self, other: &Self) -> bool {
        self.g == other.g && self.h == other.h
    }
}

impl<G: Group> Eq for GroupContext<G> {}

impl<G: Group> fmt::Debug for GroupContext<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupContext")
            .field("backend", &G::BACKEND_ID)
            .field("label", &G::SECURITY_LABEL)
            .field("order_bits", &self.order_bits())
            .field("g", &self.g)
            .field("h", &self.h)
            .finish()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("unknown group backend `{0}` (expected `prod` or `toy`)")]
    UnknownBackend(String),
}

/// A context for a backend chosen at runtime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyGroupContext {
    Prod(GroupContext<Ristretto255>),
    Toy(GroupContext<ToyGroup>),
}

impl AnyGroupContext {
    pub fn backend_id(&self) -> &'static str {
        match self {
            Self::Prod(ctx) => ctx.backend_id(),
            Self::Toy(ctx) => ctx.backend_id(),
        }
    }
}

/// Looks up a registered backend by id (`"prod"` or `"toy"`).
pub fn setup_group(backend_id: &str) -> Result<AnyGroupContext, ConfigError> {
    match backend_id {
        Ristretto255::BACKEND_ID => Ok(AnyGroupContext::Prod(GroupContext::new())),
        ToyGroup::BACKEND_ID => Ok(AnyGroupContext::Toy(GroupContext::new())),
        other => Err(ConfigError::UnknownBackend(other.to_owned())),
    }
}
