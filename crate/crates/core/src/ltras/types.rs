use std::collections::HashSet;
use std::fmt;

use rand::{CryptoRng, RngCore};

use super::{LtrasError, D_TAG};
use crate::group::{hash_to_scalar, random_scalar_nonzero, Group, GroupContext};

/// A signing key `sk` in `Z_p^*` with `pk = g^sk`.
pub struct KeyPair<G: Group> {
    sk: G::Scalar,
    pk: G::Element,
}

impl<G: Group> KeyPair<G> {
    pub fn generate<R: RngCore + CryptoRng + ?Sized>(_ctx: &GroupContext<G>, rng: &mut R) -> Self {
        let sk = random_scalar_nonzero::<G, R>(rng);
        Self { sk, pk: G::exp_g(&sk) }
    }

    pub fn from_secret(_ctx: &GroupContext<G>, sk: G::Scalar) -> Result<Self, LtrasError> {
        if sk == G::scalar_zero() {
            return Err(LtrasError::ZeroSecret);
        }
        Ok(Self { sk, pk: G::exp_g(&sk) })
    }

    pub fn secret(&self) -> G::Scalar {
        self.sk
    }

    pub fn public(&self) -> G::Element {
        self.pk
    }
}

impl<G: Group> Clone for KeyPair<G> {
    fn clone(&self) -> Self {
        Self { sk: self.sk, pk: self.pk }
    }
}

impl<G: Group> fmt::Debug for KeyPair<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KeyPair").field("pk", &self.pk).finish_non_exhaustive()
    }
}

/// An ordered list of distinct public keys together with its rogue-key factor `d = H(PK)`.
pub struct Ring<G: Group> {
    keys: Vec<G::Element>,
    encoded: Vec<u8>,
    d: G::Scalar,
}

impl<G: Group> Ring<G> {
    pub fn new(keys: Vec<G::Element>) -> Result<Self, LtrasError> {
        if keys.is_empty() {
            return Err(LtrasError::EmptyRing);
        }
        let mut encoded = Vec::with_capacity(keys.len() * G::ELEMENT_LEN);
        let mut seen = std::collections::HashMap::with_capacity(keys.len());
        for (index, key) in keys.iter().enumerate() {
            let bytes = G::encode_element(key);
            if let Some(&first) = seen.get(&bytes) {
                return Err(LtrasError::DuplicateKey { first, second: index });
            }
            seen.insert(bytes, index);
            encoded.extend_from_slice(bytes.as_ref());
        }
        let d = hash_to_scalar::<G>(D_TAG, &[&encoded]);
        Ok(Self { keys, encoded, d })
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    /// Always false; rings hold at least one key.
    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[G::Element] {
        &self.keys
    }

    /// Concatenated canonical encodings of the keys, in ring order.
    pub fn encoded_keys(&self) -> &[u8] {
        &self.encoded
    }

    pub fn d(&self) -> G::Scalar {
        self.d
    }

    pub fn position(&self, key: &G::Element) -> Option<usize> {
        self.keys.iter().position(|k| k == key)
    }
}

impl<G: Group> Clone for Ring<G> {
    fn clone(&self) -> Self {
        Self { keys: self.keys.clone(), encoded: self.encoded.clone(), d: self.d }
    }
}

impl<G: Group> PartialEq for Ring<G> {
    fn eq(&self, other: &Self) -> bool {
        self.encoded == other.encoded
    }
}

impl<G: Group> Eq for Ring<G> {}

impl<G: Group> fmt::Debug for Ring<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ring").field("keys", &self.keys).field("d", &self.d).finish()
    }
}

/// The `t` consecutive ring positions the signer holds secrets for, starting at `start`.
pub struct SignerWindow<G: Group> {
    start: usize,
    secrets: Vec<G::Scalar>,
    allow_wraparound: bool,
}

impl<G: Group> SignerWindow<G> {
    /// A window that must satisfy `start + width <= n`.
    pub fn new(start: usize, secrets: Vec<G::Scalar>) -> Self {
        Self { start, secrets, allow_wraparound: false }
    }

    /// Lets the window run past the last ring key back to index 0.
    pub fn allow_wraparound(mut self) -> Self {
        self.allow_wraparound = true;
        self
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn width(&self) -> usize {
        self.secrets.len()
    }

    pub fn secrets(&self) -> &[G::Scalar] {
        &self.secrets
    }

    pub fn wraps(&self) -> bool {
        self.allow_wraparound
    }

    /// Ring indices covered by the window for a ring of size `n`.
    pub fn indices(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.secrets.len()).map(move |i| (self.start + i) % n)
    }

    /// Checks the window's shape against `ring` and that every secret matches its key.
    pub fn validate(&self, ring: &Ring<G>) -> Result<(), LtrasError> {
        let n = ring.len();
        let t = self.width();
        if t == 0 || t > n {
            return Err(LtrasError::ThresholdOutOfRange { t, n });
        }
        let fits = if self.allow_wraparound { self.start < n } else { self.start + t <= n };
        if !fits {
            return Err(LtrasError::WindowOutOfRange { start: self.start, width: t, n });
        }
        for (offset, (index, sk)) in self.indices(n).zip(&self.secrets).enumerate() {
            if G::exp_g(sk) != ring.keys()[index] {
                return Err(LtrasError::KeyMismatch { offset, index });
            }
        }
        Ok(())
    }
}

impl<G: Group> Clone for SignerWindow<G> {
    fn clone(&self) -> Self {
        Self {
            start: self.start,
            secrets: self.secrets.clone(),
            allow_wraparound: self.allow_wraparound,
        }
    }
}

impl<G: Group> fmt::Debug for SignerWindow<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SignerWindow")
            .field("start", &self.start)
            .field("width", &self.width())
            .field("allow_wraparound", &self.allow_wraparound)
            .finish_non_exhaustive()
    }
}

/// Hard-relation statement `(W1, W2) = (g^w, h^w)`.
pub struct StatementPair<G: Group> {
    pub w1: G::Element,
    pub w2: G::Element,
}

impl<G: Group> Clone for StatementPair<G> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<G: Group> Copy for StatementPair<G> {}

impl<G: Group> PartialEq for StatementPair<G> {
    fn eq(&self, other: &Self) -> bool {
        self.w1 == other.w1 && self.w2 == other.w2
    }
}

impl<G: Group> Eq for StatementPair<G> {}

impl<G: Group> fmt::Debug for StatementPair<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StatementPair").field("w1", &self.w1).field("w2", &self.w2).finish()
    }
}

/// Nonzero witness `w` for a [`StatementPair`].
pub struct Witness<G: Group>(pub(crate) G::Scalar);

impl<G: Group> Witness<G> {
    pub fn new(w: G::Scalar) -> Result<Self, LtrasError> {
        if w == G::scalar_zero() {
            return Err(LtrasError::ZeroSecret);
        }
        Ok(Self(w))
    }

    pub fn scalar(&self) -> G::Scalar {
        self.0
    }
}

impl<G: Group> Clone for Witness<G> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<G: Group> Copy for Witness<G> {}

impl<G: Group> PartialEq for Witness<G> {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl<G: Group> Eq for Witness<G> {}

impl<G: Group> fmt::Debug for Witness<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Witness(..)")
    }
}

/// A link tag `h^sk` with its canonical encoding cached; `Link` compares encodings.
pub struct LinkTag<G: Group> {
    element: G::Element,
    bytes: G::ElementBytes,
}

impl<G: Group> LinkTag<G> {
    pub fn new(element: G::Element) -> Self {
        Self { element, bytes: G::encode_element(&element) }
    }

    pub fn element(&self) -> G::Element {
        self.element
    }

    pub fn bytes(&self) -> &G::ElementBytes {
        &self.bytes
    }
}

impl<G: Group> Clone for LinkTag<G> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<G: Group> Copy for LinkTag<G> {}

impl<G: Group> PartialEq for LinkTag<G> {
    fn eq(&self, other: &Self) -> bool {
        self.bytes == other.bytes
    }
}

impl<G: Group> Eq for LinkTag<G> {}

impl<G: Group> fmt::Debug for LinkTag<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinkTag({:?})", self.element)
    }
}

/// `(z̃, C, TAG)`: the object exchanged before adaptation.
pub struct PreSignature<G: Group> {
    pub z_tilde: G::Scalar,
    pub challenges: Vec<G::Scalar>,
    pub tags: Vec<LinkTag<G>>,
}

/// `(z, C, TAG)`: the on-ledger signature.
pub struct Signature<G: Group> {
    pub z: G::Scalar,
    pub challenges: Vec<G::Scalar>,
    pub tags: Vec<LinkTag<G>>,
}

impl<G: Group> Signature<G> {
    /// Encodings of all link tags, for ledger bookkeeping.
    pub fn tag_set(&self) -> HashSet<G::ElementBytes> {
        self.tags.iter().map(|t| t.bytes).collect()
    }
}

macro_rules! impl_sig_traits {
    ($ty:ident, $resp:ident) => {
        impl<G: Group> Clone for $ty<G> {
            fn clone(&self) -> Self {
                Self {
                    $resp: self.$resp,
                    challenges: self.challenges.clone(),
                    tags: self.tags.clone(),
                }
            }
        }

        impl<G: Group> PartialEq for $ty<G> {
            fn eq(&self, other: &Self) -> bool {
                self.$resp == other.$resp
                    && self.challenges == other.challenges
                    && self.tags == other.tags
            }
        }

        impl<G: Group> Eq for $ty<G> {}

        impl<G: Group> fmt::Debug for $ty<G> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_struct(stringify!($ty))
                    .field(stringify!($resp), &self.$resp)
                    .field("challenges", &self.challenges)
                    .field("tags", &self.tags)
                    .finish()
            }
        }

        impl<G: Group> $ty<G> {
            /// Ring size `n`.
            pub fn ring_size(&self) -> usize {
                self.challenges.len()
            }

            /// Threshold `t`.
            pub fn threshold(&self) -> usize {
                self.tags.len()
            }
        }
    };
}

impl_sig_traits!(PreSignature, z_tilde);
impl_sig_traits!(Signature, z);

/// Window-aggregated keys `y_0..y_{n-1}` and the tag aggregate `l`.
pub struct AggregateSet<G: Group> {
    pub y: Vec<G::Element>,
    pub l: G::Element,
}

impl<G: Group> Clone for AggregateSet<G> {
    fn clone(&self) -> Self {
        Self { y: self.y.clone(), l: self.l }
    }
}

impl<G: Group> PartialEq for AggregateSet<G> {
    fn eq(&self, other: &Self) -> bool {
        self.y == other.y && self.l == other.l
    }
}

impl<G: Group> fmt::Debug for AggregateSet<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AggregateSet").field("y", &self.y).field("l", &self.l).finish()
    }
}
