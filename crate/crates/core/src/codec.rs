//! Canonical wire formats.
//!
//! Every object is `version (1 byte) || object tag (1 byte) || payload`. Payloads are
//! fixed-width concatenations: scalars are `SCALAR_LEN` bytes little-endian, elements
//! use the backend's `ELEMENT_LEN`-byte canonical encoding, integers are little-endian.
//!
//! | object            | payload                                             |
//! |-------------------|-----------------------------------------------------|
//! | element           | `S_g`                                               |
//! | scalar            | `S_z`                                               |
//! | ring              | `n · S_g` (keys in ring order)                      |
//! | statement pair    | `W1 ‖ W2` = `2 · S_g`                               |
//! | pre-signature     | `z̃ ‖ c_0..c_{n-1} ‖ tag_0..tag_{t-1}` = `(n+1)·S_z + t·S_g` |
//! | signature         | `z ‖ c_0..c_{n-1} ‖ tag_0..tag_{t-1}` = `(n+1)·S_z + t·S_g` |
//! | plain pre-sig/sig | `c ‖ s̃` / `c ‖ s` = `2 · S_z`                        |
//! | key pair          | `sk ‖ pk`                                           |
//! | witness           | `w` (nonzero)                                       |
//! | swap transaction  | `chain ‖ payer ‖ u16 len ‖ payee ‖ u64 amount ‖ u64 nonce` |
//!
//! Pre-signatures and signatures carry no length fields: the decoder is told `(n, t)`
//! by the caller, who knows the ring and threshold being verified against.

use thiserror::Error;

use crate::group::Group;
use crate::ltras::{KeyPair, LinkTag, LtrasError, PreSignature, Ring, Signature, StatementPair, Witness};
use crate::schnorr_adaptor::{PlainPreSignature, PlainSignature};
use crate::swap::{ChainId, Payer, SwapTransaction};

pub const WIRE_VERSION: u8 = 1;
/// Bytes added in front of every payload.
pub const HEADER_LEN: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum ObjectTag {
    Element = 0x01,
    Scalar = 0x02,
    Ring = 0x03,
    StatementPair = 0x04,
    PreSignature = 0x05,
    Signature = 0x06,
    PlainPreSignature = 0x07,
    PlainSignature = 0x08,
    SwapTransaction = 0x09,
    KeyPair = 0x0a,
    Witness = 0x0b,
}

impl ObjectTag {
    pub fn from_byte(b: u8) -> Option<Self> {
        use ObjectTag::*;
        [
            Element,
            Scalar,
            Ring,
            StatementPair,
            PreSignature,
            Signature,
            PlainPreSignature,
            PlainSignature,
            SwapTransaction,
            KeyPair,
            Witness,
        ]
        .into_iter()
        .find(|t| *t as u8 == b)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("input ends after {available} bytes, {needed} more needed at offset {offset}")]
    Truncated { offset: usize, needed: usize, available: usize },
    #[error("{0} trailing bytes after the object")]
    TrailingBytes(usize),
    #[error("unsupported wire version {0}")]
    UnsupportedVersion(u8),
    #[error("unknown object tag {0:#04x}")]
    UnknownTag(u8),
    #[error("expected object tag {expected:?}, found {found:?}")]
    WrongTag { expected: ObjectTag, found: ObjectTag },
    #[error("non-canonical scalar at offset {offset}")]
    NonCanonicalScalar { offset: usize },
    #[error("invalid group element encoding at offset {offset}")]
    InvalidElement { offset: usize },
    #[error("ring payload of {len} bytes is not a positive multiple of {element_len}")]
    RingLength { len: usize, element_len: usize },
    #[error("invalid ring: {0}")]
    InvalidRing(LtrasError),
    #[error("invalid shape: ring size {n}, threshold {t}")]
    InvalidShape { n: usize, t: usize },
    #[error("zero scalar where a nonzero secret is required")]
    ZeroSecret,
    #[error("public key does not match the secret key")]
    KeyMismatch,
    #[error("unknown chain id {0:#04x}")]
    UnknownChain(u8),
    #[error("payee is not valid UTF-8")]
    InvalidPayee,
}

/// Cursor over a byte slice that reports offsets in errors.
pub struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8], CodecError> {
        if self.remaining() < n {
            return Err(CodecError::Truncated { offset: self.pos, needed: n, available: self.remaining() });
        }
        let out = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    pub fn rest(&mut self) -> &'a [u8] {
        let out = &self.bytes[self.pos..];
        self.pos = self.bytes.len();
        out
    }

    pub fn u8(&mut self) -> Result<u8, CodecError> {
        Ok(self.take(1)?[0])
    }

    pub fn u16(&mut self) -> Result<u16, CodecError> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().expect("2 bytes")))
    }

    pub fn u32(&mut self) -> Result<u32, CodecError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    pub fn u64(&mut self) -> Result<u64, CodecError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    pub fn scalar<G: Group>(&mut self) -> Result<G::Scalar, CodecError> {
        let offset = self.pos;
        G::decode_scalar(self.take(G::SCALAR_LEN)?).ok_or(CodecError::NonCanonicalScalar { offset })
    }

    pub fn element<G: Group>(&mut self) -> Result<G::Element, CodecError> {
        let offset = self.pos;
        G::decode_element(self.take(G::ELEMENT_LEN)?).ok_or(CodecError::InvalidElement { offset })
    }

    fn link_tag<G: Group>(&mut self) -> Result<LinkTag<G>, CodecError> {
        let offset = self.pos;
        let raw = self.take(G::ELEMENT_LEN)?;
        let element = G::decode_element(raw).ok_or(CodecError::InvalidElement { offset })?;
        Ok(LinkTag::new(element))
    }

    pub fn finish(self) -> Result<(), CodecError> {
        match self.remaining() {
            0 => Ok(()),
            n => Err(CodecError::TrailingBytes(n)),
        }
    }
}

/// An object with a canonical wire encoding.
pub trait Wire: Sized {
    const TAG: ObjectTag;
    /// Out-of-band parameters the decoder needs (`()` for self-delimiting objects).
    type Shape: Copy;

    fn encode_payload(&self, out: &mut Vec<u8>);
    fn decode_payload(reader: &mut Reader<'_>, shape: Self::Shape) -> Result<Self, CodecError>;
}

/// Ring size and threshold of a (pre-)signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SigShape {
    pub n: usize,
    pub t: usize,
}

impl SigShape {
    pub fn new(n: usize, t: usize) -> Self {
        Self { n, t }
    }

    fn check(self) -> Result<Self, CodecError> {
        if self.n == 0 || self.t == 0 || self.t > self.n {
            return Err(CodecError::InvalidShape { n: self.n, t: self.t });
        }
        Ok(self)
    }

    /// `(n+1)·S_z + t·S_g`.
    pub fn payload_len<G: Group>(self) -> usize {
        (self.n + 1) * G::SCALAR_LEN + self.t * G::ELEMENT_LEN
    }
}

pub fn encode<T: Wire>(x: &T) -> Vec<u8> {
    let mut out = vec![WIRE_VERSION, T::TAG as u8];
    x.encode_payload(&mut out);
    out
}

pub fn encode_payload<T: Wire>(x: &T) -> Vec<u8> {
    let mut out = Vec::new();
    x.encode_payload(&mut out);
    out
}

/// Reads the header and returns the object tag without decoding the payload.
pub fn peek_tag(bytes: &[u8]) -> Result<ObjectTag, CodecError> {
    let mut reader = Reader::new(bytes);
    read_header(&mut reader)
}

fn read_header(reader: &mut Reader<'_>) -> Result<ObjectTag, CodecError> {
    let version = reader.u8()?;
    if version != WIRE_VERSION {
        return Err(CodecError::UnsupportedVersion(version));
    }
    let tag = reader.u8()?;
    ObjectTag::from_byte(tag).ok_or(CodecError::UnknownTag(tag))
}

pub fn decode<T: Wire>(bytes: &[u8], shape: T::Shape) -> Result<T, CodecError> {
    let mut reader = Reader::new(bytes);
    let found = read_header(&mut reader)?;
    if found != T::TAG {
        return Err(CodecError::WrongTag { expected: T::TAG, found });
    }
    let x = T::decode_payload(&mut reader, shape)?;
    reader.finish()?;
    Ok(x)
}

pub fn decode_payload<T: Wire>(bytes: &[u8], shape: T::Shape) -> Result<T, CodecError> {
    let mut reader = Reader::new(bytes);
    let x = T::decode_payload(&mut reader, shape)?;
    reader.finish()?;
    Ok(x)
}

/// A bare group element on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WireElement<G: Group>(pub G::Element);

/// A bare scalar on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WireScalar<G: Group>(pub G::Scalar);

impl<G: Group> Wire for WireElement<G> {
    const TAG: ObjectTag = ObjectTag::Element;
    type Shape = ();

    fn encode_payload(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(G::encode_element(&self.0).as_ref());
    }

    fn decode_payload(reader: &mut Reader<'_>, _: ()) -> Result<Self, CodecError> {
        reader.element::<G>().map(Self)
    }
}

impl<G: Group> Wire for WireScalar<G> {
    const TAG: ObjectTag = ObjectTag::Scalar;
    type Shape = ();

    fn encode_payload(&self, out: &mut Vec<u8>) {
        G::encode_scalar(&self.0, out);
    }

    fn decode_payload(reader: &mut Reader<'_>, _: ()) -> Result<Self, CodecError> {
        reader.scalar::<G>().map(Self)
    }
}

impl<G: Group> Wire for Ring<G> {
    const TAG: ObjectTag = ObjectTag::Ring;
    type Shape = ();

    fn encode_payload(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(self.encoded_keys());
    }

    fn decode_payload(reader: &mut Reader<'_>, _: ()) -> Result<Self, CodecError> {
        let rest = reader.remaining();
        if rest == 0 || rest % G::ELEMENT_LEN != 0 {
            return Err(CodecError::RingLength { len: rest, element_len: G::ELEMENT_LEN });
        }
        let keys = (0..rest / G::ELEMENT_LEN)
            .map(|_| reader.element::<G>())
            .collect::<Result<Vec<_>, _>>()?;
        Ring::new(keys).map_err(CodecError::InvalidRing)
    }
}

impl<G: Group> Wire for StatementPair<G> {
    const TAG: ObjectTag = ObjectTag::StatementPair;
    type Shape = ();

    fn encode_payload(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(G::encode_element(&self.w1).as_ref());
        out.extend_from_slice(G::encode_element(&self.w2).as_ref());
    }

    fn decode_payload(reader: &mut Reader<'_>, _: ()) -> Result<Self, CodecError> {
        Ok(Self { w1: reader.element::<G>()?, w2: reader.element::<G>()? })
    }
}

fn encode_transcript<G: Group>(resp: &G::Scalar, challenges: &[G::Scalar], tags: &[LinkTag<G>], out: &mut Vec<u8>) {
    G::encode_scalar(resp, out);
    for c in challenges {
        G::encode_scalar(c, out);
    }
    for tag in tags {
        out.extend_from_slice(tag.bytes().as_ref());
    }
}

#[allow(clippy::type_complexity)]
fn decode_transcript<G: Group>(
    reader: &mut Reader<'_>,
    shape: SigShape,
) -> Result<(G::Scalar, Vec<G::Scalar>, Vec<LinkTag<G>>), CodecError> {
    let shape = shape.check()?;
    let resp = reader.scalar::<G>()?;
    let challenges = (0..shape.n).map(|_| reader.scalar::<G>()).collect::<Result<_, _>>()?;
    let tags = (0..shape.t).map(|_| reader.link_tag::<G>()).collect::<Result<_, _>>()?;
    Ok((resp, challenges, tags))
}

impl<G: Group> Wire for PreSignature<G> {
    const TAG: ObjectTag = ObjectTag::PreSignature;
    type Shape = SigShape;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        encode_transcript(&self.z_tilde, &self.challenges, &self.tags, out);
    }

    fn decode_payload(reader: &mut Reader<'_>, shape: SigShape) -> Result<Self, CodecError> {
        let (z_tilde, challenges, tags) = decode_transcript(reader, shape)?;
        Ok(Self { z_tilde, challenges, tags })
    }
}

impl<G: Group> Wire for Signature<G> {
    const TAG: ObjectTag = ObjectTag::Signature;
    type Shape = SigShape;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        encode_transcript(&self.z, &self.challenges, &self.tags, out);
    }

    fn decode_payload(reader: &mut Reader<'_>, shape: SigShape) -> Result<Self, CodecError> {
        let (z, challenges, tags) = decode_transcript(reader, shape)?;
        Ok(Self { z, challenges, tags })
    }
}

impl<G: Group> Wire for PlainPreSignature<G> {
    const TAG: ObjectTag = ObjectTag::PlainPreSignature;
    type Shape = ();

    fn encode_payload(&self, out: &mut Vec<u8>) {
        G::encode_scalar(&self.c, out);
        G::encode_scalar(&self.s_tilde, out);
    }

    fn decode_payload(reader: &mut Reader<'_>, _: ()) -> Result<Self, CodecError> {
        Ok(Self { c: reader.scalar::<G>()?, s_tilde: reader.scalar::<G>()? })
    }
}

impl<G: Group> Wire for PlainSignature<G> {
    const TAG: ObjectTag = ObjectTag::PlainSignature;
    type Shape = ();

    fn encode_payload(&self, out: &mut Vec<u8>) {
        G::encode_scalar(&self.c, out);
        G::encode_scalar(&self.s, out);
    }

    fn decode_payload(reader: &mut Reader<'_>, _: ()) -> Result<Self, CodecError> {
        Ok(Self { c: reader.scalar::<G>()?, s: reader.scalar::<G>()? })
    }
}

impl<G: Group> Wire for KeyPair<G> {
    const TAG: ObjectTag = ObjectTag::KeyPair;
    type Shape = ();

    fn encode_payload(&self, out: &mut Vec<u8>) {
        G::encode_scalar(&self.secret(), out);
        out.extend_from_slice(G::encode_element(&self.public()).as_ref());
    }

    fn decode_payload(reader: &mut Reader<'_>, _: ()) -> Result<Self, CodecError> {
        let sk = reader.scalar::<G>()?;
        let pk = reader.element::<G>()?;
        if sk == G::scalar_zero() {
            return Err(CodecError::ZeroSecret);
        }
        if G::exp_g(&sk) != pk {
            return Err(CodecError::KeyMismatch);
        }
        Ok(KeyPair::from_secret(&Default::default(), sk).expect("nonzero"))
    }
}

impl<G: Group> Wire for Witness<G> {
    const TAG: ObjectTag = ObjectTag::Witness;
    type Shape = ();

    fn encode_payload(&self, out: &mut Vec<u8>) {
        G::encode_scalar(&self.scalar(), out);
    }

    fn decode_payload(reader: &mut Reader<'_>, _: ()) -> Result<Self, CodecError> {
        Witness::new(reader.scalar::<G>()?).map_err(|_| CodecError::ZeroSecret)
    }
}

impl<G: Group> Wire for SwapTransaction<G> {
    const TAG: ObjectTag = ObjectTag::SwapTransaction;
    type Shape = ();

    fn encode_payload(&self, out: &mut Vec<u8>) {
        out.push(self.chain.as_byte());
        match &self.payer {
            Payer::Account(pk) => out.extend_from_slice(G::encode_element(pk).as_ref()),
            Payer::Ring { ring, threshold } => {
                out.extend_from_slice(&(ring.len() as u32).to_le_bytes());
                out.extend_from_slice(ring.encoded_keys());
                out.extend_from_slice(&(*threshold as u32).to_le_bytes());
            }
        }
        let payee = self.payee.as_bytes();
        out.extend_from_slice(&(payee.len() as u16).to_le_bytes());
        out.extend_from_slice(payee);
        out.extend_from_slice(&self.amount.to_le_bytes());
        out.extend_from_slice(&self.nonce.to_le_bytes());
    }

    fn decode_payload(reader: &mut Reader<'_>, _: ()) -> Result<Self, CodecError> {
        let chain_byte = reader.u8()?;
        let chain = ChainId::from_byte(chain_byte).ok_or(CodecError::UnknownChain(chain_byte))?;
        let payer = match chain {
            ChainId::A => Payer::Account(reader.element::<G>()?),
            ChainId::B => {
                let n = reader.u32()? as usize;
                if n == 0 {
                    return Err(CodecError::InvalidRing(LtrasError::EmptyRing));
                }
                let keys = (0..n).map(|_| reader.element::<G>()).collect::<Result<Vec<_>, _>>()?;
                let ring = Ring::new(keys).map_err(CodecError::InvalidRing)?;
                let threshold = reader.u32()? as usize;
                if threshold == 0 || threshold > n {
                    return Err(CodecError::InvalidShape { n, t: threshold });
                }
                Payer::Ring { ring, threshold }
            }
        };
        let len = reader.u16()? as usize;
        let payee = std::str::from_utf8(reader.take(len)?).map_err(|_| CodecError::InvalidPayee)?.to_owned();
        let amount = reader.u64()?;
        let nonce = reader.u64()?;
        Ok(Self { chain, payer, payee, amount, nonce })
    }
}
