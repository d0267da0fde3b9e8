use std::sync::OnceLock;

use curve25519_dalek::constants::{RISTRETTO_BASEPOINT_POINT, RISTRETTO_BASEPOINT_TABLE};
use curve25519_dalek::ristretto::{CompressedRistretto, RistrettoBasepointTable, RistrettoPoint};
use curve25519_dalek::traits::{Identity, VartimeMultiscalarMul};
use curve25519_dalek::Scalar;
use rand::{CryptoRng, RngCore};
use sha2::Sha512;

use super::{Group, SECOND_GENERATOR_SEED};

/// `2^252 + 27742317777372353535851937790883648493`, little-endian.
const ORDER_LE: [u8; 32] = [
    0xed, 0xd3, 0xf5, 0x5c, 0x1a, 0x63, 0x12, 0x58, 0xd6, 0x9c, 0xf7, 0xa2, 0xde, 0xf9, 0xde, 0x14,
    0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0x10,
];

/// The ristretto255 prime-order group over Curve25519.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Ristretto255;

fn h_point() -> &'static RistrettoPoint {
    static H: OnceLock<RistrettoPoint> = OnceLock::new();
    H.get_or_init(|| RistrettoPoint::hash_from_bytes::<Sha512>(SECOND_GENERATOR_SEED))
}

fn h_table() -> &'static RistrettoBasepointTable {
    static TABLE: OnceLock<RistrettoBasepointTable> = OnceLock::new();
    TABLE.get_or_init(|| RistrettoBasepointTable::create(h_point()))
}

impl Group for Ristretto255 {
    type Scalar = Scalar;
    type Element = RistrettoPoint;
    type ElementBytes = [u8; 32];

    const BACKEND_ID: &'static str = "prod";
    const SECURITY_LABEL: &'static str = "ristretto255";
    const SCALAR_LEN: usize = 32;
    const ELEMENT_LEN: usize = 32;

    fn order_le_bytes() -> Vec<u8> {
        ORDER_LE.to_vec()
    }

    fn generator() -> RistrettoPoint {
        RISTRETTO_BASEPOINT_POINT
    }

    fn second_generator() -> RistrettoPoint {
        *h_point()
    }

    fn identity() -> RistrettoPoint {
        RistrettoPoint::identity()
    }

    fn mul(a: &RistrettoPoint, b: &RistrettoPoint) -> RistrettoPoint {
        a + b
    }

    fn invert_element(a: &RistrettoPoint) -> RistrettoPoint {
        -a
    }

    fn exp(base: &RistrettoPoint, e: &Scalar) -> RistrettoPoint {
        base * e
    }

    fn exp_g(e: &Scalar) -> RistrettoPoint {
        RISTRETTO_BASEPOINT_TABLE * e
    }

    fn exp_h(e: &Scalar) -> RistrettoPoint {
        h_table() * e
    }

    fn multi_exp(pairs: &[(RistrettoPoint, Scalar)]) -> RistrettoPoint {
        RistrettoPoint::vartime_multiscalar_mul(
            pairs.iter().map(|(_, e)| e),
            pairs.iter().map(|(p, _)| p),
        )
    }

    fn scalar_from_u64(v: u64) -> Scalar {
        Scalar::from(v)
    }

    fn invert_scalar(s: &Scalar) -> Option<Scalar> {
        (*s != Scalar::ZERO).then(|| s.invert())
    }

    fn scalar_from_digest(digest: &[u8; 64]) -> Scalar {
        Scalar::from_bytes_mod_order_wide(digest)
    }

    fn random_scalar<R: RngCore + CryptoRng + ?Sized>(rng: &mut R) -> Scalar {
        let mut wide = [0u8; 64];
        rng.fill_bytes(&mut wide);
        Scalar::from_bytes_mod_order_wide(&wide)
    }

    fn encode_scalar(s: &Scalar, out: &mut Vec<u8>) {
        out.extend_from_slice(s.as_bytes());
    }

    fn decode_scalar(bytes: &[u8]) -> Option<Scalar> {
        let arr: [u8; 32] = bytes.try_into().ok()?;
        Option::from(Scalar::from_canonical_bytes(arr))
    }

    fn encode_element(e: &RistrettoPoint) -> [u8; 32] {
        e.compress().to_bytes()
    }

    fn decode_element(bytes: &[u8]) -> Option<RistrettoPoint> {
        CompressedRistretto::from_slice(bytes).ok()?.decompress()
    }
}
