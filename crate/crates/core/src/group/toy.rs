use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::{CryptoRng, Rng, RngCore};

use super::Group;

/// Modulus of the ambient group `Z_q^*`.
pub const TOY_MODULUS: u16 = 607;
/// Order of the subgroup used as `G_p` (`607 - 1 = 2 * 3 * 101`).
pub const TOY_ORDER: u8 = 101;

const G: u16 = 7;
const H: u16 = 8;

/// Residue modulo 101.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ToyScalar(u8);

impl ToyScalar {
    pub fn new(value: u64) -> Self {
        Self((value % TOY_ORDER as u64) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

impl fmt::Debug for ToyScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ToyScalar({})", self.0)
    }
}

impl Add for ToyScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(((self.0 as u16 + rhs.0 as u16) % TOY_ORDER as u16) as u8)
    }
}

impl Sub for ToyScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(((self.0 as u16 + TOY_ORDER as u16 - rhs.0 as u16) % TOY_ORDER as u16) as u8)
    }
}

impl Mul for ToyScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(((self.0 as u16 * rhs.0 as u16) % TOY_ORDER as u16) as u8)
    }
}

impl Neg for ToyScalar {
    type Output = Self;
    fn neg(self) -> Self {
        Self(((TOY_ORDER as u16 - self.0 as u16) % TOY_ORDER as u16) as u8)
    }
}

/// Element of the order-101 subgroup of `Z_607^*`, stored as its residue.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ToyElement(u16);

impl ToyElement {
    /// Returns `None` unless `residue` lies in the order-101 subgroup.
    pub fn new(residue: u16) -> Option<Self> {
        (residue != 0 && residue < TOY_MODULUS && pow_mod(residue, TOY_ORDER as u32) == 1)
            .then_some(Self(residue))
    }

    pub fn value(self) -> u16 {
        self.0
    }
}

impl fmt::Debug for ToyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ToyElement({})", self.0)
    }
}

fn mul_mod(a: u16, b: u16) -> u16 {
    ((a as u32 * b as u32) % TOY_MODULUS as u32) as u16
}

fn pow_mod(base: u16, mut e: u32) -> u16 {
    let mut acc = 1u16;
    let mut b = base % TOY_MODULUS;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b);
        }
        b = mul_mod(b, b);
        e >>= 1;
    }
    acc
}

/// The order-101 subgroup of `Z_607^*` with `g = 7`, `h = 8`.
///
/// Offers no security whatsoever; it exists so that every value can be checked
/// against an exhaustive exponent table.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ToyGroup;

impl Group for ToyGroup {
    type Scalar = ToyScalar;
    type Element = ToyElement;
    type ElementBytes = [u8; 2];

    const BACKEND_ID: &'static str = "toy";
    const SECURITY_LABEL: &'static str = "toy-607";
    const SCALAR_LEN: usize = 1;
    const ELEMENT_LEN: usize = 2;

    fn order_le_bytes() -> Vec<u8> {
        vec![TOY_ORDER]
    }

    fn generator() -> ToyElement {
        ToyElement(G)
    }

    fn second_generator() -> ToyElement {
        ToyElement(H)
    }

    fn identity() -> ToyElement {
        ToyElement(1)
    }

    fn mul(a: &ToyElement, b: &ToyElement) -> ToyElement {
        ToyElement(mul_mod(a.0, b.0))
    }

    fn invert_element(a: &ToyElement) -> ToyElement {
        ToyElement(pow_mod(a.0, TOY_ORDER as u32 - 1))
    }

    fn exp(base: &ToyElement, e: &ToyScalar) -> ToyElement {
        ToyElement(pow_mod(base.0, e.0 as u32))
    }

    fn scalar_from_u64(v: u64) -> ToyScalar {
        ToyScalar::new(v)
    }

    fn invert_scalar(s: &ToyScalar) -> Option<ToyScalar> {
        if s.0 == 0 {
            return None;
        }
        // Fermat: s^(p-2)
        let mut acc = ToyScalar(1);
        for _ in 0..TOY_ORDER - 2 {
            acc = acc * *s;
        }
        Some(acc)
    }

    fn scalar_from_digest(digest: &[u8; 64]) -> ToyScalar {
        let acc = digest
            .iter()
            .rev()
            .fold(0u32, |acc, &b| (acc * 256 + b as u32) % TOY_ORDER as u32);
        ToyScalar(acc as u8)
    }

    fn random_scalar<R: RngCore + CryptoRng + ?Sized>(rng: &mut R) -> ToyScalar {
        ToyScalar(rng.gen_range(0..TOY_ORDER))
    }

    fn encode_scalar(s: &ToyScalar, out: &mut Vec<u8>) {
        out.push(s.0);
    }

    fn decode_scalar(bytes: &[u8]) -> Option<ToyScalar> {
        match bytes {
            [b] if *b < TOY_ORDER => Some(ToyScalar(*b)),
            _ => None,
        }
    }

    fn encode_element(e: &ToyElement) -> [u8; 2] {
        e.0.to_be_bytes()
    }

    fn decode_element(bytes: &[u8]) -> Option<ToyElement> {
        let arr: [u8; 2] = bytes.try_into().ok()?;
        ToyElement::new(u16::from_be_bytes(arr))
    }
}
