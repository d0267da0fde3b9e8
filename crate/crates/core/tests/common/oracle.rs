//! Straight-line reference for the order-101 subgroup of `Z_607^*`.
//!
//! Plain integer arithmetic only; nothing here calls into the library. Elements are
//! residues mod 607, scalars are residues mod 101.

#![allow(dead_code)]

use sha2::{Digest, Sha512};

pub const MODULUS: u32 = 607;
pub const ORDER: u32 = 101;

pub fn pow(base: u32, exp: u32) -> u32 {
    let mut acc = 1u32;
    let mut b = base % MODULUS;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % MODULUS;
        }
        b = b * b % MODULUS;
        e >>= 1;
    }
    acc
}

pub fn mul(a: u32, b: u32) -> u32 {
    a * b % MODULUS
}

fn order_of(x: u32) -> u32 {
    let mut acc = x;
    let mut k = 1;
    while acc != 1 {
        acc = acc * x % MODULUS;
        k += 1;
    }
    k
}

/// The two smallest residues of multiplicative order 101.
pub fn generators() -> (u32, u32) {
    let mut found = (2..MODULUS).filter(|&x| order_of(x) == ORDER);
    (found.next().unwrap(), found.next().unwrap())
}

pub fn g() -> u32 {
    generators().0
}

pub fn h() -> u32 {
    generators().1
}

pub fn enc(x: u32) -> [u8; 2] {
    (x as u16).to_be_bytes()
}

pub fn enc_all(xs: &[u32]) -> Vec<u8> {
    xs.iter().flat_map(|&x| enc(x)).collect()
}

/// SHA-512 over `len(tag) ‖ tag ‖ count ‖ (len(part) ‖ part)*` with u64 LE lengths,
/// digest read as a little-endian integer and reduced mod 101.
pub fn hash(tag: &[u8], parts: &[&[u8]]) -> u32 {
    let mut hasher = Sha512::new();
    hasher.update((tag.len() as u64).to_le_bytes());
    hasher.update(tag);
    hasher.update((parts.len() as u64).to_le_bytes());
    for part in parts {
        hasher.update((part.len() as u64).to_le_bytes());
        hasher.update(part);
    }
    let digest = hasher.finalize();
    digest.iter().rev().fold(0u32, |acc, &b| (acc * 256 + b as u32) % ORDER)
}

fn add(a: u32, b: u32) -> u32 {
    (a + b) % ORDER
}

fn sub(a: u32, b: u32) -> u32 {
    (a + ORDER - b % ORDER) % ORDER
}

fn smul(a: u32, b: u32) -> u32 {
    a * b % ORDER
}

pub fn d_of(pks: &[u32]) -> u32 {
    hash(b"LTRAS/d", &[&enc_all(pks)])
}

pub fn challenge(pks: &[u32], r: u32, t: u32, m: &[u8]) -> u32 {
    hash(b"LTRAS/c", &[&enc_all(pks), &enc(r), &enc(t), m])
}

/// `y_i = (pk_i · pk_{i+1} · … · pk_{i+t-1})^d`, indices mod n.
pub fn ys(pks: &[u32], t: usize, d: u32) -> Vec<u32> {
    let n = pks.len();
    (0..n)
        .map(|i| {
            let mut prod = 1;
            for k in i..i + t {
                prod = mul(prod, pks[k % n]);
            }
            pow(prod, d)
        })
        .collect()
}

pub fn tag_aggregate(tags: &[u32], d: u32) -> u32 {
    pow(tags.iter().fold(1, |acc, &x| mul(acc, x)), d)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub pks: Vec<u32>,
    pub d: u32,
    pub y: Vec<u32>,
    pub tags: Vec<u32>,
    pub l: u32,
    pub big_r: u32,
    pub big_t: u32,
    pub c: u32,
    pub c_j: u32,
    pub challenges: Vec<u32>,
    pub z_tilde: u32,
    pub z: u32,
    pub w: u32,
    pub w1: u32,
    pub w2: u32,
}

/// One pre-signing run followed by adaptation and extraction.
///
/// `sks` are the secrets of the whole ring; the signer uses `sks[j..j+t]` (mod n).
/// `decoys` are the `c_i` for `i != j` in increasing `i`.
pub fn run(sks: &[u32], j: usize, t: usize, r: u32, decoys: &[u32], w: u32, m: &[u8]) -> Trace {
    let (g, h) = generators();
    let n = sks.len();
    assert_eq!(decoys.len(), n - 1);
    let pks: Vec<u32> = sks.iter().map(|&sk| pow(g, sk)).collect();
    let d = d_of(&pks);
    let y = ys(&pks, t, d);
    let window: Vec<u32> = (0..t).map(|i| sks[(j + i) % n]).collect();
    let tags: Vec<u32> = window.iter().map(|&sk| pow(h, sk)).collect();
    let l = tag_aggregate(&tags, d);
    let w1 = pow(g, w);
    let w2 = pow(h, w);

    let mut challenges = vec![0u32; n];
    let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
    for (&i, &c) in others.iter().zip(decoys) {
        challenges[i] = c;
    }

    let mut big_r = mul(pow(g, r), w1);
    let mut big_t = mul(pow(h, r), w2);
    for &i in &others {
        big_r = mul(big_r, pow(y[i], challenges[i]));
        big_t = mul(big_t, pow(l, challenges[i]));
    }
    let c = challenge(&pks, big_r, big_t, m);
    let c_j = others.iter().fold(c, |acc, &i| sub(acc, challenges[i]));
    challenges[j] = c_j;
    let sk_sum = window.iter().fold(0, |acc, &sk| add(acc, sk));
    let z_tilde = sub(r, smul(smul(c_j, d), sk_sum));
    let z = add(z_tilde, w);
    let extracted = sub(z, z_tilde);
    Trace { pks, d, y, tags, l, big_r, big_t, c, c_j, challenges, z_tilde, z, w: extracted, w1, w2 }
}

/// Shared body of pre-verification (`offset = Some(W)`) and verification (`None`).
pub fn check(
    pks: &[u32],
    t: usize,
    challenges: &[u32],
    tags: &[u32],
    response: u32,
    offset: Option<(u32, u32)>,
    m: &[u8],
) -> bool {
    let (g, h) = generators();
    if challenges.len() != pks.len() || tags.len() != t || t == 0 || t > pks.len() {
        return false;
    }
    let d = d_of(pks);
    let y = ys(pks, t, d);
    let l = tag_aggregate(tags, d);
    let (w1, w2) = offset.unwrap_or((1, 1));
    let mut big_r = mul(pow(g, response), w1);
    let mut big_t = mul(pow(h, response), w2);
    let mut sum = 0;
    for (i, &ci) in challenges.iter().enumerate() {
        big_r = mul(big_r, pow(y[i], ci));
        big_t = mul(big_t, pow(l, ci));
        sum = add(sum, ci);
    }
    sum == challenge(pks, big_r, big_t, m)
}
