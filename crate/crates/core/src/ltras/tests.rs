use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use super::*;
use crate::group::{Ristretto255, ToyElement, ToyGroup, ToyScalar};

type Toy = ToyGroup;

fn ctx() -> GroupContext<Toy> {
    GroupContext::new()
}

fn s(v: u64) -> ToyScalar {
    ToyScalar::new(v)
}

/// `base^e mod 607` for e in 0..101, by repeated multiplication.
fn table(base: u32) -> Vec<u16> {
    let mut out = Vec::with_capacity(101);
    let mut acc = 1u32;
    for _ in 0..101 {
        out.push(acc as u16);
        acc = acc * base % 607;
    }
    out
}

fn el(residue: u16) -> ToyElement {
    ToyElement::new(residue).unwrap()
}

fn toy_ring(sks: &[u64]) -> Ring<Toy> {
    Ring::new(sks.iter().map(|&v| Toy::exp_g(&s(v))).collect()).unwrap()
}

fn window(start: usize, sks: &[u64]) -> SignerWindow<Toy> {
    SignerWindow::new(start, sks.iter().map(|&v| s(v)).collect())
}

#[test]
fn keygen_from_injected_secret() {
    let g = table(7);
    assert_eq!(KeyPair::from_secret(&ctx(), s(5)).unwrap().public(), el(g[5]));
    assert_eq!(KeyPair::from_secret(&ctx(), s(1)).unwrap().public(), ctx().g());
    assert_eq!(KeyPair::from_secret(&ctx(), s(0)).unwrap_err(), LtrasError::ZeroSecret);
}

#[test]
fn keygen_samples_distinct_keys() {
    let ctx = GroupContext::<Ristretto255>::new();
    let mut rng = ChaCha20Rng::seed_from_u64(0);
    let a = keygen(&ctx, &mut rng);
    let b = keygen(&ctx, &mut rng);
    assert_ne!(a.secret(), b.secret());
    assert_eq!(a.public(), Ristretto255::exp_g(&a.secret()));
}

#[test]
fn gen_r_with_injected_witness() {
    let ctx = ctx();
    let one = statement_for(&ctx, &Witness::new(s(1)).unwrap());
    assert_eq!((one.w1, one.w2), (ctx.g(), ctx.h()));

    let (g, h) = (table(7), table(8));
    let w = Witness::new(s(42)).unwrap();
    let stmt = statement_for(&ctx, &w);
    assert_eq!((stmt.w1, stmt.w2), (el(g[42]), el(h[42])));
    assert!(verify_relation(&ctx, &stmt, &w));

    let mut rng = ChaCha20Rng::seed_from_u64(9);
    for _ in 0..50 {
        let (stmt, w) = gen_r(&ctx, &mut rng);
        assert!(verify_relation(&ctx, &stmt, &w));
    }
}

#[test]
fn verify_relation_examples() {
    let ctx = ctx();
    let (g, h) = (table(7), table(8));
    let w7 = Witness::new(s(7)).unwrap();
    assert!(verify_relation(&ctx, &StatementPair { w1: el(g[7]), w2: el(h[7]) }, &w7));
    assert!(!verify_relation(&ctx, &StatementPair { w1: el(g[7]), w2: el(h[8]) }, &w7));
    // 13 != 14 so the exponent-table entries differ.
    assert_ne!(g[13], g[14]);
    assert!(!verify_relation(
        &ctx,
        &StatementPair { w1: el(g[13]), w2: el(h[13]) },
        &Witness::new(s(14)).unwrap()
    ));
}

#[test]
fn swt_aggregate_three_keys_width_two() {
    let ctx = ctx();
    let g = table(7);
    let ring = toy_ring(&[2, 3, 5]);
    let d = ring.d().value() as u64;
    let agg = swt_aggregate(&ctx, &ring, 2, &[el(table(8)[2]), el(table(8)[3])]).unwrap();
    // (pk_a · pk_b)^d = g^{(sk_a + sk_b) d}
    let expected: Vec<ToyElement> = [(2 + 3), (3 + 5), (5 + 2)]
        .iter()
        .map(|sum| el(g[(sum * d % 101) as usize]))
        .collect();
    assert_eq!(agg.y, expected);
    assert_eq!(agg.l, el(table(8)[(5 * d % 101) as usize]));
}

#[test]
fn ring_rejects_duplicates_and_empty() {
    let pk = Toy::exp_g(&s(3));
    assert_eq!(Ring::<Toy>::new(vec![]).unwrap_err(), LtrasError::EmptyRing);
    assert_eq!(
        Ring::<Toy>::new(vec![Toy::exp_g(&s(1)), pk, pk]).unwrap_err(),
        LtrasError::DuplicateKey { first: 1, second: 2 }
    );
}

#[test]
fn presign_round_trip_small_ring() {
    let ctx = ctx();
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let ring = toy_ring(&[11, 22, 33, 44]);
    let (stmt, w) = gen_r(&ctx, &mut rng);
    let win = window(1, &[22, 33]);
    let psig = presign(&ctx, &ring, &win, b"msg", &stmt, &mut rng).unwrap();
    assert!(preverify(&ctx, &ring, &psig, 2, b"msg", &stmt));
    let sig = adapt(psig.clone(), &w);
    assert!(verify(&ctx, &ring, &sig, 2, b"msg"));
    assert_eq!(ext(&ctx, &stmt, &psig, &sig), Ok(w));
}

#[test]
fn presign_tags_follow_window_order() {
    let ctx = ctx();
    let h = table(8);
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    let ring = toy_ring(&[11, 22, 33, 44]);
    let (stmt, _) = gen_r(&ctx, &mut rng);
    let psig = presign(&ctx, &ring, &window(2, &[33, 44]), b"m", &stmt, &mut rng).unwrap();
    let tags: Vec<ToyElement> = psig.tags.iter().map(LinkTag::element).collect();
    assert_eq!(tags, vec![el(h[33]), el(h[44])]);
}

#[test]
fn degenerate_single_key_ring() {
    let ctx = ctx();
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let ring = toy_ring(&[17]);
    let (stmt, w) = gen_r(&ctx, &mut rng);
    let nonces = PresignNonces { r: s(9), decoys: vec![] };
    let (psig, trace) = presign_traced(&ctx, &ring, &window(0, &[17]), b"one", &stmt, &nonces).unwrap();
    // No decoy terms: R = g^r · W1, T = h^r · W2, c_0 = c.
    assert_eq!(trace.commitment_r, Toy::mul(&Toy::exp_g(&s(9)), &stmt.w1));
    assert_eq!(trace.commitment_t, Toy::mul(&Toy::exp_h(&s(9)), &stmt.w2));
    assert_eq!(psig.challenges, vec![trace.challenge]);
    assert_eq!(psig.z_tilde, s(9) - trace.challenge * ring.d() * s(17));
    assert!(preverify(&ctx, &ring, &psig, 1, b"one", &stmt));
    assert!(verify(&ctx, &ring, &adapt(psig, &w), 1, b"one"));
}

#[test]
fn presign_parameter_errors() {
    let ctx = ctx();
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    let ring = toy_ring(&[11, 22, 33]);
    let (stmt, _) = gen_r(&ctx, &mut rng);
    assert_eq!(
        presign(&ctx, &ring, &window(2, &[33, 11]), b"m", &stmt, &mut rng).unwrap_err(),
        LtrasError::WindowOutOfRange { start: 2, width: 2, n: 3 }
    );
    assert_eq!(
        presign(&ctx, &ring, &window(0, &[11, 23]), b"m", &stmt, &mut rng).unwrap_err(),
        LtrasError::KeyMismatch { offset: 1, index: 1 }
    );
    assert_eq!(
        presign(&ctx, &ring, &window(0, &[]), b"m", &stmt, &mut rng).unwrap_err(),
        LtrasError::ThresholdOutOfRange { t: 0, n: 3 }
    );
    assert_eq!(
        presign(&ctx, &ring, &window(0, &[11, 22, 33, 44]), b"m", &stmt, &mut rng).unwrap_err(),
        LtrasError::ThresholdOutOfRange { t: 4, n: 3 }
    );
    let short = PresignNonces { r: s(1), decoys: vec![s(2)] };
    assert_eq!(
        presign_with_nonces(&ctx, &ring, &window(0, &[11]), b"m", &stmt, &short).unwrap_err(),
        LtrasError::NonceCountMismatch { expected: 2, actual: 1 }
    );
}

#[test]
fn wraparound_window_when_allowed() {
    let ctx = ctx();
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let ring = toy_ring(&[11, 22, 33]);
    let (stmt, w) = gen_r(&ctx, &mut rng);
    let win = window(2, &[33, 11]).allow_wraparound();
    let psig = presign(&ctx, &ring, &win, b"wrap", &stmt, &mut rng).unwrap();
    assert!(preverify(&ctx, &ring, &psig, 2, b"wrap", &stmt));
    assert!(verify(&ctx, &ring, &adapt(psig, &w), 2, b"wrap"));
}

#[test]
fn preverify_rejects_bumped_challenge_and_other_message() {
    let ctx = ctx();
    let mut rng = ChaCha20Rng::seed_from_u64(6);
    let ring = toy_ring(&[11, 22, 33]);
    let (stmt, _) = gen_r(&ctx, &mut rng);
    let psig = presign(&ctx, &ring, &window(0, &[11, 22]), b"m", &stmt, &mut rng).unwrap();
    for i in 0..3 {
        let mut bumped = psig.clone();
        bumped.challenges[i] = bumped.challenges[i] + s(1);
        assert!(!preverify(&ctx, &ring, &bumped, 2, b"m", &stmt), "c_{i}");
    }
    assert!(!preverify(&ctx, &ring, &psig, 2, b"m'", &stmt));
}

#[test]
fn shape_mismatch_is_false_not_panic() {
    let ctx = ctx();
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let ring = toy_ring(&[11, 22, 33]);
    let (stmt, w) = gen_r(&ctx, &mut rng);
    let psig = presign(&ctx, &ring, &window(0, &[11, 22]), b"m", &stmt, &mut rng).unwrap();
    assert!(!preverify(&ctx, &ring, &psig, 1, b"m", &stmt));
    assert!(!preverify(&ctx, &ring, &psig, 4, b"m", &stmt));
    let mut short = psig.clone();
    short.challenges.pop();
    assert!(!preverify(&ctx, &ring, &short, 2, b"m", &stmt));
    let sig = adapt(psig, &w);
    assert!(!verify(&ctx, &ring, &sig, 0, b"m"));
    assert!(!verify(&ctx, &toy_ring(&[11, 22]), &sig, 2, b"m"));
}

#[test]
fn adapting_with_the_wrong_witness_fails() {
    let ctx = ctx();
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let ring = toy_ring(&[11, 22, 33]);
    let (stmt, w) = gen_r(&ctx, &mut rng);
    let psig = presign(&ctx, &ring, &window(1, &[22, 33]), b"m", &stmt, &mut rng).unwrap();
    let wrong = Witness::new(w.scalar() + s(1)).unwrap();
    assert!(!verify(&ctx, &ring, &adapt(psig.clone(), &wrong), 2, b"m"));
    assert!(verify(&ctx, &ring, &adapt(psig, &w), 2, b"m"));
}

#[test]
fn reordered_ring_rejects() {
    let ctx = GroupContext::<Ristretto255>::new();
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    let kps: Vec<_> = (0..4).map(|_| keygen(&ctx, &mut rng)).collect();
    let ring = Ring::new(kps.iter().map(KeyPair::public).collect()).unwrap();
    let (stmt, w) = gen_r(&ctx, &mut rng);
    let win = SignerWindow::new(0, vec![kps[0].secret(), kps[1].secret()]);
    let sig = adapt(presign(&ctx, &ring, &win, b"m", &stmt, &mut rng).unwrap(), &w);
    assert!(verify(&ctx, &ring, &sig, 2, b"m"));
    let mut keys = ring.keys().to_vec();
    keys.swap(2, 3);
    assert!(!verify(&ctx, &Ring::new(keys).unwrap(), &sig, 2, b"m"));
}

#[test]
fn ext_hand_computed_example() {
    let ctx = ctx();
    let (g, h) = (table(7), table(8));
    let stmt = StatementPair { w1: el(g[23]), w2: el(h[23]) };
    let tags = vec![LinkTag::new(ctx.h())];
    let psig = PreSignature::<Toy> { z_tilde: s(10), challenges: vec![s(4), s(5)], tags: tags.clone() };
    let sig = Signature::<Toy> { z: s(33), challenges: vec![s(4), s(5)], tags };
    assert_eq!(ext(&ctx, &stmt, &psig, &sig).unwrap().scalar(), s(23));

    let same = Signature::<Toy> { z: s(10), ..sig.clone() };
    assert_eq!(ext(&ctx, &stmt, &psig, &same), Err(ExtractError::RelationFailed));

    let other = Signature::<Toy> { challenges: vec![s(5), s(4)], ..sig };
    assert_eq!(ext(&ctx, &stmt, &psig, &other), Err(ExtractError::TranscriptMismatch));
}

#[test]
fn link_cases() {
    let ctx = ctx();
    let mut rng = ChaCha20Rng::seed_from_u64(10);
    let ring = toy_ring(&[11, 22, 33, 44, 55]);
    let (stmt, w) = gen_r(&ctx, &mut rng);
    let mut sign = |win: SignerWindow<Toy>, m: &[u8]| {
        adapt(presign(&ctx, &ring, &win, m, &stmt, &mut rng).unwrap(), &w)
    };
    let a = sign(window(0, &[11, 22]), b"a");
    let b = sign(window(1, &[22, 33]), b"b");
    let c = sign(window(2, &[33, 44]), b"c");
    let a2 = sign(window(0, &[11, 22]), b"a2");
    assert!(link(&a, &b) && link(&b, &a));
    assert!(!link(&a, &c) && !link(&c, &a));
    assert!(link(&a, &a));
    // Tags depend only on the secrets, not on the message or nonces.
    assert_eq!(a.tags, a2.tags);
    assert!(link(&a, &a2));
}

#[test]
fn link_on_large_tag_sets() {
    let mk = |range: std::ops::Range<u64>| Signature::<Toy> {
        z: s(0),
        challenges: vec![],
        tags: range.map(|v| LinkTag::new(Toy::exp_h(&s(v)))).collect(),
    };
    assert!(!link(&mk(1..21), &mk(21..41)));
    assert!(link(&mk(1..21), &mk(20..41)));
}
