//! Sliding-window aggregation of ring keys.

use super::{LtrasError, Ring};
use crate::group::{Group, GroupContext};
use crate::ltras::AggregateSet;

/// Computes `y_i = Π_{k=i}^{i+t-1} pk_{k mod n}^d` for every `i` and `l = Π tag_k^d`.
///
/// `d` always comes from the ring itself.
pub fn swt_aggregate<G: Group>(
    _ctx: &GroupContext<G>,
    ring: &Ring<G>,
    t: usize,
    tags: &[G::Element],
) -> Result<AggregateSet<G>, LtrasError> {
    let n = ring.len();
    if t == 0 || t > n {
        return Err(LtrasError::ThresholdOutOfRange { t, n });
    }
    if tags.len() != t {
        return Err(LtrasError::TagCountMismatch { expected: t, actual: tags.len() });
    }
    let d = ring.d();
    let keys = ring.keys();
    let y = (0..n)
        .map(|i| {
            let window = (0..t).fold(G::identity(), |acc, k| G::mul(&acc, &keys[(i + k) % n]));
            G::exp(&window, &d)
        })
        .collect();
    Ok(AggregateSet { y, l: tag_aggregate::<G>(d, tags.iter().copied()) })
}

/// `l = (Π tag_k)^d`.
pub(crate) fn tag_aggregate<G: Group>(
    d: G::Scalar,
    tags: impl IntoIterator<Item = G::Element>,
) -> G::Element {
    let product = tags.into_iter().fold(G::identity(), |acc, tag| G::mul(&acc, &tag));
    G::exp(&product, &d)
}

/// Per-key exponents `e_k = d · Σ_{i : k ∈ window(i)} c_i`, so that
/// `Π_i y_i^{c_i} = Π_k pk_k^{e_k}`.
///
/// Key `k` lies in the windows starting at `k, k-1, ..., k-t+1 (mod n)`; the sums are
/// maintained incrementally, so the cost is `O(n + t)` scalar additions.
pub(crate) fn window_exponents<G: Group>(d: G::Scalar, t: usize, challenges: &[G::Scalar]) -> Vec<G::Scalar> {
    let n = challenges.len();
    let mut running = (0..t).fold(G::scalar_zero(), |acc, m| acc + challenges[(n - m % n) % n]);
    let mut out = Vec::with_capacity(n);
    out.push(d * running);
    for k in 1..n {
        running = running + challenges[k] - challenges[(k + n - t) % n];
        out.push(d * running);
    }
    out
}

/// `Π_i y_i^{c_i}` via one multi-exponentiation over the ring keys.
pub(crate) fn ring_commitment<G: Group>(
    ring: &Ring<G>,
    t: usize,
    challenges: &[G::Scalar],
    extra: Option<(G::Element, G::Scalar)>,
) -> G::Element {
    let exps = window_exponents::<G>(ring.d(), t, challenges);
    let mut pairs: Vec<(G::Element, G::Scalar)> = Vec::with_capacity(ring.len() + 1);
    pairs.extend(ring.keys().iter().copied().zip(exps));
    pairs.extend(extra);
    G::multi_exp(&pairs)
}
