//! Random generators and brute-force oracles shared by the integration tests.
//! The oracles work on plain sets and point names and do not call into the
//! predicates they are used to check.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use circle_rep::{AtomicMeasure, OrderedSpace, Presentation, Rational, Signature, WeightMultiset};
use num_bigint::BigInt;
use rand::Rng;

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn space(n: usize) -> Arc<OrderedSpace> {
    OrderedSpace::shared((0..n).map(|i| format!("p{i}"))).unwrap()
}

/// Weight multiset on `n` points with at most `max_vectors` vectors counted
/// with multiplicity and entries in `[-bound, bound]`. Repeats and zero
/// vectors are drawn on purpose so layers and the fixed part get exercised.
pub fn random_multiset<R: Rng>(rng: &mut R, n: usize, max_vectors: usize, bound: i64) -> WeightMultiset {
    let x = space(n);
    let count = rng.random_range(0..=max_vectors);
    let mut w = WeightMultiset::new(x);
    let mut previous: Vec<Vec<i64>> = Vec::new();
    for _ in 0..count {
        let roll: f64 = rng.random();
        let v = if roll < 0.3 && !previous.is_empty() {
            previous[rng.random_range(0..previous.len())].clone()
        } else if roll < 0.4 {
            vec![0; n]
        } else {
            (0..n)
                .map(|_| if rng.random_bool(0.4) { 0 } else { rng.random_range(-bound..=bound) })
                .collect()
        };
        previous.push(v.clone());
        w.insert(v, 1).unwrap();
    }
    w
}

/// Rebuilds the weight vector of a canonical atom directly.
pub fn vector_of(n: usize, kappa: &Signature, atom: &[usize]) -> Vec<i64> {
    let mut v = vec![0; n];
    for (&x, &k) in atom.iter().zip(kappa.exponents()) {
        v[x] += k;
    }
    v
}

pub fn support_set(m: &AtomicMeasure) -> BTreeSet<Vec<usize>> {
    m.support().cloned().collect()
}

/// No atom names a point twice.
pub fn oracle_no_repeats(p: &Presentation) -> bool {
    p.entries().all(|(_, _, m)| {
        m.support().all(|a| {
            let names: BTreeSet<&str> = a.iter().map(|&i| p.space().name(i)).collect();
            names.len() == a.len()
        })
    })
}

/// Equal exponents carry points in declared order (compared by position of
/// the point names in the space listing).
pub fn oracle_tie_order(p: &Presentation) -> bool {
    let pos = |name: &str| p.space().points().iter().position(|q| q == name).unwrap();
    p.entries().all(|(kappa, _, m)| {
        let k = kappa.exponents();
        m.support().all(|a| {
            (0..a.len()).all(|i| {
                (i + 1..a.len()).all(|j| k[i] != k[j] || pos(p.space().name(a[i])) < pos(p.space().name(a[j])))
            })
        })
    })
}

/// Supports shrink along layers, with no gaps.
pub fn oracle_chain(p: &Presentation) -> bool {
    let mut by_kappa: BTreeMap<Signature, BTreeMap<usize, BTreeSet<Vec<usize>>>> = BTreeMap::new();
    for (k, j, m) in p.entries() {
        by_kappa.entry(k.clone()).or_default().insert(j, support_set(m));
    }
    by_kappa.values().all(|layers| {
        let top = *layers.keys().max().unwrap();
        (1..=top).all(|j| {
            let upper = layers.get(&j).cloned().unwrap_or_default();
            (1..j).all(|i| upper.is_subset(layers.get(&i).unwrap_or(&BTreeSet::new())))
        })
    })
}

/// Union of the supports of all marginals of all entries.
pub fn marginal_support_union(p: &Presentation) -> BTreeSet<usize> {
    p.entries().flat_map(|(_, _, m)| m.support().flat_map(|a| a.iter().copied()).collect::<Vec<_>>()).collect()
}
