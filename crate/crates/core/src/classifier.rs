//! Canonical presentations of finite-dimensional representations.
//!
//! Every nonzero weight vector is the character of exactly one atom that has
//! no repeated points and respects the tie order; grouping those atoms by
//! signature and layering them by multiplicity gives the canonical form.
//! Two presentations describe the same representation iff their layer
//! measures agree up to mutual absolute continuity in every slot.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::blocks::{Block, Signature};
use crate::error::{Error, Result};
use crate::measure::{weighted_sum, Atom, AtomicMeasure};
use crate::presentation::Presentation;
use crate::scalar::Weight;
use crate::weights::WeightMultiset;

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationResult<W = BigRational> {
    /// Multiplicity of the zero weight.
    pub fixed_dim: usize,
    pub canonical: Presentation<W>,
}

/// Signature and canonical atom of a weight vector; `None` for the zero
/// vector. Exponents are listed ascending and ties are broken by point order.
pub fn signature_of(m: &[i64]) -> Option<(Signature, Atom)> {
    let mut carried: Vec<(i64, usize)> = m
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(x, &k)| (k, x))
        .collect();
    if carried.is_empty() {
        return None;
    }
    carried.sort_unstable();
    let (exponents, atom): (Vec<i64>, Atom) = carried.into_iter().unzip();
    Some((Signature::new(exponents).expect("sorted nonzero exponents"), atom))
}

/// Canonical presentation with unit atom weights: an atom sits in layer `j`
/// of its signature iff its vector has multiplicity at least `j`.
pub fn classify<W: Weight>(w: &WeightMultiset) -> ClassificationResult<W> {
    let space = w.space().clone();
    let mut layers: BTreeMap<(Signature, usize), Vec<Atom>> = BTreeMap::new();
    let mut fixed_dim = 0;
    for (v, mult) in w.entries() {
        match signature_of(v) {
            None => fixed_dim += mult,
            Some((kappa, atom)) => {
                for j in 1..=mult {
                    layers.entry((kappa.clone(), j)).or_default().push(atom.clone());
                }
            }
        }
    }
    let mut canonical = Presentation::new(space.clone());
    for ((kappa, j), atoms) in layers {
        let arity = kappa.len();
        let m = AtomicMeasure::uniform(space.clone(), arity, atoms).expect("well-formed atoms");
        canonical.insert(kappa, j, m).expect("arity matches signature");
    }
    ClassificationResult { fixed_dim, canonical }
}

/// Rebuilds a layer chain from an arbitrary list of measures on the same
/// `X^n`.
///
/// Each input is normalized to a probability measure and split against the
/// chain built so far: the part singular to layer 1 goes to layer 1, the
/// remainder is split against layer 2, and so on. Layer `j` of the output is
/// then `Σ_{i ≥ j} 2^{-(i-j)} λ^i_j`. The output has the same length as the
/// input; zero inputs contribute nothing.
pub fn layer_normalize<W: Weight>(measures: &[AtomicMeasure<W>]) -> Result<Vec<AtomicMeasure<W>>> {
    let Some(first) = measures.first() else {
        return Ok(Vec::new());
    };
    let space = first.space().clone();
    let arity = first.arity();
    let zero = AtomicMeasure::zero(space, arity);
    for m in measures {
        m.ensure_compatible(&zero)?;
    }

    // pieces[i][j] = λ^{i+1}_{j+1}
    let mut pieces: Vec<Vec<AtomicMeasure<W>>> = Vec::new();
    // chain[j] = Σ_i λ^i_{j+1} over the inputs processed so far
    let mut chain: Vec<AtomicMeasure<W>> = Vec::new();
    for m in measures.iter().filter(|m| !m.is_zero()) {
        let mut rest = m.normalized();
        let mut split = Vec::with_capacity(chain.len() + 1);
        for layer in &chain {
            let (ac, sing) = rest.lebesgue_decompose(layer)?;
            split.push(sing);
            rest = ac;
        }
        split.push(rest);
        if chain.len() < split.len() {
            chain.push(zero.clone());
        }
        for (layer, piece) in chain.iter_mut().zip(&split) {
            *layer = layer.plus(piece)?;
        }
        pieces.push(split);
    }

    let half = W::one() / W::from_int(2);
    let mut out = Vec::with_capacity(measures.len());
    for j in 0..measures.len() {
        let mut layer = zero.clone();
        let mut coeff = W::one();
        for split in pieces.iter().skip(j) {
            if let Some(piece) = split.get(j).filter(|p| !p.is_zero()) {
                layer = layer.plus(&piece.scale(&coeff)?)?;
            }
            coeff = coeff * half.clone();
        }
        out.push(layer);
    }
    Ok(out)
}

/// Brings an arbitrary presentation into canonical shape: sorts every entry
/// over the order cells, then rebuilds each signature's layer chain. The base
/// measure is carried over unchanged.
pub fn normalize<W: Weight>(p: &Presentation<W>) -> Result<Presentation<W>> {
    let mut per_signature: BTreeMap<Signature, Vec<AtomicMeasure<W>>> = BTreeMap::new();
    for (kappa, _, m) in p.entries() {
        let parts = Block::new(kappa.clone(), m.clone())?.sort()?;
        per_signature
            .entry(kappa.clone())
            .or_default()
            .extend(parts.into_iter().map(|b| b.measure().clone()));
    }
    let mut out = Presentation::new(p.space().clone());
    out.set_base(p.base().cloned())?;
    for (kappa, measures) in per_signature {
        for (j, m) in layer_normalize(&measures)?.into_iter().enumerate() {
            out.insert(kappa.clone(), j + 1, m)?;
        }
    }
    Ok(out)
}

/// Where two presentations first disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub kappa: Signature,
    pub layer: usize,
    pub atom: Atom,
    /// Whether the atom is charged by the first presentation (and not the
    /// second) or the other way round.
    pub in_first: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub equivalent: bool,
    pub mismatch: Option<Mismatch>,
}

/// Slot-by-slot mutual absolute continuity; absent slots are zero.
pub fn compare_presentations<W: Weight>(p: &Presentation<W>, q: &Presentation<W>) -> Result<Comparison> {
    p.validate().into_result()?;
    q.validate().into_result()?;
    if p.space() != q.space() {
        return Err(Error::SpaceMismatch);
    }
    let mut slots: Vec<(Signature, usize)> = p
        .entries()
        .chain(q.entries())
        .map(|(k, j, _)| (k.clone(), j))
        .collect();
    slots.sort();
    slots.dedup();
    for (kappa, layer) in slots {
        let a = p.layer(&kappa, layer);
        // q's measures may hold a different Arc of an equal space
        let b = relocate(&q.layer(&kappa, layer), p);
        let witness = match a.support_excess(&b)? {
            Some(atom) => Some((atom, true)),
            None => b.support_excess(&a)?.map(|atom| (atom, false)),
        };
        if let Some((atom, in_first)) = witness {
            return Ok(Comparison {
                equivalent: false,
                mismatch: Some(Mismatch {
                    kappa,
                    layer,
                    atom,
                    in_first,
                }),
            });
        }
    }
    Ok(Comparison {
        equivalent: true,
        mismatch: None,
    })
}

fn relocate<W: Weight>(m: &AtomicMeasure<W>, p: &Presentation<W>) -> AtomicMeasure<W> {
    AtomicMeasure::from_atoms(
        p.space().clone(),
        m.arity(),
        m.atoms().map(|(a, w)| (a.clone(), w.clone())),
    )
    .expect("spaces are equal")
}

/// Weighted sum of every marginal of every entry, with coefficients `2^{-t}`
/// in the order (signature, layer, coordinate). Its support is the union of
/// all marginal supports.
pub fn minimal_measure<W: Weight>(p: &Presentation<W>) -> Result<AtomicMeasure<W>> {
    p.validate().into_result()?;
    let marginals: Vec<AtomicMeasure<W>> = p.entries().flat_map(|(_, _, m)| m.marginals()).collect();
    if marginals.is_empty() {
        return Ok(AtomicMeasure::zero(p.space().clone(), 1));
    }
    let half = W::one() / W::from_int(2);
    let coeffs: Vec<W> = std::iter::successors(Some(half.clone()), |c| Some(c.clone() * half.clone()))
        .take(marginals.len())
        .collect();
    weighted_sum(&marginals, &coeffs)
}

/// The weight multiset of a presentation, without fixed vectors.
pub fn reconstruct<W: Weight>(p: &Presentation<W>) -> Result<WeightMultiset> {
    p.weights()
}
