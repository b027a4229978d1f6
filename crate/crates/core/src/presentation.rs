//! Families `{λ_κ^j}` of layered block measures and their validation.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::Serialize;

use crate::blocks::{Block, Signature};
use crate::error::{Error, Result};
use crate::measure::{Atom, AtomicMeasure};
use crate::scalar::Weight;
use crate::space::{same_space, OrderedSpace};
use crate::weights::WeightMultiset;
use std::sync::Arc;

/// A direct sum of blocks indexed by signature and layer (`j ≥ 1`), with an
/// optional arity-one reference measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Presentation<W = BigRational> {
    space: Arc<OrderedSpace>,
    base: Option<AtomicMeasure<W>>,
    entries: BTreeMap<(Signature, usize), AtomicMeasure<W>>,
}

impl<W: Weight> Presentation<W> {
    pub fn new(space: Arc<OrderedSpace>) -> Self {
        Presentation {
            space,
            base: None,
            entries: BTreeMap::new(),
        }
    }

    pub fn space(&self) -> &Arc<OrderedSpace> {
        &self.space
    }

    pub fn base(&self) -> Option<&AtomicMeasure<W>> {
        self.base.as_ref()
    }

    pub fn set_base(&mut self, base: Option<AtomicMeasure<W>>) -> Result<()> {
        if let Some(b) = &base {
            if !same_space(b.space(), &self.space) {
                return Err(Error::SpaceMismatch);
            }
            if b.arity() != 1 {
                return Err(Error::ArityMismatch {
                    expected: 1,
                    found: b.arity(),
                });
            }
        }
        self.base = base;
        Ok(())
    }

    /// Sets the measure for `(κ, layer)`. Zero measures are not stored.
    pub fn insert(&mut self, kappa: Signature, layer: usize, measure: AtomicMeasure<W>) -> Result<()> {
        if layer == 0 {
            return Err(Error::Parse("layers are numbered from 1".into()));
        }
        if !same_space(measure.space(), &self.space) {
            return Err(Error::SpaceMismatch);
        }
        if measure.arity() != kappa.len() {
            return Err(Error::ArityMismatch {
                expected: kappa.len(),
                found: measure.arity(),
            });
        }
        if measure.is_zero() {
            self.entries.remove(&(kappa, layer));
        } else {
            self.entries.insert((kappa, layer), measure);
        }
        Ok(())
    }

    pub fn get(&self, kappa: &Signature, layer: usize) -> Option<&AtomicMeasure<W>> {
        self.entries.get(&(kappa.clone(), layer))
    }

    /// The layer measure, or zero when absent.
    pub fn layer(&self, kappa: &Signature, layer: usize) -> AtomicMeasure<W> {
        self.get(kappa, layer)
            .cloned()
            .unwrap_or_else(|| AtomicMeasure::zero(self.space.clone(), kappa.len()))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Signature, usize, &AtomicMeasure<W>)> {
        self.entries.iter().map(|((k, j), m)| (k, *j, m))
    }

    pub fn signatures(&self) -> Vec<Signature> {
        let mut out: Vec<Signature> = self.entries.keys().map(|(k, _)| k.clone()).collect();
        out.dedup();
        out
    }

    pub fn depth_of(&self, kappa: &Signature) -> usize {
        self.entries
            .keys()
            .filter(|(k, _)| k == kappa)
            .map(|(_, j)| *j)
            .max()
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Checks every structural condition and reports all violations.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for ((kappa, layer), m) in &self.entries {
            if let Some(atom) = m.a2_witness() {
                violations.push(Violation::new(Condition::NoRepeatedPoints, kappa, *layer, atom.clone()));
            }
            if let Some(atom) = m.a3_witness(kappa.exponents()).expect("arity checked on insert") {
                violations.push(Violation::new(Condition::TieOrder, kappa, *layer, atom.clone()));
            }
            if let Some(base) = &self.base {
                for marginal in m.marginals() {
                    if let Some(atom) = marginal.support_excess(base).expect("same space") {
                        violations.push(Violation::new(Condition::MarginalsDominated, kappa, *layer, atom));
                    }
                }
            }
        }
        for kappa in self.signatures() {
            let depth = self.depth_of(&kappa);
            for j in 2..=depth {
                let upper = self.layer(&kappa, j);
                for i in 1..j {
                    let lower = self.layer(&kappa, i);
                    if let Some(atom) = upper.support_excess(&lower).expect("same space") {
                        violations.push(Violation::new(Condition::LayerChain, &kappa, j, atom));
                        break;
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// Multiset sum of the block weights of all entries.
    pub fn weights(&self) -> Result<WeightMultiset> {
        let mut out = WeightMultiset::new(self.space.clone());
        for ((kappa, _), m) in &self.entries {
            let block = Block::new(kappa.clone(), m.clone())?;
            out.merge(&block.weights()?)?;
        }
        Ok(out)
    }

    /// Same entries with the base replaced.
    pub fn with_base(&self, base: Option<AtomicMeasure<W>>) -> Result<Self> {
        let mut p = self.clone();
        p.set_base(base)?;
        Ok(p)
    }
}

/// The four structural conditions on a presentation. In the Cantor-space
/// setting the same predicates are read as (B1)–(B3), without a base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Condition {
    /// (A1): every marginal of every entry is dominated by the base.
    #[serde(rename = "A1")]
    MarginalsDominated,
    /// (A2)/(B1): no atom repeats a point.
    #[serde(rename = "A2")]
    NoRepeatedPoints,
    /// (A3)/(B2): equal exponents carry increasing points.
    #[serde(rename = "A3")]
    TieOrder,
    /// (A4)/(B3): higher layers are dominated by lower ones.
    #[serde(rename = "A4")]
    LayerChain,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::MarginalsDominated => "A1",
            Condition::NoRepeatedPoints => "A2",
            Condition::TieOrder => "A3",
            Condition::LayerChain => "A4",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    pub kappa: Signature,
    pub layer: usize,
    pub atom: Atom,
}

impl Violation {
    fn new(condition: Condition, kappa: &Signature, layer: usize, atom: Atom) -> Self {
        Violation {
            condition,
            kappa: kappa.clone(),
            layer,
            atom,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn holds(&self, condition: Condition) -> bool {
        self.violations.iter().all(|v| v.condition != condition)
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidPresentation(Box::new(self)))
        }
    }
}
