//! Multisets of integer weight vectors: the diagonalized form of a
//! finite-dimensional representation.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::space::{same_space, OrderedSpace};

/// One integer per point of the space, in point order.
pub type WeightVector = Vec<i64>;

/// Weight vectors with positive multiplicities. The zero vector's
/// multiplicity is the dimension of the fixed subspace.
#[derive(Debug, Clone)]
pub struct WeightMultiset {
    space: Arc<OrderedSpace>,
    entries: BTreeMap<WeightVector, usize>,
}

impl WeightMultiset {
    pub fn new(space: Arc<OrderedSpace>) -> Self {
        WeightMultiset {
            space,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_vectors<I>(space: Arc<OrderedSpace>, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (WeightVector, usize)>,
    {
        let mut w = Self::new(space);
        for (v, mult) in vectors {
            w.insert(v, mult)?;
        }
        Ok(w)
    }

    pub fn insert(&mut self, v: WeightVector, multiplicity: usize) -> Result<()> {
        if v.len() != self.space.len() {
            return Err(Error::LengthMismatch {
                left: v.len(),
                right: self.space.len(),
            });
        }
        if multiplicity > 0 {
            *self.entries.entry(v).or_insert(0) += multiplicity;
        }
        Ok(())
    }

    /// Adds `n` copies of the zero vector.
    pub fn add_fixed(&mut self, n: usize) {
        let zero = vec![0; self.space.len()];
        self.insert(zero, n).expect("zero vector has the right length");
    }

    pub fn space(&self) -> &Arc<OrderedSpace> {
        &self.space
    }

    pub fn entries(&self) -> impl Iterator<Item = (&WeightVector, usize)> {
        self.entries.iter().map(|(v, &m)| (v, m))
    }

    pub fn multiplicity(&self, v: &[i64]) -> usize {
        self.entries.get(v).copied().unwrap_or(0)
    }

    pub fn fixed_dim(&self) -> usize {
        self.entries
            .iter()
            .filter(|(v, _)| v.iter().all(|&x| x == 0))
            .map(|(_, &m)| m)
            .sum()
    }

    /// Total dimension of the represented space.
    pub fn dimension(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Multiset sum.
    pub fn merge(&mut self, other: &WeightMultiset) -> Result<()> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        for (v, m) in other.entries() {
            *self.entries.entry(v.clone()).or_insert(0) += m;
        }
        Ok(())
    }
}

impl PartialEq for WeightMultiset {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.entries == other.entries
    }
}

impl Eq for WeightMultiset {}
