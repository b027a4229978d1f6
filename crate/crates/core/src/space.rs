//! Finite linearly ordered point sets.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A finite set of named points with a total order given by declaration order.
///
/// Points are referred to internally by their position, so `i < j` as indices
/// is exactly `points[i] <_X points[j]`.
#[derive(Debug, Clone)]
pub struct OrderedSpace {
    points: Vec<String>,
    index: HashMap<String, usize>,
}

impl OrderedSpace {
    pub fn new<I, S>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let points: Vec<String> = points.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::DuplicatePoint(p.clone()));
            }
        }
        Ok(OrderedSpace { points, index })
    }

    /// Shared handle, the form every measure and multiset holds.
    pub fn shared<I, S>(points: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(points).map(Arc::new)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn name(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    pub fn names(&self, atom: &[usize]) -> Vec<String> {
        atom.iter().map(|&i| self.points[i].clone()).collect()
    }
}

impl PartialEq for OrderedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
    }
}

impl Eq for OrderedSpace {}

/// Content equality with a pointer fast path.
pub(crate) fn same_space(a: &Arc<OrderedSpace>, b: &Arc<OrderedSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
