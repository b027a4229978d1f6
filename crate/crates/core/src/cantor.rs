//! Cantor space `{0,1}^ℕ` at finite clopen resolution.
//!
//! At depth `d` the points are the `2^d` cylinders, named by binary strings
//! and ordered lexicographically. A representation of the circle-valued
//! continuous functions that factors through depth `d` is a weight multiset
//! over these cylinders; refining or coarsening the resolution acts on
//! weights by summing exponents over merged cylinders.

use std::sync::Arc;

use num_rational::BigRational;

use crate::classifier::{classify, minimal_measure, ClassificationResult};
use crate::error::{Error, Result};
use crate::measure::AtomicMeasure;
use crate::presentation::Presentation;
use crate::scalar::Weight;
use crate::space::OrderedSpace;
use crate::weights::WeightMultiset;

/// The `2^depth` cylinders of a given depth in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicSpace {
    depth: usize,
    space: Arc<OrderedSpace>,
}

impl DyadicSpace {
    pub fn new(depth: usize) -> Self {
        assert!(depth < usize::BITS as usize, "depth too large");
        let points = (0..1usize << depth).map(|i| cylinder_name(i, depth));
        DyadicSpace {
            depth,
            space: OrderedSpace::shared(points).expect("distinct binary strings"),
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn space(&self) -> &Arc<OrderedSpace> {
        &self.space
    }

    /// Recognizes an ordered space whose points are exactly the cylinders of
    /// some depth, in order.
    pub fn recognize(space: &Arc<OrderedSpace>) -> Option<Self> {
        let n = space.len();
        if !n.is_power_of_two() {
            return None;
        }
        let depth = n.trailing_zeros() as usize;
        let ok = space
            .points()
            .iter()
            .enumerate()
            .all(|(i, p)| *p == cylinder_name(i, depth));
        ok.then(|| DyadicSpace {
            depth,
            space: space.clone(),
        })
    }
}

fn cylinder_name(index: usize, depth: usize) -> String {
    (0..depth)
        .rev()
        .map(|bit| if (index >> bit) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// An atomic measure over a power of a dyadic space, tagged with its depth.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicMeasure<W = BigRational> {
    pub depth: usize,
    pub measure: AtomicMeasure<W>,
}

/// Prefix of length `depth`.
pub fn truncate(point: &str, depth: usize) -> Result<&str> {
    if depth > point.len() {
        return Err(Error::DepthMismatch {
            from: point.len(),
            to: depth,
        });
    }
    Ok(&point[..depth])
}

/// Restricts a depth-`d'` representation to functions constant on depth-`d`
/// cylinders: each exponent vector is summed over the cylinders sharing a
/// depth-`d` prefix. Vectors that cancel to zero join the fixed part.
pub fn coarsen_weights(w: &WeightMultiset, from: &DyadicSpace, depth: usize) -> Result<WeightMultiset> {
    if !Arc::ptr_eq(w.space(), &from.space) && **w.space() != *from.space {
        return Err(Error::SpaceMismatch);
    }
    if depth > from.depth {
        return Err(Error::DepthMismatch {
            from: from.depth,
            to: depth,
        });
    }
    let target = DyadicSpace::new(depth);
    let shift = from.depth - depth;
    let mut out = WeightMultiset::new(target.space.clone());
    for (v, mult) in w.entries() {
        let mut coarse = vec![0i64; 1 << depth];
        for (fine, &k) in v.iter().enumerate() {
            coarse[fine >> shift] += k;
        }
        out.insert(coarse, mult)?;
    }
    Ok(out)
}

/// Canonical presentation of a representation at finite resolution. The
/// result has no base measure: continuous-function representations carry no
/// reference measure condition.
pub fn classify_at_depth<W: Weight>(w: &WeightMultiset) -> Result<ClassificationResult<W>> {
    DyadicSpace::recognize(w.space()).ok_or(Error::SpaceMismatch)?;
    Ok(classify(w))
}

/// Minimal measure of a dyadic presentation.
pub fn minimal_measure_cantor<W: Weight>(p: &Presentation<W>) -> Result<DyadicMeasure<W>> {
    let dyadic = DyadicSpace::recognize(p.space()).ok_or(Error::SpaceMismatch)?;
    Ok(DyadicMeasure {
        depth: dyadic.depth,
        measure: minimal_measure(p)?,
    })
}
