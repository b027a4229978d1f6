//! Signatures and block representations.
//!
//! A block pairs a signature `κ = (k_1 ≤ … ≤ k_n)` with a measure `λ` on
//! `X^n`; a circle-valued function `f` acts on `L²(λ)` by multiplication with
//! `∏ (f∘π_i)^{k_i}`. Circle elements are exact phases (fractions of a turn),
//! so the action on the basis vector at an atom is the phase `Σ k_i f(x_i)`
//! reduced modulo one.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::measure::{has_repeat, Atom, AtomicMeasure};
use crate::scalar::Weight;
use crate::weights::WeightMultiset;

/// A nonempty nondecreasing sequence of nonzero integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature(Vec<i64>);

impl Signature {
    pub fn new(exponents: Vec<i64>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidSignature("empty".into()));
        }
        if exponents.contains(&0) {
            return Err(Error::InvalidSignature("zero exponent".into()));
        }
        if exponents.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidSignature("not sorted ascending".into()));
        }
        Ok(Signature(exponents))
    }

    /// Drops zeros and sorts; `None` if nothing is left.
    pub fn normalize(mut exponents: Vec<i64>) -> Option<Self> {
        exponents.retain(|&k| k != 0);
        if exponents.is_empty() {
            return None;
        }
        exponents.sort_unstable();
        Some(Signature(exponents))
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Maximal runs of equal exponents, as index ranges.
    pub fn tie_runs(&self) -> Vec<std::ops::Range<usize>> {
        let mut runs = Vec::new();
        let mut start = 0;
        for i in 1..=self.0.len() {
            if i == self.0.len() || self.0[i] != self.0[start] {
                runs.push(start..i);
                start = i;
            }
        }
        runs
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// One block `σ(κ, λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Block<W = BigRational> {
    signature: Signature,
    measure: AtomicMeasure<W>,
}

impl<W: Weight> Block<W> {
    pub fn new(signature: Signature, measure: AtomicMeasure<W>) -> Result<Self> {
        if measure.arity() != signature.len() {
            return Err(Error::ArityMismatch {
                expected: signature.len(),
                found: measure.arity(),
            });
        }
        Ok(Block { signature, measure })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn measure(&self) -> &AtomicMeasure<W> {
        &self.measure
    }

    pub fn check_a2(&self) -> bool {
        self.measure.check_a2()
    }

    pub fn check_a3(&self) -> bool {
        self.measure
            .check_a3(self.signature.exponents())
            .expect("arity matches by construction")
    }

    /// Phase by which `f` acts on each atom's basis vector. `f` gives the
    /// phase at every point of the space, in point order.
    pub fn apply<P: Weight>(&self, f: &[P]) -> Result<Vec<(Atom, P)>> {
        let space = self.measure.space();
        if f.len() != space.len() {
            return Err(Error::LengthMismatch {
                left: f.len(),
                right: space.len(),
            });
        }
        Ok(self
            .measure
            .support()
            .map(|atom| {
                let phase = atom
                    .iter()
                    .zip(self.signature.exponents())
                    .fold(P::zero(), |acc, (&x, &k)| acc + P::from_int(k) * f[x].clone());
                (atom.clone(), phase.turn())
            })
            .collect())
    }

    /// Each support atom contributes the character vector with `k_i` at
    /// `x_i`. Atom weights do not matter, only the support.
    pub fn weights(&self) -> Result<WeightMultiset> {
        let space = self.measure.space();
        let mut out = WeightMultiset::new(space.clone());
        for atom in self.measure.support() {
            if has_repeat(atom) {
                return Err(Error::RepeatedPoint { atom: atom.clone() });
            }
            let mut v = vec![0; space.len()];
            for (&x, &k) in atom.iter().zip(self.signature.exponents()) {
                v[x] = k;
            }
            out.insert(v, 1)?;
        }
        Ok(out)
    }

    /// Splits the block over the order cells `X^ρ` and moves each cell onto
    /// the identity cell, producing blocks that satisfy both the no-repeat
    /// and the tie-order conditions. Cells are returned in order of `ρ`.
    pub fn sort(&self) -> Result<Vec<Block<W>>> {
        if let Some(atom) = self.measure.a2_witness() {
            return Err(Error::RepeatedPoint { atom: atom.clone() });
        }
        let runs = self.signature.tie_runs();
        let mut cells: BTreeMap<Vec<usize>, Vec<Atom>> = BTreeMap::new();
        for atom in self.measure.support() {
            cells.entry(cell_permutation(atom, &runs)).or_default().push(atom.clone());
        }
        cells
            .into_iter()
            .map(|(rho, members)| {
                let cell = self.measure.restrict(|a| members.binary_search_by(|m| m.as_slice().cmp(a)).is_ok());
                let moved = cell.pushforward(self.measure.space().clone(), self.signature.len(), |a| {
                    Some(rho.iter().map(|&i| a[i]).collect())
                })?;
                Block::new(self.signature.clone(), moved)
            })
            .collect()
    }
}

/// The permutation `ρ` with `atom ∈ X^ρ`: within each run of equal exponents,
/// the coordinate indices listed in increasing order of their points.
fn cell_permutation(atom: &[usize], runs: &[std::ops::Range<usize>]) -> Vec<usize> {
    let mut rho: Vec<usize> = (0..atom.len()).collect();
    for run in runs {
        rho[run.clone()].sort_by_key(|&i| atom[i]);
    }
    rho
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use crate::space::OrderedSpace;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn abc() -> Arc<OrderedSpace> {
        OrderedSpace::shared(["a", "b", "c"]).unwrap()
    }

    fn block(kappa: &[i64], atoms: &[&[&str]]) -> Block {
        let x = abc();
        let m = AtomicMeasure::from_named(x, kappa.len(), atoms.iter().map(|a| (a.iter().copied(), ratio(1, 1)))).unwrap();
        Block::new(Signature::new(kappa.to_vec()).unwrap(), m).unwrap()
    }

    fn vector(pairs: &[(usize, i64)]) -> Vec<i64> {
        let mut v = vec![0; 3];
        for &(i, k) in pairs {
            v[i] = k;
        }
        v
    }

    #[test]
    fn signature_invariants() {
        assert!(Signature::new(vec![]).is_err());
        assert!(Signature::new(vec![1, 0]).is_err());
        assert!(Signature::new(vec![2, 1]).is_err());
        assert_eq!(Signature::normalize(vec![2, 0, -1]).unwrap().exponents(), &[-1, 2]);
        assert!(Signature::normalize(vec![0, 0]).is_none());
        assert_eq!(Signature::new(vec![-1, 1, 1, 3]).unwrap().tie_runs(), vec![0..1, 1..3, 3..4]);
    }

    #[test]
    fn apply_examples() {
        let b = block(&[1, 1], &[&["a", "b"]]);
        let zero = vec![ratio(0, 1); 3];
        assert!(b.apply(&zero).unwrap().iter().all(|(_, p)| *p == ratio(0, 1)));

        let b = block(&[2], &[&["a"]]);
        let f = vec![ratio(1, 4), ratio(0, 1), ratio(0, 1)];
        assert_eq!(b.apply(&f).unwrap(), vec![(vec![0], ratio(1, 2))]);

        let b = block(&[-1, 2], &[&["b", "a"]]);
        let f = vec![ratio(1, 3), ratio(1, 3), ratio(0, 1)];
        assert_eq!(b.apply(&f).unwrap(), vec![(vec![1, 0], ratio(1, 3))]);

        assert!(b.apply(&f[..2]).is_err());
    }

    #[test]
    fn weights_examples() {
        let x = abc();
        assert_eq!(
            block(&[1], &[&["a"]]).weights().unwrap(),
            WeightMultiset::from_vectors(x.clone(), [(vector(&[(0, 1)]), 1)]).unwrap()
        );
        assert_eq!(
            block(&[1, 1], &[&["a", "b"]]).weights().unwrap(),
            WeightMultiset::from_vectors(x.clone(), [(vector(&[(0, 1), (1, 1)]), 1)]).unwrap()
        );
        assert_eq!(
            block(&[-1, 2], &[&["b", "a"], &["b", "c"]]).weights().unwrap(),
            WeightMultiset::from_vectors(
                x,
                [
                    (vector(&[(1, -1), (0, 2)]), 1),
                    (vector(&[(1, -1), (2, 2)]), 1)
                ]
            )
            .unwrap()
        );
        assert!(matches!(
            block(&[1, 1], &[&["a", "a"]]).weights(),
            Err(Error::RepeatedPoint { .. })
        ));
    }

    #[test]
    fn sort_examples() {
        let sorted = block(&[1, 1], &[&["a", "b"]]);
        assert_eq!(sorted.sort().unwrap(), vec![sorted.clone()]);

        let swapped = block(&[1, 1], &[&["b", "a"]]).sort().unwrap();
        assert_eq!(swapped, vec![block(&[1, 1], &[&["a", "b"]])]);

        let distinct = block(&[1, 2], &[&["b", "a"]]);
        assert_eq!(distinct.sort().unwrap(), vec![distinct.clone()]);

        // both orders of the same pair land in separate blocks
        let both = block(&[1, 1], &[&["a", "b"], &["b", "a"]]).sort().unwrap();
        assert_eq!(both.len(), 2);
        assert!(both.iter().all(|b| *b == block(&[1, 1], &[&["a", "b"]])));

        assert!(block(&[1, 1], &[&["c", "c"]]).sort().is_err());
    }

    fn arb_block() -> impl Strategy<Value = Block> {
        (
            prop::collection::vec(prop_oneof![-3i64..0, 1i64..4], 1..4),
            prop::collection::vec(prop::sample::subsequence(vec![0usize, 1, 2, 3, 4], 4), 0..6),
            any::<u64>(),
        )
            .prop_map(|(mut kappa, atoms, seed)| {
                kappa.sort_unstable();
                let n = kappa.len();
                let x = OrderedSpace::shared(["a", "b", "c", "d", "e"]).unwrap();
                // random distinct coordinates, shuffled deterministically by seed
                let atoms = atoms.into_iter().enumerate().map(|(i, mut pts)| {
                    let r = (seed as usize).wrapping_add(i * 7919);
                    let len = pts.len();
                    pts.rotate_left(r % len);
                    if r % 2 == 1 {
                        pts.reverse();
                    }
                    pts.truncate(n);
                    (pts, ratio(1 + (r % 5) as i64, 1 + (r % 3) as i64))
                });
                let m = AtomicMeasure::from_atoms(x, n, atoms).unwrap();
                Block::new(Signature::new(kappa).unwrap(), m).unwrap()
            })
    }

    proptest! {
        #[test]
        fn apply_is_a_homomorphism(b in arb_block(), f in prop::collection::vec((0i64..12, 1i64..12), 5), g in prop::collection::vec((0i64..12, 1i64..12), 5)) {
            let f: Vec<_> = f.into_iter().map(|(n, d)| ratio(n, d).turn()).collect();
            let g: Vec<_> = g.into_iter().map(|(n, d)| ratio(n, d).turn()).collect();
            let fg: Vec<_> = f.iter().zip(&g).map(|(a, b)| (a + b).turn()).collect();
            let pf = b.apply(&f).unwrap();
            let pg = b.apply(&g).unwrap();
            let pfg = b.apply(&fg).unwrap();
            for ((a, x), ((_, y), (_, z))) in pf.iter().zip(pg.iter().zip(&pfg)) {
                prop_assert_eq!(&(x + y).turn(), z, "atom {:?}", a);
            }
        }

        #[test]
        fn sort_preserves_weights(b in arb_block()) {
            let parts = b.sort().unwrap();
            let mut total = WeightMultiset::new(b.measure().space().clone());
            for p in &parts {
                prop_assert!(p.check_a2());
                prop_assert!(p.check_a3());
                total.merge(&p.weights().unwrap()).unwrap();
            }
            prop_assert_eq!(total, b.weights().unwrap());
        }

        #[test]
        fn weight_vectors_carry_the_signature(b in arb_block()) {
            for (v, _) in b.weights().unwrap().entries() {
                let mut nonzero: Vec<i64> = v.iter().copied().filter(|&k| k != 0).collect();
                nonzero.sort_unstable();
                prop_assert_eq!(nonzero.as_slice(), b.signature().exponents());
            }
        }
    }
}
