//! Exact finitely supported measures on powers of a finite ordered space.
//!
//! For atomic measures every measure-class question reduces to a question
//! about supports: `a ≪ b` is `supp a ⊆ supp b`, and `a ⊥ b` is disjointness.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::Weight;
use crate::space::{same_space, OrderedSpace};

/// A tuple of point indices.
pub type Atom = Vec<usize>;

/// A measure on `X^n` with finitely many atoms of strictly positive weight.
///
/// The zero measure is the empty atom map and is valid everywhere.
#[derive(Debug, Clone)]
pub struct AtomicMeasure<W = BigRational> {
    space: Arc<OrderedSpace>,
    arity: usize,
    atoms: BTreeMap<Atom, W>,
}

impl<W: Weight> AtomicMeasure<W> {
    pub fn zero(space: Arc<OrderedSpace>, arity: usize) -> Self {
        assert!(arity >= 1, "measures need positive arity");
        AtomicMeasure {
            space,
            arity,
            atoms: BTreeMap::new(),
        }
    }

    /// Builds a measure from `(atom, weight)` pairs. Repeated atoms add up.
    pub fn from_atoms<I>(space: Arc<OrderedSpace>, arity: usize, atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Atom, W)>,
    {
        let mut m = Self::zero(space, arity);
        for (atom, w) in atoms {
            m.add_atom(atom, w)?;
        }
        Ok(m)
    }

    /// Like [`from_atoms`](Self::from_atoms) with atoms given by point names.
    pub fn from_named<I, A, S>(space: Arc<OrderedSpace>, arity: usize, atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, W)>,
        A: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut m = Self::zero(space, arity);
        for (names, w) in atoms {
            let atom = names
                .into_iter()
                .map(|s| m.space.index_of(s.as_ref()))
                .collect::<Result<Atom>>()?;
            m.add_atom(atom, w)?;
        }
        Ok(m)
    }

    /// Unit weight on every listed atom.
    pub fn uniform<I>(space: Arc<OrderedSpace>, arity: usize, support: I) -> Result<Self>
    where
        I: IntoIterator<Item = Atom>,
    {
        Self::from_atoms(space, arity, support.into_iter().map(|a| (a, W::one())))
    }

    pub fn add_atom(&mut self, atom: Atom, w: W) -> Result<()> {
        if !w.is_positive_weight() {
            return Err(Error::NonPositiveWeight);
        }
        if atom.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: atom.len(),
            });
        }
        if let Some(&bad) = atom.iter().find(|&&p| p >= self.space.len()) {
            return Err(Error::UnknownPoint(format!("#{bad}")));
        }
        self.accumulate(atom, w);
        Ok(())
    }

    // Caller guarantees `w > 0` and a well-formed atom.
    fn accumulate(&mut self, atom: Atom, w: W) {
        match self.atoms.get_mut(&atom) {
            Some(existing) => *existing = existing.clone() + w,
            None => {
                self.atoms.insert(atom, w);
            }
        }
    }

    pub fn space(&self) -> &Arc<OrderedSpace> {
        &self.space
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&Atom, &W)> {
        self.atoms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.keys()
    }

    pub fn support_len(&self) -> usize {
        self.atoms.len()
    }

    pub fn contains(&self, atom: &[usize]) -> bool {
        self.atoms.contains_key(atom)
    }

    pub fn weight(&self, atom: &[usize]) -> W {
        self.atoms.get(atom).cloned().unwrap_or_else(W::zero)
    }

    pub fn total_mass(&self) -> W {
        self.atoms.values().fold(W::zero(), |acc, w| acc + w.clone())
    }

    pub fn ensure_compatible(&self, other: &Self) -> Result<()> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(())
    }

    /// An atom charged by `self` but null for `other`, if any.
    pub fn support_excess(&self, other: &Self) -> Result<Option<Atom>> {
        self.ensure_compatible(other)?;
        Ok(self.support().find(|a| !other.contains(a)).cloned())
    }

    /// `self ≪ reference`.
    pub fn abs_continuous(&self, reference: &Self) -> Result<bool> {
        Ok(self.support_excess(reference)?.is_none())
    }

    pub fn mutually_equivalent(&self, other: &Self) -> Result<bool> {
        self.ensure_compatible(other)?;
        Ok(self.atoms.len() == other.atoms.len() && self.support().eq(other.support()))
    }

    /// `self ⊥ other`: disjoint supports.
    pub fn singular(&self, other: &Self) -> Result<bool> {
        self.ensure_compatible(other)?;
        Ok(self.support().all(|a| !other.contains(a)))
    }

    /// Splits `self` into the part absolutely continuous with respect to
    /// `reference` and the part singular to it.
    pub fn lebesgue_decompose(&self, reference: &Self) -> Result<(Self, Self)> {
        self.ensure_compatible(reference)?;
        let (ac, sing): (BTreeMap<_, _>, BTreeMap<_, _>) = self
            .atoms
            .iter()
            .map(|(a, w)| (a.clone(), w.clone()))
            .partition(|(a, _)| reference.contains(a));
        Ok((self.with_atoms(ac), self.with_atoms(sing)))
    }

    fn with_atoms(&self, atoms: BTreeMap<Atom, W>) -> Self {
        AtomicMeasure {
            space: self.space.clone(),
            arity: self.arity,
            atoms,
        }
    }

    /// Pushforward along the `index`-th projection (zero-based).
    pub fn marginal(&self, index: usize) -> Result<Self> {
        if index >= self.arity {
            return Err(Error::CoordinateOutOfRange {
                index,
                arity: self.arity,
            });
        }
        self.pushforward(self.space.clone(), 1, |a| Some(vec![a[index]]))
    }

    pub fn marginals(&self) -> Vec<Self> {
        (0..self.arity)
            .map(|i| self.marginal(i).expect("index within arity"))
            .collect()
    }

    /// Image measure under a tuple map into `target^arity`. Atoms with the
    /// same image merge by adding weights.
    pub fn pushforward<F>(&self, target: Arc<OrderedSpace>, arity: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> Option<Atom>,
    {
        let mut out = Self::zero(target, arity);
        for (a, w) in &self.atoms {
            let image = f(a).ok_or_else(|| Error::MapUndefined(a.clone()))?;
            out.add_atom(image, w.clone())?;
        }
        Ok(out)
    }

    /// Restriction to the atoms satisfying `keep`.
    pub fn restrict<F>(&self, mut keep: F) -> Self
    where
        F: FnMut(&[usize]) -> bool,
    {
        self.with_atoms(
            self.atoms
                .iter()
                .filter(|(a, _)| keep(a))
                .map(|(a, w)| (a.clone(), w.clone()))
                .collect(),
        )
    }

    /// Multiplies every weight by `c`; `c` must be positive.
    pub fn scale(&self, c: &W) -> Result<Self> {
        if !c.is_positive_weight() {
            return Err(Error::NonPositiveWeight);
        }
        Ok(self.with_atoms(
            self.atoms
                .iter()
                .map(|(a, w)| (a.clone(), w.clone() * c.clone()))
                .collect(),
        ))
    }

    /// Rescaled to total mass one; the zero measure stays zero.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mass = self.total_mass();
        self.with_atoms(
            self.atoms
                .iter()
                .map(|(a, w)| (a.clone(), w.clone() / mass.clone()))
                .collect(),
        )
    }

    /// Atomwise sum.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.ensure_compatible(other)?;
        let mut out = self.clone();
        for (a, w) in &other.atoms {
            out.accumulate(a.clone(), w.clone());
        }
        Ok(out)
    }

    /// No support atom repeats a point.
    pub fn check_a2(&self) -> bool {
        self.a2_witness().is_none()
    }

    pub fn a2_witness(&self) -> Option<&Atom> {
        self.support().find(|a| has_repeat(a))
    }

    /// Coordinates carrying equal exponents appear in increasing order.
    pub fn check_a3(&self, exponents: &[i64]) -> Result<bool> {
        Ok(self.a3_witness(exponents)?.is_none())
    }

    pub fn a3_witness(&self, exponents: &[i64]) -> Result<Option<&Atom>> {
        if exponents.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: exponents.len(),
                found: self.arity,
            });
        }
        Ok(self.support().find(|a| !respects_tie_order(a, exponents)))
    }
}

impl<W: PartialEq> PartialEq for AtomicMeasure<W> {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.arity == other.arity && self.atoms == other.atoms
    }
}

/// `Σ c_i · m_i` with positive coefficients.
pub fn weighted_sum<W: Weight>(measures: &[AtomicMeasure<W>], coeffs: &[W]) -> Result<AtomicMeasure<W>> {
    if measures.len() != coeffs.len() {
        return Err(Error::LengthMismatch {
            left: measures.len(),
            right: coeffs.len(),
        });
    }
    let Some(first) = measures.first() else {
        return Err(Error::LengthMismatch { left: 0, right: 0 });
    };
    let mut out = AtomicMeasure::zero(first.space.clone(), first.arity);
    for (m, c) in measures.iter().zip(coeffs) {
        out = out.plus(&m.scale(c)?)?;
    }
    Ok(out)
}

pub(crate) fn has_repeat(atom: &[usize]) -> bool {
    atom.iter()
        .enumerate()
        .any(|(i, p)| atom[i + 1..].contains(p))
}

pub(crate) fn respects_tie_order(atom: &[usize], exponents: &[i64]) -> bool {
    (0..atom.len()).all(|i| {
        (i + 1..atom.len()).all(|j| exponents[i] != exponents[j] || atom[i] < atom[j])
    })
}
