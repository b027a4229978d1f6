//! Operators of the form `T(f) = Σ_n g_n · (f∘σ_n)` between finite spaces,
//! their collapse to coefficient profiles, and the integrality criterion under
//! which `T` exponentiates to a homomorphism of circle-valued function groups.

use std::sync::Arc;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::measure::AtomicMeasure;
use crate::scalar::Weight;
use crate::space::{same_space, OrderedSpace};
use crate::weights::WeightMultiset;

/// One summand `g · (f∘σ)`; both maps are indexed by points of `Y`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term<W = BigRational> {
    pub coeff: Vec<W>,
    /// `σ(y)` as an index into `X`.
    pub map: Vec<usize>,
}

/// On finite spaces non-singularity of each `σ_n` is just totality.
#[derive(Debug, Clone, PartialEq)]
pub struct KwapienOperator<W = BigRational> {
    domain: Arc<OrderedSpace>,
    codomain: Arc<OrderedSpace>,
    terms: Vec<Term<W>>,
}

impl<W: Weight> KwapienOperator<W> {
    pub fn new(domain: Arc<OrderedSpace>, codomain: Arc<OrderedSpace>, terms: Vec<Term<W>>) -> Result<Self> {
        for t in &terms {
            if t.coeff.len() != codomain.len() || t.map.len() != codomain.len() {
                return Err(Error::LengthMismatch {
                    left: t.coeff.len().min(t.map.len()),
                    right: codomain.len(),
                });
            }
            if let Some(&x) = t.map.iter().find(|&&x| x >= domain.len()) {
                return Err(Error::UnknownPoint(format!("#{x}")));
            }
        }
        Ok(KwapienOperator {
            domain,
            codomain,
            terms,
        })
    }

    pub fn domain(&self) -> &Arc<OrderedSpace> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<OrderedSpace> {
        &self.codomain
    }

    pub fn terms(&self) -> &[Term<W>] {
        &self.terms
    }

    /// Pointwise evaluation of the sum.
    pub fn apply(&self, f: &[W]) -> Result<Vec<W>> {
        if f.len() != self.domain.len() {
            return Err(Error::LengthMismatch {
                left: f.len(),
                right: self.domain.len(),
            });
        }
        Ok((0..self.codomain.len())
            .map(|y| {
                self.terms.iter().fold(W::zero(), |acc, t| {
                    acc + t.coeff[y].clone() * f[t.map[y]].clone()
                })
            })
            .collect())
    }

    /// Row `y` holds `c_y(x) = Σ { g_n(y) : σ_n(y) = x }`, so that
    /// `T(f)(y) = Σ_x c_y(x) f(x)`.
    pub fn collapse(&self) -> CoefficientProfile<W> {
        let mut rows = vec![vec![W::zero(); self.domain.len()]; self.codomain.len()];
        for t in &self.terms {
            for (y, row) in rows.iter_mut().enumerate() {
                let x = t.map[y];
                row[x] = row[x].clone() + t.coeff[y].clone();
            }
        }
        CoefficientProfile { rows }
    }

    /// Integer-valued inputs go to integer-valued outputs iff every collapsed
    /// coefficient is an integer. A failing coefficient `c_y(x)` is witnessed
    /// by the indicator of `{x}`, whose image at `y` is `c_y(x)`.
    pub fn integrality_check(&self) -> IntegralityReport<W> {
        let profile = self.collapse();
        let witness = profile.rows.iter().enumerate().find_map(|(y, row)| {
            row.iter()
                .position(|c| !c.is_integral())
                .map(|x| IntegralityWitness {
                    y,
                    x,
                    value: row[x].to_string(),
                })
        });
        IntegralityReport { profile, witness }
    }

    pub fn to_homomorphism(&self) -> Result<HomomorphismMatrix> {
        let report = self.integrality_check();
        if let Some(w) = report.witness {
            return Err(Error::NonIntegral(Box::new(w)));
        }
        let rows = report
            .profile
            .rows
            .iter()
            .enumerate()
            .map(|(y, row)| {
                row.iter()
                    .enumerate()
                    .map(|(x, c)| {
                        c.integer_value().ok_or_else(|| {
                            Error::NonIntegral(Box::new(IntegralityWitness {
                                y,
                                x,
                                value: c.to_string(),
                            }))
                        })
                    })
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        HomomorphismMatrix::new(self.domain.clone(), self.codomain.clone(), rows)
    }
}

/// Dense `Y × X` coefficient matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientProfile<W = BigRational> {
    pub rows: Vec<Vec<W>>,
}

/// A point `y` and indicator `1_{x}` with non-integer image `value` at `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralityWitness {
    pub y: usize,
    pub x: usize,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralityReport<W = BigRational> {
    pub profile: CoefficientProfile<W>,
    pub witness: Option<IntegralityWitness>,
}

impl<W> IntegralityReport<W> {
    pub fn is_integral(&self) -> bool {
        self.witness.is_none()
    }
}

/// Integer matrix `K` indexed by `Y × X`. The induced homomorphism sends a
/// circle-valued `z` on `X` to `y ↦ Π_x z_x^{K_yx}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomomorphismMatrix {
    domain: Arc<OrderedSpace>,
    codomain: Arc<OrderedSpace>,
    rows: Vec<Vec<i64>>,
}

impl HomomorphismMatrix {
    pub fn new(domain: Arc<OrderedSpace>, codomain: Arc<OrderedSpace>, rows: Vec<Vec<i64>>) -> Result<Self> {
        if rows.len() != codomain.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} rows for {} codomain points",
                rows.len(),
                codomain.len()
            )));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != domain.len()) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} for {} domain points",
                r.len(),
                domain.len()
            )));
        }
        Ok(HomomorphismMatrix {
            domain,
            codomain,
            rows,
        })
    }

    pub fn domain(&self) -> &Arc<OrderedSpace> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<OrderedSpace> {
        &self.codomain
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Phase of `ψ(z)` at every `y`, for `z` given as phases on `X`.
    pub fn act<P: Weight>(&self, z: &[P]) -> Vec<P> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(z)
                    .fold(P::zero(), |acc, (&k, p)| acc + P::from_int(k) * p.clone())
                    .turn()
            })
            .collect()
    }

    /// Weights of the multiplication representation on `L²(ν)`: every
    /// support atom `y` of `ν` is a character vector with weight row `K_y`.
    pub fn induced_weights<W: Weight>(&self, nu: &AtomicMeasure<W>) -> Result<WeightMultiset> {
        if !same_space(nu.space(), &self.codomain) {
            return Err(Error::SpaceMismatch);
        }
        if nu.arity() != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: nu.arity(),
            });
        }
        let mut out = WeightMultiset::new(self.domain.clone());
        for atom in nu.support() {
            out.insert(self.rows[atom[0]].clone(), 1)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::{classify, reconstruct};
    use crate::scalar::ratio;
    use proptest::prelude::*;

    type Q = BigRational;

    fn spaces(nx: usize, ny: usize) -> (Arc<OrderedSpace>, Arc<OrderedSpace>) {
        (
            OrderedSpace::shared((0..nx).map(|i| format!("x{i}"))).unwrap(),
            OrderedSpace::shared((0..ny).map(|i| format!("y{i}"))).unwrap(),
        )
    }

    fn constant_term(ny: usize, c: Q, x: usize) -> Term<Q> {
        Term {
            coeff: vec![c; ny],
            map: vec![x; ny],
        }
    }

    /// Every indicator of a subset of X maps to an integer-valued function.
    fn indicators_integral(t: &KwapienOperator<Q>) -> bool {
        let nx = t.domain().len();
        (0u32..1 << nx).all(|mask| {
            let f: Vec<Q> = (0..nx).map(|x| ratio(((mask >> x) & 1) as i64, 1)).collect();
            t.apply(&f).unwrap().iter().all(|v| v.is_integer())
        })
    }

    #[test]
    fn apply_examples() {
        let (x, y) = spaces(2, 3);
        let f = vec![ratio(5, 7), ratio(-2, 1)];
        let empty = KwapienOperator::<Q>::new(x.clone(), y.clone(), vec![]).unwrap();
        assert_eq!(empty.apply(&f).unwrap(), vec![ratio(0, 1); 3]);

        let one = KwapienOperator::new(x.clone(), y.clone(), vec![constant_term(3, ratio(1, 1), 0)]).unwrap();
        assert_eq!(one.apply(&f).unwrap(), vec![ratio(5, 7); 3]);

        let halves = KwapienOperator::new(
            x.clone(),
            y.clone(),
            vec![constant_term(3, ratio(1, 2), 0), constant_term(3, ratio(1, 2), 0)],
        )
        .unwrap();
        assert_eq!(halves.apply(&f).unwrap(), vec![ratio(5, 7); 3]);
        assert_eq!(halves.collapse().rows, vec![vec![ratio(1, 1), ratio(0, 1)]; 3]);
    }

    #[test]
    fn collapse_examples() {
        let (x, y) = spaces(2, 1);
        let split = KwapienOperator::new(
            x.clone(),
            y.clone(),
            vec![constant_term(1, ratio(1, 2), 0), constant_term(1, ratio(1, 2), 1)],
        )
        .unwrap();
        assert_eq!(split.collapse().rows, vec![vec![ratio(1, 2), ratio(1, 2)]]);
        let empty = KwapienOperator::<Q>::new(x, y, vec![]).unwrap();
        assert_eq!(empty.collapse().rows, vec![vec![ratio(0, 1); 2]]);
    }

    #[test]
    fn integrality_examples() {
        let (x, y) = spaces(2, 1);
        let integral = KwapienOperator::new(
            x.clone(),
            y.clone(),
            vec![constant_term(1, ratio(3, 1), 0), constant_term(1, ratio(-1, 1), 1)],
        )
        .unwrap();
        assert!(integral.integrality_check().is_integral());

        let halves = KwapienOperator::new(
            x.clone(),
            y.clone(),
            vec![constant_term(1, ratio(1, 2), 0), constant_term(1, ratio(1, 2), 1)],
        )
        .unwrap();
        let w = halves.integrality_check().witness.unwrap();
        assert_eq!((w.y, w.x), (0, 0));
        assert_eq!(halves.apply(&[ratio(1, 1), ratio(0, 1)]).unwrap()[0], ratio(1, 2));

        // constants map to integers here, but the indicator of x0 does not
        let skew = KwapienOperator::new(
            x.clone(),
            y.clone(),
            vec![constant_term(1, ratio(3, 2), 0), constant_term(1, ratio(-1, 2), 1)],
        )
        .unwrap();
        assert_eq!(skew.apply(&[ratio(1, 1), ratio(1, 1)]).unwrap()[0], ratio(1, 1));
        let w = skew.integrality_check().witness.unwrap();
        assert_eq!((w.y, w.x), (0, 0));
        assert!(!indicators_integral(&skew));
        assert!(matches!(skew.to_homomorphism(), Err(Error::NonIntegral(_))));
    }

    #[test]
    fn to_homomorphism_examples() {
        let (x, y) = spaces(2, 3);
        let zero = KwapienOperator::<Q>::new(x.clone(), y.clone(), vec![]).unwrap();
        assert_eq!(zero.to_homomorphism().unwrap().rows(), &vec![vec![0, 0]; 3][..]);

        let eval = KwapienOperator::new(x.clone(), y.clone(), vec![constant_term(3, ratio(1, 1), 1)]).unwrap();
        assert_eq!(eval.to_homomorphism().unwrap().rows(), &vec![vec![0, 1]; 3][..]);

        let halves = KwapienOperator::new(
            x.clone(),
            y.clone(),
            vec![constant_term(3, ratio(1, 2), 0), constant_term(3, ratio(1, 2), 0)],
        )
        .unwrap();
        assert_eq!(halves.to_homomorphism().unwrap().rows(), &vec![vec![1, 0]; 3][..]);
    }

    #[test]
    fn induced_weights_examples() {
        let (x, y) = spaces(2, 3);
        let k = HomomorphismMatrix::new(x.clone(), y.clone(), vec![vec![1, 0]; 3]).unwrap();
        let zero = AtomicMeasure::<Q>::zero(y.clone(), 1);
        assert!(k.induced_weights(&zero).unwrap().is_empty());

        let all = AtomicMeasure::<Q>::uniform(y.clone(), 1, (0..3).map(|i| vec![i])).unwrap();
        assert_eq!(
            k.induced_weights(&all).unwrap(),
            WeightMultiset::from_vectors(x.clone(), [(vec![1, 0], 3)]).unwrap()
        );

        let k = HomomorphismMatrix::new(x.clone(), y.clone(), vec![vec![1, 0], vec![0, 2], vec![-1, 1]]).unwrap();
        let w = k.induced_weights(&all).unwrap();
        assert_eq!(w.dimension(), 3);
        assert!(w.entries().all(|(_, m)| m == 1));

        assert!(k.induced_weights(&AtomicMeasure::<Q>::zero(x, 1)).is_err());
    }

    #[test]
    fn homomorphism_acts_by_products() {
        let (x, y) = spaces(2, 1);
        let k = HomomorphismMatrix::new(x, y, vec![vec![2, -1]]).unwrap();
        assert_eq!(k.act(&[ratio(1, 3), ratio(1, 4)]), vec![ratio(5, 12)]);
    }

    fn arb_operator() -> impl Strategy<Value = (KwapienOperator<Q>, usize)> {
        (1usize..5, 1usize..4).prop_flat_map(|(nx, ny)| {
            let term = (
                prop::collection::vec((-6i64..7, prop::sample::select(vec![1i64, 2, 4])), ny),
                prop::collection::vec(0..nx, ny),
            );
            (prop::collection::vec(term, 0..5), Just((nx, ny)))
        })
        .prop_map(|(terms, (nx, ny))| {
            let (x, y) = spaces(nx, ny);
            let terms = terms
                .into_iter()
                .map(|(g, map)| Term {
                    coeff: g.into_iter().map(|(n, d)| ratio(n, d)).collect(),
                    map,
                })
                .collect();
            (KwapienOperator::new(x, y, terms).unwrap(), nx)
        })
    }

    proptest! {
        #[test]
        fn apply_is_linear((t, nx) in arb_operator(), f in prop::collection::vec(-9i64..10, 4), g in prop::collection::vec(-9i64..10, 4), r in (-5i64..6, 1i64..5)) {
            let f: Vec<Q> = f[..nx].iter().map(|&v| ratio(v, 3)).collect();
            let g: Vec<Q> = g[..nx].iter().map(|&v| ratio(v, 2)).collect();
            let r = ratio(r.0, r.1);
            let sum: Vec<Q> = f.iter().zip(&g).map(|(a, b)| a + b).collect();
            let scaled: Vec<Q> = f.iter().map(|a| a * &r).collect();
            let tf = t.apply(&f).unwrap();
            let tg = t.apply(&g).unwrap();
            let expected: Vec<Q> = tf.iter().zip(&tg).map(|(a, b)| a + b).collect();
            prop_assert_eq!(t.apply(&sum).unwrap(), expected);
            let expected: Vec<Q> = tf.iter().map(|a| a * &r).collect();
            prop_assert_eq!(t.apply(&scaled).unwrap(), expected);
        }

        #[test]
        fn collapse_is_sound((t, nx) in arb_operator(), f in prop::collection::vec((-9i64..10, 1i64..6), 4)) {
            let f: Vec<Q> = f[..nx].iter().map(|&(n, d)| ratio(n, d)).collect();
            let profile = t.collapse();
            let via_rows: Vec<Q> = profile
                .rows
                .iter()
                .map(|row| row.iter().zip(&f).fold(ratio(0, 1), |acc, (c, v)| acc + c * v))
                .collect();
            prop_assert_eq!(via_rows, t.apply(&f).unwrap());
        }

        #[test]
        fn integrality_matches_indicators((t, _) in arb_operator()) {
            prop_assert_eq!(t.integrality_check().is_integral(), indicators_integral(&t));
        }

        #[test]
        fn integer_valued_inputs_reduce_to_indicators((t, nx) in arb_operator(), f in prop::collection::vec(-9i64..10, 4)) {
            // integer f is an integer combination of indicators, so integrality
            // on indicators forces integrality on f
            let f: Vec<Q> = f[..nx].iter().map(|&v| ratio(v, 1)).collect();
            if indicators_integral(&t) {
                prop_assert!(t.apply(&f).unwrap().iter().all(|v| v.is_integer()));
            }
        }

        #[test]
        fn pipeline_round_trips((t, _) in arb_operator()) {
            if let Ok(k) = t.to_homomorphism() {
                let y = t.codomain().clone();
                let nu = AtomicMeasure::<Q>::uniform(y.clone(), 1, (0..y.len()).map(|i| vec![i])).unwrap();
                let w = k.induced_weights(&nu).unwrap();
                let r = classify::<Q>(&w);
                let mut back = reconstruct(&r.canonical).unwrap();
                back.add_fixed(r.fixed_dim);
                prop_assert_eq!(back, w);
            }
        }
    }
}
