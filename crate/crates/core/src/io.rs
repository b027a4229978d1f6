//! JSON documents for measures, presentations, weight multisets, operators
//! and unitary families.
//!
//! Weights are exact `"p/q"` strings; points are named by their identifiers.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::blocks::Signature;
use crate::cantor::DyadicSpace;
use crate::classifier::{ClassificationResult, Comparison};
use crate::error::{Error, Result};
use crate::kwapien::{HomomorphismMatrix, IntegralityReport, KwapienOperator, Term};
use crate::measure::AtomicMeasure;
use crate::presentation::{Presentation, ValidationReport};
use crate::space::OrderedSpace;
use crate::spectral::{Diagonalization, UnitaryFamily};
use crate::weights::WeightMultiset;

pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

fn depth_of(space: &Arc<OrderedSpace>) -> Option<usize> {
    DyadicSpace::recognize(space).map(|d| d.depth())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomDoc {
    pub tuple: Vec<String>,
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureDoc {
    pub space: Vec<String>,
    pub arity: usize,
    pub atoms: Vec<AtomDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

impl MeasureDoc {
    pub fn from_measure(m: &AtomicMeasure) -> Self {
        let space = m.space();
        MeasureDoc {
            space: space.points().to_vec(),
            arity: m.arity(),
            atoms: m
                .atoms()
                .map(|(a, w)| AtomDoc {
                    tuple: space.names(a),
                    weight: format_rational(w),
                })
                .collect(),
            depth: depth_of(space),
        }
    }

    pub fn to_measure(&self) -> Result<AtomicMeasure> {
        self.to_measure_on(&OrderedSpace::shared(self.space.iter().cloned())?)
    }

    /// Builds the measure on an already shared space, which must match.
    pub fn to_measure_on(&self, space: &Arc<OrderedSpace>) -> Result<AtomicMeasure> {
        if space.points() != self.space.as_slice() {
            return Err(Error::SpaceMismatch);
        }
        if self.arity == 0 {
            return Err(Error::Parse("arity must be positive".into()));
        }
        if let Some(d) = self.depth {
            if depth_of(space) != Some(d) {
                return Err(Error::Parse(format!("space is not the dyadic space of depth {d}")));
            }
        }
        let mut m = AtomicMeasure::zero(space.clone(), self.arity);
        for atom in &self.atoms {
            let tuple = atom
                .tuple
                .iter()
                .map(|p| space.index_of(p))
                .collect::<Result<Vec<_>>>()?;
            let w = parse_rational(&atom.weight)?;
            match m.add_atom(tuple, w) {
                Err(Error::NonPositiveWeight) => {
                    return Err(Error::Parse(format!("atom weight `{}` is not positive", atom.weight)))
                }
                Err(Error::ArityMismatch { .. }) => {
                    return Err(Error::Parse(format!("atom {:?} has the wrong length", atom.tuple)))
                }
                other => other?,
            }
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryDoc {
    pub kappa: Vec<i64>,
    pub layer: usize,
    pub measure: MeasureDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresentationDoc {
    /// Optional when a base or an entry names the space.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<Vec<String>>,
    pub base: Option<MeasureDoc>,
    pub entries: Vec<EntryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

impl PresentationDoc {
    pub fn from_presentation(p: &Presentation) -> Self {
        PresentationDoc {
            space: Some(p.space().points().to_vec()),
            base: p.base().map(MeasureDoc::from_measure),
            entries: p
                .entries()
                .map(|(k, j, m)| EntryDoc {
                    kappa: k.exponents().to_vec(),
                    layer: j,
                    measure: MeasureDoc::from_measure(m),
                })
                .collect(),
            depth: depth_of(p.space()),
        }
    }

    pub fn to_presentation(&self) -> Result<Presentation> {
        let names = self
            .space
            .clone()
            .or_else(|| self.base.as_ref().map(|b| b.space.clone()))
            .or_else(|| self.entries.first().map(|e| e.measure.space.clone()))
            .unwrap_or_default();
        let space = OrderedSpace::shared(names)?;
        let mut p = Presentation::new(space.clone());
        if let Some(b) = &self.base {
            p.set_base(Some(b.to_measure_on(&space)?))?;
        }
        for e in &self.entries {
            let kappa = Signature::new(e.kappa.clone())?;
            if p.get(&kappa, e.layer).is_some() {
                return Err(Error::Parse(format!("duplicate entry for kappa {kappa}, layer {}", e.layer)));
            }
            p.insert(kappa, e.layer, e.measure.to_measure_on(&space)?)?;
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationDoc {
    pub fixed_dim: usize,
    pub presentation: PresentationDoc,
}

impl ClassificationDoc {
    pub fn from_result(r: &ClassificationResult) -> Self {
        ClassificationDoc {
            fixed_dim: r.fixed_dim,
            presentation: PresentationDoc::from_presentation(&r.canonical),
        }
    }
}

/// Reads either a bare presentation or a classification report.
pub fn parse_presentation(json: &str) -> Result<Presentation> {
    let value: serde_json::Value = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    let doc = match value.get("presentation") {
        Some(inner) => inner.clone(),
        None => value,
    };
    let doc: PresentationDoc = serde_json::from_value(doc).map_err(|e| Error::Parse(e.to_string()))?;
    doc.to_presentation()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVectorDoc {
    pub weights: Vec<i64>,
    #[serde(default = "one")]
    pub multiplicity: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightsDoc {
    pub space: Vec<String>,
    pub vectors: Vec<WeightVectorDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

impl WeightsDoc {
    pub fn from_multiset(w: &WeightMultiset) -> Self {
        WeightsDoc {
            space: w.space().points().to_vec(),
            vectors: w
                .entries()
                .map(|(v, m)| WeightVectorDoc {
                    weights: v.clone(),
                    multiplicity: m,
                })
                .collect(),
            depth: depth_of(w.space()),
        }
    }

    pub fn to_multiset(&self) -> Result<WeightMultiset> {
        let space = OrderedSpace::shared(self.space.iter().cloned())?;
        if let Some(d) = self.depth {
            if depth_of(&space) != Some(d) {
                return Err(Error::Parse(format!("space is not the dyadic space of depth {d}")));
            }
        }
        let mut w = WeightMultiset::new(space);
        for v in &self.vectors {
            w.insert(v.weights.clone(), v.multiplicity)
                .map_err(|_| Error::Parse(format!("weight vector {:?} has the wrong length", v.weights)))?;
        }
        Ok(w)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    /// Coefficient per point of `Y`; missing points are zero.
    pub g: BTreeMap<String, String>,
    /// Target in `X` per point of `Y`; must be total.
    pub sigma: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorDoc {
    #[serde(rename = "X")]
    pub domain: Vec<String>,
    #[serde(rename = "Y")]
    pub codomain: Vec<String>,
    pub terms: Vec<TermDoc>,
}

impl OperatorDoc {
    pub fn to_operator(&self) -> Result<KwapienOperator> {
        let x = OrderedSpace::shared(self.domain.iter().cloned())?;
        let y = OrderedSpace::shared(self.codomain.iter().cloned())?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut coeff = vec![BigRational::zero(); y.len()];
            for (name, value) in &t.g {
                coeff[y.index_of(name)?] = parse_rational(value)?;
            }
            let mut map = vec![None; y.len()];
            for (name, target) in &t.sigma {
                map[y.index_of(name)?] = Some(x.index_of(target)?);
            }
            let map = map
                .into_iter()
                .enumerate()
                .map(|(i, m)| m.ok_or_else(|| Error::Parse(format!("sigma undefined at `{}`", y.name(i)))))
                .collect::<Result<Vec<_>>>()?;
            terms.push(Term { coeff, map });
        }
        KwapienOperator::new(x, y, terms)
    }

    pub fn from_operator(t: &KwapienOperator) -> Self {
        let (x, y) = (t.domain(), t.codomain());
        OperatorDoc {
            domain: x.points().to_vec(),
            codomain: y.points().to_vec(),
            terms: t
                .terms()
                .iter()
                .map(|term| TermDoc {
                    g: term
                        .coeff
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(i, c)| (y.name(i).to_string(), format_rational(c)))
                        .collect(),
                    sigma: term
                        .map
                        .iter()
                        .enumerate()
                        .map(|(i, &target)| (y.name(i).to_string(), x.name(target).to_string()))
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    #[serde(rename = "X")]
    pub domain: Vec<String>,
    #[serde(rename = "Y")]
    pub codomain: Vec<String>,
    /// Row-major: one row per point of `Y`.
    pub rows: Vec<Vec<i64>>,
}

impl MatrixDoc {
    pub fn from_matrix(k: &HomomorphismMatrix) -> Self {
        MatrixDoc {
            domain: k.domain().points().to_vec(),
            codomain: k.codomain().points().to_vec(),
            rows: k.rows().to_vec(),
        }
    }

    pub fn to_matrix(&self) -> Result<HomomorphismMatrix> {
        HomomorphismMatrix::new(
            OrderedSpace::shared(self.domain.iter().cloned())?,
            OrderedSpace::shared(self.codomain.iter().cloned())?,
            self.rows.clone(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub y: String,
    pub indicator_of: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralityDoc {
    pub integral: bool,
    /// Collapsed coefficients `c_y(x)`, one row per point of `Y`.
    pub profile: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
}

impl IntegralityDoc {
    pub fn from_report(t: &KwapienOperator, report: &IntegralityReport) -> Self {
        IntegralityDoc {
            integral: report.is_integral(),
            profile: report
                .profile
                .rows
                .iter()
                .map(|r| r.iter().map(format_rational).collect())
                .collect(),
            matrix: t.to_homomorphism().ok().map(|k| MatrixDoc::from_matrix(&k)),
            witness: report.witness.as_ref().map(|w| WitnessDoc {
                y: t.codomain().name(w.y).to_string(),
                indicator_of: t.domain().name(w.x).to_string(),
                value: w.value.clone(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationDoc {
    pub condition: String,
    pub kappa: Vec<i64>,
    pub layer: usize,
    pub atom: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationDoc {
    pub valid: bool,
    #[serde(rename = "A1")]
    pub a1: Option<bool>,
    #[serde(rename = "A2")]
    pub a2: bool,
    #[serde(rename = "A3")]
    pub a3: bool,
    #[serde(rename = "A4")]
    pub a4: bool,
    pub violations: Vec<ViolationDoc>,
}

impl ValidationDoc {
    pub fn from_report(p: &Presentation, report: &ValidationReport) -> Self {
        use crate::presentation::Condition::*;
        ValidationDoc {
            valid: report.is_valid(),
            a1: p.base().map(|_| report.holds(MarginalsDominated)),
            a2: report.holds(NoRepeatedPoints),
            a3: report.holds(TieOrder),
            a4: report.holds(LayerChain),
            violations: report
                .violations
                .iter()
                .map(|v| ViolationDoc {
                    condition: v.condition.to_string(),
                    kappa: v.kappa.exponents().to_vec(),
                    layer: v.layer,
                    atom: p.space().names(&v.atom),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MismatchDoc {
    pub kappa: Vec<i64>,
    pub layer: usize,
    pub atom: Vec<String>,
    /// `"first"` or `"second"`: the presentation charging the atom.
    pub charged_by: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonDoc {
    pub equivalent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<MismatchDoc>,
}

impl ComparisonDoc {
    pub fn from_comparison(p: &Presentation, c: &Comparison) -> Self {
        ComparisonDoc {
            equivalent: c.equivalent,
            mismatch: c.mismatch.as_ref().map(|m| MismatchDoc {
                kappa: m.kappa.exponents().to_vec(),
                layer: m.layer,
                atom: p.space().names(&m.atom),
                charged_by: if m.in_first { "first" } else { "second" }.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingHeader {
    pub q: u32,
    #[serde(rename = "B")]
    pub bound: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitaryFamilyDoc {
    pub header: SamplingHeader,
    pub space: Vec<String>,
    pub dim: usize,
    /// One matrix per point, in space order; rows of `[re, im]` pairs.
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

impl UnitaryFamilyDoc {
    pub fn from_family(fam: &UnitaryFamily<f64>) -> Self {
        let d = fam.dim();
        UnitaryFamilyDoc {
            header: SamplingHeader {
                q: fam.q(),
                bound: fam.bound(),
            },
            space: fam.space().points().to_vec(),
            dim: d,
            matrices: fam
                .matrices()
                .iter()
                .map(|m| m.chunks(d.max(1)).map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect())
                .collect(),
        }
    }

    pub fn to_family(&self) -> Result<UnitaryFamily<f64>> {
        let space = OrderedSpace::shared(self.space.iter().cloned())?;
        let d = self.dim;
        let mut matrices = Vec::with_capacity(self.matrices.len());
        for m in &self.matrices {
            if m.len() != d || m.iter().any(|row| row.len() != d) {
                return Err(Error::DimensionMismatch(format!("expected {d}x{d} matrices")));
            }
            matrices.push(m.iter().flatten().map(|&[re, im]| Complex::new(re, im)).collect());
        }
        UnitaryFamily::new(space, d, matrices, self.header.q, self.header.bound)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalizationDoc {
    pub dim: usize,
    pub space: Vec<String>,
    /// Basis vectors as `[re, im]` pairs.
    pub basis: Vec<Vec<[f64; 2]>>,
    /// Per basis vector, the phase at every point as a fraction of a turn.
    pub phases: Vec<Vec<f64>>,
    pub worst_residual: f64,
    pub orthonormality_residual: f64,
    pub unitarity_residual: f64,
    pub commutation_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightsDoc>,
}

impl DiagonalizationDoc {
    pub fn new(fam: &UnitaryFamily<f64>, diag: &Diagonalization<f64>, unitarity: f64, commutation: f64, weights: Option<&WeightMultiset>) -> Self {
        DiagonalizationDoc {
            dim: fam.dim(),
            space: fam.space().points().to_vec(),
            basis: diag.basis.iter().map(|v| v.iter().map(|z| [z.re, z.im]).collect()).collect(),
            phases: diag.phases.clone(),
            worst_residual: diag.worst_residual,
            orthonormality_residual: diag.orthonormality_residual,
            unitarity_residual: unitarity,
            commutation_residual: commutation,
            weights: weights.map(WeightsDoc::from_multiset),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::classify;
    use crate::scalar::ratio;
    use proptest::prelude::*;

    #[test]
    fn rationals_round_trip() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), ratio(-4, 1));
        assert_eq!(format_rational(&ratio(2, 1)), "2/1");
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn measure_document_shape() {
        let json = r#"{"space": ["a", "b"], "arity": 2, "atoms": [{"tuple": ["a", "b"], "weight": "1/3"}]}"#;
        let doc: MeasureDoc = serde_json::from_str(json).unwrap();
        let m = doc.to_measure().unwrap();
        assert_eq!(m.weight(&[0, 1]), ratio(1, 3));
        assert_eq!(MeasureDoc::from_measure(&m), doc);

        let bad = r#"{"space": ["a"], "arity": 1, "atoms": [{"tuple": ["a"], "weight": "0/1"}]}"#;
        let doc: MeasureDoc = serde_json::from_str(bad).unwrap();
        assert!(matches!(doc.to_measure(), Err(Error::Parse(_))));
    }

    #[test]
    fn classification_parses_as_presentation() {
        let x = OrderedSpace::shared(["a", "b"]).unwrap();
        let w = WeightMultiset::from_vectors(x, [(vec![1, 0], 2), (vec![1, 1], 1), (vec![0, 0], 1)]).unwrap();
        let r = classify::<BigRational>(&w);
        let json = serde_json::to_string(&ClassificationDoc::from_result(&r)).unwrap();
        assert!(json.contains("\"fixed_dim\":1"));
        let p = parse_presentation(&json).unwrap();
        assert_eq!(p, r.canonical);
    }

    #[test]
    fn operator_document() {
        let json = r#"{"X": ["a", "b"], "Y": ["u"], "terms": [
            {"g": {"u": "1/2"}, "sigma": {"u": "a"}},
            {"g": {"u": "1/2"}, "sigma": {"u": "a"}}]}"#;
        let doc: OperatorDoc = serde_json::from_str(json).unwrap();
        let t = doc.to_operator().unwrap();
        assert_eq!(t.to_homomorphism().unwrap().rows(), &[vec![1, 0]]);
        assert_eq!(OperatorDoc::from_operator(&t), doc);

        let partial = r#"{"X": ["a"], "Y": ["u", "v"], "terms": [{"g": {"u": "1"}, "sigma": {"u": "a"}}]}"#;
        let doc: OperatorDoc = serde_json::from_str(partial).unwrap();
        assert!(matches!(doc.to_operator(), Err(Error::Parse(_))));
    }

    #[test]
    fn dyadic_documents_carry_depth() {
        let s = DyadicSpace::new(1);
        let w = WeightMultiset::from_vectors(s.space().clone(), [(vec![1, 0], 1)]).unwrap();
        let doc = WeightsDoc::from_multiset(&w);
        assert_eq!(doc.depth, Some(1));
        let mut wrong = doc.clone();
        wrong.depth = Some(2);
        assert!(wrong.to_multiset().is_err());
    }

    proptest! {
        #[test]
        fn presentation_documents_round_trip(vectors in prop::collection::vec((prop::collection::vec(-3i64..4, 3), 1usize..4), 0..8)) {
            let x = OrderedSpace::shared(["a", "b", "c"]).unwrap();
            let w = WeightMultiset::from_vectors(x, vectors).unwrap();
            let r = classify::<BigRational>(&w);
            let doc = PresentationDoc::from_presentation(&r.canonical);
            let json = serde_json::to_string(&doc).unwrap();
            let back: PresentationDoc = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back.to_presentation().unwrap(), r.canonical);
            let wdoc = WeightsDoc::from_multiset(&w);
            prop_assert_eq!(wdoc.to_multiset().unwrap(), w);
        }
    }
}
