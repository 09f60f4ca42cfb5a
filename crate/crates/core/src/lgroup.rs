//! The rank-one grading group `L(p) = <x_1, .., x_n, c | p_1 x_1 = .. = p_n x_n = c>`.
//!
//! Elements are kept in normal form `sum l_i x_i + l c` with `0 <= l_i < p_i`;
//! all overflow of a coefficient is carried into `l`. Exceptional points are
//! numbered from 1, so `x_j` means the generator of the `j`-th point.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LGroupError {
    #[error("expected {expected} coefficients, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("weights must be positive, found {0}")]
    NonPositiveWeight(i64),
    #[error("element {element} is not in normal form for weights {weights}")]
    NotNormal { element: String, weights: String },
    #[error("point index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("cannot reduce the weight at point {j}: it is already 1")]
    InvalidReductionIndex { j: usize },
    #[error("weights {upper} are not weights {lower} with p_{j} raised by one")]
    NotAReduction { lower: String, upper: String, j: usize },
    #[error("{0} is not in the image of phi")]
    NotInImage(String),
}

/// A weight sequence `(p_1, .., p_n)`, every `p_i >= 1`. The empty sequence
/// gives `L = Z c`, the grading of the plain projective line.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct WeightSequence(Vec<i64>);

impl WeightSequence {
    pub fn new(weights: Vec<i64>) -> Result<Self, LGroupError> {
        if let Some(&bad) = weights.iter().find(|&&p| p < 1) {
            return Err(LGroupError::NonPositiveWeight(bad));
        }
        Ok(Self(weights))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    /// `p_j`, one-based.
    pub fn weight(&self, j: usize) -> Result<i64, LGroupError> {
        self.check_index(j)?;
        Ok(self.0[j - 1])
    }

    pub fn check_index(&self, j: usize) -> Result<(), LGroupError> {
        if j == 0 || j > self.0.len() {
            return Err(LGroupError::IndexOutOfRange(j, self.0.len()));
        }
        Ok(())
    }

    /// `p'` with `p'_i = p_i - delta_ij`.
    pub fn reduced_at(&self, j: usize) -> Result<Self, LGroupError> {
        let pj = self.weight(j)?;
        if pj < 2 {
            return Err(LGroupError::InvalidReductionIndex { j });
        }
        let mut w = self.0.clone();
        w[j - 1] -= 1;
        Ok(Self(w))
    }

    /// `p` with `p_j` raised by one.
    pub fn raised_at(&self, j: usize) -> Result<Self, LGroupError> {
        self.check_index(j)?;
        let mut w = self.0.clone();
        w[j - 1] += 1;
        Ok(Self(w))
    }

    /// Number of weight-reduction steps down to `(1, .., 1)`.
    pub fn reduction_length(&self) -> i64 {
        self.0.iter().map(|p| p - 1).sum()
    }

    pub fn group(&self) -> GradingGroup {
        GradingGroup { weights: self.clone() }
    }
}

impl TryFrom<Vec<i64>> for WeightSequence {
    type Error = LGroupError;
    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<WeightSequence> for Vec<i64> {
    fn from(w: WeightSequence) -> Vec<i64> {
        w.0
    }
}

impl fmt::Display for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// An element of `L(p)` in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LElement {
    #[serde(rename = "l")]
    coeffs: Vec<i64>,
    c: i64,
}

/// Lexicographic on `(c, coeffs)`; only used for deterministic iteration.
impl Ord for LElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.c, &self.coeffs).cmp(&(other.c, &other.coeffs))
    }
}

impl PartialOrd for LElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl LElement {
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// The coefficient `l_j`, one-based.
    pub fn coeff(&self, j: usize) -> i64 {
        self.coeffs[j - 1]
    }

    /// The coefficient of `c`.
    pub fn c_coeff(&self) -> i64 {
        self.c
    }

    /// Compact key `"l1,l2,..,ln|c"` used by the module file format.
    pub fn key(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|l| l.to_string()).collect();
        format!("{}|{}", parts.join(","), self.c)
    }

    /// Raw parse of a degree key; the caller normalizes.
    pub fn parse_key(key: &str) -> Option<(Vec<i64>, i64)> {
        let (ls, c) = key.split_once('|')?;
        let c = c.trim().parse().ok()?;
        let coeffs = if ls.trim().is_empty() {
            Vec::new()
        } else {
            ls.split(',').map(|t| t.trim().parse().ok()).collect::<Option<Vec<i64>>>()?
        };
        Some((coeffs, c))
    }
}

impl fmt::Display for LElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, l) in self.coeffs.iter().enumerate() {
            match l {
                0 => {}
                1 => terms.push(format!("x{}", i + 1)),
                l => terms.push(format!("{l}x{}", i + 1)),
            }
        }
        let c = match self.c {
            0 => None,
            1 => Some("c".to_string()),
            -1 => Some("-c".to_string()),
            l => Some(format!("{l}c")),
        };
        match (terms.is_empty(), c) {
            (true, None) => write!(f, "0"),
            (_, None) => write!(f, "{}", terms.join("+")),
            (true, Some(c)) => write!(f, "{c}"),
            (false, Some(c)) if c.starts_with('-') => write!(f, "{}{c}", terms.join("+")),
            (false, Some(c)) => write!(f, "{}+{c}", terms.join("+")),
        }
    }
}

/// `L(p)` for a fixed weight sequence; all arithmetic goes through here.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradingGroup {
    weights: WeightSequence,
}

impl GradingGroup {
    pub fn new(weights: WeightSequence) -> Self {
        Self { weights }
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn zero(&self) -> LElement {
        LElement { c: 0, coeffs: vec![0; self.rank()] }
    }

    /// `x_j`, one-based.
    pub fn x(&self, j: usize) -> LElement {
        let mut raw = vec![0; self.rank()];
        raw[j - 1] = 1;
        self.normalize(&raw, 0).expect("length matches")
    }

    /// `k c`.
    pub fn c(&self, k: i64) -> LElement {
        LElement { c: k, coeffs: vec![0; self.rank()] }
    }

    /// Brings `sum raw_i x_i + raw_c c` into normal form.
    pub fn normalize(&self, raw: &[i64], raw_c: i64) -> Result<LElement, LGroupError> {
        if raw.len() != self.rank() {
            return Err(LGroupError::LengthMismatch { expected: self.rank(), got: raw.len() });
        }
        let mut c = raw_c;
        let coeffs = raw
            .iter()
            .zip(self.weights.as_slice())
            .map(|(&l, &p)| {
                c += l.div_euclid(p);
                l.rem_euclid(p)
            })
            .collect();
        Ok(LElement { c, coeffs })
    }

    pub fn is_normal(&self, a: &LElement) -> bool {
        a.coeffs.len() == self.rank()
            && a.coeffs.iter().zip(self.weights.as_slice()).all(|(&l, &p)| 0 <= l && l < p)
    }

    pub fn check(&self, a: &LElement) -> Result<(), LGroupError> {
        if a.coeffs.len() != self.rank() {
            return Err(LGroupError::LengthMismatch { expected: self.rank(), got: a.coeffs.len() });
        }
        if !self.is_normal(a) {
            return Err(LGroupError::NotNormal {
                element: a.key(),
                weights: self.weights.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &LElement, b: &LElement) -> Result<LElement, LGroupError> {
        self.check(a)?;
        self.check(b)?;
        let raw: Vec<i64> = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        self.normalize(&raw, a.c + b.c)
    }

    pub fn negate(&self, a: &LElement) -> Result<LElement, LGroupError> {
        self.check(a)?;
        let raw: Vec<i64> = a.coeffs.iter().map(|x| -x).collect();
        self.normalize(&raw, -a.c)
    }

    pub fn sub(&self, a: &LElement, b: &LElement) -> Result<LElement, LGroupError> {
        self.add(a, &self.negate(b)?)
    }

    /// Panicking `add` for internal use on elements already known to belong
    /// to this group.
    pub(crate) fn plus(&self, a: &LElement, b: &LElement) -> LElement {
        self.add(a, b).expect("elements of this grading group")
    }

    pub(crate) fn minus(&self, a: &LElement, b: &LElement) -> LElement {
        self.sub(a, b).expect("elements of this grading group")
    }

    /// Every normal-form element with `c_min <= c <= c_max`, in `Ord` order.
    pub fn elements_between(&self, c_min: i64, c_max: i64) -> Vec<LElement> {
        let mut coeff_tuples: Vec<Vec<i64>> = vec![Vec::new()];
        for &p in self.weights.as_slice() {
            coeff_tuples = coeff_tuples
                .into_iter()
                .flat_map(|t| {
                    (0..p).map(move |l| {
                        let mut t = t.clone();
                        t.push(l);
                        t
                    })
                })
                .collect();
        }
        let mut out = Vec::new();
        for c in c_min..=c_max {
            for t in &coeff_tuples {
                out.push(LElement { c, coeffs: t.clone() });
            }
        }
        out
    }
}

/// The injection `L(p') -> L(p)` for `p'_i = p_i - delta_ij`, copying
/// normal-form coefficients. It is not a group homomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phi {
    source: GradingGroup,
    target: GradingGroup,
    j: usize,
}

impl Phi {
    /// `target` are the weights `p`; the source weights are `p` with `p_j`
    /// lowered by one.
    pub fn new(target: &WeightSequence, j: usize) -> Result<Self, LGroupError> {
        let source = target.reduced_at(j)?;
        Ok(Self { source: source.group(), target: target.group(), j })
    }

    /// Builds the map from explicit source and target weights, checking that
    /// they differ by one at `j`.
    pub fn between(
        source: &WeightSequence,
        target: &WeightSequence,
        j: usize,
    ) -> Result<Self, LGroupError> {
        let phi = Self::new(target, j)?;
        if phi.source.weights() != source {
            return Err(LGroupError::NotAReduction {
                lower: source.to_string(),
                upper: target.to_string(),
                j,
            });
        }
        Ok(phi)
    }

    pub fn source(&self) -> &GradingGroup {
        &self.source
    }

    pub fn target(&self) -> &GradingGroup {
        &self.target
    }

    pub fn index(&self) -> usize {
        self.j
    }

    pub fn apply(&self, l: &LElement) -> Result<LElement, LGroupError> {
        self.source.check(l)?;
        Ok(l.clone())
    }

    /// `m` lies in the image iff `m_j != p_j - 1`.
    pub fn in_image(&self, m: &LElement) -> bool {
        self.target.is_normal(m)
            && m.coeff(self.j) != self.target.weights().as_slice()[self.j - 1] - 1
    }

    pub fn preimage(&self, m: &LElement) -> Result<LElement, LGroupError> {
        self.target.check(m)?;
        if !self.in_image(m) {
            return Err(LGroupError::NotInImage(m.to_string()));
        }
        Ok(m.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(v: &[i64]) -> WeightSequence {
        WeightSequence::new(v.to_vec()).unwrap()
    }

    fn el(g: &GradingGroup, l: &[i64], c: i64) -> LElement {
        g.normalize(l, c).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let g = w(&[2, 3]).group();
        let a = g.normalize(&[0, 3], 0).unwrap();
        assert_eq!((a.coeffs(), a.c_coeff()), (&[0, 0][..], 1));
        let b = g.normalize(&[0, 0], 5).unwrap();
        assert_eq!((b.coeffs(), b.c_coeff()), (&[0, 0][..], 5));
        let m = g.normalize(&[-1, 0], 0).unwrap();
        assert_eq!((m.coeffs(), m.c_coeff()), (&[1, 0][..], -1));
        // -x1 + x1 = 0
        assert_eq!(g.add(&m, &g.x(1)).unwrap(), g.zero());
    }

    #[test]
    fn normalize_rejects_wrong_length() {
        let g = w(&[2, 3]).group();
        assert_eq!(
            g.normalize(&[1], 0),
            Err(LGroupError::LengthMismatch { expected: 2, got: 1 })
        );
        let other = w(&[2, 3, 5]).group();
        assert!(g.add(&g.zero(), &other.zero()).is_err());
    }

    #[test]
    fn add_examples() {
        let g = w(&[2, 3]).group();
        assert_eq!(g.add(&g.x(1), &g.x(1)).unwrap(), g.c(1));
        let x2 = g.x(2);
        assert_eq!(g.add(&g.add(&x2, &x2).unwrap(), &x2).unwrap(), g.c(1));
        // brute force: (1,2,0)+(1,2,0) = 2x1 + 4x2 = c + (x2 + c) = x2 + 2c
        let a = el(&g, &[1, 2], 0);
        let s = g.add(&a, &a).unwrap();
        assert_eq!((s.coeffs(), s.c_coeff()), (&[0, 1][..], 2));
    }

    #[test]
    fn empty_weights_is_z() {
        let g = w(&[]).group();
        assert_eq!(g.add(&g.c(2), &g.c(-5)).unwrap(), g.c(-3));
        assert_eq!(g.elements_between(0, 3).len(), 4);
    }

    #[test]
    fn phi_examples() {
        let phi = Phi::new(&w(&[2, 3]), 2).unwrap();
        let src = phi.source().clone();
        assert_eq!(src.weights(), &w(&[2, 2]));
        let l = el(&src, &[1, 1], 1);
        let image = phi.apply(&l).unwrap();
        assert_eq!((image.coeffs(), image.c_coeff()), (&[1, 1][..], 1));
        assert!(!phi.in_image(&el(phi.target(), &[0, 2], 0)));
        assert_eq!(phi.apply(&src.zero()).unwrap(), phi.target().zero());
        assert!(phi.preimage(&el(phi.target(), &[0, 2], 0)).is_err());
    }

    #[test]
    fn phi_needs_weight_two() {
        assert_eq!(
            Phi::new(&w(&[1, 3]), 1),
            Err(LGroupError::InvalidReductionIndex { j: 1 })
        );
        assert!(Phi::between(&w(&[2, 3]), &w(&[2, 3]), 2).is_err());
    }

    #[test]
    fn phi_is_not_additive() {
        let phi = Phi::new(&w(&[2, 3]), 2).unwrap();
        let (src, tgt) = (phi.source(), phi.target());
        let elems = src.elements_between(-1, 1);
        let witness = elems.iter().flat_map(|a| elems.iter().map(move |b| (a, b))).find(|(a, b)| {
            let lhs = phi.apply(&src.add(a, b).unwrap()).unwrap();
            let rhs = tgt.add(&phi.apply(a).unwrap(), &phi.apply(b).unwrap()).unwrap();
            lhs != rhs
        });
        let (a, b) = witness.expect("phi should fail to be additive");
        // the simplest witness: x2 + x2 = c in L(2,2), but 2 x2 in L(2,3)
        assert!(a.c_coeff() >= -1 && b.c_coeff() <= 1);
        let x2 = src.x(2);
        assert_eq!(phi.apply(&src.add(&x2, &x2).unwrap()).unwrap(), tgt.c(1));
        assert_eq!(tgt.add(&tgt.x(2), &tgt.x(2)).unwrap(), el(tgt, &[0, 2], 0));
    }

    fn weights_and_raw() -> impl Strategy<Value = (Vec<i64>, Vec<i64>, i64)> {
        prop::collection::vec(1i64..6, 0..4).prop_flat_map(|p| {
            let n = p.len();
            (Just(p), prop::collection::vec(-20i64..20, n), -10i64..10)
        })
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent_and_constant_on_cosets(
            (p, raw, c) in weights_and_raw(),
            k in -3i64..3,
            i in 0usize..4,
        ) {
            let g = w(&p).group();
            let n = g.normalize(&raw, c).unwrap();
            prop_assert!(g.is_normal(&n));
            prop_assert_eq!(g.normalize(n.coeffs(), n.c_coeff()).unwrap(), n.clone());
            if !p.is_empty() {
                let i = i % p.len();
                let mut shifted = raw.clone();
                shifted[i] += k * p[i];
                prop_assert_eq!(g.normalize(&shifted, c - k).unwrap(), n);
            }
        }

        #[test]
        fn group_laws((p, a, ac) in weights_and_raw(), seed in any::<u64>()) {
            let g = w(&p).group();
            let a = g.normalize(&a, ac).unwrap();
            let b: Vec<i64> = p.iter().enumerate().map(|(i, _)| ((seed >> (i * 8)) % 13) as i64 - 6).collect();
            let b = g.normalize(&b, (seed % 7) as i64 - 3).unwrap();
            let d = g.normalize(&b.coeffs().iter().map(|x| x * 2).collect::<Vec<_>>(), 1).unwrap();
            prop_assert_eq!(g.add(&a, &b).unwrap(), g.add(&b, &a).unwrap());
            prop_assert_eq!(
                g.add(&g.add(&a, &b).unwrap(), &d).unwrap(),
                g.add(&a, &g.add(&b, &d).unwrap()).unwrap()
            );
            prop_assert_eq!(g.add(&a, &g.negate(&a).unwrap()).unwrap(), g.zero());
        }

        #[test]
        fn phi_is_injective_and_inverted_on_its_image(
            p in prop::collection::vec(1i64..5, 1..4),
            j in 0usize..4,
        ) {
            let mut p = p;
            let j = j % p.len() + 1;
            p[j - 1] += 1;
            let phi = Phi::new(&w(&p), j).unwrap();
            let sample = phi.source().elements_between(-1, 2);
            let images: std::collections::BTreeSet<_> =
                sample.iter().map(|l| phi.apply(l).unwrap()).collect();
            prop_assert_eq!(images.len(), sample.len());
            for m in phi.target().elements_between(-1, 2) {
                if phi.in_image(&m) {
                    prop_assert_eq!(phi.apply(&phi.preimage(&m).unwrap()).unwrap(), m);
                } else {
                    prop_assert_eq!(m.coeff(j), p[j - 1] - 1);
                }
            }
        }
    }

    #[test]
    fn display() {
        let g = w(&[2, 3]).group();
        assert_eq!(el(&g, &[1, 2], -1).to_string(), "x1+2x2-c");
        assert_eq!(el(&g, &[0, 0], -2).to_string(), "-2c");
        assert_eq!(el(&g, &[0, 1], 1).to_string(), "x2+c");
        assert_eq!(g.zero().to_string(), "0");
    }

    #[test]
    fn json_shape() {
        let g = w(&[2, 3]).group();
        let a = el(&g, &[1, 2], -1);
        let v = serde_json::to_value(&a).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"{"l":[1,2],"c":-1}"#);
        let back: LElement = serde_json::from_value(v).unwrap();
        assert_eq!(back, a);
        assert_eq!(serde_json::to_string(&w(&[2, 3])).unwrap(), "[2,3]");
        assert!(serde_json::from_str::<WeightSequence>("[2,0]").is_err());
        assert_eq!(a.key(), "1,2|-1");
        assert_eq!(LElement::parse_key("1,2|-1"), Some((vec![1, 2], -1)));
        assert_eq!(LElement::parse_key("|4"), Some((vec![], 4)));
    }
}
