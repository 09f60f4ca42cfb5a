//! `L(p)`-graded modules over `S(p, λ)`, truncated to finite sets of degrees.
//!
//! A [`WindowedModule`] stores one vector space per degree of its
//! [`DegreeWindow`] and the matrix of each generator `u, v, x_i` between
//! degrees where both ends lie in the window. Modules produced by the
//! functors may leave some actions undefined (a composite leaves the window);
//! every check only looks at actions defined on both sides.

mod construct;
mod functors;
mod ring;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::field::{Field, FieldError, FieldSpec};
use crate::lgroup::{LElement, LGroupError, WeightSequence};
use crate::linalg::{Matrix, SparseEchelon};

pub use construct::{
    cokernel, direct_sum, free_sum, random_basis_change, random_module, simple_lambda_module,
    structure_module, FreeMap, FreeSum, Presentation, RandomModuleConfig,
};
pub use functors::{apply_f, apply_f_lambda, apply_f_rho, in_image_f, ExpansionFunctor, FunctorKind};
pub use ring::{Generator, GradedRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradedError {
    #[error(transparent)]
    LGroup(#[from] LGroupError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("{weights} weights but {points} points")]
    PointCount { weights: usize, points: usize },
    #[error("point {0} is [0:0], not a point of the projective line")]
    ZeroPoint(usize),
    #[error("points not distinct: point {0} and point {1} coincide in P^1")]
    PointsNotDistinct(usize, usize),
    #[error("field mismatch: data is over {expected}, arithmetic over {found}")]
    FieldMismatch { expected: String, found: String },
    #[error("modules live over different weighted lines: {0}")]
    DataMismatch(String),
    #[error("windows differ: {0}")]
    WindowMismatch(String),
    #[error("degree {0} is not in the window")]
    OutsideWindow(String),
    #[error("action of {generator} at {degree}: expected {expected:?}, found {found:?}")]
    Shape { generator: String, degree: String, expected: (usize, usize), found: (usize, usize) },
    #[error("malformed module file: {0}")]
    Format(String),
}

/// The data `(P^1, λ, p)`: weights and the rational points `[λ_{i0}:λ_{i1}]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLineData")]
pub struct WeightedLineData {
    pub weights: WeightSequence,
    pub points: Vec<[i64; 2]>,
    pub field: FieldSpec,
}

#[derive(Deserialize)]
struct RawLineData {
    weights: WeightSequence,
    points: Vec<[i64; 2]>,
    #[serde(default)]
    field: FieldSpec,
}

impl TryFrom<RawLineData> for WeightedLineData {
    type Error = GradedError;
    fn try_from(raw: RawLineData) -> Result<Self, GradedError> {
        let d = Self { weights: raw.weights, points: raw.points, field: raw.field };
        d.validate()?;
        Ok(d)
    }
}

impl WeightedLineData {
    pub fn new(weights: Vec<i64>, points: Vec<[i64; 2]>, field: FieldSpec) -> Result<Self, GradedError> {
        let d = Self { weights: WeightSequence::new(weights)?, points, field };
        d.validate()?;
        Ok(d)
    }

    /// The first `n` of the points `[1:0], [0:1], [1:1], [1:2], ..`.
    pub fn standard(weights: Vec<i64>, field: FieldSpec) -> Result<Self, GradedError> {
        let points = (0..weights.len())
            .map(|i| match i {
                0 => [1, 0],
                1 => [0, 1],
                _ => [1, i as i64 - 1],
            })
            .collect();
        Self::new(weights, points, field)
    }

    pub fn validate(&self) -> Result<(), GradedError> {
        if self.points.len() != self.weights.len() {
            return Err(GradedError::PointCount {
                weights: self.weights.len(),
                points: self.points.len(),
            });
        }
        let red: Vec<_> = self
            .points
            .iter()
            .map(|[a, b]| (self.field.reduce(*a), self.field.reduce(*b)))
            .collect();
        let vanishes = |n: &BigInt| match self.field {
            FieldSpec::Prime(q) => (n % BigInt::from(q)).is_zero(),
            FieldSpec::Rationals => n.is_zero(),
        };
        for (i, (a, b)) in red.iter().enumerate() {
            if a.is_zero() && b.is_zero() {
                return Err(GradedError::ZeroPoint(i + 1));
            }
        }
        for i in 0..red.len() {
            for k in i + 1..red.len() {
                // [a:b] = [c:d] in P^1 iff ad - bc = 0
                if vanishes(&(&red[i].0 * &red[k].1 - &red[i].1 * &red[k].0)) {
                    return Err(GradedError::PointsNotDistinct(i + 1, k + 1));
                }
            }
        }
        Ok(())
    }

    /// `Σ (p_i - 1)`, the number of one-point reductions down to `(1, .., 1)`.
    pub fn reduction_length(&self) -> i64 {
        self.weights.reduction_length()
    }

    pub fn with_weights(&self, weights: WeightSequence) -> Self {
        Self { weights, ..self.clone() }
    }
}

/// A finite set of degrees. Windows built with [`DegreeWindow::bounded`]
/// are all normal forms with `0 <= c <= N`; twisting a module shifts its
/// window, after which no bound is recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeWindow {
    weights: WeightSequence,
    bound: Option<i64>,
    degrees: BTreeSet<LElement>,
}

impl DegreeWindow {
    pub fn bounded(weights: &WeightSequence, n: i64) -> Self {
        let degrees = weights.group().elements_between(0, n).into_iter().collect();
        Self { weights: weights.clone(), bound: Some(n), degrees }
    }

    pub fn from_degrees(weights: &WeightSequence, degrees: BTreeSet<LElement>) -> Result<Self, GradedError> {
        let g = weights.group();
        for d in &degrees {
            g.check(d)?;
        }
        Ok(Self { weights: weights.clone(), bound: None, degrees })
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    pub fn bound(&self) -> Option<i64> {
        self.bound
    }

    pub fn contains(&self, l: &LElement) -> bool {
        self.degrees.contains(l)
    }

    pub fn degrees(&self) -> impl Iterator<Item = &LElement> {
        self.degrees.iter()
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// `{ l : l + x in self }`.
    pub fn shifted_back(&self, x: &LElement) -> Self {
        let g = self.weights.group();
        let degrees = self.degrees.iter().map(|d| g.minus(d, x)).collect();
        let bound = if *x == g.zero() { self.bound } else { None };
        Self { weights: self.weights.clone(), bound, degrees }
    }

    fn intersection(&self, other: &Self) -> BTreeSet<LElement> {
        self.degrees.intersection(&other.degrees).cloned().collect()
    }
}

pub type ActionMap<E> = BTreeMap<Generator, BTreeMap<LElement, Matrix<E>>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowedModule<F: Field> {
    ring: GradedRing<F>,
    window: DegreeWindow,
    dims: BTreeMap<LElement, usize>,
    actions: ActionMap<F::Elem>,
}

impl<F: Field> WindowedModule<F> {
    /// Assembles a module, checking that every degree of `dims` and every
    /// action lies in the window and that action shapes match the dims.
    /// Window degrees missing from `dims` get dimension 0.
    pub fn from_parts(
        ring: GradedRing<F>,
        window: DegreeWindow,
        mut dims: BTreeMap<LElement, usize>,
        actions: ActionMap<F::Elem>,
    ) -> Result<Self, GradedError> {
        if ring.weights() != window.weights() {
            return Err(GradedError::DataMismatch(format!(
                "ring weights {} vs window weights {}",
                ring.weights(),
                window.weights()
            )));
        }
        for d in dims.keys() {
            if !window.contains(d) {
                return Err(GradedError::OutsideWindow(d.to_string()));
            }
        }
        for d in window.degrees() {
            dims.entry(d.clone()).or_insert(0);
        }
        for (g, per) in &actions {
            if let Generator::X(i) = g {
                ring.weights().check_index(*i)?;
            }
            for (l, m) in per {
                let t = ring.shift(l, *g);
                if !window.contains(l) || !window.contains(&t) {
                    return Err(GradedError::OutsideWindow(format!("{g} from {l}")));
                }
                let expected = (dims[&t], dims[l]);
                if m.shape() != expected {
                    return Err(GradedError::Shape {
                        generator: g.to_string(),
                        degree: l.to_string(),
                        expected,
                        found: m.shape(),
                    });
                }
            }
        }
        Ok(Self { ring, window, dims, actions })
    }

    /// The zero module with every action inside the window defined.
    pub fn zero(ring: GradedRing<F>, window: DegreeWindow) -> Self {
        let f = ring.field().clone();
        let mut actions: ActionMap<F::Elem> = BTreeMap::new();
        for g in ring.generators() {
            let per = actions.entry(g).or_default();
            for l in window.degrees() {
                if window.contains(&ring.shift(l, g)) {
                    per.insert(l.clone(), Matrix::zeros(&f, 0, 0));
                }
            }
        }
        let dims = window.degrees().map(|d| (d.clone(), 0)).collect();
        Self { ring, window, dims, actions }
    }

    pub fn ring(&self) -> &GradedRing<F> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        self.ring.field()
    }

    pub fn window(&self) -> &DegreeWindow {
        &self.window
    }

    pub fn dims(&self) -> &BTreeMap<LElement, usize> {
        &self.dims
    }

    /// `dim M_l`; zero outside the window.
    pub fn dim(&self, l: &LElement) -> usize {
        self.dims.get(l).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn actions(&self) -> &ActionMap<F::Elem> {
        &self.actions
    }

    pub fn action(&self, g: Generator, l: &LElement) -> Option<&Matrix<F::Elem>> {
        self.actions.get(&g).and_then(|per| per.get(l))
    }

    pub fn action_count(&self) -> usize {
        self.actions.values().map(|per| per.len()).sum()
    }

    /// No action is defined at all: the window is too small to say anything.
    pub fn is_degenerate(&self) -> bool {
        self.action_count() == 0
    }

    /// Composite of the actions along `path` starting at `l`, if every step
    /// is defined; the empty path gives the identity.
    pub fn path_action(&self, l: &LElement, path: &[Generator]) -> Option<(LElement, Matrix<F::Elem>)> {
        let f = self.field();
        let mut deg = l.clone();
        let mut m = Matrix::identity(f, self.dim(l));
        for &g in path {
            m = self.action(g, &deg)?.mul(f, &m);
            deg = self.ring.shift(&deg, g);
        }
        Some((deg, m))
    }

    /// Every violated commutativity or defining relation, with its degree.
    pub fn validate(&self) -> ValidationReport {
        let f = self.field();
        let mut violations = Vec::new();
        let gens = self.ring.generators();
        for l in self.window.degrees() {
            for (ia, &a) in gens.iter().enumerate() {
                for &b in &gens[ia + 1..] {
                    let ab = self.path_action(l, &[a, b]);
                    let ba = self.path_action(l, &[b, a]);
                    if let (Some((_, ab)), Some((_, ba))) = (ab, ba) {
                        if ab != ba {
                            violations.push(Violation {
                                degree: l.clone(),
                                constraint: format!("{a}{b} = {b}{a}"),
                            });
                        }
                    }
                }
            }
            for i in 1..=self.ring.group().rank() {
                let p = self.ring.weights().as_slice()[i - 1] as usize;
                let path = vec![Generator::X(i); p];
                let (Some((_, lhs)), Some(u), Some(v)) = (
                    self.path_action(l, &path),
                    self.action(Generator::U, l),
                    self.action(Generator::V, l),
                ) else {
                    continue;
                };
                let [l0, l1] = self.ring.points()[i - 1];
                let rhs = v
                    .scale(f, &f.from_i64(l0))
                    .add(f, &u.scale(f, &f.neg(&f.from_i64(l1))));
                if lhs != rhs {
                    violations.push(Violation {
                        degree: l.clone(),
                        constraint: format!("x{i}^{p} = {l0}v - {l1}u"),
                    });
                }
            }
        }
        ValidationReport { violations }
    }

    /// `M(x)`, with `M(x)_l = M_{l+x}` and the same matrices.
    pub fn twist(&self, x: &LElement) -> Self {
        let g = self.ring.group();
        let window = self.window.shifted_back(x);
        let dims = self.dims.iter().map(|(d, &n)| (g.minus(d, x), n)).collect();
        let actions = self
            .actions
            .iter()
            .map(|(gen, per)| (*gen, per.iter().map(|(d, m)| (g.minus(d, x), m.clone())).collect()))
            .collect();
        Self { ring: self.ring.clone(), window, dims, actions }
    }

    /// The submodule data on a subset of the window, keeping only actions
    /// with both ends inside.
    pub fn restrict(&self, degrees: &BTreeSet<LElement>) -> Self {
        let keep: BTreeSet<LElement> = degrees.iter().filter(|d| self.window.contains(d)).cloned().collect();
        let window = DegreeWindow { weights: self.window.weights.clone(), bound: None, degrees: keep };
        let dims = self.dims.iter().filter(|(d, _)| window.contains(d)).map(|(d, n)| (d.clone(), *n)).collect();
        let actions = self
            .actions
            .iter()
            .map(|(g, per)| {
                let per = per
                    .iter()
                    .filter(|(d, _)| window.contains(d) && window.contains(&self.ring.shift(d, *g)))
                    .map(|(d, m)| (d.clone(), m.clone()))
                    .collect();
                (*g, per)
            })
            .collect();
        Self { ring: self.ring.clone(), window, dims, actions }
    }

    fn same_line(&self, other: &Self) -> Result<(), GradedError> {
        if self.ring.line_data() != other.ring.line_data() {
            return Err(GradedError::DataMismatch(format!(
                "{:?} vs {:?}",
                self.ring.line_data(),
                other.ring.line_data()
            )));
        }
        Ok(())
    }

    /// Compares two modules on their common degrees: dimensions there, and
    /// each action defined in both.
    pub fn compare(&self, other: &Self) -> Result<Comparison, GradedError> {
        self.same_line(other)?;
        let common = self.window.intersection(&other.window);
        let mut out = Comparison::default();
        for d in &common {
            out.degrees += 1;
            if self.dim(d) != other.dim(d) {
                out.mismatches.push(format!("dim at {d}: {} vs {}", self.dim(d), other.dim(d)));
            }
        }
        for (g, per) in &self.actions {
            for (d, m) in per {
                if !common.contains(d) {
                    continue;
                }
                let Some(n) = other.action(*g, d) else { continue };
                out.actions += 1;
                if m != n {
                    out.mismatches.push(format!("action of {g} at {d}"));
                }
            }
        }
        Ok(out)
    }

    /// Dimension of the space of degree-preserving module maps `self -> other`.
    pub fn hom_dim(&self, other: &Self) -> Result<usize, GradedError> {
        hom_dim_mod(self, other)
    }

    pub fn to_json(&self) -> Value {
        let f = self.field();
        let dims: Map<String, Value> = self.dims.iter().map(|(d, n)| (d.key(), json!(n))).collect();
        let mut actions = Map::new();
        for (g, per) in &self.actions {
            let per: Map<String, Value> = per
                .iter()
                .map(|(d, m)| {
                    let rows: Vec<Value> = (0..m.rows())
                        .map(|r| Value::Array(m.row(r).iter().map(|e| f.elem_to_json(e)).collect()))
                        .collect();
                    (d.key(), Value::Array(rows))
                })
                .collect();
            actions.insert(g.to_string(), Value::Object(per));
        }
        json!({
            "p": self.ring.weights(),
            "points": self.ring.points(),
            "field": self.ring.field().descriptor(),
            "N": self.window.bound(),
            "dims": dims,
            "actions": actions,
        })
    }

    /// Reads the module file format. The window is the set of degrees listed
    /// under `"dims"`; `"N"` is kept as the recorded bound.
    pub fn from_json(field: F, v: &Value) -> Result<Self, GradedError> {
        let bad = |s: &str| GradedError::Format(s.to_string());
        let p: Vec<i64> = serde_json::from_value(v.get("p").cloned().ok_or_else(|| bad("missing \"p\""))?)
            .map_err(|e| bad(&format!("\"p\": {e}")))?;
        let points: Vec<[i64; 2]> =
            serde_json::from_value(v.get("points").cloned().ok_or_else(|| bad("missing \"points\""))?)
                .map_err(|e| bad(&format!("\"points\": {e}")))?;
        let spec = match v.get("field") {
            Some(Value::String(s)) => FieldSpec::parse(s)?,
            _ => field.descriptor(),
        };
        let data = WeightedLineData::new(p, points, spec)?;
        let ring = GradedRing::new(field.clone(), &data)?;
        let group = ring.group().clone();
        let parse_degree = |key: &str| -> Result<LElement, GradedError> {
            let (coeffs, c) = LElement::parse_key(key).ok_or_else(|| bad(&format!("degree key {key:?}")))?;
            let l = group.normalize(&coeffs, c)?;
            if l.key() != key.replace(' ', "") {
                return Err(bad(&format!("degree key {key:?} is not in normal form")));
            }
            Ok(l)
        };
        let mut dims = BTreeMap::new();
        for (k, n) in v.get("dims").and_then(Value::as_object).ok_or_else(|| bad("missing \"dims\""))? {
            let n = n.as_u64().ok_or_else(|| bad(&format!("dimension at {k}")))?;
            dims.insert(parse_degree(k)?, n as usize);
        }
        let bound = v.get("N").and_then(Value::as_i64);
        let window = DegreeWindow { weights: data.weights.clone(), bound, degrees: dims.keys().cloned().collect() };
        let mut actions: ActionMap<F::Elem> = BTreeMap::new();
        if let Some(obj) = v.get("actions") {
            for (gname, per) in obj.as_object().ok_or_else(|| bad("\"actions\" is not an object"))? {
                let g = Generator::try_from(gname.clone()).map_err(|e| bad(&e))?;
                let slot = actions.entry(g).or_default();
                for (k, rows) in per.as_object().ok_or_else(|| bad("action table is not an object"))? {
                    let l = parse_degree(k)?;
                    let cols = *dims.get(&l).ok_or_else(|| GradedError::OutsideWindow(k.clone()))?;
                    let rows = rows.as_array().ok_or_else(|| bad("matrix is not an array"))?;
                    let mut data = Vec::new();
                    for row in rows {
                        let row = row.as_array().ok_or_else(|| bad("matrix row is not an array"))?;
                        if row.len() != cols {
                            return Err(bad(&format!("row length {} at {g} {k}, expected {cols}", row.len())));
                        }
                        for e in row {
                            data.push(field.elem_from_json(e)?);
                        }
                    }
                    slot.insert(l, Matrix::from_rows(rows.len(), cols, data));
                }
            }
        }
        Self::from_parts(ring, window, dims, actions)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub degree: LElement,
    pub constraint: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at degree {}: {} fails", self.degree, self.constraint)
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
}

/// Outcome of [`WindowedModule::compare`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Comparison {
    pub degrees: usize,
    pub actions: usize,
    pub mismatches: Vec<String>,
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Dimension of the space of families `f_l: A_l -> B_l` with
/// `f_{l+g} A_g = B_g f_l` for every action defined in both modules.
pub fn hom_dim_mod<F: Field>(a: &WindowedModule<F>, b: &WindowedModule<F>) -> Result<usize, GradedError> {
    a.same_line(b)?;
    if a.window.degrees != b.window.degrees {
        return Err(GradedError::WindowMismatch(format!(
            "{} degrees vs {} degrees",
            a.window.len(),
            b.window.len()
        )));
    }
    let f = a.field();
    let mut offset = BTreeMap::new();
    let mut n = 0;
    for d in a.window.degrees() {
        offset.insert(d.clone(), n);
        n += a.dim(d) * b.dim(d);
    }
    let var = |d: &LElement, r: usize, c: usize| offset[d] + r * a.dim(d) + c;
    let mut sys = SparseEchelon::new(f.clone(), n);
    for (g, per) in &a.actions {
        for (l, am) in per {
            let Some(bm) = b.action(*g, l) else { continue };
            let t = a.ring.shift(l, *g);
            for r in 0..b.dim(&t) {
                for c in 0..a.dim(l) {
                    let mut row = Vec::new();
                    for k in 0..a.dim(&t) {
                        if !f.is_zero(&am[(k, c)]) {
                            row.push((var(&t, r, k), am[(k, c)].clone()));
                        }
                    }
                    for k in 0..b.dim(l) {
                        if !f.is_zero(&bm[(r, k)]) {
                            row.push((var(l, k, c), f.neg(&bm[(r, k)])));
                        }
                    }
                    sys.insert(row);
                }
            }
        }
    }
    Ok(sys.nullity())
}

/// A degree-preserving map between windowed modules, one matrix per degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap<E> {
    pub maps: BTreeMap<LElement, Matrix<E>>,
}

impl<E: Clone> GradedMap<E> {
    pub fn get(&self, l: &LElement) -> Option<&Matrix<E>> {
        self.maps.get(l)
    }
}

/// Checks that `f` commutes with every action defined in both modules.
pub fn is_homomorphism<F: Field>(
    f: &GradedMap<F::Elem>,
    a: &WindowedModule<F>,
    b: &WindowedModule<F>,
) -> bool {
    let k = a.field();
    for (g, per) in &a.actions {
        for (l, am) in per {
            let Some(bm) = b.action(*g, l) else { continue };
            let t = a.ring.shift(l, *g);
            let (Some(fl), Some(ft)) = (f.get(l), f.get(&t)) else { continue };
            if ft.mul(k, am) != bm.mul(k, fl) {
                return false;
            }
        }
    }
    true
}

/// Degree-wise exactness of `0 -> A -f-> B -g-> C -> 0` on the degrees where
/// both maps are given; returns the degrees that fail.
pub fn short_exact_failures<F: Field>(
    f: &GradedMap<F::Elem>,
    g: &GradedMap<F::Elem>,
    a: &WindowedModule<F>,
    b: &WindowedModule<F>,
    c: &WindowedModule<F>,
) -> Vec<LElement> {
    let k = a.field();
    let mut bad = Vec::new();
    for (l, fl) in &f.maps {
        let Some(gl) = g.get(l) else { continue };
        let ok = fl.shape() == (b.dim(l), a.dim(l))
            && gl.shape() == (c.dim(l), b.dim(l))
            && fl.rank(k) == a.dim(l)
            && gl.rank(k) == c.dim(l)
            && a.dim(l) + c.dim(l) == b.dim(l)
            && gl.mul(k, fl).is_zero(k);
        if !ok {
            bad.push(l.clone());
        }
    }
    bad
}

#[cfg(test)]
mod tests;
