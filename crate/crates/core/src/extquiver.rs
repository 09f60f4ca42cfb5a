//! Valued Ext-quivers and the arrow/vertex rewrites attached to an expansion.
//!
//! Vertices are simple objects with the degree of their endomorphism
//! division ring over the base field. An arrow `S -> T` with valuation
//! `(s, t)` records `Ext¹(S, T)` as an `s`-dimensional space over `End(S)`
//! and a `t`-dimensional space over `End(T)^op`; hence
//! `s * deg(S) = t * deg(T)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expansion::ExpansionContext;
use crate::tubecat::{ext1_dim, PointDescriptor, TubeObject};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("vertex {0} already exists")]
    DuplicateVertex(String),
    #[error("vertex {0} has division ring degree 0")]
    ZeroDegree(String),
    #[error("valuation ({s},{t}) on {from} -> {to} violates s*deg({from}) = t*deg({to})")]
    InconsistentValuation { from: String, to: String, s: usize, t: usize },
    #[error("rewrite refused: {0}")]
    Precondition(String),
}

/// `(s, t)`; `(0, 0)` means no arrow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Valuation {
    pub s: usize,
    pub t: usize,
}

impl Valuation {
    pub const NONE: Valuation = Valuation { s: 0, t: 0 };
    pub const ONE: Valuation = Valuation { s: 1, t: 1 };

    pub fn new(s: usize, t: usize) -> Self {
        Self { s, t }
    }

    pub fn is_none(&self) -> bool {
        *self == Self::NONE
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValuedQuiver {
    vertices: BTreeMap<String, usize>,
    arrows: BTreeMap<(String, String), Valuation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct VertexRecord {
    label: String,
    deg: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct ArrowRecord {
    from: String,
    to: String,
    s: usize,
    t: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct QuiverRecord {
    vertices: Vec<VertexRecord>,
    arrows: Vec<ArrowRecord>,
}

impl ValuedQuiver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, label: impl Into<String>, degree: usize) -> Result<(), QuiverError> {
        let label = label.into();
        if degree == 0 {
            return Err(QuiverError::ZeroDegree(label));
        }
        if self.vertices.contains_key(&label) {
            return Err(QuiverError::DuplicateVertex(label));
        }
        self.vertices.insert(label, degree);
        Ok(())
    }

    /// Sets `δ_{from,to}`; `(0, 0)` removes the arrow.
    pub fn set_arrow(&mut self, from: &str, to: &str, val: Valuation) -> Result<(), QuiverError> {
        let ds = self.degree(from)?;
        let dt = self.degree(to)?;
        let key = (from.to_string(), to.to_string());
        if val.is_none() {
            self.arrows.remove(&key);
            return Ok(());
        }
        if val.s * ds != val.t * dt || val.s == 0 || val.t == 0 {
            return Err(QuiverError::InconsistentValuation {
                from: from.into(),
                to: to.into(),
                s: val.s,
                t: val.t,
            });
        }
        self.arrows.insert(key, val);
        Ok(())
    }

    pub fn degree(&self, label: &str) -> Result<usize, QuiverError> {
        self.vertices.get(label).copied().ok_or_else(|| QuiverError::UnknownVertex(label.into()))
    }

    pub fn has_vertex(&self, label: &str) -> bool {
        self.vertices.contains_key(label)
    }

    /// `δ_{from,to}`, `(0, 0)` when absent.
    pub fn valuation(&self, from: &str, to: &str) -> Valuation {
        self.arrows.get(&(from.to_string(), to.to_string())).copied().unwrap_or(Valuation::NONE)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (&str, usize)> {
        self.vertices.iter().map(|(l, &d)| (l.as_str(), d))
    }

    pub fn arrows(&self) -> impl Iterator<Item = (&str, &str, Valuation)> {
        self.arrows.iter().map(|((a, b), &v)| (a.as_str(), b.as_str(), v))
    }

    /// Disjoint union; labels must not clash.
    pub fn union(&self, other: &Self) -> Result<Self, QuiverError> {
        let mut out = self.clone();
        for (l, d) in other.vertices() {
            out.add_vertex(l, d)?;
        }
        for (a, b, v) in other.arrows() {
            out.set_arrow(a, b, v)?;
        }
        Ok(out)
    }

    /// Renames vertices; the map must be injective on the vertex set.
    pub fn relabel(&self, rename: impl Fn(&str) -> String) -> Result<Self, QuiverError> {
        let mut out = Self::new();
        for (l, d) in self.vertices() {
            out.add_vertex(rename(l), d)?;
        }
        for (a, b, v) in self.arrows() {
            out.set_arrow(&rename(a), &rename(b), v)?;
        }
        Ok(out)
    }

    /// DOT text with vertices and arrows in sorted label order.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph ext_quiver {\n");
        for (l, d) in self.vertices() {
            let _ = writeln!(out, "  \"{l}\" [deg={d}];");
        }
        for (a, b, v) in self.arrows() {
            let _ = writeln!(out, "  \"{a}\" -> \"{b}\" [label=\"({},{})\"];", v.s, v.t);
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let record = QuiverRecord {
            vertices: self
                .vertices()
                .map(|(l, d)| VertexRecord { label: l.to_string(), deg: d })
                .collect(),
            arrows: self
                .arrows()
                .map(|(a, b, v)| ArrowRecord { from: a.into(), to: b.into(), s: v.s, t: v.t })
                .collect(),
        };
        serde_json::to_value(record).expect("quiver records serialize")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, String> {
        let record: QuiverRecord = serde_json::from_value(value.clone()).map_err(|e| e.to_string())?;
        let mut q = Self::new();
        for v in record.vertices {
            q.add_vertex(v.label, v.deg).map_err(|e| e.to_string())?;
        }
        for a in record.arrows {
            q.set_arrow(&a.from, &a.to, Valuation::new(a.s, a.t)).map_err(|e| e.to_string())?;
        }
        Ok(q)
    }
}

/// The Ext-quiver of the simples at the given points, read off from
/// `Ext¹` dimensions between simples.
pub fn quiver_of(points: &[PointDescriptor]) -> ValuedQuiver {
    let mut q = ValuedQuiver::new();
    for point in points {
        let deg = point.residue_degree();
        let p = point.rank();
        for j in 1..=p {
            q.add_vertex(point.simple_label(j), deg).expect("points carry distinct labels");
        }
        for j in 1..=p {
            let sj = TubeObject::simple(point, j).expect("simple exists");
            for k in 1..=p {
                let sk = TubeObject::simple(point, k).expect("simple exists");
                let e = ext1_dim(&sj, &sk).expect("same point");
                if e > 0 {
                    let val = Valuation::new(e / deg, e / deg);
                    q.set_arrow(&point.simple_label(j), &point.simple_label(k), val)
                        .expect("tube valuations are consistent");
                }
            }
        }
    }
    q
}

/// Collapses the arrow `S_λ -> S_ρ` to the vertex `bar`.
///
/// Refused unless `δ_{λ,ρ} = (1,1)`, neither end carries a loop, the only
/// arrow out of `S_λ` goes to `S_ρ`, and the only arrow into `S_ρ` comes
/// from `S_λ`.
pub fn rewrite_contract(
    q: &ValuedQuiver,
    lambda: &str,
    rho: &str,
    bar: &str,
) -> Result<ValuedQuiver, QuiverError> {
    let deg = q.degree(lambda)?;
    q.degree(rho)?;
    let refuse = |msg: String| Err(QuiverError::Precondition(msg));
    if lambda == rho {
        return refuse(format!("S_lambda and S_rho coincide ({lambda})"));
    }
    if q.valuation(lambda, rho) != Valuation::ONE {
        let v = q.valuation(lambda, rho);
        return refuse(format!("valuation of {lambda} -> {rho} is ({},{}), not (1,1)", v.s, v.t));
    }
    for v in [lambda, rho] {
        if !q.valuation(v, v).is_none() {
            return refuse(format!("loop at {v} (Ext¹(S,S) must vanish)"));
        }
    }
    for (a, b, _) in q.arrows() {
        if a == lambda && b != rho {
            return refuse(format!("arrow {a} -> {b} leaves {lambda} but does not end at {rho}"));
        }
        if b == rho && a != lambda {
            return refuse(format!("arrow {a} -> {b} enters {rho} but does not start at {lambda}"));
        }
    }
    if bar != lambda && bar != rho && q.has_vertex(bar) {
        return Err(QuiverError::DuplicateVertex(bar.into()));
    }

    let mut out = ValuedQuiver::new();
    for (l, d) in q.vertices() {
        if l != lambda && l != rho {
            out.add_vertex(l, d)?;
        }
    }
    out.add_vertex(bar, deg)?;
    for (a, b, v) in q.arrows() {
        let (from, to) = match (a == lambda || a == rho, b == lambda || b == rho) {
            (false, false) => (a, b),
            (false, true) => (a, bar),
            (true, false) => (bar, b),
            // S_λ -> S_ρ disappears; S_ρ -> S_λ becomes the loop at S̄
            (true, true) if a == rho && b == lambda => (bar, bar),
            (true, true) => continue,
        };
        out.set_arrow(from, to, v)?;
    }
    Ok(out)
}

/// Splits the vertex `bar` into an arrow `S_λ -> S_ρ` with valuation (1,1).
pub fn rewrite_expand(
    q: &ValuedQuiver,
    bar: &str,
    lambda: &str,
    rho: &str,
) -> Result<ValuedQuiver, QuiverError> {
    let deg = q.degree(bar)?;
    if deg != 1 {
        return Err(QuiverError::Precondition(format!(
            "{bar} has division ring of degree {deg}; expansions need End(S̄) = k"
        )));
    }
    if lambda == rho {
        return Err(QuiverError::Precondition("S_lambda and S_rho need distinct labels".into()));
    }
    for l in [lambda, rho] {
        if l != bar && q.has_vertex(l) {
            return Err(QuiverError::DuplicateVertex(l.into()));
        }
    }
    let mut out = ValuedQuiver::new();
    for (l, d) in q.vertices() {
        if l != bar {
            out.add_vertex(l, d)?;
        }
    }
    out.add_vertex(lambda, deg)?;
    out.add_vertex(rho, deg)?;
    for (a, b, v) in q.arrows() {
        let (from, to) = match (a == bar, b == bar) {
            (false, false) => (a, b),
            (false, true) => (a, lambda),
            (true, false) => (rho, b),
            (true, true) => (rho, lambda),
        };
        out.set_arrow(from, to, v)?;
    }
    out.set_arrow(lambda, rho, Valuation::ONE)?;
    Ok(out)
}

const BAR_PLACEHOLDER: &str = "S̄";

/// Contracts the tube quiver at `ctx`'s point and renames the survivors by
/// `S_m -> S'_{m-1}` (so `S̄` becomes `S'_{p-1}`).
pub fn contract_at(q: &ValuedQuiver, ctx: &ExpansionContext) -> Result<ValuedQuiver, QuiverError> {
    let big = ctx.big_point();
    let small = ctx.small_point();
    let p = ctx.big_rank();
    let lambda = big.simple_label(ctx.s_lambda());
    let rho = big.simple_label(ctx.s_rho());
    let contracted = rewrite_contract(q, &lambda, &rho, BAR_PLACEHOLDER)?;
    let renames: BTreeMap<String, String> = (2..p)
        .map(|m| (big.simple_label(m), small.simple_label(m - 1)))
        .chain(std::iter::once((BAR_PLACEHOLDER.to_string(), small.simple_label(ctx.s_bar()))))
        .collect();
    contracted.relabel(|l| renames.get(l).cloned().unwrap_or_else(|| l.to_string()))
}

/// Inverse of [`contract_at`]: renames `S'_m -> S_{m+1}` and splits `S̄`.
pub fn expand_at(q: &ValuedQuiver, ctx: &ExpansionContext) -> Result<ValuedQuiver, QuiverError> {
    let big = ctx.big_point();
    let small = ctx.small_point();
    let p = ctx.big_rank();
    let bar = small.simple_label(ctx.s_bar());
    let renames: BTreeMap<String, String> = (1..p - 1)
        .map(|m| (small.simple_label(m), big.simple_label(m + 1)))
        .chain(std::iter::once((bar, BAR_PLACEHOLDER.to_string())))
        .collect();
    let renamed = q.relabel(|l| renames.get(l).cloned().unwrap_or_else(|| l.to_string()))?;
    rewrite_expand(
        &renamed,
        BAR_PLACEHOLDER,
        &big.simple_label(ctx.s_lambda()),
        &big.simple_label(ctx.s_rho()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tube(rank: usize) -> PointDescriptor {
        PointDescriptor::exceptional(1, rank)
    }

    fn lbl(j: usize) -> String {
        tube(1).simple_label(j)
    }

    #[test]
    fn tube_quivers_are_cycles() {
        let q = quiver_of(&[tube(3)]);
        assert_eq!(q.vertex_count(), 3);
        assert_eq!(q.arrow_count(), 3);
        for j in 1..=3 {
            let prev = if j == 1 { 3 } else { j - 1 };
            assert_eq!(q.valuation(&lbl(j), &lbl(prev)), Valuation::ONE);
        }
        let loop_q = quiver_of(&[PointDescriptor::ordinary("x", 1)]);
        assert_eq!(loop_q.valuation("S_{x}", "S_{x}"), Valuation::ONE);
        assert_eq!(quiver_of(&[]), ValuedQuiver::new());
    }

    #[test]
    fn ordinary_point_of_degree_two() {
        let q = quiver_of(&[PointDescriptor::ordinary("y", 2)]);
        assert_eq!(q.degree("S_{y}").unwrap(), 2);
        assert_eq!(q.valuation("S_{y}", "S_{y}"), Valuation::ONE);
    }

    #[test]
    fn contract_rank_two_gives_a_loop() {
        let q = quiver_of(&[tube(2)]);
        let c = rewrite_contract(&q, &lbl(1), &lbl(2), "bar").unwrap();
        let expected = quiver_of(&[PointDescriptor::ordinary("x", 1)]).relabel(|_| "bar".into()).unwrap();
        assert_eq!(c, expected);
    }

    #[test]
    fn contract_rank_three_gives_two_cycle() {
        let q = quiver_of(&[tube(3)]);
        let c = rewrite_contract(&q, &lbl(1), &lbl(3), "bar").unwrap();
        assert_eq!(c.vertex_count(), 2);
        assert_eq!(c.valuation(&lbl(2), "bar"), Valuation::ONE);
        assert_eq!(c.valuation("bar", &lbl(2)), Valuation::ONE);
        assert_eq!(c.valuation("bar", "bar"), Valuation::NONE);
        let ctx = ExpansionContext::new(&tube(3)).unwrap();
        assert_eq!(contract_at(&q, &ctx).unwrap(), quiver_of(&[tube(2)]));
    }

    #[test]
    fn contract_refusals() {
        let mut q = quiver_of(&[tube(3)]);
        q.set_arrow(&lbl(1), &lbl(1), Valuation::ONE).unwrap();
        let err = rewrite_contract(&q, &lbl(1), &lbl(3), "bar").unwrap_err();
        assert!(matches!(err, QuiverError::Precondition(ref m) if m.contains("loop")), "{err}");

        let q = quiver_of(&[tube(3)]);
        // S_2 -> S_1 is an arrow but S_1 -> S_2 is not
        let ok = rewrite_contract(&q, &lbl(2), &lbl(1), "bar").unwrap();
        assert_eq!(ok.vertex_count(), 2);
        let err = rewrite_contract(&q, &lbl(1), &lbl(2), "bar").unwrap_err();
        assert!(matches!(err, QuiverError::Precondition(ref m) if m.contains("not (1,1)")));
        assert!(matches!(
            rewrite_contract(&q, "nope", &lbl(2), "bar"),
            Err(QuiverError::UnknownVertex(_))
        ));
    }

    #[test]
    fn expand_examples() {
        let single = quiver_of(&[tube(1)]);
        let e = rewrite_expand(&single, &lbl(1), "L", "R").unwrap();
        let two = quiver_of(&[tube(2)]).relabel(|l| if l == lbl(1) { "L".into() } else { "R".into() }).unwrap();
        assert_eq!(e, two);

        let mut lone = ValuedQuiver::new();
        lone.add_vertex("v", 1).unwrap();
        let e = rewrite_expand(&lone, "v", "L", "R").unwrap();
        assert_eq!(e.arrow_count(), 1);
        assert_eq!(e.valuation("L", "R"), Valuation::ONE);

        let mut big = ValuedQuiver::new();
        big.add_vertex("w", 2).unwrap();
        assert!(matches!(rewrite_expand(&big, "w", "L", "R"), Err(QuiverError::Precondition(_))));
        assert!(matches!(rewrite_expand(&big, "z", "L", "R"), Err(QuiverError::UnknownVertex(_))));
    }

    #[test]
    fn rename_round_trips() {
        for p in 2..=6 {
            let ctx = ExpansionContext::new(&tube(p)).unwrap();
            let big = quiver_of(&[tube(p)]);
            let small = quiver_of(&[tube(p - 1)]);
            assert_eq!(contract_at(&big, &ctx).unwrap(), small);
            assert_eq!(expand_at(&small, &ctx).unwrap(), big);
        }
    }

    #[test]
    fn valuation_consistency_is_enforced() {
        let mut q = ValuedQuiver::new();
        q.add_vertex("a", 1).unwrap();
        q.add_vertex("b", 2).unwrap();
        q.set_arrow("a", "b", Valuation::new(2, 1)).unwrap();
        assert!(matches!(
            q.set_arrow("a", "b", Valuation::new(1, 1)),
            Err(QuiverError::InconsistentValuation { .. })
        ));
        assert!(q.add_vertex("a", 1).is_err());
    }

    #[test]
    fn dot_and_json() {
        let q = quiver_of(&[tube(2)]);
        assert_eq!(
            q.to_dot(),
            "digraph ext_quiver {\n  \"S_{1,1}\" [deg=1];\n  \"S_{1,2}\" [deg=1];\n  \
             \"S_{1,1}\" -> \"S_{1,2}\" [label=\"(1,1)\"];\n  \
             \"S_{1,2}\" -> \"S_{1,1}\" [label=\"(1,1)\"];\n}\n"
        );
        let v = q.to_json();
        assert_eq!(ValuedQuiver::from_json(&v).unwrap(), q);
    }
}
