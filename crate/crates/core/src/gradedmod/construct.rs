//! Building windowed modules: free modules and their sums, cokernels of maps
//! between them, the simple `S_λ`, and seeded random modules.

use std::collections::BTreeMap;

use rand::Rng;

use crate::field::Field;
use crate::lgroup::LElement;
use crate::linalg::Matrix;

use super::{ActionMap, DegreeWindow, GradedError, GradedMap, GradedRing, WindowedModule};

/// `O(twist)` on `window`: `O(twist)_m = S_{m + twist}` with the ring's own
/// action matrices.
pub fn structure_module<F: Field>(
    ring: &GradedRing<F>,
    twist: &LElement,
    window: &DegreeWindow,
) -> WindowedModule<F> {
    let g = ring.group();
    let dims = window.degrees().map(|m| (m.clone(), ring.dim(&g.plus(m, twist)))).collect();
    let mut actions: ActionMap<F::Elem> = BTreeMap::new();
    for gen in ring.generators() {
        let per = actions.entry(gen).or_default();
        for m in window.degrees() {
            if window.contains(&ring.shift(m, gen)) {
                per.insert(m.clone(), ring.action(gen, &g.plus(m, twist)));
            }
        }
    }
    WindowedModule::from_parts(ring.clone(), window.clone(), dims, actions)
        .expect("structure module is well formed")
}

/// Direct sum; an action is defined where it is defined in every summand.
pub fn direct_sum<F: Field>(
    ring: &GradedRing<F>,
    window: &DegreeWindow,
    summands: &[&WindowedModule<F>],
) -> Result<WindowedModule<F>, GradedError> {
    for s in summands {
        if s.ring().line_data() != ring.line_data() || s.window().degrees != window.degrees {
            return Err(GradedError::WindowMismatch("summands live on different windows".into()));
        }
    }
    let f = ring.field();
    let dims = window
        .degrees()
        .map(|d| (d.clone(), summands.iter().map(|s| s.dim(d)).sum()))
        .collect();
    let mut actions: ActionMap<F::Elem> = BTreeMap::new();
    for g in ring.generators() {
        let per = actions.entry(g).or_default();
        for d in window.degrees() {
            let blocks: Option<Vec<&Matrix<F::Elem>>> = summands.iter().map(|s| s.action(g, d)).collect();
            if let Some(blocks) = blocks {
                if window.contains(&ring.shift(d, g)) {
                    per.insert(d.clone(), Matrix::direct_sum(f, &blocks));
                }
            }
        }
    }
    WindowedModule::from_parts(ring.clone(), window.clone(), dims, actions)
}

/// `⊕_k O(twists[k])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeSum {
    pub twists: Vec<LElement>,
}

pub fn free_sum<F: Field>(ring: &GradedRing<F>, sum: &FreeSum, window: &DegreeWindow) -> WindowedModule<F> {
    let parts: Vec<_> = sum.twists.iter().map(|t| structure_module(ring, t, window)).collect();
    let refs: Vec<_> = parts.iter().collect();
    direct_sum(ring, window, &refs).expect("free summands share the window")
}

/// A homogeneous map `⊕ O(a_k) -> ⊕ O(b_m)`; `entries[m][k]` are the
/// coordinates of a ring element of degree `b_m - a_k` in the monomial basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeMap<E> {
    pub source: FreeSum,
    pub target: FreeSum,
    pub entries: Vec<Vec<Vec<E>>>,
}

impl<E: Clone> FreeMap<E> {
    pub fn random<F: Field<Elem = E>, R: Rng + ?Sized>(
        ring: &GradedRing<F>,
        source: FreeSum,
        target: FreeSum,
        rng: &mut R,
    ) -> Self {
        let g = ring.group();
        let entries = target
            .twists
            .iter()
            .map(|b| {
                source
                    .twists
                    .iter()
                    .map(|a| {
                        let delta = g.minus(b, a);
                        (0..ring.dim(&delta)).map(|_| ring.field().random(rng)).collect()
                    })
                    .collect()
            })
            .collect();
        Self { source, target, entries }
    }

    /// Block matrices degree by degree over `window`.
    pub fn graded_map<F: Field<Elem = E>>(&self, ring: &GradedRing<F>, window: &DegreeWindow) -> GradedMap<E> {
        let f = ring.field();
        let g = ring.group();
        let mut maps = BTreeMap::new();
        for d in window.degrees() {
            let rows: Vec<usize> = self.target.twists.iter().map(|b| ring.dim(&g.plus(d, b))).collect();
            let cols: Vec<usize> = self.source.twists.iter().map(|a| ring.dim(&g.plus(d, a))).collect();
            let mut out = Matrix::zeros(f, rows.iter().sum(), cols.iter().sum());
            let mut r0 = 0;
            for (mi, b) in self.target.twists.iter().enumerate() {
                let mut c0 = 0;
                for (ki, a) in self.source.twists.iter().enumerate() {
                    let block = ring.element_action(&g.plus(d, a), &g.minus(b, a), &self.entries[mi][ki]);
                    for r in 0..block.rows() {
                        for c in 0..block.cols() {
                            out[(r0 + r, c0 + c)] = block[(r, c)].clone();
                        }
                    }
                    c0 += cols[ki];
                }
                r0 += rows[mi];
            }
            maps.insert(d.clone(), out);
        }
        GradedMap { maps }
    }
}

/// Degree-wise cokernel of `f: P -> q`. The basis of `coker_d` is the set of
/// standard basis vectors of `q_d` outside the pivots of `im f_d`; returns
/// the module and the projection `q -> coker`.
pub fn cokernel<F: Field>(
    q: &WindowedModule<F>,
    f: &GradedMap<F::Elem>,
) -> Result<(WindowedModule<F>, GradedMap<F::Elem>), GradedError> {
    let k = q.field();
    let mut proj = BTreeMap::new();
    let mut complement = BTreeMap::new();
    for d in q.window().degrees() {
        let n = q.dim(d);
        let fd = f
            .get(d)
            .ok_or_else(|| GradedError::OutsideWindow(format!("map undefined at {d}")))?;
        if fd.rows() != n {
            return Err(GradedError::Shape {
                generator: "map".into(),
                degree: d.to_string(),
                expected: (n, fd.cols()),
                found: fd.shape(),
            });
        }
        let (red, pivots) = fd.transpose().rref(k);
        let rest: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
        let mut p = Matrix::zeros(k, rest.len(), n);
        for i in 0..n {
            // reduce e_i modulo the image, then read off the free coordinates
            let mut v = vec![k.zero(); n];
            v[i] = k.one();
            for (r, &pc) in pivots.iter().enumerate() {
                if k.is_zero(&v[pc]) {
                    continue;
                }
                let s = v[pc].clone();
                for c in 0..n {
                    v[c] = k.sub(&v[c], &k.mul(&s, &red[(r, c)]));
                }
            }
            for (ri, &c) in rest.iter().enumerate() {
                p[(ri, i)] = v[c].clone();
            }
        }
        proj.insert(d.clone(), p);
        complement.insert(d.clone(), rest);
    }
    let dims = complement.iter().map(|(d, r)| (d.clone(), r.len())).collect();
    let mut actions: ActionMap<F::Elem> = BTreeMap::new();
    for (g, per) in q.actions() {
        let slot = actions.entry(*g).or_default();
        for (d, m) in per {
            let t = q.ring().shift(d, *g);
            let rest = &complement[d];
            let mut lift = Matrix::zeros(k, q.dim(d), rest.len());
            for (ri, &c) in rest.iter().enumerate() {
                lift[(c, ri)] = k.one();
            }
            slot.insert(d.clone(), proj[&t].mul(k, &m.mul(k, &lift)));
        }
    }
    let module = WindowedModule::from_parts(q.ring().clone(), q.window().clone(), dims, actions)?;
    Ok((module, GradedMap { maps: proj }))
}

/// A short exact sequence `0 -> sub -> middle -> quotient -> 0` of windowed
/// modules with its maps.
#[derive(Debug, Clone)]
pub struct Presentation<F: Field> {
    pub sub: WindowedModule<F>,
    pub middle: WindowedModule<F>,
    pub quotient: WindowedModule<F>,
    pub inclusion: GradedMap<F::Elem>,
    pub projection: GradedMap<F::Elem>,
}

/// `0 -> O(-x_j) -x_j-> O -> S_λ -> 0`; `S_λ` is one-dimensional exactly in
/// degrees with `l_j = 0` and `c >= 0`.
pub fn simple_lambda_module<F: Field>(
    ring: &GradedRing<F>,
    j: usize,
    window: &DegreeWindow,
) -> Result<Presentation<F>, GradedError> {
    ring.weights().check_index(j)?;
    let g = ring.group();
    let minus_xj = g.negate(&g.x(j))?;
    let mut delta = vec![ring.field().zero(); ring.dim(&g.x(j))];
    delta[0] = ring.field().one();
    let map = FreeMap {
        source: FreeSum { twists: vec![minus_xj.clone()] },
        target: FreeSum { twists: vec![g.zero()] },
        entries: vec![vec![delta]],
    };
    let inclusion = map.graded_map(ring, window);
    let sub = structure_module(ring, &minus_xj, window);
    let middle = structure_module(ring, &g.zero(), window);
    let (quotient, projection) = cokernel(&middle, &inclusion)?;
    Ok(Presentation { sub, middle, quotient, inclusion, projection })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomModuleConfig {
    pub max_generators: usize,
    pub max_relations: usize,
    /// range of the `c`-coefficient of generator and relation twists
    pub c_range: (i64, i64),
}

impl Default for RandomModuleConfig {
    fn default() -> Self {
        Self { max_generators: 3, max_relations: 3, c_range: (-2, 1) }
    }
}

fn random_twist<F: Field, R: Rng + ?Sized>(ring: &GradedRing<F>, cfg: &RandomModuleConfig, rng: &mut R) -> LElement {
    let coeffs: Vec<i64> = ring.weights().as_slice().iter().map(|&p| rng.gen_range(0..p)).collect();
    let c = rng.gen_range(cfg.c_range.0..=cfg.c_range.1);
    ring.group().normalize(&coeffs, c).expect("normal coefficients")
}

/// A random finitely presented module `coker(⊕ O(a_k) -> ⊕ O(b_m))` on the
/// window, in a random basis. Valid by construction.
pub fn random_module<F: Field, R: Rng + ?Sized>(
    ring: &GradedRing<F>,
    window: &DegreeWindow,
    cfg: &RandomModuleConfig,
    rng: &mut R,
) -> WindowedModule<F> {
    let gens = rng.gen_range(1..=cfg.max_generators.max(1));
    let rels = rng.gen_range(0..=cfg.max_relations);
    let target = FreeSum { twists: (0..gens).map(|_| random_twist(ring, cfg, rng)).collect() };
    let source = FreeSum { twists: (0..rels).map(|_| random_twist(ring, cfg, rng)).collect() };
    let map = FreeMap::random(ring, source, target.clone(), rng);
    let q = free_sum(ring, &target, window);
    let (coker, _) = cokernel(&q, &map.graded_map(ring, window)).expect("shapes agree");
    random_basis_change(&coker, rng).0
}

/// Conjugates every degree by a random invertible matrix; returns the new
/// module and the isomorphism from the old one.
pub fn random_basis_change<F: Field, R: Rng + ?Sized>(
    m: &WindowedModule<F>,
    rng: &mut R,
) -> (WindowedModule<F>, GradedMap<F::Elem>) {
    let k = m.field();
    let mut t = BTreeMap::new();
    let mut t_inv = BTreeMap::new();
    for d in m.window().degrees() {
        let n = m.dim(d);
        loop {
            let data = (0..n * n).map(|_| k.random(rng)).collect();
            let cand = Matrix::from_rows(n, n, data);
            if let Some(inv) = cand.inverse(k) {
                t.insert(d.clone(), cand);
                t_inv.insert(d.clone(), inv);
                break;
            }
        }
    }
    let mut actions: ActionMap<F::Elem> = BTreeMap::new();
    for (g, per) in m.actions() {
        let slot = actions.entry(*g).or_default();
        for (d, a) in per {
            let tgt = m.ring().shift(d, *g);
            slot.insert(d.clone(), t[&tgt].mul(k, &a.mul(k, &t_inv[d])));
        }
    }
    let out = WindowedModule::from_parts(m.ring().clone(), m.window().clone(), m.dims().clone(), actions)
        .expect("basis change keeps shapes");
    (out, GradedMap { maps: t })
}
