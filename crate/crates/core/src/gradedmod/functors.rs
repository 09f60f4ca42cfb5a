//! The functors between modules over `S(p', λ)` and `S(p, λ)`, where
//! `p'_i = p_i - δ_ij`:
//!
//! - `F`: `(FM)_l = M_l` if `l_j = 0`, else `M_{l - x_j}`; `x_j` acts as the
//!   identity out of degrees with `l_j = 0`.
//! - `F_λ`: `(F_λ N)_l = N_{φ(l) + x_j}`; `x_j` acts as `x_j²` out of
//!   degrees with `l_j = p_j - 2`.
//! - `F_ρ`: `(F_ρ N)_l = N_{φ(l)}` if `l_j = 0`, else `N_{φ(l) + x_j}`; `x_j`
//!   acts as `x_j²` out of degrees with `l_j = 0`.
//!
//! Each functor is described by a degree map (target degree to source
//! degree) and, for each generator, a path of source generators; the target
//! action is the composite along that path. Maps of modules are reindexed
//! along the same degree map.

use std::collections::{BTreeMap, BTreeSet};

use crate::field::Field;
use crate::lgroup::{GradingGroup, LElement, LGroupError, WeightSequence};

use super::{DegreeWindow, Generator, GradedError, GradedMap, WindowedModule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctorKind {
    /// `F`, from `p'` to `p`.
    F,
    /// `F_λ`, from `p` to `p'`, left adjoint of `F`.
    FLambda,
    /// `F_ρ`, from `p` to `p'`, right adjoint of `F`.
    FRho,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionFunctor {
    kind: FunctorKind,
    j: usize,
    small: GradingGroup,
    big: GradingGroup,
}

impl ExpansionFunctor {
    /// `big` are the weights `p`; `p_j >= 2` is required.
    pub fn new(kind: FunctorKind, big: &WeightSequence, j: usize) -> Result<Self, LGroupError> {
        let small = big.reduced_at(j)?;
        Ok(Self { kind, j, small: small.group(), big: big.group() })
    }

    pub fn kind(&self) -> FunctorKind {
        self.kind
    }

    pub fn index(&self) -> usize {
        self.j
    }

    pub fn source_group(&self) -> &GradingGroup {
        match self.kind {
            FunctorKind::F => &self.small,
            _ => &self.big,
        }
    }

    pub fn target_group(&self) -> &GradingGroup {
        match self.kind {
            FunctorKind::F => &self.big,
            _ => &self.small,
        }
    }

    fn with_coeff_j(&self, group: &GradingGroup, l: &LElement, delta: i64) -> LElement {
        let mut coeffs = l.coeffs().to_vec();
        coeffs[self.j - 1] += delta;
        let out = group.normalize(&coeffs, l.c_coeff()).expect("same rank");
        debug_assert_eq!(out.c_coeff(), l.c_coeff());
        out
    }

    /// The source degree whose space sits at target degree `l`.
    pub fn source_degree(&self, l: &LElement) -> LElement {
        let lj = l.coeff(self.j);
        match self.kind {
            FunctorKind::F if lj == 0 => self.with_coeff_j(&self.small, l, 0),
            FunctorKind::F => self.with_coeff_j(&self.small, l, -1),
            FunctorKind::FLambda => self.with_coeff_j(&self.big, l, 1),
            FunctorKind::FRho if lj == 0 => self.with_coeff_j(&self.big, l, 0),
            FunctorKind::FRho => self.with_coeff_j(&self.big, l, 1),
        }
    }

    /// The source generators whose composite is the action of `g` at `l`.
    pub fn path(&self, g: Generator, l: &LElement) -> Vec<Generator> {
        if g != Generator::X(self.j) {
            return vec![g];
        }
        let lj = l.coeff(self.j);
        let special = match self.kind {
            FunctorKind::F => lj == 0,
            FunctorKind::FLambda => lj == self.small.weights().as_slice()[self.j - 1] - 1,
            FunctorKind::FRho => lj == 0,
        };
        match (self.kind, special) {
            (FunctorKind::F, true) => Vec::new(),
            (_, true) => vec![g, g],
            (_, false) => vec![g],
        }
    }

    /// All target degrees whose source degree lies in `window`.
    pub fn target_window(&self, window: &DegreeWindow) -> DegreeWindow {
        let mut degrees = BTreeSet::new();
        for d in window.degrees() {
            let dj = d.coeff(self.j);
            match self.kind {
                FunctorKind::F => {
                    degrees.insert(self.with_coeff_j(&self.big, d, 1));
                    if dj == 0 {
                        degrees.insert(self.with_coeff_j(&self.big, d, 0));
                    }
                }
                FunctorKind::FLambda => {
                    if dj >= 1 {
                        degrees.insert(self.with_coeff_j(&self.small, d, -1));
                    }
                }
                FunctorKind::FRho => {
                    if dj == 0 {
                        degrees.insert(self.with_coeff_j(&self.small, d, 0));
                    } else if dj >= 2 {
                        degrees.insert(self.with_coeff_j(&self.small, d, -1));
                    }
                }
            }
        }
        debug_assert!(degrees.iter().all(|l| window.contains(&self.source_degree(l))));
        DegreeWindow { weights: self.target_group().weights().clone(), bound: window.bound(), degrees }
    }

    pub fn apply<F: Field>(&self, m: &WindowedModule<F>) -> Result<WindowedModule<F>, GradedError> {
        if m.ring().weights() != self.source_group().weights() {
            return Err(GradedError::DataMismatch(format!(
                "functor expects weights {}, module has {}",
                self.source_group().weights(),
                m.ring().weights()
            )));
        }
        let ring = match self.kind {
            FunctorKind::F => m.ring().raised_at(self.j)?,
            _ => m.ring().reduced_at(self.j)?,
        };
        let window = self.target_window(m.window());
        let dims: BTreeMap<LElement, usize> =
            window.degrees().map(|l| (l.clone(), m.dim(&self.source_degree(l)))).collect();
        let mut actions: super::ActionMap<F::Elem> = BTreeMap::new();
        for g in ring.generators() {
            let per = actions.entry(g).or_default();
            for l in window.degrees() {
                let t = ring.shift(l, g);
                if !window.contains(&t) {
                    continue;
                }
                let Some((end, mat)) = m.path_action(&self.source_degree(l), &self.path(g, l)) else {
                    continue;
                };
                assert_eq!(end, self.source_degree(&t), "functor path for {g} at {l} ends in the wrong degree");
                per.insert(l.clone(), mat);
            }
        }
        WindowedModule::from_parts(ring, window, dims, actions)
    }

    /// Reindexes a map of source modules; `window` is the source window.
    pub fn apply_map<E: Clone>(&self, f: &GradedMap<E>, window: &DegreeWindow) -> GradedMap<E> {
        let target = self.target_window(window);
        let maps = target
            .degrees()
            .filter_map(|l| f.get(&self.source_degree(l)).map(|m| (l.clone(), m.clone())))
            .collect();
        GradedMap { maps }
    }
}

/// `F` for a module over `p'`; the target weights are `p'` with `p'_j + 1`.
pub fn apply_f<F: Field>(m: &WindowedModule<F>, j: usize) -> Result<WindowedModule<F>, GradedError> {
    let big = m.ring().weights().raised_at(j)?;
    ExpansionFunctor::new(FunctorKind::F, &big, j)?.apply(m)
}

pub fn apply_f_lambda<F: Field>(n: &WindowedModule<F>, j: usize) -> Result<WindowedModule<F>, GradedError> {
    ExpansionFunctor::new(FunctorKind::FLambda, n.ring().weights(), j)?.apply(n)
}

pub fn apply_f_rho<F: Field>(n: &WindowedModule<F>, j: usize) -> Result<WindowedModule<F>, GradedError> {
    ExpansionFunctor::new(FunctorKind::FRho, n.ring().weights(), j)?.apply(n)
}

/// Whether `x_j: N_l -> N_{l+x_j}` is an isomorphism at every degree with
/// `l_j = 0` where the action is defined.
pub fn in_image_f<F: Field>(n: &WindowedModule<F>, j: usize) -> Result<bool, GradedError> {
    n.ring().weights().check_index(j)?;
    let f = n.field();
    for l in n.window().degrees().filter(|l| l.coeff(j) == 0) {
        let Some(m) = n.action(Generator::X(j), l) else { continue };
        if m.rows() != m.cols() || m.rank(f) != m.cols() {
            return Ok(false);
        }
    }
    Ok(true)
}
