//! The graded ring `S(p, λ) = k[u, v, x_1..x_n] / (x_i^{p_i} + λ_{i1} u - λ_{i0} v)`.
//!
//! `S` is free over `k[u, v]` on the monomials `x^e` with `0 <= e_i < p_i`,
//! so the homogeneous piece of degree `sum e_i x_i + C c` (normal form) has
//! basis `u^a v^(C-a) x^e`, `a = 0..=C`; basis vector `a` sits at index `a`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::field::Field;
use crate::lgroup::{GradingGroup, LElement, LGroupError, WeightSequence};
use crate::linalg::Matrix;

use super::{GradedError, WeightedLineData};

/// A ring generator. `X(i)` is `x_i`, one-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Generator {
    U,
    V,
    X(usize),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::U => write!(f, "u"),
            Generator::V => write!(f, "v"),
            Generator::X(i) => write!(f, "x{i}"),
        }
    }
}

impl TryFrom<String> for Generator {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        match s.as_str() {
            "u" => Ok(Generator::U),
            "v" => Ok(Generator::V),
            _ => s
                .strip_prefix('x')
                .and_then(|i| i.parse().ok())
                .filter(|&i: &usize| i >= 1)
                .map(Generator::X)
                .ok_or_else(|| format!("unknown generator {s:?}")),
        }
    }
}

impl From<Generator> for String {
    fn from(g: Generator) -> String {
        g.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedRing<F: Field> {
    field: F,
    group: GradingGroup,
    /// `(λ_{i0}, λ_{i1})` for each marked point
    lambdas: Vec<(F::Elem, F::Elem)>,
    points: Vec<[i64; 2]>,
}

impl<F: Field> GradedRing<F> {
    pub fn new(field: F, data: &WeightedLineData) -> Result<Self, GradedError> {
        data.validate()?;
        if field.descriptor() != data.field {
            return Err(GradedError::FieldMismatch {
                expected: data.field.to_string(),
                found: field.descriptor().to_string(),
            });
        }
        let lambdas = data
            .points
            .iter()
            .map(|[a, b]| (field.from_i64(*a), field.from_i64(*b)))
            .collect();
        Ok(Self { field, group: data.weights.group(), lambdas, points: data.points.clone() })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn group(&self) -> &GradingGroup {
        &self.group
    }

    pub fn weights(&self) -> &WeightSequence {
        self.group.weights()
    }

    pub fn points(&self) -> &[[i64; 2]] {
        &self.points
    }

    pub fn line_data(&self) -> WeightedLineData {
        WeightedLineData {
            weights: self.weights().clone(),
            points: self.points.clone(),
            field: self.field.descriptor(),
        }
    }

    /// The same marked points with `p_j` lowered by one.
    pub fn reduced_at(&self, j: usize) -> Result<Self, LGroupError> {
        let w = self.weights().reduced_at(j)?;
        Ok(Self { group: w.group(), ..self.clone() })
    }

    /// The same marked points with `p_j` raised by one.
    pub fn raised_at(&self, j: usize) -> Result<Self, LGroupError> {
        let w = self.weights().raised_at(j)?;
        Ok(Self { group: w.group(), ..self.clone() })
    }

    pub fn generators(&self) -> Vec<Generator> {
        let mut g = vec![Generator::U, Generator::V];
        g.extend((1..=self.group.rank()).map(Generator::X));
        g
    }

    pub fn degree_of(&self, g: Generator) -> LElement {
        match g {
            Generator::U | Generator::V => self.group.c(1),
            Generator::X(i) => self.group.x(i),
        }
    }

    /// `l + deg g`.
    pub fn shift(&self, l: &LElement, g: Generator) -> LElement {
        self.group.plus(l, &self.degree_of(g))
    }

    /// `dim S_l`.
    pub fn dim(&self, l: &LElement) -> usize {
        let c = l.c_coeff();
        if c < 0 {
            0
        } else {
            c as usize + 1
        }
    }

    /// Matrix of multiplication by `g` from `S_l` to `S_{l + deg g}`.
    pub fn action(&self, g: Generator, l: &LElement) -> Matrix<F::Elem> {
        let f = &self.field;
        let target = self.shift(l, g);
        let (rows, cols) = (self.dim(&target), self.dim(l));
        let mut m = Matrix::zeros(f, rows, cols);
        for a in 0..cols {
            match g {
                Generator::U => m[(a + 1, a)] = f.one(),
                Generator::V => m[(a, a)] = f.one(),
                Generator::X(i) => {
                    if target.c_coeff() == l.c_coeff() {
                        m[(a, a)] = f.one();
                    } else {
                        // x_i^{p_i} = λ_{i0} v - λ_{i1} u
                        let (l0, l1) = &self.lambdas[i - 1];
                        m[(a, a)] = f.add(&m[(a, a)], l0);
                        m[(a + 1, a)] = f.sub(&m[(a + 1, a)], l1);
                    }
                }
            }
        }
        m
    }

    /// Multiplication by the monomial `u^a v^b x^e` starting from degree `l`;
    /// returns the target degree and the matrix.
    pub fn monomial_action(
        &self,
        l: &LElement,
        a: usize,
        b: usize,
        e: &[i64],
    ) -> (LElement, Matrix<F::Elem>) {
        let f = &self.field;
        let mut deg = l.clone();
        let mut m = Matrix::identity(f, self.dim(l));
        let mut path: Vec<Generator> = Vec::new();
        for (i, &ei) in e.iter().enumerate() {
            path.extend(std::iter::repeat_n(Generator::X(i + 1), ei as usize));
        }
        path.extend(std::iter::repeat_n(Generator::U, a));
        path.extend(std::iter::repeat_n(Generator::V, b));
        for g in path {
            m = self.action(g, &deg).mul(f, &m);
            deg = self.shift(&deg, g);
        }
        (deg, m)
    }

    /// Multiplication by a homogeneous element `h` of degree `delta`, given by
    /// its coordinates in the monomial basis of `S_delta`.
    pub fn element_action(&self, l: &LElement, delta: &LElement, h: &[F::Elem]) -> Matrix<F::Elem> {
        assert_eq!(h.len(), self.dim(delta), "element has the wrong number of coordinates");
        let f = &self.field;
        let target = self.group.plus(l, delta);
        let mut out = Matrix::zeros(f, self.dim(&target), self.dim(l));
        let c = delta.c_coeff().max(0) as usize;
        for (a, coeff) in h.iter().enumerate() {
            if f.is_zero(coeff) {
                continue;
            }
            let (deg, m) = self.monomial_action(l, a, c - a, delta.coeffs());
            debug_assert_eq!(deg, target);
            out = out.add(f, &m.scale(f, coeff));
        }
        out
    }
}
