//! Expansion of a rank `p - 1` tube into a rank `p` tube.
//!
//! With `S_λ = S_1` and `S_ρ = S_p` in the big tube, the small tube is
//! identified with `S_λ^⊥` through `S'_m <-> S_{m+1}` for `m <= p - 2`, and
//! `S̄ = S'_{p-1}` goes to the length-two uniserial with word `(S_1, S_p)`.
//! The three functors act on composition words:
//!
//! - `expand` (`i`): `S'_m -> S_{m+1}`, `S̄ -> (S_λ, S_ρ)`.
//! - `contract` (`i_λ`, left adjoint): drop `S_λ`, rename `S_m -> S'_{m-1}`.
//! - `coexpand` (`i_ρ`, right adjoint): drop `S_ρ`, rename `S_1 -> S̄` and
//!   `S_m -> S'_{m-1}` otherwise.
//!
//! Everything is additive, so decomposable objects are handled summand by
//! summand. Only objects are transported; statements about morphisms are
//! checked as dimension identities.

use serde_json::{json, Value};
use thiserror::Error;

use crate::tubecat::{ext1_dim, hom_dim, PointDescriptor, TubeError, TubeIndec, TubeObject};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExpansionError {
    #[error("a tube of rank {0} has no contraction (need rank >= 2)")]
    RankTooSmall(usize),
    #[error("expansions are defined at exceptional points only")]
    NotExceptional,
    #[error("object lives at {found}, expected {expected}")]
    WrongTube { expected: String, found: String },
    #[error(transparent)]
    Tube(#[from] TubeError),
}

/// An expansion of the rank `p - 1` tube at an exceptional point into the
/// rank `p` tube at the same point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExpansionContext {
    big: PointDescriptor,
    small: PointDescriptor,
}

impl ExpansionContext {
    /// `big` is the point with its rank-`p` tube.
    pub fn new(big: &PointDescriptor) -> Result<Self, ExpansionError> {
        if !big.is_exceptional() {
            return Err(ExpansionError::NotExceptional);
        }
        let p = big.rank();
        if p < 2 {
            return Err(ExpansionError::RankTooSmall(p));
        }
        Ok(Self { big: big.clone(), small: big.with_rank(p - 1) })
    }

    pub fn big_rank(&self) -> usize {
        self.big.rank()
    }

    pub fn big_point(&self) -> &PointDescriptor {
        &self.big
    }

    pub fn small_point(&self) -> &PointDescriptor {
        &self.small
    }

    /// Index of `S_λ` in the big tube.
    pub fn s_lambda(&self) -> usize {
        1
    }

    /// Index of `S_ρ` in the big tube.
    pub fn s_rho(&self) -> usize {
        self.big_rank()
    }

    /// Index of `S̄` in the small tube.
    pub fn s_bar(&self) -> usize {
        self.big_rank() - 1
    }

    pub fn lambda_object(&self) -> TubeObject {
        TubeObject::simple(&self.big, self.s_lambda()).expect("S_1 exists")
    }

    pub fn rho_object(&self) -> TubeObject {
        TubeObject::simple(&self.big, self.s_rho()).expect("S_p exists")
    }

    pub fn bar_object(&self) -> TubeObject {
        TubeObject::simple(&self.small, self.s_bar()).expect("S'_(p-1) exists")
    }

    /// Expansions coming from weighted projective lines never split:
    /// `S_λ` and `S_ρ` are distinct.
    pub fn is_split(&self) -> bool {
        self.s_lambda() == self.s_rho()
    }

    fn check_big(&self, a: &TubeObject) -> Result<(), ExpansionError> {
        check_point(&self.big, a)
    }

    fn check_small(&self, b: &TubeObject) -> Result<(), ExpansionError> {
        check_point(&self.small, b)
    }

    fn rebuild(&self, point: &PointDescriptor, words: Vec<Vec<usize>>) -> TubeObject {
        let rank = point.rank();
        let summands = words.iter().filter_map(|w| TubeIndec::from_word(w, rank)).collect();
        TubeObject::new(point, summands).expect("renamed words stay in range")
    }
}

fn check_point(expected: &PointDescriptor, a: &TubeObject) -> Result<(), ExpansionError> {
    if a.point() != expected {
        return Err(ExpansionError::WrongTube {
            expected: format!("{expected:?}"),
            found: format!("{:?}", a.point()),
        });
    }
    Ok(())
}

/// `i_λ`: delete every `S_λ`, rename `S_m -> S'_{m-1}`.
pub fn contract(ctx: &ExpansionContext, a: &TubeObject) -> Result<TubeObject, ExpansionError> {
    ctx.check_big(a)?;
    let p = ctx.big_rank();
    let words = a
        .summands()
        .iter()
        .map(|s| s.word(p).into_iter().filter(|&m| m != 1).map(|m| m - 1).collect())
        .collect();
    Ok(ctx.rebuild(&ctx.small, words))
}

/// `i`: `S'_m -> S_{m+1}` for `m <= p - 2`, and `S̄ -> (S_λ, S_ρ)`.
pub fn expand(ctx: &ExpansionContext, b: &TubeObject) -> Result<TubeObject, ExpansionError> {
    ctx.check_small(b)?;
    let p = ctx.big_rank();
    let words = b
        .summands()
        .iter()
        .map(|s| {
            s.word(p - 1)
                .into_iter()
                .flat_map(|m| if m == p - 1 { vec![1, p] } else { vec![m + 1] })
                .collect()
        })
        .collect();
    Ok(ctx.rebuild(&ctx.big, words))
}

/// `i_ρ`: delete every `S_ρ`, rename `S_1 -> S̄` and `S_m -> S'_{m-1}`.
pub fn coexpand(ctx: &ExpansionContext, a: &TubeObject) -> Result<TubeObject, ExpansionError> {
    ctx.check_big(a)?;
    let p = ctx.big_rank();
    let words = a
        .summands()
        .iter()
        .map(|s| {
            s.word(p)
                .into_iter()
                .filter(|&m| m != p)
                .map(|m| if m == 1 { p - 1 } else { m - 1 })
                .collect()
        })
        .collect();
    Ok(ctx.rebuild(&ctx.small, words))
}

/// The almost split sequence `0 -> S_ρ -> i S̄ -> S_λ -> 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectingSequence {
    pub sub: TubeObject,
    pub middle: TubeObject,
    pub quotient: TubeObject,
}

pub fn connecting_sequence(ctx: &ExpansionContext) -> ConnectingSequence {
    let middle = expand(ctx, &ctx.bar_object()).expect("S̄ lives in the small tube");
    ConnectingSequence { sub: ctx.rho_object(), middle, quotient: ctx.lambda_object() }
}

/// `0 -> A' -> A -> Ā -> A'' -> 0` with `A', A''` in `add S_λ` and `Ā` in the
/// image of `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSequence {
    pub a_prime: TubeObject,
    pub a: TubeObject,
    pub a_bar: TubeObject,
    pub a_dblprime: TubeObject,
}

impl LocalSequence {
    /// Every stated invariant: `A', A''` are sums of `S_λ`, `Ā` is fixed by
    /// `i i_λ`, and lengths balance.
    pub fn holds(&self, ctx: &ExpansionContext) -> bool {
        let only_lambda = |x: &TubeObject| {
            x.summands().iter().all(|s| s.len == 1 && s.top == ctx.s_lambda())
        };
        let a_bar_in_image = contract(ctx, &self.a_bar)
            .and_then(|b| expand(ctx, &b))
            .map(|x| x == self.a_bar)
            .unwrap_or(false);
        only_lambda(&self.a_prime)
            && only_lambda(&self.a_dblprime)
            && a_bar_in_image
            && self.a_prime.length() + self.a_bar.length()
                == self.a.length() + self.a_dblprime.length()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "A_prime": self.a_prime.to_records(),
            "A": self.a.to_records(),
            "A_bar": self.a_bar.to_records(),
            "A_dblprime": self.a_dblprime.to_records(),
        })
    }
}

pub fn local_sequence(ctx: &ExpansionContext, a: &TubeObject) -> Result<LocalSequence, ExpansionError> {
    let a_bar = expand(ctx, &contract(ctx, a)?)?;
    let p = ctx.big_rank();
    let lambda = TubeIndec::new(ctx.s_lambda(), 1);
    let socle_count = a.summands().iter().filter(|s| s.socle(p) == ctx.s_lambda()).count();
    let top_count = a.summands().iter().filter(|s| s.top == ctx.s_rho()).count();
    let big = ctx.big_point();
    Ok(LocalSequence {
        a_prime: TubeObject::new(big, vec![lambda; socle_count])?,
        a: a.clone(),
        a_bar,
        a_dblprime: TubeObject::new(big, vec![lambda; top_count])?,
    })
}

/// Whether `A` lies in the image of `i`.
pub fn in_image(ctx: &ExpansionContext, a: &TubeObject) -> Result<bool, ExpansionError> {
    let seq = local_sequence(ctx, a)?;
    Ok(seq.a_prime.is_zero() && seq.a_dblprime.is_zero())
}

/// Membership in `S_λ^⊥` and in `^⊥S_ρ`, computed from Hom and Ext¹.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PerpFlags {
    pub right_perp_lambda: bool,
    pub left_perp_rho: bool,
}

pub fn perp_membership(ctx: &ExpansionContext, a: &TubeObject) -> Result<PerpFlags, ExpansionError> {
    ctx.check_big(a)?;
    let (lambda, rho) = (ctx.lambda_object(), ctx.rho_object());
    Ok(PerpFlags {
        right_perp_lambda: hom_dim(&lambda, a)? == 0 && ext1_dim(&lambda, a)? == 0,
        left_perp_rho: hom_dim(a, &rho)? == 0 && ext1_dim(a, &rho)? == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tubecat::objects_up_to;

    fn ctx(p: usize) -> ExpansionContext {
        ExpansionContext::new(&PointDescriptor::exceptional(1, p)).unwrap()
    }

    fn big(c: &ExpansionContext, top: usize, len: usize) -> TubeObject {
        TubeObject::indec(c.big_point(), top, len).unwrap()
    }

    fn small(c: &ExpansionContext, top: usize, len: usize) -> TubeObject {
        TubeObject::indec(c.small_point(), top, len).unwrap()
    }

    #[test]
    fn context_requires_rank_two() {
        assert_eq!(
            ExpansionContext::new(&PointDescriptor::exceptional(1, 1)),
            Err(ExpansionError::RankTooSmall(1))
        );
        assert_eq!(
            ExpansionContext::new(&PointDescriptor::ordinary("x", 1)),
            Err(ExpansionError::NotExceptional)
        );
        let c = ctx(3);
        assert_eq!((c.s_lambda(), c.s_rho(), c.s_bar()), (1, 3, 2));
        assert!(!c.is_split());
    }

    #[test]
    fn contract_examples() {
        let c = ctx(3);
        assert_eq!(contract(&c, &big(&c, 3, 1)).unwrap(), small(&c, 2, 1));
        assert!(contract(&c, &big(&c, 1, 1)).unwrap().is_zero());
        assert_eq!(contract(&c, &big(&c, 1, 3)).unwrap(), small(&c, 2, 2));
    }

    #[test]
    fn expand_examples() {
        let c = ctx(3);
        let middle = expand(&c, &small(&c, 2, 1)).unwrap();
        assert_eq!(middle, big(&c, 1, 2));
        assert_eq!(middle.summands()[0].word(3), vec![1, 3]);
        assert_eq!(expand(&c, &small(&c, 1, 1)).unwrap(), big(&c, 2, 1));
        assert_eq!(expand(&c, &small(&c, 2, 2)).unwrap(), big(&c, 1, 3));
    }

    #[test]
    fn coexpand_examples() {
        let c = ctx(3);
        assert_eq!(coexpand(&c, &big(&c, 1, 1)).unwrap(), small(&c, 2, 1));
        assert!(coexpand(&c, &big(&c, 3, 1)).unwrap().is_zero());
        assert_eq!(coexpand(&c, &big(&c, 1, 2)).unwrap(), small(&c, 2, 1));
    }

    #[test]
    fn wrong_tube_is_rejected() {
        let c = ctx(3);
        assert!(matches!(contract(&c, &small(&c, 1, 1)), Err(ExpansionError::WrongTube { .. })));
        assert!(matches!(expand(&c, &big(&c, 1, 1)), Err(ExpansionError::WrongTube { .. })));
    }

    #[test]
    fn connecting_sequence_rank_three() {
        let c = ctx(3);
        let seq = connecting_sequence(&c);
        assert_eq!(seq.sub, big(&c, 3, 1));
        assert_eq!(seq.middle.summands()[0].word(3), vec![1, 3]);
        assert_eq!(seq.quotient, big(&c, 1, 1));
        assert_eq!(ext1_dim(&big(&c, 1, 1), &big(&c, 3, 1)).unwrap(), 1);
    }

    #[test]
    fn local_sequence_examples() {
        let c = ctx(3);
        let lambda = big(&c, 1, 1);
        let s = local_sequence(&c, &lambda).unwrap();
        assert_eq!((s.a_prime.clone(), s.a_bar.is_zero(), s.a_dblprime.is_zero()), (lambda.clone(), true, true));

        let rho = big(&c, 3, 1);
        let s = local_sequence(&c, &rho).unwrap();
        assert!(s.a_prime.is_zero());
        assert_eq!(s.a_bar, big(&c, 1, 2));
        assert_eq!(s.a_dblprime, lambda);

        let a = big(&c, 1, 3);
        let s = local_sequence(&c, &a).unwrap();
        assert!(s.a_prime.is_zero() && s.a_dblprime.is_zero());
        assert_eq!(s.a_bar, a);
        assert_eq!(hom_dim(&lambda, &a).unwrap(), 0);
        assert_eq!(ext1_dim(&lambda, &a).unwrap(), 0);
        assert!(s.holds(&c));
    }

    #[test]
    fn local_sequence_json() {
        let c = ctx(2);
        let s = local_sequence(&c, &big(&c, 2, 1)).unwrap();
        let v = s.to_json();
        assert_eq!(v["A_dblprime"], json!([{"point": "1", "top": 1, "len": 1}]));
        assert_eq!(v["A_prime"], json!([]));
    }

    #[test]
    fn perp_examples() {
        let c = ctx(3);
        let flags = perp_membership(&c, &big(&c, 1, 1)).unwrap();
        assert_eq!(flags, PerpFlags { right_perp_lambda: false, left_perp_rho: false });
        let flags = perp_membership(&c, &big(&c, 1, 3)).unwrap();
        assert_eq!(flags, PerpFlags { right_perp_lambda: true, left_perp_rho: true });
        // Hom(S_1, S_2) = 0 and Ext¹(S_1, S_2) = Hom(S_2, S_3) = 0
        let s2 = big(&c, 2, 1);
        assert_eq!(hom_dim(&big(&c, 1, 1), &s2).unwrap(), 0);
        assert_eq!(hom_dim(&s2, &big(&c, 3, 1)).unwrap(), 0);
        let flags = perp_membership(&c, &s2).unwrap();
        assert_eq!(flags, PerpFlags { right_perp_lambda: true, left_perp_rho: true });
        assert!(in_image(&c, &s2).unwrap());
    }

    #[test]
    fn perp_flags_agree_with_local_sequence() {
        for p in 2..=4 {
            let c = ctx(p);
            for a in objects_up_to(c.big_point(), 5) {
                let flags = perp_membership(&c, &a).unwrap();
                assert_eq!(flags.right_perp_lambda, flags.left_perp_rho, "{a}");
                assert_eq!(flags.right_perp_lambda, in_image(&c, &a).unwrap(), "{a}");
            }
        }
    }

    #[test]
    fn length_formulas() {
        let c = ctx(4);
        for b in objects_up_to(c.small_point(), 5) {
            let bars = b.composition_factors()[c.s_bar() - 1];
            assert_eq!(expand(&c, &b).unwrap().length(), b.length() + bars);
        }
        for a in objects_up_to(c.big_point(), 5) {
            let lambdas = a.composition_factors()[0];
            assert_eq!(contract(&c, &a).unwrap().length(), a.length() - lambdas);
        }
    }
}
