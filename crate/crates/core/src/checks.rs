//! Invariant suites run against a weighted line: tube Hom/Ext laws,
//! adjunctions of the expansion functors, quiver rewrites and the graded
//! functors. Every case compares two independently computed sides.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::expansion::{coexpand, connecting_sequence, contract, expand, local_sequence, ExpansionContext};
use crate::extquiver::{contract_at, expand_at, quiver_of};
use crate::field::{Field, FieldSpec, PrimeField, Rationals};
use crate::gradedmod::{
    apply_f, apply_f_lambda, apply_f_rho, hom_dim_mod, in_image_f, random_module, simple_lambda_module,
    structure_module, DegreeWindow, GradedError, GradedRing, RandomModuleConfig, WeightedLineData,
};
use crate::lgroup::Phi;
use crate::planner::{exceptional_points, reduction_plan, Strategy};
use crate::tubecat::{
    ext1_dim, ext_dim, hom_dim, indecomposables_up_to, objects_up_to, oracle, tau, PointDescriptor, TubeObject,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Adjunction,
    Ar,
    Quiver,
    Graded,
}

impl Suite {
    pub const NAMES: [&'static str; 5] = ["all", "adjunction", "ar", "quiver", "graded"];

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "all" => Some(Suite::All),
            "adjunction" => Some(Suite::Adjunction),
            "ar" => Some(Suite::Ar),
            "quiver" => Some(Suite::Quiver),
            "graded" => Some(Suite::Graded),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Adjunction => "adjunction",
            Suite::Ar => "ar",
            Suite::Quiver => "quiver",
            Suite::Graded => "graded",
        }
    }

    fn members(&self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Ar, Suite::Adjunction, Suite::Quiver, Suite::Graded],
            s => vec![*s],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// bound on total length of object pairs in the tube suites
    pub max_len: usize,
    /// window bound `N` for the graded suite
    pub window: i64,
    pub seed: u64,
    /// random modules per graded identity
    pub samples: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { max_len: 6, window: 6, seed: 0, samples: 10 }
    }
}

const KEPT_FAILURES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckCase {
    pub suite: &'static str,
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
    pub failure_count: usize,
}

impl CheckCase {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

impl fmt::Display for CheckCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} [{}] {} ({} checked", self.suite, self.name, self.checked)?;
        if !self.passed() {
            write!(f, ", {} failed; first: {}", self.failure_count, self.failures.join("; "))?;
        }
        write!(f, ")")
    }
}

/// Collects the outcome of one case.
struct Tally {
    suite: &'static str,
    name: String,
    checked: usize,
    failures: Vec<String>,
    failure_count: usize,
}

impl Tally {
    fn new(suite: &'static str, name: impl Into<String>) -> Self {
        Self { suite, name: name.into(), checked: 0, failures: Vec::new(), failure_count: 0 }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(what());
            }
        }
    }

    fn done(self) -> CheckCase {
        CheckCase {
            suite: self.suite,
            name: self.name,
            checked: self.checked,
            failures: self.failures,
            failure_count: self.failure_count,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub cases: Vec<CheckCase>,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.passed()).count()
    }

    pub fn failed(&self) -> usize {
        self.cases.len() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.passed(),
            "failed": self.failed(),
            "cases": self.cases.iter().map(|c| json!({
                "suite": c.suite,
                "name": c.name,
                "checked": c.checked,
                "passed": c.passed(),
                "failures": c.failures,
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn run_suite(suite: Suite, data: &WeightedLineData, opts: &CheckOptions) -> Result<SuiteReport, GradedError> {
    let mut cases = Vec::new();
    let points = exceptional_points(&data.weights);
    for s in suite.members() {
        match s {
            Suite::Ar => {
                for p in &points {
                    cases.extend(ar_cases(p, opts.max_len));
                }
            }
            Suite::Adjunction => {
                for p in points.iter().filter(|p| p.rank() >= 2) {
                    cases.extend(adjunction_cases(p, opts.max_len));
                }
            }
            Suite::Quiver => cases.extend(quiver_cases(data)),
            Suite::Graded => cases.extend(graded_cases(data, opts)?),
            Suite::All => unreachable!("expanded by members()"),
        }
    }
    Ok(SuiteReport { cases })
}

fn point_name(p: &PointDescriptor) -> String {
    format!("point {} (rank {})", p.label, p.rank())
}

/// Pairs of objects at `point` with total length at most `max_len`.
pub fn object_pairs(point: &PointDescriptor, max_len: usize) -> Vec<(TubeObject, TubeObject)> {
    let objs = objects_up_to(point, max_len);
    let mut out = Vec::new();
    for a in &objs {
        for b in &objs {
            if a.length() + b.length() <= max_len {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Ext law for simples, Hom against the overlap count, Ext¹ against the
/// long exact sequence oracle, Serre duality and the AR formula. Ext¹ on the
/// duality side is always the resolution cokernel, never `Hom(-, τ-)`.
pub fn ar_cases(point: &PointDescriptor, max_len: usize) -> Vec<CheckCase> {
    let p = point.rank();
    let name = point_name(point);
    let mut out = Vec::new();

    let mut t = Tally::new("ar", format!("{name}: Ext¹ between simples"));
    for j in 1..=p {
        for k in 1..=p {
            let (sj, sk) = (TubeObject::simple(point, j).unwrap(), TubeObject::simple(point, k).unwrap());
            let expected = usize::from((k + 1) % p == j % p);
            let got = ext1_dim(&sj, &sk).unwrap();
            t.check(got == expected && oracle::simple_ext1(point, j, k) == expected, || {
                format!("ext1(S_{j}, S_{k}) = {got}, expected {expected}")
            });
        }
    }
    out.push(t.done());

    let pairs = object_pairs(point, max_len);
    let mut hom = Tally::new("ar", format!("{name}: Hom equals overlap count"));
    let mut ext = Tally::new("ar", format!("{name}: Ext¹ equals long exact sequence count"));
    let mut serre = Tally::new("ar", format!("{name}: Ext¹(A,B) = Hom(B,τA)"));
    for (a, b) in &pairs {
        let h = hom_dim(a, b).unwrap();
        let o = oracle::overlap_hom(a, b).unwrap();
        hom.check(h == o, || format!("hom({a}, {b}) = {h}, overlap {o}"));
        let e = ext1_dim(a, b).unwrap();
        let l = oracle::les_ext1(a, b).unwrap();
        ext.check(e == l, || format!("ext1({a}, {b}) = {e}, sequence count {l}"));
        // the resolution side never touches τ
        let r = oracle::resolution_ext1(a, b).unwrap();
        let d = hom_dim(b, &tau(a)).unwrap();
        serre.check(r == d, || format!("resolution ext1({a}, {b}) = {r}, hom(B, τA) = {d}"));
    }
    out.extend([hom.done(), ext.done(), serre.done()]);

    if p >= 2 {
        let ctx = ExpansionContext::new(point).expect("rank >= 2");
        let (lambda, rho) = (ctx.lambda_object(), ctx.rho_object());
        let mut ar = Tally::new("ar", format!("{name}: AR formula against S_λ, S_ρ"));
        let e = oracle::resolution_ext1(&lambda, &rho).unwrap();
        ar.check(e == 1, || format!("ext1(S_λ, S_ρ) = {e}"));
        for a in indecomposables_up_to(point, max_len) {
            let (l1, r1) = (oracle::resolution_ext1(&a, &rho).unwrap(), hom_dim(&lambda, &a).unwrap());
            ar.check(l1 == r1, || format!("ext1({a}, S_ρ) = {l1}, hom(S_λ, {a}) = {r1}"));
            let (l2, r2) = (oracle::resolution_ext1(&lambda, &a).unwrap(), hom_dim(&a, &rho).unwrap());
            ar.check(l2 == r2, || format!("ext1(S_λ, {a}) = {l2}, hom({a}, S_ρ) = {r2}"));
        }
        out.push(ar.done());
    }
    out
}

/// Round trips of the expansion functors, the local sequence and the
/// adjunctions `Ext^n(i_λ A, B) = Ext^n(A, i B)`, `Ext^n(i B, A) = Ext^n(B, i_ρ A)`.
pub fn adjunction_cases(point: &PointDescriptor, max_len: usize) -> Vec<CheckCase> {
    let ctx = ExpansionContext::new(point).expect("rank >= 2");
    let name = point_name(point);
    let (big, small) = (ctx.big_point().clone(), ctx.small_point().clone());
    let mut out = Vec::new();

    let mut rt = Tally::new("adjunction", format!("{name}: i_λ i = id and i_ρ i = id"));
    for b in objects_up_to(&small, max_len) {
        let ib = expand(&ctx, &b).unwrap();
        let back_l = contract(&ctx, &ib).unwrap();
        let back_r = coexpand(&ctx, &ib).unwrap();
        rt.check(back_l == b && back_r == b, || format!("{b}: i_λ i = {back_l}, i_ρ i = {back_r}"));
    }
    out.push(rt.done());

    let mut loc = Tally::new("adjunction", format!("{name}: local sequence"));
    for a in objects_up_to(&big, max_len) {
        let seq = local_sequence(&ctx, &a).unwrap();
        loc.check(seq.holds(&ctx), || format!("{a}: {}", seq.to_json()));
    }
    out.push(loc.done());

    let conn = connecting_sequence(&ctx);
    let mut cs = Tally::new("adjunction", format!("{name}: connecting sequence does not split"));
    let mid = conn.middle.single_summand();
    cs.check(mid.map(|s| s.len) == Some(2), || format!("i S̄ = {}", conn.middle));
    let e = ext1_dim(&conn.quotient, &conn.sub).unwrap();
    cs.check(e == 1, || format!("ext1(S_λ, S_ρ) = {e}"));
    out.push(cs.done());

    let bigs = objects_up_to(&big, max_len);
    let smalls = objects_up_to(&small, max_len);
    let mut left = Tally::new("adjunction", format!("{name}: Ext^n(i_λ A, B) = Ext^n(A, i B), n = 0, 1"));
    let mut right = Tally::new("adjunction", format!("{name}: Ext^n(i B, A) = Ext^n(B, i_ρ A), n = 0, 1"));
    for a in &bigs {
        let (la, ra) = (contract(&ctx, a).unwrap(), coexpand(&ctx, a).unwrap());
        for b in smalls.iter().filter(|b| a.length() + b.length() <= max_len) {
            let ib = expand(&ctx, b).unwrap();
            for n in 0..=1 {
                let (x, y) = (ext_dim(n, &la, b).unwrap(), ext_dim(n, a, &ib).unwrap());
                left.check(x == y, || format!("n={n}, A={a}, B={b}: {x} vs {y}"));
                let (x, y) = (ext_dim(n, &ib, a).unwrap(), ext_dim(n, b, &ra).unwrap());
                right.check(x == y, || format!("n={n}, A={a}, B={b}: {x} vs {y}"));
            }
        }
    }
    out.extend([left.done(), right.done()]);
    out
}

/// Quiver contraction against the smaller tube, both round trips, and the
/// full reduction chain.
pub fn quiver_cases(data: &WeightedLineData) -> Vec<CheckCase> {
    let mut out = Vec::new();
    for point in exceptional_points(&data.weights).iter().filter(|p| p.rank() >= 2) {
        let ctx = ExpansionContext::new(point).expect("rank >= 2");
        let name = point_name(point);
        let q = quiver_of(std::slice::from_ref(point));
        let q_small = quiver_of(std::slice::from_ref(ctx.small_point()));
        let mut t = Tally::new("quiver", format!("{name}: contraction gives the rank {} quiver", point.rank() - 1));
        let contracted = contract_at(&q, &ctx);
        t.check(contracted.as_ref().ok() == Some(&q_small), || format!("{contracted:?}"));
        let expanded = expand_at(&q_small, &ctx);
        t.check(expanded.as_ref().ok() == Some(&q), || format!("expand: {expanded:?}"));
        let rt = contracted.and_then(|c| expand_at(&c, &ctx));
        t.check(rt.as_ref().ok() == Some(&q), || "expand after contract".to_string());
        let rt2 = expand_at(&q_small, &ctx).and_then(|e| contract_at(&e, &ctx));
        t.check(rt2.as_ref().ok() == Some(&q_small), || "contract after expand".to_string());
        out.push(t.done());
    }

    let mut chain = Tally::new("quiver", "reduction chain ends in one loop per point");
    match reduction_plan(data, &Strategy::LargestFirst).and_then(|p| Ok((p.quiver_trace()?, p))) {
        Ok((trace, plan)) => {
            chain.check(plan.len() as i64 == data.reduction_length(), || format!("{} steps", plan.len()));
            for (k, w) in trace.windows(2).enumerate() {
                chain.check(w[0].vertex_count() == w[1].vertex_count() + 1, || format!("step {}", k + 1));
            }
            let last = trace.last().expect("trace starts with the initial quiver");
            let loops = last.vertices().all(|(v, _)| last.valuation(v, v).s == 1);
            chain.check(
                loops && last.vertex_count() == data.weights.len() && last.arrow_count() == data.weights.len(),
                || format!("final quiver {}", last.to_json()),
            );
        }
        Err(e) => chain.check(false, || e.to_string()),
    }
    out.push(chain.done());
    out
}

pub fn graded_cases(data: &WeightedLineData, opts: &CheckOptions) -> Result<Vec<CheckCase>, GradedError> {
    match data.field {
        FieldSpec::Prime(q) => graded_cases_over(PrimeField::new(q)?, data, opts),
        FieldSpec::Rationals => graded_cases_over(Rationals, data, opts),
    }
}

/// The graded identities at every point `j` with `p_j >= 2`, comparing
/// `S(p', λ)` and `S(p, λ)` modules on the window `0 <= c <= N`.
pub fn graded_cases_over<F: Field>(
    field: F,
    data: &WeightedLineData,
    opts: &CheckOptions,
) -> Result<Vec<CheckCase>, GradedError> {
    let ring = GradedRing::new(field, data)?;
    let n = opts.window;
    let w = DegreeWindow::bounded(ring.weights(), n);
    let cfg = RandomModuleConfig::default();
    let mut out = Vec::new();
    for j in 1..=data.weights.len() {
        if data.weights.as_slice()[j - 1] < 2 {
            continue;
        }
        let small = ring.reduced_at(j)?;
        let ws = DegreeWindow::bounded(small.weights(), n);
        let phi = Phi::new(ring.weights(), j)?;
        let tag = format!("j={j}, {} -> {}, N={n}", small.weights(), ring.weights());
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(j as u64));

        let mut free = Tally::new("graded", format!("{tag}: F O'(l) = O(φ(l))"));
        for l in small.group().elements_between(-1, 1) {
            let fo = apply_f(&structure_module(&small, &l, &ws), j)?;
            let o = structure_module(&ring, &phi.apply(&l)?, &w);
            let cmp = fo.compare(&o)?;
            free.check(cmp.is_equal(), || format!("l = {l}: {}", cmp.mismatches.join(", ")));
        }
        out.push(free.done());

        let mut ff = Tally::new("graded", format!("{tag}: Hom(F O'(a), F O'(b)) = Hom(O'(a), O'(b))"));
        let sg = small.group();
        let mut twists = vec![sg.zero(), sg.c(1)];
        twists.extend((1..=sg.rank()).map(|i| sg.x(i)));
        twists.dedup();
        for a in &twists {
            for b in &twists {
                let (oa, ob) = (structure_module(&small, a, &ws), structure_module(&small, b, &ws));
                let before = hom_dim_mod(&oa, &ob)?;
                let after = hom_dim_mod(&apply_f(&oa, j)?, &apply_f(&ob, j)?)?;
                ff.check(before == after, || format!("O'({a}) -> O'({b}): {before} vs {after}"));
            }
        }
        out.push(ff.done());

        let mut fl = Tally::new("graded", format!("{tag}: F_λ F = id"));
        let mut fr = Tally::new("graded", format!("{tag}: F_ρ F = id"));
        let mut img = Tally::new("graded", format!("{tag}: F M is valid and in the image of F"));
        for s in 0..opts.samples {
            let m = random_module(&small, &ws, &cfg, &mut rng);
            let fm = apply_f(&m, j)?;
            img.check(fm.validate().is_valid() && in_image_f(&fm, j)?, || format!("sample {s}"));
            let cmp = apply_f_lambda(&fm, j)?.compare(&m)?;
            fl.check(cmp.is_equal(), || format!("sample {s}: {}", cmp.mismatches.join(", ")));
            let cmp = apply_f_rho(&fm, j)?.compare(&m)?;
            fr.check(cmp.is_equal(), || format!("sample {s}: {}", cmp.mismatches.join(", ")));
        }
        out.extend([fl.done(), fr.done(), img.done()]);

        let mut tw = Tally::new("graded", format!("{tag}: F_ρ N = F_λ(N(x_j))(-x_j)"));
        let xj = ring.group().x(j);
        let minus_xj = small.group().negate(&small.group().x(j))?;
        for s in 0..opts.samples {
            let nmod = random_module(&ring, &w, &cfg, &mut rng);
            let direct = apply_f_rho(&nmod, j)?;
            let via = apply_f_lambda(&nmod.twist(&xj), j)?.twist(&minus_xj);
            let valid = direct.validate().is_valid() && apply_f_lambda(&nmod, j)?.validate().is_valid();
            let cmp = direct.compare(&via)?;
            tw.check(cmp.is_equal() && valid, || format!("sample {s}: {}", cmp.mismatches.join(", ")));
        }
        out.push(tw.done());

        let mut kill = Tally::new("graded", format!("{tag}: F_λ S_λ = 0, F_ρ S_λ(-x_j) = 0"));
        let s_lambda = simple_lambda_module(&ring, j, &w)?.quotient;
        kill.check(s_lambda.validate().is_valid() && !s_lambda.is_zero(), || "S_λ is invalid or zero".into());
        kill.check(apply_f_lambda(&s_lambda, j)?.is_zero(), || "F_λ S_λ != 0".into());
        let shifted = s_lambda.twist(&ring.group().negate(&xj)?);
        kill.check(apply_f_rho(&shifted, j)?.is_zero(), || "F_ρ S_λ(-x_j) != 0".into());
        kill.check(!in_image_f(&s_lambda, j)?, || "S_λ is in the image of F".into());
        out.push(kill.done());
    }
    Ok(out)
}
