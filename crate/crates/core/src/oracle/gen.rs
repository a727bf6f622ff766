//! Seeded random generation of accepted CaTT and MCaTT judgments.
//!
//! Contexts are grown one binder at a time. For each context a pool of typed
//! terms is built from its variables and the stock heads of [`library`],
//! nested up to the configured depth. Substitutions between two generated
//! contexts are found by backtracking over the source pool. Everything
//! returned has been accepted by the kernel.

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kernel::Checker;
use crate::library;
use crate::subst::Substitutable;
use crate::syntax::{Ctx, Head, Sub, TheoryId, Tm, Ty, Var};
use crate::translate::desusp_ctx;

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub seed: u64,
    pub contexts: usize,
    pub max_binders: usize,
    pub max_depth: usize,
    /// Stop looking for substitutions once this many are found.
    pub subs: usize,
    /// Most pairs of contexts tried when looking for substitutions.
    pub sub_attempts: usize,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig { seed: 0x5eed, contexts: 48, max_binders: 7, max_depth: 2, subs: 1100, sub_attempts: 6000 }
    }
}

/// `Δ ⊢ σ : Γ`, with indices into [`Universe::contexts`].
#[derive(Clone, Debug)]
pub struct SubEntry {
    pub delta: usize,
    pub sub: Sub,
    pub gamma: usize,
}

#[derive(Clone, Debug)]
pub struct Universe {
    pub theory: TheoryId,
    pub contexts: Vec<Ctx>,
    /// `Γ ⊢ A`
    pub types: Vec<(usize, Ty)>,
    /// `Γ ⊢ t : A` with `A` the inferred type.
    pub terms: Vec<(usize, Tm, Ty)>,
    pub subs: Vec<SubEntry>,
}

/// Terms of a fixed context grouped by their normal type, in insertion order.
#[derive(Default)]
struct Pool {
    index: HashMap<Ty, usize>,
    groups: Vec<(Ty, Vec<(Tm, usize)>)>,
}

const POOL_CAP: usize = 6;
const BACKTRACK_BUDGET: usize = 400;

impl Pool {
    fn insert(&mut self, ty: Ty, tm: Tm, depth: usize) {
        let i = *self.index.entry(ty.clone()).or_insert_with(|| {
            self.groups.push((ty, Vec::new()));
            self.groups.len() - 1
        });
        let group = &mut self.groups[i].1;
        if group.len() < POOL_CAP && !group.iter().any(|(t, _)| *t == tm) {
            group.push((tm, depth));
        }
    }

    fn get(&self, ty: &Ty, below: usize) -> Vec<&Tm> {
        self.index
            .get(ty)
            .map(|&i| self.groups[i].1.iter().filter(|(_, d)| *d < below).map(|(t, _)| t).collect())
            .unwrap_or_default()
    }

    fn entries(&self) -> impl Iterator<Item = (&Ty, &Tm)> {
        self.groups.iter().flat_map(|(ty, ts)| ts.iter().map(move |(t, _)| (ty, t)))
    }
}

struct Gen {
    rng: ChaCha8Rng,
    checker: Checker,
    heads: Vec<Arc<Head>>,
    max_depth: usize,
}

impl Gen {
    fn theory(&self) -> TheoryId {
        self.checker.theory()
    }

    /// Backtracking search for `Δ ⊢ σ : Θ` with components drawn from `pool`.
    fn fill(&mut self, delta: &Ctx, pool: &Pool, target: &Ctx, below: usize) -> Option<Sub> {
        let mut budget = BACKTRACK_BUDGET;
        let mut sub = Sub::new();
        if self.fill_from(delta, pool, target, below, &mut sub, &mut budget) {
            Some(sub)
        } else {
            None
        }
    }

    fn fill_from(
        &mut self,
        delta: &Ctx,
        pool: &Pool,
        target: &Ctx,
        below: usize,
        sub: &mut Sub,
        budget: &mut usize,
    ) -> bool {
        let i = sub.len();
        if i == target.len() {
            return true;
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let (x, a) = &target.bindings()[i];
        let Ok(expected) = a.apply(sub) else { return false };
        let expected = self.checker.normal_ty(delta, &expected);
        let mut candidates: Vec<Tm> = pool.get(&expected, below).into_iter().cloned().collect();
        candidates.shuffle(&mut self.rng);
        for t in candidates {
            sub.push(x.clone(), t);
            if self.fill_from(delta, pool, target, below, sub, budget) {
                return true;
            }
            *sub = sub.prefix(i);
        }
        false
    }

    fn pool(&mut self, ctx: &Ctx, max_depth: usize) -> Pool {
        let mut pool = Pool::default();
        for (x, a) in ctx.iter() {
            pool.insert(self.checker.normal_ty(ctx, a), Tm::Var(x.clone()), 0);
        }
        if self.theory().has_unit() {
            pool.insert(Ty::Unit, Tm::Unit, 0);
        }
        for depth in 1..=max_depth {
            for h in self.heads.clone() {
                let target = if self.theory() == TheoryId::Mcatt { desusp_ctx(h.ps()) } else { h.ps().clone() };
                for _ in 0..3 {
                    let Some(args) = self.fill(ctx, &pool, &target, depth) else { break };
                    let tm = Tm::Coh(Arc::clone(&h), args);
                    if let Ok(ty) = self.checker.infer_tm(ctx, &tm) {
                        pool.insert(ty, tm, depth);
                    }
                }
            }
        }
        pool
    }

    fn binder_type(&mut self, ctx: &Ctx, pool: &Pool) -> Ty {
        let unit = self.theory().has_unit();
        let roll: f64 = self.rng.gen();
        if roll < 0.3 || ctx.is_empty() {
            return if unit && self.rng.gen_bool(0.2) { Ty::unit_obj() } else { Ty::Obj };
        }
        if unit && roll < 0.42 {
            return Ty::Unit;
        }
        // mostly bases inhabited by variables, and variable end points
        let with_vars: Vec<&Ty> =
            pool.groups.iter().filter(|(_, ts)| ts.iter().any(|(_, d)| *d == 0)).map(|(ty, _)| ty).collect();
        let any: Vec<&Ty> = pool.groups.iter().map(|(ty, _)| ty).collect();
        let bases = if self.rng.gen_bool(0.75) { with_vars } else { any };
        let base = (*bases.choose(&mut self.rng).expect("pool has variables")).clone();
        let ends = pool.get(&base, self.max_depth + 1);
        let vars: Vec<&Tm> = ends.iter().copied().filter(|t| !matches!(t, Tm::Coh(..))).collect();
        let mut pick = || {
            if !vars.is_empty() && self.rng.gen_bool(0.85) {
                (*vars.choose(&mut self.rng).unwrap()).clone()
            } else {
                (*ends.choose(&mut self.rng).expect("groups are inhabited")).clone()
            }
        };
        let t = pick();
        let u = pick();
        Ty::hom(base, t, u)
    }

    fn context(&mut self, max_binders: usize) -> Ctx {
        let n = self.rng.gen_range(1..=max_binders);
        let mut ctx = Ctx::new();
        let mut pool = self.pool(&ctx, 1);
        for i in 0..n {
            let a = self.binder_type(&ctx, &pool);
            let next = ctx.extended(Var::new(&format!("x{i}")), a);
            if self.checker.check_ctx(&next).is_ok() {
                ctx = next;
                pool = self.pool(&ctx, 1);
            }
        }
        ctx
    }
}

/// A random universe of accepted judgments; `theory` is CATT or MCATT.
pub fn generate(theory: TheoryId, cfg: &GenConfig) -> Universe {
    assert!(theory.has_coherences(), "generation needs a theory with coherences");
    let seed = cfg.seed ^ (theory as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    let heads = library::all().into_iter().map(|h| if theory == TheoryId::Catt { h } else { h.with_theory(theory) });
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
        checker: Checker::new(theory),
        heads: heads.collect(),
        max_depth: cfg.max_depth,
    };
    let mut u = Universe { theory, contexts: Vec::new(), types: Vec::new(), terms: Vec::new(), subs: Vec::new() };
    let mut pools = Vec::new();
    while u.contexts.len() < cfg.contexts {
        let ctx = g.context(cfg.max_binders);
        if ctx.is_empty() || u.contexts.contains(&ctx) {
            continue;
        }
        let pool = g.pool(&ctx, cfg.max_depth);
        let i = u.contexts.len();
        for (_, a) in ctx.iter() {
            u.types.push((i, a.clone()));
        }
        for _ in 0..3 {
            let a = g.binder_type(&ctx, &pool);
            if g.checker.check_ty(&ctx, &a).is_ok() {
                u.types.push((i, a));
            }
        }
        for (ty, tm) in pool.entries() {
            u.terms.push((i, tm.clone(), ty.clone()));
        }
        u.contexts.push(ctx);
        pools.push(pool);
    }
    let n = u.contexts.len();
    for _ in 0..cfg.sub_attempts {
        if u.subs.len() >= cfg.subs {
            break;
        }
        let (d, t) = (g.rng.gen_range(0..n), g.rng.gen_range(0..n));
        let target = u.contexts[t].clone();
        if let Some(sub) = g.fill(&u.contexts[d], &pools[d], &target, cfg.max_depth + 1) {
            if g.checker.check_sub(&u.contexts[d], &sub, &target).is_ok() {
                u.subs.push(SubEntry { delta: d, sub, gamma: t });
            }
        }
    }
    u
}
