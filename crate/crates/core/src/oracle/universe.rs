//! The finite universe of judgments on which kernel and oracle are compared.
//!
//! Contexts use the names `v0, v1, …`. Each accepted context is extended by
//! every candidate binder type: `*`, `1`, and `Hom(B, a, b)` with `B` among
//! `*`, `1` and the types already declared and `a, b` among the variables and
//! `()`. Rejected extensions are judged but not extended further. Types,
//! terms, substitutions and side conditions are drawn from the smaller
//! accepted contexts; coherence terms use heads whose index has only variable
//! end points, applied to every assignment of variables and `()`.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::enumerate::{canon_var, enumerate_ps};
use super::search::{Goal, Oracle, Outcome};
use crate::kernel::{self, Checker};
use crate::ps::check_ps;
use crate::subst::Substitutable;
use crate::syntax::{CohKind, Ctx, Head, Sub, TheoryId, Tm, Ty, Var};
use crate::translate::desusp_ctx;

#[derive(Clone, Debug)]
pub struct AgreementConfig {
    pub theories: Vec<TheoryId>,
    /// Largest context judged.
    pub max_binders: usize,
    /// Largest context in which types and terms are judged.
    pub term_binders: usize,
    /// Largest source and target of a judged substitution.
    pub sub_binders: usize,
    /// Largest coherence index applied in term judgments.
    pub head_binders: usize,
    /// A head is applied in a context only if this bounds its argument assignments.
    pub max_assignments: usize,
    pub fuel: u32,
}

impl Default for AgreementConfig {
    fn default() -> AgreementConfig {
        AgreementConfig {
            theories: vec![TheoryId::Glob, TheoryId::Catt, TheoryId::GlobUnit, TheoryId::Mcatt],
            max_binders: 5,
            term_binders: 3,
            sub_binders: 2,
            head_binders: 5,
            max_assignments: 260,
            fuel: 64,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Disagreement {
    pub theory: TheoryId,
    pub goal: Goal,
    pub kernel: bool,
    pub oracle: Outcome,
}

#[derive(Clone, Debug, Default)]
pub struct AgreementReport {
    /// Judgments and accepted judgments per theory and form.
    pub counts: BTreeMap<(&'static str, &'static str), (usize, usize)>,
    pub disagreements: Vec<Disagreement>,
}

impl AgreementReport {
    pub fn judgments(&self) -> usize {
        self.counts.values().map(|c| c.0).sum()
    }

    pub fn accepted(&self) -> usize {
        self.counts.values().map(|c| c.1).sum()
    }

    pub fn ok(&self) -> bool {
        self.disagreements.is_empty()
    }
}

fn form(g: &Goal) -> &'static str {
    match g {
        Goal::Ctx(_) => "ctx",
        Goal::Ty(..) => "ty",
        Goal::Tm(..) => "tm",
        Goal::Sub(..) => "sub",
        Goal::Ps(_) | Goal::PsDangling(..) => "ps",
        Goal::Op(..) => "op",
        Goal::Eq(..) => "eq",
    }
}

/// The kernel's verdict, checking presupposed contexts first.
pub fn kernel_verdict(k: &Checker, g: &Goal) -> bool {
    match g {
        Goal::Ctx(c) => k.check_ctx(c).is_ok(),
        Goal::Ty(c, a) => k.check_ctx(c).and_then(|_| k.check_ty(c, a)).is_ok(),
        Goal::Tm(c, t, a) => k.check_ctx(c).and_then(|_| k.check_tm(c, t, a)).is_ok(),
        Goal::Sub(d, s, c) => k.check_ctx(d).and_then(|_| k.check_ctx(c)).and_then(|_| k.check_sub(d, s, c)).is_ok(),
        Goal::Ps(c) => check_ps(c).is_ok(),
        Goal::PsDangling(..) => panic!("dangling ps judgments have no kernel counterpart"),
        Goal::Op(c, a) => kernel::check_op_side(c, a).accepted(),
        Goal::Eq(c, a) => kernel::check_eq_side(c, a).accepted(),
    }
}

/// Candidate end points: the variables and `()`.
fn atoms(ctx: &Ctx) -> Vec<Tm> {
    ctx.vars().map(|x| Tm::Var(x.clone())).chain([Tm::Unit]).collect()
}

fn candidate_types(ctx: &Ctx) -> Vec<Ty> {
    let mut bases = vec![Ty::Obj, Ty::Unit];
    for (_, a) in ctx.iter() {
        if !bases.contains(a) {
            bases.push(a.clone());
        }
    }
    let ends = atoms(ctx);
    let mut out = bases.clone();
    for b in &bases {
        for t in &ends {
            for u in &ends {
                out.push(Ty::hom(b.clone(), t.clone(), u.clone()));
            }
        }
    }
    out
}

/// Types of coherence indices: Homs whose base is `*` or declared and whose
/// end points are variables.
fn index_types(ps: &Ctx) -> Vec<Ty> {
    candidate_types(ps)
        .into_iter()
        .filter(|a| match a {
            Ty::Hom(b, t, u) => **b != Ty::Unit && t.as_var().is_some() && u.as_var().is_some(),
            _ => false,
        })
        .collect()
}

/// Every assignment of `atoms` to the binders of `target`.
fn assignments(target: &Ctx, atoms: &[Tm]) -> Vec<Sub> {
    let mut out = vec![Sub::new()];
    for x in target.vars() {
        out = out
            .into_iter()
            .flat_map(|s| {
                atoms.iter().map(move |t| {
                    let mut s = s.clone();
                    s.push(x.clone(), t.clone());
                    s
                })
            })
            .collect();
    }
    out
}

struct Runner {
    oracle: Oracle,
    fuel: u32,
    report: AgreementReport,
}

impl Runner {
    fn judge(&mut self, k: &Checker, g: Goal) -> bool {
        let theory = k.theory();
        let kv = kernel_verdict(k, &g);
        self.oracle.trim(1 << 18);
        let ov = self.oracle.search(theory, &g, self.fuel);
        let entry = self.report.counts.entry((theory.as_str(), form(&g))).or_default();
        entry.0 += 1;
        entry.1 += kv as usize;
        if (ov == Outcome::Found) != kv || ov == Outcome::OutOfFuel {
            self.report.disagreements.push(Disagreement { theory, goal: g, kernel: kv, oracle: ov });
        }
        kv
    }
}

/// Heads for term judgments: every valid index with variable end points and
/// at most `max_binders` binders, plus two invalid ones.
fn heads(theory: TheoryId, max_binders: usize) -> Vec<Arc<Head>> {
    let mut out = Vec::new();
    for ps in enumerate_ps(max_binders) {
        for a in index_types(&ps) {
            for kind in [CohKind::Op, CohKind::Eq] {
                let ok = match kind {
                    CohKind::Op => kernel::check_op_side(&ps, &a).accepted(),
                    CohKind::Eq => kernel::check_eq_side(&ps, &a).accepted(),
                };
                if ok {
                    out.push(Head::new(kind, theory, ps.clone(), a.clone(), None));
                }
            }
        }
    }
    let x = || Tm::Var(canon_var(0));
    let loop_ty = Ty::hom(Ty::Obj, x(), x());
    let two_points = Ctx::from_bindings(vec![(canon_var(0), Ty::Obj), (canon_var(1), Ty::Obj)]);
    out.push(Head::new(CohKind::Op, theory, Ctx::from_bindings(vec![(canon_var(0), Ty::Obj)]), loop_ty, None));
    out.push(Head::new(CohKind::Eq, theory, two_points, Ty::hom(Ty::Obj, x(), Tm::Var(canon_var(1))), None));
    out
}

fn run_theory(theory: TheoryId, cfg: &AgreementConfig, r: &mut Runner) {
    let k = Checker::new(theory);
    // contexts, layer by layer
    let mut accepted: Vec<Ctx> = Vec::new();
    let mut layer = vec![Ctx::new()];
    r.judge(&k, Goal::Ctx(Ctx::new()));
    accepted.push(Ctx::new());
    for n in 0..cfg.max_binders {
        let mut next = Vec::new();
        for ctx in &layer {
            let mut exts: Vec<(Var, Ty)> = candidate_types(ctx).into_iter().map(|a| (canon_var(n), a)).collect();
            if n > 0 {
                exts.push((canon_var(0), Ty::Obj));
            }
            for (x, a) in exts {
                let c = ctx.extended(x, a);
                if r.judge(&k, Goal::Ctx(c.clone())) {
                    next.push(c);
                }
            }
        }
        accepted.extend(next.iter().cloned());
        layer = next;
    }
    if theory == TheoryId::Catt {
        for c in &accepted {
            r.judge(&k, Goal::Ps(c.clone()));
        }
        for c in accepted.iter().filter(|c| c.len() <= 3).chain(&enumerate_ps(cfg.max_binders)) {
            for a in index_types(c) {
                r.judge(&k, Goal::Op(c.clone(), a.clone()));
                r.judge(&k, Goal::Eq(c.clone(), a));
            }
        }
    }
    let heads = if theory.has_coherences() {
        heads(theory, cfg.head_binders)
    } else {
        heads(TheoryId::Catt, 3)
    };
    for delta in accepted.iter().filter(|c| c.len() <= cfg.term_binders) {
        let tys = candidate_types(delta);
        for a in &tys {
            r.judge(&k, Goal::Ty(delta.clone(), a.clone()));
        }
        for t in atoms(delta) {
            for a in &tys {
                r.judge(&k, Goal::Tm(delta.clone(), t.clone(), a.clone()));
            }
        }
        let atoms = atoms(delta);
        for h in &heads {
            if (atoms.len() as f64).powi(h.ps().len() as i32) > cfg.max_assignments as f64 {
                continue;
            }
            let target = if h.theory() == TheoryId::Mcatt { desusp_ctx(h.ps()) } else { h.ps().clone() };
            for args in assignments(&target, &atoms) {
                let tm = Tm::Coh(Arc::clone(h), args.clone());
                let claimed = match k.infer_tm(delta, &tm) {
                    Ok(ty) => ty,
                    Err(_) => h.ty().apply(&args).unwrap_or(Ty::Obj),
                };
                r.judge(&k, Goal::Tm(delta.clone(), tm.clone(), claimed.clone()));
                if let Ty::Hom(b, t, u) = &claimed {
                    r.judge(&k, Goal::Tm(delta.clone(), tm, Ty::Hom(b.clone(), u.clone(), t.clone())));
                }
            }
        }
    }
    let small: Vec<&Ctx> = accepted.iter().filter(|c| c.len() <= cfg.sub_binders).collect();
    for delta in &small {
        let atoms = atoms(delta);
        for gamma in &small {
            for s in assignments(gamma, &atoms) {
                r.judge(&k, Goal::Sub((*delta).clone(), s, (*gamma).clone()));
            }
        }
    }
}

/// Compares kernel and oracle verdicts on the whole universe.
pub fn agreement(cfg: &AgreementConfig) -> AgreementReport {
    let mut r = Runner { oracle: Oracle::new(), fuel: cfg.fuel, report: AgreementReport::default() };
    for &t in &cfg.theories {
        run_theory(t, cfg, &mut r);
    }
    r.report
}
