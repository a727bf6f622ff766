use std::collections::{BTreeSet, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use super::error::{ErrorCode, KernelError, Rule};
use super::normalize::{normalize_sub, normalize_tm, normalize_ty};
use crate::ps::{check_ps, src, tgt};
use crate::subst::Substitutable;
use crate::syntax::{CohKind, Ctx, Head, Sub, TheoryId, Tm, Ty, Var, VarSet};
use crate::translate::{desusp_ctx, desusp_ty};

type Result<T> = std::result::Result<T, KernelError>;

fn err(code: ErrorCode, rule: Rule, detail: impl Into<String>) -> KernelError {
    KernelError::new(code, rule, detail)
}

fn show_set(s: &BTreeSet<Var>) -> String {
    let names: Vec<&str> = s.iter().map(Var::name).collect();
    format!("{{{}}}", names.join(", "))
}

/// Decides the judgments of one theory.
///
/// Validity of a coherence head depends only on its index, so accepted heads
/// are remembered for the lifetime of the checker.
#[derive(Debug)]
pub struct Checker {
    theory: TheoryId,
    valid_heads: Mutex<HashSet<Arc<Head>>>,
    catt: OnceLock<Box<Checker>>,
}

impl Clone for Checker {
    fn clone(&self) -> Checker {
        Checker::new(self.theory)
    }
}

impl Checker {
    pub fn new(theory: TheoryId) -> Checker {
        Checker { theory, valid_heads: Mutex::default(), catt: OnceLock::new() }
    }

    pub fn theory(&self) -> TheoryId {
        self.theory
    }

    /// The CaTT checker used for coherence indices.
    fn catt(&self) -> &Checker {
        if self.theory == TheoryId::Catt {
            self
        } else {
            self.catt.get_or_init(|| Box::new(Checker::new(TheoryId::Catt)))
        }
    }

    pub fn check_ctx(&self, ctx: &Ctx) -> Result<()> {
        let mut prefix = Ctx::new();
        for (x, a) in ctx.iter() {
            if prefix.contains(x) {
                return Err(err(ErrorCode::DuplicateVar, Rule::Ce, format!("variable {x} is declared twice")));
            }
            let unbound: BTreeSet<Var> = a.var_set().into_iter().filter(|v| !prefix.contains(v)).collect();
            if !unbound.is_empty() {
                return Err(err(
                    ErrorCode::ScopeError,
                    Rule::Ce,
                    format!("type of {x} mentions undeclared {}", show_set(&unbound)),
                ));
            }
            self.check_ty(&prefix, a)?;
            prefix.push(x.clone(), a.clone());
        }
        Ok(())
    }

    /// `Γ ⊢ A`, assuming `Γ ⊢`.
    pub fn check_ty(&self, ctx: &Ctx, ty: &Ty) -> Result<()> {
        match ty {
            Ty::Obj => Ok(()),
            Ty::Unit if self.theory.has_unit() => Ok(()),
            Ty::Unit => Err(err(
                ErrorCode::TheoryViolation,
                Rule::UnitIntro,
                format!("the unit type is not part of {}", self.theory.as_str()),
            )),
            Ty::Hom(a, t, u) => {
                self.check_ty(ctx, a)?;
                for side in [t, u] {
                    let b = self.infer_tm(ctx, side)?;
                    if !self.ty_defeq(ctx, &b, a) {
                        return Err(err(
                            ErrorCode::TypeMismatch,
                            Rule::HomIntro,
                            format!("{side} has type {b} but the base of the Hom type is {a}"),
                        ));
                    }
                }
                Ok(())
            }
        }
    }

    /// `Γ ⊢ t : A`, assuming `Γ ⊢`. In the unit theories the result is normalized.
    pub fn infer_tm(&self, ctx: &Ctx, tm: &Tm) -> Result<Ty> {
        match tm {
            Tm::Var(x) => match ctx.lookup(x) {
                Some(a) => Ok(self.normal_ty(ctx, a)),
                None => Err(err(ErrorCode::UnboundVariable, Rule::Var, format!("variable {x} is not in the context"))),
            },
            Tm::Unit if self.theory.has_unit() => Ok(Ty::Unit),
            Tm::Unit => Err(err(
                ErrorCode::TheoryViolation,
                Rule::UnitConstIntro,
                format!("the unit constant is not part of {}", self.theory.as_str()),
            )),
            Tm::Coh(h, args) => self.infer_coh(ctx, h, args),
        }
    }

    /// `Γ ⊢ t : A` in checking mode, assuming `Γ ⊢`.
    pub fn check_tm(&self, ctx: &Ctx, tm: &Tm, ty: &Ty) -> Result<()> {
        self.check_ty(ctx, ty)?;
        let found = self.infer_tm(ctx, tm)?;
        if !self.ty_defeq(ctx, &found, ty) {
            return Err(err(ErrorCode::TypeMismatch, Rule::Conv, format!("{tm} has type {found}, expected {ty}")));
        }
        Ok(())
    }

    fn infer_coh(&self, ctx: &Ctx, h: &Arc<Head>, args: &Sub) -> Result<Ty> {
        let rule = intro_rule(h);
        let name = h.name().unwrap_or("coherence");
        if !self.theory.has_coherences() || h.theory() != self.theory {
            return Err(err(
                ErrorCode::TheoryViolation,
                rule,
                format!("{name} is a {} term and cannot be used in {}", h.theory().as_str(), self.theory.as_str()),
            ));
        }
        self.validate_head(h)?;
        let (target, ty) = match h.theory() {
            TheoryId::Mcatt => (desusp_ctx(h.ps()), desusp_ty(h.ty())),
            _ => (h.ps().clone(), h.ty().clone()),
        };
        self.check_sub(ctx, args, &target).map_err(|e| match e.code {
            ErrorCode::UnboundVariable | ErrorCode::TheoryViolation => e,
            _ => err(ErrorCode::SubstMismatch, rule, format!("arguments of {name}: {e}")),
        })?;
        let ty = ty.apply(args).map_err(|e| KernelError::unbound(rule, e))?;
        Ok(self.normal_ty(ctx, &ty))
    }

    /// Checks the index of a head in CaTT: context, ps-ness, type and side condition.
    pub fn validate_head(&self, h: &Arc<Head>) -> Result<()> {
        if self.valid_heads.lock().unwrap().contains(h) {
            return Ok(());
        }
        let c = self.catt();
        c.check_ctx(h.ps())?;
        check_ps(h.ps())?;
        c.check_ty(h.ps(), h.ty())?;
        match h.kind() {
            CohKind::Op => c.check_op_side(h.ps(), h.ty())?,
            CohKind::Eq => c.check_eq_side(h.ps(), h.ty())?,
        }
        self.valid_heads.lock().unwrap().insert(Arc::clone(h));
        Ok(())
    }

    /// `Δ ⊢ γ : Γ`, assuming `Δ ⊢` and `Γ ⊢`.
    pub fn check_sub(&self, delta: &Ctx, sub: &Sub, gamma: &Ctx) -> Result<()> {
        if sub.len() != gamma.len() {
            let rule = if gamma.is_empty() { Rule::Es } else { Rule::Se };
            return Err(err(
                ErrorCode::ArityMismatch,
                rule,
                format!("substitution has {} components, target context has {}", sub.len(), gamma.len()),
            ));
        }
        for (i, ((x, t), (y, a))) in sub.iter().zip(gamma.iter()).enumerate() {
            if x != y {
                return Err(err(
                    ErrorCode::NameMismatch,
                    Rule::Se,
                    format!("component {} maps {x} but the target binder is {y}", i + 1),
                ));
            }
            let expected = a.apply(&sub.prefix(i)).map_err(|e| KernelError::unbound(Rule::Se, e))?;
            let actual = self.infer_tm(delta, t)?;
            if !self.ty_defeq(delta, &actual, &expected) {
                return Err(err(
                    ErrorCode::TypeMismatch,
                    Rule::Se,
                    format!("{x} := {t} has type {actual}, expected {expected}"),
                ));
            }
        }
        Ok(())
    }

    /// `Γ ⊢op A` in CaTT.
    pub fn check_op_side(&self, ps: &Ctx, ty: &Ty) -> Result<()> {
        let Ty::Hom(base, t, u) = ty else {
            return Err(err(ErrorCode::SideConditionViolation, Rule::OpSide, format!("{ty} is not a Hom type")));
        };
        let s = src(ps)?;
        let g = tgt(ps)?;
        self.boundary_side("source", &s, base, t)?;
        self.boundary_side("target", &g, base, u)
    }

    fn boundary_side(&self, label: &str, bd: &Ctx, base: &Ty, tm: &Tm) -> Result<()> {
        let mut used = tm.var_set();
        base.collect_vars(&mut used);
        let want = bd.var_set();
        if used != want {
            let missing: BTreeSet<Var> = want.difference(&used).cloned().collect();
            let extra: BTreeSet<Var> = used.difference(&want).cloned().collect();
            return Err(err(
                ErrorCode::SideConditionViolation,
                Rule::OpSide,
                format!(
                    "{label} boundary {bd}: {tm} must use exactly {}, missing {}, extra {}",
                    show_set(&want),
                    show_set(&missing),
                    show_set(&extra)
                ),
            ));
        }
        self.side_typing(bd, base, tm, Rule::OpSide, label)
    }

    fn side_typing(&self, ctx: &Ctx, base: &Ty, tm: &Tm, rule: Rule, label: &str) -> Result<()> {
        let wrap = |e: KernelError| {
            err(ErrorCode::SideConditionViolation, rule, format!("{label}: {tm} does not check in {ctx}: {e}"))
        };
        self.check_ty(ctx, base).map_err(wrap)?;
        let b = self.infer_tm(ctx, tm).map_err(wrap)?;
        if !self.ty_defeq(ctx, &b, base) {
            return Err(err(
                ErrorCode::SideConditionViolation,
                rule,
                format!("{label}: {tm} has type {b} in {ctx}, expected {base}"),
            ));
        }
        Ok(())
    }

    /// `Γ ⊢eq A` in CaTT.
    pub fn check_eq_side(&self, ps: &Ctx, ty: &Ty) -> Result<()> {
        let Ty::Hom(base, t, u) = ty else {
            return Err(err(ErrorCode::SideConditionViolation, Rule::EqSide, format!("{ty} is not a Hom type")));
        };
        check_ps(ps)?;
        let want = ps.var_set();
        for (label, side) in [("source", t), ("target", u)] {
            let mut used = side.var_set();
            base.collect_vars(&mut used);
            if used != want {
                let missing: BTreeSet<Var> = want.difference(&used).cloned().collect();
                return Err(err(
                    ErrorCode::SideConditionViolation,
                    Rule::EqSide,
                    format!("{label} {side} does not cover the context, uncovered {}", show_set(&missing)),
                ));
            }
        }
        for (label, side) in [("source", t), ("target", u)] {
            self.side_typing(ps, base, side, Rule::EqSide, label)?;
        }
        Ok(())
    }

    pub fn normal_ty(&self, ctx: &Ctx, ty: &Ty) -> Ty {
        if self.theory.has_unit() {
            normalize_ty(ctx, ty)
        } else {
            ty.clone()
        }
    }

    pub fn normal_tm(&self, ctx: &Ctx, tm: &Tm) -> Tm {
        if self.theory.has_unit() {
            normalize_tm(ctx, tm)
        } else {
            tm.clone()
        }
    }

    pub fn normal_sub(&self, ctx: &Ctx, sub: &Sub) -> Sub {
        if self.theory.has_unit() {
            normalize_sub(ctx, sub)
        } else {
            sub.clone()
        }
    }

    /// Definitional equality of types, syntactic up to head renaming in the
    /// theories without a unit type.
    pub fn ty_defeq(&self, ctx: &Ctx, a: &Ty, b: &Ty) -> bool {
        a == b || (self.theory.has_unit() && normalize_ty(ctx, a) == normalize_ty(ctx, b))
    }

    pub fn tm_defeq(&self, ctx: &Ctx, a: &Tm, b: &Tm) -> bool {
        a == b || (self.theory.has_unit() && normalize_tm(ctx, a) == normalize_tm(ctx, b))
    }

    pub fn sub_defeq(&self, ctx: &Ctx, a: &Sub, b: &Sub) -> bool {
        a == b || (self.theory.has_unit() && normalize_sub(ctx, a) == normalize_sub(ctx, b))
    }
}

fn intro_rule(h: &Head) -> Rule {
    match (h.theory(), h.kind()) {
        (TheoryId::Mcatt, CohKind::Op) => Rule::MopIntro,
        (TheoryId::Mcatt, CohKind::Eq) => Rule::McohIntro,
        (_, CohKind::Op) => Rule::CohopIntro,
        (_, CohKind::Eq) => Rule::CohIntro,
    }
}
