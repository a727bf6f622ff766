//! Checkers for `Γ ⊢`, `Γ ⊢ A`, `Γ ⊢ t : A`, `Δ ⊢ γ : Γ`, the side conditions
//! `⊢op` / `⊢eq`, and definitional equality in the unit theories.
//!
//! [`Checker`] returns `Result`s; the free functions wrap them into
//! [`CheckReport`]s and check the presupposed contexts first.

mod check;
mod error;
mod normalize;
mod report;

pub use check::Checker;
pub use error::{ErrorCode, KernelError, Rule};
pub use normalize::{is_normal_ctx, is_normal_tm, is_normal_ty, normalize_ctx, normalize_sub, normalize_tm, normalize_ty};
pub use report::{CheckReport, ErrorInfo, Span, Verdict};

use crate::syntax::{Ctx, Sub, TheoryId, Tm, Ty};

pub fn check_ctx(theory: TheoryId, ctx: &Ctx) -> CheckReport {
    let c = Checker::new(theory);
    CheckReport::from_result(format!("{ctx} ⊢"), c.check_ctx(ctx).map(|_| None))
}

pub fn check_ty(theory: TheoryId, ctx: &Ctx, ty: &Ty) -> CheckReport {
    let c = Checker::new(theory);
    let r = c.check_ctx(ctx).and_then(|_| c.check_ty(ctx, ty)).map(|_| None);
    CheckReport::from_result(format!("{ctx} ⊢ {ty}"), r)
}

pub fn infer_tm(theory: TheoryId, ctx: &Ctx, tm: &Tm) -> CheckReport {
    let c = Checker::new(theory);
    let r = c.check_ctx(ctx).and_then(|_| c.infer_tm(ctx, tm)).map(Some);
    CheckReport::from_result(format!("{ctx} ⊢ {tm}"), r)
}

pub fn check_tm(theory: TheoryId, ctx: &Ctx, tm: &Tm, ty: &Ty) -> CheckReport {
    let c = Checker::new(theory);
    let r = c.check_ctx(ctx).and_then(|_| c.check_tm(ctx, tm, ty)).map(|_| None);
    CheckReport::from_result(format!("{ctx} ⊢ {tm} : {ty}"), r)
}

pub fn check_sub(theory: TheoryId, delta: &Ctx, sub: &Sub, gamma: &Ctx) -> CheckReport {
    let c = Checker::new(theory);
    let r = c
        .check_ctx(delta)
        .and_then(|_| c.check_ctx(gamma))
        .and_then(|_| c.check_sub(delta, sub, gamma))
        .map(|_| None);
    CheckReport::from_result(format!("{delta} ⊢ {sub} : {gamma}"), r)
}

pub fn check_op_side(ps: &Ctx, ty: &Ty) -> CheckReport {
    let c = Checker::new(TheoryId::Catt);
    CheckReport::from_result(format!("{ps} ⊢op {ty}"), c.check_op_side(ps, ty).map(|_| None))
}

pub fn check_eq_side(ps: &Ctx, ty: &Ty) -> CheckReport {
    let c = Checker::new(TheoryId::Catt);
    CheckReport::from_result(format!("{ps} ⊢eq {ty}"), c.check_eq_side(ps, ty).map(|_| None))
}

pub fn ty_defeq(theory: TheoryId, ctx: &Ctx, a: &Ty, b: &Ty) -> bool {
    Checker::new(theory).ty_defeq(ctx, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library as lib;
    use crate::syntax::{CohKind, Head, Var};

    fn v(s: &str) -> Tm {
        Tm::var(s)
    }

    fn ctx(b: &[(&str, Ty)]) -> Ctx {
        b.iter().map(|(x, t)| (Var::new(x), t.clone())).collect()
    }

    fn arrow(s: &str, t: &str) -> Ty {
        Ty::hom(Ty::Obj, v(s), v(t))
    }

    fn fig1() -> Ctx {
        ctx(&[
            ("x", Ty::Obj),
            ("y", Ty::Obj),
            ("z", Ty::Obj),
            ("f1", arrow("x", "y")),
            ("f2", arrow("x", "y")),
            ("g", arrow("x", "z")),
            ("h", arrow("y", "y")),
            ("α", Ty::hom(arrow("x", "y"), v("f1"), v("f2"))),
        ])
    }

    fn delta() -> Ctx {
        ctx(&[("a", Ty::Obj), ("b", Ty::Obj), ("v", arrow("a", "b")), ("c", Ty::Obj), ("w", arrow("b", "c"))])
    }

    #[test]
    fn contexts() {
        for t in [TheoryId::Glob, TheoryId::Catt, TheoryId::GlobUnit, TheoryId::Mcatt] {
            assert!(check_ctx(t, &Ctx::new()).accepted());
        }
        assert!(check_ctx(TheoryId::Glob, &fig1()).accepted());
        let r = check_ctx(TheoryId::Catt, &ctx(&[("x", Ty::Obj), ("f", arrow("x", "y"))]));
        assert_eq!(r.code(), Some(ErrorCode::ScopeError));
        let r = check_ctx(TheoryId::Catt, &ctx(&[("x", Ty::Obj), ("x", Ty::Obj)]));
        assert_eq!(r.code(), Some(ErrorCode::DuplicateVar));
        let r = check_ctx(TheoryId::Catt, &ctx(&[("a", Ty::Unit)]));
        assert_eq!(r.code(), Some(ErrorCode::TheoryViolation));
    }

    #[test]
    fn types() {
        assert!(check_ty(TheoryId::Catt, &fig1(), &Ty::Obj).accepted());
        let a = ctx(&[("x", Ty::Unit)]);
        assert!(check_ty(TheoryId::Mcatt, &a, &Ty::hom(Ty::Unit, v("x"), Tm::Unit)).accepted());
        let d1 = ctx(&[("x", Ty::Obj), ("y", Ty::Obj), ("f", arrow("x", "y"))]);
        let r = check_ty(TheoryId::Catt, &d1, &Ty::hom(Ty::Obj, v("x"), v("f")));
        assert_eq!(r.code(), Some(ErrorCode::TypeMismatch));
    }

    #[test]
    fn comp_application() {
        let t = lib::comp_of(v("v"), v("w"), [v("a"), v("b"), v("c")]);
        let r = infer_tm(TheoryId::Catt, &delta(), &t);
        assert!(r.accepted(), "{r:?}");
        assert_eq!(r.inferred, Some(arrow("a", "c")));
        assert_eq!(infer_tm(TheoryId::Catt, &delta(), &v("v")).inferred, Some(arrow("a", "b")));
    }

    #[test]
    fn neutral_element_in_any_context() {
        let e = Tm::Coh(lib::id().with_theory(TheoryId::Mcatt), Sub::from_maps(vec![("x".into(), Tm::Unit)]));
        for c in [Ctx::new(), ctx(&[("a", Ty::Unit)]), ctx(&[("x", Ty::Obj), ("f", Ty::hom(Ty::Obj, v("x"), v("x")))])] {
            let r = infer_tm(TheoryId::Mcatt, &c, &e);
            assert!(r.accepted(), "{r:?}");
            assert!(ty_defeq(TheoryId::Mcatt, &c, r.inferred.as_ref().unwrap(), &Ty::Obj));
        }
    }

    #[test]
    fn coherence_theories_are_separate() {
        let e_m = Tm::Coh(lib::id().with_theory(TheoryId::Mcatt), Sub::from_maps(vec![("x".into(), Tm::Unit)]));
        assert_eq!(infer_tm(TheoryId::Catt, &Ctx::new(), &e_m).code(), Some(ErrorCode::TheoryViolation));
        let t = lib::comp_of(v("v"), v("w"), [v("a"), v("b"), v("c")]);
        assert_eq!(infer_tm(TheoryId::Glob, &delta(), &t).code(), Some(ErrorCode::TheoryViolation));
        assert_eq!(infer_tm(TheoryId::Mcatt, &delta(), &t).code(), Some(ErrorCode::TheoryViolation));
    }

    #[test]
    fn substitutions() {
        assert!(check_sub(TheoryId::Catt, &delta(), &Sub::new(), &Ctx::new()).accepted());
        let gamma = Sub::from_maps(
            ["x", "y", "f", "z", "g"].iter().zip(["a", "b", "v", "c", "w"]).map(|(x, t)| ((*x).into(), v(t))).collect(),
        );
        assert!(check_sub(TheoryId::Catt, &delta(), &gamma, lib::comp().ps()).accepted());
        let short = Sub::from_maps(vec![("x".into(), v("a"))]);
        assert_eq!(check_sub(TheoryId::Catt, &delta(), &short, lib::comp().ps()).code(), Some(ErrorCode::ArityMismatch));
        let renamed = Sub::from_maps(vec![("q".into(), v("a"))]);
        assert_eq!(
            check_sub(TheoryId::Catt, &delta(), &renamed, &ctx(&[("x", Ty::Obj)])).code(),
            Some(ErrorCode::NameMismatch)
        );
        let bad = Sub::from_maps(vec![("x".into(), v("v"))]);
        assert_eq!(check_sub(TheoryId::Catt, &delta(), &bad, &ctx(&[("x", Ty::Obj)])).code(), Some(ErrorCode::TypeMismatch));
    }

    #[test]
    fn unit_target_is_terminal() {
        let target = ctx(&[("x", Ty::Unit)]);
        let d = ctx(&[("a", Ty::Unit), ("b", Ty::Unit)]);
        let c = Checker::new(TheoryId::Mcatt);
        for t in [Tm::Unit, v("a"), v("b")] {
            let s = Sub::from_maps(vec![("x".into(), t)]);
            assert!(check_sub(TheoryId::Mcatt, &d, &s, &target).accepted());
            assert!(c.sub_defeq(&d, &s, &Sub::from_maps(vec![("x".into(), Tm::Unit)])));
        }
    }

    #[test]
    fn op_side_conditions() {
        let comp = lib::comp();
        assert!(check_op_side(comp.ps(), &arrow("x", "z")).accepted());
        let r = check_op_side(comp.ps(), &arrow("x", "y"));
        assert_eq!(r.code(), Some(ErrorCode::SideConditionViolation));
        assert!(r.error.unwrap().detail.contains("target"));
        let d1 = ctx(&[("x", Ty::Obj), ("y", Ty::Obj), ("f", arrow("x", "y"))]);
        assert!(check_op_side(&d1, &arrow("x", "y")).accepted());
        assert_eq!(check_op_side(&ctx(&[("x", Ty::Obj)]), &arrow("x", "x")).code(), Some(ErrorCode::BoundaryUndefined));
    }

    #[test]
    fn eq_side_conditions() {
        let assoc = lib::assoc();
        assert!(check_eq_side(assoc.ps(), assoc.ty()).accepted());
        let comp = lib::comp();
        let r = check_eq_side(comp.ps(), &arrow("x", "z"));
        assert_eq!(r.code(), Some(ErrorCode::SideConditionViolation));
        let detail = r.error.unwrap().detail;
        for missing in ["f", "g", "y"] {
            assert!(detail.contains(missing), "{detail}");
        }
        assert!(check_eq_side(&ctx(&[("x", Ty::Obj)]), &arrow("x", "x")).accepted());
    }

    #[test]
    fn invalid_heads_are_rejected() {
        let bad = Head::new(CohKind::Eq, TheoryId::Catt, lib::comp().ps().clone(), arrow("x", "z"), Some("bad"));
        let args = Sub::from_maps(
            ["x", "y", "f", "z", "g"].iter().zip(["a", "b", "v", "c", "w"]).map(|(x, t)| ((*x).into(), v(t))).collect(),
        );
        let r = infer_tm(TheoryId::Catt, &delta(), &Tm::Coh(bad, args));
        assert_eq!(r.code(), Some(ErrorCode::SideConditionViolation));
        let not_ps = Head::new(CohKind::Op, TheoryId::Catt, ctx(&[("x", Ty::Obj), ("y", Ty::Obj)]), arrow("x", "y"), None);
        let args = Sub::from_maps(vec![("x".into(), v("a")), ("y".into(), v("b"))]);
        assert_eq!(infer_tm(TheoryId::Catt, &delta(), &Tm::Coh(not_ps, args)).code(), Some(ErrorCode::NotPs));
    }

    #[test]
    fn definitional_equality() {
        let a = ctx(&[("a", Ty::Unit)]);
        assert!(ty_defeq(TheoryId::Mcatt, &a, &Ty::hom(Ty::Unit, v("a"), Tm::Unit), &Ty::Obj));
        assert!(ty_defeq(TheoryId::Catt, &Ctx::new(), &Ty::Obj, &Ty::Obj));
        let c = ctx(&[("x", Ty::Obj), ("y", Ty::Obj)]);
        assert!(!ty_defeq(TheoryId::Catt, &c, &arrow("x", "y"), &arrow("y", "x")));
    }
}
