//! Normal forms for the theories with a unit type.
//!
//! Every term of type `⊤` is rewritten to `()` and `Obj` is expanded to
//! `Hom(⊤, (), ())`. The only terms of type `⊤` are `()` and variables declared
//! with type `⊤`, so the rewrite is a single pass that consults the context.
//! Heads keep their CaTT index untouched; only their arguments are rewritten.

use std::sync::Arc;

use crate::syntax::{Ctx, Sub, Tm, Ty};

pub fn normalize_ty(ctx: &Ctx, ty: &Ty) -> Ty {
    match ty {
        Ty::Obj => Ty::unit_obj(),
        Ty::Unit => Ty::Unit,
        Ty::Hom(a, t, u) => Ty::hom(normalize_ty(ctx, a), normalize_tm(ctx, t), normalize_tm(ctx, u)),
    }
}

pub fn normalize_tm(ctx: &Ctx, tm: &Tm) -> Tm {
    match tm {
        Tm::Var(x) if ctx.lookup(x) == Some(&Ty::Unit) => Tm::Unit,
        Tm::Var(_) | Tm::Unit => tm.clone(),
        Tm::Coh(h, args) => Tm::Coh(Arc::clone(h), normalize_sub(ctx, args)),
    }
}

pub fn normalize_sub(ctx: &Ctx, sub: &Sub) -> Sub {
    sub.iter().map(|(x, t)| (x.clone(), normalize_tm(ctx, t))).collect()
}

/// Normalizes each binder type in the context preceding it.
pub fn normalize_ctx(ctx: &Ctx) -> Ctx {
    let mut out = Ctx::new();
    for (x, a) in ctx.iter() {
        let a = normalize_ty(&out, a);
        out.push(x.clone(), a);
    }
    out
}

pub fn is_normal_ty(ctx: &Ctx, ty: &Ty) -> bool {
    normalize_ty(ctx, ty) == *ty
}

pub fn is_normal_tm(ctx: &Ctx, tm: &Tm) -> bool {
    normalize_tm(ctx, tm) == *tm
}

pub fn is_normal_ctx(ctx: &Ctx) -> bool {
    normalize_ctx(ctx) == *ctx
}
