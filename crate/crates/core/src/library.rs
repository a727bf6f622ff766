//! A small stock of CaTT coherence heads built directly in core syntax.
//!
//! Used by the random generator and by tests that should not depend on the
//! parser. The MCaTT counterparts are obtained with [`Head::with_theory`].

use std::sync::Arc;

use crate::syntax::{CohKind, Ctx, Head, Sub, TheoryId, Tm, Ty, Var};

fn v(s: &str) -> Tm {
    Tm::var(s)
}

fn ctx(b: &[(&str, Ty)]) -> Ctx {
    b.iter().map(|(x, t)| (Var::new(x), t.clone())).collect()
}

fn arrow(s: &str, t: &str) -> Ty {
    Ty::hom(Ty::Obj, v(s), v(t))
}

fn head(kind: CohKind, ps: Ctx, ty: Ty, name: &str) -> Arc<Head> {
    Head::new(kind, TheoryId::Catt, ps, ty, Some(name))
}

/// Applies a head to terms listed in the order of its index telescope.
pub fn app(h: &Arc<Head>, terms: &[Tm]) -> Tm {
    assert_eq!(terms.len(), h.ps().len(), "arity of {:?}", h.name());
    let args: Sub = h.ps().vars().cloned().zip(terms.iter().cloned()).collect();
    Tm::Coh(Arc::clone(h), args)
}

pub fn disk1() -> Ctx {
    ctx(&[("x", Ty::Obj), ("y", Ty::Obj), ("f", arrow("x", "y"))])
}

/// `(x y f z g)`, two composable arrows.
pub fn comp_ctx() -> Ctx {
    ctx(&[("x", Ty::Obj), ("y", Ty::Obj), ("f", arrow("x", "y")), ("z", Ty::Obj), ("g", arrow("y", "z"))])
}

pub fn comp() -> Arc<Head> {
    head(CohKind::Op, comp_ctx(), arrow("x", "z"), "comp")
}

/// `comp f g` with the objects `[x, y, z]`.
pub fn comp_of(f: Tm, g: Tm, objs: [Tm; 3]) -> Tm {
    let [x, y, z] = objs;
    app(&comp(), &[x, y, f, z, g])
}

pub fn id() -> Arc<Head> {
    head(CohKind::Eq, ctx(&[("x", Ty::Obj)]), arrow("x", "x"), "id")
}

/// Identity on a 1-cell, `(x y f) ⊢eq f -> f`.
pub fn id1() -> Arc<Head> {
    head(CohKind::Eq, disk1(), Ty::hom(arrow("x", "y"), v("f"), v("f")), "id1")
}

/// The operation `(x y f) ⊢op x -> y`.
pub fn unary() -> Arc<Head> {
    head(CohKind::Op, disk1(), arrow("x", "y"), "un")
}

pub fn assoc_ctx() -> Ctx {
    ctx(&[
        ("x", Ty::Obj),
        ("y", Ty::Obj),
        ("f", arrow("x", "y")),
        ("z", Ty::Obj),
        ("g", arrow("y", "z")),
        ("w", Ty::Obj),
        ("h", arrow("z", "w")),
    ])
}

pub fn assoc() -> Arc<Head> {
    let (x, y, z, w) = (v("x"), v("y"), v("z"), v("w"));
    let fg = comp_of(v("f"), v("g"), [x.clone(), y.clone(), z.clone()]);
    let lhs = comp_of(fg, v("h"), [x.clone(), z.clone(), w.clone()]);
    let gh = comp_of(v("g"), v("h"), [y.clone(), z.clone(), w.clone()]);
    let rhs = comp_of(v("f"), gh, [x.clone(), y, w.clone()]);
    head(CohKind::Eq, assoc_ctx(), Ty::hom(Ty::hom(Ty::Obj, x, w), lhs, rhs), "assoc")
}

pub fn lunit() -> Arc<Head> {
    let idx = app(&id(), &[v("x")]);
    let lhs = comp_of(idx, v("f"), [v("x"), v("x"), v("y")]);
    head(CohKind::Eq, disk1(), Ty::hom(arrow("x", "y"), lhs, v("f")), "lunit")
}

pub fn runit() -> Arc<Head> {
    let idy = app(&id(), &[v("y")]);
    let lhs = comp_of(v("f"), idy, [v("x"), v("y"), v("y")]);
    head(CohKind::Eq, disk1(), Ty::hom(arrow("x", "y"), lhs, v("f")), "runit")
}

pub fn vcomp() -> Arc<Head> {
    let ps = ctx(&[
        ("x", Ty::Obj),
        ("y", Ty::Obj),
        ("f", arrow("x", "y")),
        ("g", arrow("x", "y")),
        ("a", Ty::hom(arrow("x", "y"), v("f"), v("g"))),
        ("h", arrow("x", "y")),
        ("b", Ty::hom(arrow("x", "y"), v("g"), v("h"))),
    ]);
    head(CohKind::Op, ps, Ty::hom(arrow("x", "y"), v("f"), v("h")), "vcomp")
}

pub fn whisk_l() -> Arc<Head> {
    let ps = ctx(&[
        ("x", Ty::Obj),
        ("y", Ty::Obj),
        ("f", arrow("x", "y")),
        ("z", Ty::Obj),
        ("g", arrow("y", "z")),
        ("h", arrow("y", "z")),
        ("a", Ty::hom(arrow("y", "z"), v("g"), v("h"))),
    ]);
    let objs = || [v("x"), v("y"), v("z")];
    let ty = Ty::hom(arrow("x", "z"), comp_of(v("f"), v("g"), objs()), comp_of(v("f"), v("h"), objs()));
    head(CohKind::Op, ps, ty, "whisk_l")
}

pub fn whisk_r() -> Arc<Head> {
    let ps = ctx(&[
        ("x", Ty::Obj),
        ("y", Ty::Obj),
        ("f", arrow("x", "y")),
        ("g", arrow("x", "y")),
        ("a", Ty::hom(arrow("x", "y"), v("f"), v("g"))),
        ("z", Ty::Obj),
        ("h", arrow("y", "z")),
    ]);
    let objs = || [v("x"), v("y"), v("z")];
    let ty = Ty::hom(arrow("x", "z"), comp_of(v("f"), v("h"), objs()), comp_of(v("g"), v("h"), objs()));
    head(CohKind::Op, ps, ty, "whisk_r")
}

/// All stock heads, in dependency order.
pub fn all() -> Vec<Arc<Head>> {
    vec![comp(), id(), id1(), unary(), assoc(), lunit(), runit(), vcomp(), whisk_l(), whisk_r()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Checker;

    #[test]
    fn stock_heads_are_valid_in_both_theories() {
        let c = Checker::new(TheoryId::Catt);
        let m = Checker::new(TheoryId::Mcatt);
        for h in all() {
            c.validate_head(&h).unwrap_or_else(|e| panic!("{:?}: {e}", h.name()));
            m.validate_head(&h.with_theory(TheoryId::Mcatt)).unwrap();
        }
    }
}
