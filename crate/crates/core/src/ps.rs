//! Pasting-scheme recognition and i-boundaries.

use std::fmt;

use thiserror::Error;

use crate::syntax::{Ctx, Tm, Ty, Var};

/// One rule application in a ps-derivation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PsRule {
    Pss,
    /// Extension by a target `y` and a cell `f`.
    Pse(Var, Var),
    Psd,
    Ps,
}

impl fmt::Display for PsRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PsRule::Pss => f.write_str("pss"),
            PsRule::Pse(y, g) => write!(f, "pse({y}, {g})"),
            PsRule::Psd => f.write_str("psd"),
            PsRule::Ps => f.write_str("ps"),
        }
    }
}

/// A ps-derivation, in the order the rules are applied.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PsWitness {
    pub trace: Vec<PsRule>,
    pub ctx: Ctx,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    Minus,
    Plus,
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum PsError {
    /// `index` is the 1-based binder at which no rule applies.
    #[error("not a ps-context at binder {index}: {detail}")]
    NotPs {
        index: usize,
        rule: &'static str,
        expected: Option<Ty>,
        detail: String,
    },
    #[error("boundary of a 0-dimensional ps-context is undefined")]
    BoundaryUndefined,
}

fn not_ps(index: usize, rule: &'static str, expected: Option<Ty>, detail: String) -> PsError {
    PsError::NotPs { index, rule, expected, detail }
}

/// Reconstructs the unique ps-derivation of `ctx`, reading binders left to
/// right and inserting `psd` steps only when the next binder needs a lower
/// dangling variable.
pub fn check_ps(ctx: &Ctx) -> Result<PsWitness, PsError> {
    let b = ctx.bindings();
    let Some((x, x_ty)) = b.first() else {
        return Err(not_ps(1, "pss", Some(Ty::Obj), "empty context".into()));
    };
    if *x_ty != Ty::Obj {
        return Err(not_ps(1, "pss", Some(Ty::Obj), format!("first binder {x} must have type *")));
    }
    let mut trace = vec![PsRule::Pss];
    // dangling variable and its type
    let mut dangling: (Var, Ty) = (x.clone(), Ty::Obj);
    let mut seen = vec![x.clone()];
    let mut i = 1;
    while i < b.len() {
        let (y, a) = &b[i];
        while dangling.1.dim() > a.dim() {
            let Ty::Hom(base, _, Tm::Var(t)) = &dangling.1 else {
                return Err(not_ps(i + 1, "psd", None, format!("dangling type {} has no variable target", dangling.1)));
            };
            dangling = (t.clone(), (**base).clone());
            trace.push(PsRule::Psd);
        }
        if dangling.1 != *a {
            return Err(not_ps(
                i + 1,
                "pse",
                Some(dangling.1.clone()),
                format!("binder {y} : {a} cannot extend the dangling variable {} : {}", dangling.0, dangling.1),
            ));
        }
        if seen.contains(y) {
            return Err(not_ps(i + 1, "pse", Some(a.clone()), format!("variable {y} is not fresh")));
        }
        let expected = Ty::hom(a.clone(), Tm::Var(dangling.0.clone()), Tm::Var(y.clone()));
        let Some((f, f_ty)) = b.get(i + 1) else {
            return Err(not_ps(i + 1, "pse", Some(expected), format!("binder {y} is not followed by a cell")));
        };
        if *f_ty != expected {
            return Err(not_ps(
                i + 2,
                "pse",
                Some(expected.clone()),
                format!("binder {f} : {f_ty} should have type {expected}"),
            ));
        }
        if seen.contains(f) || f == y {
            return Err(not_ps(i + 2, "pse", Some(expected), format!("variable {f} is not fresh")));
        }
        seen.push(y.clone());
        seen.push(f.clone());
        trace.push(PsRule::Pse(y.clone(), f.clone()));
        dangling = (f.clone(), expected);
        i += 2;
    }
    while let Ty::Hom(base, _, t) = &dangling.1 {
        let Tm::Var(t) = t else { unreachable!("recognized cells have variable targets") };
        dangling = (t.clone(), (**base).clone());
        trace.push(PsRule::Psd);
    }
    trace.push(PsRule::Ps);
    Ok(PsWitness { trace, ctx: ctx.clone() })
}

/// `∂⁻_i` / `∂⁺_i` of a ps-context.
pub fn boundary(ctx: &Ctx, i: i64, sign: Sign) -> Result<Ctx, PsError> {
    check_ps(ctx)?;
    let b = ctx.bindings();
    let mut out = ctx.prefix(1);
    for pair in b[1..].chunks(2) {
        let (y, a) = &pair[0];
        let (f, f_ty) = &pair[1];
        let d = a.dim();
        match sign {
            Sign::Minus => {
                if d < i {
                    out.push(y.clone(), a.clone());
                    out.push(f.clone(), f_ty.clone());
                }
            }
            Sign::Plus => {
                if d == i {
                    out = out.drop_last();
                    out.push(y.clone(), a.clone());
                } else if d < i {
                    out.push(y.clone(), a.clone());
                    out.push(f.clone(), f_ty.clone());
                }
            }
        }
    }
    Ok(out)
}

fn top_boundary(ctx: &Ctx, sign: Sign) -> Result<Ctx, PsError> {
    check_ps(ctx)?;
    match ctx.dim() {
        Some(d) if d > 0 => boundary(ctx, d - 1, sign),
        _ => Err(PsError::BoundaryUndefined),
    }
}

/// `∂⁻Γ = ∂⁻_{dim Γ − 1} Γ`.
pub fn src(ctx: &Ctx) -> Result<Ctx, PsError> {
    top_boundary(ctx, Sign::Minus)
}

/// `∂⁺Γ = ∂⁺_{dim Γ − 1} Γ`.
pub fn tgt(ctx: &Ctx) -> Result<Ctx, PsError> {
    top_boundary(ctx, Sign::Plus)
}
