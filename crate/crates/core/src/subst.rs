//! Action of substitutions, composition and identities.

use std::sync::Arc;

use thiserror::Error;

use crate::syntax::{Ctx, Sub, Tm, Ty, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("variable {0} has no mapping in the substitution")]
pub struct UnboundVariable(pub Var);

/// Expressions a substitution acts on.
pub trait Substitutable: Sized {
    fn apply(&self, sub: &Sub) -> Result<Self, UnboundVariable>;
}

impl Substitutable for Ty {
    fn apply(&self, sub: &Sub) -> Result<Ty, UnboundVariable> {
        Ok(match self {
            Ty::Obj => Ty::Obj,
            Ty::Unit => Ty::Unit,
            Ty::Hom(a, t, u) => Ty::hom(a.apply(sub)?, t.apply(sub)?, u.apply(sub)?),
        })
    }
}

impl Substitutable for Tm {
    fn apply(&self, sub: &Sub) -> Result<Tm, UnboundVariable> {
        match self {
            Tm::Var(v) => sub.lookup(v).cloned().ok_or_else(|| UnboundVariable(v.clone())),
            Tm::Unit => Ok(Tm::Unit),
            Tm::Coh(h, args) => Ok(Tm::Coh(Arc::clone(h), compose(args, sub)?)),
        }
    }
}

impl Substitutable for Sub {
    fn apply(&self, sub: &Sub) -> Result<Sub, UnboundVariable> {
        compose(self, sub)
    }
}

/// `γ ∘ δ`: apply `δ` to every term of `γ`. The domain is that of `γ`.
pub fn compose(gamma: &Sub, delta: &Sub) -> Result<Sub, UnboundVariable> {
    gamma
        .iter()
        .map(|(x, t)| Ok((x.clone(), t.apply(delta)?)))
        .collect()
}

pub fn identity(ctx: &Ctx) -> Sub {
    ctx.vars().map(|v| (v.clone(), Tm::Var(v.clone()))).collect()
}
