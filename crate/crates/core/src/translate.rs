//! Desuspension `⌊·⌋ : CaTT → MCaTT`, reduced suspension `Σ̃ : MCaTT → CaTT`,
//! the counit substitutions `•_Θ`, the unit isomorphisms `η_Γ`, and checks of
//! the laws relating them.
//!
//! Composition follows [`compose`]: `compose(γ, δ)` is `γ ∘ δ`, the
//! substitution obtained by applying `δ` to the terms of `γ`.

use std::fmt;

use crate::kernel::{normalize_ctx, normalize_sub, normalize_tm, normalize_ty, CheckReport, Checker, ErrorCode, KernelError, Rule};
use crate::subst::{compose, identity};
use crate::syntax::{Ctx, Sub, TheoryId, Tm, Ty, Var};

type Result<T> = std::result::Result<T, KernelError>;

pub fn desusp_ty(ty: &Ty) -> Ty {
    match ty {
        Ty::Obj => Ty::Unit,
        // ⌊·⌋ is only defined on CaTT syntax; leave the unit type alone
        Ty::Unit => Ty::Unit,
        Ty::Hom(a, t, u) => Ty::hom(desusp_ty(a), desusp_tm(t), desusp_tm(u)),
    }
}

pub fn desusp_tm(tm: &Tm) -> Tm {
    match tm {
        Tm::Var(_) | Tm::Unit => tm.clone(),
        Tm::Coh(h, args) => Tm::Coh(h.with_theory(TheoryId::Mcatt), desusp_sub(args)),
    }
}

pub fn desusp_sub(sub: &Sub) -> Sub {
    sub.iter().map(|(x, t)| (x.clone(), desusp_tm(t))).collect()
}

pub fn desusp_ctx(ctx: &Ctx) -> Ctx {
    ctx.iter().map(|(x, a)| (x.clone(), desusp_ty(a))).collect()
}

fn not_normal(detail: String) -> KernelError {
    KernelError::new(ErrorCode::NotNormalized, Rule::Conv, detail)
}

/// `Σ̃A` for a normalized type `A` over the MCaTT context `ctx`.
pub fn rsusp_ty(ctx: &Ctx, ty: &Ty) -> Result<Ty> {
    Ok(match ty {
        Ty::Unit => Ty::Obj,
        Ty::Obj => Ty::hom(Ty::Obj, Tm::Var(Var::Base), Tm::Var(Var::Base)),
        Ty::Hom(a, t, u) => Ty::hom(rsusp_ty(ctx, a)?, rsusp_tm(ctx, t)?, rsusp_tm(ctx, u)?),
    })
}

/// `Σ̃t` for a normalized term over `ctx`.
pub fn rsusp_tm(ctx: &Ctx, tm: &Tm) -> Result<Tm> {
    match tm {
        Tm::Unit => Ok(Tm::Var(Var::Base)),
        Tm::Var(x) => match ctx.lookup(x) {
            Some(Ty::Unit) => Err(not_normal(format!("variable {x} has type 1 and should be written ()"))),
            _ => Ok(tm.clone()),
        },
        Tm::Coh(h, args) => {
            if h.theory() != TheoryId::Mcatt {
                return Err(KernelError::new(
                    ErrorCode::TheoryViolation,
                    Rule::Conv,
                    format!("{} is not an MCaTT term", h.name().unwrap_or("coherence")),
                ));
            }
            let inner = rsusp_sub(ctx, args, &desusp_ctx(h.ps()))?;
            let args = compose(&red_sub(h.ps()), &inner).map_err(|e| KernelError::unbound(Rule::Conv, e))?;
            Ok(Tm::Coh(h.with_theory(TheoryId::Catt), args))
        }
    }
}

/// `Σ̃γ` for `ctx ⊢ γ : target`; components aimed at unit binders are dropped.
pub fn rsusp_sub(ctx: &Ctx, sub: &Sub, target: &Ctx) -> Result<Sub> {
    let mut out = Sub::from_maps(vec![(Var::Base, Tm::Var(Var::Base))]);
    for (i, (x, t)) in sub.iter().enumerate() {
        let unit = match target.bindings().get(i) {
            Some((_, a)) => *a == Ty::Unit,
            None => false,
        };
        if !unit {
            out.push(x.clone(), rsusp_tm(ctx, t)?);
        }
    }
    Ok(out)
}

/// `Σ̃Γ`: a fresh base point `♦ : Obj`, unit binders dropped.
pub fn rsusp_ctx(ctx: &Ctx) -> Result<Ctx> {
    let mut out = Ctx::from_bindings(vec![(Var::Base, Ty::Obj)]);
    for (i, (x, a)) in ctx.iter().enumerate() {
        if *a != Ty::Unit {
            out.push(x.clone(), rsusp_ty(&ctx.prefix(i), a)?);
        }
    }
    Ok(out)
}

/// `•_Θ : Σ̃⌊Θ⌋ → Θ`, sending objects to `♦` and every other variable to itself.
pub fn red_sub(theta: &Ctx) -> Sub {
    theta
        .iter()
        .map(|(x, a)| {
            let t = if *a == Ty::Obj { Tm::Var(Var::Base) } else { Tm::Var(x.clone()) };
            (x.clone(), t)
        })
        .collect()
}

/// `(η_Γ, η_Γ⁻¹)` for a normalized MCaTT context, where `Γ ⊢ η_Γ : ⌊Σ̃Γ⌋`
/// and `⌊Σ̃Γ⌋ ⊢ η_Γ⁻¹ : Γ`.
pub fn eta(ctx: &Ctx) -> (Sub, Sub) {
    let mut fwd = Sub::from_maps(vec![(Var::Base, Tm::Unit)]);
    let mut inv = Sub::new();
    for (x, a) in ctx.iter() {
        if *a == Ty::Unit {
            inv.push(x.clone(), Tm::Unit);
        } else {
            fwd.push(x.clone(), Tm::Var(x.clone()));
            inv.push(x.clone(), Tm::Var(x.clone()));
        }
    }
    (fwd, inv)
}

/// Outcome of [`verify_adjunction`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AdjReport {
    pub catt_ctx: Ctx,
    pub mcatt_ctx: Ctx,
    /// `⌊•_Γ⌋ ∘ η_⌊Γ⌋ = id` for the CaTT context.
    pub triangle1_holds: bool,
    /// `•_Σ̃Γ ∘ Σ̃η_Γ = id` for the MCaTT context.
    pub triangle2_holds: bool,
    pub eta_iso_holds: bool,
    pub counterexample: Option<String>,
}

impl AdjReport {
    pub fn all_true(&self) -> bool {
        self.triangle1_holds && self.triangle2_holds && self.eta_iso_holds
    }
}

fn first_failure(slot: &mut Option<String>, label: &str, lhs: &Sub, rhs: &Sub) {
    if slot.is_none() {
        *slot = Some(format!("{label}: {lhs} ≠ {rhs}"));
    }
}

/// `⌊•_Γ⌋ ∘ η_⌊Γ⌋ = id_⌊Γ⌋` up to definitional equality, together with
/// `Σ̃⌊Γ⌋ ⊢ •_Γ : Γ`.
fn triangle1(gc: &Ctx, cex: &mut Option<String>) -> bool {
    let catt = Checker::new(TheoryId::Catt);
    let n = normalize_ctx(&desusp_ctx(gc));
    let Ok(s) = rsusp_ctx(&n) else {
        *cex = cex.take().or(Some(format!("Σ̃⌊{gc}⌋ undefined")));
        return false;
    };
    let bullet = red_sub(gc);
    if let Err(e) = catt.check_sub(&s, &bullet, gc) {
        *cex = cex.take().or(Some(format!("•_Γ rejected: {e}")));
        return false;
    }
    let (eta_n, _) = eta(&n);
    let Ok(lhs) = compose(&desusp_sub(&bullet), &eta_n) else {
        return false;
    };
    let lhs = normalize_sub(&n, &lhs);
    let rhs = normalize_sub(&n, &identity(&n));
    if lhs != rhs {
        first_failure(cex, "triangle ⌊•⌋∘η", &lhs, &rhs);
        return false;
    }
    true
}

/// `•_Σ̃Γ ∘ Σ̃η_Γ = id_Σ̃Γ`, exactly.
fn triangle2(n: &Ctx, cex: &mut Option<String>) -> bool {
    let (Ok(s), (eta_n, _)) = (rsusp_ctx(n), eta(n)) else {
        return false;
    };
    let Ok(seta) = rsusp_sub(n, &eta_n, &desusp_ctx(&s)) else {
        return false;
    };
    match compose(&red_sub(&s), &seta) {
        Ok(lhs) if lhs == identity(&s) => true,
        Ok(lhs) => {
            first_failure(cex, "triangle •∘Σ̃η", &lhs, &identity(&s));
            false
        }
        Err(_) => false,
    }
}

/// Both round trips of `η_Γ` are identities and both directions check.
fn eta_iso(n: &Ctx, cex: &mut Option<String>) -> bool {
    let m = Checker::new(TheoryId::Mcatt);
    let Ok(s) = rsusp_ctx(n) else {
        return false;
    };
    let d = desusp_ctx(&s);
    let (fwd, inv) = eta(n);
    for (src, sub, tgt, label) in [(n, &fwd, &d, "η"), (&d, &inv, n, "η⁻¹")] {
        if let Err(e) = m.check_sub(src, sub, tgt) {
            *cex = cex.take().or(Some(format!("{label} rejected: {e}")));
            return false;
        }
    }
    for (a, b, over) in [(&fwd, &inv, &d), (&inv, &fwd, n)] {
        let Ok(lhs) = compose(a, b) else {
            return false;
        };
        let lhs = normalize_sub(over, &lhs);
        let rhs = normalize_sub(over, &identity(over));
        if lhs != rhs {
            first_failure(cex, "η round trip", &lhs, &rhs);
            return false;
        }
    }
    true
}

/// Checks the triangle identities for `gc` (CaTT) and `gm` (MCaTT) and that
/// `η_gm` is an isomorphism.
pub fn verify_adjunction(gc: &Ctx, gm: &Ctx) -> AdjReport {
    let mut cex = None;
    let n = normalize_ctx(gm);
    let triangle1_holds = triangle1(gc, &mut cex);
    let triangle2_holds = triangle2(&n, &mut cex);
    let eta_iso_holds = eta_iso(&n, &mut cex);
    AdjReport {
        catt_ctx: gc.clone(),
        mcatt_ctx: gm.clone(),
        triangle1_holds,
        triangle2_holds,
        eta_iso_holds,
        counterexample: cex,
    }
}

/// `γ ∘ •_Δ = •_Γ ∘ Σ̃⌊γ⌋` for `Δ ⊢ γ : Γ` in CaTT.
pub fn counit_naturality(delta: &Ctx, sub: &Sub, gamma: &Ctx) -> Result<bool> {
    let lhs = compose(sub, &red_sub(delta)).map_err(|e| KernelError::unbound(Rule::Conv, e))?;
    let nd = normalize_ctx(&desusp_ctx(delta));
    let dsub = normalize_sub(&nd, &desusp_sub(sub));
    let ssub = rsusp_sub(&nd, &dsub, &desusp_ctx(gamma))?;
    let rhs = compose(&red_sub(gamma), &ssub).map_err(|e| KernelError::unbound(Rule::Conv, e))?;
    Ok(lhs == rhs)
}

/// `η_Γ ∘ γ = ⌊Σ̃γ⌋ ∘ η_Δ` for `Δ ⊢ γ : Γ` in MCaTT, up to definitional equality.
pub fn unit_naturality(delta: &Ctx, sub: &Sub, gamma: &Ctx) -> Result<bool> {
    let nd = normalize_ctx(delta);
    let ng = normalize_ctx(gamma);
    let sub = normalize_sub(&nd, sub);
    let lhs = compose(&eta(&ng).0, &sub).map_err(|e| KernelError::unbound(Rule::Conv, e))?;
    let ssub = desusp_sub(&rsusp_sub(&nd, &sub, &ng)?);
    let rhs = compose(&ssub, &eta(&nd).0).map_err(|e| KernelError::unbound(Rule::Conv, e))?;
    Ok(normalize_sub(&nd, &lhs) == normalize_sub(&nd, &rhs))
}

/// Number of binders of type `Obj` in `Σ̃Γ`.
pub fn rsusp_object_count(gm: &Ctx) -> Result<usize> {
    Ok(rsusp_ctx(&normalize_ctx(gm))?.iter().filter(|(_, a)| *a == Ty::Obj).count())
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Judgment {
    Ctx(Ctx),
    Ty(Ctx, Ty),
    Tm(Ctx, Tm, Ty),
    Sub(Ctx, Sub, Ctx),
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Judgment::Ctx(g) => write!(f, "{g} ⊢"),
            Judgment::Ty(g, a) => write!(f, "{g} ⊢ {a}"),
            Judgment::Tm(g, t, a) => write!(f, "{g} ⊢ {t} : {a}"),
            Judgment::Sub(d, s, g) => write!(f, "{d} ⊢ {s} : {g}"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    Desusp,
    Rsusp,
}

impl Direction {
    pub fn source(self) -> TheoryId {
        match self {
            Direction::Desusp => TheoryId::Catt,
            Direction::Rsusp => TheoryId::Mcatt,
        }
    }

    pub fn target(self) -> TheoryId {
        match self {
            Direction::Desusp => TheoryId::Mcatt,
            Direction::Rsusp => TheoryId::Catt,
        }
    }
}

/// Checks a judgment in `theory`, including its presupposed contexts.
pub fn check_judgment(theory: TheoryId, j: &Judgment) -> CheckReport {
    let c = Checker::new(theory);
    let r = match j {
        Judgment::Ctx(g) => c.check_ctx(g).map(|_| None),
        Judgment::Ty(g, a) => c.check_ctx(g).and_then(|_| c.check_ty(g, a)).map(|_| None),
        Judgment::Tm(g, t, a) => c.check_ctx(g).and_then(|_| c.check_ty(g, a)).and_then(|_| {
            let b = c.infer_tm(g, t)?;
            if c.ty_defeq(g, &b, a) {
                Ok(Some(b))
            } else {
                Err(KernelError::new(ErrorCode::TypeMismatch, Rule::Conv, format!("{t} has type {b}, expected {a}")))
            }
        }),
        Judgment::Sub(d, s, g) => c
            .check_ctx(d)
            .and_then(|_| c.check_ctx(g))
            .and_then(|_| c.check_sub(d, s, g))
            .map(|_| None),
    };
    CheckReport::from_result(j.to_string(), r)
}

/// Image of a judgment; `Rsusp` normalizes its input first.
pub fn translate(j: &Judgment, dir: Direction) -> Result<Judgment> {
    Ok(match dir {
        Direction::Desusp => match j {
            Judgment::Ctx(g) => Judgment::Ctx(desusp_ctx(g)),
            Judgment::Ty(g, a) => Judgment::Ty(desusp_ctx(g), desusp_ty(a)),
            Judgment::Tm(g, t, a) => Judgment::Tm(desusp_ctx(g), desusp_tm(t), desusp_ty(a)),
            Judgment::Sub(d, s, g) => Judgment::Sub(desusp_ctx(d), desusp_sub(s), desusp_ctx(g)),
        },
        Direction::Rsusp => match j {
            Judgment::Ctx(g) => Judgment::Ctx(rsusp_ctx(&normalize_ctx(g))?),
            Judgment::Ty(g, a) => {
                let g = normalize_ctx(g);
                Judgment::Ty(rsusp_ctx(&g)?, rsusp_ty(&g, &normalize_ty(&g, a))?)
            }
            Judgment::Tm(g, t, a) => {
                let g = normalize_ctx(g);
                let t = rsusp_tm(&g, &normalize_tm(&g, t))?;
                Judgment::Tm(rsusp_ctx(&g)?, t, rsusp_ty(&g, &normalize_ty(&g, a))?)
            }
            Judgment::Sub(d, s, g) => {
                let d = normalize_ctx(d);
                let g = normalize_ctx(g);
                let s = rsusp_sub(&d, &normalize_sub(&d, s), &g)?;
                Judgment::Sub(rsusp_ctx(&d)?, s, rsusp_ctx(&g)?)
            }
        },
    })
}

/// Checks `j` in the source theory, translates it and re-checks the image.
pub fn translate_correctness(j: &Judgment, dir: Direction) -> CheckReport {
    let source = check_judgment(dir.source(), j);
    if !source.accepted() {
        return source;
    }
    match translate(j, dir) {
        Ok(image) => check_judgment(dir.target(), &image),
        Err(e) => CheckReport::reject(j.to_string(), e),
    }
}
