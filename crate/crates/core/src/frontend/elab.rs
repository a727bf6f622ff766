//! Elaboration of surface definitions into kernel-checked core syntax.
//!
//! A compact application `NAME a1 … ak` supplies the locally maximal binders
//! of the target context in telescope order. The remaining components are
//! found by first-order matching of the binder types against the inferred
//! types of the components already known, propagated until nothing changes.
//! Unit-typed binders of a desuspended index, and of a `let` in a unit
//! theory, are filled with `()`. The explicit form `NAME @[x := t, …]` names
//! its components; any it leaves out are inferred the same way.

use std::collections::HashMap;
use std::sync::Arc;

use super::ast::{Def, Keyword, STm, STy};
use super::Located;
use crate::kernel::{Checker, ErrorCode, KernelError, Rule, Span};
use crate::print::explicit_positions;
use crate::ps::check_ps;
use crate::subst::Substitutable;
use crate::syntax::{CohKind, Ctx, Head, Sub, TheoryId, Tm, Ty, Var, VarSet};
use crate::translate::desusp_ctx;

/// A checked abbreviation `Γ ⊢ body : ty`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LetDef {
    pub ctx: Ctx,
    pub ty: Ty,
    pub body: Tm,
}

/// The core meaning of an accepted definition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Item {
    Coh(Arc<Head>),
    Let(LetDef),
}

/// Where a term lives: inside a coherence index (always CaTT) or at the
/// level of the file's theory.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Level {
    Index,
    File,
}

fn fail(code: ErrorCode, detail: impl Into<String>) -> KernelError {
    KernelError::new(code, Rule::Surface, detail)
}

fn at(span: Span) -> impl Fn(KernelError) -> Located {
    move |error| Located { span, error }
}

fn ty_span(ty: &STy) -> Option<Span> {
    match ty {
        STy::Obj | STy::Unit => None,
        STy::Arrow(t, _) => Some(t.pos()),
        STy::Hom(a, t, _) => ty_span(a).or(Some(t.pos())),
    }
}

/// Definitions accepted so far in one file.
///
/// MCaTT files keep `coh` names, which are usable inside coherence indices,
/// apart from `mcoh` and `let` names, which are MCaTT terms. Other files have
/// a single namespace.
pub struct Env {
    theory: TheoryId,
    file: Checker,
    catt: Checker,
    index_names: HashMap<String, Item>,
    names: HashMap<String, Item>,
}

impl Env {
    pub fn new(theory: TheoryId) -> Env {
        Env {
            theory,
            file: Checker::new(theory),
            catt: Checker::new(TheoryId::Catt),
            index_names: HashMap::new(),
            names: HashMap::new(),
        }
    }

    pub fn theory(&self) -> TheoryId {
        self.theory
    }

    fn split(&self) -> bool {
        self.theory == TheoryId::Mcatt
    }

    fn checker(&self, level: Level) -> &Checker {
        match level {
            Level::Index => &self.catt,
            Level::File => &self.file,
        }
    }

    fn namespace(&self, level: Level) -> &HashMap<String, Item> {
        if self.split() && level == Level::Index {
            &self.index_names
        } else {
            &self.names
        }
    }

    pub fn lookup(&self, level: Level, name: &str) -> Option<&Item> {
        self.namespace(level).get(name)
    }

    /// Elaborates and checks `def`; on success its name becomes visible.
    pub fn define(&mut self, def: &Def) -> Result<Item, Located> {
        let span = def.pos.0;
        let kw = def.keyword;
        let rule = match kw {
            Keyword::Mcoh | Keyword::Meq => Rule::McohIntro,
            Keyword::Mop => Rule::MopIntro,
            Keyword::CohOp => Rule::CohopIntro,
            _ => Rule::CohIntro,
        };
        if kw.is_coherence() && !self.theory.has_coherences() {
            return Err(at(span)(KernelError::new(
                ErrorCode::TheoryViolation,
                rule,
                format!("`{}` needs a theory with coherences, but this is a {} file", kw.as_str(), self.theory.as_str()),
            )));
        }
        if kw.is_mcoh() && self.theory != TheoryId::Mcatt {
            return Err(at(span)(KernelError::new(
                ErrorCode::TheoryViolation,
                rule,
                format!("`{}` declares an MCaTT coherence and is not allowed in a {} file", kw.as_str(), self.theory.as_str()),
            )));
        }
        let level = if kw.is_coherence() { Level::Index } else { Level::File };
        let home = if kw.is_mcoh() { Level::File } else { level };
        if self.namespace(home).contains_key(&def.name) {
            return Err(at(span)(fail(ErrorCode::DuplicateName, format!("`{}` is already defined", def.name))));
        }
        let ctx = self.telescope(level, &def.telescope, span)?;
        let item = match &def.body {
            Some(body) => {
                let ty = self.ty(level, &ctx, &def.ty, span)?;
                let (tm, _) = self.tm(level, &ctx, body)?;
                self.file.check_tm(&ctx, &tm, &ty).map_err(at(body.pos()))?;
                Item::Let(LetDef { ctx, ty, body: tm })
            }
            None => {
                check_ps(&ctx).map_err(|e| at(span)(e.into()))?;
                let ty = self.ty(Level::Index, &ctx, &def.ty, span)?;
                let kind = self.kind(kw, &ctx, &ty).map_err(at(span))?;
                let (theory, checker) = if kw.is_mcoh() { (TheoryId::Mcatt, &self.file) } else { (TheoryId::Catt, &self.catt) };
                let h = Head::new(kind, theory, ctx, ty, Some(&def.name));
                checker.validate_head(&h).map_err(at(span))?;
                Item::Coh(h)
            }
        };
        let names = if self.split() && home == Level::Index { &mut self.index_names } else { &mut self.names };
        names.insert(def.name.clone(), item.clone());
        Ok(item)
    }

    fn kind(&self, kw: Keyword, ps: &Ctx, ty: &Ty) -> Result<CohKind, KernelError> {
        let c = &self.catt;
        match kw {
            Keyword::CohOp | Keyword::Mop => c.check_op_side(ps, ty).map(|_| CohKind::Op),
            Keyword::CohEq | Keyword::Meq => c.check_eq_side(ps, ty).map(|_| CohKind::Eq),
            _ => match c.check_op_side(ps, ty) {
                Ok(()) => Ok(CohKind::Op),
                Err(op) => c.check_eq_side(ps, ty).map(|_| CohKind::Eq).map_err(|eq| {
                    let rule = if kw.is_mcoh() { Rule::McohIntro } else { Rule::CohIntro };
                    KernelError::new(
                        ErrorCode::SideConditionViolation,
                        rule,
                        format!("neither side condition holds; as an operation: {}; as a coherence: {}", op.detail, eq.detail),
                    )
                }),
            },
        }
    }

    /// Elaborates binders at the level of the file's theory.
    pub fn context(&self, binders: &[(String, STy)], span: Span) -> Result<Ctx, Located> {
        self.telescope(Level::File, binders, span)
    }

    fn telescope(&self, level: Level, binders: &[(String, STy)], span: Span) -> Result<Ctx, Located> {
        let mut ctx = Ctx::new();
        for (x, sty) in binders {
            let x = Var::new(x);
            if ctx.contains(&x) {
                return Err(at(span)(KernelError::new(
                    ErrorCode::DuplicateVar,
                    Rule::Ce,
                    format!("variable {x} is declared twice"),
                )));
            }
            let a = self.ty(level, &ctx, sty, span)?;
            ctx.push(x, a);
        }
        Ok(ctx)
    }

    fn ty(&self, level: Level, ctx: &Ctx, sty: &STy, span: Span) -> Result<Ty, Located> {
        let ty = self.ty_raw(level, ctx, sty)?;
        self.checker(level).check_ty(ctx, &ty).map_err(at(ty_span(sty).unwrap_or(span)))?;
        Ok(ty)
    }

    fn ty_raw(&self, level: Level, ctx: &Ctx, sty: &STy) -> Result<Ty, Located> {
        Ok(match sty {
            STy::Obj => Ty::Obj,
            STy::Unit => Ty::Unit,
            STy::Arrow(t, u) => {
                let (t, a) = self.tm(level, ctx, t)?;
                let (u, _) = self.tm(level, ctx, u)?;
                Ty::hom(a, t, u)
            }
            STy::Hom(a, t, u) => Ty::hom(self.ty_raw(level, ctx, a)?, self.tm(level, ctx, t)?.0, self.tm(level, ctx, u)?.0),
        })
    }

    /// Elaborates a term and returns it with its (normal) type.
    pub fn tm(&self, level: Level, ctx: &Ctx, stm: &STm) -> Result<(Tm, Ty), Located> {
        let k = self.checker(level);
        let span = stm.pos();
        let (name, sub) = match stm {
            STm::Unit(_) => {
                let a = k.infer_tm(ctx, &Tm::Unit).map_err(at(span))?;
                return Ok((Tm::Unit, a));
            }
            STm::App(x, _, _) | STm::Explicit(x, _, _) if ctx.contains(&Var::new(x)) => {
                if !matches!(stm, STm::App(_, args, _) if args.is_empty()) {
                    return Err(at(span)(fail(
                        ErrorCode::ElaborationMismatch,
                        format!("{x} is a variable and takes no arguments"),
                    )));
                }
                let t = Tm::var(x);
                let a = k.infer_tm(ctx, &t).map_err(at(span))?;
                return Ok((t, a));
            }
            STm::App(name, args, _) => {
                let (target, skip_unit) = self.signature(level, name, span)?;
                (name, self.compact(level, ctx, name, &target, skip_unit, args, span)?)
            }
            STm::Explicit(name, comps, _) => {
                let (target, skip_unit) = self.signature(level, name, span)?;
                (name, self.explicit(level, ctx, name, &target, skip_unit, comps, span)?)
            }
        };
        match self.resolve(level, name, span)? {
            Item::Coh(h) => {
                let t = Tm::Coh(Arc::clone(h), sub);
                let a = k.infer_tm(ctx, &t).map_err(at(span))?;
                Ok((t, a))
            }
            Item::Let(d) => {
                k.check_sub(ctx, &sub, &d.ctx).map_err(at(span))?;
                let unbound = |e| at(span)(KernelError::unbound(Rule::Surface, e));
                let t = d.body.apply(&sub).map_err(unbound)?;
                let a = d.ty.apply(&sub).map_err(unbound)?;
                Ok((t, k.normal_ty(ctx, &a)))
            }
        }
    }

    fn resolve(&self, level: Level, name: &str, span: Span) -> Result<&Item, Located> {
        if let Some(item) = self.lookup(level, name) {
            return Ok(item);
        }
        let other = if level == Level::Index { Level::File } else { Level::Index };
        let error = if self.split() && self.lookup(other, name).is_some() {
            let detail = match level {
                Level::Index => format!("`{name}` is an MCaTT definition and cannot be used inside a coherence index"),
                Level::File => format!("`{name}` is a CaTT coherence; declare it with `mcoh` to use it in MCaTT terms"),
            };
            fail(ErrorCode::TheoryViolation, detail)
        } else {
            fail(ErrorCode::UnboundVariable, format!("unknown name `{name}`"))
        };
        Err(at(span)(error))
    }

    /// The context a definition's arguments are checked against, and whether
    /// its unit-typed binders are filled implicitly.
    fn signature(&self, level: Level, name: &str, span: Span) -> Result<(Ctx, bool), Located> {
        Ok(match self.resolve(level, name, span)? {
            Item::Coh(h) if h.theory() == TheoryId::Mcatt => (desusp_ctx(h.ps()), true),
            Item::Coh(h) => (h.ps().clone(), false),
            Item::Let(d) => (d.ctx.clone(), self.checker(level).theory().has_unit()),
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn compact(
        &self,
        level: Level,
        ctx: &Ctx,
        name: &str,
        target: &Ctx,
        skip_unit: bool,
        args: &[STm],
        span: Span,
    ) -> Result<Sub, Located> {
        let positions = explicit_positions(target, skip_unit);
        if args.len() != positions.len() {
            let expected: Vec<String> = positions.iter().map(|&p| target.bindings()[p].0.to_string()).collect();
            return Err(at(span)(fail(
                ErrorCode::ElaborationMismatch,
                format!("`{name}` takes {} arguments [{}], got {}", positions.len(), expected.join(", "), args.len()),
            )));
        }
        let mut m = Matcher::new(self.checker(level), ctx, target);
        if skip_unit {
            for (i, (_, a)) in target.iter().enumerate() {
                if *a == Ty::Unit {
                    m.assign(i, Tm::Unit, Some(Ty::Unit)).map_err(at(span))?;
                }
            }
        }
        for (&p, a) in positions.iter().zip(args) {
            let (t, ty) = self.tm(level, ctx, a)?;
            m.assign(p, t, Some(ty)).map_err(at(a.pos()))?;
        }
        m.run().map_err(at(span))?;
        m.finish(name).map_err(at(span))
    }

    #[allow(clippy::too_many_arguments)]
    fn explicit(
        &self,
        level: Level,
        ctx: &Ctx,
        name: &str,
        target: &Ctx,
        skip_unit: bool,
        comps: &[(String, STm)],
        span: Span,
    ) -> Result<Sub, Located> {
        let mut m = Matcher::new(self.checker(level), ctx, target);
        let mut given = vec![false; target.len()];
        for (x, t) in comps {
            let Some(i) = target.vars().position(|y| y.name() == x) else {
                return Err(at(t.pos())(fail(ErrorCode::ElaborationMismatch, format!("`{name}` has no binder {x}"))));
            };
            if std::mem::replace(&mut given[i], true) {
                return Err(at(t.pos())(fail(ErrorCode::ElaborationMismatch, format!("{x} is given twice"))));
            }
            let (t2, ty) = self.tm(level, ctx, t)?;
            m.assign(i, t2, Some(ty)).map_err(at(t.pos()))?;
        }
        if skip_unit {
            for (i, (_, a)) in target.iter().enumerate() {
                if *a == Ty::Unit && !given[i] {
                    m.assign(i, Tm::Unit, Some(Ty::Unit)).map_err(at(span))?;
                }
            }
        }
        m.run().map_err(at(span))?;
        m.finish(name).map_err(at(span))
    }
}

/// First-order matching of target binder types against argument types.
struct Matcher<'a> {
    k: &'a Checker,
    ctx: &'a Ctx,
    target: &'a Ctx,
    index: HashMap<Var, usize>,
    patterns: Vec<Ty>,
    assigned: Vec<Option<Tm>>,
    known_types: Vec<Option<Ty>>,
    queue: Vec<usize>,
    /// Coherence patterns whose variables were not all known yet.
    pending: Vec<(Tm, Tm)>,
}

impl<'a> Matcher<'a> {
    fn new(k: &'a Checker, ctx: &'a Ctx, target: &'a Ctx) -> Matcher<'a> {
        let patterns = target.iter().enumerate().map(|(i, (_, a))| k.normal_ty(&target.prefix(i), a)).collect();
        Matcher {
            k,
            ctx,
            target,
            index: target.vars().enumerate().map(|(i, x)| (x.clone(), i)).collect(),
            patterns,
            assigned: vec![None; target.len()],
            known_types: vec![None; target.len()],
            queue: Vec::new(),
            pending: Vec::new(),
        }
    }

    fn assign(&mut self, i: usize, t: Tm, ty: Option<Ty>) -> Result<(), KernelError> {
        match &self.assigned[i] {
            Some(prev) if self.k.tm_defeq(self.ctx, prev, &t) => Ok(()),
            Some(prev) => Err(fail(
                ErrorCode::ElaborationMismatch,
                format!("{} is determined as both {prev} and {t}", self.target.bindings()[i].0),
            )),
            None => {
                self.assigned[i] = Some(t);
                self.known_types[i] = ty;
                self.queue.push(i);
                Ok(())
            }
        }
    }

    fn run(&mut self) -> Result<(), KernelError> {
        loop {
            self.drain()?;
            let before = self.pending.len();
            for (pat, actual) in std::mem::take(&mut self.pending) {
                self.match_tm(&pat, &actual)?;
            }
            if self.queue.is_empty() && self.pending.len() == before {
                return Ok(());
            }
        }
    }

    fn drain(&mut self) -> Result<(), KernelError> {
        while let Some(i) = self.queue.pop() {
            let ty = match self.known_types[i].take() {
                Some(ty) => ty,
                None => self.k.infer_tm(self.ctx, self.assigned[i].as_ref().expect("queued components are assigned"))?,
            };
            let pat = self.patterns[i].clone();
            self.match_ty(&pat, &ty).map_err(|e| {
                let x = &self.target.bindings()[i].0;
                fail(e.code, format!("{x}: {}", e.detail))
            })?;
        }
        Ok(())
    }

    fn mismatch(pat: impl std::fmt::Display, actual: impl std::fmt::Display) -> KernelError {
        fail(ErrorCode::ElaborationMismatch, format!("cannot match {actual} against {pat}"))
    }

    fn match_ty(&mut self, pat: &Ty, actual: &Ty) -> Result<(), KernelError> {
        match (pat, actual) {
            (Ty::Obj, Ty::Obj) | (Ty::Unit, Ty::Unit) => Ok(()),
            (Ty::Hom(a, t, u), Ty::Hom(b, t2, u2)) => {
                self.match_ty(a, b)?;
                self.match_tm(t, t2)?;
                self.match_tm(u, u2)
            }
            _ => Err(Self::mismatch(pat, actual)),
        }
    }

    fn match_tm(&mut self, pat: &Tm, actual: &Tm) -> Result<(), KernelError> {
        match (pat, actual) {
            (Tm::Var(x), _) if self.index.contains_key(x) => self.assign(self.index[x], actual.clone(), None),
            (Tm::Coh(h, ps), Tm::Coh(h2, qs)) if h == h2 && ps.len() == qs.len() => {
                for ((_, p), (_, q)) in ps.iter().zip(qs.iter()) {
                    self.match_tm(p, q)?;
                }
                Ok(())
            }
            _ if pat.var_set().iter().any(|x| self.index.get(x).is_some_and(|&i| self.assigned[i].is_none())) => {
                self.pending.push((pat.clone(), actual.clone()));
                Ok(())
            }
            _ => {
                let partial: Sub = self
                    .target
                    .vars()
                    .zip(&self.assigned)
                    .filter_map(|(x, t)| t.as_ref().map(|t| (x.clone(), t.clone())))
                    .collect();
                match pat.apply(&partial) {
                    Ok(t) if self.k.tm_defeq(self.ctx, &t, actual) => Ok(()),
                    _ => Err(Self::mismatch(pat, actual)),
                }
            }
        }
    }

    fn finish(self, name: &str) -> Result<Sub, KernelError> {
        let missing: Vec<String> = self
            .target
            .vars()
            .zip(&self.assigned)
            .filter(|(_, t)| t.is_none())
            .map(|(x, _)| x.to_string())
            .collect();
        if !missing.is_empty() {
            return Err(fail(
                ErrorCode::ElaborationAmbiguous,
                format!("cannot infer {} for `{name}`; give them with `{name} @[...]`", missing.join(", ")),
            ));
        }
        Ok(self.target.vars().cloned().zip(self.assigned.into_iter().flatten()).collect())
    }
}
