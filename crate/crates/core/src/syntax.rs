//! Raw syntax shared by the four theories.
//!
//! Contexts and substitutions are ordered association lists. Variables are
//! compared by name; the only exception is the reserved base variable `♦`,
//! which is a separate constructor and can never be written in a source file.
//! Coherence heads carry their index `(Γ, A)` as CaTT data in every theory and
//! compare up to a canonical renaming of the index context.

use std::collections::{BTreeSet, HashMap};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::Serialize;

/// A variable. `Base` is the fresh point `♦` introduced by reduced suspension.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Var {
    Name(Arc<str>),
    Base,
}

impl Var {
    pub fn new(name: &str) -> Var {
        Var::Name(Arc::from(name))
    }

    pub fn base() -> Var {
        Var::Base
    }

    pub fn is_reserved(&self) -> bool {
        matches!(self, Var::Base)
    }

    pub fn name(&self) -> &str {
        match self {
            Var::Name(n) => n,
            Var::Base => "♦",
        }
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Var {
        Var::new(s)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TheoryId {
    Glob,
    Catt,
    GlobUnit,
    Mcatt,
}

impl TheoryId {
    /// Theories containing the unit type, its constant and η-rule.
    pub fn has_unit(self) -> bool {
        matches!(self, TheoryId::GlobUnit | TheoryId::Mcatt)
    }

    pub fn has_coherences(self) -> bool {
        matches!(self, TheoryId::Catt | TheoryId::Mcatt)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TheoryId::Glob => "GLOB",
            TheoryId::Catt => "CATT",
            TheoryId::GlobUnit => "GLOB_UNIT",
            TheoryId::Mcatt => "MCATT",
        }
    }

    pub fn parse(s: &str) -> Option<TheoryId> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "glob" => Some(TheoryId::Glob),
            "catt" => Some(TheoryId::Catt),
            "glob_unit" => Some(TheoryId::GlobUnit),
            "mcatt" => Some(TheoryId::Mcatt),
            _ => None,
        }
    }
}

/// Operation (`cohop`/`mop`) or coherence (`coh`/`mcoh`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CohKind {
    Op,
    Eq,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Ty {
    Obj,
    Unit,
    Hom(Box<Ty>, Tm, Tm),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Tm {
    Var(Var),
    /// The unit constant `()`.
    Unit,
    Coh(Arc<Head>, Sub),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Ctx(Vec<(Var, Ty)>);

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Sub(Vec<(Var, Tm)>);

/// Head of a coherence term: kind, owning theory and its CaTT index `(Γ, A)`.
///
/// Equality and hashing ignore the display name and the binder names of the
/// index: two heads are equal when their indices agree after renaming the index
/// context to `v0, v1, …` in telescope order.
#[derive(Debug)]
pub struct Head {
    kind: CohKind,
    theory: TheoryId,
    ps: Ctx,
    ty: Ty,
    name: Option<Arc<str>>,
    canon: Arc<(Ctx, Ty)>,
}

impl Head {
    pub fn new(kind: CohKind, theory: TheoryId, ps: Ctx, ty: Ty, name: Option<&str>) -> Arc<Head> {
        let (renaming, canon_ps) = ps.canonical();
        let canon_ty = ty.rename(&renaming);
        Arc::new(Head {
            kind,
            theory,
            ps,
            ty,
            name: name.map(Arc::from),
            canon: Arc::new((canon_ps, canon_ty)),
        })
    }

    /// Same index and kind, owned by another theory (`coh` ↔ `mcoh`).
    pub fn with_theory(&self, theory: TheoryId) -> Arc<Head> {
        Arc::new(Head {
            kind: self.kind,
            theory,
            ps: self.ps.clone(),
            ty: self.ty.clone(),
            name: self.name.clone(),
            canon: Arc::clone(&self.canon),
        })
    }

    pub fn renamed(&self, name: &str) -> Arc<Head> {
        Arc::new(Head {
            kind: self.kind,
            theory: self.theory,
            ps: self.ps.clone(),
            ty: self.ty.clone(),
            name: Some(Arc::from(name)),
            canon: Arc::clone(&self.canon),
        })
    }

    pub fn kind(&self) -> CohKind {
        self.kind
    }

    pub fn theory(&self) -> TheoryId {
        self.theory
    }

    pub fn ps(&self) -> &Ctx {
        &self.ps
    }

    pub fn ty(&self) -> &Ty {
        &self.ty
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn canonical_index(&self) -> (&Ctx, &Ty) {
        (&self.canon.0, &self.canon.1)
    }
}

impl PartialEq for Head {
    fn eq(&self, other: &Head) -> bool {
        self.kind == other.kind && self.theory == other.theory && self.canon == other.canon
    }
}

impl Eq for Head {}

impl Hash for Head {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.kind.hash(state);
        self.theory.hash(state);
        self.canon.hash(state);
    }
}

impl Ty {
    pub fn hom(base: Ty, src: Tm, tgt: Tm) -> Ty {
        Ty::Hom(Box::new(base), src, tgt)
    }

    /// `Hom(⊤, (), ())`, the normal form of `Obj` in theories with a unit type.
    pub fn unit_obj() -> Ty {
        Ty::hom(Ty::Unit, Tm::Unit, Tm::Unit)
    }

    /// `dim ⊤ = −2`, `dim Obj = 0`, `dim Hom(A, t, u) = dim A + 1`.
    pub fn dim(&self) -> i64 {
        match self {
            Ty::Unit => -2,
            Ty::Obj => 0,
            Ty::Hom(base, _, _) => base.dim() + 1,
        }
    }

    pub fn rename(&self, map: &HashMap<Var, Var>) -> Ty {
        match self {
            Ty::Obj => Ty::Obj,
            Ty::Unit => Ty::Unit,
            Ty::Hom(a, t, u) => Ty::hom(a.rename(map), t.rename(map), u.rename(map)),
        }
    }
}

impl Tm {
    pub fn var(name: &str) -> Tm {
        Tm::Var(Var::new(name))
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Tm::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn rename(&self, map: &HashMap<Var, Var>) -> Tm {
        match self {
            Tm::Var(v) => Tm::Var(map.get(v).cloned().unwrap_or_else(|| v.clone())),
            Tm::Unit => Tm::Unit,
            Tm::Coh(h, args) => Tm::Coh(Arc::clone(h), args.rename_terms(map)),
        }
    }

    /// Number of nested coherence heads along the deepest path.
    pub fn coh_depth(&self) -> usize {
        match self {
            Tm::Var(_) | Tm::Unit => 0,
            Tm::Coh(_, args) => 1 + args.terms().map(Tm::coh_depth).max().unwrap_or(0),
        }
    }
}

impl Ctx {
    pub fn new() -> Ctx {
        Ctx(Vec::new())
    }

    pub fn from_bindings(bindings: Vec<(Var, Ty)>) -> Ctx {
        Ctx(bindings)
    }

    pub fn push(&mut self, var: Var, ty: Ty) {
        self.0.push((var, ty));
    }

    pub fn extended(&self, var: Var, ty: Ty) -> Ctx {
        let mut c = self.clone();
        c.push(var, ty);
        c
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bindings(&self) -> &[(Var, Ty)] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Var, Ty)> {
        self.0.iter()
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.0.iter().map(|(v, _)| v)
    }

    /// Type of the rightmost binding of `var`.
    pub fn lookup(&self, var: &Var) -> Option<&Ty> {
        self.0.iter().rev().find(|(v, _)| v == var).map(|(_, t)| t)
    }

    pub fn contains(&self, var: &Var) -> bool {
        self.0.iter().any(|(v, _)| v == var)
    }

    pub fn prefix(&self, n: usize) -> Ctx {
        Ctx(self.0[..n].to_vec())
    }

    /// Context with its last binder removed.
    pub fn drop_last(&self) -> Ctx {
        let mut c = self.clone();
        c.0.pop();
        c
    }

    /// Maximal binder dimension, `None` for the empty context.
    pub fn dim(&self) -> Option<i64> {
        self.0.iter().map(|(_, t)| t.dim()).max()
    }

    /// Renaming to `v0, v1, …` in telescope order, and the renamed context.
    pub fn canonical(&self) -> (HashMap<Var, Var>, Ctx) {
        let renaming: HashMap<Var, Var> = self
            .0
            .iter()
            .enumerate()
            .map(|(i, (v, _))| (v.clone(), Var::new(&format!("v{i}"))))
            .collect();
        let ctx = Ctx(self
            .0
            .iter()
            .map(|(v, t)| (renaming[v].clone(), t.rename(&renaming)))
            .collect());
        (renaming, ctx)
    }

    pub fn rename(&self, map: &HashMap<Var, Var>) -> Ctx {
        Ctx(self
            .0
            .iter()
            .map(|(v, t)| (map.get(v).cloned().unwrap_or_else(|| v.clone()), t.rename(map)))
            .collect())
    }
}

impl FromIterator<(Var, Ty)> for Ctx {
    fn from_iter<I: IntoIterator<Item = (Var, Ty)>>(iter: I) -> Ctx {
        Ctx(iter.into_iter().collect())
    }
}

impl Sub {
    pub fn new() -> Sub {
        Sub(Vec::new())
    }

    pub fn from_maps(maps: Vec<(Var, Tm)>) -> Sub {
        Sub(maps)
    }

    pub fn push(&mut self, var: Var, tm: Tm) {
        self.0.push((var, tm));
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn maps(&self) -> &[(Var, Tm)] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Var, Tm)> {
        self.0.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.0.iter().map(|(v, _)| v)
    }

    pub fn terms(&self) -> impl Iterator<Item = &Tm> {
        self.0.iter().map(|(_, t)| t)
    }

    pub fn prefix(&self, n: usize) -> Sub {
        Sub(self.0[..n].to_vec())
    }

    /// Mapping for `var`, read from the right.
    pub fn lookup(&self, var: &Var) -> Option<&Tm> {
        self.0.iter().rev().find(|(v, _)| v == var).map(|(_, t)| t)
    }

    pub fn rename_terms(&self, map: &HashMap<Var, Var>) -> Sub {
        Sub(self.0.iter().map(|(v, t)| (v.clone(), t.rename(map))).collect())
    }
}

impl FromIterator<(Var, Tm)> for Sub {
    fn from_iter<I: IntoIterator<Item = (Var, Tm)>>(iter: I) -> Sub {
        Sub(iter.into_iter().collect())
    }
}

/// Variable sets of raw expressions.
pub trait VarSet {
    fn collect_vars(&self, out: &mut BTreeSet<Var>);

    fn var_set(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }
}

impl VarSet for Ty {
    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        if let Ty::Hom(a, t, u) = self {
            a.collect_vars(out);
            t.collect_vars(out);
            u.collect_vars(out);
        }
    }
}

impl VarSet for Tm {
    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Tm::Var(v) => {
                out.insert(v.clone());
            }
            Tm::Unit => {}
            Tm::Coh(_, args) => args.collect_vars(out),
        }
    }
}

impl VarSet for Sub {
    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        for t in self.terms() {
            t.collect_vars(out);
        }
    }
}

impl VarSet for Ctx {
    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        out.extend(self.vars().cloned());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Tm {
        Tm::var(s)
    }

    pub(crate) fn comp_ps() -> Ctx {
        Ctx::from_bindings(vec![
            ("x".into(), Ty::Obj),
            ("y".into(), Ty::Obj),
            ("f".into(), Ty::hom(Ty::Obj, v("x"), v("y"))),
            ("z".into(), Ty::Obj),
            ("g".into(), Ty::hom(Ty::Obj, v("y"), v("z"))),
        ])
    }

    fn set(names: &[&str]) -> BTreeSet<Var> {
        names.iter().map(|n| Var::new(n)).collect()
    }

    #[test]
    fn hom_var_set_is_union() {
        assert_eq!(Ty::hom(Ty::Obj, v("x"), v("y")).var_set(), set(&["x", "y"]));
    }

    #[test]
    fn unit_constant_has_no_vars() {
        assert!(Tm::Unit.var_set().is_empty());
        assert!(Ty::Unit.var_set().is_empty());
    }

    #[test]
    fn coh_var_set_is_var_set_of_arguments() {
        let head = Head::new(
            CohKind::Op,
            TheoryId::Catt,
            comp_ps(),
            Ty::hom(Ty::Obj, v("x"), v("z")),
            Some("comp"),
        );
        let args = Sub::from_maps(vec![
            ("x".into(), v("a")),
            ("y".into(), v("b")),
            ("f".into(), v("v")),
            ("z".into(), v("c")),
            ("g".into(), v("w")),
        ]);
        assert_eq!(Tm::Coh(head, args).var_set(), set(&["a", "b", "v", "c", "w"]));
    }

    #[test]
    fn dimensions() {
        assert_eq!(Ty::Unit.dim(), -2);
        assert_eq!(Ty::unit_obj().dim(), -1);
        assert_eq!(Ty::Obj.dim(), 0);
        assert_eq!(Ty::hom(Ty::Obj, v("x"), v("y")).dim(), 1);
    }

    #[test]
    fn heads_compare_up_to_renaming() {
        let a = Head::new(CohKind::Op, TheoryId::Catt, comp_ps(), Ty::hom(Ty::Obj, v("x"), v("z")), Some("comp"));
        let renamed = comp_ps().rename(
            &[("x", "a"), ("y", "b"), ("f", "p"), ("z", "c"), ("g", "q")]
                .iter()
                .map(|(s, t)| (Var::new(s), Var::new(t)))
                .collect(),
        );
        let b = Head::new(CohKind::Op, TheoryId::Catt, renamed, Ty::hom(Ty::Obj, v("a"), v("c")), None);
        assert_eq!(a, b);
        assert_ne!(*a, *a.with_theory(TheoryId::Mcatt));
        let c = Head::new(CohKind::Op, TheoryId::Catt, comp_ps(), Ty::hom(Ty::Obj, v("x"), v("y")), Some("comp"));
        assert_ne!(a, c);
    }

    #[test]
    fn reserved_variable_is_distinct_from_any_name() {
        assert_ne!(Var::base(), Var::new("♦"));
        assert!(Var::base().is_reserved());
    }
}
