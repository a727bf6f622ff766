//! Whole-file operations behind the command-line subcommands.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::ast::{Def, Keyword};
use super::elab::{Env, Item, LetDef, Level};
use super::parser::parse;
use super::Located;
use crate::kernel::{normalize_ctx, CheckReport, ErrorCode, KernelError, Rule};
use crate::syntax::{Ctx, Head, TheoryId, Tm, Ty, Var, VarSet};
use crate::translate::{desusp_ctx, rsusp_ctx, translate, verify_adjunction, AdjReport, Direction, Judgment};

/// Outcome of one definition.
#[derive(Clone, Debug)]
pub struct ItemReport {
    pub name: String,
    pub keyword: Keyword,
    pub report: CheckReport,
    pub item: Option<Item>,
}

#[derive(Clone, Debug)]
pub struct FileReport {
    pub theory: TheoryId,
    /// Set when the file does not parse; no item is checked then.
    pub parse_error: Option<CheckReport>,
    pub items: Vec<ItemReport>,
}

impl FileReport {
    pub fn accepted(&self) -> bool {
        self.parse_error.is_none() && self.items.iter().all(|i| i.report.accepted())
    }

    /// Every report in file order.
    pub fn reports(&self) -> impl Iterator<Item = &CheckReport> {
        self.parse_error.iter().chain(self.items.iter().map(|i| &i.report))
    }

    pub fn first_error(&self) -> Option<&CheckReport> {
        self.reports().find(|r| !r.accepted())
    }

    fn accepted_items(&self) -> impl Iterator<Item = (&str, &Item)> {
        self.items.iter().filter_map(|i| i.item.as_ref().map(|it| (i.name.as_str(), it)))
    }
}

/// The theory selected by a file's extension.
pub fn theory_of_path(path: &Path) -> Option<TheoryId> {
    match path.extension()?.to_str()? {
        "catt" => Some(TheoryId::Catt),
        "mcatt" => Some(TheoryId::Mcatt),
        _ => None,
    }
}

fn judgment_of(def: &Def) -> String {
    let mut head = def.clone();
    head.body = None;
    head.to_string()
}

fn describe(item: &Item) -> (String, Option<Ty>) {
    match item {
        Item::Coh(h) => {
            let side = match h.kind() {
                crate::CohKind::Op => "⊢op",
                crate::CohKind::Eq => "⊢eq",
            };
            (format!("{} {side} {}", h.ps(), h.ty()), Some(h.ty().clone()))
        }
        Item::Let(d) => (format!("{} ⊢ {} : {}", d.ctx, d.body, d.ty), Some(d.ty.clone())),
    }
}

/// Parses and checks every definition of `text`, in order.
pub fn check_source(text: &str, theory: TheoryId) -> FileReport {
    let file = match parse(text) {
        Ok(f) => f,
        Err(e) => {
            let r = CheckReport::reject("source file", e.error).with_span(e.span);
            return FileReport { theory, parse_error: Some(r), items: Vec::new() };
        }
    };
    let mut env = Env::new(theory);
    let items = file
        .items
        .iter()
        .map(|def| {
            let (report, item) = match env.define(def) {
                Ok(item) => {
                    let (judgment, ty) = describe(&item);
                    (CheckReport::accept(judgment, ty), Some(item))
                }
                Err(e) => (CheckReport::reject(judgment_of(def), e.error).with_span(e.span), None),
            };
            ItemReport { name: def.name.clone(), keyword: def.keyword, report, item }
        })
        .collect();
    FileReport { theory, parse_error: None, items }
}

fn surface_error(code: ErrorCode, detail: impl Into<String>) -> KernelError {
    KernelError::new(code, Rule::Surface, detail)
}

/// A name for `♦` that is not bound in `ctx`.
fn base_name(ctx: &Ctx) -> Var {
    let used = ctx.var_set();
    let mut name = "pt".to_owned();
    while used.contains(&Var::new(&name)) {
        name.push('\'');
    }
    Var::new(&name)
}

fn coh_line(keyword: &str, name: &str, h: &Head) -> String {
    let mut s = format!("{keyword} {name}");
    for (x, a) in h.ps().iter() {
        write!(s, " ({x} : {a})").unwrap();
    }
    write!(s, " : {}", h.ty()).unwrap();
    s
}

fn let_line(name: &str, ctx: &Ctx, ty: &Ty, body: &Tm) -> String {
    let mut s = format!("let {name}");
    for (x, a) in ctx.iter() {
        write!(s, " ({x} : {a})").unwrap();
    }
    write!(s, " : {ty} = {body}").unwrap();
    s
}

/// Translates every definition of an accepted file into a source file of
/// the target theory. Coherences become coherences with the same index; a
/// `let` is translated as the judgment `Γ ⊢ body : ty`.
pub fn translate_file(report: &FileReport, dir: Direction) -> Result<String, KernelError> {
    if report.theory != dir.source() {
        return Err(surface_error(
            ErrorCode::TheoryViolation,
            format!("this translation reads {} files, not {}", dir.source().as_str(), report.theory.as_str()),
        ));
    }
    if let Some(r) = report.first_error() {
        let e = r.error.as_ref().expect("rejected reports carry an error");
        return Err(KernelError::new(e.code, e.rule, format!("the file does not check: {}", e.detail)));
    }
    let mut out = String::new();
    let mut catt_heads: HashMap<&str, &Head> = HashMap::new();
    for (name, item) in report.accepted_items() {
        match (item, dir) {
            (Item::Coh(h), Direction::Desusp) => {
                writeln!(out, "{}", coh_line("coh", name, h)).unwrap();
                writeln!(out, "{}", coh_line("mcoh", name, h)).unwrap();
            }
            (Item::Coh(h), Direction::Rsusp) => {
                let catt = h.with_theory(TheoryId::Catt);
                match catt_heads.get(name) {
                    Some(prev) if **prev == *catt => continue,
                    Some(_) => {
                        return Err(surface_error(
                            ErrorCode::DuplicateName,
                            format!("`{name}` names two different CaTT coherences"),
                        ))
                    }
                    None => {}
                }
                catt_heads.insert(name, h);
                writeln!(out, "{}", coh_line("coh", name, h)).unwrap();
            }
            (Item::Let(LetDef { ctx, ty, body }), _) => {
                let j = Judgment::Tm(ctx.clone(), body.clone(), ty.clone());
                let Judgment::Tm(c, t, a) = translate(&j, dir)? else { unreachable!("term judgments translate to term judgments") };
                let rho = HashMap::from([(Var::Base, base_name(&c))]);
                writeln!(out, "{}", let_line(name, &c.rename(&rho), &a.rename(&rho), &t.rename(&rho))).unwrap();
            }
        }
    }
    Ok(out)
}

/// The pair of contexts the adjunction laws are checked on for one item.
fn adjunction_pair(theory: TheoryId, item: &Item) -> Result<(Ctx, Ctx), KernelError> {
    let catt = |c: &Ctx| (c.clone(), normalize_ctx(&desusp_ctx(c)));
    match item {
        Item::Coh(h) => Ok(catt(h.ps())),
        Item::Let(d) if theory.has_unit() => Ok((rsusp_ctx(&normalize_ctx(&d.ctx))?, d.ctx.clone())),
        Item::Let(d) => Ok(catt(&d.ctx)),
    }
}

/// Runs [`verify_adjunction`] on the context of every accepted definition.
pub fn adjunction_file(report: &FileReport) -> Result<Vec<(String, AdjReport)>, KernelError> {
    report
        .accepted_items()
        .map(|(name, item)| {
            let (gc, gm) = adjunction_pair(report.theory, item)?;
            Ok((name.to_owned(), verify_adjunction(&gc, &gm)))
        })
        .collect()
}

/// Elaborates `term` in the context given by the binders `ctx`, after the
/// definitions of `prelude`.
pub fn elaborate_term(prelude: &str, theory: TheoryId, ctx: &str, term: &str) -> Result<(Ctx, Tm, Ty), Located> {
    let file = parse(&format!("{prelude}\nlet _probe {ctx} : * = {term}"))?;
    let (probe, defs) = file.items.split_last().expect("the probe is present");
    let mut env = Env::new(theory);
    for d in defs {
        env.define(d)?;
    }
    let ctx = env.context(&probe.telescope, probe.pos.0)?;
    let (t, a) = env.tm(Level::File, &ctx, probe.body.as_ref().expect("let has a body"))?;
    Ok((ctx, t, a))
}
