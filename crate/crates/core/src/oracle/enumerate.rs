//! Enumeration of ps-contexts.
//!
//! [`enumerate_ps`] runs the four rules forwards. [`brute_force_ps`] instead
//! lists every well-scoped telescope of canonical names and keeps those for
//! which [`derivation_search`] finds a ps-derivation. [`dyck_ps`] builds one
//! context per Dyck word. The three must agree.

use std::collections::HashSet;

use super::search::{derivation_search, Goal, Outcome};
use crate::syntax::{Ctx, TheoryId, Tm, Ty, Var};

/// The canonical name of the `i`-th binder.
pub fn canon_var(i: usize) -> Var {
    Var::new(&format!("v{i}"))
}

/// Every ps-context with at most `max_vars` binders, by forward application of
/// `pss`, `pse`, `psd` and `ps`, in order of size and then discovery.
pub fn enumerate_ps(max_vars: usize) -> Vec<Ctx> {
    // states are derivable `Γ ⊢ps x : A`
    let start = (Ctx::from_bindings(vec![(canon_var(0), Ty::Obj)]), canon_var(0), Ty::Obj);
    let mut seen_states = HashSet::new();
    let mut stack = vec![start];
    let mut found = HashSet::new();
    while let Some((ctx, x, a)) = stack.pop() {
        if !seen_states.insert((ctx.clone(), x.clone(), a.clone())) {
            continue;
        }
        match &a {
            // ps
            Ty::Obj => {
                found.insert(ctx.clone());
            }
            // psd
            Ty::Hom(base, _, Tm::Var(y)) => stack.push((ctx.clone(), y.clone(), (**base).clone())),
            Ty::Hom(..) | Ty::Unit => {}
        }
        // pse
        if ctx.len() + 2 <= max_vars {
            let y = canon_var(ctx.len());
            let f = canon_var(ctx.len() + 1);
            let cell = Ty::hom(a.clone(), Tm::Var(x.clone()), Tm::Var(y.clone()));
            let mut next = ctx.extended(y, a.clone());
            next.push(f.clone(), cell.clone());
            stack.push((next, f, cell));
        }
    }
    sorted(found)
}

fn sorted(found: HashSet<Ctx>) -> Vec<Ctx> {
    let mut out: Vec<Ctx> = found.into_iter().collect();
    out.sort_by_cached_key(|c| (c.len(), c.to_string()));
    out
}

/// Well-typed telescopes over canonical names whose binder types are `*` or
/// `Hom(B, a, b)` with `a, b : B` declared earlier.
fn telescopes(max_vars: usize) -> Vec<Ctx> {
    let mut out = Vec::new();
    let mut layer = vec![Ctx::new()];
    for _ in 0..max_vars {
        let mut next = Vec::new();
        for ctx in &layer {
            let n = ctx.len();
            let mut choices = vec![Ty::Obj];
            for (a, ta) in ctx.iter() {
                for (b, tb) in ctx.iter() {
                    if ta == tb {
                        choices.push(Ty::hom(ta.clone(), Tm::Var(a.clone()), Tm::Var(b.clone())));
                    }
                }
            }
            for ty in choices {
                next.push(ctx.extended(canon_var(n), ty));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Every ps-context with at most `max_vars` binders, filtered out of all
/// candidate telescopes by derivation search.
pub fn brute_force_ps(max_vars: usize) -> Vec<Ctx> {
    let fuel = 4 * max_vars as u32 + 8;
    let found = telescopes(max_vars)
        .into_iter()
        .filter(|c| {
            let o = derivation_search(TheoryId::Catt, &Goal::Ps(c.clone()), fuel);
            assert_ne!(o, Outcome::OutOfFuel, "fuel too small for {c}");
            o == Outcome::Found
        })
        .collect();
    sorted(found)
}

/// The ps-context read off a Dyck word: `true` opens a new cell on the current
/// dangling variable, `false` moves to the target of the dangling cell.
pub fn ps_of_dyck(word: &[bool]) -> Ctx {
    let mut ctx = Ctx::from_bindings(vec![(canon_var(0), Ty::Obj)]);
    let mut dangling = (canon_var(0), Ty::Obj);
    for &up in word {
        if up {
            let y = canon_var(ctx.len());
            let f = canon_var(ctx.len() + 1);
            let cell = Ty::hom(dangling.1.clone(), Tm::Var(dangling.0.clone()), Tm::Var(y.clone()));
            ctx.push(y, dangling.1.clone());
            ctx.push(f.clone(), cell.clone());
            dangling = (f, cell);
        } else {
            let Ty::Hom(base, _, Tm::Var(y)) = &dangling.1 else { panic!("unbalanced Dyck word") };
            dangling = (y.clone(), (**base).clone());
        }
    }
    ctx
}

fn dyck_words(n: usize) -> Vec<Vec<bool>> {
    fn go(open: usize, depth: usize, n: usize, cur: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if open == n && depth == 0 {
            out.push(cur.clone());
            return;
        }
        if open < n {
            cur.push(true);
            go(open + 1, depth + 1, n, cur, out);
            cur.pop();
        }
        if depth > 0 {
            cur.push(false);
            go(open, depth - 1, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, 0, n, &mut Vec::new(), &mut out);
    out
}

/// Every ps-context with at most `max_vars` binders, one per Dyck word.
pub fn dyck_ps(max_vars: usize) -> Vec<Ctx> {
    let found = (0..=max_vars.saturating_sub(1) / 2).flat_map(dyck_words).map(|w| ps_of_dyck(&w)).collect();
    sorted(found)
}
