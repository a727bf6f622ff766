//! Surface rendering of core syntax.
//!
//! `{}` uses the compact notation (`t -> u`, `comp f g`); `{:#}` prints every
//! Hom base and every coherence argument (`Hom[*](x, y)`, `comp @[x := a, …]`).
//! Both forms are accepted by the parser, except that `♦` has no surface
//! spelling.

use std::fmt::{self, Display, Formatter};

use crate::syntax::{Ctx, Head, Sub, TheoryId, Tm, Ty, Var};

impl Display for Var {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Display for Ty {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Obj => f.write_str("*"),
            Ty::Unit => f.write_str("1"),
            Ty::Hom(a, Tm::Unit, Tm::Unit) if **a == Ty::Unit => f.write_str("*"),
            Ty::Hom(a, t, u) => {
                if f.alternate() {
                    write!(f, "Hom[{a:#}]({t:#}, {u:#})")
                } else {
                    write!(f, "{t} -> {u}")
                }
            }
        }
    }
}

/// Positions of the arguments written in compact application syntax.
///
/// A binder is locally maximal when it is neither the source nor the target of
/// a later binder's Hom type. For heads owned by MCaTT the target context is
/// the desuspended index, whose unit-typed binders (the index's objects) are
/// filled with `()` and never written.
pub fn explicit_positions(ctx: &Ctx, skip_unit: bool) -> Vec<usize> {
    let bindings = ctx.bindings();
    (0..bindings.len())
        .filter(|&i| {
            let v = &bindings[i].0;
            let is_boundary = bindings[i + 1..].iter().any(|(_, ty)| match ty {
                Ty::Hom(_, s, t) => s.as_var() == Some(v) || t.as_var() == Some(v),
                _ => false,
            });
            !is_boundary && !(skip_unit && bindings[i].1 == Ty::Unit)
        })
        .collect()
}

pub fn head_positions(head: &Head) -> Vec<usize> {
    let ps = head.ps();
    explicit_positions(ps, false)
        .into_iter()
        .filter(|&i| head.theory() != TheoryId::Mcatt || ps.bindings()[i].1 != Ty::Obj)
        .collect()
}

fn head_name(head: &Head) -> String {
    head.name().map(str::to_owned).unwrap_or_else(|| match head.theory() {
        TheoryId::Mcatt => "mcoh_".to_owned(),
        _ => "coh_".to_owned(),
    })
}

struct Arg<'a>(&'a Tm);

impl Display for Arg<'_> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self.0 {
            Tm::Coh(h, args) if !f.alternate() && !head_positions(h).is_empty() && !args.is_empty() => {
                write!(f, "({})", self.0)
            }
            _ if f.alternate() => write!(f, "{:#}", self.0),
            _ => write!(f, "{}", self.0),
        }
    }
}

impl Display for Tm {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Tm::Var(v) => write!(f, "{v}"),
            Tm::Unit => f.write_str("()"),
            Tm::Coh(h, args) => {
                let name = head_name(h);
                let positions = head_positions(h);
                // compact form only when it lines up with the index telescope
                let aligned = args.len() == h.ps().len();
                if f.alternate() || !aligned {
                    write!(f, "{name} @[")?;
                    for (i, (v, t)) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{v} := {t:#}")?;
                    }
                    f.write_str("]")
                } else {
                    f.write_str(&name)?;
                    for p in positions {
                        write!(f, " {}", Arg(&args.maps()[p].1))?;
                    }
                    Ok(())
                }
            }
        }
    }
}

impl Display for Ctx {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        for (i, (v, t)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if f.alternate() {
                write!(f, "({v} : {t:#})")?;
            } else {
                write!(f, "({v} : {t})")?;
            }
        }
        Ok(())
    }
}

impl Display for Sub {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, (v, t)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if f.alternate() {
                write!(f, "{v} := {t:#}")?;
            } else {
                write!(f, "{v} := {t}")?;
            }
        }
        f.write_str(">")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{CohKind, Head};

    fn comp() -> std::sync::Arc<Head> {
        let ps = Ctx::from_bindings(vec![
            ("x".into(), Ty::Obj),
            ("y".into(), Ty::Obj),
            ("f".into(), Ty::hom(Ty::Obj, Tm::var("x"), Tm::var("y"))),
            ("z".into(), Ty::Obj),
            ("g".into(), Ty::hom(Ty::Obj, Tm::var("y"), Tm::var("z"))),
        ]);
        Head::new(CohKind::Op, TheoryId::Catt, ps, Ty::hom(Ty::Obj, Tm::var("x"), Tm::var("z")), Some("comp"))
    }

    #[test]
    fn compact_application_shows_locally_maximal_args() {
        let args: Sub = ["a", "b", "v", "c", "w"]
            .iter()
            .zip(["x", "y", "f", "z", "g"])
            .map(|(t, x)| (Var::new(x), Tm::var(t)))
            .collect();
        let t = Tm::Coh(comp(), args);
        assert_eq!(t.to_string(), "comp v w");
        assert_eq!(format!("{t:#}"), "comp @[x := a, y := b, f := v, z := c, g := w]");
    }

    #[test]
    fn unit_hom_prints_as_star() {
        assert_eq!(Ty::unit_obj().to_string(), "*");
        assert_eq!(format!("{:#}", Ty::hom(Ty::Unit, Tm::var("a"), Tm::Unit)), "Hom[1](a, ())");
    }
}
