//! Surface syntax trees and their rendering.
//!
//! Source positions are carried along for diagnostics but take no part in
//! equality, so `parse(render(f)) == f` compares structure only.

use std::fmt::{self, Display, Formatter};

use crate::kernel::Span;

/// A source position that compares equal to every other position.
#[derive(Clone, Copy, Debug, Default)]
pub struct Pos(pub Span);

impl PartialEq for Pos {
    fn eq(&self, _: &Pos) -> bool {
        true
    }
}

impl Eq for Pos {}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Keyword {
    Coh,
    CohOp,
    CohEq,
    Mcoh,
    Mop,
    Meq,
    Let,
}

impl Keyword {
    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Coh => "coh",
            Keyword::CohOp => "cohop",
            Keyword::CohEq => "coheq",
            Keyword::Mcoh => "mcoh",
            Keyword::Mop => "mop",
            Keyword::Meq => "meq",
            Keyword::Let => "let",
        }
    }

    pub fn parse(s: &str) -> Option<Keyword> {
        Some(match s {
            "coh" => Keyword::Coh,
            "cohop" => Keyword::CohOp,
            "coheq" => Keyword::CohEq,
            "mcoh" => Keyword::Mcoh,
            "mop" => Keyword::Mop,
            "meq" => Keyword::Meq,
            "let" => Keyword::Let,
            _ => return None,
        })
    }

    /// Whether the item introduces an MCaTT coherence.
    pub fn is_mcoh(self) -> bool {
        matches!(self, Keyword::Mcoh | Keyword::Mop | Keyword::Meq)
    }

    pub fn is_coherence(self) -> bool {
        self != Keyword::Let
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum STy {
    Obj,
    Unit,
    /// `t -> u`, base inferred from `t`.
    Arrow(STm, STm),
    /// `Hom[A](t, u)`
    Hom(Box<STy>, STm, STm),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum STm {
    Unit(Pos),
    /// A variable or a compact application `NAME a1 … ak`.
    App(String, Vec<STm>, Pos),
    /// `NAME @[x := t, …]`
    Explicit(String, Vec<(String, STm)>, Pos),
}

impl STm {
    pub fn pos(&self) -> Span {
        match self {
            STm::Unit(p) | STm::App(_, _, p) | STm::Explicit(_, _, p) => p.0,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Def {
    pub keyword: Keyword,
    pub name: String,
    pub telescope: Vec<(String, STy)>,
    pub ty: STy,
    pub body: Option<STm>,
    pub pos: Pos,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SourceFile {
    pub items: Vec<Def>,
}

struct Atom<'a>(&'a STm);

impl Display for Atom<'_> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self.0 {
            STm::App(_, args, _) if !args.is_empty() => write!(f, "({})", self.0),
            STm::Explicit(..) => write!(f, "({})", self.0),
            t => write!(f, "{t}"),
        }
    }
}

impl Display for STm {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            STm::Unit(_) => f.write_str("()"),
            STm::App(name, args, _) => {
                f.write_str(name)?;
                for a in args {
                    write!(f, " {}", Atom(a))?;
                }
                Ok(())
            }
            STm::Explicit(name, comps, _) => {
                write!(f, "{name} @[")?;
                for (i, (x, t)) in comps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x} := {t}")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl Display for STy {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            STy::Obj => f.write_str("*"),
            STy::Unit => f.write_str("1"),
            STy::Arrow(t, u) => write!(f, "{t} -> {u}"),
            STy::Hom(a, t, u) => write!(f, "Hom[{a}]({t}, {u})"),
        }
    }
}

impl Display for Def {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.keyword.as_str(), self.name)?;
        for (x, a) in &self.telescope {
            write!(f, " ({x} : {a})")?;
        }
        write!(f, " : {}", self.ty)?;
        if let Some(b) = &self.body {
            write!(f, " = {b}")?;
        }
        Ok(())
    }
}

impl Display for SourceFile {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for d in &self.items {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}
