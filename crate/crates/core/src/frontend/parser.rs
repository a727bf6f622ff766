//! Tokenizer and recursive-descent parser for the surface language.
//!
//! ```text
//! file    ::= item*
//! item    ::= KW NAME binder* ':' ty            KW ∈ coh cohop coheq mcoh mop meq
//!           | 'let' NAME binder* ':' ty '=' tm
//! binder  ::= '(' NAME+ ':' ty ')'
//! ty      ::= '*' | '1' | 'Hom' '[' ty ']' '(' tm ',' tm ')' | tm '->' tm
//! tm      ::= NAME '@' '[' (NAME ':=' tm),* ']' | NAME atom* | atom
//! atom    ::= NAME | '(' ')' | '(' tm ')'
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

use super::ast::{Def, Keyword, Pos, STm, STy, SourceFile};
use super::Located;
use crate::kernel::{ErrorCode, KernelError, Rule, Span};

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Name(String),
    Kw(Keyword),
    Hom,
    Star,
    One,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Colon,
    Assign,
    Arrow,
    Comma,
    At,
    Equals,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(n) => format!("name `{n}`"),
            Tok::Kw(k) => format!("keyword `{}`", k.as_str()),
            Tok::Hom => "`Hom`".into(),
            Tok::Star => "`*`".into(),
            Tok::One => "`1`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Assign => "`:=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Comma => "`,`".into(),
            Tok::At => "`@`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn parse_error(span: Span, detail: impl Into<String>) -> Located {
    Located { span, error: KernelError::new(ErrorCode::ParseError, Rule::Surface, detail) }
}

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Span)>, Located> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let span = Span { line, col };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
            continue;
        }
        if is_name_start(c) {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if !is_name_char(c) {
                    break;
                }
                s.push(c);
                bump(&mut chars);
            }
            let tok = match Keyword::parse(&s) {
                Some(k) => Tok::Kw(k),
                None if s == "Hom" => Tok::Hom,
                None => Tok::Name(s),
            };
            out.push((tok, span));
            continue;
        }
        bump(&mut chars);
        let tok = match c {
            '*' => Tok::Star,
            '1' => Tok::One,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '@' => Tok::At,
            '=' => Tok::Equals,
            ':' if chars.peek() == Some(&'=') => {
                bump(&mut chars);
                Tok::Assign
            }
            ':' => Tok::Colon,
            '-' if chars.peek() == Some(&'>') => {
                bump(&mut chars);
                Tok::Arrow
            }
            _ => return Err(parse_error(span, format!("unexpected character `{c}`"))),
        };
        out.push((tok, span));
    }
    out.push((Tok::Eof, Span { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.at].1
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, context: &str) -> Result<(), Located> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(parse_error(
                self.span(),
                format!("expected {} {context}, found {}", want.describe(), self.peek().describe()),
            ))
        }
    }

    fn name(&mut self, context: &str) -> Result<String, Located> {
        match self.peek().clone() {
            Tok::Name(n) => {
                self.next();
                Ok(n)
            }
            t => Err(parse_error(self.span(), format!("expected a name {context}, found {}", t.describe()))),
        }
    }

    fn file(&mut self) -> Result<SourceFile, Located> {
        let mut items = Vec::new();
        while *self.peek() != Tok::Eof {
            items.push(self.item()?);
        }
        Ok(SourceFile { items })
    }

    fn item(&mut self) -> Result<Def, Located> {
        let pos = Pos(self.span());
        let keyword = match self.next() {
            Tok::Kw(k) => k,
            t => {
                return Err(parse_error(pos.0, format!("expected a definition keyword, found {}", t.describe())));
            }
        };
        let name = self.name("after the keyword")?;
        let mut telescope = Vec::new();
        while *self.peek() == Tok::LParen {
            self.next();
            let mut names = vec![self.name("in a binder")?];
            while let Tok::Name(_) = self.peek() {
                names.push(self.name("in a binder")?);
            }
            self.expect(Tok::Colon, "in a binder")?;
            let ty = self.ty()?;
            self.expect(Tok::RParen, "to close the binder")?;
            telescope.extend(names.into_iter().map(|n| (n, ty.clone())));
        }
        self.expect(Tok::Colon, "before the type of the definition")?;
        let ty = self.ty()?;
        let body = if keyword == Keyword::Let {
            self.expect(Tok::Equals, "before the body of `let`")?;
            Some(self.tm()?)
        } else {
            None
        };
        Ok(Def { keyword, name, telescope, ty, body, pos })
    }

    fn ty(&mut self) -> Result<STy, Located> {
        match self.peek() {
            Tok::Star => {
                self.next();
                Ok(STy::Obj)
            }
            Tok::One => {
                self.next();
                Ok(STy::Unit)
            }
            Tok::Hom => {
                self.next();
                self.expect(Tok::LBracket, "after `Hom`")?;
                let a = self.ty()?;
                self.expect(Tok::RBracket, "after the base of `Hom`")?;
                self.expect(Tok::LParen, "before the end points of `Hom`")?;
                let t = self.tm()?;
                self.expect(Tok::Comma, "between the end points of `Hom`")?;
                let u = self.tm()?;
                self.expect(Tok::RParen, "after the end points of `Hom`")?;
                Ok(STy::Hom(Box::new(a), t, u))
            }
            _ => {
                let t = self.tm()?;
                self.expect(Tok::Arrow, "in a type")?;
                let u = self.tm()?;
                Ok(STy::Arrow(t, u))
            }
        }
    }

    fn tm(&mut self) -> Result<STm, Located> {
        let pos = Pos(self.span());
        if let Tok::Name(n) = self.peek().clone() {
            self.next();
            if *self.peek() == Tok::At {
                self.next();
                self.expect(Tok::LBracket, "after `@`")?;
                let mut comps = Vec::new();
                if *self.peek() != Tok::RBracket {
                    loop {
                        let x = self.name("in an explicit substitution")?;
                        self.expect(Tok::Assign, "in an explicit substitution")?;
                        comps.push((x, self.tm()?));
                        if *self.peek() != Tok::Comma {
                            break;
                        }
                        self.next();
                    }
                }
                self.expect(Tok::RBracket, "to close the explicit substitution")?;
                return Ok(STm::Explicit(n, comps, pos));
            }
            let mut args = Vec::new();
            while matches!(self.peek(), Tok::Name(_) | Tok::LParen) {
                args.push(self.atom()?);
            }
            return Ok(STm::App(n, args, pos));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<STm, Located> {
        let pos = Pos(self.span());
        match self.peek().clone() {
            Tok::Name(n) => {
                self.next();
                Ok(STm::App(n, Vec::new(), pos))
            }
            Tok::LParen if *self.peek2() == Tok::RParen => {
                self.next();
                self.next();
                Ok(STm::Unit(pos))
            }
            Tok::LParen => {
                self.next();
                let t = self.tm()?;
                self.expect(Tok::RParen, "to close the parenthesis")?;
                Ok(t)
            }
            t => Err(parse_error(pos.0, format!("expected a term, found {}", t.describe()))),
        }
    }
}

pub fn parse(text: &str) -> Result<SourceFile, Located> {
    let toks = tokenize(text)?;
    Parser { toks, at: 0 }.file()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(x: &str) -> STm {
        STm::App(x.into(), vec![], Pos::default())
    }

    #[test]
    fn empty_file() {
        assert_eq!(parse("").unwrap(), SourceFile::default());
        assert_eq!(parse("  # only a comment\n").unwrap(), SourceFile::default());
    }

    #[test]
    fn comp_definition() {
        let f = parse("coh comp (x:*) (y:*) (f:x->y) (z:*) (g:y->z) : x->z").unwrap();
        let d = &f.items[0];
        assert_eq!(d.keyword, Keyword::Coh);
        assert_eq!(d.name, "comp");
        let names: Vec<&str> = d.telescope.iter().map(|(x, _)| x.as_str()).collect();
        assert_eq!(names, ["x", "y", "f", "z", "g"]);
        assert_eq!(d.telescope[2].1, STy::Arrow(var("x"), var("y")));
        assert_eq!(d.ty, STy::Arrow(var("x"), var("z")));
    }

    #[test]
    fn grouped_binders_and_explicit_forms() {
        let f = parse("let t (x y : *) (f : Hom[*](x, y)) : x -> y = un @[x := x, y := y, f := f]").unwrap();
        let d = &f.items[0];
        assert_eq!(d.telescope.len(), 3);
        assert!(matches!(d.telescope[2].1, STy::Hom(..)));
        assert!(matches!(d.body, Some(STm::Explicit(_, ref c, _)) if c.len() == 3));
    }

    #[test]
    fn applications_and_units() {
        let f = parse("let t (a : 1) : () -> a = comp (id x) f ()").unwrap();
        let Some(STm::App(n, args, _)) = &f.items[0].body else { panic!() };
        assert_eq!(n, "comp");
        assert_eq!(args.len(), 3);
        assert!(matches!(args[2], STm::Unit(_)));
        assert!(matches!(&args[0], STm::App(n, a, _) if n == "id" && a.len() == 1));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("coh comp (x:*)\n  (y:*) : x ->").unwrap_err();
        assert_eq!(e.error.code, ErrorCode::ParseError);
        assert_eq!(e.span, Span { line: 2, col: 15 });
        let e = parse("coh $").unwrap_err();
        assert_eq!(e.span, Span { line: 1, col: 5 });
        assert!(parse("coh c (x : *) : x -> x = x").is_err());
        assert!(parse("let c (x : *) : x -> x").is_err());
    }

    #[test]
    fn rendering_round_trips() {
        let src = "coh comp (x : *) (y : *) (f : x -> y) (z : *) (g : y -> z) : x -> z\n\
                   let t (a : *) (b : Hom[*](a, a)) : Hom[a -> a](b, b) = id1 (comp @[f := b]) () (un b b)\n";
        let f = parse(src).unwrap();
        assert_eq!(parse(&f.to_string()).unwrap(), f);
    }
}
