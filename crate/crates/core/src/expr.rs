//! Small boolean expression language shared by product formulas and scan
//! predicates.
//!
//! ```text
//! expr  := disj [ "=>" expr ]       right-associative, loosest
//! disj  := conj { "|" conj }
//! conj  := unary { "&" unary }
//! unary := "!" unary | "(" expr ")" | identifier
//! ```
//!
//! Identifiers are ASCII letters, digits and `_`, starting with a letter.
//! Which identifiers are atoms is up to the caller.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr<A> {
    Atom(A),
    Not(Box<Expr<A>>),
    And(Box<Expr<A>>, Box<Expr<A>>),
    Or(Box<Expr<A>>, Box<Expr<A>>),
    Implies(Box<Expr<A>>, Box<Expr<A>>),
}

/// Parse errors. Positions are 1-based character columns; the end of input
/// is one past the last character.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("unexpected character {ch:?} at position {position}")]
    Lexical { ch: char, position: usize },
    #[error("unknown identifier {name:?} at position {position}")]
    UnknownAtom { name: String, position: usize },
    #[error("unexpected end of input at position {position}")]
    UnexpectedEnd { position: usize },
    #[error("unexpected {found} at position {position}")]
    UnexpectedToken { found: String, position: usize },
    #[error("unclosed parenthesis opened at position {position}")]
    Unbalanced { position: usize },
    #[error("unknown name {0:?}")]
    UnknownName(String),
}

impl<A: Copy> Expr<A> {
    pub fn evaluate(&self, atom: &impl Fn(A) -> bool) -> bool {
        match self {
            Expr::Atom(a) => atom(*a),
            Expr::Not(x) => !x.evaluate(atom),
            Expr::And(x, y) => x.evaluate(atom) && y.evaluate(atom),
            Expr::Or(x, y) => x.evaluate(atom) || y.evaluate(atom),
            Expr::Implies(x, y) => !x.evaluate(atom) || y.evaluate(atom),
        }
    }

    /// Every atom occurring in the expression, left to right.
    pub fn atoms(&self) -> Vec<A> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<A>) {
        match self {
            Expr::Atom(a) => out.push(*a),
            Expr::Not(x) => x.collect_atoms(out),
            Expr::And(x, y) | Expr::Or(x, y) | Expr::Implies(x, y) => {
                x.collect_atoms(out);
                y.collect_atoms(out);
            }
        }
    }
}

impl<A> Expr<A> {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Implies(..) => 1,
            Expr::Or(..) => 2,
            Expr::And(..) => 3,
            Expr::Not(_) | Expr::Atom(_) => 4,
        }
    }
}

impl<A: fmt::Display> Expr<A> {
    fn write(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |f: &mut fmt::Formatter<'_>, e: &Expr<A>, min: u8| {
            if e.precedence() < min {
                write!(f, "(")?;
                e.write(f)?;
                write!(f, ")")
            } else {
                e.write(f)
            }
        };
        match self {
            Expr::Atom(a) => write!(f, "{a}"),
            Expr::Not(x) => {
                write!(f, "!")?;
                child(f, x, 4)
            }
            Expr::And(x, y) => {
                child(f, x, 3)?;
                write!(f, " & ")?;
                child(f, y, 4)
            }
            Expr::Or(x, y) => {
                child(f, x, 2)?;
                write!(f, " | ")?;
                child(f, y, 3)
            }
            Expr::Implies(x, y) => {
                child(f, x, 2)?;
                write!(f, " => ")?;
                child(f, y, 1)
            }
        }
    }
}

/// Prints with the fewest parentheses that re-parse to the same tree.
impl<A: fmt::Display> fmt::Display for Expr<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<A> {
    Atom(A),
    Not,
    And,
    Or,
    Implies,
    Open,
    Close,
}

fn describe<A>(t: &Tok<A>, text: &[char], position: usize) -> String {
    match t {
        Tok::Atom(_) => {
            let name: String =
                text[position - 1..].iter().take_while(|c| c.is_ascii_alphanumeric() || **c == '_').collect();
            format!("identifier {name}")
        }
        Tok::Not => "'!'".into(),
        Tok::And => "'&'".into(),
        Tok::Or => "'|'".into(),
        Tok::Implies => "'=>'".into(),
        Tok::Open => "'('".into(),
        Tok::Close => "')'".into(),
    }
}

fn lex<A>(chars: &[char], lookup: &impl Fn(&str) -> Option<A>) -> Result<Vec<(Tok<A>, usize)>, ExprError> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let position = i + 1;
        match c {
            c if c.is_whitespace() => {}
            '!' => out.push((Tok::Not, position)),
            '&' => out.push((Tok::And, position)),
            '|' => out.push((Tok::Or, position)),
            '(' => out.push((Tok::Open, position)),
            ')' => out.push((Tok::Close, position)),
            '=' if chars.get(i + 1) == Some(&'>') => {
                out.push((Tok::Implies, position));
                i += 1;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                let name: String = chars[start..=i].iter().collect();
                let atom = lookup(&name).ok_or(ExprError::UnknownAtom { name, position })?;
                out.push((Tok::Atom(atom), position));
            }
            _ => return Err(ExprError::Lexical { ch: c, position }),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a, A> {
    toks: Vec<(Tok<A>, usize)>,
    chars: &'a [char],
    pos: usize,
}

impl<A: Clone> Parser<'_, A> {
    fn peek(&self) -> Option<&Tok<A>> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.chars.len() + 1, |&(_, p)| p)
    }

    fn unexpected(&self) -> ExprError {
        match self.toks.get(self.pos) {
            None => ExprError::UnexpectedEnd { position: self.here() },
            Some((t, p)) => ExprError::UnexpectedToken { found: describe(t, self.chars, *p), position: *p },
        }
    }

    fn expr(&mut self) -> Result<Expr<A>, ExprError> {
        let lhs = self.disj()?;
        if matches!(self.peek(), Some(Tok::Implies)) {
            self.pos += 1;
            let rhs = self.expr()?;
            return Ok(Expr::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Expr<A>, ExprError> {
        let mut lhs = self.conj()?;
        while matches!(self.peek(), Some(Tok::Or)) {
            self.pos += 1;
            lhs = Expr::Or(Box::new(lhs), Box::new(self.conj()?));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Expr<A>, ExprError> {
        let mut lhs = self.unary()?;
        while matches!(self.peek(), Some(Tok::And)) {
            self.pos += 1;
            lhs = Expr::And(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr<A>, ExprError> {
        let position = self.here();
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return Err(self.unexpected()),
        };
        match tok {
            Tok::Atom(a) => {
                self.pos += 1;
                Ok(Expr::Atom(a))
            }
            Tok::Not => {
                self.pos += 1;
                Ok(Expr::Not(Box::new(self.unary()?)))
            }
            Tok::Open => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::Close) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    None => Err(ExprError::Unbalanced { position }),
                    Some(_) => Err(self.unexpected()),
                }
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parses `text`, resolving identifiers through `lookup`.
pub fn parse<A: Clone>(text: &str, lookup: impl Fn(&str) -> Option<A>) -> Result<Expr<A>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let toks = lex(&chars, &lookup)?;
    let mut p = Parser { toks, chars: &chars, pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.unexpected());
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(s: &str) -> Option<char> {
        (s.len() == 1).then(|| s.chars().next().unwrap())
    }

    #[test]
    fn evaluation_and_errors() {
        let e = parse("a & !b | c => d", var).unwrap();
        assert_eq!(e.atoms(), vec!['a', 'b', 'c', 'd']);
        assert!(e.evaluate(&|c| c == 'd'));
        assert!(!e.evaluate(&|c| c == 'c'));
        assert_eq!(e.to_string(), "a & !b | c => d");
        assert_eq!(parse("a |", var), Err(ExprError::UnexpectedEnd { position: 4 }));
        assert_eq!(parse("a ) b", var), Err(ExprError::UnexpectedToken { found: "')'".into(), position: 3 }));
        assert!(matches!(parse("a & xy", var), Err(ExprError::UnknownAtom { position: 5, .. })));
        assert_eq!(parse("((a)", var), Err(ExprError::Unbalanced { position: 1 }));
    }
}
