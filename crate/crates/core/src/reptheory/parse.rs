// Recursive-descent parser for representation expressions.
//
//   expr   := term ('+' term)*
//   term   := factor ('*' factor)*
//   factor := atom '*'*
//   atom   := 'V' | 'S' k '(' expr ')' | 'E' k '(' expr ')' | '(' expr ')'
//
// A '*' directly after a factor is a dual when the next token cannot start
// another factor (end of input, '+', ')' or another '*'); otherwise it is a
// tensor product. So "V*" and "S2(V)*" are duals and "V * V" is V ⊗ V.

use super::RepExpr;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    V,
    Sym(u32),
    Ext(u32),
    Open,
    Close,
    Plus,
    Star,
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

impl Lexer {
    fn new(src: &str) -> Result<Self> {
        let chars: Vec<(usize, char)> = src.char_indices().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let (pos, c) = chars[i];
            i += 1;
            let tok = match c {
                c if c.is_whitespace() => continue,
                'V' => Tok::V,
                '(' => Tok::Open,
                ')' => Tok::Close,
                '+' => Tok::Plus,
                '*' => Tok::Star,
                'S' | 'E' => {
                    let start = i;
                    while i < chars.len() && chars[i].1.is_ascii_digit() {
                        i += 1;
                    }
                    if start == i {
                        return Err(Error::Parse { pos: pos + 1, msg: format!("expected a degree after '{c}'") });
                    }
                    let digits: String = chars[start..i].iter().map(|&(_, d)| d).collect();
                    let k: u32 = digits.parse().map_err(|_| Error::Parse {
                        pos: chars[start].0,
                        msg: format!("degree {digits} is too large"),
                    })?;
                    if k == 0 {
                        return Err(Error::Parse { pos: chars[start].0, msg: "degree must be positive".into() });
                    }
                    if c == 'S' {
                        Tok::Sym(k)
                    } else {
                        Tok::Ext(k)
                    }
                }
                other => {
                    return Err(Error::Parse { pos, msg: format!("unexpected character {other:?}") });
                }
            };
            toks.push((tok, pos));
        }
        toks.push((Tok::End, src.len()));
        Ok(Self { toks })
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> Tok {
        self.toks[self.at].0
    }

    fn peek_at(&self, offset: usize) -> Tok {
        self.toks.get(self.at + offset).map_or(Tok::End, |t| t.0)
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.peek();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&format!("expected {what}")))
        }
    }

    fn error(&self, msg: &str) -> Error {
        let found = match self.peek() {
            Tok::End => "end of input".to_string(),
            t => format!("{t:?}"),
        };
        Error::Parse { pos: self.pos(), msg: format!("{msg}, found {found}") }
    }

    fn expr(&mut self) -> Result<RepExpr> {
        let mut lhs = self.term()?;
        while self.peek() == Tok::Plus {
            self.bump();
            let rhs = self.term()?;
            lhs = RepExpr::Sum(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<RepExpr> {
        let mut lhs = self.factor()?;
        while self.peek() == Tok::Star {
            self.bump();
            let rhs = self.factor()?;
            lhs = RepExpr::Tensor(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<RepExpr> {
        let mut e = self.atom()?;
        while self.peek() == Tok::Star
            && matches!(self.peek_at(1), Tok::End | Tok::Plus | Tok::Close | Tok::Star)
        {
            self.bump();
            e = RepExpr::Dual(Box::new(e));
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<RepExpr> {
        match self.peek() {
            Tok::V => {
                self.bump();
                Ok(RepExpr::V)
            }
            Tok::Sym(k) | Tok::Ext(k) => {
                let sym = matches!(self.bump(), Tok::Sym(_));
                self.expect(Tok::Open, "'('")?;
                let inner = self.expr()?;
                self.expect(Tok::Close, "')'")?;
                Ok(if sym {
                    RepExpr::Sym(k, Box::new(inner))
                } else {
                    RepExpr::Ext(k, Box::new(inner))
                })
            }
            Tok::Open => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::Close, "')'")?;
                Ok(inner)
            }
            _ => Err(self.error("expected 'V', 'S<k>(', 'E<k>(' or '('")),
        }
    }
}

pub fn parse_rep(src: &str) -> Result<RepExpr> {
    let lexer = Lexer::new(src)?;
    let mut p = Parser { toks: lexer.toks, at: 0 };
    let e = p.expr()?;
    if p.peek() != Tok::End {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use RepExpr::*;

    fn b(e: RepExpr) -> Box<RepExpr> {
        Box::new(e)
    }

    #[test]
    fn paper_spaces() {
        assert_eq!(parse_rep("V + S2(V)").unwrap(), Sum(b(V), b(Sym(2, b(V)))));
        assert_eq!(parse_rep("E3(V*)").unwrap(), Ext(3, b(Dual(b(V)))));
        assert_eq!(parse_rep("V + S2(V)*").unwrap(), Sum(b(V), b(Dual(b(Sym(2, b(V)))))));
    }

    #[test]
    fn star_disambiguation() {
        assert_eq!(parse_rep("V*V").unwrap(), Tensor(b(V), b(V)));
        assert_eq!(parse_rep("V * V").unwrap(), Tensor(b(V), b(V)));
        assert_eq!(parse_rep("V**V").unwrap(), Tensor(b(Dual(b(V))), b(V)));
        assert_eq!(parse_rep("V**").unwrap(), Dual(b(Dual(b(V)))));
        assert_eq!(parse_rep("(V + V*)*").unwrap(), Dual(b(Sum(b(V), b(Dual(b(V)))))));
        assert_eq!(
            parse_rep("V + V * V").unwrap(),
            Sum(b(V), b(Tensor(b(V), b(V))))
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert!(matches!(parse_rep("S2()"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_rep("S0(V)"), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse_rep("V +"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_rep("V x V"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_rep("S(V)"), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse_rep("(V"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_rep("V)"), Err(Error::Parse { pos: 1, .. })));
        assert!(parse_rep("").is_err());
    }
}
