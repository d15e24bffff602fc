use num_complex::Complex64;

use super::{Expr, Func};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num { text: String, imaginary: bool },
    Ident(String),
    Sym(char),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let (tline, tcol) = (line, col);
        if ch == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if ch.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        let start = i;
        let tok = if ch.is_ascii_digit()
            || (ch == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit))
        {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let imaginary = chars.get(i) == Some(&'i')
                && !chars
                    .get(i + 1)
                    .is_some_and(|c| c.is_alphanumeric() || *c == '_');
            if imaginary {
                i += 1;
            }
            Tok::Num { text, imaginary }
        } else if ch.is_alphabetic() || ch == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if "+-*/^()[],".contains(ch) {
            i += 1;
            Tok::Sym(ch)
        } else {
            return Err(syntax(tline, tcol, format!("unexpected character '{ch}'")));
        };
        col += i - start;
        out.push(Token {
            tok,
            line: tline,
            column: tcol,
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    d: usize,
}

/// Parses `src` as a function of `z1..zd`.
pub fn parse(src: &str, d: usize) -> Result<Expr> {
    if src.trim().is_empty() {
        return Err(syntax(1, 1, "empty expression"));
    }
    if d == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let mut p = Parser {
        tokens: lex(src)?,
        pos: 0,
        d,
    };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        t => Err(p.error_here(format!("unexpected {}", describe(t)))),
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num { text, imaginary } => {
            format!("number '{text}{}'", if *imaginary { "i" } else { "" })
        }
        Tok::Ident(s) => format!("identifier '{s}'"),
        Tok::Sym(c) => format!("'{c}'"),
        Tok::End => "end of input".into(),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> Error {
        let t = &self.tokens[self.pos];
        syntax(t.line, t.column, message)
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error_here(format!("expected '{c}', found {}", describe(self.peek()))))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = Expr::add(acc, self.term()?);
            } else if self.eat('-') {
                acc = Expr::sub(acc, self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = Expr::mul(acc, self.factor()?);
            } else if self.eat('/') {
                acc = Expr::div(acc, self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::neg(self.factor()?));
        }
        let base = self.atom()?;
        if self.eat('^') {
            Ok(Expr::pow(base, self.exponent()?))
        } else {
            Ok(base)
        }
    }

    /// Integer exponent, optionally negative or parenthesised; a further
    /// `^` makes the exponent itself a power (right associativity).
    fn exponent(&mut self) -> Result<i32> {
        let paren = self.eat('(');
        let negative = self.eat('-');
        let t = self.next();
        let value: i64 = match &t.tok {
            Tok::Num {
                text,
                imaginary: false,
            } if text.bytes().all(|b| b.is_ascii_digit()) => text
                .parse()
                .map_err(|_| syntax(t.line, t.column, "exponent out of range"))?,
            other => {
                return Err(syntax(
                    t.line,
                    t.column,
                    format!("exponent must be an integer, found {}", describe(other)),
                ))
            }
        };
        if paren {
            self.expect(')')?;
        }
        let mut value = if negative { -value } else { value };
        if self.eat('^') {
            let (line, column) = (t.line, t.column);
            let rest = self.exponent()?;
            let rest = u32::try_from(rest)
                .map_err(|_| syntax(line, column, "negative exponent in an exponent"))?;
            value = value
                .checked_pow(rest)
                .ok_or_else(|| syntax(line, column, "exponent out of range"))?;
        }
        i32::try_from(value).map_err(|_| syntax(t.line, t.column, "exponent out of range"))
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.next();
        match t.tok {
            Tok::Num { text, imaginary } => {
                let x: f64 = text
                    .parse()
                    .map_err(|_| syntax(t.line, t.column, format!("malformed number '{text}'")))?;
                if !x.is_finite() {
                    return Err(syntax(
                        t.line,
                        t.column,
                        format!("number '{text}' out of range"),
                    ));
                }
                Ok(Expr::num(if imaginary {
                    Complex64::new(0.0, x)
                } else {
                    Complex64::new(x, 0.0)
                }))
            }
            Tok::Ident(name) => self.identifier(&name, t.line, t.column),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym('[') => self.array(),
            other => Err(syntax(
                t.line,
                t.column,
                format!("unexpected {}", describe(&other)),
            )),
        }
    }

    fn identifier(&mut self, name: &str, line: usize, column: usize) -> Result<Expr> {
        if name == "i" {
            return Ok(Expr::num(Complex64::new(0.0, 1.0)));
        }
        if name == "pi" {
            return Ok(Expr::real(std::f64::consts::PI));
        }
        if let Some(f) = Func::from_name(name) {
            self.expect('(')?;
            let arg = self.expr()?;
            self.expect(')')?;
            return Ok(Expr::call(f, arg));
        }
        if let Some(index) = name.strip_prefix('z') {
            if !index.is_empty()
                && index.bytes().all(|b| b.is_ascii_digit())
                && !index.starts_with('0')
            {
                let j: usize = index.parse().map_err(|_| {
                    syntax(
                        line,
                        column,
                        format!("variable index in '{name}' out of range"),
                    )
                })?;
                if j > self.d {
                    return Err(syntax(
                        line,
                        column,
                        format!("variable {name} exceeds dimension {}", self.d),
                    ));
                }
                return Ok(Expr::var(j));
            }
        }
        Err(syntax(line, column, format!("unknown identifier '{name}'")))
    }

    /// `[e, ..]` is a vector; `[[..], ..]` with every item a row is a matrix.
    fn array(&mut self) -> Result<Expr> {
        let (line, column) = {
            let t = &self.tokens[self.pos - 1];
            (t.line, t.column)
        };
        let mut items = vec![self.expr()?];
        while self.eat(',') {
            items.push(self.expr()?);
        }
        self.expect(']')?;
        let rows = items
            .iter()
            .filter(|e| matches!(e, Expr::Vector(_)))
            .count();
        if rows == 0 {
            return Ok(Expr::Vector(items));
        }
        if rows != items.len() {
            return Err(syntax(
                line,
                column,
                "mixed rows and scalars in an array literal",
            ));
        }
        Ok(Expr::Matrix(
            items
                .into_iter()
                .map(|e| match e {
                    Expr::Vector(row) => row,
                    _ => unreachable!(),
                })
                .collect(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grammar_examples() {
        let e = parse("z1^2*z2 + (1+2i)", 2).unwrap();
        let expect = Expr::Add(
            Box::new(Expr::mul(Expr::pow(Expr::var(1), 2), Expr::var(2))),
            Box::new(Expr::num(c(1.0, 2.0))),
        );
        assert_eq!(e, expect);
        assert_eq!(
            parse("exp(z1+z2)", 2).unwrap(),
            Expr::call(
                Func::Exp,
                Expr::Add(Box::new(Expr::var(1)), Box::new(Expr::var(2)))
            )
        );
        let m = parse("[[z1,0],[0,conj(z1)]]", 1).unwrap();
        assert!(matches!(&m, Expr::Matrix(rows) if rows.len() == 2));
        assert!(m.is_tainted());
    }

    #[test]
    fn precedence() {
        // unary minus binds looser than ^
        assert_eq!(
            parse("-z1^2", 1).unwrap(),
            Expr::Neg(Box::new(Expr::pow(Expr::var(1), 2)))
        );
        assert_eq!(parse("z1^2^3", 1).unwrap(), Expr::pow(Expr::var(1), 8));
        assert_eq!(parse("z1^-2", 1).unwrap(), Expr::pow(Expr::var(1), -2));
        assert_eq!(parse("z1^(-2)", 1).unwrap(), Expr::pow(Expr::var(1), -2));
        assert_eq!(
            parse("z1 - z1 - z1", 1).unwrap(),
            Expr::sub(Expr::sub(Expr::var(1), Expr::var(1)), Expr::var(1))
        );
        assert_eq!(parse("-3", 1).unwrap(), Expr::real(-3.0));
        assert_eq!(parse("2i", 1).unwrap(), Expr::num(c(0.0, 2.0)));
        assert_eq!(parse("i", 1).unwrap(), Expr::num(c(0.0, 1.0)));
    }

    #[test]
    fn errors_carry_positions() {
        match parse("z1 +\n  * z2", 2) {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        match parse("z3", 2) {
            Err(Error::Syntax { message, .. }) => assert!(message.contains("exceeds")),
            other => panic!("{other:?}"),
        }
        assert!(parse("foo(z1)", 1).is_err());
        assert!(parse("z1^1.5", 1).is_err());
        assert!(parse("", 1).is_err());
        assert!(parse("(z1", 1).is_err());
        assert!(parse("z1 $ 2", 1).is_err());
        assert!(parse("[[z1], 2]", 1).is_err());
    }
}
