//! Expression language for functions `C^d -> E`.
//!
//! Literals (`2`, `1.5e-3`, `3i`, `i`, `pi`), variables `z1..zd`, `+ - * /`,
//! integer powers `^`, unary minus, `exp sin cos log sqrt conj`, vectors
//! `[a, b]` and square matrices `[[a, b], [c, d]]`. Precedence, tightest
//! first: `^` (right-associative), unary `-`, `* /`, `+ -`.

mod eval;
mod parse;

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::TaylorSeries;
use crate::space::Shape;

pub use eval::{CompiledExpr, ExprFn};
pub use parse::parse;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Log,
    Sqrt,
    Conj,
}

impl Func {
    pub const ALL: [Func; 6] = [
        Func::Exp,
        Func::Sin,
        Func::Cos,
        Func::Log,
        Func::Sqrt,
        Func::Conj,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Conj => "conj",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn apply(self, z: Complex64) -> Complex64 {
        match self {
            Func::Exp => z.exp(),
            Func::Sin => z.sin(),
            Func::Cos => z.cos(),
            Func::Log => z.ln(),
            Func::Sqrt => z.sqrt(),
            Func::Conj => z.conj(),
        }
    }
}

/// Expression tree. Variables are 1-based (`Var(1)` is `z1`).
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Complex64),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
    Vector(Vec<Expr>),
    Matrix(Vec<Vec<Expr>>),
}

fn is_pure_imaginary(e: &Expr) -> Option<f64> {
    match e {
        Expr::Num(c) if c.re == 0.0 && c.im != 0.0 => Some(c.im),
        _ => None,
    }
}

fn is_real(e: &Expr) -> Option<f64> {
    match e {
        Expr::Num(c) if c.im == 0.0 => Some(c.re),
        _ => None,
    }
}

// The constructors below apply the same literal folding as the parser, so
// trees built with them survive a print/parse round trip unchanged.
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn num(c: Complex64) -> Expr {
        Expr::Num(c)
    }

    pub fn real(x: f64) -> Expr {
        Expr::Num(Complex64::new(x, 0.0))
    }

    pub fn var(j: usize) -> Expr {
        Expr::Var(j)
    }

    /// `-literal` folds into a literal.
    pub fn neg(e: Expr) -> Expr {
        match e {
            Expr::Num(c) => Expr::Num(-c),
            e => Expr::Neg(Box::new(e)),
        }
    }

    /// `real + imaginary` literal pairs fold into one complex literal.
    pub fn add(a: Expr, b: Expr) -> Expr {
        match (is_real(&a), is_pure_imaginary(&b)) {
            (Some(x), Some(y)) => Expr::Num(Complex64::new(x, y)),
            _ => Expr::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (is_real(&a), is_pure_imaginary(&b)) {
            (Some(x), Some(y)) => Expr::Num(Complex64::new(x, -y)),
            _ => Expr::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, n: i32) -> Expr {
        Expr::Pow(Box::new(a), n)
    }

    pub fn call(f: Func, a: Expr) -> Expr {
        Expr::Call(f, Box::new(a))
    }

    /// True if the tree contains `conj`, the only non-holomorphic primitive.
    pub fn is_tainted(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Var(_) => false,
            Expr::Call(Func::Conj, _) => true,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.is_tainted(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_tainted() || b.is_tainted()
            }
            Expr::Vector(items) => items.iter().any(Expr::is_tainted),
            Expr::Matrix(rows) => rows.iter().flatten().any(Expr::is_tainted),
        }
    }

    /// Largest variable index used (0 for constants).
    pub fn max_var(&self) -> usize {
        match self {
            Expr::Num(_) => 0,
            Expr::Var(j) => *j,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.max_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.max_var().max(b.max_var())
            }
            Expr::Vector(items) => items.iter().map(Expr::max_var).max().unwrap_or(0),
            Expr::Matrix(rows) => rows.iter().flatten().map(Expr::max_var).max().unwrap_or(0),
        }
    }

    /// True if the tree uses only literals, variables, `+ - *` and
    /// nonnegative powers, i.e. denotes a polynomial.
    pub fn is_polynomial(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Var(_) => true,
            Expr::Neg(a) => a.is_polynomial(),
            Expr::Pow(a, n) => *n >= 0 && a.is_polynomial(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.is_polynomial() && b.is_polynomial()
            }
            Expr::Div(..) | Expr::Call(..) | Expr::Vector(_) | Expr::Matrix(_) => false,
        }
    }

    /// Static value shape.
    pub fn shape(&self) -> Result<Shape> {
        let s = Shape::SCALAR;
        match self {
            Expr::Num(_) | Expr::Var(_) => Ok(s),
            Expr::Neg(a) => a.shape(),
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (x, y) = (a.shape()?, b.shape()?);
                match (x, y) {
                    _ if x == s => Ok(y),
                    _ if y == s || x == y => Ok(x),
                    _ => Err(Error::Shape(format!("cannot add {x} and {y}"))),
                }
            }
            Expr::Mul(a, b) => {
                let (x, y) = (a.shape()?, b.shape()?);
                match (x, y) {
                    _ if x == s => Ok(y),
                    _ if y == s => Ok(x),
                    (Shape::Matrix(m), Shape::Matrix(n)) if m == n => Ok(x),
                    (Shape::Matrix(m), Shape::Vector(n)) if m == n => Ok(y),
                    (Shape::Vector(m), Shape::Vector(n)) if m == n => Ok(x),
                    _ => Err(Error::Shape(format!("cannot multiply {x} by {y}"))),
                }
            }
            Expr::Div(a, b) => {
                let y = b.shape()?;
                if y != s {
                    return Err(Error::Shape(format!("cannot divide by a value in {y}")));
                }
                a.shape()
            }
            Expr::Pow(a, n) => match a.shape()? {
                x if x == s => Ok(x),
                x @ Shape::Matrix(_) if *n >= 0 => Ok(x),
                x => Err(Error::Shape(format!("power {n} of a value in {x}"))),
            },
            Expr::Call(f, a) => {
                let x = a.shape()?;
                if *f != Func::Conj && x != s {
                    return Err(Error::Shape(format!(
                        "{} applied to a value in {x}",
                        f.name()
                    )));
                }
                Ok(x)
            }
            Expr::Vector(items) => {
                for e in items {
                    if e.shape()? != s {
                        return Err(Error::Shape("vector entries must be scalars".into()));
                    }
                }
                Ok(Shape::Vector(items.len()))
            }
            Expr::Matrix(rows) => {
                let m = rows.len();
                for row in rows {
                    if row.len() != m {
                        return Err(Error::Shape(format!(
                            "matrix with {m} rows needs {m} columns per row"
                        )));
                    }
                    for e in row {
                        if e.shape()? != s {
                            return Err(Error::Shape("matrix entries must be scalars".into()));
                        }
                    }
                }
                Ok(Shape::Matrix(m))
            }
        }
    }

    /// Polynomial `sum_beta a_beta (z - w)^beta` of a truncated series.
    pub fn from_series(series: &TaylorSeries) -> Expr {
        let center = series.center();
        let entry = |e: usize| {
            let mut acc: Option<Expr> = None;
            for (beta, a) in series.terms() {
                let c = a.entries()[e];
                if c == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let mut term = Expr::num(c);
                for (j, &b) in beta.exponents().iter().enumerate() {
                    if b == 0 {
                        continue;
                    }
                    let w = center[j];
                    let base = if w == Complex64::new(0.0, 0.0) {
                        Expr::var(j + 1)
                    } else {
                        Expr::Sub(Box::new(Expr::var(j + 1)), Box::new(Expr::num(w)))
                    };
                    let factor = if b == 1 {
                        base
                    } else {
                        Expr::pow(base, b as i32)
                    };
                    term = Expr::mul(term, factor);
                }
                acc = Some(match acc {
                    None => term,
                    Some(prev) => Expr::Add(Box::new(prev), Box::new(term)),
                });
            }
            acc.unwrap_or(Expr::real(0.0))
        };
        match series.shape() {
            s if s == Shape::SCALAR => entry(0),
            Shape::Vector(m) => Expr::Vector((0..m).map(entry).collect()),
            Shape::Matrix(m) => Expr::Matrix(
                (0..m)
                    .map(|i| (0..m).map(|k| entry(i * m + k)).collect())
                    .collect(),
            ),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if e.precedence() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

fn write_number(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    if c.im == 0.0 {
        if c.re.is_sign_negative() {
            write!(f, "({})", c.re)
        } else {
            write!(f, "{}", c.re)
        }
    } else if c.re == 0.0 {
        if c.im < 0.0 {
            write!(f, "({}i)", c.im)
        } else {
            write!(f, "{}i", c.im)
        }
    } else if c.im < 0.0 {
        write!(f, "({}-{}i)", c.re, -c.im)
    } else {
        write!(f, "({}+{}i)", c.re, c.im)
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[Expr]) -> fmt::Result {
    write!(f, "[")?;
    for (k, e) in items.iter().enumerate() {
        if k > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{e}")?;
    }
    write!(f, "]")
}

/// Canonical text form; `parse` inverts it exactly.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.precedence();
        match self {
            Expr::Num(c) => write_number(f, *c),
            Expr::Var(j) => write!(f, "z{j}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                write_child(f, a, p + 1)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                let op = match self {
                    Expr::Add(..) => " + ",
                    Expr::Sub(..) => " - ",
                    Expr::Mul(..) => " * ",
                    _ => " / ",
                };
                write_child(f, a, p)?;
                write!(f, "{op}")?;
                write_child(f, b, p + 1)
            }
            Expr::Pow(a, n) => {
                write_child(f, a, p + 1)?;
                if *n < 0 {
                    write!(f, "^({n})")
                } else {
                    write!(f, "^{n}")
                }
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Vector(items) => write_list(f, items),
            Expr::Matrix(rows) => {
                write!(f, "[")?;
                for (k, row) in rows.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write_list(f, row)?;
                }
                write!(f, "]")
            }
        }
    }
}
