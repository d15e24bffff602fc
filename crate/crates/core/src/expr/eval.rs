use num_complex::Complex64;

use super::{Expr, Func};
use crate::error::{Error, Result};
use crate::multi_index::int_pow;
use crate::point::CPoint;
use crate::quadrature::{Integrand, Smoothness};
use crate::space::{Shape, SpaceDescriptor, VectorValue};

/// Denominators below this magnitude are treated as zero.
pub const MIN_DIVISOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq)]
enum Op {
    Push(Complex64),
    Load(usize),
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow(i32),
    Call(Func),
    Vector(usize),
    Matrix(usize),
}

fn compile(e: &Expr, out: &mut Vec<Op>) {
    match e {
        Expr::Num(c) => out.push(Op::Push(*c)),
        Expr::Var(j) => out.push(Op::Load(j - 1)),
        Expr::Neg(a) => {
            compile(a, out);
            out.push(Op::Neg);
        }
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            compile(a, out);
            compile(b, out);
            out.push(match e {
                Expr::Add(..) => Op::Add,
                Expr::Sub(..) => Op::Sub,
                Expr::Mul(..) => Op::Mul,
                _ => Op::Div,
            });
        }
        Expr::Pow(a, n) => {
            compile(a, out);
            out.push(Op::Pow(*n));
        }
        Expr::Call(f, a) => {
            compile(a, out);
            out.push(Op::Call(*f));
        }
        Expr::Vector(items) => {
            items.iter().for_each(|x| compile(x, out));
            out.push(Op::Vector(items.len()));
        }
        Expr::Matrix(rows) => {
            rows.iter().flatten().for_each(|x| compile(x, out));
            out.push(Op::Matrix(rows.len()));
        }
    }
}

/// Stack value: a scalar, or the row-major entries of a vector or matrix.
#[derive(Debug, Clone)]
enum Val {
    S(Complex64),
    A(Shape, Vec<Complex64>),
}

impl Val {
    fn into_parts(self) -> (Shape, Vec<Complex64>) {
        match self {
            Val::S(c) => (Shape::SCALAR, vec![c]),
            Val::A(s, v) => (s, v),
        }
    }

    fn map(self, f: impl Fn(Complex64) -> Complex64) -> Val {
        match self {
            Val::S(c) => Val::S(f(c)),
            Val::A(s, v) => Val::A(s, v.into_iter().map(f).collect()),
        }
    }
}

fn matmul(m: usize, a: &[Complex64], b: &[Complex64], cols: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); m * cols];
    for i in 0..m {
        for k in 0..m {
            let aik = a[i * m + k];
            for j in 0..cols {
                out[i * cols + j] += aik * b[k * cols + j];
            }
        }
    }
    out
}

/// Expression compiled to a postfix program, with its static shape.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledExpr {
    expr: Expr,
    program: Vec<Op>,
    dim: usize,
    shape: Shape,
}

impl CompiledExpr {
    pub fn new(expr: Expr, dim: usize) -> Result<Self> {
        if expr.max_var() > dim {
            return Err(Error::invalid(format!(
                "expression uses z{} but d = {dim}",
                expr.max_var()
            )));
        }
        let shape = expr.shape()?;
        let mut program = Vec::new();
        compile(&expr, &mut program);
        Ok(CompiledExpr {
            expr,
            program,
            dim,
            shape,
        })
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// Evaluates at `z`; results must be finite and divisions well away from 0.
    pub fn eval(&self, z: &CPoint) -> Result<VectorValue> {
        if z.dim() != self.dim {
            return Err(Error::invalid(format!(
                "point {z} is not in C^{}",
                self.dim
            )));
        }
        let fail = |reason: &str| Error::Evaluation {
            point: z.to_string(),
            reason: reason.to_string(),
        };
        let mut stack: Vec<Val> = Vec::with_capacity(16);
        for op in &self.program {
            match op {
                Op::Push(c) => stack.push(Val::S(*c)),
                Op::Load(j) => stack.push(Val::S(z[*j])),
                Op::Neg => {
                    let a = stack.pop().expect("compiled program is balanced");
                    stack.push(a.map(|c| -c));
                }
                Op::Call(f) => {
                    let a = stack.pop().expect("compiled program is balanced");
                    stack.push(a.map(|c| f.apply(c)));
                }
                Op::Pow(n) => {
                    let a = stack.pop().expect("compiled program is balanced");
                    stack.push(match a {
                        Val::S(c) => {
                            let p = int_pow(c, n.unsigned_abs());
                            if *n < 0 {
                                if p.norm() < MIN_DIVISOR {
                                    return Err(fail("negative power of zero"));
                                }
                                Val::S(p.inv())
                            } else {
                                Val::S(p)
                            }
                        }
                        Val::A(s @ Shape::Matrix(m), v) => {
                            let mut out: Vec<Complex64> = (0..m * m)
                                .map(|k| {
                                    Complex64::new(if k % (m + 1) == 0 { 1.0 } else { 0.0 }, 0.0)
                                })
                                .collect();
                            for _ in 0..*n {
                                out = matmul(m, &out, &v, m);
                            }
                            Val::A(s, out)
                        }
                        Val::A(..) => unreachable!("shape checked at compile time"),
                    });
                }
                Op::Add | Op::Sub | Op::Mul | Op::Div => {
                    let b = stack.pop().expect("compiled program is balanced");
                    let a = stack.pop().expect("compiled program is balanced");
                    stack.push(binary(op, a, b).map_err(&fail)?);
                }
                Op::Vector(n) => {
                    let entries = drain_scalars(&mut stack, *n);
                    stack.push(Val::A(Shape::Vector(*n), entries));
                }
                Op::Matrix(m) => {
                    let entries = drain_scalars(&mut stack, m * m);
                    stack.push(Val::A(Shape::Matrix(*m), entries));
                }
            }
        }
        let (shape, entries) = stack
            .pop()
            .expect("compiled program is balanced")
            .into_parts();
        if entries
            .iter()
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(fail("non-finite value"));
        }
        VectorValue::new(shape, entries)
    }

    /// Evaluates and checks the value against `space`.
    pub fn evaluate(&self, z: &CPoint, space: &SpaceDescriptor) -> Result<VectorValue> {
        if self.shape != space.shape() {
            return Err(Error::Shape(format!(
                "expression has values in {} but the space is {}",
                self.shape,
                space.shape()
            )));
        }
        self.eval(z)
    }
}

fn drain_scalars(stack: &mut Vec<Val>, n: usize) -> Vec<Complex64> {
    stack
        .drain(stack.len() - n..)
        .map(|v| match v {
            Val::S(c) => c,
            Val::A(..) => unreachable!("shape checked at compile time"),
        })
        .collect()
}

fn binary(op: &Op, a: Val, b: Val) -> std::result::Result<Val, &'static str> {
    use Val::{A, S};
    let scalar_op = |x: Complex64, y: Complex64| -> std::result::Result<Complex64, &'static str> {
        match op {
            Op::Add => Ok(x + y),
            Op::Sub => Ok(x - y),
            Op::Mul => Ok(x * y),
            _ if y.norm() < MIN_DIVISOR => Err("division by zero"),
            _ => Ok(x / y),
        }
    };
    Ok(match (a, b) {
        (S(x), S(y)) => S(scalar_op(x, y)?),
        (S(x), A(s, v)) => A(
            s,
            v.into_iter()
                .map(|y| scalar_op(x, y))
                .collect::<std::result::Result<_, _>>()?,
        ),
        (A(s, v), S(y)) => A(
            s,
            v.into_iter()
                .map(|x| scalar_op(x, y))
                .collect::<std::result::Result<_, _>>()?,
        ),
        (A(Shape::Matrix(m), x), A(t, y)) if *op == Op::Mul => {
            let cols = if matches!(t, Shape::Matrix(_)) { m } else { 1 };
            A(t, matmul(m, &x, &y, cols))
        }
        (A(s, x), A(_, y)) => A(
            s,
            x.into_iter()
                .zip(y)
                .map(|(x, y)| scalar_op(x, y))
                .collect::<std::result::Result<_, _>>()?,
        ),
    })
}

/// An expression as an [`Integrand`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExprFn {
    compiled: CompiledExpr,
}

impl ExprFn {
    pub fn new(expr: Expr, dim: usize) -> Result<Self> {
        Ok(ExprFn {
            compiled: CompiledExpr::new(expr, dim)?,
        })
    }

    pub fn parse(src: &str, dim: usize) -> Result<Self> {
        Self::new(super::parse(src, dim)?, dim)
    }

    pub fn expr(&self) -> &Expr {
        self.compiled.expr()
    }

    pub fn is_tainted(&self) -> bool {
        self.compiled.expr().is_tainted()
    }
}

impl Integrand for ExprFn {
    fn dim(&self) -> usize {
        self.compiled.dim()
    }

    fn shape(&self) -> Shape {
        self.compiled.shape()
    }

    fn eval(&self, z: &CPoint) -> Result<VectorValue> {
        self.compiled.eval(z)
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::Continuous
    }
}
