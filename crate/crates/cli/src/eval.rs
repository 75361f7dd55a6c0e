//! Evaluation of parsed expressions in a session ring.

use std::collections::BTreeMap;
use std::sync::Arc;

use fitshift_core::complexes::RingMatrix;
use fitshift_core::fitting::{fitting_ideal, PresentedModule};
use fitshift_core::groupring::{full_norm, norm_element, GroupRingSpec, RingElement};
use fitshift_core::ideals::{ideal_mul, ideal_pow, ideal_scale, ideal_sum, FractionalIdeal, Ideal};
use fitshift_core::shifts::{shift_trivial, ShiftRequest};

use crate::error::{CliError, CliResult};
use crate::parser::{BinOp, Expr, ExprKind, Pos};
use crate::printer::{format_element, format_frac, format_ideal, format_matrix};

#[derive(Clone, Debug)]
pub enum Value {
    Element(RingElement),
    Matrix(RingMatrix),
    Ideal(Ideal),
    Frac(FractionalIdeal),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Element(_) => "element",
            Value::Matrix(_) => "matrix",
            Value::Ideal(_) => "ideal",
            Value::Frac(_) => "fractional ideal",
        }
    }

    /// Canonical text form; parses back to an equal value.
    pub fn render(&self) -> String {
        match self {
            Value::Element(x) => format_element(x),
            Value::Matrix(m) => format_matrix(m),
            Value::Ideal(i) => format_ideal(i),
            Value::Frac(f) => format_frac(f),
        }
    }
}

/// Names with built-in meaning; they cannot be rebound.
pub fn is_reserved(name: &str) -> bool {
    const WORDS: [&str; 6] = ["N", "ideal", "fitting", "transpose", "shift", "frac"];
    if WORDS.contains(&name) {
        return true;
    }
    ["tau", "d", "t", "m"].iter().any(|prefix| {
        name.strip_prefix(prefix).is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
    })
}

pub struct Env<'a> {
    pub spec: &'a Arc<GroupRingSpec>,
    pub bindings: &'a BTreeMap<String, Value>,
    pub assume_nzd: bool,
}

fn indexed(name: &str, prefix: &str) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

impl<'a> Env<'a> {
    fn factor(&self, i: usize, pos: Pos) -> CliResult<usize> {
        if i == 0 || i > self.spec.s() {
            return Err(CliError::eval(pos, format!("cyclic factor {i} out of range 1..{}", self.spec.s())));
        }
        Ok(i - 1)
    }

    fn variable(&self, j: usize, pos: Pos) -> CliResult<usize> {
        if j == 0 || j > self.spec.d() {
            return Err(CliError::eval(pos, format!("T variable {j} out of range 1..{}", self.spec.d())));
        }
        Ok(j - 1)
    }

    /// Integer-valued subexpressions: literals, `m_i` and arithmetic on them.
    pub fn eval_int(&self, e: &Expr) -> CliResult<i128> {
        let bad = || CliError::eval(e.pos, format!("'{e}' is not an integer expression"));
        match &e.kind {
            ExprKind::Int(n) => Ok(*n),
            ExprKind::Ident(name) => match indexed(name, "m") {
                Some(i) => Ok(self.spec.orders()[self.factor(i, e.pos)?] as i128),
                None => Err(bad()),
            },
            ExprKind::Neg(x) => Ok(-self.eval_int(x)?),
            ExprKind::Bin(op, a, b) => {
                let (a, b) = (self.eval_int(a)?, self.eval_int(b)?);
                let r = match op {
                    BinOp::Add => a.checked_add(b),
                    BinOp::Sub => a.checked_sub(b),
                    BinOp::Mul => a.checked_mul(b),
                    BinOp::Pow => u32::try_from(b).ok().and_then(|b| a.checked_pow(b)),
                    BinOp::Div => None,
                };
                r.ok_or_else(bad)
            }
            _ => Err(bad()),
        }
    }

    fn exponent(&self, e: &Expr) -> CliResult<u64> {
        let n = self
            .eval_int(e)
            .map_err(|_| CliError::eval(e.pos, format!("exponent '{e}' must be a nonnegative integer")))?;
        u64::try_from(n).map_err(|_| CliError::eval(e.pos, format!("exponent {n} must be nonnegative")))
    }

    pub fn eval(&self, e: &Expr) -> CliResult<Value> {
        let pos = e.pos;
        let engine = |err: fitshift_core::Error| CliError::eval(pos, err.to_string());
        match &e.kind {
            ExprKind::Int(n) => Ok(Value::Element(RingElement::constant(self.spec, *n))),
            ExprKind::Ident(name) => self.ident(name, pos),
            ExprKind::Call(name, args) => self.call(name, args, pos),
            ExprKind::Tuple(items) => {
                let mut acc = Ideal::zero(self.spec);
                for item in items {
                    let part = self.as_ideal(self.eval(item)?, item.pos)?;
                    acc = ideal_sum(&acc, &part).map_err(engine)?;
                }
                Ok(Value::Ideal(acc))
            }
            ExprKind::List(items) => self.matrix(items, pos).map(Value::Matrix),
            ExprKind::Neg(x) => match self.eval(x)? {
                Value::Element(v) => Ok(Value::Element(-v)),
                Value::Matrix(m) => Ok(Value::Matrix(m.map_entries(|v| -v))),
                v => Err(CliError::eval(pos, format!("cannot negate a {}", v.kind()))),
            },
            ExprKind::Bin(BinOp::Pow, base, exp) => {
                let n = self.exponent(exp)?;
                match self.eval(base)? {
                    Value::Element(v) => Ok(Value::Element(v.pow(n))),
                    Value::Ideal(i) => Ok(Value::Ideal(ideal_pow(&i, to_u32(n, pos)?))),
                    Value::Frac(f) => {
                        let num = ideal_pow(f.numerator(), to_u32(n, pos)?);
                        let den = f.denominator().pow(n);
                        Ok(Value::Frac(FractionalIdeal::new(num, den, self.assume_nzd).map_err(engine)?))
                    }
                    Value::Matrix(_) => Err(CliError::eval(pos, "matrix powers are not supported")),
                }
            }
            ExprKind::Bin(BinOp::Add | BinOp::Sub, _, _) => {
                // long sums nest to the left; walk the spine without recursing
                let mut spine = Vec::new();
                let mut cur = e;
                while let ExprKind::Bin(op @ (BinOp::Add | BinOp::Sub), a, b) = &cur.kind {
                    spine.push((*op, b, cur.pos));
                    cur = a;
                }
                let mut acc = self.eval(cur)?;
                for (op, b, pos) in spine.into_iter().rev() {
                    acc = self.binary(op, acc, self.eval(b)?, pos)?;
                }
                Ok(acc)
            }
            ExprKind::Bin(op, a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                self.binary(*op, x, y, pos)
            }
        }
    }

    fn ident(&self, name: &str, pos: Pos) -> CliResult<Value> {
        let elem = |r: fitshift_core::Result<RingElement>| -> CliResult<Value> {
            r.map(Value::Element).map_err(|err| CliError::eval(pos, err.to_string()))
        };
        if let Some(i) = indexed(name, "tau") {
            return elem(RingElement::tau(self.spec, self.factor(i, pos)?));
        }
        if let Some(i) = indexed(name, "d") {
            return elem(RingElement::delta(self.spec, self.factor(i, pos)?));
        }
        if let Some(j) = indexed(name, "t") {
            return elem(RingElement::t_var(self.spec, self.variable(j, pos)?));
        }
        if let Some(i) = indexed(name, "m") {
            let m = self.spec.orders()[self.factor(i, pos)?];
            return Ok(Value::Element(RingElement::constant(self.spec, m as i128)));
        }
        self.bindings.get(name).cloned().ok_or_else(|| CliError::eval(pos, format!("unknown identifier '{name}'")))
    }

    fn call(&self, name: &str, args: &[Expr], pos: Pos) -> CliResult<Value> {
        let engine = |err: fitshift_core::Error| CliError::eval(pos, err.to_string());
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(CliError::eval(pos, format!("{name} takes {n} argument(s), got {}", args.len())))
            }
        };
        match name {
            "N" => {
                if args.is_empty() {
                    return Ok(Value::Element(full_norm(self.spec)));
                }
                let mut subset = Vec::new();
                for a in args {
                    let i = self.eval_int(a)?;
                    subset.push(self.factor(usize::try_from(i).unwrap_or(0), a.pos)?);
                }
                Ok(Value::Element(norm_element(self.spec, &subset).map_err(engine)?))
            }
            "ideal" => {
                let mut acc = Ideal::zero(self.spec);
                for a in args {
                    let part = self.as_ideal(self.eval(a)?, a.pos)?;
                    acc = ideal_sum(&acc, &part).map_err(engine)?;
                }
                Ok(Value::Ideal(acc))
            }
            "frac" => {
                arity(2)?;
                let num = self.as_ideal(self.eval(&args[0])?, args[0].pos)?;
                let den = self.as_element(self.eval(&args[1])?, args[1].pos)?;
                Ok(Value::Frac(FractionalIdeal::new(num, den, self.assume_nzd).map_err(engine)?))
            }
            "fitting" => {
                arity(1)?;
                let m = self.as_matrix(self.eval(&args[0])?, args[0].pos)?;
                Ok(Value::Ideal(fitting_ideal(&PresentedModule::new(m))))
            }
            "transpose" => {
                arity(1)?;
                Ok(Value::Matrix(self.as_matrix(self.eval(&args[0])?, args[0].pos)?.transpose()))
            }
            "shift" => {
                arity(1)?;
                let n = self.eval_int(&args[0])?;
                let n = i64::try_from(n).map_err(|_| CliError::eval(pos, "shift index out of range"))?;
                Ok(Value::Frac(shift_trivial(&ShiftRequest::new(self.spec, n)).map_err(engine)?))
            }
            _ => Err(CliError::eval(pos, format!("unknown function '{name}'"))),
        }
    }

    fn matrix(&self, items: &[Expr], pos: Pos) -> CliResult<RingMatrix> {
        let nested = items.iter().filter(|e| matches!(e.kind, ExprKind::List(_))).count();
        let rows: Vec<&[Expr]> = if nested == 0 {
            vec![items]
        } else if nested == items.len() {
            items
                .iter()
                .map(|e| match &e.kind {
                    ExprKind::List(r) => r.as_slice(),
                    _ => unreachable!(),
                })
                .collect()
        } else {
            return Err(CliError::eval(pos, "matrix rows must all be bracketed"));
        };
        let mut out = Vec::new();
        for row in rows {
            let mut r = Vec::new();
            for entry in row {
                r.push(self.as_element(self.eval(entry)?, entry.pos)?);
            }
            out.push(r);
        }
        if out.iter().any(|r| r.len() != out[0].len()) {
            return Err(CliError::eval(pos, "matrix rows have different lengths"));
        }
        RingMatrix::from_rows(self.spec, out).map_err(|err| CliError::eval(pos, err.to_string()))
    }

    pub fn as_element(&self, v: Value, pos: Pos) -> CliResult<RingElement> {
        match v {
            Value::Element(x) => Ok(x),
            v => Err(CliError::eval(pos, format!("expected an element, found a {}", v.kind()))),
        }
    }

    pub fn as_ideal(&self, v: Value, pos: Pos) -> CliResult<Ideal> {
        match v {
            Value::Element(x) => Ok(Ideal::principal(x)),
            Value::Ideal(i) => Ok(i),
            v => Err(CliError::eval(pos, format!("expected an ideal, found a {}", v.kind()))),
        }
    }

    pub fn as_frac(&self, v: Value, pos: Pos) -> CliResult<FractionalIdeal> {
        match v {
            Value::Frac(f) => Ok(f),
            v => Ok(FractionalIdeal::integral(self.as_ideal(v, pos)?)),
        }
    }

    pub fn as_matrix(&self, v: Value, pos: Pos) -> CliResult<RingMatrix> {
        match v {
            Value::Matrix(m) => Ok(m),
            Value::Element(x) => Ok(RingMatrix::scalar(&x, 1)),
            v => Err(CliError::eval(pos, format!("expected a matrix, found a {}", v.kind()))),
        }
    }

    fn binary(&self, op: BinOp, x: Value, y: Value, pos: Pos) -> CliResult<Value> {
        use Value::*;
        let engine = |err: fitshift_core::Error| CliError::eval(pos, err.to_string());
        let mismatch = |x: &Value, y: &Value| CliError::eval(pos, format!("cannot apply '{op:?}' to a {} and a {}", x.kind(), y.kind()));
        match op {
            BinOp::Add | BinOp::Sub => match (x, y) {
                (Element(a), Element(b)) => Ok(Element(if op == BinOp::Add { a + b } else { a - b })),
                (Matrix(a), Matrix(b)) => {
                    if (a.nrows(), a.ncols()) != (b.nrows(), b.ncols()) {
                        return Err(CliError::eval(pos, "matrix shapes differ"));
                    }
                    let entries = a
                        .entries()
                        .iter()
                        .zip(b.entries())
                        .map(|(u, v)| if op == BinOp::Add { u + v } else { u - v })
                        .collect();
                    Ok(Matrix(RingMatrix::new(self.spec, a.nrows(), a.ncols(), entries).map_err(engine)?))
                }
                (x @ (Element(_) | Ideal(_)), y @ (Element(_) | Ideal(_))) if op == BinOp::Add => {
                    let (a, b) = (self.as_ideal(x, pos)?, self.as_ideal(y, pos)?);
                    Ok(Ideal(ideal_sum(&a, &b).map_err(engine)?))
                }
                (x, y) => Err(mismatch(&x, &y)),
            },
            BinOp::Mul => match (x, y) {
                (Element(a), Element(b)) => Ok(Element(a * b)),
                (Element(a), Ideal(i)) | (Ideal(i), Element(a)) => Ok(Ideal(ideal_scale(&i, &a).map_err(engine)?)),
                (Ideal(a), Ideal(b)) => Ok(Ideal(ideal_mul(&a, &b).map_err(engine)?)),
                (Matrix(a), Matrix(b)) => Ok(Matrix(a.mul(&b).map_err(engine)?)),
                (Element(a), Matrix(m)) | (Matrix(m), Element(a)) => Ok(Matrix(m.map_entries(|v| v * &a))),
                (x @ (Element(_) | Ideal(_) | Frac(_)), y @ (Element(_) | Ideal(_) | Frac(_))) => {
                    let (a, b) = (self.as_frac(x, pos)?, self.as_frac(y, pos)?);
                    Ok(Frac(a.mul(&b).map_err(engine)?))
                }
                (x, y) => Err(mismatch(&x, &y)),
            },
            BinOp::Div => {
                let den = match y {
                    Element(f) => f,
                    y => return Err(CliError::eval(pos, format!("can only divide by an element, not a {}", y.kind()))),
                };
                let (num, den) = match x {
                    Element(a) => (fitshift_core::ideals::Ideal::principal(a), den),
                    Ideal(i) => (i, den),
                    Frac(f) => (f.numerator().clone(), f.denominator() * &den),
                    Matrix(_) => return Err(CliError::eval(pos, "cannot divide a matrix")),
                };
                Ok(Frac(FractionalIdeal::new(num, den, self.assume_nzd).map_err(engine)?))
            }
            BinOp::Pow => unreachable!("handled in eval"),
        }
    }
}

fn to_u32(n: u64, pos: Pos) -> CliResult<u32> {
    u32::try_from(n).map_err(|_| CliError::eval(pos, format!("exponent {n} is too large")))
}
