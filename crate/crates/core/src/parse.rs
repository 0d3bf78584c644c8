//! Literal grammar shared by scenario files and the Python bindings.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := integer | name | '(' expr ')' | 'O' '(' expr ')'
//! ```
//!
//! The same tree is evaluated as a rational (exponent rules in `i`), as a
//! polynomial in a named variable, or as a Puiseux series in `t`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::{Elem, GroundField, UPoly};
use crate::error::{Error, Result};
use crate::puiseux::PuiseuxSeries;
use crate::values::Q64;

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Num(BigInt),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    BigO(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Name(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let (l0, c0) = (line, col);
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Num(s.parse().unwrap()), line: l0, column: c0 });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Name(s), line: l0, column: c0 });
        } else if "+-*/^()".contains(c) {
            i += 1;
            col += 1;
            out.push(Token { tok: Tok::Sym(c), line: l0, column: c0 });
        } else {
            return Err(err(l0, c0, format!("unexpected character '{c}'")));
        }
    }
    out.push(Token { tok: Tok::End, line, column: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(())
        } else {
            Err(err(t.line, t.column, format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while self.is_sym('+') || self.is_sym('-') {
            let t = self.next();
            let rhs = self.term()?;
            let kind = if t.tok == Tok::Sym('+') {
                ExprKind::Add(Box::new(lhs), Box::new(rhs))
            } else {
                ExprKind::Sub(Box::new(lhs), Box::new(rhs))
            };
            lhs = Expr { kind, line: t.line, column: t.column };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.is_sym('*') || self.is_sym('/') {
            let t = self.next();
            let rhs = self.unary()?;
            let kind = if t.tok == Tok::Sym('*') {
                ExprKind::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                ExprKind::Div(Box::new(lhs), Box::new(rhs))
            };
            lhs = Expr { kind, line: t.line, column: t.column };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.is_sym('-') {
            let t = self.next();
            let inner = self.unary()?;
            return Ok(Expr { kind: ExprKind::Neg(Box::new(inner)), line: t.line, column: t.column });
        }
        if self.is_sym('+') {
            self.next();
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.is_sym('^') {
            let t = self.next();
            let exp = self.unary()?;
            return Ok(Expr { kind: ExprKind::Pow(Box::new(base), Box::new(exp)), line: t.line, column: t.column });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.next();
        match t.tok {
            Tok::Num(n) => Ok(Expr { kind: ExprKind::Num(n), line: t.line, column: t.column }),
            Tok::Name(name) if name == "O" && self.is_sym('(') => {
                self.next();
                let inner = self.expr()?;
                self.expect_sym(')')?;
                Ok(Expr { kind: ExprKind::BigO(Box::new(inner)), line: t.line, column: t.column })
            }
            Tok::Name(name) => Ok(Expr { kind: ExprKind::Var(name), line: t.line, column: t.column }),
            Tok::Sym('(') => {
                let inner = self.expr()?;
                self.expect_sym(')')?;
                Ok(inner)
            }
            Tok::End => Err(err(t.line, t.column, "unexpected end of input")),
            Tok::Sym(c) => Err(err(t.line, t.column, format!("unexpected '{c}'"))),
        }
    }
}

/// Parses a complete expression; trailing input is an error.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return Err(err(t.line, t.column, "unexpected trailing input"));
    }
    Ok(e)
}

// ---- rational evaluation ---------------------------------------------------------------

/// Evaluates with the given rational variable bindings.
pub fn eval_rational(e: &Expr, vars: &HashMap<String, Q64>) -> Result<Q64> {
    let here = |m: &str| err(e.line, e.column, m.to_string());
    Ok(match &e.kind {
        ExprKind::Num(n) => Q64::from_integer(n.to_i64().ok_or_else(|| here("integer too large"))?),
        ExprKind::Var(v) => *vars.get(v).ok_or_else(|| here(&format!("unknown variable '{v}'")))?,
        ExprKind::Neg(a) => -eval_rational(a, vars)?,
        ExprKind::Add(a, b) => eval_rational(a, vars)? + eval_rational(b, vars)?,
        ExprKind::Sub(a, b) => eval_rational(a, vars)? - eval_rational(b, vars)?,
        ExprKind::Mul(a, b) => eval_rational(a, vars)? * eval_rational(b, vars)?,
        ExprKind::Div(a, b) => {
            let d = eval_rational(b, vars)?;
            if d.is_zero() {
                return Err(here("division by zero"));
            }
            eval_rational(a, vars)? / d
        }
        ExprKind::Pow(a, b) => {
            let base = eval_rational(a, vars)?;
            let ex = eval_rational(b, vars)?;
            if !ex.is_integer() {
                return Err(here("rational exponent in a rational expression"));
            }
            let n = ex.to_integer();
            if n < 0 && base.is_zero() {
                return Err(here("division by zero"));
            }
            let mut r = Q64::one();
            for _ in 0..n.unsigned_abs() {
                r *= base;
            }
            if n < 0 {
                r.recip()
            } else {
                r
            }
        }
        ExprKind::BigO(_) => return Err(here("O(...) is not allowed here")),
    })
}

/// Variables that appear anywhere in the tree.
pub fn free_variables(e: &Expr) -> Vec<String> {
    let mut out = Vec::new();
    fn walk(e: &Expr, out: &mut Vec<String>) {
        match &e.kind {
            ExprKind::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            ExprKind::Num(_) => {}
            ExprKind::Neg(a) | ExprKind::BigO(a) => walk(a, out),
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) | ExprKind::Div(a, b) | ExprKind::Pow(a, b) => {
                walk(a, out);
                walk(b, out);
            }
        }
    }
    walk(e, &mut out);
    out
}

// ---- field symbols ----------------------------------------------------------------------

/// Names usable in literals: tower generators as elements of the top field.
#[derive(Clone, Debug)]
pub struct Symbols {
    pub field: GroundField,
    pub gens: Vec<(String, Elem)>,
    /// Rational-valued variables, e.g. the index `i` of a pcs rule.
    pub vars: HashMap<String, Q64>,
}

impl Symbols {
    /// Every generator in the tower of `field`, lifted to `field`.
    pub fn for_field(field: &GroundField) -> Symbols {
        let mut gens = Vec::new();
        for level in field.tower() {
            if let (Some(name), Some(g)) = (level.generator_name(), level.generator()) {
                gens.push((name.to_string(), field.lift_from(&level, &g).expect("tower member")));
            }
        }
        Symbols { field: field.clone(), gens, vars: HashMap::new() }
    }

    pub fn with_var(&self, name: &str, value: Q64) -> Symbols {
        let mut s = self.clone();
        s.vars.insert(name.to_string(), value);
        s
    }

    fn lookup(&self, name: &str) -> Option<&Elem> {
        self.gens.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }
}

/// Evaluates a constant expression in the field (generators allowed, no `t`).
pub fn eval_element(e: &Expr, sym: &Symbols) -> Result<Elem> {
    let s = eval_series(e, sym)?;
    if !s.is_exact() || s.iter().any(|(x, _)| !x.is_zero()) {
        return Err(err(e.line, e.column, "expected a field element"));
    }
    Ok(s.coeff_at(Q64::zero()))
}

pub fn parse_element(src: &str, sym: &Symbols) -> Result<Elem> {
    eval_element(&parse_expr(src)?, sym)
}

// ---- series evaluation ------------------------------------------------------------------

/// Evaluates as a Puiseux series in `t` over the symbol field.
pub fn eval_series(e: &Expr, sym: &Symbols) -> Result<PuiseuxSeries> {
    let f = &sym.field;
    let here = |m: &str| err(e.line, e.column, m.to_string());
    Ok(match &e.kind {
        ExprKind::Num(n) => PuiseuxSeries::constant(f, f.from_bigint(n)),
        ExprKind::Var(v) if v == "t" => PuiseuxSeries::t(f),
        ExprKind::Var(v) => match (sym.lookup(v), sym.vars.get(v)) {
            (Some(g), _) => PuiseuxSeries::constant(f, g.clone()),
            (None, Some(x)) => PuiseuxSeries::constant(f, f.from_rational(&rat_big(*x)).map_err(|_| here("variable value not in the field"))?),
            (None, None) => return Err(here(&format!("unknown symbol '{v}'"))),
        },
        ExprKind::Neg(a) => eval_series(a, sym)?.neg(),
        ExprKind::Add(a, b) => eval_series(a, sym)?.add(&eval_series(b, sym)?),
        ExprKind::Sub(a, b) => eval_series(a, sym)?.sub(&eval_series(b, sym)?),
        ExprKind::Mul(a, b) => eval_series(a, sym)?.mul(&eval_series(b, sym)?),
        ExprKind::Div(a, b) => {
            let d = eval_series(b, sym)?;
            if !(d.is_exact() && d.num_terms() == 1) {
                return Err(here("only division by a nonzero monomial is supported"));
            }
            let inv = d.invert(Q64::one()).map_err(|_| here("division by zero"))?;
            eval_series(a, sym)?.mul(&inv)
        }
        ExprKind::Pow(a, b) => {
            let ex = eval_rational(b, &sym.vars).map_err(|_| here("exponent must be a rational constant"))?;
            let base = eval_series(a, sym)?;
            if !(base.is_exact() && base.num_terms() == 1) {
                if ex.is_integer() && ex.to_integer() >= 0 {
                    return Ok(base.pow(ex.to_integer() as u32));
                }
                return Err(here("fractional or negative powers need a monomial base"));
            }
            let (v, c) = base.leading().unwrap();
            let coeff = if ex.is_integer() {
                f.pow_i64(&c, ex.to_integer()).map_err(|_| here("division by zero"))?
            } else if f.is_one(&c) {
                c
            } else {
                return Err(here("fractional powers need a unit coefficient"));
            };
            PuiseuxSeries::monomial(f, coeff, v * ex)
        }
        ExprKind::BigO(a) => {
            let inner = eval_series(a, sym)?;
            if !(inner.is_exact() && inner.num_terms() == 1) {
                return Err(here("O(...) takes a monomial"));
            }
            PuiseuxSeries::unknown(f, inner.leading().unwrap().0)
        }
    })
}

pub fn parse_series(src: &str, sym: &Symbols) -> Result<PuiseuxSeries> {
    eval_series(&parse_expr(src)?, sym)
}

// ---- polynomial evaluation ------------------------------------------------------------------

/// Evaluates as a polynomial in `var` over the symbol field.
pub fn eval_upoly(e: &Expr, var: &str, sym: &Symbols) -> Result<UPoly> {
    let f = &sym.field;
    let here = |m: &str| err(e.line, e.column, m.to_string());
    Ok(match &e.kind {
        ExprKind::Num(n) => UPoly::constant(f, f.from_bigint(n)),
        ExprKind::Var(v) if v == var => UPoly::x(f),
        ExprKind::Var(v) => match sym.lookup(v) {
            Some(g) => UPoly::constant(f, g.clone()),
            None => return Err(here(&format!("unknown symbol '{v}'"))),
        },
        ExprKind::Neg(a) => eval_upoly(a, var, sym)?.neg(),
        ExprKind::Add(a, b) => eval_upoly(a, var, sym)?.add(&eval_upoly(b, var, sym)?),
        ExprKind::Sub(a, b) => eval_upoly(a, var, sym)?.sub(&eval_upoly(b, var, sym)?),
        ExprKind::Mul(a, b) => eval_upoly(a, var, sym)?.mul(&eval_upoly(b, var, sym)?),
        ExprKind::Div(a, b) => {
            let d = eval_upoly(b, var, sym)?;
            if d.deg() != 0 || d.is_zero() {
                return Err(here("only division by a nonzero constant is supported"));
            }
            let inv = f.inv(&d.lc()).map_err(|_| here("division by zero"))?;
            eval_upoly(a, var, sym)?.scale(&inv)
        }
        ExprKind::Pow(a, b) => {
            let ex = eval_rational(b, &HashMap::new()).map_err(|_| here("exponent must be an integer constant"))?;
            if !ex.is_integer() || ex.to_integer() < 0 {
                return Err(here("polynomial exponents must be nonnegative integers"));
            }
            eval_upoly(a, var, sym)?.pow(ex.to_integer() as u32)
        }
        ExprKind::BigO(_) => return Err(here("O(...) is not allowed in a polynomial")),
    })
}

pub fn parse_upoly(src: &str, var: &str, sym: &Symbols) -> Result<UPoly> {
    eval_upoly(&parse_expr(src)?, var, sym)
}

/// A positive integer literal, used by tests and the CLI.
pub fn parse_integer(src: &str) -> Result<BigInt> {
    let e = parse_expr(src)?;
    match e.kind {
        ExprKind::Num(n) => Ok(n),
        _ => Err(err(e.line, e.column, "expected an integer")),
    }
}

fn rat_big(x: Q64) -> num_rational::BigRational {
    num_rational::BigRational::new((*x.numer()).into(), (*x.denom()).into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::adjoin_root;
    use crate::values::q;

    #[test]
    fn series_literals() {
        let k = GroundField::rationals();
        let sym = Symbols::for_field(&k);
        let s = parse_series("t^(1/2) + 3*t^(2/3)", &sym).unwrap();
        assert_eq!(s.to_literal(), "t^(1/2) + 3*t^(2/3)");
        let s = parse_series("-t + 1/2*t^2 + O(t^3)", &sym).unwrap();
        assert_eq!(s.prec_q(), Some(q(3, 1)));
        assert_eq!(s.coeff_at(q(2, 1)), Elem::Rat(num_rational::BigRational::new(1.into(), 2.into())));
    }

    #[test]
    fn finite_field_literals() {
        let f5 = GroundField::prime(5).unwrap();
        let adj = adjoin_root(&f5, &UPoly::from_i64s(&f5, &[-2, 0, 1]), "s").unwrap();
        let sym = Symbols::for_field(&adj.field);
        let s = parse_series("s + t", &sym).unwrap();
        assert_eq!(s.residue_unit().unwrap(), adj.root);
        let e = parse_element("s^2", &sym).unwrap();
        assert_eq!(e, adj.field.from_i64(2));
        let m = parse_upoly("X^2 - s", "X", &sym).unwrap();
        assert_eq!(m.deg(), 2);
    }

    #[test]
    fn exponent_rules() {
        let e = parse_expr("1-1/(i+1)").unwrap();
        let mut vars = HashMap::new();
        vars.insert("i".to_string(), q(3, 1));
        assert_eq!(eval_rational(&e, &vars).unwrap(), q(3, 4));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_expr("t^(1/2) +\n  * t") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        let sym = Symbols::for_field(&GroundField::rationals());
        assert!(matches!(parse_series("t + y", &sym), Err(Error::Parse { line: 1, column: 5, .. })));
        assert!(parse_expr("t $ 2").is_err());
        assert!(parse_expr("(t + 1").is_err());
    }
}
