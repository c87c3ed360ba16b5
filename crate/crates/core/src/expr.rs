//! Scalar fields on a chart: parsing, evaluation and exact differentiation.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' ['-'] integer)*
//! primary := number | 'x1' | 'x2' | 'x3' | 'x4'
//!          | func '(' expr ')' | '(' expr ')'
//! func    := 'sin' | 'cos' | 'exp' | 'ln' | 'sqrt'
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, ParseError, Result};

/// Chart coordinates `(x1, x2, x3, x4)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point4(pub [f64; 4]);

impl Point4 {
    pub const ORIGIN: Point4 = Point4([0.0; 4]);

    pub fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Point4([x1, x2, x3, x4])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Const(f64),
    /// Zero-based coordinate index.
    Var(usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
    Call(Func, Box<Node>),
}

// Constructors below fold constants and drop neutral elements; that keeps
// second derivatives of typical fields small.

fn cnst(c: f64) -> Node {
    Node::Const(c)
}

fn as_const(n: &Node) -> Option<f64> {
    match n {
        Node::Const(c) => Some(*c),
        _ => None,
    }
}

fn neg(a: Node) -> Node {
    match a {
        Node::Const(c) => cnst(-c),
        Node::Neg(inner) => *inner,
        other => Node::Neg(Box::new(other)),
    }
}

fn add(a: Node, b: Node) -> Node {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => cnst(x + y),
        (Some(x), _) if x == 0.0 => b,
        (_, Some(y)) if y == 0.0 => a,
        _ => Node::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Node, b: Node) -> Node {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => cnst(x - y),
        (Some(x), _) if x == 0.0 => neg(b),
        (_, Some(y)) if y == 0.0 => a,
        _ => Node::Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Node, b: Node) -> Node {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => cnst(x * y),
        (Some(x), _) | (_, Some(x)) if x == 0.0 => cnst(0.0),
        (Some(x), _) if x == 1.0 => b,
        (_, Some(y)) if y == 1.0 => a,
        (Some(x), _) if x == -1.0 => neg(b),
        (_, Some(y)) if y == -1.0 => neg(a),
        _ => Node::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Node, b: Node) -> Node {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) if y != 0.0 => cnst(x / y),
        (Some(x), _) if x == 0.0 => cnst(0.0),
        (_, Some(y)) if y == 1.0 => a,
        _ => Node::Div(Box::new(a), Box::new(b)),
    }
}

fn pow(a: Node, n: i32) -> Node {
    match (as_const(&a), n) {
        (_, 0) => cnst(1.0),
        (_, 1) => a,
        (Some(x), _) if x != 0.0 || n > 0 => cnst(x.powi(n)),
        _ => Node::Pow(Box::new(a), n),
    }
}

fn call(f: Func, a: Node) -> Node {
    Node::Call(f, Box::new(a))
}

impl Node {
    fn eval(&self, p: &[f64; 4]) -> Result<f64> {
        let v = match self {
            Node::Const(c) => *c,
            Node::Var(i) => p[*i],
            Node::Neg(a) => -a.eval(p)?,
            Node::Add(a, b) => a.eval(p)? + b.eval(p)?,
            Node::Sub(a, b) => a.eval(p)? - b.eval(p)?,
            Node::Mul(a, b) => a.eval(p)? * b.eval(p)?,
            Node::Div(a, b) => {
                let d = b.eval(p)?;
                if d == 0.0 {
                    return Err(Error::Domain("division by zero".into()));
                }
                a.eval(p)? / d
            }
            Node::Pow(a, n) => {
                let x = a.eval(p)?;
                if x == 0.0 && *n < 0 {
                    return Err(Error::Domain("zero raised to a negative power".into()));
                }
                x.powi(*n)
            }
            Node::Call(f, a) => {
                let x = a.eval(p)?;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                    Func::Ln => {
                        if x <= 0.0 {
                            return Err(Error::Domain(format!("ln of non-positive value {x}")));
                        }
                        x.ln()
                    }
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(Error::Domain(format!("sqrt of negative value {x}")));
                        }
                        x.sqrt()
                    }
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain("non-finite intermediate value".into()))
        }
    }

    fn diff(&self, axis: usize) -> Node {
        match self {
            Node::Const(_) => cnst(0.0),
            Node::Var(i) => cnst(if *i == axis { 1.0 } else { 0.0 }),
            Node::Neg(a) => neg(a.diff(axis)),
            Node::Add(a, b) => add(a.diff(axis), b.diff(axis)),
            Node::Sub(a, b) => sub(a.diff(axis), b.diff(axis)),
            Node::Mul(a, b) => add(
                mul(a.diff(axis), (**b).clone()),
                mul((**a).clone(), b.diff(axis)),
            ),
            Node::Div(a, b) => div(
                sub(
                    mul(a.diff(axis), (**b).clone()),
                    mul((**a).clone(), b.diff(axis)),
                ),
                pow((**b).clone(), 2),
            ),
            Node::Pow(a, n) => mul(
                mul(cnst(f64::from(*n)), pow((**a).clone(), n - 1)),
                a.diff(axis),
            ),
            Node::Call(f, a) => {
                let inner = (**a).clone();
                let da = a.diff(axis);
                let outer = match f {
                    Func::Sin => call(Func::Cos, inner),
                    Func::Cos => neg(call(Func::Sin, inner)),
                    Func::Exp => call(Func::Exp, inner),
                    Func::Ln => return div(da, inner),
                    Func::Sqrt => {
                        return div(da, mul(cnst(2.0), call(Func::Sqrt, inner)));
                    }
                };
                mul(outer, da)
            }
        }
    }

    fn size(&self) -> usize {
        match self {
            Node::Const(_) | Node::Var(_) => 1,
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => 1 + a.size(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Const(c) if *c < 0.0 => write!(f, "(-{})", -c),
            Node::Const(c) => write!(f, "{c}"),
            Node::Var(i) => write!(f, "x{}", i + 1),
            Node::Neg(a) => write!(f, "(-{a})"),
            Node::Add(a, b) => write!(f, "({a} + {b})"),
            Node::Sub(a, b) => write!(f, "({a} - {b})"),
            Node::Mul(a, b) => write!(f, "({a} * {b})"),
            Node::Div(a, b) => write!(f, "({a} / {b})"),
            Node::Pow(a, n) => write!(f, "({a})^{n}"),
            Node::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

/// A smooth function of the chart coordinates, held as an expression tree.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    root: Node,
}

impl ScalarField {
    pub fn constant(c: f64) -> Self {
        ScalarField { root: cnst(c) }
    }

    /// Coordinate function `x_{axis}` for `axis` in `1..=4`.
    pub fn coordinate(axis: usize) -> Result<Self> {
        check_axis(axis)?;
        Ok(ScalarField { root: Node::Var(axis - 1) })
    }

    pub fn parse(src: &str) -> std::result::Result<Self, ParseError> {
        Parser::new(src).parse_all()
    }

    pub fn evaluate(&self, p: &Point4) -> Result<f64> {
        self.root.eval(&p.0)
    }

    /// Exact partial derivative along coordinate `axis` (`1..=4`).
    pub fn derivative(&self, axis: usize) -> Result<ScalarField> {
        check_axis(axis)?;
        Ok(ScalarField { root: self.root.diff(axis - 1) })
    }

    /// The value if the tree folded to a literal.
    pub fn as_constant(&self) -> Option<f64> {
        as_const(&self.root)
    }

    /// Number of nodes in the expression tree.
    pub fn size(&self) -> usize {
        self.root.size()
    }
}

fn check_axis(axis: usize) -> Result<()> {
    if (1..=4).contains(&axis) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(format!("axis {axis} not in 1..=4")))
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

impl FromStr for ScalarField {
    type Err = ParseError;
    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        ScalarField::parse(s)
    }
}

pub fn parse(src: &str) -> std::result::Result<ScalarField, ParseError> {
    ScalarField::parse(src)
}

pub fn evaluate(f: &ScalarField, p: &Point4) -> Result<f64> {
    f.evaluate(p)
}

pub fn derivative(f: &ScalarField, axis: usize) -> Result<ScalarField> {
    f.derivative(axis)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(u8),
    End,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    tok: Tok,
    tok_start: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src: src.as_bytes(), pos: 0, tok: Tok::End, tok_start: 0 }
    }

    fn err<T>(&self, expected: &str) -> std::result::Result<T, ParseError> {
        Err(ParseError { offset: self.tok_start, expected: expected.to_string() })
    }

    fn advance(&mut self) -> std::result::Result<(), ParseError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.tok_start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            self.tok = Tok::End;
            return Ok(());
        };
        if c.is_ascii_digit() || c == b'.' {
            let start = self.pos;
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
            {
                self.pos += 1;
            }
            if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
                let mut look = self.pos + 1;
                if matches!(self.src.get(look), Some(b'+' | b'-')) {
                    look += 1;
                }
                if self.src.get(look).is_some_and(u8::is_ascii_digit) {
                    self.pos = look;
                    while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                        self.pos += 1;
                    }
                }
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
            match text.parse::<f64>() {
                Ok(v) => self.tok = Tok::Num(v),
                Err(_) => return self.err("a number"),
            }
        } else if c.is_ascii_alphabetic() {
            let start = self.pos;
            while self.src.get(self.pos).is_some_and(u8::is_ascii_alphanumeric) {
                self.pos += 1;
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
            self.tok = Tok::Ident(text.to_string());
        } else if b"+-*/^()".contains(&c) {
            self.pos += 1;
            self.tok = Tok::Sym(c);
        } else {
            return self.err("an operator, number, variable or function");
        }
        Ok(())
    }

    fn parse_all(mut self) -> std::result::Result<ScalarField, ParseError> {
        self.advance()?;
        let root = self.expr()?;
        if self.tok != Tok::End {
            return self.err("end of input or binary operator");
        }
        Ok(ScalarField { root })
    }

    fn expr(&mut self) -> std::result::Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.tok {
                Tok::Sym(b'+') => {
                    self.advance()?;
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Sym(b'-') => {
                    self.advance()?;
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> std::result::Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.tok {
                Tok::Sym(b'*') => {
                    self.advance()?;
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Sym(b'/') => {
                    self.advance()?;
                    lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> std::result::Result<Node, ParseError> {
        if self.tok == Tok::Sym(b'-') {
            self.advance()?;
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> std::result::Result<Node, ParseError> {
        let mut base = self.primary()?;
        while self.tok == Tok::Sym(b'^') {
            self.advance()?;
            let negative = if self.tok == Tok::Sym(b'-') {
                self.advance()?;
                true
            } else {
                false
            };
            let n = match self.tok {
                Tok::Num(v) if v.fract() == 0.0 && v.abs() <= f64::from(i32::MAX) => v as i32,
                _ => return self.err("an integer exponent"),
            };
            self.advance()?;
            base = Node::Pow(Box::new(base), if negative { -n } else { n });
        }
        Ok(base)
    }

    fn primary(&mut self) -> std::result::Result<Node, ParseError> {
        match self.tok.clone() {
            Tok::Num(v) => {
                self.advance()?;
                Ok(Node::Const(v))
            }
            Tok::Ident(name) => {
                if let Some(i) = ["x1", "x2", "x3", "x4"].iter().position(|v| *v == name) {
                    self.advance()?;
                    return Ok(Node::Var(i));
                }
                let Some(func) = Func::from_name(&name) else {
                    return self.err("a variable x1..x4 or one of sin, cos, exp, ln, sqrt");
                };
                self.advance()?;
                if self.tok != Tok::Sym(b'(') {
                    return self.err("'(' after function name");
                }
                self.advance()?;
                let arg = self.expr()?;
                if self.tok != Tok::Sym(b')') {
                    return self.err("')'");
                }
                self.advance()?;
                Ok(Node::Call(func, Box::new(arg)))
            }
            Tok::Sym(b'(') => {
                self.advance()?;
                let inner = self.expr()?;
                if self.tok != Tok::Sym(b')') {
                    return self.err("')'");
                }
                self.advance()?;
                Ok(inner)
            }
            _ => self.err("a number, variable, function call or '('"),
        }
    }
}
