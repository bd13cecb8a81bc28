//! A small expression language for profile curves.
//!
//! Grammar (single variable `t`):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          // right-associative
//! primary := number | 't' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! Functions: `sin cos tan sinh cosh tanh exp log sqrt`.

mod diff;
mod parse;
mod print;

use std::fmt;

use thiserror::Error;

pub use diff::differentiate;
pub use parse::parse;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    /// `pos` is the 1-based character column; end of input is `len + 1`.
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },

    #[error("`{name}` at position {pos} takes {expected} argument(s), got {found}")]
    WrongArity { name: String, pos: usize, expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 9] =
        [Func::Sin, Func::Cos, Func::Tan, Func::Sinh, Func::Cosh, Func::Tanh, Func::Exp, Func::Log, Func::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    fn apply(self, x: f64) -> Result<f64, ExprError> {
        let y = match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Tanh => x.tanh(),
            Func::Exp => x.exp(),
            Func::Log if x <= 0.0 => return Err(ExprError::Domain(format!("log of non-positive value {x}"))),
            Func::Log => x.ln(),
            Func::Sqrt if x < 0.0 => return Err(ExprError::Domain(format!("sqrt of negative value {x}"))),
            Func::Sqrt => x.sqrt(),
        };
        Ok(y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constant {
    Pi,
    E,
}

impl Constant {
    pub fn value(self) -> f64 {
        match self {
            Constant::Pi => std::f64::consts::PI,
            Constant::E => std::f64::consts::E,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::E => "e",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Const(Constant),
    Var,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

fn pow(base: f64, exp: f64) -> Result<f64, ExprError> {
    if base == 0.0 && exp < 0.0 {
        return Err(ExprError::Domain(format!("0 raised to negative power {exp}")));
    }
    if exp.fract() != 0.0 && base < 0.0 {
        return Err(ExprError::Domain(format!("negative base {base} raised to non-integer power {exp}")));
    }
    if exp.fract() == 0.0 && exp.abs() <= i32::MAX as f64 {
        Ok(base.powi(exp as i32))
    } else {
        Ok(base.powf(exp))
    }
}

impl Expr {
    /// Evaluate at `t`. Domain faults and non-finite results are errors.
    pub fn eval(&self, t: f64) -> Result<f64, ExprError> {
        let v = match self {
            Expr::Num(x) => *x,
            Expr::Const(c) => c.value(),
            Expr::Var => t,
            Expr::Neg(a) => -a.eval(t)?,
            Expr::Bin(op, a, b) => {
                let (x, y) = (a.eval(t)?, b.eval(t)?);
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div if y == 0.0 => return Err(ExprError::Domain(format!("division by zero at t = {t}"))),
                    BinOp::Div => x / y,
                    BinOp::Pow => pow(x, y)?,
                }
            }
            Expr::Call(f, a) => f.apply(a.eval(t)?)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ExprError::Domain(format!("non-finite value at t = {t}")))
        }
    }

    /// True when the subtree does not mention the variable.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Const(_) => true,
            Expr::Var => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.is_constant(),
            Expr::Bin(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    /// S-expression rendering of the tree, e.g. `(+ (* 2 t) 1)`.
    pub fn to_sexpr(&self) -> String {
        match self {
            Expr::Num(x) => print::number(*x),
            Expr::Const(c) => c.name().to_string(),
            Expr::Var => "t".to_string(),
            Expr::Neg(a) => format!("(neg {})", a.to_sexpr()),
            Expr::Bin(op, a, b) => format!("({} {} {})", op.symbol(), a.to_sexpr(), b.to_sexpr()),
            Expr::Call(f, a) => format!("({} {})", f.name(), a.to_sexpr()),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::canonical(self))
    }
}

/// A profile function together with its first two symbolic derivatives and
/// the closed interval on which it may be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileFunction {
    pub source: String,
    pub value: Expr,
    pub d1: Expr,
    pub d2: Expr,
    pub domain: (f64, f64),
}

/// `(f(t), f'(t), f''(t))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub f: f64,
    pub d1: f64,
    pub d2: f64,
}

impl ProfileFunction {
    pub fn new(value: Expr, domain: (f64, f64)) -> Result<Self, crate::Error> {
        let (lo, hi) = domain;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(crate::Error::Precondition(format!(
                "profile domain [{lo}, {hi}] must be a nonempty finite interval"
            )));
        }
        let d1 = differentiate(&value);
        let d2 = differentiate(&d1);
        Ok(ProfileFunction { source: value.to_string(), value, d1, d2, domain })
    }

    pub fn parse(text: &str, domain: (f64, f64)) -> Result<Self, crate::Error> {
        let mut p = ProfileFunction::new(parse(text)?, domain)?;
        p.source = text.trim().to_string();
        Ok(p)
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.domain.0 && t <= self.domain.1
    }

    fn check(&self, t: f64) -> Result<(), crate::Error> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(crate::Error::OutsideDomain { t, min: self.domain.0, max: self.domain.1 })
        }
    }

    pub fn value_at(&self, t: f64) -> Result<f64, crate::Error> {
        self.check(t)?;
        Ok(self.value.eval(t)?)
    }

    pub fn jet(&self, t: f64) -> Result<Jet, crate::Error> {
        self.check(t)?;
        Ok(Jet { f: self.value.eval(t)?, d1: self.d1.eval(t)?, d2: self.d2.eval(t)? })
    }

    /// Same as [`ProfileFunction::jet`] without the domain check; used by
    /// finite-difference stencils that step just past the interval ends.
    pub fn jet_unchecked(&self, t: f64) -> Result<Jet, crate::Error> {
        Ok(Jet { f: self.value.eval(t)?, d1: self.d1.eval(t)?, d2: self.d2.eval(t)? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ev(s: &str, t: f64) -> f64 {
        parse(s).unwrap().eval(t).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(ev("2*t+1", 3.0), 7.0);
        assert!((ev("cosh(t)^2 - sinh(t)^2", 1.7) - 1.0).abs() < 1e-14);
        assert_eq!(parse("t +"), Err(ExprError::Syntax { pos: 4, msg: "expected an operand".into() }));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("-2^2", 0.0), -4.0);
        assert_eq!(ev("2^3^2", 0.0), 512.0);
        assert_eq!(ev("2^-1", 0.0), 0.5);
        assert_eq!(ev("8/4/2", 0.0), 1.0);
        assert_eq!(ev("8-4-2", 0.0), 2.0);
        assert_eq!(ev("1 + 2*3", 0.0), 7.0);
        assert_eq!(ev("(1 + 2)*3", 0.0), 9.0);
        assert_eq!(ev("--t", 2.0), 2.0);
        assert_eq!(ev(" 2 *   t ", 4.0), 8.0);
        assert_eq!(ev("1.5e1 + .5", 0.0), 15.5);
        assert!((ev("pi", 0.0) - std::f64::consts::PI).abs() == 0.0);
        assert!((ev("e", 0.0) - std::f64::consts::E).abs() == 0.0);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse(""), Err(ExprError::Syntax { pos: 1, .. })));
        assert!(matches!(parse("   "), Err(ExprError::Syntax { .. })));
        assert_eq!(parse("2*x"), Err(ExprError::UnknownIdentifier { name: "x".into(), pos: 3 }));
        assert!(matches!(parse("sin(1, 2)"), Err(ExprError::WrongArity { found: 2, expected: 1, .. })));
        assert!(matches!(parse("sin()"), Err(ExprError::WrongArity { found: 0, .. })));
        assert!(matches!(parse("pi(2)"), Err(ExprError::WrongArity { expected: 0, .. })));
        assert!(matches!(parse("sin t"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse("(t"), Err(ExprError::Syntax { pos: 3, .. })));
        assert!(matches!(parse("t)"), Err(ExprError::Syntax { pos: 2, .. })));
        assert!(matches!(parse("t $ 2"), Err(ExprError::Syntax { pos: 3, .. })));
        assert!(matches!(parse("1.2.3"), Err(ExprError::Syntax { .. })));
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(ev("sqrt(t)", 4.0), 2.0);
        assert!(matches!(parse("1/t").unwrap().eval(0.0), Err(ExprError::Domain(_))));
        assert!((ev("exp(log(t))", 2.5) - 2.5).abs() <= 1e-14);
    }

    #[test]
    fn domain_faults() {
        for (s, t) in
            [("log(t)", 0.0), ("log(t)", -1.0), ("sqrt(t)", -0.1), ("t^-1", 0.0), ("t^0.5", -2.0), ("exp(t)", 1e3)]
        {
            assert!(matches!(parse(s).unwrap().eval(t), Err(ExprError::Domain(_))), "{s} at {t}");
        }
        assert_eq!(ev("t^2", -3.0), 9.0);
        assert_eq!(ev("t^-1", -2.0), -0.5);
    }

    #[test]
    fn derivative_examples() {
        let d = |s: &str, t: f64| differentiate(&parse(s).unwrap()).eval(t).unwrap();
        assert_eq!(d("sinh(t)", 0.0), 1.0);
        assert_eq!(d("t^2 * cos(t)", 0.0), 0.0);
        assert_eq!(differentiate(&parse("7").unwrap()), Expr::Num(0.0));
        // product-rule value at a nonzero point against 2t·cos t − t²·sin t
        let t = 0.9_f64;
        let exact = 2.0 * t * t.cos() - t * t * t.sin();
        assert!((d("t^2 * cos(t)", t) - exact).abs() < 1e-14);
    }

    #[test]
    fn profile_domain_is_enforced() {
        let p = ProfileFunction::parse("t^2", (0.0, 1.0)).unwrap();
        assert_eq!(p.jet(0.5).unwrap(), Jet { f: 0.25, d1: 1.0, d2: 2.0 });
        assert!(matches!(p.jet(1.5), Err(crate::Error::OutsideDomain { .. })));
        assert!(ProfileFunction::parse("t", (1.0, 0.0)).is_err());
        assert!(ProfileFunction::parse("t", (0.0, f64::INFINITY)).is_err());
    }

    const PROFILES: &[(&str, (f64, f64))] = &[
        ("t", (0.5, 10.0)),
        ("2 + t/sqrt(2)", (-1.0, 10.0)),
        ("1 + t/sqrt(2)", (-1.0, 10.0)),
        ("t + 2", (0.0, 10.0)),
        ("cosh(t)", (-3.0, 3.0)),
        ("sinh(t)", (-3.0, 3.0)),
        ("1 + t/2", (0.0, 5.0)),
        ("t^2 * cos(t)", (-2.0, 2.0)),
        ("exp(-t^2/2) + log(1 + t)", (0.0, 4.0)),
        ("sqrt(1 + t^2) * tanh(t)", (-2.0, 2.0)),
        ("t^1.5 / (2 + sin(3*t))", (0.1, 3.0)),
        ("tan(t/2) - e^t", (-1.0, 1.0)),
    ];

    fn central(e: &Expr, t: f64) -> f64 {
        let h = 1e-5 * (1.0 + t.abs());
        (e.eval(t + h).unwrap() - e.eval(t - h).unwrap()) / (2.0 * h)
    }

    #[test]
    fn derivatives_match_central_differences() {
        for (src, (lo, hi)) in PROFILES {
            let p = ProfileFunction::parse(src, (*lo, *hi)).unwrap();
            // keep the stencil inside the interval
            let margin = 1e-5 * (1.0 + lo.abs().max(hi.abs())) * 2.0;
            for k in 0..100 {
                let t = lo + margin + (hi - lo - 2.0 * margin) * k as f64 / 99.0;
                let j = p.jet(t).unwrap();
                let fd1 = central(&p.value, t);
                let fd2 = central(&p.d1, t);
                assert!((j.d1 - fd1).abs() <= 1e-7 * (1.0 + j.d1.abs()), "{src} d1 at {t}: {} vs {fd1}", j.d1);
                assert!((j.d2 - fd2).abs() <= 1e-7 * (1.0 + j.d2.abs()), "{src} d2 at {t}: {} vs {fd2}", j.d2);
            }
        }
    }

    #[test]
    fn print_round_trip_on_profiles() {
        for (src, (lo, hi)) in PROFILES {
            let e = parse(src).unwrap();
            let again = parse(&e.to_string()).unwrap();
            for k in 0..20 {
                let t = lo + (hi - lo) * k as f64 / 19.0;
                let (a, b) = (e.eval(t).unwrap(), again.eval(t).unwrap());
                assert!((a - b).abs() <= 1e-15 * (1.0 + a.abs()), "{src}: {a} vs {b}");
            }
        }
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (-5.0f64..5.0).prop_map(Expr::Num),
            Just(Expr::Var),
            Just(Expr::Const(Constant::Pi)),
            Just(Expr::Const(Constant::E)),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
                (0usize..5, inner.clone(), inner.clone()).prop_map(|(k, a, b)| {
                    let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow][k];
                    Expr::Bin(op, Box::new(a), Box::new(b))
                }),
                (0usize..9, inner).prop_map(|(k, a)| Expr::Call(Func::ALL[k], Box::new(a))),
            ]
        })
    }

    proptest! {
        #[test]
        fn printed_form_reparses_to_same_values(e in arb_expr()) {
            let again = parse(&e.to_string()).unwrap();
            for k in 0..20 {
                let t = -2.0 + 4.0 * k as f64 / 19.0;
                match (e.eval(t), again.eval(t)) {
                    (Ok(a), Ok(b)) => prop_assert!((a - b).abs() <= 1e-15 * (1.0 + a.abs()), "{} : {a} vs {b}", e),
                    (Err(_), Err(_)) => {}
                    (a, b) => prop_assert!(false, "{}: {:?} vs {:?}", e, a, b),
                }
            }
        }
    }
}
