use super::{BinOp, Expr, Func};

fn num(x: f64) -> Expr {
    Expr::Num(x)
}

fn as_num(e: &Expr) -> Option<f64> {
    match e {
        Expr::Num(x) => Some(*x),
        _ => None,
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(x) => num(-x),
        Expr::Neg(inner) => *inner,
        a => Expr::Neg(Box::new(a)),
    }
}

fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
    // fold only when the result is an ordinary finite number
    if let (Some(x), Some(y)) = (as_num(&a), as_num(&b)) {
        let folded = match op {
            BinOp::Add => Some(x + y),
            BinOp::Sub => Some(x - y),
            BinOp::Mul => Some(x * y),
            BinOp::Div if y != 0.0 => Some(x / y),
            BinOp::Pow => Expr::Bin(op, Box::new(num(x)), Box::new(num(y))).eval(0.0).ok(),
            BinOp::Div => None,
        };
        if let Some(v) = folded.filter(|v| v.is_finite()) {
            return num(v);
        }
    }
    Expr::Bin(op, Box::new(a), Box::new(b))
}

fn add(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(0.0), _) => b,
        (_, Some(0.0)) => a,
        _ => bin(BinOp::Add, a, b),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (_, Some(0.0)) => a,
        (Some(0.0), None) => neg(b),
        _ => bin(BinOp::Sub, a, b),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(0.0), _) | (_, Some(0.0)) => num(0.0),
        (Some(1.0), _) => b,
        (_, Some(1.0)) => a,
        _ => bin(BinOp::Mul, a, b),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(0.0), _) => num(0.0),
        (_, Some(1.0)) => a,
        _ => bin(BinOp::Div, a, b),
    }
}

fn pow(a: Expr, b: Expr) -> Expr {
    match as_num(&b) {
        Some(1.0) => a,
        _ => bin(BinOp::Pow, a, b),
    }
}

fn call(f: Func, a: Expr) -> Expr {
    Expr::Call(f, Box::new(a))
}

/// Symbolic derivative with respect to the variable.
///
/// Numeric subtrees are folded and additive/multiplicative identities are
/// dropped; no other simplification is attempted.
pub fn differentiate(e: &Expr) -> Expr {
    match e {
        Expr::Num(_) | Expr::Const(_) => num(0.0),
        Expr::Var => num(1.0),
        Expr::Neg(a) => neg(differentiate(a)),
        Expr::Bin(op, a, b) => {
            let (a, b) = (a.as_ref(), b.as_ref());
            match op {
                BinOp::Add => add(differentiate(a), differentiate(b)),
                BinOp::Sub => sub(differentiate(a), differentiate(b)),
                BinOp::Mul => add(mul(differentiate(a), b.clone()), mul(a.clone(), differentiate(b))),
                BinOp::Div => {
                    // (a'b − ab') / b²
                    let num_ = sub(mul(differentiate(a), b.clone()), mul(a.clone(), differentiate(b)));
                    div(num_, pow(b.clone(), num(2.0)))
                }
                BinOp::Pow => diff_pow(a, b),
            }
        }
        Expr::Call(f, a) => {
            let inner = differentiate(a);
            let a = a.as_ref().clone();
            let outer = match f {
                Func::Sin => call(Func::Cos, a),
                Func::Cos => neg(call(Func::Sin, a)),
                // sec² u = 1 / cos² u
                Func::Tan => div(num(1.0), pow(call(Func::Cos, a), num(2.0))),
                Func::Sinh => call(Func::Cosh, a),
                Func::Cosh => call(Func::Sinh, a),
                Func::Tanh => div(num(1.0), pow(call(Func::Cosh, a), num(2.0))),
                Func::Exp => call(Func::Exp, a),
                Func::Log => div(num(1.0), a),
                Func::Sqrt => div(num(0.5), call(Func::Sqrt, a)),
            };
            mul(outer, inner)
        }
    }
}

fn diff_pow(base: &Expr, exp: &Expr) -> Expr {
    let db = differentiate(base);
    if exp.is_constant() {
        // c · u^(c−1) · u'
        let lowered = match as_num(exp) {
            Some(c) => num(c - 1.0),
            None => sub(exp.clone(), num(1.0)),
        };
        return mul(mul(exp.clone(), pow(base.clone(), lowered)), db);
    }
    let de = differentiate(exp);
    let here = Expr::Bin(BinOp::Pow, Box::new(base.clone()), Box::new(exp.clone()));
    if base.is_constant() {
        // u^v · ln u · v'
        return mul(mul(here, call(Func::Log, base.clone())), de);
    }
    // u^v · (v' ln u + v u'/u)
    let factor = add(mul(de, call(Func::Log, base.clone())), div(mul(exp.clone(), db), base.clone()));
    mul(here, factor)
}
