use super::{BinOp, Expr};

/// Shortest text that parses back to exactly `x`.
pub(super) fn number(x: f64) -> String {
    format!("{x}")
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Expr::Neg(_) => 3,
        Expr::Num(x) if x.is_sign_negative() => 3,
        Expr::Bin(BinOp::Pow, ..) => 4,
        _ => 5,
    }
}

fn child(out: &mut String, e: &Expr, min: u8) {
    if precedence(e) < min {
        out.push('(');
        write(out, e);
        out.push(')');
    } else {
        write(out, e);
    }
}

fn write(out: &mut String, e: &Expr) {
    match e {
        Expr::Num(x) => out.push_str(&number(*x)),
        Expr::Const(c) => out.push_str(c.name()),
        Expr::Var => out.push('t'),
        Expr::Neg(a) => {
            out.push('-');
            child(out, a, 3);
        }
        Expr::Bin(op, a, b) => {
            // left-associative levels keep the right operand strictly tighter so
            // the printed text re-parses into the same tree
            let (lmin, rmin) = match op {
                BinOp::Add | BinOp::Sub => (1, 2),
                BinOp::Mul | BinOp::Div => (2, 3),
                BinOp::Pow => (5, 3),
            };
            child(out, a, lmin);
            match op {
                BinOp::Pow => out.push('^'),
                _ => {
                    out.push(' ');
                    out.push(op.symbol());
                    out.push(' ');
                }
            }
            child(out, b, rmin);
        }
        Expr::Call(f, a) => {
            out.push_str(f.name());
            out.push('(');
            write(out, a);
            out.push(')');
        }
    }
}

pub(super) fn canonical(e: &Expr) -> String {
    let mut s = String::new();
    write(&mut s, e);
    s
}
