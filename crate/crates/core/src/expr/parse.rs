use super::{BinOp, Constant, Expr, ExprError, Func};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    /// 1-based column of the first character.
    pos: usize,
}

fn syntax(pos: usize, msg: impl Into<String>) -> ExprError {
    ExprError::Syntax { pos, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<Token>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent only when followed by a digit, so `2e` stays an error
            // rather than swallowing the constant `e`
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
            let s: String = chars[start..i].iter().collect();
            let v = s.parse::<f64>().map_err(|_| syntax(pos, format!("malformed number `{s}`")))?;
            out.push(Token { tok: Tok::Num(v), pos });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), pos });
            continue;
        }
        let tok = match c {
            '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            _ => return Err(syntax(pos, format!("unexpected character `{c}`"))),
        };
        out.push(Token { tok, pos });
        i += 1;
    }
    out.push(Token { tok: Tok::End, pos: chars.len() + 1 });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.peek().tok == Tok::Op('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        if self.peek().tok == Tok::Op('^') {
            self.bump();
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn expect_rparen(&mut self, open_pos: usize) -> Result<(), ExprError> {
        let t = self.bump();
        match t.tok {
            Tok::RParen => Ok(()),
            _ => Err(syntax(t.pos, format!("expected `)` to close `(` at position {open_pos}"))),
        }
    }

    /// Parses a parenthesised, comma-separated argument list after a name.
    fn call_args(&mut self) -> Result<Vec<Expr>, ExprError> {
        let open = self.bump();
        if self.peek().tok == Tok::RParen {
            self.bump();
            return Ok(Vec::new());
        }
        let mut args = vec![self.expr()?];
        while self.peek().tok == Tok::Comma {
            self.bump();
            args.push(self.expr()?);
        }
        self.expect_rparen(open.pos)?;
        Ok(args)
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let t = self.bump();
        match t.tok {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect_rparen(t.pos)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let atom = match name.as_str() {
                    "t" => Some(Expr::Var),
                    "pi" => Some(Expr::Const(Constant::Pi)),
                    "e" => Some(Expr::Const(Constant::E)),
                    _ => None,
                };
                let called = self.peek().tok == Tok::LParen;
                match (atom, Func::from_name(&name)) {
                    (Some(_), _) if called => {
                        let found = self.call_args()?.len();
                        Err(ExprError::WrongArity { name, pos: t.pos, expected: 0, found })
                    }
                    (Some(a), _) => Ok(a),
                    (None, Some(f)) if called => {
                        let mut args = self.call_args()?;
                        if args.len() != 1 {
                            return Err(ExprError::WrongArity { name, pos: t.pos, expected: 1, found: args.len() });
                        }
                        Ok(Expr::Call(f, Box::new(args.remove(0))))
                    }
                    (None, Some(_)) => {
                        let next = self.peek().pos;
                        Err(syntax(next, format!("expected `(` after function `{name}`")))
                    }
                    (None, None) => Err(ExprError::UnknownIdentifier { name, pos: t.pos }),
                }
            }
            Tok::End | Tok::Op(_) => Err(syntax(t.pos, "expected an operand")),
            Tok::RParen | Tok::Comma => Err(syntax(t.pos, "expected an operand")),
        }
    }
}

/// Parse expression text into an [`Expr`].
pub fn parse(text: &str) -> Result<Expr, ExprError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0 };
    let e = p.expr()?;
    let t = p.peek();
    match t.tok {
        Tok::End => Ok(e),
        Tok::RParen => Err(syntax(t.pos, "unmatched `)`")),
        _ => Err(syntax(t.pos, "expected an operator or end of input")),
    }
}
