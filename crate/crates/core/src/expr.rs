//! The expression grammar shared by file formats and canonical printing.
//!
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' INT)?
//! atom   := INT | 'i' | 'z' | '(' expr ')'
//!
//! Printing emits the same grammar, expanded numerator over monic
//! denominator, so parse(print(f)) = f.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::scalar::{Field, Rational, Scalar};

/// Largest accepted `^` exponent. Inputs are desk scale; this is a guard
/// against accidental blow-up, not a real capacity limit.
pub const MAX_EXPONENT: usize = 1024;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("unexpected token {0:?}")]
    UnexpectedToken(String),
    #[error("division by zero in expression")]
    DivisionByZero,
    #[error("the imaginary unit is not available over Q")]
    ImaginaryUnit,
    #[error("exponent {0} exceeds the limit {MAX_EXPONENT}")]
    ExponentTooLarge(BigInt),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Z,
    I,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => n.to_string(),
            Tok::Z => "z".into(),
            Tok::I => "i".into(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Slash => "/".into(),
            Tok::Caret => "^".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
        }
    }
}

fn lex(s: &str) -> Result<Vec<Tok>, ParseError> {
    let mut toks = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Int(digits.parse().unwrap()));
            }
            'z' => {
                chars.next();
                toks.push(Tok::Z);
            }
            'i' => {
                chars.next();
                toks.push(Tok::I);
            }
            '+' => {
                chars.next();
                toks.push(Tok::Plus);
            }
            '-' => {
                chars.next();
                toks.push(Tok::Minus);
            }
            '*' => {
                chars.next();
                toks.push(Tok::Star);
            }
            '/' => {
                chars.next();
                toks.push(Tok::Slash);
            }
            '^' => {
                chars.next();
                toks.push(Tok::Caret);
            }
            '(' => {
                chars.next();
                toks.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                toks.push(Tok::RParen);
            }
            other => return Err(ParseError::UnexpectedChar(other)),
        }
    }
    Ok(toks)
}

struct Parser<'a, S: Scalar> {
    toks: &'a [Tok],
    pos: usize,
    _scalar: std::marker::PhantomData<S>,
}

impl<'a, S: Scalar> Parser<'a, S> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Result<&'a Tok, ParseError> {
        let t = self.toks.get(self.pos).ok_or(ParseError::UnexpectedEnd)?;
        self.pos += 1;
        Ok(t)
    }

    fn expr(&mut self) -> Result<RatFunc<S>, ParseError> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc<S>, ParseError> {
        let mut acc = self.factor()?;
        while let Some(t) = self.peek() {
            match t {
                Tok::Star => {
                    self.pos += 1;
                    acc = acc * self.factor()?;
                }
                Tok::Slash => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    if rhs.is_zero() {
                        return Err(ParseError::DivisionByZero);
                    }
                    acc = acc / rhs;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RatFunc<S>, ParseError> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.pos += 1;
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            match self.bump()? {
                Tok::Int(n) => {
                    let k = n
                        .to_usize()
                        .filter(|&k| k <= MAX_EXPONENT)
                        .ok_or_else(|| ParseError::ExponentTooLarge(n.clone()))?;
                    return Ok(base.pow(k));
                }
                other => return Err(ParseError::UnexpectedToken(other.describe())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc<S>, ParseError> {
        match self.bump()? {
            Tok::Int(n) => Ok(RatFunc::from_scalar(S::from_rational(Rational::from(
                n.clone(),
            )))),
            Tok::Z => Ok(RatFunc::z()),
            Tok::I => S::imaginary_unit()
                .map(RatFunc::from_scalar)
                .ok_or(ParseError::ImaginaryUnit),
            Tok::LParen => {
                let inner = self.expr()?;
                match self.bump()? {
                    Tok::RParen => Ok(inner),
                    other => Err(ParseError::UnexpectedToken(other.describe())),
                }
            }
            other => Err(ParseError::UnexpectedToken(other.describe())),
        }
    }
}

pub fn parse<S: Scalar>(s: &str) -> Result<RatFunc<S>, ParseError> {
    let toks = lex(s)?;
    let mut p = Parser::<S> { toks: &toks, pos: 0, _scalar: std::marker::PhantomData };
    let out = p.expr()?;
    match p.peek() {
        None => Ok(out),
        Some(t) => Err(ParseError::UnexpectedToken(t.describe())),
    }
}

fn rat_string(q: &Rational) -> String {
    q.to_string()
}

/// Renders a scalar; the flag says whether the string is a sum that needs
/// parentheses when it becomes a multiplicative coefficient.
fn scalar_core<S: Scalar>(c: &S) -> (String, bool) {
    let re = c.re();
    let im = c.im();
    if Field::is_zero(&im) {
        return (rat_string(&re), false);
    }
    let im_part = if im == Rational::from_i64(1) {
        "i".to_string()
    } else if im == Rational::from_i64(-1) {
        "-i".to_string()
    } else {
        format!("{}*i", rat_string(&im))
    };
    if Field::is_zero(&re) {
        return (im_part, false);
    }
    let joined = if im_part.starts_with('-') {
        format!("{}{}", rat_string(&re), im_part)
    } else {
        format!("{}+{}", rat_string(&re), im_part)
    };
    (joined, true)
}

fn term_count<S: Scalar>(p: &Poly<S>) -> usize {
    p.coeffs().iter().filter(|c| !c.is_zero()).count()
}

pub fn poly_string<S: Scalar>(p: &Poly<S>) -> String {
    let Some(deg) = p.degree() else {
        return "0".to_string();
    };
    let mut out = String::new();
    for k in (0..=deg).rev() {
        let c = p.coeff(k);
        if c.is_zero() {
            continue;
        }
        let (cs, compound) = scalar_core(&c);
        let term = if k == 0 {
            cs
        } else {
            let var = if k == 1 { "z".to_string() } else { format!("z^{k}") };
            if c.is_one() {
                var
            } else if c == S::from_i64(-1) {
                format!("-{var}")
            } else if compound {
                format!("({cs})*{var}")
            } else {
                format!("{cs}*{var}")
            }
        };
        if out.is_empty() || term.starts_with('-') {
            out.push_str(&term);
        } else {
            out.push('+');
            out.push_str(&term);
        }
    }
    out
}

pub fn ratfunc_string<S: Scalar>(f: &RatFunc<S>) -> String {
    let num = poly_string(f.numerator());
    if f.denominator().is_one() {
        return num;
    }
    let den = poly_string(f.denominator());
    let np = if term_count(f.numerator()) >= 2 { format!("({num})") } else { num };
    let dp = if term_count(f.denominator()) >= 2 { format!("({den})") } else { den };
    format!("{np}/{dp}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRational;

    type FQ = RatFunc<Rational>;
    type FI = RatFunc<GaussRational>;

    #[test]
    fn parses_the_grammar() {
        let f: FQ = parse("(z^2 - 1) / (2*z + 2)").unwrap();
        // reduces to (z-1)/2
        assert_eq!(f, FQ::new(Poly::from_i64s(&[-1, 1]), Poly::from_i64s(&[2])));
        let g: FQ = parse("-z^3").unwrap();
        assert_eq!(g, -FQ::z().pow(3));
        let h: FI = parse("i*z + 1").unwrap();
        assert_eq!(h.to_string(), "i*z+1");
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse::<Rational>("1//z"), Err(ParseError::UnexpectedToken(_))));
        assert!(matches!(parse::<Rational>("1/(z-z)"), Err(ParseError::DivisionByZero)));
        assert!(matches!(parse::<Rational>("i+1"), Err(ParseError::ImaginaryUnit)));
        assert!(matches!(parse::<Rational>("z^"), Err(ParseError::UnexpectedEnd)));
        assert!(matches!(parse::<Rational>("z^-2"), Err(ParseError::UnexpectedToken(_))));
        assert!(matches!(parse::<Rational>("y"), Err(ParseError::UnexpectedChar('y'))));
        assert!(matches!(parse::<Rational>("z^9999999"), Err(ParseError::ExponentTooLarge(_))));
    }

    #[test]
    fn printing_round_trips() {
        let cases = ["1/2/z", "(3*z^2-1)/(z^3-z)", "z^2-1", "0", "-z/(z+1)", "2/3"];
        for s in cases {
            let f: FQ = parse(s).unwrap();
            assert_eq!(ratfunc_string(&f), s, "canonical form of {s}");
            let back: FQ = parse(&ratfunc_string(&f)).unwrap();
            assert_eq!(back, f);
        }
    }

    #[test]
    fn gaussian_coefficients_print_with_parens() {
        let f: FI = parse("(1+i)*z^2 - i").unwrap();
        assert_eq!(ratfunc_string(&f), "(1+i)*z^2-i");
        let back: FI = parse(&ratfunc_string(&f)).unwrap();
        assert_eq!(back, f);
    }
}
