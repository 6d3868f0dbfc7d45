//! Text input: polynomial expressions, coefficient lists and valuation lists.
//!
//! Polynomial grammar: terms `c`, `c*x`, `c*x^k`, `x^k`, `x` (the `*` may be
//! omitted) joined by `+` or `-`, with an optional leading sign and arbitrary
//! whitespace. Repeated powers accumulate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::valuation::{ExtendedValue, Value, ValueGroup};

pub const MAX_EXPONENT: usize = 1_000_000;

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            chars: src.char_indices().collect(),
            pos: 0,
            src,
        }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.src.len(), |&(o, _)| o)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.offset();
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let end = self.offset();
        (end > start).then(|| &self.src[start..end])
    }
}

fn parse_term(cur: &mut Cursor, sign: i8, coeffs: &mut Vec<BigInt>) -> Result<()> {
    let coeff = cur.digits().map(|d| d.parse::<BigInt>().unwrap());
    let star = cur.eat('*');
    let power = if cur.eat('x') {
        if cur.eat('^') {
            let at = cur.offset();
            let Some(d) = cur.digits() else {
                return cur.error("expected an exponent after '^'");
            };
            match d.parse::<usize>() {
                Ok(k) if k <= MAX_EXPONENT => k,
                _ => {
                    return Err(Error::Parse {
                        offset: at,
                        message: format!("exponent exceeds {MAX_EXPONENT}"),
                    })
                }
            }
        } else {
            1
        }
    } else if star {
        return cur.error("expected 'x' after '*'");
    } else if coeff.is_none() {
        return cur.error("expected a coefficient or 'x'");
    } else {
        0
    };
    let mut c = coeff.unwrap_or_else(|| BigInt::from(1));
    if sign < 0 {
        c = -c;
    }
    if coeffs.len() <= power {
        coeffs.resize(power + 1, BigInt::zero());
    }
    coeffs[power] += c;
    Ok(())
}

pub fn parse_polynomial(text: &str) -> Result<IntPolynomial> {
    let mut cur = Cursor::new(text);
    let mut coeffs = Vec::new();
    let mut sign = if cur.eat('-') {
        -1
    } else {
        cur.eat('+');
        1
    };
    loop {
        parse_term(&mut cur, sign, &mut coeffs)?;
        cur.skip_ws();
        sign = match cur.peek() {
            None => break,
            Some('+') => 1,
            Some('-') => -1,
            Some(c) => return cur.error(format!("unexpected character '{c}'")),
        };
        cur.pos += 1;
    }
    Ok(IntPolynomial::new(coeffs))
}

/// Comma-separated integer coefficients, constant term first.
pub fn parse_coefficients(text: &str) -> Result<IntPolynomial> {
    let mut coeffs = Vec::new();
    let mut offset = 0;
    for item in text.split(',') {
        let trimmed = item.trim();
        match trimmed.parse::<BigInt>() {
            Ok(c) => coeffs.push(c),
            Err(_) => {
                return Err(Error::Parse {
                    offset: offset + item.find(trimmed).unwrap_or(0),
                    message: format!("'{trimmed}' is not an integer"),
                })
            }
        }
        offset += item.len() + 1;
    }
    Ok(IntPolynomial::new(coeffs))
}

fn split_top_level(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &text[start..]));
    out
}

/// Comma-separated valuations `v(a_0), v(a_1), ...`; `inf` marks a zero
/// coefficient. Elements of `Z^r` are written `(c_1, ..., c_r)`.
pub fn parse_valuations(text: &str, group: ValueGroup) -> Result<Vec<ExtendedValue>> {
    let rank = group.rank();
    split_top_level(text)
        .into_iter()
        .map(|(offset, item)| {
            let err = |message: String| Error::Parse { offset, message };
            let t = item.trim();
            if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
                return Ok(ExtendedValue::Infinity);
            }
            let inner = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(t);
            let comps = inner
                .split(',')
                .map(|c| c.trim().parse::<BigInt>().map(BigRational::from_integer))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| err(format!("'{t}' is not a valuation")))?;
            if comps.len() != rank {
                return Err(err(format!("'{t}' has {} components, expected {rank}", comps.len())));
            }
            Ok(ExtendedValue::Finite(Value::new(comps)))
        })
        .collect()
}

/// `z` or `zlex:R`.
pub fn parse_group(text: &str) -> Result<ValueGroup> {
    let t = text.trim().to_ascii_lowercase();
    if t == "z" {
        return Ok(ValueGroup::Integers);
    }
    if let Some(r) = t.strip_prefix("zlex:") {
        if let Ok(r) = r.parse::<usize>() {
            if r >= 1 {
                return Ok(ValueGroup::Lex(r));
            }
        }
    }
    Err(Error::Parse {
        offset: 0,
        message: format!("unknown value group '{text}' (expected z or zlex:R)"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn coeffs(p: &IntPolynomial) -> Vec<i64> {
        p.coeffs().iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn examples() {
        assert_eq!(
            coeffs(&parse_polynomial("x^4 + 2*x^2 + 4").unwrap()),
            vec![4, 0, 2, 0, 1]
        );
        assert_eq!(
            coeffs(&parse_polynomial("x^5+2x^4+64").unwrap()),
            vec![64, 0, 0, 0, 2, 1]
        );
        assert!(parse_polynomial("x - x").unwrap().is_zero());
        assert_eq!(coeffs(&parse_polynomial("-x + 3 x^2 - 7").unwrap()), vec![-7, -1, 3]);
        assert_eq!(coeffs(&parse_polynomial(" x^2 + x^2 + 2 * x ").unwrap()), vec![0, 2, 2]);
        assert_eq!(coeffs(&parse_polynomial("+5").unwrap()), vec![5]);
        let big = parse_polynomial("123456789012345678901234567890*x").unwrap();
        assert_eq!(big.coeff(1).to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn errors_carry_offsets() {
        let offset = |s: &str| match parse_polynomial(s) {
            Err(Error::Parse { offset, .. }) => offset,
            other => panic!("{s:?} parsed as {other:?}"),
        };
        assert_eq!(offset("x^2 + + 1"), 6);
        assert_eq!(offset("x^2 $ 1"), 4);
        assert_eq!(offset("3*"), 2);
        assert_eq!(offset("x^"), 2);
        assert_eq!(offset(""), 0);
        assert_eq!(offset("x^1000001"), 2);
        assert!(parse_polynomial("x^1000000").is_ok());
    }

    #[test]
    fn lists() {
        assert_eq!(coeffs(&parse_coefficients("4, 0, 2,0,1").unwrap()), vec![4, 0, 2, 0, 1]);
        assert!(matches!(
            parse_coefficients("1, y"),
            Err(Error::Parse { offset: 3, .. })
        ));
        let v = parse_valuations("6,1,inf,INF, inf ,0", ValueGroup::Integers).unwrap();
        assert_eq!(v.len(), 6);
        assert_eq!(v[2], ExtendedValue::Infinity);
        assert_eq!(v[0], ExtendedValue::int(6));
        let v = parse_valuations("(1,0), inf, (0, 0)", ValueGroup::Lex(2)).unwrap();
        assert_eq!(v[0], ExtendedValue::Finite(Value::from_ints(&[1, 0])));
        assert!(parse_valuations("(1,0,2)", ValueGroup::Lex(2)).is_err());
        assert!(parse_valuations("1/2", ValueGroup::Integers).is_err());
        assert_eq!(parse_group("zlex:3").unwrap(), ValueGroup::Lex(3));
        assert_eq!(parse_group("Z").unwrap(), ValueGroup::Integers);
        assert!(parse_group("zlex:0").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn render_parse_round_trip(c in prop::collection::vec(-1000i64..1000, 0..15)) {
            let p = IntPolynomial::from_i64s(&c);
            prop_assert_eq!(parse_polynomial(&p.to_string()).unwrap(), p);
        }
    }
}
