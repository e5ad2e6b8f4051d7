//! Exact rationals. Every quantity produced by this crate is a half-integer,
//! so reports print either `p` or `p/2`.

use num_rational::Rational64;
use num_traits::{One, Zero};

pub type Rational = Rational64;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// `n / 2`.
pub fn half(n: i64) -> Rational {
    Rational::new(n, 2)
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

pub fn is_half_integer_grid(q: &Rational) -> bool {
    *q.denom() == 1 || *q.denom() == 2
}

pub fn format(q: &Rational) -> String {
    if q.is_zero() {
        "0".to_owned()
    } else {
        q.to_string()
    }
}

/// Parses `p`, `-p`, `p/q`; decimal forms like `-1.5` are accepted when exact.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let w: i64 = if whole == "-" || whole.is_empty() {
            0
        } else {
            whole.parse().ok()?
        };
        if frac.is_empty() || frac.len() > 9 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let den = 10i64.pow(frac.len() as u32);
        let f: i64 = frac.parse().ok()?;
        let mag = Rational::new(w.abs() * den + f, den);
        return Some(if neg { -mag } else { mag });
    }
    s.parse::<i64>().ok().map(Rational::from_integer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prints_half_integers() {
        assert_eq!(format(&half(-3)), "-3/2");
        assert_eq!(format(&int(4)), "4");
        assert_eq!(format(&half(0)), "0");
    }

    #[test]
    fn parses_forms() {
        assert_eq!(parse("-3/2"), Some(half(-3)));
        assert_eq!(parse("-1.5"), Some(half(-3)));
        assert_eq!(parse("7/2"), Some(half(7)));
        assert_eq!(parse("0"), Some(int(0)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
    }
}
