//! Exact rational scalars. Every probability, kernel entry and expectation in
//! this crate is a `Rat`; nothing is ever rounded except for display.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rat = num_rational::BigRational;

/// Rational from machine integers. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from unsigned counts. Panics on a zero denominator.
pub fn rat_u(num: u64, den: u64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Whole number as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Lossless `numerator/denominator` rendering in lowest terms.
pub fn exact_str(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `a/b` or a bare integer.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(n))
        }
    }
}

/// Decimal rendering with 12 significant digits, for display next to the
/// exact form. Pure integer arithmetic, so the output is identical on every
/// platform.
pub fn approx_str(r: &Rat) -> String {
    approx_sig(r, 12)
}

fn approx_sig(r: &Rat, sig: usize) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.numer().abs();
    let b = r.denom().clone();

    // Decimal exponent e with 10^e <= a/b < 10^(e+1).
    let mut e = a.to_string().len() as i64 - b.to_string().len() as i64;
    while pow10_cmp_ge(&a, &b, e + 1) {
        e += 1;
    }
    while !pow10_cmp_ge(&a, &b, e) {
        e -= 1;
    }

    // Round a/b * 10^(sig-1-e) half away from zero.
    let shift = sig as i64 - 1 - e;
    let (num, den) = if shift >= 0 {
        (a * BigInt::from(10u32).pow(shift as u32), b)
    } else {
        (a, b * BigInt::from(10u32).pow((-shift) as u32))
    };
    let mut digits = ((num * 2i32 + &den) / (den * 2i32)).to_string();
    if digits.len() > sig {
        // Rounding carried into an extra digit (e.g. 999.96 -> 1000).
        e += 1;
        digits.truncate(sig);
    }
    debug_assert_eq!(digits.len(), sig);

    let sign = if neg { "-" } else { "" };
    let body = if e >= 0 && (e as usize) < sig && e <= 15 {
        let split = e as usize + 1;
        format!("{}.{}", &digits[..split], &digits[split..])
    } else if (-4..0).contains(&e) {
        let zeros = "0".repeat((-e - 1) as usize);
        format!("0.{zeros}{digits}")
    } else {
        let exp = if e >= 0 {
            format!("e{e}")
        } else {
            format!("e-{}", -e)
        };
        format!("{}.{}{}", &digits[..1], &digits[1..], exp)
    };
    format!("{sign}{body}")
}

/// True iff a/b >= 10^e.
fn pow10_cmp_ge(a: &BigInt, b: &BigInt, e: i64) -> bool {
    if e >= 0 {
        *a >= b * BigInt::from(10u32).pow(e as u32)
    } else {
        a * BigInt::from(10u32).pow((-e) as u32) >= *b
    }
}

/// Display-only float approximation.
pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_rendering_is_reduced() {
        assert_eq!(exact_str(&rat(10, 20)), "1/2");
        assert_eq!(exact_str(&rat(-3, 6)), "-1/2");
        assert_eq!(exact_str(&rat_int(0)), "0/1");
    }

    #[test]
    fn parse_round_trips() {
        for r in [rat(1, 3), rat(-7, 2), rat_int(5), rat_int(0)] {
            assert_eq!(parse_rat(&exact_str(&r)).unwrap(), r);
        }
        assert_eq!(parse_rat("42").unwrap(), rat_int(42));
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("x/2").is_none());
    }

    #[test]
    fn approx_twelve_significant_digits() {
        assert_eq!(approx_str(&rat(1, 2)), "0.500000000000");
        assert_eq!(approx_str(&rat(1, 3)), "0.333333333333");
        assert_eq!(approx_str(&rat(2, 3)), "0.666666666667");
        assert_eq!(approx_str(&rat_int(1)), "1.00000000000");
        assert_eq!(approx_str(&rat_int(0)), "0");
        assert_eq!(approx_str(&rat(-1, 8)), "-0.125000000000");
        assert_eq!(approx_str(&rat(199, 399)), "0.498746867168");
    }

    #[test]
    fn approx_extreme_magnitudes_use_exponents() {
        assert_eq!(approx_str(&rat(1, 100_000)), "1.00000000000e-5");
        let big = rat_int(10).pow(20);
        assert_eq!(approx_str(&big), "1.00000000000e20");
    }

    #[test]
    fn approx_rounding_carries() {
        // 0.99999999999951 rounds up to 1.00000000000
        let r = rat(99_999_999_999_951, 100_000_000_000_000);
        assert_eq!(approx_str(&r), "1.00000000000");
    }
}
