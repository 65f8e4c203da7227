//! Exact rational helpers. Every exact measure in the crate is a
//! [`BigRational`]; this module renders and parses the `"num/den"` form used in
//! result records.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// `count / 2^bits`.
pub fn dyadic(count: u64, bits: u32) -> BigRational {
    BigRational::new(BigInt::from(count), BigInt::from(1u8) << bits)
}

/// Renders as `"num/den"` (always with a denominator, `"0/1"` for zero).
pub fn to_string(r: &BigRational) -> String {
    if r.is_zero() {
        return "0/1".to_string();
    }
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => match s.split_once('.') {
            // Decimal input is read exactly: "0.25" is 25/100.
            Some((int, frac)) if !frac.is_empty() && frac.bytes().all(|b| b.is_ascii_digit()) => {
                let negative = int.starts_with('-');
                let int: BigInt = match int.trim_start_matches(['-', '+']) {
                    "" => BigInt::zero(),
                    digits => digits.parse().ok()?,
                };
                let scale = BigInt::from(10u8).pow(frac.len() as u32);
                let frac: BigInt = frac.parse().ok()?;
                let value = BigRational::new(int * &scale + frac, scale);
                Some(if negative { -value } else { value })
            }
            _ => s.parse::<BigInt>().ok().map(BigRational::from_integer),
        },
    }
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_and_parses() {
        let r = ratio(6, 16);
        assert_eq!(to_string(&r), "3/8");
        assert_eq!(parse("3/8"), Some(r));
        assert_eq!(to_string(&BigRational::zero()), "0/1");
        assert_eq!(parse("2"), Some(ratio(2, 1)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(dyadic(3, 3), ratio(3, 8));
        assert_eq!(parse("0.25"), Some(ratio(1, 4)));
        assert_eq!(parse("-1.5"), Some(ratio(-3, 2)));
        assert_eq!(parse(".1"), Some(ratio(1, 10)));
        assert_eq!(parse("1."), None);
        assert_eq!(parse("x.5"), None);
    }
}
