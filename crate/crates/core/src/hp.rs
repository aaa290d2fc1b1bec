//! Thin wrapper over `astro-float` with a fixed working precision.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;
const GUARD_BITS: usize = 64;

pub struct HpContext {
    bits: usize,
    digits: u32,
    consts: Consts,
}

impl HpContext {
    /// Working precision of at least `digits` decimal digits plus guard bits.
    pub fn new(digits: u32) -> Result<Self> {
        if digits < 15 {
            return Err(Error::InsufficientPrecision(digits));
        }
        let bits = (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS;
        let consts = Consts::new().map_err(|e| Error::Precision(format!("{e:?}")))?;
        Ok(Self {
            bits,
            digits,
            consts,
        })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Relative rounding unit of the working precision.
    pub fn epsilon(&self) -> f64 {
        2f64.powi(-(self.bits as i32 - 1))
    }

    pub fn from_f64(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.bits)
    }

    pub fn from_u64(&self, v: u64) -> BigFloat {
        BigFloat::from_u64(v, self.bits)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.consts.pi(self.bits, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.bits, RM, &mut self.consts)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.bits, RM, &mut self.consts)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.bits, RM)
    }

    pub fn abs(&self, a: &BigFloat) -> BigFloat {
        a.abs()
    }

    pub fn check(&self, a: BigFloat) -> Result<BigFloat> {
        if a.is_nan() {
            Err(Error::Precision(
                a.err()
                    .map_or_else(|| "NaN".to_string(), |e| format!("{e:?}")),
            ))
        } else {
            Ok(a)
        }
    }

    /// Decimal scientific notation with `digits` significant digits.
    pub fn to_decimal(&mut self, a: &BigFloat) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let raw = a
            .format(Radix::Dec, RM, &mut self.consts)
            .unwrap_or_else(|_| "NaN".to_string());
        let Some((mantissa, exponent)) = raw.split_once('e') else {
            return raw;
        };
        let (sign, body) = match mantissa.strip_prefix('-') {
            Some(rest) => ("-", rest),
            None => ("", mantissa),
        };
        let keep = self.digits as usize + 1; // leading digit plus the point
        let body: String = body.chars().take(keep + 1).collect();
        let exponent: i64 = exponent.parse().unwrap_or(0);
        format!("{sign}{body}e{exponent}")
    }

    pub fn to_f64(&mut self, a: &BigFloat) -> f64 {
        if a.is_zero() {
            return 0.0;
        }
        let raw = a
            .format(Radix::Dec, RM, &mut self.consts)
            .unwrap_or_else(|_| "NaN".to_string());
        raw.parse().unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_and_conversions() {
        let mut ctx = HpContext::new(30).unwrap();
        let pi = ctx.pi();
        assert_eq!(ctx.to_f64(&pi), std::f64::consts::PI);
        assert!(ctx
            .to_decimal(&pi)
            .starts_with("3.14159265358979323846264338327"));
        let e = ctx.exp(&ctx.from_f64(1.0));
        assert!((ctx.to_f64(&e) - std::f64::consts::E).abs() < 1e-15);
        let neg = ctx.from_f64(-2.5e-7);
        assert_eq!(ctx.to_f64(&neg), -2.5e-7);
    }

    #[test]
    fn rejects_low_precision() {
        assert!(matches!(
            HpContext::new(10),
            Err(Error::InsufficientPrecision(10))
        ));
    }
}
