use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{text, Rational};

/// A power series in one variable, exact through its truncation order:
/// `coefficients[k]` is the coefficient of `x^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariateSeries {
    coefficients: Vec<Rational>,
}

fn factorial(n: usize) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * Rational::from_integer(k.into()))
}

impl UnivariateSeries {
    /// Coefficients `c_0..c_N`; the order is `N = len - 1`.
    pub fn new(coefficients: Vec<Rational>) -> Self {
        assert!(!coefficients.is_empty(), "a series needs at least a constant term");
        Self { coefficients }
    }

    pub fn one(order: usize) -> Self {
        let mut c = vec![Rational::zero(); order + 1];
        c[0] = Rational::one();
        Self::new(c)
    }

    /// `e^x`.
    pub fn exponential(order: usize) -> Self {
        Self::new((0..=order).map(|k| factorial(k).recip()).collect())
    }

    /// `x / (1 - e^{-x})`, the Todd series.
    pub fn todd(order: usize) -> Self {
        // (1 - e^{-x}) / x = sum (-1)^k x^k / (k+1)!
        let denom = Self::new(
            (0..=order)
                .map(|k| {
                    let v = factorial(k + 1).recip();
                    if k % 2 == 1 { -v } else { v }
                })
                .collect(),
        );
        denom.inverse().expect("constant term is 1")
    }

    /// `(x/2) / sinh(x/2)`, the Â series.
    pub fn a_hat(order: usize) -> Self {
        // sinh(x/2) / (x/2) = sum (x/2)^{2k} / (2k+1)!
        let mut c = vec![Rational::zero(); order + 1];
        for (k, slot) in c.iter_mut().enumerate() {
            if k % 2 == 0 {
                let two_pow = Rational::from_integer(num_bigint::BigInt::from(2).pow(k as u32));
                *slot = (factorial(k + 1) * two_pow).recip();
            }
        }
        Self::new(c).inverse().expect("constant term is 1")
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    /// Coefficient of `x^k`; zero beyond the stored range.
    pub fn coefficient(&self, k: usize) -> Rational {
        self.coefficients.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Same series re-truncated (or zero-padded) to `order`.
    pub fn with_order(&self, order: usize) -> Self {
        Self::new((0..=order).map(|k| self.coefficient(k)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::new((0..=n).map(|k| self.coefficient(k) + other.coefficient(k)).collect())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.coefficients.iter().map(|c| c * k).collect())
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut c = vec![Rational::zero(); n + 1];
        for (i, a) in self.coefficients.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().enumerate().take(n + 1 - i) {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    /// Multiplicative inverse; requires `c_0 != 0`.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coefficients[0];
        if c0.is_zero() {
            return Err(Error::NotInvertible(self.to_string()));
        }
        let n = self.order();
        let inv0 = c0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut s = Rational::zero();
            for j in 1..=k {
                s += &self.coefficients[j] * &out[k - j];
            }
            out.push(-s * &inv0);
        }
        Ok(Self::new(out))
    }

    /// `f(g(x))` for `g` without constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coefficients[0].is_zero() {
            return Err(Error::MalformedClass(format!(
                "inner series {inner} must have zero constant term"
            )));
        }
        let n = self.order().min(inner.order());
        let mut out = Self::new(vec![Rational::zero(); n + 1]);
        let mut power = Self::one(n);
        for k in 0..=n {
            out = out.add(&power.scale(&self.coefficient(k)));
            power = power.mul(&inner.with_order(n));
        }
        Ok(out)
    }

    /// Logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coefficients[0].is_one() {
            return Err(Error::ConstantTermNotOne(text::format_rational(&self.coefficients[0])));
        }
        // (log f)' = f' / f
        let n = self.order();
        let inv = self.inverse()?;
        let deriv = Self::new(
            (0..=n)
                .map(|k| self.coefficient(k + 1) * Rational::from_integer((k + 1).into()))
                .collect(),
        );
        let q = deriv.mul(&inv);
        let mut c = vec![Rational::zero(); n + 1];
        for k in 1..=n {
            c[k] = q.coefficient(k - 1) / Rational::from_integer(k.into());
        }
        Ok(Self::new(c))
    }

    /// True when every odd coefficient vanishes.
    pub fn is_even(&self) -> bool {
        self.coefficients.iter().skip(1).step_by(2).all(Zero::is_zero)
    }
}

impl fmt::Display for UnivariateSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mono = |k: usize| match k {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x^{k}"),
        };
        let terms = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (mono(k), c));
        write!(f, "{} + O(x^{})", text::format_terms(terms), self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{frac, q};

    #[test]
    fn todd_series_coefficients() {
        let t = UnivariateSeries::todd(6);
        let expect = [q(1), frac(1, 2), frac(1, 12), q(0), frac(-1, 720), q(0), frac(1, 30240)];
        assert_eq!(t.coefficients(), &expect);
    }

    #[test]
    fn a_hat_series_coefficients() {
        let a = UnivariateSeries::a_hat(4);
        assert_eq!(a.coefficients(), &[q(1), q(0), frac(-1, 24), q(0), frac(7, 5760)]);
        assert!(a.is_even());
    }

    #[test]
    fn todd_is_exp_half_times_a_hat() {
        let n = 12;
        let lhs = UnivariateSeries::todd(n);
        let half = UnivariateSeries::new(
            (0..=n).map(|k| if k == 1 { frac(1, 2) } else { q(0) }).collect(),
        );
        let rhs = UnivariateSeries::exponential(n).compose(&half).unwrap().mul(&UnivariateSeries::a_hat(n));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn log_inverts_exp() {
        let e = UnivariateSeries::exponential(8);
        let l = e.log().unwrap();
        let mut x = vec![q(0); 9];
        x[1] = q(1);
        assert_eq!(l.coefficients(), &x);
        assert!(UnivariateSeries::new(vec![q(2), q(1)]).log().is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let t = UnivariateSeries::todd(7);
        assert_eq!(t.mul(&t.inverse().unwrap()), UnivariateSeries::one(7));
        assert!(UnivariateSeries::new(vec![q(0), q(1)]).inverse().is_err());
    }
}
