use crate::Rational;
use num::Zero;
use thiserror::Error;

use super::PolynomialQ;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("divisor is identically zero to truncation order")]
    ZeroDivisor,
    #[error("numerator's lowest power of t ({num}) is below the divisor's ({den})")]
    LowOrderMismatch { num: usize, den: usize },
    #[error("divisor's lowest-order coefficient is not a nonzero constant")]
    NonConstantLead,
}

/// Power series in t truncated at a fixed order, with coefficients that are
/// polynomials (in n) with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<PolynomialQ>, // index = power of t; len = order + 1
}

impl PowerSeries {
    pub fn new(order: usize, mut coeffs: Vec<PolynomialQ>) -> Self {
        coeffs.resize(order + 1, PolynomialQ::zero());
        coeffs.truncate(order + 1);
        PowerSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(order, vec![])
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, m: usize) -> &PolynomialQ {
        &self.coeffs[m]
    }

    pub fn coeffs(&self) -> &[PolynomialQ] {
        &self.coeffs
    }

    fn lowest_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Truncated product; the result keeps the shorter order.
    pub fn mul(&self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![PolynomialQ::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        PowerSeries { coeffs }
    }

    /// Truncated quotient. The maximal common power of t is factored out of
    /// both operands first; after that the divisor's constant coefficient
    /// must be a nonzero constant polynomial.
    pub fn div(&self, den: &PowerSeries) -> Result<PowerSeries, SeriesError> {
        let den_low = den.lowest_nonzero().ok_or(SeriesError::ZeroDivisor)?;
        let num_low = self.lowest_nonzero().unwrap_or(self.coeffs.len());
        if self.lowest_nonzero().is_some() && num_low < den_low {
            return Err(SeriesError::LowOrderMismatch {
                num: num_low,
                den: den_low,
            });
        }
        let lead = &den.coeffs[den_low];
        if !lead.is_constant() {
            return Err(SeriesError::NonConstantLead);
        }
        let lead: Rational = lead.coeff(0);
        if lead.is_zero() {
            return Err(SeriesError::ZeroDivisor);
        }
        let order = self.order() - den_low;
        let inv_lead = Rational::new(lead.denom().clone(), lead.numer().clone());
        let mut q = vec![PolynomialQ::zero(); order + 1];
        for m in 0..=order {
            let mut acc = self.coeffs[m + den_low].clone();
            for j in 0..m {
                let dm = m - j + den_low;
                if dm <= den.order() && !den.coeffs[dm].is_zero() {
                    acc = &acc - &(&q[j] * &den.coeffs[dm]);
                }
            }
            q[m] = acc.scale(&inv_lead);
        }
        Ok(PowerSeries { coeffs: q })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Int;
    use num::One;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(Int::from(n), Int::from(d))
    }

    fn constant_series(order: usize, vals: &[(i64, i64)]) -> PowerSeries {
        PowerSeries::new(
            order,
            vals.iter()
                .map(|&(n, d)| PolynomialQ::constant(rat(n, d)))
                .collect(),
        )
    }

    #[test]
    fn identity_divisor() {
        let num = constant_series(3, &[(1, 1), (1, 1)]);
        let one = constant_series(3, &[(1, 1)]);
        assert_eq!(num.div(&one).unwrap(), num);
    }

    #[test]
    fn power_of_t_cancellation() {
        // t^2 / t^2 = 1
        let t2 = constant_series(4, &[(0, 1), (0, 1), (1, 1)]);
        let q = t2.div(&t2).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(q.coeff(0), &PolynomialQ::constant(Rational::one()));
        assert!(q.coeff(1).is_zero());
        assert!(q.coeff(2).is_zero());
    }

    #[test]
    fn division_errors() {
        let num = constant_series(3, &[(1, 1)]);
        let zero = PowerSeries::zero(3);
        assert_eq!(num.div(&zero), Err(SeriesError::ZeroDivisor));
        let t = constant_series(3, &[(0, 1), (1, 1)]);
        assert_eq!(
            num.div(&t),
            Err(SeriesError::LowOrderMismatch { num: 0, den: 1 })
        );
        let n_lead = PowerSeries::new(2, vec![PolynomialQ::var()]);
        assert_eq!(num.div(&n_lead), Err(SeriesError::NonConstantLead));
    }

    fn arb_series(order: usize) -> impl Strategy<Value = PowerSeries> {
        proptest::collection::vec((-6i64..=6, 1i64..=4), order + 1).prop_map(move |vals| {
            PowerSeries::new(
                order,
                vals.into_iter()
                    .map(|(n, d)| PolynomialQ::constant(rat(n, d)))
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn mul_div_roundtrip(a in arb_series(6), mut b in arb_series(6), lead in 1i64..=5) {
            // force a valid divisor: nonzero constant leading coefficient
            let mut coeffs = b.coeffs().to_vec();
            coeffs[0] = PolynomialQ::constant(rat(lead, 1));
            b = PowerSeries::new(6, coeffs);
            let prod = a.mul(&b);
            prop_assert_eq!(prod.div(&b).unwrap(), a);
        }
    }
}
