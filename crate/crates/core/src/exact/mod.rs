//! Exact-arithmetic kernel: Bernoulli numbers and polynomials, Faulhaber
//! power sums, Stirling numbers of the second kind, even-zeta rational
//! factors, and truncated power series with polynomial coefficients.

mod poly;
mod series;

pub use poly::PolynomialQ;
pub use series::{PowerSeries, SeriesError};

use crate::{Int, Rational};
use num::{One, Signed, Zero};

/// Formats a rational as `p/q`, or just `p` when the denominator is 1.
/// This is the wire encoding used by every CLI output format.
pub fn rational_str(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the `p/q` (or `p`) encoding produced by [`rational_str`].
pub fn parse_rational(s: &str) -> Option<Rational> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.parse::<Int>().ok()?, b.parse::<Int>().ok()?),
        None => (s.parse::<Int>().ok()?, Int::one()),
    };
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Binomial coefficient C(n, k) as an exact integer.
pub fn binomial(n: u64, k: u64) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut acc = Int::one();
    for i in 0..k {
        acc = acc * Int::from(n - i) / Int::from(i + 1);
    }
    acc
}

/// Bernoulli numbers B_0..B_m in the convention B_1 = -1/2.
fn bernoulli_numbers(m: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(m + 1);
    b.push(Rational::one());
    for i in 1..=m {
        // sum_{j=0}^{i} C(i+1, j) B_j = 0, solved for B_i
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from(binomial(i as u64 + 1, j as u64)) * bj;
        }
        b.push(-acc / Rational::from(Int::from(i as u64 + 1)));
    }
    b
}

/// Bernoulli number B_m, with B_1 = -1/2 (the convention forced by the
/// Faulhaber identity sum m^p = (B_{p+1}(n+1) - B_{p+1})/(p+1)).
pub fn bernoulli_number(m: usize) -> Rational {
    bernoulli_numbers(m).pop().unwrap()
}

/// Bernoulli polynomial B_p(x) = sum_j C(p,j) B_j x^{p-j}.
pub fn bernoulli_polynomial(p: usize) -> PolynomialQ {
    let b = bernoulli_numbers(p);
    let mut coeffs = vec![Rational::zero(); p + 1];
    for (j, bj) in b.iter().enumerate() {
        coeffs[p - j] = Rational::from(binomial(p as u64, j as u64)) * bj;
    }
    PolynomialQ::new(coeffs)
}

/// Faulhaber power sum: sum_{m=1}^{n} m^p via (B_{p+1}(n+1) - B_{p+1}(1))/(p+1).
/// For p >= 1 the subtrahend equals the Bernoulli number B_{p+1}; at p = 0 it
/// must be B_1(1) = 1/2 for the identity to match the literal sum.
pub fn faulhaber_sum(p: usize, n: u64) -> Rational {
    assert!(n >= 1);
    let bp1 = bernoulli_polynomial(p + 1);
    let at_n1 = bp1.eval(&Rational::from(Int::from(n + 1)));
    let at_one = bp1.eval(&Rational::one());
    (at_n1 - at_one) / Rational::from(Int::from(p as u64 + 1))
}

/// The polynomial S_p(n) with S_p(m) = sum_{i=1}^{m} i^p for every positive
/// integer m. Degree p+1, zero constant term.
pub fn faulhaber_polynomial(p: usize) -> PolynomialQ {
    // (B_{p+1}(x+1) - B_{p+1}(1))/(p+1), expanded in x.
    let bp1 = bernoulli_polynomial(p + 1);
    let at_one = bp1.eval(&Rational::one());
    let shifted = bp1.compose_shift_one() - PolynomialQ::constant(at_one);
    shifted.scale(&Rational::new(Int::one(), Int::from(p as u64 + 1)))
}

/// Stirling number of the second kind S(m, k) via the standard recurrence
/// S(m,k) = k S(m-1,k) + S(m-1,k-1).
pub fn stirling2(m: usize, k: usize) -> Int {
    if k > m {
        return Int::zero();
    }
    if m == 0 {
        return Int::one(); // S(0,0)
    }
    if k == 0 {
        return Int::zero();
    }
    let mut prev = vec![Int::zero(); k + 1];
    prev[0] = Int::one();
    for i in 1..=m {
        let mut curr = vec![Int::zero(); k + 1];
        for j in 1..=k.min(i) {
            curr[j] = Int::from(j as u64) * &prev[j] + &prev[j - 1];
        }
        prev = curr;
    }
    prev[k].clone()
}

/// The rational q with zeta(2r) = q * pi^{2r}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaEvenValue {
    pub r: usize,
    pub factor: Rational,
}

/// zeta(2r) as an exact rational multiple of pi^{2r}:
/// q = (-1)^{r-1} 2^{2r-1} B_{2r} / (2r)!.
pub fn zeta_even_factor(r: usize) -> ZetaEvenValue {
    assert!(r >= 1);
    let b2r = bernoulli_number(2 * r);
    let mut fact = Int::one();
    for i in 1..=(2 * r) as u64 {
        fact *= Int::from(i);
    }
    let sign = if r % 2 == 1 { Int::one() } else { -Int::one() };
    let factor = Rational::from(sign * (Int::one() << (2 * r - 1))) * b2r / Rational::from(fact);
    debug_assert!(factor.is_positive());
    ZetaEvenValue { r, factor }
}

/// Truncated quotient of two power series; see [`PowerSeries::div`].
pub fn series_div(num: &PowerSeries, den: &PowerSeries) -> Result<PowerSeries, SeriesError> {
    num.div(den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::traits::Pow;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(Int::from(n), Int::from(d))
    }

    #[test]
    fn bernoulli_small() {
        assert_eq!(bernoulli_number(0), rat(1, 1));
        assert_eq!(bernoulli_number(1), rat(-1, 2));
        assert_eq!(bernoulli_number(2), rat(1, 6));
        assert_eq!(bernoulli_number(3), rat(0, 1));
        assert_eq!(bernoulli_number(12), rat(-691, 2730));
    }

    #[test]
    fn bernoulli_polynomial_small() {
        assert_eq!(bernoulli_polynomial(0), PolynomialQ::constant(rat(1, 1)));
        assert_eq!(
            bernoulli_polynomial(1),
            PolynomialQ::new(vec![rat(-1, 2), rat(1, 1)])
        );
        assert_eq!(
            bernoulli_polynomial(2),
            PolynomialQ::new(vec![rat(1, 6), rat(-1, 1), rat(1, 1)])
        );
    }

    #[test]
    fn bernoulli_polynomial_endpoints() {
        for m in 0..=12 {
            let bp = bernoulli_polynomial(m);
            assert_eq!(bp.eval(&rat(0, 1)), bernoulli_number(m));
            let at_one = bp.eval(&rat(1, 1));
            if m == 1 {
                assert_eq!(at_one, rat(1, 2));
            } else {
                assert_eq!(at_one, bernoulli_number(m));
            }
        }
    }

    #[test]
    fn faulhaber_sum_matches_literal() {
        assert_eq!(faulhaber_sum(0, 5), rat(5, 1));
        assert_eq!(faulhaber_sum(2, 3), rat(14, 1));
        assert_eq!(faulhaber_sum(4, 3), rat(98, 1));
        for p in 0..=12usize {
            for n in 1..=50u64 {
                let literal: Int = (1..=n).map(|m| Int::from(m).pow(p as u32)).sum();
                assert_eq!(faulhaber_sum(p, n), Rational::from(literal), "p={p} n={n}");
            }
        }
    }

    #[test]
    fn faulhaber_polynomial_matches_sum() {
        assert_eq!(
            faulhaber_polynomial(0),
            PolynomialQ::new(vec![rat(0, 1), rat(1, 1)])
        );
        assert_eq!(
            faulhaber_polynomial(1),
            PolynomialQ::new(vec![rat(0, 1), rat(1, 2), rat(1, 2)])
        );
        assert_eq!(
            faulhaber_polynomial(3),
            PolynomialQ::new(vec![rat(0, 1), rat(0, 1), rat(1, 4), rat(1, 2), rat(1, 4)])
        );
        for p in 0..=12usize {
            let sp = faulhaber_polynomial(p);
            assert!(sp.coeff(0).is_zero());
            for n in 1..=50u64 {
                assert_eq!(
                    sp.eval(&Rational::from(Int::from(n))),
                    faulhaber_sum(p, n),
                    "p={p} n={n}"
                );
            }
        }
    }

    #[test]
    fn stirling2_values() {
        assert_eq!(stirling2(3, 2), Int::from(3));
        assert_eq!(stirling2(0, 0), Int::from(1));
        assert_eq!(stirling2(1, 2), Int::from(0));
        assert_eq!(stirling2(5, 0), Int::from(0));
        assert_eq!(stirling2(4, 2), Int::from(7));
    }

    #[test]
    fn stirling2_falling_factorial_identity() {
        // sum_k S(m,k) x^(k) (falling factorial) = x^m, checked pointwise.
        for m in 0..=20usize {
            for x in 1..=(m as i64 + 1) {
                let mut acc = Int::zero();
                for k in 0..=m {
                    let mut falling = Int::one();
                    for i in 0..k as i64 {
                        falling *= Int::from(x - i);
                    }
                    acc += stirling2(m, k) * falling;
                }
                assert_eq!(acc, Int::from(x).pow(m as u32), "m={m} x={x}");
            }
        }
    }

    #[test]
    fn zeta_even_factors() {
        assert_eq!(zeta_even_factor(1).factor, rat(1, 6));
        assert_eq!(zeta_even_factor(2).factor, rat(1, 90));
        assert_eq!(zeta_even_factor(3).factor, rat(1, 945));
        for r in 1..=8 {
            assert!(zeta_even_factor(r).factor.is_positive());
        }
    }

    #[test]
    fn rational_encoding_roundtrip() {
        assert_eq!(rational_str(&rat(5, 1)), "5");
        assert_eq!(rational_str(&rat(-2880, 49)), "-2880/49");
        assert_eq!(parse_rational("-2880/49"), Some(rat(-2880, 49)));
        assert_eq!(parse_rational("7"), Some(rat(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
