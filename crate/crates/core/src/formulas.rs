//! Evaluators for the closed-form expectation results: the Bernoulli /
//! Faulhaber expectation under the uniform-density model, the sinh-ratio
//! exponential generating function, the large-n expansion coefficients, a
//! literal double-sum oracle, and a report reconciling all of them with the
//! true ensemble.

use crate::exact::{
    self, binomial, rational_str, PolynomialQ, PowerSeries, SeriesError,
};
use crate::stats;
use crate::{Int, Rational};
use num::{One, Zero};
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("leading asymptotic term is undefined for odd k = {k}; the expectation vanishes")]
    OddLeading { k: u32 },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Enumeration(#[from] crate::asm::AsmError),
}

/// Uniform-density expectation of E_k via products of Faulhaber power sums:
/// (1/n) sum_r (-1)^r C(k,r) S_{k-r}(n) S_r(n).
pub fn expected_moment_uniform(k: u32, n: u64) -> Rational {
    let mut acc = Rational::zero();
    for r in 0..=k {
        let term = Rational::from(binomial(k as u64, r as u64))
            * exact::faulhaber_sum((k - r) as usize, n)
            * exact::faulhaber_sum(r as usize, n);
        if r % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc / Rational::from(Int::from(n))
}

/// The brute-force oracle: the literal double sum (1/n) sum_{i,j} (i-j)^k.
pub fn expected_moment_direct(k: u32, n: u64) -> Rational {
    let mut acc = Int::zero();
    for i in 1..=n as i64 {
        for j in 1..=n as i64 {
            acc += num::pow::pow(Int::from(i - j), k as usize);
        }
    }
    Rational::new(acc, Int::from(n))
}

/// The polynomial in n equal to `expected_moment_uniform(k, n)` at every
/// positive integer n; zero for odd k, degree k+1 for even k.
pub fn expected_moment_polynomial(k: u32) -> PolynomialQ {
    let mut acc = PolynomialQ::zero();
    for r in 0..=k {
        let prod = &exact::faulhaber_polynomial((k - r) as usize)
            * &exact::faulhaber_polynomial(r as usize);
        let term = prod.scale(&Rational::from(binomial(k as u64, r as u64)));
        acc = if r % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    // Faulhaber polynomials have zero constant term, so the division by n
    // is exact polynomial division.
    acc.div_by_var().expect("constant term must vanish")
}

fn factorial(m: usize) -> Int {
    let mut acc = Int::one();
    for i in 2..=m as u64 {
        acc *= Int::from(i);
    }
    acc
}

/// sinh^2(c t / 2) as a truncated series in t, where the half-argument scale
/// c is either the formal variable n or 1. Coefficient of t^{2m} is
/// c^{2m} / (2 (2m)!).
fn sinh_sq_half(order: usize, scale_is_n: bool) -> PowerSeries {
    let mut coeffs = vec![PolynomialQ::zero(); order + 1];
    for m in 1..=(order / 2) {
        let c = Rational::new(Int::one(), Int::from(2) * factorial(2 * m));
        coeffs[2 * m] = if scale_is_n {
            let mut mono = vec![Rational::zero(); 2 * m + 1];
            mono[2 * m] = c;
            PolynomialQ::new(mono)
        } else {
            PolynomialQ::constant(c)
        };
    }
    PowerSeries::new(order, coeffs)
}

/// Expands (1/n) sinh^2(nt/2) / sinh^2(t/2) in powers of t and returns, for
/// each k <= max_k, the polynomial-in-n coefficient of t^k / k!.
pub fn egf_expansion(max_k: usize) -> Result<Vec<PolynomialQ>, FormulaError> {
    // Two extra orders so the quotient retains max_k coefficients after the
    // common t^2 is factored out.
    let order = max_k + 2;
    let num = sinh_sq_half(order, true);
    let den = sinh_sq_half(order, false);
    let ratio = num.div(&den)?;
    let mut out = Vec::with_capacity(max_k + 1);
    for k in 0..=max_k {
        let poly = ratio
            .coeff(k)
            .scale(&Rational::from(factorial(k)))
            .div_by_var()
            .expect("ratio coefficients are divisible by n");
        out.push(poly);
    }
    Ok(out)
}

/// Leading expansion coefficient 2/((k+1)(k+2)), defined for even k only.
pub fn asymptotic_leading(k: u32) -> Result<Rational, FormulaError> {
    if k % 2 == 1 {
        return Err(FormulaError::OddLeading { k });
    }
    Ok(Rational::new(
        Int::from(2),
        Int::from((k as u64 + 1) * (k as u64 + 2)),
    ))
}

/// The subleading coefficient exactly as printed in the expansion theorem:
/// P_{k,r} = 4 (-1)^k k! S(2r-1, k) zeta(2r) / (2 pi)^{2r}, with zeta(2r)
/// rationalized so all powers of pi cancel.
pub fn asymptotic_coefficient_printed(k: u32, r: usize) -> Rational {
    assert!(r >= 1);
    let stirling = exact::stirling2(2 * r - 1, k as usize);
    let zeta = exact::zeta_even_factor(r).factor;
    let sign = if k.is_multiple_of(2) { Int::one() } else { -Int::one() };
    Rational::from(sign * Int::from(4) * factorial(k as usize) * stirling) * zeta
        / Rational::from(Int::one() << (2 * r))
}

/// Ground truth for the expansion: the exact coefficient of n^{k+1-2r} in
/// the uniform-density expectation polynomial.
pub fn asymptotic_coefficient_exact(k: u32, r: usize) -> Rational {
    assert!(k.is_multiple_of(2) && r >= 1);
    let poly = expected_moment_polynomial(k);
    let exponent = k as i64 + 1 - 2 * r as i64;
    if exponent < 0 {
        return Rational::zero();
    }
    poly.coeff(exponent as usize)
}

/// One term of the (terminating) large-n expansion of E[E_k].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticTerm {
    /// Power of n, equal to k+1-2r.
    pub exponent: i64,
    pub coefficient: Rational,
    /// Which zeta(2r) the expansion attributes this term to; None for the
    /// leading term.
    pub zeta_order: Option<usize>,
}

/// The exact, terminating expansion of E[E_k] in decreasing powers of n,
/// read off the uniform-density expectation polynomial. Even k only.
pub fn asymptotic_expansion(k: u32) -> Result<Vec<AsymptoticTerm>, FormulaError> {
    if k % 2 == 1 {
        return Err(FormulaError::OddLeading { k });
    }
    let poly = expected_moment_polynomial(k);
    let mut terms = Vec::new();
    let mut r = 0usize;
    let mut exponent = k as i64 + 1;
    while exponent >= 0 {
        let c = poly.coeff(exponent as usize);
        if !c.is_zero() {
            terms.push(AsymptoticTerm {
                exponent,
                coefficient: c,
                zeta_order: if r == 0 { None } else { Some(r) },
            });
        }
        r += 1;
        exponent -= 2;
    }
    Ok(terms)
}

/// The closed-form claims printed for E[E_2] and E[E_4]: (n^2-1)/3 and
/// (3n^4 - 10n^2 + 7)/15. These disagree with the direct sum for n >= 3;
/// the report exhibits the conflict instead of repairing it.
pub fn thm2_claim(k: u32, n: u64) -> Option<Rational> {
    let n = Int::from(n);
    match k {
        2 => Some(Rational::new(&n * &n - 1, Int::from(3))),
        4 => {
            let n2 = &n * &n;
            Some(Rational::new(
                Int::from(3) * &n2 * &n2 - Int::from(10) * &n2 + 7,
                Int::from(15),
            ))
        }
        _ => None,
    }
}

/// One (k, n) row of the reconciliation table.
#[derive(Debug, Clone)]
pub struct MomentRow {
    pub k: u32,
    pub n: u64,
    pub uniform: Rational,
    pub direct: Rational,
    pub egf: Rational,
    pub claim: Option<Rational>,
    pub ensemble: Option<Rational>,
    pub claim_mismatch: bool,
    pub ensemble_differs: bool,
}

/// One (k, r) row comparing the printed expansion coefficient against the
/// exact polynomial coefficient.
#[derive(Debug, Clone)]
pub struct CoefficientRow {
    pub k: u32,
    pub r: usize,
    pub printed: Rational,
    pub exact: Rational,
    pub agree: bool,
}

#[derive(Debug, Clone)]
pub struct DiscrepancyReport {
    pub k_max: u32,
    pub n_max: u64,
    pub moment_rows: Vec<MomentRow>,
    pub coefficient_rows: Vec<CoefficientRow>,
    /// Failures of checks that must hold (uniform = direct = EGF, odd-k
    /// vanishing). Nonempty means an implementation bug, not a refuted claim.
    pub internal_failures: Vec<String>,
}

impl DiscrepancyReport {
    pub fn is_internally_consistent(&self) -> bool {
        self.internal_failures.is_empty()
    }
}

/// Builds the full reconciliation table. Ensemble columns are filled only
/// for n within the enumeration cap.
pub fn discrepancy_report(
    k_max: u32,
    n_max: u64,
    cap: usize,
) -> Result<DiscrepancyReport, FormulaError> {
    let egf = egf_expansion(k_max as usize)?;
    let mut internal_failures = Vec::new();
    let mut moment_rows = Vec::new();
    for k in 0..=k_max {
        for n in 1..=n_max {
            let uniform = expected_moment_uniform(k, n);
            let direct = expected_moment_direct(k, n);
            let egf_val = egf[k as usize].eval(&Rational::from(Int::from(n)));
            if uniform != direct {
                internal_failures.push(format!("uniform != direct at k={k}, n={n}"));
            }
            if uniform != egf_val {
                internal_failures.push(format!("uniform != egf at k={k}, n={n}"));
            }
            if k % 2 == 1 && !uniform.is_zero() {
                internal_failures.push(format!("odd k={k} expectation nonzero at n={n}"));
            }
            let ensemble = if (n as usize) <= cap {
                let d = stats::distribution(n as usize, k, cap)?;
                Some(stats::ensemble_moment(&d, 1))
            } else {
                None
            };
            let claim = thm2_claim(k, n);
            let claim_mismatch = claim.as_ref().is_some_and(|c| c != &direct);
            let ensemble_differs = ensemble.as_ref().is_some_and(|e| e != &direct);
            moment_rows.push(MomentRow {
                k,
                n,
                uniform,
                direct,
                egf: egf_val,
                claim,
                ensemble,
                claim_mismatch,
                ensemble_differs,
            });
        }
    }
    let mut coefficient_rows = Vec::new();
    for k in (0..=k_max).step_by(2) {
        let r_max = (k as usize + 1).div_ceil(2);
        for r in 1..=r_max {
            let printed = asymptotic_coefficient_printed(k, r);
            let exact = asymptotic_coefficient_exact(k, r);
            let agree = printed == exact;
            coefficient_rows.push(CoefficientRow {
                k,
                r,
                printed,
                exact,
                agree,
            });
        }
    }
    Ok(DiscrepancyReport {
        k_max,
        n_max,
        moment_rows,
        coefficient_rows,
        internal_failures,
    })
}

fn opt_str(r: &Option<Rational>) -> String {
    r.as_ref().map_or_else(|| "-".to_string(), rational_str)
}

fn flags_str(row: &MomentRow) -> String {
    let mut flags = Vec::new();
    if row.claim_mismatch {
        flags.push("claim-mismatch");
    }
    if row.ensemble_differs {
        flags.push("ensemble-differs");
    }
    if flags.is_empty() {
        "ok".to_string()
    } else {
        flags.join(";")
    }
}

impl DiscrepancyReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "Moment reconciliation (k <= {}, n <= {})\n",
            self.k_max, self.n_max
        ));
        let header = [
            "k", "n", "uniform", "direct", "egf", "claim", "ensemble", "flags",
        ];
        let mut rows: Vec<[String; 8]> = vec![header.map(str::to_string)];
        for r in &self.moment_rows {
            rows.push([
                r.k.to_string(),
                r.n.to_string(),
                rational_str(&r.uniform),
                rational_str(&r.direct),
                rational_str(&r.egf),
                opt_str(&r.claim),
                opt_str(&r.ensemble),
                flags_str(r),
            ]);
        }
        out.push_str(&align(&rows));
        out.push_str("\nExpansion coefficients P_{k,r} (printed vs exact)\n");
        let header = ["k", "r", "printed", "exact", "agree"];
        let mut rows: Vec<[String; 5]> = vec![header.map(str::to_string)];
        for c in &self.coefficient_rows {
            rows.push([
                c.k.to_string(),
                c.r.to_string(),
                rational_str(&c.printed),
                rational_str(&c.exact),
                c.agree.to_string(),
            ]);
        }
        out.push_str(&align(&rows));
        if self.internal_failures.is_empty() {
            out.push_str("\ninternal consistency: ok\n");
        } else {
            out.push_str("\ninternal consistency FAILURES:\n");
            for f in &self.internal_failures {
                out.push_str(&format!("  {f}\n"));
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,n,thm1,direct,egf,thm2_claim,ensemble,flags\n");
        for r in &self.moment_rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.k,
                r.n,
                rational_str(&r.uniform),
                rational_str(&r.direct),
                rational_str(&r.egf),
                opt_str(&r.claim),
                opt_str(&r.ensemble),
                flags_str(r),
            ));
        }
        out.push_str("k,r,printed,exact,agree\n");
        for c in &self.coefficient_rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                c.k,
                c.r,
                rational_str(&c.printed),
                rational_str(&c.exact),
                c.agree
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "k_max": self.k_max,
            "n_max": self.n_max,
            "moments": self.moment_rows.iter().map(|r| json!({
                "k": r.k,
                "n": r.n,
                "thm1": rational_str(&r.uniform),
                "direct": rational_str(&r.direct),
                "egf": rational_str(&r.egf),
                "thm2_claim": r.claim.as_ref().map(rational_str),
                "ensemble": r.ensemble.as_ref().map(rational_str),
                "flags": flags_str(r),
            })).collect::<Vec<_>>(),
            "coefficients": self.coefficient_rows.iter().map(|c| json!({
                "k": c.k,
                "r": c.r,
                "printed": rational_str(&c.printed),
                "exact": rational_str(&c.exact),
                "agree": c.agree,
            })).collect::<Vec<_>>(),
            "internal_failures": self.internal_failures,
        })
    }
}

fn align<const W: usize>(rows: &[[String; W]]) -> String {
    let mut widths = [0usize; W];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, cell)| format!("{:>width$}", cell, width = widths[i]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asm::DEFAULT_ENUM_CAP as CAP;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(Int::from(n), Int::from(d))
    }

    #[test]
    fn uniform_moment_values() {
        assert_eq!(expected_moment_uniform(0, 5), rat(5, 1));
        assert_eq!(expected_moment_uniform(1, 7), rat(0, 1));
        assert_eq!(expected_moment_uniform(2, 3), rat(4, 1));
        assert_eq!(expected_moment_uniform(4, 3), rat(12, 1));
    }

    #[test]
    fn direct_moment_values() {
        assert_eq!(expected_moment_direct(2, 2), rat(1, 1));
        assert_eq!(expected_moment_direct(2, 3), rat(4, 1));
        assert_eq!(expected_moment_direct(4, 2), rat(1, 1));
    }

    #[test]
    fn uniform_equals_direct() {
        for k in 0..=10u32 {
            for n in 1..=50u64 {
                assert_eq!(
                    expected_moment_uniform(k, n),
                    expected_moment_direct(k, n),
                    "k={k} n={n}"
                );
            }
        }
    }

    #[test]
    fn moment_polynomial_values() {
        assert!(expected_moment_polynomial(1).is_zero());
        assert_eq!(
            expected_moment_polynomial(2),
            PolynomialQ::new(vec![rat(0, 1), rat(-1, 6), rat(0, 1), rat(1, 6)])
        );
        // (2n^5 - 5n^3 + 3n)/30
        assert_eq!(
            expected_moment_polynomial(4),
            PolynomialQ::new(vec![
                rat(0, 1),
                rat(1, 10),
                rat(0, 1),
                rat(-1, 6),
                rat(0, 1),
                rat(1, 15)
            ])
        );
        for k in 0..=10u32 {
            let p = expected_moment_polynomial(k);
            for n in 1..=20u64 {
                assert_eq!(
                    p.eval(&Rational::from(Int::from(n))),
                    expected_moment_direct(k, n),
                    "k={k} n={n}"
                );
            }
        }
    }

    #[test]
    fn moment_polynomial_parity_and_leading() {
        for k in (0..=12u32).step_by(2) {
            let p = expected_moment_polynomial(k);
            assert_eq!(p.degree(), k as i64 + 1);
            assert_eq!(p.leading_coeff(), asymptotic_leading(k).unwrap());
            for i in (0..=p.degree() as usize).step_by(2) {
                assert!(p.coeff(i).is_zero(), "k={k}: even power n^{i} present");
            }
        }
        for k in (1..=11u32).step_by(2) {
            assert!(expected_moment_polynomial(k).is_zero());
        }
    }

    #[test]
    fn egf_matches_moment_polynomials() {
        let egf = egf_expansion(12).unwrap();
        assert_eq!(egf[0], PolynomialQ::new(vec![rat(0, 1), rat(1, 1)]));
        assert!(egf[1].is_zero());
        assert_eq!(
            egf[2],
            PolynomialQ::new(vec![rat(0, 1), rat(-1, 6), rat(0, 1), rat(1, 6)])
        );
        for (k, poly) in egf.iter().enumerate() {
            assert_eq!(poly, &expected_moment_polynomial(k as u32), "k={k}");
        }
    }

    #[test]
    fn sinh_ratio_low_order() {
        // sinh^2(nt/2)/sinh^2(t/2) through t^2 is n^2 + n^2(n^2-1)/12 t^2
        let num = sinh_sq_half(4, true);
        let den = sinh_sq_half(4, false);
        let q = num.div(&den).unwrap();
        assert_eq!(
            q.coeff(0),
            &PolynomialQ::new(vec![rat(0, 1), rat(0, 1), rat(1, 1)])
        );
        assert!(q.coeff(1).is_zero());
        // n^2(n^2-1)/12 = n^4/12 - n^2/12
        assert_eq!(
            q.coeff(2),
            &PolynomialQ::new(vec![
                rat(0, 1),
                rat(0, 1),
                rat(-1, 12),
                rat(0, 1),
                rat(1, 12)
            ])
        );
    }

    #[test]
    fn leading_coefficient() {
        assert_eq!(asymptotic_leading(0).unwrap(), rat(1, 1));
        assert_eq!(asymptotic_leading(2).unwrap(), rat(1, 6));
        assert_eq!(asymptotic_leading(4).unwrap(), rat(1, 15));
        assert_eq!(
            asymptotic_leading(3),
            Err(FormulaError::OddLeading { k: 3 })
        );
    }

    #[test]
    fn printed_expansion_coefficients() {
        assert_eq!(asymptotic_coefficient_printed(2, 1), rat(0, 1));
        assert_eq!(asymptotic_coefficient_printed(1, 1), rat(-1, 6));
        assert_eq!(asymptotic_coefficient_printed(0, 1), rat(0, 1));
    }

    #[test]
    fn exact_expansion_coefficients() {
        assert_eq!(asymptotic_coefficient_exact(2, 1), rat(-1, 6));
        assert_eq!(asymptotic_coefficient_exact(4, 1), rat(-1, 6));
        assert_eq!(asymptotic_coefficient_exact(4, 2), rat(1, 10));
    }

    #[test]
    fn expansion_terms_structure() {
        let terms = asymptotic_expansion(4).unwrap();
        assert_eq!(terms.len(), 3);
        assert_eq!(terms[0].exponent, 5);
        assert_eq!(terms[0].coefficient, rat(1, 15));
        assert_eq!(terms[0].zeta_order, None);
        assert_eq!(terms[1].exponent, 3);
        assert_eq!(terms[1].zeta_order, Some(1));
        assert_eq!(terms[2].exponent, 1);
        assert_eq!(terms[2].coefficient, rat(1, 10));
        // exponents strictly decreasing, all sharing the parity of k+1
        for w in terms.windows(2) {
            assert!(w[0].exponent > w[1].exponent);
        }
        assert!(terms.iter().all(|t| t.exponent % 2 == 1));
    }

    #[test]
    fn report_flags_the_printed_claims() {
        let report = discrepancy_report(4, 3, CAP).unwrap();
        assert!(report.is_internally_consistent());

        let row = |k, n| {
            report
                .moment_rows
                .iter()
                .find(|r| r.k == k && r.n == n)
                .unwrap()
        };
        let r = row(2, 2);
        assert_eq!(r.uniform, rat(1, 1));
        assert_eq!(r.claim, Some(rat(1, 1)));
        assert!(!r.claim_mismatch);

        let r = row(2, 3);
        assert_eq!(r.uniform, rat(4, 1));
        assert_eq!(r.claim, Some(rat(8, 3)));
        assert!(r.claim_mismatch);
        assert_eq!(r.ensemble, Some(rat(4, 1)));
        assert!(!r.ensemble_differs);

        let r = row(4, 3);
        assert_eq!(r.uniform, rat(12, 1));
        assert_eq!(r.claim, Some(rat(32, 3)));
        assert_eq!(r.ensemble, Some(rat(76, 7)));
        assert!(r.claim_mismatch);
        assert!(r.ensemble_differs);

        let c = report
            .coefficient_rows
            .iter()
            .find(|c| c.k == 2 && c.r == 1)
            .unwrap();
        assert_eq!(c.printed, rat(0, 1));
        assert_eq!(c.exact, rat(-1, 6));
        assert!(!c.agree);
    }

    #[test]
    fn report_renders_in_all_formats() {
        let report = discrepancy_report(2, 2, 8).unwrap();
        let text = report.to_text();
        assert!(text.contains("internal consistency: ok"));
        let csv = report.to_csv();
        assert!(csv.starts_with("k,n,thm1,direct,egf,thm2_claim,ensemble,flags\n"));
        let v = report.to_json();
        assert_eq!(v["internal_failures"].as_array().unwrap().len(), 0);
        assert!(v["moments"].as_array().unwrap().len() == 6);
    }
}
