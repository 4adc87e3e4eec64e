//! Exact ensemble statistics over the uniform measure on all ASMs of size n:
//! the law of E_k, its moments and cumulants, and the exact mean density.

use crate::asm::{self, AsmError};
use crate::{Int, Rational};
use num::{One, Zero};
use std::collections::BTreeMap;

/// Exact frequency table of E_k values over every ASM of a given size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservableDistribution {
    pub n: usize,
    pub k: u32,
    pub frequencies: BTreeMap<Int, Int>,
    pub total: Int,
}

/// Cumulants of a law, exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CumulantSet {
    pub kappa1: Rational,
    pub kappa2: Rational,
    pub kappa3: Rational,
    pub kappa4: Rational,
}

/// The exact mean entry matrix rho_n(i,j) = E[A_{i,j}].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityMatrix {
    pub n: usize,
    rho: Vec<Rational>, // row-major
}

impl DensityMatrix {
    /// Entry at 1-based (i, j).
    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.rho[(i - 1) * self.n + (j - 1)]
    }

    pub fn row_sum(&self, i: usize) -> Rational {
        (1..=self.n).map(|j| self.entry(i, j)).sum()
    }

    pub fn col_sum(&self, j: usize) -> Rational {
        (1..=self.n).map(|i| self.entry(i, j)).sum()
    }
}

/// Builds the exact law of E_k by streaming over the full enumeration.
pub fn distribution(n: usize, k: u32, cap: usize) -> Result<ObservableDistribution, AsmError> {
    let mut frequencies: BTreeMap<Int, Int> = BTreeMap::new();
    let mut total = Int::zero();
    asm::for_each_asm(n, cap, |a| {
        *frequencies.entry(a.observable(k)).or_insert_with(Int::zero) += 1;
        total += 1;
    })?;
    debug_assert_eq!(total, asm::count_asm(n));
    Ok(ObservableDistribution {
        n,
        k,
        frequencies,
        total,
    })
}

/// Raw moment of the law: sum_v v^order freq(v) / total.
pub fn ensemble_moment(d: &ObservableDistribution, order: u32) -> Rational {
    moment_about(d, &Rational::zero(), order)
}

fn moment_about(d: &ObservableDistribution, center: &Rational, order: u32) -> Rational {
    let mut acc = Rational::zero();
    for (v, freq) in &d.frequencies {
        let dev = Rational::from(v.clone()) - center;
        let mut p = Rational::one();
        for _ in 0..order {
            p *= &dev;
        }
        acc += p * Rational::from(freq.clone());
    }
    acc / Rational::from(d.total.clone())
}

/// Cumulants via the moment-cumulant relations: kappa2 and kappa3 are the
/// second and third central moments, kappa4 = mu4c - 3 mu2c^2.
pub fn cumulants(d: &ObservableDistribution) -> CumulantSet {
    let mean = ensemble_moment(d, 1);
    let mu2 = moment_about(d, &mean, 2);
    let mu3 = moment_about(d, &mean, 3);
    let mu4 = moment_about(d, &mean, 4);
    CumulantSet {
        kappa1: mean,
        kappa3: mu3,
        kappa4: mu4 - Rational::from(Int::from(3)) * &mu2 * &mu2,
        kappa2: mu2,
    }
}

/// Exact mean density rho_n(i,j), accumulated over the full enumeration.
pub fn mean_density(n: usize, cap: usize) -> Result<DensityMatrix, AsmError> {
    let mut sums = vec![Int::zero(); n * n];
    asm::for_each_asm(n, cap, |a| {
        for i in 1..=n {
            for j in 1..=n {
                let e = a.entry(i, j);
                if e != 0 {
                    sums[(i - 1) * n + (j - 1)] += e as i64;
                }
            }
        }
    })?;
    let total = asm::count_asm(n);
    let rho = sums
        .into_iter()
        .map(|s| Rational::new(s, total.clone()))
        .collect();
    Ok(DensityMatrix { n, rho })
}

/// max_{i,j} |rho_n(i,j) - 1/n|, the deviation from the uniform-density model.
pub fn density_deviation(n: usize, cap: usize) -> Result<Rational, AsmError> {
    let d = mean_density(n, cap)?;
    let uniform = Rational::new(Int::one(), Int::from(n as u64));
    let mut max = Rational::zero();
    for i in 1..=n {
        for j in 1..=n {
            let dev = num::Signed::abs(&(d.entry(i, j) - &uniform));
            if dev > max {
                max = dev;
            }
        }
    }
    Ok(max)
}
