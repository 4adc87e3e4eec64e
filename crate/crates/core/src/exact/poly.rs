use crate::{Int, Rational};
use num::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::binomial;

/// Polynomial in one formal variable with exact rational coefficients.
/// Coefficient at index i is the degree-i coefficient; trailing zeros are
/// stripped so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolynomialQ {
    coeffs: Vec<Rational>,
}

impl PolynomialQ {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolynomialQ { coeffs }
    }

    pub fn zero() -> Self {
        PolynomialQ { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial x.
    pub fn var() -> Self {
        PolynomialQ {
            coeffs: vec![Rational::zero(), Rational::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; -1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_coeff(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    /// True when the polynomial is a constant (degree <= 0).
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Exact division by the variable x. Fails when the constant term is nonzero.
    pub fn div_by_var(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if !self.coeffs[0].is_zero() {
            return None;
        }
        Some(Self::new(self.coeffs[1..].to_vec()))
    }

    /// Substitutes x -> x + 1.
    pub fn compose_shift_one(&self) -> Self {
        let mut out = vec![Rational::zero(); self.coeffs.len()];
        for (p, c) in self.coeffs.iter().enumerate() {
            // (x+1)^p = sum_j C(p,j) x^j
            for j in 0..=p {
                out[j] += c * Rational::from(binomial(p as u64, j as u64));
            }
        }
        Self::new(out)
    }

    /// Renders with the given variable name, highest degree first.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let term = match i {
                0 => super::rational_str(&mag),
                _ => {
                    let pow = if i == 1 {
                        var.to_string()
                    } else {
                        format!("{var}^{i}")
                    };
                    if mag.is_one() {
                        pow
                    } else if mag.denom().is_one() {
                        format!("{}*{}", mag.numer(), pow)
                    } else {
                        format!("{}*{}/{}", mag.numer(), pow, mag.denom())
                    }
                }
            };
            out.push_str(&term);
        }
        out
    }
}

impl fmt::Display for PolynomialQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("n"))
    }
}

impl From<Rational> for PolynomialQ {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl From<Int> for PolynomialQ {
    fn from(c: Int) -> Self {
        Self::constant(Rational::from(c))
    }
}

impl Add for &PolynomialQ {
    type Output = PolynomialQ;
    fn add(self, rhs: &PolynomialQ) -> PolynomialQ {
        let mut coeffs = vec![Rational::zero(); self.coeffs.len().max(rhs.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        PolynomialQ::new(coeffs)
    }
}

impl Sub for &PolynomialQ {
    type Output = PolynomialQ;
    fn sub(self, rhs: &PolynomialQ) -> PolynomialQ {
        self + &(-rhs)
    }
}

impl Neg for &PolynomialQ {
    type Output = PolynomialQ;
    fn neg(self) -> PolynomialQ {
        PolynomialQ {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &PolynomialQ {
    type Output = PolynomialQ;
    fn mul(self, rhs: &PolynomialQ) -> PolynomialQ {
        if self.is_zero() || rhs.is_zero() {
            return PolynomialQ::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        PolynomialQ::new(coeffs)
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for PolynomialQ {
            type Output = PolynomialQ;
            fn $method(self, rhs: PolynomialQ) -> PolynomialQ {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
