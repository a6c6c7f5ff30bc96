//! Dense univariate polynomials with exact coefficients.
//!
//! Only the operations the cyclotomic machinery needs: multiplication,
//! division by a monic divisor, and exact division. Coefficients are stored
//! constant-term first with no trailing zeros.

use crate::coeff::Coeff;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial<T = crate::Int> {
    coeffs: Vec<T>,
}

impl<T: Coeff> IntPolynomial<T> {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial { coeffs: vec![T::one()] }
    }

    /// Build from a constant-first coefficient list; trailing zeros are trimmed.
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| T::of(c)).collect())
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        assert!(n >= 1);
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[0] = -T::one();
        coeffs[n] = T::one();
        IntPolynomial { coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the stored length.
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a.clone() * b.clone();
                out[i + j] += &prod;
            }
        }
        IntPolynomial::from_coeffs(out)
    }

    /// Quotient and remainder on division by a monic divisor.
    ///
    /// Long division stays in the coefficient ring because the divisor is
    /// monic; panics on a non-monic divisor (internal misuse, not input).
    pub fn div_rem_monic(&self, divisor: &Self) -> (Self, Self) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let d = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= d {
            return (Self::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![T::zero(); self.coeffs.len() - d];
        for i in (d..rem.len()).rev() {
            let lead = rem[i].clone();
            if lead.is_zero() {
                continue;
            }
            quot[i - d] = lead.clone();
            for (j, c) in divisor.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let prod = lead.clone() * c.clone();
                rem[i - d + j] -= &prod;
            }
        }
        (IntPolynomial::from_coeffs(quot), IntPolynomial::from_coeffs(rem))
    }

    /// Exact division by a monic divisor; panics if the remainder is nonzero.
    pub fn div_exact_monic(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem_monic(divisor);
        assert!(r.is_zero(), "division was not exact");
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Int;

    type P = IntPolynomial<Int>;

    #[test]
    fn construction_trims_trailing_zeros() {
        let p = P::from_i64_coeffs(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(P::from_i64_coeffs(&[0, 0]).is_zero());
        assert_eq!(P::zero().degree(), None);
    }

    #[test]
    fn multiplication_matches_hand_expansion() {
        // (x + 1)(x - 1) = x^2 - 1
        let a = P::from_i64_coeffs(&[1, 1]);
        let b = P::from_i64_coeffs(&[-1, 1]);
        assert_eq!(a.mul(&b), P::from_i64_coeffs(&[-1, 0, 1]));
        // (x^2 + 2x + 3)(2x + 5) = 2x^3 + 9x^2 + 16x + 15
        let c = P::from_i64_coeffs(&[3, 2, 1]);
        let d = P::from_i64_coeffs(&[5, 2]);
        assert_eq!(c.mul(&d), P::from_i64_coeffs(&[15, 16, 9, 2]));
    }

    #[test]
    fn monic_division_round_trips() {
        let divisor = P::from_i64_coeffs(&[2, -3, 1]); // x^2 - 3x + 2
        let quotient = P::from_i64_coeffs(&[-1, 4, 7]);
        let remainder = P::from_i64_coeffs(&[5, 1]);
        let numerator = divisor.mul(&quotient);
        let sum = {
            // numerator + remainder, done by coefficient since we have no Add
            let mut coeffs = numerator.coeffs().to_vec();
            for (i, c) in remainder.coeffs().iter().enumerate() {
                coeffs[i] += c;
            }
            P::from_coeffs(coeffs)
        };
        let (q, r) = sum.div_rem_monic(&divisor);
        assert_eq!(q, quotient);
        assert_eq!(r, remainder);
    }

    #[test]
    fn exact_division_of_x_n_minus_one() {
        // (x^6 - 1) / (x^2 + x + 1) = x^4 - x^3 + x - 1  ... times (x^2-x+1)(x+1)(x-1)
        let n6 = P::x_pow_minus_one(6);
        let phi3 = P::from_i64_coeffs(&[1, 1, 1]);
        let q = n6.div_exact_monic(&phi3);
        assert_eq!(q.mul(&phi3), n6);
    }

    #[test]
    #[should_panic(expected = "not exact")]
    fn inexact_division_panics() {
        let p = P::from_i64_coeffs(&[1, 1]);
        let d = P::from_i64_coeffs(&[0, 1]); // x
        p.div_exact_monic(&d);
    }
}
