//! Exact Laurent polynomials over the rationals with support restricted to
//! multiples of a step s — the coefficient rings K[x^s, x^-s] (step 0 is the
//! ground field). Includes unit detection and an independent inversion
//! routine that solves a·y = 1 by exact linear algebra.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, Zero as _};

use crate::error::{Error, Result};

/// Laurent polynomial with exact rational coefficients; every stored
/// exponent is a nonzero-coefficient multiple of `step` (step 0 admits only
/// exponent 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    step: usize,
    terms: BTreeMap<i64, BigRational>,
}

impl LaurentPoly {
    pub fn zero(step: usize) -> LaurentPoly {
        LaurentPoly { step, terms: BTreeMap::new() }
    }

    pub fn one(step: usize) -> LaurentPoly {
        LaurentPoly::monomial(step, 0, BigRational::from_integer(1.into())).unwrap()
    }

    pub fn monomial(step: usize, exp: i64, coeff: BigRational) -> Result<LaurentPoly> {
        let mut p = LaurentPoly::zero(step);
        p.add_term(exp, coeff)?;
        Ok(p)
    }

    pub fn from_terms<I>(step: usize, terms: I) -> Result<LaurentPoly>
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        let mut p = LaurentPoly::zero(step);
        for (e, c) in terms {
            p.add_term(e, c)?;
        }
        Ok(p)
    }

    fn check_exp(&self, exp: i64) -> Result<()> {
        let ok = if self.step == 0 { exp == 0 } else { exp % self.step as i64 == 0 };
        if ok {
            Ok(())
        } else {
            Err(Error::DegreeStep(exp, self.step))
        }
    }

    /// Add `coeff`·x^`exp` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, exp: i64, coeff: BigRational) -> Result<()> {
        self.check_exp(exp)?;
        if coeff.is_zero() {
            return Ok(());
        }
        let entry = self.terms.entry(exp).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
        Ok(())
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    pub fn coeff(&self, exp: i64) -> BigRational {
        self.terms.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match *e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{e}")?,
            }
        }
        Ok(())
    }
}

/// Exact sum; steps must agree.
pub fn laurent_add(a: &LaurentPoly, b: &LaurentPoly) -> Result<LaurentPoly> {
    if a.step != b.step {
        return Err(Error::StepMismatch(a.step, b.step));
    }
    let mut out = a.clone();
    for (e, c) in &b.terms {
        out.add_term(*e, c.clone())?;
    }
    Ok(out)
}

/// Exact product by convolution; steps must agree.
pub fn laurent_mul(a: &LaurentPoly, b: &LaurentPoly) -> Result<LaurentPoly> {
    if a.step != b.step {
        return Err(Error::StepMismatch(a.step, b.step));
    }
    let mut out = LaurentPoly::zero(a.step);
    for (ea, ca) in &a.terms {
        for (eb, cb) in &b.terms {
            out.add_term(ea + eb, ca * cb)?;
        }
    }
    Ok(out)
}

/// True iff the polynomial is invertible in K[x^s, x^-s]: exactly one term
/// (for step 0 that means a nonzero constant).
pub fn is_unit(a: &LaurentPoly) -> bool {
    a.terms.len() == 1
}

/// Independent inversion attempt: look for y with support on step multiples
/// in [−window, window] solving a·y = 1, by exact Gaussian elimination over
/// the rationals, and double-check the product. Makes no use of any
/// structural characterization of units, so it can serve as an oracle for
/// `is_unit`; any inverse of a polynomial with exponents in [−window,
/// window] necessarily has its support there too.
pub fn explicit_inverse(a: &LaurentPoly, window: i64) -> Option<LaurentPoly> {
    if a.is_zero() {
        return None;
    }
    let stride = if a.step == 0 { 1 } else { a.step as i64 };
    let unknowns: Vec<i64> = if a.step == 0 {
        vec![0]
    } else {
        let lo = -(window / stride) * stride;
        (0..).map(|k| lo + k * stride).take_while(|&e| e <= window).collect()
    };
    let a_min = *a.terms.keys().next().unwrap();
    let a_max = *a.terms.keys().next_back().unwrap();
    // One linear equation per reachable product exponent k:
    //   sum_d a_d · y_{k−d} = [k == 0]
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut k = a_min + *unknowns.first().unwrap();
    let k_max = a_max + *unknowns.last().unwrap();
    while k <= k_max {
        let mut row = vec![BigRational::zero(); unknowns.len() + 1];
        for (col, &e) in unknowns.iter().enumerate() {
            let c = a.coeff(k - e);
            if !c.is_zero() {
                row[col] = c;
            }
        }
        if k == 0 {
            row[unknowns.len()] = BigRational::from_integer(1.into());
        }
        rows.push(row);
        k += stride;
    }
    let n = unknowns.len();
    // Gaussian elimination on the augmented system.
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut pivot_row = 0;
    for col in 0..n {
        let Some(r) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, r);
        let inv = rows[pivot_row][col].recip();
        for x in rows[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for r2 in 0..rows.len() {
            if r2 != pivot_row && !rows[r2][col].is_zero() {
                let factor = rows[r2][col].clone();
                for c2 in 0..=n {
                    let delta = &rows[pivot_row][c2] * &factor;
                    rows[r2][c2] -= delta;
                }
            }
        }
        pivot_of_col[col] = Some(pivot_row);
        pivot_row += 1;
    }
    // Inconsistent row ⇒ no solution.
    for row in &rows {
        if row[..n].iter().all(|x| x.is_zero()) && !row[n].is_zero() {
            return None;
        }
    }
    // Particular solution: free variables at zero.
    let mut y = LaurentPoly::zero(a.step);
    for (col, &e) in unknowns.iter().enumerate() {
        if let Some(r) = pivot_of_col[col] {
            y.add_term(e, rows[r][n].clone()).ok()?;
        }
    }
    let product = laurent_mul(a, &y).ok()?;
    if product == LaurentPoly::one(a.step) {
        Some(y)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn mono(step: usize, exp: i64, c: i64) -> LaurentPoly {
        LaurentPoly::monomial(step, exp, rat(c)).unwrap()
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        let a = mono(2, 2, 1);
        let b = mono(2, -2, 1);
        assert_eq!(laurent_mul(&a, &b).unwrap(), LaurentPoly::one(2));
    }

    #[test]
    fn convolution_example() {
        // (1 + x²)·x² = x² + x⁴
        let a = LaurentPoly::from_terms(2, [(0, rat(1)), (2, rat(1))]).unwrap();
        let b = mono(2, 2, 1);
        let expect = LaurentPoly::from_terms(2, [(2, rat(1)), (4, rat(1))]).unwrap();
        assert_eq!(laurent_mul(&a, &b).unwrap(), expect);
    }

    #[test]
    fn zero_absorbs() {
        let a = mono(2, 4, 3);
        assert!(laurent_mul(&a, &LaurentPoly::zero(2)).unwrap().is_zero());
    }

    #[test]
    fn step_mismatch_rejected() {
        let a = mono(2, 2, 1);
        let b = mono(3, 3, 1);
        assert!(matches!(laurent_mul(&a, &b), Err(Error::StepMismatch(2, 3))));
    }

    #[test]
    fn off_step_exponent_rejected() {
        assert!(matches!(
            LaurentPoly::monomial(2, 3, rat(1)),
            Err(Error::DegreeStep(3, 2))
        ));
        assert!(matches!(
            LaurentPoly::monomial(0, 1, rat(1)),
            Err(Error::DegreeStep(1, 0))
        ));
    }

    #[test]
    fn cancelling_terms_drop_out() {
        let mut p = mono(2, 2, 1);
        p.add_term(2, rat(-1)).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn unit_detection() {
        assert!(is_unit(&mono(2, 2, 3)));
        assert!(is_unit(&mono(0, 0, 5)));
        assert!(!is_unit(&LaurentPoly::zero(2)));
        let two_terms = LaurentPoly::from_terms(2, [(0, rat(1)), (2, rat(1))]).unwrap();
        assert!(!is_unit(&two_terms));
    }

    #[test]
    fn explicit_inverse_of_monomial() {
        let a = mono(2, 2, 3);
        let y = explicit_inverse(&a, 18).unwrap();
        assert_eq!(y, LaurentPoly::monomial(2, -2, rat(1) / rat(3)).unwrap());
    }

    #[test]
    fn explicit_inverse_fails_on_binomial_and_zero() {
        let a = LaurentPoly::from_terms(2, [(0, rat(1)), (2, rat(1))]).unwrap();
        assert!(explicit_inverse(&a, 18).is_none());
        assert!(explicit_inverse(&LaurentPoly::zero(2), 18).is_none());
    }

    #[test]
    fn explicit_inverse_step_zero() {
        let a = mono(0, 0, 7);
        let y = explicit_inverse(&a, 18).unwrap();
        assert_eq!(laurent_mul(&a, &y).unwrap(), LaurentPoly::one(0));
    }
}
