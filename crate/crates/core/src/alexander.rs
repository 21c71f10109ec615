//! Integer Laurent polynomials and the knot polynomial computed by free
//! differential calculus on the group relation.

use crate::error::{Error, Result};
use crate::knot::{relator, Gen, TwistedTorusKnot};
use std::collections::BTreeMap;
use std::fmt;

/// A Laurent polynomial over Z; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(1, 0)
    }

    pub fn monomial(coef: i64, exp: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if coef != 0 {
            coeffs.insert(exp, coef);
        }
        LaurentPoly { coeffs }
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        let mut out = LaurentPoly::zero();
        for &(exp, coef) in pairs {
            out.add_term(exp, coef);
        }
        out
    }

    fn add_term(&mut self, exp: i64, coef: i64) {
        if coef == 0 {
            return;
        }
        let slot = self.coeffs.entry(exp).or_insert(0);
        *slot += coef;
        if *slot == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn span(&self) -> i64 {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    pub fn mul_monomial(&self, coef: i64, exp: i64) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e, c) in self.terms() {
            out.add_term(e + exp, c * coef);
        }
        out
    }

    /// Exact division over Z; reports an error when any remainder is left.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Result<LaurentPoly> {
        if divisor.is_zero() {
            return Err(Error::InexactDivision);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        let dk = divisor.max_exp().unwrap();
        let dv = divisor.coeff(dk);
        // An exact quotient cannot reach below this exponent; falling past
        // it means the division is a bottomless Laurent series instead.
        let min_exact = self.min_exp().unwrap() - divisor.min_exp().unwrap();
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        while !rem.is_zero() {
            let nk = rem.max_exp().unwrap();
            let nv = rem.coeff(nk);
            if nv % dv != 0 || nk - dk < min_exact {
                return Err(Error::InexactDivision);
            }
            let (qe, qc) = (nk - dk, nv / dv);
            quot.add_term(qe, qc);
            rem = rem.add(&divisor.mul_monomial(-qc, qe));
            if let Some(new_hi) = rem.max_exp() {
                if new_hi >= nk {
                    return Err(Error::InexactDivision);
                }
            }
        }
        Ok(quot)
    }

    pub fn eval_at_one(&self) -> i64 {
        self.terms().map(|(_, c)| c).sum()
    }

    /// True when the coefficient list is symmetric about exponent zero.
    pub fn is_palindromic(&self) -> bool {
        self.terms().all(|(e, c)| self.coeff(-e) == c)
    }

    /// Value at e^{i theta} for a palindromic polynomial (the value is real):
    /// c_0 + sum over j > 0 of 2 c_j cos(j theta).
    pub fn eval_unit_circle(&self, theta: f64) -> f64 {
        debug_assert!(self.is_palindromic(), "real circle values need symmetry");
        let mut val = self.coeff(0) as f64;
        for (e, c) in self.terms() {
            if e > 0 {
                val += 2.0 * (c as f64) * (e as f64 * theta).cos();
            }
        }
        val
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
                first = false;
            } else if c < 0 {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mag = c.abs();
            match (mag, e) {
                (_, 0) => write!(f, "{mag}")?,
                (1, 1) => f.write_str("x")?,
                (1, _) => write!(f, "x^{e}")?,
                (_, 1) => write!(f, "{mag}x")?,
                (_, _) => write!(f, "{mag}x^{e}")?,
            }
        }
        Ok(())
    }
}

/// Image of the free derivative with respect to `a` under a -> x^ea,
/// b -> x^eb.
pub fn fox_derivative_image(word: &crate::knot::GroupWord, ea: i64, eb: i64) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    let mut prefix = 0i64;
    for &(g, e) in word.factors() {
        let weight = match g {
            Gen::A => ea,
            Gen::B => eb,
        };
        if g == Gen::A {
            // derivative of a^e: sum of x^(ea j) for j in [0, e) when e > 0,
            // minus the matching sum over [e, 0) when e < 0
            if e > 0 {
                for j in 0..e {
                    out.add_term(prefix + ea * j, 1);
                }
            } else {
                for j in e..0 {
                    out.add_term(prefix + ea * j, -1);
                }
            }
        }
        prefix += e * weight;
    }
    out
}

/// The symmetrized knot polynomial, normalized to value 1 at x = 1.
pub fn alexander_polynomial(knot: &TwistedTorusKnot) -> Result<LaurentPoly> {
    let rel = relator(knot);
    let (ea, eb) = (3 * knot.k() + 2, 3);
    let da = fox_derivative_image(&rel, ea, eb);
    let divisor = LaurentPoly::from_pairs(&[(0, 1), (1, 1), (2, 1)]);
    let quotient = da.div_exact(&divisor)?;

    let lo = quotient.min_exp().ok_or(Error::InexactDivision)?;
    let hi = quotient.max_exp().ok_or(Error::InexactDivision)?;
    if (lo + hi) % 2 != 0 {
        return Err(Error::BadNormalization(lo + hi));
    }
    let centered = quotient.mul_monomial(1, -(lo + hi) / 2);

    let at_one = centered.eval_at_one();
    let normalized = match at_one {
        1 => centered,
        -1 => centered.neg(),
        other => return Err(Error::BadNormalization(other)),
    };
    if !normalized.is_palindromic() {
        return Err(Error::BadNormalization(0));
    }
    Ok(normalized)
}

/// Genus read from the polynomial span (the family is fibered, so the span
/// is twice the genus).
pub fn polynomial_genus(knot: &TwistedTorusKnot) -> Result<i64> {
    Ok(alexander_polynomial(knot)?.span() / 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_k(k: i64) -> LaurentPoly {
        alexander_polynomial(&TwistedTorusKnot::new(k, 1).unwrap()).unwrap()
    }

    #[test]
    fn k1_polynomial_has_the_exact_coefficients() {
        let expected = LaurentPoly::from_pairs(&[
            (-5, 1),
            (-4, -1),
            (-2, 1),
            (-1, -1),
            (0, 1),
            (1, -1),
            (2, 1),
            (4, -1),
            (5, 1),
        ]);
        assert_eq!(poly_k(1), expected);
        assert_eq!(
            poly_k(1).to_string(),
            "x^-5 - x^-4 + x^-2 - x^-1 + 1 - x + x^2 - x^4 + x^5"
        );
    }

    #[test]
    fn k2_polynomial_has_the_exact_coefficients() {
        let expected = LaurentPoly::from_pairs(&[
            (-8, 1),
            (-7, -1),
            (-5, 1),
            (-4, -1),
            (-2, 1),
            (-1, -1),
            (0, 1),
            (1, -1),
            (2, 1),
            (4, -1),
            (5, 1),
            (7, -1),
            (8, 1),
        ]);
        assert_eq!(poly_k(2), expected);
    }

    #[test]
    fn family_polynomials_are_normalized_palindromes() {
        for k in 1..=4 {
            let p = poly_k(k);
            assert_eq!(p.eval_at_one(), 1, "k={k}");
            assert!(p.is_palindromic(), "k={k}");
            assert_eq!(p.span(), 2 * (3 * k + 2), "k={k}");
        }
    }

    #[test]
    fn genus_follows_the_span() {
        assert_eq!(
            polynomial_genus(&TwistedTorusKnot::new(2, 1).unwrap()).unwrap(),
            8
        );
        assert_eq!(
            polynomial_genus(&TwistedTorusKnot::new(1, 1).unwrap()).unwrap(),
            5
        );
    }

    #[test]
    fn circle_evaluation_matches_the_complex_value() {
        let p = poly_k(1);
        for i in 1..10 {
            let theta = 0.3 * i as f64;
            let z = num_complex::Complex64::cis(theta);
            let direct: num_complex::Complex64 = p
                .terms()
                .map(|(e, c)| z.powi(e as i32) * num_complex::Complex64::new(c as f64, 0.0))
                .sum();
            let real = p.eval_unit_circle(theta);
            assert!((direct.re - real).abs() < 1e-10);
            assert!(direct.im.abs() < 1e-10, "palindromes are real on the circle");
        }
    }

    #[test]
    fn exact_division_round_trips_and_rejects_remainders() {
        let d = LaurentPoly::from_pairs(&[(0, 1), (1, 1), (2, 1)]);
        let q = LaurentPoly::from_pairs(&[(-3, 2), (0, -1), (4, 5)]);
        let n = d.mul(&q);
        assert_eq!(n.div_exact(&d).unwrap(), q);

        let off = n.add(&LaurentPoly::monomial(1, -7));
        assert!(matches!(off.div_exact(&d), Err(Error::InexactDivision)));
    }

    #[test]
    fn display_handles_coefficients_beyond_one() {
        let p = LaurentPoly::from_pairs(&[(-1, -2), (0, 3), (1, 1), (3, -4)]);
        assert_eq!(p.to_string(), "-2x^-1 + 3 + x - 4x^3");
    }
}
