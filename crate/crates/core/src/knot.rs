//! The knot family, its two-generator group presentation, and peripheral
//! words.
//!
//! The group is generated by a, b with the single relation
//! a^2 (b^-k a)^m a = b^(2k+1) (b^-k a)^m b^(k+1). The meridian is
//! mu = a^-1 b^(k+1); the boundary word sigma = a (b^-k a)^m a (b^-k a)^m a
//! commutes with mu, and the null-homologous longitude is mu^-c sigma with
//! c = 3(3k+2) + 4m.

use crate::error::{Error, Result};
use crate::mat2::Mat2C;
use crate::omega::matrix_power;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwistedTorusKnot {
    k: i64,
    m: i64,
}

impl TwistedTorusKnot {
    pub fn new(k: i64, m: i64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidKnot(format!("k must be >= 1, got {k}")));
        }
        if m < 1 {
            return Err(Error::InvalidKnot(format!("m must be >= 1, got {m}")));
        }
        Ok(TwistedTorusKnot { k, m })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// The exponent c with longitude = meridian^-c sigma; equals the
    /// homology class of sigma in meridian units.
    pub fn sigma_meridian_power(&self) -> i64 {
        3 * (3 * self.k + 2) + 4 * self.m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gen {
    A,
    B,
}

/// A freely reduced word in a, b: consecutive factors use distinct
/// generators and all exponents are nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GroupWord {
    factors: Vec<(Gen, i64)>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::default()
    }

    pub fn letter(g: Gen, e: i64) -> Self {
        let mut w = GroupWord::identity();
        w.push(g, e);
        w
    }

    /// Append one factor, merging and cancelling as needed.
    pub fn push(&mut self, g: Gen, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(&(last_g, last_e)) = self.factors.last() {
            if last_g == g {
                self.factors.pop();
                self.push(g, last_e + e);
                return;
            }
        }
        self.factors.push((g, e));
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut out = self.clone();
        for &(g, e) in &other.factors {
            out.push(g, e);
        }
        out
    }

    pub fn inverse(&self) -> GroupWord {
        let mut out = GroupWord::identity();
        for &(g, e) in self.factors.iter().rev() {
            out.push(g, -e);
        }
        out
    }

    pub fn factors(&self) -> &[(Gen, i64)] {
        &self.factors
    }

    pub fn exponent_sum(&self, gen: Gen) -> i64 {
        self.factors
            .iter()
            .filter(|(g, _)| *g == gen)
            .map(|(_, e)| e)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// Evaluate the word at matrices for a and b (both must be unimodular).
    pub fn evaluate(&self, a: &Mat2C, b: &Mat2C) -> Result<Mat2C> {
        for m in [a, b] {
            let err = (m.det() - num_complex::Complex64::new(1.0, 0.0)).norm();
            if err > 1e-9 {
                return Err(Error::NotUnimodular(err));
            }
        }
        let mut out = Mat2C::identity();
        for &(g, e) in &self.factors {
            let base = match g {
                Gen::A => a,
                Gen::B => b,
            };
            out = out.mul(&matrix_power(base, e)?);
        }
        Ok(out)
    }
}

/// Left- and right-hand sides of the group relation.
pub fn relator_sides(knot: &TwistedTorusKnot) -> (GroupWord, GroupWord) {
    let (k, m) = (knot.k(), knot.m());
    let mut lhs = GroupWord::letter(Gen::A, 2);
    for _ in 0..m {
        lhs.push(Gen::B, -k);
        lhs.push(Gen::A, 1);
    }
    lhs.push(Gen::A, 1);

    let mut rhs = GroupWord::letter(Gen::B, 2 * k + 1);
    for _ in 0..m {
        rhs.push(Gen::B, -k);
        rhs.push(Gen::A, 1);
    }
    rhs.push(Gen::B, k + 1);
    (lhs, rhs)
}

/// The relation as a single word: lhs * rhs^-1.
pub fn relator(knot: &TwistedTorusKnot) -> GroupWord {
    let (lhs, rhs) = relator_sides(knot);
    lhs.concat(&rhs.inverse())
}

#[derive(Clone, Debug)]
pub struct PeripheralSystem {
    pub meridian: GroupWord,
    pub sigma: GroupWord,
    /// c with longitude = meridian^-c sigma.
    pub meridian_power: i64,
}

pub fn peripheral_system(knot: &TwistedTorusKnot) -> PeripheralSystem {
    let (k, m) = (knot.k(), knot.m());
    let meridian = GroupWord::letter(Gen::A, -1).concat(&GroupWord::letter(Gen::B, k + 1));
    let mut sigma = GroupWord::letter(Gen::A, 1);
    for _ in 0..2 {
        for _ in 0..m {
            sigma.push(Gen::B, -k);
            sigma.push(Gen::A, 1);
        }
        sigma.push(Gen::A, 1);
    }
    PeripheralSystem {
        meridian,
        sigma,
        meridian_power: knot.sigma_meridian_power(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn factors(w: &GroupWord) -> Vec<(Gen, i64)> {
        w.factors().to_vec()
    }

    #[test]
    fn relation_sides_reduce_to_the_expected_words() {
        let knot = TwistedTorusKnot::new(1, 1).unwrap();
        let (lhs, rhs) = relator_sides(&knot);
        assert_eq!(factors(&lhs), vec![(Gen::A, 2), (Gen::B, -1), (Gen::A, 2)]);
        assert_eq!(factors(&rhs), vec![(Gen::B, 2), (Gen::A, 1), (Gen::B, 2)]);

        let knot = TwistedTorusKnot::new(2, 1).unwrap();
        let (lhs, rhs) = relator_sides(&knot);
        assert_eq!(factors(&lhs), vec![(Gen::A, 2), (Gen::B, -2), (Gen::A, 2)]);
        assert_eq!(factors(&rhs), vec![(Gen::B, 3), (Gen::A, 1), (Gen::B, 3)]);

        let knot = TwistedTorusKnot::new(1, 2).unwrap();
        let (lhs, rhs) = relator_sides(&knot);
        assert_eq!(
            factors(&lhs),
            vec![(Gen::A, 2), (Gen::B, -1), (Gen::A, 1), (Gen::B, -1), (Gen::A, 2)]
        );
        assert_eq!(
            factors(&rhs),
            vec![(Gen::B, 2), (Gen::A, 1), (Gen::B, -1), (Gen::A, 1), (Gen::B, 2)]
        );
    }

    #[test]
    fn relator_abelianization_is_consistent_with_meridian_classes() {
        // a maps to x^(3k+2) and b to x^3 in homology, so the relator must
        // have 3k+2 times its a-sum plus 3 times its b-sum equal to zero.
        for (k, m) in [(1, 1), (2, 1), (3, 1), (4, 1), (1, 2), (2, 3)] {
            let knot = TwistedTorusKnot::new(k, m).unwrap();
            let r = relator(&knot);
            let weighted = (3 * k + 2) * r.exponent_sum(Gen::A) + 3 * r.exponent_sum(Gen::B);
            assert_eq!(weighted, 0, "k={k} m={m}");
        }
    }

    #[test]
    fn peripheral_words_match_their_definitions() {
        let knot = TwistedTorusKnot::new(1, 1).unwrap();
        let p = peripheral_system(&knot);
        assert_eq!(factors(&p.meridian), vec![(Gen::A, -1), (Gen::B, 2)]);
        assert_eq!(
            factors(&p.sigma),
            vec![(Gen::A, 1), (Gen::B, -1), (Gen::A, 2), (Gen::B, -1), (Gen::A, 2)]
        );
        assert_eq!(p.meridian_power, 19);
    }

    #[test]
    fn sigma_homology_class_equals_the_meridian_power() {
        for (k, m) in [(1, 1), (2, 1), (3, 1), (4, 1), (1, 2), (2, 2), (3, 3)] {
            let knot = TwistedTorusKnot::new(k, m).unwrap();
            let p = peripheral_system(&knot);
            let class =
                (3 * k + 2) * p.sigma.exponent_sum(Gen::A) + 3 * p.sigma.exponent_sum(Gen::B);
            assert_eq!(class, p.meridian_power, "k={k} m={m}");
            assert_eq!(p.meridian_power, 3 * (3 * k + 2) + 4 * m);
        }
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(TwistedTorusKnot::new(0, 1).is_err());
        assert!(TwistedTorusKnot::new(1, 0).is_err());
        assert!(TwistedTorusKnot::new(-2, 1).is_err());
    }

    fn arb_word() -> impl Strategy<Value = GroupWord> {
        proptest::collection::vec((prop_oneof![Just(Gen::A), Just(Gen::B)], -3i64..=3), 0..6)
            .prop_map(|fs| {
                let mut w = GroupWord::identity();
                for (g, e) in fs {
                    w.push(g, e);
                }
                w
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn word_inverse_cancels(w in arb_word()) {
            prop_assert!(w.concat(&w.inverse()).is_identity());
            prop_assert!(w.inverse().concat(&w).is_identity());
        }

        #[test]
        fn evaluation_is_a_homomorphism(u in arb_word(), v in arb_word()) {
            // fixed unimodular pair with no special relations
            let a = Mat2C::new(
                Complex64::new(1.1, 0.2),
                Complex64::new(0.3, -0.1),
                Complex64::new(0.3, 0.1),
                Complex64::new(1.1, -0.2),
            );
            let s = a.det().sqrt();
            let a = Mat2C::new(a.a / s, a.b / s, a.c / s, a.d / s);
            let b = Mat2C::rotation(0.83);
            let uv = u.concat(&v).evaluate(&a, &b).unwrap();
            let sep = u.evaluate(&a, &b).unwrap().mul(&v.evaluate(&a, &b).unwrap());
            prop_assert!(uv.sub(&sep).max_abs() < 1e-9);
        }
    }

    #[test]
    fn evaluation_rejects_non_unimodular_matrices() {
        let knot = TwistedTorusKnot::new(1, 1).unwrap();
        let w = relator(&knot);
        let bad = Mat2C::new(
            Complex64::new(3.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(3.0, 0.0),
        );
        assert!(matches!(
            w.evaluate(&bad, &Mat2C::identity()),
            Err(Error::NotUnimodular(_))
        ));
    }
}
