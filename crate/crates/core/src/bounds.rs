//! Closed-form exponents of the extremal bounds for `H_t`, the subdivision of `K_t`.
//!
//! All exponents are exact rationals; `6^t` overflows machine integers well
//! before `t = 64`, hence the big-integer backing.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn three_halves() -> BigRational {
    ratio(3, 2)
}

/// `3/2 - 1/(4t - 6)`, equivalently `1 + (t-2)/(2t-3)`.
pub fn upper_exponent(t: u32) -> BigRational {
    three_halves() - ratio(1, 4 * t as i64 - 6)
}

/// The earlier upper bound `3/2 - 1/6^t`.
pub fn prior_upper_exponent(t: u32) -> BigRational {
    three_halves() - BigRational::new(BigInt::one(), BigInt::from(6).pow(t))
}

/// The deletion-method lower bound `3/2 - (t - 3/2)/(t² - t - 1)`.
pub fn deletion_lower_exponent(t: u32) -> BigRational {
    let t = t as i64;
    three_halves() - ratio(2 * t - 3, 2 * (t * t - t - 1))
}

/// Exponent of the minimum-degree requirement `δ ≥ c·n^{(t-2)/(2t-3)}`.
pub fn min_degree_exponent(t: u32) -> BigRational {
    ratio(t as i64 - 2, 2 * t as i64 - 3)
}

/// `c · n^{(t-2)/(2t-3)}`.
pub fn delta_threshold(t: u32, c: f64, n: usize) -> f64 {
    let e = min_degree_exponent(t).to_f64().expect("small rational");
    c * (n as f64).powf(e)
}

/// Upper-bound exponent for the subdivision of `K_{a,b}`: `3/2 - 1/(4a - 2)`.
pub fn complete_bipartite_upper_exponent(a: u32) -> BigRational {
    three_halves() - ratio(1, 4 * a as i64 - 2)
}

/// `(s, t) = (b, a + 1)`: the `L_{s,t}` whose subdivision bound covers `K_{a,b}`.
pub fn complete_bipartite_parameters(a: usize, b: usize) -> (usize, usize) {
    (b, a + 1)
}

/// Degree-ratio constant of the regularization step: `60 · 2^{1 + 1/α²}`.
pub fn regularization_k(alpha: f64) -> f64 {
    60.0 * 2f64.powf(1.0 + 1.0 / (alpha * alpha))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub t: u32,
    /// Exact rational as `p/q`.
    pub upper: String,
    pub upper_value: f64,
    pub prior_upper: String,
    pub prior_upper_value: f64,
    pub lower: String,
    pub lower_value: f64,
    /// `lower ≤ upper ≤ prior_upper`, evaluated exactly.
    pub ordered: bool,
}

pub fn bound_row(t: u32) -> BoundRow {
    let upper = upper_exponent(t);
    let prior = prior_upper_exponent(t);
    let lower = deletion_lower_exponent(t);
    BoundRow {
        t,
        ordered: lower <= upper && upper <= prior,
        upper: upper.to_string(),
        upper_value: upper.to_f64().unwrap(),
        prior_upper: prior.to_string(),
        prior_upper_value: prior.to_f64().unwrap(),
        lower: lower.to_string(),
        lower_value: lower.to_f64().unwrap(),
    }
}

pub fn bound_table(t_min: u32, t_max: u32) -> Vec<BoundRow> {
    (t_min..=t_max).map(bound_row).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t3_values() {
        assert_eq!(upper_exponent(3), ratio(4, 3));
        assert_eq!(prior_upper_exponent(3), ratio(3, 2) - ratio(1, 216));
        assert_eq!(deletion_lower_exponent(3), ratio(6, 5));
        assert_eq!(upper_exponent(4), ratio(7, 5));
        assert_eq!(deletion_lower_exponent(4), ratio(14, 11));
    }

    #[test]
    fn two_forms_of_the_upper_exponent_agree() {
        for t in 3..=40u32 {
            let alt = BigRational::one() + ratio(t as i64 - 2, 2 * t as i64 - 3);
            assert_eq!(upper_exponent(t), alt);
        }
    }

    #[test]
    fn min_degree_exponent_is_upper_minus_one() {
        for t in 3..=10u32 {
            assert_eq!(min_degree_exponent(t), upper_exponent(t) - BigRational::one());
            let numeric = min_degree_exponent(t).to_f64().unwrap();
            let direct = 1.5 - 1.0 / (4.0 * t as f64 - 6.0) - 1.0;
            assert!((numeric - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn delta_threshold_examples() {
        assert!((delta_threshold(3, 1.0, 1000) - 10.0).abs() < 1e-9);
        assert!((delta_threshold(4, 1.0, 100_000) - 100.0).abs() < 1e-9);
    }

    #[test]
    fn complete_bipartite_mapping() {
        assert_eq!(complete_bipartite_parameters(2, 5), (5, 3));
        // t = a + 1 turns 1/(4t-6) into 1/(4a-2).
        for a in 2..10u32 {
            assert_eq!(complete_bipartite_upper_exponent(a), upper_exponent(a + 1));
        }
    }

    #[test]
    fn regularization_constant_at_one_third() {
        assert!((regularization_k(1.0 / 3.0) - 60.0 * 1024.0).abs() < 1e-6);
    }

    #[test]
    fn exponents_are_ordered() {
        assert!(bound_table(3, 64).iter().all(|r| r.ordered));
    }
}
