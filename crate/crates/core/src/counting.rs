//! Closed-form counts in exact arithmetic.
//!
//! Every formula multiplies first and divides last; the final division is
//! checked for a zero remainder.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ptype::PartitionType;

/// An exact nonnegative count. Serializes as a decimal string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CountResult(BigUint);

impl CountResult {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl From<BigUint> for CountResult {
    fn from(v: BigUint) -> Self {
        CountResult(v)
    }
}

impl From<u64> for CountResult {
    fn from(v: u64) -> Self {
        CountResult(BigUint::from(v))
    }
}

impl PartialEq<u64> for CountResult {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl fmt::Display for CountResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for CountResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

fn exact_div(numerator: BigUint, denominator: &BigUint) -> Result<BigUint> {
    if denominator.is_zero() {
        return Err(Error::NonIntegral {
            numerator: numerator.to_string(),
            denominator: "0".into(),
        });
    }
    let (q, r) = numerator.div_rem(denominator);
    if !r.is_zero() {
        return Err(Error::NonIntegral {
            numerator: numerator.to_string(),
            denominator: denominator.to_string(),
        });
    }
    Ok(q)
}

/// `C(n, k)`; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc = C(n, i) here, so acc * (n - i) is divisible by i + 1.
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `(k_1 + ... + k_r)! / (k_1! ... k_r!)`.
pub fn multinomial(parts: &[usize]) -> BigUint {
    let mut total = 0usize;
    let mut acc = BigUint::one();
    for &k in parts {
        total += k;
        acc *= binomial(total, k);
    }
    acc
}

/// `n/(n-k) * C(n-k, k)`: `k`-subsets of `Z_n` with no two elements adjacent.
///
/// Valid for `n >= 2k + 1`; `k = 0` gives 1.
pub fn kaplansky(n: usize, k: usize) -> Result<CountResult> {
    if k == 0 {
        return Ok(CountResult::from(1u64));
    }
    if n < 2 * k + 1 {
        return Err(Error::OutOfRegime(format!(
            "kaplansky needs n >= 2k+1, got n={n}, k={k}"
        )));
    }
    gap_formula(n, 1, k)
}

/// `n/(n-pk) * C(n-pk, k)` for `n >= pk + 1`; `k = 0` gives 1.
pub fn generalized_kaplansky(n: usize, p: usize, k: usize) -> Result<CountResult> {
    if p == 0 {
        return Err(Error::InvalidArgument("p must be at least 1".into()));
    }
    if n == 0 {
        return Err(Error::OutOfRegime("n must be at least 1".into()));
    }
    if k == 0 {
        return Ok(CountResult::from(1u64));
    }
    if n <= p * k {
        return Err(Error::OutOfRegime(format!(
            "generalized kaplansky needs n >= pk+1, got n={n}, p={p}, k={k}"
        )));
    }
    gap_formula(n, p, k)
}

fn gap_formula(n: usize, p: usize, k: usize) -> Result<CountResult> {
    let free = n - p * k;
    let numerator = BigUint::from(n) * binomial(free, k);
    Ok(CountResult(exact_div(numerator, &BigUint::from(free))?))
}

/// Number of `k`-subsets of `Z_n` avoiding differences `{m, 2m, ..., pm}`.
///
/// Equal to [`generalized_kaplansky`] whenever `n >= mpk + 1`; `m` only
/// tightens the precondition.
pub fn msun_count(n: usize, m: usize, p: usize, k: usize) -> Result<CountResult> {
    if m == 0 || p == 0 || k == 0 {
        return Err(Error::InvalidArgument("m, p and k must be at least 1".into()));
    }
    if n <= m * p * k {
        return Err(Error::OutOfRegime(format!(
            "msun count needs n >= mpk+1, got n={n}, m={m}, p={p}, k={k}"
        )));
    }
    generalized_kaplansky(n, p, k)
}

/// `n/(k_1+...+k_r) * multinomial(k_1, ..., k_r)`: dissections of an
/// `n`-cycle of type `t`.
pub fn cyclic_multinomial(n: usize, t: &PartitionType) -> Result<CountResult> {
    let weight = t.weight();
    if weight != n || n == 0 {
        return Err(Error::WeightMismatch {
            ptype: t.clone(),
            weight,
            n,
        });
    }
    let mults: Vec<usize> = t.parts().iter().map(|&(_, k)| k).collect();
    let numerator = BigUint::from(n) * multinomial(&mults);
    Ok(CountResult(exact_div(
        numerator,
        &BigUint::from(t.block_count()),
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &str) -> PartitionType {
        s.parse().unwrap()
    }

    #[test]
    fn binomial_table() {
        assert_eq!(binomial(6, 3), BigUint::from(20u32));
        assert_eq!(binomial(11, 2), BigUint::from(55u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
        for n in 0..30 {
            let row_sum: BigUint = (0..=n).map(|k| binomial(n, k)).sum();
            assert_eq!(row_sum, BigUint::one() << n);
        }
    }

    #[test]
    fn binomial_beyond_u64() {
        let expected: BigUint = "100891344545564193334812497256".parse().unwrap();
        assert_eq!(binomial(100, 50), expected);
    }

    #[test]
    fn multinomial_matches_factorials() {
        let m = multinomial(&[4, 1, 2]);
        assert_eq!(m, factorial(7) / (factorial(4) * factorial(1) * factorial(2)));
        assert_eq!(m, BigUint::from(105u32));
    }

    #[test]
    fn kaplansky_values() {
        assert_eq!(kaplansky(6, 2).unwrap(), 9);
        assert_eq!(kaplansky(7, 0).unwrap(), 1);
        assert_eq!(kaplansky(9, 3).unwrap(), 30);
        assert!(matches!(kaplansky(6, 3), Err(Error::OutOfRegime(_))));
    }

    #[test]
    fn generalized_values() {
        assert_eq!(generalized_kaplansky(7, 2, 1).unwrap(), 7);
        assert_eq!(generalized_kaplansky(10, 2, 2).unwrap(), 25);
        assert_eq!(generalized_kaplansky(4, 3, 0).unwrap(), 1);
        assert!(generalized_kaplansky(6, 3, 2).is_err());
    }

    #[test]
    fn msun_values() {
        assert_eq!(msun_count(13, 2, 1, 2).unwrap(), 65);
        assert_eq!(msun_count(13, 1, 1, 2).unwrap(), 65);
        assert!(matches!(msun_count(12, 2, 2, 3), Err(Error::OutOfRegime(_))));
    }

    #[test]
    fn cyclic_multinomial_values() {
        assert_eq!(cyclic_multinomial(20, &ty("1^8,2^3,3^2")).unwrap(), 19800);
        assert_eq!(cyclic_multinomial(12, &ty("1^4,2^1,3^2")).unwrap(), 180);
        assert_eq!(cyclic_multinomial(5, &ty("5^1")).unwrap(), 5);
        assert!(matches!(
            cyclic_multinomial(11, &ty("1^4,2^1,3^2")),
            Err(Error::WeightMismatch { .. })
        ));
    }

    #[test]
    fn kaplansky_is_generalized_with_p_one() {
        for n in 1..=40 {
            for k in 0..=n / 2 {
                if k == 0 || n > 2 * k {
                    assert_eq!(kaplansky(n, k).unwrap(), generalized_kaplansky(n, 1, k).unwrap());
                }
            }
        }
    }

    #[test]
    fn cyclic_multinomial_specializes_to_generalized_kaplansky() {
        for n in 2..=40 {
            for p in 1..=5 {
                for k in 1..=n / (p + 1) {
                    if n < p * k + k + 1 {
                        continue;
                    }
                    let t = PartitionType::spaced(n, p, k).unwrap();
                    assert_eq!(
                        cyclic_multinomial(n, &t).unwrap(),
                        generalized_kaplansky(n, p, k).unwrap(),
                        "n={n} p={p} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn formulas_integral_and_positive_in_regime_up_to_forty() {
        for n in 1..=40 {
            for t in PartitionType::all_of_weight(n).into_iter().take(400) {
                let c = cyclic_multinomial(n, &t).unwrap();
                assert!(!c.value().is_zero());
            }
            for p in 1..=4 {
                for k in 0..=n {
                    if k == 0 || n > p * k {
                        // Zero exactly when fewer than k free positions remain.
                        let v = generalized_kaplansky(n, p, k).unwrap();
                        assert_eq!(v.value().is_zero(), n - p * k < k, "n={n} p={p} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn counts_serialize_as_decimal_strings() {
        let c = CountResult::from(binomial(100, 50));
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            "\"100891344545564193334812497256\""
        );
    }
}
