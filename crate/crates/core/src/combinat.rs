// SPDX-License-Identifier: Apache-2.0

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Binomial coefficient `C(n, r)` for integer `n >= 0`; zero outside `0 <= r <= n`.
pub fn binomial(n: i64, r: i64) -> BigInt {
    if n < 0 || r < 0 || r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for i in 0..r {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn binomial_q(n: i64, r: i64) -> BigRational {
    BigRational::from_integer(binomial(n, r))
}

pub fn sign(e: i64) -> BigRational {
    if e.rem_euclid(2) == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(7, 0), BigInt::from(1));
        assert_eq!(binomial(3, 4), BigInt::from(0));
        assert_eq!(binomial(3, -1), BigInt::from(0));
        assert_eq!(binomial(20, 10), BigInt::from(184756));
    }
}
