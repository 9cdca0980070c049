//! Resource guards for tensor-power constructions.
//!
//! The full tensor power of a `d`-dimensional space has dimension `d^n`; every
//! construction that indexes that space checks it against [`max_tensor_dim`]
//! first. The default limit is `10^6` and can be overridden with the
//! `SYMTENSOR_MAX_DIM` environment variable.

use crate::error::{Error, Result};

pub const DEFAULT_MAX_TENSOR_DIM: u128 = 1_000_000;

/// Largest tensor degree accepted by product constructions (`n!` terms).
pub const MAX_DEGREE: usize = 6;

/// Upper bound on the number of entries of any dense matrix we allocate.
pub const MAX_DENSE_ENTRIES: u128 = 1 << 28;

pub const MAX_DIM_ENV: &str = "SYMTENSOR_MAX_DIM";

pub fn max_tensor_dim() -> u128 {
    std::env::var(MAX_DIM_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u128>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_MAX_TENSOR_DIM)
}

/// `d^n`, or `None` on overflow.
pub fn checked_pow(d: usize, n: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..n {
        acc = acc.checked_mul(d as u128)?;
    }
    Some(acc)
}

/// Binomial coefficient with overflow detection.
pub fn binomial(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is always divisible by (i + 1) at this point
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Checks `d^n` against the configured limit and returns it as a `usize`.
pub fn check_tensor_dim(d: usize, n: usize) -> Result<usize> {
    let limit = max_tensor_dim();
    let requested = checked_pow(d, n).unwrap_or(u128::MAX);
    if requested > limit {
        return Err(Error::SizeGuard {
            what: "tensor power dimension d^n",
            requested,
            limit,
        });
    }
    Ok(requested as usize)
}

pub fn check_degree(n: usize) -> Result<()> {
    if n > MAX_DEGREE {
        return Err(Error::SizeGuard {
            what: "tensor degree n",
            requested: n as u128,
            limit: MAX_DEGREE as u128,
        });
    }
    Ok(())
}

pub fn check_dense(rows: usize, cols: usize) -> Result<()> {
    let requested = (rows as u128) * (cols as u128);
    if requested > MAX_DENSE_ENTRIES {
        return Err(Error::SizeGuard {
            what: "dense matrix entries",
            requested,
            limit: MAX_DENSE_ENTRIES,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(3, 2), Some(3));
        assert_eq!(binomial(6, 3), Some(20));
        assert_eq!(binomial(2, 3), Some(0));
        assert_eq!(binomial(0, 0), Some(1));
        assert!(binomial(400, 200).is_none());
    }

    #[test]
    fn pow_overflow() {
        assert_eq!(checked_pow(10, 3), Some(1000));
        assert!(checked_pow(usize::MAX, 3).is_none());
    }

    #[test]
    fn guard_rejects_large_powers() {
        assert!(check_tensor_dim(1001, 2).is_err());
        assert_eq!(check_tensor_dim(10, 6).unwrap(), 1_000_000);
        assert!(check_degree(7).is_err());
    }
}
