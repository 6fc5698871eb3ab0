use libm::exp;

use super::special::ln_choose;
use crate::{Error, Result};

/// Probability that two independent size-`m` subsets of `{1..n}` share
/// exactly `k` elements: `C(m,k) C(n-m,m-k) / C(n,m)`.
pub fn overlap_pmf(n: u64, m: u64, k: i64) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(Error::invalid("overlap_pmf needs n, m >= 1"));
    }
    if m > n {
        return Err(Error::invalid("overlap_pmf needs m <= n"));
    }
    let lo = (2 * m).saturating_sub(n) as i64;
    if k < lo || k > m as i64 {
        return Ok(0.0);
    }
    let k = k as u64;
    Ok(exp(ln_choose(m, k) + ln_choose(n - m, m - k) - ln_choose(n, m)))
}
