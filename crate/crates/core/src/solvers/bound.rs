use num_bigint::BigUint;

use super::SolverStats;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuasiVariant {
    Liverpool,
    Warsaw,
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 1..=k {
        // exact at every step: acc is C(n - k + i - 1, i - 1)
        acc = acc * BigUint::from(n - k + i) / BigUint::from(i);
    }
    acc
}

/// Upper bound on solver invocations for priority bound `d`, `n` vertices and
/// `ell = floor(log p_E) + floor(log p_O)`:
/// Liverpool `2^(ell+1) * C(d+ell, ell) - 1`, Warsaw `2 * n^ell * C(d+ell, ell) - 1`.
pub fn call_bound(variant: QuasiVariant, d: u32, n: u64, ell: u32) -> BigUint {
    let choose = binomial(d as u64 + ell as u64, ell as u64);
    let factor = match variant {
        QuasiVariant::Liverpool => BigUint::from(2u32).pow(ell + 1),
        QuasiVariant::Warsaw => BigUint::from(2u32) * BigUint::from(n.max(1)).pow(ell),
    };
    factor * choose - BigUint::from(1u32)
}

/// The call budget an optimisation-free run must respect: [`call_bound`], except that
/// with `d = 0` or `ell = 0` the run is the root call alone.
pub fn effective_bound(variant: QuasiVariant, d: u32, n: u64, ell: u32) -> BigUint {
    if d == 0 || ell == 0 {
        BigUint::from(1u32)
    } else {
        call_bound(variant, d, n, ell)
    }
}

/// Whether an optimisation-free run stayed within [`effective_bound`].
pub fn check_call_bound(stats: &SolverStats, variant: QuasiVariant, d: u32, n: u64, ell: u32) -> bool {
    BigUint::from(stats.recursive_calls) <= effective_bound(variant, d, n, ell)
}
