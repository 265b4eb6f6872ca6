//! The minimal-spike-count function on non-negative integers.

/// Minimum number of terms of the form `2^d - 1` (with `d > 0`) summing to
/// `n`; zero for `n = 0`.
///
/// A sum of `k` such terms exists exactly when `k <= n`, `n` and `k` have the
/// same parity (every term is odd) and `n + k` has at most `k` binary digits
/// equal to 1 (then `n + k` splits into `k` powers of two, each at least 2).
/// The answer is the smallest such `k`.
pub fn xi(n: u64) -> u32 {
    for k in 0..=n {
        if (n + k) % 2 == 0 && (n + k).count_ones() as u64 <= k {
            return k as u32;
        }
    }
    0 // n = 0 only
}
