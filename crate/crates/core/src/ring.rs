//! Exact arithmetic over the residue ring Z_n for odd n.
//!
//! Everything downstream (histograms, Fourier tables, simplex censuses)
//! consumes the [`Modulus`] defined here: a factored odd integer together
//! with its divisor count `tau` and smallest prime divisor `gamma`. All
//! residues are canonical representatives in `[0, n)` and arithmetic
//! reduces eagerly.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest accepted modulus. Factorization is plain trial division up to
/// sqrt(n), which is instantaneous at this scale.
pub const MAX_MODULUS: u64 = 1 << 40;

/// An odd modulus `n >= 3` with its prime factorization and the derived
/// quantities used throughout: `tau(n)` (number of divisors) and
/// `gamma(n)` (smallest prime divisor).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Modulus {
    n: u64,
    /// `(p_i, alpha_i)` sorted ascending by `p_i`; the product of
    /// `p_i^alpha_i` is `n`.
    factors: Vec<(u64, u32)>,
    tau: u64,
    gamma: u64,
}

impl Modulus {
    /// Factorizes an odd `n` in `[3, 2^40]`.
    pub fn new(n: u64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Modulus {
                n,
                reason: "must be at least 3",
            });
        }
        if n.is_multiple_of(2) {
            return Err(Error::Modulus {
                n,
                reason: "must be odd",
            });
        }
        if n > MAX_MODULUS {
            return Err(Error::Modulus {
                n,
                reason: "exceeds the 2^40 trial-division ceiling",
            });
        }

        let mut factors = Vec::new();
        let mut rest = n;
        let mut p = 3u64;
        while p * p <= rest {
            if rest.is_multiple_of(p) {
                let mut alpha = 0u32;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    alpha += 1;
                }
                factors.push((p, alpha));
            }
            p += 2;
        }
        if rest > 1 {
            factors.push((rest, 1));
        }

        let tau = factors.iter().map(|&(_, a)| u64::from(a) + 1).product();
        let gamma = factors[0].0;
        Ok(Self {
            n,
            factors,
            tau,
            gamma,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(p_i, alpha_i)` pairs, ascending in `p_i`.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Number of positive divisors of `n`.
    pub fn tau(&self) -> u64 {
        self.tau
    }

    /// Smallest prime divisor of `n`.
    pub fn gamma(&self) -> u64 {
        self.gamma
    }

    /// Canonical representative of `x` in `[0, n)`.
    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.n
    }

    /// `true` iff `gcd(s, n) = 1`.
    pub fn is_unit(&self, s: u64) -> bool {
        gcd(s % self.n, self.n) == 1
    }

    /// Euler's totient, from the factorization.
    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, a)| p.pow(a - 1) * (p - 1))
            .product()
    }

    /// Per-prime valuations of `s`, capped at the prime's exponent in `n`.
    ///
    /// `s = 0` maps to `(alpha_1, ..., alpha_k)`: zero is maximally
    /// divisible inside Z_n. The cap also applies to `s != 0` (e.g.
    /// `s = 9` mod `15` has 3-adic valuation 1, not 2), which matches the
    /// valuation of the component of `s` in Z_{p^alpha}.
    pub fn valuations(&self, s: u64) -> ValuationVector {
        let s = s % self.n;
        let beta = self
            .factors
            .iter()
            .map(|&(p, alpha)| {
                if s == 0 {
                    return alpha;
                }
                let mut v = 0u32;
                let mut rest = s;
                while v < alpha && rest.is_multiple_of(p) {
                    rest /= p;
                    v += 1;
                }
                v
            })
            .collect();
        ValuationVector { beta }
    }

    /// Number of solutions `y` in Z_n^d of `mult * y = 0` coordinatewise,
    /// i.e. `gcd(mult, n)^d`. `mult = 0` gives `n^d`.
    pub fn kernel_size(&self, mult: u64, d: usize) -> u128 {
        u128::from(gcd(mult % self.n, self.n)).pow(d as u32)
    }

    /// `n^d` when it fits in a `u128`.
    pub fn volume(&self, d: usize) -> Option<u128> {
        u128::from(self.n).checked_pow(d as u32)
    }

    /// `n^d` as a float (for bound formulas and vacuity flags).
    pub fn volume_f64(&self, d: usize) -> f64 {
        (self.n as f64).powi(d as i32)
    }
}

/// Vector of capped p-adic valuations, one entry per prime divisor of `n`,
/// in the order of [`Modulus::factors`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValuationVector {
    beta: Vec<u32>,
}

impl ValuationVector {
    pub fn beta(&self) -> &[u32] {
        &self.beta
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn factorize_examples() {
        let m = Modulus::new(15).unwrap();
        assert_eq!(m.factors(), &[(3, 1), (5, 1)]);
        assert_eq!(m.tau(), 4);
        assert_eq!(m.gamma(), 3);

        let m = Modulus::new(9).unwrap();
        assert_eq!(m.factors(), &[(3, 2)]);
        assert_eq!(m.tau(), 3);
        assert_eq!(m.gamma(), 3);

        let m = Modulus::new(45).unwrap();
        assert_eq!(m.factors(), &[(3, 2), (5, 1)]);
        assert_eq!(m.tau(), 6);
        assert_eq!(m.gamma(), 3);
    }

    #[test]
    fn factorize_rejects_bad_input() {
        assert!(Modulus::new(4).is_err());
        assert!(Modulus::new(1).is_err());
        assert!(Modulus::new(0).is_err());
        assert!(Modulus::new(MAX_MODULUS + 2).is_err());
        assert!(Modulus::new(MAX_MODULUS - 1).is_ok()); // 2^40 - 1 is odd
    }

    #[test]
    fn valuation_examples() {
        let m45 = Modulus::new(45).unwrap();
        assert_eq!(m45.valuations(12).beta(), &[1, 0]);
        assert_eq!(m45.valuations(0).beta(), &[2, 1]);
        let m15 = Modulus::new(15).unwrap();
        assert_eq!(m15.valuations(5).beta(), &[0, 1]);
        // Cap: 9 has integer 3-adic valuation 2, but alpha = 1 in 15.
        assert_eq!(m15.valuations(9).beta(), &[1, 0]);
    }

    #[test]
    fn kernel_size_examples() {
        let m9 = Modulus::new(9).unwrap();
        assert_eq!(m9.kernel_size(3, 2), 9);
        assert_eq!(m9.kernel_size(3, 1), 3);
        assert_eq!(m9.kernel_size(0, 2), 81);
        let m15 = Modulus::new(15).unwrap();
        assert_eq!(m15.kernel_size(7, 3), 1);
    }

    #[test]
    fn kernel_size_matches_enumeration_small() {
        // Exhaustive check on a few odd n; the full n <= 25 sweep is in the
        // acceptance suite.
        for n in [3u64, 9, 15] {
            let m = Modulus::new(n).unwrap();
            for mult in 0..n {
                for d in 1..=2usize {
                    let mut count = 0u128;
                    let total = n.pow(d as u32);
                    for idx in 0..total {
                        let mut x = idx;
                        let mut ok = true;
                        for _ in 0..d {
                            if (mult * (x % n)) % n != 0 {
                                ok = false;
                                break;
                            }
                            x /= n;
                        }
                        if ok {
                            count += 1;
                        }
                    }
                    assert_eq!(m.kernel_size(mult, d), count, "n={n} mult={mult} d={d}");
                }
            }
        }
    }

    #[test]
    fn unit_examples() {
        let m15 = Modulus::new(15).unwrap();
        assert!(m15.is_unit(4));
        assert!(!m15.is_unit(6));
        let m9 = Modulus::new(9).unwrap();
        assert!(!m9.is_unit(0));
    }

    #[test]
    fn unit_count_equals_totient() {
        for n in (3..10_000u64).step_by(2) {
            let m = Modulus::new(n).unwrap();
            let count = (0..n).filter(|&s| m.is_unit(s)).count() as u64;
            assert_eq!(count, m.euler_phi(), "n={n}");
        }
    }

    proptest! {
        #[test]
        fn valuation_divides_and_is_maximal(n in 1u64..2000, s in 0u64..4001) {
            let n = 2 * n + 1;
            prop_assume!(n >= 3);
            let m = Modulus::new(n).unwrap();
            let s = s % n;
            let vals = m.valuations(s);
            for (&(p, alpha), &beta) in m.factors().iter().zip(vals.beta()) {
                prop_assert!(beta <= alpha);
                if s == 0 {
                    prop_assert_eq!(beta, alpha);
                } else {
                    prop_assert_eq!(s % p.pow(beta), 0);
                    if beta < alpha {
                        prop_assert_ne!(s % p.pow(beta + 1), 0);
                    }
                }
            }
            if s != 0 {
                let strict = m
                    .factors()
                    .iter()
                    .zip(vals.beta())
                    .any(|(&(_, alpha), &beta)| beta < alpha);
                prop_assert!(strict);
            }
        }

        #[test]
        fn factorization_multiplies_back(n in 1u64..500_000) {
            let n = 2 * n + 1;
            let m = Modulus::new(n).unwrap();
            let product: u64 = m.factors().iter().map(|&(p, a)| p.pow(a)).product();
            prop_assert_eq!(product, n);
            for w in m.factors().windows(2) {
                prop_assert!(w[0].0 < w[1].0);
            }
        }
    }
}
