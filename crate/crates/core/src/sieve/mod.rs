//! Integer side: primes, π, exact Φ(x, y), Mertens products, prime sums and
//! the Bonferroni pre-sieve bounds.

mod mertens;
mod phi;
mod primes;

pub use mertens::{
    bonferroni_bounds, bonferroni_max_threshold, log_mertens, mertens_product,
    reciprocal_prime_sum, Bonferroni,
};
pub use phi::{
    phi_direct, phi_exact, phi_inclusion_exclusion, phi_legendre, phi_with, LegendreConfig,
    PhiMethod, RoughCountQuery, DIRECT_CUTOFF,
};
pub use primes::PrimeTable;
