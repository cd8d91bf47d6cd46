//! Maximal-period word-based xorshift generators.
//!
//! A degree-`mn` primitive polynomial over GF(2) is split into `n` tap
//! words of `m` bits each. The resulting generator keeps `n` words of state
//! and produces one `m`-bit word per step using only right shifts and XORs,
//! with period `2^{mn} - 1` for every nonzero seed.
//!
//! ```
//! use xorshift_gf2::{construct_from_primitive, factor_mersenne, generate_stream, seed, Gf2Poly};
//!
//! let f: Gf2Poly = "degs:4,1,0".parse().unwrap();
//! let fact = factor_mersenne(4, None).unwrap();
//! let spec = construct_from_primitive(&f, 2, &fact).unwrap();
//! let (mut state, _) = seed(&spec, &[1, 1]).unwrap();
//! assert_eq!(generate_stream(&spec, &mut state, 15), [0x48, 0x5a]);
//! ```

pub mod analysis;
pub mod bench;
pub mod construct;
mod error;
pub mod generator;
pub mod gf2poly;

pub use analysis::{
    census, op_count_bounds, orbit_period, orbit_period_cancellable, tap_count, verify_full_period,
    weakness_trace, word_size_ratio, OpCountBounds, Ratio, RatioInterval, WeaknessReport,
};
pub use construct::{
    build_block_companion, build_marsaglia_matrix, build_matrix_polynomial, build_tap_vectors,
    charpoly_dense, check_triplet, construct_from_primitive, det_matrix_polynomial, sample_k_tap,
    BitMatrix, MatrixPolynomial, SampledSpec, TripletSpec, XorshiftSpec,
};
pub use error::{Error, PrimitivityFailure, Result};
pub use generator::{
    generate_stream, seed, step, step_dense, write_stream, GeneratorState, OpCounter, SeedQuality,
};
pub use gf2poly::{
    factor_mersenne, is_irreducible, is_primitive, random_primitive, FactorTable, Factorization,
    Gf2Poly,
};
