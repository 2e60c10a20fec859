//! seesaw-core: an exact + numeric engine that realizes CM modular forms
//! over Q(sqrt(-7)) as explicit theta lifts and verifies, at desk scale,
//! the metaplectic splitting identities, an explicit Rallis inner product
//! formula, and the identity between torus periods on the two quaternion
//! algebras attached to a pair of canonical Hecke character powers.
//!
//! Module map:
//! - [`qfield`]: exact arithmetic in Q(sqrt(u)), Legendre/Hilbert symbols
//! - [`hecke`]: canonical Hecke characters of Q(sqrt(-7)) and conductors
//! - [`dichotomy`]: local epsilon signs and the quaternion-algebra chart
//! - [`weilrep`]: Bruhat data and splitting values on the doubled torus
//! - [`schwartz`]: the Kummer-polynomial Schwartz family at the real place
//! - [`thetalift`]: q-expansions, lattice sums, Shimura-Maass operators
//! - [`rallis`]: local constants, L-values, Petersson norms, the RIPF check
//! - [`periods`]: torus periods on both sides of the seesaw
//! - [`cli`]: run configuration and machine-readable reports

pub mod bigfloat;
pub mod cli;
pub mod dichotomy;
pub mod hecke;
pub mod periods;
pub mod qfield;
pub mod rallis;
pub mod schwartz;
pub mod thetalift;
pub mod weilrep;
