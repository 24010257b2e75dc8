//! Weakly bialgebraic curves of the real Weierstrass map
//! `(x, y) ↦ (Re ℘_Λ(x+iy), Im ℘_Λ(x+iy))`.
//!
//! * [`exactnum`]: exact ℚ / quadratic-field arithmetic and integer kernels.
//! * [`lattice`]: τ specifications, `Isog(Λ, Λ̄)`, CM detection, special geodesics.
//! * [`classify`]: the complete list of bialgebraic lines for a lattice.
//! * [`weierstrass`]: multiprecision `g2`, `g3`, `℘`, `℘′`.
//! * [`verify`]: sampling, vanishing-polynomial fits and density probes.
//! * [`mp`]: multiprecision scalars.
//! * [`oracles`]: independent reference computations.
//! * [`acceptance`]: the acceptance criteria as data, shared with the CLI demo.

pub mod acceptance;
pub mod classify;
pub mod exactnum;
pub mod lattice;
pub mod mp;
pub mod oracles;
pub mod verify;
pub mod weierstrass;
