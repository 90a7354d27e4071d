//! Exact construction of Hermite-Padé rational approximants `a_n / b_n` to the
//! q-zeta value
//!
//! ```text
//! zeta_q(2) = sum_{k >= 1} k q^k / (1 - q^k),    q = 1/p,  p >= 2 an integer,
//! ```
//!
//! built from little q-Jacobi (q-Legendre) polynomials, together with the
//! machinery needed to check every exact identity of the construction and to
//! bound the approximation error rigorously.
//!
//! Everything that is a finite expression is computed in exact rational
//! arithmetic. Infinite series are summed in dyadic interval arithmetic
//! ([`numeric::Enclosure`]) with closed-form tail majorants.
//!
//! Module map:
//!
//! * [`numeric`]: rationals, dyadic enclosures, tail bounds, p-adic valuations
//! * [`qcore`]: q-Pochhammer symbols, q-binomials, q-derivatives, q-integrals
//! * [`polyring`]: dense polynomials, rational functions, the double-pole
//!   partial fraction decomposition
//! * [`cyclotomic`]: cyclotomic polynomials, `d_n(p)` and the clearing factor `e_n`
//! * [`qjacobi`]: little q-Jacobi polynomials (explicit and Rodrigues forms)
//! * [`hermite_pade`]: the polynomials `A_n`, `B_n`, `C_n` and the integer
//!   approximants `a_n`, `b_n`
//! * [`residue`]: the partial-fraction ledger behind the integrality proof
//! * [`zetaq`]: enclosures of `zeta_q`, the error sequence and its asymptotics

pub mod cyclotomic;
pub mod error;
pub mod hermite_pade;
pub mod numeric;
pub mod polyring;
pub mod qcore;
pub mod qjacobi;
pub mod residue;
pub mod zetaq;

pub use error::{Error, Result};
pub use numeric::{BigRat, Enclosure};
pub use qcore::QParam;
