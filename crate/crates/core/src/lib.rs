//! Analysis of multivariate Euler products `Z(s) = prod_p h(p^{-s_1},...,p^{-s_n})`
//! for integer polynomials `h` with `h(0) = 1`.
//!
//! The crate computes the cyclotomic-expansion coefficients of `h`, the
//! polyhedral meromorphy domain `W(0)` with its boundary faces, decides face
//! non-degeneracy and (semi-)decides cyclotomy, evaluates the meromorphic
//! continuation numerically, and runs the boundary-zero experiment in which
//! zeros of `Z` along a line accumulate on the domain boundary.

pub mod boundary;
pub mod continuation;
pub mod gamma;
pub mod geometry;
pub mod poly;
mod roots;
pub mod toric;
pub mod zeta;

pub(crate) mod util {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::One;

    /// Renders a rational as `p` when the denominator is 1 and `p/q` otherwise.
    pub fn rational_string(x: &BigRational) -> String {
        if x.denom().is_one() {
            format!("{}", x.numer())
        } else {
            format!("{}/{}", x.numer(), x.denom())
        }
    }

    pub fn bigint_string(x: &BigInt) -> String {
        format!("{x}")
    }
}
