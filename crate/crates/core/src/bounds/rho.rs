use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

/// Form of the threshold equation for `ρ(r)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", tag = "form")]
pub enum RhoEquation {
    /// `(ρ-1)(r-1) ((ρr-ρ-r)/(ρr-ρ))^((r-1)(ρr-ρ-r)/r) = 1`.
    #[default]
    Standard,
    /// The same equation with the base numerator written `ρr - d - r` for a
    /// fixed `d`; with `d = ρ` it coincides with [`RhoEquation::Standard`].
    LiteralD { d: f64 },
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum RhoError {
    #[error("uniformity r = {0} must be at least 3")]
    Uniformity(usize),
    #[error("the threshold function has no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("root found at {rho} but |f| = {residual} exceeds tolerance {tol} at this precision")]
    ToleranceUnattainable { rho: f64, residual: f64, tol: f64 },
}

/// A bracketed root of the threshold equation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoRoot<T> {
    pub rho: T,
    pub residual: T,
    pub bracket: (T, T),
    /// Smallest integer strictly above `rho`, the value used downstream.
    pub rho_int: usize,
}

/// `f(ρ) = (ρ-1)(r-1) b^e - 1` with `b`, `e` as in [`RhoEquation`].
pub fn rho_function<T: Scalar>(r: usize, rho: T, equation: RhoEquation) -> T {
    let r_t = T::of_usize(r);
    let one = T::one();
    let d = match equation {
        RhoEquation::Standard => rho,
        RhoEquation::LiteralD { d } => T::of(d),
    };
    let top = rho * r_t - d - r_t;
    let base = top / (rho * r_t - rho);
    let exponent = (r_t - one) * (rho * r_t - rho - r_t) / r_t;
    (rho - one) * (r_t - one) * base.powf(exponent) - one
}

fn lower_end<T: Scalar>(r: usize, equation: RhoEquation) -> T {
    let two = T::of(2.0);
    match equation {
        RhoEquation::Standard => two,
        RhoEquation::LiteralD { d } => {
            // keep the base positive
            let floor = (T::of(d) + T::of_usize(r)) / T::of_usize(r);
            if floor >= two {
                floor + T::of(1e-9).max(T::epsilon() * floor * T::of(16.0))
            } else {
                two
            }
        }
    }
}

/// Root of the threshold equation on `(2, ∞)` by bisection.
///
/// The upper end of the bracket starts at `100` and doubles until the function
/// changes sign. Bisection runs until the bracket stops shrinking at the
/// precision of `T`; the result is rejected if `|f(ρ)|` is still above `tol`.
pub fn rho_threshold<T: Scalar>(r: usize, tol: T, equation: RhoEquation) -> Result<RhoRoot<T>, RhoError> {
    if r < 3 {
        return Err(RhoError::Uniformity(r));
    }
    let f = |x: T| rho_function(r, x, equation);
    let mut lo = lower_end::<T>(r, equation);
    let mut hi = T::of(100.0);
    let f_lo = f(lo);
    if f_lo == T::zero() {
        return finish(r, lo, T::zero(), (lo, lo), tol);
    }
    if !(f_lo < T::zero()) {
        return Err(RhoError::NoSignChange {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    let mut doublings = 0;
    while !(f(hi) >= T::zero()) {
        hi = hi + hi;
        doublings += 1;
        if doublings > 60 || !hi.is_finite() {
            return Err(RhoError::NoSignChange {
                lo: lo.as_f64(),
                hi: hi.as_f64(),
            });
        }
    }
    let bracket = (lo, hi);
    let two = T::of(2.0);
    loop {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == T::zero() {
            return finish(r, mid, fm, bracket, tol);
        }
        if fm < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (flo, fhi) = (f(lo), f(hi));
    let (rho, res) = if flo.abs() <= fhi.abs() { (lo, flo) } else { (hi, fhi) };
    finish(r, rho, res, bracket, tol)
}

fn finish<T: Scalar>(_r: usize, rho: T, residual: T, bracket: (T, T), tol: T) -> Result<RhoRoot<T>, RhoError> {
    if residual.abs() > tol {
        return Err(RhoError::ToleranceUnattainable {
            rho: rho.as_f64(),
            residual: residual.as_f64(),
            tol: tol.as_f64(),
        });
    }
    Ok(RhoRoot {
        rho,
        residual,
        bracket,
        rho_int: rho.floor().as_f64() as usize + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_roots() {
        let r3 = rho_threshold::<f64>(3, 1e-12, RhoEquation::Standard).unwrap();
        assert!((r3.rho - 3.0).abs() < 1e-9, "{}", r3.rho);
        assert_eq!(r3.rho_int, 4);
        let r4 = rho_threshold::<f64>(4, 1e-12, RhoEquation::Standard).unwrap();
        assert!((r4.rho - 5.500754168813223).abs() < 1e-9);
        let r5 = rho_threshold::<f64>(5, 1e-12, RhoEquation::Standard).unwrap();
        assert!((r5.rho - 11.997_801_393_348_4).abs() < 1e-9);
        assert_eq!(r5.rho_int, 12);
    }

    #[test]
    fn single_precision() {
        let r4 = rho_threshold::<f32>(4, 1e-4, RhoEquation::Standard).unwrap();
        assert!((r4.rho - 5.500754).abs() < 1e-4);
        assert!(r4.residual.abs() <= 1e-4);
        assert!(matches!(
            rho_threshold::<f64>(4, -1.0, RhoEquation::Standard),
            Err(RhoError::ToleranceUnattainable { .. })
        ));
    }

    #[test]
    fn literal_d_matches_standard_at_d_equal_rho() {
        let root = rho_threshold::<f64>(4, 1e-12, RhoEquation::Standard).unwrap();
        let v = rho_function(4, root.rho, RhoEquation::LiteralD { d: root.rho });
        assert!(v.abs() < 1e-10);
        let lit = rho_threshold::<f64>(4, 1e-10, RhoEquation::LiteralD { d: 5.0 }).unwrap();
        assert!(lit.rho > 2.0);
        assert!(rho_function(4, lit.rho, RhoEquation::LiteralD { d: 5.0 }).abs() < 1e-10);
        // small d makes f positive already at the left end
        assert!(matches!(
            rho_threshold::<f64>(4, 1e-10, RhoEquation::LiteralD { d: 1.0 }),
            Err(RhoError::NoSignChange { .. })
        ));
    }

    #[test]
    fn rejects_small_r() {
        assert_eq!(
            rho_threshold::<f64>(2, 1e-12, RhoEquation::Standard),
            Err(RhoError::Uniformity(2))
        );
    }
}
