//! Safeguarded Newton iteration with bisection fallback for monotone scalar
//! equations.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Stopping rules for [`decreasing_root`].
#[derive(Debug, Clone, Copy)]
pub struct RootOptions<T> {
    /// Required `|f(x)|` at the returned root.
    pub tol: T,
    pub max_iter: usize,
    /// Largest `|x|` explored while bracketing.
    pub max_abs_x: T,
}

#[derive(Debug, Clone, Copy)]
pub struct Root<T> {
    pub x: T,
    pub value: T,
    pub iterations: usize,
}

/// Finds the root of a strictly decreasing function.
///
/// `f` returns the value and derivative at a point. Starting from zero the
/// bracket is grown geometrically until the sign changes, then Newton steps
/// are taken whenever they stay inside the bracket and bisection otherwise.
/// Iteration continues past `|f| <= tol` until the Newton correction is at
/// the rounding level, so two independent evaluations of the same function
/// agree on the root to near machine precision.
pub fn decreasing_root<T, F>(mut f: F, opts: RootOptions<T>) -> Result<Root<T>>
where
    T: Real,
    F: FnMut(T) -> Result<(T, T)>,
{
    let mut iterations = 0;
    let (f0, d0) = f(T::zero())?;
    if f0 == T::zero() {
        return Ok(Root {
            x: T::zero(),
            value: f0,
            iterations,
        });
    }

    // Bracket [lo, hi] with f(lo) > 0 > f(hi).
    let dir = if f0 > T::zero() { T::one() } else { -T::one() };
    let mut inner = T::zero();
    let mut step = T::one();
    let mut outer;
    loop {
        outer = dir * step;
        let (v, _) = f(outer)?;
        iterations += 1;
        if (v > T::zero()) != (f0 > T::zero()) || v == T::zero() {
            break;
        }
        inner = outer;
        step *= T::lit(2.0);
        if step > opts.max_abs_x {
            return Err(Error::infeasible(format!(
                "no sign change within |x| <= {}",
                opts.max_abs_x.as_f64()
            )));
        }
    }
    let (mut lo, mut hi) = if dir > T::zero() {
        (inner, outer)
    } else {
        (outer, inner)
    };

    let eps = T::default_epsilon();
    let mut x = T::zero();
    let (mut fx, mut dx) = (f0, d0);
    if x < lo || x > hi {
        x = (lo + hi) * T::lit(0.5);
        let r = f(x)?;
        fx = r.0;
        dx = r.1;
    }

    loop {
        if fx == T::zero() {
            break;
        }
        if fx > T::zero() {
            lo = x;
        } else {
            hi = x;
        }
        let width = hi - lo;
        let scale = T::one() + x.abs();
        let newton = if dx < T::zero() {
            Some(x - fx / dx)
        } else {
            None
        };
        if fx.abs() <= opts.tol {
            let settled = match newton {
                Some(n) => (n - x).abs() <= T::lit(8.0) * eps * scale,
                None => true,
            };
            if settled || width <= T::lit(4.0) * eps * scale {
                break;
            }
        }
        if iterations >= opts.max_iter {
            return Err(Error::MaxIterExceeded {
                iterations,
                residual: fx.abs().as_f64(),
            });
        }
        let candidate = match newton {
            Some(n) if n > lo && n < hi => n,
            _ => (lo + hi) * T::lit(0.5),
        };
        if candidate == x {
            break;
        }
        x = candidate;
        let r = f(x)?;
        fx = r.0;
        dx = r.1;
        iterations += 1;
    }
    Ok(Root {
        x,
        value: fx,
        iterations,
    })
}
