//! Adaptive Simpson quadrature.
//!
//! The integrands here are smooth except for isolated kinks (Laplace center,
//! compact-support edges), which subdivision handles; depth 40 allows the
//! interval to shrink by a factor of 2^40 around such points.

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
const MAX_DEPTH: u32 = 40;

/// Integrate `f` over `[a, b]` (`a <= b`) to the given absolute tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a >= b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let (m, fm, whole) = simpson(&f, a, fa, b, fb);
    adapt(&f, a, fa, m, fm, b, fb, whole, tol, 0)
}

fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let (ml, fml, left) = simpson(f, a, fa, m, fm);
    let (mr, fmr, right) = simpson(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth >= MAX_DEPTH || delta.abs() <= 15.0 * tol {
        // Richardson extrapolation knocks out the leading error term.
        left + right + delta / 15.0
    } else {
        let half_tol = 0.5 * tol;
        adapt(f, a, fa, ml, fml, m, fm, left, half_tol, depth + 1)
            + adapt(f, m, fm, mr, fmr, b, fb, right, half_tol, depth + 1)
    }
}
