//! Boundary optimization core.
//!
//! Converts a proposal curve and a penalty weight into the segment that
//! maximizes coverage minus weighted length. Because every kernel is
//! symmetric and unimodal, the maximizer is the superlevel interval
//! `{t : f(t) >= lambda}` centered at the proposal peak: both endpoints sit
//! where the curve crosses the penalty weight. For `lambda >= 1` no point of
//! the curve reaches the threshold away from the peak and the optimum
//! degenerates to the center with objective zero.
//!
//! Solutions are produced in unclipped coordinates so the endpoint condition
//! holds exactly; restricting to the `[0, 1]` timeline is a separate `clip`
//! step (the clipped segment is still the constrained optimum because the
//! objective is separable and unimodal in each endpoint).

mod erf;
mod oracle;
pub mod quadrature;

pub use erf::erf;
pub use oracle::{oracle_maximize, oracle_maximize_in, ORACLE_CELL_BUDGET, ORACLE_DOMAIN};

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::proposals::{KernelKind, ProposalKernel, ScaleConstants};
use quadrature::{integrate, DEFAULT_TOLERANCE};

const BISECT_TOL: f64 = 1e-12;
const BISECT_MAX_ITERS: u32 = 200;
/// Bracket radius for bisection, in effective-scale units. Every supported
/// curve decays below any penalty weight of practical size well inside this.
const BISECT_BRACKET_SCALES: f64 = 60.0;

/// A closed interval on the timeline. Degenerate (`start == end`) is allowed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    start: f64,
    end: f64,
}

impl Segment {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !start.is_finite() || !end.is_finite() || start > end {
            return Err(Error::InvalidSegment { start, end });
        }
        Ok(Segment { start, end })
    }

    /// The degenerate segment at `t`.
    pub fn point(t: f64) -> Self {
        Segment { start: t, end: t }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.start + self.end)
    }

    pub fn is_degenerate(&self) -> bool {
        self.start == self.end
    }

    /// Intersect with `[lo, hi]`; an empty intersection collapses to the
    /// nearest clip boundary.
    pub fn clip(&self, lo: f64, hi: f64) -> Segment {
        debug_assert!(lo <= hi);
        if self.end < lo {
            Segment::point(lo)
        } else if self.start > hi {
            Segment::point(hi)
        } else {
            Segment {
                start: self.start.max(lo),
                end: self.end.min(hi),
            }
        }
    }
}

/// Nonnegative weight trading coverage against segment length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyWeight(f64);

impl PenaltyWeight {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidPenalty(value));
        }
        Ok(PenaltyWeight(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// An optimized segment with its objective value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GboSolution {
    pub segment: Segment,
    pub objective: f64,
    pub degenerate: bool,
}

/// Coverage of the proposal over the segment minus `lambda` times its length.
/// The integral uses adaptive Simpson quadrature to absolute tolerance 1e-10.
pub fn objective(
    kernel: &ProposalKernel,
    scales: &ScaleConstants,
    segment: &Segment,
    lambda: PenaltyWeight,
) -> f64 {
    let coverage = integrate(
        |t| kernel.evaluate(scales, t),
        segment.start,
        segment.end,
        DEFAULT_TOLERANCE,
    );
    coverage - lambda.value() * segment.length()
}

/// Closed-form optimum for a Gaussian curve with the given standard
/// deviation (callers decide whether that is a raw width or an effective
/// scale).
///
/// For `0 < lambda < 1` the boundaries are `center ± std_dev *
/// sqrt(-2 ln lambda)`, returned unclipped. `lambda >= 1` degenerates to the
/// center with objective zero. At `lambda = 0` the superlevel set is the
/// whole line, so the full (clipped) timeline `[0, 1]` is returned.
pub fn solve_gaussian(center: f64, std_dev: f64, lambda: PenaltyWeight) -> Result<GboSolution> {
    if !std_dev.is_finite() || std_dev <= 0.0 {
        return Err(Error::InvalidStdDev(std_dev));
    }
    let l = lambda.value();
    if l >= 1.0 {
        return Ok(GboSolution {
            segment: Segment::point(center),
            objective: 0.0,
            degenerate: true,
        });
    }
    if l == 0.0 {
        let segment = Segment::new(0.0, 1.0)?;
        let objective = gaussian_coverage_between(center, std_dev, 0.0, 1.0);
        return Ok(GboSolution {
            segment,
            objective,
            degenerate: false,
        });
    }
    let radius = std_dev * (-2.0 * l.ln()).sqrt();
    let segment = Segment::new(center - radius, center + radius)?;
    if segment.is_degenerate() {
        // radius below the representable resolution at this center
        return Ok(GboSolution {
            segment,
            objective: 0.0,
            degenerate: true,
        });
    }
    Ok(GboSolution {
        segment,
        objective: optimal_objective_gaussian(std_dev, l)?,
        degenerate: false,
    })
}

/// Superlevel-set optimum `{t : f(t) >= lambda}` for any kernel kind.
///
/// Uses the per-kind closed form for the crossing distance where one exists;
/// the logistic crossing is found by bisection. At `lambda = 0` the segment
/// is the full timeline for infinite-support kinds and the exact support for
/// compact-support kinds.
pub fn solve_levelset(
    kernel: &ProposalKernel,
    scales: &ScaleConstants,
    lambda: PenaltyWeight,
) -> GboSolution {
    let center = kernel.center();
    let scale = kernel.effective_scale(scales);
    if kernel.kind() == KernelKind::Gauss {
        return solve_gaussian(center, scale, lambda).expect("valid kernel has positive scale");
    }
    let l = lambda.value();
    if l >= 1.0 {
        return GboSolution {
            segment: Segment::point(center),
            objective: 0.0,
            degenerate: true,
        };
    }
    if l == 0.0 {
        let segment = if kernel.kind().has_compact_support() {
            Segment {
                start: center - scale,
                end: center + scale,
            }
        } else {
            Segment {
                start: 0.0,
                end: 1.0,
            }
        };
        let objective = if kernel.kind().has_compact_support() {
            coverage_at_radius(kernel, scales, scale)
        } else {
            integrate(
                |t| kernel.evaluate(scales, t),
                segment.start,
                segment.end,
                DEFAULT_TOLERANCE,
            )
        };
        return GboSolution {
            segment,
            objective,
            degenerate: false,
        };
    }
    let radius = superlevel_radius(kernel, scales, l);
    let segment = Segment {
        start: center - radius,
        end: center + radius,
    };
    if segment.is_degenerate() {
        // radius below the representable resolution at this center; the
        // segment is the degenerate limit, so keep the invariants exact
        return GboSolution {
            segment,
            objective: 0.0,
            degenerate: true,
        };
    }
    let coverage = coverage_at_radius(kernel, scales, radius);
    GboSolution {
        segment,
        objective: coverage - l * 2.0 * radius,
        degenerate: false,
    }
}

/// Exact integral of the Gaussian curve over its own superlevel interval:
/// `sqrt(2 pi) * std_dev * erf(sqrt(-ln lambda))`. Defined for `lambda` in
/// the open unit interval.
pub fn coverage_gaussian(std_dev: f64, lambda: f64) -> Result<f64> {
    if !std_dev.is_finite() || std_dev <= 0.0 {
        return Err(Error::InvalidStdDev(std_dev));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::PenaltyOutsideOpenUnit(lambda));
    }
    Ok((2.0 * PI).sqrt() * std_dev * erf((-lambda.ln()).sqrt()))
}

/// Objective value at the Gaussian closed-form optimum:
/// coverage minus `lambda * 2 * std_dev * sqrt(-2 ln lambda)`.
/// Strictly positive on `0 < lambda < 1`.
pub fn optimal_objective_gaussian(std_dev: f64, lambda: f64) -> Result<f64> {
    let coverage = coverage_gaussian(std_dev, lambda)?;
    Ok(coverage - lambda * 2.0 * std_dev * (-2.0 * lambda.ln()).sqrt())
}

/// Integral of a Gaussian with the given center and standard deviation over
/// an arbitrary interval, via the error function.
pub(crate) fn gaussian_coverage_between(center: f64, std_dev: f64, start: f64, end: f64) -> f64 {
    let denom = SQRT_2 * std_dev;
    std_dev * (PI / 2.0).sqrt() * (erf((end - center) / denom) - erf((start - center) / denom))
}

/// Distance from the center at which the curve crosses `level` (0 < level < 1).
fn superlevel_radius(kernel: &ProposalKernel, scales: &ScaleConstants, level: f64) -> f64 {
    let a = kernel.effective_scale(scales);
    match kernel.kind() {
        KernelKind::Gauss => a * (-2.0 * level.ln()).sqrt(),
        KernelKind::Laplace => a * -level.ln(),
        KernelKind::Cauchy => a * (1.0 / level - 1.0).sqrt(),
        KernelKind::Triangular => a * (1.0 - level),
        KernelKind::Epanechnikov => a * (1.0 - level).sqrt(),
        KernelKind::Logistic => {
            let center = kernel.center();
            let hi = center + BISECT_BRACKET_SCALES * a;
            if kernel.evaluate(scales, hi) >= level {
                // level is below the representable tail; the bracket edge is
                // the best finite answer
                BISECT_BRACKET_SCALES * a
            } else {
                bisect_level(|t| kernel.evaluate(scales, t), center, hi, level) - center
            }
        }
        KernelKind::StudentT => {
            let nu = scales.nu();
            a * (nu * (level.powf(-2.0 / (nu + 1.0)) - 1.0)).sqrt()
        }
        KernelKind::RationalQuadratic => {
            let alpha = scales.alpha();
            a * (2.0 * alpha * (level.powf(-1.0 / alpha) - 1.0)).sqrt()
        }
    }
}

/// Integral of the curve over `[center - radius, center + radius]`.
/// Elementary antiderivatives exist for six kinds; Student's-t and
/// rational-quadratic fall back to quadrature.
fn coverage_at_radius(kernel: &ProposalKernel, scales: &ScaleConstants, radius: f64) -> f64 {
    let a = kernel.effective_scale(scales);
    match kernel.kind() {
        KernelKind::Gauss => (2.0 * PI).sqrt() * a * erf(radius / (SQRT_2 * a)),
        KernelKind::Laplace => 2.0 * a * (1.0 - (-radius / a).exp()),
        KernelKind::Cauchy => 2.0 * a * (radius / a).atan(),
        KernelKind::Triangular => {
            let d = radius.min(a);
            2.0 * d - d * d / a
        }
        KernelKind::Epanechnikov => {
            let d = radius.min(a);
            2.0 * (d - d.powi(3) / (3.0 * a * a))
        }
        KernelKind::Logistic => 4.0 * a * (radius / (2.0 * a)).tanh(),
        KernelKind::StudentT | KernelKind::RationalQuadratic => {
            let c = kernel.center();
            integrate(
                |t| kernel.evaluate(scales, t),
                c - radius,
                c + radius,
                DEFAULT_TOLERANCE,
            )
        }
    }
}

/// Bisect the crossing of a nonincreasing function with `level` on `[lo, hi]`.
/// Requires `f(lo) >= level > f(hi)`.
fn bisect_level<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, level: f64) -> f64 {
    for _ in 0..BISECT_MAX_ITERS {
        if hi - lo <= BISECT_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) >= level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
