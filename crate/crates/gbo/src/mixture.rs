//! Mixture proposals.
//!
//! A mixture proposal carries several (center, width) components. It is
//! reduced to a single effective Gaussian by spanning the earliest component
//! start `c_n - w_n/2` to the latest component end `c_n + w_n/2`; the span's
//! midpoint and length become the effective center and width, which then go
//! through the Gaussian closed form and are clipped to the timeline.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::proposals::ScaleConstants;
use crate::solver::{gaussian_coverage_between, solve_gaussian, GboSolution, PenaltyWeight};

/// One (center, width) component of a mixture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub center: f64,
    pub width: f64,
}

/// A validated mixture proposal: at least one component, optional loss.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureProposal {
    components: Vec<MixtureComponent>,
    loss: Option<f64>,
}

impl MixtureProposal {
    pub fn new(components: Vec<MixtureComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptyMixture);
        }
        for comp in &components {
            if !comp.center.is_finite() || !(0.0..=1.0).contains(&comp.center) {
                return Err(Error::InvalidCenter(comp.center));
            }
            // Widths near zero are accepted; they contribute point bounds.
            if !comp.width.is_finite() || comp.width <= 0.0 {
                return Err(Error::InvalidWidth(comp.width));
            }
        }
        Ok(MixtureProposal {
            components,
            loss: None,
        })
    }

    pub fn with_loss(mut self, loss: f64) -> Result<Self> {
        if !loss.is_finite() || loss < 0.0 {
            return Err(Error::InvalidLoss(loss));
        }
        self.loss = Some(loss);
        Ok(self)
    }

    pub fn components(&self) -> &[MixtureComponent] {
        &self.components
    }

    pub fn loss(&self) -> Option<f64> {
        self.loss
    }

    /// Per-component half-width bounds `(c_n - w_n/2, c_n + w_n/2)`, in
    /// input order.
    pub fn component_bounds(&self) -> Vec<(f64, f64)> {
        self.components
            .iter()
            .map(|c| (c.center - 0.5 * c.width, c.center + 0.5 * c.width))
            .collect()
    }

    /// Effective `(center, width)`: midpoint and length of the span from the
    /// earliest component start to the latest component end.
    ///
    /// A single component reduces to itself exactly (no round trip through
    /// the half-width bounds), which keeps the one-component mixture
    /// bitwise identical to the plain single-Gaussian path.
    pub fn effective_params(&self) -> (f64, f64) {
        if let [only] = self.components[..] {
            return (only.center, only.width);
        }
        let bounds = self.component_bounds();
        let start = bounds.iter().map(|b| b.0).fold(f64::INFINITY, f64::min);
        let end = bounds.iter().map(|b| b.1).fold(f64::NEG_INFINITY, f64::max);
        (0.5 * (start + end), end - start)
    }
}

/// How the effective width enters the Gaussian boundary formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WidthConvention {
    /// Use the effective width directly as the Gaussian standard deviation.
    Raw,
    /// Divide the effective width by sigma_gauss first, matching the
    /// single-proposal effective-scale convention.
    Divided,
}

impl WidthConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            WidthConvention::Raw => "raw",
            WidthConvention::Divided => "divided",
        }
    }
}

impl std::str::FromStr for WidthConvention {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "raw" => Ok(WidthConvention::Raw),
            "divided" => Ok(WidthConvention::Divided),
            other => Err(format!("unknown width convention `{other}`")),
        }
    }
}

/// Reduce the mixture to its effective Gaussian, solve, and clip to `[0, 1]`.
///
/// The effective center always lies between the smallest and largest
/// component centers, so clipping never empties the segment. When clipping
/// moves a boundary, the reported objective is re-evaluated on the clipped
/// segment (which is the constrained optimum: the shifted-coverage integrand
/// is positive strictly inside the unclipped solution).
pub fn solve_mixture(
    mixture: &MixtureProposal,
    scales: &ScaleConstants,
    lambda: PenaltyWeight,
    convention: WidthConvention,
) -> Result<GboSolution> {
    let (center, width) = mixture.effective_params();
    let std_dev = match convention {
        WidthConvention::Raw => width,
        WidthConvention::Divided => width / scales.sigma_gauss(),
    };
    let unclipped = solve_gaussian(center, std_dev, lambda)?;
    if unclipped.degenerate {
        return Ok(unclipped);
    }
    let clipped = unclipped.segment.clip(0.0, 1.0);
    if clipped == unclipped.segment {
        return Ok(unclipped);
    }
    let coverage = gaussian_coverage_between(center, std_dev, clipped.start(), clipped.end());
    Ok(GboSolution {
        segment: clipped,
        objective: coverage - lambda.value() * clipped.length(),
        degenerate: clipped.is_degenerate(),
    })
}
