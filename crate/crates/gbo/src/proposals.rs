//! Parametric temporal proposals.
//!
//! A proposal is a symmetric, unimodal confidence curve `M(t)` on the
//! normalized timeline, parameterized by a kind, a center `c` in `[0, 1]`,
//! and a width `w > 0`. Every kind peaks at exactly `M(c) = 1` and decays
//! monotonically with `|t - c|`. The predicted width is mapped to an
//! effective scale `w / sigma_kind` using a fixed table of per-kind scale
//! constants derived from a single base value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The eight supported proposal curve shapes.
///
/// Serialized as lowercase snake_case strings, e.g. `"gauss"`, `"student_t"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    Gauss,
    Laplace,
    Cauchy,
    Triangular,
    Epanechnikov,
    Logistic,
    StudentT,
    RationalQuadratic,
}

impl KernelKind {
    /// All variants, in declaration order.
    pub const ALL: [KernelKind; 8] = [
        KernelKind::Gauss,
        KernelKind::Laplace,
        KernelKind::Cauchy,
        KernelKind::Triangular,
        KernelKind::Epanechnikov,
        KernelKind::Logistic,
        KernelKind::StudentT,
        KernelKind::RationalQuadratic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            KernelKind::Gauss => "gauss",
            KernelKind::Laplace => "laplace",
            KernelKind::Cauchy => "cauchy",
            KernelKind::Triangular => "triangular",
            KernelKind::Epanechnikov => "epanechnikov",
            KernelKind::Logistic => "logistic",
            KernelKind::StudentT => "student_t",
            KernelKind::RationalQuadratic => "rational_quadratic",
        }
    }

    /// Triangular and Epanechnikov curves vanish outside `|t - c| <= scale`.
    pub fn has_compact_support(self) -> bool {
        matches!(self, KernelKind::Triangular | KernelKind::Epanechnikov)
    }
}

impl std::fmt::Display for KernelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        KernelKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

/// Per-kind scale constants, all derived from a single Gaussian base.
///
/// With the default base of 9: `sigma_laplace = sigma_cauchy = 9`,
/// `sigma_tri = sigma_epa = 4.5`, `sigma_log = 13.5`, `nu = 2.25`,
/// `alpha = 4.5`, `sigma_t = 4 * sqrt(nu / (nu - 2)) = 12`, and
/// `sigma_rq = 8 * sqrt(2 * alpha * (2^(1/alpha) - 1))` (about 9.794).
///
/// `nu = base / 4` sits barely above the `nu > 2` validity bound, which is
/// why `sigma_t` comes out as large as 12; the constructor rejects any base
/// at or below 8 where the Student's-t scale would be undefined.
///
/// Values are fixed at construction; there is no mutation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleConstants {
    sigma_gauss: f64,
    sigma_laplace: f64,
    sigma_cauchy: f64,
    sigma_tri: f64,
    sigma_epa: f64,
    sigma_log: f64,
    nu: f64,
    alpha: f64,
    sigma_t: f64,
    sigma_rq: f64,
}

impl ScaleConstants {
    pub const DEFAULT_SIGMA_GAUSS: f64 = 9.0;

    /// Derive the full constant table from the Gaussian base scale.
    pub fn new(sigma_gauss: f64) -> Result<Self> {
        if !sigma_gauss.is_finite() || sigma_gauss <= 8.0 {
            return Err(Error::InvalidScaleBase(sigma_gauss));
        }
        let nu = sigma_gauss / 4.0;
        let alpha = sigma_gauss / 2.0;
        Ok(ScaleConstants {
            sigma_gauss,
            sigma_laplace: sigma_gauss,
            sigma_cauchy: sigma_gauss,
            sigma_tri: sigma_gauss / 2.0,
            sigma_epa: sigma_gauss / 2.0,
            sigma_log: 1.5 * sigma_gauss,
            nu,
            alpha,
            sigma_t: 4.0 * (nu / (nu - 2.0)).sqrt(),
            sigma_rq: 8.0 * (2.0 * alpha * (2f64.powf(1.0 / alpha) - 1.0)).sqrt(),
        })
    }

    pub fn sigma_gauss(&self) -> f64 {
        self.sigma_gauss
    }

    /// Student's-t degrees of freedom (base / 4).
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Rational-quadratic shape parameter (base / 2).
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The divisor mapping a predicted width to the kind's effective scale.
    pub fn sigma_for(&self, kind: KernelKind) -> f64 {
        match kind {
            KernelKind::Gauss => self.sigma_gauss,
            KernelKind::Laplace => self.sigma_laplace,
            KernelKind::Cauchy => self.sigma_cauchy,
            KernelKind::Triangular => self.sigma_tri,
            KernelKind::Epanechnikov => self.sigma_epa,
            KernelKind::Logistic => self.sigma_log,
            KernelKind::StudentT => self.sigma_t,
            KernelKind::RationalQuadratic => self.sigma_rq,
        }
    }
}

impl Default for ScaleConstants {
    fn default() -> Self {
        ScaleConstants::new(Self::DEFAULT_SIGMA_GAUSS).expect("default base is valid")
    }
}

/// A validated proposal curve: kind, center, width, optional loss score.
///
/// The curve itself is defined on the whole real line (compact-support kinds
/// excepted); clipping to the `[0, 1]` timeline is the solver's concern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProposalKernel {
    kind: KernelKind,
    center: f64,
    width: f64,
    loss: Option<f64>,
}

impl ProposalKernel {
    pub fn new(kind: KernelKind, center: f64, width: f64) -> Result<Self> {
        if !center.is_finite() || !(0.0..=1.0).contains(&center) {
            return Err(Error::InvalidCenter(center));
        }
        if !width.is_finite() || width <= 0.0 {
            return Err(Error::InvalidWidth(width));
        }
        Ok(ProposalKernel {
            kind,
            center,
            width,
            loss: None,
        })
    }

    /// Attach the reconstruction-loss score produced by an upstream model.
    pub fn with_loss(mut self, loss: f64) -> Result<Self> {
        if !loss.is_finite() || loss < 0.0 {
            return Err(Error::InvalidLoss(loss));
        }
        self.loss = Some(loss);
        Ok(self)
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn loss(&self) -> Option<f64> {
        self.loss
    }

    /// The width divided by the kind's sigma constant.
    pub fn effective_scale(&self, scales: &ScaleConstants) -> f64 {
        self.width / scales.sigma_for(self.kind)
    }

    /// Evaluate the curve at `t`. Total for a valid kernel; the result is in
    /// `[0, 1]`, and compact-support kinds return exactly 0 outside support.
    pub fn evaluate(&self, scales: &ScaleConstants, t: f64) -> f64 {
        // everything goes through z = x / a so the peak stays exactly 1
        // even when the scale is small enough that a * a would underflow
        let z = (t - self.center) / self.effective_scale(scales);
        match self.kind {
            KernelKind::Gauss => (-0.5 * z * z).exp(),
            KernelKind::Laplace => (-z.abs()).exp(),
            KernelKind::Cauchy => 1.0 / (1.0 + z * z),
            KernelKind::Triangular => (1.0 - z.abs()).max(0.0),
            KernelKind::Epanechnikov => (1.0 - z * z).max(0.0),
            KernelKind::Logistic => {
                let s = sigmoid(z);
                4.0 * s * (1.0 - s)
            }
            KernelKind::StudentT => {
                let nu = scales.nu();
                (1.0 + z * z / nu).powf(-(nu + 1.0) / 2.0)
            }
            KernelKind::RationalQuadratic => {
                let alpha = scales.alpha();
                (1.0 + z * z / (2.0 * alpha)).powf(-alpha)
            }
        }
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}
