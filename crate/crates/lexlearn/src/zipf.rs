//! Right-truncated power-law degree sequences.
//!
//! A sequence over `n` forms assigns rank `i` the degree
//!
//! ```text
//! mu_i = ((n-1)/i)^tau   for i = 1..n-1,    mu_n = 0,    tau = alpha/(phi+1)
//! ```
//!
//! so the last linked rank has degree exactly one, one form stays unlinked
//! (the newcomer whose strategy choice is under study), and the induced
//! form marginal under bias `phi` is `p(s_i) = mu_i^{phi+1} / M_phi
//! proportional to i^{-alpha}`: a Zipf law with exponent `alpha` regardless
//! of `phi`. Degrees are real-valued by default; [`DegreeMode::Discrete`]
//! rounds half-to-even for honest finite graphs, which moves each degree by
//! at most one half.

use crate::error::{Error, Result};
use crate::fmt::g17;
use crate::scalar::{real, Real};

/// Whether degrees stay real-valued or are rounded to integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeMode {
    Continuous,
    Discrete,
}

impl DegreeMode {
    pub fn tag(self) -> &'static str {
        match self {
            DegreeMode::Continuous => "continuous",
            DegreeMode::Discrete => "discrete",
        }
    }
}

/// A generated degree sequence, ranks descending, last entry zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeSequence<R: Real> {
    n: usize,
    alpha: R,
    phi: R,
    mode: DegreeMode,
    tau: R,
    degrees: Vec<R>,
    clamped: bool,
}

fn round_half_even<R: Real>(v: R) -> R {
    let half = R::from_f64(0.5).expect("0.5 must be representable");
    let f = v.floor();
    let frac = v - f;
    if frac > half {
        f + R::one()
    } else if frac < half {
        f
    } else {
        // exactly .5: pick the even neighbor
        let is_even = (f * half).fract() == R::zero();
        if is_even {
            f
        } else {
            f + R::one()
        }
    }
}

/// Generate the sequence for `n >= 2` forms with exponent `alpha >= 0`
/// under bias `phi >= 0`.
pub fn generate<R: Real>(n: usize, alpha: R, phi: R, mode: DegreeMode) -> Result<DegreeSequence<R>> {
    if n < 2 {
        return Err(Error::domain(format!(
            "a degree sequence needs at least 2 forms, got {n}"
        )));
    }
    if !(alpha >= R::zero()) || !alpha.is_finite() {
        return Err(Error::domain(format!("alpha must be finite and >= 0, got {alpha}")));
    }
    if !(phi >= R::zero()) || !phi.is_finite() {
        return Err(Error::domain(format!("phi must be finite and >= 0, got {phi}")));
    }
    let tau = alpha / (phi + R::one());
    let top = real::<R>(n - 1);
    let mut clamped = false;
    let mut degrees = Vec::with_capacity(n);
    for i in 1..n {
        // ((n-1)/i)^tau; the ratio form makes rank n-1 exactly one.
        let mut d = (top / real::<R>(i)).powf(tau);
        if mode == DegreeMode::Discrete {
            d = round_half_even(d);
            if d < R::one() {
                d = R::one();
                clamped = true;
            }
        }
        degrees.push(d);
    }
    degrees.push(R::zero());
    Ok(DegreeSequence {
        n,
        alpha,
        phi,
        mode,
        tau,
        degrees,
        clamped,
    })
}

/// Largest degree admissible for the attachment target: the rank-1 degree
/// `(n-1)^{alpha/(phi+1)}`.
pub fn degree_cap<R: Real>(n: usize, alpha: R, phi: R) -> R {
    real::<R>(n - 1).powf(alpha / (phi + R::one()))
}

/// Integral bounds on the truncated harmonic-like sum
/// `sum_{i=1}^{n-1} i^{-tau}`.
pub fn harmonic_bounds<R: Real>(tau: R, n: usize) -> (R, R) {
    let one = R::one();
    if tau == one {
        (real::<R>(n).ln(), one + real::<R>(n - 1).ln())
    } else {
        let lo = (one - real::<R>(n).powf(one - tau)) / (tau - one);
        let hi = one + (one - real::<R>(n - 1).powf(one - tau)) / (tau - one);
        (lo, hi)
    }
}

/// Bounds on the total number of links `M = (n-1)^tau sum_{i<n} i^{-tau}`.
pub fn links_bounds<R: Real>(tau: R, n: usize) -> (R, R) {
    let scale = real::<R>(n - 1).powf(tau);
    let (lo, hi) = harmonic_bounds(tau, n);
    (scale * lo, scale * hi)
}

/// Result of fitting the induced form marginal against a pure power law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalCheck<R: Real> {
    /// Exponent recovered by least squares on `(log i, log p_i)`.
    pub alpha_fit: R,
    /// Fitted prefactor, to compare against `(n-1)^alpha / M_phi`.
    pub c_prime: R,
    /// Whether the marginal is an exact power law (continuous mode).
    pub exact: bool,
}

/// Fit `log p(s_i) = log c' - a log i` over the linked ranks.
pub fn marginal_check<R: Real>(seq: &DegreeSequence<R>) -> Result<MarginalCheck<R>> {
    let ranks = seq.n - 1;
    if ranks < 2 {
        return Err(Error::domain(
            "marginal fit needs at least two linked ranks".to_string(),
        ));
    }
    let (_, m_phi) = seq.sufficient_stats();
    let exponent = seq.phi + R::one();
    let mut sx = R::zero();
    let mut sy = R::zero();
    let mut sxx = R::zero();
    let mut sxy = R::zero();
    for i in 1..=ranks {
        let x = real::<R>(i).ln();
        let p = seq.degrees[i - 1].powf(exponent) / m_phi;
        let y = p.ln();
        sx = sx + x;
        sy = sy + y;
        sxx = sxx + x * x;
        sxy = sxy + x * y;
    }
    let count = real::<R>(ranks);
    let denom = count * sxx - sx * sx;
    let slope = (count * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / count;
    Ok(MarginalCheck {
        alpha_fit: -slope,
        c_prime: intercept.exp(),
        exact: seq.mode == DegreeMode::Continuous,
    })
}

impl<R: Real> DegreeSequence<R> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> R {
        self.alpha
    }

    pub fn phi(&self) -> R {
        self.phi
    }

    pub fn mode(&self) -> DegreeMode {
        self.mode
    }

    pub fn tau(&self) -> R {
        self.tau
    }

    /// True when discrete rounding had to lift a degree back up to one.
    pub fn clamped(&self) -> bool {
        self.clamped
    }

    /// All `n` degrees, rank order; the last entry is zero.
    pub fn degrees(&self) -> &[R] {
        &self.degrees
    }

    /// Degree of 1-based rank `i`.
    pub fn degree(&self, rank: usize) -> R {
        self.degrees[rank - 1]
    }

    /// Total number of links `M`.
    pub fn links(&self) -> R {
        self.degrees.iter().copied().sum()
    }

    /// The rank-1 degree, the feasibility cap for attachment targets.
    pub fn max_degree(&self) -> R {
        self.degrees[0]
    }

    /// The pair `(X(S,R), M_phi) = (sum mu^{phi+1} log mu, sum mu^{phi+1})`
    /// needed by the counterpart-capped closed form.
    pub fn sufficient_stats(&self) -> (R, R) {
        let exponent = self.phi + R::one();
        let mut x_sr = R::zero();
        let mut m_phi = R::zero();
        for &d in &self.degrees {
            if d > R::zero() {
                let w = d.powf(exponent);
                m_phi = m_phi + w;
                x_sr = x_sr + w * d.ln();
            }
        }
        (x_sr, m_phi)
    }

    /// Single-column CSV with a comment line recording the parameters.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# n={} alpha={} phi={} mode={}\ndegree\n",
            self.n,
            self.alpha,
            self.phi,
            self.mode.tag()
        );
        for &d in &self.degrees {
            out.push_str(&g17(d.to_f64().expect("degree fits in f64")));
            out.push('\n');
        }
        out
    }
}

/// Smallest `alpha` for which a target degree `mu_k` is feasible at the
/// given `(n, phi)`: solves `(n-1)^{alpha/(phi+1)} = mu_k`.
pub fn alpha_threshold<R: Real>(mu_k: R, n: usize, phi: R) -> R {
    (phi + R::one()) * mu_k.ln() / real::<R>(n - 1).ln()
}
