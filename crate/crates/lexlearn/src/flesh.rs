//! Probabilities and entropies on top of a skeleton.
//!
//! Every edge `(i, j)` gets an unnormalized weight `(mu_i * omega_j)^phi`,
//! where `mu_i` and `omega_j` are the plain degrees. Writing `M_phi` for the
//! sum of all edge weights, the joint distribution is
//!
//! ```text
//! p(s_i, r_j) = a_ij (mu_i omega_j)^phi / M_phi
//! ```
//!
//! `phi = 0` recovers the uniform distribution over edges; larger `phi`
//! concentrates mass on well-connected pairs. Marginals factor through the
//! weighted degrees
//!
//! ```text
//! mu_{phi,i}    = sum_{j in Gamma(i)} omega_j^phi
//! omega_{phi,j} = sum_{i in Gamma(j)} mu_i^phi
//! p(s_i) = mu_i^phi mu_{phi,i} / M_phi
//! p(r_j) = omega_j^phi omega_{phi,j} / M_phi
//! ```
//!
//! and the entropies collapse to sums of `x log x` terms over vertices and
//! edges, which is what [`entropies`] evaluates. The communication cost
//! blends them:
//!
//! ```text
//! Omega(lambda) = -lambda I(S;R) + (1 - lambda) H(S)
//!               = (1 - 2 lambda) H(S) - lambda H(R) + lambda H(S,R)
//! ```

use crate::error::{Error, Result};
use crate::scalar::{real, xlogx, Real};
use crate::skeleton::Skeleton;

/// Flesh parameter: the degree-bias exponent `phi >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FleshParams<R: Real> {
    phi: R,
}

impl<R: Real> FleshParams<R> {
    pub fn new(phi: R) -> Result<Self> {
        if !(phi.is_finite() && phi >= R::zero()) {
            return Err(Error::domain(format!("phi must be finite and >= 0, got {phi}")));
        }
        Ok(FleshParams { phi })
    }

    pub fn phi(&self) -> R {
        self.phi
    }
}

/// Cost parameter: the decoder/encoder trade-off `lambda` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams<R: Real> {
    lambda: R,
}

impl<R: Real> CostParams<R> {
    pub fn new(lambda: R) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= R::zero() && lambda <= R::one()) {
            return Err(Error::domain(format!("lambda must lie in [0, 1], got {lambda}")));
        }
        Ok(CostParams { lambda })
    }

    pub fn lambda(&self) -> R {
        self.lambda
    }
}

/// The three entropies plus the mutual information they determine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyBundle<R: Real> {
    pub h_s: R,
    pub h_r: R,
    pub h_sr: R,
    pub mi: R,
}

impl<R: Real> EntropyBundle<R> {
    pub fn new(h_s: R, h_r: R, h_sr: R) -> Self {
        EntropyBundle {
            h_s,
            h_r,
            h_sr,
            mi: h_s + h_r - h_sr,
        }
    }

    /// `Omega(lambda) = (1 - 2 lambda) H(S) - lambda H(R) + lambda H(S,R)`.
    pub fn cost(&self, cp: CostParams<R>) -> R {
        let l = cp.lambda();
        let one = R::one();
        (one - l - l) * self.h_s - l * self.h_r + l * self.h_sr
    }
}

/// Normalizer `M_phi`: the total edge weight. Zero for an empty skeleton.
pub fn normalizer<R: Real>(sk: &Skeleton, fp: FleshParams<R>) -> R {
    sk.edges()
        .map(|(i, j)| edge_weight(sk, fp.phi(), i, j))
        .sum()
}

/// Joint probability `p(s_i, r_j)`; zero for non-edges.
pub fn joint_probability<R: Real>(
    sk: &Skeleton,
    fp: FleshParams<R>,
    i: usize,
    j: usize,
) -> Result<R> {
    check_indices(sk, i, j)?;
    if sk.links() == 0 {
        return Err(Error::UndefinedDistribution);
    }
    if !sk.has_edge(i, j) {
        return Ok(R::zero());
    }
    Ok(edge_weight(sk, fp.phi(), i, j) / normalizer(sk, fp))
}

/// Weighted form degree `mu_{phi,i}`.
pub fn weighted_form_degree<R: Real>(sk: &Skeleton, fp: FleshParams<R>, i: usize) -> R {
    sk.form_neighbors(i)
        .iter()
        .map(|&j| real::<R>(sk.counterpart_degree(j)).powf(fp.phi()))
        .sum()
}

/// Weighted counterpart degree `omega_{phi,j}`.
pub fn weighted_counterpart_degree<R: Real>(sk: &Skeleton, fp: FleshParams<R>, j: usize) -> R {
    sk.counterpart_neighbors(j)
        .iter()
        .map(|&i| real::<R>(sk.form_degree(i)).powf(fp.phi()))
        .sum()
}

/// Marginal distributions `(p(s_1..n), p(r_1..m))`.
pub fn marginals<R: Real>(sk: &Skeleton, fp: FleshParams<R>) -> Result<(Vec<R>, Vec<R>)> {
    if sk.links() == 0 {
        return Err(Error::UndefinedDistribution);
    }
    let phi = fp.phi();
    let m_phi = normalizer(sk, fp);
    let p_s = (1..=sk.forms())
        .map(|i| real::<R>(sk.form_degree(i)).powf(phi) * weighted_form_degree(sk, fp, i) / m_phi)
        .collect();
    let p_r = (1..=sk.counterparts())
        .map(|j| {
            real::<R>(sk.counterpart_degree(j)).powf(phi) * weighted_counterpart_degree(sk, fp, j)
                / m_phi
        })
        .collect();
    Ok((p_s, p_r))
}

/// Joint, form, and counterpart entropies in nats.
///
/// Uses the log-sum forms: with `X(S,R) = sum_edges w log(mu omega)`,
/// `x(s_i) = x log x` of the unnormalized form mass (and symmetrically for
/// counterparts),
///
/// ```text
/// H(S,R) = log M_phi - phi X(S,R) / M_phi
/// H(S)   = log M_phi - X(S) / M_phi
/// H(R)   = log M_phi - X(R) / M_phi
/// ```
///
/// At `phi = 0` the joint entropy is exactly `log M`.
pub fn entropies<R: Real>(sk: &Skeleton, fp: FleshParams<R>) -> Result<EntropyBundle<R>> {
    if sk.links() == 0 {
        return Err(Error::UndefinedDistribution);
    }
    let phi = fp.phi();
    let mut m_phi = R::zero();
    let mut x_sr = R::zero();
    for (i, j) in sk.edges() {
        let prod = real::<R>(sk.form_degree(i) * sk.counterpart_degree(j));
        let w = prod.powf(phi);
        m_phi = m_phi + w;
        x_sr = x_sr + w * prod.ln();
    }
    let x_s: R = (1..=sk.forms())
        .map(|i| xlogx(real::<R>(sk.form_degree(i)).powf(phi) * weighted_form_degree(sk, fp, i)))
        .sum();
    let x_r: R = (1..=sk.counterparts())
        .map(|j| {
            xlogx(
                real::<R>(sk.counterpart_degree(j)).powf(phi)
                    * weighted_counterpart_degree(sk, fp, j),
            )
        })
        .sum();
    let log_m = m_phi.ln();
    Ok(EntropyBundle::new(
        log_m - x_s / m_phi,
        log_m - x_r / m_phi,
        log_m - phi * x_sr / m_phi,
    ))
}

/// Communication cost `Omega(lambda)` of a fleshed skeleton.
pub fn cost<R: Real>(sk: &Skeleton, fp: FleshParams<R>, cp: CostParams<R>) -> Result<R> {
    Ok(entropies(sk, fp)?.cost(cp))
}

fn edge_weight<R: Real>(sk: &Skeleton, phi: R, i: usize, j: usize) -> R {
    real::<R>(sk.form_degree(i) * sk.counterpart_degree(j)).powf(phi)
}

fn check_indices(sk: &Skeleton, i: usize, j: usize) -> Result<()> {
    if i == 0 || i > sk.forms() {
        return Err(Error::FormIndexOutOfRange {
            index: i,
            n: sk.forms(),
        });
    }
    if j == 0 || j > sk.counterparts() {
        return Err(Error::CounterpartIndexOutOfRange {
            index: j,
            m: sk.counterparts(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn path() -> Skeleton {
        Skeleton::new(2, 2, &[(1, 1), (1, 2), (2, 2)]).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FleshParams::new(-0.5).is_err());
        assert!(FleshParams::new(f64::NAN).is_err());
        assert!(CostParams::new(-0.1).is_err());
        assert!(CostParams::new(1.1).is_err());
    }

    #[test]
    fn joint_at_phi_one() {
        let sk = path();
        let fp = FleshParams::new(1.0_f64).unwrap();
        // Edge weights 2, 4, 2 -> M_phi = 8.
        assert!((normalizer(&sk, fp) - 8.0).abs() < TOL);
        assert!((joint_probability(&sk, fp, 1, 2).unwrap() - 0.5).abs() < TOL);
        assert_eq!(joint_probability(&sk, fp, 2, 1).unwrap(), 0.0);
        assert!(joint_probability(&sk, fp, 3, 1).is_err());
    }

    #[test]
    fn marginals_at_phi_one() {
        let sk = path();
        let fp = FleshParams::new(1.0_f64).unwrap();
        let (p_s, p_r) = marginals(&sk, fp).unwrap();
        assert!((p_s[0] - 0.75).abs() < TOL);
        assert!((p_s[1] - 0.25).abs() < TOL);
        assert!((p_r[0] - 0.25).abs() < TOL);
        assert!((p_r[1] - 0.75).abs() < TOL);
    }

    #[test]
    fn marginals_are_row_and_column_sums() {
        let sk = Skeleton::new(3, 4, &[(1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (1, 4)]).unwrap();
        for &phi in &[0.0, 0.7, 1.0, 2.3] {
            let fp = FleshParams::new(phi).unwrap();
            let (p_s, p_r) = marginals(&sk, fp).unwrap();
            let mut total = 0.0;
            for i in 1..=sk.forms() {
                let row: f64 = (1..=sk.counterparts())
                    .map(|j| joint_probability(&sk, fp, i, j).unwrap())
                    .sum();
                assert!((row - p_s[i - 1]).abs() < TOL);
                total += row;
            }
            assert!((total - 1.0).abs() < TOL);
            for j in 1..=sk.counterparts() {
                let col: f64 = (1..=sk.forms())
                    .map(|i| joint_probability(&sk, fp, i, j).unwrap())
                    .sum();
                assert!((col - p_r[j - 1]).abs() < TOL);
            }
        }
    }

    #[test]
    fn entropies_at_phi_zero_are_uniform_over_edges() {
        let sk = path();
        let fp = FleshParams::new(0.0).unwrap();
        let b = entropies(&sk, fp).unwrap();
        // phi = 0: exactly log M, no tolerance.
        assert_eq!(b.h_sr, 3.0_f64.ln());
        let expect_h_s = (2.0 / 3.0) * (1.5_f64).ln() + (1.0 / 3.0) * 3.0_f64.ln();
        assert!((b.h_s - expect_h_s).abs() < TOL);
        assert!((b.mi - (b.h_s + b.h_r - b.h_sr)).abs() < TOL);
    }

    #[test]
    fn unlinked_vertices_carry_no_mass() {
        let sk = Skeleton::new(3, 3, &[(1, 1), (2, 1)]).unwrap();
        let fp = FleshParams::new(1.3_f64).unwrap();
        let (p_s, p_r) = marginals(&sk, fp).unwrap();
        assert_eq!(p_s[2], 0.0);
        assert_eq!(p_r[1], 0.0);
        assert_eq!(p_r[2], 0.0);
        let b = entropies(&sk, fp).unwrap();
        assert!(b.h_r.abs() < TOL); // all counterpart mass on one vertex
    }

    #[test]
    fn empty_skeleton_has_no_distribution() {
        let sk = Skeleton::empty(2, 2).unwrap();
        let fp = FleshParams::new(1.0).unwrap();
        assert!(matches!(entropies(&sk, fp), Err(Error::UndefinedDistribution)));
        assert!(matches!(
            joint_probability(&sk, fp, 1, 1),
            Err(Error::UndefinedDistribution)
        ));
        assert_eq!(normalizer(&sk, fp), 0.0);
    }

    #[test]
    fn cost_forms_agree() {
        let sk = path();
        for &phi in &[0.0_f64, 0.5, 1.0, 2.0] {
            let fp = FleshParams::new(phi).unwrap();
            let b = entropies(&sk, fp).unwrap();
            for &l in &[0.0, 0.25, 0.5, 0.75, 1.0] {
                let cp = CostParams::new(l).unwrap();
                let direct = cost(&sk, fp, cp).unwrap();
                let via_mi = -l * b.mi + (1.0 - l) * b.h_s;
                assert!((direct - via_mi).abs() < TOL);
            }
        }
    }

    #[test]
    fn cost_extremes() {
        let sk = path();
        let fp = FleshParams::new(1.0).unwrap();
        let b = entropies(&sk, fp).unwrap();
        let at = |l: f64| cost(&sk, fp, CostParams::new(l).unwrap()).unwrap();
        assert!((at(0.0) - b.h_s).abs() < TOL);
        assert!((at(1.0) + b.mi).abs() < TOL);
    }
}
