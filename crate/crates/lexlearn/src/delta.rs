//! Cost difference between the two attachment strategies.
//!
//! A new form `s_i` (degree zero) can be linked either to an unlinked
//! counterpart `r_{j_a}` (strategy a, mutual exclusivity) or to a counterpart
//! `r_{j_b}` that already has `omega_{j_b} >= 1` links (strategy b). Writing
//! `Omega'_a` and `Omega'_b` for the costs after each single-edge addition,
//!
//! ```text
//! Delta(lambda) = Omega'_a - Omega'_b
//! ```
//!
//! so `Delta < 0` favors mutual exclusivity. [`delta_general`] computes this
//! on any skeleton through the incremental update machinery. For two graph
//! families the post-mutation sufficient statistics have closed forms, and
//! `Delta` reduces to a *linear* function of `lambda`:
//!
//! - **vertex-capped** ([`delta_vertex_capped`]): all degrees at most one, so
//!   the skeleton is a partial matching with `M` links and the only inputs
//!   are `(lambda, phi, M)`;
//! - **counterpart-capped** ([`delta_counterpart_capped`]): counterpart
//!   degrees at most one, form degrees free. Inputs are `(lambda, phi,
//!   mu_k, X(S,R), M_phi)` where `mu_k` is the degree of the form already
//!   attached to `r_{j_b}` and the last two are the degree-sequence sums
//!   `sum mu_i^{phi+1} log mu_i` and `sum mu_i^{phi+1}`.
//!
//! Both closed forms are assembled from the per-strategy post-mutation
//! statistics
//!
//! ```text
//! Delta(lambda) = (1-2l) log(Ma/Mb)
//!               - [(1-2l) Dxs - l Dxr + l phi Dxsr] / (Ma Mb)
//! Dx = Mb X'_a - Ma X'_b
//! ```
//!
//! which keeps every term traceable to an independently testable update
//! rule. At `phi = 0` both families collapse to [`delta_phi0`], which is
//! never positive: taking over an existing counterpart can only be the
//! cheaper move when `phi` rewards degree.

use crate::error::{Error, Result};
use crate::flesh::{CostParams, FleshParams};
use crate::mutation::{apply_mutation, build_state, entropies_from_state};
use crate::scalar::{two, xlogx, Real};
use crate::skeleton::Skeleton;

/// `Delta` restricted to a family where it is linear in `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearDelta<R: Real> {
    pub slope: R,
    pub intercept: R,
}

impl<R: Real> LinearDelta<R> {
    pub fn eval(&self, lambda: R) -> R {
        self.slope * lambda + self.intercept
    }

    /// The `lambda` where `Delta` changes sign, if it lies in `[0, 1]`.
    pub fn root_in_unit(&self) -> Option<R> {
        if self.slope == R::zero() {
            return None;
        }
        let r = -self.intercept / self.slope;
        if r == R::zero() {
            // normalize -0.0
            return Some(R::zero());
        }
        if r >= R::zero() && r <= R::one() {
            Some(r)
        } else {
            None
        }
    }
}

/// Inputs for the vertex-capped closed form. Requires `links >= 1`,
/// `phi >= 0`, `lambda` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexCappedInputs<R: Real> {
    pub lambda: R,
    pub phi: R,
    /// Number of links `M` in the matching before the mutation.
    pub links: R,
}

/// Inputs for the counterpart-capped closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterpartCappedInputs<R: Real> {
    pub lambda: R,
    pub phi: R,
    /// Degree of the form already attached to the target counterpart.
    pub mu_k: R,
    /// `X(S,R) = sum_i mu_i^{phi+1} log mu_i` over the form degree sequence.
    pub x_sr: R,
    /// `M_phi = sum_i mu_i^{phi+1}` over the form degree sequence.
    pub m_phi: R,
}

/// Post-mutation sufficient statistics for both strategies.
struct StrategyTotals<R: Real> {
    m_a: R,
    m_b: R,
    xsr_a: R,
    xsr_b: R,
    xs_a: R,
    xs_b: R,
    xr_a: R,
    xr_b: R,
}

fn assemble<R: Real>(phi: R, lambda: R, t: &StrategyTotals<R>) -> R {
    let w = R::one() - (lambda + lambda);
    let d_xs = t.m_b * t.xs_a - t.m_a * t.xs_b;
    let d_xr = t.m_b * t.xr_a - t.m_a * t.xr_b;
    let d_xsr = t.m_b * t.xsr_a - t.m_a * t.xsr_b;
    w * (t.m_a / t.m_b).ln() - (w * d_xs - lambda * d_xr + lambda * phi * d_xsr) / (t.m_a * t.m_b)
}

fn vertex_totals<R: Real>(phi: R, links: R) -> StrategyTotals<R> {
    let ln2 = two::<R>().ln();
    let p = two::<R>().powf(phi + R::one()); // 2^{phi+1}
    let zero = R::zero();
    StrategyTotals {
        m_a: links + R::one(),
        m_b: links + (p - R::one()),
        xsr_a: zero,
        xsr_b: p * ln2,
        xs_a: zero,
        xs_b: phi * p * ln2,
        xr_a: zero,
        xr_b: (phi + R::one()) * p * ln2,
    }
}

fn counterpart_totals<R: Real>(phi: R, mu_k: R, x_sr: R, m_phi: R) -> StrategyTotals<R> {
    let one = R::one();
    let ln2 = two::<R>().ln();
    let q = two::<R>().powf(phi); // 2^phi
    let qm1 = q - one;
    let mkp = mu_k.powf(phi);
    // mu_k - 1 + 2^phi, grouped so that phi = 0 gives exactly mu_k.
    let shifted = mu_k + qm1;
    let xs_a = (phi + one) * x_sr;
    let xr_a = phi * x_sr;
    StrategyTotals {
        m_a: m_phi + one,
        m_b: m_phi + qm1 * mkp + q,
        xsr_a: x_sr,
        xsr_b: x_sr + qm1 * mkp * mu_k.ln() + (mkp + one) * q * ln2,
        xs_a,
        xs_b: xs_a
            + qm1 * mkp * (mkp * shifted).ln()
            + mkp * mu_k * (shifted / mu_k).ln()
            + phi * q * ln2,
        xr_a,
        xr_b: xr_a - phi * mkp * mu_k.ln() + q * (mkp + one) * (q * (mkp + one)).ln(),
    }
}

fn linear_from<R: Real>(phi: R, t: &StrategyTotals<R>) -> LinearDelta<R> {
    let d0 = assemble(phi, R::zero(), t);
    let d1 = assemble(phi, R::one(), t);
    LinearDelta {
        slope: d1 - d0,
        intercept: d0,
    }
}

/// `Delta` at `phi = 0` for a target counterpart of degree `omega`:
///
/// ```text
/// Delta = -lambda [(omega+1) log(omega+1) - omega log(omega)] / (M + 1)
/// ```
///
/// Non-positive for every `omega >= 1`, and strictly negative exactly when
/// `lambda > 0`: without degree bias, mutual exclusivity never loses.
pub fn delta_phi0<R: Real>(lambda: R, omega: R, links: R) -> R {
    let growth = xlogx(omega + R::one()) - xlogx(omega);
    -(lambda * growth / (links + R::one()))
}

/// Closed form on partial matchings. Returns `Delta(lambda)` together with
/// its linear coefficients (`slope = Delta(1) - Delta(0)`, `intercept =
/// Delta(0)`).
pub fn delta_vertex_capped<R: Real>(inp: VertexCappedInputs<R>) -> (R, LinearDelta<R>) {
    let t = vertex_totals(inp.phi, inp.links);
    (assemble(inp.phi, inp.lambda, &t), linear_from(inp.phi, &t))
}

/// Closed form on counterpart-capped skeletons. `mu_k < 1` is a domain
/// error; the `(x_sr, m_phi)` pair is taken as given.
pub fn delta_counterpart_capped<R: Real>(
    inp: CounterpartCappedInputs<R>,
) -> Result<(R, LinearDelta<R>)> {
    if !(inp.mu_k >= R::one()) {
        return Err(Error::domain(format!(
            "mu_k must be at least 1, got {}",
            inp.mu_k
        )));
    }
    let t = counterpart_totals(inp.phi, inp.mu_k, inp.x_sr, inp.m_phi);
    Ok((assemble(inp.phi, inp.lambda, &t), linear_from(inp.phi, &t)))
}

/// Independent expressions for `Delta(0)` and `Delta(1)` on matchings:
///
/// ```text
/// Delta(0) = -log(1 + 2(2^phi - 1)/(M+1)) + 2^{phi+1} phi log(2) / (M + 2^{phi+1} - 1)
/// Delta(1) =  log(1 + 2(2^phi - 1)/(M+1)) - 2^{phi+1} (phi+1) log(2) / (M + 2^{phi+1} - 1)
/// ```
pub fn vertex_capped_extremes<R: Real>(phi: R, links: R) -> (R, R) {
    let one = R::one();
    let ln2 = two::<R>().ln();
    let p = two::<R>().powf(phi + one);
    let l = (one + (p - two::<R>()) / (links + one)).ln();
    let q = p * ln2 / (links + p - one);
    (-l + phi * q, l - (phi + one) * q)
}

/// Independent expressions for `Delta(0)` and `Delta(1)` on
/// counterpart-capped skeletons, written in the factored form with the
/// shared bracket
///
/// ```text
/// C = (phi+1) X(S,R) (2^phi - 1)(mu_k^phi + 1)/(M_phi + 1)
///   - phi 2^phi log 2
///   + mu_k^phi [log(mu_k)(mu_k + phi) - (mu_k - 1 + 2^phi) log(mu_k - 1 + 2^phi)]
/// Delta(0) = log((M_phi+1)/D) + [phi 2^phi mu_k^phi log(mu_k) - C] / D
/// Delta(1) = -log((M_phi+1)/D) - [(mu_k^phi+1) 2^phi log(mu_k^phi+1) - C] / D
/// D = M_phi + (2^phi - 1) mu_k^phi + 2^phi
/// ```
pub fn counterpart_capped_extremes<R: Real>(phi: R, mu_k: R, x_sr: R, m_phi: R) -> (R, R) {
    let one = R::one();
    let ln2 = two::<R>().ln();
    let q = two::<R>().powf(phi);
    let qm1 = q - one;
    let mkp = mu_k.powf(phi);
    let shifted = mu_k + qm1;
    let m_a = m_phi + one;
    let d = m_phi + qm1 * mkp + q;
    let log_ratio = (m_a / d).ln();
    let c = (phi + one) * x_sr * qm1 * (mkp + one) / m_a - phi * q * ln2
        + mkp * (mu_k.ln() * (mu_k + phi) - shifted * shifted.ln());
    let d0 = log_ratio + (phi * q * mkp * mu_k.ln() - c) / d;
    let d1 = -log_ratio - ((mkp + one) * q * (mkp + one).ln() - c) / d;
    (d0, d1)
}

/// `Delta(lambda)` on an arbitrary skeleton through the dynamic route: both
/// candidate edges are applied as incremental mutations and the resulting
/// costs differenced.
///
/// Restrictions: form `i` must be unlinked, counterpart `j_a` unlinked, and
/// counterpart `j_b` linked.
pub fn delta_general<R: Real>(
    sk: &Skeleton,
    fp: FleshParams<R>,
    cp: CostParams<R>,
    i: usize,
    j_a: usize,
    j_b: usize,
) -> Result<R> {
    if i == 0 || i > sk.forms() {
        return Err(Error::FormIndexOutOfRange {
            index: i,
            n: sk.forms(),
        });
    }
    for j in [j_a, j_b] {
        if j == 0 || j > sk.counterparts() {
            return Err(Error::CounterpartIndexOutOfRange {
                index: j,
                m: sk.counterparts(),
            });
        }
    }
    if sk.form_degree(i) != 0 {
        return Err(Error::restriction(format!(
            "form {i} must be unlinked before choosing a strategy"
        )));
    }
    if sk.counterpart_degree(j_a) != 0 {
        return Err(Error::restriction(format!(
            "strategy a requires unlinked counterpart, but {j_a} has links"
        )));
    }
    if sk.counterpart_degree(j_b) == 0 {
        return Err(Error::restriction(format!(
            "strategy b requires a linked counterpart, but {j_b} is unlinked"
        )));
    }
    let base = build_state(sk, fp);
    let mut state_a = base.clone();
    apply_mutation(&mut state_a, sk, i, j_a)?;
    let omega_a = entropies_from_state(&state_a)?.cost(cp);
    let mut state_b = base;
    apply_mutation(&mut state_b, sk, i, j_b)?;
    let omega_b = entropies_from_state(&state_b)?.cost(cp);
    Ok(omega_a - omega_b)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn phi0_example() {
        let d = delta_phi0(0.5, 2.0, 5.0);
        let expect = -0.5 * (3.0 * 3.0_f64.ln() - 2.0 * 2.0_f64.ln()) / 6.0;
        assert!((d - expect).abs() < TOL);
        assert!(d < 0.0);
        assert_eq!(delta_phi0(0.0, 5.0, 9.0), 0.0);
    }

    #[test]
    fn phi0_matches_general_route_on_explicit_skeleton() {
        // Five edges, counterpart 1 holding two of them, so omega = 2.
        let sk = Skeleton::new(6, 5, &[(1, 1), (2, 1), (3, 2), (4, 3), (5, 4)]).unwrap();
        let fp = FleshParams::new(0.0_f64).unwrap();
        let cp = CostParams::new(0.5).unwrap();
        let general = delta_general(&sk, fp, cp, 6, 5, 1).unwrap();
        let closed = delta_phi0(0.5, 2.0, 5.0);
        assert!((general - closed).abs() < 1e-10, "{general} vs {closed}");
        assert!((closed - (-0.15912854207370322_f64)).abs() < TOL);
    }

    #[test]
    fn phi0_is_never_positive() {
        for lk in 1..40 {
            for om in 1..20 {
                for l in [0.0, 0.1, 0.5, 0.9, 1.0] {
                    let d = delta_phi0(l, om as f64, lk as f64);
                    assert!(d <= 0.0);
                    assert_eq!(d < 0.0, l > 0.0);
                }
            }
        }
    }

    #[test]
    fn vertex_capped_anchor() {
        // lambda = 0, phi = 1, M = 3: -log(3/2) + 4 log(2) / 6.
        let (value, lin) = delta_vertex_capped(VertexCappedInputs {
            lambda: 0.0,
            phi: 1.0,
            links: 3.0,
        });
        let expect = -(1.5_f64).ln() + 4.0 * 2.0_f64.ln() / 6.0;
        assert!((value - expect).abs() < TOL, "got {value}, want {expect}");
        assert!((lin.intercept - expect).abs() < TOL);
    }

    #[test]
    fn vertex_capped_at_phi_zero_reduces() {
        for lk in [1.0_f64, 5.0, 77.0] {
            for l in [0.0, 0.3, 1.0] {
                let (value, _) = delta_vertex_capped(VertexCappedInputs {
                    lambda: l,
                    phi: 0.0,
                    links: lk,
                });
                assert!((value - delta_phi0(l, 1.0, lk)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn counterpart_capped_rejects_small_mu() {
        let r = delta_counterpart_capped(CounterpartCappedInputs {
            lambda: 0.5,
            phi: 1.0,
            mu_k: 0.5,
            x_sr: 0.0,
            m_phi: 4.0,
        });
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn counterpart_capped_specializes_to_vertex_capped() {
        // On a matching: mu_k = 1, X(S,R) = 0, M_phi = M.
        for m in [1.0_f64, 4.0, 30.0] {
            for phi in [0.0, 0.5, 1.0, 2.5] {
                for l in [0.0, 0.25, 0.8, 1.0] {
                    let (v_vc, lin_vc) = delta_vertex_capped(VertexCappedInputs {
                        lambda: l,
                        phi,
                        links: m,
                    });
                    let (v_cc, lin_cc) = delta_counterpart_capped(CounterpartCappedInputs {
                        lambda: l,
                        phi,
                        mu_k: 1.0,
                        x_sr: 0.0,
                        m_phi: m,
                    })
                    .unwrap();
                    assert!((v_vc - v_cc).abs() < 1e-13);
                    assert!((lin_vc.slope - lin_cc.slope).abs() < 1e-13);
                    assert!((lin_vc.intercept - lin_cc.intercept).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn counterpart_capped_at_phi_zero_loses_mu_dependence() {
        for mu in [1.0_f64, 3.0, 17.0] {
            let (v, _) = delta_counterpart_capped(CounterpartCappedInputs {
                lambda: 0.7,
                phi: 0.0,
                mu_k: mu,
                x_sr: 123.456, // arbitrary: must drop out at phi = 0
                m_phi: 9.0,
            })
            .unwrap();
            assert!((v - delta_phi0(0.7_f64, 1.0, 9.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn value_matches_linear_form() {
        let t_vals = [0.0_f64, 0.13, 0.5, 0.77, 1.0];
        for phi in [0.0, 0.5, 1.3, 2.5] {
            for l in t_vals {
                let (v, lin) = delta_vertex_capped(VertexCappedInputs {
                    lambda: l,
                    phi,
                    links: 12.0,
                });
                assert!((v - lin.eval(l)).abs() < 1e-14);
                let (v, lin) = delta_counterpart_capped(CounterpartCappedInputs {
                    lambda: l,
                    phi,
                    mu_k: 3.0,
                    x_sr: 25.0,
                    m_phi: 40.0,
                })
                .unwrap();
                assert!((v - lin.eval(l)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn extremes_match_assembled_form() {
        for phi in [0.0_f64, 0.5, 1.0, 2.0, 2.5] {
            for m in [1.0, 3.0, 50.0, 150.0] {
                let (_, lin) = delta_vertex_capped(VertexCappedInputs {
                    lambda: 0.0,
                    phi,
                    links: m,
                });
                let (d0, d1) = vertex_capped_extremes(phi, m);
                assert!((lin.eval(0.0) - d0).abs() < TOL);
                assert!((lin.eval(1.0) - d1).abs() < TOL);
            }
            for mu in [1.0_f64, 2.0, 8.0] {
                let x_sr = 10.0 * mu;
                let m_phi = 5.0 * mu * mu;
                let (_, lin) = delta_counterpart_capped(CounterpartCappedInputs {
                    lambda: 0.0,
                    phi,
                    mu_k: mu,
                    x_sr,
                    m_phi,
                })
                .unwrap();
                let (d0, d1) = counterpart_capped_extremes(phi, mu, x_sr, m_phi);
                assert!((lin.eval(0.0) - d0).abs() < TOL);
                assert!((lin.eval(1.0) - d1).abs() < TOL);
            }
        }
    }

    #[test]
    fn root_in_unit_edge_cases() {
        let at_zero = LinearDelta {
            slope: -2.0,
            intercept: 0.0,
        };
        assert_eq!(at_zero.root_in_unit(), Some(0.0));
        let flat = LinearDelta {
            slope: 0.0,
            intercept: 1.0,
        };
        assert_eq!(flat.root_in_unit(), None);
        let outside = LinearDelta {
            slope: 1.0,
            intercept: 1.0,
        };
        assert_eq!(outside.root_in_unit(), None);
        let inside: LinearDelta<f64> = LinearDelta {
            slope: -0.4,
            intercept: 0.1,
        };
        let r = inside.root_in_unit().unwrap();
        assert!((r - 0.25).abs() < TOL);
    }

    #[test]
    fn general_route_respects_restrictions() {
        let sk = Skeleton::new(3, 3, &[(1, 1)]).unwrap();
        let fp = FleshParams::new(1.0).unwrap();
        let cp = CostParams::new(0.5).unwrap();
        // Form 1 is linked.
        assert!(matches!(
            delta_general(&sk, fp, cp, 1, 2, 1),
            Err(Error::Restriction(_))
        ));
        // Counterpart 1 is linked, cannot serve as strategy a target.
        assert!(matches!(
            delta_general(&sk, fp, cp, 2, 1, 1),
            Err(Error::Restriction(_))
        ));
        // Counterpart 2 is unlinked, cannot serve as strategy b target.
        assert!(matches!(
            delta_general(&sk, fp, cp, 2, 3, 2),
            Err(Error::Restriction(_))
        ));
        assert!(delta_general(&sk, fp, cp, 2, 2, 1).is_ok());
    }

    #[test]
    fn general_route_matches_matching_closed_form() {
        // A 3-link matching inside a 4x5 skeleton; new form 4, fresh
        // counterpart 4, busy counterpart 1.
        let sk = Skeleton::new(4, 5, &[(1, 1), (2, 2), (3, 3)]).unwrap();
        for phi in [0.0_f64, 0.5, 1.0, 2.0] {
            let fp = FleshParams::new(phi).unwrap();
            for l in [0.0, 0.25, 0.5, 1.0] {
                let cp = CostParams::new(l).unwrap();
                let general = delta_general(&sk, fp, cp, 4, 4, 1).unwrap();
                let (closed, _) = delta_vertex_capped(VertexCappedInputs {
                    lambda: l,
                    phi,
                    links: 3.0,
                });
                assert!(
                    (general - closed).abs() < 1e-10,
                    "phi={phi} lambda={l}: {general} vs {closed}"
                );
            }
        }
    }
}
