//! Incremental entropy bookkeeping under single-edge toggles.
//!
//! Recomputing entropies from scratch costs `O(E + n + m)` per edit. All
//! three entropies are determined by five sufficient statistics: the
//! normalizer `M_phi`, the edge sum `X(S,R)`, the vertex sums `X(S)` and
//! `X(R)`, and the per-vertex weighted degrees they are built from. A toggle
//! at `(i, j)` only disturbs the cell itself, the weighted degrees of `i`,
//! `j`, and their neighbors, and the edges incident on `i` or `j`, so the
//! statistics can be patched in `O(deg(i) + deg(j))`.
//!
//! [`apply_mutation`] performs one such patch against the pre-mutation
//! skeleton. [`DynamicModel`] owns a skeleton and its state together, keeps
//! them in sync, and optionally rebuilds or audits the state every few
//! thousand edits to keep float drift bounded.

use crate::error::{Error, Result};
use crate::flesh::{EntropyBundle, FleshParams};
use crate::scalar::{real, xlogx, Real};
use crate::skeleton::Skeleton;

/// Sufficient statistics for the entropies of one fleshed skeleton.
///
/// Invariants relative to the skeleton the state was built against:
/// `m_phi = sum_edges (mu_i omega_j)^phi`, `x_sr` the same sum weighted by
/// `log(mu_i omega_j)`, `mu_phi[i]`/`omega_phi[j]` the weighted degrees, and
/// `x_s`/`x_r` the `x log x` vertex sums.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyState<R: Real> {
    phi: R,
    m_phi: R,
    x_sr: R,
    x_s: R,
    x_r: R,
    mu_phi: Vec<R>,
    omega_phi: Vec<R>,
}

impl<R: Real> EntropyState<R> {
    pub fn phi(&self) -> R {
        self.phi
    }

    pub fn m_phi(&self) -> R {
        self.m_phi
    }

    pub fn x_sr(&self) -> R {
        self.x_sr
    }

    pub fn x_s(&self) -> R {
        self.x_s
    }

    pub fn x_r(&self) -> R {
        self.x_r
    }

    /// Weighted degree of form `i` (1-based).
    pub fn mu_phi(&self, i: usize) -> R {
        self.mu_phi[i - 1]
    }

    /// Weighted degree of counterpart `j` (1-based).
    pub fn omega_phi(&self, j: usize) -> R {
        self.omega_phi[j - 1]
    }

    pub fn mu_phi_all(&self) -> &[R] {
        &self.mu_phi
    }

    pub fn omega_phi_all(&self) -> &[R] {
        &self.omega_phi
    }
}

/// Builds the sufficient statistics from scratch.
pub fn build_state<R: Real>(sk: &Skeleton, fp: FleshParams<R>) -> EntropyState<R> {
    let phi = fp.phi();
    let mu_phi: Vec<R> = (1..=sk.forms())
        .map(|i| {
            sk.form_neighbors(i)
                .iter()
                .map(|&j| real::<R>(sk.counterpart_degree(j)).powf(phi))
                .sum()
        })
        .collect();
    let omega_phi: Vec<R> = (1..=sk.counterparts())
        .map(|j| {
            sk.counterpart_neighbors(j)
                .iter()
                .map(|&i| real::<R>(sk.form_degree(i)).powf(phi))
                .sum()
        })
        .collect();
    let mut m_phi = R::zero();
    let mut x_sr = R::zero();
    for (i, j) in sk.edges() {
        let prod = real::<R>(sk.form_degree(i) * sk.counterpart_degree(j));
        let w = prod.powf(phi);
        m_phi = m_phi + w;
        x_sr = x_sr + w * prod.ln();
    }
    let x_s = (1..=sk.forms())
        .map(|i| xlogx(real::<R>(sk.form_degree(i)).powf(phi) * mu_phi[i - 1]))
        .sum();
    let x_r = (1..=sk.counterparts())
        .map(|j| xlogx(real::<R>(sk.counterpart_degree(j)).powf(phi) * omega_phi[j - 1]))
        .sum();
    EntropyState {
        phi,
        m_phi,
        x_sr,
        x_s,
        x_r,
        mu_phi,
        omega_phi,
    }
}

/// Patches `state` to reflect toggling edge `(i, j)` on `sk`.
///
/// `sk` must be the skeleton `state` currently describes (pre-mutation); the
/// caller is responsible for toggling the skeleton itself afterwards. Only
/// the statistics of `i`, `j`, and their neighbors are touched; every other
/// cache entry is left bit-identical.
pub fn apply_mutation<R: Real>(
    state: &mut EntropyState<R>,
    sk: &Skeleton,
    i: usize,
    j: usize,
) -> Result<()> {
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
    debug_assert_eq!(state.mu_phi.len(), sk.forms());
    debug_assert_eq!(state.omega_phi.len(), sk.counterparts());

    let phi = state.phi;
    let removing = sk.has_edge(i, j);
    let mu_i = sk.form_degree(i);
    let om_j = sk.counterpart_degree(j);
    let (mu_i_new, om_j_new) = if removing {
        (mu_i - 1, om_j - 1)
    } else {
        (mu_i + 1, om_j + 1)
    };
    let om_j_pow = real::<R>(om_j).powf(phi);
    let om_j_new_pow = real::<R>(om_j_new).powf(phi);
    let mu_i_pow = real::<R>(mu_i).powf(phi);
    let mu_i_new_pow = real::<R>(mu_i_new).powf(phi);

    // Edges (k, j) for the other forms attached to j: the counterpart degree
    // in their weight changes from om_j to om_j_new.
    for &k in sk.counterpart_neighbors(j) {
        if k == i {
            continue;
        }
        let mu_k = real::<R>(sk.form_degree(k));
        let w_old = (mu_k * real::<R>(om_j)).powf(phi);
        let w_new = (mu_k * real::<R>(om_j_new)).powf(phi);
        state.m_phi = state.m_phi - w_old + w_new;
        state.x_sr = state.x_sr - w_old * (mu_k * real::<R>(om_j)).ln()
            + w_new * (mu_k * real::<R>(om_j_new)).ln();
        let mu_k_pow = mu_k.powf(phi);
        state.x_s = state.x_s - xlogx(mu_k_pow * state.mu_phi[k - 1]);
        state.mu_phi[k - 1] = state.mu_phi[k - 1] - om_j_pow + om_j_new_pow;
        state.x_s = state.x_s + xlogx(mu_k_pow * state.mu_phi[k - 1]);
    }

    // Edges (i, l) for the other counterparts attached to i.
    for &l in sk.form_neighbors(i) {
        if l == j {
            continue;
        }
        let om_l = real::<R>(sk.counterpart_degree(l));
        let w_old = (real::<R>(mu_i) * om_l).powf(phi);
        let w_new = (real::<R>(mu_i_new) * om_l).powf(phi);
        state.m_phi = state.m_phi - w_old + w_new;
        state.x_sr = state.x_sr - w_old * (real::<R>(mu_i) * om_l).ln()
            + w_new * (real::<R>(mu_i_new) * om_l).ln();
        let om_l_pow = om_l.powf(phi);
        state.x_r = state.x_r - xlogx(om_l_pow * state.omega_phi[l - 1]);
        state.omega_phi[l - 1] = state.omega_phi[l - 1] - mu_i_pow + mu_i_new_pow;
        state.x_r = state.x_r + xlogx(om_l_pow * state.omega_phi[l - 1]);
    }

    // The cell (i, j) itself plus the two endpoint vertex terms.
    state.x_s = state.x_s - xlogx(mu_i_pow * state.mu_phi[i - 1]);
    state.x_r = state.x_r - xlogx(om_j_pow * state.omega_phi[j - 1]);
    if removing {
        let prod = real::<R>(mu_i * om_j);
        let w = prod.powf(phi);
        state.m_phi = state.m_phi - w;
        state.x_sr = state.x_sr - w * prod.ln();
        state.mu_phi[i - 1] = state.mu_phi[i - 1] - om_j_pow;
        state.omega_phi[j - 1] = state.omega_phi[j - 1] - mu_i_pow;
    } else {
        let prod = real::<R>(mu_i_new * om_j_new);
        let w = prod.powf(phi);
        state.m_phi = state.m_phi + w;
        state.x_sr = state.x_sr + w * prod.ln();
        state.mu_phi[i - 1] = state.mu_phi[i - 1] + om_j_new_pow;
        state.omega_phi[j - 1] = state.omega_phi[j - 1] + mu_i_new_pow;
    }
    // A vertex that lost its last edge has weighted degree exactly zero;
    // pin it so float residue cannot leak into later x log x terms.
    if mu_i_new == 0 {
        state.mu_phi[i - 1] = R::zero();
    }
    if om_j_new == 0 {
        state.omega_phi[j - 1] = R::zero();
    }
    state.x_s = state.x_s + xlogx(mu_i_new_pow * state.mu_phi[i - 1]);
    state.x_r = state.x_r + xlogx(om_j_new_pow * state.omega_phi[j - 1]);
    Ok(())
}

/// Entropies read directly off the sufficient statistics.
pub fn entropies_from_state<R: Real>(state: &EntropyState<R>) -> Result<EntropyBundle<R>> {
    if state.m_phi <= R::zero() {
        return Err(Error::UndefinedDistribution);
    }
    let log_m = state.m_phi.ln();
    Ok(EntropyBundle::new(
        log_m - state.x_s / state.m_phi,
        log_m - state.x_r / state.m_phi,
        log_m - state.phi * state.x_sr / state.m_phi,
    ))
}

/// A skeleton and its entropy state kept in lockstep.
pub struct DynamicModel<R: Real> {
    skeleton: Skeleton,
    fp: FleshParams<R>,
    state: EntropyState<R>,
    rebuild_every: usize,
    since_rebuild: usize,
    audit: bool,
}

/// Toggles between full rebuilds of the incremental state. Drift over this
/// many patches stays far below the 1e-10 equivalence tolerance.
pub const DEFAULT_REBUILD_EVERY: usize = 10_000;

/// Audit mode flags divergence beyond this relative error.
pub const AUDIT_TOLERANCE: f64 = 1e-8;

impl<R: Real> DynamicModel<R> {
    pub fn new(skeleton: Skeleton, fp: FleshParams<R>) -> Self {
        Self::with_options(skeleton, fp, DEFAULT_REBUILD_EVERY, false)
    }

    /// `rebuild_every = 0` disables periodic rebuilds; `audit` recomputes
    /// the state from scratch after every toggle and errors on divergence.
    pub fn with_options(
        skeleton: Skeleton,
        fp: FleshParams<R>,
        rebuild_every: usize,
        audit: bool,
    ) -> Self {
        let state = build_state(&skeleton, fp);
        DynamicModel {
            skeleton,
            fp,
            state,
            rebuild_every,
            since_rebuild: 0,
            audit,
        }
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn state(&self) -> &EntropyState<R> {
        &self.state
    }

    pub fn entropies(&self) -> Result<EntropyBundle<R>> {
        entropies_from_state(&self.state)
    }

    /// Toggles `(i, j)`, patching skeleton and state together.
    pub fn toggle(&mut self, i: usize, j: usize) -> Result<()> {
        apply_mutation(&mut self.state, &self.skeleton, i, j)?;
        self.skeleton.toggle_edge(i, j)?;
        self.since_rebuild += 1;
        if self.audit {
            let fresh = build_state(&self.skeleton, self.fp);
            self.check_against(&fresh)?;
        }
        if self.rebuild_every > 0 && self.since_rebuild >= self.rebuild_every {
            self.state = build_state(&self.skeleton, self.fp);
            self.since_rebuild = 0;
        }
        Ok(())
    }

    fn check_against(&self, fresh: &EntropyState<R>) -> Result<()> {
        let fields: [(&'static str, R, R); 4] = [
            ("m_phi", self.state.m_phi, fresh.m_phi),
            ("x_sr", self.state.x_sr, fresh.x_sr),
            ("x_s", self.state.x_s, fresh.x_s),
            ("x_r", self.state.x_r, fresh.x_r),
        ];
        for (field, got, want) in fields {
            let diff = rel_diff(got, want);
            if diff > AUDIT_TOLERANCE {
                return Err(Error::StateDiverged { field, diff });
            }
        }
        for (idx, (&got, &want)) in self
            .state
            .mu_phi
            .iter()
            .zip(fresh.mu_phi.iter())
            .enumerate()
        {
            let diff = rel_diff(got, want);
            if diff > AUDIT_TOLERANCE {
                let _ = idx;
                return Err(Error::StateDiverged {
                    field: "mu_phi",
                    diff,
                });
            }
        }
        for (&got, &want) in self.state.omega_phi.iter().zip(fresh.omega_phi.iter()) {
            let diff = rel_diff(got, want);
            if diff > AUDIT_TOLERANCE {
                return Err(Error::StateDiverged {
                    field: "omega_phi",
                    diff,
                });
            }
        }
        Ok(())
    }
}

fn rel_diff<R: Real>(a: R, b: R) -> f64 {
    let scale = R::one().max(a.abs()).max(b.abs());
    ((a - b) / scale).abs().to_f64().unwrap_or(f64::NAN)
}
