//! Brute-force reference implementations.
//!
//! Everything here is written the slow, obvious way and shares nothing with
//! the incremental machinery beyond the [`Skeleton`] type and the
//! [`EntropyBundle`] return container: degrees are recounted from the edge
//! list, the joint distribution is materialized as a full table, costs come
//! from the `-lambda I + (1-lambda) H(S)` identity rather than the
//! three-entropy combination, and strategy differences are taken by
//! constructing both successor graphs outright. Slow and trusted is the
//! point: the fast paths are tested against these.

use crate::error::{Error, Result};
use crate::flesh::EntropyBundle;
use crate::skeleton::{Skeleton, SkeletonClass};

/// Entropies computed from a fully materialized joint table.
pub fn brute_entropies(sk: &Skeleton, phi: f64) -> Result<EntropyBundle<f64>> {
    let n = sk.forms();
    let m = sk.counterparts();
    let mut mu = vec![0.0_f64; n];
    let mut om = vec![0.0_f64; m];
    for (i, j) in sk.edges() {
        mu[i - 1] += 1.0;
        om[j - 1] += 1.0;
    }
    let mut table = vec![0.0_f64; n * m];
    let mut total = 0.0;
    for (i, j) in sk.edges() {
        let w = (mu[i - 1] * om[j - 1]).powf(phi);
        table[(i - 1) * m + (j - 1)] = w;
        total += w;
    }
    if total <= 0.0 {
        return Err(Error::UndefinedDistribution);
    }
    let plogp = |p: f64| if p > 0.0 { p * p.ln() } else { 0.0 };
    let mut h_sr = 0.0;
    let mut h_s = 0.0;
    let mut h_r = 0.0;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..m {
            let p = table[i * m + j] / total;
            h_sr -= plogp(p);
            row += p;
        }
        h_s -= plogp(row);
    }
    for j in 0..m {
        let mut col = 0.0;
        for i in 0..n {
            col += table[i * m + j] / total;
        }
        h_r -= plogp(col);
    }
    Ok(EntropyBundle::new(h_s, h_r, h_sr))
}

/// Cost through the mutual-information identity,
/// `Omega = -lambda I(S;R) + (1-lambda) H(S)`.
pub fn brute_cost(sk: &Skeleton, phi: f64, lambda: f64) -> Result<f64> {
    let e = brute_entropies(sk, phi)?;
    let mi = e.h_s + e.h_r - e.h_sr;
    Ok(-lambda * mi + (1.0 - lambda) * e.h_s)
}

/// Strategy cost difference by literally building both successor skeletons.
pub fn brute_delta(
    sk: &Skeleton,
    phi: f64,
    lambda: f64,
    i: usize,
    j_a: usize,
    j_b: usize,
) -> Result<f64> {
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
    let mut sk_a = sk.clone();
    sk_a.toggle_edge(i, j_a)?;
    let mut sk_b = sk.clone();
    sk_b.toggle_edge(i, j_b)?;
    Ok(brute_cost(&sk_a, phi, lambda)? - brute_cost(&sk_b, phi, lambda)?)
}

/// What to enumerate: all skeletons on `n` forms and `m` counterparts that
/// belong to `class` (memberwise, so the counterpart-capped family includes
/// every matching), optionally restricted to those where one given form is
/// unlinked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationSpec {
    pub n: usize,
    pub m: usize,
    pub class: SkeletonClass,
    /// Keep only skeletons where this 1-based form has no links.
    pub unlinked_form: Option<usize>,
}

/// Maximum number of adjacency cells the exhaustive scan will walk.
pub const ENUMERATION_CELL_BUDGET: usize = 26;

/// All skeletons matching the spec, ascending in the edge bitmask whose
/// bit `(i-1) * m + (j-1)` is edge `(i, j)`. Duplicate-free by
/// construction. Budgeted: `n, m <= 8` and `n * m <= 26`, else an error.
pub fn enumerate_skeleta(spec: EnumerationSpec) -> Result<impl Iterator<Item = Skeleton>> {
    let EnumerationSpec {
        n,
        m,
        class,
        unlinked_form,
    } = spec;
    if n == 0 || m == 0 {
        return Err(Error::Budget(format!(
            "enumeration needs at least one vertex per side, got {n}x{m}"
        )));
    }
    if n > 8 || m > 8 || n * m > ENUMERATION_CELL_BUDGET {
        return Err(Error::Budget(format!(
            "exhaustive enumeration is capped at 8 per side and {ENUMERATION_CELL_BUDGET} cells, got {n}x{m}"
        )));
    }
    if let Some(i) = unlinked_form {
        if i == 0 || i > n {
            return Err(Error::FormIndexOutOfRange { index: i, n });
        }
    }
    let cells = n * m;
    let iter = (0_u64..1 << cells).filter_map(move |mask| {
        if let Some(i) = unlinked_form {
            let row = (mask >> ((i - 1) * m)) & ((1 << m) - 1);
            if row != 0 {
                return None;
            }
        }
        match class {
            SkeletonClass::General => {}
            SkeletonClass::CounterpartCapped => {
                for j in 0..m {
                    let mut col = 0;
                    for i in 0..n {
                        col += (mask >> (i * m + j)) & 1;
                    }
                    if col > 1 {
                        return None;
                    }
                }
            }
            SkeletonClass::VertexCapped => {
                for j in 0..m {
                    let mut col = 0;
                    for i in 0..n {
                        col += (mask >> (i * m + j)) & 1;
                    }
                    if col > 1 {
                        return None;
                    }
                }
                for i in 0..n {
                    let row = (mask >> (i * m)) & ((1 << m) - 1);
                    if row.count_ones() > 1 {
                        return None;
                    }
                }
            }
        }
        let mut edges = Vec::with_capacity(mask.count_ones() as usize);
        for b in 0..cells {
            if (mask >> b) & 1 == 1 {
                edges.push((b / m + 1, b % m + 1));
            }
        }
        Some(Skeleton::new(n, m, &edges).expect("enumerated edges are valid"))
    });
    Ok(iter)
}
