//! Randomized invariants, checked with proptest.
//!
//! Skeletons are drawn as bitmasks over an n x m grid; the counterpart-capped
//! variants repair a mask by keeping at most one edge per counterpart.

use proptest::prelude::*;

use lexlearn::delta::{
    counterpart_capped_extremes, delta_counterpart_capped, delta_general, delta_phi0,
    delta_vertex_capped, vertex_capped_extremes, CounterpartCappedInputs, VertexCappedInputs,
};
use lexlearn::flesh::{self, entropies, joint_probability, marginals, CostParams, FleshParams};
use lexlearn::mutation::{apply_mutation, build_state, entropies_from_state};
use lexlearn::oracle::{brute_cost, brute_entropies};
use lexlearn::skeleton::Skeleton;
use lexlearn::zipf::{self, DegreeMode};

fn skeleton_from_mask(n: usize, m: usize, mask: u32) -> Skeleton {
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in 1..=m {
            if mask >> ((i - 1) * m + (j - 1)) & 1 == 1 {
                edges.push((i, j));
            }
        }
    }
    Skeleton::new(n, m, &edges).unwrap()
}

/// Keep only the lowest-indexed edge in each counterpart's column.
fn counterpart_capped_from_mask(n: usize, m: usize, mask: u32) -> Skeleton {
    let mut edges = Vec::new();
    for j in 1..=m {
        for i in 1..=n {
            if mask >> ((i - 1) * m + (j - 1)) & 1 == 1 {
                edges.push((i, j));
                break;
            }
        }
    }
    Skeleton::new(n, m, &edges).unwrap()
}

fn dims_and_mask() -> impl Strategy<Value = (usize, usize, u32)> {
    (1..=5_usize, 1..=5_usize).prop_flat_map(|(n, m)| {
        let bits = (n * m) as u32;
        (Just(n), Just(m), 0..(1_u32 << bits))
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1.0_f64.max(a.abs()).max(b.abs())
}

/// The numeric kernels instantiate at f32 and land within single-precision
/// distance of the f64 results.
#[test]
fn kernels_instantiate_at_f32() {
    let sk = Skeleton::new(3, 4, &[(1, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
    let coarse = entropies(&sk, FleshParams::new(1.0_f32).unwrap()).unwrap();
    let fine = entropies(&sk, FleshParams::new(1.0_f64).unwrap()).unwrap();
    assert!((f64::from(coarse.h_sr) - fine.h_sr).abs() < 1e-6);

    let (v32, _) = delta_vertex_capped(VertexCappedInputs {
        lambda: 0.25_f32,
        phi: 1.0,
        links: 5.0,
    });
    let (v64, _) = delta_vertex_capped(VertexCappedInputs {
        lambda: 0.25_f64,
        phi: 1.0,
        links: 5.0,
    });
    assert!((f64::from(v32) - v64).abs() < 1e-6);

    let seq = zipf::generate(12, 1.2_f32, 0.8, DegreeMode::Continuous).unwrap();
    let (x_sr, m_phi) = seq.sufficient_stats();
    let (c32, _) = delta_counterpart_capped(CounterpartCappedInputs {
        lambda: 0.6_f32,
        phi: 0.8,
        mu_k: 2.0,
        x_sr,
        m_phi,
    })
    .unwrap();
    let seq = zipf::generate(12, 1.2_f64, 0.8, DegreeMode::Continuous).unwrap();
    let (x_sr, m_phi) = seq.sufficient_stats();
    let (c64, _) = delta_counterpart_capped(CounterpartCappedInputs {
        lambda: 0.6_f64,
        phi: 0.8,
        mu_k: 2.0,
        x_sr,
        m_phi,
    })
    .unwrap();
    assert!((f64::from(c32) - c64).abs() < 1e-5, "{c32} vs {c64}");
}

proptest! {
    /// The fleshed table is a probability distribution: cells are
    /// non-negative, sum to one, and the marginals are its row and
    /// column sums.
    #[test]
    fn joint_probabilities_form_a_distribution(
        (n, m, mask) in dims_and_mask(),
        phi in 0.0..3.0_f64,
    ) {
        let sk = skeleton_from_mask(n, m, mask);
        if sk.links() == 0 {
            return Ok(());
        }
        let fp = FleshParams::new(phi).unwrap();
        let mut total = 0.0;
        let mut row = vec![0.0; n];
        let mut col = vec![0.0; m];
        for i in 1..=n {
            for j in 1..=m {
                let p = joint_probability(&sk, fp, i, j).unwrap();
                prop_assert!(p >= 0.0);
                total += p;
                row[i - 1] += p;
                col[j - 1] += p;
            }
        }
        prop_assert!((total - 1.0).abs() < 1e-12);
        let (p_s, p_r) = marginals(&sk, fp).unwrap();
        for i in 0..n {
            prop_assert!((row[i] - p_s[i]).abs() < 1e-12);
        }
        for j in 0..m {
            prop_assert!((col[j] - p_r[j]).abs() < 1e-12);
        }
    }

    /// The three-entropy combination equals the mutual-information form
    /// of the cost for every lambda.
    #[test]
    fn cost_identity_holds(
        (n, m, mask) in dims_and_mask(),
        phi in 0.0..3.0_f64,
        lambda in 0.0..=1.0_f64,
    ) {
        let sk = skeleton_from_mask(n, m, mask);
        if sk.links() == 0 {
            return Ok(());
        }
        let fp = FleshParams::new(phi).unwrap();
        let cp = CostParams::new(lambda).unwrap();
        let e = entropies(&sk, fp).unwrap();
        let direct = (1.0 - 2.0 * lambda) * e.h_s - lambda * e.h_r + lambda * e.h_sr;
        prop_assert!((e.cost(cp) - direct).abs() < 1e-12);
        prop_assert!((flesh::cost(&sk, fp, cp).unwrap() - direct).abs() < 1e-12);
    }

    /// Entropies computed through the sufficient statistics agree with a
    /// literal recount of the whole probability table.
    #[test]
    fn flesh_agrees_with_brute_force(
        (n, m, mask) in dims_and_mask(),
        phi in 0.0..3.0_f64,
    ) {
        let sk = skeleton_from_mask(n, m, mask);
        if sk.links() == 0 {
            return Ok(());
        }
        let fp = FleshParams::new(phi).unwrap();
        let fast = entropies(&sk, fp).unwrap();
        let slow = brute_entropies(&sk, phi).unwrap();
        prop_assert!(rel(fast.h_s, slow.h_s) < 1e-12);
        prop_assert!(rel(fast.h_r, slow.h_r) < 1e-12);
        prop_assert!(rel(fast.h_sr, slow.h_sr) < 1e-12);
        prop_assert!(rel(fast.mi, slow.mi) < 1e-12);
        let cp = CostParams::new(0.3).unwrap();
        prop_assert!(rel(fast.cost(cp), brute_cost(&sk, phi, 0.3).unwrap()) < 1e-12);
    }

    /// Toggling an edge twice restores the skeleton exactly.
    #[test]
    fn toggle_is_an_involution(
        (n, m, mask) in dims_and_mask(),
        iv in 0..25_usize,
    ) {
        let sk = skeleton_from_mask(n, m, mask);
        let i = iv % n + 1;
        let j = iv / 5 % m + 1;
        let mut t = sk.clone();
        t.toggle_edge(i, j).unwrap();
        prop_assert_eq!(t.has_edge(i, j), !sk.has_edge(i, j));
        t.toggle_edge(i, j).unwrap();
        prop_assert_eq!(t, sk);
    }

    /// A patched running state matches a state rebuilt from scratch after
    /// the same edge change, in every field.
    #[test]
    fn patch_equals_rebuild(
        (n, m, mask) in dims_and_mask(),
        phi in 0.0..3.0_f64,
        iv in 0..25_usize,
    ) {
        let sk = skeleton_from_mask(n, m, mask);
        let i = iv % n + 1;
        let j = iv / 5 % m + 1;
        let fp = FleshParams::new(phi).unwrap();
        let mut patched = build_state(&sk, fp);
        apply_mutation(&mut patched, &sk, i, j).unwrap();
        let mut toggled = sk.clone();
        toggled.toggle_edge(i, j).unwrap();
        let fresh = build_state(&toggled, fp);
        prop_assert!(rel(patched.m_phi(), fresh.m_phi()) < 1e-10);
        prop_assert!(rel(patched.x_sr(), fresh.x_sr()) < 1e-10);
        prop_assert!(rel(patched.x_s(), fresh.x_s()) < 1e-10);
        prop_assert!(rel(patched.x_r(), fresh.x_r()) < 1e-10);
        if toggled.links() > 0 {
            let via_state = entropies_from_state(&fresh).unwrap();
            let direct = entropies(&toggled, fp).unwrap();
            prop_assert!(rel(via_state.h_sr, direct.h_sr) < 1e-10);
        }
    }

    /// On counterpart-capped skeleta the closed form, the incremental
    /// route, and brute force give the same strategy-cost difference.
    #[test]
    fn closed_form_matches_general_and_brute(
        (n, m, mask) in dims_and_mask(),
        phi in 0.0..2.5_f64,
        lambda in 0.0..=1.0_f64,
    ) {
        let sk = counterpart_capped_from_mask(n, m, mask);
        let i = match (1..=n).find(|&v| sk.form_degree(v) == 0) {
            Some(v) => v,
            None => return Ok(()),
        };
        let j_a = match (1..=m).find(|&v| sk.counterpart_degree(v) == 0) {
            Some(v) => v,
            None => return Ok(()),
        };
        let j_b = match (1..=m).find(|&v| sk.counterpart_degree(v) == 1) {
            Some(v) => v,
            None => return Ok(()),
        };
        let holder = sk.counterpart_neighbors(j_b)[0];
        let mu_k = sk.form_degree(holder) as f64;
        let mut x_sr = 0.0;
        let mut m_phi = 0.0;
        for v in 1..=n {
            let d = sk.form_degree(v) as f64;
            if d > 0.0 {
                let w = d.powf(phi + 1.0);
                m_phi += w;
                x_sr += w * d.ln();
            }
        }
        let fp = FleshParams::new(phi).unwrap();
        let cp = CostParams::new(lambda).unwrap();
        let (closed, _) = delta_counterpart_capped(CounterpartCappedInputs {
            lambda, phi, mu_k, x_sr, m_phi,
        }).unwrap();
        let general = delta_general(&sk, fp, cp, i, j_a, j_b).unwrap();
        let brute = lexlearn::oracle::brute_delta(&sk, phi, lambda, i, j_a, j_b).unwrap();
        prop_assert!((closed - general).abs() < 1e-9, "{closed} vs {general}");
        prop_assert!((general - brute).abs() < 1e-10, "{general} vs {brute}");
    }

    /// Both closed forms evaluate on the line through their own extremes.
    #[test]
    fn closed_forms_are_linear(
        lambda in 0.0..=1.0_f64,
        phi in 0.0..3.0_f64,
        links in 1.0..500.0_f64,
        mu_k in 1.0..30.0_f64,
        stat_scale in 1.0..50.0_f64,
    ) {
        let (v, lin) = delta_vertex_capped(VertexCappedInputs { lambda, phi, links });
        prop_assert!((v - lin.eval(lambda)).abs() < 1e-12);
        let (d0, d1) = vertex_capped_extremes(phi, links);
        prop_assert!((lin.eval(0.0) - d0).abs() < 1e-12);
        prop_assert!((lin.eval(1.0) - d1).abs() < 1e-12);

        let m_phi = mu_k.powf(phi + 1.0) * stat_scale;
        let x_sr = m_phi * mu_k.ln() * 0.8;
        let inp = CounterpartCappedInputs { lambda, phi, mu_k, x_sr, m_phi };
        let (v, lin) = delta_counterpart_capped(inp).unwrap();
        prop_assert!((v - lin.eval(lambda)).abs() < 1e-12);
        let (d0, d1) = counterpart_capped_extremes(phi, mu_k, x_sr, m_phi);
        prop_assert!((lin.eval(0.0) - d0).abs() < 1e-11);
        prop_assert!((lin.eval(1.0) - d1).abs() < 1e-11);
    }

    /// Without degree bias, attaching to a busy counterpart never wins,
    /// and it strictly loses whenever lambda > 0.
    #[test]
    fn unbiased_choice_never_prefers_sharing(
        lambda in 0.0..=1.0_f64,
        omega in 0.0..40.0_f64,
        links in 1.0..400.0_f64,
    ) {
        let d = delta_phi0(lambda, omega, links);
        prop_assert!(d <= 0.0);
        prop_assert_eq!(d < 0.0, lambda > 0.0 && omega >= 0.0);
        let (v, _) = delta_vertex_capped(VertexCappedInputs { lambda, phi: 0.0, links });
        prop_assert!(v <= 0.0);
    }

    /// With mu_k = 1 and degenerate statistics the counterpart-capped form
    /// collapses to the matching form.
    #[test]
    fn counterpart_form_embeds_matchings(
        lambda in 0.0..=1.0_f64,
        phi in 0.0..3.0_f64,
        links in 1.0..200.0_f64,
    ) {
        let links = links.round();
        let (v_vertex, _) = delta_vertex_capped(VertexCappedInputs { lambda, phi, links });
        let (v_cp, _) = delta_counterpart_capped(CounterpartCappedInputs {
            lambda, phi, mu_k: 1.0, x_sr: 0.0, m_phi: links,
        }).unwrap();
        prop_assert!((v_vertex - v_cp).abs() < 1e-12, "{v_vertex} vs {v_cp}");
    }

    /// Generated degree sequences keep their defining shape invariants.
    #[test]
    fn degree_sequences_are_well_formed(
        n in 2..400_usize,
        alpha in 0.0..2.5_f64,
        phi in 0.0..3.0_f64,
    ) {
        let cont = zipf::generate(n, alpha, phi, DegreeMode::Continuous).unwrap();
        let d = cont.degrees();
        prop_assert_eq!(d.len(), n);
        prop_assert_eq!(d[n - 1], 0.0);
        prop_assert_eq!(cont.degree(n - 1), 1.0);
        for w in d[..n - 1].windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
        prop_assert_eq!(cont.max_degree(), zipf::degree_cap(n, alpha, phi));
        let tau = alpha / (phi + 1.0);
        let (lo, hi) = zipf::links_bounds(tau, n);
        prop_assert!(lo <= cont.links() && cont.links() <= hi);

        let disc = zipf::generate(n, alpha, phi, DegreeMode::Discrete).unwrap();
        for (c, d) in cont.degrees().iter().zip(disc.degrees()) {
            prop_assert!((c - d).abs() <= 0.5);
            prop_assert_eq!(d.fract(), 0.0);
        }
        for &d in &disc.degrees()[..n - 1] {
            prop_assert!(d >= 1.0);
        }
    }

    /// Every point a boundary scan reports is a verified sign change.
    #[test]
    fn boundary_points_are_roots(phi in 0.25..2.5_f64) {
        let spec = {
            let mut s = lexlearn::phase::GridSpec::vertex_links(phi, 2.0, 120.0);
            s.y_res = 24;
            s
        };
        let curve = lexlearn::phase::boundary(&spec).unwrap();
        for &(lambda, links) in &curve.points {
            let (v, _) = delta_vertex_capped(VertexCappedInputs { lambda, phi, links });
            prop_assert!(v.abs() < 1e-8);
            prop_assert!(lambda > 0.0 && lambda < 1.0);
        }
    }
}
