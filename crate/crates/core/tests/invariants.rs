//! Structural and behavioral invariants exercised over randomized corpora.

use dualcen::centrality::{dual_centrality, rank_vertices, CentralityConfig, DEFAULT_RANK_TIE_TOL};
use dualcen::dualeig::{build_m_general, build_m_symmetric};
use dualcen::hypergraph::{Hypergraph, Perturbation};
use dualcen::spectral::{perron_pair, SpectralConfig};
use dualcen_testkit::{random_connected_hypergraph, random_perturbation, seeded};

use dualcen_testkit::Rng;
use dualcen_testkit::SliceRandom;

#[test]
fn adding_an_edge_never_decreases_the_spectral_radius() {
    let mut rng = seeded(23);
    let mut grown = 0;
    'outer: for _ in 0..40 {
        let m = rng.random_range(2..=3usize);
        let n = rng.random_range((m + 1)..=7usize);
        let h = random_connected_hypergraph(&mut rng, n, m);
        let before = perron_pair(&h.adjacency_tensor().unwrap(), &SpectralConfig::default())
            .unwrap()
            .lambda_s;
        // Find an absent edge to add.
        let mut pool: Vec<usize> = (0..n).collect();
        for _ in 0..50 {
            pool.shuffle(&mut rng);
            let mut edge = pool[..m].to_vec();
            edge.sort_unstable();
            if !h.contains_edge(&edge) {
                let mut edges = h.edges().to_vec();
                edges.push(edge);
                let grown_h = Hypergraph::new(n, m, edges).unwrap();
                let after = perron_pair(
                    &grown_h.adjacency_tensor().unwrap(),
                    &SpectralConfig::default(),
                )
                .unwrap()
                .lambda_s;
                assert!(
                    after >= before - 1e-10,
                    "λ dropped from {before} to {after} after adding an edge"
                );
                grown += 1;
                continue 'outer;
            }
        }
    }
    assert!(grown >= 20, "only {grown} grow steps exercised");
}

#[test]
fn general_and_symmetric_m_routes_agree_on_adjacency_tensors() {
    let mut rng = seeded(29);
    for _ in 0..30 {
        let m = rng.random_range(2..=4usize);
        let n = rng.random_range(m..=8usize);
        let h = random_connected_hypergraph(&mut rng, n, m);
        let t = h.adjacency_tensor().unwrap();
        let p = perron_pair(&t, &SpectralConfig::default()).unwrap();
        let general = build_m_general(&t, p.lambda_s, &p.x_s).unwrap();
        let symmetric = build_m_symmetric(&h, p.lambda_s, &p.x_s).unwrap();
        assert!((general - symmetric).amax() <= 1e-12);
    }
}

#[test]
fn ranking_is_stable_under_vertex_relabeling() {
    let mut rng = seeded(31);
    for _ in 0..15 {
        let m = rng.random_range(2..=3usize);
        let n = rng.random_range(m..=7usize);
        let h = random_connected_hypergraph(&mut rng, n, m);
        let p = random_perturbation(&mut rng, &h);

        let base = dual_centrality(&h, &p, &CentralityConfig::default()).unwrap();
        let base_table = rank_vertices(&base, DEFAULT_RANK_TIE_TOL);

        // Relabel with a random permutation.
        let mut relabel: Vec<usize> = (0..n).collect();
        relabel.shuffle(&mut rng);
        let edges: Vec<Vec<usize>> = h
            .edges()
            .iter()
            .map(|e| e.iter().map(|&v| relabel[v]).collect())
            .collect();
        let hp = Hypergraph::new(n, m, edges).unwrap();
        let pp = Perturbation::new(
            p.entries()
                .iter()
                .map(|(t, w)| (t.iter().map(|&v| relabel[v]).collect(), *w))
                .collect(),
        )
        .unwrap();
        let permuted = dual_centrality(&hp, &pp, &CentralityConfig::default()).unwrap();
        let permuted_table = rank_vertices(&permuted, DEFAULT_RANK_TIE_TOL);

        // Map the permuted groups back and compare.
        let mut mapped: Vec<Vec<usize>> = permuted_table
            .groups
            .iter()
            .map(|g| {
                let mut back: Vec<usize> = g
                    .iter()
                    .map(|&v| relabel.iter().position(|&w| w == v).unwrap())
                    .collect();
                back.sort_unstable();
                back
            })
            .collect();
        for g in &mut mapped {
            g.sort_unstable();
        }
        assert_eq!(mapped, base_table.groups);
    }
}

#[test]
fn perturbing_one_edge_of_a_regular_instance_lifts_its_vertices() {
    // On regular instances the Perron vector is uniform, so every pair is
    // tied; perturbing a single edge must rank its vertices strictly above
    // all others.
    let instances: Vec<Hypergraph> = vec![
        // cycles C5, C8
        Hypergraph::parse("1 2\n2 3\n3 4\n4 5\n1 5\n").unwrap(),
        Hypergraph::parse("1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n7 8\n1 8\n").unwrap(),
        // complete graph K5
        Hypergraph::new(
            5,
            2,
            (0..5)
                .flat_map(|a| ((a + 1)..5).map(move |b| vec![a, b]))
                .collect(),
        )
        .unwrap(),
        // complete 3-uniform on 5 vertices
        Hypergraph::new(
            5,
            3,
            (0..5)
                .flat_map(|a| {
                    ((a + 1)..5).flat_map(move |b| ((b + 1)..5).map(move |c| vec![a, b, c]))
                })
                .collect(),
        )
        .unwrap(),
        // the 2-regular 3-uniform built-in
        dualcen::builtin_instance("fig2-candidate")
            .unwrap()
            .hypergraph,
        // complete 4-uniform on 6 vertices
        Hypergraph::new(
            6,
            4,
            (0..6)
                .flat_map(|a| {
                    ((a + 1)..6).flat_map(move |b| {
                        ((b + 1)..6).flat_map(move |c| ((c + 1)..6).map(move |d| vec![a, b, c, d]))
                    })
                })
                .collect(),
        )
        .unwrap(),
    ];
    let mut rng = seeded(37);
    for h in instances {
        let edge = h.edges()[rng.random_range(0..h.edge_count())].clone();
        let p = Perturbation::new(vec![(edge.clone(), 1.0)]).unwrap();
        let r = dual_centrality(&h, &p, &CentralityConfig::default()).unwrap();
        let spread = r
            .x_s
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        assert!(spread.1 - spread.0 < 1e-10, "instance is not regular");
        let inside = edge.iter().map(|&v| r.x_d[v]).fold(f64::INFINITY, f64::min);
        let outside = (0..h.vertex_count())
            .filter(|v| !edge.contains(v))
            .map(|v| r.x_d[v])
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(
            inside > outside + 1e-12,
            "edge {edge:?}: inside min {inside}, outside max {outside}"
        );
    }
}

#[test]
fn graph_case_m_matrix_is_shifted_adjacency() {
    let mut rng = seeded(41);
    for _ in 0..10 {
        let n = rng.random_range(3..=8usize);
        let h = random_connected_hypergraph(&mut rng, n, 2);
        let t = h.adjacency_tensor().unwrap();
        let p = perron_pair(&t, &SpectralConfig::default()).unwrap();
        let m = build_m_symmetric(&h, p.lambda_s, &p.x_s).unwrap();
        for i in 0..n {
            for j in 0..n {
                let adj = if h.contains_edge(&[i, j]) { 1.0 } else { 0.0 };
                let want = if i == j { p.lambda_s } else { -adj };
                assert!((m[(i, j)] - want).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn general_left_null_path_recovers_x_s_on_symmetric_instances() {
    // On symmetric M the bordered factorization must agree with the closed
    // form y = x_s / ‖x_s‖₂.
    let mut rng = seeded(43);
    for _ in 0..20 {
        let m = rng.random_range(2..=4usize);
        let n = rng.random_range(m..=8usize);
        let h = random_connected_hypergraph(&mut rng, n, m);
        let t = h.adjacency_tensor().unwrap();
        let p = perron_pair(&t, &SpectralConfig::default()).unwrap();
        let mat = build_m_symmetric(&h, p.lambda_s, &p.x_s).unwrap();
        let xs = nalgebra::DVector::from_vec(p.x_s.clone());
        let y = dualcen::msolve::left_null_vector(&mat, false, &xs).unwrap();
        let want = &xs / xs.norm();
        assert!((y - want).amax() <= 1e-9);
    }
}

#[test]
fn perturbed_hyperedge_vertices_gain_positive_tie_difference() {
    let inst = dualcen::builtin_instance("fig2-candidate").unwrap();
    let h = &inst.hypergraph;
    let t = h.adjacency_tensor().unwrap();
    let pp = perron_pair(&t, &SpectralConfig::default()).unwrap();
    let mat = build_m_symmetric(h, pp.lambda_s, &pp.x_s).unwrap();
    let mm = dualcen::msolve::MMatrix::new(mat, nalgebra::DVector::from_vec(pp.x_s.clone()), true)
        .unwrap();
    let a_d = inst.perturbations[0].to_tensor(3, 9).unwrap();
    let lambda_d = dualcen::dualeig::lambda_dual(mm.y_left(), &a_d, &pp.x_s).unwrap();
    let b = dualcen::dualeig::dual_system_rhs(&a_d, lambda_d, &pp.x_s).unwrap();
    // Vertex 1 sits in the perturbed hyperedge {1,2,3}, vertex 4 does not.
    let d =
        dualcen::dualeig::tie_difference(0, 3, &mm, &b, dualcen::dualeig::InverseKind::Group, 1e-9)
            .unwrap();
    assert!(d > 1e-6, "tie difference {d}");
}

#[test]
fn public_types_are_send_and_sync() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<dualcen::DualNumber>();
    assert_send_sync::<dualcen::SparseSymTensor>();
    assert_send_sync::<dualcen::Hypergraph>();
    assert_send_sync::<dualcen::Perturbation>();
    assert_send_sync::<dualcen::PerronPair>();
    assert_send_sync::<dualcen::msolve::MMatrix>();
    assert_send_sync::<dualcen::DualCentralityResult>();
    assert_send_sync::<dualcen::RankTable>();
}
