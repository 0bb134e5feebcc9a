//! Cross-checks of the sparse implementation paths against brute-force dense
//! evaluation straight from the defining sums.

use dualcen::dual::DualNumber;
use dualcen::dualeig::build_m_general;
use dualcen::tensor::{dual_tensor_apply, SparseSymTensor};
use dualcen_testkit::{seeded, DenseTensor, TestRng};

use dualcen_testkit::Rng;
use nalgebra::{DMatrix, DVector};

/// Random symmetric tensor with arbitrary (possibly repeated-index) support
/// tuples and values in `[lo, hi]`.
fn random_tensor(rng: &mut TestRng, m: usize, n: usize, lo: f64, hi: f64) -> SparseSymTensor {
    let mut t = SparseSymTensor::new(m, n).unwrap();
    let count = rng.random_range(1..=2 * n);
    for _ in 0..count {
        let tuple: Vec<usize> = (0..m).map(|_| rng.random_range(0..n)).collect();
        t.accumulate(&tuple, rng.random_range(lo..hi)).unwrap();
    }
    t
}

fn random_vec(rng: &mut TestRng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

#[test]
fn sparse_apply_matches_dense_definition() {
    let mut rng = seeded(11);
    for trial in 0..60 {
        let m = rng.random_range(2..=4usize);
        let n = rng.random_range(2..=6usize);
        let t = random_tensor(&mut rng, m, n, -2.0, 2.0);
        let x = random_vec(&mut rng, n, -1.5, 1.5);
        let got = t.apply(&x).unwrap();
        let want = DenseTensor::from_sparse(&t).apply(&x);
        for (g, w) in got.iter().zip(&want) {
            assert!(
                (g - w).abs() <= 1e-12 * (1.0 + w.abs()),
                "trial {trial}: got {g}, want {w}"
            );
        }
    }
}

#[test]
fn dual_apply_matches_slotwise_expansion() {
    // The dual product expands as
    //   A x^{m-1} = A_s x_s^{m-1} + ε ( (Σ_k A^{(k)}) x_d + A_d x_s^{m-1} ),
    // with the slot matrices evaluated densely here.
    let mut rng = seeded(13);
    for trial in 0..40 {
        let m = rng.random_range(2..=4usize);
        let n = rng.random_range(2..=5usize);
        let a_s = random_tensor(&mut rng, m, n, -1.0, 1.0);
        let a_d = random_tensor(&mut rng, m, n, -1.0, 1.0);
        let x_s = random_vec(&mut rng, n, -1.2, 1.2);
        let x_d = random_vec(&mut rng, n, -1.2, 1.2);

        let x: Vec<DualNumber> = x_s
            .iter()
            .zip(&x_d)
            .map(|(&s, &d)| DualNumber::new(s, d))
            .collect();
        let got = dual_tensor_apply(&a_s, &a_d, &x).unwrap();

        let dense_s = DenseTensor::from_sparse(&a_s);
        let standard = dense_s.apply(&x_s);
        let mut slot_sum = DMatrix::<f64>::zeros(n, n);
        for k in 2..=m {
            slot_sum += dense_s.slot_matrix(k, &x_s);
        }
        let dual_from_xd = &slot_sum * DVector::from_vec(x_d.clone());
        let dual_from_ad = DenseTensor::from_sparse(&a_d).apply(&x_s);

        for i in 0..n {
            let want_s = standard[i];
            let want_d = dual_from_xd[i] + dual_from_ad[i];
            assert!(
                (got[i].s - want_s).abs() <= 1e-11 * (1.0 + want_s.abs()),
                "trial {trial} standard[{i}]: got {}, want {want_s}",
                got[i].s
            );
            assert!(
                (got[i].d - want_d).abs() <= 1e-11 * (1.0 + want_d.abs()),
                "trial {trial} dual[{i}]: got {}, want {want_d}",
                got[i].d
            );
        }
    }
}

#[test]
fn general_m_matrix_matches_dense_slot_matrices() {
    let mut rng = seeded(17);
    for trial in 0..40 {
        let m = rng.random_range(2..=4usize);
        let n = rng.random_range(2..=5usize);
        let a_s = random_tensor(&mut rng, m, n, -1.0, 1.0);
        let x_s = random_vec(&mut rng, n, 0.2, 1.5);
        let lambda = rng.random_range(0.5..3.0);

        let got = build_m_general(&a_s, lambda, &x_s).unwrap();

        let dense = DenseTensor::from_sparse(&a_s);
        let mut want = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            want[(i, i)] = (m - 1) as f64 * lambda * x_s[i].powi(m as i32 - 2);
        }
        for k in 2..=m {
            want -= dense.slot_matrix(k, &x_s);
        }
        assert!((got - want).amax() <= 1e-11, "trial {trial} (m={m}, n={n})");
    }
}

#[test]
fn weak_irreducibility_matches_union_find_on_random_instances() {
    let mut rng = seeded(19);
    let mut connected_seen = 0;
    let mut disconnected_seen = 0;
    for _ in 0..150 {
        let m = rng.random_range(2..=4usize);
        let n = rng.random_range(m..=8usize);
        let h = dualcen_testkit::random_hypergraph(&mut rng, n, m);
        let want = dualcen_testkit::union_find_connected(&h);
        let got = h.adjacency_tensor().unwrap().is_weakly_irreducible();
        assert_eq!(got, want, "n={n} m={m} edges={:?}", h.edges());
        if want {
            connected_seen += 1;
        } else {
            disconnected_seen += 1;
        }
    }
    // The corpus must exercise both outcomes.
    assert!(
        connected_seen >= 20,
        "only {connected_seen} connected instances"
    );
    assert!(
        disconnected_seen >= 20,
        "only {disconnected_seen} disconnected instances"
    );
}
