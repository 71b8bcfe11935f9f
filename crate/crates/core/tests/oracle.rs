//! Cross-checks against nalgebra's symmetric eigensolver and SVD.

use graph_energy::linalg::{eigvalsh, is_psd, matrix_abs};
use graph_energy::rng::SplitMix64;
use graph_energy::{
    graph_energy, laplacian_energy, matrix_energy, singular_values, weight_stats, SymMatrix,
    WeightedGraph,
};
use nalgebra::{DMatrix, SymmetricEigen};

fn to_na(m: &SymMatrix) -> DMatrix<f64> {
    let n = m.order();
    DMatrix::from_fn(n, n, |i, j| m.get(i, j))
}

fn na_eigs(m: &SymMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(to_na(m))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn na_energy(m: &SymMatrix) -> f64 {
    to_na(m).singular_values().iter().sum()
}

fn na_laplacian_energy(g: &WeightedGraph) -> f64 {
    let mean = g.mean_weight();
    na_eigs(&g.laplacian())
        .iter()
        .map(|mu| (mu - mean).abs())
        .sum()
}

fn random_symmetric(n: usize, rng: &mut SplitMix64) -> SymMatrix {
    SymMatrix::symmetric_from_fn(n, |_, _| rng.uniform(-5.0, 5.0)).unwrap()
}

fn assert_close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol * (1.0 + b.abs()), "{a} vs {b}");
}

#[test]
fn eigenvalues_match_reference() {
    let mut rng = SplitMix64::new(11);
    for n in 1..=30 {
        let m = random_symmetric(n, &mut rng);
        let ours = eigvalsh(&m).unwrap();
        let theirs = na_eigs(&m);
        for (a, b) in ours.iter().zip(&theirs) {
            assert_close(*a, *b, 1e-10);
        }
    }
}

#[test]
fn random_pair_seed_7() {
    let mut rng = SplitMix64::new(7);
    let a = random_symmetric(5, &mut rng);
    let b = random_symmetric(5, &mut rng);
    let sum = a.add(&b).unwrap();
    assert_close(matrix_energy(&a).unwrap(), na_energy(&a), 1e-10);
    assert_close(matrix_energy(&b).unwrap(), na_energy(&b), 1e-10);
    assert_close(matrix_energy(&sum).unwrap(), na_energy(&sum), 1e-10);
    assert!(na_energy(&sum) <= na_energy(&a) + na_energy(&b));
}

#[test]
fn singular_values_of_nonsymmetric_input() {
    let mut rng = SplitMix64::new(3);
    for n in 1..=8 {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.uniform(-2.0, 2.0)).collect())
            .collect();
        let m = SymMatrix::from_rows(&rows).unwrap();
        let mut theirs: Vec<f64> = to_na(&m).singular_values().iter().copied().collect();
        theirs.sort_by(|a, b| b.total_cmp(a));
        let ours = singular_values(&m).unwrap().values;
        for (a, b) in ours.iter().zip(&theirs) {
            // singular values via the Gram matrix lose about half the digits near zero
            assert!((a - b).abs() <= 1e-6, "{a} vs {b}");
        }
    }
}

#[test]
fn matrix_abs_squares_back() {
    let mut rng = SplitMix64::new(5);
    for n in 1..=10 {
        let m = random_symmetric(n, &mut rng);
        let abs = matrix_abs(&m).unwrap();
        assert!(is_psd(&abs, 1e-10).unwrap());
        let sq = to_na(&abs) * to_na(&abs);
        let m2 = to_na(&m) * to_na(&m);
        assert!((sq - m2).amax() <= 1e-9 * (1.0 + m.frobenius_norm().powi(2)));
    }
}

#[test]
fn golden_graph_values() {
    let p3 = WeightedGraph::with_degree_weight(3, &[(0, 1), (1, 2)]).unwrap();
    assert_close(
        graph_energy(&p3).unwrap(),
        na_energy(&p3.adjacency_matrix()),
        1e-12,
    );
    assert_close(
        laplacian_energy(&p3).unwrap(),
        na_laplacian_energy(&p3),
        1e-12,
    );
    assert_close(na_energy(&p3.adjacency_matrix()), 2.0 * 2f64.sqrt(), 1e-12);
    assert_close(na_laplacian_energy(&p3), 10.0 / 3.0, 1e-12);
    assert_close(3.0 * weight_stats(&p3).md, 4.0 / 3.0, 1e-12);

    let c4 = WeightedGraph::with_degree_weight(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
    assert_close(na_energy(&c4.adjacency_matrix()), 4.0, 1e-12);
    assert_close(na_laplacian_energy(&c4), 4.0, 1e-12);

    let star = WeightedGraph::with_degree_weight(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
    assert_close(
        na_energy(&star.adjacency_matrix()),
        2.0 * 3f64.sqrt(),
        1e-12,
    );
    assert_close(na_laplacian_energy(&star), 5.0, 1e-12);
    assert_close(laplacian_energy(&star).unwrap(), 5.0, 1e-12);
}

#[test]
fn random_graph_energies_match_reference() {
    let mut rng = SplitMix64::new(19);
    for _ in 0..200 {
        let n = rng.range_inclusive(1, 12);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.bernoulli(0.4) {
                    edges.push((i, j));
                }
            }
        }
        let w: Vec<f64> = (0..n).map(|_| rng.uniform(0.5, 4.0)).collect();
        let g = WeightedGraph::new(n, &edges, w).unwrap();
        assert_close(
            graph_energy(&g).unwrap(),
            na_energy(&g.adjacency_matrix()),
            1e-10,
        );
        assert_close(
            laplacian_energy(&g).unwrap(),
            na_laplacian_energy(&g),
            1e-10,
        );
    }
}
