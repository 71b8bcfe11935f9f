//! Weight statistics and energy functionals.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linalg::{eigvalsh, matrix_energy};

/// Relative tolerance between the two routes to the weighted Laplacian energy.
pub const ROUTE_AGREEMENT_TOL: f64 = 1e-8;

fn mean(xs: &[f64]) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::Empty("value list"));
    }
    Ok(xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Mean absolute deviation `(1/n)·Σ|x_i − x̄|`.
pub fn mean_deviation(xs: &[f64]) -> Result<f64> {
    let m = mean(xs)?;
    Ok(xs.iter().map(|x| (x - m).abs()).sum::<f64>() / xs.len() as f64)
}

/// Population variance `(1/n)·Σ(x_i − x̄)²`.
pub fn variance(xs: &[f64]) -> Result<f64> {
    let m = mean(xs)?;
    Ok(xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64)
}

/// Mean, mean deviation and variance of the vertex weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightStats {
    pub mean: f64,
    pub md: f64,
    pub var: f64,
}

pub fn weight_stats(g: &WeightedGraph) -> WeightStats {
    let w = g.weights();
    WeightStats {
        mean: mean(w).expect("graphs have at least one vertex"),
        md: mean_deviation(w).expect("graphs have at least one vertex"),
        var: variance(w).expect("graphs have at least one vertex"),
    }
}

/// E(G) = Σ|λ_i(A(G))|.
pub fn graph_energy(g: &WeightedGraph) -> Result<f64> {
    Ok(eigvalsh(&g.adjacency_matrix())?
        .iter()
        .map(|l| l.abs())
        .sum())
}

/// LE_ω(G) = Σ|μ_i − ω̄| over the eigenvalues μ_i of L_ω(G).
///
/// Debug builds also evaluate the matrix-energy route and fail with
/// [`Error::Inconsistent`] if the two disagree.
pub fn laplacian_energy(g: &WeightedGraph) -> Result<f64> {
    if cfg!(debug_assertions) {
        return laplacian_energy_checked(g).map(|le| le.spectral);
    }
    laplacian_energy_spectral(g)
}

fn laplacian_energy_spectral(g: &WeightedGraph) -> Result<f64> {
    let mean = g.mean_weight();
    Ok(eigvalsh(&g.laplacian())?
        .iter()
        .map(|mu| (mu - mean).abs())
        .sum())
}

/// LE_ω(G) as the matrix energy of `L_ω(G) − ω̄·I`.
pub fn laplacian_energy_via_matrix(g: &WeightedGraph) -> Result<f64> {
    matrix_energy(&g.laplacian().shift_diagonal(-g.mean_weight()))
}

/// Both routes to LE_ω(G) and their relative disagreement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaplacianEnergy {
    pub spectral: f64,
    pub matrix: f64,
    /// `|spectral − matrix| / (1 + |spectral|)`.
    pub relative_gap: f64,
}

/// Computes LE_ω(G) by both routes and fails if they disagree beyond
/// [`ROUTE_AGREEMENT_TOL`].
pub fn laplacian_energy_checked(g: &WeightedGraph) -> Result<LaplacianEnergy> {
    let spectral = laplacian_energy_spectral(g)?;
    let matrix = laplacian_energy_via_matrix(g)?;
    let relative_gap = (spectral - matrix).abs() / (1.0 + spectral.abs());
    if relative_gap > ROUTE_AGREEMENT_TOL {
        return Err(Error::Inconsistent {
            what: "Laplacian energy routes",
            first: spectral,
            second: matrix,
        });
    }
    Ok(LaplacianEnergy {
        spectral,
        matrix,
        relative_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Vec<(usize, usize)> {
        (1..n).map(|i| (i - 1, i)).collect()
    }

    #[test]
    fn mean_deviation_examples() {
        assert_eq!(mean_deviation(&[4.5, 4.5, 4.5]).unwrap(), 0.0);
        assert!((mean_deviation(&[1.0, 2.0, 3.0]).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(mean_deviation(&[0.0, 2.0]).unwrap(), 1.0);
        assert_eq!(mean_deviation(&[]), Err(Error::Empty("value list")));
    }

    #[test]
    fn variance_examples() {
        assert_eq!(variance(&[-2.0, -2.0, -2.0]).unwrap(), 0.0);
        assert!((variance(&[1.0, 2.0, 3.0]).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(variance(&[]).is_err());
    }

    #[test]
    fn weight_stats_examples() {
        let p3 = WeightedGraph::with_degree_weight(3, &path(3)).unwrap();
        let s = weight_stats(&p3);
        assert!((s.mean - 4.0 / 3.0).abs() < 1e-15);
        assert!((s.md - 4.0 / 9.0).abs() < 1e-15);

        let reg = WeightedGraph::with_constant_weight(4, &path(4), 3.0).unwrap();
        let s = weight_stats(&reg);
        assert_eq!((s.md, s.var), (0.0, 0.0));

        let a = WeightedGraph::with_constant_weight(2, &[(0, 1)], 2.0).unwrap();
        let b = WeightedGraph::with_constant_weight(2, &[(0, 1)], 4.0).unwrap();
        let u = WeightedGraph::disjoint_union(&[a, b]).unwrap();
        assert_eq!(weight_stats(&u).mean, 3.0);
    }

    #[test]
    fn graph_energy_examples() {
        assert_eq!(
            graph_energy(&WeightedGraph::with_degree_weight(4, &[]).unwrap()).unwrap(),
            0.0
        );
        let k2 = WeightedGraph::with_degree_weight(2, &[(0, 1)]).unwrap();
        assert!((graph_energy(&k2).unwrap() - 2.0).abs() < 1e-14);
        let p3 = WeightedGraph::with_degree_weight(3, &path(3)).unwrap();
        assert!((graph_energy(&p3).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn laplacian_energy_examples() {
        let k2 = WeightedGraph::with_degree_weight(2, &[(0, 1)]).unwrap();
        assert!((laplacian_energy(&k2).unwrap() - 2.0).abs() < 1e-12);
        let p3 = WeightedGraph::with_degree_weight(3, &path(3)).unwrap();
        assert!((laplacian_energy(&p3).unwrap() - 10.0 / 3.0).abs() < 1e-12);
        let c4 = WeightedGraph::with_degree_weight(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert!((laplacian_energy(&c4).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn single_vertex_has_zero_energies() {
        let g = WeightedGraph::with_constant_weight(1, &[], 3.7).unwrap();
        assert_eq!(graph_energy(&g).unwrap(), 0.0);
        assert_eq!(laplacian_energy(&g).unwrap(), 0.0);
    }

    #[test]
    fn routes_agree() {
        let g = WeightedGraph::new(
            5,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3)],
            vec![0.3, 1.7, 2.2, 4.0, 0.9],
        )
        .unwrap();
        let le = laplacian_energy_checked(&g).unwrap();
        assert!(le.relative_gap <= ROUTE_AGREEMENT_TOL);
        assert_eq!(laplacian_energy_via_matrix(&g).unwrap(), le.matrix);
    }
}
