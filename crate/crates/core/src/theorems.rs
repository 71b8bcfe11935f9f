//! Numerical checks of the Ky Fan trace-norm inequality and the weighted
//! Laplacian energy bounds derived from it.
//!
//! Every checker returns a [`BoundReport`] of the form `lhs ≤ rhs`, with
//! `gap = rhs − lhs`. Where a structural characterization of the equality case
//! is known, it is evaluated on the instance (`predicted_equality`) and
//! compared with the numerical verdict (`consistent`).

use serde::{Deserialize, Serialize};

use crate::energy::{graph_energy, laplacian_energy_checked, weight_stats, LaplacianEnergy};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linalg::{eigvalsh, is_psd, matrix_energy, SymMatrix};

/// Tolerance used when deciding whether a Ky Fan operand is PSD.
pub const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// E(A + B) ≤ E(A) + E(B).
    KyFan,
    /// LE_ω(G) ≤ n·MD_ω(G) + E(G); equality iff ω-regular (connected G).
    MdUpper,
    /// E(G) ≤ LE_ω(G) for bipartite G; equality iff ω-regular.
    BipartiteLower,
    /// max{n·MD_ω(G), E(G)} ≤ LE_ω(G) ≤ n·MD_ω(G) + E(G) for bipartite G.
    SandwichLower,
    /// LE_ω(⋃G_i) ≤ Σ LE_ωi(G_i) + Σ|ω̄_i − ω̄|·n_i; equality iff all ω̄_i = ω̄.
    UnionUpper,
    /// L_ω(G) and L†_ω(G) have the same spectrum for bipartite G.
    BipartiteSimilarity,
}

impl Theorem {
    pub const ALL: [Theorem; 6] = [
        Theorem::KyFan,
        Theorem::MdUpper,
        Theorem::BipartiteLower,
        Theorem::SandwichLower,
        Theorem::UnionUpper,
        Theorem::BipartiteSimilarity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::KyFan => "ky_fan",
            Theorem::MdUpper => "md_upper",
            Theorem::BipartiteLower => "bipartite_lower",
            Theorem::SandwichLower => "sandwich_lower",
            Theorem::UnionUpper => "union_upper",
            Theorem::BipartiteSimilarity => "bipartite_similarity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Equality {
    Strict,
    EqualWithinTol,
    Violated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// A bound holds iff `gap ≥ −abs_tol`.
    pub abs_tol: f64,
    /// Equality iff `|gap| ≤ eq_tol·(1 + |rhs|)`.
    pub eq_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            abs_tol: 1e-8,
            eq_tol: 1e-7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lower,
    Upper,
}

/// The upper half of a two-sided bound: `value ≤ bound`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UpperSide {
    pub value: f64,
    pub bound: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub theorem: Theorem,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub holds: bool,
    pub equality: Equality,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_equality: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consistent: Option<bool>,
    /// Two-sided bounds only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<UpperSide>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub binding: Option<Side>,
}

impl BoundReport {
    fn classify(
        theorem: Theorem,
        lhs: f64,
        rhs: f64,
        gap: f64,
        predicted: Option<bool>,
        tol: &Tolerances,
    ) -> Self {
        let holds = gap >= -tol.abs_tol;
        let equality = if gap.abs() <= tol.eq_tol * (1.0 + rhs.abs()) {
            Equality::EqualWithinTol
        } else if gap > 0.0 {
            Equality::Strict
        } else {
            Equality::Violated
        };
        let consistent = predicted.map(|p| p == (equality == Equality::EqualWithinTol));
        Self {
            theorem,
            lhs,
            rhs,
            gap,
            holds,
            equality,
            predicted_equality: predicted,
            consistent,
            upper: None,
            binding: None,
        }
    }

    fn new(
        theorem: Theorem,
        lhs: f64,
        rhs: f64,
        predicted: Option<bool>,
        tol: &Tolerances,
    ) -> Self {
        Self::classify(theorem, lhs, rhs, rhs - lhs, predicted, tol)
    }

    pub fn is_equal(&self) -> bool {
        self.equality == Equality::EqualWithinTol
    }
}

/// Spectral quantities of one weighted graph, computed once and shared by the
/// graph checkers.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphQuantities {
    pub n: usize,
    pub energy: f64,
    pub laplacian_energy: LaplacianEnergy,
    pub mean: f64,
    /// n·MD_ω(G).
    pub n_md: f64,
    pub connected: bool,
    pub bipartite: bool,
    pub regular: bool,
}

impl GraphQuantities {
    pub fn compute(g: &WeightedGraph, tol: &Tolerances) -> Result<Self> {
        let stats = weight_stats(g);
        let n = g.vertex_count();
        Ok(Self {
            n,
            energy: graph_energy(g)?,
            laplacian_energy: laplacian_energy_checked(g)?,
            mean: stats.mean,
            n_md: n as f64 * stats.md,
            connected: g.is_connected(),
            bipartite: g.is_bipartite().is_some(),
            regular: g.is_omega_regular(tol.eq_tol),
        })
    }

    fn le(&self) -> f64 {
        self.laplacian_energy.spectral
    }
}

/// E(A + B) ≤ E(A) + E(B). Equality is predicted when both operands are PSD;
/// otherwise no prediction is made.
pub fn check_ky_fan(a: &SymMatrix, b: &SymMatrix, tol: &Tolerances) -> Result<BoundReport> {
    let sum = a.add(b)?;
    let lhs = matrix_energy(&sum)?;
    let rhs = matrix_energy(a)? + matrix_energy(b)?;
    let both_psd =
        a.is_symmetric() && b.is_symmetric() && is_psd(a, PSD_TOL)? && is_psd(b, PSD_TOL)?;
    Ok(BoundReport::new(
        Theorem::KyFan,
        lhs,
        rhs,
        both_psd.then_some(true),
        tol,
    ))
}

/// The Ky Fan split used for the upper bound:
/// `L_ω − ω̄I = (D_ω − ω̄I) + (−A)`.
pub fn md_split(g: &WeightedGraph) -> (SymMatrix, SymMatrix) {
    (
        g.weight_diag().shift_diagonal(-g.mean_weight()),
        g.adjacency_matrix().neg(),
    )
}

/// LE_ω(G) ≤ n·MD_ω(G) + E(G). For connected G equality is predicted iff G is ω-regular.
pub fn check_md_bound(g: &WeightedGraph, tol: &Tolerances) -> Result<BoundReport> {
    Ok(md_bound_report(&GraphQuantities::compute(g, tol)?, tol))
}

pub fn md_bound_report(q: &GraphQuantities, tol: &Tolerances) -> BoundReport {
    let predicted = q.connected.then_some(q.regular);
    BoundReport::new(Theorem::MdUpper, q.le(), q.n_md + q.energy, predicted, tol)
}

/// E(G) ≤ LE_ω(G) for bipartite G; equality predicted iff G is ω-regular.
pub fn check_bipartite_lower(g: &WeightedGraph, tol: &Tolerances) -> Result<BoundReport> {
    require_bipartite(g)?;
    bipartite_lower_report(&GraphQuantities::compute(g, tol)?, tol)
}

pub fn bipartite_lower_report(q: &GraphQuantities, tol: &Tolerances) -> Result<BoundReport> {
    if !q.bipartite {
        return Err(Error::NotBipartite);
    }
    Ok(BoundReport::new(
        Theorem::BipartiteLower,
        q.energy,
        q.le(),
        Some(q.regular),
        tol,
    ))
}

/// `max{n·MD_ω, E} ≤ LE_ω ≤ n·MD_ω + E` for bipartite G.
///
/// `lhs`/`rhs` describe the lower side, `upper` the upper side; `gap` is the
/// smaller of the two gaps and `binding` names the side it came from.
pub fn check_sandwich(g: &WeightedGraph, tol: &Tolerances) -> Result<BoundReport> {
    require_bipartite(g)?;
    sandwich_report(&GraphQuantities::compute(g, tol)?, tol)
}

pub fn sandwich_report(q: &GraphQuantities, tol: &Tolerances) -> Result<BoundReport> {
    if !q.bipartite {
        return Err(Error::NotBipartite);
    }
    let lhs = q.n_md.max(q.energy);
    let rhs = q.le();
    let lower_gap = rhs - lhs;
    let upper = UpperSide {
        value: q.le(),
        bound: q.n_md + q.energy,
        gap: q.n_md + q.energy - q.le(),
    };
    let (gap, binding) = if upper.gap < lower_gap {
        (upper.gap, Side::Upper)
    } else {
        (lower_gap, Side::Lower)
    };
    let mut report = BoundReport::classify(Theorem::SandwichLower, lhs, rhs, gap, None, tol);
    report.upper = Some(upper);
    report.binding = Some(binding);
    Ok(report)
}

/// LE_ω(⋃G_i) ≤ Σ LE_ωi(G_i) + Σ|ω̄_i − ω̄|·n_i; equality predicted iff every
/// component mean is within `eq_tol·(1 + |ω̄|)` of the overall mean.
pub fn check_union_bound(parts: &[WeightedGraph], tol: &Tolerances) -> Result<BoundReport> {
    let union = WeightedGraph::disjoint_union(parts)?;
    let mean = union.mean_weight();
    let lhs = laplacian_energy_checked(&union)?.spectral;
    let mut rhs = 0.0;
    let mut means_equal = true;
    for g in parts {
        let b = g.mean_weight() - mean;
        rhs += laplacian_energy_checked(g)?.spectral + b.abs() * g.vertex_count() as f64;
        means_equal &= b.abs() <= tol.eq_tol * (1.0 + mean.abs());
    }
    Ok(BoundReport::new(
        Theorem::UnionUpper,
        lhs,
        rhs,
        Some(means_equal),
        tol,
    ))
}

/// Sorted spectra of L_ω(G) and L†_ω(G) agree for bipartite G.
///
/// Reported as `lhs` = largest elementwise eigenvalue difference, `rhs` = 0,
/// so `holds` means the difference is within `abs_tol`.
pub fn check_bipartite_similarity(g: &WeightedGraph, tol: &Tolerances) -> Result<BoundReport> {
    require_bipartite(g)?;
    let l = eigvalsh(&g.laplacian())?;
    let s = eigvalsh(&g.signless_laplacian())?;
    let diff = l
        .iter()
        .zip(&s)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(BoundReport::new(
        Theorem::BipartiteSimilarity,
        diff,
        0.0,
        Some(true),
        tol,
    ))
}

fn require_bipartite(g: &WeightedGraph) -> Result<()> {
    g.is_bipartite().map(|_| ()).ok_or(Error::NotBipartite)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: Tolerances = Tolerances {
        abs_tol: 1e-8,
        eq_tol: 1e-7,
    };

    fn p3() -> WeightedGraph {
        WeightedGraph::with_degree_weight(3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn c4() -> WeightedGraph {
        WeightedGraph::with_degree_weight(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap()
    }

    fn k2(w: f64) -> WeightedGraph {
        WeightedGraph::with_constant_weight(2, &[(0, 1)], w).unwrap()
    }

    fn approx(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-10
    }

    #[test]
    fn ky_fan_examples() {
        let i2 = SymMatrix::identity(2).unwrap();
        let r = check_ky_fan(&i2, &i2, &TOL).unwrap();
        assert!(approx(r.lhs, 4.0) && approx(r.rhs, 4.0));
        assert!(r.is_equal());
        assert_eq!(r.consistent, Some(true));

        let a = SymMatrix::from_diag(&[1.0, -1.0]).unwrap();
        let b = SymMatrix::from_diag(&[-1.0, 1.0]).unwrap();
        let r = check_ky_fan(&a, &b, &TOL).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 4.0));
        assert_eq!(r.equality, Equality::Strict);
        assert_eq!(r.predicted_equality, None);

        assert!(matches!(
            check_ky_fan(&i2, &SymMatrix::identity(3).unwrap(), &TOL),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn md_bound_examples() {
        let r = check_md_bound(&c4(), &TOL).unwrap();
        assert!(approx(r.lhs, 4.0) && approx(r.rhs, 4.0));
        assert!(r.is_equal());
        assert_eq!(
            (r.predicted_equality, r.consistent),
            (Some(true), Some(true))
        );

        let r = check_md_bound(&p3(), &TOL).unwrap();
        assert!(approx(r.lhs, 10.0 / 3.0));
        assert!(approx(r.rhs, 4.0 / 3.0 + 2.0 * 2f64.sqrt()));
        assert_eq!(r.equality, Equality::Strict);
        assert_eq!(
            (r.predicted_equality, r.consistent),
            (Some(false), Some(true))
        );

        let r = check_md_bound(&k2(5.0), &TOL).unwrap();
        assert!(r.is_equal());
        assert_eq!(r.predicted_equality, Some(true));
    }

    #[test]
    fn md_bound_disconnected_has_no_prediction() {
        // two isolated vertices with different weights attain equality without being ω-regular
        let g = WeightedGraph::new(2, &[], vec![1.0, 3.0]).unwrap();
        let r = check_md_bound(&g, &TOL).unwrap();
        assert!(r.is_equal());
        assert_eq!(r.predicted_equality, None);
        assert_eq!(r.consistent, None);
    }

    #[test]
    fn bipartite_lower_examples() {
        let r = check_bipartite_lower(&c4(), &TOL).unwrap();
        assert!(r.is_equal() && r.predicted_equality == Some(true));

        let r = check_bipartite_lower(&p3(), &TOL).unwrap();
        assert!(approx(r.lhs, 2.0 * 2f64.sqrt()) && approx(r.rhs, 10.0 / 3.0));
        assert_eq!(r.equality, Equality::Strict);

        let star = WeightedGraph::with_degree_weight(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let r = check_bipartite_lower(&star, &TOL).unwrap();
        assert!(approx(r.rhs, 5.0));
        assert!(approx(r.lhs, 2.0 * 3f64.sqrt()));
        assert_eq!(r.consistent, Some(true));

        let c3 = WeightedGraph::with_degree_weight(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(check_bipartite_lower(&c3, &TOL), Err(Error::NotBipartite));
    }

    #[test]
    fn sandwich_examples() {
        let r = check_sandwich(&p3(), &TOL).unwrap();
        assert!(approx(r.lhs, 2.0 * 2f64.sqrt()));
        assert!(approx(r.rhs, 10.0 / 3.0));
        let up = r.upper.unwrap();
        assert!(approx(up.bound, 4.0 / 3.0 + 2.0 * 2f64.sqrt()));
        assert!(r.holds);
        assert_eq!(r.binding, Some(Side::Lower));

        let r = check_sandwich(&c4(), &TOL).unwrap();
        assert!(r.is_equal());
        assert!(r.upper.unwrap().gap.abs() < 1e-10);

        let r = check_sandwich(&k2(3.0), &TOL).unwrap();
        assert!(approx(r.lhs, 2.0) && approx(r.rhs, 2.0));
        assert!(approx(r.upper.unwrap().bound, 2.0));
    }

    #[test]
    fn union_examples() {
        let r = check_union_bound(&[k2(2.0), k2(2.0)], &TOL).unwrap();
        assert!(approx(r.lhs, 4.0) && approx(r.rhs, 4.0));
        assert!(r.is_equal() && r.consistent == Some(true));

        // union Laplacian spectrum (1, 3, 3, 5) around ω̄ = 3
        let r = check_union_bound(&[k2(2.0), k2(4.0)], &TOL).unwrap();
        assert!(approx(r.lhs, 4.0) && approx(r.rhs, 8.0));
        assert_eq!(r.equality, Equality::Strict);
        assert_eq!(r.predicted_equality, Some(false));
        assert_eq!(r.consistent, Some(true));

        let r = check_union_bound(&[p3(), p3()], &TOL).unwrap();
        assert!(approx(r.lhs, 20.0 / 3.0) && approx(r.rhs, 20.0 / 3.0));
        assert!(r.is_equal());

        assert!(check_union_bound(&[], &TOL).is_err());
    }

    #[test]
    fn union_characterization_fails_for_edgeless_constant_components() {
        // L_i − ω̄_i·I vanishes on a single vertex, so equality holds with unequal means
        let a = WeightedGraph::with_constant_weight(1, &[], 1.0).unwrap();
        let b = WeightedGraph::with_constant_weight(1, &[], 3.0).unwrap();
        let r = check_union_bound(&[a, b], &TOL).unwrap();
        assert!(r.is_equal());
        assert_eq!(r.predicted_equality, Some(false));
        assert_eq!(r.consistent, Some(false));
    }

    #[test]
    fn similarity_examples() {
        let r = check_bipartite_similarity(&p3(), &TOL).unwrap();
        assert!(r.holds && r.lhs < 1e-12);
        let k23 =
            WeightedGraph::with_degree_weight(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)])
                .unwrap();
        assert!(check_bipartite_similarity(&k23, &TOL).unwrap().holds);
        let c3 = WeightedGraph::with_degree_weight(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(
            check_bipartite_similarity(&c3, &TOL),
            Err(Error::NotBipartite)
        );
    }

    #[test]
    fn classification_invariants() {
        let r = BoundReport::new(Theorem::KyFan, 1.0, 1.0 - 5e-8, None, &TOL);
        assert!(!r.holds);
        assert!(r.is_equal());
        let r = BoundReport::new(Theorem::KyFan, 1.0, 0.5, None, &TOL);
        assert_eq!(r.equality, Equality::Violated);
        let r = BoundReport::new(Theorem::KyFan, 1.0, 1.0 + 1e-3, Some(true), &TOL);
        assert_eq!(r.equality, Equality::Strict);
        assert_eq!(r.consistent, Some(false));
    }
}
