//! Deterministic graph families.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::rng::SplitMix64;

/// A concrete family member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Path {
        n: usize,
    },
    /// Requires `n ≥ 3`.
    Cycle {
        n: usize,
    },
    Complete {
        n: usize,
    },
    CompleteBipartite {
        left: usize,
        right: usize,
    },
    /// `n` vertices in total: one centre and `n − 1` leaves.
    Star {
        n: usize,
    },
    /// Erdős–Rényi G(n, p): each pair `i < j` in lexicographic order is an
    /// edge with probability `p`.
    Gnp {
        n: usize,
        p: f64,
    },
    /// Each vertex picks a side with probability 1/2, then each cross pair
    /// `i < j` is an edge with probability `p`.
    RandomBipartite {
        n: usize,
        p: f64,
    },
}

/// Family names accepted on the command line and in sweep configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Path,
    Cycle,
    Complete,
    CompleteBipartite,
    Star,
    Gnp,
    RandomBipartite,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 7] = [
        FamilyKind::Path,
        FamilyKind::Cycle,
        FamilyKind::Complete,
        FamilyKind::CompleteBipartite,
        FamilyKind::Star,
        FamilyKind::Gnp,
        FamilyKind::RandomBipartite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Path => "path",
            FamilyKind::Cycle => "cycle",
            FamilyKind::Complete => "complete",
            FamilyKind::CompleteBipartite => "complete_bipartite",
            FamilyKind::Star => "star",
            FamilyKind::Gnp => "gnp",
            FamilyKind::RandomBipartite => "random_bipartite",
        }
    }

    pub fn is_random(self) -> bool {
        matches!(self, FamilyKind::Gnp | FamilyKind::RandomBipartite)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown family `{s}`")))
    }
}

/// How vertex weights are assigned to a generated graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum WeightScheme {
    Degree,
    Constant {
        value: f64,
    },
    /// i.i.d. uniform on `[lo, hi)`, drawn in vertex order after the edges.
    Uniform {
        lo: f64,
        hi: f64,
    },
}

impl WeightScheme {
    pub fn validate(&self) -> Result<()> {
        match *self {
            WeightScheme::Degree => Ok(()),
            WeightScheme::Constant { value } if value.is_finite() && value > 0.0 => Ok(()),
            WeightScheme::Constant { value } => Err(Error::InvalidParams(format!(
                "constant weight must be positive, got {value}"
            ))),
            WeightScheme::Uniform { lo, hi }
                if lo.is_finite() && hi.is_finite() && lo > 0.0 && hi >= lo =>
            {
                Ok(())
            }
            WeightScheme::Uniform { lo, hi } => Err(Error::InvalidParams(format!(
                "uniform weights need 0 < lo <= hi, got [{lo}, {hi}]"
            ))),
        }
    }

    /// Applies the scheme to `n` vertices with the given edges.
    pub fn apply(
        &self,
        n: usize,
        edges: &[(usize, usize)],
        rng: &mut SplitMix64,
    ) -> Result<WeightedGraph> {
        self.validate()?;
        match *self {
            WeightScheme::Degree => WeightedGraph::with_degree_weight(n, edges),
            WeightScheme::Constant { value } => {
                WeightedGraph::with_constant_weight(n, edges, value)
            }
            WeightScheme::Uniform { lo, hi } => {
                let weights = (0..n).map(|_| rng.uniform(lo, hi)).collect();
                WeightedGraph::new(n, edges, weights)
            }
        }
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightScheme::Degree => f.write_str("degree"),
            WeightScheme::Constant { value } => write!(f, "const:{value}"),
            WeightScheme::Uniform { lo, hi } => write!(f, "uniform:{lo}:{hi}"),
        }
    }
}

/// Parses `degree`, `const:C` or `uniform:LO:HI`.
impl FromStr for WeightScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::InvalidParams(format!(
                "bad weight scheme `{s}` (degree | const:C | uniform:LO:HI)"
            ))
        };
        let num = |t: &str| t.parse::<f64>().map_err(|_| bad());
        let parts: Vec<&str> = s.split(':').collect();
        let scheme = match parts.as_slice() {
            ["degree"] => WeightScheme::Degree,
            ["const", c] => WeightScheme::Constant { value: num(c)? },
            ["uniform", lo, hi] => WeightScheme::Uniform {
                lo: num(lo)?,
                hi: num(hi)?,
            },
            _ => return Err(bad()),
        };
        scheme.validate()?;
        Ok(scheme)
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "edge probability must be in [0, 1], got {p}"
        )))
    }
}

fn need_vertices(n: usize, min: usize, what: &str) -> Result<()> {
    if n < min {
        return Err(Error::InvalidParams(format!(
            "{what} needs n >= {min}, got {n}"
        )));
    }
    Ok(())
}

impl Family {
    pub fn kind(&self) -> FamilyKind {
        match self {
            Family::Path { .. } => FamilyKind::Path,
            Family::Cycle { .. } => FamilyKind::Cycle,
            Family::Complete { .. } => FamilyKind::Complete,
            Family::CompleteBipartite { .. } => FamilyKind::CompleteBipartite,
            Family::Star { .. } => FamilyKind::Star,
            Family::Gnp { .. } => FamilyKind::Gnp,
            Family::RandomBipartite { .. } => FamilyKind::RandomBipartite,
        }
    }

    /// Vertex count and edge list. Random families draw from `rng`.
    pub fn edges(&self, rng: &mut SplitMix64) -> Result<(usize, Vec<(usize, usize)>)> {
        match *self {
            Family::Path { n } => {
                need_vertices(n, 1, "path")?;
                Ok((n, (1..n).map(|i| (i - 1, i)).collect()))
            }
            Family::Cycle { n } => {
                need_vertices(n, 3, "cycle")?;
                let mut e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
                e.push((0, n - 1));
                Ok((n, e))
            }
            Family::Complete { n } => {
                need_vertices(n, 1, "complete graph")?;
                Ok((
                    n,
                    (0..n)
                        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                        .collect(),
                ))
            }
            Family::CompleteBipartite { left, right } => {
                need_vertices(left, 1, "complete bipartite left side")?;
                need_vertices(right, 1, "complete bipartite right side")?;
                let e = (0..left)
                    .flat_map(|i| (left..left + right).map(move |j| (i, j)))
                    .collect();
                Ok((left + right, e))
            }
            Family::Star { n } => {
                need_vertices(n, 1, "star")?;
                Ok((n, (1..n).map(|j| (0, j)).collect()))
            }
            Family::Gnp { n, p } => {
                need_vertices(n, 1, "gnp")?;
                check_probability(p)?;
                let mut e = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        if rng.bernoulli(p) {
                            e.push((i, j));
                        }
                    }
                }
                Ok((n, e))
            }
            Family::RandomBipartite { n, p } => {
                need_vertices(n, 1, "random bipartite")?;
                check_probability(p)?;
                let side: Vec<bool> = (0..n).map(|_| rng.bernoulli(0.5)).collect();
                let mut e = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        if side[i] != side[j] && rng.bernoulli(p) {
                            e.push((i, j));
                        }
                    }
                }
                Ok((n, e))
            }
        }
    }
}

/// Generates one weighted graph. Deterministic in `(family, weight, seed)`.
pub fn generate(family: &Family, weight: &WeightScheme, seed: u64) -> Result<WeightedGraph> {
    let mut rng = SplitMix64::new(seed);
    let (n, edges) = family.edges(&mut rng)?;
    weight.apply(n, &edges, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_with_degree_weight() {
        let g = generate(&Family::Path { n: 3 }, &WeightScheme::Degree, 0).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.weights(), &[1.0, 2.0, 1.0]);
    }

    #[test]
    fn complete_bipartite_k23() {
        let g = generate(
            &Family::CompleteBipartite { left: 2, right: 3 },
            &WeightScheme::Degree,
            0,
        )
        .unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 6);
        assert!(g.is_bipartite().is_some());
    }

    #[test]
    fn gnp_is_deterministic() {
        let f = Family::Gnp { n: 8, p: 0.5 };
        let a = generate(&f, &WeightScheme::Degree, 42).unwrap();
        let b = generate(&f, &WeightScheme::Degree, 42).unwrap();
        assert_eq!(a.edges(), b.edges());
        let c = generate(&f, &WeightScheme::Degree, 43).unwrap();
        assert_ne!(a.edges(), c.edges());
    }

    #[test]
    fn gnp_extremes() {
        let empty = generate(&Family::Gnp { n: 6, p: 0.0 }, &WeightScheme::Degree, 1).unwrap();
        assert_eq!(empty.edge_count(), 0);
        let full = generate(&Family::Gnp { n: 6, p: 1.0 }, &WeightScheme::Degree, 1).unwrap();
        assert_eq!(full.edge_count(), 15);
    }

    #[test]
    fn random_bipartite_is_bipartite() {
        for seed in 0..50 {
            let g = generate(
                &Family::RandomBipartite { n: 10, p: 0.7 },
                &WeightScheme::Degree,
                seed,
            )
            .unwrap();
            assert!(g.is_bipartite().is_some());
        }
    }

    #[test]
    fn shapes() {
        let star = generate(&Family::Star { n: 4 }, &WeightScheme::Degree, 0).unwrap();
        assert_eq!(star.weights(), &[3.0, 1.0, 1.0, 1.0]);
        let c5 = generate(&Family::Cycle { n: 5 }, &WeightScheme::Degree, 0).unwrap();
        assert!(c5.is_omega_regular(0.0));
        let k4 = generate(
            &Family::Complete { n: 4 },
            &WeightScheme::Constant { value: 2.0 },
            0,
        )
        .unwrap();
        assert_eq!(k4.edge_count(), 6);
        assert_eq!(k4.weights(), &[2.0; 4]);
    }

    #[test]
    fn uniform_weights_in_range_and_reproducible() {
        let w = WeightScheme::Uniform { lo: 0.5, hi: 2.0 };
        let a = generate(&Family::Gnp { n: 9, p: 0.3 }, &w, 5).unwrap();
        assert!(a.weights().iter().all(|&x| (0.5..2.0).contains(&x)));
        assert_eq!(a, generate(&Family::Gnp { n: 9, p: 0.3 }, &w, 5).unwrap());
    }

    #[test]
    fn invalid_params() {
        assert!(generate(&Family::Gnp { n: 5, p: 1.5 }, &WeightScheme::Degree, 0).is_err());
        assert!(generate(&Family::Cycle { n: 2 }, &WeightScheme::Degree, 0).is_err());
        assert!(generate(&Family::Path { n: 0 }, &WeightScheme::Degree, 0).is_err());
        assert!(generate(
            &Family::Path { n: 3 },
            &WeightScheme::Uniform { lo: 0.0, hi: 1.0 },
            0
        )
        .is_err());
        assert!(generate(
            &Family::Path { n: 3 },
            &WeightScheme::Constant { value: -1.0 },
            0
        )
        .is_err());
    }

    #[test]
    fn weight_scheme_strings() {
        assert_eq!(
            "degree".parse::<WeightScheme>().unwrap(),
            WeightScheme::Degree
        );
        assert_eq!(
            "const:2.5".parse::<WeightScheme>().unwrap(),
            WeightScheme::Constant { value: 2.5 }
        );
        assert_eq!(
            "uniform:0.5:3".parse::<WeightScheme>().unwrap(),
            WeightScheme::Uniform { lo: 0.5, hi: 3.0 }
        );
        assert!("const:0".parse::<WeightScheme>().is_err());
        assert!("bogus".parse::<WeightScheme>().is_err());
        assert_eq!("gnp".parse::<FamilyKind>().unwrap(), FamilyKind::Gnp);
        assert!("lattice".parse::<FamilyKind>().is_err());
    }
}
