//! Verification sweeps over generated instances.
//!
//! Each trial draws from its own SplitMix64 stream (see [`crate::rng`]), so
//! trials are evaluated in parallel and the report is still assembled in trial
//! order. Identical configurations produce byte-identical reports.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generate::{generate, Family, FamilyKind, WeightScheme};
use crate::graph::{GraphDocument, WeightRegime, WeightedGraph};
use crate::linalg::SymMatrix;
use crate::rng::{trial_seed, SplitMix64};
use crate::theorems::{
    bipartite_lower_report, check_bipartite_similarity, check_ky_fan, check_union_bound,
    md_bound_report, md_split, sandwich_report, BoundReport, GraphQuantities, Theorem, Tolerances,
};

/// Rejection-sampling budget when a connected instance is required.
pub const MAX_ATTEMPTS: usize = 10_000;

/// At most this many offending instances are stored verbatim.
pub const MAX_OFFENDERS: usize = 1_000;

/// Family plus the ranges its parameters are drawn from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub n_min: usize,
    pub n_max: usize,
    /// Edge probabilities for random families; one is chosen uniformly per instance.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ps: Vec<f64>,
    /// Size of the second side for `complete_bipartite`; defaults to `n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<usize>,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, n: usize) -> Self {
        Self {
            kind,
            n_min: n,
            n_max: n,
            ps: if kind.is_random() {
                vec![0.5]
            } else {
                Vec::new()
            },
            right: None,
        }
    }

    pub fn with_n_range(mut self, n_min: usize, n_max: usize) -> Self {
        self.n_min = n_min;
        self.n_max = n_max;
        self
    }

    pub fn with_ps(mut self, ps: Vec<f64>) -> Self {
        self.ps = ps;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::InvalidParams(format!(
                "vertex range [{}, {}] is empty or starts at 0",
                self.n_min, self.n_max
            )));
        }
        if self.kind == FamilyKind::Cycle && self.n_min < 3 {
            return Err(Error::InvalidParams("cycles need n >= 3".into()));
        }
        if self.kind.is_random() {
            if self.ps.is_empty() {
                return Err(Error::InvalidParams(format!(
                    "family {} needs at least one p",
                    self.kind
                )));
            }
            if let Some(p) = self.ps.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                return Err(Error::InvalidParams(format!(
                    "edge probability must be in [0, 1], got {p}"
                )));
            }
        }
        Ok(())
    }

    pub fn instantiate(&self, rng: &mut SplitMix64) -> Family {
        let n = rng.range_inclusive(self.n_min, self.n_max);
        let mut p = || self.ps[rng.below(self.ps.len() as u64) as usize];
        match self.kind {
            FamilyKind::Path => Family::Path { n },
            FamilyKind::Cycle => Family::Cycle { n },
            FamilyKind::Complete => Family::Complete { n },
            FamilyKind::CompleteBipartite => Family::CompleteBipartite {
                left: n,
                right: self.right.unwrap_or(n),
            },
            FamilyKind::Star => Family::Star { n },
            FamilyKind::Gnp => Family::Gnp { n, p: p() },
            FamilyKind::RandomBipartite => Family::RandomBipartite { n, p: p() },
        }
    }
}

/// How component means relate in a union sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanMode {
    /// Weights as generated.
    Free,
    /// Every component rescaled to the mean weight of the first.
    Equal,
    /// Equalized, then one random component scaled by a factor in [1.1, 1.5).
    Perturbed,
    /// Even trials `Equal`, odd trials `Perturbed`.
    Alternate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum SweepSource {
    /// One generated graph per trial.
    Graphs {
        family: FamilySpec,
        weight: WeightScheme,
        #[serde(default)]
        connected_only: bool,
    },
    /// A disjoint union of `min_parts..=max_parts` generated graphs per trial.
    Unions {
        family: FamilySpec,
        weight: WeightScheme,
        #[serde(default)]
        connected_only: bool,
        min_parts: usize,
        max_parts: usize,
        means: MeanMode,
    },
    /// A pair of random symmetric matrices per trial; with probability
    /// `psd_share` both are Gram matrices `GᵀG`.
    MatrixPairs {
        min_order: usize,
        max_order: usize,
        entry_bound: f64,
        psd_share: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    #[serde(flatten)]
    pub source: SweepSource,
    pub trials: u64,
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl SweepConfig {
    pub fn graphs(family: FamilySpec, weight: WeightScheme, trials: u64, seed: u64) -> Self {
        Self {
            source: SweepSource::Graphs {
                family,
                weight,
                connected_only: false,
            },
            trials,
            seed,
            tolerances: Tolerances::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParams("trials must be at least 1".into()));
        }
        let Tolerances { abs_tol, eq_tol } = self.tolerances;
        if !(abs_tol >= 0.0 && abs_tol.is_finite() && eq_tol >= 0.0 && eq_tol.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "tolerances must be finite and non-negative (abs_tol {abs_tol}, eq_tol {eq_tol})"
            )));
        }
        match &self.source {
            SweepSource::Graphs { family, weight, .. } => {
                family.validate()?;
                weight.validate()
            }
            SweepSource::Unions {
                family,
                weight,
                connected_only,
                min_parts,
                max_parts,
                means,
            } => {
                family.validate()?;
                weight.validate()?;
                if *min_parts == 0 || min_parts > max_parts {
                    return Err(Error::InvalidParams(format!(
                        "part range [{min_parts}, {max_parts}] is empty or starts at 0"
                    )));
                }
                // degree weights can be rescaled only if no component is a lone vertex
                let degree_ok = *connected_only && family.n_min >= 2;
                if *means != MeanMode::Free && *weight == WeightScheme::Degree && !degree_ok {
                    return Err(Error::InvalidParams(
                        "equalizing degree-weighted means needs connected_only and n >= 2".into(),
                    ));
                }
                Ok(())
            }
            SweepSource::MatrixPairs {
                min_order,
                max_order,
                entry_bound,
                psd_share,
            } => {
                if *min_order == 0 || min_order > max_order {
                    return Err(Error::InvalidParams(format!(
                        "order range [{min_order}, {max_order}] is empty or starts at 0"
                    )));
                }
                if !(entry_bound.is_finite() && *entry_bound > 0.0) {
                    return Err(Error::InvalidParams("entry_bound must be positive".into()));
                }
                if !(0.0..=1.0).contains(psd_share) {
                    return Err(Error::InvalidParams("psd_share must be in [0, 1]".into()));
                }
                Ok(())
            }
        }
    }

    fn weight_regime(&self) -> Option<WeightRegime> {
        match &self.source {
            SweepSource::Graphs { weight, .. } => Some(regime_of(weight)),
            SweepSource::Unions { weight, means, .. } => Some(if *means == MeanMode::Free {
                regime_of(weight)
            } else {
                WeightRegime::Custom
            }),
            SweepSource::MatrixPairs { .. } => None,
        }
    }
}

fn regime_of(w: &WeightScheme) -> WeightRegime {
    match w {
        WeightScheme::Degree => WeightRegime::Degree,
        _ => WeightRegime::Custom,
    }
}

/// Aggregated outcome of one theorem over a sweep.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Tally {
    pub checked: u64,
    pub held: u64,
    pub violated: u64,
    pub equality_cases: u64,
    /// Disagreements between numerical equality and the structural
    /// characterization, on instances where the characterization applies.
    pub characterization_mismatches: u64,
    /// Disagreements on disconnected bipartite instances, where the equality
    /// characterization of the bipartite lower bound is reported but not asserted.
    pub disconnected_mismatches: u64,
    /// Instances where the theorem's hypothesis did not apply.
    pub skipped: u64,
    /// Smallest `rhs − lhs` seen.
    pub worst_gap: Option<f64>,
}

impl Tally {
    fn record(&mut self, r: &BoundReport, count_mismatch: bool) {
        self.checked += 1;
        if r.holds {
            self.held += 1;
        } else {
            self.violated += 1;
        }
        if r.is_equal() {
            self.equality_cases += 1;
        }
        if r.consistent == Some(false) {
            if count_mismatch {
                self.characterization_mismatches += 1;
            } else {
                self.disconnected_mismatches += 1;
            }
        }
        self.worst_gap = Some(self.worst_gap.map_or(r.gap, |w| w.min(r.gap)));
    }
}

/// Replayable description of an instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceDoc {
    Graph(GraphDocument),
    Union(Vec<GraphDocument>),
    Matrices { a: Vec<Vec<f64>>, b: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Offender {
    pub trial: u64,
    pub report: BoundReport,
    pub instance: InstanceDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    /// Weight regime of the generated graphs; absent for matrix sweeps.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_regime: Option<WeightRegime>,
    pub theorems: BTreeMap<Theorem, Tally>,
    /// Largest relative disagreement between the two Laplacian energy routes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_route_gap: Option<f64>,
    pub connected_instances: u64,
    pub offenders: Vec<Offender>,
    pub offenders_dropped: u64,
}

/// One CSV summary row.
#[derive(Debug, Serialize)]
struct CsvRow<'a> {
    theorem: &'a str,
    checked: u64,
    held: u64,
    violated: u64,
    equality_cases: u64,
    mismatches: u64,
    worst_gap: Option<f64>,
}

impl SweepReport {
    pub fn total_violations(&self) -> u64 {
        self.theorems.values().map(|t| t.violated).sum()
    }

    pub fn total_mismatches(&self) -> u64 {
        self.theorems
            .values()
            .map(|t| t.characterization_mismatches)
            .sum()
    }

    /// No violations and no characterization mismatches.
    pub fn is_clean(&self) -> bool {
        self.total_violations() == 0 && self.total_mismatches() == 0
    }

    pub fn tally(&self, t: Theorem) -> Option<&Tally> {
        self.theorems.get(&t)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    /// `theorem,checked,held,violated,equality_cases,mismatches,worst_gap`,
    /// one row per theorem that was checked at least once.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for (t, tally) in &self.theorems {
            w.serialize(CsvRow {
                theorem: t.name(),
                checked: tally.checked,
                held: tally.held,
                violated: tally.violated,
                equality_cases: tally.equality_cases,
                mismatches: tally.characterization_mismatches,
                worst_gap: tally.worst_gap,
            })
            .expect("writing to memory cannot fail");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
    }
}

/// Outcome of a single trial before aggregation.
struct TrialOutcome {
    checks: Vec<(BoundReport, bool)>,
    skipped: Vec<Theorem>,
    route_gap: Option<f64>,
    connected: bool,
    instance: InstanceDoc,
}

fn sample_graph(
    family: &FamilySpec,
    weight: &WeightScheme,
    connected_only: bool,
    rng: &mut SplitMix64,
) -> Result<WeightedGraph> {
    for _ in 0..MAX_ATTEMPTS {
        let member = family.instantiate(rng);
        let g = generate(&member, weight, rng.next_u64())?;
        if !connected_only || g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::InvalidParams(format!(
        "no connected instance of {} after {MAX_ATTEMPTS} attempts",
        family.kind
    )))
}

fn rescale_to_mean(g: &WeightedGraph, target: f64) -> Result<WeightedGraph> {
    let mean = g.mean_weight();
    if mean <= 0.0 {
        return Err(Error::InvalidParams(
            "cannot rescale a component with zero mean weight".into(),
        ));
    }
    let factor = target / mean;
    g.reweighted(g.weights().iter().map(|w| w * factor).collect())
}

/// Reports for one graph; the flag says whether a mismatch counts against the characterization.
struct GraphChecks {
    checks: Vec<(BoundReport, bool)>,
    skipped: Vec<Theorem>,
    route_gap: f64,
    connected: bool,
}

fn graph_checks(g: &WeightedGraph, tol: &Tolerances) -> Result<GraphChecks> {
    let q = GraphQuantities::compute(g, tol)?;
    let mut checks = Vec::with_capacity(5);
    let mut skipped = Vec::new();

    let (diag, neg_adj) = md_split(g);
    checks.push((check_ky_fan(&diag, &neg_adj, tol)?, true));
    checks.push((md_bound_report(&q, tol), true));
    if q.bipartite {
        checks.push((bipartite_lower_report(&q, tol)?, q.connected));
        checks.push((sandwich_report(&q, tol)?, true));
        checks.push((check_bipartite_similarity(g, tol)?, true));
    } else {
        skipped.extend([
            Theorem::BipartiteLower,
            Theorem::SandwichLower,
            Theorem::BipartiteSimilarity,
        ]);
    }
    Ok(GraphChecks {
        checks,
        skipped,
        route_gap: q.laplacian_energy.relative_gap,
        connected: q.connected,
    })
}

fn random_symmetric(order: usize, bound: f64, rng: &mut SplitMix64) -> SymMatrix {
    SymMatrix::symmetric_from_fn(order, |_, _| rng.uniform(-bound, bound)).expect("order >= 1")
}

fn random_gram(order: usize, bound: f64, rng: &mut SplitMix64) -> SymMatrix {
    let mut rows = Vec::with_capacity(order);
    for _ in 0..order {
        rows.push(
            (0..order)
                .map(|_| rng.uniform(-bound, bound))
                .collect::<Vec<_>>(),
        );
    }
    SymMatrix::from_rows(&rows)
        .expect("square and finite")
        .gram()
}

fn run_trial(config: &SweepConfig, trial: u64) -> Result<TrialOutcome> {
    let mut rng = SplitMix64::new(trial_seed(config.seed, trial));
    let tol = &config.tolerances;
    match &config.source {
        SweepSource::Graphs {
            family,
            weight,
            connected_only,
        } => {
            let g = sample_graph(family, weight, *connected_only, &mut rng)?;
            let gc = graph_checks(&g, tol)?;
            Ok(TrialOutcome {
                checks: gc.checks,
                skipped: gc.skipped,
                route_gap: Some(gc.route_gap),
                connected: gc.connected,
                instance: InstanceDoc::Graph(g.to_document()),
            })
        }
        SweepSource::Unions {
            family,
            weight,
            connected_only,
            min_parts,
            max_parts,
            means,
        } => {
            let k = rng.range_inclusive(*min_parts, *max_parts);
            let mut parts = (0..k)
                .map(|_| sample_graph(family, weight, *connected_only, &mut rng))
                .collect::<Result<Vec<_>>>()?;
            let mode = match means {
                MeanMode::Alternate if trial.is_multiple_of(2) => MeanMode::Equal,
                MeanMode::Alternate => MeanMode::Perturbed,
                m => *m,
            };
            if mode != MeanMode::Free {
                let target = parts[0].mean_weight();
                parts = parts
                    .iter()
                    .map(|g| rescale_to_mean(g, target))
                    .collect::<Result<Vec<_>>>()?;
            }
            if mode == MeanMode::Perturbed {
                let j = rng.below(k as u64) as usize;
                let factor = rng.uniform(1.1, 1.5);
                parts[j] =
                    parts[j].reweighted(parts[j].weights().iter().map(|w| w * factor).collect())?;
            }
            let union = WeightedGraph::disjoint_union(&parts)?;
            let mut gc = graph_checks(&union, tol)?;
            gc.checks.push((check_union_bound(&parts, tol)?, true));
            Ok(TrialOutcome {
                checks: gc.checks,
                skipped: gc.skipped,
                route_gap: Some(gc.route_gap),
                connected: gc.connected,
                instance: InstanceDoc::Union(
                    parts.iter().map(WeightedGraph::to_document).collect(),
                ),
            })
        }
        SweepSource::MatrixPairs {
            min_order,
            max_order,
            entry_bound,
            psd_share,
        } => {
            let order = rng.range_inclusive(*min_order, *max_order);
            let (a, b) = if rng.bernoulli(*psd_share) {
                let a = random_gram(order, *entry_bound, &mut rng);
                (a, random_gram(order, *entry_bound, &mut rng))
            } else {
                let a = random_symmetric(order, *entry_bound, &mut rng);
                (a, random_symmetric(order, *entry_bound, &mut rng))
            };
            let report = check_ky_fan(&a, &b, tol)?;
            Ok(TrialOutcome {
                checks: vec![(report, true)],
                skipped: Vec::new(),
                route_gap: None,
                connected: false,
                instance: InstanceDoc::Matrices {
                    a: a.rows(),
                    b: b.rows(),
                },
            })
        }
    }
}

/// Runs every applicable checker on `config.trials` generated instances.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;
    let outcomes: Vec<Result<TrialOutcome>> = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            run_trial(config, t).map_err(|e| Error::Trial {
                trial: t,
                source: Box::new(e),
            })
        })
        .collect();

    let mut report = SweepReport {
        config: config.clone(),
        weight_regime: config.weight_regime(),
        theorems: BTreeMap::new(),
        max_route_gap: None,
        connected_instances: 0,
        offenders: Vec::new(),
        offenders_dropped: 0,
    };
    for (trial, outcome) in (0..config.trials).zip(outcomes) {
        let outcome = outcome?;
        if outcome.connected {
            report.connected_instances += 1;
        }
        if let Some(g) = outcome.route_gap {
            report.max_route_gap = Some(report.max_route_gap.map_or(g, |m: f64| m.max(g)));
        }
        for t in outcome.skipped {
            report.theorems.entry(t).or_default().skipped += 1;
        }
        for (r, count_mismatch) in outcome.checks {
            report
                .theorems
                .entry(r.theorem)
                .or_default()
                .record(&r, count_mismatch);
            if !r.holds || r.consistent == Some(false) {
                if report.offenders.len() < MAX_OFFENDERS {
                    report.offenders.push(Offender {
                        trial,
                        report: r,
                        instance: outcome.instance.clone(),
                    });
                } else {
                    report.offenders_dropped += 1;
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnp_sweep_has_no_violations() {
        let cfg = SweepConfig::graphs(
            FamilySpec::new(FamilyKind::Gnp, 8),
            WeightScheme::Degree,
            100,
            1,
        );
        let r = run_sweep(&cfg).unwrap();
        assert_eq!(r.total_violations(), 0);
        for t in r.theorems.values() {
            assert_eq!(t.checked, t.held + t.violated);
        }
        assert_eq!(r.tally(Theorem::MdUpper).unwrap().checked, 100);
    }

    #[test]
    fn even_cycles_attain_the_bipartite_lower_bound() {
        let fam = FamilySpec::new(FamilyKind::Cycle, 4).with_n_range(4, 12);
        let r = run_sweep(&SweepConfig::graphs(fam, WeightScheme::Degree, 60, 3)).unwrap();
        let t = r.tally(Theorem::BipartiteLower).unwrap();
        assert!(t.checked > 0);
        assert_eq!(t.equality_cases, t.checked);
        // odd cycles were skipped
        assert_eq!(t.checked + t.skipped, 60);
    }

    #[test]
    fn single_trial() {
        let cfg = SweepConfig::graphs(
            FamilySpec::new(FamilyKind::Path, 5),
            WeightScheme::Degree,
            1,
            0,
        );
        let r = run_sweep(&cfg).unwrap();
        assert_eq!(r.tally(Theorem::MdUpper).unwrap().checked, 1);
    }

    #[test]
    fn zero_trials_rejected() {
        let cfg = SweepConfig::graphs(
            FamilySpec::new(FamilyKind::Path, 5),
            WeightScheme::Degree,
            0,
            0,
        );
        assert!(run_sweep(&cfg).is_err());
    }

    #[test]
    fn generator_errors_carry_trial_index() {
        let mut fam = FamilySpec::new(FamilyKind::Gnp, 3);
        fam.ps = vec![0.0];
        let mut cfg = SweepConfig::graphs(fam, WeightScheme::Degree, 3, 0);
        if let SweepSource::Graphs { connected_only, .. } = &mut cfg.source {
            *connected_only = true;
        }
        match run_sweep(&cfg) {
            Err(Error::Trial { trial: 0, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = SweepConfig {
            source: SweepSource::Unions {
                family: FamilySpec::new(FamilyKind::Gnp, 2).with_n_range(2, 6),
                weight: WeightScheme::Uniform { lo: 0.5, hi: 4.0 },
                connected_only: true,
                min_parts: 2,
                max_parts: 4,
                means: MeanMode::Alternate,
            },
            trials: 40,
            seed: 9,
            tolerances: Tolerances::default(),
        };
        let a = run_sweep(&cfg).unwrap();
        let b = run_sweep(&cfg).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.to_csv(), b.to_csv());
        let u = a.tally(Theorem::UnionUpper).unwrap();
        assert_eq!(u.equality_cases, 20);
        assert_eq!(u.characterization_mismatches, 0);
    }

    #[test]
    fn csv_layout() {
        let cfg = SweepConfig::graphs(
            FamilySpec::new(FamilyKind::Path, 3),
            WeightScheme::Degree,
            1,
            0,
        );
        let csv = run_sweep(&cfg).unwrap().to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "theorem,checked,held,violated,equality_cases,mismatches,worst_gap"
        );
        assert!(lines.next().unwrap().starts_with("ky_fan,1,1,0,"));
    }
}
