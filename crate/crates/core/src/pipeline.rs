//! End-to-end analysis of a quiver: cluster map, invariant structures,
//! foliations, reductions and the dynamics of every reduced map.

use serde::Serialize;

use crate::algebra::{bits_for_digits, BirationalMap, Real};
use crate::dynamics::{
    detect_global_periodicity, find_periodic_points, first_integral_check, leaf_itinerary, no_periodic_points_scan,
    LabelSummary, PeriodReport, PeriodicPoint, ScanReport, SearchBox, DEFAULT_DIGITS, DEFAULT_GLOBAL_P_MAX,
    DEFAULT_SCAN_P_MAX, SCREEN_SAMPLES,
};
use crate::error::{Error, Result};
use crate::geometry::{
    build_flag, casimir_submersion, chained_reduction, check_poisson_map, check_presymplectic_invariance,
    derive_reduced_map, find_invariant_poisson, null_submersion, CheckReport, PoissonStructure, PresymplecticForm,
    ReducedSystem, ReducedSystemRepr, Submersion, SubmersionRepr,
};
use crate::io::SCHEMA_VERSION;
use crate::lattice::IntMatrix;
use crate::quiver::{cluster_map, detect_period, PeriodicityCertificate, DEFAULT_MAX_PERIOD};
use crate::sampling::random_point;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WorkflowConfig {
    pub seed: u64,
    pub m_max: usize,
    pub p_max: usize,
    pub scan_p_max: usize,
    pub digits: usize,
    /// Points per pointwise invariance check.
    pub samples: usize,
    pub scan_samples: usize,
    pub itinerary_starts: usize,
    pub itinerary_steps: usize,
    /// Poisson matrices to reduce by; when empty the discovered basis is used.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub poisson: Vec<IntMatrix>,
    /// Preferred exponent rows. A submersion of dimension `r` is rewritten
    /// in the first `r` rows whenever they span the same lattice.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub align: Option<Vec<Vec<i64>>>,
}

impl Default for WorkflowConfig {
    fn default() -> Self {
        WorkflowConfig {
            seed: 1,
            m_max: DEFAULT_MAX_PERIOD,
            p_max: DEFAULT_GLOBAL_P_MAX,
            scan_p_max: DEFAULT_SCAN_P_MAX,
            digits: DEFAULT_DIGITS,
            samples: 20,
            scan_samples: SCREEN_SAMPLES,
            itinerary_starts: 10,
            itinerary_steps: 20,
            poisson: Vec::new(),
            align: None,
        }
    }
}

impl WorkflowConfig {
    pub fn validate(&self) -> Result<()> {
        let bounds = [
            ("m_max", self.m_max),
            ("p_max", self.p_max),
            ("scan_p_max", self.scan_p_max),
            ("digits", self.digits),
            ("samples", self.samples),
            ("scan_samples", self.scan_samples),
        ];
        for (name, v) in bounds {
            if v == 0 {
                return Err(Error::InvalidInput(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageError {
    pub stage: &'static str,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoissonEntry {
    pub matrix: IntMatrix,
    pub rank: usize,
    pub invariance: CheckReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoissonSummary {
    pub basis: Vec<IntMatrix>,
    pub points_used: usize,
    pub verified: bool,
    pub seed: u64,
    pub used: Vec<PoissonEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NamedSubmersion {
    pub name: String,
    #[serde(flatten)]
    pub submersion: SubmersionRepr,
    pub saturation_index: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlagSummary {
    /// Submersion names, coarsest first.
    pub levels: Vec<String>,
    pub projections: Vec<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NamedReduction {
    pub name: String,
    #[serde(flatten)]
    pub system: ReducedSystemRepr,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainSummary {
    pub outer: String,
    pub inner: String,
    pub projection: Vec<Vec<i64>>,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FirstIntegral {
    pub period: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelDynamics {
    pub name: String,
    pub periodicity: PeriodReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_integral: Option<FirstIntegral>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_points: Option<Vec<PeriodicPoint>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ItinerarySummary {
    pub start: usize,
    pub seed: u64,
    pub steps: usize,
    pub leaves: Vec<(String, LabelSummary)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub schema: &'static str,
    pub config: WorkflowConfig,
    pub matrix: IntMatrix,
    pub period: Option<PeriodicityCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<BirationalMap>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presymplectic_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presymplectic_invariance: Option<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poisson: Option<PoissonSummary>,
    pub submersions: Vec<NamedSubmersion>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag: Option<FlagSummary>,
    pub reduced: Vec<NamedReduction>,
    pub chains: Vec<ChainSummary>,
    pub dynamics: Vec<LevelDynamics>,
    pub itineraries: Vec<ItinerarySummary>,
    pub notes: Vec<String>,
    pub errors: Vec<StageError>,
}

impl AnalysisReport {
    /// Every check that ran came out positive and no stage failed.
    pub fn all_verified(&self) -> bool {
        self.errors.is_empty()
            && self.presymplectic_invariance.as_ref().is_none_or(|c| c.holds)
            && self
                .poisson
                .as_ref()
                .is_none_or(|p| p.verified && p.used.iter().all(|e| e.invariance.holds))
            && self.reduced.iter().all(|r| r.system.verified)
            && self.chains.iter().all(|c| c.verified)
            && self
                .dynamics
                .iter()
                .all(|d| d.first_integral.as_ref().is_none_or(|f| f.holds))
    }

    pub fn reduced_map(&self, name: &str) -> Option<&NamedReduction> {
        self.reduced.iter().find(|r| r.name == name)
    }

    /// Plain-text rendering of the main findings.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        match &self.period {
            Some(c) => {
                let nodes: Vec<usize> = c.sequence.iter().map(|k| k + 1).collect();
                line(format!("period: m = {} (mutations at nodes {nodes:?})", c.period))
            }
            None => line(format!("period: none up to {}", self.config.m_max)),
        }
        if let Some(m) = &self.map {
            line(format!("cluster map: {m}"));
        }
        if let (Some(rank), Some(c)) = (self.presymplectic_rank, &self.presymplectic_invariance) {
            line(format!(
                "presymplectic form: rank {rank}, invariant = {} ({} points, seed {})",
                c.holds, c.samples, c.seed
            ));
        }
        if let Some(p) = &self.poisson {
            line(format!(
                "invariant Poisson structures: {} basis elements, verified = {} (seed {})",
                p.basis.len(),
                p.verified,
                p.seed
            ));
            for (i, e) in p.used.iter().enumerate() {
                line(format!(
                    "  C{}: rank {}, Poisson map = {}",
                    i + 1,
                    e.rank,
                    e.invariance.holds
                ));
            }
        }
        for s in &self.submersions {
            line(format!("submersion {}: {:?} {:?}", s.name, s.submersion.kind, s.submersion.exponents));
        }
        if let Some(f) = &self.flag {
            let fine_first: Vec<&str> = f.levels.iter().rev().map(String::as_str).collect();
            line(format!("flag: {}", fine_first.join(" ≺ ")));
        }
        for r in &self.reduced {
            line(format!(
                "reduced map {}: ({}) verified = {}",
                r.name,
                r.system.psi.join(", "),
                r.system.verified
            ));
        }
        for c in &self.chains {
            line(format!("chain {} -> {}: verified = {}", c.inner, c.outer, c.verified));
        }
        for d in &self.dynamics {
            let period = match d.periodicity.global_period() {
                Some(p) => format!("globally {p}-periodic"),
                None => "no global period found".to_string(),
            };
            line(format!("dynamics {}: {period}", d.name));
            if let Some(f) = &d.first_integral {
                line(format!("  π∘φ^({}) = π: {}", f.period, f.holds));
            }
            for p in d.fixed_points.iter().flatten() {
                let coords: Vec<String> = p.point.iter().map(|v| v.to_decimal_string(20)).collect();
                line(format!(
                    "  fixed point ({}) residual 1e{:.0}",
                    coords.join(", "),
                    p.residual_log10
                ));
            }
            if let Some(s) = &d.scan {
                line(format!(
                    "  scan: periods found {:?}, monotone growth = {} ({})",
                    s.periods_found, s.monotone_growth, s.note
                ));
            }
        }
        for it in &self.itineraries {
            for (name, s) in &it.leaves {
                line(format!("start {}: {name} {}", it.start + 1, s.description));
            }
        }
        for n in &self.notes {
            line(format!("note: {n}"));
        }
        for e in &self.errors {
            line(format!("error in {}: {}", e.stage, e.message));
        }
        out
    }
}

fn aligned(s: Submersion, align: Option<&Vec<Vec<i64>>>) -> Submersion {
    let r = s.dim_out();
    match align {
        Some(rows) if rows.len() >= r && r > 0 => s.aligned(&rows[..r]).unwrap_or(s),
        _ => s,
    }
}

pub fn run_pipeline(b: &IntMatrix, config: &WorkflowConfig) -> Result<AnalysisReport> {
    config.validate()?;
    if !b.is_skew_symmetric() {
        return Err(Error::NotSkewSymmetric);
    }
    let n = b.rows();
    let mut report = AnalysisReport {
        schema: SCHEMA_VERSION,
        config: config.clone(),
        matrix: b.clone(),
        period: None,
        map: None,
        presymplectic_rank: None,
        presymplectic_invariance: None,
        poisson: None,
        submersions: Vec::new(),
        flag: None,
        reduced: Vec::new(),
        chains: Vec::new(),
        dynamics: Vec::new(),
        itineraries: Vec::new(),
        notes: Vec::new(),
        errors: Vec::new(),
    };
    let seed = config.seed;
    let fail = |stage: &'static str, e: Error| StageError {
        stage,
        message: e.to_string(),
    };
    if b.is_zero() {
        report
            .notes
            .push("trivial quiver: every exchange relation has empty products, x_k' = 2/x_k".into());
    }

    let Some(cert) = detect_period(b, config.m_max)? else {
        report.errors.push(fail(
            "period",
            Error::VerificationFailed(format!("not mutation-periodic with period ≤ {}", config.m_max)),
        ));
        return Ok(report);
    };
    report.period = Some(cert.clone());
    let phi = cluster_map(b, &cert)?;
    report.map = Some(phi.clone());

    let omega = PresymplecticForm::new(b.clone())?;
    report.presymplectic_rank = Some(omega.rank);
    report.presymplectic_invariance = Some(check_presymplectic_invariance(&phi, &omega, config.samples, seed)?);

    let search = find_invariant_poisson(&phi, Some(b), seed)?;
    let chosen = if config.poisson.is_empty() {
        search.basis.clone()
    } else {
        config.poisson.clone()
    };
    let mut used = Vec::new();
    let mut structures = Vec::new();
    for c in chosen {
        match PoissonStructure::new(c.clone()) {
            Ok(p) => {
                let invariance = check_poisson_map(&phi, &p, config.samples, seed)?;
                used.push(PoissonEntry {
                    rank: p.rank(),
                    matrix: c,
                    invariance,
                });
                structures.push(p);
            }
            Err(e) => report.errors.push(fail("poisson", e)),
        }
    }
    report.poisson = Some(PoissonSummary {
        basis: search.basis,
        points_used: search.points_used,
        verified: search.verified,
        seed: search.seed,
        used,
    });

    let mut subs: Vec<(String, Submersion)> = Vec::new();
    match null_submersion(&omega) {
        Ok(s) => subs.push(("null".into(), aligned(s, config.align.as_ref()))),
        Err(e) => report.errors.push(fail("null submersion", e)),
    }
    for (i, p) in structures.iter().enumerate() {
        match casimir_submersion(p) {
            Ok(s) => subs.push((format!("casimir-{}", i + 1), aligned(s, config.align.as_ref()))),
            Err(e) => report.errors.push(fail("casimir submersion", e)),
        }
    }
    let (points, kept): (Vec<_>, Vec<_>) = subs.into_iter().partition(|(_, s)| s.dim_out() == 0);
    for (name, _) in points {
        report.notes.push(format!("{name}: the leaf space is a point, nothing to reduce"));
    }
    let subs = kept;
    for (name, s) in &subs {
        if s.is_trivial() {
            report.notes.push(format!("{name}: leaves are points, the reduced map is φ itself"));
        }
        report.submersions.push(NamedSubmersion {
            name: name.clone(),
            submersion: s.into(),
            saturation_index: s.saturation_index.to_string(),
        });
    }

    let mut reduced: Vec<Option<ReducedSystem>> = Vec::new();
    for (name, s) in &subs {
        match derive_reduced_map(&phi, s) {
            Ok(r) => {
                report.reduced.push(NamedReduction {
                    name: name.clone(),
                    system: (&r).into(),
                });
                reduced.push(Some(r));
            }
            Err(e) => {
                report.errors.push(fail("reduction", e));
                reduced.push(None);
            }
        }
    }

    let only: Vec<Submersion> = subs.iter().map(|(_, s)| s.clone()).collect();
    match build_flag(&only) {
        Ok(flag) => {
            for (w, p) in flag.order.windows(2).zip(&flag.projections) {
                let (outer, inner) = (w[0], w[1]);
                if let (Some(ro), Some(ri)) = (&reduced[outer], &reduced[inner]) {
                    let verified = match chained_reduction(ro, ri, p) {
                        Ok(r) => r.verified,
                        Err(e) => {
                            report.errors.push(fail("chain", e));
                            false
                        }
                    };
                    report.chains.push(ChainSummary {
                        outer: subs[outer].0.clone(),
                        inner: subs[inner].0.clone(),
                        projection: p.rows_i64(),
                        verified,
                    });
                }
            }
            report.flag = Some(FlagSummary {
                levels: flag.order.iter().map(|&i| subs[i].0.clone()).collect(),
                projections: flag.projections.iter().map(|p| p.rows_i64()).collect(),
            });
        }
        Err(Error::NotAChain { first, second }) => report.notes.push(format!(
            "{} and {} are not nested, no flag",
            subs[first].0, subs[second].0
        )),
        Err(e) => report.errors.push(fail("flag", e)),
    }

    for ((name, s), r) in subs.iter().zip(&reduced) {
        let Some(r) = r else { continue };
        if r.not_a_reduction {
            continue;
        }
        match level_dynamics(&phi, s, r, config) {
            Ok(d) => report.dynamics.push(LevelDynamics { name: name.clone(), ..d }),
            Err(e) => report.errors.push(fail("dynamics", e)),
        }
    }

    let registered: Vec<Submersion> = subs.iter().map(|(_, s)| s.clone()).collect();
    for start in 0..config.itinerary_starts {
        let x0 = random_point(seed, start as u64, n);
        match leaf_itinerary(&phi, &registered, &x0, config.itinerary_steps) {
            Ok(it) => report.itineraries.push(ItinerarySummary {
                start,
                seed,
                steps: config.itinerary_steps,
                leaves: subs
                    .iter()
                    .map(|(name, _)| name.clone())
                    .zip(it.summaries(f64::NEG_INFINITY))
                    .collect(),
            }),
            Err(e) => report.errors.push(fail("itinerary", e)),
        }
    }
    Ok(report)
}

fn level_dynamics(phi: &BirationalMap, s: &Submersion, r: &ReducedSystem, config: &WorkflowConfig) -> Result<LevelDynamics> {
    let psi = &r.psi;
    let periodicity = detect_global_periodicity(psi, config.p_max, config.seed)?;
    let first_integral = match periodicity.global_period() {
        Some(p) => Some(FirstIntegral {
            period: p,
            holds: first_integral_check(phi, &s.map, p)?,
        }),
        None => None,
    };
    let fixed_points = if psi.dim_in() <= 3 {
        Some(find_periodic_points(psi, 1, &SearchBox::default(), config.digits)?)
    } else {
        None
    };
    let scan = if periodicity.global_period().is_none() {
        Some(no_periodic_points_scan(psi, config.scan_p_max, config.scan_samples, config.seed)?)
    } else {
        None
    };
    Ok(LevelDynamics {
        name: String::new(),
        periodicity,
        first_integral,
        fixed_points,
        scan,
    })
}

/// Float starting point at `digits` precision from rationals.
pub fn float_point(x: &[num_rational::BigRational], digits: usize) -> Vec<Real> {
    let bits = bits_for_digits(digits);
    x.iter().map(|q| Real::from_rational_bits(q, bits)).collect()
}
