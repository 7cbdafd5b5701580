use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Result};
use cluster_reduce::algebra::{BirationalMap, Real};
use cluster_reduce::dynamics::{
    detect_global_periodicity, find_periodic_points, first_integral_check, iterate_orbit, leaf_itinerary,
    no_periodic_points_scan, render_point, LeafItinerary, Orbit, OrbitScalar, SearchBox,
};
use cluster_reduce::fixtures::{fixture, fixtures as all_fixtures, FixtureValue};
use cluster_reduce::geometry::{
    build_flag, casimir_submersion, chained_reduction, check_poisson_map, check_presymplectic_invariance,
    derive_reduced_map, find_invariant_poisson, null_submersion, CheckReport, PoissonStructure, PresymplecticForm,
    ReducedSystem, ReducedSystemRepr, Submersion, SubmersionRepr,
};
use cluster_reduce::io::SCHEMA_VERSION;
use cluster_reduce::lattice::IntMatrix;
use cluster_reduce::pipeline::{run_pipeline, WorkflowConfig};
use cluster_reduce::quiver::{cluster_map, detect_period};
use cluster_reduce::Error;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::{input, KindArg, ModeArg, Outcome, Unverified};

pub struct Context {
    pub seed: u64,
    pub digits: usize,
}

const KIND_CHECK_SAMPLES: usize = 20;

fn ok(json: Value, text: String) -> Result<Outcome> {
    Ok(Outcome {
        json,
        text,
        verified: true,
    })
}

fn one_based(seq: &[usize]) -> Vec<usize> {
    seq.iter().map(|k| k + 1).collect()
}

fn map_lines(f: &BirationalMap, var: &str) -> String {
    f.to_strings()
        .iter()
        .enumerate()
        .map(|(i, c)| format!("  {var}{}' = {c}\n", i + 1))
        .collect()
}

fn check_line(name: &str, c: &CheckReport) -> String {
    format!(
        "{name}: {} ({} points, seed {})\n",
        if c.holds { "holds" } else { "FAILS" },
        c.samples,
        c.seed
    )
}

pub fn quiver_period(matrix: &str, max: usize) -> Result<Outcome> {
    let b = input::matrix(matrix)?;
    let cert = detect_period(&b, max)?;
    let text = match &cert {
        Some(c) => format!("period m = {}, mutations at nodes {:?}\n", c.period, one_based(&c.sequence)),
        None => format!("no mutation period up to {max}\n"),
    };
    ok(
        json!({
            "schema": SCHEMA_VERSION,
            "nodes": b.rows(),
            "max_period": max,
            "period": cert.as_ref().map(|c| c.period),
            "mutation_sequence": cert.as_ref().map(|c| one_based(&c.sequence)),
        }),
        text,
    )
}

pub fn map(matrix: &str, max_m: usize) -> Result<Outcome> {
    let b = input::matrix(matrix)?;
    let cert = detect_period(&b, max_m)?
        .ok_or_else(|| Unverified(format!("quiver is not mutation-periodic with period at most {max_m}")))?;
    let phi = cluster_map(&b, &cert)?;
    let text = format!("cluster map (m = {}):\n{}", cert.period, map_lines(&phi, phi.var()));
    ok(serde_json::to_value(&phi)?, text)
}

pub fn map_period(
    ctx: &Context,
    map: &str,
    max: usize,
    points: Option<usize>,
    scan_samples: Option<usize>,
) -> Result<Outcome> {
    let f = input::map(map)?;
    let report = detect_global_periodicity(&f, max, ctx.seed)?;
    let mut doc = json!({ "schema": SCHEMA_VERSION, "map": f.to_strings() });
    let mut text = match report.global_period() {
        Some(p) => format!("globally periodic with period {p} (symbolic certificate)\n"),
        None => format!("no global period up to {max} (seed {})\n", ctx.seed),
    };
    doc["period"] = serde_json::to_value(&report)?;
    if let Some(p) = points {
        let found = find_periodic_points(&f, p, &SearchBox::default(), ctx.digits)?;
        let _ = writeln!(text, "points of period {p}: {}", found.len());
        for pt in &found {
            let coords: Vec<String> = pt.point.iter().map(|x| x.to_decimal_string(20)).collect();
            let _ = writeln!(
                text,
                "  ({})  residual 1e{:.0}  drift 1e{:.0}",
                coords.join(", "),
                pt.residual_log10,
                pt.drift_log10
            );
        }
        doc["periodic_points"] = serde_json::to_value(&found)?;
    }
    if let Some(samples) = scan_samples {
        let scan = no_periodic_points_scan(&f, max, samples, ctx.seed)?;
        let _ = writeln!(
            text,
            "scan of {samples} orbits up to {max} steps: periods found {:?}, escape growth in every open orbit: {}",
            scan.periods_found, scan.monotone_growth
        );
        let _ = writeln!(text, "note: {}", scan.note);
        doc["scan"] = serde_json::to_value(&scan)?;
    }
    ok(doc, text)
}

pub fn find_poisson(ctx: &Context, map: &str, compatible: Option<&str>) -> Result<Outcome> {
    let phi = input::map(map)?;
    let b = compatible.map(input::matrix).transpose()?;
    let search = find_invariant_poisson(&phi, b.as_ref(), ctx.seed)?;
    let mut text = format!(
        "{} independent invariant structures ({} points, seed {}, verified {})\n",
        search.basis.len(),
        search.points_used,
        search.seed,
        search.verified
    );
    for (i, c) in search.basis.iter().enumerate() {
        let _ = writeln!(text, "C{}:\n{c}", i + 1);
    }
    Ok(Outcome {
        json: json!({
            "schema": SCHEMA_VERSION,
            "seed": search.seed,
            "points_used": search.points_used,
            "verified": search.verified,
            "basis": search.basis,
        }),
        text,
        verified: search.verified,
    })
}

fn infer_kind(ctx: &Context, phi: &BirationalMap, c: &IntMatrix) -> Result<KindArg> {
    let omega = PresymplecticForm::new(c.clone())?;
    if check_presymplectic_invariance(phi, &omega, KIND_CHECK_SAMPLES, ctx.seed)?.holds {
        return Ok(KindArg::Null);
    }
    let p = PoissonStructure::new(c.clone())?;
    if check_poisson_map(phi, &p, KIND_CHECK_SAMPLES, ctx.seed)?.holds {
        return Ok(KindArg::Casimir);
    }
    Err(Unverified("the map preserves the structure neither as a presymplectic form nor as a Poisson bracket".into()).into())
}

fn submersion_of(c: IntMatrix, kind: KindArg, align: Option<&[Vec<i64>]>) -> Result<Submersion> {
    let s = match kind {
        KindArg::Null => null_submersion(&PresymplecticForm::new(c)?)?,
        KindArg::Casimir => casimir_submersion(&PoissonStructure::new(c)?)?,
    };
    match align {
        None => Ok(s),
        Some(rows) => {
            let r = s.dim_out();
            if rows.len() < r {
                bail!("alignment needs {r} exponent rows, found {}", rows.len());
            }
            Ok(s.aligned(&rows[..r])?)
        }
    }
}

fn reduction_text(sys: &ReducedSystem) -> String {
    let mut text = String::from("leaf coordinates:\n");
    for (i, row) in sys.pi.map.rows_i64().iter().enumerate() {
        let _ = writeln!(text, "  y{} = x^{row:?}", i + 1);
    }
    let _ = write!(text, "reduced map:\n{}", map_lines(&sys.psi, "y"));
    let _ = writeln!(text, "pi o phi = psi o pi verified: {}", sys.verified);
    if sys.not_a_reduction {
        text.push_str("note: the leaves are points, so psi is phi in other coordinates\n");
    }
    text
}

pub fn reduce(ctx: &Context, map: &str, structure: &str, kind: Option<KindArg>, align: Option<&str>) -> Result<Outcome> {
    let phi = input::map(map)?;
    let c = input::matrix(structure)?;
    let kind = match kind {
        Some(k) => k,
        None => infer_kind(ctx, &phi, &c)?,
    };
    let rows = align.map(input::rows).transpose()?;
    let s = submersion_of(c, kind, rows.as_deref())?;
    if s.dim_out() == 0 {
        bail!("the leaf space is a point; there is nothing to reduce");
    }
    let sys = derive_reduced_map(&phi, &s)?;
    Ok(Outcome {
        json: sys.to_json(),
        text: reduction_text(&sys),
        verified: sys.verified,
    })
}

pub fn flag(structures: &[String], kinds: &[KindArg], align: Option<&str>, map: Option<&str>) -> Result<Outcome> {
    if !kinds.is_empty() && kinds.len() != structures.len() {
        bail!("{} kinds given for {} structures", kinds.len(), structures.len());
    }
    let rows = align.map(input::rows).transpose()?;
    let subs = structures
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let kind = kinds
                .get(i)
                .copied()
                .unwrap_or(if i == 0 { KindArg::Null } else { KindArg::Casimir });
            submersion_of(input::matrix(s)?, kind, rows.as_deref())
        })
        .collect::<Result<Vec<_>>>()?;
    let flag = build_flag(&subs).map_err(|e| match e {
        Error::NotAChain { first, second } => {
            anyhow!(Unverified(format!("structures {} and {} are not nested", first + 1, second + 1)))
        }
        other => other.into(),
    })?;
    let mut text = String::from("flag, coarsest first:\n");
    let levels: Vec<Value> = flag
        .levels
        .iter()
        .zip(&flag.order)
        .map(|(s, &i)| {
            let _ = writeln!(text, "  structure {} ({:?}): {} leaf coordinates", i + 1, s.kind, s.dim_out());
            json!({ "structure": i + 1, "submersion": SubmersionRepr::from(s) })
        })
        .collect();
    let projections: Vec<Vec<Vec<i64>>> = flag.projections.iter().map(|p| p.rows_i64()).collect();
    let mut doc = json!({ "schema": SCHEMA_VERSION, "levels": levels, "projections": projections });
    let mut verified = true;
    if let Some(map) = map {
        let phi = input::map(map)?;
        let systems = flag
            .levels
            .iter()
            .filter(|s| s.dim_out() > 0)
            .map(|s| derive_reduced_map(&phi, s))
            .collect::<Result<Vec<_>, _>>()?;
        let offset = flag.levels.len() - systems.len();
        let mut chains = Vec::new();
        for (k, w) in systems.windows(2).enumerate() {
            let chain = chained_reduction(&w[0], &w[1], &flag.projections[k + offset]);
            let holds = chain.as_ref().is_ok_and(|c| c.verified);
            let _ = writeln!(
                text,
                "  level {} reduces level {}: {}",
                k + offset + 1,
                k + offset + 2,
                if holds { "verified" } else { "FAILS" }
            );
            chains.push(json!({ "outer": k + offset + 1, "inner": k + offset + 2, "verified": holds }));
            verified &= holds;
        }
        for sys in &systems {
            text.push_str(&map_lines(&sys.psi, "y"));
            text.push('\n');
            verified &= sys.verified;
        }
        doc["reduced"] = serde_json::to_value(systems.iter().map(ReducedSystemRepr::from).collect::<Vec<_>>())?;
        doc["chains"] = Value::Array(chains);
    }
    Ok(Outcome {
        json: doc,
        text,
        verified,
    })
}

fn orbit_table<S: OrbitScalar>(orbit: &Orbit<S>) -> String {
    orbit
        .points
        .iter()
        .enumerate()
        .map(|(k, p)| format!("{k:>4}  {}\n", render_point(p).join("  ")))
        .collect()
}

pub fn orbit(ctx: &Context, map: &str, start: &str, steps: usize, mode: ModeArg) -> Result<Outcome> {
    let f = input::map(map)?;
    let (json, text) = match mode {
        ModeArg::Exact => {
            let o = iterate_orbit(&f, &input::exact_point(start)?, steps)?;
            (o.to_json(), orbit_table(&o))
        }
        ModeArg::Float => {
            let o = iterate_orbit(&f, &input::float_point(start, ctx.digits)?, steps)?;
            (o.to_json(), orbit_table(&o))
        }
    };
    ok(json, text)
}

fn itinerary_text<S: OrbitScalar>(it: &LeafItinerary<S>, tol: f64) -> String {
    let mut text = String::new();
    for (i, s) in it.summaries(tol).iter().enumerate() {
        let period = s.period.map_or("-".to_string(), |p| p.to_string());
        let _ = writeln!(text, "submersion {}: {} (label period {period})", i + 1, s.description);
    }
    text
}

pub fn itinerary(
    ctx: &Context,
    map: &str,
    submersions: &[String],
    start: &str,
    steps: usize,
    mode: ModeArg,
    tol: Option<f64>,
) -> Result<Outcome> {
    let phi = input::map(map)?;
    let subs = submersions
        .iter()
        .map(|s| input::submersion(s, phi.dim_in()))
        .collect::<Result<Vec<_>>>()?;
    let (json, text) = match mode {
        ModeArg::Exact => {
            let tol = tol.unwrap_or(f64::NEG_INFINITY);
            let x0: Vec<BigRational> = input::exact_point(start)?;
            let it = leaf_itinerary(&phi, &subs, &x0, steps)?;
            (it.to_json(tol), itinerary_text(&it, tol))
        }
        ModeArg::Float => {
            let tol = tol.unwrap_or(-(ctx.digits as f64) / 2.0);
            let x0: Vec<Real> = input::float_point(start, ctx.digits)?;
            let it = leaf_itinerary(&phi, &subs, &x0, steps)?;
            (it.to_json(tol), itinerary_text(&it, tol))
        }
    };
    ok(json, text)
}

pub fn verify(
    ctx: &Context,
    map: &str,
    presymplectic: Option<&str>,
    poisson: &[String],
    system: Option<&str>,
    first_integral: Option<(&str, usize)>,
    samples: usize,
) -> Result<Outcome> {
    let phi = input::map(map)?;
    let mut checks = Vec::new();
    let mut text = String::new();
    if let Some(b) = presymplectic {
        let omega = PresymplecticForm::new(input::matrix(b)?)?;
        let c = check_presymplectic_invariance(&phi, &omega, samples, ctx.seed)?;
        text += &check_line("presymplectic invariance", &c);
        checks.push(json!({ "check": "presymplectic", "input": b, "holds": c.holds, "report": c }));
    }
    for p in poisson {
        let structure = PoissonStructure::new(input::matrix(p)?)?;
        let c = check_poisson_map(&phi, &structure, samples, ctx.seed)?;
        text += &check_line(&format!("Poisson map for {p}"), &c);
        checks.push(json!({ "check": "poisson", "input": p, "holds": c.holds, "report": c }));
    }
    if let Some(path) = system {
        let repr: ReducedSystemRepr = serde_json::from_str(&fs::read_to_string(path)?)?;
        let pi = repr.pi.to_submersion(phi.dim_in())?.map.to_birational();
        let psi = BirationalMap::parse(&repr.psi, Some(pi.dim_out()))?;
        let holds = pi.compose(&phi)? == psi.compose(&pi)?;
        let _ = writeln!(text, "pi o phi = psi o pi for {path}: {holds}");
        checks.push(json!({ "check": "reduction", "input": path, "holds": holds }));
    }
    if let Some((path, p)) = first_integral {
        let s = input::submersion(path, phi.dim_in())?;
        let holds = first_integral_check(&phi, &s.map, p)?;
        let _ = writeln!(text, "components of {path} invariant under phi^{p}: {holds}");
        checks.push(json!({ "check": "first_integral", "input": path, "period": p, "holds": holds }));
    }
    if checks.is_empty() {
        bail!("nothing to verify; pass --presymplectic, --poisson, --system or --first-integral");
    }
    let verified = checks.iter().all(|c| c["holds"] == Value::Bool(true));
    Ok(Outcome {
        json: json!({ "schema": SCHEMA_VERSION, "seed": ctx.seed, "checks": checks, "verified": verified }),
        text,
        verified,
    })
}

pub struct PipelineArgs<'a> {
    pub matrix: &'a str,
    pub poisson: &'a [String],
    pub align: Option<&'a str>,
    pub max_m: usize,
    pub max_p: usize,
    pub scan_p: usize,
    pub samples: usize,
    pub output_dir: Option<&'a Path>,
}

pub fn pipeline(ctx: &Context, args: PipelineArgs) -> Result<Outcome> {
    let b = input::matrix(args.matrix)?;
    let config = WorkflowConfig {
        seed: ctx.seed,
        m_max: args.max_m,
        p_max: args.max_p,
        scan_p_max: args.scan_p,
        digits: ctx.digits,
        samples: args.samples,
        poisson: args.poisson.iter().map(|p| input::matrix(p)).collect::<Result<_>>()?,
        align: args.align.map(input::rows).transpose()?,
        ..WorkflowConfig::default()
    };
    config.validate()?;
    let report = run_pipeline(&b, &config)?;
    let json = serde_json::to_value(&report)?;
    let text = report.render_text();
    if let Some(dir) = args.output_dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.json"), serde_json::to_string_pretty(&json)? + "\n")?;
        fs::write(dir.join("report.txt"), &text)?;
    }
    Ok(Outcome {
        json,
        text,
        verified: report.all_verified(),
    })
}

fn value_type(v: &FixtureValue) -> &'static str {
    match v {
        FixtureValue::Matrix { .. } => "matrix",
        FixtureValue::MatrixList { .. } => "matrix_list",
        FixtureValue::Exponents { .. } => "exponents",
    }
}

pub fn fixtures(name: Option<&str>) -> Result<Outcome> {
    match name {
        Some(n) => {
            let f = fixture(n)?;
            let mut json = serde_json::to_value(&f)?;
            json["schema"] = SCHEMA_VERSION.into();
            let text = match &f.value {
                FixtureValue::Matrix { matrix } => format!("{}\n{matrix}", f.description),
                FixtureValue::MatrixList { matrices } => {
                    let mut t = format!("{}\n", f.description);
                    for (i, m) in matrices.iter().enumerate() {
                        let _ = write!(t, "#{}:\n{m}", i + 1);
                    }
                    t
                }
                FixtureValue::Exponents { rows } => {
                    let mut t = format!("{}\n", f.description);
                    for r in rows {
                        let _ = writeln!(t, "  {r:?}");
                    }
                    t
                }
            };
            ok(json, text)
        }
        None => {
            let list = all_fixtures();
            let text = list
                .iter()
                .map(|f| format!("{:<16} {:<12} {}\n", f.name, value_type(&f.value), f.description))
                .collect();
            let entries: Vec<Value> = list
                .iter()
                .map(|f| json!({ "name": f.name, "type": value_type(&f.value), "description": f.description }))
                .collect();
            ok(json!({ "schema": SCHEMA_VERSION, "fixtures": entries }), text)
        }
    }
}
