use std::path::PathBuf;

use clap::{Args, ValueEnum};
use emergent::irq::LawReport;
use emergent::limits::{
    emergent_ops, verify_a2, verify_cone, verify_conical_group, verify_gwd_axioms, verify_norm_limit,
    verify_relative_limit, ConvergenceReport, EmergentOps, TangentDistance,
};
use emergent::models::ModelConfig;
use emergent::report::{to_csv, to_csv_series};
use emergent::{with_group_model, with_model, with_normed_model, DilationGroup, Model, NormedGroup, Scale, ScaleGroup, Schedule};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{fail, parse_scale, positive_tolerance, read_point, test_scales, write_or_print, Failure, ModelArgs, Outcome, RunArgs, ScheduleArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LimitTest {
    /// Emergent sum, difference and inverse, and their group laws.
    Conical,
    /// Relative dilation against its limit formula.
    Relative,
    /// Contraction, the limit operation and its group laws (group models).
    Gwd,
    /// Rescaled distances against the tangent distance.
    A2,
    /// Homogeneity of the tangent distance.
    Cone,
    /// Limit norms (normed group models).
    Norm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Tangent {
    Exact,
    Rescaled,
}

#[derive(Debug, Args)]
pub struct LimitsArgs {
    #[arg(long, value_enum)]
    pub test: LimitTest,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    /// Basepoint: JSON, comma-separated coordinates, or `e` for the origin.
    #[arg(long, default_value = "e")]
    pub x: String,
    /// Scale of the relative dilation (default 1/2, or t for power scales).
    #[arg(long)]
    pub lambda: Option<String>,
    /// Number of sampled pairs or triples.
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
    /// How the cone test obtains the tangent distance.
    #[arg(long, value_enum, default_value_t = Tangent::Rescaled)]
    pub tangent: Tangent,
    /// Override the law tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Also write the per-scale defects as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Serialize)]
struct LimitsReport {
    test: String,
    model: String,
    seed: u64,
    schedule: String,
    basepoint: Value,
    result: Value,
    pass: bool,
}

struct Run {
    result: Value,
    pass: bool,
    series: Vec<(String, ConvergenceReport)>,
}

fn law_run(mut r: LawReport, cfg: &ModelConfig) -> (Value, bool) {
    r.mark_expected_failures(&cfg.expected_failures);
    let pass = r.pass;
    (serde_json::to_value(&r).expect("serializable"), pass)
}

fn samples<M: Model, R: Rng>(m: &M, rng: &mut R, n: usize) -> Vec<(M::Point, M::Point, M::Point)> {
    (0..n.max(1))
        .map(|_| (m.sample_point(rng), m.sample_point(rng), m.sample_point(rng)))
        .collect()
}

fn pairs<P: Clone>(t: &[(P, P, P)]) -> Vec<(P, P)> {
    t.iter().map(|(a, b, _)| (a.clone(), b.clone())).collect()
}

fn default_lambda(group: ScaleGroup) -> Scale {
    match group {
        ScaleGroup::PositiveRationals => Scale::from_ints(1, 2).expect("positive"),
        ScaleGroup::IntegerPowers => Scale::Power(1),
    }
}

fn run_model<M: Model>(m: &M, args: &LimitsArgs, cfg: &ModelConfig, schedule: &Schedule) -> Result<Run, Failure> {
    let x = read_point(m, &args.x)?;
    let mut rng = args.run.rng();
    let triples = samples(m, &mut rng, args.samples);
    let prs = pairs(&triples);
    let lambdas = test_scales(m.scale_group());
    let default_tol = if m.is_exact() { 0.0 } else { 1e-6 };
    Ok(match args.test {
        LimitTest::Conical => {
            let ops = EmergentOps::new(m, x, schedule.clone())?;
            let table = emergent_ops(&ops, &prs)?;
            let tol = positive_tolerance(args.tolerance, default_tol)?;
            let (group, group_pass) = law_run(verify_conical_group(&ops, &triples, &lambdas, tol)?, cfg);
            for e in &table.entries {
                eprintln!("{:<60} rate {:>8} {}", e.report.test, fmt_rate(e.report.rate), verdict(e.report.pass));
            }
            let mut series: Vec<(String, ConvergenceReport)> =
                table.entries.iter().map(|e| (e.report.test.clone(), e.report.clone())).collect();
            series.push(("contraction".into(), table.contraction.clone()));
            let pass = table.pass && group_pass;
            Run { result: json!({"table": table, "group": group}), pass, series }
        }
        LimitTest::Relative => {
            let lambda = match &args.lambda {
                Some(s) => parse_scale(s)?,
                None => default_lambda(m.scale_group()),
            };
            let ops = EmergentOps::new(m, x, schedule.clone())?;
            let r = verify_relative_limit(&ops, &lambda, &prs)?;
            eprintln!("{:<60} rate {:>8} {}", r.test, fmt_rate(r.rate), verdict(r.pass));
            defect_run(r)
        }
        LimitTest::A2 => {
            let r = verify_a2(m, &x, schedule, &prs)?;
            eprintln!("{:<60} rate {:>8} {}", r.test, fmt_rate(r.rate), verdict(r.pass));
            defect_run(r)
        }
        LimitTest::Cone => {
            let (kind, tol) = match args.tangent {
                Tangent::Exact => (TangentDistance::Exact, 1e-12),
                Tangent::Rescaled => (TangentDistance::Rescaled, 1e-5),
            };
            let tol = positive_tolerance(args.tolerance, tol)?;
            let (result, pass) = law_run(verify_cone(m, &x, schedule, kind, &lambdas, &prs, tol)?, cfg);
            Run { result, pass, series: Vec::new() }
        }
        LimitTest::Gwd | LimitTest::Norm => unreachable!("dispatched separately"),
    })
}

fn run_group<G: DilationGroup>(g: &G, args: &LimitsArgs, cfg: &ModelConfig, schedule: &Schedule) -> Result<Run, Failure> {
    let mut rng = args.run.rng();
    let triples = samples(g, &mut rng, args.samples);
    let tol = positive_tolerance(args.tolerance, g.law_tolerance())?;
    let mut r = verify_gwd_axioms(g, schedule, &triples, &test_scales(g.scale_group()), tol)?;
    r.mark_expected_failures(&cfg.expected_failures);
    let series = vec![("H0 contraction".to_string(), r.contraction.clone())];
    Ok(Run { pass: r.pass, result: serde_json::to_value(&r).expect("serializable"), series })
}

/// Unit coordinate vectors of the model, read through its JSON form.
fn probes<G: Model>(g: &G) -> Vec<G::Point> {
    let dim = match g.point_to_json(&g.origin()) {
        Value::Array(a) => a.len(),
        _ => 0,
    };
    (0..dim)
        .filter_map(|i| {
            let v: Vec<Value> = (0..dim).map(|j| Value::from(i64::from(i == j))).collect();
            g.point_from_json(&Value::Array(v)).ok()
        })
        .collect()
}

fn run_normed<G: NormedGroup>(g: &G, args: &LimitsArgs, cfg: &ModelConfig, schedule: &Schedule) -> Result<Run, Failure> {
    let mut rng = args.run.rng();
    let triples = samples(g, &mut rng, args.samples);
    let mut points = probes(g);
    points.extend(triples.iter().map(|t| t.0.clone()));
    let mut r = verify_norm_limit(g, schedule, &points, &pairs(&triples))?;
    r.mark_expected_failures(&cfg.expected_failures);
    for p in r.degenerate_points() {
        eprintln!("limit norm vanishes at {p}");
    }
    Ok(Run { pass: r.pass, result: serde_json::to_value(&r).expect("serializable"), series: Vec::new() })
}

fn defect_run(r: ConvergenceReport) -> Run {
    Run {
        pass: r.pass,
        result: serde_json::to_value(&r).expect("serializable"),
        series: vec![(r.test.clone(), r)],
    }
}

fn fmt_rate(r: Option<f64>) -> String {
    r.map_or_else(|| "-".into(), |r| format!("{r:.3}"))
}

fn verdict(p: bool) -> &'static str {
    if p {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn run(args: &LimitsArgs) -> Outcome {
    let cfg = args.model.resolve()?;
    let any = cfg.build()?;
    let schedule = args.schedule.schedule(any.scale_group(), any.is_exact())?;
    let unsupported = |what: &str| fail(format!("limits --test {what} needs a {} model; {} is not one", what_needs(what), any.name()));
    let out = match args.test {
        LimitTest::Gwd => with_group_model!(&any, g => run_group(g, args, &cfg, &schedule)?, _ => return Err(unsupported("gwd"))),
        LimitTest::Norm => with_normed_model!(&any, g => run_normed(g, args, &cfg, &schedule)?, _ => return Err(unsupported("norm"))),
        _ => with_model!(&any, m => run_model(m, args, &cfg, &schedule)?),
    };
    let basepoint = with_model!(&any, m => m.point_to_json(&read_point(m, &args.x)?));
    if let Some(path) = &args.csv {
        let csv = match out.series.as_slice() {
            [] => return Err(fail(format!("limits --test {:?} has no per-scale series", args.test).to_lowercase())),
            [(_, one)] => to_csv(one),
            many => to_csv_series(&many.iter().map(|(n, r)| (n.clone(), r)).collect::<Vec<_>>()),
        };
        write_or_print(&csv, Some(path))?;
    }
    let test = format!("{:?}", args.test).to_lowercase();
    eprintln!("{test} on {}: {}", any.name(), verdict(out.pass));
    args.run.emit(&LimitsReport {
        test,
        model: any.name(),
        seed: args.run.seed(),
        schedule: schedule.description().to_string(),
        basepoint,
        result: out.result,
        pass: out.pass,
    })?;
    Ok(out.pass)
}

fn what_needs(test: &str) -> &'static str {
    match test {
        "gwd" => "group",
        _ => "normed group",
    }
}
