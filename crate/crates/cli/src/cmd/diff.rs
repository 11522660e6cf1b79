use std::path::PathBuf;

use clap::Args;
use emergent::limits::{derivative_convergence, TestFunction};
use emergent::models::{AnyModel, Scalar};
use emergent::report::to_csv;
use emergent::{Model, Schedule};
use serde::Serialize;
use serde_json::Value;

use crate::args::{fail, point_value, write_or_print, Failure, ModelArgs, Outcome, RunArgs, ScheduleArgs};

#[derive(Debug, Args)]
pub struct DiffArgs {
    /// identity, square, cube or affine (y -> 2y + 1), applied coordinatewise.
    #[arg(long = "f")]
    pub function: TestFunction,
    /// Point of differentiation; its length sets the dimension unless --dim is given.
    #[arg(long)]
    pub x: String,
    /// Direction point.
    #[arg(long)]
    pub u: String,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Serialize)]
struct DiffReport {
    model: String,
    function: TestFunction,
    x: Value,
    u: Value,
    limit: Value,
    report: emergent::limits::ConvergenceReport,
    pass: bool,
}

fn run_vec<M, F>(m: &M, args: &DiffArgs, x: &Value, u: &Value, schedule: &Schedule) -> Result<DiffReport, Failure>
where
    M: Model<Point = Vec<F>>,
    F: Scalar,
{
    let read = |v: &Value| m.point_from_json(v).map_err(|e| fail(format!("point {v} for {}: {e}", m.name())));
    let (xp, up) = (read(x)?, read(u)?);
    let f = args.function;
    let (limit, report) = derivative_convergence(m, |p: &Vec<F>| Ok(f.apply(p)), &xp, &up, schedule)?;
    let limit = m.point_to_json(&limit);
    eprintln!("{:>4} {:>14} {:>14}", "k", "|eps|", "residual");
    for (k, e, d) in report.csv_rows() {
        eprintln!("{k:>4} {e:>14.6e} {d:>14.6e}");
    }
    eprintln!("limit {limit}: {}", if report.pass { "PASS" } else { "FAIL" });
    Ok(DiffReport {
        model: m.name(),
        function: f,
        x: m.point_to_json(&xp),
        u: m.point_to_json(&up),
        limit,
        pass: report.pass,
        report,
    })
}

/// Derivative sequences on vector models; the model defaults to exact
/// affine space of the dimension of `--x`.
pub fn run(args: &DiffArgs) -> Outcome {
    let x = point_value(&args.x)?;
    let u = point_value(&args.u)?;
    let mut model = args.model.clone();
    if model.dim.is_none() && model.config.is_none() {
        model.dim = x.as_array().map(|a| a.len());
    }
    let cfg = model.resolve()?;
    let any = cfg.build()?;
    let schedule = args.schedule.schedule(any.scale_group(), any.is_exact())?;
    let out = match &any {
        AnyModel::AffineExact(m) => run_vec(m, args, &x, &u, &schedule)?,
        AnyModel::AffineDouble(m) => run_vec(m, args, &x, &u, &schedule)?,
        AnyModel::Warped(m) => run_vec(m, args, &x, &u, &schedule)?,
        AnyModel::Curved(m) => run_vec(m, args, &x, &u, &schedule)?,
        other => return Err(fail(format!("diff needs a vector model (affine, warped, curved), got {}", other.name()))),
    };
    if let Some(path) = &args.csv {
        write_or_print(&to_csv(&out.report), Some(path))?;
    }
    args.run.emit(&out)?;
    Ok(out.pass)
}
