use std::path::PathBuf;

use clap::{Args, ValueEnum};
use emergent::braid::{
    apply_move, color, coloring_defect, encircle, encircled_defect_sweep, find_move, BraidWord, EncircleSpec,
    Granularity, Move,
};
use emergent::report::to_csv;
use emergent::{with_model, Model, Schedule};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{fail, parse_scale, point_value, read_point, write_or_print, Failure, ModelArgs, Outcome, RunArgs, ScheduleArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GranularityArg {
    Whole,
    PerCrossing,
}

impl From<GranularityArg> for Granularity {
    fn from(g: GranularityArg) -> Self {
        match g {
            GranularityArg::Whole => Granularity::Whole,
            GranularityArg::PerCrossing => Granularity::PerCrossing,
        }
    }
}

#[derive(Debug, Args)]
pub struct BraidArgs {
    /// Braid word, e.g. "s1+{1/2} s2-{1/2}", optionally headed by "braid n=3:".
    #[arg(long)]
    pub word: String,
    /// Compare with the word obtained by the first applicable R3 shift.
    #[arg(long, conflicts_with = "against")]
    pub r3: bool,
    /// Compare with this word.
    #[arg(long)]
    pub against: Option<String>,
    /// Input colors: a JSON array of points, or points separated by ';'.
    #[arg(long)]
    pub input: Option<String>,
    /// Encircle by a basepoint, written x=POINT (x=e for the origin).
    #[arg(long)]
    pub encircle: Option<String>,
    /// Encircling scale; without it a comparison sweeps the schedule.
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long, value_enum, default_value_t = GranularityArg::Whole)]
    pub granularity: GranularityArg,
    /// Number of sampled input colorings when --input is absent.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    /// Write the per-scale defects of a sweep as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Serialize)]
struct BraidReport {
    model: String,
    seed: u64,
    word: BraidWord,
    #[serde(skip_serializing_if = "Option::is_none")]
    against: Option<BraidWord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basepoint: Option<Value>,
    result: Value,
    pass: bool,
}

fn inputs<M: Model>(m: &M, args: &BraidArgs, strands: usize) -> Result<Vec<Vec<M::Point>>, Failure> {
    let Some(src) = &args.input else {
        let mut rng = args.run.rng();
        return Ok((0..args.samples.max(1))
            .map(|_| (0..strands).map(|_| m.sample_point(&mut rng)).collect())
            .collect());
    };
    let t = src.trim();
    let points: Vec<M::Point> = if t.starts_with("[[") || t.starts_with("[{") || t.starts_with("[\"") {
        let v: Vec<Value> = serde_json::from_str(t).map_err(|e| fail(format!("bad input '{src}': {e}")))?;
        v.iter()
            .map(|p| m.point_from_json(p).map_err(|e| fail(format!("bad input point {p}: {e}"))))
            .collect::<Result<_, _>>()?
    } else {
        t.split(';')
            .map(|p| {
                let v = point_value(p)?;
                m.point_from_json(&v).map_err(|e| fail(format!("bad input point '{p}': {e}")))
            })
            .collect::<Result<_, _>>()?
    };
    Ok(vec![points])
}

fn basepoint<M: Model>(m: &M, spec: &str) -> Result<M::Point, Failure> {
    let p = spec.trim().strip_prefix("x=").unwrap_or(spec);
    read_point(m, p)
}

struct Run {
    basepoint: Option<Value>,
    result: Value,
    pass: bool,
}

fn run_model<M: Model>(
    m: &M,
    args: &BraidArgs,
    word: &BraidWord,
    other: Option<&BraidWord>,
    schedule: &Schedule,
) -> Result<Run, Failure> {
    let inputs = inputs(m, args, word.strands())?;
    let x = args.encircle.as_deref().map(|s| basepoint(m, s)).transpose()?;
    let bp = x.as_ref().map(|p| m.point_to_json(p));
    let eps = args.eps.as_deref().map(parse_scale).transpose()?;
    if let Some(e) = &eps {
        m.check_scale(e)?;
    }
    let paint = |w: &BraidWord, input: &[M::Point]| -> Result<Vec<M::Point>, Failure> {
        Ok(match (&x, &eps) {
            (Some(x), Some(e)) => {
                let spec = EncircleSpec { basepoint: x.clone(), scale: e.clone(), granularity: args.granularity.into() };
                encircle(m, w, &spec, input)?
            }
            _ => color(m, w, input)?,
        })
    };
    let to_json = |c: &[M::Point]| Value::Array(c.iter().map(|p| m.point_to_json(p)).collect());

    let Some(other) = other else {
        if x.is_some() && eps.is_none() {
            return Err(fail("--encircle without a comparison word needs --eps"));
        }
        let rows = inputs
            .iter()
            .map(|i| Ok(json!({"input": to_json(i), "output": to_json(&paint(word, i)?)})))
            .collect::<Result<Vec<_>, Failure>>()?;
        return Ok(Run { basepoint: bp, result: json!({"colorings": rows}), pass: true });
    };

    match (&x, &eps) {
        (Some(x), None) => {
            let r = encircled_defect_sweep(m, word, other, x, schedule, &inputs)?;
            eprintln!("{:>4} {:>14} {:>14}", "k", "|eps|", "defect");
            for (k, e, d) in r.csv_rows() {
                eprintln!("{k:>4} {e:>14.6e} {d:>14.6e}");
            }
            let rate = r.rate.map_or_else(|| "-".into(), |s| format!("{s:.3}"));
            eprintln!("slope {rate}: {}", if r.pass { "PASS" } else { "FAIL" });
            if let Some(path) = &args.csv {
                write_or_print(&to_csv(&r), Some(path))?;
            }
            Ok(Run { basepoint: bp, pass: r.pass, result: serde_json::to_value(&r).expect("serializable") })
        }
        _ => {
            let mut worst = 0.0f64;
            for i in &inputs {
                worst = worst.max(coloring_defect(m, &paint(word, i)?, &paint(other, i)?)?);
            }
            let tol = m.law_tolerance();
            let pass = worst <= tol;
            eprintln!("coloring defect {worst:.6e} (tolerance {tol:e}): {}", if pass { "PASS" } else { "FAIL" });
            Ok(Run { basepoint: bp, pass, result: json!({"defect": worst, "tolerance": tol, "inputs": inputs.len()}) })
        }
    }
}

pub fn run(args: &BraidArgs) -> Outcome {
    let word = BraidWord::parse(&args.word)?;
    let other = if args.r3 {
        let at = find_move(&word, &Move::R3Shift).ok_or_else(|| fail(format!("no R3 shift applies to {word}")))?;
        Some(apply_move(&word, &Move::R3Shift, at)?)
    } else {
        args.against.as_deref().map(BraidWord::parse).transpose()?
    };
    if args.csv.is_some() && (args.encircle.is_none() || args.eps.is_some() || other.is_none()) {
        return Err(fail("--csv needs a comparison swept over the schedule (--r3 or --against with --encircle)"));
    }
    let cfg = args.model.resolve()?;
    let any = cfg.build()?;
    let schedule = args.schedule.schedule(any.scale_group(), any.is_exact())?;
    let out = with_model!(&any, m => run_model(m, args, &word, other.as_ref(), &schedule)?);
    args.run.emit(&BraidReport {
        model: any.name(),
        seed: args.run.seed(),
        word,
        against: other,
        basepoint: out.basepoint,
        result: out.result,
        pass: out.pass,
    })?;
    Ok(out.pass)
}
