use clap::Args;
use emergent::irq::{verify_distributivity, verify_irq_axioms, verify_pplay, LawReport};
use emergent::with_model;
use emergent::Model;
use serde::Serialize;

use crate::args::{test_scales, ModelArgs, Outcome, RunArgs};

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Samples per law.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

#[derive(Serialize)]
struct CheckReport {
    model: String,
    seed: u64,
    samples: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    expected_failures: Vec<String>,
    reports: Vec<LawReport>,
    pass: bool,
}

/// irq axioms, the seven gate identities at three scales, and
/// self-distributivity at three scale pairs.
pub fn run(args: &CheckArgs) -> Outcome {
    let cfg = args.model.resolve()?;
    let any = cfg.build()?;
    let seed = args.run.seed();
    let n = args.samples.max(1);
    let mut reports = with_model!(&any, m => {
        let scales = test_scales(m.scale_group());
        let mut out = vec![verify_irq_axioms(m, n, seed)?];
        for e in &scales {
            out.push(verify_pplay(m, e, n, seed)?);
        }
        for i in 0..scales.len() {
            let j = (i + 1) % scales.len();
            out.push(verify_distributivity(m, &scales[i], &scales[j], n, seed)?);
        }
        out
    });
    for r in &mut reports {
        r.mark_expected_failures(&cfg.expected_failures);
        for law in &r.laws {
            eprintln!("{:<40} {:<40} {:?}", r.test, law.law, law.status);
        }
    }
    let pass = reports.iter().all(|r| r.pass);
    args.run.emit(&CheckReport {
        model: any.name(),
        seed,
        samples: n,
        expected_failures: cfg.expected_failures.clone(),
        reports,
        pass,
    })?;
    Ok(pass)
}
