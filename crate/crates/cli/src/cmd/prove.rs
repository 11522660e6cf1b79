use std::fs;
use std::path::PathBuf;

use clap::Args;
use emergent::term::tree::path_string;
use emergent::term::{builtin_identities, prove_identity_seeded, Identity, ProofResult, Verdict};
use serde::Serialize;

use crate::args::{fail, Outcome, RunArgs};

#[derive(Debug, Args)]
pub struct ProveArgs {
    /// File with one identity per line: `[label:] lhs = rhs`, `#` comments.
    pub file: Option<PathBuf>,
    /// Prove the seven built-in gate identities.
    #[arg(long)]
    pub builtin: bool,
    /// An identity given inline (repeatable).
    #[arg(long)]
    pub identity: Vec<String>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Serialize)]
struct ProveReport {
    seed: u64,
    proved: usize,
    total: usize,
    results: Vec<ProofResult>,
    pass: bool,
}

pub fn run(args: &ProveArgs) -> Outcome {
    let mut ids: Vec<Identity> = Vec::new();
    if args.builtin {
        ids.extend(builtin_identities());
    }
    if let Some(path) = &args.file {
        let text = fs::read_to_string(path).map_err(|e| fail(format!("cannot read {}: {e}", path.display())))?;
        ids.extend(Identity::parse_many(&text).map_err(|e| fail(format!("{}: {e}", path.display())))?);
    }
    for src in &args.identity {
        ids.push(Identity::parse(src).map_err(|e| fail(format!("identity '{src}': {e}")))?);
    }
    if ids.is_empty() {
        return Err(fail("nothing to prove: give a file, --identity or --builtin"));
    }
    let seed = args.run.seed();
    let results: Vec<ProofResult> = ids.iter().map(|id| prove_identity_seeded(id, seed)).collect();
    for r in &results {
        let verdict = match r.verdict {
            Verdict::Success => "SUCCESS",
            Verdict::Fail => "FAIL",
        };
        eprintln!("{verdict:<8} {}", r.label);
        for (side, trace) in [("lhs", &r.lhs_trace), ("rhs", &r.rhs_trace)] {
            for s in &trace.steps {
                eprintln!("         {side} {:<7} at {:<8} {} -> {}", s.rule.name(), path_string(&s.path), s.before, s.after);
            }
        }
        if let Some(c) = &r.counterexample {
            let pts: Vec<String> = c.points.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let scs: Vec<String> = c.scales.iter().map(|(k, v)| format!("{k}={v}")).collect();
            eprintln!("         counterexample {} {}: lhs {} rhs {}", pts.join(" "), scs.join(" "), c.lhs, c.rhs);
        }
        if let Some(note) = &r.note {
            eprintln!("         {note}");
        }
    }
    let proved = results.iter().filter(|r| r.success()).count();
    eprintln!("{proved}/{} SUCCESS", results.len());
    let pass = proved == results.len();
    args.run.emit(&ProveReport { seed, proved, total: results.len(), results, pass })?;
    Ok(pass)
}
