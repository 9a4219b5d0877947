//! Runs one fold of active learning on the bundled synthetic dataset and
//! prints where each criterion would have stopped.
//!
//! cargo run --release -p alstop --example synthetic_fold [fold] [maxent]

use std::time::Instant;

use alstop::corpus::{make_folds, synth};
use alstop::{run_active_learning, seeds, Config, Example, LearnerKind};

fn main() -> alstop::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let fold: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let kind = if args.iter().any(|a| a == "maxent") {
        LearnerKind::Maxent
    } else {
        LearnerKind::Svm
    };

    let data: Vec<Example> = synth::generate(&synth::SyntheticConfig::default());
    let plan = make_folds(data.iter().map(|x| x.id), 10, seeds::derive_seed(1, seeds::FOLDS))?;
    let (pool, test) = plan.split(&data, fold);

    let mut config = Config::for_dataset_size(data.len(), kind);
    config.rng_seed = seeds::fold_seed(1, fold);
    let start = Instant::now();
    let trace = run_active_learning(&pool, &test, &config)?;
    println!("{} models in {:.1?}", trace.rows.len(), start.elapsed());
    for p in &trace.stop_points {
        match trace.outcome(p.criterion) {
            Some((ann, f)) => println!("{:<8} {:>5} annotations  F {:.4}  ({})", p.criterion, ann, f, p.reason),
            None => println!("{:<8} {}", p.criterion, p.reason),
        }
    }
    let last = trace.final_row().expect("at least one model");
    println!("all      {:>5} annotations  F {:.4}", last.labeled(), last.f_measure);
    for r in trace.rows.iter().step_by(10) {
        println!(
            "  it {:>3} n {:>5} F {:.4} kappa {:?} inside {:?}",
            r.iteration(),
            r.labeled(),
            r.f_measure,
            r.observation.kappa,
            r.observation.inside_margin
        );
    }
    Ok(())
}
