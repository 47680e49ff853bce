//! Noise robustness: the depolarizing threshold of the gbit, and
//! classicality verdicts for tables with and without uncertainty.
//!
//! ```bash
//! cargo run --example noise_robustness
//! ```

use gptnc::app::{depolarize, ingest, robustness_radius, verdict, RobustVerdict};
use gptnc::embed::decide;
use gptnc::gpt::catalog;
use gptnc::io::theory_to_csv;
use gptnc::quotient::theory_from_gpt;
use gptnc::scalar::{Rat, Scalar};

fn main() {
    let gbit = catalog::gbit::<Rat>().unwrap();
    let r = robustness_radius(&gbit.gpt).unwrap();
    println!(
        "gbit depolarizing robustness radius: {} ~ {:.4}",
        r.repr(),
        r.to_f64()
    );
    let above = depolarize(&gbit.gpt, &(r.clone() + Rat::from_ratio(1, 1000))).unwrap();
    let below = depolarize(&gbit.gpt, &(r.clone() - Rat::from_ratio(1, 1000))).unwrap();
    println!(
        "  embeddable just above: {}, just below: {}",
        decide(&above).unwrap().is_embeddable(),
        decide(&below).unwrap().is_embeddable()
    );

    // Exact gbit statistics: decisively nonclassical.
    let gbit_f64 = catalog::gbit::<f64>().unwrap();
    let csv = theory_to_csv(&theory_from_gpt(&gbit_f64.gpt));
    let (_, nt) = ingest(&csv, None, 0.0).unwrap();
    match verdict(&nt, 1e-9).unwrap() {
        RobustVerdict::Nonclassical { .. } => println!("\nexact gbit table: nonclassical"),
        other => println!("\nexact gbit table: unexpected {other:?}"),
    }

    // Exact classical statistics: decisively classical.
    let classical = catalog::classical::<f64>(3).unwrap();
    let csv = theory_to_csv(&theory_from_gpt(&classical.gpt));
    let (_, nt) = ingest(&csv, None, 0.0).unwrap();
    match verdict(&nt, 1e-9).unwrap() {
        RobustVerdict::Classical { .. } => println!("exact classical(3) table: classical"),
        other => println!("exact classical(3) table: unexpected {other:?}"),
    }

    // Large uncertainty on the gbit swallows the nonclassicality.
    let csv = theory_to_csv(&theory_from_gpt(&gbit_f64.gpt));
    let (_, nt) = ingest(&csv, None, 0.35).unwrap();
    match verdict(&nt, 1e-6).unwrap() {
        RobustVerdict::Nonclassical { .. } => {
            println!("gbit with epsilon 0.35: nonclassical (unsound!)")
        }
        RobustVerdict::Classical { .. } => println!("gbit with epsilon 0.35: classical"),
        RobustVerdict::Inconclusive { .. } => {
            println!("gbit with epsilon 0.35: inconclusive, as the noise allows")
        }
    }
}
