//! Walks the example catalog: validity reports, simpliciality,
//! no-restriction status, and weak-nonclassicality flags for each entry.
//!
//! ```bash
//! cargo run --example catalog_tour
//! ```

use gptnc::gpt::{catalog, is_simplicial, satisfies_no_restriction, validate, weak_nonclassicality};
use gptnc::scalar::Rat;
use num_traits::Zero;

fn main() {
    let zero = Rat::zero();
    println!(
        "{:<24} {:>6} {:>8} {:>10} {:>8} {:>14} {:>10}",
        "entry", "dim", "states", "effects", "valid", "simplicial", "no-restr"
    );
    for (name, entry) in catalog::standard_entries::<Rat>() {
        let g = &entry.gpt;
        let report = validate(g, &zero);
        println!(
            "{:<24} {:>6} {:>8} {:>10} {:>8} {:>14} {:>10}",
            name,
            g.dim,
            g.states.vertices().len(),
            g.effects.vertices().len(),
            report.is_valid(),
            is_simplicial(g, &zero),
            satisfies_no_restriction(g, &zero),
        );
    }

    println!("\nweak nonclassicality (incompatibility, mixture ambiguity):");
    for (name, entry) in catalog::standard_entries::<Rat>() {
        let flags = weak_nonclassicality(&entry.gpt, &zero);
        println!(
            "  {:<24} ({}, {})",
            name, flags.incompatibility, flags.mixture_ambiguity
        );
    }
}
