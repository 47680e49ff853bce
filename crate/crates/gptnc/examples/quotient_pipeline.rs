//! The full pipeline from raw statistics to a noncontextual model: build
//! the rebit's probability table, quotient it into a GPT, decide
//! embeddability, and lift the GPT model back to an ontological model of
//! the operational theory.
//!
//! ```bash
//! cargo run --example quotient_pipeline
//! ```

use gptnc::embed::{decide, Verdict};
use gptnc::quotient::{equivalence_classes, lift_model, quotient_to_gpt, rebit_theory};
use gptnc::scalar::{Rat, Scalar};
use num_traits::Zero;

fn main() {
    let zero = Rat::zero();
    let theory = rebit_theory::<Rat>();
    println!(
        "operational theory: {} preparations x {} operational effects",
        theory.preps.len(),
        theory.effect_labels().len()
    );

    let (prep_classes, effect_classes) = equivalence_classes(&theory, &zero);
    println!(
        "operational equivalence classes: {} preparation, {} effect",
        prep_classes.len(),
        effect_classes.len()
    );
    let labels = theory.effect_labels();
    for class in &effect_classes {
        if class.len() > 1 {
            let names: Vec<&str> = class.iter().map(|&i| labels[i].as_str()).collect();
            println!("  equivalent effects: {}", names.join(" = "));
        }
    }

    let (g, maps) = quotient_to_gpt(&theory, &zero).unwrap();
    println!(
        "\nquotient GPT: dim {}, {} state vertices, {} effect vertices",
        g.dim,
        g.states.vertices().len(),
        g.effects.vertices().len()
    );

    match decide(&g).unwrap() {
        Verdict::Embeddable { model, .. } => {
            println!("GPT embeds with {} ontic states; lifting the model", model.d);
            let lifted = lift_model(&model, &maps, &theory, &zero).unwrap();
            println!("lifted model valid for the theory: {}", lifted.is_valid_for(&theory, &zero));
            for prep in &theory.preps {
                let dist = lifted.mu_of(prep).unwrap();
                let parts: Vec<String> = dist.iter().map(Scalar::repr).collect();
                println!("  mu({prep}) = ({})", parts.join(", "));
            }
            let xi_z = lifted.xi_of("0|Z").unwrap();
            let xi_z2 = lifted.xi_of("0|Z2").unwrap();
            println!(
                "equivalent effects share one response function: {}",
                xi_z == xi_z2
            );
        }
        Verdict::NotEmbeddable { .. } => unreachable!("the rebit embeds"),
    }
}
