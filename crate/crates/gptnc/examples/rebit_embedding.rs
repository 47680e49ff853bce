//! Decides simplex-embeddability of the stabilizer rebit, prints the
//! resulting ontological model, and checks it against the four-state toy
//! model from the catalog.
//!
//! ```bash
//! cargo run --example rebit_embedding
//! ```

use gptnc::embed::{decide, model_to_witness, verify_witness, Verdict};
use gptnc::gpt::catalog;
use gptnc::scalar::{Rat, Scalar};
use num_traits::Zero;

fn main() {
    let entry = catalog::rebit::<Rat>().unwrap();
    let g = &entry.gpt;
    let zero = Rat::zero();

    match decide(g).unwrap() {
        Verdict::Embeddable { model, .. } => {
            println!("rebit is simplex-embeddable with {} ontic states", model.d);
            println!("\nmu distributions over the ontic set:");
            for (label, s) in &entry.state_labels {
                let dist = model.mu_map.mul_vec(s);
                let parts: Vec<String> = dist.iter().map(Scalar::repr).collect();
                println!("  {:<8} -> ({})", label, parts.join(", "));
            }
            println!("\nxi response functions:");
            for (label, e) in &entry.effect_labels {
                let resp = model.xi_map.mul_vec(e);
                let parts: Vec<String> = resp.iter().map(Scalar::repr).collect();
                println!("  {:<8} -> ({})", label, parts.join(", "));
            }
            let witness = model_to_witness(&model);
            println!(
                "\nwitness passes Definition-1 conditions: {}",
                verify_witness(g, &witness, &zero).unwrap()
            );
        }
        Verdict::NotEmbeddable { .. } => unreachable!("the rebit admits the toy model"),
    }

    let toy = entry.reference_model.as_ref().unwrap();
    println!("\ntoy model reproduces all 24 probabilities exactly:");
    let mut all_ok = true;
    for (el, e) in &entry.effect_labels {
        for (sl, s) in &entry.state_labels {
            let p = toy.xi_map.mul_vec(e).dot(&toy.mu_map.mul_vec(s));
            all_ok &= p == e.dot(s);
            if el.contains('+') && sl.contains('0') {
                println!("  Pr({el}, {sl}) = {}", p.repr());
            }
        }
    }
    println!("  all pairs match: {all_ok}");
}
