//! The rebit's dimension gap: its state space is 2-dimensional, yet no
//! 3-ontic-state model exists. The face-counting lower bound proves any
//! model needs at least four ontic states, and the alternating search
//! confirms that d = 3 finds nothing while d = 4 succeeds.
//!
//! ```bash
//! cargo run --example dimension_gap
//! ```

use gptnc::embed::search::bilinear_search;
use gptnc::embed::{min_d_lower_bound, verify_model};
use gptnc::gpt::catalog;
use gptnc::scalar::Rat;
use num_traits::Zero;

fn main() {
    let entry = catalog::rebit::<Rat>().unwrap();
    let g = &entry.gpt;

    let bound = min_d_lower_bound(g, &Rat::zero());
    println!("every rebit model needs at least {bound} ontic states");
    println!("(each of the four states has an effect vanishing on it alone,");
    println!(" so an embedding needs four pairwise disjoint simplex faces)");

    let tries = 200;
    let found3 = bilinear_search(g, 3, tries, 1);
    println!("\nalternating search at d = 3, {tries} restarts: {}",
        match &found3 {
            Some(_) => "found a model (unexpected)",
            None => "nothing, as the lower bound demands",
        }
    );

    match bilinear_search(g, 4, 50, 1) {
        Some(model) => {
            let gf = {
                use gptnc::geometry::ConvexBody;
                use gptnc::linalg::Vector;
                let conv = |b: &ConvexBody<Rat>| {
                    ConvexBody::from_vertices(
                        b.dim(),
                        b.vertices().iter().map(|v| Vector(v.to_f64())).collect(),
                        &1e-9,
                    )
                    .unwrap()
                };
                gptnc::gpt::Gpt::new(g.dim, conv(&g.states), conv(&g.effects), Vector(g.unit.to_f64()))
            };
            println!(
                "alternating search at d = 4: found a model, valid = {}",
                verify_model(&gf, &model, &1e-9)
            );
        }
        None => println!("alternating search at d = 4 found nothing this run"),
    }
}
