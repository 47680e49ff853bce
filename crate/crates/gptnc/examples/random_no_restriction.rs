//! For theories whose effect body is the full dual of the state body,
//! simplex-embeddability collapses to literal simpliciality. This example
//! samples random no-restriction polytope theories and checks the
//! equivalence instance by instance.
//!
//! ```bash
//! cargo run --example random_no_restriction
//! ```

use gptnc::embed::{decide, Verdict};
use gptnc::geometry::{dual_body, ConvexBody};
use gptnc::gpt::{is_simplicial, Gpt};
use gptnc::linalg::Vector;
use gptnc::scalar::{Rat, Scalar};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_no_restriction(rng: &mut ChaCha8Rng, dim: usize) -> Option<Gpt<Rat>> {
    let zero = Rat::zero();
    let nverts = rng.gen_range(dim..=dim + 2);
    let verts: Vec<Vector<Rat>> = (0..nverts)
        .map(|_| {
            let mut coords = vec![Rat::one()];
            for _ in 1..dim {
                coords.push(Rat::from_ratio(
                    rng.gen_range(-4i64..=4),
                    rng.gen_range(1i64..=3),
                ));
            }
            Vector(coords)
        })
        .collect();
    let states = ConvexBody::from_vertices(dim, verts, &zero).ok()?;
    if states.linear_span_rank(&zero) != dim {
        return None;
    }
    let unit = Vector::basis(dim, 0);
    let effects = dual_body(&states, &unit, &zero).ok()?;
    Some(Gpt::new(dim, states, effects, unit))
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut simplicial = 0;
    let mut embeddable = 0;
    let total = 60;
    let mut done = 0;
    while done < total {
        let dim = 2 + done % 3;
        let Some(g) = random_no_restriction(&mut rng, dim) else {
            continue;
        };
        let simp = is_simplicial(&g, &Rat::zero());
        let verdict = decide(&g).unwrap();
        assert_eq!(
            verdict.is_embeddable(),
            simp,
            "no-restriction equivalence violated"
        );
        simplicial += usize::from(simp);
        embeddable += usize::from(verdict.is_embeddable());
        if let Verdict::Embeddable { decomposition, .. } = &verdict {
            assert!(decomposition.support().len() <= dim * dim);
        }
        done += 1;
    }
    println!("sampled {total} no-restriction theories (dims 2-4)");
    println!("  simplicial: {simplicial}");
    println!("  embeddable: {embeddable}");
    println!("  the two counts agree instance by instance");
}
