//! Quasiprobability representations: a positive one for the rebit (from
//! its toy model) and an unavoidably signed one for the gbit, whose
//! negativity witnesses the absence of any ontological model.
//!
//! ```bash
//! cargo run --example quasiprobability
//! ```

use gptnc::embed::decide;
use gptnc::gpt::catalog;
use gptnc::quasiprob::{from_model, frame_decomposition, from_decomposition, is_positive, negativity, to_model};
use gptnc::scalar::{Rat, Scalar};
use num_traits::Zero;

fn main() {
    let zero = Rat::zero();

    let rebit = catalog::rebit::<Rat>().unwrap();
    let toy = rebit.reference_model.as_ref().unwrap();
    let q = from_model(toy, &rebit.gpt);
    println!(
        "rebit toy representation: positive = {}, negativity = {}",
        is_positive(&q, &zero),
        negativity(&q).total().repr()
    );
    let back = to_model(&q, &zero).unwrap();
    println!("round trip back to a model is bitwise exact: {}", back == *toy);

    let gbit = catalog::gbit::<Rat>().unwrap();
    let pairs = frame_decomposition(&gbit.gpt, &zero).unwrap();
    let q = from_decomposition(&gbit.gpt, &pairs, &zero).unwrap();
    let neg = negativity(&q);
    println!(
        "\ngbit frame representation: positive = {}, state negativity = {}, effect negativity = {}",
        is_positive(&q, &zero),
        neg.states.repr(),
        neg.effects.repr()
    );
    println!(
        "probabilities still reproduce exactly: {}",
        q.reproduces_probabilities(&zero)
    );
    println!(
        "no positive representation can exist: decide(gbit) embeddable = {}",
        decide(&gbit.gpt).unwrap().is_embeddable()
    );
    match to_model(&q, &zero) {
        Err(e) => println!("to_model on the signed representation: {e}"),
        Ok(_) => unreachable!("representation is signed"),
    }
}
