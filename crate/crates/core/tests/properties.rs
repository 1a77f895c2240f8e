mod common;

use common::CASES;

fn run(suite: fn(u32) -> Result<u32, String>) {
    if let Err(e) = suite(CASES) {
        panic!("{e}");
    }
}

#[test]
fn polarization_reconstruction() {
    run(common::polarization_reconstruction);
}

#[test]
fn vandermonde_reconstruction() {
    run(common::vandermonde_reconstruction);
}

#[test]
fn pushforward_contraction() {
    run(common::pushforward_contraction);
}

#[test]
fn norm_chain() {
    run(common::norm_chain);
}

#[test]
fn homogeneity_and_scaling() {
    run(common::homogeneity_and_scaling);
}

#[test]
fn exchangeable_constructive() {
    run(common::exchangeable_constructive);
}

#[test]
fn euclid2_gallery() {
    run(common::euclid2_gallery);
}

#[test]
fn lemma_slack() {
    run(common::lemma_slack);
}
