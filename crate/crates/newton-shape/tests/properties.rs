//! Randomized invariant suites over the exact arithmetic and geometry.

use newton_shape::testkit as tk;

const CASES: u32 = 1000;

#[test]
fn chain_rule_for_random_morphisms() {
    tk::prop_chain_rule(101, CASES).unwrap();
}

#[test]
fn product_rules_for_degrees_forms_and_endpoints() {
    tk::prop_product_rules(202, CASES).unwrap();
}

#[test]
fn bracket_degree_bound_and_equality_condition() {
    tk::prop_bracket_bound(303, CASES).unwrap();
}

#[test]
fn order_lemma_on_lattice_points() {
    tk::prop_order_lemma(404, CASES).unwrap();
}

#[test]
fn flip_equivariance_and_hull_transform() {
    tk::prop_flip_equivariance(505, CASES).unwrap();
}

#[test]
fn power_decomposition_roundtrip_and_maximality() {
    tk::prop_power_decompose(606, CASES).unwrap();
}

#[test]
fn endpoint_orientation_cross_positive() {
    tk::prop_endpoint_orientation(707, CASES).unwrap();
}

#[test]
fn tame_pairs_have_bracket_one() {
    tk::prop_tame_pairs(808, 300).unwrap();
}

#[test]
fn parse_render_roundtrip() {
    tk::prop_parse_render(909, CASES).unwrap();
}

#[test]
fn endpoint_alignment_and_shift() {
    tk::prop_endpoint_alignment(111, CASES).unwrap();
}

#[test]
fn consecutive_edges_share_their_vertex() {
    tk::prop_consecutive_edges(222, 400).unwrap();
}

#[test]
fn elementary_equivariance() {
    tk::prop_elementary_equivariance(333, CASES).unwrap();
}

#[test]
fn ramification_of_products() {
    tk::prop_ramification(444, CASES).unwrap();
}

#[test]
fn homogeneous_decomposition_resums() {
    tk::prop_homogeneous_decomposition(555, CASES).unwrap();
}

#[test]
fn hull_contains_every_support_point() {
    tk::prop_hull_containment(666, CASES).unwrap();
}

#[test]
fn f_element_excludes_diagonal_endpoints() {
    tk::prop_f_excludes_diagonal_endpoints(777, 150).unwrap();
}

#[test]
fn ring_laws_and_bracket_derivation() {
    tk::prop_ring_and_derivation(888, CASES).unwrap();
}
