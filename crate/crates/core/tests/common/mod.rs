#![allow(dead_code)]

use amen_core::group::{reduce_word, Letter};
use amen_core::measure::FinFn;
use amen_core::rational::rat;
use amen_core::Element;
use proptest::prelude::*;

pub fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Element> {
    prop::collection::vec((0..rank, any::<bool>()), 0..=max_len)
        .prop_map(|ls| Element::Word(reduce_word(ls.into_iter().map(|(g, i)| Letter::new(g, i)))))
}

pub fn vector(rank: usize, bound: i64) -> impl Strategy<Value = Element> {
    prop::collection::vec(-bound..=bound, rank).prop_map(Element::Vector)
}

pub fn integer(bound: i64) -> impl Strategy<Value = Element> {
    (-bound..=bound).prop_map(Element::int)
}

pub fn lamps(lo: i64, hi: i64) -> impl Strategy<Value = Element> {
    prop::collection::btree_set(lo..=hi, 0..4).prop_map(Element::Lamps)
}

pub fn dihedral(bound: i64) -> impl Strategy<Value = Element> {
    (integer(bound), integer(bound)).prop_map(|(n, h)| Element::pair(n, h))
}

pub fn lamplighter(bound: i64) -> impl Strategy<Value = Element> {
    (lamps(-bound, bound), integer(bound)).prop_map(|(n, h)| Element::pair(n, h))
}

/// A nonnegative function with small rational values on elements drawn from `points`.
pub fn fin_fn(points: impl Strategy<Value = Element>, max_len: usize) -> impl Strategy<Value = FinFn<Element>> {
    prop::collection::vec((points, 1i64..6), 1..=max_len)
        .prop_map(|pairs| FinFn::from_pairs(pairs.into_iter().map(|(p, v)| (p, rat(v, 6)))))
}

/// A signed function.
pub fn signed_fn(points: impl Strategy<Value = Element>, max_len: usize) -> impl Strategy<Value = FinFn<Element>> {
    prop::collection::vec((points, -5i64..6), 0..=max_len)
        .prop_map(|pairs| FinFn::from_pairs(pairs.into_iter().map(|(p, v)| (p, rat(v, 4)))))
}

/// Normalized version of [`fin_fn`].
pub fn density(points: impl Strategy<Value = Element>, max_len: usize) -> impl Strategy<Value = FinFn<Element>> {
    fin_fn(points, max_len).prop_map(|f| {
        let total = f.total();
        f.scaled(&(rat(1, 1) / total))
    })
}
