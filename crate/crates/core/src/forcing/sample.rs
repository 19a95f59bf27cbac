//! Small random terms and stacks for the law checkers.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::syntax::{numeral, parse_term, Stack, Term};

/// Mixed pool: accepting, stuck, stack-shuffling, end-reading and diverging terms.
const POOL: &[&str] = &[
    "p",
    "I",
    "K",
    "W",
    "C",
    "B",
    "K p",
    "K I",
    "C p",
    "W I",
    "K (K p)",
    "C (K p)",
    "gamma p p I",
    "gamma p I I",
    "gamma (K p) p K",
    "chi",
    "chi (K p)",
    "chi I",
    "chi' I",
    "cc",
    "cc (K p)",
    "cc I",
    "a",
    "a p",
    "kappa K",
    "W W W",
    "h0",
];

pub(crate) fn pool() -> Vec<Term> {
    POOL.iter().map(|s| parse_term(s).expect("pool term parses")).collect()
}

pub(crate) fn random_term<R: Rng + ?Sized>(rng: &mut R, pool: &[Term], depth: u32) -> Term {
    if depth == 0 || rng.gen_ratio(2, 3) {
        return pool.choose(rng).expect("nonempty pool").clone();
    }
    if rng.gen_ratio(1, 10) {
        return numeral(rng.gen_range(0..3));
    }
    Term::app(random_term(rng, pool, depth - 1), random_term(rng, pool, depth - 1))
}

pub(crate) fn random_stack<R: Rng + ?Sized>(rng: &mut R, pool: &[Term], max_len: usize) -> Stack {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| random_term(rng, pool, 1)).collect()
}
