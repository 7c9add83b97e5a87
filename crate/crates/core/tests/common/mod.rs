#![allow(dead_code)]

use edit_mbr::{Candidate, Edit, EditSet, Sentence};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn token(k: usize) -> String {
    format!("w{k}")
}

pub fn random_sentence(rng: &mut impl Rng, max_len: usize, vocab: usize) -> Sentence {
    let len = rng.gen_range(0..=max_len);
    Sentence::from_tokens((0..len).map(|_| token(rng.gen_range(0..vocab)))).unwrap()
}

/// A random edit that is valid against `src` (in range, not an identity).
pub fn random_edit(rng: &mut impl Rng, src: &Sentence, vocab: usize) -> Edit {
    let n = src.len();
    loop {
        let start = rng.gen_range(0..=n);
        let end = (start + rng.gen_range(0..=2)).min(n);
        let rep_len = rng.gen_range(0..=2);
        let replacement: Vec<String> = (0..rep_len).map(|_| token(rng.gen_range(0..vocab))).collect();
        if replacement.as_slice() != &src.tokens()[start..end] {
            return Edit { start, end, replacement };
        }
    }
}

pub fn edit_pool(rng: &mut impl Rng, src: &Sentence, size: usize, vocab: usize) -> Vec<Edit> {
    let mut pool: Vec<Edit> = Vec::new();
    while pool.len() < size {
        let e = random_edit(rng, src, vocab);
        if !pool.contains(&e) {
            pool.push(e);
        }
    }
    pool
}

/// A conflict-free subset of `pool`, each edit tried with probability `p`.
pub fn random_set(rng: &mut impl Rng, src: &Sentence, pool: &[Edit], p: f64) -> EditSet {
    let mut order: Vec<&Edit> = pool.iter().collect();
    order.shuffle(rng);
    let mut set = EditSet::empty(src.len());
    for e in order {
        if rng.gen_bool(p) {
            if let Some(grown) = set.with(e.clone()) {
                set = grown;
            }
        }
    }
    set
}

pub fn systems(sets: &[EditSet]) -> Vec<Candidate> {
    sets.iter()
        .enumerate()
        .map(|(i, s)| Candidate::new(format!("sys{i}"), s.clone()).unwrap())
        .collect()
}

/// Intersection size by explicit pairwise comparison of edit fields.
pub fn brute_common(a: &EditSet, b: &EditSet) -> usize {
    a.iter()
        .filter(|x| {
            b.iter()
                .any(|y| x.start == y.start && x.end == y.end && x.replacement == y.replacement)
        })
        .count()
}

pub fn brute_votes(e: &Edit, sets: &[EditSet]) -> usize {
    sets.iter()
        .filter(|s| s.iter().any(|y| y.start == e.start && y.end == e.end && y.replacement == e.replacement))
        .count()
}

/// Source `a b c` fixture: h1 = {B}, h2 = {B, d}, h3 = {}.
pub fn abc_fixture() -> (Sentence, Vec<Candidate>) {
    let src = Sentence::tokenize("a b c");
    let b = Edit::new(1, 2, ["B"]);
    let d = Edit::new(3, 3, ["d"]);
    let mk = |label: &str, edits: Vec<Edit>| Candidate::new(label, EditSet::new(&src, edits).unwrap()).unwrap();
    let sys = vec![mk("h1", vec![b.clone()]), mk("h2", vec![b, d]), mk("h3", vec![])];
    (src, sys)
}
