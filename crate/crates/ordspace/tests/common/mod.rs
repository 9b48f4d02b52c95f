//! Shared test helpers: a random construction grammar for finite spaces of
//! orderings (sums and extensions of one-point spaces) and a random
//! generator for planted-root polynomial inputs.

// each integration test compiles this module separately and uses a subset
#![allow(dead_code)]

use ordspace::ratpoly::{parse_polynomial, Polynomial, Rational};
use ordspace::space::FiniteSpace;
use ordspace::structure::{direct_sum, group_extension, one_point_space, DecompositionTree};
use rand::rngs::StdRng;
use rand::Rng;

/// A random sum/extension tree within the given point and rank budgets.
/// Rank is capped so the exhaustive axiom scan stays tractable.
pub fn random_tree(rng: &mut StdRng, max_points: usize, max_rank: usize, depth: usize) -> DecompositionTree {
    let leaf = DecompositionTree::Leaf { label: format!("q{}", rng.gen::<u32>()) };
    if max_points < 2 || max_rank < 2 || depth == 0 || rng.gen_bool(0.3) {
        return leaf;
    }
    if rng.gen_bool(0.5) {
        // extension: points multiply by 2^d, rank grows by d
        let d_max = (max_rank - 1).min(usize::BITS as usize - max_points.leading_zeros() as usize)
            .min(2);
        if d_max == 0 {
            return leaf;
        }
        let d = rng.gen_range(1..=d_max);
        let child = random_tree(rng, max_points >> d, max_rank - d, depth - 1);
        DecompositionTree::Ext { rank: d, child: Box::new(child) }
    } else {
        // sum of 2..=3 children splitting the budgets
        let arity = rng.gen_range(2..=3usize.min(max_points).max(2));
        let mut children = Vec::with_capacity(arity);
        let mut pts = max_points;
        let mut rank = max_rank;
        for i in 0..arity {
            let remaining = arity - i - 1;
            let pb = (pts.saturating_sub(remaining)).max(1);
            let rb = (rank.saturating_sub(remaining)).max(1);
            let child = random_tree(rng, pb.min(pts.max(1)), rb.min(rank.max(1)), depth - 1);
            pts = pts.saturating_sub(child.num_points());
            rank = rank.saturating_sub(tree_rank(&child));
            children.push(child);
        }
        DecompositionTree::Sum { children }
    }
}

pub fn tree_rank(t: &DecompositionTree) -> usize {
    match t {
        DecompositionTree::Leaf { .. } => 1,
        DecompositionTree::Sum { children } => children.iter().map(tree_rank).sum(),
        DecompositionTree::Ext { rank, child } => rank + tree_rank(child),
    }
}

pub fn build_tree(t: &DecompositionTree) -> FiniteSpace {
    match t {
        DecompositionTree::Leaf { label } => one_point_space(label),
        DecompositionTree::Sum { children } => {
            let spaces: Vec<FiniteSpace> = children.iter().map(build_tree).collect();
            direct_sum(&spaces).expect("sum within budgets")
        }
        DecompositionTree::Ext { rank, child } => {
            group_extension(&build_tree(child), *rank).expect("extension within budgets")
        }
    }
}

/// A random space from the construction grammar, with at most `max_points`
/// points and `max_rank` group generators.
pub fn random_space(rng: &mut StdRng, max_points: usize, max_rank: usize) -> FiniteSpace {
    loop {
        let tree = random_tree(rng, max_points, max_rank, 4);
        let space = build_tree(&tree);
        if space.num_points() <= max_points && space.rank() <= max_rank {
            return space;
        }
    }
}

/// A building block for planted-root inputs: a polynomial with known real
/// roots, irreducible over the rationals.
#[derive(Clone)]
pub struct Block {
    pub poly: Polynomial,
    pub real_roots: usize,
}

pub fn block_pool() -> Vec<Block> {
    let mut out = Vec::new();
    for root in ["-3", "-2", "-1", "0", "1", "2", "3", "5/2", "-7/2"] {
        let r: Rational = root.parse().unwrap();
        out.push(Block { poly: Polynomial::line(&r), real_roots: 1 });
    }
    for c in ["2", "3", "5", "6", "7"] {
        out.push(Block { poly: parse_polynomial(&format!("x^2-{}", c)).unwrap(), real_roots: 2 });
    }
    out
}

/// A random set of inputs assembled from blocks with known multiplicities.
/// Returns the inputs and, per block of the pool, its multiplicity in each
/// input (the signature that predicts the refined factor structure).
pub fn random_planted_inputs(
    rng: &mut StdRng,
    max_total_roots: usize,
) -> (Vec<Polynomial>, Vec<Vec<u32>>, Vec<Block>) {
    let pool = block_pool();
    // choose distinct blocks within the root budget
    let mut chosen: Vec<usize> = Vec::new();
    let mut roots = 0usize;
    let tries = rng.gen_range(1..=4);
    for _ in 0..tries {
        let i = rng.gen_range(0..pool.len());
        if chosen.contains(&i) || roots + pool[i].real_roots > max_total_roots {
            continue;
        }
        roots += pool[i].real_roots;
        chosen.push(i);
    }
    if chosen.is_empty() {
        chosen.push(0);
    }
    let n_inputs = rng.gen_range(1..=3usize);
    let mut inputs = Vec::with_capacity(n_inputs);
    let mut signatures = vec![vec![0u32; n_inputs]; chosen.len()];
    for t in 0..n_inputs {
        let mut p = Polynomial::constant(random_constant(rng));
        let mut used_any = false;
        for (bi, &i) in chosen.iter().enumerate() {
            // the first input always uses the first block, so at least one
            // real root exists
            let use_it = (t == 0 && bi == 0) || rng.gen_bool(0.6);
            if use_it {
                let e = rng.gen_range(1..=3u32);
                signatures[bi][t] = e;
                p = p.mul(&pool[i].poly.pow(e));
                used_any = true;
            }
        }
        let _ = used_any;
        inputs.push(p);
    }
    let blocks = chosen.iter().map(|&i| pool[i].clone()).collect();
    (inputs, signatures, blocks)
}

fn random_constant(rng: &mut StdRng) -> Rational {
    let numer = loop {
        let v = rng.gen_range(-6i64..=6);
        if v != 0 {
            break v;
        }
    };
    let denom = rng.gen_range(1i64..=4);
    format!("{}/{}", numer, denom).parse().unwrap()
}
