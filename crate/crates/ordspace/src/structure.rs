//! The construction algebra of finite spaces: direct sums, group
//! extensions, fans, connectivity, stability index, decomposition and
//! isomorphism testing.
//!
//! Every finite space of orderings is built from one-point spaces by
//! iterating direct sums and group extensions, essentially uniquely (the
//! known ambiguity is the two-point space, which is both a sum of two
//! singletons and a rank-1 extension of a singleton; [`decompose`] always
//! reports the extension form). [`decompose`] inverts the construction with
//! verification at every step, which makes it a sound and complete
//! recognizer of finite spaces of orderings — strictly stronger than the
//! value-set associativity scan, which some non-spaces satisfy.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::gf2::{self, Eliminator};
use crate::space::{
    quotient_structure, subspace_generated, verify_axioms, AxiomFailure, AxiomVerdict,
    FiniteSpace, GroupElement, RawSpace, VerifyMethod, AXIOM_SCAN_MAX_RANK,
};
use crate::Result;

/// Default cap on the number of points for the stability-index search.
pub const DEFAULT_STABILITY_MAX_POINTS: usize = 24;
/// Node budget for the isomorphism backtracking search.
const ISO_NODE_BUDGET: u64 = 10_000_000;

/// The one-point space: two group elements, the point makes -1 negative.
pub fn one_point_space(label: &str) -> FiniteSpace {
    FiniteSpace::new(vec!["m".into()], 0b1, vec![(label.to_string(), 0b1)])
        .expect("the one-point space is valid")
}

/// Direct sum: points are the disjoint union, the group is the direct
/// product with each component embedded as the functions equal to +1 off
/// its component, and -1 is the product of the component -1s. Labels and
/// generator names are prefixed with the component index.
pub fn direct_sum(spaces: &[FiniteSpace]) -> Result<FiniteSpace> {
    if spaces.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut names = Vec::new();
    let mut minus = 0u64;
    let mut points: Vec<(String, u64)> = Vec::new();
    let mut offset = 0usize;
    for (i, s) in spaces.iter().enumerate() {
        if offset + s.rank() > 64 {
            return Err(Error::SizeCapExceeded { what: "direct sum exceeds rank 64".into() });
        }
        for n in s.generator_names() {
            names.push(format!("{}.{}", i, n));
        }
        minus |= s.minus_one().bits() << offset;
        for x in 0..s.num_points() {
            points.push((format!("{}.{}", i, s.label(x)), s.row(x) << offset));
        }
        offset += s.rank();
    }
    FiniteSpace::new(names, minus, points)
}

/// Group extension by `d` fresh generators: every point splits into `2^d`
/// points, one for each sign pattern on the new generators; -1 keeps its
/// coordinates over the old basis.
pub fn group_extension(base: &FiniteSpace, d: usize) -> Result<FiniteSpace> {
    if d < 1 {
        return Err(Error::ExtensionRankZero);
    }
    let r = base.rank();
    if r + d > 64 {
        return Err(Error::SizeCapExceeded { what: "group extension exceeds rank 64".into() });
    }
    if d >= 8 || base.num_points() << d > crate::space::MAX_POINTS {
        return Err(Error::SizeCapExceeded { what: "group extension exceeds the point cap".into() });
    }
    let mut names = base.generator_names().to_vec();
    let mut counter = 0usize;
    for _ in 0..d {
        let mut name = format!("e{}", counter);
        while names.contains(&name) {
            counter += 1;
            name = format!("e{}", counter);
        }
        names.push(name);
        counter += 1;
    }
    let mut points = Vec::with_capacity(base.num_points() << d);
    for x in 0..base.num_points() {
        for pattern in 0..1u64 << d {
            let suffix: String =
                (0..d).map(|j| if pattern >> j & 1 == 1 { '-' } else { '+' }).collect();
            points.push((
                format!("{}.{}", base.label(x), suffix),
                base.row(x) | pattern << r,
            ));
        }
    }
    FiniteSpace::new(names, base.minus_one().bits(), points)
}

/// The fan on a rank-`r` group: all `2^(r-1)` characters sending -1 to -1.
pub fn make_fan(r: usize) -> Result<FiniteSpace> {
    if r < 1 {
        return Err(Error::FanRankZero);
    }
    if r > 8 {
        return Err(Error::SizeCapExceeded {
            what: format!("fan of rank {} exceeds the point cap", r),
        });
    }
    let mut names = vec!["m".to_string()];
    for i in 1..r {
        names.push(format!("g{}", i));
    }
    let points = (0..1u64 << (r - 1))
        .map(|t| (format!("p{}", t), 0b1 | t << 1))
        .collect();
    FiniteSpace::new(names, 0b1, points)
}

/// All 4-element subsets whose pointwise character product is trivial,
/// whose restricted group has order 8, and which are generated subspaces.
/// Returned as ascending index quadruples in lexicographic order.
pub fn four_fans(space: &FiniteSpace) -> Result<Vec<[usize; 4]>> {
    let n = space.num_points();
    let by_row: HashMap<u64, usize> = (0..n).map(|x| (space.row(x), x)).collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let need = space.row(i) ^ space.row(j) ^ space.row(k);
                let Some(&l) = by_row.get(&need) else { continue };
                if l <= k {
                    continue;
                }
                let quad = [i, j, k, l];
                if gf2::rank(quad.iter().map(|&x| space.row(x) as u128)) != 3 {
                    continue;
                }
                let sub = subspace_generated(space, &quad)?;
                if sub.point_indices == quad {
                    out.push(quad);
                }
            }
        }
    }
    Ok(out)
}

/// Connected components: the transitive closure of co-membership in a
/// four-element fan. Classes are listed by their smallest point index.
pub fn components(space: &FiniteSpace) -> Result<Vec<Vec<usize>>> {
    let n = space.num_points();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let up = parent[x];
            let root = find(parent, up);
            parent[x] = root;
        }
        parent[x]
    }
    for quad in four_fans(space)? {
        let root = find(&mut parent, quad[0]);
        for &x in &quad[1..] {
            let r = find(&mut parent, x);
            parent[r] = root;
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut index_of_root: HashMap<usize, usize> = HashMap::new();
    for x in 0..n {
        let r = find(&mut parent, x);
        match index_of_root.get(&r) {
            Some(&i) => classes[i].push(x),
            None => {
                index_of_root.insert(r, classes.len());
                classes.push(vec![x]);
            }
        }
    }
    Ok(classes)
}

/// The stability index: the largest `s` such that some `2^s`-element
/// subset is closed under pointwise triple products, has restricted group
/// of order `2^(s+1)`, and is a generated subspace. Singletons give 0.
pub fn stability_index(space: &FiniteSpace) -> Result<u32> {
    stability_index_capped(space, DEFAULT_STABILITY_MAX_POINTS)
}

pub fn stability_index_capped(space: &FiniteSpace, max_points: usize) -> Result<u32> {
    let n = space.num_points();
    if n > max_points {
        return Err(Error::SizeCapExceeded {
            what: format!("stability search over {} points (cap {})", n, max_points),
        });
    }
    let rows: Vec<u64> = (0..n).map(|x| space.row(x)).collect();
    let row_set: HashSet<u64> = rows.iter().copied().collect();
    let mut best = 0u32;
    for x0 in 0..n {
        // directions to the other points; a fan through x0 is x0 translated
        // by a direction subspace fully contained in this set
        let dirs: Vec<u64> = (0..n).filter(|&x| x != x0).map(|x| rows[x] ^ rows[x0]).collect();
        let dir_set: HashSet<u64> = dirs.iter().copied().collect();
        let mut span: Vec<u64> = vec![0];
        extend_fan_span(&rows, &row_set, &dir_set, &dirs, x0, &mut span, 0, &mut best);
    }
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn extend_fan_span(
    rows: &[u64],
    row_set: &HashSet<u64>,
    dir_set: &HashSet<u64>,
    dirs: &[u64],
    x0: usize,
    span: &mut Vec<u64>,
    from: usize,
    best: &mut u32,
) {
    let s = span.len().trailing_zeros();
    if s > *best {
        // candidate fan: x0 translated by the span; check it is a subspace
        let fan_rows: BTreeSet<u64> = span.iter().map(|d| d ^ rows[x0]).collect();
        if fan_rows.iter().all(|r| row_set.contains(r)) {
            let elim = Eliminator::from_columns(
                &fan_rows.iter().map(|&r| r as u128).collect::<Vec<_>>(),
            );
            let members = rows.iter().filter(|&&r| elim.solve(r as u128).is_some()).count();
            if members == fan_rows.len() {
                *best = s;
            }
        }
    }
    for (i, &d) in dirs.iter().enumerate().skip(from) {
        if span.contains(&d) {
            continue;
        }
        // adding d doubles the span; every new element must be a direction
        if span.iter().all(|&e| dir_set.contains(&(e ^ d))) {
            let old_len = span.len();
            for t in 0..old_len {
                let v = span[t] ^ d;
                span.push(v);
            }
            extend_fan_span(rows, row_set, dir_set, dirs, x0, span, i + 1, best);
            span.truncate(old_len);
        }
    }
}

/// How a finite space is assembled from one-point spaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DecompositionTree {
    Leaf { label: String },
    Sum { children: Vec<DecompositionTree> },
    Ext { rank: usize, child: Box<DecompositionTree> },
}

impl DecompositionTree {
    pub fn num_points(&self) -> usize {
        match self {
            DecompositionTree::Leaf { .. } => 1,
            DecompositionTree::Sum { children } => children.iter().map(|c| c.num_points()).sum(),
            DecompositionTree::Ext { rank, child } => child.num_points() << rank,
        }
    }
}

/// Nonzero translations `t` with `V + t = V` on the rows of the space;
/// together with 0 they form the translation group of the point set.
fn translations(space: &FiniteSpace) -> Vec<u64> {
    let rows: HashSet<u64> = (0..space.num_points()).map(|x| space.row(x)).collect();
    let r0 = space.row(0);
    let mut out = Vec::new();
    for x in 1..space.num_points() {
        let d = space.row(x) ^ r0;
        if rows.iter().all(|&r| rows.contains(&(r ^ d))) {
            out.push(d);
        }
    }
    out
}

/// Decompose a finite space of orderings into a tree of sums and
/// extensions of one-point spaces, verifying the split at every step.
/// Errors on structures that are not spaces of orderings.
pub fn decompose(space: &FiniteSpace) -> Result<DecompositionTree> {
    let n = space.num_points();
    if n == 1 {
        return Ok(DecompositionTree::Leaf { label: space.label(0).to_string() });
    }
    if n == 2 {
        // the two-point space; reported canonically as an extension
        return Ok(DecompositionTree::Ext {
            rank: 1,
            child: Box::new(DecompositionTree::Leaf { label: space.label(0).to_string() }),
        });
    }
    let comps = components(space)?;
    if comps.len() > 1 {
        let mut children = Vec::with_capacity(comps.len());
        let mut rank_sum = 0usize;
        for comp in &comps {
            let sub = subspace_generated(space, comp)?;
            if sub.point_indices != *comp {
                return Err(Error::Undecomposable(format!(
                    "component {:?} is not a generated subspace",
                    comp.iter().map(|&x| space.label(x)).collect::<Vec<_>>()
                )));
            }
            rank_sum += sub.space.rank();
            children.push(decompose(&sub.space)?);
        }
        if rank_sum != space.rank() {
            return Err(Error::Undecomposable(format!(
                "component group ranks sum to {}, expected {}",
                rank_sum,
                space.rank()
            )));
        }
        return Ok(DecompositionTree::Sum { children });
    }
    // connected with at least three points: must be a proper extension
    let trans = translations(space);
    let d = {
        let mut e = Eliminator::new();
        for &t in &trans {
            e.insert(t as u128);
        }
        e.rank()
    };
    if d == 0 {
        return Err(Error::Undecomposable(format!(
            "connected structure of {} points admits no translation subgroup",
            n
        )));
    }
    if trans.len() + 1 != 1 << d {
        return Err(Error::Undecomposable("translations do not form a group".into()));
    }
    // base = restriction to the annihilator of the translation group
    let ann = kernel_basis(&trans, space.rank());
    debug_assert_eq!(ann.len(), space.rank() - d);
    let q = quotient_structure(
        space,
        &ann.iter().map(|&u| GroupElement::from_bits(u)).collect::<Vec<_>>(),
    )?;
    if q.space.num_points() << d != n {
        return Err(Error::Undecomposable("translation orbits are not uniform".into()));
    }
    Ok(DecompositionTree::Ext { rank: d, child: Box::new(decompose(&q.space)?) })
}

/// Basis of `{u : <u, g> = 0 for all g in gens}` inside F2^rank.
fn kernel_basis(gens: &[u64], rank: usize) -> Vec<u64> {
    let mut pivots: Vec<(u64, usize)> = Vec::new(); // (reduced row, pivot bit)
    for &g in gens {
        let mut v = g;
        for &(row, p) in &pivots {
            if v >> p & 1 == 1 {
                v ^= row;
            }
        }
        if v != 0 {
            let p = 63 - v.leading_zeros() as usize;
            pivots.push((v, p));
        }
    }
    let pivot_mask: u64 = pivots.iter().map(|&(_, p)| 1u64 << p).fold(0, |a, b| a | b);
    let mut out = Vec::new();
    for i in 0..rank {
        if pivot_mask >> i & 1 == 1 {
            continue;
        }
        // free coordinate i: back-substitute the pivot coordinates
        let mut u = 1u64 << i;
        loop {
            let mut changed = false;
            for &(row, p) in &pivots {
                if (u & row).count_ones() % 2 == 1 {
                    u ^= 1u64 << p;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        debug_assert!(gens.iter().all(|&g| (u & g).count_ones() % 2 == 0));
        out.push(u);
    }
    out
}

/// Rebuild a space from a decomposition tree.
pub fn rebuild(tree: &DecompositionTree) -> Result<FiniteSpace> {
    match tree {
        DecompositionTree::Leaf { label } => Ok(one_point_space(label)),
        DecompositionTree::Sum { children } => {
            let spaces: Vec<FiniteSpace> = children.iter().map(rebuild).collect::<Result<_>>()?;
            direct_sum(&spaces)
        }
        DecompositionTree::Ext { rank, child } => group_extension(&rebuild(child)?, *rank),
    }
}

/// Sound and complete recognition of finite spaces of orderings via
/// verified decomposition.
pub fn certify_space(space: &FiniteSpace) -> std::result::Result<(), String> {
    match decompose(space) {
        Ok(_) => Ok(()),
        Err(Error::Undecomposable(reason)) => Err(reason),
        Err(other) => Err(other.to_string()),
    }
}

/// Full verification: the exhaustive associativity scan when the rank is
/// within the scan cap, always combined with the decomposition certificate.
pub fn verify_space(space: &FiniteSpace) -> AxiomVerdict {
    let mut triples = 0u64;
    let mut method = VerifyMethod::StructuralCertificate;
    if space.rank() <= AXIOM_SCAN_MAX_RANK {
        match verify_axioms(space) {
            Ok(AxiomVerdict::Pass { triples_checked, .. }) => {
                triples = triples_checked;
                method = VerifyMethod::Exhaustive;
            }
            Ok(fail @ AxiomVerdict::Fail(_)) => return fail,
            Err(e) => return AxiomVerdict::Fail(AxiomFailure::Structural(e.to_string())),
        }
    }
    match certify_space(space) {
        Ok(()) => AxiomVerdict::Pass { method, triples_checked: triples },
        Err(reason) => AxiomVerdict::Fail(AxiomFailure::Undecomposable(reason)),
    }
}

/// Verify an untrusted candidate: structural invariants first (with a
/// witness in the message), then the axioms.
pub fn verify_candidate(raw: &RawSpace) -> AxiomVerdict {
    match raw.to_space() {
        Ok(space) => verify_space(&space),
        Err(e) => AxiomVerdict::Fail(AxiomFailure::Structural(e.to_string())),
    }
}

/// A witnessed isomorphism: a bijection of points and the compatible group
/// isomorphism, given by the pullback of each generator of `b` to `a`.
#[derive(Debug, Clone)]
pub struct Isomorphism {
    /// Point `x` of `a` maps to point `point_map[x]` of `b`.
    pub point_map: Vec<usize>,
    /// Generator `j` of `b` pulls back to this element of `a`'s group.
    pub generator_pullback: Vec<GroupElement>,
}

/// Decide whether two spaces are isomorphic; on success return a witness.
pub fn is_isomorphic(a: &FiniteSpace, b: &FiniteSpace) -> Result<Option<Isomorphism>> {
    if a.rank() != b.rank() || a.num_points() != b.num_points() {
        return Ok(None);
    }
    let n = a.num_points();
    let prof_a: Vec<u64> = (0..n).map(|x| point_profile(a, x)).collect();
    let prof_b: Vec<u64> = (0..n).map(|x| point_profile(b, x)).collect();
    {
        let mut sa = prof_a.clone();
        let mut sb = prof_b.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return Ok(None);
        }
    }
    // spanning points of a, assigned one by one
    let pivot_points = {
        let mut e = Eliminator::new();
        let mut ps = Vec::new();
        for x in 0..n {
            if e.insert(a.row(x) as u128) {
                ps.push(x);
            }
        }
        ps
    };
    // every row of a expressed over the pivot rows
    let pivot_elim = Eliminator::from_columns(
        &pivot_points.iter().map(|&x| a.row(x) as u128).collect::<Vec<_>>(),
    );
    let combos: Vec<u64> = (0..n)
        .map(|x| pivot_elim.solve(a.row(x) as u128).expect("rows span"))
        .collect();
    let row_to_b: HashMap<u64, usize> = (0..n).map(|x| (b.row(x), x)).collect();
    let mut images: Vec<usize> = Vec::new();
    let mut budget = ISO_NODE_BUDGET;
    if !assign(b, &pivot_points, &combos, &prof_a, &prof_b, &row_to_b, &mut images, &mut budget)? {
        return Ok(None);
    }
    // reconstruct the full point map from the assigned spanning images
    let mut point_map = vec![usize::MAX; n];
    for x in 0..n {
        let mut row_b = 0u64;
        for (t, &img) in images.iter().enumerate() {
            if combos[x] >> t & 1 == 1 {
                row_b ^= b.row(img);
            }
        }
        point_map[x] = *row_to_b.get(&row_b).expect("checked during search");
    }
    // pull back each generator of b through the point bijection
    let cols_a: Vec<u128> = (0..a.rank()).map(|i| a.column(i)).collect();
    let elim_a = Eliminator::from_columns(&cols_a);
    let mut generator_pullback = Vec::with_capacity(b.rank());
    for j in 0..b.rank() {
        let mut target = 0u128;
        for (x, &y) in point_map.iter().enumerate() {
            if b.column(j) >> y & 1 == 1 {
                target |= 1u128 << x;
            }
        }
        let bits = elim_a
            .solve(target)
            .ok_or_else(|| Error::Internal("pullback outside the group".into()))?;
        generator_pullback.push(GroupElement::from_bits(bits));
    }
    Ok(Some(Isomorphism { point_map, generator_pullback }))
}

/// Isomorphism-invariant profile of a point: the number of ordered pairs
/// `(y, z)` whose triple product with `x` lands back in the point set.
fn point_profile(space: &FiniteSpace, x: usize) -> u64 {
    let rows: HashSet<u64> = (0..space.num_points()).map(|p| space.row(p)).collect();
    let mut count = 0u64;
    for y in 0..space.num_points() {
        for z in 0..space.num_points() {
            if rows.contains(&(space.row(x) ^ space.row(y) ^ space.row(z))) {
                count += 1;
            }
        }
    }
    count
}

#[allow(clippy::too_many_arguments)]
fn assign(
    b: &FiniteSpace,
    pivot_points: &[usize],
    combos: &[u64],
    prof_a: &[u64],
    prof_b: &[u64],
    row_to_b: &HashMap<u64, usize>,
    images: &mut Vec<usize>,
    budget: &mut u64,
) -> Result<bool> {
    if images.len() == pivot_points.len() {
        return Ok(true);
    }
    let x = pivot_points[images.len()];
    'candidates: for y in 0..b.num_points() {
        if *budget == 0 {
            return Err(Error::SizeCapExceeded { what: "isomorphism search budget".into() });
        }
        *budget -= 1;
        if images.contains(&y) || prof_a[x] != prof_b[y] {
            continue;
        }
        images.push(y);
        // consistency: every a-row in the span of the assigned pivots must
        // map to an existing b-row with a matching profile
        let assigned_mask: u64 = (1 << images.len()) - 1;
        for (z, &combo) in combos.iter().enumerate() {
            if combo & !assigned_mask != 0 {
                continue;
            }
            let mut row_b = 0u64;
            for (s, &img) in images.iter().enumerate() {
                if combo >> s & 1 == 1 {
                    row_b ^= b.row(img);
                }
            }
            match row_to_b.get(&row_b) {
                Some(&zb) if prof_a[z] == prof_b[zb] => {}
                _ => {
                    images.pop();
                    continue 'candidates;
                }
            }
        }
        if assign(b, pivot_points, combos, prof_a, prof_b, row_to_b, images, budget)? {
            return Ok(true);
        }
        images.pop();
    }
    Ok(false)
}

/// DOT rendering of the fan graph: nodes are points, edges join points
/// sharing a four-element fan.
pub fn fan_graph_dot(space: &FiniteSpace) -> Result<String> {
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for quad in four_fans(space)? {
        for i in 0..4 {
            for j in i + 1..4 {
                edges.insert((quad[i], quad[j]));
            }
        }
    }
    let mut out = String::from("graph fans {\n");
    for x in 0..space.num_points() {
        out.push_str(&format!("  \"{}\";\n", space.label(x)));
    }
    for (i, j) in edges {
        out.push_str(&format!("  \"{}\" -- \"{}\";\n", space.label(i), space.label(j)));
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_of_two_singletons() {
        let s = direct_sum(&[one_point_space("x"), one_point_space("y")]).unwrap();
        assert_eq!(s.num_points(), 2);
        assert_eq!(s.group_order(), 4);
        assert!(verify_space(&s).passed());
    }

    #[test]
    fn sum_of_one_space_is_a_copy() {
        let f = make_fan(3).unwrap();
        let s = direct_sum(std::slice::from_ref(&f)).unwrap();
        assert!(is_isomorphic(&f, &s).unwrap().is_some());
    }

    #[test]
    fn sum_of_singleton_and_fan() {
        let s = direct_sum(&[one_point_space("x"), make_fan(3).unwrap()]).unwrap();
        assert_eq!(s.num_points(), 5);
        assert_eq!(s.group_order(), 16);
        assert!(verify_space(&s).passed());
    }

    #[test]
    fn extension_of_singleton_by_one_is_two_point_space() {
        let s = group_extension(&one_point_space("x"), 1).unwrap();
        assert_eq!(s.num_points(), 2);
        assert_eq!(s.group_order(), 4);
        assert!(verify_space(&s).passed());
    }

    #[test]
    fn extension_of_singleton_by_two_is_four_fan() {
        let s = group_extension(&one_point_space("x"), 2).unwrap();
        assert_eq!(s.num_points(), 4);
        assert_eq!(s.group_order(), 8);
        assert!(is_isomorphic(&s, &make_fan(3).unwrap()).unwrap().is_some());
    }

    #[test]
    fn extension_of_two_point_space() {
        let base = direct_sum(&[one_point_space("x"), one_point_space("y")]).unwrap();
        let s = group_extension(&base, 1).unwrap();
        assert_eq!(s.num_points(), 4);
        assert_eq!(s.group_order(), 8);
        assert!(verify_space(&s).passed());
    }

    #[test]
    fn extension_rejects_rank_zero() {
        assert!(matches!(
            group_extension(&one_point_space("x"), 0),
            Err(Error::ExtensionRankZero)
        ));
    }

    #[test]
    fn fans_have_the_right_sizes() {
        assert_eq!(make_fan(1).unwrap().num_points(), 1);
        assert_eq!(make_fan(3).unwrap().num_points(), 4);
        let f4 = make_fan(4).unwrap();
        assert_eq!(f4.num_points(), 8);
        assert_eq!(stability_index(&f4).unwrap(), 3);
        assert!(matches!(make_fan(0), Err(Error::FanRankZero)));
    }

    #[test]
    fn four_fans_in_a_fan() {
        let f = make_fan(3).unwrap();
        let quads = four_fans(&f).unwrap();
        assert_eq!(quads, vec![[0, 1, 2, 3]]);
    }

    #[test]
    fn four_fans_absent_in_discrete_sums() {
        let s = direct_sum(&[
            one_point_space("a"),
            one_point_space("b"),
            one_point_space("c"),
            one_point_space("d"),
        ])
        .unwrap();
        assert!(four_fans(&s).unwrap().is_empty());
        assert_eq!(components(&s).unwrap().len(), 4);
    }

    #[test]
    fn components_of_a_fan() {
        assert_eq!(components(&make_fan(3).unwrap()).unwrap(), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn stability_of_small_spaces() {
        assert_eq!(stability_index(&one_point_space("x")).unwrap(), 0);
        assert_eq!(stability_index(&make_fan(3).unwrap()).unwrap(), 2);
        for r in 1..=5usize {
            assert_eq!(stability_index(&make_fan(r).unwrap()).unwrap(), r as u32 - 1);
        }
        let two = direct_sum(&[one_point_space("x"), one_point_space("y")]).unwrap();
        assert_eq!(stability_index(&two).unwrap(), 1);
    }

    #[test]
    fn decompose_fan_as_extension() {
        let tree = decompose(&make_fan(3).unwrap()).unwrap();
        assert_eq!(
            tree,
            DecompositionTree::Ext {
                rank: 2,
                child: Box::new(DecompositionTree::Leaf { label: "p0".into() })
            }
        );
    }

    #[test]
    fn decompose_three_singletons() {
        let s = direct_sum(&[one_point_space("a"), one_point_space("b"), one_point_space("c")])
            .unwrap();
        match decompose(&s).unwrap() {
            DecompositionTree::Sum { children } => {
                assert_eq!(children.len(), 3);
                assert!(children.iter().all(|c| matches!(c, DecompositionTree::Leaf { .. })));
            }
            other => panic!("expected a sum, got {:?}", other),
        }
    }

    #[test]
    fn two_point_space_decomposes_as_extension() {
        let two = direct_sum(&[one_point_space("x"), one_point_space("y")]).unwrap();
        assert!(matches!(decompose(&two).unwrap(), DecompositionTree::Ext { rank: 1, .. }));
    }

    #[test]
    fn rebuild_inverts_decompose_up_to_isomorphism() {
        let spaces = [
            make_fan(4).unwrap(),
            direct_sum(&[make_fan(3).unwrap(), one_point_space("z")]).unwrap(),
            group_extension(
                &direct_sum(&[one_point_space("a"), one_point_space("b"), one_point_space("c")])
                    .unwrap(),
                1,
            )
            .unwrap(),
        ];
        for s in &spaces {
            let tree = decompose(s).unwrap();
            let back = rebuild(&tree).unwrap();
            assert!(is_isomorphic(s, &back).unwrap().is_some(), "tree {:?}", tree);
        }
    }

    #[test]
    fn certificate_rejects_the_seven_point_structure() {
        let s = crate::space::tests::seven_point_broken_fan();
        assert!(certify_space(&s).is_err());
        assert!(matches!(verify_space(&s), AxiomVerdict::Fail(AxiomFailure::Undecomposable(_))));
    }

    #[test]
    fn isomorphism_spots_equal_and_unequal_spaces() {
        let f = make_fan(3).unwrap();
        let iso = is_isomorphic(&f, &f).unwrap().unwrap();
        assert_eq!(iso.point_map, vec![0, 1, 2, 3]);
        // two-point space: sum form vs extension form
        let sum2 = direct_sum(&[one_point_space("x"), one_point_space("y")]).unwrap();
        let ext2 = group_extension(&one_point_space("x"), 1).unwrap();
        assert!(is_isomorphic(&sum2, &ext2).unwrap().is_some());
        // fan vs four singletons: ranks differ
        let four = direct_sum(&[
            one_point_space("a"),
            one_point_space("b"),
            one_point_space("c"),
            one_point_space("d"),
        ])
        .unwrap();
        assert!(is_isomorphic(&f, &four).unwrap().is_none());
    }

    /// Same point count and group order, different structure: two fans
    /// against an extension of three singletons plus a two-point space.
    #[test]
    fn isomorphism_rejects_equal_signature_different_structure() {
        let a = direct_sum(&[make_fan(3).unwrap(), make_fan(3).unwrap()]).unwrap();
        let b = direct_sum(&[
            group_extension(
                &direct_sum(&[one_point_space("x"), one_point_space("y"), one_point_space("z")])
                    .unwrap(),
                1,
            )
            .unwrap(),
            group_extension(&one_point_space("w"), 1).unwrap(),
        ])
        .unwrap();
        assert_eq!(a.num_points(), b.num_points());
        assert_eq!(a.group_order(), b.group_order());
        assert!(verify_space(&a).passed() && verify_space(&b).passed());
        assert!(is_isomorphic(&a, &b).unwrap().is_none());
    }

    #[test]
    fn isomorphism_witness_is_consistent() {
        let a = direct_sum(&[make_fan(3).unwrap(), one_point_space("z")]).unwrap();
        let tree = decompose(&a).unwrap();
        let b = rebuild(&tree).unwrap();
        let iso = is_isomorphic(&a, &b).unwrap().unwrap();
        for (j, pull) in iso.generator_pullback.iter().enumerate() {
            for x in 0..a.num_points() {
                assert_eq!(
                    a.evaluate(*pull, x).unwrap(),
                    b.evaluate(GroupElement::from_bits(1 << j), iso.point_map[x]).unwrap()
                );
            }
        }
    }

    #[test]
    fn dot_export_mentions_every_point() {
        let dot = fan_graph_dot(&make_fan(3).unwrap()).unwrap();
        assert!(dot.starts_with("graph fans {"));
        for t in 0..4 {
            assert!(dot.contains(&format!("\"p{}\"", t)));
        }
        assert!(dot.contains("--"));
    }
}
