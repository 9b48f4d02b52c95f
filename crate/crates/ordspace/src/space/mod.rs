//! Finite spaces of orderings as exact sign matrices.
//!
//! A [`FiniteSpace`] is a basis of group generators, a distinguished element
//! `-1`, and a list of labeled points. Each point assigns a sign to every
//! basis generator; a [`GroupElement`] is a product of basis generators
//! encoded as a bit vector, and evaluation is the product of the signs of
//! the participating generators. The group is an F2 vector space and points
//! are characters on it.
//!
//! Structural invariants (enforced on construction):
//! - points are pairwise distinct as sign rows and carry unique labels;
//! - every point evaluates `-1` to `-1`, and `-1` is not the identity;
//! - distinct group elements induce distinct functions on the points
//!   (the point rows have full rank over F2).

mod json;

pub use json::{RawPoint, RawSpace};

use std::sync::OnceLock;

use crate::error::Error;
use crate::gf2::{self, Eliminator};
use crate::Result;

/// Hard cap on the number of basis generators (bit width of coordinates).
pub const MAX_RANK: usize = 64;
/// Hard cap on the number of points (bit width of sign vectors).
pub const MAX_POINTS: usize = 128;
/// Default cap on the rank for whole-group enumeration (2^rank elements).
pub const DEFAULT_GROUP_RANK_CAP: usize = 20;
/// Default cap on the rank for the exhaustive associativity scan
/// (2^(3 rank) triples, enumerated through the translation identity
/// `D(x a, x b) = x D(a, b)`).
pub const AXIOM_SCAN_MAX_RANK: usize = 10;

/// Rank cap for whole-group enumeration; `ORDSPACE_MAX_GROUP_RANK`
/// overrides the default.
pub fn group_rank_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("ORDSPACE_MAX_GROUP_RANK")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(DEFAULT_GROUP_RANK_CAP)
    })
}

/// An element of the group: a product of basis generators, one bit per
/// generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GroupElement {
    bits: u64,
}

impl GroupElement {
    pub fn from_bits(bits: u64) -> Self {
        GroupElement { bits }
    }

    pub fn identity() -> Self {
        GroupElement { bits: 0 }
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn is_identity(self) -> bool {
        self.bits == 0
    }

    /// Group product (the group has exponent 2).
    pub fn product(self, other: GroupElement) -> GroupElement {
        GroupElement { bits: self.bits ^ other.bits }
    }
}

/// A finite space of orderings presented by a sign matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    names: Vec<String>,
    minus_one: u64,
    labels: Vec<String>,
    /// Row of point x: bit i set iff generator i is negative at x.
    rows: Vec<u64>,
    /// Column of generator i: bit x set iff generator i is negative at x.
    columns: Vec<u128>,
}

impl FiniteSpace {
    /// Build and validate a space. `points` are `(label, negativity row)`.
    pub fn new(
        names: Vec<String>,
        minus_one: u64,
        points: Vec<(String, u64)>,
    ) -> Result<FiniteSpace> {
        let rank = names.len();
        if rank == 0 {
            return Err(Error::InvalidSpace("empty generator basis".into()));
        }
        if rank > MAX_RANK {
            return Err(Error::InvalidSpace(format!("rank {} exceeds the cap {}", rank, MAX_RANK)));
        }
        if points.is_empty() {
            return Err(Error::InvalidSpace("a space needs at least one point".into()));
        }
        if points.len() > MAX_POINTS {
            return Err(Error::InvalidSpace(format!(
                "{} points exceed the cap {}",
                points.len(),
                MAX_POINTS
            )));
        }
        let mask = bits_mask(rank);
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::InvalidSpace(format!("duplicate generator name `{}`", n)));
            }
        }
        if minus_one == 0 {
            return Err(Error::InvalidSpace("-1 must not be the identity element".into()));
        }
        if minus_one & !mask != 0 {
            return Err(Error::InvalidSpace("-1 has coordinates outside the basis".into()));
        }
        let mut labels = Vec::with_capacity(points.len());
        let mut rows = Vec::with_capacity(points.len());
        for (label, row) in points {
            if labels.contains(&label) {
                return Err(Error::InvalidSpace(format!("duplicate point label `{}`", label)));
            }
            if row & !mask != 0 {
                return Err(Error::InvalidSpace(format!(
                    "point `{}` has a sign row outside the basis",
                    label
                )));
            }
            if (row & minus_one).count_ones() % 2 != 1 {
                return Err(Error::InvalidSpace(format!(
                    "point `{}` evaluates -1 to +1",
                    label
                )));
            }
            labels.push(label);
            rows.push(row);
        }
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                if rows[i] == rows[j] {
                    return Err(Error::InvalidSpace(format!(
                        "points `{}` and `{}` have identical sign rows",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        if gf2::rank(rows.iter().map(|&r| r as u128)) != rank {
            let witness = null_element(&rows, rank)
                .map(|u| render_bits(&names, u))
                .unwrap_or_else(|| "?".into());
            return Err(Error::InvalidSpace(format!(
                "group does not act faithfully: element {} induces the constant +1 function \
                 (distinct group elements must induce distinct functions)",
                witness
            )));
        }
        let mut columns = vec![0u128; rank];
        for (x, &row) in rows.iter().enumerate() {
            for (i, col) in columns.iter_mut().enumerate() {
                if row >> i & 1 == 1 {
                    *col |= 1u128 << x;
                }
            }
        }
        Ok(FiniteSpace { names, minus_one, labels, rows, columns })
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn num_points(&self) -> usize {
        self.rows.len()
    }

    pub fn group_order(&self) -> u128 {
        1u128 << self.rank()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn point_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn minus_one(&self) -> GroupElement {
        GroupElement::from_bits(self.minus_one)
    }

    /// Negativity row of point `x` (bit i set iff generator i is negative).
    pub fn row(&self, x: usize) -> u64 {
        self.rows[x]
    }

    /// Negativity column of generator `i` over the points.
    pub fn column(&self, i: usize) -> u128 {
        self.columns[i]
    }

    pub fn check_element(&self, a: GroupElement) -> Result<()> {
        if a.bits & !bits_mask(self.rank()) != 0 {
            return Err(Error::CoordinateMismatch {
                rank: self.rank(),
                what: format!("element bits {:#x}", a.bits),
            });
        }
        Ok(())
    }

    /// Sign of `a` at point `x`: the product of the signs of the basis
    /// generators participating in `a`. The identity evaluates to +1.
    pub fn evaluate(&self, a: GroupElement, x: usize) -> Result<i32> {
        self.check_element(a)?;
        if x >= self.num_points() {
            return Err(Error::Internal(format!("point index {} out of range", x)));
        }
        Ok(self.eval_bits(a.bits, x))
    }

    #[inline]
    pub(crate) fn eval_bits(&self, bits: u64, x: usize) -> i32 {
        if (bits & self.rows[x]).count_ones() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Negativity mask of `a` over all points (bit x set iff `a(x) = -1`).
    pub fn sign_vector(&self, a: GroupElement) -> u128 {
        self.sign_vector_bits(a.bits)
    }

    #[inline]
    pub(crate) fn sign_vector_bits(&self, bits: u64) -> u128 {
        let mut acc = 0u128;
        let mut b = bits;
        while b != 0 {
            let i = b.trailing_zeros() as usize;
            acc ^= self.columns[i];
            b &= b - 1;
        }
        acc
    }

    /// The point whose generator signs match `row`, if any.
    pub fn point_with_row(&self, row: u64) -> Option<usize> {
        self.rows.iter().position(|&r| r == row)
    }

    /// Render an element as a product of generator names (identity = "1").
    pub fn render_element(&self, a: GroupElement) -> String {
        render_bits(&self.names, a.bits)
    }

    /// Parse an element rendered by [`render_element`].
    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        let t = text.trim();
        if t == "1" {
            return Ok(GroupElement::identity());
        }
        let mut bits = 0u64;
        for part in t.split('*') {
            let name = part.trim();
            let i = self
                .names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::Parse { pos: 0, msg: format!("unknown generator `{}`", name) })?;
            bits ^= 1 << i;
        }
        Ok(GroupElement::from_bits(bits))
    }

    /// All sign vectors indexed by element bits, for whole-group scans.
    pub(crate) fn all_sign_vectors(&self) -> Result<Vec<u128>> {
        let r = self.rank();
        let cap = group_rank_cap();
        if r > cap {
            return Err(Error::RankCapExceeded { rank: r, cap });
        }
        let n = 1usize << r;
        let mut svs = vec![0u128; n];
        for c in 1..n {
            let lsb = c.trailing_zeros() as usize;
            svs[c] = svs[c ^ (1 << lsb)] ^ self.columns[lsb];
        }
        Ok(svs)
    }
}

fn bits_mask(rank: usize) -> u64 {
    if rank >= 64 {
        u64::MAX
    } else {
        (1u64 << rank) - 1
    }
}

fn render_bits(names: &[String], bits: u64) -> String {
    if bits == 0 {
        return "1".into();
    }
    let mut parts = Vec::new();
    for (i, n) in names.iter().enumerate() {
        if bits >> i & 1 == 1 {
            parts.push(n.as_str());
        }
    }
    parts.join("*")
}

/// A nonzero element evaluating to +1 at every point, if one exists.
fn null_element(rows: &[u64], rank: usize) -> Option<u64> {
    // rows of the annihilator system: u with <u, row> = 0 for all rows
    let mut elim: Vec<(u64, u64)> = Vec::new(); // (reduced row over coords, pivot bit)
    for &row in rows {
        let mut v = row;
        for &(r, _) in &elim {
            let high = 63 - r.leading_zeros();
            if v >> high & 1 == 1 {
                v ^= r;
            }
        }
        if v != 0 {
            elim.push((v, 1u64 << (63 - v.leading_zeros())));
            elim.sort_by_key(|(r, _)| std::cmp::Reverse(*r));
        }
    }
    // free coordinate: one not used as a pivot
    let pivots: u64 = elim.iter().map(|&(_, p)| p).fold(0, |a, b| a | b);
    for i in 0..rank {
        if pivots >> i & 1 == 0 {
            // back-substitute to build a kernel vector with bit i set
            let mut u = 1u64 << i;
            for &(r, p) in elim.iter() {
                if (u & r).count_ones() % 2 == 1 {
                    u ^= p;
                }
            }
            // verify
            if rows.iter().all(|&row| (u & row).count_ones() % 2 == 0) && u != 0 {
                return Some(u);
            }
        }
    }
    None
}

/// The value set `D(a, b)`: all elements agreeing with `a` or `b` at every
/// point, computed by scanning the whole group.
pub fn value_set(space: &FiniteSpace, a: GroupElement, b: GroupElement) -> Result<Vec<GroupElement>> {
    space.check_element(a)?;
    space.check_element(b)?;
    let svs = space.all_sign_vectors()?;
    let sa = svs[a.bits as usize];
    let sb = svs[b.bits as usize];
    let mut out = Vec::new();
    for (c, &sc) in svs.iter().enumerate() {
        if (sc ^ sa) & (sc ^ sb) == 0 {
            out.push(GroupElement::from_bits(c as u64));
        }
    }
    Ok(out)
}

/// Membership test for `c` in `D(a, b)` by the defining pointwise formula.
pub fn in_value_set(space: &FiniteSpace, c: GroupElement, a: GroupElement, b: GroupElement) -> Result<bool> {
    space.check_element(a)?;
    space.check_element(b)?;
    space.check_element(c)?;
    let sa = space.sign_vector(a);
    let sb = space.sign_vector(b);
    let sc = space.sign_vector(c);
    Ok((sc ^ sa) & (sc ^ sb) == 0)
}

/// The Harrison set `H(a)`: indices of the points where `a` is positive.
pub fn harrison_set(space: &FiniteSpace, a: GroupElement) -> Result<Vec<usize>> {
    space.check_element(a)?;
    let sv = space.sign_vector(a);
    Ok((0..space.num_points()).filter(|&x| sv >> x & 1 == 0).collect())
}

/// The subspace generated by a set of points, together with the point
/// inclusion and the group restriction map.
#[derive(Debug, Clone)]
pub struct Subspace {
    pub space: FiniteSpace,
    /// Index in the parent space of each subspace point.
    pub point_indices: Vec<usize>,
    /// Parent generator index backing each subspace generator.
    pub basis_columns: Vec<usize>,
    elim: Eliminator,
}

impl Subspace {
    /// Restrict a parent group element to the subspace.
    pub fn restrict_element(&self, parent: &FiniteSpace, a: GroupElement) -> Result<GroupElement> {
        parent.check_element(a)?;
        let sv = parent.sign_vector(a);
        let mut target = 0u128;
        for (pos, &x) in self.point_indices.iter().enumerate() {
            if sv >> x & 1 == 1 {
                target |= 1u128 << pos;
            }
        }
        let bits = self
            .elim
            .solve(target)
            .ok_or_else(|| Error::Internal("restriction outside the subspace group".into()))?;
        Ok(GroupElement::from_bits(bits))
    }
}

/// Points `x` such that every group element positive on all of `seed` is
/// positive at `x`; equivalently, the points whose rows lie in the F2 span
/// of the seed rows.
pub fn subspace_generated(space: &FiniteSpace, seed: &[usize]) -> Result<Subspace> {
    if seed.is_empty() {
        return Err(Error::EmptySeed);
    }
    for &x in seed {
        if x >= space.num_points() {
            return Err(Error::Internal(format!("seed point {} out of range", x)));
        }
    }
    let mut span = Eliminator::new();
    for &x in seed {
        span.insert(space.row(x) as u128);
    }
    let point_indices: Vec<usize> = (0..space.num_points())
        .filter(|&x| span.solve(space.row(x) as u128).is_some())
        .collect();
    // columns of the parent generators restricted to the chosen points
    let restricted: Vec<u128> = (0..space.rank())
        .map(|i| {
            let col = space.column(i);
            let mut m = 0u128;
            for (pos, &x) in point_indices.iter().enumerate() {
                if col >> x & 1 == 1 {
                    m |= 1u128 << pos;
                }
            }
            m
        })
        .collect();
    let basis_columns = gf2::pivot_columns(&restricted);
    let pivot_cols: Vec<u128> = basis_columns.iter().map(|&i| restricted[i]).collect();
    let elim = Eliminator::from_columns(&pivot_cols);
    let minus_target: u128 = bitsn(point_indices.len());
    let minus_bits = elim
        .solve(minus_target)
        .ok_or_else(|| Error::Internal("-1 not expressible on the subspace".into()))?;
    let names: Vec<String> = basis_columns
        .iter()
        .map(|&i| space.generator_names()[i].clone())
        .collect();
    let points: Vec<(String, u64)> = point_indices
        .iter()
        .map(|&x| {
            let mut row = 0u64;
            for (j, &i) in basis_columns.iter().enumerate() {
                if space.row(x) >> i & 1 == 1 {
                    row |= 1 << j;
                }
            }
            (space.label(x).to_string(), row)
        })
        .collect();
    let sub = FiniteSpace::new(names, minus_bits, points)?;
    Ok(Subspace { space: sub, point_indices, basis_columns, elim })
}

fn bitsn(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// Restriction of all points to the span of the given subgroup elements.
#[derive(Debug, Clone)]
pub struct QuotientStructure {
    pub space: FiniteSpace,
    /// New point index for every parent point (the surjection).
    pub point_map: Vec<usize>,
    /// Parent elements chosen as the basis of the subgroup.
    pub basis: Vec<GroupElement>,
}

/// Restrict every point to the subgroup spanned by `subgroup`. The span
/// must contain `-1`. The result is a candidate structure: it satisfies the
/// structural invariants but may fail the value-set axioms.
pub fn quotient_structure(space: &FiniteSpace, subgroup: &[GroupElement]) -> Result<QuotientStructure> {
    let mut elim = Eliminator::new();
    let mut basis: Vec<GroupElement> = Vec::new();
    for &g in subgroup {
        space.check_element(g)?;
        if elim.insert(g.bits as u128) {
            basis.push(g);
        }
    }
    if elim.solve(space.minus_one().bits as u128).is_none() {
        return Err(Error::MinusOneNotInSpan);
    }
    let basis_elim = Eliminator::from_columns(
        &basis.iter().map(|g| g.bits as u128).collect::<Vec<_>>(),
    );
    let minus_bits = basis_elim.solve(space.minus_one().bits as u128).unwrap();
    let mut new_rows: Vec<u64> = Vec::new();
    let mut new_labels: Vec<String> = Vec::new();
    let mut point_map = Vec::with_capacity(space.num_points());
    for x in 0..space.num_points() {
        let mut row = 0u64;
        for (j, g) in basis.iter().enumerate() {
            if space.eval_bits(g.bits, x) < 0 {
                row |= 1 << j;
            }
        }
        match new_rows.iter().position(|&r| r == row) {
            Some(idx) => point_map.push(idx),
            None => {
                point_map.push(new_rows.len());
                new_rows.push(row);
                new_labels.push(space.label(x).to_string());
            }
        }
    }
    let names: Vec<String> = basis.iter().map(|&g| space.render_element(g)).collect();
    let points = new_labels.into_iter().zip(new_rows).collect();
    let space = FiniteSpace::new(names, minus_bits, points)?;
    Ok(QuotientStructure { space, point_map, basis })
}

/// How a verification verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMethod {
    /// Exhaustive scan of the value-set associativity law over all triples.
    Exhaustive,
    /// Decomposition into sums and extensions of one-point spaces.
    StructuralCertificate,
}

/// A counterexample to the value-set associativity law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomFailure {
    /// A structural invariant is violated (message carries the witness).
    Structural(String),
    /// The triple `(a, b, c)` and an element in the symmetric difference of
    /// the two sides of the associativity law.
    Associativity {
        a: GroupElement,
        b: GroupElement,
        c: GroupElement,
        element: GroupElement,
        /// True when the witness lies in the union over `D(a, b)` but not
        /// in the union over `D(b, c)`.
        missing_from_left: bool,
    },
    /// The structural certificate could not be built.
    Undecomposable(String),
}

/// Verdict of axiom verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomVerdict {
    Pass { method: VerifyMethod, triples_checked: u64 },
    Fail(AxiomFailure),
}

impl AxiomVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, AxiomVerdict::Pass { .. })
    }
}

/// Exhaustive verification of the value-set associativity law:
/// for all `a, b, c`, the union of `D(a, s)` over `s` in `D(b, c)` equals
/// the union of `D(t, c)` over `t` in `D(a, b)`. Errors above the rank cap.
///
/// Since `D(x a, x b) = x D(a, b)` holds pointwise, the law for the triple
/// `(a, b, c)` is equivalent to the law for `(1, a b, a c)`; the scan
/// therefore enumerates all triples with first argument 1 and thereby
/// covers all `|G|^3` triples, which is the count reported.
pub fn verify_axioms(space: &FiniteSpace) -> Result<AxiomVerdict> {
    verify_axioms_capped(space, AXIOM_SCAN_MAX_RANK)
}

pub fn verify_axioms_capped(space: &FiniteSpace, cap: usize) -> Result<AxiomVerdict> {
    let r = space.rank();
    if r > cap {
        return Err(Error::SizeCapExceeded {
            what: format!(
                "exhaustive associativity scan needs 2^{} triples (rank {} > cap {})",
                3 * r,
                r,
                cap
            ),
        });
    }
    let n = 1usize << r;
    // bypass the group enumeration cap: the scan cap is stricter
    let mut svs = vec![0u128; n];
    for c in 1..n {
        let lsb = c.trailing_zeros() as usize;
        svs[c] = svs[c ^ (1 << lsb)] ^ space.columns[lsb];
    }
    let wps = n.div_ceil(64);
    // table[g] = bitset of D(1, g) over element indices
    let mut table = vec![0u64; n * wps];
    for (g, &sg) in svs.iter().enumerate() {
        let base = g * wps;
        for (h, &sh) in svs.iter().enumerate() {
            if sh & (sh ^ sg) == 0 {
                table[base + h / 64] |= 1u64 << (h % 64);
            }
        }
    }
    let set = |g: usize| -> &[u64] { &table[g * wps..g * wps + wps] };
    let mut left = vec![0u64; wps];
    let mut right = vec![0u64; wps];
    for b in 0..n {
        let members_b: Vec<usize> = collect_bits(set(b));
        for c in 0..n {
            // left: union of D(1, s) over s in D(b, c) = b * D(1, b c)
            left.iter_mut().for_each(|w| *w = 0);
            for_each_bit(set(b ^ c), |s_shift| {
                let ds = set(b ^ s_shift);
                for w in 0..wps {
                    left[w] |= ds[w];
                }
            });
            // right: union of D(t, c) over t in D(1, b), pulled to c * (...)
            right.iter_mut().for_each(|w| *w = 0);
            for &t in &members_b {
                let dt = set(c ^ t);
                for w in 0..wps {
                    right[w] |= dt[w];
                }
            }
            xor_translate(&mut right, c);
            if left != right {
                for w in 0..wps {
                    let diff = left[w] ^ right[w];
                    if diff != 0 {
                        let e = w * 64 + diff.trailing_zeros() as usize;
                        let missing_from_left = right[w] >> (e % 64) & 1 == 1;
                        return Ok(AxiomVerdict::Fail(AxiomFailure::Associativity {
                            a: GroupElement::identity(),
                            b: GroupElement::from_bits(b as u64),
                            c: GroupElement::from_bits(c as u64),
                            element: GroupElement::from_bits(e as u64),
                            missing_from_left,
                        }));
                    }
                }
            }
        }
    }
    Ok(AxiomVerdict::Pass {
        method: VerifyMethod::Exhaustive,
        triples_checked: (n as u64) * (n as u64) * (n as u64),
    })
}

/// In-place relabeling of a bitset over element indices by `i -> i ^ t`.
fn xor_translate(words: &mut [u64], t: usize) {
    if t == 0 {
        return;
    }
    let intra = t % 64;
    for k in 0..6 {
        if intra >> k & 1 == 1 {
            let shift = 1u32 << k;
            let mask = intra_mask(k);
            for w in words.iter_mut() {
                *w = (*w & mask) << shift | (*w >> shift) & mask;
            }
        }
    }
    let inter = t / 64;
    if inter != 0 {
        for (i, j) in swap_pairs(words.len(), inter) {
            words.swap(i, j);
        }
    }
}

/// Mask of the low halves of 2^(k+1)-bit blocks inside a word.
fn intra_mask(k: usize) -> u64 {
    match k {
        0 => 0x5555_5555_5555_5555,
        1 => 0x3333_3333_3333_3333,
        2 => 0x0f0f_0f0f_0f0f_0f0f,
        3 => 0x00ff_00ff_00ff_00ff,
        4 => 0x0000_ffff_0000_ffff,
        _ => 0x0000_0000_ffff_ffff,
    }
}

fn swap_pairs(len: usize, inter: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(len / 2);
    for i in 0..len {
        let j = i ^ inter;
        if i < j && j < len {
            out.push((i, j));
        }
    }
    out
}

fn collect_bits(words: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for_each_bit(words, |i| out.push(i));
    out
}

fn for_each_bit(words: &[u64], mut f: impl FnMut(usize)) {
    for (w, &word) in words.iter().enumerate() {
        let mut m = word;
        while m != 0 {
            f(w * 64 + m.trailing_zeros() as usize);
            m &= m - 1;
        }
    }
}
