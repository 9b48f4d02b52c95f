//! Finite quotients of the space of orderings of Q(x).
//!
//! An ordering of Q(x) is described symbolically: the two orderings at
//! infinity, the two one-sided orderings at each real algebraic number
//! (given by a square-free polynomial and a root index), and the orderings
//! induced by evaluation at a transcendental, represented by a rational
//! window free of the roots that matter.
//!
//! [`construct_quotient`] builds, from a list of nonzero polynomials, a
//! finite space of orderings whose group contains the class of every
//! input:
//!
//! 1. refine the inputs into a coprime square-free basis and keep the
//!    factors with real roots;
//! 2. isolate all roots, sort them globally, and choose one rational
//!    separating line in each gap plus one beyond each extreme root, so
//!    consecutive roots share the line between them;
//! 3. per factor, take the direct sum of one-point spaces carrying the
//!    products of the two neighboring lines of each root, extended by the
//!    element `h`, the factor times the product of its right-hand lines,
//!    which is negative on exactly one side of each root;
//! 4. adjoin the two boundary one-point spaces for the orderings at
//!    infinity;
//! 5. verify the axioms of the result;
//! 6. express every input over the constructed basis by solving an F2
//!    linear system on exact sign data.
//!
//! Towers of such quotients with growing generator sets form inverse
//! systems; [`build_tower`] constructs them and [`verify_inverse_system`]
//! checks surjectivity, injectivity and the composition laws exactly.

mod json;

pub use json::{RawDownMap, RawQuotient, RawTower};

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::Error;
use crate::gf2::Eliminator;
use crate::ratpoly::{
    coprime_basis, count_roots_in, gcd, isolate_roots, parse_polynomial, parse_rational,
    refine_root, root_free_right_extension, sign_at_rational, squarefree_decomposition,
    squarefree_part, Interval, Polynomial, Rational,
};
use crate::space::{FiniteSpace, GroupElement};
use crate::structure::verify_space;
use crate::Result;

/// Which side of a root or of the line at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    fn suffix(self) -> char {
        match self {
            Side::Minus => '-',
            Side::Plus => '+',
        }
    }
}

/// Symbolic description of one ordering of Q(x).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderingSpec {
    /// One-sided neighborhood of the `root_index`-th real root (1-based,
    /// ascending) of a square-free polynomial.
    AlgebraicSide { poly: Polynomial, root_index: usize, side: Side },
    /// Behavior toward -infinity or +infinity.
    InfinitySide { side: Side },
    /// Evaluation at a transcendental inside a rational window containing
    /// no root of the polynomials being evaluated.
    TranscendentalCut { window: Interval },
}

impl fmt::Display for OrderingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderingSpec::AlgebraicSide { poly, root_index, side } => {
                write!(f, "root({},{},{})", poly, root_index, side.suffix())
            }
            OrderingSpec::InfinitySide { side } => write!(f, "inf{}", side.suffix()),
            OrderingSpec::TranscendentalCut { window } => {
                write!(f, "cut({},{})", window.lo, window.hi)
            }
        }
    }
}

/// Parse the text form: `inf+`, `inf-`, `root(<poly>,<index>,<+|->)`,
/// `cut(<lo>,<hi>)`.
pub fn parse_ordering_spec(text: &str) -> Result<OrderingSpec> {
    let t = text.trim();
    match t {
        "inf+" => return Ok(OrderingSpec::InfinitySide { side: Side::Plus }),
        "inf-" => return Ok(OrderingSpec::InfinitySide { side: Side::Minus }),
        _ => {}
    }
    let parse_err = |msg: &str| Error::Parse { pos: 0, msg: msg.to_string() };
    if let Some(args) = t.strip_prefix("root(").and_then(|s| s.strip_suffix(')')) {
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(parse_err("root(...) takes poly, index, side"));
        }
        let poly = parse_polynomial(parts[0])?;
        let root_index: usize =
            parts[1].parse().map_err(|_| parse_err("root index must be a positive integer"))?;
        if root_index == 0 {
            return Err(parse_err("root index is 1-based"));
        }
        let side = match parts[2] {
            "+" => Side::Plus,
            "-" => Side::Minus,
            _ => return Err(parse_err("side must be + or -")),
        };
        return Ok(OrderingSpec::AlgebraicSide { poly, root_index, side });
    }
    if let Some(args) = t.strip_prefix("cut(").and_then(|s| s.strip_suffix(')')) {
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(parse_err("cut(...) takes two rationals"));
        }
        let lo = parse_rational(parts[0])?;
        let hi = parse_rational(parts[1])?;
        if lo >= hi {
            return Err(parse_err("cut window must have lo < hi"));
        }
        return Ok(OrderingSpec::TranscendentalCut { window: Interval::new(lo, hi) });
    }
    Err(parse_err("expected inf+, inf-, root(...), or cut(...)"))
}

/// Exact sign of a nonzero polynomial under a symbolic ordering.
pub fn sign_at(q: &Polynomial, ord: &OrderingSpec) -> Result<i32> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    match ord {
        OrderingSpec::InfinitySide { side } => {
            let s = if num_traits::Signed::is_positive(&q.leading_coefficient()) { 1 } else { -1 };
            Ok(match side {
                Side::Plus => s,
                Side::Minus => {
                    if q.degree().unwrap_or(0) % 2 == 1 {
                        -s
                    } else {
                        s
                    }
                }
            })
        }
        OrderingSpec::TranscendentalCut { window } => {
            if window.lo >= window.hi {
                return Err(Error::Parse { pos: 0, msg: "cut window must have lo < hi".into() });
            }
            let mut sf = squarefree_part(q)?;
            // roots exactly at the endpoints are outside the open window
            while sign_at_rational(&sf, &window.lo) == 0 {
                sf = sf.try_exact_div(&Polynomial::line(&window.lo)).unwrap();
            }
            while !sf.is_constant() && sign_at_rational(&sf, &window.hi) == 0 {
                sf = sf.try_exact_div(&Polynomial::line(&window.hi)).unwrap();
            }
            if !sf.is_constant() && count_roots_in(&sf, window)? > 0 {
                return Err(Error::WindowTooCoarse {
                    lo: window.lo.to_string(),
                    hi: window.hi.to_string(),
                    poly: q.to_string(),
                });
            }
            Ok(sign_at_rational(q, &window.midpoint()))
        }
        OrderingSpec::AlgebraicSide { poly, root_index, side } => {
            if !gcd(poly, &poly.derivative()).is_constant() {
                return Err(Error::NotSquareFree(poly.to_string()));
            }
            let ivs = isolate_roots(poly)?;
            if *root_index == 0 || *root_index > ivs.len() {
                return Err(Error::NotEnoughRoots(poly.to_string(), *root_index));
            }
            let iv = &ivs[*root_index - 1];
            let (c, parts) = squarefree_decomposition(q)?;
            let mut sign = if num_traits::Signed::is_negative(&c) { -1 } else { 1 };
            for (f, e) in parts {
                // even powers are positive wherever nonzero, in particular
                // on the whole one-sided interval
                if e % 2 == 1 {
                    sign *= factor_sign_at_side(&f, poly, iv, *side)?;
                }
            }
            Ok(sign)
        }
    }
}

/// Sign of a square-free factor `f` just left or right of the root of `p`
/// isolated by `iv`.
fn factor_sign_at_side(f: &Polynomial, p: &Polynomial, iv: &Interval, side: Side) -> Result<i32> {
    if f.is_constant() {
        return Ok(sign_at_rational(f, &iv.lo));
    }
    let g = gcd(f, p);
    let shares = !g.is_constant() && count_roots_in(&g, iv)? > 0;
    if !shares {
        // constant sign on a refined closed interval around the root
        let refined = refine_root(p, iv, std::slice::from_ref(f))?;
        return Ok(sign_at_rational(f, &refined.lo));
    }
    // f vanishes at the root itself (a simple crossing, f is square-free);
    // exclude the other roots of f, then read the sign on the chosen side
    let cof = f.try_exact_div(&g).unwrap();
    let exclude: Vec<Polynomial> = if cof.is_constant() { Vec::new() } else { vec![cof] };
    let iv2 = refine_root(p, iv, &exclude)?;
    match side {
        Side::Minus => Ok(sign_at_rational(f, &iv2.lo)),
        Side::Plus => {
            let at_hi = sign_at_rational(f, &iv2.hi);
            if at_hi != 0 {
                Ok(at_hi)
            } else {
                // the root is exactly iv2.hi; step just past it
                let t = root_free_right_extension(std::slice::from_ref(f), &iv2.hi)?;
                Ok(sign_at_rational(f, &t))
            }
        }
    }
}

/// A finite quotient of the space of orderings of Q(x).
#[derive(Debug, Clone)]
pub struct QuotientResult {
    /// The verified finite space. Point labels: `inf-`, then `s<k>.<j>-`
    /// and `s<k>.<j>+` per factor k and root j (both 1-based), then `inf+`.
    /// Generators: `L-`, then `w<k>.<j>` and `h<k>` per factor, then `L+`.
    pub space: FiniteSpace,
    /// The separating rationals `xi_0 < ... < xi_N`.
    pub separators: Vec<Rational>,
    /// One polynomial representative per basis generator.
    pub generator_reps: Vec<Polynomial>,
    /// The coprime square-free factors with real roots, in basis order.
    pub factors: Vec<Polynomial>,
    /// Isolating intervals of each factor's roots, ascending, refined so
    /// that all root intervals are strictly separated globally.
    pub factor_roots: Vec<Vec<Interval>>,
    /// The original inputs.
    pub inputs: Vec<Polynomial>,
    /// Coordinates of each input's class over the generator basis.
    pub input_expressions: Vec<GroupElement>,
}

impl QuotientResult {
    /// Symbolic ordering that restricts onto the given point.
    pub fn preimage_spec(&self, point: usize) -> OrderingSpec {
        if point == 0 {
            return OrderingSpec::InfinitySide { side: Side::Minus };
        }
        let mut idx = 1;
        for (k, ivs) in self.factor_roots.iter().enumerate() {
            for j in 0..ivs.len() {
                for side in [Side::Minus, Side::Plus] {
                    if idx == point {
                        return OrderingSpec::AlgebraicSide {
                            poly: self.factors[k].clone(),
                            root_index: j + 1,
                            side,
                        };
                    }
                    idx += 1;
                }
            }
        }
        OrderingSpec::InfinitySide { side: Side::Plus }
    }

    /// Signs of `q` at every labeled ordering, as a negativity mask.
    pub fn sign_row(&self, q: &Polynomial) -> Result<u128> {
        let mut mask = 0u128;
        for x in 0..self.space.num_points() {
            if sign_at(q, &self.preimage_spec(x))? < 0 {
                mask |= 1u128 << x;
            }
        }
        Ok(mask)
    }
}

/// Build the finite quotient generated by the given polynomials.
pub fn construct_quotient(inputs: &[Polynomial]) -> Result<QuotientResult> {
    if inputs.is_empty() {
        return Err(Error::EmptyInput);
    }
    for p in inputs {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
    }
    let cb = coprime_basis(inputs)?;
    let mut factors = Vec::new();
    let mut factor_roots = Vec::new();
    for q in &cb.basis {
        let ivs = isolate_roots(q)?;
        if !ivs.is_empty() {
            factors.push(q.clone());
            factor_roots.push(ivs);
        }
    }
    if factors.is_empty() {
        return Err(Error::NoRealRoots);
    }
    separate_roots_globally(&factors, &mut factor_roots)?;

    // globally ordered root handles (factor index, root index)
    let mut order: Vec<(usize, usize)> = Vec::new();
    for (k, ivs) in factor_roots.iter().enumerate() {
        for j in 0..ivs.len() {
            order.push((k, j));
        }
    }
    order.sort_by(|&(ka, ja), &(kb, jb)| factor_roots[ka][ja].lo.cmp(&factor_roots[kb][jb].lo));
    let n_total = order.len();

    // separators: one unit beyond each extreme root, the simplest rational
    // in each gap between consecutive roots; consecutive roots share a line
    let first = &factor_roots[order[0].0][order[0].1];
    let last = &factor_roots[order[n_total - 1].0][order[n_total - 1].1];
    let mut separators = Vec::with_capacity(n_total + 1);
    separators.push(first.lo.ceil() - Rational::one());
    for t in 0..n_total - 1 {
        let gap_lo = &factor_roots[order[t].0][order[t].1].hi;
        let gap_hi = &factor_roots[order[t + 1].0][order[t + 1].1].lo;
        separators.push(crate::ratpoly::simplest_rational_between(gap_lo, gap_hi));
    }
    separators.push(last.hi.floor() + Rational::one());

    // neighboring separator indices of each root, in global order
    let mut left_sep = vec![vec![0usize; 0]; factors.len()];
    let mut right_sep = vec![vec![0usize; 0]; factors.len()];
    for (k, ivs) in factor_roots.iter().enumerate() {
        left_sep[k] = vec![0; ivs.len()];
        right_sep[k] = vec![0; ivs.len()];
    }
    for (pos, &(k, j)) in order.iter().enumerate() {
        left_sep[k][j] = pos;
        right_sep[k][j] = pos + 1;
    }

    // basis: L-, then per factor the window products and h, then L+
    let line = |t: usize| Polynomial::line(&separators[t]);
    let mut names: Vec<String> = vec!["L-".into()];
    let mut reps: Vec<Polynomial> = vec![line(0)];
    let mut w_index: Vec<Vec<usize>> = Vec::with_capacity(factors.len());
    let mut h_index: Vec<usize> = Vec::with_capacity(factors.len());
    for (k, ivs) in factor_roots.iter().enumerate() {
        let mut wk = Vec::with_capacity(ivs.len());
        for j in 0..ivs.len() {
            wk.push(reps.len());
            names.push(format!("w{}.{}", k + 1, j + 1));
            reps.push(line(left_sep[k][j]).mul(&line(right_sep[k][j])));
        }
        w_index.push(wk);
        h_index.push(reps.len());
        names.push(format!("h{}", k + 1));
        let mut h = factors[k].clone();
        for j in 0..ivs.len() {
            h = h.mul(&line(right_sep[k][j]));
        }
        validate_h(&h, &factors[k], &factor_roots[k], &separators, &right_sep[k])?;
        reps.push(h);
    }
    let l_plus_index = reps.len();
    names.push("L+".into());
    reps.push(line(n_total).neg());

    // minus one: L-, every window product, L+
    let mut minus = 1u64 | 1u64 << l_plus_index;
    for wk in &w_index {
        for &w in wk {
            minus |= 1u64 << w;
        }
    }

    // points and their sign rows
    let mut points: Vec<(String, u64)> = vec![("inf-".into(), 0b1)];
    for (k, ivs) in factor_roots.iter().enumerate() {
        for j in 0..ivs.len() {
            let w = 1u64 << w_index[k][j];
            let h = 1u64 << h_index[k];
            points.push((format!("s{}.{}-", k + 1, j + 1), w));
            // h is negative on the right side of each of its roots
            points.push((format!("s{}.{}+", k + 1, j + 1), w | h));
        }
    }
    points.push(("inf+".into(), 1u64 << l_plus_index));

    let space = FiniteSpace::new(names, minus, points)?;
    let expected = (
        2 + 2 * n_total,
        2 + n_total + factors.len(),
    );
    if space.num_points() != expected.0 || space.rank() != expected.1 {
        return Err(Error::Internal("quotient size bookkeeping failed".into()));
    }

    let result = QuotientResult {
        space,
        separators,
        generator_reps: reps,
        factors,
        factor_roots,
        inputs: inputs.to_vec(),
        input_expressions: Vec::new(),
    };

    // the analytic signs of every representative must reproduce the
    // abstract sign columns
    for (i, rep) in result.generator_reps.iter().enumerate() {
        if result.sign_row(rep)? != result.space.column(i) {
            return Err(Error::Internal(format!(
                "sign row of representative {} disagrees with the construction",
                rep
            )));
        }
    }

    if !verify_space(&result.space).passed() {
        return Err(Error::Internal("constructed quotient fails the space axioms".into()));
    }

    // express every input over the basis from its exact sign data
    let columns: Vec<u128> = (0..result.space.rank()).map(|i| result.space.column(i)).collect();
    let elim = Eliminator::from_columns(&columns);
    let mut expressions = Vec::with_capacity(inputs.len());
    for p in inputs {
        let row = result.sign_row(p)?;
        let bits = elim.solve(row).ok_or_else(|| {
            Error::Internal(format!("input {} is not expressible over the basis", p))
        })?;
        expressions.push(GroupElement::from_bits(bits));
    }
    Ok(QuotientResult { input_expressions: expressions, ..result })
}

/// Refine isolating intervals until any two root intervals (across all
/// factors) are strictly separated: earlier.hi < later.lo.
fn separate_roots_globally(factors: &[Polynomial], roots: &mut [Vec<Interval>]) -> Result<()> {
    loop {
        let mut touched = false;
        let mut handles: Vec<(usize, usize)> = Vec::new();
        for (k, ivs) in roots.iter().enumerate() {
            for j in 0..ivs.len() {
                handles.push((k, j));
            }
        }
        for a in 0..handles.len() {
            for b in a + 1..handles.len() {
                let (ka, ja) = handles[a];
                let (kb, jb) = handles[b];
                let (iva, ivb) = (&roots[ka][ja], &roots[kb][jb]);
                if iva.hi < ivb.lo || ivb.hi < iva.lo {
                    continue;
                }
                let na = bisect_once(&factors[ka], iva)?;
                let nb = bisect_once(&factors[kb], ivb)?;
                roots[ka][ja] = na;
                roots[kb][jb] = nb;
                touched = true;
            }
        }
        if !touched {
            return Ok(());
        }
    }
}

/// One bisection step of a root-isolating interval.
fn bisect_once(p: &Polynomial, iv: &Interval) -> Result<Interval> {
    let mid = iv.midpoint();
    if sign_at_rational(p, &mid) == 0 {
        let l = (&iv.lo + &mid) / Rational::from_integer(BigInt::from(2));
        return Ok(Interval::new(l, mid));
    }
    let left = Interval::new(iv.lo.clone(), mid.clone());
    if count_roots_in(p, &left)? == 1 {
        Ok(left)
    } else {
        Ok(Interval::new(mid, iv.hi.clone()))
    }
}

/// Check that `h` (the factor times its right-hand lines) has the expected
/// shape: square-free, even degree, positive leading coefficient, exactly
/// two sign changes per root, negative precisely on the right side of each
/// root of the factor.
fn validate_h(
    h: &Polynomial,
    factor: &Polynomial,
    ivs: &[Interval],
    separators: &[Rational],
    right_sep: &[usize],
) -> Result<()> {
    let fail = |msg: &str| Err(Error::Internal(format!("h for factor {}: {}", factor, msg)));
    if !gcd(h, &h.derivative()).is_constant() {
        return fail("not square-free");
    }
    if h.degree().unwrap_or(0) % 2 != 0 {
        return fail("odd degree");
    }
    if !num_traits::Signed::is_positive(&h.leading_coefficient()) {
        return fail("negative leading coefficient");
    }
    if crate::ratpoly::count_real_roots(h)? != 2 * ivs.len() {
        return fail("unexpected real root count");
    }
    for (j, iv) in ivs.iter().enumerate() {
        // left of the root: positive
        if sign_at_rational(h, &iv.lo) != 1 {
            return fail("not positive left of a root");
        }
        // right of the root, before the next line: negative
        let sample = if sign_at_rational(factor, &iv.hi) != 0 {
            iv.hi.clone()
        } else {
            (&iv.hi + &separators[right_sep[j]]) / Rational::from_integer(BigInt::from(2))
        };
        if sign_at_rational(h, &sample) != -1 {
            return fail("not negative right of a root");
        }
    }
    Ok(())
}

/// Find the quotient point matching a symbolic ordering by evaluating all
/// generator representatives.
pub fn restrict(ord: &OrderingSpec, q: &QuotientResult) -> Result<usize> {
    let mut row = 0u64;
    for (i, rep) in q.generator_reps.iter().enumerate() {
        if sign_at(rep, ord)? < 0 {
            row |= 1 << i;
        }
    }
    q.space.point_with_row(row).ok_or(Error::NoMatchingPoint)
}

/// One morphism of a tower: the point surjection onto the coarser level
/// and the injection of the coarser group into the finer one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DownMap {
    /// Point x of the finer level maps to `point_map[x]` of the coarser.
    pub point_map: Vec<usize>,
    /// Basis generator t of the coarser level maps to this element of the
    /// finer group.
    pub group_injection: Vec<GroupElement>,
}

/// A chain of quotients with strictly growing groups and verified
/// restriction morphisms between adjacent levels.
#[derive(Debug, Clone)]
pub struct Tower {
    pub levels: Vec<QuotientResult>,
    /// `maps[i]` is the morphism from level `i + 1` down to level `i`.
    pub maps: Vec<DownMap>,
}

/// Build a tower: level i is the quotient generated by the representatives
/// and inputs of level i-1 together with the new polynomials, so each
/// group embeds into the next.
pub fn build_tower(level_inputs: &[Vec<Polynomial>]) -> Result<Tower> {
    if level_inputs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut levels: Vec<QuotientResult> = Vec::with_capacity(level_inputs.len());
    let mut maps = Vec::new();
    for (i, extra) in level_inputs.iter().enumerate() {
        if i == 0 {
            levels.push(construct_quotient(extra)?);
            continue;
        }
        let prev = &levels[i - 1];
        let mut inputs: Vec<Polynomial> = Vec::new();
        for p in prev.generator_reps.iter().chain(prev.inputs.iter()).chain(extra.iter()) {
            if !inputs.contains(p) {
                inputs.push(p.clone());
            }
        }
        let fine = construct_quotient(&inputs)?;
        maps.push(down_map(&fine, prev)?);
        levels.push(fine);
    }
    Ok(Tower { levels, maps })
}

/// The restriction morphism from a finer quotient onto a coarser one whose
/// representatives were all passed through as inputs of the finer one.
fn down_map(fine: &QuotientResult, coarse: &QuotientResult) -> Result<DownMap> {
    let mut point_map = Vec::with_capacity(fine.space.num_points());
    for x in 0..fine.space.num_points() {
        point_map.push(restrict(&fine.preimage_spec(x), coarse)?);
    }
    let mut group_injection = Vec::with_capacity(coarse.space.rank());
    for rep in &coarse.generator_reps {
        let pos = fine
            .inputs
            .iter()
            .position(|p| p == rep)
            .ok_or_else(|| Error::Internal("coarse representative missing from finer inputs".into()))?;
        group_injection.push(fine.input_expressions[pos]);
    }
    Ok(DownMap { point_map, group_injection })
}

/// Outcome of verifying the inverse-system laws of a tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerReport {
    pub passed: bool,
    pub checks: u64,
    pub failure: Option<String>,
}

/// Check every inverse-system law on a tower: each adjacent down-map is
/// surjective and adjoint to an injective group map, and for every pair of
/// levels the directly computed morphism equals the composition of the
/// adjacent ones.
pub fn verify_inverse_system(t: &Tower) -> Result<TowerReport> {
    let mut checks = 0u64;
    let fail = |msg: String| Ok(TowerReport { passed: false, checks: 0, failure: Some(msg) });
    if t.maps.len() + 1 != t.levels.len() {
        return fail("map count does not match level count".into());
    }
    for (i, map) in t.maps.iter().enumerate() {
        let fine = &t.levels[i + 1];
        let coarse = &t.levels[i];
        if map.point_map.len() != fine.space.num_points() {
            return fail(format!("map {} has wrong point count", i));
        }
        // surjectivity
        let mut hit = vec![false; coarse.space.num_points()];
        for &y in &map.point_map {
            if y >= hit.len() {
                return fail(format!("map {} targets a missing point", i));
            }
            hit[y] = true;
        }
        checks += 1;
        if !hit.iter().all(|&h| h) {
            return fail(format!("down-map from level {} to {} is not surjective", i + 1, i));
        }
        // group injectivity
        let mut elim = Eliminator::new();
        for g in &map.group_injection {
            elim.insert(g.bits() as u128);
        }
        checks += 1;
        if elim.rank() != coarse.space.rank() {
            return fail(format!("group map into level {} is not injective", i + 1));
        }
        // adjointness: evaluating the injected element at a fine point
        // equals evaluating the generator at the mapped point
        for (tgen, g) in map.group_injection.iter().enumerate() {
            for x in 0..fine.space.num_points() {
                checks += 1;
                let lhs = fine.space.evaluate(*g, x)?;
                let rhs = coarse
                    .space
                    .evaluate(GroupElement::from_bits(1 << tgen), map.point_map[x])?;
                if lhs != rhs {
                    return fail(format!(
                        "map from level {} to {} is not a morphism at generator {} and point {}",
                        i + 1,
                        i,
                        coarse.space.generator_names()[tgen],
                        fine.space.label(x)
                    ));
                }
            }
        }
    }
    // composition laws, against directly recomputed morphisms
    for i in 0..t.levels.len() {
        for j in 0..i {
            let direct = down_map(&t.levels[i], &t.levels[j])?;
            let mut composed_points: Vec<usize> = (0..t.levels[i].space.num_points()).collect();
            for k in (j..i).rev() {
                composed_points = composed_points.iter().map(|&x| t.maps[k].point_map[x]).collect();
            }
            checks += 1;
            if composed_points != direct.point_map {
                return fail(format!(
                    "composite point map from level {} to {} differs from the direct restriction",
                    i, j
                ));
            }
            // composed group injection: push coarse generators up step by step
            let mut composed_group: Vec<GroupElement> = (0..t.levels[j].space.rank())
                .map(|tgen| GroupElement::from_bits(1 << tgen))
                .collect();
            for k in j..i {
                composed_group = composed_group
                    .iter()
                    .map(|g| {
                        let mut acc = GroupElement::identity();
                        for (b, inj) in t.maps[k].group_injection.iter().enumerate() {
                            if g.bits() >> b & 1 == 1 {
                                acc = acc.product(*inj);
                            }
                        }
                        acc
                    })
                    .collect();
            }
            checks += 1;
            if composed_group != direct.group_injection {
                return fail(format!(
                    "composite group map from level {} to {} differs from the direct one",
                    j, i
                ));
            }
        }
    }
    Ok(TowerReport { passed: true, checks, failure: None })
}
