//! Sturm sequences, real root isolation and interval refinement.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::factor::{gcd, squarefree_part};
use super::poly::{rational_sign, sign_at_rational, Polynomial, Rational};
use crate::error::Error;
use crate::Result;

/// A rational interval. When used as a root isolator for a polynomial `p`
/// the semantics are half-open: exactly one real root of `p` lies in
/// `(lo, hi]`, and `p(lo) != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}]", self.lo, self.hi)
    }
}

/// Sturm chain of `p`: canonical sequence with each member reduced to
/// primitive integer form by a positive constant (signs preserved).
pub(crate) struct SturmChain {
    seq: Vec<Polynomial>,
}

impl SturmChain {
    pub fn new(p: &Polynomial) -> Self {
        let mut seq = Vec::new();
        let p0 = p.primitive_keep_sign();
        if p0.is_zero() {
            return SturmChain { seq };
        }
        seq.push(p0);
        let p1 = p.derivative().primitive_keep_sign();
        if p1.is_zero() {
            return SturmChain { seq };
        }
        seq.push(p1);
        loop {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.neg().primitive_keep_sign());
        }
        SturmChain { seq }
    }

    fn variations(signs: impl Iterator<Item = i32>) -> usize {
        let mut count = 0;
        let mut last = 0;
        for s in signs {
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, t: &Rational) -> usize {
        Self::variations(self.seq.iter().map(|q| sign_at_rational(q, t)))
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        Self::variations(self.seq.iter().map(|q| {
            let s = rational_sign(&q.leading_coefficient());
            if q.degree().unwrap_or(0) % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        Self::variations(self.seq.iter().map(|q| rational_sign(&q.leading_coefficient())))
    }

    /// Number of distinct roots in `(lo, hi]`. Requires `p(lo) != 0`.
    pub fn count_halfopen(&self, lo: &Rational, hi: &Rational) -> usize {
        debug_assert!(lo <= hi);
        let a = self.variations_at(lo);
        let b = self.variations_at(hi);
        a.saturating_sub(b)
    }

    pub fn count_all(&self) -> usize {
        self.variations_at_neg_inf().saturating_sub(self.variations_at_pos_inf())
    }
}

/// An integer B such that every real root of `p` lies in `(-B, B)`.
fn cauchy_bound(p: &Polynomial) -> BigInt {
    let lead = p.leading_coefficient().abs();
    let mut max = Rational::zero();
    let n = p.degree().unwrap_or(0);
    for i in 0..n {
        let v = p.coeff(i).abs() / &lead;
        if v > max {
            max = v;
        }
    }
    let bound = Rational::one() + max;
    bound.ceil().to_integer() + BigInt::one()
}

/// Total number of distinct real roots of a square-free polynomial.
pub fn count_real_roots(p: &Polynomial) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(SturmChain::new(p).count_all())
}

/// Number of distinct real roots of `p` in the half-open interval
/// `(iv.lo, iv.hi]`. `p` need not be square-free; distinct roots of its
/// square-free part are counted. Requires `p(iv.lo) != 0`.
pub fn count_roots_in(p: &Polynomial, iv: &Interval) -> Result<usize> {
    let sf = squarefree_part(p)?;
    if sign_at_rational(&sf, &iv.lo) == 0 {
        return Err(Error::Internal(format!("left endpoint {} is a root of {}", iv.lo, p)));
    }
    Ok(SturmChain::new(&sf).count_halfopen(&iv.lo, &iv.hi))
}

/// Whether `p` (nonzero) has a real root in the closed interval `[lo, hi]`.
pub fn has_root_in_closed(p: &Polynomial, iv: &Interval) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if sign_at_rational(p, &iv.lo) == 0 || sign_at_rational(p, &iv.hi) == 0 {
        return Ok(true);
    }
    let sf = squarefree_part(p)?;
    Ok(SturmChain::new(&sf).count_halfopen(&iv.lo, &iv.hi) > 0)
}

/// Isolate the real roots of a square-free polynomial: one interval per
/// root, sorted ascending, pairwise disjoint, each holding exactly one root
/// in `(lo, hi]` with `p(lo) != 0`.
pub fn isolate_roots(p: &Polynomial) -> Result<Vec<Interval>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !gcd(p, &p.derivative()).is_constant() {
        return Err(Error::NotSquareFree(p.to_string()));
    }
    if p.is_constant() {
        return Ok(Vec::new());
    }
    let chain = SturmChain::new(p);
    let bound = cauchy_bound(p);
    let lo = Rational::from_integer(-bound.clone());
    let hi = Rational::from_integer(bound);
    let total = chain.count_halfopen(&lo, &hi);
    let mut out: Vec<Interval> = Vec::new();
    let mut stack = vec![(lo, hi, total)];
    while let Some((lo, hi, count)) = stack.pop() {
        match count {
            0 => continue,
            1 => out.push(Interval::new(lo, hi)),
            _ => {
                let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
                if sign_at_rational(p, &mid) == 0 {
                    // the split point is itself a root: carve out a small
                    // isolating interval around it with non-root endpoints
                    let mut delta = (&hi - &lo) / Rational::from_integer(BigInt::from(4));
                    loop {
                        let a = &mid - &delta;
                        let b = &mid + &delta;
                        if sign_at_rational(p, &a) != 0
                            && sign_at_rational(p, &b) != 0
                            && chain.count_halfopen(&a, &b) == 1
                        {
                            let left = chain.count_halfopen(&lo, &a);
                            let right = chain.count_halfopen(&b, &hi);
                            stack.push((lo, a.clone(), left));
                            out.push(Interval::new(a, b.clone()));
                            stack.push((b, hi, right));
                            break;
                        }
                        delta = delta / Rational::from_integer(BigInt::from(2));
                    }
                } else {
                    let left = chain.count_halfopen(&lo, &mid);
                    stack.push((lo, mid.clone(), left));
                    stack.push((mid, hi, count - left));
                }
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(out)
}

/// Shrink a root-isolating interval for `p` until no polynomial in
/// `exclude` has a real root in the closed refined interval. Errors if some
/// excluded polynomial vanishes at the isolated root itself.
pub fn refine_root(p: &Polynomial, iv: &Interval, exclude: &[Polynomial]) -> Result<Interval> {
    let chain = SturmChain::new(p);
    if sign_at_rational(p, &iv.lo) == 0 || chain.count_halfopen(&iv.lo, &iv.hi) != 1 {
        return Err(Error::Internal(format!("{} does not isolate a root of {}", iv, p)));
    }
    for q in exclude {
        if q.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = gcd(p, q);
        if !g.is_constant() && SturmChain::new(&g).count_halfopen(&iv.lo, &iv.hi) > 0 {
            return Err(Error::SharedRoot(q.to_string()));
        }
    }
    let mut cur = iv.clone();
    loop {
        let mut blocked = false;
        for q in exclude {
            if has_root_in_closed(q, &cur)? {
                blocked = true;
                break;
            }
        }
        if !blocked {
            return Ok(cur);
        }
        let mid = cur.midpoint();
        if sign_at_rational(p, &mid) == 0 {
            // the root is exactly mid; keep it as the right endpoint
            let l = (&cur.lo + &mid) / Rational::from_integer(BigInt::from(2));
            cur = Interval::new(l, mid);
        } else if chain.count_halfopen(&cur.lo, &mid) == 1 {
            cur = Interval::new(cur.lo, mid);
        } else {
            cur = Interval::new(mid, cur.hi);
        }
    }
}

/// The first rational `t > from` such that no polynomial in `ps` has a root
/// in `(from, t]`, found by halving a unit offset.
pub fn root_free_right_extension(ps: &[Polynomial], from: &Rational) -> Result<Rational> {
    let mut offset = Rational::one();
    'outer: loop {
        let t = from + &offset;
        for q in ps {
            if q.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            // count roots in (from, t]: strip any root at `from` first
            let mut sf = squarefree_part(q)?;
            while sign_at_rational(&sf, from) == 0 {
                sf = sf.try_exact_div(&Polynomial::line(from)).unwrap();
            }
            if SturmChain::new(&sf).count_halfopen(from, &t) > 0 {
                offset = offset / Rational::from_integer(BigInt::from(2));
                continue 'outer;
            }
        }
        return Ok(t);
    }
}

/// The simplest rational strictly between `lo` and `hi` (smallest
/// denominator; ties broken toward zero), via the Stern-Brocot walk.
pub fn simplest_rational_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo < hi, "empty open interval");
    let zero = Rational::zero();
    if *lo < zero && *hi > zero {
        return zero;
    }
    if *hi <= zero {
        return -simplest_nonneg(&-hi.clone(), Some(&-lo.clone()));
    }
    simplest_nonneg(lo, Some(hi))
}

/// Simplest rational in the open interval `(lo, hi)` with `0 <= lo`, where
/// `hi = None` means `+infinity`.
fn simplest_nonneg(lo: &Rational, hi: Option<&Rational>) -> Rational {
    let fl = lo.floor();
    let next = &fl + Rational::one();
    match hi {
        None => next,
        Some(hi) => {
            if next < *hi {
                return next;
            }
            let frac = lo - &fl;
            let inv_hi = Rational::one() / (hi - &fl);
            if frac.is_zero() {
                &fl + Rational::one() / simplest_nonneg(&inv_hi, None)
            } else {
                let inv_lo = Rational::one() / frac;
                &fl + Rational::one() / simplest_nonneg(&inv_hi, Some(&inv_lo))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::parse_polynomial;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }

    fn rat(s: &str) -> Rational {
        crate::ratpoly::parse_rational(s).unwrap()
    }

    #[test]
    fn isolate_sqrt2() {
        let ivs = isolate_roots(&p("x^2-2")).unwrap();
        assert_eq!(ivs.len(), 2);
        // -sqrt(2) in the first interval, sqrt(2) in the second
        assert!(ivs[0].lo < rat("-7/5") && rat("-7/5") < ivs[0].hi || ivs[0].hi >= rat("-3/2"));
        for iv in &ivs {
            assert_eq!(count_roots_in(&p("x^2-2"), iv).unwrap(), 1);
        }
        assert!(ivs[0].hi <= ivs[1].lo || ivs[0].hi < ivs[1].hi);
    }

    #[test]
    fn isolate_no_real_roots() {
        assert!(isolate_roots(&p("x^2+1")).unwrap().is_empty());
    }

    #[test]
    fn isolate_linear() {
        let ivs = isolate_roots(&p("x-1")).unwrap();
        assert_eq!(ivs.len(), 1);
        assert!(ivs[0].lo < rat("1") && rat("1") <= ivs[0].hi);
    }

    #[test]
    fn isolate_rejects_non_squarefree() {
        let sq = p("x-1").mul(&p("x-1"));
        assert!(matches!(isolate_roots(&sq), Err(Error::NotSquareFree(_))));
    }

    #[test]
    fn isolate_many_rational_roots() {
        // roots at 0, 1, 2, 3: forces the split-point-is-a-root path
        let q = p("x").mul(&p("x-1")).mul(&p("x-2")).mul(&p("x-3"));
        let ivs = isolate_roots(&q).unwrap();
        assert_eq!(ivs.len(), 4);
        for (iv, r) in ivs.iter().zip(["0", "1", "2", "3"]) {
            let r = rat(r);
            assert!(iv.lo < r && r <= iv.hi, "{} not in {}", r, iv);
            assert_ne!(sign_at_rational(&q, &iv.lo), 0);
        }
    }

    #[test]
    fn refine_excludes_foreign_roots() {
        let q = p("x^2-2");
        let ivs = isolate_roots(&q).unwrap();
        let right = ivs[1].clone();
        let refined = refine_root(&q, &right, &[p("x-1"), p("x^2-3")]).unwrap();
        assert!(!has_root_in_closed(&p("x-1"), &refined).unwrap());
        assert!(!has_root_in_closed(&p("x^2-3"), &refined).unwrap());
        assert_eq!(count_roots_in(&q, &refined).unwrap(), 1);
        // idempotent in effect
        let again = refine_root(&q, &refined, &[p("x-1"), p("x^2-3")]).unwrap();
        assert_eq!(count_roots_in(&q, &again).unwrap(), 1);
    }

    #[test]
    fn refine_rejects_shared_root() {
        let q = p("x^2-2");
        let ivs = isolate_roots(&q).unwrap();
        assert!(matches!(
            refine_root(&q, &ivs[1], &[p("x^2-2")]),
            Err(Error::SharedRoot(_))
        ));
        let mixed = p("x^2-2").mul(&p("x-7"));
        assert!(matches!(refine_root(&q, &ivs[1], &[mixed]), Err(Error::SharedRoot(_))));
    }

    #[test]
    fn sturm_count_on_halfopen_boundaries() {
        let q = p("x-1");
        let chain = SturmChain::new(&q);
        assert_eq!(chain.count_halfopen(&rat("0"), &rat("1")), 1);
        assert_eq!(chain.count_halfopen(&rat("1"), &rat("2")), 0);
        assert_eq!(chain.count_halfopen(&rat("-5"), &rat("5")), 1);
        assert_eq!(chain.count_all(), 1);
    }

    #[test]
    fn isolate_mixed_linear_and_quadratic_factors() {
        // planted roots: -sqrt(5), -sqrt(2), 1, sqrt(2), sqrt(5), 3
        let q = p("x^2-5").mul(&p("x-1")).mul(&p("x^2-2")).mul(&p("x-3"));
        let ivs = isolate_roots(&q).unwrap();
        assert_eq!(ivs.len(), 6);
        for iv in &ivs {
            assert_eq!(count_roots_in(&q, iv).unwrap(), 1);
        }
    }

    #[test]
    fn simplest_rationals() {
        assert_eq!(simplest_rational_between(&rat("-3/4"), &rat("3/4")), rat("0"));
        assert_eq!(simplest_rational_between(&rat("1/3"), &rat("1/2")), rat("2/5"));
        assert_eq!(simplest_rational_between(&rat("2"), &rat("3")), rat("5/2"));
        assert_eq!(simplest_rational_between(&rat("0"), &rat("5")), rat("1"));
        assert_eq!(simplest_rational_between(&rat("-5"), &rat("-2")), rat("-3"));
        assert_eq!(simplest_rational_between(&rat("17/8"), &rat("9/4")), rat("11/5"));
    }

    #[test]
    fn root_free_extension_moves_past_roots() {
        let t = root_free_right_extension(&[p("x-1"), p("x^2-2")], &rat("1")).unwrap();
        assert!(t > rat("1"));
        assert!(&t * &t < rat("2")); // stays left of sqrt(2)
    }
}
