//! Gcd, square-free decomposition and coprime basis refinement.

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::{Polynomial, Rational};
use crate::error::Error;
use crate::Result;

/// Pseudo-remainder of primitive integer coefficient vectors (ascending).
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    debug_assert!(!b.is_empty());
    let mut r: Vec<BigInt> = a.to_vec();
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let lead = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (j, bc) in b.iter().enumerate() {
            let v = &r[k + j] - bc * &lead;
            r[k + j] = v;
        }
        while r.last().map_or(false, |c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

fn int_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    if v.is_empty() {
        return v;
    }
    let mut content = BigInt::zero();
    for c in &v {
        content = num_integer::Integer::gcd(&content, c);
    }
    for c in v.iter_mut() {
        *c = &*c / &content;
    }
    v
}

/// Greatest common divisor, returned in primitive integer form with a
/// positive leading coefficient (`gcd(0, 0) = 0`; constants normalize to 1).
pub fn gcd(p: &Polynomial, q: &Polynomial) -> Polynomial {
    if p.is_zero() {
        return q.normalize_primitive();
    }
    if q.is_zero() {
        return p.normalize_primitive();
    }
    let mut a = p.int_coeffs_keep_sign();
    let mut b = q.int_coeffs_keep_sign();
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = int_primitive(pseudo_rem(&a, &b));
        a = b;
        b = r;
    }
    if a.len() == 1 {
        return Polynomial::one();
    }
    Polynomial::new(a.into_iter().map(Rational::from_integer).collect()).normalize_primitive()
}

/// Square-free part `p / gcd(p, p')`, normalized to primitive integer
/// coefficients with a positive leading coefficient.
pub fn squarefree_part(p: &Polynomial) -> Result<Polynomial> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = gcd(p, &p.derivative());
    let q = p
        .try_exact_div(&g)
        .ok_or_else(|| Error::Internal(format!("gcd does not divide: {} / {}", p, g)))?;
    Ok(q.normalize_primitive())
}

/// Yun decomposition `p = c * f_1^1 * f_2^2 * ...` with the `f_i` primitive,
/// square-free, pairwise coprime and of positive leading coefficient.
/// Factors of degree zero are dropped; `c` is the exact rational constant.
pub fn squarefree_decomposition(p: &Polynomial) -> Result<(Rational, Vec<(Polynomial, u32)>)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut parts: Vec<(Polynomial, u32)> = Vec::new();
    if p.degree() == Some(0) {
        return Ok((p.leading_coefficient(), parts));
    }
    let dp = p.derivative();
    let g = gcd(p, &dp);
    if g.is_constant() {
        let f = p.normalize_primitive();
        let c = p.leading_coefficient() / f.leading_coefficient();
        return Ok((c, vec![(f, 1)]));
    }
    let mut c_i = p.try_exact_div(&g).unwrap();
    let mut d_i = dp.try_exact_div(&g).unwrap().sub(&c_i.derivative());
    let mut i = 1u32;
    while !c_i.is_constant() {
        let a_i = gcd(&c_i, &d_i);
        if !a_i.is_constant() {
            parts.push((a_i.clone(), i));
        }
        c_i = c_i.try_exact_div(&a_i).unwrap();
        d_i = d_i.try_exact_div(&a_i).unwrap().sub(&c_i.derivative());
        i += 1;
    }
    let mut prod = Polynomial::one();
    for (f, e) in &parts {
        prod = prod.mul(&f.pow(*e));
    }
    let q = p
        .try_exact_div(&prod)
        .ok_or_else(|| Error::Internal("square-free decomposition does not divide".into()))?;
    if !q.is_constant() {
        return Err(Error::Internal("square-free decomposition left a non-constant".into()));
    }
    Ok((q.leading_coefficient(), parts))
}

/// Expression of one input over a coprime basis: the input equals
/// `constant * prod_j basis[j]^multiplicities[j]` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisExpression {
    pub constant: Rational,
    pub multiplicities: Vec<u32>,
}

/// A pairwise-coprime square-free basis together with the exact expression
/// of every input over it.
#[derive(Debug, Clone)]
pub struct CoprimeBasis {
    pub basis: Vec<Polynomial>,
    pub expressions: Vec<BasisExpression>,
}

/// Refine the inputs into pairwise-coprime square-free polynomials with
/// positive leading coefficients such that every input is a rational
/// constant times a product of powers of basis elements. Feeding the full
/// square-free decomposition of each input (rather than only its square-free
/// part) guarantees that powers suffice, with no residual factor.
pub fn coprime_basis(inputs: &[Polynomial]) -> Result<CoprimeBasis> {
    let mut basis: Vec<Polynomial> = Vec::new();
    for p in inputs {
        let (_, parts) = squarefree_decomposition(p)?;
        for (f, _) in parts {
            insert_refining(&mut basis, f);
        }
    }
    basis.sort_by(|a, b| a.cmp_canonical(b));
    let mut expressions = Vec::with_capacity(inputs.len());
    for p in inputs {
        expressions.push(express_over(p, &basis)?);
    }
    Ok(CoprimeBasis { basis, expressions })
}

fn insert_refining(basis: &mut Vec<Polynomial>, f: Polynomial) {
    let mut queue = vec![f];
    'next: while let Some(mut q) = queue.pop() {
        if q.is_constant() {
            continue;
        }
        let mut i = 0;
        while i < basis.len() {
            let g = gcd(&q, &basis[i]);
            if !g.is_constant() {
                if g != basis[i] {
                    // split the basis element
                    let rest = basis[i].try_exact_div(&g).unwrap().normalize_primitive();
                    basis[i] = g.clone();
                    queue.push(rest);
                }
                q = q.try_exact_div(&g).unwrap().normalize_primitive();
                if q.is_constant() {
                    continue 'next;
                }
                // re-scan from the start: q changed
                i = 0;
                continue;
            }
            i += 1;
        }
        basis.push(q);
    }
}

fn express_over(p: &Polynomial, basis: &[Polynomial]) -> Result<BasisExpression> {
    let mut rest = p.clone();
    let mut multiplicities = vec![0u32; basis.len()];
    for (j, q) in basis.iter().enumerate() {
        while let Some(next) = rest.try_exact_div(q) {
            rest = next;
            multiplicities[j] += 1;
        }
    }
    if !rest.is_constant() {
        return Err(Error::Internal(format!(
            "input {} does not factor over the coprime basis (residue {})",
            p, rest
        )));
    }
    Ok(BasisExpression { constant: rest.leading_coefficient(), multiplicities })
}
