//! Positive-primitive formulas on finite spaces of orderings.
//!
//! A pp formula is an existentially quantified conjunction of atoms
//! `p in D(1, q)` where `p` and `q` are signed square-free products of the
//! quantified variables and of named parameters. Concrete syntax:
//!
//! ```text
//! formula := "E" ident* ":" atom ("&" atom)*
//! atom    := term "in" "D(1," term ")"
//! term    := ["-"] factor ("*" factor)* ;  factor := ident | "1"
//! ```
//!
//! Variables are the identifiers declared between `E` and `:`; every other
//! identifier is a parameter, to be bound to a group element before
//! evaluation. Evaluation enumerates all assignments of group elements to
//! the variables in lexicographic order and reports the first witness.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::Error;
use crate::qx::Tower;
use crate::space::{subspace_generated, FiniteSpace, GroupElement};
use crate::Result;

/// Default cap on the number of variable assignments tried by [`evaluate`].
pub const DEFAULT_ASSIGNMENT_CAP: u64 = 1 << 24;
/// Default cap on the number of seed subsets examined by
/// [`search_counterexample_subspace`].
pub const DEFAULT_SEED_CAP: u64 = 1 << 20;
/// Default budget for the exact form of the cardinality bound: the final
/// exponent may not exceed this many bits.
pub const DEFAULT_BOUND_BIT_BUDGET: u64 = 1 << 16;

/// A signed square-free product of identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub negate: bool,
    /// Distinct identifiers, in first-occurrence order (squares reduce).
    pub idents: Vec<String>,
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negate {
            write!(f, "-")?;
        }
        if self.idents.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", self.idents.join("*"))
        }
    }
}

/// One conjunct: `lhs in D(1, rhs)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub lhs: Monomial,
    pub rhs: Monomial,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in D(1,{})", self.lhs, self.rhs)
    }
}

/// A parsed pp formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PPFormula {
    /// Quantified variables, in declaration order.
    pub vars: Vec<String>,
    /// Parameters: atom identifiers that are not variables, in
    /// first-occurrence order.
    pub params: Vec<String>,
    pub atoms: Vec<Atom>,
}

impl fmt::Display for PPFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E")?;
        for v in &self.vars {
            write!(f, " {}", v)?;
        }
        write!(f, " :")?;
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, " &")?;
            }
            write!(f, " {}", a)?;
        }
        Ok(())
    }
}

/// Assignment of group elements to parameter names.
pub type Binding = BTreeMap<String, GroupElement>;

/// Result of evaluating a formula: the lexicographically first witness
/// (one element per quantified variable) or falsity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    True(Vec<GroupElement>),
    False,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::True(_))
    }
}

struct FormulaScanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> FormulaScanner<'a> {
    fn new(text: &'a str) -> Self {
        FormulaScanner { bytes: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        let b = *self.bytes.get(self.pos)?;
        if !(b.is_ascii_alphabetic() || b == b'_') {
            return None;
        }
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        Some(std::str::from_utf8(&self.bytes[start..self.pos]).unwrap().to_string())
    }
}

/// Parse a pp formula from its text form.
pub fn parse_formula(text: &str) -> Result<PPFormula> {
    let mut sc = FormulaScanner::new(text);
    match sc.ident() {
        Some(e) if e == "E" => {}
        _ => return Err(sc.err("a formula starts with `E`")),
    }
    let mut vars: Vec<String> = Vec::new();
    loop {
        if sc.eat(b':') {
            break;
        }
        match sc.ident() {
            Some(v) => {
                if v == "in" || v == "D" || v == "E" {
                    return Err(sc.err(format!("`{}` cannot be a variable name", v)));
                }
                if vars.contains(&v) {
                    return Err(sc.err(format!("duplicate variable `{}`", v)));
                }
                vars.push(v);
            }
            None => return Err(sc.err("expected a variable name or `:`")),
        }
    }
    let mut atoms = Vec::new();
    loop {
        atoms.push(parse_atom(&mut sc)?);
        sc.skip_ws();
        if sc.pos >= sc.bytes.len() {
            break;
        }
        if !sc.eat(b'&') {
            return Err(sc.err("expected `&` or end of formula"));
        }
    }
    let mut params: Vec<String> = Vec::new();
    for atom in &atoms {
        for id in atom.lhs.idents.iter().chain(atom.rhs.idents.iter()) {
            if !vars.contains(id) && !params.contains(id) {
                params.push(id.clone());
            }
        }
    }
    Ok(PPFormula { vars, params, atoms })
}

fn parse_atom(sc: &mut FormulaScanner<'_>) -> Result<Atom> {
    let lhs = parse_term(sc)?;
    match sc.ident() {
        Some(kw) if kw == "in" => {}
        _ => return Err(sc.err("expected `in`")),
    }
    match sc.ident() {
        Some(kw) if kw == "D" => {}
        _ => return Err(sc.err("expected `D`")),
    }
    if !sc.eat(b'(') {
        return Err(sc.err("expected `(`"));
    }
    if !sc.eat(b'1') {
        return Err(sc.err("the first slot of D is always 1"));
    }
    if !sc.eat(b',') {
        return Err(sc.err("expected `,`"));
    }
    let rhs = parse_term(sc)?;
    if !sc.eat(b')') {
        return Err(sc.err("expected `)`"));
    }
    Ok(Atom { lhs, rhs })
}

/// A term is `-`-optional and multiplies identifiers and `1` factors;
/// repeated identifiers cancel (the group has exponent 2).
fn parse_term(sc: &mut FormulaScanner<'_>) -> Result<Monomial> {
    let negate = sc.eat(b'-');
    let mut idents: Vec<String> = Vec::new();
    loop {
        sc.skip_ws();
        if sc.eat(b'1') {
            // the unit factor contributes nothing
        } else {
            match sc.ident() {
                Some(id) if id != "in" && id != "D" => {
                    if let Some(i) = idents.iter().position(|x| *x == id) {
                        idents.remove(i);
                    } else {
                        idents.push(id);
                    }
                }
                _ => return Err(sc.err("expected an identifier or `1`")),
            }
        }
        if !sc.eat(b'*') {
            break;
        }
    }
    Ok(Monomial { negate, idents })
}

/// Resolve a monomial to a group element given variable and parameter
/// assignments.
fn monomial_value(
    m: &Monomial,
    space: &FiniteSpace,
    vars: &[String],
    assignment: &[GroupElement],
    binding: &Binding,
) -> Result<GroupElement> {
    let mut acc = if m.negate { space.minus_one() } else { GroupElement::identity() };
    for id in &m.idents {
        let v = if let Some(i) = vars.iter().position(|v| v == id) {
            assignment[i]
        } else {
            *binding.get(id).ok_or_else(|| Error::UnboundParameter(id.clone()))?
        };
        space.check_element(v)?;
        acc = acc.product(v);
    }
    Ok(acc)
}

/// Check all atoms under a fixed assignment of the quantified variables.
pub fn eval_fixed(
    space: &FiniteSpace,
    f: &PPFormula,
    binding: &Binding,
    assignment: &[GroupElement],
) -> Result<bool> {
    debug_assert_eq!(assignment.len(), f.vars.len());
    for atom in &f.atoms {
        let p = monomial_value(&atom.lhs, space, &f.vars, assignment, binding)?;
        let q = monomial_value(&atom.rhs, space, &f.vars, assignment, binding)?;
        // p in D(1, q): at every point, p is positive or agrees with q
        let sp = space.sign_vector(p);
        let sq = space.sign_vector(q);
        if sp & (sp ^ sq) != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Evaluate a formula by enumerating all assignments of group elements to
/// the quantified variables; returns the lexicographically first witness.
pub fn evaluate(space: &FiniteSpace, f: &PPFormula, binding: &Binding) -> Result<Verdict> {
    evaluate_with_cap(space, f, binding, DEFAULT_ASSIGNMENT_CAP)
}

pub fn evaluate_with_cap(
    space: &FiniteSpace,
    f: &PPFormula,
    binding: &Binding,
    cap: u64,
) -> Result<Verdict> {
    for name in &f.params {
        if !binding.contains_key(name) {
            return Err(Error::UnboundParameter(name.clone()));
        }
    }
    let n = f.vars.len();
    let order = space.group_order();
    let total = order.checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(Error::EnumerationCapExceeded {
            needed: total,
            cap: cap as u128,
            what: format!("({} variables over a group of order {})", n, order),
        });
    }
    let mut assignment = vec![GroupElement::identity(); n];
    if n == 0 {
        return Ok(if eval_fixed(space, f, binding, &assignment)? {
            Verdict::True(assignment)
        } else {
            Verdict::False
        });
    }
    loop {
        if eval_fixed(space, f, binding, &assignment)? {
            return Ok(Verdict::True(assignment));
        }
        // advance lexicographically: the last variable is least significant
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(Verdict::False);
            }
            i -= 1;
            let next = assignment[i].bits() + 1;
            if (next as u128) < order {
                assignment[i] = GroupElement::from_bits(next);
                for a in assignment.iter_mut().skip(i + 1) {
                    *a = GroupElement::identity();
                }
                break;
            }
        }
    }
}

/// Evaluate a formula on the subspace generated by `seed`: the binding is
/// pushed through restriction and the variables range over the restricted
/// group.
pub fn evaluate_on_subspace(
    space: &FiniteSpace,
    seed: &[usize],
    f: &PPFormula,
    binding: &Binding,
) -> Result<Verdict> {
    let sub = subspace_generated(space, seed)?;
    let mut pushed = Binding::new();
    for (name, &g) in binding {
        pushed.insert(name.clone(), sub.restrict_element(space, g)?);
    }
    evaluate(&sub.space, f, &pushed)
}

/// Search the generated subspaces from seeds of size 1 to `max_points`
/// (deduplicated by the subspace they generate, smallest seeds first) for
/// one on which the formula fails. Returns the first failing seed.
pub fn search_counterexample_subspace(
    space: &FiniteSpace,
    f: &PPFormula,
    binding: &Binding,
    max_points: usize,
) -> Result<Option<Vec<usize>>> {
    search_counterexample_with_cap(space, f, binding, max_points, DEFAULT_SEED_CAP)
}

pub fn search_counterexample_with_cap(
    space: &FiniteSpace,
    f: &PPFormula,
    binding: &Binding,
    max_points: usize,
    cap: u64,
) -> Result<Option<Vec<usize>>> {
    let n = space.num_points();
    let max_points = max_points.min(n);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut examined = 0u64;
    for size in 1..=max_points {
        let mut seed: Vec<usize> = (0..size).collect();
        loop {
            examined += 1;
            if examined > cap {
                return Err(Error::EnumerationCapExceeded {
                    needed: examined as u128,
                    cap: cap as u128,
                    what: "(seed subsets)".into(),
                });
            }
            let sub = subspace_generated(space, &seed)?;
            if seen.insert(sub.point_indices.clone()) {
                let mut pushed = Binding::new();
                for (name, &g) in binding {
                    pushed.insert(name.clone(), sub.restrict_element(space, g)?);
                }
                if !evaluate(&sub.space, f, &pushed)?.holds() {
                    return Ok(Some(seed));
                }
            }
            if !next_combination(&mut seed, n) {
                break;
            }
        }
    }
    Ok(None)
}

/// Advance a sorted index combination; false when exhausted.
fn next_combination(seed: &mut [usize], n: usize) -> bool {
    let k = seed.len();
    let mut i = k;
    loop {
        if i == 0 {
            return false;
        }
        i -= 1;
        if seed[i] < n - (k - i) {
            seed[i] += 1;
            for j in i + 1..k {
                seed[j] = seed[j - 1] + 1;
            }
            return true;
        }
    }
}

/// The cardinality bound `B(n, k)`: exact when the final exponent fits the
/// bit budget, otherwise the symbolic tower `2^k * 2^(2^(nk) * B(n, k-1))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    Exact(BigUint),
    Tower { outer_pow2: u64, scale_log2: u64, inner: Box<Bound> },
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Exact(v) => write!(f, "{}", v),
            Bound::Tower { outer_pow2, scale_log2, inner } => {
                write!(f, "2^{} * 2^(2^{} * {})", outer_pow2, scale_log2, inner)
            }
        }
    }
}

/// `B(n, 0) = 1` and `B(n, k) = 2^k * 2^(2^(nk) * B(n, k-1))` for `k >= 1`.
pub fn bound_b(n: u32, k: u32) -> Bound {
    bound_b_with_budget(n, k, DEFAULT_BOUND_BIT_BUDGET)
}

pub fn bound_b_with_budget(n: u32, k: u32, exponent_bit_budget: u64) -> Bound {
    if k == 0 {
        return Bound::Exact(BigUint::one());
    }
    let inner = bound_b_with_budget(n, k - 1, exponent_bit_budget);
    let scale_log2 = n as u64 * k as u64;
    if let Bound::Exact(b) = &inner {
        let exponent = b.clone() << scale_log2;
        if exponent <= BigUint::from(exponent_bit_budget) {
            let e = exponent.to_u64().expect("bounded by the budget");
            return Bound::Exact(BigUint::one() << (e + k as u64));
        }
    }
    Bound::Tower { outer_pow2: k as u64, scale_log2, inner: Box::new(inner) }
}

/// Evaluate a formula along a tower starting at the level where the
/// parameters live: returns the least level at which it holds together
/// with the witness there, and verifies on the way up that the pushed
/// witness keeps working. `None` when the formula holds at no level.
pub fn check_tower(
    tower: &Tower,
    f: &PPFormula,
    binding: &Binding,
    level: usize,
) -> Result<Option<(usize, Vec<GroupElement>)>> {
    if level >= tower.levels.len() {
        return Err(Error::Internal(format!("tower has no level {}", level)));
    }
    let mut current: Binding = binding.clone();
    let mut found: Option<(usize, Vec<GroupElement>)> = None;
    let mut pushed_witness: Vec<GroupElement> = Vec::new();
    for i in level..tower.levels.len() {
        if i > level {
            let map = &tower.maps[i - 1];
            current = current
                .iter()
                .map(|(k, &g)| (k.clone(), push_element(g, &map.group_injection)))
                .collect();
            if found.is_some() {
                pushed_witness =
                    pushed_witness.iter().map(|&g| push_element(g, &map.group_injection)).collect();
            }
        }
        let space = &tower.levels[i].space;
        match &found {
            None => {
                if let Verdict::True(w) = evaluate(space, f, &current)? {
                    found = Some((i, w.clone()));
                    pushed_witness = w;
                }
            }
            Some(_) => {
                // coarse-to-fine stability: the pushed witness must survive
                if !eval_fixed(space, f, &current, &pushed_witness)? {
                    return Err(Error::MonotonicityViolation);
                }
            }
        }
    }
    Ok(found)
}

/// Push an element along a group injection given on basis generators.
pub fn push_element(g: GroupElement, injection: &[GroupElement]) -> GroupElement {
    let mut acc = GroupElement::identity();
    for (t, inj) in injection.iter().enumerate() {
        if g.bits() >> t & 1 == 1 {
            acc = acc.product(*inj);
        }
    }
    acc
}
