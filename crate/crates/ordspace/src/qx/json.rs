//! JSON forms of quotients and towers. Polynomials and rationals travel as
//! their text forms; group elements as bit arrays over the ambient basis.

use serde::{Deserialize, Serialize};

use super::{DownMap, QuotientResult, Tower};
use crate::error::Error;
use crate::ratpoly::{parse_polynomial, parse_rational, Interval};
use crate::space::{GroupElement, RawSpace};
use crate::Result;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RawQuotient {
    pub space: RawSpace,
    pub labels: Vec<String>,
    pub separators: Vec<String>,
    pub generator_reps: Vec<String>,
    pub factors: Vec<String>,
    pub factor_roots: Vec<Vec<[String; 2]>>,
    pub inputs: Vec<String>,
    pub input_expressions: Vec<Vec<u8>>,
}

impl RawQuotient {
    pub fn from_quotient(q: &QuotientResult) -> RawQuotient {
        RawQuotient {
            space: RawSpace::from_space(&q.space),
            labels: q.space.labels().to_vec(),
            separators: q.separators.iter().map(|r| r.to_string()).collect(),
            generator_reps: q.generator_reps.iter().map(|p| p.to_string()).collect(),
            factors: q.factors.iter().map(|p| p.to_string()).collect(),
            factor_roots: q
                .factor_roots
                .iter()
                .map(|ivs| {
                    ivs.iter().map(|iv| [iv.lo.to_string(), iv.hi.to_string()]).collect()
                })
                .collect(),
            inputs: q.inputs.iter().map(|p| p.to_string()).collect(),
            input_expressions: q
                .input_expressions
                .iter()
                .map(|g| bits_vec(g.bits(), q.space.rank()))
                .collect(),
        }
    }

    pub fn to_quotient(&self) -> Result<QuotientResult> {
        let space = self.space.to_space()?;
        let rank = space.rank();
        if self.generator_reps.len() != rank {
            return Err(Error::InvalidSpace(format!(
                "{} generator representatives for rank {}",
                self.generator_reps.len(),
                rank
            )));
        }
        if self.labels != space.labels() {
            return Err(Error::InvalidSpace("label list disagrees with the space".into()));
        }
        let separators =
            self.separators.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        let generator_reps =
            self.generator_reps.iter().map(|s| parse_polynomial(s)).collect::<Result<Vec<_>>>()?;
        let factors =
            self.factors.iter().map(|s| parse_polynomial(s)).collect::<Result<Vec<_>>>()?;
        let mut factor_roots = Vec::with_capacity(self.factor_roots.len());
        for ivs in &self.factor_roots {
            let mut parsed = Vec::with_capacity(ivs.len());
            for [lo, hi] in ivs {
                parsed.push(Interval::new(parse_rational(lo)?, parse_rational(hi)?));
            }
            factor_roots.push(parsed);
        }
        let inputs =
            self.inputs.iter().map(|s| parse_polynomial(s)).collect::<Result<Vec<_>>>()?;
        let mut input_expressions = Vec::with_capacity(self.input_expressions.len());
        for bits in &self.input_expressions {
            input_expressions.push(GroupElement::from_bits(bits_from_vec(bits, rank)?));
        }
        Ok(QuotientResult {
            space,
            separators,
            generator_reps,
            factors,
            factor_roots,
            inputs,
            input_expressions,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RawDownMap {
    pub point_map: Vec<usize>,
    pub group_injection: Vec<Vec<u8>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RawTower {
    pub levels: Vec<RawQuotient>,
    pub maps: Vec<RawDownMap>,
}

impl RawTower {
    pub fn from_tower(t: &Tower) -> RawTower {
        RawTower {
            levels: t.levels.iter().map(RawQuotient::from_quotient).collect(),
            maps: t
                .maps
                .iter()
                .enumerate()
                .map(|(i, m)| RawDownMap {
                    point_map: m.point_map.clone(),
                    group_injection: m
                        .group_injection
                        .iter()
                        .map(|g| bits_vec(g.bits(), t.levels[i + 1].space.rank()))
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_tower(&self) -> Result<Tower> {
        let levels =
            self.levels.iter().map(|l| l.to_quotient()).collect::<Result<Vec<_>>>()?;
        if self.maps.len() + 1 != levels.len() {
            return Err(Error::InvalidSpace("tower map count mismatch".into()));
        }
        let mut maps = Vec::with_capacity(self.maps.len());
        for (i, m) in self.maps.iter().enumerate() {
            let rank = levels[i + 1].space.rank();
            let mut group_injection = Vec::with_capacity(m.group_injection.len());
            for bits in &m.group_injection {
                group_injection.push(GroupElement::from_bits(bits_from_vec(bits, rank)?));
            }
            maps.push(DownMap { point_map: m.point_map.clone(), group_injection });
        }
        Ok(Tower { levels, maps })
    }
}

fn bits_vec(bits: u64, rank: usize) -> Vec<u8> {
    (0..rank).map(|i| (bits >> i & 1) as u8).collect()
}

fn bits_from_vec(v: &[u8], rank: usize) -> Result<u64> {
    if v.len() != rank {
        return Err(Error::InvalidSpace(format!(
            "bit vector of length {} for rank {}",
            v.len(),
            rank
        )));
    }
    let mut bits = 0u64;
    for (i, &b) in v.iter().enumerate() {
        match b {
            0 => {}
            1 => bits |= 1 << i,
            _ => return Err(Error::InvalidSpace("bits must be 0 or 1".into())),
        }
    }
    Ok(bits)
}
