//! Canonical JSON form of a space:
//! `{"generators":[...],"minus_one":[bits...],"points":[{"label":..,"signs":[±1..]}]}`.

use serde::{Deserialize, Serialize};

use super::FiniteSpace;
use crate::error::Error;
use crate::Result;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RawSpace {
    pub generators: Vec<String>,
    pub minus_one: Vec<u8>,
    pub points: Vec<RawPoint>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RawPoint {
    pub label: String,
    pub signs: Vec<i32>,
}

impl RawSpace {
    pub fn from_space(space: &FiniteSpace) -> RawSpace {
        let rank = space.rank();
        RawSpace {
            generators: space.generator_names().to_vec(),
            minus_one: (0..rank).map(|i| (space.minus_one().bits() >> i & 1) as u8).collect(),
            points: (0..space.num_points())
                .map(|x| RawPoint {
                    label: space.label(x).to_string(),
                    signs: (0..rank)
                        .map(|i| if space.row(x) >> i & 1 == 1 { -1 } else { 1 })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Validate and convert into a [`FiniteSpace`].
    pub fn to_space(&self) -> Result<FiniteSpace> {
        let rank = self.generators.len();
        if self.minus_one.len() != rank {
            return Err(Error::InvalidSpace(format!(
                "minus_one has {} coordinates, expected {}",
                self.minus_one.len(),
                rank
            )));
        }
        if rank > 64 {
            return Err(Error::InvalidSpace(format!("rank {} exceeds the cap 64", rank)));
        }
        let mut minus = 0u64;
        for (i, &b) in self.minus_one.iter().enumerate() {
            match b {
                0 => {}
                1 => minus |= 1 << i,
                _ => return Err(Error::InvalidSpace("minus_one bits must be 0 or 1".into())),
            }
        }
        let mut points = Vec::with_capacity(self.points.len());
        for p in &self.points {
            if p.signs.len() != rank {
                return Err(Error::InvalidSpace(format!(
                    "point `{}` has {} signs, expected {}",
                    p.label,
                    p.signs.len(),
                    rank
                )));
            }
            let mut row = 0u64;
            for (i, &s) in p.signs.iter().enumerate() {
                match s {
                    1 => {}
                    -1 => row |= 1 << i,
                    _ => {
                        return Err(Error::InvalidSpace(format!(
                            "point `{}` has sign {} (must be 1 or -1)",
                            p.label, s
                        )))
                    }
                }
            }
            points.push((p.label.clone(), row));
        }
        FiniteSpace::new(self.generators.clone(), minus, points)
    }
}
