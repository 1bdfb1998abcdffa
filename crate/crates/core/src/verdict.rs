//! Three-valued results for bounded searches over semi-decidable questions.

use serde::{Deserialize, Serialize};

use crate::tensor::C64;

/// Outcome of a bounded search: decided exactly, verified up to a bound, or
/// refuted with a concrete witness the caller can recompute.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict<W> {
    Exact { value: bool },
    HoldsUpTo { bound: u32 },
    #[serde(rename = "refuted")]
    RefutedAt { witness: W },
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        match self {
            Verdict::Exact { value } => *value,
            Verdict::HoldsUpTo { .. } => true,
            Verdict::RefutedAt { .. } => false,
        }
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::RefutedAt { witness } => Some(witness),
            _ => None,
        }
    }
}

pub(crate) mod complex_serde {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Parts {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(c: &C64, s: S) -> Result<S::Ok, S::Error> {
        Parts { re: c.re, im: c.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let p = Parts::deserialize(d)?;
        Ok(C64::new(p.re, p.im))
    }
}

/// Smallest square whose contraction vanished: the tile cannot tile the
/// plane, refuted by the `side × side` rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareRefutation {
    pub side: u32,
}

/// A rectangle whose toroidal trace is nonzero, together with its value:
/// the tile is trace-periodic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusRefutation {
    pub m: u32,
    pub n: u32,
    #[serde(with = "complex_serde")]
    pub trace: C64,
}

/// A direction along which no directional trace vanished within the bound:
/// a candidate periodicity direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionRefutation {
    pub u: (i64, i64),
}
