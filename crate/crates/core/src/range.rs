//! Configuration values given either as a constant or as a `[lo, hi]`
//! interval sampled uniformly per entity.

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueRange {
    pub lo: f64,
    pub hi: f64,
}

impl ValueRange {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub const fn fixed(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        if self.lo == self.hi {
            self.lo
        } else {
            rng.random_range(self.lo..=self.hi)
        }
    }

    pub fn is_valid(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite() && self.lo <= self.hi
    }

    /// Both ends satisfy `pred`.
    pub fn all(&self, pred: impl Fn(f64) -> bool) -> bool {
        pred(self.lo) && pred(self.hi)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr {
    Scalar(f64),
    Pair([f64; 2]),
}

impl Serialize for ValueRange {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.lo == self.hi {
            Repr::Scalar(self.lo).serialize(s)
        } else {
            Repr::Pair([self.lo, self.hi]).serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for ValueRange {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match Repr::deserialize(d)? {
            Repr::Scalar(v) => Self::fixed(v),
            Repr::Pair([lo, hi]) => Self::new(lo, hi),
        })
    }
}
