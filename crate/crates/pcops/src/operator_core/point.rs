//! Points of the iterate space ℝⁿ.

use nalgebra::DVector;
use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A point in ℝⁿ under the standard 2-norm.
///
/// Every entry is finite and the dimension is at least 1; both are enforced
/// at construction, so downstream code can rely on them.
#[derive(Clone, PartialEq)]
pub struct Point {
    coords: DVector<f64>,
}

impl std::fmt::Debug for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Point[")?;
        for (i, v) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl Point {
    /// Builds a point, rejecting empty or non-finite input.
    pub fn new(coords: DVector<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::dim(1, 0, "point must have dimension >= 1"));
        }
        if !coords.iter().all(|v| v.is_finite()) {
            return Err(Error::numeric("point coordinates"));
        }
        Ok(Point { coords })
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(DVector::from_row_slice(coords))
    }

    /// The origin of ℝⁿ.
    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(DVector::zeros(dim))
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn into_coords(self) -> DVector<f64> {
        self.coords
    }

    /// Euclidean distance to another point.
    pub fn distance(&self, other: &Point) -> f64 {
        (&self.coords - &other.coords).norm()
    }

    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coords.len()))?;
        for v in self.coords.iter() {
            seq.serialize_element(v)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct PointVisitor;

        impl<'de> Visitor<'de> for PointVisitor {
            type Value = Point;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a non-empty sequence of finite numbers")
            }

            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Point, A::Error> {
                let mut coords = Vec::with_capacity(seq.size_hint().unwrap_or(0));
                while let Some(v) = seq.next_element::<f64>()? {
                    coords.push(v);
                }
                Point::from_slice(&coords).map_err(serde::de::Error::custom)
            }
        }

        deserializer.deserialize_seq(PointVisitor)
    }
}
