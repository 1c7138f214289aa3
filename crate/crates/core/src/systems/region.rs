use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned box `[lo, hi]`. Degenerate axes (`lo == hi`) are allowed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxRegion {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxRegion {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                actual: hi.len(),
            });
        }
        if lo
            .iter()
            .zip(&hi)
            .any(|(a, b)| !(a <= b) || !a.is_finite() || !b.is_finite())
        {
            return Err(Error::ParameterOutOfRange(format!(
                "box bounds must be finite with lo <= hi (lo {lo:?}, hi {hi:?})"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(p: &[f64]) -> Self {
        Self {
            lo: p.to_vec(),
            hi: p.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (a, b))| *a <= *v && *v <= *b)
    }

    /// Uniform draw; degenerate axes return their single value.
    pub fn sample(&self, rng: &mut dyn RngCore) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&a, &b)| if a < b { rng.gen_range(a..=b) } else { a })
            .collect()
    }

    pub fn clamp(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(v, (a, b))| v.clamp(*a, *b))
            .collect()
    }

    pub fn distance(&self, x: &[f64]) -> f64 {
        distance(x, &self.clamp(x))
    }
}

/// Euclidean distance.
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Initial and final state sets of a planning problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSet {
    Point(Vec<f64>),
    Box(BoxRegion),
}

impl StateSet {
    pub fn dim(&self) -> usize {
        match self {
            StateSet::Point(p) => p.len(),
            StateSet::Box(b) => b.dim(),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            StateSet::Point(p) => p.as_slice() == x,
            StateSet::Box(b) => b.contains(x),
        }
    }

    pub fn sample(&self, rng: &mut dyn RngCore) -> Vec<f64> {
        match self {
            StateSet::Point(p) => p.clone(),
            StateSet::Box(b) => b.sample(rng),
        }
    }

    /// `|x|_S`.
    pub fn distance(&self, x: &[f64]) -> f64 {
        match self {
            StateSet::Point(p) => distance(x, p),
            StateSet::Box(b) => b.distance(x),
        }
    }
}

/// The unsafe set `X_u` over state/input pairs.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum UnsafeSet {
    #[default]
    Empty,
    /// Unsafe whenever some input component satisfies `u <= lo` or `u >= hi`.
    InputOutside { lo: Vec<f64>, hi: Vec<f64> },
    /// Unsafe whenever the state leaves the given box.
    StateOutside(BoxRegion),
}

impl UnsafeSet {
    pub fn contains(&self, x: &[f64], u: &[f64]) -> bool {
        match self {
            UnsafeSet::Empty => false,
            UnsafeSet::InputOutside { lo, hi } => {
                u.iter().zip(lo.iter().zip(hi)).any(|(v, (a, b))| *v <= *a || *v >= *b)
            }
            UnsafeSet::StateOutside(b) => !b.contains(x),
        }
    }
}
