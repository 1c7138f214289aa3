use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A hybrid time instant `(t, j)`: ordinary time plus jump count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HybridTime {
    pub t: f64,
    pub j: usize,
}

impl HybridTime {
    pub fn new(t: f64, j: usize) -> Self {
        Self { t, j }
    }
}

/// One interval `[t_start, t_end] x {j}` of a hybrid time domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub j: usize,
    pub t_start: f64,
    pub t_end: f64,
}

impl Interval {
    pub fn length(&self) -> f64 {
        self.t_end - self.t_start
    }

    pub fn has_interior(&self) -> bool {
        self.t_end > self.t_start
    }
}

/// A compact hybrid time domain `U_{j=0}^{J} [t_j, t_{j+1}] x {j}`.
///
/// Stored as the nondecreasing boundary sequence `0 = t_0 <= t_1 <= ... <= t_{J+1}`;
/// interval `j` spans `[t_j, t_{j+1}]`, so consecutive intervals share their
/// jump instant by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridTimeDomain {
    boundaries: Vec<f64>,
}

impl HybridTimeDomain {
    /// Build from the boundary sequence `[t_0, ..., t_{J+1}]`.
    pub fn from_boundaries(boundaries: Vec<f64>) -> Result<Self> {
        if boundaries.len() < 2 {
            return Err(Error::InvalidDomain(
                "a compact domain needs at least one interval".into(),
            ));
        }
        if boundaries[0] != 0.0 {
            return Err(Error::InvalidDomain(format!(
                "domain must start at t = 0, got {}",
                boundaries[0]
            )));
        }
        for w in boundaries.windows(2) {
            if !(w[0] <= w[1]) || !w[1].is_finite() {
                return Err(Error::InvalidDomain(format!(
                    "boundary times must be finite and nondecreasing ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { boundaries })
    }

    /// Build from explicit interval records, checking every domain invariant.
    pub fn from_intervals(intervals: &[Interval]) -> Result<Self> {
        let Some(first) = intervals.first() else {
            return Err(Error::InvalidDomain("empty interval list".into()));
        };
        let mut boundaries = Vec::with_capacity(intervals.len() + 1);
        boundaries.push(first.t_start);
        for (idx, iv) in intervals.iter().enumerate() {
            if iv.j != idx {
                return Err(Error::InvalidDomain(format!(
                    "interval {idx} carries jump index {}",
                    iv.j
                )));
            }
            if iv.t_start != *boundaries.last().unwrap() {
                return Err(Error::InvalidDomain(format!(
                    "interval {idx} starts at {} but the previous one ends at {}",
                    iv.t_start,
                    boundaries.last().unwrap()
                )));
            }
            boundaries.push(iv.t_end);
        }
        Self::from_boundaries(boundaries)
    }

    /// The single-point domain `{(0, 0)}`.
    pub fn point() -> Self {
        Self {
            boundaries: vec![0.0, 0.0],
        }
    }

    /// `[0, t] x {0}`.
    pub fn flow(t: f64) -> Result<Self> {
        Self::from_boundaries(vec![0.0, t])
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    /// Number of jumps `J`.
    pub fn jumps(&self) -> usize {
        self.boundaries.len() - 2
    }

    pub fn interval_count(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn interval(&self, j: usize) -> Interval {
        Interval {
            j,
            t_start: self.boundaries[j],
            t_end: self.boundaries[j + 1],
        }
    }

    pub fn intervals(&self) -> impl Iterator<Item = Interval> + '_ {
        (0..self.interval_count()).map(move |j| self.interval(j))
    }

    /// `max dom = (T, J)`.
    pub fn end(&self) -> HybridTime {
        HybridTime::new(*self.boundaries.last().unwrap(), self.jumps())
    }

    pub fn total_time(&self) -> f64 {
        *self.boundaries.last().unwrap()
    }

    pub fn contains(&self, t: f64, j: usize) -> bool {
        j < self.interval_count() && self.boundaries[j] <= t && t <= self.boundaries[j + 1]
    }

    /// True when the domain is `{(0, 0)}`.
    pub fn is_trivial(&self) -> bool {
        self.jumps() == 0 && self.total_time() == 0.0
    }

    /// No jumps and positive flow time.
    pub fn is_purely_continuous(&self) -> bool {
        self.jumps() == 0 && self.total_time() > 0.0
    }

    /// `self U (other + {max self})`.
    pub fn union_shift(&self, other: &HybridTimeDomain) -> HybridTimeDomain {
        let shift = self.total_time();
        let mut boundaries = self.boundaries[..self.boundaries.len() - 1].to_vec();
        boundaries.extend(other.boundaries[1..].iter().map(|t| t + shift));
        HybridTimeDomain { boundaries }
    }

    /// `{(T, J)} - self`.
    pub fn mirror(&self) -> HybridTimeDomain {
        let end = self.total_time();
        let boundaries = self.boundaries.iter().rev().map(|t| end - t).collect();
        HybridTimeDomain { boundaries }
    }
}
