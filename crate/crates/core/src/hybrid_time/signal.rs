use crate::error::{Error, Result};
use crate::hybrid_time::domain::{HybridTime, HybridTimeDomain};

/// Samples of a signal on one interval `I^j` of its domain.
///
/// Values are stored row-major: sample `i` occupies `values[i*dim..(i+1)*dim]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Phase {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl Phase {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Self {
        Self { times, values }
    }

    pub fn single(t: f64, value: &[f64]) -> Self {
        Self {
            times: vec![t],
            values: value.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn raw_values(&self) -> &[f64] {
        &self.values
    }

    pub fn time(&self, i: usize) -> f64 {
        self.times[i]
    }

    pub fn start_time(&self) -> f64 {
        self.times[0]
    }

    pub fn end_time(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn value(&self, i: usize, dim: usize) -> &[f64] {
        &self.values[i * dim..(i + 1) * dim]
    }

    pub fn push(&mut self, t: f64, value: &[f64]) {
        self.times.push(t);
        self.values.extend_from_slice(value);
    }

    /// Drop the last sample.
    pub(crate) fn pop(&mut self, dim: usize) {
        self.times.pop();
        self.values.truncate(self.values.len() - dim);
    }

    /// Copy of the samples with every time shifted by `offset`.
    pub(crate) fn shifted(&self, offset: f64) -> Phase {
        Phase {
            times: self.times.iter().map(|t| t + offset).collect(),
            values: self.values.clone(),
        }
    }
}

/// A hybrid arc or hybrid input stored as per-phase sample grids.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridSignal {
    dim: usize,
    phases: Vec<Phase>,
}

impl HybridSignal {
    pub fn new(dim: usize, phases: Vec<Phase>) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::InvalidSignal("signal has no phases".into()));
        }
        let mut prev_end = 0.0;
        for (j, phase) in phases.iter().enumerate() {
            if phase.is_empty() {
                return Err(Error::InvalidSignal(format!("phase {j} has no samples")));
            }
            if phase.values.len() != phase.times.len() * dim {
                return Err(Error::DimensionMismatch {
                    expected: phase.times.len() * dim,
                    actual: phase.values.len(),
                });
            }
            if phase.start_time() != prev_end {
                return Err(Error::InvalidSignal(format!(
                    "phase {j} starts at {} but the domain requires {prev_end}",
                    phase.start_time()
                )));
            }
            if phase.times.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(Error::InvalidSignal(format!(
                    "sample times in phase {j} are not strictly increasing"
                )));
            }
            if phase.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidSignal(format!("phase {j} holds non-finite values")));
            }
            prev_end = phase.end_time();
        }
        Ok(Self { dim, phases })
    }

    pub(crate) fn from_parts_unchecked(dim: usize, phases: Vec<Phase>) -> Self {
        debug_assert!(Self::new(dim, phases.clone()).is_ok());
        Self { dim, phases }
    }

    /// Signal on `{(0, 0)}` holding one value.
    pub fn point(value: &[f64]) -> Self {
        Self {
            dim: value.len(),
            phases: vec![Phase::single(0.0, value)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    pub fn phase(&self, j: usize) -> &Phase {
        &self.phases[j]
    }

    pub fn domain(&self) -> HybridTimeDomain {
        let mut boundaries = Vec::with_capacity(self.phases.len() + 1);
        boundaries.push(0.0);
        boundaries.extend(self.phases.iter().map(Phase::end_time));
        HybridTimeDomain::from_boundaries(boundaries).expect("signal phases form a valid domain")
    }

    pub fn end(&self) -> HybridTime {
        HybridTime::new(self.phases.last().unwrap().end_time(), self.phases.len() - 1)
    }

    pub fn initial_value(&self) -> &[f64] {
        self.phases[0].value(0, self.dim)
    }

    pub fn final_value(&self) -> &[f64] {
        let last = self.phases.last().unwrap();
        last.value(last.len() - 1, self.dim)
    }

    pub fn value(&self, j: usize, i: usize) -> &[f64] {
        self.phases[j].value(i, self.dim)
    }

    pub fn sample_count(&self) -> usize {
        self.phases.iter().map(Phase::len).sum()
    }

    /// Iterate `(t, j, value)` over every stored sample.
    pub fn samples(&self) -> impl Iterator<Item = (f64, usize, &[f64])> + '_ {
        self.phases
            .iter()
            .enumerate()
            .flat_map(move |(j, p)| (0..p.len()).map(move |i| (p.time(i), j, p.value(i, self.dim))))
    }

    #[cfg(test)]
    pub(crate) fn into_phases(self) -> Vec<Phase> {
        self.phases
    }
}

/// A hybrid arc and a hybrid input sharing one domain and one sample grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPair {
    arc: HybridSignal,
    input: HybridSignal,
}

impl SolutionPair {
    pub fn new(arc: HybridSignal, input: HybridSignal) -> Result<Self> {
        if arc.phases.len() != input.phases.len() {
            return Err(Error::InvalidSignal(format!(
                "arc has {} phases, input has {}",
                arc.phases.len(),
                input.phases.len()
            )));
        }
        for (j, (a, u)) in arc.phases.iter().zip(&input.phases).enumerate() {
            if a.times != u.times {
                return Err(Error::InvalidSignal(format!(
                    "arc and input sample grids differ in phase {j}"
                )));
            }
        }
        Ok(Self { arc, input })
    }

    pub(crate) fn from_parts_unchecked(arc: HybridSignal, input: HybridSignal) -> Self {
        debug_assert!(Self::new(arc.clone(), input.clone()).is_ok());
        Self { arc, input }
    }

    /// The trivial pair on `{(0, 0)}`.
    pub fn point(state: &[f64], input: &[f64]) -> Self {
        Self {
            arc: HybridSignal::point(state),
            input: HybridSignal::point(input),
        }
    }

    /// A single jump `state --input--> successor` on `{(0,0), (0,1)}`.
    ///
    /// The post-jump sample repeats the jump input.
    pub fn single_jump(state: &[f64], input: &[f64], successor: &[f64]) -> Self {
        let arc = HybridSignal {
            dim: state.len(),
            phases: vec![Phase::single(0.0, state), Phase::single(0.0, successor)],
        };
        let inp = HybridSignal {
            dim: input.len(),
            phases: vec![Phase::single(0.0, input), Phase::single(0.0, input)],
        };
        Self { arc, input: inp }
    }

    pub fn arc(&self) -> &HybridSignal {
        &self.arc
    }

    pub fn input(&self) -> &HybridSignal {
        &self.input
    }

    pub fn into_parts(self) -> (HybridSignal, HybridSignal) {
        (self.arc, self.input)
    }

    pub fn state_dim(&self) -> usize {
        self.arc.dim
    }

    pub fn input_dim(&self) -> usize {
        self.input.dim
    }

    pub fn domain(&self) -> HybridTimeDomain {
        self.arc.domain()
    }

    pub fn end(&self) -> HybridTime {
        self.arc.end()
    }

    pub fn initial_state(&self) -> &[f64] {
        self.arc.initial_value()
    }

    pub fn final_state(&self) -> &[f64] {
        self.arc.final_value()
    }

    pub fn initial_input(&self) -> &[f64] {
        self.input.initial_value()
    }

    pub fn final_input(&self) -> &[f64] {
        self.input.final_value()
    }

    pub fn is_trivial(&self) -> bool {
        self.arc.phases.len() == 1 && self.arc.phases[0].len() == 1
    }

    /// Copy with the arc value at `(0, 0)` replaced.
    pub(crate) fn with_initial_state(&self, state: &[f64]) -> SolutionPair {
        let mut out = self.clone();
        out.arc.phases[0].values[..state.len()].copy_from_slice(state);
        out
    }

    pub fn is_purely_continuous(&self) -> bool {
        self.arc.phases.len() == 1 && self.arc.phases[0].len() > 1
    }

    /// Iterate `(state, input)` over every stored sample.
    pub fn sample_pairs(&self) -> impl Iterator<Item = (&[f64], &[f64])> + '_ {
        self.arc
            .samples()
            .zip(self.input.samples())
            .map(|((_, _, x), (_, _, u))| (x, u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_misaligned_phases() {
        let p0 = Phase::new(vec![0.0, 1.0], vec![0.0, 1.0]);
        let p1 = Phase::new(vec![1.5], vec![2.0]);
        assert!(HybridSignal::new(1, vec![p0.clone(), p1]).is_err());
        let p1 = Phase::new(vec![1.0], vec![2.0]);
        let s = HybridSignal::new(1, vec![p0, p1]).unwrap();
        assert_eq!(s.end(), HybridTime::new(1.0, 1));
    }

    #[test]
    fn rejects_repeated_times_and_bad_dims() {
        let p = Phase::new(vec![0.0, 0.0], vec![0.0, 1.0]);
        assert!(HybridSignal::new(1, vec![p]).is_err());
        let p = Phase::new(vec![0.0, 1.0], vec![0.0, 1.0, 2.0]);
        assert!(matches!(
            HybridSignal::new(1, vec![p]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn pair_requires_shared_grid() {
        let a = HybridSignal::new(1, vec![Phase::new(vec![0.0, 1.0], vec![0.0, 1.0])]).unwrap();
        let u = HybridSignal::new(1, vec![Phase::new(vec![0.0, 0.5], vec![0.0, 1.0])]).unwrap();
        assert!(SolutionPair::new(a, u).is_err());
    }

    #[test]
    fn single_jump_shape() {
        let p = SolutionPair::single_jump(&[0.0, -5.0], &[1.0], &[0.0, 5.0]);
        assert_eq!(p.domain().jumps(), 1);
        assert_eq!(p.final_state(), &[0.0, 5.0]);
        assert!(!p.is_trivial());
        assert!(!p.is_purely_continuous());
    }
}
