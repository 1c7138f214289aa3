//! Concatenation and reversal of solution pairs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hybrid_time::signal::{HybridSignal, Phase, SolutionPair};

/// How reversal fills the input samples whose value is left free: the initial
/// sample of a reversed flow and the non-jump boundary samples of later phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryInputPolicy {
    /// Copy the closest interior (mirrored) sample of the same phase; fall back
    /// to the plain mirror image when the phase has no interior sample.
    #[default]
    CopyNearest,
    /// Fill with zeros.
    Zero,
}

fn concat_signal(first: &HybridSignal, second: &HybridSignal) -> HybridSignal {
    let dim = first.dim();
    let shift = first.end().t;
    let mut phases: Vec<Phase> = first.phases().to_vec();
    let mut seam = phases.pop().unwrap();
    // The value at max dom of the first signal comes from the second one.
    seam.pop(dim);
    let mut tail = second.phases().iter().map(|p| p.shifted(shift));
    let head = tail.next().unwrap();
    for i in 0..head.len() {
        seam.push(head.time(i), head.value(i, dim));
    }
    phases.push(seam);
    phases.extend(tail);
    HybridSignal::from_parts_unchecked(dim, phases)
}

/// `psi1 | psi2`: the domain of `psi2` is shifted onto `max dom psi1`.
///
/// Pure domain and sample arithmetic; dynamics are not checked.
pub fn concatenate(psi1: &SolutionPair, psi2: &SolutionPair) -> Result<SolutionPair> {
    if psi1.state_dim() != psi2.state_dim() {
        return Err(Error::DimensionMismatch {
            expected: psi1.state_dim(),
            actual: psi2.state_dim(),
        });
    }
    if psi1.input_dim() != psi2.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: psi1.input_dim(),
            actual: psi2.input_dim(),
        });
    }
    Ok(SolutionPair::from_parts_unchecked(
        concat_signal(psi1.arc(), psi2.arc()),
        concat_signal(psi1.input(), psi2.input()),
    ))
}

/// Concatenate a non-empty sequence left to right.
pub fn concatenate_all<'a, I>(pairs: I) -> Option<Result<SolutionPair>>
where
    I: IntoIterator<Item = &'a SolutionPair>,
{
    let mut iter = pairs.into_iter();
    let first = iter.next()?.clone();
    Some(iter.try_fold(first, |acc, next| concatenate(&acc, next)))
}

/// Reversal of a compact solution pair.
///
/// Arc samples are mirrored in hybrid time. Interior input samples are
/// mirrored, the input at each pre-jump instant takes the jump input of the
/// mirrored jump, and the remaining boundary samples follow `policy`.
pub fn reverse(psi: &SolutionPair, policy: BoundaryInputPolicy) -> SolutionPair {
    let n = psi.state_dim();
    let m = psi.input_dim();
    let end = psi.end();
    let total = end.t;
    let last_j = end.j;
    let src_arc = psi.arc().phases();
    let src_in = psi.input().phases();

    let mut arc_phases = Vec::with_capacity(src_arc.len());
    let mut input_phases = Vec::with_capacity(src_in.len());
    for jr in 0..=last_j {
        let k = last_j - jr;
        let sa = &src_arc[k];
        let su = &src_in[k];
        let len = sa.len();
        let mut times = Vec::with_capacity(len);
        let mut arc_vals = Vec::with_capacity(len * n);
        let mut in_vals = Vec::with_capacity(len * m);
        for i in 0..len {
            let src = len - 1 - i;
            times.push(total - sa.time(src));
            arc_vals.extend_from_slice(sa.value(src, n));
            let interior = i > 0 && i + 1 < len;
            let pre_jump = i + 1 == len && jr < last_j;
            if interior {
                in_vals.extend_from_slice(su.value(src, m));
            } else if pre_jump {
                let prev = &src_in[k - 1];
                in_vals.extend_from_slice(prev.value(prev.len() - 1, m));
            } else {
                match policy {
                    BoundaryInputPolicy::Zero => in_vals.extend(std::iter::repeat_n(0.0, m)),
                    BoundaryInputPolicy::CopyNearest => {
                        // nearest interior sample of the reversed phase maps to
                        // source index len-2 (for i == 0) or 1 (for i == len-1)
                        let nearest = if len >= 3 {
                            if i == 0 {
                                len - 2
                            } else {
                                1
                            }
                        } else {
                            src
                        };
                        in_vals.extend_from_slice(su.value(nearest, m));
                    }
                }
            }
        }
        arc_phases.push(Phase::new(times.clone(), arc_vals));
        input_phases.push(Phase::new(times, in_vals));
    }
    SolutionPair::from_parts_unchecked(
        HybridSignal::from_parts_unchecked(n, arc_phases),
        HybridSignal::from_parts_unchecked(m, input_phases),
    )
}

/// Which input samples of a reversed pair carry values prescribed by the
/// reversal (as opposed to policy-filled ones). Indexed `[phase][sample]`.
pub fn prescribed_input_mask(domain_phase_lengths: &[usize]) -> Vec<Vec<bool>> {
    let last_j = domain_phase_lengths.len() - 1;
    domain_phase_lengths
        .iter()
        .enumerate()
        .map(|(j, &len)| {
            (0..len)
                .map(|i| (i > 0 && i + 1 < len) || (i + 1 == len && j < last_j))
                .collect()
        })
        .collect()
}
