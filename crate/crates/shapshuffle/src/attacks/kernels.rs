//! The shuffle kernels and their composition.
//!
//! Every kernel consumes a [`SortedView`] and produces a permutation of the
//! batch's scores, reported per original row. Kernels only permute: the
//! multiset of scores is always preserved, which is what keeps the attacks
//! invisible to mean-based probes.
//!
//! Internally each kernel computes a *new occupancy order*: a vector whose
//! `k`-th entry is the original row that ends up holding the `k`-th best
//! score. Emission then assigns `out[order[k]] = sorted_scores[k]`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;

use crate::attacks::spec::{AttackKind, AttackSpec, CoinVariant, Modifiers};
use crate::attacks::view::SortedView;
use crate::seeding::derive_seed;

/// Decides whether each elementary shuffle action executes, implementing
/// the `frequency` and `max_count` modifiers.
struct ActionGate {
    frequency: f64,
    remaining: Option<u64>,
}

impl ActionGate {
    fn new(modifiers: &Modifiers) -> Self {
        ActionGate {
            frequency: modifiers.frequency,
            remaining: modifiers.max_count,
        }
    }

    fn unrestricted() -> Self {
        ActionGate {
            frequency: 1.0,
            remaining: None,
        }
    }

    /// Whether the next elementary action runs. Draws from the RNG only
    /// when `frequency < 1`, so the default gate leaves the kernel's
    /// randomness stream exactly as it would be without modifiers.
    fn allow(&mut self, rng: &mut ChaCha8Rng) -> bool {
        if self.remaining == Some(0) {
            return false;
        }
        let fire = self.frequency >= 1.0 || rng.random::<f64>() < self.frequency;
        if fire {
            if let Some(r) = &mut self.remaining {
                *r -= 1;
            }
        }
        fire
    }
}

/// Dominance: privileged rows occupy the best positions, both groups
/// keeping their internal order. The whole rearrangement is one elementary
/// action, so a gated run either happens entirely or not at all.
fn dominance_order(view: &SortedView, gate: &mut ActionGate, rng: &mut ChaCha8Rng) -> Vec<usize> {
    if !gate.allow(rng) {
        return view.ids.clone();
    }
    let mut order = Vec::with_capacity(view.len());
    order.extend(
        view.ids
            .iter()
            .zip(&view.privileged)
            .filter(|(_, &p)| p)
            .map(|(&id, _)| id),
    );
    order.extend(
        view.ids
            .iter()
            .zip(&view.privileged)
            .filter(|(_, &p)| !p)
            .map(|(&id, _)| id),
    );
    order
}

/// Mixing: merge the privileged and unprivileged queues best-first. Each
/// round flips a coin with probability `head_prob`; heads hands the next
/// position to the privileged side. Tails behaves per [`CoinVariant`]. A
/// gated-out round falls back to the neutral merge, which reproduces the
/// original order.
fn mixing_order(
    view: &SortedView,
    head_prob: f64,
    variant: CoinVariant,
    gate: &mut ActionGate,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    let mut privileged: VecDeque<usize> = VecDeque::new();
    let mut unprivileged: VecDeque<usize> = VecDeque::new();
    for (pos, &is_priv) in view.privileged.iter().enumerate() {
        if is_priv {
            privileged.push_back(pos);
        } else {
            unprivileged.push_back(pos);
        }
    }

    let neutral = |pq: &VecDeque<usize>, uq: &VecDeque<usize>, view: &SortedView| {
        let p = view.scores[*pq.front().expect("non-empty queue")];
        let u = view.scores[*uq.front().expect("non-empty queue")];
        view.direction.at_least_as_superior(p, u)
    };

    let mut order = Vec::with_capacity(view.len());
    while !privileged.is_empty() && !unprivileged.is_empty() {
        let take_privileged = if gate.allow(rng) {
            if rng.random::<f64>() < head_prob {
                true
            } else {
                match variant {
                    CoinVariant::Literal => neutral(&privileged, &unprivileged, view),
                    CoinVariant::Bernoulli => false,
                }
            }
        } else {
            neutral(&privileged, &unprivileged, view)
        };
        let pos = if take_privileged {
            privileged.pop_front().expect("checked non-empty")
        } else {
            unprivileged.pop_front().expect("checked non-empty")
        };
        order.push(view.ids[pos]);
    }
    order.extend(privileged.into_iter().map(|pos| view.ids[pos]));
    order.extend(unprivileged.into_iter().map(|pos| view.ids[pos]));
    order
}

/// Swapping: bubble passes that push privileged rows upward. Pass `j` scans
/// positions `j..n-1`; whenever an unprivileged row sits directly above a
/// privileged one they swap. Passes start at the position addressed by
/// `quantile` and move toward the top. With `single_step`, group flags are
/// not updated after a swap, limiting every unprivileged row to one
/// position of movement per pass.
fn swapping_order(
    view: &SortedView,
    quantile: f64,
    single_step: bool,
    gate: &mut ActionGate,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    let n = view.len();
    let mut order = view.ids.clone();
    if n < 2 {
        return order;
    }
    let mut group = view.privileged.clone();
    let start = (quantile * (n as f64 - 2.0)).round() as usize;
    for pass in (0..=start).rev() {
        for i in pass..n - 1 {
            if !group[i] && group[i + 1] && gate.allow(rng) {
                order.swap(i, i + 1);
                if !single_step {
                    group.swap(i, i + 1);
                }
            }
        }
    }
    order
}

fn kernel_order(
    view: &SortedView,
    kind: &AttackKind,
    gate: &mut ActionGate,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    match *kind {
        AttackKind::Dominance => dominance_order(view, gate, rng),
        AttackKind::Mixing {
            head_prob,
            coin_variant,
        } => mixing_order(view, head_prob, coin_variant, gate, rng),
        AttackKind::Swapping {
            quantile,
            single_step,
        } => swapping_order(view, quantile, single_step, gate, rng),
    }
}

/// Occupancy order for a single-kernel spec, honoring the region modifier:
/// only the best `ceil(region * n)` positions are attacked, the rest keep
/// their occupants.
fn single_spec_order(view: &SortedView, spec: &AttackSpec, seed: u64) -> Vec<usize> {
    let Some(kind) = &spec.kind else {
        return view.ids.clone();
    };
    let n = view.len();
    let scope = match spec.modifiers.region {
        Some(r) => (((r * n as f64).ceil()) as usize).min(n),
        None => n,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gate = ActionGate::new(&spec.modifiers);
    let mut order = if scope == n {
        kernel_order(view, kind, &mut gate, &mut rng)
    } else {
        kernel_order(&view.slice(0..scope), kind, &mut gate, &mut rng)
    };
    order.extend_from_slice(&view.ids[order.len()..]);
    order
}

/// Assign the sorted scores to rows according to an occupancy order.
fn emit(view: &SortedView, order: &[usize]) -> Vec<f64> {
    debug_assert_eq!(order.len(), view.len());
    let mut out = vec![0.0; view.len()];
    for (k, &row) in order.iter().enumerate() {
        out[row] = view.scores[k];
    }
    out
}

/// Dominance attack without modifiers.
pub fn attack_dominance(view: &SortedView) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let order = dominance_order(view, &mut ActionGate::unrestricted(), &mut rng);
    emit(view, &order)
}

/// Mixing attack without modifiers. `seed` drives the coin stream.
pub fn attack_mixing(view: &SortedView, head_prob: f64, variant: CoinVariant, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = mixing_order(view, head_prob, variant, &mut ActionGate::unrestricted(), &mut rng);
    emit(view, &order)
}

/// Swapping attack without modifiers (deterministic).
pub fn attack_swapping(view: &SortedView, quantile: f64, single_step: bool) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let order = swapping_order(
        view,
        quantile,
        single_step,
        &mut ActionGate::unrestricted(),
        &mut rng,
    );
    emit(view, &order)
}

/// One kernel plus modifiers.
pub fn apply_attack(view: &SortedView, kind: &AttackKind, modifiers: &Modifiers, seed: u64) -> Vec<f64> {
    let spec = AttackSpec {
        kind: Some(kind.clone()),
        modifiers: modifiers.clone(),
        hybrid: None,
    };
    emit(view, &single_spec_order(view, &spec, seed))
}

/// Split the sorted view at `ceil(n/2)` and run an independent spec on each
/// half; `None` leaves a half untouched. No score crosses the boundary.
pub fn compose_hybrid(
    view: &SortedView,
    top: Option<&AttackSpec>,
    bottom: Option<&AttackSpec>,
    seed: u64,
) -> Vec<f64> {
    let n = view.len();
    let mid = n.div_ceil(2);
    let mut order = Vec::with_capacity(n);
    for (half, spec, tag) in [(view.slice(0..mid), top, 1u64), (view.slice(mid..n), bottom, 2u64)] {
        if half.is_empty() {
            continue;
        }
        match spec {
            Some(s) => order.extend(single_spec_order(&half, s, derive_seed(seed, tag))),
            None => order.extend_from_slice(&half.ids),
        }
    }
    emit(view, &order)
}

/// General entry point: dispatch a validated [`AttackSpec`].
pub fn apply_spec(view: &SortedView, spec: &AttackSpec, seed: u64) -> Vec<f64> {
    if let Some(h) = &spec.hybrid {
        return compose_hybrid(
            view,
            h.top.as_deref(),
            h.bottom.as_deref(),
            seed,
        );
    }
    emit(view, &single_spec_order(view, spec, seed))
}
