//! Property-based tests for the shuffle kernels: invariants that must hold
//! for every attack, parameter, modifier, and group pattern.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shapshuffle::attacks::{
    apply_spec, attack_dominance, attack_mixing, attack_swapping, prepare_sorted_view, AttackKind,
    AttackSpec, CoinVariant,
};
use shapshuffle::model::Direction;

/// Distinct scores drawn from a seeded stream; distinctness keeps rank
/// comparisons unambiguous.
fn distinct_scores(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let draw: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
        let mut sorted = draw.clone();
        sorted.sort_by(f64::total_cmp);
        sorted.dedup();
        if sorted.len() == n {
            return draw;
        }
    }
}

fn direction_from(flag: bool) -> Direction {
    if flag {
        Direction::HigherIsSuperior
    } else {
        Direction::LowerIsSuperior
    }
}

/// An arbitrary attack spec: any kernel, any parameter, any modifier combo,
/// and occasionally a hybrid wrapper.
fn arb_attack() -> impl Strategy<Value = AttackSpec> {
    let kernel = prop_oneof![
        Just(AttackSpec::dominance()),
        (0.0..=1.0f64, any::<bool>()).prop_map(|(head_prob, literal)| {
            AttackSpec::single(AttackKind::Mixing {
                head_prob,
                coin_variant: if literal {
                    CoinVariant::Literal
                } else {
                    CoinVariant::Bernoulli
                },
            })
        }),
        (0.0..=1.0f64, any::<bool>()).prop_map(|(quantile, single_step)| {
            AttackSpec::single(AttackKind::Swapping {
                quantile,
                single_step,
            })
        }),
    ];
    let modified = (
        kernel,
        proptest::option::of(0.05..=1.0f64),
        proptest::option::of(0.05..=1.0f64),
        proptest::option::of(0u64..6),
    )
        .prop_map(|(mut spec, region, frequency, max_count)| {
            if let Some(r) = region {
                spec = spec.with_region(r);
            }
            if let Some(f) = frequency {
                spec = spec.with_frequency(f);
            }
            if let Some(m) = max_count {
                spec = spec.with_max_count(m);
            }
            spec
        });
    prop_oneof![
        4 => modified.clone(),
        1 => (
            proptest::option::of(modified.clone()),
            proptest::option::of(modified)
        )
            .prop_map(|(top, bottom)| AttackSpec::hybrid(top, bottom)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// Every configuration permutes the scores: same multiset, so the mean
    /// and every order statistic are untouched.
    #[test]
    fn any_attack_is_a_permutation(
        spec in arb_attack(),
        n in 1usize..60,
        pattern_seed in any::<u64>(),
        score_seed in any::<u64>(),
        attack_seed in any::<u64>(),
        higher in any::<bool>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(pattern_seed);
        let privileged: Vec<bool> = (0..n).map(|_| rng.random()).collect();
        let scores = distinct_scores(n, score_seed);
        let view = prepare_sorted_view(&scores, &privileged, direction_from(higher));
        let shuffled = apply_spec(&view, &spec, attack_seed);

        prop_assert_eq!(shuffled.len(), n);
        let mut before = scores.clone();
        let mut after = shuffled.clone();
        before.sort_by(f64::total_cmp);
        after.sort_by(f64::total_cmp);
        prop_assert_eq!(before, after);
    }
}

proptest! {
    /// Restricted to either group, the attacked ranking preserves the honest
    /// relative order — for all three kernels at any parameter.
    #[test]
    fn within_group_order_is_preserved(
        kernel_choice in 0u8..3,
        param in 0.0..=1.0f64,
        n in 2usize..40,
        pattern_seed in any::<u64>(),
        score_seed in any::<u64>(),
        attack_seed in any::<u64>(),
        higher in any::<bool>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(pattern_seed);
        let privileged: Vec<bool> = (0..n).map(|_| rng.random()).collect();
        let scores = distinct_scores(n, score_seed);
        let view = prepare_sorted_view(&scores, &privileged, direction_from(higher));
        let shuffled = match kernel_choice {
            0 => attack_dominance(&view),
            1 => attack_mixing(&view, param, CoinVariant::Bernoulli, attack_seed),
            _ => attack_swapping(&view, param, false),
        };
        for i in 0..n {
            for j in (i + 1)..n {
                if privileged[i] != privileged[j] {
                    continue;
                }
                prop_assert_eq!(
                    scores[i] > scores[j],
                    shuffled[i] > shuffled[j],
                    "rows {} and {} changed relative order", i, j
                );
            }
        }
    }

    /// Dominance and Swapping only ever move privileged rows toward the
    /// superior end and unprivileged rows away from it.
    #[test]
    fn dominance_and_swapping_move_groups_monotonically(
        use_swapping in any::<bool>(),
        param in 0.0..=1.0f64,
        n in 2usize..40,
        pattern_seed in any::<u64>(),
        score_seed in any::<u64>(),
        higher in any::<bool>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(pattern_seed);
        let privileged: Vec<bool> = (0..n).map(|_| rng.random()).collect();
        let scores = distinct_scores(n, score_seed);
        let direction = direction_from(higher);
        let view = prepare_sorted_view(&scores, &privileged, direction);
        let shuffled = if use_swapping {
            attack_swapping(&view, param, false)
        } else {
            attack_dominance(&view)
        };

        // Rank = how many rows strictly beat this row's score; smaller is
        // more superior under either direction.
        let rank = |values: &[f64], i: usize| -> usize {
            values
                .iter()
                .filter(|&&other| match direction {
                    Direction::HigherIsSuperior => other > values[i],
                    Direction::LowerIsSuperior => other < values[i],
                })
                .count()
        };
        for (i, &is_privileged) in privileged.iter().enumerate() {
            let before = rank(&scores, i);
            let after = rank(&shuffled, i);
            if is_privileged {
                prop_assert!(after <= before, "privileged row {} demoted {} -> {}", i, before, after);
            } else {
                prop_assert!(after >= before, "unprivileged row {} promoted {} -> {}", i, before, after);
            }
        }
    }

    /// Applying Dominance to its own output changes nothing.
    #[test]
    fn dominance_is_idempotent_on_any_pattern(
        n in 1usize..40,
        pattern_seed in any::<u64>(),
        score_seed in any::<u64>(),
        higher in any::<bool>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(pattern_seed);
        let privileged: Vec<bool> = (0..n).map(|_| rng.random()).collect();
        let scores = distinct_scores(n, score_seed);
        let direction = direction_from(higher);
        let once = attack_dominance(&prepare_sorted_view(&scores, &privileged, direction));
        let twice = attack_dominance(&prepare_sorted_view(&once, &privileged, direction));
        prop_assert_eq!(once, twice);
    }
}

/// Reference single bubble pass in sorted (superior-first) coordinates: one
/// top-down scan, swapping whenever an unprivileged occupant sits directly
/// above a privileged one. With `flags_travel`, a swapped-down row can keep
/// descending within the same pass; without it every row moves at most one
/// position.
fn reference_single_pass(sorted_groups: &[bool], flags_travel: bool) -> Vec<usize> {
    let n = sorted_groups.len();
    let mut occupant: Vec<usize> = (0..n).collect();
    let mut flags = sorted_groups.to_vec();
    for i in 0..n.saturating_sub(1) {
        if !flags[i] && flags[i + 1] {
            occupant.swap(i, i + 1);
            if flags_travel {
                flags.swap(i, i + 1);
            }
        }
    }
    occupant
}

/// The exhaustive special-case chain on every group pattern with N <= 8, in
/// both directions: Mixing(1) and Swapping(1) collapse to Dominance, and
/// Swapping(0) is exactly one bubble pass (in both single-step flavors).
#[test]
fn special_case_chain_holds_for_all_small_patterns() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in 1usize..=8 {
        for pattern in 0u32..(1 << n) {
            let privileged: Vec<bool> = (0..n).map(|i| pattern >> i & 1 == 1).collect();
            let scores = distinct_scores(n, u64::from(pattern) * 31 + n as u64);
            for direction in [Direction::HigherIsSuperior, Direction::LowerIsSuperior] {
                let view = prepare_sorted_view(&scores, &privileged, direction);
                let dom = attack_dominance(&view);
                assert_eq!(
                    attack_mixing(&view, 1.0, CoinVariant::Literal, rng.random()),
                    dom
                );
                assert_eq!(
                    attack_mixing(&view, 1.0, CoinVariant::Bernoulli, rng.random()),
                    dom
                );
                assert_eq!(attack_swapping(&view, 1.0, false), dom);

                // Sorted-order coordinates for the reference pass.
                let order: Vec<usize> = {
                    let mut idx: Vec<usize> = (0..n).collect();
                    idx.sort_by(|&a, &b| match direction {
                        Direction::HigherIsSuperior => {
                            scores[b].total_cmp(&scores[a]).then(a.cmp(&b))
                        }
                        Direction::LowerIsSuperior => {
                            scores[a].total_cmp(&scores[b]).then(a.cmp(&b))
                        }
                    });
                    idx
                };
                let sorted_scores: Vec<f64> = order.iter().map(|&i| scores[i]).collect();
                let sorted_groups: Vec<bool> = order.iter().map(|&i| privileged[i]).collect();
                for single_step in [false, true] {
                    let occupant = reference_single_pass(&sorted_groups, !single_step);
                    let mut expected = vec![0.0; n];
                    for (slot, &occ) in occupant.iter().enumerate() {
                        expected[order[occ]] = sorted_scores[slot];
                    }
                    assert_eq!(
                        attack_swapping(&view, 0.0, single_step),
                        expected,
                        "n={n} pattern={pattern:b} single_step={single_step}"
                    );
                }
            }
        }
    }
}
