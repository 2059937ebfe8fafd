//! Invariants over random parameters.

use proptest::prelude::*;
use rand::seq::SliceRandom;

use card_guessing::codec::{decode_o, decode_u, encode_o, encode_u, Gamma};
use card_guessing::dealers::{DealerSpec, EpochDealer, MinOrderDealer, MinOrderRandomness, Schedule, StaticOrder};
use card_guessing::engine::{
    chacha_from_key, derive_streams, play_game, Card, Dealer, GameConfig, Guesser, Turn,
};
use card_guessing::guessers::{FollowingSubsets, GuesserSpec};

fn any_guesser() -> impl Strategy<Value = GuesserSpec> {
    prop_oneof![
        (1u32..=4).prop_map(|card| GuesserSpec::Memoryless { card }),
        Just(GuesserSpec::Perfect),
        (1usize..=4).prop_map(|m| GuesserSpec::Subset { m }),
        (1usize..=3).prop_map(|k| GuesserSpec::PowerSum { k }),
    ]
}

fn fits(g: &GuesserSpec, n: usize) -> bool {
    g.build(n, &mut chacha_from_key(0)).is_ok()
}

/// Contiguous schedules with u = ell that fit in the deck.
fn any_schedule() -> impl Strategy<Value = Schedule> {
    (1usize..=3, 1usize..=3, 0usize..=10, 0usize..=10).prop_map(|(ell, d, extra_k1, extra_n)| {
        let k1 = (d + 1) * ell + extra_k1;
        Schedule::contiguous(k1 + extra_n, k1, ell, ell, d).unwrap()
    })
}

fn any_dealer(n: usize) -> impl Strategy<Value = DealerSpec> {
    let epochs = Schedule::contiguous(n, n / 2, 1, 1, 2).ok();
    let mut choices = vec![
        DealerSpec::Shuffle,
        DealerSpec::Static(StaticOrder::Random),
        DealerSpec::Static(StaticOrder::Reverse),
        DealerSpec::StaticAdversarial,
    ];
    if let Some(s) = epochs {
        choices.push(DealerSpec::Epochs(s.clone()));
        choices.push(DealerSpec::EpochsMinOrder(s));
    }
    proptest::sample::select(choices)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn games_are_permutations_and_scores_are_consistent(
        (n, dealer) in (4usize..=40).prop_flat_map(|n| (Just(n), any_dealer(n))),
        guesser in any_guesser(),
        seed in any::<u64>(),
    ) {
        prop_assume!(fits(&guesser, n));
        prop_assume!(dealer != DealerSpec::StaticAdversarial || guesser.is_deterministic());
        let streams = derive_streams(seed, 0);
        let mut g = guesser.build(n, &mut streams.guesser_long_lived.clone()).unwrap();
        let mut d = dealer.build(n, &guesser, 0, streams.dealer.clone()).unwrap();
        let m = g.declared_bits();
        let tr = play_game(&mut g, &mut d, GameConfig { n, m, master_seed: seed }, &streams, true).unwrap();
        let mut draws: Vec<Card> = tr.turns.iter().map(|r| r.draw).collect();
        draws.sort_unstable();
        prop_assert_eq!(draws, (1..=n as Card).collect::<Vec<_>>());
        for r in &tr.turns {
            prop_assert!(!r.correct || r.reasonable);
        }
        prop_assert!(tr.peak_state_bits <= m);
    }

    #[test]
    fn back_set_never_exceeds_u(schedule in any_schedule(), guesses in prop::collection::vec(1u32..=64, 64), seed in any::<u64>()) {
        let n = schedule.n;
        let mut d = EpochDealer::new(schedule.clone(), chacha_from_key(seed));
        for t in 1..=n {
            let turn = Turn::new(t, n);
            d.commit(turn).unwrap();
            let guess = (guesses[t % guesses.len()] - 1) % n as Card + 1;
            d.observe_guess(turn, guess);
            let cap = d.epoch().map_or(0, |i| schedule.epochs[i].u);
            prop_assert!(d.back_len() <= cap);
        }
    }

    #[test]
    fn min_order_back_set_never_exceeds_u(schedule in any_schedule(), seed in any::<u64>()) {
        let n = schedule.n;
        let rand = MinOrderRandomness::sample(n, schedule.k1, &mut chacha_from_key(seed));
        let mut d = MinOrderDealer::new(schedule.clone(), rand).unwrap();
        for t in 1..=n {
            let turn = Turn::new(t, n);
            let c = d.commit(turn).unwrap();
            // Guess the card just above the draw, often still drawable.
            d.observe_guess(turn, c % n as Card + 1);
            let cap = d.epoch().map_or(0, |i| schedule.epochs[i].u);
            prop_assert!(d.back_len() <= cap);
        }
    }

    #[test]
    fn ordered_codec_round_trips(
        n in 2usize..=10,
        k_frac in 0.0f64..=1.0,
        a_frac in 0.0f64..=1.0,
        guesser in any_guesser(),
        seed in any::<u64>(),
    ) {
        prop_assume!(fits(&guesser, n));
        let k = ((n as f64 * k_frac) as usize).clamp(1, n);
        let alpha = (k as f64 * a_frac) as usize;
        let mut all: Vec<Card> = (1..=n as Card).collect();
        all.shuffle(&mut chacha_from_key(seed));
        let b = all.split_off(n - k);
        let gamma = Gamma::new(guesser, seed, seed.rotate_left(7));
        let code = encode_o(&b, &all, &gamma, alpha).unwrap();
        prop_assert_eq!(decode_o(&code, &gamma, alpha, k, n).unwrap(), b);
    }

    #[test]
    fn unordered_codec_round_trips(
        schedule in any_schedule(),
        guesser in any_guesser(),
        i_frac in 0.0f64..1.0,
        a_frac in 0.0f64..=1.0,
        seed in any::<u64>(),
    ) {
        prop_assume!(fits(&guesser, schedule.n));
        let i = 1 + (schedule.epochs.len() as f64 * i_frac) as usize;
        let ell = schedule.epochs[i - 1].ell;
        let alpha = (ell as f64 * a_frac) as usize;
        let gamma = Gamma::new(guesser, seed, !seed);
        let rand = MinOrderRandomness::sample(schedule.n, schedule.k1, &mut chacha_from_key(seed ^ 1));
        let code = encode_u(&gamma, &rand, alpha, i, &schedule).unwrap();
        let d: Vec<Card> = rand.reserved.iter().collect();
        prop_assert_eq!(decode_u(&code, &gamma, &rand.pi, alpha, i, &schedule).unwrap(), d);
    }

    #[test]
    fn following_recovers_each_ranges_missing_card(log_n in 1u32..=7, seed in any::<u64>(), stop_frac in 0.0f64..=1.0) {
        let n = 1usize << log_n;
        let mut order: Vec<Card> = (1..=n as Card).collect();
        order.shuffle(&mut chacha_from_key(seed));
        let stop = (n as f64 * stop_frac) as usize;
        let mut g = FollowingSubsets::new(n, 1.0).unwrap();
        for (t, &c) in order[..stop].iter().enumerate() {
            g.observe(Turn::new(t + 1, n), c);
        }
        for r in g.ranges() {
            let unseen: Vec<Card> = order[stop..].iter().copied().filter(|&c| c <= r.w).collect();
            if unseen.len() == 1 {
                prop_assert_eq!(r.missing(), Some(unseen[0]));
            } else {
                prop_assert_eq!(r.missing(), None);
            }
        }
    }
}
