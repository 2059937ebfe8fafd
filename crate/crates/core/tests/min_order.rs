//! The min-order dealer and the direct MtBE dealer induce the same game
//! distribution, checked by exact enumeration on tiny decks.

mod common;

use card_guessing::dealers::{EpochParams, Schedule};
use card_guessing::engine::chacha_from_key;
use card_guessing::guessers::GuesserSpec;

use common::{direct_distribution, min_order_distribution, same_distribution, Extreme};

fn schedules() -> Vec<Schedule> {
    vec![
        Schedule::contiguous(4, 3, 2, 1, 1).unwrap(),
        Schedule::contiguous(5, 4, 2, 2, 1).unwrap(),
        Schedule::contiguous(5, 3, 1, 1, 2).unwrap(),
        Schedule::contiguous(6, 4, 1, 1, 3).unwrap(),
        Schedule::new(6, 5, vec![EpochParams::new(4, 2, 2).unwrap()], 1).unwrap(),
    ]
}

#[test]
fn extreme_guessers_match_exactly() {
    for s in schedules() {
        for largest in [false, true] {
            let a = direct_distribution(&s, || Extreme::new(s.n, largest));
            let b = min_order_distribution(&s, || Extreme::new(s.n, largest));
            assert!(same_distribution(&a, &b), "schedule {s:?}, largest={largest}");
        }
    }
}

#[test]
fn library_guessers_match_exactly() {
    let s = Schedule::contiguous(4, 3, 1, 1, 2).unwrap();
    let specs = [
        GuesserSpec::Following { delta: 1.0 },
        GuesserSpec::Subset { m: 2 },
        GuesserSpec::Memoryless { card: 2 },
    ];
    for spec in specs {
        let make = || spec.build(4, &mut chacha_from_key(9)).unwrap();
        let a = direct_distribution(&s, make);
        let b = min_order_distribution(&s, make);
        assert!(same_distribution(&a, &b), "{}", spec.name());
    }
}

#[test]
fn back_moves_change_the_distribution() {
    // Sanity check on the harness: with and without back moves the games differ.
    let with = Schedule::contiguous(5, 4, 2, 2, 1).unwrap();
    let without = Schedule::contiguous(5, 4, 2, 0, 1).unwrap();
    let a = direct_distribution(&with, || Extreme::new(5, false));
    let b = direct_distribution(&without, || Extreme::new(5, false));
    assert_ne!(a, b);
}
