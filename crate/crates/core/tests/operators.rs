//! Distributional checks of the variation operators against closed-form
//! moments and frequencies.

use ffa_core::ops::{binomial, binomial_gt0, crossover, hamming, mutate_exact};
use ffa_core::{BitString, Rng};
use proptest::prelude::*;

const DRAWS: usize = 100_000;

fn bs(s: &str) -> BitString {
    s.parse().unwrap()
}

#[test]
fn binomial_moments() {
    let mut rng = Rng::seed_from_u64(1);
    let xs: Vec<f64> = (0..DRAWS)
        .map(|_| binomial(&mut rng, 100, 0.1).unwrap() as f64)
        .collect();
    let mean = xs.iter().sum::<f64>() / DRAWS as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (DRAWS - 1) as f64;
    // Bin(100, 0.1): mean 10, variance 9.
    let se = (9.0 / DRAWS as f64).sqrt();
    assert!((mean - 10.0).abs() < 3.0 * se, "mean {mean}");
    assert!((var - 9.0).abs() < 0.2, "variance {var}");
    assert!(xs.iter().all(|&x| (0.0..=100.0).contains(&x)));
}

#[test]
fn binomial_gt0_is_conditioned_on_positive() {
    let mut rng = Rng::seed_from_u64(2);
    let mut counts = [0usize; 3];
    for _ in 0..DRAWS {
        counts[binomial_gt0(&mut rng, 2, 0.5).unwrap()] += 1;
    }
    assert_eq!(counts[0], 0);
    let p1 = counts[1] as f64 / DRAWS as f64;
    let p2 = counts[2] as f64 / DRAWS as f64;
    assert!((p1 - 2.0 / 3.0).abs() < 0.01, "{p1}");
    assert!((p2 - 1.0 / 3.0).abs() < 0.01, "{p2}");
    for _ in 0..100 {
        assert_eq!(binomial_gt0(&mut rng, 1, 0.5).unwrap(), 1);
        assert_eq!(binomial_gt0(&mut rng, 10, 1.0).unwrap(), 10);
    }
}

#[test]
fn single_flip_is_uniform() {
    let mut rng = Rng::seed_from_u64(3);
    let x = bs("1111");
    let mut counts = std::collections::HashMap::new();
    for _ in 0..DRAWS {
        *counts
            .entry(mutate_exact(&mut rng, &x, 1).unwrap().to_string())
            .or_insert(0usize) += 1;
    }
    assert_eq!(counts.len(), 4);
    for k in ["0111", "1011", "1101", "1110"] {
        let f = counts[k] as f64 / DRAWS as f64;
        assert!((f - 0.25).abs() < 0.02, "{k}: {f}");
    }
    assert_eq!(x, bs("1111"));
}

#[test]
fn two_flips_cover_all_pairs_uniformly() {
    let mut rng = Rng::seed_from_u64(4);
    let x = BitString::zeros(6);
    let mut counts = std::collections::HashMap::new();
    for _ in 0..DRAWS {
        *counts
            .entry(mutate_exact(&mut rng, &x, 2).unwrap().to_string())
            .or_insert(0usize) += 1;
    }
    assert_eq!(counts.len(), 15);
    for (k, c) in counts {
        let f = c as f64 / DRAWS as f64;
        assert!((f - 1.0 / 15.0).abs() < 0.01, "{k}: {f}");
    }
}

#[test]
fn uniform_crossover_rate_per_position() {
    let mut rng = Rng::seed_from_u64(5);
    let (a, b) = (bs("0000"), bs("1111"));
    let mut ones = [0usize; 4];
    for _ in 0..DRAWS {
        let y = crossover(&mut rng, &a, &b, 0.5).unwrap();
        for (i, one) in ones.iter_mut().enumerate() {
            *one += usize::from(y.get(i));
        }
    }
    for (i, &o) in ones.iter().enumerate() {
        let f = o as f64 / DRAWS as f64;
        assert!((f - 0.5).abs() < 0.01, "position {i}: {f}");
    }
}

#[test]
fn crossover_positions_are_independent() {
    // With c = 0.3, both of a pair of differing positions come from x2 with
    // probability 0.09.
    let mut rng = Rng::seed_from_u64(6);
    let (a, b) = (bs("00"), bs("11"));
    let both = (0..DRAWS)
        .filter(|_| crossover(&mut rng, &a, &b, 0.3).unwrap() == b)
        .count() as f64
        / DRAWS as f64;
    assert!((both - 0.09).abs() < 0.005, "{both}");
}

#[test]
fn hamming_examples() {
    assert_eq!(hamming(&bs("0000"), &bs("0000")).unwrap(), 0);
    assert_eq!(hamming(&bs("0000"), &bs("1111")).unwrap(), 4);
    assert_eq!(hamming(&bs("0101"), &bs("0011")).unwrap(), 2);
    assert!(hamming(&bs("01"), &bs("011")).is_err());
}

#[test]
fn equal_seeds_give_equal_operator_outputs() {
    let run = |seed| {
        let mut rng = Rng::seed_from_u64(seed);
        let x = BitString::random(&mut rng, 300);
        let l = binomial_gt0(&mut rng, 300, 0.02).unwrap();
        let y = mutate_exact(&mut rng, &x, l).unwrap();
        let z = crossover(&mut rng, &x, &y, 0.4).unwrap();
        (x, y, z)
    };
    assert_eq!(run(9), run(9));
    assert_ne!(run(9), run(10));
}

fn bits() -> impl Strategy<Value = BitString> {
    prop::collection::vec(any::<bool>(), 1..200).prop_map(|v| BitString::from_bools(&v))
}

proptest! {
    #[test]
    fn mutation_distance_is_exact(x in bits(), seed: u64, frac in 0.0f64..1.0) {
        let l = 1 + ((x.len() - 1) as f64 * frac) as usize;
        let mut rng = Rng::seed_from_u64(seed);
        let y = mutate_exact(&mut rng, &x, l).unwrap();
        prop_assert_eq!(hamming(&x, &y).unwrap(), l);
        prop_assert_ne!(y, x);
    }

    #[test]
    fn crossover_of_a_string_with_itself_is_identity(x in bits(), seed: u64, c in 0.0f64..=1.0) {
        let mut rng = Rng::seed_from_u64(seed);
        prop_assert_eq!(crossover(&mut rng, &x, &x, c).unwrap(), x);
    }

    #[test]
    fn crossover_only_takes_parent_genes(x in bits(), seed: u64, c in 0.0f64..=1.0) {
        let mut rng = Rng::seed_from_u64(seed);
        let y = BitString::random(&mut rng, x.len());
        let z = crossover(&mut rng, &x, &y, c).unwrap();
        for i in 0..x.len() {
            prop_assert!(z.get(i) == x.get(i) || z.get(i) == y.get(i));
        }
    }

    #[test]
    fn binomials_stay_in_range(s in 1usize..500, p in 0.0f64..=1.0, seed: u64) {
        let mut rng = Rng::seed_from_u64(seed);
        prop_assert!(binomial(&mut rng, s, p).unwrap() <= s);
        if p > 0.0 {
            let l = binomial_gt0(&mut rng, s, p).unwrap();
            prop_assert!((1..=s).contains(&l));
        }
    }

    #[test]
    fn display_parse_round_trip(x in bits()) {
        prop_assert_eq!(x.to_string().parse::<BitString>().unwrap(), x);
    }
}
