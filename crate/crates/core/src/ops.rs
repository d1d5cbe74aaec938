//! Variation operators: `Bin`, `Bin>0`, `mut_l` and `cross_c`.
//!
//! The public functions validate their arguments. The algorithms call the
//! crate-private variants, whose preconditions hold by construction.

use rand::seq::index;
use rand::Rng as _;
use rand_distr::{Binomial, Distribution};

use crate::bits::BitString;
use crate::error::{invalid, Result};
use crate::rng::Rng;

fn check_probability(p: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        invalid(format!("{what} {p} not in [0, 1]"))
    }
}

/// Samples `Bin(s, p)`.
pub fn binomial(rng: &mut Rng, s: usize, p: f64) -> Result<usize> {
    if s == 0 {
        return invalid("binomial with zero trials");
    }
    check_probability(p, "success probability")?;
    Ok(sample_binomial(rng, s, p))
}

/// Samples `Bin(s, p)` conditioned on a positive outcome by rejection.
pub fn binomial_gt0(rng: &mut Rng, s: usize, p: f64) -> Result<usize> {
    if s == 0 {
        return invalid("binomial with zero trials");
    }
    check_probability(p, "success probability")?;
    if p == 0.0 {
        return invalid("Bin>0 with p = 0 never terminates");
    }
    Ok(sample_binomial_gt0(rng, s, p))
}

/// Copy of `x` with exactly `ell` distinct, uniformly chosen bits flipped.
pub fn mutate_exact(rng: &mut Rng, x: &BitString, ell: usize) -> Result<BitString> {
    if ell == 0 || ell > x.len() {
        return invalid(format!(
            "cannot flip {ell} bits of a string of length {}",
            x.len()
        ));
    }
    Ok(flip_exact(rng, x, ell))
}

/// Uniform crossover taking each gene from `x2` with probability `c`.
pub fn crossover(rng: &mut Rng, x1: &BitString, x2: &BitString, c: f64) -> Result<BitString> {
    if x1.len() != x2.len() {
        return invalid(format!(
            "crossover of strings with lengths {} and {}",
            x1.len(),
            x2.len()
        ));
    }
    check_probability(c, "crossover probability")?;
    Ok(cross(rng, x1, x2, c).child)
}

pub fn hamming(x1: &BitString, x2: &BitString) -> Result<usize> {
    x1.hamming(x2)
}

pub(crate) fn sample_binomial(rng: &mut Rng, s: usize, p: f64) -> usize {
    Binomial::new(s as u64, p)
        .expect("validated binomial parameters")
        .sample(rng) as usize
}

pub(crate) fn sample_binomial_gt0(rng: &mut Rng, s: usize, p: f64) -> usize {
    let dist = Binomial::new(s as u64, p).expect("validated binomial parameters");
    loop {
        let ell = dist.sample(rng) as usize;
        if ell > 0 {
            return ell;
        }
    }
}

pub(crate) fn flip_exact(rng: &mut Rng, x: &BitString, ell: usize) -> BitString {
    let mut y = x.clone();
    for i in index::sample(rng, x.len(), ell) {
        y.flip(i);
    }
    y
}

pub(crate) struct Crossed {
    pub child: BitString,
    pub same_as_first: bool,
    pub same_as_second: bool,
}

/// Genes on which both parents agree are copied unchanged whatever the draw,
/// so one Bernoulli(c) draw per differing position (in ascending index
/// order) yields exactly the per-position distribution.
pub(crate) fn cross(rng: &mut Rng, x1: &BitString, x2: &BitString, c: f64) -> Crossed {
    let mut child = x1.clone();
    let mut took_first = false;
    let mut took_second = false;
    for i in x1.diff_indices(x2) {
        if rng.random_bool(c) {
            child.flip(i);
            took_second = true;
        } else {
            took_first = true;
        }
    }
    Crossed {
        child,
        same_as_first: !took_second,
        same_as_second: !took_first,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn binomial_edge_probabilities() {
        let mut rng = Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(binomial(&mut rng, 10, 0.0).unwrap(), 0);
            assert_eq!(binomial(&mut rng, 10, 1.0).unwrap(), 10);
            assert_eq!(binomial_gt0(&mut rng, 10, 1.0).unwrap(), 10);
            assert_eq!(binomial_gt0(&mut rng, 1, 0.5).unwrap(), 1);
        }
    }

    #[test]
    fn binomial_rejects_bad_arguments() {
        let mut rng = Rng::seed_from_u64(1);
        assert!(binomial(&mut rng, 10, -0.1).is_err());
        assert!(binomial(&mut rng, 10, 1.5).is_err());
        assert!(binomial(&mut rng, 0, 0.5).is_err());
        assert!(binomial_gt0(&mut rng, 10, 0.0).is_err());
    }

    #[test]
    fn mutate_exact_flips_everything_when_asked() {
        let mut rng = Rng::seed_from_u64(2);
        assert_eq!(mutate_exact(&mut rng, &bs("0000"), 4).unwrap(), bs("1111"));
        assert!(mutate_exact(&mut rng, &bs("0000"), 0).is_err());
        assert!(mutate_exact(&mut rng, &bs("0000"), 5).is_err());
    }

    #[test]
    fn crossover_extremes_and_errors() {
        let mut rng = Rng::seed_from_u64(3);
        let (a, b) = (bs("0000"), bs("1111"));
        assert_eq!(crossover(&mut rng, &a, &b, 0.0).unwrap(), a);
        assert_eq!(crossover(&mut rng, &a, &b, 1.0).unwrap(), b);
        assert!(crossover(&mut rng, &a, &bs("111"), 0.5).is_err());
        assert!(crossover(&mut rng, &a, &b, 1.1).is_err());
    }

    #[test]
    fn cross_reports_clones() {
        let mut rng = Rng::seed_from_u64(4);
        let (a, b) = (bs("0011"), bs("0101"));
        for _ in 0..200 {
            let r = cross(&mut rng, &a, &b, 0.5);
            assert_eq!(r.same_as_first, r.child == a);
            assert_eq!(r.same_as_second, r.child == b);
        }
    }
}
