use crate::bits::BitString;
use crate::error::{invalid, Result};

use super::Problem;

pub fn onemax(x: &BitString) -> u64 {
    (x.len() - x.count_ones()) as u64
}

pub fn leadingones(x: &BitString) -> u64 {
    let mut prefix = 0usize;
    for &w in x.words() {
        let t = w.trailing_ones() as usize;
        prefix += t;
        if t < 64 {
            break;
        }
    }
    (x.len() - prefix.min(x.len())) as u64
}

pub fn twomax(x: &BitString) -> u64 {
    let (s, ones) = (x.len(), x.count_ones());
    if ones == s {
        0
    } else {
        (1 + s - ones.max(s - ones)) as u64
    }
}

pub fn trap(x: &BitString) -> u64 {
    let (s, ones) = (x.len(), x.count_ones());
    if ones == 0 {
        0
    } else {
        (s - ones + 1) as u64
    }
}

fn check_width(s: usize, w: u64) -> Result<()> {
    if w > 1 && (w as usize) < s {
        Ok(())
    } else {
        invalid(format!("width {w} not in (1, {s})"))
    }
}

#[inline]
fn jump_value(s: usize, w: u64, ones: usize) -> u64 {
    if ones == s || ones + w as usize <= s {
        (s - ones) as u64
    } else {
        w + ones as u64
    }
}

#[inline]
fn plateau_value(s: usize, w: u64, ones: usize) -> u64 {
    if ones == s || ones + w as usize <= s {
        (s - ones) as u64
    } else {
        w
    }
}

pub fn jump(x: &BitString, w: u64) -> Result<u64> {
    check_width(x.len(), w)?;
    Ok(jump_value(x.len(), w, x.count_ones()))
}

pub fn plateau(x: &BitString, w: u64) -> Result<u64> {
    check_width(x.len(), w)?;
    Ok(plateau_value(x.len(), w, x.count_ones()))
}

/// `s(s+1)/2 - sum of i * x_i` with 1-based `i`.
pub fn linear_harmonic(x: &BitString) -> u64 {
    let s = x.len() as u64;
    let weight: u64 = x.ones_indices().map(|i| i as u64 + 1).sum();
    s * (s + 1) / 2 - weight
}

macro_rules! simple_problem {
    ($ty:ident, $name:literal, $eval:ident, |$s:ident| $ub:expr) => {
        #[derive(Clone, Debug)]
        pub struct $ty {
            scale: usize,
        }

        impl $ty {
            pub fn new(scale: usize) -> Self {
                Self { scale }
            }
        }

        impl Problem for $ty {
            fn name(&self) -> &str {
                $name
            }

            fn instance(&self) -> String {
                format!("s={}", self.scale)
            }

            fn scale(&self) -> usize {
                self.scale
            }

            fn upper_bound(&self) -> u64 {
                let $s = self.scale as u64;
                $ub
            }

            fn evaluate(&self, x: &BitString) -> u64 {
                $eval(x)
            }
        }
    };
}

simple_problem!(OneMax, "onemax", onemax, |s| s);
simple_problem!(LeadingOnes, "leadingones", leadingones, |s| s);
simple_problem!(TwoMax, "twomax", twomax, |s| s);
simple_problem!(Trap, "trap", trap, |s| s);
simple_problem!(LinearHarmonic, "linharm", linear_harmonic, |s| s * (s + 1)
    / 2);

#[derive(Clone, Debug)]
pub struct Jump {
    scale: usize,
    width: u64,
}

impl Jump {
    pub fn new(scale: usize, width: u64) -> Result<Self> {
        check_width(scale, width)?;
        Ok(Self { scale, width })
    }
}

impl Problem for Jump {
    fn name(&self) -> &str {
        "jump"
    }

    fn instance(&self) -> String {
        format!("s={},w={}", self.scale, self.width)
    }

    fn scale(&self) -> usize {
        self.scale
    }

    fn upper_bound(&self) -> u64 {
        self.scale as u64 + self.width - 1
    }

    fn evaluate(&self, x: &BitString) -> u64 {
        jump_value(self.scale, self.width, x.count_ones())
    }
}

#[derive(Clone, Debug)]
pub struct Plateau {
    scale: usize,
    width: u64,
}

impl Plateau {
    pub fn new(scale: usize, width: u64) -> Result<Self> {
        check_width(scale, width)?;
        Ok(Self { scale, width })
    }
}

impl Problem for Plateau {
    fn name(&self) -> &str {
        "plateau"
    }

    fn instance(&self) -> String {
        format!("s={},w={}", self.scale, self.width)
    }

    fn scale(&self) -> usize {
        self.scale
    }

    fn upper_bound(&self) -> u64 {
        self.scale as u64
    }

    fn evaluate(&self, x: &BitString) -> u64 {
        plateau_value(self.scale, self.width, x.count_ones())
    }
}
