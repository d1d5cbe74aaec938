//! Value parsers for numeric flags.

use ffa_core::problems::PROBLEM_NAMES;

/// Registry ids accepted by `--problem`.
pub fn problem_names() -> Vec<&'static str> {
    PROBLEM_NAMES.iter().copied().chain(["maxsat"]).collect()
}

/// A positive integer, optionally in scientific notation (`1e7`, `2.5e3`).
/// The expanded value must be an exact integer.
pub fn parse_count(text: &str) -> Result<u64, String> {
    let bad = || format!("{text:?} is not a positive integer count");
    let (mantissa, exp) = match text.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (text, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let shift = exp - frac.len() as i32;
    let digits = if shift >= 0 {
        digits
    } else {
        let cut = digits.len().saturating_sub(shift.unsigned_abs() as usize);
        if digits[cut..].bytes().any(|b| b != b'0') {
            return Err(format!("{text:?} is not an integer"));
        }
        digits[..cut].to_string()
    };
    let mut value: u64 = if digits.is_empty() {
        0
    } else {
        digits
            .parse()
            .map_err(|_| format!("{text:?} is too large"))?
    };
    for _ in 0..shift.max(0) {
        value = value
            .checked_mul(10)
            .ok_or_else(|| format!("{text:?} is too large"))?;
    }
    if value == 0 {
        return Err(format!("{text:?} must be at least 1"));
    }
    Ok(value)
}

/// The factor `k` of a mutation rate `k/s`, written `k` or `k/s`.
pub fn parse_rate_factor(text: &str) -> Result<f64, String> {
    let k: f64 = text
        .strip_suffix("/s")
        .unwrap_or(text)
        .trim()
        .parse()
        .map_err(|_| format!("{text:?} is not a number"))?;
    if k.is_finite() && k > 0.0 {
        Ok(k)
    } else {
        Err(format!("{text:?} must be positive"))
    }
}
