//! DIMACS CNF input and the MAX-SAT objective (number of false clauses).

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::bits::BitString;
use crate::error::{invalid, Error, Result};
use crate::problems::Problem;

/// A CNF formula. Literal `v > 0` is variable `v`, `-v` its negation.
/// Duplicate literals and tautologies are kept as read.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        if num_vars == 0 {
            return invalid("formula without variables");
        }
        for (k, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return invalid(format!("clause {k} is empty"));
            }
            if let Some(&lit) = clause
                .iter()
                .find(|l| l.unsigned_abs() as usize > num_vars || **l == 0)
            {
                return invalid(format!("literal {lit} out of range 1..={num_vars}"));
            }
        }
        Ok(Self { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// One clause per line, preceded by the `p cnf` header.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                let _ = write!(out, "{lit} ");
            }
            out.push_str("0\n");
        }
        out
    }
}

impl FromStr for CnfFormula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_dimacs(s.as_bytes())
    }
}

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        message: message.into(),
    })
}

/// Reads a DIMACS CNF stream.
///
/// Comment lines (`c ...`) are skipped, and everything from a line starting
/// with `%` on is ignored (the SATLib trailer). Clauses may span lines.
pub fn parse_dimacs<R: Read>(reader: R) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut line_no = 0;
    for line in BufReader::new(reader).lines() {
        line_no += 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return parse_err(line_no, "duplicate header");
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", v, c] => v.parse::<usize>().ok().zip(c.parse::<usize>().ok()),
                _ => None,
            };
            match parsed {
                Some((v, c)) if v > 0 => header = Some((v, c)),
                _ => return parse_err(line_no, format!("malformed header {line:?}")),
            }
            continue;
        }
        let Some((num_vars, _)) = header else {
            return parse_err(line_no, "clause data before the 'p cnf' header");
        };
        for token in line.split_whitespace() {
            let lit: i64 = match token.parse() {
                Ok(v) => v,
                Err(_) => return parse_err(line_no, format!("not an integer: {token:?}")),
            };
            if lit == 0 {
                if current.is_empty() {
                    return parse_err(line_no, "empty clause");
                }
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > num_vars {
                return parse_err(
                    line_no,
                    format!("literal {lit} out of range 1..={num_vars}"),
                );
            } else {
                current.push(lit as i32);
            }
        }
    }
    let Some((num_vars, num_clauses)) = header else {
        return parse_err(line_no, "missing 'p cnf' header");
    };
    if !current.is_empty() {
        return parse_err(line_no, "unterminated final clause");
    }
    if clauses.len() != num_clauses {
        return parse_err(
            line_no,
            format!(
                "header declares {num_clauses} clauses, found {}",
                clauses.len()
            ),
        );
    }
    Ok(CnfFormula { num_vars, clauses })
}

/// All `*.cnf` files of a directory, parsed and sorted by file name.
pub fn load_cnf_dir(dir: &Path) -> Result<Vec<(String, CnfFormula)>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "cnf"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            let formula = parse_dimacs(fs::File::open(&p)?).map_err(|e| match e {
                Error::Parse { line, message } => Error::Parse {
                    line,
                    message: format!("{name}: {message}"),
                },
                other => other,
            })?;
            Ok((name, formula))
        })
        .collect()
}

/// MAX-SAT as a minimization problem: the number of unsatisfied clauses.
#[derive(Clone, Debug)]
pub struct MaxSat {
    label: String,
    num_vars: usize,
    num_clauses: usize,
    // Per clause, one (word index, positive mask, negative mask) entry per
    // word its variables live in; the clause holds iff some entry hits.
    masks: Vec<(u32, u64, u64)>,
    offsets: Vec<usize>,
}

impl MaxSat {
    pub fn new(label: impl Into<String>, formula: &CnfFormula) -> Self {
        let mut masks: Vec<(u32, u64, u64)> = Vec::new();
        let mut offsets = vec![0];
        for clause in &formula.clauses {
            let start = masks.len();
            for &l in clause {
                let v = (l.unsigned_abs() - 1) as usize;
                let (word, bit) = ((v / 64) as u32, 1u64 << (v % 64));
                let entry = match masks[start..].iter().position(|m| m.0 == word) {
                    Some(i) => &mut masks[start + i],
                    None => {
                        masks.push((word, 0, 0));
                        masks.last_mut().expect("just pushed")
                    }
                };
                if l > 0 {
                    entry.1 |= bit;
                } else {
                    entry.2 |= bit;
                }
            }
            offsets.push(masks.len());
        }
        Self {
            label: label.into(),
            num_vars: formula.num_vars,
            num_clauses: formula.clauses.len(),
            masks,
            offsets,
        }
    }

    fn count_false(&self, x: &BitString) -> u64 {
        let words = x.words();
        if words.len() == 1 {
            // Every clause is a single entry; this loop vectorizes.
            let v = words[0];
            return self
                .masks
                .iter()
                .map(|&(_, pos, neg)| u64::from((v & pos) | (!v & neg) == 0))
                .sum();
        }
        self.offsets
            .windows(2)
            .filter(|w| {
                !self.masks[w[0]..w[1]].iter().any(|&(i, pos, neg)| {
                    let v = words[i as usize];
                    (v & pos) | (!v & neg) != 0
                })
            })
            .count() as u64
    }
}

/// Number of clauses of `formula` that `x` leaves false.
pub fn maxsat_eval(formula: &CnfFormula, x: &BitString) -> Result<u64> {
    if x.len() != formula.num_vars {
        return invalid(format!(
            "assignment of length {} for {} variables",
            x.len(),
            formula.num_vars
        ));
    }
    Ok(MaxSat::new("", formula).count_false(x))
}

impl Problem for MaxSat {
    fn name(&self) -> &str {
        "maxsat"
    }

    fn instance(&self) -> String {
        self.label.clone()
    }

    fn scale(&self) -> usize {
        self.num_vars
    }

    fn upper_bound(&self) -> u64 {
        self.num_clauses as u64
    }

    fn evaluate(&self, x: &BitString) -> u64 {
        self.count_false(x)
    }
}
