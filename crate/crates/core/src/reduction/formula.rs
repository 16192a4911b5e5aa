use std::fmt::Write as _;

use crate::error::{FormatError, ReductionError};

/// Brute-force limit on the number of variables.
pub const MAX_VARIABLES: usize = 24;

/// A NAE-3-SAT formula. Literals are signed 1-based variable indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nae3SatFormula {
    variable_count: usize,
    clauses: Vec<[i64; 3]>,
}

impl Nae3SatFormula {
    pub fn new(variable_count: usize, clauses: Vec<Vec<i64>>) -> Result<Self, ReductionError> {
        let mut out = Vec::with_capacity(clauses.len());
        for (i, c) in clauses.into_iter().enumerate() {
            let lits: [i64; 3] =
                c.as_slice()
                    .try_into()
                    .map_err(|_| ReductionError::ClauseArity {
                        clause: i + 1,
                        got: c.len(),
                    })?;
            for &l in &lits {
                if l == 0 || l.unsigned_abs() as usize > variable_count {
                    return Err(ReductionError::VariableOutOfRange {
                        clause: i + 1,
                        var: l,
                        n: variable_count,
                    });
                }
            }
            out.push(lits);
        }
        Ok(Nae3SatFormula {
            variable_count,
            clauses: out,
        })
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn clauses(&self) -> &[[i64; 3]] {
        &self.clauses
    }

    /// Clauses containing some variable together with its negation. They
    /// are always not-all-equal; kept, but worth reporting.
    pub fn mixed_clauses(&self) -> Vec<usize> {
        self.clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| c.iter().any(|&l| c.contains(&-l)))
            .map(|(i, _)| i)
            .collect()
    }

    /// Occurrences of literal `lit` over all clauses.
    pub fn occurrences(&self, lit: i64) -> usize {
        self.clauses.iter().flatten().filter(|&&l| l == lit).count()
    }

    /// `assignment[v]` is the value of variable `v + 1`.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        let value = |l: i64| assignment[l.unsigned_abs() as usize - 1] == (l > 0);
        self.clauses.iter().all(|c| {
            let vals = c.map(value);
            vals.contains(&true) && vals.contains(&false)
        })
    }

    /// DIMACS-style text: `p cnf <n> <m>` then `l1 l2 l3 0` per clause.
    pub fn parse_dimacs(text: &str) -> Result<Self, ReductionError> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut pending: Vec<i64> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.first() {
                None | Some(&"c") | Some(&"%") => continue,
                Some(&"p") => {
                    let parsed = match toks.as_slice() {
                        ["p", "cnf", n, m] => n.parse().ok().zip(m.parse().ok()),
                        _ => None,
                    };
                    header = Some(parsed.ok_or_else(|| FormatError::MalformedHeader {
                        line: line_no,
                        msg: "expected `p cnf <vars> <clauses>`".into(),
                    })?);
                }
                Some(_) => {
                    if header.is_none() {
                        return Err(FormatError::MissingHeader.into());
                    }
                    for tok in toks {
                        let l: i64 = tok.parse().map_err(|_| FormatError::MalformedLine {
                            line: line_no,
                            msg: format!("expected a literal, got `{tok}`"),
                        })?;
                        if l == 0 {
                            clauses.push(std::mem::take(&mut pending));
                        } else {
                            pending.push(l);
                        }
                    }
                }
            }
        }
        let (n, m) = header.ok_or(FormatError::MissingHeader)?;
        if !pending.is_empty() {
            clauses.push(pending);
        }
        if clauses.len() != m {
            return Err(FormatError::CountMismatch {
                what: "clauses",
                expected: m,
                found: clauses.len(),
            }
            .into());
        }
        Self::new(n, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.variable_count, self.clauses.len());
        for c in &self.clauses {
            writeln!(out, "{} {} {} 0", c[0], c[1], c[2]).unwrap();
        }
        out
    }
}

/// A satisfying assignment (the first in binary counting order, variable 1
/// as the lowest bit), or `None`.
pub fn nae_satisfiable(f: &Nae3SatFormula) -> Result<Option<Vec<bool>>, ReductionError> {
    let n = f.variable_count();
    if n > MAX_VARIABLES {
        return Err(ReductionError::TooManyVariables {
            got: n,
            cap: MAX_VARIABLES,
        });
    }
    let mut assignment = vec![false; n];
    for bits in 0u32..(1u32 << n) {
        for (v, a) in assignment.iter_mut().enumerate() {
            *a = bits >> v & 1 == 1;
        }
        if f.satisfied_by(&assignment) {
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}
