//! DIMACS CNF input and canonical output.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::clause::{Clause, ClauseSet, Literal};
use crate::error::{Error, Result};

/// Parses DIMACS CNF. Comment lines (`c ...`) are skipped, duplicate literals
/// and duplicate clauses are merged, tautological clauses are rejected.
pub fn parse_dimacs(text: &[u8]) -> Result<ClauseSet> {
    let text = std::str::from_utf8(text).map_err(|e| Error::Parse {
        line: 0,
        message: format!("input is not UTF-8: {e}"),
    })?;
    let mut header_seen = false;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut current_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header_seen {
                return Err(parse_err(line_no, "duplicate problem line"));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let valid = fields.len() == 4
                && fields[0] == "p"
                && fields[1] == "cnf"
                && fields[2].parse::<u32>().is_ok()
                && fields[3].parse::<u64>().is_ok();
            if !valid {
                return Err(parse_err(line_no, format!("malformed header `{line}`")));
            }
            header_seen = true;
            continue;
        }
        if !header_seen {
            return Err(parse_err(line_no, "clause data before `p cnf` header"));
        }
        if line.starts_with('%') {
            // SATLIB end marker
            break;
        }
        for tok in line.split_whitespace() {
            let x: i32 = tok
                .parse()
                .map_err(|_| parse_err(line_no, format!("invalid literal `{tok}`")))?;
            if current.is_empty() {
                current_line = line_no;
            }
            match Literal::from_dimacs(x) {
                Some(lit) => current.push(lit),
                None => {
                    if tok.starts_with('-') {
                        return Err(parse_err(line_no, "literal 0 inside clause body"));
                    }
                    let lits = std::mem::take(&mut current);
                    let clause = Clause::new(lits).map_err(|e| match e {
                        Error::Clash(variable) => Error::Tautology {
                            line: current_line,
                            variable,
                        },
                        other => other,
                    })?;
                    clauses.push(clause);
                }
            }
        }
    }
    if !header_seen {
        return Err(parse_err(0, "missing `p cnf` header"));
    }
    if !current.is_empty() {
        return Err(parse_err(current_line, "unterminated clause at end of input"));
    }
    Ok(ClauseSet::new(clauses))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Canonical DIMACS text: header with the maximal variable index, literals
/// sorted by variable (negative first), clauses in lexicographic order.
pub fn emit_dimacs(f: &ClauseSet) -> String {
    let max_var = f.max_variable().map_or(0, |v| v.0);
    let mut out = format!("p cnf {} {}\n", max_var, f.c());
    for c in f {
        for l in c.iter() {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

/// SHA-256 of the canonical DIMACS text, hex encoded.
pub fn dimacs_hash(f: &ClauseSet) -> String {
    hex::encode(Sha256::digest(emit_dimacs(f).as_bytes()))
}
