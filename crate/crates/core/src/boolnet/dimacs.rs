use super::{BoolNetwork, CircuitBuilder, NetworkError, Source, VarId};

/// Parses DIMACS CNF and lowers it to an open Nand network.
///
/// CNF variable `k` becomes free input `k - 1`. Each clause becomes an OR
/// tree over its literals, negations sharing one inverter per variable, and
/// the clause outputs are AND-reduced into `y`. An empty clause lowers to
/// constant 0, an empty formula to constant 1.
pub fn parse_dimacs(text: &str) -> Result<BoolNetwork, NetworkError> {
    let syntax = |line: usize, col: usize, msg: String| NetworkError::Syntax { line, col, msg };

    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = Vec::new();

    'lines: for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        let indent = raw.len() - trimmed.len();
        if trimmed.starts_with('p') {
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if header.is_some() {
                return Err(syntax(line_no, indent + 1, "duplicate problem line".into()));
            }
            let parsed = match fields.as_slice() {
                ["p", "cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                _ => None,
            };
            header =
                Some(parsed.ok_or_else(|| syntax(line_no, indent + 1, "expected `p cnf <vars> <clauses>`".into()))?);
            continue;
        }
        let Some((n_vars, _)) = header else {
            return Err(syntax(line_no, indent + 1, "clause before the problem line".into()));
        };
        let mut offset = 0;
        for word in raw.split_whitespace() {
            let col = raw[offset..].find(word).map_or(0, |i| offset + i) + 1;
            offset = col - 1 + word.len();
            if word.starts_with('%') {
                break 'lines;
            }
            let lit: i64 = word
                .parse()
                .map_err(|_| syntax(line_no, col, format!("expected an integer literal, found `{word}`")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if lit.unsigned_abs() as usize > n_vars {
                return Err(NetworkError::VarOutOfRange {
                    var: lit.unsigned_abs() as usize - 1,
                    n_vars,
                });
            }
            current.push(lit);
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    let Some((n_vars, n_clauses)) = header else {
        return Err(syntax(1, 1, "missing `p cnf` problem line".into()));
    };
    if clauses.len() != n_clauses {
        return Err(syntax(
            text.lines().count().max(1),
            1,
            format!("header declares {n_clauses} clauses, found {}", clauses.len()),
        ));
    }

    let mut b = CircuitBuilder::new(n_vars.max(1));
    let mut flags = Vec::with_capacity(clauses.len());
    for clause in &clauses {
        let mut lits = clause.iter().map(|&l| {
            let v = VarId(l.unsigned_abs() as usize - 1);
            (v, l < 0)
        });
        let flag = match lits.next() {
            None => b.constant_false(),
            Some((v, neg)) => {
                let first = if neg { b.not(v) } else { v };
                lits.fold(first, |acc, (v, neg)| {
                    let lit = if neg { b.not(v) } else { v };
                    b.or(acc, lit)
                })
            }
        };
        flags.push(flag);
    }
    let y = b.and_all(&flags);
    Ok(b.finish(y)?.with_source(Source::Dimacs {
        vars: n_vars,
        clauses: n_clauses,
    }))
}
