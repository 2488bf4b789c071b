//! Line-oriented network format.
//!
//! ```text
//! # comment
//! vars 6
//! form loop          # optional; defaults to open when `output` is given
//! output 5           # open form only
//! nand 0 1 -> 2
//! wire 2 3
//! pin 4 1
//! unknown 0 1        # role declarations, checked against inferred roles
//! pinned 4
//! ```

use super::{BoolNetwork, Constraint, Form, NetworkError, Role, VarId};

struct Token<'a> {
    col: usize,
    text: &'a str,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    col: s + 1,
                    text: &line[s..i],
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            col: s + 1,
            text: &line[s..],
        });
    }
    out
}

struct Parser {
    line: usize,
    n_vars: Option<usize>,
}

impl Parser {
    fn err(&self, col: usize, msg: impl Into<String>) -> NetworkError {
        NetworkError::Syntax {
            line: self.line,
            col,
            msg: msg.into(),
        }
    }

    fn number(&self, tok: &Token<'_>) -> Result<usize, NetworkError> {
        tok.text.parse().map_err(|_| {
            self.err(
                tok.col,
                format!("expected a non-negative integer, found `{}`", tok.text),
            )
        })
    }

    fn var(&self, tok: &Token<'_>) -> Result<VarId, NetworkError> {
        let n_vars = self
            .n_vars
            .ok_or_else(|| self.err(tok.col, "variable referenced before the `vars` header"))?;
        let i = self.number(tok)?;
        if i >= n_vars {
            return Err(NetworkError::VarOutOfRange { var: i, n_vars });
        }
        Ok(VarId(i))
    }

    fn arity(&self, toks: &[Token<'_>], n: usize, usage: &str) -> Result<(), NetworkError> {
        if toks.len() != n {
            let col = toks.get(n).map_or(toks[0].col, |t| t.col);
            return Err(self.err(col, format!("expected `{usage}`")));
        }
        Ok(())
    }
}

pub fn parse_network(text: &str) -> Result<BoolNetwork, NetworkError> {
    let mut p = Parser { line: 0, n_vars: None };
    let mut form = None;
    let mut output = None;
    let mut constraints = Vec::new();
    let mut declared: Vec<(VarId, Role)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        p.line = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokenize(line);
        let Some(head) = toks.first() else { continue };
        match head.text {
            "vars" => {
                p.arity(&toks, 2, "vars N")?;
                if p.n_vars.is_some() {
                    return Err(p.err(head.col, "duplicate `vars` header"));
                }
                p.n_vars = Some(p.number(&toks[1])?);
            }
            "form" => {
                p.arity(&toks, 2, "form loop|open")?;
                if form.is_some() {
                    return Err(p.err(head.col, "duplicate `form` line"));
                }
                form = Some(match toks[1].text {
                    "loop" => Form::Loop,
                    "open" => Form::Open,
                    other => return Err(p.err(toks[1].col, format!("unknown form `{other}`"))),
                });
            }
            "output" => {
                p.arity(&toks, 2, "output I")?;
                if output.is_some() {
                    return Err(p.err(head.col, "duplicate `output` line"));
                }
                output = Some(p.var(&toks[1])?);
            }
            "nand" => {
                p.arity(&toks, 5, "nand A B -> C")?;
                if toks[3].text != "->" {
                    return Err(p.err(toks[3].col, "expected `->`"));
                }
                constraints.push(Constraint::Nand {
                    a: p.var(&toks[1])?,
                    b: p.var(&toks[2])?,
                    out: p.var(&toks[4])?,
                });
            }
            "wire" => {
                p.arity(&toks, 3, "wire A B")?;
                constraints.push(Constraint::Wire {
                    a: p.var(&toks[1])?,
                    b: p.var(&toks[2])?,
                });
            }
            "pin" => {
                p.arity(&toks, 3, "pin A 0|1")?;
                let value = match toks[2].text {
                    "0" => false,
                    "1" => true,
                    other => return Err(p.err(toks[2].col, format!("pin value must be 0 or 1, found `{other}`"))),
                };
                constraints.push(Constraint::Pin {
                    var: p.var(&toks[1])?,
                    value,
                });
            }
            "unknown" | "pinned" => {
                if toks.len() < 2 {
                    return Err(p.err(head.col, format!("expected `{} A ...`", head.text)));
                }
                let role = if head.text == "unknown" {
                    Role::UnknownInput
                } else {
                    Role::PinnedInput
                };
                for t in &toks[1..] {
                    declared.push((p.var(t)?, role));
                }
            }
            other => return Err(p.err(head.col, format!("unknown directive `{other}`"))),
        }
    }

    let Some(n_vars) = p.n_vars else {
        return Err(NetworkError::Syntax {
            line: 1,
            col: 1,
            msg: "missing `vars` header".into(),
        });
    };
    let form = form.unwrap_or(if output.is_some() { Form::Open } else { Form::Loop });
    let net = BoolNetwork::new(form, n_vars, constraints, output)?;
    for (var, role) in declared {
        let inferred = net.role(var);
        if inferred != role {
            return Err(NetworkError::RoleMismatch {
                var,
                declared: role,
                inferred,
            });
        }
    }
    Ok(net)
}
