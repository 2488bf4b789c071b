//! Boolean constraint networks built from Nand gates, wires and input pins.
//!
//! Two shapes are supported. A *loop* network is a bare system of
//! simultaneous equations (gates and wires may feed back into each other).
//! An *open* network is an acyclic Nand/Wire circuit from free and pinned
//! inputs to a single output `y`; it is satisfiable when some assignment of
//! the free inputs drives `y` to 1.

mod dimacs;
mod open_form;
mod parse;

pub use dimacs::parse_dimacs;
pub use open_form::{open_form, CircuitBuilder};
pub use parse::parse_network;

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

/// Default cap on the number of enumerated bits in brute-force search.
pub const DEFAULT_VAR_CAP: usize = 24;

/// One Boolean variable, which is also one qubit of the register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// `out = Nand(a, b)`
    Nand { a: VarId, b: VarId, out: VarId },
    /// `a = b`. In an open network the wire copies `a` into `b`.
    Wire { a: VarId, b: VarId },
    /// `var = value`
    Pin { var: VarId, value: bool },
}

impl Constraint {
    pub fn vars(&self) -> Vec<VarId> {
        match *self {
            Constraint::Nand { a, b, out } => vec![a, b, out],
            Constraint::Wire { a, b } => vec![a, b],
            Constraint::Pin { var, .. } => vec![var],
        }
    }

    /// The variable this constraint determines when read as a circuit element.
    pub fn driven(&self) -> VarId {
        match *self {
            Constraint::Nand { out, .. } => out,
            Constraint::Wire { b, .. } => b,
            Constraint::Pin { var, .. } => var,
        }
    }

    /// Whether the constraint holds under the bit lookup `bit`.
    pub fn holds(&self, bit: impl Fn(VarId) -> bool) -> bool {
        match *self {
            Constraint::Nand { a, b, out } => bit(out) == !(bit(a) && bit(b)),
            Constraint::Wire { a, b } => bit(a) == bit(b),
            Constraint::Pin { var, value } => bit(var) == value,
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Constraint::Nand { a, b, out } => write!(f, "nand {a} {b} -> {out}"),
            Constraint::Wire { a, b } => write!(f, "wire {a} {b}"),
            Constraint::Pin { var, value } => write!(f, "pin {var} {}", u8::from(value)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    UnknownInput,
    PinnedInput,
    Internal,
    Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Form {
    Loop,
    Open,
}

/// Where a network came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Source {
    #[default]
    Native,
    /// Lowered from a DIMACS CNF formula with the given header counts.
    Dimacs { vars: usize, clauses: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetworkError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("variable {var} out of range (network has {n_vars} variables)")]
    VarOutOfRange { var: usize, n_vars: usize },
    #[error("variable {0} has more than one driver")]
    DuplicateDriver(VarId),
    #[error("open network has no output variable")]
    MissingOutput,
    #[error("output variable {0} cannot be pinned")]
    PinnedOutput(VarId),
    #[error("nand gate output {0} is also one of its inputs")]
    SelfDrivenGate(VarId),
    #[error("wire {0} -> {0} drives a variable from itself")]
    SelfWire(VarId),
    #[error("open network has a cycle through variable {0}")]
    Cyclic(VarId),
    #[error("variable {var} declared {declared:?} but its constraints make it {inferred:?}")]
    RoleMismatch { var: VarId, declared: Role, inferred: Role },
    #[error("operation requires a {expected:?}-form network")]
    WrongForm { expected: Form },
    #[error("expected {expected} free input bits, got {got}")]
    InputArity { expected: usize, got: usize },
    #[error("brute force over {bits} bits exceeds the cap of {cap}")]
    CapExceeded { bits: usize, cap: usize },
}

/// A full assignment, one bit per variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    pub bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(n: usize) -> Self {
        Self { bits: vec![false; n] }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, var: VarId) -> bool {
        self.bits[var.0]
    }

    /// The first `n` bits, i.e. the restriction to variables `0..n`.
    pub fn truncate(&self, n: usize) -> Assignment {
        Assignment::new(self.bits[..n].to_vec())
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_char(if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolNetwork {
    n_vars: usize,
    constraints: Vec<Constraint>,
    roles: Vec<Role>,
    output: Option<VarId>,
    form: Form,
    source: Source,
    /// Open form only: free variables in ascending order.
    free: Vec<VarId>,
    /// Open form only: gate/wire constraint indices in dependency order.
    schedule: Vec<usize>,
}

impl BoolNetwork {
    /// Validates the constraint list and infers the role of every variable.
    pub fn new(
        form: Form,
        n_vars: usize,
        constraints: Vec<Constraint>,
        output: Option<VarId>,
    ) -> Result<Self, NetworkError> {
        for c in &constraints {
            for v in c.vars() {
                check_range(v, n_vars)?;
            }
        }
        if let Some(y) = output {
            check_range(y, n_vars)?;
        }
        match form {
            Form::Loop => Ok(Self::new_loop(n_vars, constraints, output)),
            Form::Open => Self::new_open(n_vars, constraints, output),
        }
    }

    fn new_loop(n_vars: usize, constraints: Vec<Constraint>, output: Option<VarId>) -> Self {
        let mut roles = vec![Role::UnknownInput; n_vars];
        for c in &constraints {
            if let Constraint::Pin { var, .. } = c {
                roles[var.0] = Role::PinnedInput;
            }
        }
        if let Some(y) = output {
            roles[y.0] = Role::Output;
        }
        Self {
            n_vars,
            constraints,
            roles,
            output,
            form: Form::Loop,
            source: Source::Native,
            free: Vec::new(),
            schedule: Vec::new(),
        }
    }

    fn new_open(n_vars: usize, constraints: Vec<Constraint>, output: Option<VarId>) -> Result<Self, NetworkError> {
        let y = output.ok_or(NetworkError::MissingOutput)?;

        let mut driver: Vec<Option<usize>> = vec![None; n_vars];
        for (i, c) in constraints.iter().enumerate() {
            match *c {
                Constraint::Nand { a, b, out } if out == a || out == b => {
                    return Err(NetworkError::SelfDrivenGate(out));
                }
                Constraint::Wire { a, b } if a == b => return Err(NetworkError::SelfWire(a)),
                _ => {}
            }
            let d = c.driven();
            if driver[d.0].replace(i).is_some() {
                return Err(NetworkError::DuplicateDriver(d));
            }
        }

        let mut roles = vec![Role::UnknownInput; n_vars];
        for (v, d) in driver.iter().enumerate() {
            if let Some(i) = d {
                roles[v] = match constraints[*i] {
                    Constraint::Pin { .. } => Role::PinnedInput,
                    _ => Role::Internal,
                };
            }
        }
        if roles[y.0] == Role::PinnedInput {
            return Err(NetworkError::PinnedOutput(y));
        }
        roles[y.0] = Role::Output;

        let schedule = topo_schedule(n_vars, &constraints, &driver)?;
        let free = (0..n_vars).filter(|&v| driver[v].is_none()).map(VarId).collect();

        Ok(Self {
            n_vars,
            constraints,
            roles,
            output,
            form: Form::Open,
            source: Source::Native,
            free,
            schedule,
        })
    }

    pub fn with_source(mut self, source: Source) -> Self {
        self.source = source;
        self
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn role(&self, v: VarId) -> Role {
        self.roles[v.0]
    }

    pub fn output(&self) -> Option<VarId> {
        self.output
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn source(&self) -> Source {
        self.source
    }

    /// Open form: the variables a caller assigns freely. These are the
    /// unknown inputs, plus the output when nothing drives it.
    pub fn free_vars(&self) -> &[VarId] {
        &self.free
    }

    pub fn vars_with_role(&self, role: Role) -> Vec<VarId> {
        (0..self.n_vars).filter(|&v| self.roles[v] == role).map(VarId).collect()
    }

    fn require(&self, form: Form) -> Result<(), NetworkError> {
        if self.form == form {
            Ok(())
        } else {
            Err(NetworkError::WrongForm { expected: form })
        }
    }

    /// Propagates free-input bits through the circuit in dependency order.
    /// `free_bits[j]` is the value of `free_vars()[j]`.
    pub fn evaluate(&self, free_bits: &[bool]) -> Result<Assignment, NetworkError> {
        self.require(Form::Open)?;
        if free_bits.len() != self.free.len() {
            return Err(NetworkError::InputArity {
                expected: self.free.len(),
                got: free_bits.len(),
            });
        }
        let mut bits = vec![false; self.n_vars];
        for (v, &b) in self.free.iter().zip(free_bits) {
            bits[v.0] = b;
        }
        self.propagate(&mut bits);
        Ok(Assignment::new(bits))
    }

    /// Like [`evaluate`](Self::evaluate), with free input `j` taken from bit
    /// `j` of `index`.
    pub fn evaluate_index(&self, index: u64) -> Result<Assignment, NetworkError> {
        self.require(Form::Open)?;
        let mut bits = vec![false; self.n_vars];
        for (j, v) in self.free.iter().enumerate() {
            bits[v.0] = (index >> j) & 1 == 1;
        }
        self.propagate(&mut bits);
        Ok(Assignment::new(bits))
    }

    fn propagate(&self, bits: &mut [bool]) {
        for &i in &self.schedule {
            match self.constraints[i] {
                Constraint::Nand { a, b, out } => bits[out.0] = !(bits[a.0] && bits[b.0]),
                Constraint::Wire { a, b } => bits[b.0] = bits[a.0],
                Constraint::Pin { var, value } => bits[var.0] = value,
            }
        }
    }

    pub fn constraints_hold(&self, a: &Assignment) -> bool {
        a.len() == self.n_vars && self.constraints.iter().all(|c| c.holds(|v| a.get(v)))
    }

    /// Loop form: every constraint holds. Open form: every constraint holds
    /// and the output is 1.
    pub fn is_solution(&self, a: &Assignment) -> bool {
        if !self.constraints_hold(a) {
            return false;
        }
        match (self.form, self.output) {
            (Form::Open, Some(y)) => a.get(y),
            _ => true,
        }
    }

    /// Number of bits brute force has to enumerate.
    pub fn search_bits(&self) -> usize {
        match self.form {
            Form::Loop => self.n_vars,
            Form::Open => self.free.len(),
        }
    }

    /// Every solution, sorted. Loop networks enumerate all variables; open
    /// networks enumerate the free inputs, since everything else is a
    /// function of them.
    pub fn brute_force_solutions(&self, cap: usize) -> Result<Vec<Assignment>, NetworkError> {
        let bits = self.search_bits();
        if bits > cap || bits >= 64 {
            return Err(NetworkError::CapExceeded { bits, cap });
        }
        let mut out = Vec::new();
        for index in 0..1u64 << bits {
            let a = match self.form {
                Form::Loop => Assignment::new((0..self.n_vars).map(|i| (index >> i) & 1 == 1).collect()),
                Form::Open => self.evaluate_index(index)?,
            };
            if self.is_solution(&a) {
                out.push(a);
            }
        }
        out.sort();
        Ok(out)
    }

    /// Serializes to the line-oriented network format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "vars {}", self.n_vars);
        let _ = writeln!(
            s,
            "form {}",
            match self.form {
                Form::Loop => "loop",
                Form::Open => "open",
            }
        );
        if let Some(y) = self.output {
            let _ = writeln!(s, "output {y}");
        }
        for c in &self.constraints {
            let _ = writeln!(s, "{c}");
        }
        s
    }
}

fn check_range(v: VarId, n_vars: usize) -> Result<(), NetworkError> {
    if v.0 < n_vars {
        Ok(())
    } else {
        Err(NetworkError::VarOutOfRange { var: v.0, n_vars })
    }
}

/// Orders driver constraints so every gate runs after the gates feeding it.
fn topo_schedule(
    n_vars: usize,
    constraints: &[Constraint],
    driver: &[Option<usize>],
) -> Result<Vec<usize>, NetworkError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let mut mark = vec![Mark::New; n_vars];
    let mut order = Vec::with_capacity(constraints.len());

    // iterative DFS: (var, inputs already pushed)
    let mut stack: Vec<(usize, bool)> = Vec::new();
    for root in 0..n_vars {
        if mark[root] != Mark::New {
            continue;
        }
        stack.push((root, false));
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                mark[v] = Mark::Done;
                if let Some(i) = driver[v] {
                    order.push(i);
                }
                continue;
            }
            match mark[v] {
                Mark::Done => continue,
                Mark::Active => return Err(NetworkError::Cyclic(VarId(v))),
                Mark::New => {}
            }
            mark[v] = Mark::Active;
            stack.push((v, true));
            let inputs: &[VarId] = match driver[v].map(|i| &constraints[i]) {
                Some(Constraint::Nand { a, b, .. }) => &[*a, *b],
                Some(Constraint::Wire { a, .. }) => std::slice::from_ref(a),
                _ => &[],
            };
            for u in inputs {
                match mark[u.0] {
                    Mark::Active => return Err(NetworkError::Cyclic(*u)),
                    Mark::New => stack.push((u.0, false)),
                    Mark::Done => {}
                }
            }
        }
    }
    Ok(order)
}
