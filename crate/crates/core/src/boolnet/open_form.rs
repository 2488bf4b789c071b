use std::collections::HashMap;

use super::{BoolNetwork, Constraint, Form, NetworkError, Source, VarId};

/// Appends Nand gates to a growing variable list. Every derived operation is
/// lowered to Nand, so the result stays in the single-gate basis.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    n_vars: usize,
    constraints: Vec<Constraint>,
    negations: HashMap<VarId, VarId>,
}

impl CircuitBuilder {
    /// Starts with `n_inputs` undriven variables `0..n_inputs`.
    pub fn new(n_inputs: usize) -> Self {
        Self {
            n_vars: n_inputs,
            constraints: Vec::new(),
            negations: HashMap::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn fresh(&mut self) -> VarId {
        self.n_vars += 1;
        VarId(self.n_vars - 1)
    }

    pub fn push(&mut self, c: Constraint) {
        self.constraints.push(c);
    }

    pub fn nand(&mut self, a: VarId, b: VarId) -> VarId {
        let out = self.fresh();
        self.constraints.push(Constraint::Nand { a, b, out });
        out
    }

    /// `Nand(a, a)`, shared between callers negating the same variable.
    pub fn not(&mut self, a: VarId) -> VarId {
        if let Some(&n) = self.negations.get(&a) {
            return n;
        }
        let n = self.nand(a, a);
        self.negations.insert(a, n);
        n
    }

    /// Two Nands. Always returns a fresh variable.
    pub fn and(&mut self, a: VarId, b: VarId) -> VarId {
        let t = self.nand(a, b);
        self.nand(t, t)
    }

    pub fn or(&mut self, a: VarId, b: VarId) -> VarId {
        let na = self.not(a);
        let nb = self.not(b);
        self.nand(na, nb)
    }

    /// The four-Nand XOR.
    pub fn xor(&mut self, a: VarId, b: VarId) -> VarId {
        let n1 = self.nand(a, b);
        let n2 = self.nand(a, n1);
        let n3 = self.nand(b, n1);
        self.nand(n2, n3)
    }

    /// XOR followed by an inverter (five Nands).
    pub fn xnor(&mut self, a: VarId, b: VarId) -> VarId {
        let x = self.xor(a, b);
        self.nand(x, x)
    }

    /// A variable that is 1 under every assignment: `Nand(v, not v)`.
    /// Needs at least one existing variable.
    pub fn constant_true(&mut self) -> VarId {
        assert!(self.n_vars > 0, "constant needs an existing variable");
        let v = VarId(0);
        let nv = self.not(v);
        self.nand(v, nv)
    }

    pub fn constant_false(&mut self) -> VarId {
        let t = self.constant_true();
        self.nand(t, t)
    }

    /// AND of all flags into a fresh variable. No flags gives constant 1.
    pub fn and_all(&mut self, flags: &[VarId]) -> VarId {
        match flags {
            [] => self.constant_true(),
            [f] => self.and(*f, *f),
            [first, rest @ ..] => rest.iter().fold(*first, |acc, &f| self.and(acc, f)),
        }
    }

    pub fn finish(self, output: VarId) -> Result<BoolNetwork, NetworkError> {
        BoolNetwork::new(Form::Open, self.n_vars, self.constraints, Some(output))
    }
}

/// Rewrites a loop network as an open one whose output is 1 exactly when the
/// original variables satisfy every original constraint.
///
/// Variables `0..n` keep their indices and become free inputs. Each
/// constraint gets a Nand-only checker; the checker outputs are AND-reduced
/// into a fresh output `y`. An empty zero-variable network gains one
/// auxiliary input so the constant-1 output has something to hang off.
pub fn open_form(net: &BoolNetwork) -> Result<BoolNetwork, NetworkError> {
    net.require(Form::Loop)?;
    let mut b = CircuitBuilder::new(net.n_vars().max(1));
    let mut flags = Vec::with_capacity(net.constraints().len());
    for c in net.constraints() {
        let flag = match *c {
            Constraint::Nand { a, b: rhs, out } => {
                let t = b.nand(a, rhs);
                b.xnor(t, out)
            }
            Constraint::Wire { a, b: rhs } => b.xnor(a, rhs),
            Constraint::Pin { var, value: true } => var,
            Constraint::Pin { var, value: false } => b.not(var),
        };
        flags.push(flag);
    }
    let y = b.and_all(&flags);
    Ok(b.finish(y)?.with_source(Source::Native))
}
