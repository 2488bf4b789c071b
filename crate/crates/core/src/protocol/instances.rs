use rand::Rng;

use crate::boolnet::{BoolNetwork, Constraint, Form, VarId};

/// Shape of a random feed-forward network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpenShape {
    pub unknown: usize,
    pub pinned: usize,
    pub gates: usize,
}

impl OpenShape {
    pub fn n_vars(&self) -> usize {
        self.unknown + self.pinned + self.gates
    }

    /// Picks a shape with `n_vars` total variables, at least one unknown
    /// input and at least one gate.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n_vars: usize) -> Self {
        assert!(n_vars >= 2, "need room for an input and a gate");
        let unknown = rng.random_range(1..n_vars);
        let pinned = rng.random_range(0..n_vars - unknown);
        Self {
            unknown,
            pinned,
            gates: n_vars - unknown - pinned,
        }
    }
}

/// Unknown inputs first, then randomly pinned inputs, then Nand gates over
/// earlier variables. The last gate is the output.
pub fn random_open_network<R: Rng + ?Sized>(rng: &mut R, shape: OpenShape) -> BoolNetwork {
    assert!(shape.unknown + shape.pinned >= 1 && shape.gates >= 1);
    let inputs = shape.unknown + shape.pinned;
    let mut cs = Vec::with_capacity(shape.pinned + shape.gates);
    for v in shape.unknown..inputs {
        cs.push(Constraint::Pin {
            var: VarId(v),
            value: rng.random(),
        });
    }
    for out in inputs..shape.n_vars() {
        let a = VarId(rng.random_range(0..out));
        let b = VarId(rng.random_range(0..out));
        cs.push(Constraint::Nand { a, b, out: VarId(out) });
    }
    BoolNetwork::new(Form::Open, shape.n_vars(), cs, Some(VarId(shape.n_vars() - 1)))
        .expect("feed-forward construction is valid")
}

/// Independent random Nand, Wire and Pin constraints. Cycles, duplicate
/// drivers and contradictions are all allowed in loop form.
pub fn random_loop_network<R: Rng + ?Sized>(rng: &mut R, n_vars: usize, n_constraints: usize) -> BoolNetwork {
    assert!(n_vars >= 1);
    let var = |rng: &mut R| VarId(rng.random_range(0..n_vars));
    let cs = (0..n_constraints)
        .map(|_| match rng.random_range(0..20) {
            0..10 => Constraint::Nand {
                a: var(rng),
                b: var(rng),
                out: var(rng),
            },
            10..17 => Constraint::Wire {
                a: var(rng),
                b: var(rng),
            },
            _ => Constraint::Pin {
                var: var(rng),
                value: rng.random(),
            },
        })
        .collect();
    BoolNetwork::new(Form::Loop, n_vars, cs, None).expect("loop form accepts any in-range constraints")
}
