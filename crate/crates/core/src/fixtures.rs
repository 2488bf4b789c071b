//! Named networks used throughout the tests and the CLI.

use crate::boolnet::{open_form, BoolNetwork, Constraint, Form, VarId};

/// Two coexisting qubits `x -> y` joined by a wire.
pub fn identity() -> BoolNetwork {
    BoolNetwork::new(
        Form::Open,
        2,
        vec![Constraint::Wire {
            a: VarId(0),
            b: VarId(1),
        }],
        Some(VarId(1)),
    )
    .expect("identity fixture is valid")
}

/// Two Nand gates fed back through three wires, variables `x1..x6` at
/// indices `0..6`:
///
/// ```text
/// x3 = Nand(x1, x2)    x6 = Nand(x4, x5)
/// x1 = x5    x2 = x6    x3 = x4
/// ```
pub fn fig1() -> BoolNetwork {
    let v = VarId;
    BoolNetwork::new(
        Form::Loop,
        6,
        vec![
            Constraint::Nand {
                a: v(0),
                b: v(1),
                out: v(2),
            },
            Constraint::Nand {
                a: v(3),
                b: v(4),
                out: v(5),
            },
            Constraint::Wire { a: v(0), b: v(4) },
            Constraint::Wire { a: v(1), b: v(5) },
            Constraint::Wire { a: v(2), b: v(3) },
        ],
        None,
    )
    .expect("fig1 fixture is valid")
}

/// [`fig1`] rewritten as an open network with a single output.
pub fn fig1_open() -> BoolNetwork {
    open_form(&fig1()).expect("fig1 is a loop network")
}

/// Looks up a fixture by its CLI name.
pub fn by_name(name: &str) -> Option<BoolNetwork> {
    match name {
        "identity" => Some(identity()),
        "fig1" => Some(fig1()),
        "fig1-open" => Some(fig1_open()),
        _ => None,
    }
}

pub const NAMES: &[&str] = &["identity", "fig1", "fig1-open"];
