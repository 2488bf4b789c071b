use std::fs;
use std::path::Path;

use qcm_core::boolnet::{open_form, parse_dimacs, parse_network};
use qcm_core::{fixtures, BoolNetwork, Form};

use crate::Failure;

/// A loaded network and the name it is reported under.
pub struct Instance {
    pub name: String,
    pub net: BoolNetwork,
}

impl Instance {
    /// A fixture name, or a path to a network file. Files ending in `.cnf`
    /// or containing a `p cnf` header are read as DIMACS.
    pub fn load(arg: &str) -> Result<Self, Failure> {
        if let Some(net) = fixtures::by_name(arg) {
            return Ok(Self {
                name: arg.to_string(),
                net,
            });
        }
        let path = Path::new(arg);
        let text = fs::read_to_string(path).map_err(|e| {
            Failure::Input(format!(
                "cannot read instance {arg}: {e} (fixtures: {})",
                fixtures::NAMES.join(", ")
            ))
        })?;
        let dimacs =
            path.extension().is_some_and(|e| e == "cnf") || text.lines().any(|l| l.trim_start().starts_with("p cnf"));
        let parsed = if dimacs {
            parse_dimacs(&text)
        } else {
            parse_network(&text)
        };
        let net = parsed.map_err(|e| Failure::Input(format!("{arg}: {e}")))?;
        Ok(Self {
            name: arg.to_string(),
            net,
        })
    }

    /// The network in open form, converting a loop network if needed.
    pub fn open(&self) -> Result<BoolNetwork, Failure> {
        match self.net.form() {
            Form::Open => Ok(self.net.clone()),
            Form::Loop => open_form(&self.net).map_err(|e| Failure::Input(format!("{}: {e}", self.name))),
        }
    }
}
