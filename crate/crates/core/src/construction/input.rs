//! Construction inputs: a sign table plus either axes or a Gram matrix.
//!
//! ```text
//! name tetra                 # optional
//! row ↑↑↓↓                   # one line per outcome, one sign per axis
//! axis 1 0 0                 # one line per axis, or instead:
//! gram 1 -0.333 ...          # one line per Gram row
//! coeff 0.408 ...            # optional; solved from the table otherwise
//! theta+ 0 0 ...             # optional, (K/2)² - 1 values each
//! theta- 0 0 ...
//! lambda+ 0                  # optional phases
//! lambda- 0
//! ```

use serde::Serialize;

use super::basis::{construct_basis, ConstructionResult, UnitaryParams};
use super::constraints::{m4_table, solve_coefficients};
use super::factory::two_qubit_table;
use super::gram::{axes_from_gram, feasibility, AxisGram};
use crate::error::{Error, Result};
use crate::protocol::{parse_sign, LookupTable};
use crate::state::{Tolerances, UnitAxis};
use crate::textfmt::{end_line, parse_error, parse_real, parse_reals, records};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstructionInput {
    pub name: String,
    #[serde(skip)]
    pub table: LookupTable,
    #[serde(skip)]
    pub axes: Option<Vec<UnitAxis>>,
    pub gram: Option<AxisGram>,
    pub coefficients: Option<Vec<f64>>,
    pub params: UnitaryParams,
}

impl ConstructionInput {
    pub fn new(table: LookupTable) -> Self {
        ConstructionInput {
            name: "constructed".into(),
            table,
            axes: None,
            gram: None,
            coefficients: None,
            params: UnitaryParams::default(),
        }
    }

    /// Fills in whatever is missing (axes from the Gram matrix or vice
    /// versa, coefficients from the linear system) and builds the basis.
    pub fn run(&self, tol: &Tolerances) -> Result<ConstructionResult> {
        let m = self.table.m();
        if m > 4 {
            return Err(Error::Infeasible(format!("no solutions exist for m > 4 (m = {m})")));
        }
        let (axes, gram) = match (&self.axes, &self.gram) {
            (Some(a), Some(g)) => {
                let from_axes = AxisGram::from_axes(a);
                let d = from_axes.max_abs_diff(g);
                if d > tol.pipeline {
                    return Err(Error::ConstraintResidual {
                        constraint: "given axes and Gram matrix disagree".into(),
                        residual: d,
                        tolerance: tol.pipeline,
                    });
                }
                (a.clone(), g.clone())
            }
            (Some(a), None) => (a.clone(), AxisGram::from_axes(a)),
            (None, Some(g)) => (axes_from_gram(g)?, g.clone()),
            (None, None) => {
                return Err(Error::Precondition("either axes or a Gram matrix is required".into()))
            }
        };
        let verdict = feasibility(&axes);
        if !verdict.feasible {
            return Err(Error::Infeasible(verdict.reason));
        }
        let b = match &self.coefficients {
            Some(b) => b.clone(),
            None => solve_coefficients(&self.table, &gram, tol)?.b,
        };
        construct_basis(&self.table, &b, &axes, &self.params, tol)
    }
}

/// The symmetric request for `m` axes: orthogonal axes with the two-qubit
/// table for `m = 3`, the tetrahedron with its six-row table for `m = 4`.
pub fn symmetric_input(m: usize) -> Result<ConstructionInput> {
    let (table, gram) = match m {
        3 => (two_qubit_table(), AxisGram::uniform(3, 0.0)?),
        4 => (m4_table(), AxisGram::uniform(4, -1.0 / 3.0)?),
        m if m > 4 => {
            return Err(Error::Infeasible(format!("no solutions exist for m > 4 (m = {m})")))
        }
        _ => {
            return Err(Error::Precondition(format!(
                "symmetric construction needs three or four axes, got {m}"
            )))
        }
    };
    let mut input = ConstructionInput::new(table);
    input.name = format!("symmetric-m{m}");
    input.gram = Some(gram);
    Ok(input)
}

pub fn parse_construction_input(text: &str) -> Result<ConstructionInput> {
    let mut name = None;
    let mut rows = Vec::new();
    let mut axes = Vec::new();
    let mut gram = Vec::new();
    let mut coefficients = None;
    let mut params = UnitaryParams::default();
    let mut gram_line = 0;

    for rec in records(text) {
        let line = rec.line;
        let single = || -> Result<f64> {
            match rec.args[..] {
                [v] => parse_real(v, line),
                _ => Err(parse_error(line, format!("{} takes one number", rec.keyword))),
            }
        };
        match rec.keyword {
            "name" => name = Some(rec.rest.to_string()),
            "row" => rows.push(
                rec.args
                    .iter()
                    .flat_map(|t| t.chars())
                    .map(parse_sign)
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| parse_error(line, e.to_string()))?,
            ),
            "axis" => {
                let v = parse_reals(&rec.args, line)?;
                let [x, y, z] = v[..] else {
                    return Err(parse_error(line, "axis takes three numbers"));
                };
                axes.push(UnitAxis::new(x, y, z).map_err(|e| parse_error(line, e.to_string()))?);
            }
            "gram" => {
                gram.push(parse_reals(&rec.args, line)?);
                gram_line = line;
            }
            "coeff" => coefficients = Some(parse_reals(&rec.args, line)?),
            "theta+" => params.theta_plus = parse_reals(&rec.args, line)?,
            "theta-" => params.theta_minus = parse_reals(&rec.args, line)?,
            "lambda+" => params.lambda_plus = single()?,
            "lambda-" => params.lambda_minus = single()?,
            other => return Err(parse_error(line, format!("unknown keyword {other:?}"))),
        }
    }

    let end = end_line(text);
    let table = LookupTable::new(rows).map_err(|e| parse_error(end, e.to_string()))?;
    let gram = if gram.is_empty() {
        None
    } else {
        Some(AxisGram::new(gram).map_err(|e| parse_error(gram_line, e.to_string()))?)
    };
    let mut input = ConstructionInput::new(table);
    if let Some(n) = name {
        input.name = n;
    }
    input.axes = (!axes.is_empty()).then_some(axes);
    input.gram = gram;
    input.coefficients = coefficients;
    input.params = params;
    Ok(input)
}
