//! Circuit text format.
//!
//! ```text
//! qubits 2          # required, before any gate
//! H 0
//! CNOT 0 1
//! bob               # optional: Bob acts here
//! P 0 pi
//! CP 0 1 -3pi/4
//! ```
//!
//! Gates: `H q`, `NOT q`, `P q angle`, `CNOT c t`, `CP c t angle`, `CU c t`,
//! `CH c t`. Angles are decimals in radians or multiples of π written
//! `pi`, `-pi/2`, `3pi/4`. The emitter writes an angle symbolically only when
//! the symbolic form evaluates to exactly the same double, so emitting and
//! parsing again reproduces a circuit bit for bit.

use std::f64::consts::PI;

use super::circuit::Circuit;
use super::gate::Gate;
use crate::error::Result;
use crate::textfmt::{parse_error, parse_real, records};

/// Largest denominator tried when writing angles as multiples of π.
const MAX_DENOMINATOR: u32 = 64;

pub fn parse_angle(token: &str, line: usize) -> Result<f64> {
    let malformed = || parse_error(line, format!("malformed angle {token:?}"));
    let Some(pos) = token.find("pi") else {
        return parse_real(token, line).map_err(|_| malformed());
    };
    let (head, tail) = (&token[..pos], &token[pos + 2..]);
    let (sign, head) = match head.strip_prefix('-') {
        Some(h) => (-1.0, h),
        None => (1.0, head),
    };
    let head = head.strip_suffix('*').unwrap_or(head);
    let coeff = if head.is_empty() {
        1.0
    } else {
        head.parse::<f64>().map_err(|_| malformed())?
    };
    let den = if tail.is_empty() {
        1.0
    } else {
        let d = tail.strip_prefix('/').ok_or_else(malformed)?;
        let d: u32 = d.parse().map_err(|_| malformed())?;
        if d == 0 {
            return Err(malformed());
        }
        f64::from(d)
    };
    let v = sign * coeff * PI / den;
    if !v.is_finite() {
        return Err(malformed());
    }
    Ok(v)
}

/// `k·pi/d` when that reproduces `angle` exactly, else the shortest decimal.
pub fn format_angle(angle: f64) -> String {
    if angle == 0.0 {
        return if angle.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    for d in 1..=MAX_DENOMINATOR {
        let k = (angle * f64::from(d) / PI).round();
        if k == 0.0 || k.abs() > 1e6 {
            continue;
        }
        let sign = if k < 0.0 { -1.0 } else { 1.0 };
        if sign * k.abs() * PI / f64::from(d) == angle {
            let s = if sign < 0.0 { "-" } else { "" };
            let num = if k.abs() == 1.0 {
                String::new()
            } else {
                format!("{}", k.abs())
            };
            return if d == 1 {
                format!("{s}{num}pi")
            } else {
                format!("{s}{num}pi/{d}")
            };
        }
    }
    format!("{angle}")
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let recs = records(text);
    let Some(first) = recs.first() else {
        return Err(parse_error(1, "missing header: expected `qubits N`"));
    };
    if first.keyword != "qubits" {
        return Err(parse_error(first.line, "missing header: expected `qubits N` first"));
    }
    let n: usize = match first.args[..] {
        [v] => v
            .parse()
            .map_err(|_| parse_error(first.line, format!("malformed qubit count {v:?}")))?,
        _ => return Err(parse_error(first.line, "qubits takes one integer")),
    };
    let mut circuit =
        Circuit::new(n).map_err(|e| parse_error(first.line, e.to_string()))?;

    for rec in &recs[1..] {
        let line = rec.line;
        let keyword = rec.keyword.to_ascii_uppercase();
        let arity = |k: usize| -> Result<()> {
            if rec.args.len() == k {
                Ok(())
            } else {
                Err(parse_error(
                    line,
                    format!("{} takes {k} argument(s), got {}", keyword, rec.args.len()),
                ))
            }
        };
        let qubit = |i: usize| -> Result<usize> {
            let tok = rec.args[i];
            let q: usize = tok
                .parse()
                .map_err(|_| parse_error(line, format!("malformed qubit index {tok:?}")))?;
            if q >= n {
                return Err(parse_error(
                    line,
                    format!("index out of range: qubit {q} on a {n}-qubit register"),
                ));
            }
            Ok(q)
        };
        let gate = match keyword.as_str() {
            "BOB" => {
                arity(0)?;
                circuit.mark_bob().map_err(|e| parse_error(line, e.to_string()))?;
                continue;
            }
            "QUBITS" => return Err(parse_error(line, "qubits given twice")),
            "H" => {
                arity(1)?;
                Gate::Hadamard { qubit: qubit(0)? }
            }
            "NOT" => {
                arity(1)?;
                Gate::Not { qubit: qubit(0)? }
            }
            "P" => {
                arity(2)?;
                Gate::Phase {
                    qubit: qubit(0)?,
                    angle: parse_angle(rec.args[1], line)?,
                }
            }
            "CNOT" | "CP" | "CU" | "CH" => {
                arity(if keyword == "CP" { 3 } else { 2 })?;
                let (control, target) = (qubit(0)?, qubit(1)?);
                match keyword.as_str() {
                    "CNOT" => Gate::CNot { control, target },
                    "CU" => Gate::CU { control, target },
                    "CH" => Gate::CH { control, target },
                    _ => Gate::CPhase {
                        control,
                        target,
                        angle: parse_angle(rec.args[2], line)?,
                    },
                }
            }
            _ => return Err(parse_error(line, format!("unknown gate {:?}", rec.keyword))),
        };
        circuit.push(gate).map_err(|e| parse_error(line, e.to_string()))?;
    }
    Ok(circuit)
}

/// Canonical text: header, one gate per line, `bob` at its marker.
pub fn emit_circuit(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.qubits());
    for (i, g) in c.gates().iter().enumerate() {
        if c.bob() == Some(i) {
            out.push_str("bob\n");
        }
        out.push_str(&format!("{g}\n"));
    }
    if c.bob() == Some(c.len()) {
        out.push_str("bob\n");
    }
    out
}
