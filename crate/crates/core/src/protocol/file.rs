//! Protocol definition files.
//!
//! ```text
//! name vaa                      # optional
//! dim_a 2                       # optional, checked against the state
//! axis 1 0 0                    # one line per axis, unit length
//! state (0.7071,0) 0 0 (0.7071,0)
//! phi (re,im) (re,im) ...       # one line per basis vector, z-basis order
//! label a b c d                 # optional eigenvalue tags
//! row - - -                     # one line per basis vector, one sign per axis
//! ```
//!
//! Amplitudes are listed in the lexicographic `(A, B)` order with Bob last.
//! Signs are `+`/`-` (or `↑`/`↓`), separated or run together.

use super::{parse_sign, LookupTable, ProjectiveMeasurement, RetrodictionProtocol};
use crate::error::Result;
use crate::state::{StateVector, UnitAxis};
use crate::textfmt::{end_line, format_complex, parse_complex_list, parse_error, parse_reals, records};

pub fn parse_protocol(text: &str) -> Result<RetrodictionProtocol> {
    let mut name = None;
    let mut dim_a = None;
    let mut axes = Vec::new();
    let mut state = None;
    let mut basis = Vec::new();
    let mut labels = None;
    let mut rows = Vec::new();
    let mut state_line = 0;

    for rec in records(text) {
        let line = rec.line;
        match rec.keyword {
            "name" => name = Some(rec.rest.to_string()),
            "dim_a" => {
                let [v] = rec.args[..] else {
                    return Err(parse_error(line, "dim_a takes one integer"));
                };
                dim_a = Some(
                    v.parse::<usize>()
                        .map_err(|_| parse_error(line, format!("malformed dim_a {v:?}")))?,
                );
            }
            "axis" => {
                let v = parse_reals(&rec.args, line)?;
                let [x, y, z] = v[..] else {
                    return Err(parse_error(line, "axis takes three numbers"));
                };
                axes.push(UnitAxis::new(x, y, z).map_err(|e| parse_error(line, e.to_string()))?);
            }
            "state" => {
                if state.is_some() {
                    return Err(parse_error(line, "state given twice"));
                }
                let amps = parse_complex_list(rec.rest, line)?;
                state = Some(StateVector::new(amps).map_err(|e| parse_error(line, e.to_string()))?);
                state_line = line;
            }
            "phi" => {
                let amps = parse_complex_list(rec.rest, line)?;
                basis.push(StateVector::new(amps).map_err(|e| parse_error(line, e.to_string()))?);
            }
            "label" => labels = Some(rec.args.iter().map(|s| s.to_string()).collect::<Vec<_>>()),
            "row" => {
                let signs = rec
                    .args
                    .iter()
                    .flat_map(|t| t.chars())
                    .map(parse_sign)
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| parse_error(line, e.to_string()))?;
                rows.push(signs);
            }
            other => return Err(parse_error(line, format!("unknown keyword {other:?}"))),
        }
    }

    let end = end_line(text);
    let state = state.ok_or_else(|| parse_error(end, "missing state line"))?;
    if let Some(d) = dim_a {
        if d * 2 != state.dim() {
            return Err(parse_error(
                state_line,
                format!("state has dimension {}, expected {}", state.dim(), 2 * d),
            ));
        }
    }
    if axes.is_empty() {
        return Err(parse_error(end, "no axis lines"));
    }
    if basis.is_empty() {
        return Err(parse_error(end, "no phi lines"));
    }
    let measurement = match labels {
        Some(l) => ProjectiveMeasurement::with_labels(basis, l),
        None => ProjectiveMeasurement::new(basis),
    }
    .map_err(|e| parse_error(end, e.to_string()))?;
    let table = LookupTable::new(rows).map_err(|e| parse_error(end, e.to_string()))?;
    RetrodictionProtocol::new(
        name.unwrap_or_else(|| "unnamed".into()),
        state,
        axes,
        measurement,
        table,
    )
    .map_err(|e| parse_error(end, e.to_string()))
}

/// Canonical text; [`parse_protocol`] reads it back bit-exactly.
pub fn emit_protocol(p: &RetrodictionProtocol) -> String {
    let mut out = String::new();
    out.push_str(&format!("name {}\n", p.name));
    out.push_str(&format!("dim_a {}\n", p.dim_a()));
    for a in p.axes() {
        let [x, y, z] = a.components();
        out.push_str(&format!("axis {x} {y} {z}\n"));
    }
    let amps = |v: &StateVector| {
        v.amplitudes()
            .iter()
            .map(|c| format_complex(*c))
            .collect::<Vec<_>>()
            .join(" ")
    };
    out.push_str(&format!("state {}\n", amps(p.initial())));
    for phi in p.basis() {
        out.push_str(&format!("phi {}\n", amps(phi)));
    }
    let labels = p.measurement().labels();
    if labels.iter().enumerate().any(|(j, l)| *l != format!("λ{}", j + 1)) {
        out.push_str(&format!("label {}\n", labels.join(" ")));
    }
    for row in p.table().rows() {
        let signs: Vec<String> = row.iter().map(|s| s.to_string()).collect();
        out.push_str(&format!("row {}\n", signs.join(" ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    const TINY: &str = "\
# eigenstate protocol
name tiny
axis 0 0 1
state (1,0) (0,0)
phi 1 0
phi 0 1
row +
row -
";

    #[test]
    fn parse_and_round_trip() {
        let p = parse_protocol(TINY).unwrap();
        assert_eq!(p.name, "tiny");
        assert_eq!(p.k(), 2);
        let again = parse_protocol(&emit_protocol(&p)).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn errors_carry_lines() {
        let bad = TINY.replace("axis 0 0 1", "axis 0 0 2");
        match parse_protocol(&bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let bad = TINY.replace("row -", "row x");
        assert!(matches!(parse_protocol(&bad), Err(Error::Parse { line: 8, .. })));
        let bad = TINY.replace("name tiny", "bogus 1");
        assert!(matches!(parse_protocol(&bad), Err(Error::Parse { line: 2, .. })));
    }
}
