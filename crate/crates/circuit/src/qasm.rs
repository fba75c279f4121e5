//! OpenQASM 2.0 emission and parsing.
//!
//! Dialect: gates {x, h, t, tdg, ry, cx, swap}, one quantum register `q`,
//! one classical register `c` sized by the measurement count. Circuits
//! must be lowered before emission (FSWAP/CRy/CCRy are rejected); SWAP is
//! accepted for partially lowered dumps. The parser covers exactly this
//! dialect and round-trips the emitter's output structurally.

use crate::circuit::{Circuit, Connectivity};
use crate::error::CircuitError;
use crate::gate::Gate;

/// Emit an OpenQASM 2.0 document (UTF-8, LF endings).
pub fn emit_qasm(c: &Circuit) -> Result<String, CircuitError> {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    out.push_str(&format!("qreg q[{}];\n", c.width()));
    let n_measure = c
        .gates()
        .iter()
        .filter(|g| matches!(g, Gate::MeasureZ { .. }))
        .count();
    if n_measure > 0 {
        out.push_str(&format!("creg c[{n_measure}];\n"));
    }
    let mut clbit = 0usize;
    for gate in c.gates() {
        match *gate {
            Gate::X { q } => out.push_str(&format!("x q[{q}];\n")),
            Gate::H { q } => out.push_str(&format!("h q[{q}];\n")),
            Gate::T { q } => out.push_str(&format!("t q[{q}];\n")),
            Gate::Tdg { q } => out.push_str(&format!("tdg q[{q}];\n")),
            Gate::Ry { q, angle } => out.push_str(&format!("ry({angle}) q[{q}];\n")),
            Gate::Cnot { control, target } => {
                out.push_str(&format!("cx q[{control}],q[{target}];\n"))
            }
            Gate::Swap { a, b } => out.push_str(&format!("swap q[{a}],q[{b}];\n")),
            Gate::MeasureZ { q } => {
                out.push_str(&format!("measure q[{q}] -> c[{clbit}];\n"));
                clbit += 1;
            }
            Gate::Fswap { .. } | Gate::CRy { .. } | Gate::CCRy { .. } => {
                return Err(CircuitError::UnloweredGate(gate.name().to_string()))
            }
        }
    }
    Ok(out)
}

/// Parse the dialect back into a circuit (wire labels, all-to-all
/// connectivity annotation).
pub fn parse_qasm(text: &str) -> Result<Circuit, CircuitError> {
    let mut circuit: Option<Circuit> = None;
    let mut saw_version = false;
    let mut creg_size: Option<usize> = None;
    let mut measures = 0usize;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let stripped = match raw.find("//") {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        for stmt in stripped.split(';') {
            let stmt = stmt.trim();
            if stmt.is_empty() {
                continue;
            }
            if let Some(rest) = stmt.strip_prefix("OPENQASM") {
                if rest.trim() != "2.0" {
                    return Err(err(line, format!("unsupported version {}", rest.trim())));
                }
                saw_version = true;
                continue;
            }
            if stmt.starts_with("include") {
                continue;
            }
            if !saw_version {
                return Err(err(line, "statement before OPENQASM 2.0 header".into()));
            }
            if let Some(rest) = stmt.strip_prefix("qreg") {
                let (name, size) = parse_reg(rest.trim(), line)?;
                if name != "q" {
                    return Err(err(line, format!("expected register name q, got {name}")));
                }
                if circuit.is_some() {
                    return Err(err(line, "multiple qreg declarations".into()));
                }
                circuit = Some(Circuit::new(size, Connectivity::AllToAll));
                continue;
            }
            if let Some(rest) = stmt.strip_prefix("creg") {
                let (name, size) = parse_reg(rest.trim(), line)?;
                if name != "c" {
                    return Err(err(line, format!("expected register name c, got {name}")));
                }
                creg_size = Some(size);
                continue;
            }
            let c = circuit
                .as_mut()
                .ok_or_else(|| err(line, "gate before qreg declaration".into()))?;
            let gate = parse_statement(stmt, line, &mut measures, creg_size)?;
            c.push(gate).map_err(|e| err(line, e.to_string()))?;
        }
    }
    circuit.ok_or_else(|| err(0, "no qreg declaration".into()))
}

fn err(line: usize, message: String) -> CircuitError {
    CircuitError::QasmParse { line, message }
}

fn parse_reg(text: &str, line: usize) -> Result<(String, usize), CircuitError> {
    let open = text.find('[').ok_or_else(|| err(line, "expected [size]".into()))?;
    let close = text.rfind(']').ok_or_else(|| err(line, "expected ]".into()))?;
    let name = text[..open].trim().to_string();
    let size: usize = text[open + 1..close]
        .trim()
        .parse()
        .map_err(|e| err(line, format!("bad register size: {e}")))?;
    Ok((name, size))
}

fn parse_operand(text: &str, line: usize) -> Result<usize, CircuitError> {
    let text = text.trim();
    let rest = text
        .strip_prefix("q[")
        .ok_or_else(|| err(line, format!("expected q[i], got {text}")))?;
    let idx = rest
        .strip_suffix(']')
        .ok_or_else(|| err(line, "expected closing ]".into()))?;
    idx.trim()
        .parse()
        .map_err(|e| err(line, format!("bad qubit index: {e}")))
}

fn parse_statement(
    stmt: &str,
    line: usize,
    measures: &mut usize,
    creg_size: Option<usize>,
) -> Result<Gate, CircuitError> {
    if let Some(rest) = stmt.strip_prefix("measure") {
        let (src, dst) = rest
            .split_once("->")
            .ok_or_else(|| err(line, "measure needs q[i] -> c[j]".into()))?;
        let q = parse_operand(src, line)?;
        let dst = dst.trim();
        let j: usize = dst
            .strip_prefix("c[")
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| err(line, format!("expected c[j], got {dst}")))?
            .trim()
            .parse()
            .map_err(|e| err(line, format!("bad classical index: {e}")))?;
        let cap = creg_size.ok_or_else(|| err(line, "measure before creg".into()))?;
        if j >= cap {
            return Err(err(line, format!("classical bit {j} outside creg[{cap}]")));
        }
        if j != *measures {
            return Err(err(line, format!("expected sequential classical bit {measures}, got {j}")));
        }
        *measures += 1;
        return Ok(Gate::MeasureZ { q });
    }

    let (head, operands) = match stmt.find(|ch: char| ch.is_whitespace()) {
        Some(pos) => stmt.split_at(pos),
        None => return Err(err(line, format!("malformed statement {stmt}"))),
    };
    let operands: Vec<usize> = operands
        .split(',')
        .map(|o| parse_operand(o, line))
        .collect::<Result<_, _>>()?;
    let one = |ops: &[usize]| -> Result<usize, CircuitError> {
        if ops.len() != 1 {
            return Err(err(line, format!("expected 1 operand, got {}", ops.len())));
        }
        Ok(ops[0])
    };
    let two = |ops: &[usize]| -> Result<(usize, usize), CircuitError> {
        if ops.len() != 2 {
            return Err(err(line, format!("expected 2 operands, got {}", ops.len())));
        }
        Ok((ops[0], ops[1]))
    };

    if let Some(argstart) = head.find('(') {
        let name = &head[..argstart];
        let argend = head
            .rfind(')')
            .ok_or_else(|| err(line, "unclosed parameter list".into()))?;
        let angle = parse_angle(&head[argstart + 1..argend], line)?;
        return match name {
            "ry" => Ok(Gate::Ry { q: one(&operands)?, angle }),
            other => Err(err(line, format!("unknown parameterized gate {other}"))),
        };
    }
    match head {
        "x" => Ok(Gate::X { q: one(&operands)? }),
        "h" => Ok(Gate::H { q: one(&operands)? }),
        "t" => Ok(Gate::T { q: one(&operands)? }),
        "tdg" => Ok(Gate::Tdg { q: one(&operands)? }),
        "cx" => {
            let (control, target) = two(&operands)?;
            Ok(Gate::Cnot { control, target })
        }
        "swap" => {
            let (a, b) = two(&operands)?;
            Ok(Gate::Swap { a, b })
        }
        other => Err(err(line, format!("unknown gate {other}"))),
    }
}

/// number | pi | number*pi | pi/number | -…
fn parse_angle(text: &str, line: usize) -> Result<f64, CircuitError> {
    let text = text.trim();
    let (sign, body) = match text.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim()),
        None => (1.0, text),
    };
    let value = if let Some((lhs, rhs)) = body.split_once('*') {
        parse_factor(lhs.trim(), line)? * parse_factor(rhs.trim(), line)?
    } else if let Some((lhs, rhs)) = body.split_once('/') {
        parse_factor(lhs.trim(), line)? / parse_factor(rhs.trim(), line)?
    } else {
        parse_factor(body, line)?
    };
    Ok(sign * value)
}

fn parse_factor(text: &str, line: usize) -> Result<f64, CircuitError> {
    if text == "pi" {
        return Ok(std::f64::consts::PI);
    }
    text.parse()
        .map_err(|e| err(line, format!("bad angle factor {text}: {e}")))
}
