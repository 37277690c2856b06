//! QCT v1, a line-oriented text format for circuits.
//!
//! ```text
//! qct 1
//! qubits 3
//! h 0
//! x 1
//! mcx +0 -1 t2
//! ```
//!
//! `+i` is a positive control on qubit `i`, `-i` a negative one. Anything
//! after `#` is a comment. Export emits LF line endings and no trailing
//! whitespace, so exported text is stable enough for golden files.

use super::{Circuit, Control, Gate, Polarity};
use crate::error::{Error, Result};

pub fn export_qct(circuit: &Circuit) -> String {
    let mut out = format!("qct 1\nqubits {}\n", circuit.num_qubits());
    for g in circuit.gates() {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_index(tok: &str, line: usize) -> Result<usize> {
    // Reject forms like "+3" or " 3" that usize::from_str would accept.
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(line, format!("bad qubit index '{tok}'")));
    }
    tok.parse()
        .map_err(|_| err(line, format!("bad qubit index '{tok}'")))
}

pub fn parse_qct(text: &str) -> Result<Circuit> {
    // (line number, tokens) of every non-blank line after comment stripping.
    let mut lines = text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    });

    match lines.next() {
        Some((_, t)) if t == ["qct", "1"] => {}
        Some((line, _)) => return Err(err(line, "expected header 'qct 1'")),
        None => return Err(err(1, "empty input")),
    }
    let num_qubits = match lines.next() {
        Some((line, t)) if t.len() == 2 && t[0] == "qubits" => parse_index(t[1], line)?,
        Some((line, _)) => return Err(err(line, "expected 'qubits <count>'")),
        None => return Err(err(2, "missing 'qubits' line")),
    };

    let mut gates = Vec::new();
    for (line, toks) in lines {
        let check = |q: usize| {
            if q >= num_qubits {
                Err(err(line, "qubit out of range"))
            } else {
                Ok(q)
            }
        };
        let gate = match toks[0] {
            "h" | "x" => {
                if toks.len() != 2 {
                    return Err(err(line, format!("'{}' takes exactly one qubit", toks[0])));
                }
                let q = check(parse_index(toks[1], line)?)?;
                if toks[0] == "h" {
                    Gate::h(q)
                } else {
                    Gate::x(q)
                }
            }
            "mcx" => {
                let (last, ctrl_toks) = toks[1..]
                    .split_last()
                    .ok_or_else(|| err(line, "mcx needs a target"))?;
                let target = match last.strip_prefix('t') {
                    Some(q) => check(parse_index(q, line)?)?,
                    None => return Err(err(line, "mcx target must be written t<q>")),
                };
                let mut controls = Vec::with_capacity(ctrl_toks.len());
                for tok in ctrl_toks {
                    let (polarity, rest) = if let Some(r) = tok.strip_prefix('+') {
                        (Polarity::Positive, r)
                    } else if let Some(r) = tok.strip_prefix('-') {
                        (Polarity::Negative, r)
                    } else {
                        return Err(err(line, format!("control '{tok}' needs a + or - sign")));
                    };
                    let qubit = check(parse_index(rest, line)?)?;
                    controls.push(Control { qubit, polarity });
                }
                Gate::mcx(controls, target).map_err(|_| err(line, "duplicate qubit index in gate"))?
            }
            other => return Err(err(line, format!("unknown mnemonic '{other}'"))),
        };
        gates.push(gate);
    }
    Circuit::from_gates(num_qubits, gates)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn export_single_h() {
        let c = Circuit::from_gates(1, vec![Gate::h(0)]).unwrap();
        assert_eq!(export_qct(&c), "qct 1\nqubits 1\nh 0\n");
    }

    #[test]
    fn export_toffoli() {
        let c = Circuit::from_gates(3, vec![Gate::toffoli(0, 1, 2).unwrap()]).unwrap();
        assert!(export_qct(&c).lines().any(|l| l == "mcx +0 +1 t2"));
    }

    #[test]
    fn parse_simple() {
        let c = parse_qct("qct 1\nqubits 2\nx 1\n").unwrap();
        assert_eq!(c, Circuit::from_gates(2, vec![Gate::x(1)]).unwrap());
    }

    #[test]
    fn out_of_range_names_line() {
        let e = parse_qct("qct 1\nqubits 1\nh 5\n").unwrap_err();
        assert_eq!(e.to_string(), "qubit out of range, line 3");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("qct 2\n", 1),
            ("qct 1\nqbits 3\n", 2),
            ("qct 1\nqubits 3\nh 0\ncz 0 1\n", 4),
            ("qct 1\nqubits 3\nmcx +0 +0 t1\n", 3),
            ("qct 1\nqubits 3\nmcx +0 t0\n", 3),
            ("qct 1\nqubits 3\nmcx 0 t1\n", 3),
            ("qct 1\nqubits 3\nmcx +0 2\n", 3),
            ("qct 1\nqubits 3\n\n# note\nx +1\n", 5),
            ("qct 1\nqubits 3\nh 0 1\n", 3),
        ];
        for (text, line) in cases {
            match parse_qct(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn comments_and_blank_lines() {
        let c = parse_qct("# header comment\nqct 1\nqubits 3 # three\n\nmcx -0 t2 # flip\n").unwrap();
        assert_eq!(
            c,
            Circuit::from_gates(3, vec![Gate::mcx(vec![Control::negative(0)], 2).unwrap()]).unwrap()
        );
    }

    #[test]
    fn zero_control_mcx_round_trips() {
        let c = Circuit::from_gates(2, vec![Gate::mcx(vec![], 1).unwrap(), Gate::x(1)]).unwrap();
        let text = export_qct(&c);
        assert_eq!(text, "qct 1\nqubits 2\nmcx t1\nx 1\n");
        assert_eq!(parse_qct(&text).unwrap(), c);
    }
}
