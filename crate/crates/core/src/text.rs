//! The `.qct` line-oriented circuit format.
//!
//! ```text
//! qubits 2
//! creg c 2
//! h 0
//! cx 0 1
//! measure 0 -> c[0]
//! measure 1 -> c[1]
//! ```
//!
//! One instruction per line. `#` starts a comment, blank lines are skipped,
//! CRLF is accepted. The header `qubits N` comes first, then `creg` lines,
//! then instructions:
//!
//! `h Q` | `x Q` | `rz T Q` | `u3 T P L Q` | `cx C T` | `cu3 T P L C T` |
//! `measure Q -> R[i]` | `reset Q` | `xif R[i] Q` | `barrier Q*`

use std::fmt::{self, Write as _};

use crate::circuit::{is_identifier, BitRef, Circuit, Op, Violation, ViolationKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message} (near '{token}')")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub token: String,
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
    end_column: usize,
}

impl<'a> Line<'a> {
    fn error(&self, tok: Option<&Token<'_>>, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.number,
            column: tok.map_or(self.end_column, |t| t.column),
            message: message.into(),
            token: tok.map_or(String::new(), |t| t.text.to_string()),
        }
    }

    fn expect_len(&self, n: usize, usage: &str) -> Result<(), ParseError> {
        if self.tokens.len() < n {
            return Err(self.error(None, format!("missing operand, expected `{usage}`")));
        }
        if self.tokens.len() > n {
            return Err(self.error(
                Some(&self.tokens[n]),
                format!("unexpected token, expected `{usage}`"),
            ));
        }
        Ok(())
    }

    fn int(&self, i: usize) -> Result<usize, ParseError> {
        let tok = &self.tokens[i];
        tok.text
            .parse::<usize>()
            .map_err(|_| self.error(Some(tok), "expected a non-negative integer"))
    }

    fn float(&self, i: usize) -> Result<f64, ParseError> {
        let tok = &self.tokens[i];
        match tok.text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.error(Some(tok), "expected a finite angle")),
        }
    }

    fn bit(&self, i: usize) -> Result<BitRef, ParseError> {
        let tok = &self.tokens[i];
        let bad = || self.error(Some(tok), "expected a bit reference NAME[INT]");
        let open = tok.text.find('[').ok_or_else(bad)?;
        let inner = tok.text[open + 1..].strip_suffix(']').ok_or_else(bad)?;
        let name = &tok.text[..open];
        if !is_identifier(name) {
            return Err(bad());
        }
        let index = inner.parse::<usize>().map_err(|_| bad())?;
        Ok(BitRef::new(name, index))
    }
}

fn tokenize(number: usize, raw: &str) -> Line<'_> {
    let content = raw.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in content.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push(Token {
                    text: &content[s..i],
                    column: content[..s].chars().count() + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &content[s..],
            column: content[..s].chars().count() + 1,
        });
    }
    Line {
        number,
        tokens,
        end_column: content.chars().count() + 1,
    }
}

fn describe(v: &Violation) -> String {
    match &v.kind {
        ViolationKind::QubitOutOfRange { qubit } => format!("qubit out of range ({qubit})"),
        _ => {
            let mut s = v.to_string();
            if let Some(i) = s.rfind(" at op ") {
                s.truncate(i);
            }
            s
        }
    }
}

/// Parses `.qct` text. The result always satisfies [`Circuit::validate`].
pub fn parse(text: &str) -> Result<Circuit, ParseError> {
    let mut circuit: Option<Circuit> = None;
    let mut seen_instruction = false;

    for (idx, raw) in text.split('\n').enumerate() {
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let line = tokenize(idx + 1, raw);
        let Some(head) = line.tokens.first().copied() else {
            continue;
        };
        let mnemonic = head.text;

        let Some(c) = circuit.as_mut() else {
            if mnemonic != "qubits" {
                return Err(line.error(Some(&head), "expected `qubits N` header"));
            }
            line.expect_len(2, "qubits N")?;
            let width = line.int(1)?;
            if width == 0 {
                return Err(line.error(Some(&line.tokens[1]), "circuit needs at least 1 qubit"));
            }
            circuit = Some(Circuit::new(width));
            continue;
        };

        if mnemonic == "creg" {
            if seen_instruction {
                return Err(line.error(Some(&head), "creg declaration after instructions"));
            }
            line.expect_len(3, "creg NAME SIZE")?;
            let name = line.tokens[1];
            let size = line.int(2)?;
            c.add_creg(name.text, size)
                .map_err(|v| line.error(Some(&name), describe(&v)))?;
            continue;
        }
        if mnemonic == "qubits" {
            return Err(line.error(Some(&head), "duplicate `qubits` header"));
        }

        let op = match mnemonic {
            "h" | "x" | "reset" => {
                line.expect_len(2, &format!("{mnemonic} Q"))?;
                let q = line.int(1)?;
                match mnemonic {
                    "h" => Op::H(q),
                    "x" => Op::X(q),
                    _ => Op::Reset(q),
                }
            }
            "rz" => {
                line.expect_len(3, "rz THETA Q")?;
                Op::Rz {
                    theta: line.float(1)?,
                    qubit: line.int(2)?,
                }
            }
            "u3" => {
                line.expect_len(5, "u3 THETA PHI LAMBDA Q")?;
                Op::U3 {
                    theta: line.float(1)?,
                    phi: line.float(2)?,
                    lambda: line.float(3)?,
                    qubit: line.int(4)?,
                }
            }
            "cx" => {
                line.expect_len(3, "cx CONTROL TARGET")?;
                Op::Cx {
                    control: line.int(1)?,
                    target: line.int(2)?,
                }
            }
            "cu3" => {
                line.expect_len(6, "cu3 THETA PHI LAMBDA CONTROL TARGET")?;
                Op::Cu3 {
                    theta: line.float(1)?,
                    phi: line.float(2)?,
                    lambda: line.float(3)?,
                    control: line.int(4)?,
                    target: line.int(5)?,
                }
            }
            "measure" => {
                line.expect_len(4, "measure Q -> NAME[INT]")?;
                if line.tokens[2].text != "->" {
                    return Err(line.error(Some(&line.tokens[2]), "expected `->`"));
                }
                Op::Measure {
                    qubit: line.int(1)?,
                    bit: line.bit(3)?,
                }
            }
            "xif" => {
                line.expect_len(3, "xif NAME[INT] Q")?;
                Op::CondX {
                    bit: line.bit(1)?,
                    qubit: line.int(2)?,
                }
            }
            "barrier" => {
                let qs = (1..line.tokens.len())
                    .map(|i| line.int(i))
                    .collect::<Result<Vec<_>, _>>()?;
                Op::Barrier(qs)
            }
            _ => return Err(line.error(Some(&head), format!("unknown instruction `{mnemonic}`"))),
        };
        seen_instruction = true;
        c.push(op).map_err(|v| {
            let tok = match &v.kind {
                ViolationKind::QubitOutOfRange { qubit } => line.tokens[1..]
                    .iter()
                    .find(|t| t.text.parse::<usize>().ok() == Some(*qubit))
                    .copied(),
                ViolationKind::UndeclaredRegister { .. } | ViolationKind::BitOutOfRange { .. } => {
                    line.tokens.iter().find(|t| t.text.contains('[')).copied()
                }
                _ => None,
            };
            line.error(tok.as_ref().or(Some(&head)), describe(&v))
        })?;
    }

    circuit.ok_or_else(|| ParseError {
        line: 1,
        column: 1,
        message: "expected `qubits N` header".to_string(),
        token: String::new(),
    })
}

fn angle(out: &mut String, a: f64) {
    // 12 decimals; avoid emitting "-0.000000000000".
    let s = format!("{a:.12}");
    if s.trim_start_matches('-')
        .bytes()
        .all(|b| b == b'0' || b == b'.')
    {
        out.push_str(s.trim_start_matches('-'));
    } else {
        out.push_str(&s);
    }
}

/// Canonical text for a circuit. Always LF line endings.
pub fn serialize(c: &Circuit) -> String {
    let mut out = String::new();
    writeln!(out, "qubits {}", c.width()).unwrap();
    for r in c.cregs() {
        writeln!(out, "creg {} {}", r.name, r.size).unwrap();
    }
    for op in c.ops() {
        match op {
            Op::H(q) => writeln!(out, "h {q}").unwrap(),
            Op::X(q) => writeln!(out, "x {q}").unwrap(),
            Op::Reset(q) => writeln!(out, "reset {q}").unwrap(),
            Op::Rz { theta, qubit } => {
                out.push_str("rz ");
                angle(&mut out, *theta);
                writeln!(out, " {qubit}").unwrap();
            }
            Op::U3 {
                theta,
                phi,
                lambda,
                qubit,
            } => {
                out.push_str("u3");
                for a in [theta, phi, lambda] {
                    out.push(' ');
                    angle(&mut out, *a);
                }
                writeln!(out, " {qubit}").unwrap();
            }
            Op::Cx { control, target } => writeln!(out, "cx {control} {target}").unwrap(),
            Op::Cu3 {
                theta,
                phi,
                lambda,
                control,
                target,
            } => {
                out.push_str("cu3");
                for a in [theta, phi, lambda] {
                    out.push(' ');
                    angle(&mut out, *a);
                }
                writeln!(out, " {control} {target}").unwrap();
            }
            Op::Measure { qubit, bit } => writeln!(out, "measure {qubit} -> {bit}").unwrap(),
            Op::CondX { bit, qubit } => writeln!(out, "xif {bit} {qubit}").unwrap(),
            Op::Barrier(qs) => {
                out.push_str("barrier");
                for q in qs {
                    write!(out, " {q}").unwrap();
                }
                out.push('\n');
            }
        }
    }
    out
}

/// Displays a circuit in `.qct` form.
pub struct Qct<'a>(pub &'a Circuit);

impl fmt::Display for Qct<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BELL: &str = "qubits 2\ncreg c 2\nh 0\ncx 0 1\nmeasure 0 -> c[0]\nmeasure 1 -> c[1]\n";

    #[test]
    fn parses_bell() {
        let c = parse(BELL).unwrap();
        assert_eq!(c.width(), 2);
        assert_eq!(c.census().depth, 2);
        assert_eq!(c.ops().len(), 4);
        assert_eq!(serialize(&c), BELL);
    }

    #[test]
    fn header_only() {
        let c = parse("qubits 1\n").unwrap();
        assert_eq!(c.width(), 1);
        assert!(c.ops().is_empty());
    }

    #[test]
    fn qubit_out_of_range_is_a_parse_error() {
        let err = parse("qubits 1\nh 5\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.column, 3);
        assert!(err.message.contains("qubit out of range"), "{err}");
        assert_eq!(err.token, "5");
    }

    #[test]
    fn rz_formatting() {
        let mut c = Circuit::new(1);
        c.push(Op::Rz {
            theta: 0.7,
            qubit: 0,
        })
        .unwrap();
        assert_eq!(serialize(&c), "qubits 1\nrz 0.700000000000 0\n");
    }

    #[test]
    fn negative_zero_prints_as_zero() {
        let mut c = Circuit::new(1);
        c.push(Op::Rz {
            theta: -1e-15,
            qubit: 0,
        })
        .unwrap();
        assert_eq!(serialize(&c), "qubits 1\nrz 0.000000000000 0\n");
    }

    #[test]
    fn comments_blank_lines_and_crlf() {
        let text = "# bell\r\nqubits 2   # two\r\n\r\ncreg c 2\r\nh 0\r\ncx 0 1 # entangle\r\nmeasure 0 -> c[0]\r\nmeasure 1 -> c[1]\r\n";
        assert_eq!(serialize(&parse(text).unwrap()), BELL);
    }

    #[test]
    fn all_constructs() {
        let text = "qubits 3\ncreg a 1\ncreg b 2\nh 0\nx 1\nrz -0.250000000000 2\nu3 1.000000000000 2.000000000000 3.000000000000 0\ncx 0 2\ncu3 0.100000000000 0.200000000000 0.300000000000 2 1\nmeasure 0 -> a[0]\nreset 1\nxif a[0] 2\nbarrier\nbarrier 0 2\nmeasure 2 -> b[1]\n";
        let c = parse(text).unwrap();
        assert_eq!(serialize(&c), text);
        assert_eq!(c.ops()[9], Op::Barrier(vec![]));
    }

    #[test]
    fn errors() {
        let cases = [
            ("", 1, "header"),
            ("h 0\n", 1, "header"),
            ("qubits 0\n", 1, "at least 1"),
            ("qubits 2\nqubits 2\n", 2, "duplicate"),
            ("qubits 1\nfoo 0\n", 2, "unknown instruction"),
            ("qubits 1\nh\n", 2, "missing operand"),
            ("qubits 1\nh 0 0\n", 2, "unexpected token"),
            ("qubits 1\nrz nan 0\n", 2, "finite"),
            ("qubits 1\nrz inf 0\n", 2, "finite"),
            ("qubits 1\nmeasure 0 c[0]\n", 2, "missing operand"),
            ("qubits 1\ncreg c 1\nmeasure 0 => c[0]\n", 3, "->"),
            (
                "qubits 1\nmeasure 0 -> c[0]\n",
                2,
                "undeclared register 'c'",
            ),
            (
                "qubits 1\ncreg c 1\nmeasure 0 -> c[1]\n",
                3,
                "bit out of range",
            ),
            ("qubits 1\ncreg c 1\nxif c[x] 0\n", 3, "bit reference"),
            ("qubits 1\ncreg c 1\ncreg c 2\n", 3, "duplicate register"),
            ("qubits 1\ncreg c 0\n", 2, "size 0"),
            ("qubits 1\ncreg 9c 1\n", 2, "invalid register name"),
            ("qubits 1\nh 0\ncreg c 1\n", 3, "after instructions"),
            ("qubits 2\ncx 1 1\n", 2, "used twice"),
            ("qubits 2\nbarrier 0 7\n", 2, "out of range"),
            ("qubits 1\nh -1\n", 2, "non-negative integer"),
        ];
        for (text, line, needle) in cases {
            let err = parse(text).unwrap_err();
            assert_eq!(err.line, line, "{text:?}: {err}");
            assert!(err.line >= 1 && !err.message.is_empty());
            assert!(err.message.contains(needle), "{text:?}: {err}");
        }
    }

    #[test]
    fn unicode_in_comments_and_tokens_does_not_panic() {
        assert!(parse("qubits 1 # ✓\nh 0\n").is_ok());
        let err = parse("qubits 1\nh ✓\n").unwrap_err();
        assert_eq!(err.column, 3);
        assert!(parse("qubits 1\ncreg c 1\nmeasure 0 -> c[é]\n").is_err());
    }
}
