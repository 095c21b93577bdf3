//! Circuit readers (plain gate lists and an OpenQASM 2.0 subset) and the JSON
//! diagram format.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{Circuit, EdgeKind, Gate, Phase, Scalar, VertexKind, ZxDiagram};
use crate::error::{Error, Result};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Evaluates an angle expression such as `pi/4`, `-3*pi/8` or `0.785`.
pub fn parse_angle(s: &str) -> Option<f64> {
    let toks: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = ExprParser { t: &toks, i: 0 };
    let v = p.sum()?;
    (p.i == toks.len()).then_some(v)
}

struct ExprParser<'a> {
    t: &'a [char],
    i: usize,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<char> {
        self.t.get(self.i).copied()
    }

    fn sum(&mut self) -> Option<f64> {
        let mut v = self.product()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.i += 1;
            let r = self.product()?;
            v = if c == '+' { v + r } else { v - r };
        }
        Some(v)
    }

    fn product(&mut self) -> Option<f64> {
        let mut v = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            self.i += 1;
            let r = self.unary()?;
            v = if c == '*' { v * r } else { v / r };
        }
        Some(v)
    }

    fn unary(&mut self) -> Option<f64> {
        match self.peek()? {
            '-' => {
                self.i += 1;
                Some(-self.unary()?)
            }
            '+' => {
                self.i += 1;
                self.unary()
            }
            '(' => {
                self.i += 1;
                let v = self.sum()?;
                (self.peek()? == ')').then(|| self.i += 1)?;
                Some(v)
            }
            c if c.is_ascii_alphabetic() => {
                let start = self.i;
                while self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
                    self.i += 1;
                }
                let word: String = self.t[start..self.i].iter().collect();
                (word.eq_ignore_ascii_case("pi")).then_some(PI)
            }
            _ => {
                let start = self.i;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E')
                {
                    // allow exponents like 1e-3
                    if matches!(self.peek(), Some('e' | 'E'))
                        && matches!(self.t.get(self.i + 1), Some('-' | '+'))
                    {
                        self.i += 1;
                    }
                    self.i += 1;
                }
                let word: String = self.t[start..self.i].iter().collect();
                word.parse().ok()
            }
        }
    }
}

fn push_named(
    c: &mut Circuit,
    name: &str,
    qs: &[usize],
    angle: Option<f64>,
    line: usize,
) -> Result<()> {
    let arity = |n: usize| -> Result<()> {
        if qs.len() != n {
            Err(perr(
                line,
                format!("{name} expects {n} qubits, got {}", qs.len()),
            ))
        } else {
            Ok(())
        }
    };
    let need_angle = || angle.ok_or_else(|| perr(line, format!("{name} needs an angle")));
    let grow = |c: &mut Circuit| {
        if let Some(&m) = qs.iter().max() {
            c.qubits = c.qubits.max(m + 1);
        }
    };
    match name {
        "h" | "x" | "z" | "s" | "sdg" | "t" | "tdg" => {
            arity(1)?;
            grow(c);
            let q = qs[0];
            c.push(match name {
                "h" => Gate::H(q),
                "x" => Gate::X(q),
                "z" => Gate::Z(q),
                "s" => Gate::S(q),
                "sdg" => Gate::Sdg(q),
                "t" => Gate::T(q),
                _ => Gate::Tdg(q),
            })
        }
        "rz" | "u1" | "p" => {
            arity(1)?;
            grow(c);
            c.push(Gate::Rz(qs[0], need_angle()?))
        }
        "rx" => {
            arity(1)?;
            grow(c);
            c.push(Gate::Rx(qs[0], need_angle()?))
        }
        "cnot" | "cx" => {
            arity(2)?;
            grow(c);
            c.push(Gate::Cnot(qs[0], qs[1]))
        }
        "cz" => {
            arity(2)?;
            grow(c);
            c.push(Gate::Cz(qs[0], qs[1]))
        }
        "ccx" | "tof" | "toffoli" => {
            arity(3)?;
            grow(c);
            c.push_toffoli(qs[0], qs[1], qs[2])
        }
        "ccz" => {
            arity(3)?;
            grow(c);
            c.push_ccz(qs[0], qs[1], qs[2])
        }
        other => Err(Error::UnsupportedGate(other.to_string())),
    }
    .map_err(|e| match e {
        Error::UnsupportedGate(m) => perr(line, format!("unsupported gate: {m}")),
        e => e,
    })
}

/// Reads the plain gate-list format: one gate per line (`h 0`, `cnot 0 1`,
/// `rz 1 0.785`), `#` comments, and an optional `qubits N` line.
pub fn parse_circuit_text(src: &str) -> Result<Circuit> {
    let mut c = Circuit::new(0);
    let mut declared = None;
    for (no, raw) in src.lines().enumerate() {
        let line = no + 1;
        let text = raw.split('#').next().unwrap().trim();
        if text.is_empty() {
            continue;
        }
        let parts: Vec<&str> = text.split_whitespace().collect();
        let name = parts[0].to_ascii_lowercase();
        if name == "qubits" {
            let n = parts
                .get(1)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| perr(line, "qubits needs a count"))?;
            declared = Some(n);
            c.qubits = c.qubits.max(n);
            continue;
        }
        let takes_angle = matches!(name.as_str(), "rz" | "rx" | "u1" | "p");
        let (qargs, angle) = if takes_angle {
            if parts.len() != 3 {
                return Err(perr(line, format!("{name} expects a qubit and an angle")));
            }
            let a = parse_angle(parts[2]).ok_or_else(|| perr(line, "bad angle"))?;
            (&parts[1..2], Some(a))
        } else {
            (&parts[1..], None)
        };
        let qs = qargs
            .iter()
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| perr(line, format!("bad qubit {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        push_named(&mut c, &name, &qs, angle, line)?;
        if let Some(n) = declared {
            if c.qubits > n {
                return Err(perr(line, format!("qubit index beyond declared count {n}")));
            }
        }
    }
    Ok(c)
}

pub fn circuit_to_text(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.qubits);
    for g in &c.gates {
        let line = match *g {
            Gate::Cnot(a, b) => format!("cnot {a} {b}"),
            Gate::Cz(a, b) => format!("cz {a} {b}"),
            Gate::H(q) => format!("h {q}"),
            Gate::S(q) => format!("s {q}"),
            Gate::Sdg(q) => format!("sdg {q}"),
            Gate::Z(q) => format!("z {q}"),
            Gate::X(q) => format!("x {q}"),
            Gate::T(q) => format!("t {q}"),
            Gate::Tdg(q) => format!("tdg {q}"),
            Gate::Rz(q, t) => format!("rz {q} {t:?}"),
            Gate::Rx(q, t) => format!("rx {q} {t:?}"),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Reads the OpenQASM 2.0 subset covering the supported gate set. Multiple
/// `qreg`s are laid out one after another.
pub fn parse_qasm(src: &str) -> Result<Circuit> {
    let mut c = Circuit::new(0);
    let mut regs: HashMap<String, (usize, usize)> = HashMap::new();
    let mut line = 1;
    let stripped: String = src
        .lines()
        .map(|l| l.split("//").next().unwrap())
        .collect::<Vec<_>>()
        .join("\n");
    for stmt in stripped.split(';') {
        let here = line;
        line += stmt.matches('\n').count();
        let s = stmt.trim();
        if s.is_empty() {
            continue;
        }
        let lower = s.to_ascii_lowercase();
        if lower.starts_with("openqasm")
            || lower.starts_with("include")
            || lower.starts_with("creg")
            || lower.starts_with("barrier")
        {
            continue;
        }
        if let Some(rest) = lower.strip_prefix("qreg") {
            let (name, size) = parse_reg(rest.trim()).ok_or_else(|| perr(here, "bad qreg"))?;
            regs.insert(name, (c.qubits, size));
            c.qubits += size;
            continue;
        }
        let (head, args) = match s.find(|ch: char| ch.is_whitespace()) {
            Some(i) if !s[..i].contains('(') || s[..i].contains(')') => (&s[..i], &s[i..]),
            _ => {
                // gate(angle) args where the angle contains spaces
                let close = s
                    .find(')')
                    .ok_or_else(|| perr(here, "malformed statement"))?;
                (&s[..=close], &s[close + 1..])
            }
        };
        let (name, angle) = match head.find('(') {
            Some(i) => {
                let inner = head[i + 1..].trim_end_matches(')');
                let a =
                    parse_angle(inner).ok_or_else(|| perr(here, format!("bad angle {inner:?}")))?;
                (head[..i].to_ascii_lowercase(), Some(a))
            }
            None => (head.to_ascii_lowercase(), None),
        };
        let mut qs = Vec::new();
        for a in args.split(',') {
            let a = a.trim();
            let (reg, idx) =
                parse_reg(a).ok_or_else(|| perr(here, format!("bad argument {a:?}")))?;
            let (off, size) = regs
                .get(&reg.to_ascii_lowercase())
                .copied()
                .ok_or_else(|| perr(here, format!("unknown register {reg:?}")))?;
            if idx >= size {
                return Err(perr(here, format!("index {idx} out of range for {reg}")));
            }
            qs.push(off + idx);
        }
        let before = c.qubits;
        push_named(&mut c, &name, &qs, angle, here)?;
        c.qubits = before;
    }
    Ok(c)
}

fn parse_reg(s: &str) -> Option<(String, usize)> {
    let open = s.find('[')?;
    let close = s.find(']')?;
    let name = s[..open].trim().to_string();
    let idx = s[open + 1..close].trim().parse().ok()?;
    Some((name, idx))
}

/// Picks a reader from the file contents.
pub fn parse_circuit(src: &str) -> Result<Circuit> {
    if src.to_ascii_lowercase().contains("openqasm") || src.contains("qreg") {
        parse_qasm(src)
    } else {
        parse_circuit_text(src)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct JsonPhase {
    pub num: i64,
    pub den: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real: Option<f64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct JsonVertex {
    pub id: usize,
    pub kind: String,
    pub phase: JsonPhase,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct JsonEdge {
    pub u: usize,
    pub v: usize,
    pub kind: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct JsonScalar {
    pub re: f64,
    pub im: f64,
    pub sqrt2_power: i32,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct JsonDiagram {
    pub vertices: Vec<JsonVertex>,
    pub edges: Vec<JsonEdge>,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub scalar: JsonScalar,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn phase_to_json(p: Phase) -> JsonPhase {
    // phase = (num/den) * pi + real
    let k = p.eighths() as i64;
    let g = gcd(k, 4).max(1);
    JsonPhase {
        num: k / g,
        den: 4 / g,
        real: p.generic(),
    }
}

fn phase_from_json(p: &JsonPhase) -> Result<Phase> {
    if p.den <= 0 {
        return Err(Error::Json(format!("bad phase denominator {}", p.den)));
    }
    let base = if (4 * p.num) % p.den == 0 {
        Phase::pi4(4 * p.num / p.den)
    } else {
        Phase::from_radians(p.num as f64 * PI / p.den as f64)
    };
    Ok(match p.real {
        Some(r) => Phase::from_parts(base.eighths() as i64, base.generic().unwrap_or(0.0) + r),
        None => base,
    })
}

impl ZxDiagram {
    pub fn to_json_value(&self) -> JsonDiagram {
        JsonDiagram {
            vertices: self
                .vertices()
                .map(|v| JsonVertex {
                    id: v,
                    kind: match self.kind(v) {
                        VertexKind::Z => "z".into(),
                        VertexKind::Boundary => "boundary".into(),
                    },
                    phase: phase_to_json(self.phase(v)),
                })
                .collect(),
            edges: self
                .edges()
                .map(|(u, v, k)| JsonEdge {
                    u,
                    v,
                    kind: match k {
                        EdgeKind::Plain => "plain".into(),
                        EdgeKind::Hadamard => "hadamard".into(),
                    },
                })
                .collect(),
            inputs: self.inputs().to_vec(),
            outputs: self.outputs().to_vec(),
            scalar: JsonScalar {
                re: self.scalar().value.re,
                im: self.scalar().value.im,
                sqrt2_power: self.scalar().sqrt2_power,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serialisable")
    }

    pub fn from_json_value(j: &JsonDiagram) -> Result<ZxDiagram> {
        let mut d = ZxDiagram::new();
        for v in &j.vertices {
            let kind = match v.kind.as_str() {
                "z" | "Z" => VertexKind::Z,
                "boundary" | "b" => VertexKind::Boundary,
                k => return Err(Error::Json(format!("unknown vertex kind {k:?}"))),
            };
            d.add_vertex_with_id(v.id, kind, phase_from_json(&v.phase)?)?;
        }
        for e in &j.edges {
            let kind = match e.kind.as_str() {
                "plain" | "simple" => EdgeKind::Plain,
                "hadamard" | "h" => EdgeKind::Hadamard,
                k => return Err(Error::Json(format!("unknown edge kind {k:?}"))),
            };
            if !d.contains(e.u) || !d.contains(e.v) || e.u == e.v {
                return Err(Error::Json(format!("bad edge {}-{}", e.u, e.v)));
            }
            d.set_edge(e.u, e.v, kind);
        }
        for &b in j.inputs.iter().chain(&j.outputs) {
            if !d.contains(b) || !d.is_boundary(b) {
                return Err(Error::Json(format!("boundary list names non-boundary {b}")));
            }
        }
        d.set_inputs(j.inputs.clone());
        d.set_outputs(j.outputs.clone());
        *d.scalar_mut() = Scalar {
            value: num_complex::Complex64::new(j.scalar.re, j.scalar.im),
            sqrt2_power: j.scalar.sqrt2_power,
        };
        Ok(d)
    }

    pub fn from_json(s: &str) -> Result<ZxDiagram> {
        let j: JsonDiagram = serde_json::from_str(s)?;
        Self::from_json_value(&j)
    }
}
