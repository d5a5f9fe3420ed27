//! Built-in `[[b, 1]]` encoders and a strict text format for user-defined
//! codes.
//!
//! Built-in names (parsed case-insensitively, parentheses optional):
//!
//! * `rep(b)` — repetition code in the computational basis: stabilizers
//!   `Z_j Z_{j+1}`, logical X = `X⊗…⊗X`, logical Z = `Z I … I`; corrects
//!   bit flips, exposed to phase flips.
//! * `bell` — the two-qubit encoder whose tree alternates error types:
//!   `rep(2)` pre-composed with a Hadamard on the input qubit, so the
//!   logical Z representative is X-type (`XX`) and the logical X
//!   representative is Z-type (`ZI`).
//! * `bell_variant(k)`, `k = 1..4` — the four Hadamard placements on the
//!   two-qubit encoder: `1` is plain `rep(2)`, `2` is `bell`, `3` moves the
//!   Hadamard to the data output, `4` to the ancilla output. Variants 3 and
//!   4 are not CSS and have unit spectral radius.
//! * `shor(n)` (odd `n`) — generalized Shor code on `n²` qubits: `n` inner
//!   repetition blocks correcting bit flips, glued by X-type cross-block
//!   stabilizers correcting phase flips, oriented so both logicals are
//!   pure-type.
//! * `steane7` — the self-dual seven-qubit code, distance 3 on both axes.
//! * `shor9_standard` — alias for `shor(3)`.

use crate::pauli::{CliffordEncoder, PauliString, SingleQubitPauli};
use crate::{Error, Result};
use std::path::Path;

/// A code loaded from (or destined for) the text format: an encoder plus
/// its display name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedCode {
    pub name: String,
    pub encoder: CliffordEncoder,
}

/// Names accepted by [`builtin`], with parameter placeholders.
pub const BUILTIN_NAMES: [&str; 6] = [
    "rep(b)",
    "bell",
    "bell_variant(k) k=1..4",
    "shor(n) odd n",
    "steane7",
    "shor9_standard",
];

fn p(s: &str) -> PauliString {
    s.parse().expect("builtin Pauli literal")
}

/// Repetition encoder on `b ≥ 2` qubits: `Z`-pair stabilizers copy the
/// computational basis, protecting against bit flips (`d_x = b`, `d_z = 1`).
pub fn rep(b: usize) -> Result<CliffordEncoder> {
    if b < 2 {
        return Err(Error::BadInput(format!(
            "rep(b) needs b >= 2, got {b}"
        )));
    }
    let mut stabilizers = Vec::with_capacity(b - 1);
    for j in 0..b - 1 {
        let mut s = PauliString::identity(b);
        s.set_letter(j, SingleQubitPauli::Z);
        s.set_letter(j + 1, SingleQubitPauli::Z);
        stabilizers.push(s);
    }
    let logical_x = PauliString::from_letters(&vec![SingleQubitPauli::X; b]);
    let logical_z = PauliString::from_single(b, 0, SingleQubitPauli::Z);
    Ok(CliffordEncoder::new(stabilizers, logical_x, logical_z)?
        .declare_distances(Some(b), Some(1)))
}

/// The alternating two-qubit encoder (`bell_variant(2)`).
pub fn bell() -> CliffordEncoder {
    CliffordEncoder::new(vec![p("ZZ")], p("ZI"), p("XX"))
        .expect("bell encoder is valid")
        .declare_distances(Some(2), Some(1))
}

/// One of the four Hadamard placements on the two-qubit encoder.
pub fn bell_variant(k: usize) -> Result<CliffordEncoder> {
    let enc = match k {
        // Plain rep(2): no Hadamard anywhere.
        1 => rep(2)?,
        // Hadamard on the encoder input: the alternating encoder.
        2 => bell(),
        // Hadamard on the data output wire: conjugates qubit 0 of every
        // operator, X <-> Z. Representatives chosen to minimize the
        // weight-transition spectral radius (logical Z = IZ, not XI).
        3 => CliffordEncoder::new(vec![p("XZ")], p("ZX"), p("IZ"))?
            .declare_distances(Some(1), Some(1)),
        // Hadamard on the ancilla output wire: conjugates qubit 1.
        4 => CliffordEncoder::new(vec![p("ZX")], p("XZ"), p("ZI"))?
            .declare_distances(Some(1), Some(1)),
        _ => {
            return Err(Error::BadInput(format!(
                "bell_variant(k) needs k in 1..=4, got {k}"
            )))
        }
    };
    Ok(enc)
}

/// Generalized Shor encoder on `n²` qubits for odd `n ≥ 3`: Z-type pair
/// stabilizers within each of the `n` blocks plus X-type stabilizers across
/// adjacent blocks, logical X = `X⊗…⊗X` on block 0, logical Z = one `Z` per
/// block.
pub fn shor(n: usize) -> Result<CliffordEncoder> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::BadInput(format!(
            "shor(n) needs odd n >= 3, got {n}"
        )));
    }
    let b = n * n;
    let mut stabilizers = Vec::with_capacity(b - 1);
    // n(n-1) Z-type generators: adjacent pairs inside each block.
    for block in 0..n {
        for k in 0..n - 1 {
            let mut s = PauliString::identity(b);
            s.set_letter(block * n + k, SingleQubitPauli::Z);
            s.set_letter(block * n + k + 1, SingleQubitPauli::Z);
            stabilizers.push(s);
        }
    }
    // (n-1) X-type generators: full X support on adjacent block pairs.
    for block in 0..n - 1 {
        let mut s = PauliString::identity(b);
        for q in 0..2 * n {
            s.set_letter(block * n + q, SingleQubitPauli::X);
        }
        stabilizers.push(s);
    }
    let mut logical_x = PauliString::identity(b);
    for q in 0..n {
        logical_x.set_letter(q, SingleQubitPauli::X);
    }
    let mut logical_z = PauliString::identity(b);
    for block in 0..n {
        logical_z.set_letter(block * n, SingleQubitPauli::Z);
    }
    let enc = CliffordEncoder::new(stabilizers, logical_x, logical_z)?;
    Ok(enc.declare_distances(Some(n), Some(n)))
}

/// The seven-qubit self-dual code with distance 3 on both axes.
pub fn steane7() -> CliffordEncoder {
    let rows = ["1000111", "0101011", "0011101"];
    let mut stabilizers = Vec::with_capacity(6);
    for letter in [SingleQubitPauli::X, SingleQubitPauli::Z] {
        for row in rows {
            let mut s = PauliString::identity(7);
            for (q, c) in row.chars().enumerate() {
                if c == '1' {
                    s.set_letter(q, letter);
                }
            }
            stabilizers.push(s);
        }
    }
    let logical_x = p("IIIXXXI");
    let logical_z = p("IIIZZZI");
    CliffordEncoder::new(stabilizers, logical_x, logical_z)
        .expect("steane7 encoder is valid")
        .declare_distances(Some(3), Some(3))
}

/// Looks up a built-in encoder by name, e.g. `rep(3)`, `rep3`, `bell`,
/// `bell_variant(4)`, `shor(3)`, `steane7`, `shor9_standard`.
pub fn builtin(name: &str) -> Result<CliffordEncoder> {
    let norm: String = name
        .trim()
        .to_ascii_lowercase()
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    let parse_param = |prefix: &str| -> Option<std::result::Result<usize, ()>> {
        let rest = norm.strip_prefix(prefix)?;
        let digits = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(rest);
        if digits.is_empty() {
            return None;
        }
        Some(digits.parse::<usize>().map_err(|_| ()))
    };
    match norm.as_str() {
        "bell" => return Ok(bell()),
        "steane7" => return Ok(steane7()),
        "shor9_standard" => return shor(3),
        _ => {}
    }
    if let Some(param) = parse_param("rep") {
        return match param {
            Ok(b) => rep(b),
            Err(()) => Err(Error::UnknownCode(name.to_string())),
        };
    }
    if let Some(param) = parse_param("bell_variant") {
        return match param {
            Ok(k) => bell_variant(k),
            Err(()) => Err(Error::UnknownCode(name.to_string())),
        };
    }
    if let Some(param) = parse_param("shor") {
        return match param {
            Ok(n) => shor(n),
            Err(()) => Err(Error::UnknownCode(name.to_string())),
        };
    }
    Err(Error::UnknownCode(name.to_string()))
}

/// Renders an encoder in the text format. The format is line-oriented
/// `key: value`; `#` starts a comment; `stabilizer` repeats once per
/// generator; every other key appears at most once.
pub fn to_text(enc: &CliffordEncoder, name: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("name: {name}\n"));
    out.push_str(&format!("b: {}\n", enc.b()));
    for s in enc.stabilizers() {
        out.push_str(&format!("stabilizer: {s}\n"));
    }
    out.push_str(&format!("logical_x: {}\n", enc.logical_x()));
    out.push_str(&format!("logical_z: {}\n", enc.logical_z()));
    if let Some(d) = enc.d_x() {
        out.push_str(&format!("d_x: {d}\n"));
    }
    if let Some(d) = enc.d_z() {
        out.push_str(&format!("d_z: {d}\n"));
    }
    out
}

fn set_once<T>(slot: &mut Option<T>, v: T, what: &str, line_no: usize) -> Result<()> {
    if slot.is_some() {
        return Err(Error::Parse {
            line: line_no,
            msg: format!("duplicate key `{what}`"),
        });
    }
    *slot = Some(v);
    Ok(())
}

/// Parses the text format and validates the resulting encoder.
pub fn from_text(text: &str) -> Result<NamedCode> {
    let mut name: Option<String> = None;
    let mut b: Option<usize> = None;
    let mut stabilizers: Vec<(usize, PauliString)> = Vec::new();
    let mut logical_x: Option<PauliString> = None;
    let mut logical_z: Option<PauliString> = None;
    let mut d_x: Option<usize> = None;
    let mut d_z: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once(':').ok_or(Error::Parse {
            line: line_no,
            msg: format!("expected `key: value`, got `{line}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let parse_usize = |what: &str| -> Result<usize> {
            value.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("{what} must be a non-negative integer, got `{value}`"),
            })
        };
        let parse_pauli = |what: &str| -> Result<PauliString> {
            value.parse().map_err(|e| Error::Parse {
                line: line_no,
                msg: format!("{what}: {e}"),
            })
        };
        match key {
            "name" => set_once(&mut name, value.to_string(), "name", line_no)?,
            "b" => set_once(&mut b, parse_usize("b")?, "b", line_no)?,
            "stabilizer" => stabilizers.push((line_no, parse_pauli("stabilizer")?)),
            "logical_x" => {
                set_once(&mut logical_x, parse_pauli("logical_x")?, "logical_x", line_no)?
            }
            "logical_z" => {
                set_once(&mut logical_z, parse_pauli("logical_z")?, "logical_z", line_no)?
            }
            "d_x" => set_once(&mut d_x, parse_usize("d_x")?, "d_x", line_no)?,
            "d_z" => set_once(&mut d_z, parse_usize("d_z")?, "d_z", line_no)?,
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("unknown key `{other}`"),
                })
            }
        }
    }

    let b = b.ok_or(Error::Parse {
        line: 0,
        msg: "missing required key `b`".to_string(),
    })?;
    let logical_x = logical_x.ok_or(Error::Parse {
        line: 0,
        msg: "missing required key `logical_x`".to_string(),
    })?;
    let logical_z = logical_z.ok_or(Error::Parse {
        line: 0,
        msg: "missing required key `logical_z`".to_string(),
    })?;
    for (line, s) in &stabilizers {
        if s.n() != b {
            return Err(Error::Parse {
                line: *line,
                msg: format!("stabilizer acts on {} qubits but b = {b}", s.n()),
            });
        }
    }
    for (what, op) in [("logical_x", &logical_x), ("logical_z", &logical_z)] {
        if op.n() != b {
            return Err(Error::Parse {
                line: 0,
                msg: format!("{what} acts on {} qubits but b = {b}", op.n()),
            });
        }
    }
    let encoder = CliffordEncoder::new(
        stabilizers.into_iter().map(|(_, s)| s).collect(),
        logical_x,
        logical_z,
    )?
    .declare_distances(d_x, d_z);
    Ok(NamedCode {
        name: name.unwrap_or_else(|| "custom".to_string()),
        encoder,
    })
}

/// Writes the text format to a file.
pub fn save(enc: &CliffordEncoder, name: &str, path: &Path) -> Result<()> {
    std::fs::write(path, to_text(enc, name))?;
    Ok(())
}

/// Reads and validates a code file.
pub fn load(path: &Path) -> Result<NamedCode> {
    let text = std::fs::read_to_string(path)?;
    from_text(&text)
}
