//! The `bigframe v1` text format and the `operator v1` operand format.
//!
//! ```text
//! bigframe v1
//! dim <n>
//! count <m>
//! subdim <d_1>
//! phi
//! <d_1 rows of n entries, each entry `re im`>
//! psi
//! <d_1 rows>
//! ...
//! K
//! <n rows>
//! ```
//!
//! Entries are written with 17 significant digits so a round trip is exact.
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use thiserror::Error;

use crate::error::Result;
use crate::family::{BiGFrameSystem, GOperatorFamily};
use crate::linalg::{OperatorMatrix, C64};

pub const SYSTEM_HEADER: &str = "bigframe v1";
pub const OPERATOR_HEADER: &str = "operator v1";

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {reason}")]
pub struct ParseError {
    /// 1-based line number.
    pub line: usize,
    pub reason: String,
}

pub fn serialize(sys: &BiGFrameSystem) -> String {
    let n = sys.ambient_dim();
    let mut out = String::new();
    let _ = writeln!(out, "{SYSTEM_HEADER}");
    let _ = writeln!(out, "dim {n}");
    let _ = writeln!(out, "count {}", sys.len());
    for (phi, psi) in sys.phi.operators().iter().zip(sys.psi.operators()) {
        let _ = writeln!(out, "subdim {}", phi.nrows());
        out.push_str("phi\n");
        write_rows(&mut out, phi);
        out.push_str("psi\n");
        write_rows(&mut out, psi);
    }
    out.push_str("K\n");
    write_rows(&mut out, &sys.k_op);
    out
}

pub fn deserialize(text: &str) -> Result<BiGFrameSystem> {
    let mut cur = Cursor::new(text);
    cur.expect_exact(SYSTEM_HEADER)?;
    let n = cur.keyed_count("dim")?;
    let m = cur.keyed_usize("count")?;
    let mut phi = Vec::with_capacity(m);
    let mut psi = Vec::with_capacity(m);
    for i in 1..=m {
        let d = cur.keyed_count("subdim")?;
        cur.expect_exact("phi")?;
        phi.push(cur.rows(d, n, &format!("operator {i}"))?);
        cur.expect_exact("psi")?;
        psi.push(cur.rows(d, n, &format!("operator {i}"))?);
    }
    cur.expect_exact("K")?;
    let k = cur.rows(n, n, "K")?;
    cur.expect_end()?;
    BiGFrameSystem::new(GOperatorFamily::new(n, phi)?, GOperatorFamily::new(n, psi)?, k)
}

pub fn serialize_operator(m: &OperatorMatrix) -> String {
    let mut out = format!("{OPERATOR_HEADER}\nshape {} {}\n", m.nrows(), m.ncols());
    write_rows(&mut out, m);
    out
}

pub fn deserialize_operator(text: &str) -> Result<OperatorMatrix> {
    let mut cur = Cursor::new(text);
    cur.expect_exact(OPERATOR_HEADER)?;
    let (line, fields) = cur.keyed("shape")?;
    let dims: Vec<usize> = fields.iter().filter_map(|f| f.parse().ok()).collect();
    if fields.len() != 2 || dims.len() != 2 || dims.contains(&0) {
        return Err(ParseError { line, reason: "expected `shape <rows> <cols>` with positive sizes".into() }.into());
    }
    let m = cur.rows(dims[0], dims[1], "operator")?;
    cur.expect_end()?;
    Ok(m)
}

fn write_rows(out: &mut String, m: &OperatorMatrix) {
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|c| {
                let z = m[(r, c)];
                format!("{:.16e} {:.16e}", z.re, z.im)
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
}

struct Cursor<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        let all: Vec<&str> = text.lines().collect();
        let lines = all
            .iter()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        Self { lines, pos: 0, last_line: all.len() }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.pos).copied()
    }

    fn eof_error(&self, section: &str) -> ParseError {
        ParseError {
            line: self.last_line + 1,
            reason: format!("unexpected end of input: missing section `{section}`"),
        }
    }

    fn next(&mut self, section: &str) -> std::result::Result<(usize, &'a str), ParseError> {
        let item = self.peek().ok_or_else(|| self.eof_error(section))?;
        self.pos += 1;
        Ok(item)
    }

    fn expect_exact(&mut self, want: &str) -> std::result::Result<(), ParseError> {
        let (line, text) = self.next(want)?;
        let got = text.split_whitespace().collect::<Vec<_>>().join(" ");
        if got != want {
            return Err(ParseError { line, reason: format!("expected `{want}`, found `{text}`") });
        }
        Ok(())
    }

    fn keyed(&mut self, key: &str) -> std::result::Result<(usize, Vec<&'a str>), ParseError> {
        let (line, text) = self.next(key)?;
        let mut parts = text.split_whitespace();
        if parts.next() != Some(key) {
            return Err(ParseError { line, reason: format!("expected `{key}`, found `{text}`") });
        }
        Ok((line, parts.collect()))
    }

    fn keyed_usize(&mut self, key: &str) -> std::result::Result<usize, ParseError> {
        let (line, fields) = self.keyed(key)?;
        match fields.as_slice() {
            [v] => v
                .parse()
                .map_err(|_| ParseError { line, reason: format!("`{key}` needs a nonnegative integer") }),
            _ => Err(ParseError { line, reason: format!("`{key}` takes exactly one value") }),
        }
    }

    fn keyed_count(&mut self, key: &str) -> std::result::Result<usize, ParseError> {
        let line = self.peek().map_or(self.last_line + 1, |(l, _)| l);
        match self.keyed_usize(key)? {
            0 => Err(ParseError { line, reason: format!("`{key}` must be positive") }),
            v => Ok(v),
        }
    }

    fn rows(&mut self, rows: usize, cols: usize, what: &str) -> std::result::Result<OperatorMatrix, ParseError> {
        let mut m = OperatorMatrix::zeros(rows, cols);
        for r in 0..rows {
            let (line, text) = match self.peek() {
                None => {
                    return Err(ParseError {
                        line: self.last_line + 1,
                        reason: format!("{what}: expected {rows} rows, input ended after {r}"),
                    })
                }
                Some(item) => item,
            };
            let first = text.split_whitespace().next().unwrap_or("");
            if first.starts_with(|c: char| c.is_ascii_alphabetic()) && first.parse::<f64>().is_err() {
                return Err(ParseError { line, reason: format!("{what}: expected {rows} rows") });
            }
            self.pos += 1;
            let tokens: Vec<&str> = text.split_whitespace().collect();
            if tokens.len() != 2 * cols {
                return Err(ParseError { line, reason: format!("expected {cols} entries") });
            }
            for c in 0..cols {
                let re = parse_real(tokens[2 * c], line)?;
                let im = parse_real(tokens[2 * c + 1], line)?;
                m[(r, c)] = C64::new(re, im);
            }
        }
        Ok(m)
    }

    fn expect_end(&mut self) -> std::result::Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some((line, text)) => Err(ParseError { line, reason: format!("trailing content `{text}`") }),
        }
    }
}

fn parse_real(token: &str, line: usize) -> std::result::Result<f64, ParseError> {
    match token.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(ParseError { line, reason: format!("non-finite entry `{token}`") }),
        Err(_) => Err(ParseError { line, reason: format!("invalid number `{token}`") }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::instances::fixtures::{example_3_4, example_3_6};
    use crate::instances::random::{random_system, GeneratorSpec, SystemKind};

    fn parse_err(text: &str) -> ParseError {
        match deserialize(text) {
            Err(Error::Parse(e)) => e,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn round_trip_fixtures_exactly() {
        for sys in [example_3_4(), example_3_6()] {
            assert_eq!(deserialize(&serialize(&sys)).unwrap(), sys);
        }
    }

    #[test]
    fn round_trip_random_is_bit_exact() {
        for seed in 0..50 {
            let sys = random_system(&GeneratorSpec::new(5, 3, SystemKind::Generic, seed)).unwrap();
            let back = deserialize(&serialize(&sys)).unwrap();
            for (a, b) in sys.phi.operators().iter().zip(back.phi.operators()) {
                for (x, y) in a.iter().zip(b.iter()) {
                    assert_eq!(x.re.to_bits(), y.re.to_bits());
                    assert_eq!(x.im.to_bits(), y.im.to_bits());
                }
            }
            assert_eq!(back, sys);
        }
    }

    #[test]
    fn header_layout() {
        let text = serialize(&example_3_4());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(&lines[..5], &["bigframe v1", "dim 4", "count 4", "subdim 1", "phi"]);
        assert!(lines[5].starts_with("1.0000000000000000e0 0.0000000000000000e0"));
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = serialize(&example_3_6()).replace("count 4\n", "# a comment\n\ncount 4\n");
        assert_eq!(deserialize(&text).unwrap(), example_3_6());
    }

    #[test]
    fn truncated_stream_names_missing_section() {
        let text = serialize(&example_3_4());
        let cut: String = text.lines().take_while(|l| *l != "K").map(|l| format!("{l}\n")).collect();
        let e = parse_err(&cut);
        assert!(e.reason.contains("missing section `K`"), "{e}");
        assert_eq!(e.line, cut.lines().count() + 1);
    }

    #[test]
    fn short_row_reports_entry_count() {
        let mut lines: Vec<String> = serialize(&example_3_4()).lines().map(String::from).collect();
        // line 11 is the first row of operator 2's phi block
        let tokens: Vec<&str> = lines[10].split_whitespace().take(6).collect();
        lines[10] = tokens.join(" ");
        let e = parse_err(&lines.join("\n"));
        assert_eq!(e.to_string(), "line 11: expected 4 entries");
    }

    #[test]
    fn mismatched_subdim_reports_operator() {
        let mut lines: Vec<String> = serialize(&example_3_4()).lines().map(String::from).collect();
        let pos = lines.iter().position(|l| l == "subdim 3").unwrap();
        lines[pos] = "subdim 4".into();
        let e = parse_err(&lines.join("\n"));
        assert!(e.reason.contains("operator 3: expected 4 rows"), "{e}");

        let mut lines: Vec<String> = serialize(&example_3_4()).lines().map(String::from).collect();
        let pos = lines.iter().position(|l| l == "subdim 3").unwrap();
        lines.remove(pos + 2);
        let e = parse_err(&lines.join("\n"));
        assert_eq!(e.reason, "operator 3: expected 3 rows");
    }

    #[test]
    fn rejects_bad_tokens() {
        let text = serialize(&example_3_6());
        assert_eq!(parse_err(&text.replacen("bigframe v1", "bigframe v2", 1)).line, 1);
        let e = parse_err(&text.replacen("1.0000000000000000e0", "NaN", 1));
        assert!(e.reason.contains("non-finite"));
        let e = parse_err(&text.replacen("1.0000000000000000e0 0.0000000000000000e0", "1 zz", 1));
        assert!(e.reason.contains("invalid number"));
        let e = parse_err(&format!("{text}extra\n"));
        assert!(e.reason.contains("trailing"));
        assert!(parse_err("").reason.contains("missing section"));
    }

    #[test]
    fn operator_round_trip() {
        let sys = example_3_4();
        let m = sys.phi.operator(2).clone();
        assert_eq!(deserialize_operator(&serialize_operator(&m)).unwrap(), m);
        assert!(deserialize_operator("operator v1\nshape 0 2\n").is_err());
        assert!(deserialize_operator("operator v1\nshape 1 1\n1 0 2 0\n").is_err());
    }
}
