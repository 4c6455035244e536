//! Plain-text algebra definitions.
//!
//! ```text
//! name sl2r
//! [basis]
//! H E F
//! [bracket]
//! H E -> 0 2 0
//! H F -> 0 0 -2
//! E F -> 1 0 0
//! [theta]
//! -1 0 0
//! 0 0 -1
//! 0 -1 0
//! [realization]
//! H = 1 0; 0 -1
//! E = 0 1; 0 0
//! F = 0 0; 1 0
//! ```
//!
//! Bracket lines give `[e_i, e_j]` by label or index, coefficients as exact
//! rationals `p/q`. `theta` row `i` holds the `e_i` coefficients of
//! `theta(e_0), ..., theta(e_{d-1})`. Realization entries may be complex
//! (`1/2+3i`, `-i`), in which case the matrices are stored realified; the
//! involution is `g -> (g^dagger)^{-1}`. Lines starting with `#` are comments.

use std::path::Path;

use num::{One, Zero};

use crate::algebra::{realify, validate_algebra, InvolutionRule, MatrixRealization, StructuredLieAlgebra};
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Q};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Header,
    Basis,
    Bracket,
    Theta,
    Realization,
}

struct Ctx<'a> {
    path: &'a str,
}

impl Ctx<'_> {
    fn err(&self, line: usize, column: usize, message: impl Into<String>) -> Error {
        Error::Syntax {
            path: self.path.to_string(),
            line,
            column,
            message: message.into(),
        }
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(s: &str, offset: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        if ch.is_whitespace() {
            if let Some(b) = start.take() {
                out.push((offset + b + 1, &s[b..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(b) = start {
        out.push((offset + b + 1, &s[b..]));
    }
    out
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` into (re, im).
fn parse_complex(s: &str) -> Option<(Q, Q)> {
    if let Some(body) = s.strip_suffix('i') {
        // split at the last sign that is not in leading position
        let split = body
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last();
        let (re, im) = match split {
            Some(k) => (parse_rational(&body[..k])?, &body[k..]),
            None => (Q::zero(), body),
        };
        let im = match im {
            "" | "+" => Q::one(),
            "-" => -Q::one(),
            t => parse_rational(t.strip_prefix('+').unwrap_or(t))?,
        };
        Some((re, im))
    } else {
        Some((parse_rational(s)?, Q::zero()))
    }
}

pub fn parse_algebra_file(path: impl AsRef<Path>) -> Result<StructuredLieAlgebra> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_algebra_str(&text, &path.display().to_string())
}

/// Parses and validates; validation failure is an error naming the axiom.
pub fn parse_algebra_str(text: &str, path: &str) -> Result<StructuredLieAlgebra> {
    let ctx = Ctx { path };
    let mut section = Section::Header;
    let mut seen = Vec::new();
    let mut name = String::from("custom");
    let mut labels: Vec<String> = Vec::new();
    let mut brackets: Vec<(usize, usize, Vec<Q>)> = Vec::new();
    let mut theta: Vec<Vec<Q>> = Vec::new();
    let mut images: Vec<(usize, Vec<Vec<(Q, Q)>>)> = Vec::new();
    let mut last_line = 0;

    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        last_line = ln;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start().len();
        let trimmed = line.trim();
        if trimmed.starts_with('[') {
            let next = match trimmed {
                "[basis]" => Section::Basis,
                "[bracket]" => Section::Bracket,
                "[theta]" => Section::Theta,
                "[realization]" => Section::Realization,
                other => return Err(ctx.err(ln, indent + 1, format!("unknown section {other}"))),
            };
            if seen.contains(&(next as u8)) {
                return Err(ctx.err(ln, indent + 1, format!("duplicate section {trimmed}")));
            }
            if next != Section::Basis && labels.is_empty() {
                return Err(ctx.err(ln, indent + 1, "[basis] must come first"));
            }
            seen.push(next as u8);
            section = next;
            continue;
        }
        let toks = tokens(line, 0);
        let label_index = |col: usize, tok: &str| -> Result<usize> {
            if let Some(i) = labels.iter().position(|l| l == tok) {
                return Ok(i);
            }
            match tok.parse::<usize>() {
                Ok(i) if i < labels.len() => Ok(i),
                _ => Err(ctx.err(ln, col, format!("unknown basis element '{tok}'"))),
            }
        };
        let rational = |col: usize, tok: &str| -> Result<Q> {
            parse_rational(tok).ok_or_else(|| ctx.err(ln, col, format!("expected a rational, found '{tok}'")))
        };
        match section {
            Section::Header => {
                if toks[0].1 != "name" || toks.len() != 2 {
                    return Err(ctx.err(ln, toks[0].0, "expected 'name <id>' or a section header"));
                }
                name = toks[1].1.to_string();
            }
            Section::Basis => {
                for (col, t) in toks {
                    if labels.iter().any(|l| l == t) {
                        return Err(ctx.err(ln, col, format!("duplicate label '{t}'")));
                    }
                    if t.parse::<usize>().is_ok() {
                        return Err(ctx.err(ln, col, "labels must not be plain integers"));
                    }
                    labels.push(t.to_string());
                }
            }
            Section::Bracket => {
                let d = labels.len();
                if toks.len() < 3 || toks[2].1 != "->" {
                    return Err(ctx.err(ln, toks[0].0, "expected 'i j -> c_1 ... c_d'"));
                }
                let i = label_index(toks[0].0, toks[0].1)?;
                let j = label_index(toks[1].0, toks[1].1)?;
                let coeffs: Vec<Q> = toks[3..].iter().map(|(c, t)| rational(*c, t)).collect::<Result<_>>()?;
                if coeffs.len() != d {
                    return Err(ctx.err(ln, toks[2].0, format!("expected {d} coefficients, found {}", coeffs.len())));
                }
                if i == j {
                    return Err(ctx.err(ln, toks[1].0, "[x, x] is zero by definition"));
                }
                if brackets.iter().any(|(a, b, _)| (*a, *b) == (i, j) || (*a, *b) == (j, i)) {
                    return Err(ctx.err(ln, toks[0].0, "bracket given twice"));
                }
                brackets.push((i, j, coeffs));
            }
            Section::Theta => {
                let d = labels.len();
                if toks.len() != d {
                    return Err(ctx.err(ln, toks[0].0, format!("theta row needs {d} entries, found {}", toks.len())));
                }
                if theta.len() == d {
                    return Err(ctx.err(ln, toks[0].0, "too many theta rows"));
                }
                theta.push(toks.iter().map(|(c, t)| rational(*c, t)).collect::<Result<_>>()?);
            }
            Section::Realization => {
                let eq = line
                    .find('=')
                    .ok_or_else(|| ctx.err(ln, indent + 1, "expected '<label> = row; row; ...'"))?;
                let head = tokens(&line[..eq], 0);
                if head.len() != 1 {
                    return Err(ctx.err(ln, indent + 1, "expected a single basis label before '='"));
                }
                let idx = label_index(head[0].0, head[0].1)?;
                if images.iter().any(|(i, _)| *i == idx) {
                    return Err(ctx.err(ln, head[0].0, "matrix given twice"));
                }
                let mut rows = Vec::new();
                let mut offset = eq + 1;
                for part in line[eq + 1..].split(';') {
                    let row: Vec<(Q, Q)> = tokens(part, offset)
                        .into_iter()
                        .map(|(c, t)| {
                            parse_complex(t).ok_or_else(|| ctx.err(ln, c, format!("expected a complex rational, found '{t}'")))
                        })
                        .collect::<Result<_>>()?;
                    rows.push(row);
                    offset += part.len() + 1;
                }
                let n = rows.len();
                if let Some(bad) = rows.iter().position(|r| r.len() != n) {
                    return Err(ctx.err(ln, eq + 2, format!("row {} has {} entries; matrix must be {n}x{n}", bad + 1, rows[bad].len())));
                }
                if let Some((_, first)) = images.first() {
                    if first.len() != n {
                        return Err(ctx.err(ln, eq + 2, format!("matrices must all be {}x{}", first.len(), first.len())));
                    }
                }
                images.push((idx, rows));
            }
        }
    }

    let end = last_line.max(1);
    if labels.is_empty() {
        return Err(ctx.err(end, 1, "missing [basis] section"));
    }
    if theta.len() != labels.len() {
        return Err(ctx.err(end, 1, format!("[theta] needs {} rows, found {}", labels.len(), theta.len())));
    }
    let mut alg = StructuredLieAlgebra::new(name, labels.clone(), &brackets, theta)?;
    let report = validate_algebra(&alg);
    if !report.passed {
        let mut msg = report.failures.join("; ");
        if let Some([i, j, k]) = report.jacobi_witness.filter(|_| report.jacobi > 0.0) {
            msg.push_str(&format!("; Jacobi witness ({}, {}, {})", labels[i], labels[j], labels[k]));
        }
        return Err(Error::InvalidAlgebra(msg));
    }
    if !images.is_empty() {
        if images.len() != labels.len() {
            return Err(ctx.err(end, 1, format!("[realization] needs {} matrices, found {}", labels.len(), images.len())));
        }
        images.sort_by_key(|(i, _)| *i);
        let complex = images.iter().any(|(_, m)| m.iter().flatten().any(|(_, im)| !im.is_zero()));
        let mats: Vec<Vec<Vec<Q>>> = images
            .into_iter()
            .map(|(_, m)| {
                let re: Vec<Vec<Q>> = m.iter().map(|r| r.iter().map(|(a, _)| a.clone()).collect()).collect();
                if complex {
                    let im: Vec<Vec<Q>> = m.iter().map(|r| r.iter().map(|(_, b)| b.clone()).collect()).collect();
                    realify(&re, &im)
                } else {
                    re
                }
            })
            .collect();
        alg = alg.with_realization(MatrixRealization {
            size: mats[0].len(),
            images: mats,
            involution: InvolutionRule::TransposeInverse,
            realified: complex,
        });
        let rr = alg.validate_realization()?;
        if !rr.passed {
            return Err(Error::InvalidAlgebra(format!(
                "realization does not match the bracket table or theta (commutator residual {:e}, involution residual {:e})",
                rr.commutator_residual, rr.involution_residual
            )));
        }
    }
    Ok(alg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SL2: &str = "name sl2r\n[basis]\nH E F\n[bracket]\nH E -> 0 2 0\nH F -> 0 0 -2\nE F -> 1 0 0\n[theta]\n-1 0 0\n0 0 -1\n0 -1 0\n[realization]\nH = 1 0; 0 -1\nE = 0 1; 0 0\nF = 0 0; 1 0\n";

    #[test]
    fn complex_entries() {
        assert_eq!(parse_complex("1/2+3i"), Some((Q::new(1.into(), 2.into()), Q::from_integer(3.into()))));
        assert_eq!(parse_complex("-i"), Some((Q::zero(), -Q::one())));
        assert_eq!(parse_complex("2-i"), Some((Q::from_integer(2.into()), -Q::one())));
        assert_eq!(parse_complex("-3/4"), Some((Q::new((-3).into(), 4.into()), Q::zero())));
        assert_eq!(parse_complex("x"), None);
    }

    #[test]
    fn sl2_parses_and_validates() {
        let a = parse_algebra_str(SL2, "mem").unwrap();
        assert_eq!((a.dim(), a.dim_k(), a.dim_p()), (3, 1, 2));
        assert!(a.realization().is_some());
    }

    #[test]
    fn syntax_errors_carry_position() {
        let bad = SL2.replace("E F -> 1 0 0", "E F -> 1 x 0");
        match parse_algebra_str(&bad, "mem") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (7, 10)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_algebra_str("", "mem"), Err(Error::Syntax { line: 1, .. })));
    }

    #[test]
    fn jacobi_violation_is_rejected_with_witness() {
        let bad = SL2.replace("E F -> 1 0 0", "E F -> 1 1 0");
        let msg = parse_algebra_str(&bad, "mem").unwrap_err().to_string();
        assert!(msg.contains("Jacobi witness (H, E, F)"), "{msg}");
    }

    #[test]
    fn realization_mismatch_is_rejected() {
        let bad = SL2.replace("E = 0 1; 0 0", "E = 0 2; 0 0");
        assert!(matches!(parse_algebra_str(&bad, "mem"), Err(Error::InvalidAlgebra(_))));
    }
}
