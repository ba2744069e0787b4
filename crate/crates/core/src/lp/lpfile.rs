//! Writer for the text LP layout read by most external solvers.

use std::io::{self, Write};

use super::LpProblem;

fn sanitize(name: &str, fallback: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "_.[]".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect();
    match s.chars().next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => s,
        Some(_) => format!("{fallback}{s}"),
        None => fallback.to_string(),
    }
}

fn write_terms<W: Write>(out: &mut W, terms: &[(usize, f64)], names: &[String]) -> io::Result<()> {
    if terms.is_empty() {
        return write!(out, " 0 {}", names.first().map(String::as_str).unwrap_or("x"));
    }
    for (k, &(j, a)) in terms.iter().enumerate() {
        let sign = if a < 0.0 {
            "-"
        } else if k == 0 {
            ""
        } else {
            "+"
        };
        write!(out, " {sign} {:e} {}", a.abs(), names[j])?;
    }
    Ok(())
}

/// Writes `p` in LP format. Names are sanitized and made unique by prefix.
pub fn write_lp_file<W: Write>(p: &LpProblem, out: &mut W) -> io::Result<()> {
    let names: Vec<String> = p
        .names
        .iter()
        .enumerate()
        .map(|(j, n)| format!("x{j}_{}", sanitize(n, "v")))
        .collect();
    writeln!(out, "Minimize")?;
    write!(out, " obj:")?;
    let obj: Vec<(usize, f64)> = p
        .cost
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(j, c)| (j, *c))
        .collect();
    write_terms(out, &obj, &names)?;
    writeln!(out)?;
    writeln!(out, "Subject To")?;
    for (i, row) in p.rows.iter().enumerate() {
        write!(out, " r{i}_{}:", sanitize(&row.name, "r"))?;
        write_terms(out, &row.terms, &names)?;
        writeln!(out, " {} {:e}", row.relation.symbol(), row.rhs)?;
    }
    writeln!(out, "Bounds")?;
    for (j, name) in names.iter().enumerate() {
        let (lo, up) = (p.lower[j], p.upper[j]);
        match (lo.is_finite(), up.is_finite()) {
            (false, false) => writeln!(out, " {name} free")?,
            (true, true) if lo == up => writeln!(out, " {name} = {lo:e}")?,
            (true, true) => writeln!(out, " {lo:e} <= {name} <= {up:e}")?,
            (true, false) => writeln!(out, " {name} >= {lo:e}")?,
            (false, true) => writeln!(out, " -inf <= {name} <= {up:e}")?,
        }
    }
    writeln!(out, "End")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Relation;

    #[test]
    fn writes_all_sections() {
        let mut p = LpProblem::new();
        let x = p.add_var("cap RE", 0.0, 5.0, 2.0);
        let y = p.add_var("free", f64::NEG_INFINITY, f64::INFINITY, 0.0);
        p.add_row("bal-1", vec![(x, 1.0), (y, -1.0)], Relation::Eq, 1.0);
        let mut buf = Vec::new();
        write_lp_file(&p, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("x0_cap_RE"));
        assert!(text.contains("r0_bal_1:"));
        assert!(text.contains("x1_free free"));
        assert!(text.trim_end().ends_with("End"));
    }
}
