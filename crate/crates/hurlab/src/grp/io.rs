//! Plain-text group formats.
//!
//! Table format:
//!
//! ```text
//! order 3
//! 0 1 2
//! 1 2 0
//! 2 0 1
//! gamma
//! 0 1 2
//! 0 2 1
//! ```
//!
//! The optional `gamma` stanza lists one permutation of the elements per
//! element of Γ, identity first. Γ is taken to be the group these
//! permutations form under composition (`γδ` acts as `γ ∘ δ`).
//!
//! Permutation format: a header `perm degree=N`, then one generator per line
//! in cycle notation, e.g. `(0 1)(2 3)`; `()` is the identity.
//! Blank lines and lines starting with `#` are ignored in both formats.

use std::collections::HashMap;

use super::{FiniteGroup, GammaGroup};
use crate::{Error, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// A parsed table file: the group and, if present, its Γ-action.
pub enum ParsedGroup {
    Plain(FiniteGroup),
    WithAction(GammaGroup),
}

pub fn parse_table(text: &str) -> Result<ParsedGroup> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| Error::validation("empty group file"))?;
    let n: usize = header
        .strip_prefix("order")
        .and_then(|r| r.trim().parse().ok())
        .ok_or_else(|| Error::validation(format!("line {ln}: expected 'order N'")))?;
    let parse_row = |ln: usize, l: &str| -> Result<Vec<usize>> {
        let row: std::result::Result<Vec<usize>, _> = l.split_whitespace().map(str::parse).collect();
        let row = row.map_err(|_| Error::validation(format!("line {ln}: non-integer entry")))?;
        if row.len() != n {
            return Err(Error::validation(format!("line {ln}: expected {n} entries, found {}", row.len())));
        }
        Ok(row)
    };
    let mut table = Vec::with_capacity(n);
    for _ in 0..n {
        let (ln, l) = lines.next().ok_or_else(|| Error::validation("table ends early"))?;
        table.push(parse_row(ln, l)?);
    }
    // from_mult_table relabels the identity to 0; track that here so the
    // gamma stanza is interpreted in the same labels.
    if !(0..n).all(|g| table[0][g] == g && table[g][0] == g) {
        return Err(Error::validation("identity must be element 0 when a file is loaded"));
    }
    let group = FiniteGroup::from_mult_table(&table)?;
    let Some((ln, l)) = lines.next() else {
        return Ok(ParsedGroup::Plain(group));
    };
    if l != "gamma" {
        return Err(Error::validation(format!("line {ln}: expected 'gamma' or end of file")));
    }
    let mut perms: Vec<Vec<usize>> = Vec::new();
    for (ln, l) in lines {
        perms.push(parse_row(ln, l)?);
    }
    if perms.is_empty() {
        return Err(Error::validation("gamma stanza is empty"));
    }
    let (gamma, act) = action_from_permutations(&perms)?;
    Ok(ParsedGroup::WithAction(GammaGroup::new(group, gamma, act)?))
}

/// Γ as the group formed by the listed permutations, with the permutations
/// reordered to match Γ's element numbering (identity first, then listed order).
fn action_from_permutations(perms: &[Vec<usize>]) -> Result<(FiniteGroup, Vec<Vec<usize>>)> {
    let n = perms[0].len();
    if perms[0].iter().enumerate().any(|(i, &x)| i != x) {
        return Err(Error::validation("first gamma permutation must be the identity"));
    }
    let pos: HashMap<&Vec<usize>, usize> = perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
    if pos.len() != perms.len() {
        return Err(Error::validation("gamma permutations are not distinct"));
    }
    let k = perms.len();
    let mut table = vec![vec![0usize; k]; k];
    for a in 0..k {
        for b in 0..k {
            let comp: Vec<usize> = (0..n).map(|h| perms[a][perms[b][h]]).collect();
            table[a][b] = *pos.get(&comp).ok_or_else(|| Error::validation("gamma permutations are not closed under composition"))?;
        }
    }
    let gamma = FiniteGroup::from_mult_table(&table)?;
    Ok((gamma, perms.to_vec()))
}

/// Writes the table format.
pub fn write_table(g: &FiniteGroup, action: Option<&GammaGroup>) -> String {
    let mut s = format!("order {}\n", g.order());
    for row in g.table() {
        s.push_str(&row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
        s.push('\n');
    }
    if let Some(h) = action {
        s.push_str("gamma\n");
        for p in h.action_table() {
            s.push_str(&p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
            s.push('\n');
        }
    }
    s
}

/// Parses the permutation format into `(degree, generators as image lists)`.
pub fn parse_permutations(text: &str) -> Result<(usize, Vec<Vec<usize>>)> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| Error::validation("empty permutation file"))?;
    let degree: usize = header
        .strip_prefix("perm")
        .map(str::trim)
        .and_then(|r| r.strip_prefix("degree="))
        .and_then(|d| d.trim().parse().ok())
        .ok_or_else(|| Error::validation(format!("line {ln}: expected 'perm degree=N'")))?;
    let mut gens = Vec::new();
    for (ln, l) in lines {
        gens.push(parse_cycles(l, degree).map_err(|e| Error::validation(format!("line {ln}: {e}")))?);
    }
    Ok((degree, gens))
}

/// Cycle notation to an image list; cycles apply left to right as disjoint cycles.
pub fn parse_cycles(s: &str, degree: usize) -> Result<Vec<usize>> {
    let mut img: Vec<usize> = (0..degree).collect();
    let mut used = vec![false; degree];
    let mut rest = s.trim();
    while !rest.is_empty() {
        let inner_end = rest.find(')').ok_or_else(|| Error::validation("unbalanced parenthesis"))?;
        if !rest.starts_with('(') {
            return Err(Error::validation(format!("unexpected text '{rest}'")));
        }
        let inner = &rest[1..inner_end];
        let pts: std::result::Result<Vec<usize>, _> = inner.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(str::parse).collect();
        let pts = pts.map_err(|_| Error::validation(format!("bad cycle '({inner})'")))?;
        for (i, &p) in pts.iter().enumerate() {
            if p >= degree || used[p] {
                return Err(Error::validation(format!("point {p} out of range or repeated")));
            }
            used[p] = true;
            img[p] = pts[(i + 1) % pts.len()];
        }
        rest = rest[inner_end + 1..].trim_start();
    }
    Ok(img)
}

/// Image list to cycle notation (fixed points omitted).
pub fn format_cycles(perm: &[u32]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for s in 0..perm.len() {
        if seen[s] || perm[s] as usize == s {
            continue;
        }
        let mut cyc = vec![s];
        seen[s] = true;
        let mut x = perm[s] as usize;
        while x != s {
            seen[x] = true;
            cyc.push(x);
            x = perm[x] as usize;
        }
        out.push('(');
        out.push_str(&cyc.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_round_trip_with_action() {
        let h = GammaGroup::inversion(super::super::catalog::cyclic(5)).unwrap();
        let text = write_table(&h.base, Some(&h));
        match parse_table(&text).unwrap() {
            ParsedGroup::WithAction(g) => assert_eq!(g.action_table(), h.action_table()),
            ParsedGroup::Plain(_) => panic!("action lost"),
        }
    }

    #[test]
    fn plain_table_and_errors() {
        let t = "# Z/2\norder 2\n0 1\n1 0\n";
        assert!(matches!(parse_table(t).unwrap(), ParsedGroup::Plain(_)));
        assert!(parse_table("order 2\n0 1\n").is_err());
        assert!(parse_table("order 2\n0 1\n1 1\n").is_err());
    }

    #[test]
    fn permutation_file() {
        let (d, gens) = parse_permutations("perm degree=3\n(0 1)\n(0 1 2)\n").unwrap();
        assert_eq!(d, 3);
        assert_eq!(gens, vec![vec![1, 0, 2], vec![1, 2, 0]]);
        assert_eq!(format_cycles(&[1, 2, 0, 3]), "(0 1 2)");
        assert_eq!(format_cycles(&[0, 1]), "()");
        assert!(parse_cycles("(0 0)", 3).is_err());
    }
}
