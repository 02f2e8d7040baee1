//! Line-oriented text formats for polygons and guard lists.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{Point, PolygonWithHoles};
use crate::guards::GuardSet;

/// Canonical text of a polygon, rings as stored after normalization.
pub fn polygon_to_string(poly: &PolygonWithHoles) -> String {
    let mut s = String::from("POLY 1\n");
    for r in 0..poly.ring_count() {
        let ring = poly.ring(r);
        let tag = if r == 0 { "outer" } else { "hole" };
        let _ = writeln!(s, "{tag} {}", ring.len());
        for p in ring {
            let _ = writeln!(s, "{} {}", p.x, p.y);
        }
    }
    s
}

/// First 16 hex digits of the SHA-256 of the canonical text.
pub fn polygon_hash(poly: &PolygonWithHoles) -> String {
    let digest = Sha256::digest(polygon_to_string(poly).as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_i64(line: usize, tok: Option<&str>, what: &str) -> Result<i64> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("bad {what} '{tok}'")))
}

fn parse_point(line: usize, text: &str) -> Result<Point> {
    let mut it = text.split_whitespace();
    let x = parse_i64(line, it.next(), "x coordinate")?;
    let y = parse_i64(line, it.next(), "y coordinate")?;
    if it.next().is_some() {
        return Err(parse_err(line, "trailing tokens after coordinates"));
    }
    Ok(Point::new(x, y))
}

pub fn parse_polygon(text: &str) -> Result<PolygonWithHoles> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, "POLY 1")) => {}
        Some((l, other)) => return Err(parse_err(l, format!("expected 'POLY 1', found '{other}'"))),
        None => return Err(parse_err(1, "empty polygon file")),
    }
    let mut rings: Vec<Vec<Point>> = Vec::new();
    let mut last_line = 1;
    while let Some((l, head)) = lines.next() {
        last_line = l;
        let mut it = head.split_whitespace();
        let tag = it.next().unwrap_or("");
        match (tag, rings.is_empty()) {
            ("outer", true) | ("hole", false) => {}
            ("outer", false) => return Err(parse_err(l, "second outer ring")),
            ("hole", true) => return Err(parse_err(l, "hole before outer ring")),
            _ => return Err(parse_err(l, format!("expected 'outer' or 'hole', found '{head}'"))),
        }
        let k = parse_i64(l, it.next(), "vertex count")?;
        if k < 3 {
            return Err(parse_err(l, format!("ring needs at least 3 vertices, got {k}")));
        }
        let mut ring = Vec::with_capacity(k as usize);
        for _ in 0..k {
            let (pl, text) = lines
                .next()
                .ok_or_else(|| parse_err(last_line + 1, "unexpected end of file inside ring"))?;
            last_line = pl;
            ring.push(parse_point(pl, text)?);
        }
        rings.push(ring);
    }
    if rings.is_empty() {
        return Err(parse_err(last_line, "missing outer ring"));
    }
    let outer = rings.remove(0);
    PolygonWithHoles::new(outer, rings)
}

/// One line of a guards file: the vertex index when the guard sits on a
/// polygon vertex, and its position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GuardEntry {
    pub vertex: Option<usize>,
    pub point: Point,
}

pub fn guards_to_string(poly: &PolygonWithHoles, guards: &GuardSet) -> String {
    let mut s = String::from("GUARDS 1\n");
    for &g in &guards.guards {
        let p = poly.vertex(g);
        let _ = writeln!(s, "{g} {} {}", p.x, p.y);
    }
    let _ = writeln!(s, "guards {} bound {}", guards.len(), poly.guard_bound());
    s
}

pub fn parse_guards(text: &str) -> Result<Vec<GuardEntry>> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, "GUARDS 1")) => {}
        Some((l, other)) => return Err(parse_err(l, format!("expected 'GUARDS 1', found '{other}'"))),
        None => return Err(parse_err(1, "empty guards file")),
    }
    let mut out = Vec::new();
    for (l, text) in lines {
        let mut it = text.split_whitespace();
        let first = it.next().unwrap_or("");
        if first == "guards" {
            continue;
        }
        let vertex = if first == "-" {
            None
        } else {
            Some(first.parse().map_err(|_| parse_err(l, format!("bad vertex index '{first}'")))?)
        };
        let x = parse_i64(l, it.next(), "x coordinate")?;
        let y = parse_i64(l, it.next(), "y coordinate")?;
        out.push(GuardEntry { vertex, point: Point::new(x, y) });
    }
    Ok(out)
}

/// Resolves guard entries against a polygon, checking that indexed entries
/// name the vertex at the given position.
pub fn guard_points(poly: &PolygonWithHoles, entries: &[GuardEntry]) -> Result<Vec<Point>> {
    entries
        .iter()
        .map(|e| match e.vertex {
            Some(i) if i >= poly.n() || poly.vertex(i) != e.point => Err(Error::invalid(format!(
                "guard entry {i} {} {} does not match a polygon vertex",
                e.point.x, e.point.y
            ))),
            _ => Ok(e.point),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::guards::cooperative_guards;

    const SQH: &str = "POLY 1\nouter 4\n0 0\n10 0\n10 10\n0 10\nhole 4\n4 4\n6 4\n6 6\n4 6\n";

    #[test]
    fn polygon_round_trip() {
        let p = parse_polygon(SQH).unwrap();
        assert_eq!((p.n(), p.h()), (8, 1));
        let text = polygon_to_string(&p);
        assert_eq!(parse_polygon(&text).unwrap(), p);
        assert_eq!(polygon_hash(&p).len(), 16);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# square\nPOLY 1\n\nouter 3  # ring\n0 0\n4 0\n0 4\n";
        assert_eq!(parse_polygon(text).unwrap().n(), 3);
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        let bad = "POLY 1\nouter 3\n0 0\n4 x\n0 4\n";
        assert!(matches!(parse_polygon(bad), Err(Error::Parse { line: 4, .. })));
        assert!(matches!(parse_polygon("POLY 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_polygon("POLY 1\nouter 3\n0 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_polygon("POLY 1\nouter 3\n0 0\n1 1\n2 2\n"),
            Err(Error::InvalidPolygon(_))
        ));
    }

    #[test]
    fn guards_round_trip() {
        let p = parse_polygon(SQH).unwrap();
        let g = cooperative_guards(&p).unwrap();
        let text = guards_to_string(&p, &g);
        assert!(text.ends_with(&format!("guards {} bound 4\n", g.len())));
        let entries = parse_guards(&text).unwrap();
        assert_eq!(guard_points(&p, &entries).unwrap(), g.points(&p));
        let odd = parse_guards("GUARDS 1\n- 1 1\n").unwrap();
        assert_eq!(odd[0].vertex, None);
        assert!(guard_points(&p, &parse_guards("GUARDS 1\n0 3 3\n").unwrap()).is_err());
    }
}
