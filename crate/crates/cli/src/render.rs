//! Plain-text rendering of semi-meander diagrams, and the inverse parser.
//!
//! Layout: position `p` of the band sits at text column `2p`, so glyphs are
//! separated by one filler column.  The bottom line is the baseline (`•` for
//! a node, `+` for a plus).  Above it there is one line per nesting depth,
//! outermost arcs on top: an arc is drawn as `[` and `]` at its endpoint
//! columns with `-` filling the columns strictly between them, and an arc
//! whose covered interval wraps past the end of the band splits into a tail
//! segment running off the right edge and a head segment running in from the
//! left edge.  Every semiline is drawn as `|` in its column on every line
//! above the baseline, since semilines run upward forever.
//!
//! The renderer is deterministic on canonical diagrams, and [`parse`] is its
//! exact inverse, so `parse(render(m)) == m` for every valid diagram.

use semimeander::{Arc, Band, PeriodicSemiMeander};

const NODE: char = '•';
const PLUS: char = '+';

/// Renders one diagram as multi-line text (no trailing newline).
pub fn render(m: &PeriodicSemiMeander) -> String {
    let g = m.g();
    let width = 2 * g - 1;
    let arcs = m.arcs();

    // Nesting depth of each arc: the number of other arcs it sits inside.
    let depth: Vec<usize> = arcs
        .iter()
        .map(|a| arcs.iter().filter(|o| *o != a && a.nested_in(g, o)).count())
        .collect();
    let arc_rows = depth.iter().map(|d| d + 1).max().unwrap_or(0);
    // With no arcs, semilines still need one line to be visible.
    let rows = if arc_rows == 0 && !m.semilines().is_empty() {
        1
    } else {
        arc_rows
    };

    let mut grid = vec![vec![' '; width]; rows];
    for (arc, &dep) in arcs.iter().zip(&depth) {
        let row = &mut grid[dep];
        let (cl, cr) = (2 * arc.left, 2 * arc.right);
        row[cl] = '[';
        row[cr] = ']';
        if arc.left < arc.right {
            for cell in row.iter_mut().take(cr).skip(cl + 1) {
                *cell = '-';
            }
        } else {
            // Covered interval wraps: fill rightward off the edge and in
            // from the left edge.
            for cell in row.iter_mut().skip(cl + 1) {
                *cell = '-';
            }
            for cell in row.iter_mut().take(cr) {
                *cell = '-';
            }
        }
    }
    // No semiline ever sits inside a covered interval, so these cells are
    // still blank in every row.
    for &s in m.semilines() {
        for row in &mut grid {
            row[2 * s] = '|';
        }
    }

    let mut baseline = vec![' '; width];
    for p in 0..g {
        baseline[2 * p] = if m.band().is_plus(p) { PLUS } else { NODE };
    }
    grid.push(baseline);

    grid.iter()
        .map(|row| {
            let line: String = row.iter().collect();
            line.trim_end().to_string()
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Parses text produced by [`render`] back into a validated diagram.
pub fn parse(text: &str) -> Result<PeriodicSemiMeander, String> {
    let lines: Vec<Vec<char>> = text
        .lines()
        .map(|l| l.trim_end().chars().collect())
        .collect();
    let lines: Vec<&Vec<char>> = lines.iter().filter(|l| !l.is_empty()).collect();
    let baseline = lines.last().ok_or("empty diagram text")?;

    let mut plus = Vec::new();
    for (col, &ch) in baseline.iter().enumerate() {
        match (col % 2, ch) {
            (0, NODE) => {}
            (0, PLUS) => plus.push(col / 2),
            (1, ' ') => {}
            _ => return Err(format!("unexpected {ch:?} at baseline column {col}")),
        }
    }
    if baseline.len() % 2 == 0 {
        return Err("baseline must end on a glyph column".into());
    }
    let g = baseline.len() / 2 + 1;

    let mut arcs: Vec<Arc> = Vec::new();
    let mut semis: Option<Vec<usize>> = None;
    for row in &lines[..lines.len() - 1] {
        let mut row_semis = Vec::new();
        let mut open: Option<usize> = None;
        let mut wrap_close: Option<usize> = None;
        for (col, &ch) in row.iter().enumerate() {
            match ch {
                ' ' | '-' => {}
                '|' if col % 2 == 0 => row_semis.push(col / 2),
                '[' if col % 2 == 0 => {
                    if let Some(prev) = open.replace(col) {
                        return Err(format!(
                            "brackets at columns {prev} and {col} nest on one line"
                        ));
                    }
                }
                ']' if col % 2 == 0 => match open.take() {
                    Some(l) => arcs.push(Arc::new(l / 2, col / 2)),
                    None => {
                        if let Some(prev) = wrap_close.replace(col) {
                            return Err(format!(
                                "two unmatched closing brackets at columns {prev} and {col}"
                            ));
                        }
                    }
                },
                _ => return Err(format!("unexpected {ch:?} at column {col}")),
            }
        }
        match (open, wrap_close) {
            (Some(l), Some(r)) => arcs.push(Arc::new(l / 2, r / 2)),
            (None, None) => {}
            _ => return Err("unbalanced brackets on one line".into()),
        }
        match &semis {
            None => semis = Some(row_semis),
            Some(prev) if *prev == row_semis => {}
            Some(_) => return Err("semiline columns differ between lines".into()),
        }
    }

    let band = Band::new(g, plus).map_err(|e| e.to_string())?;
    PeriodicSemiMeander::new(band, arcs, semis.unwrap_or_default()).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meander(
        g: usize,
        plus: &[usize],
        arcs: &[(usize, usize)],
        semis: &[usize],
    ) -> PeriodicSemiMeander {
        let band = Band::new(g, plus.iter().copied()).unwrap();
        PeriodicSemiMeander::new(
            band,
            arcs.iter().map(|&(l, r)| Arc::new(l, r)),
            semis.iter().copied(),
        )
        .unwrap()
    }

    #[test]
    fn nested_arcs_stack_with_outermost_on_top() {
        let m = meander(4, &[], &[(0, 3), (1, 2)], &[]);
        assert_eq!(render(&m), "[-----]\n  [-]\n• • • •");
    }

    #[test]
    fn wrapping_arc_splits_into_two_segments() {
        let m = meander(7, &[], &[(0, 1), (2, 3), (6, 4)], &[5]);
        let text = render(&m);
        assert_eq!(text, "--------] | [\n[-] [-]   |\n• • • • • • •");
        assert_eq!(parse(&text).unwrap(), m);
    }

    #[test]
    fn semilines_alone_render_as_one_row_of_bars() {
        let m = meander(5, &[2], &[], &[0, 1, 3, 4]);
        assert_eq!(render(&m), "| |   | |\n• • + • •");
        assert_eq!(parse(&render(&m)).unwrap(), m);
    }

    #[test]
    fn all_plus_band_renders_as_bare_baseline() {
        let m = meander(3, &[0, 1, 2], &[], &[]);
        assert_eq!(render(&m), "+ + +");
        assert_eq!(parse(&render(&m)).unwrap(), m);
    }

    #[test]
    fn round_trip_is_identity_across_full_enumerations() {
        for g in 1..=8 {
            let bands = [
                Band::full(g).unwrap(),
                Band::new(g, [0]).unwrap(),
                Band::new(g, (0..g).filter(|p| p % 3 == 1)).unwrap(),
            ];
            for band in bands {
                let d = band.node_count();
                for r in 0..=d / 2 {
                    for m in PeriodicSemiMeander::enumerate(&band, r).unwrap() {
                        let text = render(&m);
                        assert_eq!(parse(&text).unwrap(), m, "round trip failed on:\n{text}");
                    }
                }
            }
        }
    }

    #[test]
    fn parser_rejects_garbage() {
        assert!(parse("").is_err());
        assert!(parse("• x •").is_err());
        assert!(parse("[->\n• •").is_err());
        assert!(parse("[ ]   [\n• • •").is_err());
        // Arc endpoints must be nodes, which validation catches.
        assert!(parse("[-]\n+ •").is_err());
    }
}
