//! Text renderings of a pair. Row 1 is the top line, column 1 the left.

use crate::instance::InstancePair;
use crate::lattice::PointSet;

fn extent(pair: &InstancePair) -> (usize, usize) {
    (
        pair.f1().max_row().max(pair.f2().max_row()),
        pair.f1().max_col().max(pair.f2().max_col()),
    )
}

/// One character per cell: `.` empty, `o` F1 only, `x` F2 only, `@` both.
/// An empty pair renders as the empty string.
pub fn render_ascii(pair: &InstancePair) -> String {
    let (rows, cols) = extent(pair);
    let mut out = String::with_capacity(rows * (cols + 1));
    for i in 1..=rows {
        for j in 1..=cols {
            let c = match (
                pair.f1().contains_coords(i, j),
                pair.f2().contains_coords(i, j),
            ) {
                (false, false) => '.',
                (true, false) => 'o',
                (false, true) => 'x',
                (true, true) => '@',
            };
            out.push(c);
        }
        out.push('\n');
    }
    out
}

fn pbm(set: &PointSet, label: &str, rows: usize, cols: usize, out: &mut String) {
    out.push_str(&format!("P1\n# {label}\n{cols} {rows}\n"));
    for i in 1..=rows {
        let line: Vec<&str> = (1..=cols)
            .map(|j| if set.contains_coords(i, j) { "1" } else { "0" })
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
}

/// Two plain PBM images, F1 then F2, over the common bounding box.
pub fn render_pbm(pair: &InstancePair) -> String {
    let (rows, cols) = extent(pair);
    let mut out = String::new();
    if rows == 0 {
        return out;
    }
    pbm(pair.f1(), "F1", rows, cols, &mut out);
    pbm(pair.f2(), "F2", rows, cols, &mut out);
    out
}
