//! Staircase pictures of congruences on `N^2`.

use std::collections::HashMap;
use std::fmt::Write;

use crate::congruence::CongruenceView;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::ideal::Ideal;
use crate::soccular::ideal_class_key;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    Svg,
}

/// Class labels on the box `[0, width) x [0, height)`, `None` for nil.
/// Labels are numbered in order of first appearance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub width: u32,
    pub height: u32,
    cells: Vec<Option<usize>>,
}

impl Grid {
    fn from_labels<K: Eq + std::hash::Hash>(width: u32, height: u32, labels: Vec<Option<K>>) -> Grid {
        let mut ids: HashMap<K, usize> = HashMap::new();
        let cells = labels
            .into_iter()
            .map(|l| {
                l.map(|k| {
                    let next = ids.len();
                    *ids.entry(k).or_insert(next)
                })
            })
            .collect();
        Grid { width, height, cells }
    }

    /// Label of the cell `x^i y^j`.
    pub fn get(&self, i: u32, j: u32) -> Option<usize> {
        self.cells[(j * self.width + i) as usize]
    }

    pub fn classes(&self) -> usize {
        self.cells.iter().flatten().max().map_or(0, |m| m + 1)
    }
}

// row-major from the origin so numbering follows reading order of the picture
fn points(width: u32, height: u32) -> Vec<[u32; 2]> {
    (0..height).flat_map(|j| (0..width).map(move |i| [i, j])).collect()
}

/// The congruence induced by `ideal` itself, read from normal forms.
pub fn grid_from_ideal<F: Field>(ideal: &Ideal<F>, width: u32, height: u32) -> Result<Grid> {
    if ideal.nvars() != 2 {
        return Err(Error::DimensionUnsupported(ideal.nvars()));
    }
    let labels = points(width, height)
        .iter()
        .map(|p| ideal_class_key(ideal, &crate::poly::Exponent::from_slice(p)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Grid::from_labels(width, height, labels))
}

pub fn grid_from_view<F: Field>(view: &CongruenceView<F>, width: u32, height: u32) -> Result<Grid> {
    if view.nvars() != 2 {
        return Err(Error::DimensionUnsupported(view.nvars()));
    }
    let labels = points(width, height)
        .iter()
        .map(|p| view.class_of(&crate::poly::Exponent::from_slice(p)))
        .collect();
    Ok(Grid::from_labels(width, height, labels))
}

/// Box large enough to show every class of the view with a margin of nil.
pub fn view_extent<F: Field>(view: &CongruenceView<F>) -> (u32, u32) {
    let mut b = [1u32, 1u32];
    for c in 0..view.fiber().len() {
        let r = view.fiber().rep(c);
        b[0] = b[0].max(r.0[0] + 2);
        b[1] = b[1].max(r.0[1] + 2);
    }
    (b[0], b[1])
}

fn letter(id: usize) -> String {
    const A: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
    if id < A.len() {
        (A[id] as char).to_string()
    } else {
        id.to_string()
    }
}

pub fn render_ascii(grid: &Grid) -> String {
    let width = (0..grid.classes()).map(|c| letter(c).len()).max().unwrap_or(1);
    let mut out = String::new();
    for j in (0..grid.height).rev() {
        let _ = write!(out, "{j:>3} |");
        for i in 0..grid.width {
            let s = grid.get(i, j).map_or_else(|| "#".repeat(width), letter);
            let _ = write!(out, " {s:>width$}");
        }
        out.push('\n');
    }
    let _ = write!(out, "    +");
    out.push_str(&"-".repeat((grid.width as usize) * (width + 1)));
    out.push('\n');
    let _ = write!(out, "     ");
    for i in 0..grid.width {
        let _ = write!(out, " {:>width$}", i % 10);
    }
    out.push('\n');
    out
}

const PALETTE: [&str; 12] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#86bcb6",
    "#d37295", "#a0cbe8",
];
const NIL: &str = "#bab0ac";
const CELL: u32 = 32;

pub fn render_svg(grid: &Grid) -> String {
    let (w, h) = (grid.width * CELL + CELL, grid.height * CELL + CELL);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(
        out,
        r##"<defs><pattern id="nil" width="6" height="6" patternUnits="userSpaceOnUse"><rect width="6" height="6" fill="{NIL}"/><path d="M0,6 L6,0" stroke="#ffffff" stroke-width="1"/></pattern></defs>"##
    );
    for j in 0..grid.height {
        for i in 0..grid.width {
            let x = CELL + i * CELL;
            let y = (grid.height - 1 - j) * CELL;
            match grid.get(i, j) {
                None => {
                    let _ = writeln!(
                        out,
                        r##"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="url(#nil)" stroke="#ffffff"/>"##
                    );
                }
                Some(c) => {
                    let fill = PALETTE[c % PALETTE.len()];
                    let _ = writeln!(
                        out,
                        r##"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{fill}" stroke="#ffffff"/>"##
                    );
                    let _ = writeln!(
                        out,
                        r#"<text x="{}" y="{}" font-family="monospace" font-size="12" text-anchor="middle">{}</text>"#,
                        x + CELL / 2,
                        y + CELL / 2 + 4,
                        letter(c)
                    );
                }
            }
        }
    }
    for i in 0..grid.width {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="10" text-anchor="middle">{i}</text>"#,
            CELL + i * CELL + CELL / 2,
            grid.height * CELL + CELL / 2 + 4
        );
    }
    for j in 0..grid.height {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="10" text-anchor="middle">{j}</text>"#,
            CELL / 2,
            (grid.height - 1 - j) * CELL + CELL / 2 + 4
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn render(grid: &Grid, format: RenderFormat) -> String {
    match format {
        RenderFormat::Ascii => render_ascii(grid),
        RenderFormat::Svg => render_svg(grid),
    }
}

pub fn render_congruence<F: Field>(view: &CongruenceView<F>, format: RenderFormat) -> Result<String> {
    let (w, h) = view_extent(view);
    Ok(render(&grid_from_view(view, w, h)?, format))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::{Fiber, MonoidPrime};
    use crate::field::Rational;
    use crate::parse::parse_ideal_file;

    fn ideal(text: &str) -> Ideal<Rational> {
        parse_ideal_file(text).unwrap().ideal(&Rational::from_integer(1.into()))
    }

    #[test]
    fn cogenerator_cells_share_a_label() {
        let i = ideal("ring x y; char 0; ideal x^2*y - x*y^2, x^3, y^3");
        let g = grid_from_ideal(&i, 5, 5).unwrap();
        assert_eq!(g.get(2, 1), g.get(1, 2));
        assert!(g.get(2, 1).is_some());
        for j in 0..5 {
            for k in 0..5 {
                assert_eq!(g.get(j, k).is_none(), j >= 3 || k >= 3 || (j, k) == (2, 2));
            }
        }
        let view = CongruenceView::from_fiber(Fiber::shared(&i, &MonoidPrime::maximal(2)).unwrap());
        let (w, h) = view_extent(&view);
        assert_eq!(grid_from_view(&view, w, h).unwrap(), grid_from_ideal(&i, w, h).unwrap());
    }

    #[test]
    fn monomial_cells_are_singletons() {
        let g = grid_from_ideal(&ideal("ring x y; char 0; ideal x^2, x*y, y^3"), 4, 4).unwrap();
        assert_eq!(g.classes(), 4);
        let ascii = render_ascii(&g);
        assert!(ascii.contains("  2 | d # # #"), "{ascii}");
    }

    #[test]
    fn svg_is_deterministic() {
        let i = ideal("ring x y; char 0; ideal x^2 - x*y, x*y - y^2, x^3");
        let a = render_svg(&grid_from_ideal(&i, 4, 4).unwrap());
        let b = render_svg(&grid_from_ideal(&i, 4, 4).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with("<?xml"));
        let three = ideal("ring x y z; char 0; ideal x");
        assert_eq!(grid_from_ideal(&three, 2, 2), Err(Error::DimensionUnsupported(3)));
    }
}
