//! Deterministic SVG emission for horoball diagrams.
//!
//! The picture is the view from above: each finite horoball projects to a
//! circle of radius `diameter / 2` around its tangency point, drawn together
//! with the outline of the cusp-lattice fundamental parallelogram. Output is
//! byte-deterministic for a given input list (fixed float formatting, fixed
//! element order, stable `id` attributes), so golden-file comparisons are
//! meaningful.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::horoball::{CuspLattice, Horoball};
use crate::moebius::ComplexValue;

#[derive(Debug, Error)]
pub enum SvgError {
    #[error("cannot render an empty horoball list")]
    EmptyBallList,
    #[error("failed to write diagram: {0}")]
    Io(#[from] std::io::Error),
}

/// Renders the diagram into a string. Balls are drawn in input order; pass
/// them pre-sorted (as `orbit_enumerate` returns them) for stable ids. Balls
/// at infinity contribute a legend line instead of a circle.
pub fn diagram_svg(balls: &[Horoball], lattice: &CuspLattice) -> Result<String, SvgError> {
    if balls.is_empty() {
        return Err(SvgError::EmptyBallList);
    }

    // Math coordinates use y up; SVG y grows downwards, so plot (re, -im).
    let corners = [
        ComplexPoint::ORIGIN,
        ComplexPoint::from(lattice.t1()),
        ComplexPoint::from(lattice.t1() + lattice.t2()),
        ComplexPoint::from(lattice.t2()),
    ];

    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    let mut stretch = |x: f64, y: f64| {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    };
    for p in &corners {
        stretch(p.x, p.y);
    }
    let mut plane_height: Option<f64> = None;
    for b in balls {
        match b.center {
            ComplexValue::Finite(z) => {
                let r = b.size / 2.0;
                stretch(z.re - r, -z.im - r);
                stretch(z.re + r, -z.im + r);
            }
            ComplexValue::Infinity => plane_height = Some(b.size),
        }
    }
    let margin = 0.25;
    let (x0, y0) = (min_x - margin, min_y - margin);
    let (width, height) = (max_x - min_x + 2.0 * margin, max_y - min_y + 2.0 * margin);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">",
        x0, y0, width, height
    );
    let _ = writeln!(
        out,
        "  <path id=\"lattice\" d=\"M {:.6} {:.6} L {:.6} {:.6} L {:.6} {:.6} L {:.6} {:.6} Z\" \
         fill=\"none\" stroke=\"#444444\" stroke-width=\"0.02\"/>",
        corners[0].x,
        corners[0].y,
        corners[1].x,
        corners[1].y,
        corners[2].x,
        corners[2].y,
        corners[3].x,
        corners[3].y,
    );
    let mut index = 0usize;
    for b in balls {
        let z = match b.center {
            ComplexValue::Finite(z) => z,
            ComplexValue::Infinity => continue,
        };
        index += 1;
        let _ = writeln!(
            out,
            "  <circle id=\"ball-{}\" cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\" \
             fill=\"none\" stroke=\"#000000\" stroke-width=\"0.02\"/>",
            index,
            z.re,
            -z.im,
            b.size / 2.0,
        );
    }
    if let Some(h) = plane_height {
        let _ = writeln!(
            out,
            "  <text id=\"plane-legend\" x=\"{:.6}\" y=\"{:.6}\" font-size=\"0.2\">\
             boundary plane at height {:.6}</text>",
            x0 + 0.1,
            y0 + 0.3,
            h
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Writes [`diagram_svg`] output to `path`.
pub fn render_diagram(
    balls: &[Horoball],
    lattice: &CuspLattice,
    path: &Path,
) -> Result<(), SvgError> {
    let svg = diagram_svg(balls, lattice)?;
    std::fs::write(path, svg)?;
    Ok(())
}

struct ComplexPoint {
    x: f64,
    y: f64,
}

impl ComplexPoint {
    const ORIGIN: ComplexPoint = ComplexPoint { x: 0.0, y: 0.0 };
}

impl From<num_complex::Complex64> for ComplexPoint {
    fn from(z: num_complex::Complex64) -> ComplexPoint {
        ComplexPoint { x: z.re, y: -z.im }
    }
}
