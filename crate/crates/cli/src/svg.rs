//! Planar drawings of `n = 1` arc models.

use std::fmt::Write;

use jordan_arcs::arc::ArcApproximation;
use jordan_arcs::rational;

use crate::CliError;

const SIZE: f64 = 1000.0;
const MARGIN: f64 = 20.0;

fn x(v: f64) -> f64 {
    MARGIN + v * SIZE
}

fn y(v: f64) -> f64 {
    MARGIN + (1.0 - v) * SIZE
}

/// Deepest-generation cells as outlined rectangles and every connector as a polyline,
/// thinner at greater depth.
pub fn render(arc: &ArcApproximation) -> Result<String, CliError> {
    if arc.ambient_dim() != 2 {
        return Err(CliError::Config(format!(
            "svg export needs a planar model, this one has dimension {}",
            arc.ambient_dim()
        )));
    }
    let depth = arc.depth();
    let complex = arc
        .complex(depth)
        .map_err(|e| CliError::Construction(e.to_string()))?;
    let full = SIZE + 2.0 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{full}\" height=\"{full}\" viewBox=\"0 0 {full} {full}\">"
    );
    let _ = writeln!(
        s,
        "<g fill=\"none\" stroke=\"#8a9bb0\" stroke-width=\"0.5\">"
    );
    for cell in &complex.cells {
        let lo: Vec<f64> = cell.cell_box.lo.iter().map(rational::to_f64).collect();
        let hi: Vec<f64> = cell.cell_box.hi.iter().map(rational::to_f64).collect();
        let _ = writeln!(
            s,
            "<rect x=\"{:.4}\" y=\"{:.4}\" width=\"{:.4}\" height=\"{:.4}\"/>",
            x(lo[0]),
            y(hi[1]),
            (hi[0] - lo[0]) * SIZE,
            (hi[1] - lo[1]) * SIZE
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        "<g fill=\"none\" stroke=\"#1f3b5c\" stroke-linejoin=\"round\">"
    );
    for c in arc.connectors() {
        let width = 4.0 / (1u64 << c.depth.min(20)) as f64;
        let pts: Vec<String> = c
            .vertices
            .iter()
            .map(|p| {
                format!(
                    "{:.4},{:.4}",
                    x(rational::to_f64(&p[0])),
                    y(rational::to_f64(&p[1]))
                )
            })
            .collect();
        let _ = writeln!(
            s,
            "<polyline stroke-width=\"{width:.4}\" points=\"{}\"/>",
            pts.join(" ")
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    Ok(s)
}
