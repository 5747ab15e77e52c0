//! SVG diagrams of trace monomials: the boxes sit in one horizontal line,
//! each subsystem row is a horizontal wire level, and every row joins the
//! output side of box `j` to the input side of box `σ_i(j)`. Wires that do
//! not go to the next box are drawn as arcs above (upper half of the rows)
//! or below (lower half) the boxes.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::permnet::TraceMonomial;

pub const BOX_SIZE: usize = 40;
pub const ROW_PITCH: usize = 30;
pub const SVG_MAX_BOXES: usize = 8;
pub const SVG_MAX_ROWS: usize = 4;

const GAP: usize = 40;
const MARGIN: usize = 80;
const ARC_STEP: usize = 8;

fn cycle_text(cycle: &[usize]) -> String {
    let parts: Vec<String> = cycle.iter().map(|p| (p + 1).to_string()).collect();
    format!("({})", parts.join(" "))
}

/// Renders `mon` as a standalone SVG 1.1 document. Rows, cycles and wires
/// carry `data-*` attributes describing the wiring so the output can be
/// checked without parsing geometry.
pub fn render_svg(mon: &TraceMonomial) -> Result<String> {
    let (l, n) = (mon.degree(), mon.n());
    if l > SVG_MAX_BOXES || n > SVG_MAX_ROWS {
        return Err(Error::unsupported(format!(
            "diagrams are limited to {SVG_MAX_BOXES} boxes and {SVG_MAX_ROWS} rows, got {l} and {n}"
        )));
    }
    let pitch = BOX_SIZE + GAP;
    let box_h = ROW_PITCH * n;
    let width = 2 * MARGIN + pitch * l - GAP;
    let height = 2 * MARGIN + box_h;
    let left = |j: usize| MARGIN + pitch * j;
    let right = |j: usize| left(j) + BOX_SIZE;
    let wire_y = |i: usize| MARGIN + ROW_PITCH * i + ROW_PITCH / 2;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}" data-boxes="{l}" data-rows="{n}">"#
    );
    let _ = writeln!(s, "  <title>{mon}</title>");
    let _ = writeln!(s, r#"  <g class="wires" fill="none" stroke="black" stroke-width="1.5">"#);
    for (i, perm) in mon.sigma().rows().iter().enumerate() {
        let cycles = perm.cycles();
        let all: String = cycles.iter().map(|c| cycle_text(c)).collect();
        let _ = writeln!(s, r#"    <g class="row" data-row="{}" data-cycles="{all}">"#, i + 1);
        let y = wire_y(i);
        let above = 2 * i < n;
        for cycle in &cycles {
            let _ =
                writeln!(s, r#"      <g class="cycle" data-boxes="{}">"#, cycle_text(cycle).trim_matches(['(', ')']));
            for &j in cycle {
                let k = perm.apply(j);
                let (x0, x1) = (right(j), left(k));
                let d = if k == j + 1 {
                    format!("M {x0} {y} L {x1} {y}")
                } else {
                    let span = j.abs_diff(k) + 1;
                    let yc = if above {
                        MARGIN.saturating_sub(ARC_STEP * (span + i))
                    } else {
                        MARGIN + box_h + ARC_STEP * (span + n - 1 - i)
                    };
                    format!("M {x0} {y} C {} {yc} {} {yc} {x1} {y}", x0 + GAP / 2, x1.saturating_sub(GAP / 2))
                };
                let _ = writeln!(s, r#"        <path data-from="{}" data-to="{}" d="{d}"/>"#, j + 1, k + 1);
            }
            let _ = writeln!(s, "      </g>");
        }
        let _ = writeln!(s, "    </g>");
    }
    let _ = writeln!(s, "  </g>");
    let _ = writeln!(s, r#"  <g class="boxes" font-family="serif" font-size="16" text-anchor="middle">"#);
    for (j, &p) in mon.labels().iter().enumerate() {
        let (x, cx, cy) = (left(j), left(j) + BOX_SIZE / 2, MARGIN + box_h / 2 + 5);
        let _ = writeln!(
            s,
            r#"    <g class="box" data-box="{}" data-label="{}"><rect x="{x}" y="{MARGIN}" width="{BOX_SIZE}" height="{box_h}" fill="white" stroke="black"/><text x="{cx}" y="{cy}">M<tspan font-size="11" dy="4">{}</tspan></text></g>"#,
            j + 1,
            p + 1,
            p + 1
        );
    }
    let _ = writeln!(s, "  </g>");
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_monomial;

    #[test]
    fn single_loop() {
        let svg = render_svg(&parse_monomial("()", "1").unwrap()).unwrap();
        assert_eq!(svg.matches("<rect").count(), 1);
        assert_eq!(svg.matches("<path").count(), 1);
        assert!(svg.contains(r#"data-from="1" data-to="1""#));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn example_topology() {
        let m = parse_monomial("(2 3);(1 2)", "1,1,2").unwrap();
        let svg = render_svg(&m).unwrap();
        assert!(svg.contains(r#"data-row="1" data-cycles="(1)(2 3)""#));
        assert!(svg.contains(r#"data-row="2" data-cycles="(1 2)(3)""#));
        assert_eq!(svg.matches("<path").count(), 6);
        assert_eq!(svg.matches(r#"class="box""#).count(), 3);
        assert!(svg.contains(r#"data-box="3" data-label="2""#));
        assert_eq!(svg, render_svg(&m).unwrap());
    }

    #[test]
    fn envelope() {
        let wide = parse_monomial("()", "1,1,1,1,1,1,1,1,1").unwrap();
        assert!(matches!(render_svg(&wide), Err(Error::Unsupported(_))));
        let tall = parse_monomial("();();();();()", "1").unwrap();
        assert!(matches!(render_svg(&tall), Err(Error::Unsupported(_))));
        let max = parse_monomial("(1 8 2 7);(1 2 3 4 5 6 7 8);();(3 5)", "1,2,1,2,1,2,1,2").unwrap();
        assert!(render_svg(&max).is_ok());
    }
}
