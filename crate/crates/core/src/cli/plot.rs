//! Static SVG drawing of the height-one complex for `n <= 2`.

use std::collections::BTreeMap;
use std::fmt::Write;

use num_traits::ToPrimitive;

use crate::ppoly::{PPClass, Poly};

const PALETTE: [&str; 8] = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5",
];
const SIZE: f64 = 520.0;
const MARGIN: f64 = 40.0;
const LEGEND_LINE: f64 = 18.0;

struct View {
    min: [f64; 2],
    max: [f64; 2],
    height: f64,
}

impl View {
    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        let sx = MARGIN + (x - self.min[0]) / (self.max[0] - self.min[0]) * SIZE;
        let sy = MARGIN + (self.max[1] - y) / (self.max[1] - self.min[1]) * self.height;
        (sx, sy)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn convex_hull(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Draws the maximal cells of the class's complex, each filled with a colour
/// keyed by its piece of the class, plus a legend.
pub fn render_svg(class: &PPClass) -> String {
    let complex = class.complex();
    let n = complex.n();
    assert!(n <= 2, "plotting needs n <= 2");
    let vertices = complex.vertices();
    let coord = |v: &Vec<i64>, k: usize| v.get(k).copied().unwrap_or(0) as f64;
    let mut min = [f64::INFINITY; 2];
    let mut max = [f64::NEG_INFINITY; 2];
    for v in &vertices {
        for k in 0..2 {
            min[k] = min[k].min(coord(v, k));
            max[k] = max[k].max(coord(v, k));
        }
    }
    for k in 0..2 {
        min[k] -= 2.0;
        max[k] += 2.0;
    }
    let height = if n == 1 { 80.0 } else { SIZE };
    let view = View { min, max, height };
    let reach = 4.0 * (max[0] - min[0]).max(max[1] - min[1]);

    let cells = complex.maximal_cells();
    let mut pieces: Vec<(usize, Poly)> = Vec::new();
    for &c in &cells {
        let v = &complex.cell(c).vertices()[0];
        let p = class.piece_on_cell(v, c).expect("piece on every maximal cell");
        pieces.push((c, p.clone()));
    }
    let mut colours: BTreeMap<String, usize> = BTreeMap::new();
    for (_, p) in &pieces {
        let next = colours.len();
        colours.entry(p.to_string()).or_insert(next);
    }

    let legend_height = LEGEND_LINE * (colours.len() as f64 + 1.0);
    let total_h = 2.0 * MARGIN + height + legend_height;
    let total_w = 2.0 * MARGIN + SIZE;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_w}" height="{total_h}" viewBox="0 0 {total_w} {total_h}">"#
    );
    let _ = writeln!(
        s,
        r#"<defs><clipPath id="view"><rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{height}"/></clipPath></defs>"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<g clip-path="url(#view)">"#);
    for (c, p) in &pieces {
        let cell = complex.cell(*c);
        let fill = PALETTE[colours[&p.to_string()] % PALETTE.len()];
        let mut pts = Vec::new();
        for v in cell.vertices() {
            pts.push((coord(v, 0), coord(v, 1)));
            for r in cell.rays() {
                pts.push((
                    coord(v, 0) + reach * coord(r, 0),
                    coord(v, 1) + reach * coord(r, 1),
                ));
            }
        }
        if n == 1 {
            let lo = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
            let (x0, y) = view.px(lo, 0.0);
            let (x1, _) = view.px(hi, 0.0);
            let _ = writeln!(
                s,
                r#"<line x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="{fill}" stroke-width="14"/>"#
            );
        } else {
            let hull: Vec<String> = convex_hull(pts)
                .into_iter()
                .map(|(x, y)| {
                    let (a, b) = view.px(x, y);
                    format!("{a:.2},{b:.2}")
                })
                .collect();
            let _ = writeln!(
                s,
                r#"<polygon points="{}" fill="{fill}" stroke="black" stroke-width="1"/>"#,
                hull.join(" ")
            );
        }
    }
    let _ = writeln!(s, "</g>");
    for v in &vertices {
        let (x, y) = view.px(coord(v, 0), coord(v, 1));
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="black"/>"#);
    }
    for (c, p) in &pieces {
        let cell = complex.cell(*c);
        let at = cell.interior_point();
        let x = at[0].to_f64().unwrap_or(0.0).clamp(min[0] + 0.5, max[0] - 0.5);
        let y = at
            .get(1)
            .map_or(0.0, |y| y.to_f64().unwrap_or(0.0).clamp(min[1] + 0.5, max[1] - 0.5));
        let (px, py) = view.px(x, y);
        let label = format!("#{}", colours[&p.to_string()] + 1);
        let dy = if n == 1 { -12.0 } else { 0.0 };
        let _ = writeln!(
            s,
            r#"<text x="{px:.2}" y="{:.2}" font-family="monospace" font-size="12" text-anchor="middle">{}</text>"#,
            py + dy,
            escape(&label)
        );
    }
    let degree = class.degree().map_or("total".to_string(), |d| d.to_string());
    let top = MARGIN + height + MARGIN / 2.0;
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN}" y="{top:.2}" font-family="monospace" font-size="13">pieces of c_{degree}</text>"#
    );
    let mut ordered: Vec<(&String, &usize)> = colours.iter().collect();
    ordered.sort_by_key(|(_, &k)| k);
    for (text, &k) in ordered {
        let y = top + LEGEND_LINE * (k as f64 + 1.0);
        let fill = PALETTE[k % PALETTE.len()];
        let _ = writeln!(
            s,
            r#"<rect x="{MARGIN}" y="{:.2}" width="12" height="12" fill="{fill}" stroke="black"/>"#,
            y - 10.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{y:.2}" font-family="monospace" font-size="12">#{} {}</text>"#,
            MARGIN + 18.0,
            k + 1,
            escape(text)
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_square_with_interior_point() {
        let h = convex_hull(vec![(0.0, 0.0), (1.0, 0.0), (0.5, 0.5), (1.0, 1.0), (0.0, 1.0)]);
        assert_eq!(h, vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
    }
}
