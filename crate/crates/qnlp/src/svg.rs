//! SVG drawings of string diagrams.
//!
//! Layers are drawn top to bottom, one row each. Wires are re-spaced at
//! every row boundary, so a wire that changes position runs diagonally.
//! Words are `rect.box` elements, cups and caps `path.arc`, spiders
//! `circle.spider`, swaps two `line.swap` strokes and every other wire
//! segment a `line.wire`.

use std::fmt::Write;

use qnlp_core::{Diagram, Generator, PType};

const GAP: f64 = 60.0;
const ROW: f64 = 70.0;
const MARGIN: f64 = 30.0;
const BOX_H: f64 = 26.0;

fn x_of(i: usize) -> f64 {
    MARGIN + GAP * i as f64
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Canvas {
    body: String,
}

impl Canvas {
    fn line(&mut self, class: &str, (x1, y1): (f64, f64), (x2, y2): (f64, f64)) {
        let _ = writeln!(self.body, r#"<line class="{class}" x1="{x1:.1}" y1="{y1:.1}" x2="{x2:.1}" y2="{y2:.1}"/>"#);
    }

    fn label(&mut self, x: f64, y: f64, t: &PType) {
        let _ = writeln!(self.body, r#"<text class="type" x="{:.1}" y="{y:.1}">{}</text>"#, x + 4.0, escape(&t.to_string()));
    }

    /// Arc between two points bulging by `depth` (down when positive).
    fn arc(&mut self, x1: f64, x2: f64, y: f64, depth: f64) {
        let _ = writeln!(
            self.body,
            r#"<path class="arc" d="M {x1:.1} {y:.1} C {x1:.1} {:.1}, {x2:.1} {:.1}, {x2:.1} {y:.1}"/>"#,
            y + depth,
            y + depth
        );
    }
}

/// Deterministic SVG for a type-checked diagram.
pub fn render_svg(d: &Diagram) -> String {
    let stages = d.wire_types().expect("diagram type-checks");
    let widest = stages.iter().map(|s| s.len()).max().unwrap_or(0).max(1);
    let width = 2.0 * MARGIN + GAP * widest as f64;
    let height = ROW * (d.layers().len() + 1) as f64;
    let mut c = Canvas { body: String::new() };

    let top = ROW / 2.0;
    let dom_end = if d.layers().is_empty() { height } else { top };
    for (i, t) in d.dom().iter().enumerate() {
        c.line("wire", (x_of(i), 0.0), (x_of(i), dom_end));
        c.label(x_of(i), 12.0, t);
    }

    for (k, layer) in d.layers().iter().enumerate() {
        let y0 = top + ROW * k as f64;
        let (y1, mid) = (y0 + ROW, y0 + ROW / 2.0);
        let before = &stages[k];
        let after = &stages[k + 1];
        let g = &layer.generator;
        let (o, n_in, n_out) = (layer.offset, g.dom_len(), g.cod_len());

        for i in 0..o {
            c.line("wire", (x_of(i), y0), (x_of(i), y1));
        }
        for i in o + n_in..before.len() {
            let j = i - n_in + n_out;
            c.line("wire", (x_of(i), y0), (x_of(j), y1));
        }

        match g {
            Generator::Cup { .. } => {
                c.arc(x_of(o), x_of(o + 1), y0, ROW * 0.4);
            }
            Generator::Cap { .. } => {
                c.arc(x_of(o), x_of(o + 1), y1, -ROW * 0.4);
                c.label(x_of(o), y1 - 4.0, &after.0[o]);
                c.label(x_of(o + 1), y1 - 4.0, &after.0[o + 1]);
            }
            Generator::Swap { .. } => {
                c.line("swap", (x_of(o), y0), (x_of(o + 1), y1));
                c.line("swap", (x_of(o + 1), y0), (x_of(o), y1));
            }
            Generator::Spider { .. } => {
                let span = n_in.max(n_out).max(1) - 1;
                let cx = x_of(o) + GAP * span as f64 / 2.0;
                for i in 0..n_in {
                    c.line("wire", (x_of(o + i), y0), (cx, mid));
                }
                for j in 0..n_out {
                    c.line("wire", (cx, mid), (x_of(o + j), y1));
                }
                let _ = writeln!(c.body, r#"<circle class="spider" cx="{cx:.1}" cy="{mid:.1}" r="6"/>"#);
                for j in 0..n_out {
                    c.label(x_of(o + j), y1 - 4.0, &after.0[o + j]);
                }
            }
            Generator::Word { token, .. } => {
                let span = n_in.max(n_out).max(1) - 1;
                let (left, right) = (x_of(o) - GAP * 0.4, x_of(o + span) + GAP * 0.4);
                for i in 0..n_in {
                    c.line("wire", (x_of(o + i), y0), (x_of(o + i), mid - BOX_H / 2.0));
                }
                for j in 0..n_out {
                    c.line("wire", (x_of(o + j), mid + BOX_H / 2.0), (x_of(o + j), y1));
                    c.label(x_of(o + j), y1 - 4.0, &after.0[o + j]);
                }
                let _ = writeln!(
                    c.body,
                    r#"<rect class="box" x="{left:.1}" y="{:.1}" width="{:.1}" height="{BOX_H:.1}"/>"#,
                    mid - BOX_H / 2.0,
                    right - left
                );
                let _ = writeln!(
                    c.body,
                    r#"<text class="token" x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
                    (left + right) / 2.0,
                    mid + 5.0,
                    escape(token)
                );
            }
        }
    }

    let bottom = top + ROW * d.layers().len() as f64;
    if !d.layers().is_empty() {
        for (i, t) in d.cod().iter().enumerate() {
            c.line("wire", (x_of(i), bottom), (x_of(i), height));
            c.label(x_of(i), height - 4.0, t);
        }
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    out.push_str(
        "<style>line,path{stroke:#222;stroke-width:1.5;fill:none} rect.box{fill:#fff;stroke:#222} \
         circle.spider{fill:#222} text{font:12px sans-serif} text.type{fill:#555;font-size:10px}</style>\n",
    );
    out.push_str(&c.body);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use qnlp_core::readers::{cups_read, spiders_read, Sentence};
    use qnlp_core::TypeSeq;

    #[test]
    fn identity_is_one_labelled_line() {
        let svg = render_svg(&Diagram::id(TypeSeq::of(PType::n())));
        assert_eq!(svg.matches("<line").count(), 1);
        assert_eq!(svg.matches(">n</text>").count(), 1);
    }

    #[test]
    fn spiders_are_dots() {
        let svg = render_svg(&spiders_read(&Sentence::parse("a b c").unwrap()));
        assert_eq!(svg.matches("<circle").count(), 1);
        assert_eq!(svg.matches(r#"class="box""#).count(), 3);
    }

    #[test]
    fn tokens_are_escaped() {
        let svg = render_svg(&cups_read(&Sentence::from_tokens(vec!["a<b".into()]).unwrap()));
        assert!(svg.contains("a&lt;b"));
    }
}
