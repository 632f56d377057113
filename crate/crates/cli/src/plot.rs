//! Static SVG drawing of a report's graph on a circular layout.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde_json::Value;

const WIDTH: f64 = 640.0;
const DRAW_HEIGHT: f64 = 600.0;
const LEGEND_HEIGHT: f64 = 110.0;
const RADIUS: f64 = 230.0;
const NODE_R: f64 = 16.0;

const PAIR_COLOUR: &str = "#d62728";
const MULTIPLET_COLOUR: &str = "#9ecae1";
const ZERO_COLOUR: &str = "#bdbdbd";
const PLAIN_COLOUR: &str = "#ffffff";

struct Drawing {
    n: usize,
    edges: Vec<(usize, usize, String)>,
    pair: BTreeSet<usize>,
    labels: BTreeMap<usize, BTreeSet<String>>,
    zero_set: BTreeSet<usize>,
    caption: Vec<String>,
}

fn as_index(v: &Value) -> Option<usize> {
    v.as_u64().map(|x| x as usize)
}

fn weight_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn graph_of(report: &Value) -> (usize, Vec<(usize, usize, String)>) {
    let g = &report["graph"];
    let n = g["n"].as_u64().unwrap_or(0) as usize;
    let edges = g["edges"]
        .as_array()
        .map(|es| {
            es.iter()
                .filter_map(|e| {
                    let (i, j) = (as_index(&e[0])?, as_index(&e[1])?);
                    (1..=n).contains(&i).then_some(())?;
                    (1..=n).contains(&j).then_some(())?;
                    Some((i, j, weight_text(&e[2])))
                })
                .collect()
        })
        .unwrap_or_default();
    (n, edges)
}

fn pair_of(report: &Value) -> BTreeSet<usize> {
    let from = |p: &Value| -> Option<BTreeSet<usize>> {
        let a = p.as_array()?;
        a.iter().map(as_index).collect()
    };
    from(&report["pair"])
        .or_else(|| from(&report["pairs"][0]["pair"]))
        .unwrap_or_default()
}

/// Sublet coefficient labels of one multiplet, or of every multiplet.
fn multiplet_labels(report: &Value, which: Option<usize>, d: &mut Drawing) {
    let Some(ms) = report["multiplets"].as_array() else {
        return;
    };
    let chosen: Vec<&Value> = match which {
        Some(k) => ms.get(k).into_iter().collect(),
        None => ms.iter().collect(),
    };
    for m in chosen {
        if let Some(n) = m["notation"].as_str() {
            d.caption.push(n.to_string());
        }
        for s in m["sublets"].as_array().into_iter().flatten() {
            let coeff = s["coefficient"].as_str().unwrap_or("?").to_string();
            for v in s["vertices"].as_array().into_iter().flatten().filter_map(as_index) {
                d.labels.entry(v).or_default().insert(coeff.clone());
            }
        }
    }
}

/// Zero set of the chosen eigenvector; by default the first odd one.
fn zero_set(report: &Value, which: Option<usize>, d: &mut Drawing) {
    let vectors: Vec<&Value> = report["clusters"]
        .as_array()
        .into_iter()
        .flatten()
        .flat_map(|c| c["vectors"].as_array().into_iter().flatten())
        .collect();
    let pick = match which {
        Some(id) => vectors.iter().find(|v| as_index(&v["id"]) == Some(id)),
        None => vectors.iter().find(|v| v["parity"] == "odd"),
    };
    if let Some(v) = pick {
        d.caption.push(format!(
            "zero set of eigenvector {} ({})",
            v["id"],
            v["parity"].as_str().unwrap_or("?")
        ));
        d.zero_set = v["zero_set"].as_array().into_iter().flatten().filter_map(as_index).collect();
    }
}

fn position(k: usize, n: usize) -> (f64, f64) {
    let cx = WIDTH / 2.0;
    let cy = DRAW_HEIGHT / 2.0;
    if n == 1 {
        return (cx, cy);
    }
    let t = -std::f64::consts::FRAC_PI_2 + 2.0 * std::f64::consts::PI * (k - 1) as f64 / n as f64;
    (cx + RADIUS * t.cos(), cy + RADIUS * t.sin())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render(report: &Value, multiplet: Option<usize>, vector: Option<usize>) -> String {
    let (n, edges) = graph_of(report);
    let mut d = Drawing {
        n,
        edges,
        pair: pair_of(report),
        labels: BTreeMap::new(),
        zero_set: BTreeSet::new(),
        caption: Vec::new(),
    };
    multiplet_labels(report, multiplet, &mut d);
    zero_set(report, vector, &mut d);
    draw(&d)
}

fn draw(d: &Drawing) -> String {
    let height = DRAW_HEIGHT + LEGEND_HEIGHT;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif">"##
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(s, r##"<g id="edges" stroke="#555555" stroke-width="1.5" fill="none">"##);
    for (i, j, w) in &d.edges {
        let (x1, y1) = position(*i, d.n);
        if i == j {
            let (cx, cy) = (WIDTH / 2.0, DRAW_HEIGHT / 2.0);
            let len = ((x1 - cx).powi(2) + (y1 - cy).powi(2)).sqrt().max(1.0);
            let (lx, ly) = (x1 + (x1 - cx) / len * NODE_R * 1.6, y1 + (y1 - cy) / len * NODE_R * 1.6);
            let _ = writeln!(s, r##"<circle cx="{lx:.2}" cy="{ly:.2}" r="{:.2}"/>"##, NODE_R * 0.8);
            let _ = writeln!(
                s,
                r##"<text x="{:.2}" y="{:.2}" font-size="11" fill="#333333" stroke="none" text-anchor="middle">{}</text>"##,
                lx,
                ly - NODE_R,
                escape(w)
            );
            continue;
        }
        let (x2, y2) = position(*j, d.n);
        let _ = writeln!(s, r##"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"##);
        if w != "1" {
            let _ = writeln!(
                s,
                r##"<text x="{:.2}" y="{:.2}" font-size="11" fill="#333333" stroke="none" text-anchor="middle">{}</text>"##,
                (x1 + x2) / 2.0,
                (y1 + y2) / 2.0 - 3.0,
                escape(w)
            );
        }
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r##"<g id="vertices" font-size="13" text-anchor="middle">"##);
    for v in 1..=d.n {
        let (x, y) = position(v, d.n);
        let fill = if d.zero_set.contains(&v) {
            ZERO_COLOUR
        } else if d.labels.contains_key(&v) {
            MULTIPLET_COLOUR
        } else {
            PLAIN_COLOUR
        };
        let (stroke, width) = if d.pair.contains(&v) { (PAIR_COLOUR, 3.5) } else { ("#222222", 1.5) };
        let dash = if d.zero_set.contains(&v) { r##" stroke-dasharray="4 2""## } else { "" };
        let _ = writeln!(
            s,
            r##"<circle cx="{x:.2}" cy="{y:.2}" r="{NODE_R}" fill="{fill}" stroke="{stroke}" stroke-width="{width}"{dash}/>"##
        );
        let _ = writeln!(s, r##"<text x="{x:.2}" y="{:.2}">{v}</text>"##, y + 4.5);
        if let Some(ls) = d.labels.get(&v) {
            let text: Vec<&str> = ls.iter().map(String::as_str).collect();
            let _ = writeln!(
                s,
                r##"<text x="{:.2}" y="{:.2}" font-size="12" fill="#08519c" text-anchor="start">{}</text>"##,
                x + NODE_R + 3.0,
                y - NODE_R + 2.0,
                escape(&text.join(" | "))
            );
        }
    }
    let _ = writeln!(s, "</g>");
    legend(&mut s, d);
    let _ = writeln!(s, "</svg>");
    s
}

fn legend(s: &mut String, d: &Drawing) {
    let top = DRAW_HEIGHT;
    let _ = writeln!(s, r##"<g id="legend" font-size="12">"##);
    let _ = writeln!(
        s,
        r##"<rect x="10" y="{top}" width="{}" height="{}" fill="#f7f7f7" stroke="#cccccc"/>"##,
        WIDTH - 20.0,
        LEGEND_HEIGHT - 10.0
    );
    let entries = [
        (PLAIN_COLOUR, PAIR_COLOUR, "cospectral pair"),
        (MULTIPLET_COLOUR, "#222222", "multiplet vertex (label: sublet coefficient)"),
        (ZERO_COLOUR, "#222222", "eigenvector zero set"),
    ];
    for (k, (fill, stroke, text)) in entries.iter().enumerate() {
        let y = top + 20.0 + 20.0 * k as f64;
        let _ = writeln!(
            s,
            r##"<circle cx="30" cy="{y}" r="7" fill="{fill}" stroke="{stroke}" stroke-width="2"/><text x="45" y="{}">{text}</text>"##,
            y + 4.0
        );
    }
    for (k, line) in d.caption.iter().take(2).enumerate() {
        let _ = writeln!(
            s,
            r##"<text x="330" y="{}" fill="#333333">{}</text>"##,
            top + 24.0 + 20.0 * k as f64,
            escape(line)
        );
    }
    if d.caption.len() > 2 {
        let _ = writeln!(
            s,
            r##"<text x="330" y="{}" fill="#333333">and {} more</text>"##,
            top + 64.0,
            d.caption.len() - 2
        );
    }
    let _ = writeln!(s, "</g>");
}
