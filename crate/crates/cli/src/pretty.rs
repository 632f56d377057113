//! Human-readable tables for `--pretty`.

use std::fmt::Write;

use serde_json::Value;

fn list(v: &Value) -> String {
    v.as_array()
        .map(|a| {
            a.iter()
                .map(|x| match x {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect::<Vec<_>>()
                .join(",")
        })
        .unwrap_or_default()
}

fn pair(v: &Value) -> String {
    format!("{{{}}}", list(v))
}

fn sign(parity: &Value) -> &'static str {
    match parity.as_str() {
        Some("even") => "+",
        Some("odd") => "-",
        Some("both") => "±",
        _ => "?",
    }
}

fn table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let _ = writeln!(out, "{}", line(header.iter().map(|h| h.to_string()).collect()));
    let _ = writeln!(out, "{}", line(widths.iter().map(|w| "-".repeat(*w)).collect()));
    for r in rows {
        let _ = writeln!(out, "{}", line(r.clone()));
    }
}

fn graph_line(out: &mut String, g: &Value) {
    let _ = writeln!(
        out,
        "graph: {} vertices, {} edges, {} mode",
        g["n"],
        g["edges"].as_array().map_or(0, Vec::len),
        g["mode"].as_str().unwrap_or("rational")
    );
}

pub fn render(report: &Value) -> String {
    let mut out = String::new();
    match report["command"].as_str() {
        Some("analyze") => analyze(&mut out, report),
        Some("multiplets") => multiplets(&mut out, report),
        Some("apply") => apply(&mut out, report),
        Some("eigen") => eigen(&mut out, report),
        Some("generate") => generate(&mut out, report),
        _ => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(report).unwrap_or_default());
        }
    }
    out
}

fn analyze(out: &mut String, r: &Value) {
    graph_line(out, &r["graph"]);
    let rows: Vec<Vec<String>> = r["pairs"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|p| {
            let singles: Vec<String> = p["singlets"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|s| format!("{}{}", s["vertex"], sign(&s["parity"])))
                .collect();
            vec![
                pair(&p["pair"]),
                singles.join(" "),
                match &p["exchange_automorphism"] {
                    Value::Bool(b) => b.to_string(),
                    _ => "unknown".into(),
                },
            ]
        })
        .collect();
    let _ = writeln!(out, "cospectral pairs: {}", rows.len());
    table(out, &["pair", "singlets", "exchange automorphism"], &rows);
    let a = &r["automorphisms"];
    let _ = writeln!(
        out,
        "automorphism group: {}, order {}",
        a["verdict"].as_str().unwrap_or("?"),
        a["order"]
    );
}

fn multiplets(out: &mut String, r: &Value) {
    graph_line(out, &r["graph"]);
    let _ = writeln!(
        out,
        "pair {} ({}), max size {}, parity {}",
        pair(&r["pair"]),
        if r["cospectral"] == true { "cospectral" } else { "not cospectral" },
        r["max_size"],
        r["parity_filter"].as_str().unwrap_or("?")
    );
    let rows: Vec<Vec<String>> = r["multiplets"]
        .as_array()
        .into_iter()
        .flatten()
        .enumerate()
        .map(|(k, m)| {
            vec![
                k.to_string(),
                m["notation"].as_str().unwrap_or("").to_string(),
                m["parity"].as_str().unwrap_or("").to_string(),
                m["basis"].as_array().map_or(0, Vec::len).to_string(),
                m["uniform"].to_string(),
                m["full_support"].to_string(),
            ]
        })
        .collect();
    table(out, &["#", "multiplet", "parity", "dim", "uniform", "full support"], &rows);
}

fn apply(out: &mut String, r: &Value) {
    let rows: Vec<Vec<String>> = r["chain"]
        .as_array()
        .into_iter()
        .flatten()
        .enumerate()
        .map(|(k, rec)| {
            let c = &rec["certificate"];
            let failed: Vec<String> = c["checks"]
                .as_array()
                .into_iter()
                .flatten()
                .filter(|ch| ch["passed"] == false)
                .map(|ch| ch["name"].as_str().unwrap_or("").to_string())
                .collect();
            vec![
                (k + 1).to_string(),
                rec["step"]["op"].as_str().unwrap_or("?").to_string(),
                format!("{} -> {}", c["n_before"], c["n_after"]),
                pair(&c["pair"]),
                c["accepted"].to_string(),
                failed.join("; "),
            ]
        })
        .collect();
    table(out, &["step", "op", "vertices", "pair", "accepted", "failed checks"], &rows);
    if let Some(e) = r["error"].as_str() {
        let _ = writeln!(out, "stopped at step {}: {e}", r["failed_step"]);
    }
    graph_line(out, &r["graph"]);
}

fn eigen(out: &mut String, r: &Value) {
    let c = &r["counts"];
    let _ = writeln!(
        out,
        "pair {}: {} even, {} odd, {} zero, {} indeterminate",
        pair(&r["pair"]),
        c["even"],
        c["odd"],
        c["zero"],
        c["indeterminate"]
    );
    let mut rows = Vec::new();
    for cl in r["clusters"].as_array().into_iter().flatten() {
        for v in cl["vectors"].as_array().into_iter().flatten() {
            rows.push(vec![
                v["id"].to_string(),
                cl["value"].as_str().unwrap_or("").to_string(),
                cl["multiplicity"].to_string(),
                v["parity"].as_str().unwrap_or("").to_string(),
                list(&v["zero_set"]),
            ]);
        }
    }
    table(out, &["vector", "eigenvalue", "mult", "parity", "zero set"], &rows);
    let _ = writeln!(
        out,
        "zero sums: {} checks against {} multiplets, all hold: {}",
        r["zero_sums"].as_array().map_or(0, Vec::len),
        r["multiplets_checked"],
        r["all_zero_sums_hold"]
    );
}

fn generate(out: &mut String, r: &Value) {
    let _ = writeln!(
        out,
        "template {} seed {} -> bundle {}",
        r["template"].as_str().unwrap_or("?"),
        r["seed"],
        r["directory"].as_str().unwrap_or("?")
    );
    graph_line(out, &r["graph"]);
    let _ = writeln!(out, "pair {}, {} transform steps", pair(&r["pair"]), r["chain"].as_array().map_or(0, Vec::len));
    let a = &r["automorphisms"];
    let _ = writeln!(
        out,
        "automorphism group: {}, order {}",
        a["verdict"].as_str().unwrap_or("?"),
        a["order"]
    );
    if let Some(d) = r["written_to"].as_str() {
        let _ = writeln!(out, "written to {d}");
    }
}
