//! Plain-text rendering of command output.

use serde_json::Value;

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_f64() => format!("{:.10e}", n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => a.iter().map(cell).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}

fn grid(headers: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for r in &rows {
        for (i, c) in r.iter().enumerate() {
            w[i] = w[i].max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let mut s = cells
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{c:<width$}", width = w[i]))
            .collect::<Vec<_>>()
            .join("  ");
        s.truncate(s.trim_end().len());
        s + "\n"
    };
    let mut out = line(headers.iter().map(|h| h.to_string()).collect());
    out += &line(w.iter().map(|&n| "-".repeat(n)).collect());
    for r in rows {
        out += &line(r);
    }
    out
}

fn key_values(v: &Value, keys: &[&str]) -> String {
    keys.iter()
        .filter_map(|k| v.get(*k).map(|x| format!("{k}: {}\n", cell(x))))
        .collect()
}

fn mle_block(title: &str, r: &Value) -> String {
    let mut out = format!("[{title}]\n");
    out += &key_values(r, &["method", "iterations", "log_lik", "moment_residual", "variety_residual"]);
    let p = r["p_hat"].as_array().cloned().unwrap_or_default();
    let rows = p
        .iter()
        .enumerate()
        .map(|(i, x)| vec![format!("p{}", i + 1), cell(x)])
        .chain(
            r["theta_hat"]
                .as_array()
                .into_iter()
                .flatten()
                .enumerate()
                .map(|(i, x)| vec![format!("theta{}", i + 1), cell(x)]),
        )
        .collect();
    out + &grid(&["coordinate", "value"], rows)
}

pub fn render(v: &Value) -> String {
    match v["command"].as_str().unwrap_or("") {
        "models list" => {
            let rows = v["polygons"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|p| {
                    vec![
                        cell(&p["label"]),
                        cell(&p["degree"]),
                        match p["singularities"].as_array() {
                            Some(a) if a.is_empty() => "smooth".into(),
                            _ => cell(&p["singularities"]),
                        },
                        cell(&p["surface"]),
                        cell(&p["ml_degree"]),
                        cell(&p["ideal"]),
                    ]
                })
                .collect();
            grid(&["label", "degree", "singularities", "surface", "ml_degree", "ideal"], rows)
        }
        "mle" => {
            let mut out = key_values(v, &["model", "data"]);
            if let Some(b) = v.get("birch") {
                out += &mle_block("birch", b);
            }
            if let Some(c) = v.get("closed_form") {
                out += &mle_block("closed form", &c["result"]);
                for d in c["discrepancies"].as_array().into_iter().flatten() {
                    out += &format!("discrepancy: {} ({})\n", cell(&d["display"]), cell(&d["coordinate"]));
                }
            }
            if let Some(a) = v.get("agreement") {
                out += &key_values(a, &["max_abs_delta_p"]);
            }
            out
        }
        "mldegree" => {
            let r = &v["report"];
            let mut out = key_values(r, &["model", "count", "degree", "fiber_degree", "consistent", "experimental"]);
            let rows = r["trials"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|t| {
                    vec![
                        cell(&t["stream"]),
                        cell(&t["u"]),
                        cell(&t["eliminant_degree"]),
                        cell(&t["filtered_count"]),
                        cell(&t["contains_mle"]),
                    ]
                })
                .collect();
            out += &grid(&["trial", "u", "eliminant", "solutions", "mle_found"], rows);
            out
        }
        "verify" => {
            let mut out = key_values(
                v,
                &[
                    "model",
                    "samples",
                    "seed",
                    "max_abs_delta_p",
                    "max_theta_round_trip",
                    "max_birch_moment_residual",
                    "max_birch_variety_residual",
                    "disagreements",
                ],
            );
            let rows = v["display_audit"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|d| vec![cell(&d["display"]), cell(&d["passes"]), cell(&d["failures"])])
                .collect();
            out += &grid(&["display", "passes", "failures"], rows);
            out
        }
        _ => crate::canonical::to_string(v),
    }
}
