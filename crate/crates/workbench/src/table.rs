//! CSV emission. Numbers use the shortest representation that parses back
//! to the same `f64`, so identical inputs give identical bytes.

use crate::sweep::{Row, SweepVar};

pub const COLUMNS: [&str; 9] = [
    "sweep_value",
    "ec_approx",
    "ec_ub",
    "ec_lb",
    "ec_mc",
    "mc_stderr",
    "gamma_teff",
    "mode",
    "d_boundary_m",
];

pub fn units_comment(var: SweepVar) -> String {
    format!(
        "# units: sweep_value = {} [{}]; ec_approx, ec_ub, ec_lb, ec_mc, mc_stderr [bit/s/Hz]; gamma_teff [linear]; d_boundary_m [m]\n",
        var.name(),
        var.unit()
    )
}

pub const CONVENTION_COMMENT: &str = "# receive elevation cosine uses the receiver height: cos_r = (z_r - z0) / r_r\n";

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Units line, convention line, header and one line per row.
pub fn write_table(out: &mut String, var: SweepVar, rows: &[Row]) {
    out.push_str(&units_comment(var));
    out.push_str(CONVENTION_COMMENT);
    out.push_str(&COLUMNS.join(","));
    out.push('\n');
    for r in rows {
        let fields = [
            r.sweep_value.to_string(),
            cell(r.ec_approx),
            cell(r.ec_ub),
            cell(r.ec_lb),
            cell(r.ec_mc),
            cell(r.mc_stderr),
            r.gamma_teff.to_string(),
            r.mode.as_str().to_string(),
            r.d_boundary_m.to_string(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
}

pub fn to_csv(var: SweepVar, rows: &[Row]) -> String {
    let mut out = String::new();
    write_table(&mut out, var, rows);
    out
}

/// Splits multi-series output back into `(label, rows)` pairs; lines other
/// than `# series:` comments, headers and data are skipped.
pub fn parse_series(text: &str) -> Vec<(String, Vec<Vec<String>>)> {
    let mut out: Vec<(String, Vec<Vec<String>>)> = Vec::new();
    for line in text.lines() {
        if let Some(label) = line.strip_prefix("# series: ") {
            out.push((label.to_string(), Vec::new()));
        } else if line.starts_with('#') || line.starts_with(COLUMNS[0]) || line.is_empty() {
            continue;
        } else {
            if out.is_empty() {
                out.push((String::new(), Vec::new()));
            }
            let last = out.last_mut().expect("non-empty");
            last.1.push(line.split(',').map(str::to_string).collect());
        }
    }
    out
}
