//! Bar charts (mean with ±std whiskers) from exported table CSVs, one SVG
//! per (table, metric).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use forge_core::experiment::METRIC_NAMES;

use crate::error::ForgeError;

/// One bar: a (policy, cell) row of a table.
#[derive(Debug, Clone, PartialEq)]
pub struct Bar {
    pub label: String,
    pub mean: f64,
    pub std: f64,
}

/// Reads one metric's bars from a table CSV. Rows of multi-cell grids get
/// their stress coordinates appended to the label.
pub fn read_bars(path: &Path, metric: &str) -> Result<Vec<Bar>, ForgeError> {
    let csv_err = |source| ForgeError::Csv {
        path: path.into(),
        source,
    };
    let mut reader = csv::Reader::from_path(path).map_err(csv_err)?;
    let headers = reader.headers().map_err(csv_err)?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let missing = |name: &str| ForgeError::Table {
        path: path.into(),
        line: 1,
        message: format!("missing column `{name}`"),
    };
    let label = col("label").ok_or_else(|| missing("label"))?;
    let mean_col = col(&format!("{metric}_mean")).ok_or_else(|| missing(metric))?;
    let std_col = col(&format!("{metric}_std")).ok_or_else(|| missing(metric))?;
    let stress: Vec<usize> = ["omega_surge", "sigma_noise", "rho_turnover"]
        .iter()
        .filter_map(|c| col(c))
        .collect();
    let records: Vec<csv::StringRecord> = reader
        .records()
        .collect::<Result<_, _>>()
        .map_err(csv_err)?;
    let varying: Vec<usize> = stress
        .into_iter()
        .filter(|&c| records.iter().any(|r| r.get(c) != records[0].get(c)))
        .collect();
    let mut bars = Vec::with_capacity(records.len());
    for (i, r) in records.iter().enumerate() {
        let number = |c: usize| {
            r[c].parse::<f64>().map_err(|_| ForgeError::Table {
                path: path.into(),
                line: i + 2,
                message: format!("`{}` is not a number", &r[c]),
            })
        };
        let mut text = r[label].to_string();
        for &c in &varying {
            let _ = write!(text, " {}={}", &headers[c], &r[c]);
        }
        bars.push(Bar {
            label: text,
            mean: number(mean_col)?,
            std: number(std_col)?,
        });
    }
    Ok(bars)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

pub fn bar_chart_svg(title: &str, bars: &[Bar]) -> String {
    let (left, top, bar_h, gap, width) = (260.0, 40.0, 18.0, 6.0, 720.0);
    let plot_w = width - left - 40.0;
    let height = top + bars.len() as f64 * (bar_h + gap) + 30.0;
    let max = bars
        .iter()
        .map(|b| (b.mean + b.std).max(0.0))
        .fold(0.0, f64::max)
        .max(1e-12);
    let x = |v: f64| left + plot_w * (v.max(0.0) / max);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" font-size="15" text-anchor="middle">{}</text>"#,
        width / 2.0,
        escape(title)
    );
    for (i, b) in bars.iter().enumerate() {
        let y = top + i as f64 * (bar_h + gap);
        let cy = y + bar_h / 2.0;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end" dominant-baseline="middle">{}</text>"#,
            left - 8.0,
            cy,
            escape(&b.label)
        );
        let _ = writeln!(
            s,
            r##"<rect x="{left}" y="{y}" width="{:.2}" height="{bar_h}" fill="#4c72b0"/>"##,
            x(b.mean) - left
        );
        if b.std > 0.0 {
            let (lo, hi) = (x(b.mean - b.std), x(b.mean + b.std));
            let _ = writeln!(
                s,
                r#"<line x1="{lo:.2}" y1="{cy}" x2="{hi:.2}" y2="{cy}" stroke="black"/>"#
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{}" dominant-baseline="middle">{:.3}</text>"#,
            x(b.mean + b.std) + 4.0,
            cy,
            b.mean
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Every `*.csv` table in `input` (per-run files excluded) becomes eight
/// SVGs in `output`, named `<stem>_<metric>.svg`.
pub fn plot_dir(input: &Path, output: &Path) -> Result<Vec<PathBuf>, ForgeError> {
    let mut tables: Vec<PathBuf> = std::fs::read_dir(input)
        .map_err(|e| ForgeError::io(input, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension().is_some_and(|x| x == "csv") && !p.to_string_lossy().ends_with("_runs.csv")
        })
        .collect();
    tables.sort();
    std::fs::create_dir_all(output).map_err(|e| ForgeError::io(output, e))?;
    let mut written = Vec::new();
    for table in tables {
        let stem = table
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        for metric in METRIC_NAMES {
            let bars = read_bars(&table, metric)?;
            let path = output.join(format!("{stem}_{metric}.svg"));
            std::fs::write(&path, bar_chart_svg(&format!("{stem}: {metric}"), &bars))
                .map_err(|e| ForgeError::io(&path, e))?;
            written.push(path);
        }
    }
    Ok(written)
}
