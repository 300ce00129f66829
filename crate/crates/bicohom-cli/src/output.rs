//! Rendering helpers: ASCII dimension grids and JSON assembly.
//!
//! Text grids follow one fixed layout (rows `q` descending, columns `p`
//! ascending, axis labels) so every command's tables diff stably; JSON
//! tables are arrays of `{p, q, …}` objects over the full rectangle,
//! including zero entries, sorted by `p` then `q`.

use std::io::IsTerminal;
use std::sync::OnceLock;

use bicohom::cohomology::{CohomologyTable, SpectralPage};
use serde_json::{json, Value};

/// Whether headings may carry ANSI styling: only on a terminal, and never
/// when the environment sets `BICOHOM_COLOR=0`.
pub fn style_enabled() -> bool {
    static ENABLED: OnceLock<bool> = OnceLock::new();
    *ENABLED.get_or_init(|| {
        if std::env::var_os("BICOHOM_COLOR").is_some_and(|v| v == *"0") {
            return false;
        }
        std::io::stdout().is_terminal()
    })
}

/// A section heading, bold when styling is on.
pub fn heading(text: &str) -> String {
    if style_enabled() {
        format!("\x1b[1m{text}\x1b[0m")
    } else {
        text.to_owned()
    }
}

/// Render `grid[p][q]` as an ASCII table with `q` rows descending:
///
/// ```text
/// q=1 | 1 1
/// q=0 | 1 1
///     +----
///       0 1  (p)
/// ```
pub fn render_grid(grid: &[Vec<usize>]) -> String {
    let pmax = grid.len() - 1;
    let qmax = grid[0].len() - 1;
    let width = grid
        .iter()
        .flatten()
        .map(|d| d.to_string().len())
        .max()
        .unwrap_or(1)
        .max(1);
    let qlabel = format!("q={qmax}").len();
    let mut out = String::new();
    for q in (0..=qmax).rev() {
        let mut line = format!("{:>qlabel$} |", format!("q={q}"));
        for row in grid.iter() {
            line.push_str(&format!(" {:>width$}", row[q]));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out.push_str(&format!(
        "{:>qlabel$} +{}\n",
        "",
        "-".repeat((width + 1) * (pmax + 1))
    ));
    let mut axis = format!("{:>qlabel$}  ", "");
    for p in 0..=pmax {
        axis.push_str(&format!(" {p:>width$}"));
    }
    out.push_str(axis.trim_end());
    out.push_str("  (p)\n");
    out
}

/// The `grid[p][q]` array of a bigraded cohomology table.
pub fn table_grid(t: &CohomologyTable) -> Vec<Vec<usize>> {
    (0..=t.pmax())
        .map(|p| (0..=t.qmax()).map(|q| t.bidegree(p, q)).collect())
        .collect()
}

/// A bigraded table as a sorted JSON array of `{p, q, dim}` over the full
/// rectangle, zero entries included.
pub fn table_json(t: &CohomologyTable) -> Value {
    let mut entries = Vec::new();
    for p in 0..=t.pmax() {
        for q in 0..=t.qmax() {
            entries.push(json!({"p": p, "q": q, "dim": t.bidegree(p, q)}));
        }
    }
    Value::Array(entries)
}

/// A spectral page as JSON: entries and differential ranks over the full
/// rectangle.
pub fn page_json(page: &SpectralPage) -> Value {
    let mut entries = Vec::new();
    let mut ranks = Vec::new();
    for (p, col) in page.entries.iter().enumerate() {
        for (q, dim) in col.iter().enumerate() {
            entries.push(json!({"p": p, "q": q, "dim": dim}));
        }
    }
    for (p, col) in page.differential_ranks.iter().enumerate() {
        for (q, rank) in col.iter().enumerate() {
            ranks.push(json!({"p": p, "q": q, "rank": rank}));
        }
    }
    json!({"r": page.r, "entries": entries, "d_ranks": ranks})
}

/// One page as text: heading, grid, and the nonzero differential ranks.
pub fn render_page(page: &SpectralPage) -> String {
    let mut out = heading(&format!("page {}", page.r));
    out.push('\n');
    out.push_str(&render_grid(&page.entries));
    let nonzero: Vec<String> = page
        .differential_ranks
        .iter()
        .enumerate()
        .flat_map(|(p, col)| {
            col.iter()
                .enumerate()
                .filter(|(_, rank)| **rank > 0)
                .map(move |(q, rank)| format!("({p},{q}) -> {rank}"))
        })
        .collect();
    if nonzero.is_empty() {
        out.push_str(&format!("d_{} = 0\n", page.r));
    } else {
        out.push_str(&format!("d_{} nonzero ranks: {}\n", page.r, nonzero.join(", ")));
    }
    out
}

/// `[a, b, c]` rendering shared by the Betti and Delta rows.
pub fn int_list<T: std::fmt::Display>(values: &[T]) -> String {
    let inner: Vec<String> = values.iter().map(T::to_string).collect();
    format!("[{}]", inner.join(", "))
}

/// Pretty-printed JSON with a trailing newline (the one JSON emitter, so
/// byte determinism is a single code path).
pub fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("JSON serializes"));
}
