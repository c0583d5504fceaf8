//! Report rows for the command-line driver and their three renderings:
//! JSON (array of objects, schema order), CSV (header plus one line per
//! row), and a padded text table. All three are deterministic functions of
//! the rows.

use serde::Serialize;
use serde_json::Value;

use crate::field::FieldSpec;
use crate::group::FiniteGroup;
use crate::homology::{CertStatus, Extent};
use crate::localcoh::InvariantReport;

/// Output format for every reporting command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Short display name for a group given by its table.
pub fn group_name(g: &FiniteGroup) -> String {
    if g.order == 1 {
        return "1".into();
    }
    let cyclic = (0..g.order).all(|i| (0..g.order).all(|j| g.mul(i, j) == (i + j) % g.order));
    if cyclic {
        format!("C{}", g.order)
    } else {
        format!("order-{}", g.order)
    }
}

fn extent_value(e: Extent) -> Value {
    match e {
        Extent::NegInf => Value::String("-inf".into()),
        Extent::PosInf => Value::String("inf".into()),
        Extent::Finite(n) => Value::from(n),
    }
}

fn status_str(s: CertStatus) -> &'static str {
    match s {
        CertStatus::Certified => "certified",
        CertStatus::WindowExact => "window-exact",
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// One row of the invariants / conjecture table.
#[derive(Serialize, Clone)]
pub struct InvariantRow {
    #[serde(rename = "module-id")]
    pub module_id: String,
    pub field: String,
    pub group: String,
    pub gd: Value,
    pub td: Value,
    pub reg: Value,
    pub reg_status: String,
    #[serde(rename = "N_direct")]
    pub n_direct: Value,
    #[serde(rename = "N_formula")]
    pub n_formula: Value,
    pub depth_lc: Value,
    pub depth_classical: Value,
    pub depth_derivative: Value,
    pub cd: Value,
    pub lc_td: Vec<Value>,
    pub conjecture_rhs: Value,
    pub gap: Option<i64>,
    pub certified: bool,
    pub window_used: usize,
}

impl InvariantRow {
    pub fn new(
        module_id: String,
        field: FieldSpec,
        group: &FiniteGroup,
        r: &InvariantReport,
    ) -> Self {
        InvariantRow {
            module_id,
            field: field.to_string(),
            group: group_name(group),
            gd: extent_value(r.gd.value),
            td: extent_value(r.td.value),
            reg: extent_value(r.reg.value),
            reg_status: status_str(r.reg.status).into(),
            n_direct: extent_value(r.n_direct.value),
            n_formula: extent_value(r.n_formula),
            depth_lc: extent_value(r.depth_lc),
            depth_classical: extent_value(r.depth_classical.value),
            depth_derivative: extent_value(r.depth_derivative.value),
            cd: extent_value(r.cohomological_dimension),
            lc_td: r.lc_td.iter().map(|t| extent_value(*t)).collect(),
            conjecture_rhs: extent_value(r.conjecture_rhs),
            gap: r.gap,
            certified: r.certified,
            window_used: r.window_used,
        }
    }
}

/// One row of the homology table (one per module per index).
#[derive(Serialize, Clone)]
pub struct HomologyRow {
    #[serde(rename = "module-id")]
    pub module_id: String,
    pub i: usize,
    pub dims: Vec<usize>,
    pub hd: Value,
    pub status: String,
}

/// One row of the local-cohomology table (one per module per index).
#[derive(Serialize, Clone)]
pub struct LocalCohRow {
    #[serde(rename = "module-id")]
    pub module_id: String,
    pub i: usize,
    pub dims: Vec<usize>,
    pub td: Value,
    pub status: String,
}

/// One row of the depth table.
#[derive(Serialize, Clone)]
pub struct DepthRow {
    #[serde(rename = "module-id")]
    pub module_id: String,
    pub depth_lc: Value,
    pub depth_classical: Value,
    pub depth_derivative: Value,
    pub agree: bool,
    pub status: String,
}

/// One row of the validation report.
#[derive(Serialize, Clone)]
pub struct ValidateRow {
    #[serde(rename = "module-id")]
    pub module_id: String,
    pub status: String,
}

/// One row of the conjecture scan. `applicable` is false on ♯-filtered
/// modules (the regularity conjecture excludes them); the two corollary
/// checks are "ok", "FAIL", or "n/a". Per-module failures land in `error`
/// with everything else nulled — the scan never aborts on one module.
#[derive(Serialize, Clone)]
pub struct ConjectureRow {
    #[serde(rename = "module-id")]
    pub module_id: String,
    pub applicable: bool,
    pub reg: Value,
    pub conjecture_rhs: Value,
    pub gap: Option<i64>,
    /// Torsion corollary `reg = td`; "n/a" on non-torsion modules.
    pub torsion_check: String,
    /// Shift corollary `reg(ΣV) = reg(V) - 1`; "n/a" when ΣV is ♯-filtered.
    pub shift_check: String,
    pub certified: bool,
    pub window_used: usize,
    pub error: Option<String>,
}

impl DepthRow {
    pub fn new(
        module_id: String,
        lc: Extent,
        classical: Extent,
        derivative: Extent,
        agree: bool,
        status: CertStatus,
    ) -> Self {
        DepthRow {
            module_id,
            depth_lc: extent_value(lc),
            depth_classical: extent_value(classical),
            depth_derivative: extent_value(derivative),
            agree,
            status: status_str(status).into(),
        }
    }
}

impl ConjectureRow {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        module_id: String,
        applicable: bool,
        reg: Extent,
        conjecture_rhs: Extent,
        gap: Option<i64>,
        torsion_check: String,
        shift_check: String,
        certified: bool,
        window_used: usize,
    ) -> Self {
        ConjectureRow {
            module_id,
            applicable,
            reg: extent_value(reg),
            conjecture_rhs: extent_value(conjecture_rhs),
            gap,
            torsion_check,
            shift_check,
            certified,
            window_used,
            error: None,
        }
    }

    pub fn failed(module_id: String, error: String) -> Self {
        ConjectureRow {
            module_id,
            applicable: false,
            reg: Value::Null,
            conjecture_rhs: Value::Null,
            gap: None,
            torsion_check: "n/a".into(),
            shift_check: "n/a".into(),
            certified: false,
            window_used: 0,
            error: Some(error),
        }
    }
}

impl HomologyRow {
    pub fn new(module_id: String, i: usize, dims: Vec<usize>, hd: Extent, status: CertStatus) -> Self {
        HomologyRow { module_id, i, dims, hd: extent_value(hd), status: status_str(status).into() }
    }
}

impl LocalCohRow {
    pub fn new(module_id: String, i: usize, dims: Vec<usize>, td: Extent, status: CertStatus) -> Self {
        LocalCohRow { module_id, i, dims, td: extent_value(td), status: status_str(status).into() }
    }
}

/// A row type that knows its column layout for CSV and table output.
pub trait RowLike {
    fn headers() -> Vec<&'static str>;
    fn cells(&self) -> Vec<String>;
}

fn join_values(vs: &[Value]) -> String {
    vs.iter().map(cell).collect::<Vec<_>>().join(";")
}

fn join_usizes(vs: &[usize]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";")
}

impl RowLike for InvariantRow {
    fn headers() -> Vec<&'static str> {
        vec![
            "module-id", "field", "group", "gd", "td", "reg", "reg_status", "N_direct",
            "N_formula", "depth_lc", "depth_classical", "depth_derivative", "cd", "lc_td",
            "conjecture_rhs", "gap", "certified", "window_used",
        ]
    }
    fn cells(&self) -> Vec<String> {
        vec![
            self.module_id.clone(),
            self.field.clone(),
            self.group.clone(),
            cell(&self.gd),
            cell(&self.td),
            cell(&self.reg),
            self.reg_status.clone(),
            cell(&self.n_direct),
            cell(&self.n_formula),
            cell(&self.depth_lc),
            cell(&self.depth_classical),
            cell(&self.depth_derivative),
            cell(&self.cd),
            join_values(&self.lc_td),
            cell(&self.conjecture_rhs),
            self.gap.map(|g| g.to_string()).unwrap_or_default(),
            self.certified.to_string(),
            self.window_used.to_string(),
        ]
    }
}

impl RowLike for HomologyRow {
    fn headers() -> Vec<&'static str> {
        vec!["module-id", "i", "dims", "hd", "status"]
    }
    fn cells(&self) -> Vec<String> {
        vec![
            self.module_id.clone(),
            self.i.to_string(),
            join_usizes(&self.dims),
            cell(&self.hd),
            self.status.clone(),
        ]
    }
}

impl RowLike for LocalCohRow {
    fn headers() -> Vec<&'static str> {
        vec!["module-id", "i", "dims", "td", "status"]
    }
    fn cells(&self) -> Vec<String> {
        vec![
            self.module_id.clone(),
            self.i.to_string(),
            join_usizes(&self.dims),
            cell(&self.td),
            self.status.clone(),
        ]
    }
}

impl RowLike for DepthRow {
    fn headers() -> Vec<&'static str> {
        vec!["module-id", "depth_lc", "depth_classical", "depth_derivative", "agree", "status"]
    }
    fn cells(&self) -> Vec<String> {
        vec![
            self.module_id.clone(),
            cell(&self.depth_lc),
            cell(&self.depth_classical),
            cell(&self.depth_derivative),
            self.agree.to_string(),
            self.status.clone(),
        ]
    }
}

impl RowLike for ValidateRow {
    fn headers() -> Vec<&'static str> {
        vec!["module-id", "status"]
    }
    fn cells(&self) -> Vec<String> {
        vec![self.module_id.clone(), self.status.clone()]
    }
}

impl RowLike for ConjectureRow {
    fn headers() -> Vec<&'static str> {
        vec![
            "module-id", "applicable", "reg", "conjecture_rhs", "gap", "torsion_check",
            "shift_check", "certified", "window_used", "error",
        ]
    }
    fn cells(&self) -> Vec<String> {
        let null_blank = |v: &Value| if v.is_null() { String::new() } else { cell(v) };
        vec![
            self.module_id.clone(),
            self.applicable.to_string(),
            null_blank(&self.reg),
            null_blank(&self.conjecture_rhs),
            self.gap.map(|g| g.to_string()).unwrap_or_default(),
            self.torsion_check.clone(),
            self.shift_check.clone(),
            self.certified.to_string(),
            self.window_used.to_string(),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Render rows in the requested format; always ends with a newline unless
/// there is nothing at all to print.
pub fn emit<R: RowLike + Serialize>(rows: &[R], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut out = R::headers().join(",");
            out.push('\n');
            for row in rows {
                let line: Vec<String> = row.cells().iter().map(|c| csv_escape(c)).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
            out
        }
        Format::Table => {
            let headers = R::headers();
            let all: Vec<Vec<String>> = rows.iter().map(|r| r.cells()).collect();
            let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
            for cells in &all {
                for (i, c) in cells.iter().enumerate() {
                    widths[i] = widths[i].max(c.len());
                }
            }
            let line = |cells: &[String]| -> String {
                cells
                    .iter()
                    .enumerate()
                    .map(|(i, c)| format!("{:width$}", c, width = widths[i]))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let mut out = line(&headers.iter().map(|h| h.to_string()).collect::<Vec<_>>());
            out.push('\n');
            out.push_str(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
            out.push('\n');
            for cells in &all {
                out.push_str(&line(cells));
                out.push('\n');
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<DepthRow> {
        vec![
            DepthRow {
                module_id: "a".into(),
                depth_lc: extent_value(Extent::PosInf),
                depth_classical: extent_value(Extent::PosInf),
                depth_derivative: extent_value(Extent::PosInf),
                agree: true,
                status: "certified".into(),
            },
            DepthRow {
                module_id: "b,with comma".into(),
                depth_lc: extent_value(Extent::Finite(1)),
                depth_classical: extent_value(Extent::Finite(1)),
                depth_derivative: extent_value(Extent::Finite(1)),
                agree: true,
                status: "certified".into(),
            },
        ]
    }

    #[test]
    fn csv_has_header_and_escapes_commas() {
        let out = emit(&sample(), Format::Csv);
        let mut lines = out.lines();
        assert_eq!(
            lines.next().unwrap(),
            "module-id,depth_lc,depth_classical,depth_derivative,agree,status"
        );
        assert_eq!(lines.next().unwrap(), "a,inf,inf,inf,true,certified");
        assert_eq!(lines.next().unwrap(), "\"b,with comma\",1,1,1,true,certified");
    }

    #[test]
    fn json_preserves_schema_order_and_infinity_tokens() {
        let out = emit(&sample(), Format::Json);
        let idx_id = out.find("module-id").unwrap();
        let idx_lc = out.find("depth_lc").unwrap();
        let idx_status = out.find("status").unwrap();
        assert!(idx_id < idx_lc && idx_lc < idx_status);
        assert!(out.contains("\"inf\""));
        // Round-trips as JSON.
        let v: Vec<serde_json::Value> = serde_json::from_str(&out).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[1]["depth_lc"], 1);
    }

    #[test]
    fn table_is_aligned() {
        let out = emit(&sample(), Format::Table);
        let lines: Vec<&str> = out.lines().collect();
        assert!(lines[0].starts_with("module-id"));
        assert!(lines[1].starts_with("---"));
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn group_names() {
        assert_eq!(group_name(&FiniteGroup::trivial()), "1");
        assert_eq!(group_name(&FiniteGroup::cyclic(2)), "C2");
        assert_eq!(group_name(&FiniteGroup::cyclic(3)), "C3");
    }
}
