//! CSV output. Every table starts with a `#` comment naming the closed form
//! behind each predicted column, followed by a header row.

use std::io::Write;

use crate::dfs_control::EffectiveSpectrum;
use crate::placement::TableRow;
use crate::protocols::ProtocolReport;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsvTable {
    /// `(column, formula)` pairs for the provenance line.
    pub provenance: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), ..Self::default() }
    }

    pub fn formula(mut self, column: &str, formula: &str) -> Self {
        self.provenance.push((column.into(), formula.into()));
        self
    }

    pub fn push<S: ToString>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(|v| v.to_string()).collect());
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let tags: Vec<String> = if self.provenance.is_empty() {
            vec!["none".into()]
        } else {
            self.provenance.iter().map(|(c, f)| format!("{c}={f}")).collect()
        };
        writeln!(out, "# provenance: {}", tags.join("; "))?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

/// Levels with representative configurations, plus `Δ`, `L` and the smallest gap.
pub fn spectrum_table(spectrum: &EffectiveSpectrum) -> CsvTable {
    let mut t = CsvTable::new(["index", "level", "config"])
        .formula("level", "f_perp.s")
        .formula("delta", "max-min")
        .formula("gap", "min consecutive difference");
    for (i, level, config) in spectrum.csv_rows() {
        let config = config
            .map(|c| c.spins().iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "))
            .unwrap_or_default();
        t.push([i.to_string(), level.to_string(), config]);
    }
    t
}

/// `(Δ, L, δ)` of a spectrum as a one-row table.
pub fn spectrum_summary(spectrum: &EffectiveSpectrum) -> CsvTable {
    let mut t = CsvTable::new(["delta", "levels", "gap", "linear"])
        .formula("delta", "max-min")
        .formula("gap", "min consecutive difference");
    let delta = if spectrum.len() > 1 { spectrum.delta() } else { 0.0 };
    t.push([delta.to_string(), spectrum.len().to_string(), spectrum.min_gap().to_string(), spectrum.is_linear().to_string()]);
    t
}

pub fn table1_csv(rows: &[TableRow]) -> CsvTable {
    let mut t = CsvTable::new(["family", "qubits", "delta", "levels", "delta_dfs", "levels_dfs", "gap_dfs"])
        .formula("delta", "two_point: N; linear: N^2/(4(N-1)); exponential: 2(1-2^(-N/2))")
        .formula("levels", "two_point: N/2; linear: N^2/4; exponential: 2^(N/2)")
        .formula("delta_dfs", "exact enumeration, spin 1/2 units");
    for r in rows {
        t.push([
            r.family.name().to_string(),
            r.qubits.to_string(),
            r.delta.to_string(),
            r.levels.to_string(),
            r.delta_dfs.to_string(),
            r.levels_dfs.to_string(),
            r.gap_dfs.to_string(),
        ]);
    }
    t
}

/// Predictions (and simulated values, when present) as `quantity,value,stderr,formula` rows.
pub fn report_table(report: &ProtocolReport) -> CsvTable {
    let mut t = CsvTable::new(["quantity", "value", "stderr", "ci_low", "ci_high", "formula"]);
    for p in &report.predictions {
        t.provenance.push((p.name.clone(), p.formula.clone()));
        t.push([p.name.clone(), p.value.to_string(), String::new(), String::new(), String::new(), p.formula.clone()]);
    }
    if let Some(s) = &report.simulated {
        t.push([
            "simulated_mse".to_string(),
            s.mse.to_string(),
            s.mse_stderr.to_string(),
            s.mse_ci95.0.to_string(),
            s.mse_ci95.1.to_string(),
            format!("monte carlo, {} trials, seed {}", s.trials, s.seed),
        ]);
        t.push([
            "simulated_holevo".to_string(),
            s.holevo.value.to_string(),
            s.holevo.stderr.to_string(),
            String::new(),
            String::new(),
            "|mean exp(i*phase error)|^-2 - 1".to_string(),
        ]);
    }
    t
}

pub fn schedule_table(report: &ProtocolReport) -> CsvTable {
    let mut t = CsvTable::new(["k", "t_k", "prior_width", "width"])
        .formula("t_k", "2*pi*(L-1)/(Delta*W_{k-1})")
        .formula("width", "W0*(2L)^-k");
    for r in &report.schedule {
        t.push([r.k.to_string(), r.time.to_string(), r.prior_width.to_string(), r.width.to_string()]);
    }
    t
}
