use std::io::Write;

/// Ordered `key = value` results, printed as an aligned table followed by
/// `prefix.key=value` lines for scripts.
#[derive(Debug, Default)]
pub struct Report {
    prefix: String,
    rows: Vec<(String, String)>,
    /// Set when a check failed; the command exits with the invariant code.
    pub failure: Option<String>,
}

impl Report {
    pub fn new(prefix: &str) -> Self {
        Self { prefix: prefix.to_string(), rows: Vec::new(), failure: None }
    }

    pub fn add(&mut self, key: impl Into<String>, value: impl ToString) {
        self.rows.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.rows.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn rows(&self) -> &[(String, String)] {
        &self.rows
    }

    pub fn emit(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let width = self.rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.rows {
            writeln!(out, "  {k:<width$}  {v}")?;
        }
        writeln!(out)?;
        for (k, v) in &self.rows {
            writeln!(out, "{}.{k}={v}", self.prefix)?;
        }
        Ok(())
    }
}
