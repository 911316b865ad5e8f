//! Rendering of command results as a table, JSON or CSV.

use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// Result of one invocation before formatting.
#[derive(Debug, Clone)]
pub struct Output {
    pub command: String,
    pub seed: u64,
    pub result: Value,
    pub lines: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Failing reports; non-empty means exit code 1.
    pub failures: Vec<Value>,
}

impl Output {
    pub fn new(command: &str, seed: u64, result: Value) -> Self {
        Output {
            command: command.to_string(),
            seed,
            result,
            lines: vec![],
            header: vec![],
            rows: vec![],
            failures: vec![],
        }
    }

    pub fn line(&mut self, s: impl Into<String>) -> &mut Self {
        self.lines.push(s.into());
        self
    }

    pub fn csv(&mut self, header: &[&str], rows: Vec<Vec<String>>) -> &mut Self {
        self.header = header.iter().map(|s| s.to_string()).collect();
        self.rows = rows;
        self
    }

    pub fn fail(&mut self, witness: Value) -> &mut Self {
        self.failures.push(witness);
        self
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let v = json!({
                    "command": self.command,
                    "seed": self.seed,
                    "passed": self.passed(),
                    "result": self.result,
                });
                serde_json::to_string_pretty(&v).expect("json") + "\n"
            }
            Format::Csv => {
                let mut out = String::new();
                let header = if self.header.is_empty() {
                    vec!["key".to_string(), "value".to_string()]
                } else {
                    self.header.clone()
                };
                out += &csv_row(std::iter::once("seed".to_string()).chain(header));
                let rows = if self.rows.is_empty() { flatten(&self.result) } else { self.rows.clone() };
                for r in rows {
                    out += &csv_row(std::iter::once(self.seed.to_string()).chain(r));
                }
                out
            }
            Format::Table => {
                let mut out = format!("{} (seed {})\n", self.command, self.seed);
                for l in &self.lines {
                    out += l;
                    out.push('\n');
                }
                out
            }
        }
    }
}

fn csv_row(fields: impl Iterator<Item = String>) -> String {
    let f: Vec<String> = fields
        .map(|s| {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s
            }
        })
        .collect();
    f.join(",") + "\n"
}

/// `path,value` rows for every scalar leaf.
fn flatten(v: &Value) -> Vec<Vec<String>> {
    fn go(prefix: String, v: &Value, out: &mut Vec<Vec<String>>) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    go(p, x, out);
                }
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    go(format!("{prefix}[{i}]"), x, out);
                }
            }
            Value::String(s) => out.push(vec![prefix, s.clone()]),
            other => out.push(vec![prefix, other.to_string()]),
        }
    }
    let mut out = vec![];
    go(String::new(), v, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_and_prefixes_seed() {
        let mut o = Output::new("x", 7, json!({}));
        o.csv(&["a", "b"], vec![vec!["1".into(), "p, q".into()]]);
        assert_eq!(o.render(Format::Csv), "seed,a,b\n7,1,\"p, q\"\n");
    }

    #[test]
    fn csv_falls_back_to_flattened_json() {
        let o = Output::new("x", 1, json!({"lim": {"kind": "zero"}, "s": ["1", "2"]}));
        assert_eq!(o.render(Format::Csv), "seed,key,value\n1,lim.kind,zero\n1,s[0],1\n1,s[1],2\n");
    }

    #[test]
    fn json_envelope_has_seed_and_status() {
        let mut o = Output::new("x", 3, json!(1));
        o.fail(json!("w"));
        let v: Value = serde_json::from_str(&o.render(Format::Json)).unwrap();
        assert_eq!(v["seed"], 3);
        assert_eq!(v["passed"], false);
    }
}
