//! Reports: JSON for machines, one line per item for people.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize)]
pub struct Item {
    pub section: String,
    pub id: String,
    pub pass: bool,
    pub summary: String,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub pass: bool,
    pub items: Vec<Item>,
}

impl Report {
    pub fn new(command: &str, items: Vec<Item>) -> Report {
        Report { command: command.into(), pass: items.iter().all(|i| i.pass), items }
    }

    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn text(&self) -> String {
        let mut out = format!("{}: {} ({} items)\n", self.command, if self.pass { "PASS" } else { "FAIL" }, self.items.len());
        for i in &self.items {
            out.push_str(&format!("  [{}] {}/{}: {}\n", if i.pass { "PASS" } else { "FAIL" }, i.section, i.id, i.summary));
        }
        out
    }
}
