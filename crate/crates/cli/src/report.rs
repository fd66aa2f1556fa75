//! Reports: free-form sections followed by one sorted `CHECK` line per
//! executed check.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Unknown,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        Self { name: name.into(), status, detail: detail.into() }
    }

    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::new(name, Status::Pass, detail)
    }

    /// PASS when `ok`, FAIL otherwise.
    pub fn expect(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Self::new(name, if ok { Status::Pass } else { Status::Fail }, detail)
    }

    pub fn line(&self) -> String {
        let detail = self.detail.replace('\n', " ");
        format!("CHECK {} {} {}", self.name, self.status, detail).trim_end().to_string()
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub title: String,
    pub seed: u64,
    pub body: Vec<String>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>, seed: u64) -> Self {
        Self { title: title.into(), seed, ..Self::default() }
    }

    pub fn say(&mut self, line: impl Into<String>) {
        self.body.push(line.into());
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn worst(&self) -> Status {
        self.checks.iter().map(|c| c.status).max().unwrap_or(Status::Pass)
    }

    /// 1 when any check failed, 0 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.worst() == Status::Fail)
    }

    /// The `CHECK` lines, sorted by check name.
    pub fn check_lines(&self) -> Vec<String> {
        let mut checks: Vec<&Check> = self.checks.iter().collect();
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        checks.iter().map(|c| c.line()).collect()
    }

    pub fn render(&self) -> String {
        let mut out = format!("# eudoxus {}\n# seed {}\n", self.title, self.seed);
        for line in &self.body {
            out.push_str(line);
            out.push('\n');
        }
        if !self.body.is_empty() && !self.checks.is_empty() {
            out.push('\n');
        }
        for line in self.check_lines() {
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_and_exit_code() {
        let mut r = Report::new("t", 7);
        r.check(Check::pass("b", "ok"));
        r.check(Check::new("a", Status::Unknown, "?"));
        assert_eq!(r.check_lines(), vec!["CHECK a UNKNOWN ?", "CHECK b PASS ok"]);
        assert_eq!(r.exit_code(), 0);
        r.check(Check::expect("c", false, "bad"));
        assert_eq!(r.exit_code(), 1);
        assert!(r.render().starts_with("# eudoxus t\n# seed 7\n"));
    }
}
