use std::fmt::Write as _;
use std::process::ExitCode;

use serde::Serialize;

use crate::RunConfig;

pub const SCHEMA: u32 = 1;

/// One verified claim. `pass` is null when the claim's hypotheses do not hold.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub pass: Option<bool>,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, anchor: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), anchor: anchor.into(), pass: Some(pass), detail: detail.into() }
    }

    pub fn skip(name: &str, anchor: &str, why: impl AsRef<str>) -> Self {
        Check { name: name.into(), anchor: anchor.into(), pass: None, detail: format!("not applicable: {}", why.as_ref()) }
    }

    fn status(&self) -> &'static str {
        match self.pass {
            Some(true) if self.detail.starts_with("WARN") => "WARN",
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "SKIP",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Invariants {
    pub e: usize,
    pub s: usize,
    pub t: usize,
    pub v: usize,
    pub hilbert: Vec<usize>,
    pub socle_polynomial: String,
    pub socle_dims: Vec<usize>,
    pub length: usize,
    pub min_generators: usize,
    pub compressed: bool,
    pub level: bool,
    pub case: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BettiRecord {
    pub i: usize,
    pub j: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BettiQ {
    pub totals: Vec<usize>,
    pub records: Vec<BettiRecord>,
    #[serde(skip)]
    pub table: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct NuRanks {
    pub l: usize,
    pub ranks: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiKernel {
    pub dims: Vec<usize>,
    pub expected: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub config: RunConfig,
    pub invariants: Invariants,
    #[serde(rename = "betti_Q")]
    pub betti_q: Option<BettiQ>,
    pub nu_ranks: Option<Vec<NuRanks>>,
    pub phi_kernel: Option<PhiKernel>,
    pub warnings: Vec<String>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| c.pass == Some(false)).count()
    }

    pub fn exit_code(&self) -> ExitCode {
        if self.failed() > 0 {
            ExitCode::from(1)
        } else {
            ExitCode::SUCCESS
        }
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let iv = &self.invariants;
        let _ = writeln!(out, "ring        e = {}, s = {}, t = {}, v = {}", iv.e, iv.s, iv.t, iv.v);
        let _ = writeln!(out, "hilbert     {:?}  (length {})", iv.hilbert, iv.length);
        let _ = writeln!(out, "socle       {}", iv.socle_polynomial);
        let _ = writeln!(out, "compressed  {}   level {}", iv.compressed, iv.level);
        let _ = writeln!(out, "case        {}", iv.case);
        if let Some(b) = &self.betti_q {
            let _ = writeln!(out, "\nTor^Q(R, k):\n{}", b.table.trim_end());
        }
        if let Some(nu) = &self.nu_ranks {
            let _ = writeln!(out, "\nnu ranks (rows l, columns i):");
            for n in nu {
                let _ = writeln!(out, "  l = {:<2} {:?}", n.l, n.ranks);
            }
        }
        if let Some(k) = &self.phi_kernel {
            let _ = writeln!(out, "\nphi kernel  {:?}  (expected {:?})", k.dims, k.expected);
        }
        for w in &self.warnings {
            let _ = writeln!(out, "\nwarning: {w}");
        }
        let _ = writeln!(out);
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let _ = writeln!(out, "{:<4}  {:<width$}  {}", c.status(), c.name, c.anchor);
            if c.pass != Some(true) || c.status() == "WARN" {
                let _ = writeln!(out, "      {:<width$}  {}", "", c.detail);
            }
        }
        let ran = self.checks.iter().filter(|c| c.pass.is_some()).count();
        let _ = writeln!(out, "\n{} checks run, {} failed, {} not applicable", ran, self.failed(), self.checks.len() - ran);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_labels() {
        assert_eq!(Check::new("a", "x", true, "ok").status(), "PASS");
        assert_eq!(Check::new("a", "x", true, "WARN: differs").status(), "WARN");
        assert_eq!(Check::new("a", "x", false, "").status(), "FAIL");
        let s = Check::skip("a", "x", "why");
        assert_eq!(s.status(), "SKIP");
        assert_eq!(s.detail, "not applicable: why");
    }
}
