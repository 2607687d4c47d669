//! Table, CSV and JSON output for every report.

use std::fmt::Write as _;

use clap::ValueEnum;
use csv::{Terminator, WriterBuilder};
use ordstat_core::mc::SimResult;
use ordstat_core::regularity::{MinK, PointCheck};
use ordstat_core::{RegularityCertificate, TailReport, TheoremReport, TheoremVerdict, Verdict};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn verdict(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
    }
}

fn theorem_verdict(v: TheoremVerdict) -> &'static str {
    match v {
        TheoremVerdict::Pass => "pass",
        TheoremVerdict::Fail => "fail",
        TheoremVerdict::PreconditionFailed => "precondition_failed",
    }
}

pub trait Render: Serialize {
    fn header(&self) -> Vec<&'static str>;
    fn rows(&self) -> Vec<Vec<String>>;
    fn table(&self) -> String;
    /// Whether every verdict in the report passed.
    fn passed(&self) -> bool;
    /// Explanation printed to stderr when `passed` is false.
    fn failure(&self) -> String {
        "verdict failed".into()
    }
}

pub fn render<R: Render>(report: &R, format: Format) -> String {
    match format {
        Format::Table => report.table(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = WriterBuilder::new()
                .terminator(Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            w.write_record(report.header()).expect("in-memory write");
            for row in report.rows() {
                w.write_record(row).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
        }
    }
}

fn certificate_lines(out: &mut String, c: &RegularityCertificate) {
    let _ = writeln!(out, "inequality      {:?}", c.inequality);
    let _ = writeln!(out, "K               {}", num(c.k));
    let _ = writeln!(
        out,
        "grid            [{:e}, {:e}] x {}/decade, {} points",
        c.grid.t_min, c.grid.t_max, c.grid.points_per_decade, c.points_checked
    );
    let margin = c.margin.map_or("n/a".to_string(), num);
    let _ = writeln!(out, "min margin      {margin}");
    if let Some(w) = c.witness {
        let _ = writeln!(out, "witness         t={} lhs={} rhs={}", num(w.t), num(w.lhs), num(w.rhs));
    }
    let _ = writeln!(out, "verdict         {}", verdict(c.verdict));
    let _ = writeln!(out, "note            {}", c.note);
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub family: String,
    pub scale: f64,
    pub certificate: RegularityCertificate,
    pub points: Vec<PointCheck>,
}

impl Render for ConditionReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["t", "lhs", "rhs", "margin", "verdict"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.points
            .iter()
            .map(|p| vec![num(p.t), num(p.lhs), num(p.rhs), num(p.margin), verdict(p.verdict).into()])
            .collect()
    }

    fn table(&self) -> String {
        let mut out = format!("family          {} (scale {})\n", self.family, num(self.scale));
        certificate_lines(&mut out, &self.certificate);
        out
    }

    fn passed(&self) -> bool {
        self.certificate.passed()
    }

    fn failure(&self) -> String {
        match self.certificate.witness {
            Some(w) => format!("inequality violated at t = {}", w.t),
            None => "inequality violated".into(),
        }
    }
}

impl Render for MinK {
    fn header(&self) -> Vec<&'static str> {
        vec!["K", "monotonicity_assumed", "margin", "verdict"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            num(self.k),
            self.monotonicity_assumed.to_string(),
            self.certificate.margin.map_or(String::new(), num),
            verdict(self.certificate.verdict).into(),
        ]]
    }

    fn table(&self) -> String {
        let mut out = format!("smallest K      {}\n", num(self.k));
        let _ = writeln!(out, "monotone in K   {} (assumed by the search)", self.monotonicity_assumed);
        certificate_lines(&mut out, &self.certificate);
        out
    }

    fn passed(&self) -> bool {
        self.certificate.passed()
    }
}

impl Render for TheoremReport {
    fn header(&self) -> Vec<&'static str> {
        vec![
            "K", "n", "k", "q", "med", "ratio", "lower", "upper", "strict_cdf_at_lower", "cdf_at_upper",
            "sandwich", "convention_free", "verdict",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            num(self.k_param),
            self.n.to_string(),
            self.k.to_string(),
            num(self.q),
            num(self.med),
            num(self.ratio),
            num(self.lower),
            num(self.upper),
            num(self.strict_cdf_at_lower),
            num(self.cdf_at_upper),
            verdict(self.sandwich).into(),
            verdict(self.convention_free).into(),
            theorem_verdict(self.verdict).into(),
        ]]
    }

    fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "K                    {}", num(self.k_param));
        let _ = writeln!(out, "n, k                 {}, {}", self.n, self.k);
        let _ = writeln!(out, "q                    {}", num(self.q));
        let _ = writeln!(out, "median               {}", num(self.med));
        let _ = writeln!(out, "median / q           {}", num(self.ratio));
        let _ = writeln!(out, "window               [{}, {}]", num(self.lower), num(self.upper));
        let _ = writeln!(out, "P(X < lower q)       {}", num(self.strict_cdf_at_lower));
        let _ = writeln!(out, "P(X <= upper q)      {}", num(self.cdf_at_upper));
        let _ = writeln!(out, "sandwich             {}", verdict(self.sandwich));
        let _ = writeln!(out, "convention-free      {}", verdict(self.convention_free));
        let _ = writeln!(out, "verdict              {}", theorem_verdict(self.verdict));
        let _ = writeln!(out, "quantile convention  {}", self.quantile_convention);
        let _ = writeln!(out, "\n{:>9} {:>6} {:<16} {:>24} {:>24} verdict", "component", "count", "family", "scale", "margin");
        for c in &self.certificates {
            let _ = writeln!(
                out,
                "{:>9} {:>6} {:<16} {:>24} {:>24} {}",
                c.component,
                c.multiplicity,
                c.family,
                num(c.scale),
                c.certificate.margin.map_or("n/a".into(), num),
                verdict(c.certificate.verdict)
            );
        }
        out
    }

    fn passed(&self) -> bool {
        self.verdict == TheoremVerdict::Pass
    }

    fn failure(&self) -> String {
        match self.verdict {
            TheoremVerdict::PreconditionFailed => "regularity precondition failed for some component".into(),
            _ => "median outside the quantile window".into(),
        }
    }
}

impl Render for TailReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["t", "side", "threshold", "exact_prob", "bound", "verdict"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    num(r.t),
                    r.side.as_str().into(),
                    num(r.threshold),
                    num(r.exact_prob),
                    num(r.bound),
                    verdict(r.verdict).into(),
                ]
            })
            .collect()
    }

    fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "K             {}", num(self.k_param));
        let _ = writeln!(out, "side          {}", self.side.as_str());
        let _ = writeln!(out, "q             {}", num(self.q));
        let _ = writeln!(out, "precondition  {}", verdict(self.precondition));
        let _ = writeln!(out, "\n{:>24} {:>24} {:>24} {:>24} verdict", "t", "threshold", "exact_prob", "bound");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>24} {:>24} {:>24} {:>24} {}{}",
                num(r.t),
                num(r.threshold),
                num(r.exact_prob),
                num(r.bound),
                verdict(r.verdict),
                if r.vacuous { " (vacuous)" } else { "" }
            );
        }
        out
    }

    fn passed(&self) -> bool {
        self.precondition.is_pass() && self.violations() == 0
    }

    fn failure(&self) -> String {
        if self.violations() > 0 {
            format!("{} tail bound violations", self.violations())
        } else {
            "regularity precondition failed for some component".into()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileReport {
    pub n: usize,
    pub k: usize,
    pub level: f64,
    pub quantile: f64,
    /// `P(k-min <= quantile)`.
    pub cdf: f64,
}

impl Render for QuantileReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["n", "k", "level", "quantile", "cdf"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![self.n.to_string(), self.k.to_string(), num(self.level), num(self.quantile), num(self.cdf)]]
    }

    fn table(&self) -> String {
        format!(
            "n, k       {}, {}\nlevel      {}\nquantile   {}\ncdf        {}\n",
            self.n,
            self.k,
            num(self.level),
            num(self.quantile),
            num(self.cdf)
        )
    }

    fn passed(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub exact_median: f64,
    pub covered: bool,
    pub simulation: SimResult,
}

impl Render for SimulationReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["replicates", "seed", "estimate", "ci_low", "ci_high", "ci_level", "exact_median", "covered"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let s = &self.simulation;
        vec![vec![
            s.replicates.to_string(),
            s.seed.to_string(),
            num(s.estimate),
            num(s.ci_low),
            num(s.ci_high),
            num(s.ci_level),
            num(self.exact_median),
            self.covered.to_string(),
        ]]
    }

    fn table(&self) -> String {
        let s = &self.simulation;
        let mut out = String::new();
        let _ = writeln!(out, "replicates     {} (seed {})", s.replicates, s.seed);
        let _ = writeln!(out, "generator      {}", s.generator);
        let _ = writeln!(out, "estimate       {}", num(s.estimate));
        let _ = writeln!(
            out,
            "{:.4} CI      [{}, {}] (ranks {}, {})",
            s.ci_level,
            num(s.ci_low),
            num(s.ci_high),
            s.ci_ranks.0,
            s.ci_ranks.1
        );
        let _ = writeln!(out, "exact median   {}", num(self.exact_median));
        let _ = writeln!(out, "covered        {}", self.covered);
        let _ = writeln!(out, "elapsed        {:.3?}", s.elapsed);
        out
    }

    fn passed(&self) -> bool {
        self.covered
    }

    fn failure(&self) -> String {
        "confidence interval misses the exact median".into()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub seed: u64,
    pub pbin_vectors: usize,
    pub pbin_max_n: usize,
    pub pbin_max_discrepancy: f64,
    pub pbin_tolerance: f64,
    pub beta_max_n: usize,
    pub beta_max_discrepancy: f64,
    pub beta_tolerance: f64,
    pub verdict: Verdict,
}

impl Render for OracleReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["check", "cases", "max_discrepancy", "tolerance", "verdict"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let row = |name: &str, cases: String, d: f64, tol: f64| {
            vec![name.to_string(), cases, num(d), num(tol), verdict(Verdict::from_pass(d <= tol)).into()]
        };
        vec![
            row("pbin_brute_force", self.pbin_vectors.to_string(), self.pbin_max_discrepancy, self.pbin_tolerance),
            row("iid_uniform_beta", self.beta_max_n.to_string(), self.beta_max_discrepancy, self.beta_tolerance),
        ]
    }

    fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "dynamic program vs enumeration  {} vectors, n <= {}: max {} (tol {})",
            self.pbin_vectors,
            self.pbin_max_n,
            num(self.pbin_max_discrepancy),
            num(self.pbin_tolerance)
        );
        let _ = writeln!(
            out,
            "iid uniform vs binomial sum     n <= {}: max {} (tol {})",
            self.beta_max_n,
            num(self.beta_max_discrepancy),
            num(self.beta_tolerance)
        );
        let _ = writeln!(out, "verdict                         {}", verdict(self.verdict));
        out
    }

    fn passed(&self) -> bool {
        self.verdict.is_pass()
    }

    fn failure(&self) -> String {
        "oracle discrepancy above tolerance".into()
    }
}
