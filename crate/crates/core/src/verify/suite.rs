use std::str::FromStr;
use std::time::Instant;

use super::checks::*;
use super::report::VerificationReport;
use crate::arith::is_prime;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Congruence,
    Lemma,
    Power,
    Generator,
    Periods,
    RowPeriod,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = [
        "all",
        "congruence",
        "lemma",
        "power",
        "generator",
        "periods",
        "row-period",
    ];
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "congruence" => Suite::Congruence,
            "lemma" => Suite::Lemma,
            "power" => Suite::Power,
            "generator" => Suite::Generator,
            "periods" => Suite::Periods,
            "row-period" => Suite::RowPeriod,
            other => return Err(Error::UnknownSuite(other.to_string())),
        })
    }
}

/// Sweep bounds for every suite. The defaults are the desk-scale grids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub prime_power_max: u64,
    pub congruence_n_max: u64,
    pub vanishing_max: u64,
    pub vanishing_n_max: u64,

    pub lemma_primes: Vec<u64>,
    pub lemma_i_max: u64,
    pub lemma_j_max: u64,
    pub lemma_n_max: u64,

    pub power_primes: Vec<u64>,
    pub power_i_max: u64,
    pub power_j_max: u64,
    pub power_n_max: u64,
    pub power_t_max: u64,

    pub permutation_primes: Vec<u64>,
    pub block_primes: Vec<u64>,
    pub block_j_max: u64,
    pub block_n_max: u64,

    pub period_k_max: u64,
    pub period_n_max: u64,

    pub row_k_max: u64,
    pub row_n_window: Option<u64>,

    pub budget: u64,
}

fn odd_primes_up_to(limit: u64) -> Vec<u64> {
    (3..=limit).filter(|&q| is_prime(q)).collect()
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            prime_power_max: 4096,
            congruence_n_max: 100,
            vanishing_max: 2000,
            vanishing_n_max: 60,

            lemma_primes: vec![3, 5, 7],
            lemma_i_max: 4,
            lemma_j_max: 3,
            lemma_n_max: 60,

            power_primes: vec![3, 5, 7, 11],
            power_i_max: 2,
            power_j_max: 3,
            power_n_max: 500,
            power_t_max: 50,

            permutation_primes: odd_primes_up_to(97),
            block_primes: odd_primes_up_to(13),
            block_j_max: 3,
            block_n_max: 300,

            period_k_max: 200,
            period_n_max: 50,

            row_k_max: 60,
            row_n_window: None,

            budget: DEFAULT_BUDGET,
        }
    }
}

impl SuiteConfig {
    /// Restricts the per-prime suites to a single odd prime.
    pub fn with_prime(mut self, q: u64) -> Self {
        self.lemma_primes = vec![q];
        self.power_primes = vec![q];
        self.permutation_primes = vec![q];
        self.block_primes = vec![q];
        self
    }

    /// Applies one `n` bound to every suite.
    pub fn with_n_max(mut self, n: u64) -> Self {
        self.congruence_n_max = n;
        self.vanishing_n_max = n;
        self.lemma_n_max = n;
        self.power_n_max = n;
        self.block_n_max = n;
        self.period_n_max = n;
        self.row_n_window = Some(n);
        self
    }

    /// Applies one `k` bound to both period suites.
    pub fn with_k_max(mut self, k: u64) -> Self {
        self.period_k_max = k;
        self.row_k_max = k;
        self
    }
}

/// Runs the selected sweeps and merges their reports in a fixed order.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = VerificationReport::default();
    let wants = |s: Suite| suite == Suite::All || suite == s;

    if wants(Suite::Congruence) {
        report.merge("congruence", check_congruence_theorems(cfg.prime_power_max, cfg.congruence_n_max));
        report.merge("vanishing", check_block_vanishing(cfg.vanishing_max, cfg.vanishing_n_max));
    }
    if wants(Suite::Lemma) {
        for &q in &cfg.lemma_primes {
            let r = check_lemma_binomial(q, cfg.lemma_i_max, cfg.lemma_j_max, cfg.lemma_n_max)?;
            report.merge(&format!("lemma.q{q}"), r);
        }
    }
    if wants(Suite::Power) {
        for &q in &cfg.power_primes {
            let r = check_power_congruence_grid(
                q,
                cfg.power_i_max,
                cfg.power_j_max,
                cfg.power_n_max,
                cfg.power_t_max,
            )?;
            report.merge(&format!("power.q{q}"), r);
        }
    }
    if wants(Suite::Generator) {
        for &q in &cfg.permutation_primes {
            report.merge(&format!("permutation.q{q}"), check_generator_permutation(q)?);
        }
        for &q in &cfg.block_primes {
            report.merge(&format!("block.q{q}"), check_generator_block(q, cfg.block_j_max, cfg.block_n_max)?);
            report.merge(
                &format!("block_exact.q{q}"),
                check_generator_block_exact(q, cfg.block_j_max, cfg.block_n_max)?,
            );
        }
    }
    if wants(Suite::Periods) {
        report.merge("periods", check_period_formulas(cfg.period_k_max, cfg.period_n_max, cfg.budget));
    }
    if wants(Suite::RowPeriod) {
        report.merge("row_period", check_row_periods(cfg.row_k_max, cfg.row_n_window, cfg.budget)?);
    }
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}
