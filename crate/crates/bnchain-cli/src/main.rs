//! Batch verification front end: build, verify, account, and export.
//!
//! Exit codes: 0 all checks pass, 1 check failure, 2 usage error, 3 I/O
//! error.

use bnchain::constructions::{verify_construction_tables, ChainLedger};
use bnchain::coverage::{
    asymptotic_ratio, derivation_path, enumerate_region, in_region, region_csv,
};
use bnchain::determinant::check_canonical_chain;
use bnchain::dimension::account_dimension;
use bnchain::lstab::{
    is_l_semistable_bruteforce, mu_reference_chi0, twist_equivalence, two_unstable_criterion,
    LChain,
};
use bnchain::numerics::{rho, strict_semistable_excluded, PairGK};
use bnchain::vanishing::{check_feasible, check_standard};
use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bnchain",
    version,
    about = "Verification of rank-two limit linear series chains"
)]
struct Cli {
    /// Emit machine-readable JSON reports
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive and verify the chain for a (g, k) pair, or verify a ledger file
    Verify {
        /// genus (omit when --ledger is given)
        g: Option<i64>,
        /// section count
        k: Option<i64>,
        /// verify a serialized ledger as-is instead of deriving one
        #[arg(long)]
        ledger: Option<PathBuf>,
        /// write ledger.json, table.csv and dimension.json here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the covered region up to k_max and export tables
    Region {
        k_max: i64,
        /// directory for the CSV and per-pair path JSON
        #[arg(long)]
        out: Option<PathBuf>,
        /// also write the region table as CSV to stdout
        #[arg(long)]
        csv: bool,
    },
    /// Check semistability of a chain description (JSON file)
    Lstab {
        file: PathBuf,
        /// brute-force component cap
        #[arg(long, default_value_t = 12)]
        cap: usize,
        /// run even when the chain exceeds the cap
        #[arg(long)]
        force: bool,
        /// randomized twist-invariance batch size
        #[arg(long, default_value_t = 0)]
        batch: usize,
        /// RNG seed for the batch
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Serialize)]
struct CheckLine {
    check: &'static str,
    pass: bool,
    detail: String,
}

#[derive(Serialize)]
struct RunReport {
    command: String,
    checks: Vec<CheckLine>,
    artifacts: Vec<String>,
}

impl RunReport {
    fn new(command: String) -> Self {
        RunReport {
            command,
            checks: Vec::new(),
            artifacts: Vec::new(),
        }
    }
    fn push(&mut self, check: &'static str, pass: bool, detail: String) {
        self.checks.push(CheckLine {
            check,
            pass,
            detail,
        });
    }
    fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
    fn print(&self, json: bool) {
        if json {
            println!("{}", serde_json::to_string_pretty(self).unwrap());
        } else {
            for c in &self.checks {
                println!(
                    "[{}] {:<22} {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.check,
                    c.detail
                );
            }
            for a in &self.artifacts {
                println!("wrote {a}");
            }
        }
    }
}

fn verify_ledger_into(report: &mut RunReport, ledger: &ChainLedger, derived: bool) {
    let g = ledger.g() as i64;
    let k = ledger.k() as i64;
    let standard = if k % 2 == 1 {
        let rep = check_standard(&ledger.table);
        report.push(
            "standardness",
            rep.pass(),
            format!("{} violations", rep.violations.len()),
        );
        rep.pass()
    } else {
        let rep = check_feasible(&ledger.table);
        report.push(
            "feasibility",
            rep.pass(),
            format!(
                "{} violations (even k: per-column criteria only)",
                rep.violations.len()
            ),
        );
        rep.pass()
    };
    let _ = standard;
    match check_canonical_chain(ledger) {
        Ok(rep) => report.push(
            "canonical-determinant",
            rep.pass(),
            if rep.pass() {
                format!("all {} components", ledger.g())
            } else {
                format!("fails at {:?}", rep.failures())
            },
        ),
        Err(e) => report.push("canonical-determinant", false, e.to_string()),
    }
    if derived {
        let rep = verify_construction_tables(ledger);
        report.push(
            "golden-sequences",
            rep.pass(),
            format!(
                "{} columns matched, {} formulas void",
                rep.entries.len(),
                rep.skipped.len()
            ),
        );
        match account_dimension(ledger) {
            Ok(rep) => {
                let expected = rho(PairGK::new(g, k).unwrap());
                report.push(
                    "dimension-total",
                    rep.total == expected,
                    format!("total {} vs rho({g},{k}) = {expected}", rep.total),
                );
            }
            Err(e) => report.push("dimension-total", false, e.to_string()),
        }
    }
    let sse = strict_semistable_excluded(PairGK::new(g, k).unwrap());
    report.push(
        "strictly-semistable-excluded",
        sse.excluded,
        format!("gap {}, classical rho {}", sse.gap, sse.classical),
    );
}

fn write_artifacts(
    report: &mut RunReport,
    ledger: &ChainLedger,
    dir: &PathBuf,
) -> Result<(), String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("io: {e}"))?;
    let lp = dir.join("ledger.json");
    std::fs::write(&lp, serde_json::to_string_pretty(ledger).unwrap())
        .map_err(|e| format!("io: {e}"))?;
    report.artifacts.push(lp.display().to_string());
    let cp = dir.join("table.csv");
    std::fs::write(&cp, ledger.table.to_csv()).map_err(|e| format!("io: {e}"))?;
    report.artifacts.push(cp.display().to_string());
    if let Ok(rep) = account_dimension(ledger) {
        let dp = dir.join("dimension.json");
        std::fs::write(&dp, serde_json::to_string_pretty(&rep).unwrap())
            .map_err(|e| format!("io: {e}"))?;
        report.artifacts.push(dp.display().to_string());
    }
    Ok(())
}

fn cmd_verify(
    report: &mut RunReport,
    g: Option<i64>,
    k: Option<i64>,
    ledger: Option<PathBuf>,
    out: Option<PathBuf>,
) -> Result<(), String> {
    if let Some(path) = ledger {
        let s = std::fs::read_to_string(&path).map_err(|e| format!("io: {e}"))?;
        let ledger: ChainLedger = serde_json::from_str(&s).map_err(|e| format!("parse: {e}"))?;
        ledger
            .validate()
            .map_err(|e| format!("ledger invalid: {e}"))?;
        report.push(
            "ledger",
            true,
            format!("loaded ({}, {})", ledger.g(), ledger.k()),
        );
        verify_ledger_into(report, &ledger, false);
        if let Some(dir) = out {
            write_artifacts(report, &ledger, &dir)?;
        }
        return Ok(());
    }
    let (g, k) = match (g, k) {
        (Some(g), Some(k)) => (g, k),
        _ => return Err("usage: verify <g> <k> or verify --ledger FILE".into()),
    };
    let p = PairGK::new(g, k).map_err(|e| e.to_string())?;
    let info = in_region(p);
    if !info.in_region && info.tags.is_empty() {
        report.push(
            "region",
            false,
            format!("({g},{k}) not in the covered region"),
        );
        return Ok(());
    }
    report.push(
        "region",
        true,
        if info.in_region {
            format!("tags {:?}", info.tags)
        } else {
            format!(
                "outside the headline bounds but covered by {:?} (constant mismatch flagged)",
                info.tags
            )
        },
    );
    let path = derivation_path(p).map_err(|e| e.to_string())?;
    report.push(
        "derivation",
        true,
        format!("{} moves from (6,5)", path.moves.len()),
    );
    let ledger = path.replay().map_err(|e| e.to_string())?;
    verify_ledger_into(report, &ledger, true);
    if let Some(dir) = out {
        write_artifacts(report, &ledger, &dir)?;
    }
    Ok(())
}

fn cmd_region(
    report: &mut RunReport,
    k_max: i64,
    out: Option<PathBuf>,
    csv: bool,
) -> Result<(), String> {
    let pairs = enumerate_region(k_max).map_err(|e| e.to_string())?;
    report.push("enumerate", true, format!("{} pairs", pairs.len()));
    let table = region_csv(&pairs);
    if csv {
        print!("{table}");
    }
    let mut paths = Vec::new();
    for p in &pairs {
        let path = derivation_path(*p).map_err(|e| e.to_string())?;
        paths.push(path);
    }
    report.push("paths", true, format!("{} derivations found", paths.len()));
    let ratios: Vec<String> = (2..=k_max.max(4) / 2)
        .map(|k1| {
            let r = asymptotic_ratio(k1).unwrap();
            format!("{k1}: {}/{}", r.num, r.den)
        })
        .collect();
    if let Some(dir) = out {
        std::fs::create_dir_all(&dir).map_err(|e| format!("io: {e}"))?;
        let csv_path = dir.join("region.csv");
        std::fs::write(&csv_path, &table).map_err(|e| format!("io: {e}"))?;
        report.artifacts.push(csv_path.display().to_string());
        let json_path = dir.join("paths.json");
        std::fs::write(&json_path, serde_json::to_string_pretty(&paths).unwrap())
            .map_err(|e| format!("io: {e}"))?;
        report.artifacts.push(json_path.display().to_string());
        let ratio_path = dir.join("asymptotic.txt");
        std::fs::write(&ratio_path, ratios.join("\n")).map_err(|e| format!("io: {e}"))?;
        report.artifacts.push(ratio_path.display().to_string());
    }
    Ok(())
}

fn cmd_lstab(
    report: &mut RunReport,
    file: PathBuf,
    cap: usize,
    force: bool,
    batch: usize,
    seed: u64,
) -> Result<(), String> {
    let s = std::fs::read_to_string(&file).map_err(|e| format!("io: {e}"))?;
    let chain = LChain::from_json(&s).map_err(|e| format!("parse: {e}"))?;
    let cap = if force { chain.n().max(cap) } else { cap };
    let verdict = is_l_semistable_bruteforce(&chain, cap).map_err(|e| e.to_string())?;
    report.push(
        "l-semistable",
        true,
        format!(
            "{}{}",
            verdict.semistable,
            if verdict.out_of_situation.is_empty() {
                String::new()
            } else {
                format!(
                    " (components {:?} outside the standing numerics)",
                    verdict.out_of_situation
                )
            }
        ),
    );
    let unstable = chain
        .comps
        .iter()
        .filter(|c| c.class == bnchain::lstab::LClass::Unstable)
        .count();
    if unstable <= 2 {
        let fast = two_unstable_criterion(&chain).map_err(|e| e.to_string())?;
        report.push(
            "criterion-agreement",
            fast == verdict.semistable,
            format!("fast path {fast}, oracle {}", verdict.semistable),
        );
    }
    if chain.chi_total(0) == 0 {
        let mu = mu_reference_chi0(&chain, 0).map_err(|e| e.to_string())?;
        report.push("mu-reference", true, format!("mu-semistable: {mu}"));
    }
    if batch > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut agree = 0usize;
        for _ in 0..batch {
            let node = rng.gen_range(0..chain.n().saturating_sub(1).max(1));
            let amount = rng.gen_range(-3i64..=3);
            if chain.n() < 2 {
                break;
            }
            let twisted = twist_equivalence(&chain, node, amount).map_err(|e| e.to_string())?;
            let v = is_l_semistable_bruteforce(&twisted, cap).map_err(|e| e.to_string())?;
            if v.semistable == verdict.semistable {
                agree += 1;
            }
        }
        report.push(
            "twist-invariance",
            agree == batch,
            format!("{agree}/{batch} twists agree (seed {seed})"),
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    // die quietly when the read end of a pipe goes away
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let mut report;
    let result = match cli.command {
        Command::Verify { g, k, ledger, out } => {
            report = RunReport::new(format!("verify {g:?} {k:?}"));
            cmd_verify(&mut report, g, k, ledger, out)
        }
        Command::Region { k_max, out, csv } => {
            report = RunReport::new(format!("region {k_max}"));
            cmd_region(&mut report, k_max, out, csv)
        }
        Command::Lstab {
            file,
            cap,
            force,
            batch,
            seed,
        } => {
            report = RunReport::new(format!("lstab {}", file.display()));
            cmd_lstab(&mut report, file, cap, force, batch, seed)
        }
    };
    match result {
        Err(msg) => {
            eprintln!("error: {msg}");
            if msg.starts_with("io:") {
                ExitCode::from(3)
            } else if msg.starts_with("usage") || msg.starts_with("invalid parameter") {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
        Ok(()) => {
            report.print(cli.json);
            if report.pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
