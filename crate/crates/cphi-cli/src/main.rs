//! Batch front end: the `search`, `expand`, `verify`, and `basis` commands.
//!
//! Exit status contract: 0 = all expectations met, 1 = mathematical
//! surprise (unexpected survivor or failed verification), 2 = usage or
//! I/O error.

mod cache;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use cphi_core::bases::{basis_element, basis_index_set, order_at_zero, reduced_profile};
use cphi_core::eta::sturm_bound;
use cphi_core::frob::{
    check_congruence_in, h_ell_mod, kiming_olsson_beta, SearchContext, SUPPORTED_M,
};
use cphi_core::search::{
    assemble_report, enumerate_eps, eps_count, lowpoint_profile_check, outcomes_for,
    sturm_verify_survivor, SearchData, SearchReport,
};

#[derive(Parser)]
#[command(
    name = "cphi",
    version,
    about = "Exact verifier for Ramanujan-type congruences of m-colored Frobenius partition functions"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    /// cphi_m(l n + beta) = 0 (mod l) for n <= nmax, beta = m/24 mod l
    Congruence,
    /// filtrations of theta^i h_l and the low point at step (l+3)/2
    #[value(name = "theta-cycle")]
    ThetaCycle,
    /// coefficient-by-coefficient check of the low-point identity up to the Sturm bound
    Sturm,
    /// first L slots of 576 theta^((l+3)/2) h_l against b (x) eps_l
    Lowpoint,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Shift {
    /// plain basis indices r = 1, 2, ...
    None,
    /// the window F_(r_inf + i) / q^(r_inf) for the prime l with k = (l^2-1)/2 + 4
    #[value(name = "r-inf")]
    RInf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exhaustive epsilon-vector search for congruence-carrying primes
    Search {
        #[arg(long)]
        m: u64,
        /// worker threads for the pattern stream (deterministic merge)
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Print cphi_m(0..=nmax) and refresh the coefficient cache
    Expand {
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 32)]
        nmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Run one verification suite for a pair (m, l)
    Verify {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long, value_enum)]
        suite: Suite,
        /// congruence suite: largest n tested (default 20)
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Print a cusp-form basis: index set, cusp orders, expansions
    Basis {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        k: i64,
        #[arg(long, default_value_t = 12)]
        prec: usize,
        #[arg(long, value_enum, default_value_t = Shift::None)]
        shift: Shift,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

enum AppError {
    Usage(String),
    Io(String),
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e.to_string())
    }
}

impl From<cphi_core::Error> for AppError {
    fn from(e: cphi_core::Error) -> Self {
        use cphi_core::Error as E;
        match e {
            E::UnsupportedLevel { .. }
            | E::BadPair { .. }
            | E::InadmissibleWeight { .. }
            | E::IndexOutOfRange { .. }
            | E::PrecisionWindow { .. }
            | E::PrecisionUnderflow => AppError::Usage(e.to_string()),
            other => AppError::Io(other.to_string()),
        }
    }
}

/// What a command produced: human text, the canonical report, and whether
/// the mathematical expectations were met.
struct Produced {
    text: String,
    /// PASS/FAIL lines that go to stdout even when the report goes to a file.
    always_stdout: Option<String>,
    machine: Value,
    /// Tabular projection; commands without one fall back to key,value rows.
    csv: Option<String>,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let result = run(&cli.cmd);
    match result {
        Ok(mut produced) => {
            finalize_report(&mut produced.machine, started);
            if let Err(e) = emit(&cli.cmd, &produced) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if produced.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(AppError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn finalize_report(machine: &mut Value, started: Instant) {
    if let Value::Object(map) = machine {
        map.insert("runtime_ms".into(), json!(started.elapsed().as_millis() as u64));
        let stamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        map.insert("timestamp".into(), json!(stamp));
    }
}

fn emit(cmd: &Cmd, produced: &Produced) -> std::io::Result<()> {
    let (format, out) = match cmd {
        Cmd::Search { format, out, .. }
        | Cmd::Expand { format, out, .. }
        | Cmd::Verify { format, out, .. }
        | Cmd::Basis { format, out, .. } => (*format, out.clone()),
    };
    let text_to_stdout = format == Format::Text && out.is_none();
    if let Some(lines) = &produced.always_stdout {
        if !text_to_stdout {
            print!("{lines}");
        }
    }
    let rendered = match format {
        Format::Json => serde_json::to_string(&produced.machine).expect("serializable") + "\n",
        Format::Csv => produced
            .csv
            .clone()
            .unwrap_or_else(|| csv_projection(&produced.machine)),
        Format::Text => produced.text.clone(),
    };
    match out {
        Some(path) => std::fs::write(path, rendered)?,
        None => print!("{rendered}"),
    }
    Ok(())
}

/// Flat key,value projection for reports without a natural table.
fn csv_projection(machine: &Value) -> String {
    let mut out = String::from("key,value\n");
    if let Value::Object(map) = machine {
        for (k, v) in map {
            out.push_str(&format!("{k},{v}\n"));
        }
    }
    out
}

fn validate_m(m: u64, allow_one: bool) -> Result<(), AppError> {
    let ok = SUPPORTED_M.contains(&m) || (allow_one && m == 1);
    if ok {
        Ok(())
    } else {
        Err(AppError::Usage(format!(
            "m = {m} is not supported (expected {}5, 7, 11, or 13)",
            if allow_one { "1, " } else { "" }
        )))
    }
}

fn config_json(cmd: &Cmd) -> Value {
    match cmd {
        Cmd::Search { m, workers, out, format, cache_dir } => json!({
            "command": "search",
            "m": m,
            "workers": workers,
            "out": out.as_ref().map(|p| p.display().to_string()),
            "format": format_name(*format),
            "cache_dir": cache_dir.as_ref().map(|p| p.display().to_string()),
        }),
        Cmd::Expand { m, nmax, out, format, cache_dir } => json!({
            "command": "expand",
            "m": m,
            "nmax": nmax,
            "out": out.as_ref().map(|p| p.display().to_string()),
            "format": format_name(*format),
            "cache_dir": cache_dir.as_ref().map(|p| p.display().to_string()),
        }),
        Cmd::Verify { m, ell, suite, nmax, out, format, cache_dir } => json!({
            "command": "verify",
            "m": m,
            "ell": ell,
            "suite": suite_name(*suite),
            "nmax": nmax,
            "out": out.as_ref().map(|p| p.display().to_string()),
            "format": format_name(*format),
            "cache_dir": cache_dir.as_ref().map(|p| p.display().to_string()),
        }),
        Cmd::Basis { m, k, prec, shift, out, format } => json!({
            "command": "basis",
            "m": m,
            "k": k,
            "prec": prec,
            "shift": match shift { Shift::None => "none", Shift::RInf => "r-inf" },
            "out": out.as_ref().map(|p| p.display().to_string()),
            "format": format_name(*format),
        }),
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Text => "text",
    }
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Congruence => "congruence",
        Suite::ThetaCycle => "theta-cycle",
        Suite::Sturm => "sturm",
        Suite::Lowpoint => "lowpoint",
    }
}

fn profile_checksum_hex(m: u64) -> Option<String> {
    reduced_profile(m).ok().map(|p| format!("{:016x}", p.checksum()))
}

fn f4_version_field(m: u64) -> Value {
    if m == 13 {
        json!(cphi_core::bases::f4_data_version())
    } else {
        Value::Null
    }
}

fn run(cmd: &Cmd) -> Result<Produced, AppError> {
    match cmd {
        Cmd::Search { m, workers, .. } => run_search_cmd(cmd, *m, *workers),
        Cmd::Expand { m, nmax, cache_dir, .. } => run_expand_cmd(cmd, *m, *nmax, cache_dir),
        Cmd::Verify { m, ell, suite, nmax, cache_dir, .. } => {
            run_verify_cmd(cmd, *m, *ell, *suite, *nmax, cache_dir)
        }
        Cmd::Basis { m, k, prec, shift, .. } => run_basis_cmd(cmd, *m, *k, *prec, *shift),
    }
}

fn run_search_cmd(cmd: &Cmd, m: u64, workers: usize) -> Result<Produced, AppError> {
    validate_m(m, false)?;
    if workers == 0 {
        return Err(AppError::Usage("workers must be at least 1".into()));
    }
    let report = search_parallel(m, workers)?;
    let ok = report.matches_expectation();
    let mut machine = report::search_json(&report);
    if let Value::Object(map) = &mut machine {
        map.insert("config".into(), config_json(cmd));
    }
    Ok(Produced {
        text: report::search_text(&report),
        always_stdout: None,
        machine,
        csv: Some(report::search_csv(&report)),
        ok,
    })
}

fn search_parallel(m: u64, workers: usize) -> Result<SearchReport, AppError> {
    let data = SearchData::new(m)?;
    let eps_list: Vec<Vec<i8>> = enumerate_eps(data.profile.profile_len).collect();
    assert_eq!(eps_list.len() as u64, eps_count(data.profile.profile_len));
    let outcomes = if workers <= 1 {
        outcomes_for(&data, &eps_list)?
    } else {
        let chunk = eps_list.len().div_ceil(workers);
        let results: Vec<Result<_, cphi_core::Error>> = std::thread::scope(|scope| {
            let handles: Vec<_> = eps_list
                .chunks(chunk)
                .map(|slice| {
                    let data = &data;
                    scope.spawn(move || outcomes_for(data, slice))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        let mut merged = Vec::with_capacity(eps_list.len());
        for part in results {
            merged.extend(part?);
        }
        assert_eq!(merged.len(), eps_list.len());
        merged
    };
    Ok(assemble_report(m, &data.profile, outcomes))
}

fn run_expand_cmd(
    cmd: &Cmd,
    m: u64,
    nmax: usize,
    cache_dir: &Option<PathBuf>,
) -> Result<Produced, AppError> {
    validate_m(m, true)?;
    let dir = cache_dir.clone().unwrap_or_else(cache::default_cache_dir);
    let values = cache::cphi_series_cached(&dir, m, nmax)?;
    let mut text = String::new();
    for v in &values {
        text.push_str(&v.to_string());
        text.push('\n');
    }
    let mut config = config_json(cmd);
    config["cache_dir"] = json!(dir.display().to_string());
    let machine = json!({
        "config": config,
        "m": m,
        "nmax": nmax,
        "cphi": values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "profile_checksum": profile_checksum_hex(m),
        "f4_version": f4_version_field(m),
    });
    Ok(Produced { text, always_stdout: None, machine, csv: None, ok: true })
}

fn run_verify_cmd(
    cmd: &Cmd,
    m: u64,
    ell: u64,
    suite: Suite,
    nmax: Option<usize>,
    cache_dir: &Option<PathBuf>,
) -> Result<Produced, AppError> {
    validate_m(m, false)?;
    if !cphi_core::arith::is_prime(ell) || ell < 5 {
        return Err(AppError::Usage(format!("l = {ell} must be a prime >= 5")));
    }
    let mut lines = String::new();
    let mut detail = json!({});
    let mut config = config_json(cmd);
    let ok = match suite {
        Suite::Congruence => {
            let nmax = nmax.unwrap_or(20);
            let beta = kiming_olsson_beta(m, ell);
            let top = ell as usize * nmax + beta as usize;
            let dir = cache_dir.clone().unwrap_or_else(cache::default_cache_dir);
            config["nmax"] = json!(nmax);
            config["cache_dir"] = json!(dir.display().to_string());
            let cphi = cache::cphi_series_cached(&dir, m, top)?;
            let rep = check_congruence_in(&cphi, m, ell, beta, nmax);
            detail = json!({
                "beta": rep.beta,
                "nmax": rep.nmax,
                "holds": rep.holds,
                "first_failure": rep.first_failure,
            });
            if rep.holds {
                lines.push_str(&format!(
                    "PASS congruence m={m} l={ell}: cphi_{m}({ell}n+{beta}) = 0 (mod {ell}) for all n <= {nmax}\n"
                ));
            } else {
                lines.push_str(&format!(
                    "FAIL congruence m={m} l={ell}: counterexample at n={}\n",
                    rep.first_failure.unwrap()
                ));
            }
            rep.holds
        }
        Suite::ThetaCycle => {
            let i_max = (ell as usize + 3) / 2 + 1;
            let rec = cphi_core::filtration::theta_cycle(m, ell, i_max)?;
            let ctx = SearchContext::new(m, ell)?;
            let u_prec = ctx.window().min(40 * ell as usize);
            let u_vanishes = h_ell_mod(&ctx, u_prec)?.u_ell(ell)?.is_zero_series();
            let low_step = (ell as usize + 3) / 2;
            let low = rec.cycle.iter().find(|(i, _)| *i == low_step).map(|&(_, w)| w);
            let expected_low = ((ell * ell) as i64 - 1) / 2 + 4;
            let expected_alpha = (ell as i64 + 5) / 2;
            let pass = u_vanishes && low == Some(expected_low) && rec.alpha == Some(expected_alpha);
            detail = json!({
                "cycle": rec.cycle.iter().map(|&(i, w)| json!([i, w])).collect::<Vec<_>>(),
                "alpha": rec.alpha,
                "low_point": low,
                "expected_low_point": expected_low,
                "u_ell_vanishes": u_vanishes,
            });
            let verdict = if pass { "PASS" } else { "FAIL" };
            let show = |v: Option<i64>| v.map_or_else(|| "?".into(), |x| x.to_string());
            lines.push_str(&format!(
                "{verdict} theta-cycle m={m} l={ell}: low point w={} at step {low_step}, alpha={}, h|U_{ell} {} 0 (mod {ell})\n",
                show(low),
                show(rec.alpha),
                if u_vanishes { "=" } else { "!=" }
            ));
            for (i, w) in &rec.cycle {
                lines.push_str(&format!("  w(theta^{i} h) = {w}\n"));
            }
            pass
        }
        Suite::Sturm => {
            let ctx = SearchContext::new(m, ell)?;
            let bound = sturm_bound(ctx.k, m);
            let pass = sturm_verify_survivor(m, ell)?;
            detail = json!({
                "weight": ctx.k,
                "bound": bound,
                "window_start": ctx.r_inf,
            });
            let verdict = if pass { "PASS" } else { "FAIL" };
            lines.push_str(&format!(
                "{verdict} sturm m={m} l={ell}: coefficients q^{} .. q^{bound} of the low-point identity (weight {})\n",
                ctx.r_inf, ctx.k
            ));
            pass
        }
        Suite::Lowpoint => {
            let pass = lowpoint_profile_check(m, ell)?;
            let verdict = if pass { "PASS" } else { "FAIL" };
            lines.push_str(&format!(
                "{verdict} lowpoint m={m} l={ell}: leading profile of 576 theta^(({ell}+3)/2) h matches b (x) eps\n"
            ));
            pass
        }
    };
    let machine = json!({
        "config": config,
        "m": m,
        "ell": ell,
        "suite": suite_name(suite),
        "pass": ok,
        "detail": detail,
        "profile_checksum": profile_checksum_hex(m),
        "f4_version": f4_version_field(m),
    });
    Ok(Produced { text: lines.clone(), always_stdout: Some(lines), machine, csv: None, ok })
}

fn run_basis_cmd(cmd: &Cmd, m: u64, k: i64, prec: usize, shift: Shift) -> Result<Produced, AppError> {
    validate_m(m, false)?;
    if prec == 0 {
        return Err(AppError::Usage("prec must be at least 1".into()));
    }
    let indices = basis_index_set(m, k)?;
    let mut text = String::new();
    let mut expansions: Vec<Value> = Vec::new();
    text.push_str(&format!(
        "S_{k}(Gamma_0({m})): dimension {}, indices {:?}\n",
        indices.len(),
        indices
    ));
    match shift {
        Shift::None => {
            text.push_str("r  ord_inf  ord_zero\n");
            for &r in &indices {
                let ord0 = order_at_zero(m, k, r)?;
                text.push_str(&format!("{r}  {r}  {ord0}\n"));
            }
            for &r in &indices {
                let fr = basis_element(m, k, r, prec)?;
                let coeffs: Vec<String> = fr
                    .int_coeffs()
                    .expect("integer ring")
                    .iter()
                    .map(|c| c.to_string())
                    .collect();
                text.push_str(&format!("F_{r} = q^{r} * ({})\n", coeffs.join(", ")));
                expansions.push(json!({
                    "r": r,
                    "ord_zero": order_at_zero(m, k, r)?,
                    "coeffs_from_q^r": coeffs,
                }));
            }
        }
        Shift::RInf => {
            let ell = derive_ell_for_weight(k)?;
            let ctx = SearchContext::new(m, ell)?;
            text.push_str(&format!(
                "window at r_inf={} for l={ell} (k=(l^2-1)/2+4)\n",
                ctx.r_inf
            ));
            for i in 0..ctx.width as i64 {
                let r = ctx.r_inf + i;
                let fr = basis_element(m, k, r, prec)?;
                let mut padded = vec![BigInt::from(0); i as usize];
                padded.extend(fr.int_coeffs().expect("integer ring").iter().cloned());
                padded.truncate(prec);
                let coeffs: Vec<String> = padded.iter().map(|c| c.to_string()).collect();
                text.push_str(&format!(
                    "F_(r_inf+{i}) / q^r_inf = ({})\n",
                    coeffs.join(", ")
                ));
                expansions.push(json!({
                    "r": r,
                    "window_index": i,
                    "coeffs_from_q^r_inf": coeffs,
                }));
            }
        }
    }
    let machine = json!({
        "config": config_json(cmd),
        "m": m,
        "k": k,
        "indices": indices,
        "expansions": expansions,
        "profile_checksum": profile_checksum_hex(m),
        "f4_version": f4_version_field(m),
    });
    Ok(Produced { text, always_stdout: None, machine, csv: None, ok: true })
}

/// Recover l from the low-point weight k = (l^2 - 1)/2 + 4.
fn derive_ell_for_weight(k: i64) -> Result<u64, AppError> {
    let square = 2 * k - 7;
    if square <= 0 {
        return Err(AppError::Usage(format!("k = {k} is not a low-point weight")));
    }
    let root = cphi_core::arith::isqrt(square);
    if root * root != square || !cphi_core::arith::is_prime(root as u64) {
        return Err(AppError::Usage(format!(
            "k = {k} does not equal (l^2-1)/2 + 4 for a prime l"
        )));
    }
    Ok(root as u64)
}
