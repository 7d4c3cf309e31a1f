//! Report rendering. JSON is the canonical format (sorted keys, so reruns
//! are byte-identical apart from the timestamp and runtime fields); csv and
//! text are projections of it.

use cphi_core::search::{Classification, SearchReport};
use serde_json::{json, Value};

pub fn eps_string(eps: &[i8]) -> String {
    eps.iter()
        .map(|&e| match e {
            -1 => '-',
            0 => '0',
            1 => '+',
            _ => '?',
        })
        .collect()
}

fn classification_str(c: Classification) -> &'static str {
    match c {
        Classification::KnownCongruence => "known-congruence",
        Classification::Unexpected => "unexpected",
    }
}

pub fn search_json(report: &SearchReport) -> Value {
    let survivors: Vec<Value> = report
        .survivor_summary
        .iter()
        .map(|s| {
            json!({
                "ell": s.ell.to_string(),
                "eps": eps_string(&s.eps),
                "classification": classification_str(s.classification),
            })
        })
        .collect();
    let eliminated: Vec<Value> = report
        .eliminated_summary
        .iter()
        .map(|(l, eps, row)| {
            json!({
                "ell": l.to_string(),
                "eps": eps_string(eps),
                "ruled_out_at_row": row,
            })
        })
        .collect();
    let nonempty: Vec<Value> = report
        .outcomes
        .iter()
        .map(|o| {
            json!({
                "eps": eps_string(&o.eps),
                "gcd": o.gcd_value.to_string(),
                "candidates": o.candidates.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "outside_search_range": o.below_range.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "survivors": o.survivors.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "m": report.m,
        "total_eps": report.total_eps,
        "survivor_summary": survivors,
        "eliminated_summary": eliminated,
        "nonempty_candidates": nonempty,
        "profile_checksum": format!("{:016x}", report.profile_checksum),
        "f4_version": report.f4_version,
        "expectation_met": report.matches_expectation(),
    })
}

pub fn search_text(report: &SearchReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "search m={}: {} sign patterns processed\n",
        report.m, report.total_eps
    ));
    out.push_str(&format!(
        "patterns with candidate primes above the threshold: {}\n",
        report.outcomes.len()
    ));
    if report.survivor_summary.is_empty() {
        out.push_str("survivors: none\n");
    } else {
        for s in &report.survivor_summary {
            out.push_str(&format!(
                "survivor l={} eps={} [{}]\n",
                s.ell,
                eps_string(&s.eps),
                classification_str(s.classification)
            ));
        }
    }
    for (l, eps, row) in &report.eliminated_summary {
        out.push_str(&format!(
            "eliminated l={l} eps={} at extended check row {row}\n",
            eps_string(eps)
        ));
    }
    if let Some(v) = &report.f4_version {
        out.push_str(&format!(
            "note: level-13 result is conditional on embedded data {v}\n"
        ));
    }
    out.push_str(&format!(
        "expectation met: {}\n",
        report.matches_expectation()
    ));
    out
}

pub fn search_csv(report: &SearchReport) -> String {
    let mut out = String::from("eps,gcd,candidates,outside_search_range,survivors\n");
    for o in &report.outcomes {
        let join = |v: &Vec<num_bigint::BigUint>| {
            v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("|")
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            eps_string(&o.eps),
            o.gcd_value,
            join(&o.candidates),
            join(&o.below_range),
            join(&o.survivors),
        ));
    }
    out
}
