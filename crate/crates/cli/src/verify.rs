use std::process::ExitCode;

use anyhow::Result;
use loopforge::huthnance::{audit_lemma312, audit_osborn, AuditCase, AuditReport};
use loopforge::{Element, InverseConvention, Side};
use serde_json::json;

pub const FAILS_VERDICT: &str = "necessary condition for universality FAILS";

fn triple(xs: &[String; 3]) -> String {
    format!("[{}, {}, {}]", xs[0], xs[1], xs[2])
}

fn ints(xs: &[i64; 3]) -> String {
    format!("[{}, {}, {}]", xs[0], xs[1], xs[2])
}

/// Both sides of the probe at a concrete `v`.
fn probe_at(v: &Element, conv: InverseConvention) -> Result<(Element, Element)> {
    let lhs = v.star(&v.star(v)?)?;
    let rhs = v.lambda(conv)?.divide(Side::Left, v)?.star(v)?;
    Ok((lhs, rhs))
}

fn describe_parities(report: &AuditReport, case: &AuditCase) -> String {
    report
        .variables
        .iter()
        .zip(&case.parities)
        .map(|((var, names), parity)| {
            let first = if *parity == 1 { format!("2{}+1", names[0]) } else { format!("2{}", names[0]) };
            format!("{var} = [{first}, {}, {}]", names[1], names[2])
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn print_case(report: &AuditReport, case: &AuditCase) {
    println!("  case {}: {}", describe_parities(report, case), if case.holds { "holds" } else { "FAILS" });
    println!("    lhs      = {}", triple(&case.lhs));
    println!("    rhs      = {}", triple(&case.rhs));
    println!("    residual = {}", triple(&case.residuals));
    if let (Some(w), Some(values)) = (&case.witness, &case.witness_values) {
        let ws: Vec<String> = w.iter().map(ints).collect();
        println!("    witness  = {} (lhs {}, rhs {})", ws.join(", "), ints(&values.lhs), ints(&values.rhs));
    }
    if let Some(reference) = &case.reference {
        println!("    reference lhs = {}", triple(&reference.lhs));
        println!("    reference rhs = {}", triple(&reference.rhs));
        let mismatches = reference.mismatches();
        if mismatches.is_empty() {
            println!("    reference: all components match");
        } else {
            for m in mismatches {
                println!("    reference MISMATCH: {m}");
            }
        }
    }
}

pub fn run(conventions: &[InverseConvention], as_json: bool) -> Result<ExitCode> {
    let v = Element::new(1, 0, 0);
    let mut confirmed = false;
    let mut sections = Vec::new();
    for &conv in conventions {
        let probe = audit_lemma312::<i64>(conv)?;
        let osborn = audit_osborn::<i64>(conv)?;
        let (lhs, rhs) = probe_at(&v, conv)?;
        let probe_fails = !probe.holds();
        if conv == InverseConvention::Right && probe_fails {
            confirmed = true;
        }
        if as_json {
            sections.push(json!({
                "convention": conv,
                "lemma312": probe,
                "osborn": osborn,
                "probe_at": { "v": [v.a, v.k, v.m], "lhs": [lhs.a, lhs.k, lhs.m], "rhs": [rhs.a, rhs.k, rhs.m] },
            }));
            continue;
        }
        let x_lambda = match conv {
            InverseConvention::Right => "x*x^l = e",
            InverseConvention::Left => "x^l*x = e",
        };
        println!("== convention {conv} ({x_lambda}) ==");
        println!("Universality probe {} on (H, *):", probe.law);
        for case in &probe.cases {
            print_case(&probe, case);
        }
        println!("  at v = {v}: lhs = {lhs}, rhs = {rhs} ({})", if lhs == rhs { "equal" } else { "differ" });
        println!("  probe identity {}", if probe_fails { "FAILS" } else { "holds" });
        let holding = osborn.cases.iter().filter(|c| c.holds).count();
        println!("Osborn identity {} on (H, *): {holding} of {} parity cases hold", osborn.law, osborn.cases.len());
        for case in &osborn.cases {
            print_case(&osborn, case);
        }
        println!();
    }
    let verdict = if confirmed {
        format!("{FAILS_VERDICT}: (H, *) is not a universal Osborn loop")
    } else {
        "counterexample not confirmed under the selected convention(s)".to_string()
    };
    if as_json {
        let out = json!({ "audits": sections, "counterexample_confirmed": confirmed, "verdict": verdict });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("Verdict: {verdict}");
    }
    Ok(if confirmed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
