//! Subcommand implementations. Every function returns the process exit
//! code: 0 for success, 2 when a verification sweep found a violation;
//! validation problems are returned as `Err` strings and exit with 1.

use crate::render::{pair, scan_table};
use crate::{Cli, Cmd, DemoName, Dist, Format, MomentsArgs, OrderingArgs, ProbArgs, ReductionArgs, ScanArgs};
use mhg_core::convolution::event_prob_convolution;
use mhg_core::hypergeom::{ColumnSums, MhgSpec};
use mhg_core::multinomial::{
    censored_moments_series, reference_variance, sweep_censored_moments,
    sweep_zero_reduction_pairs, variance_of_combo, CensoredMoments, MomentSweepBounds,
    MultinomialSpec,
};
use mhg_core::numeric::{decimal_string, fraction_string, parse_rational};
use mhg_core::ordering::{
    check_asymmetric_pair, scan_over_n, sweep_core_ordering, OrderingSweepBounds,
};
use mhg_core::simplex::{parse_counts, parse_symmetric_core, Rect};
use mhg_core::{Error, Rational};
use num_traits::Zero;
use serde_json::{json, Value};

pub fn dispatch(cli: &Cli) -> Result<i32, String> {
    match &cli.command {
        Cmd::Prob(args) => prob(args, cli),
        Cmd::Scan(args) => scan(args, cli),
        Cmd::CheckOrdering(args) => check_ordering(args, cli),
        Cmd::CheckCorollary(args) => check_corollary(args, cli),
        Cmd::Moments(args) => moments(args, cli),
        Cmd::Reduction(args) => reduction(args, cli),
        Cmd::Demo(args) => demo(args),
    }
}

// ---------------------------------------------------------------- parsing

fn parse_rect_flag(text: &str, dim: usize) -> Result<Rect, String> {
    let rect: Rect = text.parse().map_err(|e| format!("--rect: {e}"))?;
    if rect.dim() != dim {
        return Err(format!(
            "--rect: expected {dim} intervals, got {}",
            rect.dim()
        ));
    }
    Ok(rect)
}

fn parse_rational_list(text: &str, flag: &str) -> Result<Vec<Rational>, String> {
    text.split(',')
        .map(|part| parse_rational(part).map_err(|e| format!("{flag}: {e}")))
        .collect()
}

fn parse_mult_spec(n: u64, p_text: &str) -> Result<MultinomialSpec, String> {
    let p = parse_rational_list(p_text, "--p")?;
    MultinomialSpec::new(n, p).map_err(|e| format!("--p/--n: {e}"))
}

/// Resolves --s/--rect or --core into column sums plus a rectangle.
fn resolve_mhg_event(
    s: &Option<String>,
    core: &Option<String>,
    rect: &Option<String>,
) -> Result<(ColumnSums, Rect), String> {
    if let Some(core_text) = core {
        let core = parse_symmetric_core(core_text).map_err(|e| format!("--core: {e}"))?;
        return Ok((core.column_sums().clone(), core.rect().clone()));
    }
    let s_text = s
        .as_ref()
        .ok_or_else(|| "--s: required unless --core is given".to_string())?;
    let sums = ColumnSums::new(parse_counts(s_text).map_err(|e| format!("--s: {e}"))?);
    let rect_text = rect
        .as_ref()
        .ok_or_else(|| "--rect: required unless --core is given".to_string())?;
    let rect = parse_rect_flag(rect_text, sums.len())?;
    Ok((sums, rect))
}

fn conditional_moments(spec: &MultinomialSpec, rect: &Rect) -> Result<CensoredMoments, String> {
    censored_moments_series(spec, rect).map_err(|e| match e {
        Error::ZeroProbabilityEvent => format!("--rect: {e}"),
        other => other.to_string(),
    })
}

// ------------------------------------------------------------------- prob

fn prob(args: &ProbArgs, cli: &Cli) -> Result<i32, String> {
    let value = match args.dist {
        Dist::Mhg => {
            if args.p.is_some() {
                return Err("--p: not used with --dist mhg".into());
            }
            let (sums, rect) = resolve_mhg_event(&args.s, &args.core, &args.rect)?;
            let spec = MhgSpec::new(args.n, sums).map_err(|e| e.to_string())?;
            event_prob_convolution(&spec, &rect)
        }
        Dist::Mult => {
            if args.s.is_some() {
                return Err("--s: not used with --dist mult".into());
            }
            if args.core.is_some() {
                return Err("--core: not used with --dist mult".into());
            }
            let p_text = args
                .p
                .as_ref()
                .ok_or_else(|| "--p: required with --dist mult".to_string())?;
            let spec = parse_mult_spec(args.n, p_text)?;
            let rect_text = args
                .rect
                .as_ref()
                .ok_or_else(|| "--rect: required with --dist mult".to_string())?;
            let rect = parse_rect_flag(rect_text, spec.category_count())?;
            match censored_moments_series(&spec, &rect) {
                Ok(m) => m.event_prob().clone(),
                Err(Error::ZeroProbabilityEvent) => Rational::zero(),
                Err(e) => return Err(e.to_string()),
            }
        }
    };
    let out = pair(&value, cli.precision);
    match cli.format {
        Format::Json => println!("{}", out.json()),
        Format::Csv => {
            println!("exact,decimal");
            println!("{},{}", out.exact, out.decimal);
        }
        Format::Text => println!("P = {} \u{2248} {}", out.exact, out.decimal),
    }
    Ok(0)
}

// ------------------------------------------------------------------- scan

fn scan(args: &ScanArgs, cli: &Cli) -> Result<i32, String> {
    let (sums, rect) = resolve_mhg_event(&args.s, &args.core, &args.rect)?;
    if sums.len() < 2 {
        return Err("--s: need at least two categories".into());
    }
    let probs = scan_over_n(&sums, &rect);
    match cli.format {
        Format::Csv => {
            println!("n,prob_exact,prob_decimal");
            for (n, p) in probs.iter().enumerate() {
                println!(
                    "{n},{},{}",
                    fraction_string(p),
                    decimal_string(p, cli.precision)
                );
            }
        }
        Format::Json => {
            let rows: Vec<Value> = probs
                .iter()
                .enumerate()
                .map(|(n, p)| {
                    json!({
                        "n": n,
                        "prob_exact": fraction_string(p),
                        "prob_decimal": decimal_string(p, cli.precision),
                    })
                })
                .collect();
            println!("{}", Value::Array(rows));
        }
        Format::Text => print!("{}", scan_table(&probs, cli.precision)),
    }
    Ok(0)
}

// --------------------------------------------------------------- ordering

fn check_ordering(args: &OrderingArgs, cli: &Cli) -> Result<i32, String> {
    let bounds = OrderingSweepBounds {
        max_m: args.max_m,
        max_s: args.max_s,
    };
    let outcome = sweep_core_ordering(&bounds);
    let pass = outcome.upper_violations == 0
        && outcome.lower_violations == 0
        && outcome.symmetry_violations == 0;
    match cli.format {
        Format::Json => {
            println!(
                "{}",
                json!({
                    "max_m": args.max_m,
                    "max_s": args.max_s,
                    "cores": outcome.cores,
                    "upper_violations": outcome.upper_violations,
                    "lower_violations": outcome.lower_violations,
                    "symmetry_violations": outcome.symmetry_violations,
                    "pass": pass,
                    "findings": outcome.first_findings,
                })
            );
        }
        Format::Csv => {
            println!("cores,upper_violations,lower_violations,symmetry_violations,pass");
            println!(
                "{},{},{},{},{pass}",
                outcome.cores,
                outcome.upper_violations,
                outcome.lower_violations,
                outcome.symmetry_violations
            );
        }
        Format::Text => {
            println!(
                "symmetric-core ordering sweep (m <= {}, s_j <= {})",
                args.max_m, args.max_s
            );
            println!("cores checked: {}", outcome.cores);
            println!("upper-range violations: {}", outcome.upper_violations);
            println!("lower-range violations: {}", outcome.lower_violations);
            println!("symmetry violations: {}", outcome.symmetry_violations);
            print_findings(pass, &outcome.first_findings);
        }
    }
    Ok(if pass { 0 } else { 2 })
}

fn check_corollary(args: &OrderingArgs, cli: &Cli) -> Result<i32, String> {
    let bounds = OrderingSweepBounds {
        max_m: args.max_m,
        max_s: args.max_s,
    };
    let outcome = sweep_core_ordering(&bounds);
    let pass = outcome.ratio_violations == 0 && outcome.ratio_mismatches == 0;
    match cli.format {
        Format::Json => {
            println!(
                "{}",
                json!({
                    "max_m": args.max_m,
                    "max_s": args.max_s,
                    "cores": outcome.cores,
                    "ratio_violations": outcome.ratio_violations,
                    "ratio_mismatches": outcome.ratio_mismatches,
                    "pass": pass,
                    "findings": outcome.first_findings,
                })
            );
        }
        Format::Csv => {
            println!("cores,ratio_violations,ratio_mismatches,pass");
            println!(
                "{},{},{},{pass}",
                outcome.cores, outcome.ratio_violations, outcome.ratio_mismatches
            );
        }
        Format::Text => {
            println!(
                "coefficient-ratio sweep (m <= {}, s_j <= {})",
                args.max_m, args.max_s
            );
            println!("cores checked: {}", outcome.cores);
            println!("ratio violations: {}", outcome.ratio_violations);
            println!(
                "mismatches against direct comparison: {}",
                outcome.ratio_mismatches
            );
            print_findings(pass, &outcome.first_findings);
        }
    }
    Ok(if pass { 0 } else { 2 })
}

fn print_findings(pass: bool, findings: &[String]) {
    if pass {
        println!("result: PASS");
    } else {
        println!("result: FAIL");
        for finding in findings {
            println!("  {finding}");
        }
    }
}

// ---------------------------------------------------------------- moments

fn moments(args: &MomentsArgs, cli: &Cli) -> Result<i32, String> {
    let spec = parse_mult_spec(args.n, &args.p)?;
    let rect = parse_rect_flag(&args.rect, spec.category_count())?;
    let mom = conditional_moments(&spec, &rect)?;
    let m = spec.category_count();
    let digits = cli.precision;
    match cli.format {
        Format::Json => {
            let mu: Vec<Value> = mom.mu().iter().map(|v| pair(v, digits).json()).collect();
            let second: Vec<Value> = (0..m)
                .map(|j| {
                    Value::Array(
                        (0..m)
                            .map(|k| pair(&mom.second()[j][k], digits).json())
                            .collect(),
                    )
                })
                .collect();
            let cov: Vec<Value> = (0..m)
                .map(|j| {
                    Value::Array(
                        (0..m)
                            .map(|k| pair(&mom.covariance(j, k), digits).json())
                            .collect(),
                    )
                })
                .collect();
            println!(
                "{}",
                json!({
                    "event_prob": pair(mom.event_prob(), digits).json(),
                    "mu": mu,
                    "second": second,
                    "covariance": cov,
                })
            );
        }
        Format::Csv => {
            println!("quantity,j,k,exact,decimal");
            let p = pair(mom.event_prob(), digits);
            println!("event_prob,,,{},{}", p.exact, p.decimal);
            for (j, v) in mom.mu().iter().enumerate() {
                let p = pair(v, digits);
                println!("mu,{j},,{},{}", p.exact, p.decimal);
            }
            for j in 0..m {
                for k in 0..m {
                    let p = pair(&mom.second()[j][k], digits);
                    println!("second,{j},{k},{},{}", p.exact, p.decimal);
                }
            }
            for j in 0..m {
                for k in 0..m {
                    let p = pair(&mom.covariance(j, k), digits);
                    println!("covariance,{j},{k},{},{}", p.exact, p.decimal);
                }
            }
        }
        Format::Text => {
            let p = pair(mom.event_prob(), digits);
            println!("event probability: {} \u{2248} {}", p.exact, p.decimal);
            for (j, v) in mom.mu().iter().enumerate() {
                let p = pair(v, digits);
                println!("mu[{j}] = {} \u{2248} {}", p.exact, p.decimal);
            }
            for j in 0..m {
                for k in 0..m {
                    let p = pair(&mom.second()[j][k], digits);
                    println!("second[{j}][{k}] = {} \u{2248} {}", p.exact, p.decimal);
                }
            }
            for j in 0..m {
                for k in 0..m {
                    let p = pair(&mom.covariance(j, k), digits);
                    println!("covariance[{j}][{k}] = {} \u{2248} {}", p.exact, p.decimal);
                }
            }
        }
    }
    Ok(0)
}

// -------------------------------------------------------------- reduction

fn reduction(args: &ReductionArgs, cli: &Cli) -> Result<i32, String> {
    let single_flags = [
        args.n.is_some(),
        args.p.is_some(),
        args.rect.is_some(),
        args.c.is_some(),
    ];
    if single_flags.iter().any(|&present| present) {
        if !single_flags.iter().all(|&present| present) {
            return Err("single evaluation needs --n, --p, --rect, and --c together".into());
        }
        return reduction_single(args, cli);
    }
    reduction_sweep(args, cli)
}

fn reduction_single(args: &ReductionArgs, cli: &Cli) -> Result<i32, String> {
    let n = args.n.expect("presence checked");
    let spec = parse_mult_spec(n, args.p.as_ref().expect("presence checked"))?;
    let rect = parse_rect_flag(
        args.rect.as_ref().expect("presence checked"),
        spec.category_count(),
    )?;
    let c = parse_rational_list(args.c.as_ref().expect("presence checked"), "--c")?;
    if c.len() != spec.category_count() {
        return Err(format!(
            "--c: expected {} coefficients, got {}",
            spec.category_count(),
            c.len()
        ));
    }
    let mom = conditional_moments(&spec, &rect)?;
    let variance = variance_of_combo(&mom, &c).map_err(|e| e.to_string())?;
    let reference = reference_variance(&mom, n, &c).map_err(|e| e.to_string())?;
    let reduction = &reference - &variance;
    let digits = cli.precision;
    let quantities = [
        ("event_prob", mom.event_prob().clone()),
        ("variance", variance),
        ("reference_variance", reference),
        ("reduction", reduction),
    ];
    match cli.format {
        Format::Json => {
            let mut obj = serde_json::Map::new();
            for (name, value) in &quantities {
                obj.insert(name.to_string(), pair(value, digits).json());
            }
            println!("{}", Value::Object(obj));
        }
        Format::Csv => {
            println!("quantity,exact,decimal");
            for (name, value) in &quantities {
                let p = pair(value, digits);
                println!("{name},{},{}", p.exact, p.decimal);
            }
        }
        Format::Text => {
            for (name, value) in &quantities {
                let p = pair(value, digits);
                println!("{name} = {} \u{2248} {}", p.exact, p.decimal);
            }
        }
    }
    Ok(0)
}

fn reduction_sweep(args: &ReductionArgs, cli: &Cli) -> Result<i32, String> {
    let bounds = MomentSweepBounds {
        max_m: args.max_m,
        max_n: args.max_n,
        grid_denominator: 8,
    };
    let outcome = sweep_censored_moments(&bounds);
    let pairs = sweep_zero_reduction_pairs(args.max_n, 8);
    let pass = outcome.is_clean() && pairs.failures == 0;
    let findings = [outcome.first_findings.clone(), pairs.first_findings.clone()].concat();
    match cli.format {
        Format::Json => {
            println!(
                "{}",
                json!({
                    "max_m": args.max_m,
                    "max_n": args.max_n,
                    "grid_denominator": 8,
                    "cells": outcome.cells,
                    "zero_probability_cells": outcome.zero_probability_cells,
                    "cross_validation_failures": outcome.cross_validation_failures,
                    "invariant_failures": outcome.invariant_failures,
                    "sure_event_nonzero": outcome.sure_event_nonzero,
                    "pinned_nonzero": outcome.pinned_nonzero,
                    "factorized_nonzero": outcome.factorized_nonzero,
                    "interior_nonpositive": outcome.interior_nonpositive,
                    "classifier_failures": outcome.classifier_failures,
                    "pair_cells": pairs.cells,
                    "pair_zero_probability_cells": pairs.zero_probability_cells,
                    "pair_failures": pairs.failures,
                    "pass": pass,
                    "findings": findings,
                })
            );
        }
        Format::Csv => {
            println!(
                "cells,zero_probability_cells,cross_validation_failures,invariant_failures,\
                 sure_event_nonzero,pinned_nonzero,factorized_nonzero,interior_nonpositive,\
                 classifier_failures,pair_cells,pair_zero_probability_cells,pair_failures,pass"
            );
            println!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{pass}",
                outcome.cells,
                outcome.zero_probability_cells,
                outcome.cross_validation_failures,
                outcome.invariant_failures,
                outcome.sure_event_nonzero,
                outcome.pinned_nonzero,
                outcome.factorized_nonzero,
                outcome.interior_nonpositive,
                outcome.classifier_failures,
                pairs.cells,
                pairs.zero_probability_cells,
                pairs.failures
            );
        }
        Format::Text => {
            println!(
                "variance-reduction sweep (m <= {}, n <= {}, p on the i/8 grid)",
                args.max_m, args.max_n
            );
            println!(
                "grid cells checked: {} (zero-probability: {})",
                outcome.cells, outcome.zero_probability_cells
            );
            println!(
                "cross-validation failures: {}",
                outcome.cross_validation_failures
            );
            println!("invariant failures: {}", outcome.invariant_failures);
            println!("sure-event reductions != 0: {}", outcome.sure_event_nonzero);
            println!(
                "pinned-component reductions != 0: {}",
                outcome.pinned_nonzero
            );
            println!(
                "zero-pinning-cylinder reductions != 0: {}",
                outcome.factorized_nonzero
            );
            println!(
                "interior reductions <= 0: {}",
                outcome.interior_nonpositive
            );
            println!("classifier failures: {}", outcome.classifier_failures);
            println!(
                "zero-reduction pair family: {} cells (zero-probability: {}), failures: {}",
                pairs.cells, pairs.zero_probability_cells, pairs.failures
            );
            print_findings(pass, &findings);
        }
    }
    Ok(if pass { 0 } else { 2 })
}

// ------------------------------------------------------------------- demo

/// Worked examples with fixed parameters and byte-stable text output;
/// --format and --precision are ignored.
fn demo(args: &crate::DemoArgs) -> Result<i32, String> {
    match args.name {
        DemoName::Books => {
            let sums = ColumnSums::new(vec![4; 13]);
            let rect = Rect::new(vec![1; 13], vec![3; 13]).expect("static bounds");
            println!("deals from 13 categories of size 4 (t = 52), every count kept in 1:3");
            println!();
            let probs = scan_over_n(&sums, &rect);
            print!("{}", scan_table(&probs, 6));
        }
        DemoName::Counterexample => {
            let sums = ColumnSums::new(vec![4, 6]);
            let rect: Rect = "0:3,3:6".parse().expect("static rectangle");
            let cmp = check_asymmetric_pair(&sums, &rect, 5, 6).map_err(|e| e.to_string())?;
            println!("asymmetric rectangle 0:3,3:6 over categories (4, 6), t = 10");
            println!();
            println!(
                "P_5 \u{2248} {} ({})",
                decimal_string(&cmp.prob_n, 6),
                fraction_string(&cmp.prob_n)
            );
            println!(
                "P_6 \u{2248} {} ({})",
                decimal_string(&cmp.prob_n_prime, 6),
                fraction_string(&cmp.prob_n_prime)
            );
            if cmp.violated {
                println!("ordering violated (asymmetric rect): P_5 < P_6");
            } else {
                println!("ordering holds: P_5 >= P_6");
            }
        }
    }
    Ok(0)
}
