use std::fs::File;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use crate::compute::{evaluate, exit_code};
use crate::params::Params;
use crate::{EXIT_DISAGREE, EXIT_SPEC};

const HEADER: [&str; 10] = ["beta", "L", "N", "case", "value_re", "value_im", "oracle", "oracle_value", "rel_err", "seconds"];

/// Inclusive `A..B`; `B < A` is the empty range.
fn parse_range(s: &str) -> Option<(usize, usize)> {
    let (a, b) = s.split_once("..")?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

pub fn run(params: &Params, range: &str, out: Option<&Path>) -> ExitCode {
    let Some((first, last)) = parse_range(range) else {
        eprintln!("error: --n-range must look like A..B (got {range})");
        return ExitCode::from(EXIT_SPEC);
    };
    let sink: Box<dyn Write> = match out {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(f),
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(EXIT_SPEC);
            }
        },
        None => Box::new(std::io::stdout()),
    };
    let mut w = csv::Writer::from_writer(sink);
    let code = write_rows(params, first, last, &mut w);
    if let Err(e) = w.flush() {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    code
}

fn write_rows<W: Write>(params: &Params, first: usize, last: usize, w: &mut csv::Writer<W>) -> ExitCode {
    if let Err(e) = w.write_record(HEADER) {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    for n in first..=last {
        let eval = match evaluate(params, n) {
            Ok(e) => e,
            Err(e) => {
                eprintln!("error at N={n}: {e}");
                return ExitCode::from(exit_code(&e));
            }
        };
        let r = &eval.result;
        // closed form first, then quadrature
        let oracle = ["mehta", "selberg", "dyson", "quadrature", "monte_carlo"]
            .iter()
            .find_map(|name| r.oracles.get(*name).map(|o| (*name, o.value, o.rel_err)));
        let (name, value, rel_err) = match oracle {
            Some((name, v, e)) => (name.to_string(), format!("{v:e}"), format!("{e:e}")),
            None => ("none".into(), String::new(), String::new()),
        };
        let row = [
            r.beta.to_string(),
            r.l.to_string(),
            r.n.to_string(),
            r.case.to_string(),
            format!("{:e}", r.value.re),
            format!("{:e}", r.value.im),
            name,
            value,
            rel_err,
            format!("{:.6}", r.seconds),
        ];
        if let Err(e) = w.write_record(&row).and_then(|_| w.flush().map_err(csv::Error::from)) {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
        if !eval.disagreements.is_empty() {
            eprintln!("error at N={n}: oracle disagreement: {}", eval.disagreements.join(", "));
            return ExitCode::from(EXIT_DISAGREE);
        }
    }
    ExitCode::SUCCESS
}
