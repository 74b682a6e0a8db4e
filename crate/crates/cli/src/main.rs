mod args;
mod run;

use std::process::ExitCode;

use clap::Parser;
use symqcs::{Error, Fp, Rational, Result};

use args::Cli;
use run::{execute, field_of, Outcome};

/// Primes available for `--field F<p>`.
const PRIMES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 101, 32003];

fn parse_field(s: &str) -> Result<Option<u64>> {
    let t = s.trim();
    if matches!(t, "Q" | "QQ" | "q") {
        return Ok(None);
    }
    let digits = t
        .strip_prefix("Fp:")
        .or_else(|| t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')))
        .or_else(|| t.strip_prefix('F'))
        .ok_or_else(|| Error::Argument(format!("unknown field {s:?}")))?;
    let p: u64 = digits.parse().map_err(|_| Error::Argument(format!("unknown field {s:?}")))?;
    if !PRIMES.contains(&p) {
        return Err(Error::Argument(format!("F_{p} is not built in; available primes: {PRIMES:?}")));
    }
    Ok(Some(p))
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match parse_field(field_of(&cli.command))? {
        None => execute::<Rational>(cli),
        Some(2) => execute::<Fp<2>>(cli),
        Some(3) => execute::<Fp<3>>(cli),
        Some(5) => execute::<Fp<5>>(cli),
        Some(7) => execute::<Fp<7>>(cli),
        Some(11) => execute::<Fp<11>>(cli),
        Some(13) => execute::<Fp<13>>(cli),
        Some(17) => execute::<Fp<17>>(cli),
        Some(19) => execute::<Fp<19>>(cli),
        Some(23) => execute::<Fp<23>>(cli),
        Some(29) => execute::<Fp<29>>(cli),
        Some(31) => execute::<Fp<31>>(cli),
        Some(101) => execute::<Fp<101>>(cli),
        Some(32003) => execute::<Fp<32003>>(cli),
        Some(p) => unreachable!("prime {p} passed the table check"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let mut text = serde_json::to_string_pretty(&outcome.value).expect("JSON values serialize");
    text.push('\n');
    match &cli.output {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    if outcome.ok { ExitCode::SUCCESS } else { ExitCode::from(2) }
}
