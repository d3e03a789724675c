use std::fs;
use std::io::Write;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use beta_arena::game::{Claim, GameError, GameTrace, Verdict};
use beta_arena::scenarios::{preset, ScenarioError, Setup, PRESET_NAMES};

use crate::GameArgs;

const FALSIFIED: u8 = 2;
const INDETERMINATE: u8 = 3;
const ILLEGAL: u8 = 4;

fn apply_overrides(setup: &mut Setup, args: &GameArgs) -> Result<()> {
    match setup {
        Setup::RealWinning { alpha, beta, rho, .. }
        | Setup::ComplexWinning { alpha, beta, rho, .. }
        | Setup::Componentwise { alpha, beta, rho, .. } => {
            if let Some(a) = args.alpha {
                *alpha = a;
            }
            if let Some(b) = args.beta {
                *beta = b;
            }
            if let Some(r) = args.rho {
                *rho = r;
            }
        }
        Setup::Losing { alpha, .. } => {
            if args.beta.is_some() || args.rho.is_some() {
                bail!("beta and rho are fixed by the lattice in losing games; only --alpha may be set");
            }
            if let Some(a) = args.alpha {
                *alpha = a;
            }
        }
    }
    Ok(())
}

fn write_trace(trace: &GameTrace, args: &GameArgs) -> Result<()> {
    let json = serde_json::to_string_pretty(trace)?;
    match &args.out {
        Some(path) => fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => writeln!(std::io::stdout().lock(), "{json}")?,
    }
    Ok(())
}

fn describe(claim: &Claim) -> String {
    match claim {
        Claim::ContainsBlock { digit, position } => format!("contains digit {digit} by position {position}"),
        Claim::AvoidsDigit { digit, depth } => format!("avoids digit {digit} in the first {depth} places"),
    }
}

pub fn run(args: &GameArgs) -> Result<ExitCode> {
    if args.list {
        for name in PRESET_NAMES {
            println!("{name}");
        }
        return Ok(ExitCode::SUCCESS);
    }
    let name = args.preset.as_deref().expect("clap requires --preset without --list");
    let mut setup = preset(name)
        .ok_or_else(|| anyhow!("unknown preset '{name}'; known: {}", PRESET_NAMES.join(", ")))?;
    apply_overrides(&mut setup, args)?;

    let report = match setup.run(args.seed) {
        Ok(r) => r,
        Err(ScenarioError::Game(GameError::IllegalMove { player, round, excess, trace })) => {
            write_trace(&trace, args)?;
            eprintln!("illegal move by {player} in round {round} (overshoot {excess:e})");
            return Ok(ExitCode::from(ILLEGAL));
        }
        Err(ScenarioError::Game(e @ GameError::Strategy { .. })) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(FALSIFIED));
        }
        Err(e @ ScenarioError::Hypotheses(_)) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(INDETERMINATE));
        }
        Err(e) => return Err(e.into()),
    };
    write_trace(&report.trace, args)?;
    let v = &report.verification;
    eprintln!("claim: {}", describe(&v.claim));
    eprintln!("verdict: {:?}", v.verdict);
    if let Some(note) = &v.note {
        eprintln!("note: {note}");
    }
    if !report.audit_ok {
        eprintln!("audit: the trace fails the post-hoc legality check");
        return Ok(ExitCode::from(INDETERMINATE));
    }
    Ok(match v.verdict {
        Verdict::Verified => ExitCode::SUCCESS,
        Verdict::Falsified => ExitCode::from(FALSIFIED),
        Verdict::Indeterminate => ExitCode::from(INDETERMINATE),
    })
}
