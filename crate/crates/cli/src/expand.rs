use anyhow::{bail, Context, Result};
use beta_arena::complex::{ComplexBase, ComplexDomain};
use beta_arena::lattice::{BoundaryPolicy, Expansion};
use beta_arena::numeric::{fmt_sig, metallic_mean};
use beta_arena::quaternion::{preset_system, LatticePreset};
use beta_arena::real::RealBase;
use beta_arena::{Quaternion, Tolerance};
use serde::Serialize;

use crate::{DomainArg, ExpandArgs, Format, Policy};

/// `golden`, `silver`, `metallic:<j>` or a plain number.
pub fn parse_base(s: &str) -> Result<f64> {
    let v = match s {
        "golden" => metallic_mean(1)?,
        "silver" => metallic_mean(2)?,
        _ => match s.strip_prefix("metallic:") {
            Some(j) => metallic_mean(j.parse().with_context(|| format!("bad metallic index in '{s}'"))?)?,
            None => s.parse().with_context(|| format!("bad base '{s}'"))?,
        },
    };
    Ok(v)
}

#[derive(Serialize)]
struct Cycle {
    preperiod: usize,
    period: usize,
}

#[derive(Serialize)]
struct Listing {
    digits: Vec<String>,
    reconstruction_error: f64,
    cycle: Option<Cycle>,
}

fn policy(p: Policy) -> BoundaryPolicy {
    match p {
        Policy::Error => BoundaryPolicy::Error,
        Policy::Nudge => BoundaryPolicy::NudgeInward,
    }
}

fn point(z: &Option<Vec<f64>>, dim: usize) -> Result<Quaternion> {
    let Some(v) = z else { bail!("--z is required for this base") };
    if v.len() != dim {
        bail!("--z needs {dim} values, got {}", v.len());
    }
    let mut a = [0.0; 4];
    a[..dim].copy_from_slice(v);
    Ok(Quaternion::from_array(a))
}

fn from_expansion(exp: Expansion, recon: Quaternion, z: Quaternion) -> Listing {
    Listing {
        digits: exp.digits.iter().map(|d| d.to_string()).collect(),
        reconstruction_error: (recon - z).norm(),
        cycle: exp.cycle.map(|(preperiod, period)| Cycle { preperiod, period }),
    }
}

pub fn run(args: &ExpandArgs) -> Result<()> {
    let tol = Tolerance::from_env()?;
    let pol = policy(args.policy);
    let listing = if let Some(b) = &args.real {
        let base = RealBase::with_tolerance(parse_base(b)?, tol, beta_arena::real::DEFAULT_DEPTH)?;
        let Some(x) = args.x else { bail!("--x is required with --real") };
        let d = base.digits(x, args.n, pol)?;
        Listing {
            reconstruction_error: (x - base.block_value(&d.0)).abs(),
            digits: d.0.iter().map(|v| v.to_string()).collect(),
            cycle: None,
        }
    } else if let Some(c) = &args.complex {
        let domain = match args.domain {
            DomainArg::Unit => ComplexDomain::Unit,
            DomainArg::Centered => ComplexDomain::Centered,
        };
        let base = ComplexBase::with_domain(c[0], c[1], domain, tol)?;
        let z = point(&args.z, 2)?;
        let sys = base.system().with_policy(pol);
        let exp = sys.expand(z, args.n)?;
        let recon = sys.evaluate(&exp.digits);
        from_expansion(exp, recon, z)
    } else if let Some(q) = &args.quat {
        let preset: LatticePreset = args.lattice.parse()?;
        let sys = preset_system(Quaternion::new(q[0], q[1], q[2], q[3]), &preset, tol)?.with_policy(pol);
        let z = point(&args.z, 4)?;
        let exp = sys.expand(z, args.n)?;
        let recon = sys.evaluate(&exp.digits);
        from_expansion(exp, recon, z)
    } else {
        bail!("one of --real, --complex, --quat is required");
    };
    match args.format {
        Some(Format::Json) => println!("{}", serde_json::to_string_pretty(&listing)?),
        Some(Format::Csv) => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(["index", "digit"])?;
            for (i, d) in listing.digits.iter().enumerate() {
                w.write_record([(i + 1).to_string(), d.clone()])?;
            }
            w.flush()?;
        }
        None => {
            let sep = if args.real.is_some() { " " } else { ", " };
            println!("digits: {}", listing.digits.join(sep));
            println!("reconstruction error: {}", fmt_sig(listing.reconstruction_error, 12));
            if let Some(c) = listing.cycle {
                println!("cycle: preperiod {}, period {}", c.preperiod, c.period);
            }
        }
    }
    Ok(())
}
