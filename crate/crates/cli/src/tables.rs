use std::io::Write;

use anyhow::{anyhow, Result};
use beta_arena::complex::{order_two_region, scan_regions, RegionPiece};
use beta_arena::game::{complex_threshold, real_threshold};
use beta_arena::numeric::fmt_sig;
use beta_arena::real::{block_string, RealBase, DEFAULT_DEPTH};
use beta_arena::{Execution, Tolerance};
use serde::Serialize;

use crate::expand::parse_base;
use crate::{AdmissibleArgs, Curve, Format, RegionsArgs, ScanArgs};

fn num(x: f64) -> String {
    fmt_sig(x, 12)
}

fn csv_out() -> csv::Writer<std::io::Stdout> {
    csv::Writer::from_writer(std::io::stdout())
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct BlockRow {
    block: String,
    value: f64,
}

#[derive(Serialize)]
struct IntervalRow {
    block: String,
    lo: f64,
    hi: f64,
    full_length: bool,
}

pub fn admissible(args: &AdmissibleArgs) -> Result<()> {
    let base = RealBase::with_tolerance(parse_base(&args.b)?, Tolerance::from_env()?, DEFAULT_DEPTH)?;
    if args.intervals {
        let rows: Vec<IntervalRow> = base
            .cylinder_intervals(args.d, args.k)?
            .into_iter()
            .map(|iv| IntervalRow { block: iv.block_string(), lo: iv.lo, hi: iv.hi, full_length: iv.full_length })
            .collect();
        match args.format {
            Format::Json => print_json(&rows)?,
            Format::Csv => {
                let mut w = csv_out();
                w.write_record(["block", "lo", "hi", "full_length"])?;
                for r in rows {
                    w.write_record([r.block, num(r.lo), num(r.hi), r.full_length.to_string()])?;
                }
                w.flush()?;
            }
        }
        return Ok(());
    }
    let rows: Vec<BlockRow> = base
        .enumerate_admissible(args.n)?
        .iter()
        .map(|b| BlockRow { block: block_string(b), value: base.block_value(b) })
        .collect();
    match args.format {
        Format::Json => print_json(&rows)?,
        Format::Csv => {
            let mut w = csv_out();
            w.write_record(["block", "value"])?;
            for r in rows {
                w.write_record([r.block, num(r.value)])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct AngleRegion {
    theta: f64,
    region: Vec<RegionPiece>,
}

pub fn regions(args: &RegionsArgs) -> Result<()> {
    if args.g {
        let thetas = args.theta.values();
        let regions: Vec<AngleRegion> = thetas
            .iter()
            .map(|t| Ok(AngleRegion { theta: *t, region: order_two_region(*t, args.cap)? }))
            .collect::<Result<_>>()?;
        if regions.len() == 1 {
            print_json(&regions[0].region)?;
        } else {
            print_json(&regions)?;
        }
        return Ok(());
    }
    let alphas = args.alpha.values();
    if let Some(a) = alphas.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
        return Err(anyhow!("alpha grid leaves (0, 1) at {a}"));
    }
    let mut w = csv_out();
    match args.curve.expect("clap enforces curve or G") {
        Curve::A => {
            w.write_record(["b", "K", "alpha", "threshold"])?;
            for name in &args.b {
                let base = RealBase::new(parse_base(name)?)?;
                let kk = match args.zero_run {
                    Some(k) => k,
                    None => base
                        .tail_shape()
                        .zero_run()
                        .ok_or_else(|| anyhow!("zero-run bound of base {name} is unknown; pass --K"))?,
                };
                for a in &alphas {
                    let v = real_threshold(base.value(), kk, *a);
                    w.write_record([num(base.value()), kk.to_string(), num(*a), num(v)])?;
                }
            }
        }
        Curve::F => {
            w.write_record(["r", "alpha", "threshold"])?;
            for r in &args.r {
                if !(*r > 1.0) {
                    return Err(anyhow!("modulus must exceed 1, got {r}"));
                }
                for a in &alphas {
                    w.write_record([num(*r), num(*a), num(complex_threshold(*r, *a))])?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn scan(args: &ScanArgs) -> Result<()> {
    let rs = args.r.values();
    if let Some(r) = rs.iter().find(|r| !(**r > 1.0)) {
        return Err(anyhow!("modulus grid must stay above 1, got {r}"));
    }
    let thetas = args.theta.values();
    let exec = if args.sequential { Execution::Sequential } else { Execution::Parallel };
    let cells = scan_regions(&rs, &thetas, exec);
    let mut w = csv_out();
    w.write_record(["theta", "r", "square", "N", "C2_holds", "ambiguous"])?;
    for c in cells {
        let (square, n) = match c.shape {
            Some(s) => (s.square.to_string(), s.n.to_string()),
            None => (String::new(), String::new()),
        };
        let c2 = c.order_two.map(|b| b.to_string()).unwrap_or_default();
        w.write_record([num(c.theta), num(c.r), square, n, c2, c.shape.is_none().to_string()])?;
    }
    w.flush()?;
    Ok(())
}
