use std::io::Write;

use anyhow::{bail, ensure, Context, Result};
use bandforge_core::{
    band_structure, bound_states, classify_zeros, density_curve, density_curve_second_kind,
    leading_diagonal, normalization, zeros, BandStructure, BoundStateOptions, CoefficientModel,
    DensityCurve, Error, Region, SecondKindSeed,
};

use crate::cli::{BandsArgs, BoundStatesArgs, Common, DensityArgs, Format, ZerosArgs};
use crate::format::{cell, fixed10, general};
use crate::model;

/// Exit status for merged bands.
pub const EXIT_MERGED: u8 = 2;
/// Exit status for bound-state queries on a gapless model.
pub const EXIT_NO_GAPS: u8 = 3;

const VALIDATION_PREFIX: usize = 10_000;

fn load(common: &Common) -> Result<CoefficientModel> {
    let m = match (&common.model, &common.model_file) {
        (_, Some(path)) => model::load_model_file(path)?,
        (Some(name), None) => model::builtin(name, common.alpha, common.beta, common.gamma)?,
        (None, None) => bail!("either --model or --model-file is required"),
    };
    for note in model::check(&m, VALIDATION_PREFIX.max(common.depth + 2))? {
        eprintln!("note: {note}");
    }
    ensure!(common.depth >= 1, "--depth must be at least 1");
    Ok(m)
}

fn tolerance(name: &str, value: f64) -> Result<()> {
    ensure!(
        value > 0.0 && value < 1.0,
        "{name} must lie in (0, 1), got {value}"
    );
    Ok(())
}

fn label(r: Region) -> String {
    match r {
        Region::Band(j) => format!("band{}", j + 1),
        Region::Gap(j) => format!("gap{}", j + 1),
        Region::Exterior => "exterior".into(),
    }
}

pub fn bands(args: &BandsArgs, out: &mut dyn Write) -> Result<u8> {
    let m = load(&args.common)?;
    let s = match band_structure(&m) {
        Ok(s) => s,
        Err(Error::MergedBands { roots }) => {
            let edges: Vec<_> = roots.iter().map(|&x| fixed10(x)).collect();
            writeln!(out, "model: {}", m.label())?;
            writeln!(
                out,
                "bands merged: only {} band edges found: {}",
                roots.len(),
                edges.join(" ")
            )?;
            return Ok(EXIT_MERGED);
        }
        Err(e) => return Err(e.into()),
    };
    match args.common.format.unwrap_or(Format::Text) {
        Format::Text => write_bands_text(&m, &s, out)?,
        Format::Csv => {
            writeln!(out, "kind,index,lower,upper")?;
            for (j, (lo, hi)) in s.bands().into_iter().enumerate() {
                writeln!(out, "band,{},{},{}", j + 1, cell(lo), cell(hi))?;
            }
            for (j, (lo, hi)) in s.gaps().into_iter().enumerate() {
                writeln!(out, "gap,{},{},{}", j + 1, cell(lo), cell(hi))?;
            }
        }
    }
    Ok(if s.merged_gaps().is_empty() {
        0
    } else {
        EXIT_MERGED
    })
}

fn write_bands_text(m: &CoefficientModel, s: &BandStructure, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "model: {}", m.label())?;
    writeln!(out, "K = {}", s.period())?;
    if s.is_unbounded() {
        writeln!(out, "outer bands extend to infinity")?;
    }
    let edges: Vec<_> = s.boundaries().iter().map(|&x| fixed10(x)).collect();
    writeln!(out, "boundaries: {}", edges.join(" "))?;
    for (j, (lo, hi)) in s.bands().into_iter().enumerate() {
        writeln!(out, "band {}: [{}, {}]", j + 1, fixed10(lo), fixed10(hi))?;
    }
    for (j, (lo, hi)) in s.gaps().into_iter().enumerate() {
        let note = if s.merged_gaps().contains(&j) {
            "  (merged)"
        } else {
            ""
        };
        writeln!(
            out,
            "gap {}: ({}, {}){note}",
            j + 1,
            fixed10(lo),
            fixed10(hi)
        )?;
    }
    Ok(())
}

/// Grid range covering the spectrum with a 10% margin.
fn default_range(s: &BandStructure) -> (f64, f64) {
    let b = s.boundaries();
    let (mut lo, mut hi) = (b[0], b[b.len() - 1]);
    if !lo.is_finite() || !hi.is_finite() {
        // unbounded: show the inner structure generously
        let inner = &b[1..b.len() - 1];
        let span = (inner[inner.len() - 1] - inner[0]).max(1.0);
        lo = inner[0] - 2.0 * span;
        hi = inner[inner.len() - 1] + 2.0 * span;
    }
    let pad = 0.1 * (hi - lo);
    (lo - pad, hi + pad)
}

pub fn density(args: &DensityArgs, out: &mut dyn Write) -> Result<u8> {
    let m = load(&args.common)?;
    let (dlo, dhi) = default_range(&band_structure(&m)?);
    let (emin, emax) = (args.emin.unwrap_or(dlo), args.emax.unwrap_or(dhi));
    let depth = args.common.depth;
    let curve = match &args.second_kind {
        Some(text) => {
            let a0 = leading_diagonal(&m)?;
            let (s, t) = model::parse_seed(text, a0)?;
            density_curve_second_kind(&m, SecondKindSeed { s, t }, emin, emax, args.points, depth)?
        }
        None => density_curve(&m, emin, emax, args.points, depth)?,
    };
    match args.common.format.unwrap_or(Format::Csv) {
        Format::Csv => write_density_csv(&curve, out)?,
        Format::Text => {
            writeln!(out, "# model: {}", curve.model_label)?;
            writeln!(out, "# depth: {}", curve.depth)?;
            if args.second_kind.is_some() {
                writeln!(out, "# second kind")?;
            }
            writeln!(out, "{:>20} {:>20}", "E", "rho")?;
            for i in 0..curve.grid.len() {
                let note = if curve.flagged[i] {
                    "  nudged off pole"
                } else {
                    ""
                };
                writeln!(
                    out,
                    "{:>20} {:>20}{note}",
                    cell(curve.grid[i]),
                    cell(curve.rho[i])
                )?;
            }
        }
    }
    Ok(0)
}

pub fn write_density_csv(curve: &DensityCurve, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "E,rho")?;
    for i in 0..curve.grid.len() {
        write!(out, "{},{}", cell(curve.grid[i]), cell(curve.rho[i]))?;
        if curve.flagged[i] {
            write!(out, ",# nudged off pole")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn zero_report(args: &ZerosArgs, out: &mut dyn Write) -> Result<u8> {
    let m = load(&args.common)?;
    tolerance("--edge-tol", args.edge_tol)?;
    ensure!(!args.orders.is_empty(), "--orders needs at least one order");
    let s = band_structure(&m)?;
    let format = args.common.format.unwrap_or(Format::Text);
    if format == Format::Csv {
        writeln!(out, "order,zero,label")?;
    } else {
        writeln!(out, "model: {}", m.label())?;
    }
    for &n in &args.orders {
        ensure!(n >= 1, "polynomial orders must be at least 1");
        let r = classify_zeros(&zeros(&m, n)?, &s, args.edge_tol);
        match format {
            Format::Csv => {
                for (z, l) in r.zeros.iter().zip(&r.labels) {
                    writeln!(out, "{n},{},{}", cell(*z), label(*l))?;
                }
            }
            Format::Text => {
                writeln!(
                    out,
                    "order {n}: {} zeros, {} in gaps, {} exterior",
                    r.zeros.len(),
                    r.gap_zero_count,
                    r.exterior_count()
                )?;
                for (z, l) in r.zeros.iter().zip(&r.labels) {
                    writeln!(out, "  {:>14}  {}", fixed10(*z), label(*l))?;
                }
            }
        }
    }
    Ok(0)
}

fn parity(class: usize) -> &'static str {
    if class % 2 == 0 {
        "even"
    } else {
        "odd"
    }
}

pub fn boundstates(args: &BoundStatesArgs, out: &mut dyn Write) -> Result<u8> {
    let m = load(&args.common)?;
    tolerance("--tol-stab", args.tol_stab)?;
    tolerance("--edge-tol", args.edge_tol)?;
    tolerance("--quad-tol", args.quad_tol)?;
    let s = band_structure(&m)?;
    if s.period() == 1 {
        eprintln!(
            "{} has a single band and no gaps, so there are no gap zeros to follow",
            m.label()
        );
        return Ok(EXIT_NO_GAPS);
    }
    let opts = BoundStateOptions {
        base_order: args.base_order,
        steps: args.steps,
        tol_stab: args.tol_stab,
        edge_tol: args.edge_tol,
        depth: args.common.depth,
    };
    let r = bound_states(&m, &opts).context("bound-state search")?;
    let class_only = r.class_only();
    let k = r.period;
    match args.common.format.unwrap_or(Format::Text) {
        Format::Csv => {
            writeln!(out, "kind,energy,gap,classes,weight,spread")?;
            for b in &r.system_bound_states {
                let spread = b
                    .members
                    .iter()
                    .map(|&i| r.candidates[i].spread)
                    .fold(0.0, f64::max);
                let classes: Vec<_> = b
                    .members
                    .iter()
                    .map(|&i| r.candidates[i].class.to_string())
                    .collect();
                writeln!(
                    out,
                    "system,{},{},{},{},{}",
                    cell(b.energy),
                    b.gap + 1,
                    classes.join(";"),
                    cell(b.weight),
                    cell(spread)
                )?;
            }
            for c in &class_only {
                writeln!(
                    out,
                    "class-only,{},{},{},,{}",
                    cell(c.energy),
                    c.gap + 1,
                    c.class,
                    cell(c.spread)
                )?;
            }
        }
        Format::Text => {
            writeln!(out, "model: {}", m.label())?;
            for (orders, class) in r.orders.iter().zip(0..) {
                let list: Vec<_> = orders.iter().map(|o| o.to_string()).collect();
                writeln!(
                    out,
                    "class {}: orders {}",
                    orders.first().map_or(class, |o| o % k),
                    list.join(" ")
                )?;
            }
            if r.system_bound_states.is_empty() {
                let mut line = format!(
                    "no system bound state; {} class-only stable zero{}",
                    class_only.len(),
                    if class_only.len() == 1 { "" } else { "s" }
                );
                if k == 2
                    && !class_only.is_empty()
                    && class_only.iter().all(|c| c.class == class_only[0].class)
                {
                    line.push_str(&format!(" ({})", parity(class_only[0].class)));
                }
                writeln!(out, "{line}")?;
            } else {
                writeln!(out, "system bound states: {}", r.system_bound_states.len())?;
                for b in &r.system_bound_states {
                    writeln!(
                        out,
                        "  E = {}  weight = {}  gap {}",
                        fixed10(b.energy),
                        general(b.weight, 10),
                        b.gap + 1
                    )?;
                }
                writeln!(out, "class-only stable zeros: {}", class_only.len())?;
            }
            for c in &class_only {
                let extra = if k == 2 {
                    format!(" ({})", parity(c.class))
                } else {
                    String::new()
                };
                writeln!(
                    out,
                    "  E = {}  gap {}  class {}{extra}  spread {}",
                    fixed10(c.energy),
                    c.gap + 1,
                    c.class,
                    general(c.spread, 3)
                )?;
            }
            let counts: Vec<_> = r.stable_counts().iter().map(|c| c.to_string()).collect();
            writeln!(out, "stable gap zeros per class: {}", counts.join("/"))?;
            if !m.is_unbounded() {
                match normalization(&m, args.common.depth, args.quad_tol) {
                    Ok(n) => writeln!(
                        out,
                        "sum rule: continuum {} + discrete {} = {}",
                        general(n.continuum, 10),
                        general(n.discrete, 10),
                        general(n.total(), 10)
                    )?,
                    Err(Error::SumRuleViolated {
                        continuum,
                        discrete,
                    }) => writeln!(
                        out,
                        "sum rule violated: continuum {} + discrete {} = {}",
                        general(continuum, 10),
                        general(discrete, 10),
                        general(continuum + discrete, 10)
                    )?,
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    Ok(0)
}
