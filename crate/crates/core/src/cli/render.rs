//! `geomatch render`: SVG drawing of an instance and a cover.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::Args;

use crate::error::{Error, Result};
use crate::io::SolutionFile;
use crate::model::{Instance, PairSet, Point};

use super::{read_instance, write_output};

#[derive(Args, Debug, Clone)]
pub struct RenderArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub solution: PathBuf,
    /// Canvas width and height in pixels.
    #[arg(long, default_value_t = 512)]
    pub size: u32,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

const MARGIN: f64 = 16.0;
const GLYPH: f64 = 3.0;

/// `S` as circles, `T` as squares, pairs as segments. Output depends only
/// on the inputs.
pub fn render_svg(inst: &Instance, pairs: &PairSet, size: u32) -> Result<String> {
    pairs.check_indices(inst).map_err(|e| Error::InvalidInput(format!("solution does not match instance: {e}")))?;
    let all: Vec<Point> = inst.s().iter().chain(inst.t()).copied().collect();
    let (mut lo, mut hi) = (all[0], all[0]);
    for p in &all {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let span = (hi.x - lo.x).max(hi.y - lo.y);
    let side = size as f64;
    let scale = if span > 0.0 { (side - 2.0 * MARGIN) / span } else { 1.0 };
    let map = |p: &Point| (MARGIN + (p.x - lo.x) * scale, side - MARGIN - (p.y - lo.y) * scale);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="{size}" height="{size}" fill="white"/>"#).unwrap();
    writeln!(out, r##"<g class="pairs" stroke="#888888" stroke-width="1">"##).unwrap();
    for (s, t) in pairs.iter() {
        let (x1, y1) = map(&inst.s()[s]);
        let (x2, y2) = map(&inst.t()[t]);
        writeln!(out, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#).unwrap();
    }
    writeln!(out, "</g>").unwrap();
    writeln!(out, r##"<g class="s" fill="#1f77b4">"##).unwrap();
    for p in inst.s() {
        let (x, y) = map(p);
        writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{GLYPH}"/>"#).unwrap();
    }
    writeln!(out, "</g>").unwrap();
    writeln!(out, r##"<g class="t" fill="#d62728">"##).unwrap();
    for p in inst.t() {
        let (x, y) = map(p);
        let (x, y) = (x - GLYPH, y - GLYPH);
        let w = 2.0 * GLYPH;
        writeln!(out, r#"<rect x="{x:.3}" y="{y:.3}" width="{w}" height="{w}"/>"#).unwrap();
    }
    writeln!(out, "</g>").unwrap();
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}

pub fn cmd_render(a: &RenderArgs) -> Result<()> {
    let inst = read_instance(&a.instance)?;
    let sol = SolutionFile::from_json(&fs::read_to_string(&a.solution)?)?;
    let svg = render_svg(&inst, &sol.pair_set(), a.size)?;
    write_output(a.out.as_deref(), &svg)
}
