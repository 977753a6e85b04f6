//! Static SVG views of field records: an in-plane heat map with the
//! activity boundaries of every component, or a polar directivity cut.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::CliError;
use crate::output::FieldRecord;

const FLOOR_DB: f64 = -60.0;
const SIZE: f64 = 640.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 6] = ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628"];

/// What to draw from each record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Quantity {
    Total,
    Scattered,
    Component(String),
}

impl Quantity {
    pub fn parse(s: &str) -> Self {
        match s.to_ascii_lowercase().as_str() {
            "total" => Quantity::Total,
            "scattered" => Quantity::Scattered,
            _ => Quantity::Component(s.to_ascii_uppercase()),
        }
    }

    fn value(&self, r: &FieldRecord) -> Result<f64, CliError> {
        match self {
            Quantity::Total => Ok(r.total.norm()),
            Quantity::Scattered => Ok(r.scattered.norm()),
            Quantity::Component(l) => r
                .components
                .iter()
                .find(|c| &c.label == l)
                .map(|c| c.value.norm())
                .ok_or_else(|| CliError::Schema(format!("no component {l} in the records"))),
        }
    }

    fn name(&self) -> String {
        match self {
            Quantity::Total => "|u|".into(),
            Quantity::Scattered => "|u_s|".into(),
            Quantity::Component(l) => format!("|u_{l}|"),
        }
    }
}

pub fn read_records(text: &str) -> Result<Vec<FieldRecord>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let r: FieldRecord =
            serde_json::from_str(line).map_err(|e| CliError::Schema(format!("line {}: {e}", i + 1)))?;
        out.push(r);
    }
    if out.is_empty() {
        return Err(CliError::Schema("no field records in the input".into()));
    }
    Ok(out)
}

fn decibels(v: f64, peak: f64) -> f64 {
    if v <= 0.0 || peak <= 0.0 {
        FLOOR_DB
    } else {
        (20.0 * (v / peak).log10()).max(FLOOR_DB)
    }
}

/// Perceptually ordered dark-to-bright ramp.
fn colour(t: f64) -> String {
    const STOPS: [(f64, [f64; 3]); 5] = [
        (0.0, [68.0, 1.0, 84.0]),
        (0.25, [59.0, 82.0, 139.0]),
        (0.5, [33.0, 145.0, 140.0]),
        (0.75, [94.0, 201.0, 98.0]),
        (1.0, [253.0, 231.0, 37.0]),
    ];
    let t = t.clamp(0.0, 1.0);
    let j = STOPS.iter().position(|s| s.0 >= t).unwrap_or(4).max(1);
    let (t0, c0) = STOPS[j - 1];
    let (t1, c1) = STOPS[j];
    let s = (t - t0) / (t1 - t0);
    let c: Vec<u8> = (0..3).map(|i| (c0[i] + s * (c1[i] - c0[i])).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

fn sorted_unique(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn index_of(axis: &[f64], v: f64) -> usize {
    axis.iter().position(|&a| a == v).expect("value taken from the same records")
}

fn header(title: &str) -> String {
    let mut s = String::new();
    let w = SIZE + 2.0 * MARGIN + 140.0;
    let h = SIZE + 2.0 * MARGIN;
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(s, r#"<text x="{MARGIN}" y="30" font-family="sans-serif" font-size="16">{title}</text>"#).unwrap();
    s
}

fn legend(s: &mut String, labels: &[String]) {
    let x = SIZE + 2.0 * MARGIN;
    for (i, l) in labels.iter().enumerate() {
        let y = MARGIN + 20.0 * i as f64;
        let c = PALETTE[i % PALETTE.len()];
        writeln!(s, r#"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="{c}" stroke-width="3"/>"#, x + 24.0).unwrap();
        writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">{l}</text>"#, x + 30.0, y + 4.0)
            .unwrap();
    }
}

/// Heat map of an `x3 = 0` sweep in decibels below the peak, with the
/// activity boundary of each component traced between grid cells.
pub fn planar_svg(records: &[FieldRecord], q: &Quantity) -> Result<String, CliError> {
    let xs = sorted_unique(records.iter().map(|r| r.x[0]));
    let ys = sorted_unique(records.iter().map(|r| r.x[1]));
    if xs.len() * ys.len() != records.len() {
        return Err(CliError::Schema("planar records do not form a rectangular grid".into()));
    }
    let values: Vec<f64> = records.iter().map(|r| q.value(r)).collect::<Result<_, _>>()?;
    let peak = values.iter().cloned().fold(0.0, f64::max);
    let (nx, ny) = (xs.len(), ys.len());
    let cw = SIZE / nx as f64;
    let ch = SIZE / ny as f64;
    let mut cell = vec![usize::MAX; nx * ny];
    for (k, r) in records.iter().enumerate() {
        cell[index_of(&ys, r.x[1]) * nx + index_of(&xs, r.x[0])] = k;
    }
    let mut s = header(&format!("{} at x3 = 0, dB below peak (floor {FLOOR_DB} dB)", q.name()));
    for j in 0..ny {
        for i in 0..nx {
            let v = values[cell[j * nx + i]];
            let t = 1.0 - decibels(v, peak) / FLOOR_DB;
            let x = MARGIN + i as f64 * cw;
            let y = MARGIN + (ny - 1 - j) as f64 * ch;
            writeln!(s, r#"<rect x="{x:.3}" y="{y:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#, cw + 0.2, ch + 0.2, colour(t))
                .unwrap();
        }
    }
    let labels: Vec<String> = records[0].components.iter().map(|c| c.label.clone()).collect();
    for (li, label) in labels.iter().enumerate() {
        let active = |i: usize, j: usize| {
            records[cell[j * nx + i]].components.iter().find(|c| &c.label == label).map(|c| c.active).unwrap_or(false)
        };
        let c = PALETTE[li % PALETTE.len()];
        let mut path = String::new();
        for j in 0..ny {
            for i in 0..nx {
                let left = MARGIN + i as f64 * cw;
                let top = MARGIN + (ny - 1 - j) as f64 * ch;
                if i + 1 < nx && active(i, j) != active(i + 1, j) {
                    write!(path, "M{:.3} {:.3}V{:.3}", left + cw, top, top + ch).unwrap();
                }
                if j + 1 < ny && active(i, j) != active(i, j + 1) {
                    write!(path, "M{:.3} {:.3}H{:.3}", left, top, left + cw).unwrap();
                }
            }
        }
        if !path.is_empty() {
            writeln!(s, r#"<path d="{path}" stroke="{c}" stroke-width="2" fill="none"/>"#).unwrap();
        }
    }
    legend(&mut s, &labels);
    let (x0, x1, y0, y1) = (xs[0], xs[nx - 1], ys[0], ys[ny - 1]);
    let base = MARGIN + SIZE;
    writeln!(s, r#"<text x="{MARGIN}" y="{}" font-family="sans-serif" font-size="12">x1 = {x0}</text>"#, base + 20.0).unwrap();
    writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="end">x1 = {x1}</text>"#, base, base + 20.0).unwrap();
    writeln!(s, r#"<text x="{}" y="{base}" font-family="sans-serif" font-size="12" text-anchor="end">x2 = {y0}</text>"#, MARGIN - 5.0).unwrap();
    writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="end">x2 = {y1}</text>"#, MARGIN - 5.0, MARGIN + 12.0).unwrap();
    s.push_str("</svg>\n");
    Ok(s)
}

/// Polar plot of the quantity against `phi` on the cone of records whose
/// `theta` is closest to the requested one, with ticks where a component
/// switches on or off.
pub fn directivity_svg(records: &[FieldRecord], q: &Quantity, theta: Option<f64>) -> Result<String, CliError> {
    let thetas = sorted_unique(records.iter().map(|r| r.direction.theta));
    let target = theta.unwrap_or(thetas[thetas.len() / 2]);
    let pick = thetas
        .iter()
        .cloned()
        .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
        .expect("records are not empty");
    let mut cut: Vec<&FieldRecord> = records.iter().filter(|r| r.direction.theta == pick).collect();
    cut.sort_by(|a, b| a.direction.phi.total_cmp(&b.direction.phi));
    let values: Vec<f64> = cut.iter().map(|r| q.value(r)).collect::<Result<_, _>>()?;
    let peak = values.iter().cloned().fold(0.0, f64::max);
    let cx = MARGIN + SIZE / 2.0;
    let cy = MARGIN + SIZE / 2.0;
    let radius = SIZE / 2.0;
    let at = |db: f64, phi: f64| {
        let rho = radius * (1.0 - db / FLOOR_DB);
        (cx + rho * phi.cos(), cy - rho * phi.sin())
    };
    let mut s = header(&format!("{} at theta = {pick:.4}, dB below peak", q.name()));
    for db in [0.0, -20.0, -40.0] {
        let rho = radius * (1.0 - db / FLOOR_DB);
        writeln!(s, r##"<circle cx="{cx}" cy="{cy}" r="{rho:.3}" fill="none" stroke="#bbbbbb"/>"##).unwrap();
        writeln!(s, r##"<text x="{:.3}" y="{cy}" font-family="sans-serif" font-size="10" fill="#777777">{db} dB</text>"##, cx + rho + 2.0)
            .unwrap();
    }
    let pts: Vec<String> = cut
        .iter()
        .zip(&values)
        .map(|(r, &v)| {
            let (x, y) = at(decibels(v, peak), r.direction.phi);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    writeln!(s, r#"<polyline points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#, pts.join(" ")).unwrap();
    let labels: Vec<String> = cut[0].components.iter().map(|c| c.label.clone()).collect();
    for (li, label) in labels.iter().enumerate() {
        let c = PALETTE[li % PALETTE.len()];
        let active = |r: &FieldRecord| r.components.iter().find(|x| &x.label == label).map(|x| x.active).unwrap_or(false);
        for w in cut.windows(2) {
            if active(w[0]) != active(w[1]) {
                let phi = 0.5 * (w[0].direction.phi + w[1].direction.phi);
                let (x0, y0) = at(0.0, phi);
                let (x1, y1) = at(FLOOR_DB * 0.9, phi);
                writeln!(s, r#"<line x1="{x0:.3}" y1="{y0:.3}" x2="{x1:.3}" y2="{y1:.3}" stroke="{c}" stroke-dasharray="4 3"/>"#).unwrap();
            }
        }
    }
    legend(&mut s, &labels);
    s.push_str("</svg>\n");
    Ok(s)
}

/// Reads records from `input` and writes the SVG to `out`. Nothing is
/// written unless the whole plot could be built.
pub fn plot(input: &Path, out: &Path, q: &Quantity, theta: Option<f64>) -> Result<(), CliError> {
    let text = std::fs::read_to_string(input)?;
    let records = read_records(&text)?;
    let planar = records.iter().all(|r| r.x[2] == 0.0);
    let svg = if planar { planar_svg(&records, q)? } else { directivity_svg(&records, q, theta)? };
    std::fs::write(out, svg)?;
    Ok(())
}
