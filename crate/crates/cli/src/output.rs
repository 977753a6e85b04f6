//! Field records and their JSON-lines and CSV encodings.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter};

use qpdiff_core::{Complex64, TotalField, WaveLabel};

use crate::config::Node;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cplx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cplx {
    fn from(z: Complex64) -> Self {
        Cplx { re: z.re, im: z.im }
    }
}

impl Cplx {
    pub fn norm(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub label: String,
    pub value: Cplx,
    pub active: bool,
    pub penumbra: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldRecord {
    pub x: [f64; 3],
    pub direction: Direction,
    pub components: Vec<ComponentRecord>,
    pub scattered: Cplx,
    pub total: Cplx,
    pub flags: Vec<String>,
}

impl FieldRecord {
    pub fn new(node: &Node, field: &TotalField) -> Self {
        FieldRecord {
            x: node.x,
            direction: Direction { theta: node.theta, phi: node.phi },
            components: field
                .breakdown
                .iter()
                .map(|c| ComponentRecord {
                    label: c.label.name().to_string(),
                    value: c.value.into(),
                    active: c.active,
                    penumbra: c.penumbra,
                })
                .collect(),
            scattered: field.scattered.into(),
            total: field.total.into(),
            flags: field.flags.iter().map(|f| f.to_string()).collect(),
        }
    }

    pub fn component(&self, label: WaveLabel) -> Option<&ComponentRecord> {
        self.components.iter().find(|c| c.label == label.name())
    }
}

/// Compact JSON with every float written with 17 significant digits.
#[derive(Debug, Default, Clone, Copy)]
pub struct RoundTripFormatter;

impl Formatter for RoundTripFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        CompactFormatter.write_f32(writer, value)
    }
}

pub fn write_json<W: Write, T: Serialize>(w: &mut W, value: &T) -> io::Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(&mut *w, RoundTripFormatter);
    value.serialize(&mut ser).map_err(io::Error::from)
}

pub fn write_jsonl<W: Write>(w: &mut W, records: &[FieldRecord]) -> io::Result<()> {
    for r in records {
        write_json(w, r)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// CSV view of the records. Flags are dropped.
pub fn write_csv<W: Write>(w: W, records: &[FieldRecord]) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let labels: Vec<String> = records.first().map(|r| r.components.iter().map(|c| c.label.clone()).collect()).unwrap_or_default();
    let mut header: Vec<String> = ["x1", "x2", "x3", "theta", "phi"].map(String::from).to_vec();
    for l in &labels {
        header.extend([format!("{l}_re"), format!("{l}_im"), format!("{l}_active"), format!("{l}_penumbra")]);
    }
    header.extend(["scattered_re", "scattered_im", "total_re", "total_im"].map(String::from));
    out.write_record(&header)?;
    let f = |v: f64| format!("{v:.16e}");
    for r in records {
        let mut row: Vec<String> = r.x.iter().map(|&v| f(v)).collect();
        row.extend([f(r.direction.theta), f(r.direction.phi)]);
        for c in &r.components {
            row.extend([f(c.value.re), f(c.value.im), c.active.to_string(), c.penumbra.to_string()]);
        }
        row.extend([f(r.scattered.re), f(r.scattered.im), f(r.total.re), f(r.total.im)]);
        out.write_record(&row)?;
    }
    out.flush()
}
