//! Potential files, deterministic float formatting and report serialization.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, Result};
use crate::invariants::InvariantSet;
use crate::potential::{PotentialSpec, Segment};
use crate::scalar::Real;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SegmentFile {
    width: f64,
    value: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PotentialFile {
    #[serde(default)]
    origin: f64,
    segments: Vec<SegmentFile>,
}

/// Parses `{"origin": x, "segments": [{"width": d, "value": v}, ...]}`.
///
/// Syntax errors carry the line and column; invalid widths or values surface
/// as the corresponding validation error.
pub fn parse_potential<T: Real>(text: &str) -> Result<PotentialSpec<T>> {
    let file: PotentialFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let conv = |x: f64| T::from_f64(x).unwrap_or_else(T::nan);
    PotentialSpec::new(
        conv(file.origin),
        file.segments
            .iter()
            .map(|s| Segment::new(conv(s.width), conv(s.value)))
            .collect(),
    )
}

/// 17 significant digits in scientific notation; round-trips every `f64`.
pub fn format_float<T: Real>(x: T) -> String {
    format!("{:.16e}", crate::potential::to_f64(x))
}

/// Pretty JSON whose floats go through [`format_float`].
#[derive(Default)]
pub struct FixedFloatFormatter {
    inner: PrettyFormatter<'static>,
}

impl Formatter for FixedFloatFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_float(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        w.write_all(format_float(value).as_bytes())
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

/// Serializes `value` as pretty JSON with fixed float formatting and a trailing newline.
pub fn to_json_string<S: Serialize + ?Sized>(value: &S) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloatFormatter::default());
    value
        .serialize(&mut ser)
        .expect("in-memory serialization cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub const INVARIANT_CSV_HEADER: [&str; 10] = [
    "a", "b", "sigma", "rho", "ReQ", "ImQ", "ReQt", "ImQt", "J", "residual",
];

pub fn invariant_csv_row<T: Real>(inv: &InvariantSet<T>) -> Vec<String> {
    [
        inv.domain.a,
        inv.domain.b,
        inv.transform.sigma(),
        inv.transform.rho(),
        inv.q.re,
        inv.q.im,
        inv.q_tilde.re,
        inv.q_tilde.im,
        inv.current,
        inv.constancy_residual,
    ]
    .iter()
    .map(|&x| format_float(x))
    .collect()
}
