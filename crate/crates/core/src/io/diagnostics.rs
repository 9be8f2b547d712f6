//! Line-delimited diagnostics.
//!
//! ```text
//! # {"admissibility":…,"label":"admissible","config":{…}}
//! t=0.0000000000000000e0 l2=… lp4=… … B22=…
//! # blow-up {"t":…,"what":"…"}
//! ```
//!
//! The header is JSON. Each record line has the fields of
//! [`DiagnosticsRecord::FIELD_NAMES`] in that order, formatted with 17
//! significant digits so parsing gives back the same bits. A trailing
//! `# partial-output` line marks a stream cut short by a write error.

use std::io::Write;

use crate::error::{Error, Result};
use crate::solver::{BlowUp, DiagnosticsRecord, RunHeader, RunOutput};

const BLOW_UP_TAG: &str = "# blow-up ";
const PARTIAL_TAG: &str = "# partial-output";

#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticsStream {
    pub header: RunHeader,
    pub records: Vec<DiagnosticsRecord>,
    pub blow_up: Option<BlowUp>,
    pub partial: bool,
}

pub fn format_record(record: &DiagnosticsRecord) -> String {
    DiagnosticsRecord::FIELD_NAMES
        .iter()
        .zip(record.values())
        .map(|(k, v)| format!("{k}={v:.16e}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn parse_record(line: &str) -> Result<DiagnosticsRecord> {
    let mut values = [0.0; 17];
    let mut fields = line.split_whitespace();
    for (slot, name) in values.iter_mut().zip(DiagnosticsRecord::FIELD_NAMES) {
        let field = fields.next().ok_or_else(|| Error::Record(format!("missing field `{name}`")))?;
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::Record(format!("`{field}` is not key=value")))?;
        if key != name {
            return Err(Error::Record(format!("expected `{name}`, found `{key}`")));
        }
        *slot = value
            .parse()
            .map_err(|_| Error::Record(format!("`{value}` is not a number for `{name}`")))?;
    }
    if let Some(extra) = fields.next() {
        return Err(Error::Record(format!("unexpected trailing field `{extra}`")));
    }
    Ok(DiagnosticsRecord::from_values(values))
}

fn write_lines<W: Write>(out: &mut W, header: &RunHeader, records: &[DiagnosticsRecord], blow_up: Option<&BlowUp>) -> std::io::Result<()> {
    let json = serde_json::to_string(header).map_err(std::io::Error::other)?;
    writeln!(out, "# {json}")?;
    for r in records {
        writeln!(out, "{}", format_record(r))?;
    }
    if let Some(b) = blow_up {
        let json = serde_json::to_string(b).map_err(std::io::Error::other)?;
        writeln!(out, "{BLOW_UP_TAG}{json}")?;
    }
    out.flush()
}

fn emit<W: Write>(out: &mut W, header: &RunHeader, records: &[DiagnosticsRecord], blow_up: Option<&BlowUp>) -> Result<()> {
    write_lines(out, header, records, blow_up).map_err(|e| {
        // best effort; the writer already failed once
        let _ = out.write_all(format!("\n{PARTIAL_TAG}: {e}\n").as_bytes());
        Error::Io(e)
    })
}

/// Header line then one line per record.
pub fn emit_diagnostics<W: Write>(out: &mut W, header: &RunHeader, records: &[DiagnosticsRecord]) -> Result<()> {
    emit(out, header, records, None)
}

/// As [`emit_diagnostics`], plus the blow-up trailer when the run stopped early.
pub fn write_run_output<W: Write>(out: &mut W, run: &RunOutput) -> Result<()> {
    emit(out, &run.header, &run.records, run.blow_up.as_ref())
}

pub fn parse_diagnostics(text: &str) -> Result<DiagnosticsStream> {
    let mut lines = text.lines().enumerate();
    let (_, first) = lines.next().ok_or_else(|| Error::Record("empty stream".into()))?;
    let json = first
        .strip_prefix("# ")
        .ok_or_else(|| Error::Record("first line is not a `# {…}` header".into()))?;
    let header: RunHeader = serde_json::from_str(json).map_err(|e| Error::Record(format!("header: {e}")))?;
    let mut stream = DiagnosticsStream {
        header,
        records: Vec::new(),
        blow_up: None,
        partial: false,
    };
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        if let Some(json) = line.strip_prefix(BLOW_UP_TAG) {
            stream.blow_up = Some(serde_json::from_str(json).map_err(|e| Error::Record(format!("line {}: {e}", i + 1)))?);
        } else if line.starts_with(PARTIAL_TAG) {
            stream.partial = true;
        } else {
            let r = parse_record(line).map_err(|e| Error::Record(format!("line {}: {e}", i + 1)))?;
            stream.records.push(r);
        }
    }
    Ok(stream)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{InitialCondition, SimulationConfig};
    use crate::spectral::VelocityLaw;
    use proptest::prelude::*;

    fn header() -> RunHeader {
        RunHeader::new(&SimulationConfig::new(
            16,
            0.5,
            0.6,
            VelocityLaw::Sqg,
            InitialCondition::PlaneWave { k1: 1, k2: 2, amplitude: 1.0 },
        ))
    }

    fn emit_string(records: &[DiagnosticsRecord]) -> String {
        let mut buf = Vec::new();
        emit_diagnostics(&mut buf, &header(), records).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_is_header_only() {
        let s = emit_string(&[]);
        assert_eq!(s.lines().count(), 1);
        let parsed = parse_diagnostics(&s).unwrap();
        assert_eq!(parsed.header, header());
        assert!(parsed.records.is_empty());
    }

    #[test]
    fn one_record_two_lines() {
        let s = emit_string(&[DiagnosticsRecord::default()]);
        assert_eq!(s.lines().count(), 2);
        assert!(s.lines().nth(1).unwrap().starts_with("t=0.0000000000000000e0 l2="));
    }

    #[test]
    fn special_values_survive() {
        let mut v = [0.0; 17];
        v[1] = f64::INFINITY;
        v[2] = f64::NAN;
        v[3] = -0.0;
        v[4] = f64::MIN_POSITIVE / 4.0;
        let back = parse_record(&format_record(&DiagnosticsRecord::from_values(v))).unwrap().values();
        for (a, b) in v.iter().zip(back) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn malformed_lines() {
        assert!(parse_record("t=1").is_err());
        let good = format_record(&DiagnosticsRecord::default());
        assert!(parse_record(&good.replace("l2=", "L2=")).is_err());
        assert!(parse_record(&format!("{good} extra=1")).is_err());
        assert!(parse_record(&good.replacen("0.0000000000000000e0", "zero", 1)).is_err());
        assert!(parse_diagnostics("t=0").is_err());
    }

    #[test]
    fn blow_up_trailer() {
        let mut buf = Vec::new();
        let b = BlowUp { t: 0.25, what: "non-finite stage".into() };
        emit(&mut buf, &header(), &[DiagnosticsRecord::default()], Some(&b)).unwrap();
        let parsed = parse_diagnostics(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(parsed.blow_up, Some(b));
        assert_eq!(parsed.records.len(), 1);
    }

    struct FailAfter(usize, Vec<u8>);
    impl Write for FailAfter {
        fn write(&mut self, b: &[u8]) -> std::io::Result<usize> {
            if self.0 == 0 {
                // let the marker through
                if b.starts_with(b"\n# partial") {
                    self.1.extend_from_slice(b);
                    return Ok(b.len());
                }
                return Err(std::io::Error::other("disk full"));
            }
            self.0 -= 1;
            self.1.extend_from_slice(b);
            Ok(b.len())
        }
        fn flush(&mut self) -> std::io::Result<()> {
            Ok(())
        }
    }

    #[test]
    fn write_failure_leaves_marker() {
        let mut w = FailAfter(3, Vec::new());
        let records = vec![DiagnosticsRecord::default(); 10];
        assert!(matches!(emit_diagnostics(&mut w, &header(), &records), Err(Error::Io(_))));
        let text = String::from_utf8(w.1).unwrap();
        assert!(text.contains(PARTIAL_TAG));
    }

    proptest! {
        #[test]
        fn bitwise_round_trip(bits in proptest::collection::vec(any::<u64>(), 17)) {
            let mut v = [0.0; 17];
            for (slot, b) in v.iter_mut().zip(&bits) {
                *slot = f64::from_bits(*b);
            }
            let r = DiagnosticsRecord::from_values(v);
            let s = emit_string(&[r]);
            let back = parse_diagnostics(&s).unwrap().records[0].values();
            for (a, b) in v.iter().zip(back) {
                // every NaN payload prints as `NaN`
                if a.is_nan() {
                    prop_assert!(b.is_nan());
                } else {
                    prop_assert_eq!(a.to_bits(), b.to_bits());
                }
            }
        }
    }
}
