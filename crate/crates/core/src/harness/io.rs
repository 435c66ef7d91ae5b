//! Record serialization. One rule keeps CSV and JSON interchangeable:
//! every real is rendered by [`fmt_real`] with 17 significant digits, in
//! both formats, so the two serializations of a record carry identical
//! values and runs are byte-reproducible.

use std::io;

use serde::Serialize;

/// 17 significant digits, scientific notation. Enough to round-trip any
/// f64 exactly.
pub fn fmt_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

pub(crate) fn u128_as_string<S: serde::Serializer>(
    value: &u128,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

/// A flat result row with a stable CSV column order.
pub trait Record: Serialize {
    const CSV_HEADER: &'static [&'static str];

    fn csv_row(&self) -> Vec<String>;
}

/// Renders records as CSV: one header line, one line per record, `\n`
/// endings.
pub fn to_csv<R: Record>(records: &[R]) -> String {
    let mut out = String::new();
    out.push_str(&R::CSV_HEADER.join(","));
    out.push('\n');
    for r in records {
        let row = r.csv_row();
        debug_assert_eq!(row.len(), R::CSV_HEADER.len());
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Compact JSON except that every float goes through [`fmt_real`].
struct SigFigFormatter;

impl serde_json::ser::Formatter for SigFigFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        writer.write_all(fmt_real(value).as_bytes())
    }
}

/// Renders any serializable value (typically a record slice) as JSON with
/// the 17-significant-digit float policy, plus a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFigFormatter);
    value
        .serialize(&mut ser)
        .expect("record serialization cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt_real_has_17_significant_digits() {
        assert_eq!(fmt_real(0.0), "0.0000000000000000e0");
        assert_eq!(fmt_real(1.0), "1.0000000000000000e0");
        // 1 digit + 16 after the point
        let s = fmt_real(34_091.955_988_540_44);
        let mantissa = s.split('e').next().unwrap();
        assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
        // round trip
        for x in [0.1 + 0.2, 1.0 / 3.0, 198.40866916543746, f64::MIN_POSITIVE] {
            assert_eq!(fmt_real(x).parse::<f64>().unwrap(), x, "{x}");
        }
    }

    #[test]
    fn json_floats_match_csv_floats() {
        #[derive(Serialize)]
        struct Row {
            v: f64,
        }
        let rows = [Row { v: 1.0 / 3.0 }];
        let json = to_json(&rows[..]);
        assert!(json.contains(&fmt_real(1.0 / 3.0)), "{json}");
    }
}
