//! Small helpers shared by the CSV writers.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

/// 17 significant digits, enough for an exact `f64` round trip.
pub fn fmt_f64(x: f64) -> String {
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

/// `dir/name` when a directory is given (created if needed), stdout otherwise.
pub fn open_output(dir: Option<&Path>, name: &str) -> io::Result<Box<dyn Write>> {
    match dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            Ok(Box::new(BufWriter::new(File::create(dir.join(name))?)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, 0.721_347_520_444_481_7, 1e-300, 12345.678] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().replace(['.', '-'], "");
            assert_eq!(mantissa.len(), 17);
        }
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        assert_eq!(fmt_f64(f64::NAN), "nan");
    }
}
