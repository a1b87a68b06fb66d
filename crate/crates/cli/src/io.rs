//! Deterministic file formats and atomic writes.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use anyhow::{bail, Context};
use gaborlab::{MagnitudeField, TfGrid};

/// Writes `bytes` to a temporary file next to `path`, then renames it.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating temp file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn fmt_f64(v: f64) -> String {
    ryu::Buffer::new().format(v).to_string()
}

/// `x,omega,value` rows with omega varying fastest.
pub fn grid_csv(field: &MagnitudeField) -> String {
    let g = field.grid();
    let mut out = String::with_capacity(g.len() * 40);
    out.push_str("x,omega,value\n");
    let mut buf = ryu::Buffer::new();
    for i in 0..g.nx {
        let x = buf.format(g.x(i)).to_string();
        for j in 0..g.nw {
            out.push_str(&x);
            out.push(',');
            out.push_str(buf.format(g.w(j)));
            out.push(',');
            out.push_str(buf.format(*field.at(i, j)));
            out.push('\n');
        }
    }
    out
}

/// Inverse of [`grid_csv`].
pub fn parse_grid_csv(text: &str) -> anyhow::Result<MagnitudeField> {
    let mut lines = text.lines();
    if lines.next() != Some("x,omega,value") {
        bail!("missing x,omega,value header");
    }
    let mut xs: Vec<f64> = Vec::new();
    let mut ws: Vec<f64> = Vec::new();
    let mut values = Vec::new();
    for (n, line) in lines.enumerate() {
        let mut parts = line.split(',');
        let mut next = || -> anyhow::Result<f64> {
            let t = parts.next().with_context(|| format!("row {}: too few columns", n + 1))?;
            t.parse::<f64>().with_context(|| format!("row {}: bad number {t:?}", n + 1))
        };
        let (x, w, v) = (next()?, next()?, next()?);
        if parts.next().is_some() {
            bail!("row {}: too many columns", n + 1);
        }
        if xs.last() != Some(&x) {
            xs.push(x);
        }
        if xs.len() == 1 {
            ws.push(w);
        }
        values.push(v);
    }
    let (nx, nw) = (xs.len(), ws.len());
    if nx < 2 || nw < 2 || values.len() != nx * nw {
        bail!("rows do not form a rectangular grid");
    }
    let grid = TfGrid::new(xs[0], xs[nx - 1], ws[0], ws[nw - 1], nx, nw)?;
    Ok(MagnitudeField::from_values(grid, values)?)
}

/// 8-bit gray level `round(255 clip(1 + log10(m / max) / 6, 0, 1))`.
pub fn gray_level(m: f64, max: f64) -> u8 {
    if max.is_nan() || m.is_nan() || max <= 0.0 || m <= 0.0 {
        return 0;
    }
    let t = (1.0 + (m / max).log10() / 6.0).clamp(0.0, 1.0);
    (255.0 * t).round() as u8
}

/// Plain PGM with x to the right and omega upward.
pub fn pgm(field: &MagnitudeField) -> String {
    let g = field.grid();
    let max = field.max();
    let mut out = String::new();
    let _ = writeln!(out, "P2\n{} {}\n255", g.nx, g.nw);
    for j in (0..g.nw).rev() {
        let row: Vec<String> = (0..g.nx).map(|i| gray_level(*field.at(i, j), max).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn json_bytes<T: serde::Serialize>(value: &T) -> anyhow::Result<Vec<u8>> {
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s.into_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use gaborlab::{magnitude_field, GaussianSum};
    use proptest::prelude::*;

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let g = TfGrid::new(-1.3, 2.9, -0.7, 0.45, 17, 9).unwrap();
        let f = magnitude_field(&GaussianSum::gaussian(), &g);
        let back = parse_grid_csv(&grid_csv(&f)).unwrap();
        assert_eq!(back.grid(), f.grid());
        for (a, b) in back.values().iter().zip(f.values()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    proptest! {
        #[test]
        fn csv_round_trip_random(vals in proptest::collection::vec(0.0f64..1e300, 12), x0 in -5.0f64..0.0, span in 0.1f64..9.0) {
            let g = TfGrid::new(x0, x0 + span, -1.0, 1.0, 4, 3).unwrap();
            let f = MagnitudeField::magnitude(g, vals).unwrap();
            let back = parse_grid_csv(&grid_csv(&f)).unwrap();
            prop_assert_eq!(back.values(), f.values());
            prop_assert_eq!(back.grid(), f.grid());
        }
    }

    #[test]
    fn omega_varies_fastest() {
        let g = TfGrid::new(0.0, 1.0, 0.0, 2.0, 2, 3).unwrap();
        let text = grid_csv(&MagnitudeField::constant(g, 0.5));
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows[1], "0.0,0.0,0.5");
        assert_eq!(rows[2], "0.0,1.0,0.5");
        assert_eq!(rows[4], "1.0,0.0,0.5");
    }

    #[test]
    fn gray_levels() {
        assert_eq!(gray_level(1.0, 1.0), 255);
        assert_eq!(gray_level(1e-3, 1.0), 128);
        assert_eq!(gray_level(1e-6, 1.0), 0);
        assert_eq!(gray_level(1e-9, 1.0), 0);
        assert_eq!(gray_level(0.0, 0.0), 0);
    }

    #[test]
    fn zero_field_is_black() {
        let g = TfGrid::square(1.0, 3).unwrap();
        let text = pgm(&MagnitudeField::constant(g, 0.0));
        assert_eq!(text, "P2\n3 3\n255\n0 0 0\n0 0 0\n0 0 0\n");
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub/a.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }
}
