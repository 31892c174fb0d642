//! Columnar text serialization of fields.
//!
//! ```text
//! # clifwave-field v1 dim=2 points=4 spacing=0.5 domain=space
//! x1,x2,re_1,im_1,re_e1,im_e1,re_e2,im_e2,re_e12,im_e12
//! -0.75,-0.75,...
//! ```
//!
//! One row per node in storage order (axis 1 slowest), coordinates first,
//! then real/imaginary columns per blade in ascending bitmask order. Floats
//! use the shortest representation that parses back to the same value.

use std::io::{BufRead, BufReader, Read, Write};

use num_complex::Complex64;

use crate::clifford::blade_label;
use crate::error::{Error, Result};
use crate::grid::{CliffordField, Domain, GridSpec};

const MAGIC: &str = "# clifwave-field v1";

pub fn write_field_csv<W: Write>(field: &CliffordField, mut out: W) -> Result<()> {
    let g = field.grid();
    writeln!(
        out,
        "{MAGIC} dim={} points={} spacing={:?} domain={}",
        g.dim(),
        g.points(),
        g.spacing(),
        field.domain().as_str()
    )?;
    let mut w = csv::Writer::from_writer(out);
    let n = field.dim();
    let nb = field.blade_count();
    let mut header: Vec<String> = (1..=n).map(|a| format!("x{a}")).collect();
    for b in 0..nb {
        let l = blade_label(b);
        header.push(format!("re_{l}"));
        header.push(format!("im_{l}"));
    }
    w.write_record(&header)?;
    let m = field.node_count();
    let mut x = vec![0.0; n];
    let mut row: Vec<String> = Vec::with_capacity(n + 2 * nb);
    for idx in 0..m {
        row.clear();
        g.coords(idx, &mut x);
        row.extend(x.iter().map(|v| format!("{v:?}")));
        for b in 0..nb {
            let c = field.data()[b * m + idx];
            row.push(format!("{:?}", c.re));
            row.push(format!("{:?}", c.im));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_field_csv<R: Read>(input: R) -> Result<CliffordField> {
    let mut reader = BufReader::new(input);
    let mut first = String::new();
    reader.read_line(&mut first)?;
    let meta = first
        .trim_end()
        .strip_prefix(MAGIC)
        .ok_or_else(|| Error::Format("missing `# clifwave-field v1` header line".into()))?;
    let mut dim = None;
    let mut points = None;
    let mut spacing = None;
    let mut domain = Domain::Space;
    for kv in meta.split_whitespace() {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Format(format!("bad header token `{kv}`")))?;
        let bad = || Error::Format(format!("bad header value `{kv}`"));
        match k {
            "dim" => dim = Some(v.parse::<usize>().map_err(|_| bad())?),
            "points" => points = Some(v.parse::<usize>().map_err(|_| bad())?),
            "spacing" => spacing = Some(v.parse::<f64>().map_err(|_| bad())?),
            "domain" => {
                domain = match v {
                    "space" => Domain::Space,
                    "frequency" => Domain::Frequency,
                    _ => return Err(bad()),
                }
            }
            _ => return Err(Error::Format(format!("unknown header key `{k}`"))),
        }
    }
    let (Some(dim), Some(points), Some(spacing)) = (dim, points, spacing) else {
        return Err(Error::Format("header needs dim, points and spacing".into()));
    };
    let grid = GridSpec::with_spacing(dim, points, spacing)?;
    let nb = 1usize << dim;
    let m = grid.node_count();
    let mut rdr = csv::Reader::from_reader(reader);
    let width = rdr.headers()?.len();
    if width != dim + 2 * nb {
        return Err(Error::Format(format!(
            "expected {} columns, found {width}",
            dim + 2 * nb
        )));
    }
    let mut data = vec![Complex64::new(0.0, 0.0); nb * m];
    let mut x = vec![0.0; dim];
    let mut count = 0usize;
    for (idx, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if idx >= m {
            return Err(Error::Format(format!("more than {m} rows")));
        }
        let num = |j: usize| -> Result<f64> {
            rec.get(j)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::Format(format!("row {}: column {} is not a number", idx + 1, j + 1)))
        };
        grid.coords(idx, &mut x);
        for (a, xa) in x.iter().enumerate() {
            if (num(a)? - xa).abs() > 1e-9 * spacing {
                return Err(Error::Format(format!(
                    "row {}: coordinates do not match node order",
                    idx + 1
                )));
            }
        }
        for b in 0..nb {
            data[b * m + idx] = Complex64::new(num(dim + 2 * b)?, num(dim + 2 * b + 1)?);
        }
        count += 1;
    }
    if count != m {
        return Err(Error::Format(format!("expected {m} rows, found {count}")));
    }
    CliffordField::from_components(grid, domain, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Multivector;

    #[test]
    fn bit_exact_round_trip() {
        let g = GridSpec::centered(2, 1.7, 6).unwrap();
        let f = CliffordField::sample(g, |x| {
            let c: Vec<Complex64> = (0..4)
                .map(|b| Complex64::new((x[0] * 1.3 + b as f64).sin() / 3.0, x[1].exp() * 1e-7))
                .collect();
            Multivector::from_coeffs(2, &c).unwrap()
        })
        .unwrap();
        let mut buf = Vec::new();
        write_field_csv(&f, &mut buf).unwrap();
        let back = read_field_csv(buf.as_slice()).unwrap();
        assert_eq!(back, f);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# clifwave-field v1 dim=2 points=6"));
        assert!(text.lines().nth(1).unwrap().starts_with("x1,x2,re_1,im_1,re_e1"));
    }

    #[test]
    fn malformed_input_is_rejected() {
        assert!(matches!(read_field_csv("x1\n1\n".as_bytes()), Err(Error::Format(_))));
        let short = "# clifwave-field v1 dim=1 points=2 spacing=1.0\nx1,re_1,im_1,re_e1,im_e1\n-0.5,1,0,0,0\n";
        assert!(matches!(read_field_csv(short.as_bytes()), Err(Error::Format(_))));
    }
}
