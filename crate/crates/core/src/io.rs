//! File formats: field profiles (CSV `x,re_u,im_u` or JSON), scattering data (JSON) and
//! plain numeric CSV tables. Floats are written as shortest round-trip decimals.

use crate::direct_scattering::ScatteringData;
use crate::error::{Error, Result};
use crate::field::ComplexField;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

type C = Complex64;

/// Shortest decimal that parses back to `v`, locale independent.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

#[derive(Debug, Deserialize)]
struct ProfileRow {
    x: f64,
    re_u: f64,
    im_u: f64,
}

/// JSON profile `{xs, re, im, t}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ProfileJson {
    pub xs: Vec<f64>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    #[serde(default)]
    pub t: f64,
}

/// Reads a profile; `.json` files use the JSON layout, anything else CSV with header `x,re_u,im_u`.
pub fn read_profile(path: &Path) -> Result<ComplexField> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        let p: ProfileJson = serde_json::from_reader(BufReader::new(file)).map_err(|e| io_err(path, e))?;
        if p.re.len() != p.xs.len() || p.im.len() != p.xs.len() {
            return Err(Error::InvalidInput(format!("{}: xs, re and im lengths differ", path.display())));
        }
        let values = p.re.iter().zip(&p.im).map(|(&r, &i)| C::new(r, i)).collect();
        return ComplexField::new(p.xs, values, p.t);
    }
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(BufReader::new(file));
    let mut xs = Vec::new();
    let mut values = Vec::new();
    for row in rdr.deserialize() {
        let r: ProfileRow = row.map_err(|e| io_err(path, e))?;
        xs.push(r.x);
        values.push(C::new(r.re_u, r.im_u));
    }
    ComplexField::new(xs, values, 0.0)
}

/// Writes a table with a header row.
pub fn write_csv<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    w.write_record(header).map_err(|e| io_err(path, e))?;
    for row in rows {
        w.write_record(row).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))?;
    Ok(())
}

pub fn write_profile_csv(path: &Path, field: &ComplexField) -> Result<()> {
    write_csv(
        path,
        &["x", "re_u", "im_u"],
        field.xs.iter().zip(&field.values).map(|(x, u)| [fmt_f64(*x), fmt_f64(u.re), fmt_f64(u.im)]),
    )
}

pub fn write_profile_json(path: &Path, field: &ComplexField) -> Result<()> {
    let p = ProfileJson {
        xs: field.xs.clone(),
        re: field.values.iter().map(|v| v.re).collect(),
        im: field.values.iter().map(|v| v.im).collect(),
        t: field.time,
    };
    write_json(path, &p)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| io_err(path, e))?;
    w.write_all(b"\n").map_err(|e| io_err(path, e))?;
    w.flush().map_err(|e| io_err(path, e))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JsonComplex {
    pub re: f64,
    pub im: f64,
}

impl From<C> for JsonComplex {
    fn from(c: C) -> Self {
        Self { re: c.re, im: c.im }
    }
}

impl From<JsonComplex> for C {
    fn from(c: JsonComplex) -> Self {
        C::new(c.re, c.im)
    }
}

/// Reflection samples; failed grid points are `null`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GammaJson {
    pub k: Vec<f64>,
    pub g1_re: Vec<Option<f64>>,
    pub g1_im: Vec<Option<f64>>,
    pub g2_re: Vec<Option<f64>>,
    pub g2_im: Vec<Option<f64>>,
}

/// On-disk scattering data `{poles, norming, gamma}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScatteringJson {
    pub poles: Vec<JsonComplex>,
    pub norming: Vec<[JsonComplex; 2]>,
    #[serde(default)]
    pub gamma: GammaJson,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl From<&ScatteringData> for ScatteringJson {
    fn from(sd: &ScatteringData) -> Self {
        let col = |f: fn(&[C; 2]) -> f64| sd.gamma.iter().map(|g| finite(f(g))).collect();
        Self {
            poles: sd.poles.iter().map(|&k| k.into()).collect(),
            norming: sd.norming.iter().map(|c| [c[0].into(), c[1].into()]).collect(),
            gamma: GammaJson {
                k: sd.gamma_k.clone(),
                g1_re: col(|g| g[0].re),
                g1_im: col(|g| g[0].im),
                g2_re: col(|g| g[1].re),
                g2_im: col(|g| g[1].im),
            },
        }
    }
}

impl TryFrom<ScatteringJson> for ScatteringData {
    type Error = Error;

    /// Null samples become NaN, so later interpolation surfaces them instead of hiding them.
    fn try_from(j: ScatteringJson) -> Result<Self> {
        let g = &j.gamma;
        let n = g.k.len();
        if [g.g1_re.len(), g.g1_im.len(), g.g2_re.len(), g.g2_im.len()].iter().any(|&m| m != n) {
            return Err(Error::InvalidInput("gamma arrays have different lengths".into()));
        }
        if j.poles.len() != j.norming.len() {
            return Err(Error::InvalidInput(format!("{} poles but {} norming constants", j.poles.len(), j.norming.len())));
        }
        let v = |o: Option<f64>| o.unwrap_or(f64::NAN);
        let gamma = (0..n)
            .map(|i| [C::new(v(g.g1_re[i]), v(g.g1_im[i])), C::new(v(g.g2_re[i]), v(g.g2_im[i]))])
            .collect();
        Ok(ScatteringData {
            poles: j.poles.into_iter().map(Into::into).collect(),
            norming: j.norming.into_iter().map(|c| [c[0].into(), c[1].into()]).collect(),
            gamma_k: g.k.clone(),
            gamma,
        })
    }
}

pub fn write_scattering(path: &Path, sd: &ScatteringData) -> Result<()> {
    write_json(path, &ScatteringJson::from(sd))
}

pub fn read_scattering(path: &Path) -> Result<ScatteringData> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let j: ScatteringJson = serde_json::from_reader(BufReader::new(file)).map_err(|e| io_err(path, e))?;
    j.try_into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for v in [0.1, -1.0 / 3.0, 1e-300, 6.02e23, 0.0, -0.0, 123456789.123] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
        assert_eq!(fmt_f64(0.5), "0.5");
    }

    #[test]
    fn scattering_json_round_trip() {
        let sd = ScatteringData {
            poles: vec![C::new(0.1, 0.8)],
            norming: vec![[C::new(0.7, 0.2), C::new(-0.7, 0.2)]],
            gamma_k: vec![-1.0, 0.0, 1.0],
            gamma: vec![[C::new(0.1, 0.0), C::new(0.0, -0.1)], [C::new(f64::NAN, 0.0), C::new(0.0, 0.0)], [C::new(1e-17, 2.0), C::new(3.0, 4.0)]],
        };
        let j = ScatteringJson::from(&sd);
        let text = serde_json::to_string(&j).unwrap();
        let back: ScatteringData = serde_json::from_str::<ScatteringJson>(&text).unwrap().try_into().unwrap();
        assert_eq!(back.poles, sd.poles);
        assert_eq!(back.norming, sd.norming);
        assert!(back.gamma[1][0].re.is_nan());
        assert_eq!(back.gamma[2], sd.gamma[2]);
    }
}
