//! Binary checkpoints.
//!
//! A file is a UTF-8 header followed by raw little-endian f64 arrays:
//!
//! ```text
//! pinn-topo archive v1
//! meta family matrix
//! meta physics linear-elastic
//! array net:u1 7851 activation=sine omega0=10 layers=2,50,50,50,50,1
//! array net:phi 7851 activation=sine omega0=10 layers=2,50,50,50,50,1
//! end
//! <7851 * 8 bytes for u1><7851 * 8 bytes for phi>
//! ```
//!
//! Arrays appear in the body in header order. Each network array holds its
//! layers as `W1` row-major, `b1`, `W2`, `b2`, ... Files are written to a
//! temporary sibling and renamed into place.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::bundle::FieldBundle;
use super::constraints::{FieldRole, TransformParams};
use super::siren::{ParamSet, SirenNet};
use crate::autodiff::Activation;
use crate::error::{Error, Result};

const MAGIC: &str = "pinn-topo archive v1";

/// A named f64 array with free-form `key=value` attributes.
#[derive(Clone, Debug, PartialEq)]
pub struct ArchiveArray {
    pub name: String,
    pub attrs: Vec<(String, String)>,
    pub data: Vec<f64>,
}

impl ArchiveArray {
    pub fn new(name: impl Into<String>, data: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            attrs: Vec::new(),
            data,
        }
    }

    pub fn attr(&self, key: &str) -> Option<&str> {
        self.attrs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// Metadata lines plus arrays.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Archive {
    pub meta: Vec<(String, String)>,
    pub arrays: Vec<ArchiveArray>,
}

impl Archive {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn require_meta(&self, key: &str) -> Result<&str> {
        self.meta(key)
            .ok_or_else(|| Error::Config(format!("archive lacks metadata `{key}`")))
    }

    pub fn array(&self, name: &str) -> Option<&ArchiveArray> {
        self.arrays.iter().find(|a| a.name == name)
    }

    pub fn push_meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn write_to(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "{MAGIC}")?;
        for (k, v) in &self.meta {
            writeln!(w, "meta {k} {v}")?;
        }
        for a in &self.arrays {
            write!(w, "array {} {}", a.name, a.data.len())?;
            for (k, v) in &a.attrs {
                write!(w, " {k}={v}")?;
            }
            writeln!(w)?;
        }
        writeln!(w, "end")?;
        for a in &self.arrays {
            for v in &a.data {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read_from(r: &mut impl BufRead, origin: &str) -> Result<Self> {
        let parse_err = |line: usize, message: String| Error::Parse {
            path: origin.to_string(),
            line,
            message,
        };
        let mut archive = Archive::default();
        let mut lengths = Vec::new();
        let mut lineno = 0;
        let mut buf = String::new();
        loop {
            buf.clear();
            lineno += 1;
            let n = r.read_line(&mut buf).map_err(|e| Error::io(origin, e))?;
            if n == 0 {
                return Err(parse_err(lineno, "unexpected end of header".into()));
            }
            let line = buf.trim_end_matches(['\n', '\r']);
            if lineno == 1 {
                if line != MAGIC {
                    return Err(parse_err(1, format!("expected `{MAGIC}`")));
                }
                continue;
            }
            if line == "end" {
                break;
            }
            let mut parts = line.split(' ');
            match parts.next() {
                Some("meta") => {
                    let key = parts
                        .next()
                        .ok_or_else(|| parse_err(lineno, "meta without key".into()))?;
                    let value = parts.collect::<Vec<_>>().join(" ");
                    archive.meta.push((key.to_string(), value));
                }
                Some("array") => {
                    let name = parts
                        .next()
                        .ok_or_else(|| parse_err(lineno, "array without name".into()))?;
                    let len: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| parse_err(lineno, "array without valid length".into()))?;
                    let mut attrs = Vec::new();
                    for kv in parts {
                        let (k, v) = kv
                            .split_once('=')
                            .ok_or_else(|| parse_err(lineno, format!("malformed attribute `{kv}`")))?;
                        attrs.push((k.to_string(), v.to_string()));
                    }
                    archive.arrays.push(ArchiveArray {
                        name: name.to_string(),
                        attrs,
                        data: Vec::new(),
                    });
                    lengths.push(len);
                }
                _ => return Err(parse_err(lineno, format!("unrecognized header line `{line}`"))),
            }
        }
        for (a, len) in archive.arrays.iter_mut().zip(lengths) {
            let mut bytes = vec![0u8; len * 8];
            r.read_exact(&mut bytes).map_err(|e| Error::io(origin, e))?;
            a.data = bytes
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
                .collect();
        }
        let mut rest = [0u8; 1];
        if r.read(&mut rest).map_err(|e| Error::io(origin, e))? != 0 {
            return Err(parse_err(lineno, "trailing bytes after the last array".into()));
        }
        Ok(archive)
    }

    /// Writes atomically: temporary sibling file, then rename.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut tmp_name = path.file_name().map(|s| s.to_os_string()).unwrap_or_default();
        tmp_name.push(".tmp");
        let tmp = path.with_file_name(tmp_name);
        {
            let file = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
            let mut w = std::io::BufWriter::new(file);
            self.write_to(&mut w).map_err(|e| Error::io(&tmp, e))?;
            let file = w.into_inner().map_err(|e| Error::io(&tmp, e.into_error()))?;
            file.sync_all().map_err(|e| Error::io(&tmp, e))?;
        }
        fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_from(&mut BufReader::new(file), &path.display().to_string())
    }
}

fn activation_name(a: Activation) -> &'static str {
    match a {
        Activation::Sine => "sine",
        Activation::Tanh => "tanh",
    }
}

/// Archive entry for one network.
pub fn net_to_array(role: FieldRole, net: &SirenNet) -> ArchiveArray {
    let layers = net
        .layer_sizes()
        .iter()
        .map(|q| q.to_string())
        .collect::<Vec<_>>()
        .join(",");
    ArchiveArray {
        name: format!("net:{role}"),
        attrs: vec![
            ("activation".into(), activation_name(net.activation()).into()),
            ("omega0".into(), format!("{:?}", net.omega0())),
            ("layers".into(), layers),
        ],
        data: net.params().values().to_vec(),
    }
}

pub fn net_from_array(a: &ArchiveArray) -> Result<(FieldRole, SirenNet)> {
    let role: FieldRole = a
        .name
        .strip_prefix("net:")
        .ok_or_else(|| Error::Config(format!("array `{}` is not a network", a.name)))?
        .parse()?;
    let bad = |what: &str| Error::Config(format!("network `{role}`: invalid or missing `{what}`"));
    let activation = match a.attr("activation") {
        Some("sine") => Activation::Sine,
        Some("tanh") => Activation::Tanh,
        _ => return Err(bad("activation")),
    };
    let omega0: f64 = a
        .attr("omega0")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad("omega0"))?;
    let layers: Vec<usize> = a
        .attr("layers")
        .ok_or_else(|| bad("layers"))?
        .split(',')
        .map(|s| s.parse().map_err(|_| bad("layers")))
        .collect::<Result<_>>()?;
    let params = ParamSet::from_values(&layers, a.data.clone())?;
    Ok((role, SirenNet::from_params(params, omega0, activation)))
}

/// Archive holding every network of a bundle and the data needed to rebuild it.
pub fn bundle_to_archive(bundle: &FieldBundle) -> Archive {
    let mut a = Archive::default();
    a.push_meta("family", bundle.family());
    a.push_meta("physics", bundle.physics().name());
    a.push_meta("load", format!("{:?}", bundle.transform_params().load));
    a.push_meta("band", format!("{:?}", bundle.transform_params().band));
    for (role, net) in bundle.nets() {
        a.arrays.push(net_to_array(*role, net));
    }
    a
}

pub fn bundle_from_archive(a: &Archive) -> Result<FieldBundle> {
    let family = a.require_meta("family")?.parse()?;
    let physics = a.require_meta("physics")?.parse()?;
    let num = |key: &str| -> Result<f64> {
        a.require_meta(key)?
            .parse()
            .map_err(|_| Error::Config(format!("archive metadata `{key}` is not a number")))
    };
    let tp = TransformParams {
        load: num("load")?,
        band: num("band")?,
    };
    let nets = a
        .arrays
        .iter()
        .filter(|x| x.name.starts_with("net:"))
        .map(net_from_array)
        .collect::<Result<Vec<_>>>()?;
    FieldBundle::from_nets(family, physics, tp, nets)
}

pub fn save_bundle(bundle: &FieldBundle, path: &Path) -> Result<()> {
    bundle_to_archive(bundle).save(path)
}

pub fn load_bundle(path: &Path) -> Result<FieldBundle> {
    bundle_from_archive(&Archive::load(path)?)
}
