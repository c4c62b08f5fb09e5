use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::numerics::{matched_decimal_places, DecimalString, ExactReal};

const EMBEDDED: &str = include_str!("../../data/reference.txt");

/// `(Y, Z)`: the digit at decimal place `Z` is first reproduced with `Y` mesh points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Marker {
    pub mesh_points: usize,
    pub decimal_place: usize,
}

/// Published digits of one energy level with its convergence markers.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceEntry {
    pub lambda: ExactReal,
    pub state: usize,
    pub digits: DecimalString,
    pub markers: Vec<Marker>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReferenceData {
    pub entries: Vec<ReferenceEntry>,
}

impl ReferenceData {
    /// Parses the line format
    ///
    /// ```text
    /// ref <lambda> <state> <digit-string>
    /// marker <lambda> <state> <mesh-points> <decimal-place>
    /// ```
    ///
    /// with `#` comments. A marker must follow its `ref` line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut data = ReferenceData::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse(format!("reference line {}: {msg}", lineno + 1));
            let fields: Vec<&str> = line.split_whitespace().collect();
            let number = |s: &str| s.parse::<usize>().map_err(|_| err("expected an integer"));
            match fields.as_slice() {
                ["ref", lambda, state, digits] => {
                    let lambda: ExactReal = lambda.parse().map_err(|_| err("bad lambda"))?;
                    let state = number(state)?;
                    if data.find(&lambda, state).is_some() {
                        return Err(err("duplicate entry"));
                    }
                    data.entries.push(ReferenceEntry {
                        lambda,
                        state,
                        digits: digits.parse().map_err(|_| err("bad digit string"))?,
                        markers: Vec::new(),
                    });
                }
                ["marker", lambda, state, y, z] => {
                    let lambda: ExactReal = lambda.parse().map_err(|_| err("bad lambda"))?;
                    let state = number(state)?;
                    let marker = Marker {
                        mesh_points: number(y)?,
                        decimal_place: number(z)?,
                    };
                    let entry = data
                        .entries
                        .iter_mut()
                        .find(|e| e.lambda == lambda && e.state == state)
                        .ok_or_else(|| err("marker before its ref line"))?;
                    entry.markers.push(marker);
                }
                _ => return Err(err("unrecognized line")),
            }
        }
        Ok(data)
    }

    /// The data file compiled into the library.
    pub fn embedded() -> &'static ReferenceData {
        static DATA: OnceLock<ReferenceData> = OnceLock::new();
        DATA.get_or_init(|| ReferenceData::parse(EMBEDDED).expect("embedded reference data parses"))
    }

    pub fn find(&self, lambda: &ExactReal, state: usize) -> Option<&ReferenceEntry> {
        self.entries
            .iter()
            .find(|e| e.lambda == *lambda && e.state == state)
    }

    pub fn require(&self, lambda: &ExactReal, state: usize) -> Result<&ReferenceEntry> {
        self.find(lambda, state).ok_or_else(|| Error::MissingReference {
            lambda: lambda.to_string(),
            state,
        })
    }
}

/// Matched decimal places of `digits` against the stored string for `(lambda, state)`.
pub fn reference_check(
    lambda: &ExactReal,
    state: usize,
    digits: &DecimalString,
    refdata: &ReferenceData,
) -> Result<usize> {
    let entry = refdata.require(lambda, state)?;
    Ok(matched_decimal_places(digits, &entry.digits))
}
