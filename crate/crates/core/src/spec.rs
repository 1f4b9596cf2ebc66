//! Serializable measure descriptions ingested by the command line.

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::measure::{Atom, CircleMeasure, Piece};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub angle: f64,
    pub weight: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub from: f64,
    pub to: f64,
    pub height: f64,
}

/// A named measure, or explicit atoms and pieces (angles in radians).
///
/// Names: `dirac:<angle>`, `haar`, `bernoulli`, `pk:<r>,<psi>`,
/// `arc_uniform:<phi>`, `mu_a:<a>`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub named: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<AtomSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pieces: Option<Vec<PieceSpec>>,
}

impl MeasureSpec {
    pub fn named(name: impl Into<String>) -> Self {
        MeasureSpec {
            named: Some(name.into()),
            ..Default::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("measure spec: {e}")))
    }
}

/// Resolve a spec into a validated measure.
pub fn make_measure(spec: &MeasureSpec) -> Result<CircleMeasure> {
    let explicit = spec.atoms.is_some() || spec.pieces.is_some();
    match (&spec.named, explicit) {
        (Some(_), true) => Err(Error::InvalidMeasure(
            "named: cannot be combined with atoms or pieces".into(),
        )),
        (Some(name), false) => named_measure(name),
        (None, true) => {
            let atoms = spec
                .atoms
                .iter()
                .flatten()
                .map(|a| Atom {
                    angle: Angle::new(a.angle),
                    weight: a.weight,
                })
                .collect();
            let pieces = spec
                .pieces
                .iter()
                .flatten()
                .map(|p| Piece::between(p.from, p.to, p.height))
                .collect();
            CircleMeasure::new(atoms, pieces)
        }
        (None, false) => Err(Error::InvalidMeasure(
            "spec must give `named` or at least one of `atoms`, `pieces`".into(),
        )),
    }
}

fn parse_number(field: &str, s: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::InvalidMeasure(format!("named: `{field}` expects a number, got `{s}`")))?;
    if !v.is_finite() {
        return Err(Error::InvalidMeasure(format!("named: `{field}` must be finite")));
    }
    Ok(v)
}

fn named_measure(name: &str) -> Result<CircleMeasure> {
    let name = name.trim();
    let (head, args) = match name.split_once(':') {
        Some((h, a)) => (h.trim(), Some(a)),
        None => (name, None),
    };
    let bad = |e: Error| match e {
        Error::Domain(m) => Error::InvalidMeasure(format!("named: {m}")),
        other => other,
    };
    match (head, args) {
        ("haar", None) => Ok(CircleMeasure::haar()),
        ("bernoulli", None) => Ok(CircleMeasure::bernoulli()),
        ("dirac", Some(a)) => Ok(CircleMeasure::dirac(parse_number("dirac", a)?)),
        ("arc_uniform", Some(a)) => CircleMeasure::arc_uniform(parse_number("arc_uniform", a)?).map_err(bad),
        ("mu_a", Some(a)) => CircleMeasure::mu_a(parse_number("mu_a", a)?).map_err(bad),
        ("pk", Some(a)) => {
            let (r, psi) = a
                .split_once(',')
                .ok_or_else(|| Error::InvalidMeasure("named: `pk` expects `pk:<r>,<psi>`".into()))?;
            let r = parse_number("pk", r)?;
            let psi = parse_number("pk", psi)?;
            if !(0.0..1.0).contains(&r) {
                return Err(Error::InvalidMeasure(format!("named: pk radius must be in [0, 1), got {r}")));
            }
            CircleMeasure::poisson_kernel(r, psi, CircleMeasure::default_poisson_pieces(r)).map_err(bad)
        }
        _ => Err(Error::InvalidMeasure(format!("named: unknown measure `{name}`"))),
    }
}
