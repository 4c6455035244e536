//! Built-in symmetric spaces with exact matrix realizations:
//! complex hyperbolic space `SU(n,1)/S(U(n)xU(1))`, real hyperbolic space
//! `SO(n,1)/SO(n)` and `SL(n,R)/SO(n)`, together with named totally geodesic
//! pairs.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{realify, AlgebraVector, StructuredLieAlgebra};
use crate::error::{Error, Result};
use crate::geometry::{Axis, ImmersionSpec};
use crate::scalar::{Scalar, Q};
use crate::subspace::{
    is_lie_triple_system, is_reflective, is_totally_real, orthocomplement_in_p, ComplexStructure, Subspace,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceKind {
    ComplexHyperbolic,
    RealHyperbolic,
    SlModSo,
    QuaternionicHyperbolic,
    CayleyPlane,
}

impl SpaceKind {
    pub fn supported(self) -> bool {
        matches!(self, SpaceKind::ComplexHyperbolic | SpaceKind::RealHyperbolic | SpaceKind::SlModSo)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpaceId {
    pub kind: SpaceKind,
    pub n: usize,
}

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SpaceKind::ComplexHyperbolic => write!(f, "su{}1", self.n),
            SpaceKind::RealHyperbolic => write!(f, "so{}1", self.n),
            SpaceKind::SlModSo => write!(f, "sl{}r", self.n),
            SpaceKind::QuaternionicHyperbolic => write!(f, "sp{}1", self.n),
            SpaceKind::CayleyPlane => write!(f, "f4"),
        }
    }
}

impl FromStr for SpaceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnsupportedSpace(s.to_string());
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        let id = if s == "f4" {
            SpaceId { kind: SpaceKind::CayleyPlane, n: 2 }
        } else if let Some(t) = s.strip_prefix("su").and_then(|t| t.strip_suffix('1')) {
            SpaceId { kind: SpaceKind::ComplexHyperbolic, n: num(t)? }
        } else if let Some(t) = s.strip_prefix("so").and_then(|t| t.strip_suffix('1')) {
            SpaceId { kind: SpaceKind::RealHyperbolic, n: num(t)? }
        } else if let Some(t) = s.strip_prefix("sp").and_then(|t| t.strip_suffix('1')) {
            SpaceId { kind: SpaceKind::QuaternionicHyperbolic, n: num(t)? }
        } else if let Some(t) = s.strip_prefix("sl").and_then(|t| t.strip_suffix('r')) {
            SpaceId { kind: SpaceKind::SlModSo, n: num(t)? }
        } else {
            return Err(bad());
        };
        Ok(id)
    }
}

/// Predicates a named pair is declared to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub lie_triple_system: bool,
    pub reflective: bool,
    /// Only meaningful for Hermitian spaces.
    pub totally_real: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct PairSpec {
    pub name: String,
    pub description: String,
    pub basis: Vec<AlgebraVector<Q>>,
    pub expected: Expected,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: SpaceId,
    pub algebra: StructuredLieAlgebra,
    pub complex_structure: Option<ComplexStructure>,
    pub pairs: Vec<PairSpec>,
}

/// A totally geodesic subspace and a basis of its normal space in `p`.
#[derive(Debug, Clone)]
pub struct Pair {
    pub name: String,
    pub s: Subspace<Q>,
    pub normal_frame: Subspace<Q>,
    pub expected: Expected,
}

impl Pair {
    /// Dimension of the extended submanifold `f(t, x)`.
    pub fn extension_dim(&self) -> usize {
        self.s.dim() + 1
    }
}

type CMat = (Vec<Vec<Q>>, Vec<Vec<Q>>);

fn zeros(n: usize) -> Vec<Vec<Q>> {
    vec![vec![Q::from_i64(0); n]; n]
}

fn unit(n: usize, entries: &[(usize, usize, i64)]) -> Vec<Vec<Q>> {
    let mut m = zeros(n);
    for &(i, j, c) in entries {
        m[i][j] = &m[i][j] + Q::from_i64(c);
    }
    m
}

fn complex_unit(n: usize, re: &[(usize, usize, i64)], im: &[(usize, usize, i64)]) -> CMat {
    (unit(n, re), unit(n, im))
}

fn vector(alg: &StructuredLieAlgebra, terms: &[(&str, i64)]) -> AlgebraVector<Q> {
    let mut v = AlgebraVector::zero(alg.dim());
    for (label, c) in terms {
        let i = alg.labels().iter().position(|l| l == label).expect("catalog label");
        v.0[i] = &v.0[i] + Q::from_i64(*c);
    }
    v
}

/// `sl(n, R)` with basis `H_i = E_ii - E_{i+1,i+1}`, `E_ij` (i < j), `F_ij = E_ji`.
/// For `n = 2` the labels are `H, E, F`.
pub fn sl_n(n: usize) -> Result<StructuredLieAlgebra> {
    if n < 2 {
        return Err(Error::UnsupportedSpace(format!("sl{n}r")));
    }
    let mut labels = Vec::new();
    let mut images = Vec::new();
    for i in 0..n - 1 {
        labels.push(if n == 2 { "H".to_string() } else { format!("H{}", i + 1) });
        images.push(unit(n, &[(i, i, 1), (i + 1, i + 1, -1)]));
    }
    for i in 0..n {
        for j in i + 1..n {
            let (e, f) = if n == 2 {
                ("E".to_string(), "F".to_string())
            } else {
                (format!("E{}{}", i + 1, j + 1), format!("F{}{}", i + 1, j + 1))
            };
            labels.push(e);
            images.push(unit(n, &[(i, j, 1)]));
            labels.push(f);
            images.push(unit(n, &[(j, i, 1)]));
        }
    }
    StructuredLieAlgebra::from_matrix_basis(format!("sl({n},R)"), labels, images, false)
}

/// `so(n, 1)` with rotations `R_ab` and boosts `B_a`.
pub fn so_n1(n: usize) -> Result<StructuredLieAlgebra> {
    if n < 2 {
        return Err(Error::UnsupportedSpace(format!("so{n}1")));
    }
    let size = n + 1;
    let mut labels = Vec::new();
    let mut images = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            labels.push(format!("R{}{}", a + 1, b + 1));
            images.push(unit(size, &[(a, b, 1), (b, a, -1)]));
        }
    }
    for a in 0..n {
        labels.push(format!("B{}", a + 1));
        images.push(unit(size, &[(a, n, 1), (n, a, 1)]));
    }
    StructuredLieAlgebra::from_matrix_basis(format!("so({n},1)"), labels, images, false)
}

/// `su(n, 1)` realified into real `2(n+1)` square matrices.
///
/// `k`: `R_ab = E_ab - E_ba`, `I_ab = i(E_ab + E_ba)`, `D_a = i(E_aa - E_{a+1,a+1})`.
/// `p`: `X_a = E_{a,n+1} + E_{n+1,a}`, `Y_a = i(E_{a,n+1} - E_{n+1,a})`.
pub fn su_n1(n: usize) -> Result<StructuredLieAlgebra> {
    if n < 1 {
        return Err(Error::UnsupportedSpace(format!("su{n}1")));
    }
    let size = n + 1;
    let mut labels = Vec::new();
    let mut complex = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            labels.push(format!("R{}{}", a + 1, b + 1));
            complex.push(complex_unit(size, &[(a, b, 1), (b, a, -1)], &[]));
            labels.push(format!("I{}{}", a + 1, b + 1));
            complex.push(complex_unit(size, &[], &[(a, b, 1), (b, a, 1)]));
        }
    }
    for a in 0..n {
        labels.push(format!("D{}", a + 1));
        complex.push(complex_unit(size, &[], &[(a, a, 1), (a + 1, a + 1, -1)]));
    }
    for a in 0..n {
        labels.push(format!("X{}", a + 1));
        complex.push(complex_unit(size, &[(a, n, 1), (n, a, 1)], &[]));
        labels.push(format!("Y{}", a + 1));
        complex.push(complex_unit(size, &[], &[(a, n, 1), (n, a, -1)]));
    }
    let images = complex.iter().map(|(re, im)| realify(re, im)).collect();
    StructuredLieAlgebra::from_matrix_basis(format!("su({n},1)"), labels, images, true)
}

fn su_pairs(alg: &StructuredLieAlgebra, n: usize) -> Vec<PairSpec> {
    let mut out = Vec::new();
    if n >= 2 {
        let mut basis = Vec::new();
        for a in 1..n {
            basis.push(vector(alg, &[(&format!("X{a}"), 1)]));
            basis.push(vector(alg, &[(&format!("Y{a}"), 1)]));
        }
        out.push(PairSpec {
            name: "complex-hyperplane".into(),
            description: format!("complex hyperbolic H^{}(C), dim {}", n - 1, 2 * n - 2),
            basis,
            expected: Expected {
                lie_triple_system: true,
                reflective: true,
                totally_real: Some(false),
            },
        });
    }
    out.push(PairSpec {
        name: "real-form".into(),
        description: format!("real hyperbolic H^{n}(R), totally real, dim {n}"),
        basis: (1..=n).map(|a| vector(alg, &[(&format!("X{a}"), 1)])).collect(),
        expected: Expected {
            lie_triple_system: true,
            reflective: true,
            totally_real: Some(true),
        },
    });
    out
}

fn so_pairs(alg: &StructuredLieAlgebra, n: usize) -> Vec<PairSpec> {
    vec![
        PairSpec {
            name: "geodesic-hyperplane".into(),
            description: format!("real hyperbolic H^{}(R), dim {}", n - 1, n - 1),
            basis: (1..n).map(|a| vector(alg, &[(&format!("B{a}"), 1)])).collect(),
            expected: Expected {
                lie_triple_system: true,
                reflective: true,
                totally_real: None,
            },
        },
        PairSpec {
            name: "geodesic-line".into(),
            description: "a geodesic, dim 1".into(),
            basis: vec![vector(alg, &[("B1", 1)])],
            expected: Expected {
                lie_triple_system: true,
                reflective: true,
                totally_real: None,
            },
        },
    ]
}

fn sl_pairs(alg: &StructuredLieAlgebra, n: usize) -> Vec<PairSpec> {
    let (e, f) = if n == 2 { ("E", "F") } else { ("E12", "F12") };
    let mut out = vec![PairSpec {
        name: "symmetric-line".into(),
        description: "the geodesic through E12 + E21, dim 1".into(),
        basis: vec![vector(alg, &[(e, 1), (f, 1)])],
        expected: Expected {
            lie_triple_system: true,
            reflective: n == 2,
            totally_real: None,
        },
    }];
    if n >= 3 {
        let hs: Vec<AlgebraVector<Q>> = (1..n).map(|i| vector(alg, &[(&format!("H{i}"), 1)])).collect();
        out.push(PairSpec {
            name: "diagonal-flat".into(),
            description: format!("the maximal flat of diagonal matrices, dim {}", n - 1),
            basis: hs,
            expected: Expected {
                lie_triple_system: true,
                reflective: false,
                totally_real: None,
            },
        });
    }
    out
}

/// Builds a catalog space.
pub fn build_space(id: SpaceId) -> Result<CatalogEntry> {
    let n = id.n;
    match id.kind {
        SpaceKind::ComplexHyperbolic => {
            let algebra = su_n1(n)?;
            let j = ComplexStructure::from_center_of_k(&algebra)?;
            let pairs = su_pairs(&algebra, n);
            Ok(CatalogEntry {
                id,
                algebra,
                complex_structure: Some(j),
                pairs,
            })
        }
        SpaceKind::RealHyperbolic => {
            let algebra = so_n1(n)?;
            let pairs = so_pairs(&algebra, n);
            Ok(CatalogEntry {
                id,
                algebra,
                complex_structure: None,
                pairs,
            })
        }
        SpaceKind::SlModSo => {
            let algebra = sl_n(n)?;
            let pairs = sl_pairs(&algebra, n);
            Ok(CatalogEntry {
                id,
                algebra,
                complex_structure: None,
                pairs,
            })
        }
        SpaceKind::QuaternionicHyperbolic | SpaceKind::CayleyPlane => Err(Error::UnsupportedSpace(id.to_string())),
    }
}

pub fn build_space_str(id: &str) -> Result<CatalogEntry> {
    build_space(id.parse()?)
}

impl CatalogEntry {
    pub fn pair_names(&self) -> Vec<&str> {
        self.pairs.iter().map(|p| p.name.as_str()).collect()
    }

    pub fn build_pair(&self, name: &str) -> Result<Pair> {
        let name = if name == "geodesic-plane" { "geodesic-hyperplane" } else { name };
        let spec = self
            .pairs
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| Error::UnknownPair(name.to_string()))?;
        let s = Subspace::new(&self.algebra, spec.basis.clone())?;
        let normal_frame = orthocomplement_in_p(&self.algebra, &s)?;
        Ok(Pair {
            name: spec.name.clone(),
            s,
            normal_frame,
            expected: spec.expected,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PredicateRow {
    pub space: String,
    pub pair: String,
    pub dim_s: usize,
    pub extension_dim: usize,
    pub expected: Expected,
    pub lie_triple_system: bool,
    pub reflective: bool,
    pub totally_real: Option<bool>,
    pub matches: bool,
}

/// Evaluates every declared predicate of a pair.
pub fn predicate_row(entry: &CatalogEntry, pair: &Pair) -> Result<PredicateRow> {
    let alg = &entry.algebra;
    let lts = is_lie_triple_system(alg, &pair.s)?.holds;
    let refl = is_reflective(alg, &pair.s)?.holds;
    let tr = match &entry.complex_structure {
        Some(j) => Some(is_totally_real(alg, &pair.s, j)?.holds),
        None => None,
    };
    let e = pair.expected;
    Ok(PredicateRow {
        space: entry.id.to_string(),
        pair: pair.name.clone(),
        dim_s: pair.s.dim(),
        extension_dim: pair.extension_dim(),
        expected: e,
        lie_triple_system: lts,
        reflective: refl,
        totally_real: tr,
        matches: lts == e.lie_triple_system && refl == e.reflective && (e.totally_real.is_none() || tr == e.totally_real),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SpaceListing {
    pub id: String,
    pub kind: SpaceKind,
    pub algebra: String,
    pub dim: usize,
    pub dim_k: usize,
    pub dim_p: usize,
    pub hermitian: bool,
    pub pairs: Vec<PairListing>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairListing {
    pub name: String,
    pub description: String,
    pub dim_s: usize,
    pub extension_dim: usize,
    pub expected: Expected,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogListing {
    pub spaces: Vec<SpaceListing>,
    pub unsupported: Vec<String>,
    pub families: Vec<String>,
}

/// Default instances of the three supported families.
pub const DEFAULT_SPACES: [&str; 3] = ["su21", "so31", "sl3r"];

pub fn listing() -> Result<CatalogListing> {
    let mut spaces = Vec::new();
    for id in DEFAULT_SPACES {
        let e = build_space_str(id)?;
        spaces.push(SpaceListing {
            id: id.to_string(),
            kind: e.id.kind,
            algebra: e.algebra.name().to_string(),
            dim: e.algebra.dim(),
            dim_k: e.algebra.dim_k(),
            dim_p: e.algebra.dim_p(),
            hermitian: e.complex_structure.is_some(),
            pairs: e
                .pairs
                .iter()
                .map(|p| PairListing {
                    name: p.name.clone(),
                    description: p.description.clone(),
                    dim_s: p.basis.len(),
                    extension_dim: p.basis.len() + 1,
                    expected: p.expected,
                })
                .collect(),
        });
    }
    Ok(CatalogListing {
        spaces,
        unsupported: vec!["sp{n}1 (quaternionic hyperbolic)".into(), "f4 (Cayley hyperbolic plane)".into()],
        families: vec!["su{n}1".into(), "so{n}1".into(), "sl{n}r".into()],
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BisectorReport {
    pub space: String,
    pub pair: String,
    pub r: f64,
    pub nodes: usize,
    /// `|d(o, z+) - r|` and `|d(o, z-) - r|`, worst of the two.
    pub origin_error: f64,
    pub max_delta: f64,
    pub tolerance: f64,
    pub equidistant: bool,
}

/// Compares the extension of `pair` along the unit normal `X` with the
/// bisector of `z+- = exp(+-r JX) . o`: every grid point `q = f(t, y)` should
/// satisfy `d(q, z+) = d(q, z-)` when the pair is the complex hyperplane.
pub fn bisector_equidistance_check(
    entry: &CatalogEntry,
    pair: &Pair,
    x: &[f64],
    r: f64,
    t_axis: Axis,
    y_axis: Axis,
    tolerance: f64,
) -> Result<BisectorReport> {
    let alg = &entry.algebra;
    let j = entry
        .complex_structure
        .as_ref()
        .ok_or_else(|| Error::UnsupportedSpace(format!("{} is not Hermitian", entry.id)))?;
    let mut spec = ImmersionSpec::new(alg, &pair.s, x, t_axis, y_axis, 1e-3)?;
    let xn = spec.space.norm_b(x);
    let unit: Vec<f64> = x.iter().map(|v| v / xn).collect();
    spec.x = unit.clone();
    let space = &spec.space;
    let jx = alg.p_coordinates(&j.apply_f64(alg, &alg.from_p_coordinates(&unit)?)?)?;
    let plus: Vec<f64> = jx.iter().map(|v| v * r).collect();
    let minus: Vec<f64> = jx.iter().map(|v| -v * r).collect();
    let zp = space.point(&plus)?;
    let zm = space.point(&minus)?;
    let o = space.origin();
    let origin_error = (space.distance(&o, &zp)? - r).abs().max((space.distance(&o, &zm)? - r).abs());
    let grid = spec.grid();
    let deltas: Vec<Result<f64>> = grid
        .par_iter()
        .map(|(t, y)| {
            let q = spec.immersion_point(*t, y)?;
            Ok((space.distance(&q, &zp)? - space.distance(&q, &zm)?).abs())
        })
        .collect();
    let mut max_delta: f64 = 0.0;
    for d in deltas {
        max_delta = max_delta.max(d?);
    }
    Ok(BisectorReport {
        space: entry.id.to_string(),
        pair: pair.name.clone(),
        r,
        nodes: grid.len(),
        origin_error,
        max_delta,
        tolerance,
        equidistant: max_delta <= tolerance,
    })
}
