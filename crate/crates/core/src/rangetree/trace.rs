//! Text format for operation traces and differential replay.
//!
//! One operation per line:
//!
//! ```text
//! B 3 1,2 3,1 2,5        build over n points
//! U 0 7/2                set weight of point 0
//! M (-inf,3)x(1,inf) 0   multiply a range
//! D (-inf,3)x(1,inf)     undo one multiply by zero
//! Q [1,3]x[0,7)          query a range
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Bound, NaiveStore, Range2D, RangeTree2D, WeightedStore};
use crate::error::{Error, Result};
use crate::number::ExactNumber;

#[derive(Clone, Debug, PartialEq)]
pub enum TraceOp {
    Build(Vec<(ExactNumber, ExactNumber)>),
    Query(Range2D<ExactNumber>),
    Update(usize, ExactNumber),
    Multiply(Range2D<ExactNumber>, ExactNumber),
    DivideZero(Range2D<ExactNumber>),
}

impl fmt::Display for TraceOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceOp::Build(pts) => {
                write!(f, "B {}", pts.len())?;
                for (x, y) in pts {
                    write!(f, " {x},{y}")?;
                }
                Ok(())
            }
            TraceOp::Query(r) => write!(f, "Q {r}"),
            TraceOp::Update(id, w) => write!(f, "U {id} {w}"),
            TraceOp::Multiply(r, d) => write!(f, "M {r} {d}"),
            TraceOp::DivideZero(r) => write!(f, "D {r}"),
        }
    }
}

fn parse_interval(s: &str) -> Result<(Bound<ExactNumber>, Bound<ExactNumber>)> {
    let bad = || Error::InvalidRange(s.to_string());
    let open_lo = match s.chars().next() {
        Some('(') => true,
        Some('[') => false,
        _ => return Err(bad()),
    };
    let open_hi = match s.chars().last() {
        Some(')') => true,
        Some(']') => false,
        _ => return Err(bad()),
    };
    let (lo, hi) = s[1..s.len() - 1].split_once(',').ok_or_else(bad)?;
    let side = |t: &str, open: bool, inf: &str| -> Result<Bound<ExactNumber>> {
        let t = t.trim();
        if t == inf {
            return if open { Ok(Bound::Unbounded) } else { Err(bad()) };
        }
        let v: ExactNumber = t.parse()?;
        Ok(if open { Bound::Open(v) } else { Bound::Closed(v) })
    };
    Ok((side(lo, open_lo, "-inf")?, side(hi, open_hi, "inf")?))
}

impl FromStr for Range2D<ExactNumber> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let cut = s
            .find(")x")
            .or_else(|| s.find("]x"))
            .ok_or_else(|| Error::InvalidRange(s.to_string()))?;
        let (xl, xh) = parse_interval(&s[..=cut])?;
        let (yl, yh) = parse_interval(&s[cut + 2..])?;
        Range2D::new(xl, xh, yl, yh)
    }
}

impl FromStr for TraceOp {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad trace line {line:?}"));
        let mut parts = line.split_whitespace();
        let op = parts.next().ok_or_else(bad)?;
        let rest: Vec<&str> = parts.collect();
        match (op, rest.as_slice()) {
            ("B", [n, pts @ ..]) => {
                let n: usize = n.parse().map_err(|_| bad())?;
                if pts.len() != n {
                    return Err(bad());
                }
                let pts = pts
                    .iter()
                    .map(|p| {
                        let (x, y) = p.split_once(',').ok_or_else(bad)?;
                        Ok((x.parse()?, y.parse()?))
                    })
                    .collect::<Result<_>>()?;
                Ok(TraceOp::Build(pts))
            }
            ("Q", [r]) => Ok(TraceOp::Query(r.parse()?)),
            ("U", [id, w]) => Ok(TraceOp::Update(id.parse().map_err(|_| bad())?, w.parse()?)),
            ("M", [r, d]) => Ok(TraceOp::Multiply(r.parse()?, d.parse()?)),
            ("D", [r]) => Ok(TraceOp::DivideZero(r.parse()?)),
            _ => Err(bad()),
        }
    }
}

/// A parsed trace; must start with a build.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub ops: Vec<TraceOp>,
}

impl FromStr for Trace {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let ops = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::parse)
            .collect::<Result<Vec<TraceOp>>>()?;
        Ok(Trace { ops })
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.ops {
            writeln!(f, "{op}")?;
        }
        Ok(())
    }
}

/// First disagreement between the tree and the naive store.
#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    /// Zero-based index into the trace's operations.
    pub op_index: usize,
    pub tree: String,
    pub naive: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReplayReport {
    pub operations: usize,
    pub queries: usize,
    pub mismatch: Option<Mismatch>,
}

fn outcome(r: &Result<()>) -> String {
    match r {
        Ok(()) => "ok".into(),
        Err(e) => format!("error: {e}"),
    }
}

/// Runs `trace` against both structures in exact arithmetic and stops at the
/// first differing observation (query value or error status).
pub fn replay(trace: &Trace) -> Result<ReplayReport> {
    let mut ops = trace.ops.iter().enumerate();
    let Some((_, TraceOp::Build(points))) = ops.next() else {
        return Err(Error::Parse("trace must start with a B line".into()));
    };
    let mut tree = RangeTree2D::<ExactNumber, ExactNumber>::new(points.clone());
    let mut naive = <NaiveStore<ExactNumber, ExactNumber> as WeightedStore<_, _>>::build(points.clone());
    let mut report = ReplayReport {
        operations: 1,
        ..Default::default()
    };
    for (idx, op) in ops {
        report.operations += 1;
        let (a, b) = match op {
            TraceOp::Build(_) => return Err(Error::Parse("B may only appear first".into())),
            TraceOp::Query(r) => {
                report.queries += 1;
                (tree.query(r).to_string(), naive.query(r).to_string())
            }
            TraceOp::Update(id, w) => (outcome(&tree.update(*id, w.clone())), outcome(&naive.update(*id, w.clone()))),
            TraceOp::Multiply(r, d) => {
                tree.multiply(r, d);
                naive.multiply(r, d);
                continue;
            }
            TraceOp::DivideZero(r) => (outcome(&tree.divide_zero(r)), outcome(&naive.divide_zero(r))),
        };
        if a != b {
            report.mismatch = Some(Mismatch {
                op_index: idx,
                tree: a,
                naive: b,
            });
            break;
        }
    }
    Ok(report)
}

/// Random trace over an integer grid mixing the quadrant and strip shapes
/// with arbitrary rectangles. Factors come from `{0, ±small rationals}` and
/// the inverses of earlier factors, and most zero divides undo an earlier
/// zero multiply on the same range.
pub fn random_trace<R: Rng>(rng: &mut R, points: usize, ops: usize) -> Trace {
    let grid = (points as i64).max(2);
    let coord = |rng: &mut R| ExactNumber::from(rng.gen_range(0..=grid));
    let pts: Vec<(ExactNumber, ExactNumber)> = (0..points).map(|_| (coord(rng), coord(rng))).collect();
    let mut out = vec![TraceOp::Build(pts)];
    let mut zeroed: Vec<Range2D<ExactNumber>> = Vec::new();
    let mut factors: Vec<(Range2D<ExactNumber>, ExactNumber)> = Vec::new();

    let bound = |rng: &mut R| -> Bound<ExactNumber> {
        match rng.gen_range(0..3) {
            0 => Bound::Unbounded,
            1 => Bound::Open(ExactNumber::from(rng.gen_range(-1..=grid + 1))),
            _ => Bound::Closed(ExactNumber::from(rng.gen_range(-1..=grid + 1))),
        }
    };
    let range = |rng: &mut R| -> Range2D<ExactNumber> {
        match rng.gen_range(0..4) {
            0 => Range2D::nw_quadrant(coord(rng), coord(rng)),
            1 => Range2D::left_strip(coord(rng)),
            2 => Range2D::full(),
            _ => loop {
                if let Ok(r) = Range2D::new(bound(rng), bound(rng), bound(rng), bound(rng)) {
                    break r;
                }
            },
        }
    };

    for _ in 0..ops {
        let op = match rng.gen_range(0..10) {
            0..=2 => TraceOp::Query(range(rng)),
            3 | 4 if points > 0 => {
                let w = if rng.gen_bool(0.1) {
                    ExactNumber::zero()
                } else {
                    ExactNumber::new(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=9))
                };
                TraceOp::Update(rng.gen_range(0..points), w)
            }
            5 => {
                let r = range(rng);
                zeroed.push(r.clone());
                TraceOp::Multiply(r, ExactNumber::zero())
            }
            6 if !zeroed.is_empty() => {
                let i = rng.gen_range(0..zeroed.len());
                TraceOp::DivideZero(zeroed.swap_remove(i))
            }
            7 if !factors.is_empty() && rng.gen_bool(0.5) => {
                let i = rng.gen_range(0..factors.len());
                let (r, d) = factors.swap_remove(i);
                TraceOp::Multiply(r, d.recip())
            }
            8 if rng.gen_bool(0.2) => TraceOp::DivideZero(range(rng)),
            _ => {
                let r = range(rng);
                let num = *[-3i64, -2, -1, 1, 2, 3].choose(rng).unwrap();
                let d = ExactNumber::new(num, rng.gen_range(1i64..=4));
                factors.push((r.clone(), d.clone()));
                TraceOp::Multiply(r, d)
            }
        };
        out.push(op);
    }
    Trace { ops: out }
}
