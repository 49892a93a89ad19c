//! Meet/join on the three label lattices used throughout the crate, and
//! meet/join closure of point sets.
//!
//! Elements are stored as integer tags:
//!
//! * `Boolean(m)`: `0..2^m`, each tag an `m`-bit vector; meet/join are
//!   bitwise and/or. `Boolean(1)` is the usual `{0,1}`.
//! * `KSub(k)`: `0..=k`; meet keeps equal labels and sends the rest to 0,
//!   join lets 0 yield to the other label and sends clashing nonzero labels
//!   to 0. For `k = 2` the labels print as `0, 1, -1` (tag 2 is `-1`).
//! * `Diamond(k)`: tag 0 is bottom, tags `1..=k` are the atoms, tag `k+1`
//!   is top.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::costfn::{parse_k, split_call};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LatticeFamily {
    Boolean { m: usize },
    Ksub { k: usize },
    Diamond { k: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub Vec<u32>);

impl Point {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }
}

impl LatticeFamily {
    pub fn boolean(m: usize) -> Result<Self> {
        if m == 0 || m > 16 {
            return Err(Error::InvalidArgument(format!("boolean({m}) needs 1 <= m <= 16")));
        }
        Ok(LatticeFamily::Boolean { m })
    }

    pub fn ksub(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("ksub(k) needs k >= 1".into()));
        }
        Ok(LatticeFamily::Ksub { k })
    }

    pub fn diamond(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("diamond(k) needs k >= 1".into()));
        }
        Ok(LatticeFamily::Diamond { k })
    }

    /// Number of elements.
    pub fn size(&self) -> usize {
        match *self {
            LatticeFamily::Boolean { m } => 1 << m,
            LatticeFamily::Ksub { k } => k + 1,
            LatticeFamily::Diamond { k } => k + 2,
        }
    }

    pub fn meet_elem(&self, a: u32, b: u32) -> u32 {
        match *self {
            LatticeFamily::Boolean { .. } => a & b,
            LatticeFamily::Ksub { .. } => {
                if a == b {
                    a
                } else {
                    0
                }
            }
            LatticeFamily::Diamond { k } => {
                let top = k as u32 + 1;
                if a == b || b == top {
                    a
                } else if a == top {
                    b
                } else {
                    0
                }
            }
        }
    }

    pub fn join_elem(&self, a: u32, b: u32) -> u32 {
        match *self {
            LatticeFamily::Boolean { .. } => a | b,
            LatticeFamily::Ksub { .. } => {
                if a == 0 {
                    b
                } else if b == 0 || a == b {
                    a
                } else {
                    0
                }
            }
            LatticeFamily::Diamond { k } => {
                let top = k as u32 + 1;
                if a == b || b == 0 {
                    a
                } else if a == 0 {
                    b
                } else {
                    top
                }
            }
        }
    }

    pub fn label(&self, tag: u32) -> String {
        match *self {
            LatticeFamily::Boolean { m } => {
                if m == 1 {
                    tag.to_string()
                } else {
                    (0..m)
                        .map(|j| if (tag >> (m - 1 - j)) & 1 == 1 { '1' } else { '0' })
                        .collect()
                }
            }
            LatticeFamily::Ksub { k } => {
                if k == 2 && tag == 2 {
                    "-1".to_string()
                } else {
                    tag.to_string()
                }
            }
            LatticeFamily::Diamond { k } => {
                if tag == 0 {
                    "bot".to_string()
                } else if tag == k as u32 + 1 {
                    "top".to_string()
                } else {
                    tag.to_string()
                }
            }
        }
    }

    pub fn parse_label(&self, s: &str) -> Result<u32> {
        let s = s.trim();
        let bad = || Error::InvalidLabel(s.to_string());
        let tag = match *self {
            LatticeFamily::Boolean { m } => {
                if s.len() != m || !s.chars().all(|c| c == '0' || c == '1') {
                    return Err(bad());
                }
                u32::from_str_radix(s, 2).map_err(|_| bad())?
            }
            LatticeFamily::Ksub { k } => {
                if k == 2 && s == "-1" {
                    2
                } else {
                    s.parse::<u32>().map_err(|_| bad())?
                }
            }
            LatticeFamily::Diamond { k } => match s {
                "bot" | "⊥" => 0,
                "top" | "⊤" => k as u32 + 1,
                other => {
                    let v = other.parse::<u32>().map_err(|_| bad())?;
                    if v == 0 || v > k as u32 {
                        return Err(bad());
                    }
                    v
                }
            },
        };
        if tag as usize >= self.size() {
            return Err(bad());
        }
        Ok(tag)
    }

    pub fn parse_point(&self, labels: &[String]) -> Result<Point> {
        if labels.is_empty() {
            return Err(Error::InvalidArgument("empty point".into()));
        }
        labels
            .iter()
            .map(|l| self.parse_label(l))
            .collect::<Result<Vec<_>>>()
            .map(Point)
    }

    pub fn point_labels(&self, p: &Point) -> Vec<String> {
        p.0.iter().map(|&t| self.label(t)).collect()
    }

    fn validate(&self, p: &Point) -> Result<()> {
        if p.is_empty() {
            return Err(Error::InvalidArgument("empty point".into()));
        }
        let size = self.size();
        for &t in &p.0 {
            if t as usize >= size {
                return Err(Error::LabelOutOfRange { index: t as usize, size });
            }
        }
        Ok(())
    }

    /// Coordinatewise meet and join.
    pub fn meet_join(&self, x: &Point, y: &Point) -> Result<(Point, Point)> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch { expected: x.len(), got: y.len() });
        }
        self.validate(x)?;
        self.validate(y)?;
        Ok(self.meet_join_unchecked(&x.0, &y.0))
    }

    pub(crate) fn meet_join_unchecked(&self, x: &[u32], y: &[u32]) -> (Point, Point) {
        let meet = x.iter().zip(y).map(|(&a, &b)| self.meet_elem(a, b)).collect();
        let join = x.iter().zip(y).map(|(&a, &b)| self.join_elem(a, b)).collect();
        (Point(meet), Point(join))
    }
}

impl fmt::Display for LatticeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeFamily::Boolean { m } => write!(f, "boolean({m})"),
            LatticeFamily::Ksub { k } => write!(f, "ksub({k})"),
            LatticeFamily::Diamond { k } => write!(f, "diamond({k})"),
        }
    }
}

/// `boolean`, `boolean(m)`, `ksub(k)` or `diamond(k)`.
impl FromStr for LatticeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = split_call(s)?;
        match name {
            "boolean" if arg.is_none() => LatticeFamily::boolean(1),
            "boolean" => LatticeFamily::boolean(parse_k(name, arg)?),
            "ksub" => LatticeFamily::ksub(parse_k(name, arg)?),
            "diamond" => LatticeFamily::diamond(parse_k(name, arg)?),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

/// Smallest superset of `points` closed under coordinatewise meet and join,
/// sorted in tag-lexicographic order.
pub fn closure_meet_join(family: LatticeFamily, points: &[Point]) -> Result<Vec<Point>> {
    let Some(first) = points.first() else {
        return Ok(Vec::new());
    };
    for p in points {
        if p.len() != first.len() {
            return Err(Error::LengthMismatch { expected: first.len(), got: p.len() });
        }
        family.validate(p)?;
    }

    let mut closed: BTreeSet<Point> = BTreeSet::new();
    let mut members: Vec<Point> = Vec::new();
    let mut queue: Vec<Point> = Vec::new();
    for p in points {
        if closed.insert(p.clone()) {
            queue.push(p.clone());
        }
    }
    while let Some(w) = queue.pop() {
        members.push(w.clone());
        let mut fresh = Vec::new();
        for u in &members {
            let (m, j) = family.meet_join_unchecked(&u.0, &w.0);
            fresh.push(m);
            fresh.push(j);
        }
        for p in fresh {
            if closed.insert(p.clone()) {
                queue.push(p);
            }
        }
    }
    Ok(closed.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[u32]) -> Point {
        Point(v.to_vec())
    }

    #[test]
    fn boolean_componentwise() {
        let f = LatticeFamily::boolean(1).unwrap();
        let (m, j) = f.meet_join(&pt(&[1, 0, 1]), &pt(&[0, 1, 1])).unwrap();
        assert_eq!(m, pt(&[0, 0, 1]));
        assert_eq!(j, pt(&[1, 1, 1]));
    }

    #[test]
    fn ksub_clash_goes_to_zero() {
        let f = LatticeFamily::ksub(3).unwrap();
        let (m, j) = f.meet_join(&pt(&[1, 2]), &pt(&[1, 3])).unwrap();
        assert_eq!(m, pt(&[1, 0]));
        assert_eq!(j, pt(&[1, 0]));
        let (m, j) = f.meet_join(&pt(&[0, 2]), &pt(&[1, 2])).unwrap();
        assert_eq!(m, pt(&[0, 2]));
        assert_eq!(j, pt(&[1, 2]));
    }

    #[test]
    fn diamond_atoms() {
        let f = LatticeFamily::diamond(3).unwrap();
        let (m, j) = f.meet_join(&pt(&[1]), &pt(&[2])).unwrap();
        assert_eq!(f.point_labels(&m), vec!["bot"]);
        assert_eq!(f.point_labels(&j), vec!["top"]);
    }

    #[test]
    fn errors() {
        let f = LatticeFamily::ksub(2).unwrap();
        assert!(matches!(
            f.meet_join(&pt(&[1]), &pt(&[1, 2])),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            f.meet_join(&pt(&[3]), &pt(&[1])),
            Err(Error::LabelOutOfRange { .. })
        ));
        assert!(closure_meet_join(f, &[pt(&[1]), pt(&[1, 1])]).is_err());
        assert!(closure_meet_join(f, &[]).unwrap().is_empty());
    }

    #[test]
    fn bisubmodular_labels() {
        let f = LatticeFamily::ksub(2).unwrap();
        assert_eq!(f.parse_label("-1").unwrap(), 2);
        assert_eq!(f.label(2), "-1");
        assert!(f.parse_label("3").is_err());
    }

    #[test]
    fn singleton_closed() {
        let f = LatticeFamily::boolean(1).unwrap();
        assert_eq!(closure_meet_join(f, &[pt(&[1, 0])]).unwrap(), vec![pt(&[1, 0])]);
    }

    #[test]
    fn algebraic_laws_small() {
        let fams = [
            LatticeFamily::boolean(1).unwrap(),
            LatticeFamily::boolean(2).unwrap(),
            LatticeFamily::ksub(2).unwrap(),
            LatticeFamily::ksub(3).unwrap(),
            LatticeFamily::ksub(4).unwrap(),
            LatticeFamily::diamond(2).unwrap(),
            LatticeFamily::diamond(4).unwrap(),
        ];
        for f in fams {
            let n = f.size() as u32;
            for a in 0..n {
                assert_eq!(f.meet_elem(a, a), a);
                assert_eq!(f.join_elem(a, a), a);
                for b in 0..n {
                    assert_eq!(f.join_elem(a, b), f.join_elem(b, a), "{f:?}");
                    assert_eq!(f.meet_elem(a, b), f.meet_elem(b, a), "{f:?}");
                }
            }
        }
    }
}
