//! Bands and node links.
//!
//! A band is a cyclic arrangement of `g` positions.  Each position is either a
//! *plus* or a *node*.  Positions are numbered `0..g` and all position
//! arithmetic is modulo `g`, with "rightward" meaning increasing position.
//!
//! A [`Link`] connects the nodes of one band bijectively to the nodes of
//! another band of the same circumference by non-crossing curves drawn on the
//! cylinder between them.  Each curve records a *lifted displacement*: the
//! total rightward drift of the curve, which reduces to the positional
//! difference of its endpoints modulo `g`.  Non-crossing is equivalent to the
//! lifted endpoint map on the universal cover being strictly order-preserving.

use std::collections::{BTreeMap, BTreeSet};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// A cyclic arrangement of `g` positions, each a plus or a node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Band {
    g: usize,
    plus: BTreeSet<usize>,
}

impl Band {
    /// Builds a band with circumference `g` and the given plus positions.
    ///
    /// Plus positions are reduced modulo `g`, so the stored set is canonical.
    /// Fails if `g == 0`.
    pub fn new(g: usize, plus: impl IntoIterator<Item = usize>) -> Result<Self> {
        if g == 0 {
            return Err(Error::InvalidBand("circumference must be positive".into()));
        }
        let plus = plus.into_iter().map(|p| p % g).collect();
        Ok(Band { g, plus })
    }

    /// The band with no pluses: every position is a node.
    pub fn full(g: usize) -> Result<Self> {
        Band::new(g, std::iter::empty())
    }

    /// Circumference of the band.
    pub fn g(&self) -> usize {
        self.g
    }

    /// The plus positions, in increasing order.
    pub fn plus_positions(&self) -> &BTreeSet<usize> {
        &self.plus
    }

    /// Whether `pos` (reduced modulo `g`) is a plus.
    pub fn is_plus(&self, pos: usize) -> bool {
        self.plus.contains(&(pos % self.g))
    }

    /// Whether `pos` (reduced modulo `g`) is a node.
    pub fn is_node(&self, pos: usize) -> bool {
        !self.is_plus(pos)
    }

    /// The node positions, in increasing order.
    pub fn nodes(&self) -> Vec<usize> {
        (0..self.g).filter(|p| !self.plus.contains(p)).collect()
    }

    /// Number of nodes, written `d` throughout the crate.
    pub fn node_count(&self) -> usize {
        self.g - self.plus.len()
    }

    /// The band obtained by shifting every plus rightward by `k` positions.
    pub fn rotated(&self, k: i64) -> Self {
        let g = self.g as i64;
        let plus = self
            .plus
            .iter()
            .map(|&p| (p as i64 + k).rem_euclid(g) as usize)
            .collect();
        Band { g: self.g, plus }
    }

    /// The band with the same circumference whose pluses are this band's
    /// pluses together with `extra` (reduced modulo `g`).
    pub fn with_pluses_added(&self, extra: impl IntoIterator<Item = usize>) -> Self {
        let mut plus = self.plus.clone();
        plus.extend(extra.into_iter().map(|p| p % self.g));
        Band { g: self.g, plus }
    }

    /// The next node strictly rightward of `pos`, wrapping around; with a
    /// single node this returns that node itself (a full turn).  `None` if the
    /// band has no nodes.
    pub fn next_node_rightward(&self, pos: usize) -> Option<usize> {
        if self.node_count() == 0 {
            return None;
        }
        let mut q = (pos + 1) % self.g;
        for _ in 0..self.g {
            if self.is_node(q) {
                return Some(q);
            }
            q = (q + 1) % self.g;
        }
        None
    }
}

#[derive(Serialize, Deserialize)]
struct BandWire {
    g: usize,
    plus: Vec<usize>,
}

impl Serialize for Band {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        BandWire {
            g: self.g,
            plus: self.plus.iter().copied().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Band {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = BandWire::deserialize(deserializer)?;
        Band::new(wire.g, wire.plus).map_err(D::Error::custom)
    }
}

/// A non-crossing bijection between the nodes of two bands of equal
/// circumference, with one integer *lifted displacement* per curve.
///
/// The curve starting at source node `s` ends at target node
/// `(s + disp) mod g`; the displacement itself remembers how many times the
/// curve wraps the cylinder.  Links compose like functions and the total
/// displacement is additive under composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    source: Band,
    target: Band,
    /// Map from source node to lifted displacement.
    curves: BTreeMap<usize, i64>,
}

impl Link {
    /// Builds a link after checking all structural constraints:
    ///
    /// * both bands share one circumference and one node count;
    /// * `curves` assigns exactly one displacement to every source node;
    /// * every curve lands on a target node, and the landing map is a
    ///   bijection onto the target nodes;
    /// * the lifted endpoint map is strictly order-preserving (the curves can
    ///   be drawn without crossings).
    pub fn new(source: Band, target: Band, curves: BTreeMap<usize, i64>) -> Result<Self> {
        if source.g() != target.g() {
            return Err(Error::BandMismatch(format!(
                "circumferences differ: {} vs {}",
                source.g(),
                target.g()
            )));
        }
        if source.node_count() != target.node_count() {
            return Err(Error::BandMismatch(format!(
                "node counts differ: {} vs {}",
                source.node_count(),
                target.node_count()
            )));
        }
        let g = source.g() as i64;
        let source_nodes = source.nodes();
        if curves.len() != source_nodes.len() {
            return Err(Error::InvalidLink(format!(
                "expected one curve per source node ({}), got {}",
                source_nodes.len(),
                curves.len()
            )));
        }
        let mut landed = BTreeSet::new();
        for (&from, &disp) in &curves {
            if !source.is_node(from) || from >= source.g() {
                return Err(Error::InvalidLink(format!(
                    "curve starts at {from}, which is not a source node"
                )));
            }
            let to = (from as i64 + disp).rem_euclid(g) as usize;
            if !target.is_node(to) {
                return Err(Error::InvalidLink(format!(
                    "curve from {from} with displacement {disp} lands on {to}, which is not a target node"
                )));
            }
            if !landed.insert(to) {
                return Err(Error::InvalidLink(format!(
                    "two curves land on target node {to}"
                )));
            }
        }
        // Non-crossing: lift the source nodes in increasing order; their
        // images n_i + disp_i must be strictly increasing, and the image of
        // the first node's next lift (one full turn later) must stay above
        // the last image.
        let lifts: Vec<i64> = curves.iter().map(|(&n, &d)| n as i64 + d).collect();
        for w in lifts.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidLink(
                    "curves cross: lifted endpoints are not strictly increasing".into(),
                ));
            }
        }
        if let (Some(first), Some(last)) = (lifts.first(), lifts.last()) {
            if first + g <= *last {
                return Err(Error::InvalidLink(
                    "curves cross: lifted endpoints span a full turn or more".into(),
                ));
            }
        }
        Ok(Link {
            source,
            target,
            curves,
        })
    }

    /// The identity link on a band: every node maps to itself with
    /// displacement zero.
    pub fn identity(band: &Band) -> Self {
        let curves = band.nodes().into_iter().map(|n| (n, 0)).collect();
        Link {
            source: band.clone(),
            target: band.clone(),
            curves,
        }
    }

    /// The fundamental self-link: each node maps to the next node rightward,
    /// with displacement equal to the gap walked (a full turn when the band
    /// has a single node).  Its total displacement is `g`.  Fails on a band
    /// with no nodes.
    pub fn fundamental(band: &Band) -> Result<Self> {
        if band.node_count() == 0 {
            return Err(Error::InvalidInput(
                "fundamental link requires at least one node".into(),
            ));
        }
        let g = band.g();
        let mut curves = BTreeMap::new();
        for n in band.nodes() {
            let next = band
                .next_node_rightward(n)
                .expect("node count checked above");
            let gap = if next == n {
                g as i64
            } else {
                (next as i64 - n as i64).rem_euclid(g as i64)
            };
            curves.insert(n, gap);
        }
        Link::new(band.clone(), band.clone(), curves)
    }

    /// The one-step shift link from a band to its rightward rotation: every
    /// node `n` maps to `n + 1` with displacement 1.  Its total displacement
    /// is the node count `d`.
    pub fn shift(band: &Band) -> Result<Self> {
        let target = band.rotated(1);
        let curves = band.nodes().into_iter().map(|n| (n, 1)).collect();
        Link::new(band.clone(), target, curves)
    }

    /// Source band.
    pub fn source(&self) -> &Band {
        &self.source
    }

    /// Target band.
    pub fn target(&self) -> &Band {
        &self.target
    }

    /// The displacement of the curve starting at source node `from`.
    pub fn displacement(&self, from: usize) -> Option<i64> {
        self.curves.get(&from).copied()
    }

    /// Map from source node to lifted displacement.
    pub fn curves(&self) -> &BTreeMap<usize, i64> {
        &self.curves
    }

    /// Sum of the lifted displacements of all curves.  Additive under
    /// composition and negated by inversion.
    pub fn total_displacement(&self) -> i64 {
        self.curves.values().sum()
    }

    /// The composite link: first `self`, then `next`.  Fails unless `next`
    /// starts on exactly the band `self` ends on.
    pub fn compose(&self, next: &Link) -> Result<Self> {
        if self.target != next.source {
            return Err(Error::BandMismatch(
                "composition requires the first link to end on the band the second starts on"
                    .into(),
            ));
        }
        let g = self.source.g() as i64;
        let mut curves = BTreeMap::new();
        for (&from, &d1) in &self.curves {
            let mid = (from as i64 + d1).rem_euclid(g) as usize;
            let d2 = next
                .curves
                .get(&mid)
                .ok_or_else(|| Error::Internal(format!("no curve at intermediate node {mid}")))?;
            curves.insert(from, d1 + d2);
        }
        Link::new(self.source.clone(), next.target.clone(), curves)
    }

    /// The inverse link, running every curve backwards.
    pub fn invert(&self) -> Self {
        let g = self.source.g() as i64;
        let curves = self
            .curves
            .iter()
            .map(|(&from, &d)| ((from as i64 + d).rem_euclid(g) as usize, -d))
            .collect();
        Link {
            source: self.target.clone(),
            target: self.source.clone(),
            curves,
        }
    }

    /// For a self-link (equal source and target), returns `Some(k)` when the
    /// link equals the `k`-th power of the fundamental link, and `None`
    /// otherwise.  Negative `k` uses the inverse fundamental link; `k = 0` is
    /// the identity.
    pub fn power_of_fundamental(&self) -> Result<Option<i64>> {
        if self.source != self.target {
            return Err(Error::BandMismatch(
                "powers of the fundamental link are defined only for self-links".into(),
            ));
        }
        let g = self.source.g() as i64;
        let v = self.total_displacement();
        if v.rem_euclid(g) != 0 {
            return Ok(None);
        }
        let k = v / g;
        let step = if k >= 0 {
            Link::fundamental(&self.source)?
        } else {
            Link::fundamental(&self.source)?.invert()
        };
        let mut acc = Link::identity(&self.source);
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&step)?;
        }
        Ok(if acc == *self { Some(k) } else { None })
    }
}

#[derive(Serialize, Deserialize)]
struct CurveWire {
    from: usize,
    disp: i64,
}

#[derive(Serialize, Deserialize)]
struct LinkWire {
    source: Band,
    target: Band,
    curves: Vec<CurveWire>,
}

impl Serialize for Link {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        LinkWire {
            source: self.source.clone(),
            target: self.target.clone(),
            curves: self
                .curves
                .iter()
                .map(|(&from, &disp)| CurveWire { from, disp })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Link {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = LinkWire::deserialize(deserializer)?;
        let mut curves = BTreeMap::new();
        for c in wire.curves {
            if curves.insert(c.from, c.disp).is_some() {
                return Err(D::Error::custom(format!(
                    "duplicate curve starting at {}",
                    c.from
                )));
            }
        }
        Link::new(wire.source, wire.target, curves).map_err(D::Error::custom)
    }
}
