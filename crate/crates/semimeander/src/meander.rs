//! Periodic semi-meanders.
//!
//! A periodic semi-meander decorates a band with `r` non-crossing *arcs*
//! joining pairs of nodes above the band and vertical *semilines* at the
//! remaining `d − 2r` nodes.  An arc is an ordered pair `(left, right)`; the
//! positions strictly between `left` and `right` traveling rightward form its
//! *covered interval*, so the same endpoint pair gives two different arcs
//! depending on which side of the cylinder the arc covers.
//!
//! The module provides validation with machine-readable violation reasons,
//! exhaustive enumeration in canonical order, span bookkeeping, basic-arc
//! surgery, the nesting partial order, saturated decompositions, and cycle
//! profiles with rendered divisibility conditions.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::band::Band;
use crate::{Error, Result};

/// An arc drawn above the band from `left` to `right`, covering the positions
/// strictly between them traveling rightward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Arc {
    pub left: usize,
    pub right: usize,
}

impl Arc {
    pub fn new(left: usize, right: usize) -> Self {
        Arc { left, right }
    }

    /// Number of rightward steps from `left` to `right`; in `1..=g-1` for a
    /// valid arc on a band of circumference `g`.
    pub fn span(&self, g: usize) -> usize {
        (self.right + g - self.left % g) % g
    }

    /// The covered interval: positions strictly between the endpoints,
    /// traveling rightward, in walk order.
    pub fn covered(&self, g: usize) -> Vec<usize> {
        (1..self.span(g)).map(|o| (self.left + o) % g).collect()
    }

    /// Whether `pos` lies strictly inside the covered interval.
    pub fn covers(&self, g: usize, pos: usize) -> bool {
        let off = (pos + g - self.left % g) % g;
        off >= 1 && off < self.span(g)
    }

    /// Whether the closed walk of `self` lies entirely inside the covered
    /// interval of `outer` (strict nesting).
    pub fn nested_in(&self, g: usize, outer: &Arc) -> bool {
        let s_outer = outer.span(g);
        let s_inner = self.span(g);
        let off = (self.left + g - outer.left % g) % g;
        off >= 1 && off + s_inner <= s_outer.saturating_sub(1)
    }

    /// Whether the closed walks of the two arcs are disjoint.
    pub fn disjoint_from(&self, g: usize, other: &Arc) -> bool {
        let s_a = other.span(g);
        let s_b = self.span(g);
        let off = (self.left + g - other.left % g) % g;
        off > s_a && off + s_b < g
    }

    /// Laminarity: nested one way or the other, or fully disjoint.
    pub fn compatible_with(&self, g: usize, other: &Arc) -> bool {
        self.nested_in(g, other) || other.nested_in(g, self) || self.disjoint_from(g, other)
    }
}

/// Machine-readable reason a candidate diagram failed validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ViolationReason {
    /// An arc endpoint or semiline position is `>= g`.
    PositionOutOfRange { pos: usize },
    /// An arc endpoint sits on a plus.
    ArcEndpointOnPlus { pos: usize },
    /// A semiline sits on a plus.
    SemilineOnPlus { pos: usize },
    /// An arc has equal endpoints.
    ZeroLengthArc { pos: usize },
    /// A node is used by two arcs, two semilines, or one of each.
    RoleRepeated { pos: usize },
    /// A node is neither an arc endpoint nor a semiline.
    NodeUnassigned { pos: usize },
    /// Two arcs are neither nested nor disjoint.
    ArcsCross { first: Arc, second: Arc },
    /// A semiline lies inside an arc's covered interval.
    SemilineCovered { semiline: usize, by: Arc },
}

impl fmt::Display for ViolationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationReason::PositionOutOfRange { pos } => {
                write!(f, "position {pos} is outside the band")
            }
            ViolationReason::ArcEndpointOnPlus { pos } => {
                write!(f, "arc endpoint {pos} is a plus, not a node")
            }
            ViolationReason::SemilineOnPlus { pos } => {
                write!(f, "semiline position {pos} is a plus, not a node")
            }
            ViolationReason::ZeroLengthArc { pos } => {
                write!(f, "arc at {pos} has equal endpoints")
            }
            ViolationReason::RoleRepeated { pos } => {
                write!(f, "node {pos} has more than one role")
            }
            ViolationReason::NodeUnassigned { pos } => {
                write!(f, "node {pos} is neither an arc endpoint nor a semiline")
            }
            ViolationReason::ArcsCross { first, second } => write!(
                f,
                "arcs ({},{}) and ({},{}) cross",
                first.left, first.right, second.left, second.right
            ),
            ViolationReason::SemilineCovered { semiline, by } => write!(
                f,
                "semiline {semiline} lies under arc ({},{})",
                by.left, by.right
            ),
        }
    }
}

/// A valid periodic semi-meander: a band, `r` pairwise laminar arcs, and
/// semilines at every remaining node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PeriodicSemiMeander {
    band: Band,
    /// Sorted by (left, right).
    arcs: Vec<Arc>,
    semilines: BTreeSet<usize>,
}

impl PeriodicSemiMeander {
    /// Builds a diagram after full validation; arcs are stored sorted.
    pub fn new(
        band: Band,
        arcs: impl IntoIterator<Item = Arc>,
        semilines: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let mut arcs: Vec<Arc> = arcs.into_iter().collect();
        let semilines: BTreeSet<usize> = semilines.into_iter().collect();
        Self::validate_parts(&band, &arcs, &semilines).map_err(Error::InvalidDiagram)?;
        arcs.sort();
        Ok(PeriodicSemiMeander {
            band,
            arcs,
            semilines,
        })
    }

    /// Checks every structural invariant, reporting the first violation found:
    /// positions in range and on nodes, no zero-length arcs, every node in
    /// exactly one role, pairwise laminar arcs, and no semiline under an arc.
    pub fn validate_parts(
        band: &Band,
        arcs: &[Arc],
        semilines: &BTreeSet<usize>,
    ) -> std::result::Result<(), ViolationReason> {
        let g = band.g();
        for arc in arcs {
            for pos in [arc.left, arc.right] {
                if pos >= g {
                    return Err(ViolationReason::PositionOutOfRange { pos });
                }
            }
            if arc.left == arc.right {
                return Err(ViolationReason::ZeroLengthArc { pos: arc.left });
            }
        }
        for &s in semilines {
            if s >= g {
                return Err(ViolationReason::PositionOutOfRange { pos: s });
            }
        }
        let mut assigned = vec![false; g];
        for arc in arcs {
            for pos in [arc.left, arc.right] {
                if band.is_plus(pos) {
                    return Err(ViolationReason::ArcEndpointOnPlus { pos });
                }
                if assigned[pos] {
                    return Err(ViolationReason::RoleRepeated { pos });
                }
                assigned[pos] = true;
            }
        }
        for &s in semilines {
            if band.is_plus(s) {
                return Err(ViolationReason::SemilineOnPlus { pos: s });
            }
            if assigned[s] {
                return Err(ViolationReason::RoleRepeated { pos: s });
            }
            assigned[s] = true;
        }
        for node in band.nodes() {
            if !assigned[node] {
                return Err(ViolationReason::NodeUnassigned { pos: node });
            }
        }
        for (i, a) in arcs.iter().enumerate() {
            for b in &arcs[i + 1..] {
                if !a.compatible_with(g, b) {
                    return Err(ViolationReason::ArcsCross {
                        first: *a,
                        second: *b,
                    });
                }
            }
        }
        for &s in semilines {
            for arc in arcs {
                if arc.covers(g, s) {
                    return Err(ViolationReason::SemilineCovered {
                        semiline: s,
                        by: *arc,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn band(&self) -> &Band {
        &self.band
    }

    pub fn g(&self) -> usize {
        self.band.g()
    }

    /// Arcs in canonical (sorted) order.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn semilines(&self) -> &BTreeSet<usize> {
        &self.semilines
    }

    /// Number of arcs, written `r`.
    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Number of semilines, `d − 2r`.
    pub fn defect(&self) -> usize {
        self.semilines.len()
    }

    /// Sum of all arc spans, written `ℓ`.
    pub fn total_span(&self) -> u64 {
        let g = self.g();
        self.arcs.iter().map(|a| a.span(g) as u64).sum()
    }

    /// The diagram with every position shifted rightward by `k`, living on
    /// the rotated band.  Rotation preserves all validity constraints.
    pub fn rotated(&self, k: i64) -> Self {
        let g = self.g() as i64;
        let shift = |p: usize| (p as i64 + k).rem_euclid(g) as usize;
        Self::new(
            self.band.rotated(k),
            self.arcs
                .iter()
                .map(|a| Arc::new(shift(a.left), shift(a.right))),
            self.semilines.iter().map(|&s| shift(s)),
        )
        .expect("rotation preserves diagram validity")
    }

    /// Whether the arc's covered interval contains only pluses; equivalently,
    /// the arc joins a node to the next node leftward.
    pub fn is_basic(&self, arc: &Arc) -> bool {
        let g = self.g();
        arc.covered(g).into_iter().all(|p| self.band.is_plus(p))
    }

    /// The arcs not lying over any node, in canonical order.
    pub fn basic_arcs(&self) -> Vec<Arc> {
        self.arcs
            .iter()
            .copied()
            .filter(|a| self.is_basic(a))
            .collect()
    }

    /// Deletes a basic arc and turns its endpoints into pluses, producing a
    /// diagram with one arc fewer on the enlarged plus set.
    pub fn remove_arc(&self, arc: &Arc) -> Result<Self> {
        if !self.arcs.contains(arc) {
            return Err(Error::NoSuchArc {
                left: arc.left,
                right: arc.right,
            });
        }
        if !self.is_basic(arc) {
            return Err(Error::NonBasicArc {
                left: arc.left,
                right: arc.right,
            });
        }
        let band = self.band.with_pluses_added([arc.left, arc.right]);
        let arcs = self.arcs.iter().copied().filter(|a| a != arc);
        Self::new(band, arcs, self.semilines.iter().copied())
    }

    /// Whether every arc of `self` is an arc of `other` (the nesting partial
    /// order on diagrams over one band).
    pub fn precedes(&self, other: &Self) -> Result<bool> {
        if self.band != other.band {
            return Err(Error::BandMismatch(
                "the diagram partial order compares diagrams on one band".into(),
            ));
        }
        Ok(self.arcs.iter().all(|a| other.arcs.contains(a)))
    }

    /// All valid diagrams with exactly `r` arcs on `band`, in canonical order
    /// (sorted arc lists), without duplicates.
    pub fn enumerate(band: &Band, r: usize) -> Result<Vec<Self>> {
        let d = band.node_count();
        if 2 * r > d {
            return Err(Error::ArcCountOutOfRange { r, d });
        }
        let nodes = band.nodes();
        let mut out = BTreeSet::new();
        let mut arcs: Vec<Arc> = Vec::with_capacity(r);
        let mut semilines: BTreeSet<usize> = BTreeSet::new();
        let mut used = vec![false; band.g()];
        search(
            band,
            &nodes,
            r,
            &mut used,
            &mut arcs,
            &mut semilines,
            &mut out,
        );
        Ok(out.into_iter().collect())
    }

    /// Splits the diagram along a saturated arc subset `delta`:
    /// `flat` keeps exactly the arcs of `delta` (semilines everywhere else on
    /// the original band); `residual` keeps the remaining arcs and original
    /// semilines on the band whose pluses also include `delta`'s endpoints.
    pub fn flat_decompose(&self, delta: &[Arc]) -> Result<(Self, Self)> {
        let g = self.g();
        for d in delta {
            if !self.arcs.contains(d) {
                return Err(Error::NoSuchArc {
                    left: d.left,
                    right: d.right,
                });
            }
        }
        // Saturation: anything nested inside a selected arc must be selected.
        for a in &self.arcs {
            if delta.contains(a) {
                continue;
            }
            if delta.iter().any(|d| a.nested_in(g, d)) {
                return Err(Error::NotSaturated {
                    left: a.left,
                    right: a.right,
                });
            }
        }
        let delta_endpoints: BTreeSet<usize> =
            delta.iter().flat_map(|a| [a.left, a.right]).collect();
        let flat_semilines = self
            .band
            .nodes()
            .into_iter()
            .filter(|n| !delta_endpoints.contains(n));
        let flat = Self::new(self.band.clone(), delta.iter().copied(), flat_semilines)?;
        let residual_band = self.band.with_pluses_added(delta_endpoints.iter().copied());
        let residual_arcs = self.arcs.iter().copied().filter(|a| !delta.contains(a));
        let residual = Self::new(residual_band, residual_arcs, self.semilines.iter().copied())?;
        Ok((flat, residual))
    }

    /// The cycle profile for this diagram relative to a set `t` of plus
    /// positions: the enlarged plus set, the right end-nodes adjoined to `t`,
    /// the codimension/fiber dimension (both `r`), and one rendered
    /// divisibility condition per odd-span arc.
    ///
    /// The rendered grammar nests covered arcs as parenthesized factors
    /// divided by their own power, e.g. `p | V6 (V0V1/p)(V2V3/p) V4`.  The
    /// profile is `unanchored` when it falls outside the displayed pattern:
    /// an even-span arc (which gets no condition), a plus inside a covered
    /// interval, or nesting deeper than two levels.
    pub fn go_profile(&self, t: &BTreeSet<usize>) -> Result<GoCycleProfile> {
        let g = self.g();
        for &pos in t {
            if !self.band.is_plus(pos) {
                return Err(Error::InvalidInput(format!(
                    "profile base point {pos} is not a plus of the band"
                )));
            }
        }
        let mut s_a: BTreeSet<usize> = self.band.plus_positions().clone();
        for a in &self.arcs {
            s_a.insert(a.left);
            s_a.insert(a.right);
        }
        let t_a_increment: BTreeSet<usize> = self.arcs.iter().map(|a| a.right).collect();
        let t_a: BTreeSet<usize> = t.union(&t_a_increment).copied().collect();

        let mut unanchored = false;
        for a in &self.arcs {
            if a.span(g) % 2 == 0 {
                unanchored = true;
            }
            if a.covered(g).iter().any(|&p| self.band.is_plus(p)) {
                unanchored = true;
            }
            let depth = 1 + self.arcs.iter().filter(|b| a.nested_in(g, b)).count();
            if depth > 2 {
                unanchored = true;
            }
        }

        let conditions = self
            .arcs
            .iter()
            .filter(|a| a.span(g) % 2 == 1)
            .map(|a| self.condition_for(a))
            .collect();

        Ok(GoCycleProfile {
            s_a,
            t_a_increment,
            t_a,
            codimension: self.arc_count(),
            fiber_dimension: self.arc_count(),
            conditions,
            unanchored,
        })
    }

    /// Direct children of `arc`: arcs nested in it but in no smaller arc
    /// nested in it.
    fn direct_children(&self, arc: &Arc) -> Vec<Arc> {
        let g = self.g();
        let mut children: Vec<Arc> = self
            .arcs
            .iter()
            .copied()
            .filter(|c| {
                c.nested_in(g, arc)
                    && !self
                        .arcs
                        .iter()
                        .any(|m| m != c && m != arc && c.nested_in(g, m) && m.nested_in(g, arc))
            })
            .collect();
        children.sort_by_key(|c| (c.left + g - arc.left % g) % g);
        children
    }

    fn condition_for(&self, arc: &Arc) -> VerschiebungCondition {
        let g = self.g();
        let span = arc.span(g);
        let power = span.div_ceil(2);
        let raw = format!("{} | {}", power_prefix(power), raw_product(g, arc));
        // Fall back to the flat product when a covered arc has even span
        // (its own power would not be integral).
        let all_covered_odd = self
            .arcs
            .iter()
            .filter(|c| c.nested_in(g, arc))
            .all(|c| c.span(g) % 2 == 1);
        let rendered = if all_covered_odd {
            let children = self.direct_children(arc);
            let child_power_sum: usize = children.iter().map(|c| c.span(g).div_ceil(2)).sum();
            let shown = power - child_power_sum;
            format!("{} | {}", power_prefix(shown), self.join_tokens(arc))
        } else {
            raw.clone()
        };
        VerschiebungCondition {
            start: arc.left,
            length: span,
            power,
            rendered,
            raw,
        }
    }

    /// Walks the closed interval of `arc`, emitting runs of position factors
    /// and parenthesized groups for direct children, joined with a space
    /// everywhere except between two adjacent groups.
    fn join_tokens(&self, arc: &Arc) -> String {
        let g = self.g();
        let children = self.direct_children(arc);
        let mut tokens: Vec<(bool, String)> = Vec::new(); // (is_group, text)
        let mut run = String::new();
        let mut o = 0usize;
        while o <= arc.span(g) {
            let pos = (arc.left + o) % g;
            if let Some(c) = children.iter().find(|c| c.left == pos) {
                if !run.is_empty() {
                    tokens.push((false, std::mem::take(&mut run)));
                }
                let inner_power = c.span(g).div_ceil(2);
                let suffix = if inner_power == 1 {
                    String::new()
                } else {
                    format!("^{inner_power}")
                };
                tokens.push((true, format!("({}/p{})", self.join_tokens(c), suffix)));
                o += c.span(g) + 1;
            } else {
                run.push_str(&format!("V{pos}"));
                o += 1;
            }
        }
        if !run.is_empty() {
            tokens.push((false, run));
        }
        let mut s = String::new();
        for (i, (is_group, text)) in tokens.iter().enumerate() {
            if i > 0 && !(*is_group && tokens[i - 1].0) {
                s.push(' ');
            }
            s.push_str(text);
        }
        s
    }
}

fn power_prefix(power: usize) -> String {
    if power == 1 {
        "p".to_string()
    } else {
        format!("p^{power}")
    }
}

fn raw_product(g: usize, arc: &Arc) -> String {
    (0..=arc.span(g))
        .map(|o| format!("V{}", (arc.left + o) % g))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn search(
    band: &Band,
    nodes: &[usize],
    remaining_arcs: usize,
    used: &mut Vec<bool>,
    arcs: &mut Vec<Arc>,
    semilines: &mut BTreeSet<usize>,
    out: &mut BTreeSet<PeriodicSemiMeander>,
) {
    let g = band.g();
    let next = nodes.iter().copied().find(|&n| !used[n]);
    let Some(u) = next else {
        if remaining_arcs == 0 {
            if let Ok(m) = PeriodicSemiMeander::new(
                band.clone(),
                arcs.iter().copied(),
                semilines.iter().copied(),
            ) {
                out.insert(m);
            }
        }
        return;
    };
    let unused_count = nodes.iter().filter(|&&n| !used[n]).count();

    // Option 1: a semiline at u, if enough nodes remain for the arcs and no
    // existing arc covers u.
    if unused_count > 2 * remaining_arcs && !arcs.iter().any(|a| a.covers(g, u)) {
        used[u] = true;
        semilines.insert(u);
        search(band, nodes, remaining_arcs, used, arcs, semilines, out);
        semilines.remove(&u);
        used[u] = false;
    }

    // Option 2: an arc pairing u with a later unused node, in either
    // orientation, pruned on laminarity and semiline coverage.
    if remaining_arcs > 0 {
        let partners: Vec<usize> = nodes
            .iter()
            .copied()
            .filter(|&w| !used[w] && w != u)
            .collect();
        for w in partners {
            for arc in [Arc::new(u, w), Arc::new(w, u)] {
                if !arcs.iter().all(|a| a.compatible_with(g, &arc)) {
                    continue;
                }
                if semilines.iter().any(|&s| arc.covers(g, s)) {
                    continue;
                }
                used[u] = true;
                used[w] = true;
                arcs.push(arc);
                search(band, nodes, remaining_arcs - 1, used, arcs, semilines, out);
                arcs.pop();
                used[u] = false;
                used[w] = false;
            }
        }
    }
}

/// Combinatorial profile of the cycle attached to a diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoCycleProfile {
    /// Band pluses together with all arc endpoints.
    pub s_a: BTreeSet<usize>,
    /// The right end-nodes of the arcs (what the profile adjoins).
    pub t_a_increment: BTreeSet<usize>,
    /// The supplied base set together with `t_a_increment`.
    pub t_a: BTreeSet<usize>,
    pub codimension: usize,
    pub fiber_dimension: usize,
    pub conditions: Vec<VerschiebungCondition>,
    /// True when the diagram falls outside the rendering pattern the string
    /// grammar is anchored to (even spans, pluses under arcs, or nesting
    /// deeper than two levels).
    pub unanchored: bool,
}

/// One divisibility condition attached to an odd-span arc.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerschiebungCondition {
    /// Left end-node of the arc.
    pub start: usize,
    /// Arc span (odd).
    pub length: usize,
    /// `(length + 1) / 2`.
    pub power: usize,
    /// Nested rendering, e.g. `p | V6 (V0V1/p)(V2V3/p) V4`.
    pub rendered: String,
    /// Flat rendering, e.g. `p^3 | V6V0V1V2V3V4`.
    pub raw: String,
}

#[derive(Serialize, Deserialize)]
struct MeanderWire {
    g: usize,
    plus: Vec<usize>,
    arcs: Vec<Arc>,
    semilines: Vec<usize>,
}

impl Serialize for PeriodicSemiMeander {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MeanderWire {
            g: self.band.g(),
            plus: self.band.plus_positions().iter().copied().collect(),
            arcs: self.arcs.clone(),
            semilines: self.semilines.iter().copied().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PeriodicSemiMeander {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = MeanderWire::deserialize(deserializer)?;
        let band = Band::new(wire.g, wire.plus).map_err(D::Error::custom)?;
        PeriodicSemiMeander::new(band, wire.arcs, wire.semilines).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn band(g: usize, plus: &[usize]) -> Band {
        Band::new(g, plus.iter().copied()).unwrap()
    }

    fn meander(
        g: usize,
        plus: &[usize],
        arcs: &[(usize, usize)],
        sl: &[usize],
    ) -> PeriodicSemiMeander {
        PeriodicSemiMeander::new(
            band(g, plus),
            arcs.iter().map(|&(l, r)| Arc::new(l, r)),
            sl.iter().copied(),
        )
        .unwrap()
    }

    /// The ten diagrams with two arcs on the 7-band with pluses {1,4},
    /// in the layout they are usually displayed: five with two basic arcs,
    /// then five with one.
    fn ten_reference_diagrams() -> Vec<PeriodicSemiMeander> {
        vec![
            meander(7, &[1, 4], &[(2, 3), (5, 6)], &[0]),
            meander(7, &[1, 4], &[(6, 0), (3, 5)], &[2]),
            meander(7, &[1, 4], &[(0, 2), (5, 6)], &[3]),
            meander(7, &[1, 4], &[(2, 3), (6, 0)], &[5]),
            meander(7, &[1, 4], &[(0, 2), (3, 5)], &[6]),
            meander(7, &[1, 4], &[(3, 5), (2, 6)], &[0]),
            meander(7, &[1, 4], &[(5, 6), (3, 0)], &[2]),
            meander(7, &[1, 4], &[(6, 0), (5, 2)], &[3]),
            meander(7, &[1, 4], &[(0, 2), (6, 3)], &[5]),
            meander(7, &[1, 4], &[(2, 3), (0, 5)], &[6]),
        ]
    }

    #[test]
    fn spans_and_coverage() {
        let a = Arc::new(6, 4);
        assert_eq!(a.span(7), 5);
        assert_eq!(a.covered(7), vec![0, 1, 2, 3]);
        assert!(a.covers(7, 0) && a.covers(7, 3));
        assert!(!a.covers(7, 4) && !a.covers(7, 6) && !a.covers(7, 5));
        let b = Arc::new(0, 1);
        assert_eq!(b.span(7), 1);
        assert!(b.covered(7).is_empty());
    }

    #[test]
    fn laminarity_predicates() {
        let g = 7;
        let outer = Arc::new(6, 4);
        let b1 = Arc::new(0, 1);
        let b2 = Arc::new(2, 3);
        assert!(b1.nested_in(g, &outer) && b2.nested_in(g, &outer));
        assert!(!outer.nested_in(g, &b1));
        assert!(b1.disjoint_from(g, &b2) && b2.disjoint_from(g, &b1));
        assert!(b1.compatible_with(g, &b2) && b1.compatible_with(g, &outer));
        // Genuine crossing on a full 4-band.
        let x = Arc::new(0, 2);
        let y = Arc::new(1, 3);
        assert!(!x.compatible_with(4, &y));
    }

    #[test]
    fn validation_accepts_and_rejects() {
        // All semilines.
        assert!(PeriodicSemiMeander::new(band(5, &[2]), [], [0, 1, 3, 4]).is_ok());
        // The two covered-side choices on a full 2-band are distinct valid diagrams.
        let m1 = meander(2, &[], &[(0, 1)], &[]);
        let m2 = meander(2, &[], &[(1, 0)], &[]);
        assert_ne!(m1, m2);
        // Shared endpoint.
        let err = PeriodicSemiMeander::validate_parts(
            &band(4, &[]),
            &[Arc::new(0, 1), Arc::new(1, 2)],
            &[3].into_iter().collect(),
        )
        .unwrap_err();
        assert_eq!(err, ViolationReason::RoleRepeated { pos: 1 });
        // Crossing arcs.
        let err = PeriodicSemiMeander::validate_parts(
            &band(4, &[]),
            &[Arc::new(0, 2), Arc::new(1, 3)],
            &BTreeSet::new(),
        )
        .unwrap_err();
        assert!(matches!(err, ViolationReason::ArcsCross { .. }));
        // Semiline under an arc.
        let err = PeriodicSemiMeander::validate_parts(
            &band(3, &[]),
            &[Arc::new(0, 2)],
            &[1].into_iter().collect(),
        )
        .unwrap_err();
        assert_eq!(
            err,
            ViolationReason::SemilineCovered {
                semiline: 1,
                by: Arc::new(0, 2)
            }
        );
        // Missing role, plus endpoints, range, zero length.
        assert_eq!(
            PeriodicSemiMeander::validate_parts(&band(3, &[]), &[], &BTreeSet::new()),
            Err(ViolationReason::NodeUnassigned { pos: 0 })
        );
        assert_eq!(
            PeriodicSemiMeander::validate_parts(
                &band(3, &[1]),
                &[Arc::new(0, 1)],
                &[2].into_iter().collect()
            ),
            Err(ViolationReason::ArcEndpointOnPlus { pos: 1 })
        );
        assert_eq!(
            PeriodicSemiMeander::validate_parts(&band(3, &[]), &[Arc::new(0, 5)], &BTreeSet::new()),
            Err(ViolationReason::PositionOutOfRange { pos: 5 })
        );
        assert_eq!(
            PeriodicSemiMeander::validate_parts(&band(3, &[]), &[Arc::new(0, 0)], &BTreeSet::new()),
            Err(ViolationReason::ZeroLengthArc { pos: 0 })
        );
    }

    #[test]
    fn enumeration_matches_reference_list() {
        let b = band(7, &[1, 4]);
        let got = PeriodicSemiMeander::enumerate(&b, 2).unwrap();
        assert_eq!(got.len(), 10);
        let expected: BTreeSet<_> = ten_reference_diagrams().into_iter().collect();
        let got_set: BTreeSet<_> = got.iter().cloned().collect();
        assert_eq!(got_set, expected);
        // Canonical order: sorted arc lists.
        let mut sorted = got.clone();
        sorted.sort();
        assert_eq!(got, sorted);
    }

    #[test]
    fn enumeration_edge_cases() {
        // Two one-arc diagrams on the full 2-band.
        let b = band(2, &[]);
        assert_eq!(PeriodicSemiMeander::enumerate(&b, 1).unwrap().len(), 2);
        // r = 0 is always a single all-semilines diagram.
        assert_eq!(PeriodicSemiMeander::enumerate(&b, 0).unwrap().len(), 1);
        // No nodes: the unique empty diagram.
        let empty = band(3, &[0, 1, 2]);
        let ms = PeriodicSemiMeander::enumerate(&empty, 0).unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].arc_count(), 0);
        assert_eq!(ms[0].defect(), 0);
        // r out of range.
        assert!(PeriodicSemiMeander::enumerate(&b, 2).is_err());
    }

    #[test]
    fn enumeration_counts_are_binomial_small() {
        for g in 1..=6usize {
            for mask in 0..(1u32 << g) {
                let plus: Vec<usize> = (0..g).filter(|i| mask >> i & 1 == 1).collect();
                let b = band(g, &plus);
                let d = b.node_count();
                for r in 0..=d / 2 {
                    let n = PeriodicSemiMeander::enumerate(&b, r).unwrap().len();
                    let expected = exactalg::binomial(d as u64, r as u64);
                    assert_eq!(
                        num_bigint::BigInt::from(n),
                        expected,
                        "count mismatch at g={g} plus={plus:?} r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn total_span_reference_values() {
        let diagrams = ten_reference_diagrams();
        assert_eq!(diagrams[1].total_span(), 3);
        assert_eq!(diagrams[9].total_span(), 6);
        let b = band(4, &[]);
        let m = PeriodicSemiMeander::enumerate(&b, 0).unwrap();
        assert_eq!(m[0].total_span(), 0);
    }

    #[test]
    fn basic_arc_counts_split_the_reference_list() {
        let diagrams = ten_reference_diagrams();
        for m in &diagrams[..5] {
            assert_eq!(m.basic_arcs().len(), 2, "first-row diagram {m:?}");
        }
        for m in &diagrams[5..] {
            assert_eq!(m.basic_arcs().len(), 1, "second-row diagram {m:?}");
        }
    }

    #[test]
    fn every_diagram_with_arcs_has_a_basic_arc() {
        for g in 2..=7usize {
            for mask in 0..(1u32 << g) {
                let plus: Vec<usize> = (0..g).filter(|i| mask >> i & 1 == 1).collect();
                let b = band(g, &plus);
                for r in 1..=b.node_count() / 2 {
                    for m in PeriodicSemiMeander::enumerate(&b, r).unwrap() {
                        assert!(!m.basic_arcs().is_empty(), "no basic arc in {m:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn remove_arc_bookkeeping() {
        let m = meander(7, &[1, 4], &[(2, 3), (5, 6)], &[0]);
        let removed = m.remove_arc(&Arc::new(2, 3)).unwrap();
        assert_eq!(removed.arc_count(), 1);
        assert_eq!(removed.band().plus_positions().len(), 4);
        assert_eq!(m.total_span(), removed.total_span() + 1);
        // Non-basic arcs are rejected.
        let nested = meander(7, &[1, 4], &[(3, 5), (2, 6)], &[0]);
        assert!(matches!(
            nested.remove_arc(&Arc::new(2, 6)),
            Err(Error::NonBasicArc { .. })
        ));
        // Unknown arcs are rejected.
        assert!(matches!(
            m.remove_arc(&Arc::new(0, 2)),
            Err(Error::NoSuchArc { .. })
        ));
        // Iterated removal reaches the all-semilines diagram in r steps.
        let mut cur = meander(7, &[1, 4], &[(3, 5), (2, 6)], &[0]);
        let mut steps = 0;
        while cur.arc_count() > 0 {
            let basic = cur.basic_arcs();
            assert!(!basic.is_empty());
            cur = cur.remove_arc(&basic[0]).unwrap();
            steps += 1;
        }
        assert_eq!(steps, 2);
        assert_eq!(cur.defect(), 1);
    }

    #[test]
    fn partial_order_examples() {
        let b = band(7, &[1, 4]);
        let bottom = PeriodicSemiMeander::enumerate(&b, 0)
            .unwrap()
            .pop()
            .unwrap();
        for m in PeriodicSemiMeander::enumerate(&b, 2).unwrap() {
            assert!(bottom.precedes(&m).unwrap());
            assert!(m.precedes(&m).unwrap());
        }
        let ones = PeriodicSemiMeander::enumerate(&b, 1).unwrap();
        assert!(!ones[0].precedes(&ones[1]).unwrap());
        assert!(!ones[1].precedes(&ones[0]).unwrap());
        let other = band(7, &[1, 5]);
        let m2 = PeriodicSemiMeander::enumerate(&other, 0)
            .unwrap()
            .pop()
            .unwrap();
        assert!(bottom.precedes(&m2).is_err());
    }

    #[test]
    fn flat_decomposition_reference_example() {
        // Four nested arcs on a full 10-band; the three inner arcs form a
        // saturated subset.
        let a = meander(10, &[], &[(1, 8), (2, 5), (3, 4), (6, 7)], &[0, 9]);
        let delta = [Arc::new(2, 5), Arc::new(3, 4), Arc::new(6, 7)];
        let (flat, residual) = a.flat_decompose(&delta).unwrap();
        assert_eq!(flat.arcs(), delta.as_slice());
        assert_eq!(
            flat.semilines().iter().copied().collect::<Vec<_>>(),
            vec![0, 1, 8, 9]
        );
        assert_eq!(flat.band(), a.band());
        assert_eq!(residual.arcs(), &[Arc::new(1, 8)]);
        assert_eq!(
            residual
                .band()
                .plus_positions()
                .iter()
                .copied()
                .collect::<Vec<_>>(),
            vec![2, 3, 4, 5, 6, 7]
        );
        assert_eq!(
            residual.semilines().iter().copied().collect::<Vec<_>>(),
            vec![0, 9]
        );
        assert_eq!(a.total_span(), flat.total_span() + residual.total_span());
        // Dropping (3,4) from delta breaks saturation.
        let bad = [Arc::new(2, 5), Arc::new(6, 7)];
        assert!(matches!(
            a.flat_decompose(&bad),
            Err(Error::NotSaturated { left: 3, right: 4 })
        ));
        // Trivial decompositions.
        let (flat, residual) = a.flat_decompose(&[]).unwrap();
        assert_eq!(flat.arc_count(), 0);
        assert_eq!(residual, a);
        let all: Vec<Arc> = a.arcs().to_vec();
        let (flat, residual) = a.flat_decompose(&all).unwrap();
        assert_eq!(flat, a);
        assert_eq!(residual.arc_count(), 0);
    }

    #[test]
    fn flat_decomposition_span_additivity_exhaustive() {
        for g in 2..=6usize {
            for mask in [0u32, 1, 5] {
                let plus: Vec<usize> = (0..g).filter(|i| mask >> i & 1 == 1).collect();
                let b = band(g, &plus);
                for r in 0..=b.node_count() / 2 {
                    for m in PeriodicSemiMeander::enumerate(&b, r).unwrap() {
                        // Try every subset of arcs; skip the non-saturated ones.
                        let arcs = m.arcs().to_vec();
                        for sub in 0..(1u32 << arcs.len()) {
                            let delta: Vec<Arc> = arcs
                                .iter()
                                .enumerate()
                                .filter(|(i, _)| sub >> i & 1 == 1)
                                .map(|(_, a)| *a)
                                .collect();
                            if let Ok((flat, residual)) = m.flat_decompose(&delta) {
                                assert_eq!(
                                    m.total_span(),
                                    flat.total_span() + residual.total_span()
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn condition_rendering_reference_nested() {
        // Full 7-band: two basic arcs under one wrapped arc, one semiline.
        let m = meander(7, &[], &[(0, 1), (2, 3), (6, 4)], &[5]);
        let profile = m.go_profile(&BTreeSet::new()).unwrap();
        assert!(!profile.unanchored);
        let rendered: Vec<&str> = profile
            .conditions
            .iter()
            .map(|c| c.rendered.as_str())
            .collect();
        assert_eq!(
            rendered,
            vec!["p | V0V1", "p | V2V3", "p | V6 (V0V1/p)(V2V3/p) V4"]
        );
        let raw: Vec<&str> = profile.conditions.iter().map(|c| c.raw.as_str()).collect();
        assert_eq!(raw, vec!["p | V0V1", "p | V2V3", "p^3 | V6V0V1V2V3V4"]);
        assert_eq!(profile.codimension, 3);
        assert_eq!(profile.fiber_dimension, 3);
        let outer = &profile.conditions[2];
        assert_eq!((outer.start, outer.length, outer.power), (6, 5, 3));
    }

    #[test]
    fn condition_rendering_reference_flat() {
        // Full 6-band: one arc over another plus a separate basic arc.
        let m = meander(6, &[], &[(0, 3), (1, 2), (4, 5)], &[]);
        let profile = m.go_profile(&BTreeSet::new()).unwrap();
        assert!(!profile.unanchored);
        let raw: BTreeSet<&str> = profile.conditions.iter().map(|c| c.raw.as_str()).collect();
        assert_eq!(
            raw,
            ["p | V1V2", "p | V4V5", "p^2 | V0V1V2V3"]
                .into_iter()
                .collect()
        );
        // The same diagram in the nested grammar.
        let rendered: Vec<&str> = profile
            .conditions
            .iter()
            .map(|c| c.rendered.as_str())
            .collect();
        assert_eq!(rendered, vec!["p | V0 (V1V2/p) V3", "p | V1V2", "p | V4V5"]);
    }

    #[test]
    fn profile_sets_and_flags() {
        let m = meander(7, &[1, 4], &[(2, 3), (5, 6)], &[0]);
        let t: BTreeSet<usize> = [1].into_iter().collect();
        let profile = m.go_profile(&t).unwrap();
        assert_eq!(
            profile.s_a.iter().copied().collect::<Vec<_>>(),
            vec![1, 2, 3, 4, 5, 6]
        );
        assert_eq!(
            profile.t_a_increment.iter().copied().collect::<Vec<_>>(),
            vec![3, 6]
        );
        assert_eq!(
            profile.t_a.iter().copied().collect::<Vec<_>>(),
            vec![1, 3, 6]
        );
        // Base points must be pluses.
        let bad: BTreeSet<usize> = [0].into_iter().collect();
        assert!(m.go_profile(&bad).is_err());
        // r = 0 has no conditions.
        let b = band(3, &[0]);
        let m0 = PeriodicSemiMeander::enumerate(&b, 0)
            .unwrap()
            .pop()
            .unwrap();
        assert!(m0
            .go_profile(&BTreeSet::new())
            .unwrap()
            .conditions
            .is_empty());
        // A plus under an arc makes the profile unanchored; even spans get no
        // condition entry.
        let m = meander(4, &[1], &[(0, 2)], &[3]);
        let profile = m.go_profile(&BTreeSet::new()).unwrap();
        assert!(profile.unanchored);
        assert!(profile.conditions.is_empty());
        // Odd span over pluses still yields a condition, but unanchored.
        let m = meander(5, &[1, 2], &[(0, 3)], &[4]);
        let profile = m.go_profile(&BTreeSet::new()).unwrap();
        assert!(profile.unanchored);
        assert_eq!(profile.conditions[0].raw, "p^2 | V0V1V2V3");
        assert_eq!(profile.conditions[0].rendered, "p^2 | V0V1V2V3");
    }

    #[test]
    fn deep_nesting_is_unanchored_but_rendered() {
        // Three levels: (2,3) inside (1,4) inside (0,5) on a full 6-band.
        let m = meander(6, &[], &[(0, 5), (1, 4), (2, 3)], &[]);
        let profile = m.go_profile(&BTreeSet::new()).unwrap();
        assert!(profile.unanchored);
        let outer = profile.conditions.iter().find(|c| c.start == 0).unwrap();
        assert_eq!(outer.rendered, "p | V0 (V1 (V2V3/p) V4/p^2) V5");
        assert_eq!(outer.raw, "p^3 | V0V1V2V3V4V5");
    }

    #[test]
    fn json_shape_and_round_trip() {
        let m = meander(7, &[1, 4], &[(2, 3), (5, 6)], &[0]);
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(
            json,
            r#"{"g":7,"plus":[1,4],"arcs":[{"left":2,"right":3},{"left":5,"right":6}],"semilines":[0]}"#
        );
        let back: PeriodicSemiMeander = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
        // Parsing validates.
        let bad = r#"{"g":4,"plus":[],"arcs":[{"left":0,"right":2},{"left":1,"right":3}],"semilines":[]}"#;
        assert!(serde_json::from_str::<PeriodicSemiMeander>(bad).is_err());
    }
}
