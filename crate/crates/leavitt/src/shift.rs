//! Graded matrix-ring descriptors M_n(K[x^s,x^-s])(γ₁,…,γₙ), the three
//! generating moves between graded-isomorphic descriptors, move-sequence
//! search, and a desk-scale realization of each move on matrix units.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexIx};

/// A graded matrix ring over K[x^s, x^-s] with shift vector γ; step 0 means
/// the ground field K.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Descriptor {
    pub n: usize,
    pub step: usize,
    pub shifts: Vec<i64>,
}

impl Descriptor {
    pub fn new(step: usize, shifts: Vec<i64>) -> Result<Descriptor> {
        if shifts.is_empty() {
            return Err(Error::BadMove("descriptor needs at least one shift".into()));
        }
        Ok(Descriptor { n: shifts.len(), step, shifts })
    }

    /// `M<n>(K[x^<s>,x^-<s>])(γ1,...,γn)`, or `M<n>(K)(...)` for step 0.
    pub fn render(&self) -> String {
        let shifts = self.shifts.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",");
        if self.step == 0 {
            format!("M{}(K)({})", self.n, shifts)
        } else {
            format!("M{}(K[x^{},x^-{}])({})", self.n, self.step, self.step, shifts)
        }
    }

    /// Residues γᵢ mod s, sorted; for step 0 the sorted shifts themselves.
    pub fn residue_multiset(&self) -> Vec<i64> {
        let mut r: Vec<i64> = self
            .shifts
            .iter()
            .map(|&x| if self.step == 0 { x } else { x.rem_euclid(self.step as i64) })
            .collect();
        r.sort_unstable();
        r
    }
}

/// Generating graded isomorphisms between descriptors. Indices are 0-based
/// in the API; the JSON wire form is 1-based, matching the e_ij rendering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    /// New shift list: new[k] = old[pi[k]].
    Permute(Vec<usize>),
    /// Add δ to every shift; the identity on matrix units.
    GlobalShift(i64),
    /// Add δ (a nonzero multiple of step) to shift `index` alone.
    UnitShift { index: usize, delta: i64 },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum MoveWire {
    Permute { pi: Vec<usize> },
    Global { delta: i64 },
    Unit { index: usize, delta: i64 },
}

impl Serialize for Move {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = match self {
            Move::Permute(pi) => MoveWire::Permute { pi: pi.iter().map(|&k| k + 1).collect() },
            Move::GlobalShift(delta) => MoveWire::Global { delta: *delta },
            Move::UnitShift { index, delta } => {
                MoveWire::Unit { index: index + 1, delta: *delta }
            }
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Move {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Move, D::Error> {
        use serde::de::Error as _;
        Ok(match MoveWire::deserialize(d)? {
            MoveWire::Permute { pi } => {
                if pi.iter().any(|&k| k == 0) {
                    return Err(D::Error::custom("permutation entries are 1-based"));
                }
                Move::Permute(pi.into_iter().map(|k| k - 1).collect())
            }
            MoveWire::Global { delta } => Move::GlobalShift(delta),
            MoveWire::Unit { index, delta } => {
                if index == 0 {
                    return Err(D::Error::custom("unit-shift index is 1-based"));
                }
                Move::UnitShift { index: index - 1, delta }
            }
        })
    }
}

fn check_permutation(pi: &[usize], n: usize) -> Result<()> {
    if pi.len() != n {
        return Err(Error::BadMove(format!("permutation length {} != n {}", pi.len(), n)));
    }
    let mut seen = vec![false; n];
    for &k in pi {
        if k >= n || seen[k] {
            return Err(Error::BadMove("not a permutation".into()));
        }
        seen[k] = true;
    }
    Ok(())
}

/// Apply one move to a descriptor, yielding the codomain descriptor.
pub fn apply_move(d: &Descriptor, m: &Move) -> Result<Descriptor> {
    let mut shifts = d.shifts.clone();
    match m {
        Move::Permute(pi) => {
            check_permutation(pi, d.n)?;
            shifts = pi.iter().map(|&k| d.shifts[k]).collect();
        }
        Move::GlobalShift(delta) => {
            for s in shifts.iter_mut() {
                *s += delta;
            }
        }
        Move::UnitShift { index, delta } => {
            if *index >= d.n {
                return Err(Error::IndexOutOfRange { index: index + 1, n: d.n });
            }
            if d.step == 0 || *delta == 0 || delta % d.step as i64 != 0 {
                return Err(Error::BadMove(format!(
                    "unit-shift delta {delta} must be a nonzero multiple of step {}",
                    d.step
                )));
            }
            shifts[*index] += delta;
        }
    }
    Ok(Descriptor { n: d.n, step: d.step, shifts })
}

/// Degree of the entry x^xdeg placed at (i, j), 1-based: xdeg + γᵢ − γⱼ.
pub fn entry_degree(d: &Descriptor, i: usize, j: usize, xdeg: i64) -> Result<i64> {
    for ix in [i, j] {
        if ix == 0 || ix > d.n {
            return Err(Error::IndexOutOfRange { index: ix, n: d.n });
        }
    }
    let ok = if d.step == 0 { xdeg == 0 } else { xdeg % d.step as i64 == 0 };
    if !ok {
        return Err(Error::DegreeStep(xdeg, d.step));
    }
    Ok(xdeg + d.shifts[i - 1] - d.shifts[j - 1])
}

/// Descriptor of the graded Leavitt path algebra read off a base vertex:
/// matrix size = vertex count, step = cycle length, shifts = base-path
/// lengths in base-path order.
pub fn lpa_descriptor(g: &Graph, v0: VertexIx) -> Result<Descriptor> {
    let step = g.unique_cycle()?.map(|c| c.len()).unwrap_or(0);
    let paths = g.base_paths(v0)?;
    Descriptor::new(step, paths.iter().map(|p| p.len() as i64).collect())
}

/// Matrix unit e_ij(x^m); i, j are 1-based row/column indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatrixUnit {
    pub i: usize,
    pub j: usize,
    pub xpow: i64,
}

/// A composite of moves realized as a map on matrix units, with the source
/// and target descriptors it mediates between.
#[derive(Clone, Debug)]
pub struct RealizedIso {
    pub source: Descriptor,
    pub target: Descriptor,
    pub moves: Vec<Move>,
}

/// Realize a move sequence starting at `d` as an explicit map on matrix
/// units: permutation conjugation relabels indices, a global shift is the
/// identity, and a unit shift at r multiplies row r by u⁻¹ and column r by
/// u, shifting the x-power by ∓δ.
pub fn realize_matrix_iso(d: &Descriptor, moves: &[Move]) -> Result<RealizedIso> {
    let mut target = d.clone();
    for m in moves {
        target = apply_move(&target, m)?;
    }
    Ok(RealizedIso { source: d.clone(), target, moves: moves.to_vec() })
}

impl RealizedIso {
    pub fn apply(&self, u: &MatrixUnit) -> Result<MatrixUnit> {
        for ix in [u.i, u.j] {
            if ix == 0 || ix > self.source.n {
                return Err(Error::IndexOutOfRange { index: ix, n: self.source.n });
            }
        }
        let step = self.source.step;
        let ok = if step == 0 { u.xpow == 0 } else { u.xpow % step as i64 == 0 };
        if !ok {
            return Err(Error::DegreeStep(u.xpow, step));
        }
        let mut cur = *u;
        for m in &self.moves {
            cur = match m {
                Move::GlobalShift(_) => cur,
                Move::Permute(pi) => {
                    // new[k] = old[pi[k]], so old index i lands at pi⁻¹(i).
                    let inv_of = |x: usize| pi.iter().position(|&k| k == x - 1).unwrap() + 1;
                    MatrixUnit { i: inv_of(cur.i), j: inv_of(cur.j), xpow: cur.xpow }
                }
                Move::UnitShift { index, delta } => {
                    let r = index + 1;
                    let mut m_new = cur;
                    if cur.i == r && cur.j != r {
                        m_new.xpow -= delta;
                    } else if cur.j == r && cur.i != r {
                        m_new.xpow += delta;
                    }
                    m_new
                }
            };
        }
        Ok(cur)
    }
}

/// Search for a move sequence carrying descriptor `a` to descriptor `b`:
/// possible iff n and step agree and the residue multisets of the shifts
/// match after some global shift. The emitted order is fixed — one global
/// shift, then unit shifts, then one permutation — and zero-effect moves
/// are omitted, so equal descriptors map to the empty sequence.
pub fn find_move_sequence(a: &Descriptor, b: &Descriptor) -> Option<Vec<Move>> {
    if a.n != b.n || a.step != b.step {
        return None;
    }
    let n = a.n;
    let s = a.step as i64;
    let c = if s == 0 {
        // Ground field: only a global integer shift can reconcile the lists.
        let c = b.shifts.iter().min().unwrap() - a.shifts.iter().min().unwrap();
        let shifted = Descriptor {
            n,
            step: 0,
            shifts: a.shifts.iter().map(|x| x + c).collect(),
        };
        if shifted.residue_multiset() != b.residue_multiset() {
            return None;
        }
        c
    } else {
        // Prefer the shift aligning the maxima; fall back to the smallest
        // residue class that works.
        let preferred = (b.shifts.iter().max().unwrap() - a.shifts.iter().max().unwrap())
            .rem_euclid(s);
        let candidates = std::iter::once(preferred).chain((0..s).filter(|&x| x != preferred));
        let mut found = None;
        for cand in candidates {
            let shifted = Descriptor {
                n,
                step: a.step,
                shifts: a.shifts.iter().map(|x| x + cand).collect(),
            };
            if shifted.residue_multiset() == b.residue_multiset() {
                found = Some(cand);
                break;
            }
        }
        found?
    };
    let mut moves = Vec::new();
    let mut cur: Vec<i64> = a.shifts.iter().map(|x| x + c).collect();
    if c != 0 {
        moves.push(Move::GlobalShift(c));
    }
    if s > 0 {
        // Within each residue class, pair current entries (by value, then
        // index) with target values in ascending order; each pairing is a
        // unit shift by a multiple of s.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&ix| (cur[ix], ix));
        let mut targets: Vec<i64> = b.shifts.clone();
        targets.sort_unstable();
        let residue_of = |x: i64| x.rem_euclid(s);
        for r in 0..s {
            let class: Vec<usize> =
                order.iter().copied().filter(|&ix| residue_of(cur[ix]) == r).collect();
            let goals: Vec<i64> =
                targets.iter().copied().filter(|&t| t.rem_euclid(s) == r).collect();
            debug_assert_eq!(class.len(), goals.len());
            for (&ix, &goal) in class.iter().zip(goals.iter()) {
                let delta = goal - cur[ix];
                if delta != 0 {
                    moves.push(Move::UnitShift { index: ix, delta });
                    cur[ix] = goal;
                }
            }
        }
    }
    // Final permutation: for each position k of b, take the first unused
    // current position holding the needed value.
    let mut used = vec![false; n];
    let mut pi = Vec::with_capacity(n);
    for k in 0..n {
        let src = (0..n).find(|&ix| !used[ix] && cur[ix] == b.shifts[k])?;
        used[src] = true;
        pi.push(src);
    }
    if pi.iter().enumerate().any(|(k, &src)| k != src) {
        moves.push(Move::Permute(pi));
    }
    Some(moves)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(step: usize, shifts: &[i64]) -> Descriptor {
        Descriptor::new(step, shifts.to_vec()).unwrap()
    }

    #[test]
    fn render_forms() {
        assert_eq!(d(2, &[0, 1, 1, 2]).render(), "M4(K[x^2,x^-2])(0,1,1,2)");
        assert_eq!(d(0, &[0, 1, 1]).render(), "M3(K)(0,1,1)");
    }

    #[test]
    fn entry_degrees_match_shift_formula() {
        let desc = d(2, &[0, 1, 1, 2]);
        assert_eq!(entry_degree(&desc, 2, 1, 2).unwrap(), 3);
        assert_eq!(entry_degree(&desc, 1, 1, 0).unwrap(), 0);
        assert_eq!(entry_degree(&desc, 1, 4, 2).unwrap(), 0);
        assert!(matches!(
            entry_degree(&desc, 0, 1, 0),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(entry_degree(&desc, 1, 1, 1), Err(Error::DegreeStep(1, 2))));
    }

    #[test]
    fn moves_transform_shift_lists() {
        let start = d(2, &[0, 1, 1, 2]);
        let after_global = apply_move(&start, &Move::GlobalShift(1)).unwrap();
        assert_eq!(after_global.shifts, [1, 2, 2, 3]);
        let after_unit =
            apply_move(&after_global, &Move::UnitShift { index: 1, delta: -2 }).unwrap();
        assert_eq!(after_unit.shifts, [1, 0, 2, 3]);
        let after_perm = apply_move(&after_unit, &Move::Permute(vec![1, 0, 2, 3])).unwrap();
        assert_eq!(after_perm.shifts, [0, 1, 2, 3]);
    }

    #[test]
    fn identity_permute_is_identity() {
        let start = d(2, &[0, 1, 1, 2]);
        let same = apply_move(&start, &Move::Permute(vec![0, 1, 2, 3])).unwrap();
        assert_eq!(same, start);
    }

    #[test]
    fn invalid_moves_rejected() {
        let start = d(2, &[0, 1]);
        assert!(apply_move(&start, &Move::UnitShift { index: 0, delta: 1 }).is_err());
        assert!(apply_move(&start, &Move::UnitShift { index: 0, delta: 0 }).is_err());
        assert!(apply_move(&start, &Move::UnitShift { index: 5, delta: 2 }).is_err());
        assert!(apply_move(&start, &Move::Permute(vec![0, 0])).is_err());
        let tree = d(0, &[0, 1]);
        assert!(apply_move(&tree, &Move::UnitShift { index: 0, delta: 1 }).is_err());
    }

    #[test]
    fn move_sequence_for_the_descriptor_pair() {
        let a = d(2, &[0, 1, 1, 2]);
        let b = d(2, &[0, 1, 2, 3]);
        let moves = find_move_sequence(&a, &b).unwrap();
        assert_eq!(
            moves,
            vec![
                Move::GlobalShift(1),
                Move::UnitShift { index: 1, delta: -2 },
                Move::Permute(vec![1, 0, 2, 3]),
            ]
        );
        let mut cur = a;
        for m in &moves {
            cur = apply_move(&cur, m).unwrap();
        }
        assert_eq!(cur.shifts, b.shifts);
    }

    #[test]
    fn distinct_residue_multisets_have_no_sequence() {
        let a = d(2, &[0, 0, 1, 1]);
        let b = d(2, &[0, 1, 1, 1]);
        assert!(find_move_sequence(&a, &b).is_none());
    }

    #[test]
    fn equal_descriptors_need_no_moves() {
        let a = d(2, &[0, 1, 1, 2]);
        assert_eq!(find_move_sequence(&a, &a).unwrap(), vec![]);
        let t = d(0, &[0, 1, 1]);
        assert_eq!(find_move_sequence(&t, &t).unwrap(), vec![]);
    }

    #[test]
    fn tree_descriptors_compare_exactly() {
        let a = d(0, &[0, 1, 1]);
        let b = d(0, &[0, 1, 2]);
        assert!(find_move_sequence(&a, &b).is_none());
        let c = d(0, &[0, 1, 1]);
        let moves = find_move_sequence(&a, &c).unwrap();
        assert!(moves.is_empty());
    }

    #[test]
    fn realize_unit_shift_rules() {
        let a = d(2, &[1, 2, 2, 3]);
        let iso = realize_matrix_iso(&a, &[Move::UnitShift { index: 0, delta: -2 }]).unwrap();
        // Row 1 entries lose the delta; column 1 entries gain it; e_11 fixed.
        let row = iso.apply(&MatrixUnit { i: 1, j: 2, xpow: 4 }).unwrap();
        assert_eq!(row, MatrixUnit { i: 1, j: 2, xpow: 6 });
        let col = iso.apply(&MatrixUnit { i: 3, j: 1, xpow: 4 }).unwrap();
        assert_eq!(col, MatrixUnit { i: 3, j: 1, xpow: 2 });
        let diag = iso.apply(&MatrixUnit { i: 1, j: 1, xpow: 4 }).unwrap();
        assert_eq!(diag, MatrixUnit { i: 1, j: 1, xpow: 4 });
        let off = iso.apply(&MatrixUnit { i: 2, j: 3, xpow: 4 }).unwrap();
        assert_eq!(off, MatrixUnit { i: 2, j: 3, xpow: 4 });
    }

    #[test]
    fn realize_permute_relabels() {
        let a = d(2, &[1, 0, 2, 3]);
        let iso = realize_matrix_iso(&a, &[Move::Permute(vec![1, 0, 2, 3])]).unwrap();
        let u = iso.apply(&MatrixUnit { i: 1, j: 3, xpow: 2 }).unwrap();
        assert_eq!(u, MatrixUnit { i: 2, j: 3, xpow: 2 });
    }

    #[test]
    fn realize_preserves_entry_degree() {
        let a = d(2, &[0, 1, 1, 2]);
        let b = d(2, &[0, 1, 2, 3]);
        let moves = find_move_sequence(&a, &b).unwrap();
        let iso = realize_matrix_iso(&a, &moves).unwrap();
        assert_eq!(iso.target.shifts, b.shifts);
        for i in 1..=4 {
            for j in 1..=4 {
                for m in (-6..=6).step_by(2) {
                    let u = MatrixUnit { i, j, xpow: m };
                    let v = iso.apply(&u).unwrap();
                    assert_eq!(
                        entry_degree(&a, u.i, u.j, u.xpow).unwrap(),
                        entry_degree(&b, v.i, v.j, v.xpow).unwrap(),
                    );
                }
            }
        }
    }

    #[test]
    fn move_json_round_trip_is_one_based() {
        let moves = vec![
            Move::GlobalShift(1),
            Move::UnitShift { index: 1, delta: -2 },
            Move::Permute(vec![1, 0, 2, 3]),
        ];
        let json = serde_json::to_string(&moves).unwrap();
        assert_eq!(
            json,
            r#"[{"kind":"global","delta":1},{"kind":"unit","index":2,"delta":-2},{"kind":"permute","pi":[2,1,3,4]}]"#
        );
        let back: Vec<Move> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, moves);
    }

    #[test]
    fn lpa_descriptors_from_fixtures() {
        let f1 = Graph::parse(include_str!("../../../fixtures/F1.graph")).unwrap();
        let v3 = f1.vertex_ix("v3").unwrap();
        assert_eq!(lpa_descriptor(&f1, v3).unwrap(), d(2, &[0, 1, 1, 2]));

        let f2 = Graph::parse(include_str!("../../../fixtures/F2.graph")).unwrap();
        let w2 = f2.vertex_ix("w2").unwrap();
        assert_eq!(lpa_descriptor(&f2, w2).unwrap(), d(2, &[0, 1, 2, 3]));

        let e1 = Graph::parse(include_str!("../../../fixtures/E1.graph")).unwrap();
        let v2 = e1.vertex_ix("v2").unwrap();
        assert_eq!(lpa_descriptor(&e1, v2).unwrap(), d(0, &[0, 1, 1]));
    }
}
