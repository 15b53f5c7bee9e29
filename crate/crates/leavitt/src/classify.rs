//! Graded-isomorphism classification for connected out-degree-≤1 graphs:
//! depth profiles, a rotation-canonical invariant, explicit basis-level
//! witnesses with verification, certificates with a JSON wire form, and an
//! independent brute-force oracle for small acyclic inputs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{Graph, Path, VertexIx};
use crate::lis::{self, LisElement};
use crate::shift::{apply_move, find_move_sequence, lpa_descriptor, Move};

/// Vertex counts by relative depth. Cyclic graphs use a length-s histogram
/// (index = depth mod s); trees record exact depths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Histogram {
    Cyclic(Vec<usize>),
    Tree(BTreeMap<usize, usize>),
}

// JSON objects key maps by string, so the tree variant round-trips through
// string-keyed depths; a derived untagged deserializer cannot recover them.
impl<'de> Deserialize<'de> for Histogram {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        struct HistogramVisitor;

        impl<'de> serde::de::Visitor<'de> for HistogramVisitor {
            type Value = Histogram;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a residue-count array or a depth-count object")
            }

            fn visit_seq<A>(self, mut seq: A) -> std::result::Result<Histogram, A::Error>
            where
                A: serde::de::SeqAccess<'de>,
            {
                let mut counts = Vec::new();
                while let Some(count) = seq.next_element::<usize>()? {
                    counts.push(count);
                }
                Ok(Histogram::Cyclic(counts))
            }

            fn visit_map<A>(self, mut map: A) -> std::result::Result<Histogram, A::Error>
            where
                A: serde::de::MapAccess<'de>,
            {
                let mut counts = BTreeMap::new();
                while let Some((key, count)) = map.next_entry::<String, usize>()? {
                    let depth: usize = key.parse().map_err(|_| {
                        serde::de::Error::custom(format!("depth key `{key}` is not an integer"))
                    })?;
                    counts.insert(depth, count);
                }
                Ok(Histogram::Tree(counts))
            }
        }

        deserializer.deserialize_any(HistogramVisitor)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthProfile {
    pub step: usize,
    pub histogram: Histogram,
}

/// Base-independent form of the depth profile: the lexicographically
/// minimal rotation of the histogram (trees: the exact profile).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalInvariant {
    pub step: usize,
    pub canon: Histogram,
}

/// Basis-level graded-isomorphism witness between LI(E) and LI(F): base
/// vertices, a pairing σ of base paths, a residue shift c, and cycle-power
/// corrections λ with |q_{σ(i)}| = |pᵢ| + c − λᵢ·s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub v0: VertexIx,
    pub w0: VertexIx,
    pub c: i64,
    /// 0-based: sigma[i] is the F-side base-path index paired with E-side i.
    pub sigma: Vec<usize>,
    pub lambdas: Vec<i64>,
    pub e_stamp: u64,
    pub f_stamp: u64,
}

/// Outcome of classification, self-contained for re-verification.
#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    Iso {
        invariant_e: CanonicalInvariant,
        invariant_f: CanonicalInvariant,
        witness: Witness,
        moves: Vec<Move>,
    },
    NonIso {
        invariant_e: CanonicalInvariant,
        invariant_f: CanonicalInvariant,
    },
}

/// Histogram of relative depths over all vertices, taken at base `v0`.
pub fn depth_profile(g: &Graph, v0: VertexIx) -> Result<DepthProfile> {
    let step = g.unique_cycle()?.map(|c| c.len()).unwrap_or(0);
    let paths = g.base_paths(v0)?;
    let histogram = if step == 0 {
        let mut map = BTreeMap::new();
        for p in &paths {
            *map.entry(p.len()).or_insert(0) += 1;
        }
        Histogram::Tree(map)
    } else {
        let mut h = vec![0usize; step];
        for p in &paths {
            h[p.len() % step] += 1;
        }
        Histogram::Cyclic(h)
    };
    Ok(DepthProfile { step, histogram })
}

fn min_rotation(h: &[usize]) -> Vec<usize> {
    let s = h.len();
    (0..s)
        .map(|t| {
            let mut r = Vec::with_capacity(s);
            r.extend_from_slice(&h[t..]);
            r.extend_from_slice(&h[..t]);
            r
        })
        .min()
        .unwrap()
}

/// Vertices on the cycle, in vertex-index order; empty for trees.
pub fn cycle_sources(g: &Graph) -> Result<Vec<VertexIx>> {
    match g.unique_cycle()? {
        None => Ok(Vec::new()),
        Some(c) => {
            let mut at = c.path.base;
            let mut out = Vec::with_capacity(c.len());
            for &e in &c.path.edges {
                out.push(at);
                at = g.edge(e).dst;
            }
            out.sort_unstable();
            Ok(out)
        }
    }
}

/// The classification invariant: equal canonical invariants characterize
/// graded isomorphism of the Leavitt inverse semigroups (and path algebras)
/// in scope.
pub fn canonical_invariant(g: &Graph) -> Result<CanonicalInvariant> {
    match g.unique_cycle()? {
        None => {
            let sink = g.unique_sink()?.expect("tree has a sink");
            let profile = depth_profile(g, sink)?;
            Ok(CanonicalInvariant { step: 0, canon: profile.histogram })
        }
        Some(c) => {
            let profile = depth_profile(g, c.path.base)?;
            let Histogram::Cyclic(h) = profile.histogram else { unreachable!() };
            Ok(CanonicalInvariant { step: c.len(), canon: Histogram::Cyclic(min_rotation(&h)) })
        }
    }
}

fn residue(x: i64, s: usize) -> i64 {
    if s == 0 {
        x
    } else {
        x.rem_euclid(s as i64)
    }
}

/// Build the residue-matched witness for the given bases and shift c.
/// σ pairs base paths class-by-class (residue classes of |pᵢ|+c against
/// |qⱼ| mod s; exact lengths for trees), ties broken by base-path order.
pub fn build_witness(
    g_e: &Graph,
    g_f: &Graph,
    v0: VertexIx,
    w0: VertexIx,
    c: i64,
) -> Result<Witness> {
    let s_e = g_e.unique_cycle()?.map(|c| c.len()).unwrap_or(0);
    let s_f = g_f.unique_cycle()?.map(|c| c.len()).unwrap_or(0);
    if s_e != s_f {
        return Err(Error::BadWitness(format!("cycle lengths differ: {s_e} vs {s_f}")));
    }
    let s = s_e;
    if s == 0 && c != 0 {
        return Err(Error::BadWitness("trees admit only c = 0".into()));
    }
    let paths_e = g_e.base_paths(v0)?;
    let paths_f = g_f.base_paths(w0)?;
    if paths_e.len() != paths_f.len() {
        return Err(Error::BadWitness(format!(
            "vertex counts differ: {} vs {}",
            paths_e.len(),
            paths_f.len()
        )));
    }
    let n = paths_e.len();
    // Bucket F-side indices by residue class, preserving base-path order.
    let mut buckets: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (j, q) in paths_f.iter().enumerate() {
        buckets.entry(residue(q.len() as i64, s)).or_default().push(j);
    }
    let mut cursors: BTreeMap<i64, usize> = BTreeMap::new();
    let mut sigma = vec![0usize; n];
    let mut lambdas = vec![0i64; n];
    for (i, p) in paths_e.iter().enumerate() {
        let r = residue(p.len() as i64 + c, s);
        let bucket = buckets.get(&r).ok_or_else(|| {
            Error::BadWitness("residue multisets do not match for these bases".into())
        })?;
        let cursor = cursors.entry(r).or_insert(0);
        if *cursor >= bucket.len() {
            return Err(Error::BadWitness("residue multisets do not match for these bases".into()));
        }
        let j = bucket[*cursor];
        *cursor += 1;
        sigma[i] = j;
        lambdas[i] = if s == 0 {
            0
        } else {
            (p.len() as i64 + c - paths_f[j].len() as i64) / s as i64
        };
        if s == 0 && p.len() != paths_f[j].len() {
            return Err(Error::BadWitness("depth multisets do not match".into()));
        }
    }
    // Any unconsumed F-side path means the classes were unbalanced.
    for (r, bucket) in &buckets {
        if cursors.get(r).copied().unwrap_or(0) != bucket.len() {
            return Err(Error::BadWitness("residue multisets do not match for these bases".into()));
        }
    }
    Ok(Witness {
        v0,
        w0,
        c,
        sigma,
        lambdas,
        e_stamp: g_e.stamp(),
        f_stamp: g_f.stamp(),
    })
}

/// Decide graded isomorphism. Equal canonical invariants yield an Iso
/// certificate carrying a witness (the residue-matched witness whose
/// induced vertex bijection is lexicographically minimal, earliest base
/// pair on ties) and a move sequence between the two LPA descriptors;
/// unequal invariants yield NonIso carrying both.
pub fn decide_graded_iso(g_e: &Graph, g_f: &Graph) -> Result<Certificate> {
    let invariant_e = canonical_invariant(g_e)?;
    let invariant_f = canonical_invariant(g_f)?;
    if invariant_e != invariant_f {
        return Ok(Certificate::NonIso { invariant_e, invariant_f });
    }
    let s = invariant_e.step;
    let (v0s, w0s, cs) = if s == 0 {
        (
            vec![g_e.unique_sink()?.expect("tree has a sink")],
            vec![g_f.unique_sink()?.expect("tree has a sink")],
            vec![0i64],
        )
    } else {
        (cycle_sources(g_e)?, cycle_sources(g_f)?, (0..s as i64).collect())
    };
    let mut best: Option<(Vec<VertexIx>, Witness)> = None;
    for &v0 in &v0s {
        let paths_e = g_e.base_paths(v0)?;
        let mut index_of_source = vec![0usize; g_e.n_vertices()];
        for (i, p) in paths_e.iter().enumerate() {
            index_of_source[p.base] = i;
        }
        for &w0 in &w0s {
            let paths_f = g_f.base_paths(w0)?;
            for &c in &cs {
                let Ok(w) = build_witness(g_e, g_f, v0, w0, c) else { continue };
                let vmap: Vec<VertexIx> = (0..g_e.n_vertices())
                    .map(|v| paths_f[w.sigma[index_of_source[v]]].base)
                    .collect();
                if best.as_ref().map_or(true, |(bm, _)| vmap < *bm) {
                    best = Some((vmap, w));
                }
            }
        }
    }
    let witness = best
        .ok_or_else(|| Error::BadWitness("no witness found despite equal invariants".into()))?
        .1;
    let d_e = lpa_descriptor(g_e, witness.v0)?;
    let d_f = lpa_descriptor(g_f, witness.w0)?;
    let moves = find_move_sequence(&d_e, &d_f)
        .ok_or_else(|| Error::BadWitness("no move sequence despite equal invariants".into()))?;
    Ok(Certificate::Iso { invariant_e, invariant_f, witness, moves })
}

/// Express a nonzero element of LI(E) against the base decomposition:
/// returns (i, j, k) with the element equal to pᵢ·C^k·pⱼ* (k = 0 in trees).
pub fn decompose(g: &Graph, v0: VertexIx, a: &LisElement) -> Result<(usize, usize, i64)> {
    let Some((p, q)) = a.paths() else {
        return Err(Error::BadWitness("zero has no base decomposition".into()));
    };
    let s = g.unique_cycle()?.map(|c| c.len()).unwrap_or(0);
    let paths = g.base_paths(v0)?;
    let find = |v: VertexIx| paths.iter().position(|bp| bp.base == v).unwrap();
    let i = find(p.source());
    let j = find(q.source());
    let k = if s == 0 {
        debug_assert_eq!(
            p.len() as i64 - q.len() as i64,
            paths[i].len() as i64 - paths[j].len() as i64
        );
        0
    } else {
        let num = p.len() as i64 - q.len() as i64 - paths[i].len() as i64 + paths[j].len() as i64;
        if num % s as i64 != 0 {
            return Err(Error::BadWitness("element does not decompose over this base".into()));
        }
        num / s as i64
    };
    Ok((i, j, k))
}

fn repeat_cycle(g: &Graph, base: &Path, cycle: &Path, times: i64) -> Path {
    let mut out = base.clone();
    for _ in 0..times {
        out = g.concat(&out, cycle);
    }
    out
}

/// Image of an LI(E) element under the witness map: pᵢ·C₁ᵏ·pⱼ* goes to
/// q_{σ(i)}·C₂^{k+λᵢ−λⱼ}·q_{σ(j)}*, renormalized; zero goes to zero.
pub fn apply_witness(
    g_e: &Graph,
    g_f: &Graph,
    w: &Witness,
    a: &LisElement,
) -> Result<LisElement> {
    if w.e_stamp != g_e.stamp() || w.f_stamp != g_f.stamp() {
        return Err(Error::CrossGraph);
    }
    if a.is_zero() {
        return Ok(LisElement::Zero);
    }
    let (i, j, k) = decompose(g_e, w.v0, a)?;
    let m = k + w.lambdas[i] - w.lambdas[j];
    let paths_f = g_f.base_paths(w.w0)?;
    let qi = &paths_f[w.sigma[i]];
    let qj = &paths_f[w.sigma[j]];
    if m == 0 {
        return lis::normalize(g_f, qi.clone(), qj.clone());
    }
    let cycle = g_f.cycle_at(w.w0)?;
    if m > 0 {
        lis::normalize(g_f, repeat_cycle(g_f, qi, &cycle, m), qj.clone())
    } else {
        lis::normalize(g_f, qi.clone(), repeat_cycle(g_f, qj, &cycle, -m))
    }
}

fn structurally_valid(g_e: &Graph, g_f: &Graph, w: &Witness) -> Result<bool> {
    if w.e_stamp != g_e.stamp() || w.f_stamp != g_f.stamp() {
        return Err(Error::CrossGraph);
    }
    let s_e = g_e.unique_cycle()?.map(|c| c.len()).unwrap_or(0);
    let s_f = g_f.unique_cycle()?.map(|c| c.len()).unwrap_or(0);
    if s_e != s_f {
        return Ok(false);
    }
    let s = s_e;
    let paths_e = match g_e.base_paths(w.v0) {
        Ok(p) => p,
        Err(_) => return Ok(false),
    };
    let paths_f = match g_f.base_paths(w.w0) {
        Ok(p) => p,
        Err(_) => return Ok(false),
    };
    let n = paths_e.len();
    if paths_f.len() != n || w.sigma.len() != n || w.lambdas.len() != n {
        return Ok(false);
    }
    let mut seen = vec![false; n];
    for &j in &w.sigma {
        if j >= n || seen[j] {
            return Ok(false);
        }
        seen[j] = true;
    }
    if s == 0 && (w.c != 0 || w.lambdas.iter().any(|&l| l != 0)) {
        return Ok(false);
    }
    // The exact length law ties σ, c, and λ together.
    for i in 0..n {
        let expect = paths_e[i].len() as i64 + w.c - w.lambdas[i] * s as i64;
        if paths_f[w.sigma[i]].len() as i64 != expect {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Windowed verification of a witness: structural laws, grade preservation,
/// injectivity, vertex bijection, and multiplicativity φ(ab) = φ(a)φ(b)
/// over all element pairs with |p|+|q| ≤ window.
pub fn verify_witness(
    g_e: &Graph,
    g_f: &Graph,
    w: &Witness,
    window: usize,
    exec: Exec,
) -> Result<bool> {
    if !structurally_valid(g_e, g_f, w)? {
        return Ok(false);
    }
    let elements = lis::enumerate_elements(g_e, window);
    let mut images = Vec::with_capacity(elements.len());
    for a in &elements {
        let fa = apply_witness(g_e, g_f, w, a)?;
        if fa.is_zero() || fa.grade() != a.grade() {
            return Ok(false);
        }
        images.push(fa);
    }
    let distinct: BTreeSet<&LisElement> = images.iter().collect();
    if distinct.len() != images.len() {
        return Ok(false);
    }
    // Vertex idempotents must land on vertex idempotents, bijectively.
    let mut hit = vec![false; g_f.n_vertices()];
    for v in 0..g_e.n_vertices() {
        let fv = apply_witness(g_e, g_f, w, &lis::vertex(g_e, v))?;
        let Some((p, q)) = fv.paths() else { return Ok(false) };
        if !p.is_empty() || !q.is_empty() || hit[p.source()] {
            return Ok(false);
        }
        hit[p.source()] = true;
    }
    if hit.iter().any(|&b| !b) {
        return Ok(false);
    }
    let n = elements.len();
    let check_row = |i: usize| -> Result<bool> {
        for jx in 0..n {
            let ab = lis::multiply(g_e, &elements[i], &elements[jx])?;
            let fab = apply_witness(g_e, g_f, w, &ab)?;
            let fa_fb = lis::multiply(g_f, &images[i], &images[jx])?;
            if fab != fa_fb {
                return Ok(false);
            }
        }
        Ok(true)
    };
    match exec.effective() {
        Exec::Sequential => {
            for i in 0..n {
                if !check_row(i)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            let rows: Vec<Result<bool>> = (0..n).into_par_iter().map(check_row).collect();
            for r in rows {
                if !r? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        #[cfg(not(feature = "parallel"))]
        Exec::Parallel => unreachable!("effective() folds Parallel away"),
    }
}

/// Fold the certificate's moves over the source descriptor and compare with
/// the target descriptor.
fn moves_carry_descriptor(
    g_e: &Graph,
    g_f: &Graph,
    w: &Witness,
    moves: &[Move],
) -> Result<bool> {
    let mut d = lpa_descriptor(g_e, w.v0)?;
    for m in moves {
        d = match apply_move(&d, m) {
            Ok(next) => next,
            Err(_) => return Ok(false),
        };
    }
    Ok(d == lpa_descriptor(g_f, w.w0)?)
}

/// Re-verify a parsed certificate end to end: embedded invariants must be
/// the recomputed ones; Iso certificates must carry a witness passing
/// `verify_witness` at the window plus a move sequence carrying descriptor
/// to descriptor; NonIso certificates must show genuinely different
/// invariants.
pub fn verify_certificate(
    g_e: &Graph,
    g_f: &Graph,
    cert: &Certificate,
    window: usize,
    exec: Exec,
) -> Result<bool> {
    let inv_e = canonical_invariant(g_e)?;
    let inv_f = canonical_invariant(g_f)?;
    match cert {
        Certificate::NonIso { invariant_e, invariant_f } => {
            Ok(*invariant_e == inv_e && *invariant_f == inv_f && inv_e != inv_f)
        }
        Certificate::Iso { invariant_e, invariant_f, witness, moves } => {
            if *invariant_e != inv_e || *invariant_f != inv_f || inv_e != inv_f {
                return Ok(false);
            }
            if !verify_witness(g_e, g_f, witness, window, exec)? {
                return Ok(false);
            }
            moves_carry_descriptor(g_e, g_f, witness, moves)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct WitnessWire {
    v0: String,
    w0: String,
    c: i64,
    sigma: Vec<usize>,
    lambdas: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct CertWire {
    result: String,
    #[serde(rename = "invariantE")]
    invariant_e: CanonicalInvariant,
    #[serde(rename = "invariantF")]
    invariant_f: CanonicalInvariant,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    witness: Option<WitnessWire>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    moves: Option<Vec<Move>>,
}

/// Serialize a certificate; σ and the move indices go out 1-based.
pub fn certificate_to_json(g_e: &Graph, g_f: &Graph, cert: &Certificate) -> Result<String> {
    let wire = match cert {
        Certificate::NonIso { invariant_e, invariant_f } => CertWire {
            result: "noniso".into(),
            invariant_e: invariant_e.clone(),
            invariant_f: invariant_f.clone(),
            witness: None,
            moves: None,
        },
        Certificate::Iso { invariant_e, invariant_f, witness, moves } => CertWire {
            result: "iso".into(),
            invariant_e: invariant_e.clone(),
            invariant_f: invariant_f.clone(),
            witness: Some(WitnessWire {
                v0: g_e.vertex_id(witness.v0).to_string(),
                w0: g_f.vertex_id(witness.w0).to_string(),
                c: witness.c,
                sigma: witness.sigma.iter().map(|&j| j + 1).collect(),
                lambdas: witness.lambdas.clone(),
            }),
            moves: Some(moves.clone()),
        },
    };
    Ok(serde_json::to_string_pretty(&wire)?)
}

/// Parse a certificate back; inverse of `certificate_to_json`.
pub fn certificate_from_json(g_e: &Graph, g_f: &Graph, text: &str) -> Result<Certificate> {
    let wire: CertWire = serde_json::from_str(text)?;
    match wire.result.as_str() {
        "noniso" => Ok(Certificate::NonIso {
            invariant_e: wire.invariant_e,
            invariant_f: wire.invariant_f,
        }),
        "iso" => {
            let w = wire
                .witness
                .ok_or_else(|| Error::BadCertificate("iso certificate without witness".into()))?;
            let moves = wire
                .moves
                .ok_or_else(|| Error::BadCertificate("iso certificate without moves".into()))?;
            let n = w.sigma.len();
            if w.sigma.iter().any(|&j| j == 0 || j > n) {
                return Err(Error::BadCertificate("sigma entries are 1-based indices".into()));
            }
            Ok(Certificate::Iso {
                invariant_e: wire.invariant_e,
                invariant_f: wire.invariant_f,
                witness: Witness {
                    v0: g_e.vertex_ix(&w.v0)?,
                    w0: g_f.vertex_ix(&w.w0)?,
                    c: w.c,
                    sigma: w.sigma.iter().map(|&j| j - 1).collect(),
                    lambdas: w.lambdas,
                    e_stamp: g_e.stamp(),
                    f_stamp: g_f.stamp(),
                },
                moves,
            })
        }
        other => Err(Error::BadCertificate(format!("unknown result `{other}`"))),
    }
}

type ProductIx = Vec<Vec<i32>>;

fn product_table(g: &Graph, elements: &[LisElement]) -> Result<ProductIx> {
    let index: BTreeMap<&LisElement, i32> =
        elements.iter().enumerate().map(|(ix, a)| (a, ix as i32)).collect();
    let n = elements.len();
    let mut table = vec![vec![-1i32; n]; n];
    for i in 0..n {
        for j in 0..n {
            let ab = lis::multiply(g, &elements[i], &elements[j])?;
            if !ab.is_zero() {
                table[i][j] = *index
                    .get(&ab)
                    .expect("finite semigroup is closed under products");
            }
        }
    }
    Ok(table)
}

fn backtrack(
    ta: &ProductIx,
    tb: &ProductIx,
    cands: &[Vec<i32>],
    phi: &mut Vec<i32>,
    used: &mut Vec<bool>,
    depth: usize,
) -> bool {
    let n = phi.len();
    if depth == n {
        // Full table check: products must correspond everywhere.
        for i in 0..n {
            for j in 0..n {
                let lhs = ta[i][j];
                let rhs = tb[phi[i] as usize][phi[j] as usize];
                let ok = if lhs < 0 { rhs < 0 } else { rhs == phi[lhs as usize] };
                if !ok {
                    return false;
                }
            }
        }
        return true;
    }
    'cand: for &b in &cands[depth] {
        if used[b as usize] {
            continue;
        }
        phi[depth] = b;
        used[b as usize] = true;
        // Check all products among assigned elements whose result is also
        // already assigned on both sides.
        for other in 0..=depth {
            for (x, y) in [(depth, other), (other, depth)] {
                let lhs = ta[x][y];
                let rhs = tb[phi[x] as usize][phi[y] as usize];
                let consistent = if lhs < 0 {
                    rhs < 0
                } else if (lhs as usize) <= depth {
                    rhs == phi[lhs as usize]
                } else {
                    rhs >= 0
                };
                if !consistent {
                    used[b as usize] = false;
                    continue 'cand;
                }
            }
        }
        if backtrack(ta, tb, cands, phi, used, depth + 1) {
            return true;
        }
        used[b as usize] = false;
    }
    phi[depth] = -1;
    false
}

/// Independent oracle: search for a grade-preserving multiplicative
/// bijection between the full finite semigroups of two acyclic graphs.
/// Deterministic: the first map in candidate order, sequential or parallel.
pub fn brute_force_iso(
    g_e: &Graph,
    g_f: &Graph,
    exec: Exec,
) -> Result<Option<Vec<(LisElement, LisElement)>>> {
    for g in [g_e, g_f] {
        if !g.is_acyclic() {
            return Err(Error::CyclicInput);
        }
        if g.n_vertices() > 6 {
            return Err(Error::SizeLimit { size: g.n_vertices(), limit: 6 });
        }
    }
    let a = lis::enumerate_elements(g_e, 0);
    let b = lis::enumerate_elements(g_f, 0);
    if a.len() != b.len() {
        return Ok(None);
    }
    let grades = |els: &[LisElement]| -> Vec<i64> {
        let mut gs: Vec<i64> = els.iter().map(|x| x.grade().unwrap().0).collect();
        gs.sort_unstable();
        gs
    };
    if grades(&a) != grades(&b) {
        return Ok(None);
    }
    let ta = product_table(g_e, &a)?;
    let tb = product_table(g_f, &b)?;
    let n = a.len();
    let cands: Vec<Vec<i32>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| a[i].grade() == b[j].grade())
                .map(|j| j as i32)
                .collect()
        })
        .collect();
    let run_branch = |first: i32| -> Option<Vec<i32>> {
        let mut phi = vec![-1i32; n];
        let mut used = vec![false; n];
        phi[0] = first;
        used[first as usize] = true;
        if n == 1 || backtrack(&ta, &tb, &cands, &mut phi, &mut used, 1) {
            Some(phi)
        } else {
            None
        }
    };
    let found: Option<Vec<i32>> = if n == 0 {
        Some(Vec::new())
    } else {
        let firsts = &cands[0];
        match exec.effective() {
            Exec::Sequential => firsts.iter().find_map(|&f| run_branch(f)),
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                firsts.par_iter().find_map_first(|&f| run_branch(f))
            }
            #[cfg(not(feature = "parallel"))]
            Exec::Parallel => unreachable!("effective() folds Parallel away"),
        }
    };
    Ok(found.map(|phi| {
        phi.iter()
            .enumerate()
            .map(|(i, &j)| (a[i].clone(), b[j as usize].clone()))
            .collect()
    }))
}
