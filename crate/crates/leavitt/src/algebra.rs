//! Contracted semigroup algebra of a finite Leavitt inverse semigroup over
//! exact rationals: structure constants, the Cuntz–Krieger ideal, its
//! two-sided closure and quotient dimension, and the per-sink dimension
//! formula it must agree with.

use std::collections::BTreeMap;

use num::{BigRational, Zero as _};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{Graph, VertexIx};
use crate::lis::{self, LisElement};

/// Finite rational combination of nonzero semigroup elements; the semigroup
/// zero is identified with the algebra zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    coeffs: BTreeMap<LisElement, BigRational>,
}

impl AlgebraElement {
    pub fn zero() -> AlgebraElement {
        AlgebraElement { coeffs: BTreeMap::new() }
    }

    pub fn term(a: LisElement, c: BigRational) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        out.add_term(a, c);
        out
    }

    pub fn basis(a: LisElement) -> AlgebraElement {
        AlgebraElement::term(a, BigRational::from_integer(1.into()))
    }

    pub fn add_term(&mut self, a: LisElement, c: BigRational) {
        if a.is_zero() || c.is_zero() {
            return;
        }
        match self.coeffs.entry(a) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LisElement, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_term(k.clone(), -v.clone());
        }
        out
    }

    /// Bilinear extension of the semigroup product.
    pub fn mul(&self, g: &Graph, other: &AlgebraElement) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero();
        for (x, cx) in &self.coeffs {
            for (y, cy) in &other.coeffs {
                let xy = lis::multiply(g, x, y)?;
                out.add_term(xy, cx * cy);
            }
        }
        Ok(out)
    }
}

/// Product table over the full enumerated basis of an acyclic graph's
/// semigroup: entry (i, j) is the basis index of the product, or None for
/// zero — contracted-algebra products are single basis elements or zero.
pub struct ProductTable {
    pub basis: Vec<LisElement>,
    pub table: Vec<Vec<Option<usize>>>,
}

impl ProductTable {
    pub fn index_of(&self, a: &LisElement) -> Option<usize> {
        self.basis.iter().position(|b| b == a)
    }
}

/// Enumerate the finite basis and tabulate all pairwise products.
pub fn structure_constants(g: &Graph) -> Result<ProductTable> {
    if !g.is_acyclic() {
        return Err(Error::CyclicInput);
    }
    let basis = lis::enumerate_elements(g, 0);
    let index: BTreeMap<&LisElement, usize> =
        basis.iter().enumerate().map(|(ix, a)| (a, ix)).collect();
    let n = basis.len();
    let mut table = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            let ab = lis::multiply(g, &basis[i], &basis[j])?;
            if !ab.is_zero() {
                table[i][j] =
                    Some(*index.get(&ab).expect("finite semigroup is closed under products"));
            }
        }
    }
    Ok(ProductTable { basis, table })
}

/// Cuntz–Krieger ideal generators: v − Σ_{s(e)=v} e·e* for every vertex of
/// out-degree at least 2 (out-degree 1 is already a semigroup relation).
pub fn ck_ideal_generators(g: &Graph) -> Result<Vec<AlgebraElement>> {
    if !g.is_acyclic() {
        return Err(Error::CyclicInput);
    }
    let mut out = Vec::new();
    for v in 0..g.n_vertices() {
        if g.out_degree(v) < 2 {
            continue;
        }
        let mut gen = AlgebraElement::basis(lis::vertex(g, v));
        for &e in g.out_edges(v) {
            let ee = lis::multiply(g, &lis::edge(g, e), &lis::ghost(g, e))?;
            gen.add_term(ee, -BigRational::from_integer(1.into()));
        }
        out.push(gen);
    }
    Ok(out)
}

/// Sparse vector over the enumerated basis.
type SparseVec = BTreeMap<usize, BigRational>;

fn to_sparse(table: &ProductTable, a: &AlgebraElement) -> SparseVec {
    let index: BTreeMap<&LisElement, usize> =
        table.basis.iter().enumerate().map(|(ix, b)| (b, ix)).collect();
    a.terms().map(|(k, v)| (*index.get(k).expect("term in basis"), v.clone())).collect()
}

/// Reduced row-echelon accumulator over sparse rational vectors.
struct RowSpace {
    /// pivot column → normalized row with 1 at that column.
    rows: BTreeMap<usize, SparseVec>,
}

impl RowSpace {
    fn new() -> RowSpace {
        RowSpace { rows: BTreeMap::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the space; if a nonzero remainder survives, add it
    /// as a new pivot row and return true.
    fn insert(&mut self, mut v: SparseVec) -> bool {
        loop {
            let Some((&col, coeff)) = v.iter().next() else { return false };
            match self.rows.get(&col) {
                Some(row) => {
                    let factor = coeff.clone();
                    for (&c2, val) in row {
                        let delta = val * &factor;
                        let entry = v.entry(c2).or_insert_with(BigRational::zero);
                        *entry -= delta;
                        if entry.is_zero() {
                            v.remove(&c2);
                        }
                    }
                }
                None => {
                    let inv = coeff.recip();
                    let normalized: SparseVec =
                        v.iter().map(|(&c, x)| (c, x * &inv)).collect();
                    // Back-substitute into existing rows to stay reduced.
                    let mut updates = Vec::new();
                    for (&p, row) in &self.rows {
                        if let Some(f) = row.get(&col) {
                            let f = f.clone();
                            let mut new_row = row.clone();
                            for (&c2, x) in &normalized {
                                let delta = x * &f;
                                let entry = new_row.entry(c2).or_insert_with(BigRational::zero);
                                *entry -= delta;
                                if entry.is_zero() {
                                    new_row.remove(&c2);
                                }
                            }
                            updates.push((p, new_row));
                        }
                    }
                    for (p, row) in updates {
                        self.rows.insert(p, row);
                    }
                    self.rows.insert(col, normalized);
                    return true;
                }
            }
        }
    }
}

pub const DEFAULT_SIZE_LIMIT: usize = 4096;

/// Dimension of K₀LI(E) modulo the two-sided ideal generated by the
/// Cuntz–Krieger elements, with the default basis-size limit.
pub fn quotient_dimension(g: &Graph) -> Result<usize> {
    quotient_dimension_with_limit(g, DEFAULT_SIZE_LIMIT)
}

/// Same, with an explicit basis-size limit. The ideal closure is computed
/// by saturating the generators under left and right multiplication by all
/// basis elements until the rank stabilizes, with exact rational row
/// reduction throughout.
pub fn quotient_dimension_with_limit(g: &Graph, limit: usize) -> Result<usize> {
    let table = structure_constants(g)?;
    let n = table.basis.len();
    if n > limit {
        return Err(Error::SizeLimit { size: n, limit });
    }
    let generators = ck_ideal_generators(g)?;
    let mut space = RowSpace::new();
    let mut frontier: Vec<SparseVec> = Vec::new();
    for gen in &generators {
        let v = to_sparse(&table, gen);
        if space.insert(v.clone()) {
            frontier.push(v);
        }
    }
    while let Some(v) = frontier.pop() {
        // One-sided products b·v and v·b for every basis element b: since
        // basis products are single elements, these are coordinate
        // relabelings (with drops) of v.
        for b in 0..n {
            for side in 0..2 {
                let mut w: SparseVec = BTreeMap::new();
                for (&ix, coeff) in &v {
                    let prod = if side == 0 { table.table[b][ix] } else { table.table[ix][b] };
                    if let Some(t) = prod {
                        let entry = w.entry(t).or_insert_with(BigRational::zero);
                        *entry += coeff;
                        if entry.is_zero() {
                            w.remove(&t);
                        }
                    }
                }
                if !w.is_empty() && space.insert(w.clone()) {
                    frontier.push(w);
                }
            }
        }
    }
    Ok(n - space.rank())
}

/// Paths ending at each vertex, by the acyclic counting recurrence
/// count(v) = 1 + Σ over edges e into v of count(s(e)).
fn path_counts(g: &Graph) -> Result<Vec<usize>> {
    if !g.is_acyclic() {
        return Err(Error::CyclicInput);
    }
    let n = g.n_vertices();
    let mut counts: Vec<Option<usize>> = vec![None; n];
    fn fill(g: &Graph, v: VertexIx, counts: &mut Vec<Option<usize>>) -> usize {
        if let Some(c) = counts[v] {
            return c;
        }
        let mut total = 1;
        for &e in g.edges_into(v) {
            total += fill(g, g.edge(e).src, counts);
        }
        counts[v] = Some(total);
        total
    }
    for v in 0..n {
        fill(g, v, &mut counts);
    }
    Ok(counts.into_iter().map(|c| c.unwrap()).collect())
}

/// Per-sink matrix blocks of the Leavitt path algebra of an acyclic graph:
/// (sink id, number of paths ending there). The algebra is the direct sum
/// of full matrix rings of these sizes.
pub fn sink_blocks(g: &Graph) -> Result<Vec<(String, usize)>> {
    let counts = path_counts(g)?;
    Ok((0..g.n_vertices())
        .filter(|&v| g.out_degree(v) == 0)
        .map(|v| (g.vertex_id(v).to_string(), counts[v]))
        .collect())
}

/// Dimension of the Leavitt path algebra of an acyclic graph: the sum of
/// squared path counts into each sink.
pub fn lpa_dimension_acyclic(g: &Graph) -> Result<usize> {
    Ok(sink_blocks(g)?.into_iter().map(|(_, c)| c * c).sum())
}

/// Check that a verified witness extends linearly to a graded algebra
/// homomorphism on the window: over all in-window pairs, φ(a·b) = φ(a)·φ(b)
/// and every φ(a) has the grade of a.
pub fn induced_algebra_iso_check(
    g_e: &Graph,
    g_f: &Graph,
    w: &crate::classify::Witness,
    window: usize,
    exec: Exec,
) -> Result<bool> {
    crate::classify::verify_witness(g_e, g_f, w, window, exec)
}
