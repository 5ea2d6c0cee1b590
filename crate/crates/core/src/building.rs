//! Vertices of the building of `PGL(S_λ(V))` fixed by an order `H`.
//!
//! Vertices are homothety classes of lattices. A class is fixed when its
//! lattices are `H`-stable. Two independent routes are provided: the
//! polytrope of an exponent matrix, for graduated orders, and a search
//! outward from the standard lattice through invariant subspaces of the
//! residue representations.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::dvr::{distance, Lattice, LatticeClass, MatrixModule};
use crate::error::{Error, Result};
use crate::field::{ResidueElem, ResidueField, ValuedField};
use crate::matrix::Matrix;
use crate::residue_linalg::{self, enveloping_algebra, spin, KMatrix, Subspace};
use crate::schur::SchurModule;

/// Default cap on `q^N` for subspace enumeration.
pub const DEFAULT_SUBSPACE_CAP: u64 = 1 << 16;
/// Default coordinate range for unbounded polytropes.
pub const DEFAULT_POLYTROPE_RADIUS: u32 = 6;
const MAX_SUBSPACES: usize = 100_000;
const MAX_POINTS: usize = 1_000_000;

/// An `N×N` matrix over `Z ∪ {+∞}`; `None` is `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentMatrix {
    entries: Vec<Vec<Option<i64>>>,
}

impl ExponentMatrix {
    pub fn new(entries: Vec<Vec<Option<i64>>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("exponent matrix must be square".into()));
        }
        Ok(ExponentMatrix { entries })
    }

    pub fn from_finite(rows: &[&[i64]]) -> Self {
        ExponentMatrix { entries: rows.iter().map(|r| r.iter().map(|&x| Some(x)).collect()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<i64> {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<Option<i64>>] {
        &self.entries
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().flatten().all(Option::is_some)
    }
}

impl std::fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|x| x.map_or("∞".to_string(), |v| v.to_string())).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

fn min_plus(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    Some(a? + b?)
}

fn less(a: Option<i64>, b: Option<i64>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x < y,
        (Some(_), None) => true,
        _ => false,
    }
}

/// Closure of `m` under `m_ij ≤ m_ik + m_kj`.
pub fn min_plus_closure(m: &ExponentMatrix) -> Result<ExponentMatrix> {
    let n = m.dim();
    if let Some(i) = (0..n).find(|&i| m.get(i, i) != Some(0)) {
        return Err(Error::InvalidArgument(format!("diagonal entry {i} of an exponent matrix must be 0")));
    }
    let mut d = m.entries.clone();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = min_plus(d[i][k], d[k][j]);
                if less(via, d[i][j]) {
                    d[i][j] = via;
                }
            }
        }
    }
    if let Some(i) = (0..n).find(|&i| d[i][i] < Some(0)) {
        return Err(Error::NegativeCycle(i));
    }
    Ok(ExponentMatrix { entries: d })
}

/// Entrywise least valuation over a basis of `h`.
pub fn exponent_profile<F: ValuedField>(f: &F, h: &MatrixModule<F>) -> ExponentMatrix {
    let n = h.matrix_size();
    let mut entries = vec![vec![None; n]; n];
    for b in h.basis() {
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                if let Some(v) = f.val(b.get(i, j)).finite() {
                    if e.is_none_or(|x| v < x) {
                        *e = Some(v);
                    }
                }
            }
        }
    }
    ExponentMatrix { entries }
}

/// `Λ_M = {X : val(X_ij) ≥ m_ij}` as a module; entries `+∞` are forced to 0.
pub fn graduated_module<F: ValuedField>(f: &F, m: &ExponentMatrix) -> MatrixModule<F> {
    let n = m.dim();
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if let Some(e) = m.get(i, j) {
                gens.push(Matrix::unit(f, n, i, j).scale(f, &f.uniformizer_pow(e)));
            }
        }
    }
    MatrixModule::span(f, n, &gens).expect("square generators")
}

/// `Some(M)` when `h = Λ_M` for a closed exponent matrix `M`.
pub fn detect_graduated<F: ValuedField>(f: &F, h: &MatrixModule<F>) -> Result<Option<ExponentMatrix>> {
    require_full_rank(h)?;
    let m = exponent_profile(f, h);
    if (0..m.dim()).any(|i| m.get(i, i) != Some(0)) {
        return Ok(None);
    }
    match min_plus_closure(&m) {
        Ok(closed) if closed == m => {}
        _ => return Ok(None),
    }
    let lm = graduated_module(f, &m);
    Ok((lm.contains_module(f, h) && h.contains_module(f, &lm)).then_some(m))
}

fn require_full_rank<F: ValuedField>(h: &MatrixModule<F>) -> Result<()> {
    if !h.is_full_rank() {
        let n = h.matrix_size();
        return Err(Error::NotFullRank { rank: h.rank(), expected: n * n });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixMethod {
    Polytrope,
    Bfs,
}

/// A set of fixed vertices.
#[derive(Clone, Debug, Serialize)]
pub struct FixSet<E> {
    pub method: FixMethod,
    /// Sorted by canonical key.
    pub classes: Vec<LatticeClass<E>>,
    pub bounded: bool,
    /// Normalized exponent vectors, for the polytrope method.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<i64>>>,
}

impl<E: Clone + PartialEq + Eq + std::hash::Hash + std::fmt::Debug> FixSet<E> {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn contains(&self, c: &LatticeClass<E>) -> bool {
        self.classes.binary_search(c).is_ok()
    }

    /// Whether the two sets hold the same classes.
    pub fn same_classes(&self, other: &Self) -> bool {
        self.classes == other.classes
    }

    /// Largest distance from the standard class.
    pub fn radius<F: ValuedField<Elem = E>>(&self, f: &F) -> u64 {
        let n = self.classes.first().map_or(0, |c| c.representative().dim());
        let origin = LatticeClass::new(f, &Lattice::standard(f, n));
        self.classes.iter().map(|c| distance(f, &origin, c)).max().unwrap_or(0)
    }
}

fn diagonal_class<F: ValuedField>(f: &F, u: &[i64]) -> LatticeClass<F::Elem> {
    let n = u.len();
    let mut b = Matrix::identity(f, n);
    for (i, &e) in u.iter().enumerate() {
        b.set(i, i, f.uniformizer_pow(e));
    }
    LatticeClass::new(f, &Lattice::from_basis_matrix(f, &b).expect("diagonal basis"))
}

/// The diagonal vertices `[⊕ ϖ^{u_i} R e_i]` with `u_i − u_j ≤ m_ij`.
///
/// Bounded exactly when the closure of `m` is finite. Unbounded polytropes
/// are enumerated with coordinates in `0..=radius`.
pub fn fix_polytrope<F: ValuedField>(f: &F, m: &ExponentMatrix, radius: u32) -> Result<FixSet<F::Elem>> {
    let m = min_plus_closure(m)?;
    let n = m.dim();
    let bounded = m.is_finite();
    let span =
        if bounded { m.entries.iter().flatten().filter_map(|&x| x).max().unwrap_or(0).max(0) } else { radius as i64 };
    let mut points = Vec::new();
    let mut u = Vec::with_capacity(n);
    enumerate_points(&m, span, &mut u, &mut points)?;
    let mut classes: Vec<LatticeClass<F::Elem>> = points.iter().map(|p| diagonal_class(f, p)).collect();
    classes.sort();
    Ok(FixSet { method: FixMethod::Polytrope, classes, bounded, points: Some(points) })
}

fn enumerate_points(m: &ExponentMatrix, span: i64, u: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) -> Result<()> {
    let i = u.len();
    if i == m.dim() {
        if u.iter().min() == Some(&0) {
            if out.len() >= MAX_POINTS {
                return Err(Error::CapExceeded(format!("more than {MAX_POINTS} polytrope points")));
            }
            out.push(u.clone());
        }
        return Ok(());
    }
    let (mut lo, mut hi) = (0, span);
    for (j, &uj) in u.iter().enumerate() {
        if let Some(x) = m.get(i, j) {
            hi = hi.min(uj + x);
        }
        if let Some(x) = m.get(j, i) {
            lo = lo.max(uj - x);
        }
    }
    for v in lo..=hi {
        u.push(v);
        enumerate_points(m, span, u, out)?;
        u.pop();
    }
    Ok(())
}

/// A representation over the residue field, given by generator images.
#[derive(Clone, Debug)]
pub struct ResidueRep {
    pub k: ResidueField,
    pub dim: usize,
    pub generators: Vec<KMatrix>,
}

impl ResidueRep {
    /// `ρ̄` on the standard generators of `GL_n(k)`: transpositions,
    /// transvections and `diag(ζ, 1, …)` for a generator `ζ` of `k^×`.
    pub fn from_module(module: &SchurModule, k: &ResidueField) -> Result<Self> {
        let n = module.n();
        let mut gens = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut e = residue_linalg::identity(n);
                e.set(i, j, 1);
                gens.push(e);
                if i < j {
                    let mut s = residue_linalg::identity(n);
                    s.set(i, i, 0);
                    s.set(j, j, 0);
                    s.set(i, j, 1);
                    s.set(j, i, 1);
                    gens.push(s);
                }
            }
        }
        let zeta = k.multiplicative_generator();
        if zeta != 1 {
            for i in 0..n {
                let mut d = residue_linalg::identity(n);
                d.set(i, i, zeta);
                gens.push(d);
            }
        }
        let generators = gens.iter().map(|g| module.residue_rep(k, g)).collect::<Result<Vec<_>>>()?;
        Ok(ResidueRep { k: k.clone(), dim: module.dim(), generators })
    }

    /// Reduction of an integral basis of `h`.
    pub fn from_order<F: ValuedField>(f: &F, h: &MatrixModule<F>) -> Result<Self> {
        let generators = h.basis().iter().map(|b| b.try_map(|x| f.reduce(x))).collect::<Result<Vec<_>>>()?;
        Ok(ResidueRep { k: f.residue_field().clone(), dim: h.matrix_size(), generators })
    }

    /// Dimension of the span of the generator images.
    pub fn span_dim(&self) -> usize {
        let rows: Vec<Vec<ResidueElem>> = self.generators.iter().map(|g| g.as_slice().to_vec()).collect();
        Subspace::span(&self.k, self.dim * self.dim, rows).dim()
    }
}

/// Every proper nonzero subspace of `k^N` stable under the generators,
/// sorted by echelon form.
pub fn invariant_subspaces(rep: &ResidueRep, cap: u64) -> Result<Vec<Subspace>> {
    let (k, n) = (&rep.k, rep.dim);
    if n <= 1 || rep.span_dim() == n * n || enveloping_algebra(k, n, &rep.generators).len() == n * n {
        return Ok(Vec::new());
    }
    let q = k.order() as u64;
    if (n as u32) * (64 - q.leading_zeros()) > 63 || q.pow(n as u32) > cap {
        return Err(Error::CapExceeded(format!("{q}^{n} residue vectors exceed the cap {cap}")));
    }
    let mut found: BTreeSet<Subspace> = BTreeSet::new();
    for v in normalized_vectors(k, n) {
        let w = spin(k, n, &[v], &rep.generators);
        if w.dim() < n {
            found.insert(w);
        }
    }
    let mut frontier: Vec<Subspace> = found.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        let current: Vec<Subspace> = found.iter().cloned().collect();
        for a in &frontier {
            for b in &current {
                let s = a.sum(k, b);
                if s.dim() < n && !found.contains(&s) {
                    found.insert(s.clone());
                    next.push(s);
                }
            }
        }
        if found.len() > MAX_SUBSPACES {
            return Err(Error::CapExceeded(format!("more than {MAX_SUBSPACES} invariant subspaces")));
        }
        frontier = next;
    }
    Ok(found.into_iter().collect())
}

/// Nonzero vectors whose first nonzero coordinate is 1.
fn normalized_vectors(k: &ResidueField, n: usize) -> Vec<Vec<ResidueElem>> {
    let q = k.order();
    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        let count = (q as u64).pow(free as u32);
        for mut code in 0..count {
            let mut v = vec![0; n];
            v[lead] = 1;
            for x in v.iter_mut().skip(lead + 1) {
                *x = (code % q as u64) as ResidueElem;
                code /= q as u64;
            }
            out.push(v);
        }
    }
    out
}

/// Whether the reduction of `h` is all of `M_N(k)`.
pub fn spans_end_residue<F: ValuedField>(f: &F, h: &MatrixModule<F>) -> Result<bool> {
    require_full_rank(h)?;
    let n = h.matrix_size();
    Ok(ResidueRep::from_order(f, h)?.span_dim() == n * n)
}

/// Whether `X L ⊆ L` for every `X ∈ h`.
pub fn is_invariant<F: ValuedField>(f: &F, h: &MatrixModule<F>, l: &Lattice<F::Elem>) -> bool {
    let b = l.basis_matrix();
    let binv = b.inverse(f).expect("lattice basis is invertible");
    h.basis().iter().all(|x| binv.mul(f, &x.mul(f, &b)).is_integral(f))
}

/// Options for [`fix_bfs`].
#[derive(Clone, Copy, Debug)]
pub struct BfsOptions {
    /// Upper bound on the search radius; must be at least the congruence level.
    pub radius_cap: Option<u32>,
    pub subspace_cap: u64,
}

impl Default for BfsOptions {
    fn default() -> Self {
        BfsOptions { radius_cap: None, subspace_cap: DEFAULT_SUBSPACE_CAP }
    }
}

/// All `H`-fixed vertices, found by breadth-first search from `[Λ₀]`.
///
/// The neighbours of a fixed `[L]` that are fixed are exactly the lattices
/// between `ϖL` and `L` whose image in `L/ϖL` is invariant under the
/// reduction of `H` written in a basis of `L`.
pub fn fix_bfs<F: ValuedField>(f: &F, h: &MatrixModule<F>, opts: &BfsOptions) -> Result<FixSet<F::Elem>> {
    require_full_rank(h)?;
    let radius = h.congruence_level().expect("full rank");
    if let Some(cap) = opts.radius_cap {
        if cap < radius {
            return Err(Error::CapExceeded(format!("congruence level {radius} exceeds radius cap {cap}")));
        }
    }
    let n = h.matrix_size();
    let basis = h.basis();
    let origin = LatticeClass::new(f, &Lattice::standard(f, n));
    let mut seen: BTreeMap<Vec<Vec<String>>, LatticeClass<F::Elem>> = BTreeMap::new();
    seen.insert(origin.key().to_vec(), origin.clone());
    let mut queue = VecDeque::from([origin.clone()]);
    while let Some(c) = queue.pop_front() {
        let b = c.representative().basis_matrix();
        let binv = b.inverse(f)?;
        let mut gens = Vec::with_capacity(basis.len());
        for x in &basis {
            let local = binv.mul(f, &x.mul(f, &b));
            let reduced = local
                .try_map(|e| f.reduce(e))
                .map_err(|_| Error::InvariantViolation("a discovered lattice is not stable under the order".into()))?;
            gens.push(reduced);
        }
        let k = f.residue_field();
        let rep = ResidueRep { k: k.clone(), dim: n, generators: residue_linalg::algebra_generators(k, n, &gens) };
        for w in invariant_subspaces(&rep, opts.subspace_cap)? {
            let mut vectors: Vec<Vec<F::Elem>> =
                w.basis().iter().map(|v| b.mul_vec(f, &v.iter().map(|&x| f.lift(x)).collect::<Vec<_>>())).collect();
            let pi = f.uniformizer_pow(1);
            vectors.extend(b.columns().into_iter().map(|col| col.iter().map(|x| f.mul(x, &pi)).collect()));
            let nb = LatticeClass::new(f, &Lattice::span(f, n, &vectors)?);
            if seen.contains_key(nb.key()) {
                continue;
            }
            if distance(f, &origin, &nb) > radius as u64 {
                return Err(Error::InvariantViolation(format!("fixed vertex beyond the congruence level {radius}")));
            }
            seen.insert(nb.key().to_vec(), nb.clone());
            queue.push_back(nb);
        }
    }
    let classes: Vec<LatticeClass<F::Elem>> = seen.into_values().collect();
    Ok(FixSet { method: FixMethod::Bfs, classes, bounded: true, points: None })
}

/// Whether the set is closed under sums and intersections of representatives
/// in every relative position.
pub fn convexity_check<F: ValuedField>(f: &F, s: &FixSet<F::Elem>) -> bool {
    for (i, a) in s.classes.iter().enumerate() {
        for b in &s.classes[i + 1..] {
            let la = a.representative();
            let lb = b.representative();
            let d = la.relative_divisors(f, lb);
            let (lo, hi) = (d[0], d[d.len() - 1]);
            for shift in -hi..=-lo {
                let lb_s = lb.scaled(f, shift);
                let sum = LatticeClass::new(f, &la.sum(f, &lb_s));
                let meet = LatticeClass::new(f, &la.intersection(f, &lb_s));
                if !s.contains(&sum) || !s.contains(&meet) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dvr::{compute_order, OrderOptions};
    use crate::field::{LaurentField, PAdicRationals};
    use crate::schur::Realization;

    fn example_m() -> ExponentMatrix {
        ExponentMatrix::from_finite(&[&[0, 1, 0], &[0, 0, 0], &[0, 1, 0]])
    }

    #[test]
    fn closure_examples() {
        let m = example_m();
        assert_eq!(min_plus_closure(&m).unwrap(), m);
        let loose = ExponentMatrix::from_finite(&[&[0, 5], &[1, 0]]);
        assert_eq!(min_plus_closure(&loose).unwrap(), loose);
        let neg = ExponentMatrix::from_finite(&[&[0, -1], &[0, 0]]);
        assert_eq!(min_plus_closure(&neg), Err(Error::NegativeCycle(0)));
        let tight = ExponentMatrix::from_finite(&[&[0, 9, 0], &[0, 0, 3], &[0, 1, 0]]);
        assert_eq!(min_plus_closure(&tight).unwrap().get(0, 1), Some(1));
    }

    #[test]
    fn polytrope_points() {
        let f = PAdicRationals::new(2).unwrap();
        let zero = fix_polytrope(&f, &ExponentMatrix::from_finite(&[&[0, 0], &[0, 0]]), 4).unwrap();
        assert_eq!(zero.points, Some(vec![vec![0, 0]]));
        let two = fix_polytrope(&f, &example_m(), 4).unwrap();
        assert!(two.bounded);
        assert_eq!(two.points, Some(vec![vec![0, 0, 0], vec![1, 0, 1]]));
        assert!(convexity_check(&f, &two));
        let open = ExponentMatrix::new(vec![vec![Some(0), None], vec![Some(0), Some(0)]]).unwrap();
        let s = fix_polytrope(&f, &open, 3).unwrap();
        assert!(!s.bounded);
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn punctured_polytrope_is_not_convex() {
        let f = PAdicRationals::new(3).unwrap();
        let line = fix_polytrope(&f, &ExponentMatrix::from_finite(&[&[0, 2], &[0, 0]]), 4).unwrap();
        assert_eq!(line.points, Some(vec![vec![0, 0], vec![1, 0], vec![2, 0]]));
        assert!(convexity_check(&f, &line));
        let middle = diagonal_class(&f, &[1, 0]);
        let mut punctured = line.clone();
        punctured.classes.retain(|c| *c != middle);
        assert_eq!(punctured.len(), 2);
        assert!(!convexity_check(&f, &punctured));
    }

    #[test]
    fn graduated_detection() {
        let f = PAdicRationals::new(2).unwrap();
        let full = graduated_module(&f, &ExponentMatrix::from_finite(&[&[0, 0], &[0, 0]]));
        assert_eq!(detect_graduated(&f, &full).unwrap(), Some(ExponentMatrix::from_finite(&[&[0, 0], &[0, 0]])));
        let m = example_m();
        assert_eq!(detect_graduated(&f, &graduated_module(&f, &m)).unwrap(), Some(m));
        // R·I + 2 M_2(R) + R·E_12: profile is all zeros, but E_11 is missing
        let two = f.from_i64(2);
        let mut gens = vec![Matrix::identity(&f, 2), Matrix::unit(&f, 2, 0, 1)];
        for i in 0..2 {
            for j in 0..2 {
                gens.push(Matrix::unit(&f, 2, i, j).scale(&f, &two));
            }
        }
        let skew = MatrixModule::span(&f, 2, &gens).unwrap();
        assert!(skew.is_ring(&f));
        assert_eq!(exponent_profile(&f, &skew), ExponentMatrix::from_finite(&[&[0, 0], &[1, 0]]));
        assert_eq!(detect_graduated(&f, &skew).unwrap(), None);
        let thin = MatrixModule::span(&f, 2, &[Matrix::identity(&f, 2)]).unwrap();
        assert_eq!(detect_graduated(&f, &thin), Err(Error::NotFullRank { rank: 1, expected: 4 }));
    }

    #[test]
    fn subspaces_of_trivial_and_symmetric_square() {
        let k = ResidueField::new(2).unwrap();
        let triv = ResidueRep { k: k.clone(), dim: 2, generators: vec![residue_linalg::identity(2)] };
        assert_eq!(invariant_subspaces(&triv, DEFAULT_SUBSPACE_CAP).unwrap().len(), 3);
        let schur = SchurModule::with_realization(2, "2".parse().unwrap(), Realization::Schur).unwrap();
        let subs = invariant_subspaces(&ResidueRep::from_module(&schur, &k).unwrap(), DEFAULT_SUBSPACE_CAP).unwrap();
        let outer = Subspace::span(&k, 3, vec![vec![1, 0, 0], vec![0, 0, 1]]);
        // x² + xy + y² is fixed by GL_2(F_2)
        assert_eq!(subs, vec![outer, Subspace::span(&k, 3, vec![vec![1, 1, 1]])]);
        // the dual form has the annihilators of those two
        let sm = SchurModule::new(2, "2".parse().unwrap()).unwrap();
        let subs = invariant_subspaces(&ResidueRep::from_module(&sm, &k).unwrap(), DEFAULT_SUBSPACE_CAP).unwrap();
        let plane = Subspace::span(&k, 3, vec![vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(subs, vec![Subspace::span(&k, 3, vec![vec![0, 1, 0]]), plane]);
        let k3 = ResidueField::new(3).unwrap();
        assert!(invariant_subspaces(&ResidueRep::from_module(&sm, &k3).unwrap(), DEFAULT_SUBSPACE_CAP)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn subspace_cap() {
        let k = ResidueField::new(3).unwrap();
        let triv = ResidueRep { k, dim: 12, generators: vec![residue_linalg::identity(12)] };
        assert!(matches!(invariant_subspaces(&triv, DEFAULT_SUBSPACE_CAP), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn fixed_vertices_of_small_orders() {
        let f = PAdicRationals::new(3).unwrap();
        let sm = SchurModule::new(2, "2".parse().unwrap()).unwrap();
        let h = compute_order(&f, &sm, &OrderOptions::default()).unwrap().module;
        assert!(spans_end_residue(&f, &h).unwrap());
        let fix = fix_bfs(&f, &h, &BfsOptions::default()).unwrap();
        assert_eq!(fix.len(), 1);
        assert!(is_invariant(&f, &h, &Lattice::standard(&f, 3)));
        assert!(is_invariant(&f, &h, &Lattice::standard(&f, 3).scaled(&f, 2)));
        let neighbour =
            Lattice::from_basis_matrix(&f, &Matrix::from_i64(&f, &[&[3, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert!(!is_invariant(&f, &h, &neighbour));

        let g = PAdicRationals::new(2).unwrap();
        let h2 = compute_order(&g, &sm, &OrderOptions::default()).unwrap().module;
        assert!(!spans_end_residue(&g, &h2).unwrap());
        assert_eq!(exponent_profile(&g, &h2), example_m());
        let fix2 = fix_bfs(&g, &h2, &BfsOptions::default()).unwrap();
        assert!(fix2.contains(&diagonal_class(&g, &[0, 0, 0])));
        assert!(fix2.contains(&diagonal_class(&g, &[1, 0, 1])));
        // Every column of ρ(g) has coordinate sum ≡ 1 mod 2, so
        // {v : v1 + v2 + v3 ∈ 2R} is fixed too, and so is its image under
        // the vertex (1, 0, 1).
        let odd = Lattice::span(
            &g,
            3,
            &[
                vec![g.one(), g.zero(), g.one()],
                vec![g.zero(), g.one(), g.one()],
                vec![g.zero(), g.zero(), g.from_i64(2)],
            ],
        )
        .unwrap();
        assert!(fix2.contains(&LatticeClass::new(&g, &odd)));
        assert_eq!(fix2.len(), 4);
        assert!(convexity_check(&g, &fix2));
        assert!(fix2.radius(&g) <= h2.congruence_level().unwrap() as u64);
        for c in &fix2.classes {
            assert!(is_invariant(&g, &h2, c.representative()));
        }
    }

    #[test]
    fn equal_characteristic_family() {
        let f = LaurentField::new(2).unwrap();
        let sm = SchurModule::with_realization(2, "2".parse().unwrap(), Realization::Schur).unwrap();
        let h = compute_order(&f, &sm, &OrderOptions { trials: 16, ..Default::default() }).unwrap().module;
        assert!(!h.is_full_rank());
        for m in 0..=5 {
            let mut b = Matrix::identity(&f, 3);
            b.set(1, 1, f.uniformizer_pow(m));
            assert!(is_invariant(&f, &h, &Lattice::from_basis_matrix(&f, &b).unwrap()), "m={m}");
        }
        let profile = exponent_profile(&f, &h);
        assert_eq!(profile.get(1, 0), None);
        assert_eq!(profile.get(1, 2), None);
        assert!(!fix_polytrope(&f, &profile, 3).unwrap().bounded);
        assert_eq!(
            fix_bfs(&f, &h, &BfsOptions::default()).err().map(|e| matches!(e, Error::NotFullRank { .. })),
            Some(true)
        );
    }
}
