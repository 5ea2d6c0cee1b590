//! The Schur module `S_λ(V)`, `V = K^n`, on its semistandard tableau basis.
//!
//! A filling `F` of the diagram stands for the product over columns of the
//! wedges of its column entries, subject to the exchange relations. The
//! quotient is modelled faithfully by bideterminants: `F` maps to the
//! polynomial `D_F = Π_c det(Z_{i, F(i,c)})` in variables `Z_{r,j}`. Under lex
//! order with `Z_{1,1} > Z_{1,2} > … > Z_{2,1} > …` the leading term of `D_T`
//! for semistandard `T` is its diagonal monomial with coefficient 1, and these
//! monomials are pairwise distinct, so any `D_F` is straightened by repeatedly
//! cancelling its leading term.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{ResidueElem, ResidueField, ValuedField};
use crate::matrix::Matrix;
use crate::tableau::{ssyt_enumerate, Partition, Tableau};

/// Upper bound on the number of column-strict fillings a module may expand.
pub const MAX_FILLINGS: usize = 2_000_000;

/// Sparse integer combination of basis tableaux, sorted by index.
pub type Expansion = Vec<(usize, i64)>;

/// Which of the two dual integral forms the matrices are written in.
///
/// `Schur` is the quotient presentation itself: the column of `T` in
/// `ρ(g)` is the straightened image of `T` with each letter `i` replaced by
/// `Σ_j g_ij x_j`. Over `λ = (d)` its basis is the monomial basis of
/// `Sym^d`. `Weyl` is the transpose-dual form `g ↦ ρ_Schur(gᵀ)ᵀ`; over
/// `λ = (d)` its basis is the symmetrized tensors. Both are
/// anti-homomorphisms: `ρ(gh) = ρ(h)ρ(g)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Realization {
    #[default]
    Weyl,
    Schur,
}

impl std::str::FromStr for Realization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weyl" => Ok(Realization::Weyl),
            "schur" => Ok(Realization::Schur),
            _ => Err(Error::InvalidArgument(format!("unknown realization {s:?}"))),
        }
    }
}

/// Straightened images of column-sorted fillings, keyed by reading word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StraighteningTable {
    pub n: usize,
    pub shape: Vec<usize>,
    pub entries: BTreeMap<String, Expansion>,
}

type Poly = BTreeMap<Vec<u8>, i64>;

pub struct SchurModule {
    n: usize,
    shape: Partition,
    realization: Realization,
    basis: Vec<Tableau>,
    index: HashMap<Vec<u8>, usize>,
    col_lengths: Vec<usize>,
    basis_polys: Vec<Poly>,
    /// Column-strict fillings as column letter masks, with their expansions.
    fillings: Vec<(Vec<u32>, Expansion)>,
    basis_masks: Vec<Vec<u32>>,
    memo: RwLock<HashMap<Vec<u8>, Expansion>>,
}

impl std::fmt::Debug for SchurModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SchurModule")
            .field("n", &self.n)
            .field("shape", &self.shape)
            .field("realization", &self.realization)
            .field("dim", &self.basis.len())
            .finish()
    }
}

/// Commutative ring operations needed to evaluate `ρ`.
trait Ring {
    type E: Clone;
    fn zero(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn from_i64(&self, x: i64) -> Self::E;
}

struct OverField<'a, F>(&'a F);

impl<F: ValuedField> Ring for OverField<'_, F> {
    type E = F::Elem;
    fn zero(&self) -> F::Elem {
        self.0.zero()
    }
    fn is_zero(&self, a: &F::Elem) -> bool {
        self.0.is_zero(a)
    }
    fn add(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.0.add(a, b)
    }
    fn sub(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.0.sub(a, b)
    }
    fn mul(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.0.mul(a, b)
    }
    fn from_i64(&self, x: i64) -> F::Elem {
        self.0.from_i64(x)
    }
}

impl Ring for ResidueField {
    type E = ResidueElem;
    fn zero(&self) -> ResidueElem {
        0
    }
    fn is_zero(&self, a: &ResidueElem) -> bool {
        *a == 0
    }
    fn add(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        ResidueField::add(self, *a, *b)
    }
    fn sub(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        ResidueField::sub(self, *a, *b)
    }
    fn mul(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        ResidueField::mul(self, *a, *b)
    }
    fn from_i64(&self, x: i64) -> ResidueElem {
        ResidueField::from_i64(self, x)
    }
}

fn mask_of(letters: &[u8]) -> u32 {
    letters.iter().fold(0, |m, &l| m | 1 << (l - 1))
}

fn letters_of(mask: u32) -> Vec<u8> {
    (0..32).filter(|b| mask >> b & 1 == 1).map(|b| b as u8 + 1).collect()
}

/// Sorts a column in place; returns the sign of the sorting permutation, or
/// `None` when a letter repeats.
fn sort_column(col: &mut [u8]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..col.len() {
        let mut j = i;
        while j > 0 && col[j - 1] > col[j] {
            col.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    col.windows(2).all(|w| w[0] < w[1]).then_some(sign)
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Vec<u8> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            let e = out.entry(m).or_insert(0);
            *e += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn permutations(k: usize) -> Vec<(Vec<usize>, i64)> {
    if k == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(k - 1) {
        for pos in 0..k {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            // inserting at `pos` passes over k-1-pos larger positions
            let sign = if (k - 1 - pos).is_multiple_of(2) { s } else { -s };
            out.push((q, sign));
        }
    }
    out
}

impl SchurModule {
    /// `S_λ(K^n)` in the default (Weyl) realization.
    pub fn new(n: usize, shape: Partition) -> Result<Self> {
        Self::with_realization(n, shape, Realization::Weyl)
    }

    pub fn with_realization(n: usize, shape: Partition, realization: Realization) -> Result<Self> {
        Self::build(n, shape, realization, HashMap::new())
    }

    fn build(n: usize, shape: Partition, realization: Realization, memo: HashMap<Vec<u8>, Expansion>) -> Result<Self> {
        if n == 0 || n > 31 {
            return Err(Error::InvalidArgument(format!("n = {n} out of range")));
        }
        let basis = ssyt_enumerate(&shape, n);
        if basis.is_empty() {
            return Err(Error::InvalidArgument(format!("S_{shape}(K^{n}) is zero: λ has more than {n} rows")));
        }
        let col_lengths = shape.conjugate().parts().to_vec();
        let mut module = SchurModule {
            n,
            index: basis.iter().enumerate().map(|(i, t)| (t.reading_word(), i)).collect(),
            basis_polys: Vec::new(),
            basis_masks: basis
                .iter()
                .map(|t| (0..col_lengths.len()).map(|c| mask_of(&t.column(c))).collect())
                .collect(),
            basis,
            shape,
            realization,
            col_lengths,
            fillings: Vec::new(),
            memo: RwLock::new(memo),
        };
        module.basis_polys = module.basis.iter().map(|t| module.bideterminant(t)).collect();
        module.fillings = module.column_strict_fillings()?;
        Ok(module)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn realization(&self) -> Realization {
        self.realization
    }

    /// `N = dim S_λ(V)`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Tableau] {
        &self.basis
    }

    pub fn index_of(&self, t: &Tableau) -> Option<usize> {
        self.index.get(&t.reading_word()).copied()
    }

    fn bideterminant(&self, t: &Tableau) -> Poly {
        let nvars = self.shape.rows() * self.n;
        let mut acc: Poly = BTreeMap::from([(vec![0u8; nvars], 1)]);
        for (c, &len) in self.col_lengths.iter().enumerate() {
            let col = t.column(c);
            let mut det = Poly::new();
            for (perm, sign) in permutations(len) {
                let mut m = vec![0u8; nvars];
                for (row, &src) in perm.iter().enumerate() {
                    m[row * self.n + (col[src] - 1) as usize] += 1;
                }
                *det.entry(m).or_insert(0) += sign;
            }
            det.retain(|_, c| *c != 0);
            acc = poly_mul(&acc, &det);
        }
        acc
    }

    /// The semistandard tableau whose diagonal monomial is `m`.
    fn tableau_of_monomial(&self, m: &[u8]) -> Tableau {
        let rows = (0..self.shape.rows())
            .map(|r| {
                let mut row = Vec::new();
                for j in 0..self.n {
                    row.extend(std::iter::repeat_n(j as u8 + 1, m[r * self.n + j] as usize));
                }
                row
            })
            .collect();
        Tableau::from_rows(rows)
    }

    fn check_shape(&self, filling: &Tableau) -> Result<()> {
        let shape = filling.shape();
        if shape != self.shape.parts() {
            return Err(Error::ShapeMismatch { expected: self.shape.parts().to_vec(), found: shape });
        }
        if filling.reading_word().iter().any(|&x| x == 0 || x as usize > self.n) {
            return Err(Error::InvalidArgument(format!("entries of {filling} must lie in 1..={}", self.n)));
        }
        Ok(())
    }

    /// Expansion of an arbitrary filling in the semistandard basis.
    pub fn straighten(&self, filling: &Tableau) -> Result<Expansion> {
        self.check_shape(filling)?;
        let mut rows: Vec<Vec<u8>> = filling.rows().to_vec();
        let mut sign = 1;
        for (c, &len) in self.col_lengths.iter().enumerate() {
            let mut col: Vec<u8> = (0..len).map(|r| rows[r][c]).collect();
            match sort_column(&mut col) {
                None => return Ok(Vec::new()),
                Some(s) => sign *= s,
            }
            for (r, x) in col.into_iter().enumerate() {
                rows[r][c] = x;
            }
        }
        let sorted = Tableau::from_rows(rows);
        let expansion = self.straighten_column_strict(&sorted);
        Ok(expansion.into_iter().map(|(i, c)| (i, sign * c)).collect())
    }

    /// [`straighten`](Self::straighten) with a scalar coefficient, as a dense
    /// coordinate vector.
    pub fn straighten_vector<F: ValuedField>(&self, f: &F, filling: &Tableau, coeff: &F::Elem) -> Result<Vec<F::Elem>> {
        let mut v = vec![f.zero(); self.dim()];
        for (i, c) in self.straighten(filling)? {
            v[i] = f.mul(coeff, &f.from_i64(c));
        }
        Ok(v)
    }

    fn straighten_column_strict(&self, t: &Tableau) -> Expansion {
        let word = t.reading_word();
        if let Some(&i) = self.index.get(&word) {
            return vec![(i, 1)];
        }
        if let Some(hit) = self.memo.read().unwrap().get(&word) {
            return hit.clone();
        }
        let mut poly = self.bideterminant(t);
        let mut out: BTreeMap<usize, i64> = BTreeMap::new();
        while let Some((lead, &c)) = poly.last_key_value() {
            let target = self.tableau_of_monomial(lead);
            let idx = *self
                .index
                .get(&target.reading_word())
                .unwrap_or_else(|| panic!("leading monomial of {t} is not diagonal for a semistandard tableau"));
            *out.entry(idx).or_insert(0) += c;
            for (m, b) in &self.basis_polys[idx] {
                let e = poly.entry(m.clone()).or_insert(0);
                *e -= c * b;
                if *e == 0 {
                    poly.remove(m);
                }
            }
        }
        let expansion: Expansion = out.into_iter().filter(|(_, c)| *c != 0).collect();
        self.memo.write().unwrap().insert(word, expansion.clone());
        expansion
    }

    fn column_strict_fillings(&self) -> Result<Vec<(Vec<u32>, Expansion)>> {
        let subsets: Vec<Vec<u32>> = self
            .col_lengths
            .iter()
            .map(|&k| (0u32..1 << self.n).filter(|m| m.count_ones() as usize == k).collect())
            .collect();
        let total = subsets.iter().try_fold(1usize, |acc, s| acc.checked_mul(s.len()));
        if total.is_none_or(|t| t > MAX_FILLINGS) {
            return Err(Error::CapExceeded(format!(
                "S_{}(K^{}) expands into more than {MAX_FILLINGS} fillings",
                self.shape, self.n
            )));
        }
        let mut out = Vec::with_capacity(total.unwrap());
        let mut choice = vec![0usize; subsets.len()];
        loop {
            let masks: Vec<u32> = choice.iter().zip(&subsets).map(|(&i, s)| s[i]).collect();
            let t = self.filling_from_masks(&masks);
            let exp = self.straighten_column_strict(&t);
            if !exp.is_empty() {
                out.push((masks, exp));
            }
            // odometer
            let mut c = 0;
            loop {
                if c == choice.len() {
                    return Ok(out);
                }
                choice[c] += 1;
                if choice[c] < subsets[c].len() {
                    break;
                }
                choice[c] = 0;
                c += 1;
            }
        }
    }

    fn filling_from_masks(&self, masks: &[u32]) -> Tableau {
        let mut rows = vec![Vec::new(); self.shape.rows()];
        for &m in masks {
            for (r, l) in letters_of(m).into_iter().enumerate() {
                rows[r].push(l);
            }
        }
        Tableau::from_rows(rows)
    }

    /// Snapshot of every straightening computed so far.
    pub fn export_table(&self) -> StraighteningTable {
        let memo = self.memo.read().unwrap();
        let entries =
            memo.iter().map(|(w, e)| (w.iter().map(u8::to_string).collect::<Vec<_>>().join(","), e.clone())).collect();
        StraighteningTable { n: self.n, shape: self.shape.parts().to_vec(), entries }
    }

    /// Builds the module reusing straightenings from a saved table.
    pub fn with_table(
        n: usize,
        shape: Partition,
        realization: Realization,
        table: &StraighteningTable,
    ) -> Result<Self> {
        if table.n != n || table.shape != shape.parts() {
            return Err(Error::InvalidArgument("straightening table is for a different module".into()));
        }
        let preload: HashMap<Vec<u8>, Expansion> = table
            .entries
            .iter()
            .map(|(k, e)| {
                let word = k
                    .split(',')
                    .map(|x| x.parse::<u8>().map_err(|_| Error::Parse(k.clone())))
                    .collect::<Result<Vec<_>>>()?;
                Ok((word, e.clone()))
            })
            .collect::<Result<_>>()?;
        Self::build(n, shape, realization, preload)
    }

    /// Quotient-form matrix: column `T` is the expansion of `T` under
    /// `x_i ↦ Σ_j g_ij x_j`.
    fn schur_matrix<R: Ring>(&self, ring: &R, g: &Matrix<R::E>) -> Matrix<R::E> {
        let n = self.n;
        let mut minors: HashMap<(u32, u32), R::E> = HashMap::new();
        let nn = self.dim();
        let mut out = Matrix::filled(nn, nn, ring.zero());
        for (t, tmasks) in self.basis_masks.iter().enumerate() {
            for (fmasks, exp) in &self.fillings {
                let mut coeff: Option<R::E> = None;
                for (&rm, &cm) in tmasks.iter().zip(fmasks) {
                    let m = minor(ring, g, n, rm, cm, &mut minors);
                    if ring.is_zero(&m) {
                        coeff = Some(ring.zero());
                        break;
                    }
                    coeff = Some(match coeff {
                        None => m,
                        Some(c) => ring.mul(&c, &m),
                    });
                }
                let coeff = coeff.expect("shape has at least one column");
                if ring.is_zero(&coeff) {
                    continue;
                }
                for &(s, c) in exp {
                    let term = if c == 1 { coeff.clone() } else { ring.mul(&coeff, &ring.from_i64(c)) };
                    let v = ring.add(out.get(s, t), &term);
                    out.set(s, t, v);
                }
            }
        }
        out
    }

    fn evaluate<R: Ring>(&self, ring: &R, g: &Matrix<R::E>) -> Matrix<R::E> {
        match self.realization {
            Realization::Schur => self.schur_matrix(ring, g),
            Realization::Weyl => self.schur_matrix(ring, &g.transpose()).transpose(),
        }
    }

    fn check_input<E: Clone>(&self, g: &Matrix<E>) -> Result<()> {
        if g.rows() != self.n || g.cols() != self.n {
            return Err(Error::ShapeMismatch { expected: vec![self.n, self.n], found: vec![g.rows(), g.cols()] });
        }
        Ok(())
    }

    /// The matrix of `ρ_{n,λ}(g)` in the semistandard basis.
    pub fn rho<F: ValuedField>(&self, f: &F, g: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>> {
        self.check_input(g)?;
        if f.is_zero(&g.determinant(f)) {
            return Err(Error::Singular);
        }
        Ok(self.evaluate(&OverField(f), g))
    }

    /// `ρ` evaluated over the residue field.
    pub fn residue_rep(&self, k: &ResidueField, g: &Matrix<ResidueElem>) -> Result<Matrix<ResidueElem>> {
        self.check_input(g)?;
        if crate::residue_linalg::rank(k, g) < self.n {
            return Err(Error::Singular);
        }
        Ok(self.evaluate(k, g))
    }

    /// The Schur polynomial `s_λ(z)` as a sum over semistandard tableaux.
    pub fn character<F: ValuedField>(&self, f: &F, z: &[F::Elem]) -> Result<F::Elem> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch(format!("expected {} arguments, got {}", self.n, z.len())));
        }
        Ok(self.basis.iter().fold(f.zero(), |acc, t| {
            let w = t.reading_word().iter().fold(f.one(), |m, &l| f.mul(&m, &z[l as usize - 1]));
            f.add(&acc, &w)
        }))
    }
}

/// Minor of `g` on rows `rm` and columns `cm` (bitmasks over letters),
/// memoized, by expansion along the first row.
fn minor<R: Ring>(
    ring: &R,
    g: &Matrix<R::E>,
    n: usize,
    rm: u32,
    cm: u32,
    memo: &mut HashMap<(u32, u32), R::E>,
) -> R::E {
    if let Some(v) = memo.get(&(rm, cm)) {
        return v.clone();
    }
    let v = if rm.count_ones() == 1 {
        g.get(rm.trailing_zeros() as usize, cm.trailing_zeros() as usize).clone()
    } else {
        let r0 = rm.trailing_zeros() as usize;
        let rest = rm & !(1 << r0);
        let mut acc = ring.zero();
        let mut sign_pos = true;
        for c in 0..n {
            if cm >> c & 1 == 0 {
                continue;
            }
            let a = g.get(r0, c);
            if !ring.is_zero(a) {
                let sub = minor(ring, g, n, rest, cm & !(1 << c), memo);
                let term = ring.mul(a, &sub);
                acc = if sign_pos { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
            }
            sign_pos = !sign_pos;
        }
        acc
    };
    memo.insert((rm, cm), v.clone());
    v
}
