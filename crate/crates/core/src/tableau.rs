//! Partitions, hook lengths and semistandard tableaux.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default ceiling on `|λ|`.
pub const DEFAULT_MAX_DEGREE: usize = 12;
/// Default ceiling on `n`.
pub const DEFAULT_MAX_N: usize = 8;

/// A partition `λ = (λ_1 ≥ λ_2 ≥ … ≥ λ_r ≥ 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("empty partition".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `d = |λ|`.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    pub fn cols(&self) -> usize {
        self.parts[0]
    }

    pub fn conjugate(&self) -> Partition {
        let parts = (0..self.cols()).map(|j| self.parts.iter().filter(|&&r| r > j).count()).collect();
        Partition { parts }
    }

    /// Boxes `(row, col)` in row-major reading order, zero-based.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts.iter().enumerate().flat_map(|(i, &len)| (0..len).map(move |j| (i, j)))
    }

    /// Hook length of every box, laid out row by row.
    pub fn hook_lengths(&self) -> Vec<Vec<usize>> {
        let conj = self.conjugate();
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &len)| (0..len).map(|j| (len - j - 1) + (conj.parts[j] - i - 1) + 1).collect())
            .collect()
    }

    /// No hook length is divisible by `m`. Every partition is a 0-core.
    pub fn is_core(&self, m: usize) -> bool {
        m == 0 || self.hook_lengths().iter().flatten().all(|h| h % m != 0)
    }

    /// `dim S_λ(K^n)` by the hook content formula.
    pub fn schur_dimension(&self, n: usize) -> u128 {
        let mut num: u128 = 1;
        let mut den: u128 = 1;
        for (row, hooks) in self.hook_lengths().iter().enumerate() {
            for (col, &h) in hooks.iter().enumerate() {
                let content = n as i64 + col as i64 - row as i64;
                if content <= 0 {
                    return 0;
                }
                num *= content as u128;
                den *= h as u128;
            }
        }
        num / den
    }

    /// All partitions of `d` in reverse lexicographic order.
    pub fn all_of_size(d: usize) -> Vec<Partition> {
        fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for part in (1..=rest.min(max)).rev() {
                cur.push(part);
                go(rest - part, part, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if d > 0 {
            go(d, d, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Comma-separated parts, e.g. `"2,1"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::InvalidPartition(s.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// A filling of a Young diagram with letters `1..=n`, stored row by row.
/// Not necessarily semistandard; see [`Tableau::is_semistandard`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tableau {
    rows: Vec<Vec<u8>>,
}

/// Tableaux returned by [`ssyt_enumerate`].
pub type SemistandardTableau = Tableau;

impl Tableau {
    pub fn from_rows(rows: Vec<Vec<u8>>) -> Self {
        Tableau { rows }
    }

    /// Fill `shape` from a row-major reading word.
    pub fn from_word(shape: &Partition, word: &[u8]) -> Result<Self> {
        if word.len() != shape.size() {
            return Err(Error::ShapeMismatch { expected: shape.parts().to_vec(), found: vec![word.len()] });
        }
        let mut rows = Vec::with_capacity(shape.rows());
        let mut at = 0;
        for &len in shape.parts() {
            rows.push(word[at..at + len].to_vec());
            at += len;
        }
        Ok(Tableau { rows })
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn shape(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.rows[row][col]
    }

    pub fn reading_word(&self) -> Vec<u8> {
        self.rows.concat()
    }

    pub fn column(&self, col: usize) -> Vec<u8> {
        self.rows.iter().take_while(|r| r.len() > col).map(|r| r[col]).collect()
    }

    pub fn is_semistandard(&self) -> bool {
        let rows_ok = self.rows.iter().all(|r| r.windows(2).all(|w| w[0] <= w[1]));
        let cols_ok = self.rows.windows(2).all(|pair| pair[1].iter().zip(&pair[0]).all(|(lo, hi)| hi < lo));
        rows_ok && cols_ok
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows.iter().map(|r| r.iter().map(u8::to_string).collect::<Vec<_>>().join(" ")).collect();
        write!(f, "[{}]", rows.join(" / "))
    }
}

/// Semistandard tableaux of shape `λ` with entries in `1..=n`, sorted
/// lexicographically by reading word.
pub fn ssyt_enumerate(shape: &Partition, n: usize) -> Vec<Tableau> {
    assert!(n <= u8::MAX as usize);
    let mut out = Vec::new();
    if shape.rows() > n {
        return out;
    }
    let boxes: Vec<(usize, usize)> = shape.boxes().collect();
    let mut word = vec![0u8; boxes.len()];
    let offsets: Vec<usize> = shape
        .parts()
        .iter()
        .scan(0, |acc, &len| {
            let start = *acc;
            *acc += len;
            Some(start)
        })
        .collect();

    fn fill(
        idx: usize,
        boxes: &[(usize, usize)],
        offsets: &[usize],
        n: u8,
        word: &mut [u8],
        shape: &Partition,
        out: &mut Vec<Tableau>,
    ) {
        if idx == boxes.len() {
            out.push(Tableau::from_word(shape, word).unwrap());
            return;
        }
        let (i, j) = boxes[idx];
        let left = if j > 0 { word[idx - 1] } else { 1 };
        let above = if i > 0 { word[offsets[i - 1] + j] + 1 } else { 1 };
        for v in left.max(above)..=n {
            word[idx] = v;
            fill(idx + 1, boxes, offsets, n, word, shape, out);
        }
    }

    fill(0, &boxes, &offsets, n as u8, &mut word, shape, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn hooks_small() {
        assert_eq!(p("2").hook_lengths(), vec![vec![2, 1]]);
        assert_eq!(p("2,1").hook_lengths(), vec![vec![3, 1], vec![1]]);
        assert_eq!(p("4").hook_lengths(), vec![vec![4, 3, 2, 1]]);
        assert_eq!(p("3,1").hook_lengths(), vec![vec![4, 2, 1], vec![1]]);
    }

    #[test]
    fn cores() {
        assert!(p("2").is_core(0));
        assert!(p("2,1").is_core(0));
        assert!(!p("2").is_core(2));
        assert!(p("2").is_core(3));
        assert!(p("2,1").is_core(2));
        assert!(!p("2,1").is_core(3));
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!("1,2".parse::<Partition>().is_err());
        assert!("0".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());
        assert!(Partition::new(vec![]).is_err());
    }

    #[test]
    fn example_counts() {
        let two = ssyt_enumerate(&p("2"), 2);
        let words: Vec<Vec<u8>> = two.iter().map(|t| t.reading_word()).collect();
        assert_eq!(words, vec![vec![1, 1], vec![1, 2], vec![2, 2]]);
        assert_eq!(ssyt_enumerate(&p("1"), 5).len(), 5);
        assert_eq!(ssyt_enumerate(&p("2,1"), 3).len(), 8);
        assert!(ssyt_enumerate(&p("1,1,1"), 2).is_empty());
    }

    #[test]
    fn enumeration_is_sorted_and_semistandard() {
        for lam in Partition::all_of_size(4) {
            let ts = ssyt_enumerate(&lam, 3);
            assert!(ts.windows(2).all(|w| w[0].reading_word() < w[1].reading_word()));
            assert!(ts.iter().all(Tableau::is_semistandard));
        }
    }

    #[test]
    fn hook_content_matches_enumeration() {
        for d in 1..=5 {
            for lam in Partition::all_of_size(d) {
                for n in 1..=4 {
                    assert_eq!(ssyt_enumerate(&lam, n).len() as u128, lam.schur_dimension(n), "{lam} n={n}");
                }
            }
        }
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=6).map(|d| Partition::all_of_size(d).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11]);
    }

    fn arb_partition() -> impl Strategy<Value = Partition> {
        (1usize..=8).prop_flat_map(|d| {
            let all = Partition::all_of_size(d);
            (0..all.len()).prop_map(move |i| all[i].clone())
        })
    }

    proptest! {
        #[test]
        fn conjugate_preserves_hooks(lam in arb_partition()) {
            let mut a: Vec<usize> = lam.hook_lengths().concat();
            let mut b: Vec<usize> = lam.conjugate().hook_lengths().concat();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
            prop_assert_eq!(lam.conjugate().conjugate(), lam);
        }

        #[test]
        fn large_moduli_are_cores(lam in arb_partition(), extra in 1usize..5) {
            prop_assert!(lam.is_core(lam.size() + extra));
        }
    }
}
