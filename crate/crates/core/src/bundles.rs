//! Combinatorial model of vector bundles on the cycle of n projective
//! lines: degree-vector data, the block matrix A(V), section and Hom
//! dimension formulas, the dictionary with affine permutations, and
//! membership in the distinguished substacks.

use num::integer::{gcd, lcm};

use crate::affperm::AffinePermutation;
use crate::error::{Error, Result};

/// A (k+1) x (H n) block of a column-periodic 0/1 matrix. Columns extend
/// periodically in both directions; the block width is always a multiple
/// of the base period n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryPeriodicMatrix {
    n: usize,
    rows: Vec<Vec<u8>>,
}

impl BinaryPeriodicMatrix {
    pub fn new(n: usize, rows: Vec<Vec<u8>>) -> Result<Self> {
        if n == 0 || rows.is_empty() {
            return Err(Error::InvalidColumns("matrix must have rows and positive period".into()));
        }
        let width = rows[0].len();
        if width == 0 || !width.is_multiple_of(n) {
            return Err(Error::InvalidColumns(format!(
                "block width {width} is not a positive multiple of n = {n}"
            )));
        }
        for row in &rows {
            if row.len() != width {
                return Err(Error::InvalidColumns("ragged rows".into()));
            }
            if row.iter().any(|&e| e > 1) {
                return Err(Error::InvalidColumns("entries must be 0 or 1".into()));
            }
        }
        Ok(BinaryPeriodicMatrix { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn width(&self) -> usize {
        self.rows[0].len()
    }

    /// Column at any integer index, via periodic extension.
    pub fn column(&self, j: i64) -> Vec<u8> {
        let w = self.width() as i64;
        let idx = (j - 1).rem_euclid(w) as usize;
        self.rows.iter().map(|r| r[idx]).collect()
    }

    /// Rows sorted by the column of their first 1 (zero rows last).
    pub fn canonical_row_order(mut self) -> Self {
        self.rows.sort_by_key(|r| r.iter().position(|&e| e == 1).unwrap_or(usize::MAX));
        self
    }

    /// In the standard-basis-column regime every column has exactly one 1
    /// and every row is nonzero.
    pub fn require_standard_columns(&self) -> Result<()> {
        let width = self.width();
        for c in 0..width {
            let ones = self.rows.iter().filter(|r| r[c] == 1).count();
            if ones != 1 {
                return Err(Error::InvalidColumns(format!(
                    "column {} has {ones} ones, expected exactly 1",
                    c + 1
                )));
            }
        }
        if let Some(i) = self.rows.iter().position(|r| r.iter().all(|&e| e == 0)) {
            return Err(Error::InvalidColumns(format!("row {} is zero", i + 1)));
        }
        Ok(())
    }

    /// Shifting all columns by n must permute the rows (the cyclic
    /// structure of a block matrix built from degree vectors).
    pub fn require_shift_stable(&self) -> Result<()> {
        let mut shifted: Vec<Vec<u8>> = self
            .rows
            .iter()
            .map(|r| {
                let mut s = r[self.n..].to_vec();
                s.extend_from_slice(&r[..self.n]);
                s
            })
            .collect();
        let mut original = self.rows.clone();
        shifted.sort();
        original.sort();
        if shifted != original {
            return Err(Error::InvalidColumns(
                "row multiset is not invariant under column shift by n".into(),
            ));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"n": self.n, "rows": self.rows})
    }
}

/// Shift of a degree vector by one cycle period: (tau d)_i = d_{i+n}.
pub fn tau(d: &[i64], n: usize) -> Vec<i64> {
    let mut out = d[n..].to_vec();
    out.extend_from_slice(&d[..n]);
    out
}

fn tau_pow(d: &[i64], n: usize, pow: usize) -> Vec<i64> {
    let len = d.len();
    let shift = (pow * n) % len;
    let mut out = d[shift..].to_vec();
    out.extend_from_slice(&d[..shift]);
    out
}

/// Continuous gluing parameters never need to be solved for; only
/// same/different matters, so summands carry either an exact rational or a
/// symbolic marker distinct per summand.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LambdaTag {
    Symbolic(u32),
    Rational(num::rational::BigRational),
}

/// An indecomposable summand: rank r, degree vector of length r n, and the
/// gluing tag. Multiplicity is always 1 here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summand {
    pub rank: usize,
    pub degree: Vec<i64>,
    pub lambda: LambdaTag,
}

impl Summand {
    pub fn n(&self) -> usize {
        self.degree.len() / self.rank
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleType {
    n: usize,
    summands: Vec<Summand>,
}

impl BundleType {
    pub fn new(n: usize, summands: Vec<Summand>) -> Result<Self> {
        if n == 0 || summands.is_empty() {
            return Err(Error::InvalidSummand("bundle must have at least one summand".into()));
        }
        for s in &summands {
            if s.rank == 0 {
                return Err(Error::InvalidSummand("summand rank must be positive".into()));
            }
            if s.degree.len() != s.rank * n {
                return Err(Error::InvalidSummand(format!(
                    "degree vector length {} != rank {} * n {}",
                    s.degree.len(),
                    s.rank,
                    n
                )));
            }
            for t in 1..s.rank {
                if s.rank % t == 0 && tau_pow(&s.degree, n, t) == s.degree {
                    return Err(Error::InvalidSummand(
                        "degree vector is periodic, summand is decomposable".into(),
                    ));
                }
            }
        }
        for i in 0..summands.len() {
            for j in i + 1..summands.len() {
                let (a, b) = (&summands[i], &summands[j]);
                if a.rank == b.rank
                    && a.lambda == b.lambda
                    && (0..a.rank).any(|l| tau_pow(&a.degree, n, l) == b.degree)
                {
                    return Err(Error::InvalidSummand(
                        "two summands are isomorphic (shift-equivalent degrees, equal tag)".into(),
                    ));
                }
            }
        }
        Ok(BundleType { n, summands })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn total_rank(&self) -> usize {
        self.summands.iter().map(|s| s.rank).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "summands": self.summands.iter().map(|s| serde_json::json!({
                "rank": s.rank,
                "d": s.degree,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<BundleType> {
        let n = v
            .get("n")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Parse("missing or invalid field \"n\"".into()))?
            as usize;
        let list = v
            .get("summands")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Parse("missing or invalid field \"summands\"".into()))?;
        let mut summands = Vec::with_capacity(list.len());
        for (i, s) in list.iter().enumerate() {
            let rank = s
                .get("rank")
                .and_then(|x| x.as_u64())
                .ok_or_else(|| Error::Parse("summand missing \"rank\"".into()))?
                as usize;
            let degree = s
                .get("d")
                .and_then(|x| x.as_array())
                .ok_or_else(|| Error::Parse("summand missing \"d\"".into()))?
                .iter()
                .map(|e| e.as_i64().ok_or_else(|| Error::Parse("non-integer degree entry".into())))
                .collect::<Result<Vec<i64>>>()?;
            summands.push(Summand { rank, degree, lambda: LambdaTag::Symbolic(i as u32) });
        }
        BundleType::new(n, summands)
    }
}

/// The block matrix A(V): for each summand the rows d, tau d, ...,
/// tau^{r-1} d, tiled to width (lcm of ranks) * n, in canonical row order.
pub fn a_of_bundle(b: &BundleType) -> Result<BinaryPeriodicMatrix> {
    let h = b.summands.iter().fold(1usize, |acc, s| lcm(acc, s.rank));
    let width = h * b.n;
    let mut rows = Vec::with_capacity(b.total_rank());
    for s in &b.summands {
        if s.degree.iter().all(|&e| e == 0) {
            return Err(Error::InvalidSummand("zero degree vector has no block row".into()));
        }
        if s.degree.iter().any(|&e| !(0..=1).contains(&e)) {
            return Err(Error::InvalidSummand(
                "block matrix requires degree entries in {0, 1}".into(),
            ));
        }
        for l in 0..s.rank {
            let base = tau_pow(&s.degree, b.n, l);
            let mut row: Vec<u8> = Vec::with_capacity(width);
            while row.len() < width {
                row.extend(base.iter().map(|&e| e as u8));
            }
            rows.push(row);
        }
    }
    BinaryPeriodicMatrix::new(b.n, rows).map(|m| m.canonical_row_order())
}

/// The plus affine permutation of a standard-basis-column matrix:
/// f(i) = min{ j >= i : v_j = v_{i-1} } on the periodic extension.
pub fn f_of_a(a: &BinaryPeriodicMatrix) -> Result<AffinePermutation> {
    a.require_standard_columns()?;
    a.require_shift_stable()?;
    let n = a.n() as i64;
    let width = a.width() as i64;
    let mut window = Vec::with_capacity(a.n());
    for i in 1..=n {
        let target = a.column(i - 1);
        let j = (i..=i + width)
            .find(|&j| a.column(j) == target)
            .ok_or_else(|| Error::InvalidColumns(format!("no repeat of column {}", i - 1)))?;
        window.push(j);
    }
    AffinePermutation::new(a.n(), window)
}

/// The bundle corresponding to a plus affine permutation: one summand per
/// shift-equivalence class of orbits of f composed with the shift, with
/// rank the orbit period and degree vector one block of the characteristic
/// vector.
pub fn bundle_of_perm(f: &AffinePermutation) -> Result<BundleType> {
    if !f.classify().plus {
        return Err(Error::NotPlus);
    }
    let decomp = f.compose_splus(1).orbit_decomposition()?;
    let summands = decomp
        .classes
        .iter()
        .enumerate()
        .map(|(idx, class)| {
            let rep_orbit = &decomp.orbits[class[0]];
            Summand {
                rank: rep_orbit.period,
                degree: rep_orbit.char_block.iter().map(|&e| e as i64).collect(),
                lambda: LambdaTag::Symbolic(idx as u32),
            }
        })
        .collect();
    BundleType::new(f.n(), summands)
}

/// Dimension of the space of global sections of an indecomposable bundle
/// with degree vector d, by maximal nonnegative runs read cyclically. For
/// nonnegative nonzero d the first cohomology vanishes and the answer is
/// the total degree.
pub fn theta(d: &[i64], same_lambda: bool) -> u64 {
    if d.iter().all(|&e| e == 0) {
        return u64::from(same_lambda);
    }
    if d.iter().all(|&e| e >= 0) {
        return d.iter().sum::<i64>() as u64;
    }
    let p = d.len();
    let start = d.iter().position(|&e| e < 0).unwrap();
    let mut total: i64 = 0;
    let mut run_sum: i64 = 0;
    let mut in_run = false;
    for t in 1..=p {
        let e = d[(start + t) % p];
        if e < 0 {
            if in_run {
                total += (run_sum - 1).max(0);
                in_run = false;
                run_sum = 0;
            }
        } else {
            in_run = true;
            run_sum += e;
        }
    }
    total as u64
}

/// dim Hom(b1, b2) as a sum of theta values over the gcd of the ranks.
pub fn hom_dim(b1: &Summand, b2: &Summand) -> Result<u64> {
    if b1.n() != b2.n() {
        return Err(Error::MismatchedN);
    }
    let n = b1.n();
    let g = gcd(b1.rank, b2.rank);
    let h = lcm(b1.rank, b2.rank);
    let tile = |s: &Summand| -> Vec<i64> {
        let mut out = Vec::with_capacity(h * n);
        while out.len() < h * n {
            out.extend_from_slice(&s.degree);
        }
        out
    };
    let d1 = tile(b1);
    let d2 = tile(b2);
    let identical = b1 == b2;
    let mut total = 0;
    for l in 0..g {
        let shifted = tau_pow(&d2, n, l);
        let diff: Vec<i64> = shifted.iter().zip(&d1).map(|(a, b)| a - b).collect();
        let same_lambda = identical && diff.iter().all(|&e| e == 0);
        total += theta(&diff, same_lambda);
    }
    Ok(total)
}

/// dim End(V): the sum of hom_dim over all ordered pairs of summands.
pub fn end_dim(b: &BundleType) -> u64 {
    let mut total = 0;
    for s1 in b.summands() {
        for s2 in b.summands() {
            total += hom_dim(s1, s2).expect("summands of one bundle share n");
        }
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Membership {
    pub in_u_plus: bool,
    pub in_u_plus_plus: bool,
}

/// Membership in the substack of 0/1 nonzero degree vectors with
/// standard-basis block columns, and in its open part indexed by bounded
/// permutations.
pub fn membership(b: &BundleType) -> Membership {
    let degrees_ok = b
        .summands()
        .iter()
        .all(|s| s.degree.iter().any(|&e| e != 0) && s.degree.iter().all(|&e| (0..=1).contains(&e)));
    if !degrees_ok {
        return Membership { in_u_plus: false, in_u_plus_plus: false };
    }
    let Ok(a) = a_of_bundle(b) else {
        return Membership { in_u_plus: false, in_u_plus_plus: false };
    };
    if a.require_standard_columns().is_err() {
        return Membership { in_u_plus: false, in_u_plus_plus: false };
    }
    let bounded = f_of_a(&a).map(|f| f.classify().bounded).unwrap_or(false);
    Membership { in_u_plus: true, in_u_plus_plus: bounded }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm(n: usize, w: &[i64]) -> AffinePermutation {
        AffinePermutation::new(n, w.to_vec()).unwrap()
    }

    fn summand(rank: usize, d: &[i64], tag: u32) -> Summand {
        Summand { rank, degree: d.to_vec(), lambda: LambdaTag::Symbolic(tag) }
    }

    /// Paper's displayed matrices, rows rearranged into canonical order.
    fn paper_matrix_3456() -> Vec<Vec<u8>> {
        vec![
            vec![1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0],
            vec![0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0],
            vec![0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1],
        ]
    }

    fn paper_matrix_5364() -> Vec<Vec<u8>> {
        vec![
            vec![1, 0, 1, 1, 0, 0, 0, 0],
            vec![0, 1, 0, 0, 0, 1, 0, 0],
            vec![0, 0, 0, 0, 1, 0, 1, 1],
        ]
    }

    fn paper_matrix_2349() -> Vec<Vec<u8>> {
        vec![
            vec![1, 0, 1, 0, 0, 0, 0, 0],
            vec![0, 1, 0, 1, 0, 1, 0, 1],
            vec![0, 0, 0, 0, 1, 0, 1, 0],
        ]
    }

    #[test]
    fn block_matrix_of_line_bundle() {
        let b = BundleType::new(4, vec![summand(1, &[0, 1, 0, 0], 0)]).unwrap();
        let a = a_of_bundle(&b).unwrap();
        assert_eq!(a.rows(), &[vec![0, 1, 0, 0]]);
    }

    #[test]
    fn block_matrix_of_rank_two_summand() {
        let b = BundleType::new(4, vec![summand(2, &[1, 0, 1, 1, 0, 0, 0, 0], 0)]).unwrap();
        let a = a_of_bundle(&b).unwrap();
        assert_eq!(a.rows(), &[vec![1, 0, 1, 1, 0, 0, 0, 0], vec![0, 0, 0, 0, 1, 0, 1, 1]]);
    }

    #[test]
    fn block_matrix_of_direct_sum_matches_paper() {
        let b = BundleType::new(
            4,
            vec![summand(2, &[1, 0, 1, 1, 0, 0, 0, 0], 0), summand(1, &[0, 1, 0, 0], 1)],
        )
        .unwrap();
        assert_eq!(a_of_bundle(&b).unwrap().rows(), &paper_matrix_5364()[..]);
    }

    #[test]
    fn f_of_a_recovers_paper_windows() {
        for (rows, w) in [
            (paper_matrix_3456(), vec![3i64, 4, 5, 6]),
            (paper_matrix_5364(), vec![5, 3, 6, 4]),
            (paper_matrix_2349(), vec![2, 3, 4, 9]),
        ] {
            let a = BinaryPeriodicMatrix::new(4, rows).unwrap();
            assert_eq!(f_of_a(&a).unwrap().window(), &w[..]);
        }
    }

    #[test]
    fn bundle_of_perm_examples() {
        let b = bundle_of_perm(&perm(4, &[3, 4, 5, 6])).unwrap();
        assert_eq!(b.summands().len(), 1);
        assert_eq!(b.summands()[0].rank, 3);
        assert_eq!(b.summands()[0].degree.iter().sum::<i64>(), 4);

        let b = bundle_of_perm(&perm(4, &[5, 3, 6, 4])).unwrap();
        assert_eq!(b.summands().len(), 2);
        assert_eq!(b.summands()[0].degree, vec![1, 0, 1, 1, 0, 0, 0, 0]);
        assert_eq!(b.summands()[1].degree, vec![0, 1, 0, 0]);

        let b = bundle_of_perm(&perm(4, &[2, 3, 4, 9])).unwrap();
        assert_eq!(b.summands()[0].degree, vec![1, 0, 1, 0, 0, 0, 0, 0]);
        assert_eq!(b.summands()[1].degree, vec![0, 1, 0, 1]);
    }

    #[test]
    fn characteristic_matrix_equals_bundle_block() {
        for w in [[3i64, 4, 5, 6], [5, 3, 6, 4], [2, 3, 4, 9]] {
            let f = perm(4, &w);
            let via_bundle = a_of_bundle(&bundle_of_perm(&f).unwrap()).unwrap();
            assert_eq!(f.characteristic_matrix().unwrap(), via_bundle);
        }
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta(&[0, 0, 0, 0], true), 1);
        assert_eq!(theta(&[0, 0, 0, 0], false), 0);
        assert_eq!(theta(&[-1, 0, -1, -1, 1, 0, 1, 1], false), 2);
        assert_eq!(theta(&[1, 0, 0, 0], false), 1);
    }

    #[test]
    fn hom_dim_examples() {
        let line10 = summand(1, &[1, 0], 0);
        let line01 = summand(1, &[0, 1], 1);
        assert_eq!(hom_dim(&line10, &line01).unwrap(), 0);

        let line = summand(1, &[0, 1, 0, 0], 0);
        let rank2 = summand(2, &[1, 0, 1, 1, 0, 0, 0, 0], 1);
        assert_eq!(hom_dim(&line, &rank2).unwrap(), 1);
        assert_eq!(hom_dim(&rank2, &rank2).unwrap(), 3);
        assert!(matches!(hom_dim(&line10, &rank2), Err(Error::MismatchedN)));
    }

    #[test]
    fn end_dim_examples() {
        assert_eq!(end_dim(&bundle_of_perm(&perm(4, &[3, 4, 5, 6])).unwrap()), 1);
        assert_eq!(end_dim(&bundle_of_perm(&perm(4, &[5, 3, 6, 4])).unwrap()), 5);
        assert_eq!(end_dim(&bundle_of_perm(&perm(4, &[2, 3, 4, 9])).unwrap()), 5);
    }

    #[test]
    fn membership_examples() {
        let m = membership(&bundle_of_perm(&perm(4, &[5, 3, 6, 4])).unwrap());
        assert_eq!(m, Membership { in_u_plus: true, in_u_plus_plus: true });
        let m = membership(&bundle_of_perm(&perm(4, &[2, 3, 4, 9])).unwrap());
        assert_eq!(m, Membership { in_u_plus: true, in_u_plus_plus: false });
        let zero = BundleType::new(2, vec![summand(1, &[1, 1], 0), summand(1, &[0, 0], 1)]).unwrap();
        let m = membership(&zero);
        assert_eq!(m, Membership { in_u_plus: false, in_u_plus_plus: false });
    }

    #[test]
    fn f_of_a_rejects_bad_matrices() {
        // column 1 has two ones
        let a = BinaryPeriodicMatrix::new(2, vec![vec![1, 0], vec![1, 1]]).unwrap();
        assert!(matches!(f_of_a(&a), Err(Error::InvalidColumns(_))));
        // zero row
        let a = BinaryPeriodicMatrix::new(2, vec![vec![1, 1], vec![0, 0]]).unwrap();
        assert!(matches!(f_of_a(&a), Err(Error::InvalidColumns(_))));
        // standard-basis columns but rows not stable under shift by n
        let a = BinaryPeriodicMatrix::new(
            2,
            vec![vec![1, 0, 0, 0], vec![0, 1, 1, 1]],
        )
        .unwrap();
        assert!(matches!(f_of_a(&a), Err(Error::InvalidColumns(_))));
        // swapping rows under the shift is a valid cyclic structure
        let a = BinaryPeriodicMatrix::new(
            2,
            vec![vec![1, 0, 0, 1], vec![0, 1, 1, 0]],
        )
        .unwrap();
        assert_eq!(f_of_a(&a).unwrap().window(), &[1, 4]);
    }

    #[test]
    fn periodic_degree_vector_is_rejected() {
        assert!(matches!(
            BundleType::new(2, vec![summand(2, &[1, 0, 1, 0], 0)]),
            Err(Error::InvalidSummand(_))
        ));
    }

    #[test]
    fn isomorphic_summands_are_rejected() {
        let a = summand(2, &[1, 0, 1, 1, 0, 0, 0, 0], 0);
        let mut b = summand(2, &[0, 0, 0, 0, 1, 0, 1, 1], 0);
        assert!(BundleType::new(4, vec![a.clone(), b.clone()]).is_err());
        b.lambda = LambdaTag::Symbolic(1);
        assert!(BundleType::new(4, vec![a, b]).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let b = bundle_of_perm(&perm(4, &[5, 3, 6, 4])).unwrap();
        let j = b.to_json();
        assert_eq!(
            j,
            serde_json::json!({"n": 4, "summands": [
                {"rank": 2, "d": [1, 0, 1, 1, 0, 0, 0, 0]},
                {"rank": 1, "d": [0, 1, 0, 0]},
            ]})
        );
        assert_eq!(BundleType::from_json(&j).unwrap(), b);
    }

    proptest! {
        /// Runs are defined cyclically, so theta is rotation invariant.
        #[test]
        fn theta_is_rotation_invariant(d in proptest::collection::vec(-2i64..=2, 1..12),
                                       rot in 0usize..12) {
            let r = rot % d.len();
            let mut rotated = d[r..].to_vec();
            rotated.extend_from_slice(&d[..r]);
            prop_assert_eq!(theta(&d, false), theta(&rotated, false));
        }
    }
}
