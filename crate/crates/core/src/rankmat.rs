//! Cyclic rank matrices: construction from affine permutations, binary
//! periodic matrices, and rational matrices; the axiom checker; and the
//! inverse extraction of the permutation from a valid matrix.
//!
//! The matrix is stored through its h-form h_ij = j - i + 1 - r_ij on the
//! band i-1 <= j <= i+n-1 (one period of rows); everything off the band is
//! served by the closed forms h_ij = 0 for j < i and h_ij = j - i + 1 - k
//! for j - i >= n - 1, and rows repeat via h_{i+n, j+n} = h_ij.

use crate::affperm::AffinePermutation;
use crate::bundles::BinaryPeriodicMatrix;
use crate::error::{Error, Result};
use crate::poisson::GrassmannPoint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicRankMatrix {
    n: usize,
    k: i64,
    /// h_band[i][d] = h_{i+1, i+d} for i in 0..n, d in 0..=n.
    h_band: Vec<Vec<i64>>,
}

impl CyclicRankMatrix {
    pub fn new(n: usize, k: i64, h_band: Vec<Vec<i64>>) -> Result<Self> {
        if n == 0 || k <= 0 || k >= n as i64 {
            return Err(Error::InvalidParameters(format!(
                "cyclic rank matrix requires 0 < k < n, got k = {k}, n = {n}"
            )));
        }
        if h_band.len() != n || h_band.iter().any(|row| row.len() != n + 1) {
            return Err(Error::InvalidParameters(format!(
                "h band must be {n} rows of {} entries",
                n + 1
            )));
        }
        Ok(CyclicRankMatrix { n, k, h_band })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    /// h value at arbitrary integer indices.
    pub fn h(&self, i: i64, j: i64) -> i64 {
        let nn = self.n as i64;
        let shift = (i - 1).div_euclid(nn);
        let i0 = i - shift * nn; // in [1, n]
        let j0 = j - shift * nn;
        let d = j0 - (i0 - 1);
        if (0..=nn).contains(&d) {
            self.h_band[(i0 - 1) as usize][d as usize]
        } else if j0 < i0 {
            0
        } else {
            j0 - i0 + 1 - self.k
        }
    }

    /// Rank value r_ij = j - i + 1 - h_ij. Formally negative for j < i - 1.
    pub fn r(&self, i: i64, j: i64) -> i64 {
        j - i + 1 - self.h(i, j)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"n": self.n, "k": self.k, "h_band": self.h_band})
    }

    pub fn from_json(v: &serde_json::Value) -> Result<CyclicRankMatrix> {
        let n = v
            .get("n")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Parse("missing or invalid field \"n\"".into()))?
            as usize;
        let k = v
            .get("k")
            .and_then(|x| x.as_i64())
            .ok_or_else(|| Error::Parse("missing or invalid field \"k\"".into()))?;
        let band = v
            .get("h_band")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Parse("missing or invalid field \"h_band\"".into()))?;
        let mut h_band = Vec::with_capacity(band.len());
        for row in band {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Parse("h_band rows must be arrays".into()))?
                .iter()
                .map(|e| e.as_i64().ok_or_else(|| Error::Parse("non-integer h entry".into())))
                .collect::<Result<Vec<i64>>>()?;
            h_band.push(row);
        }
        CyclicRankMatrix::new(n, k, h_band)
    }
}

/// s_ij(d) = max(d_{i-1} + d_i + ... + d_j - 1, 0) on the periodic
/// extension of the sequence d.
pub fn s_window(d: &[i64], i: i64, j: i64) -> Result<i64> {
    if j < i {
        return Err(Error::EmptyWindow { i, j });
    }
    let p = d.len() as i64;
    let sum: i64 = (i - 1..=j).map(|t| d[(t - 1).rem_euclid(p) as usize]).sum();
    Ok((sum - 1).max(0))
}

fn s_window_u8(d: &[u8], i: i64, j: i64) -> i64 {
    let p = d.len() as i64;
    let sum: i64 = (i - 1..=j).map(|t| d[(t - 1).rem_euclid(p) as usize] as i64).sum();
    (sum - 1).max(0)
}

/// The h function of a binary periodic matrix with standard-basis columns:
/// the row sum of s_window on the band, with the closed forms outside.
pub fn h_of_a(a: &BinaryPeriodicMatrix, i: i64, j: i64) -> Result<i64> {
    a.require_standard_columns()?;
    Ok(h_of_a_unchecked(a, i, j))
}

fn h_of_a_unchecked(a: &BinaryPeriodicMatrix, i: i64, j: i64) -> i64 {
    let n = a.n() as i64;
    let k = a.rows().len() as i64 - 1;
    if j < i {
        0
    } else if j - i >= n - 1 {
        j - i + 1 - k
    } else {
        a.rows().iter().map(|w| s_window_u8(w, i, j)).sum()
    }
}

/// Cyclic rank matrix of a plus affine permutation, via its characteristic
/// matrix.
pub fn r_of_perm(f: &AffinePermutation) -> Result<CyclicRankMatrix> {
    let a = f.characteristic_matrix()?;
    a.require_standard_columns()?;
    let n = f.n();
    let band = (1..=n as i64)
        .map(|i| (i - 1..=i + n as i64 - 1).map(|j| h_of_a_unchecked(&a, i, j)).collect())
        .collect();
    CyclicRankMatrix::new(n, f.k(), band)
}

/// Extracts the unique bounded affine permutation realizing the rank
/// pattern r_ij = r_{i+1,j} = r_{i,j-1} > r_{i+1,j-1}. The input must pass
/// the axiom checker.
pub fn perm_of_r(r: &CyclicRankMatrix) -> Result<AffinePermutation> {
    let report = check_axioms(r);
    if let Some(v) = report.violations.first() {
        return Err(Error::AxiomViolation { axiom: v.axiom, i: v.i, j: v.j });
    }
    let n = r.n() as i64;
    let mut window = Vec::with_capacity(r.n());
    for i in 1..=n {
        let j = (i..=i + n).find(|&j| {
            r.r(i, j) == r.r(i + 1, j)
                && r.r(i, j) == r.r(i, j - 1)
                && r.r(i, j) > r.r(i + 1, j - 1)
        });
        match j {
            Some(j) => window.push(j),
            None => return Err(Error::NoPivot { i }),
        }
    }
    AffinePermutation::new(r.n(), window)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: &'static str,
    pub i: i64,
    pub j: i64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    /// Axioms checked, in order: C'_1, C'_2, C_3, C_4, C_5.
    pub checked: Vec<&'static str>,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "checked": self.checked,
            "passed": self.passed(),
            "violations": self.violations.iter().map(|v| serde_json::json!({
                "axiom": v.axiom,
                "i": v.i,
                "j": v.j,
                "detail": v.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Checks the cyclic rank matrix axioms. Off-band entries are served by
/// the closed forms, so scanning a band neighbourhood of one period of
/// rows certifies the whole periodic matrix; C_5 holds by storage.
pub fn check_axioms(r: &CyclicRankMatrix) -> AxiomReport {
    let n = r.n() as i64;
    let k = r.k();
    let mut violations = Vec::new();
    for i in 1..=n {
        if r.r(i, i - 1) != 0 {
            violations.push(Violation {
                axiom: "C'_1",
                i,
                j: i - 1,
                detail: format!("r = {}, expected 0", r.r(i, i - 1)),
            });
        }
        if r.r(i, i + n - 1) != k {
            violations.push(Violation {
                axiom: "C'_2",
                i,
                j: i + n - 1,
                detail: format!("r = {}, expected k = {k}", r.r(i, i + n - 1)),
            });
        }
        for j in i - 2..=i + n + 2 {
            let down = r.r(i, j) - r.r(i + 1, j);
            if !(0..=1).contains(&down) {
                violations.push(Violation {
                    axiom: "C_3",
                    i,
                    j,
                    detail: format!("r_ij - r_(i+1)j = {down}"),
                });
            }
            let right = r.r(i, j) - r.r(i, j - 1);
            if !(0..=1).contains(&right) {
                violations.push(Violation {
                    axiom: "C_3",
                    i,
                    j,
                    detail: format!("r_ij - r_i(j-1) = {right}"),
                });
            }
            let corner = r.r(i + 1, j - 1);
            if corner == r.r(i + 1, j) && corner == r.r(i, j - 1) && r.r(i, j) != corner {
                violations.push(Violation {
                    axiom: "C_4",
                    i,
                    j,
                    detail: format!("corner {corner} but r_ij = {}", r.r(i, j)),
                });
            }
        }
    }
    AxiomReport { checked: vec!["C'_1", "C'_2", "C_3", "C_4", "C_5"], violations }
}

/// The bounded affine permutation of a full-row-rank rational matrix:
/// f(i) = min{ j >= i : v_i in span(v_{i+1}, ..., v_j) } with columns
/// taken cyclically. A zero column yields f(i) = i.
pub fn f_of_matrix(m: &GrassmannPoint) -> Result<AffinePermutation> {
    let n = m.n() as i64;
    let mut window = Vec::with_capacity(m.n());
    for i in 1..=n {
        let mut found = None;
        for j in i..=i + n {
            let span: Vec<usize> = (i + 1..=j).map(|t| m.column_index(t)).collect();
            let with_target: Vec<usize> =
                span.iter().copied().chain(std::iter::once(m.column_index(i))).collect();
            let rank_span = m.matrix().rank_of_columns(&span);
            if m.matrix().rank_of_columns(&with_target) == rank_span {
                found = Some(j);
                break;
            }
        }
        // j = i + n spans every column, so the search always terminates.
        window.push(found.expect("span search exhausted a full period"));
    }
    AffinePermutation::new(m.n(), window)
}

/// The cyclic rank matrix of a rational matrix: r_ij is the rank of the
/// cyclically extended column block (v_i, ..., v_j).
pub fn r_of_matrix(m: &GrassmannPoint) -> Result<CyclicRankMatrix> {
    let n = m.n() as i64;
    let mut band = Vec::with_capacity(m.n());
    for i in 1..=n {
        let mut row = Vec::with_capacity(m.n() + 1);
        for j in i - 1..=i + n - 1 {
            let h = if j < i {
                0
            } else {
                let cols: Vec<usize> = (i..=j).map(|t| m.column_index(t)).collect();
                j - i + 1 - m.matrix().rank_of_columns(&cols) as i64
            };
            row.push(h);
        }
        band.push(row);
    }
    CyclicRankMatrix::new(m.n(), m.k() as i64, band)
}

/// Entrywise comparison r(a) >= r(b) over the stored band; the closed
/// forms agree off the band for matrices with equal (n, k).
pub fn band_dominates(a: &CyclicRankMatrix, b: &CyclicRankMatrix) -> bool {
    debug_assert_eq!(a.n(), b.n());
    debug_assert_eq!(a.k(), b.k());
    let n = a.n() as i64;
    (1..=n).all(|i| (i - 1..=i + n - 1).all(|j| a.r(i, j) >= b.r(i, j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affperm::PermClass;
    use crate::ratmat::RatMat;

    fn perm(n: usize, w: &[i64]) -> AffinePermutation {
        AffinePermutation::new(n, w.to_vec()).unwrap()
    }

    fn point(rows: &[Vec<i64>]) -> GrassmannPoint {
        GrassmannPoint::new(RatMat::from_int_rows(rows)).unwrap()
    }

    #[test]
    fn s_window_examples() {
        let d = [1, 0, 1, 1, 0, 0, 0, 0];
        assert_eq!(s_window(&d, 3, 4).unwrap(), 1);
        assert_eq!(s_window(&d, 1, 1).unwrap(), 0);
        assert_eq!(s_window(&[0; 6], 2, 5).unwrap(), 0);
        assert!(matches!(s_window(&d, 2, 1), Err(Error::EmptyWindow { .. })));
    }

    #[test]
    fn h_of_a_examples() {
        let a = perm(4, &[3, 4, 5, 6]).characteristic_matrix().unwrap();
        assert_eq!(h_of_a(&a, 1, 3).unwrap(), 1);
        assert_eq!(h_of_a(&a, 1, 1).unwrap(), 0);
        assert_eq!(h_of_a(&a, 2, 1).unwrap(), 0);
    }

    #[test]
    fn r_of_perm_band_values() {
        let r = r_of_perm(&perm(4, &[3, 4, 5, 6])).unwrap();
        assert_eq!(r.r(1, 1), 1);
        assert_eq!(r.r(1, 2), 2);
        assert_eq!(r.r(1, 3), 2);
        assert_eq!(r.r(2, 2), 1);
        // periodicity
        assert_eq!(r.r(5, 5), 1);
        assert_eq!(r.r(5, 6), 2);
    }

    #[test]
    fn shift_powers_have_min_rank_matrix() {
        for (n, k) in [(4usize, 2i64), (5, 1), (5, 3), (6, 4)] {
            let r = r_of_perm(&AffinePermutation::splus_power(n, k)).unwrap();
            for i in 1..=n as i64 {
                for j in i - 1..=i + n as i64 - 1 {
                    assert_eq!(r.r(i, j), (j - i + 1).min(k), "at ({i}, {j})");
                }
            }
        }
    }

    #[test]
    fn axioms_pass_for_bounded_permutations() {
        for f in AffinePermutation::enumerate(4, 2, PermClass::Bounded).unwrap() {
            let r = r_of_perm(&f).unwrap();
            assert!(check_axioms(&r).passed(), "axioms failed for {f}");
        }
    }

    #[test]
    fn isolated_decrement_is_a_c3_violation() {
        let good = r_of_perm(&perm(2, &[2, 3])).unwrap();
        let mut band: Vec<Vec<i64>> = (0..2)
            .map(|i| (0..=2).map(|d| good.h(i as i64 + 1, i as i64 + d)).collect())
            .collect();
        band[0][2] = 2; // forces r_12 = 0 under r_11 = 1
        let bad = CyclicRankMatrix::new(2, 1, band).unwrap();
        let report = check_axioms(&bad);
        assert!(report
            .violations
            .iter()
            .any(|v| v.axiom == "C_3" && v.i == 1 && v.j == 2));
        assert!(matches!(perm_of_r(&bad), Err(Error::AxiomViolation { .. })));
    }

    #[test]
    fn round_trip_examples() {
        for w in [[3i64, 4, 5, 6], [5, 3, 6, 4]] {
            let f = perm(4, &w);
            assert_eq!(perm_of_r(&r_of_perm(&f).unwrap()).unwrap(), f);
        }
    }

    #[test]
    fn zero_ball_number_is_rejected() {
        let band = vec![vec![0; 3]; 2];
        assert!(matches!(
            CyclicRankMatrix::new(2, 0, band),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn f_of_matrix_examples() {
        assert_eq!(
            f_of_matrix(&point(&[vec![1, 0, 0, 0], vec![0, 1, 1, 0]])).unwrap().window(),
            &[5, 3, 6, 4]
        );
        assert_eq!(f_of_matrix(&point(&[vec![1, 1, 1]])).unwrap().window(), &[2, 3, 4]);
        assert_eq!(f_of_matrix(&point(&[vec![1, 0, 1]])).unwrap().window(), &[3, 2, 4]);
    }

    #[test]
    fn r_of_matrix_examples() {
        let r = r_of_matrix(&point(&[vec![1, 0, 0, 0], vec![0, 1, 1, 0]])).unwrap();
        assert_eq!(r.r(2, 4), 1);
        assert_eq!(r.r(1, 2), 2);
        assert_eq!(r.r(3, 2), 0);
    }

    #[test]
    fn matrix_and_permutation_agree_on_example() {
        let m = point(&[vec![1, 0, 0, 0], vec![0, 1, 1, 0]]);
        let via_matrix = r_of_matrix(&m).unwrap();
        let via_perm = r_of_perm(&f_of_matrix(&m).unwrap()).unwrap();
        assert_eq!(via_matrix, via_perm);
    }

    #[test]
    fn json_round_trip() {
        let r = r_of_perm(&perm(4, &[5, 3, 6, 4])).unwrap();
        assert_eq!(CyclicRankMatrix::from_json(&r.to_json()).unwrap(), r);
    }

    /// Plus-but-unbounded permutations can be forced through the band
    /// construction; there is no backing result for what comes out, so the
    /// checker output is recorded without asserting an expected value.
    #[test]
    fn unbounded_input_forced_through_records_checker_output() {
        let r = r_of_perm(&perm(4, &[2, 3, 4, 9])).unwrap();
        let report = check_axioms(&r);
        println!(
            "forced band of [2,3,4,9]: passed = {}, first violation = {:?}",
            report.passed(),
            report.violations.first()
        );
    }
}
