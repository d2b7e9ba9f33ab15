//! Affine permutations of period n: construction, classification, length,
//! orbit decomposition, characteristic matrices, enumeration, and the
//! Bruhat order on the bounded set B(k,n).
//!
//! An affine permutation is a bijection f of the integers with
//! f(i+n) = f(i)+n, stored by its window [f(1),...,f(n)]. The ball number
//! k is the average displacement (1/n)*sum(f(i)-i).

use num::integer::lcm;

use crate::bundles::BinaryPeriodicMatrix;
use crate::error::{Error, Result};
use crate::rankmat;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffinePermutation {
    n: usize,
    window: Vec<i64>,
    k: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub k: i64,
    pub bounded: bool,
    pub plus: bool,
    pub strict_plus: bool,
}

/// One orbit of the cyclic group generated by a strictly-plus affine
/// permutation, acting on the integers. The orbit is invariant under
/// translation by `period * n` and is recorded by one fundamental block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// Smallest positive member; always lies in [1, period*n].
    pub rep: i64,
    /// Members inside the block [1, period*n], sorted.
    pub members_in_block: Vec<i64>,
    /// Minimal d > 0 such that shifting the orbit by d*n maps it to itself.
    pub period: usize,
    /// Length of the underlying finite cycle mod n.
    pub cycle_length: usize,
    /// Indicator of membership over positions 1..=period*n.
    pub char_block: Vec<u8>,
}

impl Orbit {
    pub fn contains(&self, m: i64) -> bool {
        let span = (self.period * self.n_block()) as i64;
        let reduced = (m - 1).rem_euclid(span) + 1;
        self.members_in_block.binary_search(&reduced).is_ok()
    }

    fn n_block(&self) -> usize {
        self.char_block.len() / self.period
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecomposition {
    /// All orbits, sorted by representative.
    pub orbits: Vec<Orbit>,
    /// Equivalence classes of orbits under shift by n (indices into
    /// `orbits`), sorted by the smallest representative in each class.
    pub classes: Vec<Vec<usize>>,
}

impl OrbitDecomposition {
    /// Number of shift-equivalence classes, written p(f) when the input is
    /// f composed with the shift.
    pub fn p(&self) -> usize {
        self.classes.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "orbits": self.orbits.iter().map(|o| serde_json::json!({
                "rep": o.rep,
                "period": o.period,
                "cycle_length": o.cycle_length,
                "char_block": o.char_block,
            })).collect::<Vec<_>>(),
            "p": self.p(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermClass {
    Bounded,
    Plus,
}

/// Default cap on the period for exhaustive enumeration.
pub const DEFAULT_ENUM_CAP: usize = 6;

impl AffinePermutation {
    pub fn new(n: usize, window: Vec<i64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameters("period n must be positive".into()));
        }
        if window.len() != n {
            return Err(Error::WindowLength { expected: n, got: window.len() });
        }
        let nn = n as i64;
        for i in 0..n {
            for j in i + 1..n {
                if (window[i] - window[j]).rem_euclid(nn) == 0 {
                    return Err(Error::DuplicateResidue { i: i + 1, j: j + 1 });
                }
            }
        }
        let total: i64 = window.iter().enumerate().map(|(i, &v)| v - (i as i64 + 1)).sum();
        if total.rem_euclid(nn) != 0 {
            return Err(Error::NonIntegralBallNumber);
        }
        Ok(AffinePermutation { n, window, k: total / nn })
    }

    /// The shift power s_+^k, the minimum of B(k,n) under the Bruhat order.
    pub fn splus_power(n: usize, k: i64) -> Self {
        let window = (1..=n as i64).map(|i| i + k).collect();
        AffinePermutation { n, window, k }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    /// Ball number (1/n) * sum(f(i) - i).
    pub fn k(&self) -> i64 {
        self.k
    }

    /// Evaluates f at any integer via f(m+n) = f(m)+n.
    pub fn eval(&self, m: i64) -> i64 {
        let nn = self.n as i64;
        let idx = (m - 1).rem_euclid(nn) as usize;
        self.window[idx] + nn * (m - 1).div_euclid(nn)
    }

    pub fn classify(&self) -> Classification {
        let nn = self.n as i64;
        let mut bounded = true;
        let mut plus = true;
        let mut strict_plus = true;
        for (i, &v) in self.window.iter().enumerate() {
            let i = i as i64 + 1;
            bounded &= i <= v && v <= nn + i;
            plus &= v >= i;
            strict_plus &= v > i;
        }
        Classification { k: self.k, bounded, plus, strict_plus }
    }

    /// Coxeter length: the number of inversion pairs (i, j) with
    /// 1 <= i <= n, i < j and f(i) > f(j). For a plus permutation
    /// f(i) - i <= kn, so scanning j <= i + (k+1) n is exhaustive.
    pub fn length(&self) -> Result<u64> {
        if !self.classify().plus {
            return Err(Error::NotPlus);
        }
        let nn = self.n as i64;
        let bound = (self.k + 1) * nn;
        let mut count = 0u64;
        for i in 1..=nn {
            let fi = self.eval(i);
            for j in i + 1..=i + bound {
                if self.eval(j) < fi {
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// Right composition with the shift: returns f o s_+^m, with window
    /// g(i) = f(i+m). The ball number changes by m.
    pub fn compose_splus(&self, m: i64) -> AffinePermutation {
        let window = (1..=self.n as i64).map(|i| self.eval(i + m)).collect();
        AffinePermutation { n: self.n, window, k: self.k + m }
    }

    /// Decomposes the integers into orbits of the cyclic group generated by
    /// self (which must be strictly plus), together with the grouping of
    /// orbits into equivalence classes under shift by n.
    pub fn orbit_decomposition(&self) -> Result<OrbitDecomposition> {
        if !self.classify().strict_plus {
            return Err(Error::NotStrictPlus);
        }
        let nn = self.n as i64;
        let mut seen_residue = vec![false; self.n];
        let mut orbits: Vec<Orbit> = Vec::new();
        let mut classes: Vec<Vec<i64>> = Vec::new(); // reps per class
        for r in 1..=nn {
            if seen_residue[(r - 1) as usize] {
                continue;
            }
            // Walk the residue cycle through r.
            let mut members = vec![r];
            let mut x = self.eval(r);
            while (x - r).rem_euclid(nn) != 0 {
                seen_residue[((x - 1).rem_euclid(nn)) as usize] = true;
                members.push(x);
                x = self.eval(x);
            }
            seen_residue[(r - 1) as usize] = true;
            let cycle_length = members.len();
            let period = ((x - r) / nn) as usize;
            let span = (period * self.n) as i64;
            // The orbits over this residue cycle are the base orbit and its
            // shifts by n, 2n, ..., (period-1)n; they are pairwise distinct
            // and exhaust the cycle.
            let mut class_reps = Vec::with_capacity(period);
            for d in 0..period as i64 {
                let mut in_block: Vec<i64> = members
                    .iter()
                    .map(|&m| (m + d * nn - 1).rem_euclid(span) + 1)
                    .collect();
                in_block.sort_unstable();
                let mut char_block = vec![0u8; span as usize];
                for &m in &in_block {
                    char_block[(m - 1) as usize] = 1;
                }
                class_reps.push(in_block[0]);
                orbits.push(Orbit {
                    rep: in_block[0],
                    members_in_block: in_block,
                    period,
                    cycle_length,
                    char_block,
                });
            }
            classes.push(class_reps);
        }
        orbits.sort_by_key(|o| o.rep);
        let rep_index: std::collections::BTreeMap<i64, usize> =
            orbits.iter().enumerate().map(|(i, o)| (o.rep, i)).collect();
        let mut class_indices: Vec<Vec<usize>> = classes
            .into_iter()
            .map(|reps| {
                let mut idx: Vec<usize> = reps.into_iter().map(|r| rep_index[&r]).collect();
                idx.sort_unstable();
                idx
            })
            .collect();
        class_indices.sort_by_key(|c| c[0]);
        Ok(OrbitDecomposition { orbits, classes: class_indices })
    }

    /// The characteristic matrix of f composed with the shift: one 0/1 row
    /// per orbit, stored as a (k+1) x (H n) block where H is the lcm of the
    /// orbit periods. Rows are ordered by the column of their first 1.
    pub fn characteristic_matrix(&self) -> Result<BinaryPeriodicMatrix> {
        if !self.classify().plus {
            return Err(Error::NotPlus);
        }
        let decomp = self.compose_splus(1).orbit_decomposition()?;
        let h = decomp.orbits.iter().fold(1usize, |acc, o| lcm(acc, o.period));
        let width = h * self.n;
        let rows: Vec<Vec<u8>> = decomp
            .orbits
            .iter()
            .map(|o| {
                let mut row = Vec::with_capacity(width);
                while row.len() < width {
                    row.extend_from_slice(&o.char_block);
                }
                row
            })
            .collect();
        BinaryPeriodicMatrix::new(self.n, rows).map(|m| m.canonical_row_order())
    }

    /// All members of B(k,n) (`Bounded`) or of the plus coset (`Plus`), in
    /// lexicographic window order.
    pub fn enumerate(n: usize, k: i64, class: PermClass) -> Result<Vec<AffinePermutation>> {
        Self::enumerate_with_cap(n, k, class, DEFAULT_ENUM_CAP)
    }

    pub fn enumerate_with_cap(
        n: usize,
        k: i64,
        class: PermClass,
        cap: usize,
    ) -> Result<Vec<AffinePermutation>> {
        if n == 0 || k <= 0 || k >= n as i64 {
            return Err(Error::InvalidParameters(format!(
                "enumeration requires 0 < k < n, got k = {k}, n = {n}"
            )));
        }
        if n > cap {
            return Err(Error::LimitExceeded { n, cap });
        }
        let nn = n as i64;
        let search = WindowSearch {
            nn,
            k,
            target: k * nn,
            max_disp: match class {
                PermClass::Bounded => nn,
                PermClass::Plus => k * nn,
            },
        };
        let mut out = Vec::new();
        search.dfs(1, 0, &mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
        Ok(out)
    }

    /// Bruhat comparison via cyclic rank matrices: f <= g if and only if
    /// r(f) >= r(g) entrywise.
    pub fn bruhat_leq(&self, other: &AffinePermutation) -> Result<bool> {
        self.require_shared_parameters(other)?;
        let rf = rankmat::r_of_perm(self)?;
        let rg = rankmat::r_of_perm(other)?;
        Ok(rankmat::band_dominates(&rf, &rg))
    }

    /// All permutations reachable from self by one swap of the values at
    /// positions i < j (applied to every translate) where f(i) > f(j).
    /// Each such swap moves strictly down in the Bruhat order.
    pub fn swap_descents(&self) -> Vec<AffinePermutation> {
        let nn = self.n as i64;
        let bound = (self.k.max(1) + 1) * nn;
        let mut out: Vec<AffinePermutation> = Vec::new();
        for i in 1..=nn {
            let fi = self.eval(i);
            for j in i + 1..=i + bound {
                if (j - i).rem_euclid(nn) == 0 {
                    continue;
                }
                let fj = self.eval(j);
                if fi <= fj {
                    continue;
                }
                let mut window = self.window.clone();
                let t = (j - 1).div_euclid(nn);
                let j0 = ((j - 1).rem_euclid(nn)) as usize;
                window[(i - 1) as usize] = fj;
                window[j0] = fi - t * nn;
                let g = AffinePermutation { n: self.n, window, k: self.k };
                if !out.contains(&g) {
                    out.push(g);
                }
            }
        }
        out
    }

    /// Covering relation of the Bruhat order: true when `lower` arises from
    /// self by a single descent swap and no third element lies strictly
    /// between them. The betweenness test enumerates the ambient plus coset,
    /// so this is intended for small n.
    pub fn covers(&self, lower: &AffinePermutation) -> Result<bool> {
        self.require_shared_parameters(lower)?;
        if self == lower || !self.swap_descents().contains(lower) {
            return Ok(false);
        }
        if !lower.bruhat_leq(self)? {
            return Ok(false);
        }
        // The bounded set is a lower order ideal, so for bounded endpoints
        // every intermediate element is bounded; the r-matrix comparison is
        // only meaningful there.
        let class = if self.classify().bounded && lower.classify().bounded {
            PermClass::Bounded
        } else {
            PermClass::Plus
        };
        let ambient = AffinePermutation::enumerate_with_cap(self.n, self.k, class, self.n)?;
        for h in &ambient {
            if h == self || h == lower {
                continue;
            }
            if lower.bruhat_leq(h)? && h.bruhat_leq(self)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn require_shared_parameters(&self, other: &AffinePermutation) -> Result<()> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::MismatchedParameters(format!(
                "(n, k) = ({}, {}) vs ({}, {})",
                self.n, self.k, other.n, other.k
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"n": self.n, "window": self.window})
    }

    pub fn from_json(v: &serde_json::Value) -> Result<AffinePermutation> {
        let n = v
            .get("n")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Parse("missing or invalid field \"n\"".into()))?
            as usize;
        let window = v
            .get("window")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Parse("missing or invalid field \"window\"".into()))?
            .iter()
            .map(|e| e.as_i64().ok_or_else(|| Error::Parse("non-integer window entry".into())))
            .collect::<Result<Vec<i64>>>()?;
        AffinePermutation::new(n, window)
    }
}

/// Depth-first window search with displacement-sum and residue pruning.
struct WindowSearch {
    nn: i64,
    k: i64,
    target: i64,
    max_disp: i64,
}

impl WindowSearch {
    fn dfs(
        &self,
        pos: i64,
        sum: i64,
        window: &mut Vec<i64>,
        used: &mut [bool],
        out: &mut Vec<AffinePermutation>,
    ) {
        if pos > self.nn {
            if sum == self.target {
                out.push(AffinePermutation {
                    n: self.nn as usize,
                    window: window.clone(),
                    k: self.k,
                });
            }
            return;
        }
        let remaining = self.nn - pos;
        for v in pos..=pos + self.max_disp {
            let disp = v - pos;
            if sum + disp > self.target || sum + disp + remaining * self.max_disp < self.target {
                continue;
            }
            let res = ((v - 1).rem_euclid(self.nn)) as usize;
            if used[res] {
                continue;
            }
            used[res] = true;
            window.push(v);
            self.dfs(pos + 1, sum + disp, window, used, out);
            window.pop();
            used[res] = false;
        }
    }
}

impl std::fmt::Display for AffinePermutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}]",
            self.window.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
        )
    }
}
