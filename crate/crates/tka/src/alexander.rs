//! Elementary ideal E₀ and the Alexander polynomial Δ(K) of a knot in a
//! thickened surface, plus the homology-derived sanity specializations.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::diagram::{AlexMatrix, DiagramError, MarkedDiagram};
use crate::fox::jacobian;
use crate::laurent::{ExponentVector, LaurentPoly};

/// Result of the E₀ computation on a presentation matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryIdealResult {
    /// gcd of all maximal minors, unit-normalized; 0 iff rank < cols.
    pub delta0: LaurentPoly,
    /// Rank of the matrix over the fraction field.
    pub rank: usize,
}

/// Memoized Laplace expansion over (row set, column set) pairs. Rows and
/// columns are processed in fixed index order, so results are deterministic.
struct MinorTable<'a> {
    m: &'a AlexMatrix,
    memo: HashMap<(Vec<usize>, Vec<usize>), LaurentPoly>,
}

impl<'a> MinorTable<'a> {
    fn new(m: &'a AlexMatrix) -> Self {
        MinorTable {
            m,
            memo: HashMap::new(),
        }
    }

    fn det(&mut self, rows: &[usize], cols: &[usize]) -> LaurentPoly {
        debug_assert_eq!(rows.len(), cols.len());
        let genus = self.m.genus;
        if rows.is_empty() {
            return LaurentPoly::one(genus);
        }
        if rows.len() == 1 {
            return self.m.entries[rows[0]][cols[0]].clone();
        }
        let key = (rows.to_vec(), cols.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        // Expand along the first listed row.
        let r = rows[0];
        let rest: Vec<usize> = rows[1..].to_vec();
        let mut acc = LaurentPoly::zero(genus);
        for (k, &c) in cols.iter().enumerate() {
            let e = &self.m.entries[r][c];
            if e.is_zero() {
                continue;
            }
            let sub_cols: Vec<usize> = cols
                .iter()
                .copied()
                .filter(|&cc| cc != c)
                .collect();
            let sub = self.det(&rest, &sub_cols);
            let term = e.mul(&sub);
            acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        self.memo.insert(key, acc.clone());
        acc
    }
}

/// Determinant of a square AlexMatrix.
pub fn determinant(m: &AlexMatrix) -> LaurentPoly {
    assert_eq!(m.rows, m.cols, "determinant requires a square matrix");
    let idx: Vec<usize> = (0..m.rows).collect();
    MinorTable::new(m).det(&idx, &idx)
}

/// Rank of the matrix over the fraction field, by cross-multiplication
/// elimination (exact, fraction-free).
pub fn rank(m: &AlexMatrix) -> usize {
    let mut a: Vec<Vec<LaurentPoly>> = m.entries.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut r = 0usize;
    for c in 0..cols {
        // Find a pivot in column c at or below row r.
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for i in (r + 1)..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let factor = a[i][c].clone();
            for j in c..cols {
                let t1 = a[i][j].mul(&pivot);
                let t2 = a[r][j].mul(&factor);
                a[i][j] = t1.sub(&t2);
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// E₀ of a presentation matrix: gcd of all cols×cols minors, unit-normalized.
/// Returns 0 when rows < cols or the matrix drops rank.
pub fn delta0(m: &AlexMatrix) -> ElementaryIdealResult {
    let genus = m.genus;
    let rk = rank(m);
    if m.rows < m.cols || rk < m.cols {
        return ElementaryIdealResult {
            delta0: LaurentPoly::zero(genus),
            rank: rk,
        };
    }
    let cols: Vec<usize> = (0..m.cols).collect();
    let mut table = MinorTable::new(m);
    let mut g = LaurentPoly::zero(genus);
    for rows in subsets(m.rows, m.cols) {
        let minor = table.det(&rows, &cols);
        if minor.is_zero() {
            continue;
        }
        g = if g.is_zero() { minor } else { g.gcd(&minor) };
        if g.is_one() {
            // gcd cannot get any smaller.
            break;
        }
    }
    ElementaryIdealResult {
        delta0: g.unit_normal(),
        rank: rk,
    }
}

/// All size-k subsets of 0..n in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in (i + 1)..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Δ(K): wirtinger → Jacobian over the arc columns → E₀, unit-normalized.
pub fn alexander_poly(d: &MarkedDiagram) -> Result<LaurentPoly, DiagramError> {
    d.validate()?;
    let p = d.wirtinger();
    let j = jacobian(&p, true);
    Ok(delta0(&j).delta0)
}

/// Substitute every surface variable x_l := 1, keeping t.
pub fn subst_x_one(p: &LaurentPoly) -> LaurentPoly {
    let genus = p.genus();
    let mut terms: Vec<(ExponentVector, BigInt)> = Vec::new();
    for (e, c) in p.terms() {
        let mut e1 = ExponentVector::zero(genus);
        e1.t_exp = e.t_exp;
        terms.push((e1, c.clone()));
    }
    LaurentPoly::from_terms(genus, terms)
}

/// The three §3-derived checks on a diagram's Jacobian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SanityReport {
    /// corank of the integer matrix J(1,1) (expected exactly 1).
    pub corank_at_one: usize,
    pub corank_ok: bool,
    /// det J(t, x:=1) vanishes identically (square J only).
    pub det_x_one_zero: bool,
    /// Δ(K)(t, x:=1) = 0.
    pub delta_x_one_zero: bool,
    /// True for 0-crossing diagrams, where the checks are vacuous.
    pub vacuous: bool,
}

impl SanityReport {
    pub fn all_ok(&self) -> bool {
        self.vacuous || (self.corank_ok && self.det_x_one_zero && self.delta_x_one_zero)
    }

    pub fn failures(&self) -> Vec<String> {
        if self.all_ok() {
            return Vec::new();
        }
        let mut out = Vec::new();
        if !self.corank_ok {
            out.push(format!(
                "J(1,1) has corank {} (expected 1)",
                self.corank_at_one
            ));
        }
        if !self.det_x_one_zero {
            out.push("det J(t, x:=1) is not identically zero".to_string());
        }
        if !self.delta_x_one_zero {
            out.push("Δ(t, x:=1) is not zero".to_string());
        }
        out
    }
}

impl fmt::Display for SanityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vacuous {
            return write!(f, "sanity: vacuous (0 crossings)");
        }
        write!(
            f,
            "sanity: corank(J(1,1))={} [{}], det J(t,x:=1)=0 [{}], Δ(t,x:=1)=0 [{}]",
            self.corank_at_one,
            if self.corank_ok { "ok" } else { "FAIL" },
            if self.det_x_one_zero { "ok" } else { "FAIL" },
            if self.delta_x_one_zero { "ok" } else { "FAIL" },
        )
    }
}

/// Run the specialization checks of §3 on a diagram.
pub fn sanity_specializations(d: &MarkedDiagram) -> Result<SanityReport, DiagramError> {
    d.validate()?;
    if d.n() == 0 {
        return Ok(SanityReport {
            corank_at_one: 0,
            corank_ok: true,
            det_x_one_zero: true,
            delta_x_one_zero: true,
            vacuous: true,
        });
    }
    let p = d.wirtinger();
    let j = jacobian(&p, true);

    // (a) corank of J(1,1) over Q.
    let one = BigRational::one();
    let xs = vec![BigRational::one(); 2 * d.genus];
    let genus = d.genus;
    let eval_entries: Vec<Vec<LaurentPoly>> = j
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| {
                    let v = e.evaluate(&one, &xs).expect("evaluation at 1 is defined");
                    assert!(v.is_integer(), "integer matrix expected at (1,1)");
                    LaurentPoly::constant(genus, v.to_integer())
                })
                .collect()
        })
        .collect();
    let eval = AlexMatrix::from_rows(genus, eval_entries);
    let corank = j.cols - rank(&eval);

    // (b) det J(t, x:=1) = 0 identically.
    let jx1_entries: Vec<Vec<LaurentPoly>> = j
        .entries
        .iter()
        .map(|row| row.iter().map(subst_x_one).collect())
        .collect();
    let jx1 = AlexMatrix::from_rows(genus, jx1_entries);
    let det_x_one_zero = determinant(&jx1).is_zero();

    // (c) Δ(t, x:=1) = 0.
    let delta = delta0(&j).delta0;
    let delta_x_one_zero = subst_x_one(&delta).is_zero();

    Ok(SanityReport {
        corank_at_one: corank,
        corank_ok: corank == 1,
        det_x_one_zero,
        delta_x_one_zero,
        vacuous: false,
    })
}
