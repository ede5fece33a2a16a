//! Milnor torsion of based acyclic chain complexes over the fraction field,
//! the Alexander function of a two-term complex, and the multiplicativity /
//! duality algebra used by the concordance obstruction.

use std::fmt;

use crate::alexander::{self, delta0};
use crate::diagram::AlexMatrix;
use crate::laurent::LaurentPoly;

/// Chain-complex syntax or validation failure, with a 1-based line when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexError {
    pub line: Option<usize>,
    pub msg: String,
}

impl fmt::Display for ComplexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {}: {}", l, self.msg),
            None => write!(f, "{}", self.msg),
        }
    }
}

impl std::error::Error for ComplexError {}

fn err(line: Option<usize>, msg: impl Into<String>) -> ComplexError {
    ComplexError {
        line,
        msg: msg.into(),
    }
}

// ---------------------------------------------------------------------------
// Based complexes
// ---------------------------------------------------------------------------

/// A based chain complex C_m → … → C_0 of free modules over the Laurent
/// ring, with the preferred (standard) basis in every degree.
///
/// `ranks` lists the ranks of C_m … C_0 (top degree first, matching the file
/// format); `boundaries[k]` is ∂ from C_{m−k} to C_{m−k−1}, stored with
/// rows indexed by the target basis and columns by the source basis.
#[derive(Debug, Clone)]
pub struct BasedComplex {
    pub genus: usize,
    pub ranks: Vec<usize>,
    pub boundaries: Vec<AlexMatrix>,
}

impl BasedComplex {
    /// Build and validate: matrix shapes must match adjacent ranks and all
    /// consecutive composites ∂∘∂ must vanish.
    pub fn new(
        genus: usize,
        ranks: Vec<usize>,
        boundaries: Vec<AlexMatrix>,
    ) -> Result<Self, ComplexError> {
        if ranks.is_empty() {
            return Err(err(None, "complex needs at least one degree"));
        }
        let m = ranks.len() - 1;
        if boundaries.len() != m {
            return Err(err(
                None,
                format!("expected {} boundary matrices, got {}", m, boundaries.len()),
            ));
        }
        for (k, b) in boundaries.iter().enumerate() {
            if b.genus != genus {
                return Err(err(None, "boundary entry context mismatch"));
            }
            if b.rows != ranks[k + 1] || b.cols != ranks[k] {
                return Err(err(
                    None,
                    format!(
                        "boundary {} has shape {}x{}, expected {}x{}",
                        m - k,
                        b.rows,
                        b.cols,
                        ranks[k + 1],
                        ranks[k]
                    ),
                ));
            }
        }
        for k in 0..m.saturating_sub(1) {
            // ∂_{m-k-1} ∘ ∂_{m-k} = 0.
            let comp = mat_mul(&boundaries[k + 1], &boundaries[k]);
            if !mat_is_zero(&comp) {
                return Err(err(
                    None,
                    format!("composite of boundaries {} and {} is nonzero", m - k, m - k - 1),
                ));
            }
        }
        Ok(BasedComplex {
            genus,
            ranks,
            boundaries,
        })
    }

    /// Top degree m.
    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    /// Rank of C_i (i counted from the bottom).
    pub fn dim(&self, i: usize) -> usize {
        self.ranks[self.top_degree() - i]
    }

    /// ∂_i : C_i → C_{i−1}, for 1 ≤ i ≤ m.
    pub fn boundary(&self, i: usize) -> &AlexMatrix {
        &self.boundaries[self.top_degree() - i]
    }

    /// Ranks of all boundary maps over the fraction field, indexed so that
    /// `b[i]` = rank ∂_i; `b[0]` = `b[m+1]` = 0.
    fn boundary_ranks(&self) -> Vec<usize> {
        let m = self.top_degree();
        let mut b = vec![0usize; m + 2];
        for i in 1..=m {
            b[i] = alexander::rank(self.boundary(i));
        }
        b
    }

    /// Acyclicity over the fraction field: rank ∂_i + rank ∂_{i+1} = dim C_i
    /// in every degree. Returns the lowest failing degree on error.
    pub fn check_acyclic(&self) -> Result<(), ComplexError> {
        let b = self.boundary_ranks();
        for i in 0..=self.top_degree() {
            if b[i] + b[i + 1] != self.dim(i) {
                return Err(err(
                    None,
                    format!(
                        "complex is not acyclic: homology survives in degree {}",
                        i
                    ),
                ));
            }
        }
        Ok(())
    }

    /// Serialize in the tkacplx format.
    pub fn print(&self) -> String {
        let mut out = String::from("tkacplx 1\n");
        out.push_str(&format!("genus {}\n", self.genus));
        let ranks: Vec<String> = self.ranks.iter().map(|r| r.to_string()).collect();
        out.push_str(&format!("ranks {}\n", ranks.join(" ")));
        let m = self.top_degree();
        for (k, b) in self.boundaries.iter().enumerate() {
            let rows: Vec<String> = b
                .entries
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| e.to_string())
                        .collect::<Vec<_>>()
                        .join(" , ")
                })
                .collect();
            out.push_str(&format!("boundary {} : {}\n", m - k, rows.join(" ; ")));
        }
        out
    }
}

/// Parse the tkacplx chain-complex format.
pub fn parse_complex(text: &str) -> Result<BasedComplex, ComplexError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (ln, header) = lines.next().ok_or_else(|| err(None, "empty file"))?;
    if header != "tkacplx 1" {
        return Err(err(Some(ln), "expected header `tkacplx 1`"));
    }
    let (ln, gline) = lines
        .next()
        .ok_or_else(|| err(None, "missing genus line"))?;
    let genus: usize = gline
        .strip_prefix("genus ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| err(Some(ln), "expected `genus <g>`"))?;
    if genus == 0 {
        return Err(err(Some(ln), "genus must be >= 1"));
    }
    let (ln, rline) = lines
        .next()
        .ok_or_else(|| err(None, "missing ranks line"))?;
    let ranks: Vec<usize> = rline
        .strip_prefix("ranks ")
        .ok_or_else(|| err(Some(ln), "expected `ranks r_m ... r_0`"))?
        .split_whitespace()
        .map(|s| s.parse().map_err(|_| err(Some(ln), "bad rank")))
        .collect::<Result<_, _>>()?;
    if ranks.is_empty() {
        return Err(err(Some(ln), "ranks line needs at least one entry"));
    }
    let m = ranks.len() - 1;

    let mut boundaries = Vec::with_capacity(m);
    for k in 0..m {
        let degree = m - k;
        let (ln, bline) = lines
            .next()
            .ok_or_else(|| err(None, format!("missing boundary {} line", degree)))?;
        let rest = bline
            .strip_prefix("boundary ")
            .ok_or_else(|| err(Some(ln), "expected a `boundary` line"))?;
        let (dtok, body) = rest
            .split_once(':')
            .ok_or_else(|| err(Some(ln), "missing `:` in boundary line"))?;
        let d: usize = dtok
            .trim()
            .parse()
            .map_err(|_| err(Some(ln), "bad boundary degree"))?;
        if d != degree {
            return Err(err(
                Some(ln),
                format!("expected boundary {}, found boundary {}", degree, d),
            ));
        }
        let (rows, cols) = (ranks[k + 1], ranks[k]);
        let body = body.trim();
        let mut entries: Vec<Vec<LaurentPoly>> = Vec::with_capacity(rows);
        if rows > 0 {
            let row_texts: Vec<&str> = body.split(';').collect();
            if row_texts.len() != rows {
                return Err(err(
                    Some(ln),
                    format!("expected {} rows, found {}", rows, row_texts.len()),
                ));
            }
            for rt in row_texts {
                let rt = rt.trim();
                let mut row = Vec::with_capacity(cols);
                if cols > 0 {
                    let cells: Vec<&str> = rt.split(',').collect();
                    if cells.len() != cols {
                        return Err(err(
                            Some(ln),
                            format!("expected {} entries per row, found {}", cols, cells.len()),
                        ));
                    }
                    for cell in cells {
                        let p = crate::laurent::parse_poly(cell.trim(), genus)
                            .map_err(|e| err(Some(ln), format!("bad entry: {}", e)))?;
                        row.push(p);
                    }
                } else if !rt.is_empty() {
                    return Err(err(Some(ln), "expected an empty row"));
                }
                entries.push(row);
            }
        } else if !body.is_empty() {
            return Err(err(Some(ln), "expected an empty boundary matrix"));
        }
        // from_rows cannot see the column count of an empty matrix; build by hand.
        boundaries.push(AlexMatrix {
            genus,
            rows,
            cols,
            entries,
        });
    }
    if let Some((ln, _)) = lines.next() {
        return Err(err(Some(ln), "trailing content after last boundary"));
    }
    BasedComplex::new(genus, ranks, boundaries)
}

// ---------------------------------------------------------------------------
// Torsion values (fraction-field elements up to units)
// ---------------------------------------------------------------------------

/// An element of the fraction field, stored as a reduced fraction of Laurent
/// polynomials; all comparisons are made up to the unit class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionValue {
    pub numerator: LaurentPoly,
    pub denominator: LaurentPoly,
}

impl TorsionValue {
    /// Build in lowest terms. The denominator must be nonzero.
    pub fn new(numerator: LaurentPoly, denominator: LaurentPoly) -> Self {
        assert!(!denominator.is_zero(), "zero denominator");
        if numerator.is_zero() {
            return TorsionValue {
                numerator,
                denominator: LaurentPoly::one(denominator.genus()),
            };
        }
        let g = numerator.gcd(&denominator);
        let n = numerator.div_exact(&g).expect("gcd divides");
        let d = denominator.div_exact(&g).expect("gcd divides");
        TorsionValue {
            numerator: n.unit_normal(),
            denominator: d.unit_normal(),
        }
    }

    pub fn one(genus: usize) -> Self {
        TorsionValue {
            numerator: LaurentPoly::one(genus),
            denominator: LaurentPoly::one(genus),
        }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let genus = p.genus();
        TorsionValue::new(p, LaurentPoly::one(genus))
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        TorsionValue::new(
            self.numerator.mul(&other.numerator),
            self.denominator.mul(&other.denominator),
        )
    }

    /// Multiplicative inverse; the value must be nonzero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverting zero");
        TorsionValue::new(self.denominator.clone(), self.numerator.clone())
    }

    /// Equality in the fraction field up to a unit monomial.
    pub fn is_associate(&self, other: &Self) -> bool {
        self.numerator
            .mul(&other.denominator)
            .is_associate(&other.numerator.mul(&self.denominator))
    }
}

impl fmt::Display for TorsionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} / {}", self.numerator, self.denominator)
    }
}

// ---------------------------------------------------------------------------
// Torsion
// ---------------------------------------------------------------------------

/// τ(C): the alternating product ∏ det(M_i)^{(−1)^{i+1}} over the pinned
/// deterministic choice of basis subsets (lowest-index admissible columns,
/// scanned left to right).
pub fn torsion(c: &BasedComplex) -> Result<TorsionValue, ComplexError> {
    torsion_with_order(c, |cols| (0..cols).collect())
}

/// τ(C) computed with a seeded random preference order on the columns in
/// every degree. Any admissible choice yields an associate value; this entry
/// point exists to let tests exercise that independence.
pub fn torsion_shuffled(c: &BasedComplex, seed: u64) -> Result<TorsionValue, ComplexError> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    torsion_with_order(c, move |cols| {
        let mut order: Vec<usize> = (0..cols).collect();
        order.shuffle(&mut rng);
        order
    })
}

fn torsion_with_order(
    c: &BasedComplex,
    mut order: impl FnMut(usize) -> Vec<usize>,
) -> Result<TorsionValue, ComplexError> {
    c.check_acyclic()?;
    let genus = c.genus;
    let m = c.top_degree();
    let mut num = LaurentPoly::one(genus);
    let mut den = LaurentPoly::one(genus);
    // T_{i-1} ⊂ basis(C_{i-1}): columns chosen in the previous degree.
    let mut prev_chosen: Vec<usize> = Vec::new();
    for i in 1..=m {
        let d = c.boundary(i);
        // Rows: the basis vectors of C_{i-1} not hit by the previous choice.
        let rows: Vec<usize> = (0..d.rows).filter(|r| !prev_chosen.contains(r)).collect();
        let need = rows.len();
        let chosen = greedy_columns(d, &rows, need, &order(d.cols)).ok_or_else(|| {
            err(
                None,
                format!("no admissible basis subset in degree {}", i),
            )
        })?;
        let det = alexander::determinant(&submatrix(d, &rows, &chosen));
        debug_assert!(!det.is_zero());
        if i % 2 == 1 {
            num = num.mul(&det);
        } else {
            den = den.mul(&det);
        }
        prev_chosen = chosen;
    }
    Ok(TorsionValue::new(num, den))
}

/// First admissible size-`need` column subset in the given preference order:
/// scan the columns, keeping each one that increases the rank of the selected
/// submatrix on the fixed row set.
fn greedy_columns(
    m: &AlexMatrix,
    rows: &[usize],
    need: usize,
    preference: &[usize],
) -> Option<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::with_capacity(need);
    for &c in preference {
        if chosen.len() == need {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(c);
        let sub = submatrix(m, rows, &trial);
        if alexander::rank(&sub) == trial.len() {
            chosen = trial;
        }
    }
    if chosen.len() == need {
        chosen.sort_unstable();
        Some(chosen)
    } else {
        None
    }
}

fn submatrix(m: &AlexMatrix, rows: &[usize], cols: &[usize]) -> AlexMatrix {
    let entries: Vec<Vec<LaurentPoly>> = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| m.entries[r][c].clone()).collect())
        .collect();
    AlexMatrix {
        genus: m.genus,
        rows: rows.len(),
        cols: cols.len(),
        entries,
    }
}

fn mat_mul(a: &AlexMatrix, b: &AlexMatrix) -> AlexMatrix {
    assert_eq!(a.cols, b.rows, "shape mismatch in matrix product");
    let genus = a.genus;
    let entries: Vec<Vec<LaurentPoly>> = (0..a.rows)
        .map(|i| {
            (0..b.cols)
                .map(|j| {
                    let mut acc = LaurentPoly::zero(genus);
                    for k in 0..a.cols {
                        acc = acc.add(&a.entries[i][k].mul(&b.entries[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect();
    AlexMatrix {
        genus,
        rows: a.rows,
        cols: b.cols,
        entries,
    }
}

fn mat_is_zero(m: &AlexMatrix) -> bool {
    m.entries.iter().flatten().all(LaurentPoly::is_zero)
}

// ---------------------------------------------------------------------------
// Alexander function of a two-term complex
// ---------------------------------------------------------------------------

/// A(X,Y) for the two-term complex 0 → C₂ → C₁ → 0 presented by `two_term`
/// (columns: C₂ basis, rows: C₁ basis): Δ₀ of the cokernel when the boundary
/// is injective over the fraction field, and 0 otherwise.
pub fn alexander_function(two_term: &AlexMatrix) -> LaurentPoly {
    if alexander::rank(two_term) == two_term.cols {
        delta0(two_term).delta0
    } else {
        LaurentPoly::zero(two_term.genus)
    }
}

// ---------------------------------------------------------------------------
// Multiplicativity for short exact sequences
// ---------------------------------------------------------------------------

/// True iff τ(total) ≐ τ(sub)·τ(quotient). The inclusion and projection
/// matrices (one per degree, top degree first, same indexing as `ranks`)
/// must form a degreewise short exact sequence of chain maps; anything else
/// is an error, not `false`.
pub fn check_multiplicativity(
    sub: &BasedComplex,
    total: &BasedComplex,
    quotient: &BasedComplex,
    incl: &[AlexMatrix],
    proj: &[AlexMatrix],
) -> Result<bool, ComplexError> {
    let m = total.top_degree();
    if sub.top_degree() != m || quotient.top_degree() != m {
        return Err(err(None, "complexes must share the same top degree"));
    }
    if sub.genus != total.genus || quotient.genus != total.genus {
        return Err(err(None, "complexes must share the same genus"));
    }
    if incl.len() != m + 1 || proj.len() != m + 1 {
        return Err(err(None, "need one inclusion and one projection per degree"));
    }
    for k in 0..=m {
        let (rs, rt, rq) = (sub.ranks[k], total.ranks[k], quotient.ranks[k]);
        let f = &incl[k];
        let p = &proj[k];
        if f.rows != rt || f.cols != rs || p.rows != rq || p.cols != rt {
            return Err(err(None, format!("chain-map shape mismatch in slot {}", k)));
        }
        if alexander::rank(f) != rs {
            return Err(err(None, format!("inclusion not injective in slot {}", k)));
        }
        if alexander::rank(p) != rq {
            return Err(err(None, format!("projection not surjective in slot {}", k)));
        }
        if !mat_is_zero(&mat_mul(p, f)) {
            return Err(err(None, format!("proj∘incl nonzero in slot {}", k)));
        }
        if rs + rq != rt {
            return Err(err(None, format!("sequence not exact in slot {}", k)));
        }
    }
    for k in 0..m {
        // Chain-map squares: ∂_total ∘ incl = incl ∘ ∂_sub, and likewise for proj.
        let lhs = mat_mul(&total.boundaries[k], &incl[k]);
        let rhs = mat_mul(&incl[k + 1], &sub.boundaries[k]);
        if !mat_eq(&lhs, &rhs) {
            return Err(err(None, format!("inclusion is not a chain map at boundary {}", m - k)));
        }
        let lhs = mat_mul(&quotient.boundaries[k], &proj[k]);
        let rhs = mat_mul(&proj[k + 1], &total.boundaries[k]);
        if !mat_eq(&lhs, &rhs) {
            return Err(err(None, format!("projection is not a chain map at boundary {}", m - k)));
        }
    }
    let ts = torsion(sub)?;
    let tt = torsion(total)?;
    let tq = torsion(quotient)?;
    Ok(tt.is_associate(&ts.mul(&tq)))
}

fn mat_eq(a: &AlexMatrix, b: &AlexMatrix) -> bool {
    a.rows == b.rows && a.cols == b.cols && a.entries == b.entries
}

/// Build the twisted direct sum of `sub` and `quotient`: block boundaries
/// [[∂_S, U·∂_Q − ∂_S·U], [0, ∂_Q]] for the supplied degreewise matrices
/// U_i : C_i(quotient) → C_i(sub) (top degree first). Returns the total
/// complex together with the block inclusion and projection chain maps, which
/// form a short exact sequence by construction.
pub fn twisted_sum(
    sub: &BasedComplex,
    quotient: &BasedComplex,
    u: &[AlexMatrix],
) -> Result<(BasedComplex, Vec<AlexMatrix>, Vec<AlexMatrix>), ComplexError> {
    let m = sub.top_degree();
    if quotient.top_degree() != m || sub.genus != quotient.genus {
        return Err(err(None, "summands must share top degree and genus"));
    }
    if u.len() != m + 1 {
        return Err(err(None, "need one twisting matrix per degree"));
    }
    let genus = sub.genus;
    for k in 0..=m {
        if u[k].rows != sub.ranks[k] || u[k].cols != quotient.ranks[k] {
            return Err(err(None, format!("twisting matrix shape mismatch in slot {}", k)));
        }
    }
    let ranks: Vec<usize> = (0..=m).map(|k| sub.ranks[k] + quotient.ranks[k]).collect();
    let mut boundaries = Vec::with_capacity(m);
    for k in 0..m {
        let ds = &sub.boundaries[k];
        let dq = &quotient.boundaries[k];
        // Top-right block E = U_{target} ∂_Q − ∂_S U_{source}.
        let e = mat_sub(&mat_mul(&u[k + 1], dq), &mat_mul(ds, &u[k]));
        let (rs, rq) = (sub.ranks[k + 1], quotient.ranks[k + 1]);
        let (cs, cq) = (sub.ranks[k], quotient.ranks[k]);
        let mut entries = vec![vec![LaurentPoly::zero(genus); cs + cq]; rs + rq];
        for i in 0..rs {
            for j in 0..cs {
                entries[i][j] = ds.entries[i][j].clone();
            }
            for j in 0..cq {
                entries[i][cs + j] = e.entries[i][j].clone();
            }
        }
        for i in 0..rq {
            for j in 0..cq {
                entries[rs + i][cs + j] = dq.entries[i][j].clone();
            }
        }
        boundaries.push(AlexMatrix {
            genus,
            rows: rs + rq,
            cols: cs + cq,
            entries,
        });
    }
    let total = BasedComplex::new(genus, ranks, boundaries)?;

    let mut incl = Vec::with_capacity(m + 1);
    let mut proj = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let (rs, rq) = (sub.ranks[k], quotient.ranks[k]);
        let mut fi = vec![vec![LaurentPoly::zero(genus); rs]; rs + rq];
        for i in 0..rs {
            fi[i][i] = LaurentPoly::one(genus);
        }
        incl.push(AlexMatrix {
            genus,
            rows: rs + rq,
            cols: rs,
            entries: fi,
        });
        let mut pr = vec![vec![LaurentPoly::zero(genus); rs + rq]; rq];
        for i in 0..rq {
            pr[i][rs + i] = LaurentPoly::one(genus);
        }
        proj.push(AlexMatrix {
            genus,
            rows: rq,
            cols: rs + rq,
            entries: pr,
        });
    }
    Ok((total, incl, proj))
}

fn mat_sub(a: &AlexMatrix, b: &AlexMatrix) -> AlexMatrix {
    assert!(a.rows == b.rows && a.cols == b.cols);
    let entries: Vec<Vec<LaurentPoly>> = (0..a.rows)
        .map(|i| {
            (0..a.cols)
                .map(|j| a.entries[i][j].sub(&b.entries[i][j]))
                .collect()
        })
        .collect();
    AlexMatrix {
        genus: a.genus,
        rows: a.rows,
        cols: a.cols,
        entries,
    }
}

/// Append a two-term summand C_{i} → C_{i−1} with identity boundary (both new
/// ranks 1) to an existing complex; the torsion associate class is unchanged.
pub fn append_identity_summand(c: &BasedComplex, i: usize) -> BasedComplex {
    let m = c.top_degree();
    assert!((1..=m).contains(&i), "degree out of range");
    let genus = c.genus;
    let mut ranks = c.ranks.clone();
    ranks[m - i] += 1;
    ranks[m - i + 1] += 1;
    let mut boundaries = c.boundaries.clone();
    for (k, b) in boundaries.iter_mut().enumerate() {
        let src = m - k; // boundary k maps degree src → src−1
        let grow_cols = src == i || src == i - 1;
        let grow_rows = src - 1 == i || src - 1 == i - 1;
        if grow_cols {
            for row in b.entries.iter_mut() {
                row.push(LaurentPoly::zero(genus));
            }
            b.cols += 1;
        }
        if grow_rows {
            b.entries.push(vec![LaurentPoly::zero(genus); b.cols]);
            b.rows += 1;
        }
        if src == i && grow_rows {
            // The new generator of C_i maps identically to the new one of C_{i−1}.
            let (r, c2) = (b.rows - 1, b.cols - 1);
            b.entries[r][c2] = LaurentPoly::one(genus);
        }
    }
    BasedComplex::new(genus, ranks, boundaries).expect("extension stays a complex")
}

// ---------------------------------------------------------------------------
// Duality
// ---------------------------------------------------------------------------

/// The conjugation half of the duality theorem: apply the bar involution to
/// both numerator and denominator and invert iff (−1)^{n+1} = −1 (n even).
/// Pure algebra; the geometric content of the theorem is not re-proved.
pub fn dual_conj(tv: &TorsionValue, n: usize) -> TorsionValue {
    let num = tv.numerator.conj();
    let den = tv.denominator.conj();
    if n % 2 == 0 {
        assert!(!num.is_zero(), "cannot invert a zero torsion");
        TorsionValue::new(den, num)
    } else {
        TorsionValue::new(num, den)
    }
}
