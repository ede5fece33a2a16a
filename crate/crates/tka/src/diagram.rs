//! Marked diagrams for knots in a thickened surface Σ_g × I: parsing,
//! validation, printing, compilation to a Wirtinger presentation, and the
//! built-in Reidemeister/decoration-shift move corpus.
//!
//! A diagram records, per crossing, the sign, the over arc, the under in/out
//! arcs, and an explicit surface transport word; per arc it records the
//! decoration word of handle-curve intersections met along the arc.

use std::fmt;

use crate::fox::{free_reduce, Generator, Letter, Presentation, Word};
use crate::laurent::LaurentPoly;

/// Presentation-matrix type shared by the diagram and fox modules: rows are
/// relators, columns arc generators (or arcs then surface generators).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlexMatrix {
    pub genus: usize,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<LaurentPoly>>,
}

impl AlexMatrix {
    pub fn from_rows(genus: usize, entries: Vec<Vec<LaurentPoly>>) -> Self {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        for r in &entries {
            assert_eq!(r.len(), cols, "ragged matrix");
            for e in r {
                assert_eq!(e.genus(), genus, "entry context mismatch");
            }
        }
        AlexMatrix {
            genus,
            rows,
            cols,
            entries,
        }
    }
}

/// One crossing of a marked diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    /// Crossing sign ε ∈ {+1, −1}.
    pub sign: i8,
    /// Arc passing over, 1-based.
    pub over: usize,
    /// Under arc entering the crossing (this arc dies here).
    pub under_in: usize,
    /// Under arc leaving the crossing (this arc is born here).
    pub under_out: usize,
    /// Surface transport word u_c from the over arc's basepoint to the
    /// crossing; surface letters only.
    pub transport: Word,
}

/// A knot diagram in Σ_g × I with handle decorations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedDiagram {
    /// Genus g ≥ 1 of the supporting surface.
    pub genus: usize,
    /// Decoration word per arc (surface letters only); arcs are 1-based in
    /// crossings. For a 0-crossing diagram there is exactly one arc.
    pub arcs: Vec<Word>,
    pub crossings: Vec<Crossing>,
}

/// Diagram syntax or validation failure, with a 1-based line when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramError {
    pub line: Option<usize>,
    pub msg: String,
}

impl fmt::Display for DiagramError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {}: {}", l, self.msg),
            None => write!(f, "{}", self.msg),
        }
    }
}

impl std::error::Error for DiagramError {}

fn err(line: Option<usize>, msg: impl Into<String>) -> DiagramError {
    DiagramError {
        line,
        msg: msg.into(),
    }
}

impl MarkedDiagram {
    pub fn n(&self) -> usize {
        self.crossings.len()
    }

    /// Check all structural invariants; `Ok` means the diagram is usable.
    pub fn validate(&self) -> Result<(), DiagramError> {
        if self.genus == 0 {
            return Err(err(None, "genus must be >= 1"));
        }
        let n = self.n();
        let expected_arcs = if n == 0 { 1 } else { n };
        if self.arcs.len() != expected_arcs {
            return Err(err(
                None,
                format!(
                    "expected {} arcs for {} crossings, found {}",
                    expected_arcs,
                    n,
                    self.arcs.len()
                ),
            ));
        }
        for (k, d) in self.arcs.iter().enumerate() {
            self.check_surface_word(d, &format!("arc {} decoration", k + 1))?;
        }
        let mut in_seen = vec![false; n + 1];
        let mut out_seen = vec![false; n + 1];
        // next[a] = arc born where arc a dies.
        let mut next = vec![0usize; n + 1];
        for (c, cr) in self.crossings.iter().enumerate() {
            let ctx = format!("crossing {}", c + 1);
            if cr.sign != 1 && cr.sign != -1 {
                return Err(err(None, format!("{ctx}: sign must be +1 or -1")));
            }
            for (what, idx) in [
                ("over", cr.over),
                ("in", cr.under_in),
                ("out", cr.under_out),
            ] {
                if idx == 0 || idx > self.arcs.len() {
                    return Err(err(
                        None,
                        format!("{ctx}: {what} arc index {idx} out of range 1..{}", self.arcs.len()),
                    ));
                }
            }
            self.check_surface_word(&cr.transport, &format!("{ctx} transport"))?;
            if in_seen[cr.under_in] {
                return Err(err(
                    None,
                    format!("{ctx}: arc {} is under_in at two crossings", cr.under_in),
                ));
            }
            if out_seen[cr.under_out] {
                return Err(err(
                    None,
                    format!("{ctx}: arc {} is under_out at two crossings", cr.under_out),
                ));
            }
            in_seen[cr.under_in] = true;
            out_seen[cr.under_out] = true;
            next[cr.under_in] = cr.under_out;
        }
        if n > 0 {
            // The arcs must form a single cycle: a knot, not a link.
            let mut seen = 0usize;
            let mut a = 1usize;
            loop {
                seen += 1;
                a = next[a];
                if a == 1 {
                    break;
                }
                if seen > n {
                    return Err(err(None, "arc traversal does not close up"));
                }
            }
            if seen != n {
                return Err(err(
                    None,
                    format!("arcs form {} cycles; diagram is a link, not a knot", if seen < n { 2 } else { 0 }.max(2)),
                ));
            }
        }
        Ok(())
    }

    fn check_surface_word(&self, w: &Word, ctx: &str) -> Result<(), DiagramError> {
        for &(g, _) in w.letters() {
            match g {
                Generator::Surface(l) if l >= 1 && l <= 2 * self.genus => {}
                Generator::Surface(l) => {
                    return Err(err(
                        None,
                        format!("{ctx}: surface index {l} out of range 1..{}", 2 * self.genus),
                    ))
                }
                Generator::Arc(_) => {
                    return Err(err(None, format!("{ctx}: arc letters are not allowed")))
                }
            }
        }
        Ok(())
    }

    /// Deterministic printer; `parse_diagram(print(d)) == d`.
    pub fn print(&self) -> String {
        let mut out = String::new();
        out.push_str("tkadiag 1\n");
        out.push_str(&format!("genus {}\n", self.genus));
        out.push_str(&format!("arcs {}\n", self.arcs.len()));
        for (k, d) in self.arcs.iter().enumerate() {
            out.push_str(&format!("arc {} : {}\n", k + 1, surface_word_text(d)));
        }
        for (c, cr) in self.crossings.iter().enumerate() {
            out.push_str(&format!(
                "crossing {} : sign {} over {} in {} out {} transport {}\n",
                c + 1,
                if cr.sign > 0 { "+1" } else { "-1" },
                cr.over,
                cr.under_in,
                cr.under_out,
                surface_word_text(&cr.transport)
            ));
        }
        out
    }

    /// Compile to the Wirtinger presentation with the fixed φ.
    ///
    /// Relator per crossing c: r_c = a_j · w_c^{-1} · (D_i a_i D_i^{-1})^{-1} · w_c
    /// with w_c = (u_c a_o u_c^{-1})^{ε_c} and D_i the full decoration word of
    /// the dying under arc i. Transporting the under-in meridian across the
    /// marks it passed keeps Δ invariant under sliding a handle curve across a
    /// crossing (the move becomes a unit row and column scaling of the
    /// Jacobian); with a bare a_i that move changes Δ.
    pub fn wirtinger(&self) -> Presentation {
        let n = self.n();
        if n == 0 {
            return Presentation {
                n: 1,
                g: self.genus,
                relators: Vec::new(),
            };
        }
        let mut relators = Vec::new();
        for cr in &self.crossings {
            let a_over = Word::gen(Generator::Arc(cr.over), 1);
            let w = a_over.conjugate_by(&cr.transport).pow(cr.sign as i32);
            let d_in = &self.arcs[cr.under_in - 1];
            let m_in = Word::gen(Generator::Arc(cr.under_in), 1).conjugate_by(d_in);
            let r = Word::gen(Generator::Arc(cr.under_out), 1)
                .concat(&w.inverse())
                .concat(&m_in.inverse())
                .concat(&w);
            relators.push(r);
        }
        Presentation {
            n,
            g: self.genus,
            relators,
        }
    }
}

/// Render a surface word in diagram-file letters (x1/X1), "-" when empty.
fn surface_word_text(w: &Word) -> String {
    if w.is_identity() {
        return "-".to_string();
    }
    let mut parts = Vec::new();
    for &(g, e) in w.letters() {
        let l = match g {
            Generator::Surface(l) => l,
            Generator::Arc(_) => unreachable!("validated surface word"),
        };
        parts.push(format!("{}{}", if e > 0 { "x" } else { "X" }, l));
    }
    parts.join(" ")
}

/// Parse a surface word in diagram-file letters (x1 X2 ...), "-" = empty.
fn parse_surface_word(s: &str, line: usize) -> Result<Word, DiagramError> {
    let s = s.trim();
    if s == "-" || s.is_empty() {
        return Ok(Word::identity());
    }
    let mut raw: Vec<Letter> = Vec::new();
    for tok in s.split_whitespace() {
        let mut chars = tok.chars();
        let head = chars.next().unwrap();
        let idx: usize = chars
            .as_str()
            .parse()
            .map_err(|_| err(Some(line), format!("bad surface letter {tok:?}")))?;
        if idx == 0 {
            return Err(err(Some(line), format!("bad surface letter {tok:?}")));
        }
        let exp = match head {
            'x' => 1,
            'X' => -1,
            _ => return Err(err(Some(line), format!("bad surface letter {tok:?}"))),
        };
        raw.push((Generator::Surface(idx), exp));
    }
    Ok(free_reduce(&raw))
}

/// Parse the tkadiag v1 file format and validate the result.
pub fn parse_diagram(text: &str) -> Result<MarkedDiagram, DiagramError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let mut expect = |what: &str| -> Result<(usize, String), DiagramError> {
        lines
            .next()
            .map(|(i, l)| (i, l.to_string()))
            .ok_or_else(|| err(None, format!("unexpected end of file, expected {what}")))
    };

    let (ln, magic) = expect("magic line \"tkadiag 1\"")?;
    if magic != "tkadiag 1" {
        return Err(err(Some(ln), format!("bad magic line {magic:?}, expected \"tkadiag 1\"")));
    }
    let (ln, genus_line) = expect("genus line")?;
    let genus: usize = genus_line
        .strip_prefix("genus ")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| err(Some(ln), format!("bad genus line {genus_line:?}")))?;
    let (ln, arcs_line) = expect("arcs line")?;
    let n_arcs: usize = arcs_line
        .strip_prefix("arcs ")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| err(Some(ln), format!("bad arcs line {arcs_line:?}")))?;

    let mut arcs: Vec<Word> = Vec::with_capacity(n_arcs);
    for k in 1..=n_arcs {
        let (ln, line) = expect("arc line")?;
        let rest = line
            .strip_prefix(&format!("arc {k} "))
            .and_then(|r| r.trim_start().strip_prefix(':'))
            .ok_or_else(|| err(Some(ln), format!("expected \"arc {k} : <word>\", found {line:?}")))?;
        arcs.push(parse_surface_word(rest, ln)?);
    }

    let mut crossings = Vec::new();
    let mut c = 0usize;
    for (ln, line) in lines {
        c += 1;
        let rest = line
            .strip_prefix(&format!("crossing {c} "))
            .and_then(|r| r.trim_start().strip_prefix(':'))
            .ok_or_else(|| {
                err(Some(ln), format!("expected \"crossing {c} : ...\", found {line:?}"))
            })?;
        crossings.push(parse_crossing(rest, ln)?);
    }

    let d = MarkedDiagram {
        genus,
        arcs,
        crossings,
    };
    d.validate()?;
    Ok(d)
}

fn parse_crossing(rest: &str, line: usize) -> Result<Crossing, DiagramError> {
    let toks: Vec<&str> = rest.split_whitespace().collect();
    // sign <s> over <o> in <i> out <j> transport <word...>
    let bad = |msg: &str| err(Some(line), format!("bad crossing: {msg}"));
    if toks.len() < 9 {
        return Err(bad("expected: sign <±1> over <o> in <i> out <j> transport <word|->"));
    }
    let field = |k: usize, name: &str| -> Result<(), DiagramError> {
        if toks[k] != name {
            Err(bad(&format!("expected keyword {name:?}, found {:?}", toks[k])))
        } else {
            Ok(())
        }
    };
    field(0, "sign")?;
    let sign = match toks[1] {
        "+1" | "1" => 1i8,
        "-1" => -1i8,
        other => return Err(bad(&format!("bad sign {other:?}"))),
    };
    field(2, "over")?;
    let over: usize = toks[3].parse().map_err(|_| bad("bad over index"))?;
    field(4, "in")?;
    let under_in: usize = toks[5].parse().map_err(|_| bad("bad in index"))?;
    field(6, "out")?;
    let under_out: usize = toks[7].parse().map_err(|_| bad("bad out index"))?;
    field(8, "transport")?;
    let transport = parse_surface_word(&toks[9..].join(" "), line)?;
    Ok(Crossing {
        sign,
        over,
        under_in,
        under_out,
        transport,
    })
}

// ---------------------------------------------------------------------------
// Built-in corpus
// ---------------------------------------------------------------------------

/// The built-in diagram corpus as (name, file text) pairs.
pub fn corpus_files() -> Vec<(&'static str, &'static str)> {
    vec![
        ("unknot", UNKNOT),
        ("unknot_r1", UNKNOT_R1),
        ("unknot_r2", UNKNOT_R2),
        ("virtual_trefoil", VIRTUAL_TREFOIL),
        ("virtual_trefoil_r1", VIRTUAL_TREFOIL_R1),
        ("virtual_trefoil_r2", VIRTUAL_TREFOIL_R2),
        ("virtual_trefoil_r3a", VIRTUAL_TREFOIL_R3A),
        ("virtual_trefoil_r3b", VIRTUAL_TREFOIL_R3B),
        ("virtual_trefoil_decshift", VIRTUAL_TREFOIL_DECSHIFT),
        ("classical_trefoil", CLASSICAL_TREFOIL),
        ("figure_eight", FIGURE_EIGHT),
        ("torus_t25", TORUS_T25),
    ]
}

/// Parse one corpus diagram by name.
pub fn corpus_diagram(name: &str) -> Option<MarkedDiagram> {
    corpus_files()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse_diagram(text).expect("corpus diagram is valid"))
}

/// All corpus diagrams, parsed.
pub fn corpus() -> Vec<(&'static str, MarkedDiagram)> {
    corpus_files()
        .into_iter()
        .map(|(n, text)| (n, parse_diagram(text).expect("corpus diagram is valid")))
        .collect()
}

/// Move pairs (name, d, d'): both diagrams present the same knot, differing
/// by one Reidemeister move or one decoration shift. Δ must agree up to a
/// unit monomial across each pair; this is the executable arbiter for the
/// Wirtinger and transport conventions.
pub fn reidemeister_pairs() -> Vec<(&'static str, MarkedDiagram, MarkedDiagram)> {
    let d = |name: &str| corpus_diagram(name).unwrap();
    vec![
        ("unknot_r1", d("unknot"), d("unknot_r1")),
        ("virtual_trefoil_r1", d("virtual_trefoil"), d("virtual_trefoil_r1")),
        ("unknot_r2", d("unknot"), d("unknot_r2")),
        ("virtual_trefoil_r2", d("virtual_trefoil"), d("virtual_trefoil_r2")),
        ("virtual_trefoil_r3", d("virtual_trefoil_r3a"), d("virtual_trefoil_r3b")),
        (
            "virtual_trefoil_decshift",
            d("virtual_trefoil"),
            d("virtual_trefoil_decshift"),
        ),
    ]
}

/// 0-crossing unknot on the torus.
const UNKNOT: &str = "\
tkadiag 1
genus 1
arcs 1
arc 1 : -
";

/// Unknot with one R1 kink in a disk.
const UNKNOT_R1: &str = "\
tkadiag 1
genus 1
arcs 1
arc 1 : -
crossing 1 : sign +1 over 1 in 1 out 1 transport -
";

/// Unknot with an R2 poke in a disk: the big arc passes over the small one
/// twice with opposite signs.
const UNKNOT_R2: &str = "\
tkadiag 1
genus 1
arcs 2
arc 1 : -
arc 2 : -
crossing 1 : sign +1 over 1 in 1 out 2 transport -
crossing 2 : sign -1 over 1 in 2 out 1 transport -
";

/// The virtual trefoil on the torus (Figure 1 representative). Arc 2 runs
/// over both crossings; its decoration crosses both handle curves and comes
/// back, so the transports are x1 and (reduced) x2.
const VIRTUAL_TREFOIL: &str = "\
tkadiag 1
genus 1
arcs 2
arc 1 : -
arc 2 : x1 X1 x2 X2
crossing 1 : sign +1 over 2 in 2 out 1 transport x1
crossing 2 : sign +1 over 2 in 1 out 2 transport x2
";

/// Virtual trefoil with an R1 kink added on arc 1 (mark-free region):
/// arc 1 splits into arcs 1 and 3.
const VIRTUAL_TREFOIL_R1: &str = "\
tkadiag 1
genus 1
arcs 3
arc 1 : -
arc 2 : x1 X1 x2 X2
arc 3 : -
crossing 1 : sign +1 over 2 in 2 out 1 transport x1
crossing 2 : sign +1 over 2 in 3 out 2 transport x2
crossing 3 : sign -1 over 3 in 1 out 3 transport -
";

/// Virtual trefoil with an R2 finger of arc 1 poked under arc 2:
/// arc 1 splits into arcs 1, 3, 4; both new crossings attach to arc 2 in
/// mark-free regions (transports reduce to empty).
const VIRTUAL_TREFOIL_R2: &str = "\
tkadiag 1
genus 1
arcs 4
arc 1 : -
arc 2 : x1 X1 x2 X2
arc 3 : -
arc 4 : -
crossing 1 : sign +1 over 2 in 2 out 1 transport x1
crossing 2 : sign +1 over 2 in 4 out 2 transport x2
crossing 3 : sign +1 over 2 in 1 out 3 transport -
crossing 4 : sign -1 over 2 in 3 out 4 transport -
";

/// R3 pair, before-state: a finger of arc 1 passes in front of crossing 1,
/// going under the dying end of arc 2 (crossing 3, mark-free transport) and
/// then under the over-strand of crossing 1 just before its attachment
/// (crossing 4, transport x1). Crossings 3 and 4 together with crossing 1
/// bound a mark-free triangle.
const VIRTUAL_TREFOIL_R3A: &str = "\
tkadiag 1
genus 1
arcs 4
arc 1 : -
arc 2 : x1 X1 x2 X2
arc 3 : -
arc 4 : -
crossing 1 : sign +1 over 2 in 2 out 1 transport x1
crossing 2 : sign +1 over 2 in 4 out 2 transport x2
crossing 3 : sign -1 over 2 in 1 out 3 transport -
crossing 4 : sign +1 over 2 in 3 out 4 transport x1
";

/// R3 pair, after-state: the finger of virtual_trefoil_r3a slid across
/// crossing 1. The two finger crossings swap order along the finger, each
/// attachment moves past crossing 1 along its strand (one now sits on arc 1's
/// initial segment), and each crossing keeps its sign.
const VIRTUAL_TREFOIL_R3B: &str = "\
tkadiag 1
genus 1
arcs 4
arc 1 : -
arc 2 : x1 X1 x2 X2
arc 3 : -
arc 4 : -
crossing 1 : sign +1 over 2 in 2 out 1 transport x1
crossing 2 : sign +1 over 2 in 4 out 2 transport x2
crossing 3 : sign +1 over 2 in 1 out 3 transport x1
crossing 4 : sign -1 over 1 in 3 out 4 transport -
";

/// Virtual trefoil after sliding handle curve 2 across crossing 1: four new
/// marks appear (one on each strand end at the crossing), rewriting the
/// decorations of arcs 1 and 2 and the transport of crossing 1.
const VIRTUAL_TREFOIL_DECSHIFT: &str = "\
tkadiag 1
genus 1
arcs 2
arc 1 : X2
arc 2 : x1 x2 X2 X1 x2 X2 x2
crossing 1 : sign +1 over 2 in 2 out 1 transport x1 x2
crossing 2 : sign +1 over 2 in 1 out 2 transport x2
";

/// Classical right-handed trefoil drawn in a disk on the torus.
const CLASSICAL_TREFOIL: &str = "\
tkadiag 1
genus 1
arcs 3
arc 1 : -
arc 2 : -
arc 3 : -
crossing 1 : sign +1 over 3 in 1 out 2 transport -
crossing 2 : sign +1 over 1 in 2 out 3 transport -
crossing 3 : sign +1 over 2 in 3 out 1 transport -
";

/// Classical figure-eight knot drawn in a disk on the torus.
const FIGURE_EIGHT: &str = "\
tkadiag 1
genus 1
arcs 4
arc 1 : -
arc 2 : -
arc 3 : -
arc 4 : -
crossing 1 : sign +1 over 3 in 1 out 2 transport -
crossing 2 : sign -1 over 4 in 2 out 3 transport -
crossing 3 : sign +1 over 1 in 3 out 4 transport -
crossing 4 : sign -1 over 2 in 4 out 1 transport -
";

/// Classical (2,5) torus knot drawn in a disk on the torus.
const TORUS_T25: &str = "\
tkadiag 1
genus 1
arcs 5
arc 1 : -
arc 2 : -
arc 3 : -
arc 4 : -
arc 5 : -
crossing 1 : sign +1 over 4 in 1 out 2 transport -
crossing 2 : sign +1 over 5 in 2 out 3 transport -
crossing 3 : sign +1 over 1 in 3 out 4 transport -
crossing 4 : sign +1 over 2 in 4 out 5 transport -
crossing 5 : sign +1 over 3 in 5 out 1 transport -
";
