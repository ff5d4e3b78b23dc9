//! Rank conditions on faces of `Q`, the minor test, and failure certificates.

use num_traits::Zero;
use serde_json::{json, Value};

use super::SparseSystem;
use crate::criteria::{strict_monotonicity_equal, MonotonicityVerdict, Witness};
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::mixed::MixedVolumeReport;
use crate::polytope::{touches_unchecked, Polytope};
use crate::rational::{fmt_rat, Int, Point, Rat};

/// Ranks of `C_ℱ` and `Ā_ℱ` for one proper face `F` of `Q`, `ℱ = 𝒜 ∩ F`.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceRankReport {
    /// 1-based column labels of `ℱ`.
    pub labels: Vec<usize>,
    pub normal: Point,
    pub dim: usize,
    pub rank_c: usize,
    pub rank_abar: usize,
    pub pass: bool,
}

impl FaceRankReport {
    fn columns(&self) -> Vec<usize> {
        self.labels.iter().map(|l| l - 1).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "labels": self.labels,
            "normal": self.normal.iter().map(fmt_rat).collect::<Vec<_>>(),
            "dim": self.dim,
            "rank_c": self.rank_c,
            "rank_abar": self.rank_abar,
            "pass": self.pass,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BerReport {
    pub pass: bool,
    pub faces: Vec<FaceRankReport>,
    pub conclusion: String,
}

impl BerReport {
    pub fn failing(&self) -> impl Iterator<Item = &FaceRankReport> {
        self.faces.iter().filter(|f| !f.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pass": self.pass,
            "conclusion": self.conclusion,
            "faces": self.faces.iter().map(FaceRankReport::to_json).collect::<Vec<_>>(),
        })
    }
}

fn full_dim_q(s: &SparseSystem) -> Result<Polytope> {
    let q = s.support_polytope()?;
    if q.dim() < s.n() {
        return Err(Error::Precondition(format!(
            "the support spans a polytope of dimension {} < {}",
            q.dim(),
            s.n()
        )));
    }
    Ok(q)
}

fn labels_str(labels: &[usize]) -> String {
    let parts: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Checks `rank C_ℱ ≥ rank Ā_ℱ` on every proper face of `Q` (faces in lattice order).
pub fn ber_check(s: &SparseSystem) -> Result<BerReport> {
    let q = full_dim_q(s)?;
    let (c, _, a_bar) = s.matrices();
    let mut faces = Vec::new();
    for f in q.proper_faces() {
        let cols = s.face_support(&f.normal)?;
        let rank_c = c.select_columns(&cols).rank();
        let rank_abar = a_bar.select_columns(&cols).rank();
        if rank_abar != f.dim + 1 {
            return Err(Error::CrossCheck(format!(
                "rank of the augmented exponents on a {}-face is {rank_abar}",
                f.dim
            )));
        }
        faces.push(FaceRankReport {
            labels: cols.iter().map(|j| j + 1).collect(),
            normal: f.normal.clone(),
            dim: f.dim,
            rank_c,
            rank_abar,
            pass: rank_c >= rank_abar,
        });
    }
    let bound = s.volume_bound()?;
    let failing: Vec<String> = faces.iter().filter(|f| !f.pass).map(|f| labels_str(&f.labels)).collect();
    let pass = failing.is_empty();
    let conclusion = if pass {
        format!(
            "rank condition holds on every proper face; if the system is non-degenerate it has exactly \
             n!Vol(Q) = {bound} isolated solutions in the torus counted with multiplicity"
        )
    } else {
        format!(
            "rank condition fails on {}: the system has strictly less than n!Vol(Q) isolated solutions or \
             infinitely many (n!Vol(Q) = {bound})",
            failing.join(", ")
        )
    };
    Ok(BerReport { pass, faces, conclusion })
}

fn next_combination(idx: &mut [usize], l: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < l - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The first vanishing maximal minor of `C` (0-based columns), if any.
pub fn vanishing_minor(s: &SparseSystem) -> Option<Vec<usize>> {
    let c = s.coefficients();
    let (n, l) = (c.rows(), c.cols());
    if l < n {
        return Some((0..l).collect());
    }
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        if c.select_columns(&idx).determinant().expect("square").is_zero() {
            return Some(idx);
        }
        if !next_combination(&mut idx, l) {
            return None;
        }
    }
}

/// True iff no maximal minor of `C` vanishes; then the count is the maximal `n!Vol(Q)`.
pub fn cramer_check(s: &SparseSystem) -> Result<bool> {
    full_dim_q(s)?;
    Ok(vanishing_minor(s).is_none())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimplicialVerdict {
    /// Setting applies and the rank condition holds: the system is non-degenerate.
    NonDegenerate,
    /// Setting applies but the rank condition fails somewhere.
    Fails,
    /// Some `Pᵢ ≠ Q`, or some proper face is not a simplex meeting `𝒜` only at its vertices.
    NotApplicable,
}

impl SimplicialVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            SimplicialVerdict::NonDegenerate => "yes",
            SimplicialVerdict::Fails => "no",
            SimplicialVerdict::NotApplicable => "not-applicable",
        }
    }
}

pub fn simplicial_nondegeneracy_check(s: &SparseSystem) -> Result<SimplicialVerdict> {
    let q = s.support_polytope()?;
    if q.dim() < s.n() {
        return Ok(SimplicialVerdict::NotApplicable);
    }
    let all_q = s.newton_polytopes()?.iter().all(|p| p.sorted_vertices() == q.sorted_vertices());
    if !all_q {
        return Ok(SimplicialVerdict::NotApplicable);
    }
    for f in q.proper_faces() {
        if f.vertices.len() != f.dim + 1 || s.face_support(&f.normal)?.len() != f.dim + 1 {
            return Ok(SimplicialVerdict::NotApplicable);
        }
    }
    Ok(if ber_check(s)?.pass {
        SimplicialVerdict::NonDegenerate
    } else {
        SimplicialVerdict::Fails
    })
}

/// Certificate linking a failing face to strict monotonicity.
///
/// Rows `I` of `L` span the left kernel of `C_ℱ`, so in `L·C` the block on rows `I` and
/// columns `ℱ` vanishes and the new Newton polytopes `P'ᵢ`, `i ∈ I`, miss `F`.
#[derive(Clone, Debug)]
pub struct FailureLinkage {
    pub face: FaceRankReport,
    pub l: RatMatrix,
    /// 0-based rows whose polynomials avoid `F` after the transformation.
    pub rows: Vec<usize>,
    pub transformed: SparseSystem,
    /// Equal-polytope criterion on the transformed system.
    pub verdict: MonotonicityVerdict,
}

impl FailureLinkage {
    pub fn to_json(&self) -> Value {
        json!({
            "face": self.face.to_json(),
            "L": self.l.to_strings(),
            "non_touching_rows": self.rows.iter().map(|r| r + 1).collect::<Vec<_>>(),
            "transformed_C": self.transformed.coefficients().to_strings(),
            "verdict": self.verdict.to_json(),
        })
    }
}

pub fn failure_linkage(s: &SparseSystem, face: &FaceRankReport) -> Result<FailureLinkage> {
    if face.pass {
        return Err(Error::InvalidArgument("the rank condition holds on this face".into()));
    }
    let n = s.n();
    if s.coefficients().rank() < n {
        return Err(Error::Precondition("C has rank < n; some combination of the equations vanishes".into()));
    }
    let q = full_dim_q(s)?;
    let cols = face.columns();
    let kernel = s.coefficients().select_columns(&cols).left_null_space();
    let mut rows: Vec<Vec<Rat>> = kernel.clone();
    for k in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[k] = Rat::from_integer(Int::from(1));
        rows.push(e);
        if RatMatrix::from_rows(rows.clone())?.rank() < rows.len() {
            rows.pop();
        }
    }
    let l = RatMatrix::from_rows(rows)?;
    let transformed = s.left_multiply(&l)?;
    let avoid: Vec<usize> = (0..kernel.len()).collect();
    if avoid.len() < n - face.dim {
        return Err(Error::CrossCheck(format!(
            "left kernel of C_F has dimension {} < codim F = {}",
            avoid.len(),
            n - face.dim
        )));
    }
    let ps = transformed.newton_polytopes()?;
    for &i in &avoid {
        if touches_unchecked(&ps[i], &q, &face.normal) {
            return Err(Error::CrossCheck(format!("transformed polynomial {} still touches the face", i + 1)));
        }
    }
    let touching = (0..n).filter(|&i| touches_unchecked(&ps[i], &q, &face.normal)).count();
    if touching > face.dim {
        return Err(Error::CrossCheck("failing face is touched by too many transformed polynomials".into()));
    }
    let verdict = strict_monotonicity_equal(&ps, &q)?;
    if !verdict.strict {
        return Err(Error::CrossCheck("equal-polytope criterion misses the failing face".into()));
    }
    Ok(FailureLinkage {
        face: face.clone(),
        l,
        rows: avoid,
        transformed,
        verdict,
    })
}

/// Everything the tool reports about a system.
#[derive(Clone, Debug)]
pub struct SystemReport {
    pub n: usize,
    pub num_points: usize,
    pub q_dim: usize,
    pub bkk: Int,
    pub volume_bound: Int,
    pub mixed_volume: MixedVolumeReport,
    pub criterion: MonotonicityVerdict,
    /// `None` when `dim Q < n`.
    pub ber: Option<BerReport>,
    pub cramer: Option<bool>,
    pub simplicial: SimplicialVerdict,
    pub linkage: Option<FailureLinkage>,
    pub conclusions: Vec<String>,
    pub warnings: Vec<String>,
}

/// Runs every check and cross-validates them against each other.
pub fn analyze_system(s: &SparseSystem, seed: u64) -> Result<SystemReport> {
    let n = s.n();
    let q = s.support_polytope()?;
    let ps = s.newton_polytopes()?;
    let mv = s.bkk_report(seed)?;
    let bkk = mv.normalized.to_integer();
    let volume_bound = s.volume_bound()?;
    let criterion = strict_monotonicity_equal(&ps, &q)?;
    let mut conclusions = vec![format!(
        "at most {bkk} isolated solutions in the torus counted with multiplicity (BKK bound)"
    )];
    if q.dim() < n {
        conclusions.push(format!("the support polytope has dimension {} < {n}; n!Vol(Q) = 0", q.dim()));
        return Ok(SystemReport {
            n,
            num_points: s.points().len(),
            q_dim: q.dim(),
            bkk,
            volume_bound,
            mixed_volume: mv,
            criterion,
            ber: None,
            cramer: None,
            simplicial: SimplicialVerdict::NotApplicable,
            linkage: None,
            conclusions,
            warnings: s.warnings.clone(),
        });
    }
    if bkk > volume_bound {
        return Err(Error::CrossCheck(format!("BKK bound {bkk} exceeds n!Vol(Q) = {volume_bound}")));
    }
    if (bkk < volume_bound) != criterion.strict {
        return Err(Error::CrossCheck(format!(
            "mixed volume {bkk} vs n!Vol(Q) = {volume_bound} disagrees with the face criterion (strict = {})",
            criterion.strict
        )));
    }
    if let Witness::Face { dim, touching, .. } = &criterion.witness {
        conclusions.push(format!(
            "BKK bound {bkk} < n!Vol(Q) = {volume_bound}: a {dim}-dimensional face of Q is touched by only {} Newton polytope(s)",
            touching.len()
        ));
    }
    let ber = ber_check(s)?;
    let cramer = cramer_check(s)?;
    if ber.pass && bkk != volume_bound {
        return Err(Error::CrossCheck("rank condition holds but the BKK bound is below n!Vol(Q)".into()));
    }
    if cramer && !ber.pass {
        return Err(Error::CrossCheck("no vanishing maximal minor, yet a rank condition fails".into()));
    }
    conclusions.push(ber.conclusion.clone());
    if !ber.pass && bkk == volume_bound {
        conclusions.push(format!(
            "the BKK bound equals n!Vol(Q) = {volume_bound} but a rank condition fails, so the system is degenerate"
        ));
    }
    if cramer {
        conclusions.push(format!(
            "no maximal minor of C vanishes: the system has the maximal number n!Vol(Q) = {volume_bound} of isolated \
             solutions in the torus counted with multiplicity"
        ));
    }
    let simplicial = simplicial_nondegeneracy_check(s)?;
    if simplicial == SimplicialVerdict::NonDegenerate {
        conclusions.push(format!(
            "all Newton polytopes equal Q, whose proper faces are simplices meeting the support only at vertices: \
             the system is non-degenerate with exactly {volume_bound} solutions counted with multiplicity"
        ));
    }
    let linkage = match ber.failing().next() {
        Some(f) if s.coefficients().rank() == n => Some(failure_linkage(s, f)?),
        _ => None,
    };
    Ok(SystemReport {
        n,
        num_points: s.points().len(),
        q_dim: q.dim(),
        bkk,
        volume_bound,
        mixed_volume: mv,
        criterion,
        ber: Some(ber),
        cramer: Some(cramer),
        simplicial,
        linkage,
        conclusions,
        warnings: s.warnings.clone(),
    })
}

impl SystemReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "points": self.num_points,
            "support_dim": self.q_dim,
            "bkk_bound": self.bkk.to_string(),
            "volume_bound": self.volume_bound.to_string(),
            "mixed_volume": self.mixed_volume.to_json(),
            "strict_inequality": self.criterion.strict,
            "criterion": self.criterion.to_json(),
            "ber_pass": self.ber.as_ref().map(|b| b.pass),
            "faces": self.ber.as_ref().map(|b| b.faces.iter().map(FaceRankReport::to_json).collect::<Vec<_>>()),
            "cramer_pass": self.cramer,
            "simplicial_nondegenerate": self.simplicial.as_str(),
            "linkage": self.linkage.as_ref().map(FailureLinkage::to_json),
            "conclusions": self.conclusions,
            "warnings": self.warnings,
        })
    }

    /// Plain-text rendering with an aligned face table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{:<26}{}\n", "variables", self.n));
        out.push_str(&format!("{:<26}{}\n", "support points", self.num_points));
        out.push_str(&format!("{:<26}{}\n", "BKK bound", self.bkk));
        out.push_str(&format!("{:<26}{}\n", "n!Vol(Q)", self.volume_bound));
        let opt = |b: Option<bool>| b.map_or("n/a".to_string(), |b| if b { "pass" } else { "FAIL" }.to_string());
        out.push_str(&format!("{:<26}{}\n", "ber check", opt(self.ber.as_ref().map(|b| b.pass))));
        out.push_str(&format!("{:<26}{}\n", "cramer check", opt(self.cramer)));
        out.push_str(&format!("{:<26}{}\n", "simplicial nondegenerate", self.simplicial.as_str()));
        if let Some(ber) = &self.ber {
            let rows: Vec<[String; 5]> = ber
                .faces
                .iter()
                .map(|f| {
                    [
                        labels_str(&f.labels),
                        f.dim.to_string(),
                        f.rank_c.to_string(),
                        f.rank_abar.to_string(),
                        if f.pass { "ok" } else { "FAIL" }.to_string(),
                    ]
                })
                .collect();
            let head = ["face", "dim", "rank C_F", "rank A_F", ""];
            let mut w = head.map(str::len);
            for r in &rows {
                for k in 0..5 {
                    w[k] = w[k].max(r[k].len());
                }
            }
            out.push('\n');
            let line = |r: [&str; 5]| {
                format!("{:<a$}  {:>b$}  {:>c$}  {:>d$}  {}\n", r[0], r[1], r[2], r[3], r[4], a = w[0], b = w[1], c = w[2], d = w[3])
            };
            out.push_str(&line(head));
            for r in &rows {
                out.push_str(&line([&r[0], &r[1], &r[2], &r[3], &r[4]]));
            }
        }
        if let Some(link) = &self.linkage {
            out.push_str(&format!(
                "\nafter left-multiplying by L, polynomials {:?} avoid face {}\n",
                link.rows.iter().map(|r| r + 1).collect::<Vec<_>>(),
                labels_str(&link.face.labels)
            ));
        }
        out.push('\n');
        for c in &self.conclusions {
            out.push_str(&format!("* {c}\n"));
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}
