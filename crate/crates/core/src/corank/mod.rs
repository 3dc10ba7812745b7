//! Truncated coranks of polynomial-coefficient operators on `C[x,y]`.
//!
//! For a source bound `d` and observation bound `m`, the truncated corank is
//! `dim V_m / (D(V_d) ∩ V_m)` where `V_k` is the space of polynomials of total
//! degree at most `k`. Image vectors are written in coordinates ordered by
//! descending degree, so one echelon form per `d` answers every `m` at once:
//! an echelon row lies in `V_m` exactly when its pivot monomial has degree
//! `≤ m`.
//!
//! Each truncated value is a lower bound for the corank on the full ring
//! once it has stabilized in `d`. The ladder never claims an exact answer
//! unless [`structure::exact_corank`] can decide one.

pub mod elimination;
pub mod structure;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{GaussianRational, Monomial, Poly2, WeylOp};
use elimination::{fraction_free_echelon, integer_rows, Echelon};
pub use structure::{exact_corank, Corank, ExactCorank};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorankError {
    #[error("deg f^{power} = {degree} exceeds the observation degree {m}")]
    DegreeOverflow { power: u32, degree: u32, m: u32 },
    #[error("separating function must have real coefficients")]
    NonRealFunction,
    #[error("at least one power is required (k ≥ 1)")]
    EmptyPowerList,
    #[error("m_max = {m_max} exceeds d_max = {d_max}")]
    BadWindow { m_max: u32, d_max: u32 },
}

/// Monomials of total degree `≤ d`: degree ascending, `x`-power descending
/// within a degree (`1, x, y, x², xy, y², …`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationBasis {
    degree: u32,
    monomials: Vec<Monomial>,
}

impl TruncationBasis {
    pub fn new(degree: u32) -> Self {
        let monomials = (0..=degree)
            .flat_map(|t| (0..=t).rev().map(move |a| Monomial::new(a, t - a)))
            .collect();
        Self { degree, monomials }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// `(d+1)(d+2)/2`
    pub fn dimension(degree: u32) -> usize {
        ((degree as usize + 1) * (degree as usize + 2)) / 2
    }

    pub fn index_of(&self, m: Monomial) -> Option<usize> {
        if m.degree() > self.degree {
            return None;
        }
        let t = m.degree() as usize;
        Some(t * (t + 1) / 2 + (t - m.a as usize))
    }

    /// Coordinates of `p` in this basis; `None` if `p` does not fit.
    pub fn coordinates(&self, p: &Poly2) -> Option<Vec<GaussianRational>> {
        let mut v = vec![GaussianRational::zero(); self.len()];
        for (m, c) in p.terms() {
            v[self.index_of(*m)?] = c.clone();
        }
        Some(v)
    }
}

/// Dense exact matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix {
    pub nrows: usize,
    pub ncols: usize,
    data: Vec<GaussianRational>,
}

impl ExactMatrix {
    pub fn get(&self, i: usize, j: usize) -> &GaussianRational {
        &self.data[i * self.ncols + j]
    }

    pub fn column(&self, j: usize) -> Vec<GaussianRational> {
        (0..self.nrows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.nrows).all(|i| (0..self.ncols).all(|j| i == j || self.get(i, j).is_zero()))
    }
}

/// Matrix of `D: V_d → V_t` with `t = d + max(0, max(a+b-p-q))`.
#[derive(Clone, Debug)]
pub struct AssembledMatrix {
    pub source: TruncationBasis,
    pub target: TruncationBasis,
    pub matrix: ExactMatrix,
}

pub fn target_degree(op: &WeylOp, d: u32) -> u32 {
    let shift = op.degree_shift().unwrap_or(0).max(0);
    d + shift as u32
}

pub fn assemble_matrix(op: &WeylOp, d: u32) -> AssembledMatrix {
    let source = TruncationBasis::new(d);
    let target = TruncationBasis::new(target_degree(op, d));
    let mut data = vec![GaussianRational::zero(); target.len() * source.len()];
    for (j, m) in source.monomials().iter().enumerate() {
        let image = op.apply(&Poly2::monomial(*m, GaussianRational::from_int(1)));
        for (tm, c) in image.terms() {
            let i = target.index_of(*tm).expect("image fits the target truncation");
            data[i * source.len() + j] = c.clone();
        }
    }
    let matrix = ExactMatrix { nrows: target.len(), ncols: source.len(), data };
    AssembledMatrix { source, target, matrix }
}

/// The echelon form of `D(V_d)` in descending-degree coordinates.
#[derive(Clone, Debug)]
pub struct RangeProfile {
    pub d: u32,
    pub target: TruncationBasis,
    echelon: Echelon,
}

impl RangeProfile {
    pub fn new(op: &WeylOp, d: u32) -> Self {
        let assembled = assemble_matrix(op, d);
        let n = assembled.target.len();
        let rows: Vec<Vec<GaussianRational>> = (0..assembled.matrix.ncols)
            .map(|j| {
                let col = assembled.matrix.column(j);
                (0..n).map(|c| col[n - 1 - c].clone()).collect()
            })
            .filter(|row: &Vec<GaussianRational>| row.iter().any(|c| !c.is_zero()))
            .collect();
        let echelon = fraction_free_echelon(integer_rows(&rows));
        Self { d, target: assembled.target, echelon }
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    fn pivot_monomial(&self, col: usize) -> Monomial {
        self.target.monomials()[self.target.len() - 1 - col]
    }

    /// `dim(D(V_d) ∩ V_m)`
    pub fn intersection_dim(&self, m: u32) -> usize {
        self.echelon
            .pivots
            .iter()
            .filter(|&&c| self.pivot_monomial(c).degree() <= m)
            .count()
    }

    pub fn codim(&self, m: u32) -> usize {
        TruncationBasis::dimension(m) - self.intersection_dim(m)
    }

    /// A basis of `D(V_d) ∩ V_m` in the ascending coordinates of `V_m`.
    pub fn intersection_basis(&self, m: u32) -> Vec<Vec<GaussianRational>> {
        let vm = TruncationBasis::dimension(m);
        let n = self.target.len();
        self.echelon
            .rows
            .iter()
            .zip(&self.echelon.pivots)
            .filter(|(_, &c)| self.pivot_monomial(c).degree() <= m)
            .map(|(row, _)| {
                let mut v = vec![GaussianRational::zero(); vm];
                for (c, entry) in row.iter().enumerate() {
                    let idx = n - 1 - c;
                    if !entry.is_zero() {
                        v[idx] = entry.to_rational();
                    }
                }
                v
            })
            .collect()
    }
}

pub fn truncated_corank(op: &WeylOp, m: u32, d: u32) -> usize {
    RangeProfile::new(op, d).codim(m)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LadderEntry {
    pub m: u32,
    pub d: u32,
    pub codim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LadderRow {
    pub m: u32,
    /// `codim_m(d)` for `d = m..=d_max`.
    pub codims: Vec<usize>,
    /// Common value of the last `window` entries, when they agree.
    pub stabilized: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorankLadder {
    pub operator: String,
    pub m_max: u32,
    pub d_max: u32,
    pub stabilization_window: usize,
    pub entries: Vec<LadderEntry>,
    pub rows: Vec<LadderRow>,
    pub diverging: bool,
    /// Largest stabilized value; a lower bound on the corank over `C[x,y]`.
    pub lower_bound: usize,
    pub exact: Option<ExactCorank>,
    pub verdict: String,
    pub verdict_is_exact: bool,
    pub domain: &'static str,
}

pub const DEFAULT_STABILIZATION_WINDOW: usize = 3;

pub fn corank_ladder(op: &WeylOp, m_max: u32, d_max: u32) -> Result<CorankLadder, CorankError> {
    corank_ladder_with_window(op, m_max, d_max, DEFAULT_STABILIZATION_WINDOW)
}

pub fn corank_ladder_with_window(
    op: &WeylOp,
    m_max: u32,
    d_max: u32,
    window: usize,
) -> Result<CorankLadder, CorankError> {
    if m_max > d_max {
        return Err(CorankError::BadWindow { m_max, d_max });
    }
    let window = window.max(1);
    let profiles: Vec<RangeProfile> = (0..=d_max).map(|d| RangeProfile::new(op, d)).collect();
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    for m in 0..=m_max {
        let codims: Vec<usize> = (m..=d_max).map(|d| profiles[d as usize].codim(m)).collect();
        for (d, c) in (m..=d_max).zip(&codims) {
            entries.push(LadderEntry { m, d, codim: *c });
        }
        let stabilized = (codims.len() >= window)
            .then(|| &codims[codims.len() - window..])
            .filter(|tail| tail.iter().all(|c| *c == tail[0]))
            .map(|tail| tail[0]);
        rows.push(LadderRow { m, codims, stabilized });
    }
    let stab: Vec<Option<usize>> = rows.iter().map(|r| r.stabilized).collect();
    let tail: Option<Vec<usize>> = (stab.len() >= window)
        .then(|| stab[stab.len() - window..].iter().copied().collect())
        .flatten();
    let diverging = tail
        .as_ref()
        .is_some_and(|t| window > 1 && t.windows(2).all(|w| w[0] < w[1]));
    let lower_bound = stab.iter().flatten().copied().max().unwrap_or(0);
    let evidence = match &tail {
        _ if diverging => "diverging (∞)".to_string(),
        Some(t) if t.iter().all(|c| *c == t[0]) => format!("corank = {}", t[0]),
        _ => "inconclusive".to_string(),
    };
    let exact = exact_corank(op);
    let (verdict, verdict_is_exact) = match &exact {
        Some(e) => (e.value.to_string(), true),
        None => (evidence, false),
    };
    Ok(CorankLadder {
        operator: op.to_string(),
        m_max,
        d_max,
        stabilization_window: window,
        entries,
        rows,
        diverging: diverging || exact.as_ref().is_some_and(|e| e.value == Corank::Infinite),
        lower_bound,
        exact,
        verdict,
        verdict_is_exact,
        domain: "polynomial ring C[x,y] (degree truncations)",
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IndependenceCertificate {
    /// Pivot monomial contributed by each power after reduction.
    Independent { pivots: Vec<String> },
    /// `Σ coefficients[i] f^i` lies in the truncated range.
    Dependent { coefficients: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndependenceResult {
    pub independent: bool,
    pub certificate: IndependenceCertificate,
}

/// Checks whether `1, f, …, f^(k-1)` are linearly independent modulo
/// `D(V_d) ∩ V_m`.
pub fn independence_mod_range(
    op: &WeylOp,
    f: &Poly2,
    k: u32,
    m: u32,
    d: u32,
) -> Result<IndependenceResult, CorankError> {
    if k == 0 {
        return Err(CorankError::EmptyPowerList);
    }
    if !f.is_real() {
        return Err(CorankError::NonRealFunction);
    }
    let vm = TruncationBasis::new(m);
    let powers: Vec<Poly2> = (0..k).map(|i| f.pow(i)).collect();
    for (i, p) in powers.iter().enumerate() {
        let degree = p.degree().unwrap_or(0);
        if degree > m {
            return Err(CorankError::DegreeOverflow { power: i as u32, degree, m });
        }
    }
    let profile = RangeProfile::new(op, d);
    // Work in descending coordinates so leading entries are high-degree.
    let n = vm.len();
    let desc = |v: Vec<GaussianRational>| -> Vec<GaussianRational> {
        (0..n).map(|c| v[n - 1 - c].clone()).collect()
    };
    let mut basis: Vec<(usize, Vec<GaussianRational>, Vec<GaussianRational>)> = Vec::new();
    let zero_comb = vec![GaussianRational::zero(); k as usize];
    for row in profile.intersection_basis(m) {
        let row = desc(row);
        let p = row.iter().position(|c| !c.is_zero()).expect("nonzero echelon row");
        basis.push((p, row, zero_comb.clone()));
    }
    let mut pivots = Vec::new();
    for (i, p) in powers.iter().enumerate() {
        let mut v = desc(vm.coordinates(p).expect("degree checked"));
        let mut comb = zero_comb.clone();
        comb[i] = GaussianRational::from_int(1);
        for c in 0..n {
            if v[c].is_zero() {
                continue;
            }
            if let Some((_, row, rc)) = basis.iter().find(|(pc, _, _)| *pc == c) {
                let factor = &v[c] / &row[c];
                for j in c..n {
                    let t = &factor * &row[j];
                    v[j] -= &t;
                }
                for (dst, src) in comb.iter_mut().zip(rc) {
                    let t = &factor * src;
                    *dst -= &t;
                }
            }
        }
        match v.iter().position(|c| !c.is_zero()) {
            Some(p) => {
                pivots.push(vm.monomials()[n - 1 - p]);
                basis.push((p, v, comb));
            }
            None => {
                return Ok(IndependenceResult {
                    independent: false,
                    certificate: IndependenceCertificate::Dependent {
                        coefficients: comb.iter().map(ToString::to_string).collect(),
                    },
                });
            }
        }
    }
    let pivots = pivots
        .into_iter()
        .map(|mono| Poly2::monomial(mono, GaussianRational::from_int(1)).to_string())
        .collect();
    Ok(IndependenceResult {
        independent: true,
        certificate: IndependenceCertificate::Independent { pivots },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_weyl;

    fn op(s: &str) -> WeylOp {
        parse_weyl(s).unwrap()
    }

    #[test]
    fn basis_order_and_size() {
        let b = TruncationBasis::new(2);
        let names: Vec<String> = b
            .monomials()
            .iter()
            .map(|m| Poly2::monomial(*m, GaussianRational::from_int(1)).to_string())
            .collect();
        assert_eq!(names, ["1", "x", "y", "x^2", "x*y", "y^2"]);
        for d in 0..10 {
            assert_eq!(TruncationBasis::new(d).len(), TruncationBasis::dimension(d));
            let b = TruncationBasis::new(d);
            for (i, m) in b.monomials().iter().enumerate() {
                assert_eq!(b.index_of(*m), Some(i));
            }
        }
    }

    #[test]
    fn dx_matrix_d1() {
        let a = assemble_matrix(&op("dx"), 1);
        assert_eq!((a.matrix.nrows, a.matrix.ncols), (3, 3));
        let one = GaussianRational::from_int(1);
        for i in 0..3 {
            for j in 0..3 {
                let expected = if (i, j) == (0, 1) { one.clone() } else { GaussianRational::zero() };
                assert_eq!(a.matrix.get(i, j), &expected);
            }
        }
        assert_eq!(RangeProfile::new(&op("dx"), 1).rank(), 1);
    }

    #[test]
    fn euler_and_xdx_are_diagonal() {
        let euler = assemble_matrix(&op("x*dx + y*dy"), 2);
        assert!(euler.matrix.is_diagonal());
        let diag: Vec<_> = (0..6).map(|i| euler.matrix.get(i, i).clone()).collect();
        let expected: Vec<_> = [0, 1, 1, 2, 2, 2].map(GaussianRational::from_int).into();
        assert_eq!(diag, expected);
        let xdx = assemble_matrix(&op("x*dx"), 2);
        assert!(xdx.matrix.is_diagonal());
        let diag: Vec<_> = (0..6).map(|i| xdx.matrix.get(i, i).clone()).collect();
        let expected: Vec<_> = [0, 1, 0, 2, 1, 0].map(GaussianRational::from_int).into();
        assert_eq!(diag, expected);
    }

    #[test]
    fn question_truncations() {
        for m in 0..=8 {
            assert_eq!(truncated_corank(&op("dx"), m, m + 1), 0);
            assert_eq!(truncated_corank(&op("x*dx + y*dy"), m, m), 1);
            for d in m..=m + 2 {
                assert_eq!(truncated_corank(&op("x*dx"), m, d), m as usize + 1);
            }
        }
    }

    #[test]
    fn ladder_verdicts() {
        let l = corank_ladder(&op("dx"), 6, 9).unwrap();
        assert_eq!(l.verdict, "corank = 0");
        assert!(l.rows.iter().all(|r| r.stabilized == Some(0)));
        let l = corank_ladder(&op("x*dx + y*dy"), 6, 9).unwrap();
        assert_eq!(l.verdict, "corank = 1");
        let l = corank_ladder(&op("x*dx"), 6, 9).unwrap();
        assert_eq!(l.verdict, "diverging (∞)");
        assert!(l.diverging);
        assert_eq!(l.lower_bound, 7);
    }

    #[test]
    fn evidence_verdict_without_structure() {
        // ∂x + x∂y mixes shifts, so only ladder evidence is available.
        let l = corank_ladder(&op("dx + x*dy"), 5, 8).unwrap();
        assert!(!l.verdict_is_exact);
        assert!(l.exact.is_none());
    }

    #[test]
    fn ladder_rejects_bad_window() {
        assert!(matches!(
            corank_ladder(&op("dx"), 5, 3),
            Err(CorankError::BadWindow { .. })
        ));
    }

    #[test]
    fn independence_examples() {
        let euler = op("x*dx + y*dy");
        for m in 0..4 {
            let r = independence_mod_range(&euler, &Poly2::x(), 1, m, m + 1).unwrap();
            assert!(r.independent);
        }
        let r = independence_mod_range(&op("dx"), &Poly2::x(), 2, 2, 3).unwrap();
        assert!(!r.independent);
        match r.certificate {
            IndependenceCertificate::Dependent { coefficients } => {
                assert_eq!(coefficients, ["1", "0"]);
            }
            _ => panic!("expected a dependence"),
        }
        let r = independence_mod_range(&op("x*dx"), &Poly2::y(), 3, 2, 4).unwrap();
        assert!(r.independent);
        match r.certificate {
            IndependenceCertificate::Independent { pivots } => {
                assert_eq!(pivots, ["1", "y", "y^2"]);
            }
            _ => panic!("expected independence"),
        }
    }

    #[test]
    fn independence_errors() {
        let e = independence_mod_range(&op("dx"), &Poly2::x(), 4, 2, 3).unwrap_err();
        assert_eq!(e, CorankError::DegreeOverflow { power: 3, degree: 3, m: 2 });
        let fi = Poly2::x().scale(&GaussianRational::i());
        assert_eq!(
            independence_mod_range(&op("dx"), &fi, 1, 2, 3).unwrap_err(),
            CorankError::NonRealFunction
        );
        assert_eq!(
            independence_mod_range(&op("dx"), &Poly2::x(), 0, 2, 3).unwrap_err(),
            CorankError::EmptyPowerList
        );
    }
}
