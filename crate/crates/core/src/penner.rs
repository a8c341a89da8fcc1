//! Filling multicurve pairs, twist words and their transition matrices.
//!
//! Measures are recorded in the basis of curves of the system. A Dehn twist
//! along `c` with exponent `m` acts on a measure `μ` by
//!
//! ```text
//! μ  ↦  μ + |m| · (Σ_x i(c, x) μ_x) · e_c
//! ```
//!
//! i.e. the matrix `I + |m| E_c` where `E_c` is zero outside row `c` and
//! row `c` holds the intersection numbers of `c`. Because `i(c, c) = 0`,
//! `E_c^2 = 0`, so `(I + E_c)^m = I + m E_c` and the determinant is 1: this
//! is the only row-update form compatible with those two facts. Positive
//! twists on one side and negative twists on the other both map to the
//! same non-negative matrix; the sign only enters the side check.
//!
//! Words compose right to left: the word `[s1, s2, ..., sn]` denotes
//! `s1 ∘ s2 ∘ ... ∘ sn`, so its matrix is `M(s1) · M(s2) · ... · M(sn)`.
//!
//! Whether `α ∪ β` actually fills the surface needs embedding data and is the
//! caller's responsibility; [`validate_system`] only checks the necessary
//! combinatorial conditions.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::IntMatrix;
use crate::scalar::Real;
use crate::spectral::{pf_eigen, SpectralBracket, SpectralError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Alpha,
    Beta,
}

impl Side {
    /// Sign a twist exponent must carry on this side.
    pub fn twist_sign(self) -> i64 {
        match self {
            Side::Alpha => 1,
            Side::Beta => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    pub label: String,
    pub side: Side,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PennerError {
    #[error("curve system has no curves")]
    Empty,
    #[error("intersection matrix has shape mismatch at row {row}")]
    Shape { row: usize },
    #[error("duplicate curve label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown curve {0:?}")]
    UnknownCurve(String),
    #[error("twist along {curve:?} has exponent 0")]
    ZeroExponent { curve: String },
    #[error("twist along {side:?} curve {curve:?} with exponent {exp} violates the sign convention")]
    SignViolation { curve: String, side: Side, exp: i64 },
    #[error("relabeling is not a bijection: {0:?} is hit twice")]
    NotBijective(String),
    #[error("relabeling sends {from:?} to {to:?} on the other side")]
    SideChange { from: String, to: String },
    #[error("relabeling does not preserve i({a:?}, {b:?})")]
    NotSymmetry { a: String, b: String },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Two multicurves (the alpha and beta sides) with their intersection numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCurveSystem", into = "RawCurveSystem")]
pub struct CurveSystem {
    curves: Vec<Curve>,
    intersections: Vec<Vec<u64>>,
    index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct RawCurveSystem {
    curves: Vec<Curve>,
    intersections: Vec<Vec<u64>>,
}

impl TryFrom<RawCurveSystem> for CurveSystem {
    type Error = PennerError;

    fn try_from(raw: RawCurveSystem) -> Result<Self, PennerError> {
        CurveSystem::new(raw.curves, raw.intersections)
    }
}

impl From<CurveSystem> for RawCurveSystem {
    fn from(s: CurveSystem) -> Self {
        RawCurveSystem { curves: s.curves, intersections: s.intersections }
    }
}

impl CurveSystem {
    /// Checks shape and label uniqueness only; see [`validate_system`] for
    /// the topological conditions.
    pub fn new(curves: Vec<Curve>, intersections: Vec<Vec<u64>>) -> Result<Self, PennerError> {
        if curves.is_empty() {
            return Err(PennerError::Empty);
        }
        if intersections.len() != curves.len() {
            return Err(PennerError::Shape { row: intersections.len().min(curves.len()) });
        }
        if let Some(row) = intersections.iter().position(|r| r.len() != curves.len()) {
            return Err(PennerError::Shape { row });
        }
        let mut index = HashMap::new();
        for (i, c) in curves.iter().enumerate() {
            if index.insert(c.label.clone(), i).is_some() {
                return Err(PennerError::DuplicateLabel(c.label.clone()));
            }
        }
        Ok(CurveSystem { curves, intersections, index })
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn intersection(&self, a: usize, b: usize) -> u64 {
        self.intersections[a][b]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    fn lookup(&self, label: &str) -> Result<usize, PennerError> {
        self.index_of(label).ok_or_else(|| PennerError::UnknownCurve(label.to_owned()))
    }

    fn label(&self, i: usize) -> &str {
        &self.curves[i].label
    }

    pub fn side(&self, i: usize) -> Side {
        self.curves[i].side
    }
}

/// The chain `a1, b1, a2, b2, ..., a(g+1)` of `2g + 1` curves, consecutive
/// curves meeting once. For `g = 2` these are the curves `a1, a2, a3` and
/// `b1, b2` on the closed genus-two surface.
pub fn chain_system(g: usize) -> CurveSystem {
    assert!(g >= 1, "chain_system needs genus at least 1");
    let len = 2 * g + 1;
    let curves = (0..len)
        .map(|i| {
            let (prefix, side) = if i % 2 == 0 { ("a", Side::Alpha) } else { ("b", Side::Beta) };
            Curve { label: format!("{prefix}{}", i / 2 + 1), side }
        })
        .collect();
    let mut inter = vec![vec![0u64; len]; len];
    for i in 0..len - 1 {
        inter[i][i + 1] = 1;
        inter[i + 1][i] = 1;
    }
    CurveSystem::new(curves, inter).expect("chain is well formed")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    SelfIntersection { curve: String },
    Asymmetric { a: String, b: String },
    SameSide { a: String, b: String },
    /// `a` and `b` lie in different components of the intersection graph.
    Disconnected { a: String, b: String, components: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SystemReport {
    pub violations: Vec<Violation>,
}

impl SystemReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_system(sys: &CurveSystem) -> SystemReport {
    let n = sys.len();
    let mut violations = Vec::new();
    for a in 0..n {
        if sys.intersection(a, a) != 0 {
            violations.push(Violation::SelfIntersection { curve: sys.label(a).into() });
        }
        for b in a + 1..n {
            let (ab, ba) = (sys.intersection(a, b), sys.intersection(b, a));
            if ab != ba {
                violations.push(Violation::Asymmetric { a: sys.label(a).into(), b: sys.label(b).into() });
            }
            if (ab > 0 || ba > 0) && sys.side(a) == sys.side(b) {
                violations.push(Violation::SameSide { a: sys.label(a).into(), b: sys.label(b).into() });
            }
        }
    }
    let mut component = vec![usize::MAX; n];
    let mut count = 0;
    for s in 0..n {
        if component[s] != usize::MAX {
            continue;
        }
        component[s] = count;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                let meets = sys.intersection(u, v) > 0 || sys.intersection(v, u) > 0;
                if meets && component[v] == usize::MAX {
                    component[v] = count;
                    queue.push_back(v);
                }
            }
        }
        count += 1;
    }
    if count > 1 {
        let b = component.iter().position(|&c| c != 0).unwrap();
        violations.push(Violation::Disconnected {
            a: sys.label(0).into(),
            b: sys.label(b).into(),
            components: count,
        });
    }
    SystemReport { violations }
}

/// One letter of a mapping-class word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Step {
    Twist {
        #[serde(rename = "twist")]
        curve: String,
        exp: i64,
    },
    /// Relabeling `c ↦ σ(c)`; unlisted curves are fixed.
    Permute {
        permute: BTreeMap<String, String>,
    },
}

/// Steps listed left to right; the rightmost step is applied first.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MappingClassWord {
    pub steps: Vec<Step>,
}

impl MappingClassWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn twist(mut self, curve: &str, exp: i64) -> Self {
        self.steps.push(Step::Twist { curve: curve.to_owned(), exp });
        self
    }

    pub fn permute<'a>(mut self, pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        let permute = pairs.into_iter().map(|(a, b)| (a.to_owned(), b.to_owned())).collect();
        self.steps.push(Step::Permute { permute });
        self
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Cyclic rotation moving the first `r` steps to the end (a conjugate).
    pub fn rotated(&self, r: usize) -> Self {
        let mut steps = self.steps.clone();
        if !steps.is_empty() {
            let len = steps.len();
            steps.rotate_left(r % len);
        }
        MappingClassWord { steps }
    }

    /// The word composed with itself `m` times.
    pub fn repeated(&self, m: usize) -> Self {
        MappingClassWord { steps: (0..m).flat_map(|_| self.steps.iter().cloned()).collect() }
    }
}

/// The example word `τ_{a1}^2 ∘ τ_{a2} ∘ τ_{b2}^{-3} ∘ τ_{a3} ∘ τ_{b1}^{-1} ∘ τ_{a1}`
/// on [`chain_system(2)`](chain_system).
pub fn genus_two_example_word() -> MappingClassWord {
    MappingClassWord::new()
        .twist("a1", 2)
        .twist("a2", 1)
        .twist("b2", -3)
        .twist("a3", 1)
        .twist("b1", -1)
        .twist("a1", 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignPolicy {
    /// Alpha twists must be positive, beta twists negative.
    #[default]
    Enforce,
    Override,
}

pub fn twist_matrix(
    sys: &CurveSystem,
    curve: &str,
    exp: i64,
    policy: SignPolicy,
) -> Result<IntMatrix, PennerError> {
    let c = sys.lookup(curve)?;
    if exp == 0 {
        return Err(PennerError::ZeroExponent { curve: curve.to_owned() });
    }
    let side = sys.side(c);
    if policy == SignPolicy::Enforce && exp.signum() != side.twist_sign() {
        return Err(PennerError::SignViolation { curve: curve.to_owned(), side, exp });
    }
    let mut m = IntMatrix::identity(sys.len());
    let scale = exp.unsigned_abs();
    for x in 0..sys.len() {
        let add = scale * sys.intersection(c, x);
        if add > 0 {
            let v = m.get(c, x) + BigUint::from(add);
            m.set(c, x, v);
        }
    }
    Ok(m)
}

/// Resolves a relabeling to an index map `image[c] = σ(c)` after checking it
/// is a side-preserving symmetry of the intersection matrix.
pub fn permutation_image(
    sys: &CurveSystem,
    map: &BTreeMap<String, String>,
) -> Result<Vec<usize>, PennerError> {
    let image = raw_image(sys, map)?;
    for (c, &s) in image.iter().enumerate() {
        if sys.side(c) != sys.side(s) {
            return Err(PennerError::SideChange { from: sys.label(c).into(), to: sys.label(s).into() });
        }
    }
    for a in 0..sys.len() {
        for b in 0..sys.len() {
            if sys.intersection(image[a], image[b]) != sys.intersection(a, b) {
                return Err(PennerError::NotSymmetry { a: sys.label(a).into(), b: sys.label(b).into() });
            }
        }
    }
    Ok(image)
}

fn raw_image(sys: &CurveSystem, map: &BTreeMap<String, String>) -> Result<Vec<usize>, PennerError> {
    let mut image: Vec<usize> = (0..sys.len()).collect();
    for (from, to) in map {
        image[sys.lookup(from)?] = sys.lookup(to)?;
    }
    let mut hit = vec![false; sys.len()];
    for &s in &image {
        if std::mem::replace(&mut hit[s], true) {
            return Err(PennerError::NotBijective(sys.label(s).into()));
        }
    }
    Ok(image)
}

pub fn step_matrix(sys: &CurveSystem, step: &Step, policy: SignPolicy) -> Result<IntMatrix, PennerError> {
    match step {
        Step::Twist { curve, exp } => twist_matrix(sys, curve, *exp, policy),
        Step::Permute { permute } => Ok(IntMatrix::permutation(&permutation_image(sys, permute)?)),
    }
}

/// Action of the word on measure coordinates.
pub fn word_matrix(
    sys: &CurveSystem,
    word: &MappingClassWord,
    policy: SignPolicy,
) -> Result<IntMatrix, PennerError> {
    word.steps.iter().try_fold(IntMatrix::identity(sys.len()), |acc, step| {
        Ok(&acc * &step_matrix(sys, step, policy)?)
    })
}

/// Stretch factor of the word: the Perron-Frobenius eigenvalue of its
/// transition matrix. Words that miss curves may give a non-primitive
/// matrix, reported as [`PennerError::Spectral`].
pub fn dilatation<F: Real>(
    sys: &CurveSystem,
    word: &MappingClassWord,
    tol: F,
) -> Result<SpectralBracket<F>, PennerError> {
    let m = word_matrix(sys, word, SignPolicy::Enforce)?;
    Ok(pf_eigen(&m, tol)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WordCheck {
    pub unknown_curves: Vec<String>,
    /// Problems with relabeling steps (not bijective, side-changing).
    pub bad_permutations: Vec<String>,
    pub sign_violations: Vec<(String, i64)>,
    /// Order of the accumulated relabeling.
    pub rotation_order: usize,
    /// Smallest iterate whose twists cover every alpha curve positively.
    pub alpha_iterate: Option<usize>,
    /// Smallest iterate whose twists cover every beta curve negatively.
    pub beta_iterate: Option<usize>,
    pub missing_alpha: Vec<String>,
    pub missing_beta: Vec<String>,
}

impl WordCheck {
    /// Smallest `p` such that `w^p` twists along every curve with the right
    /// sign; `None` if the check fails.
    pub fn certifying_iterate(&self) -> Option<usize> {
        if !self.unknown_curves.is_empty()
            || !self.bad_permutations.is_empty()
            || !self.sign_violations.is_empty()
        {
            return None;
        }
        Some(self.alpha_iterate?.max(self.beta_iterate?))
    }

    pub fn passed(&self) -> bool {
        self.certifying_iterate().is_some()
    }
}

/// Checks that every alpha curve gets a positive twist and every beta curve a
/// negative one.
///
/// Relabeling steps are pushed to the left: `τ_c ∘ π = π ∘ τ_{π⁻¹(c)}`, so
/// the word equals `Π ∘ T` with `T` a pure twist word. Its `p`-th iterate
/// twists along `Π^{-j}(T)` for `0 <= j < p`; iterates up to the order of
/// `Π` are examined, and at that order `w^p` is itself a pure twist word.
pub fn penner_word_check(sys: &CurveSystem, word: &MappingClassWord) -> WordCheck {
    let n = sys.len();
    let mut report = WordCheck::default();
    // pi[c] = image of c under the relabelings applied so far
    let mut pi: Vec<usize> = (0..n).collect();
    let mut twisted: Vec<(usize, i64)> = Vec::new();
    for step in word.steps.iter().rev() {
        match step {
            Step::Twist { curve, exp } => {
                let Some(c) = sys.index_of(curve) else {
                    report.unknown_curves.push(curve.clone());
                    continue;
                };
                if *exp == 0 {
                    report.sign_violations.push((curve.clone(), 0));
                    continue;
                }
                if exp.signum() != sys.side(c).twist_sign() {
                    report.sign_violations.push((curve.clone(), *exp));
                }
                let pre = pi.iter().position(|&x| x == c).unwrap();
                twisted.push((pre, *exp));
            }
            Step::Permute { permute } => match raw_image(sys, permute) {
                Ok(sigma) => {
                    if let Some(c) = (0..n).find(|&c| sys.side(c) != sys.side(sigma[c])) {
                        report.bad_permutations.push(format!("{} changes side", sys.label(c)));
                    }
                    pi = pi.iter().map(|&x| sigma[x]).collect();
                }
                Err(e) => report.bad_permutations.push(e.to_string()),
            },
        }
    }
    let inverse = {
        let mut inv = vec![0; n];
        for (c, &x) in pi.iter().enumerate() {
            inv[x] = c;
        }
        inv
    };
    report.rotation_order = permutation_order(&pi);

    let mut positive = vec![false; n];
    let mut negative = vec![false; n];
    let mut current = twisted;
    for p in 1..=report.rotation_order {
        for &(c, exp) in &current {
            if exp > 0 {
                positive[c] = true;
            } else {
                negative[c] = true;
            }
        }
        let covered = |side: Side, marks: &[bool]| (0..n).all(|c| sys.side(c) != side || marks[c]);
        if report.alpha_iterate.is_none() && covered(Side::Alpha, &positive) {
            report.alpha_iterate = Some(p);
        }
        if report.beta_iterate.is_none() && covered(Side::Beta, &negative) {
            report.beta_iterate = Some(p);
        }
        current = current.iter().map(|&(c, e)| (inverse[c], e)).collect();
    }
    for c in 0..n {
        match sys.side(c) {
            Side::Alpha if !positive[c] => report.missing_alpha.push(sys.label(c).into()),
            Side::Beta if !negative[c] => report.missing_beta.push(sys.label(c).into()),
            _ => {}
        }
    }
    report
}

fn permutation_order(image: &[usize]) -> usize {
    let mut seen = vec![false; image.len()];
    let mut order = 1usize;
    for s in 0..image.len() {
        let mut len = 0;
        let mut c = s;
        while !seen[c] {
            seen[c] = true;
            c = image[c];
            len += 1;
        }
        if len > 0 {
            order = order.lcm(&len);
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_curve() -> CurveSystem {
        CurveSystem::new(
            vec![
                Curve { label: "a".into(), side: Side::Alpha },
                Curve { label: "b".into(), side: Side::Beta },
            ],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap()
    }

    fn m(rows: &[&[u64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.to_vec())).unwrap()
    }

    #[test]
    fn chain_shapes() {
        let c2 = chain_system(2);
        let labels: Vec<_> = c2.curves().iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["a1", "b1", "a2", "b2", "a3"]);
        assert_eq!(c2.curves().iter().filter(|c| c.side == Side::Alpha).count(), 3);
        let ones: u64 = (0..5).flat_map(|a| (0..5).map(move |b| (a, b))).map(|(a, b)| c2.intersection(a, b)).sum();
        assert_eq!(ones, 8);
        assert!(validate_system(&c2).is_valid());

        let c1 = chain_system(1);
        let labels: Vec<_> = c1.curves().iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["a1", "b1", "a2"]);

        let c3 = chain_system(3);
        assert_eq!(c3.len(), 7);
        let nonzero = (0..7).flat_map(|a| (0..7).map(move |b| (a, b))).filter(|&(a, b)| c3.intersection(a, b) > 0).count();
        assert_eq!(nonzero, 12);
    }

    #[test]
    fn validation_reports_violations() {
        let curves = vec![
            Curve { label: "a1".into(), side: Side::Alpha },
            Curve { label: "a2".into(), side: Side::Alpha },
            Curve { label: "b1".into(), side: Side::Beta },
        ];
        let sys = CurveSystem::new(curves.clone(), vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).unwrap();
        assert_eq!(
            validate_system(&sys).violations,
            vec![Violation::SameSide { a: "a1".into(), b: "a2".into() }]
        );

        let split = CurveSystem::new(
            vec![
                Curve { label: "a1".into(), side: Side::Alpha },
                Curve { label: "b1".into(), side: Side::Beta },
                Curve { label: "a2".into(), side: Side::Alpha },
                Curve { label: "b2".into(), side: Side::Beta },
            ],
            vec![vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 2], vec![0, 0, 2, 0]],
        )
        .unwrap();
        assert_eq!(
            validate_system(&split).violations,
            vec![Violation::Disconnected { a: "a1".into(), b: "a2".into(), components: 2 }]
        );

        let bad = CurveSystem::new(curves, vec![vec![1, 0, 2], vec![0, 0, 1], vec![1, 1, 0]]).unwrap();
        let v = validate_system(&bad).violations;
        assert!(v.contains(&Violation::SelfIntersection { curve: "a1".into() }));
        assert!(v.contains(&Violation::Asymmetric { a: "a1".into(), b: "b1".into() }));
    }

    #[test]
    fn construction_errors() {
        let c = || Curve { label: "x".into(), side: Side::Alpha };
        assert_eq!(CurveSystem::new(vec![], vec![]), Err(PennerError::Empty));
        assert_eq!(CurveSystem::new(vec![c(), c()], vec![vec![0, 0], vec![0, 0]]), Err(PennerError::DuplicateLabel("x".into())));
        assert_eq!(CurveSystem::new(vec![c()], vec![vec![0, 0]]), Err(PennerError::Shape { row: 0 }));
    }

    #[test]
    fn twist_matrix_is_identity_plus_row() {
        let sys = chain_system(2);
        let t = twist_matrix(&sys, "a1", 1, SignPolicy::Enforce).unwrap();
        let mut expected = IntMatrix::identity(5);
        expected.set(0, 1, BigUint::from(1u8));
        assert_eq!(t, expected);

        let t3 = twist_matrix(&sys, "b1", -3, SignPolicy::Enforce).unwrap();
        let t1 = twist_matrix(&sys, "b1", -1, SignPolicy::Enforce).unwrap();
        assert_eq!(t3, t1.pow(3));
    }

    #[test]
    fn twist_along_isolated_curve_is_identity() {
        let sys = CurveSystem::new(
            vec![
                Curve { label: "a".into(), side: Side::Alpha },
                Curve { label: "b".into(), side: Side::Beta },
                Curve { label: "z".into(), side: Side::Alpha },
            ],
            vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]],
        )
        .unwrap();
        assert_eq!(twist_matrix(&sys, "z", 4, SignPolicy::Enforce).unwrap(), IntMatrix::identity(3));
    }

    #[test]
    fn twist_matrix_errors() {
        let sys = two_curve();
        assert_eq!(
            twist_matrix(&sys, "a", -1, SignPolicy::Enforce),
            Err(PennerError::SignViolation { curve: "a".into(), side: Side::Alpha, exp: -1 })
        );
        assert!(twist_matrix(&sys, "a", -1, SignPolicy::Override).is_ok());
        assert_eq!(twist_matrix(&sys, "c", 1, SignPolicy::Enforce), Err(PennerError::UnknownCurve("c".into())));
        assert_eq!(twist_matrix(&sys, "a", 0, SignPolicy::Override), Err(PennerError::ZeroExponent { curve: "a".into() }));
    }

    #[test]
    fn two_curve_word_matrix() {
        let sys = two_curve();
        let w = MappingClassWord::new().twist("a", 1).twist("b", -1);
        assert_eq!(word_matrix(&sys, &w, SignPolicy::Enforce).unwrap(), m(&[&[2, 1], &[1, 1]]));
        assert_eq!(word_matrix(&sys, &MappingClassWord::new(), SignPolicy::Enforce).unwrap(), IntMatrix::identity(2));
    }

    #[test]
    fn permutation_step_matrix() {
        let sys = chain_system(2);
        let flip = MappingClassWord::new().permute([("a1", "a3"), ("a3", "a1"), ("b1", "b2"), ("b2", "b1")]);
        let p = word_matrix(&sys, &flip, SignPolicy::Enforce).unwrap();
        assert_eq!(p, IntMatrix::permutation(&[4, 3, 2, 1, 0]));
        assert_eq!(p.determinant(), 1.into());

        let shift = MappingClassWord::new().permute([("a1", "a2"), ("a2", "a3"), ("a3", "a1")]);
        assert!(matches!(word_matrix(&sys, &shift, SignPolicy::Enforce), Err(PennerError::NotSymmetry { .. })));
        let cross = MappingClassWord::new().permute([("a1", "b1"), ("b1", "a1")]);
        assert!(matches!(word_matrix(&sys, &cross, SignPolicy::Enforce), Err(PennerError::SideChange { .. })));
        let clash = MappingClassWord::new().permute([("a1", "a2")]);
        assert_eq!(word_matrix(&sys, &clash, SignPolicy::Enforce), Err(PennerError::NotBijective("a2".into())));
    }

    #[test]
    fn two_curve_dilatation() {
        let sys = two_curve();
        let w = MappingClassWord::new().twist("a", 1).twist("b", -1);
        let b = dilatation(&sys, &w, 1e-12).unwrap();
        assert!((b.estimate - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-10);
        let only_a = MappingClassWord::new().twist("a", 1);
        assert!(matches!(
            dilatation(&sys, &only_a, 1e-12),
            Err(PennerError::Spectral(SpectralError::Reducible { .. }))
        ));
    }

    #[test]
    fn example_word_check_passes_immediately() {
        let r = penner_word_check(&chain_system(2), &genus_two_example_word());
        assert_eq!(r.certifying_iterate(), Some(1));
        assert_eq!(r.rotation_order, 1);
    }

    #[test]
    fn word_check_missing_beta() {
        let r = penner_word_check(&two_curve(), &MappingClassWord::new().twist("a", 1));
        assert!(!r.passed());
        assert_eq!(r.missing_beta, vec!["b".to_string()]);
        assert_eq!(r.alpha_iterate, Some(1));
    }

    #[test]
    fn word_check_sign_and_unknown() {
        let w = MappingClassWord::new().twist("a", -1).twist("b", -1).twist("q", 1);
        let r = penner_word_check(&two_curve(), &w);
        assert_eq!(r.sign_violations, vec![("a".to_string(), -1)]);
        assert_eq!(r.unknown_curves, vec!["q".to_string()]);
        assert!(!r.passed());
    }

    #[test]
    fn word_check_follows_relabeling_orbits() {
        let sys = chain_system(2);
        let rho = [("a1", "a2"), ("a2", "a3"), ("a3", "a1")];
        // orbit of a1 under a 3-cycle covers all alphas at the third iterate
        let w = MappingClassWord::new().permute(rho).twist("a1", 1);
        let r = penner_word_check(&sys, &w);
        assert_eq!(r.rotation_order, 3);
        assert_eq!(r.alpha_iterate, Some(3));
        assert_eq!(r.beta_iterate, None);
        assert!(!r.passed());
        // two alpha twists: covered after two iterates
        let w2 = MappingClassWord::new().permute(rho).twist("a1", 1).twist("a2", 1);
        let r2 = penner_word_check(&sys, &w2);
        assert_eq!(r2.alpha_iterate, Some(2));
        assert!(!r2.passed());
    }

    #[test]
    fn reflection_word_certified_at_second_iterate() {
        let sys = chain_system(2);
        let flip = [("a1", "a3"), ("a3", "a1"), ("b1", "b2"), ("b2", "b1")];
        let w = MappingClassWord::new().permute(flip).twist("a1", 1).twist("a2", 1).twist("b1", -1);
        let r = penner_word_check(&sys, &w);
        assert_eq!(r.certifying_iterate(), Some(2));

        // f^2 is a pure twist word; its stretch factor is λ(f)^2.
        let f = dilatation::<f64>(&sys, &w, 1e-12).unwrap();
        let f2 = dilatation(&sys, &w.repeated(2), 1e-12).unwrap();
        assert!((f.estimate.powi(2) - f2.estimate).abs() < 1e-9 * f2.estimate);
    }

    #[test]
    fn word_json_format() {
        let json = r#"[{"twist": "a1", "exp": 2}, {"permute": {"a1": "a3", "a3": "a1"}}, {"twist": "b1", "exp": -1}]"#;
        let w: MappingClassWord = serde_json::from_str(json).unwrap();
        assert_eq!(
            w,
            MappingClassWord::new().twist("a1", 2).permute([("a1", "a3"), ("a3", "a1")]).twist("b1", -1)
        );
        let back: MappingClassWord = serde_json::from_str(&serde_json::to_string(&w).unwrap()).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn system_json_format() {
        let json = r#"{"curves": [{"label": "a", "side": "alpha"}, {"label": "b", "side": "beta"}],
                       "intersections": [[0, 1], [1, 0]]}"#;
        let sys: CurveSystem = serde_json::from_str(json).unwrap();
        assert_eq!(sys, two_curve());
        let err = serde_json::from_str::<CurveSystem>(r#"{"curves": [{"label": "a", "side": "alpha"}], "intersections": [[0, 1]]}"#);
        assert!(err.is_err());
        let again: CurveSystem = serde_json::from_str(&serde_json::to_string(&sys).unwrap()).unwrap();
        assert_eq!(again, sys);
    }
}
