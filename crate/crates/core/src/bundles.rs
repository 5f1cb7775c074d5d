//! Classification data of noncommutative principal Tⁿ-bundles and the
//! decisions built on it.
//!
//! A bundle over `X` is described by its commutative part (kept as an
//! opaque tag) and the homotopy class of `f: X → T^{n(n-1)/2}`, recorded as
//! a winding matrix over a basis of the free part of `H₁(X; Z)`. This is
//! exact whenever `H¹(X; Z) ≅ Hom(H₁(X; Z), Z)`.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exterior::BasisOrder;
use crate::intmat::{gl_orbit_equal, gl_orbit_witness, sl_orbit_witness, Generator, IntMatrix};
use crate::monodromy::{representation, MonodromyMatrix};
use crate::pairs::{pair_count, pairs};
use crate::{Error, Result};

/// Labels of a basis of the free part of `H₁(X; Z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseHomology {
    labels: Vec<String>,
}

impl BaseHomology {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::Invalid("base generator labels must be distinct".into()));
        }
        Ok(BaseHomology { labels })
    }

    /// Labels `gamma1, …, gammab`.
    pub fn with_rank(b: usize) -> Self {
        BaseHomology {
            labels: (1..=b).map(|k| format!("gamma{k}")).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// The commutative part `[q: Y → X]`, carried along but never inspected,
/// plus the twists applied to the descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CommutativePart {
    /// Free-form JSON text.
    pub tag: String,
    pub twists: Vec<IntMatrix>,
}

impl CommutativePart {
    pub fn new(tag: impl Into<String>) -> Self {
        CommutativePart {
            tag: tag.into(),
            twists: Vec::new(),
        }
    }
}

/// Entry `((i,j), γ) = ⟨f_{i,j}, γ⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleDescriptor {
    n: usize,
    base: BaseHomology,
    winding: IntMatrix,
    pub commutative_part: CommutativePart,
}

impl BundleDescriptor {
    pub fn new(n: usize, base: BaseHomology, winding: IntMatrix, commutative_part: CommutativePart) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("bundle rank must be positive".into()));
        }
        if winding.shape() != (pair_count(n), base.rank()) {
            return Err(Error::ShapeMismatch(format!(
                "winding matrix {:?} for rank {n} over a base of rank {}",
                winding.shape(),
                base.rank()
            )));
        }
        Ok(BundleDescriptor {
            n,
            base,
            winding,
            commutative_part,
        })
    }

    /// A descriptor with generated labels and an empty tag.
    pub fn from_winding(n: usize, winding: IntMatrix) -> Result<Self> {
        let b = winding.cols();
        Self::new(n, BaseHomology::with_rank(b), winding, CommutativePart::new("{}"))
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &BaseHomology {
        &self.base
    }

    pub fn winding(&self) -> &IntMatrix {
        &self.winding
    }
}

/// The matrix of `Λ²Ψ` on `e_i ∧ e_j`, `i < j`, in lexicographic pair order:
/// entry `((i,j),(k,l)) = Ψ_{ik}Ψ_{jl} - Ψ_{il}Ψ_{jk}`.
pub fn lambda2_matrix(psi: &IntMatrix) -> Result<IntMatrix> {
    if !psi.is_unimodular() {
        return Err(Error::NotUnimodular);
    }
    Ok(lambda2_unchecked(psi))
}

fn lambda2_unchecked(psi: &IntMatrix) -> IntMatrix {
    let n = psi.rows();
    let ps = pairs(n);
    let mut out = IntMatrix::zeros(ps.len(), ps.len());
    for (r, a) in ps.iter().enumerate() {
        for (c, b) in ps.iter().enumerate() {
            let (i, j, k, l) = (a.i() - 1, a.j() - 1, b.i() - 1, b.j() - 1);
            let v = psi.get(i, k) * psi.get(j, l) - psi.get(i, l) * psi.get(j, k);
            out.set(r, c, v);
        }
    }
    out
}

/// The rank-3 identification of the pair lattice with the dual lattice:
/// `e₁₂ ↦ f₃*`, `e₁₃ ↦ -f₂*`, `e₂₃ ↦ f₁*`. Under it
/// `J · Λ²Ψ · J⁻¹ = det Ψ · ᵗΨ⁻¹`. `J` is its own inverse.
pub fn rank3_dual_identification() -> IntMatrix {
    IntMatrix::from_i64(3, 3, &[0, 0, 1, 0, -1, 0, 1, 0, 0])
}

/// Whether a pair-lattice automorphism is of the form `Λ²Ψ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lambda2Membership {
    Member {
        psi: IntMatrix,
    },
    NotMember,
    /// No decision procedure for this rank.
    Unsupported,
}

/// Decides whether `A = Λ²Ψ` for some `Ψ ∈ GL_n(Z)`.
///
/// Every `±1` is attained for `n = 2`; for `n = 3` the image is exactly
/// `SL(Λ²Z³)` and `Ψ = ᵗB⁻¹` with `B = JAJ⁻¹`.
pub fn lambda2_image_member(n: usize, a: &IntMatrix) -> Result<Lambda2Membership> {
    let k = pair_count(n);
    if a.shape() != (k, k) {
        return Err(Error::ShapeMismatch(format!(
            "{:?} on the pair lattice of rank {n}",
            a.shape()
        )));
    }
    if n >= 4 {
        return Ok(Lambda2Membership::Unsupported);
    }
    if n < 2 {
        return Ok(Lambda2Membership::Member {
            psi: IntMatrix::identity(n.max(1)),
        });
    }
    if !a.is_unimodular() {
        return Err(Error::NotUnimodular);
    }
    let psi = if n == 2 {
        IntMatrix::diagonal(&[a.get(0, 0).clone(), BigInt::one()])
    } else {
        if !a.det()?.is_one() {
            return Ok(Lambda2Membership::NotMember);
        }
        let j = rank3_dual_identification();
        let b = j.matmul(a)?.matmul(&j)?;
        b.inverse_unimodular()?.transpose()
    };
    debug_assert_eq!(lambda2_unchecked(&psi), *a);
    Ok(Lambda2Membership::Member { psi })
}

/// The twisted descriptor with winding matrix `Λ²Ψ · W`.
pub fn twist(d: &BundleDescriptor, psi: &IntMatrix) -> Result<BundleDescriptor> {
    if psi.shape() != (d.n, d.n) {
        return Err(Error::ShapeMismatch(format!(
            "twist {:?} for rank {}",
            psi.shape(),
            d.n
        )));
    }
    let l = lambda2_matrix(psi)?;
    let mut out = d.clone();
    out.winding = if d.n >= 2 {
        l.matmul(&d.winding)?
    } else {
        d.winding.clone()
    };
    if !psi.is_identity() {
        out.commutative_part.twists.push(psi.clone());
    }
    Ok(out)
}

/// Whether the K-theory group bundle is trivial, i.e. `f` is null-homotopic.
pub fn is_k_trivial(d: &BundleDescriptor) -> bool {
    d.winding.is_zero()
}

/// The K-theory group bundle as its monodromy representation.
#[derive(Clone, Debug)]
pub struct KBundle {
    n: usize,
    winding: IntMatrix,
}

pub fn k_bundle(d: &BundleDescriptor) -> KBundle {
    KBundle {
        n: d.n,
        winding: d.winding.clone(),
    }
}

impl KBundle {
    pub fn rank(&self) -> usize {
        self.n
    }

    /// Monodromy along the loop class `γ ∈ Z^b`.
    pub fn monodromy(&self, gamma: &[BigInt], order: BasisOrder) -> Result<MonodromyMatrix> {
        if self.n == 1 {
            if gamma.len() != self.winding.cols() {
                return Err(Error::ShapeMismatch(format!("loop of length {}", gamma.len())));
            }
            return MonodromyMatrix::identity(1, order);
        }
        representation(self.n, &self.winding, gamma, order)
    }

    /// Monodromy along the `k`-th basis loop.
    pub fn basis_loop(&self, k: usize, order: BasisOrder) -> Result<MonodromyMatrix> {
        let mut gamma = vec![BigInt::zero(); self.winding.cols()];
        *gamma
            .get_mut(k)
            .ok_or_else(|| Error::IndexOutOfRange(format!("loop {k}")))? = BigInt::one();
        self.monodromy(&gamma, order)
    }

    /// Whether every basis loop acts trivially.
    pub fn is_constant_identity(&self) -> Result<bool> {
        for k in 0..self.winding.cols() {
            if !self.basis_loop(k, BasisOrder::Lex)?.is_identity() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Monodromy evidence along one basis loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopEvidence {
    pub label: String,
    /// `⟨f_{i,j}, γ⟩` in pair order.
    pub pair_exponents: Vec<BigInt>,
    pub acts_trivially: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TDualReport {
    pub exists: bool,
    pub evidence: Vec<LoopEvidence>,
}

/// A classical T-dual exists exactly when the Mackey obstruction map is
/// null-homotopic, the same condition as [`is_k_trivial`].
pub fn has_classical_t_dual(d: &BundleDescriptor) -> TDualReport {
    let evidence: Vec<LoopEvidence> = d
        .base
        .labels
        .iter()
        .enumerate()
        .map(|(k, label)| {
            let pair_exponents = d.winding.col(k);
            let acts_trivially = pair_exponents.iter().all(Zero::is_zero);
            LoopEvidence {
                label: label.clone(),
                pair_exponents,
                acts_trivially,
            }
        })
        .collect();
    TDualReport {
        exists: is_k_trivial(d),
        evidence,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RkkVerdictKind {
    RkkEquivalentViaTwist,
    IsomorphicKBundlesOnly,
    NotEquivalent,
    Undetermined,
}

impl RkkVerdictKind {
    pub fn name(self) -> &'static str {
        match self {
            RkkVerdictKind::RkkEquivalentViaTwist => "RkkEquivalentViaTwist",
            RkkVerdictKind::IsomorphicKBundlesOnly => "IsomorphicKBundlesOnly",
            RkkVerdictKind::NotEquivalent => "NotEquivalent",
            RkkVerdictKind::Undetermined => "Undetermined",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RkkWitness {
    /// `W₂ = A · W₁`; `psi` is a `GL_n(Z)` matrix with `Λ²Ψ = A` when known.
    Transform {
        a: IntMatrix,
        psi: Option<IntMatrix>,
    },
    /// An invariant separating the two descriptors.
    Refutation(String),
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RkkVerdict {
    pub kind: RkkVerdictKind,
    pub witness: RkkWitness,
    /// Whether some `G ∈ GL(Λ²Zⁿ)` maps `W₁` to `W₂`.
    pub gl_orbit_equal: bool,
    pub caveat: Option<&'static str>,
    /// Names of the statements the verdict rests on.
    pub citations: Vec<&'static str>,
}

pub const RANK3_GAP_CAVEAT: &str = "The K-theory group bundles are isomorphic, but every integral \
transformation between the winding matrices has determinant -1 on the pair lattice, so it is not \
induced by a twist by GL_3(Z). Whether such bundles are RKK-equivalent is not settled.";

pub const CITE_RKK: &str = "RKK classification of NCP torus bundles by winding matrices";
pub const CITE_TWIST: &str = "GL_n(Z)-twist acts on f by the second exterior power";
pub const CITE_IMAGE: &str = "image of the second exterior power map in ranks 2 and 3";
pub const CITE_INJECTIVE: &str = "injectivity of the monodromy in the winding numbers";

/// Options for [`compare_rkk`] in rank 4 and higher.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RkkOptions {
    /// A candidate twist, tried before the search.
    pub psi: Option<IntMatrix>,
    /// Word length bound for the search over `E_{k,l}(±1)` and adjacent
    /// transpositions.
    pub search_depth: usize,
}

impl Default for RkkOptions {
    fn default() -> Self {
        RkkOptions {
            psi: None,
            search_depth: 3,
        }
    }
}

fn check_comparable(d1: &BundleDescriptor, d2: &BundleDescriptor) -> Result<()> {
    if d1.n != d2.n {
        return Err(Error::RankMismatch {
            left: d1.n,
            right: d2.n,
        });
    }
    if d1.base.rank() != d2.base.rank() {
        return Err(Error::ShapeMismatch(format!(
            "bases of rank {} and {}",
            d1.base.rank(),
            d2.base.rank()
        )));
    }
    Ok(())
}

/// Compares two descriptors over the same base up to RKK-equivalence.
///
/// Ranks 2 and 3 are decided completely; in rank 2 the bundles are
/// equivalent iff `W₂ = ±W₁`, in rank 3 an `SL` transformation comes from a
/// twist while a `GL ∖ SL` one only identifies the K-theory bundles. In
/// higher rank only twists found directly or by a bounded search give a
/// positive answer; everything else is [`RkkVerdictKind::Undetermined`].
pub fn compare_rkk(d1: &BundleDescriptor, d2: &BundleDescriptor, options: &RkkOptions) -> Result<RkkVerdict> {
    check_comparable(d1, d2)?;
    let (w1, w2) = (&d1.winding, &d2.winding);
    let n = d1.n;
    let gl = gl_orbit_equal(w1, w2)?;
    let verdict = |kind, witness, caveat, citations: &[&'static str]| RkkVerdict {
        kind,
        witness,
        gl_orbit_equal: gl,
        caveat,
        citations: citations.to_vec(),
    };
    match n {
        1 => Ok(verdict(
            RkkVerdictKind::RkkEquivalentViaTwist,
            RkkWitness::Transform {
                a: IntMatrix::zeros(0, 0),
                psi: Some(IntMatrix::identity(1)),
            },
            None,
            &[CITE_RKK],
        )),
        2 => {
            let sign = if w1 == w2 {
                Some(1)
            } else if *w2 == w1.neg() {
                Some(-1)
            } else {
                None
            };
            Ok(match sign {
                Some(s) => verdict(
                    RkkVerdictKind::RkkEquivalentViaTwist,
                    RkkWitness::Transform {
                        a: IntMatrix::diagonal(&[s]),
                        psi: Some(IntMatrix::diagonal(&[s, 1])),
                    },
                    None,
                    &[CITE_RKK, CITE_IMAGE],
                ),
                None => verdict(
                    RkkVerdictKind::NotEquivalent,
                    RkkWitness::Refutation("W2 is neither W1 nor -W1".into()),
                    None,
                    &[CITE_RKK],
                ),
            })
        }
        3 => {
            if let Some(g) = sl_orbit_witness(w1, w2)? {
                let psi = match lambda2_image_member(3, &g)? {
                    Lambda2Membership::Member { psi } => Some(psi),
                    _ => None,
                };
                return Ok(verdict(
                    RkkVerdictKind::RkkEquivalentViaTwist,
                    RkkWitness::Transform { a: g, psi },
                    None,
                    &[CITE_RKK, CITE_IMAGE, CITE_TWIST],
                ));
            }
            if let Some(g) = gl_orbit_witness(w1, w2)? {
                return Ok(verdict(
                    RkkVerdictKind::IsomorphicKBundlesOnly,
                    RkkWitness::Transform { a: g, psi: None },
                    Some(RANK3_GAP_CAVEAT),
                    &[CITE_RKK, CITE_IMAGE],
                ));
            }
            Ok(verdict(
                RkkVerdictKind::NotEquivalent,
                RkkWitness::Refutation("row Hermite normal forms of W1 and W2 differ".into()),
                None,
                &[CITE_RKK, CITE_INJECTIVE],
            ))
        }
        _ => {
            if let Some(psi) = &options.psi {
                let a = lambda2_matrix(psi)?;
                if a.matmul(w1)? == *w2 {
                    return Ok(verdict(
                        RkkVerdictKind::RkkEquivalentViaTwist,
                        RkkWitness::Transform {
                            a,
                            psi: Some(psi.clone()),
                        },
                        None,
                        &[CITE_RKK, CITE_TWIST],
                    ));
                }
            }
            if let Some(psi) = search_twist(n, w1, w2, options.search_depth)? {
                return Ok(verdict(
                    RkkVerdictKind::RkkEquivalentViaTwist,
                    RkkWitness::Transform {
                        a: lambda2_unchecked(&psi),
                        psi: Some(psi),
                    },
                    None,
                    &[CITE_RKK, CITE_TWIST],
                ));
            }
            Ok(verdict(
                RkkVerdictKind::Undetermined,
                RkkWitness::None,
                None,
                &[CITE_RKK],
            ))
        }
    }
}

/// Breadth-first search for `Ψ` with `Λ²Ψ · W₁ = W₂` among words of length
/// at most `depth`.
fn search_twist(n: usize, w1: &IntMatrix, w2: &IntMatrix, depth: usize) -> Result<Option<IntMatrix>> {
    let mut generators = Vec::new();
    for r in 0..n {
        for c in 0..n {
            if r != c {
                generators.push(Generator::elementary(r, c, 1).matrix(n)?);
                generators.push(Generator::elementary(r, c, -1).matrix(n)?);
            }
        }
    }
    for k in 0..n - 1 {
        generators.push(Generator::transposition(n, k, k + 1).matrix(n)?);
    }
    let start = IntMatrix::identity(n);
    let mut seen = BTreeSet::new();
    seen.insert(start.data().to_vec());
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((psi, d)) = queue.pop_front() {
        if lambda2_unchecked(&psi).matmul(w1)? == *w2 {
            return Ok(Some(psi));
        }
        if d == depth {
            continue;
        }
        for g in &generators {
            let next = psi.matmul(g)?;
            if seen.insert(next.data().to_vec()) {
                queue.push_back((next, d + 1));
            }
        }
    }
    Ok(None)
}

/// The conjugator `T` on Λ*(Zⁿ) (lexicographic basis) induced by a pair
/// lattice transformation `A`, so that `rep₂(γ) · T = T · rep₁(γ)` when
/// `W₂ = A · W₁`. Ranks 2 and 3.
///
/// The even block is `1 ⊕ ᵗA⁻¹`; the odd block is trivial in rank 2 and
/// `JAJ⁻¹ ⊕ 1` in rank 3.
pub fn induced_conjugator(n: usize, a: &IntMatrix) -> Result<MonodromyMatrix> {
    if !(2..=3).contains(&n) {
        return Err(Error::OutOfRange(format!(
            "induced conjugators are built for ranks 2 and 3, not {n}"
        )));
    }
    let one = IntMatrix::identity(1);
    let even = one.direct_sum(&a.inverse_unimodular()?.transpose());
    let odd = if n == 2 {
        IntMatrix::identity(2)
    } else {
        let j = rank3_dual_identification();
        j.matmul(a)?.matmul(&j)?.direct_sum(&one)
    };
    MonodromyMatrix::from_blocks(n, BasisOrder::Lex, even, odd)
}

/// Sign of `det A` for a unimodular `A`.
pub fn det_sign(a: &IntMatrix) -> Result<i32> {
    let d = a.det()?;
    Ok(if d.is_negative() { -1 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desc(n: usize, rows: usize, cols: usize, data: &[i64]) -> BundleDescriptor {
        BundleDescriptor::from_winding(n, IntMatrix::from_i64(rows, cols, data)).unwrap()
    }

    #[test]
    fn lambda2_examples() {
        let psi = IntMatrix::from_i64(2, 2, &[2, 1, 1, 1]);
        assert_eq!(lambda2_matrix(&psi).unwrap(), IntMatrix::diagonal(&[1]));
        let psi = IntMatrix::from_i64(2, 2, &[0, 1, 1, 0]);
        assert_eq!(lambda2_matrix(&psi).unwrap(), IntMatrix::diagonal(&[-1]));
        assert!(lambda2_matrix(&IntMatrix::identity(4)).unwrap().is_identity());
        assert_eq!(lambda2_matrix(&IntMatrix::diagonal(&[2, 1])), Err(Error::NotUnimodular));
    }

    #[test]
    fn rank3_identification() {
        let j = rank3_dual_identification();
        assert!(j.matmul(&j).unwrap().is_identity());
        for data in [
            [1, 2, 0, 0, 1, 3, 1, 2, 1],
            [0, 1, 0, 1, 0, 0, 0, 0, 1],
            [2, 1, 0, 1, 1, 0, 4, -3, -1],
        ] {
            let psi = IntMatrix::from_i64(3, 3, &data);
            let det = psi.det().unwrap();
            assert!(det.abs().is_one());
            let lhs = j.matmul(&lambda2_matrix(&psi).unwrap()).unwrap().matmul(&j).unwrap();
            let rhs = psi.inverse_unimodular().unwrap().transpose().scale(&det);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn membership_examples() {
        assert_eq!(
            lambda2_image_member(3, &IntMatrix::identity(3)).unwrap(),
            Lambda2Membership::Member {
                psi: IntMatrix::identity(3)
            }
        );
        assert_eq!(
            lambda2_image_member(3, &IntMatrix::identity(3).neg()).unwrap(),
            Lambda2Membership::NotMember
        );
        assert_eq!(
            lambda2_image_member(2, &IntMatrix::diagonal(&[-1])).unwrap(),
            Lambda2Membership::Member {
                psi: IntMatrix::diagonal(&[-1, 1])
            }
        );
        assert_eq!(
            lambda2_image_member(4, &IntMatrix::identity(6)).unwrap(),
            Lambda2Membership::Unsupported
        );
        assert!(lambda2_image_member(3, &IntMatrix::identity(2)).is_err());
    }

    #[test]
    fn twist_examples() {
        let d = desc(2, 1, 2, &[3, -1]);
        assert_eq!(twist(&d, &IntMatrix::identity(2)).unwrap(), d);
        let t = twist(&d, &IntMatrix::diagonal(&[-1, 1])).unwrap();
        assert_eq!(*t.winding(), d.winding().neg());
        assert_eq!(t.commutative_part.twists, vec![IntMatrix::diagonal(&[-1, 1])]);

        let d3 = desc(3, 3, 2, &[1, 0, 2, -1, 0, 4]);
        let psi = IntMatrix::from_i64(3, 3, &[1, 1, 0, 0, 1, 0, 2, 0, 1]);
        let back = twist(&twist(&d3, &psi).unwrap(), &psi.inverse_unimodular().unwrap()).unwrap();
        assert_eq!(back.winding(), d3.winding());
    }

    #[test]
    fn triviality_examples() {
        let zero = desc(2, 1, 1, &[0]);
        assert!(is_k_trivial(&zero));
        assert!(has_classical_t_dual(&zero).exists);
        let heis = desc(2, 1, 1, &[1]);
        assert!(!is_k_trivial(&heis));
        assert!(!has_classical_t_dual(&heis).exists);
        let kb = k_bundle(&heis);
        assert_eq!(
            *kb.basis_loop(0, BasisOrder::Lex).unwrap().even(),
            IntMatrix::from_i64(2, 2, &[1, 1, 0, 1])
        );
        assert!(!kb.is_constant_identity().unwrap());
        assert!(k_bundle(&zero).is_constant_identity().unwrap());
    }

    #[test]
    fn rkk_examples() {
        let d = desc(2, 1, 2, &[2, 5]);
        let opts = RkkOptions::default();
        assert_eq!(
            compare_rkk(&d, &d, &opts).unwrap().kind,
            RkkVerdictKind::RkkEquivalentViaTwist
        );
        let neg = desc(2, 1, 2, &[-2, -5]);
        let v = compare_rkk(&d, &neg, &opts).unwrap();
        assert_eq!(v.kind, RkkVerdictKind::RkkEquivalentViaTwist);
        assert_eq!(
            v.witness,
            RkkWitness::Transform {
                a: IntMatrix::diagonal(&[-1]),
                psi: Some(IntMatrix::diagonal(&[-1, 1]))
            }
        );
        assert_eq!(
            compare_rkk(&d, &desc(2, 1, 2, &[2, 4]), &opts).unwrap().kind,
            RkkVerdictKind::NotEquivalent
        );

        let id = desc(3, 3, 3, &[1, 0, 0, 0, 1, 0, 0, 0, 1]);
        let flip = desc(3, 3, 3, &[1, 0, 0, 0, 1, 0, 0, 0, -1]);
        let v = compare_rkk(&id, &flip, &opts).unwrap();
        assert_eq!(v.kind, RkkVerdictKind::IsomorphicKBundlesOnly);
        assert_eq!(v.caveat, Some(RANK3_GAP_CAVEAT));
        let v = compare_rkk(&id, &id, &opts).unwrap();
        assert_eq!(
            v.witness,
            RkkWitness::Transform {
                a: IntMatrix::identity(3),
                psi: Some(IntMatrix::identity(3))
            }
        );
    }

    #[test]
    fn rank_four_search() {
        let w = IntMatrix::from_i64(6, 1, &[1, 0, 2, 0, -1, 3]);
        let d = BundleDescriptor::from_winding(4, w).unwrap();
        let psi = IntMatrix::from_i64(4, 4, &[1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0]);
        let t = twist(&d, &psi).unwrap();
        let v = compare_rkk(&d, &t, &RkkOptions::default()).unwrap();
        assert_eq!(v.kind, RkkVerdictKind::RkkEquivalentViaTwist);
        let opts = RkkOptions {
            psi: Some(psi),
            search_depth: 0,
        };
        assert_eq!(
            compare_rkk(&d, &t, &opts).unwrap().kind,
            RkkVerdictKind::RkkEquivalentViaTwist
        );
        let far = BundleDescriptor::from_winding(4, IntMatrix::from_i64(6, 1, &[7, 0, 0, 0, 0, 0])).unwrap();
        let v = compare_rkk(
            &d,
            &far,
            &RkkOptions {
                psi: None,
                search_depth: 1,
            },
        )
        .unwrap();
        assert_eq!(v.kind, RkkVerdictKind::Undetermined);
        assert!(!v.gl_orbit_equal);
    }

    #[test]
    fn induced_conjugator_intertwines() {
        let w1 = IntMatrix::from_i64(3, 2, &[1, 2, 0, -1, 3, 1]);
        let a = IntMatrix::from_i64(3, 3, &[1, 0, 0, 2, 1, 0, 0, 0, -1]);
        let w2 = a.matmul(&w1).unwrap();
        let t = induced_conjugator(3, &a).unwrap();
        for g in [[1i64, 0], [0, 1], [2, -3]] {
            let g: Vec<BigInt> = g.iter().map(|&x| BigInt::from(x)).collect();
            let r1 = representation(3, &w1, &g, BasisOrder::Lex).unwrap();
            let r2 = representation(3, &w2, &g, BasisOrder::Lex).unwrap();
            assert_eq!(r2.matmul(&t).unwrap(), t.matmul(&r1).unwrap());
        }
    }
}
