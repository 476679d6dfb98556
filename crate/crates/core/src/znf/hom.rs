//! Hom groups, Pontryagin duals and values in ℚ/ℤ.

use std::fmt;
use std::sync::Arc;

use super::group::AbGroup;
use super::int::{self, Int};
use super::matrix::IntMatrix;
use super::morphism::Morphism;
use crate::error::{Error, Result};

/// An element of ℚ/ℤ in lowest terms with `0 <= num < den`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QZ {
    num: Int,
    den: Int,
}

impl QZ {
    pub fn new(num: Int, den: Int) -> Self {
        assert!(!int::is_zero(&den), "zero denominator");
        let (mut num, mut den) = if int::is_neg(&den) { (-num, -den) } else { (num, den) };
        num = int::rem_floor(&num, &den);
        let g = int::gcd(&num, &den);
        if !int::is_zero(&g) && !int::is_one(&g) {
            num = int::div_exact(&num, &g);
            den = int::div_exact(&den, &g);
        }
        if int::is_zero(&num) {
            den = int::one();
        }
        QZ { num, den }
    }

    pub fn zero() -> Self {
        QZ { num: int::zero(), den: int::one() }
    }

    pub fn is_zero(&self) -> bool {
        int::is_zero(&self.num)
    }

    pub fn add(&self, o: &QZ) -> QZ {
        QZ::new(&self.num * &o.den + &o.num * &self.den, &self.den * &o.den)
    }

    pub fn scale(&self, c: &Int) -> QZ {
        QZ::new(&self.num * c, self.den.clone())
    }

    pub fn num(&self) -> &Int {
        &self.num
    }

    pub fn den(&self) -> &Int {
        &self.den
    }

    /// The representative in `ℤ/n` of `n·self`, if `self` is killed by `n`.
    pub fn times(&self, n: &Int) -> Option<Int> {
        let x = &self.num * n;
        if int::divides(&self.den, &x) {
            Some(int::rem_floor(&int::div_exact(&x, &self.den), n))
        } else {
            None
        }
    }
}

impl fmt::Debug for QZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// `Hom(A, B)` in canonical coordinates: an element is a matrix `X` with
/// `X[j][i]` the `j`-th coordinate of the image of the `i`-th generator of `A`.
#[derive(Clone, Debug)]
pub struct HomGroup {
    pub group: Arc<AbGroup>,
    pub source: Arc<AbGroup>,
    pub target: Arc<AbGroup>,
}

pub fn hom_group(a: Arc<AbGroup>, b: Arc<AbGroup>) -> HomGroup {
    let ha = a.num_generators();
    let hb = b.num_generators();
    let mut moduli = Vec::with_capacity(ha * hb);
    let mut gens = Vec::new();
    for j in 0..hb {
        for i in 0..ha {
            let (ai, bj) = (&a.invariants()[i], &b.invariants()[j]);
            moduli.push(bj.clone());
            let step = if int::is_zero(bj) {
                if int::is_zero(ai) {
                    Some(int::one())
                } else {
                    None
                }
            } else if int::is_zero(ai) {
                Some(int::one())
            } else {
                Some(int::div_exact(bj, &int::gcd(ai, bj)))
            };
            if let Some(s) = step {
                let mut v = vec![int::zero(); ha * hb];
                v[j * ha + i] = s;
                gens.push(v);
            }
        }
    }
    let group = AbGroup::subquotient(&moduli, &gens, &[]).expect("hom lattice contains its moduli");
    HomGroup { group: Arc::new(group), source: a, target: b }
}

impl HomGroup {
    fn matrix_of(&self, h: &[Int]) -> IntMatrix {
        let ha = self.source.num_generators();
        let hb = self.target.num_generators();
        let rows = (0..hb).map(|j| h[j * ha..(j + 1) * ha].to_vec()).collect();
        IntMatrix::from_int_rows(hb, ha, rows)
    }

    /// Evaluate a homomorphism on an element of the source.
    pub fn evaluate(&self, h: &[Int], a: &[Int]) -> Result<Vec<Int>> {
        if !self.group.contains(h) {
            return Err(Error::Invalid("not a homomorphism".into()));
        }
        let c = self.source.coords(a).ok_or_else(|| Error::Invalid("element not in source".into()))?;
        let y = self.matrix_of(h).mul_vec(&c);
        Ok(self.target.element(&self.target_reduce(&y)))
    }

    fn target_reduce(&self, y: &[Int]) -> Vec<Int> {
        y.iter().zip(self.target.invariants()).map(|(x, d)| int::reduce(x, d)).collect()
    }

    /// The homomorphism as a map of groups.
    pub fn to_morphism(&self, h: &[Int]) -> Result<Morphism> {
        let x = self.matrix_of(h);
        let src = self.source.clone();
        let tgt = self.target.clone();
        Morphism::from_fn(src.clone(), tgt.clone(), |v| {
            let c = src.coords(v).expect("generator in source");
            tgt.element(&self.target_reduce(&x.mul_vec(&c)))
        })
    }

    /// The element of Hom representing a given map.
    pub fn from_morphism(&self, f: &Morphism) -> Vec<Int> {
        let m = f.canonical_matrix();
        let mut out = Vec::new();
        for j in 0..m.rows() {
            for i in 0..m.cols() {
                out.push(m.get(j, i).clone());
            }
        }
        self.group.reduce(&out)
    }
}

/// Pontryagin dual of a finite group. An element `χ` has coordinates `χ_i` with
/// `χ(g_i) = χ_i / d_i`, where `g_i` is the i-th canonical generator of order `d_i`.
#[derive(Clone, Debug)]
pub struct DualGroup {
    pub group: Arc<AbGroup>,
    pub of: Arc<AbGroup>,
}

pub fn dual_group(a: Arc<AbGroup>) -> Result<DualGroup> {
    if !a.is_finite() {
        return Err(Error::Invalid("dual of an infinite group".into()));
    }
    Ok(DualGroup { group: Arc::new(AbGroup::diagonal(a.invariants())), of: a })
}

impl DualGroup {
    pub fn pair(&self, chi: &[Int], a: &[Int]) -> QZ {
        let c = self.of.coords(a).expect("element of the dualised group");
        let mut acc = QZ::zero();
        for ((x, y), d) in chi.iter().zip(&c).zip(self.of.invariants()) {
            acc = acc.add(&QZ::new(x * y, d.clone()));
        }
        acc
    }

    /// Canonical map `A -> A^∨∨` together with the double dual itself.
    pub fn double_dual(&self) -> Result<(DualGroup, Morphism)> {
        let dd = dual_group(self.group.clone())?;
        let a = self.of.clone();
        // The dual's canonical generators are the coordinate characters, so
        // evaluation at `a` has coordinates equal to those of `a`.
        let ev = Morphism::from_fn(a.clone(), dd.group.clone(), |v| {
            let c = a.coords(v).expect("element");
            dd.group.element(&c)
        })?;
        Ok((dd, ev))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::znf::int::int;

    #[test]
    fn qz_arithmetic() {
        let a = QZ::new(int(1), int(2));
        assert!(a.add(&a).is_zero());
        assert_eq!(QZ::new(int(-1), int(3)), QZ::new(int(2), int(3)));
        assert_eq!(QZ::new(int(3), int(4)).times(&int(8)), Some(int(6)));
    }

    #[test]
    fn hom_z2_z4() {
        let h = hom_group(Arc::new(AbGroup::cyclic(2)), Arc::new(AbGroup::cyclic(4)));
        assert_eq!(h.group.order(), Some(int(2)));
        let hz = hom_group(Arc::new(AbGroup::free(1)), Arc::new(AbGroup::cyclic(6)));
        assert_eq!(hz.group.invariants(), &[int(6)]);
    }

    #[test]
    fn dual_of_cyclic() {
        let d = dual_group(Arc::new(AbGroup::cyclic(6))).unwrap();
        assert_eq!(d.group.invariants(), &[int(6)]);
        assert!(dual_group(Arc::new(AbGroup::free(1))).is_err());
    }
}
