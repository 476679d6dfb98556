//! Homomorphisms between presented groups, with kernels, images and cokernels.

use std::sync::Arc;

use super::group::{reduce_vec, AbGroup};
use super::int::{self, Int};
use super::lattice::{kernel_lattice, solve_in_span};
use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// A homomorphism, stored as the images of the source's generating lattice basis.
#[derive(Clone)]
pub struct Morphism {
    source: Arc<AbGroup>,
    target: Arc<AbGroup>,
    images: Vec<Vec<Int>>,
}

impl std::fmt::Debug for Morphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Morphism({:?} -> {:?}, {:?})", self.source, self.target, self.canonical_matrix())
    }
}

impl Morphism {
    /// Build from a function on ambient vectors that is additive on the source subgroup.
    /// Fails if the source relations are not sent into the target relations.
    pub fn from_fn<F: Fn(&[Int]) -> Vec<Int>>(source: Arc<AbGroup>, target: Arc<AbGroup>, f: F) -> Result<Self> {
        let images: Vec<Vec<Int>> = source.numer_basis().iter().map(|b| target.reduce(&f(b))).collect();
        Self::from_images(source, target, images)
    }

    pub fn from_images(source: Arc<AbGroup>, target: Arc<AbGroup>, images: Vec<Vec<Int>>) -> Result<Self> {
        if images.len() != source.numer_basis().len() {
            return Err(Error::Invalid("wrong number of generator images".into()));
        }
        for (i, im) in images.iter().enumerate() {
            if im.len() != target.ambient_dim() {
                return Err(Error::Invalid("image vector has the wrong length".into()));
            }
            if !target.contains(im) {
                return Err(Error::NotWellDefined(format!("image of generator {i} lies outside the target subgroup")));
            }
        }
        let m = Morphism { source, target, images };
        for (i, d) in m.source.denom().basis().iter().enumerate() {
            let im = m.apply_unchecked(d);
            if !m.target.is_zero_elem(&im) {
                return Err(Error::NotWellDefined(format!("relation {i} of the source maps to a nonzero element {im:?}")));
            }
        }
        Ok(m)
    }

    /// Map given by an integer matrix on ambient coordinates.
    pub fn from_matrix(source: Arc<AbGroup>, target: Arc<AbGroup>, m: &IntMatrix) -> Result<Self> {
        if m.cols() != source.ambient_dim() || m.rows() != target.ambient_dim() {
            return Err(Error::Invalid(format!(
                "matrix is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                target.ambient_dim(),
                source.ambient_dim()
            )));
        }
        Self::from_fn(source, target, |v| m.mul_vec(v))
    }

    pub fn identity(g: Arc<AbGroup>) -> Self {
        Self::from_fn(g.clone(), g, |v| v.to_vec()).expect("identity is well defined")
    }

    pub fn zero(source: Arc<AbGroup>, target: Arc<AbGroup>) -> Self {
        let z = target.zero_vec();
        Self::from_fn(source, target, |_| z.clone()).expect("zero map is well defined")
    }

    /// Inclusion of a subgroup sharing the ambient and relations of `target`.
    pub fn inclusion(sub: Arc<AbGroup>, target: Arc<AbGroup>) -> Result<Self> {
        Self::from_fn(sub, target, |v| v.to_vec())
    }

    pub fn source(&self) -> &Arc<AbGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AbGroup> {
        &self.target
    }

    pub fn generator_images(&self) -> &[Vec<Int>] {
        &self.images
    }

    fn apply_unchecked(&self, v: &[Int]) -> Vec<Int> {
        let c = self.source.numer().coords(v).expect("vector lies in the source subgroup");
        self.combine(&c)
    }

    fn combine(&self, c: &[Int]) -> Vec<Int> {
        let mut out = self.target.zero_vec();
        for (ci, im) in c.iter().zip(&self.images) {
            if int::is_zero(ci) {
                continue;
            }
            for (o, x) in out.iter_mut().zip(im) {
                if !int::is_zero(x) {
                    *o += ci * x;
                }
            }
        }
        self.target.reduce(&out)
    }

    /// Image of an element of the source subgroup.
    pub fn apply(&self, v: &[Int]) -> Result<Vec<Int>> {
        let c = self
            .source
            .numer()
            .coords(&self.source.reduce(v))
            .ok_or_else(|| Error::Invalid("element is not in the source group".into()))?;
        Ok(self.combine(&c))
    }

    /// Matrix in canonical coordinates (target generators × source generators).
    pub fn canonical_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<Int>> = (0..self.source.num_generators())
            .map(|i| self.target.coords(&self.apply_unchecked(&self.source.generator(i))).expect("image in target"))
            .collect();
        IntMatrix::from_columns(self.target.num_generators(), &cols)
    }

    pub fn compose(&self, after: &Morphism) -> Result<Morphism> {
        // after ∘ self
        let images: Vec<Vec<Int>> = self.images.iter().map(|im| after.apply(im)).collect::<Result<_>>()?;
        Morphism::from_images(self.source.clone(), after.target.clone(), images)
    }

    /// Kernel, as a subgroup of the source ambient with the source relations.
    pub fn kernel(&self) -> AbGroup {
        let k = self.images.len();
        let t = &self.target;
        let h = t.num_generators();
        // Canonical target coordinates of each generator image, as columns.
        let g: Vec<Vec<Int>> = self.images.iter().map(|im| t.coords(im).expect("image in target")).collect();
        let rows: Vec<(Vec<Int>, Int)> = (0..h).map(|j| (g.iter().map(|c| c[j].clone()).collect(), t.invariants()[j].clone())).collect();
        let ker = kernel_lattice(k, &rows);
        let basis = self.source.numer_basis();
        let gens: Vec<Vec<Int>> = ker.iter().map(|c| combine_rows(basis, c, self.source.ambient_dim())).collect();
        self.source.with_numer(&gens).expect("kernel lies in the source")
    }

    pub fn image(&self) -> AbGroup {
        self.target.with_numer(&self.images).expect("images lie in the target")
    }

    pub fn cokernel(&self) -> AbGroup {
        self.target.quotient_by(&self.images).expect("images lie in the target")
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|im| self.target.is_zero_elem(im))
    }

    /// Some element mapping to `y`, if one exists.
    pub fn preimage(&self, y: &[Int]) -> Option<Vec<Int>> {
        let t = &self.target;
        let target_coords = t.coords(y)?;
        let h = t.num_generators();
        let mut gens: Vec<Vec<Int>> = self.images.iter().map(|im| t.coords(im).expect("image in target")).collect();
        let k = gens.len();
        for (j, d) in t.invariants().iter().enumerate() {
            if !int::is_zero(d) {
                let mut e = vec![int::zero(); h];
                e[j] = d.clone();
                gens.push(e);
            }
        }
        let c = solve_in_span(h, &gens, &target_coords)?;
        Some(self.source.reduce(&combine_rows(self.source.numer_basis(), &c[..k], self.source.ambient_dim())))
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Result<Morphism> {
        if !self.is_isomorphism() {
            return Err(Error::Invalid("map is not an isomorphism".into()));
        }
        let images: Vec<Vec<Int>> = self
            .target
            .numer_basis()
            .iter()
            .map(|b| self.preimage(b).ok_or_else(|| Error::Invalid("missing preimage".into())))
            .collect::<Result<_>>()?;
        Morphism::from_images(self.target.clone(), self.source.clone(), images)
    }

    /// Agreement with another map between the same groups, checked on generators.
    pub fn agrees_with(&self, other: &Morphism) -> bool {
        if self.source.ambient_dim() != other.source.ambient_dim() || self.target.ambient_dim() != other.target.ambient_dim() {
            return false;
        }
        self.source
            .numer_basis()
            .iter()
            .all(|b| match (self.apply(b), other.apply(b)) {
                (Ok(x), Ok(y)) => self.target.elems_equal(&x, &y),
                _ => false,
            })
    }
}

pub(crate) fn combine_rows(basis: &[Vec<Int>], c: &[Int], dim: usize) -> Vec<Int> {
    let mut out = vec![int::zero(); dim];
    for (ci, b) in c.iter().zip(basis) {
        if int::is_zero(ci) {
            continue;
        }
        for (o, x) in out.iter_mut().zip(b) {
            if !int::is_zero(x) {
                *o += ci * x;
            }
        }
    }
    out
}

/// Kernel, image and cokernel of a map in one call.
pub struct KernelImage {
    pub kernel: AbGroup,
    pub image: AbGroup,
    pub cokernel: AbGroup,
}

pub fn morphism_kernel_image(f: &Morphism) -> KernelImage {
    KernelImage { kernel: f.kernel(), image: f.image(), cokernel: f.cokernel() }
}

/// Exactness of `A --f--> B --g--> C` at `B`: image of f equals kernel of g.
pub fn is_exact_at(f: &Morphism, g: &Morphism) -> bool {
    exactness_defect(f, g).is_none()
}

/// `None` when exact, otherwise a witness description.
pub fn exactness_defect(f: &Morphism, g: &Morphism) -> Option<String> {
    let b = f.target();
    if b.moduli() != g.source().moduli() || !b.denom().same_as(g.source().denom()) {
        return Some("maps do not share the middle group".into());
    }
    for im in f.generator_images() {
        if let Ok(z) = g.apply(im) {
            if !g.target().is_zero_elem(&z) {
                return Some(format!("composite is nonzero on {im:?}"));
            }
        }
    }
    let ker = g.kernel();
    let img = f.image();
    if img.numer().same_as(ker.numer()) {
        None
    } else {
        let witness = ker.numer_basis().iter().find(|v| !img.contains(v)).cloned();
        Some(format!("kernel element outside the image: {witness:?}"))
    }
}

/// Reduce a vector modulo a list of moduli.
pub fn reduce_mod(v: &[Int], moduli: &[Int]) -> Vec<Int> {
    reduce_vec(v, moduli)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::znf::int::int;

    fn arc(g: AbGroup) -> Arc<AbGroup> {
        Arc::new(g)
    }

    #[test]
    fn doubling_on_z4() {
        let z4 = arc(AbGroup::cyclic(4));
        let f = Morphism::from_matrix(z4.clone(), z4.clone(), &IntMatrix::from_rows(&[vec![2]])).unwrap();
        let ki = morphism_kernel_image(&f);
        assert_eq!(ki.kernel.order(), Some(int(2)));
        assert_eq!(ki.image.order(), Some(int(2)));
        assert_eq!(ki.cokernel.order(), Some(int(2)));
        assert!(is_exact_at(&f, &f));
    }

    #[test]
    fn ill_defined_map_rejected() {
        let z2 = arc(AbGroup::cyclic(2));
        let z4 = arc(AbGroup::cyclic(4));
        let r = Morphism::from_matrix(z2, z4, &IntMatrix::from_rows(&[vec![1]]));
        assert!(matches!(r, Err(Error::NotWellDefined(_))));
    }

    #[test]
    fn inverse_of_automorphism() {
        let z5 = arc(AbGroup::cyclic(5));
        let f = Morphism::from_matrix(z5.clone(), z5.clone(), &IntMatrix::from_rows(&[vec![2]])).unwrap();
        let g = f.inverse().unwrap();
        let id = f.compose(&g).unwrap();
        assert!(id.agrees_with(&Morphism::identity(z5)));
    }

    #[test]
    fn preimage_search() {
        let z = arc(AbGroup::free(1));
        let z6 = arc(AbGroup::cyclic(6));
        let f = Morphism::from_matrix(z, z6, &IntMatrix::from_rows(&[vec![4]])).unwrap();
        assert!(f.preimage(&[int(2)]).is_some());
        assert!(f.preimage(&[int(1)]).is_none());
    }
}
