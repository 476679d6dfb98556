//! Finite cochain complexes of presented abelian groups.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::znf::{exactness_defect, AbGroup, Morphism};

/// Terms `K^0, …, K^{top+1}` with differentials `d^r: K^r → K^{r+1}`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub terms: Vec<Arc<AbGroup>>,
    pub differentials: Vec<Morphism>,
}

impl CochainComplex {
    pub fn new(terms: Vec<Arc<AbGroup>>, differentials: Vec<Morphism>) -> Result<Self> {
        if terms.is_empty() || differentials.len() + 1 != terms.len() {
            return Err(Error::Invalid("a complex needs one differential between consecutive terms".into()));
        }
        Ok(CochainComplex { terms, differentials })
    }

    /// Highest degree whose cohomology can be computed.
    pub fn top(&self) -> usize {
        self.terms.len() - 2
    }

    pub fn term(&self, r: isize) -> Arc<AbGroup> {
        if r < 0 || r as usize >= self.terms.len() {
            Arc::new(AbGroup::diagonal(&[]))
        } else {
            self.terms[r as usize].clone()
        }
    }

    pub fn d_squared_zero(&self) -> bool {
        self.differentials.windows(2).all(|w| w[0].compose(&w[1]).map(|m| m.is_zero()).unwrap_or(false))
    }

    pub fn cohomology(&self, r: usize) -> Result<Arc<AbGroup>> {
        if r > self.top() {
            return Err(Error::Unsupported(format!("degree {r} is above the computed range 0..={}", self.top())));
        }
        let cocycles = self.differentials[r].kernel();
        let h = if r == 0 { cocycles } else { cocycles.quotient_by(self.differentials[r - 1].generator_images())? };
        Ok(Arc::new(h))
    }
}

/// A map given on ambient vectors, applied to cohomology classes.
pub fn induced<F: Fn(&[crate::znf::Int]) -> Vec<crate::znf::Int>>(source: &Arc<AbGroup>, target: &Arc<AbGroup>, f: F) -> Result<Morphism> {
    Morphism::from_fn(source.clone(), target.clone(), f)
}

/// One node of a long exact sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceNode {
    pub label: String,
    pub exact: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceReport {
    pub nodes: Vec<SequenceNode>,
}

impl SequenceReport {
    pub fn exact(&self) -> bool {
        self.nodes.iter().all(|n| n.exact)
    }
}

/// Exactness at every interior node of a chain of composable maps.
pub fn check_sequence(maps: &[(String, Morphism)]) -> SequenceReport {
    let nodes = maps
        .windows(2)
        .map(|w| {
            let witness = exactness_defect(&w[0].1, &w[1].1);
            SequenceNode { label: format!("{} | {}", w[0].0, w[1].0), exact: witness.is_none(), witness }
        })
        .collect();
    SequenceReport { nodes }
}

pub fn zero_group() -> Arc<AbGroup> {
    Arc::new(AbGroup::diagonal(&[]))
}
