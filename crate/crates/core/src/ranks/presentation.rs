use crate::error::{Error, Result};
use crate::groupring::{RingElem, RingMatrix};
use crate::groups::GroupSpec;

/// `M = (ℤΓ)^{1×n} / (ℤΓ)^{1×m} f` for an `m×n` relation matrix `f`.
///
/// `m = 0` encodes the free module `(ℤΓ)^{1×n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    n: usize,
    f: RingMatrix,
}

impl ModulePresentation {
    pub fn new(f: RingMatrix) -> Result<Self> {
        if f.cols() == 0 {
            return Err(Error::Input("a presentation needs at least one generator".into()));
        }
        Ok(ModulePresentation { n: f.cols(), f })
    }

    pub fn free(group: &GroupSpec, n: usize) -> Result<Self> {
        Self::new(RingMatrix::zero(group, 0, n))
    }

    pub fn group(&self) -> &GroupSpec {
        self.f.group()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.f.rows()
    }

    pub fn relations(&self) -> &RingMatrix {
        &self.f
    }

    /// Images of the standard basis vectors of `(ℤΓ)^{1×n}`.
    pub fn canonical_generators(&self) -> GeneratorList {
        GeneratorList::standard_basis(self.group(), self.n)
    }

    /// The rows of `f`, generating the relation submodule.
    pub fn relation_rows(&self) -> GeneratorList {
        GeneratorList::rows_of(&self.f)
    }
}

/// A finite list of row vectors in `(ℤΓ)^{1×n}` (or `(ℚΓ)^{1×n}`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorList {
    group: GroupSpec,
    n: usize,
    vectors: Vec<Vec<RingElem>>,
}

impl GeneratorList {
    pub fn new(group: &GroupSpec, n: usize, vectors: Vec<Vec<RingElem>>) -> Result<Self> {
        for v in &vectors {
            if v.len() != n {
                return Err(Error::Shape(format!("generator of length {} in a list of width {n}", v.len())));
            }
            if let Some(bad) = v.iter().find(|e| e.group() != group) {
                return Err(Error::GroupMismatch(format!("{:?} vs {:?}", bad.group(), group)));
            }
        }
        Ok(GeneratorList { group: group.clone(), n, vectors })
    }

    pub fn standard_basis(group: &GroupSpec, n: usize) -> Self {
        let vectors = (0..n)
            .map(|k| (0..n).map(|i| if i == k { RingElem::one(group) } else { RingElem::zero(group) }).collect())
            .collect();
        GeneratorList { group: group.clone(), n, vectors }
    }

    pub fn rows_of(f: &RingMatrix) -> Self {
        let vectors = (0..f.rows()).map(|j| f.row(j).to_vec()).collect();
        GeneratorList { group: f.group().clone(), n: f.cols(), vectors }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<RingElem>] {
        &self.vectors
    }

    /// Concatenation of two lists over the same group and width.
    pub fn union(&self, other: &GeneratorList) -> Result<GeneratorList> {
        let mut vectors = self.vectors.clone();
        vectors.extend(other.vectors.iter().cloned());
        GeneratorList::new(&self.group, self.n, vectors).and_then(|g| {
            if other.group == self.group && other.n == self.n {
                Ok(g)
            } else {
                Err(Error::Shape("generator lists of different shapes".into()))
            }
        })
    }

    /// Union of the supports of all coordinates of all generators.
    pub fn support(&self) -> crate::groups::ElementSet {
        self.vectors.iter().flatten().flat_map(|e| e.terms().keys().cloned()).collect()
    }
}
