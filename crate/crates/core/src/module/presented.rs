//! Finitely presented modules, spans and maps between them.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::arith::matrix::{unit_vector, vec_is_zero};
use crate::arith::snf::{column_reduction, row_echelon};
use crate::arith::{left_kernel, solve_left_many, Domain, Echelon, Matrix, RingMap, Scalar};
use crate::error::{Error, Result};

/// Canonical description of a presented module.
#[derive(Clone, Debug)]
pub enum Classification {
    /// Over a field: the quotient has a basis of generator classes.
    Field {
        dimension: usize,
        /// Generator indices whose classes form a basis.
        basis: Vec<usize>,
        echelon: Echelon,
    },
    /// Over ℤ or a Laurent ring: `⊕ R/dᵢ ⊕ R^free_rank` with `dᵢ` non-units.
    Pid {
        torsion: Vec<Scalar>,
        free_rank: usize,
        /// Number of unit invariant factors preceding the torsion ones.
        units: usize,
        v: Matrix,
        v_inv: Matrix,
    },
}

impl Classification {
    /// Summary comparable across presentations.
    pub fn invariants(&self) -> ModuleInvariants {
        match self {
            Classification::Field { dimension, .. } => ModuleInvariants {
                torsion: Vec::new(),
                free_rank: *dimension,
            },
            Classification::Pid { torsion, free_rank, .. } => ModuleInvariants {
                torsion: torsion.clone(),
                free_rank: *free_rank,
            },
        }
    }
}

/// Isomorphism type: torsion invariant factors plus free rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleInvariants {
    pub torsion: Vec<Scalar>,
    pub free_rank: usize,
}

impl ModuleInvariants {
    pub fn is_zero(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

impl fmt::Display for ModuleInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let torsion: Vec<String> = self.torsion.iter().map(ToString::to_string).collect();
        write!(f, "torsion ({}) free rank {}", torsion.join(", "), self.free_rank)
    }
}

/// `R^g / rowspan(relations)`.
#[derive(Clone, Debug)]
pub struct PresentedModule {
    domain: Domain,
    generators: usize,
    relations: Matrix,
    preference: Vec<usize>,
    classification: Arc<OnceLock<Result<Classification>>>,
    reduced: Arc<OnceLock<Vec<Vec<Scalar>>>>,
}

impl PresentedModule {
    pub fn new(relations: Matrix) -> Self {
        let g = relations.cols();
        Self::with_preference(relations, (0..g).collect())
    }

    /// Over a field, basis classes are picked greedily in `preference` order.
    pub fn with_preference(relations: Matrix, preference: Vec<usize>) -> Self {
        assert_eq!(preference.len(), relations.cols());
        PresentedModule {
            domain: relations.domain().clone(),
            generators: relations.cols(),
            relations,
            preference,
            classification: Arc::new(OnceLock::new()),
            reduced: Arc::new(OnceLock::new()),
        }
    }

    pub fn free(domain: &Domain, rank: usize) -> Self {
        Self::new(Matrix::zeros(domain, 0, rank))
    }

    pub fn from_rows(domain: &Domain, generators: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        Ok(Self::new(Matrix::from_rows_with_width(domain, rows, generators)?))
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    /// A short list of rows spanning the same relation submodule.
    pub fn reduced_relations(&self) -> &[Vec<Scalar>] {
        self.reduced.get_or_init(|| {
            let d = &self.domain;
            let rows = self.relations.row_vecs();
            if d.is_field() {
                let mut e = Echelon::new(d, self.generators).expect("field");
                for r in &rows {
                    e.insert(r);
                }
                e.rows().to_vec()
            } else if d.is_pid() {
                row_echelon(d, rows, self.generators)
            } else {
                let mut rows: Vec<Vec<Scalar>> = rows.into_iter().filter(|r| !vec_is_zero(d, r)).collect();
                rows.sort();
                rows.dedup();
                rows
            }
        })
    }

    pub fn classification(&self) -> Result<&Classification> {
        self.classification
            .get_or_init(|| self.classify())
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn invariants(&self) -> Result<ModuleInvariants> {
        Ok(self.classification()?.invariants())
    }

    fn classify(&self) -> Result<Classification> {
        let d = &self.domain;
        if d.is_field() {
            // Eliminating least preferred generators first leaves the greedy
            // preferred basis as the complement.
            let order: Vec<usize> = self.preference.iter().rev().copied().collect();
            let mut echelon = Echelon::with_order(d, order)?;
            for i in 0..self.relations.rows() {
                echelon.insert(self.relations.row(i));
            }
            let basis: Vec<usize> = self
                .preference
                .iter()
                .copied()
                .filter(|c| !echelon.pivots().contains(c))
                .collect();
            return Ok(Classification::Field {
                dimension: basis.len(),
                basis,
                echelon,
            });
        }
        if d.is_pid() {
            let red = column_reduction(&self.relations)?;
            let units = red.factors.iter().take_while(|f| d.is_unit(f)).count();
            return Ok(Classification::Pid {
                torsion: red.factors[units..].to_vec(),
                free_rank: self.generators - red.factors.len(),
                units,
                v: red.v,
                v_inv: red.v_inv,
            });
        }
        Err(Error::UnsupportedDomain(format!("modules over {d} are not classified")))
    }

    /// Canonical coordinates of the class of `x`: over a field, coefficients on
    /// the basis classes; over a PID, torsion residues followed by free parts.
    pub fn coordinates(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        let d = &self.domain;
        match self.classification()? {
            Classification::Field { basis, echelon, .. } => {
                let r = echelon.reduce(x);
                Ok(basis.iter().map(|&c| r[c].clone()).collect())
            }
            Classification::Pid { torsion, units, v, .. } => {
                let y = v.vec_mul(x);
                let mut out = Vec::with_capacity(torsion.len() + y.len());
                for (k, t) in torsion.iter().enumerate() {
                    out.push(d.residue(&y[units + k], t)?);
                }
                out.extend(y[units + torsion.len()..].iter().cloned());
                Ok(out)
            }
        }
    }

    /// Generator-space representatives of the canonical generators.
    pub fn canonical_generators(&self) -> Result<Vec<Vec<Scalar>>> {
        match self.classification()? {
            Classification::Field { basis, .. } => {
                Ok(basis.iter().map(|&c| unit_vector(&self.domain, self.generators, c)).collect())
            }
            Classification::Pid { units, v_inv, .. } => {
                Ok((*units..self.generators).map(|i| v_inv.row(i).to_vec()).collect())
            }
        }
    }

    pub fn is_zero_class(&self, x: &[Scalar]) -> Result<bool> {
        Ok(vec_is_zero(&self.domain, &self.coordinates(x)?))
    }

    pub fn is_zero_module(&self) -> Result<bool> {
        Ok(self.invariants()?.is_zero())
    }

    pub fn is_isomorphic(&self, other: &PresentedModule) -> Result<bool> {
        Ok(self.invariants()? == other.invariants()?)
    }

    /// `M ⊗_R S`, presented by the images of the relations.
    pub fn base_change(&self, alpha: &RingMap) -> Result<PresentedModule> {
        Ok(PresentedModule::with_preference(self.relations.map(alpha)?, self.preference.clone()))
    }

    /// Adds relations, producing a quotient of `self`.
    pub fn quotient(&self, extra: &[Vec<Scalar>]) -> Result<PresentedModule> {
        let more = Matrix::from_rows_with_width(&self.domain, extra.to_vec(), self.generators)?;
        Ok(PresentedModule::with_preference(self.relations.vstack(&more)?, self.preference.clone()))
    }
}

/// An `R`-submodule of `R^n` given by spanning vectors.
#[derive(Clone, Debug)]
pub struct Span {
    quotient: PresentedModule,
}

impl Span {
    pub fn new(domain: &Domain, ambient: usize, generators: Vec<Vec<Scalar>>) -> Result<Self> {
        Ok(Span {
            quotient: PresentedModule::from_rows(domain, ambient, generators)?,
        })
    }

    pub fn domain(&self) -> &Domain {
        self.quotient.domain()
    }

    pub fn ambient(&self) -> usize {
        self.quotient.generators()
    }

    pub fn generators(&self) -> Vec<Vec<Scalar>> {
        self.quotient.relations().row_vecs()
    }

    /// `R^n / span`.
    pub fn quotient(&self) -> &PresentedModule {
        &self.quotient
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        self.quotient.is_zero_class(v)
    }

    pub fn contains_span(&self, other: &Span) -> Result<bool> {
        for g in other.generators() {
            if !self.contains(&g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Double inclusion.
    pub fn equals(&self, other: &Span) -> Result<bool> {
        Ok(self.contains_span(other)? && other.contains_span(self)?)
    }

    /// Rank of the span (ambient rank minus the free rank of the quotient).
    pub fn rank(&self) -> Result<usize> {
        Ok(self.ambient() - self.quotient.invariants()?.free_rank)
    }

    /// The span is all of `R^n`.
    pub fn is_everything(&self) -> Result<bool> {
        self.quotient.is_zero_module()
    }
}

/// `x ↦ α(x)·M` on generator coordinates; row `i` of `M` is the image of generator `i`.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: PresentedModule,
    pub target: PresentedModule,
    pub matrix: Matrix,
    pub semilinear: Option<RingMap>,
}

impl ModuleMap {
    pub fn new(source: PresentedModule, target: PresentedModule, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != source.generators() || matrix.cols() != target.generators() {
            return Err(Error::ShapeMismatch(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                source.generators(),
                target.generators()
            )));
        }
        Ok(ModuleMap {
            source,
            target,
            matrix,
            semilinear: None,
        })
    }

    pub fn semilinear(mut self, alpha: RingMap) -> Self {
        self.semilinear = Some(alpha);
        self
    }

    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        match &self.semilinear {
            Some(alpha) => self.matrix.vec_mul(&alpha.apply_all(x)),
            None => self.matrix.vec_mul(x),
        }
    }

    /// Every source relation lands in the target relation span. Returns the
    /// index of an offending row of the reduced source relations on failure.
    pub fn well_defined(&self) -> Result<std::result::Result<(), usize>> {
        for (i, r) in self.source.reduced_relations().iter().enumerate() {
            if !self.target.is_zero_class(&self.apply(r))? {
                return Ok(Err(i));
            }
        }
        Ok(Ok(()))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &ModuleMap) -> Result<ModuleMap> {
        if self.semilinear.is_some() || next.semilinear.is_some() {
            return Err(Error::UnsupportedMap("composition of semilinear maps".into()));
        }
        ModuleMap::new(self.source.clone(), next.target.clone(), self.matrix.mul(&next.matrix)?)
    }

    /// `target / image`.
    pub fn cokernel(&self) -> Result<PresentedModule> {
        let images: Vec<Vec<Scalar>> = (0..self.source.generators())
            .map(|i| self.apply(&unit_vector(self.source.domain(), self.source.generators(), i)))
            .collect();
        self.target.quotient(&images)
    }

    pub fn is_surjective(&self) -> Result<bool> {
        self.cokernel()?.is_zero_module()
    }

    /// Surjective between isomorphic finitely generated modules, hence bijective.
    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.well_defined()?.is_ok() && self.is_surjective()? && self.source.is_isomorphic(&self.target)?)
    }

    /// Kernel of a linear map, presented on a generating set of its preimage lattice.
    pub fn kernel(&self) -> Result<PresentedModule> {
        if self.semilinear.is_some() {
            return Err(Error::UnsupportedMap("kernel of a semilinear map".into()));
        }
        let d = self.source.domain();
        let g = self.source.generators();
        // x·M ∈ rowspan(T)  ⟺  (x, z)·[M; −T] = 0 for some z.
        let neg_t = self.target.relations().scale(&d.from_i64(-1));
        let stacked = self.matrix.vstack(&neg_t)?;
        let lifts: Vec<Vec<Scalar>> = left_kernel(&stacked)?
            .into_iter()
            .map(|v| v[..g].to_vec())
            .filter(|v| !vec_is_zero(d, v))
            .collect();
        let k = lifts.len();
        let gens = Matrix::from_rows_with_width(d, lifts, g)?;
        let mut rows = left_kernel(&gens)?;
        for c in solve_left_many(&gens, self.source.reduced_relations())? {
            rows.push(c.ok_or_else(|| Error::ShapeMismatch("relation outside the kernel lattice".into()))?);
        }
        Ok(PresentedModule::new(Matrix::from_rows_with_width(d, rows, k)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|x| Domain::Integers.from_i64(*x)).collect()
    }

    #[test]
    fn integer_classification() {
        let zz = Domain::Integers;
        let m = PresentedModule::from_rows(&zz, 3, vec![z(&[2, 0, 0]), z(&[0, 4, 0]), z(&[0, 0, 0])]).unwrap();
        let inv = m.invariants().unwrap();
        assert_eq!(inv.torsion, z(&[2, 4]));
        assert_eq!(inv.free_rank, 1);
        assert!(m.is_zero_class(&z(&[2, 8, 0])).unwrap());
        assert!(!m.is_zero_class(&z(&[1, 0, 0])).unwrap());
        assert_eq!(m.canonical_generators().unwrap().len(), 3);
    }

    #[test]
    fn field_basis_follows_preference() {
        let q = Domain::Rationals;
        let rel = Matrix::from_i64(&q, &[&[1, -1, 0]]);
        let m = PresentedModule::with_preference(rel.clone(), vec![1, 0, 2]);
        match m.classification().unwrap() {
            Classification::Field { basis, .. } => assert_eq!(basis, &vec![1, 2]),
            _ => unreachable!(),
        }
        let m = PresentedModule::new(rel);
        match m.classification().unwrap() {
            Classification::Field { basis, .. } => assert_eq!(basis, &vec![0, 2]),
            _ => unreachable!(),
        }
    }

    #[test]
    fn kernel_and_cokernel() {
        let zz = Domain::Integers;
        // ℤ² / (2,0) → ℤ, (a, b) ↦ 2b
        let src = PresentedModule::from_rows(&zz, 2, vec![z(&[2, 0])]).unwrap();
        let tgt = PresentedModule::free(&zz, 1);
        let f = ModuleMap::new(src, tgt, Matrix::from_i64(&zz, &[&[0], &[2]])).unwrap();
        assert!(f.well_defined().unwrap().is_ok());
        let coker = f.cokernel().unwrap().invariants().unwrap();
        assert_eq!(coker.torsion, z(&[2]));
        let ker = f.kernel().unwrap().invariants().unwrap();
        assert_eq!(ker.torsion, z(&[2]));
        assert_eq!(ker.free_rank, 0);
        assert!(!f.is_isomorphism().unwrap());
    }

    #[test]
    fn spans() {
        let zz = Domain::Integers;
        let a = Span::new(&zz, 2, vec![z(&[2, 0]), z(&[0, 2])]).unwrap();
        let b = Span::new(&zz, 2, vec![z(&[2, 2]), z(&[2, -2]), z(&[0, 2])]).unwrap();
        assert!(a.equals(&b).unwrap());
        assert_eq!(a.rank().unwrap(), 2);
        assert!(!a.is_everything().unwrap());
    }
}
