//! Dimension of `S_{H,V}(G)`: the pairing matrix, its rank, the trace
//! formula over minimal sections, and the certificate suite.

mod certificates;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{act, trace_image_dim, Field, FormalSum, KModule, Matrix};
use crate::sections::{conjugated_link, enumerate_section_orbits, SectionOrbit};
use crate::structure::lattice::SubgroupLattice;
use crate::structure::out::OutGroup;

pub use certificates::{sectional_rank, Certificate, CertificateKind, Claim};

/// Section orbits of `Σ_H(G)` with their pairwise pairing elements; shared by
/// every module evaluated for the same pair `(G, H)`.
pub struct Evaluator<'a> {
    lattice: &'a SubgroupLattice,
    out: &'a OutGroup,
    orbits: Vec<SectionOrbit>,
    pairings: OnceLock<Result<Vec<Vec<FormalSum>>>>,
}

/// The pairing matrix: block `(i, j)` is the action of the pairing element
/// of orbit `i` against orbit `j`.
#[derive(Debug)]
pub struct PairingMatrix {
    pub elements: Vec<Vec<FormalSum>>,
    pub blocks: Vec<Vec<Matrix>>,
    pub assembled: Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    RankFormula,
    ClosedFormula,
    EmptySigma,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitTrace {
    pub orbit: usize,
    pub minimal: bool,
    pub trace_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub group_order: usize,
    pub subquotient_order: usize,
    pub field: Field,
    pub module: String,
    pub module_dim: usize,
    pub orbit_count: usize,
    pub dim: usize,
    pub vanishes: bool,
    pub method: Method,
    pub lower_bound: usize,
    /// Set whenever every orbit is minimal.
    pub closed_formula: Option<usize>,
    /// Set when the pairing matrix was ranked.
    pub rank_dim: Option<usize>,
    pub per_orbit_traces: Vec<OrbitTrace>,
    pub certificates: Vec<Certificate>,
}

impl<'a> Evaluator<'a> {
    pub fn new(lattice: &'a SubgroupLattice, out: &'a OutGroup) -> Result<Evaluator<'a>> {
        let orbits = enumerate_section_orbits(lattice, out)?;
        Ok(Evaluator {
            lattice,
            out,
            orbits,
            pairings: OnceLock::new(),
        })
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        self.lattice
    }

    pub fn out(&self) -> &OutGroup {
        self.out
    }

    pub fn orbits(&self) -> &[SectionOrbit] {
        &self.orbits
    }

    pub fn all_minimal(&self) -> bool {
        self.orbits.iter().all(|o| o.minimal)
    }

    fn check_module(&self, module: &KModule) -> Result<()> {
        if module.out_order() != self.out.order() {
            return Err(Error::Module(format!(
                "module has {} matrices but the outer automorphism group has order {}",
                module.out_order(),
                self.out.order()
            )));
        }
        Ok(())
    }

    /// Sum over `g ∈ [B\G/T]` with `(B, A)` linked to `g(T, S)g⁻¹` of the
    /// class of `σ_B⁻¹ ∘ φ ∘ Conj_g ∘ σ_T`, for `b`, `t` orbit indices.
    pub fn pairing_element(&self, b: usize, t: usize) -> Result<FormalSum> {
        let ob = &self.orbits[b];
        let ot = &self.orbits[t];
        let mut u = FormalSum::new();
        for (g, _) in self.lattice.double_coset_reps(ob.rep.top, ot.rep.top) {
            let Some(map) = conjugated_link(self.lattice, ot.rep, &ot.quotient, ob.rep, &ob.quotient, g)
            else {
                continue;
            };
            let images: Vec<u32> = self
                .out
                .generators()
                .iter()
                .map(|&h| ob.sigma_inverse(map[ot.sigma.apply(h) as usize]))
                .collect();
            u.add(self.out.class_of_images(&images)?, 1);
        }
        Ok(u)
    }

    /// Pairing elements for all orbit pairs, computed once.
    pub fn pairing_elements(&self) -> Result<&[Vec<FormalSum>]> {
        let cached = self.pairings.get_or_init(|| {
            let m = self.orbits.len();
            (0..m)
                .map(|b| (0..m).map(|t| self.pairing_element(b, t)).collect())
                .collect()
        });
        match cached {
            Ok(v) => Ok(v),
            Err(e) => Err(e.clone()),
        }
    }

    pub fn pairing_matrix(&self, module: &KModule) -> Result<PairingMatrix> {
        self.check_module(module)?;
        let elements = self.pairing_elements()?.to_vec();
        let blocks: Vec<Vec<Matrix>> = elements
            .iter()
            .map(|row| row.iter().map(|u| act(module, u)).collect())
            .collect::<Result<_>>()?;
        let assembled = Matrix::assemble(module.field(), &blocks, module.dim())?;
        Ok(PairingMatrix {
            elements,
            blocks,
            assembled,
        })
    }

    /// Rank of the pairing matrix; checks that rank 0 happens exactly when
    /// every block vanishes.
    pub fn evaluation_dim(&self, module: &KModule) -> Result<usize> {
        if self.orbits.is_empty() {
            return Ok(0);
        }
        let pm = self.pairing_matrix(module)?;
        let rank = pm.assembled.rank();
        let all_zero = pm.blocks.iter().flatten().all(Matrix::is_zero);
        if (rank == 0) != all_zero {
            return Err(Error::Consistency(format!(
                "pairing matrix has rank {rank} but all blocks zero is {all_zero}"
            )));
        }
        Ok(rank)
    }

    /// Dimension of the relative trace image of `V` over `N̄_G(T, S)` for
    /// each orbit.
    pub fn traces(&self, module: &KModule) -> Result<Vec<usize>> {
        self.check_module(module)?;
        self.orbits
            .iter()
            .map(|o| trace_image_dim(module, &o.gamma))
            .collect()
    }

    /// Sum of the trace dimensions when every orbit is minimal.
    pub fn closed_formula_dim(&self, module: &KModule) -> Result<Option<usize>> {
        if !self.all_minimal() {
            return Ok(None);
        }
        Ok(Some(self.traces(module)?.iter().sum()))
    }

    /// Sum of the trace dimensions over minimal orbits.
    pub fn lower_bound_dim(&self, module: &KModule) -> Result<usize> {
        let traces = self.traces(module)?;
        Ok(self
            .orbits
            .iter()
            .zip(traces)
            .filter(|(o, _)| o.minimal)
            .map(|(_, d)| d)
            .sum())
    }

    /// Every applicable certificate, unchecked.
    pub fn fired_certificates(&self, module: &KModule) -> Result<Vec<Certificate>> {
        let traces = self.traces(module)?;
        certificates::collect(self, module, &traces)
    }

    /// Whether a certificate's claim holds at dimension `dim`.
    pub fn claim_holds(&self, claim: Claim, dim: usize) -> bool {
        match claim {
            Claim::Nonvanishing => dim > 0,
            Claim::Dimension(d) => d == dim,
            Claim::ClosedFormulaApplies => self.all_minimal(),
        }
    }

    /// Fires every applicable certificate and checks each claim against
    /// `dim`.
    pub fn certificates(&self, module: &KModule, dim: usize) -> Result<Vec<Certificate>> {
        let fired = self.fired_certificates(module)?;
        for c in &fired {
            if !self.claim_holds(c.claim, dim) {
                return Err(Error::Consistency(format!(
                    "certificate ({}) {} claims {:?} but the dimension is {dim}",
                    c.kind.tag(),
                    c.kind.name(),
                    c.claim
                )));
            }
        }
        Ok(fired)
    }

    /// Full evaluation. The closed formula is used when it applies; with
    /// `verify` the pairing matrix is ranked as well and must agree.
    pub fn evaluate(&self, module: &KModule, verify: bool) -> Result<EvaluationReport> {
        self.check_module(module)?;
        let traces = self.traces(module)?;
        let closed_formula = self.closed_formula_dim(module)?;
        let lower_bound = self.lower_bound_dim(module)?;
        let (dim, method, rank_dim) = if self.orbits.is_empty() {
            (0, Method::EmptySigma, None)
        } else if let Some(d) = closed_formula {
            let rank = if verify {
                Some(self.evaluation_dim(module)?)
            } else {
                None
            };
            (d, Method::ClosedFormula, rank)
        } else {
            let d = self.evaluation_dim(module)?;
            (d, Method::RankFormula, Some(d))
        };
        if let Some(r) = rank_dim {
            if r != dim {
                return Err(Error::Consistency(format!(
                    "closed formula gives {dim} but the pairing matrix has rank {r}"
                )));
            }
        }
        if lower_bound > dim {
            return Err(Error::Consistency(format!(
                "lower bound {lower_bound} exceeds dimension {dim}"
            )));
        }
        let certificates = self.certificates(module, dim)?;
        Ok(EvaluationReport {
            group_order: self.lattice.table().len(),
            subquotient_order: self.out.table().len(),
            field: module.field(),
            module: module.name().to_string(),
            module_dim: module.dim(),
            orbit_count: self.orbits.len(),
            dim,
            vanishes: dim == 0,
            method,
            lower_bound,
            closed_formula,
            rank_dim,
            per_orbit_traces: self
                .orbits
                .iter()
                .zip(&traces)
                .enumerate()
                .map(|(i, (o, &d))| OrbitTrace {
                    orbit: i,
                    minimal: o.minimal,
                    trace_dim: d,
                })
                .collect(),
            certificates,
        })
    }
}

/// Rank of the pairing matrix for `V` over `Σ_H(G)`.
pub fn evaluation_dim(lattice: &SubgroupLattice, out: &OutGroup, module: &KModule) -> Result<usize> {
    Evaluator::new(lattice, out)?.evaluation_dim(module)
}

/// Trace formula, when every section orbit is minimal.
pub fn closed_formula_dim(
    lattice: &SubgroupLattice,
    out: &OutGroup,
    module: &KModule,
) -> Result<Option<usize>> {
    Evaluator::new(lattice, out)?.closed_formula_dim(module)
}

/// Trace formula restricted to minimal orbits.
pub fn lower_bound_dim(lattice: &SubgroupLattice, out: &OutGroup, module: &KModule) -> Result<usize> {
    Evaluator::new(lattice, out)?.lower_bound_dim(module)
}

#[cfg(test)]
mod tests;
