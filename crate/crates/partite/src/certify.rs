//! Machine-checkable verdicts for forbidden-family freeness.

use std::ops::ControlFlow;

use crate::family::ForbiddenFamily;
use crate::weighted::{DensityProfile, PartiteGraph, Transversal};
use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    FamilyFree,
    Violated,
}

/// Verdict, witness and density bundled for offline re-verification.
///
/// A `Violated` certificate carries the lexicographically first witness
/// transversal; re-checking it through `transversal_graph` and
/// `contains_member` must reproduce the violation. A `FamilyFree`
/// certificate survives full re-enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub witness: Option<Transversal>,
    pub density: DensityProfile,
    pub family: ForbiddenFamily,
}

impl Certificate {
    pub fn is_family_free(&self) -> bool {
        self.verdict == Verdict::FamilyFree
    }

    /// Re-checks the certificate against the graph it was issued for.
    pub fn recheck(&self, g: &PartiteGraph) -> bool {
        match self.verdict {
            Verdict::Violated => match &self.witness {
                Some(t) => self.family.contains_member(&g.transversal_graph(t)),
                None => false,
            },
            Verdict::FamilyFree => {
                let mut clean = true;
                g.for_each_transversal(|c| {
                    if self.family.contains_member(&g.transversal_graph_choices(c)) {
                        clean = false;
                        return ControlFlow::Break(());
                    }
                    ControlFlow::Continue(())
                });
                clean
            }
        }
    }
}

/// Searches every transversal for a family member; the first hit (in
/// lexicographic choice order) becomes the witness.
pub fn check_family_free(
    g: &PartiteGraph,
    family: &ForbiddenFamily,
    cap: u128,
) -> Result<Certificate, Error> {
    family.validate(g.host().n())?;
    let count = g.transversal_count();
    if count > cap {
        return Err(Error::EnumerationCap { count, cap });
    }
    let mut witness = None;
    g.for_each_transversal(|c| {
        if family.contains_member(&g.transversal_graph_choices(c)) {
            witness = Some(Transversal(c.to_vec()));
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(Certificate {
        verdict: if witness.is_some() { Verdict::Violated } else { Verdict::FamilyFree },
        witness,
        density: g.density_profile_unchecked(),
        family: family.clone(),
    })
}
