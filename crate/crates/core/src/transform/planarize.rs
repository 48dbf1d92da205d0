use super::contract::contract_with_record;
use super::loops::remove_consecutive_loop;
use super::{UndoAction, UndoStack};
use crate::calculus::first_odd_pair;
use crate::drawing::{DrawingMap, EmbeddingScheme, Surface};
use crate::error::{Error, Result};
use crate::graph::{Cycle, EdgeId};
use crate::map::Genus;

fn odd_pair_error(a: Cycle, b: Cycle, sigma1: u64) -> Error {
    Error::OddPairFound {
        first: a.edge_list(),
        second: b.edge_list(),
        sigma1,
    }
}

/// Non-loop edge with the fewest crossing slots, smallest id first.
fn next_contraction(d: &DrawingMap) -> Option<EdgeId> {
    let g = d.graph();
    g.edge_ids()
        .filter(|&e| !g.is_loop(e))
        .min_by_key(|&e| (d.slot_count(e), e))
}

/// Contracts every non-loop edge. `check` runs after each step.
fn contract_all(
    d: &DrawingMap,
    stack: &mut UndoStack,
    mut check: impl FnMut(&DrawingMap, EdgeId) -> Result<()>,
) -> Result<DrawingMap> {
    let mut cur = d.clone();
    while let Some(e) = next_contraction(&cur) {
        let (next, _, rec) = contract_with_record(&cur, e)?;
        stack.push(UndoAction::Split(rec));
        check(&next, e)?;
        cur = next;
    }
    Ok(cur)
}

/// Crossing-free plane drawing with the same rotation system, for a sphere
/// drawing in which every pair of distinct cycles crosses evenly.
pub fn planarize(d: &DrawingMap) -> Result<DrawingMap> {
    planarize_with_stack(d, crate::graph::DEFAULT_CYCLE_CAP).map(|(out, _)| out)
}

/// [`planarize`] with an explicit cycle cap, also returning the undo stack.
pub fn planarize_with_stack(d: &DrawingMap, cap: usize) -> Result<(DrawingMap, UndoStack)> {
    let declared = d.surface();
    if declared.euler_genus != 0 {
        return Err(Error::SurfaceMismatch {
            declared: declared.euler_genus,
            expected: 0,
        });
    }
    if let Some((a, b, n)) = first_odd_pair(d, cap)? {
        return Err(odd_pair_error(a, b, n));
    }
    let mut stack = UndoStack::default();
    let mut cur = contract_all(d, &mut stack, |_, _| Ok(()))?;
    while cur.graph().edge_count() > 0 {
        let (next, _, rec) = remove_consecutive_loop(&cur).map_err(|err| {
            Error::CertificateFailed(format!("loops-only stage: {err}"))
        })?;
        stack.push(UndoAction::Loop(rec));
        cur = next;
    }
    let scheme = stack.rewind(&cur.restrict_scheme())?;
    if scheme.rotations() != d.rotations() {
        return Err(Error::CertificateFailed("rotation system changed".into()));
    }
    let out = DrawingMap::from_scheme(&scheme, Surface::sphere());
    let genus = out
        .augmented_map()
        .map_err(Error::CertificateFailed)?
        .euler_genus();
    if genus != (Genus { euler_genus: 0, orientable: true }) {
        return Err(Error::CertificateFailed(format!("result has {genus}")));
    }
    Ok((out, stack))
}

/// Evidence returned by [`embed_on_surface`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceCertificate {
    pub declared: Surface,
    pub scheme_genus: Genus,
    /// Genus of the one-vertex-per-component scheme reached by contraction.
    pub loops_stage_genus: Genus,
    pub contractions: usize,
    /// Parity was rechecked on every intermediate drawing.
    pub parity_checks: usize,
    /// The lifted scheme equals the drawing's own scheme exactly.
    pub strict_match: bool,
    /// The lifted scheme equals the drawing's scheme up to vertex flips.
    pub flip_equivalent: bool,
}

/// Embedding scheme of the drawing, certified to fit the declared surface.
/// Contracts down to the loops-only stage, rechecking the even hypothesis
/// after each contraction, certifies that stage by face tracing and lifts the
/// scheme back through the recorded vertex splits.
pub fn embed_on_surface(d: &DrawingMap, cap: usize) -> Result<(EmbeddingScheme, SurfaceCertificate)> {
    if let Some((a, b, n)) = first_odd_pair(d, cap)? {
        return Err(odd_pair_error(a, b, n));
    }
    let declared = d.surface();
    let mut stack = UndoStack::default();
    let mut checks = 0;
    let loops = contract_all(d, &mut stack, |next, e| {
        checks += 1;
        match first_odd_pair(next, cap)? {
            None => Ok(()),
            Some((a, b, n)) => Err(Error::CertificateFailed(format!(
                "contracting edge {e} produced odd pair {:?} / {:?} ({n})",
                a.edge_list(),
                b.edge_list()
            ))),
        }
    })?;
    let stage = loops.restrict_scheme();
    let loops_stage_genus = stage.euler_genus();
    if !declared.admits(loops_stage_genus) {
        return Err(Error::CertificateFailed(format!(
            "loops-only stage has {loops_stage_genus}, declared surface {declared}"
        )));
    }
    let scheme = stack.rewind(&stage)?;
    let scheme_genus = scheme.euler_genus();
    if !declared.admits(scheme_genus) {
        return Err(Error::CertificateFailed(format!(
            "scheme has {scheme_genus}, declared surface {declared}"
        )));
    }
    let original = d.restrict_scheme();
    let flip_equivalent = scheme.flip_equivalent(&original);
    if !flip_equivalent {
        return Err(Error::CertificateFailed("lifted scheme differs from the drawing's scheme".into()));
    }
    let cert = SurfaceCertificate {
        declared,
        scheme_genus,
        loops_stage_genus,
        contractions: stack.len(),
        parity_checks: checks,
        strict_match: scheme == original,
        flip_equivalent,
    };
    Ok((scheme, cert))
}
