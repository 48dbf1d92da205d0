use rand::Rng;

use crate::drawing::{CrossingRecord, DrawingMap, Strand};
use crate::error::{Error, Result};
use crate::map::{Face, Flag, Sign};

/// Faces of the augmented map of `d`.
pub fn face_sides(d: &DrawingMap) -> Result<Vec<Face>> {
    d.augmented_map()
        .map(|m| m.faces())
        .map_err(|msg| Error::InvalidDrawing(vec![msg]))
}

/// Side of a segment seen from a face: whether the face walk runs from the
/// segment's end 0 to end 1, and how the frames at the start and finish nodes
/// compare with the face's own orientation (face on the left of the walk).
struct SegmentSide {
    along: bool,
    start: Sign,
    finish: Sign,
}

fn side_of(face: &Face, idx: usize) -> SegmentSide {
    let (dep, arr) = if idx.is_multiple_of(2) { (idx, idx + 1) } else { (idx - 1, idx) };
    let (dep, arr) = (&face.flags[dep], &face.flags[arr]);
    let rho_dep = Sign::from_bool(dep.toward_successor);
    let rho_arr = Sign::from_bool(!arr.toward_successor);
    let along = dep.end == 0;
    let (start, finish) = if along { (rho_dep, rho_arr) } else { (rho_arr, rho_dep) };
    SegmentSide { along, start, finish }
}

/// Pushes a finger of edge `x` across the face and over edge `y`, adding two
/// crossings of opposite handedness between them. `x` and `y` are flags of
/// the face (segment sides seen from inside it).
pub fn finger_move(d: &DrawingMap, face: &Face, x: &Flag, y: &Flag) -> Result<DrawingMap> {
    let faces = face_sides(d)?;
    let own = faces
        .iter()
        .find(|f| f.position(x).is_some())
        .ok_or(Error::NotSameFace)?;
    let mut a: Vec<Flag> = own.flags.clone();
    let mut b: Vec<Flag> = face.flags.clone();
    a.sort();
    b.sort();
    if a != b || own.position(y).is_none() {
        return Err(Error::NotSameFace);
    }
    if x.segment.edge == y.segment.edge {
        return Err(Error::SameEdge(x.segment.edge));
    }
    let sx = side_of(own, own.position(x).unwrap());
    let sy = side_of(own, own.position(y).unwrap());
    // use the face frame that agrees with x's start node, so plus-only drawings stay plus-only
    let flip = sx.start;
    let (ex, ey) = (x.segment.edge, y.segment.edge);
    let (i, j) = (x.segment.index, y.segment.index);

    let mut out = d.clone();
    let next_id = d.crossings().iter().map(|c| c.id).max().unwrap_or(0) + 1;
    let first_on_y = sx.along != sy.along;
    let (p1, p2) = if first_on_y { (j, j + 1) } else { (j + 1, j) };
    let (h1, h2) = if sy.along {
        (Sign::Plus, Sign::Minus)
    } else {
        (Sign::Minus, Sign::Plus)
    };
    {
        let (_, cross, _, sigs) = out.parts_mut();
        for c in cross.iter_mut() {
            for s in [&mut c.a, &mut c.b] {
                if (s.edge == ex && s.position >= i) || (s.edge == ey && s.position >= j) {
                    s.position += 2;
                }
            }
        }
        cross.push(CrossingRecord {
            id: next_id,
            a: Strand { edge: ex, position: i },
            b: Strand { edge: ey, position: p1 },
            handedness: h1 * flip,
        });
        cross.push(CrossingRecord {
            id: next_id + 1,
            a: Strand { edge: ex, position: i + 1 },
            b: Strand { edge: ey, position: p2 },
            handedness: h2 * flip,
        });
        for (e, k, side) in [(ex, i, &sx), (ey, j, &sy)] {
            let s = sigs.get_mut(&e).unwrap();
            s.splice(k..=k, [side.start * flip, Sign::Plus, side.finish * flip]);
        }
    }
    out.canonicalize_crossings();
    Ok(out)
}

/// A finger move between two random segment sides of a random face that
/// touches at least two edges; `None` if no face qualifies.
pub fn random_finger_move<R: Rng>(d: &DrawingMap, rng: &mut R) -> Result<Option<DrawingMap>> {
    let faces = face_sides(d)?;
    let usable: Vec<&Face> = faces
        .iter()
        .filter(|f| f.flags.iter().any(|g| g.segment.edge != f.flags[0].segment.edge))
        .collect();
    if usable.is_empty() {
        return Ok(None);
    }
    let face = usable[rng.gen_range(0..usable.len())];
    let x = face.flags[rng.gen_range(0..face.flags.len())];
    let others: Vec<&Flag> = face.flags.iter().filter(|g| g.segment.edge != x.segment.edge).collect();
    let y = *others[rng.gen_range(0..others.len())];
    finger_move(d, face, &x, &y).map(Some)
}
