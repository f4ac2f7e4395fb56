//! Decision algorithms: view classification and move computation.
//!
//! All decisions are functions of the local view alone (robots are
//! oblivious). Moves are expressed as exact destinations in the
//! observer's frame; the engine maps them back to global coordinates.
//!
//! Two-point views are classified into bands by the observer's level l.
//! With S_k = k(k+2), band k >= 1 splits as
//!   A(k)  = [S_k, S_k + k)
//!   B(k)  = [S_k + k, S_k + 2k)
//!   C1(k) = [S_k + 2k, S_k + 2k + 1)
//!   C2(k) = [S_k + 2k + 1, S_k + 2k + 2)
//!   C3(k) = [S_k + 2k + 2, S_(k+1))
//! and every level below 1 belongs to A(0), so the zero-width bands
//! A(0), B(0) and the shadowed C1(0) never appear; levels 1 and 2 are
//! C2(0) and C3(0).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    collinear_frame, smallest_enclosing_circle, GeometryError, Point2,
};
use crate::model::{local_level, side_of, LocalView, ModelError, Side};
use crate::scalar::{level_of_sq, ratio, FieldScalar, Rational, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgoError {
    #[error("algorithm defined for views of at most two points, got {0}")]
    TooManyPoints(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Classification of a local view.
#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Phase {
    A(u32),
    B(u32),
    C1(u32),
    C2(u32),
    C3(u32),
    /// Collinear view with a unique signature extremity; the payload is
    /// the extremal point in view coordinates.
    Text(Point2),
    /// Fallback: move to the center of the smallest enclosing circle.
    Tsec,
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Phase::A(k) => write!(f, "A({k})"),
            Phase::B(k) => write!(f, "B({k})"),
            Phase::C1(k) => write!(f, "C1({k})"),
            Phase::C2(k) => write!(f, "C2({k})"),
            Phase::C3(k) => write!(f, "C3({k})"),
            Phase::Text(_) => f.write_str("Text"),
            Phase::Tsec => f.write_str("Tsec"),
        }
    }
}

/// Band of a two-point level. Total over all integers.
pub fn phase_of_level(level: i64) -> Phase {
    if level < 1 {
        return Phase::A(0);
    }
    if level == 1 {
        return Phase::C2(0);
    }
    if level == 2 {
        return Phase::C3(0);
    }
    // S_k = k(k+2) = (k+1)^2 - 1 <= level gives k = isqrt(level+1) - 1.
    let k = ((level + 1) as u64).isqrt() as i64 - 1;
    let s = k * (k + 2);
    debug_assert!(k >= 1 && s <= level && level < (k + 1) * (k + 3));
    let off = level - s;
    let k32 = k as u32;
    if off < k {
        Phase::A(k32)
    } else if off < 2 * k {
        Phase::B(k32)
    } else if off == 2 * k {
        Phase::C1(k32)
    } else if off == 2 * k + 1 {
        Phase::C2(k32)
    } else {
        Phase::C3(k32)
    }
}

/// Gap-over-span ratios that identify a crash extremity on a line.
pub(crate) fn signature_ratios() -> [FieldScalar; 7] {
    [
        ratio(1, 9),
        ratio(1, 8),
        ratio(9, 80),
        ratio(10, 81),
        ratio(10, 18),
        ratio(9, 16),
        ratio(80, 81),
    ]
    .map(FieldScalar::from_rational)
}

/// Classifies a local view.
///
/// Two points map to their level band. Three or more collinear points
/// are scanned for a unique extremity whose gap to its closest neighbor,
/// divided by the full span, lies in the signature ratio set; if exactly
/// one extremity qualifies the phase is `Text` of that point. Everything
/// else falls back to `Tsec`.
pub fn classify_view(view: &LocalView) -> Result<Phase, AlgoError> {
    match view.len() {
        0 => Err(AlgoError::Model(ModelError::NotTwoPointView)),
        1 => Ok(Phase::Tsec),
        2 => Ok(phase_of_level(local_level(view)?)),
        _ => {
            let frame = match collinear_frame(view.points())? {
                Some(frame) => frame,
                None => return Ok(Phase::Tsec),
            };
            let params = &frame.params;
            let m = params.len();
            let span = &params[m - 1] - &params[0];
            let first_gap = &params[1] - &params[0];
            let last_gap = &params[m - 1] - &params[m - 2];
            let ratios = signature_ratios();
            let hit = |gap: &FieldScalar| {
                let r = gap / &span;
                ratios.iter().any(|s| s == &r)
            };
            match (hit(&first_gap), hit(&last_gap)) {
                (true, false) => Ok(Phase::Text(frame.point_at(&params[0]))),
                (false, true) => Ok(Phase::Text(frame.point_at(&params[m - 1]))),
                // Zero or two qualifying extremities: not an extremity
                // configuration.
                _ => Ok(Phase::Tsec),
            }
        }
    }
}

/// A commanded move: the exact destination in the observer's frame.
/// Staying put is the origin destination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveCommand {
    pub destination: Point2,
}

impl MoveCommand {
    pub fn stay() -> MoveCommand {
        MoveCommand {
            destination: Point2::origin(),
        }
    }

    pub fn to(destination: Point2) -> MoveCommand {
        MoveCommand { destination }
    }

    pub fn is_stay(&self) -> bool {
        self.destination.is_origin()
    }
}

fn toward_other(view: &LocalView, num: i64, den: i64) -> Result<MoveCommand, AlgoError> {
    let q = view.other_point()?;
    Ok(MoveCommand::to(q.scale_rat(&ratio(num, den))))
}

/// Gathering decision rule over classified views.
///
/// Band moves are fractions of the segment toward the other point:
/// halves in A and C1; 1/9 (left) or 1/10 (right) in B; the full segment
/// or half of it in C2 and C3 depending on the side. Extremity views
/// send everyone to the extremal point, and the fallback sends everyone
/// to the center of the smallest enclosing circle.
pub fn suig_decide(view: &LocalView) -> Result<MoveCommand, AlgoError> {
    match classify_view(view)? {
        Phase::A(_) | Phase::C1(_) => toward_other(view, 1, 2),
        Phase::B(_) => match side_of(view)? {
            Side::Left => toward_other(view, 1, 9),
            Side::Right => toward_other(view, 1, 10),
        },
        Phase::C2(_) => match side_of(view)? {
            Side::Left => toward_other(view, 1, 1),
            Side::Right => toward_other(view, 1, 2),
        },
        Phase::C3(_) => match side_of(view)? {
            Side::Left => toward_other(view, 1, 2),
            Side::Right => toward_other(view, 1, 1),
        },
        Phase::Text(p) => Ok(MoveCommand::to(p)),
        Phase::Tsec => {
            let circle = smallest_enclosing_circle(view.points())?;
            Ok(MoveCommand::to(circle.center))
        }
    }
}

/// Two-robot rendezvous rule driven by the level residue mod 4:
/// even levels move to the middle; odd levels move to the middle or all
/// the way to the other robot depending on the observer's side.
pub fn suir_decide(view: &LocalView) -> Result<MoveCommand, AlgoError> {
    match view.len() {
        1 => Ok(MoveCommand::stay()),
        2 => {
            let level = local_level(view)?;
            let side = side_of(view)?;
            match (level.rem_euclid(4), side) {
                (0 | 2, _) => toward_other(view, 1, 2),
                (1, Side::Left) | (3, Side::Right) => toward_other(view, 1, 2),
                (1, Side::Right) | (3, Side::Left) => toward_other(view, 1, 1),
                _ => unreachable!("residues mod 4 are covered"),
            }
        }
        n => Err(AlgoError::TooManyPoints(n)),
    }
}

/// Rendezvous rule for robots sharing the global y-axis: a robot level
/// with the other one targets the northern apex of the equilateral
/// triangle over the segment; a robot seeing the other to the north
/// moves onto it; the northernmost robot stays.
pub fn axis_rdv_decide(view: &LocalView) -> Result<MoveCommand, AlgoError> {
    match view.len() {
        1 => Ok(MoveCommand::stay()),
        2 => {
            let q = view.other_point()?;
            match q.y.sign() {
                0 => {
                    let half = ratio(1, 2);
                    let apex_x = q.x.mul_rat(&half);
                    // |x| * sqrt(3)/2 is exactly representable in the field.
                    let apex_y = &q.x.abs() * &FieldScalar::parts(0, 1, 1, 2);
                    Ok(MoveCommand::to(Point2::new(apex_x, apex_y)))
                }
                1 => Ok(MoveCommand::to(q.clone())),
                _ => Ok(MoveCommand::stay()),
            }
        }
        n => Err(AlgoError::TooManyPoints(n)),
    }
}

/// What a rendezvous algorithm for the line decides: stay, or move a
/// fraction of the way toward the other robot. Destinations are never
/// materialized as 1D coordinates; only sides and squared distances are
/// consumed, and only fractions are produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineDecision {
    Stay,
    Fraction(Rational),
}

/// A two-robot algorithm on the line, presented through the quantities
/// a planar robot can extract from a two-point view.
pub trait LineAlgorithm {
    fn decide(&self, side: Side, dist_sq: &FieldScalar) -> Result<LineDecision, AlgoError>;
}

/// The level-residue rendezvous rule as a line algorithm.
pub struct SuirLine;

impl LineAlgorithm for SuirLine {
    fn decide(&self, side: Side, dist_sq: &FieldScalar) -> Result<LineDecision, AlgoError> {
        let level = level_of_sq(dist_sq)?;
        let frac = match (level.rem_euclid(4), side) {
            (0 | 2, _) => ratio(1, 2),
            (1, Side::Left) | (3, Side::Right) => ratio(1, 2),
            _ => ratio(1, 1),
        };
        Ok(LineDecision::Fraction(frac))
    }
}

/// Runs a line algorithm on a planar two-point view.
///
/// The observer's side and squared distance are read off the view, the
/// line algorithm picks a fraction, and the fraction is applied to the
/// planar segment. Views of three or more points are outside the
/// contract.
pub fn lift_line_algorithm(
    algo: &dyn LineAlgorithm,
    view: &LocalView,
) -> Result<MoveCommand, AlgoError> {
    match view.len() {
        1 => Ok(MoveCommand::stay()),
        2 => {
            let q = view.other_point()?;
            let side = side_of(view)?;
            match algo.decide(side, &q.norm_sq())? {
                LineDecision::Stay => Ok(MoveCommand::stay()),
                LineDecision::Fraction(f) => Ok(MoveCommand::to(q.scale_rat(&f))),
            }
        }
        n => Err(AlgoError::TooManyPoints(n)),
    }
}

fn midpoint_decide(view: &LocalView) -> Result<MoveCommand, AlgoError> {
    match view.len() {
        1 => Ok(MoveCommand::stay()),
        2 => toward_other(view, 1, 2),
        n => Err(AlgoError::TooManyPoints(n)),
    }
}

/// The algorithms the engine can run, named as they appear in scenario
/// files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmKind {
    Suig,
    Suir,
    AxisRdv,
    LiftedSuir,
    /// Always move to the middle; used by the scheduler demonstrations.
    Midpoint,
}

impl AlgorithmKind {
    pub fn decide(&self, view: &LocalView) -> Result<MoveCommand, AlgoError> {
        match self {
            AlgorithmKind::Suig => suig_decide(view),
            AlgorithmKind::Suir => suir_decide(view),
            AlgorithmKind::AxisRdv => axis_rdv_decide(view),
            AlgorithmKind::LiftedSuir => lift_line_algorithm(&SuirLine, view),
            AlgorithmKind::Midpoint => midpoint_decide(view),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmKind::Suig => "suig",
            AlgorithmKind::Suir => "suir",
            AlgorithmKind::AxisRdv => "axis_rdv",
            AlgorithmKind::LiftedSuir => "lifted_suir",
            AlgorithmKind::Midpoint => "midpoint",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn view_of(points: &[Point2]) -> LocalView {
        LocalView::from_points(points.to_vec())
    }

    fn two_point(x: &FieldScalar, y: &FieldScalar) -> LocalView {
        view_of(&[Point2::origin(), Point2::new(x.clone(), y.clone())])
    }

    fn fsr(n: i64, d: i64) -> FieldScalar {
        FieldScalar::from_rational(ratio(n, d))
    }

    #[test]
    fn phase_partition_examples() {
        assert_eq!(phase_of_level(-4), Phase::A(0));
        assert_eq!(phase_of_level(0), Phase::A(0));
        assert_eq!(phase_of_level(1), Phase::C2(0));
        assert_eq!(phase_of_level(2), Phase::C3(0));
        assert_eq!(phase_of_level(3), Phase::A(1));
        assert_eq!(phase_of_level(4), Phase::B(1));
        assert_eq!(phase_of_level(5), Phase::C1(1));
        assert_eq!(phase_of_level(6), Phase::C2(1));
        assert_eq!(phase_of_level(7), Phase::C3(1));
        assert_eq!(phase_of_level(8), Phase::A(2));
        assert_eq!(phase_of_level(9), Phase::A(2));
        assert_eq!(phase_of_level(15), Phase::A(3));
    }

    #[test]
    fn phase_partition_is_total_and_ordered() {
        // Reconstruct the band layout for k <= 12 and compare.
        for k in 1u32..=12 {
            let s = (k as i64) * (k as i64 + 2);
            for off in 0..(2 * k as i64 + 3) {
                let l = s + off;
                let expect = if off < k as i64 {
                    Phase::A(k)
                } else if off < 2 * k as i64 {
                    Phase::B(k)
                } else if off == 2 * k as i64 {
                    Phase::C1(k)
                } else if off == 2 * k as i64 + 1 {
                    Phase::C2(k)
                } else {
                    Phase::C3(k)
                };
                assert_eq!(phase_of_level(l), expect, "level {l}");
            }
        }
    }

    #[test]
    fn classify_two_points_uses_level_band() {
        // Other at distance 1/4: level 2 -> C3(0).
        assert_eq!(
            classify_view(&two_point(&fsr(1, 4), &FieldScalar::zero())).unwrap(),
            Phase::C3(0)
        );
        // Distance 1: level 0 -> A(0).
        assert_eq!(
            classify_view(&two_point(&FieldScalar::one(), &FieldScalar::zero())).unwrap(),
            Phase::A(0)
        );
    }

    #[test]
    fn classify_extremity_signature() {
        // Points at 0, 8, 9: span 9, right gap 1, ratio 1/9.
        let view = view_of(&[
            Point2::from_ints(0, 0),
            Point2::from_ints(8, 0),
            Point2::from_ints(9, 0),
        ]);
        assert_eq!(
            classify_view(&view).unwrap(),
            Phase::Text(Point2::from_ints(9, 0))
        );
    }

    #[test]
    fn classify_rejects_double_signature() {
        // Both extremities have gap ratio 1/9: ambiguous, fall back.
        let view = view_of(&[
            Point2::new(FieldScalar::zero(), FieldScalar::zero()),
            Point2::new(fsr(1, 9), FieldScalar::zero()),
            Point2::new(fsr(8, 9), FieldScalar::zero()),
            Point2::new(FieldScalar::one(), FieldScalar::zero()),
        ]);
        assert_eq!(classify_view(&view).unwrap(), Phase::Tsec);
    }

    #[test]
    fn classify_fallbacks() {
        // Evenly spread collinear points: no signature ratio.
        let view = view_of(&[
            Point2::from_ints(0, 0),
            Point2::new(fsr(1, 2), FieldScalar::zero()),
            Point2::from_ints(1, 0),
        ]);
        assert_eq!(classify_view(&view).unwrap(), Phase::Tsec);
        // Triangle.
        let tri = view_of(&[
            Point2::from_ints(0, 0),
            Point2::from_ints(1, 0),
            Point2::from_ints(0, 1),
        ]);
        assert_eq!(classify_view(&tri).unwrap(), Phase::Tsec);
        // Single point.
        assert_eq!(
            classify_view(&view_of(&[Point2::origin()])).unwrap(),
            Phase::Tsec
        );
    }

    #[test]
    fn gathering_band_moves() {
        // Distance 1/32: level 5 -> C1(1) -> half move.
        let v = two_point(&fsr(1, 32), &FieldScalar::zero());
        assert_eq!(classify_view(&v).unwrap(), Phase::C1(1));
        assert_eq!(
            suig_decide(&v).unwrap().destination,
            Point2::new(fsr(1, 64), FieldScalar::zero())
        );
        // Distance 1/10: level 4 -> B(1); right side moves a tenth.
        let v = two_point(&fsr(-1, 10), &FieldScalar::zero());
        assert_eq!(classify_view(&v).unwrap(), Phase::B(1));
        assert_eq!(
            suig_decide(&v).unwrap().destination,
            Point2::new(fsr(-1, 100), FieldScalar::zero())
        );
        // Same distance on the left side moves a ninth.
        let v = two_point(&fsr(1, 10), &FieldScalar::zero());
        assert_eq!(
            suig_decide(&v).unwrap().destination,
            Point2::new(fsr(1, 90), FieldScalar::zero())
        );
        // Level 6 -> C2(1): left goes all the way, right goes half.
        let v = two_point(&fsr(1, 64), &FieldScalar::zero());
        assert_eq!(classify_view(&v).unwrap(), Phase::C2(1));
        assert_eq!(
            suig_decide(&v).unwrap().destination,
            Point2::new(fsr(1, 64), FieldScalar::zero())
        );
        let v = two_point(&fsr(-1, 64), &FieldScalar::zero());
        assert_eq!(
            suig_decide(&v).unwrap().destination,
            Point2::new(fsr(-1, 128), FieldScalar::zero())
        );
        // Level 7 -> C3(1): mirrored.
        let v = two_point(&fsr(1, 128), &FieldScalar::zero());
        assert_eq!(classify_view(&v).unwrap(), Phase::C3(1));
        assert_eq!(
            suig_decide(&v).unwrap().destination,
            Point2::new(fsr(1, 256), FieldScalar::zero())
        );
        let v = two_point(&fsr(-1, 128), &FieldScalar::zero());
        assert_eq!(
            suig_decide(&v).unwrap().destination,
            Point2::new(fsr(-1, 128), FieldScalar::zero())
        );
    }

    #[test]
    fn gathering_extremity_and_fallback_moves() {
        let view = view_of(&[
            Point2::from_ints(0, 0),
            Point2::from_ints(8, 0),
            Point2::from_ints(9, 0),
        ]);
        assert_eq!(
            suig_decide(&view).unwrap().destination,
            Point2::from_ints(9, 0)
        );
        let apex = Point2::new(FieldScalar::from_int(1), FieldScalar::parts(0, 1, 1, 1));
        let tri = view_of(&[Point2::from_ints(0, 0), Point2::from_ints(2, 0), apex]);
        assert_eq!(
            suig_decide(&tri).unwrap().destination,
            Point2::new(FieldScalar::one(), FieldScalar::parts(0, 1, 1, 3))
        );
        // Gathered: the only point is the origin, stay.
        assert!(suig_decide(&view_of(&[Point2::origin()]))
            .unwrap()
            .is_stay());
    }

    #[test]
    fn rendezvous_rule_moves() {
        // Level 0 (even): middle.
        let v = two_point(&FieldScalar::one(), &FieldScalar::zero());
        assert_eq!(
            suir_decide(&v).unwrap().destination,
            Point2::new(fsr(1, 2), FieldScalar::zero())
        );
        // Level 1, right side: move onto the other robot.
        let v = two_point(&fsr(-1, 2), &FieldScalar::zero());
        assert_eq!(
            suir_decide(&v).unwrap().destination,
            Point2::new(fsr(-1, 2), FieldScalar::zero())
        );
        // Level 3 seen from the left (other due North): move onto it.
        let v = two_point(&FieldScalar::zero(), &fsr(1, 8));
        assert_eq!(
            suir_decide(&v).unwrap().destination,
            Point2::new(FieldScalar::zero(), fsr(1, 8))
        );
        // Level 1, left side: middle.
        let v = two_point(&fsr(1, 2), &FieldScalar::zero());
        assert_eq!(
            suir_decide(&v).unwrap().destination,
            Point2::new(fsr(1, 4), FieldScalar::zero())
        );
        // Gathered view: stay.
        assert!(suir_decide(&view_of(&[Point2::origin()])).unwrap().is_stay());
        // Three points violate the contract.
        let three = view_of(&[
            Point2::origin(),
            Point2::from_ints(1, 0),
            Point2::from_ints(2, 0),
        ]);
        assert_eq!(suir_decide(&three), Err(AlgoError::TooManyPoints(3)));
    }

    #[test]
    fn axis_rendezvous_moves() {
        // Level partner: target the northern apex of the equilateral
        // triangle, here (1, sqrt3).
        let v = two_point(&FieldScalar::from_int(2), &FieldScalar::zero());
        assert_eq!(
            axis_rdv_decide(&v).unwrap().destination,
            Point2::new(FieldScalar::one(), FieldScalar::parts(0, 1, 1, 1))
        );
        // Mirrored partner: apex keeps a positive y.
        let v = two_point(&FieldScalar::from_int(-2), &FieldScalar::zero());
        assert_eq!(
            axis_rdv_decide(&v).unwrap().destination,
            Point2::new(FieldScalar::from_int(-1), FieldScalar::parts(0, 1, 1, 1))
        );
        // Other to the north: move onto it.
        let v = two_point(&FieldScalar::from_int(3), &FieldScalar::from_int(5));
        assert_eq!(
            axis_rdv_decide(&v).unwrap().destination,
            Point2::from_ints(3, 5)
        );
        // Other to the south: stay.
        let v = two_point(&FieldScalar::zero(), &FieldScalar::from_int(-1));
        assert!(axis_rdv_decide(&v).unwrap().is_stay());
    }

    #[test]
    fn lift_applies_line_fraction_to_segment() {
        // Other at (3,4): squared distance 25, level -2, even: half move.
        let v = two_point(&FieldScalar::from_int(3), &FieldScalar::from_int(4));
        assert_eq!(
            lift_line_algorithm(&SuirLine, &v).unwrap().destination,
            Point2::new(fsr(3, 2), FieldScalar::from_int(2))
        );
        // Other at (-6,-8): squared distance 100, level -3 (residue 1),
        // right side: full move.
        let v = two_point(&FieldScalar::from_int(-6), &FieldScalar::from_int(-8));
        assert_eq!(
            lift_line_algorithm(&SuirLine, &v).unwrap().destination,
            Point2::from_ints(-6, -8)
        );
    }

    #[test]
    fn lift_of_stay_stays() {
        struct AlwaysStay;
        impl LineAlgorithm for AlwaysStay {
            fn decide(&self, _: Side, _: &FieldScalar) -> Result<LineDecision, AlgoError> {
                Ok(LineDecision::Stay)
            }
        }
        let v = two_point(&FieldScalar::from_int(3), &FieldScalar::from_int(4));
        assert!(lift_line_algorithm(&AlwaysStay, &v).unwrap().is_stay());
        let single = view_of(&[Point2::origin()]);
        assert!(lift_line_algorithm(&SuirLine, &single).unwrap().is_stay());
    }

    #[test]
    fn lifted_rule_matches_direct_rule_on_plane() {
        // Both decision paths implement the same function of
        // (side, level); spot-check they agree on mixed inputs.
        let qs = [
            Point2::from_ints(1, 0),
            Point2::from_ints(-3, 4),
            Point2::new(fsr(1, 2), fsr(-1, 2)),
            Point2::new(FieldScalar::parts(0, 1, 1, 4), FieldScalar::zero()),
        ];
        for q in &qs {
            let v = two_point(&q.x, &q.y);
            assert_eq!(
                suir_decide(&v).unwrap(),
                lift_line_algorithm(&SuirLine, &v).unwrap(),
                "mismatch at {q:?}"
            );
        }
    }

    #[test]
    fn midpoint_always_halves() {
        let v = two_point(&FieldScalar::from_int(4), &FieldScalar::from_int(2));
        assert_eq!(
            AlgorithmKind::Midpoint.decide(&v).unwrap().destination,
            Point2::from_ints(2, 1)
        );
    }

    #[test]
    fn algorithm_names_round_trip() {
        for kind in [
            AlgorithmKind::Suig,
            AlgorithmKind::Suir,
            AlgorithmKind::AxisRdv,
            AlgorithmKind::LiftedSuir,
            AlgorithmKind::Midpoint,
        ] {
            let json = serde_json::to_string(&kind).unwrap();
            assert_eq!(json, format!("\"{}\"", kind.name()));
            let back: AlgorithmKind = serde_json::from_str(&json).unwrap();
            assert_eq!(back, kind);
        }
    }
}
