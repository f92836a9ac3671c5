//! Sampling oracle for cut validation, written against the raw geometry so it
//! shares nothing with the closed-form checks it is compared to.

use gbmr_core::geometry::{
    place_cut, BoardCheck, BoardSpec, CutPlacement, HalfLogModel, MountBox, OrientedBox,
    Rectangle3D,
};
use gbmr_core::linalg::{Quat, RigidTransform, Vec3};
use rand::Rng;

pub const CLEARANCE: f64 = 0.0254;
const INSIDE_TOL: f64 = 1e-9;
/// Refinement stops once a cell is this small; anything left is on a boundary.
const MIN_CELL: f64 = 1e-7;
const MAX_CELLS: usize = 200_000;

pub struct Case {
    pub placement: CutPlacement<f64>,
    pub mounts: Vec<MountBox<f64>>,
}

pub fn random_rotation<R: Rng>(rng: &mut R) -> Quat<f64> {
    // rejection sampling in the unit 4-ball gives a uniform rotation
    loop {
        let q = [
            rng.gen_range(-1.0..1.0f64),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return Quat {
                w: q[0] / n,
                x: q[1] / n,
                y: q[2] / n,
                z: q[3] / n,
            };
        }
    }
}

/// A random half log, a pinched anchor near its flat face or crown, and up to
/// three mount posts scattered around it.
pub fn random_case<R: Rng>(rng: &mut R) -> Case {
    let r = rng.gen_range(0.12..0.35);
    let length = rng.gen_range(1.0..3.0);
    let pose = RigidTransform::new(
        random_rotation(rng),
        Vec3::new(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        ),
    );
    let [across, axis, normal] = pose.rotation.axes();
    let c = pose.translation;
    let log = gbmr_core::geometry::define_half_log(
        c - across * r,
        c + across * r,
        c + axis * length,
        normal,
    )
    .unwrap();

    let height = rng.gen_range(-0.02..r + 0.02);
    let anchor = c + axis * rng.gen_range(0.0..length) + normal * height;
    let placement = place_cut(&log, anchor, &BoardSpec::default(), 0.05).unwrap();

    let count = rng.gen_range(0..=3);
    let mounts = (0..count)
        .map(|_| {
            let local = Vec3::new(
                rng.gen_range(-0.4..0.4),
                rng.gen_range(-0.2..length + 0.2),
                rng.gen_range(-0.3..r + 0.1),
            );
            let center = pose.apply(local);
            let rotation = if rng.gen_bool(0.5) {
                pose.rotation
            } else {
                random_rotation(rng)
            };
            MountBox::with_section(
                center,
                rotation,
                rng.gen_range(0.05..0.15),
                rng.gen_range(0.1..0.6),
            )
            .unwrap()
        })
        .collect();
    Case { placement, mounts }
}

fn rect_point(rect: &Rectangle3D<f64>, a: f64, b: f64) -> Vec3<f64> {
    rect.center + rect.u_axis * a + rect.v_axis * b
}

fn inside_solid(log: &HalfLogModel<f64>, p: Vec3<f64>) -> bool {
    let d = p - log.base.point;
    let along = d.dot(log.axis);
    let height = d.dot(log.base.normal);
    let radial = d - log.axis * along;
    let r = log.radius + INSIDE_TOL;
    along >= -INSIDE_TOL
        && along <= log.length + INSIDE_TOL
        && height >= -INSIDE_TOL
        && radial.norm_squared() <= r * r
}

fn box_distance(b: &OrientedBox<f64>, p: Vec3<f64>) -> (f64, Vec3<f64>) {
    let q = b.rotation.conjugate().rotate(p - b.center);
    let h = b.half_extents;
    let excess = |x: f64, e: f64| x.signum() * (x.abs() - e).max(0.0);
    let e = Vec3::new(excess(q.x, h.x), excess(q.y, h.y), excess(q.z, h.z));
    let d = e.norm();
    let grad = if d > 0.0 {
        b.rotation.rotate(e / d)
    } else {
        Vec3::zero()
    };
    (d, grad)
}

/// Whether every point of `rect` is at least `clearance` from `b`. Random
/// samples first; then cells are refined until the convex lower bound
/// `f(c) + ∇f·(x − c)` certifies them or they shrink below `MIN_CELL`.
fn clear_of<R: Rng>(
    rng: &mut R,
    rect: &Rectangle3D<f64>,
    b: &OrientedBox<f64>,
    clearance: f64,
) -> bool {
    for _ in 0..32 {
        let p = rect_point(
            rect,
            rng.gen_range(-rect.half_u..=rect.half_u),
            rng.gen_range(-rect.half_v..=rect.half_v),
        );
        if box_distance(b, p).0 < clearance {
            return false;
        }
    }
    let mut cells = vec![(0.0, 0.0, rect.half_u, rect.half_v)];
    let mut visited = 0;
    while let Some((a, bb, ha, hb)) = cells.pop() {
        visited += 1;
        assert!(visited < MAX_CELLS, "oracle refinement did not converge");
        let (d, g) = box_distance(b, rect_point(rect, a, bb));
        if d < clearance {
            return false;
        }
        let bound = d - g.dot(rect.u_axis).abs() * ha - g.dot(rect.v_axis).abs() * hb;
        if bound >= clearance || ha.max(hb) < MIN_CELL {
            continue;
        }
        if ha >= hb {
            cells.push((a - ha / 2.0, bb, ha / 2.0, hb));
            cells.push((a + ha / 2.0, bb, ha / 2.0, hb));
        } else {
            cells.push((a, bb - hb / 2.0, ha, hb / 2.0));
            cells.push((a, bb + hb / 2.0, ha, hb / 2.0));
        }
    }
    true
}

pub struct OracleBoard {
    pub check: BoardCheck,
    pub clear_per_mount: Vec<bool>,
}

/// Oracle verdict for every board of a placement.
pub fn oracle_checks<R: Rng>(rng: &mut R, case: &Case) -> Vec<OracleBoard> {
    let p = &case.placement;
    let log = &p.half_log;
    p.boards
        .iter()
        .zip(&p.depths)
        .map(|(rect, &depth)| {
            let (hu, hv) = (rect.half_u, rect.half_v);
            let mut samples = vec![];
            for (a, b) in [
                (-1.0, -1.0),
                (1.0, -1.0),
                (1.0, 1.0),
                (-1.0, 1.0),
                (0.0, -1.0),
                (0.0, 1.0),
                (0.0, 0.0),
            ] {
                samples.push(rect_point(rect, a * hu, b * hv));
            }
            for _ in 0..64 {
                samples.push(rect_point(
                    rect,
                    rng.gen_range(-hu..=hu),
                    rng.gen_range(-hv..=hv),
                ));
            }
            let chord_sq = 4.0 * (log.radius * log.radius - depth * depth);
            let min_w = p.spec.min_width;
            let clear_per_mount: Vec<bool> = case
                .mounts
                .iter()
                .map(|m| clear_of(rng, rect, &m.bounds, CLEARANCE))
                .collect();
            OracleBoard {
                check: BoardCheck {
                    inside_boundary: samples.iter().all(|&s| inside_solid(log, s)),
                    clear_of_mounts: clear_per_mount.iter().all(|&c| c),
                    width_ok: depth >= 0.0 && depth < log.radius && chord_sq >= min_w * min_w,
                },
                clear_per_mount,
            }
        })
        .collect()
}

/// How far the exact quantities behind each disputed check are from their
/// thresholds; a genuine disagreement only happens where this is tiny.
pub fn boundary_distance(
    case: &Case,
    board: usize,
    exact: &BoardCheck,
    oracle: &OracleBoard,
) -> f64 {
    let oracle_check = &oracle.check;
    let p = &case.placement;
    let rect = &p.boards[board];
    let depth = p.depths[board];
    let log = &p.half_log;
    let mut worst: f64 = 0.0;
    if exact.inside_boundary != oracle_check.inside_boundary {
        let outside = rect
            .corners()
            .iter()
            .map(|c| log.distance_to(*c))
            .fold(0.0, f64::max);
        worst = worst.max(outside);
    }
    for (m, &oracle_clear) in case.mounts.iter().zip(&oracle.clear_per_mount) {
        let distance = m.bounds.distance_to_rectangle(rect);
        if (distance >= CLEARANCE) != oracle_clear {
            worst = worst.max((distance - CLEARANCE).abs());
        }
    }
    if exact.width_ok != oracle_check.width_ok {
        let chord = 2.0 * (log.radius * log.radius - depth * depth).max(0.0).sqrt();
        worst = worst.max(
            (chord - p.spec.min_width)
                .abs()
                .min((depth - log.radius).abs()),
        );
    }
    worst
}
