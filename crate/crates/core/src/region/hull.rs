//! Three-dimensional quickhull.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point3 = [f64; 3];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Facet {
    /// Outward unit normal.
    pub normal: Point3,
    pub offset: f64,
    /// Counter-clockwise seen from outside, indices into `vertices`.
    pub indices: [usize; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexHull3 {
    pub vertices: Vec<Point3>,
    pub facets: Vec<Facet>,
}

impl ConvexHull3 {
    /// `max_f (normal_f·x − offset_f)`; nonpositive for contained points.
    pub fn max_violation(&self, x: &Point3) -> f64 {
        self.facets
            .iter()
            .map(|f| dot(&f.normal, x) - f.offset)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: &Point3, tolerance: f64) -> bool {
        self.max_violation(x) <= tolerance
    }

    /// Every directed edge appears once and its reverse appears once.
    pub fn is_watertight(&self) -> bool {
        let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
        for f in &self.facets {
            let [a, b, c] = f.indices;
            for e in [(a, b), (b, c), (c, a)] {
                *edges.entry(e).or_default() += 1;
            }
        }
        edges
            .iter()
            .all(|(&(a, b), &count)| count == 1 && edges.get(&(b, a)) == Some(&1))
    }

    pub fn volume(&self) -> f64 {
        // Sum of signed tetrahedra against the first vertex.
        let Some(o) = self.vertices.first() else {
            return 0.0;
        };
        self.facets
            .iter()
            .map(|f| {
                let [a, b, c] = f.indices.map(|i| sub(&self.vertices[i], o));
                dot(&a, &cross(&b, &c)) / 6.0
            })
            .sum()
    }
}

fn sub(a: &Point3, b: &Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: &Point3, b: &Point3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &Point3, b: &Point3) -> Point3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: &Point3) -> f64 {
    dot(a, a).sqrt()
}

struct Face {
    v: [usize; 3],
    normal: Point3,
    offset: f64,
    outside: Vec<usize>,
    alive: bool,
}

impl Face {
    fn new(points: &[Point3], v: [usize; 3]) -> Face {
        let [a, b, c] = v.map(|i| points[i]);
        let n = cross(&sub(&b, &a), &sub(&c, &a));
        let len = norm(&n);
        let normal = [n[0] / len, n[1] / len, n[2] / len];
        Face {
            v,
            normal,
            offset: dot(&normal, &a),
            outside: Vec::new(),
            alive: true,
        }
    }

    fn distance(&self, p: &Point3) -> f64 {
        dot(&self.normal, p) - self.offset
    }
}

/// Convex hull of at least four affinely independent points.
pub fn convex_hull_3d(points: &[Point3]) -> Result<ConvexHull3> {
    if points.len() < 4 {
        return Err(Error::DegenerateInput(format!(
            "need at least 4 points, got {}",
            points.len()
        )));
    }
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::DegenerateInput("non-finite coordinate".into()));
    }
    let scale = points.iter().flatten().fold(1.0f64, |m, x| m.max(x.abs()));
    let eps = 1e-12 * scale;

    let simplex = initial_simplex(points, eps)?;
    let centroid = {
        let mut c = [0.0; 3];
        for &i in &simplex {
            for k in 0..3 {
                c[k] += points[i][k] / 4.0;
            }
        }
        c
    };

    let mut faces: Vec<Face> = Vec::new();
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
    let [s0, s1, s2, s3] = simplex;
    for tri in [[s0, s1, s2], [s0, s3, s1], [s0, s2, s3], [s1, s3, s2]] {
        let mut face = Face::new(points, tri);
        if face.distance(&centroid) > 0.0 {
            face = Face::new(points, [tri[0], tri[2], tri[1]]);
        }
        add_face(&mut faces, &mut edges, face);
    }

    for (i, p) in points.iter().enumerate() {
        if simplex.contains(&i) {
            continue;
        }
        if let Some(f) = faces.iter().position(|f| f.distance(p) > eps) {
            faces[f].outside.push(i);
        }
    }

    let mut queue: VecDeque<usize> = (0..faces.len()).collect();
    while let Some(fi) = queue.pop_front() {
        if !faces[fi].alive || faces[fi].outside.is_empty() {
            continue;
        }
        let apex = *faces[fi]
            .outside
            .iter()
            .max_by(|&&a, &&b| {
                faces[fi]
                    .distance(&points[a])
                    .total_cmp(&faces[fi].distance(&points[b]))
            })
            .expect("nonempty");
        let p = points[apex];

        // Connected set of faces that see the apex.
        let mut visible = vec![fi];
        let mut seen = std::collections::HashSet::from([fi]);
        let mut horizon: Vec<(usize, usize)> = Vec::new();
        let mut stack = vec![fi];
        while let Some(f) = stack.pop() {
            let [a, b, c] = faces[f].v;
            for (x, y) in [(a, b), (b, c), (c, a)] {
                let nb = edges[&(y, x)];
                if seen.contains(&nb) {
                    continue;
                }
                if faces[nb].distance(&p) > eps {
                    seen.insert(nb);
                    visible.push(nb);
                    stack.push(nb);
                } else {
                    horizon.push((x, y));
                }
            }
        }

        let mut orphans = Vec::new();
        for &f in &visible {
            faces[f].alive = false;
            let [a, b, c] = faces[f].v;
            for e in [(a, b), (b, c), (c, a)] {
                edges.remove(&e);
            }
            orphans.append(&mut faces[f].outside);
        }

        let first_new = faces.len();
        for (x, y) in horizon {
            let face = Face::new(points, [x, y, apex]);
            let idx = add_face(&mut faces, &mut edges, face);
            queue.push_back(idx);
        }
        for i in orphans {
            if i == apex {
                continue;
            }
            let q = &points[i];
            if let Some(f) = (first_new..faces.len()).find(|&f| faces[f].distance(q) > eps) {
                faces[f].outside.push(i);
            }
        }
    }

    let mut remap: HashMap<usize, usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut facets = Vec::new();
    for f in faces.iter().filter(|f| f.alive) {
        let indices = f.v.map(|i| {
            *remap.entry(i).or_insert_with(|| {
                vertices.push(points[i]);
                vertices.len() - 1
            })
        });
        facets.push(Facet {
            normal: f.normal,
            offset: f.offset,
            indices,
        });
    }
    Ok(ConvexHull3 { vertices, facets })
}

fn add_face(
    faces: &mut Vec<Face>,
    edges: &mut HashMap<(usize, usize), usize>,
    face: Face,
) -> usize {
    let idx = faces.len();
    let [a, b, c] = face.v;
    for e in [(a, b), (b, c), (c, a)] {
        edges.insert(e, idx);
    }
    faces.push(face);
    idx
}

fn initial_simplex(points: &[Point3], eps: f64) -> Result<[usize; 4]> {
    let degenerate = || Error::DegenerateInput("points are affinely degenerate".into());
    // Extreme pair along the coordinate axis with the widest spread.
    let mut pair = (0, 0, -1.0);
    for k in 0..3 {
        let lo = (0..points.len())
            .min_by(|&a, &b| points[a][k].total_cmp(&points[b][k]))
            .expect("nonempty");
        let hi = (0..points.len())
            .max_by(|&a, &b| points[a][k].total_cmp(&points[b][k]))
            .expect("nonempty");
        let spread = points[hi][k] - points[lo][k];
        if spread > pair.2 {
            pair = (lo, hi, spread);
        }
    }
    let (i0, i1, spread) = pair;
    if spread <= eps {
        return Err(degenerate());
    }
    let dir = sub(&points[i1], &points[i0]);
    let line_dist = |p: &Point3| norm(&cross(&dir, &sub(p, &points[i0]))) / norm(&dir);
    let i2 = (0..points.len())
        .max_by(|&a, &b| line_dist(&points[a]).total_cmp(&line_dist(&points[b])))
        .expect("nonempty");
    if line_dist(&points[i2]) <= eps {
        return Err(degenerate());
    }
    let n = cross(&dir, &sub(&points[i2], &points[i0]));
    let nn = norm(&n);
    let plane_dist = |p: &Point3| dot(&n, &sub(p, &points[i0])).abs() / nn;
    let i3 = (0..points.len())
        .max_by(|&a, &b| plane_dist(&points[a]).total_cmp(&plane_dist(&points[b])))
        .expect("nonempty");
    if plane_dist(&points[i3]) <= eps {
        return Err(degenerate());
    }
    Ok([i0, i1, i2, i3])
}
