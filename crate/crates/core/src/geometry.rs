//! Small incidence structures: the projective planes `PG(2, r)` for
//! `r ∈ {2, 3, 4, 8}`, the `(11, 5, 2)`-biplane, and their flag and
//! incidence graphs.

use thiserror::Error;

use crate::graphcore::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("unsupported order {0}: only 2, 3, 4 and 8 are available")]
    UnsupportedOrder(u64),
    #[error("point {point} out of range for {points} points")]
    PointOutOfRange { point: usize, points: usize },
    #[error("axiom violated: {0}")]
    AxiomViolation(String),
}

/// `GF(r)` for `r ∈ {2, 3, 4, 8}`, elements `0..r`. For `r = 4, 8` an
/// element is a bit vector of polynomial coefficients, reduced by
/// `x^2 + x + 1` and `x^3 + x + 1` respectively.
#[derive(Clone, Copy, Debug)]
struct SmallField {
    r: u8,
    /// Reduction polynomial for characteristic 2 extensions, 0 for prime `r`.
    poly: u8,
    degree: u8,
}

impl SmallField {
    fn new(r: u64) -> Result<Self, GeometryError> {
        match r {
            2 | 3 => Ok(SmallField { r: r as u8, poly: 0, degree: 1 }),
            4 => Ok(SmallField { r: 4, poly: 0b111, degree: 2 }),
            8 => Ok(SmallField { r: 8, poly: 0b1011, degree: 3 }),
            _ => Err(GeometryError::UnsupportedOrder(r)),
        }
    }

    fn add(&self, a: u8, b: u8) -> u8 {
        if self.poly == 0 {
            (a + b) % self.r
        } else {
            a ^ b
        }
    }

    fn mul(&self, a: u8, b: u8) -> u8 {
        if self.poly == 0 {
            return (a * b) % self.r;
        }
        let mut acc: u16 = 0;
        for bit in 0..self.degree {
            if b >> bit & 1 == 1 {
                acc ^= (a as u16) << bit;
            }
        }
        for bit in (self.degree..2 * self.degree).rev() {
            if acc >> bit & 1 == 1 {
                acc ^= (self.poly as u16) << (bit - self.degree);
            }
        }
        acc as u8
    }

    fn dot(&self, u: [u8; 3], v: [u8; 3]) -> u8 {
        (0..3).fold(0, |acc, k| self.add(acc, self.mul(u[k], v[k])))
    }
}

/// Points `0..points` and a list of lines (or blocks), each a sorted list of
/// points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceStructure {
    points: usize,
    lines: Vec<Vec<usize>>,
}

impl IncidenceStructure {
    pub fn new(points: usize, lines: Vec<Vec<usize>>) -> Result<Self, GeometryError> {
        let mut lines = lines;
        for line in &mut lines {
            if let Some(&point) = line.iter().find(|&&x| x >= points) {
                return Err(GeometryError::PointOutOfRange { point, points });
            }
            line.sort_unstable();
            line.dedup();
        }
        Ok(IncidenceStructure { points, lines })
    }

    pub fn num_points(&self) -> usize {
        self.points
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    pub fn is_incident(&self, point: usize, line: usize) -> bool {
        self.lines[line].binary_search(&point).is_ok()
    }

    /// All incident pairs `(point, line)`, sorted.
    pub fn flags(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .lines
            .iter()
            .enumerate()
            .flat_map(|(l, pts)| pts.iter().map(move |&p| (p, l)))
            .collect();
        out.sort_unstable();
        out
    }

    fn common_lines(&self, a: usize, b: usize) -> usize {
        self.lines
            .iter()
            .filter(|l| l.binary_search(&a).is_ok() && l.binary_search(&b).is_ok())
            .count()
    }

    /// Checks that the structure is a projective plane of order `r`.
    pub fn check_projective_plane(&self, r: usize) -> Result<(), GeometryError> {
        let n = r * r + r + 1;
        if self.points != n || self.lines.len() != n {
            return Err(GeometryError::AxiomViolation(format!(
                "{} points and {} lines, expected {n} of each",
                self.points,
                self.lines.len()
            )));
        }
        if let Some(l) = self.lines.iter().position(|l| l.len() != r + 1) {
            return Err(GeometryError::AxiomViolation(format!("line {l} does not have {} points", r + 1)));
        }
        for a in 0..n {
            for b in a + 1..n {
                if self.common_lines(a, b) != 1 {
                    return Err(GeometryError::AxiomViolation(format!(
                        "points {a} and {b} are not on exactly one line"
                    )));
                }
                let meet = self.lines[a].iter().filter(|x| self.lines[b].binary_search(x).is_ok()).count();
                if meet != 1 {
                    return Err(GeometryError::AxiomViolation(format!(
                        "lines {a} and {b} do not meet in exactly one point"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Checks that the structure is a `2-(v, k, λ)` design.
    pub fn check_design(&self, v: usize, k: usize, lambda: usize) -> Result<(), GeometryError> {
        if self.points != v {
            return Err(GeometryError::AxiomViolation(format!("{} points, expected {v}", self.points)));
        }
        if let Some(b) = self.lines.iter().position(|l| l.len() != k) {
            return Err(GeometryError::AxiomViolation(format!("block {b} does not have {k} points")));
        }
        for a in 0..v {
            for b in a + 1..v {
                let c = self.common_lines(a, b);
                if c != lambda {
                    return Err(GeometryError::AxiomViolation(format!(
                        "points {a} and {b} lie in {c} common blocks, expected {lambda}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Normalized homogeneous coordinates over `GF(r)` (first nonzero entry 1),
/// in lexicographic order.
fn normalized_vectors(field: &SmallField) -> Vec<[u8; 3]> {
    let r = field.r;
    let mut out = Vec::new();
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                let v = [a, b, c];
                if v.iter().find(|&&x| x != 0) == Some(&1) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// `PG(2, r)` with points and lines both indexed by normalized coordinates
/// in lexicographic order; a point lies on a line when their dot product is 0.
pub fn projective_plane(r: u64) -> Result<IncidenceStructure, GeometryError> {
    let field = SmallField::new(r)?;
    let vectors = normalized_vectors(&field);
    let lines = vectors
        .iter()
        .map(|&l| (0..vectors.len()).filter(|&p| field.dot(vectors[p], l) == 0).collect())
        .collect();
    let plane = IncidenceStructure::new(vectors.len(), lines)?;
    plane.check_projective_plane(r as usize)?;
    Ok(plane)
}

/// Homogeneous coordinates of the points of `projective_plane(r)`, as field
/// element codes.
pub fn projective_point_coordinates(r: u64) -> Result<Vec<[u8; 3]>, GeometryError> {
    Ok(normalized_vectors(&SmallField::new(r)?))
}

/// The `(11, 5, 2)`-biplane on `Z_11` with blocks `QR + i`,
/// `QR = {1, 3, 4, 5, 9}`.
pub fn biplane_11_5_2() -> IncidenceStructure {
    const QR: [usize; 5] = [1, 3, 4, 5, 9];
    let blocks = (0..11).map(|i| QR.iter().map(|&x| (x + i) % 11).collect()).collect();
    let design = IncidenceStructure::new(11, blocks).expect("points in range");
    design.check_design(11, 5, 2).expect("difference set");
    design
}

/// Flags sorted by `(point, line)`; two flags are adjacent when they share
/// the point or the line.
pub fn flag_graph(structure: &IncidenceStructure) -> Graph {
    let flags = structure.flags();
    let mut graph = Graph::empty(flags.len());
    for a in 0..flags.len() {
        for b in a + 1..flags.len() {
            if flags[a].0 == flags[b].0 || flags[a].1 == flags[b].1 {
                graph.add_edge(a, b).expect("distinct vertices");
            }
        }
    }
    graph
}

/// Points `0..v` followed by lines `v..v+b`, with the flags as edges.
pub fn incidence_graph(structure: &IncidenceStructure) -> Graph {
    let v = structure.num_points();
    let mut graph = Graph::empty(v + structure.num_lines());
    for (p, l) in structure.flags() {
        graph.add_edge(p, v + l).expect("distinct vertices");
    }
    graph
}
