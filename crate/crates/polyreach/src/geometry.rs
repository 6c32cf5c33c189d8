//! Axis-aligned boxes, template polyhedra, and parameter polytopes.

use crate::error::{Error, Result};
use crate::numkernel::simplex::{lp_solve, LinearProgram, RelOp, Sense};
use crate::poly::AffineMap;

/// Default cap on the dimension for vertex enumeration (2^n blowup).
pub const VERTEX_DIM_CAP: usize = 20;

/// Axis-aligned hyper-rectangle; degenerate (zero-width) axes are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl HyperBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch("box bound lengths differ".into()));
        }
        for (l, u) in lower.iter().zip(&upper) {
            if !l.is_finite() || !u.is_finite() {
                return Err(Error::InvalidInput("box bounds must be finite".into()));
            }
            if l > u {
                return Err(Error::EmptySet(format!("box has lower {l} above upper {u}")));
            }
        }
        Ok(HyperBox { lower, upper })
    }

    /// The unit box `[0,1]^n`.
    pub fn unit(n: usize) -> Self {
        HyperBox { lower: vec![0.0; n], upper: vec![1.0; n] }
    }

    pub fn point(coords: Vec<f64>) -> Result<Self> {
        HyperBox::new(coords.clone(), coords)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(l, u)| 0.5 * (l + u)).collect()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(l, u)| u - l).collect()
    }

    pub fn volume(&self) -> f64 {
        self.widths().iter().product()
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| *v >= l - tol && *v <= u + tol)
    }

    /// All `2^n` corner points in binary-counting order with the first axis
    /// most significant: for `[0,1]^2` this yields (0,0), (0,1), (1,0), (1,1).
    pub fn vertices(&self, dim_cap: usize) -> Result<Vec<Vec<f64>>> {
        let n = self.dim();
        if n > dim_cap {
            return Err(Error::ResourceLimit(format!(
                "vertex enumeration in dimension {n} exceeds cap {dim_cap}"
            )));
        }
        let count = 1usize << n;
        let mut out = Vec::with_capacity(count);
        for t in 0..count {
            let v: Vec<f64> = (0..n)
                .map(|k| {
                    if (t >> (n - 1 - k)) & 1 == 1 {
                        self.upper[k]
                    } else {
                        self.lower[k]
                    }
                })
                .collect();
            out.push(v);
        }
        Ok(out)
    }

    /// `max { dir . x | x in box }`.
    pub fn support(&self, dir: &[f64]) -> f64 {
        dir.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(d, (l, u))| if *d >= 0.0 { d * u } else { d * l })
            .sum()
    }

    /// The affine map carrying `[0,1]^n` onto this box:
    /// scale = width, offset = lower bound.
    pub fn unit_to_box_map(&self) -> AffineMap {
        AffineMap::new(self.widths(), self.lower.clone()).expect("widths are non-negative")
    }

    pub fn translate(&self, shift: &[f64]) -> Result<HyperBox> {
        if shift.len() != self.dim() {
            return Err(Error::DimensionMismatch("translation length differs from box".into()));
        }
        HyperBox::new(
            self.lower.iter().zip(shift).map(|(l, s)| l + s).collect(),
            self.upper.iter().zip(shift).map(|(u, s)| u + s).collect(),
        )
    }

    /// Intersection with another box; `None` when empty.
    pub fn intersect(&self, other: &HyperBox) -> Option<HyperBox> {
        if self.dim() != other.dim() {
            return None;
        }
        let lower: Vec<f64> = self
            .lower
            .iter()
            .zip(&other.lower)
            .map(|(a, b)| a.max(*b))
            .collect();
        let upper: Vec<f64> = self
            .upper
            .iter()
            .zip(&other.upper)
            .map(|(a, b)| a.min(*b))
            .collect();
        HyperBox::new(lower, upper).ok()
    }

    /// Clip one axis to `[lo, hi]`; `None` when the result is empty.
    pub fn clip_axis(&self, axis: usize, lo: f64, hi: f64) -> Option<HyperBox> {
        let mut lower = self.lower.clone();
        let mut upper = self.upper.clone();
        lower[axis] = lower[axis].max(lo);
        upper[axis] = upper[axis].min(hi);
        HyperBox::new(lower, upper).ok()
    }

    pub fn hull_with(&self, other: &HyperBox) -> HyperBox {
        HyperBox {
            lower: self
                .lower
                .iter()
                .zip(&other.lower)
                .map(|(a, b)| a.min(*b))
                .collect(),
            upper: self
                .upper
                .iter()
                .zip(&other.upper)
                .map(|(a, b)| a.max(*b))
                .collect(),
        }
    }
}

/// Smallest box containing all points (componentwise min/max).
pub fn interval_hull(points: &[Vec<f64>]) -> Result<HyperBox> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidInput("interval hull of an empty point list".into()))?;
    let n = first.len();
    let mut lower = first.clone();
    let mut upper = first.clone();
    for p in &points[1..] {
        if p.len() != n {
            return Err(Error::DimensionMismatch("points of mixed dimension".into()));
        }
        for k in 0..n {
            lower[k] = lower[k].min(p[k]);
            upper[k] = upper[k].max(p[k]);
        }
    }
    HyperBox::new(lower, upper)
}

/// Template rows `+-e_k` for each axis: first all upper faces, then all lower.
pub fn box_template(n: usize) -> Vec<Vec<f64>> {
    let mut rows = Vec::with_capacity(2 * n);
    for k in 0..n {
        let mut r = vec![0.0; n];
        r[k] = 1.0;
        rows.push(r);
    }
    for k in 0..n {
        let mut r = vec![0.0; n];
        r[k] = -1.0;
        rows.push(r);
    }
    rows
}

/// Box rows plus all pairwise `+-e_j +- e_k` rows.
pub fn octagon_template(n: usize) -> Vec<Vec<f64>> {
    let mut rows = box_template(n);
    for j in 0..n {
        for k in (j + 1)..n {
            for (sj, sk) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut r = vec![0.0; n];
                r[j] = sj;
                r[k] = sk;
                rows.push(r);
            }
        }
    }
    rows
}

/// Convex polytope `{ x | H x <= c }` with a fixed direction matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TemplatePolyhedron {
    dim: usize,
    template: Vec<Vec<f64>>,
    coeffs: Vec<f64>,
}

impl TemplatePolyhedron {
    pub fn new(dim: usize, template: Vec<Vec<f64>>, coeffs: Vec<f64>) -> Result<Self> {
        if template.len() != coeffs.len() {
            return Err(Error::DimensionMismatch(
                "template row count differs from coefficient count".into(),
            ));
        }
        for row in &template {
            if row.len() != dim {
                return Err(Error::DimensionMismatch("template row length differs".into()));
            }
            if row.iter().all(|v| *v == 0.0) {
                return Err(Error::InvalidInput("template rows must not be all-zero".into()));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput("template rows must be finite".into()));
            }
        }
        Ok(TemplatePolyhedron { dim, template, coeffs })
    }

    /// Tightest representation of a box under the given template (support
    /// function per row); exact when the template contains the box rows.
    pub fn of_box(template: Vec<Vec<f64>>, b: &HyperBox) -> Result<Self> {
        let coeffs = template.iter().map(|row| b.support(row)).collect();
        TemplatePolyhedron::new(b.dim(), template, coeffs)
    }

    /// Box-template H-representation of a box.
    pub fn hrep_of_box(b: &HyperBox) -> Self {
        TemplatePolyhedron::of_box(box_template(b.dim()), b).expect("box rows are valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_rows(&self) -> usize {
        self.template.len()
    }

    pub fn template(&self) -> &[Vec<f64>] {
        &self.template
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn with_coeffs(&self, coeffs: Vec<f64>) -> Result<Self> {
        TemplatePolyhedron::new(self.dim, self.template.clone(), coeffs)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim
            && self
                .template
                .iter()
                .zip(&self.coeffs)
                .all(|(row, c)| row.iter().zip(x).map(|(h, v)| h * v).sum::<f64>() <= c + tol)
    }

    /// Append foreign constraint rows, e.g. a guard; the result is a plain
    /// H-polyhedron used for intersection queries, not a fixed template.
    pub fn with_rows(&self, rows: &[Vec<f64>], rhs: &[f64]) -> Result<Self> {
        let mut template = self.template.clone();
        let mut coeffs = self.coeffs.clone();
        template.extend(rows.iter().cloned());
        coeffs.extend(rhs.iter().copied());
        TemplatePolyhedron::new(self.dim, template, coeffs)
    }

    /// Express the polyhedron in unit-box coordinates of `map`:
    /// `{ y | (H diag(scale)) y <= c - H . offset }`. Rows that lose all
    /// support (only degenerate axes) are dropped after a consistency check.
    pub fn preimage_under_map(&self, map: &AffineMap) -> Result<TemplatePolyhedron> {
        if map.dim() != self.dim {
            return Err(Error::DimensionMismatch(
                "affine map dimension differs from polyhedron".into(),
            ));
        }
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (row, c) in self.template.iter().zip(&self.coeffs) {
            let scaled: Vec<f64> =
                row.iter().zip(&map.scale).map(|(h, s)| h * s).collect();
            let shift: f64 = row.iter().zip(&map.offset).map(|(h, g)| h * g).sum();
            let b = c - shift;
            if scaled.iter().all(|v| *v == 0.0) {
                if b < -1e-9 {
                    return Err(Error::EmptySet(
                        "preimage constraint on a degenerate axis is infeasible".into(),
                    ));
                }
                continue;
            }
            rows.push(scaled);
            rhs.push(b);
        }
        TemplatePolyhedron::new(self.dim, rows, rhs)
    }

    /// True when the template is exactly the `+-e_k` pattern with every axis
    /// bounded from both sides.
    fn box_pattern(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let n = self.dim;
        let inf = f64::INFINITY;
        let mut lower = vec![-inf; n];
        let mut upper = vec![inf; n];
        for (row, c) in self.template.iter().zip(&self.coeffs) {
            let mut nz = None;
            for (k, v) in row.iter().enumerate() {
                if *v != 0.0 {
                    if nz.is_some() {
                        return None;
                    }
                    nz = Some((k, *v));
                }
            }
            let (k, v) = nz?;
            if v == 1.0 {
                upper[k] = upper[k].min(*c);
            } else if v == -1.0 {
                lower[k] = lower[k].max(-c);
            } else {
                return None;
            }
        }
        if lower.iter().any(|l| !l.is_finite()) || upper.iter().any(|u| !u.is_finite()) {
            return None;
        }
        Some((lower, upper))
    }

    /// Tightest axis-aligned box containing the polyhedron, via `2n` LPs
    /// (direct reads when the template is the box pattern).
    pub fn bounding_box(&self) -> Result<HyperBox> {
        if let Some((lower, upper)) = self.box_pattern() {
            return HyperBox::new(lower, upper)
                .map_err(|_| Error::EmptySet("box-template polyhedron is empty".into()));
        }
        let n = self.dim;
        let constraints: Vec<(Vec<f64>, RelOp, f64)> = self
            .template
            .iter()
            .zip(&self.coeffs)
            .map(|(row, c)| (row.clone(), RelOp::Le, *c))
            .collect();
        let mut lower = vec![0.0; n];
        let mut upper = vec![0.0; n];
        for k in 0..n {
            let mut obj = vec![0.0; n];
            obj[k] = 1.0;
            let hi = lp_solve(&LinearProgram::new(
                obj.clone(),
                constraints.clone(),
                Sense::Maximize,
            )?)
            .map_err(|e| match e {
                Error::Infeasible => Error::EmptySet("polyhedron is infeasible".into()),
                Error::Unbounded => {
                    Error::UnboundedSet(format!("axis {k} is unbounded above"))
                }
                other => other,
            })?;
            let lo = lp_solve(&LinearProgram::new(obj, constraints.clone(), Sense::Minimize)?)
                .map_err(|e| match e {
                    Error::Infeasible => Error::EmptySet("polyhedron is infeasible".into()),
                    Error::Unbounded => {
                        Error::UnboundedSet(format!("axis {k} is unbounded below"))
                    }
                    other => other,
                })?;
            lower[k] = lo.value;
            upper[k] = hi.value;
        }
        // guard against LP rounding producing inverted degenerate axes
        for k in 0..n {
            if lower[k] > upper[k] {
                let mid = 0.5 * (lower[k] + upper[k]);
                lower[k] = mid;
                upper[k] = mid;
            }
        }
        HyperBox::new(lower, upper)
    }

    /// Feasibility check via one LP.
    pub fn is_empty(&self) -> Result<bool> {
        if self.template.is_empty() {
            return Ok(false);
        }
        if let Some((lower, upper)) = self.box_pattern() {
            return Ok(lower.iter().zip(&upper).any(|(l, u)| l > u));
        }
        let constraints: Vec<(Vec<f64>, RelOp, f64)> = self
            .template
            .iter()
            .zip(&self.coeffs)
            .map(|(row, c)| (row.clone(), RelOp::Le, *c))
            .collect();
        match lp_solve(&LinearProgram::new(
            vec![0.0; self.dim],
            constraints,
            Sense::Maximize,
        )?) {
            Ok(_) => Ok(false),
            Err(Error::Infeasible) => Ok(true),
            Err(e) => Err(e),
        }
    }
}

/// Convex parameter region: an H-polytope over the parameter space with a
/// cached box/vertex view when available. Non-emptiness and boundedness are
/// established at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSet {
    hrep: TemplatePolyhedron,
    box_rep: Option<HyperBox>,
    vertices: Option<Vec<Vec<f64>>>,
    bounding: HyperBox,
}

impl ParamSet {
    /// Parameter box; the usual case, including the zero-parameter point.
    pub fn from_box(b: HyperBox) -> Result<Self> {
        let hrep = if b.dim() == 0 {
            TemplatePolyhedron::new(0, Vec::new(), Vec::new())?
        } else {
            TemplatePolyhedron::hrep_of_box(&b)
        };
        let vertices = b.vertices(VERTEX_DIM_CAP).ok();
        Ok(ParamSet { hrep, box_rep: Some(b.clone()), vertices, bounding: b })
    }

    pub fn from_hrep(hrep: TemplatePolyhedron) -> Result<Self> {
        if hrep.is_empty()? {
            return Err(Error::EmptySet("parameter set is empty".into()));
        }
        let bounding = hrep.bounding_box()?;
        if let Some((lower, upper)) = hrep.box_pattern() {
            let b = HyperBox::new(lower, upper)?;
            let vertices = b.vertices(VERTEX_DIM_CAP).ok();
            return Ok(ParamSet { hrep, box_rep: Some(b.clone()), vertices, bounding: b });
        }
        let vertices = enumerate_vertices(&hrep);
        Ok(ParamSet { hrep, box_rep: None, vertices, bounding })
    }

    pub fn dim(&self) -> usize {
        self.hrep.dim()
    }

    pub fn hrep(&self) -> &TemplatePolyhedron {
        &self.hrep
    }

    pub fn as_box(&self) -> Option<&HyperBox> {
        self.box_rep.as_ref()
    }

    pub fn vertices(&self) -> Option<&[Vec<f64>]> {
        self.vertices.as_deref()
    }

    pub fn bounding_box(&self) -> &HyperBox {
        &self.bounding
    }

    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        match &self.box_rep {
            Some(b) => b.contains(p, tol),
            None => self.hrep.contains(p, tol),
        }
    }

    /// Arithmetic mean of the vertex set when one is available (the center
    /// for boxes); otherwise the Chebyshev center.
    pub fn centroid(&self) -> Result<Vec<f64>> {
        if let Some(b) = &self.box_rep {
            return Ok(b.center());
        }
        if let Some(vs) = &self.vertices {
            if !vs.is_empty() {
                let m = self.dim();
                let mut mean = vec![0.0; m];
                for v in vs {
                    for k in 0..m {
                        mean[k] += v[k];
                    }
                }
                for c in mean.iter_mut() {
                    *c /= vs.len() as f64;
                }
                return Ok(mean);
            }
        }
        self.chebyshev_center()
    }

    fn chebyshev_center(&self) -> Result<Vec<f64>> {
        let m = self.dim();
        // maximize r subject to H p + ||H_i|| r <= c
        let mut constraints = Vec::new();
        for (row, c) in self.hrep.template().iter().zip(self.hrep.coeffs()) {
            let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
            let mut r = row.clone();
            r.push(norm);
            constraints.push((r, RelOp::Le, *c));
        }
        let mut rpos = vec![0.0; m];
        rpos.push(1.0);
        constraints.push((rpos.clone(), RelOp::Ge, 0.0));
        let mut obj = vec![0.0; m];
        obj.push(1.0);
        let sol = lp_solve(&LinearProgram::new(obj, constraints, Sense::Maximize)?)?;
        Ok(sol.point[..m].to_vec())
    }

    /// Exact maximum of `constant + gradient . p` over the set. Boxes use
    /// corner selection per gradient sign; vertex lists use a scan; anything
    /// else falls back to one LP.
    pub fn max_affine(&self, gradient: &[f64], constant: f64) -> Result<f64> {
        if gradient.len() != self.dim() {
            return Err(Error::DimensionMismatch(
                "gradient length differs from parameter dimension".into(),
            ));
        }
        if let Some(b) = &self.box_rep {
            return Ok(constant + b.support(gradient));
        }
        if let Some(vs) = &self.vertices {
            let best = vs
                .iter()
                .map(|v| gradient.iter().zip(v).map(|(g, p)| g * p).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max);
            return Ok(constant + best);
        }
        let constraints: Vec<(Vec<f64>, RelOp, f64)> = self
            .hrep
            .template()
            .iter()
            .zip(self.hrep.coeffs())
            .map(|(row, c)| (row.clone(), RelOp::Le, *c))
            .collect();
        let sol = lp_solve(&LinearProgram::new(
            gradient.to_vec(),
            constraints,
            Sense::Maximize,
        )?)?;
        Ok(constant + sol.value)
    }
}

/// Brute-force vertex enumeration for small H-polytopes: solve every
/// dim-subset of rows and keep the feasible intersection points.
fn enumerate_vertices(hrep: &TemplatePolyhedron) -> Option<Vec<Vec<f64>>> {
    use crate::numkernel::dense::{solve_dense, DenseLinearSystem};

    let m = hrep.dim();
    let rows = hrep.template();
    let l = rows.len();
    if m == 0 || m > 6 || l > 24 {
        return None;
    }
    let mut verts: Vec<Vec<f64>> = Vec::new();
    let mut picks: Vec<usize> = (0..m).collect();
    if l < m {
        return None;
    }
    loop {
        let mat: Vec<Vec<f64>> = picks.iter().map(|&i| rows[i].clone()).collect();
        let rhs: Vec<f64> = picks.iter().map(|&i| hrep.coeffs()[i]).collect();
        if let Ok(sys) = DenseLinearSystem::new(mat, rhs) {
            if let Ok(x) = solve_dense(&sys) {
                if hrep.contains(&x, 1e-9) {
                    let dup = verts.iter().any(|v| {
                        v.iter().zip(&x).all(|(a, b)| (a - b).abs() <= 1e-9)
                    });
                    if !dup {
                        verts.push(x);
                    }
                }
            }
        }
        // next combination
        let mut i = m as i64 - 1;
        while i >= 0 && picks[i as usize] == l - m + i as usize {
            i -= 1;
        }
        if i < 0 {
            break;
        }
        picks[i as usize] += 1;
        for j in (i as usize + 1)..m {
            picks[j] = picks[j - 1] + 1;
        }
    }
    if verts.is_empty() {
        None
    } else {
        Some(verts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounding_box_of_simplex() {
        let p = TemplatePolyhedron::new(
            2,
            vec![vec![1.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]],
            vec![1.0, 0.0, 0.0],
        )
        .unwrap();
        let b = p.bounding_box().unwrap();
        assert_eq!(b, HyperBox::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap());
    }

    #[test]
    fn bounding_box_of_box_is_idempotent() {
        let b = HyperBox::new(vec![-2.0, 3.5], vec![1.0, 4.0]).unwrap();
        let p = TemplatePolyhedron::hrep_of_box(&b);
        assert_eq!(p.bounding_box().unwrap(), b);
    }

    #[test]
    fn bounding_box_contains_samples() {
        // rotated-ish polytope; rejection-sample feasible points
        let p = TemplatePolyhedron::new(
            2,
            vec![
                vec![1.0, 2.0],
                vec![-1.0, 1.0],
                vec![0.0, -1.0],
                vec![-1.0, -2.0],
            ],
            vec![3.0, 1.5, 0.5, 2.0],
        )
        .unwrap();
        let b = p.bounding_box().unwrap();
        let mut state = 0.9_f64;
        let mut next = || {
            state = (state * 631.0 + 0.7331).fract();
            state * 12.0 - 6.0
        };
        let mut inside = 0;
        for _ in 0..100_000 {
            let x = [next(), next()];
            if p.contains(&x, 0.0) {
                inside += 1;
                assert!(b.contains(&x, 1e-9));
            }
        }
        assert!(inside > 1000, "sampler never hit the polytope");
    }

    #[test]
    fn bounding_box_error_cases() {
        let empty = TemplatePolyhedron::new(
            1,
            vec![vec![1.0], vec![-1.0]],
            vec![-1.0, -1.0], // x <= -1 and x >= 1
        )
        .unwrap();
        assert!(matches!(empty.bounding_box(), Err(Error::EmptySet(_))));

        let open = TemplatePolyhedron::new(2, vec![vec![1.0, 0.0]], vec![1.0]).unwrap();
        assert!(matches!(open.bounding_box(), Err(Error::UnboundedSet(_))));
    }

    #[test]
    fn unit_map_cases() {
        let b = HyperBox::new(vec![1.0, -1.0], vec![3.0, 0.0]).unwrap();
        let tau = b.unit_to_box_map();
        assert_eq!(tau.scale, vec![2.0, 1.0]);
        assert_eq!(tau.offset, vec![1.0, -1.0]);

        let unit = HyperBox::unit(3);
        let tau = unit.unit_to_box_map();
        assert_eq!(tau.scale, vec![1.0; 3]);
        assert_eq!(tau.offset, vec![0.0; 3]);

        let degen = HyperBox::new(vec![5.0], vec![5.0]).unwrap();
        let tau = degen.unit_to_box_map();
        assert_eq!(tau.scale, vec![0.0]);
        assert_eq!(tau.offset, vec![5.0]);
    }

    #[test]
    fn unit_map_round_trip() {
        let b = HyperBox::new(vec![-3.0, 2.0], vec![1.5, 7.0]).unwrap();
        let tau = b.unit_to_box_map();
        let mut state = 0.31_f64;
        let mut next = || {
            state = (state * 727.0 + 0.911).fract();
            state
        };
        for _ in 0..200 {
            let y = [next(), next()];
            let x = tau.apply(&y);
            assert!(b.contains(&x, 1e-12));
            let back: Vec<f64> = x
                .iter()
                .zip(tau.scale.iter().zip(&tau.offset))
                .map(|(v, (s, g))| (v - g) / s)
                .collect();
            assert!(back.iter().zip(&y).all(|(a, b)| (a - b).abs() <= 1e-12));
        }
    }

    #[test]
    fn vertices_order_and_degenerate() {
        let b = HyperBox::unit(2);
        let vs = b.vertices(VERTEX_DIM_CAP).unwrap();
        assert_eq!(
            vs,
            vec![
                vec![0.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0]
            ]
        );

        let degen = HyperBox::new(vec![0.0, 0.0], vec![0.0, 1.0]).unwrap();
        let vs = degen.vertices(VERTEX_DIM_CAP).unwrap();
        assert_eq!(vs.len(), 4);
        assert!(vs.iter().all(|v| v[0] == 0.0));

        let b3 = HyperBox::new(vec![0.0, 1.0, -1.0], vec![2.0, 3.0, 0.0]).unwrap();
        let vs = b3.vertices(VERTEX_DIM_CAP).unwrap();
        assert_eq!(vs.len(), 8);
        // brute-force product oracle
        let mut expect = Vec::new();
        for &a in &[0.0, 2.0] {
            for &b in &[1.0, 3.0] {
                for &c in &[-1.0, 0.0] {
                    expect.push(vec![a, b, c]);
                }
            }
        }
        for e in expect {
            assert!(vs.contains(&e));
        }
        assert!(HyperBox::unit(25).vertices(VERTEX_DIM_CAP).is_err());
    }

    #[test]
    fn interval_hull_cases() {
        let h = interval_hull(&[
            vec![0.0, 0.0],
            vec![1.0, 2.0],
            vec![-1.0, 1.0],
        ])
        .unwrap();
        assert_eq!(h, HyperBox::new(vec![-1.0, 0.0], vec![1.0, 2.0]).unwrap());

        let single = interval_hull(&[vec![3.0, -4.0]]).unwrap();
        assert_eq!(single.widths(), vec![0.0, 0.0]);

        assert!(matches!(interval_hull(&[]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn interval_hull_of_vertices_is_identity() {
        let b = HyperBox::new(vec![-1.0, 0.5, 2.0], vec![4.0, 0.5, 3.0]).unwrap();
        let h = interval_hull(&b.vertices(VERTEX_DIM_CAP).unwrap()).unwrap();
        assert_eq!(h, b);
    }

    #[test]
    fn contains_with_tolerance() {
        let unit = HyperBox::unit(2);
        assert!(unit.contains(&[0.5, 0.5], 0.0));
        assert!(unit.contains(&[1.0 + 1e-12, 0.0], 1e-9));
        assert!(!unit.contains(&[1.1, 0.0], 1e-9));

        let simplex = TemplatePolyhedron::new(
            2,
            vec![vec![1.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]],
            vec![1.0, 0.0, 0.0],
        )
        .unwrap();
        assert!(!simplex.contains(&[0.6, 0.6], 1e-9));
        assert!(simplex.contains(&[0.5, 0.5], 1e-9));
    }

    #[test]
    fn preimage_identity_and_inverse() {
        let poly = TemplatePolyhedron::new(
            2,
            vec![vec![1.0, 1.0], vec![-1.0, 0.0]],
            vec![2.0, 0.5],
        )
        .unwrap();
        let id = AffineMap::identity(2);
        assert_eq!(poly.preimage_under_map(&id).unwrap(), poly);

        // tau(unit box) in H-rep pulls back to the unit box
        let b = HyperBox::new(vec![2.0, -1.0], vec![5.0, 3.0]).unwrap();
        let tau = b.unit_to_box_map();
        let hrep = TemplatePolyhedron::hrep_of_box(&b);
        let pre = hrep.preimage_under_map(&tau).unwrap();
        let back = pre.bounding_box().unwrap();
        assert!(back
            .lower()
            .iter()
            .chain(back.upper())
            .zip([0.0, 0.0, 1.0, 1.0])
            .all(|(a, b)| (a - b).abs() <= 1e-12));
    }

    #[test]
    fn preimage_membership_equivalence() {
        let poly = TemplatePolyhedron::new(
            2,
            vec![vec![1.0, 2.0], vec![-1.0, 1.0], vec![0.0, -1.0]],
            vec![6.0, 2.0, 1.0],
        )
        .unwrap();
        let tau = AffineMap::new(vec![2.0, 3.0], vec![-1.0, 0.5]).unwrap();
        let pre = poly.preimage_under_map(&tau).unwrap();
        let mut state = 0.13_f64;
        let mut next = || {
            state = (state * 881.0 + 0.421).fract();
            state * 4.0 - 2.0
        };
        for _ in 0..1000 {
            let y = [next(), next()];
            let x = tau.apply(&y);
            assert_eq!(pre.contains(&y, 1e-9), poly.contains(&x, 1e-9));
        }
    }

    #[test]
    fn preimage_degenerate_axis() {
        let b = HyperBox::new(vec![2.0, 4.0], vec![5.0, 4.0]).unwrap();
        let tau = b.unit_to_box_map();
        let hrep = TemplatePolyhedron::hrep_of_box(&b);
        let pre = hrep.preimage_under_map(&tau).unwrap();
        // rows touching only the zero-width axis vanish
        assert_eq!(pre.n_rows(), 2);
    }

    #[test]
    fn param_set_centroids() {
        let p = ParamSet::from_box(HyperBox::new(vec![0.5], vec![1.5]).unwrap()).unwrap();
        assert_eq!(p.centroid().unwrap(), vec![1.0]);

        let p =
            ParamSet::from_box(HyperBox::new(vec![0.0, 0.0], vec![1.0, 2.0]).unwrap()).unwrap();
        assert_eq!(p.centroid().unwrap(), vec![0.5, 1.0]);

        // simplex p1 + p2 <= 1, p >= 0: mean of the three vertices
        let simplex = TemplatePolyhedron::new(
            2,
            vec![vec![1.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]],
            vec![1.0, 0.0, 0.0],
        )
        .unwrap();
        let p = ParamSet::from_hrep(simplex).unwrap();
        let c = p.centroid().unwrap();
        assert!((c[0] - 1.0 / 3.0).abs() <= 1e-9);
        assert!((c[1] - 1.0 / 3.0).abs() <= 1e-9);
    }

    #[test]
    fn param_set_rejects_empty() {
        let empty = TemplatePolyhedron::new(
            1,
            vec![vec![1.0], vec![-1.0]],
            vec![-2.0, 1.0],
        )
        .unwrap();
        assert!(matches!(ParamSet::from_hrep(empty), Err(Error::EmptySet(_))));
    }

    #[test]
    fn zero_dimensional_param_set() {
        let p = ParamSet::from_box(HyperBox::new(vec![], vec![]).unwrap()).unwrap();
        assert_eq!(p.dim(), 0);
        assert_eq!(p.centroid().unwrap(), Vec::<f64>::new());
        assert_eq!(p.vertices().unwrap().len(), 1);
        assert_eq!(p.max_affine(&[], 4.2).unwrap(), 4.2);
    }

    #[test]
    fn max_affine_over_box_and_hrep() {
        let p = ParamSet::from_box(HyperBox::new(vec![0.5], vec![1.5]).unwrap()).unwrap();
        // max of (-b4)(p) + const where b4 = 0.6 p + 1.4: attained at p = 0.5
        let got = p.max_affine(&[-0.6], -1.4).unwrap();
        assert!((got - (-1.7)).abs() <= 1e-12);
        // constant function
        assert_eq!(p.max_affine(&[0.0], 3.25).unwrap(), 3.25);

        let tri = TemplatePolyhedron::new(
            2,
            vec![vec![1.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]],
            vec![1.0, 0.0, 0.0],
        )
        .unwrap();
        let p = ParamSet::from_hrep(tri).unwrap();
        let got = p.max_affine(&[1.0, 2.0], 0.0).unwrap();
        assert!((got - 2.0).abs() <= 1e-9);
    }

    #[test]
    fn max_affine_matches_corner_enumeration() {
        let b = HyperBox::new(vec![-1.0, 2.0, 0.0], vec![1.5, 3.0, 0.25]).unwrap();
        let p = ParamSet::from_box(b.clone()).unwrap();
        let mut state = 0.59_f64;
        let mut next = || {
            state = (state * 463.0 + 0.317).fract();
            state * 6.0 - 3.0
        };
        for _ in 0..100 {
            let g = [next(), next(), next()];
            let c = next();
            let best = b
                .vertices(VERTEX_DIM_CAP)
                .unwrap()
                .iter()
                .map(|v| c + g.iter().zip(v).map(|(a, b)| a * b).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((p.max_affine(&g, c).unwrap() - best).abs() <= 1e-12);
        }
    }

    #[test]
    fn octagon_template_row_count() {
        assert_eq!(octagon_template(2).len(), 8);
        assert_eq!(octagon_template(3).len(), 18);
        assert_eq!(box_template(4).len(), 8);
    }
}
