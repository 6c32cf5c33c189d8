//! Parametric multivariate polynomials in the power basis.
//!
//! A [`ParamPoly`] maps `(x, p) -> sum_i a_i(p) * x^i` where each coefficient
//! `a_i` is affine in the parameter vector `p`. The affinity is structural:
//! [`ParamAffineCoeff`] cannot represent anything else, so downstream bound
//! computations stay linear programs.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Coefficients with absolute value at or below this are dropped on
/// construction so that the stored degree stays tight.
pub const COEFF_DROP_TOL: f64 = 1e-14;

/// Exponent vector `(i_1, ..., i_n)` for one monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn max_entry(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

/// Enumerate all multi-indices `i <= degree` in lexicographic order
/// (first axis most significant). Shared by the Bernstein form and the
/// control matrix so that row `j` always pairs with coefficient `j`.
pub fn multi_index_range(degree: &MultiIndex) -> Vec<MultiIndex> {
    let n = degree.len();
    let count: usize = degree.0.iter().map(|&d| d as usize + 1).product();
    let mut out = Vec::with_capacity(count);
    let mut cur = vec![0u32; n];
    loop {
        out.push(MultiIndex(cur.clone()));
        // increment like an odometer, last axis fastest
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if cur[k] < degree.0[k] {
                cur[k] += 1;
                break;
            }
            cur[k] = 0;
        }
    }
}

/// A scalar that is affine in the parameters: `value(p) = constant + gradient . p`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamAffineCoeff {
    pub constant: f64,
    pub gradient: Vec<f64>,
}

impl ParamAffineCoeff {
    pub fn constant(c: f64, n_params: usize) -> Self {
        ParamAffineCoeff { constant: c, gradient: vec![0.0; n_params] }
    }

    pub fn new(constant: f64, gradient: Vec<f64>) -> Self {
        ParamAffineCoeff { constant, gradient }
    }

    pub fn n_params(&self) -> usize {
        self.gradient.len()
    }

    pub fn eval(&self, p: &[f64]) -> f64 {
        debug_assert_eq!(p.len(), self.gradient.len());
        self.constant + self.gradient.iter().zip(p).map(|(g, v)| g * v).sum::<f64>()
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, other: &ParamAffineCoeff, scale: f64) {
        self.constant += scale * other.constant;
        for (g, o) in self.gradient.iter_mut().zip(&other.gradient) {
            *g += scale * o;
        }
    }

    pub fn scaled(&self, scale: f64) -> Self {
        ParamAffineCoeff {
            constant: self.constant * scale,
            gradient: self.gradient.iter().map(|g| g * scale).collect(),
        }
    }

    pub fn is_negligible(&self) -> bool {
        self.constant.abs() <= COEFF_DROP_TOL
            && self.gradient.iter().all(|g| g.abs() <= COEFF_DROP_TOL)
    }
}

/// Sparse n-variate polynomial with parameter-affine coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamPoly {
    n_vars: usize,
    n_params: usize,
    terms: BTreeMap<MultiIndex, ParamAffineCoeff>,
    degree: MultiIndex,
}

impl ParamPoly {
    pub fn zero(n_vars: usize, n_params: usize) -> Self {
        ParamPoly {
            n_vars,
            n_params,
            terms: BTreeMap::new(),
            degree: MultiIndex::zeros(n_vars),
        }
    }

    /// Build from `(exponents, coefficient)` pairs; repeated exponents are
    /// merged, negligible coefficients dropped, the degree kept tight.
    pub fn from_terms<I>(n_vars: usize, n_params: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, ParamAffineCoeff)>,
    {
        let mut map: BTreeMap<MultiIndex, ParamAffineCoeff> = BTreeMap::new();
        for (idx, coeff) in terms {
            if idx.len() != n_vars {
                return Err(Error::DimensionMismatch(format!(
                    "term exponent length {} but polynomial has {} variables",
                    idx.len(),
                    n_vars
                )));
            }
            if coeff.n_params() != n_params {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient gradient length {} but polynomial has {} parameters",
                    coeff.n_params(),
                    n_params
                )));
            }
            map.entry(idx)
                .and_modify(|c| c.add_scaled(&coeff, 1.0))
                .or_insert(coeff);
        }
        map.retain(|_, c| !c.is_negligible());
        let degree = tight_degree(n_vars, map.keys());
        Ok(ParamPoly { n_vars, n_params, terms: map, degree })
    }

    /// Convenience constructor for constant-coefficient terms.
    pub fn from_const_terms(
        n_vars: usize,
        terms: &[(Vec<u32>, f64)],
    ) -> Result<Self> {
        Self::from_terms(
            n_vars,
            0,
            terms
                .iter()
                .map(|(e, c)| (MultiIndex(e.clone()), ParamAffineCoeff::constant(*c, 0))),
        )
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &ParamAffineCoeff)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> Option<&ParamAffineCoeff> {
        self.terms.get(idx)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Componentwise maximal exponent over the stored terms.
    pub fn degree(&self) -> &MultiIndex {
        &self.degree
    }

    /// Evaluate at state `x` and parameter point `p`.
    pub fn eval(&self, x: &[f64], p: &[f64]) -> Result<f64> {
        if x.len() != self.n_vars {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, polynomial has {} variables",
                x.len(),
                self.n_vars
            )));
        }
        if p.len() != self.n_params {
            return Err(Error::DimensionMismatch(format!(
                "parameter point has {} coordinates, polynomial has {} parameters",
                p.len(),
                self.n_params
            )));
        }
        let mut acc = 0.0;
        for (idx, coeff) in &self.terms {
            let mut mono = 1.0;
            for (xk, &e) in x.iter().zip(&idx.0) {
                if e > 0 {
                    mono *= xk.powi(e as i32);
                }
            }
            acc += coeff.eval(p) * mono;
        }
        Ok(acc)
    }

    /// True iff every state variable has per-variable degree <= 1.
    ///
    /// With `include_params` the check also covers the joint `(x, p)`
    /// monomials; because coefficients are structurally affine in `p`, a
    /// parameter never appears with degree above one nor multiplied by
    /// another parameter, so the joint check imposes nothing extra.
    pub fn is_multiaffine(&self, include_params: bool) -> bool {
        let _ = include_params;
        self.terms.keys().all(|idx| idx.max_entry() <= 1)
    }

    pub fn scaled(&self, scale: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(i, c)| (i.clone(), c.scaled(scale)))
            .collect::<Vec<_>>();
        ParamPoly::from_terms(self.n_vars, self.n_params, terms)
            .expect("scaling preserves dimensions")
    }

    /// Substitute `x_k = scale_k * y_k + offset_k`, returning the composed
    /// polynomial in `y`. A zero scale on some axis acts as a constant
    /// substitution and drops that axis from the result's degree.
    pub fn compose_box(&self, map: &AffineMap) -> Result<ParamPoly> {
        if map.dim() != self.n_vars {
            return Err(Error::DimensionMismatch(format!(
                "affine map has dimension {}, polynomial has {} variables",
                map.dim(),
                self.n_vars
            )));
        }
        let mut out: BTreeMap<MultiIndex, ParamAffineCoeff> = BTreeMap::new();
        for (idx, coeff) in &self.terms {
            // Expand prod_k (lambda_k y_k + g_k)^{i_k} one axis at a time.
            // Entries are (exponents so far, scalar factor).
            let mut partial: Vec<(Vec<u32>, f64)> = vec![(Vec::with_capacity(idx.len()), 1.0)];
            for (k, &ik) in idx.0.iter().enumerate() {
                let lambda = map.scale[k];
                let g = map.offset[k];
                let mut next = Vec::with_capacity(partial.len() * (ik as usize + 1));
                for (exps, factor) in &partial {
                    for j in 0..=ik {
                        let w = binomial(ik, j) as f64
                            * lambda.powi(j as i32)
                            * g.powi((ik - j) as i32);
                        if w == 0.0 {
                            continue;
                        }
                        let mut e = exps.clone();
                        e.push(j);
                        next.push((e, factor * w));
                    }
                }
                partial = next;
            }
            for (exps, factor) in partial {
                out.entry(MultiIndex(exps))
                    .and_modify(|c| c.add_scaled(coeff, factor))
                    .or_insert_with(|| coeff.scaled(factor));
            }
        }
        ParamPoly::from_terms(self.n_vars, self.n_params, out)
    }

    /// Degree-elevating blossom: the unique symmetric multi-affine map `w`
    /// on `d` copies of the argument with `w(x, ..., x) = poly(x)`.
    ///
    /// The result is a polynomial over `n * d` variables; copy `r` of
    /// variable `k` lives at flat index `r * n + k`. The monomial `x^i`
    /// blossoms to `prod_k e_{i_k}(y_{0,k}, ..., y_{d-1,k}) / C(d, i_k)`
    /// where `e_j` is the elementary symmetric polynomial.
    pub fn blossom(&self, d: u32) -> Result<ParamPoly> {
        if d < self.degree.max_entry() || d == 0 {
            return Err(Error::InvalidInput(format!(
                "blossom degree {} below polynomial degree {}",
                d,
                self.degree.max_entry()
            )));
        }
        let n = self.n_vars;
        let out_vars = n * d as usize;
        let mut expanded: usize = 0;
        let mut out: BTreeMap<MultiIndex, ParamAffineCoeff> = BTreeMap::new();
        for (idx, coeff) in &self.terms {
            let mut combos: u64 = 1;
            for &ik in &idx.0 {
                combos = combos.saturating_mul(binomial(d, ik));
            }
            expanded = expanded.saturating_add(combos as usize);
            if expanded > 2_000_000 {
                return Err(Error::ResourceLimit(
                    "blossom expansion exceeds the term budget".into(),
                ));
            }
            let norm: f64 = idx.0.iter().map(|&ik| binomial(d, ik) as f64).product();
            // Per axis, choose which copies carry the variable.
            let mut partial: Vec<Vec<u32>> = vec![vec![0; out_vars]];
            for (k, &ik) in idx.0.iter().enumerate() {
                let subsets = k_subsets(d, ik);
                let mut next = Vec::with_capacity(partial.len() * subsets.len());
                for exps in &partial {
                    for subset in &subsets {
                        let mut e = exps.clone();
                        for &r in subset {
                            e[r as usize * n + k] = 1;
                        }
                        next.push(e);
                    }
                }
                partial = next;
            }
            let scaled = coeff.scaled(1.0 / norm);
            for exps in partial {
                out.entry(MultiIndex(exps))
                    .and_modify(|c| c.add_scaled(&scaled, 1.0))
                    .or_insert_with(|| scaled.clone());
            }
        }
        ParamPoly::from_terms(out_vars, self.n_params, out)
    }
}

fn tight_degree<'a>(n_vars: usize, keys: impl Iterator<Item = &'a MultiIndex>) -> MultiIndex {
    let mut degree = vec![0u32; n_vars];
    for idx in keys {
        for (d, &e) in degree.iter_mut().zip(&idx.0) {
            *d = (*d).max(e);
        }
    }
    MultiIndex(degree)
}

/// Exact binomial coefficient; callers guard the magnitude of `n`.
pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u64 / (j + 1) as u64;
    }
    acc
}

/// All k-element subsets of `{0, ..., d-1}` in lexicographic order.
fn k_subsets(d: u32, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = (0..k).collect();
    if k > d {
        return out;
    }
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k as i64 - 1;
        while i >= 0 && cur[i as usize] == d - k + i as u32 {
            i -= 1;
        }
        if i < 0 {
            return out;
        }
        cur[i as usize] += 1;
        for j in (i as usize + 1)..k as usize {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Vector of polynomials sharing variable and parameter dimensions; the
/// right-hand side of `x(k+1) = pi(x(k), p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyVector {
    components: Vec<ParamPoly>,
}

impl PolyVector {
    pub fn new(components: Vec<ParamPoly>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidInput("polynomial vector must be non-empty".into()))?;
        let (n, m) = (first.n_vars(), first.n_params());
        if components.iter().any(|c| c.n_vars() != n || c.n_params() != m) {
            return Err(Error::DimensionMismatch(
                "polynomial vector components disagree on dimensions".into(),
            ));
        }
        Ok(PolyVector { components })
    }

    pub fn components(&self) -> &[ParamPoly] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn n_vars(&self) -> usize {
        self.components[0].n_vars()
    }

    pub fn n_params(&self) -> usize {
        self.components[0].n_params()
    }

    pub fn eval(&self, x: &[f64], p: &[f64]) -> Result<Vec<f64>> {
        self.components.iter().map(|c| c.eval(x, p)).collect()
    }

    pub fn is_multiaffine(&self, include_params: bool) -> bool {
        self.components.iter().all(|c| c.is_multiaffine(include_params))
    }

    /// `sum_k weights_k * component_k` with merged terms.
    pub fn linear_combination(&self, weights: &[f64]) -> Result<ParamPoly> {
        if weights.len() != self.components.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} components",
                weights.len(),
                self.components.len()
            )));
        }
        let mut terms: Vec<(MultiIndex, ParamAffineCoeff)> = Vec::new();
        for (w, comp) in weights.iter().zip(&self.components) {
            if *w == 0.0 {
                continue;
            }
            for (idx, coeff) in comp.terms() {
                terms.push((idx.clone(), coeff.scaled(*w)));
            }
        }
        ParamPoly::from_terms(self.n_vars(), self.n_params(), terms)
    }
}

/// Forward Euler step of a vector field: component `k` becomes `x_k + h * f_k`.
pub fn euler_discretize(field: &PolyVector, h: f64) -> Result<PolyVector> {
    if !(h > 0.0) {
        return Err(Error::InvalidInput(format!("Euler step must be positive, got {h}")));
    }
    euler_map(field, h)
}

/// Euler map with an arbitrary signed step; used internally for the
/// time-reversed dynamics.
pub(crate) fn euler_map(field: &PolyVector, h: f64) -> Result<PolyVector> {
    if field.len() != field.n_vars() {
        return Err(Error::DimensionMismatch(format!(
            "field has {} components over {} variables",
            field.len(),
            field.n_vars()
        )));
    }
    let n = field.n_vars();
    let m = field.n_params();
    let mut comps = Vec::with_capacity(n);
    for (k, f) in field.components().iter().enumerate() {
        let mut exps = vec![0u32; n];
        exps[k] = 1;
        let mut terms: Vec<(MultiIndex, ParamAffineCoeff)> =
            vec![(MultiIndex(exps), ParamAffineCoeff::constant(1.0, m))];
        for (idx, coeff) in f.terms() {
            terms.push((idx.clone(), coeff.scaled(h)));
        }
        comps.push(ParamPoly::from_terms(n, m, terms)?);
    }
    PolyVector::new(comps)
}

/// Diagonal affine map `x -> diag(scale) x + offset` used to carry the unit
/// box onto an axis-aligned box.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub scale: Vec<f64>,
    pub offset: Vec<f64>,
}

impl AffineMap {
    pub fn new(scale: Vec<f64>, offset: Vec<f64>) -> Result<Self> {
        if scale.len() != offset.len() {
            return Err(Error::DimensionMismatch(
                "affine map scale and offset lengths differ".into(),
            ));
        }
        if scale.iter().any(|s| *s < 0.0 || !s.is_finite()) {
            return Err(Error::InvalidInput(
                "affine map scale entries must be non-negative and finite".into(),
            ));
        }
        Ok(AffineMap { scale, offset })
    }

    pub fn identity(n: usize) -> Self {
        AffineMap { scale: vec![1.0; n], offset: vec![0.0; n] }
    }

    pub fn dim(&self) -> usize {
        self.scale.len()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.scale.iter().zip(&self.offset))
            .map(|(v, (s, g))| s * v + g)
            .collect()
    }
}
