//! Sparse real polynomials over canonical phase-space coordinates.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered canonical coordinates `(q₁..q_n, p₁..p_n)`.
///
/// Variable index `i < n` is `q_{i+1}`, index `n + i` is its conjugate momentum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseLayout {
    n_dof: usize,
    names: Vec<String>,
}

impl PhaseLayout {
    pub fn new(n_dof: usize) -> Result<Arc<Self>> {
        let names = (1..=n_dof)
            .map(|i| format!("q{i}"))
            .chain((1..=n_dof).map(|i| format!("p{i}")))
            .collect();
        Self::with_names(n_dof, names)
    }

    /// Custom labels, coordinates first then momenta.
    pub fn with_names(n_dof: usize, names: Vec<String>) -> Result<Arc<Self>> {
        if n_dof == 0 {
            return Err(Error::InvalidLayout("n_dof must be at least 1".into()));
        }
        if names.len() != 2 * n_dof {
            return Err(Error::InvalidLayout(format!(
                "expected {} names, got {}",
                2 * n_dof,
                names.len()
            )));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::InvalidLayout(format!("duplicate name {a}")));
            }
        }
        Ok(Arc::new(Self { n_dof, names }))
    }

    pub fn n_dof(&self) -> usize {
        self.n_dof
    }

    /// Number of phase-space variables, `2 · n_dof`.
    pub fn dim(&self) -> usize {
        2 * self.n_dof
    }

    pub fn q(&self, i: usize) -> usize {
        assert!(i < self.n_dof);
        i
    }

    pub fn p(&self, i: usize) -> usize {
        assert!(i < self.n_dof);
        self.n_dof + i
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

pub type Exponents = Vec<u32>;

/// Polynomial in the phase-space variables of a [`PhaseLayout`].
///
/// Terms map exponent vectors to coefficients; zero coefficients are never stored.
#[derive(Debug, Clone)]
pub struct PolyObservable {
    layout: Arc<PhaseLayout>,
    terms: BTreeMap<Exponents, f64>,
}

impl PartialEq for PolyObservable {
    fn eq(&self, other: &Self) -> bool {
        self.same_layout(other) && self.terms == other.terms
    }
}

impl PolyObservable {
    pub fn zero(layout: &Arc<PhaseLayout>) -> Self {
        Self {
            layout: Arc::clone(layout),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(layout: &Arc<PhaseLayout>, value: f64) -> Self {
        let mut p = Self::zero(layout);
        p.add_term(vec![0; layout.dim()], value);
        p
    }

    /// The coordinate function of variable `idx`.
    pub fn var(layout: &Arc<PhaseLayout>, idx: usize) -> Self {
        assert!(idx < layout.dim(), "variable index out of range");
        let mut e = vec![0; layout.dim()];
        e[idx] = 1;
        Self::monomial(layout, e, 1.0)
    }

    pub fn q(layout: &Arc<PhaseLayout>, i: usize) -> Self {
        Self::var(layout, layout.q(i))
    }

    pub fn p(layout: &Arc<PhaseLayout>, i: usize) -> Self {
        Self::var(layout, layout.p(i))
    }

    pub fn monomial(layout: &Arc<PhaseLayout>, exponents: Exponents, coeff: f64) -> Self {
        assert_eq!(exponents.len(), layout.dim(), "exponent vector length");
        let mut p = Self::zero(layout);
        p.add_term(exponents, coeff);
        p
    }

    pub fn from_terms<I>(layout: &Arc<PhaseLayout>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponents, f64)>,
    {
        let mut p = Self::zero(layout);
        for (e, c) in terms {
            if e.len() != layout.dim() {
                return Err(Error::LayoutMismatch(format!(
                    "exponent vector of length {} for {} variables",
                    e.len(),
                    layout.dim()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn layout(&self) -> &Arc<PhaseLayout> {
        &self.layout
    }

    pub fn same_layout(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.layout, &other.layout) || self.layout == other.layout
    }

    fn check_layout(&self, other: &Self) -> Result<()> {
        if self.same_layout(other) {
            Ok(())
        } else {
            Err(Error::LayoutMismatch(format!(
                "{} vs {} degrees of freedom",
                self.layout.n_dof, other.layout.n_dof
            )))
        }
    }

    fn add_term(&mut self, exponents: Exponents, coeff: f64) {
        if coeff == 0.0 {
            return;
        }
        let entry = self.terms.entry(exponents);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = *o.get() + coeff;
                if sum == 0.0 {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, f64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exponents: &[u32]) -> f64 {
        self.terms.get(exponents).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = Self::zero(&self.layout);
        for (e, &c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_layout(other)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_layout(other)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_layout(other)?;
        let mut out = Self::zero(&self.layout);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    /// Partial derivative with respect to variable `idx`.
    pub fn derivative(&self, idx: usize) -> Self {
        let mut out = Self::zero(&self.layout);
        for (e, &c) in &self.terms {
            let k = e[idx];
            if k > 0 {
                let mut d = e.clone();
                d[idx] -= 1;
                out.add_term(d, c * f64::from(k));
            }
        }
        out
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.layout.dim(), "point dimension");
        self.terms
            .iter()
            .map(|(e, &c)| {
                e.iter()
                    .zip(point)
                    .fold(c, |acc, (&k, &x)| acc * x.powi(k as i32))
            })
            .sum()
    }

    /// `(coefficients, constant)` when the degree is at most one.
    pub fn as_affine(&self) -> Option<(Vec<f64>, f64)> {
        if self.degree() > 1 {
            return None;
        }
        let n = self.layout.dim();
        let mut coeffs = vec![0.0; n];
        let mut constant = 0.0;
        for (e, &c) in &self.terms {
            match e.iter().position(|&k| k == 1) {
                Some(i) => coeffs[i] = c,
                None => constant = c,
            }
        }
        Some((coeffs, constant))
    }

    /// Drop terms whose magnitude falls below `tol`.
    pub fn chop(&self, tol: f64) -> Self {
        let mut out = Self::zero(&self.layout);
        for (e, &c) in &self.terms {
            if c.abs() > tol {
                out.add_term(e.clone(), c);
            }
        }
        out
    }
}

impl fmt::Display for PolyObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.layout.names();
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "·{}", names[i])?,
                    _ => write!(f, "·{}^{}", names[i], p)?,
                }
            }
        }
        Ok(())
    }
}

impl Add for &PolyObservable {
    type Output = PolyObservable;
    fn add(self, rhs: Self) -> PolyObservable {
        self.try_add(rhs).expect("layout mismatch in polynomial addition")
    }
}

impl Sub for &PolyObservable {
    type Output = PolyObservable;
    fn sub(self, rhs: Self) -> PolyObservable {
        self.try_sub(rhs).expect("layout mismatch in polynomial subtraction")
    }
}

impl Mul for &PolyObservable {
    type Output = PolyObservable;
    fn mul(self, rhs: Self) -> PolyObservable {
        self.try_mul(rhs).expect("layout mismatch in polynomial product")
    }
}

impl Mul<f64> for &PolyObservable {
    type Output = PolyObservable;
    fn mul(self, rhs: f64) -> PolyObservable {
        self.scale(rhs)
    }
}

impl Neg for &PolyObservable {
    type Output = PolyObservable;
    fn neg(self) -> PolyObservable {
        self.scale(-1.0)
    }
}

/// Canonical Poisson bracket `Σ_i ∂a/∂q_i ∂b/∂p_i − ∂a/∂p_i ∂b/∂q_i`.
pub fn poisson_bracket(a: &PolyObservable, b: &PolyObservable) -> Result<PolyObservable> {
    a.check_layout(b)?;
    let layout = a.layout();
    let mut out = PolyObservable::zero(layout);
    for i in 0..layout.n_dof() {
        let (qi, pi) = (layout.q(i), layout.p(i));
        let lhs = &a.derivative(qi) * &b.derivative(pi);
        let rhs = &a.derivative(pi) * &b.derivative(qi);
        out = &(&out + &lhs) - &rhs;
    }
    Ok(out)
}
