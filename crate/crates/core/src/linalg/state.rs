use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::{Matrix, SubsystemId};
use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factor {
    pub id: SubsystemId,
    /// Largest occupation kept; the factor has dimension `cap + 1`.
    pub cap: usize,
}

/// Ordered list of tensor factors. The first factor is the most
/// significant digit of the flat basis index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    factors: Vec<Factor>,
}

impl Layout {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        for (i, f) in factors.iter().enumerate() {
            if factors[..i].iter().any(|g| g.id == f.id) {
                return Err(Error::SubsystemCollision(f.id));
            }
        }
        Ok(Layout { factors })
    }

    /// Shorthand for `Layout::new` from `(id, cap)` pairs.
    pub fn of(factors: &[(&'static str, usize)]) -> Result<Self> {
        Layout::new(
            factors
                .iter()
                .map(|&(id, cap)| Factor {
                    id: SubsystemId(id),
                    cap,
                })
                .collect(),
        )
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.cap + 1).product()
    }

    pub fn position(&self, id: SubsystemId) -> Result<usize> {
        self.factors
            .iter()
            .position(|f| f.id == id)
            .ok_or(Error::UnknownSubsystem(id))
    }

    pub fn check(&self, occ: &[usize]) -> Result<()> {
        if occ.len() != self.factors.len() {
            return domain(format!(
                "expected {} occupations, got {}",
                self.factors.len(),
                occ.len()
            ));
        }
        for (n, f) in occ.iter().zip(&self.factors) {
            if *n > f.cap {
                return domain(format!("occupation {n} exceeds cap {} of {}", f.cap, f.id));
            }
        }
        Ok(())
    }

    /// Flat index of an occupation tuple. Occupations are assumed valid.
    pub fn index(&self, occ: &[usize]) -> usize {
        occ.iter()
            .zip(&self.factors)
            .fold(0, |acc, (n, f)| acc * (f.cap + 1) + n)
    }

    pub fn occupations(&self, mut index: usize) -> Vec<usize> {
        let mut occ = vec![0; self.factors.len()];
        for (slot, f) in occ.iter_mut().zip(&self.factors).rev() {
            *slot = index % (f.cap + 1);
            index /= f.cap + 1;
        }
        occ
    }

    pub fn label(&self, index: usize) -> BasisLabel {
        BasisLabel {
            factors: self
                .occupations(index)
                .into_iter()
                .zip(&self.factors)
                .map(|(n, f)| (f.id, n, f.cap))
                .collect(),
        }
    }

    pub fn concat(&self, other: &Layout) -> Result<Layout> {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Layout::new(factors)
    }

    fn select(&self, positions: &[usize]) -> Layout {
        Layout {
            factors: positions.iter().map(|&p| self.factors[p]).collect(),
        }
    }
}

/// One basis ket: `(subsystem, occupation, cap)` per factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisLabel {
    pub factors: Vec<(SubsystemId, usize, usize)>,
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("|")?;
        for (i, (id, n, _)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}_{id}")?;
        }
        f.write_str(">")
    }
}

/// Sparse real ket keyed by occupation tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: Layout,
    amps: BTreeMap<Vec<usize>, f64>,
}

impl StateVector {
    pub fn zero(layout: Layout) -> Self {
        StateVector {
            layout,
            amps: BTreeMap::new(),
        }
    }

    pub fn basis(layout: Layout, occ: &[usize]) -> Result<Self> {
        let mut s = StateVector::zero(layout);
        s.add(occ, 1.0)?;
        Ok(s)
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    /// Adds `amp` to the coefficient of `occ`.
    pub fn add(&mut self, occ: &[usize], amp: f64) -> Result<()> {
        self.layout.check(occ)?;
        *self.amps.entry(occ.to_vec()).or_insert(0.0) += amp;
        Ok(())
    }

    pub fn amplitude(&self, occ: &[usize]) -> f64 {
        self.amps.get(occ).copied().unwrap_or(0.0)
    }

    /// Nonzero-or-touched entries in lexicographic occupation order.
    pub fn iter(&self) -> impl Iterator<Item = (&[usize], f64)> {
        self.amps.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a * a).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&mut self, factor: f64) {
        for a in self.amps.values_mut() {
            *a *= factor;
        }
    }

    /// `self + factor·other`; layouts must match.
    pub fn add_scaled(&mut self, other: &StateVector, factor: f64) -> Result<()> {
        if self.layout != other.layout {
            return domain("cannot add states with different layouts");
        }
        for (k, v) in &other.amps {
            *self.amps.entry(k.clone()).or_insert(0.0) += factor * v;
        }
        Ok(())
    }

    pub fn inner(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .map(|(k, v)| v * other.amplitude(k))
            .sum()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.dim()];
        for (k, a) in &self.amps {
            v[self.layout.index(k)] += a;
        }
        v
    }

    /// Applies `f(occupations) -> (new occupations, sign)` to every
    /// basis ket, moving it into `layout`.
    pub fn relabel<F>(&self, layout: Layout, f: F) -> Result<StateVector>
    where
        F: Fn(&[usize]) -> (Vec<usize>, f64),
    {
        let mut out = StateVector::zero(layout);
        for (k, v) in &self.amps {
            let (occ, sign) = f(k);
            out.add(&occ, sign * v)?;
        }
        Ok(out)
    }

    /// `Tr_{not keep} |ψ⟩⟨ψ|`, computed from the amplitudes without
    /// forming the full density matrix.
    pub fn reduced_density(&self, keep: &[SubsystemId]) -> Result<DensityMatrix> {
        let (kept, traced) = split_positions(&self.layout, keep)?;
        let kept_layout = self.layout.select(&kept);
        let traced_layout = self.layout.select(&traced);
        let mut groups: HashMap<usize, Vec<(usize, f64)>> = HashMap::new();
        for (occ, &amp) in &self.amps {
            if amp == 0.0 {
                continue;
            }
            let k: Vec<usize> = kept.iter().map(|&p| occ[p]).collect();
            let t: Vec<usize> = traced.iter().map(|&p| occ[p]).collect();
            groups
                .entry(traced_layout.index(&t))
                .or_default()
                .push((kept_layout.index(&k), amp));
        }
        let mut m = Matrix::zeros(kept_layout.dim());
        let mut keys: Vec<usize> = groups.keys().copied().collect();
        keys.sort_unstable();
        for key in keys {
            let g = &groups[&key];
            for &(i, a) in g {
                for &(j, b) in g {
                    m[(i, j)] += a * b;
                }
            }
        }
        Ok(DensityMatrix {
            layout: kept_layout,
            m,
        })
    }
}

/// Kronecker product; labels concatenate in argument order.
pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let layout = a.layout.concat(&b.layout)?;
    let mut out = StateVector::zero(layout);
    for (ka, va) in &a.amps {
        for (kb, vb) in &b.amps {
            let mut occ = ka.clone();
            occ.extend_from_slice(kb);
            out.amps.insert(occ, va * vb);
        }
    }
    Ok(out)
}

/// Dense real symmetric operator on a labeled basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    layout: Layout,
    m: Matrix,
}

impl DensityMatrix {
    pub fn new(layout: Layout, m: Matrix) -> Result<Self> {
        if layout.dim() != m.dim() {
            return domain(format!(
                "layout dimension {} does not match matrix dimension {}",
                layout.dim(),
                m.dim()
            ));
        }
        Ok(DensityMatrix { layout, m })
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    pub fn basis(&self) -> Vec<BasisLabel> {
        (0..self.dim()).map(|i| self.layout.label(i)).collect()
    }

    /// `⟨row|ρ|col⟩` by occupation tuples.
    pub fn entry(&self, row: &[usize], col: &[usize]) -> f64 {
        self.m[(self.layout.index(row), self.layout.index(col))]
    }
}

/// `|ψ⟩⟨ψ|`, not renormalised.
pub fn density_from_state(psi: &StateVector) -> Result<DensityMatrix> {
    if psi.norm_sqr() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let v = psi.to_dense();
    let n = v.len();
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        if v[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            m[(i, j)] = v[i] * v[j];
        }
    }
    DensityMatrix::new(psi.layout.clone(), m)
}

fn split_positions(layout: &Layout, keep: &[SubsystemId]) -> Result<(Vec<usize>, Vec<usize>)> {
    if keep.is_empty() {
        return domain("partial trace must keep at least one subsystem");
    }
    for &id in keep {
        layout.position(id)?;
    }
    let (kept, traced): (Vec<usize>, Vec<usize>) =
        (0..layout.factors().len()).partition(|&p| keep.contains(&layout.factors()[p].id));
    Ok((kept, traced))
}

/// Trace over every factor not in `keep`. Kept factors stay in their
/// original order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[SubsystemId]) -> Result<DensityMatrix> {
    let (kept, traced) = split_positions(&rho.layout, keep)?;
    let kept_layout = rho.layout.select(&kept);
    let traced_layout = rho.layout.select(&traced);
    let n = rho.dim();
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); traced_layout.dim()];
    for i in 0..n {
        let occ = rho.layout.occupations(i);
        let k: Vec<usize> = kept.iter().map(|&p| occ[p]).collect();
        let t: Vec<usize> = traced.iter().map(|&p| occ[p]).collect();
        groups[traced_layout.index(&t)].push((i, kept_layout.index(&k)));
    }
    let mut m = Matrix::zeros(kept_layout.dim());
    for g in &groups {
        for &(i, ki) in g {
            for &(j, kj) in g {
                m[(ki, kj)] += rho.m[(i, j)];
            }
        }
    }
    DensityMatrix::new(kept_layout, m)
}

/// Transposes the indices of one factor.
pub fn partial_transpose(rho: &DensityMatrix, over: SubsystemId) -> Result<DensityMatrix> {
    let pos = rho.layout.position(over)?;
    let n = rho.dim();
    let occs: Vec<Vec<usize>> = (0..n).map(|i| rho.layout.occupations(i)).collect();
    let mut m = Matrix::zeros(n);
    let mut a = vec![0; occs.first().map_or(0, Vec::len)];
    let mut b = a.clone();
    for i in 0..n {
        for j in 0..n {
            let v = rho.m[(i, j)];
            if v == 0.0 {
                continue;
            }
            a.copy_from_slice(&occs[i]);
            b.copy_from_slice(&occs[j]);
            std::mem::swap(&mut a[pos], &mut b[pos]);
            m[(rho.layout.index(&a), rho.layout.index(&b))] = v;
        }
    }
    DensityMatrix::new(rho.layout.clone(), m)
}
