//! Symmetric sequences and twisted bilinear operations.
//!
//! An `SModule` stores, per degree m, an ordered basis and the matrices of
//! the adjacent transpositions of `S_m`. The Coxeter relations are verified
//! at construction, so an arbitrary permutation can act through any adjacent
//! factorization. On top of this sit the induced tensor product of two
//! S-modules, the braiding, equivariant bilinear operations with their axiom
//! checkers (commutative, Lie, Poisson-Leibniz, pre-Lie), and the suspension
//! `Σg[t]` whose bracket turns a bilinear product on a plain module into a
//! degree-graded bracket. Degrees above the stored maximum are zero by
//! convention; operations that would land there report `CapExceeded`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::perm::{block_perm, Perm};
use crate::prelie::{PreLie, TablePreLie};
use crate::ring::{RingSpec, Scalar};
use crate::Result;

type Matrix = Vec<Vec<Scalar>>;

pub(crate) fn zero_vec(ring: &RingSpec, n: usize) -> Vec<Scalar> {
    vec![Scalar::zero(ring); n]
}

pub(crate) fn unit_vec(ring: &RingSpec, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = zero_vec(ring, n);
    v[i] = Scalar::one(ring);
    v
}

fn zero_matrix(ring: &RingSpec, rows: usize, cols: usize) -> Matrix {
    vec![vec![Scalar::zero(ring); cols]; rows]
}

fn identity_matrix(ring: &RingSpec, n: usize) -> Matrix {
    let mut m = zero_matrix(ring, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Scalar::one(ring);
    }
    m
}

fn mat_mul(a: &Matrix, b: &Matrix, ring: &RingSpec) -> Result<Matrix> {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    let mut out = zero_matrix(ring, rows, cols);
    for i in 0..rows {
        if a[i].len() != inner {
            return Err(Error::DimensionMismatch { expected: inner, got: a[i].len() });
        }
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j])?)?;
            }
        }
    }
    Ok(out)
}

fn mat_vec(m: &Matrix, v: &[Scalar], ring: &RingSpec) -> Result<Vec<Scalar>> {
    let mut out = zero_vec(ring, m.len());
    for (i, row) in m.iter().enumerate() {
        if row.len() != v.len() {
            return Err(Error::DimensionMismatch { expected: row.len(), got: v.len() });
        }
        for (a, b) in row.iter().zip(v) {
            if !a.is_zero() && !b.is_zero() {
                out[i] = out[i].add(&a.mul(b)?)?;
            }
        }
    }
    Ok(out)
}

fn vec_add(a: &[Scalar], b: &[Scalar]) -> Result<Vec<Scalar>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
    }
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Result<Vec<Scalar>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
    }
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

fn vec_is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// A finitely supported symmetric sequence: per degree, a based free module
/// with an `S_m` action given by adjacent-transposition matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct SModule {
    ring: RingSpec,
    degrees: Vec<DegreeComponent>,
}

#[derive(Debug, Clone, PartialEq)]
struct DegreeComponent {
    basis: Vec<String>,
    transpositions: Vec<Matrix>,
}

impl SModule {
    /// `degrees[m]` holds the ordered basis of degree m and the matrices of
    /// the adjacent transpositions `s_0, …, s_{m-2}`. Degrees with an empty
    /// basis may pass an empty matrix list.
    pub fn new(ring: &RingSpec, degrees: Vec<(Vec<String>, Vec<Matrix>)>) -> Result<Self> {
        let mut components = Vec::with_capacity(degrees.len());
        for (m, (basis, transpositions)) in degrees.into_iter().enumerate() {
            let dim = basis.len();
            if dim == 0 {
                components.push(DegreeComponent { basis, transpositions: Vec::new() });
                continue;
            }
            let wanted = m.saturating_sub(1);
            if transpositions.len() != wanted {
                return Err(Error::NotAnSModule(format!(
                    "degree {m} needs {wanted} transposition matrices, got {}",
                    transpositions.len()
                )));
            }
            for (i, mat) in transpositions.iter().enumerate() {
                if mat.len() != dim || mat.iter().any(|row| row.len() != dim) {
                    return Err(Error::NotAnSModule(format!(
                        "degree {m} transposition {i} is not a {dim}x{dim} matrix"
                    )));
                }
                for row in mat {
                    for s in row {
                        if s.ring() != ring {
                            return Err(Error::RingMismatch(
                                format!("{ring}"),
                                format!("{}", s.ring()),
                            ));
                        }
                    }
                }
            }
            let id = identity_matrix(ring, dim);
            for (i, mat) in transpositions.iter().enumerate() {
                if mat_mul(mat, mat, ring)? != id {
                    return Err(Error::NotAnSModule(format!(
                        "degree {m}: transposition {i} does not square to the identity"
                    )));
                }
            }
            for i in 0..transpositions.len().saturating_sub(1) {
                let a = &transpositions[i];
                let b = &transpositions[i + 1];
                let aba = mat_mul(&mat_mul(a, b, ring)?, a, ring)?;
                let bab = mat_mul(&mat_mul(b, a, ring)?, b, ring)?;
                if aba != bab {
                    return Err(Error::NotAnSModule(format!(
                        "degree {m}: braid relation fails between transpositions {i} and {}",
                        i + 1
                    )));
                }
            }
            for i in 0..transpositions.len() {
                for j in (i + 2)..transpositions.len() {
                    let ij = mat_mul(&transpositions[i], &transpositions[j], ring)?;
                    let ji = mat_mul(&transpositions[j], &transpositions[i], ring)?;
                    if ij != ji {
                        return Err(Error::NotAnSModule(format!(
                            "degree {m}: transpositions {i} and {j} do not commute"
                        )));
                    }
                }
            }
            components.push(DegreeComponent { basis, transpositions });
        }
        Ok(SModule { ring: ring.clone(), degrees: components })
    }

    /// One basis element in a single degree, with the trivial action.
    pub fn concentrated(ring: &RingSpec, degree: usize, names: &[&str]) -> Result<Self> {
        let mut degrees = vec![(Vec::new(), Vec::new()); degree + 1];
        let dim = names.len();
        degrees[degree] = (
            names.iter().map(|s| s.to_string()).collect(),
            vec![identity_matrix(ring, dim); degree.saturating_sub(1)],
        );
        SModule::new(ring, degrees)
    }

    /// The monoidal unit: the ring in degree zero.
    pub fn unit(ring: &RingSpec) -> Result<Self> {
        SModule::concentrated(ring, 0, &["1"])
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.len().saturating_sub(1)
    }

    pub fn dim(&self, m: usize) -> usize {
        self.degrees.get(m).map_or(0, |c| c.basis.len())
    }

    pub fn basis(&self, m: usize) -> &[String] {
        self.degrees.get(m).map_or(&[], |c| c.basis.as_slice())
    }

    /// Apply the adjacent transposition `s_i` of `S_m` to a degree-m vector.
    pub fn act_transposition(&self, m: usize, i: usize, v: &[Scalar]) -> Result<Vec<Scalar>> {
        let dim = self.dim(m);
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
        }
        if i + 1 >= m {
            return Err(Error::SizeMismatch(format!(
                "transposition {i} out of range for degree {m}"
            )));
        }
        if dim == 0 {
            return Ok(Vec::new());
        }
        mat_vec(&self.degrees[m].transpositions[i], v, &self.ring)
    }

    /// Apply an arbitrary permutation of `S_m` through an adjacent
    /// factorization.
    pub fn act_perm(&self, m: usize, sigma: &Perm, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if sigma.degree() != m {
            return Err(Error::SizeMismatch(format!(
                "permutation of degree {} applied in module degree {m}",
                sigma.degree()
            )));
        }
        let dim = self.dim(m);
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
        }
        let mut out = v.to_vec();
        for i in sigma.adjacent_word() {
            out = self.act_transposition(m, i, &out)?;
        }
        Ok(out)
    }

    pub fn format_vector(&self, m: usize, v: &[Scalar]) -> String {
        let mut out = String::new();
        for (i, s) in v.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            if !out.is_empty() {
                out.push_str(" + ");
            }
            let _ = write!(out, "{s}·{}", self.basis(m)[i]);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let repr = SModuleJson {
            ring: self.ring.clone(),
            degrees: self
                .degrees
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.basis.is_empty())
                .map(|(m, c)| SModuleDegreeJson {
                    m,
                    basis: c.basis.clone(),
                    transpositions: c
                        .transpositions
                        .iter()
                        .map(|mat| {
                            mat.iter()
                                .map(|row| row.iter().map(|s| s.to_string()).collect())
                                .collect()
                        })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&repr).expect("serialization cannot fail")
    }

    /// The same module with empty degrees appended up to `max_degree`, so
    /// that operations landing above the stored range become zero instead of
    /// out of range.
    pub fn padded(&self, max_degree: usize) -> SModule {
        let mut out = self.clone();
        while out.degrees.len() <= max_degree {
            out.degrees.push(DegreeComponent { basis: Vec::new(), transpositions: Vec::new() });
        }
        out
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let repr: SModuleJson =
            serde_json::from_str(src).map_err(|e| Error::Invalid(format!("bad S-module JSON: {e}")))?;
        repr.ring.validate()?;
        let max = repr.degrees.iter().map(|d| d.m).max().unwrap_or(0);
        let mut degrees = vec![(Vec::new(), Vec::new()); max + 1];
        for d in repr.degrees {
            let mats = d
                .transpositions
                .iter()
                .map(|mat| {
                    mat.iter()
                        .map(|row| row.iter().map(|s| Scalar::parse(&repr.ring, s)).collect())
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            degrees[d.m] = (d.basis, mats);
        }
        SModule::new(&repr.ring, degrees)
    }
}

#[derive(Serialize, Deserialize)]
struct SModuleJson {
    ring: RingSpec,
    degrees: Vec<SModuleDegreeJson>,
}

#[derive(Serialize, Deserialize)]
struct SModuleDegreeJson {
    m: usize,
    basis: Vec<String>,
    transpositions: Vec<Vec<Vec<String>>>,
}

/// Basis of degree p of `g ⊗ h` as tuples `(m, I, bg, bh)`: the g-factor has
/// degree m and occupies the letter positions `I`, listed with I-subsets in
/// lexicographic order.
pub fn tensor_basis(g: &SModule, h: &SModule, p: usize) -> Vec<(usize, Vec<usize>, usize, usize)> {
    let mut out = Vec::new();
    for m in 0..=p {
        let n = p - m;
        if g.dim(m) == 0 || h.dim(n) == 0 {
            continue;
        }
        for subset in subsets_of_size(p, m) {
            for bg in 0..g.dim(m) {
                for bh in 0..h.dim(n) {
                    out.push((m, subset.clone(), bg, bh));
                }
            }
        }
    }
    out
}

fn subsets_of_size(p: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, p: usize, left: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(current.clone());
            return;
        }
        for i in start..=(p - left) {
            current.push(i);
            rec(i + 1, p, left - 1, current, out);
            current.pop();
        }
    }
    rec(0, p, m, &mut current, &mut out);
    out
}

fn tensor_name(bg: &str, bh: &str, subset: &[usize]) -> String {
    let inner: Vec<String> = subset.iter().map(|i| i.to_string()).collect();
    format!("{bg}⊗{bh}@[{}]", inner.join(","))
}

/// The induced tensor product of two S-modules, with basis indexed by shuffle
/// coset representatives.
pub fn smod_tensor(g: &SModule, h: &SModule) -> Result<SModule> {
    if g.ring() != h.ring() {
        return Err(Error::RingMismatch(format!("{}", g.ring()), format!("{}", h.ring())));
    }
    let ring = g.ring();
    let max = g.max_degree() + h.max_degree();
    let mut degrees = Vec::with_capacity(max + 1);
    for p in 0..=max {
        let basis_tuples = tensor_basis(g, h, p);
        let dim = basis_tuples.len();
        let names = basis_tuples
            .iter()
            .map(|(m, subset, bg, bh)| tensor_name(&g.basis(*m)[*bg], &h.basis(p - m)[*bh], subset))
            .collect();
        let index: BTreeMap<&(usize, Vec<usize>, usize, usize), usize> =
            basis_tuples.iter().zip(0..).collect();
        let mut transpositions = Vec::new();
        for i in 0..p.saturating_sub(1) {
            let mut mat = zero_matrix(ring, dim, dim);
            for (col, (m, subset, bg, bh)) in basis_tuples.iter().enumerate() {
                let n = p - m;
                let in_i = subset.binary_search(&i).is_ok();
                let in_i1 = subset.binary_search(&(i + 1)).is_ok();
                if in_i && in_i1 {
                    let r = subset.binary_search(&i).unwrap();
                    let inner = &g.degrees[*m].transpositions[r];
                    for k in 0..g.dim(*m) {
                        if inner[k][*bg].is_zero() {
                            continue;
                        }
                        let row = index[&(*m, subset.clone(), k, *bh)];
                        mat[row][col] = mat[row][col].add(&inner[k][*bg])?;
                    }
                } else if !in_i && !in_i1 {
                    let complement: Vec<usize> =
                        (0..p).filter(|a| subset.binary_search(a).is_err()).collect();
                    let r = complement.binary_search(&i).unwrap();
                    let inner = &h.degrees[n].transpositions[r];
                    for k in 0..h.dim(n) {
                        if inner[k][*bh].is_zero() {
                            continue;
                        }
                        let row = index[&(*m, subset.clone(), *bg, k)];
                        mat[row][col] = mat[row][col].add(&inner[k][*bh])?;
                    }
                } else {
                    let mut moved: Vec<usize> = subset
                        .iter()
                        .map(|&a| {
                            if a == i {
                                i + 1
                            } else if a == i + 1 {
                                i
                            } else {
                                a
                            }
                        })
                        .collect();
                    moved.sort_unstable();
                    let row = index[&(*m, moved, *bg, *bh)];
                    mat[row][col] = mat[row][col].add(&Scalar::one(ring))?;
                }
            }
            transpositions.push(mat);
        }
        degrees.push((names, transpositions));
    }
    SModule::new(ring, degrees)
}

/// The braiding `g ⊗ h → h ⊗ g` in degree p, sending a block-ordered pair to
/// the block swap of the opposite pair.
pub fn beta_apply(g: &SModule, h: &SModule, p: usize, v: &[Scalar]) -> Result<Vec<Scalar>> {
    let gh_basis = tensor_basis(g, h, p);
    if v.len() != gh_basis.len() {
        return Err(Error::DimensionMismatch { expected: gh_basis.len(), got: v.len() });
    }
    let hg = smod_tensor(h, g)?;
    let hg_basis = tensor_basis(h, g, p);
    let index: BTreeMap<&(usize, Vec<usize>, usize, usize), usize> =
        hg_basis.iter().zip(0..).collect();
    let ring = g.ring();
    let mut out = zero_vec(ring, hg_basis.len());
    for (col, coeff) in v.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let (m, subset, bg, bh) = &gh_basis[col];
        let n = p - m;
        // The raw opposite pair puts the h-letters first; compose the shuffle
        // that placed the g-letters on `subset` with the two-block swap.
        let complement: Vec<usize> = (0..p).filter(|a| subset.binary_search(a).is_err()).collect();
        let mut w_images = Vec::with_capacity(p);
        w_images.extend(subset.iter().copied());
        w_images.extend(complement.iter().copied());
        let w = Perm::new(w_images)?;
        let pi = w.compose(&block_perm(&[1, 0], &[n, *m])?)?;
        let raw_subset: Vec<usize> = (0..n).collect();
        let raw = index[&(n, raw_subset, *bh, *bg)];
        let image = hg.act_perm(p, &pi, &unit_vec(ring, hg_basis.len(), raw))?;
        for (i, s) in image.iter().enumerate() {
            if !s.is_zero() {
                out[i] = out[i].add(&coeff.mul(s)?)?;
            }
        }
    }
    Ok(out)
}

/// A bilinear operation `left_m ⊗ right_n → target_{m+n}` whose component
/// maps are `S_m × S_n`-equivariant; this is the componentwise form of a
/// morphism out of the induced tensor product.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedBilinearOp {
    left: SModule,
    right: SModule,
    target: SModule,
    components: BTreeMap<(usize, usize), Matrix>,
}

impl TwistedBilinearOp {
    /// Component matrices have `dim target_{m+n}` rows and
    /// `dim left_m · dim right_n` columns, the column index pairing left and
    /// right basis indices row-major. Missing components are zero.
    pub fn new(
        left: SModule,
        right: SModule,
        target: SModule,
        components: BTreeMap<(usize, usize), Matrix>,
    ) -> Result<Self> {
        let ring = target.ring().clone();
        if left.ring() != &ring || right.ring() != &ring {
            return Err(Error::RingMismatch(format!("{}", left.ring()), format!("{ring}")));
        }
        for (&(m, n), mat) in &components {
            if m + n > target.max_degree() {
                return Err(Error::CapExceeded { got: m + n, cap: target.max_degree() });
            }
            let rows = target.dim(m + n);
            let cols = left.dim(m) * right.dim(n);
            if mat.len() != rows || mat.iter().any(|r| r.len() != cols) {
                return Err(Error::DimensionMismatch { expected: rows * cols, got: mat.len() });
            }
        }
        let op = TwistedBilinearOp { left, right, target, components };
        if let Some(witness) = op.equivariance_failure()? {
            return Err(Error::NotEquivariant(witness));
        }
        Ok(op)
    }

    fn equivariance_failure(&self) -> Result<Option<String>> {
        for (&(m, n), _) in &self.components {
            for bl in 0..self.left.dim(m) {
                for br in 0..self.right.dim(n) {
                    let x = unit_vec(self.left.ring(), self.left.dim(m), bl);
                    let y = unit_vec(self.right.ring(), self.right.dim(n), br);
                    let base = self.apply(m, n, &x, &y)?;
                    for i in 0..m.saturating_sub(1) {
                        let xs = self.left.act_transposition(m, i, &x)?;
                        let lhs = self.apply(m, n, &xs, &y)?;
                        let rhs = self.target.act_transposition(m + n, i, &base)?;
                        if lhs != rhs {
                            return Ok(Some(format!(
                                "component ({m},{n}), left transposition {i}, basis ({}, {})",
                                self.left.basis(m)[bl],
                                self.right.basis(n)[br]
                            )));
                        }
                    }
                    for j in 0..n.saturating_sub(1) {
                        let ys = self.right.act_transposition(n, j, &y)?;
                        let lhs = self.apply(m, n, &x, &ys)?;
                        let rhs = self.target.act_transposition(m + n, m + j, &base)?;
                        if lhs != rhs {
                            return Ok(Some(format!(
                                "component ({m},{n}), right transposition {j}, basis ({}, {})",
                                self.left.basis(m)[bl],
                                self.right.basis(n)[br]
                            )));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn left(&self) -> &SModule {
        &self.left
    }

    pub fn right(&self) -> &SModule {
        &self.right
    }

    pub fn target(&self) -> &SModule {
        &self.target
    }

    pub fn apply(&self, m: usize, n: usize, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
        if m + n > self.target.max_degree() {
            return Err(Error::CapExceeded { got: m + n, cap: self.target.max_degree() });
        }
        if x.len() != self.left.dim(m) {
            return Err(Error::DimensionMismatch { expected: self.left.dim(m), got: x.len() });
        }
        if y.len() != self.right.dim(n) {
            return Err(Error::DimensionMismatch { expected: self.right.dim(n), got: y.len() });
        }
        let ring = self.target.ring();
        let rows = self.target.dim(m + n);
        let Some(mat) = self.components.get(&(m, n)) else {
            return Ok(zero_vec(ring, rows));
        };
        let cols = x.len() * y.len();
        let mut paired = zero_vec(ring, cols);
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if !b.is_zero() {
                    paired[i * y.len() + j] = a.mul(b)?;
                }
            }
        }
        mat_vec(mat, &paired, ring)
    }
}

/// Which twisted identity to evaluate. The Leibniz rule relates a bracket to
/// a multiplication, so that variant carries the product it is checked
/// against.
#[derive(Debug, Clone, Copy)]
pub enum TwistedAxiom<'a> {
    Comm,
    Lie,
    Leibniz { mult: &'a TwistedBilinearOp },
    PreLie,
}

fn endo_module(op: &TwistedBilinearOp) -> Result<&SModule> {
    if op.left != op.right || op.left != op.target {
        return Err(Error::Invalid(
            "twisted axiom checks need an operation from a module to itself".to_string(),
        ));
    }
    Ok(&op.left)
}

/// Evaluate the selected identity on all homogeneous basis tuples that fit
/// inside the stored degrees; `None` means it holds, otherwise the first
/// violating tuple is described.
pub fn check_twisted_axiom(
    op: &TwistedBilinearOp,
    which: TwistedAxiom<'_>,
) -> Result<Option<String>> {
    let module = endo_module(op)?;
    match which {
        TwistedAxiom::Comm => check_pairs(op, module, false),
        TwistedAxiom::Lie => {
            if let Some(w) = check_pairs(op, module, true)? {
                return Ok(Some(w));
            }
            check_jacobi_triples(op, module)
        }
        TwistedAxiom::PreLie => check_prelie_triples(op, module),
        TwistedAxiom::Leibniz { mult } => {
            let mmod = endo_module(mult)?;
            if mmod != module {
                return Err(Error::Invalid(
                    "Leibniz check needs the bracket and product on the same module".to_string(),
                ));
            }
            check_leibniz_triples(op, mult, module)
        }
    }
}

fn degree_range(module: &SModule) -> Vec<usize> {
    (0..=module.max_degree()).filter(|&m| module.dim(m) > 0).collect()
}

fn check_pairs(op: &TwistedBilinearOp, module: &SModule, signed: bool) -> Result<Option<String>> {
    let ring = module.ring();
    let max = module.max_degree();
    let name = if signed { "antisymmetry" } else { "commutativity" };
    for &m in &degree_range(module) {
        for &n in &degree_range(module) {
            if m + n > max {
                continue;
            }
            for a in 0..module.dim(m) {
                for b in 0..module.dim(n) {
                    let x = unit_vec(ring, module.dim(m), a);
                    let y = unit_vec(ring, module.dim(n), b);
                    let lhs = op.apply(m, n, &x, &y)?;
                    let raw = op.apply(n, m, &y, &x)?;
                    let mut swapped = module.act_perm(m + n, &block_perm(&[1, 0], &[n, m])?, &raw)?;
                    if signed {
                        swapped = swapped.iter().map(Scalar::neg).collect();
                    }
                    if lhs != swapped {
                        return Ok(Some(format!(
                            "{name} fails at degrees ({m},{n}), basis ({}, {})",
                            module.basis(m)[a],
                            module.basis(n)[b]
                        )));
                    }
                }
            }
        }
    }
    Ok(None)
}

fn check_jacobi_triples(op: &TwistedBilinearOp, module: &SModule) -> Result<Option<String>> {
    let ring = module.ring();
    let max = module.max_degree();
    for &m in &degree_range(module) {
        for &n in &degree_range(module) {
            for &k in &degree_range(module) {
                if m + n + k > max {
                    continue;
                }
                for a in 0..module.dim(m) {
                    for b in 0..module.dim(n) {
                        for c in 0..module.dim(k) {
                            let x = unit_vec(ring, module.dim(m), a);
                            let y = unit_vec(ring, module.dim(n), b);
                            let z = unit_vec(ring, module.dim(k), c);
                            let t1 = op.apply(m, n + k, &x, &op.apply(n, k, &y, &z)?)?;
                            let t2 = module.act_perm(
                                m + n + k,
                                &block_perm(&[1, 2, 0], &[n, k, m])?,
                                &op.apply(n, k + m, &y, &op.apply(k, m, &z, &x)?)?,
                            )?;
                            let t3 = module.act_perm(
                                m + n + k,
                                &block_perm(&[2, 0, 1], &[k, m, n])?,
                                &op.apply(k, m + n, &z, &op.apply(m, n, &x, &y)?)?,
                            )?;
                            let sum = vec_add(&vec_add(&t1, &t2)?, &t3)?;
                            if !vec_is_zero(&sum) {
                                return Ok(Some(format!(
                                    "Jacobi fails at degrees ({m},{n},{k}), basis ({}, {}, {})",
                                    module.basis(m)[a],
                                    module.basis(n)[b],
                                    module.basis(k)[c]
                                )));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

fn check_prelie_triples(op: &TwistedBilinearOp, module: &SModule) -> Result<Option<String>> {
    let ring = module.ring();
    let max = module.max_degree();
    for &m in &degree_range(module) {
        for &n in &degree_range(module) {
            for &k in &degree_range(module) {
                if m + n + k > max {
                    continue;
                }
                for a in 0..module.dim(m) {
                    for b in 0..module.dim(n) {
                        for c in 0..module.dim(k) {
                            let x = unit_vec(ring, module.dim(m), a);
                            let y = unit_vec(ring, module.dim(n), b);
                            let z = unit_vec(ring, module.dim(k), c);
                            let lhs = vec_sub(
                                &op.apply(m + n, k, &op.apply(m, n, &x, &y)?, &z)?,
                                &op.apply(m, n + k, &x, &op.apply(n, k, &y, &z)?)?,
                            )?;
                            let raw = vec_sub(
                                &op.apply(m + k, n, &op.apply(m, k, &x, &z)?, &y)?,
                                &op.apply(m, k + n, &x, &op.apply(k, n, &z, &y)?)?,
                            )?;
                            let rhs = module.act_perm(
                                m + n + k,
                                &block_perm(&[0, 2, 1], &[m, k, n])?,
                                &raw,
                            )?;
                            if lhs != rhs {
                                return Ok(Some(format!(
                                    "pre-Lie symmetry fails at degrees ({m},{n},{k}), basis ({}, {}, {})",
                                    module.basis(m)[a],
                                    module.basis(n)[b],
                                    module.basis(k)[c]
                                )));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

fn check_leibniz_triples(
    bracket: &TwistedBilinearOp,
    mult: &TwistedBilinearOp,
    module: &SModule,
) -> Result<Option<String>> {
    let ring = module.ring();
    let max = module.max_degree();
    for &m in &degree_range(module) {
        for &n in &degree_range(module) {
            for &k in &degree_range(module) {
                if m + n + k > max {
                    continue;
                }
                for a in 0..module.dim(m) {
                    for b in 0..module.dim(n) {
                        for c in 0..module.dim(k) {
                            let x = unit_vec(ring, module.dim(m), a);
                            let y = unit_vec(ring, module.dim(n), b);
                            let z = unit_vec(ring, module.dim(k), c);
                            let lhs =
                                bracket.apply(m + n, k, &mult.apply(m, n, &x, &y)?, &z)?;
                            let r1 = mult.apply(m, n + k, &x, &bracket.apply(n, k, &y, &z)?)?;
                            let r2 = module.act_perm(
                                m + n + k,
                                &block_perm(&[1, 0, 2], &[n, m, k])?,
                                &mult.apply(n, m + k, &y, &bracket.apply(m, k, &x, &z)?)?,
                            )?;
                            if lhs != vec_add(&r1, &r2)? {
                                return Ok(Some(format!(
                                    "Leibniz fails at degrees ({m},{n},{k}), basis ({}, {}, {})",
                                    module.basis(m)[a],
                                    module.basis(n)[b],
                                    module.basis(k)[c]
                                )));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

fn suspension_name(a: usize, gen: &str, b: usize) -> String {
    let mut parts = Vec::new();
    let tpow = |k: usize| match k {
        1 => "t".to_string(),
        k => format!("t^{k}"),
    };
    if a > 0 {
        parts.push(tpow(a));
    }
    parts.push(gen.to_string());
    if b > 0 {
        parts.push(tpow(b));
    }
    parts.join("·")
}

/// The underlying module of the suspension `Σg[t]` truncated at t-degree
/// `t_cap`: degree m has basis `t^a x t^b` with `a+b = m−1`, ordered by a and
/// then by generator, and the `S_m` action permutes the slot of the generator
/// letter.
pub fn suspension_module(alg: &TablePreLie, t_cap: usize) -> Result<SModule> {
    let ring = alg.ring();
    let d = alg.dim();
    let max = t_cap + 1;
    let mut degrees = vec![(Vec::new(), Vec::new())];
    for m in 1..=max {
        let dim = m * d;
        let mut names = Vec::with_capacity(dim);
        for a in 0..m {
            for g in alg.names() {
                names.push(suspension_name(a, g, m - 1 - a));
            }
        }
        let mut transpositions = Vec::new();
        for i in 0..m - 1 {
            let mut mat = zero_matrix(ring, dim, dim);
            for a in 0..m {
                let a2 = if a == i {
                    i + 1
                } else if a == i + 1 {
                    i
                } else {
                    a
                };
                for g in 0..d {
                    mat[a2 * d + g][a * d + g] = Scalar::one(ring);
                }
            }
            transpositions.push(mat);
        }
        degrees.push((names, transpositions));
    }
    SModule::new(ring, degrees)
}

/// The product `(t^a x t^b) ∘ (t^c y t^d) = t^a (x∘y) t^{b+c+d+1}` on the
/// suspension, which is twisted pre-Lie exactly when the table is pre-Lie.
pub fn suspend_circ(alg: &TablePreLie, t_cap: usize) -> Result<TwistedBilinearOp> {
    let ring = alg.ring();
    let d = alg.dim();
    let max = t_cap + 1;
    let module = suspension_module(alg, t_cap)?;
    let mut components = BTreeMap::new();
    for m in 1..=max {
        for n in 1..=max {
            if m + n > max {
                continue;
            }
            let mut mat = zero_matrix(ring, (m + n) * d, (m * d) * (n * d));
            for a in 0..m {
                for i in 0..d {
                    for c in 0..n {
                        for j in 0..d {
                            let col = (a * d + i) * (n * d) + (c * d + j);
                            for (k, s) in alg.key_product(&i, &j)?.terms() {
                                let row = a * d + k;
                                mat[row][col] = mat[row][col].add(s)?;
                            }
                        }
                    }
                }
            }
            components.insert((m, n), mat);
        }
    }
    TwistedBilinearOp::new(module.clone(), module.clone(), module, components)
}

/// The suspension bracket `{t^a x t^b, t^c y t^d} = t^a (x∘y) t^{b+c+d+1} −
/// t^{a+b+c+1} (y∘x) t^d` induced by the table product; a twisted Lie bracket
/// exactly when the table is pre-Lie.
pub fn suspend_bracket(alg: &TablePreLie, t_cap: usize) -> Result<TwistedBilinearOp> {
    let ring = alg.ring();
    let d = alg.dim();
    let max = t_cap + 1;
    let module = suspension_module(alg, t_cap)?;
    let mut components = BTreeMap::new();
    for m in 1..=max {
        for n in 1..=max {
            if m + n > max {
                continue;
            }
            let rows = (m + n) * d;
            let cols = (m * d) * (n * d);
            let mut mat = zero_matrix(ring, rows, cols);
            for a in 0..m {
                let b = m - 1 - a;
                for i in 0..d {
                    for c in 0..n {
                        for j in 0..d {
                            let col = (a * d + i) * (n * d) + (c * d + j);
                            for (k, s) in alg.key_product(&i, &j)?.terms() {
                                let row = a * d + k;
                                mat[row][col] = mat[row][col].add(s)?;
                            }
                            for (k, s) in alg.key_product(&j, &i)?.terms() {
                                let row = (a + b + c + 1) * d + k;
                                mat[row][col] = mat[row][col].sub(s)?;
                            }
                        }
                    }
                }
            }
            components.insert((m, n), mat);
        }
    }
    TwistedBilinearOp::new(module.clone(), module.clone(), module, components)
}

/// The table product is pre-Lie exactly when the suspension bracket is a
/// twisted Lie bracket; this runs both checkers independently and reports
/// whether their verdicts agree.
pub fn check_pltwlie_equivalence(alg: &TablePreLie, t_cap: usize) -> Result<bool> {
    let prelie_holds = alg.check_axiom()?.is_none();
    let bracket = suspend_bracket(alg, t_cap)?;
    let twisted_holds = check_twisted_axiom(&bracket, TwistedAxiom::Lie)?.is_none();
    Ok(prelie_holds == twisted_holds)
}

/// Embed a bracket table as a twisted operation concentrated in degree zero.
pub fn degree_zero_bracket(lie: &crate::prelie::LieTable) -> Result<TwistedBilinearOp> {
    let ring = lie.ring();
    let names: Vec<&str> = lie.names().iter().map(|s| s.as_str()).collect();
    let module = SModule::concentrated(ring, 0, &names)?;
    let d = lie.dim();
    let mut mat = zero_matrix(ring, d, d * d);
    for i in 0..d {
        for j in 0..d {
            for (k, s) in lie.bracket_keys(i, j)?.terms() {
                mat[*k][i * d + j] = mat[*k][i * d + j].add(s)?;
            }
        }
    }
    let mut components = BTreeMap::new();
    components.insert((0, 0), mat);
    TwistedBilinearOp::new(module.clone(), module.clone(), module, components)
}

/// Embed a product table as a twisted operation concentrated in degree zero.
pub fn degree_zero_product(alg: &TablePreLie) -> Result<TwistedBilinearOp> {
    let ring = alg.ring();
    let names: Vec<&str> = alg.names().iter().map(|s| s.as_str()).collect();
    let module = SModule::concentrated(ring, 0, &names)?;
    let d = alg.dim();
    let mut mat = zero_matrix(ring, d, d * d);
    for i in 0..d {
        for j in 0..d {
            for (k, s) in alg.key_product(&i, &j)?.terms() {
                mat[*k][i * d + j] = mat[*k][i * d + j].add(s)?;
            }
        }
    }
    let mut components = BTreeMap::new();
    components.insert((0, 0), mat);
    TwistedBilinearOp::new(module.clone(), module.clone(), module, components)
}

/// A random twisted pre-Lie operation on a module with degrees 1 and 2: the
/// only possible component `(1,1) → 2` is filled with random entries and the
/// module is padded so higher products vanish up to `pad_to`. Every sample
/// satisfies the twisted pre-Lie identity because all triple products land in
/// the empty degrees.
pub fn random_graded_op(
    ring: &RingSpec,
    d1: usize,
    d2: usize,
    pad_to: usize,
    rng: &mut impl Rng,
) -> Result<TwistedBilinearOp> {
    let p = ring.characteristic();
    if p == 0 {
        return Err(Error::UnsupportedRing(
            "random operation sampling needs a finite characteristic".to_string(),
        ));
    }
    let module = random_involution_module(ring, d1, d2, rng)?.padded(pad_to);
    let mut mat = zero_matrix(ring, d2, d1 * d1);
    for row in mat.iter_mut() {
        for entry in row.iter_mut() {
            *entry = Scalar::from_integer(ring, rng.gen_range(0..p) as i64);
        }
    }
    let mut components = BTreeMap::new();
    components.insert((1, 1), mat);
    TwistedBilinearOp::new(module.clone(), module.clone(), module, components)
}

/// A random S-module with trivial degree-1 action and a random involution in
/// degree 2; needs a finite-characteristic ring and dimensions at most 2.
pub fn random_involution_module(
    ring: &RingSpec,
    d1: usize,
    d2: usize,
    rng: &mut impl Rng,
) -> Result<SModule> {
    if d1 > 2 || d2 > 2 {
        return Err(Error::Invalid("random modules support dimensions at most 2".to_string()));
    }
    let names = |prefix: &str, k: usize| -> Vec<String> {
        (0..k).map(|i| format!("{prefix}{}", i + 1)).collect()
    };
    let involution = random_involution(ring, d2, rng)?;
    SModule::new(
        ring,
        vec![
            (Vec::new(), Vec::new()),
            (names("x", d1), Vec::new()),
            (names("u", d2), vec![involution]),
        ],
    )
}

fn random_involution(ring: &RingSpec, n: usize, rng: &mut impl Rng) -> Result<Matrix> {
    let p = ring.characteristic();
    if p == 0 {
        return Err(Error::UnsupportedRing(
            "random involutions need a finite characteristic".to_string(),
        ));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        return Ok(vec![vec![Scalar::from_integer(ring, sign)]]);
    }
    let seed = match rng.gen_range(0..3) {
        0 => identity_matrix(ring, 2),
        1 => {
            // The basis swap.
            let mut m = zero_matrix(ring, 2, 2);
            m[0][1] = Scalar::one(ring);
            m[1][0] = Scalar::one(ring);
            m
        }
        _ => {
            let mut m = identity_matrix(ring, 2);
            m[1][1] = Scalar::from_integer(ring, -1);
            m
        }
    };
    // Conjugate by a random invertible 2x2 matrix.
    loop {
        let entry = |rng: &mut dyn rand::RngCore| {
            Scalar::from_integer(ring, rng.gen_range(0..p) as i64)
        };
        let a = vec![vec![entry(rng), entry(rng)], vec![entry(rng), entry(rng)]];
        let det = a[0][0].mul(&a[1][1])?.sub(&a[0][1].mul(&a[1][0])?)?;
        let Ok(det_inv) = det.inv() else {
            continue;
        };
        let adj = vec![
            vec![a[1][1].mul(&det_inv)?, a[0][1].neg().mul(&det_inv)?],
            vec![a[1][0].neg().mul(&det_inv)?, a[0][0].mul(&det_inv)?],
        ];
        return mat_mul(&mat_mul(&a, &seed, ring)?, &adj, ring);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras;
    use crate::prelie::{random_antisymmetric_bracket, random_bilinear_table};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> RingSpec {
        RingSpec::rational()
    }

    fn fp(p: u64) -> RingSpec {
        RingSpec::prime_field(p).unwrap()
    }

    fn binomial(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        let mut out = 1usize;
        for i in 0..k {
            out = out * (n - i) / (i + 1);
        }
        out
    }

    #[test]
    fn construction_rejects_broken_actions() {
        let ring = fp(3);
        // Unipotent over F_3 does not square to the identity.
        let bad = vec![
            vec![Scalar::one(&ring), Scalar::one(&ring)],
            vec![Scalar::zero(&ring), Scalar::one(&ring)],
        ];
        let err = SModule::new(
            &ring,
            vec![
                (Vec::new(), Vec::new()),
                (Vec::new(), Vec::new()),
                (vec!["u".into(), "v".into()], vec![bad]),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotAnSModule(_)), "{err}");

        // Two involutions that fail the braid relation in degree 3.
        let ring = fp(5);
        let swap = vec![
            vec![Scalar::zero(&ring), Scalar::one(&ring)],
            vec![Scalar::one(&ring), Scalar::zero(&ring)],
        ];
        let diag = vec![
            vec![Scalar::one(&ring), Scalar::zero(&ring)],
            vec![Scalar::zero(&ring), Scalar::from_integer(&ring, -1)],
        ];
        let err = SModule::new(
            &ring,
            vec![
                (Vec::new(), Vec::new()),
                (Vec::new(), Vec::new()),
                (Vec::new(), Vec::new()),
                (vec!["u".into(), "v".into()], vec![swap, diag]),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotAnSModule(_)), "{err}");
    }

    #[test]
    fn act_perm_is_a_group_action() {
        let alg = algebras::chain_3dim(&q()).unwrap();
        let bracket = suspend_bracket(&alg, 2).unwrap();
        let module = bracket.target();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let m = rng.gen_range(1..=3usize);
            let sigma = Perm::random(m, &mut rng);
            let tau = Perm::random(m, &mut rng);
            for i in 0..module.dim(m) {
                let v = unit_vec(module.ring(), module.dim(m), i);
                let composed = module.act_perm(m, &sigma.compose(&tau).unwrap(), &v).unwrap();
                let stepped = module
                    .act_perm(m, &sigma, &module.act_perm(m, &tau, &v).unwrap())
                    .unwrap();
                assert_eq!(composed, stepped);
            }
        }
    }

    #[test]
    fn tensor_dimension_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let ring = fp(5);
        let g = random_involution_module(&ring, 2, 1, &mut rng).unwrap();
        let h = random_involution_module(&ring, 1, 2, &mut rng).unwrap();
        let t = smod_tensor(&g, &h).unwrap();
        for p in 0..=t.max_degree() {
            let expected: usize =
                (0..=p).map(|m| binomial(p, m) * g.dim(m) * h.dim(p - m)).sum();
            assert_eq!(t.dim(p), expected, "degree {p}");
        }
    }

    #[test]
    fn tensoring_with_the_unit_keeps_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ring = fp(3);
        let g = random_involution_module(&ring, 2, 2, &mut rng).unwrap();
        let u = SModule::unit(&ring).unwrap();
        let gu = smod_tensor(&g, &u).unwrap();
        let ug = smod_tensor(&u, &g).unwrap();
        for p in 0..=g.max_degree() {
            assert_eq!(gu.dim(p), g.dim(p));
            assert_eq!(ug.dim(p), g.dim(p));
        }
    }

    #[test]
    fn beta_squared_is_the_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for seed in 0..4u64 {
            let ring = fp([2, 3, 5, 7][seed as usize]);
            let g = random_involution_module(&ring, 2, rng.gen_range(0..=2), &mut rng).unwrap();
            let h = random_involution_module(&ring, rng.gen_range(1..=2), 2, &mut rng).unwrap();
            let gh = smod_tensor(&g, &h).unwrap();
            for p in 0..=gh.max_degree() {
                for i in 0..gh.dim(p) {
                    let v = unit_vec(&ring, gh.dim(p), i);
                    let once = beta_apply(&g, &h, p, &v).unwrap();
                    let twice = beta_apply(&h, &g, p, &once).unwrap();
                    assert_eq!(twice, v, "p={p} i={i}");
                }
            }
        }
    }

    #[test]
    fn equivariance_gate_rejects_bad_components() {
        let alg = algebras::abelian(&q(), 1).unwrap();
        let good = suspend_bracket(&alg, 2).unwrap();
        let module = good.target().clone();
        // A constant component (2,1) -> 3 cannot commute with the slot action.
        let mut mat = zero_matrix(&q(), module.dim(3), module.dim(2) * module.dim(1));
        for col in 0..module.dim(2) * module.dim(1) {
            mat[0][col] = Scalar::one(&q());
        }
        let mut components = BTreeMap::new();
        components.insert((2, 1), mat);
        let err =
            TwistedBilinearOp::new(module.clone(), module.clone(), module, components).unwrap_err();
        assert!(matches!(err, Error::NotEquivariant(_)), "{err}");
    }

    #[test]
    fn degree_zero_bracket_matches_classical_checks() {
        // A valid Lie table passes the twisted check.
        let lie = algebras::affine_line_lie(&fp(5)).unwrap();
        let op = degree_zero_bracket(&lie).unwrap();
        assert_eq!(check_twisted_axiom(&op, TwistedAxiom::Lie).unwrap(), None);

        // A random antisymmetric non-Jacobi table fails it, in agreement with
        // the classical checker.
        let bad = random_antisymmetric_bracket(&fp(5), 3, 0).unwrap();
        assert!(bad.check_jacobi().unwrap().is_some());
        let op = degree_zero_bracket(&bad).unwrap();
        let witness = check_twisted_axiom(&op, TwistedAxiom::Lie).unwrap();
        assert!(witness.is_some());
    }

    #[test]
    fn suspension_bracket_on_generators() {
        // {x, y} = (x∘y)t − t(y∘x) with x = y = e1 in the 2-dim table where
        // e1∘e1 = e2.
        let alg = algebras::nilpotent_2dim(&q()).unwrap();
        let bracket = suspend_bracket(&alg, 2).unwrap();
        let module = bracket.target();
        let d = 2;
        let x = unit_vec(&q(), module.dim(1), 0);
        let out = bracket.apply(1, 1, &x, &x).unwrap();
        let mut expected = zero_vec(&q(), module.dim(2));
        expected[1] = Scalar::one(&q());
        expected[d + 1] = Scalar::from_integer(&q(), -1);
        assert_eq!(out, expected);
    }

    #[test]
    fn suspension_bracket_is_t_linear() {
        let alg = algebras::chain_3dim(&q()).unwrap();
        let bracket = suspend_bracket(&alg, 2).unwrap();
        let module = bracket.target();
        let d = alg.dim();
        // t·(t^a x t^b) raises a by one; compare {t·f, g} with t·{f, g} for
        // generators f, g.
        for i in 0..d {
            for j in 0..d {
                let f = unit_vec(&q(), module.dim(1), i);
                let g = unit_vec(&q(), module.dim(1), j);
                let fg = bracket.apply(1, 1, &f, &g).unwrap();
                let tf = unit_vec(&q(), module.dim(2), d + i);
                let tfg = bracket.apply(2, 1, &tf, &g).unwrap();
                let mut shifted = zero_vec(&q(), module.dim(3));
                for (idx, s) in fg.iter().enumerate() {
                    shifted[d + idx] = s.clone();
                }
                assert_eq!(tfg, shifted, "i={i} j={j}");
            }
        }
    }

    #[test]
    fn zero_product_suspends_to_the_zero_bracket() {
        let alg = algebras::abelian(&fp(3), 2).unwrap();
        let bracket = suspend_bracket(&alg, 2).unwrap();
        let module = bracket.target();
        for m in 1..=2 {
            for n in 1..=(3 - m) {
                for i in 0..module.dim(m) {
                    for j in 0..module.dim(n) {
                        let x = unit_vec(&fp(3), module.dim(m), i);
                        let y = unit_vec(&fp(3), module.dim(n), j);
                        assert!(vec_is_zero(&bracket.apply(m, n, &x, &y).unwrap()));
                    }
                }
            }
        }
        assert_eq!(check_twisted_axiom(&bracket, TwistedAxiom::Lie).unwrap(), None);
    }

    #[test]
    fn pltwlie_equivalence_on_fixed_examples() {
        // Zero product: both verdicts true.
        assert!(check_pltwlie_equivalence(&algebras::abelian(&fp(2), 2).unwrap(), 2).unwrap());
        // A 2-dim pre-Lie table over F_5: both true.
        assert!(check_pltwlie_equivalence(&algebras::nilpotent_2dim(&fp(5)).unwrap(), 2).unwrap());
        // The non-pre-Lie control: both false, still in agreement.
        let control = algebras::non_prelie_control().unwrap();
        assert!(control.check_axiom().unwrap().is_some());
        let bracket = suspend_bracket(&control, 2).unwrap();
        assert!(check_twisted_axiom(&bracket, TwistedAxiom::Lie).unwrap().is_some());
        assert!(check_pltwlie_equivalence(&control, 2).unwrap());
        // A seeded random bilinear table over F_3 that violates the axiom.
        let table = random_bilinear_table(&fp(3), 2, 1).unwrap();
        assert!(table.check_axiom().unwrap().is_some());
        assert!(check_pltwlie_equivalence(&table, 2).unwrap());
    }

    #[test]
    fn suspension_passes_lie_check_at_higher_t_cap() {
        let alg = algebras::chain_3dim(&fp(2)).unwrap();
        let bracket = suspend_bracket(&alg, 3).unwrap();
        assert_eq!(check_twisted_axiom(&bracket, TwistedAxiom::Lie).unwrap(), None);
    }

    #[test]
    fn suspension_carries_a_twisted_prelie_structure() {
        let circ = suspend_circ(&algebras::nilpotent_2dim(&q()).unwrap(), 2).unwrap();
        assert_eq!(check_twisted_axiom(&circ, TwistedAxiom::PreLie).unwrap(), None);
        let circ = suspend_circ(&algebras::chain_3dim(&fp(5)).unwrap(), 2).unwrap();
        assert_eq!(check_twisted_axiom(&circ, TwistedAxiom::PreLie).unwrap(), None);
        // The control table is not pre-Lie and its suspension fails the
        // twisted identity as well.
        let circ = suspend_circ(&algebras::non_prelie_control().unwrap(), 2).unwrap();
        assert!(check_twisted_axiom(&circ, TwistedAxiom::PreLie).unwrap().is_some());
    }

    #[test]
    fn json_round_trip() {
        let alg = algebras::chain_3dim(&fp(7)).unwrap();
        let module = suspend_bracket(&alg, 2).unwrap().target().clone();
        let text = module.to_json();
        let back = SModule::from_json(&text).unwrap();
        assert_eq!(module, back);
        assert!(SModule::from_json("{\"ring\":").is_err());
    }
}
