//! Dense vectors, matrices and subspaces over `GF(2)` and `GF(2^m)`.
//!
//! Everything is immutable after construction and sized for desk-scale
//! cryptanalysis (hundreds of rows at most), so the representation is plain
//! row-major storage with textbook Gaussian elimination. All extension-field
//! code assumes characteristic 2, where negation is the identity.

use std::fmt;

use thiserror::Error;

use crate::gf2m::{Felt, FieldCtx};

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("malformed matrix text: {0}")]
    Parse(String),
}

/// Dense matrix over `GF(2^m)`, entries in row-major order.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Felt>,
    ctx: FieldCtx,
}

impl fmt::Debug for ExtMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExtMatrix {}x{} over {}", self.rows, self.cols, self.ctx.header())?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_hex()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl ExtMatrix {
    pub fn zeros(ctx: &FieldCtx, rows: usize, cols: usize) -> ExtMatrix {
        ExtMatrix {
            rows,
            cols,
            entries: vec![Felt::ZERO; rows * cols],
            ctx: ctx.clone(),
        }
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> ExtMatrix {
        let mut m = ExtMatrix::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, Felt::ONE);
        }
        m
    }

    pub fn from_rows(ctx: &FieldCtx, rows: Vec<Vec<Felt>>) -> ExtMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "dimension mismatch: ragged rows");
        ExtMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
            ctx: ctx.clone(),
        }
    }

    pub fn from_fn(
        ctx: &FieldCtx,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Felt,
    ) -> ExtMatrix {
        let mut m = ExtMatrix::zeros(ctx, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Felt {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Felt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Felt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Felt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> ExtMatrix {
        ExtMatrix::from_fn(&self.ctx, self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Entrywise Frobenius image, every entry raised to `2^j`.
    pub fn frobenius(&self, j: u32) -> ExtMatrix {
        let mut m = self.clone();
        for e in &mut m.entries {
            *e = self.ctx.frobenius(*e, j);
        }
        m
    }

    pub fn mat_mul(&self, other: &ExtMatrix) -> ExtMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mat_mul");
        assert_eq!(self.ctx, other.ctx, "field mismatch in mat_mul");
        let ctx = &self.ctx;
        let mut out = ExtMatrix::zeros(ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = ctx.add(out.get(i, j), ctx.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn stack(&self, below: &ExtMatrix) -> ExtMatrix {
        assert_eq!(self.cols, below.cols, "dimension mismatch in stack");
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&below.entries);
        ExtMatrix {
            rows: self.rows + below.rows,
            cols: self.cols,
            entries,
            ctx: self.ctx.clone(),
        }
    }

    fn rref_in_place(&mut self) -> (usize, Vec<usize>) {
        let ctx = self.ctx.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..self.cols {
            if prow == self.rows {
                break;
            }
            let Some(sel) = (prow..self.rows).find(|&i| !self.get(i, col).is_zero()) else {
                continue;
            };
            if sel != prow {
                for j in 0..self.cols {
                    let a = self.get(prow, j);
                    let b = self.get(sel, j);
                    self.set(prow, j, b);
                    self.set(sel, j, a);
                }
            }
            let inv = ctx.inv(self.get(prow, col)).unwrap();
            for j in 0..self.cols {
                self.set(prow, j, ctx.mul(self.get(prow, j), inv));
            }
            for i in 0..self.rows {
                if i == prow {
                    continue;
                }
                let f = self.get(i, col);
                if f.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    let v = ctx.add(self.get(i, j), ctx.mul(f, self.get(prow, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(col);
            prow += 1;
        }
        (prow, pivots)
    }

    /// Reduced row-echelon form and rank.
    pub fn rref(&self) -> (ExtMatrix, usize) {
        let mut m = self.clone();
        let (rank, _) = m.rref_in_place();
        (m, rank)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    pub fn row_space_equal(&self, other: &ExtMatrix) -> bool {
        if self.cols != other.cols || self.ctx != other.ctx {
            return false;
        }
        let (a, ra) = self.rref();
        let (b, rb) = other.rref();
        ra == rb && (0..ra).all(|i| a.row(i) == b.row(i))
    }

    /// Right kernel `{v : M v^T = 0}` as a subspace of the column space.
    pub fn right_kernel(&self) -> Subspace {
        let mut m = self.clone();
        let (_, pivots) = m.rref_in_place();
        let mut basis = Vec::new();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut vec = vec![Felt::ZERO; self.cols];
            vec[free] = Felt::ONE;
            for (&pc, r) in pivots.iter().zip(0..) {
                // characteristic 2: negation is identity
                vec[pc] = m.get(r, free);
            }
            basis.push(vec);
        }
        Subspace::from_rows(ExtMatrix::from_rows(&self.ctx, basis_or_empty(basis, self.cols)))
    }

    /// Left kernel `{v : v M = 0}` as a subspace of the row space side.
    pub fn left_kernel(&self) -> Subspace {
        self.transpose().right_kernel()
    }

    /// Solves `self * X = rhs`; returns `None` if inconsistent. Free
    /// variables are set to zero.
    pub fn solve(&self, rhs: &ExtMatrix) -> Option<ExtMatrix> {
        assert_eq!(self.rows, rhs.rows, "dimension mismatch in solve");
        let mut aug = ExtMatrix::from_fn(&self.ctx, self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                rhs.get(i, j - self.cols)
            }
        });
        let (_, pivots) = aug.rref_in_place();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = ExtMatrix::zeros(&self.ctx, self.cols, rhs.cols);
        for (r, &c) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(c, j, aug.get(r, self.cols + j));
            }
        }
        Some(x)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("MAT {} {} {}\n", self.rows, self.cols, self.ctx.header());
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_hex()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(s: &str) -> Result<ExtMatrix, LinalgError> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| LinalgError::Parse("empty input".into()))?;
        let (rows, cols, field) = parse_mat_header(header)?;
        let ctx = FieldCtx::from_header(field)
            .map_err(|e| LinalgError::Parse(format!("bad field header: {e}")))?;
        let mut m = ExtMatrix::zeros(&ctx, rows, cols);
        for i in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| LinalgError::Parse(format!("missing row {i}")))?;
            let vals: Vec<&str> = line.split_whitespace().collect();
            if vals.len() != cols {
                return Err(LinalgError::Parse(format!("row {i} has {} entries", vals.len())));
            }
            for (j, v) in vals.iter().enumerate() {
                let e = Felt::from_hex(v).map_err(|e| LinalgError::Parse(e.to_string()))?;
                if e.0 as usize >= ctx.size() {
                    return Err(LinalgError::Parse(format!("entry {v} outside field")));
                }
                m.set(i, j, e);
            }
        }
        Ok(m)
    }
}

fn basis_or_empty(basis: Vec<Vec<Felt>>, cols: usize) -> Vec<Vec<Felt>> {
    if basis.is_empty() {
        // keep the ambient width for an empty basis via a single zero row that
        // from_rows/rref will strip
        vec![vec![Felt::ZERO; cols]]
    } else {
        basis
    }
}

/// Dense matrix over `GF(2)`, rows packed into 64-bit words.
#[derive(Clone, PartialEq, Eq)]
pub struct BinMatrix {
    rows: usize,
    cols: usize,
    wpr: usize,
    words: Vec<u64>,
}

impl fmt::Debug for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: String = (0..self.cols)
                .map(|j| if self.get(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

impl BinMatrix {
    pub fn zeros(rows: usize, cols: usize) -> BinMatrix {
        let wpr = cols.div_ceil(64).max(1);
        BinMatrix { rows, cols, wpr, words: vec![0; rows * wpr] }
    }

    pub fn identity(n: usize) -> BinMatrix {
        let mut m = BinMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> BinMatrix {
        let mut m = BinMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.words[i * self.wpr + j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.words[i * self.wpr + j / 64];
        if v {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    fn xor_rows(&mut self, dst: usize, src: usize) {
        let (d, s) = (dst * self.wpr, src * self.wpr);
        for k in 0..self.wpr {
            let v = self.words[s + k];
            self.words[d + k] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.wpr {
            self.words.swap(a * self.wpr + k, b * self.wpr + k);
        }
    }

    fn rref_in_place(&mut self) -> (usize, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..self.cols {
            if prow == self.rows {
                break;
            }
            let Some(sel) = (prow..self.rows).find(|&i| self.get(i, col)) else {
                continue;
            };
            self.swap_rows(sel, prow);
            for i in 0..self.rows {
                if i != prow && self.get(i, col) {
                    self.xor_rows(i, prow);
                }
            }
            pivots.push(col);
            prow += 1;
        }
        (prow, pivots)
    }

    pub fn rref(&self) -> (BinMatrix, usize) {
        let mut m = self.clone();
        let (rank, _) = m.rref_in_place();
        (m, rank)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Drops zero rows; handy after an RREF.
    pub fn compact(&self) -> BinMatrix {
        let nonzero: Vec<usize> = (0..self.rows)
            .filter(|&i| (0..self.wpr).any(|k| self.words[i * self.wpr + k] != 0))
            .collect();
        let mut m = BinMatrix::zeros(nonzero.len(), self.cols);
        for (ni, &oi) in nonzero.iter().enumerate() {
            for k in 0..self.wpr {
                m.words[ni * self.wpr + k] = self.words[oi * self.wpr + k];
            }
        }
        m
    }

    pub fn row_space_equal(&self, other: &BinMatrix) -> bool {
        if self.cols != other.cols {
            return false;
        }
        let (a, ra) = self.rref();
        let (b, rb) = other.rref();
        if ra != rb {
            return false;
        }
        (0..ra).all(|i| (0..a.wpr).all(|k| a.words[i * a.wpr + k] == b.words[i * b.wpr + k]))
    }

    /// Right kernel `{v in GF(2)^cols : M v^T = 0}`, returned in RREF.
    pub fn right_kernel(&self) -> BinMatrix {
        let mut m = self.clone();
        let (_, pivots) = m.rref_in_place();
        let mut pivot_of_col = vec![None; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            pivot_of_col[c] = Some(r);
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| pivot_of_col[c].is_none()).collect();
        let mut k = BinMatrix::zeros(free.len(), self.cols);
        for (bi, &fc) in free.iter().enumerate() {
            k.set(bi, fc, true);
            for (r, &pc) in pivots.iter().enumerate() {
                if m.get(r, fc) {
                    k.set(bi, pc, true);
                }
            }
        }
        let (kr, _) = k.rref();
        kr.compact()
    }

    pub fn transpose(&self) -> BinMatrix {
        BinMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mat_mul(&self, other: &BinMatrix) -> BinMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mat_mul");
        BinMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = false;
            for k in 0..self.cols {
                acc ^= self.get(i, k) & other.get(k, j);
            }
            acc
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("MAT {} {} F2\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: String = (0..self.cols)
                .map(|j| if self.get(i, j) { '1' } else { '0' })
                .collect();
            out.push_str(&row);
            out.push('\n');
        }
        out
    }

    pub fn from_text(s: &str) -> Result<BinMatrix, LinalgError> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| LinalgError::Parse("empty input".into()))?;
        let (rows, cols, field) = parse_mat_header(header)?;
        if field.trim() != "F2" {
            return Err(LinalgError::Parse(format!("expected F2 matrix, got `{field}`")));
        }
        let mut m = BinMatrix::zeros(rows, cols);
        for i in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| LinalgError::Parse(format!("missing row {i}")))?
                .trim();
            if line.len() != cols {
                return Err(LinalgError::Parse(format!("row {i} has length {}", line.len())));
            }
            for (j, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(i, j, true),
                    _ => return Err(LinalgError::Parse(format!("bad bit `{ch}`"))),
                }
            }
        }
        Ok(m)
    }
}

fn parse_mat_header(line: &str) -> Result<(usize, usize, &str), LinalgError> {
    let line = line.trim();
    let mut it = line.splitn(4, ' ');
    let tag = it.next().unwrap_or("");
    if tag != "MAT" {
        return Err(LinalgError::Parse(format!("expected MAT header, got `{line}`")));
    }
    let rows: usize = it
        .next()
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| LinalgError::Parse("bad row count".into()))?;
    let cols: usize = it
        .next()
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| LinalgError::Parse("bad column count".into()))?;
    let field = it.next().ok_or_else(|| LinalgError::Parse("missing field tag".into()))?;
    Ok((rows, cols, field))
}

/// A linear subspace of `GF(2^m)^n`, held as a basis in reduced row-echelon
/// form with zero rows stripped. RREF makes equality a plain comparison.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    basis: ExtMatrix,
}

impl Subspace {
    pub fn from_rows(m: ExtMatrix) -> Subspace {
        let (r, rank) = m.rref();
        let rows = (0..rank).map(|i| r.row(i).to_vec()).collect();
        let mut basis = ExtMatrix::from_rows(r.ctx(), rows);
        basis.cols = m.cols();
        if basis.rows == 0 {
            basis.entries.clear();
        }
        Subspace { basis }
    }

    pub fn full(ctx: &FieldCtx, n: usize) -> Subspace {
        Subspace::from_rows(ExtMatrix::identity(ctx, n))
    }

    pub fn zero(ctx: &FieldCtx, n: usize) -> Subspace {
        Subspace { basis: ExtMatrix::zeros(ctx, 0, n) }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &ExtMatrix {
        &self.basis
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient(), other.ambient(), "dimension mismatch in sum");
        Subspace::from_rows(self.basis.stack(&other.basis))
    }

    /// Dual with respect to the standard bilinear form `<u, v> = sum u_i v_i`.
    pub fn dual(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.basis.ctx(), self.ambient());
        }
        self.basis.right_kernel()
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient(), other.ambient(), "dimension mismatch in intersect");
        self.dual().sum(&other.dual()).dual()
    }

    pub fn contains(&self, v: &[Felt]) -> bool {
        assert_eq!(v.len(), self.ambient(), "dimension mismatch in contains");
        let ctx = self.basis.ctx();
        let mut v = v.to_vec();
        for i in 0..self.basis.rows() {
            let pivot = self.basis.row(i).iter().position(|e| !e.is_zero()).unwrap();
            let f = v[pivot];
            if f.is_zero() {
                continue;
            }
            for j in 0..v.len() {
                v[j] = ctx.add(v[j], ctx.mul(f, self.basis.get(i, j)));
            }
        }
        v.iter().all(|e| e.is_zero())
    }
}

/// Componentwise product of two vectors.
pub fn schur(ctx: &FieldCtx, u: &[Felt], v: &[Felt]) -> Vec<Felt> {
    assert_eq!(u.len(), v.len(), "dimension mismatch in schur");
    u.iter().zip(v).map(|(&a, &b)| ctx.mul(a, b)).collect()
}

/// Row offset of the product of rows `i <= j` among all `k(k+1)/2` ordered
/// pairs, enumerated with `i` outermost.
pub fn pair_index(k: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < k);
    i * k - i * (i + 1) / 2 + j
}

/// The `binom(k+1, 2) x n` matrix of componentwise products of all row pairs
/// `(i, j)` with `i <= j`, in `pair_index` order.
pub fn schur_pair_rows(m: &ExtMatrix) -> ExtMatrix {
    let k = m.rows();
    let ctx = m.ctx().clone();
    let mut rows = Vec::with_capacity(k * (k + 1) / 2);
    for i in 0..k {
        for j in i..k {
            rows.push(schur(&ctx, m.row(i), m.row(j)));
        }
    }
    ExtMatrix::from_rows(&ctx, rows)
}

/// Row space of all pairwise products of rows: the square of the row space.
pub fn schur_span(m: &ExtMatrix) -> Subspace {
    Subspace::from_rows(schur_pair_rows(m))
}

/// Subfield subcode from parity rows: `{c in GF(2)^n : C c^T = 0}` for a
/// parity matrix `C` over `GF(2^m)`. Each extension-field constraint expands
/// into `m` binary constraints through the polynomial basis. The returned
/// generator matrix is in RREF.
pub fn subfield_subcode(c: &ExtMatrix) -> BinMatrix {
    let m = c.ctx().m() as usize;
    let constraints = BinMatrix::from_fn(c.rows() * m, c.cols(), |i, j| {
        let (row, bit) = (i / m, i % m);
        (c.get(row, j).0 >> bit) & 1 == 1
    });
    constraints.right_kernel()
}

/// Reinterprets a binary generator matrix over `GF(2^m)`; the row space over
/// the extension field is the extension of scalars of the binary code.
pub fn extend_scalars(g: &BinMatrix, ctx: &FieldCtx) -> ExtMatrix {
    ExtMatrix::from_fn(ctx, g.rows(), g.cols(), |i, j| {
        if g.get(i, j) {
            Felt::ONE
        } else {
            Felt::ZERO
        }
    })
}
