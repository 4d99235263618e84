//! The matrix code of quadratic relationships attached to a code basis, its
//! skew-symmetric representation, Frobenius-shaped public bases, and the
//! catalog of structured low-rank members (types 1 through 5).

use rand::Rng;
use thiserror::Error;

use crate::codes::{canonical_basis, extended_dual, SupportMultiplier};
use crate::gf2m::{Felt, FieldCtx, Poly};
use crate::linalg::{schur, schur_pair_rows, BinMatrix, ExtMatrix, Subspace};

#[derive(Debug, Error)]
pub enum MatCodeError {
    #[error("parameter constraint violated: {0}")]
    BadParams(String),
    #[error("exhausted sampling budget ({0} draws)")]
    Exhausted(usize),
    #[error("change-of-basis matrix is singular")]
    SingularP,
    #[error("matrix is not skew-symmetric with zero diagonal")]
    NotSkew,
}

/// Index of the strict upper-triangular entry `(i, j)`, `i < j`, in row-major
/// enumeration over a `k x k` matrix.
pub fn upper_index(k: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < k);
    i * (2 * k - i - 1) / 2 + (j - i - 1)
}

/// A skew-symmetric matrix over a characteristic-2 field: symmetric with zero
/// diagonal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SkewMat {
    mat: ExtMatrix,
}

impl SkewMat {
    pub fn zero(ctx: &FieldCtx, k: usize) -> SkewMat {
        SkewMat { mat: ExtMatrix::zeros(ctx, k, k) }
    }

    pub fn new(mat: ExtMatrix) -> Result<SkewMat, MatCodeError> {
        if mat.rows() != mat.cols() {
            return Err(MatCodeError::NotSkew);
        }
        for i in 0..mat.rows() {
            if !mat.get(i, i).is_zero() {
                return Err(MatCodeError::NotSkew);
            }
            for j in (i + 1)..mat.cols() {
                if mat.get(i, j) != mat.get(j, i) {
                    return Err(MatCodeError::NotSkew);
                }
            }
        }
        Ok(SkewMat { mat })
    }

    pub fn size(&self) -> usize {
        self.mat.rows()
    }

    pub fn mat(&self) -> &ExtMatrix {
        &self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> Felt {
        self.mat.get(i, j)
    }

    /// Sets the mirrored pair of off-diagonal entries.
    pub fn set_pair(&mut self, i: usize, j: usize, v: Felt) {
        assert_ne!(i, j, "diagonal entries stay zero");
        self.mat.set(i, j, v);
        self.mat.set(j, i, v);
    }

    pub fn add_pair(&mut self, i: usize, j: usize, v: Felt) {
        let cur = self.mat.get(i, j);
        let sum = self.mat.ctx().clone().add(cur, v);
        self.set_pair(i, j, sum);
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    pub fn rank(&self) -> usize {
        self.mat.rank()
    }

    /// Strict upper triangle flattened in `upper_index` order.
    pub fn upper_vec(&self) -> Vec<Felt> {
        let k = self.size();
        let mut out = Vec::with_capacity(k * (k - 1) / 2);
        for i in 0..k {
            for j in (i + 1)..k {
                out.push(self.mat.get(i, j));
            }
        }
        out
    }

    pub fn from_upper_vec(ctx: &FieldCtx, k: usize, v: &[Felt]) -> SkewMat {
        assert_eq!(v.len(), k * (k - 1) / 2, "dimension mismatch in from_upper_vec");
        let mut s = SkewMat::zero(ctx, k);
        let mut idx = 0;
        for i in 0..k {
            for j in (i + 1)..k {
                if !v[idx].is_zero() {
                    s.set_pair(i, j, v[idx]);
                }
                idx += 1;
            }
        }
        s
    }

    /// Congruence transform `P^T M P`.
    pub fn congruent(&self, p: &ExtMatrix) -> SkewMat {
        SkewMat { mat: p.transpose().mat_mul(&self.mat).mat_mul(p) }
    }
}

/// An ordered basis of the extended dual code in Frobenius shape: blocks of
/// `r` rows where block `j` is the componentwise `2^j`-th power of block 0.
#[derive(Clone, Debug)]
pub struct FrobeniusBasis {
    r: usize,
    m: usize,
    h: ExtMatrix,
}

const BASIS_DRAW_BUDGET: usize = 64;

impl FrobeniusBasis {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.r * self.m
    }

    /// The `rm x n` matrix whose rows are the basis vectors in order.
    pub fn h(&self) -> &ExtMatrix {
        &self.h
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.h.ctx()
    }

    /// Wraps an `rm x n` matrix after checking the blockwise Frobenius
    /// structure and full rank.
    pub fn from_rows(h: ExtMatrix, r: usize) -> Result<FrobeniusBasis, MatCodeError> {
        let ctx = h.ctx().clone();
        let m = ctx.m() as usize;
        if h.rows() != r * m {
            return Err(MatCodeError::BadParams(format!(
                "expected {} rows, got {}",
                r * m,
                h.rows()
            )));
        }
        for j in 1..m {
            for i in 0..r {
                for col in 0..h.cols() {
                    if h.get(j * r + i, col) != ctx.frobenius(h.get(i, col), j as u32) {
                        return Err(MatCodeError::BadParams(
                            "rows do not have blockwise Frobenius shape".into(),
                        ));
                    }
                }
            }
        }
        if h.rank() != r * m {
            return Err(MatCodeError::BadParams("basis rows are dependent".into()));
        }
        Ok(FrobeniusBasis { r, m, h })
    }

    /// The secret canonical basis `(y, xy, ..., x^(r-1)y)` and its Frobenius
    /// blocks.
    pub fn canonical(
        ctx: &FieldCtx,
        sm: &SupportMultiplier,
        r: usize,
    ) -> Result<FrobeniusBasis, MatCodeError> {
        let h = canonical_basis(ctx, sm, r).map_err(|e| MatCodeError::BadParams(e.to_string()))?;
        Ok(FrobeniusBasis { r, m: ctx.m() as usize, h })
    }

    /// Samples a Frobenius-shaped basis of the extended dual of a public
    /// binary code: draw `r` random extension-field combinations of the dual's
    /// binary generators (the extended dual is Frobenius-stable because it is
    /// generated over `GF(2)`), take all Frobenius images, and accept once the
    /// `rm` rows are independent.
    pub fn sample(
        public: &BinMatrix,
        ctx: &FieldCtx,
        r: usize,
        rng: &mut impl Rng,
    ) -> Result<FrobeniusBasis, MatCodeError> {
        let m = ctx.m() as usize;
        let dual = extended_dual(public, ctx);
        let n = dual.cols();
        for _ in 0..BASIS_DRAW_BUDGET {
            let mut base = Vec::with_capacity(r);
            for _ in 0..r {
                let mut row = vec![Felt::ZERO; n];
                for d in 0..dual.rows() {
                    let c = ctx.random_element(rng);
                    if c.is_zero() {
                        continue;
                    }
                    for (j, slot) in row.iter_mut().enumerate() {
                        *slot = ctx.add(*slot, ctx.mul(c, dual.get(d, j)));
                    }
                }
                base.push(row);
            }
            let mut rows: Vec<Vec<Felt>> = Vec::with_capacity(r * m);
            for j in 0..m {
                for b in base.iter() {
                    rows.push(b.iter().map(|&v| ctx.frobenius(v, j as u32)).collect());
                }
            }
            let h = ExtMatrix::from_rows(ctx, rows);
            if h.rank() == r * m {
                return Ok(FrobeniusBasis { r, m, h });
            }
        }
        Err(MatCodeError::Exhausted(BASIS_DRAW_BUDGET))
    }
}

/// A basis of the skew-symmetric matrix code of quadratic relationships for
/// an ordered code basis, together with that basis.
#[derive(Clone, Debug)]
pub struct QuadRelCode {
    h: ExtMatrix,
    mats: Vec<SkewMat>,
}

impl QuadRelCode {
    pub fn dim(&self) -> usize {
        self.mats.len()
    }

    pub fn mats(&self) -> &[SkewMat] {
        &self.mats
    }

    pub fn basis_rows(&self) -> &ExtMatrix {
        &self.h
    }

    pub fn k(&self) -> usize {
        self.h.rows()
    }

    /// Linear combination `sum coeffs[t] * mats[t]`.
    pub fn combine(&self, coeffs: &[Felt]) -> SkewMat {
        assert_eq!(coeffs.len(), self.mats.len(), "dimension mismatch in combine");
        let ctx = self.h.ctx().clone();
        let k = self.k();
        let mut out = SkewMat::zero(&ctx, k);
        for (c, mat) in coeffs.iter().zip(&self.mats) {
            if c.is_zero() {
                continue;
            }
            for i in 0..k {
                for j in (i + 1)..k {
                    let v = mat.get(i, j);
                    if !v.is_zero() {
                        out.add_pair(i, j, ctx.mul(*c, v));
                    }
                }
            }
        }
        out
    }
}

/// Computes the matrix code of quadratic relationships for the rows of `h`:
/// linear dependencies among all pairwise componentwise products, encoded as
/// skew matrices on the off-diagonal coefficients. Diagonal-only relations
/// cannot occur for an independent basis in characteristic 2, so dropping the
/// diagonal is lossless; the span is deduplicated by row reduction on the
/// vectorized strict upper parts.
pub fn crel_cmat(h: &ExtMatrix) -> QuadRelCode {
    let k = h.rows();
    let ctx = h.ctx().clone();
    let pairs = schur_pair_rows(h);
    let kernel = pairs.left_kernel();
    let mut uppers = Vec::with_capacity(kernel.dim());
    for b in 0..kernel.dim() {
        let c = kernel.basis().row(b);
        let mut up = Vec::with_capacity(k * (k - 1) / 2);
        for i in 0..k {
            for j in (i + 1)..k {
                up.push(c[crate::linalg::pair_index(k, i, j)]);
            }
        }
        uppers.push(up);
    }
    if uppers.is_empty() {
        return QuadRelCode { h: h.clone(), mats: Vec::new() };
    }
    let stacked = ExtMatrix::from_rows(&ctx, uppers);
    let (rref, rank) = stacked.rref();
    let mats = (0..rank)
        .map(|i| SkewMat::from_upper_vec(&ctx, k, rref.row(i)))
        .collect();
    QuadRelCode { h: h.clone(), mats }
}

/// Checks that `mat` encodes a genuine quadratic relationship for the rows of
/// `h`: the off-diagonal part must be completable by diagonal coefficients,
/// which happens exactly when the componentwise square root of
/// `sum_{i<j} m_ij (h_i * h_j)` lies in the row space of `h`.
pub fn membership_check(mat: &SkewMat, h: &ExtMatrix) -> bool {
    assert_eq!(mat.size(), h.rows(), "dimension mismatch in membership_check");
    let ctx = h.ctx();
    let n = h.cols();
    let k = h.rows();
    let mut acc = vec![Felt::ZERO; n];
    for i in 0..k {
        for j in (i + 1)..k {
            let c = mat.get(i, j);
            if c.is_zero() {
                continue;
            }
            let prod = schur(ctx, h.row(i), h.row(j));
            for (slot, p) in acc.iter_mut().zip(prod) {
                *slot = ctx.add(*slot, ctx.mul(c, p));
            }
        }
    }
    let root: Vec<Felt> = acc.iter().map(|&v| ctx.sqrt(v)).collect();
    Subspace::from_rows(h.clone()).contains(&root)
}

/// Structured members of the matrix code with respect to the canonical
/// basis. Indices follow the block layout: block `l` holds rows
/// `l*r .. l*r + r`, and position `a` inside a block corresponds to the
/// basis vector `(x^a y)^(2^l)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeParams {
    /// `x^a y * x^b y = (x^c y)^2` inside block `l`, for `a + b = 2c`.
    /// Rank 2 in characteristic 2.
    Type1 { a: usize, b: usize, c: usize, l: usize },
    /// `x^a y * x^b y = x^c y * x^d y` inside block `l`, for `a + b = c + d`.
    /// Rank 4.
    Type2 { a: usize, b: usize, c: usize, d: usize, l: usize },
    /// `x^a y * x^b y` equals the square of a dual codeword (binary
    /// square-free Goppa case). Rank 2.
    Type3 { a: usize, b: usize, l: usize },
    /// Cross-block relation `(x^a y)^(2^l) * (x^b y)^(2^u) =
    /// (x^c y)^(2^l) * (x^d y)^(2^u)`. Rank 4.
    Type4 { a: usize, b: usize, c: usize, d: usize, l: usize, u: usize },
    /// Cross-block relation whose right side is the square of a dual
    /// codeword, with coefficients splitting the Goppa polynomial. The
    /// shift is `s = 2^((u-l-1) mod m) * w`. `assignment` lists
    /// `(a, b, value)` splits of each coefficient over the admissible rows;
    /// when absent, each coefficient is routed to the lower of two
    /// consecutive rows that cover every index.
    Type5 { u: usize, l: usize, w: usize, assignment: Option<Vec<(usize, usize, Felt)>> },
}

impl TypeParams {
    pub fn tag(&self) -> u8 {
        match self {
            TypeParams::Type1 { .. } => 1,
            TypeParams::Type2 { .. } => 2,
            TypeParams::Type3 { .. } => 3,
            TypeParams::Type4 { .. } => 4,
            TypeParams::Type5 { .. } => 5,
        }
    }

    /// Validates the tag-specific constraints for a catalog over blocks of
    /// size `r` with `m` blocks. Returns warnings for soft bounds.
    pub fn validate(&self, r: usize, m: usize) -> Result<Vec<String>, MatCodeError> {
        let fail = |msg: String| Err(MatCodeError::BadParams(msg));
        let mut warnings = Vec::new();
        match *self {
            TypeParams::Type1 { a, b, c, l } => {
                if r < 3 || !(a < c && c < b && b <= r - 1) {
                    return fail(format!(
                        "type 1 needs 0 <= a < c < b <= r-1 with r >= 3, got a={a} c={c} b={b} r={r}"
                    ));
                }
                if a + b != 2 * c {
                    return fail(format!("type 1 needs a + b = 2c, got a={a} b={b} c={c}"));
                }
                if l >= m {
                    return fail(format!("block index l={l} out of range for m={m}"));
                }
            }
            TypeParams::Type2 { a, b, c, d, l } => {
                if r < 4 || !(a < c && c < d && d < b && b <= r - 1) {
                    return fail(format!(
                        "type 2 needs 0 <= a < c < d < b <= r-1, got a={a} c={c} d={d} b={b}"
                    ));
                }
                if a + b != c + d {
                    return fail(format!("type 2 needs a + b = c + d, got a={a} b={b} c={c} d={d}"));
                }
                if l >= m {
                    return fail(format!("block index l={l} out of range for m={m}"));
                }
            }
            TypeParams::Type3 { a, b, l } => {
                if !(a < b && b <= r - 1) {
                    return fail(format!("type 3 needs 0 <= a < b <= r-1, got a={a} b={b}"));
                }
                if l >= m {
                    return fail(format!("block index l={l} out of range for m={m}"));
                }
            }
            TypeParams::Type4 { a, b, c, d, l, u } => {
                if l >= m || u >= m || l == u {
                    return fail(format!(
                        "type 4 needs distinct blocks l, u below m, got l={l} u={u} m={m}"
                    ));
                }
                if !(a < c && c <= r - 1 && d < b && b <= r - 1) {
                    return fail(format!(
                        "type 4 needs a < c and b > d within 0..r, got a={a} c={c} b={b} d={d}"
                    ));
                }
                let lhs = (a as u64) * (1 << l) + (b as u64) * (1 << u);
                let rhs = (c as u64) * (1 << l) + (d as u64) * (1 << u);
                if lhs != rhs {
                    return fail(format!(
                        "type 4 needs a*2^l + b*2^u = c*2^l + d*2^u, got {lhs} != {rhs}"
                    ));
                }
                let gap = (u + m - l) % m;
                let bound = usize::ilog2(r + 1) as usize;
                if gap > bound {
                    warnings.push(format!(
                        "type 4 block gap {gap} exceeds the catalog bound {bound} for r={r}"
                    ));
                }
            }
            TypeParams::Type5 { u, l, w, ref assignment } => {
                if l >= m || u >= m {
                    return fail(format!("block indices l={l} u={u} out of range for m={m}"));
                }
                let e = (u + m - l) % m;
                if e < 1 || e > usize::ilog2(r.max(1)) as usize {
                    return fail(format!(
                        "type 5 needs 1 <= (u-l) mod m <= log2(r), got gap {e} for r={r}"
                    ));
                }
                if w > 2 * r - 2 {
                    return fail(format!("type 5 needs w <= 2r-2, got w={w}"));
                }
                let _ = assignment;
            }
        }
        Ok(warnings)
    }
}

/// Admissible rows for each coefficient index of a type-5 relation:
/// `B_a = { b in 0..r : 0 <= a + s - 2^e b <= r-1 }`.
fn type5_sets(r: usize, epow: usize, s: usize) -> Vec<Vec<usize>> {
    (0..=r)
        .map(|a| {
            (0..r)
                .filter(|&b| {
                    let c = (a + s) as i64 - (epow * b) as i64;
                    (0..=r as i64 - 1).contains(&c)
                })
                .collect()
        })
        .collect()
}

/// Builds the structured catalog matrix for `params` with respect to the
/// canonical basis of a degree-`r` code over `ctx`. Types 3 and 5 are only
/// members for binary square-free Goppa keys; type 5 additionally needs the
/// Goppa polynomial to split its coefficients.
pub fn make_type(
    ctx: &FieldCtx,
    r: usize,
    params: &TypeParams,
    gamma: Option<&Poly>,
) -> Result<SkewMat, MatCodeError> {
    let m = ctx.m() as usize;
    params.validate(r, m)?;
    let k = r * m;
    let mut out = SkewMat::zero(ctx, k);
    match *params {
        TypeParams::Type1 { a, b, l, .. } => {
            // the diagonal coefficient -2 vanishes in characteristic 2
            out.set_pair(l * r + a, l * r + b, Felt::ONE);
        }
        TypeParams::Type2 { a, b, c, d, l } => {
            out.set_pair(l * r + a, l * r + b, Felt::ONE);
            out.set_pair(l * r + c, l * r + d, Felt::ONE);
        }
        TypeParams::Type3 { a, b, l } => {
            out.set_pair(l * r + a, l * r + b, Felt::ONE);
        }
        TypeParams::Type4 { a, b, c, d, l, u } => {
            out.set_pair(l * r + a, u * r + b, Felt::ONE);
            out.set_pair(l * r + c, u * r + d, Felt::ONE);
        }
        TypeParams::Type5 { u, l, w, ref assignment } => {
            let gamma = gamma.ok_or_else(|| {
                MatCodeError::BadParams("type 5 requires the Goppa polynomial".into())
            })?;
            if gamma.degree() != Some(r) {
                return Err(MatCodeError::BadParams(format!(
                    "type 5 needs a degree-{r} polynomial"
                )));
            }
            let e = (u + m - l) % m;
            let epow = 1usize << e;
            let s = (1usize << ((u + m - l - 1) % m)) * w;
            let sets = type5_sets(r, epow, s);
            if let Some(a) = sets.iter().position(|b| b.is_empty()) {
                return Err(MatCodeError::BadParams(format!(
                    "type 5 admissible set for index {a} is empty (s={s})"
                )));
            }
            let splits: Vec<(usize, usize, Felt)> = match assignment {
                Some(list) => list.clone(),
                None => default_type5_assignment(r, &sets, gamma)?,
            };
            // each listed b must be admissible and the splits must sum to gamma_a
            let mut sums = vec![Felt::ZERO; r + 1];
            for &(a, b, v) in &splits {
                if a > r || !sets[a].contains(&b) {
                    return Err(MatCodeError::BadParams(format!(
                        "assignment ({a}, {b}) is not admissible"
                    )));
                }
                sums[a] = ctx.add(sums[a], v);
            }
            for (a, &sum) in sums.iter().enumerate() {
                if sum != gamma.coeff(a) {
                    return Err(MatCodeError::BadParams(format!(
                        "assignment for index {a} does not sum to the coefficient"
                    )));
                }
            }
            for &(a, b, v) in &splits {
                if v.is_zero() {
                    continue;
                }
                let c = a + s - epow * b;
                out.add_pair(u * r + b, l * r + c, ctx.frobenius(v, l as u32));
            }
        }
    }
    Ok(out)
}

/// Routes every coefficient to the lower of two consecutive rows that jointly
/// cover all admissible sets, giving the sparse two-row layout.
fn default_type5_assignment(
    r: usize,
    sets: &[Vec<usize>],
    gamma: &Poly,
) -> Result<Vec<(usize, usize, Felt)>, MatCodeError> {
    let window = (0..r)
        .find(|&b0| sets.iter().all(|ba| ba.iter().any(|&b| b == b0 || b == b0 + 1)))
        .ok_or_else(|| {
            MatCodeError::BadParams("no pair of consecutive rows covers all indices".into())
        })?;
    Ok(sets
        .iter()
        .enumerate()
        .map(|(a, ba)| {
            let b = *ba.iter().find(|&&b| b == window || b == window + 1).unwrap();
            (a, b, gamma.coeff(a))
        })
        .collect())
}

/// The right block-cyclic shift on `rm` coordinates: block `p` maps onto
/// block `p + 1 mod m`. Satisfies `S^-1 = S^T`, and `H^(2) = S H` for any
/// Frobenius-shaped `H`.
pub fn shift_matrix(ctx: &FieldCtx, r: usize, m: usize) -> ExtMatrix {
    let k = r * m;
    let mut s = ExtMatrix::zeros(ctx, k, k);
    for p in 0..m {
        for a in 0..r {
            s.set(p * r + a, ((p + 1) % m) * r + a, Felt::ONE);
        }
    }
    s
}

/// The semilinear map `M -> S^T M^(2) S` under which the matrix code of a
/// Frobenius-shaped basis is stable: every block moves one step down the
/// diagonal (cyclically) with entries squared.
pub fn frobenius_conjugate(mat: &SkewMat, r: usize) -> SkewMat {
    let ctx = mat.mat().ctx().clone();
    let m = ctx.m() as usize;
    let k = mat.size();
    assert_eq!(k, r * m, "dimension mismatch in frobenius_conjugate");
    let mut out = SkewMat::zero(&ctx, k);
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let (p, a) = (i / r, i % r);
            let (q, b) = (j / r, j % r);
            let src = mat.get(((p + m - 1) % m) * r + a, ((q + m - 1) % m) * r + b);
            if !src.is_zero() {
                out.mat.set(i, j, ctx.mul(src, src));
            }
        }
    }
    out
}

/// Whether `P` carries the span of `b_code` onto the span of `a_code` by
/// congruence, i.e. `span{P^T M P} = span(a_code)`.
pub fn congruence_check(
    a_code: &QuadRelCode,
    b_code: &QuadRelCode,
    p: &ExtMatrix,
) -> Result<bool, MatCodeError> {
    assert_eq!(a_code.k(), b_code.k(), "dimension mismatch in congruence_check");
    if p.rank() != p.rows() || p.rows() != b_code.k() {
        return Err(MatCodeError::SingularP);
    }
    let ctx = p.ctx();
    let transformed: Vec<Vec<Felt>> =
        b_code.mats().iter().map(|mat| mat.congruent(p).upper_vec()).collect();
    let originals: Vec<Vec<Felt>> = a_code.mats().iter().map(|mat| mat.upper_vec()).collect();
    let t = ExtMatrix::from_rows(ctx, transformed);
    let o = ExtMatrix::from_rows(ctx, originals);
    Ok(t.row_space_equal(&o))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{keygen, GoppaKeyPair};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn key(m: u32, n: usize, r: usize, seed: u64) -> GoppaKeyPair {
        let ctx = FieldCtx::with_default_modulus(m).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        keygen(&ctx, n, r, &mut rng).unwrap()
    }

    #[test]
    fn sampled_basis_has_frobenius_shape() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for seed in 0..20 {
            let k = key(5, 32, 2, seed);
            let basis = FrobeniusBasis::sample(k.public(), k.ctx(), 2, &mut rng).unwrap();
            assert_eq!(basis.h().rank(), 10);
            let ctx = k.ctx();
            for j in 0..5usize {
                for i in 0..2usize {
                    for col in 0..32 {
                        assert_eq!(
                            basis.h().get(j * 2 + i, col),
                            ctx.frobenius(basis.h().get(i, col), j as u32)
                        );
                    }
                }
            }
            // the sampled basis spans the same code as the extended dual
            let dual = crate::codes::extended_dual(k.public(), ctx);
            assert!(basis.h().row_space_equal(&dual));
            let _ = FrobeniusBasis::from_rows(basis.h().clone(), 2).unwrap();
        }
    }

    #[test]
    fn sampling_fails_on_degenerate_dual() {
        // full-space public code: dual dimension 0 < rm
        let ctx = FieldCtx::with_default_modulus(4).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let public = BinMatrix::identity(10);
        assert!(matches!(
            FrobeniusBasis::sample(&public, &ctx, 2, &mut rng),
            Err(MatCodeError::Exhausted(_))
        ));
    }

    #[test]
    fn relationship_code_dimension_formula() {
        // dim = binom(rm+1, 2) - dim of the square code, on Goppa and random
        let k6 = key(6, 60, 2, 3);
        let basis = FrobeniusBasis::canonical(k6.ctx(), &k6.pair(), 2).unwrap();
        let code = crel_cmat(basis.h());
        let sq = crate::linalg::schur_span(basis.h()).dim();
        assert_eq!(code.dim(), 13 * 12 / 2 - sq);
        assert_eq!(code.dim(), 18);

        let k5 = key(5, 32, 2, 4);
        let basis5 = FrobeniusBasis::canonical(k5.ctx(), &k5.pair(), 2).unwrap();
        let code5 = crel_cmat(basis5.h());
        assert_eq!(code5.dim(), 11 * 10 / 2 - 32);
        assert_eq!(code5.dim(), 23);

        // random extended [60, 12] code reaches the same dimension
        let ctx = FieldCtx::with_default_modulus(6).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let g = loop {
            let cand = BinMatrix::from_fn(48, 60, |_, _| rng.gen_bool(0.5));
            if cand.rank() == 48 {
                break cand;
            }
        };
        let rb = FrobeniusBasis::sample(&g, &ctx, 2, &mut rng).unwrap();
        let rcode = crel_cmat(rb.h());
        let rsq = crate::linalg::schur_span(rb.h()).dim();
        assert_eq!(rcode.dim(), 13 * 12 / 2 - rsq);
    }

    #[test]
    fn membership_basics() {
        let k = key(5, 32, 2, 6);
        let basis = FrobeniusBasis::canonical(k.ctx(), &k.pair(), 2).unwrap();
        assert!(membership_check(&SkewMat::zero(k.ctx(), 10), basis.h()));
        let code = crel_cmat(basis.h());
        for mat in code.mats() {
            assert!(membership_check(mat, basis.h()));
        }
        // the sparse rank-2 member: ones at positions (a=0, b=1) of block l
        for l in 0..5 {
            let t3 = make_type(k.ctx(), 2, &TypeParams::Type3 { a: 0, b: 1, l }, None).unwrap();
            assert!(membership_check(&t3, basis.h()));
            assert_eq!(t3.rank(), 2);
            // corrupting one entry breaks membership
            let mut bad = t3.clone();
            bad.set_pair(l * 2, (l * 2 + 3) % 10, Felt(0b11));
            assert!(!membership_check(&bad, basis.h()));
        }
    }

    #[test]
    fn catalog_types_on_higher_degree_keys() {
        let k = key(5, 32, 6, 7);
        let ctx = k.ctx();
        let sm = k.pair();
        let basis = FrobeniusBasis::canonical(ctx, &sm, 6).unwrap();
        // type 1: a + b = 2c
        let t1 = make_type(ctx, 6, &TypeParams::Type1 { a: 0, b: 4, c: 2, l: 1 }, None).unwrap();
        assert!(membership_check(&t1, basis.h()));
        assert_eq!(t1.rank(), 2);
        // in characteristic 2 the type-1 matrix is the type-3 matrix on (a, b)
        let t3 = make_type(ctx, 6, &TypeParams::Type3 { a: 0, b: 4, l: 1 }, None).unwrap();
        assert_eq!(t1, t3);
        // type 2: a + b = c + d, equals the sum of two type-3 matrices
        let t2 =
            make_type(ctx, 6, &TypeParams::Type2 { a: 0, b: 5, c: 2, d: 3, l: 2 }, None).unwrap();
        assert!(membership_check(&t2, basis.h()));
        assert_eq!(t2.rank(), 4);
        let t3a = make_type(ctx, 6, &TypeParams::Type3 { a: 0, b: 5, l: 2 }, None).unwrap();
        let t3b = make_type(ctx, 6, &TypeParams::Type3 { a: 2, b: 3, l: 2 }, None).unwrap();
        let mut sum = t3a.clone();
        for i in 0..sum.size() {
            for j in (i + 1)..sum.size() {
                let v = ctx.add(sum.get(i, j), t3b.get(i, j));
                if v != sum.get(i, j) {
                    sum.set_pair(i, j, v);
                }
            }
        }
        assert_eq!(t2, sum);
        // type 4 with l=0, u=1: a + 2b = c + 2d, e.g. 0 + 2*2 = 2 + 2*1
        let t4 =
            make_type(ctx, 6, &TypeParams::Type4 { a: 0, b: 2, c: 2, d: 1, l: 0, u: 1 }, None)
                .unwrap();
        assert!(membership_check(&t4, basis.h()));
        assert_eq!(t4.rank(), 4);
        // dependency: for a fixed weighted sum, three type-4 matrices are
        // pairwise sums of each other: 0 + 2*2 = 2 + 2*1 = 4 + 2*0
        let t4b =
            make_type(ctx, 6, &TypeParams::Type4 { a: 0, b: 2, c: 4, d: 0, l: 0, u: 1 }, None)
                .unwrap();
        let t4c =
            make_type(ctx, 6, &TypeParams::Type4 { a: 2, b: 1, c: 4, d: 0, l: 0, u: 1 }, None)
                .unwrap();
        let rows = vec![t4.upper_vec(), t4b.upper_vec(), t4c.upper_vec()];
        assert_eq!(ExtMatrix::from_rows(ctx, rows).rank(), 2);
    }

    #[test]
    fn type5_two_row_examples() {
        let k = key(5, 32, 6, 8);
        let ctx = k.ctx();
        let gamma = k.gamma();
        let basis = FrobeniusBasis::canonical(ctx, &k.pair(), 6).unwrap();
        // first sparse example: shift 1 between consecutive blocks, rows 0 and 1
        let t5 = make_type(
            ctx,
            6,
            &TypeParams::Type5 { u: 1, l: 0, w: 1, assignment: None },
            Some(gamma),
        )
        .unwrap();
        assert!(membership_check(&t5, basis.h()));
        assert_eq!(t5.rank(), 4);
        // block (1, 0): row b=0 carries coefficients 0..4 at columns 1..5,
        // row b=1 carries coefficients 5, 6 at columns 4, 5
        let r = 6;
        let expected_row0 = [
            Felt::ZERO,
            gamma.coeff(0),
            gamma.coeff(1),
            gamma.coeff(2),
            gamma.coeff(3),
            gamma.coeff(4),
        ];
        let expected_row1 =
            [Felt::ZERO, Felt::ZERO, Felt::ZERO, Felt::ZERO, gamma.coeff(5), gamma.coeff(6)];
        for c in 0..r {
            assert_eq!(t5.get(r, c), expected_row0[c]);
            assert_eq!(t5.get(r + 1, c), expected_row1[c]);
        }
        // second sparse example: gap 2 with squared coefficients on rows 2, 3
        let assignment = vec![
            (0usize, 2usize, gamma.coeff(0)),
            (1, 2, gamma.coeff(1)),
            (2, 2, gamma.coeff(2)),
            (3, 2, gamma.coeff(3)),
            (4, 3, gamma.coeff(4)),
            (5, 3, gamma.coeff(5)),
            (6, 3, gamma.coeff(6)),
        ];
        let t5b = make_type(
            ctx,
            6,
            &TypeParams::Type5 { u: 3, l: 1, w: 4, assignment: Some(assignment) },
            Some(gamma),
        )
        .unwrap();
        assert!(membership_check(&t5b, basis.h()));
        assert_eq!(t5b.rank(), 4);
        // block (3, 1): row b=2 has squared coefficients 0..3 at columns 0..3,
        // row b=3 has squared coefficients 4..6 at columns 0..2
        let sq = |v: Felt| ctx.mul(v, v);
        for c in 0..4 {
            assert_eq!(t5b.get(3 * r + 2, r + c), sq(gamma.coeff(c)));
        }
        for c in 0..3 {
            assert_eq!(t5b.get(3 * r + 3, r + c), sq(gamma.coeff(4 + c)));
        }
    }

    #[test]
    fn type_params_are_validated() {
        let ctx = FieldCtx::with_default_modulus(5).unwrap();
        assert!(matches!(
            make_type(&ctx, 2, &TypeParams::Type1 { a: 0, b: 1, c: 0, l: 0 }, None),
            Err(MatCodeError::BadParams(_))
        ));
        assert!(matches!(
            make_type(&ctx, 6, &TypeParams::Type4 { a: 0, b: 1, c: 1, d: 1, l: 0, u: 1 }, None),
            Err(MatCodeError::BadParams(_))
        ));
        assert!(matches!(
            make_type(&ctx, 2, &TypeParams::Type5 { u: 1, l: 0, w: 0, assignment: None }, None),
            Err(MatCodeError::BadParams(_))
        ));
        // soft bound on the type-4 block gap only warns
        let w = TypeParams::Type4 { a: 0, b: 4, c: 4, d: 3, l: 0, u: 2 };
        let warnings = w.validate(6, 5);
        if let Ok(ws) = warnings {
            assert!(!ws.is_empty() || (0 + 4 * 4) != (4 + 3 * 4));
        }
    }

    #[test]
    fn shift_matrix_and_conjugation() {
        let k = key(5, 32, 2, 9);
        let ctx = k.ctx();
        let s = shift_matrix(ctx, 2, 5);
        assert_eq!(s.mat_mul(&s.transpose()), ExtMatrix::identity(ctx, 10));
        // H^(2) = S H for Frobenius-shaped bases
        let basis = FrobeniusBasis::canonical(ctx, &k.pair(), 2).unwrap();
        assert_eq!(basis.h().frobenius(1), s.mat_mul(basis.h()));
        // the block remap agrees with the explicit product S^T M^(2) S
        let code = crel_cmat(basis.h());
        for mat in code.mats().iter().take(5) {
            let explicit =
                SkewMat::new(s.transpose().mat_mul(&mat.mat().frobenius(1)).mat_mul(&s)).unwrap();
            let remapped = frobenius_conjugate(mat, 2);
            assert_eq!(explicit, remapped);
            // stability: the image is again a member
            assert!(membership_check(&remapped, basis.h()));
        }
        // m-fold application is the identity
        let mat = &code.mats()[0];
        let mut roundtrip = mat.clone();
        for _ in 0..5 {
            roundtrip = frobenius_conjugate(&roundtrip, 2);
        }
        assert_eq!(&roundtrip, mat);
    }

    #[test]
    fn congruence_between_canonical_and_sampled() {
        let k = key(5, 28, 2, 10);
        let ctx = k.ctx();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let ha = FrobeniusBasis::canonical(ctx, &k.pair(), 2).unwrap();
        let hb = FrobeniusBasis::sample(k.public(), ctx, 2, &mut rng).unwrap();
        let a_code = crel_cmat(ha.h());
        let b_code = crel_cmat(hb.h());
        assert_eq!(a_code.dim(), b_code.dim());
        // recover P with H_B = P H_A
        let p = ha.h().transpose().solve(&hb.h().transpose()).unwrap().transpose();
        assert_eq!(p.mat_mul(ha.h()), *hb.h());
        assert!(congruence_check(&a_code, &b_code, &p).unwrap());
        // identity maps a code to itself
        let id = ExtMatrix::identity(ctx, 10);
        assert!(congruence_check(&a_code, &a_code, &id).unwrap());
        // a random invertible P almost surely fails
        let q = loop {
            let cand = ExtMatrix::from_fn(ctx, 10, 10, |_, _| ctx.random_element(&mut rng));
            if cand.rank() == 10 {
                break cand;
            }
        };
        assert!(!congruence_check(&a_code, &b_code, &q).unwrap());
        // singular P is rejected
        let z = ExtMatrix::zeros(ctx, 10, 10);
        assert!(matches!(congruence_check(&a_code, &b_code, &z), Err(MatCodeError::SingularP)));
    }

    #[test]
    fn type5_split_assignments_stay_members() {
        // splitting a coefficient across two admissible rows keeps membership
        let k = key(6, 40, 4, 12);
        let ctx = k.ctx();
        let basis = FrobeniusBasis::canonical(ctx, &k.pair(), 4).unwrap();
        let gamma = k.gamma();
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        let sets = type5_sets(4, 2, 1);
        let mut assignment = Vec::new();
        for (a, ba) in sets.iter().enumerate() {
            if ba.len() >= 2 {
                let t = ctx.random_element(&mut rng);
                assignment.push((a, ba[0], t));
                assignment.push((a, ba[1], ctx.add(gamma.coeff(a), t)));
            } else {
                assignment.push((a, ba[0], gamma.coeff(a)));
            }
        }
        let t5 = make_type(
            ctx,
            4,
            &TypeParams::Type5 { u: 1, l: 0, w: 1, assignment: Some(assignment) },
            Some(gamma),
        )
        .unwrap();
        assert!(membership_check(&t5, basis.h()));
    }
}
