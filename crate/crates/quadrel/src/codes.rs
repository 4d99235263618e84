//! Generalized Reed-Solomon, alternant and binary Goppa code constructions,
//! plus key generation and the text formats for key material.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::gf2m::{random_squarefree_poly, Felt, FieldCtx, Poly};
use crate::linalg::{extend_scalars, schur, subfield_subcode, BinMatrix, ExtMatrix};

#[derive(Debug, Error)]
pub enum CodeError {
    #[error("support entries at {0} and {1} coincide")]
    RepeatedSupport(usize, usize),
    #[error("multiplier entry {0} is zero")]
    ZeroMultiplier(usize),
    #[error("degree {r} exceeds length {n}")]
    BadDegree { r: usize, n: usize },
    #[error("Goppa polynomial vanishes on support entry {0}")]
    GammaRoot(usize),
    #[error("Goppa polynomial must be square-free")]
    NotSquareFree,
    #[error("exhausted keygen budget ({0} draws)")]
    Exhausted(usize),
    #[error("basis vectors are linearly dependent (degenerate instance)")]
    RankDeficient,
    #[error("parameters out of range: {0}")]
    BadParams(String),
    #[error("malformed key text: {0}")]
    Parse(String),
}

/// A support/multiplier pair: pairwise distinct `x`, nonzero `y`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SupportMultiplier {
    x: Vec<Felt>,
    y: Vec<Felt>,
}

impl SupportMultiplier {
    pub fn new(x: Vec<Felt>, y: Vec<Felt>) -> Result<SupportMultiplier, CodeError> {
        assert_eq!(x.len(), y.len(), "dimension mismatch between support and multiplier");
        for i in 0..x.len() {
            for j in (i + 1)..x.len() {
                if x[i] == x[j] {
                    return Err(CodeError::RepeatedSupport(i, j));
                }
            }
        }
        if let Some(i) = y.iter().position(|v| v.is_zero()) {
            return Err(CodeError::ZeroMultiplier(i));
        }
        Ok(SupportMultiplier { x, y })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[Felt] {
        &self.x
    }

    pub fn y(&self) -> &[Felt] {
        &self.y
    }
}

/// Generator matrix of `GRS_r(x, y)`: row `i` is `x^i * y` componentwise.
pub fn grs_generator(ctx: &FieldCtx, sm: &SupportMultiplier, r: usize) -> ExtMatrix {
    assert!(r <= sm.n(), "GRS dimension exceeds length");
    let mut out = ExtMatrix::zeros(ctx, r, sm.n());
    let mut cur = sm.y.clone();
    for i in 0..r {
        for (j, &v) in cur.iter().enumerate() {
            out.set(i, j, v);
        }
        cur = schur(ctx, &cur, &sm.x);
    }
    out
}

/// The dual multiplier: `GRS_r(x, y)^perp = GRS_{n-r}(x, y_perp)` with
/// `y_perp_i = 1 / (pi'(x_i) y_i)` and `pi'(x_i) = prod_{j != i} (x_i - x_j)`.
pub fn dual_multiplier(ctx: &FieldCtx, sm: &SupportMultiplier) -> Vec<Felt> {
    let n = sm.n();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut pi = Felt::ONE;
        for j in 0..n {
            if j != i {
                pi = ctx.mul(pi, ctx.add(sm.x[i], sm.x[j]));
            }
        }
        out.push(ctx.inv(ctx.mul(pi, sm.y[i])).unwrap());
    }
    out
}

/// Alternant code of degree `r`: the binary subfield subcode of
/// `GRS_r(x, y)^perp`, returned as a generator matrix in RREF.
pub fn alternant_code(ctx: &FieldCtx, sm: &SupportMultiplier, r: usize) -> BinMatrix {
    subfield_subcode(&grs_generator(ctx, sm, r))
}

/// Binary Goppa code `Goppa(x, Gamma) = Alt_r(x, 1/Gamma(x))`.
pub fn goppa_code(ctx: &FieldCtx, x: &[Felt], gamma: &Poly) -> Result<BinMatrix, CodeError> {
    let sm = goppa_pair(ctx, x, gamma)?;
    Ok(alternant_code(ctx, &sm, gamma.degree().unwrap_or(0)))
}

/// The canonical pair of a Goppa instance, `(x, 1/Gamma(x))`.
pub fn goppa_pair(ctx: &FieldCtx, x: &[Felt], gamma: &Poly) -> Result<SupportMultiplier, CodeError> {
    let mut y = Vec::with_capacity(x.len());
    for (i, &xi) in x.iter().enumerate() {
        let g = gamma.eval(ctx, xi);
        if g.is_zero() {
            return Err(CodeError::GammaRoot(i));
        }
        y.push(ctx.inv(g).unwrap());
    }
    SupportMultiplier::new(x.to_vec(), y)
}

/// For square-free binary Goppa polynomials the code coincides with the
/// degree-`2r` alternant code for the squared multiplier. Exposed as a
/// self-test; the equality must hold on every valid instance.
pub fn goppa_square_identity(ctx: &FieldCtx, x: &[Felt], gamma: &Poly) -> Result<bool, CodeError> {
    if !gamma.is_squarefree(ctx) {
        return Err(CodeError::NotSquareFree);
    }
    let r = gamma.degree().unwrap();
    let base = goppa_code(ctx, x, gamma)?;
    let sm = goppa_pair(ctx, x, gamma)?;
    let ysq: Vec<Felt> = sm.y().iter().map(|&v| ctx.mul(v, v)).collect();
    let sm2 = SupportMultiplier::new(x.to_vec(), ysq).unwrap();
    Ok(base.row_space_equal(&alternant_code(ctx, &sm2, 2 * r)))
}

/// Ordered `rm x n` matrix whose rows are
/// `y, xy, ..., x^(r-1) y` followed by the blockwise Frobenius images
/// `(x^a y)^(2^l)` for `l = 1..m-1`. Spans the extension of scalars of the
/// dual alternant code; fails on degenerate instances where the rows are
/// dependent.
pub fn canonical_basis(
    ctx: &FieldCtx,
    sm: &SupportMultiplier,
    r: usize,
) -> Result<ExtMatrix, CodeError> {
    let m = ctx.m() as usize;
    let base = grs_generator(ctx, sm, r);
    let mut rows = Vec::with_capacity(r * m);
    for l in 0..m {
        for a in 0..r {
            rows.push(
                base.row(a)
                    .iter()
                    .map(|&v| ctx.frobenius(v, l as u32))
                    .collect::<Vec<_>>(),
            );
        }
    }
    let h = ExtMatrix::from_rows(ctx, rows);
    if h.rank() != r * m {
        return Err(CodeError::RankDeficient);
    }
    Ok(h)
}

/// A generated Goppa key: the secret support and polynomial, the derived
/// multiplier, and the public binary generator matrix in RREF.
#[derive(Clone, Debug)]
pub struct GoppaKeyPair {
    ctx: FieldCtx,
    n: usize,
    r: usize,
    support: Vec<Felt>,
    gamma: Poly,
    public: BinMatrix,
}

impl GoppaKeyPair {
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn support(&self) -> &[Felt] {
        &self.support
    }

    pub fn gamma(&self) -> &Poly {
        &self.gamma
    }

    pub fn public(&self) -> &BinMatrix {
        &self.public
    }

    /// The secret pair `(x, 1/Gamma(x))`.
    pub fn pair(&self) -> SupportMultiplier {
        goppa_pair(&self.ctx, &self.support, &self.gamma).unwrap()
    }

    pub fn secret_to_text(&self) -> String {
        let x: Vec<String> = self.support.iter().map(|v| v.to_hex()).collect();
        let g: Vec<String> = (0..=self.r).map(|d| self.gamma.coeff(d).to_hex()).collect();
        format!("{}\nx: {}\ngamma: {}\n", self.ctx.header(), x.join(" "), g.join(" "))
    }

    pub fn secret_from_text(s: &str) -> Result<GoppaKeyPair, CodeError> {
        let (ctx, x, gamma) = parse_secret_text(s)?;
        let public = goppa_code(&ctx, &x, &gamma)?;
        let r = gamma.degree().ok_or_else(|| CodeError::Parse("gamma is zero".into()))?;
        Ok(GoppaKeyPair { ctx, n: x.len(), r, support: x, gamma, public })
    }
}

fn parse_secret_text(s: &str) -> Result<(FieldCtx, Vec<Felt>, Poly), CodeError> {
    let mut lines = s.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| CodeError::Parse("empty file".into()))?;
    let ctx = FieldCtx::from_header(header).map_err(|e| CodeError::Parse(e.to_string()))?;
    let x = parse_felt_line(lines.next(), "x")?;
    let g = parse_felt_line(lines.next(), "gamma")?;
    Ok((ctx, x, Poly::from_coeffs(g)))
}

pub(crate) fn parse_felt_line(line: Option<&str>, tag: &str) -> Result<Vec<Felt>, CodeError> {
    let line = line.ok_or_else(|| CodeError::Parse(format!("missing `{tag}:` line")))?;
    let rest = line
        .trim()
        .strip_prefix(&format!("{tag}:"))
        .ok_or_else(|| CodeError::Parse(format!("expected `{tag}:` line, got `{line}`")))?;
    rest.split_whitespace()
        .map(|v| Felt::from_hex(v).map_err(|e| CodeError::Parse(e.to_string())))
        .collect()
}

/// Text form of a bare support/multiplier pair.
pub fn pair_to_text(ctx: &FieldCtx, sm: &SupportMultiplier) -> String {
    let x: Vec<String> = sm.x().iter().map(|v| v.to_hex()).collect();
    let y: Vec<String> = sm.y().iter().map(|v| v.to_hex()).collect();
    format!("{}\nx: {}\ny: {}\n", ctx.header(), x.join(" "), y.join(" "))
}

pub fn pair_from_text(s: &str) -> Result<(FieldCtx, SupportMultiplier), CodeError> {
    let mut lines = s.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| CodeError::Parse("empty file".into()))?;
    let ctx = FieldCtx::from_header(header).map_err(|e| CodeError::Parse(e.to_string()))?;
    let x = parse_felt_line(lines.next(), "x")?;
    let y = parse_felt_line(lines.next(), "y")?;
    Ok((ctx.clone(), SupportMultiplier::new(x, y)?))
}

const KEYGEN_BUDGET: usize = 64;

/// Draws a fresh key: a uniformly random support of `n` distinct elements and
/// a square-free degree-`r` polynomial with no root on the support. Draws are
/// rejected until the public code has the generic dimension `n - rm` (and the
/// canonical basis has full rank `rm`), since the attack machinery assumes
/// generic instances.
pub fn keygen(
    ctx: &FieldCtx,
    n: usize,
    r: usize,
    rng: &mut impl Rng,
) -> Result<GoppaKeyPair, CodeError> {
    let m = ctx.m() as usize;
    if n > ctx.size() {
        return Err(CodeError::BadParams(format!("n={n} exceeds field size {}", ctx.size())));
    }
    if r * m >= n {
        return Err(CodeError::BadParams(format!("rm={} must be below n={n}", r * m)));
    }
    for _ in 0..KEYGEN_BUDGET {
        let mut all: Vec<Felt> = ctx.elements().collect();
        all.shuffle(rng);
        let support: Vec<Felt> = all.into_iter().take(n).collect();
        let Ok(gamma) = random_squarefree_poly(ctx, r, rng, &support) else {
            continue;
        };
        let public = goppa_code(ctx, &support, &gamma)?;
        if public.rank() != n - r * m {
            continue;
        }
        let sm = goppa_pair(ctx, &support, &gamma)?;
        if canonical_basis(ctx, &sm, r).is_err() {
            continue;
        }
        return Ok(GoppaKeyPair { ctx: ctx.clone(), n, r, support, gamma, public });
    }
    Err(CodeError::Exhausted(KEYGEN_BUDGET))
}

/// Binary generator matrix of the extension-of-scalars dual of a public
/// code: the kernel rows generate the dual over `GF(2)`, and the same matrix
/// generates it over any extension.
pub fn dual_basis_bin(public: &BinMatrix) -> BinMatrix {
    public.right_kernel()
}

/// The dual of the public code lifted to `GF(2^m)`.
pub fn extended_dual(public: &BinMatrix, ctx: &FieldCtx) -> ExtMatrix {
    extend_scalars(&dual_basis_bin(public), ctx)
}
