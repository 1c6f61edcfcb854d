//! Brute-force oracle: builds string and band modules as explicit
//! exact-rational quiver representations and computes hom-space dimensions
//! by solving intertwiner systems. Independent of the word combinatorics it
//! cross-checks.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::json;
use thiserror::Error;

use crate::matrix::{scalar_to_string, QMatrix, Scalar};
use crate::quiver::{Arrow, ArrowId, Presentation, VertexId, Walk};
use crate::words::{Band, StringWord};

#[derive(Debug, Error)]
pub enum RepError {
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("band multiplicity must be positive")]
    ZeroMultiplicity,
    #[error("matrix for arrow `{arrow}` has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    ShapeMismatch {
        arrow: ArrowId,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("representation is missing arrow `{0}`")]
    MissingArrow(ArrowId),
}

/// Where a representation came from; fixes the basis layout.
#[derive(Clone, Debug)]
pub enum Provenance {
    String(Walk),
    Band {
        band: Band,
        lambda: Scalar,
        mult: usize,
    },
}

/// Per-vertex dimensions plus per-arrow exact matrices mapping the source
/// space to the target space (column-vector convention).
#[derive(Clone, Debug)]
pub struct Representation {
    pub dims: BTreeMap<VertexId, usize>,
    pub mats: BTreeMap<ArrowId, QMatrix>,
    pub provenance: Provenance,
}

impl Representation {
    pub fn dim(&self, v: &VertexId) -> usize {
        self.dims.get(v).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn mat(&self, a: &ArrowId) -> Option<&QMatrix> {
        self.mats.get(a)
    }
}

/// Visit sequence of a walk: the vertices met along the letters.
fn walk_visits(pres: &Presentation, walk: &Walk) -> Vec<VertexId> {
    match walk {
        Walk::Trivial(v) => vec![v.clone()],
        Walk::Word(letters) => {
            let mut visits = Vec::with_capacity(letters.len() + 1);
            visits.push(pres.quiver.letter_source(&letters[0]));
            for l in letters {
                visits.push(pres.quiver.letter_target(l));
            }
            visits
        }
    }
}

fn empty_mats(pres: &Presentation, dims: &BTreeMap<VertexId, usize>) -> BTreeMap<ArrowId, QMatrix> {
    pres.quiver
        .arrows
        .iter()
        .map(|a: &Arrow| {
            let rows = dims.get(&a.target).copied().unwrap_or(0);
            let cols = dims.get(&a.source).copied().unwrap_or(0);
            (a.id.clone(), QMatrix::zero(rows, cols))
        })
        .collect()
}

/// The string module: one basis vector per visit, each letter linking its
/// two visits by an identity entry in its arrow's matrix.
pub fn build_string_module(pres: &Presentation, w: &StringWord) -> Representation {
    let visits = walk_visits(pres, w.walk());
    let mut dims: BTreeMap<VertexId, usize> = pres
        .quiver
        .vertices
        .iter()
        .map(|v| (v.clone(), 0))
        .collect();
    // slot of each visit within its vertex, in visit order
    let mut slot = Vec::with_capacity(visits.len());
    for v in &visits {
        let s = dims.get_mut(v).expect("visit at foreign vertex");
        slot.push(*s);
        *s += 1;
    }
    let mut mats = empty_mats(pres, &dims);
    for (i, l) in w.walk().letters().iter().enumerate() {
        let m = mats.get_mut(&l.arrow).unwrap();
        if l.is_direct() {
            m.set(slot[i + 1], slot[i], Scalar::one());
        } else {
            m.set(slot[i], slot[i + 1], Scalar::one());
        }
    }
    Representation {
        dims,
        mats,
        provenance: Provenance::String(w.walk().clone()),
    }
}

fn jordan_block(n: usize, lambda: &Scalar) -> QMatrix {
    let mut j = QMatrix::zero(n, n);
    for i in 0..n {
        j.set(i, i, lambda.clone());
        if i + 1 < n {
            j.set(i, i + 1, Scalar::one());
        }
    }
    j
}

/// The band module `M(b, λ, n)`: each visit carries an `n`-dimensional
/// block; every letter but the last links its visits by an identity block,
/// and the last letter carries the Jordan block of eigenvalue `λ` (installed
/// as its inverse on the arrow when the last letter is traversed
/// backwards, so the arrow matrix maps along the arrow's direction).
pub fn build_band_module(
    pres: &Presentation,
    b: &Band,
    lambda: &Scalar,
    n: usize,
) -> Result<Representation, RepError> {
    if lambda.is_zero() {
        return Err(RepError::ZeroLambda);
    }
    if n == 0 {
        return Err(RepError::ZeroMultiplicity);
    }
    let t = b.len();
    let visits: Vec<VertexId> = (0..t)
        .map(|i| pres.quiver.letter_source(b.letter_at(i as isize)))
        .collect();
    let mut dims: BTreeMap<VertexId, usize> = pres
        .quiver
        .vertices
        .iter()
        .map(|v| (v.clone(), 0))
        .collect();
    let mut block_start = Vec::with_capacity(t);
    for v in &visits {
        let s = dims.get_mut(v).expect("visit at foreign vertex");
        block_start.push(*s);
        *s += n;
    }
    let mut mats = empty_mats(pres, &dims);
    let set_block = |m: &mut QMatrix, row0: usize, col0: usize, block: &QMatrix| {
        for r in 0..block.rows() {
            for c in 0..block.cols() {
                m.set(row0 + r, col0 + c, block.get(r, c).clone());
            }
        }
    };
    let identity = QMatrix::identity(n);
    let jordan = jordan_block(n, lambda);
    for j in 0..t {
        let l = b.letter_at(j as isize);
        let from = block_start[j];
        let to = block_start[(j + 1) % t];
        let last = j == t - 1;
        let m = mats.get_mut(&l.arrow).unwrap();
        if l.is_direct() {
            let block = if last { &jordan } else { &identity };
            set_block(m, to, from, block);
        } else {
            let inv;
            let block = if last {
                inv = jordan
                    .inverse()
                    .expect("Jordan block with nonzero eigenvalue is invertible");
                &inv
            } else {
                &identity
            };
            set_block(m, from, to, block);
        }
    }
    Ok(Representation {
        dims,
        mats,
        provenance: Provenance::Band {
            band: b.clone(),
            lambda: lambda.clone(),
            mult: n,
        },
    })
}

/// True iff every relation path evaluates to the zero matrix.
pub fn verify_representation(pres: &Presentation, rep: &Representation) -> Result<bool, RepError> {
    for a in &pres.quiver.arrows {
        let m = rep
            .mat(&a.id)
            .ok_or_else(|| RepError::MissingArrow(a.id.clone()))?;
        let (er, ec) = (rep.dim(&a.target), rep.dim(&a.source));
        if m.rows() != er || m.cols() != ec {
            return Err(RepError::ShapeMismatch {
                arrow: a.id.clone(),
                rows: m.rows(),
                cols: m.cols(),
                expected_rows: er,
                expected_cols: ec,
            });
        }
    }
    for rel in &pres.relations {
        let mut acc: Option<QMatrix> = None;
        for a in &rel.0 {
            let m = rep
                .mat(a)
                .ok_or_else(|| RepError::MissingArrow(a.clone()))?;
            acc = Some(match acc {
                None => m.clone(),
                Some(prev) => m.mul(&prev).map_err(|_| RepError::ShapeMismatch {
                    arrow: a.clone(),
                    rows: m.rows(),
                    cols: m.cols(),
                    expected_rows: 0,
                    expected_cols: 0,
                })?,
            });
        }
        if let Some(product) = acc {
            if !product.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A homomorphism of representations: one matrix per vertex.
#[derive(Clone, Debug)]
pub struct HomElement {
    pub blocks: BTreeMap<VertexId, QMatrix>,
}

impl HomElement {
    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(QMatrix::is_zero)
    }

    /// Injective at every vertex.
    pub fn is_injective(&self) -> bool {
        self.blocks.values().all(|m| m.rank() == m.cols())
    }

    /// Surjective at every vertex.
    pub fn is_surjective(&self) -> bool {
        self.blocks.values().all(|m| m.rank() == m.rows())
    }

    /// Invertible at every vertex.
    pub fn is_isomorphism(&self) -> bool {
        self.blocks
            .values()
            .all(|m| m.rows() == m.cols() && m.rank() == m.rows())
    }

    pub fn compose(&self, inner: &HomElement) -> HomElement {
        let blocks = self
            .blocks
            .iter()
            .map(|(v, outer)| {
                let f = inner
                    .blocks
                    .get(v)
                    .expect("hom elements over the same quiver");
                (v.clone(), outer.mul(f).expect("composable hom blocks"))
            })
            .collect();
        HomElement { blocks }
    }

    pub fn scaled_add(&self, coeff: &Scalar, other: &HomElement) -> HomElement {
        let blocks = self
            .blocks
            .iter()
            .map(|(v, m)| {
                let o = &other.blocks[v];
                let mut out = QMatrix::zero(m.rows(), m.cols());
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        out.set(r, c, m.get(r, c) + coeff * o.get(r, c));
                    }
                }
                (v.clone(), out)
            })
            .collect();
        HomElement { blocks }
    }

    /// JSON form: per-vertex matrices of exact rational strings.
    pub fn to_json(&self) -> serde_json::Value {
        let parts: Vec<serde_json::Value> = self
            .blocks
            .iter()
            .map(|(v, m)| {
                let entries: Vec<Vec<String>> = (0..m.rows())
                    .map(|r| (0..m.cols()).map(|c| scalar_to_string(m.get(r, c))).collect())
                    .collect();
                json!({"vertex": v.to_string(), "rows": m.rows(), "cols": m.cols(), "entries": entries})
            })
            .collect();
        serde_json::Value::Array(parts)
    }
}

/// Basis of the space of homomorphisms `A -> B`: exact nullspace of the
/// intertwiner system `f_target(α) · A(α) = B(α) · f_source(α)`.
pub fn hom_basis(
    pres: &Presentation,
    a: &Representation,
    b: &Representation,
) -> Result<Vec<HomElement>, RepError> {
    // variable layout: vertices in quiver order, row-major within a vertex
    let verts = &pres.quiver.vertices;
    let mut offsets = BTreeMap::new();
    let mut total = 0usize;
    for v in verts {
        offsets.insert(v.clone(), total);
        total += a.dim(v) * b.dim(v);
    }
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for arrow in &pres.quiver.arrows {
        let ma = a
            .mat(&arrow.id)
            .ok_or_else(|| RepError::MissingArrow(arrow.id.clone()))?;
        let mb = b
            .mat(&arrow.id)
            .ok_or_else(|| RepError::MissingArrow(arrow.id.clone()))?;
        let (s, t) = (&arrow.source, &arrow.target);
        let (das, dat) = (a.dim(s), a.dim(t));
        let (dbs, dbt) = (b.dim(s), b.dim(t));
        if ma.rows() != dat || ma.cols() != das || mb.rows() != dbt || mb.cols() != dbs {
            return Err(RepError::ShapeMismatch {
                arrow: arrow.id.clone(),
                rows: ma.rows(),
                cols: ma.cols(),
                expected_rows: dat,
                expected_cols: das,
            });
        }
        // equation block: (f_t · A(α) - B(α) · f_s)[i][j] = 0
        for i in 0..dbt {
            for j in 0..das {
                let mut row = vec![Scalar::zero(); total];
                for k in 0..dat {
                    let coeff = ma.get(k, j);
                    if !coeff.is_zero() {
                        row[offsets[t] + i * dat + k] += coeff.clone();
                    }
                }
                for k in 0..dbs {
                    let coeff = mb.get(i, k);
                    if !coeff.is_zero() {
                        row[offsets[s] + k * das + j] -= coeff.clone();
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let system = if rows.is_empty() {
        QMatrix::zero(0, total)
    } else {
        QMatrix::from_rows(rows)
    };
    let basis = system.nullspace_basis();
    Ok(basis
        .into_iter()
        .map(|x| {
            let blocks = verts
                .iter()
                .map(|v| {
                    let (da, db) = (a.dim(v), b.dim(v));
                    let mut m = QMatrix::zero(db, da);
                    for i in 0..db {
                        for j in 0..da {
                            m.set(i, j, x[offsets[v] + i * da + j].clone());
                        }
                    }
                    (v.clone(), m)
                })
                .collect();
            HomElement { blocks }
        })
        .collect())
}

pub fn hom_dim(
    pres: &Presentation,
    a: &Representation,
    b: &Representation,
) -> Result<usize, RepError> {
    Ok(hom_basis(pres, a, b)?.len())
}

/// A module is a brick iff its endomorphism space is one-dimensional.
pub fn is_brick_oracle(pres: &Presentation, a: &Representation) -> Result<bool, RepError> {
    Ok(hom_dim(pres, a, a)? == 1)
}

/// Deterministic search through small combinations of a hom basis for an
/// element satisfying `pred`: single elements, the plain sum, then
/// geometric weightings.
pub fn search_combinations(
    basis: &[HomElement],
    pred: impl Fn(&HomElement) -> bool,
) -> Option<HomElement> {
    if basis.is_empty() {
        return None;
    }
    for e in basis {
        if pred(e) {
            return Some(e.clone());
        }
    }
    let mut candidates: Vec<Vec<i64>> = vec![vec![1; basis.len()]];
    let mut geometric = Vec::with_capacity(basis.len());
    let mut w = 1i64;
    for _ in 0..basis.len() {
        geometric.push(w);
        w = w.saturating_mul(3);
    }
    candidates.push(geometric.clone());
    geometric.reverse();
    candidates.push(geometric);
    for coeffs in candidates {
        let mut acc =
            basis[0].scaled_add(&crate::matrix::scalar_from_int(coeffs[0] - 1), &basis[0]);
        for (e, &c) in basis.iter().zip(&coeffs).skip(1) {
            acc = acc.scaled_add(&crate::matrix::scalar_from_int(c), e);
        }
        if pred(&acc) {
            return Some(acc);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::matrix::scalar_from_int;
    use crate::words::{is_band_brick, Band, StringWord};

    fn chained() -> Presentation {
        corpus::chained_kronecker()
    }

    fn dim_of(rep: &Representation, v: &str) -> usize {
        rep.dim(&VertexId::new(v))
    }

    #[test]
    fn string_module_dimensions() {
        let p = chained();
        let m = build_string_module(&p, &StringWord::parse(&p, "c d-").unwrap());
        assert_eq!(
            (dim_of(&m, "1"), dim_of(&m, "2"), dim_of(&m, "3")),
            (0, 2, 1)
        );
        assert_eq!(m.total_dim(), 3);
        assert!(verify_representation(&p, &m).unwrap());

        let simple = build_string_module(&p, &StringWord::trivial(VertexId::new("2")));
        assert_eq!(
            (
                dim_of(&simple, "1"),
                dim_of(&simple, "2"),
                dim_of(&simple, "3")
            ),
            (0, 1, 0)
        );
        assert!(simple.mats.values().all(QMatrix::is_zero));

        let ac = build_string_module(&p, &StringWord::parse(&p, "a c").unwrap());
        assert_eq!(
            (dim_of(&ac, "1"), dim_of(&ac, "2"), dim_of(&ac, "3")),
            (1, 1, 1)
        );
        assert!(verify_representation(&p, &ac).unwrap());
    }

    #[test]
    fn band_module_dimensions() {
        let p = chained();
        let one = scalar_from_int(1);
        let b = Band::parse(&p, "c d-").unwrap();
        let m = build_band_module(&p, &b, &one, 1).unwrap();
        assert_eq!(
            (dim_of(&m, "1"), dim_of(&m, "2"), dim_of(&m, "3")),
            (0, 1, 1)
        );
        assert!(verify_representation(&p, &m).unwrap());

        let long = Band::parse(&p, "a c d- c d- b-").unwrap();
        let m = build_band_module(&p, &long, &one, 1).unwrap();
        assert_eq!(
            (dim_of(&m, "1"), dim_of(&m, "2"), dim_of(&m, "3")),
            (1, 3, 2)
        );
        assert_eq!(m.total_dim(), long.len());
        assert!(verify_representation(&p, &m).unwrap());

        assert!(matches!(
            build_band_module(&p, &b, &scalar_from_int(0), 1),
            Err(RepError::ZeroLambda)
        ));
    }

    #[test]
    fn relation_violation_detected() {
        let p = chained();
        let mut m = build_string_module(&p, &StringWord::parse(&p, "a c").unwrap());
        // force a nonzero a-then-d composite
        let d = m.mats.get_mut(&ArrowId::new("d")).unwrap();
        d.set(0, 0, Scalar::one());
        assert!(!verify_representation(&p, &m).unwrap());
    }

    #[test]
    fn hom_dims_match_expectations() {
        let p = chained();
        let c = build_string_module(&p, &StringWord::parse(&p, "c").unwrap());
        let s2 = build_string_module(&p, &StringWord::trivial(VertexId::new("2")));
        assert_eq!(hom_dim(&p, &c, &s2).unwrap(), 1);

        let one = scalar_from_int(1);
        let two = scalar_from_int(2);
        let b = Band::parse(&p, "c d-").unwrap();
        let m1 = build_band_module(&p, &b, &one, 1).unwrap();
        let m2 = build_band_module(&p, &b, &two, 1).unwrap();
        assert_eq!(hom_dim(&p, &m1, &m2).unwrap(), 0);
        assert_eq!(hom_dim(&p, &m1, &m1).unwrap(), 1);
    }

    #[test]
    fn local_gentle_band_end_dim_two() {
        let g = corpus::two_loop_gentle();
        let b = Band::parse(&g, "x y-").unwrap();
        let m = build_band_module(&g, &b, &scalar_from_int(1), 1).unwrap();
        assert!(verify_representation(&g, &m).unwrap());
        assert_eq!(hom_dim(&g, &m, &m).unwrap(), 2);
        assert!(!is_brick_oracle(&g, &m).unwrap());
        assert!(!is_band_brick(&g, &b));
    }

    #[test]
    fn brick_oracle_examples() {
        let k = corpus::kronecker();
        let ab = Band::parse(&k, "a b-").unwrap();
        let m = build_band_module(&k, &ab, &scalar_from_int(1), 1).unwrap();
        assert!(is_brick_oracle(&k, &m).unwrap());
        let p = chained();
        let simple = build_string_module(&p, &StringWord::trivial(VertexId::new("3")));
        assert!(is_brick_oracle(&p, &simple).unwrap());
    }

    #[test]
    fn jordan_laddering_and_extension_maps() {
        let k = corpus::kronecker();
        let ab = Band::parse(&k, "a b-").unwrap();
        let one = scalar_from_int(1);
        let m1 = build_band_module(&k, &ab, &one, 1).unwrap();
        let m2 = build_band_module(&k, &ab, &one, 2).unwrap();
        let m3 = build_band_module(&k, &ab, &one, 3).unwrap();
        for m in [&m1, &m2, &m3] {
            assert!(verify_representation(&k, m).unwrap());
        }
        assert_eq!(hom_dim(&k, &m1, &m2).unwrap(), 1);
        assert_eq!(hom_dim(&k, &m2, &m1).unwrap(), 1);
        assert_eq!(hom_dim(&k, &m2, &m3).unwrap(), 2);
        assert_eq!(hom_dim(&k, &m2, &m2).unwrap(), 2);

        let up = hom_basis(&k, &m1, &m2).unwrap();
        assert!(search_combinations(&up, HomElement::is_injective).is_some());
        let down = hom_basis(&k, &m2, &m1).unwrap();
        assert!(search_combinations(&down, HomElement::is_surjective).is_some());
    }

    #[test]
    fn basepoint_independence() {
        let p = chained();
        let one = scalar_from_int(1);
        let b = Band::parse(&p, "c d-").unwrap();
        for r in 0..b.len() {
            let m = build_band_module(&p, &b, &one, 1).unwrap();
            let m_rot = build_band_module(&p, &b.rotated(r), &one, 1).unwrap();
            let basis = hom_basis(&p, &m, &m_rot).unwrap();
            assert!(
                search_combinations(&basis, HomElement::is_isomorphism).is_some(),
                "rotation by {r} not isomorphic"
            );
        }
    }

    #[test]
    fn hom_json_shape() {
        let p = chained();
        let c = build_string_module(&p, &StringWord::parse(&p, "c").unwrap());
        let basis = hom_basis(&p, &c, &c).unwrap();
        assert_eq!(basis.len(), 1);
        let v = basis[0].to_json();
        assert!(v.is_array());
        assert_eq!(v.as_array().unwrap().len(), 3);
    }
}
