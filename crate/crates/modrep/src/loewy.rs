//! Socle and radical series.
//!
//! # Method
//!
//! With a full list of pairwise non-isomorphic composition factors in
//! hand, both series reduce to hom spaces against simples, which the
//! solver handles through cyclic routes regardless of how large the
//! module is:
//!
//! * `soc(m)` is the joint image of all maps out of simples, and the
//!   multiplicity of `S` in it is exactly `dim Hom(S, m)`;
//! * `rad(m)` is the joint kernel of all maps onto simples (one
//!   nullspace of the horizontally stacked maps), and the multiplicity
//!   of `S` in the head is exactly `dim Hom(m, S)`.
//!
//! Series iterate these on quotients and submodules respectively. An
//! incomplete simples list cannot fail silently: the relevant layer
//! stops shrinking and the iteration reports it as a validation error.

use ffla::{Echelonizer, FqMatrix};

use crate::chop::label_of;
use crate::homs::hom_space;
use crate::{FactorMultiset, GModule, ModrepError, Result};

/// Semisimple layers of a module, with the witnessing filtration.
pub struct LoewySeries {
    /// Factor multiset per layer. For the radical series the first
    /// layer is the head; for the socle series it is the socle.
    pub layers: Vec<FactorMultiset>,
    /// Bases in module coordinates. For the socle series entry `i`
    /// spans the `(i+1)`-st socle (ascending, last is everything); for
    /// the radical series entry `i` spans the `(i+1)`-st radical
    /// (descending, the zero term is omitted).
    pub filtration: Vec<FqMatrix>,
}

impl LoewySeries {
    /// Loewy length.
    #[must_use]
    pub fn len(&self) -> usize {
        self.layers.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }
}

/// Basis of the socle of `m`.
///
/// `simples` must contain one representative of every composition
/// factor of `m`, pairwise non-isomorphic; extras are harmless.
///
/// # Errors
///
/// Hom-space failures, plus [`ModrepError::Validation`] if no simple
/// maps into a nonzero module (an incomplete list).
pub fn socle(m: &GModule, simples: &[GModule], seed: u64) -> Result<FqMatrix> {
    let (basis, _) = socle_with_layer(m, simples, seed)?;
    Ok(basis)
}

/// Basis of the radical of `m` (same contract as [`socle`]).
///
/// # Errors
///
/// As for [`socle`].
pub fn radical(m: &GModule, simples: &[GModule], seed: u64) -> Result<FqMatrix> {
    let (basis, _) = radical_with_layer(m, simples, seed)?;
    Ok(basis)
}

/// Multiset of the head `m / rad(m)` (same contract as [`socle`]).
///
/// # Errors
///
/// As for [`socle`].
pub fn head(m: &GModule, simples: &[GModule], seed: u64) -> Result<FactorMultiset> {
    let (_, layer) = radical_with_layer(m, simples, seed)?;
    Ok(layer)
}

fn socle_with_layer(
    m: &GModule,
    simples: &[GModule],
    seed: u64,
) -> Result<(FqMatrix, FactorMultiset)> {
    let mut layer = FactorMultiset::new();
    let mut ech = Echelonizer::new(m.field(), m.dim());
    for s in simples {
        let homs = hom_space(s, m, seed)?;
        if homs.is_empty() {
            continue;
        }
        layer.insert(label_of(s)?, homs.len());
        for f in &homs {
            for i in 0..f.nrows() {
                ech.insert(&f.row(i))?;
            }
        }
    }
    if ech.rank() == 0 && m.dim() > 0 {
        return Err(ModrepError::Validation(
            "no simple maps into a nonzero module; the simples list is incomplete".into(),
        ));
    }
    Ok((ech.basis_matrix(), layer))
}

fn radical_with_layer(
    m: &GModule,
    simples: &[GModule],
    seed: u64,
) -> Result<(FqMatrix, FactorMultiset)> {
    let mut layer = FactorMultiset::new();
    let mut stacked: Option<FqMatrix> = None;
    for s in simples {
        let homs = hom_space(m, s, seed)?;
        if homs.is_empty() {
            continue;
        }
        layer.insert(label_of(s)?, homs.len());
        for f in homs {
            stacked = Some(match stacked {
                None => f,
                Some(k) => k.hstack(&f)?,
            });
        }
    }
    let Some(k) = stacked else {
        if m.dim() == 0 {
            return Ok((FqMatrix::zero(m.field(), 0, 0)?, layer));
        }
        return Err(ModrepError::Validation(
            "a nonzero module maps onto no simple; the simples list is incomplete".into(),
        ));
    };
    let basis = k.transpose().nullspace();
    Ok((basis, layer))
}

/// Ascending socle series of `m` (same contract as [`socle`]).
///
/// # Errors
///
/// As for [`socle`].
pub fn socle_series(m: &GModule, simples: &[GModule], seed: u64) -> Result<LoewySeries> {
    let mut layers = Vec::new();
    let mut filtration: Vec<FqMatrix> = Vec::new();
    let mut cur = m.clone();
    let mut lift = FqMatrix::identity(m.field(), m.dim())?;
    while cur.dim() > 0 {
        let (soc_basis, layer) = socle_with_layer(&cur, simples, seed)?;
        let r = soc_basis.nrows();
        layers.push(layer);
        let lifted = soc_basis.multiply(&lift)?;
        let cumulative = match filtration.last() {
            None => lifted,
            Some(prev) => prev.vstack(&lifted)?,
        };
        filtration.push(cumulative);
        if r == cur.dim() {
            break;
        }
        let (quo, comp) = cur.quotient(&soc_basis)?;
        lift = comp.multiply(&lift)?;
        cur = quo;
    }
    if let Some(last) = filtration.last() {
        assert_eq!(last.nrows(), m.dim(), "socle series must exhaust the module");
    }
    Ok(LoewySeries { layers, filtration })
}

/// Descending radical series of `m` (same contract as [`socle`]).
///
/// # Errors
///
/// As for [`socle`], plus [`ModrepError::Validation`] if the radical
/// stops shrinking before reaching zero.
pub fn radical_series(m: &GModule, simples: &[GModule], seed: u64) -> Result<LoewySeries> {
    let mut layers = Vec::new();
    let mut filtration = Vec::new();
    let mut cur = m.clone();
    let mut into_m = FqMatrix::identity(m.field(), m.dim())?;
    while cur.dim() > 0 {
        let (rad_basis, layer) = radical_with_layer(&cur, simples, seed)?;
        let r = rad_basis.nrows();
        layers.push(layer);
        if r == cur.dim() {
            return Err(ModrepError::Validation(
                "radical stopped shrinking; the simples list is incomplete".into(),
            ));
        }
        if r == 0 {
            break;
        }
        let rad_in_m = rad_basis.multiply(&into_m)?;
        filtration.push(rad_in_m.clone());
        cur = cur.submodule(&rad_basis)?;
        into_m = rad_in_m;
    }
    let head_total: usize = layers.iter().map(FactorMultiset::total_dim).sum();
    assert_eq!(head_total, m.dim(), "radical layers must account for every dimension");
    Ok(LoewySeries { layers, filtration })
}
