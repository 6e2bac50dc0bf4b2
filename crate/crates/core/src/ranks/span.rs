//! Integer matrices spanned by translated generators, and the ranks of the
//! submodules they generate inside a window.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;

use super::config::EngineConfig;
use super::presentation::GeneratorList;
use crate::error::Result;
use crate::exactla::{rank_q_with, RankCertificate, SparseIntMatrix};
use crate::groups::{FolnerSet, GroupElement};
use crate::rational::{common_denominator, Rational};

/// A coordinate `(k, s)` of `(ℚΓ)^{1×n}`.
pub(crate) type Coord = (usize, GroupElement);

/// A finitely supported vector in `(ℚΓ)^{1×n}` with integer coefficients.
pub(crate) type SparseVec = Vec<(Coord, BigInt)>;

/// Coefficient vectors of `t·a` for each generator `a` and each `t ∈ shifts`
/// (generator-major). `(t·a)_k` has coefficient `a_{k,u}` at `t·u`.
/// Generators with rational coefficients are first scaled to be integral.
pub(crate) fn translates(gens: &GeneratorList, shifts: &[GroupElement]) -> Vec<SparseVec> {
    let group = gens.group();
    let mut out = Vec::with_capacity(gens.len() * shifts.len());
    for a in gens.vectors() {
        let den = Rational::from_integer(common_denominator(a.iter().flat_map(|e| e.terms().values())));
        let terms: Vec<(usize, &GroupElement, BigInt)> = a
            .iter()
            .enumerate()
            .flat_map(|(k, e)| e.terms().iter().map(move |(u, c)| (k, u, c)))
            .map(|(k, u, c)| (k, u, (c * &den).to_integer()))
            .collect();
        for t in shifts {
            out.push(terms.iter().map(|(k, u, c)| ((*k, group.op(t, u)), c.clone())).collect());
        }
    }
    out
}

/// Stacks blocks of vectors into one sparse integer matrix. Columns are the
/// sorted union of all coordinates that occur.
pub(crate) fn assemble(blocks: &[&[SparseVec]]) -> (SparseIntMatrix, Vec<Coord>) {
    let columns: Vec<Coord> = blocks
        .iter()
        .flat_map(|b| b.iter())
        .flat_map(|v| v.iter().map(|(c, _)| c.clone()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: HashMap<&Coord, usize> = columns.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let rows: usize = blocks.iter().map(|b| b.len()).sum();
    let trip = blocks
        .iter()
        .flat_map(|b| b.iter())
        .enumerate()
        .flat_map(|(r, v)| v.iter().filter(|(_, x)| !x.is_zero()).map(move |(c, x)| (r, c, x.clone())))
        .map(|(r, c, x)| (r, index[c], x));
    let matrix = SparseIntMatrix::from_triplets(rows, columns.len(), trip).expect("indices in range");
    (matrix, columns)
}

/// `rank ⟨W⁻¹A⟩` for an arbitrary finite set `W`.
pub fn span_rank_on(
    gens: &GeneratorList,
    window: &[GroupElement],
    cfg: &EngineConfig,
) -> Result<(usize, RankCertificate)> {
    let group = gens.group();
    let shifts: Vec<GroupElement> = group.inverse_set(window).into_iter().collect();
    let vectors = translates(gens, &shifts);
    let (matrix, _) = assemble(&[&vectors]);
    let cert = rank_q_with(&matrix, &cfg.rank_options(window.len() as u64));
    Ok((cert.rank, cert))
}

/// `rank ⟨F⁻¹A⟩`, the numerator of the submodule density.
pub fn span_rank(gens: &GeneratorList, window: &FolnerSet, cfg: &EngineConfig) -> Result<(usize, RankCertificate)> {
    span_rank_on(gens, window.elements(), cfg)
}

/// `rank⟨F⁻¹A⟩ / |F|`.
pub fn submodule_rank_density(gens: &GeneratorList, window: &FolnerSet) -> Result<Rational> {
    let (rank, _) = span_rank(gens, window, &EngineConfig::default())?;
    Ok(Rational::new(rank.into(), window.len().into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::{RingElem, RingMatrix};
    use crate::groups::GroupSpec;
    use crate::rational::int;

    #[test]
    fn density_examples() {
        let z = GroupSpec::zd(1);
        let f4 = z.folner_set(4).unwrap();
        let two = GeneratorList::new(&z, 1, vec![vec![RingElem::constant(&z, int(2))]]).unwrap();
        assert_eq!(submodule_rank_density(&two, &f4).unwrap(), int(1));
        let zero = GeneratorList::new(&z, 1, vec![vec![RingElem::zero(&z)]]).unwrap();
        assert_eq!(submodule_rank_density(&zero, &f4).unwrap(), int(0));
        let f = RingMatrix::scalar(RingElem::from_ints(&z, &[(1, &[0]), (2, &[1])]).unwrap());
        assert_eq!(submodule_rank_density(&GeneratorList::rows_of(&f), &f4).unwrap(), int(1));
    }

    #[test]
    fn translate_coefficients() {
        let z = GroupSpec::zd(1);
        let a =
            GeneratorList::new(&z, 1, vec![vec![RingElem::from_ints(&z, &[(1, &[0]), (2, &[1])]).unwrap()]]).unwrap();
        let v = translates(&a, &[z.element(&[-3]).unwrap()]);
        assert_eq!(
            v[0],
            vec![((0, z.element(&[-3]).unwrap()), BigInt::from(1)), ((0, z.element(&[-2]).unwrap()), BigInt::from(2))]
        );
    }
}
