use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{Bimodule, BimoduleMap, TensorCache};
use crate::error::{Error, Result};
use crate::lattice::FinAbGroup;
use crate::matrix::IntMatrix;

/// A normalized direct sum with its injections and projections.
#[derive(Debug)]
pub struct DirectSumWitness {
    pub module: Bimodule,
    pub summands: Vec<Bimodule>,
    pub injections: Vec<BimoduleMap>,
    pub projections: Vec<BimoduleMap>,
}

impl DirectSumWitness {
    /// `⊕ f_k` for maps out of the summands into the summands of `target`.
    pub fn sum_maps(&self, target: &DirectSumWitness, maps: &[BimoduleMap]) -> Result<BimoduleMap> {
        if maps.len() != self.summands.len() || target.summands.len() != maps.len() {
            return Err(Error::ShapeMismatch("one map per summand".into()));
        }
        let mut total = BimoduleMap::zero(&self.module, &target.module);
        for (k, f) in maps.iter().enumerate() {
            let piece = target.injections[k].after(&f.after(&self.projections[k])?)?;
            total = total.add(&piece)?;
        }
        Ok(total)
    }

    /// The map `⊕_j X_j → ⊕_i Y_i` with components `blocks[i][j]: X_j → Y_i`.
    pub fn matrix_map(&self, target: &DirectSumWitness, blocks: &[Vec<BimoduleMap>]) -> Result<BimoduleMap> {
        let mut total = BimoduleMap::zero(&self.module, &target.module);
        for (i, row) in blocks.iter().enumerate() {
            for (j, f) in row.iter().enumerate() {
                let piece = target.injections[i].after(&f.after(&self.projections[j])?)?;
                total = total.add(&piece)?;
            }
        }
        Ok(total)
    }

    /// Component `π_i ∘ f ∘ ι_j`.
    pub fn component(&self, target: &DirectSumWitness, f: &BimoduleMap, i: usize, j: usize) -> Result<BimoduleMap> {
        target.projections[i].after(&f.after(&self.injections[j])?)
    }
}

impl TensorCache {
    /// Direct sum of bimodules over a common ring pair, cached by identity.
    pub fn direct_sum(&self, summands: &[Bimodule]) -> Result<Arc<DirectSumWitness>> {
        let key: Vec<u64> = summands.iter().map(Bimodule::id).collect();
        if let Some(w) = self.sums.read().get(&key) {
            return Ok(w.clone());
        }
        let w = Arc::new(compute_sum(summands)?);
        let mut map = self.sums.write();
        Ok(map.entry(key).or_insert(w).clone())
    }

    /// `X ⊙ (⊕ P_j) → ⊕ (X ⊙ P_j)`.
    pub fn distribute_left(&self, x: &Bimodule, sum: &DirectSumWitness) -> Result<BimoduleMap> {
        let parts: Vec<Bimodule> = sum.summands.iter().map(|p| self.product(x, p)).collect::<Result<_>>()?;
        let out = self.direct_sum(&parts)?;
        let src = self.product(x, &sum.module)?;
        let mut total = BimoduleMap::zero(&src, &out.module);
        for (j, pi) in sum.projections.iter().enumerate() {
            let piece = out.injections[j].after(&self.tensor_maps(&x.identity(), pi)?)?;
            total = total.add(&piece)?;
        }
        Ok(total)
    }

    /// `⊕ (X ⊙ P_j) → X ⊙ (⊕ P_j)`.
    pub fn undistribute_left(&self, x: &Bimodule, sum: &DirectSumWitness) -> Result<BimoduleMap> {
        let parts: Vec<Bimodule> = sum.summands.iter().map(|p| self.product(x, p)).collect::<Result<_>>()?;
        let src = self.direct_sum(&parts)?;
        let tgt = self.product(x, &sum.module)?;
        let mut total = BimoduleMap::zero(&src.module, &tgt);
        for (j, iota) in sum.injections.iter().enumerate() {
            let piece = self.tensor_maps(&x.identity(), iota)?.after(&src.projections[j])?;
            total = total.add(&piece)?;
        }
        Ok(total)
    }

    /// `(⊕ P_j) ⊙ Y → ⊕ (P_j ⊙ Y)`.
    pub fn distribute_right(&self, sum: &DirectSumWitness, y: &Bimodule) -> Result<BimoduleMap> {
        let parts: Vec<Bimodule> = sum.summands.iter().map(|p| self.product(p, y)).collect::<Result<_>>()?;
        let out = self.direct_sum(&parts)?;
        let src = self.product(&sum.module, y)?;
        let mut total = BimoduleMap::zero(&src, &out.module);
        for (j, pi) in sum.projections.iter().enumerate() {
            let piece = out.injections[j].after(&self.tensor_maps(pi, &y.identity())?)?;
            total = total.add(&piece)?;
        }
        Ok(total)
    }

    /// `⊕ (P_j ⊙ Y) → (⊕ P_j) ⊙ Y`.
    pub fn undistribute_right(&self, sum: &DirectSumWitness, y: &Bimodule) -> Result<BimoduleMap> {
        let parts: Vec<Bimodule> = sum.summands.iter().map(|p| self.product(p, y)).collect::<Result<_>>()?;
        let src = self.direct_sum(&parts)?;
        let tgt = self.product(&sum.module, y)?;
        let mut total = BimoduleMap::zero(&src.module, &tgt);
        for (j, iota) in sum.injections.iter().enumerate() {
            let piece = self.tensor_maps(iota, &y.identity())?.after(&src.projections[j])?;
            total = total.add(&piece)?;
        }
        Ok(total)
    }
}

fn compute_sum(summands: &[Bimodule]) -> Result<DirectSumWitness> {
    let first = summands.first().ok_or_else(|| Error::ShapeMismatch("empty direct sum".into()))?;
    let (r, s) = (first.left_ring().clone(), first.right_ring().clone());
    for m in summands {
        if *m.left_ring() != r || *m.right_ring() != s {
            return Err(Error::RingMismatch(format!("{m:?} does not live over the common ring pair")));
        }
    }
    let groups: Vec<&FinAbGroup> = summands.iter().map(Bimodule::group).collect();
    let ds = FinAbGroup::direct_sum(&groups);
    let k = ds.group.rank();
    let transport = |pick: &dyn Fn(&Bimodule) -> &IntMatrix| {
        let mut out = IntMatrix::zeros(k, k);
        for (m, (inj, proj)) in summands.iter().zip(ds.injections.iter().zip(&ds.projections)) {
            out = out.add(&inj.mul(&pick(m).mul(proj)));
        }
        out
    };
    let left: Vec<_> = (0..r.rank()).map(|i| transport(&|m: &Bimodule| &m.left_actions()[i])).collect();
    let right: Vec<_> = (0..s.rank()).map(|i| transport(&|m: &Bimodule| &m.right_actions()[i])).collect();
    let names: Vec<&str> = summands.iter().map(Bimodule::name).collect();
    let module = Bimodule::from_parts(&names.join("⊕"), r, s, ds.group.clone(), left, right);
    let injections = summands
        .iter()
        .zip(&ds.injections)
        .map(|(m, i)| BimoduleMap::from_parts(m.clone(), module.clone(), i.clone()))
        .collect();
    let projections = summands
        .iter()
        .zip(&ds.projections)
        .map(|(m, p)| BimoduleMap::from_parts(module.clone(), m.clone(), p.clone()))
        .collect();
    Ok(DirectSumWitness { module, summands: summands.to_vec(), injections, projections })
}
