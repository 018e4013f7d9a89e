//! Deterministic enumeration of the depth-k points of a definable set.
//!
//! Points are coordinate code vectors mod p^k, aligned with the ambient
//! coordinate order. The walk mirrors the volume walker: cells refine only
//! while an atom is undecided, and a cell that resolves True expands to
//! all its depth-k ambient refinements without re-evaluating the formula
//! (truth is monotone under digit extension). Cells still undecided with
//! every blamed factor at full depth are skipped, so the result is the set
//! of provably satisfying points. Output order is fixed: seed cells in
//! lexicographic order, children in sorted order.

use std::collections::HashMap;

use pas_lang::FormulaRef;

use crate::ambient::{AmbientSpace, SeededAmbient};
use crate::elem::{Arith, TriVal};
use crate::eval::{Binding, Evaluator};
use crate::model::ModelSpec;
use crate::volume::{
    pick_refinement, rewrite_with_ambient, validate_free_vars, Cell, VolumeError, SEED_BUDGET,
};

/// All provably satisfying points mod p^depth, in deterministic order.
/// `budget` bounds the number of cell visits plus emitted points.
pub fn enumerate_points(
    m: &ModelSpec,
    f: &FormulaRef,
    space: &AmbientSpace,
    budget: usize,
) -> Result<Vec<Vec<u64>>, VolumeError> {
    validate_free_vars(f, space)?;
    let rewritten = rewrite_with_ambient(f, space);
    let seeded = space.seed(m, SEED_BUDGET)?;
    let evaluator = Evaluator::new(m, &rewritten)?;
    let mut walk = PointWalk {
        m,
        space,
        seeded: &seeded,
        evaluator: &evaluator,
        arith: Arith { p: m.prime(), kind: m.kind() },
        base: HashMap::new(),
        remaining: budget,
        out: Vec::new(),
    };
    let nf = space.factor_count();
    if (0..nf).all(|i| !seeded.seeds(i).is_empty()) {
        let mut indices = vec![0usize; nf];
        loop {
            let mut codes = Vec::with_capacity(space.coords().len());
            for (fidx, &si) in indices.iter().enumerate() {
                codes.extend_from_slice(&seeded.seeds(fidx)[si]);
            }
            walk.resolve(Cell { levels: vec![1; nf], codes })?;
            let mut advanced = false;
            for fidx in (0..nf).rev() {
                if indices[fidx] + 1 < seeded.seeds(fidx).len() {
                    indices[fidx] += 1;
                    advanced = true;
                    break;
                }
                indices[fidx] = 0;
            }
            if !advanced {
                break;
            }
        }
    }
    Ok(walk.out)
}

struct PointWalk<'a> {
    m: &'a ModelSpec,
    space: &'a AmbientSpace,
    seeded: &'a SeededAmbient<'a>,
    evaluator: &'a Evaluator,
    arith: Arith,
    base: HashMap<String, Binding>,
    remaining: usize,
    out: Vec<Vec<u64>>,
}

impl PointWalk<'_> {
    fn spend(&mut self) -> Result<(), VolumeError> {
        if self.remaining == 0 {
            return Err(VolumeError::Budget);
        }
        self.remaining -= 1;
        Ok(())
    }

    fn resolve(&mut self, cell: Cell) -> Result<(), VolumeError> {
        self.spend()?;
        for fidx in 0..self.space.factor_count() {
            let range = self.space.factor_range(fidx);
            let level = cell.levels[fidx];
            for (ci, name) in self.space.factor_coords(fidx).iter().enumerate() {
                let elem = self.arith.cell(cell.codes[range.start + ci], level, 1 << fidx);
                self.base.insert(name.clone(), Binding::Valued(elem));
            }
        }
        let k = self.m.depth();
        match self.evaluator.eval(&self.base)? {
            TriVal::True => self.expand(cell),
            TriVal::False => Ok(()),
            TriVal::Unknown(mask) => {
                match pick_refinement(self.space, self.seeded, &cell, Some(mask), k) {
                    Some(fidx) => {
                        for child in self.children(&cell, fidx) {
                            self.resolve(child)?;
                        }
                        Ok(())
                    }
                    None => Ok(()),
                }
            }
        }
    }

    /// Emit every depth-k ambient refinement of a True cell.
    fn expand(&mut self, cell: Cell) -> Result<(), VolumeError> {
        let k = self.m.depth();
        let next = (0..self.space.factor_count())
            .filter(|&fidx| cell.levels[fidx] < k)
            .min_by_key(|&fidx| (cell.levels[fidx], fidx));
        match next {
            None => {
                self.spend()?;
                self.out.push(cell.codes);
                Ok(())
            }
            Some(fidx) => {
                self.spend()?;
                for child in self.children(&cell, fidx) {
                    self.expand(child)?;
                }
                Ok(())
            }
        }
    }

    fn children(&self, cell: &Cell, fidx: usize) -> Vec<Cell> {
        let range = self.space.factor_range(fidx);
        self.seeded
            .refine(fidx, &cell.codes[range.clone()], cell.levels[fidx])
            .into_iter()
            .map(|child| {
                let mut codes = cell.codes.clone();
                codes[range.clone()].copy_from_slice(&child);
                let mut levels = cell.levels.clone();
                levels[fidx] += 1;
                Cell { levels, codes }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::AmbientFactor;
    use crate::model::ModelKind;
    use pas_lang::parse_formula;

    fn model(p: u64, k: u32) -> ModelSpec {
        ModelSpec::new(p, k, ModelKind::MixedChar).unwrap()
    }

    fn free_x() -> AmbientSpace {
        AmbientSpace::new(vec![AmbientFactor::FreeVar("x".into())]).unwrap()
    }

    #[test]
    fn order_exactly_one_mod_nine() {
        let f = parse_formula("ord(x) = 1").unwrap();
        let pts = enumerate_points(&model(3, 2), &f, &free_x(), 10_000).unwrap();
        assert_eq!(pts, vec![vec![3], vec![6]]);
    }

    #[test]
    fn unsatisfiable_formulas_have_no_points() {
        let f = parse_formula("x != x").unwrap();
        let pts = enumerate_points(&model(3, 2), &f, &free_x(), 10_000).unwrap();
        assert!(pts.is_empty());
    }

    #[test]
    fn true_cells_expand_to_all_their_lifts() {
        let f = parse_formula("0 <= ord(x)").unwrap();
        let pts = enumerate_points(&model(3, 2), &f, &free_x(), 10_000).unwrap();
        assert_eq!(pts.len(), 9);
        // Grouped by residue cell, sorted within each cell.
        assert_eq!(pts[0], vec![0]);
        assert_eq!(pts[1], vec![3]);
        assert_eq!(pts[2], vec![6]);
        assert_eq!(pts[3], vec![1]);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let f = parse_formula("0 <= ord(x)").unwrap();
        let err = enumerate_points(&model(3, 3), &f, &free_x(), 5).unwrap_err();
        assert!(matches!(err, VolumeError::Budget));
    }
}
