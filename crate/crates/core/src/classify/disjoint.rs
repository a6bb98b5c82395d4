//! Overlap between two contours, with a witness search when they meet.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::search_sets;
use crate::cleaving::Certificate;
use crate::contours::Contour;
use crate::error::{Error, Result};
use crate::raycore::RayCategory;
use crate::reductions::decisive_subcats;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSearch {
    pub subcategories: usize,
    pub assignments: u64,
    pub exhausted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Box<Certificate>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjointnessReport {
    pub k: usize,
    /// Arrows of `v` or `w` that also occur in `v′` or `w′`.
    pub shared_arrows: Vec<String>,
    /// Points of `Q(C)` that also lie in `Q(C′)`.
    pub shared_points: Vec<String>,
    /// No shared arrows.
    pub arrows_clause: bool,
    /// No shared points.
    pub points_clause: bool,
    /// Run when the overlap the given `k` is about is nonempty.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<PairSearch>,
}

impl DisjointnessReport {
    /// The clause that `k` selects: arrows for 5, points for 6.
    pub fn holds(&self) -> bool {
        if self.k == 5 {
            self.arrows_clause
        } else {
            self.points_clause
        }
    }
}

pub fn contour_disjointness(p: &RayCategory, c: &Contour, c2: &Contour, k: usize, budget: u64) -> Result<DisjointnessReport> {
    if k != 5 && k != 6 {
        return Err(Error::Precondition(format!("k must be 5 or 6, got {k}")));
    }
    let arrows: BTreeSet<usize> = c.arrows(p)?.intersection(&c2.arrows(p)?).copied().collect();
    let points: BTreeSet<usize> = {
        let a: BTreeSet<usize> = c.points(p)?.into_iter().collect();
        let b: BTreeSet<usize> = c2.points(p)?.into_iter().collect();
        a.intersection(&b).copied().collect()
    };
    let relevant = if k == 5 { !arrows.is_empty() } else { !points.is_empty() };
    let search = if relevant && c.non_deep {
        let (family, base) = decisive_subcats(p, c, k, Some(c2))?;
        let found = search_sets(&base, &family.sets, budget)?;
        let (points, certificate) = match found.hit {
            Some((set, cert)) => (Some(set.iter().map(|&x| base.points()[x].clone()).collect()), Some(Box::new(cert))),
            None => (None, None),
        };
        Some(PairSearch {
            subcategories: found.sets,
            assignments: found.assignments,
            exhausted: found.exhausted,
            points,
            certificate,
        })
    } else {
        None
    };
    Ok(DisjointnessReport {
        k,
        shared_arrows: arrows.iter().map(|&a| p.arrows()[a].name.clone()).collect(),
        shared_points: points.iter().map(|&x| p.points()[x].clone()).collect(),
        arrows_clause: arrows.is_empty(),
        points_clause: points.is_empty(),
        search,
    })
}
