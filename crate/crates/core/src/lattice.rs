//! Lattice-path profiles of generator words.
//!
//! A letter `L_w` steps up by `|w|`, `L_w*` steps down by `|w|` and a vertex
//! letter does not move. A word whose product vanishes has the empty path.
//! Whether a word's expectation is a nonzero vertex projection is decided by
//! reduction; the height profile is only a necessary condition (it cannot
//! tell two different paths of equal length apart).

use crate::algebra::{Algebra, Letter};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePath {
    pub steps: Vec<i64>,
    pub heights: Vec<i64>,
    pub empty: bool,
}

impl LatticePath {
    pub fn final_height(&self) -> i64 {
        self.heights.last().copied().unwrap_or(0)
    }

    /// Arrow rendering starting at the origin `*`: one `↗` per unit up, one
    /// `↘` per unit down, `·` for a vertex letter; `∅` for the empty path.
    pub fn render(&self) -> String {
        if self.empty {
            return "∅".to_string();
        }
        let mut out = String::from("*");
        for &s in &self.steps {
            if s == 0 {
                out.push('·');
            }
            let arrow = if s > 0 { '↗' } else { '↘' };
            for _ in 0..s.unsigned_abs() {
                out.push(arrow);
            }
        }
        out
    }
}

fn profile(word: &[Letter]) -> (Vec<i64>, Vec<i64>) {
    let steps: Vec<i64> = word.iter().map(Letter::step).collect();
    let heights = steps
        .iter()
        .scan(0i64, |h, s| {
            *h += s;
            Some(*h)
        })
        .collect();
    (steps, heights)
}

/// The lattice path of a word; empty when the word reduces to zero.
pub fn lattice_path(alg: &Algebra, word: &[Letter]) -> Result<LatticePath> {
    if alg.reduce(word)?.is_zero() {
        return Ok(LatticePath {
            steps: Vec::new(),
            heights: Vec::new(),
            empty: true,
        });
    }
    let (steps, heights) = profile(word);
    Ok(LatticePath {
        steps,
        heights,
        empty: false,
    })
}

/// The word's product is a vertex projection, i.e. its expectation is nonzero.
pub fn has_star_axis_property(alg: &Algebra, word: &[Letter]) -> Result<bool> {
    Ok(alg.reduce(word)?.vertex().is_some())
}

/// Purely geometric test: the step profile returns to height zero. Does not
/// look at whether the product vanishes.
pub fn ends_on_axis(word: &[Letter]) -> Result<bool> {
    if word.is_empty() {
        return Err(Error::usage("empty word"));
    }
    Ok(word.iter().map(Letter::step).sum::<i64>() == 0)
}
