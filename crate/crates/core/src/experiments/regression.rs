use std::collections::HashSet;
use std::fmt;

use crate::alphabet::Nucleotide;
use crate::cgr::historyless_points;
use crate::pattern::Pattern;
use crate::sequence::Sequence;
use crate::tree::CgrTree;

pub const WORKED_EXAMPLE: &str = "GAGCACAGTGGAAGGG";

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegressionReport {
    pub checks: Vec<Check>,
}

impl RegressionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

impl fmt::Display for RegressionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed() { "ok" } else { "FAIL" };
            writeln!(f, "{status:4} {}: expected {}, got {}", c.name, c.expected, c.actual)?;
        }
        Ok(())
    }
}

fn check(name: &str, expected: impl fmt::Debug, actual: impl fmt::Debug) -> Check {
    Check { name: name.to_string(), expected: format!("{expected:?}"), actual: format!("{actual:?}") }
}

/// Compares the tree grown from `letters` with the known values of the
/// 16-letter example and branch `ACA`.
pub fn regression_on(letters: &[Nucleotide]) -> RegressionReport {
    let tree = CgrTree::from_letters(letters);
    let s: Pattern = "ACA".parse().expect("valid pattern");

    let t_values: Vec<Option<usize>> = (1..=3).map(|k| tree.first_tree_size(&s, k).ok().flatten()).collect();
    let steps = 8.min(tree.size() + 1);
    let x_values: Vec<Option<usize>> = (0..steps).map(|m| tree.branch_length_at(m, &s).ok()).collect();
    let tail: Vec<Option<usize>> = (7..=tree.size()).map(|m| tree.branch_length_at(m, &s).ok()).collect();
    let distinct: HashSet<(u64, u64)> =
        historyless_points(&tree).iter().map(|(_, (x, y))| (x.to_bits(), y.to_bits())).collect();

    RegressionReport {
        checks: vec![
            check("T_k(ACA), k = 1..3", [Some(2), Some(5), Some(7)], t_values),
            check(
                "X_m(ACA), m = 0..7",
                [0, 0, 1, 1, 1, 2, 2, 3].map(Some).to_vec(),
                x_values,
            ),
            check("X_m(ACA) = 3 for m >= 7", vec![Some(3); tail.len().max(1)], if tail.is_empty() { vec![None] } else { tail }),
            check("distinct historyless points", 16, distinct.len()),
        ],
    }
}

pub fn worked_example_regression() -> RegressionReport {
    let seq: Sequence = WORKED_EXAMPLE.parse().expect("valid letters");
    regression_on(seq.letters())
}
