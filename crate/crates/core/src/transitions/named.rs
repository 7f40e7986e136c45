use std::sync::OnceLock;

use super::compute::{compose_relations, Compose};
use super::Relation;

/// The fixed relations that drive the constructions.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Named {
    /// Admissible transitions of any `(2,2)`-pole.
    A,
    /// Bound for decollineators.
    D,
    /// Collinear transitions.
    C,
    /// Weighted transitions of bipartite `(2,2;1)`-poles.
    B,
    /// `D ∘ B`, the bound for Halin fragments.
    DB,
    /// `D ∘ B` plus `ax ->1 hl` and `ls ->1 hl`.
    M,
    /// `M ⊙ M` without `dpt <->1 alt`.
    MPrime,
}

const TABLE_A: &str = "dpt -> dpt, hl -> hl, alt -> alt, ax -> ax, ang -> ang, ang -> ls, ls -> ang, ls -> ls";
const TABLE_D: &str = "dpt -> dpt, alt -> alt, ax -> ax, ang -> ang, ang -> ls, ls -> ang";
const TABLE_C: &str = "ls -> ls, hl -> hl";
const TABLE_B: &str = "dpt <->2 ls, ax <->2 ls, ang <->2 dpt, ang <->2 ls, hl ->2 hl, alt ->2 alt, \
                       hl <->2 alt, hl <->1 dpt, hl <->1 ls, alt <->1 ls";
const TABLE_DB: &str = "dpt ->2 ls, dpt ->2 ang, dpt ->1 hl, alt ->2 alt, alt ->2 hl, alt ->1 ls, ax ->2 ls, \
                        ang ->2 dpt, ang ->2 ls, ang ->2 ax, ang ->2 ang, ang ->1 hl, ang ->1 alt, \
                        ls ->2 dpt, ls ->2 ls";
const EXTRA_M: &str = "ax ->1 hl, ls ->1 hl";
const REMOVED_M_PRIME: &str = "dpt <->1 alt";

impl Named {
    pub const ALL: [Named; 7] = [Named::A, Named::D, Named::C, Named::B, Named::DB, Named::M, Named::MPrime];

    pub fn name(self) -> &'static str {
        match self {
            Named::A => "A",
            Named::D => "D",
            Named::C => "C",
            Named::B => "B",
            Named::DB => "DB",
            Named::M => "M",
            Named::MPrime => "M'",
        }
    }

    pub fn from_name(s: &str) -> Option<Named> {
        Named::ALL.into_iter().find(|n| n.name().eq_ignore_ascii_case(s.trim()))
    }

    pub fn relation(self) -> &'static Relation {
        static CELLS: [OnceLock<Relation>; 7] = [const { OnceLock::new() }; 7];
        CELLS[self as usize].get_or_init(|| build(self))
    }
}

fn parse(table: &str) -> Relation {
    Relation::parse(table).expect("built-in tables parse")
}

fn build(n: Named) -> Relation {
    match n {
        Named::A => parse(TABLE_A),
        Named::D => parse(TABLE_D),
        Named::C => parse(TABLE_C),
        Named::B => parse(TABLE_B),
        Named::DB => parse(TABLE_DB),
        Named::M => parse(TABLE_DB).union(&parse(EXTRA_M)),
        Named::MPrime => {
            let m = Named::M.relation();
            compose_relations(m, m, Compose::Odot).expect("M is weighted").difference(&parse(REMOVED_M_PRIME))
        }
    }
}

/// Consistency checks between the tables; returns the failed checks.
pub fn self_check() -> Result<(), Vec<String>> {
    let r = |n: Named| n.relation();
    let mut failures = Vec::new();
    let mut check = |ok: bool, what: &str| {
        if !ok {
            failures.push(what.to_string());
        }
    };
    check(r(Named::A).len() == 8, "A has 8 entries");
    check(r(Named::D).len() == 6, "D has 6 entries");
    check(r(Named::B).len() == 18, "B has 18 entries");
    check(r(Named::B).is_symmetric(), "B is symmetric");
    check(r(Named::DB).len() == 15, "DB has 15 entries");
    check(r(Named::D).is_subset(r(Named::A)), "D is contained in A");
    check(r(Named::C).is_subset(r(Named::A)), "C is contained in A");
    check(r(Named::D).shapes().is_disjoint(r(Named::C).shapes()), "D and C are disjoint");
    let db = compose_relations(r(Named::D), r(Named::B), Compose::Join);
    check(db.as_ref().is_ok_and(|db| db == r(Named::DB)), "DB equals D composed with B");
    check(r(Named::M).len() == 17, "M has 17 entries");
    check(r(Named::MPrime).is_subset(r(Named::M)), "M' is contained in M");
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures)
    }
}
