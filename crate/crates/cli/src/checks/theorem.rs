//! Exact checks of the coefficient sets for the profiles `(2,0,2,0)` (first
//! family) and `(1,0,1,0)` (cubic family).

use kowtype::fixtures::{cubic_family, weierstrass_family, QuadraticFamily};
use kowtype::poly::Rational;
use kowtype::theorem::{BFunction, Branch, CoefficientSet, Coefficients, ExponentProfile};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{random_nonzero_rational, random_rational, Partial};
use crate::config::RunConfig;
use crate::reference;
use crate::report::Check;
use crate::Target;

pub const POINTS: usize = 100;

const T: Target = Target::Theorem;

fn coefficient_set(profile: (i32, i32, i32, i32), fam: &QuadraticFamily<Rational>, branch: Branch) -> CoefficientSet<Rational> {
    let (m1, n1, m2, n2) = profile;
    CoefficientSet::new(
        ExponentProfile::new(m1, n1, m2, n2).expect("non-degenerate profile"),
        fam.a.clone(),
        fam.c.clone(),
        fam.p.clone(),
        BFunction::Polynomial(fam.b.clone()),
        branch,
    )
}

/// Per-point data for one profile: the family and, for each branch, the
/// printed closed form to compare with.
struct Case {
    family: QuadraticFamily<Rational>,
    x1: Rational,
    x2: Rational,
    printed: [Option<Coefficients<Rational>>; 2],
}

fn draw_point(rng: &mut ChaCha8Rng) -> (Rational, Rational) {
    loop {
        let (x1, x2) = (random_nonzero_rational(rng), random_nonzero_rational(rng));
        if !(&x1 + &x2).is_zero() && x1 != x2 {
            return (x1, x2);
        }
    }
}

fn first_family_case(rng: &mut ChaCha8Rng) -> Case {
    let (g2, g3) = (random_rational(rng), random_rational(rng));
    let (x1, x2) = draw_point(rng);
    Case {
        printed: [Some(reference::first_family(&g2, &g3, &x1, &x2)), None],
        family: weierstrass_family(&g2, &g3),
        x1,
        x2,
    }
}

fn cubic_case(rng: &mut ChaCha8Rng) -> Case {
    let (a, b, c) = (random_rational(rng), random_rational(rng), random_rational(rng));
    let (x1, x2) = draw_point(rng);
    Case {
        printed: [
            reference::cubic_second(&a, &b, &c, &x1, &x2),
            Some(reference::cubic_first(&a, &b, &c, &x1, &x2)),
        ],
        family: cubic_family(&a, &b, &c),
        x1,
        x2,
    }
}

const BRANCHES: [Branch; 2] = [Branch::Plus, Branch::Minus];

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Plus => "plus",
        Branch::Minus => "minus",
    }
}

fn profile_checks(
    prefix: &str,
    profile: (i32, i32, i32, i32),
    rng: &mut ChaCha8Rng,
    draw: fn(&mut ChaCha8Rng) -> Case,
) -> Vec<Check> {
    let mut system_misses = [0usize; 2];
    let mut quadratic_misses = [0usize; 2];
    let mut errors = [0usize; 2];
    // per branch, per coefficient name: number of points where the printed form differs
    let mut printed_misses: [Vec<(&'static str, usize)>; 2] = Default::default();
    let names = ["E", "F", "G", "p1", "p2", "q1", "q2", "r1", "r2"];
    for m in printed_misses.iter_mut() {
        *m = names.iter().map(|n| (*n, 0)).collect();
    }
    for _ in 0..POINTS {
        let case = draw(rng);
        for (bi, branch) in BRANCHES.into_iter().enumerate() {
            let cs = coefficient_set(profile, &case.family, branch);
            let (x1, x2) = (&case.x1, &case.x2);
            match (cs.verify_coefficient_system(x1, x2), cs.verify_e_quadratic(x1, x2), cs.eval(x1, x2)) {
                (Ok(res), Ok(phi), Ok(cf)) => {
                    system_misses[bi] += usize::from(!res.iter().all(Zero::is_zero));
                    quadratic_misses[bi] += usize::from(!phi.is_zero());
                    if let Some(printed) = &case.printed[bi] {
                        for name in reference::differing(&cf, printed) {
                            if let Some(slot) = printed_misses[bi].iter_mut().find(|(n, _)| *n == name) {
                                slot.1 += 1;
                            }
                        }
                    }
                }
                _ => errors[bi] += 1,
            }
        }
    }
    let mut checks = Vec::new();
    for (bi, branch) in BRANCHES.into_iter().enumerate() {
        let b = branch_name(branch);
        checks.push(
            Check::exact(
                T,
                format!("{prefix}.{b}.six_equations"),
                "f_i² = P(x_i) + e_i A, matched in e1, e2 and constant parts",
                system_misses[bi] + errors[bi],
            )
            .with_detail(format!("{POINTS} points, {} evaluation errors", errors[bi])),
        );
        checks.push(
            Check::exact(
                T,
                format!("{prefix}.{b}.e_quadratic"),
                "φ(E) + C A / d² = 0",
                quadratic_misses[bi] + errors[bi],
            )
            .with_detail(format!("{POINTS} points")),
        );
        if !has_printed(prefix, branch) {
            continue;
        }
        let groups: [(&str, &[&str]); 4] = [
            ("E", &["E"]),
            ("F", &["F"]),
            ("G", &["G"]),
            ("pqr", &["p1", "p2", "q1", "q2", "r1", "r2"]),
        ];
        for (group, members) in groups {
            let misses: usize = printed_misses[bi]
                .iter()
                .filter(|(n, _)| members.contains(n))
                .map(|(_, m)| *m)
                .max()
                .unwrap_or(0);
            checks.push(
                Check::exact(
                    T,
                    format!("{prefix}.{b}.printed.{group}"),
                    format!("computed {group} equals its printed closed form"),
                    misses,
                )
                .with_detail(format!("differs at {misses} of {POINTS} points"))
                .finding_if_failed(),
            );
        }
    }
    checks
}

fn has_printed(prefix: &str, branch: Branch) -> bool {
    prefix == "cubic_family" || branch == Branch::Plus
}

pub fn run(cfg: &RunConfig) -> Partial {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = profile_checks("first_family", (2, 0, 2, 0), &mut rng, first_family_case);
    checks.extend(profile_checks("cubic_family", (1, 0, 1, 0), &mut rng, cubic_case));
    (checks, None)
}
