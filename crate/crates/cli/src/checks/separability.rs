//! Exact discriminant identities for the two coefficient families and the
//! Kowalevski fundamental quadratic.

use kowtype::fixtures::{cubic_family, kowalevski_fundamental, weierstrass_family, QuadraticFamily};
use kowtype::poly::{int, BiPoly, Rational, UniPoly, Var};
use kowtype::separability::{check_separable, SeparabilityReport};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{random_rational, Partial};
use crate::config::RunConfig;
use crate::report::Check;
use crate::Target;

pub const INSTANCES: usize = 20;

/// Constants `(l1, l, c, k)` of the fundamental-quadratic fixture.
pub const FIXTURE_CONSTANTS: (i64, i64, i64, i64) = (1, 1, 2, 1);

const T: Target = Target::Separability;

fn outer(k: i64, p: &UniPoly<Rational>, q: &UniPoly<Rational>) -> BiPoly<Rational> {
    BiPoly::outer(p, q).expect("cubic factors stay within the bivariate cap").scale(&int(k))
}

/// Mismatch counter for one identity across instances.
struct Tally {
    name: &'static str,
    identity: &'static str,
    misses: usize,
}

impl Tally {
    fn new(name: &'static str, identity: &'static str) -> Self {
        Tally { name, identity, misses: 0 }
    }

    fn record(&mut self, holds: bool) {
        if !holds {
            self.misses += 1;
        }
    }

    fn check(&self, prefix: &str) -> Check {
        Check::exact(T, format!("{prefix}.{}", self.name), self.identity, self.misses)
            .with_detail(format!("{} of {INSTANCES} instances fail", self.misses))
    }
}

fn discriminant(r: &SeparabilityReport, v: Var) -> &BiPoly<Rational> {
    &r.entry(v).discriminant
}

fn first_family_checks(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut t = [
        Tally::new("separable", "all three discriminants factor"),
        Tally::new("strong", "the three factor pairs coincide"),
        Tally::new("d_s", "D_s F = 4 P(x1) P(x2)"),
        Tally::new("d_x1", "D_x1 F = 4 P(x2) P(s)"),
        Tally::new("d_x2", "D_x2 F = 4 P(x1) P(s)"),
    ];
    for _ in 0..INSTANCES {
        let (g2, g3) = (random_rational(rng), random_rational(rng));
        let fam = weierstrass_family(&g2, &g3);
        let r = check_separable(&fam.f());
        let pp = outer(4, &fam.p, &fam.p);
        t[0].record(r.is_separable);
        t[1].record(r.is_strong);
        t[2].record(*discriminant(&r, Var::S) == pp);
        t[3].record(*discriminant(&r, Var::X1) == pp);
        t[4].record(*discriminant(&r, Var::X2) == pp);
    }
    t.iter().map(|x| x.check("first_family")).collect()
}

fn cubic_checks(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut truth = [
        Tally::new("separable", "all three discriminants factor"),
        Tally::new("d_s", "D_s F = 4 P(x1) P(x2)"),
        Tally::new("d_x1", "D_x1 F = 4 P(x2) P(-s)"),
        Tally::new("d_x2", "D_x2 F = 4 P(x1) P(-s)"),
    ];
    let mut stated = [
        Tally::new("stated.d_s", "D_s F = P(x1) P(x2)"),
        Tally::new("stated.d_x1", "D_x1 F = P(x2) P(s)"),
        Tally::new("stated.d_x2", "D_x2 F = P(x1) P(s)"),
        Tally::new("stated.strong", "the three factor pairs coincide"),
    ];
    for _ in 0..INSTANCES {
        let (a, b, c) = (random_rational(rng), random_rational(rng), random_rational(rng));
        let fam: QuadraticFamily<Rational> = cubic_family(&a, &b, &c);
        let r = check_separable(&fam.f());
        let reflected = fam.p.reflect();
        truth[0].record(r.is_separable);
        truth[1].record(*discriminant(&r, Var::S) == outer(4, &fam.p, &fam.p));
        truth[2].record(*discriminant(&r, Var::X1) == outer(4, &fam.p, &reflected));
        truth[3].record(*discriminant(&r, Var::X2) == outer(4, &fam.p, &reflected));
        let unit = outer(1, &fam.p, &fam.p);
        stated[0].record(*discriminant(&r, Var::S) == unit);
        stated[1].record(*discriminant(&r, Var::X1) == unit);
        stated[2].record(*discriminant(&r, Var::X2) == unit);
        stated[3].record(r.is_strong);
    }
    truth
        .iter()
        .map(|x| x.check("cubic_family"))
        .chain(stated.iter().map(|x| x.check("cubic_family").finding_if_failed()))
        .collect()
}

fn fixture_checks() -> Vec<Check> {
    let (l1, l, c, k) = FIXTURE_CONSTANTS;
    let fx = kowalevski_fundamental(&int(l1), &int(l), &int(c), &int(k));
    let r = check_separable(&fx.q);
    let one = |ok: bool| usize::from(!ok);
    let p = "fundamental";
    vec![
        Check::exact(T, format!("{p}.separable"), "all three discriminants factor", one(r.is_separable)),
        Check::exact(T, format!("{p}.not_strong"), "the factor pairs differ (quartic P, cubic J)", one(!r.is_strong)),
        Check::exact(T, format!("{p}.d_s"), "D_s Q = 4 P(x1) P(x2)", one(*discriminant(&r, Var::S) == outer(4, &fx.p, &fx.p))),
        Check::exact(T, format!("{p}.d_x1"), "D_x1 Q = 8 J(s) P(x2)", one(*discriminant(&r, Var::X1) == outer(8, &fx.p, &fx.j))),
        Check::exact(
            T,
            format!("{p}.stated.d_x1"),
            "D_x1 Q = -8 J(s) P(x2)",
            one(*discriminant(&r, Var::X1) == outer(-8, &fx.p, &fx.j)),
        )
        .finding_if_failed(),
    ]
}

pub fn run(cfg: &RunConfig) -> Partial {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = first_family_checks(&mut rng);
    checks.extend(cubic_checks(&mut rng));
    checks.extend(fixture_checks());
    (checks, None)
}
