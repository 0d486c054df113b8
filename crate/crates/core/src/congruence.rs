//! Congruences mod `p` forced by the G-signature theorem, their line-bundle
//! and SU(2) refinements, and the existence condition for equivariant line
//! bundles.

use std::fmt;

use num_traits::Zero;

use crate::action::{
    connected_sum_spheres, linear_cp2, FixedSphere, GroupAction, LineIsotropy, PartialLineIsotropy, Su2Isotropy,
    Unknown,
};
use crate::arith::{crt_solve, gcd, int, mod_inverse, split_prime_power, Rational, Residue};
use crate::cyclotomic::{eval_point_term, eval_sphere_term, CycloNum};
use crate::error::{Error, Result};
use crate::series::{Expander, PowerSeries, PrimeField};

/// A value in a report: a residue mod `p`, an exact rational, or a field
/// element that failed to be rational.
#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    Residue(Residue),
    Exact(Rational),
    Field(CycloNum),
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Residue(r) => write!(f, "{r}"),
            Quantity::Exact(q) => write!(f, "{q}"),
            Quantity::Field(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationResult {
    pub name: String,
    pub lhs: Quantity,
    pub required: Quantity,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CongruenceReport {
    pub relations: Vec<RelationResult>,
}

impl CongruenceReport {
    pub fn passed(&self) -> bool {
        self.relations.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationResult> {
        self.relations.iter().filter(|r| !r.passed)
    }

    pub fn get(&self, name: &str) -> Option<&RelationResult> {
        self.relations.iter().find(|r| r.name == name)
    }

    fn push_residue(&mut self, name: impl Into<String>, lhs: Residue, required: Residue) {
        self.relations.push(RelationResult {
            name: name.into(),
            passed: lhs == required,
            lhs: Quantity::Residue(lhs),
            required: Quantity::Residue(required),
        });
    }
}

impl fmt::Display for CongruenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.relations {
            let mark = if r.passed { "ok  " } else { "FAIL" };
            writeln!(f, "{mark} {:<24} lhs = {:<16} required = {}", r.name, r.lhs.to_string(), r.required)?;
        }
        write!(f, "verdict: {}", if self.passed() { "pass" } else { "fail" })
    }
}

/// Arithmetic in `Z/p` with `i64` inputs.
#[derive(Debug, Clone, Copy)]
struct Zp(u64);

impl Zp {
    fn r(self, v: i64) -> Residue {
        Residue::new(v, self.0).expect("p >= 2")
    }
    fn u(self, v: u64) -> Residue {
        self.r(v as i64)
    }
    fn zero(self) -> Residue {
        self.r(0)
    }
    /// `1/(ab)` for a rotation pair (units by validation).
    fn inv_ab(self, a: u64, b: u64) -> Result<Residue> {
        (self.u(a) * self.u(b)).inv().map_err(|_| Error::ZeroRotation { value: 0, p: self.0 })
    }
    fn inv(self, c: u64) -> Result<Residue> {
        self.u(c).inv().map_err(|_| Error::ZeroRotation { value: c as i64, p: self.0 })
    }
}

fn require_congruence_input(action: &GroupAction) -> Result<()> {
    let report = action.validate();
    if !report.passed() {
        let msg: Vec<String> = report.failures().map(|c| format!("{}: {}", c.name, c.detail)).collect();
        return Err(Error::InvalidAction(msg.join("; ")));
    }
    if action.p() == 2 {
        return Err(Error::EvenPrime(2));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// G-signature

/// `Sign(t, X)` as an element of `Q(ζ_p)`: the fixed point sum for `k = 1`.
pub fn gsignature_value(action: &GroupAction) -> Result<CycloNum> {
    let p = action.p();
    let mut acc = CycloNum::zero(p)?;
    for pt in action.points() {
        acc = &acc + &eval_point_term(p, 1, pt.a() as i64, pt.b() as i64)?;
    }
    for s in action.spheres() {
        acc = &acc + &eval_sphere_term(p, 1, s.c() as i64, s.alpha)?;
    }
    Ok(acc)
}

/// `Sign(t^k, X)` for `k = 1..p-1`, by Galois conjugation of the `k = 1` value.
pub fn gsignature_values(action: &GroupAction) -> Result<Vec<CycloNum>> {
    let x = gsignature_value(action)?;
    Ok((1..action.p()).map(|k| x.galois(k)).collect())
}

/// Checks that every `Sign(t^k, X)` is exactly `Sign(X)`.
pub fn gsignature_check(action: &GroupAction) -> Result<CongruenceReport> {
    require_congruence_input(action)?;
    let sign = int(action.signature());
    let mut report = CongruenceReport::default();
    for (k, v) in gsignature_values(action)?.into_iter().enumerate() {
        let (lhs, passed) = match v.as_rational() {
            Some(q) => {
                let ok = q == sign;
                (Quantity::Exact(q), ok)
            }
            None => (Quantity::Field(v), false),
        };
        report.relations.push(RelationResult {
            name: format!("Sign(t^{}, X)", k + 1),
            lhs,
            required: Quantity::Exact(sign.clone()),
            passed,
        });
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Rotation relations

/// Mod-`p` rotation-data checker with the per-residue series factors cached,
/// so repeated checks at one prime are cheap.
pub struct RotationRelations {
    p: u64,
    order: usize,
    cot: Vec<PowerSeries<PrimeField>>,
    csc2: Vec<PowerSeries<PrimeField>>,
}

impl RotationRelations {
    /// Series checks run through order `p - 2`: past that, the reduced
    /// coefficients depend on the integer lifts of the rotation numbers.
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::EvenPrime(2));
        }
        let field = PrimeField::new(p)?;
        let order = p as usize - 2;
        let ex = Expander::new(field, order);
        let mut cot = vec![PowerSeries::zero(field, order)];
        let mut csc2 = vec![PowerSeries::zero(field, order)];
        for a in 1..p as i64 {
            cot.push(ex.cot_factor(a)?);
            csc2.push(ex.csc2_factor(a)?);
        }
        Ok(Self { p, order, cot, csc2 })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `Σ` point terms `+ Σ` sphere terms, times `(t-1)^2`, mod `p`.
    pub fn total_series(&self, action: &GroupAction) -> PowerSeries<PrimeField> {
        let field = PrimeField::new(self.p).expect("checked in new");
        let mut acc = PowerSeries::zero(field, self.order);
        for pt in action.points() {
            acc = acc.add(&self.cot[pt.a() as usize].mul(&self.cot[pt.b() as usize]));
        }
        for s in action.spheres() {
            acc = acc.add(&self.csc2[s.c() as usize].scale_int(s.alpha));
        }
        acc
    }

    /// Relation (1) alone, the cheapest filter.
    pub fn relation_one(&self, action: &GroupAction) -> Result<Residue> {
        let z = Zp(self.p);
        let mut acc = z.zero();
        for pt in action.points() {
            acc = acc + z.inv_ab(pt.a(), pt.b())?;
        }
        for s in action.spheres() {
            let ic = z.inv(s.c())?;
            acc = acc - z.r(s.alpha) * ic * ic;
        }
        Ok(acc)
    }

    pub fn check(&self, action: &GroupAction) -> Result<CongruenceReport> {
        if action.p() != self.p {
            return Err(Error::ModulusMismatch(action.p(), self.p));
        }
        require_congruence_input(action)?;
        let z = Zp(self.p);
        let mut rel = [z.zero(); 4];
        for pt in action.points() {
            let (a, b) = (z.u(pt.a()), z.u(pt.b()));
            let inv = z.inv_ab(pt.a(), pt.b())?;
            let (a2, b2) = (a * a, b * b);
            let (a4, b4) = (a2 * a2, b2 * b2);
            rel[0] = rel[0] + inv;
            rel[1] = rel[1] + (a2 + b2) * inv;
            rel[2] = rel[2] + (a4 + b4 - (a2 * b2).scale(5)) * inv;
            let q = (a4 * a2).scale(2) - (a4 * b2).scale(7) - (a2 * b4).scale(7) + (b4 * b2).scale(2);
            rel[3] = rel[3] + q * inv;
        }
        for s in action.spheres() {
            let c = z.u(s.c());
            let ic = z.inv(s.c())?;
            let alpha = z.r(s.alpha);
            let c2 = c * c;
            rel[0] = rel[0] - alpha * ic * ic;
            rel[1] = rel[1] + alpha;
            rel[2] = rel[2] + (alpha * c2).scale(3);
            rel[3] = rel[3] + (alpha * c2 * c2).scale(10);
        }
        let mut report = CongruenceReport::default();
        let sign = z.r(action.signature());
        report.push_residue("relation (1)", rel[0], z.zero());
        report.push_residue("relation (2)", rel[1], sign.scale(3));
        report.push_residue("relation (3)", rel[2], z.zero());
        report.push_residue("relation (4)", rel[3], z.zero());
        let series = self.total_series(action);
        for (k, c) in series.coeffs().iter().enumerate() {
            let required = if k == 2 { sign } else { z.zero() };
            report.push_residue(format!("series order {k}"), z.u(*c), required);
        }
        Ok(report)
    }
}

/// Relations (1)-(4) and the series check through order `p - 2`.
pub fn check_rotation_relations(action: &GroupAction) -> Result<CongruenceReport> {
    require_congruence_input(action)?;
    RotationRelations::new(action.p())?.check(action)
}

// ---------------------------------------------------------------------------
// Line bundles

/// `Σ λ_i/(a_i b_i) + Σ (c_j m_j - λ_j α_j)/c_j^2 (mod p)`.
pub fn existence_residual(action: &GroupAction, iso: &LineIsotropy) -> Result<Residue> {
    iso.check_lengths(action)?;
    let z = Zp(action.p());
    let mut acc = z.zero();
    for (pt, &l) in action.points().iter().zip(&iso.lambda_points) {
        acc = acc + z.r(l) * z.inv_ab(pt.a(), pt.b())?;
    }
    for ((s, &l), &m) in action.spheres().iter().zip(&iso.lambda_spheres).zip(&iso.m_spheres) {
        let ic = z.inv(s.c())?;
        acc = acc + (z.u(s.c()) * z.r(m) - z.r(l) * z.r(s.alpha)) * ic * ic;
    }
    Ok(acc)
}

/// The condition for `iso` to be realised by an equivariant line bundle.
pub fn existence_condition(action: &GroupAction, iso: &LineIsotropy) -> Result<CongruenceReport> {
    require_congruence_input(action)?;
    let lhs = existence_residual(action, iso)?;
    let mut report = CongruenceReport::default();
    report.push_residue("existence condition", lhs, Zp(action.p()).zero());
    Ok(report)
}

/// Result of completing partial isotropy data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub isotropy: LineIsotropy,
    pub free: Unknown,
    /// The free entry's coefficient vanishes mod `p` and the condition holds
    /// regardless: every value works and 0 was filled in.
    pub any_value: bool,
}

/// Fills in the single unknown entry so the existence condition holds.
pub fn solve_existence(action: &GroupAction, partial: &PartialLineIsotropy) -> Result<Completion> {
    require_congruence_input(action)?;
    let unknowns = partial.unknowns();
    let free = match unknowns.as_slice() {
        [] => return Err(Error::Overdetermined),
        [u] => *u,
        _ => return Err(Error::Underdetermined(unknowns.len())),
    };
    let z = Zp(action.p());
    let mut filled = partial.clone();
    *filled.slot(free)? = Some(0);
    let iso = LineIsotropy {
        lambda_points: filled.lambda_points.iter().map(|v| v.unwrap()).collect(),
        lambda_spheres: filled.lambda_spheres.iter().map(|v| v.unwrap()).collect(),
        m_spheres: filled.m_spheres.iter().map(|v| v.unwrap()).collect(),
        c1_squared: None,
    };
    let residual = existence_residual(action, &iso)?;
    let coefficient = match free {
        Unknown::LambdaPoint(i) => {
            let pt = action.points()[i];
            z.inv_ab(pt.a(), pt.b())?
        }
        Unknown::LambdaSphere(j) => {
            let s = action.spheres()[j];
            let ic = z.inv(s.c())?;
            -(z.r(s.alpha) * ic * ic)
        }
        Unknown::M(j) => z.inv(action.spheres()[j].c())?,
    };
    let (value, any_value) = if coefficient.is_zero() {
        if residual.is_zero() {
            (0, true)
        } else {
            return Err(Error::NotSolvable);
        }
    } else {
        ((-residual * coefficient.inv()?).symmetric(), false)
    };
    let mut out = filled;
    *out.slot(free)? = Some(value);
    let isotropy = LineIsotropy {
        lambda_points: out.lambda_points.into_iter().map(Option::unwrap).collect(),
        lambda_spheres: out.lambda_spheres.into_iter().map(Option::unwrap).collect(),
        m_spheres: out.m_spheres.into_iter().map(Option::unwrap).collect(),
        c1_squared: None,
    };
    Ok(Completion { isotropy, free, any_value })
}

/// Twisted series checks stop at order 2, or at `p - 2` for `p = 3`.
fn series_order(p: u64) -> usize {
    (p as usize - 2).min(2)
}

/// Relations (i) and (ii) for an equivariant line bundle, plus the series
/// check through order 2.
pub fn check_line_bundle(action: &GroupAction, iso: &LineIsotropy) -> Result<CongruenceReport> {
    require_congruence_input(action)?;
    iso.check_lengths(action)?;
    let c1sq = iso.c1_squared.ok_or(Error::MissingChernSquare)?;
    let p = action.p();
    let z = Zp(p);
    let (mut first, mut second) = (z.zero(), z.zero());
    for (pt, &l) in action.points().iter().zip(&iso.lambda_points) {
        let inv = z.inv_ab(pt.a(), pt.b())?;
        first = first + z.r(l) * inv;
        second = second + z.r(l) * z.r(l) * inv;
    }
    for ((s, &l), &m) in action.spheres().iter().zip(&iso.lambda_spheres).zip(&iso.m_spheres) {
        let ic = z.inv(s.c())?;
        let (l, m, alpha) = (z.r(l), z.r(m), z.r(s.alpha));
        first = first - l * alpha * ic * ic + m * ic;
        second = second - l * l * alpha * ic * ic + (l * m * ic).scale(2);
    }
    let mut report = CongruenceReport::default();
    report.push_residue("relation (i)", first, z.zero());
    report.push_residue("relation (ii)", second, z.r(c1sq));

    let order = series_order(p);
    let ex = Expander::new(PrimeField::new(p)?, order);
    let mut series = PowerSeries::zero(*ex.ring(), order);
    for (pt, &l) in action.points().iter().zip(&iso.lambda_points) {
        series = series.add(&ex.point(pt.a() as i64, pt.b() as i64, l)?);
    }
    for ((s, &l), &m) in action.spheres().iter().zip(&iso.lambda_spheres).zip(&iso.m_spheres) {
        let c = s.c() as i64;
        series = series.add(&ex.sphere(c, s.alpha, l)?).add(&ex.boundary(c, m, l)?);
    }
    let required = [z.zero(), z.zero(), z.r(action.signature()) + z.r(c1sq).scale(2)];
    for (k, c) in series.coeffs().iter().enumerate() {
        report.push_residue(format!("series order {k}"), z.u(*c), required[k]);
    }
    Ok(report)
}

/// The SU(2) relation `≡ -c_2(E)` and the series check through order 2.
/// Weights are fibre weights.
pub fn check_su2(action: &GroupAction, iso: &Su2Isotropy) -> Result<CongruenceReport> {
    require_congruence_input(action)?;
    iso.check_lengths(action)?;
    let p = action.p();
    let z = Zp(p);
    let mut acc = z.zero();
    for (pt, &l) in action.points().iter().zip(&iso.ell_points) {
        acc = acc + z.r(l) * z.r(l) * z.inv_ab(pt.a(), pt.b())?;
    }
    for ((s, &l), &m) in action.spheres().iter().zip(&iso.ell_spheres).zip(&iso.m_spheres) {
        let ic = z.inv(s.c())?;
        let (l, m, alpha) = (z.r(l), z.r(m), z.r(s.alpha));
        acc = acc - alpha * l * l * ic * ic + (l * ic * m).scale(2);
    }
    let mut report = CongruenceReport::default();
    report.push_residue("su2 relation", acc, z.r(-iso.c2));

    let order = series_order(p);
    let ex = Expander::new(PrimeField::new(p)?, order);
    let mut series = PowerSeries::zero(*ex.ring(), order);
    for (pt, &l) in action.points().iter().zip(&iso.ell_points) {
        series = series.add(&ex.su2_point(pt.a() as i64, pt.b() as i64, l)?);
    }
    for ((s, &l), &m) in action.spheres().iter().zip(&iso.ell_spheres).zip(&iso.m_spheres) {
        series = series.add(&ex.su2_sphere(s.c() as i64, s.alpha, m, l)?);
    }
    let required = [z.zero(), z.zero(), z.r(2 * action.signature() - 4 * iso.c2)];
    for (k, c) in series.coeffs().iter().enumerate() {
        report.push_residue(format!("series order {k}"), z.u(*c), required[k]);
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Lens space data

/// Self-linking of the fibre class in `L(n; a, b)`: `ab/n` in `[0, 1)`.
pub fn linking_form(n: u64, a: i64, b: i64) -> Result<Rational> {
    if n < 2 {
        return Err(Error::InvalidModulus { modulus: n, min: 2 });
    }
    for v in [a, b] {
        if gcd(v, n as i64) != 1 {
            return Err(Error::NotCoprime(v.unsigned_abs(), n));
        }
    }
    let num = (a as i128 * b as i128).rem_euclid(n as i128) as i64;
    Ok(Rational::new(num.into(), (n as i64).into()))
}

/// Chern class of the flat line bundle with weight `λ` on `L(n; a, b)`, as a
/// multiple of the fibre class: `λ/(ab) mod n`.
pub fn flat_chern_class(n: u64, a: i64, b: i64, lambda: i64) -> Result<Residue> {
    if n < 2 {
        return Err(Error::InvalidModulus { modulus: n, min: 2 });
    }
    let ab = (a as i128 * b as i128).rem_euclid(n as i128) as i64;
    let inv = mod_inverse(ab, n).map_err(|_| Error::NotCoprime(ab.unsigned_abs(), n))?;
    Ok(Residue::new(lambda, n)? * inv)
}

/// `ℓ mod p^{e+1}·ᾱ` with `ℓ ≡ -λα (mod p^{e+1})` and `ℓ ≡ c·m (mod ᾱ)`,
/// where `α = ±p^e ᾱ`. `c` is taken as its representative in `[1, p)`.
pub fn boundary_chern_data(sphere: FixedSphere, lambda: i64, m: i64, p: u64) -> Result<Residue> {
    if sphere.alpha == 0 {
        return Err(Error::ZeroSelfIntersection);
    }
    let (e, bar) = split_prime_power(sphere.alpha.unsigned_abs(), p);
    let pe1 = p.checked_pow(e + 1).ok_or_else(|| Error::InvalidAction(format!("p^{} overflows", e + 1)))?;
    let r1 = (-(lambda as i128) * sphere.alpha as i128).rem_euclid(pe1 as i128) as i64;
    let r2 = (sphere.c() as i128 * m as i128).rem_euclid(bar as i128) as i64;
    crt_solve(r1, pe1, r2, bar)
}

/// Glues the model `linear_cp2(p, -c_j, 0)` onto sphere `j` and extends the
/// isotropy data: the new point `(-c_j, -c_j)` gets `λ_j`, the merged sphere
/// keeps `λ_j` and `m_j`. The existence condition is preserved.
pub fn sum_cp2_at_sphere(action: &GroupAction, iso: &LineIsotropy, j: usize) -> Result<(GroupAction, LineIsotropy)> {
    iso.check_lengths(action)?;
    let sphere = *action.spheres().get(j).ok_or(Error::IndexOutOfRange { index: j, len: action.spheres().len() })?;
    let model = linear_cp2(action.p(), -(sphere.c() as i64), 0)?;
    let sum = connected_sum_spheres(action, j, &model, 0)?;
    let mut out = iso.clone();
    out.lambda_points.push(iso.lambda_spheres[j]);
    out.c1_squared = None;
    Ok((sum, out))
}

// ---------------------------------------------------------------------------
// Search

/// Shape of the actions to enumerate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchParams {
    pub p: u64,
    pub n_points: usize,
    pub sphere_alphas: Vec<i64>,
    pub signature: i64,
    pub euler: i64,
    pub b2: i64,
}

impl SearchParams {
    fn check(&self) -> Result<()> {
        let fixed = self.n_points as i64 + 2 * self.sphere_alphas.len() as i64;
        if fixed != self.b2 + 2 || self.euler != self.b2 + 2 {
            return Err(Error::InconsistentCounts(format!(
                "{} points + 2*{} spheres = {fixed}, chi = {}, b2 + 2 = {}",
                self.n_points,
                self.sphere_alphas.len(),
                self.euler,
                self.b2 + 2
            )));
        }
        if self.p == 2 || !crate::arith::is_prime(self.p) {
            return Err(Error::NotPrime { value: self.p });
        }
        Ok(())
    }
}

/// All rotation data of the given shape passing every rotation relation,
/// deduplicated, in increasing order of (sorted points, spheres). With a
/// limit, only the first `limit` results in that order are produced.
pub fn search_realizable(params: &SearchParams, limit: Option<usize>) -> Result<Vec<GroupAction>> {
    use rayon::prelude::*;

    params.check()?;
    let p = params.p;
    let z = Zp(p);
    let checker = RotationRelations::new(p)?;
    let classes = point_classes(p);
    // classes with a given value of 1/(ab), for completing relation (1)
    let mut by_weight: Vec<Vec<usize>> = vec![Vec::new(); p as usize];
    for (i, pt) in classes.iter().enumerate() {
        by_weight[z.inv_ab(pt.0, pt.1)?.value() as usize].push(i);
    }
    let sphere_choices = sphere_assignments(p, &params.sphere_alphas);
    let n = params.n_points;

    let shard = |first: Option<usize>| -> Result<Vec<GroupAction>> {
        let mut found = Vec::new();
        let mut idx: Vec<usize> = Vec::with_capacity(n);
        for spheres in &sphere_choices {
            let mut base = z.zero();
            for &(c, alpha) in spheres {
                let ic = z.inv(c)?;
                base = base - z.r(alpha) * ic * ic;
            }
            match first {
                None => {
                    if base.is_zero() {
                        push_if_valid(&checker, params, &classes, &[], spheres, &mut found)?;
                    }
                }
                Some(f) => {
                    idx.clear();
                    idx.push(f);
                    extend(&mut idx, n, &classes, &by_weight, z, base, &mut |ix| {
                        push_if_valid(&checker, params, &classes, ix, spheres, &mut found)
                    })?;
                }
            }
        }
        let mut keyed: Vec<_> = found.into_iter().map(|a| (sort_key(&a), a)).collect();
        keyed.sort_by(|x, y| x.0.cmp(&y.0));
        keyed.dedup_by(|x, y| x.0 == y.0);
        Ok(keyed.into_iter().map(|(_, a)| a).collect())
    };

    let shards: Vec<Option<usize>> = if n == 0 { vec![None] } else { (0..classes.len()).map(Some).collect() };
    let mut out = Vec::new();
    let batch = rayon::current_num_threads().max(1) * 4;
    for chunk in shards.chunks(batch) {
        let results: Vec<Result<Vec<GroupAction>>> = chunk.par_iter().map(|&s| shard(s)).collect();
        for r in results {
            out.extend(r?);
        }
        if let Some(l) = limit {
            if out.len() >= l {
                out.truncate(l);
                break;
            }
        }
    }
    Ok(out)
}

type SortKey = (Vec<(u64, u64)>, Vec<(u64, i64)>);

fn sort_key(a: &GroupAction) -> SortKey {
    let c = a.canonical();
    (c.points().iter().map(|pt| (pt.a(), pt.b())).collect(), c.spheres().iter().map(|s| (s.c(), s.alpha)).collect())
}

/// Canonical representatives of all points with unit rotation numbers, sorted.
fn point_classes(p: u64) -> Vec<(u64, u64)> {
    let mut v: Vec<(u64, u64)> = (1..p as i64)
        .flat_map(|a| (1..p as i64).map(move |b| (a, b)))
        .map(|(a, b)| {
            let pt = crate::action::IsolatedPoint::new(p, a, b);
            (pt.a(), pt.b())
        })
        .collect();
    v.sort();
    v.dedup();
    v
}

/// Normal rotations for each sphere; spheres with equal `α` get
/// non-decreasing `c` so each multiset appears once.
fn sphere_assignments(p: u64, alphas: &[i64]) -> Vec<Vec<(u64, i64)>> {
    let mut alphas = alphas.to_vec();
    alphas.sort();
    let mut out = vec![Vec::new()];
    for (k, &alpha) in alphas.iter().enumerate() {
        let mut next = Vec::new();
        for prefix in &out {
            let start = match (k > 0 && alphas[k - 1] == alpha, prefix.last()) {
                (true, Some(&(c, _))) => c,
                _ => 1,
            };
            for c in start..p {
                let mut v: Vec<(u64, i64)> = prefix.clone();
                v.push((c, alpha));
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Extends a non-decreasing index sequence to length `n`; the last index is
/// forced by relation (1).
fn extend(
    idx: &mut Vec<usize>,
    n: usize,
    classes: &[(u64, u64)],
    by_weight: &[Vec<usize>],
    z: Zp,
    base: Residue,
    visit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    let partial = idx.iter().try_fold(base, |acc, &i| Ok::<_, Error>(acc + z.inv_ab(classes[i].0, classes[i].1)?))?;
    if idx.len() == n {
        if partial.is_zero() {
            visit(idx)?;
        }
        return Ok(());
    }
    let lo = *idx.last().unwrap();
    if idx.len() + 1 == n {
        let need = (-partial).value() as usize;
        for &i in &by_weight[need] {
            if i >= lo {
                idx.push(i);
                visit(idx)?;
                idx.pop();
            }
        }
        return Ok(());
    }
    for i in lo..classes.len() {
        idx.push(i);
        extend(idx, n, classes, by_weight, z, base, visit)?;
        idx.pop();
    }
    Ok(())
}

fn push_if_valid(
    checker: &RotationRelations,
    params: &SearchParams,
    classes: &[(u64, u64)],
    idx: &[usize],
    spheres: &[(u64, i64)],
    found: &mut Vec<GroupAction>,
) -> Result<()> {
    let points: Vec<(i64, i64)> = idx.iter().map(|&i| (classes[i].0 as i64, classes[i].1 as i64)).collect();
    let spheres: Vec<(i64, i64)> = spheres.iter().map(|&(c, a)| (c as i64, a)).collect();
    let action = GroupAction::new(params.p, &points, &spheres, params.signature, params.euler, params.b2)?;
    if checker.check(&action)?.passed() {
        found.push(action);
    }
    Ok(())
}

/// Exact `Σ_k Sign(t^k, X)`; `None` if some value is not rational.
pub fn gsignature_sum(action: &GroupAction) -> Result<Option<Rational>> {
    let mut acc = Rational::zero();
    for v in gsignature_values(action)? {
        match v.as_rational() {
            Some(q) => acc += q,
            None => return Ok(None),
        }
    }
    Ok(Some(acc))
}
