//! Rotation data of a `Z/p` action, the linear models, and equivariant
//! connected sums.

use std::fmt;

use crate::arith::{is_prime, Residue};
use crate::error::{Error, Result};

fn residue(v: i64, p: u64) -> u64 {
    v.rem_euclid(p as i64) as u64
}

/// Representative in `(-p/2, p/2]`.
pub fn symmetric(v: u64, p: u64) -> i64 {
    Residue::new(v as i64, p).map(Residue::symmetric).unwrap_or(v as i64)
}

/// Tangential rotation numbers at an isolated fixed point, defined up to
/// order and simultaneous sign. Stored as residues in `[0, p)`, canonicalised
/// to the lexicographically smallest of the four equivalent pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsolatedPoint {
    a: u64,
    b: u64,
}

impl IsolatedPoint {
    pub fn new(p: u64, a: i64, b: i64) -> Self {
        let (a, b) = (residue(a, p), residue(b, p));
        let neg = |x: u64| (p - x) % p;
        let candidates = [(a, b), (b, a), (neg(a), neg(b)), (neg(b), neg(a))];
        let (a, b) = candidates.into_iter().min().unwrap();
        Self { a, b }
    }

    pub fn a(self) -> u64 {
        self.a
    }

    pub fn b(self) -> u64 {
        self.b
    }

    pub fn is_degenerate(self) -> bool {
        self.a == 0 || self.b == 0
    }

    /// The pair in the `(-p/2, p/2]` display convention.
    pub fn display_pair(self, p: u64) -> (i64, i64) {
        (symmetric(self.a, p), symmetric(self.b, p))
    }

    /// The point seen from the opposite orientation: `(a, -b)`.
    pub fn reversed(self, p: u64) -> Self {
        Self::new(p, self.a as i64, -(self.b as i64))
    }
}

/// A fixed 2-sphere: normal rotation `c` and self-intersection `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FixedSphere {
    c: u64,
    pub alpha: i64,
}

impl FixedSphere {
    pub fn new(p: u64, c: i64, alpha: i64) -> Self {
        Self { c: residue(c, p), alpha }
    }

    pub fn c(self) -> u64 {
        self.c
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupAction {
    p: u64,
    points: Vec<IsolatedPoint>,
    spheres: Vec<FixedSphere>,
    signature: i64,
    euler: i64,
    b2: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    /// `p = 2`: only the moduli computations apply.
    pub involution: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl GroupAction {
    /// Points and spheres are reduced mod `p`; nothing else is checked here,
    /// see [`GroupAction::validate`].
    pub fn new(
        p: u64,
        points: &[(i64, i64)],
        spheres: &[(i64, i64)],
        signature: i64,
        euler: i64,
        b2: i64,
    ) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidModulus { modulus: p, min: 2 });
        }
        Ok(Self {
            p,
            points: points.iter().map(|&(a, b)| IsolatedPoint::new(p, a, b)).collect(),
            spheres: spheres.iter().map(|&(c, alpha)| FixedSphere::new(p, c, alpha)).collect(),
            signature,
            euler,
            b2,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn points(&self) -> &[IsolatedPoint] {
        &self.points
    }
    pub fn spheres(&self) -> &[FixedSphere] {
        &self.spheres
    }
    pub fn signature(&self) -> i64 {
        self.signature
    }
    pub fn euler(&self) -> i64 {
        self.euler
    }
    pub fn b2(&self) -> i64 {
        self.b2
    }

    pub fn validate(&self) -> ValidationReport {
        let p = self.p;
        let mut checks = Vec::new();
        let prime = is_prime(p);
        checks.push(Check {
            name: "prime order",
            passed: prime,
            detail: if !prime {
                format!("{p} is not prime")
            } else if p == 2 {
                "p = 2: moduli computations only".into()
            } else {
                format!("p = {p}")
            },
        });
        let zero_pts = self.points.iter().filter(|pt| pt.is_degenerate()).count();
        let zero_sph = self.spheres.iter().filter(|s| s.c == 0).count();
        checks.push(Check {
            name: "zero rotation",
            passed: zero_pts + zero_sph == 0,
            detail: if zero_pts + zero_sph == 0 {
                "all rotation numbers are units".into()
            } else {
                format!("{zero_pts} point(s) and {zero_sph} sphere(s) with a rotation number = 0 (mod {p})")
            },
        });
        let fixed = self.points.len() as i64 + 2 * self.spheres.len() as i64;
        checks.push(Check {
            name: "lefschetz count",
            passed: fixed == self.b2 + 2,
            detail: format!("{} + 2*{} = {fixed}, b2 + 2 = {}", self.points.len(), self.spheres.len(), self.b2 + 2),
        });
        checks.push(Check {
            name: "euler characteristic",
            passed: self.euler == self.b2 + 2,
            detail: format!("chi = {}, b2 + 2 = {}", self.euler, self.b2 + 2),
        });
        checks.push(Check {
            name: "signature bound",
            passed: self.signature.abs() <= self.b2 && (self.b2 - self.signature) % 2 == 0,
            detail: format!("|{}| <= {} with matching parity", self.signature, self.b2),
        });
        ValidationReport { checks, involution: p == 2 }
    }

    /// Same manifold with the opposite orientation.
    pub fn reversed(&self) -> Self {
        Self {
            p: self.p,
            points: self.points.iter().map(|pt| pt.reversed(self.p)).collect(),
            spheres: self.spheres.iter().map(|s| FixedSphere { c: s.c, alpha: -s.alpha }).collect(),
            signature: -self.signature,
            euler: self.euler,
            b2: self.b2,
        }
    }

    /// Order-independent form: sorted points and spheres.
    pub fn canonical(&self) -> Self {
        let mut out = self.clone();
        out.points.sort();
        out.spheres.sort();
        out
    }

    pub fn same_data(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(self.p, other.p))
        }
    }
}

impl fmt::Display for GroupAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        let pts: Vec<String> = self
            .points
            .iter()
            .map(|pt| {
                let (a, b) = pt.display_pair(p);
                format!("({a}, {b})")
            })
            .collect();
        let sph: Vec<String> =
            self.spheres.iter().map(|s| format!("(c={}, alpha={})", symmetric(s.c, p), s.alpha)).collect();
        write!(
            f,
            "p={p} points=[{}] spheres=[{}] sign={} chi={} b2={}",
            pts.join(", "),
            sph.join(", "),
            self.signature,
            self.euler,
            self.b2
        )
    }
}

fn require_unit(p: u64, v: i64, what: &str) -> Result<()> {
    if residue(v, p) == 0 {
        Err(Error::BadWeights(format!("{what} = {v} is 0 mod {p}")))
    } else {
        Ok(())
    }
}

/// `[z0 : z1 : z2] ↦ [z0 : ζ^a z1 : ζ^b z2]` on CP².
pub fn linear_cp2(p: u64, a: i64, b: i64) -> Result<GroupAction> {
    let (ra, rb) = (residue(a, p), residue(b, p));
    if ra == 0 && rb == 0 {
        return Err(Error::BadWeights("both weights are 0".into()));
    }
    if ra == rb {
        return Err(Error::BadWeights(format!("a = b = {ra} (mod {p})")));
    }
    if rb == 0 || ra == 0 {
        let a = if rb == 0 { a } else { b };
        return GroupAction::new(p, &[(a, a)], &[(a, 1)], 1, 3, 1);
    }
    GroupAction::new(p, &[(a, b), (b - a, -a), (a - b, -b)], &[], 1, 3, 1)
}

/// CP² with reversed orientation and the weight-`a` action.
pub fn linear_cp2_bar(p: u64, a: i64) -> Result<GroupAction> {
    require_unit(p, a, "a")?;
    GroupAction::new(p, &[(a, -a)], &[(a, -1)], -1, 3, 1)
}

/// Suspension of the rotation `(a, b)` on S³.
pub fn linear_s4(p: u64, a: i64, b: i64) -> Result<GroupAction> {
    require_unit(p, a, "a")?;
    require_unit(p, b, "b")?;
    GroupAction::new(p, &[(a, b), (a, -b)], &[], 0, 2, 0)
}

fn check_index(index: usize, len: usize) -> Result<()> {
    if index < len {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index, len })
    }
}

/// Sum at isolated points. Point `j` of `b` must be point `i` of `a` with
/// the orientation reversed.
pub fn connected_sum_points(a: &GroupAction, i: usize, b: &GroupAction, j: usize) -> Result<GroupAction> {
    a.same_group(b)?;
    check_index(i, a.points.len())?;
    check_index(j, b.points.len())?;
    let p = a.p;
    if b.points[j].reversed(p) != a.points[i] {
        let (x, y) = a.points[i].display_pair(p);
        let (u, v) = b.points[j].display_pair(p);
        return Err(Error::IncompatiblePoints(format!(
            "({x}, {y}) cannot be glued to ({u}, {v}); need ({x}, {}) up to order and sign",
            -y
        )));
    }
    let mut points: Vec<_> = a.points.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, pt)| *pt).collect();
    points.extend(b.points.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, pt)| *pt));
    let mut spheres = a.spheres.clone();
    spheres.extend_from_slice(&b.spheres);
    Ok(GroupAction {
        p,
        points,
        spheres,
        signature: a.signature + b.signature,
        euler: a.euler + b.euler - 2,
        b2: a.b2 + b.b2,
    })
}

/// Sum at points of fixed spheres; requires `c_b = -c_a (mod p)`. The merged
/// sphere keeps `c_a` and position `i`, with self-intersection `α_a + α_b`.
pub fn connected_sum_spheres(a: &GroupAction, i: usize, b: &GroupAction, j: usize) -> Result<GroupAction> {
    a.same_group(b)?;
    check_index(i, a.spheres.len())?;
    check_index(j, b.spheres.len())?;
    let p = a.p;
    let (sa, sb) = (a.spheres[i], b.spheres[j]);
    if (sa.c + sb.c) % p != 0 {
        return Err(Error::IncompatibleSpheres(format!(
            "normal rotations {} and {} do not satisfy c' = -c (mod {p})",
            symmetric(sa.c, p),
            symmetric(sb.c, p)
        )));
    }
    let mut points = a.points.clone();
    points.extend_from_slice(&b.points);
    let mut spheres = a.spheres.clone();
    spheres[i].alpha += sb.alpha;
    spheres.extend(b.spheres.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, s)| *s));
    Ok(GroupAction {
        p,
        points,
        spheres,
        signature: a.signature + b.signature,
        euler: a.euler + b.euler - 2,
        b2: a.b2 + b.b2,
    })
}

/// `#3 CP̄²` with `p = 5`, points `{(1,-1), (2,-1), (2,-1)}` and one sphere
/// `(1, -2)`, assembled from linear models.
pub fn three_cp2_bar_action() -> GroupAction {
    let build = || -> Result<GroupAction> {
        let two = connected_sum_spheres(&linear_cp2_bar(5, 1)?, 0, &linear_cp2_bar(5, 4)?, 0)?;
        let three_point = linear_cp2(5, 1, 4)?.reversed();
        let j = three_point
            .points
            .iter()
            .position(|pt| pt.reversed(5) == two.points[0])
            .ok_or_else(|| Error::IncompatiblePoints("no matching point".into()))?;
        connected_sum_points(&two, 0, &three_point, j)
    };
    build().expect("linear models glue")
}

// ---------------------------------------------------------------------------
// Isotropy data

/// Weights of a `Z/p` lift to a line bundle: `t^λ` over each fixed point and
/// sphere, plus `m_j = c_1(L|F_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LineIsotropy {
    pub lambda_points: Vec<i64>,
    pub lambda_spheres: Vec<i64>,
    pub m_spheres: Vec<i64>,
    pub c1_squared: Option<i64>,
}

impl LineIsotropy {
    pub fn zero(action: &GroupAction) -> Self {
        Self {
            lambda_points: vec![0; action.points.len()],
            lambda_spheres: vec![0; action.spheres.len()],
            m_spheres: vec![0; action.spheres.len()],
            c1_squared: Some(0),
        }
    }

    pub fn check_lengths(&self, action: &GroupAction) -> Result<()> {
        let (np, ns) = (action.points.len(), action.spheres.len());
        if self.lambda_points.len() != np || self.lambda_spheres.len() != ns || self.m_spheres.len() != ns {
            return Err(Error::LengthMismatch(format!(
                "isotropy has {}/{}/{} entries, action has {np} points and {ns} spheres",
                self.lambda_points.len(),
                self.lambda_spheres.len(),
                self.m_spheres.len()
            )));
        }
        Ok(())
    }
}

/// Which entry of a [`LineIsotropy`] is unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unknown {
    LambdaPoint(usize),
    LambdaSphere(usize),
    M(usize),
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unknown::LambdaPoint(i) => write!(f, "lambda[{i}]"),
            Unknown::LambdaSphere(j) => write!(f, "lambda_sphere[{j}]"),
            Unknown::M(j) => write!(f, "m[{j}]"),
        }
    }
}

impl std::str::FromStr for Unknown {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad =
            || Error::InvalidAction(format!("unknown identifier '{s}'; expected lambda[i], lambda_sphere[j] or m[j]"));
        let (name, rest) = s.split_once('[').ok_or_else(bad)?;
        let idx: usize = rest.strip_suffix(']').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        match name.trim() {
            "lambda" => Ok(Unknown::LambdaPoint(idx)),
            "lambda_sphere" => Ok(Unknown::LambdaSphere(idx)),
            "m" => Ok(Unknown::M(idx)),
            _ => Err(bad()),
        }
    }
}

/// Line isotropy data with some entries unknown.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartialLineIsotropy {
    pub lambda_points: Vec<Option<i64>>,
    pub lambda_spheres: Vec<Option<i64>>,
    pub m_spheres: Vec<Option<i64>>,
}

impl PartialLineIsotropy {
    /// Copies `full` and forgets `free`.
    pub fn with_free(full: &LineIsotropy, free: Unknown) -> Result<Self> {
        let mut out = Self {
            lambda_points: full.lambda_points.iter().copied().map(Some).collect(),
            lambda_spheres: full.lambda_spheres.iter().copied().map(Some).collect(),
            m_spheres: full.m_spheres.iter().copied().map(Some).collect(),
        };
        *out.slot(free)? = None;
        Ok(out)
    }

    pub fn slot(&mut self, u: Unknown) -> Result<&mut Option<i64>> {
        let (v, i) = match u {
            Unknown::LambdaPoint(i) => (&mut self.lambda_points, i),
            Unknown::LambdaSphere(j) => (&mut self.lambda_spheres, j),
            Unknown::M(j) => (&mut self.m_spheres, j),
        };
        let len = v.len();
        v.get_mut(i).ok_or(Error::IndexOutOfRange { index: i, len })
    }

    pub fn unknowns(&self) -> Vec<Unknown> {
        let mut out = Vec::new();
        out.extend(
            self.lambda_points.iter().enumerate().filter(|(_, v)| v.is_none()).map(|(i, _)| Unknown::LambdaPoint(i)),
        );
        out.extend(
            self.lambda_spheres.iter().enumerate().filter(|(_, v)| v.is_none()).map(|(i, _)| Unknown::LambdaSphere(i)),
        );
        out.extend(self.m_spheres.iter().enumerate().filter(|(_, v)| v.is_none()).map(|(i, _)| Unknown::M(i)));
        out
    }
}

/// SU(2) lift: `E` restricted to a fixed point is `t^ℓ ⊕ t^{-ℓ}` with `ℓ` the
/// fibre weight. Over a sphere `E = L ⊕ L^{-1}` with `m_j = c_1(L)[F_j]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Su2Isotropy {
    pub ell_points: Vec<i64>,
    pub ell_spheres: Vec<i64>,
    pub m_spheres: Vec<i64>,
    pub c2: i64,
}

impl Su2Isotropy {
    pub fn check_lengths(&self, action: &GroupAction) -> Result<()> {
        let (np, ns) = (action.points.len(), action.spheres.len());
        if self.ell_points.len() != np || self.ell_spheres.len() != ns || self.m_spheres.len() != ns {
            return Err(Error::LengthMismatch(format!(
                "isotropy has {}/{}/{} entries, action has {np} points and {ns} spheres",
                self.ell_points.len(),
                self.ell_spheres.len(),
                self.m_spheres.len()
            )));
        }
        Ok(())
    }

    /// Representatives in `[0, (p-1)/2]`. Swapping `L` and `L^{-1}` over a
    /// sphere flips `m` together with `ℓ`.
    pub fn canonical(&self, p: u64) -> Self {
        let half = |l: i64| {
            let r = residue(l, p);
            if 2 * r > p {
                (p - r) as i64
            } else {
                r as i64
            }
        };
        let mut out = self.clone();
        out.ell_points = self.ell_points.iter().map(|&l| half(l)).collect();
        for (j, &l) in self.ell_spheres.iter().enumerate() {
            let r = residue(l, p);
            if 2 * r > p {
                out.ell_spheres[j] = (p - r) as i64;
                out.m_spheres[j] = -self.m_spheres[j];
            } else {
                out.ell_spheres[j] = r as i64;
            }
        }
        out
    }

    /// Weights of the adjoint bundle `ad E = L^2 ⊕ R`, which is what the
    /// dimension formula consumes.
    pub fn adjoint_lift(&self) -> AdjointLift {
        AdjointLift {
            ell_points: self.ell_points.iter().map(|l| 2 * l).collect(),
            ell_spheres: self.ell_spheres.iter().map(|l| 2 * l).collect(),
            m_spheres: self.m_spheres.clone(),
        }
    }

    /// Halves adjoint weights mod `p` (`p` odd).
    pub fn from_adjoint(lift: &AdjointLift, p: u64, c2: i64) -> Result<Self> {
        if p.is_multiple_of(2) {
            return Err(Error::EvenPrime(p));
        }
        let half = crate::arith::mod_inverse(2, p)?;
        let h = |l: &i64| Residue::new(*l, p).map(|r| (r * half).value() as i64);
        Ok(Self {
            ell_points: lift.ell_points.iter().map(h).collect::<Result<_>>()?,
            ell_spheres: lift.ell_spheres.iter().map(h).collect::<Result<_>>()?,
            m_spheres: lift.m_spheres.clone(),
            c2,
        })
    }
}

/// Adjoint-bundle weights: `t^ℓ` on the nontrivial line of `ad E` at each
/// fixed point and sphere, with `m_j` the degree of the local reduction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AdjointLift {
    pub ell_points: Vec<i64>,
    pub ell_spheres: Vec<i64>,
    pub m_spheres: Vec<i64>,
}

impl AdjointLift {
    pub fn check_lengths(&self, action: &GroupAction) -> Result<()> {
        let (np, ns) = (action.points.len(), action.spheres.len());
        if self.ell_points.len() != np || self.ell_spheres.len() != ns || self.m_spheres.len() != ns {
            return Err(Error::LengthMismatch(format!(
                "lift has {}/{}/{} entries, action has {np} points and {ns} spheres",
                self.ell_points.len(),
                self.ell_spheres.len(),
                self.m_spheres.len()
            )));
        }
        Ok(())
    }
}
