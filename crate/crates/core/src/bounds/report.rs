use std::fmt;
use std::time::Instant;

use crate::bounds::constants::MassConstants;
use crate::bounds::estimators::{tc1_bound, tc2_bound, tc3_bound, tc4_bound, tc_at, tc_bound, virial_bound};
use crate::bounds::fmethod::{f_method_bound, FMethodCase};
use crate::bounds::lower::lower_bound;
use crate::bounds::search::{BoundConfig, SearchCertificate};
use crate::datum::{DatumKind, InitialDatum};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::oracles::{disk_asymptotic_fixed_height, disk_asymptotic_fixed_radius, oracles_for};
use crate::scalar::{critical_mass, Scalar};

/// Role of a row in the ordering `lower <= T*_c <= upper`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// Lower bound on `T*_c`.
    Lower,
    /// `T*_c` itself.
    Critical,
    /// Upper bound on `T*_c`.
    Upper,
    /// Upper bound on the blow-up time `T*` but not on `T*_c`; excluded from
    /// the ordering check.
    DirectUpper,
    /// Closed-form value of `T*_c`; must agree with the `Critical` row.
    Reference,
    /// Leading-order behavior as `M ↓ 8π`; informational only.
    Asymptotic,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::Lower => "lower",
            BoundKind::Critical => "critical",
            BoundKind::Upper => "upper",
            BoundKind::DirectUpper => "direct-upper",
            BoundKind::Reference => "exact-reference",
            BoundKind::Asymptotic => "asymptotic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::Lower, Self::Critical, Self::Upper, Self::DirectUpper, Self::Reference, Self::Asymptotic]
            .into_iter()
            .find(|k| k.as_str() == s)
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Computed,
    Inapplicable(String),
    Failed(String),
}

impl Status {
    pub fn is_computed(&self) -> bool {
        matches!(self, Status::Computed)
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Status::Computed => "computed",
            Status::Inapplicable(_) => "inapplicable",
            Status::Failed(_) => "failed",
        }
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            Status::Computed => None,
            Status::Inapplicable(r) | Status::Failed(r) => Some(r),
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Computed => f.write_str("computed"),
            Status::Inapplicable(r) => write!(f, "inapplicable: {}", r),
            Status::Failed(r) => write!(f, "failed: {}", r),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundEstimate<S> {
    pub name: String,
    /// `+∞` for uninformative or non-computed rows.
    pub value: S,
    pub kind: BoundKind,
    pub assumptions: Vec<String>,
    pub status: Status,
    /// Free-form auxiliary information (maximizers, search centers).
    pub detail: String,
    /// Center at which the estimate was attained, where meaningful.
    pub center: Option<Point<S>>,
    pub seconds: f64,
}

impl<S: Scalar> BoundEstimate<S> {
    fn new(name: &str, kind: BoundKind, assumptions: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            value: S::infinity(),
            kind,
            assumptions: assumptions.iter().map(|s| s.to_string()).collect(),
            status: Status::Computed,
            detail: String::new(),
            center: None,
            seconds: 0.0,
        }
    }

    fn computed(mut self, value: S) -> Self {
        self.value = value;
        self.status = Status::Computed;
        self
    }

    fn with_detail(mut self, detail: String) -> Self {
        self.detail = detail;
        self
    }

    fn at(mut self, z: Point<S>) -> Self {
        self.center = Some(z);
        self
    }

    fn failed_with(mut self, e: Error) -> Self {
        self.value = S::infinity();
        self.status = match e {
            Error::UnboundedSupport
            | Error::Unbounded
            | Error::NotRadial
            | Error::MomentDivergence { .. }
            | Error::NormDivergence { .. }
            | Error::HypothesisCheckFailure(_) => Status::Inapplicable(e.to_string()),
            other => Status::Failed(other.to_string()),
        };
        self
    }

    fn timed(mut self, start: Instant) -> Self {
        self.seconds = start.elapsed().as_secs_f64();
        self
    }
}

/// One failed comparison of the ordering check.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingViolation<S> {
    pub smaller: String,
    pub larger: String,
    pub smaller_value: S,
    pub larger_value: S,
}

impl<S: Scalar> fmt::Display for OrderingViolation<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = {} exceeds {} = {}",
            self.smaller,
            self.smaller_value.as_f64(),
            self.larger,
            self.larger_value.as_f64()
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<S> {
    pub family: String,
    pub mass: S,
    pub rows: Vec<BoundEstimate<S>>,
    /// Relative slack used by the ordering check.
    pub tolerance: S,
    pub violations: Vec<OrderingViolation<S>>,
    /// How the infimum over centers of `T*_{c,z}` was located.
    pub certificate: Option<SearchCertificate<S>>,
}

impl<S: Scalar> BoundReport<S> {
    pub fn row(&self, name: &str) -> Option<&BoundEstimate<S>> {
        self.rows.iter().find(|r| r.name == name)
    }

    /// Value of a computed row.
    pub fn value(&self, name: &str) -> Option<S> {
        self.row(name).filter(|r| r.status.is_computed()).map(|r| r.value)
    }

    pub fn is_ordered(&self) -> bool {
        self.violations.is_empty()
    }

    /// Re-runs the ordering check over the current rows.
    pub fn check_ordering(&mut self) {
        self.violations = ordering_violations(&self.rows, self.tolerance);
    }
}

/// Every computed lower `<=` the critical row `<=` every computed upper, and
/// references equal to the critical row, all within relative slack `tol`.
/// Infinite upper values never violate.
pub fn ordering_violations<S: Scalar>(rows: &[BoundEstimate<S>], tol: S) -> Vec<OrderingViolation<S>> {
    let computed = |k: BoundKind| rows.iter().filter(move |r| r.kind == k && r.status.is_computed());
    let mut out = Vec::new();
    let mut check = |lo: &BoundEstimate<S>, hi: &BoundEstimate<S>| {
        if lo.value > hi.value * (S::one() + tol) {
            out.push(OrderingViolation {
                smaller: lo.name.clone(),
                larger: hi.name.clone(),
                smaller_value: lo.value,
                larger_value: hi.value,
            });
        }
    };
    for c in computed(BoundKind::Critical) {
        for l in computed(BoundKind::Lower) {
            check(l, c);
        }
        for u in computed(BoundKind::Upper) {
            check(c, u);
        }
        for r in computed(BoundKind::Reference) {
            check(c, r);
            check(r, c);
        }
    }
    for l in computed(BoundKind::Lower) {
        for u in computed(BoundKind::Upper) {
            check(l, u);
        }
    }
    out
}

/// Runs every estimator on `datum`. See [`selected_report`].
pub fn full_report<S: Scalar>(datum: &InitialDatum<S>, cfg: &BoundConfig<S>) -> Result<BoundReport<S>> {
    selected_report(datum, cfg, |_| true)
}

/// Runs the estimators whose row name passes `select` (the `tc` row is
/// always computed), each failure recorded as a row status. Only a
/// subcritical mass aborts.
///
/// The expensive estimators run on scoped threads. `T*_c` is finally
/// re-evaluated at the centers found by the other searches, so that the
/// reported infimum is never above a center another estimator reached.
pub fn selected_report<S, F>(datum: &InitialDatum<S>, cfg: &BoundConfig<S>, select: F) -> Result<BoundReport<S>>
where
    S: Scalar,
    F: Fn(&str) -> bool + Sync,
{
    let k = MassConstants::new(datum.mass())?;
    let want = |n: &str| select(n);

    let (tc, tc1, tc2, tc4, tc4b, lower) = std::thread::scope(|s| {
        let tc = s.spawn(|| {
            let t = Instant::now();
            (tc_bound(datum, cfg), t.elapsed().as_secs_f64())
        });
        let tc1 = s.spawn(|| {
            let t = Instant::now();
            want("tc1").then(|| (tc1_bound(datum, cfg), t.elapsed().as_secs_f64()))
        });
        let tc2 = s.spawn(|| {
            let t = Instant::now();
            want("tc2").then(|| (tc2_bound(datum, cfg), t.elapsed().as_secs_f64()))
        });
        let tc4 = s.spawn(|| {
            let t = Instant::now();
            want("tc4").then(|| (tc4_bound(datum, S::lit(2.0), cfg), t.elapsed().as_secs_f64()))
        });
        let tc4b = s.spawn(|| {
            let t = Instant::now();
            (want("tc4_beta") && cfg.beta > S::lit(2.0))
                .then(|| (tc4_bound(datum, cfg.beta, cfg), t.elapsed().as_secs_f64()))
        });
        let lower = s.spawn(|| {
            let t = Instant::now();
            want("lower").then(|| (lower_bound(datum, cfg.lower_p), t.elapsed().as_secs_f64()))
        });
        (
            tc.join().expect("tc worker"),
            tc1.join().expect("tc1 worker"),
            tc2.join().expect("tc2 worker"),
            tc4.join().expect("tc4 worker"),
            tc4b.join().expect("tc4_beta worker"),
            lower.join().expect("lower worker"),
        )
    });

    let mut rows: Vec<BoundEstimate<S>> = Vec::new();
    let p_label = if cfg.lower_p.is_infinite() { "inf".to_string() } else { format!("{}", cfg.lower_p) };

    if let Some((r, secs)) = lower {
        let lower_assumption = format!("n0 in L^{}", p_label);
        let row = BoundEstimate::new("lower", BoundKind::Lower, &[lower_assumption.as_str()]);
        let row = match r {
            Ok(b) => row.computed(b.value).with_detail(format!(
                "sup-form {} at q'={}; {:?} regime {}",
                b.sup_form.as_f64(),
                b.sup_maximizer.as_f64(),
                b.regime,
                b.regime_value.as_f64()
            )),
            Err(e) => row.failed_with(e),
        };
        rows.push(BoundEstimate { seconds: secs, ..row });
    }

    let mut certificate = None;
    let (tc_value, tc_secs) = {
        let (r, secs) = tc;
        let row = BoundEstimate::new("tc", BoundKind::Critical, &["supercritical mass"]);
        let row = match r {
            Ok(ct) => {
                let z = ct.certificate.z;
                let detail = ct.certificate.summary();
                certificate = Some(ct.certificate);
                row.computed(ct.value).with_detail(detail).at(z)
            }
            Err(e) => row.failed_with(e),
        };
        let v = row.status.is_computed().then_some(row.value);
        rows.push(BoundEstimate { seconds: secs, ..row });
        (v, secs)
    };
    let tc_index = rows.len() - 1;
    let mut extra_centers: Vec<Point<S>> = Vec::new();

    if let Some((r, secs)) = tc1 {
        let row = BoundEstimate::new("tc1", BoundKind::Upper, &["supercritical mass"]);
        let row = match r {
            Ok(b) => {
                extra_centers.push(b.z);
                row.computed(b.value)
                    .with_detail(format!("q={} lambda={}", b.q.as_f64(), b.lambda.as_f64()))
                    .at(b.z)
            }
            Err(e) => row.failed_with(e),
        };
        rows.push(BoundEstimate { seconds: secs, ..row });
    }

    if let Some((r, secs)) = tc2 {
        let row = BoundEstimate::new("tc2", BoundKind::Upper, &["supercritical mass"]);
        let row = match r {
            Ok(b) => {
                extra_centers.push(b.z);
                row.computed(b.value)
                    .with_detail(format!(
                        "rho-form {} at rho={}; theta-form {} at theta={}",
                        b.rho_form.as_f64(),
                        b.rho.as_f64(),
                        b.theta_form.as_f64(),
                        b.theta.as_f64()
                    ))
                    .at(b.z)
            }
            Err(e) => row.failed_with(e),
        };
        rows.push(BoundEstimate { seconds: secs, ..row });
    }

    if want("tc3") || want("tc3_jung") {
        let t = Instant::now();
        let r = tc3_bound(datum);
        let secs = t.elapsed().as_secs_f64();
        let base = BoundEstimate::new("tc3", BoundKind::Upper, &["compact support"]);
        let jung = BoundEstimate::new("tc3_jung", BoundKind::Upper, &["compact support"]);
        let (a, b) = match r {
            Ok(g) => (
                base.computed(g.value)
                    .with_detail(format!("R0={}", g.geometry.r0.as_f64()))
                    .at(g.geometry.center),
                jung.computed(g.jung).with_detail(format!("D={}", g.geometry.diameter.as_f64())),
            ),
            Err(e) => (base.failed_with(e.clone()), jung.failed_with(e)),
        };
        if want("tc3") {
            rows.push(BoundEstimate { seconds: secs, ..a });
        }
        if want("tc3_jung") {
            rows.push(BoundEstimate { seconds: secs, ..b });
        }
    }

    for (name, res, assumption) in [("tc4", tc4, "finite 2-moment"), ("tc4_beta", tc4b, "finite beta-moment")] {
        if let Some((r, secs)) = res {
            let row = BoundEstimate::new(name, BoundKind::Upper, &[assumption]);
            let row = match r {
                Ok(b) => row
                    .computed(b.value)
                    .with_detail(format!(
                        "beta={} variance-form {} infimum-form {}",
                        b.beta.as_f64(),
                        b.variance_form.as_f64(),
                        b.infimum_form.as_f64()
                    ))
                    .at(b.z),
                Err(e) => row.failed_with(e),
            };
            rows.push(BoundEstimate { seconds: secs, ..row });
        }
    }

    if want("f_method") {
        let t = Instant::now();
        let row = BoundEstimate::new("f_method", BoundKind::Upper, &["radial datum", "h' > 0 on (a, 1)"]);
        let row = match f_method_bound(datum) {
            Ok(fm) => match fm.case {
                FMethodCase::Inapplicable(why) => row.failed_with(Error::HypothesisCheckFailure(why)),
                case => {
                    let detail = match fm.x_star {
                        Some(x) => format!("{:?}, X*={}", case, x.as_f64()),
                        None => format!("{:?}", case),
                    };
                    row.computed(fm.value).with_detail(detail).at(datum.center())
                }
            },
            Err(e) => row.failed_with(e),
        };
        rows.push(row.timed(t));
    }

    if want("virial") {
        let t = Instant::now();
        let row = BoundEstimate::new("virial", BoundKind::DirectUpper, &["finite 2-moment", "bounds T* only"]);
        let row = match virial_bound(datum) {
            Ok(v) => row.computed(v),
            Err(e) => row.failed_with(e),
        };
        rows.push(row.timed(t));
    }

    if want("oracle") || want("oracle_variance") {
        let t = Instant::now();
        match oracles_for(datum) {
            Ok(list) => {
                for (i, o) in list.into_iter().enumerate() {
                    let name = if i == 0 { "oracle" } else { "oracle_variance" };
                    if !want(name) {
                        continue;
                    }
                    let kind = if o.exact { BoundKind::Reference } else { BoundKind::Upper };
                    let row = BoundEstimate::new(name, kind, &["closed form"])
                        .computed(o.value)
                        .with_detail(o.formula.to_string());
                    rows.push(row.timed(t));
                }
            }
            Err(e) => rows.push(BoundEstimate::new("oracle", BoundKind::Upper, &["closed form"]).failed_with(e)),
        }
    }

    if let DatumKind::DiskIndicator { height, radius } = datum.kind() {
        if k.excess() <= critical_mass::<S>() * S::lit(0.01) && want("asymptotic") {
            let m = datum.mass();
            if let Ok(v) = disk_asymptotic_fixed_radius(m, *radius) {
                let row = BoundEstimate::new("asymptotic_fixed_radius", BoundKind::Asymptotic, &["M near 8pi"]);
                rows.push(row.computed(v).with_detail("2 pi R^2 / (M - 8 pi)".into()));
            }
            if let Ok(v) = disk_asymptotic_fixed_height(m, *height) {
                let row = BoundEstimate::new("asymptotic_fixed_height", BoundKind::Asymptotic, &["M near 8pi"]);
                rows.push(row.computed(v).with_detail("16 pi / (sigma (M - 8 pi))".into()));
            }
        }
    }

    if let Some(mut best) = tc_value {
        let t = Instant::now();
        let mut best_z = rows[tc_index].center;
        for z in extra_centers {
            if let Ok(v) = tc_at(datum, z, cfg) {
                if v < best {
                    best = v;
                    best_z = Some(z);
                }
            }
        }
        let row = &mut rows[tc_index];
        if best < row.value {
            row.value = best;
            row.center = best_z;
            row.detail = format!("{}; improved at another estimator's center", row.detail);
        }
        row.seconds = tc_secs + t.elapsed().as_secs_f64();
    }

    let mut report = BoundReport {
        family: datum.family_name().to_string(),
        mass: datum.mass(),
        rows,
        tolerance: cfg.ordering_slack,
        violations: Vec::new(),
        certificate,
    };
    report.check_ordering();
    Ok(report)
}
