//! Explicit time scales on a bounded window.
//!
//! A time scale is a nonempty closed subset of the reals. We represent one as
//! a sorted list of disjoint closed intervals and isolated points. The jump
//! operators sigma/rho and the graininess mu are derived from that structure,
//! never from grid spacing. `ScaleFamily` carries the structural description
//! (all of Z, hZ, R, a base family plus finitely many extra points, or an
//! explicit windowed scale) so that translation-set reasoning can use
//! periodicity instead of window edges.

use crate::error::{Error, Result};
use crate::real::{time_tol, Real};
use serde::{Deserialize, Serialize};

/// One piece of a time scale: a closed interval or an isolated point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Segment<T> {
    Interval { lo: T, hi: T },
    Point(T),
}

impl<T: Real> Segment<T> {
    pub fn start(&self) -> T {
        match *self {
            Segment::Interval { lo, .. } => lo,
            Segment::Point(t) => t,
        }
    }

    pub fn end(&self) -> T {
        match *self {
            Segment::Interval { hi, .. } => hi,
            Segment::Point(t) => t,
        }
    }

    pub fn contains(&self, t: T) -> bool {
        let tol = time_tol::<T>();
        match *self {
            Segment::Interval { lo, hi } => t >= lo - tol && t <= hi + tol,
            Segment::Point(p) => (t - p).abs() <= tol,
        }
    }
}

/// Finite union of disjoint closed intervals and isolated points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeScale<T> {
    segments: Vec<Segment<T>>,
    window: (T, T),
}

impl<T: Real> TimeScale<T> {
    /// Builds a scale from arbitrary pieces: sorts them, merges overlapping
    /// or touching intervals and absorbs points that fall inside intervals.
    pub fn new(pieces: Vec<Segment<T>>) -> Result<Self> {
        let tol = time_tol::<T>();
        let mut pieces = pieces;
        for p in &pieces {
            match *p {
                Segment::Interval { lo, hi } => {
                    if !lo.is_finite() || !hi.is_finite() || lo > hi {
                        return Err(Error::InvalidScale {
                            reason: format!("bad interval [{}, {}]", lo, hi),
                        });
                    }
                }
                Segment::Point(t) => {
                    if !t.is_finite() {
                        return Err(Error::InvalidScale {
                            reason: "non-finite isolated point".into(),
                        });
                    }
                }
            }
        }
        if pieces.is_empty() {
            return Err(Error::InvalidScale {
                reason: "a time scale must be nonempty".into(),
            });
        }
        pieces.sort_by(|a, b| a.start().partial_cmp(&b.start()).unwrap());
        let mut segments: Vec<Segment<T>> = Vec::with_capacity(pieces.len());
        for p in pieces {
            match segments.last_mut() {
                None => segments.push(p),
                Some(last) => {
                    let reach = last.end();
                    match (*last, p) {
                        (Segment::Interval { lo, hi }, Segment::Interval { lo: l2, hi: h2 }) => {
                            if l2 <= reach + tol {
                                *last = Segment::Interval {
                                    lo,
                                    hi: hi.max(h2),
                                };
                            } else {
                                segments.push(p);
                            }
                        }
                        (Segment::Interval { .. }, Segment::Point(q)) => {
                            if q > reach + tol {
                                segments.push(p);
                            }
                            // point inside or on the interval: absorbed
                        }
                        (Segment::Point(q), Segment::Interval { lo: l2, hi: h2 }) => {
                            if q >= l2 - tol {
                                *last = Segment::Interval {
                                    lo: q.min(l2),
                                    hi: h2,
                                };
                            } else {
                                segments.push(p);
                            }
                        }
                        (Segment::Point(q), Segment::Point(r)) => {
                            if (r - q).abs() > tol {
                                segments.push(p);
                            }
                        }
                    }
                }
            }
        }
        let window = (segments[0].start(), segments[segments.len() - 1].end());
        Ok(TimeScale { segments, window })
    }

    pub fn segments(&self) -> &[Segment<T>] {
        &self.segments
    }

    /// Hull of the represented points.
    pub fn window(&self) -> (T, T) {
        self.window
    }

    pub fn min(&self) -> T {
        self.window.0
    }

    pub fn max(&self) -> T {
        self.window.1
    }

    pub fn contains(&self, t: T) -> bool {
        self.segment_index(t).is_some()
    }

    fn segment_index(&self, t: T) -> Option<usize> {
        let tol = time_tol::<T>();
        // binary search on segment starts, then check the candidate and its
        // left neighbour
        let mut lo = 0usize;
        let mut hi = self.segments.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.segments[mid].start() <= t + tol {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if lo > 0 && self.segments[lo - 1].contains(t) {
            return Some(lo - 1);
        }
        if lo < self.segments.len() && self.segments[lo].contains(t) {
            return Some(lo);
        }
        None
    }

    /// Forward jump: inf of scale points strictly after `t`; `t` itself at
    /// the scale maximum.
    pub fn sigma(&self, t: T) -> Result<T> {
        let tol = time_tol::<T>();
        let idx = self.segment_index(t).ok_or(Error::NotInScale { t: t.as_f64() })?;
        match self.segments[idx] {
            Segment::Interval { hi, .. } if t < hi - tol => Ok(t),
            _ => match self.segments.get(idx + 1) {
                Some(next) => Ok(next.start()),
                None => Ok(self.max()),
            },
        }
    }

    /// Backward jump: sup of scale points strictly before `t`; `t` itself at
    /// the scale minimum.
    pub fn rho(&self, t: T) -> Result<T> {
        let tol = time_tol::<T>();
        let idx = self.segment_index(t).ok_or(Error::NotInScale { t: t.as_f64() })?;
        match self.segments[idx] {
            Segment::Interval { lo, .. } if t > lo + tol => Ok(t),
            _ => {
                if idx == 0 {
                    Ok(self.min())
                } else {
                    Ok(self.segments[idx - 1].end())
                }
            }
        }
    }

    /// Graininess mu(t) = sigma(t) - t.
    pub fn mu(&self, t: T) -> Result<T> {
        Ok(self.sigma(t)? - t)
    }

    /// Restriction to a window; `None` when the intersection is empty.
    pub fn restrict(&self, window: (T, T)) -> Option<Self> {
        let (wlo, whi) = window;
        let tol = time_tol::<T>();
        let mut out = Vec::new();
        for seg in &self.segments {
            match *seg {
                Segment::Interval { lo, hi } => {
                    let l = lo.max(wlo);
                    let h = hi.min(whi);
                    if (h - l).abs() <= tol && h >= l - tol {
                        out.push(Segment::Point(l));
                    } else if l < h {
                        out.push(Segment::Interval { lo: l, hi: h });
                    }
                }
                Segment::Point(p) => {
                    if p >= wlo - tol && p <= whi + tol {
                        out.push(Segment::Point(p));
                    }
                }
            }
        }
        if out.is_empty() {
            None
        } else {
            let mut ts = TimeScale::new(out).ok()?;
            ts.window = (wlo.max(ts.window.0), whi.min(ts.window.1));
            Some(ts)
        }
    }

    /// Set intersection of two explicit scales.
    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let tol = time_tol::<T>();
        let mut out = Vec::new();
        for a in &self.segments {
            for b in &other.segments {
                if a.start() > b.end() + tol || b.start() > a.end() + tol {
                    continue;
                }
                match (*a, *b) {
                    (Segment::Interval { lo, hi }, Segment::Interval { lo: l2, hi: h2 }) => {
                        let l = lo.max(l2);
                        let h = hi.min(h2);
                        if (h - l).abs() <= tol {
                            out.push(Segment::Point(l));
                        } else if l < h {
                            out.push(Segment::Interval { lo: l, hi: h });
                        }
                    }
                    (Segment::Interval { .. }, Segment::Point(p)) => {
                        if a.contains(p) {
                            out.push(Segment::Point(p));
                        }
                    }
                    (Segment::Point(p), _) => {
                        if b.contains(p) {
                            out.push(Segment::Point(p));
                        }
                    }
                }
            }
        }
        if out.is_empty() {
            None
        } else {
            TimeScale::new(out).ok()
        }
    }

    /// Whole set shifted by `-tau` (the set `{t - tau : t in self}`).
    pub fn shift_left(&self, tau: T) -> Self {
        let segments: Vec<_> = self
            .segments
            .iter()
            .map(|s| match *s {
                Segment::Interval { lo, hi } => Segment::Interval {
                    lo: lo - tau,
                    hi: hi - tau,
                },
                Segment::Point(p) => Segment::Point(p - tau),
            })
            .collect();
        let window = (self.window.0 - tau, self.window.1 - tau);
        TimeScale { segments, window }
    }

    /// True when the scale is the single point `{0}`.
    pub fn is_singleton_zero(&self) -> bool {
        matches!(self.segments.as_slice(), [Segment::Point(p)] if p.abs() <= time_tol::<T>())
    }
}

/// Structural description of a scale, usable beyond any bounded window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ScaleFamily<T> {
    /// The whole real line.
    Reals,
    /// The integers.
    Integers,
    /// `h * Z` for a positive step `h`.
    Step(T),
    /// A base family together with finitely many extra points.
    Union {
        base: Box<ScaleFamily<T>>,
        extras: Vec<T>,
    },
    /// A scale known only on its explicit window.
    Explicit(TimeScale<T>),
}

impl<T: Real> ScaleFamily<T> {
    pub fn integers_with(extras: Vec<T>) -> Self {
        ScaleFamily::Union {
            base: Box::new(ScaleFamily::Integers),
            extras,
        }
    }

    /// Structural membership test. For `Explicit` scales membership is only
    /// known inside the stored window.
    pub fn contains(&self, t: T) -> bool {
        let tol = time_tol::<T>();
        match self {
            ScaleFamily::Reals => true,
            ScaleFamily::Integers => (t - t.round()).abs() <= tol,
            ScaleFamily::Step(h) => {
                let q = t / *h;
                (q - q.round()).abs() * *h <= tol
            }
            ScaleFamily::Union { base, extras } => {
                base.contains(t) || extras.iter().any(|p| (*p - t).abs() <= tol)
            }
            ScaleFamily::Explicit(ts) => ts.contains(t),
        }
    }

    /// Largest scale point `<= t`, by structure (unbounded families) or by
    /// the explicit window.
    pub fn floor(&self, t: T) -> T {
        let tol = time_tol::<T>();
        match self {
            ScaleFamily::Reals => t,
            ScaleFamily::Integers => (t + tol).floor(),
            ScaleFamily::Step(h) => ((t + tol) / *h).floor() * *h,
            ScaleFamily::Union { base, extras } => {
                let mut best = base.floor(t);
                for p in extras {
                    if *p <= t + tol && *p > best {
                        best = *p;
                    }
                }
                best
            }
            ScaleFamily::Explicit(ts) => {
                if ts.contains(t) {
                    t
                } else {
                    let mut best = ts.min();
                    for seg in ts.segments() {
                        if seg.start() <= t + tol {
                            best = seg.end().min(t).max(seg.start());
                        }
                    }
                    best
                }
            }
        }
    }

    /// Forward jump of the family at a member point. Unlike
    /// [`TimeScale::sigma`] this sees past any particular window.
    pub fn sigma(&self, t: T) -> Result<T> {
        let tol = time_tol::<T>();
        if !self.contains(t) {
            return Err(Error::NotInScale { t: t.as_f64() });
        }
        match self {
            ScaleFamily::Reals => Ok(t),
            ScaleFamily::Integers => Ok(t.round() + T::one()),
            ScaleFamily::Step(h) => Ok((t / *h).round() * *h + *h),
            ScaleFamily::Union { base, extras } => {
                let mut next = T::infinity();
                if base.contains(t) {
                    let s = base.sigma(t)?;
                    if s > t + tol {
                        next = s;
                    }
                } else {
                    // t is an extra point: next base point strictly after t
                    let f = base.floor(t);
                    let s = base.sigma(f)?;
                    next = if s > t + tol { s } else { T::infinity() };
                }
                for p in extras {
                    if *p > t + tol && *p < next {
                        next = *p;
                    }
                }
                if next.is_finite() {
                    if base.contains(t) && base.sigma(t)? <= t + tol {
                        // right-dense in the base (Reals): extras cannot be
                        // closer than "immediately after"
                        Ok(t)
                    } else {
                        Ok(next)
                    }
                } else {
                    Ok(t)
                }
            }
            ScaleFamily::Explicit(ts) => ts.sigma(t),
        }
    }

    /// Graininess seen by the family.
    pub fn mu(&self, t: T) -> Result<T> {
        Ok(self.sigma(t)? - t)
    }

    /// Materializes the family on a bounded window as an explicit scale.
    pub fn materialize(&self, window: (T, T)) -> Result<TimeScale<T>> {
        let (lo, hi) = window;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::InvalidScale {
                reason: format!("bad window [{}, {}]", lo, hi),
            });
        }
        let tol = time_tol::<T>();
        let segs = match self {
            ScaleFamily::Reals => vec![Segment::Interval { lo, hi }],
            ScaleFamily::Integers => {
                let mut v = Vec::new();
                let mut k = (lo - tol).ceil();
                while k <= hi + tol {
                    v.push(Segment::Point(k));
                    k = k + T::one();
                }
                v
            }
            ScaleFamily::Step(h) => {
                if *h <= T::zero() {
                    return Err(Error::InvalidScale {
                        reason: "step scale requires h > 0".into(),
                    });
                }
                let mut v = Vec::new();
                let mut k = ((lo - tol) / *h).ceil();
                while k * *h <= hi + tol {
                    v.push(Segment::Point(k * *h));
                    k = k + T::one();
                }
                v
            }
            ScaleFamily::Union { base, extras } => {
                let mut v = match base.materialize(window) {
                    Ok(ts) => ts.segments().to_vec(),
                    Err(Error::EmptyWindow { .. }) => Vec::new(),
                    Err(e) => return Err(e),
                };
                for p in extras {
                    if *p >= lo - tol && *p <= hi + tol {
                        v.push(Segment::Point(*p));
                    }
                }
                v
            }
            ScaleFamily::Explicit(ts) => match ts.restrict(window) {
                Some(r) => r.segments().to_vec(),
                None => Vec::new(),
            },
        };
        if segs.is_empty() {
            return Err(Error::EmptyWindow {
                lo: lo.as_f64(),
                hi: hi.as_f64(),
            });
        }
        TimeScale::new(segs)
    }
}

/// `T_tau = T ∩ (T - tau)`, restricted to `window`.
///
/// May be empty, in which case `None` is returned.
pub fn shift_intersection<T: Real>(
    fam: &ScaleFamily<T>,
    tau: T,
    window: (T, T),
) -> Result<Option<TimeScale<T>>> {
    let base = match fam.materialize(window) {
        Ok(ts) => ts,
        Err(Error::EmptyWindow { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    // materialize T on the shifted window, then shift back by -tau to get
    // (T - tau) on `window`
    let shifted = match fam.materialize((window.0 + tau, window.1 + tau)) {
        Ok(ts) => ts.shift_left(tau),
        Err(Error::EmptyWindow { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(base.intersect(&shifted))
}

/// Why a candidate translation was rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RejectReason {
    /// tau is not a point of the scale (Definition requires tau in T).
    NotMember,
    /// `T_tau` is empty on the window.
    EmptyIntersection,
    /// `T_tau` is exactly `{0}`.
    TrivialIntersection,
    /// The mirrored candidate `-tau` failed, so tau cannot sit in a
    /// plus/minus-closed translation set.
    AsymmetricPartner,
}

/// Outcome of the windowed translation-set diagnostic.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TranslationGroupReport<T> {
    pub accepted: Vec<T>,
    pub rejected: Vec<(T, RejectReason)>,
    /// Triples `(tau1, tau2, combo)` where both operands were accepted, the
    /// combination is among the candidates, but it failed the test. Any entry
    /// falsifies almost periodicity of the scale.
    pub closure_violations: Vec<(T, T, T)>,
    /// Intersection of all accepted `T_tau`, reported on a window shrunk by
    /// the largest accepted shift.
    pub common_core: Option<TimeScale<T>>,
}

/// Tests which candidate durations behave like translation numbers of the
/// scale. This is a falsifier over a bounded window, not a proof: it checks
/// the necessary conditions (membership, nonempty nontrivial `T_tau`,
/// plus/minus closure inside the candidate set) and reports the common core.
pub fn translation_group<T: Real>(
    fam: &ScaleFamily<T>,
    candidates: &[T],
    window: (T, T),
) -> Result<TranslationGroupReport<T>> {
    let tol = time_tol::<T>();
    let raw = |tau: T| -> Result<std::result::Result<TimeScale<T>, RejectReason>> {
        // membership is only checkable for structural families
        if !matches!(fam, ScaleFamily::Explicit(_)) && !fam.contains(tau) {
            return Ok(Err(RejectReason::NotMember));
        }
        match shift_intersection(fam, tau, window)? {
            None => Ok(Err(RejectReason::EmptyIntersection)),
            Some(ts) if ts.is_singleton_zero() => Ok(Err(RejectReason::TrivialIntersection)),
            Some(ts) => Ok(Ok(ts)),
        }
    };

    let mut accepted: Vec<T> = Vec::new();
    let mut rejected: Vec<(T, RejectReason)> = Vec::new();
    let mut pieces: Vec<(T, TimeScale<T>)> = Vec::new();
    for &tau in candidates {
        match raw(tau)? {
            Err(r) => rejected.push((tau, r)),
            Ok(ts) => match raw(-tau)? {
                // a translation set closed under +/- contains -tau whenever
                // it contains tau, so an asymmetric pass is rejected
                Err(_) => rejected.push((tau, RejectReason::AsymmetricPartner)),
                Ok(_) => {
                    accepted.push(tau);
                    pieces.push((tau, ts));
                }
            },
        }
    }

    let mut closure_violations = Vec::new();
    for &a in &accepted {
        for &b in &accepted {
            for combo in [a + b, a - b] {
                let in_candidates = candidates.iter().any(|c| (*c - combo).abs() <= tol);
                let is_accepted = accepted.iter().any(|c| (*c - combo).abs() <= tol);
                if in_candidates && !is_accepted && combo.abs() > tol {
                    closure_violations.push((a, b, combo));
                }
            }
        }
    }

    let common_core = if pieces.is_empty() {
        None
    } else {
        let span = accepted
            .iter()
            .fold(T::zero(), |m, t| m.max(t.abs()));
        let shrunk = (window.0 + span, window.1 - span);
        let mut core: Option<TimeScale<T>> = None;
        for (_, ts) in &pieces {
            core = match core {
                None => Some(ts.clone()),
                Some(acc) => acc.intersect(ts),
            };
            if core.is_none() {
                break;
            }
        }
        core.and_then(|ts| ts.restrict(shrunk))
    };

    Ok(TranslationGroupReport {
        accepted,
        rejected,
        closure_violations,
        common_core,
    })
}

/// Classification of a grid point by its forward jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointKind {
    /// sigma(t) = t and points of the scale continue to the right.
    RightDense,
    /// sigma(t) > t.
    RightScattered,
    /// The maximum of an explicit scale: no forward step exists.
    Terminal,
}

/// Simulation grid: every isolated/scattered point of the scale inside the
/// window appears exactly; dense segments are refined uniformly with step at
/// most `max_step`. Graininess comes from the scale structure, not from grid
/// spacing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Grid<T> {
    points: Vec<T>,
    graininess: Vec<T>,
    kinds: Vec<PointKind>,
    max_step: T,
}

impl<T: Real> Grid<T> {
    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn graininess(&self) -> &[T] {
        &self.graininess
    }

    pub fn kinds(&self) -> &[PointKind] {
        &self.kinds
    }

    pub fn max_step(&self) -> T {
        self.max_step
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> T {
        self.points[0]
    }

    pub fn last(&self) -> T {
        self.points[self.points.len() - 1]
    }

    /// Index of the grid point equal to `t` within tolerance.
    pub fn index_of(&self, t: T) -> Result<usize> {
        let tol = time_tol::<T>();
        let mut lo = 0usize;
        let mut hi = self.points.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.points[mid] < t - tol {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if lo < self.points.len() && (self.points[lo] - t).abs() <= tol {
            Ok(lo)
        } else {
            Err(Error::NotInScale { t: t.as_f64() })
        }
    }

    pub fn sup_mu(&self) -> T {
        self.graininess
            .iter()
            .fold(T::zero(), |m, g| m.max(*g))
    }
}

/// Builds the simulation grid for `fam` on `window`.
pub fn build_grid<T: Real>(
    fam: &ScaleFamily<T>,
    window: (T, T),
    max_step: T,
) -> Result<Grid<T>> {
    if max_step <= T::zero() {
        return Err(Error::InvalidScale {
            reason: "max_step must be positive".into(),
        });
    }
    let ts = fam.materialize(window)?;
    let tol = time_tol::<T>();
    let mut points = Vec::new();
    for seg in ts.segments() {
        match *seg {
            Segment::Point(p) => points.push(p),
            Segment::Interval { lo, hi } => {
                let span = hi - lo;
                let n = (span / max_step).ceil().max(T::one());
                let n_usize = n.as_f64() as usize;
                let step = span / n;
                for k in 0..n_usize {
                    points.push(lo + step * T::from_usize(k).unwrap());
                }
                points.push(hi);
            }
        }
    }
    let mut graininess = Vec::with_capacity(points.len());
    let mut kinds = Vec::with_capacity(points.len());
    for &p in &points {
        let s = fam.sigma(p)?;
        let mu = s - p;
        graininess.push(mu);
        if mu > tol {
            kinds.push(PointKind::RightScattered);
        } else if matches!(fam, ScaleFamily::Explicit(_)) && (p - ts.max()).abs() <= tol {
            kinds.push(PointKind::Terminal);
        } else {
            kinds.push(PointKind::RightDense);
        }
    }
    Ok(Grid {
        points,
        graininess,
        kinds,
        max_step,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integers() -> ScaleFamily<f64> {
        ScaleFamily::Integers
    }

    fn z_quarter() -> ScaleFamily<f64> {
        ScaleFamily::integers_with(vec![0.25])
    }

    fn interval_plus_point() -> TimeScale<f64> {
        TimeScale::new(vec![
            Segment::Interval { lo: 0.0, hi: 1.0 },
            Segment::Point(2.0),
        ])
        .unwrap()
    }

    #[test]
    fn sigma_on_integers() {
        let ts = integers().materialize((-10.0, 10.0)).unwrap();
        assert_eq!(ts.sigma(3.0).unwrap(), 4.0);
        assert_eq!(ts.rho(3.0).unwrap(), 2.0);
        assert_eq!(ts.mu(3.0).unwrap(), 1.0);
    }

    #[test]
    fn sigma_on_z_with_quarter() {
        let ts = z_quarter().materialize((-10.0, 10.0)).unwrap();
        assert_eq!(ts.sigma(0.0).unwrap(), 0.25);
        assert_eq!(ts.rho(0.25).unwrap(), 0.0);
        assert!((ts.mu(0.25).unwrap() - 0.75).abs() < 1e-12);
        assert_eq!(z_quarter().sigma(0.25).unwrap(), 1.0);
    }

    #[test]
    fn sigma_on_hybrid_scale() {
        let ts = interval_plus_point();
        assert_eq!(ts.sigma(1.0).unwrap(), 2.0);
        assert_eq!(ts.rho(0.5).unwrap(), 0.5);
        assert_eq!(ts.sigma(0.5).unwrap(), 0.5);
        assert_eq!(ts.mu(1.0).unwrap(), 1.0);
        // scale maximum convention
        assert_eq!(ts.sigma(2.0).unwrap(), 2.0);
    }

    #[test]
    fn not_in_scale_is_an_error() {
        let ts = integers().materialize((0.0, 5.0)).unwrap();
        assert!(matches!(
            ts.sigma(2.5),
            Err(Error::NotInScale { .. })
        ));
    }

    #[test]
    fn shift_intersection_z_quarter_by_one_gives_integers() {
        let got = shift_intersection(&z_quarter(), 1.0, (-6.0, 6.0))
            .unwrap()
            .unwrap();
        let want = integers().materialize((-6.0, 6.0)).unwrap();
        assert_eq!(got.segments(), want.segments());
    }

    #[test]
    fn shift_intersection_z_quarter_by_quarter_is_zero_singleton() {
        let got = shift_intersection(&z_quarter(), 0.25, (-6.0, 6.0))
            .unwrap()
            .unwrap();
        assert!(got.is_singleton_zero());
    }

    #[test]
    fn shift_intersection_reals_is_identity_on_window() {
        let got = shift_intersection(&ScaleFamily::<f64>::Reals, 0.7, (-3.0, 3.0))
            .unwrap()
            .unwrap();
        assert_eq!(
            got.segments(),
            &[Segment::Interval { lo: -3.0, hi: 3.0 }]
        );
    }

    #[test]
    fn shift_intersection_explicit_window() {
        let fam = ScaleFamily::Explicit(
            TimeScale::new(vec![
                Segment::Interval { lo: 0.0, hi: 1.0 },
                Segment::Interval { lo: 2.0, hi: 3.0 },
            ])
            .unwrap(),
        );
        let got = shift_intersection(&fam, 2.0, (0.0, 3.0)).unwrap().unwrap();
        assert_eq!(got.segments(), &[Segment::Interval { lo: 0.0, hi: 1.0 }]);
    }

    #[test]
    fn translation_group_example_z_quarter() {
        let report = translation_group(
            &z_quarter(),
            &[0.25, -0.25, 1.0, -1.0, 2.0, -2.0],
            (-12.0, 12.0),
        )
        .unwrap();
        assert_eq!(report.accepted, vec![1.0, -1.0, 2.0, -2.0]);
        assert!(report
            .rejected
            .iter()
            .any(|(t, r)| *t == 0.25 && *r == RejectReason::TrivialIntersection));
        assert!(report
            .rejected
            .iter()
            .any(|(t, r)| *t == -0.25 && *r == RejectReason::NotMember));
        assert!(report.closure_violations.is_empty());
        let core = report.common_core.unwrap();
        let want = integers().materialize((-10.0, 10.0)).unwrap();
        assert_eq!(core.segments(), want.segments());
    }

    #[test]
    fn translation_group_explicit_window() {
        // windowed diagnostic: membership of tau itself cannot be checked
        // beyond the window, so +-2 is accepted from the intersections alone
        let fam = ScaleFamily::Explicit(
            TimeScale::new(vec![
                Segment::Interval { lo: 0.0, hi: 1.0 },
                Segment::Interval { lo: 2.0, hi: 3.0 },
            ])
            .unwrap(),
        );
        let report = translation_group(&fam, &[2.0, -2.0], (0.0, 3.0)).unwrap();
        assert_eq!(report.accepted, vec![2.0, -2.0]);
    }

    #[test]
    fn translation_group_step_scale() {
        let fam = ScaleFamily::Step(0.5);
        let report =
            translation_group(&fam, &[0.5, -0.5, 1.0, -1.0], (-8.0, 8.0)).unwrap();
        assert_eq!(report.accepted.len(), 4);
        let core = report.common_core.unwrap();
        let want = fam.materialize((-7.0, 7.0)).unwrap();
        assert_eq!(core.segments(), want.segments());
    }

    #[test]
    fn grid_on_integers() {
        let g = build_grid(&integers(), (0.0, 5.0), 0.1).unwrap();
        assert_eq!(g.points(), &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        assert!(g.kinds().iter().all(|k| *k == PointKind::RightScattered));
        assert!(g.graininess().iter().all(|m| (*m - 1.0).abs() < 1e-12));
    }

    #[test]
    fn grid_on_unit_interval() {
        let fam = ScaleFamily::Explicit(
            TimeScale::new(vec![Segment::Interval { lo: 0.0, hi: 1.0 }]).unwrap(),
        );
        let g = build_grid(&fam, (0.0, 1.0), 0.25).unwrap();
        assert_eq!(g.points(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(g.kinds()[0], PointKind::RightDense);
        assert_eq!(g.kinds()[4], PointKind::Terminal);
    }

    #[test]
    fn grid_on_hybrid() {
        let fam = ScaleFamily::Explicit(interval_plus_point());
        let g = build_grid(&fam, (0.0, 2.0), 0.5).unwrap();
        assert_eq!(g.points(), &[0.0, 0.5, 1.0, 2.0]);
        assert_eq!(g.kinds()[2], PointKind::RightScattered);
        assert!((g.graininess()[2] - 1.0).abs() < 1e-12);
        assert_eq!(g.kinds()[3], PointKind::Terminal);
    }

    #[test]
    fn empty_window_reported() {
        let fam = ScaleFamily::Explicit(interval_plus_point());
        assert!(matches!(
            build_grid(&fam, (4.0, 5.0), 0.5),
            Err(Error::EmptyWindow { .. })
        ));
    }
}
