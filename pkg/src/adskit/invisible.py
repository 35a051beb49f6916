"""Invisible domains, envelopes, gaps, cores, ends, hulls, cosmological time.

The invisible domain E(L) of a certified achronal boundary set L is the set
of points causally related to no point of L. In conformal coordinates it is
the open region between the two Lipschitz envelopes

    f_minus(s) = max over L of (theta_i - d(s, s_i)),
    f_plus(s)  = min over L of (theta_i + d(s, s_i)),

with d the spherical distance; in the Klein model it is the dual convex
region {p : <p|x_i> < 0 for the chosen lifts}.

Sorting L by boundary azimuth exposes the gap structure: each connected
component of the complement of L in the boundary circle is bounded by a gap
pair (x, y). A gap is LIGHTLIKE when the null segment joining x to y projects
into the gap arc (it may be filled without changing E(L)), EXTREME when the
joining null segment runs through the complementary arc, and ACHRONAL
otherwise. An achronal gap has two corners z^+/z^-: the first intersections
of the future (past) null leaves issued from x and y across the gap. Filling
every achronal gap with its upper (lower) tent produces the completed circles
L^+/L^-, whose invisible domains are the future/past globally hyperbolic
cores; the closed end of a gap is the tetrahedron spanned by {x, y, z^+, z^-}
intersected with AdS. Cores and closed ends cover E(L).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import charts
from .causality import AchronalSet, ElementaryClass, certify_achronal, classify_elementary
from .charts import ConfPoint, boundary_point, boundary_ray, conf_to_quadric
from .quadspace import (
    RayClass,
    SPoint,
    classify_ray,
    convex_hull_patch,
    dual_convex,
    q_form,
    q_pair,
)

HORIZON_BAND = 1e-6
TWO_PI = 2 * np.pi


class ElementaryInput(ValueError):
    pass


class OutsideDomain(ValueError):
    pass


class DegenerateGap(ValueError):
    pass


class InconsistentLift(ValueError):
    pass


# ---------------------------------------------------------------------------
# Envelopes
# ---------------------------------------------------------------------------


class EnvelopePair:
    """The pair of Lipschitz envelopes of a finite boundary data set.

    Exact finite extremes over the sample; no interpolation between samples.
    """

    def __init__(self, bnd: np.ndarray, thetas: np.ndarray):
        self.bnd = np.asarray(bnd, dtype=float)  # (n, 3) boundary directions
        self.thetas = np.asarray(thetas, dtype=float)

    def _dists(self, s) -> np.ndarray:
        s = np.atleast_2d(np.asarray(s, dtype=float))
        return np.arccos(np.clip(s @ self.bnd.T, -1.0, 1.0))

    def f_minus(self, s):
        out = np.max(self.thetas[None, :] - self._dists(s), axis=1)
        return out if out.shape[0] > 1 else float(out[0])

    def f_plus(self, s):
        out = np.min(self.thetas[None, :] + self._dists(s), axis=1)
        return out if out.shape[0] > 1 else float(out[0])


def build_envelopes(s: AchronalSet) -> EnvelopePair:
    """Envelopes of a certified generic achronal set."""
    bnd = np.stack([p.s for p in s.points])
    return EnvelopePair(bnd, s.thetas)


def invisible_contains_conf(e: EnvelopePair, p: ConfPoint, band: float = 0.0) -> bool:
    """Strict membership of an interior lift in E(L), conformal test."""
    s = p.s[None, :]
    return bool(e.f_minus(s) + band < p.theta < e.f_plus(s) - band)


def invisible_contains_conf_arrays(e: EnvelopePair, s, theta, band: float = 0.0):
    s = np.atleast_2d(np.asarray(s, dtype=float))
    theta = np.asarray(theta, dtype=float)
    d = self_d = e._dists(s)
    fm = np.max(e.thetas[None, :] - d, axis=1)
    fp = np.min(e.thetas[None, :] + d, axis=1)
    return (fm + band < theta) & (theta < fp - band)


def invisible_contains_klein(s: AchronalSet, p: SPoint, eps: float = 0.0) -> bool:
    """Membership via the dual-convex pairing test on the certified lifts."""
    if p.ray_class != RayClass.ADS_INTERIOR:
        raise ValueError("Klein membership test needs an AdS-interior ray")
    return dual_convex(s.rays).contains(p.rep, eps)


# ---------------------------------------------------------------------------
# Gaps, corners, tents
# ---------------------------------------------------------------------------


class GapKind(Enum):
    ACHRONAL = "ACHRONAL"
    LIGHTLIKE = "LIGHTLIKE"
    EXTREME = "EXTREME"


@dataclass
class GapPair:
    """A gap of the boundary circle: endpoints, kind, and arc geometry.

    ``phi_start`` is the azimuth of x; the gap arc runs from x to y in the
    positive direction and has length ``length``.
    """

    x: ConfPoint
    y: ConfPoint
    kind: GapKind
    phi_start: float
    length: float
    index: int

    def fill_samples(self, spacing: float = TWO_PI / 256) -> list:
        """Null-segment samples filling a LIGHTLIKE gap."""
        if self.kind != GapKind.LIGHTLIKE:
            raise ValueError("only lightlike gaps are filled")
        delta = self.y.theta - self.x.theta
        sgn = 1.0 if delta >= 0 else -1.0
        m = max(1, int(self.length / spacing))
        out = []
        for k in range(1, m + 1):
            a = self.length * k / (m + 1)
            out.append(boundary_point(self.phi_start + a, self.x.theta + sgn * a))
        return out


def gap_pairs(s: AchronalSet, kind_tol: float = 1e-7, gap_tol: float = 1e-9) -> list:
    """Ordered gap pairs of a certified generic set (sorted at certification)."""
    if not s.generic:
        raise ValueError("gap structure is defined for generic sets")
    n = len(s)
    out = []
    for i in range(n):
        j = (i + 1) % n
        length = (s.phis[j] - s.phis[i]) % TWO_PI
        if n == 2 and j == 0:
            length = TWO_PI - ((s.phis[1] - s.phis[0]) % TWO_PI)
        if length <= gap_tol:
            continue
        delta = abs(s.thetas[j] - s.thetas[i])
        if abs(delta - length) <= kind_tol:
            kind = GapKind.LIGHTLIKE
        elif abs(delta - (TWO_PI - length)) <= kind_tol:
            kind = GapKind.EXTREME
        else:
            kind = GapKind.ACHRONAL
        out.append(
            GapPair(
                x=s.points[i],
                y=s.points[j],
                kind=kind,
                phi_start=float(s.phis[i]),
                length=float(length),
                index=len(out),
            )
        )
    return out


def filled_set(s: AchronalSet) -> AchronalSet:
    """The set with every LIGHTLIKE gap replaced by inserted segment samples."""
    extra = []
    for g in gap_pairs(s):
        if g.kind == GapKind.LIGHTLIKE:
            extra.extend(g.fill_samples())
    if not extra:
        return s
    return certify_achronal(list(s.points) + extra, eps=max(s.eps, 1e-7))


@dataclass
class Corners:
    z_plus: SPoint
    z_minus: SPoint
    z_plus_conf: ConfPoint
    z_minus_conf: ConfPoint


def corners(g: GapPair) -> Corners:
    """Upper and lower corners of an achronal gap.

    Going into the gap arc, the future null leaves from x and y first meet at
    arc-parameter a+ = (L + dtheta)/2, the past leaves at a- = (L - dtheta)/2.
    """
    if g.kind != GapKind.ACHRONAL:
        raise DegenerateGap("corners exist for achronal gaps only")
    delta = g.y.theta - g.x.theta
    a_plus = (g.length + delta) / 2
    a_minus = (g.length - delta) / 2
    if not (0 < a_plus < g.length and 0 < a_minus < g.length):
        raise DegenerateGap("gap endpoints are causally related along the arc")
    zp = boundary_point(g.phi_start + a_plus, g.x.theta + a_plus)
    zm = boundary_point(g.phi_start + a_minus, g.x.theta - a_minus)
    return Corners(
        z_plus=classify_ray(boundary_ray(zp)),
        z_minus=classify_ray(boundary_ray(zm)),
        z_plus_conf=zp,
        z_minus_conf=zm,
    )


def _tent_samples(g: GapPair, upper: bool, spacing: float) -> list:
    delta = g.y.theta - g.x.theta
    apex = (g.length + delta) / 2 if upper else (g.length - delta) / 2
    m = max(2, int(np.ceil(g.length / spacing)))
    params = sorted(set(np.linspace(0.0, g.length, m + 2)[1:-1]) | {apex})
    out = []
    for a in params:
        if upper:
            th = min(g.x.theta + a, g.y.theta + (g.length - a))
        else:
            th = max(g.x.theta - a, g.y.theta - (g.length - a))
        out.append(boundary_point(g.phi_start + a, th))
    return out


def completions(s: AchronalSet, spacing: float = TWO_PI / 256):
    """The completed circles (L^+, L^-): gaps replaced by upper/lower tents."""
    plus, minus = list(s.points), list(s.points)
    for g in gap_pairs(s):
        if g.kind == GapKind.LIGHTLIKE:
            fills = g.fill_samples(spacing)
            plus.extend(fills)
            minus.extend(fills)
        elif g.kind == GapKind.ACHRONAL:
            plus.extend(_tent_samples(g, upper=True, spacing=spacing))
            minus.extend(_tent_samples(g, upper=False, spacing=spacing))
        else:
            raise ElementaryInput("EXTREME gap: elementary configuration")
    eps = max(s.eps, 1e-7)
    return (
        certify_achronal(plus, eps=eps, find_witness=False),
        certify_achronal(minus, eps=eps, find_witness=False),
    )


# ---------------------------------------------------------------------------
# Decomposition
# ---------------------------------------------------------------------------


class EndRegion:
    """Closed end of a gap: AdS intersected with the cone over {x, y, z+, z-}."""

    def __init__(self, gap: GapPair, crn: Corners):
        self.gap = gap
        self.corners = crn
        cols = [
            boundary_ray(gap.x),
            boundary_ray(gap.y),
            crn.z_plus.rep,
            crn.z_minus.rep,
        ]
        self.basis = np.stack(cols, axis=1)  # 4x4, columns are the vertices
        self._inv = np.linalg.inv(self.basis)

    def coefficients(self, p) -> np.ndarray:
        rep = p.rep if isinstance(p, SPoint) else np.asarray(p, dtype=float)
        return self._inv @ rep

    def contains(self, p, tol: float = 1e-9) -> bool:
        rep = p.rep if isinstance(p, SPoint) else np.asarray(p, dtype=float)
        if q_form(rep) >= -1e-12 * float(rep @ rep):
            return False
        c = self._inv @ rep
        scale = float(np.max(np.abs(c)))
        if scale == 0.0:
            return False
        c = c / scale
        return bool(np.all(c >= -tol) or np.all(c <= tol))

    def contains_many(self, reps: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        c = reps @ self._inv.T
        scale = np.max(np.abs(c), axis=1, keepdims=True)
        scale[scale == 0] = 1.0
        c = c / scale
        inside = np.all(c >= -tol, axis=1) | np.all(c <= tol, axis=1)
        qs = q_form(reps)
        return inside & (qs < 0)


@dataclass
class Decomposition:
    """Cores, closed ends, horizons, and tent corners of an invisible domain."""

    base: AchronalSet
    envelopes: EnvelopePair
    plus_set: AchronalSet
    minus_set: AchronalSet
    core_plus: EnvelopePair
    core_minus: EnvelopePair
    ends: list
    corners: list
    horizon_band: float = HORIZON_BAND

    def in_core_plus(self, p: ConfPoint, band: float = 1e-9) -> bool:
        s = p.s[None, :]
        return bool(
            self.core_plus.f_minus(s) - band <= p.theta <= self.core_plus.f_plus(s) + band
        )

    def in_core_minus(self, p: ConfPoint, band: float = 1e-9) -> bool:
        s = p.s[None, :]
        return bool(
            self.core_minus.f_minus(s) - band <= p.theta <= self.core_minus.f_plus(s) + band
        )

    def in_some_end(self, p: ConfPoint, tol: float = 1e-9) -> bool:
        rep = classify_ray(conf_to_quadric(p)).rep
        return any(e.contains(rep, tol) for e in self.ends)

    def covers(self, p: ConfPoint, tol: float = 1e-9) -> bool:
        return self.in_core_plus(p, tol) or self.in_core_minus(p, tol) or self.in_some_end(p, tol)

    def on_horizon_plus(self, p: ConfPoint, band: float | None = None) -> bool:
        """Past boundary of the future core."""
        band = self.horizon_band if band is None else band
        return abs(p.theta - self.core_plus.f_minus(p.s[None, :])) <= band

    def on_horizon_minus(self, p: ConfPoint, band: float | None = None) -> bool:
        """Future boundary of the past core."""
        band = self.horizon_band if band is None else band
        return abs(p.theta - self.core_minus.f_plus(p.s[None, :])) <= band


def decompose(s: AchronalSet, spacing: float = TWO_PI / 256) -> Decomposition:
    """Core/end decomposition of E(L) for a splitting or nonelementary set."""
    cls = classify_elementary(s)
    if cls in (ElementaryClass.CONICAL, ElementaryClass.EXTREME):
        raise ElementaryInput(f"decompose does not handle {cls.value} configurations")
    plus_set, minus_set = completions(s, spacing)
    ends, crns = [], []
    for g in gap_pairs(s):
        if g.kind != GapKind.ACHRONAL:
            continue
        c = corners(g)
        crns.append(c)
        ends.append(EndRegion(g, c))
    return Decomposition(
        base=s,
        envelopes=build_envelopes(s),
        plus_set=plus_set,
        minus_set=minus_set,
        core_plus=build_envelopes(plus_set),
        core_minus=build_envelopes(minus_set),
        ends=ends,
        corners=crns,
    )


# ---------------------------------------------------------------------------
# Convex hull surfaces
# ---------------------------------------------------------------------------


@dataclass
class HullSurfaces:
    """Classified boundary of Conv(L): future/past discs and the edge part."""

    hull: object
    degenerate: bool
    edge_facets: np.ndarray
    cplus_facets: np.ndarray
    cminus_facets: np.ndarray
    duals: np.ndarray | None
    flat_dual: np.ndarray | None = None

    def _on_facet(self, p, facets, band: float) -> bool:
        try:
            coords = self.hull.patch.to_patch([p])
        except Exception:
            return False
        if not self.hull.contains_coords(coords, eps=band):
            return False
        eqs = self.hull._qhull.equations
        vals = coords @ eqs[:, :3].T + eqs[:, 3]
        return bool(np.any(np.abs(vals[0][facets]) <= band))

    def in_edge(self, p, band: float = 1e-7) -> bool:
        if self.degenerate:
            return self._flat_boundary(p, band)
        return self._on_facet(p, self.edge_facets, band)

    def in_cplus(self, p, band: float = 1e-7) -> bool:
        if self.degenerate:
            return self._flat_interior(p, band)
        return self._on_facet(p, self.cplus_facets, band)

    def in_cminus(self, p, band: float = 1e-7) -> bool:
        if self.degenerate:
            return self._flat_interior(p, band)
        return self._on_facet(p, self.cminus_facets, band)

    def _flat_coords(self, p, band):
        h = self.hull
        coords = h.patch.to_patch([p])[0]
        centered = coords - h.centroid
        if abs(float(centered @ h._normal)) > band:
            return None
        fp = centered @ h._span.T
        eq = h._flat_hull.equations
        vals = fp @ eq[:, :2].T + eq[:, 2]
        return vals

    def _flat_interior(self, p, band) -> bool:
        vals = self._flat_coords(p, band)
        return vals is not None and bool(np.all(vals <= band))

    def _flat_boundary(self, p, band) -> bool:
        vals = self._flat_coords(p, band)
        return (
            vals is not None
            and bool(np.all(vals <= band))
            and bool(np.any(np.abs(vals) <= band))
        )


def hull_surfaces(s: AchronalSet, eps_class: float = 1e-9) -> HullSurfaces:
    """Classify the hull boundary of a certified generic set."""
    if s.witness is None:
        raise ValueError("hull classification needs a de Sitter witness")
    center = classify_ray(s.witness)
    hull = convex_hull_patch(s.rays, center)
    if hull.dim < 3:
        # non-proper case: L lies in a single spacelike hyperplane; the two
        # discs coincide with the relative interior of the flat hull.
        u, sv, vt = np.linalg.svd(s.rays - s.rays.mean(axis=0))
        normal_cov = vt[-1]
        flat_dual = normal_cov * np.array([-1.0, -1.0, 1.0, 1.0])
        return HullSurfaces(
            hull=hull,
            degenerate=True,
            edge_facets=np.array([], dtype=int),
            cplus_facets=np.array([], dtype=int),
            cminus_facets=np.array([], dtype=int),
            duals=None,
            flat_dual=flat_dual / max(np.sqrt(abs(q_form(flat_dual))), 1e-300),
        )
    duals = hull.facet_duals()
    qd = q_form(duals)
    edge, cplus, cminus = [], [], []
    centroids = hull.facet_centroids()
    eqs = hull._qhull.equations
    window = float(np.mean(s.thetas))
    for i in range(len(duals)):
        if qd[i] > eps_class * float(duals[i] @ duals[i]):
            edge.append(i)
            continue
        # spacelike (or null) support plane: decide future vs past by the
        # outward normal's effect on the conformal time of the facet centroid.
        c = centroids[i]
        n = eqs[i, :3]
        base_vec = hull.patch.from_patch(c)
        pert_vec = hull.patch.from_patch(c + 1e-5 * n)
        if q_form(base_vec) >= 0 or q_form(pert_vec) >= 0:
            edge.append(i)
            continue
        b = charts.quadric_to_conf(base_vec / np.sqrt(-q_form(base_vec)), window)
        q = charts.quadric_to_conf(pert_vec / np.sqrt(-q_form(pert_vec)), b.theta)
        (cplus if q.theta > b.theta else cminus).append(i)
    return HullSurfaces(
        hull=hull,
        degenerate=False,
        edge_facets=np.array(edge, dtype=int),
        cplus_facets=np.array(cplus, dtype=int),
        cminus_facets=np.array(cminus, dtype=int),
        duals=duals,
    )


# ---------------------------------------------------------------------------
# Cosmological time
# ---------------------------------------------------------------------------


def _frame_at(p: ConfPoint):
    """Future unit timelike T0 and spacelike orthonormal E1, E2 at p."""
    pv = conf_to_quadric(p)
    t0 = np.array([-np.sin(p.theta), np.cos(p.theta), 0.0, 0.0])
    frame = []
    for seed in (np.array([0.0, 0.0, 1.0, 0.0]), np.array([0.0, 0.0, 0.0, 1.0])):
        v = seed + q_pair(seed, pv) * pv + q_pair(seed, t0) * t0
        for e in frame:
            v = v - q_pair(v, e) * e
        v = v / np.sqrt(q_form(v))
        frame.append(v)
    return pv, t0, frame[0], frame[1]


def _exit_times(e: EnvelopePair, pv, dirs, theta0, step):
    """First exit time through the envelopes along past geodesics, vectorized.

    ``dirs`` is (m, 4) of past-directed unit timelike tangents at pv.
    """
    m = dirs.shape[0]
    lo = np.zeros(m)
    hi = np.full(m, np.nan)
    theta_lo = np.full(m, theta0)
    t = step
    active = np.ones(m, dtype=bool)
    while np.any(active) and t < np.pi - 1e-9:
        g = pv[None, :] * np.cos(t) + dirs * np.sin(t)
        s_arr, th = charts.quadric_to_conf_arrays(g, theta_lo)
        inside = invisible_contains_conf_arrays(e, s_arr, th)
        newly_out = active & ~inside
        hi[newly_out] = t
        active &= inside
        lo[active] = t
        theta_lo[active] = th[active]
        t += step
    hi[np.isnan(hi)] = np.pi - 1e-9
    for _ in range(48):
        mid = 0.5 * (lo + hi)
        g = pv[None, :] * np.cos(mid) + dirs * np.sin(mid)
        s_arr, th = charts.quadric_to_conf_arrays(g, theta_lo)
        inside = invisible_contains_conf_arrays(e, s_arr, th)
        lo = np.where(inside, mid, lo)
        theta_lo = np.where(inside, th, theta_lo)
        hi = np.where(inside, hi, mid)
    return 0.5 * (lo + hi)


_GOLD = (np.sqrt(5.0) - 1.0) / 2.0


def cosmological_time(e: EnvelopePair, p: ConfPoint, step: float = np.pi / 200) -> float:
    """Cosmological time of p in E(L): the longest past proper time.

    The supremum over past causal curves is realized by timelike geodesics;
    in quadric coordinates these are gamma(t) = p cos t + T sin t with T a
    past unit timelike tangent, and the Lorentzian length is t itself. The
    tangent is parametrized by hyperbolic tilt rho and azimuth psi; the exit
    time through f_minus is maximized by a psi-fan of golden-section searches
    over rho, followed by a local refinement in psi.
    """
    if not invisible_contains_conf(e, p):
        raise OutsideDomain("cosmological time is defined inside E(L)")
    pv, t0, e1, e2 = _frame_at(p)

    def dirs_for(psis, rhos):
        ch, sh = np.cosh(rhos), np.sinh(rhos)
        return (
            -ch[:, None] * t0[None, :]
            + (sh * np.cos(psis))[:, None] * e1[None, :]
            + (sh * np.sin(psis))[:, None] * e2[None, :]
        )

    def exit_for(psis, rhos):
        return _exit_times(e, pv, dirs_for(psis, rhos), p.theta, step)

    n_psi = 24
    psis = np.arange(n_psi) * (TWO_PI / n_psi)
    a = np.zeros(n_psi)
    b = np.full(n_psi, 4.0)
    x1 = b - _GOLD * (b - a)
    x2 = a + _GOLD * (b - a)
    f1 = exit_for(psis, x1)
    f2 = exit_for(psis, x2)
    for _ in range(40):
        move_right = f1 < f2
        a = np.where(move_right, x1, a)
        b = np.where(move_right, b, x2)
        x1 = b - _GOLD * (b - a)
        x2 = a + _GOLD * (b - a)
        f1 = exit_for(psis, x1)
        f2 = exit_for(psis, x2)
    rho_best = 0.5 * (a + b)
    vals = exit_for(psis, rho_best)
    best = float(np.max(vals))
    k = int(np.argmax(vals))
    # refine the azimuth around the best fan direction
    psi_lo, psi_hi = psis[k] - TWO_PI / n_psi, psis[k] + TWO_PI / n_psi
    rho_ref = np.full(17, rho_best[k])
    for _ in range(3):
        grid = np.linspace(psi_lo, psi_hi, 17)
        vals = exit_for(grid, rho_ref)
        j = int(np.argmax(vals))
        best = max(best, float(vals[j]))
        w = (psi_hi - psi_lo) / 4
        psi_lo, psi_hi = grid[j] - w, grid[j] + w
    return best


# ---------------------------------------------------------------------------
# Cauchy development check
# ---------------------------------------------------------------------------


def _lipschitz_interp(samples_s, samples_th, s):
    """Midpoint of the McShane-Whitney extension bracket of the sampled graph."""
    s = np.atleast_2d(np.asarray(s, dtype=float))
    d = np.arccos(np.clip(s @ samples_s.T, -1.0, 1.0))
    lo = np.max(samples_th[None, :] - d, axis=1)
    hi = np.min(samples_th[None, :] + d, axis=1)
    return 0.5 * (lo + hi)


def cauchy_development_check(
    surface: list, e: EnvelopePair, n_probe: int = 25, rng=None, band: float = 1e-9
) -> dict:
    """Operational Cauchy-development test for a sampled contracting graph.

    Checks that (a) every surface sample lies in the closed invisible domain,
    (b) the samples are 1-Lipschitz with contraction margin, and (c) timelike
    geodesics through random domain points cross the interpolated surface
    exactly once.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    ss = np.stack([p.s for p in surface])
    th = np.array([p.theta for p in surface])

    fm = np.max(e.thetas[None, :] - e._dists(ss), axis=1)
    fp = np.min(e.thetas[None, :] + e._dists(ss), axis=1)
    in_domain = bool(np.all(th >= fm - band) and np.all(th <= fp + band))

    d = np.arccos(np.clip(ss @ ss.T, -1.0, 1.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.abs(th[:, None] - th[None, :]) / d
    np.fill_diagonal(ratios, 0.0)
    ratios[d < 1e-9] = 0.0
    lipschitz_ratio = float(np.max(ratios))

    crossings = []
    tries = 0
    while len(crossings) < n_probe and tries < 40 * n_probe:
        tries += 1
        v = rng.normal(size=3)
        v[2] = abs(v[2]) + 0.05
        s = v / np.linalg.norm(v)
        srow = s[None, :]
        lo, hi = e.f_minus(srow), e.f_plus(srow)
        if hi - lo < 1e-3:
            continue
        theta0 = lo + rng.uniform(0.15, 0.85) * (hi - lo)
        p = ConfPoint(s, theta0)
        pv, t0, e1, e2 = _frame_at(p)
        rho = rng.uniform(0.0, 1.2)
        psi = rng.uniform(0.0, TWO_PI)
        tdir = np.cosh(rho) * t0 + np.sinh(rho) * (np.cos(psi) * e1 + np.sin(psi) * e2)
        ts = np.linspace(-np.pi + 1e-6, np.pi - 1e-6, 4001)
        g = pv[None, :] * np.cos(ts)[:, None] + tdir[None, :] * np.sin(ts)[:, None]
        theta_track = np.unwrap(np.arctan2(g[:, 1], g[:, 0]))
        mid = len(ts) // 2
        theta_track += theta0 - theta_track[mid]
        s_arr, _ = charts.quadric_to_conf_arrays(g, theta_track)
        inside = invisible_contains_conf_arrays(e, s_arr, theta_track)
        # restrict to the inside-domain interval containing t = 0
        left = mid
        while left > 0 and inside[left - 1]:
            left -= 1
        right = mid
        while right < len(ts) - 1 and inside[right + 1]:
            right += 1
        seg = slice(left, right + 1)
        h = theta_track[seg] - _lipschitz_interp(ss, th, s_arr[seg])
        signs = np.sign(h[np.abs(h) > 1e-12])
        n_cross = int(np.sum(np.diff(signs) != 0))
        crossings.append(n_cross)

    single = all(c == 1 for c in crossings)
    return {
        "all_in_domain": in_domain,
        "lipschitz_ratio": lipschitz_ratio,
        "contracting": lipschitz_ratio < 1.0,
        "crossings": crossings,
        "single_crossing": single,
        "passes": in_domain and lipschitz_ratio < 1.0 and single,
    }
