"""Causal and achronal predicates on the universal covers.

In the conformal model, two lifts (s1, theta1), (s2, theta2) are causally
related exactly when the spherical distance d(s1, s2) is at most
|theta2 - theta1|; strictly (timelike) when the inequality is strict. The
relation is decided inside a numerical band ``eps`` around the lightcone.

A finite subset of the Ein_2 cover is certified achronal by the pairing
criterion: with null-ray lifts x_i = (cos theta_i, sin theta_i, cos phi_i,
sin phi_i), achronality of the configuration is equivalent to all pairwise
<x_i|x_j> <= 0 together with containment in (the closure of) a de Sitter
domain -- the pairing of two boundary rays equals cos d - cos dtheta.
Strictness (acausality) is all off-diagonal pairings < 0. Pure lightlike
sets are the non-generic ones: they contain an antipodal pair and pair to
zero with it; they carry no strict de Sitter witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import charts
from .charts import ConfPoint, boundary_ray, desitter_domain_find, sphere_dist
from .quadspace import EPS_Q, pairing_matrix

CAUSAL_EPS = 1e-9


class NotAchronal(ValueError):
    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


class TooFewPoints(ValueError):
    pass


class TimeSign(Enum):
    FUTURE = "FUTURE"
    PAST = "PAST"
    NONE = "NONE"


@dataclass(frozen=True)
class CausalVerdict:
    related: bool
    strict: bool
    time_sign: TimeSign


def causally_related(p: ConfPoint, q: ConfPoint, eps: float = CAUSAL_EPS) -> CausalVerdict:
    """Causal verdict for two universal-cover lifts (interior or boundary)."""
    d = sphere_dist(p.s, q.s)
    dth = q.theta - p.theta
    related = d <= abs(dth) + eps
    strict = d < abs(dth) - eps
    if not related:
        sign = TimeSign.NONE
    else:
        sign = TimeSign.FUTURE if dth >= 0 else TimeSign.PAST
    return CausalVerdict(bool(related), bool(strict), sign)


def causal_verdict_arrays(s1, th1, s2, th2, eps: float = CAUSAL_EPS):
    """Vectorized verdicts; returns (related, strict) boolean arrays."""
    d = sphere_dist(s1, s2)
    dth = np.abs(np.asarray(th2) - np.asarray(th1))
    return d <= dth + eps, d < dth - eps


@dataclass
class AchronalSet:
    """A finite certified-achronal set of Ein_2 lifts, sorted by azimuth.

    ``rays`` are the null-ray lifts, ``pairings`` the cached Gram matrix,
    ``witness`` a timelike de Sitter witness vector (None for non-generic
    sets), ``generic``/``strict`` the certificate flags.
    """

    points: list
    rays: np.ndarray
    pairings: np.ndarray
    generic: bool
    strict: bool
    witness: np.ndarray | None = None
    eps: float = EPS_Q
    phis: np.ndarray = field(default=None)
    thetas: np.ndarray = field(default=None)

    def __len__(self):
        return len(self.points)


def _antipodal_zero_pair(phis, thetas, pairings, tol=1e-7):
    """Index pair (i, j) of an antipodal pair with all-vanishing pairings, or None."""
    n = len(phis)
    for i in range(n):
        for j in range(i + 1, n):
            dphi = (phis[j] - phis[i]) % (2 * np.pi)
            if abs(dphi - np.pi) > tol:
                continue
            if abs(abs(thetas[j] - thetas[i]) - np.pi) > tol:
                continue
            if np.max(np.abs(pairings[i])) <= tol and np.max(np.abs(pairings[j])) <= tol:
                return i, j
    return None


def certify_achronal(points, eps: float = EPS_Q, find_witness: bool = True) -> AchronalSet:
    """Certify a finite set of Ein_2 lifts as achronal.

    Raises :class:`NotAchronal` (with the violating pair) when two lifts are
    chronologically related, and :class:`TooFewPoints` for fewer than 2 points.
    """
    if len(points) < 2:
        raise TooFewPoints("achronality certification needs at least 2 points")
    for p in points:
        if not p.boundary:
            raise ValueError("achronal sets consist of Ein_2 (boundary) lifts")
    phis = np.array([p.phi for p in points])
    thetas = np.array([p.theta for p in points])
    order = np.argsort(phis, kind="stable")
    points = [points[i] for i in order]
    phis, thetas = phis[order], thetas[order]

    rays = np.array([boundary_ray(p) for p in points])
    pairings = pairing_matrix(rays)
    n = len(points)

    # pairings <= eps rules out timelike relation only when |dtheta| <= pi;
    # check the full lifted relation pair by pair.
    dth = np.abs(thetas[:, None] - thetas[None, :])
    iu = np.triu_indices(n, k=1)
    bad = (pairings[iu] > eps) | (dth[iu] > np.pi + eps)
    # identical lifts are allowed only as exact duplicates
    if np.any(bad):
        k = int(np.argmax(bad))
        i, j = iu[0][k], iu[1][k]
        raise NotAchronal(
            f"points {i} and {j} are chronologically related", pair=(points[i], points[j])
        )

    strict = bool(np.all(pairings[iu] < -eps))
    witness = desitter_domain_find(rays) if find_witness else None
    pure = _antipodal_zero_pair(phis, thetas, pairings) is not None
    generic = not pure
    if witness is None and find_witness and generic:
        # no strict witness and not recognizably pure lightlike: reject,
        # since achronal sets embed in the closure of a de Sitter domain.
        raise NotAchronal("no de Sitter witness found for a generic configuration")
    return AchronalSet(
        points=points,
        rays=rays,
        pairings=pairings,
        generic=generic,
        strict=strict,
        witness=witness,
        eps=eps,
        phis=phis,
        thetas=thetas,
    )


def is_pure_lightlike(s: AchronalSet, tol: float = 1e-7) -> bool:
    """True iff the set contains an antipodal pair pairing to zero with everything."""
    return _antipodal_zero_pair(s.phis, s.thetas, s.pairings, tol) is not None


def strictness_by_extreme_points(s: AchronalSet) -> bool:
    """Strictness via the hull criterion: every point extreme, no null edge.

    For finite boundary sets the segment [x, y] lies on the null cone exactly
    when <x|y> = 0, so the hull test reduces to (and is asserted against) the
    all-pairings-strictly-negative test.
    """
    n = len(s)
    iu = np.triu_indices(n, k=1)
    pairing_strict = bool(np.all(s.pairings[iu] < -s.eps))
    # hull criterion: a vanishing pairing puts the whole null segment between
    # the two points inside the hull, producing non-extreme Ein_2 points.
    null_pair = bool(np.any(np.abs(s.pairings[iu]) <= s.eps))
    hull_strict = not null_pair
    assert hull_strict == pairing_strict
    return pairing_strict


class ElementaryClass(Enum):
    CONICAL = "CONICAL"
    SPLITTING = "SPLITTING"
    EXTREME = "EXTREME"
    NONELEMENTARY = "NONELEMENTARY"


def _circle_dist(a, b):
    d = np.abs(a - b) % (2 * np.pi)
    return np.minimum(d, 2 * np.pi - d)


def _common_cone_components(phis, thetas, future: bool, grid: int = 4096, tol: float = 1e-6):
    """Components of {phi : theta_i +/- d(phi, phi_i) is constant over i}.

    These are the boundary azimuths of lifts whose past (future) lightcone
    contains every input point. Returns a list of (width_in_cells, phi, theta).
    """
    phi_grid = np.arange(grid) * (2 * np.pi / grid)
    d = _circle_dist(phi_grid[:, None], phis[None, :])
    vals = thetas[None, :] + d if future else thetas[None, :] - d
    spread = vals.max(axis=1) - vals.min(axis=1)
    hits = spread < tol
    if not np.any(hits):
        return []
    # group cyclically contiguous hits
    idx = np.flatnonzero(hits)
    breaks = np.flatnonzero(np.diff(idx) > 1)
    groups = np.split(idx, breaks + 1)
    if len(groups) > 1 and idx[0] == 0 and idx[-1] == grid - 1:
        groups[0] = np.concatenate([groups[-1], groups[0]])
        groups = groups[:-1]
    out = []
    for g in groups:
        mid = g[len(g) // 2]
        out.append((len(g), float(phi_grid[mid]), float(vals[mid].mean())))
    return out


def classify_elementary(s: AchronalSet, grid: int = 4096, tol: float = 1e-6) -> ElementaryClass:
    """Trichotomy of elementary configurations via the common lightcone sets.

    NONELEMENTARY iff both the common-future and common-past sets are empty;
    arc-shaped components (lightlike rays) mean EXTREME; two isolated points
    on a side mean SPLITTING; any other nonempty pattern is CONICAL.
    """
    up = _common_cone_components(s.phis, s.thetas, future=True, grid=grid, tol=tol)
    dn = _common_cone_components(s.phis, s.thetas, future=False, grid=grid, tol=tol)
    if not up and not dn:
        return ElementaryClass.NONELEMENTARY
    wide = max([w for w, _, _ in up + dn], default=0)
    if wide >= 4:
        return ElementaryClass.EXTREME
    if len(up) == 2 and len(dn) == 2:
        return ElementaryClass.SPLITTING
    return ElementaryClass.CONICAL
