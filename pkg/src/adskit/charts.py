"""Coordinate models of anti-de Sitter space and its conformal boundary.

Three models are glued here:

* the quadric {Q = -1} in E = R^{2,2} (see :mod:`adskit.quadspace`);
* the conformal universal-cover model: the closed upper hemisphere
  D^2 = {s in S^2 : s2 >= 0} times a real time coordinate theta, carrying the
  conformal metric (1/cos^2 d(s, O)) (ds^2 - dtheta^2), O = (0,0,1) the pole;
  the boundary circle {s2 = 0} times R is the universal cover of Ein_2;
* the 2x2-matrix model: E is identified with gl(2,R) so that Q = -det, AdS
  becomes SL(2,R), and Ein_2 becomes the rank-one rays, identified with
  RP^1 x RP^1 through (image, kernel).

The frozen chart is

    (s, theta) -> (cos theta cosh r, sin theta cosh r,
                   sinh r cos phi, sinh r sin phi),

where (r, phi) are hyperbolic polar coordinates on the hemisphere with
sinh r = tan(d(s, O)) and phi the azimuth of s. Boundary lifts (phi, theta)
correspond to the null rays (cos theta, sin theta, cos phi, sin phi).

The Galois generator of the cyclic boundary cover is
delta: (s, theta) -> (-s0, -s1, s2; theta + pi); on the quadric delta acts as
the antipodal map, and delta^2 generates the covering of the AdS quadric.

Affine domains: for a timelike center x, the set {y : <x|y> < 0} lifts to the
slab {(s, theta) : |theta - theta_c| < W(s)} where theta_c is the (u,v)-phase
lift of x and W(s) = arccos(B(s)/A) with A = hypot(x_u, x_v) and
B(s) = x1 s0 + x2 s1; W is strictly inside (0, pi), so the slab is proper.
This fixes the one-of-two-components convention once and for all.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quadspace import (
    EPS_Q,
    RayClass,
    SPoint,
    as_vec,
    classify_ray,
    q_form,
)

BOUNDARY_BAND = 1e-9


class BoundaryPoint(ValueError):
    pass


class NotOnQuadric(ValueError):
    pass


class NotOnEin2(ValueError):
    pass


@dataclass(frozen=True)
class ConfPoint:
    """Universal-cover conformal coordinates: hemisphere point s, time theta."""

    s: np.ndarray
    theta: float

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        if s.shape != (3,):
            raise ValueError("hemisphere point must be a 3-vector")
        n = float(np.linalg.norm(s))
        if abs(n - 1.0) > 1e-9:
            s = s / n
        if s[2] < -BOUNDARY_BAND:
            raise ValueError("hemisphere point must have s2 >= 0")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "theta", float(self.theta))

    @property
    def boundary(self) -> bool:
        """True when this is a lift of an Ein_2 point (s on the equator)."""
        return self.s[2] < BOUNDARY_BAND

    @property
    def phi(self) -> float:
        """Azimuth of s in [0, 2pi)."""
        return float(np.arctan2(self.s[1], self.s[0]) % (2 * np.pi))


def conf_point(s, theta) -> ConfPoint:
    return ConfPoint(np.asarray(s, dtype=float), float(theta))


def boundary_point(phi: float, theta: float) -> ConfPoint:
    """The Ein_2 lift with boundary azimuth phi and time theta."""
    return ConfPoint(np.array([np.cos(phi), np.sin(phi), 0.0]), theta)


POLE = np.array([0.0, 0.0, 1.0])


def sphere_dist(s1, s2) -> float | np.ndarray:
    """Spherical (great-circle) distance, vectorized over leading axes."""
    a = np.asarray(s1, dtype=float)
    b = np.asarray(s2, dtype=float)
    dot = np.clip(np.einsum("...i,...i->...", a, b), -1.0, 1.0)
    out = np.arccos(dot)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Conformal chart <-> quadric
# ---------------------------------------------------------------------------


def conf_to_quadric(p: ConfPoint) -> np.ndarray:
    """Quadric coordinates of an interior universal-cover point."""
    if p.boundary:
        raise BoundaryPoint("boundary lifts have no quadric representative")
    out = conf_to_quadric_arrays(p.s[None, :], np.array([p.theta]))
    return out[0]


def conf_to_quadric_arrays(s, theta) -> np.ndarray:
    """Vectorized chart map: (n,3) hemisphere points, (n,) times -> (n,4)."""
    s = np.asarray(s, dtype=float)
    theta = np.asarray(theta, dtype=float)
    s2 = np.clip(s[..., 2], 1e-300, None)
    cosh_r = 1.0 / s2
    # sinh r * (cos phi, sin phi) = (s0/s2, s1/s2)
    w1 = s[..., 0] / s2
    w2 = s[..., 1] / s2
    return np.stack(
        [np.cos(theta) * cosh_r, np.sin(theta) * cosh_r, w1, w2], axis=-1
    )


def quadric_to_conf(q, window: float = 0.0) -> ConfPoint:
    """The unique conformal lift with theta in [window - pi, window + pi)."""
    a = as_vec(q)
    if abs(q_form(a) + 1.0) > 1e-6:
        raise NotOnQuadric("point must satisfy Q = -1")
    s, theta = quadric_to_conf_arrays(a[None, :], window)
    return ConfPoint(s[0], float(theta[0]))


def quadric_to_conf_arrays(q, window=0.0):
    """Vectorized inverse chart; returns (s array (n,3), theta array (n,))."""
    a = np.asarray(q, dtype=float)
    window = np.asarray(window, dtype=float)
    cosh_r = np.hypot(a[..., 0], a[..., 1])
    theta0 = np.arctan2(a[..., 1], a[..., 0])
    theta = theta0 + 2 * np.pi * np.round((window - theta0) / (2 * np.pi))
    sinh_r = np.hypot(a[..., 2], a[..., 3])
    s2 = 1.0 / cosh_r
    s01 = np.zeros_like(a[..., 2:4])
    mask = sinh_r > 1e-300
    # s = (sin(rho) cos phi, sin(rho) sin phi, cos rho) with tan(rho) = sinh r:
    # sin(rho) = sinh r / cosh r, so s01 = (x1, x2)/cosh r.
    s01[mask] = a[..., 2:4][mask] / cosh_r[mask][..., None]
    s = np.concatenate([s01, s2[..., None]], axis=-1)
    s /= np.linalg.norm(s, axis=-1, keepdims=True)
    return s, theta


def boundary_ray(p: ConfPoint) -> np.ndarray:
    """The null ray (cos theta, sin theta, cos phi, sin phi) of a boundary lift."""
    if not p.boundary:
        raise ValueError("boundary_ray needs an Ein_2 lift")
    return np.array([np.cos(p.theta), np.sin(p.theta), p.s[0], p.s[1]])


def ray_to_boundary(ray, window: float = 0.0) -> ConfPoint:
    """The boundary lift of a null ray with theta in [window - pi, window + pi)."""
    a = as_vec(ray)
    tnorm = np.hypot(a[0], a[1])
    if tnorm < 1e-300:
        raise NotOnEin2("null ray must have a nonzero (u,v) part")
    theta0 = float(np.arctan2(a[1], a[0]))
    theta = theta0 + 2 * np.pi * np.round((window - theta0) / (2 * np.pi))
    phi = float(np.arctan2(a[3], a[2]))
    return boundary_point(phi, theta)


def apply_delta(p: ConfPoint, n: int = 1) -> ConfPoint:
    """n-fold Galois translation (s0,s1,s2; theta) -> ((-1)^n s0, (-1)^n s1, s2; theta + n pi)."""
    sign = 1.0 if n % 2 == 0 else -1.0
    s = np.array([sign * p.s[0], sign * p.s[1], p.s[2]])
    return ConfPoint(s, p.theta + n * np.pi)


# ---------------------------------------------------------------------------
# gl(2,R) model and RP^1 x RP^1
# ---------------------------------------------------------------------------


def vec_to_mat(p) -> np.ndarray:
    """E -> gl(2,R) isometry with Q = -det: (u,v,x1,x2) -> [[u+x1, v+x2], [-v+x2, u-x1]]."""
    a = as_vec(p)
    u, v, x1, x2 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    m = np.empty(a.shape[:-1] + (2, 2))
    m[..., 0, 0] = u + x1
    m[..., 0, 1] = v + x2
    m[..., 1, 0] = -v + x2
    m[..., 1, 1] = u - x1
    return m


def mat_to_vec(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    a, b = m[..., 0, 0], m[..., 0, 1]
    c, d = m[..., 1, 0], m[..., 1, 1]
    return np.stack([(a + d) / 2, (b - c) / 2, (a - d) / 2, (b + c) / 2], axis=-1)


@dataclass(frozen=True)
class Rp1Pair:
    """A point of RP^1 x RP^1: two direction angles mod pi, in [0, pi)."""

    l: float
    r: float

    def __post_init__(self):
        object.__setattr__(self, "l", float(self.l) % np.pi)
        object.__setattr__(self, "r", float(self.r) % np.pi)


def rp1_distance(a: float, b: float) -> float:
    d = abs(a - b) % np.pi
    return min(d, np.pi - d)


def ein2_to_rp1pair(p: SPoint) -> Rp1Pair:
    """Identify an Ein_2 ray with its (image, kernel) pair of RP^1 directions."""
    if p.ray_class != RayClass.EIN2:
        raise NotOnEin2("ein2_to_rp1pair needs an Ein_2 ray")
    m = vec_to_mat(p.rep)
    u_, sv, vt = np.linalg.svd(m)
    # rank one: image = first left-singular vector, kernel = last row of vt.
    img = u_[:, 0]
    ker = vt[1]
    return Rp1Pair(np.arctan2(img[1], img[0]), np.arctan2(ker[1], ker[0]))


def rp1pair_to_ein2(pair: Rp1Pair) -> SPoint:
    """Inverse identification; the S(E)-lift sign is canonicalized."""
    a = np.array([np.cos(pair.l), np.sin(pair.l)])
    n = np.array([-np.sin(pair.r), np.cos(pair.r)])  # row vector killing ker
    m = np.outer(a, n)
    vec = mat_to_vec(m)
    sp = classify_ray(vec)
    # canonical sign: first coordinate of largest magnitude positive
    idx = int(np.argmax(np.abs(sp.rep)))
    if sp.rep[idx] < 0:
        sp = sp.antipode()
    return sp


# ---------------------------------------------------------------------------
# Affine and de Sitter domains
# ---------------------------------------------------------------------------


def affine_domain_contains(center: SPoint, p: SPoint, eps: float = EPS_Q) -> bool:
    """Klein-model affine domain of a timelike center: <center|p> < -eps."""
    if center.ray_class != RayClass.ADS_INTERIOR:
        raise ValueError("affine domain needs a timelike center")
    from .quadspace import q_pair

    return bool(q_pair(center.rep, p.rep) < -eps)


class AffineSlab:
    """Universal-cover affine domain of a timelike point, as a theta-slab.

    Membership: |theta - theta_c| < W(s), with W(s) = arccos(B(s)/A),
    A = hypot(x_u, x_v), B(s) = x1 s0 + x2 s1. ``theta_c`` is the lift of the
    (u,v)-phase of the center closest to the requested window.
    """

    def __init__(self, center_vec, theta_window: float):
        x = as_vec(center_vec)
        if q_form(x) > -EPS_Q:
            raise ValueError("affine slab needs a timelike center")
        self.vec = x
        a = float(np.hypot(x[0], x[1]))
        t0 = float(np.arctan2(x[1], x[0]))
        self.theta_c = t0 + 2 * np.pi * np.round((theta_window - t0) / (2 * np.pi))
        self._a = a
        self._sp = x[2:4]

    def width(self, s) -> np.ndarray:
        """W(s), vectorized over (n,3) hemisphere points."""
        s = np.asarray(s, dtype=float)
        b = s[..., 0] * self._sp[0] + s[..., 1] * self._sp[1]
        return np.arccos(np.clip(b / self._a, -1.0, 1.0))

    def contains(self, p: ConfPoint) -> bool:
        return abs(p.theta - self.theta_c) < float(self.width(p.s))


def desitter_domain_find(points, margin_eps: float = 1e-12):
    """Find a timelike v with <v|x> < 0 for all input Ein_2 rays, or None.

    First pass: a 4-variable LP maximizing the pairing margin under a box
    bound. If its optimum is not timelike, scan the normalized family
    v = (cos tau, sin tau, w1, w2), |w| < 1 (every timelike direction scales
    into it), solving a small LP in (w1, w2, margin) per tau.
    """
    from scipy.optimize import linprog

    from .quadspace import _METRIC, _reps

    mat = _reps(points) * _METRIC  # row i : covector <.|x_i>
    n = mat.shape[0]

    # maximize m  s.t.  mat @ v + m <= 0,  |v_j| <= 1
    c = np.zeros(5)
    c[4] = -1.0
    a_ub = np.hstack([mat, np.ones((n, 1))])
    b_ub = np.zeros(n)
    bounds = [(-1, 1)] * 4 + [(0, 10)]
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status == 0 and res.x[4] > margin_eps:
        v = res.x[:4]
        if q_form(v) < -EPS_Q and np.max(mat @ v) < -margin_eps:
            return v

    # normalized scan over the (u,v) phase
    best = None
    best_m = margin_eps
    dirs = np.arange(32) * (2 * np.pi / 32)
    disk = np.stack([np.cos(dirs), np.sin(dirs)], axis=1)
    for tau in np.arange(720) * (2 * np.pi / 720):
        head = np.array([np.cos(tau), np.sin(tau)])
        rhs = -(mat[:, :2] @ head)  # mat @ v = mat[:, :2] @ head + mat[:, 2:] @ w
        a2 = np.hstack([mat[:, 2:], np.ones((n, 1))])
        a2 = np.vstack([a2, np.hstack([disk, np.zeros((32, 1))])])
        b2 = np.concatenate([rhs, np.full(32, 0.97)])
        res = linprog(
            np.array([0.0, 0.0, -1.0]),
            A_ub=a2,
            b_ub=b2,
            bounds=[(-1, 1), (-1, 1), (0, 10)],
            method="highs",
        )
        if res.status == 0 and res.x[2] > best_m:
            v = np.array([head[0], head[1], res.x[0], res.x[1]])
            if q_form(v) < -EPS_Q and np.max(mat @ v) < -margin_eps:
                best_m = res.x[2]
                best = v
    return best
