"""Linear algebra over E = R^{2,2}.

The ambient space of everything in this package is E = R^4 with coordinates
(u, v, x1, x2) and the signature (-,-,+,+) quadratic form

    Q(p) = -u^2 - v^2 + x1^2 + x2^2.

Anti-de Sitter space is the quadric {Q = -1}; its Klein model is the radial
projection into the half-projective space S(E) (rays from the origin); the
conformal boundary Ein_2 is the projectivized null cone {Q = 0}.

This module provides Q, its bilinear form, the musical dualities flat/sharp,
ray classification in S(E), small convex-hull machinery in affine patches of
S(E), and the dual-convex membership predicate.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

EPS_Q = 1e-9

# Signature (-,-,+,+) as a diagonal metric.
_METRIC = np.array([-1.0, -1.0, 1.0, 1.0])


class ZeroVector(ValueError):
    pass


class PointOutsidePatch(ValueError):
    pass


def as_vec(p) -> np.ndarray:
    """Coerce to a float array of shape (..., 4) and validate finiteness."""
    a = np.asarray(p, dtype=float)
    if a.shape[-1] != 4:
        raise ValueError("Vec22 needs 4 coordinates (u, v, x1, x2)")
    if not np.all(np.isfinite(a)):
        raise ValueError("Vec22 coordinates must be finite")
    return a


def q_form(p) -> float | np.ndarray:
    """Q(p) = -u^2 - v^2 + x1^2 + x2^2, vectorized over leading axes."""
    a = as_vec(p)
    out = np.einsum("...i,i,...i->...", a, _METRIC, a)
    return float(out) if out.ndim == 0 else out


def q_pair(p, q) -> float | np.ndarray:
    """The symmetric bilinear form <p|q> of Q, vectorized over leading axes."""
    a, b = as_vec(p), as_vec(q)
    out = np.einsum("...i,i,...i->...", a, _METRIC, b)
    return float(out) if out.ndim == 0 else out


def pairing_matrix(points) -> np.ndarray:
    """All pairwise <p_i|q_j> for two stacks, or one stack against itself."""
    a = as_vec(points)
    return (a * _METRIC) @ a.T


def flat(p) -> np.ndarray:
    """Metric lowering: flat(p) is the covector y -> <p|y> (coefficient array)."""
    return as_vec(p) * _METRIC


def sharp(a) -> np.ndarray:
    """Metric raising, inverse of flat."""
    return as_vec(a) * _METRIC


class RayClass(Enum):
    ADS_INTERIOR = "ADS_INTERIOR"
    EIN2 = "EIN2"
    EXTERIOR = "EXTERIOR"


@dataclass(frozen=True)
class SPoint:
    """A ray in E, i.e. a point of the half-projective space S(E).

    ``rep`` is the Euclidean-unit representative; the antipodal ray is a
    different SPoint with rep = -rep.
    """

    rep: np.ndarray
    ray_class: RayClass

    def antipode(self) -> "SPoint":
        return SPoint(-self.rep, self.ray_class)

    def __repr__(self):  # pragma: no cover
        return f"SPoint({np.array2string(self.rep, precision=6)}, {self.ray_class.value})"


def classify_ray(p, eps: float = EPS_Q) -> SPoint:
    """Normalize p to a unit ray representative and classify by the sign of Q."""
    a = as_vec(p)
    n = float(np.linalg.norm(a))
    if n < 1e-300:
        raise ZeroVector("cannot projectivize the zero vector")
    rep = a / n
    q = q_form(rep)
    if q < -eps:
        cls = RayClass.ADS_INTERIOR
    elif q > eps:
        cls = RayClass.EXTERIOR
    else:
        cls = RayClass.EIN2
    return SPoint(rep, cls)


def _reps(points) -> np.ndarray:
    rows = []
    for p in points:
        rows.append(p.rep if isinstance(p, SPoint) else as_vec(p))
    return np.asarray(rows, dtype=float)


# ---------------------------------------------------------------------------
# Affine patches of S(E) and convex hulls inside them.
# ---------------------------------------------------------------------------


class AffinePatch:
    """The affine chart V(c) = {rays q with <q|c> < 0} of S(E).

    A ray is represented by the point of the affine hyperplane
    {x : <x|c> = -1} it crosses; coordinates are taken in a Euclidean
    orthonormal basis of the hyperplane's direction space.
    """

    def __init__(self, center: SPoint):
        self.center = center
        c = center.rep
        qc = q_form(c)
        if abs(qc) < EPS_Q:
            raise ValueError("patch center must not be a null ray")
        self.origin = c / (-qc)  # <origin|c> = -1
        cov = flat(c)
        # Euclidean-orthonormal basis of ker(cov).
        _, _, vt = np.linalg.svd(cov.reshape(1, 4))
        self.basis = vt[1:]  # (3, 4)
        self._cov = cov

    def to_patch(self, points) -> np.ndarray:
        """Affine coordinates (..., 3) of rays; raises if a ray leaves the patch."""
        reps = _reps(points) if not isinstance(points, np.ndarray) else points
        pair = reps @ self._cov
        if np.any(pair > -1e-13):
            raise PointOutsidePatch("ray outside the affine patch of the given center")
        scaled = reps / (-pair)[..., None]
        return (scaled - self.origin) @ self.basis.T

    def from_patch(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        return self.origin + coords @ self.basis


class PatchHull:
    """Convex hull of finitely many rays inside an affine patch of S(E).

    Degenerate (lower-dimensional) inputs are accepted; the hull degrades to a
    polygon / segment / point, and membership becomes the relative-interior
    test: within ``eps`` of the affine span and inside the lower-dimensional
    hull.
    """

    def __init__(self, points, patch_center: SPoint, eps: float = 1e-9):
        from scipy.spatial import ConvexHull  # deferred: scipy import is slow

        self.patch = AffinePatch(patch_center)
        self.eps = eps
        pts = self.patch.to_patch(points)
        self.points = pts
        n = len(pts)
        self.centroid = pts.mean(axis=0)
        centered = pts - self.centroid
        if n == 1:
            rank = 0
        else:
            sv = np.linalg.svd(centered, compute_uv=False)
            scale = max(sv[0], 1.0)
            rank = int(np.sum(sv > 1e-10 * scale))
        self.dim = rank
        self._span = None
        self._qhull = None
        self._seg = None
        if rank == 3:
            self._qhull = ConvexHull(pts)
            self.vertices = self._qhull.vertices
            self.equations = self._qhull.equations  # (nf, 4): n.x + off <= 0 inside
        elif rank == 2:
            u, s, vt = np.linalg.svd(centered, full_matrices=True)
            self._span = vt[:2]  # rows: in-plane basis
            self._normal = vt[2]
            flatpts = centered @ self._span.T
            self._flat_hull = ConvexHull(flatpts)
            self._flatpts = flatpts
            self.vertices = self._flat_hull.vertices
            self.equations = None
        elif rank == 1:
            u, s, vt = np.linalg.svd(centered, full_matrices=True)
            self._span = vt[:1]
            t = centered @ vt[0]
            self._seg = (float(t.min()), float(t.max()))
            self.vertices = np.array([int(np.argmin(t)), int(np.argmax(t))])
            self.equations = None
        else:
            self.vertices = np.array([0])
            self.equations = None

    # -- queries ----------------------------------------------------------

    def contains_coords(self, coords, eps: float | None = None):
        """Membership of patch-coordinate points (vectorized, closed hull)."""
        eps = self.eps if eps is None else eps
        coords = np.atleast_2d(np.asarray(coords, dtype=float))
        centered = coords - self.centroid
        if self.dim == 3:
            vals = coords @ self._qhull.equations[:, :3].T + self._qhull.equations[:, 3]
            out = np.all(vals <= eps, axis=1)
        elif self.dim == 2:
            off = centered @ self._normal
            fp = centered @ self._span.T
            eq = self._flat_hull.equations
            vals = fp @ eq[:, :2].T + eq[:, 2]
            out = (np.abs(off) <= eps) & np.all(vals <= eps, axis=1)
        elif self.dim == 1:
            t = centered @ self._span[0]
            perp = centered - np.outer(t, self._span[0])
            lo, hi = self._seg
            out = (np.linalg.norm(perp, axis=1) <= eps) & (t >= lo - eps) & (t <= hi + eps)
        else:
            out = np.linalg.norm(centered, axis=1) <= eps
        return out if out.shape[0] > 1 else bool(out[0])

    def contains(self, point, eps: float | None = None):
        """Membership of a ray (SPoint or 4-vector) in the closed hull."""
        try:
            coords = self.patch.to_patch([point])
        except PointOutsidePatch:
            return False
        return self.contains_coords(coords, eps)

    def facet_duals(self) -> np.ndarray:
        """For a full-dimensional hull: the E-vector dual to each facet plane.

        The facet's supporting hyperplane in S(E) is the projectivization of
        w-perp where w = sharp of the facet's homogeneous functional; w is
        scaled to outward orientation (nonnegative on the hull side means the
        functional is <= 0 inside).
        """
        if self.dim != 3:
            raise ValueError("facet duals need a full-dimensional hull")
        eqs = self._qhull.equations
        # Homogenize: a patch point x in E satisfies -<x|c> = 1 and has
        # coords B(x - origin), so the affine facet functional
        # n.coords + off becomes the linear functional
        # alpha(x) = g.x + (off - g.origin) * (-cov.x)  with g = n @ B,
        # nonpositive on the hull side (after positive ray scaling).
        g = eqs[:, :3] @ self.patch.basis
        const = eqs[:, 3] - g @ self.patch.origin
        covs = g - const[:, None] * self._cov_row()
        return covs * _METRIC  # sharp of each functional

    def _cov_row(self) -> np.ndarray:
        return self.patch._cov

    def facet_centroids(self) -> np.ndarray:
        if self.dim != 3:
            raise ValueError("facet centroids need a full-dimensional hull")
        out = []
        for simplex in self._qhull.simplices:
            out.append(self.points[simplex].mean(axis=0))
        return np.asarray(out)


def convex_hull_patch(points, patch_center: SPoint, eps: float = 1e-9) -> PatchHull:
    """Convex hull of rays in the affine patch V(patch_center)."""
    return PatchHull(points, patch_center, eps)


class DualCone:
    """Membership test for the dual cone {v : <v|x> < 0 for all inputs x}."""

    def __init__(self, points):
        self.mat = _reps(points)

    def margin(self, v) -> float:
        """max over inputs of <v|x>; membership means margin < 0."""
        return float(np.max(self.mat @ flat(v)))

    def contains(self, v, eps: float = 0.0) -> bool:
        return self.margin(v) < -eps


def dual_convex(points) -> DualCone:
    """Dual of the convex cone spanned by the input rays."""
    pts = _reps(points)
    if len(pts) == 0:
        raise ValueError("dual_convex needs a nonempty input")
    return DualCone(pts)
