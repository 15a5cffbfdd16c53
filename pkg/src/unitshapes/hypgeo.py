"""Geodesics and hypercycles in the upper half plane.

The geodesic of the quintic norm form is the semicircle centred at -1/2 of
radius sqrt(5)/2.  The curve of unit shapes is the hypercycle of that
geodesic at distance log(5/3)/2: the circle through the same two boundary
points with centre (-1/2, 1/(2 sqrt 3)) and radius 2/sqrt(3).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import mpmath

from .errors import DomainError
from .lattice import DEFAULT_PRECISION, UHPPoint, _mpf, gl2_orbit_pair, reduce_fundamental

QUINTIC_NORM_FORM = (1, -1, -1)


@dataclass(frozen=True)
class Geodesic:
    """Semicircle ``(center, radius)`` on the real axis, or vertical line ``x = vertical``."""

    center: Optional[mpmath.mpf] = None
    radius: Optional[mpmath.mpf] = None
    vertical: Optional[mpmath.mpf] = None

    def __post_init__(self):
        if self.vertical is None:
            if self.center is None or self.radius is None or not self.radius > 0:
                raise DomainError("semicircle geodesic needs a center and a positive radius")

    @property
    def is_vertical(self):
        return self.vertical is not None

    @property
    def endpoints(self):
        if self.is_vertical:
            return self.vertical, mpmath.inf
        return self.center - self.radius, self.center + self.radius


@dataclass(frozen=True)
class Hypercycle:
    cx: mpmath.mpf
    cy: mpmath.mpf
    R: mpmath.mpf
    A: mpmath.mpf
    B: mpmath.mpf
    arc_start: Optional[tuple] = None
    arc_end: Optional[tuple] = None

    def circle_defect(self, x, y):
        return (x - self.cx) ** 2 + (y - self.cy) ** 2 - self.R ** 2

    def boundary_defects(self):
        return (self.A - self.cx) ** 2 + self.cy ** 2 - self.R ** 2, \
               (self.B - self.cx) ** 2 + self.cy ** 2 - self.R ** 2


def geodesic_from_form(q, precision=DEFAULT_PRECISION) -> Geodesic:
    """Geodesic of an indefinite binary form ``(a, b, c)``.

    Endpoints are the roots of ``a t^2 - b t + c``, so the quintic norm form
    ``(1, -1, -1)`` gives the roots of ``t^2 + t - 1``.
    """
    a, b, c = q
    disc = b * b - 4 * a * c
    if disc <= 0:
        raise DomainError(f"form {q} is not indefinite (discriminant {disc})")
    with mpmath.workprec(precision):
        if a == 0:
            # one root at infinity
            return Geodesic(vertical=mpmath.mpf(c) / b)
        center = mpmath.mpf(b) / (2 * a)
        radius = mpmath.sqrt(disc) / (2 * abs(a))
        return Geodesic(center=center, radius=radius)


def quintic_geodesic(precision=DEFAULT_PRECISION) -> Geodesic:
    return geodesic_from_form(QUINTIC_NORM_FORM, precision)


def hypercycle_at_distance(g: Geodesic, d, precision=DEFAULT_PRECISION) -> Hypercycle:
    """Upper hypercycle of a semicircle geodesic at hyperbolic distance ``d``.

    Above the apex of the geodesic the hypercycle has height ``rho e^d``,
    which fixes the circle through the two boundary points.
    """
    if g.is_vertical:
        raise DomainError("hypercycles of vertical geodesics are rays, not circles")
    with mpmath.workprec(precision):
        top = g.radius * mpmath.exp(d)
        cy = (top * top - g.radius ** 2) / (2 * top)
        R = top - cy
        A, B = g.endpoints
        return Hypercycle(g.center, cy, R, A, B)


def psi_constants(precision=DEFAULT_PRECISION) -> Hypercycle:
    with mpmath.workprec(precision):
        s3, s5 = mpmath.sqrt(3), mpmath.sqrt(5)
        half = mpmath.mpf(1) / 2
        return Hypercycle(
            cx=-half, cy=1 / (2 * s3), R=2 / s3,
            A=(-1 - s5) / 2, B=(-1 + s5) / 2,
            arc_start=(half, s3 / 2),
            arc_end=(-half, 5 / (2 * s3)),
        )


def psi_distance(precision=DEFAULT_PRECISION):
    with mpmath.workprec(precision):
        return mpmath.log(mpmath.mpf(5) / 3) / 2


def distance_point_to_geodesic(z: UHPPoint, g: Geodesic, precision=DEFAULT_PRECISION):
    """Hyperbolic distance; the Mobius map ``(z - A)/(B - z)`` sends the geodesic to the imaginary axis."""
    with mpmath.workprec(precision + 16):
        if not z.y > 0:
            raise DomainError("point must lie strictly above the real axis")
        w = mpmath.mpc(z.x, z.y)
        if g.is_vertical:
            w = w - g.vertical
        else:
            A, B = g.endpoints
            w = (w - A) / (B - w)
        d = mpmath.asinh(abs(w.real) / w.imag)
    with mpmath.workprec(precision):
        return +d


def sample_arc(n, precision=DEFAULT_PRECISION, mirror=False):
    """``n`` points on the upper branch of psi with ``x`` evenly spaced in [-1/2, 1/2]."""
    psi = psi_constants(precision)
    with mpmath.workprec(precision):
        out = []
        for i in range(n):
            x = -mpmath.mpf(1) / 2 + mpmath.mpf(i) / (n - 1)
            y = psi.cy + mpmath.sqrt(psi.R ** 2 - (x - psi.cx) ** 2)
            out.append(UHPPoint(-x if mirror else x, y))
        return out


@dataclass(frozen=True)
class ArcCheck:
    passed: bool
    residual: mpmath.mpf
    point: UHPPoint      # the representative closest to the arc
    reduced: UHPPoint
    mirror: UHPPoint


def default_tol(precision):
    if precision == DEFAULT_PRECISION:
        return mpmath.mpf("1e-9")
    return mpmath.mpf(2) ** (-precision / 2 + 12)


def on_arc_mod_gl2(z: UHPPoint, tol=None, precision=DEFAULT_PRECISION) -> ArcCheck:
    """Reduce ``z``, form its GL2(Z) pair and test both against the arc of psi."""
    psi = psi_constants(precision)
    with mpmath.workprec(precision):
        tol = default_tol(precision) if tol is None else _mpf(tol)
        reduced, _ = reduce_fundamental(z, precision)
        z0, mirror = gl2_orbit_pair(reduced, precision)
        half = mpmath.mpf(1) / 2
        cands = [z0, mirror]
        # the sides x = -1/2 and x = +1/2 are glued by z -> z + 1
        for c in (z0, mirror):
            if abs(abs(c.x) - half) <= tol:
                cands.append(UHPPoint(c.x - 1 if c.x > 0 else c.x + 1, c.y))
        best = None
        for cand in cands:
            res = abs(psi.circle_defect(cand.x, cand.y))
            ok = (res < tol and abs(cand.x) <= mpmath.mpf(1) / 2 + tol and cand.y > psi.cy)
            key = (not ok, res)
            if best is None or key < best[0]:
                best = (key, ok, res, cand)
        _, ok, res, cand = best
        return ArcCheck(ok, res, cand, z0, mirror)
