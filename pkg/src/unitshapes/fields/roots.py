"""Complex roots of the defining polynomial at arbitrary precision.

Seeds come from numpy's companion-matrix eigenvalues; every root is then
polished by Newton's method in mpmath until the backward error is below
``2^(-precision + 8)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np

from ..errors import DataError, PrecisionError


@dataclass(frozen=True)
class RootSet:
    """Roots split into the real root and one representative per conjugate pair."""

    real: mpmath.mpf
    pairs: tuple        # roots with positive imaginary part, sorted by (re, im)
    precision: int

    def all_roots(self):
        return [mpmath.mpc(self.real, 0)] + list(self.pairs) + [mpmath.conj(z) for z in self.pairs]


def _horner(coeffs_desc, z):
    v = mpmath.mpc(0)
    dv = mpmath.mpc(0)
    for c in coeffs_desc:
        dv = dv * z + v
        v = v * z + c
    return v, dv


def polish(coeffs_asc, z0, precision, max_iter=200):
    desc = [mpmath.mpf(c) for c in reversed(coeffs_asc)]
    z = mpmath.mpc(z0)
    for _ in range(max_iter):
        v, dv = _horner(desc, z)
        if dv == 0:
            break
        step = v / dv
        z -= step
        if abs(step) <= mpmath.mpf(2) ** (-precision) * max(1, abs(z)):
            break
    v, _ = _horner(desc, z)
    scale = sum(abs(c) * max(1, abs(z)) ** i for i, c in enumerate(reversed(desc)))
    return z, abs(v) / scale


def roots(coeffs_asc, precision=192, expected_real=1):
    """All roots of the monic integer polynomial ``coeffs_asc`` (ascending)."""
    coeffs_asc = [int(c) for c in coeffs_asc]
    n = len(coeffs_asc) - 1
    seeds = np.roots(np.array(coeffs_asc[::-1], dtype=float))
    with mpmath.workprec(precision + 32):
        polished = []
        for s in seeds:
            z, backward = polish(coeffs_asc, complex(s), precision + 32)
            if backward > mpmath.mpf(2) ** (-precision + 8):
                raise PrecisionError(
                    f"root near {complex(s):.6g} did not converge (backward error "
                    f"{mpmath.nstr(backward, 3)}); retry with a higher precision")
            polished.append(z)
        sep = min(abs(a - b) for i, a in enumerate(polished) for b in polished[i + 1:])
        if sep < mpmath.mpf(2) ** (-precision // 4):
            raise PrecisionError("Newton polishing merged two roots; polynomial may not be squarefree")
    thresh = mpmath.mpf(2) ** (-precision // 2)
    with mpmath.workprec(precision):
        real = [+z.real for z in polished if abs(z.imag) < thresh]
        upper = sorted((+z for z in polished if z.imag >= thresh),
                       key=lambda z: (float(z.real), float(z.imag)))
        lower = [z for z in polished if z.imag <= -thresh]
    if len(real) != expected_real:
        raise DataError(f"expected {expected_real} real root(s), found {len(real)}")
    if len(upper) != len(lower) or len(real) + 2 * len(upper) != n:
        raise DataError("non-real roots do not pair off into conjugates")
    with mpmath.workprec(precision + 32):
        pair_tol = mpmath.mpf(2) ** (-precision + 8)
        for z in lower:
            if min(abs(mpmath.conj(z) - w) for w in upper) > pair_tol * max(1, abs(z)):
                raise DataError(f"root {mpmath.nstr(z, 8)} has no conjugate partner")
    return RootSet(real[0], tuple(upper), precision)
