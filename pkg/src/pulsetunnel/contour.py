"""Adaptive quadrature along piecewise paths in the complex plane."""

from __future__ import annotations

import cmath
import math

from scipy import integrate

__all__ = ["quad_line", "quad_path", "line_with_detour"]

_EPSABS = 1e-12
_EPSREL = 1e-10
_LIMIT = 400


def quad_line(f, a: complex, b: complex, epsabs=_EPSABS, epsrel=_EPSREL) -> complex:
    """Integral of f along the straight segment from a to b."""
    dz = b - a
    if dz == 0:
        return 0.0 + 0.0j

    def g(s):
        return f(a + s * dz) * dz

    re, _ = integrate.quad(
        lambda s: g(s).real, 0.0, 1.0, epsabs=epsabs, epsrel=epsrel, limit=_LIMIT
    )
    im, _ = integrate.quad(
        lambda s: g(s).imag, 0.0, 1.0, epsabs=epsabs, epsrel=epsrel, limit=_LIMIT
    )
    return complex(re, im)


def _quad_arc(f, center: complex, radius: float, phi0: float, phi1: float) -> complex:
    def g(phi):
        z = center + radius * cmath.exp(1j * phi)
        return f(z) * 1j * radius * cmath.exp(1j * phi)

    re, _ = integrate.quad(
        lambda p: g(p).real, phi0, phi1, epsabs=_EPSABS, epsrel=_EPSREL, limit=_LIMIT
    )
    im, _ = integrate.quad(
        lambda p: g(p).imag, phi0, phi1, epsabs=_EPSABS, epsrel=_EPSREL, limit=_LIMIT
    )
    return complex(re, im)


def quad_path(f, path, epsabs=_EPSABS, epsrel=_EPSREL) -> complex:
    """Integrate f along a path given as a list of elements.

    Each element is ("line", a, b) or ("arc", center, radius, phi0, phi1).
    A bare list of complex waypoints is accepted as a polyline.
    """
    if path and not isinstance(path[0], tuple):
        path = [("line", a, b) for a, b in zip(path[:-1], path[1:])]
    total = 0.0 + 0.0j
    for el in path:
        if el[0] == "line":
            total += quad_line(f, el[1], el[2], epsabs=epsabs, epsrel=epsrel)
        elif el[0] == "arc":
            total += _quad_arc(f, el[1], el[2], el[3], el[4])
        else:
            raise ValueError(f"unknown path element {el[0]!r}")
    return total


def line_with_detour(a: complex, b: complex, poles, clearance: float,
                     radius: float, side: complex | None = None):
    """Path elements for the segment a->b, detouring around listed poles.

    When the segment comes within `clearance` of a pole, the portion inside a
    circle of `radius` is replaced by the arc around the pole on the side the
    segment already favours (the pole keeps its side of the path).  `side`,
    when given, is a complex direction forcing the arc to bulge that way --
    needed when the pole sits exactly on the path and a branch convention
    dictates the side.
    """
    elements = [("line", a, b)]
    for pole in poles:
        new_elements = []
        for el in elements:
            if el[0] != "line":
                new_elements.append(el)
                continue
            new_elements.extend(
                _split_segment(el[1], el[2], pole, clearance, radius, side)
            )
        elements = new_elements
    return elements


def _split_segment(a, b, pole, clearance, radius, side=None):
    dz = b - a
    length = abs(dz)
    if length == 0:
        return [("line", a, b)]
    u = dz / length
    # closest approach of the segment to the pole
    s = ((pole - a) / u).real
    s = min(max(s, 0.0), length)
    p = a + s * u
    d = abs(p - pole)
    if d >= clearance:
        return [("line", a, b)]
    if d >= radius:
        # within the caution zone but outside the detour circle: keep straight
        return [("line", a, b)]
    half = math.sqrt(max(radius * radius - d * d, 0.0))
    s0, s1 = s - half, s + half
    if s1 <= 0 or s0 >= length:
        return [("line", a, b)]
    s0 = max(s0, 0.0)
    s1 = min(s1, length)
    za = a + s0 * u
    zb = a + s1 * u
    # push intersection points out to the circle radius
    za = pole + radius * (za - pole) / abs(za - pole)
    zb = pole + radius * (zb - pole) / abs(zb - pole)
    phi0 = cmath.phase(za - pole)
    phi1 = cmath.phase(zb - pole)
    # go around on the side the chord already is: sweep through the direction
    # pole -> closest point (or an arbitrary perpendicular if d == 0)
    if side is not None:
        phi_mid = cmath.phase(side)
    elif d > 1e-15:
        phi_mid = cmath.phase(p - pole)
    else:
        phi_mid = cmath.phase(1j * u)
    phi1 = _unwrap_through(phi0, phi1, phi_mid)
    parts = []
    if abs(za - a) > 1e-15:
        parts.append(("line", a, za))
    parts.append(("arc", pole, radius, phi0, phi1))
    if abs(b - zb) > 1e-15:
        parts.append(("line", zb, b))
    return parts


def _unwrap_through(phi0, phi1, phi_mid):
    """Adjust phi1 by 2*pi so the sweep phi0->phi1 passes through phi_mid."""
    two_pi = 2.0 * math.pi

    def norm(x):
        return (x + math.pi) % two_pi - math.pi

    for shift in (0.0, two_pi, -two_pi):
        cand = phi1 + shift
        lo, hi = min(phi0, cand), max(phi0, cand)
        mid = phi_mid
        # test both representatives of phi_mid
        if lo - 1e-12 <= mid <= hi + 1e-12 or lo - 1e-12 <= mid + two_pi <= hi + 1e-12 \
                or lo - 1e-12 <= mid - two_pi <= hi + 1e-12:
            if hi - lo <= two_pi:
                return cand
    return phi1
