"""Euclidean (imaginary-time) trajectory computation for the triangular barrier.

Yields the maximum tunneling exponent A, the under-barrier traversal time tau0,
the outgoing energy shift deltaE and the threshold energy E_T at which the
pulse singularity matches the static traversal time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate, optimize

from .errors import ConvergenceError, DomainError
from .model import (
    LorentzPulse,
    TriangularBarrier,
    SechBarrier,
    ZeroPulse,
    static_wkb_exponent,
)

__all__ = [
    "EuclideanResult",
    "ThresholdResult",
    "solve_tau0",
    "euclidean_action",
    "threshold_energy",
    "adapt_pulse_width",
    "action_curve",
]


@dataclass(frozen=True)
class EuclideanResult:
    A: float
    A0: float
    tau0: float
    deltaE: float
    regime: str
    E_T: float | None
    exit_point: float


@dataclass(frozen=True)
class ThresholdResult:
    E_T: float
    clamped: bool
    raw: float


def solve_tau0(E: float, barrier: TriangularBarrier, pulse) -> float:
    """Traversal time: root of field_static*tau + int_0^tau pulse(i u) du = p0(E).

    For a Lorentzian pulse the imaginary-axis integral diverges at the pulse
    width, pinning the root below it whenever the static traversal time
    exceeds the width (the below-threshold regime).
    """
    if not (0 < E < barrier.V):
        raise DomainError(f"need 0 < E < V={barrier.V}, got E={E}")
    p0 = barrier.p0(E)
    e0 = barrier.field_static
    if e0 <= 0:
        raise DomainError("solve_tau0 needs a decaying barrier (field_static > 0)")
    tau00 = p0 / e0
    if isinstance(pulse, ZeroPulse) or pulse.amplitude == 0.0:
        return tau00

    def g(tau):
        return e0 * tau + pulse.integral_imag_axis(tau) - p0

    hi = tau00
    if isinstance(pulse, LorentzPulse):
        hi = min(tau00, pulse.width * (1.0 - 1e-14))
        # push hi toward the divergence until the bracket closes
        while g(hi) < 0:
            gap = pulse.width - hi
            if gap < 1e-15 * pulse.width:
                raise ConvergenceError(
                    "could not bracket tau0 below the pulse width",
                    diagnostics={"E": E, "hi": hi, "g(hi)": g(hi)},
                )
            hi = pulse.width - 0.5 * gap
    if g(hi) < 0:
        raise ConvergenceError(
            "tau0 bracket failed: g(hi) < 0",
            diagnostics={"E": E, "hi": hi, "g(hi)": g(hi)},
        )
    return float(optimize.brentq(g, 0.0, hi, xtol=1e-15, rtol=8.9e-16))


def _regime_tag(E: float, barrier: TriangularBarrier, pulse) -> tuple[str, float | None]:
    if isinstance(pulse, ZeroPulse) or pulse.amplitude == 0.0:
        return "static", None
    if not isinstance(pulse, LorentzPulse):
        return "no-threshold", None
    E_T = threshold_energy(barrier, pulse).E_T
    tau00 = barrier.tau00_at(E)
    theta = pulse.width
    if abs(tau00 - theta) < 0.05 * theta:
        return "near-threshold", E_T
    return ("above-threshold" if tau00 < theta else "below-threshold"), E_T


def euclidean_action(E: float, barrier: TriangularBarrier, pulse) -> EuclideanResult:
    """Exponent A and outgoing energy shift deltaE from the forced trajectory.

    With the pulse off this reduces to the static WKB exponent and deltaE = 0.
    In the below-threshold regime the small-amplitude limit is non-uniform:
    the result is reported at the given finite amplitude, never at zero.
    """
    tau0 = solve_tau0(E, barrier, pulse)
    e0, m = barrier.field_static, barrier.m
    VmE = barrier.V - E
    G = pulse.integral_imag_axis

    I1, _ = integrate.quad(lambda u: u * G(u), 0.0, tau0,
                           epsabs=1e-13, epsrel=1e-11, limit=400)
    I2, _ = integrate.quad(lambda u: G(u) ** 2, 0.0, tau0,
                           epsabs=1e-13, epsrel=1e-11, limit=400)
    IG, _ = integrate.quad(G, 0.0, tau0, epsabs=1e-13, epsrel=1e-11, limit=400)

    A = (
        2.0 * VmE * tau0
        - e0**2 * tau0**3 / (3.0 * m)
        - 2.0 * e0 * I1 / m
        - I2 / m
    )
    x_exit = e0 * tau0**2 / (2.0 * m) + IG / m
    field_at_exit = e0 + complex(pulse(0.0)).real
    deltaE = VmE - field_at_exit * x_exit
    regime, E_T = _regime_tag(E, barrier, pulse)
    A0 = (4.0 / 3.0) * VmE * barrier.tau00_at(E)
    return EuclideanResult(
        A=A, A0=A0, tau0=tau0, deltaE=deltaE, regime=regime, E_T=E_T,
        exit_point=x_exit,
    )


def threshold_energy(barrier: TriangularBarrier, pulse) -> ThresholdResult:
    """E_T = V - width^2*field_static^2/(2m): the energy with tau00(E) = width."""
    if not isinstance(pulse, LorentzPulse):
        raise DomainError("threshold energy is defined for Lorentzian pulses")
    raw = barrier.V - pulse.width**2 * barrier.field_static**2 / (2.0 * barrier.m)
    lo = 1e-12 * barrier.V
    hi = barrier.V * (1.0 - 1e-12)
    clamped = not (lo < raw < hi)
    return ThresholdResult(E_T=min(max(raw, lo), hi), clamped=clamped, raw=raw)


def adapt_pulse_width(barrier, E_target: float) -> float:
    """Pulse width matching the trajectory singularity of the target energy."""
    if isinstance(barrier, TriangularBarrier):
        if not (0 < E_target < barrier.V):
            raise DomainError(f"need 0 < E_target < V={barrier.V}")
        return barrier.tau00_at(E_target)
    if isinstance(barrier, SechBarrier):
        return barrier.tau_s(E_target)
    raise TypeError(f"unsupported barrier type {type(barrier).__name__}")


@dataclass(frozen=True)
class ActionCurveRow:
    E: float
    A: float | None
    A0: float | None
    deltaE: float | None
    regime: str
    error: str | None = None


def action_curve(E_grid, barrier: TriangularBarrier, pulse) -> list[ActionCurveRow]:
    """A(E), A0(E), deltaE(E) over an energy grid; per-point errors collected."""
    rows = []
    for E in E_grid:
        try:
            res = euclidean_action(float(E), barrier, pulse)
            rows.append(ActionCurveRow(float(E), res.A, res.A0, res.deltaE, res.regime))
        except Exception as exc:  # noqa: BLE001 - per-row error capture is the contract
            rows.append(ActionCurveRow(float(E), None, None, None, "error", str(exc)))
    return rows
