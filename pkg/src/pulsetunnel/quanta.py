"""Separation picture: N-quanta absorption followed by tunneling at a lifted energy.

Effective exponents are meaningful to logarithmic accuracy only; the
logarithms' arguments are fixed but their order-one prefactors are not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import DomainError
from .model import GaussianPulse, LorentzPulse, TriangularBarrier

__all__ = ["QuantaPlan", "effective_action", "optimize_quanta"]


@dataclass(frozen=True)
class QuantaPlan:
    omega: float
    N: float                # real-valued relaxation of the quanta count
    N_rounded: int
    A_eff: float
    deltaE: float           # omega * N
    note: str = "exponent accurate to O(log) only"


def _absorption_log(pulse: LorentzPulse, omega: float) -> float:
    """ln(field_static_scale / spectral amplitude) argument for one quantum.

    For the Lorentzian family: ln(E0/(E*(w*theta)^(n-2)*exp(-w*theta))),
    the E0 scale being divided out by the caller.
    """
    wt = omega * pulse.width
    return -math.log(pulse.amplitude) - (pulse.exponent - 2) * math.log(wt) + wt


def effective_action(
    omega: float, N: float, E: float, barrier: TriangularBarrier, pulse
) -> float:
    """Exponent of (absorption of N quanta of frequency omega) x (tunneling).

    Lorentzian pulse over a decaying triangular barrier:
        A = A0(E + omega*N) + 2N*ln(E0 / (amp*(w*theta)^(n-2)*exp(-w*theta)))
    Gaussian pulse on a stable well (field_static = 0): climb to the top,
    N = (V-E)/omega quanta, spectral amplitude amp*exp(-omega^2/(4 rate^2)).
    """
    if omega <= 0 or N < 0:
        raise DomainError("need omega > 0 and N >= 0")
    V, m = barrier.V, barrier.m
    if isinstance(pulse, GaussianPulse):
        # stable-well variant: absorption only, no under-barrier leg
        return 2.0 * N * (
            math.log(omega * math.sqrt(m * (V - E)) / pulse.amplitude)
            + omega**2 / (4.0 * pulse.rate**2)
        )
    if not isinstance(pulse, LorentzPulse):
        raise DomainError("effective_action needs a Lorentzian or Gaussian pulse")
    lifted = E + omega * N
    if lifted >= V:
        raise DomainError(
            f"lifted energy {lifted} reaches the barrier top V={V}"
        )
    e0 = barrier.field_static
    if e0 <= 0:
        raise DomainError("the tunneling leg needs field_static > 0")
    A0_lifted = (4.0 / 3.0) * (V - lifted) * barrier.tau00_at(lifted)
    log_arg = math.log(e0) + _absorption_log(pulse, omega)
    return A0_lifted + 2.0 * N * log_arg


def _gaussian_curve(omega: float, E: float, barrier: TriangularBarrier,
                    pulse: GaussianPulse) -> float:
    VmE = barrier.V - E
    return effective_action(omega, VmE / omega, E, barrier, pulse)


def optimize_quanta(
    E: float,
    barrier: TriangularBarrier,
    pulse,
    *,
    omega_points: int = 400,
) -> QuantaPlan:
    """Minimize the effective exponent over (omega, N).

    Gaussian stable well: N is pinned to (V-E)/omega, a 1D minimization.
    Lorentzian over a barrier: log-spaced omega scan with an inner bounded
    N-minimization; the formal minimum runs off to large omega, so the scan
    documents the plateau rather than chasing it.
    """
    V, m = barrier.V, barrier.m
    if not (0 < E < V):
        raise DomainError(f"need 0 < E < V={V}")
    if isinstance(pulse, GaussianPulse):
        L = math.log(pulse.rate * math.sqrt(m * (V - E)) / pulse.amplitude)
        if L <= 0:
            raise DomainError("Gaussian optimum needs amp << rate*sqrt(m(V-E))")
        w_guess = 2.0 * pulse.rate * math.sqrt(L)
        res = optimize.minimize_scalar(
            lambda w: _gaussian_curve(w, E, barrier, pulse),
            bounds=(0.05 * w_guess, 20.0 * w_guess),
            method="bounded",
            options={"xatol": 1e-12 * w_guess},
        )
        w_opt = float(res.x)
        N_opt = (V - E) / w_opt
        return QuantaPlan(
            omega=w_opt, N=N_opt, N_rounded=round(N_opt),
            A_eff=float(res.fun), deltaE=w_opt * N_opt,
        )

    if not isinstance(pulse, LorentzPulse):
        raise DomainError("optimize_quanta needs a Lorentzian or Gaussian pulse")
    theta = pulse.width
    omegas = np.geomspace(1e-2 / theta, 50.0 * (V - E), omega_points)
    best = None
    for w in omegas:
        N_max = (V - E) / w * (1.0 - 1e-9)
        res = optimize.minimize_scalar(
            lambda N: effective_action(w, N, E, barrier, pulse),
            bounds=(0.0, N_max),
            method="bounded",
            options={"xatol": 1e-10 * max(N_max, 1.0)},
        )
        if best is None or res.fun < best[2]:
            best = (w, float(res.x), float(res.fun))
    w_opt, N_opt, A_opt = best
    # local refinement in omega around the best scan point
    res = optimize.minimize_scalar(
        lambda w: optimize.minimize_scalar(
            lambda N: effective_action(w, N, E, barrier, pulse),
            bounds=(0.0, (V - E) / w * (1.0 - 1e-9)),
            method="bounded",
        ).fun,
        bounds=(w_opt / 2.0, min(w_opt * 2.0, omegas[-1])),
        method="bounded",
    )
    if res.fun < A_opt:
        w_opt = float(res.x)
        inner = optimize.minimize_scalar(
            lambda N: effective_action(w_opt, N, E, barrier, pulse),
            bounds=(0.0, (V - E) / w_opt * (1.0 - 1e-9)),
            method="bounded",
        )
        N_opt, A_opt = float(inner.x), float(inner.fun)
    return QuantaPlan(
        omega=w_opt, N=N_opt, N_rounded=round(N_opt), A_eff=A_opt,
        deltaE=w_opt * N_opt,
    )
