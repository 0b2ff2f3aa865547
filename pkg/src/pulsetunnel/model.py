"""Barrier and pulse definitions with analytic continuation to complex time.

Units: hbar = 1 throughout; mass, energies, times and fields are dimensionless
real scalars in a mutually consistent system.  Every other module consumes the
types defined here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import DomainError, SingularityError

__all__ = [
    "TriangularBarrier",
    "SechBarrier",
    "ZeroPulse",
    "LorentzPulse",
    "GaussianPulse",
    "pulse_eval",
    "pulse_fourier_envelope",
    "static_wkb_exponent",
]


# --- Barriers -------------------------------------------------------------------

@dataclass(frozen=True)
class TriangularBarrier:
    """Triangular barrier V - field_static*|x| with a narrow-well bound state.

    Parameters
    ----------
    V : apex energy of the barrier.
    E_bound : energy of the metastable (delta-well) state, 0 < E_bound < V.
    field_static : static slope field of the barrier; >= 0 (0 = stable well,
        only meaningful for the quanta separation picture).
    m : particle mass, > 0.
    """

    V: float
    E_bound: float
    field_static: float
    m: float = 1.0

    def __post_init__(self):
        if self.m <= 0:
            raise DomainError(f"mass must be positive, got {self.m}")
        if not (0 < self.E_bound < self.V):
            raise DomainError(
                f"need 0 < E_bound < V, got E_bound={self.E_bound}, V={self.V}"
            )
        if self.field_static < 0:
            raise DomainError("field_static must be >= 0")

    def p0(self, E: float | None = None) -> float:
        """Under-barrier momentum scale sqrt(2m(V-E))."""
        E = self.E_bound if E is None else E
        if E >= self.V:
            raise DomainError(f"E={E} is not below the barrier top V={self.V}")
        return math.sqrt(2.0 * self.m * (self.V - E))

    def tau00_at(self, E: float) -> float:
        """Static under-barrier traversal time sqrt(2m(V-E))/field_static."""
        if self.field_static == 0:
            raise DomainError("tau00 undefined for a stable well (field_static=0)")
        return self.p0(E) / self.field_static

    @property
    def tau00(self) -> float:
        return self.tau00_at(self.E_bound)

    @property
    def exit_point(self) -> float:
        """Static classical exit coordinate (V-E)/field_static."""
        if self.field_static == 0:
            raise DomainError("no exit point for a stable well")
        return (self.V - self.E_bound) / self.field_static


@dataclass(frozen=True)
class SechBarrier:
    """Analytic barrier V / cosh^2(x/a)."""

    V: float
    a: float
    m: float = 1.0

    def __post_init__(self):
        if self.V <= 0 or self.a <= 0 or self.m <= 0:
            raise DomainError("SechBarrier requires V > 0, a > 0, m > 0")

    def potential(self, x):
        return self.V / np.cosh(np.asarray(x) / self.a) ** 2

    def omega(self, E: float) -> float:
        """Oscillation frequency sqrt(2E/(m a^2)) of the trajectory at energy E."""
        self._check_energy(E)
        return math.sqrt(2.0 * E / (self.m * self.a**2))

    def tau_s(self, E: float) -> float:
        """Imaginary part pi/(2*omega) of the trajectory branch point."""
        return math.pi / (2.0 * self.omega(E))

    def turning_point(self, E: float) -> float:
        """Positive classical turning point a*arccosh(sqrt(V/E))."""
        self._check_energy(E)
        return self.a * math.acosh(math.sqrt(self.V / E))

    def _check_energy(self, E: float):
        if not (0 < E < self.V):
            raise DomainError(f"need 0 < E < V={self.V}, got E={E}")


# --- Pulses ---------------------------------------------------------------------
#
# Every pulse evaluates at complex time, is even in t, and knows the location
# and order of its own singularities so contour code never re-derives them.

_POLE_GUARD = 1e-12


@dataclass(frozen=True)
class ZeroPulse:
    """No non-stationary field."""

    amplitude: float = 0.0

    def __call__(self, t):
        return np.zeros_like(np.asarray(t, dtype=complex))

    def poles(self):
        return ()

    def integral_imag_axis(self, tau: float) -> float:
        return 0.0

    def antiderivative(self, t) -> complex:
        return 0.0 + 0.0j

    def first_moment_antiderivative(self, t) -> complex:
        return 0.0 + 0.0j

    def fourier_envelope(self, omega_query: float) -> float:
        return 0.0


def _lorentz_J(x, n: int):
    """J_n(x) = int_0^x (1-u^2)^(-n) du by the standard reduction formula."""
    J = np.arctanh(x)
    for k in range(2, n + 1):
        J = x * (1.0 - x * x) ** (1 - k) / (2 * (k - 1)) + (2 * k - 3) / (
            2 * (k - 1)
        ) * J
    return J


@dataclass(frozen=True)
class LorentzPulse:
    """Soft pulse amplitude / (1 + t^2/width^2)^exponent.

    Poles of order `exponent` sit at t = +/- i*width.  Integer exponent >= 2
    only; the Hamilton-Jacobi branch analysis additionally assumes >= 3.
    """

    amplitude: float
    width: float
    exponent: int

    def __post_init__(self):
        if self.amplitude < 0:
            raise DomainError("pulse amplitude must be >= 0")
        if self.width <= 0:
            raise DomainError("pulse width must be positive")
        if not isinstance(self.exponent, (int, np.integer)) or self.exponent < 2:
            raise DomainError(
                f"Lorentzian exponent must be an integer >= 2, got {self.exponent!r}"
            )

    def __call__(self, t):
        t = np.asarray(t, dtype=complex)
        denom = 1.0 + (t / self.width) ** 2
        bad = np.abs(denom) < _POLE_GUARD
        if np.any(bad):
            raise SingularityError(
                f"pulse evaluated at its pole t = +/- {self.width}i",
                location=1j * self.width,
            )
        out = self.amplitude / denom**self.exponent
        return out if out.ndim else complex(out)

    def poles(self):
        return ((1j * self.width, self.exponent), (-1j * self.width, self.exponent))

    def integral_imag_axis(self, tau: float) -> float:
        """int_0^tau pulse(i*u) du, exact; diverges as tau -> width."""
        x = tau / self.width
        if abs(x) >= 1.0:
            raise SingularityError(
                "imaginary-axis pulse integral crosses the pole at i*width",
                location=1j * self.width,
            )
        return self.amplitude * self.width * float(_lorentz_J(x, self.exponent))

    def antiderivative(self, t) -> complex:
        """int_0^t pulse(s) ds, exact; single-valued in the t-plane cut along
        the imaginary axis beyond the poles at +/- i*width."""
        return complex(
            1j * self.amplitude * self.width
            * _lorentz_J(-1j * complex(t) / self.width, self.exponent)
        )

    def first_moment_antiderivative(self, t) -> complex:
        """int_0^t s*pulse(s) ds, exact elementary form."""
        n = self.exponent
        u = 1.0 + (complex(t) / self.width) ** 2
        return complex(
            self.amplitude * self.width**2 / (2.0 * (1 - n)) * (u ** (1 - n) - 1.0)
        )

    def fourier_envelope(self, omega_query: float) -> float:
        """Spectral amplitude ~ amp*width*(w*width)^(n-1)*exp(-w*width).

        Order-one prefactor left unfixed; consumers use this inside
        logarithms only.
        """
        w = omega_query * self.width
        return self.amplitude * self.width * w ** (self.exponent - 1) * math.exp(-w)


@dataclass(frozen=True)
class GaussianPulse:
    """Entire pulse amplitude * exp(-rate^2 t^2)."""

    amplitude: float
    rate: float

    def __post_init__(self):
        if self.amplitude < 0:
            raise DomainError("pulse amplitude must be >= 0")
        if self.rate <= 0:
            raise DomainError("Gaussian rate must be positive")

    def __call__(self, t):
        t = np.asarray(t, dtype=complex)
        out = self.amplitude * np.exp(-(self.rate**2) * t**2)
        return out if out.ndim else complex(out)

    def poles(self):
        return ()

    def integral_imag_axis(self, tau: float) -> float:
        # pulse(i*u) = amp * exp(+rate^2 u^2)
        return float(
            self.amplitude
            * math.sqrt(math.pi)
            / (2.0 * self.rate)
            * special.erfi(self.rate * tau)
        )

    def antiderivative(self, t) -> complex:
        # erf(z) = 1 - exp(-z^2) * w(iz), entire in z
        z = self.rate * complex(t)
        erf = 1.0 - np.exp(-z * z) * special.wofz(1j * z)
        return complex(self.amplitude * math.sqrt(math.pi) / (2.0 * self.rate) * erf)

    def first_moment_antiderivative(self, t) -> complex:
        z2 = (self.rate * complex(t)) ** 2
        return complex(self.amplitude / (2.0 * self.rate**2) * (1.0 - np.exp(-z2)))

    def fourier_envelope(self, omega_query: float) -> float:
        return self.amplitude * math.exp(-(omega_query**2) / (4.0 * self.rate**2))


Pulse = ZeroPulse | LorentzPulse | GaussianPulse


def pulse_eval(pulse, t):
    """Pulse field at (complex) time t; raises SingularityError at a pole."""
    return pulse(t)


def pulse_fourier_envelope(pulse, omega_query: float) -> float:
    """Spectral amplitude of the pulse at a positive query frequency.

    Accurate only up to an order-one constant; meant for use inside
    logarithms (quanta-optimizer).
    """
    if omega_query <= 0:
        raise DomainError("query frequency must be positive")
    return pulse.fourier_envelope(omega_query)


# --- Static WKB exponent --------------------------------------------------------

def static_wkb_exponent(barrier, E: float) -> float:
    """Conventional static tunneling exponent A0(E) = 2*sqrt(2m)*int sqrt(V-E) dx."""
    if isinstance(barrier, TriangularBarrier):
        if E >= barrier.V:
            raise DomainError(f"E={E} >= V={barrier.V}: no under-barrier region")
        return (4.0 / 3.0) * (barrier.V - E) * barrier.tau00_at(E)
    if isinstance(barrier, SechBarrier):
        if not (0 < E < barrier.V):
            raise DomainError(f"need 0 < E < V={barrier.V}, got E={E}")
        xt = barrier.turning_point(E)

        def integrand(x):
            return np.sqrt(np.maximum(barrier.potential(x) - E, 0.0))

        val, _ = integrate.quad(integrand, -xt, xt, epsabs=1e-13, epsrel=1e-12)
        return 2.0 * math.sqrt(2.0 * barrier.m) * val
    raise TypeError(f"unsupported barrier type {type(barrier).__name__}")


def sech_wkb_exponent_analytic(barrier: SechBarrier, E: float) -> float:
    """Closed form 2*pi*a*sqrt(2m)*(sqrt(V)-sqrt(E)) for the sech^2 barrier."""
    barrier._check_energy(E)
    return (
        2.0
        * math.pi
        * barrier.a
        * math.sqrt(2.0 * barrier.m)
        * (math.sqrt(barrier.V) - math.sqrt(E))
    )
