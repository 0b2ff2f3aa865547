"""Brute-force split-operator Schrodinger solver used as the exact-quantum oracle.

Propagates i dpsi/dt = [-(1/2m) d2/dx2 + V(x) - x*pulse(t)] psi on a periodic
grid with smooth imaginary-potential absorbers, starting from a quasi-bound
state of a Gaussian-regularized narrow well.  Comparisons against the
semiclassical modules are exponent-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError
from .model import TriangularBarrier, ZeroPulse

__all__ = [
    "GridSpec",
    "WavefunctionState",
    "TdsePotential",
    "prepare_metastable",
    "evolve",
    "enhancement_exponent",
]


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    n_points: int
    dt: float
    t_final: float
    absorber_frac: float = 0.15
    absorber_strength: float = 1.0
    m: float = 1.0

    def __post_init__(self):
        if self.n_points < 1024 or self.n_points & (self.n_points - 1):
            raise DomainError("n_points must be a power of two >= 1024")
        if self.absorber_frac < 0.10:
            raise DomainError("absorbing boundary width must be >= 10% of domain")
        if not (0.0 < self.dt <= self.t_final):
            raise DomainError("need 0 < dt <= t_final")
        # split-operator steps are unconditionally stable; accuracy needs the
        # phase advance of occupied states per step to stay small, which the
        # caller controls through dt relative to the potential/energy scales.

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_points

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_points)

    @property
    def k(self) -> np.ndarray:
        return 2.0 * math.pi * np.fft.fftfreq(self.n_points, d=self.dx)

    @property
    def absorber_width(self) -> float:
        return self.absorber_frac * (self.x_max - self.x_min)


@dataclass
class WavefunctionState:
    psi: np.ndarray
    time: float
    absorbed_left: float = 0.0
    absorbed_right: float = 0.0
    grid: GridSpec | None = None

    def norm(self) -> float:
        return float(np.sum(np.abs(self.psi) ** 2) * self.grid.dx)


@dataclass(frozen=True)
class TdsePotential:
    """Static potential: clipped triangular slope plus a Gaussian-regularized well."""

    barrier: TriangularBarrier
    well_width: float
    well_depth: float
    floor: float

    def __call__(self, x):
        b = self.barrier
        v = np.maximum(b.V - b.field_static * np.abs(x), self.floor)
        return v - self.well_depth * np.exp(-(x**2) / (2.0 * self.well_width**2))


def _absorber(grid: GridSpec) -> np.ndarray:
    x = grid.x
    w = grid.absorber_width
    left = np.clip((grid.x_min + w - x) / w, 0.0, 1.0)
    right = np.clip((x - (grid.x_max - w)) / w, 0.0, 1.0)
    return grid.absorber_strength * (left**3 + right**3)


def _coupling(grid: GridSpec):
    """Length-gauge coordinate, saturated inside the absorbers."""
    w = grid.absorber_width
    lo, hi = grid.x_min + w, grid.x_max - w
    return np.clip(grid.x, lo, hi)


def _energy(psi, vstat, grid: GridSpec) -> float:
    dx = grid.dx
    kin = np.fft.ifft(grid.k**2 / (2.0 * grid.m) * np.fft.fft(psi))
    num = np.sum(np.conj(psi) * (kin + vstat * psi)).real * dx
    den = np.sum(np.abs(psi) ** 2) * dx
    return float(num / den)


def _relax_in_well(vstat, grid: GridSpec, x_cut: float, n_steps=4000, dtau=None):
    """Imaginary-time relaxation confined to |x| < x_cut."""
    x = grid.x
    if dtau is None:
        dtau = 0.5 * grid.dt
    mask = 1.0 / (1.0 + np.exp((np.abs(x) - x_cut) / (0.05 * x_cut)))
    psi = np.exp(-(x**2)).astype(complex) * mask
    expk = np.exp(-grid.k**2 / (2.0 * grid.m) * dtau)
    expv = np.exp(-0.5 * vstat * dtau)
    last_e = math.inf
    for i in range(n_steps):
        psi = expv * psi
        psi = np.fft.ifft(expk * np.fft.fft(psi))
        psi = expv * psi * mask
        psi /= math.sqrt(np.sum(np.abs(psi) ** 2) * grid.dx)
        if i % 200 == 199:
            e = _energy(psi, vstat, grid)
            if abs(e - last_e) < 1e-10 * max(abs(e), 1.0):
                break
            last_e = e
    return psi


def prepare_metastable(
    barrier: TriangularBarrier,
    grid: GridSpec,
    *,
    well_width: float | None = None,
    tol: float = 0.01,
    max_tune: int = 12,
) -> tuple[WavefunctionState, TdsePotential]:
    """Quasi-bound state of the regularized well, tuned to the target energy.

    The delta well is regularized as a Gaussian of width <= exit length / 50;
    its depth is adjusted (secant) until the relaxed state's energy matches
    barrier.E_bound within `tol` relative.
    """
    b = barrier
    exit_len = b.exit_point
    if well_width is None:
        well_width = exit_len / 50.0
    x_cut = 0.45 * exit_len
    # delta-well strength reproducing the target binding below the apex
    g = math.sqrt(2.0 * (b.V - b.E_bound) / b.m)
    depth = g / (math.sqrt(2.0 * math.pi) * well_width)
    floor = -2.0 * b.V

    achieved = []
    prev = None
    for _ in range(max_tune):
        pot = TdsePotential(b, well_width, depth, floor)
        vstat = pot(grid.x)
        psi = _relax_in_well(vstat, grid, x_cut)
        e = _energy(psi, vstat, grid)
        achieved.append((depth, e))
        err = e - b.E_bound
        if abs(err) < tol * abs(b.E_bound):
            state = WavefunctionState(psi=psi, time=0.0, grid=grid)
            return state, pot
        if prev is None:
            # deeper well -> lower energy; linear guess from the delta relation
            d_new = depth * (1.0 + err / (2.0 * (b.V - b.E_bound)))
        else:
            d0, e0 = prev
            if abs(e - e0) < 1e-14:
                break
            d_new = depth - err * (depth - d0) / (e - e0)
        prev = (depth, e)
        depth = d_new
    raise ConvergenceError(
        f"could not tune the well to E={b.E_bound}",
        diagnostics={"achieved": achieved},
    )


@dataclass
class EvolutionRecord:
    times: np.ndarray
    norm: np.ndarray
    absorbed_left: np.ndarray
    absorbed_right: np.ndarray
    flux: np.ndarray            # probability current at the detector point
    detector_x: float
    snapshots: list = field(default_factory=list)


def evolve(
    state: WavefunctionState,
    potential,
    pulse,
    grid: GridSpec,
    *,
    absorbers: bool = True,
    detector_x: float | None = None,
    record_every: int = 10,
    snapshot_every: int = 0,
    t_final: float | None = None,
    dt: float | None = None,
) -> tuple[WavefunctionState, EvolutionRecord]:
    """Second-order split-operator propagation with a time-dependent pulse.

    `potential` is a callable V_static(x).  The pulse couples in length gauge,
    -x*pulse(t), with the coordinate saturated inside the absorbing layers.
    """
    g = grid
    dt = g.dt if dt is None else dt
    t_final = g.t_final if t_final is None else t_final
    x = g.x
    vstat = potential(x) if callable(potential) else np.asarray(potential)
    cap = _absorber(g) if absorbers else np.zeros_like(x)
    xc = _coupling(g)
    expk = np.exp(-1j * g.k**2 / (2.0 * g.m) * dt)

    psi = state.psi.copy()
    t = state.time
    n_steps = int(round(abs(t_final - t) / abs(dt)))
    det = detector_x if detector_x is not None else 0.8 * g.x_max
    j_det = int(np.clip(round((det - g.x_min) / g.dx), 1, g.n_points - 2))

    times, norms, abs_l, abs_r, flux = [], [], [], [], []
    snapshots = []
    absorbed_l, absorbed_r = state.absorbed_left, state.absorbed_right
    left_half = x < 0
    norm_prev = float(np.sum(np.abs(psi) ** 2) * g.dx)

    for i in range(n_steps):
        t_mid = t + 0.5 * dt
        v = vstat - xc * complex(pulse(t_mid)).real
        expv = np.exp(-1j * (v - 1j * cap) * 0.5 * dt)
        psi = expv * psi
        psi = np.fft.ifft(expk * np.fft.fft(psi))
        psi = expv * psi
        if absorbers:
            # apportion the exact norm decrement by the local absorber weight
            norm_now = float(np.sum(np.abs(psi) ** 2) * g.dx)
            lost = norm_prev - norm_now
            weights = cap * np.abs(psi) ** 2
            w_l = float(np.sum(weights[left_half]))
            w_r = float(np.sum(weights[~left_half]))
            w_tot = w_l + w_r
            if w_tot > 0.0 and lost > 0.0:
                absorbed_l += lost * w_l / w_tot
                absorbed_r += lost * w_r / w_tot
            norm_prev = norm_now
        t += dt
        if i % record_every == 0 or i == n_steps - 1:
            times.append(t)
            norms.append(float(np.sum(np.abs(psi) ** 2) * g.dx))
            abs_l.append(absorbed_l)
            abs_r.append(absorbed_r)
            dpsi = (psi[j_det + 1] - psi[j_det - 1]) / (2.0 * g.dx)
            flux.append(float((np.conj(psi[j_det]) * dpsi).imag / g.m))
        if snapshot_every and i % snapshot_every == 0:
            snapshots.append((t, np.abs(psi) ** 2))

    out = WavefunctionState(
        psi=psi, time=t, absorbed_left=absorbed_l, absorbed_right=absorbed_r,
        grid=g,
    )
    rec = EvolutionRecord(
        times=np.array(times),
        norm=np.array(norms),
        absorbed_left=np.array(abs_l),
        absorbed_right=np.array(abs_r),
        flux=np.array(flux),
        detector_x=x[j_det],
        snapshots=snapshots,
    )
    return out, rec


def _static_rate(record: EvolutionRecord) -> float:
    """Quasi-stationary decay rate from the late-time norm decay."""
    n = len(record.times)
    sl = slice(n // 2, n)
    t = record.times[sl]
    ln_n = np.log(np.maximum(record.norm[sl], 1e-300))
    slope = np.polyfit(t, ln_n, 1)[0]
    return max(-slope, 0.0)


def _pulse_duration(pulse) -> float:
    poles = pulse.poles()
    if poles:
        return float(poles[0][0].imag)
    rate = getattr(pulse, "rate", None)
    if rate:
        return 1.0 / rate
    return 1.0


def enhancement_exponent(
    barrier: TriangularBarrier,
    pulse,
    grid: GridSpec,
    *,
    pulse_center: float | None = None,
    settle_time: float | None = None,
) -> dict:
    """Measured exponent reduction ln(peak pulsed escape flux / static flux).

    Runs the static and pulsed evolutions from the same prepared state.  The
    prepared state sheds a transient flux burst while it settles into
    quasi-stationary decay, so the pulse is centered at `pulse_center`
    (default 5/8 of the run) and the baseline flux is the static median after
    `settle_time` (default 3/8 of the run); the pulsed peak is searched only
    within four pulse durations of the center.  Exponent-only comparison.
    """
    state, pot = prepare_metastable(barrier, grid)
    det = 1.3 * barrier.exit_point
    _, rec_static = evolve(state, pot, ZeroPulse(), grid, detector_x=det)
    gamma0 = _static_rate(rec_static)
    if gamma0 < 1e-300 or not np.isfinite(gamma0):
        raise ConvergenceError(
            "static rate below the double-precision floor (exponent too large "
            "for a desk-scale oracle)"
        )
    t0 = 0.625 * grid.t_final if pulse_center is None else pulse_center
    settle = 0.375 * grid.t_final if settle_time is None else settle_time

    _, rec_pulsed = evolve(state, pot, _ShiftedPulse(pulse, t0), grid,
                           detector_x=det)
    flux0 = float(np.median(rec_static.flux[rec_static.times > settle]))
    window = np.abs(rec_pulsed.times - t0) < 4.0 * _pulse_duration(pulse)
    if not np.any(window):
        raise ConvergenceError("pulse window lies outside the simulated times")
    peak = float(np.max(rec_pulsed.flux[window]))
    if peak <= 0 or flux0 <= 0:
        raise ConvergenceError("escape flux not resolved above noise")
    # exponent reduction A0 - A >= 0: pulsed peak flux exceeds the static one
    delta_A = math.log(peak / flux0)
    i_peak = int(np.argmax(rec_pulsed.flux[window]))
    return {
        "delta_A": delta_A,
        "static_rate": gamma0,
        "static_exponent": -math.log(gamma0 / (2.0 * (barrier.V - barrier.E_bound))),
        "static_flux": flux0,
        "peak_flux": peak,
        "peak_time": float(rec_pulsed.times[window][i_peak] - t0),
    }


class _ShiftedPulse:
    """Pulse recentered at t0 for use inside a finite simulation window."""

    def __init__(self, pulse, t0):
        self.pulse = pulse
        self.t0 = t0

    def __call__(self, t):
        return self.pulse(t - self.t0)
