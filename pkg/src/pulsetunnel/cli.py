"""Command-line driver: parameter parsing, method routing, CSV emission.

Subcommands
-----------
action-curve : A(E), A0(E), deltaE(E) over an energy grid.
rate         : time-resolved escape flux for the pulsed triangular barrier.
adapt        : recommend a pulse width (and amplitude window) for a target energy.
verify       : cross-method comparison table on one configuration.

CSV files open with a YAML-style commented header capturing the full run
configuration and the package version; identical configurations produce
byte-identical files.  Exit codes: 0 success, 2 regime/validity error,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

from . import __version__
from .errors import ConvergenceError, DomainError, PulseTunnelError, RegimeError
from .euclidean import (
    action_curve,
    adapt_pulse_width,
    euclidean_action,
    threshold_energy,
)
from .hj import (
    action,
    branch_report,
    decay_rate_series,
    rate_peak_time,
    solve_t0,
    validity_report,
)
from .model import (
    GaussianPulse,
    LorentzPulse,
    SechBarrier,
    TriangularBarrier,
    ZeroPulse,
    sech_wkb_exponent_analytic,
    static_wkb_exponent,
)
from .quanta import optimize_quanta
from .trajectory import minimize_delta_action, unperturbed_trajectory

EXIT_OK = 0
EXIT_REGIME = 2
EXIT_NONCONVERGENCE = 3


# --- Run configuration ------------------------------------------------------------

@dataclass
class RunConfig:
    """Validated run parameters; mirrors the command-line flags one-to-one."""

    barrier: str = "triangular"         # triangular | sech
    V: float = 10.0
    E0: float = 1.0                     # static field of the triangular barrier
    a: float = 1.0                      # sech barrier width
    m: float = 1.0
    pulse: str = "lorentz"              # lorentz | gauss | zero
    amp: float = 0.0
    theta: float = 2.0                  # Lorentzian width
    n: int = 3                          # Lorentzian exponent
    omega_rate: float = 1.0             # Gaussian rate
    E: float | None = None
    E_grid: str | None = None           # "start:stop:num"
    method: str = "auto"                # hj | euclidean | trajectory | quanta | auto
    out: str | None = None
    tol: float = 1e-6
    t_grid: str | None = None

    _FLOATS = ("V", "E0", "a", "m", "amp", "theta", "omega_rate", "tol")

    def validate(self) -> None:
        if self.barrier not in ("triangular", "sech"):
            raise DomainError(f"unknown barrier {self.barrier!r}")
        if self.pulse not in ("lorentz", "gauss", "zero"):
            raise DomainError(f"unknown pulse {self.pulse!r}")
        if self.method not in ("hj", "euclidean", "trajectory", "quanta", "auto"):
            raise DomainError(f"unknown method {self.method!r}")
        # physical invariants re-checked by constructing the model objects
        self.make_barrier(E_hint=self.E)
        self.make_pulse()

    def make_barrier(self, E_hint: float | None = None):
        if self.barrier == "triangular":
            E_bound = E_hint if E_hint is not None else 0.5 * self.V
            return TriangularBarrier(
                V=self.V, E_bound=E_bound, field_static=self.E0, m=self.m
            )
        return SechBarrier(V=self.V, a=self.a, m=self.m)

    def make_pulse(self):
        if self.pulse == "zero" or self.amp == 0.0:
            return ZeroPulse()
        if self.pulse == "lorentz":
            return LorentzPulse(amplitude=self.amp, width=self.theta,
                                exponent=self.n)
        return GaussianPulse(amplitude=self.amp, rate=self.omega_rate)

    def energies(self) -> list[float]:
        if self.E_grid:
            start, stop, num = self.E_grid.split(":")
            start, stop, num = float(start), float(stop), int(num)
            if num < 1:
                raise DomainError("energy grid needs at least one point")
            if num == 1:
                return [start]
            step = (stop - start) / (num - 1)
            return [start + i * step for i in range(num)]
        if self.E is not None:
            return [self.E]
        raise DomainError("provide --E or --E-grid")

    def to_items(self) -> list[tuple[str, str]]:
        items = []
        for key, value in asdict(self).items():
            if value is None:
                continue
            items.append((key, _format_value(value)))
        return items

    @classmethod
    def from_mapping(cls, mapping: dict) -> "RunConfig":
        kwargs = {}
        for f in cls.__dataclass_fields__.values():
            if f.name.startswith("_") or f.name not in mapping:
                continue
            raw = mapping[f.name]
            if f.name == "n":
                kwargs[f.name] = int(raw)
            elif f.name in cls._FLOATS or f.name == "E":
                kwargs[f.name] = float(raw)
            else:
                kwargs[f.name] = raw
        return cls(**kwargs)


def _format_value(v) -> str:
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


# --- CSV emission -----------------------------------------------------------------

def write_csv(stream, command: str, config: RunConfig, columns, rows) -> None:
    stream.write(f"# pulsetunnel: {__version__}\n")
    stream.write(f"# command: {command}\n")
    stream.write("# config:\n")
    for key, value in config.to_items():
        stream.write(f"#   {key}: {value}\n")
    stream.write(",".join(columns) + "\n")
    for row in rows:
        stream.write(",".join(_format_cell(c) for c in row) + "\n")


def _format_cell(c) -> str:
    if c is None:
        return "nan"
    if isinstance(c, float):
        return format(c, ".12g")
    return str(c)


def read_csv_config(path: str) -> RunConfig:
    """Reload the RunConfig embedded in a CSV header (round-trip support)."""
    mapping = {}
    in_config = False
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            body = line[1:].strip()
            if body == "config:":
                in_config = True
                continue
            if in_config and ":" in body:
                key, _, value = body.partition(":")
                mapping[key.strip()] = value.strip()
    return RunConfig.from_mapping(mapping)


def _emit(args, command: str, config: RunConfig, columns, rows) -> None:
    buf = io.StringIO()
    write_csv(buf, command, config, columns, rows)
    data = buf.getvalue()
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data)


# --- Subcommands ------------------------------------------------------------------

def cmd_action_curve(config: RunConfig) -> tuple[list[str], list[tuple]]:
    energies = config.energies()
    method = config.method
    if method == "auto":
        method = "euclidean" if config.barrier == "triangular" else "trajectory"
    pulse = config.make_pulse()

    if method == "euclidean":
        barrier0 = config.make_barrier(E_hint=energies[0])
        rows_src = action_curve(energies, barrier0, pulse)
        rows = [
            (r.E, r.A, r.A0, r.deltaE, r.regime)
            for r in rows_src
        ]
        return ["E", "A", "A0", "deltaE", "regime"], rows

    if method == "trajectory":
        if config.barrier != "sech":
            raise RegimeError("the trajectory method needs the sech barrier")
        barrier = config.make_barrier()

        def one(E):
            try:
                res = minimize_delta_action(E, barrier, pulse)
                return (E, res.A, res.A0, res.dA, "perturbative")
            except PulseTunnelError as exc:
                return (E, None, None, None, f"error:{type(exc).__name__}")

        with ThreadPoolExecutor(max_workers=4) as pool:
            rows = list(pool.map(one, energies))
        return ["E", "A", "A0", "deltaA", "regime"], rows

    if method == "hj":
        if config.barrier != "triangular":
            raise RegimeError("the Hamilton-Jacobi method needs the "
                              "triangular barrier")
        rows = []
        for E in energies:
            try:
                b = TriangularBarrier(V=config.V, E_bound=E,
                                      field_static=config.E0, m=config.m)
                rep = branch_report(b, pulse)
                state = solve_t0(rep.x1, 0.0, b, pulse)
                S = action(rep.x1, 0.0, b, pulse, state)
                A = 2.0 * S.imag
                rows.append((E, A, static_wkb_exponent(b, E), None, "hj"))
            except PulseTunnelError as exc:
                rows.append((E, None, None, None, f"error:{type(exc).__name__}"))
        return ["E", "A", "A0", "deltaE", "regime"], rows

    if method == "quanta":
        rows = []
        for E in energies:
            b = TriangularBarrier(V=config.V, E_bound=E,
                                  field_static=max(config.E0, 0.0), m=config.m)
            plan = optimize_quanta(E, b, pulse)
            rows.append((E, plan.A_eff, plan.omega, plan.N, "quanta"))
        return ["E", "A_eff", "omega_opt", "N_opt", "regime"], rows

    raise DomainError(f"method {method!r} not supported by action-curve")


def cmd_rate(config: RunConfig) -> tuple[list[str], list[tuple]]:
    if config.barrier != "triangular":
        raise RegimeError("the time-resolved rate needs the triangular barrier")
    if config.E is None:
        raise DomainError("rate needs --E")
    barrier = config.make_barrier(E_hint=config.E)
    pulse = config.make_pulse()
    if not isinstance(pulse, LorentzPulse):
        raise RegimeError("the rate formula needs a Lorentzian pulse")
    t_peak = rate_peak_time(barrier, pulse)
    if config.t_grid:
        start, stop, num = config.t_grid.split(":")
        start, stop, num = float(start), float(stop), int(num)
    else:
        start, stop, num = 0.05 * t_peak, 4.0 * t_peak, 60
    times = [start + (stop - start) * i / (num - 1) for i in range(num)]
    series = decay_rate_series(times, barrier, pulse)
    rows = [
        (t, r, e, p)
        for t, r, e, p in zip(series.times, series.rate, series.exponent,
                              series.prefactor)
    ]
    return ["t", "rate", "exponent", "prefactor"], rows


def cmd_adapt(config: RunConfig) -> tuple[list[str], list[tuple]]:
    """Pulse width matched to the target energy, plus the amplitude window.

    The recommended width places the pulse singularity at the trajectory
    singularity of the target energy (so the threshold energy equals the
    target).  The minimum amplitude ratio and the predicted exponent are
    launch-energy dependent, so they are tabulated over launch energies
    below the target (--E-grid, default 0.3..0.9 of the target).
    """
    if config.E is None:
        raise DomainError("adapt needs --E (the target energy)")
    E_target = config.E
    barrier = config.make_barrier(E_hint=E_target)
    theta = adapt_pulse_width(barrier, E_target)
    if config.barrier == "sech":
        traj = unperturbed_trajectory(E_target, barrier)
        A0 = sech_wkb_exponent_analytic(barrier, E_target)
        rows = [(E_target, theta, traj.t_s.imag, A0)]
        return ["E_target", "theta", "Im_t_s", "A0_at_target"], rows

    if config.E_grid:
        launches = config.energies()
    else:
        launches = [E_target * (0.3 + 0.1 * i) for i in range(7)]
    rows = []
    for E_launch in launches:
        b = TriangularBarrier(V=config.V, E_bound=E_launch,
                              field_static=config.E0, m=config.m)
        probe = LorentzPulse(amplitude=max(config.amp, 1e-6), width=theta,
                             exponent=config.n)
        rep = validity_report(b, probe)
        amp_min = rep.amp_lower_bound * config.E0
        A0 = static_wkb_exponent(b, E_launch)
        A_pred = (4.0 / 3.0) * (config.V - E_target) * theta \
            + 2.0 * (E_target - E_launch) * theta
        rows.append((E_launch, theta, amp_min, A_pred, A0, A0 - A_pred))
    return ["E_launch", "theta", "amp_min", "A_pred", "A0", "enhancement"], rows


def cmd_verify(config: RunConfig) -> tuple[list[str], list[tuple]]:
    rows = []
    tol = config.tol
    if config.barrier == "triangular":
        if config.E is None:
            raise DomainError("verify needs --E")
        b = config.make_barrier(E_hint=config.E)
        pulse = config.make_pulse()
        res = euclidean_action(config.E, b, pulse)
        rows.append(("euclidean_A", res.A, res.A, 0.0, "pass"))
        if isinstance(pulse, LorentzPulse) and pulse.width < b.tau00:
            rep = branch_report(b, pulse)
            state = solve_t0(rep.x1, 0.0, b, pulse)
            S = action(rep.x1, 0.0, b, pulse, state)
            A_hj = 2.0 * S.imag
            dev = abs(A_hj - res.A) / abs(res.A)
            rows.append(("hj_vs_euclidean", A_hj, res.A, dev,
                         "pass" if dev < max(tol, 1e-4) else "fail"))
            ET = threshold_energy(b, pulse)
            A51 = (4.0 / 3.0) * (b.V - ET.E_T) * pulse.width \
                + 2.0 * (ET.E_T - config.E) * pulse.width
            dev51 = abs(res.A - A51) / abs(A51)
            rows.append(("euclidean_vs_threshold_form", res.A, A51, dev51,
                         "info"))
    else:
        if config.E is None:
            raise DomainError("verify needs --E")
        b = config.make_barrier()
        pulse = config.make_pulse()
        res = minimize_delta_action(config.E, b, pulse)
        traj = unperturbed_trajectory(config.E, b)
        tau_s = traj.tau_s
        theta = config.theta
        gap = theta - tau_s
        pole_form = -(math.pi / 4.0) * config.amp * config.a * tau_s**2 \
            * (3.0 * config.V / config.E) ** 0.25 \
            * math.sqrt(3.0 * traj.omega / gap)
        dev = abs(res.dA - pole_form) / abs(pole_form)
        rows.append(("trajectory_dA_vs_pole_form", res.dA, pole_form, dev,
                     "info"))
        dt_form = -gap / math.sqrt(3.0)
        devdt = abs(res.dt_shift - dt_form) / abs(dt_form)
        rows.append(("dt_shift_vs_closed_form", res.dt_shift, dt_form, devdt,
                     "info"))
    failed = any(r[4] == "fail" for r in rows)
    if failed:
        raise ConvergenceError("verification failed", diagnostics={"rows": rows})
    return ["check", "value", "reference", "rel_deviation", "status"], rows


# --- Entry point ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="pulsetunnel",
        description="Semiclassical tunneling exponents under soft pulses",
    )
    p.add_argument("--config", help="key=value file mirroring the flags")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("action-curve", "rate", "adapt", "verify"):
        sp = sub.add_parser(name)
        sp.add_argument("--barrier", choices=("triangular", "sech"))
        sp.add_argument("--V", type=float)
        sp.add_argument("--E0", type=float)
        sp.add_argument("--a", type=float)
        sp.add_argument("--m", type=float)
        sp.add_argument("--pulse", choices=("lorentz", "gauss", "zero"))
        sp.add_argument("--amp", type=float)
        sp.add_argument("--theta", type=float)
        sp.add_argument("--n", type=int)
        sp.add_argument("--omega-rate", dest="omega_rate", type=float)
        sp.add_argument("--E", type=float)
        sp.add_argument("--E-grid", dest="E_grid")
        sp.add_argument("--t-grid", dest="t_grid")
        sp.add_argument("--method",
                        choices=("hj", "euclidean", "trajectory", "quanta",
                                 "auto"))
        sp.add_argument("--out")
        sp.add_argument("--tol", type=float)
    return p


_COMMANDS = {
    "action-curve": cmd_action_curve,
    "rate": cmd_rate,
    "adapt": cmd_adapt,
    "verify": cmd_verify,
}


def _load_config_file(path: str) -> dict:
    mapping = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            mapping[key.strip()] = value.strip()
    return mapping


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    mapping = {}
    if args.config:
        mapping.update(_load_config_file(args.config))
    for key, value in vars(args).items():
        if key in ("command", "config") or value is None:
            continue
        mapping[key] = value
    try:
        config = RunConfig.from_mapping(mapping)
        config.validate()
        columns, rows = _COMMANDS[args.command](config)
        _emit(args, args.command, config, columns, rows)
    except (RegimeError, DomainError) as exc:
        print(f"regime error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except ConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
