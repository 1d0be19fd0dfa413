"""Pulse schedules and gate calibration.

A schedule carries per-electrode voltage waveforms and microwave drive
envelopes, both piecewise linear: breakpoint lists evaluated by exact
linear interpolation with the boundary values held outside the covered
span.  Duplicated breakpoint times encode instantaneous jumps (the value
is right-continuous at the jump).

Calibration is analytic in the sudden-resonance picture: a resonant drive
of Rabi frequency Omega flips the qubit in pi/Omega, and a resonantly
coupled pair driven by the exchange element B reaches the superposition
cos(a)|down,up> - i sin(a)|up,down> after a dwell of 2 hbar a / B.  A
`refine` pass is available that root-finds the dwell through the full
dynamics when finite-rate ramps shift the effective resonance time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .qubits import QubitArrayHamiltonian
from .units import EV_ERG, HBAR, K_B

__all__ = [
    "MicrowaveChannel",
    "PulseSchedule",
    "VoltageChannel",
    "calibrate_swap",
    "concat",
    "pi_pulse",
    "rabi_frequency",
    "swap_schedule",
    "triangular_ramp",
]


def _check_points(points, lo, hi, name, unit_interval=False):
    pts = [(float(t), float(v)) for t, v in points]
    times = [t for t, _ in pts]
    if any(b < a for a, b in zip(times, times[1:])):
        raise ValueError(f"{name} breakpoint times must be sorted")
    if times and (times[0] < lo - 1e-30 or times[-1] > hi * (1 + 1e-12) + 1e-30):
        raise ValueError(f"{name} breakpoints must lie within [0, duration]")
    if unit_interval and any(not 0.0 <= v <= 1.0 for _, v in pts):
        raise ValueError(f"{name} values must lie in [0, 1]")
    return tuple(pts)


def _interp(points, t):
    """Piecewise-linear evaluation; boundary values held outside the span."""
    if not points:
        return np.zeros_like(np.asarray(t, dtype=float)) if np.ndim(t) else 0.0
    xs = np.array([p[0] for p in points])
    ys = np.array([p[1] for p in points])
    out = np.interp(t, xs, ys)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class VoltageChannel:
    """Electrode voltage increment waveform for one site (volts vs seconds)."""

    site: int
    points: tuple[tuple[float, float], ...]

    def value_at(self, t):
        return _interp(self.points, t)


@dataclass(frozen=True)
class MicrowaveChannel:
    """Microwave drive: carrier (GHz), amplitude (V/cm), phase, and envelope.

    The envelope is a piecewise-linear profile in [0, 1]; the instantaneous
    field is amplitude * envelope(t) * cos(2 pi f t + phase).
    """

    freq_GHz: float
    amp_V_per_cm: float
    phase: float = 0.0
    envelope: tuple[tuple[float, float], ...] = ()

    def envelope_at(self, t):
        if not self.envelope:
            return np.ones_like(np.asarray(t, dtype=float)) if np.ndim(t) else 1.0
        return _interp(self.envelope, t)


@dataclass(frozen=True)
class PulseSchedule:
    """Time-tagged voltage and microwave channels plus named intervals."""

    duration: float
    voltage_channels: tuple[VoltageChannel, ...] = ()
    microwave: tuple[MicrowaveChannel, ...] = ()
    annotations: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.duration < 0:
            raise ValueError(f"duration must be nonnegative, got {self.duration}")
        vcs = tuple(
            VoltageChannel(c.site, _check_points(c.points, 0.0, self.duration, "voltage"))
            for c in self.voltage_channels
        )
        mws = tuple(
            MicrowaveChannel(
                c.freq_GHz,
                c.amp_V_per_cm,
                c.phase,
                _check_points(c.envelope, 0.0, self.duration, "envelope", unit_interval=True),
            )
            for c in self.microwave
        )
        object.__setattr__(self, "voltage_channels", vcs)
        object.__setattr__(self, "microwave", mws)

    def voltage_at(self, site: int, t):
        """Summed voltage increment on `site` at time t (volts)."""
        vals = [c.value_at(t) for c in self.voltage_channels if c.site == site]
        if not vals:
            return np.zeros_like(np.asarray(t, dtype=float)) if np.ndim(t) else 0.0
        return sum(vals)

    def breakpoints(self) -> np.ndarray:
        """Sorted unique times at which any channel changes slope."""
        ts = {0.0, self.duration}
        for c in self.voltage_channels:
            ts.update(t for t, _ in c.points)
        for c in self.microwave:
            ts.update(t for t, _ in c.envelope)
        return np.array(sorted(ts))

    def to_dict(self) -> dict:
        return {
            "duration_s": self.duration,
            "voltage_channels": [
                {"site": c.site, "points": [[t, v] for t, v in c.points]}
                for c in self.voltage_channels
            ],
            "microwave": [
                {
                    "freq_GHz": c.freq_GHz,
                    "amp_V_per_cm": c.amp_V_per_cm,
                    "phase": c.phase,
                    "envelope": [[t, x] for t, x in c.envelope],
                }
                for c in self.microwave
            ],
            "annotations": {k: [a, b] for k, (a, b) in self.annotations.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PulseSchedule":
        return cls(
            duration=d["duration_s"],
            voltage_channels=tuple(
                VoltageChannel(c["site"], tuple((t, v) for t, v in c["points"]))
                for c in d.get("voltage_channels", [])
            ),
            microwave=tuple(
                MicrowaveChannel(
                    c["freq_GHz"],
                    c["amp_V_per_cm"],
                    c.get("phase", 0.0),
                    tuple((t, x) for t, x in c.get("envelope", [])),
                )
                for c in d.get("microwave", [])
            ),
            annotations={k: (a, b) for k, (a, b) in d.get("annotations", {}).items()},
        )


def concat(first: PulseSchedule, second: PulseSchedule) -> PulseSchedule:
    """Concatenate two schedules; the second's times shift by the first's duration."""
    off = first.duration
    shifted_v = [
        VoltageChannel(c.site, tuple((t + off, v) for t, v in c.points))
        for c in second.voltage_channels
    ]
    shifted_m = [
        MicrowaveChannel(
            c.freq_GHz, c.amp_V_per_cm, c.phase,
            tuple((t + off, x) for t, x in c.envelope),
        )
        for c in second.microwave
    ]
    ann = dict(first.annotations)
    for k, (a, b) in second.annotations.items():
        name, n = k, 1
        while name in ann:
            name = f"{k}~{n}"
            n += 1
        ann[name] = (a + off, b + off)
    return PulseSchedule(
        duration=first.duration + second.duration,
        voltage_channels=first.voltage_channels + tuple(shifted_v),
        microwave=first.microwave + tuple(shifted_m),
        annotations=ann,
    )


def rabi_frequency(e_rf: float, z12: float) -> float:
    """Rabi angular frequency e E_RF |z12| / hbar, s^-1.

    e_rf in V/cm, z12 in cm.
    """
    if e_rf < 0:
        raise ValueError(f"drive amplitude must be nonnegative, got {e_rf}")
    return EV_ERG * e_rf * abs(z12) / HBAR


def pi_pulse(omega: float, kind: str = "pi") -> float:
    """Duration of a resonant pi or pi/2 pulse at Rabi frequency omega (s^-1)."""
    if omega <= 0:
        raise ValueError(f"Rabi frequency must be positive, got {omega}")
    if kind == "pi":
        return math.pi / omega
    if kind == "pi/2":
        return math.pi / (2.0 * omega)
    raise ValueError(f"kind must be 'pi' or 'pi/2', got {kind!r}")


def triangular_ramp(
    site: int, v_peak: float, rise: float, dwell: float, fall: float,
) -> PulseSchedule:
    """Ramp a site voltage 0 -> v_peak (rise), hold (dwell), -> 0 (fall).

    The hold interval is annotated "swap-dwell".  Zero rise or fall times
    encode instantaneous jumps.
    """
    if rise < 0 or dwell < 0 or fall < 0:
        raise ValueError("rise, dwell, and fall must be nonnegative")
    t1, t2, t3 = rise, rise + dwell, rise + dwell + fall
    points = ((0.0, 0.0), (t1, v_peak), (t2, v_peak), (t3, 0.0))
    return PulseSchedule(
        duration=t3,
        voltage_channels=(VoltageChannel(site, points),),
        annotations={"swap-dwell": (t1, t2)},
    )


def calibrate_swap(
    hamiltonian: QubitArrayHamiltonian,
    pair: tuple[int, int],
    alpha: float,
    refine: bool = False,
    rise: float = 0.0,
    fall: float = 0.0,
    v_peak: float | None = None,
) -> float:
    """Dwell time (s) bringing the pair to cos(a)|du> - i sin(a)|ud>.

    In the sudden-resonance approximation the dwell is 2 hbar a / B_nm.
    With `refine`, the dwell is root-found through the full dynamics of the
    ramped protocol (see `swap_schedule`), which matters when the ramp time
    is comparable to the dwell.
    """
    n, m = pair
    b_erg = hamiltonian.b_K[n, m] * K_B
    if b_erg <= 0:
        raise ValueError(f"pair {pair} is uncoupled (B = 0); nothing to calibrate")
    if alpha < 0:
        raise ValueError(f"alpha must be nonnegative, got {alpha}")
    dwell = 2.0 * HBAR * alpha / b_erg
    if not refine or alpha == 0.0:
        return dwell
    return _refine_dwell(hamiltonian, pair, alpha, dwell, rise, fall, v_peak)


def swap_schedule(
    hamiltonian: QubitArrayHamiltonian,
    pair: tuple[int, int],
    dwell: float,
    rise: float = 0.0,
    fall: float = 0.0,
    v_peak: float | None = None,
) -> PulseSchedule:
    """Voltage protocol realizing the exchange gate on `pair`.

    Ramps the first electrode of the pair by v_peak (volts) so its
    transition crosses the partner's, holds for `dwell`, and ramps back.
    If v_peak is omitted it is solved from the device's Stark map; a
    statically resonant pair needs no ramp (v_peak = 0).
    """
    n, m = pair
    if v_peak is None:
        v_peak = resonance_voltage(hamiltonian, n, m)
    return triangular_ramp(n, v_peak, rise, dwell, fall)


def resonance_voltage(
    hamiltonian: QubitArrayHamiltonian, n: int, m: int,
) -> float:
    """Voltage increment on site n's electrode that matches site m's transition."""
    from scipy.optimize import brentq

    eps_target = hamiltonian.eps_K[m]
    if hamiltonian.eps_K[n] == eps_target:
        return 0.0
    if hamiltonian.stark_map is None or hamiltonian.geometry is None:
        raise ValueError(
            "hamiltonian carries no device Stark map; supply v_peak explicitly"
        )
    geom = hamiltonian.geometry
    base_field = float(
        geom.e_perp + geom.c_geom * hamiltonian.voltages[n] / geom.pitch
    )
    lever = geom.c_geom / geom.pitch  # (V/cm) per volt

    def gap(dv):
        return hamiltonian.stark_map.exact(base_field + lever * dv) - eps_target

    # bracket around zero increment; the transition is monotone in field
    dv = 1e-6
    while gap(-dv) * gap(dv) > 0:
        dv *= 2.0
        if dv > 1.0:
            raise ValueError("no resonance within +-1 V of electrode swing")
    return brentq(gap, -dv, dv, xtol=1e-15)


def _refine_dwell(hamiltonian, pair, alpha, dwell0, rise, fall, v_peak):
    from scipy.optimize import minimize_scalar

    from . import dynamics

    n, m = pair
    n_q = hamiltonian.n_qubits
    target = math.sin(alpha) ** 2

    def mismatch(dwell):
        sched = swap_schedule(hamiltonian, pair, dwell, rise, fall, v_peak)
        bits = ["d"] * n_q
        bits[n] = "u"
        initial = dynamics.RegisterState.state_vector("".join(bits))
        spec = dynamics.EvolutionSpec(sample_times=np.array([sched.duration]))
        res = dynamics.evolve(hamiltonian, sched, initial, spec)
        bits_t = ["d"] * n_q
        bits_t[m] = "u"
        p = res.population("".join(bits_t))[-1]
        return (p - target) ** 2

    hi = 1.5 * dwell0 + 2.0 * (rise + fall)
    out = minimize_scalar(
        mismatch, bounds=(0.25 * dwell0, hi), method="bounded",
        options={"xatol": dwell0 * 1e-9},
    )
    if not out.success:
        raise RuntimeError(f"dwell refinement failed: {out.message}")
    return float(out.x)
