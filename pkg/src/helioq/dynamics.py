"""Time evolution of the qubit register under drive, coupling, and loss.

The register Hamiltonian (angular-frequency units, basis index bit n = 1
when qubit n is excited) is

    H/hbar = sum_n [ w_n(t) sz_n/2 + f(t) sx_n ]
           + sum_{n<m} [ a_nm sz_n sz_m / 4 + b_nm (s+_n s-_m + s-_n s+_m)/2 ]

with w_n the (schedule-dependent) transition frequency, f(t) the microwave
drive Omega(t) cos(w_mw t + phi), and a/b the dipole couplings.  In the
rotating frame at the carrier ("rwa"), w_n becomes the detuning and the
drive becomes (Omega/2)(cos(phi) sx + sin(phi) sy), so a resonant pulse of
area Omega T = pi inverts the qubit.

Optional loss channels:
- per-qubit relaxation at rate 1/T1 (lowering operator) and pure dephasing
  at rate 1/T2_eff (sz operator, normalized so coherences decay as
  exp(-t/T2_eff)), assembled from a DecoherenceBudget in Lindblad form;
- the readout tunneling term -Theta(t - t_f)/(2 t_up) sum_n {P_up_n, rho},
  an anti-commutator alone, which drains trace as excited population
  escapes the surface.

Integration is segmented at every schedule breakpoint, sample time, and
t_f, so discontinuities are never stepped over.  Segments on which all
coefficients are constant propagate by exact eigendecomposition (or
Liouvillian) exponentials, unitary/trace-exact to machine rounding;
time-varying segments use the adaptive embedded DOP853 stepper with the
step size capped at a tenth of the segment.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from .decoherence import DecoherenceBudget
from .pulses import PulseSchedule
from .qubits import QubitArrayHamiltonian
from .units import K_TO_RAD_PER_S

__all__ = [
    "EvolutionResult",
    "EvolutionSpec",
    "RegisterState",
    "TunnelingSpec",
    "evolve",
]

_STATE_VECTOR_MAX = 16
_DENSITY_MATRIX_MAX = 8
# largest Hilbert dimension for dense eigendecomposition of constant segments
_EXACT_DIM_MAX = 1024
# largest density-matrix dimension for Liouvillian exponentials
_EXACT_LIOUVILLE_DIM_MAX = 64


def basis_index(bits: str) -> int:
    """Index of the product state given as one character per qubit.

    Characters: 'd'/'0' ground, 'u'/'1' excited; leftmost is qubit 0.
    """
    idx = 0
    for n, ch in enumerate(bits):
        if ch in ("u", "1"):
            idx |= 1 << n
        elif ch not in ("d", "0"):
            raise ValueError(f"state characters must be d/u/0/1, got {ch!r}")
    return idx


def basis_labels(n_qubits: int) -> list[str]:
    return [
        "".join("u" if (i >> n) & 1 else "d" for n in range(n_qubits))
        for i in range(2**n_qubits)
    ]


@dataclass(frozen=True)
class RegisterState:
    """State of the register, as amplitudes or a density matrix."""

    mode: str                 # "state-vector" | "density-matrix"
    n_qubits: int
    data: np.ndarray

    def __post_init__(self):
        dim = 2**self.n_qubits
        data = np.asarray(self.data, dtype=complex)
        if self.mode == "state-vector":
            if data.shape != (dim,):
                raise ValueError(f"expected shape ({dim},), got {data.shape}")
        elif self.mode == "density-matrix":
            if data.shape != (dim, dim):
                raise ValueError(f"expected shape ({dim},{dim}), got {data.shape}")
        else:
            raise ValueError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "data", data)

    @classmethod
    def state_vector(cls, bits: str) -> "RegisterState":
        n = len(bits)
        vec = np.zeros(2**n, dtype=complex)
        vec[basis_index(bits)] = 1.0
        return cls("state-vector", n, vec)

    @classmethod
    def density_matrix(cls, bits: str) -> "RegisterState":
        n = len(bits)
        dim = 2**n
        rho = np.zeros((dim, dim), dtype=complex)
        i = basis_index(bits)
        rho[i, i] = 1.0
        return cls("density-matrix", n, rho)

    @property
    def trace(self) -> float:
        if self.mode == "state-vector":
            return float(np.vdot(self.data, self.data).real)
        return float(np.trace(self.data).real)

    def populations(self) -> np.ndarray:
        if self.mode == "state-vector":
            return np.abs(self.data) ** 2
        return np.diag(self.data).real.copy()


@dataclass(frozen=True)
class TunnelingSpec:
    """Readout tunneling onset t_f and excited-state escape time t_up (s)."""

    t_f: float
    t_up: float

    def __post_init__(self):
        if self.t_f < 0:
            raise ValueError(f"t_f must be nonnegative, got {self.t_f}")
        if self.t_up <= 0:
            raise ValueError(f"t_up must be positive, got {self.t_up}")


@dataclass(frozen=True)
class EvolutionSpec:
    """Frame, tolerance, sample times, and optional loss channels."""

    sample_times: np.ndarray
    frame: str = "rwa"
    rtol: float = 1e-8
    budget: DecoherenceBudget | None = None
    tunneling: TunnelingSpec | None = None

    def __post_init__(self):
        times = np.atleast_1d(np.asarray(self.sample_times, dtype=float))
        if times.size == 0:
            raise ValueError("at least one sample time is required")
        if np.any(np.diff(times) < 0) or times[0] < 0:
            raise ValueError("sample times must be sorted and nonnegative")
        if self.frame not in ("rwa", "lab"):
            raise ValueError(f"frame must be 'rwa' or 'lab', got {self.frame!r}")
        if self.rtol <= 0:
            raise ValueError(f"rtol must be positive, got {self.rtol}")
        object.__setattr__(self, "sample_times", times)


@dataclass(frozen=True)
class EvolutionResult:
    """Trajectory snapshots with norm/trace record and derived populations."""

    mode: str
    labels: list[str]
    times: np.ndarray
    states: np.ndarray          # (nt, dim) or (nt, dim, dim)
    trace: np.ndarray           # <psi|psi> or tr(rho) at each sample
    populations: np.ndarray     # (nt, dim)
    frame: str

    def population(self, bits: str) -> np.ndarray:
        if len(bits) != len(self.labels[0]):
            raise ValueError(
                f"state label {bits!r} has {len(bits)} characters for a "
                f"{len(self.labels[0])}-qubit register"
            )
        return self.populations[:, basis_index(bits)]

    @property
    def norm(self) -> np.ndarray:
        """State-vector norm (sqrt of the recorded squared norm)."""
        return np.sqrt(self.trace)

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def to_csv(self, path, metadata: str = "") -> None:
        with open(path, "w") as fh:
            if metadata:
                fh.write(f"# {metadata}\n")
            cols = ["t"] + [f"pop_{lab}" for lab in self.labels] + ["trace"]
            fh.write(",".join(cols) + "\n")
            for i, t in enumerate(self.times):
                row = [t, *self.populations[i], self.trace[i]]
                fh.write(",".join(format(x, ".17g") for x in row) + "\n")

    def to_json_dict(self) -> dict:
        states = [
            [[z.real, z.imag] for z in np.asarray(s).reshape(-1)]
            for s in self.states
        ]
        return {
            "mode": self.mode,
            "frame": self.frame,
            "labels": self.labels,
            "times": self.times.tolist(),
            "states": states,
            "trace": self.trace.tolist(),
        }


# --- operator assembly -----------------------------------------------------


class _System:
    """Precomputed operators and coefficient callables for one evolve call."""

    def __init__(self, ham: QubitArrayHamiltonian, schedule: PulseSchedule, spec: EvolutionSpec):
        self.n = ham.n_qubits
        self.dim = 2**self.n
        idx = np.arange(self.dim)
        # +1 where qubit n is excited, -1 otherwise
        self.zpat = np.array([2.0 * ((idx >> n) & 1) - 1.0 for n in range(self.n)])
        self.flip = [idx ^ (1 << n) for n in range(self.n)]

        # static couplings
        a_rad = ham.a_K * K_TO_RAD_PER_S
        b_rad = ham.b_K * K_TO_RAD_PER_S
        self.diag_a = np.zeros(self.dim)
        self.pairs = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if a_rad[i, j] != 0.0:
                    self.diag_a += 0.25 * a_rad[i, j] * self.zpat[i] * self.zpat[j]
                if b_rad[i, j] != 0.0:
                    i_up = ((idx >> i) & 1) == 1
                    j_down = ((idx >> j) & 1) == 0
                    src = np.where(i_up & j_down)[0]
                    dst = src - (1 << i) + (1 << j)
                    self.pairs.append((src, dst, 0.5 * b_rad[i, j]))

        # transition frequencies vs time (rad/s); channels that never leave
        # zero are inert and do not require a Stark map
        self.eps0_rad = ham.eps_K * K_TO_RAD_PER_S
        self.volt_sites = sorted({
            c.site for c in schedule.voltage_channels
            if any(v != 0.0 for _, v in c.points)
        })
        if self.volt_sites:
            if ham.stark_map is None or ham.geometry is None:
                raise ValueError(
                    "schedule retunes electrodes but the hamiltonian carries no "
                    "device Stark map; build it from a DeviceGeometry"
                )
            geom = ham.geometry
            self.lever = geom.c_geom / geom.pitch
            self.base_fields = np.asarray(
                geom.e_perp + geom.c_geom * ham.voltages / geom.pitch, dtype=float
            )
            self.stark = ham.stark_map
        self.schedule = schedule
        self.spec = spec
        self.drive_coeff = ham.drive_coeff

        # microwave bookkeeping
        self.carrier_rad = 0.0
        if schedule.microwave:
            freqs = {c.freq_GHz for c in schedule.microwave}
            if spec.frame == "rwa" and len(freqs) > 1:
                raise ValueError(
                    "rwa frame requires a single carrier; schedule has "
                    f"{sorted(freqs)} GHz"
                )
            if spec.frame == "rwa":
                self.carrier_rad = 2.0 * math.pi * 1e9 * next(iter(freqs))

    # -- coefficients --------------------------------------------------------

    def eps_rad(self, t) -> np.ndarray:
        """Per-qubit sz coefficient (rad/s): absolute in lab, detuning in rwa."""
        eps = np.array(self.eps0_rad, dtype=float)
        for site in self.volt_sites:
            dv = self.schedule.voltage_at(site, t)
            if dv != 0.0:
                f = self.base_fields[site] + self.lever * dv
                eps[site] = float(self.stark(f)) * K_TO_RAD_PER_S
        if self.spec.frame == "rwa":
            eps -= self.carrier_rad
        return eps

    def drive_xy(self, t) -> tuple[float, float]:
        """(sx, sy) drive coefficients at time t (rad/s)."""
        fx = fy = 0.0
        for ch in self.schedule.microwave:
            omega = self.drive_coeff * ch.amp_V_per_cm * ch.envelope_at(t)
            if omega == 0.0:
                continue
            if self.spec.frame == "rwa":
                fx += 0.5 * omega * math.cos(ch.phase)
                fy += 0.5 * omega * math.sin(ch.phase)
            else:
                w = 2.0 * math.pi * 1e9 * ch.freq_GHz
                fx += omega * math.cos(w * t + ch.phase)
        return fx, fy

    def constant_on(self, ta: float, tb: float) -> bool:
        """True when every coefficient is constant on (ta, tb).

        Channels are linear between breakpoints, so equal values at two
        interior points imply zero slope; a lab-frame drive is constant
        only when its amplitude vanishes there.
        """
        p, q = ta + 0.25 * (tb - ta), ta + 0.75 * (tb - ta)
        for site in self.volt_sites:
            if self.schedule.voltage_at(site, p) != self.schedule.voltage_at(site, q):
                return False
        for ch in self.schedule.microwave:
            ep, eq = ch.envelope_at(p), ch.envelope_at(q)
            if ep != eq:
                return False
            if self.spec.frame == "lab" and ch.amp_V_per_cm * ep != 0.0:
                return False
        return True

    # -- operator application -------------------------------------------------

    def diag(self, t) -> np.ndarray:
        d = np.array(self.diag_a)
        eps = self.eps_rad(t)
        for n in range(self.n):
            d += 0.5 * eps[n] * self.zpat[n]
        return d

    def apply_h(self, t, psi) -> np.ndarray:
        out = self.diag(t) * psi
        for src, dst, b2 in self.pairs:
            out[dst] += b2 * psi[src]
            out[src] += b2 * psi[dst]
        fx, fy = self.drive_xy(t)
        if fx != 0.0 or fy != 0.0:
            for n in range(self.n):
                flipped = psi[self.flip[n]]
                if fx != 0.0:
                    out += fx * flipped
                if fy != 0.0:
                    out += 1j * fy * (-self.zpat[n]) * flipped
        return out

    def dense_h(self, t) -> np.ndarray:
        h = np.zeros((self.dim, self.dim), dtype=complex)
        np.fill_diagonal(h, self.diag(t))
        for src, dst, b2 in self.pairs:
            h[dst, src] += b2
            h[src, dst] += b2
        fx, fy = self.drive_xy(t)
        if fx != 0.0 or fy != 0.0:
            idx = np.arange(self.dim)
            for n in range(self.n):
                flipped = self.flip[n]
                h[flipped, idx] += fx + 1j * fy * (-self.zpat[n][flipped])
        return h


def _collapse_ops(n: int, budget: DecoherenceBudget) -> list[np.ndarray]:
    """Per-qubit Lindblad operators from the budget's scalar rates.

    Relaxation: sqrt(1/T1) s-.  Pure dephasing: sqrt(2/T2_eff) sz/2, which
    makes coherences decay as exp(-t/T2_eff) from this channel alone.
    """
    dim = 2**n
    idx = np.arange(dim)
    ops = []
    g1 = 1.0 / budget.t1_s
    gphi = 1.0 / budget.t2_eff_s
    for q in range(n):
        up = ((idx >> q) & 1) == 1
        if g1 > 0:
            lower = np.zeros((dim, dim), dtype=complex)
            lower[idx[up] ^ (1 << q), idx[up]] = 1.0
            ops.append(math.sqrt(g1) * lower)
        if gphi > 0:
            zpat = 2.0 * ((idx >> q) & 1) - 1.0
            ops.append(math.sqrt(2.0 * gphi) * np.diag(0.5 * zpat).astype(complex))
    return ops


def _tunneling_diag(n: int, t_up: float) -> np.ndarray:
    """Diagonal G with {G, rho} draining trace: G = sum_n P_up_n / (2 t_up)."""
    idx = np.arange(2**n)
    occ = np.zeros(2**n)
    for q in range(n):
        occ += (idx >> q) & 1
    return occ / (2.0 * t_up)


def evolve(
    hamiltonian: QubitArrayHamiltonian,
    schedule: PulseSchedule,
    initial: RegisterState,
    spec: EvolutionSpec,
) -> EvolutionResult:
    """Integrate the register from t = 0 through the schedule.

    Sample times must be covered by the schedule duration.  Tunneling
    requires density-matrix mode.  Raises if the integrator cannot reach
    its error target.
    """
    n = hamiltonian.n_qubits
    if initial.n_qubits != n:
        raise ValueError(
            f"initial state has {initial.n_qubits} qubits, hamiltonian has {n}"
        )
    if initial.mode == "state-vector" and n > _STATE_VECTOR_MAX:
        raise ValueError(f"state-vector mode supports at most {_STATE_VECTOR_MAX} qubits")
    if initial.mode == "density-matrix" and n > _DENSITY_MATRIX_MAX:
        raise ValueError(f"density-matrix mode supports at most {_DENSITY_MATRIX_MAX} qubits")
    if spec.tunneling is not None and initial.mode != "density-matrix":
        raise ValueError("tunneling evolution requires density-matrix mode")
    t_end = float(spec.sample_times[-1])
    if t_end > schedule.duration * (1 + 1e-12) + 1e-300:
        raise ValueError(
            f"schedule duration {schedule.duration} does not cover the last "
            f"sample time {t_end}"
        )

    sys = _System(hamiltonian, schedule, spec)
    dm = initial.mode == "density-matrix"
    collapse = _collapse_ops(n, spec.budget) if spec.budget is not None else []
    tun_diag = _tunneling_diag(n, spec.tunneling.t_up) if spec.tunneling else None

    # segment boundaries: schedule breakpoints, sample times, tunneling onset
    cuts = set(np.round(schedule.breakpoints(), 30)) | {0.0, t_end}
    cuts |= set(np.round(spec.sample_times, 30))
    if spec.tunneling is not None and spec.tunneling.t_f < t_end:
        cuts.add(spec.tunneling.t_f)
    bounds = np.array(sorted(t for t in cuts if 0.0 <= t <= t_end))

    sample_ptr = 0
    samples = spec.sample_times
    out_states = []
    out_times = []

    state = np.array(initial.data, dtype=complex)

    def record(t):
        out_times.append(t)
        out_states.append(state.copy())

    if samples[sample_ptr] == 0.0:
        while sample_ptr < samples.size and samples[sample_ptr] == 0.0:
            record(0.0)
            sample_ptr += 1

    ir = max(spec.rtol * 1e-3, 3e-14)

    for ta, tb in zip(bounds[:-1], bounds[1:]):
        if tb <= ta:
            continue
        tun = tun_diag if (
            spec.tunneling is not None and ta >= spec.tunneling.t_f - 1e-30
        ) else None

        advanced = None
        if sys.constant_on(ta, tb) and sys.dim <= _EXACT_DIM_MAX:
            h = sys.dense_h(0.5 * (ta + tb))
            advanced = _propagate_constant(state, h, tb - ta, dm, collapse, tun)
        if advanced is None:
            advanced = _propagate_ivp(sys, state, ta, tb, dm, collapse, tun, ir)
        state = advanced

        while sample_ptr < samples.size and abs(samples[sample_ptr] - tb) <= 1e-30 + 1e-12 * tb:
            record(samples[sample_ptr])
            sample_ptr += 1

    if sample_ptr != samples.size:
        raise RuntimeError("internal error: not every sample time was visited")

    states = np.array(out_states)
    if dm:
        trace = np.array([float(np.trace(s).real) for s in out_states])
        pops = np.array([np.diag(s).real for s in out_states])
    else:
        trace = np.array([float(np.vdot(s, s).real) for s in out_states])
        pops = np.abs(states) ** 2
    return EvolutionResult(
        mode=initial.mode,
        labels=basis_labels(n),
        times=np.array(out_times),
        states=states,
        trace=trace,
        populations=pops,
        frame=spec.frame,
    )


def _propagate_constant(state, h, dt, dm, collapse, tun_diag):
    """Exact propagation over a constant segment; None if it must be integrated."""
    dim = h.shape[0]
    if not dm:
        w, v = np.linalg.eigh(h)
        phases = np.exp(-1j * w * dt)
        return v @ (phases * (v.conj().T @ state))
    if not collapse and tun_diag is None:
        w, v = np.linalg.eigh(h)
        phases = np.exp(-1j * w * dt)
        u = v @ np.diag(phases) @ v.conj().T
        return u @ state @ u.conj().T
    if dim <= _EXACT_LIOUVILLE_DIM_MAX:
        eye = np.eye(dim)
        liou = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
        for op in collapse:
            ld = op.conj().T @ op
            liou += np.kron(op, op.conj())
            liou -= 0.5 * (np.kron(ld, eye) + np.kron(eye, ld.T))
        if tun_diag is not None:
            g = np.diag(tun_diag).astype(complex)
            liou -= np.kron(g, eye) + np.kron(eye, g)
        prop = expm(liou * dt)
        return (prop @ state.reshape(-1)).reshape(dim, dim)
    # dissipative and too large for a dense Liouvillian: integrate instead
    return None


def _propagate_ivp(sys, state, ta, tb, dm, collapse, tun_diag, rtol):
    dim = sys.dim
    if dm:
        csum = None
        if collapse:
            csum = sum(op.conj().T @ op for op in collapse)

        def rhs(t, y):
            rho = y.reshape(dim, dim)
            h = sys.dense_h(t)
            drho = -1j * (h @ rho - rho @ h)
            if collapse:
                acc = sum(op @ rho @ op.conj().T for op in collapse)
                drho += acc - 0.5 * (csum @ rho + rho @ csum)
            if tun_diag is not None:
                drho -= tun_diag[:, None] * rho + rho * tun_diag[None, :]
            return drho.reshape(-1)

        y0 = state.reshape(-1)
    else:

        def rhs(t, y):
            return -1j * sys.apply_h(t, y)

        y0 = state

    sol = solve_ivp(
        rhs, (ta, tb), y0, method="DOP853",
        rtol=rtol, atol=rtol * 1e-2,
        max_step=(tb - ta) / 10.0,
        dense_output=False,
    )
    if not sol.success:
        raise RuntimeError(
            f"integrator failed on [{ta}, {tb}] at rtol={rtol}: {sol.message}"
        )
    y = sol.y[:, -1]
    return y.reshape(dim, dim) if dm else y
