"""Mapping from device geometry and electrode voltages to qubit parameters.

Each micro-electrode below the surface traps one electron whose lowest two
vertical states form the qubit.  The electrode voltage V_n shifts the local
pressing field by c_geom V_n / d (the parallel-plate estimate; c_geom is an
explicit knob, default 1), which Stark-tunes the 1->2 transition.  The
always-on dipole interaction between vertical dipoles at distance d_nm
produces

    A_nm = e^2 [<1|z|1> - <2|z|2>]^2 / d_nm^3      (static shift)
    B_nm = 2 e^2 |<1|z|2>|^2 / d_nm^3              (excitation exchange)

with matrix elements taken at each site's operating field.

Operator convention (pinned so the interaction prefactor cannot silently
change gate timing): s_z has eigenvalues +-hbar/2 with |up> the excited
state; s_+ |down> = hbar |up>.  The exchange term then couples |up,down>
and |down,up> with off-diagonal element B_nm / 2, so the resonant pair
oscillates in population at angular frequency B_nm / hbar and a full swap
takes pi hbar / B_nm.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hydrogenic import HydrogenicBasisSpec, HydrogenicSolution, solve
from .units import (
    E_SQ,
    E_SQ_K_CM,
    EPSILON_HE,
    EV_ERG,
    HBAR,
    K_B,
    K_TO_GHZ,
    M_E,
    image_strength,
)

__all__ = [
    "DeviceGeometry",
    "QubitArrayHamiltonian",
    "build",
    "confinement_scale",
    "couplings",
    "site_field",
]


@dataclass(frozen=True)
class DeviceGeometry:
    """Electrode layout and global operating conditions.

    `sites` are 2D lattice coordinates in units of the pitch; distinct
    sites must be at least one pitch apart.  `depth` is the electrode
    depth below the surface (defaults to the pitch, the natural
    aspect ratio for this electrode design).
    """

    pitch: float                     # cm
    sites: tuple[tuple[float, float], ...]
    depth: float | None = None       # cm
    e_perp: float = 0.0              # V/cm global pressing field
    b_field: float = 1.5             # T
    temperature: float = 0.01        # K
    c_geom: float = 1.0

    def __post_init__(self):
        if self.pitch <= 0:
            raise ValueError(f"pitch must be positive, got {self.pitch}")
        if self.depth is None:
            object.__setattr__(self, "depth", self.pitch)
        elif self.depth <= 0:
            raise ValueError(f"depth must be positive, got {self.depth}")
        sites = tuple((float(x), float(y)) for x, y in self.sites)
        if len(sites) == 0:
            raise ValueError("at least one site is required")
        if len(set(sites)) != len(sites):
            raise ValueError("site positions must be distinct")
        for i in range(len(sites)):
            for j in range(i + 1, len(sites)):
                if self.site_distance_unitless(sites, i, j) < 1.0 - 1e-12:
                    raise ValueError(
                        f"sites {i} and {j} are closer than one pitch"
                    )
        object.__setattr__(self, "sites", sites)

    @staticmethod
    def site_distance_unitless(sites, i: int, j: int) -> float:
        dx = sites[i][0] - sites[j][0]
        dy = sites[i][1] - sites[j][1]
        return math.hypot(dx, dy)

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    def distance_cm(self, i: int, j: int) -> float:
        return self.site_distance_unitless(self.sites, i, j) * self.pitch

    def positions_cm(self) -> np.ndarray:
        return np.asarray(self.sites, dtype=float) * self.pitch


def site_field(geometry: DeviceGeometry, voltage) -> np.ndarray | float:
    """Total pressing field E_perp + c_geom V / d at a site, V/cm.

    `voltage` in volts; scalar or per-site array.
    """
    v = np.asarray(voltage, dtype=float)
    out = geometry.e_perp + geometry.c_geom * v / geometry.pitch
    return float(out) if out.ndim == 0 else out


def confinement_scale(geometry: DeviceGeometry) -> float:
    """In-plane confinement level spacing hbar (e^2 / m_e d^3)^(1/2), kelvin."""
    omega = math.sqrt(E_SQ / (M_E * geometry.pitch**3))
    return HBAR * omega / K_B


def _pair_couplings(
    geometry: DeviceGeometry,
    dz: np.ndarray,
    z12: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    n = geometry.n_sites
    a = np.zeros((n, n))
    b = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d3 = geometry.distance_cm(i, j) ** 3
            a[i, j] = a[j, i] = E_SQ_K_CM * dz[i] * dz[j] / d3
            b[i, j] = b[j, i] = 2.0 * E_SQ_K_CM * abs(z12[i]) * abs(z12[j]) / d3
    return a, b


def couplings(
    geometry: DeviceGeometry,
    solution: HydrogenicSolution,
) -> tuple[np.ndarray, np.ndarray]:
    """Dipole coupling matrices (A_nm, B_nm) in kelvin at a common field.

    Uses the matrix elements of `solution` for every site; `build` computes
    per-site elements when voltages differ.
    """
    dz = np.full(geometry.n_sites, solution.z_elements[0, 0] - solution.z_elements[1, 1])
    z12 = np.full(geometry.n_sites, solution.z_elements[0, 1])
    return _pair_couplings(geometry, dz, z12)


@dataclass(frozen=True)
class QubitArrayHamiltonian:
    """Parameters of the driven, coupled qubit register.

    eps_K[n] is the 1->2 transition energy at site n's operating field;
    a_K / b_K are the dipole coupling matrices (kelvin, zero diagonal,
    symmetric, falling as d_nm^-3); drive_coeff converts a microwave field
    amplitude (V/cm) into a Rabi angular frequency e |<1|z|2>| E / hbar.
    `stark_map`, when present, maps a pressing field (V/cm) to the
    transition energy (K) so schedules can retune qubits mid-evolution.
    """

    eps_K: np.ndarray
    a_K: np.ndarray
    b_K: np.ndarray
    drive_coeff: float                 # (s^-1) per (V/cm)
    z11_cm: np.ndarray | None = None
    z22_cm: np.ndarray | None = None
    z12_cm: np.ndarray | None = None
    geometry: DeviceGeometry | None = None
    voltages: np.ndarray | None = None
    drive: dict | None = None          # optional microwave spec for schedules
    stark_map: object | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        eps = np.atleast_1d(np.asarray(self.eps_K, dtype=float))
        n = eps.size
        a = np.asarray(self.a_K, dtype=float).reshape(n, n)
        b = np.asarray(self.b_K, dtype=float).reshape(n, n)
        for name, m in (("a_K", a), ("b_K", b)):
            if not np.allclose(m, m.T, rtol=0, atol=1e-300 + 1e-12 * np.abs(m).max(initial=0)):
                raise ValueError(f"{name} must be symmetric")
            if np.any(np.diag(m) != 0):
                raise ValueError(f"{name} must have zero diagonal")
        object.__setattr__(self, "eps_K", eps)
        object.__setattr__(self, "a_K", a)
        object.__setattr__(self, "b_K", b)

    @property
    def n_qubits(self) -> int:
        return self.eps_K.size

    @property
    def eps_GHz(self) -> np.ndarray:
        return self.eps_K * K_TO_GHZ

    @classmethod
    def from_parameters(cls, eps_K, a_K=None, b_K=None, drive_coeff=0.0):
        """Synthetic register with pinned parameters (no device behind it)."""
        eps = np.atleast_1d(np.asarray(eps_K, dtype=float))
        n = eps.size
        a = np.zeros((n, n)) if a_K is None else a_K
        b = np.zeros((n, n)) if b_K is None else b_K
        return cls(eps_K=eps, a_K=a, b_K=b, drive_coeff=drive_coeff)

    def to_dict(self) -> dict:
        d = {
            "n_qubits": self.n_qubits,
            "eps_K": self.eps_K.tolist(),
            "eps_GHz": self.eps_GHz.tolist(),
            "a_K": self.a_K.tolist(),
            "b_K": self.b_K.tolist(),
            "drive_coeff_per_V_cm": self.drive_coeff,
        }
        if self.z11_cm is not None:
            d["z11_cm"] = self.z11_cm.tolist()
            d["z22_cm"] = self.z22_cm.tolist()
            d["z12_cm"] = self.z12_cm.tolist()
        if self.voltages is not None:
            d["voltages_V"] = self.voltages.tolist()
        return d


class _StarkMap:
    """Transition energy (K) versus pressing field, backed by the solver.

    Evaluations are cached; dense use over an interval goes through a
    cubic-spline fit refreshed whenever the requested range grows.
    """

    def __init__(self, basis: HydrogenicBasisSpec):
        self.basis = basis
        self._cache: dict[float, float] = {}
        self._spline = None
        self._span: tuple[float, float] | None = None

    def exact(self, e_field: float) -> float:
        key = float(e_field)
        if key not in self._cache:
            sol = solve(self.basis, key)
            self._cache[key] = sol.transition_K(2)
        return self._cache[key]

    def spline(self, lo: float, hi: float):
        from scipy.interpolate import CubicSpline

        if self._spline is None or lo < self._span[0] or hi > self._span[1]:
            pad = 0.05 * (hi - lo) + 1e-9
            lo_p, hi_p = lo - pad, hi + pad
            grid = np.linspace(lo_p, hi_p, 65)
            vals = [self.exact(g) for g in grid]
            self._spline = CubicSpline(grid, vals)
            self._span = (lo_p, hi_p)
        return self._spline

    def __call__(self, e_field):
        e = np.asarray(e_field, dtype=float)
        if e.ndim == 0:
            return self.exact(float(e))
        sp = self.spline(float(e.min()), float(e.max()))
        return sp(e)


def build(
    geometry: DeviceGeometry,
    voltages=0.0,
    drive: dict | None = None,
    basis: HydrogenicBasisSpec | None = None,
) -> QubitArrayHamiltonian:
    """Assemble the register parameters at the given static voltages.

    `voltages` (volts) is a scalar or one value per site.  Matrix elements
    are recomputed at each site's total pressing field, so both the qubit
    frequencies and the couplings inherit the field dependence.
    """
    if basis is None:
        basis = HydrogenicBasisSpec(lam=image_strength(EPSILON_HE))
    n = geometry.n_sites
    v = np.broadcast_to(np.asarray(voltages, dtype=float), (n,)).copy()
    fields = np.asarray(site_field(geometry, v), dtype=float).reshape(n)

    stark = _StarkMap(basis)
    eps = np.empty(n)
    z11 = np.empty(n)
    z22 = np.empty(n)
    z12 = np.empty(n)
    for i, f in enumerate(fields):
        sol = solve(basis, float(f))
        eps[i] = sol.transition_K(2)
        z11[i] = sol.z_elements[0, 0]
        z22[i] = sol.z_elements[1, 1]
        z12[i] = sol.z_elements[0, 1]
        stark._cache[float(f)] = eps[i]

    a, b = _pair_couplings(geometry, z11 - z22, z12)
    drive_coeff = EV_ERG * float(np.abs(z12).mean()) / HBAR
    return QubitArrayHamiltonian(
        eps_K=eps,
        a_K=a,
        b_K=b,
        drive_coeff=drive_coeff,
        z11_cm=z11,
        z22_cm=z22,
        z12_cm=z12,
        geometry=geometry,
        voltages=v,
        drive=drive,
        stark_map=stark,
    )
