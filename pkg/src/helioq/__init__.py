"""Qubits made of electrons floating on liquid helium: device physics,
decoherence budgets, pulse-level dynamics, and tunneling readout.

Modules
-------
units        physical constants and the kelvin/centimeter unit system
hydrogenic   vertical-motion spectrum and Stark tuning of the trapped electron
medium       ripplons, thermal surface statistics, Wigner-crystal formulas
decoherence  relaxation/dephasing channels assembled into a device budget
qubits       geometry + voltages -> register Hamiltonian parameters
pulses       schedules, Rabi/pi-pulse arithmetic, swap calibration
dynamics     driven register evolution with optional loss channels
readout      reverse-field tunneling rates, plan search, shot sampling
cli          config-driven batch front door (``helioq <subcommand>``)
"""

__version__ = "0.1.0"

from . import decoherence, dynamics, hydrogenic, medium, pulses, qubits, readout, units

__all__ = [
    "__version__",
    "decoherence",
    "dynamics",
    "hydrogenic",
    "medium",
    "pulses",
    "qubits",
    "readout",
    "units",
]
