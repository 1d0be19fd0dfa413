"""Single-qubit gates: resonant pi pulses and detuned Rabi flopping.

A microwave pulse resonant with the 1->2 transition rotates the qubit at
the Rabi frequency; a pi-pulse lasting pi/Omega inverts it.  Detuning the
carrier caps the transfer at Omega^2/(Omega^2 + Delta^2), the knob that
lets one qubit be addressed while its neighbors sit detuned.
"""
import math

import numpy as np

from helioq import dynamics, pulses, qubits, units

# a register with a realistic drive coefficient but a synthetic frequency,
# so the rotating-frame evolution is quick to follow
ham = qubits.QubitArrayHamiltonian.from_parameters(
    eps_K=[10.0 / units.K_TO_GHZ], drive_coeff=6.48e8,
)

omega = pulses.rabi_frequency(1.0, 0.5587 * 7.6387e-7)   # 1 V/cm drive
print(f"Rabi frequency at 1 V/cm: {omega:.3e} /s")
t_pi = pulses.pi_pulse(omega)
print(f"pi-pulse duration:        {t_pi*1e9:.3f} ns")
print()

amp = omega / ham.drive_coeff
sched = pulses.PulseSchedule(
    duration=t_pi,
    microwave=(pulses.MicrowaveChannel(freq_GHz=10.0, amp_V_per_cm=amp),),
)
times = np.linspace(0.0, t_pi, 9)
res = dynamics.evolve(
    ham, sched, dynamics.RegisterState.state_vector("d"),
    dynamics.EvolutionSpec(sample_times=times),
)
print("resonant pi pulse, excited population along the way:")
for t, p in zip(times, res.population("u")):
    bar = "#" * int(round(40 * p))
    print(f"  t = {t*1e9:6.3f} ns  P_up = {p:8.6f}  {bar}")
print()

print("detuned drive: peak transfer vs detuning")
for ratio in (0.0, 0.5, 1.0, 2.0, 5.0):
    delta = ratio * omega
    carrier = 10.0 - delta / (2 * math.pi * 1e9)
    gen = math.hypot(omega, delta)
    t_peak = math.pi / gen
    sched_d = pulses.PulseSchedule(
        duration=t_peak,
        microwave=(pulses.MicrowaveChannel(carrier, amp),),
    )
    res_d = dynamics.evolve(
        ham, sched_d, dynamics.RegisterState.state_vector("d"),
        dynamics.EvolutionSpec(sample_times=np.array([t_peak])),
    )
    expect = omega**2 / gen**2
    print(f"  Delta/Omega = {ratio:3.1f}   peak P_up = {res_d.population('u')[-1]:.6f}"
          f"   (two-level formula {expect:.6f})")
