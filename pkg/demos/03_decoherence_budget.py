"""Decoherence budget of a confined qubit at the design operating point.

Confinement is the whole game: a free surface electron relaxes between
bands in ~0.16 us, but a magnetically confined one is protected from
one-ripplon decay and dephases only through a two-ripplon process, giving
a tenth of a millisecond.  Electrode voltage noise contributes a
comparable channel through the Stark lever arm.
"""
from helioq import decoherence, units

lam = units.image_strength(units.EPSILON_HE)
bud = decoherence.budget(
    temperature=0.01,      # K
    b_field=1.5,           # T
    pitch=0.5e-4,          # cm
    lam=lam,
    noise_density=1e-10,   # V/sqrt(Hz) on the electrode line
    tuning=1.0,            # GHz per mV of electrode bias
    mobility_field=80.0,   # V/cm effective ripplon field (diagnostic)
)

print(f"operating point: {bud.temperature*1e3:.0f} mK, {bud.b_field} T, "
      f"{bud.pitch*1e4:.2f} um pitch")
print()
print(f"interband lifetime (free)    T1      = {bud.t1_s:.3e} s")
print(f"confined dephasing           T2      = {bud.t2_s:.3e} s")
print(f"voltage-noise dephasing      T_phi,V = {bud.t_phi_v_s:.3e} s"
      f"   (S_nu = {bud.s_nu:.1f} Hz/rtHz)")
print(f"combined dephasing           T2_eff  = {bud.t2_eff_s:.3e} s")
print()
print(f"ripplon sideband weight      G       = {bud.sideband_g:.3e}  (< 0.01)")
print(f"in-plane correction weight           = {bud.inplane_ratio:.3e}")
print(f"mobility scattering at 80 V/cm       = {bud.tau_inv_s:.3e} /s (sheet diagnostic)")
print()

# gates run a thousand times faster than the decoherence clock
from helioq.hydrogenic import rydberg_scales

_, bohr = rydberg_scales(lam)
omega = units.EV_ERG * 1.0 * bohr / units.HBAR  # Rabi scale at 1 V/cm drive
print(f"drive scale Omega ~ {omega:.2e} /s  ->  Omega * T2 = {omega * bud.t2_s:.2e}")
