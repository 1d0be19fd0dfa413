"""Config-driven batch front door.

Subcommands wire the library modules into reproducible experiments:

    spectrum     Stark-shifted level sweep -> CSV
    medium       ripplon/collective dispersion + melting boundary -> CSV
    decoherence  full budget with every intermediate quantity -> JSON
    build        device JSON -> register parameter matrices JSON
    calibrate    swap dwell time for a pair and rotation angle -> JSON
    evolve       schedule-driven register evolution -> CSV + JSON
    readout      tunneling plan + shot sampling -> CSV image + JSON log
    demo-swap    build -> calibrate -> evolve -> report, end to end

Configs are JSON validated against the shipped schema (unknown keys are
rejected); ``--set dotted.path=value`` overrides are applied first and
echoed into the outputs.  Output files are named from a hash of the
effective config, embed that hash and the package version, contain no
timestamps, and serialize every float with 17 significant digits, so a
rerun with the same config and seed is byte-identical.

Exit codes: 0 success, 2 config error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__, decoherence, dynamics, hydrogenic, medium, pulses, qubits, readout
from .units import EPSILON_HE, HBAR, K_B, image_strength

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class ConfigError(ValueError):
    pass


# --- canonical serialization -------------------------------------------------


def _format_float(x: float) -> str:
    if math.isnan(x):
        raise ValueError("NaN is not serializable")
    if math.isinf(x):
        return "null"  # unbounded quantity (e.g. infinite retention time)
    return format(x, ".17g")


def dump_json(obj, indent: int = 0) -> str:
    """Deterministic JSON with 17-significant-digit floats."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{pad}  {json.dumps(str(k))}: {dump_json(v, indent + 1)}'
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            return "[]"
        flat = all(isinstance(x, (int, float, bool)) or x is None for x in seq)
        if flat and len(seq) <= 16:
            return "[" + ", ".join(dump_json(x) for x in seq) + "]"
        items = [f"{pad}  {dump_json(v, indent + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return dump_json(obj.tolist(), indent)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def config_hash(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


# --- config loading ----------------------------------------------------------


def load_schema() -> dict:
    with resources.files("helioq.schemas").joinpath("experiment.schema.json").open() as fh:
        return json.load(fh)


def apply_override(config: dict, assignment: str) -> None:
    if "=" not in assignment:
        raise ConfigError(f"override must look like path.to.key=value: {assignment!r}")
    path, raw = assignment.split("=", 1)
    keys = path.split(".")
    node = config
    for k in keys[:-1]:
        node = node.setdefault(k, {})
        if not isinstance(node, dict):
            raise ConfigError(f"override path {path!r} crosses a non-object value")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    node[keys[-1]] = value


def load_config(path: str, overrides: list[str]) -> tuple[dict, list[str]]:
    try:
        with open(path) as fh:
            config = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    for assignment in overrides:
        apply_override(config, assignment)
    import jsonschema

    try:
        jsonschema.validate(config, load_schema())
    except jsonschema.ValidationError as exc:
        path_str = "/".join(str(p) for p in exc.absolute_path) or "(root)"
        raise ConfigError(f"config invalid at {path_str}: {exc.message}") from exc
    return config, list(overrides)


def require_block(config: dict, name: str) -> dict:
    if name not in config:
        raise ConfigError(f"this subcommand requires a {name!r} block in the config")
    return config[name]


# --- shared builders ---------------------------------------------------------


def device_geometry(block: dict) -> qubits.DeviceGeometry:
    pitch = block["d_um"] * 1e-4
    return qubits.DeviceGeometry(
        pitch=pitch,
        depth=block.get("h_um", block["d_um"]) * 1e-4,
        sites=tuple((x, y) for x, y in block["sites"]),
        e_perp=block.get("E_perp", 0.0),
        b_field=block.get("B_T", 1.5),
        temperature=block.get("T_K", 0.01),
        c_geom=block.get("c_geom", 1.0),
    )


def basis_spec(block: dict) -> hydrogenic.HydrogenicBasisSpec:
    lam = image_strength(block.get("epsilon", EPSILON_HE))
    if "basis_size" in block:
        return hydrogenic.HydrogenicBasisSpec(lam=lam, size=block["basis_size"])
    return hydrogenic.HydrogenicBasisSpec(lam=lam)


def device_voltages(block: dict, n_sites: int) -> np.ndarray:
    mv = block.get("voltages_mV", [0.0] * n_sites)
    if len(mv) != n_sites:
        raise ConfigError(
            f"voltages_mV has {len(mv)} entries for {n_sites} sites"
        )
    return np.asarray(mv, dtype=float) * 1e-3


class _Writer:
    def __init__(self, config: dict, overrides: list[str], subcommand: str):
        self.hash = config_hash(config)
        self.meta = {
            "config_hash": self.hash,
            "artifact_version": __version__,
            "overrides": overrides,
        }
        self.outdir = Path(config["output_dir"])
        self.outdir.mkdir(parents=True, exist_ok=True)
        self.sub = subcommand

    def path(self, suffix: str) -> Path:
        return self.outdir / f"{self.sub}_{self.hash}.{suffix}"

    def csv(self, header: list[str], rows, suffix: str = "csv") -> Path:
        p = self.path(suffix)
        meta = (
            f"config_hash={self.hash} artifact_version={__version__}"
            + (f" overrides={';'.join(self.meta['overrides'])}" if self.meta["overrides"] else "")
        )
        with open(p, "w") as fh:
            fh.write(f"# {meta}\n")
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(
                    ",".join(
                        _format_float(float(x)) if isinstance(x, (float, np.floating))
                        else str(x)
                        for x in row
                    )
                    + "\n"
                )
        return p

    def json(self, payload: dict, suffix: str = "json") -> Path:
        p = self.path(suffix)
        doc = dict(self.meta)
        doc.update(payload)
        with open(p, "w") as fh:
            fh.write(dump_json(doc) + "\n")
        return p


# --- subcommands -------------------------------------------------------------


def run_spectrum(config: dict, overrides: list[str]) -> int:
    dev = require_block(config, "device")
    sw = require_block(config, "spectrum")
    basis = basis_spec(dev)
    max_state = min(sw.get("max_state", 5), basis.size)
    fields = np.linspace(sw["e_perp_min"], sw["e_perp_max"], sw["points"])
    rows = []
    for f in fields:
        sol = hydrogenic.solve(basis, float(f))
        for m in range(1, max_state + 1):
            rows.append(
                (float(f), m, float(sol.energies[m - 1]), sol.transition_GHz(m))
            )
    w = _Writer(config, overrides, "spectrum")
    p = w.csv(["E_perp_V_per_cm", "m", "E_m_K", "nu_1m_GHz"], rows)
    print(f"wrote {p}")
    return EXIT_OK


def run_medium(config: dict, overrides: list[str]) -> int:
    blk = require_block(config, "medium")
    surface = medium.HeliumSurface(temperature=blk.get("temperature_K", 0.01))
    ks = np.geomspace(blk["k_min"], blk["k_max"], blk["points"])
    rows = [
        ("ripplon", float(k), medium.ripplon_omega(surface, float(k)),
         medium.ripplon_energy_K(surface, float(k)))
        for k in ks
    ]
    if "density_cm2" in blk:
        sheet = medium.ElectronSheet(blk["density_cm2"], blk.get("b_field_T", 0.0))
        k_cap = 0.2 * math.sqrt(sheet.density)
        ks_sheet = ks[ks <= k_cap]
        branches = ["longitudinal"]
        if blk.get("shear_speed") is not None:
            branches.append("shear-acoustic")
        if sheet.b_field > 0:
            branches += ["magnetoplasma-low", "magnetoplasma-high"]
        for branch in branches:
            for k in ks_sheet:
                om = medium.collective_mode(
                    sheet, branch, float(k), shear_speed=blk.get("shear_speed")
                )
                rows.append((branch, float(k), om, om * HBAR / K_B))
    w = _Writer(config, overrides, "medium")
    p = w.csv(["branch", "k_per_cm", "omega_per_s", "omega_K"], rows)
    paths = [p]
    if "boundary" in blk:
        b = blk["boundary"]
        ns = np.geomspace(b["n_min"], b["n_max"], b["points"])
        gamma = b.get("gamma_melt", medium.GAMMA_MELT_DEFAULT)
        boundary_rows = [
            (float(n), medium.melting_temperature(float(n), gamma)) for n in ns
        ]
        paths.append(
            w.csv(["n_per_cm2", "T_melt_K"], boundary_rows, suffix="boundary.csv")
        )
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK


def run_decoherence(config: dict, overrides: list[str]) -> int:
    dev = require_block(config, "device")
    noise = config.get("noise", {})
    geom = device_geometry(dev)
    basis = basis_spec(dev)
    bud = decoherence.budget(
        temperature=geom.temperature,
        b_field=geom.b_field,
        pitch=geom.pitch,
        lam=basis.lam,
        noise_density=noise.get("s_v", 0.0),
        tuning=noise.get("tuning_ghz_per_mv", 1.0),
        coupling_const=noise.get("coupling_const", 1e-2),
        mobility_field=noise.get("mobility_field", 0.0),
    )
    surface = medium.HeliumSurface(temperature=geom.temperature)
    scales = medium.magnetic_quantities(geom.b_field, geom.pitch)
    intermediates = {
        "delta_T_cm": medium.thermal_amplitude(surface),
        "magnetic_length_cm": scales.length_cm,
        "omega_c_K": scales.omega_c_K,
        "omega_zb_K": scales.omega_zb_K,
        "omega_l_K": medium.ripplon_energy_K(surface, 1.0 / scales.length_cm),
        "rydberg_K": hydrogenic.rydberg_scales(basis.lam)[0],
        "bohr_radius_cm": hydrogenic.rydberg_scales(basis.lam)[1],
        "confinement_K": qubits.confinement_scale(geom),
    }
    w = _Writer(config, overrides, "decoherence")
    p = w.json({"budget": bud.to_dict(), "intermediates": intermediates})
    print(f"wrote {p}")
    return EXIT_OK


def _build_register(config: dict):
    dev = require_block(config, "device")
    geom = device_geometry(dev)
    basis = basis_spec(dev)
    volts = device_voltages(dev, geom.n_sites)
    return qubits.build(geom, volts, basis=basis), geom


def run_build(config: dict, overrides: list[str]) -> int:
    ham, _ = _build_register(config)
    w = _Writer(config, overrides, "build")
    p = w.json({"hamiltonian": ham.to_dict()})
    print(f"wrote {p}")
    return EXIT_OK


def run_calibrate(config: dict, overrides: list[str], refine: bool = False) -> int:
    sw = require_block(config, "swap")
    ham, _ = _build_register(config)
    pair = tuple(sw["pair"])
    refine = refine or sw.get("refine", False)
    dwell = pulses.calibrate_swap(
        ham, pair, sw["alpha"],
        refine=refine, rise=sw.get("rise_s", 0.0), fall=sw.get("fall_s", 0.0),
    )
    w = _Writer(config, overrides, "calibrate")
    p = w.json({
        "pair": list(pair),
        "alpha": sw["alpha"],
        "dwell_s": dwell,
        "refined": bool(refine),
        "b_K": float(ham.b_K[pair[0], pair[1]]),
    })
    print(f"wrote {p}")
    print(f"dwell_s={_format_float(dwell)}")
    return EXIT_OK


def _evolution_spec(config: dict, duration: float) -> dynamics.EvolutionSpec:
    ev = config.get("evolution", {})
    if "sample_times_s" in ev:
        samples = np.asarray(ev["sample_times_s"], dtype=float)
    else:
        t_end = ev.get("t_end_s", duration)
        samples = np.linspace(0.0, t_end, ev.get("sample_count", 101))
    budget_obj = None
    if ev.get("use_budget", False):
        dev = require_block(config, "device")
        noise = config.get("noise", {})
        geom = device_geometry(dev)
        budget_obj = decoherence.budget(
            temperature=geom.temperature,
            b_field=geom.b_field,
            pitch=geom.pitch,
            lam=basis_spec(dev).lam,
            noise_density=noise.get("s_v", 0.0),
            tuning=noise.get("tuning_ghz_per_mv", 1.0),
        )
    tun = None
    if "tunneling" in ev:
        tun = dynamics.TunnelingSpec(ev["tunneling"]["t_f_s"], ev["tunneling"]["t_up_s"])
    return dynamics.EvolutionSpec(
        sample_times=samples,
        frame=ev.get("frame", "rwa"),
        rtol=ev.get("rtol", 1e-8),
        budget=budget_obj,
        tunneling=tun,
    )


def run_evolve(config: dict, overrides: list[str]) -> int:
    sched = pulses.PulseSchedule.from_dict(require_block(config, "schedule"))
    init_blk = require_block(config, "initial")
    ham, _ = _build_register(config)
    mode = init_blk.get("mode", "state-vector")
    if mode == "state-vector":
        initial = dynamics.RegisterState.state_vector(init_blk["bits"])
    else:
        initial = dynamics.RegisterState.density_matrix(init_blk["bits"])
    spec = _evolution_spec(config, sched.duration)
    result = dynamics.evolve(ham, sched, initial, spec)
    w = _Writer(config, overrides, "evolve")
    meta = f"config_hash={w.hash} artifact_version={__version__}"
    p_csv = w.path("csv")
    result.to_csv(p_csv, metadata=meta)
    p_json = w.json({"result": result.to_json_dict()})
    print(f"wrote {p_csv}")
    print(f"wrote {p_json}")
    return EXIT_OK


def run_readout(config: dict, overrides: list[str]) -> int:
    dev = require_block(config, "device")
    ro = require_block(config, "readout")
    geom = device_geometry(dev)
    basis = basis_spec(dev)
    sol = hydrogenic.solve(basis, geom.e_perp)
    pixel_cm = ro.get("pixel_um", 1.0) * 1e-4
    rplan = readout.plan(
        sol, ro["wait_s"], ro["selectivity"],
        pixel_size=pixel_cm, site_positions_cm=geom.positions_cm(),
    )
    bits = ro.get("initial_bits", "u" * geom.n_sites)
    if len(bits) != geom.n_sites:
        raise ConfigError(
            f"initial_bits has {len(bits)} characters for {geom.n_sites} sites"
        )
    # per-site survival from the trace record of the tunneling evolution
    survival = []
    single = qubits.QubitArrayHamiltonian.from_parameters([0.0])
    hold = pulses.PulseSchedule(duration=ro["wait_s"])
    for ch in bits:
        initial = dynamics.RegisterState.density_matrix(ch)
        spec = dynamics.EvolutionSpec(
            sample_times=np.array([ro["wait_s"]]),
            tunneling=dynamics.TunnelingSpec(t_f=0.0, t_up=rplan.t_2),
        )
        res = dynamics.evolve(single, hold, initial, spec)
        survival.append(float(res.trace[-1]))
    seed = config.get("seed", 0)
    records, image = readout.sample_shots(survival, rplan, ro["shots"], seed)
    w = _Writer(config, overrides, "readout")
    img_rows = [
        (px[0], px[1], count) for px, count in sorted(image.items())
    ]
    p_img = w.csv(["pixel_x", "pixel_y", "counts"], img_rows, suffix="image.csv")
    p_log = w.json({
        "plan": {
            "e_plus_V_per_cm": rplan.e_plus,
            "wait_s": rplan.wait,
            "t_1_s": rplan.t_1,
            "t_2_s": rplan.t_2,
            "pixel_size_cm": rplan.pixel_size,
            "site_pixels": [list(p) for p in rplan.site_pixels],
        },
        "survival": survival,
        "seed": seed,
        "rng": readout.RNG_ALGORITHM,
        "shots": [
            {
                "index": r.index,
                "tunneled": [bool(b) for b in r.tunneled],
            }
            for r in records
        ],
    })
    print(f"wrote {p_img}")
    print(f"wrote {p_log}")
    return EXIT_OK


def run_demo_swap(config: dict, overrides: list[str]) -> int:
    sw = require_block(config, "swap")
    ham, geom = _build_register(config)
    pair = tuple(sw["pair"])
    alpha = sw["alpha"]
    rise, fall = sw.get("rise_s", 0.0), sw.get("fall_s", 0.0)
    dwell = pulses.calibrate_swap(
        ham, pair, alpha, refine=sw.get("refine", False), rise=rise, fall=fall,
    )
    sched = pulses.swap_schedule(ham, pair, dwell, rise, fall)
    n = ham.n_qubits
    bits = ["d"] * n
    bits[pair[0]] = "u"
    source = "".join(bits)
    bits_t = ["d"] * n
    bits_t[pair[1]] = "u"
    target = "".join(bits_t)
    initial = dynamics.RegisterState.state_vector(source)
    t_meas = rise + dwell  # sample at ramp-down onset: the resonant segment ends here
    spec = _evolution_spec(config, t_meas)
    if "evolution" not in config or "sample_times_s" not in config.get("evolution", {}):
        spec = dynamics.EvolutionSpec(
            sample_times=np.array([t_meas]), frame=spec.frame, rtol=spec.rtol,
            budget=spec.budget, tunneling=spec.tunneling,
        )
    result = dynamics.evolve(ham, sched, initial, spec)
    final = result.final_state
    amp_source = final[dynamics.basis_index(source)]
    amp_target = final[dynamics.basis_index(target)]
    # exchange-block two-level solution: cos(a)|source> - i sin(a)|target>,
    # compared up to the block's common phase
    fidelity = (
        abs(math.cos(alpha) * amp_source + 1j * math.sin(alpha) * amp_target) ** 2
    )
    w = _Writer(config, overrides, "demo-swap")
    p = w.json({
        "pair": list(pair),
        "alpha": alpha,
        "dwell_s": dwell,
        "rise_s": rise,
        "fall_s": fall,
        "target_amplitudes": {"source": math.cos(alpha), "target": math.sin(alpha)},
        "achieved_amplitudes": {
            "source": abs(amp_source),
            "target": abs(amp_target),
        },
        "fidelity_vs_exchange_oracle": fidelity,
    })
    print(f"wrote {p}")
    print(
        f"alpha={_format_float(alpha)} "
        f"|amp_{source}|={_format_float(abs(amp_source))} (target {_format_float(abs(math.cos(alpha)))}) "
        f"|amp_{target}|={_format_float(abs(amp_target))} (target {_format_float(abs(math.sin(alpha)))}) "
        f"fidelity={_format_float(fidelity)}"
    )
    return EXIT_OK


_RUNNERS = {
    "spectrum": run_spectrum,
    "medium": run_medium,
    "decoherence": run_decoherence,
    "build": run_build,
    "calibrate": run_calibrate,
    "evolve": run_evolve,
    "readout": run_readout,
    "demo-swap": run_demo_swap,
}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="helioq",
        description="Electrons-on-helium qubit simulator: batch experiments",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in _RUNNERS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON experiment config")
        p.add_argument(
            "--set", dest="overrides", action="append", default=[],
            metavar="PATH=VALUE",
            help="dotted-path config override (repeatable, last wins)",
        )
        if name == "calibrate":
            p.add_argument("--refine", action="store_true",
                           help="root-find the dwell through the full dynamics")
    args = parser.parse_args(argv)

    try:
        config, overrides = load_config(args.config, args.overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    runner = _RUNNERS[args.subcommand]
    try:
        if args.subcommand == "calibrate":
            return runner(config, overrides, refine=args.refine)
        return runner(config, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # numerical or domain failure, reported with context
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
