"""
Command-line front end.

    tempobell chsh --state bell-phi-plus --angles 0,0,0.39269908,0,0.78539816,0,1.17809725,0
    tempobell tchsh --scenario entangled-history
    tempobell vfunc --scenario initial --theta 0 --phi 0
    tempobell protocol --t1 0,0 --t2 0,0 --perp-t2
    tempobell sweep --quantity s-temporal --scenario entangled-history --param theta2=0:6.283185307179586:100
    tempobell optimize --scenario product-history --t1 z+ --t2 z+

Exit codes: 0 success, 2 usage error, 3 null history.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from statistics import median

import numpy as np

from . import __version__
from .chsh import (
    BELL_PHI_PLUS,
    PAPER_QUAD,
    PRODUCT_ZZ,
    AngleQuad,
    correlator_temporal,
    maximize_violation_detailed,
    s_spatial,
    s_temporal,
    within_classical_bound,
)
from .errors import InvalidArgumentError, NullHistoryError, TempoBellError
from .functionals import (
    QuadratureGrid,
    analytic_v_oracle,
    classify,
    family_scenario,
    moments,
    monte_carlo_moments,
    v_bounds,
)
from .kernels import BACKEND
from .protocol import BELL_ORDER, analytic_postselected_amplitude, postselection_probability, run_postselected_protocol
from .qstate import BlochAngles, Ket

EXIT_USAGE = 2
EXIT_DOMAIN = 3

PRESETS = {
    "z+": (0.0, 0.0),
    "z-": (math.pi / 2, 0.0),
    "x+": (math.pi / 4, 0.0),
    "x-": (3 * math.pi / 4, 0.0),
}
TWO_QUBIT_PRESETS = {"bell-phi-plus": BELL_PHI_PLUS, "product-zz": PRODUCT_ZZ}
SCENARIO_FAMILY = {
    "initial": "evolved-initial",
    "product-history": "product-history",
    "entangled-history": "entangled-zz",
}
QUAD_PARAMS = ("theta1", "phi1", "theta2", "phi2", "theta3", "phi3", "theta4", "phi4")
STATE_PARAMS = ("theta", "phi", "theta-prime", "phi-prime")


def _floats(text: str, count: int | None = None) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise argparse.ArgumentTypeError(f"expected {count} numbers, got {len(vals)}")
    if not all(math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError("angles must be finite")
    return vals


def angle_quad(text: str) -> AngleQuad:
    return AngleQuad.from_flat(_floats(text, 8))


def angle_pair(text: str) -> tuple[float, float]:
    if text in PRESETS:
        return PRESETS[text]
    t, p = _floats(text, 2)
    return t, p


def two_qubit_state(text: str) -> Ket:
    if text in TWO_QUBIT_PRESETS:
        return TWO_QUBIT_PRESETS[text]
    v = _floats(text, 8)
    amp = np.array(v[0::2]) + 1j * np.array(v[1::2])
    try:
        return Ket(amp)
    except InvalidArgumentError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def sweep_param(text: str) -> tuple[str, float, float, int]:
    try:
        name, rng = text.split("=", 1)
        lo, hi, steps = rng.split(":")
        lo_f, hi_f, n = float(lo), float(hi), int(steps)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NAME=FROM:TO:STEPS, got {text!r}") from None
    if n < 2:
        raise argparse.ArgumentTypeError("steps must be at least 2")
    return name, lo_f, hi_f, n


# -- output -------------------------------------------------------------------

def _plain_value(v) -> str:
    if isinstance(v, float):
        return f"{v:.9g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_plain_value(x) for x in v) + "]"
    return str(v)


def _csv_value(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return " ".join(_csv_value(x) for x in v)
    return str(v)


def _flatten(d: dict, prefix: str = "") -> list[tuple[str, object]]:
    rows = []
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            rows.extend(_flatten(v, key + "."))
        else:
            rows.append((key, v))
    return rows


def _write_csv(header, rows, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_csv_value(x) for x in r])


def emit(record: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(record, sort_keys=True, indent=2) + "\n")
        return
    result = record["result"]
    if "table" in result:
        # tables are CSV under both plain and csv
        _write_csv(result["table"]["header"], result["table"]["rows"], out)
        return
    if fmt == "csv":
        _write_csv(["field", "value"], _flatten(result), out)
        return
    for key, value in result.items():
        if key == "steps":
            out.write("steps:\n")
            for step in value:
                out.write(f"  {step['gate']:<42} p = {_plain_value(step['outcome_probability'])}\n")
        elif isinstance(value, dict):
            for k2, v2 in value.items():
                out.write(f"{key}.{k2} = {_plain_value(v2)}\n")
        else:
            out.write(f"{key} = {_plain_value(value)}\n")


def _record(command: str, inputs: dict, result: dict, **meta) -> dict:
    metadata = {"version": __version__, "backend": BACKEND}
    metadata.update(meta)
    return {"command": command, "inputs": inputs, "result": result, "metadata": metadata}


# -- scenario arguments ------------------------------------------------------

def _add_scenario_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--scenario", choices=sorted(SCENARIO_FAMILY), required=required)
    p.add_argument("--psi", type=angle_pair, default=PRESETS["z+"],
                   help="initial state: preset (z+, z-, x+, x-) or THETA,PHI")
    p.add_argument("--t1", type=angle_pair, default=PRESETS["z+"], help="history slice at t1")
    p.add_argument("--t2", type=angle_pair, default=PRESETS["z+"], help="history slice at t2")
    p.add_argument("--theta", type=float)
    p.add_argument("--phi", "--t-phi", dest="phi", type=float)
    p.add_argument("--theta-prime", type=float)
    p.add_argument("--phi-prime", "--t-phi-prime", dest="phi_prime", type=float)


def _state_params(args) -> dict[str, float]:
    base = args.psi if args.scenario == "initial" else args.t1
    params = {"theta": base[0], "phi": base[1], "theta-prime": args.t2[0], "phi-prime": args.t2[1]}
    for name, attr in zip(STATE_PARAMS, ("theta", "phi", "theta_prime", "phi_prime")):
        value = getattr(args, attr)
        if value is not None:
            params[name] = value
    return params


def _scenario(kind: str, params: dict[str, float]):
    return family_scenario(
        SCENARIO_FAMILY[kind], params["theta"], params["phi"], params["theta-prime"], params["phi-prime"]
    )


def _scenario_inputs(kind: str, params: dict[str, float]) -> dict:
    inputs = {"scenario": kind}
    if kind == "initial":
        inputs.update(theta=params["theta"], phi=params["phi"])
    elif kind == "product-history":
        inputs.update(params)
    return inputs


def _verdict(value: float) -> str:
    return "within classical bound" if within_classical_bound(value) else "violates classical bound"


# -- commands -----------------------------------------------------------------

def cmd_chsh(args) -> dict:
    s = s_spatial(args.state, args.angles)
    inputs = {"state": [[float(a.real), float(a.imag)] for a in args.state.amp], "angles": list(args.angles.flat())}
    return _record("chsh", inputs, {"S": s, "verdict": _verdict(s)})


def cmd_tchsh(args) -> dict:
    params = _state_params(args)
    value = s_temporal(_scenario(args.scenario, params), args.angles)
    inputs = _scenario_inputs(args.scenario, params)
    inputs["angles"] = list(args.angles.flat())
    return _record("tchsh", inputs, {"S_tilde": value, "verdict": _verdict(value)})


def cmd_vfunc(args) -> dict:
    params = _state_params(args)
    family = SCENARIO_FAMILY[args.scenario]
    scenario = _scenario(args.scenario, params)
    grid = QuadratureGrid(args.grid)
    mom = moments(scenario, grid)
    analytic = analytic_v_oracle(family, params["theta"], params["theta-prime"])
    result = {
        "M": mom.m,
        "V": mom.v,
        "V_analytic": analytic,
        "abs_deviation": abs(mom.v - analytic),
        "classification": str(classify(mom.v, args.tol)),
    }
    if family in ("evolved-initial", "product-history"):
        lo, hi = v_bounds(family)
        result["family_bounds"] = [lo, hi]
    meta = {"grid": args.grid, "tol": args.tol}
    if args.monte_carlo:
        mc = monte_carlo_moments(scenario, args.monte_carlo, args.seed)
        result["monte_carlo"] = {"M": mc.m, "M_stderr": mc.m_stderr, "V": mc.v, "V_stderr": mc.v_stderr,
                                 "samples": mc.samples}
        meta["seed"] = args.seed
    return _record("vfunc", _scenario_inputs(args.scenario, params), result, **meta)


def _gate_label(gate) -> str:
    name = type(gate).__name__
    if name == "CNOT":
        return f"CNOT({gate.control}->{gate.target})"
    if name == "ControlledRotate":
        return f"ControlledRotate(ctrl={gate.control}, tgt={gate.target})"
    if name == "ProjectFactor":
        return f"ProjectFactor(q{gate.target})"
    if name == "ProjectPair":
        return f"ProjectPair(q{gate.targets[0]},q{gate.targets[1]})"
    return name


def cmd_protocol(args) -> dict:
    run = run_postselected_protocol(args.t1, args.t2, args.perp_t1, args.perp_t2, args.bell)
    analytic = analytic_postselected_amplitude(args.t1, args.t2, args.perp_t1, args.perp_t2)
    result = {
        "steps": [{"gate": _gate_label(g), "outcome_probability": p} for g, p in run.step_log],
        "raw_joint_probability": run.joint_probability,
        "postselection_probability": postselection_probability(run),
        "renormalized_probability": run.renormalized_probability,
        "analytic_probability": abs(analytic) ** 2,
        "renormalized_amplitude": [run.renormalized_amplitude.real, run.renormalized_amplitude.imag],
        "analytic_amplitude": [analytic.real, analytic.imag],
    }
    inputs = {"t1": list(args.t1), "t2": list(args.t2), "perp_t1": args.perp_t1, "perp_t2": args.perp_t2,
              "bell": args.bell}
    return _record("protocol", inputs, result)


def cmd_sweep(args) -> dict:
    if not args.param or len(args.param) > 2:
        raise InvalidArgumentError("sweep needs one or two --param NAME=FROM:TO:STEPS")
    allowed = STATE_PARAMS + (QUAD_PARAMS if args.quantity != "v" else ())
    names = [p[0] for p in args.param]
    for n in names:
        if n not in allowed:
            raise InvalidArgumentError(f"cannot sweep {n!r} for {args.quantity}; choose from {', '.join(allowed)}")
    if len(set(names)) != len(names):
        raise InvalidArgumentError("swept parameters must differ")
    base_state = _state_params(args)
    base_quad = dict(zip(QUAD_PARAMS, args.angles.flat()))
    axes = [np.linspace(lo, hi, n) for _, lo, hi, n in args.param]
    grid = QuadratureGrid(args.grid)
    rows = []
    for point in (np.array(np.meshgrid(*axes, indexing="ij")).reshape(len(axes), -1).T):
        state = dict(base_state)
        quad = dict(base_quad)
        for name, value in zip(names, point):
            (state if name in STATE_PARAMS else quad)[name] = float(value)
        scenario = _scenario(args.scenario, state)
        q = [quad[k] for k in QUAD_PARAMS]
        if args.quantity == "s-temporal":
            value = s_temporal(scenario, q)
        elif args.quantity == "correlator":
            value = correlator_temporal(scenario, (q[0], q[1]), (q[2], q[3]))
        else:
            value = moments(scenario, grid).v
        rows.append([float(x) for x in point] + [value])
    inputs = _scenario_inputs(args.scenario, base_state)
    inputs.update(quantity=args.quantity, angles=list(args.angles.flat()),
                  params=[{"name": n, "from": lo, "to": hi, "steps": s} for n, lo, hi, s in args.param])
    table = {"header": names + [args.quantity], "rows": rows}
    meta = {"grid": args.grid} if args.quantity == "v" else {}
    return _record("sweep", inputs, {"table": table}, **meta)


def cmd_optimize(args) -> dict:
    params = _state_params(args)
    r = maximize_violation_detailed(_scenario(args.scenario, params), args.restarts, args.tol, args.seed)
    vals = r.restart_values
    result = {
        "best_abs_S_tilde": r.value,
        "best_angles": list(r.best.flat()),
        "restarts": {
            "count": len(vals),
            "min": min(vals),
            "median": float(median(vals)),
            "max": max(vals),
            "at_best_within_1e-6": sum(1 for v in vals if r.value - v <= 1e-6),
            "total_sweeps": sum(r.sweeps),
        },
    }
    return _record("optimize", _scenario_inputs(args.scenario, params), result,
                   tol=args.tol, seed=args.seed)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("plain", "json", "csv"), default="plain")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="tempobell", description=__doc__.splitlines()[1])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chsh", parents=[common], help="spatial CHSH value S")
    p.add_argument("--state", type=two_qubit_state, default=BELL_PHI_PLUS,
                   help="bell-phi-plus, product-zz, or 8 reals re0,im0,...,re3,im3")
    p.add_argument("--angles", type=angle_quad, default=PAPER_QUAD, help="8 angles in radians")
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("tchsh", parents=[common], help="temporal CHSH value S~")
    _add_scenario_args(p)
    p.add_argument("--angles", type=angle_quad, default=PAPER_QUAD)
    p.set_defaults(func=cmd_tchsh)

    p = sub.add_parser("vfunc", parents=[common], help="M and V functionals")
    _add_scenario_args(p)
    p.add_argument("--grid", type=int, default=16)
    p.add_argument("--monte-carlo", type=int, metavar="SAMPLES")
    p.add_argument("--tol", type=float, default=1e-9, help="classification tolerance")
    p.set_defaults(func=cmd_vfunc)

    p = sub.add_parser("protocol", parents=[common], help="post-selected three-qubit circuit")
    p.add_argument("--t1", type=angle_pair, default=(0.0, 0.0))
    p.add_argument("--t2", type=angle_pair, default=(0.0, 0.0))
    p.add_argument("--perp-t1", action="store_true")
    p.add_argument("--perp-t2", action="store_true")
    p.add_argument("--bell", choices=BELL_ORDER, default="phi+")
    p.set_defaults(func=cmd_protocol)

    p = sub.add_parser("sweep", parents=[common], help="CSV scan of one or two parameters")
    p.add_argument("--quantity", choices=("s-temporal", "v", "correlator"), required=True)
    _add_scenario_args(p)
    p.add_argument("--angles", type=angle_quad, default=PAPER_QUAD)
    p.add_argument("--param", type=sweep_param, action="append", metavar="NAME=FROM:TO:STEPS")
    p.add_argument("--grid", type=int, default=16)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize", parents=[common], help="maximize |S~| by multi-start search")
    _add_scenario_args(p)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_optimize)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "grid", 4) < 4:
        parser.error("--grid must be at least 4")
    if getattr(args, "restarts", 1) < 1:
        parser.error("--restarts must be at least 1")
    if (getattr(args, "monte_carlo", None) or 2) < 2:
        parser.error("--monte-carlo needs at least 2 samples")
    if args.command == "optimize" and not args.tol > 0:
        parser.error("--tol must be positive")
    if args.command == "vfunc" and not args.tol >= 0:
        parser.error("--tol must be non-negative")
    try:
        record = args.func(args)
    except NullHistoryError as exc:
        print(f"error: null history: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (InvalidArgumentError, TempoBellError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    emit(record, args.format)
    return 0


if __name__ == "__main__":
    sys.exit(main())
