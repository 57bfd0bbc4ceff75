"""Command-line front end.

Verbs: measure, cohering-power, decohering-power, sup-cohering-power,
correlations, verify, scan. Exit codes: 0 pass, 1 check failure,
2 usage error, 3 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .channels import apply_channel, parse_channel_spec, preset_channel
from .correlations import (
    as_bipartite,
    discord_fixed_basis,
    optimize_deficit,
    qi_relative_entropy,
)
from .errors import BadRange, ParseError, QCoherenceError
from .gates import build_gate
from .measures import coherence_l1, coherence_rel_entropy, dephased_entropy, von_neumann_entropy
from .powers import (
    MaxCoherentSet,
    binary_entropy,
    cohering_power,
    cohering_power_zyz,
    decohering_power,
    max_output_entropy,
    sup_cohering_power,
)
from .states import (
    DensityOperator,
    PureState,
    ReferenceBasis,
    load_basis,
    load_state,
    maximally_coherent,
    pure_state,
)
from .verify import SUITES, run_suite

OUTPUT_DIR_ENV = "QCOHERENCE_OUTPUT_DIR"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3

SCAN_CHANNELS = {
    "bitflip": "bit_flip",
    "phaseflip": "phase_flip",
    "bitphaseflip": "bit_phase_flip",
    "ampdamp": "amplitude_damping",
    "depolarizing": "depolarizing",
}
SCAN_TARGETS = ("zyz-power", "adc-supcohering") + tuple(f"{k}-decohering" for k in SCAN_CHANNELS)


# Input helpers.


def resolve_state(preset: str | None, path: str | None) -> tuple[DensityOperator, str]:
    if path is not None:
        state = load_state(path)
        label = Path(path).name
    else:
        preset = preset or "plus"
        name, _, arg = preset.partition(":")
        if name == "plus":
            state = maximally_coherent(2)
        elif name == "bell":
            state = pure_state([1, 0, 0, 1], (2, 2), normalize=True)
        elif name == "maxcoh":
            try:
                state = maximally_coherent(int(arg))
            except ValueError:
                raise ParseError(f"preset {preset!r}: expected maxcoh:<d>") from None
        else:
            raise ParseError(f"unknown state preset {preset!r}; use plus, bell or maxcoh:<d>")
        label = preset
    if isinstance(state, PureState):
        state = state.density()
    return state, label


def resolve_basis(text: str | None, d: int) -> ReferenceBasis:
    if text is None or text == "computational":
        return ReferenceBasis.computational(d)
    if text == "bell":
        return ReferenceBasis.bell()
    return load_basis(text)


def parse_range(text: str) -> list[float]:
    """``start:stop:step`` with the stop value included; values are start + k*step."""
    parts = text.split(":")
    if len(parts) != 3:
        raise BadRange(f"range {text!r}: expected start:stop:step")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise BadRange(f"range {text!r}: non-numeric field") from None
    if not all(math.isfinite(x) for x in (start, stop, step)):
        raise BadRange(f"range {text!r}: fields must be finite")
    if step <= 0:
        raise BadRange(f"range {text!r}: step must be positive")
    if stop < start:
        raise BadRange(f"range {text!r}: stop is below start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + k * step for k in range(count)]


def output_path(path: str | None) -> Path | None:
    if path is None:
        return None
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def emit(text: str, path: str | None) -> None:
    target = output_path(path)
    if target is None:
        sys.stdout.write(text)
        return
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text)


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"
    rows = [(k, _cell(v)) for k, v in doc.items()]
    width = max(len(k) for k, _ in rows)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)


def _cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)


# Verbs.


def cmd_measure(args) -> int:
    rho, label = resolve_state(args.preset, args.state)
    basis = resolve_basis(args.basis, rho.dim)
    doc = {
        "state": label,
        "basis": basis.label,
        "C_re": coherence_rel_entropy(rho, basis),
        "C_l1": coherence_l1(rho, basis),
        "S_rho": von_neumann_entropy(rho),
        "S_dephased": dephased_entropy(rho, basis),
    }
    emit(render(doc, args.format), args.output)
    return EXIT_OK


def cmd_cohering_power(args) -> int:
    gate = build_gate(args.gate)
    basis = resolve_basis(args.basis, gate.dim)
    res = cohering_power(gate, basis)
    doc = {"gate": args.gate, "basis": basis.label, "mode": res.mode, "cohering_power": res.value,
           "maximizer": res.maximizer}
    emit(render(doc, args.format), args.output)
    return EXIT_OK


def cmd_decohering_power(args) -> int:
    channel = parse_channel_spec(args.channel)
    mset = MaxCoherentSet(args.mset, channel.dim, args.grid)
    basis = resolve_basis(args.basis, channel.dim)
    res = decohering_power(channel, mset, basis)
    doc = {"channel": args.channel, "basis": basis.label, "mode": res.mode, "decohering_power": res.value,
           "maximizer": res.maximizer, "grid": res.grid_spec}
    emit(render(doc, args.format), args.output)
    return EXIT_OK


def cmd_sup_cohering_power(args) -> int:
    dims = _parse_dims(args.dims)
    res = sup_cohering_power(args.gate, dims, args.mset, args.grid)
    doc = {"gate": args.gate, "dims": list(dims), "mode": res.mode, "sup_cohering_power": res.value,
           "maximizer": res.maximizer, "grid": res.grid_spec}
    emit(render(doc, args.format), args.output)
    return EXIT_OK


def _parse_dims(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.replace("x", ",").split(","))
    except ValueError:
        raise ParseError(f"dims {text!r}: expected two integers such as 2,2") from None
    return a, b


def cmd_correlations(args) -> int:
    rho, label = resolve_state(args.preset or ("bell" if args.state is None else None), args.state)
    bs = as_bipartite(rho)
    doc = {
        "state": label,
        "dims": list(bs.dims),
        "C_re_AB": coherence_rel_entropy(bs.state),
        "C_re_A": coherence_rel_entropy(bs.reduced_a()),
        "C_re_B": coherence_rel_entropy(bs.reduced_b()),
        "qi_relative_entropy": qi_relative_entropy(bs.state),
        "discord_fixed_basis": discord_fixed_basis(bs.state),
    }
    if bs.dims[0] == 2:
        res = optimize_deficit(bs.state, points=args.grid)
        doc["one_way_deficit"] = res.value
        doc["deficit_basis"] = {"theta": res.theta, "phi": res.phi}
    else:
        doc["one_way_deficit"] = None
    emit(render(doc, args.format), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_suite(args.suite, args.seed, args.mset)
    text = report.to_json(timing=args.timing) if args.format == "json" else report.to_table()
    if args.output is not None:
        emit(report.to_json(timing=args.timing), args.output)
        sys.stdout.write(report.to_table())
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_FAIL


def scan_rows(target: str, values: list[float], mset: str, grid: int | None) -> tuple[list[str], list[list]]:
    if target == "zyz-power":
        header = ["gamma", "cohering_power", "closed_form"]
        rows = [[g, cohering_power(build_gate("ZYZ", 0.0, 0.0, g, 0.0)).value, cohering_power_zyz(g)]
                for g in values]
        return header, rows
    if target == "adc-supcohering":
        header = ["eta", "mode", "sup_cohering_power", "closed_form", "cohering_power"]
        rows = []
        for eta in values:
            u = build_gate("U_adc", eta)
            sup = sup_cohering_power(u, (2, 2), mset, grid).value
            rows.append([eta, mset, sup, 1 + 0.5 * binary_entropy(eta), cohering_power(u).value])
        return header, rows
    name = SCAN_CHANNELS[target.removesuffix("-decohering")]
    header = ["p", "mode", "decohering_power", "max_output_entropy", "output_coherence_plus"]
    plus = maximally_coherent(2).density()
    rows = []
    for p in values:
        ch = preset_channel(name, p)
        ms = MaxCoherentSet(mset, 2, grid)
        rows.append([p, mset, decohering_power(ch, ms).value, max_output_entropy(ch, ms).value,
                     coherence_rel_entropy(apply_channel(ch, plus))])
    return header, rows


def cmd_scan(args) -> int:
    values = parse_range(args.range)
    header, rows = scan_rows(args.target, values, args.mset, args.grid)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["%.12g" % x if isinstance(x, float) else x for x in row])
    emit(buf.getvalue(), args.output)
    return EXIT_OK


# Parser.


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError("grid resolution must be at least 2")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), help="output format (default json; table for verify)")
    common.add_argument("--output", help=f"write to this path (relative paths go under ${OUTPUT_DIR_ENV} if set)")
    common.add_argument("--seed", type=int, default=7, help="random seed")

    parser = argparse.ArgumentParser(prog="qcoherence", description="Coherence measures, powers and checks.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("measure", parents=[common], help="coherence and entropies of a state")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--preset", help="plus, bell or maxcoh:<d>")
    src.add_argument("--state", help="state JSON file")
    p.add_argument("--basis", help="computational, bell, or a basis JSON file")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("cohering-power", parents=[common], help="cohering power of a unitary")
    p.add_argument("--gate", required=True, help="gate spec, e.g. H, ZYZ:0,0.3,1.2,0, GCNOT:3")
    p.add_argument("--basis", help="computational, bell, or a basis JSON file")
    p.set_defaults(func=cmd_cohering_power)

    p = sub.add_parser("decohering-power", parents=[common], help="decohering power of a channel")
    p.add_argument("--channel", required=True, help="preset:<p>, identity[:d] or dilation:<gate>")
    p.add_argument("--mset", choices=("canonical", "free"), default="free")
    p.add_argument("--grid", type=_positive_int, help="grid points per phase in free mode")
    p.add_argument("--basis", help="computational, bell, or a basis JSON file")
    p.set_defaults(func=cmd_decohering_power)

    p = sub.add_parser("sup-cohering-power", parents=[common], help="sup-cohering power of a system-ancilla unitary")
    p.add_argument("--gate", required=True)
    p.add_argument("--dims", default="2,2", help="system and ancilla dimensions, e.g. 2,2")
    p.add_argument("--mset", choices=("canonical", "free"), default="canonical")
    p.add_argument("--grid", type=_positive_int)
    p.set_defaults(func=cmd_sup_cohering_power)

    p = sub.add_parser("correlations", parents=[common], help="coherence versus correlations of a bipartite state")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--preset", help="bell (default)")
    src.add_argument("--state", help="state JSON file with dims [d_A, d_B]")
    p.add_argument("--grid", type=_positive_int, default=64, help="Bloch grid points per angle")
    p.set_defaults(func=cmd_correlations)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--mset", choices=("canonical", "free"), default="canonical")
    p.add_argument("--timing", action="store_true", help="include wall-clock seconds in the JSON report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", parents=[common], help="parameter sweep written as CSV")
    p.add_argument("--target", required=True, choices=SCAN_TARGETS)
    p.add_argument("--range", required=True, help="start:stop:step, stop included")
    p.add_argument("--mset", choices=("canonical", "free"), default="free")
    p.add_argument("--grid", type=_positive_int)
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "table" if args.verb == "verify" else "json"
    np.seterr(all="ignore")
    try:
        return args.func(args)
    except (QCoherenceError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
