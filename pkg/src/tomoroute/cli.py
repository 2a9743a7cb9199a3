"""Command-line front end.

Usage examples::

    tomoroute generate six-state -n 2 -o settings.json
    tomoroute solve --scheme six-state -n 1
    tomoroute solve --scheme path -n 1 --cost heat
    tomoroute solve --tsplib instance.tsp --method held-karp
    tomoroute nest --inner inner.json --inner-qubits 1 --outer-qubits 1
    tomoroute export --scheme six-state -n 2 -o six2.tsp
    tomoroute random-study -n 2 --trials 10 --seed 7
    tomoroute figures --max-qubits 3 -o figures.csv

Exit codes: 0 success, 2 usage error, 3 input/parse error, 4 size limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import statistics
import sys
from pathlib import Path

from . import tsplibio
from .analysis import report_from_costs, transition_table, transition_table_csv
from .costmodel import HEAT_POWER_MODES, CostMatrix, HeaterModel, MountModel, cycle_cost, heat_matrix, max_angle_matrix
from .errors import InvalidArgumentError, SizeLimitError, TomorouteError
from .settings import (
    DEGREES,
    RADIANS,
    SettingsSet,
    path_encoded_settings,
    random_settings,
    read_settings_csv,
    six_state_settings,
    three_base_settings,
    write_settings_csv,
)
from .solver import Budget, SolveResult, Tour, nest_tours, solve

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_SIZE = 4

SCHEMES = ("six-state", "three-base", "path", "random", "custom")
UNIT_FLAGS = {"deg": DEGREES, "rad": RADIANS}


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


def build_settings(args) -> SettingsSet:
    scheme = args.scheme
    if scheme == "custom":
        if not getattr(args, "settings", None):
            raise UsageError("--scheme custom needs --settings FILE.csv")
        return load_settings(args.settings, args.unit)
    if args.qubits is None:
        raise UsageError("-n/--qubits is required")
    if scheme == "six-state":
        return six_state_settings(args.qubits)
    if scheme == "three-base":
        return three_base_settings(args.qubits)
    if scheme == "path":
        return path_encoded_settings(args.qubits)
    if scheme == "random":
        return random_settings(args.qubits, args.p, args.seed, tuple(args.angle_range))
    raise UsageError(f"unknown scheme {scheme!r}")


def load_settings(path, unit_flag=None) -> SettingsSet:
    p = Path(path)
    try:
        if p.suffix.lower() == ".csv":
            return read_settings_csv(p, UNIT_FLAGS[unit_flag or "deg"])
        return SettingsSet.from_json(p.read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    except (InvalidArgumentError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def build_matrix(s: SettingsSet, args) -> CostMatrix:
    if args.cost == "heat":
        return heat_matrix(s, heater_model(args), power=args.heat_power)
    return max_angle_matrix(s)


def heater_model(args) -> HeaterModel:
    return HeaterModel(args.power_per_2pi, args.settle_per_2pi)


def conversion_for(unit: str, args):
    if unit == DEGREES:
        return MountModel(args.mount_speed)
    if unit == RADIANS:
        return heater_model(args)
    return None


def budget_from(args) -> Budget:
    return Budget(max_seconds=args.budget_seconds, max_restarts=args.restarts, perturbations=args.perturbations)


def read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="ascii" if str(path).endswith((".tsp", ".atsp", ".tour")) else "utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def write_text(path, text: str) -> None:
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror or exc}") from None


def load_tour(path) -> list[int]:
    text = read_text(path)
    if str(path).endswith(".tour") or text.lstrip().startswith("NAME"):
        return tsplibio.import_tour(text)
    try:
        return list(SolveResult.from_dict(json.loads(text)).tour.order)
    except (json.JSONDecodeError, InvalidArgumentError) as exc:
        raise InputError(f"{path}: {exc}") from None


# -- commands ---------------------------------------------------------------


def cmd_generate(args) -> int:
    if args.scheme_pos:
        if args.scheme and args.scheme != args.scheme_pos:
            raise UsageError("conflicting schemes given")
        args.scheme = args.scheme_pos
    if not args.scheme:
        raise UsageError("a scheme is required")
    s = build_settings(args)
    if args.output:
        if str(args.output).lower().endswith(".csv"):
            try:
                write_settings_csv(s, args.output)
            except OSError as exc:
                raise InputError(f"cannot write {args.output}: {exc}") from None
        else:
            write_text(args.output, s.to_json())
        print(f"{len(s)} settings ({s.scheme}, {s.n_qubits} qubit(s), {s.unit}) -> {args.output}")
    else:
        sys.stdout.write(s.to_json())
    return EXIT_OK


def cmd_solve(args) -> int:
    settings = None
    if args.tsplib:
        try:
            c = tsplibio.import_tsplib(read_text(args.tsplib))
        except TomorouteError as exc:
            raise InputError(f"{args.tsplib}: {exc}") from None
    else:
        settings = load_settings(args.settings, args.unit) if args.settings else build_settings(args)
        c = build_matrix(settings, args)
    result = solve(c, args.method, args.seed, budget_from(args))
    baseline = Tour.identity(c.n)
    report = report_from_costs(cycle_cost(c, baseline), result.cost, c.unit, conversion_for(c.unit, args))
    print(f"{c.n} settings, {'symmetric' if c.symmetric else 'asymmetric'} {c.unit} costs, "
          f"method {result.method}{' (optimal)' if result.optimal else ''}")
    print(report.format())
    if args.show_tour and settings is not None:
        print("order: " + " ".join(settings.labels[i] for i in result.tour.order))
    if args.output:
        out = Path(args.output)
        write_text(out.with_suffix(".tour.json"), result.to_json())
        write_text(out.with_suffix(".report.json"), report.to_json())
        if args.tsplib_tour:
            write_text(out.with_suffix(".tour"), tsplibio.export_tour(result.tour, out.stem))
        if settings is not None:
            write_text(out.with_suffix(".transitions.csv"), transition_table_csv(transition_table(settings, c, result.tour)))
    return EXIT_OK


def cmd_nest(args) -> int:
    generators = {"six-state": six_state_settings, "three-base": three_base_settings, "path": path_encoded_settings}
    if args.scheme not in generators:
        raise UsageError("nest supports the six-state, three-base and path schemes")
    gen = generators[args.scheme]
    inner_n = len(gen(args.inner_qubits))
    outer_n = len(gen(args.outer_qubits))
    inner = load_tour(args.inner) if args.inner else list(range(inner_n))
    if len(inner) != inner_n:
        raise InvalidArgumentError(f"inner tour has {len(inner)} entries; {args.inner_qubits} qubit(s) need {inner_n}")
    outer = load_tour(args.outer) if args.outer else list(range(outer_n))
    if len(outer) != outer_n:
        raise InvalidArgumentError(f"outer order has {len(outer)} entries; {args.outer_qubits} qubit(s) need {outer_n}")
    tour = nest_tours(inner, outer, inner_n)
    s = gen(args.inner_qubits + args.outer_qubits)
    c = build_matrix(s, args)
    nested = cycle_cost(c, tour)
    conv = cycle_cost(c, Tour.identity(c.n))
    report = report_from_costs(conv, nested, c.unit, conversion_for(c.unit, args))
    print(f"nested tour over {len(tour)} settings ({args.outer_qubits} outer x {args.inner_qubits} inner qubit(s))")
    print(report.format())
    result = SolveResult(tour, nested, "nested", False, None)
    if args.output:
        write_text(args.output, result.to_json())
    return EXIT_OK


def cmd_export(args) -> int:
    if args.tour:
        order = load_tour(args.tour)
        text = tsplibio.export_tour(order, args.name)
    else:
        s = load_settings(args.settings, args.unit) if args.settings else build_settings(args)
        c = build_matrix(s, args)
        text = tsplibio.export_tsplib(c, args.name, args.scale)
    if args.output:
        write_text(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_import(args) -> int:
    text = read_text(args.file)
    try:
        if args.file.endswith(".tour") or "TOUR_SECTION" in text:
            doc = json.dumps({"order": tsplibio.import_tour(text)}) + "\n"
        else:
            doc = tsplibio.import_tsplib(text).to_json()
    except TomorouteError as exc:
        raise InputError(f"{args.file}: {exc}") from None
    if args.output:
        write_text(args.output, doc)
    else:
        sys.stdout.write(doc)
    return EXIT_OK


def random_study(n, p, trials, seed, angle_range, method="auto", budget=None):
    """Solve ``trials`` random-angle instances; returns per-trial rows and the mean speedup."""
    if trials < 1:
        raise InvalidArgumentError("trials must be at least 1")
    import numpy as np

    trial_seeds = np.random.SeedSequence(seed).generate_state(trials, dtype=np.uint32).tolist()
    rows = []
    for k, ts in enumerate(trial_seeds):
        s = random_settings(n, p, int(ts), angle_range)
        c = max_angle_matrix(s)
        r = solve(c, method, int(ts), budget)
        conv = cycle_cost(c, Tour.identity(c.n))
        rows.append({"trial": k, "seed": int(ts), "conventional": conv, "optimized": r.cost,
                     "speedup": conv / r.cost, "method": r.method})
    return rows, statistics.fmean(r["speedup"] for r in rows)


def cmd_random_study(args) -> int:
    rows, mean = random_study(args.qubits, args.p, args.trials, args.seed, tuple(args.angle_range),
                              args.method, budget_from(args))
    for r in rows:
        print(f"trial {r['trial']:3d}  seed {r['seed']:10d}  {r['conventional']:12.4f} -> "
              f"{r['optimized']:12.4f} deg  speedup {r['speedup']:.4f}")
    print(f"mean speedup over {len(rows)} trial(s): {mean:.4f}")
    if args.output:
        doc = {"n_qubits": args.qubits, "p": args.p, "trials": args.trials, "seed": args.seed,
               "angle_range": list(args.angle_range), "mean_speedup": mean, "per_trial": rows}
        write_text(args.output, json.dumps(doc, indent=1) + "\n")
    return EXIT_OK


FIGURE_FIELDS = ["scheme", "cost", "qubits", "settings", "conventional", "optimized", "unit",
                 "reduction", "reduction_seconds", "speedup", "method", "optimal"]


def figure_rows(max_qubits: int, args) -> list[dict]:
    cases = [
        ("six-state", "max-angle", six_state_settings, max_qubits),
        ("three-base", "max-angle", three_base_settings, max_qubits),
        ("path", "time", path_encoded_settings, max_qubits),
        ("path", "heat", path_encoded_settings, max_qubits),
    ]
    rows = []
    for scheme, cost, gen, top in cases:
        for n in range(1, top + 1):
            s = gen(n)
            c = heat_matrix(s, heater_model(args), power=args.heat_power) if cost == "heat" else max_angle_matrix(s)
            r = solve(c, args.method, args.seed, budget_from(args))
            conv = cycle_cost(c, Tour.identity(c.n))
            rep = report_from_costs(conv, r.cost, c.unit, conversion_for(c.unit, args))
            rows.append({
                "scheme": scheme, "cost": cost, "qubits": n, "settings": c.n,
                "conventional": repr(conv), "optimized": repr(r.cost), "unit": c.unit,
                "reduction": repr(rep.reduction),
                "reduction_seconds": "" if rep.temporal_reduction is None else repr(rep.temporal_reduction),
                "speedup": repr(rep.speedup), "method": r.method, "optimal": r.optimal,
            })
    return rows


def cmd_figures(args) -> int:
    rows = figure_rows(args.max_qubits, args)
    buf = io.StringIO()
    w = csv.DictWriter(buf, FIGURE_FIELDS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    if args.output:
        write_text(args.output, buf.getvalue())
        print(f"{len(rows)} rows -> {args.output}")
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def _add_scheme_args(p, scheme_required=False):
    p.add_argument("--scheme", choices=SCHEMES, default=None if scheme_required else "six-state")
    p.add_argument("-n", "--qubits", type=int, default=None)
    p.add_argument("--p", type=int, default=6, help="settings per qubit for the random scheme (default 6)")
    p.add_argument("--angle-range", type=float, nargs=2, default=(0.0, 180.0), metavar=("LO", "HI"),
                   help="random wave plate angle interval in degrees (default 0 180)")
    p.add_argument("--settings", help="settings file (.json, or .csv with --unit)")
    p.add_argument("--unit", choices=sorted(UNIT_FLAGS), default="deg", help="unit of CSV control values")


def _add_cost_args(p):
    p.add_argument("--cost", choices=("max-angle", "time", "heat"), default="max-angle",
                   help="max-angle and time build the same max-actuator-travel matrix")
    p.add_argument("--heat-power", choices=HEAT_POWER_MODES, default="destination",
                   help="which end's steady heater power is charged during a transition")
    p.add_argument("--mount-speed", type=float, default=10.0, help="rotation mount speed, deg/s")
    p.add_argument("--power-per-2pi", type=float, default=0.5, help="heater power for a 2*pi phase, W")
    p.add_argument("--settle-per-2pi", type=float, default=1.0, help="heater settling time for 2*pi, s")


def _add_solver_args(p):
    p.add_argument("--method", choices=("auto", "brute", "held-karp", "heuristic"), default="auto")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--budget-seconds", type=float, default=None, help="wall-clock cap for the heuristic")
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--perturbations", type=int, default=None, help="kicks per restart (default: size-based)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tomoroute", description="Order tomography measurements to minimize transition cost.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a settings grid")
    g.add_argument("scheme_pos", nargs="?", choices=SCHEMES, metavar="SCHEME")
    _add_scheme_args(g, scheme_required=True)
    g.add_argument("--seed", type=int, default=1)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="optimize a measurement order")
    _add_scheme_args(s)
    s.add_argument("--tsplib", help="solve a TSPLIB instance instead of a settings grid")
    _add_cost_args(s)
    _add_solver_args(s)
    s.add_argument("--tsplib-tour", action="store_true", help="also write OUTPUT.tour")
    s.add_argument("--show-tour", action="store_true", help="print the optimized label sequence")
    s.add_argument("-o", "--output", help="output prefix for .tour.json/.report.json/.transitions.csv")
    s.set_defaults(func=cmd_solve)

    nst = sub.add_parser("nest", help="repeat an inner tour inside an outer order")
    nst.add_argument("--scheme", choices=("six-state", "three-base", "path"), default="six-state")
    nst.add_argument("--inner", help="inner tour file (.json or .tour); default conventional")
    nst.add_argument("--inner-qubits", type=int, required=True)
    nst.add_argument("--outer", help="outer order file; default conventional")
    nst.add_argument("--outer-qubits", type=int, required=True)
    _add_cost_args(nst)
    nst.add_argument("-o", "--output")
    nst.set_defaults(func=cmd_nest)

    e = sub.add_parser("export", help="write a TSPLIB instance (or a .tour with --tour)")
    _add_scheme_args(e)
    _add_cost_args(e)
    e.add_argument("--scale", type=int, default=None, help="integer weight scale (default 2 for degrees)")
    e.add_argument("--name", default="tomography")
    e.add_argument("--tour", help="convert a tour JSON file to TSPLIB .tour text")
    e.add_argument("--seed", type=int, default=1)
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_export)

    i = sub.add_parser("import", help="read a TSPLIB instance or tour into JSON")
    i.add_argument("file")
    i.add_argument("-o", "--output")
    i.set_defaults(func=cmd_import)

    r = sub.add_parser("random-study", help="mean speedup over random wave plate angle sets")
    r.add_argument("-n", "--qubits", type=int, default=2)
    r.add_argument("--p", type=int, default=6)
    r.add_argument("--trials", type=int, default=10)
    r.add_argument("--angle-range", type=float, nargs=2, default=(0.0, 180.0), metavar=("LO", "HI"))
    _add_solver_args(r)
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_random_study)

    f = sub.add_parser("figures", help="CSV of reduction/speedup per scheme and qubit count")
    f.add_argument("--max-qubits", type=int, default=3)
    _add_cost_args(f)
    _add_solver_args(f)
    f.add_argument("-o", "--output")
    f.set_defaults(func=cmd_figures)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SizeLimitError as exc:
        print(f"tomoroute: size limit: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (InputError, TomorouteError) as exc:
        if isinstance(exc, InvalidArgumentError):
            print(f"tomoroute: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        print(f"tomoroute: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"tomoroute: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
