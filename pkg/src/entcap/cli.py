"""Command-line front end: measure, capacity, report, and state subcommands."""

import argparse
import json
import os
import sys

import numpy as np

from .capacity import bracket_as_dict, capacity_bracket, sweep_unassisted, write_sweep_csv
from .families import StateSpecError, make_state, rvb_ferro, state_from_spec_or_file
from .measures import bipartite_capacities, ggm, gm
from .states import Bipartition, RawStateError, save_raw_state, schmidt_spectrum

EXIT_OK = 0
EXIT_BAD_SPEC = 2
EXIT_IO = 3
EXIT_SHAPE = 4

DEFAULT_SEED = 7

DEFAULT_REPORT_STATES = (
    ("GHZ", "ghz:beta2=0.5"),
    ("cluster", "cluster"),
    ("chi", "chi"),
    ("W", "w"),
    ("W2", "w2"),
    ("SS", "ss:pairing=AB|CD"),
    ("RVB", "rvb:mu=2"),
)


class UnsupportedShapeError(ValueError):
    """The state does not have the shape the subcommand needs (exit code 4)."""


def _fmt(value):
    return format(float(value), ".12g")


def _parse_grid(text):
    try:
        nx, nphi = text.lower().split("x")
        grid = (int(nx), int(nphi))
    except ValueError:
        raise StateSpecError(f"grid must look like '101x101', got {text!r}") from None
    if grid[0] < 2 or grid[1] < 2:
        raise StateSpecError(f"grid steps must be >= 2, got {text!r}")
    return grid


def _load_state(args):
    return state_from_spec_or_file(getattr(args, "spec", None), getattr(args, "file", None))


def _require_shape(condition, message):
    if not condition:
        raise UnsupportedShapeError(message)


def _cmd_measure(args):
    state = _load_state(args)
    out = {}
    if args.which == "ggm":
        out["value"] = ggm(state)
        print(_fmt(out["value"]))
    elif args.which == "gm":
        result = gm(state, restarts=args.restarts, tol=args.tol, seed=args.seed)
        out.update(
            value=result.value,
            best_overlap=result.best_overlap,
            restarts_used=result.restarts_used,
            iterations=result.iterations,
            converged=result.converged,
        )
        print(_fmt(result.value))
    elif args.which == "schmidt":
        if args.split is None:
            raise StateSpecError("schmidt needs --split (e.g. A:BCD or AB:CD)")
        try:
            split = Bipartition.from_string(args.split, state.party_labels)
        except ValueError as exc:
            raise StateSpecError(str(exc)) from exc
        spectrum = schmidt_spectrum(state, split)
        out["split"] = args.split
        out["squared_coeffs"] = list(spectrum.squared_coeffs)
        print(" ".join(_fmt(v) for v in spectrum.squared_coeffs))
    else:  # bipartite
        _require_shape(
            state.n_parties == 2 and state.local_dims[0] == state.local_dims[1],
            f"bipartite capacities need 2 equal-dimension parties, got {state.local_dims}",
        )
        caps = bipartite_capacities(state)
        out.update(classical=caps.classical, quantum=caps.quantum, entanglement=caps.entanglement)
        print(" ".join(_fmt(v) for v in caps))
    if args.json:
        print(json.dumps({"which": args.which, **out}))
    return EXIT_OK


def _cmd_capacity(args):
    grid = _parse_grid(args.grid)
    if args.mu_range is not None:
        return _capacity_mu_sweep(args, grid)
    state = _load_state(args)
    _require_shape(
        state.local_dims == (2, 2, 2, 2),
        f"capacity needs a 4-qubit state, got local dimensions {state.local_dims}",
    )
    sweep = sweep_unassisted(
        state, grid=grid, pairs="all", independent=args.independent_bases, threads=args.threads
    )
    bracket = capacity_bracket(state, args.kind, grid=grid, threads=args.threads, sweep=sweep)
    print(f"{_fmt(bracket.lower)} {_fmt(bracket.upper)}")
    if args.json:
        print(json.dumps(bracket_as_dict(bracket)))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            write_sweep_csv(sweep, fh)
    return EXIT_OK


def _capacity_mu_sweep(args, grid):
    """Family sweep over the RVB parameter; CSV rows gain a mu column."""
    if getattr(args, "spec", None) is None or not args.spec.strip().lower().startswith("rvb"):
        raise StateSpecError("--mu-range only applies to the rvb family")
    try:
        start, stop, count = args.mu_range.split(":")
        mus = np.linspace(float(start), float(stop), int(count))
    except ValueError:
        raise StateSpecError(
            f"--mu-range must look like 'start:stop:count', got {args.mu_range!r}"
        ) from None
    fh = open(args.out, "w", encoding="utf-8") if args.out else None
    try:
        for index, mu in enumerate(mus):
            state = rvb_ferro(mu)
            sweep = sweep_unassisted(state, grid=grid, pairs="all", threads=args.threads)
            bracket = capacity_bracket(
                state, args.kind, grid=grid, threads=args.threads, sweep=sweep
            )
            print(f"{_fmt(mu)} {_fmt(bracket.lower)} {_fmt(bracket.upper)}")
            if fh is not None:
                write_sweep_csv(sweep, fh, mu=mu, header=(index == 0))
    finally:
        if fh is not None:
            fh.close()
    return EXIT_OK


def _report_rows(args):
    if args.states == "default":
        return list(DEFAULT_REPORT_STATES)
    return [(spec.strip(), spec.strip()) for spec in args.states.split(",") if spec.strip()]


def _cmd_report(args):
    grid = _parse_grid(args.grid)
    rows = []
    failures = 0
    for label, spec in _report_rows(args):
        try:
            state = make_state(spec)
            if state.local_dims != (2, 2, 2, 2):
                raise UnsupportedShapeError(
                    f"report needs 4-qubit states, got {state.local_dims}"
                )
            sweep = sweep_unassisted(state, grid=grid, pairs="all", threads=args.threads)
            row = {
                "state_name": label,
                "c_assisted": bracket_as_dict(
                    capacity_bracket(state, "assisted", grid=grid, sweep=sweep)
                ),
                "c_unassisted": bracket_as_dict(
                    capacity_bracket(state, "unassisted", grid=grid, sweep=sweep)
                ),
                "ggm": ggm(state),
                "gm": gm(state, restarts=args.restarts, seed=args.seed).value,
            }
            rows.append(row)
        except (StateSpecError, RawStateError, ValueError) as exc:
            failures += 1
            print(f"report: {label}: {exc}", file=sys.stderr)
    header = f"{'state':<10} {'C_a':>22} {'C_ua':>22} {'GGM':>14} {'GM':>14}"
    print(header)
    for row in rows:
        c_a = f"[{_fmt(row['c_assisted']['lower'])}, {_fmt(row['c_assisted']['upper'])}]"
        c_ua = f"[{_fmt(row['c_unassisted']['lower'])}, {_fmt(row['c_unassisted']['upper'])}]"
        print(
            f"{row['state_name']:<10} {c_a:>22} {c_ua:>22} "
            f"{_fmt(row['ggm']):>14} {_fmt(row['gm']):>14}"
        )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump({"states": rows}, fh, indent=1)
            fh.write("\n")
    return 1 if failures else EXIT_OK


def _cmd_state(args):
    state = _load_state(args)
    print(f"local_dims: {' '.join(str(d) for d in state.local_dims)}")
    print(f"parties:    {' '.join(state.party_labels)}")
    for index, amp in enumerate(state.amplitudes):
        digits = _flat_to_digits(index, state.local_dims)
        print(f"|{digits}>  {_fmt(amp.real)} {_fmt(amp.imag)}")
    if args.out:
        save_raw_state(state, args.out)
    return EXIT_OK


def _flat_to_digits(index, dims):
    digits = []
    for d in reversed(dims):
        digits.append(str(index % d))
        index //= d
    return "".join(reversed(digits))


def _add_state_arguments(parser):
    parser.add_argument("spec", nargs="?", help="named-family spec like ghz:beta2=0.5 or w2")
    parser.add_argument("--file", help="raw state file instead of a named spec")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="entcap",
        description=(
            "Genuine-multiparty-entanglement measures and multi-access capacity "
            "brackets for pure multiparty quantum states."
        ),
        epilog=(
            "State specs follow name:key=value,key=value with names ghz (beta2), "
            "w (a,b,c,d), rvb (mu), ss (pairing=AB|CD, AC|BD or AD|BC), "
            "cluster, chi, w2, singlet."
        ),
    )
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for gm restarts")
    parser.add_argument(
        "--threads",
        type=int,
        default=os.cpu_count(),
        help="worker threads for capacity sweeps (default: machine parallelism)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_measure = sub.add_parser("measure", help="entanglement measures and spectra")
    p_measure.add_argument("which", choices=("ggm", "gm", "schmidt", "bipartite"))
    _add_state_arguments(p_measure)
    p_measure.add_argument("--split", help="bipartition for schmidt, e.g. A:BCD or AB:CD")
    p_measure.add_argument("--restarts", type=int, default=50, help="gm restarts")
    p_measure.add_argument("--tol", type=float, default=1e-10, help="gm convergence tolerance")
    p_measure.add_argument("--json", action="store_true", help="also print a JSON record")
    p_measure.set_defaults(func=_cmd_measure)

    p_capacity = sub.add_parser("capacity", help="assisted/unassisted capacity brackets")
    _add_state_arguments(p_capacity)
    p_capacity.add_argument("--kind", choices=("assisted", "unassisted"), required=True)
    p_capacity.add_argument("--grid", default="101x101", help="sweep grid NxM (default 101x101)")
    p_capacity.add_argument("--out", help="write the sweep CSV here")
    p_capacity.add_argument(
        "--independent-bases",
        action="store_true",
        help="optimize the two measurement bases independently (quadratic cost)",
    )
    p_capacity.add_argument(
        "--mu-range",
        help="rvb family sweep start:stop:count; CSV rows gain a mu column",
    )
    p_capacity.add_argument("--json", action="store_true", help="also print a JSON record")
    p_capacity.set_defaults(func=_cmd_capacity)

    p_report = sub.add_parser("report", help="capacities and measures for a list of states")
    p_report.add_argument(
        "--states",
        default="default",
        help="comma-separated specs, or 'default' for GHZ, cluster, chi, W, W2, SS, RVB",
    )
    p_report.add_argument("--grid", default="101x101")
    p_report.add_argument("--restarts", type=int, default=50)
    p_report.add_argument("--out", help="write the structured report here (JSON)")
    p_report.set_defaults(func=_cmd_report)

    p_state = sub.add_parser("state", help="inspect or export a state")
    state_sub = p_state.add_subparsers(dest="state_command", required=True)
    p_show = state_sub.add_parser("show", help="print amplitudes; --out writes the raw file")
    _add_state_arguments(p_show)
    p_show.add_argument("--out", help="write the raw state file here")
    p_show.set_defaults(func=_cmd_state)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StateSpecError as exc:
        print(f"entcap: {exc}", file=sys.stderr)
        return EXIT_BAD_SPEC
    except RawStateError as exc:
        print(f"entcap: {exc}", file=sys.stderr)
        return EXIT_IO
    except UnsupportedShapeError as exc:
        print(f"entcap: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    except OSError as exc:
        print(f"entcap: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
