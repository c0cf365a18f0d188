"""Grouped-marker comparison chart from a report file (capacities vs measures)."""

import argparse
import json
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


class ReportFormatError(ValueError):
    """The report file cannot be parsed at all."""


def _valid_bracket(entry):
    return (
        isinstance(entry, dict)
        and isinstance(entry.get("lower"), (int, float))
        and isinstance(entry.get("upper"), (int, float))
    )


def load_report_rows(path):
    """Rows with all four quantities present; malformed rows are returned apart."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ReportFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ReportFormatError(f"{path} is not valid JSON: {exc}") from exc
    rows = doc.get("states")
    if not isinstance(rows, list):
        raise ReportFormatError(f"{path} must carry a 'states' list")
    good, bad = [], []
    for row in rows:
        ok = (
            isinstance(row, dict)
            and isinstance(row.get("state_name"), str)
            and _valid_bracket(row.get("c_assisted"))
            and _valid_bracket(row.get("c_unassisted"))
            and isinstance(row.get("ggm"), (int, float))
            and isinstance(row.get("gm"), (int, float))
        )
        (good if ok else bad).append(row)
    return good, bad


def _bracket_series(rows, key):
    lower = np.array([row[key]["lower"] for row in rows], dtype=float)
    upper = np.array([row[key]["upper"] for row in rows], dtype=float)
    mid = (lower + upper) / 2.0
    return mid, (upper - lower) / 2.0


def plot_report(report_path, out_path, figsize=(8.0, 6.0), dpi=100):
    """Draw assisted/unassisted brackets (error bars) plus GGM and GM markers.

    Returns the plotted state names; rows missing any of the four quantities
    are skipped with a warning on stderr.  With no plottable rows the image
    is not written and ReportFormatError is raised.
    """
    good, bad = load_report_rows(report_path)
    for row in bad:
        name = row.get("state_name", "<unnamed>") if isinstance(row, dict) else "<unnamed>"
        print(f"plot_report: skipping malformed row {name!r}", file=sys.stderr)
    if not good:
        raise ReportFormatError(f"{report_path} has no plottable rows")

    names = [row["state_name"] for row in good]
    positions = np.arange(len(good), dtype=float)
    fig, ax = plt.subplots(figsize=figsize, dpi=dpi)
    mid_a, err_a = _bracket_series(good, "c_assisted")
    mid_ua, err_ua = _bracket_series(good, "c_unassisted")
    ax.errorbar(
        positions - 0.24, mid_a, yerr=err_a, fmt="^", color="tab:blue",
        capsize=4, linestyle="none", label="assisted capacity (ebits)",
    )
    ax.errorbar(
        positions - 0.08, mid_ua, yerr=err_ua, fmt="s", color="tab:red",
        capsize=4, linestyle="none", label="unassisted capacity (ebits)",
    )
    ax.plot(
        positions + 0.08, [row["ggm"] for row in good], "h", color="#e377c2",
        markersize=9, linestyle="none", label="GGM",
    )
    ax.plot(
        positions + 0.24, [row["gm"] for row in good], "*", color="tab:green",
        markersize=11, linestyle="none", label="GM",
    )
    ax.set_xticks(positions)
    ax.set_xticklabels(names)
    ax.set_ylim(bottom=-0.05)
    ax.set_ylabel("ebits (capacities) / dimensionless (measures)")
    ax.set_title("capacities and entanglement measures")
    ax.legend(loc="lower left", fontsize=8)
    ax.grid(axis="y", alpha=0.3)
    fig.savefig(out_path, dpi=dpi)
    plt.close(fig)
    return names


def _parse_figsize(text):
    try:
        w, h = text.lower().split("x")
        return float(w), float(h)
    except ValueError:
        raise argparse.ArgumentTypeError(f"figsize must look like 8x6, got {text!r}") from None


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="plot_report", description="Comparison chart from a report file."
    )
    parser.add_argument("report", help="report JSON written by the capacity/measure CLI")
    parser.add_argument("out", help="output image path (format from extension)")
    parser.add_argument("--figsize", type=_parse_figsize, default=(8.0, 6.0),
                        help="inches, WxH (default 8x6)")
    parser.add_argument("--dpi", type=int, default=100, help="default 100")
    args = parser.parse_args(argv)
    try:
        names = plot_report(args.report, args.out, figsize=args.figsize, dpi=args.dpi)
    except ReportFormatError as exc:
        print(f"plot_report: {exc}", file=sys.stderr)
        return 1
    print(f"plot_report: {args.out} ({len(names)} states)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
