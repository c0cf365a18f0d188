"""Capacity-vs-(x, mu) heatmap from a sweep CSV (columns x,phi,pair,value[,mu])."""

import argparse
import csv
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

REQUIRED_COLUMNS = ("x", "phi", "pair", "value")


class SweepFormatError(ValueError):
    """The CSV is missing columns or its (x, phi) grid is incomplete."""


@dataclass(frozen=True)
class SweepTable:
    """Parsed sweep rows with a validated complete (x, phi) lattice per group.

    ``values[imu, ix]`` is the maximum protocol value over phi and pairs at
    ``(mus[imu], xs[ix])``; ``mus`` is ``(None,)`` when the CSV has no mu
    column.
    """

    xs: tuple
    mus: tuple
    values: np.ndarray
    n_rows: int


def load_sweep_table(path):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            rows = list(reader)
    except OSError as exc:
        raise SweepFormatError(f"cannot read {path}: {exc}") from exc
    if header is None:
        raise SweepFormatError(f"{path} is empty")
    header = [h.strip() for h in header]
    has_mu = header == list(REQUIRED_COLUMNS) + ["mu"]
    if not has_mu and header != list(REQUIRED_COLUMNS):
        raise SweepFormatError(
            f"{path} must have header x,phi,pair,value with optional trailing mu, got {header}"
        )

    # string-keyed lattice bookkeeping sidesteps float-equality pitfalls
    x_keys, phi_keys, mu_keys = [], [], []
    seen_x, seen_phi, seen_mu = set(), set(), set()
    cells = {}
    for row in rows:
        if len(row) != len(header):
            raise SweepFormatError(f"{path}: row {row!r} has {len(row)} fields")
        x_s, phi_s, pair, value_s = row[0], row[1], row[2], row[3]
        mu_s = row[4] if has_mu else ""
        try:
            value = float(value_s)
            float(x_s), float(phi_s)
            if has_mu:
                float(mu_s)
        except ValueError as exc:
            raise SweepFormatError(f"{path}: non-numeric field in row {row!r}") from exc
        if x_s not in seen_x:
            seen_x.add(x_s)
            x_keys.append(x_s)
        if phi_s not in seen_phi:
            seen_phi.add(phi_s)
            phi_keys.append(phi_s)
        if mu_s not in seen_mu:
            seen_mu.add(mu_s)
            mu_keys.append(mu_s)
        key = (mu_s, pair, x_s, phi_s)
        if key in cells:
            raise SweepFormatError(f"{path}: duplicate grid point {key}")
        cells[key] = value
    if not cells:
        raise SweepFormatError(f"{path} has no data rows")

    pairs = sorted({pair for _, pair, _, _ in cells})
    for mu_s in mu_keys:
        for pair in pairs:
            for x_s in x_keys:
                for phi_s in phi_keys:
                    if (mu_s, pair, x_s, phi_s) not in cells:
                        raise SweepFormatError(
                            f"{path}: incomplete grid, missing x={x_s} phi={phi_s} "
                            f"pair={pair}" + (f" mu={mu_s}" if mu_s else "")
                        )

    x_order = sorted(range(len(x_keys)), key=lambda i: float(x_keys[i]))
    mu_order = (
        sorted(range(len(mu_keys)), key=lambda i: float(mu_keys[i])) if has_mu else [0]
    )
    xs = tuple(float(x_keys[i]) for i in x_order)
    mus = tuple(float(mu_keys[i]) for i in mu_order) if has_mu else (None,)
    values = np.full((len(mus), len(xs)), -np.inf)
    for (mu_s, pair, x_s, phi_s), value in cells.items():
        imu = mu_order.index(mu_keys.index(mu_s)) if has_mu else 0
        ix = x_order.index(x_keys.index(x_s))
        values[imu, ix] = max(values[imu, ix], value)
    return SweepTable(xs=xs, mus=mus, values=values, n_rows=len(rows))


def _edges(centers):
    centers = np.asarray(centers, dtype=float)
    if centers.size == 1:
        return np.array([centers[0] - 0.5, centers[0] + 0.5])
    mids = (centers[1:] + centers[:-1]) / 2.0
    first = centers[0] - (mids[0] - centers[0])
    last = centers[-1] + (centers[-1] - mids[-1])
    return np.concatenate([[first], mids, [last]])


def plot_sweep(csv_path, out_path, figsize=(8.0, 6.0), dpi=100):
    """Render the phi-collapsed value surface over (x, mu) and save it."""
    table = load_sweep_table(csv_path)
    mus = [0.0] if table.mus == (None,) else list(table.mus)
    fig, ax = plt.subplots(figsize=figsize, dpi=dpi)
    mesh = ax.pcolormesh(
        _edges(table.xs), _edges(mus), table.values, cmap="viridis", shading="flat"
    )
    ax.set_xlabel("measurement parameter x (dimensionless)")
    ax.set_ylabel("state parameter mu (dimensionless)")
    ax.set_title("unassisted protocol value over (x, mu), max over phi and pairs")
    fig.colorbar(mesh, ax=ax, label="value (ebits)")
    fig.savefig(out_path, dpi=dpi)
    plt.close(fig)
    return table


def _parse_figsize(text):
    try:
        w, h = text.lower().split("x")
        return float(w), float(h)
    except ValueError:
        raise argparse.ArgumentTypeError(f"figsize must look like 8x6, got {text!r}") from None


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="plot_sweep", description="Heatmap of a sweep CSV over (x, mu)."
    )
    parser.add_argument("csv", help="sweep CSV with columns x,phi,pair,value[,mu]")
    parser.add_argument("out", help="output image path (format from extension)")
    parser.add_argument("--figsize", type=_parse_figsize, default=(8.0, 6.0),
                        help="inches, WxH (default 8x6)")
    parser.add_argument("--dpi", type=int, default=100, help="default 100")
    args = parser.parse_args(argv)
    try:
        table = plot_sweep(args.csv, args.out, figsize=args.figsize, dpi=args.dpi)
    except SweepFormatError as exc:
        print(f"plot_sweep: {exc}", file=sys.stderr)
        return 1
    print(f"plot_sweep: {args.out} ({len(table.mus)} mu x {len(table.xs)} x points)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
