#!/usr/bin/env python3
"""Render the two standard figures from a simulator summary.csv.

Latency figure: mean latency vs static split size, one curve per client
population, the minimum of each curve marked. Provisioning figure:
containers per client vs population, one curve per local-time fraction,
with optional horizontal reference lines.

Reads only the documented summary.csv schema; never modifies inputs.
Writes the requested image plus an SVG twin next to it.
"""

import argparse
import csv
import math
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

EXPECTED_HEADER = ["scenario", "N", "C", "L_or_f", "mean_s", "ci_lo",
                   "ci_hi", "p95_s", "p99_s", "denial", "bytes", "unstable"]


class SchemaError(ValueError):
    pass


def read_summary(path):
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}")
    if not rows or rows[0] != EXPECTED_HEADER:
        raise SchemaError(
            f"{path}: expected header {','.join(EXPECTED_HEADER)}")
    parsed = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(EXPECTED_HEADER):
            raise SchemaError(f"{path}:{lineno}: wrong column count")
        try:
            parsed.append({
                "scenario": row[0],
                "N": int(row[1]),
                "C": int(row[2]),
                "L_or_f": float(row[3]),
                "mean_s": float(row[4]),
                "unstable": int(row[11]),
            })
        except ValueError as exc:
            raise SchemaError(f"{path}:{lineno}: {exc}")
    return parsed


def plot_latency(rows, ax):
    """One latency-vs-split curve per population, minima marked."""
    populations = sorted({r["N"] for r in rows})
    drew = 0
    for n in populations:
        pts = sorted((r["L_or_f"], r["mean_s"]) for r in rows
                     if r["N"] == n and not r["unstable"]
                     and not math.isnan(r["mean_s"]))
        if not pts:
            continue
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        (line,) = ax.plot(xs, ys, marker=".", markersize=4,
                          label=f"N = {n}")
        best = min(range(len(ys)), key=ys.__getitem__)
        ax.plot(xs[best], ys[best], marker="v", markersize=10,
                color=line.get_color(), zorder=5)
        ax.annotate(f"L={int(xs[best])}", (xs[best], ys[best]),
                    textcoords="offset points", xytext=(0, 9),
                    ha="center", fontsize=8, color=line.get_color())
        drew += 1
    if drew == 0:
        raise SchemaError("no stable latency points to plot")
    ax.set_xlabel("clients with a dedicated local-state container (L)")
    ax.set_ylabel("mean latency (s)")
    ax.legend()
    ax.grid(alpha=0.3)
    return drew


def plot_provisioning(rows, ax, refs=()):
    """Containers per client vs population, one curve per fraction."""
    fractions = sorted({r["L_or_f"] for r in rows})
    drew = 0
    for f in fractions:
        pts = sorted((r["N"], r["C"] / r["N"]) for r in rows
                     if r["L_or_f"] == f and not r["unstable"])
        if not pts:
            continue
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o",
                markersize=4, label=f"local fraction {f:g}")
        drew += 1
    if drew == 0:
        raise SchemaError("no provisioning points to plot")
    for ref in refs:
        ax.axhline(ref, linestyle="--", linewidth=0.8, color="gray")
        ax.annotate(f"{ref:g}", (ax.get_xlim()[1], ref), fontsize=7,
                    ha="right", va="bottom", color="gray")
    ax.set_xlabel("clients (N)")
    ax.set_ylabel("containers per client (C/N)")
    ax.legend()
    ax.grid(alpha=0.3)
    return drew


def render(figure, in_path, out_path, refs=()):
    rows = read_summary(in_path)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    try:
        if figure == "latency":
            plot_latency(rows, ax)
        else:
            plot_provisioning(rows, ax, refs)
        fig.tight_layout()
        out_dir = os.path.dirname(os.path.abspath(out_path))
        os.makedirs(out_dir, exist_ok=True)
        fig.savefig(out_path)
        svg_path = os.path.splitext(out_path)[0] + ".svg"
        if svg_path != out_path:
            fig.savefig(svg_path)
        return out_path, svg_path
    finally:
        plt.close(fig)


def parse_refs(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad reference list: {text!r}")


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="Render latency or provisioning figures from a "
                    "summary.csv produced by the simulator.")
    parser.add_argument("--figure", required=True,
                        choices=["latency", "provisioning"])
    parser.add_argument("--in", dest="in_path", required=True,
                        metavar="summary.csv")
    parser.add_argument("--out", dest="out_path", required=True,
                        metavar="fig.png")
    parser.add_argument("--refs", type=parse_refs, default=(),
                        help="comma-separated horizontal reference values "
                             "(provisioning figure only)")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        written = render(args.figure, args.in_path, args.out_path, args.refs)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(" ".join(written))
    return 0


if __name__ == "__main__":
    sys.exit(main())
