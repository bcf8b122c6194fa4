#!/usr/bin/env python3
"""Plot objective-gap traces produced by `vropt run`.

Usage: plot_traces.py OUT_DIR [--x passes|oracle|seconds] [--save plot.png]
"""

import argparse
import csv
import pathlib
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

X_COLUMNS = {"passes": "effective_passes", "oracle": "oracle_calls", "seconds": "elapsed_s"}


def load_trace(path):
    xs, gaps = {k: [] for k in X_COLUMNS.values()}, []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            gap = float(row["gap"])
            if gap != gap:  # no reference optimum recorded
                continue
            gaps.append(max(gap, 1e-16))
            for col in xs:
                xs[col].append(float(row[col]))
    return xs, gaps


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out_dir", type=pathlib.Path)
    ap.add_argument("--x", choices=sorted(X_COLUMNS), default="passes")
    ap.add_argument("--save", type=pathlib.Path, default=None)
    args = ap.parse_args()

    traces = sorted(p for p in args.out_dir.glob("*.csv") if p.name != "summary.csv")
    if not traces:
        sys.exit(f"no trace CSVs under {args.out_dir}")

    col = X_COLUMNS[args.x]
    fig, ax = plt.subplots(figsize=(7, 5))
    for path in traces:
        xs, gaps = load_trace(path)
        if gaps:
            ax.semilogy(xs[col], gaps, label=path.stem, linewidth=1.4)
    ax.set_xlabel(args.x)
    ax.set_ylabel("objective gap")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    target = args.save or args.out_dir / f"gap_vs_{args.x}.png"
    fig.savefig(target, dpi=150)
    print(f"wrote {target}")


if __name__ == "__main__":
    main()
