#!/usr/bin/env python3
"""Plot a sweep CSV produced by the dicke CLI.

Reads the '#'-prefixed metadata for labeling, plots the exact steady-state
curve and the semiclassical limit against the sweep axis.
"""

import argparse
import csv


def load(path):
    meta = {}
    header = None
    rows = []
    with open(path, newline="") as f:
        for line in f:
            line = line.rstrip("\n")
            if line.startswith("##") or not line.strip():
                continue
            if line.startswith("# "):
                if " = " in line:
                    key, value = line[2:].split(" = ", 1)
                    meta[key] = value
                continue
            cells = next(csv.reader([line]))
            if header is None:
                header = cells
            else:
                rows.append([float(c) for c in cells])
    return meta, header, rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv_path")
    parser.add_argument("--out", default=None, help="output image (default: show)")
    args = parser.parse_args()

    meta, header, rows = load(args.csv_path)
    if not rows:
        raise SystemExit("no data rows in " + args.csv_path)

    import matplotlib

    if args.out:
        matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    col = {name: i for i, name in enumerate(header)}
    x = [r[col["axis_value"]] for r in rows]

    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    if "sz_scaled" in col:
        ax.plot(x, [r[col["sz_scaled"]] for r in rows], "o-", ms=3,
                label=f"exact, N = {meta.get('n_atoms', '?')} ({meta.get('mode', '?')})")
    if "sz_scaled_semiclassical" in col:
        ax.plot(x, [r[col["sz_scaled_semiclassical"]] for r in rows], "k--",
                label="semiclassical limit")
    ax.set_xlabel(meta.get("sweep_axis", "axis"))
    ax.set_ylabel(r"$\langle S^z\rangle \,/\, (N/2)$")
    ax.legend(frameon=False)
    fig.tight_layout()

    if args.out:
        fig.savefig(args.out, dpi=160)
        print("wrote", args.out)
    else:
        plt.show()


if __name__ == "__main__":
    main()
