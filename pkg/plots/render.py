#!/usr/bin/env python3
"""Render murmur-lab CSV outputs as figure images.

Reads the CSV files emitted by the `murmur` CLI (a '#'-prefixed
metadata block, then `x,value_re,value_im[,overlay_re,overlay_im]`
rows) and draws one PNG per input: the value series as scatter points
(blue for the + family, red for -), the overlay series, where present,
as a solid curve (green for +, orange for -).  The plotted component
follows the metadata: minus-parity window sums are purely imaginary and
are drawn as their imaginary part.

This renderer contains no numerical logic; every plotted number comes
from the CSV.

Usage:
    plots/render.py --in PATH [--in PATH ...] --out PATH

With one input, --out is the image path; with several, --out is a
directory and each image is named <experiment>.png.
"""

from __future__ import annotations

import argparse
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


class RenderError(Exception):
    pass


def parse_csv(path):
    """Read metadata, header, and float rows; errors carry line numbers."""
    metadata = {}
    header = None
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, sep, val = line[1:].strip().partition("=")
                if not sep:
                    raise RenderError(f"{path}:{lineno}: malformed metadata line")
                metadata[key.strip()] = val
            elif header is None:
                header = line.split(",")
            else:
                toks = line.split(",")
                if len(toks) != len(header):
                    raise RenderError(
                        f"{path}:{lineno}: expected {len(header)} columns, got {len(toks)}"
                    )
                try:
                    rows.append([float(t) for t in toks])
                except ValueError as exc:
                    raise RenderError(f"{path}:{lineno}: non-numeric value: {exc}")
    if not metadata:
        raise RenderError(f"{path}: missing '#' metadata block")
    if header is None or not rows:
        raise RenderError(f"{path}: no data rows")
    if header[:3] != ["x", "value_re", "value_im"]:
        raise RenderError(f"{path}: unexpected header {header!r}")
    if len(header) not in (3, 5):
        raise RenderError(f"{path}: unexpected column count {len(header)}")
    cols = list(zip(*rows))
    return metadata, header, cols


def series_count(header) -> int:
    """Number of drawable series: values, plus the overlay when present."""
    return 2 if len(header) == 5 else 1


def render(in_path: str, out_path: str) -> dict:
    """Draw one CSV to one PNG; returns a small summary dict."""
    metadata, header, cols = parse_csv(in_path)
    minus = metadata.get("parity") == "-1"
    component = metadata.get("plot_component", "real")
    pick = (lambda re, im: im) if component == "imag" else (lambda re, im: re)

    x = cols[0]
    values = pick(cols[1], cols[2])
    fig, ax = plt.subplots(figsize=(9, 4.5))
    ax.scatter(
        x,
        values,
        s=4,
        color="red" if minus else "blue",
        label="empirical" + (" (imaginary part)" if component == "imag" else ""),
    )
    n_series = 1
    if len(header) == 5:
        overlay = pick(cols[3], cols[4])
        ax.plot(x, overlay, color="orange" if minus else "green", lw=1.6, label="analytic")
        n_series = 2

    name = metadata.get("experiment", "experiment")
    params = ", ".join(
        f"{k}={metadata[k]}" for k in ("X", "c", "delta", "variant") if k in metadata
    )
    ax.set_title(f"{name} ({params})")
    ax.set_xlabel("p" if name in ("fig4", "fig5") else "y")
    ax.set_ylabel("value")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.25)
    fig.tight_layout()
    fig.savefig(out_path, dpi=130)
    plt.close(fig)
    return {"experiment": name, "series": n_series, "component": component, "out": out_path}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--in", dest="inputs", action="append", required=True, help="input CSV path"
    )
    parser.add_argument("--out", required=True, help="output PNG path or directory")
    args = parser.parse_args(argv)

    outputs = []
    try:
        if len(args.inputs) == 1 and not os.path.isdir(args.out):
            outputs.append(render(args.inputs[0], args.out))
        else:
            os.makedirs(args.out, exist_ok=True)
            for path in args.inputs:
                meta, _, _ = parse_csv(path)
                name = meta.get("experiment", os.path.splitext(os.path.basename(path))[0])
                parity = "minus" if meta.get("parity") == "-1" else "plus"
                out = os.path.join(args.out, f"{name}_{parity}.png")
                outputs.append(render(path, out))
    except (RenderError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for summary in outputs:
        print(f"{summary['experiment']}: {summary['series']} series -> {summary['out']}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
