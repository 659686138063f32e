"""Command-line front end.

Exit status: 0 on success, 2 for usage errors, 3 when an input file cannot be
decoded (bad PGM/PNG, invalid interval table, image smaller than 2x2).
"""

import argparse
import json
import logging
import os
import sys

from . import __version__
from .analysis import (
    SWEEP_PARAMS,
    SweepSpec,
    change_mask,
    edge_concentration,
    edges_of,
    run_sweep,
    sweep_distances,
)
from .errors import InputFormatError, UnsupportedImageError, UsageError
from .imageio import read_image, write_image
from .render import RenderParams, render, write_trace
from .tones import default_table, load_table

log = logging.getLogger("labyrinth")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3

_PARAM_ALIASES = {"t": "t", "v_thresh": "v_thresh", "v-threshold": "v_thresh", "v_threshold": "v_thresh"}


def build_parser():
    p = argparse.ArgumentParser(
        prog="labyrinth",
        description="Labyrinthine tiling filter for gray images (PGM or PNG).",
    )
    p.add_argument("--input", required=True, metavar="PATH")
    p.add_argument("--output", required=True, metavar="PATH",
                   help="output image; the extension (.pgm/.png) selects the codec")
    p.add_argument("--t", type=float, default=0.12, metavar="FLOAT",
                   help="mean-deviation threshold (default %(default)s)")
    p.add_argument("--v-threshold", dest="v_thresh", type=float, default=0.50, metavar="FLOAT",
                   help="variance-protection threshold (default %(default)s)")
    p.add_argument("--passes", type=int, default=1, metavar="INT")
    p.add_argument("--seed", type=int, default=0, metavar="INT")
    p.add_argument("--max-attempts", type=int, default=100, metavar="INT")
    p.add_argument("--eps-mean", type=float, default=1.0, metavar="FLOAT",
                   help="lower clamp on the local mean used as a divisor (default %(default)s)")
    p.add_argument("--intervals", metavar="PATH", help="JSON tone interval table")
    p.add_argument("--trace", metavar="PATH", help="write the per-pixel decision trace (CSV)")
    p.add_argument("--sweep", metavar="PARAM=v1,v2,...",
                   help="render once per value of t or v_thresh; outputs get a _<value> suffix")
    p.add_argument("--metrics", metavar="PATH", help="write run metrics and effective config as JSON")
    p.add_argument("--edge-set", metavar="PATH|auto",
                   help="edge pixels for edge concentration: a mask image (nonzero = edge) "
                        "or 'auto' for the tone discontinuities of the input")
    p.add_argument("--edge-radius", type=int, default=1, metavar="INT")
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def parse_sweep(text):
    name, sep, values = text.partition("=")
    if not sep:
        raise UsageError(f"--sweep expects PARAM=v1,v2,..., got {text!r}")
    param = _PARAM_ALIASES.get(name.strip())
    if param is None:
        raise UsageError(f"--sweep parameter must be one of {SWEEP_PARAMS}, got {name!r}")
    try:
        vals = tuple(float(v) for v in values.split(","))
    except ValueError:
        raise UsageError(f"--sweep values must be numbers, got {values!r}") from None
    return param, vals


def suffixed(path, value):
    stem, ext = os.path.splitext(path)
    return f"{stem}_{value:g}{ext}"


def run_metrics(image, out, traces, edges, radius):
    passes = []
    for trace in traces:
        entry = {
            "pass": trace.pass_index,
            "outcomes": trace.counts(),
            "changed_pixels": int((trace.old != trace.new).sum()),
        }
        if edges is not None:
            near, far = edge_concentration(trace, edges, radius)
            entry["edge_concentration"] = {"radius": radius, "near_fraction": near, "far_fraction": far}
        passes.append(entry)
    return {
        "changed_pixels": int(change_mask(image, out).sum()),
        "passes": passes,
    }


def _load_edges(spec, image):
    if spec is None:
        return None
    if spec == "auto":
        edges = edges_of(image)
    else:
        mask = read_image(spec)
        if mask.shape != image.shape:
            raise UsageError(f"edge mask {mask.shape} does not match input {image.shape}")
        edges = mask != 0
    if not edges.any():
        raise UsageError("edge set is empty")
    return edges


def _write_json(path, data):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")


def run(args):
    table = load_table(args.intervals) if args.intervals else default_table()
    params = RenderParams(
        t=args.t,
        v_thresh=args.v_thresh,
        max_attempts=args.max_attempts,
        passes=args.passes,
        seed=args.seed,
        table=table,
        eps_mean=args.eps_mean,
    )
    image = read_image(args.input)
    height, width = image.shape
    log.info("read %s (%dx%d)", args.input, width, height)
    edges = _load_edges(args.edge_set, image)

    if args.sweep:
        param, values = parse_sweep(args.sweep)
        spec = SweepSpec(param, values, params)
        cells = run_sweep(image, spec)
        cell_metrics = []
        for cell in cells:
            out_path = suffixed(args.output, cell.value)
            write_image(out_path, cell.image)
            if args.trace:
                with open(suffixed(args.trace, cell.value), "w", encoding="utf-8", newline="") as fh:
                    write_trace(cell.traces, fh)
            entry = {"value": cell.value, "output": out_path}
            entry.update(run_metrics(image, cell.image, cell.traces, edges, args.edge_radius))
            cell_metrics.append(entry)
            log.info("%s=%g -> %s", param, cell.value, out_path)
        if args.metrics:
            distances = [
                {"a": a, "b": b, "mask_distance": d}
                for (a, b), d in sweep_distances(image, cells).items()
            ]
            _write_json(args.metrics, {
                "config": params.as_dict(),
                "input": {"path": args.input, "width": width, "height": height},
                "sweep": {"param": param, "values": list(spec.values)},
                "cells": cell_metrics,
                "mask_distances": distances,
            })
        return EXIT_OK

    out, traces = render(image, params)
    write_image(args.output, out)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8", newline="") as fh:
            write_trace(traces, fh)
    if args.metrics:
        data = {
            "config": params.as_dict(),
            "input": {"path": args.input, "width": width, "height": height},
        }
        data.update(run_metrics(image, out, traces, edges, args.edge_radius))
        _write_json(args.metrics, data)
    log.info("wrote %s", args.output)
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(name)s: %(message)s",
    )
    try:
        return run(args)
    except (InputFormatError, UnsupportedImageError) as exc:
        print(f"labyrinth: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (UsageError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"labyrinth: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
