#!/usr/bin/env python3
"""Render figures from simulation CSV logs.

Consumes only the published CSV contract (24 columns, `#` summary lines at
the end); no import of the simulator package.  Four figure kinds:

  curvature     reference-path curvature vs arclength (d psi_r / d s)
  trajectories  reference curve, vehicle track and target-point track
  errors        e_p, e_q and xi vs time
  controls      commanded forward speed u and steering curvature v vs time

Usage: render.py --kind errors --in run.csv --out errors.png
Exit codes: 0 success, 1 usage error / malformed CSV.
"""

from __future__ import annotations

import argparse
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

EXPECTED_COLUMNS = (
    "t", "x", "y", "psi", "v", "p", "q", "theta",
    "p_r", "q_r", "psi_r", "s", "e_p", "e_q", "xi",
    "y1", "y2", "u1", "u2", "u", "omega", "v_d", "V", "Vdot",
)

KINDS = ("curvature", "trajectories", "errors", "controls")


class LogFormatError(ValueError):
    pass


def load_log(path: str) -> dict[str, np.ndarray]:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        missing = [c for c in EXPECTED_COLUMNS if c not in header]
        if missing:
            raise LogFormatError(f"missing columns: {', '.join(missing)}")
        rows = []
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            vals = line.split(",")
            if len(vals) != len(header):
                raise LogFormatError("row width does not match header")
            try:
                rows.append([float(v) for v in vals])
            except ValueError as exc:
                raise LogFormatError(f"non-numeric value: {exc}") from None
    if not rows:
        raise LogFormatError("no data rows")
    arr = np.asarray(rows)
    return {name: arr[:, i] for i, name in enumerate(header)}


def render(kind: str, log: dict[str, np.ndarray], out: str) -> None:
    fig, ax = plt.subplots(figsize=(8.0, 5.0))
    if kind == "curvature":
        kappa = np.gradient(log["psi_r"], log["s"])
        ax.plot(log["s"], kappa, color="tab:blue")
        ax.set_xlabel("arclength s [m]")
        ax.set_ylabel("curvature [1/m]")
        ax.set_title("Reference path curvature")
    elif kind == "trajectories":
        ax.plot(log["p_r"], log["q_r"], "k-", label="reference")
        ax.plot(log["x"], log["y"], "b--", label="vehicle")
        ax.plot(log["p"], log["q"], "r:", label="target point")
        ax.set_xlabel("x [m]")
        ax.set_ylabel("y [m]")
        ax.axis("equal")
        ax.legend()
        ax.set_title("Trajectories")
    elif kind == "errors":
        ax.plot(log["t"], log["e_p"], label="e_p [m]")
        ax.plot(log["t"], log["e_q"], label="e_q [m]")
        ax.plot(log["t"], log["xi"], label="xi [rad]")
        ax.axhline(0.0, color="k", lw=0.5)
        ax.set_xlabel("t [s]")
        ax.legend()
        ax.set_title("Tracking errors")
    elif kind == "controls":
        ax2 = ax.twinx()
        ax.plot(log["t"], log["u"], color="tab:blue", label="u [m/s]")
        ax2.plot(log["t"], log["v"], color="tab:red", label="v [1/m]")
        ax.set_xlabel("t [s]")
        ax.set_ylabel("reference speed u [m/s]", color="tab:blue")
        ax2.set_ylabel("steering curvature v [1/m]", color="tab:red")
        ax.set_title("Controls")
    else:
        raise ValueError(f"unknown kind {kind!r}")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kind", required=True, choices=KINDS)
    ap.add_argument("--in", dest="infile", required=True)
    ap.add_argument("--out", required=True)
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        log = load_log(args.infile)
    except (OSError, LogFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    render(args.kind, log, args.out)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
