"""Regenerate the CSV data behind every figure into one directory.

Usage: python3 scripts/make_figures.py [OUTDIR] [--quick]

``--quick`` skips the numerical relative-entropy dots and coarsens the grid.
"""

import sys
import time
from pathlib import Path

from entkit.figures import FIGURES, figure_panels, to_csv
from entkit.relent import ErConfig


def main(argv):
    quick = "--quick" in argv
    args = [a for a in argv if not a.startswith("--")]
    outdir = Path(args[0] if args else "figures")
    outdir.mkdir(parents=True, exist_ok=True)
    for fig in FIGURES:
        t0 = time.perf_counter()
        panels = figure_panels(
            fig,
            grid=21 if quick else 101,
            numeric=not quick,
            er_cfg=ErConfig(starts=4),
        )
        for name, panel in panels.items():
            (outdir / f"{name}.csv").write_text(to_csv(*panel))
        print(f"{fig}: {', '.join(panels)} ({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main(sys.argv[1:])
