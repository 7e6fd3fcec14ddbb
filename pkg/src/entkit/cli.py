"""``entkit`` command line: gme, re, figure and verify."""

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from entkit.figures import FIGURES, figure_panels, to_csv
from entkit.geometric import GmeConfig, e_measures
from entkit.relent import ErConfig, co_f_at, er_lower_bound, er_numeric, f_upper
from entkit.state_zoo import dicke_weights, from_descriptor
from entkit.tensor_core import PureState
from entkit.verify import SUITES, run_suite

EXIT_OK, EXIT_FAILED, EXIT_INVALID = 0, 1, 2


class InvalidInput(Exception):
    pass


@dataclass
class RunSpec:
    command: str
    state: dict = None
    out: str = None
    grid: int = None
    seed: int = 0
    starts: int = None
    tol: float = None
    numeric: bool = True
    numeric_points: int = 11
    restrict: str = "none"
    fig: str = None
    suite: str = None

    def gme_config(self):
        kw = {"seed": self.seed}
        if self.starts is not None:
            kw["starts"] = self.starts
        if self.tol is not None:
            kw["tol"] = self.tol
        return GmeConfig(**kw)

    def er_config(self, default_starts=None):
        kw = {"seed": self.seed, "restrict": self.restrict}
        starts = self.starts if self.starts is not None else default_starts
        if starts is not None:
            kw["starts"] = starts
        if self.tol is not None:
            kw["tol"] = self.tol
        return ErConfig(**kw)


def _load_state(spec):
    if spec.state is None:
        raise InvalidInput("--state is required")
    try:
        return from_descriptor(spec.state)
    except (ValueError, TypeError) as exc:
        raise InvalidInput(str(exc)) from None


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_gme(spec):
    state = _load_state(spec)
    if not isinstance(state, PureState):
        raise InvalidInput("gme needs a pure-state descriptor")
    res = e_measures(state, spec.gme_config())
    header = ["lambda_max", "e_sin2", "e_log2", "converged", "sweeps"]
    rows = [(res.lambda_max, res.e_sin2, res.e_log2, res.converged, res.sweeps_used)]
    _emit(to_csv(header, rows), spec.out)
    return EXIT_OK


def _symmetric_bounds(rho):
    """``(F, coF)`` for Dicke-diagonal inputs; coF only along two-component segments."""
    probs = dicke_weights(rho)
    if probs is None:
        return None, None
    n = rho.structure.n_parties
    f = f_upper(n, probs)
    support = [k for k, p in enumerate(probs) if p > 1e-14]
    if len(support) == 1:
        return f, f
    if len(support) == 2:
        k1, k2 = support
        return f, float(co_f_at(n, k1, k2, probs[k1]))
    return f, None


def cmd_re(spec):
    state = _load_state(spec)
    pure = isinstance(state, PureState)
    rho = state.density() if pure else state
    er_lower = er_lower_bound(state, spec.gme_config()) if pure else None
    f, co_f = _symmetric_bounds(rho)
    er = er_numeric(rho, spec.er_config()).value if spec.numeric else None
    header = ["er_lower", "f_upper", "co_f", "er_numeric"]
    _emit(to_csv(header, [(er_lower, f, co_f, er)]), spec.out)
    return EXIT_OK


def cmd_figure(spec):
    if spec.fig not in FIGURES:
        raise InvalidInput(f"unknown figure {spec.fig!r}; expected one of {', '.join(FIGURES)}")
    panels = figure_panels(
        spec.fig,
        grid=spec.grid or 101,
        numeric=spec.numeric,
        numeric_points=spec.numeric_points,
        er_cfg=spec.er_config(),
        gme_cfg=spec.gme_config(),
    )
    if spec.out is None:
        chunks = [f"# {name}\n{to_csv(*panel)}" for name, panel in panels.items()]
        sys.stdout.write("\n".join(chunks))
        return EXIT_OK
    outdir = Path(spec.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, panel in panels.items():
        (outdir / f"{name}.csv").write_text(to_csv(*panel))
    return EXIT_OK


def cmd_verify(spec):
    if spec.suite not in SUITES:
        raise InvalidInput(f"unknown suite {spec.suite!r}; expected one of {', '.join(SUITES)}")
    er_cfg = spec.er_config(default_starts=2) if spec.suite == "sandwich" else None
    checks = run_suite(spec.suite, er_cfg)
    failed = 0
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}")
        failed += not c.passed
    print(f"{spec.suite}: {len(checks) - failed}/{len(checks)} passed")
    return EXIT_FAILED if failed else EXIT_OK


COMMANDS = {"gme": cmd_gme, "re": cmd_re, "figure": cmd_figure, "verify": cmd_verify}


def build_parser():
    parser = argparse.ArgumentParser(prog="entkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output file (gme, re) or directory (figure)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--starts", type=int)
        p.add_argument("--tol", type=float)
        p.add_argument("--restrict", choices=["none", "dicke"], default="none")

    p = sub.add_parser("gme", help="entanglement eigenvalue and geometric measures")
    p.add_argument("--state", required=True, help="JSON state descriptor")
    common(p)

    p = sub.add_parser("re", help="relative-entropy bounds and numerics")
    p.add_argument("--state", required=True, help="JSON state descriptor")
    p.add_argument("--no-numeric", dest="numeric", action="store_false")
    common(p)

    p = sub.add_parser("figure", help="write the data behind one figure")
    p.add_argument("fig_pos", nargs="?", metavar="ID")
    p.add_argument("--fig", choices=FIGURES)
    p.add_argument("--grid", type=int)
    p.add_argument("--numeric-points", type=int, default=11)
    p.add_argument("--no-numeric", dest="numeric", action="store_false")
    common(p)

    p = sub.add_parser("verify", help="run an invariant suite")
    p.add_argument("suite", choices=SUITES)
    common(p)
    return parser


def parse_spec(argv):
    args = build_parser().parse_args(argv)
    state = None
    if getattr(args, "state", None) is not None:
        try:
            state = json.loads(args.state)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"--state is not valid JSON: {exc}") from None
        if not isinstance(state, dict):
            raise InvalidInput("--state must be a JSON object")
    grid = getattr(args, "grid", None)
    if grid is not None and grid < 2:
        raise InvalidInput("--grid must be at least 2")
    return RunSpec(
        command=args.command,
        state=state,
        out=args.out,
        grid=grid,
        seed=args.seed,
        starts=args.starts,
        tol=args.tol,
        numeric=getattr(args, "numeric", True),
        numeric_points=getattr(args, "numeric_points", 11),
        restrict=args.restrict,
        fig=getattr(args, "fig", None) or getattr(args, "fig_pos", None),
        suite=getattr(args, "suite", None),
    )


def main(argv=None):
    try:
        spec = parse_spec(argv)
        return COMMANDS[spec.command](spec)
    except SystemExit as exc:
        # argparse reports usage errors with status 2
        return int(exc.code or 0)
    except (InvalidInput, ValueError) as exc:
        print(f"entkit: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
