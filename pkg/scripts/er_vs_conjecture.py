"""Compare unrestricted numerical RE with coF along every n=3,4 two-component segment.

Usage: python3 scripts/er_vs_conjecture.py [POINTS] [STARTS]
"""

import sys

import numpy as np

from entkit.relent import ErConfig, co_epsilon_at, co_f_at, er_numeric
from entkit.state_zoo import make_dicke_mixture, two_component
from entkit.verify import SANDWICH_FAMILIES


def main(points=11, starts=2):
    cfg = ErConfig(starts=starts)
    print("n,k1,k2,s,co_epsilon,er_numeric,co_f,er_minus_co_f")
    for n, k1, k2 in SANDWICH_FAMILIES:
        for s in np.linspace(0, 1, points):
            er = er_numeric(make_dicke_mixture(two_component(n, k1, k2, s)), cfg).value
            lo, hi = float(co_epsilon_at(n, k1, k2, s)), float(co_f_at(n, k1, k2, s))
            print(f"{n},{k1},{k2},{s:.4g},{lo:.7g},{er:.7g},{hi:.7g},{er - hi:.2e}")


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:3]))
