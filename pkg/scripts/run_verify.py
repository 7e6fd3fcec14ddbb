"""Run every invariant suite and print a compact summary; exit 1 on any failure."""

import sys
import time

from entkit.verify import SUITES, run_suite


def main():
    failed = 0
    for suite in SUITES:
        t0 = time.perf_counter()
        checks = run_suite(suite)
        bad = [c for c in checks if not c.passed]
        for c in bad:
            print(f"  FAIL {c.name}: {c.detail}")
        print(f"{suite:>14}: {len(checks) - len(bad)}/{len(checks)} passed ({time.perf_counter() - t0:.1f}s)")
        failed += len(bad)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
