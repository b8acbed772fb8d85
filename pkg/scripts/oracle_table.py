"""Brute-force EIP values next to the daisy values, with minimizer counts.

    python3 scripts/oracle_table.py
"""
import time

from eip.daisy import eip_value
from eip.oracle import BUDGET, eip_bruteforce


def main():
    print(f"{'d':>2} {'n':>3} {'oracle':>7} {'daisy':>6} {'#min':>5} {'animals':>8}  disconnected check")
    t0 = time.time()
    for d, n_max in sorted(BUDGET.items()):
        for n in range(1, n_max + 1):
            rep = eip_bruteforce(n, d)
            mark = "" if rep.eip == eip_value(n, d) else "  MISMATCH"
            print(f"{d:>2} {n:>3} {rep.eip:>7} {eip_value(n, d):>6} {rep.count:>5} {rep.animals:>8}"
                  f"  {rep.disconnected_check}{mark}")
    print(f"total {time.time() - t0:.1f}s")


if __name__ == "__main__":
    main()
