"""Fluctuation scans of the extremal slab family and their log-log fits.

    python3 scripts/scaling_law.py --out results/
"""
import argparse
from dataclasses import replace
from pathlib import Path

from eip.bounds import scaling_exponent
from eip.experiments import ScanConfig, fit_exponent, rows_to_csv

SCANS = [ScanConfig(2, 100, 10000, 100), ScanConfig(3, 50, 1000, 50)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for cfg in SCANS:
        d = cfg.d
        rows = replace(cfg, threads=args.threads).run()
        (args.out / f"fluctuation_d{d}.csv").write_text(rows_to_csv(rows))
        fit = fit_exponent(rows)
        pred = scaling_exponent(d)
        print(f"d={d}: slope {fit.slope:.4f} (predicted {pred} = {float(pred):.4f}), "
              f"constant {fit.constant:.3f}, max log residual {fit.residual:.3f}")


if __name__ == "__main__":
    main()
