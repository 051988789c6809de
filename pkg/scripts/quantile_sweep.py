"""S_Geom of a pure-noise column against the radius quantile and sample size.

Prints mean, spread and the fraction of seeds under a threshold, which is how
the 0.05 cut-offs of the benchmark criteria compare with what an irrelevant
variable actually scores.
"""
import argparse

import numpy as np

from geomsa import AnalysisConfig, analyze_variable


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quantiles", type=float, nargs="+", default=[0.02, 0.05, 0.10])
    ap.add_argument("--sizes", type=int, nargs="+", default=[250, 500, 1000])
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--threshold", type=float, default=0.05)
    args = ap.parse_args()
    print(f"{'n':>6}{'q':>7}{'mean S':>9}{'sd':>8}{'max':>8}{f'<{args.threshold}':>8}")
    for n in args.sizes:
        for q in args.quantiles:
            s = []
            for seed in range(args.seeds):
                rng = np.random.default_rng([seed, n])
                r = analyze_variable(rng.uniform(size=n), rng.uniform(size=n), AnalysisConfig(quantile=q))
                s.append(r.s_geom)
            s = np.array(s)
            frac = (s < args.threshold).mean()
            print(f"{n:>6}{q:>7.2f}{s.mean():>9.3f}{s.std():>8.3f}{s.max():>8.3f}{frac:>8.1f}")


if __name__ == "__main__":
    main()
