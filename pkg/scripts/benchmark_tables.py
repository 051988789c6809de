"""Run the four benchmark models across seeds and print the result tables."""
import argparse
import time

import numpy as np

from geomsa import AnalysisConfig, ModelSpec, analyze_dataset, generate_model


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--models", nargs="+", default=["linear", "circle", "connected_circles", "ishigami"])
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--quantile", type=float, default=0.05)
    args = ap.parse_args()
    cfg = AnalysisConfig(quantile=args.quantile)
    for name in args.models:
        print(f"== {name}")
        rows = []
        for seed in range(args.seeds):
            data = generate_model(ModelSpec(name, args.n, seed))
            t0 = time.perf_counter()
            res = analyze_dataset(data.inputs, data.output, cfg, data.names)
            dt = time.perf_counter() - t0
            line = "  ".join(f"{r.variable}: eps={r.epsilon:.3f} V={r.area_v:.2f} B={r.area_box:.2f} "
                             f"rho={r.rho_geom:.2f} S={r.s_geom:.3f}" for r in res)
            print(f"seed {seed:2d} ({dt:5.1f}s)  {line}")
            rows.append([(r.rho_geom, r.s_geom) for r in res])
        arr = np.array(rows)
        print("mean rho", np.round(arr[:, :, 0].mean(0), 3), "mean S", np.round(arr[:, :, 1].mean(0), 3))


if __name__ == "__main__":
    main()
