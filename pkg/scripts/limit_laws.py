"""Direct model at growing dimension against the semicircle and Marchenko-Pastur laws.

    python3 scripts/limit_laws.py --dims 25 50 100 200 --replicas 50 --out limit_laws
"""

import argparse
import os
import time

from freerm import ensemble as ens
from freerm.free import free_poisson_density, mp_cdf, semicircle_cdf, semicircle_density
from freerm.levy import make_law
from freerm.paths import direct_model_spectra
from freerm.spectra import FunctionCDF, esd, ks_distance, wasserstein1, write_histogram_csv

CASES = {
    "semicircle": ("gaussian", FunctionCDF(semicircle_cdf, (-2.0, 2.0)), semicircle_density),
    "marchenko_pastur": ("poisson", FunctionCDF(mp_cdf, (0.0, 4.0)), free_poisson_density),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", type=int, nargs="+", default=[25, 50, 100, 200])
    ap.add_argument("--replicas", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="limit_laws")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    print(f"{'case':18s} {'d':>5s} {'KS':>8s} {'W1':>8s} {'sec':>6s}")
    for name, (law, target, density) in CASES.items():
        for d in args.dims:
            t0 = time.perf_counter()
            spec = ens.MatrixModelSpec(d, make_law(law), replicas=args.replicas, master_seed=args.seed)
            emp = esd(direct_model_spectra(spec))
            ks, w1 = ks_distance(emp, target), wasserstein1(emp, target)
            write_histogram_csv(os.path.join(args.out, f"{name}_d{d}.csv"), emp, target, density)
            print(f"{name:18s} {d:5d} {ks:8.4f} {w1:8.4f} {time.perf_counter() - t0:6.1f}")


if __name__ == "__main__":
    main()
