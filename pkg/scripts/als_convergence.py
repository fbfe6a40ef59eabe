#!/usr/bin/env python3
"""Objective trajectory of ALS on synthetic purchases for several k and lambda."""
import argparse

from audience.factorization import als_fit
from audience.ingest import build_matrix
from audience.synth import GeneratorConfig, generate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--customers", type=int, default=1000)
    args = ap.parse_args()
    ds = generate(GeneratorConfig(seed=args.seed, n_customers=args.customers))
    matrix = build_matrix(ds.transactions, ds.catalog)
    print(f"matrix {matrix.shape}, {int(matrix.observed.sum())} observed cells")
    print("k  lambda  iters  converged  objective     rmse    max_rel_increase")
    for k in (1, 2, 3, 5, 8):
        for lam in (0.01, 0.1, 1.0):
            _, rep = als_fit(matrix, k=k, lam=lam, seed=args.seed)
            tr = rep.trajectory
            worst = max((b - a) / a for a, b in zip(tr, tr[1:]))
            print(f"{k:<2} {lam:<7} {rep.iterations:<6} {rep.converged!s:<10} "
                  f"{tr[-1]:<13.4f} {rep.rmse:.4f}  {worst:.1e}")


if __name__ == "__main__":
    main()
