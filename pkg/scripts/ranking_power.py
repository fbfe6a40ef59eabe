#!/usr/bin/env python3
"""Leave-one-out hit-rate@n of the factor model against popularity, per seed."""
import argparse

from audience.evaluation import leave_one_out, model_hit_rate, popularity_hit_rate
from audience.factorization import als_fit
from audience.ingest import build_matrix
from audience.synth import GeneratorConfig, generate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--customers", type=int, default=2000)
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--lam", type=float, default=0.1)
    args = ap.parse_args()
    for seed in range(args.seeds):
        ds = generate(GeneratorConfig(seed=seed, n_customers=args.customers))
        split = leave_one_out(build_matrix(ds.transactions, ds.catalog), seed=seed)
        model, _ = als_fit(split.train, k=args.k, lam=args.lam, seed=seed)
        print(f"seed {seed}: model {model_hit_rate(model, split, args.n):.3f}  "
              f"popularity {popularity_hit_rate(split, args.n):.3f}  "
              f"({len(split.held_out)} held out)")


if __name__ == "__main__":
    main()
