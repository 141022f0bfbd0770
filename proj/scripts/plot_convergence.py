#!/usr/bin/env python3
"""Log-log error plot from a convergence-table CSV written by `rlogkg study-*`.

usage: plot_convergence.py table.csv out.png [--x h|tau|epsilon]
"""
import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("table")
    ap.add_argument("out")
    ap.add_argument("--x", default="h", choices=["h", "tau", "epsilon"])
    args = ap.parse_args()

    df = pd.read_csv(args.table)
    fig, ax = plt.subplots(figsize=(5, 4))
    # study-total stacks one table per epsilon; plot each separately.
    groups = df.groupby("epsilon", sort=False) if args.x != "epsilon" else [(None, df)]
    for eps, g in groups:
        for col, marker in (("err_l2", "o"), ("err_linf", "s"), ("err_h1", "^")):
            label = col[4:] if eps is None else f"{col[4:]}, eps={eps:g}"
            ax.loglog(g[args.x], g[col], marker=marker, label=label)
    ax.set_xlabel(args.x)
    ax.set_ylabel("error")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)


if __name__ == "__main__":
    main()
