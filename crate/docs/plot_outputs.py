"""Plot CSV files written by `hbie`.

    python docs/plot_outputs.py out/eig-scan.csv            # sigma_min vs k
    python docs/plot_outputs.py out/solve-exterior.csv      # |u| at sample points
    python docs/plot_outputs.py out/converge.csv            # error vs N

The first line of every file is a `# config_hash` comment, so it is
skipped via `comment="#"`. Saves `<input>.png` next to the CSV.
"""

import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd


def plot(path: Path) -> Path:
    df = pd.read_csv(path, comment="#")
    fig, ax = plt.subplots(figsize=(6, 4.5))
    cols = set(df.columns)
    if {"kind", "k", "sigma_rel"} <= cols:
        s = df[df.kind == "sample"]
        d = df[df.kind == "dip"]
        ax.semilogy(s.k, s.sigma_rel, ".-", label="scan")
        ax.semilogy(d.k, np.maximum(d.sigma_rel, 1e-17), "rv", label="refined dips")
        ax.set_xlabel("k")
        ax.set_ylabel("sigma_min / sigma_max")
        ax.legend()
    elif {"x", "y", "re_u", "im_u"} <= cols:
        mag = np.hypot(df.re_u, df.im_u)
        sc = ax.scatter(df.x, df.y, c=mag, s=18, cmap="viridis")
        fig.colorbar(sc, ax=ax, label="|u|")
        ax.set_aspect("equal")
        ax.set_xlabel("x")
        ax.set_ylabel("y")
    elif {"n", "max_error"} <= cols:
        ax.semilogy(df.n, df.max_error, "o-")
        ax.set_xlabel("nodes per component")
        ax.set_ylabel("max probe error")
    elif {"check", "value", "threshold"} <= cols:
        y = np.arange(len(df))
        ax.barh(y, np.maximum(df.value.abs(), 1e-18), color=["tab:green" if s == "PASS" else "tab:red" for s in df.status])
        ax.scatter(df.threshold, y, marker="|", color="k", s=200, label="threshold")
        ax.set_yticks(y, df.check, fontsize=7)
        ax.set_xscale("log")
        ax.legend()
    else:
        raise SystemExit(f"{path}: unrecognised columns {sorted(cols)}")
    ax.set_title(path.name)
    fig.tight_layout()
    out = path.with_suffix(".png")
    fig.savefig(out, dpi=120)
    return out


if __name__ == "__main__":
    if len(sys.argv) < 2:
        raise SystemExit(__doc__)
    for arg in sys.argv[1:]:
        print(plot(Path(arg)))
