"""Figures for the ``report --figures`` path; matplotlib is imported on demand."""

from __future__ import annotations

from pathlib import Path

STYLE = {
    "font.family": "serif",
    "font.size": 8,
    "axes.labelsize": 9,
    "axes.titlesize": 9,
    "xtick.labelsize": 7,
    "ytick.labelsize": 7,
    "legend.fontsize": 7,
    "figure.dpi": 150,
    "savefig.bbox": "tight",
    "mathtext.fontset": "stix",
}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams.update(STYLE)
    return plt


def pairing_heatmap(pairs: dict, path: Path) -> Path:
    """Engine multiplicities over all DL pairs of one group, with oracle mismatches marked."""
    import numpy as np

    plt = _pyplot()
    records = pairs["records"]
    labels = sorted({(r["T"], tuple(r["chi"])) for r in records})
    pos = {lab: k for k, lab in enumerate(labels)}
    M = np.zeros((len(labels), len(labels)))
    bad = []
    for r in records:
        a, b = pos[(r["T"], tuple(r["chi"]))], pos[(r["S"], tuple(r["eta"]))]
        M[a, b] = r["engine"]
        if r["engine"] != r["oracle"]:
            bad.append((b, a))
    lim = max(1.0, float(np.abs(M).max()))
    fig, ax = plt.subplots(figsize=(4.2, 3.6))
    im = ax.imshow(M, cmap="RdBu_r", vmin=-lim, vmax=lim)
    for x, y in bad:
        ax.plot(x, y, marker="x", color="k", ms=4)
    ticks = [f"{t} {list(c)}" for t, c in labels]
    ax.set_xticks(range(len(labels)), ticks, rotation=90)
    ax.set_yticks(range(len(labels)), ticks)
    ax.set_xlabel(r"$(S, \eta)$")
    ax.set_ylabel(r"$(T, \chi)$")
    ax.set_title(f"{pairs['group']}: multiplicities ({len(bad)} oracle mismatches)")
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return Path(path)


def bound_figure(audits: list[dict], path: Path) -> Path:
    """Largest |multiplicity| per audited group against 2^n n!."""
    plt = _pyplot()
    names = [a["result"]["group"].replace("(F_", "(") for a in audits]
    observed = [a["result"]["bound_audit"]["max_abs"] for a in audits]
    bound = [a["result"]["audit_bound"] for a in audits]
    fig, ax = plt.subplots(figsize=(3.6, 2.4))
    xs = range(len(names))
    ax.bar([x - 0.18 for x in xs], observed, width=0.36, label=r"max $|m|$", color="#2b8cbe")
    ax.bar([x + 0.18 for x in xs], bound, width=0.36, label=r"$2^n n!$", color="#a8ddb5")
    ax.set_xticks(list(xs), names)
    ax.set_ylabel("multiplicity")
    ax.legend(frameon=False)
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return Path(path)
