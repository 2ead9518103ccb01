"""Rendering of repair/verify reports: delimited tables plus figures.

Everything lands in a caller-chosen directory: a CSV with the numbers and
a PNG chart next to it.  Uses the non-interactive matplotlib backend so it
works headless.
"""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from . import codec  # noqa: E402
from .codes import ConstructedCode  # noqa: E402


def _ensure(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


def write_repair_artifacts(out_dir: str, report: dict) -> list[str]:
    """Per-helper download table and bar chart for one repair."""
    _ensure(out_dir)
    node = report["node"]
    helpers = sorted(int(j) for j in report["per_helper"])
    betas = [report["per_helper"][str(j)] for j in helpers]
    csv_path = os.path.join(out_dir, f"repair_node{node}_downloads.csv")
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["helper", "downloaded_symbols_per_stripe"])
        for j, b in zip(helpers, betas):
            w.writerow([j, b])
        w.writerow(["total", report["gamma"]])
    fig, ax = plt.subplots(figsize=(7, 3.2))
    ax.bar([str(j) for j in helpers], betas, color="#4878cf")
    ax.set_xlabel("helper node")
    ax.set_ylabel("symbols per stripe")
    ax.set_title(f"repair of node {node}: {report['gamma']} downloaded "
                 f"(optimal {report['gamma_star']})")
    ax.axhline(report["gamma_star"] / (len(helpers)), color="#d65f5f",
               linestyle="--", linewidth=1, label="per-helper optimum")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    png_path = os.path.join(out_dir, f"repair_node{node}_downloads.png")
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [csv_path, png_path]


def write_bandwidth_artifacts(out_dir: str, code: ConstructedCode) -> list[str]:
    """Per-node repair bandwidth versus the optimum, from the closed form."""
    _ensure(out_dir)
    gammas = [codec.bandwidth_formula(code.spec, i)[0] for i in range(code.n)]
    gamma_star = (code.n - 1) * code.N // code.r
    csv_path = os.path.join(out_dir, "bandwidth_per_node.csv")
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["node", "gamma", "gamma_star"])
        for i, g in enumerate(gammas):
            w.writerow([i, g, gamma_star])
    fig, ax = plt.subplots(figsize=(7, 3.2))
    ax.bar(range(code.n), gammas, color="#4878cf", label="repair bandwidth")
    ax.axhline(gamma_star, color="#d65f5f", linestyle="--", linewidth=1,
               label="optimal")
    ax.set_xlabel("node")
    ax.set_ylabel("symbols per stripe")
    ax.set_title(f"{code.spec.family} (n={code.n}, r={code.r}, N={code.N}, "
                 f"q={code.spec.q})")
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    png_path = os.path.join(out_dir, "bandwidth_per_node.png")
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [csv_path, png_path]


def write_verify_artifacts(out_dir: str, reports: list) -> list[str]:
    """Summary table and pass/fail chart for a verification run."""
    _ensure(out_dir)
    csv_path = os.path.join(out_dir, "verify_summary.csv")
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["property", "passed", "checked", "failures", "elapsed_s"])
        for rep in reports:
            w.writerow([rep.prop, rep.passed, rep.checked, rep.failures,
                        f"{rep.elapsed:.6f}"])
    fig, ax = plt.subplots(figsize=(7, 3.2))
    names = [rep.prop for rep in reports]
    counts = [rep.checked for rep in reports]
    colors = ["#6acc65" if rep.passed else "#d65f5f" for rep in reports]
    ax.bar(names, counts, color=colors)
    ax.set_ylabel("items checked")
    ax.set_title("verification summary (green = pass)")
    plt.setp(ax.get_xticklabels(), rotation=20, ha="right", fontsize=8)
    fig.tight_layout()
    png_path = os.path.join(out_dir, "verify_summary.png")
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [csv_path, png_path]
