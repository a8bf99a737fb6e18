"""Figure rendering for sweep reports.

Renders the alpha-sweep curves to PNG files next to the delimited output.
Output bytes are deterministic: fixed figure geometry, fixed metadata, and
no timestamps.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_PNG_METADATA = {"Software": "swaplab"}
_FIGSIZE = (6.4, 4.2)
_DPI = 150


def _save(fig, path: Path) -> Path:
    fig.savefig(path, dpi=_DPI, metadata=_PNG_METADATA)
    plt.close(fig)
    return path


def render_sweep_figures(rows: list[dict], outdir) -> list[Path]:
    """Write complementarity, Bell-parameter, and fidelity figures for the
    sweep `rows` (dicts with the sweep column names).  Returns the paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    alphas = [r["alpha"] for r in rows]
    written = []

    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot(alphas, [r["i_ind"] for r in rows], label="individual info (particle 1)")
    ax.plot(alphas, [r["i_corr"] for r in rows], label="correlation info (pair 0-3)")
    ax.plot(alphas, [r["complementarity_sum"] for r in rows], "k--", label="sum")
    ax.set_xlabel(r"$\alpha$")
    ax.set_ylabel("information [bits-like]")
    ax.set_ylim(-0.05, 2.2)
    ax.legend(loc="center right")
    ax.set_title("Complementarity of individual and joint information")
    written.append(_save(fig, outdir / "complementarity.png"))

    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot(alphas, [r["s_max"] for r in rows], label="maximal Bell parameter")
    ax.axhline(2.0, color="gray", linestyle=":", label="local-realistic bound")
    ax.axhline(2.0 * math.sqrt(2.0), color="gray", linestyle="--", label="quantum maximum")
    ax.set_xlabel(r"$\alpha$")
    ax.set_ylabel("S")
    ax.legend(loc="lower center")
    ax.set_title("CHSH parameter of the swapped pair")
    written.append(_save(fig, outdir / "chsh.png"))

    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot(alphas, [r["fidelity"] for r in rows], label="state-estimation fidelity")
    ax.axhline(2.0 / 3.0, color="gray", linestyle=":", label="classical limit 2/3")
    ax.axhline(0.5, color="gray", linestyle="--", label="random guess 1/2")
    ax.set_xlabel(r"$\alpha$")
    ax.set_ylabel("average fidelity")
    ax.legend(loc="center right")
    ax.set_title("Classical teleportation fidelity")
    written.append(_save(fig, outdir / "fidelity.png"))

    return written
