"""Per-degree bar charts for CLI reports (headless Agg backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["plot_homology", "plot_mu_ranks", "plot_derivations"]

_STYLE = {
    "figure.figsize": (6.0, 3.2),
    "figure.dpi": 120,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "font.size": 9,
    "svg.hashsalt": "dgbrauer",
}


def _bars(path, degrees, series, title, ylabel):
    degrees = list(degrees)
    n = max(len(series), 1)
    width = 0.8 / n
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for i, (label, values) in enumerate(series):
            xs = [d - 0.4 + width * (i + 0.5) for d in degrees]
            ax.bar(xs, values, width=width, label=label)
        ax.set_xticks(degrees)
        ax.set_xlabel("degree")
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        ax.yaxis.get_major_locator().set_params(integer=True)
        if len(series) > 1:
            ax.legend(frameon=False, ncol=len(series), loc="lower center", bbox_to_anchor=(0.5, 1.0))
            ax.set_title(title, pad=22)
        fig.tight_layout()
        fig.savefig(path, metadata={"Software": None} if str(path).endswith(".png") else None)
        plt.close(fig)
    return path


def plot_homology(report, path, title="homology"):
    degs = sorted(report.per_degree)
    rows = report.per_degree
    return _bars(
        path,
        degs,
        [
            ("cycles", [rows[n]["cycles"] for n in degs]),
            ("boundaries", [rows[n]["boundaries"] for n in degs]),
            ("homology", [rows[n]["homology"] for n in degs]),
        ],
        title,
        "dimension",
    )


def plot_mu_ranks(ranks: dict, path, title="mu ranks"):
    degs = sorted(ranks)
    return _bars(
        path,
        degs,
        [
            ("source", [ranks[n]["source"] for n in degs]),
            ("target", [ranks[n]["target"] for n in degs]),
            ("rank", [ranks[n]["rank"] for n in degs]),
        ],
        title,
        "dimension",
    )


def plot_derivations(dims: dict, path, title="derivations"):
    alld, inner = dims["all_derivations"], dims["inner_derivations"]
    degs = sorted(alld)
    return _bars(path, degs, [("all", [alld[k] for k in degs]), ("inner", [inner[k] for k in degs])], title, "dimension")
