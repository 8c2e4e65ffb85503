"""Matplotlib rendering for the CLI report path.

Each renderer takes the same rows the CSV writer receives and draws one
figure to a file.  The Agg backend keeps output identical across runs.
"""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _new_axes(title, xlabel, ylabel):
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_heisenberg_figure(rows, path):
    """rows: (n, exact length or None, 4*ceil(sqrt(n)) reference)."""
    fig, ax = _new_axes("Central distortion in the Heisenberg group", "n", "word length")
    ns = [n for n, d, _ in rows if d is not None]
    ds = [d for _, d, _ in rows if d is not None]
    ax.plot(ns, ds, ".", ms=4, label="|z^n| (BFS exact)")
    ax.plot([n for n, _, _ in rows], [b for _, _, b in rows], "-", lw=1,
            label="4 ceil(sqrt n)")
    ax.legend()
    _save(fig, path)


def save_growth_figure(rows, path, mode="counts"):
    """rows: (n, q_length, ln_upper or None, oracle_exact or None)."""
    fig, ax = _new_axes("Conjugacy growth of the outer automorphism",
                        "n", "ln ||Phi^n(c)|| (upper bracket)")
    ns = [n for n, _, v, _ in rows if v is not None and n > 0]
    vs = [v for n, _, v, _ in rows if v is not None and n > 0]
    ax.plot(ns, vs, ".", ms=3, label=f"ln upper ({mode})")
    if ns:
        scale = vs[-1] / math.sqrt(ns[-1]) if ns[-1] > 0 else 1.0
        ax.plot(ns, [scale * math.sqrt(n) for n in ns], "-", lw=1,
                label=f"{scale:.2f} sqrt(n)")
    ax.legend()
    _save(fig, path)


def save_product_growth_figure(rows, path):
    """rows: (n, [factor norms...], total)."""
    fig, ax = _new_axes("Product growth (sum of factor norms)", "n", "ln norm")
    ns = [n for n, _, total in rows if total > 0]
    ax.plot(ns, [math.log(t) for n, _, t in rows if t > 0], ".-", ms=4, lw=1,
            label="ln total")
    n_factors = len(rows[0][1]) if rows else 0
    for i in range(n_factors):
        pts = [(n, fs[i]) for n, fs, _ in rows if fs[i] > 0]
        if pts:
            ax.plot([n for n, _ in pts], [math.log(v) for _, v in pts], "--", lw=1,
                    label=f"ln factor {i}")
    ax.legend()
    _save(fig, path)
