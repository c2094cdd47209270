"""Rendering of report and benchmark figures.

Uses the Agg backend so rendering works headless; figures are written
next to the delimited artifacts they illustrate.
"""

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def render_report_figure(report, path):
    """One bar per check: signed log-margin against its threshold.

    Bars show log10(observed / threshold), colored by pass status, so a
    quick glance reveals how much headroom each check had regardless of
    the absolute scale of its observable.
    """
    checks = report.checks
    fig_height = max(2.0, 0.42 * len(checks) + 1.2)
    fig, ax = plt.subplots(figsize=(9, fig_height))
    if not checks:
        ax.text(0.5, 0.5, "no checks", ha="center", va="center")
        ax.set_axis_off()
    else:
        labels, margins, colors = [], [], []
        for check in checks:
            observed = max(abs(check.observed), 1e-18)
            threshold = max(abs(check.threshold), 1e-18)
            labels.append(check.name)
            margins.append(math.log10(observed / threshold))
            colors.append("#2a9d2a" if check.passed else "#c03030")
        pos = range(len(checks))
        ax.barh(pos, margins, color=colors)
        ax.axvline(0.0, color="black", linewidth=0.8)
        ax.set_yticks(list(pos))
        ax.set_yticklabels(labels, fontsize=8)
        ax.invert_yaxis()
        ax.set_xlabel("log10(observed / threshold)")
        ax.set_title("verification checks (color = pass/fail)")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def render_bench_figure(rows, path):
    """Median apply time against n, one series per operator family."""
    fig, ax = plt.subplots(figsize=(7, 5))
    by_op = {}
    for row in rows:
        by_op.setdefault(row.operator, []).append(row)
    for name, group in sorted(by_op.items()):
        group = sorted(group, key=lambda r: r.n)
        ns = [r.n for r in group]
        ax.loglog(ns, [r.median_us for r in group], marker="o", label=f"{name} median")
        ax.loglog(ns, [r.p90_us for r in group], linestyle="--", alpha=0.5,
                  label=f"{name} p90")
    ax.set_xlabel("n")
    ax.set_ylabel("apply time (us)")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    ax.set_title("operator apply scaling")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path
