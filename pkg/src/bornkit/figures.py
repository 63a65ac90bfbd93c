"""Report rendering: figures and a delimited summary next to the JSON.

Only the report path touches matplotlib; everything is rendered to files
with the Agg backend so runs stay headless.
"""

from __future__ import annotations

import csv
import re
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "-", name).strip("-") or "task"


def _pairs_to_complex(pairs) -> np.ndarray:
    return np.array([complex(p[0], p[1]) for p in pairs])


def _bar_figure(path: Path, title: str, labels, series: dict, ylabel: str) -> None:
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    positions = np.arange(len(labels))
    width = 0.8 / max(len(series), 1)
    for offset, (name, values) in enumerate(series.items()):
        ax.bar(positions + offset * width, values, width=width, label=name)
    ax.set_xticks(positions + 0.4 - width / 2.0)
    ax.set_xticklabels(labels, rotation=30, ha="right")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    if len(series) > 1:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_task_figure(entry: dict, path: Path) -> bool:
    """Write a figure for one report entry; returns False when none applies."""
    if entry.get("status") != "ok":
        return False
    kind = entry["kind"]
    result = entry["result"]
    title = f"{entry['name']} ({kind})"

    if kind == "rates" or (kind == "dilate" and "rates" in result):
        labels = result.get("labels", [str(k) for k in range(len(result["rates"]))])
        _bar_figure(path, title, labels, {"rate": result["rates"]}, "mean rate")
        return True
    if kind == "sample":
        counts = entry["result"]["event_log"]["counts"]
        labels = [str(k) for k in range(len(counts))]
        _bar_figure(path, title, labels, {"count": counts}, "events")
        return True
    if kind == "verify-born-povm":
        labels = [str(k) for k in range(len(result["expected"]))]
        series = {
            "expected": np.real(_pairs_to_complex(result["expected"])),
            "observed": np.real(_pairs_to_complex(result["observed"])),
        }
        _bar_figure(path, title, labels, series, "probability")
        return True
    if kind == "verify-born-c":
        labels = [f"c{k}" for k in range(len(result["deviations"]))]
        series = {"deviation": result["deviations"], "bound": result["bounds"]}
        _bar_figure(path, title, labels, series, "|mean - expectation|")
        return True
    if kind == "spectral":
        values = _pairs_to_complex(result["eigenvalues"])
        fig, ax = plt.subplots(figsize=(4.8, 4.2))
        ax.scatter(values.real, values.imag, marker="x")
        ax.axhline(0.0, color="gray", linewidth=0.5)
        ax.axvline(0.0, color="gray", linewidth=0.5)
        ax.set_xlabel("Re")
        ax.set_ylabel("Im")
        ax.set_title(title)
        fig.tight_layout()
        fig.savefig(path, dpi=120)
        plt.close(fig)
        return True
    if kind == "maxent":
        labels = [f"X{j}" for j in range(len(result["targets"]))]
        if not labels:
            return False
        series = {"target": result["targets"], "achieved": result["achieved"]}
        _bar_figure(path, title, labels, series, "expectation")
        return True
    if kind == "scatter" and "distribution" in result:
        _bar_figure(path, title, result["labels"], {"probability": result["distribution"]}, "probability")
        return True
    return False


def _summary_metric(entry: dict):
    if entry.get("status") != "ok":
        return ("error", entry["error"]["type"])
    result = entry["result"]
    for key in (
        "rate_sum",
        "probability",
        "distribution_sum",
        "reconstruction_deviation",
        "rate_deviation",
        "fit_residual",
        "unitarity_deviation",
        "intensity",
    ):
        if key in result:
            return (key, result[key])
    if "deviations" in result:
        return ("max_deviation", max(result["deviations"]) if result["deviations"] else 0.0)
    if "event_log" in result:
        return ("total", result["event_log"]["total"])
    return ("", "")


def write_summary_csv(report: dict, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["index", "name", "kind", "status", "passed", "metric", "value"])
        for index, entry in enumerate(report["tasks"]):
            metric, value = _summary_metric(entry)
            writer.writerow(
                [index, entry["name"], entry["kind"], entry["status"], entry.get("passed", ""), metric, value]
            )


def render_report(report: dict, out_dir) -> list[str]:
    """Write summary.csv plus one figure per plottable task; returns the filenames."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    csv_path = out / "summary.csv"
    write_summary_csv(report, csv_path)
    written.append(csv_path.name)
    for index, entry in enumerate(report["tasks"]):
        figure_path = out / f"{index:02d}_{_slug(entry['name'])}.png"
        if render_task_figure(entry, figure_path):
            written.append(figure_path.name)
    return written
