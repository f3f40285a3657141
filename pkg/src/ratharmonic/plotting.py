"""Matplotlib figures written next to the JSON reports."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

from matplotlib.figure import Figure  # noqa: E402

from .critical import CurveSet  # noqa: E402
from .solver import Orientation  # noqa: E402

COLORS = {
    Orientation.SENSE_PRESERVING: "tab:blue",
    Orientation.SENSE_REVERSING: "tab:red",
    Orientation.SINGULAR: "tab:green",
}

# fixed ids and no timestamp, so reruns produce identical files
matplotlib.rcParams["svg.hashsalt"] = "ratharmonic"
_META = {"Date": None}


def _save(fig: Figure, path):
    fmt = str(path).rsplit(".", 1)[-1].lower()
    meta = _META if fmt in ("svg", "pdf") else None
    fig.savefig(path, metadata=meta, bbox_inches="tight")


def _zeros_and_poles(ax, zeros=(), poles=()):
    for h in zeros:
        ax.plot(h.location.real, h.location.imag, "o", ms=5, color=COLORS[h.orientation], zorder=3)
    for p in poles:
        ax.plot(p.real, p.imag, "x", ms=7, mew=1.5, color="k", zorder=3)


def critical_figure(cs: CurveSet, zeros=(), poles=(), title: str | None = None) -> Figure:
    """Critical curves (solid) with zeros and poles; caustics (dashed) in a second panel."""
    fig = Figure(figsize=(10, 4.8))
    ax1, ax2 = fig.subplots(1, 2)
    for p in cs.polylines:
        ax1.plot(p.real, p.imag, "-", color="k", lw=1.0)
    _zeros_and_poles(ax1, zeros, poles)
    x0, x1, y0, y1 = cs.bbox
    ax1.set_xlim(x0, x1)
    ax1.set_ylim(y0, y1)
    ax1.set_aspect("equal")
    ax1.set_title("critical set")
    for c in cs.caustics:
        ax2.plot(c.real, c.imag, "--", color="k", lw=1.0)
    ax2.set_aspect("equal", adjustable="datalim")
    ax2.set_title("image of critical set")
    for ax in (ax1, ax2):
        ax.set_xlabel("Re")
        ax.set_ylabel("Im")
    if title:
        fig.suptitle(title)
    return fig


def save_critical(path, cs: CurveSet, zeros=(), poles=(), title: str | None = None):
    _save(critical_figure(cs, zeros, poles, title), path)


def census_figure(census: dict) -> Figure:
    degs = list(census["degrees"])
    fig = Figure(figsize=(3.2 * len(degs), 3.0))
    axes = fig.subplots(1, len(degs), squeeze=False)[0]
    for ax, d in zip(axes, degs):
        row = census["degrees"][d]
        ks = [int(k) for k in row["histogram"]]
        vs = list(row["histogram"].values())
        ax.bar(ks, vs, color="0.6", width=0.8)
        ax.axvline(row["bound_5n5"], color="tab:red", ls="--", lw=1)
        ax.set_title(f"n = {d}")
        ax.set_xlabel("zeros")
    axes[0].set_ylabel("trials")
    return fig


def save_census(path, census: dict):
    _save(census_figure(census), path)


def images_figure(image_set, masses, cs: CurveSet | None = None) -> Figure:
    fig = Figure(figsize=(5, 5))
    ax = fig.subplots()
    if cs is not None:
        for p in cs.polylines:
            ax.plot(p.real, p.imag, "-", color="0.5", lw=0.8)
    for m, z in masses:
        ax.plot(z.real, z.imag, "+", ms=8 + 6 * m, color="k")
    for h in image_set.images:
        ax.plot(h.location.real, h.location.imag, "o", ms=5, color=COLORS[h.orientation])
    ax.plot(image_set.source.real, image_set.source.imag, "*", ms=10, color="tab:orange")
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_title(f"{image_set.count} images")
    return fig


def save_images(path, image_set, masses, cs: CurveSet | None = None):
    _save(images_figure(image_set, masses, cs), path)
