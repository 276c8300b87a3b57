"""Render sweep results to PNG figures next to their CSV outputs."""
from __future__ import annotations

from pathlib import Path as FsPath

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .experiments import SweepResult


def _plot_amplitude_ratio(res: SweepResult):
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    # records iterate eta-major: reshape as (eta, x)
    etas = res.axes["eta"]
    xs = res.axes["x"]
    for ax, col, title in zip(axes, ("r_rabi", "r_detuning"),
                              ("Rabi channel", "detuning channel")):
        z = res.column(col).reshape(len(etas), len(xs))
        im = ax.pcolormesh(np.array(xs), np.array(etas), z, shading="nearest")
        ax.set_xlabel("x")
        ax.set_ylabel("eta")
        ax.set_title(f"R = max|z| / max|z~|, {title}")
        fig.colorbar(im, ax=ax)
    return fig


def _plot_gz_diagnostics(res: SweepResult):
    fig, ax = plt.subplots(figsize=(6, 4))
    etas = np.array(res.axes["eta"], dtype=float)
    xs = res.axes["x"]
    z = res.column("max_gz_over_omega").reshape(len(etas), len(xs))
    for j, x in enumerate(xs):
        ax.plot(etas, z[:, j], marker=".", label=f"x = {x:g}")
    ax.set_xlabel("eta")
    ax.set_ylabel("max |g_z / Omega|")
    ax.legend()
    return fig


def _plot_systematic(res: SweepResult):
    etas = res.axes["eta"]
    deltas = np.array(res.axes["delta"], dtype=float)
    epss = np.array(res.axes["eps"], dtype=float)
    fig, axes = plt.subplots(1, len(etas), figsize=(5 * len(etas), 4),
                             squeeze=False)
    f = res.column("fidelity").reshape(len(etas), len(deltas), len(epss))
    for i, eta in enumerate(etas):
        ax = axes[0][i]
        im = ax.pcolormesh(epss, deltas, f[i], shading="nearest")
        ax.set_xlabel("eps")
        ax.set_ylabel("delta")
        ax.set_title(f"fidelity, eta = {eta:g}")
        fig.colorbar(im, ax=ax)
    return fig


def _plot_lindblad(res: SweepResult):
    fig, ax = plt.subplots(figsize=(6, 4))
    ks = res.column("kappa2")
    fs = res.column("fidelity")
    ax.plot(ks, fs, "o", label="state-averaged fidelity")
    if "slope" in res.metadata:
        ax.plot(ks, res.metadata["slope"] * ks + res.metadata["intercept"],
                "-", label="linear fit")
    ax.set_xlabel("kappa2 (1/us)")
    ax.set_ylabel("fidelity")
    ax.legend()
    return fig


def _plot_hyperfine(res: SweepResult):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.loglog(res.column("a_hf") / (2 * np.pi), res.column("infidelity"),
              marker="o")
    ax.set_xlabel("A_hf / 2pi (MHz·us^-1 equivalent)")
    ax.set_ylabel("1 - F")
    return fig


def _plot_phase_smoothing(res: SweepResult):
    fig, ax = plt.subplots(figsize=(6, 4))
    etas = res.axes["eta"]
    sigmas = np.array(res.axes["sigma"], dtype=float)
    z = res.column("infidelity").reshape(len(etas), len(sigmas))
    for i, eta in enumerate(etas):
        ax.semilogy(sigmas * 1e3, z[i], marker=".", label=f"eta = {eta:g}")
    ax.set_xlabel("sigma (ns)")
    ax.set_ylabel("1 - F")
    ax.legend()
    return fig


def _plot_pulse_comparison(res: SweepResult):
    t = res.column("t")
    fig, axes = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    axes[0].plot(t, res.column("delta"), "--", label="Delta")
    axes[0].plot(t, res.column("delta_tilde"), "-", label="Delta~")
    axes[0].set_ylabel("detuning (rad/us)")
    axes[0].legend()
    axes[1].plot(t, res.column("omega_r"), "--", label="Omega_R")
    axes[1].plot(t, res.column("omega_r_tilde"), "-", label="Omega_R~")
    axes[1].set_ylabel("Rabi (rad/us)")
    axes[1].set_xlabel("t (us)")
    axes[1].legend()
    return fig


def _plot_eds(res: SweepResult):
    fig, ax = plt.subplots(figsize=(6, 4))
    t = res.column("t")
    ax.plot(t, res.column("e_ds_0"), label="E_DS, g_z = 0")
    ax.plot(t, res.column("e_ds_gz"), label="E_DS with g_z")
    ax.plot(t, res.column("gz_plus_omega0"), "--", label="g_z + Omega_0")
    ax.set_xlabel("t (us)")
    ax.set_ylabel("rad/us")
    ax.legend()
    return fig


_RENDERERS = {
    "amplitude_ratio": _plot_amplitude_ratio,
    "gz_diagnostics": _plot_gz_diagnostics,
    "systematic_errors": _plot_systematic,
    "lindblad": _plot_lindblad,
    "hyperfine": _plot_hyperfine,
    "phase_smoothing": _plot_phase_smoothing,
    "pulse_comparison": _plot_pulse_comparison,
    "eds_comparison": _plot_eds,
}


def render_sweep(res: SweepResult, png_path) -> FsPath:
    """Write a PNG for the sweep; the renderer is picked by sweep_id."""
    renderer = _RENDERERS.get(res.sweep_id)
    png_path = FsPath(png_path)
    if renderer is None:
        raise KeyError(f"no renderer for sweep {res.sweep_id!r}")
    fig = renderer(res)
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return png_path
