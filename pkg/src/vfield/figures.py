"""Matplotlib report figures written next to the CSV logs.

Everything renders through the Agg backend so runs work headless.  These
are qualitative companions to the raw logs (paths over the world geometry,
pairwise-distance envelope against the protocol floors); the CSVs remain
the quantitative record.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Circle

from .blending import StaticWorld
from .multi_agent import AgentParams, AgentState, MultiResult
from .sim import Pose, TrajectoryLog

__all__ = ["static_figure", "multi_paths_figure", "pair_distance_figure"]

MAX_POINTS_PER_PATH = 5000


def _decimate(seq):
    # stride by index, not value, so parallel columns keep equal lengths
    n = len(seq)
    if n <= MAX_POINTS_PER_PATH:
        return list(seq)
    step = n // MAX_POINTS_PER_PATH + 1
    out = list(seq[::step])
    if (n - 1) % step != 0:
        out.append(seq[-1])
    return out


def _world_patches(ax, world: StaticWorld) -> None:
    for ob in world.obstacles:
        c = (ob.obstacle.center.x, ob.obstacle.center.y)
        ax.add_patch(Circle(c, ob.obstacle.radius, facecolor="0.75", edgecolor="none"))
        ax.add_patch(Circle(c, ob.rho_Z, facecolor="none", edgecolor="tab:red", lw=0.9))
        ax.add_patch(Circle(c, ob.rho_F, facecolor="none", edgecolor="black", lw=0.9))


def static_figure(world: StaticWorld, start: Pose, log: TrajectoryLog, out_path) -> None:
    """Robot path over the obstacle layout with safety/influence circles."""
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    _world_patches(ax, world)
    xs = _decimate(log.column("x"))
    ys = _decimate(log.column("y"))
    ax.plot(xs, ys, color="tab:blue", lw=1.4, label=f"path ({log.status})")
    ax.plot([start.r.x], [start.r.y], "o", color="tab:green", ms=6, label="start")
    g = world.goal
    ax.plot([g.position.x], [g.position.y], "*", color="tab:purple", ms=11, label="goal")
    ax.annotate(
        "",
        xy=(g.position.x + 0.05 * math.cos(g.heading), g.position.y + 0.05 * math.sin(g.heading)),
        xytext=(g.position.x, g.position.y),
        arrowprops={"arrowstyle": "->", "color": "tab:purple"},
    )
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)


def multi_paths_figure(agents: list[AgentState], result: MultiResult, out_path) -> None:
    """All agent paths, start dots, and goal crosses on one axis."""
    fig, ax = plt.subplots(figsize=(6.5, 6.5))
    cmap = plt.get_cmap("hsv")
    n = len(agents)
    for i, (agent, log) in enumerate(zip(agents, result.logs)):
        color = cmap(i / max(1, n))
        ax.plot(_decimate(log.column("x")), _decimate(log.column("y")), color=color, lw=0.9)
        ax.plot([agent.pose.r.x], [agent.pose.r.y], "o", color=color, ms=3.5)
        gp = agent.goal.position
        ax.plot([gp.x], [gp.y], "x", color=color, ms=5.0)
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(f"{n} agents, status: {result.status}")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)


def pair_distance_figure(params: AgentParams, result: MultiResult, out_path) -> None:
    """Smallest pairwise distance over time against the protocol floors."""
    fig, ax = plt.subplots(figsize=(6.5, 3.6))
    t = list(result.logs[0].column("t"))
    if len(result.logs) > 1:
        cols = [log.column("min_pair_dist") for log in result.logs]
        dmin = [min(c[i] for c in cols) for i in range(len(t))]
        ax.plot(_decimate(t), _decimate(dmin), color="tab:blue", lw=1.0, label="min pair distance")
    ax.axhline(params.d_m, color="tab:orange", ls="--", lw=1.0, label="d_m")
    ax.axhline(2.0 * params.radius, color="tab:red", ls="-", lw=1.0, label="contact")
    ax.axhline(params.d_r, color="0.6", ls=":", lw=0.8, label="d_r")
    ax.axhline(params.d_c, color="0.4", ls=":", lw=0.8, label="d_c")
    ax.set_xlabel("t")
    ax.set_ylabel("distance")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
