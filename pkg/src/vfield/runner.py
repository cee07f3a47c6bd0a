"""Run orchestration: execute a loaded scenario, write its artifacts, and
map the outcome to a process exit code.

Artifact layout per mode (all inside the chosen output directory):

* field_plot: ``field.svg``
* static: ``trajectory.csv``, ``trajectory.svg``, ``field.svg``
* multi: ``agent_<id>.csv`` per agent, ``summary.csv``, ``paths.svg``,
  ``min_distance.svg``

Exit codes: 0 success, 2 validation failure (raised before this module
runs), 3 collision or protocol violation, 4 timeout.
"""

from __future__ import annotations

import math
from pathlib import Path

from . import figures
from .render import render_field
from .scenario import ScenarioFile
from .sim import STATUS_COLLISION, STATUS_CONVERGED, STATUS_TIMEOUT, run_single
from .multi_agent import STATUS_VIOLATION, MultiResult, run_multi

__all__ = ["run_scenario", "EXIT_OK", "EXIT_VALIDATION", "EXIT_UNSAFE", "EXIT_TIMEOUT"]

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_UNSAFE = 3
EXIT_TIMEOUT = 4

_STATUS_EXIT = {
    STATUS_CONVERGED: EXIT_OK,
    STATUS_COLLISION: EXIT_UNSAFE,
    STATUS_VIOLATION: EXIT_UNSAFE,
    STATUS_TIMEOUT: EXIT_TIMEOUT,
}


def _auto_bounds(sc: ScenarioFile) -> tuple[float, float, float, float]:
    if sc.bounds is not None:
        return sc.bounds
    xs = [sc.world.goal.position.x, sc.start.r.x]
    ys = [sc.world.goal.position.y, sc.start.r.y]
    for ob in sc.world.obstacles:
        xs.extend((ob.obstacle.center.x - ob.rho_F, ob.obstacle.center.x + ob.rho_F))
        ys.extend((ob.obstacle.center.y - ob.rho_F, ob.obstacle.center.y + ob.rho_F))
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-6)
    pad = 0.12 * span
    return (x0 - pad, x1 + pad, y0 - pad, y1 + pad)


def _write_summary_csv(path: Path, result: MultiResult, agent_ids: list[int]) -> None:
    rows = ["agent,status,t_arrive,min_pair_dist\n"]
    for i, aid in enumerate(agent_ids):
        t_arr = result.arrival_times[i]
        t_repr = repr(t_arr) if t_arr is not None else "nan"
        pair_min = min(result.logs[i].column("min_pair_dist"), default=math.inf)
        rows.append(f"{aid},{result.agent_status[i]},{t_repr},{pair_min!r}\n")
    rows.append(
        f"global,{result.status},{result.t_final!r},{result.min_pair_distance!r}\n"
    )
    path.write_text("".join(rows))


def run_scenario(sc: ScenarioFile, out_dir, echo=print) -> int:
    """Execute a validated scenario, writing artifacts under ``out_dir``.

    Prints one summary line per robot through ``echo`` and returns the
    process exit code for the outcome.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    if sc.mode == "field_plot":
        (out / "field.svg").write_text(render_field(sc.field, sc.bounds, sc.grid_n))
        echo(f"field plot: lam={sc.field.lam!r} p=({sc.field.p.x!r}, {sc.field.p.y!r}) -> field.svg")
        return EXIT_OK

    if sc.mode == "static":
        log = run_single(sc.world, sc.gains, sc.start, sc.sim)
        log.write_csv(out / "trajectory.csv")
        bounds = _auto_bounds(sc)
        (out / "field.svg").write_text(render_field(sc.world, bounds, sc.grid_n or 25))
        figures.static_figure(sc.world, sc.start, log, out / "trajectory.svg")
        t_final = log.column("t")[-1]
        min_clear = min(log.column("clearance"))
        echo(
            f"robot 0: status={log.status} t_final={t_final:.6g} "
            f"min_clearance={min_clear:.6g}"
        )
        return _STATUS_EXIT[log.status]

    result = run_multi(sc.agents, sc.sim)
    ids = [a.id for a in sc.agents]
    for agent, log in zip(sc.agents, result.logs):
        log.write_csv(out / f"agent_{agent.id}.csv")
    _write_summary_csv(out / "summary.csv", result, ids)
    figures.multi_paths_figure(sc.agents, result, out / "paths.svg")
    figures.pair_distance_figure(sc.params, result, out / "min_distance.svg")
    for i, aid in enumerate(ids):
        t_arr = result.arrival_times[i]
        arr = f"{t_arr:.6g}" if t_arr is not None else "never"
        pair_min = min(result.logs[i].column("min_pair_dist"), default=math.inf)
        echo(
            f"agent {aid}: status={result.agent_status[i]} t_arrive={arr} "
            f"min_pair={pair_min:.6g}"
        )
    echo(
        f"fleet: status={result.status} t_final={result.t_final:.6g} "
        f"min_pair={result.min_pair_distance:.6g} "
        f"chatter_max_window={result.chatter_max_in_window}"
    )
    return _STATUS_EXIT[result.status]
