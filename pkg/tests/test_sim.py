"""Unicycle stepping, the trajectory log, the steering law, and closed-loop
runs of the single-robot simulator.

Constant-twist oracle: with u = omega = 1 from the origin at heading 0 the
exact step lands on (sin dt, 1 - cos dt) with heading dt; the integrator's
merged-midpoint form reproduces it with the classical dt^5 defect
(~3.5e-4 * dt^5 for this arc).
"""

import math
import random

import pytest

from vfield import (
    ControlGains,
    GoalFrame,
    Obstacle,
    Pose,
    SimConfig,
    StaticWorld,
    STATUS_COLLISION,
    STATUS_CONVERGED,
    STATUS_TIMEOUT,
    TrajectoryLog,
    Vec2,
    control_single,
    motion_plan,
    run_single,
    unicycle_step,
    wrap_angle,
)


def empty_world(goal: GoalFrame) -> StaticWorld:
    return StaticWorld.from_obstacles(goal, 0.0625, 0.0625, [])


class TestUnicycleStep:
    @pytest.mark.parametrize("dt,tol", [(0.01, 1e-12), (0.5, 1e-4)])
    def test_constant_twist_arc(self, dt, tol):
        p = unicycle_step(Pose(Vec2(0.0, 0.0), 0.0), 1.0, 1.0, dt)
        assert p.r.x == pytest.approx(math.sin(dt), abs=tol)
        assert p.r.y == pytest.approx(1.0 - math.cos(dt), abs=tol)
        assert p.theta == dt

    def test_straight_line(self):
        th = 0.3
        p = unicycle_step(Pose(Vec2(1.0, -2.0), th), 2.0, 0.0, 0.25)
        assert p.r.x == pytest.approx(1.0 + 0.5 * math.cos(th), rel=1e-14)
        assert p.r.y == pytest.approx(-2.0 + 0.5 * math.sin(th), rel=1e-14)
        assert p.theta == th

    def test_pure_rotation_holds_position(self):
        p = unicycle_step(Pose(Vec2(1.5, 2.5), 0.2), 0.0, 3.0, 0.125)
        assert (p.r.x, p.r.y) == (1.5, 2.5)
        assert p.theta == 0.2 + 3.0 * 0.125

    def test_heading_wraps(self):
        p = unicycle_step(Pose(Vec2(0.0, 0.0), 3.0), 0.0, 1.0, 0.5)
        assert p.theta == wrap_angle(3.5)
        assert p.theta < 0.0

    def test_reversible(self):
        start = Pose(Vec2(0.3, -0.7), 1.1)
        fwd = unicycle_step(start, 1.3, 0.9, 0.01)
        back = unicycle_step(fwd, -1.3, -0.9, 0.01)
        assert back.r.x == pytest.approx(start.r.x, abs=1e-12)
        assert back.r.y == pytest.approx(start.r.y, abs=1e-12)
        assert back.theta == pytest.approx(start.theta, abs=1e-12)


class TestValidation:
    def test_gains_positive(self):
        with pytest.raises(ValueError):
            ControlGains(0.0, 1.0)
        with pytest.raises(ValueError):
            ControlGains(1.0, -2.0)

    def test_sim_config(self):
        with pytest.raises(ValueError):
            SimConfig(t_max=1.0, dt=0.0)
        with pytest.raises(ValueError):
            SimConfig(t_max=0.001, dt=0.01)
        with pytest.raises(ValueError):
            SimConfig(t_max=1.0, goal_pos_tol=0.0)
        with pytest.raises(ValueError):
            SimConfig(t_max=1.0, fd_step=-1e-6)

    def test_pose_frozen(self):
        p = Pose(Vec2(0.0, 0.0), 0.0)
        with pytest.raises(AttributeError):
            p.theta = 1.0


class TestTrajectoryLog:
    def test_columns_and_rows(self):
        log = TrajectoryLog()
        assert log.columns == ("t", "x", "y", "theta", "u", "omega", "phi", "clearance")
        log.append(0.0, 1.0, 2.0, 0.5, 0.1, -0.2, 0.4, 3.0)
        log.append(0.1, 1.1, 2.1, 0.6, 0.1, -0.1, 0.5, 2.9)
        assert len(log) == 2
        assert log.row(1) == (0.1, 1.1, 2.1, 0.6, 0.1, -0.1, 0.5, 2.9)
        assert list(log.column("y")) == [2.0, 2.1]

    def test_append_arity_checked(self):
        log = TrajectoryLog()
        with pytest.raises(ValueError):
            log.append(0.0, 1.0)

    def test_csv_round_trip_exact(self):
        log = TrajectoryLog()
        ugly = 0.1 + 0.2  # 0.30000000000000004
        log.append(ugly, -1.0 / 3.0, 2.0, 0.5, 0.1, -0.2, 0.4, math.inf)
        text = log.to_csv()
        lines = text.splitlines()
        assert lines[0] == "t,x,y,theta,u,omega,phi,clearance"
        fields = lines[1].split(",")
        assert fields[0] == "0.30000000000000004"
        assert float(fields[1]) == -1.0 / 3.0
        assert fields[7] == "inf"

    def test_write_csv(self, tmp_path):
        log = TrajectoryLog()
        log.append(0.0, 1.0, 2.0, 0.5, 0.1, -0.2, 0.4, 3.0)
        path = tmp_path / "traj.csv"
        log.write_csv(path)
        assert path.read_text() == log.to_csv()

    def test_extra_integer_column(self):
        log = TrajectoryLog(("min_pair_dist", "n_neighbors"))
        log.append(0.0, 1.0, 2.0, 0.5, 0.1, -0.2, 0.4, 3.0, 0.75, 2)
        assert log.column("n_neighbors") == [2]
        assert log.to_csv().splitlines()[1].endswith(",0.75,2")


class TestSteering:
    def test_speed_law(self):
        goal = GoalFrame(Vec2(0.0, 0.0), 0.0)
        w = empty_world(goal)
        gains = ControlGains(0.5, 2.0)
        u, _, _ = control_single(w, gains, Pose(Vec2(3.0, 4.0), 0.0))
        assert u == 0.5 * math.tanh(25.0)
        u0, _, _ = control_single(w, gains, Pose(Vec2(0.0, 0.0), 1.0))
        assert u0 == 0.0

    def test_heading_error_term(self):
        # on the arrival axis behind the goal the plan heading is exactly the
        # goal heading, so omega reduces to the proportional term
        goal = GoalFrame(Vec2(0.0, 0.0), 0.0)
        w = empty_world(goal)
        gains = ControlGains(1e-9, 2.0)
        th = 0.8
        u, om, phi = control_single(w, gains, Pose(Vec2(-2.0, 0.0), th))
        assert phi == 0.0
        # the feed-forward residue scales with the (tiny) speed
        assert om == pytest.approx(-gains.k_omega * th, abs=1e-8)

    def test_feedforward_matches_plan_rotation_rate(self):
        """omega minus the proportional term equals the rate at which the
        plan heading turns under pure translation along the current heading,
        at one hundred random states in and around a blend annulus."""
        rng = random.Random(7)
        goal = GoalFrame(Vec2(0.0, 0.0), 0.3)
        ob = Obstacle(Vec2(1.0, 0.4), 0.125)
        w = StaticWorld.from_obstacles(goal, 0.0625, 0.0625, [ob])
        gains = ControlGains(1.5, 3.0)
        checked = 0
        while checked < 100:
            if rng.random() < 0.5:
                r = Vec2(rng.uniform(-2.0, 2.5), rng.uniform(-2.0, 2.5))
                if (r - ob.center).norm() < 0.33:
                    continue
            else:
                ang = rng.uniform(0.0, 2.0 * math.pi)
                rad = rng.uniform(0.26, 0.31)
                r = ob.center + Vec2(math.cos(ang), math.sin(ang)) * rad
            if (r - goal.position).norm() < 0.05:
                continue
            f = motion_plan(w, r)
            if f.norm() < 1e-2:
                continue  # too near a singular line for a stable comparison
            th = rng.uniform(-math.pi, math.pi)
            u, om, phi = control_single(w, gains, Pose(r, th))
            phidot = om + gains.k_omega * wrap_angle(th - phi)
            d = 1e-6
            hx, hy = math.cos(th), math.sin(th)
            fp = motion_plan(w, Vec2(r.x + d * hx, r.y + d * hy))
            fm = motion_plan(w, Vec2(r.x - d * hx, r.y - d * hy))
            dphi = wrap_angle(math.atan2(fp.y, fp.x) - math.atan2(fm.y, fm.x))
            oracle = u * dphi / (2.0 * d)
            assert phidot == pytest.approx(oracle, abs=1e-3 * (1.0 + abs(oracle)))
            checked += 1


class TestRunSingle:
    def test_straight_approach_stays_on_axis(self):
        goal = GoalFrame(Vec2(0.5, 0.0), 0.0)
        w = empty_world(goal)
        log = run_single(w, ControlGains(1.0, 4.0), Pose(Vec2(-2.0, 0.0), 0.0),
                         SimConfig(t_max=40.0, dt=0.01, goal_pos_tol=0.05, goal_ang_tol=0.1))
        assert log.status == STATUS_CONVERGED
        ys = log.column("y")
        ths = log.column("theta")
        assert max(abs(v) for v in ys) == 0.0
        assert max(abs(v) for v in ths) == 0.0
        xs = log.column("x")
        dists = [abs(x - 0.5) for x in xs]
        assert all(a > b for a, b in zip(dists, dists[1:]))

    def test_converges_from_generic_start(self):
        goal = GoalFrame(Vec2(0.0, 0.0), 0.5)
        w = empty_world(goal)
        log = run_single(w, ControlGains(2.0, 6.0), Pose(Vec2(-1.0, 0.8), -2.0),
                         SimConfig(t_max=60.0, dt=0.005, goal_pos_tol=0.02, goal_ang_tol=0.05))
        assert log.status == STATUS_CONVERGED
        fx, fy, fth = log.column("x")[-1], log.column("y")[-1], log.column("theta")[-1]
        assert math.hypot(fx, fy) < 0.02
        assert abs(wrap_angle(fth - 0.5)) < 0.05
        assert min(log.column("u")) >= 0.0

    def test_time_grid_is_uniform(self):
        goal = GoalFrame(Vec2(10.0, 0.0), 0.0)
        w = empty_world(goal)
        dt = 0.001
        log = run_single(w, ControlGains(1.0, 4.0), Pose(Vec2(0.0, 0.0), 0.0),
                         SimConfig(t_max=0.02, dt=dt))
        ts = log.column("t")
        for i, t in enumerate(ts):
            assert t == i * dt

    def test_heading_gate_blocks_convergence(self):
        # already at the goal position, but pointed the wrong way
        goal = GoalFrame(Vec2(0.0, 0.0), 0.0)
        w = empty_world(goal)
        log = run_single(w, ControlGains(1.0, 4.0), Pose(Vec2(0.001, 0.0), 1.0),
                         SimConfig(t_max=5.0, dt=0.001, goal_pos_tol=0.01, goal_ang_tol=0.01))
        assert log.status == STATUS_CONVERGED
        assert 1.0 < log.column("t")[-1] < 1.5  # exp(-4t) decay to 0.01
        assert abs(log.column("x")[-1]) < 0.01

    def test_timeout_caps_final_time(self):
        goal = GoalFrame(Vec2(50.0, 0.0), 0.0)
        w = empty_world(goal)
        log = run_single(w, ControlGains(1.0, 4.0), Pose(Vec2(0.0, 0.0), 0.0),
                         SimConfig(t_max=0.0105, dt=0.001))
        assert log.status == STATUS_TIMEOUT
        assert log.column("t")[-1] == 0.0105

    def test_collision_recorded_at_first_contact(self):
        goal = GoalFrame(Vec2(0.0, 0.0), 0.0)
        ob = Obstacle(Vec2(1.0, 0.0), 0.125)
        w = StaticWorld.from_obstacles(goal, 0.0625, 0.0625, [ob])
        # robot disk overlaps the obstacle disk from the start
        log = run_single(w, ControlGains(1.0, 4.0), Pose(Vec2(1.15, 0.0), 0.0),
                         SimConfig(t_max=1.0))
        assert log.status == STATUS_COLLISION
        assert len(log) == 1
        assert log.column("clearance")[0] < 0.0

    def test_exponential_heading_alignment_rate(self):
        """With the robot pinned (k_u ~ 0) the heading error contracts at
        rate k_omega; five time constants land within the discretization's
        one-percent bias of the continuous decay."""
        goal = GoalFrame(Vec2(100.0, 0.0), 0.0)
        w = empty_world(goal)
        k_om = 4.0
        th0 = 2.0
        log = run_single(w, ControlGains(1e-9, k_om), Pose(Vec2(0.0, 0.0), th0),
                         SimConfig(t_max=1.25, dt=1e-3))
        assert log.status == STATUS_TIMEOUT
        final = abs(log.column("theta")[-1])
        target = th0 * math.exp(-5.0)
        assert 0.9 * target < final < 1.05 * target

    def test_clearance_column_tracks_world(self):
        goal = GoalFrame(Vec2(0.0, 0.0), 0.0)
        ob = Obstacle(Vec2(0.6, 0.4), 0.125)
        w = StaticWorld.from_obstacles(goal, 0.0625, 0.0625, [ob])
        log = run_single(w, ControlGains(1.0, 4.0), Pose(Vec2(1.2, 0.8), -2.5),
                         SimConfig(t_max=0.05, dt=0.01))
        for i in range(len(log)):
            r = Vec2(log.column("x")[i], log.column("y")[i])
            assert log.column("clearance")[i] == w.clearance(r)
