import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from posrate.calibration import ForceProfile
from posrate.engine import (
    ControlFrame,
    ElasticParams,
    EngineParams,
    HybridEngine,
    Mode,
    ZonePose,
    classify,
    integrate_boundary,
    segment_exit_point,
)
from posrate.transfer import ConfigError, GainCurve

J_DISC = 0.5 * 1.0 * 0.02 * 0.02      # default zone: 1 kg disc, 20 mm radius
MU = 3e-3


def default_zone(**kw) -> ZonePose:
    base = dict(centre=(0.0, 0.0), radius=20.0, exit_point=(20.0, 0.0))
    base.update(kw)
    return ZonePose(**base)


class TestClassify:
    def test_inside_boundary_outside(self):
        zone = default_zone()
        assert classify((0.0, 0.0), zone)[0] is Mode.ISOTONIC
        assert classify((20.0, 0.0), zone)[0] is Mode.ISOTONIC  # rim is inside
        assert classify((20.000001, 0.0), zone)[0] is Mode.ELASTIC

    def test_crossing_point_reported(self):
        zone = default_zone()
        mode, crossing = classify((25.0, 0.0), zone, last_p_mm=(15.0, 0.0))
        assert mode is Mode.ELASTIC
        assert crossing == pytest.approx((20.0, 0.0))

    def test_no_crossing_when_already_outside(self):
        zone = default_zone()
        mode, crossing = classify((25.0, 0.0), zone, last_p_mm=(23.0, 0.0))
        assert mode is Mode.ELASTIC
        assert crossing is None


class TestSegmentExitPoint:
    def _oracle(self, a, b, centre, radius):
        # independent arithmetic: roots of |a + s(b-a) - c|^2 = r^2
        fx, fy = a[0] - centre[0], a[1] - centre[1]
        dx, dy = b[0] - a[0], b[1] - a[1]
        coeffs = [dx * dx + dy * dy,
                  2.0 * (fx * dx + fy * dy),
                  fx * fx + fy * fy - radius * radius]
        roots = np.roots(coeffs)
        real = sorted(float(r.real) for r in roots if abs(r.imag) < 1e-12)
        s = next(r for r in real if r >= -1e-12)
        return (a[0] + s * dx, a[1] + s * dy)

    def test_matches_polynomial_roots(self):
        rng = np.random.default_rng(11)
        centre, radius = (3.0, -2.0), 17.0
        for _ in range(100):
            ang = rng.uniform(0.0, 2.0 * math.pi)
            a = (centre[0] + rng.uniform(0.0, radius * 0.95) * math.cos(ang),
                 centre[1] + rng.uniform(0.0, radius * 0.95) * math.sin(ang))
            out_ang = rng.uniform(0.0, 2.0 * math.pi)
            b = (centre[0] + rng.uniform(radius * 1.01, radius * 3.0) * math.cos(out_ang),
                 centre[1] + rng.uniform(radius * 1.01, radius * 3.0) * math.sin(out_ang))
            got = segment_exit_point(a, b, centre, radius)
            want = self._oracle(a, b, centre, radius)
            assert got == pytest.approx(want, abs=1e-9)
            r = math.hypot(got[0] - centre[0], got[1] - centre[1])
            assert r == pytest.approx(radius, abs=1e-9)

    def test_degenerate_segment_rejected(self):
        with pytest.raises(ValueError):
            segment_exit_point((1.0, 1.0), (1.0, 1.0), (0.0, 0.0), 20.0)


class TestIntegrateBoundary:
    def test_single_step_decay_exact(self):
        zone = default_zone(omega=5.0)
        z1 = integrate_boundary(zone, (20.0, 0.0), 1e-3)  # NP = 0, pure decay
        assert z1.omega == pytest.approx(5.0 * math.exp(-MU * 1e-3 / J_DISC),
                                         rel=1e-14)

    def test_free_decay_hits_1_over_e_at_j_over_mu(self):
        # ride the anchor radially so the torque stays exactly zero
        zone = default_zone(omega=5.0)
        t_c = J_DISC / MU
        n = int(t_c // 1e-3)
        for _ in range(n):
            nx, ny = zone.exit_point
            r = math.hypot(nx, ny)
            zone = integrate_boundary(zone, (nx * (r + 2.0) / r, ny * (r + 2.0) / r), 1e-3)
        nx, ny = zone.exit_point
        r = math.hypot(nx, ny)
        zone = integrate_boundary(zone, (nx * (r + 2.0) / r, ny * (r + 2.0) / r),
                                  t_c - n * 1e-3)
        assert zone.omega == pytest.approx(5.0 / math.e, rel=1e-12)

    def test_rotation_toward_pull(self):
        zone = default_zone()
        z1 = integrate_boundary(zone, (20.0, 20.0), 1e-3)
        # pull is counter-clockwise of the anchor: omega goes positive
        assert z1.omega > 0.0
        assert z1.exit_point[1] > 0.0

    def test_matches_dense_rk4(self):
        # independent oracle: classical RK4 on the same ODE at 0.1 ms
        p = (0.0, 40.0)
        k = 60.0

        def deriv(state):
            th, om = state
            n = (20.0 * math.cos(th), 20.0 * math.sin(th))
            tau = k * ((n[0] * (p[1] - n[1]) - n[1] * (p[0] - n[0])) * 1e-6)
            return np.array([om, (tau - MU * om) / J_DISC])

        h = 1e-4
        state = np.array([0.0, 0.0])
        rk = {}
        for i in range(int(0.5 / h)):
            k1 = deriv(state)
            k2 = deriv(state + h / 2 * k1)
            k3 = deriv(state + h / 2 * k2)
            k4 = deriv(state + h * k3)
            state = state + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            t = (i + 1) * h
            for probe in (0.2, 0.5):
                if abs(t - probe) < h / 2:
                    rk[probe] = float(state[0])

        zone = default_zone()
        got = {}
        for i in range(500):
            zone = integrate_boundary(zone, p, 1e-3)
            t = (i + 1) * 1e-3
            for probe in (0.2, 0.5):
                if abs(t - probe) < 5e-4:
                    got[probe] = math.atan2(zone.exit_point[1], zone.exit_point[0])
        for probe in (0.2, 0.5):
            assert abs(got[probe] - rk[probe]) < 5e-3  # rad

    def test_anchor_stays_on_circle(self):
        zone = default_zone(translation_gain=0.4)
        for _ in range(2000):
            zone = integrate_boundary(zone, (25.0, 30.0), 1e-3)
            r = math.hypot(zone.exit_point[0] - zone.centre[0],
                           zone.exit_point[1] - zone.centre[1])
            assert r == pytest.approx(20.0, abs=1e-9)

    def test_translation_drifts_centre(self):
        zone = default_zone(translation_gain=0.5)
        p = (30.0, 0.0)
        z1 = integrate_boundary(zone, p, 1e-3)
        # centre drifts by lambda * NP * dt; NP = (10, 0) here
        assert z1.centre[0] == pytest.approx(0.5 * 10.0 * 1e-3, rel=1e-12)
        assert z1.centre[1] == 0.0

    def test_zero_friction_uses_euler(self):
        zone = default_zone(friction=0.0, omega=1.0)
        z1 = integrate_boundary(zone, (20.0, 25.0), 1e-3)
        tau = 60.0 * (20.0 * 25.0) * 1e-6
        assert z1.omega == pytest.approx(1.0 + tau * 1e-3 / J_DISC, rel=1e-12)

    def test_inertia_override(self):
        zone = default_zone(inertia=1e-3, omega=2.0)
        z1 = integrate_boundary(zone, (20.0, 0.0), 1e-3)
        assert z1.omega == pytest.approx(2.0 * math.exp(-MU * 1e-3 / 1e-3), rel=1e-14)

    def test_requires_excursion_and_positive_dt(self):
        with pytest.raises(ValueError):
            integrate_boundary(default_zone(exit_point=None), (0.0, 0.0), 1e-3)
        with pytest.raises(ValueError):
            integrate_boundary(default_zone(), (0.0, 0.0), 0.0)


class TestEngineIsotonic:
    def test_constant_gain_path(self):
        eng = HybridEngine(EngineParams(curve=GainCurve.constant(2.0)))
        eng.step(0.0, 0.0)
        res = eng.step(0.5, -0.25)
        assert res.mode is Mode.ISOTONIC
        assert (res.dx_mm, res.dy_mm) == (1.0, -0.5)
        assert eng.pointer == (1.0, -0.5)

    def test_first_contact_produces_no_delta(self):
        eng = HybridEngine()
        res = eng.step(5.0, 5.0)
        assert (res.dx_mm, res.dy_mm) == (0.0, 0.0)

    def test_lift_rebases_without_jump(self):
        eng = HybridEngine()
        eng.step(0.0, 0.0)
        eng.step(1.0, 0.0)
        res = eng.step(0.0, 0.0, contact=False)
        assert (res.dx_mm, res.dy_mm) == (0.0, 0.0)
        res = eng.step(-8.0, 3.0)       # re-touch far away: no jump
        assert (res.dx_mm, res.dy_mm) == (0.0, 0.0)
        res = eng.step(-7.5, 3.0)
        assert res.dx_mm == pytest.approx(1.0)

    def test_pointer_accel_uses_speed(self):
        eng = HybridEngine(EngineParams(curve=GainCurve.pointer_acceleration()))
        eng.step(0.0, 0.0)
        res = eng.step(0.1, 0.0)        # 100 mm/s
        g = 2.2 + (100.0 - 60.0) / 90.0 * 1.4
        assert res.dx_mm == pytest.approx(0.1 * g, rel=1e-12)


class TestEngineTransition:
    def approach_frames(self, speed=150.0, n=200):
        # straight +x run from the centre across the rim
        return [ControlFrame(i * 1e-3, i * speed * 1e-3, 0.0) for i in range(n)]

    def test_first_elastic_speed_equals_exit_speed(self):
        eng = HybridEngine()
        results = [eng.feed(f) for f in self.approach_frames()]
        modes = [r.mode for r in results]
        k = modes.index(Mode.ELASTIC)
        v_before = math.hypot(results[k - 1].dx_mm, results[k - 1].dy_mm) / 1e-3
        v_after = math.hypot(results[k].dx_mm, results[k].dy_mm) / 1e-3
        assert v_after == pytest.approx(v_before, rel=1e-12)

    def test_exit_point_on_rim(self):
        eng = HybridEngine()
        for f in self.approach_frames():
            res = eng.feed(f)
        assert res.mode is Mode.ELASTIC
        assert math.hypot(res.n_x, res.n_y) == pytest.approx(20.0, abs=1e-6)

    def test_radial_mapping_speed_law(self):
        # hold a fixed penetration: speed settles on the cubic force law
        params = EngineParams(mapping="radial")
        eng = HybridEngine(params)
        eng.step(19.0, 0.0)
        pen = 1.5
        res = eng.step(20.0 + pen, 0.0)
        force = params.elastic.spring_k * pen * 1e-3
        want = 1e3 * params.elastic.cubic_gain * force ** 3
        assert res.dx_mm / 1e-3 == pytest.approx(want, rel=1e-12)
        assert res.dy_mm == 0.0

    def test_smooth_blend_converges_to_rate_target(self):
        params = EngineParams()
        eng = HybridEngine(params)
        eng.step(19.0, 0.0)
        pen = 1.5
        res = None
        for _ in range(6000):            # 6 s >> 0.3 s blend constant
            res = eng.step(20.0 + pen, 0.0)
        n_r = math.hypot(res.n_x, res.n_y)
        pull = 20.0 + pen - n_r if abs(res.n_y) < 1e-9 else None
        assert pull is not None          # straight push: anchor stays on axis
        want = params.elastic.rate_gain * pull
        assert res.dx_mm / 1e-3 == pytest.approx(want, rel=1e-6)

    def test_vector_blend_first_frame_carries_velocity(self):
        params = EngineParams(elastic=ElasticParams(vector_blend=True))
        eng = HybridEngine(params)
        results = [eng.feed(f) for f in self.approach_frames()]
        modes = [r.mode for r in results]
        k = modes.index(Mode.ELASTIC)
        v_before = (results[k - 1].dx_mm / 1e-3, results[k - 1].dy_mm / 1e-3)
        v_after = (results[k].dx_mm / 1e-3, results[k].dy_mm / 1e-3)
        assert v_after == pytest.approx(v_before, rel=1e-12)

    def test_blend_constant_as_rate(self):
        tau_form = EngineParams(elastic=ElasticParams(blend_constant=0.25))
        rate_form = EngineParams(elastic=ElasticParams(blend_constant=4.0,
                                                       blend_constant_is_rate=True))
        assert tau_form.elastic.decay_rate() == rate_form.elastic.decay_rate()

    def test_reentry_resumes_position_control(self):
        eng = HybridEngine()
        eng.step(19.0, 0.0)
        eng.step(22.0, 0.0)              # out
        assert eng.mode is Mode.ELASTIC
        res = eng.step(18.0, 0.0)        # back in
        assert res.mode is Mode.ISOTONIC
        # full delta from the last outside sample, at constant gain 2
        assert res.dx_mm == pytest.approx(2.0 * (18.0 - 22.0), rel=1e-12)
        assert eng.zone.omega == 0.0
        assert eng.zone.exit_point is None

    def test_touchdown_outside_anchors_without_velocity(self):
        eng = HybridEngine()
        res = eng.step(30.0, 0.0)        # first touch already past the rim
        assert res.mode is Mode.ELASTIC
        assert (res.n_x, res.n_y) == pytest.approx((20.0, 0.0))
        assert (res.dx_mm, res.dy_mm) == (0.0, 0.0)
        # rate builds from zero as the blend opens up
        later = None
        for _ in range(200):
            later = eng.step(30.0, 0.0)
        assert math.hypot(later.dx_mm, later.dy_mm) > 0.0

    def test_lift_in_band_ends_excursion(self):
        eng = HybridEngine()
        eng.step(19.0, 0.0)
        eng.step(25.0, 0.0)
        assert eng.mode is Mode.ELASTIC
        eng.step(25.0, 0.0, contact=False)
        assert eng.mode is Mode.ISOTONIC
        res = eng.step(5.0, 5.0)         # re-touch inside: plain rebase
        assert (res.dx_mm, res.dy_mm) == (0.0, 0.0)


class TestEngineFeed:
    def test_feed_matches_manual_stepping(self):
        # 5 ms frames: four held steps plus the sample step, summed
        script = [ControlFrame(0.005 * i, 3.0 * i, -1.0 * i) for i in range(30)]
        a = HybridEngine()
        fed = [a.feed(f) for f in script]

        b = HybridEngine()
        b.step(script[0].x_mm, script[0].y_mm)  # feed primes on the first frame
        manual = []
        prev = script[0]
        for f in script[1:]:
            dx = dy = 0.0
            last = None
            for i in range(5):
                s = prev if i < 4 else f
                last = b.step(s.x_mm, s.y_mm, s.contact)
                dx += last.dx_mm
                dy += last.dy_mm
            manual.append((dx, dy, last.mode))
            prev = f
        for got, want in zip(fed[1:], manual):
            assert got.dx_mm == want[0]
            assert got.dy_mm == want[1]
            assert got.mode is want[2]

    def test_same_step_frame_defers_sample(self):
        eng = HybridEngine()
        eng.feed(ControlFrame(0.0, 0.0, 0.0))
        r = eng.feed(ControlFrame(0.0004, 1.0, 0.0))   # same internal step
        assert (r.dx_mm, r.dy_mm) == (0.0, 0.0)
        r = eng.feed(ControlFrame(0.001, 2.0, 0.0))    # delta applies here
        assert r.dx_mm == pytest.approx(4.0)

    def test_backwards_time_rejected(self):
        eng = HybridEngine()
        eng.feed(ControlFrame(0.0, 0.0, 0.0))
        eng.feed(ControlFrame(0.005, 1.0, 0.0))
        with pytest.raises(ValueError):
            eng.feed(ControlFrame(0.001, 2.0, 0.0))

    def test_reset_restores_initial_state(self):
        eng = HybridEngine()
        script = [ControlFrame(i * 1e-3, i * 0.2, 0.0) for i in range(150)]
        first = [eng.feed(f) for f in script]
        eng.reset()
        second = [eng.feed(f) for f in script]
        for a, b in zip(first, second):
            assert (a.dx_mm, a.dy_mm, a.mode) == (b.dx_mm, b.dy_mm, b.mode)

    @given(st.integers(0, 2 ** 31 - 1))
    def test_determinism_under_random_scripts(self, seed):
        rng = np.random.default_rng(seed)
        steps = rng.uniform(-0.6, 0.6, size=(60, 2))
        contact = rng.uniform(size=60) > 0.1
        pos = np.cumsum(steps, axis=0)
        script = [ControlFrame(i * 1e-3, float(pos[i, 0]), float(pos[i, 1]),
                               bool(contact[i])) for i in range(60)]
        a = HybridEngine()
        b = HybridEngine()
        for f in script:
            ra = a.feed(f)
            rb = b.feed(f)
            assert (ra.dx_mm, ra.dy_mm, ra.mode) == (rb.dx_mm, rb.dy_mm, rb.mode)


class TestEngineParams:
    def test_dict_round_trip(self):
        params = EngineParams(zone_centre=(3.0, -1.0), zone_radius=15.0,
                              curve=GainCurve.pointer_acceleration(),
                              mapping="radial", translation_gain=0.1,
                              speed_smoothing_tau=0.02)
        again = EngineParams.from_dict(params.to_dict())
        assert again.to_dict() == params.to_dict()

    def test_unknown_keys_rejected(self):
        with pytest.raises(ConfigError):
            EngineParams.from_dict({"zone_radius": 20.0, "bogus": 1})

    def test_bad_mapping_rejected(self):
        with pytest.raises(ConfigError):
            EngineParams(mapping="cubic")

    def test_profile_sets_zone_geometry(self):
        prof = ForceProfile(centre=(4.0, -2.0), radius=18.0,
                            angles_deg=tuple(45.0 * i for i in range(8)),
                            max_penetration=(2.0,) * 8)
        params = EngineParams(profile=prof)
        assert params.zone_centre == (4.0, -2.0)
        assert params.zone_radius == 18.0

    def test_profile_drives_rate_depth(self):
        # band twice as deep at 0 deg than the reference: a 2 mm push
        # counts as half the reference depth
        prof = ForceProfile(centre=(0.0, 0.0), radius=20.0,
                            angles_deg=tuple(45.0 * i for i in range(8)),
                            max_penetration=(4.0,) + (2.0,) * 7)
        params = EngineParams(profile=prof)
        eng = HybridEngine(params)
        eng.step(22.0, 0.0)              # touch down outside, V0 = 0
        res = None
        for _ in range(5000):
            res = eng.step(22.0, 0.0)
        # steady state: rate_gain * normalized pull * reference depth
        n_r = math.hypot(res.n_x, res.n_y)
        pull = 22.0 - n_r
        want = params.elastic.rate_gain * (pull / 4.0) * params.elastic.max_penetration
        got = math.hypot(res.dx_mm, res.dy_mm) / 1e-3
        assert got == pytest.approx(want, rel=1e-6)
