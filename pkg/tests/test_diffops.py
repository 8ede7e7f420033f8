import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nufd import (
    ALL_SECOND_SPECS,
    D2_CORRECTED,
    FirstDiffKind,
    GridFunction,
    Mesh,
    SecondDiffSpec,
    WindowError,
    apply_operator,
    build_uniform,
    closed_second_difference,
    d2_corrected,
    first_difference,
    make_polynomial,
    make_sinusoid,
    sample,
    scaled_local_difference,
    second_difference,
    smoothness_ratios,
)
from nufd.diffops import derivative_order

from helpers import EPS, random_mesh, stencil_scale

F, B, C = FirstDiffKind.FORWARD, FirstDiffKind.BACKWARD, FirstDiffKind.CENTRAL


def _kinds(spec):
    return (spec.outer.value, spec.inner.value)


class TestGridFunction:
    def test_window_validation(self):
        m = build_uniform(0, 1, 5)
        with pytest.raises(ValueError):
            GridFunction(m, 3, np.zeros(4))
        with pytest.raises(ValueError):
            GridFunction(m, -1, np.zeros(3))
        with pytest.raises(ValueError):
            GridFunction(m, 0, np.array([1.0, np.inf]))
        with pytest.raises(ValueError):
            GridFunction(m, 0, np.array([]))

    def test_window_accessors(self):
        m = build_uniform(0, 1, 6)
        g = GridFunction(m, 2, np.array([1.0, 2.0, 3.0]))
        assert g.last_index == 4
        np.testing.assert_array_equal(g.indices, [2, 3, 4])
        np.testing.assert_array_equal(g.t, m.points[2:5])
        assert g.value_at(3) == 2.0
        with pytest.raises(IndexError):
            g.value_at(5)

    def test_restrict(self):
        m = build_uniform(0, 1, 6)
        g = GridFunction(m, 1, np.array([1.0, 2.0, 3.0, 4.0]))
        r = g.restrict(2, 3)
        assert r.first_index == 2
        np.testing.assert_array_equal(r.values, [2.0, 3.0])
        with pytest.raises(ValueError):
            g.restrict(0, 3)

    def test_values_immutable(self):
        g = GridFunction(build_uniform(0, 1, 3), 0, np.zeros(3))
        with pytest.raises(ValueError):
            g.values[0] = 1.0


class TestFirstDifference:
    def test_forward_exact_on_linear(self):
        rng = np.random.default_rng(0)
        m = random_mesh(rng, 10)
        u = sample(make_polynomial([0, 2]), 0, m)
        out = first_difference(F, u)
        assert out.first_index == 0 and len(out) == 10
        np.testing.assert_allclose(out.values, 2.0, rtol=1e-13)

    def test_windows(self):
        m = build_uniform(0, 1, 7)
        u = sample(make_polynomial([1, 1]), 0, m)
        fw = first_difference(F, u)
        bw = first_difference(B, u)
        ce = first_difference(C, u)
        assert (fw.first_index, fw.last_index) == (0, 5)
        assert (bw.first_index, bw.last_index) == (1, 6)
        assert (ce.first_index, ce.last_index) == (1, 5)

    def test_central_on_quadratic_uniform(self):
        # (t_{k+1}^2 - t_{k-1}^2) / (t_{k+1} - t_{k-1}) = 2 t_k on equal steps
        m = build_uniform(0, 1, 23)
        out = first_difference(C, sample(make_polynomial([0, 0, 1]), 0, m))
        np.testing.assert_allclose(out.values, 2 * out.t, rtol=1e-12, atol=1e-15)

    def test_central_sgei_on_refined_uniform_mesh(self):
        f = make_sinusoid(amplitude=-1.0, frequency=4 * math.pi)
        m = build_uniform(0, 1, 23)
        series = scaled_local_difference(
            sample(f, 1, m), first_difference(C, sample(f, 0, m))
        )
        assert series.sgei == pytest.approx(0.05349775611168426, rel=1e-12)

    def test_window_too_small(self):
        m = build_uniform(0, 1, 2)
        u = sample(make_polynomial([1]), 0, m)
        first_difference(F, u)  # 2 points suffice here
        with pytest.raises(WindowError):
            first_difference(C, u)
        with pytest.raises(WindowError):
            first_difference(F, u.restrict(0, 0))


class TestShiftIdentity:
    def test_forward_equals_shifted_backward_bitwise(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            m = random_mesh(rng, 12)
            u = GridFunction(m, 0, rng.normal(size=13))
            fw = first_difference(F, u)
            bw = first_difference(B, u)
            # same divided differences, indexed one apart
            np.testing.assert_array_equal(fw.values, bw.values)
            assert bw.first_index == fw.first_index + 1


class TestWeightedAverageIdentity:
    def test_central_is_step_weighted_average(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            m = random_mesh(rng, 15)
            u = GridFunction(m, 0, rng.normal(size=16))
            fw = first_difference(F, u).values
            bw = first_difference(B, u).values
            ce = first_difference(C, u).values
            h = m.steps
            hk, hkm1 = h[1:], h[:-1]
            combo = (hk * fw[1:] + hkm1 * bw[:-1]) / (hk + hkm1)
            scale = stencil_scale(("c",), m.points, u.values)
            assert np.all(np.abs(ce - combo) <= 8 * EPS * scale)

    def test_plain_average_on_uniform_mesh(self):
        m = build_uniform(0, 1, 23)
        u = sample(make_sinusoid(-1.0, 4 * math.pi), 0, m)
        fw = first_difference(F, u).values
        bw = first_difference(B, u).values
        ce = first_difference(C, u).values
        scale = stencil_scale(("c",), m.points, u.values)
        assert np.all(np.abs(ce - (fw[1:] + bw[:-1]) / 2) <= 8 * EPS * scale)


class TestSecondDifference:
    def test_forward_forward_on_quadratic_small_mesh(self):
        # direct arithmetic: D+ of {0, .01, .09} is {.1, .4}; (.4-.1)/.1 = 3
        m = Mesh(np.array([0.0, 0.1, 0.3]))
        u = sample(make_polynomial([0, 0, 1]), 0, m)
        out = second_difference(SecondDiffSpec(F, F), u)
        assert out.first_index == 0 and len(out) == 1
        assert out.values[0] == pytest.approx(3.0, abs=1e-12)

    def test_forward_backward_matches_three_point_stencil_on_uniform(self):
        m = build_uniform(0, 1, 23)
        h = 1 / 22
        u = sample(make_sinusoid(-1.0, 4 * math.pi), 0, m)
        out = second_difference(SecondDiffSpec(F, B), u)
        v = u.values
        stencil = (v[2:] - 2 * v[1:-1] + v[:-2]) / h**2
        scale = stencil_scale(("d+", "d-"), m.points, v)
        assert np.all(np.abs(out.values - stencil) <= 8 * EPS * scale)

    def test_central_central_window(self):
        m = build_uniform(0, 1, 5)
        u = GridFunction(m, 0, np.arange(5.0))
        out = second_difference(SecondDiffSpec(C, C), u)
        assert (out.first_index, out.last_index) == (2, 2)
        with pytest.raises(WindowError):
            second_difference(SecondDiffSpec(C, C), u.restrict(0, 3))

    def test_all_windows_compose(self):
        m = build_uniform(0, 1, 9)
        u = GridFunction(m, 0, np.arange(9.0))
        expected_span = {
            (F, F): (0, 6),
            (B, B): (2, 8),
            (C, C): (2, 6),
            (F, B): (1, 7),
            (B, F): (1, 7),
            (F, C): (1, 6),
            (C, F): (1, 6),
            (B, C): (2, 7),
            (C, B): (2, 7),
        }
        for spec in ALL_SECOND_SPECS:
            out = second_difference(spec, u)
            assert (out.first_index, out.last_index) == expected_span[(spec.outer, spec.inner)]


class TestClosedStencils:
    @pytest.mark.parametrize(
        "spec",
        [SecondDiffSpec(F, B), SecondDiffSpec(B, F), SecondDiffSpec(F, F)],
        ids=str,
    )
    def test_closed_equals_composition(self, spec):
        rng = np.random.default_rng(3)
        for _ in range(25):
            m = random_mesh(rng, 12, lo=0.2, hi=1.8)
            u = GridFunction(m, 0, rng.normal(size=13))
            composed = second_difference(spec, u)
            closed = closed_second_difference(spec, u)
            assert closed.first_index == composed.first_index
            scale = stencil_scale(_kinds(spec), m.points, u.values)
            assert np.all(np.abs(closed.values - composed.values) <= 8 * EPS * scale)

    def test_unsupported_pair_rejected(self):
        u = GridFunction(build_uniform(0, 1, 6), 0, np.zeros(6))
        with pytest.raises(ValueError):
            closed_second_difference(SecondDiffSpec(C, C), u)


class TestCorrectedSecondDifference:
    def test_exact_on_quadratics_any_mesh(self):
        rng = np.random.default_rng(4)
        for _ in range(25):
            m = random_mesh(rng, 14, lo=0.1, hi=2.0)
            out = d2_corrected(sample(make_polynomial([1.0, -3.0, 1.0]), 0, m))
            np.testing.assert_allclose(out.values, 2.0, rtol=1e-11)

    def test_equals_forward_backward_composition_on_uniform(self):
        m = build_uniform(0, 1, 23)
        u = sample(make_sinusoid(-1.0, 4 * math.pi), 0, m)
        a = d2_corrected(u)
        b = second_difference(SecondDiffSpec(F, B), u)
        assert a.first_index == b.first_index
        scale = stencil_scale(("d+", "d-"), m.points, u.values)
        assert np.all(np.abs(a.values - b.values) <= 8 * EPS * scale)

    def test_window_too_small(self):
        u = GridFunction(build_uniform(0, 1, 2), 0, np.zeros(2))
        with pytest.raises(WindowError):
            d2_corrected(u)

    def test_beats_forward_forward_on_the_study_mesh(self):
        # consistent first-order stencil vs an inconsistent composition on
        # the 23-point nonuniform mesh of the derivative studies
        from nufd.presets import section5_nonuniform_mesh

        m = section5_nonuniform_mesh(beta=0.7)
        f = make_sinusoid(-1.0, 4 * math.pi)
        u = sample(f, 0, m)
        ref = sample(f, 2, m)
        sg_d2 = scaled_local_difference(ref, d2_corrected(u)).sgei
        sg_ff = scaled_local_difference(ref, second_difference(SecondDiffSpec(F, F), u)).sgei
        assert sg_d2 < sg_ff


class TestRatioIdentity:
    def test_forward_backward_vs_backward_forward(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            m = random_mesh(rng, 12, lo=0.2, hi=1.8)
            u = GridFunction(m, 0, rng.normal(size=13))
            fb = second_difference(SecondDiffSpec(F, B), u)
            bf = second_difference(SecondDiffSpec(B, F), u)
            h = m.steps
            ks = fb.indices
            ratio = h[ks - 1] / h[ks]
            scale = stencil_scale(("d+", "d-"), m.points, u.values)
            assert np.all(np.abs(fb.values - ratio * bf.values) <= 4 * EPS * scale)


class TestCommutation:
    def test_uniform_meshes_commute(self):
        m = build_uniform(0, 1, 23)
        u = sample(make_sinusoid(-1.0, 4 * math.pi), 0, m)
        for p in FirstDiffKind:
            for q in FirstDiffKind:
                pq = second_difference(SecondDiffSpec(p, q), u)
                qp = second_difference(SecondDiffSpec(q, p), u)
                # swapped compositions shrink the window identically
                assert (pq.first_index, pq.last_index) == (qp.first_index, qp.last_index)
                scale = np.maximum(
                    stencil_scale((p.value, q.value), m.points, u.values),
                    stencil_scale((q.value, p.value), m.points, u.values),
                )
                assert np.all(np.abs(pq.values - qp.values) <= 4 * EPS * scale)

    def test_nonuniform_meshes_do_not_commute(self):
        rng = np.random.default_rng(8)
        m = random_mesh(rng, 12, lo=0.5, hi=1.5)
        assert np.all(np.abs(smoothness_ratios(m) - 1) > 1e-3)
        u = sample(make_polynomial([0, 0, 0, 1]), 0, m)
        for p, q in [(F, B), (F, C), (B, C)]:
            pq = second_difference(SecondDiffSpec(p, q), u)
            qp = second_difference(SecondDiffSpec(q, p), u)
            lo = max(pq.first_index, qp.first_index)
            hi = min(pq.last_index, qp.last_index)
            gap = np.max(np.abs(pq.restrict(lo, hi).values - qp.restrict(lo, hi).values))
            assert gap > 1e-8


class TestLinearity:
    @given(
        st.integers(min_value=0, max_value=2**32 - 1),
        st.floats(min_value=-4, max_value=4),
        st.floats(min_value=-4, max_value=4),
    )
    @settings(max_examples=40, deadline=None)
    def test_every_operator_is_linear(self, seed, alpha, beta):
        rng = np.random.default_rng(seed)
        m = random_mesh(rng, 10, lo=0.2, hi=1.8)
        u = rng.normal(size=11)
        v = rng.normal(size=11)
        gu = GridFunction(m, 0, u)
        gv = GridFunction(m, 0, v)
        gw = GridFunction(m, 0, alpha * u + beta * v)
        for op in (F, B, C, SecondDiffSpec(F, B), SecondDiffSpec(C, C), D2_CORRECTED):
            left = apply_operator(op, gw).values
            right = alpha * apply_operator(op, gu).values + beta * apply_operator(op, gv).values
            kinds = {
                F: ("d+",), B: ("d-",), C: ("c",), D2_CORRECTED: ("d+", "d-"),
            }.get(op) or _kinds(op)
            scale = abs(alpha) * stencil_scale(kinds, m.points, u) + abs(beta) * stencil_scale(
                kinds, m.points, v
            )
            # alpha*u + beta*v itself carries rounding before differencing
            assert np.all(np.abs(left - right) <= 16 * EPS * (scale + np.abs(left)))


class TestOperatorDispatch:
    def test_apply_and_order(self):
        m = build_uniform(0, 1, 9)
        u = sample(make_polynomial([0, 0, 1]), 0, m)
        assert derivative_order(F) == 1
        assert derivative_order(SecondDiffSpec(C, C)) == 2
        assert derivative_order(D2_CORRECTED) == 2
        np.testing.assert_allclose(apply_operator(D2_CORRECTED, u).values, 2.0, rtol=1e-12)
        with pytest.raises(TypeError):
            apply_operator("bogus", u)
        with pytest.raises(TypeError):
            derivative_order("bogus")
