"""Characteristic function, zero counting, real/complex scans, serialization."""

import json
import math
import os
import pathlib

import pytest
from hypothesis import given
from hypothesis import strategies as st

from slindef import (
    EigenRecord,
    InvalidProblemError,
    Piece,
    PiecewiseCoefficient,
    ProblemSpec,
    characteristic,
    count_zeros,
    find_complex_eigenvalues,
    find_real_eigenvalues,
    interior_zeros,
    one_turning_point,
    records_to_csv,
    scan_to_csv,
    scan_to_json,
    two_turning_point,
)
from slindef.spectrum import _empirical_indices, characteristic_scaled

from oracles import dense_zero_count, ivp_characteristic

GOLDEN = pathlib.Path(__file__).parent / "golden"

PI2 = math.pi * math.pi

# values pinned once against the slow scipy/DOP853 oracle route
ONE_TP_M10_EIGS = [-41.57586512982179, -17.118939070171837,
                   17.118939070171816, 41.57586512982179]
APP_Q0_TABLE = [
    # (eigenvalue, interior zeros, weighted norm)
    (-32.12641544008645, 3, -0.0311407347441835),
    (-32.119354368921904, 2, -0.031120153453105422),
    (-6.509784135062986, 1, -0.15906288601233964),
    (-6.241537589970832, 0, -0.153857946464602),
    (1.0867650193303984, 0, 3.5087801337199283),
    (9.57653917861629, 1, 19.166232269380792),
    (28.23152921358738, 2, 547.5478910024092),
]
ONE_TP_P13_PAIR = (9.873650871977397, 3.3114113699439454)


# --------------------------------------------------------------------------
# Characteristic function
# --------------------------------------------------------------------------

class TestCharacteristic:
    def test_frozen_midpoint_value(self, classical_spec):
        # D at twice the fundamental eigenvalue, pinned against the IVP oracle
        assert characteristic(classical_spec, 2.0 * PI2) == pytest.approx(
            -0.21695429437747635, rel=1e-12)

    def test_vanishes_at_eigenvalues(self, classical_spec):
        for n in (1, 2, 3):
            d, scale = characteristic_scaled(classical_spec, (n * math.pi) ** 2)
            assert abs(d) <= 1e-12 * scale

    @given(st.floats(min_value=-50.0, max_value=80.0))
    def test_matches_ivp_oracle(self, lam):
        spec = one_turning_point(-4.0)
        ref = ivp_characteristic(spec, lam)
        val = characteristic(spec, lam)
        assert val == pytest.approx(ref, rel=1e-8, abs=1e-8)

    def test_complex_argument_conjugate_symmetry(self, one_tp_p13):
        z = 3.0 + 2.0j
        d = characteristic(one_tp_p13, z)
        d_conj = characteristic(one_tp_p13, z.conjugate())
        assert d_conj == pytest.approx(d.conjugate(), rel=1e-14)


# --------------------------------------------------------------------------
# Zero counting
# --------------------------------------------------------------------------

class TestZeroCounting:
    def test_classical_eigenfunction_zeros(self, classical_spec):
        for n in range(1, 6):
            zeros = interior_zeros(classical_spec, (n * math.pi) ** 2)
            assert len(zeros) == n - 1
            for k, z in enumerate(zeros, start=1):
                assert z == pytest.approx(k / n, abs=1e-9)

    def test_no_zeros_in_decaying_regime(self, classical_spec):
        assert count_zeros(classical_spec, -25.0) == 0

    @pytest.mark.parametrize("lam", [-55.0, -20.0, 3.0, 20.0, 55.0])
    def test_matches_dense_sign_tracking(self, one_tp_m10, lam):
        assert count_zeros(one_tp_m10, lam) == dense_zero_count(one_tp_m10, lam)

    @pytest.mark.parametrize("lam", [-30.0, -6.0, 1.5, 12.0, 28.0])
    def test_matches_dense_sign_tracking_app(self, app_spec, lam):
        assert count_zeros(app_spec, lam) == dense_zero_count(app_spec, lam)

    def test_sampled_piece_counting(self):
        spec = ProblemSpec(PiecewiseCoefficient((
            Piece(0.0, 1.0, 1.0, ((0.0, 0.0), (0.5, 30.0), (1.0, 0.0))),)))
        for lam in (5.0, 40.0, 90.0):
            assert count_zeros(spec, lam) == dense_zero_count(spec, lam)


# --------------------------------------------------------------------------
# Real-window scans
# --------------------------------------------------------------------------

class TestRealScan:
    def test_classical_spectrum(self, classical_spec):
        res = find_real_eigenvalues(classical_spec, (1.0, 100.0), 1e-9)
        assert [r.re_lambda for r in res.records] == pytest.approx(
            [PI2, 4 * PI2, 9 * PI2], rel=1e-9)
        assert [r.zeros_in_ab for r in res.records] == [0, 1, 2]
        assert all(r.weighted_norm > 0 for r in res.records)
        assert all(r.is_real for r in res.records)

    def test_one_tp_frozen_set(self, one_tp_m10):
        res = find_real_eigenvalues(one_tp_m10, (-60.0, 60.0), 1e-9)
        assert [r.re_lambda for r in res.records] == pytest.approx(
            ONE_TP_M10_EIGS, rel=1e-9)
        assert sorted(r.zeros_in_ab for r in res.records) == [0, 0, 1, 1]
        assert res.n_r_empirical == 0
        assert res.n_h_empirical == 0

    def test_one_tp_negation_symmetry(self, one_tp_m10):
        # odd weight + even q about 0: the spectrum is symmetric under
        # lambda -> -lambda
        res = find_real_eigenvalues(one_tp_m10, (-60.0, 60.0), 1e-9)
        eigs = [r.re_lambda for r in res.records]
        assert sorted(-x for x in eigs) == pytest.approx(sorted(eigs), rel=1e-9)

    def test_app_frozen_table(self, app_spec):
        res = find_real_eigenvalues(app_spec, (-40.0, 30.0), 1e-9)
        assert len(res.records) == len(APP_Q0_TABLE)
        for rec, (lam, zeros, norm) in zip(res.records, APP_Q0_TABLE):
            assert rec.re_lambda == pytest.approx(lam, rel=1e-9, abs=1e-9)
            assert rec.zeros_in_ab == zeros
            assert rec.weighted_norm == pytest.approx(norm, rel=1e-7)

    def test_every_record_repropagates_to_small_residual(self, two_tp_q0):
        res = find_real_eigenvalues(two_tp_q0, (-100.0, 100.0), 1e-9)
        assert res.records
        for rec in res.records:
            d, scale = characteristic_scaled(two_tp_q0, rec.re_lambda)
            assert abs(d) < 10.0 * res.tol * scale
            assert rec.residual < 10.0 * res.tol * max(1.0, scale)

    def test_count_stable_under_grid_refinement(self, one_tp_m10,
                                                classical_spec):
        for spec, window in ((classical_spec, (1.0, 100.0)),
                             (one_tp_m10, (-60.0, 60.0))):
            base = find_real_eigenvalues(spec, window, 1e-9)
            fine = find_real_eigenvalues(spec, window, 1e-9, refine=2)
            assert [r.re_lambda for r in fine.records] == pytest.approx(
                [r.re_lambda for r in base.records], rel=1e-9, abs=1e-9)

    def test_parallel_scan_matches_serial(self, one_tp_m10, monkeypatch):
        # workers share one detection lattice, so the result must be
        # byte-identical to the serial scan, not merely close
        serial = find_real_eigenvalues(one_tp_m10, (-60.0, 60.0), 1e-9)
        monkeypatch.setenv("SL_THREADS", "3")
        parallel = find_real_eigenvalues(one_tp_m10, (-60.0, 60.0), 1e-9)
        assert scan_to_csv(parallel) == scan_to_csv(serial)

    def test_window_edge_warning(self, classical_spec):
        res = find_real_eigenvalues(classical_spec, (PI2, 50.0), 1e-9)
        assert any("edge" in w or "boundary" in w for w in res.warnings)

    def test_empty_window(self, classical_spec):
        res = find_real_eigenvalues(classical_spec, (-30.0, -10.0), 1e-9)
        assert res.records == ()
        assert res.n_r_empirical is None

    @pytest.mark.parametrize("window", [(1.0, 1.0), (5.0, 2.0),
                                        (math.nan, 1.0), (0.0, math.inf)])
    def test_rejects_bad_windows(self, classical_spec, window):
        with pytest.raises(InvalidProblemError):
            find_real_eigenvalues(classical_spec, window)

    def test_rejects_bad_tol(self, classical_spec):
        with pytest.raises(InvalidProblemError):
            find_real_eigenvalues(classical_spec, (0.0, 1.0), tol=-1e-9)


class TestEmpiricalIndices:
    @pytest.mark.parametrize("counts,expected", [
        ([], (None, None)),
        ([0, 0, 1, 1], (0, 0)),
        ([0, 1, 1, 2, 2], (1, 1)),
        ([0, 1, 2], (None, None)),          # all singletons: no threshold seen
        ([0, 0, 0, 1, 1], (0, 1)),          # triple at 0: "exactly two" holds from 1
        ([1, 1, 2, 2], (None, None)),       # floor above zero: lower part unseen
        ([0, 2, 2], (None, None)),          # gap at count 1
        ([0, 1, 1, 2], (1, 1)),             # truncated top count is ignored
    ])
    def test_pattern_inference(self, counts, expected):
        assert _empirical_indices(counts) == expected


# --------------------------------------------------------------------------
# Complex-rectangle scans
# --------------------------------------------------------------------------

class TestComplexScan:
    def test_positive_weight_rect_is_empty(self, classical_spec):
        out = find_complex_eigenvalues(classical_spec,
                                       {"re": (1.0, 50.0), "im": (0.1, 10.0)},
                                       1e-9)
        assert out == []

    def test_frozen_conjugate_quadruple(self, one_tp_p13):
        out = find_complex_eigenvalues(one_tp_p13,
                                       {"re": (-20.0, 20.0),
                                        "im": (-20.0, 20.0)}, 1e-10)
        re0, im0 = ONE_TP_P13_PAIR
        got = sorted((r.re_lambda, r.im_lambda) for r in out)
        want = sorted([(re0, im0), (re0, -im0), (-re0, im0), (-re0, -im0)])
        assert len(got) == 4
        for (gr, gi), (wr, wi) in zip(got, want):
            assert gr == pytest.approx(wr, rel=1e-9)
            assert gi == pytest.approx(wi, rel=1e-9)
        # conjugate closure is exact, not merely approximate
        as_set = {(r.re_lambda, r.im_lambda) for r in out}
        assert {(re, -im) for re, im in as_set} == as_set
        for r in out:
            assert not r.is_real
            assert r.zeros_in_ab is None
            assert r.weighted_norm is None

    def test_real_eigenvalue_inside_rect_is_snapped(self, classical_spec):
        out = find_complex_eigenvalues(classical_spec,
                                       {"re": (5.0, 15.0), "im": (-1.0, 1.0)},
                                       1e-9)
        assert len(out) == 1
        rec = out[0]
        assert rec.is_real
        assert rec.re_lambda == pytest.approx(PI2, rel=1e-9)
        assert rec.im_lambda == 0.0
        assert rec.zeros_in_ab == 0
        assert rec.weighted_norm > 0

    def test_zero_on_initial_edge_is_handled(self, classical_spec):
        # right edge exactly on the fundamental eigenvalue: the contour is
        # nudged automatically instead of failing
        out = find_complex_eigenvalues(classical_spec,
                                       {"re": (5.0, PI2), "im": (-1.0, 1.0)},
                                       1e-9)
        for rec in out:
            assert rec.re_lambda == pytest.approx(PI2, rel=1e-8)

    def test_tuple_and_dict_rects_agree(self, one_tp_p13):
        a = find_complex_eigenvalues(one_tp_p13,
                                     ((0.0, 20.0), (0.5, 20.0)), 1e-10)
        b = find_complex_eigenvalues(one_tp_p13,
                                     {"re": (0.0, 20.0), "im": (0.5, 20.0)},
                                     1e-10)
        assert [(r.re_lambda, r.im_lambda) for r in a] == \
               [(r.re_lambda, r.im_lambda) for r in b]

    @pytest.mark.parametrize("rect", [
        {"re": (1.0, 1.0), "im": (0.0, 1.0)},
        {"re": (0.0, 1.0), "im": (2.0, 1.0)},
        {"re": (0.0, 1.0)},
        {"re": (0.0, 1.0), "im": (0.0, 1.0), "rotation": 0.3},
    ])
    def test_rejects_bad_rects(self, classical_spec, rect):
        with pytest.raises(InvalidProblemError):
            find_complex_eigenvalues(classical_spec, rect)

    @pytest.mark.parametrize("q0", [6.0, 13.0, 18.5])
    def test_symmetric_rect_closure_property(self, q0):
        spec = one_turning_point(q0)
        out = find_complex_eigenvalues(spec,
                                       {"re": (-25.0, 25.0),
                                        "im": (-25.0, 25.0)}, 1e-9)
        as_set = {(r.re_lambda, r.im_lambda) for r in out}
        assert {(re, -im) for re, im in as_set} == as_set
        # an even number of strictly complex roots
        assert len([r for r in out if not r.is_real]) % 2 == 0


# --------------------------------------------------------------------------
# Serialization
# --------------------------------------------------------------------------

class TestSerialization:
    def test_csv_shape_and_none_blank(self):
        recs = [
            EigenRecord(1.5, 0.0, 2, 3.25, 1e-12),
            EigenRecord(2.0, 0.5, None, None, 1e-11),
        ]
        lines = records_to_csv(recs).strip().split("\n")
        assert lines[0] == "re_lambda,im_lambda,zeros,weighted_norm,residual"
        assert lines[1] == "1.5,0.0,2,3.25,1e-12"
        assert lines[2] == "2.0,0.5,,,1e-11"

    def test_scan_json_round_trip_shape(self, one_tp_m10):
        res = find_real_eigenvalues(one_tp_m10, (-60.0, 60.0), 1e-9)
        doc = json.loads(scan_to_json(res))
        assert doc["window"] == [-60.0, 60.0]
        assert doc["n_r_empirical"] == 0
        assert doc["n_h_empirical"] == 0
        assert len(doc["eigenvalues"]) == 4
        rec = doc["eigenvalues"][0]
        assert set(rec) == {"re_lambda", "im_lambda", "zeros",
                            "weighted_norm", "residual"}

    def test_golden_scan_csv(self, one_tp_m10):
        res = find_real_eigenvalues(one_tp_m10, (-60.0, 60.0), 1e-9)
        got = scan_to_csv(res)
        want = (GOLDEN / "one_tp_m10_scan.csv").read_text()
        assert got == want

    def test_record_helpers(self):
        rec = EigenRecord(3.0, -4.0, None, None, 0.0)
        assert rec.lam == 3.0 - 4.0j
        assert not rec.is_real
        assert rec.to_dict()["im_lambda"] == -4.0
