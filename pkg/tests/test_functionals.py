import math

import pytest

from tempobell.errors import InvalidArgumentError, NullHistoryError
from tempobell.functionals import (
    NecessarilyEntangled,
    NotFlagged,
    QuadratureGrid,
    analytic_v_oracle,
    classify,
    family_scenario,
    m_functional,
    moments,
    v_bounds,
    v_functional,
)
from tempobell.history import EvolvedInitial
from tempobell.qstate import Z_PLUS, Unitary, chi


class TestGrid:
    def test_minimum_points(self):
        with pytest.raises(InvalidArgumentError):
            QuadratureGrid(3)
        assert QuadratureGrid(4).size == 256

    def test_nodes(self):
        g = QuadratureGrid(8)
        assert g.nodes[1] == pytest.approx(math.pi / 4)
        assert len(g.nodes) == 8


class TestPaperValues:
    @pytest.mark.parametrize("theta, phi", [(0.0, 0.0), (0.4, 2.0), (math.pi / 4, 0.3)])
    def test_m_evolved(self, theta, phi):
        assert m_functional(EvolvedInitial(chi((theta, phi)))) == pytest.approx(0.25, abs=1e-12)

    def test_m_product_and_entangled(self):
        assert m_functional(family_scenario("product-history", 0.3, 0.1, 1.2, 2.0)) == pytest.approx(0.25, abs=1e-12)
        assert m_functional(family_scenario("entangled-zz")) == pytest.approx(0.25, abs=1e-12)

    def test_v_evolved_at_zero(self):
        assert v_functional(EvolvedInitial(Z_PLUS)) == pytest.approx(35 / 512, abs=1e-12)

    def test_v_product_at_zero(self):
        assert v_functional(family_scenario("product-history")) == pytest.approx(5 / 64, abs=1e-12)

    def test_v_entangled(self):
        assert v_functional(family_scenario("entangled-zz")) == pytest.approx(3 / 128, abs=1e-12)

    def test_oracle_agreement(self, rng):
        for _ in range(100):
            t, p, tp, pp = rng.uniform(0, 2 * math.pi, 4)
            v = v_functional(family_scenario("evolved-initial", t, p))
            assert v == pytest.approx(analytic_v_oracle("evolved-initial", t), abs=1e-10)
            v = v_functional(family_scenario("product-history", t, p, tp, pp))
            assert v == pytest.approx(analytic_v_oracle("product-history", t, tp), abs=1e-10)

    def test_phi_independence(self, rng):
        base = moments(family_scenario("product-history", 0.5, 0.0, 1.0, 0.0))
        for _ in range(5):
            other = moments(family_scenario("product-history", 0.5, rng.uniform(0, 7), 1.0, rng.uniform(0, 7)))
            assert other.v == pytest.approx(base.v, abs=1e-12)


class TestQuadrature:
    def test_exact_from_sixteen(self, rng):
        for family in ("evolved-initial", "product-history", "entangled-zz"):
            s = family_scenario(family, *rng.uniform(0, 7, 4))
            a, b = moments(s, QuadratureGrid(16)), moments(s, QuadratureGrid(24))
            assert abs(a.m - b.m) < 1e-12 and abs(a.v - b.v) < 1e-12

    def test_coarse_grid_is_not_exact(self):
        # degree-8 integrand aliases on a 4-point grid
        s = family_scenario("evolved-initial", 0.3, 0.0)
        assert abs(v_functional(s, QuadratureGrid(4)) - analytic_v_oracle("evolved-initial", 0.3)) > 1e-6

    def test_thread_count_does_not_change_bits(self):
        s = family_scenario("product-history", 0.3, 0.2, 0.9, 1.4)
        assert moments(s, threads=1) == moments(s, threads=3) == moments(s, threads=7)

    def test_thread_env(self, monkeypatch):
        s = family_scenario("entangled-zz")
        monkeypatch.setenv("TEMPO_BELL_THREADS", "4")
        four = moments(s)
        monkeypatch.setenv("TEMPO_BELL_THREADS", "nope")
        with pytest.raises(InvalidArgumentError):
            moments(s)
        monkeypatch.delenv("TEMPO_BELL_THREADS")
        assert moments(s) == four

    def test_nontrivial_bridging_rejected(self):
        s = EvolvedInitial(Z_PLUS, Unitary.rotation(Z_PLUS, chi((0.3, 0.0))))
        with pytest.raises(InvalidArgumentError):
            v_functional(s)

    def test_null_history_propagates(self):
        with pytest.raises(NullHistoryError):
            family_scenario("product-history", 0.0, 0.0, math.pi / 2, 0.0)


class TestBoundsAndClassify:
    def test_bounds(self):
        assert v_bounds("evolved-initial") == (45 / 1024, 35 / 512)
        assert v_bounds("product-history") == (9 / 256, 5 / 64)
        with pytest.raises(InvalidArgumentError):
            v_bounds("entangled-zz")

    def test_bounds_from_closed_form_scan(self):
        import numpy as np

        t = np.linspace(0, math.pi, 4001)
        vals = (115 + 25 * np.cos(4 * t)) / 2048
        assert vals.min() == pytest.approx(45 / 1024, abs=1e-12)
        assert vals.max() == pytest.approx(35 / 512, abs=1e-12)

    def test_nesting(self):
        lo_e, hi_e = v_bounds("evolved-initial")
        lo_p, hi_p = v_bounds("product-history")
        assert lo_p < lo_e and hi_e < hi_p

    def test_containment(self, rng):
        for _ in range(100):
            t, p, tp, pp = rng.uniform(0, 7, 4)
            v = v_functional(family_scenario("evolved-initial", t, p))
            assert 45 / 1024 - 1e-10 <= v <= 35 / 512 + 1e-10
            v = v_functional(family_scenario("product-history", t, p, tp, pp))
            assert 9 / 256 - 1e-10 <= v <= 5 / 64 + 1e-10

    @pytest.mark.parametrize(
        "v, expected",
        [(3 / 128, NecessarilyEntangled("below")), (0.05, NotFlagged()), (0.09, NecessarilyEntangled("above"))],
    )
    def test_classify(self, v, expected):
        assert classify(v) == expected

    def test_classify_tolerance(self):
        assert classify(9 / 256 - 1e-12) == NotFlagged()
        assert classify(9 / 256 - 1e-6, tol=1e-9) == NecessarilyEntangled("below")
        assert classify(5 / 64 + 1e-3, tol=1e-2) == NotFlagged()

    def test_classify_negative(self):
        with pytest.raises(InvalidArgumentError):
            classify(-0.1)

    def test_entangled_is_flagged(self):
        assert classify(v_functional(family_scenario("entangled-zz"))) == NecessarilyEntangled("below")


class TestOracle:
    def test_values(self):
        assert analytic_v_oracle("evolved-initial", math.pi / 4) == 45 / 1024
        assert analytic_v_oracle("product-history", math.pi / 4, math.pi / 4) == pytest.approx(9 / 256, abs=1e-15)
        assert analytic_v_oracle("entangled-zz") == 3 / 128

    def test_missing_parameters(self):
        with pytest.raises(InvalidArgumentError):
            analytic_v_oracle("product-history", 0.1)
        with pytest.raises(InvalidArgumentError):
            analytic_v_oracle("evolved-initial")
        with pytest.raises(InvalidArgumentError):
            analytic_v_oracle("bogus", 0.1)
