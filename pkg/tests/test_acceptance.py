"""
Exit criteria. Each test records one PASS/FAIL line, printed in the
"acceptance criteria" section of the pytest summary.
"""
import math

import numpy as np
import pytest

import oracles
from tempobell.chsh import (
    BELL_PHI_PLUS,
    PAPER_QUAD,
    TSIRELSON_BOUND,
    maximize_violation,
    s_spatial,
    s_temporal,
)
from tempobell.functionals import (
    NecessarilyEntangled,
    NotFlagged,
    QuadratureGrid,
    analytic_v_oracle,
    classify,
    extremize_v,
    family_scenario,
    m_functional,
    moments,
    monte_carlo_moments,
    v_functional,
)
from tempobell.history import EvolvedInitial, entangled_zz_history, product_history
from tempobell.protocol import erase_in_bell_basis, prepare_entangled_history, s_temporal_via_circuit
from tempobell.qstate import X_MINUS, X_PLUS, Z_PLUS, Unitary, chi, inner

ROOT2 = math.sqrt(2)
TSIRELSON = 2 * ROOT2
FAMILIES = ("evolved-initial", "product-history", "entangled-zz")


def _periodic_gap(x, target, period=math.pi / 2):
    d = (x - target) % period
    return min(d, period - d)


def _draw(family, rng):
    t, p, tp, pp = rng.uniform(0, 2 * math.pi, 4)
    return (t, p, tp, pp), family_scenario(family, t, p, tp, pp)


def test_ac01_spatial_chsh(acceptance):
    err = abs(s_spatial(BELL_PHI_PLUS, PAPER_QUAD) - TSIRELSON)
    acceptance(1, "spatial CHSH of Bell state = 2 sqrt 2", err < 1e-12, f"err={err:.2e} tol=1e-12")


def test_ac02_temporal_trivial_evolution(acceptance):
    err = abs(s_temporal(EvolvedInitial(Z_PLUS), PAPER_QUAD) - TSIRELSON)
    acceptance(2, "temporal CHSH of |z+> under identity = 2 sqrt 2", err < 1e-12, f"err={err:.2e} tol=1e-12")


def test_ac03_product_history_closed_form(acceptance, rng):
    h = product_history(Z_PLUS, Z_PLUS)
    worst = 0.0
    for _ in range(1000):
        t = rng.uniform(-2 * math.pi, 2 * math.pi, 4)
        got = s_temporal(h, [t[0], 0, t[1], 0, t[2], 0, t[3], 0])
        worst = max(worst, abs(got - oracles.closed_form_zz_product(*t)))
    _, best = maximize_violation(h, restarts=32)
    ok = worst < 1e-12 and abs(best - 2.0) < 1e-6
    acceptance(3, "[z+](.)[z+] closed form and max |S~| = 2", ok,
               f"closed-form err={worst:.2e} (1e-12), max={best:.12f} (2 +/- 1e-6)")


def test_ac04_entangled_violation_two_routes(acceptance):
    analytic = s_temporal(entangled_zz_history(), PAPER_QUAD)
    circuit = s_temporal_via_circuit(PAPER_QUAD)
    ea, ec, eac = abs(analytic - TSIRELSON), abs(circuit - TSIRELSON), abs(analytic - circuit)
    ok = ea < 1e-12 and ec < 1e-12 and eac < 1e-12
    acceptance(4, "entangled history S~ = 2 sqrt 2 analytically and by circuit", ok,
               f"analytic err={ea:.2e}, circuit err={ec:.2e}, gap={eac:.2e} tol=1e-12")


def test_ac05_temporal_spatial_equality(acceptance, rng):
    h = entangled_zz_history()
    worst = max(abs(s_temporal(h, q) - s_spatial(BELL_PHI_PLUS, q)) for q in rng.uniform(0, 2 * math.pi, (1000, 8)))
    acceptance(5, "S~(entangled history) = S(Bell) on 1000 random quads", worst < 1e-10,
               f"max gap={worst:.2e} tol=1e-10")


def test_ac06_m_degeneracy(acceptance, rng):
    grid = QuadratureGrid(16)
    worst = 0.0
    for family in FAMILIES:
        for _ in range(100):
            _, s = _draw(family, rng)
            worst = max(worst, abs(m_functional(s, grid) - 0.25))
    acceptance(6, "M = 1/4 for all three families (100 draws each, N=16)", worst < 1e-10,
               f"max err={worst:.2e} tol=1e-10")


def test_ac07_v_closed_forms(acceptance, rng):
    grid = QuadratureGrid(16)
    worst = {}
    for family in FAMILIES:
        w = 0.0
        for _ in range(100):
            (t, _, tp, _), s = _draw(family, rng)
            w = max(w, abs(v_functional(s, grid) - analytic_v_oracle(family, t, tp)))
        worst[family] = w
    ok = all(w < 1e-10 for w in worst.values())
    acceptance(7, "V matches the three closed forms (N=16)", ok,
               ", ".join(f"{k}={v:.2e}" for k, v in worst.items()) + " tol=1e-10")


def test_ac08_strong_inequality_endpoints(acceptance):
    lo_e, hi_e = extremize_v("evolved-initial", phi=0.7)
    lo_p, hi_p = extremize_v("product-history", phi=0.4, phi_prime=1.9)
    values_ok = (
        abs(lo_e.value - 45 / 1024) < 1e-10 and abs(hi_e.value - 35 / 512) < 1e-10
        and abs(lo_p.value - 9 / 256) < 1e-10 and abs(hi_p.value - 5 / 64) < 1e-10
    )
    where_ok = (
        _periodic_gap(lo_e.at[0], math.pi / 4) < 1e-4 and _periodic_gap(hi_e.at[0], 0.0) < 1e-4
        and all(_periodic_gap(x, math.pi / 4) < 1e-4 for x in lo_p.at)
        and all(_periodic_gap(x, 0.0) < 1e-4 for x in hi_p.at)
    )
    acceptance(8, "numerical extremization reproduces V bounds and optimizers", values_ok and where_ok,
               f"initial [{lo_e.value:.12g}, {hi_e.value:.12g}] at {lo_e.at[0]:.6f}/{hi_e.at[0]:.6f}; "
               f"product [{lo_p.value:.12g}, {hi_p.value:.12g}] (theta mod pi/2)")


def test_ac09_classifier(acceptance, rng):
    flagged = classify(3 / 128) == NecessarilyEntangled("below")
    sampled = []
    for family in ("evolved-initial", "product-history"):
        for _ in range(100):
            _, s = _draw(family, rng)
            sampled.append(classify(v_functional(s)))
    for t in np.linspace(0, math.pi / 2, 41):
        sampled.append(classify(v_functional(family_scenario("product-history", t, 0.0, t, 0.0))))
    unflagged = all(c == NotFlagged() for c in sampled)
    acceptance(9, "classify(3/128) below; non-entangled families not flagged", flagged and unflagged,
               f"3/128 -> {classify(3 / 128)}; {len(sampled)} family samples all NotFlagged={unflagged}")


def test_ac10_tsirelson_ceiling(acceptance, rng):
    worst = 0.0
    n = 0
    while n < 10_000:
        kind = n % 3
        if kind == 0:
            s = EvolvedInitial(chi(rng.uniform(0, 7, 2)), Unitary(oracles.random_unitary(rng)))
        elif kind == 1:
            a, b = chi(rng.uniform(0, 7, 2)), chi(rng.uniform(0, 7, 2))
            if abs(inner(b, a)) < 1e-6:
                continue
            s = product_history(a, b)
        else:
            s = entangled_zz_history()
        worst = max(worst, abs(s_temporal(s, rng.uniform(0, 2 * math.pi, 8))))
        n += 1
    opt = []
    for seed in range(4):
        s = EvolvedInitial(chi(rng.uniform(0, 7, 2)), Unitary(oracles.random_unitary(rng)))
        opt.append(maximize_violation(s, restarts=8, seed=seed)[1])
    opt.append(maximize_violation(entangled_zz_history(), restarts=8)[1])
    ok = worst <= TSIRELSON + 1e-9 and max(opt) <= TSIRELSON + 1e-9
    acceptance(10, "|S~| <= 2 sqrt 2 on 1e4 random draws and for the optimizer", ok,
               f"sampled max={worst:.12f}, optimizer max={max(opt):.12f}, ceiling={TSIRELSON:.12f}")


def test_ac11_quadrature_and_monte_carlo(acceptance, rng):
    details = []
    ok = True
    for family in FAMILIES:
        _, s = _draw(family, rng)
        a, b = moments(s, QuadratureGrid(16)), moments(s, QuadratureGrid(24))
        mc = monte_carlo_moments(s, samples=1_000_000, seed=2024)
        dm, dv = abs(a.m - b.m), abs(a.v - b.v)
        zm, zv = abs(mc.m - a.m) / mc.m_stderr, abs(mc.v - a.v) / mc.v_stderr
        ok &= dm < 1e-12 and dv < 1e-12 and zm < 3 and zv < 3
        details.append(f"{family}: dM={dm:.1e} dV={dv:.1e} zM={zm:.2f} zV={zv:.2f}")
    acceptance(11, "N=16 vs N=24 agree; Monte Carlo within 3 SE at 1e6", ok, "; ".join(details))


def test_ac12_preparation_and_erasure(acceptance):
    out, mid = prepare_entangled_history(return_intermediate=True)
    r = 1 / math.sqrt(2)
    exp_mid, exp_out = np.zeros(8), np.zeros(8)
    exp_mid[[0, 6]] = r
    exp_out[[0, 7]] = r
    exact = np.array_equal(mid.amp, exp_mid) and np.array_equal(out.amp, exp_out)
    outcomes = erase_in_bell_basis(out)
    probs = np.array([o[1] for o in outcomes])
    prob_err = float(np.max(np.abs(probs - [0.5, 0.5, 0, 0])))
    states_ok = outcomes[0][2].equals_up_to_phase(X_PLUS) and outcomes[1][2].equals_up_to_phase(X_MINUS)
    acceptance(12, "preparation amplitudes exact; Bell erasure (1/2, 1/2, 0, 0) -> |x+>, |x->",
               exact and prob_err < 1e-12 and states_ok,
               f"exact={exact}, prob err={prob_err:.2e}, states ok={states_ok}")
