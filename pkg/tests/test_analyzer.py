import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from genhilbert.analyzer import (
    BLOCH,
    OUT_OF_RANGE,
    boundedness_verdict,
    classify,
    compactness_verdict,
    embedding_check_bergman,
    embedding_check_hardy,
    extremal_pairing,
    required_exponents,
    select_branch,
    sweep,
)
from genhilbert.measures import MeasureSpec
from genhilbert.spaces import monomial


@settings(max_examples=200, deadline=None)
@given(st.floats(0.05, 10), st.one_of(st.none(), st.floats(0.05, 10)), st.floats(1.01, 10))
def test_branch_selection_is_total(p, q, alpha):
    branch = select_branch(p, q, alpha)
    assert branch in {"i", "ii", "iii", OUT_OF_RANGE}
    if branch != OUT_OF_RANGE:
        a, s = required_exponents(branch, p, q, alpha)
        assert a in (0.0, 1.0) and s > 0


@pytest.mark.parametrize(
    "p, q, alpha, branch, exps",
    [
        (1, 2, 2, "i", (0.0, 2.0)),
        (2, 4, 2, "i", (0.0, 2.0)),
        (1, 1, 2, "ii", (1.0, 1.0)),
        (0.5, 1, 3, "ii", (1.0, 2.0)),
        (1, BLOCH, 2, "iii", (0.0, 3.0)),
        (1, 0.5, 2, OUT_OF_RANGE, None),
        (2, 3, 2, OUT_OF_RANGE, None),  # q < alpha p
        (2, 1, 2, OUT_OF_RANGE, None),  # q = 1 needs p <= 1
    ],
)
def test_branch_examples(p, q, alpha, branch, exps):
    assert select_branch(p, q, alpha) == branch
    if exps is not None:
        assert required_exponents(branch, p, q, alpha) == pytest.approx(exps)


def test_out_of_range_report():
    rep = boundedness_verdict(MeasureSpec.lebesgue(), 1, 0.5, 2)
    assert rep.verdict == OUT_OF_RANGE and rep.carleson is None and rep.notes


def test_alpha_must_exceed_one():
    with pytest.raises(ValueError):
        classify(MeasureSpec.lebesgue(), 1, 2, 1.0)


@pytest.mark.parametrize(
    "gamma, verdict, slope",
    [(1.0, "unbounded", 1.0), (1.5, "unbounded", 0.5), (2.0, "bounded", 0.0),
     (2.5, "compact", -0.5), (3.0, "compact", -1.0)],
)
def test_dichotomy_and_slope_law(gamma, verdict, slope):
    # sigma = 2 for (p, q, alpha) = (1, 2, 2); Phi ~ (1-a)^-(sigma-gamma)
    rep = classify(MeasureSpec.power(gamma), 1, 2, 2)
    assert rep.verdict == verdict
    assert rep.fitted_slope == pytest.approx(slope, abs=0.05)


@pytest.mark.parametrize("q", [2, 1, BLOCH])
def test_atoms_are_compact_in_every_branch(q):
    rep = compactness_verdict(MeasureSpec.atom(0.5), 1, q, 2)
    assert rep.verdict == "compact"
    assert rep.fitted_slope < -0.5


def test_bloch_calibration():
    # s = 1/p + alpha = 3
    assert classify(MeasureSpec.power(3.0), 1, BLOCH, 2).verdict == "bounded"
    assert classify(MeasureSpec.power(4.0), 1, BLOCH, 2).verdict == "compact"
    assert classify(MeasureSpec.power(2.5), 1, BLOCH, 2).verdict == "unbounded"


@pytest.mark.parametrize("beta, verdict", [(0.5, "unbounded"), (1.0, "bounded"), (2.5, "bounded")])
def test_log_branch_sensitivity(beta, verdict):
    # branch (ii): L * mu([t,1)) / (1-t) with tail ~ (1-t) L^-beta behaves like L^(1-beta)
    m = MeasureSpec.power(1.0, c=1.0, beta=beta)
    rep = boundedness_verdict(m, 1, 1, 2)
    assert rep.branch == "ii" and rep.verdict == verdict


@settings(max_examples=15, deadline=None)
@given(st.floats(1.0, 4.0), st.sampled_from([(1, 2, 2), (1, 1, 2), (1, BLOCH, 2), (0.5, 3, 3)]))
def test_compact_implies_bounded(gamma, pqa):
    m = MeasureSpec.power(gamma)
    if compactness_verdict(m, *pqa).verdict == "compact":
        assert boundedness_verdict(m, *pqa).verdict == "bounded"


def test_pairing_values_positive_on_dyadic_grid():
    values, slope = extremal_pairing(MeasureSpec.power(2.0), "i", 1, 2, 2)
    a = [v[0] for v in values]
    assert a == [1 - 2.0**-j for j in range(1, 13)]
    assert all(v[1] > 0 for v in values)


def test_verdict_report_serializes():
    rep = classify(MeasureSpec.power(2.0), 1, BLOCH, 2)
    d = json.loads(json.dumps(rep.to_dict()))
    assert d["q"] == "bloch" and d["carleson"]["s"] == 3.0


def test_gate_note_for_ill_defined_operator():
    # p = 0.5 needs a 2-Carleson measure; Lebesgue is not
    rep = boundedness_verdict(MeasureSpec.lebesgue(), 0.5, 1, 2)
    assert any("gate" in n for n in rep.notes)


def test_hardy_embedding_stable_for_carleson_measure():
    # 2(1-t)dt is 2-Carleson, so H^1 embeds into L^2(mu)
    rep = embedding_check_hardy(MeasureSpec.power(2.0), 1, 2)
    assert rep.stable and abs(rep.slope) < 0.1


def test_hardy_embedding_grows_for_lebesgue():
    rep = embedding_check_hardy(MeasureSpec.lebesgue(), 1, 2)
    assert not rep.stable
    assert rep.slope == pytest.approx(-0.5, abs=0.05)


def test_hardy_embedding_atom_and_corpus():
    rep = embedding_check_hardy(MeasureSpec.atom(0.5), 2, 2, corpus=[monomial(k) for k in range(4)])
    assert rep.stable
    np.testing.assert_allclose([r for _, r in rep.ratios[:4]], [0.5**k for k in range(4)], rtol=1e-12)


@pytest.mark.parametrize("gamma, stable", [(2.0, True), (1.5, False)])
def test_bergman_embedding(gamma, stable):
    # A^1_0 embeds in L^1(mu) iff mu is 2-Carleson
    rep = embedding_check_bergman(MeasureSpec.power(gamma), 1, 1, 0.0)
    assert rep.stable is stable
    if not stable:
        assert rep.slope == pytest.approx(-0.5, abs=0.05)


def test_sweep_rows_in_order():
    fams = [MeasureSpec.power(2.0), MeasureSpec.atom(0.5)]
    params = [{"p": 1, "q": 2, "alpha": 2}, {"p": 1, "q": "bloch", "alpha": 2}]
    rows = sweep(fams, params)
    assert [(r["family"], r["q"]) for r in rows] == [
        (fams[0].label, 2), (fams[0].label, "bloch"), (fams[1].label, 2), (fams[1].label, "bloch")
    ]
    assert rows == sweep(fams, params, workers=3)


def test_sweep_records_cell_errors():
    rows = sweep([MeasureSpec.lebesgue()], [{"p": 1, "q": 2, "alpha": 0.5}])
    assert rows[0]["error"].startswith("ValueError")


@pytest.mark.parametrize("fams, params", [([], [{"p": 1, "q": 2, "alpha": 2}]),
                                          ([MeasureSpec.lebesgue()], [])])
def test_sweep_rejects_empty_input(fams, params):
    with pytest.raises(ValueError):
        sweep(fams, params)


def test_sweep_rejects_unknown_mode():
    with pytest.raises(ValueError, match="mode"):
        sweep([MeasureSpec.lebesgue()], [{"p": 1, "q": 2, "alpha": 2}], mode="nope")
