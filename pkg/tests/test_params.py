import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cavityflip.errors import DegenerateParameterError, InvalidParameterError
from cavityflip.params import (
    AtomCavityParams,
    RawCavityParams,
    derive,
    invert,
    kappa_for_ratio,
    saturation_scale,
)

rates = st.floats(min_value=1e-3, max_value=1e3)


@pytest.mark.parametrize(
    "g, kappa, gamma, Gamma, beta",
    [
        (1.0, 10.0, 0.05, 0.125, 0.8),
        (1.0, 10.0, 0.0, 0.1, 1.0),
        (1.0, 1.0, 2.0, 2.0, 0.5),
    ],
)
def test_derive_examples(g, kappa, gamma, Gamma, beta):
    p = derive(RawCavityParams(g, kappa, gamma))
    assert p.Gamma == pytest.approx(Gamma, rel=1e-14)
    assert p.beta == pytest.approx(beta, rel=1e-14)


@pytest.mark.parametrize(
    "Gamma, beta, kappa, g, gamma",
    [
        (0.125, 0.8, 10.0, 1.0, 0.05),
        (1.0, 1.0, 5.0, math.sqrt(5.0), 0.0),
        (1.0, 0.5, 1.0, math.sqrt(0.5), 1.0),
    ],
)
def test_invert_examples(Gamma, beta, kappa, g, gamma):
    raw = invert(AtomCavityParams(Gamma, beta), kappa)
    assert raw.g == pytest.approx(g, rel=1e-14)
    assert raw.gamma == pytest.approx(gamma, rel=1e-12, abs=1e-15)
    assert raw.kappa == kappa


def test_beta_one_is_lossless():
    assert derive(RawCavityParams(3.0, 7.0, 0.0)).beta == 1.0
    assert invert(AtomCavityParams(2.0, 1.0), 3.0).gamma == 0.0


@pytest.mark.parametrize("Gamma, beta, expected", [(1.0, 0.5, 2.0), (1.0, 1.0, 1.0), (2.0, 0.8, 2.5)])
def test_saturation_scale(Gamma, beta, expected):
    assert saturation_scale(AtomCavityParams(Gamma, beta)) == pytest.approx(expected, rel=1e-15)


def test_saturation_scale_needs_coupling():
    with pytest.raises(DegenerateParameterError):
        saturation_scale(AtomCavityParams(1.0, 0.0))


@pytest.mark.parametrize(
    "args",
    [(0.0, 1.0, 0.0), (-1.0, 1.0, 0.0), (1.0, 0.0, 0.0), (1.0, 1.0, -0.1), (math.nan, 1.0, 0.0), (1.0, math.inf, 0.0)],
)
def test_raw_validation(args):
    with pytest.raises(InvalidParameterError):
        RawCavityParams(*args)


@pytest.mark.parametrize("args", [(0.0, 0.5), (-1.0, 0.5), (1.0, -0.01), (1.0, 1.2), (math.inf, 0.5), (1.0, math.nan)])
def test_canonical_validation(args):
    with pytest.raises(InvalidParameterError):
        AtomCavityParams(*args)


def test_invert_rejects_bad_kappa():
    p = AtomCavityParams(1.0, 0.5)
    for kappa in (0.0, -1.0, math.nan):
        with pytest.raises(InvalidParameterError):
            invert(p, kappa)


def test_bad_cavity_ratio():
    assert RawCavityParams(2.0, 100.0).bad_cavity_ratio == 50.0


def test_kappa_for_ratio():
    p = AtomCavityParams(1.0, 0.8)
    raw = invert(p, kappa_for_ratio(p, 50.0))
    assert raw.bad_cavity_ratio == pytest.approx(50.0, rel=1e-13)
    assert raw.g == pytest.approx(40.0, rel=1e-13)


@given(g=rates, kappa=rates, gamma=rates)
def test_derive_then_invert(g, kappa, gamma):
    raw = RawCavityParams(g, kappa, gamma)
    p = derive(raw)
    assert 0.0 <= p.beta <= 1.0
    back = invert(p, kappa)
    assert back.g == pytest.approx(g, rel=1e-12)
    assert back.gamma == pytest.approx(gamma, rel=1e-12, abs=1e-12 * p.Gamma)


@given(Gamma=rates, beta=st.floats(min_value=1e-6, max_value=1.0), kappa=rates)
def test_invert_then_derive(Gamma, beta, kappa):
    p = AtomCavityParams(Gamma, beta)
    q = derive(invert(p, kappa))
    assert q.Gamma == pytest.approx(Gamma, rel=1e-12)
    assert q.beta == pytest.approx(beta, rel=1e-12)


@given(g=rates, kappa=rates, gamma=st.floats(min_value=1e-3, max_value=1e3))
def test_beta_below_one_with_losses(g, kappa, gamma):
    # gamma large enough not to vanish next to g^2/kappa in double precision
    if gamma / 2 < 1e-12 * g * g / kappa:
        return
    assert derive(RawCavityParams(g, kappa, gamma)).beta < 1.0
