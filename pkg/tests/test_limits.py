import math

import numpy as np
import pytest
import scipy.stats
from hypothesis import given, settings, strategies as st

from selfnorm import (
    FamilySpec,
    OracleMissingError,
    ParameterDomainError,
    SeededStream,
    TailConstants,
    brownian_functional_oracle,
    chf_exponent,
    dispersion_matrix,
    empirical_chf,
    g1_law,
    g2_law,
    ks_statistic,
    ks_two_sample,
    limit_chf,
    load_oracle,
    save_oracle,
    scaled_normal_law,
    std_normal_law,
    tail_constants,
)
from selfnorm.limits import g1_cdf, g2_cdf

# frozen high-precision references for the limiting chf exponent
# c(u, w) = 2r int (exp(i |w| t^(p/a) y^p) cos(|u| t^(1/a) y) - 1) y^(-a-1) dy,
# computed once with 50-digit arbitrary-precision quadrature and pinned here
CHF_REFS = [
    # (alpha, p, r, t1, u, w, expected c)
    (1.0, 2.0, 1 / np.pi, 1.0, 1.0, 0.0, complex(-1.0, 0.0)),
    (1.0, 2.0, 1 / np.pi, 1.0, 1.0, 0.5, complex(-0.867248960009258923, 0.30772844065377427)),
    (1.0, 2.0, 1 / np.pi, 1.0, 1.0, 1.0, complex(-1.00523362693252106, 0.607121034833881908)),
    (1.0, 2.0, 1 / np.pi, 1.0, 2.0, 0.5, complex(-1.88450071642781907, -0.10267651232009009)),
    (1.0, 2.0, 1 / np.pi, 1.0, 2.0, 1.0, complex(-1.69823058476500485, 0.15420030187819068)),
    (1.0, 2.0, 1 / np.pi, 1.0, 0.5, 1.0, complex(-0.848265236987892078, 0.748542651880866615)),
    (1.0, 2.0, 1 / np.pi, 1.0, 0.0, 0.5, complex(-0.564189583547756287, 0.564189583547756287)),
    (1.0, 2.0, 1 / np.pi, 1.0, 0.0, 1.0, complex(-0.797884560802865356, 0.797884560802865356)),
    (1.0, 2.0, 1 / np.pi, 0.5, 1.0, 1.0, complex(-0.50261681346626053, 0.303560517416940954)),
    (1.5, 2.0, 0.299206710301074508, 1.0, 1.5, 0.7, complex(-1.67898123783382434, 0.597714816878480211)),
    (1.5, 2.0, 0.299206710301074508, 1.0, 0.0, 1.0, complex(-0.553516793111050901, 1.33630774892996163)),
    (0.8, 1.2, 0.35, 0.8, 2.0, 1.0, complex(-1.68842876227054708, 0.768171658412094675)),
    (0.8, 1.2, 0.35, 0.8, 0.0, 1.0, complex(-0.937628487147711636, 1.62402017836377898)),
]


@pytest.mark.parametrize("alpha,p,r,t1,u,w,want", CHF_REFS)
def test_chf_exponent_frozen_references(alpha, p, r, t1, u, w, want):
    got = chf_exponent(u, w, alpha, p, TailConstants(r=r, s=r), t1=t1)
    assert abs(got - want) <= 1e-8 * abs(want)


def test_chf_exponent_cauchy_checkpoint():
    # standard Cauchy tails, w = 0: c(1, 0) = -1, chf = 1/e exactly
    tails = tail_constants(FamilySpec(kind="SymStable", alpha=1.0))
    assert tails.r == pytest.approx(1.0 / np.pi, rel=1e-14)
    z = limit_chf(1.0, 0.0, 1.0, 2.0, tails)
    assert abs(z - math.exp(-1.0)) <= 1e-6


@given(st.floats(0.3, 1.9), st.floats(0.0, 1.0), st.floats(-3, 3), st.floats(-2, 2),
       st.floats(0.1, 1.0))
@settings(max_examples=30, deadline=None)
def test_chf_invariants(alpha, frac, u, w, t1):
    p = alpha + 0.15 + frac * (2.5 - alpha - 0.15)  # p in (alpha + 0.15, 2.5]
    tails = TailConstants(r=0.4, s=0.4)
    z = limit_chf(u, w, alpha, p, tails, t1=t1)
    assert abs(z) <= 1.0 + 1e-12
    assert abs(z - limit_chf(-u, w, alpha, p, tails, t1=t1)) <= 1e-10
    assert abs(np.conj(z) - limit_chf(u, -w, alpha, p, tails, t1=t1)) <= 1e-10


def test_chf_exponent_domain():
    tails = TailConstants(r=0.4, s=0.4)
    with pytest.raises(ParameterDomainError):
        chf_exponent(1.0, 1.0, 1.5, 1.5, tails)  # needs p > alpha
    with pytest.raises(ParameterDomainError):
        chf_exponent(1.0, 1.0, 2.0, 2.5, tails)  # alpha must be < 2


def test_tail_constants_values():
    # SymPareto: P(|X| > x) = x^-a, so each side has r = a/2
    tc = tail_constants(FamilySpec(kind="SymPareto", alpha=1.6))
    assert tc.r == pytest.approx(0.8, rel=1e-14)
    assert tc.r == tc.s
    # scale enters as scale^alpha
    tc2 = tail_constants(FamilySpec(kind="SymPareto", alpha=1.6, scale=2.0))
    assert tc2.r == pytest.approx(0.8 * 2.0**1.6, rel=1e-13)
    # StudentT(1) is the Cauchy: r = 1/pi
    tct = tail_constants(FamilySpec(kind="StudentT", alpha=1.0))
    assert tct.r == pytest.approx(1.0 / np.pi, rel=1e-12)


def test_tail_constants_rejects_light_tails():
    with pytest.raises(ParameterDomainError):
        tail_constants(FamilySpec(kind="Gaussian"))
    with pytest.raises(ParameterDomainError):
        tail_constants(FamilySpec(kind="SymStable", alpha=2.0))


def test_g1_cdf_closed_form():
    x = np.array([-1.0, 0.0, 0.5, 1.0, 2.0])
    want = np.where(x > 0, 2.0 * scipy.stats.norm.cdf(x) - 1.0, 0.0)
    assert np.allclose(g1_cdf(x), want, atol=1e-14)


def test_g2_cdf_shape():
    x = np.linspace(0.05, 4.0, 80)
    c = g2_cdf(x)
    assert np.all(np.diff(c) >= -1e-12)
    assert c[0] < 1e-6 and c[-1] > 0.999
    assert g2_cdf(np.array([-1.0, 0.0]))[0] == 0.0
    # series is inside the g1 law: sup |W| >= sup W pointwise
    assert np.all(c <= g1_cdf(x) + 1e-12)


def test_g2_series_matches_fresh_simulation():
    # dual route: series vs an independent small Brownian simulation
    law = brownian_functional_oracle("G2", paths=4000, steps=2000, stream=SeededStream(555))
    xs = np.array([0.8, 1.2, 1.6, 2.2])
    assert np.max(np.abs(g2_cdf(xs) - law.cdf(xs))) < 0.03


def test_oracle_is_bit_reproducible():
    a = brownian_functional_oracle("G3", paths=500, steps=300, stream=SeededStream(77, 2))
    b = brownian_functional_oracle("G3", paths=500, steps=300, stream=SeededStream(77, 2))
    assert np.array_equal(a.table, b.table)
    assert a.meta["paths"] == 500 and a.meta["steps"] == 300


def test_oracle_save_load_round_trip(tmp_path):
    law = brownian_functional_oracle("G4", paths=400, steps=200, stream=SeededStream(9))
    dest = tmp_path / "g4_oracle.txt"
    save_oracle(law, dest)
    back = load_oracle(dest)
    assert np.array_equal(back.table, law.table)  # repr floats: exact round trip
    assert back.kind == "G4"
    assert back.meta["paths"] == 400
    assert back.meta["master_seed"] == 9
    x = np.linspace(0.0, 2.0, 21)
    assert np.allclose(back.cdf(x), law.cdf(x), atol=1e-12)


def test_oracle_load_errors(tmp_path):
    with pytest.raises(OracleMissingError):
        load_oracle(tmp_path / "missing.txt")
    bad = tmp_path / "bad.txt"
    bad.write_text("not an oracle\n")
    with pytest.raises(OracleMissingError):
        load_oracle(bad)
    truncated = tmp_path / "trunc.txt"
    truncated.write_text("# selfnorm-oracle v1\n# kind: G3\n")
    with pytest.raises(OracleMissingError):
        load_oracle(truncated)


def test_ks_statistic_matches_scipy():
    rng = np.random.default_rng(2)
    sample = rng.standard_normal(400)
    ours = ks_statistic(sample, std_normal_law())
    ref = scipy.stats.kstest(sample, "norm").statistic
    assert ours == pytest.approx(ref, rel=1e-9)


def test_ks_two_sample_matches_scipy():
    rng = np.random.default_rng(3)
    a = rng.standard_normal(300)
    b = rng.standard_normal(450) * 1.3
    ours = ks_two_sample(a, b)
    ref = scipy.stats.ks_2samp(a, b).statistic
    assert ours == pytest.approx(ref, rel=1e-9)


def test_ks_rejects_empty():
    with pytest.raises(ParameterDomainError):
        ks_statistic(np.array([]), std_normal_law())
    with pytest.raises(ParameterDomainError):
        ks_two_sample(np.array([]), np.array([1.0]))


def test_scaled_normal_law():
    law = scaled_normal_law(2.0)
    assert law.cdf(0.0) == pytest.approx(0.5)
    assert law.cdf(2.0) == pytest.approx(scipy.stats.norm.cdf(1.0), rel=1e-12)
    with pytest.raises(ParameterDomainError):
        scaled_normal_law(0.0)


def test_empirical_chf_hand_values():
    pts = np.array([[np.pi, 0.0], [np.pi, 0.0]])
    z = empirical_chf(pts, (1.0, 0.0))
    assert z == pytest.approx(-1.0 + 0.0j, abs=1e-12)
    assert empirical_chf(np.zeros((5, 2)), (0.7, -1.3)) == pytest.approx(1.0 + 0.0j)
    with pytest.raises(ParameterDomainError):
        empirical_chf(np.zeros((5, 3)), (0.0, 0.0))


def test_dispersion_matrix_is_min():
    t = (0.25, 0.5, 1.0)
    m = dispersion_matrix(t)
    want = np.minimum.outer(np.array(t), np.array(t))
    assert np.array_equal(m, want)
    with pytest.raises(ParameterDomainError):
        dispersion_matrix((0.5, 0.25))
    with pytest.raises(ParameterDomainError):
        dispersion_matrix(())
