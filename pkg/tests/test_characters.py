import random
from fractions import Fraction

import pytest

from frobjet.characters import (PairingContext, RestrictedSeries, asd_check,
                                count_roots_zp, gm_character_eval,
                                kernel_dimension, pairing, reciprocity_check,
                                strassman_count, unit_log)
from frobjet.crystal import crystalline_classes, kedlaya_frobenius
from frobjet.errors import (BetaTooLarge, DistinctWordsRequired, NotAUnit,
                            SeriesTooShort, ZeroSeries)
from frobjet.formal import WeierstrassCurve, formal_log
from frobjet.tower import (INF, FrobeniusIndex, QElement, TowerConfig,
                           build_tower, valuation)


@pytest.fixture(scope="module")
def t5():
    return build_tower(TowerConfig(5, 2, 0, 1, 14))


@pytest.fixture(scope="module")
def t7():
    return build_tower(TowerConfig(7, 2, 1, 1, 14))


class TestGmCharacter:
    def test_one_maps_to_zero(self, t7):
        assert gm_character_eval(t7, FrobeniusIndex(1), t7.one()).num.is_zero()

    def test_teichmuller_vanishes(self, t7):
        rng = random.Random(1)
        for _ in range(5):
            u = t7.teichmuller(t7.from_int(1 + rng.randrange(t7.p - 1)))
            assert gm_character_eval(t7, FrobeniusIndex(1), u).num.is_zero()
        assert gm_character_eval(t7, FrobeniusIndex(1), t7.zeta()
                                 ).num.is_zero()

    def test_units_required(self, t7):
        with pytest.raises(NotAUnit):
            gm_character_eval(t7, FrobeniusIndex(0), t7.pi())

    def test_base_closed_form(self, t5):
        # pi = p, phi = id: psi(x) = p^(-1)(1 - p) log x, two-route check
        rng = random.Random(2)
        for _ in range(10):
            x = t5.from_int(1 + 5 * rng.randrange(5 ** 11))
            psi = gm_character_eval(t5, FrobeniusIndex(0), x)
            lx = unit_log(t5, x)
            expect = QElement(lx.num * (1 - 5), lx.den + 1)
            v = (psi - expect).normalized().valuation()
            assert v == INF or v >= 10

    def test_additive_on_units(self, t7):
        rng = random.Random(3)
        for _ in range(100):
            x, y = t7.random_unit(rng), t7.random_unit(rng)
            d = gm_character_eval(t7, FrobeniusIndex(1), x * y) - (
                gm_character_eval(t7, FrobeniusIndex(1), x)
                + gm_character_eval(t7, FrobeniusIndex(1), y))
            v = d.valuation()
            assert v == INF or v >= 12


@pytest.fixture(scope="module")
def pipeline(t5):
    cur = WeierstrassCurve(5, 1, 1)
    drd = kedlaya_frobenius(cur, 14)
    cc = crystalline_classes(drd, 2)
    log = formal_log(cur, 25 * 10 + 2, 14)
    fvals = {"ft_mu": t5.from_int(cc.f("11")),
             "ft_nu": t5.from_int(cc.f("1")),
             "f_mu_nu": t5.from_int(cc.f_pair("11", "1"))}
    return log, fvals


class TestAsd:

    def test_zero_classes_trivially_pass(self, t5, pipeline):
        log, _ = pipeline
        z = {"ft_mu": t5.zero(), "ft_nu": t5.zero(), "f_mu_nu": t5.zero()}
        rep = asd_check(log, z, (1, 1), (1,), 10, t5, (0,))
        assert all(r["pass"] for r in rep)

    def test_crystalline_classes_pass(self, t5, pipeline):
        log, fvals = pipeline
        rep = asd_check(log, fvals, (1, 1), (1,), 10, t5, (0,))
        assert all(r["pass"] for r in rep)
        assert all(r["certificate"] >= 2 for r in rep)

    def test_mutated_class_fails(self, t5, pipeline):
        log, fvals = pipeline
        bad = dict(fvals)
        bad["ft_mu"] = fvals["ft_mu"] * (1 + 5)  # unit != 1
        rep = asd_check(log, bad, (1, 1), (1,), 10, t5, (0,))
        assert any(not r["pass"] for r in rep)

    def test_short_series_rejected(self, t5, pipeline):
        _, fvals = pipeline
        short = formal_log(WeierstrassCurve(5, 1, 1), 30, 14)
        with pytest.raises(SeriesTooShort):
            asd_check(short, fvals, (1, 1), (1,), 10, t5, (0,))


class TestPairing:
    def test_context_validation(self, t7):
        with pytest.raises(DistinctWordsRequired):
            PairingContext(t7, (0, 1), (1,), (1,))
        with pytest.raises(ValueError):
            PairingContext(t7, (0, 1), (1, 1, 1), (2,))

    def test_self_pairing_zero(self, t7):
        ctx = PairingContext(t7, (0, 1), (1, 1), (2, 1))
        rng = random.Random(4)
        for _ in range(10):
            a = t7.random_element(rng)
            assert pairing(ctx, a, a).is_zero()

    def test_rational_multiples_in_kernel(self, t7):
        ctx = PairingContext(t7, (0, 1), (1, 1), (2, 1))
        rng = random.Random(5)
        beta = t7.pi()
        lam = t7.from_int(rng.randrange(7 ** 14))
        assert pairing(ctx, beta * lam, beta).is_zero()

    def test_nonrational_twist_detected(self):
        # alpha = zeta pi_1 with zeta outside the base field pairs nonzero
        # against beta = pi_1; needs a level whose squared Frobenius still
        # moves zeta, hence unramified degree 3 (ord of 7 mod 9)
        t = build_tower(TowerConfig(7, 3, 2, 3, 8))
        ctx = PairingContext(t, (0, 1), (1, 1), (2, 1))
        beta = t.pi() ** 3        # the level-one uniformizer 7^(1/3)
        alpha = t.zeta() * beta
        assert not pairing(ctx, alpha, beta).is_zero()
        # on a level with f = 2 the squared Frobenius fixes zeta and the
        # same pairing collapses for equal-length words
        t2 = build_tower(TowerConfig(7, 2, 2, 2, 8))
        ctx2 = PairingContext(t2, (0, 1), (1, 1), (2, 1))
        assert pairing(ctx2, t2.zeta() * t2.pi(), t2.pi()).is_zero()

    def test_bilinear(self, t7):
        ctx = PairingContext(t7, (0, 1), (1,), (2, 2))
        rng = random.Random(6)
        a, b, c = (t7.random_element(rng) for _ in range(3))
        n = rng.randrange(1, 50)
        assert pairing(ctx, a + b * n, c) == (
            pairing(ctx, a, c) + pairing(ctx, b, c) * n)


class TestKernelDimension:
    def test_ramified_witness(self, t7):
        ctx = PairingContext(t7, (0, 1), (1, 1), (2, 1))
        kd = kernel_dimension(ctx, t7.pi())
        assert kd["dimension"] == 1
        for w in kd["witnesses"]:
            assert pairing(ctx, w, t7.pi()).is_zero()
            assert valuation(w) == Fraction(1, 2)

    def test_full_for_rational_beta_equal_gammas(self, t7):
        ctx = PairingContext(t7, (0, 0), (1, 1), (2, 2))
        kd = kernel_dimension(ctx, t7.from_int(7 * 2))
        assert kd["dimension"] == t7.f * t7.e

    def test_zero_beta_full(self, t7):
        ctx = PairingContext(t7, (0, 1), (1, 1), (2, 1))
        kd = kernel_dimension(ctx, t7.zero())
        assert kd["dimension"] == t7.f * t7.e

    def test_nonzero_beta_kernel_at_least_one(self, t7):
        ctx = PairingContext(t7, (0, 1), (1, 1), (2, 1))
        rng = random.Random(7)
        for _ in range(5):
            beta = t7.pi() * t7.random_unit(rng)
            kd = kernel_dimension(ctx, beta)
            assert kd["dimension"] >= 1
            assert pairing(ctx, beta, beta).is_zero()


class TestReciprocity:
    def test_equal_arguments_vanish(self, t7):
        ctx = PairingContext(t7, (0, 1), (1, 1), (2, 1))
        a = t7.pi() * t7.from_int(3)
        assert pairing(ctx, a, a).is_zero()
        assert reciprocity_check(ctx, a, a)

    def test_random_admissible_pairs(self, t7):
        ctx = PairingContext(t7, (0, 1), (1, 2), (1,))
        rng = random.Random(8)
        for _ in range(50):
            a = t7.pi() * t7.random_element(rng)
            b = t7.pi() * t7.random_element(rng)
            assert reciprocity_check(ctx, a, b)

    def test_region_enforced(self, t7):
        ctx = PairingContext(t7, (0, 1), (1, 1), (2, 1))
        with pytest.raises(BetaTooLarge):
            reciprocity_check(ctx, t7.one(), t7.pi())


class TestStrassman:
    def test_linear(self):
        s = RestrictedSeries(5, [0, 1], 5)
        assert strassman_count(s)[0] == 1
        assert count_roots_zp(s) == 1

    def test_valuation_obstruction(self):
        s = RestrictedSeries(5, [-5, 0, 1], 6)
        bound, data = strassman_count(s)
        assert bound == 2 and data["min_valuation"] == 0
        assert count_roots_zp(s) == 0

    def test_split_quadratic(self):
        # (t - 5)(t - 10) times the unit polynomial (1 + 5 t)
        poly = [50, 235, -74, 5]
        s = RestrictedSeries(5, poly, 9)
        bound, _ = strassman_count(s)
        assert bound >= 2
        assert count_roots_zp(s) == 2

    def test_clustered_roots_separate(self):
        # 5 and 55 agree mod 25; the search must still split them
        s = RestrictedSeries(5, [275, -60, 1], 9)
        assert count_roots_zp(s, depth=10) == 2

    def test_zero_series_rejected(self):
        with pytest.raises(ZeroSeries):
            strassman_count(RestrictedSeries(5, [0, 0], 4))

    def test_uncleared_tail_rejected(self):
        with pytest.raises(SeriesTooShort):
            strassman_count(RestrictedSeries(5, [1, 1], 0))
