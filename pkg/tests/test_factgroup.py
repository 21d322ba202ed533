"""Unit tests for the factorization group layer (exact backend)."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tanglev import factgroup
from tanglev.factgroup import Mat2
from tanglev.rational import QC, parse_scalar, scalar_from_json, scalar_to_json

from conftest import rational_mat


def qc_strategy(span=6, maxden=3):
    frac = st.builds(Fraction,
                     st.integers(-span, span),
                     st.integers(1, maxden))
    return st.builds(QC, frac, frac)


def mat_strategy():
    return st.builds(Mat2, *(qc_strategy() for _ in range(4)))


def factorizable(m):
    try:
        factgroup.factorize(m)
        return True
    except factgroup.NotFactorizable:
        return False


class TestScalars:
    def test_parse_round_trip(self):
        for text in ("3/4", "-1/2+2/3 i", "5 i", "-i", "2-i"):
            v = parse_scalar(text)
            assert parse_scalar(str(v)) == v

    def test_parse_rejects_garbage(self):
        for text in ("", "x", "1/0"):
            with pytest.raises(ValueError):
                parse_scalar(text)

    def test_json_round_trip(self):
        v = QC(Fraction(3, 4), Fraction(-1, 2))
        assert scalar_from_json(scalar_to_json(v)) == v
        z = 1.5 - 2.0j
        assert scalar_from_json(scalar_to_json(z)) == z

    @given(qc_strategy(), qc_strategy())
    def test_field_ops(self, u, v):
        assert u + v == v + u
        assert u * v == v * u
        if v:
            assert (u / v) * v == u


class TestFactorization:
    def test_worked_example(self):
        g = Mat2(QC(Fraction(-4, 3)), QC(1), QC(Fraction(-10, 3)), QC(2))
        f = factgroup.factorize(g)
        assert f.coords() == (QC(2), QC(1), QC(3), QC(5))
        assert f.plus() == Mat2(QC(1), QC(1), QC(0), QC(2))
        assert f.minus() == Mat2(QC(3), QC(0), QC(5), QC(1))
        assert f.assemble() == g

    def test_rejects_singular_and_border(self):
        with pytest.raises(factgroup.NotFactorizable):
            factgroup.factorize(Mat2(QC(1), QC(2), QC(2), QC(4)))
        with pytest.raises(factgroup.NotFactorizable):
            factgroup.factorize(Mat2(QC(1), QC(0), QC(1), QC(0)))

    @given(mat_strategy())
    @settings(max_examples=200)
    def test_round_trip(self, g):
        if not factorizable(g):
            return
        f = factgroup.factorize(g)
        assert f.assemble() == g
        assert f.plus() * f.minus().inv() == g


class TestStarProduct:
    def test_identity_is_neutral(self, rng):
        e = factgroup.identity()
        for _ in range(20):
            g = rational_mat(rng)
            assert factgroup.star_mul(g, e) == g
            assert factgroup.star_mul(e, g) == g

    def test_inverse_both_sides(self, rng):
        e = factgroup.identity()
        for _ in range(20):
            g = rational_mat(rng)
            try:
                gi = factgroup.star_inv(g)
            except factgroup.NotFactorizable:
                continue
            assert factgroup.star_mul(g, gi) == e
            assert factgroup.star_mul(gi, g) == e

    def test_associative(self, rng):
        for _ in range(30):
            g, h, k = (rational_mat(rng) for _ in range(3))
            try:
                lhs = factgroup.star_mul(factgroup.star_mul(g, h), k)
                rhs = factgroup.star_mul(g, factgroup.star_mul(h, k))
            except factgroup.NotFactorizable:
                continue
            assert lhs == rhs

    def test_matches_matrix_formula(self, rng):
        # the coordinate form of star_mul against its defining product
        for _ in range(20):
            g, h = rational_mat(rng), rational_mat(rng)
            fg, fh = factgroup.factorize(g), factgroup.factorize(h)
            try:
                expect = (fg.plus() * fh.plus()) * \
                    (fg.minus() * fh.minus()).inv()
            except (factgroup.NotFactorizable, ZeroDivisionError):
                continue
            assert factgroup.star_mul(g, h) == expect


class TestCrossingMap:
    def test_xlr_round_trip(self, rng):
        for _ in range(30):
            x, y = rational_mat(rng), rational_mat(rng)
            try:
                c, d = factgroup.xlr(x, y)
                a, b = factgroup.xlr_inverse(c, d)
            except factgroup.NotFactorizable:
                continue
            assert (a, b) == (x, y)

    def test_yb_unmap_round_trip(self, rng):
        for _ in range(30):
            x, y = rational_mat(rng), rational_mat(rng)
            try:
                u, v = factgroup.yb_map(x, y)
                a, b = factgroup.yb_unmap(u, v)
            except factgroup.NotFactorizable:
                continue
            assert (a, b) == (x, y)

    def test_xlr_preserves_star_product(self, rng):
        # the defining property: x_L * x_R = x * y in the star group
        for _ in range(30):
            x, y = rational_mat(rng), rational_mat(rng)
            try:
                c, d = factgroup.xlr(x, y)
                assert factgroup.star_mul(c, d) == factgroup.star_mul(x, y)
            except factgroup.NotFactorizable:
                continue

    def test_curl_partner_inverse(self, rng):
        for _ in range(30):
            c = rational_mat(rng)
            try:
                d = factgroup.curl_partner(c)
                assert factgroup.curl_unpartner(d) == c
            except factgroup.NotFactorizable:
                continue

    def test_curl_partner_fixed_point(self, rng):
        # the kink crossing maps (c, d) to itself
        for _ in range(20):
            c = rational_mat(rng)
            try:
                d = factgroup.curl_partner(c)
                assert factgroup.xlr(c, d) == (c, d)
            except factgroup.NotFactorizable:
                continue


class TestFloatBackend:
    def test_to_float_and_tolerant_equality(self):
        g = Mat2(QC(Fraction(1, 3)), QC(0), QC(2), QC(1))
        gf = factgroup.to_float(g)
        assert isinstance(gf.m11, complex)
        assert factgroup.mats_equal(gf, gf)
        bumped = Mat2(gf.m11 + 1e-14, gf.m12, gf.m21, gf.m22)
        assert factgroup.mats_equal(gf, bumped)
        assert not factgroup.mats_equal(gf, Mat2(gf.m11 + 1e-3, gf.m12,
                                                 gf.m21, gf.m22))

    def test_float_xlr_round_trip(self, rng):
        for _ in range(20):
            x = factgroup.to_float(rational_mat(rng))
            y = factgroup.to_float(rational_mat(rng))
            try:
                c, d = factgroup.xlr(x, y)
                a, b = factgroup.xlr_inverse(c, d)
            except factgroup.NotFactorizable:
                continue
            assert factgroup.mats_equal(a, x, tol=1e-8)
            assert factgroup.mats_equal(b, y, tol=1e-8)

    def test_json_round_trip(self, rng):
        g = rational_mat(rng)
        assert Mat2.from_json(g.to_json()) == g
        gf = factgroup.to_float(g)
        assert factgroup.mats_equal(Mat2.from_json(gf.to_json()), gf)
