"""Integer feasibility engine: worked examples, scans and monotonicity."""

from fractions import Fraction
from types import SimpleNamespace

import pytest

from delpezzo.numerics import (
    INFEASIBLE,
    DelPezzoParams,
    cover_identities,
    exact_lower_bound,
    feasibility_region,
    field_degree_divides,
    h0_anticanonical,
    inequality_bound,
    main_equation,
    numerics_suite,
    riemann_roch_chi,
    scan_is_conclusive,
    solve_q1,
    torsor_chi_sum,
    torsor_degree,
)
from delpezzo.reports import failures


class TestRiemannRoch:
    def test_anti_canonical_twist(self):
        # D = -K on a degree-1 surface with chi(O) = 0
        assert riemann_roch_chi(0, 1, -1) == 1

    def test_trivial_divisor(self):
        assert riemann_roch_chi(5, 0, 0) == 5

    def test_direct_evaluation(self):
        # chi(O) = 1, D = -2K with d = 8: chi = 1 + (32 + 16)/2 = 25
        assert riemann_roch_chi(1, 4 * 8, -2 * 8) == 25

    def test_parity_violation(self):
        with pytest.raises(ValueError):
            riemann_roch_chi(0, 1, 0)


class TestTorsorChiSum:
    def test_degree_one_example(self):
        assert torsor_chi_sum(DelPezzoParams(p=2, m=1, e=0, d=1, q_X=1)) == 1

    def test_degree_two_example(self):
        assert torsor_chi_sum(DelPezzoParams(p=2, m=1, e=1, d=2, q_X=1)) == 2

    def test_odd_characteristic_against_inline_sum(self):
        params = DelPezzoParams(p=3, m=1, e=0, d=2, q_X=0)
        value = torsor_chi_sum(params)
        # independent route: chi p + (d/2) sum_i (m^2 i^2 + m i)
        brute = params.chi_X * 3 + Fraction(2, 2) * sum(i * i + i for i in range(3))
        assert value == brute == 11

    def test_exhaustive_agreement(self):
        for p in (2, 3, 5, 7, 11, 13):
            for m in range(1, 11):
                for d in range(1, 21):
                    torsor_chi_sum(DelPezzoParams(p=p, m=m, e=0, d=d, q_X=0))


class TestMainEquation:
    def test_degree_one_solution(self):
        assert main_equation(DelPezzoParams(p=2, m=1, e=0, d=1, q_X=1)) == 0

    def test_degree_two_solution(self):
        assert main_equation(DelPezzoParams(p=2, m=1, e=1, d=2, q_X=1)) == 0

    def test_degree_three_infeasible(self):
        result = main_equation(DelPezzoParams(p=2, m=1, e=0, d=3, q_X=1))
        assert result is INFEASIBLE

    def test_solutions_match_the_scan(self):
        hits = set(solve_q1(7, 6, 20))
        for p in (2, 3, 5, 7):
            for m in range(1, 7):
                for e in (0, 1):
                    for d in range(1, 21):
                        q_Z = main_equation(DelPezzoParams(p=p, m=m, e=e, d=d, q_X=1))
                        if (p, m, e, d) in hits:
                            assert q_Z == 0
                        else:
                            assert q_Z is INFEASIBLE


class TestTorsorDegree:
    def test_degree_eight_covers(self):
        assert torsor_degree(DelPezzoParams(p=2, m=1, e=0, d=1, q_X=1)) == 8
        assert torsor_degree(DelPezzoParams(p=2, m=1, e=1, d=2, q_X=1)) == 8

    def test_formula_at_degenerate_twist(self):
        # m = 0 is outside the parameter invariants but the formula itself
        # degenerates to p^(1-e) d
        assert torsor_degree(SimpleNamespace(p=2, m=0, e=0, d=5)) == 10

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            DelPezzoParams(p=4, m=1, e=0, d=1, q_X=1)
        with pytest.raises(ValueError):
            DelPezzoParams(p=2, m=0, e=0, d=1, q_X=1)
        with pytest.raises(ValueError):
            DelPezzoParams(p=2, m=1, e=2, d=1, q_X=1)


class TestSolveQ1:
    def test_reference_bounds(self):
        assert solve_q1(13, 20, 100) == [(2, 1, 0, 1), (2, 1, 1, 2)]

    def test_tight_bounds(self):
        assert solve_q1(2, 1, 1) == [(2, 1, 0, 1)]

    def test_small_bounds_still_both(self):
        assert solve_q1(3, 3, 3) == [(2, 1, 0, 1), (2, 1, 1, 2)]

    def test_against_inline_enumeration(self):
        expected = []
        for p in (2, 3, 5):
            for m in range(1, 5):
                for e in (0, 1):
                    for d in range(1, 11):
                        rhs = Fraction(m * p * (p - 1) * d * (3 + m * (2 * p - 1)), 12)
                        if rhs == p ** e:
                            expected.append((p, m, e, d))
        assert solve_q1(5, 4, 10) == expected

    def test_bound_validation(self):
        with pytest.raises(ValueError):
            solve_q1(1, 1, 1)

    def test_default_bounds_are_conclusive(self):
        assert solve_q1() == [(2, 1, 0, 1), (2, 1, 1, 2)]
        assert scan_is_conclusive(13, 20, 100)
        # a box cut before d = 2 cannot certify itself: the degree-two
        # solution sits just outside it
        assert not scan_is_conclusive(2, 1, 1)


class TestFeasibility:
    def test_characteristic_two_row(self):
        table = feasibility_region(2, 4, 4)
        flags = {(r.d, r.q): (r.feasible, r.attained) for r in table.rows}
        assert flags[(1, 1)] == (True, True)
        assert flags[(2, 1)] == (True, True)
        assert flags[(3, 1)] == (False, False)

    def test_characteristic_three(self):
        table = feasibility_region(3, 4, 4)
        flags = {(r.d, r.q): r.feasible for r in table.rows}
        assert flags[(1, 1)] is False  # 6 < 8
        assert table.q_min_by_d[0] == 2

    def test_characteristic_five_minimum(self):
        assert feasibility_region(5, 2, 8).q_min_by_d[0] == 4

    def test_q_min_matches_rows(self):
        for p in (2, 3, 5):
            table = feasibility_region(p, 6, 40)
            for d in range(1, 7):
                q_min = table.q_min_by_d[d - 1]
                rows = {r.q: r.feasible for r in table.rows if r.d == d}
                assert all(not rows[q] for q in rows if q < q_min)
                assert all(rows[q] for q in rows if q >= q_min)

    def test_monotonicity(self):
        table = feasibility_region(3, 8, 8)
        flags = {(r.d, r.q): r.feasible for r in table.rows}
        for d in range(1, 9):
            for q in range(1, 8):
                if flags[(d, q)]:
                    assert flags[(d, q + 1)]
                    if d > 1:
                        assert flags[(d - 1, q)]

    def test_prime_required(self):
        with pytest.raises(ValueError):
            feasibility_region(6, 2, 2)


class TestBounds:
    def test_exact_bound_dominates_with_expected_equality_pattern(self):
        for p in (2, 3, 5, 7, 11, 13):
            for m in range(1, 11):
                for e in (0, 1):
                    for d in range(1, 21):
                        gap = exact_lower_bound(p, m, e, d) - inequality_bound(p, d)
                        assert gap >= 0
                        if gap == 0:
                            assert (e, m) == (1, 1)
        # and the equality case is actually attained
        assert exact_lower_bound(2, 1, 1, 2) == inequality_bound(2, 2)


class TestSmallOps:
    def test_h0_values(self):
        assert h0_anticanonical(1, 0) == 1
        assert h0_anticanonical(1, 1) == 2
        assert h0_anticanonical(3, 0) == 6

    def test_h0_validation(self):
        with pytest.raises(ValueError):
            h0_anticanonical(0, 0)

    def test_cover_identities(self):
        assert not failures(cover_identities(e=0, chi_Z=1, chi_X=0, d_X=1, K_Z_sq=8))
        assert not failures(cover_identities(e=1, chi_Z=1, chi_X=0, d_X=2, K_Z_sq=8))

    def test_cover_identities_negative_control(self):
        results = cover_identities(e=0, chi_Z=1, chi_X=0, d_X=2, K_Z_sq=8)
        assert [c.name for c in failures(results)] == [
            "euler_characteristic_identity", "degree_identity"]

    def test_field_degree_divides(self):
        assert field_degree_divides(2, 2)
        assert field_degree_divides(2, 1)
        assert not field_degree_divides(2, 4)


def test_numerics_suite_is_green():
    assert not failures(numerics_suite())
