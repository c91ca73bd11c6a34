"""Constraint-polytope construction and LP feasibility."""

import numpy as np
import pytest

import threshgen as tg

A1 = tg.Signature(("a",))
AB = tg.Signature(("a", "b"))


def rule(sig, antecedent, consequent, k):
    return tg.Generalization(tg.parse(antecedent, sig), tg.parse(consequent, sig), k)


class TestParameterAssignment:
    def test_defaults(self):
        p = tg.ParameterAssignment(psi=(1.0,), delta=0.1)
        assert p.query_psi == 1.0
        assert p.eta == 0.1

    def test_validation(self):
        with pytest.raises(ValueError):
            tg.ParameterAssignment(psi=(0.0,), delta=0.1)
        with pytest.raises(ValueError):
            tg.ParameterAssignment(psi=(-1.0,), delta=0.1)
        with pytest.raises(ValueError):
            tg.ParameterAssignment(psi=(), delta=0.0)
        with pytest.raises(ValueError):
            tg.ParameterAssignment(psi=(), delta=1.0)
        with pytest.raises(ValueError):
            tg.ParameterAssignment(psi=(), delta=0.5, query_psi=0.0)
        with pytest.raises(ValueError):
            tg.ParameterAssignment(psi=(), delta=0.5, eta=1.0)

    def test_psi_coerced_to_floats(self):
        p = tg.ParameterAssignment(psi=[1, 2], delta=0.5)
        assert p.psi == (1.0, 2.0)


class TestIndicator:
    def test_bits_to_coordinates(self):
        assert tg.indicator(0b0101, 4).tolist() == [1.0, 0.0, 1.0, 0.0]
        assert tg.indicator(0, 4).tolist() == [0.0] * 4


class TestBuildPolytope:
    def test_empty_kb_is_the_simplex(self):
        kb = tg.KnowledgeBase(A1, ())
        system = tg.build_polytope(kb, tg.ParameterAssignment(psi=(), delta=0.1))
        assert system.dimension == 2
        assert system.eq_rows.tolist() == [[1.0, 1.0]]
        assert system.eq_rhs.tolist() == [1.0]
        assert system.ineq_rows.shape == (0, 2)

    def test_single_rule_row(self):
        kb = tg.KnowledgeBase(A1, (rule(A1, "true", "a", 1),))
        system = tg.build_polytope(kb, tg.ParameterAssignment(psi=(1.0,), delta=0.1))
        # Atom order: index 0 is ~a, index 1 is a. The exception is ~a, so
        # the row says pi(~a) - 0.1 * pi(true) <= 0.
        assert system.ineq_rows.shape == (1, 2)
        assert np.allclose(system.ineq_rows[0], [1.0 - 0.1, -0.1])
        assert system.ineq_rhs.tolist() == [0.0]

    def test_threshold_exponentiates_delta(self):
        kb = tg.KnowledgeBase(AB, (rule(AB, "a", "b", 3),))
        params = tg.ParameterAssignment(psi=(2.0,), delta=0.5)
        system = tg.build_polytope(kb, params)
        scale = 2.0 * 0.5**3
        exception = tg.indicator(tg.parse("a & ~b", AB).mask, 4)
        antecedent = tg.indicator(tg.parse("a", AB).mask, 4)
        assert np.allclose(system.ineq_rows[0], exception - scale * antecedent)

    def test_infinite_threshold_becomes_equality(self):
        kb = tg.KnowledgeBase(A1, (rule(A1, "true", "a", tg.INFINITY),))
        system = tg.build_polytope(kb, tg.ParameterAssignment(psi=(1.0,), delta=0.1))
        assert system.ineq_rows.shape == (0, 2)
        assert system.eq_rows.shape == (2, 2)
        assert system.eq_rows[1].tolist() == [1.0, 0.0]
        assert system.eq_rhs.tolist() == [1.0, 0.0]

    def test_psi_length_mismatch(self):
        kb = tg.KnowledgeBase(A1, (rule(A1, "true", "a", 1),))
        with pytest.raises(ValueError):
            tg.build_polytope(kb, tg.ParameterAssignment(psi=(), delta=0.1))

    def test_signature_size_cap(self):
        sig = tg.Signature(tuple(f"x{i}" for i in range(9)))
        kb = tg.KnowledgeBase(sig, ())
        with pytest.raises(ValueError):
            tg.build_polytope(kb, tg.ParameterAssignment(psi=(), delta=0.1))


class TestFeasibility:
    def params(self, m, delta):
        return tg.ParameterAssignment(psi=(1.0,) * m, delta=delta)

    def test_contradictory_rules_depend_on_delta(self):
        kb = tg.KnowledgeBase(
            A1, (rule(A1, "true", "a", 1), rule(A1, "true", "~a", 1))
        )
        # The two rows force pi(~a) <= delta and pi(a) <= delta, but the
        # masses sum to 1, so the polytope is empty exactly when
        # 2 * delta < 1.
        assert not tg.is_feasible(tg.build_polytope(kb, self.params(2, 0.3)))
        assert tg.is_feasible(tg.build_polytope(kb, self.params(2, 0.6)))

    def test_empty_kb_always_feasible(self):
        kb = tg.KnowledgeBase(AB, ())
        for delta in (0.9, 0.1, 1e-4):
            assert tg.is_feasible(tg.build_polytope(kb, self.params(0, delta)))

    def test_hard_contradiction_infeasible_at_every_delta(self):
        kb = tg.KnowledgeBase(
            A1,
            (
                rule(A1, "true", "a", tg.INFINITY),
                rule(A1, "true", "~a", tg.INFINITY),
            ),
        )
        for delta in (0.9, 0.1):
            assert not tg.is_feasible(tg.build_polytope(kb, self.params(2, delta)))

    def test_consistent_kb_feasible_at_small_delta(self):
        kb = tg.KnowledgeBase(
            AB, (rule(AB, "true", "a", 1), rule(AB, "~a", "b", 1))
        )
        for delta in (0.5, 0.1, 1e-3, 1e-4):
            assert tg.is_feasible(tg.build_polytope(kb, self.params(2, delta)))

    def test_degenerate_vertex_stays_feasible(self):
        # At small delta this system's only slack-free model puts all
        # mass on the ~a & b atom; the solver must still say feasible.
        # (HiGHS presolve once misdeclared exactly this shape infeasible.)
        kb = tg.KnowledgeBase(
            AB,
            (
                rule(AB, "~b", "a", 3),
                rule(AB, "a <-> b", "~a", 3),
                rule(AB, "a | ~b", "a <-> b", 2),
            ),
        )
        assert tg.compile_kb(kb).is_consistent()
        for delta in (0.1, 0.05, 0.025, 0.0125, 1e-3, 1e-4):
            assert tg.is_feasible(tg.build_polytope(kb, self.params(3, delta)))


class TestMaxViolation:
    def test_reports_worst_gap(self):
        kb = tg.KnowledgeBase(A1, (rule(A1, "true", "a", 1),))
        system = tg.build_polytope(kb, tg.ParameterAssignment(psi=(1.0,), delta=0.1))
        inside = np.array([[0.05, 0.95]])
        boundary = np.array([[0.1, 0.9]])
        outside = np.array([[0.3, 0.7]])
        assert tg.max_violation(system, inside) <= 1e-12
        assert tg.max_violation(system, boundary) <= 1e-12
        # pi(~a) = 0.3 exceeds the allowed 0.1 by 0.2 after the row's
        # -0.1 * pi(true) correction.
        assert tg.max_violation(system, outside) == pytest.approx(0.2)
        bad_sum = np.array([[0.05, 0.05]])
        assert tg.max_violation(system, bad_sum) == pytest.approx(0.9)
        negative = np.array([[-0.2, 1.2]])
        assert tg.max_violation(system, negative) >= 0.2