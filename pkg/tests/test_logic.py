import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from plausilearn import (
    ENTROPY,
    axiom_suite,
    check,
    extension,
    make_model,
    parse,
    print_formula,
    satisfies,
    simplex_grid,
    valid_in_model,
)
from plausilearn.logic import (
    TOP,
    And,
    BelCond,
    BelObs,
    DynAnn,
    DynObs,
    K,
    LinIneq,
    Not,
    Or,
    ParseError,
    belief,
    implies,
    random_formula,
    random_model,
)
from plausilearn.simplex import UnknownOutcomeError


def lin(coeffs, bound):
    return LinIneq(tuple((Fraction(c), o) for c, o in coeffs), Fraction(bound))


W_H_HALF = "w(H) >= 1/2"


class TestParser:
    """One golden test per grammar production."""

    def test_top(self, coin):
        assert parse("T", coin) == TOP

    def test_lin_ge(self, coin):
        assert parse(W_H_HALF, coin) == lin([(1, "H")], Fraction(1, 2))

    def test_lin_le_desugars(self, coin):
        assert parse("w(H) <= 1/2", coin) == lin([(-1, "H")], Fraction(-1, 2))

    def test_lin_eq_desugars(self, coin):
        got = parse("w(H) = 1/2", coin)
        assert got == And(
            lin([(1, "H")], Fraction(1, 2)), lin([(-1, "H")], Fraction(-1, 2))
        )

    def test_lin_strict(self, coin):
        assert parse("w(H) > 0", coin) == Not(lin([(-1, "H")], 0))
        assert parse("w(H) < 1", coin) == Not(lin([(1, "H")], 1))

    def test_lin_sum_with_coefficients(self, urn):
        got = parse("2 * w(R) - w(B) >= 1/3", urn)
        assert got == lin([(2, "R"), (-1, "B")], Fraction(1, 3))

    def test_leading_minus(self, coin):
        assert parse("-w(H) >= -1", coin) == lin([(-1, "H")], -1)

    def test_decimal_bound_is_exact(self, coin):
        assert parse("w(H) >= 0.55", coin) == lin([(1, "H")], Fraction(11, 20))

    def test_negation(self, coin):
        assert parse("~T", coin) == Not(TOP)

    def test_and_or_precedence(self, coin):
        got = parse("T & ~T | T", coin)
        assert got == Or(And(TOP, Not(TOP)), TOP)

    def test_implication_desugars(self, coin):
        assert parse("T -> ~T", coin) == implies(TOP, Not(TOP))

    def test_knowledge(self, coin):
        assert parse(f"K ({W_H_HALF})", coin) == K(lin([(1, "H")], Fraction(1, 2)))

    def test_simple_belief(self, coin):
        assert parse("B T", coin) == belief(TOP)

    def test_belief_conditional_formula(self, coin):
        got = parse(f"B(T | {W_H_HALF})", coin)
        assert got == BelCond(TOP, lin([(1, "H")], Fraction(1, 2)))

    def test_belief_conditional_obslist(self, coin):
        assert parse("B(T | H,H,T)", coin) == BelObs(TOP, ("H", "H", "T"))

    def test_belief_of_parenthesised_disjunction(self, coin):
        got = parse("B ((T | ~T))", coin)
        assert got == belief(Or(TOP, Not(TOP)))

    def test_box_observation(self, coin):
        assert parse("[H,T] B T", coin) == DynObs(("H", "T"), belief(TOP))

    def test_box_announcement(self, coin):
        got = parse(f"[{W_H_HALF}] B T", coin)
        assert got == DynAnn(lin([(1, "H")], Fraction(1, 2)), belief(TOP))

    def test_bare_outcome_in_box_is_observation(self, coin):
        assert parse("[H] T", coin) == DynObs(("H",), TOP)

    def test_outcome_named_b_still_works(self, urn):
        # "B" is both an operator and an urn outcome; position disambiguates
        assert parse("[B] w(B) >= 0", urn) == DynObs(("B",), lin([(1, "B")], 0))
        assert parse("B(T | B,B)", urn) == BelObs(TOP, ("B", "B"))


class TestParseErrors:
    def test_reports_position(self, coin):
        with pytest.raises(ParseError) as err:
            parse("w(H) >= ", coin)
        assert err.value.position == 8
        assert "INT" in err.value.expected

    def test_trailing_input(self, coin):
        with pytest.raises(ParseError, match="trailing"):
            parse("T T", coin)

    def test_unknown_outcome(self, coin):
        with pytest.raises(UnknownOutcomeError):
            parse("w(X) >= 0", coin)

    def test_garbage_character(self, coin):
        with pytest.raises(ParseError):
            parse("T @ T", coin)

    def test_missing_close_paren(self, coin):
        with pytest.raises(ParseError) as err:
            parse("(T", coin)
        assert ")" in err.value.expected


class TestPrinter:
    @pytest.mark.parametrize(
        "text",
        [
            "T",
            "w(H) >= 1/2",
            "~w(H) >= 0",  # prints with parens around the atom
            "K (w(H) >= 1)",
            "B T",
            "B(T | H,H)",
            "B(w(H) >= 1/2 | w(T) >= 1/2)",
            "[H,T] T",
            "[w(H) >= 1] K T",
            "T & T | T -> T",
        ],
    )
    def test_roundtrip_examples(self, coin, text):
        ast = parse(text, coin)
        assert parse(print_formula(ast), coin) == ast

    def test_disjunction_under_belief_prints_safely(self, coin):
        ast = belief(Or(TOP, TOP))
        assert print_formula(ast) == "B ((T | T))"
        assert parse(print_formula(ast), coin) == ast

    def test_top_announcement_prints_safely(self, coin):
        ast = DynAnn(TOP, TOP)
        assert print_formula(ast) == "[(T)] T"
        assert parse(print_formula(ast), coin) == ast

    @pytest.mark.parametrize("alphabet_names", [("H", "T"), ("R", "B", "G")])
    def test_roundtrip_fuzz(self, alphabet_names):
        from plausilearn import make_alphabet

        rng = random.Random(7)
        al = make_alphabet(alphabet_names)
        for _ in range(2000):
            ast = random_formula(rng, al, max_depth=4)
            assert parse(print_formula(ast), al) == ast

    @settings(max_examples=200)
    @given(seed=st.integers(0, 10**9), depth=st.integers(0, 4))
    def test_roundtrip_property(self, seed, depth):
        from plausilearn import make_alphabet

        rng = random.Random(seed)
        al = make_alphabet(("H", "T"))
        ast = random_formula(rng, al, depth)
        assert parse(print_formula(ast), al) == ast


class TestSemantics:
    def entropy_model(self, alphabet, resolution):
        return make_model(simplex_grid(alphabet, resolution), ENTROPY)

    def test_extension_of_lin(self, coin):
        model = self.entropy_model(coin, 10)
        ext = extension(model, parse(W_H_HALF, coin))
        assert ext.members == {5, 6, 7, 8, 9, 10}

    def test_top_valid(self, coin):
        model = self.entropy_model(coin, 10)
        assert valid_in_model(model, TOP)

    def test_knowledge_is_world_independent(self, coin):
        model = self.entropy_model(coin, 10)
        f = parse(f"K ({W_H_HALF})", coin)
        verdicts = {satisfies(model, i, f) for i in range(11)}
        assert verdicts == {False}

    def test_belief_is_world_independent(self, coin):
        model = self.entropy_model(coin, 10)
        f = parse("B (w(H) >= 1/2 & w(T) >= 1/2)", coin)
        assert all(satisfies(model, i, f) for i in range(11))

    def test_three_heads_then_belief(self, coin):
        model = self.entropy_model(coin, 20)
        f = parse("[H] [H] [H] B (w(H) >= 0.55)", coin)
        assert valid_in_model(model, f)
        assert valid_in_model(model, parse("[H,H,H] B (w(H) >= 0.55)", coin))

    def test_belief_conditional_on_observations(self, coin):
        model = self.entropy_model(coin, 20)
        assert valid_in_model(model, parse("B(w(H) >= 0.55 | H,H,H)", coin))
        assert not valid_in_model(model, parse("B(w(H) <= 0.6 | H,H,H)", coin))

    def test_announcement_restricts_worlds(self, coin):
        model = self.entropy_model(coin, 10)
        # after announcing a heads-bias, belief settles on the smallest
        # surviving bias
        f = parse("[w(H) > 1/2] B (w(H) = 3/5)", coin)
        assert valid_in_model(model, f)

    def test_announcement_false_at_world_is_vacuous(self, coin):
        model = self.entropy_model(coin, 10)
        f = parse("[w(H) >= 2] ~T", coin)
        assert valid_in_model(model, f)

    def test_check_trace(self, coin):
        model = self.entropy_model(coin, 10)
        result = check(model, 7, parse(f"{W_H_HALF} & w(H) <= 3/5", coin))
        assert not result.verdict
        assert result.world == 7
        assert dict(result.trace) == {
            "w(H) >= 1/2": True,
            "-w(H) >= -3/5": False,
        }

    def test_check_accepts_mass_function_world(self, coin, fair_coin):
        model = self.entropy_model(coin, 10)
        result = check(model, fair_coin, parse(W_H_HALF, coin))
        assert result.verdict and result.world == 5

    def test_satisfies_rejects_bad_index(self, coin):
        model = self.entropy_model(coin, 10)
        with pytest.raises(KeyError):
            satisfies(model, 99, TOP)

    def test_sampling_box_agrees_with_conditional_belief(self):
        # reduction law checked directly on random models
        rng = random.Random(13)
        for _ in range(50):
            model = random_model(rng)
            o = rng.choice(model.alphabet.names)
            body = random_formula(rng, model.alphabet, 1)
            left = DynObs((o,), belief(body))
            right = BelObs(DynObs((o,), body), (o,))
            assert extension(model, left) == extension(model, right)


class TestAxiomSuite:
    def test_clean_run(self):
        report = axiom_suite(trials=25, seed=42)
        assert report.ok
        assert report.counterexamples == []
        assert all(n == 25 for n in report.checked.values())
        assert len(report.checked) == 24

    def test_mutation_is_detected(self):
        report = axiom_suite(trials=25, seed=42, skip_relativization=True)
        assert not report.ok
        broken = {c.schema for c in report.counterexamples}
        assert broken & {
            "announce_atom",
            "announce_negation",
            "announce_conjunction",
            "announce_knowledge",
            "announce_belief",
        }

    def test_report_serializes(self):
        report = axiom_suite(trials=5, seed=1)
        payload = report.to_dict()
        assert payload["ok"] is True
        assert payload["trials"] == 5
        assert payload["seed"] == 1

    def test_rejects_zero_trials(self):
        with pytest.raises(ValueError):
            axiom_suite(trials=0, seed=0)
