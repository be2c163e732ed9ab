import pytest

from modalcut import parse, show
from modalcut.analysis import gen_typed, reduction_graph, sigma_pi_overlap
from modalcut.calculi import LMMTVN, Redex, Sequent, classify_vn
from modalcut.errors import TypingError
from modalcut.syntax.concrete import parse_declarations, parse_type
from modalcut.syntax.terms import alpha_eq, subst

VN = LMMTVN()


def P(text):
    return parse(text, "lmmt-vn")


def seq(text, kind, gamma="", delta="", ty=None):
    return Sequent(parse_declarations(gamma), parse_declarations(delta), P(text), kind,
                   parse_type(ty) if ty else None)


@pytest.mark.parametrize("text,cls", [
    (r"\#n. #n", "value"),
    (r"\%v. %v", "value"),
    ("%v", "value"),
    ("#n", "non-value-term"),
    ("mu @a. < %v | @a >", "non-value-term"),
    ("mt %v. < %v | @a >", "co-value"),
    ("@a", "co-value"),
    ("%v ::n @a", "co-value"),
    ("mt #n. < #n | @a >", "non-co-value-co-term"),
    ("< %v | @a >", "command"),
])
def test_classify(text, cls):
    assert classify_vn(P(text)) == cls


def test_mode_checked_implication_rules():
    VN.typecheck(seq(r"\%v:X. %v", "term", ty="X ->v X"))
    with pytest.raises(TypingError):
        VN.typecheck(seq(r"\#n:X. #n", "term", ty="X ->v X"))
    VN.typecheck(seq(r"\#n:X. #n", "term", ty="X ->n X"))


def test_stack_annotation_must_match_mode():
    VN.typecheck(seq("%w ::v @a", "coterm", "%w:X", "@a:Y", "X ->v Y"))
    with pytest.raises(TypingError):
        VN.typecheck(seq("%w ::n @a", "coterm", "%w:X", "@a:Y", "X ->v Y"))


def test_ill_moded_declarations_are_allowed():
    d = VN.typecheck(seq("%v", "term", "%v:X ->n Y", ty="X ->n Y"))
    assert d.rules() == ["Ax"]


def test_mixed_mode_command_is_typable_and_normal():
    c = seq("< #n | mt %v:X. < %w | @a > >", "command", "#n:X, %w:X", "@a:X")
    VN.typecheck(c)
    assert VN.redexes(c.subject) == []


def test_rule_names_in_derivations():
    d = VN.typecheck(seq(r"< \%v:X. %v | %w ::v @a >", "command", "%w:X", "@a:X"))
    assert "R-imp-v" in d.rules() and "L-imp-v" in d.rules()


# ---------------------------------------------------------------- redexes

def test_sigma_n_only_against_mt_n():
    assert VN.redexes(P("< mu @a. < %y | @b > | mt #n. < %z | @b > >")) == [Redex("sigma-n", ())]


def test_pi_only_against_mt_v():
    assert VN.redexes(P("< mu @a. < %y | @b > | mt %v. < %z | @b > >")) == [Redex("pi", ())]


def test_no_eta_mt_v_before_a_non_covalue():
    rs = VN.redexes(P("mt %v. < %v | mt #n. < #n | @b > >"))
    assert rs == [Redex("sigma-n", (0,)), Redex("eta-mt-n", (0, 1))]


def test_beta_needs_matching_modes():
    assert VN.redexes(P(r"< \%v. %v | %w ::v @a >")) == [Redex("beta-v", ())]
    assert VN.redexes(P(r"< \#n. #n | %w ::n @a >")) == [Redex("beta-n", ())]
    assert VN.redexes(P(r"< \%v. %v | %w ::n @a >")) == []


def test_sigma_v_needs_a_value():
    assert VN.redexes(P("< #m | mt %v. < %v | @a > >")) == [Redex("eta-mt-v", (1,))]
    assert VN.redexes(P("< %w | mt %v. < %u | @a > >")) == [Redex("sigma-v", ())]


# ---------------------------------------------------------------- steps

def test_beta_v_step():
    e = VN.step(P(r"< \%v. #t | %u ::v @e >"), Redex("beta-v", ()))
    assert show(e) == "< %u | mt %v. < #t | @e > >"


def test_sigma_n_step_substitutes_the_mu():
    e = P("< mu @a. < %y | @b > | mt #n. < #n | @c > >")
    out = VN.step(e, Redex("sigma-n", ()))
    assert alpha_eq(out, subst(P("< #n | @c >"), e.coterm.var, e.term))


def test_pi_step():
    assert show(VN.step(P("< mu @a. < %y | @a > | @b >"), Redex("pi", ()))) == "< %y | @b >"


def test_no_sigma_pi_overlap_on_generated_terms():
    for seed in range(200):
        g = reduction_graph(VN, gen_typed("lmmt-vn", 8, seed).subject, 500)
        assert not any(sigma_pi_overlap(VN, t) for t in g.nodes)


def test_step_preserves_class():
    kind = {"value": "term", "non-value-term": "term", "co-value": "coterm",
            "non-co-value-co-term": "coterm", "command": "command"}
    for seed in range(200):
        e = gen_typed("lmmt-vn", 8, seed).subject
        before = classify_vn(e)
        for r in VN.redexes(e):
            after = classify_vn(VN.step(e, r))
            assert kind[after] == kind[before]
            if r.rule == "eta-mt-v" and r.path == ():
                assert after == "co-value"


def test_unique_normal_forms_on_generated_terms():
    for seed in range(150):
        g = reduction_graph(VN, gen_typed("lmmt-vn", 8, seed).subject)
        assert not g.exhausted and len(g.normal_forms) == 1
