import pytest
from hypothesis import given, settings, strategies as st

from modalcut import parse, show
from modalcut.analysis import gen_typed
from modalcut.calculi import get_calculus
from modalcut.errors import ClassError, ModeError, ParseError
from modalcut.syntax.concrete import parse_raw, parse_type
from modalcut.syntax.terms import (
    BOT, HOLE, Arrow, CoApp, Cut, Monad, Mu, Name, Session, TVar, Var, alpha_eq,
    canonical, fill, free_names, holes, rename, struct_subst, subst,
)

from conftest import corpus, n

X, Y = TVar("X"), TVar("Y")


# ---------------------------------------------------------------- names

def test_name_equality_needs_all_three_fields():
    assert Name("value", "v", 1) == Name("value", "v", 1)
    assert Name("value", "v", 1) != Name("comp", "v", 1)
    assert Name("value", "v", 1) != Name("value", "v", 2)
    assert Name("value", "v", 1) != Name("value", "w", 1)


def test_trailing_digits_are_the_index():
    assert Name("plain", "x3") == Name("plain", "x", 3)
    assert str(Name("comp", "p", 12)) == "#p12"


def test_fresh_avoids_given_names():
    s = Session()
    taken = {Name("plain", "x", i) for i in range(1, 5)}
    assert s.fresh("plain", "x", taken) == Name("plain", "x", 5)


def test_sessions_do_not_share_counters():
    a, b = Session(), Session()
    assert a.fresh("plain", "x") == b.fresh("plain", "x")


# ---------------------------------------------------------------- parse / print

@pytest.mark.parametrize("text,calc,cls", [
    ("mu @a. @a #p", "vc", "computation"),
    (r"< \x. x | y :: @a >", "lmmt", "command"),
    ("let %v = ret %w in @a (ret %v)", "vc", "command"),
    ("@a []", "vc", "context"),
])
def test_parse_class(text, calc, cls):
    e = parse(text, calc)
    assert get_calculus(calc).classify(e) == cls
    assert show(e) == text


def test_parse_builds_expected_tree():
    e = parse("mu @a. @a #p", "vc")
    assert e == Mu(n("@a"), None, CoApp(n("@a"), Var(n("#p"))))


def test_parse_preserves_names():
    assert show(parse(r"\%zz9:X. ret %zz9", "vc")) == r"\%zz9:X. ret %zz9"


def test_lafont_printing():
    e = parse("< mu @a. < y | @b > | mt x. < z | @b > >", "lmmt")
    assert isinstance(e, Cut)
    assert show(e) == "< mu @a. < y | @b > | mt x. < z | @b > >"


def test_mode_error_for_let_binding_a_comp_var():
    with pytest.raises(ModeError) as info:
        parse("let #p = ret %w in @a #p", "vc")
    assert (info.value.line, info.value.col) == (1, 5)


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as info:
        parse("< x | \n @a", "lmmt")
    assert info.value.line == 2


def test_comments_and_whitespace():
    e = parse("-- a comment\n  < x   |\n @a >  -- trailing", "lmmt")
    assert show(e) == "< x | @a >"


def test_sigils_restricted_per_calculus():
    with pytest.raises(ModeError):
        parse("%v", "lmmt")
    with pytest.raises(ModeError):
        parse("x", "vc")


def test_class_errors_are_reported():
    with pytest.raises(ClassError):
        parse(r"\%v. %v", "vc")  # a lambda body must be a computation


@pytest.mark.parametrize("text,expected", [
    ("X -> Y -> X", Arrow(X, Arrow(Y, X))),
    ("(X -> Y) -> X", Arrow(Arrow(X, Y), X)),
    ("X ->v Y ->n X", Arrow(X, Arrow(Y, X, "n"), "v")),
    ("M X -> M Y", Arrow(Monad(X), Monad(Y))),
    ("M (X -> M Y)", Monad(Arrow(X, Monad(Y)))),
    ("~X", Arrow(X, BOT)),
    ("Bot", BOT),
])
def test_types(text, expected):
    assert parse_type(text) == expected


@pytest.mark.parametrize("calc,text", corpus())
def test_corpus_round_trip(calc, text):
    e = parse(text, calc)
    assert alpha_eq(parse(show(e), calc), e)


CALCS = ("lmmt", "lmmt-vn", "lm-M", "vc", "ivc", "stlc")


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CALCS), st.integers(0, 10**6), st.integers(1, 10))
def test_round_trip_generated(calc, seed, budget):
    e = gen_typed(calc, budget, seed).subject
    assert parse(show(e), calc) == e  # names survive, so the trip is exact


# ---------------------------------------------------------------- alpha

def test_alpha_examples():
    assert alpha_eq(parse(r"\x. x", "lmmt"), parse(r"\y. y", "lmmt"))
    assert alpha_eq(parse("mu @a. < x | @a >", "lmmt"), parse("mu @b. < x | @b >", "lmmt"))
    assert not alpha_eq(parse(r"\%v:X. ret %v", "vc"), parse(r"\#p:M X. #p", "vc"))


def test_alpha_respects_free_names():
    assert not alpha_eq(parse(r"\x. y", "lmmt"), parse(r"\x. z", "lmmt"))


def test_alpha_with_and_without_annotations():
    a, b = parse(r"\x:X. x", "stlc"), parse(r"\y:Y. y", "stlc")
    assert not alpha_eq(a, b)
    assert alpha_eq(a, b, annotations=False)


def test_canonical_can_forget_namespaces():
    a, b = parse(r"\%v. %v", "stlc"), parse(r"\x. x", "stlc")
    assert canonical(a) != canonical(b)
    assert canonical(a, namespaces=False) == canonical(b, namespaces=False)


# ---------------------------------------------------------------- free names

@pytest.mark.parametrize("text,calc,names", [
    (r"\x. mu @b. < x | @a >", "lmmt", {"@a"}),
    ("mu @a. @a #p", "vc", {"#p"}),
    ("< mu @a. < y | @b > | mt x. < z | @b > >", "lmmt", {"y", "z", "@b"}),
    ("let %v = ret %w in @a (ret %v)", "vc", {"%w", "@a"}),
])
def test_free_names(text, calc, names):
    assert free_names(parse(text, calc)) == {n(s) for s in names}


# ---------------------------------------------------------------- substitution

def test_subst_inside_coapp():
    # [%w/%v](@b (ret %v))
    e = subst(parse("@b (ret %v)", "vc"), n("%v"), Var(n("%w")))
    assert show(e) == "@b (ret %w)"


def test_subst_identity_on_variable():
    t = parse(r"\y. y", "lmmt")
    assert subst(Var(n("x")), n("x"), t) == t


def test_subst_avoids_capture():
    e = subst(parse(r"\y. mu @c. < x | @a >", "lmmt"), n("x"), Var(n("y")), Session())
    assert alpha_eq(e, parse(r"\y1. mu @c. < y | @a >", "lmmt"))
    assert e.var != n("y")


def test_subst_refuses_covariables_and_contexts():
    with pytest.raises(ValueError):
        subst(parse("< x | @a >", "lmmt"), n("@a"), Var(n("y")))
    with pytest.raises(ValueError):
        subst(parse("@a (ret %v)", "vc"), n("%v"), parse("@b []", "vc"))


def test_checked_subst_modes_in_vc():
    vc = get_calculus("vc")
    e = parse("@b (ret %v)", "vc")
    assert show(vc.substitute(e, n("%v"), parse(r"\%u. ret %u", "vc"))) == r"@b (ret (\%u. ret %u))"
    with pytest.raises(ModeError):
        vc.substitute(e, n("%v"), parse("#p", "vc"))
    with pytest.raises(ModeError):
        vc.substitute(parse("@b #q", "vc"), n("#q"), parse("%w", "vc"))


def test_checked_subst_classes():
    with pytest.raises(ClassError):
        get_calculus("lmmt").substitute(parse("< x | @a >", "lmmt"), n("x"), parse("@b", "lmmt"))


def test_vn_substitution_has_no_mode_constraint():
    vn = get_calculus("lmmt-vn")
    e = vn.substitute(parse("< %v | @a >", "lmmt-vn"), n("%v"), parse(r"\#n. #n", "lmmt-vn"))
    assert show(e) == r"< \#n. #n | @a >"


def test_subst_with_variable_is_identity():
    for calc, text in corpus():
        e = parse(text, calc)
        for x in free_names(e):
            if x.ns != "co":
                assert alpha_eq(subst(e, x, Var(x)), e)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_subst_commutes_on_disjoint_names(seed):
    e = gen_typed("stlc", 8, seed).subject
    fv = sorted(free_names(e), key=str)
    if len(fv) < 2:
        return
    x, y = fv[0], fv[1]
    u, w = parse(r"\q. q", "stlc"), Var(Name("plain", "fresh", 1))
    s = Session()
    left = subst(subst(e, y, w, s), x, u, s)
    right = subst(subst(e, x, u, s), y, w, s)
    assert alpha_eq(left, right)


def test_vc_subst_preserves_class():
    vc = get_calculus("vc")
    for seed in range(200):
        seq = gen_typed("vc", 6, seed)
        e = seq.subject
        cls = vc.classify(e)
        for x, t in seq.gamma.items():
            u = Var(Name(x.ns, "fresh", 1))
            assert vc.classify(vc.substitute(e, x, u)) == cls


# ---------------------------------------------------------------- structural substitution

def test_struct_subst_covar_by_covar():
    e = struct_subst(parse("< y | @a >", "lmmt"), n("@a"), parse("@b", "lmmt"))
    assert show(e) == "< y | @b >"


def test_struct_subst_context_into_coapp():
    ctx = parse("let %v = [] in @c (ret %v)", "vc")
    e = struct_subst(parse("@a #p", "vc"), n("@a"), ctx)
    assert show(e) == "let %v = #p in @c (ret %v)"


def test_struct_subst_absent_covar():
    e = parse("< y | @b >", "lmmt")
    assert struct_subst(e, n("@a"), parse("mt %v. < %v | @c >", "lmmt-vn")) == e


def test_struct_subst_avoids_capture():
    # the replacement co-term mentions x; a binder named x must be renamed
    e = struct_subst(parse("mt x. < x | @a >", "lmmt"), n("@a"), parse("mt y. < x | @c >", "lmmt"))
    assert alpha_eq(e, parse("mt x1. < x1 | mt y. < x | @c > >", "lmmt"))


def test_struct_subst_identity_context():
    for calc, text in corpus():
        if calc not in ("vc", "lm-M"):
            continue
        e = parse(text, calc)
        if holes(e):
            continue
        a = n("@a")
        assert alpha_eq(struct_subst(e, a, CoApp(a, HOLE)), e)


# ---------------------------------------------------------------- fill

def test_fill_examples():
    assert show(fill(parse("@a []", "vc"), parse("ret %v", "vc"))) == "@a (ret %v)"
    assert show(fill(parse("let %v = [] in @b (ret %v)", "vc"), parse("mu @a. @a #q", "vc"))) \
        == "let %v = mu @a. @a #q in @b (ret %v)"
    assert show(fill(parse("sub #p = [] in @b #p", "vc"), parse("#q", "vc"))) == "sub #p = #q in @b #p"


def test_fill_captures_literally():
    e = fill(parse("let %v = ret %v in @b []", "vc"), Var(n("%v")))
    assert show(e) == "let %v = ret %v in @b %v"


def test_rename_free_occurrences():
    e = rename(parse("< x | mt x. < x | @a > >", "lmmt"), n("x"), n("y"))
    assert show(e) == "< y | mt x. < x | @a > >"


def test_raw_parse_skips_class_check():
    assert parse_raw(r"\%v. %v", "vc") is not None
