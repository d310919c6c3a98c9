from functools import lru_cache

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from towercob.dsl import (ArityError, BFBundle, BinOp, Builtin, Chern, Command, EvalError, Gen,
                          LexError, Let, Lines, Neg, Num, ParseError, Product, Proj, Ref, Script,
                          UnboundNameError, BUILTIN_ARITY, parse, print_script, run, tokenize)

import oracle


def test_two_statement_script():
    s = parse("let b = BF(2); milnor(b);")
    assert len(s.statements) == 2
    assert s.statements[0] == Let("b", Builtin("BF", (2,)))
    assert s.statements[1] == Command("milnor", (Ref("b"),))


def test_typo_command_reports_position():
    src = "let x = X(2,3); let y = Y(2,3); blowup_milnup(x,y);"
    with pytest.raises(ParseError) as err:
        parse(src)
    assert "unknown command 'blowup_milnup'" in str(err.value)
    assert (err.value.line, err.value.col) == (1, src.index("blowup_milnup") + 1)


def test_proj_with_chern_parses_and_binds_generator():
    s = parse("let c = proj(CP(2), chern(1 + y, 3)); milnor(c);")
    assert s.statements[0].expr == Proj(Builtin("CP", (2,)), Chern(BinOp("+", Num(1), Gen("y")), 3))
    (res,) = run(s)
    t = oracle.SymTower()
    y = t.extend(sp.Integer(1), 3, "y")
    w = t.extend(1 + y, 3, "w")
    want = oracle.SymVariety(t, (1 + y) ** 3 * oracle.twisted_total(t, 1 + y, 3, w)).milnor()
    assert res["value"] == want == 5


def test_run_examples():
    out = run("milnor(BF(3)); todd(X(2,2)); blowup_milnor(X(2,2), Y(2,2));"
              "chern_number(CP(2), [1, 1]);")
    assert [r["value"] for r in out] == [2, 1, -10, 9]
    assert out[0] == {"statement": 0, "command": "milnor(BF(3))", "value": 2}


def test_products_and_duals():
    out = run("let p = product(CP(2), CP(2)); dual_milnor(p, y + y');"
              "let q = BFbundle(CP(1), [y, 0, -y]); milnor(q);"
              "milnor(proj(BF(1), lines([t1, 0])));")
    assert out[0]["value"] == -6
    # 2 * <(1 - y)^2 / (1 + y), [CP^1]> = 2 * (-3)
    assert out[1]["value"] == -6
    assert out[2]["value"] == 0


def test_comments_and_unicode_minus():
    s = parse("# header\nlet c = BFbundle(CP(1), [y, −y]); # trailing\nmilnor(c);\n")
    assert s.statements[0].expr.classes[1] == Neg(Gen("y"))


def test_tokens_carry_positions():
    toks = tokenize("let a =\n  CP(3);")
    cp = next(t for t in toks if t.text == "CP")
    assert (cp.line, cp.col) == (2, 3)


@pytest.mark.parametrize("src,exc,pos", [
    ("let a = CP(2) $;", LexError, (1, 15)),
    ("let a = CP(2)", ParseError, (1, 14)),
    ("milnor(b);", UnboundNameError, (1, 8)),
    ("let a = CP(2);\nmilnor(a, a);", ArityError, (2, 1)),
    ("let a = CP(2, 3);", ArityError, (1, 9)),
    ("let a = CP(1); let a = CP(2);", ParseError, (1, 20)),
    ("let CP = CP(1);", ParseError, (1, 5)),
    ("let a = foo(1);", ParseError, (1, 9)),
    ("chern_number(CP(2), [1, x]);", ParseError, (1, 25)),
    ("let a = proj(CP(1), bogus(1));", ParseError, (1, 21)),
])
def test_parse_errors(src, exc, pos):
    with pytest.raises(exc) as err:
        parse(src)
    assert (err.value.line, err.value.col) == pos
    assert f"{pos[0]}:{pos[1]}:" in str(err.value)


def test_evaluation_errors_name_the_statement():
    with pytest.raises(UnboundNameError) as err:
        run("let a = CP(2); milnor(a); dual_milnor(a, z);")
    assert err.value.statement == 2
    with pytest.raises(EvalError) as err:
        run("milnor(X(3, 2));")
    assert err.value.statement == 0
    with pytest.raises(EvalError):
        run("blowup_milnor(CP(2), CP(3));")
    with pytest.raises(EvalError):
        run("chern_number(CP(2), [1]);")


# --- round trip ------------------------------------------------------------------

NAMES = ["a", "b2", "c_d", "e'", "longer_name"]
GENS = ["y", "t1", "w", "y'", "t2''"]


@lru_cache(maxsize=None)
def polys():
    leaf = st.one_of(st.integers(0, 50).map(Num), st.sampled_from(GENS).map(Gen))

    def grow(children):
        return st.one_of(
            children.map(Neg),
            st.tuples(st.sampled_from("+-*"), children, children).map(lambda t: BinOp(*t)),
            st.tuples(children, st.integers(0, 9)).map(lambda t: BinOp("^", t[0], Num(t[1]))),
        )

    return st.recursive(leaf, grow, max_leaves=8)


@lru_cache(maxsize=None)
def builtins():
    return st.sampled_from(sorted(BUILTIN_ARITY)).flatmap(
        lambda n: st.lists(st.integers(0, 99), min_size=BUILTIN_ARITY[n],
                           max_size=BUILTIN_ARITY[n]).map(lambda ints: Builtin(n, tuple(ints))))


@lru_cache(maxsize=None)
def exprs(bound):
    leaf = builtins() if not bound else st.one_of(builtins(), st.sampled_from(bound).map(Ref))
    classlist = st.lists(polys(), min_size=1, max_size=3).map(tuple)
    bundle = st.one_of(classlist.map(Lines),
                       st.tuples(polys(), st.integers(0, 9)).map(lambda t: Chern(*t)))

    def grow(children):
        return st.one_of(
            st.tuples(children, classlist).map(lambda t: BFBundle(*t)),
            st.tuples(children, bundle).map(lambda t: Proj(*t)),
            st.tuples(children, children).map(lambda t: Product(*t)),
        )

    return st.recursive(leaf, grow, max_leaves=4)


@st.composite
def scripts(draw):
    stmts, bound = [], []
    for _ in range(draw(st.integers(0, 5))):
        if draw(st.booleans()) and len(bound) < len(NAMES):
            name = NAMES[len(bound)]
            stmts.append(Let(name, draw(exprs(tuple(bound)))))
            bound.append(name)
            continue
        kind = draw(st.sampled_from(["milnor", "todd", "chern_number", "dual_milnor",
                                     "blowup_milnor"]))
        e = draw(exprs(tuple(bound)))
        if kind in ("milnor", "todd"):
            args = (e,)
        elif kind == "chern_number":
            args = (e, tuple(draw(st.lists(st.integers(0, 9), min_size=1, max_size=4))))
        elif kind == "dual_milnor":
            args = (e, draw(polys()))
        else:
            args = (e, draw(exprs(tuple(bound))))
        stmts.append(Command(kind, args))
    return Script(tuple(stmts))


@settings(max_examples=500)
@given(scripts())
def test_parse_print_round_trip(script):
    text = print_script(script)
    again = parse(text)
    assert again == script
    assert print_script(again) == text
