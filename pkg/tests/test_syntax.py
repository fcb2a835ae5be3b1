import pytest
from hypothesis import given, strategies as st

from hornlog.syntax import (
    FormatError,
    Frame,
    HornSequent,
    OplusImplication,
    PlainImplication,
    SimpleProduct,
    apply_implication,
    formula_text,
    match_antecedent,
    parse_formula,
    parse_product,
    parse_sequent,
    product_equiv,
    product_text,
    sequent_text,
)

names = st.sampled_from(["a", "b", "c", "d", "e"])
products = st.lists(names, min_size=1, max_size=5).map(lambda ns: SimpleProduct.of(*ns))
frames = st.lists(names, min_size=0, max_size=4).map(lambda ns: Frame.of(*ns))
plains = st.tuples(products, products).map(lambda xy: PlainImplication(*xy))


def test_product_equiv_examples():
    assert product_equiv(parse_product("l1*r1*r1"), parse_product("r1*l1*r1"))
    assert not product_equiv(parse_product("l1*r1"), parse_product("l1*r1*r1"))
    assert product_equiv(parse_product("q"), parse_product("q"))


def test_match_antecedent_examples():
    assert match_antecedent(parse_product("l1*r1*r1"), parse_product("l1*r1")) == Frame.of("r1")
    assert match_antecedent(parse_product("l1"), parse_product("l1")) == Frame()
    assert match_antecedent(parse_product("l1*r2"), parse_product("l1*r1")) is None


def test_apply_implication_examples():
    ante = parse_formula("(l1*r1) -o l1")
    assert apply_implication(parse_product("l1*r1*r1"), ante) == parse_product("l1*r1")
    killing = parse_formula("(k1*r2) -o k1")
    assert apply_implication(parse_product("k1*r2"), killing) == parse_product("k1")
    assert apply_implication(parse_product("l0"), parse_formula("l1 -o l2")) is None


def test_apply_implication_rejects_choice():
    with pytest.raises(TypeError):
        apply_implication(parse_product("f"), parse_formula("f -o (g + h)"))


def test_simple_product_must_be_nonempty():
    with pytest.raises(ValueError):
        SimpleProduct.of()
    with pytest.raises(ValueError):
        SimpleProduct(())


def test_frame_converts_to_product():
    assert Frame.of("a", "a").to_product() == parse_product("a*a")
    with pytest.raises(ValueError):
        Frame().to_product()


def test_choice_consequents_commute():
    assert parse_formula("f -o (g + h)") == parse_formula("f -o (h + g)")


@given(products)
def test_equiv_reflexive(x):
    assert product_equiv(x, x)


@given(products, products)
def test_equiv_symmetric(x, y):
    assert product_equiv(x, y) == product_equiv(y, x)


@given(products)
def test_canonicalization_idempotent(x):
    assert SimpleProduct.of(*x.literals()) == x
    assert SimpleProduct.from_counter(x.counter()) == x


@given(products, products)
def test_match_round_trip(x, a):
    residual = match_antecedent(x, a)
    if residual is not None:
        assert product_equiv(a.tensor(residual), x)
    else:
        assert any(x.count(name) < a.count(name) for name, _ in a.entries)


@given(products, products, plains)
def test_apply_frame_law(x, v, f):
    framed = apply_implication(x.tensor(v), f)
    plain = apply_implication(x, f)
    if plain is not None:
        assert framed == plain.tensor(v)


# --- Text format ------------------------------------------------------------


def test_print_forms():
    assert product_text(parse_product("r1*l1*r1")) == "l1*r1*r1"
    assert formula_text(parse_formula("l1*r1 -o l1")) == "(l1*r1) -o l1"
    assert formula_text(parse_formula("l2 -o (l3*r1)")) == "l2 -o (l3*r1)"
    assert formula_text(parse_formula("l1 -o (l0 + k1)")) == "l1 -o (k1 + l0)"


def test_sequent_text_empty_zones():
    s = parse_sequent("q ; ; |- q")
    assert sequent_text(s) == "q ; ; |- q"
    assert s.linear == () and s.banged == ()


def test_whitespace_insignificant():
    a = parse_sequent("f;f -o g;|-g")
    b = parse_sequent("  f ;  f  -o  g ;   |-   g ")
    assert a == b


@given(products)
def test_product_text_round_trip(x):
    assert parse_product(product_text(x)) == x


@given(st.tuples(products, products, products))
def test_formula_text_round_trip(xyz):
    x, y, z = xyz
    for f in (PlainImplication(x, y), OplusImplication(x, y, z)):
        assert parse_formula(formula_text(f)) == f


@given(products, st.lists(plains, max_size=3), st.lists(plains, max_size=3), products)
def test_sequent_text_round_trip(w, gamma, delta, z):
    s = HornSequent(w, tuple(gamma), tuple(delta), z)
    text = sequent_text(s)
    assert parse_sequent(text) == s
    assert sequent_text(parse_sequent(text)) == text


@pytest.mark.parametrize(
    "bad",
    [
        "",
        "a**b ; ; |- q",
        "1a ; ; |- q",
        "a ; b |- c",
        "a ; ; |- c extra",
        "a ; b -o ; |- c",
        "a ; b -o (c + ) ; |- d",
        "a |- b",
    ],
)
def test_sequent_parse_errors(bad):
    with pytest.raises(FormatError):
        parse_sequent(bad)


@pytest.mark.parametrize("bad", ["a -o", "a -o b -o c", "a + b", "(a -o b)"])
def test_formula_parse_errors(bad):
    with pytest.raises(FormatError):
        parse_formula(bad)


def test_parse_error_reports_position():
    with pytest.raises(FormatError) as err:
        parse_product("a * * b")
    assert err.value.position is not None
