import pytest
from hypothesis import given, settings, strategies as st

from kunneth.errors import BeyondTruncation, ParseError
from kunneth.graded import (AlgebraPresentation, GeneratorSpec, ModuleMap, ModulePresentation,
                            basis_in_degree, presentation_from_dict, presentation_to_dict)


def series_dims(gens, top):
    """Coefficients of prod 1/(1-q^d) (polynomial) and (1+q^d) (exterior) through q^top."""
    coeffs = [1] + [0] * top
    for deg, ext in gens:
        if ext:
            coeffs = [coeffs[n] + (coeffs[n - deg] if n >= deg else 0) for n in range(top + 1)]
        else:
            for n in range(deg, top + 1):
                coeffs[n] += coeffs[n - deg]
    return coeffs


gen_lists = st.lists(st.tuples(st.integers(1, 6), st.booleans()), min_size=0, max_size=4)


@settings(max_examples=80, deadline=None)
@given(gen_lists)
def test_basis_sizes_match_generating_function(gens):
    top = 14
    specs = tuple(GeneratorSpec(f"g{i}", d, "odd" if ext else "even", ext) for i, (d, ext) in enumerate(gens))
    pres = AlgebraPresentation(2, specs, top)
    expected = series_dims(gens, top)
    assert [len(basis_in_degree(pres, n)) for n in range(top + 1)] == expected


def odd_p_algebra():
    gens = (GeneratorSpec("a", 1), GeneratorSpec("b", 3), GeneratorSpec("y", 2))
    return AlgebraPresentation(3, gens, 12)


def test_graded_commutativity_signs():
    P = odd_p_algebra()
    a, b, y = P.gen("a"), P.gen("b"), P.gen("y")
    assert b * a == -(a * b)
    assert a * a == P.zero()
    assert y * a == a * y


def test_odd_generator_must_be_exterior_at_odd_p():
    with pytest.raises(ValueError):
        AlgebraPresentation(3, (GeneratorSpec("a", 1, "odd", False),), 4)


def test_beyond_truncation():
    P = odd_p_algebra()
    with pytest.raises(BeyondTruncation):
        basis_in_degree(P, 13)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(0, 1), st.integers(0, 1), st.integers(0, 3)),
                max_size=5))
def test_parse_format_round_trip(terms):
    P = odd_p_algebra()
    x = P.zero()
    for c, ea, eb, ey in terms:
        x = x + P.scalar(c) * P.gen("a", ea) * P.gen("b", eb) * P.gen("y", ey)
    assert P.parse(str(x)) == x


def test_parse_errors():
    P = odd_p_algebra()
    with pytest.raises(ParseError):
        P.parse("")
    with pytest.raises(Exception):
        P.parse("a +* b")


def test_presentation_dict_round_trip():
    P = odd_p_algebra()
    assert presentation_from_dict(presentation_to_dict(P)) == P


def test_trivial_module_and_reduction():
    R = AlgebraPresentation(2, (GeneratorSpec("v", 2),), 8, "Z(p)")
    triv = ModulePresentation.trivial(R)
    assert triv.is_trivial()
    x = triv.carrier.one()
    assert triv.act_element(R.gen("v"), x).is_zero()
    assert ModuleMap.identity(triv).apply(x) == x
