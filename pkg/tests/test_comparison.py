import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from kunneth.comparison import (ChainMapLift, check_exact, homotopy_between, koszul_resolution,
                                lift_map, lift_to_dict, module_map_from_dict, perturb,
                                polynomial_ring, random_case, resolution_from_dict,
                                resolution_to_dict, verify_chain_map, verify_homotopy)
from kunneth.errors import NotExact
from kunneth.graded import AlgebraPresentation, GeneratorSpec, ModuleMap, ModulePresentation


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_random_lifts_commute_and_are_homotopic(seed):
    case = random_case(seed)
    F, G, phi = case.F, case.G, case.phi
    assert check_exact(F)[0] and check_exact(G)[0]
    f = lift_map(phi, F, G)
    g = lift_map(phi, F, G, rng=random.Random(seed + 1))
    assert f.certified and g.certified
    assert verify_chain_map(g, F, G, phi)[0]
    H = homotopy_between(f, g, F, G)
    assert H.certified
    assert verify_homotopy(H, f, g, F, G)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_perturbed_lift_is_still_a_lift(seed):
    case = random_case(seed)
    f = lift_map(case.phi, case.F, case.G)
    h = perturb(f, case.F, case.G, random.Random(seed))
    assert verify_chain_map(h, case.F, case.G, case.phi)[0]
    assert homotopy_between(f, h, case.F, case.G).certified


def koszul_identity():
    R = polynomial_ring(2, [1, 2], 8)
    res = koszul_resolution(R, ["y1", "y2"])
    return R, res, ModuleMap.identity(res.module)


def test_corrupted_entry_is_located():
    R, res, phi = koszul_identity()
    f = lift_map(phi, res, res)
    assert f.certified
    levels = [list(map(list, lvl)) for lvl in f.levels]
    # f_1 on the generator of degree 2: replace the identity entry by zero
    j = res.terms[1].index(2)
    levels[1][j][j] = R.zero()
    bad = ChainMapLift(tuple(tuple(map(tuple, lvl)) for lvl in levels))
    assert verify_chain_map(bad, res, res, phi) == (False, 1, 2)


def test_corrupted_augmentation_square():
    R, res, phi = koszul_identity()
    f = lift_map(phi, res, res)
    levels = list(f.levels)
    levels[0] = ((R.zero(),),)
    assert verify_chain_map(ChainMapLift(tuple(levels)), res, res, phi) == (False, 0, 0)


def test_reduction_ladder_over_polynomial_ring():
    R = polynomial_ring(2, [2], 8, ["v"])
    carrier = AlgebraPresentation(2, (GeneratorSpec("xib1sq", 2, "even", False),
                                      GeneratorSpec("xib2sq", 6, "even", False),
                                      GeneratorSpec("xib3", 7, "even", False)), 8)
    M = ModulePresentation(R, carrier, (), "carrier")
    F = koszul_resolution(R, ["v"], module=M, t_max=8)
    G = koszul_resolution(R, ["v"], module=ModulePresentation.trivial(R), t_max=8)
    assert check_exact(F, 8)[0] and check_exact(G, 8)[0]
    f = lift_map(ModuleMap.reduction(M, G.module), F, G)
    assert f.certified
    for level in f.levels:
        values = [str(row[0]) for row in level]
        assert values[0] == "1" and set(values[1:]) <= {"0"}


def test_truncated_target_is_reported():
    R, res, phi = koszul_identity()
    stub = type(res)(res.ring, res.terms[:1], (), res.augmentation, res.module)
    with pytest.raises(NotExact):
        lift_map(phi, res, stub)


def test_resolution_json_round_trip():
    case = random_case(7)
    d = resolution_to_dict(case.F)
    back = resolution_from_dict(json.loads(json.dumps(d)))
    assert back.terms == case.F.terms
    assert back.differentials == case.F.differentials
    assert resolution_to_dict(back) == d


def test_map_json_and_lift_json():
    R, res, _ = koszul_identity()
    d = resolution_to_dict(res)
    phi = module_map_from_dict({"images": {}, "scalar": 1}, res.module, res.module)
    f = lift_map(phi, res, res)
    out = lift_to_dict(f)
    assert out["certified"] is True
    assert json.loads(json.dumps(out)) == out
    assert resolution_from_dict(d).terms == res.terms


def test_non_exact_input_detected():
    R = polynomial_ring(2, [1, 1], 6)
    res = koszul_resolution(R, ["y1", "y2"])
    d1 = list(res.differentials[0])
    d1[0] = tuple(R.zero() for _ in d1[0])
    broken = type(res)(res.ring, res.terms, (tuple(d1),) + res.differentials[1:],
                       res.augmentation, res.module)
    assert check_exact(broken)[0] is False
