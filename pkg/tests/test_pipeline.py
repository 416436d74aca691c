import json
import warnings

import pytest

from kunneth.descriptors import BUILTIN, detected_generator, hurewicz_module, load_descriptor
from kunneth.errors import KunnethError, UnsupportedIdealShape, UnsupportedShape
from kunneth.pipeline import (NOT_MET, OBSTRUCTED, DLActionTable, ObstructionReport,
                              SmashHomotopyTable, audit_formulas, check_realizability,
                              compute_dl_action, compute_smash_homotopy, degree_violations,
                              detection_choices, difference_class_catalog, flagged_formulas,
                              generator_images, kernel_closure_obstruction)


def entries(table):
    return {(str(e.op), e.source, e.target) for e in table.entries}


# -- descriptors --------------------------------------------------------------------

def test_builtin_names_resolve():
    for name in BUILTIN:
        d = load_descriptor(name, 2)
        assert d.sequence[0] == "2"


def test_mu_default_and_truncated_counts():
    assert load_descriptor("MU", 2).sequence[-1] == "x8"
    assert load_descriptor("MU", 2, truncation=8).sequence[-1] == "x4"


def test_odd_prime_gate_warns():
    with pytest.warns(UserWarning):
        d = load_descriptor("BP2", 5)
    assert d.warnings
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert not load_descriptor("BP2", 3).warnings


def test_bad_inputs():
    with pytest.raises(KunnethError):
        load_descriptor("nope", 2)
    with pytest.raises(KunnethError):
        load_descriptor("ku", 4)
    with pytest.raises(KunnethError):
        load_descriptor("ku", 2, truncation=3)


def test_descriptor_from_file(tmp_path):
    path = tmp_path / "k1.toml"
    path.write_text('name = "k1"\n[[generators]]\nname = "v1"\nchromatic = 1\n')
    d = load_descriptor(str(path), 3, truncation=10)
    assert d.sequence == ("3", "v1")
    assert d.detection_map == {"3": "taub0", "v1": "taub1"}


def test_detected_generators():
    assert detected_generator("2", 0, 2) == "xib1"
    assert detected_generator("v2", 6, 2) == "xib3"
    assert detected_generator("x2", 4, 3) == "taub1"
    assert detected_generator("x1", 2, 3) is None


# -- smash homotopy ---------------------------------------------------------------------

def test_bp2_classes():
    table = compute_smash_homotopy(load_descriptor("BP2", 2))
    assert sorted(c.total for c in table.classes) == [0, 1, 3, 4, 7, 8, 10, 11]
    assert table.collapse["e2_equals_e_infinity"]


def test_smash_dict_round_trip():
    table = compute_smash_homotopy(load_descriptor("ell", 3))
    assert SmashHomotopyTable.from_dict(json.loads(json.dumps(table.to_dict()))) == table


# -- Dyer-Lashof tables ---------------------------------------------------------------------

def test_ku_tables():
    assert entries(compute_dl_action(load_descriptor("ku", 2))) == {("Q^2", "2b", "vb")}
    odd = compute_dl_action(load_descriptor("ku", 3))
    assert odd.entries == ()
    assert any("degree" in n for n in odd.notes)


def test_bp2_tables():
    two = compute_dl_action(load_descriptor("BP2", 2))
    assert entries(two) == {("Q^2", "2b", "v1b"), ("Q^6", "2b", "v2b"), ("Q^4", "v1b", "v2b"),
                            ("Q^6", "2bv1b", "v1bv2b")}
    assert {e.provenance for e in two.entries} == {"steinberger", "cartan"}
    three = compute_dl_action(load_descriptor("BP2", 3))
    assert entries(three) == {("Q^1", "3b", "v1b"), ("Q^4", "3b", "v2b"), ("Q^3", "v1b", "v2b"),
                              ("Q^4", "3bv1b", "v1bv2b")}
    assert not any(e.sign_known for e in three.entries)


def test_ell_at_three():
    table = compute_dl_action(load_descriptor("ell", 3))
    assert entries(table) == {("Q^1", "3b", "v1b")}
    (e,) = table.entries
    assert e.sign_known is False and (e.source_degree, e.target_degree) == (1, 5)


def test_mu_table_at_two():
    table = compute_dl_action(load_descriptor("MU", 2))
    assert entries(table) == {("Q^2", "2b", "x1b"), ("Q^6", "2b", "x3b"), ("Q^14", "2b", "x7b"),
                              ("Q^4", "x1b", "x3b"), ("Q^8", "x3b", "x7b")}


def test_dl_dict_round_trip():
    table = compute_dl_action(load_descriptor("BP2", 2))
    assert DLActionTable.from_dict(json.loads(json.dumps(table.to_dict()))) == table


@pytest.mark.parametrize("name", ["ku", "ell", "BP2", "MU"])
def test_detection_choice_does_not_matter_at_two(name):
    desc = load_descriptor(name, 2, truncation=14 if name == "MU" else None)
    base = compute_dl_action(desc).signature()
    for choice in detection_choices(desc):
        assert compute_dl_action(desc, detection=choice).signature() == base


@pytest.mark.parametrize("name", ["ell", "BP2"])
def test_detection_choice_up_to_sign_at_three(name):
    desc = load_descriptor(name, 3)
    base = compute_dl_action(desc).signature(with_sign=False)
    for choice in detection_choices(desc):
        assert compute_dl_action(desc, detection=choice).signature(with_sign=False) == base


def test_generator_images_agree_for_mu_at_three():
    desc = load_descriptor("MU", 3, truncation=16)
    base = generator_images(desc)
    for choice in detection_choices(desc):
        other = generator_images(desc, detection=choice)
        assert base.keys() == other.keys()
        for k in base:
            assert base[k] in (other[k], -other[k])


@pytest.mark.parametrize("name", BUILTIN)
@pytest.mark.parametrize("p", [2, 3])
def test_no_degree_violations(name, p):
    assert degree_violations(compute_dl_action(load_descriptor(name, p))) == []


def test_formula_audit():
    assert flagged_formulas(2) == []
    flagged = flagged_formulas(3)
    assert "Q^{rho(i)}(pb) = xb_{p^{i-1}-1}" in flagged
    assert "Q^{p^i}(xb_{p^{i-1}-1}) = xb_{p^i-1}" in flagged
    assert "Q^{p^{i-1}}(xb_{p^{i-1}-1}) = xb_{p^i-1}" not in flagged
    assert all(c.consistent for c in audit_formulas(3) if c.formula == "Q^{rho(i)}(pb) = xb_{p^i-1}")


# -- obstructions ---------------------------------------------------------------------------

@pytest.mark.parametrize("ideal,p,witness", [
    ("2,x1", 2, ("x1", "Q^4", "x3")),
    ("x1,2", 2, ("x1", "Q^4", "x3")),
    ("2,x1,x3", 2, ("x3", "Q^8", "x7")),
    ("3,x2", 3, ("x2", "Q^3", "x8")),
])
def test_obstructed_ideals(ideal, p, witness):
    report = check_realizability(ideal, p)
    assert report.verdict == OBSTRUCTED
    assert report.witness == witness
    assert ObstructionReport.from_dict(report.to_dict()) == report


def test_condition_not_met():
    assert check_realizability("x2", 2).verdict == NOT_MET
    assert check_realizability("2,x1", 2, family_infinite=True).verdict == NOT_MET


@pytest.mark.parametrize("ideal", ["2,y1", "x0", "2,2", "x01"])
def test_bad_ideal_shapes(ideal):
    with pytest.raises(UnsupportedIdealShape):
        check_realizability(ideal, 2)


def test_hurewicz_module_leading_terms():
    desc = load_descriptor("MU", 2, truncation=8)
    M = hurewicz_module(desc)
    assert str(M.action_of("x2")) in ("b2", "-b2")
    assert M.action_of("x1").is_zero() and M.action_of("x3").is_zero()
    with pytest.raises(KunnethError):
        hurewicz_module(load_descriptor("ku", 2))


def test_kernel_closure():
    ku = load_descriptor("ku", 2)
    (v,) = kernel_closure_obstruction(ku, ["2"], ["v"])
    assert (v.kernel_element, v.operation, v.image) == ("2", "Q^2", "v")
    assert kernel_closure_obstruction(ku, [], ["v"]) == []
    assert kernel_closure_obstruction(load_descriptor("BP2", 2), ["2", "v1"]) == []
    with pytest.raises(UnsupportedShape):
        kernel_closure_obstruction(ku, ["w"])


def test_difference_class_catalog():
    cat = difference_class_catalog(load_descriptor("ku", 2))
    assert {e: (c["class"], c["total_degree"]) for e, c in cat.items()} == {"2": ("2b", 1), "v": ("vb", 3)}
    mu = difference_class_catalog(load_descriptor("MU", 2, truncation=8))
    assert {e: c["total_degree"] for e, c in mu.items()} == {"2": 1, "x1": 3, "x2": 5, "x3": 7, "x4": 9}
