import pytest

from kunneth.charts import parse_ascii, parse_svg, render_chart, to_ascii, to_svg
from kunneth.descriptors import load_descriptor
from kunneth.pipeline import compute_dl_action, compute_smash_homotopy


def chart_for(name, p, **kw):
    desc = load_descriptor(name, p)
    smash = compute_smash_homotopy(desc)
    return render_chart(smash, compute_dl_action(desc, smash=smash), **kw)


@pytest.mark.parametrize("name,p", [("ku", 2), ("ku", 3), ("BP2", 2), ("BP2", 3), ("MU", 2)])
@pytest.mark.parametrize("ascii_safe", [False, True])
def test_svg_and_ascii_agree(name, p, ascii_safe):
    doc = chart_for(name, p, ascii_safe=ascii_safe)
    expected = (doc.class_set(), doc.arrow_set())
    assert parse_ascii(to_ascii(doc)) == expected
    assert parse_svg(to_svg(doc)) == expected


def test_ku_single_arrow():
    doc = chart_for("ku", 2)
    assert doc.arrow_set() == {("Q^2", "2b", "vb")}
    assert doc.arrows[0].display == "Q²"


def test_arrows_mirror_table():
    desc = load_descriptor("BP2", 2)
    smash = compute_smash_homotopy(desc)
    table = compute_dl_action(desc, smash=smash)
    doc = render_chart(smash, table)
    assert doc.arrow_set() == {(str(e.op), e.source, e.target) for e in table.entries}
    assert sorted(a.display for a in doc.arrows) == ["Q²", "Q⁴", "Q⁶", "Q⁶"]
    for a in doc.arrows:
        assert doc.placed(a.target).total - doc.placed(a.source).total == a.shift


def test_empty_table_has_no_arrows():
    desc = load_descriptor("ku", 3)
    doc = render_chart(compute_smash_homotopy(desc), None)
    assert doc.arrows == ()
    assert "(none)" in to_ascii(doc)


def test_ascii_safe_has_no_unicode():
    text = to_ascii(chart_for("BP2", 2, ascii_safe=True))
    assert text.isascii()


def test_rendering_is_deterministic():
    assert to_svg(chart_for("BP2", 2)) == to_svg(chart_for("BP2", 2))
