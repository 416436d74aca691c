"""E_2-page style charts: total degree to the right, homological degree s upward."""
from __future__ import annotations

import re
from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from .pipeline import DLActionTable, SmashHomotopyTable

_SUP = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


def op_label(kind: str, superscript: int, ascii_safe: bool = True) -> str:
    head = "betaQ" if kind == "betaQ" else "Q"
    if ascii_safe:
        return f"{head}^{superscript}"
    return ("βQ" if kind == "betaQ" else "Q") + str(superscript).translate(_SUP)


@dataclass(frozen=True)
class PlacedClass:
    label: str        # ascii label, the identity of the class
    display: str
    s: int
    total: int


@dataclass(frozen=True)
class Arrow:
    op: str           # ascii operation label, e.g. "Q^2"
    display: str
    source: str
    target: str
    shift: int        # total-degree shift of the operation


@dataclass(frozen=True)
class ChartDocument:
    title: str
    classes: tuple
    arrows: tuple

    def class_set(self) -> set:
        return {(c.label, c.s, c.total) for c in self.classes}

    def arrow_set(self) -> set:
        return {(a.op, a.source, a.target) for a in self.arrows}

    def placed(self, label: str) -> PlacedClass:
        return next(c for c in self.classes if c.label == label)


def render_chart(table: SmashHomotopyTable, actions: DLActionTable | None = None,
                 ascii_safe: bool = False) -> ChartDocument:
    classes = tuple(PlacedClass(c.label, c.label if ascii_safe else (c.display or c.label), c.s, c.total)
                    for c in table.classes)
    known = {c.label for c in classes}
    arrows = []
    for e in (actions.entries if actions else ()):
        targets = [t.strip().lstrip("-").strip() for t in re.split(r"\s[+-]\s", e.target)]
        for t in targets:
            t = t.split("*", 1)[-1]
            if e.source not in known or t not in known:
                raise ValueError(f"arrow {e.op}: {e.source} -> {t} has an unplaced endpoint")
            arrows.append(Arrow(str(e.op), op_label(e.op.kind, e.op.superscript, ascii_safe),
                                e.source, t, e.op.degree_shift(table.prime)))
    title = f"pi_*(HF_{table.prime} smash_{table.ring} HF_{table.prime}), t <= {table.truncation}"
    return ChartDocument(title, classes, tuple(arrows))


def to_ascii(doc: ChartDocument) -> str:
    if not doc.classes:
        return doc.title + "\n(no classes)\n"
    max_s = max(c.s for c in doc.classes)
    max_n = max(c.total for c in doc.classes)
    cells: dict = {}
    for c in doc.classes:
        cells.setdefault((c.s, c.total), []).append(c.display)
    width = max(max(len(",".join(v)) for v in cells.values()), len(str(max_n))) + 2
    lines = [doc.title]
    for s in range(max_s, -1, -1):
        row = f"{s:>3} |"
        for n in range(max_n + 1):
            row += ",".join(cells.get((s, n), [])).center(width)
        lines.append(row.rstrip())
    lines.append("    +" + "-" * (width * (max_n + 1)))
    lines.append("     " + "".join(str(n).center(width) for n in range(max_n + 1)))
    lines.append("classes:")
    for c in doc.classes:
        lines.append(f"  {c.display} @ s={c.s} total={c.total} [{c.label}]")
    lines.append("arrows:")
    if not doc.arrows:
        lines.append("  (none)")
    for a in doc.arrows:
        src, tgt = doc.placed(a.source), doc.placed(a.target)
        lines.append(f"  {a.display}: {src.display} -> {tgt.display} [{a.op}: {a.source} -> {a.target}]")
    return "\n".join(lines) + "\n"


def to_svg(doc: ChartDocument, cell: int = 48) -> str:
    max_s = max((c.s for c in doc.classes), default=0)
    max_n = max((c.total for c in doc.classes), default=0)
    margin = 40
    w = margin * 2 + cell * (max_n + 1)
    h = margin * 2 + cell * (max_s + 1)

    def xy(c: PlacedClass, k: int = 0):
        return margin + cell * c.total + cell // 2, h - margin - cell * c.s - cell // 2 - 14 * k

    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
           f'viewBox="0 0 {w} {h}">',
           f'<title>{escape(doc.title)}</title>',
           f'<line class="axis" x1="{margin}" y1="{h - margin}" x2="{w - margin // 2}" y2="{h - margin}" stroke="black"/>',
           f'<line class="axis" x1="{margin}" y1="{h - margin}" x2="{margin}" y2="{margin // 2}" stroke="black"/>']
    for n in range(max_n + 1):
        out.append(f'<text class="tick" x="{margin + cell * n + cell // 2}" y="{h - margin + 16}" '
                   f'font-size="11" text-anchor="middle">{n}</text>')
    for s in range(max_s + 1):
        out.append(f'<text class="tick" x="{margin - 12}" y="{h - margin - cell * s - cell // 2 + 4}" '
                   f'font-size="11" text-anchor="end">{s}</text>')
    stack: dict = {}
    pos = {}
    for c in doc.classes:
        k = stack.get((c.s, c.total), 0)
        stack[(c.s, c.total)] = k + 1
        x, y = xy(c, k)
        pos[c.label] = (x, y)
        out.append(f'<g class="tor-class" data-label={quoteattr(c.label)} data-s="{c.s}" data-total="{c.total}">'
                   f'<circle cx="{x}" cy="{y}" r="3"/>'
                   f'<text x="{x + 5}" y="{y - 5}" font-size="12">{escape(c.display)}</text></g>')
    for a in doc.arrows:
        (x1, y1), (x2, y2) = pos[a.source], pos[a.target]
        out.append(f'<g class="dl-arrow" data-op={quoteattr(a.op)} data-source={quoteattr(a.source)} '
                   f'data-target={quoteattr(a.target)}>'
                   f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="blue"/>'
                   f'<text x="{(x1 + x2) // 2}" y="{(y1 + y2) // 2 - 6}" font-size="11" fill="blue">'
                   f'{escape(a.display)}</text></g>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


_ASCII_CLASS = re.compile(r"^  .* @ s=(\d+) total=(\d+) \[(.+)\]$")
_ASCII_ARROW = re.compile(r"^  .*\[(\S+): (\S+) -> (\S+)\]$")


def parse_ascii(text: str) -> tuple:
    """(class set, arrow set) recovered from :func:`to_ascii` output."""
    classes, arrows = set(), set()
    for line in text.splitlines():
        if m := _ASCII_CLASS.match(line):
            classes.add((m.group(3), int(m.group(1)), int(m.group(2))))
        elif m := _ASCII_ARROW.match(line):
            arrows.add((m.group(1), m.group(2), m.group(3)))
    return classes, arrows


def parse_svg(text: str) -> tuple:
    import xml.etree.ElementTree as ET
    root = ET.fromstring(text)
    ns = "{http://www.w3.org/2000/svg}"
    classes, arrows = set(), set()
    for g in root.iter(ns + "g"):
        if g.get("class") == "tor-class":
            classes.add((g.get("data-label"), int(g.get("data-s")), int(g.get("data-total"))))
        elif g.get("class") == "dl-arrow":
            arrows.add((g.get("data-op"), g.get("data-source"), g.get("data-target")))
    return classes, arrows
