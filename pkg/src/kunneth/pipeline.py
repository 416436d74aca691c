"""From a ring spectrum descriptor to homotopy tables, Dyer-Lashof actions and obstructions.

The Dyer-Lashof action on pi_*(HF_p ∧_R HF_p) is computed by a pushforward:

1. each 1-line class detects a generator of the dual Steenrod algebra A_*
   (its conjugate by default, or the Milnor generator itself);
2. Steinberger's formulas (plus instability and Cartan) act in A_*;
3. A_* is split as carrier ⊗ E[detected classes], viewed as the Tor of the
   trivial comparison module, and the induced map of the reduction
   carrier -> F_p sends everything of positive carrier degree to zero.

Products of 1-line classes are then handled by the Cartan formula inside
the exterior table, using only values established at the generator level.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .descriptors import (RingSpectrumDescriptor, chromatic_index, descriptor_from_dict,
                          trivial_module)
from .dyer_lashof import (BETA_Q, Q, DLEngine, DLOperation, cartan_expand,
                          instability, rho, steinberger_rules)
from .errors import (CollapseHypothesisFailed, IncompleteActionData, KunnethError,
                     UnsupportedIdealShape, UnsupportedShape)
from .graded import FP, AlgebraElement, AlgebraPresentation, GeneratorSpec, ModuleMap, ModulePresentation
from .koszul import (TorClass, TorTable, bar_label, compute_tor, induced_tor_map,
                     tor1_as_ideal_quotient)
from .steenrod import DualSteenrod, dual_steenrod

CONJUGATE, PLAIN = "conjugate", "plain"


# -- homotopy of HF_p ∧_R HF_p ------------------------------------------------

@dataclass(frozen=True)
class ExteriorGenerator:
    entry: str
    label: str
    display: str
    internal_degree: int

    @property
    def total_degree(self) -> int:
        return self.internal_degree + 1


@dataclass(frozen=True)
class SmashHomotopyTable:
    ring: str
    prime: int
    truncation: int
    generators: tuple
    classes: tuple
    collapse: dict
    tor: TorTable | None = field(default=None, compare=False, repr=False)

    def degrees(self) -> set:
        return {c.total for c in self.classes}

    def has_degree(self, n: int) -> bool:
        return any(c.total == n for c in self.classes)

    def to_dict(self) -> dict:
        return {
            "ring": self.ring,
            "prime": self.prime,
            "truncation": self.truncation,
            "generators": [{"entry": g.entry, "label": g.label, "display": g.display,
                            "internal_degree": g.internal_degree, "total_degree": g.total_degree}
                           for g in self.generators],
            "classes": [{"label": c.label, "display": c.display, "s": c.s, "t": c.t, "total": c.total}
                        for c in self.classes],
            "collapse": dict(self.collapse),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SmashHomotopyTable":
        return cls(d["ring"], d["prime"], d["truncation"],
                   tuple(ExteriorGenerator(g["entry"], g["label"], g["display"], g["internal_degree"])
                         for g in d["generators"]),
                   tuple(TorClass(c["label"], c["s"], c["t"], c.get("display", "")) for c in d["classes"]),
                   dict(d["collapse"]))


def compute_smash_homotopy(desc: RingSpectrumDescriptor, t_max: int | None = None) -> SmashHomotopyTable:
    """Tor^{R_*}(F_p, F_p) with the multiplicative-generation check that forces collapse."""
    t_max = desc.truncation if t_max is None else t_max
    seq = desc.regular_sequence()
    tor = compute_tor(desc.ring, seq, trivial_module(desc), t_max)
    if not tor.one_line_generated:
        bad = next((c for c in tor.classes if c.s >= 2), None)
        where = f" (s, t) = ({bad.s}, {bad.t})" if bad else ""
        raise CollapseHypothesisFailed(f"Tor is not generated by the 1-line{where}")
    gens = tuple(ExteriorGenerator(e, bar_label(e), bar_label(e, False), seq.degree(i))
                 for i, e in enumerate(seq.entries) if seq.degree(i) <= t_max)
    collapse = {"e2_equals_e_infinity": True,
                "reason": "Tor is generated by the 1-line, where every differential vanishes "
                          "for filtration reasons; multiplicativity then forces d_r = 0."}
    return SmashHomotopyTable(desc.name, desc.prime, t_max, gens, tor.classes, collapse, tor)


# -- Dyer-Lashof tables ---------------------------------------------------------

@dataclass(frozen=True)
class DLEntry:
    op: DLOperation
    source: str
    target: str
    coefficient: int = 1
    sign_known: bool = True
    provenance: str = "steinberger"
    source_degree: int = 0
    target_degree: int = 0

    def key(self, with_sign: bool = True) -> tuple:
        base = (self.op.kind, self.op.superscript, self.source, self.target)
        return base + ((self.coefficient,) if with_sign else ())


@dataclass(frozen=True)
class DLVanishing:
    op: DLOperation
    source: str
    provenance: str
    target_degree: int


@dataclass(frozen=True)
class DLUnknown:
    op: DLOperation
    source: str
    reason: str


@dataclass(frozen=True)
class DLActionTable:
    ring: str
    prime: int
    truncation: int
    detection: tuple                # ((entry, "conjugate" | "plain"), ...)
    entries: tuple
    vanishing: tuple = ()
    unknown: tuple = ()
    notes: tuple = ()
    warnings: tuple = ()

    def signature(self, with_sign: bool = True) -> frozenset:
        return frozenset(e.key(with_sign) for e in self.entries)

    def lookup(self, op: str | DLOperation, source: str) -> DLEntry | None:
        op = DLOperation.parse(op) if isinstance(op, str) else op
        return next((e for e in self.entries if e.op == op and e.source == source), None)

    def to_dict(self) -> dict:
        return {
            "ring": self.ring,
            "prime": self.prime,
            "truncation": self.truncation,
            "detection": {e: c for e, c in self.detection},
            "entries": [{"op": str(e.op), "kind": e.op.kind, "superscript": e.op.superscript,
                         "source": e.source, "target": e.target, "coefficient": e.coefficient,
                         "sign_known": e.sign_known, "provenance": e.provenance,
                         "source_degree": e.source_degree, "target_degree": e.target_degree}
                        for e in self.entries],
            "vanishing": [{"op": str(v.op), "kind": v.op.kind, "superscript": v.op.superscript,
                           "source": v.source, "provenance": v.provenance,
                           "target_degree": v.target_degree} for v in self.vanishing],
            "unknown": [{"op": str(u.op), "kind": u.op.kind, "superscript": u.op.superscript,
                         "source": u.source, "reason": u.reason} for u in self.unknown],
            "notes": list(self.notes),
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DLActionTable":
        def op(x):
            return DLOperation(x["kind"], int(x["superscript"]))
        return cls(d["ring"], d["prime"], d["truncation"], tuple(d["detection"].items()),
                   tuple(DLEntry(op(e), e["source"], e["target"], e["coefficient"], e["sign_known"],
                                 e["provenance"], e["source_degree"], e["target_degree"])
                         for e in d["entries"]),
                   tuple(DLVanishing(op(v), v["source"], v["provenance"], v["target_degree"])
                         for v in d.get("vanishing", [])),
                   tuple(DLUnknown(op(u), u["source"], u["reason"]) for u in d.get("unknown", [])),
                   tuple(d.get("notes", [])), tuple(d.get("warnings", [])))


def _milnor_name(conj_name: str) -> str:
    return conj_name.replace("xib", "xi").replace("taub", "tau")


def _substitute(x: AlgebraElement, images: dict, target: AlgebraPresentation) -> AlgebraElement:
    """Evaluate x with generator k replaced by images[k]."""
    out = target.zero()
    for mono, c in x.terms.items():
        term = target.scalar(c)
        for k, e in enumerate(mono):
            if e:
                term = term * (images[k] ** e)
        out = out + term
    return out


class Pushforward:
    """A_* -> pi_*(HF_p ∧_R HF_p) for one choice of detected generators."""

    def __init__(self, desc: RingSpectrumDescriptor, t_max: int, choice: dict | None = None):
        p = desc.prime
        self.desc, self.p, self.t_max = desc, p, t_max
        self.top = t_max + 1
        self.A = dual_steenrod(p, self.top, conjugate=True)
        self.D = DualSteenrod(p, self.top)
        self.engine = DLEngine(p, self.top)
        self.seq = desc.regular_sequence()
        choice = choice or {}
        A, seq = self.A, self.seq
        self.detected: dict = {}            # A generator index -> sequence position
        for j, e in enumerate(seq.entries):
            g = desc.detection_map.get(e)
            if g and A.has(g) and seq.degree(j) <= t_max:
                self.detected[A.index(g)] = j
        self.plain = {k for k, j in self.detected.items() if choice.get(seq.entries[j], CONJUGATE) == PLAIN}

        gens, self.slot = [], {}
        for k, g in enumerate(A.generators):
            if k in self.detected:
                if p == 2:
                    self.slot[k] = len(gens)
                    gens.append(GeneratorSpec(g.name + "sq", 2 * g.degree, "even", False, g.label + "²"))
                continue
            self.slot[k] = len(gens)
            gens.append(GeneratorSpec(g.name, g.degree, g.parity, g.exterior, g.display))
        self.carrier = AlgebraPresentation(p, tuple(gens), t_max, FP, "comparison carrier")
        self.cmp_module = ModulePresentation.trivial(desc.ring, self.carrier, "comparison")
        self.fp_module = trivial_module(desc)
        self.cmp_table = compute_tor(desc.ring, self.seq, self.cmp_module, t_max, check_products=False)
        self.fp_table = compute_tor(desc.ring, self.seq, self.fp_module, t_max, check_products=False)
        self.tor_map = induced_tor_map(ModuleMap.reduction(self.cmp_module, self.fp_module),
                                       self.seq, t_max, self.cmp_table, self.fp_table)

        # each conjugate generator written in the chosen mixed basis
        self.expr_conj: dict = {}
        expr_mil: dict = {}
        for k in sorted(range(A.ngens), key=lambda k: A.generators[k].degree):
            chi = self.D.chi_generator(_milnor_name(A.generators[k].name))
            if k in self.plain:
                expr_mil[k] = A.gen(A.generators[k].name)
                self.expr_conj[k] = _substitute(chi, expr_mil, A)
            else:
                self.expr_conj[k] = A.gen(A.generators[k].name)
                expr_mil[k] = _substitute(chi, self.expr_conj, A)

        # E-level presentation: exterior on every sequence entry
        self.E = AlgebraPresentation(p, tuple(GeneratorSpec(f"e{j}", seq.degree(j) + 1, "odd", True,
                                                            bar_label(e, False))
                                              for j, e in enumerate(seq.entries)),
                                     max(self.top, 1), FP, "E")

    def source_element(self, position: int) -> AlgebraElement:
        """The element of A_* (conjugate basis) detected by the 1-line class at ``position``."""
        k = next(k for k, j in self.detected.items() if j == position)
        name = self.A.generators[k].name
        if k in self.plain:
            milnor = self.D.pres.gen(_milnor_name(name))
            return self.D.to_conjugate_basis(milnor)
        return self.A.gen(name)

    def prune(self, mono: tuple) -> bool:
        """At p = 2 with plain detection, monomials containing a square push forward to zero
        after any Q^n: Q^a(y^2) = (Q^{a/2} y)^2 and squares vanish in the exterior target."""
        return self.p == 2 and bool(self.plain) and any(e >= 2 for e in mono)

    def _decompose(self, mono: tuple) -> tuple:
        p = self.p
        carrier = [0] * self.carrier.ngens
        subset = []
        odd_src, odd_carrier, odd_ext = [], [], []
        for k, e in enumerate(mono):
            if not e:
                continue
            g = self.A.generators[k]
            if k in self.detected:
                j = self.detected[k]
                if p == 2:
                    q, r = divmod(e, 2)
                    carrier[self.slot[k]] += q
                    if r:
                        subset.append(j)
                else:
                    subset.append(j)
                    odd_src.append(("e", j))
                    odd_ext.append(("e", j))
            else:
                carrier[self.slot[k]] += e
                if p > 2 and g.odd and e % 2:
                    odd_src.append(("c", k))
                    odd_carrier.append(("c", k))
        sign = 1
        if p > 2:
            target = odd_carrier + sorted(odd_ext, key=lambda x: x[1])
            pos = {x: i for i, x in enumerate(target)}
            perm = [pos[x] for x in odd_src]
            inv = sum(1 for a, b in itertools.combinations(range(len(perm)), 2) if perm[a] > perm[b])
            sign = (-1) ** inv
        return tuple(carrier), tuple(sorted(subset)), sign

    def push(self, y: AlgebraElement) -> AlgebraElement:
        """Image in the exterior table E of an element of A_* given in the conjugate basis."""
        mixed = _substitute(y, self.expr_conj, self.A)
        chains: dict = {}
        cx = self.cmp_table.complex
        from .koszul import BasisLabel
        for mono, c in mixed.terms.items():
            carrier, subset, sign = self._decompose(mono)
            s = len(subset)
            t = self.A.degree(mono) - s
            if t > self.t_max:
                raise KunnethError(f"degree {t} beyond the comparison truncation")
            vec = chains.setdefault((s, t), [0] * cx.dim(s, t))
            i = cx.index(s, t, BasisLabel(carrier, subset))
            vec[i] = (vec[i] + sign * c) % self.p
        out = self.E.zero()
        fcx = self.fp_table.complex
        for (s, t), vec in chains.items():
            coords = self.cmp_table.coordinates(s, t, vec)
            image = self.tor_map.apply(s, t, coords)
            reps = self.fp_table.homology[(s, t)].homology_reps
            chain = [0] * fcx.dim(s, t)
            for a, rep in zip(image, reps):
                for i, r in enumerate(rep):
                    chain[i] = (chain[i] + a * r) % self.p
            for i, c in enumerate(chain):
                if c:
                    S = fcx.basis(s, t)[i].subset
                    mono = tuple(1 if j in S else 0 for j in range(self.E.ngens))
                    out = out + self.E.monomial(mono, c)
        return out


def format_exterior(x: AlgebraElement, entries: tuple, ascii_safe: bool = True) -> tuple:
    """(text, coefficient): a single signed monomial gives its label and sign."""
    p = x.pres.prime
    terms = []
    for mono, c in sorted(x.terms.items(), key=lambda kv: (sum(kv[0]), [-e for e in kv[0]])):
        lab = "".join(bar_label(entries[j], ascii_safe) for j, e in enumerate(mono) if e) or "1"
        if p > 2 and c > p // 2:
            c -= p
        terms.append((lab, c))
    if not terms:
        return "0", 0
    if len(terms) == 1:
        lab, c = terms[0]
        return (lab if abs(c) == 1 else f"{abs(c)}*{lab}"), (1 if c > 0 else -1)
    text = " + ".join(lab if c == 1 else f"{c}*{lab}" for lab, c in terms).replace("+ -", "- ")
    return text, 1


def _label(mono: tuple, entries: tuple, ascii_safe: bool = True) -> str:
    return "".join(bar_label(entries[j], ascii_safe) for j, e in enumerate(mono) if e) or "1"


def compute_dl_action(desc: RingSpectrumDescriptor, t_max: int | None = None,
                      detection: dict | None = None,
                      smash: SmashHomotopyTable | None = None) -> DLActionTable:
    """Dyer-Lashof table on the classes of pi_*(HF_p ∧_R HF_p) with internal degree <= t_max."""
    t_max = desc.truncation if t_max is None else t_max
    smash = smash or compute_smash_homotopy(desc, t_max)
    p = desc.prime
    push = Pushforward(desc, t_max, detection)
    seq = push.seq
    top = t_max + 1
    entries, vanishing, unknown = [], [], []
    gen_values: dict = {}                 # (op, position) -> E element

    def degree_zero(d: int) -> bool:
        return d <= top and not smash.has_degree(d)

    for k, j in sorted(push.detected.items(), key=lambda kv: kv[1]):
        src = bar_label(seq.entries[j])
        src_deg = seq.degree(j) + 1
        name = push.A.generators[k].name
        for op, _, _ in steinberger_rules(name, p, top):
            tdeg = src_deg + op.degree_shift(p)
            if degree_zero(tdeg):
                vanishing.append(DLVanishing(op, src, "degree-zero", tdeg))
                gen_values[(op, j)] = push.E.zero()
                continue
            value = push.engine.q(op, push.source_element(j), push.prune)
            if value is None:
                unknown.append(DLUnknown(op, src, "no formula determines the value in A_*"))
                continue
            image = push.push(value)
            gen_values[(op, j)] = image
            if image.is_zero():
                vanishing.append(DLVanishing(op, src, "pushforward-zero", tdeg))
                continue
            text, coeff = format_exterior(image, seq.entries)
            entries.append(DLEntry(op, src, text, coeff, p == 2, "steinberger", src_deg, tdeg))

    if desc.cartan_products:
        _product_entries(push, smash, gen_values, entries, vanishing, unknown)

    choice = tuple((seq.entries[j], PLAIN if k in push.plain else CONJUGATE)
                   for k, j in sorted(push.detected.items(), key=lambda kv: kv[1]))
    return DLActionTable(desc.name, p, t_max, choice, tuple(entries), tuple(vanishing),
                         tuple(unknown), desc.notes, desc.warnings)


def _product_entries(push: Pushforward, smash: SmashHomotopyTable, gen_values: dict,
                     entries: list, vanishing: list, unknown: list) -> None:
    p, E, seq = push.p, push.E, push.seq
    top = push.top
    present = [j for j in range(len(seq)) if seq.degree(j) <= push.t_max]
    top_class = max(smash.degrees())

    def value(a: int, mono: tuple):
        j = mono.index(1)
        op = DLOperation(Q, a)
        deg = E.degree(mono)
        if (op, j) in gen_values:
            return gen_values[(op, j)]
        rule = instability(op, deg, p)
        if rule in ("zero", "power"):
            # a square of an odd exterior class vanishes
            return E.zero()
        d = deg + op.degree_shift(p)
        if d <= top and not smash.has_degree(d):
            return E.zero()
        return None

    for size in range(2, len(present) + 1):
        for combo in itertools.combinations(present, size):
            mono = tuple(1 if j in combo else 0 for j in range(E.ngens))
            if sum(seq.degree(j) for j in combo) > push.t_max:
                continue
            deg = E.degree(mono)
            src = _label(mono, seq.entries)
            factors = [tuple(1 if i == j else 0 for i in range(E.ngens)) for j in combo]
            n = 0
            while deg + DLOperation(Q, n).degree_shift(p) <= top:
                op = DLOperation(Q, n)
                tdeg = deg + op.degree_shift(p)
                n += 1
                if instability(op, deg, p) is not None:
                    continue
                if not smash.has_degree(tdeg):
                    if tdeg <= top_class:
                        vanishing.append(DLVanishing(op, src, "degree-zero", tdeg))
                    continue
                try:
                    res = cartan_expand(op.superscript, factors, value, E.monomial, E.degree, p)
                except IncompleteActionData as exc:
                    unknown.append(DLUnknown(op, src, str(exc)))
                    continue
                if res is None:
                    unknown.append(DLUnknown(op, src, "unknown value"))
                elif res.is_zero():
                    vanishing.append(DLVanishing(op, src, "cartan", tdeg))
                else:
                    text, coeff = format_exterior(res, seq.entries)
                    entries.append(DLEntry(op, src, text, coeff, p == 2, "cartan", deg, tdeg))


def detection_choices(desc: RingSpectrumDescriptor, t_max: int | None = None) -> list:
    """Every assignment of conjugate/plain detection to the detecting 1-line classes."""
    t_max = desc.truncation if t_max is None else t_max
    seq = desc.regular_sequence()
    detecting = [e for i, e in enumerate(seq.entries)
                 if desc.detection_map.get(e) and seq.degree(i) <= t_max]
    return [dict(zip(detecting, bits)) for bits in itertools.product((CONJUGATE, PLAIN), repeat=len(detecting))]


def generator_images(desc: RingSpectrumDescriptor, t_max: int | None = None,
                     detection: dict | None = None) -> dict:
    """(op, source label) -> pushed-forward image of op applied to each detected generator."""
    t_max = desc.truncation if t_max is None else t_max
    push = Pushforward(desc, t_max, detection)
    out = {}
    for k, j in push.detected.items():
        for op, _, _ in steinberger_rules(push.A.generators[k].name, desc.prime, push.top):
            v = push.engine.q(op, push.source_element(j), push.prune)
            if v is not None:
                out[(str(op), bar_label(push.seq.entries[j]))] = push.push(v)
    return out


# -- audits -------------------------------------------------------------------------

def degree_violations(table: DLActionTable) -> list:
    """Entries whose recorded degrees break |op x| = |x| + shift(op)."""
    bad = []
    for e in table.entries:
        if e.target_degree != e.source_degree + e.op.degree_shift(table.prime):
            bad.append(e)
    return bad


@dataclass(frozen=True)
class FormulaCheck:
    formula: str
    prime: int
    index: int
    source_degree: int
    target_degree: int
    shift: int
    consistent: bool


def _lit_formulas(p: int):
    """Formulas in the form they are usually quoted, as (text, i -> (op, |source|, |target|)).

    Degrees: |p-bar| = 1, |x-bar_n| = 2n + 1, and Milnor/conjugate classes as usual.
    """
    xbar = lambda n: 2 * n + 1
    if p == 2:
        return [
            ("Q^{2^i-2}(xi_1) = xib_i", 2, lambda i: (DLOperation(Q, 2**i - 2), 1, 2**i - 1)),
            ("Q^{2^i}(xib_i) = xib_{i+1}", 1, lambda i: (DLOperation(Q, 2**i), 2**i - 1, 2**(i + 1) - 1)),
            ("Q^{2^i-2}(2b) = xb_{2^{i-1}-1}", 2, lambda i: (DLOperation(Q, 2**i - 2), 1, xbar(2**(i - 1) - 1))),
            ("Q^{2^i}(xb_{2^{i-1}-1}) = xb_{2^i-1}", 2,
             lambda i: (DLOperation(Q, 2**i), xbar(2**(i - 1) - 1), xbar(2**i - 1))),
        ]
    return [
        ("Q^{rho(i)}(tau_0) = (-1)^i taub_i", 1, lambda i: (DLOperation(Q, rho(i, p)), 1, 2 * p**i - 1)),
        ("betaQ^{rho(i)}(tau_0) = (-1)^i xib_i", 1, lambda i: (DLOperation(BETA_Q, rho(i, p)), 1, 2 * p**i - 2)),
        ("Q^{p^{i-1}}(taub_{i-1}) = taub_i", 1,
         lambda i: (DLOperation(Q, p**(i - 1)), 2 * p**(i - 1) - 1, 2 * p**i - 1)),
        ("betaQ^{p^i}(xib_i) = xib_{i+1}", 1,
         lambda i: (DLOperation(BETA_Q, p**i), 2 * p**i - 2, 2 * p**(i + 1) - 2)),
        ("Q^{p^i}(xib_i) = xib_{i+1}", 1,
         lambda i: (DLOperation(Q, p**i), 2 * p**i - 2, 2 * p**(i + 1) - 2)),
        ("Q^{rho(i)}(pb) = xb_{p^{i-1}-1}", 2,
         lambda i: (DLOperation(Q, rho(i, p)), 1, xbar(p**(i - 1) - 1))),
        ("Q^{rho(i)}(pb) = xb_{p^i-1}", 1,
         lambda i: (DLOperation(Q, rho(i, p)), 1, xbar(p**i - 1))),
        ("Q^{p^i}(xb_{p^{i-1}-1}) = xb_{p^i-1}", 2,
         lambda i: (DLOperation(Q, p**i), xbar(p**(i - 1) - 1), xbar(p**i - 1))),
        ("Q^{p^{i-1}}(xb_{p^{i-1}-1}) = xb_{p^i-1}", 2,
         lambda i: (DLOperation(Q, p**(i - 1)), xbar(p**(i - 1) - 1), xbar(p**i - 1))),
    ]


def audit_formulas(p: int, max_index: int = 4) -> list:
    """Check degree additivity of each quoted formula for i up to max_index."""
    out = []
    for text, lo, f in _lit_formulas(p):
        for i in range(lo, max_index + 1):
            op, s, t = f(i)
            shift = op.degree_shift(p)
            out.append(FormulaCheck(text, p, i, s, t, shift, s + shift == t))
    return out


def flagged_formulas(p: int, max_index: int = 4) -> list:
    """Formulas that fail degree additivity for some index."""
    return sorted({c.formula for c in audit_formulas(p, max_index) if not c.consistent})


# -- obstruction reports -------------------------------------------------------------

OBSTRUCTED, NOT_MET, NONE_FOUND = "obstructed", "condition-not-met", "no-obstruction-found"


@dataclass(frozen=True)
class ObstructionReport:
    verdict: str
    witness: tuple | None = None      # (element in I, operation, forced element not in I)
    narrative: str = ""
    prime: int = 2
    ideal: tuple = ()
    family_in_ideal: tuple = ()

    def __post_init__(self):
        if (self.witness is not None) != (self.verdict == OBSTRUCTED):
            raise ValueError("a witness is present exactly when the verdict is obstructed")

    def to_dict(self) -> dict:
        return {"verdict": self.verdict,
                "witness": None if self.witness is None else
                {"element": self.witness[0], "operation": self.witness[1], "forced": self.witness[2]},
                "narrative": self.narrative, "prime": self.prime, "ideal": list(self.ideal),
                "family_in_ideal": list(self.family_in_ideal)}

    @classmethod
    def from_dict(cls, d: dict) -> "ObstructionReport":
        w = d.get("witness")
        return cls(d["verdict"], None if w is None else (w["element"], w["operation"], w["forced"]),
                   d.get("narrative", ""), d.get("prime", 2), tuple(d.get("ideal", ())),
                   tuple(d.get("family_in_ideal", ())))


def parse_ideal(ideal, p: int) -> tuple:
    """Normalize generator names; only p and the polynomial generators x<i> are accepted."""
    items = ideal.split(",") if isinstance(ideal, str) else list(ideal)
    out = []
    for raw in items:
        g = str(raw).strip()
        if not g:
            continue
        if g == "p" or (g.isdigit() and int(g) == p):
            g = str(p)
        elif not (g.startswith("x") and g[1:].isdigit() and int(g[1:]) >= 1 and not g[1:].startswith("0")):
            raise UnsupportedIdealShape(f"ideal entry {g!r} is not p or a generator x_i")
        if g in out:
            raise UnsupportedIdealShape(f"ideal entry {g!r} repeated")
        out.append(g)
    return tuple(out)


def family_descriptor(p: int, top: int) -> RingSpectrumDescriptor:
    """MU restricted to p and x_{p^j - 1} for j <= top.

    The other polynomial generators detect nothing, so the generator entries
    between family classes are the same as for the full truncation; this
    keeps the witness search cheap when x_{p^{k+1}-1} sits in high degree.
    """
    gens = [{"name": f"x{p**j - 1}", "degree": 2 * (p**j - 1)} for j in range(1, top + 1)]
    data = {"name": "MU", "generators": gens, "cartan_products": False}
    return descriptor_from_dict(data, p, truncation=max(4, 2 * (p**top - 1)))


def check_realizability(ideal, p: int, family_infinite: bool = False) -> ObstructionReport:
    """Obstruction to MU -> MU/I being a map of commutative S-algebras."""
    gens = parse_ideal(ideal, p)
    key = tuple(sorted(gens, key=lambda g: (g != str(p), int(g[1:]) if g != str(p) else 0)))
    members = sorted(int(g[1:]) for g in gens if g != str(p) and chromatic_index(2 * int(g[1:]), p))
    fam = tuple(f"x{i}" for i in members)
    if family_infinite:
        return ObstructionReport(NOT_MET, None, "the ideal is declared to contain infinitely many "
                                 "x_{p^k-1}; the criterion needs a finite nonzero number", p, key, fam)
    if not members:
        return ObstructionReport(NOT_MET, None, "no generator x_{p^k-1} lies in the ideal", p, key, fam)
    ks = sorted(chromatic_index(2 * i, p) for i in members)
    k = next(k for k in ks if k + 1 not in ks)
    src, forced = p**k - 1, p**(k + 1) - 1
    table = compute_dl_action(family_descriptor(p, k + 1))
    src_label, tgt_label = bar_label(f"x{src}"), bar_label(f"x{forced}")
    hit = next((e for e in table.entries if e.source == src_label and e.target == tgt_label), None)
    if hit is None:
        return ObstructionReport(NONE_FOUND, None, f"no operation from {src_label} to {tgt_label} "
                                 "was found in the computed table", p, key, fam)
    narrative = (f"x{src} lies in I, so its class {src_label} must lie in the kernel; "
                 f"{hit.op}({src_label}) = {'' if hit.sign_known else '±'}{tgt_label}, "
                 f"which forces x{forced} into I, but x{forced} is not in I")
    return ObstructionReport(OBSTRUCTED, (f"x{src}", str(hit.op), f"x{forced}"), narrative, p, key, fam)


@dataclass(frozen=True)
class ClosureViolation:
    kernel_element: str
    operation: str
    image: str


def kernel_closure_obstruction(desc: RingSpectrumDescriptor, kernel, indecomposable=(),
                               table: DLActionTable | None = None) -> list:
    """Violations of: x in ker(phi_*) and op(x-bar) = y-bar force phi_*(y) decomposable.

    ``indecomposable`` lists ring generators whose images are declared
    indecomposable in the target.
    """
    kernel = [str(k) for k in kernel]
    seq = desc.sequence
    for k in list(kernel) + list(indecomposable):
        if k not in seq:
            raise UnsupportedShape(f"{k!r} is not an entry of the augmentation sequence {list(seq)}")
    if not kernel:
        return []
    table = table or compute_dl_action(desc)
    by_label = {bar_label(e): e for e in seq}
    out = []
    for x in kernel:
        for e in table.entries:
            if e.source != bar_label(x):
                continue
            y = by_label.get(e.target)
            if y is None:
                continue
            if y in indecomposable and y not in kernel:
                out.append(ClosureViolation(x, str(e.op), y))
    return out


def difference_class_catalog(desc: RingSpectrumDescriptor, t_max: int | None = None) -> dict:
    """Each sequence entry x of degree n paired with its class x-bar in total degree n+1."""
    t_max = desc.truncation if t_max is None else t_max
    seq = desc.regular_sequence()
    if not len(seq):
        return {}
    keep = tuple(e for i, e in enumerate(seq.entries) if seq.degree(i) <= t_max)
    from .koszul import RegularSequence
    sub = RegularSequence(desc.ring, keep)
    classes = tor1_as_ideal_quotient(desc.ring, sub)
    return {e: {"class": c.label, "display": c.display, "total_degree": c.total}
            for e, c in classes.items()}
