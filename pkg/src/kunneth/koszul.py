"""Koszul complexes of regular sequences and bigraded Tor.

Only sequences made of the prime p and distinct polynomial generators are
accepted; for those regularity is automatic, so the Koszul complex is a free
resolution of the quotient and its homology after tensoring is Tor.

Sign convention: d(e_{i1} ... e_{is}) = sum_j (-1)^(s-j) s_{ij} e_{S - ij}.
In homological degree 2 on (2, v) this is the row (v, -2).
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Sequence

from . import fplinear as fl
from .errors import (IncompatibleSequence, KunnethError, NontrivialModule,
                     TruncationExceeded, UnsupportedEntry)
from .graded import (AlgebraElement, AlgebraPresentation, ModuleMap,
                     ModulePresentation, basis_in_degree)

_SUBSCRIPTS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")
MACRON = "̄"


def bar_label(entry: str, ascii_safe: bool = True) -> str:
    """``v1`` -> ``v1b`` (ascii) or ``v̄₁`` (unicode)."""
    if ascii_safe:
        return entry + "b"
    m = re.fullmatch(r"([A-Za-z_]*?)(\d*)", entry)
    if entry.isdigit():
        return entry + MACRON
    head, digits = m.group(1), m.group(2)
    return head[0] + MACRON + head[1:] + digits.translate(_SUBSCRIPTS)


@dataclass(frozen=True)
class RegularSequence:
    ring: AlgebraPresentation
    entries: tuple

    def __post_init__(self):
        entries = tuple(str(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        seen = set()
        for e in entries:
            if e in seen:
                raise UnsupportedEntry(f"repeated sequence entry {e!r}")
            seen.add(e)
            if e.isdigit():
                if int(e) != self.ring.prime:
                    raise UnsupportedEntry(f"integer entry {e} is not the prime {self.ring.prime}")
            elif not self.ring.has(e):
                raise UnsupportedEntry(f"{e!r} is neither p nor a generator of the ring")
            elif self.ring.generator(e).exterior:
                raise UnsupportedEntry(f"{e!r} is an exterior generator")

    def __len__(self):
        return len(self.entries)

    def degree(self, i: int) -> int:
        e = self.entries[i]
        return 0 if e.isdigit() else self.ring.generator(e).degree

    @property
    def degrees(self) -> tuple:
        return tuple(self.degree(i) for i in range(len(self.entries)))

    def element(self, i: int) -> AlgebraElement:
        e = self.entries[i]
        return self.ring.scalar(int(e)) if e.isdigit() else self.ring.gen(e)

    def labels(self, ascii_safe: bool = True) -> list:
        return [bar_label(e, ascii_safe) for e in self.entries]


def subsets(n: int, s: int) -> list:
    return list(itertools.combinations(range(n), s))


@dataclass(frozen=True)
class KoszulComplex:
    sequence: RegularSequence

    @property
    def length(self) -> int:
        return len(self.sequence)

    def basis(self, s: int) -> list:
        """Exterior monomials e_S in homological degree s (sorted index tuples)."""
        return subsets(self.length, s)

    def internal_degree(self, S: Sequence[int]) -> int:
        return sum(self.sequence.degree(i) for i in S)

    def boundary_terms(self, S: Sequence[int]):
        """Yield (sign, position removed, remaining subset) for d(e_S)."""
        s = len(S)
        for j, i in enumerate(S, start=1):
            yield (-1) ** (s - j), i, tuple(x for x in S if x != i)

    def differential(self, S: Sequence[int]) -> dict:
        """d(e_S) as {subset: ring element}."""
        out: dict = {}
        for sign, i, rest in self.boundary_terms(S):
            out[rest] = out.get(rest, self.sequence.ring.zero()) + self.sequence.element(i).scale(sign)
        return {k: v for k, v in out.items() if v}

    def d_squared(self, S: Sequence[int]) -> dict:
        """d(d(e_S)) computed symbolically over the ring; zero for a valid complex."""
        ring = self.sequence.ring
        out: dict = {}
        for T, coeff in self.differential(S).items():
            for U, c2 in self.differential(T).items():
                out[U] = out.get(U, ring.zero()) + coeff * c2
        return {k: v for k, v in out.items() if v}

    def matrix(self, s: int) -> list:
        """Ring-element matrix of d: K_s -> K_{s-1}; rows index K_{s-1}."""
        rows = self.basis(s - 1)
        cols = self.basis(s)
        ring = self.sequence.ring
        index = {T: r for r, T in enumerate(rows)}
        mat = [[ring.zero() for _ in cols] for _ in rows]
        for c, S in enumerate(cols):
            for T, coeff in self.differential(S).items():
                mat[index[T]][c] = coeff
        return mat


def build_koszul(seq: RegularSequence) -> KoszulComplex:
    return KoszulComplex(seq)


@dataclass(frozen=True)
class BasisLabel:
    carrier: tuple     # carrier monomial
    subset: tuple      # sorted sequence positions


class TensoredComplex:
    """Bigraded F_p complex C_{s,t} = (carrier ⊗ Λ)_{s,t} with d: C_{s,t} -> C_{s-1,t}."""

    def __init__(self, koszul: KoszulComplex, module: ModulePresentation, t_max: int):
        seq = koszul.sequence
        if module.base.generators != seq.ring.generators:
            raise IncompatibleSequence("module and sequence live over different rings")
        limit = min(module.carrier.truncation, seq.ring.truncation)
        if t_max > limit:
            raise TruncationExceeded(f"t_max={t_max} exceeds truncation {limit}")
        self.koszul = koszul
        self.module = module
        self.t_max = t_max
        self.p = module.carrier.prime
        self._basis: dict = {}
        self._index: dict = {}
        for s in range(koszul.length + 1):
            for t in range(t_max + 1):
                b = []
                for S in koszul.basis(s):
                    r = t - koszul.internal_degree(S)
                    if r < 0:
                        continue
                    b.extend(BasisLabel(m, S) for m in basis_in_degree(module.carrier, r))
                self._basis[(s, t)] = b
                self._index[(s, t)] = {lab: i for i, lab in enumerate(b)}
        self._diff: dict = {}

    @property
    def length(self) -> int:
        return self.koszul.length

    def basis(self, s: int, t: int) -> list:
        return self._basis.get((s, t), [])

    def dim(self, s: int, t: int) -> int:
        return len(self.basis(s, t))

    def index(self, s: int, t: int, label: BasisLabel) -> int:
        return self._index[(s, t)][label]

    def differential(self, s: int, t: int) -> fl.FpMatrix:
        """Matrix of d: C_{s,t} -> C_{s-1,t} (zero-size at the ends)."""
        key = (s, t)
        if key in self._diff:
            return self._diff[key]
        src = self.basis(s, t)
        tgt = self.basis(s - 1, t) if s >= 1 else []
        data: dict = {}
        if s >= 1:
            seq = self.koszul.sequence
            carrier = self.module.carrier
            for c, lab in enumerate(src):
                x = carrier.monomial(lab.carrier)
                for sign, i, rest in self.koszul.boundary_terms(lab.subset):
                    y = self.module.act_element(seq.element(i), x)
                    for mono, coeff in y.terms.items():
                        r = self.index(s - 1, t, BasisLabel(mono, rest))
                        data[(r, c)] = (data.get((r, c), 0) + sign * coeff) % self.p
        mat = fl.FpMatrix.from_dict(self.p, len(tgt), len(src), data)
        self._diff[key] = mat
        return mat

    def label(self, lab: BasisLabel, ascii_safe: bool = True) -> str:
        seq = self.koszul.sequence
        bars = "".join(bar_label(seq.entries[i], ascii_safe) for i in lab.subset)
        if any(lab.carrier):
            cm = self.module.carrier.format_monomial(lab.carrier, ascii_safe)
            if not bars:
                return cm
            return f"{cm}.{bars}" if ascii_safe else f"{cm}{bars}"
        return bars or "1"

    def vector_label(self, s: int, t: int, vec: Sequence[int], ascii_safe: bool = True) -> str:
        basis = self.basis(s, t)
        parts = []
        for i, c in enumerate(vec):
            if not c:
                continue
            if self.p > 2 and c > self.p // 2:
                c -= self.p
            lab = self.label(basis[i], ascii_safe)
            parts.append((c, lab))
        if not parts:
            return "0"
        text = ""
        for k, (c, lab) in enumerate(parts):
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            if k == 0:
                text = ("-" if c < 0 else "") + mag + lab
            else:
                text += (" - " if c < 0 else " + ") + mag + lab
        return text

    def product(self, s1: int, t1: int, v1, s2: int, t2: int, v2) -> tuple:
        """Product of chains, using carrier multiplication and exterior wedge."""
        carrier = self.module.carrier
        out = [0] * self.dim(s1 + s2, t1 + t2)
        b1, b2 = self.basis(s1, t1), self.basis(s2, t2)
        for i, c1 in enumerate(v1):
            if not c1:
                continue
            for j, c2 in enumerate(v2):
                if not c2:
                    continue
                l1, l2 = b1[i], b2[j]
                if set(l1.subset) & set(l2.subset):
                    continue
                res = carrier.multiply_monomials(l1.carrier, l2.carrier)
                if res is None:
                    continue
                sign, mono = res
                merged = l1.subset + l2.subset
                inversions = sum(1 for a in range(len(merged)) for b in range(a + 1, len(merged))
                                 if merged[a] > merged[b])
                sign *= (-1) ** inversions
                if self.p > 2 and (len(l1.subset) * carrier.degree(l2.carrier)) % 2:
                    sign = -sign
                k = self.index(s1 + s2, t1 + t2, BasisLabel(mono, tuple(sorted(merged))))
                out[k] = (out[k] + sign * c1 * c2) % self.p
        return tuple(out)


def tensor_with_module(k: KoszulComplex, m: ModulePresentation, t_max: int) -> TensoredComplex:
    return TensoredComplex(k, m, t_max)


@dataclass(frozen=True)
class TorClass:
    label: str
    s: int
    t: int
    display: str = ""

    @property
    def total(self) -> int:
        return self.s + self.t


@dataclass(frozen=True)
class TorTable:
    prime: int
    ring: str
    sequence: tuple
    module: str
    truncation: int
    classes: tuple
    dims: tuple                      # ((s, t, dim), ...) nonzero only
    one_line_generated: bool | None = None
    complex: TensoredComplex | None = field(default=None, compare=False, repr=False)
    homology: dict | None = field(default=None, compare=False, repr=False)

    def dim(self, s: int, t: int) -> int:
        for (a, b, d) in self.dims:
            if (a, b) == (s, t):
                return d
        return 0

    @property
    def dims_map(self) -> dict:
        return {(s, t): d for s, t, d in self.dims}

    def classes_at(self, s: int, t: int) -> list:
        return [c for c in self.classes if (c.s, c.t) == (s, t)]

    def class_by_label(self, label: str) -> TorClass:
        for c in self.classes:
            if c.label == label or c.display == label:
                return c
        raise KeyError(label)

    def coordinates(self, s: int, t: int, chain: Sequence[int]) -> tuple:
        """Homology coordinates of a cycle in C_{s,t}."""
        if self.homology is None:
            raise KunnethError("table carries no homology data")
        return self.homology[(s, t)].coordinates(chain)

    def to_dict(self) -> dict:
        return {
            "prime": self.prime,
            "ring": self.ring,
            "sequence": list(self.sequence),
            "module": self.module,
            "truncation": self.truncation,
            "one_line_generated": self.one_line_generated,
            "classes": [{"label": c.label, "display": c.display, "s": c.s, "t": c.t,
                         "total": c.total} for c in self.classes],
            "dims": [[s, t, d] for s, t, d in self.dims],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TorTable":
        return cls(d["prime"], d["ring"], tuple(d["sequence"]), d["module"], d["truncation"],
                   tuple(TorClass(c["label"], c["s"], c["t"], c.get("display", ""))
                         for c in d["classes"]),
                   tuple(tuple(x) for x in d["dims"]), d.get("one_line_generated"))


def _one_line_generated(cx: TensoredComplex, homology: dict) -> bool:
    """True when products of 1-line classes (and 1) span Tor in every computed bidegree."""
    one_line = []
    for t in range(cx.t_max + 1):
        h = homology.get((1, t))
        if h:
            one_line.extend((t, rep) for rep in h.homology_reps)
    products: dict = {}
    unit = homology[(0, 0)]
    if unit.dim:
        products[(0, 0)] = [unit.homology_reps[0]]
    for k in range(1, len(one_line) + 1):
        for combo in itertools.combinations(range(len(one_line)), k):
            t = sum(one_line[i][0] for i in combo)
            if t > cx.t_max:
                continue
            s, tt, vec = 1, one_line[combo[0]][0], one_line[combo[0]][1]
            for i in combo[1:]:
                ti, vi = one_line[i]
                vec = cx.product(s, tt, vec, 1, ti, vi)
                s, tt = s + 1, tt + ti
            products.setdefault((s, tt), []).append(vec)
    for key, h in homology.items():
        if not h.dim:
            continue
        vecs = products.get(key, [])
        coords = [h.coordinates(v) for v in vecs]
        spanned = fl.rank(fl.FpMatrix.from_columns(cx.p, h.dim, coords)) if coords else 0
        if spanned != h.dim:
            return False
    return True


def compute_tor(ring: AlgebraPresentation, seq: RegularSequence, module: ModulePresentation,
                t_max: int, check_products: bool = True) -> TorTable:
    if seq.ring != ring:
        raise IncompatibleSequence("sequence is not over the given ring")
    cx = tensor_with_module(build_koszul(seq), module, t_max)
    homology = {}
    classes = []
    dims = []
    for s in range(cx.length + 1):
        for t in range(t_max + 1):
            d_in = cx.differential(s + 1, t) if s < cx.length else fl.FpMatrix.zero(cx.p, cx.dim(s, t), 0)
            d_out = cx.differential(s, t)
            h = fl.homology(d_in, d_out)
            homology[(s, t)] = h
            if h.dim:
                dims.append((s, t, h.dim))
                for rep in h.homology_reps:
                    classes.append(TorClass(cx.vector_label(s, t, rep, True), s, t,
                                            cx.vector_label(s, t, rep, False)))
    classes.sort(key=lambda c: (c.total, c.s))
    generated = _one_line_generated(cx, homology) if check_products else None
    return TorTable(ring.prime, ring.name, seq.entries, module.name, t_max, tuple(classes),
                    tuple(sorted(dims, key=lambda x: (x[0] + x[1], x[0]))), generated, cx, homology)


@dataclass(frozen=True)
class TorMap:
    source: TorTable
    target: TorTable
    matrices: dict      # (s, t) -> FpMatrix, target dim x source dim

    def apply(self, s: int, t: int, coords: Sequence[int]) -> tuple:
        m = self.matrices.get((s, t))
        if m is None:
            return ()
        return m.apply(coords)

    def is_identity(self) -> bool:
        return all(m == fl.FpMatrix.identity(m.p, m.rows) for m in self.matrices.values()
                   if m.rows == m.cols) and all(m.rows == m.cols for m in self.matrices.values())

    def compose(self, first: "TorMap") -> "TorMap":
        out = {}
        for key, m in self.matrices.items():
            f = first.matrices.get(key)
            if f is not None:
                out[key] = m @ f
        return TorMap(first.source, self.target, out)


def chain_map_matrix(f: ModuleMap, src: TensoredComplex, tgt: TensoredComplex, s: int, t: int) -> fl.FpMatrix:
    """Matrix of f ⊗ id : C_{s,t}(M) -> C_{s,t}(M')."""
    data: dict = {}
    for c, lab in enumerate(src.basis(s, t)):
        img = f.apply(src.module.carrier.monomial(lab.carrier))
        for mono, coeff in img.terms.items():
            r = tgt.index(s, t, BasisLabel(mono, lab.subset))
            data[(r, c)] = (data.get((r, c), 0) + coeff) % src.p
    return fl.FpMatrix.from_dict(src.p, tgt.dim(s, t), src.dim(s, t), data)


def induced_tor_map(f: ModuleMap, seq: RegularSequence, t_max: int,
                    source: TorTable | None = None, target: TorTable | None = None) -> TorMap:
    ring = seq.ring
    if source is None:
        source = compute_tor(ring, seq, f.source, t_max, check_products=False)
    if target is None:
        target = compute_tor(ring, seq, f.target, t_max, check_products=False)
    for tab in (source, target):
        if tuple(tab.sequence) != seq.entries:
            raise IncompatibleSequence("tables were computed for a different sequence")
    if source.complex.module != f.source or target.complex.module != f.target:
        raise IncompatibleSequence("tables do not match the map's modules")
    mats = {}
    t_top = min(t_max, source.truncation, target.truncation)
    for s in range(len(seq) + 1):
        for t in range(t_top + 1):
            hs, ht = source.homology[(s, t)], target.homology[(s, t)]
            if not hs.dim and not ht.dim:
                continue
            cm = chain_map_matrix(f, source.complex, target.complex, s, t)
            cols = [ht.coordinates(cm.apply(rep)) for rep in hs.homology_reps]
            mats[(s, t)] = fl.FpMatrix.from_columns(source.prime, ht.dim, cols)
    return TorMap(source, target, mats)


def tor1_as_ideal_quotient(ring: AlgebraPresentation, seq: RegularSequence,
                           module: ModulePresentation | None = None) -> dict:
    """Map each sequence entry (a generator of I mod I^2) to its class on the 1-line."""
    if module is None:
        module = ModulePresentation.trivial(ring)
    elif not module.is_trivial() or module.carrier.ngens:
        raise NontrivialModule("the I/I^2 identification needs the trivial module F_p")
    if not len(seq):
        return {}
    t_max = max(seq.degrees)
    table = compute_tor(ring, seq, module, min(t_max, ring.truncation), check_products=False)
    out = {}
    for i, e in enumerate(seq.entries):
        lab = bar_label(e)
        cls = next(c for c in table.classes_at(1, seq.degree(i)) if c.label == lab)
        out[e] = cls
    return out
