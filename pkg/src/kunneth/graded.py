"""Graded-commutative algebras: polynomial generators tensored with exterior ones.

Monomials are exponent tuples in generator declaration order, so the
declaration order of a presentation fixes every basis ordering downstream.
Products obey the Koszul sign rule for odd-parity generators; at p = 2 all
signs disappear and exterior status is an explicit per-generator flag.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Mapping

from .errors import (BeyondTruncation, MixedPresentation, ParseError,
                     UnknownGenerator)

FP = "Fp"
INTEGRAL = "Z(p)"

Monomial = tuple  # exponents, one per generator


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    degree: int
    parity: str = ""        # "even" | "odd"; defaults to degree parity
    exterior: bool | None = None
    display: str = ""       # unicode label, e.g. "ξ̄₁"

    def __post_init__(self):
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", self.name):
            raise ValueError(f"bad generator name {self.name!r}")
        if self.degree < 0:
            raise ValueError(f"generator {self.name} has negative degree")
        if not self.parity:
            object.__setattr__(self, "parity", "odd" if self.degree % 2 else "even")
        if self.parity not in ("even", "odd"):
            raise ValueError(f"parity must be even or odd, got {self.parity!r}")
        if self.exterior is None:
            object.__setattr__(self, "exterior", self.parity == "odd")

    @property
    def odd(self) -> bool:
        return self.parity == "odd"

    @property
    def label(self) -> str:
        return self.display or self.name


@dataclass(frozen=True)
class AlgebraPresentation:
    prime: int
    generators: tuple
    truncation: int
    coefficients: str = FP
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        if self.coefficients not in (FP, INTEGRAL):
            raise ValueError(f"unknown coefficient mode {self.coefficients!r}")
        if self.prime > 2:
            for g in self.generators:
                if g.odd and not g.exterior:
                    raise ValueError(f"odd generator {g.name} must be exterior at odd p")

    # -- lookups ----------------------------------------------------------
    @property
    def ngens(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        for i, g in enumerate(self.generators):
            if g.name == name:
                return i
        raise UnknownGenerator(f"{name!r} is not a generator of {self.name or 'presentation'}")

    def has(self, name: str) -> bool:
        return any(g.name == name for g in self.generators)

    def generator(self, name: str) -> GeneratorSpec:
        return self.generators[self.index(name)]

    def degree(self, mono: Monomial) -> int:
        return sum(e * g.degree for e, g in zip(mono, self.generators))

    def is_odd(self, mono: Monomial) -> bool:
        return sum(e for e, g in zip(mono, self.generators) if g.odd) % 2 == 1

    def unit_monomial(self) -> Monomial:
        return (0,) * self.ngens

    def gen_monomial(self, name: str, exp: int = 1) -> Monomial:
        m = [0] * self.ngens
        m[self.index(name)] = exp
        return tuple(m)

    def reduce_coeff(self, c: int) -> int:
        return c % self.prime if self.coefficients == FP else c

    # -- multiplication ---------------------------------------------------
    def multiply_monomials(self, a: Monomial, b: Monomial) -> tuple[int, Monomial] | None:
        """Return (sign, a*b) or None when the product vanishes."""
        out = []
        for i, (x, y) in enumerate(zip(a, b)):
            e = x + y
            if e > 1 and self.generators[i].exterior:
                return None
            out.append(e)
        sign = 1
        if self.prime != 2:
            # move each odd factor of b left past the odd factors of a with larger index
            swaps = 0
            odd_a_after = 0
            for i in reversed(range(self.ngens)):
                g = self.generators[i]
                if not g.odd:
                    continue
                swaps += b[i] * odd_a_after
                odd_a_after += a[i]
            if swaps % 2:
                sign = -1
        return sign, tuple(out)

    # -- element constructors --------------------------------------------
    def element(self, terms: Mapping | None = None) -> "AlgebraElement":
        return AlgebraElement(self, dict(terms or {}))

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {self.unit_monomial(): 1})

    def scalar(self, c: int) -> "AlgebraElement":
        return AlgebraElement(self, {self.unit_monomial(): c})

    def gen(self, name: str, exp: int = 1) -> "AlgebraElement":
        return AlgebraElement(self, {self.gen_monomial(name, exp): 1})

    def monomial(self, mono: Monomial, coeff: int = 1) -> "AlgebraElement":
        return AlgebraElement(self, {tuple(mono): coeff})

    def parse(self, text: str) -> "AlgebraElement":
        return parse_element(self, text)

    def format_monomial(self, mono: Monomial, ascii_safe: bool = True) -> str:
        parts = []
        for e, g in zip(mono, self.generators):
            if not e:
                continue
            label = g.name if ascii_safe else g.label
            parts.append(label if e == 1 else f"{label}^{e}")
        if not parts:
            return "1"
        return "*".join(parts) if ascii_safe else "".join(parts)

    def with_truncation(self, n: int) -> "AlgebraPresentation":
        return AlgebraPresentation(self.prime, self.generators, n, self.coefficients, self.name)

    def reduced_mod_p(self) -> "AlgebraPresentation":
        return AlgebraPresentation(self.prime, self.generators, self.truncation, FP, self.name)


class AlgebraElement:
    """Finite linear combination of monomials of one presentation."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres: AlgebraPresentation, terms: Mapping):
        self.pres = pres
        clean = {}
        for mono, c in terms.items():
            mono = tuple(mono)
            if len(mono) != pres.ngens:
                raise ValueError("monomial length does not match presentation")
            if any(e > 1 for e, g in zip(mono, pres.generators) if g.exterior):
                continue
            c = pres.reduce_coeff(c)
            if c:
                clean[mono] = c
        self.terms = clean

    def _check(self, other: "AlgebraElement") -> None:
        if not isinstance(other, AlgebraElement) or other.pres != self.pres:
            raise MixedPresentation("elements belong to different presentations")

    def __add__(self, other):
        self._check(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc.get(m, 0) + c
        return AlgebraElement(self.pres, acc)

    def __neg__(self):
        return AlgebraElement(self.pres, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> "AlgebraElement":
        return AlgebraElement(self.pres, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        acc: dict = {}
        mul = self.pres.multiply_monomials
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                res = mul(m1, m2)
                if res is None:
                    continue
                sign, m = res
                acc[m] = acc.get(m, 0) + sign * c1 * c2
        return AlgebraElement(self.pres, acc)

    __rmul__ = scale

    def __pow__(self, n: int) -> "AlgebraElement":
        out = self.pres.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.pres.scalar(other)
        return isinstance(other, AlgebraElement) and self.pres == other.pres and self.terms == other.terms

    def __hash__(self):
        return hash((self.pres, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {self.pres.degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int | None:
        """Internal degree of a homogeneous element (None for zero)."""
        ds = self.degrees()
        if len(ds) > 1:
            raise ValueError(f"{self} is not homogeneous")
        return next(iter(ds), None)

    def coefficient(self, mono: Monomial) -> int:
        return self.terms.get(tuple(mono), 0)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda mc: (self.pres.degree(mc[0]), tuple(-e for e in mc[0])))

    def format(self, ascii_safe: bool = True) -> str:
        if not self.terms:
            return "0"
        p = self.pres.prime
        out = []
        for mono, c in self.sorted_terms():
            if self.pres.coefficients == FP and c > p // 2 and p > 2:
                c -= p
            body = self.pres.format_monomial(mono, ascii_safe)
            neg = c < 0
            c = abs(c)
            if body == "1":
                text = str(c)
            elif c == 1:
                text = body
            else:
                text = f"{c}*{body}" if ascii_safe else f"{c}{body}"
            out.append(("- " if neg else "+ ") + text)
        s = " ".join(out)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"AlgebraElement({self.format()})"


_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(\d+))?$")


def parse_element(pres: AlgebraPresentation, text: str) -> AlgebraElement:
    """Parse ``term (+ term)*`` with ``term = coeff? gen(^exp)? (* gen(^exp)?)*``."""
    text = text.strip()
    if not text:
        raise ParseError("empty element string")
    if text[0] not in "+-":
        text = "+" + text
    pieces = _TERM_SPLIT.split(text)[1:]
    out = pres.zero()
    for sign, body in zip(pieces[::2], pieces[1::2]):
        body = body.strip()
        if not body:
            raise ParseError(f"dangling sign in {text!r}")
        m = re.match(r"^(\d+)\s*\*?\s*(.*)$", body)
        coeff = 1
        if m:
            coeff = int(m.group(1))
            body = m.group(2).strip()
        term = pres.scalar(coeff)
        if body:
            for factor in body.split("*"):
                fm = _FACTOR.match(factor.strip())
                if not fm:
                    raise ParseError(f"cannot parse factor {factor!r} in {text!r}")
                exp = int(fm.group(2) or 1)
                term = term * pres.gen(fm.group(1), exp)
        out = out + (term if sign == "+" else -term)
    return out


@lru_cache(maxsize=None)
def _monomials(gens: tuple, n: int) -> tuple:
    """Exponent tuples of total degree n, first generator's exponent descending."""
    if not gens:
        return ((),) if n == 0 else ()
    (deg, ext), rest = gens[0], gens[1:]
    if deg == 0 and not ext:
        raise ValueError("polynomial generator of degree 0 has an infinite basis")
    top = 1 if ext else (n // deg if deg else 0)
    if deg == 0:
        top = 1
    out = []
    for e in range(top, -1, -1):
        r = n - e * deg
        if r < 0:
            continue
        out.extend((e,) + tail for tail in _monomials(rest, r))
    return tuple(out)


def basis_in_degree(pres: AlgebraPresentation, n: int) -> list:
    if n > pres.truncation:
        raise BeyondTruncation(f"degree {n} exceeds truncation {pres.truncation}")
    if n < 0:
        return []
    return list(_monomials(tuple((g.degree, bool(g.exterior)) for g in pres.generators), n))


@dataclass(frozen=True)
class ModulePresentation:
    """A module over ``base`` whose underlying F_p-algebra is ``carrier``.

    Each base generator acts by multiplication with a fixed carrier element;
    generators missing from ``action`` act as zero, and the integer p always
    acts as zero.
    """
    base: AlgebraPresentation
    carrier: AlgebraPresentation
    action: tuple = ()    # ((generator name, AlgebraElement), ...)
    name: str = ""

    def __post_init__(self):
        items = tuple(sorted(dict(self.action).items()))
        for g, elt in items:
            deg = self.base.generator(g).degree
            if elt.pres != self.carrier:
                raise MixedPresentation(f"action of {g} is not a carrier element")
            if elt and (not elt.is_homogeneous() or elt.degree != deg):
                raise ValueError(f"action of {g} must be homogeneous of degree {deg}")
        object.__setattr__(self, "action", items)

    @classmethod
    def trivial(cls, base: AlgebraPresentation, carrier: AlgebraPresentation | None = None,
                name: str = "") -> "ModulePresentation":
        if carrier is None:
            carrier = AlgebraPresentation(base.prime, (), base.truncation, FP, "F_%d" % base.prime)
        return cls(base, carrier, (), name or carrier.name)

    @property
    def action_map(self) -> dict:
        return dict(self.action)

    def is_trivial(self) -> bool:
        return all(e.is_zero() for _, e in self.action)

    def action_of(self, ring_gen: str) -> AlgebraElement:
        self.base.index(ring_gen)
        return self.action_map.get(ring_gen, self.carrier.zero())

    def act_monomial(self, mono: Monomial, x: AlgebraElement) -> AlgebraElement:
        """Action of a base monomial (integer coefficient 1) on x."""
        out = x
        for e, g in zip(mono, self.base.generators):
            for _ in range(e):
                out = self.action_of(g.name) * out
        return out

    def act_element(self, r: AlgebraElement, x: AlgebraElement) -> AlgebraElement:
        """Action of an arbitrary base element; coefficients are reduced mod p."""
        if r.pres.generators != self.base.generators:
            raise MixedPresentation("ring element from another presentation")
        out = self.carrier.zero()
        for mono, c in r.terms.items():
            if c % self.carrier.prime:
                out = out + self.act_monomial(mono, x).scale(c)
        return out


def act(m: ModulePresentation, ring_gen: str, x: AlgebraElement) -> AlgebraElement:
    if not m.base.has(ring_gen):
        raise UnknownGenerator(f"{ring_gen!r} is not a generator of the base ring")
    if x.pres != m.carrier:
        raise MixedPresentation("x is not an element of the module carrier")
    return m.action_of(ring_gen) * x


@dataclass(frozen=True)
class ModuleMap:
    """``x -> scalar * h(x)`` where h is the carrier algebra map given on generators."""
    source: ModulePresentation
    target: ModulePresentation
    images: tuple = ()   # ((carrier generator, target carrier element), ...)
    scalar: int = 1

    def __post_init__(self):
        imgs = dict(self.images)
        for g in self.source.carrier.generators:
            img = imgs.get(g.name, self.target.carrier.zero())
            if img.pres != self.target.carrier:
                raise MixedPresentation(f"image of {g.name} is not in the target carrier")
            if img and (not img.is_homogeneous() or img.degree != g.degree):
                raise ValueError(f"image of {g.name} must be homogeneous of degree {g.degree}")
            imgs[g.name] = img
        object.__setattr__(self, "images", tuple(sorted(imgs.items())))
        if self.source.base.generators != self.target.base.generators:
            raise ValueError("module map between modules over different rings")
        for g in self.source.base.generators:
            lhs = self._hom(self.source.action_of(g.name))
            rhs = self.target.action_of(g.name)
            if lhs != rhs:
                raise ValueError(f"carrier map does not commute with the action of {g.name}")

    def _hom(self, x: AlgebraElement) -> AlgebraElement:
        imgs = dict(self.images)
        tgt = self.target.carrier
        out = tgt.zero()
        for mono, c in x.terms.items():
            term = tgt.scalar(c)
            for e, g in zip(mono, self.source.carrier.generators):
                if e:
                    term = term * (imgs[g.name] ** e)
            out = out + term
        return out

    def apply(self, x: AlgebraElement) -> AlgebraElement:
        return self._hom(x).scale(self.scalar)

    def compose(self, first: "ModuleMap") -> "ModuleMap":
        """self after first."""
        if first.target != self.source:
            raise ValueError("maps are not composable")
        imgs = {g.name: self._hom(dict(first.images)[g.name]) for g in first.source.carrier.generators}
        return ModuleMap(first.source, self.target, tuple(imgs.items()),
                         (self.scalar * first.scalar) % self.target.carrier.prime)

    @classmethod
    def identity(cls, m: ModulePresentation) -> "ModuleMap":
        return cls(m, m, tuple((g.name, m.carrier.gen(g.name)) for g in m.carrier.generators))

    @classmethod
    def reduction(cls, m: ModulePresentation, target: ModulePresentation) -> "ModuleMap":
        """Kill every positive-degree carrier generator (augmentation)."""
        return cls(m, target, tuple((g.name, target.carrier.zero()) for g in m.carrier.generators))


# -- descriptor ingestion ---------------------------------------------------

def _load_mapping(source) -> dict:
    if isinstance(source, Mapping):
        return dict(source)
    path = Path(source)
    text = path.read_text()
    if path.suffix == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError:  # Python < 3.11
            import tomli as tomllib
        return tomllib.loads(text)
    return json.loads(text)


def _generators_from(items: Iterable[Mapping]) -> tuple:
    return tuple(GeneratorSpec(g["name"], int(g["degree"]), g.get("parity", ""),
                               g.get("exterior"), g.get("display", "")) for g in items)


def presentation_from_dict(d) -> AlgebraPresentation:
    d = _load_mapping(d)
    return AlgebraPresentation(int(d["prime"]), _generators_from(d.get("generators", [])),
                               int(d.get("truncation", 24)), d.get("coefficients", FP),
                               d.get("name", ""))


def module_from_dict(d, base: AlgebraPresentation | None = None) -> ModulePresentation:
    """Read ``{prime, truncation, generators, module: {carrier, action}}``."""
    d = _load_mapping(d)
    if base is None:
        base = presentation_from_dict(d)
    mod = d.get("module", {})
    carrier_d = dict(mod.get("carrier", {}))
    carrier_d.setdefault("prime", base.prime)
    carrier_d.setdefault("truncation", base.truncation)
    carrier = presentation_from_dict(carrier_d)
    action = tuple((g, carrier.parse(s)) for g, s in mod.get("action", {}).items())
    return ModulePresentation(base, carrier, action, mod.get("name", carrier.name))


def presentation_to_dict(pres: AlgebraPresentation) -> dict:
    return {
        "name": pres.name,
        "prime": pres.prime,
        "truncation": pres.truncation,
        "coefficients": pres.coefficients,
        "generators": [{"name": g.name, "degree": g.degree, "parity": g.parity,
                        "exterior": bool(g.exterior), "display": g.display}
                       for g in pres.generators],
    }
