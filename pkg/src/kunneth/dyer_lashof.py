"""Dyer-Lashof operations on the dual Steenrod algebra and on exterior tables.

Only three sources of information are used: Steinberger's generator
formulas, the instability rules, and the Cartan formula.  Anything not
reachable from these is *unknown* (``None``) rather than guessed; a Cartan
expansion that needs an unknown value with a nonzero cofactor raises
:class:`IncompleteActionData`.

Degree conventions: at p = 2, |Q^s x| = |x| + s; at odd p,
|Q^s x| = |x| + 2s(p-1) and |betaQ^s x| = |x| + 2s(p-1) - 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import IncompleteActionData, TruncationExceeded, UnknownAction
from .graded import AlgebraElement, AlgebraPresentation
from .steenrod import dual_steenrod

Q, BETA_Q = "Q", "betaQ"


def rho(i: int, p: int) -> int:
    return (p**i - 1) // (p - 1)


@dataclass(frozen=True, order=True)
class DLOperation:
    kind: str
    superscript: int

    def __post_init__(self):
        if self.kind not in (Q, BETA_Q):
            raise ValueError(f"unknown operation kind {self.kind!r}")
        if self.superscript < 0:
            raise ValueError("negative superscript")

    def degree_shift(self, p: int) -> int:
        if p == 2:
            if self.kind != Q:
                raise ValueError("betaQ is not used at p = 2")
            return self.superscript
        shift = 2 * self.superscript * (p - 1)
        return shift - 1 if self.kind == BETA_Q else shift

    def __str__(self):
        return f"{'' if self.kind == Q else 'beta'}Q^{self.superscript}"

    @classmethod
    def parse(cls, text: str) -> "DLOperation":
        text = text.strip()
        kind = BETA_Q if text.startswith("beta") else Q
        body = text[4:] if kind == BETA_Q else text
        if not body.startswith("Q"):
            raise ValueError(f"cannot parse operation {text!r}")
        return cls(kind, int(body[1:].lstrip("^")))


@dataclass(frozen=True)
class SignedResult:
    element: object          # AlgebraElement, or a label string in tables
    sign_known: bool
    provenance: str = ""


def instability(op: DLOperation, degree: int, p: int) -> str | None:
    """'zero', 'power' or None when the instability rules say nothing."""
    s = op.superscript
    if degree == 0:
        # Q^0 acts as the identity only in degree zero
        if op.kind == Q and s == 0:
            return "identity"
        return "zero"
    if p == 2:
        if s < degree:
            return "zero"
        if s == degree:
            return "power"
        return None
    if op.kind == Q:
        if 2 * s < degree:
            return "zero"
        if 2 * s == degree:
            return "power"
        return None
    if 2 * s <= degree:
        return "zero"
    return None


def steinberger_rules(name: str, p: int, max_degree: int) -> list:
    """All (operation, target generator, sign) produced by the generator formulas.

    ``name`` is a conjugate-basis generator (``xib<i>`` or ``taub<i>``).
    At p = 2:  Q^{2^i-2} xib1 = xib_i (i >= 2) and Q^{2^i} xib_i = xib_{i+1}.
    At odd p, with tau_0 = -taub0:
      Q^{rho(i)} taub0 = -(-1)^i taub_i,  betaQ^{rho(i)} taub0 = -(-1)^i xib_i,
      Q^{p^{i-1}} taub_{i-1} = taub_i,    Q^{p^i} xib_i = xib_{i+1}.
    The i = 1 case Q^0 xib1 at p = 2 contradicts instability and is omitted.
    """
    out = []

    def deg_ok(op, src_deg):
        return src_deg + op.degree_shift(p) <= max_degree

    if p == 2:
        if not name.startswith("xib"):
            raise UnknownAction(f"{name} is not a conjugate generator")
        i = int(name[3:])
        src = 2**i - 1
        if i == 1:
            j = 2
            while True:
                op = DLOperation(Q, 2**j - 2)
                if not deg_ok(op, src):
                    break
                out.append((op, f"xib{j}", 1))
                j += 1
        else:
            op = DLOperation(Q, 2**i)
            if deg_ok(op, src):
                out.append((op, f"xib{i + 1}", 1))
        return out
    if name.startswith("taub"):
        k = int(name[4:])
        src = 2 * p**k - 1
        if k == 0:
            i = 1
            while True:
                op = DLOperation(Q, rho(i, p))
                if not deg_ok(op, src):
                    break
                out.append((op, f"taub{i}", -((-1) ** i)))
                bop = DLOperation(BETA_Q, rho(i, p))
                if deg_ok(bop, src):
                    out.append((bop, f"xib{i}", -((-1) ** i)))
                i += 1
        else:
            op = DLOperation(Q, p**k)
            if deg_ok(op, src):
                out.append((op, f"taub{k + 1}", 1))
        return out
    if name.startswith("xib"):
        i = int(name[3:])
        op = DLOperation(Q, p**i)
        if deg_ok(op, 2 * p**i - 2):
            out.append((op, f"xib{i + 1}", 1))
        return out
    raise UnknownAction(f"{name} is not a conjugate generator")


class DLEngine:
    """Dyer-Lashof operations on the conjugate-basis dual Steenrod algebra."""

    def __init__(self, p: int, truncation: int):
        self.p = p
        self.truncation = truncation
        self.pres = dual_steenrod(p, truncation, conjugate=True)
        self._memo: dict = {}

    def _gen_value(self, op: DLOperation, name: str):
        g = self.pres.generator(name)
        x = self.pres.gen(name)
        rule = instability(op, g.degree, self.p)
        if rule == "zero":
            return self.pres.zero()
        if rule == "power":
            return x ** self.p
        for rop, target, sign in steinberger_rules(name, self.p, self.truncation):
            if rop == op:
                return self.pres.gen(target).scale(sign)
        return None

    def steinberger(self, op: DLOperation, name: str) -> SignedResult:
        """Value on a single generator; accepts Milnor names xi1 (p=2) / tau0 (odd p) too."""
        sign = 1
        if self.p == 2 and name == "xi1":
            name = "xib1"
        elif self.p > 2 and name == "tau0":
            name, sign = "taub0", -1
        if not self.pres.has(name):
            raise UnknownAction(f"{name} is not a generator within degree {self.truncation}")
        target_deg = self.pres.generator(name).degree + op.degree_shift(self.p)
        if target_deg > self.truncation:
            raise TruncationExceeded(f"{op}({name}) lands in degree {target_deg}")
        val = self._gen_value(op, name)
        if val is None:
            raise UnknownAction(f"no rule determines {op}({name})")
        return SignedResult(val.scale(sign), self.p == 2, "steinberger")

    def q(self, op: DLOperation, x: AlgebraElement, prune: Callable | None = None):
        """op(x) or None when unknown.  ``prune(monomial)`` may declare terms irrelevant."""
        out = self.pres.zero()
        for mono, c in x.terms.items():
            if prune is not None and prune(mono):
                continue
            v = self._q_monomial(op, mono)
            if v is None:
                return None
            out = out + v.scale(c)
        return out

    def _q_monomial(self, op: DLOperation, mono: tuple):
        key = (op, mono)
        if key in self._memo:
            return self._memo[key]
        val = self._compute_monomial(op, mono)
        self._memo[key] = val
        return val

    def _compute_monomial(self, op: DLOperation, mono: tuple):
        pres, p = self.pres, self.p
        deg = pres.degree(mono)
        if deg + op.degree_shift(p) > self.truncation:
            raise TruncationExceeded(f"{op} on degree {deg} exceeds truncation {self.truncation}")
        x = pres.monomial(mono)
        rule = instability(op, deg, p)
        if rule == "zero":
            return pres.zero()
        if rule == "identity":
            return x
        if rule == "power":
            return x ** p
        support = [i for i, e in enumerate(mono) if e]
        if len(support) == 1 and mono[support[0]] == 1:
            return self._gen_value(op, pres.generators[support[0]].name)
        if op.kind != Q:
            return None
        # a p-th power: Q^s(y^p) = (Q^{s/p} y)^p, zero unless p | s
        if len(support) == 1 and mono[support[0]] % p == 0:
            if op.superscript % p:
                return pres.zero()
            root = list(mono)
            root[support[0]] //= p
            inner = self._q_monomial(DLOperation(Q, op.superscript // p), tuple(root))
            return None if inner is None else inner ** p
        # split off one factor and apply the Cartan formula
        i = support[0]
        first = [0] * len(mono)
        if len(support) == 1:
            first[i] = 1
        else:
            first[i] = mono[i]
        rest = tuple(e - f for e, f in zip(mono, first))
        return cartan_expand(op.superscript, [tuple(first), rest],
                             lambda s, m: self._q_monomial(DLOperation(Q, s), m),
                             lambda m: pres.monomial(m), pres.degree, p)


def cartan_expand(n: int, factors: list, value: Callable, as_element: Callable,
                  degree: Callable, p: int):
    """Q^n(x_1 ... x_k) = sum over a_1 + ... + a_k = n of prod Q^{a_j}(x_j).

    ``value(a, x)`` returns an element, or None when unknown.  Terms with a
    known-zero factor are dropped; an unknown factor with a nonzero cofactor
    raises IncompleteActionData.
    """
    if not factors:
        return None
    if len(factors) == 1:
        return value(n, factors[0])
    x, rest = factors[0], factors[1:]
    total = None
    for a in range(n + 1):
        # instability: Q^a x = 0 below the threshold
        if (p == 2 and a < degree(x)) or (p > 2 and 2 * a < degree(x)):
            continue
        left = value(a, x)
        if left is not None and left.is_zero():
            continue
        right = cartan_expand(n - a, rest, value, as_element, degree, p)
        if right is not None and right.is_zero():
            continue
        if left is None or right is None:
            raise IncompleteActionData(f"Cartan expansion of Q^{n} needs an unknown value (split {a}+{n - a})")
        term = left * right
        total = term if total is None else total + term
    if total is None:
        zero = as_element(x) * 0
        return zero
    return total


def cartan_expand_checked(n: int, factors: list, value: Callable, as_element: Callable,
                          degree: Callable, p: int) -> SignedResult:
    """Wrapper returning a SignedResult; unknown action data surfaces as an exception."""
    res = cartan_expand(n, factors, value, as_element, degree, p)
    if res is None:
        raise IncompleteActionData(f"Q^{n} on a single factor with unknown value")
    return SignedResult(res, p == 2, "cartan")


def exterior_presentation(labels: list, degrees: list, p: int, truncation: int) -> AlgebraPresentation:
    """Exterior algebra on bar classes, generator i named ``e<i>``."""
    from .graded import GeneratorSpec
    gens = tuple(GeneratorSpec(f"e{i}", d, "odd", True, lab)
                 for i, (lab, d) in enumerate(zip(labels, degrees)))
    return AlgebraPresentation(p, gens, truncation, name="E")
