"""The dual Steenrod algebra in the Milnor basis.

At p = 2 it is F_2[xi_1, xi_2, ...] with |xi_i| = 2^i - 1; at odd p it is
F_p[xi_1, ...] ⊗ E(tau_0, tau_1, ...) with |xi_i| = 2p^i - 2 and
|tau_i| = 2p^i - 1.  Generators are materialized up to a degree bound.

The conjugation is computed two ways: from the antipode recursion forced by
the coproduct, and from the closed sum over compositions.  The recursion is
treated as authoritative.
"""
from __future__ import annotations

from functools import lru_cache

from .errors import TruncationExceeded
from .graded import FP, AlgebraElement, AlgebraPresentation, GeneratorSpec

_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def xi_degree(i: int, p: int) -> int:
    return 2**i - 1 if p == 2 else 2 * p**i - 2


def tau_degree(i: int, p: int) -> int:
    if p == 2:
        raise ValueError("no tau generators at p = 2")
    return 2 * p**i - 1


@lru_cache(maxsize=None)
def dual_steenrod(p: int, truncation: int, conjugate: bool = False) -> AlgebraPresentation:
    """Presentation with xi_i (then tau_i at odd p) of degree <= truncation.

    With ``conjugate=True`` the generators are named ``xib<i>``/``taub<i>``
    and stand for the conjugates; the underlying algebra is the same.
    """
    bar = "b" if conjugate else ""
    mac = "̄" if conjugate else ""
    gens = []
    i = 1
    while xi_degree(i, p) <= truncation:
        gens.append(GeneratorSpec(f"xi{bar}{i}", xi_degree(i, p),
                                  "odd" if p == 2 else "even", False,
                                  f"ξ{mac}{str(i).translate(_SUB)}"))
        i += 1
    if p > 2:
        i = 0
        while tau_degree(i, p) <= truncation:
            gens.append(GeneratorSpec(f"tau{bar}{i}", tau_degree(i, p), "odd", True,
                                      f"τ{mac}{str(i).translate(_SUB)}"))
            i += 1
    name = f"A_*(p={p}){' conjugate basis' if conjugate else ''}"
    return AlgebraPresentation(p, tuple(gens), truncation, FP, name)


class DualSteenrod:
    """Hopf algebra structure on :func:`dual_steenrod`."""

    def __init__(self, p: int, truncation: int):
        self.p = p
        self.truncation = truncation
        self.pres = dual_steenrod(p, truncation)
        self._chi_gen: dict = {}

    # -- generators -------------------------------------------------------
    def xi(self, i: int) -> AlgebraElement:
        if i == 0:
            return self.pres.one()
        self._check_degree(xi_degree(i, self.p))
        return self.pres.gen(f"xi{i}")

    def tau(self, i: int) -> AlgebraElement:
        self._check_degree(tau_degree(i, self.p))
        return self.pres.gen(f"tau{i}")

    def _check_degree(self, d: int) -> None:
        if d > self.truncation:
            raise TruncationExceeded(f"degree {d} exceeds truncation {self.truncation}")

    def parse(self, text: str) -> AlgebraElement:
        return self.pres.parse(text)

    # -- algebra maps -----------------------------------------------------
    def apply_algebra_map(self, x: AlgebraElement, images: dict,
                          target: AlgebraPresentation | None = None) -> AlgebraElement:
        """Evaluate the algebra map sending generator name -> images[name]."""
        target = target or self.pres
        out = target.zero()
        for mono, c in x.terms.items():
            term = target.scalar(c)
            for e, g in zip(mono, x.pres.generators):
                if e:
                    term = term * (images[g.name] ** e)
            out = out + term
        return out

    # -- coproduct --------------------------------------------------------
    def _tensor_mul(self, a: dict, b: dict) -> dict:
        pres = self.pres
        out: dict = {}
        for (a1, a2), c in a.items():
            for (b1, b2), d in b.items():
                r1 = pres.multiply_monomials(a1, b1)
                r2 = pres.multiply_monomials(a2, b2)
                if r1 is None or r2 is None:
                    continue
                sign = r1[0] * r2[0]
                if self.p > 2 and pres.is_odd(a2) and pres.is_odd(b1):
                    sign = -sign
                key = (r1[1], r2[1])
                out[key] = (out.get(key, 0) + sign * c * d) % self.p
        return {k: v for k, v in out.items() if v}

    def _gen_coproduct(self, name: str) -> dict:
        pres = self.pres
        one = pres.unit_monomial()

        def mono(x: AlgebraElement):
            (m, _), = x.terms.items()
            return m

        if name.startswith("xi"):
            n = int(name[2:])
            out = {}
            for i in range(n + 1):
                left = mono(self.xi(n - i) ** (self.p**i))
                right = mono(self.xi(i))
                out[(left, right)] = (out.get((left, right), 0) + 1) % self.p
            return out
        n = int(name[3:])
        out = {(mono(self.tau(n)), one): 1}
        for i in range(n + 1):
            out[(mono(self.xi(n - i) ** (self.p**i)), mono(self.tau(i)))] = 1
        return out

    def coproduct(self, x: AlgebraElement) -> dict:
        """psi(x) as {(left monomial, right monomial): coefficient}."""
        for d in x.degrees():
            self._check_degree(d)
        pres = self.pres
        one = pres.unit_monomial()
        total: dict = {}
        for mono, c in x.terms.items():
            acc = {(one, one): 1}
            for e, g in zip(mono, pres.generators):
                for _ in range(e):
                    acc = self._tensor_mul(acc, self._gen_coproduct(g.name))
            for k, v in acc.items():
                total[k] = (total.get(k, 0) + c * v) % self.p
        return {k: v for k, v in total.items() if v}

    def tensor_to_elements(self, t: dict) -> list:
        return [(self.pres.monomial(a, c), self.pres.monomial(b)) for (a, b), c in t.items()]

    # -- conjugation ------------------------------------------------------
    def chi_generator(self, name: str) -> AlgebraElement:
        """Antipode on a generator from sum_i xi_{n-i}^{p^i} chi(xi_i) = 0 (and its tau analogue)."""
        if name in self._chi_gen:
            return self._chi_gen[name]
        pres = self.pres
        if name.startswith("xi"):
            n = int(name[2:])
            acc = pres.zero()
            for i in range(n):
                acc = acc + (self.xi(n - i) ** (self.p**i)) * (self.chi_generator(f"xi{i}") if i else pres.one())
            res = -acc
        else:
            n = int(name[3:])
            acc = self.tau(n)
            for i in range(n):
                acc = acc + (self.xi(n - i) ** (self.p**i)) * self.chi_generator(f"tau{i}")
            res = -acc
        self._chi_gen[name] = res
        return res

    def conjugate(self, x: AlgebraElement) -> AlgebraElement:
        images = {g.name: self.chi_generator(g.name) for g in self.pres.generators}
        return self.apply_algebra_map(x, images)

    def is_decomposable(self, x: AlgebraElement) -> bool:
        """Every monomial is a product of at least two positive-degree generators."""
        return all(sum(m) >= 2 for m in x.terms)

    def to_conjugate_basis(self, x: AlgebraElement) -> AlgebraElement:
        """Rewrite x as a polynomial in the conjugate generators."""
        cpres = dual_steenrod(self.p, self.truncation, conjugate=True)
        return AlgebraElement(cpres, self.conjugate(x).terms)

    def from_conjugate_basis(self, y: AlgebraElement) -> AlgebraElement:
        return self.conjugate(AlgebraElement(self.pres, y.terms))


def conjugate_recursive(x: AlgebraElement, truncation: int | None = None) -> AlgebraElement:
    p = x.pres.prime
    A = DualSteenrod(p, truncation if truncation is not None else x.pres.truncation)
    return A.conjugate(AlgebraElement(A.pres, x.terms))


def compositions(n: int):
    """Ordered partitions of n."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            yield (first,) + rest


def conjugate_compositions(i: int, p: int, truncation: int | None = None) -> AlgebraElement:
    """sum over compositions a of i of (-1)^len(a) prod_n xi_{a_n}^{p^(a_1+...+a_{n-1})}.

    At p = 2 the sign is irrelevant.
    """
    if i < 1:
        raise ValueError("i must be >= 1")
    A = DualSteenrod(p, truncation if truncation is not None else xi_degree(i, p))
    out = A.pres.zero()
    for alpha in compositions(i):
        term = A.pres.scalar((-1) ** len(alpha))
        before = 0
        for part in alpha:
            term = term * (A.xi(part) ** (p**before))
            before += part
        out = out + term
    return out


def is_decomposable_difference(i: int, p: int = 2, kind: str = "xi") -> bool:
    """Whether chi(g_i) minus its leading term is decomposable.

    The leading term is xi_i at p = 2 and -xi_i (resp. -tau_i) at odd p,
    since the length-one composition carries the sign -1.
    """
    if kind == "xi":
        d = xi_degree(i, p)
        A = DualSteenrod(p, d)
        g = A.xi(i)
    else:
        d = tau_degree(i, p)
        A = DualSteenrod(p, d)
        g = A.tau(i)
    lead = g if p == 2 else -g
    return A.is_decomposable(A.conjugate(g) - lead)
