"""Lifting module maps through free resolutions, and chain homotopies between lifts.

A free module over the graded F_p-algebra R is described by its generator
degrees.  A homogeneous R-linear map between free modules is a "ring matrix":
one row per source generator, holding the image as a tuple of ring elements
in the target coordinates.  Everything is solved after expanding into F_p
bases one internal degree at a time, using leftmost pivots and zero free
variables so that lifts are canonical unless an ``rng`` is supplied.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

from . import fplinear as fl
from .errors import KunnethError, MixedPresentation, NotExact, TruncationExceeded
from .graded import (FP, AlgebraElement, AlgebraPresentation, GeneratorSpec,
                     ModuleMap, ModulePresentation, _load_mapping, basis_in_degree,
                     presentation_from_dict, presentation_to_dict)

RingMatrix = tuple  # tuple (per source generator) of tuples of AlgebraElement


@dataclass(frozen=True)
class FreeResolution:
    ring: AlgebraPresentation
    terms: tuple            # terms[i] = generator degrees of F_i
    differentials: tuple    # differentials[i]: F_{i+1} -> F_i as a RingMatrix
    augmentation: tuple     # carrier elements, one per generator of F_0
    module: ModulePresentation
    name: str = ""

    def __post_init__(self):
        if self.ring.coefficients != FP:
            raise KunnethError("resolutions are handled over F_p coefficient rings")
        if self.module.base.generators != self.ring.generators:
            raise MixedPresentation("module is over a different ring")
        if len(self.differentials) != max(len(self.terms) - 1, 0):
            raise ValueError("need one differential between consecutive terms")
        if self.terms and len(self.augmentation) != len(self.terms[0]):
            raise ValueError("augmentation needs one image per generator of F_0")
        for i, d in enumerate(self.differentials):
            _check_ring_matrix(d, self.terms[i + 1], self.terms[i], self.ring)
        for e, deg in zip(self.augmentation, self.terms[0] if self.terms else ()):
            if e.pres != self.module.carrier:
                raise MixedPresentation("augmentation image outside the module carrier")
            if e and e.degree != deg:
                raise ValueError("augmentation must preserve degree")

    @property
    def length(self) -> int:
        return len(self.terms)

    @property
    def p(self) -> int:
        return self.ring.prime

    def rank(self, i: int) -> int:
        return len(self.terms[i]) if 0 <= i < len(self.terms) else 0


@dataclass(frozen=True)
class ChainMapLift:
    levels: tuple           # levels[i]: F_i -> G_i as a RingMatrix
    certified: bool = False


@dataclass(frozen=True)
class ChainHomotopy:
    levels: tuple           # levels[i]: F_i -> G_{i+1}
    certified: bool = False


# -- ring-matrix arithmetic ---------------------------------------------------

def _check_ring_matrix(m: RingMatrix, src: Sequence[int], tgt: Sequence[int],
                       ring: AlgebraPresentation) -> None:
    if len(m) != len(src):
        raise ValueError(f"matrix has {len(m)} rows for {len(src)} source generators")
    for row, ds in zip(m, src):
        if len(row) != len(tgt):
            raise ValueError("matrix row length does not match target rank")
        for x, dt in zip(row, tgt):
            if x.pres.generators != ring.generators:
                raise MixedPresentation("matrix entry from another ring")
            if x and x.degree != ds - dt:
                raise ValueError(f"entry {x} has degree {x.degree}, expected {ds - dt}")


def zero_matrix(ring: AlgebraPresentation, nsrc: int, ntgt: int) -> RingMatrix:
    return tuple(tuple(ring.zero() for _ in range(ntgt)) for _ in range(nsrc))


def apply_matrix(m: RingMatrix, v: Sequence[AlgebraElement], ring: AlgebraPresentation,
                 ntgt: int | None = None) -> tuple:
    """Image of the free-module element sum_j v_j g_j."""
    if ntgt is None:
        ntgt = len(m[0]) if m else 0
    out = [ring.zero() for _ in range(ntgt)]
    for vj, row in zip(v, m):
        if not vj:
            continue
        for k, x in enumerate(row):
            if x:
                out[k] = out[k] + vj * x
    return tuple(out)


def compose_matrices(second: RingMatrix, first: RingMatrix, ring: AlgebraPresentation,
                     ntgt: int) -> RingMatrix:
    """second after first."""
    return tuple(apply_matrix(second, row, ring, ntgt) for row in first)


def add_matrices(a: RingMatrix, b: RingMatrix, sign: int = 1) -> RingMatrix:
    return tuple(tuple(x + y.scale(sign) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def matrices_equal(a: RingMatrix, b: RingMatrix) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


# -- degree-wise expansion ----------------------------------------------------

def free_basis(ring: AlgebraPresentation, degrees: Sequence[int], t: int) -> list:
    """F_p basis of a free module in internal degree t: (generator, monomial) pairs."""
    if t > ring.truncation:
        raise TruncationExceeded(f"internal degree {t} beyond ring truncation {ring.truncation}")
    return [(j, m) for j, d in enumerate(degrees) for m in basis_in_degree(ring, t - d)]


def _vector(ring: AlgebraPresentation, degrees: Sequence[int], t: int,
            elt: Sequence[AlgebraElement]) -> tuple:
    basis = free_basis(ring, degrees, t)
    index = {b: i for i, b in enumerate(basis)}
    v = [0] * len(basis)
    for j, x in enumerate(elt):
        for mono, c in x.terms.items():
            v[index[(j, mono)]] = (v[index[(j, mono)]] + c) % ring.prime
    return tuple(v)


def _element(ring: AlgebraPresentation, degrees: Sequence[int], t: int, vec: Sequence[int]) -> tuple:
    out = [ring.zero() for _ in degrees]
    for (j, mono), c in zip(free_basis(ring, degrees, t), vec):
        if c:
            out[j] = out[j] + ring.monomial(mono, c)
    return tuple(out)


def matrix_in_degree(m: RingMatrix, src: Sequence[int], tgt: Sequence[int],
                     ring: AlgebraPresentation, t: int) -> fl.FpMatrix:
    cols = []
    nt = len(tgt)
    for j, mono in free_basis(ring, src, t):
        img = tuple(ring.monomial(mono) * x for x in m[j]) if m else ()
        cols.append(_vector(ring, tgt, t, img if img else (ring.zero(),) * nt))
    return fl.FpMatrix.from_columns(ring.prime, len(free_basis(ring, tgt, t)), cols)


def _carrier_vector(carrier: AlgebraPresentation, t: int, x: AlgebraElement) -> tuple:
    basis = basis_in_degree(carrier, t)
    index = {b: i for i, b in enumerate(basis)}
    v = [0] * len(basis)
    for mono, c in x.terms.items():
        v[index[mono]] = c % carrier.prime
    return tuple(v)


def augmentation_in_degree(res: FreeResolution, t: int) -> fl.FpMatrix:
    carrier = res.module.carrier
    cols = []
    for j, mono in free_basis(res.ring, res.terms[0], t):
        img = res.module.act_element(res.ring.monomial(mono), res.augmentation[j])
        cols.append(_carrier_vector(carrier, t, img))
    return fl.FpMatrix.from_columns(res.p, len(basis_in_degree(carrier, t)), cols)


def _module_map_check(phi: ModuleMap, F: FreeResolution, G: FreeResolution) -> None:
    if phi.source.carrier != F.module.carrier or phi.target.carrier != G.module.carrier:
        raise MixedPresentation("module map does not match the resolved modules")
    if F.ring.generators != G.ring.generators:
        raise MixedPresentation("resolutions over different rings")


# -- lifting ------------------------------------------------------------------

def _solve_with_kernel(m: fl.FpMatrix, rhs: tuple, rng: random.Random | None):
    x = fl.solve(m, rhs)
    if x is None:
        return None
    if rng is not None:
        p = m.p
        for k in fl.kernel_basis(m):
            c = rng.randrange(p)
            if c:
                x = tuple((a + c * b) % p for a, b in zip(x, k))
    return x


def lift_map(phi: ModuleMap, F: FreeResolution, G: FreeResolution,
             rng: random.Random | None = None, levels: int | None = None) -> ChainMapLift:
    """Lift phi: M -> N to f: F -> G level by level.

    Without ``rng`` the lift is canonical; with it, a random kernel element
    is added at each solve, giving an independent lift of the same map.
    """
    _module_map_check(phi, F, G)
    ring = F.ring
    nlev = F.length if levels is None else min(levels, F.length)
    out: list = []
    for i in range(nlev):
        row_list = []
        for j, d in enumerate(F.terms[i]):
            if i == 0:
                rhs = _carrier_vector(G.module.carrier, d, phi.apply(F.augmentation[j]))
                m = augmentation_in_degree(G, d)
            else:
                img = apply_matrix(out[i - 1], F.differentials[i - 1][j], ring, G.rank(i - 1))
                if i >= G.length:
                    if any(img):
                        raise NotExact(f"G stops at level {G.length - 1} but level {i} needs a nonzero lift")
                    row_list.append(())
                    continue
                rhs = _vector(ring, G.terms[i - 1], d, img)
                m = matrix_in_degree(G.differentials[i - 1], G.terms[i], G.terms[i - 1], ring, d)
            x = _solve_with_kernel(m, rhs, rng)
            if x is None:
                raise NotExact(f"no lift at level {i}, internal degree {d}: target resolution is not exact there")
            row_list.append(_element(ring, G.terms[i], d, x))
        out.append(tuple(row_list))
    f = ChainMapLift(tuple(out))
    ok, _, _ = verify_chain_map(f, F, G, phi)
    return ChainMapLift(f.levels, ok)


def verify_chain_map(f: ChainMapLift, F: FreeResolution, G: FreeResolution,
                     phi: ModuleMap) -> tuple:
    """(ok, level, internal degree) of the first failing square; level 0 is the augmentation square."""
    ring = F.ring
    for i, level in enumerate(f.levels):
        for j, d in enumerate(F.terms[i]):
            row = level[j] if j < len(level) else ()
            if i == 0:
                lhs = G.module.carrier.zero()
                for k, x in enumerate(row):
                    if x:
                        lhs = lhs + G.module.act_element(x, G.augmentation[k])
                if lhs != phi.apply(F.augmentation[j]):
                    return False, 0, d
                continue
            # d_G f_i == f_{i-1} d_F on the generator
            lhs = apply_matrix(G.differentials[i - 1], row, ring, G.rank(i - 1)) if row else \
                tuple(ring.zero() for _ in range(G.rank(i - 1)))
            rhs = apply_matrix(f.levels[i - 1], F.differentials[i - 1][j], ring, G.rank(i - 1))
            if any(a != b for a, b in zip(lhs, rhs)):
                return False, i, d
    return True, None, None


def homotopy_between(f: ChainMapLift, g: ChainMapLift, F: FreeResolution,
                     G: FreeResolution) -> ChainHomotopy:
    """H with d_G H_i + H_{i-1} d_F = f_i - g_i at every level."""
    ring = F.ring
    levels = min(len(f.levels), len(g.levels))
    out: list = []
    for i in range(levels):
        nG = G.rank(i)
        D = tuple(tuple(x - y for x, y in zip(fr, gr)) if fr else tuple(ring.zero() for _ in range(nG))
                  for fr, gr in zip(f.levels[i], g.levels[i]))
        rows = []
        for j, d in enumerate(F.terms[i]):
            target = list(D[j]) if D[j] else [ring.zero()] * nG
            if i > 0:
                corr = apply_matrix(out[i - 1], F.differentials[i - 1][j], ring, nG)
                target = [a - b for a, b in zip(target, corr)]
            if i + 1 >= G.length:
                if any(target):
                    raise NotExact(f"G has no level {i + 1} to absorb the difference")
                rows.append(())
                continue
            if not any(target):
                rows.append(tuple(ring.zero() for _ in range(G.rank(i + 1))))
                continue
            m = matrix_in_degree(G.differentials[i], G.terms[i + 1], G.terms[i], ring, d)
            x = fl.solve(m, _vector(ring, G.terms[i], d, target))
            if x is None:
                raise NotExact(f"homotopy solve failed at level {i}, internal degree {d}")
            rows.append(_element(ring, G.terms[i + 1], d, x))
        out.append(tuple(rows))
    H = ChainHomotopy(tuple(out))
    return ChainHomotopy(H.levels, verify_homotopy(H, f, g, F, G))


def verify_homotopy(H: ChainHomotopy, f: ChainMapLift, g: ChainMapLift,
                    F: FreeResolution, G: FreeResolution) -> bool:
    ring = F.ring
    for i in range(len(H.levels)):
        nG = G.rank(i)
        for j in range(len(F.terms[i])):
            fr = f.levels[i][j] or tuple(ring.zero() for _ in range(nG))
            gr = g.levels[i][j] or tuple(ring.zero() for _ in range(nG))
            want = [x - y for x, y in zip(fr, gr)]
            row = H.levels[i][j]
            got = apply_matrix(G.differentials[i], row, ring, nG) if row else \
                tuple(ring.zero() for _ in range(nG))
            if i > 0:
                corr = apply_matrix(H.levels[i - 1], F.differentials[i - 1][j], ring, nG)
                got = tuple(a + b for a, b in zip(got, corr))
            if any(a != b for a, b in zip(got, want)):
                return False
    return True


# -- exactness ------------------------------------------------------------------

def check_exact(res: FreeResolution, t_max: int | None = None) -> tuple:
    """(ok, level, degree): d^2 = 0, epsilon onto, and homology zero in every degree <= t_max.

    The top term is not tested for injectivity, matching a truncated resolution.
    """
    t_max = res.ring.truncation if t_max is None else t_max
    ring = res.ring
    for t in range(t_max + 1):
        eps = augmentation_in_degree(res, t)
        if fl.rank(eps) != eps.rows:
            return False, -1, t
        mats = [matrix_in_degree(d, res.terms[i + 1], res.terms[i], ring, t)
                for i, d in enumerate(res.differentials)]
        prev = eps
        for i, m in enumerate(mats):
            if not (prev @ m).is_zero():
                return False, i, t
            if fl.rank(m) != prev.cols - fl.rank(prev):
                return False, i, t
            prev = m
    return True, None, None


# -- builders -------------------------------------------------------------------

def polynomial_ring(p: int, degrees: Sequence[int], truncation: int,
                    names: Sequence[str] | None = None) -> AlgebraPresentation:
    names = names or [f"y{i + 1}" for i in range(len(degrees))]
    gens = tuple(GeneratorSpec(n, d, "even" if p > 2 else "", False) for n, d in zip(names, degrees))
    return AlgebraPresentation(p, gens, truncation, FP, "R")


def quotient_module(ring: AlgebraPresentation, killed: Sequence[str]) -> ModulePresentation:
    """R/(killed generators) with carrier the polynomial algebra on the survivors."""
    keep = tuple(g for g in ring.generators if g.name not in set(killed))
    carrier = AlgebraPresentation(ring.prime, keep, ring.truncation, FP,
                                  "R/(" + ",".join(killed) + ")")
    action = tuple((g.name, carrier.gen(g.name)) for g in keep)
    return ModulePresentation(ring, carrier, action, carrier.name)


def koszul_resolution(ring: AlgebraPresentation, killed: Sequence[str],
                      module: ModulePresentation | None = None,
                      t_max: int | None = None) -> FreeResolution:
    """Koszul resolution of R/(killed), or of a module on which ``killed`` acts trivially.

    With ``module`` given, F_i is spanned by (carrier basis element m, subset T)
    for all m of degree <= t_max, which resolves the module when the killed
    generators form the whole ring and act by zero.
    """
    idx = list(killed)
    subs = [list(itertools.combinations(range(len(idx)), s)) for s in range(len(idx) + 1)]
    degs = [ring.generator(n).degree for n in idx]
    if module is None:
        module = quotient_module(ring, killed)
        unit = module.carrier.unit_monomial()
        cells = [[(unit, T) for T in level] for level in subs]
    else:
        t_max = ring.truncation if t_max is None else t_max
        monos = [m for t in range(t_max + 1) for m in basis_in_degree(module.carrier, t)]
        cells = [[(m, T) for m in monos for T in level] for level in subs]
    carrier = module.carrier

    def cell_degree(c):
        m, T = c
        return carrier.degree(m) + sum(degs[k] for k in T)

    if t_max is not None:
        cells = [[c for c in level if cell_degree(c) <= t_max] for level in cells]
    aug = tuple(carrier.monomial(m) for m, _ in cells[0])
    terms = tuple(tuple(cell_degree(c) for c in level) for level in cells)
    diffs = []
    for s in range(1, len(cells)):
        index = {c: i for i, c in enumerate(cells[s - 1])}
        rows = []
        for m, T in cells[s]:
            row = [ring.zero() for _ in cells[s - 1]]
            for pos, k in enumerate(T):
                face = (m, T[:pos] + T[pos + 1:])
                row[index[face]] = ring.gen(idx[k]).scale((-1) ** pos)
            rows.append(tuple(row))
        diffs.append(tuple(rows))
    return FreeResolution(ring, terms, tuple(diffs), aug, module, "Koszul(" + ",".join(idx) + ")")


def _random_homogeneous(ring: AlgebraPresentation, degree: int, rng: random.Random) -> AlgebraElement:
    if degree < 0 or degree > ring.truncation:
        return ring.zero()
    basis = basis_in_degree(ring, degree)
    out = ring.zero()
    for m in basis:
        c = rng.randrange(ring.prime)
        if c:
            out = out + ring.monomial(m, c)
    return out


def _unipotent(ring: AlgebraPresentation, degrees: Sequence[int], rng: random.Random) -> tuple:
    """Random change of basis U (and U^{-1}) strictly triangular in (degree, index) order."""
    n = len(degrees)
    order = sorted(range(n), key=lambda j: (degrees[j], j))
    pos = {j: r for r, j in enumerate(order)}
    N = [[ring.zero() for _ in range(n)] for _ in range(n)]
    for j in range(n):
        for k in range(n):
            if pos[k] < pos[j]:
                N[j][k] = _random_homogeneous(ring, degrees[j] - degrees[k], rng)
    N = tuple(tuple(r) for r in N)
    ident = tuple(tuple(ring.one() if j == k else ring.zero() for k in range(n)) for j in range(n))
    U = add_matrices(ident, N)
    inv, power, sign = ident, ident, 1
    for _ in range(n):
        power = compose_matrices(N, power, ring, n)
        sign = -sign
        inv = add_matrices(inv, power, sign)
    return U, inv


def change_basis(res: FreeResolution, rng: random.Random) -> FreeResolution:
    """Same resolution in new bases g'_j = U(g_j), chosen at random level by level."""
    ring = res.ring
    Us = [_unipotent(ring, d, rng) for d in res.terms]
    diffs = []
    for i, d in enumerate(res.differentials):
        U_src, _ = Us[i + 1]
        _, Uinv_tgt = Us[i]
        step = compose_matrices(d, U_src, ring, res.rank(i))
        diffs.append(compose_matrices(Uinv_tgt, step, ring, res.rank(i)))
    aug = []
    if res.terms:
        U0, _ = Us[0]
        for row in U0:
            x = res.module.carrier.zero()
            for k, r in enumerate(row):
                if r:
                    x = x + res.module.act_element(r, res.augmentation[k])
            aug.append(x)
    return FreeResolution(ring, res.terms, tuple(diffs), tuple(aug), res.module, res.name + "'")


def add_contractible(res: FreeResolution, level: int, degree: int) -> FreeResolution:
    """Direct sum with 0 -> R[degree] --id--> R[degree] -> 0 sitting in levels level+1, level."""
    ring = res.ring
    terms = [list(t) for t in res.terms]
    while len(terms) <= level + 1:
        terms.append([])
    terms[level].append(degree)
    terms[level + 1].append(degree)
    diffs = [list(list(r) for r in d) for d in res.differentials]
    while len(diffs) < len(terms) - 1:
        diffs.append([])
    for i, d in enumerate(diffs):
        ntgt = len(terms[i])
        for r in d:
            while len(r) < ntgt:
                r.append(ring.zero())
        while len(d) < len(terms[i + 1]) - (1 if i == level else 0):
            d.append([ring.zero()] * ntgt)
        if i == level:
            d.append([ring.zero()] * (ntgt - 1) + [ring.one()])
    aug = list(res.augmentation)
    if level == 0:
        aug.append(res.module.carrier.zero())
    return FreeResolution(ring, tuple(tuple(t) for t in terms),
                          tuple(tuple(tuple(r) for r in d) for d in diffs),
                          tuple(aug), res.module, res.name + "+c")


def perturb(f: ChainMapLift, F: FreeResolution, G: FreeResolution, rng: random.Random) -> ChainMapLift:
    """f + d_G r + r d_F for a random degree-raising r: F_i -> G_{i+1}; still a lift of the same map."""
    ring = F.ring
    r = []
    for i in range(len(f.levels)):
        if i + 1 >= G.length:
            r.append(zero_matrix(ring, F.rank(i), 0))
            continue
        r.append(tuple(tuple(_random_homogeneous(ring, d - e, rng) for e in G.terms[i + 1])
                       for d in F.terms[i]))
    out = []
    for i, level in enumerate(f.levels):
        nG = G.rank(i)
        rows = []
        for j in range(F.rank(i)):
            base = level[j] or tuple(ring.zero() for _ in range(nG))
            extra = [ring.zero()] * nG
            if r[i] and r[i][j]:
                extra = list(apply_matrix(G.differentials[i], r[i][j], ring, nG))
            if i > 0 and r[i - 1]:
                back = apply_matrix(r[i - 1], F.differentials[i - 1][j], ring, nG)
                extra = [a + b for a, b in zip(extra, back)]
            rows.append(tuple(a + b for a, b in zip(base, extra)))
        out.append(tuple(rows))
    return ChainMapLift(tuple(out))


@dataclass(frozen=True)
class RandomCase:
    F: FreeResolution
    G: FreeResolution
    phi: ModuleMap
    seed: int
    description: str = ""


def random_case(seed: int, p: int = 2, max_levels: int = 3, max_gens: int = 4) -> RandomCase:
    """A random pair of small resolutions R/(T) <- F and R/(S) <- G with T <= S.

    R = F_p[y_1, y_2, y_3]; |S| <= max_levels - 1 so every resolution has at
    most ``max_levels`` terms; contractible summands and triangular basis
    changes keep each level at most ``max_gens`` generators.
    """
    rng = random.Random(seed)
    degrees = [rng.randint(1, 3) for _ in range(3)]
    ring = polynomial_ring(p, degrees, truncation=12)
    names = [g.name for g in ring.generators]
    s_size = rng.randint(0, max_levels - 1)
    S = sorted(rng.sample(names, s_size))
    T = sorted(rng.sample(S, rng.randint(0, len(S))))
    F = koszul_resolution(ring, T)
    G = koszul_resolution(ring, S)
    for res_name in ("F", "G"):
        res = F if res_name == "F" else G
        for _ in range(rng.randint(0, 2)):
            lvl = rng.randint(0, max_levels - 2)
            if max(res.rank(lvl), res.rank(lvl + 1)) >= max_gens:
                continue
            res = add_contractible(res, lvl, rng.randint(0, 4))
        res = change_basis(res, rng)
        if res_name == "F":
            F = res
        else:
            G = res
    kind = rng.choice(["projection", "projection", "zero"])
    src, tgt = F.module, G.module
    phi = _projection(src, tgt, 0 if kind == "zero" else 1)
    return RandomCase(F, G, phi, seed, f"T={T} S={S} {kind}")


def _projection(src: ModulePresentation, tgt: ModulePresentation, scalar: int) -> ModuleMap:
    images = []
    for g in src.carrier.generators:
        images.append((g.name, tgt.carrier.gen(g.name) if tgt.carrier.has(g.name) else tgt.carrier.zero()))
    return ModuleMap(src, tgt, tuple(images), scalar)


# -- JSON ---------------------------------------------------------------------------

def resolution_to_dict(res: FreeResolution) -> dict:
    carrier = res.module.carrier
    return {
        "ring": presentation_to_dict(res.ring),
        "module": {
            "name": res.module.name,
            "carrier": presentation_to_dict(carrier),
            "action": {g: str(x) for g, x in res.module.action},
        },
        "terms": [[{"gen": f"g{i}_{j}", "degree": d} for j, d in enumerate(t)]
                  for i, t in enumerate(res.terms)],
        "differentials": [[[str(x) for x in row] for row in d] for d in res.differentials],
        "augmentation": [str(x) for x in res.augmentation],
        "name": res.name,
    }


def resolution_from_dict(d) -> FreeResolution:
    d = _load_mapping(d)
    ring = presentation_from_dict(d["ring"])
    mod = d.get("module", {})
    carrier_d = dict(mod.get("carrier", {"generators": []}))
    carrier_d.setdefault("prime", ring.prime)
    carrier_d.setdefault("truncation", ring.truncation)
    carrier = presentation_from_dict(carrier_d)
    action = tuple((g, carrier.parse(s)) for g, s in mod.get("action", {}).items())
    module = ModulePresentation(ring, carrier, action, mod.get("name", carrier.name))
    terms = tuple(tuple(int(g["degree"]) for g in level) for level in d["terms"])
    diffs = tuple(tuple(tuple(ring.parse(s) for s in row) for row in m) for m in d.get("differentials", []))
    aug = tuple(carrier.parse(s) for s in d.get("augmentation", []))
    return FreeResolution(ring, terms, diffs, aug, module, d.get("name", ""))


def module_map_from_dict(d, source: ModulePresentation, target: ModulePresentation) -> ModuleMap:
    d = _load_mapping(d)
    images = tuple((g, target.carrier.parse(s)) for g, s in d.get("images", {}).items())
    return ModuleMap(source, target, images, int(d.get("scalar", 1)))


def lift_to_dict(f: ChainMapLift) -> dict:
    return {"certified": f.certified,
            "levels": [[[str(x) for x in row] for row in level] for level in f.levels]}


def homotopy_to_dict(h: ChainHomotopy) -> dict:
    return {"certified": h.certified,
            "levels": [[[str(x) for x in row] for row in level] for level in h.levels]}
