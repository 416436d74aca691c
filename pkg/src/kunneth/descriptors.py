"""Ring spectrum descriptors: coefficient rings, augmentation sequences, detection data."""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import KunnethError
from .graded import (FP, INTEGRAL, AlgebraPresentation, GeneratorSpec,
                     ModulePresentation, _load_mapping)
from .koszul import RegularSequence

BUILTIN = ("ku", "ell", "BP2", "MU")
DEFAULT_TRUNCATION = 24
MU_DEFAULT_COUNT = 8


def chromatic_degree(k: int, p: int) -> int:
    return 2 * (p**k - 1)


def chromatic_index(degree: int, p: int) -> int | None:
    """k with degree = 2(p^k - 1), if any."""
    k = 1
    while chromatic_degree(k, p) < degree:
        k += 1
    return k if chromatic_degree(k, p) == degree else None


def detected_generator(entry: str, degree: int, p: int) -> str | None:
    """Conjugate-basis generator of A_* detected by the 1-line class of ``entry``."""
    if entry.isdigit():
        return "xib1" if p == 2 else "taub0"
    k = chromatic_index(degree, p)
    if k is None:
        return None
    return f"xib{k + 1}" if p == 2 else f"taub{k}"


@dataclass(frozen=True)
class RingSpectrumDescriptor:
    name: str
    prime: int
    ring: AlgebraPresentation
    sequence: tuple
    detection: tuple                 # ((entry, conjugate generator or None), ...)
    cartan_products: bool = True
    family: dict | None = None
    notes: tuple = ()
    warnings: tuple = ()
    description: str = ""
    source: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def truncation(self) -> int:
        return self.ring.truncation

    def regular_sequence(self) -> RegularSequence:
        return RegularSequence(self.ring, self.sequence)

    @property
    def detection_map(self) -> dict:
        return dict(self.detection)

    def family_members(self) -> list:
        """Sequence entries x_{p^k - 1} of the MU family present in this truncation."""
        if not self.family:
            return []
        prefix = self.family["prefix"]
        out = []
        for e in self.sequence:
            if e.startswith(prefix) and e[len(prefix):].isdigit():
                i = int(e[len(prefix):])
                if chromatic_index(2 * i, self.prime) is not None:
                    out.append(e)
        return out

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "prime": self.prime,
            "truncation": self.truncation,
            "generators": [{"name": g.name, "degree": g.degree} for g in self.ring.generators],
            "sequence": list(self.sequence),
            "detection": {e: g for e, g in self.detection},
            "cartan_products": self.cartan_products,
            "notes": list(self.notes),
            "warnings": list(self.warnings),
        }


def _builtin_path(name: str):
    return resources.files("kunneth") / "data" / "descriptors" / f"{name}.json"


def load_descriptor(name_or_path, prime: int, truncation: int | None = None,
                    family_count: int | None = None) -> RingSpectrumDescriptor:
    """Resolve a builtin name (ku, ell, BP2, MU) or a JSON/TOML descriptor file."""
    if isinstance(name_or_path, str) and name_or_path in BUILTIN:
        data = json.loads(_builtin_path(name_or_path).read_text())
    elif isinstance(name_or_path, dict):
        data = dict(name_or_path)
    else:
        path = Path(name_or_path)
        if not path.exists():
            raise KunnethError(f"unknown ring {name_or_path!r}; builtins are {', '.join(BUILTIN)}")
        data = _load_mapping(path)
    return descriptor_from_dict(data, prime, truncation, family_count)


def descriptor_from_dict(data: dict, prime: int, truncation: int | None = None,
                         family_count: int | None = None) -> RingSpectrumDescriptor:
    p = int(prime)
    if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise KunnethError(f"{p} is not prime")
    family = data.get("family")
    gens = []
    if family:
        step = int(family.get("degree_per_index", 2))
        if family_count is None:
            family_count = (truncation // step) if truncation is not None else int(family.get("default_count", MU_DEFAULT_COUNT))
        if truncation is None:
            truncation = step * family_count
        for i in range(1, family_count + 1):
            gens.append((f"{family['prefix']}{i}", step * i))
    for g in data.get("generators", []):
        deg = g.get("degree")
        if deg is None:
            deg = chromatic_degree(int(g["chromatic"]), p)
        gens.append((g["name"], int(deg)))
    if truncation is None:
        truncation = DEFAULT_TRUNCATION
    if truncation < 4:
        raise KunnethError("truncation must be at least 4")
    specs = tuple(GeneratorSpec(n, d, "even", False) for n, d in gens)
    ring = AlgebraPresentation(p, specs, truncation, INTEGRAL, data["name"] + "_*")
    sequence = (str(p),) + tuple(n for n, _ in gens)
    detection = tuple((e, detected_generator(e, 0 if e.isdigit() else ring.generator(e).degree, p))
                      for e in sequence)
    notes = []
    raw_notes = data.get("notes", {})
    if p > 2 and "odd" in raw_notes:
        notes.append(raw_notes["odd"])
    for key, text in raw_notes.items():
        if key not in ("odd", "gate"):
            notes.append(text)
    warns = []
    gate = data.get("odd_prime_gate")
    if gate and p > 2 and p != int(gate):
        msg = raw_notes.get("gate", f"{data['name']} is only supported at p = {gate} among odd primes")
        warns.append(msg)
        warnings.warn(msg, stacklevel=2)
    elif gate and p == int(gate) and "gate" in raw_notes:
        notes.append(raw_notes["gate"])
    return RingSpectrumDescriptor(data["name"], p, ring, sequence, detection,
                                  bool(data.get("cartan_products", True)), family,
                                  tuple(notes), tuple(warns), data.get("description", ""), data)


def trivial_module(desc: RingSpectrumDescriptor) -> ModulePresentation:
    return ModulePresentation.trivial(desc.ring, name=f"F_{desc.prime}")


def hurewicz_module(desc: RingSpectrumDescriptor, t_max: int | None = None) -> ModulePresentation:
    """H_*(MU; F_p) = F_p[b_1, b_2, ...] as an MU_*-module through the Hurewicz map.

    Only the leading terms are used: x_i acts by multiplication with -b_i,
    except x_{p^k - 1}, which maps to p b_{p^k-1} + decomposables and hence
    acts by zero; the integer p acts by zero as well.
    """
    if not desc.family:
        raise KunnethError("the Hurewicz module is only defined for the MU family")
    t_max = desc.truncation if t_max is None else t_max
    p = desc.prime
    prefix = desc.family["prefix"]
    step = int(desc.family.get("degree_per_index", 2))
    bgens = []
    for g in desc.ring.generators:
        if g.name.startswith(prefix) and g.degree <= t_max:
            i = int(g.name[len(prefix):])
            bgens.append(GeneratorSpec(f"b{i}", step * i, "even", False))
    carrier = AlgebraPresentation(p, tuple(bgens), t_max, FP, f"H_*({desc.name};F_{p})")
    action = []
    for g in desc.ring.generators:
        if not g.name.startswith(prefix) or g.degree > t_max:
            continue
        i = int(g.name[len(prefix):])
        if chromatic_index(step * i, p) is None:
            action.append((g.name, carrier.gen(f"b{i}").scale(-1)))
    return ModulePresentation(desc.ring, carrier, tuple(action), carrier.name)
