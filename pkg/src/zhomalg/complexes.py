"""Bounded chain complexes of finitely generated abelian groups.

A complex is stored on an explicit finite support ``lo..hi``; every group
outside it is zero. ``d(n)`` is the boundary ``C_n -> C_{n-1}``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .errors import ContractError, InputError
from .fgab import (
    FgAbGroup,
    GroupElement,
    GroupHom,
    cokernel,
    direct_sum,
    factor_through,
    is_exact_at,
    kernel,
    parse_group,
)
from .intlin import IntMatrix

_ZERO = FgAbGroup.zero()


class ChainComplex:
    """Groups ``C_lo .. C_hi`` and boundaries ``d_n: C_n -> C_{n-1}`` for ``lo < n <= hi``."""

    def __init__(self, lo: int, groups: Sequence[FgAbGroup], boundaries: Sequence[GroupHom]):
        groups = list(groups)
        boundaries = list(boundaries)
        if len(boundaries) != max(len(groups) - 1, 0):
            raise InputError(f"{len(groups)} groups need {max(len(groups) - 1, 0)} boundaries, got {len(boundaries)}")
        for k, d in enumerate(boundaries):
            if d.source != groups[k + 1] or d.target != groups[k]:
                raise InputError(f"boundary d_{lo + k + 1} does not map C_{lo + k + 1} to C_{lo + k}")
        self.lo = lo
        self.groups = groups
        self.boundaries = boundaries
        self._homology: dict[int, Homology] = {}

    @classmethod
    def from_maps(cls, lo: int, maps: Sequence[GroupHom]) -> ChainComplex:
        """Complex ``C_lo <- C_{lo+1} <- ...`` from its boundaries alone."""
        if not maps:
            raise InputError("from_maps needs at least one boundary")
        return cls(lo, [maps[0].target] + [d.source for d in maps], maps)

    @classmethod
    def concentrated(cls, G: FgAbGroup, degree: int = 0) -> ChainComplex:
        return cls(degree, [G], [])

    @property
    def hi(self) -> int:
        return self.lo + len(self.groups) - 1

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def __repr__(self):
        body = " <- ".join(G.literal() for G in self.groups)
        return f"ChainComplex(lo={self.lo}: {body})"

    def group(self, n: int) -> FgAbGroup:
        if self.lo <= n <= self.hi:
            return self.groups[n - self.lo]
        return _ZERO

    def d(self, n: int) -> GroupHom:
        if self.lo < n <= self.hi:
            return self.boundaries[n - self.lo - 1]
        return GroupHom.zero(self.group(n), self.group(n - 1))

    def validate(self) -> bool:
        return all((self.d(n - 1) @ self.d(n)).is_zero() for n in range(self.lo + 2, self.hi + 1))

    def homology(self, n: int) -> Homology:
        if n not in self._homology:
            self._homology[n] = homology_data(self, n)
        return self._homology[n]

    def direct_sum(self, other: ChainComplex) -> ChainComplex:
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        sums = {n: direct_sum(self.group(n), other.group(n)) for n in range(lo, hi + 1)}
        bounds = []
        for n in range(lo + 1, hi + 1):
            S, T = sums[n], sums[n - 1]
            bounds.append(
                T.injections[0] @ self.d(n) @ S.projections[0] + T.injections[1] @ other.d(n) @ S.projections[1]
            )
        return ChainComplex(lo, [sums[n].group for n in range(lo, hi + 1)], bounds)

    def to_json(self) -> dict:
        simp = [G.simplification for G in self.groups]
        bounds = []
        for k, d in enumerate(self.boundaries):
            core = simp[k].to_canonical @ d @ simp[k + 1].from_canonical
            bounds.append(core.matrix.to_json())
        return {
            "degrees": [self.lo, self.hi],
            "groups": [G.literal() for G in self.groups],
            "boundaries": bounds,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> ChainComplex:
        lo, hi = (int(x) for x in data["degrees"])
        groups = [parse_group(g) for g in data["groups"]]
        if len(groups) != hi - lo + 1:
            raise InputError("degree range does not match the number of groups")
        bounds = []
        for k, m in enumerate(data["boundaries"]):
            src, tgt = groups[k + 1], groups[k]
            mat = IntMatrix.from_json(m, src.ngens)
            if mat.rows != tgt.ngens:
                raise InputError(f"boundary {lo + k + 1} has {mat.rows} rows, expected {tgt.ngens}")
            bounds.append(GroupHom(src, tgt, mat))
        return cls(lo, groups, bounds)


def validate(c: ChainComplex) -> bool:
    return c.validate()


@dataclass
class Homology:
    """``H_n = Z_n / B_n`` with the maps that connect it to cycles.

    ``cycles`` includes ``Z_n`` into ``C_n``; ``quotient`` sends ``Z_n`` onto
    the canonical group ``group``.
    """

    degree: int
    group: FgAbGroup
    chain_group: FgAbGroup
    cycles: GroupHom
    quotient: GroupHom
    _reps: dict = field(default_factory=dict, repr=False)

    def class_of(self, z: GroupElement | Sequence[int]) -> GroupElement:
        """Homology class of a cycle given in ``C_n`` coordinates."""
        w = self.cycles.preimage(z)
        if w is None:
            raise ContractError("element is not a cycle")
        return self.quotient(w)

    def representative(self, h: GroupElement | Sequence[int]) -> tuple[int, ...]:
        """A cycle in ``C_n`` representing the class ``h``."""
        w = self.quotient.preimage(h)
        if w is None:
            raise ContractError("homology projection is not surjective")
        return self.cycles.matrix.apply(w)

    def generator_representatives(self) -> list[tuple[int, ...]]:
        return [self.representative(e) for e in self.group.generators()]


def homology_data(c: ChainComplex, n: int) -> Homology:
    Z = kernel(c.d(n))
    boundary = factor_through(c.d(n + 1), Z.inclusion)
    Q = cokernel(boundary)
    return Homology(n, Q.group, c.group(n), Z.inclusion, Q.projection)


def homology(c: ChainComplex, n: int) -> FgAbGroup:
    return c.homology(n).group


class ChainMap:
    """Components ``f_n: C_n -> D_n``; missing degrees are zero maps."""

    def __init__(self, source: ChainComplex, target: ChainComplex, components: Mapping[int, GroupHom]):
        self.source, self.target = source, target
        lo, hi = min(source.lo, target.lo), max(source.hi, target.hi)
        self.components = {}
        for n in range(lo, hi + 1):
            f = components.get(n)
            if f is None:
                f = GroupHom.zero(source.group(n), target.group(n))
            elif f.source != source.group(n) or f.target != target.group(n):
                raise InputError(f"component {n} has the wrong source or target")
            self.components[n] = f
        extra = set(components) - set(self.components)
        if any(not components[n].matrix.is_zero() for n in extra):
            raise InputError("component outside both supports")

    def __getitem__(self, n: int) -> GroupHom:
        if n in self.components:
            return self.components[n]
        return GroupHom.zero(self.source.group(n), self.target.group(n))

    @property
    def degrees(self) -> range:
        return range(min(self.source.lo, self.target.lo), max(self.source.hi, self.target.hi) + 1)

    def validate(self) -> bool:
        for n in range(self.degrees.start, self.degrees.stop + 1):
            if not (self[n - 1] @ self.source.d(n)).equals(self.target.d(n) @ self[n]):
                return False
        return True

    def __matmul__(self, other: ChainMap) -> ChainMap:
        if other.target is not self.source:
            raise InputError("chain maps are not composable")
        degs = set(self.components) | set(other.components)
        return ChainMap(other.source, self.target, {n: self[n] @ other[n] for n in degs})

    @classmethod
    def identity(cls, c: ChainComplex) -> ChainMap:
        return cls(c, c, {n: GroupHom.identity(c.group(n)) for n in c.degrees})

    @classmethod
    def zero(cls, c: ChainComplex, d: ChainComplex) -> ChainMap:
        return cls(c, d, {})


def induced_map(f: ChainMap, n: int) -> GroupHom:
    Hs, Ht = f.source.homology(n), f.target.homology(n)
    cols = [Ht.class_of(f[n].matrix.apply(z)).coords for z in Hs.generator_representatives()]
    return GroupHom(Hs.group, Ht.group, IntMatrix.from_columns(cols, Ht.group.ngens))


class ComplexSES:
    """Degreewise short exact ``0 -> C1 --iota--> C2 --pi--> C3 -> 0``."""

    def __init__(self, iota: ChainMap, pi: ChainMap):
        if iota.target is not pi.source:
            raise InputError("chain maps are not composable")
        if not iota.validate() or not pi.validate():
            raise InputError("component maps do not commute with the boundaries")
        C2 = iota.target
        lo = min(iota.source.lo, C2.lo, pi.target.lo)
        hi = max(iota.source.hi, C2.hi, pi.target.hi)
        for n in range(lo, hi + 1):
            i, p = iota[n], pi[n]
            if not (i.is_injective() and p.is_surjective() and is_exact_at(i, p)):
                raise InputError(f"not short exact in degree {n}")
        self.iota, self.pi = iota, pi
        self.lo, self.hi = lo, hi

    @property
    def complexes(self) -> tuple[ChainComplex, ChainComplex, ChainComplex]:
        return self.iota.source, self.iota.target, self.pi.target


def _random_element(G: FgAbGroup, rng: random.Random) -> tuple[int, ...]:
    return tuple(rng.randint(-3, 3) for _ in range(G.ngens))


def connecting_morphism(s: ComplexSES, n: int, rng: Optional[random.Random] = None) -> GroupHom:
    """``H_n(C3) -> H_{n-1}(C1)`` by the preimage chase.

    Lifts use the particular solutions of the integer solver. Passing ``rng``
    perturbs every choice (representative cycle and lift) by a random
    boundary or kernel element; the result must not change.
    """
    C1, C2, C3 = s.complexes
    H3, H1 = C3.homology(n), C1.homology(n - 1)
    cols = []
    for z in H3.generator_representatives():
        if rng is not None:
            bdry = C3.d(n + 1).matrix.apply(_random_element(C3.group(n + 1), rng))
            z = tuple(a + b for a, b in zip(z, bdry))
        b = s.pi[n].preimage(z)
        if b is None:
            raise ContractError(f"cycle does not lift through pi_{n}")
        if rng is not None:
            shift = s.iota[n].matrix.apply(_random_element(C1.group(n), rng))
            b = tuple(x + y for x, y in zip(b, shift))
        db = C2.d(n).matrix.apply(b)
        a = s.iota[n - 1].preimage(db)
        if a is None:
            raise ContractError(f"boundary does not pull back through iota_{n - 1}")
        cols.append(H1.class_of(a).coords)
    return GroupHom(H3.group, H1.group, IntMatrix.from_columns(cols, H1.group.ngens))


@dataclass
class LongExactSequence:
    """``0 -> terms[0] -> terms[1] -> ... -> terms[-1] -> 0``.

    ``maps[k]`` goes from ``terms[k]`` to ``terms[k+1]``; ``exact[k]`` reports
    exactness at ``terms[k]`` (using the zero maps at both ends).
    """

    labels: list[str]
    terms: list[FgAbGroup]
    maps: list[GroupHom]
    exact: list[bool]

    @property
    def is_exact(self) -> bool:
        return all(self.exact)

    def pairs(self) -> list[tuple[FgAbGroup, Optional[GroupHom]]]:
        return [(G, self.maps[k] if k < len(self.maps) else None) for k, G in enumerate(self.terms)]

    def term(self, label: str) -> FgAbGroup:
        return self.terms[self.labels.index(label)]

    def map_from(self, label: str) -> GroupHom:
        return self.maps[self.labels.index(label)]


def assemble_exact_sequence(labels: list[str], terms: list[FgAbGroup], maps: list[GroupHom]) -> LongExactSequence:
    exact = []
    for k, G in enumerate(terms):
        incoming = maps[k - 1] if k > 0 else GroupHom.zero(_ZERO, G)
        outgoing = maps[k] if k < len(maps) else GroupHom.zero(G, _ZERO)
        exact.append(is_exact_at(incoming, outgoing))
    return LongExactSequence(labels, terms, maps, exact)


def long_exact_sequence(s: ComplexSES, rng: Optional[random.Random] = None) -> LongExactSequence:
    C1, C2, C3 = s.complexes
    labels, terms, maps = [], [], []
    for n in range(s.hi, s.lo - 1, -1):
        labels += [f"H{n}(C1)", f"H{n}(C2)", f"H{n}(C3)"]
        terms += [C1.homology(n).group, C2.homology(n).group, C3.homology(n).group]
        maps += [induced_map(s.iota, n), induced_map(s.pi, n)]
        if n > s.lo:
            maps.append(connecting_morphism(s, n, rng))
    return assemble_exact_sequence(labels, terms, maps)


@dataclass
class Ladder:
    """Two short exact sequences of complexes joined by chain maps ``alpha, beta, gamma``."""

    top: ComplexSES
    bottom: ComplexSES
    alpha: ChainMap
    beta: ChainMap
    gamma: ChainMap


def naturality_check(ladder: Ladder) -> bool:
    """Do all squares of the induced ladder of long exact sequences commute?"""
    t, b = ladder.top, ladder.bottom
    lo, hi = min(t.lo, b.lo), max(t.hi, b.hi)
    for n in range(lo, hi + 1):
        if not (ladder.beta[n] @ t.iota[n]).equals(b.iota[n] @ ladder.alpha[n]):
            raise InputError(f"left square of the input ladder fails in degree {n}")
        if not (ladder.gamma[n] @ t.pi[n]).equals(b.pi[n] @ ladder.beta[n]):
            raise InputError(f"right square of the input ladder fails in degree {n}")
    for n in range(lo, hi + 1):
        a_n, b_n, c_n = (induced_map(m, n) for m in (ladder.alpha, ladder.beta, ladder.gamma))
        if not (b_n @ induced_map(t.iota, n)).equals(induced_map(b.iota, n) @ a_n):
            return False
        if not (c_n @ induced_map(t.pi, n)).equals(induced_map(b.pi, n) @ b_n):
            return False
        a_prev = induced_map(ladder.alpha, n - 1)
        if not (a_prev @ connecting_morphism(t, n)).equals(connecting_morphism(b, n) @ c_n):
            return False
    return True
