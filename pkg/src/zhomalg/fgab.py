"""Finitely generated abelian groups as presented Z-modules.

A group is ``Z^g / column-span(R)`` for a ``g x r`` relation matrix ``R``.
Homomorphisms carry a matrix on generators together with a certificate
matrix ``C`` proving ``matrix @ R_src == R_tgt @ C``; a map without such a
certificate is never constructed.

Constructions that build new groups (kernel, cokernel, Hom, tensor, ...)
return groups in canonical diagonal form along with the comparison maps.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from math import gcd, prod
from typing import Iterator, Optional, Sequence

from .errors import ContractError, IllDefinedHomError, InputError, LiteralError
from .intlin import (
    CongruenceSystem,
    IntMatrix,
    block_diagonal,
    kernel_basis,
    lcm,
    smith_normal_form,
    solve_congruence,
    solve_integer,
    solve_integer_matrix,
)


@dataclass(frozen=True)
class Canonical:
    """Invariant factors (each >= 2, each dividing the next) plus free rank."""

    factors: tuple[int, ...]
    free_rank: int

    def __iter__(self):
        return iter((list(self.factors), self.free_rank))

    def literal(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.factors)
        return " + ".join(parts) if parts else "0"


def _normalize_factors(factors: Sequence[int]) -> tuple[int, ...]:
    """Invariant-factor normal form of a list of cyclic orders (SNF of the diagonal)."""
    diag = [f for f in factors if f != 1]
    if not diag:
        return ()
    snf = smith_normal_form(IntMatrix.diagonal(diag))
    return tuple(d for d in snf.invariants if d != 1)


class FgAbGroup:
    """``Z^g`` modulo the column span of an integer relation matrix."""

    def __init__(self, relations: IntMatrix):
        if not isinstance(relations, IntMatrix):
            raise InputError("relations must be an IntMatrix")
        self.relations = relations

    # constructors ---------------------------------------------------------

    @classmethod
    def from_invariant_factors(cls, factors: Sequence[int] = (), free_rank: int = 0) -> FgAbGroup:
        if any(f <= 0 for f in factors):
            raise InputError(f"invariant factors must be positive, got {list(factors)}")
        if free_rank < 0:
            raise InputError("free rank must be non-negative")
        fs = _normalize_factors(factors)
        g = len(fs) + free_rank
        return cls(IntMatrix.diagonal(fs, g, len(fs)))

    @classmethod
    def free(cls, n: int) -> FgAbGroup:
        return cls(IntMatrix.zeros(n, 0))

    @classmethod
    def zero(cls) -> FgAbGroup:
        return cls(IntMatrix.zeros(0, 0))

    @classmethod
    def cyclic(cls, n: int) -> FgAbGroup:
        """``Z/n``; ``n == 0`` gives ``Z``."""
        if n < 0:
            raise InputError("cyclic order must be non-negative")
        if n == 0:
            return cls.free(1)
        return cls.from_invariant_factors([n])

    @classmethod
    def parse(cls, text: str) -> FgAbGroup:
        return parse_group(text)

    # basic data -----------------------------------------------------------

    @property
    def ngens(self) -> int:
        return self.relations.rows

    def __eq__(self, other):
        if not isinstance(other, FgAbGroup):
            return NotImplemented
        return self.relations == other.relations

    def __hash__(self):
        return hash(self.relations)

    def __repr__(self):
        return f"FgAbGroup({self.canonical.literal()!r})"

    @cached_property
    def _snf(self):
        return smith_normal_form(self.relations)

    @cached_property
    def _kept(self) -> tuple[tuple[int, int], ...]:
        """(SNF position, modulus) for every nontrivial canonical coordinate.

        Torsion positions come first, then free ones (modulus 0).
        """
        snf = self._snf
        out = [(i, snf.D[i, i]) for i in range(snf.rank) if snf.D[i, i] != 1]
        out.extend((i, 0) for i in range(snf.rank, self.ngens))
        return tuple(out)

    @cached_property
    def canonical(self) -> Canonical:
        mods = [m for _, m in self._kept]
        return Canonical(tuple(m for m in mods if m), sum(1 for m in mods if m == 0))

    @property
    def moduli(self) -> tuple[int, ...]:
        """Order of each canonical coordinate (0 for a free coordinate)."""
        return tuple(m for _, m in self._kept)

    def is_isomorphic(self, other: FgAbGroup) -> bool:
        return self.canonical == other.canonical

    @property
    def is_trivial(self) -> bool:
        return not self._kept

    @property
    def is_finite(self) -> bool:
        return self.canonical.free_rank == 0

    @property
    def is_canonical(self) -> bool:
        """True when the presentation already is the canonical diagonal one."""
        c = self.canonical
        return self == FgAbGroup.from_invariant_factors(c.factors, c.free_rank)

    def order(self) -> Optional[int]:
        """Number of elements, or ``None`` for an infinite group."""
        if not self.is_finite:
            return None
        return prod(self.canonical.factors)

    def exponent(self) -> int:
        """Exponent of the torsion subgroup (1 when torsion-free)."""
        return lcm(*self.canonical.factors) if self.canonical.factors else 1

    def literal(self) -> str:
        return self.canonical.literal()

    # coordinates ----------------------------------------------------------

    def _check_vec(self, coords) -> tuple[int, ...]:
        coords = tuple(int(x) for x in coords)
        if len(coords) != self.ngens:
            raise InputError(f"expected {self.ngens} coordinates, got {len(coords)}")
        return coords

    def to_canonical(self, coords: Sequence[int]) -> tuple[int, ...]:
        """Coordinates in ``Z/d_1 + ... + Z^f``, torsion entries reduced."""
        coords = self._check_vec(coords)
        U = self._snf.U
        out = []
        for i, m in self._kept:
            v = sum(a * b for a, b in zip(U.row(i), coords))
            out.append(v % m if m else v)
        return tuple(out)

    def from_canonical(self, canon: Sequence[int]) -> tuple[int, ...]:
        if len(canon) != len(self._kept):
            raise InputError(f"expected {len(self._kept)} canonical coordinates")
        Ui = self._snf.U_inv
        out = [0] * self.ngens
        for (i, _), c in zip(self._kept, canon):
            if c:
                for r in range(self.ngens):
                    out[r] += c * Ui[r, i]
        return tuple(out)

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        """Canonical residue representative of a coordinate vector."""
        return self.from_canonical(self.to_canonical(coords))

    def contains(self, vector: Sequence[int]) -> bool:
        """Is ``vector`` in the relation lattice, i.e. zero in the group?

        Decided through the cached decomposition: ``x`` lies in the lattice
        iff every canonical coordinate of ``x`` vanishes.
        """
        return not any(self.to_canonical(vector))

    def in_span(self, generators: IntMatrix, vectors: IntMatrix) -> bool:
        """Do the columns of ``vectors`` lie in span(generators) + relations?"""
        if vectors.cols == 0:
            return True
        return solve_integer_matrix(generators.hstack(self.relations), vectors) is not None

    def element(self, coords: Sequence[int]) -> GroupElement:
        return GroupElement(self, coords)

    def canonical_element(self, canon: Sequence[int]) -> GroupElement:
        return GroupElement(self, self.from_canonical(canon))

    def zero_element(self) -> GroupElement:
        return GroupElement(self, (0,) * self.ngens)

    def generators(self) -> list[GroupElement]:
        return [GroupElement(self, tuple(int(i == j) for j in range(self.ngens))) for i in range(self.ngens)]

    def elements(self) -> Iterator[GroupElement]:
        if not self.is_finite:
            raise InputError(f"cannot enumerate the infinite group {self.literal()}")
        for canon in itertools.product(*(range(m) for m in self.moduli)):
            yield self.canonical_element(canon)

    # canonical presentation ---------------------------------------------

    @cached_property
    def simplification(self) -> Simplification:
        c = self.canonical
        canon = FgAbGroup.from_invariant_factors(c.factors, c.free_rank)
        rows = [i for i, _ in self._kept]
        to_canon = self._snf.U.select_rows(rows)
        from_canon = self._snf.U_inv.select_columns(rows)
        return Simplification(canon, GroupHom(self, canon, to_canon), GroupHom(canon, self, from_canon))


@dataclass(frozen=True)
class Simplification:
    """Mutually inverse isomorphisms between a group and its canonical form."""

    group: FgAbGroup
    to_canonical: GroupHom
    from_canonical: GroupHom


def canonical_decomposition(G: FgAbGroup) -> tuple[list[int], int]:
    c = G.canonical
    return list(c.factors), c.free_rank


def simplify(G: FgAbGroup) -> Simplification:
    return G.simplification


class GroupElement:
    """An element of a presented group, held as its canonical residue vector."""

    __slots__ = ("owner", "coords")

    def __init__(self, owner: FgAbGroup, coords: Sequence[int]):
        self.owner = owner
        self.coords = owner.reduce(coords)

    def canonical(self) -> tuple[int, ...]:
        return self.owner.to_canonical(self.coords)

    def _peer(self, other) -> GroupElement:
        if not isinstance(other, GroupElement) or other.owner != self.owner:
            raise InputError("elements of different groups")
        return other

    def __add__(self, other):
        other = self._peer(other)
        return GroupElement(self.owner, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        other = self._peer(other)
        return GroupElement(self.owner, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return GroupElement(self.owner, [-a for a in self.coords])

    def __rmul__(self, k: int):
        return GroupElement(self.owner, [k * a for a in self.coords])

    def is_zero(self) -> bool:
        return self.owner.contains(self.coords)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.owner != self.owner:
            return False
        return self.owner.contains([a - b for a, b in zip(self.coords, other.coords)])

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        return f"GroupElement({self.owner.literal()}, {self.canonical()})"


class GroupHom:
    """Homomorphism given by the images of the source generators.

    ``matrix`` is ``target.ngens x source.ngens``. The certificate ``C``
    satisfies ``matrix @ source.relations == target.relations @ C``; when
    omitted it is computed, and a matrix that admits none is rejected with
    :class:`IllDefinedHomError`.
    """

    __slots__ = ("source", "target", "matrix", "certificate")

    def __init__(self, source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix, certificate: Optional[IntMatrix] = None):
        if matrix.shape != (target.ngens, source.ngens):
            raise InputError(
                f"hom matrix has shape {matrix.shape}, expected {(target.ngens, source.ngens)}"
            )
        lhs = matrix @ source.relations
        if certificate is None:
            certificate = solve_integer_matrix(target.relations, lhs)
            if certificate is None:
                raise IllDefinedHomError("matrix does not send source relations into the target relation lattice")
        elif target.relations @ certificate != lhs:
            raise IllDefinedHomError("certificate does not witness well-definedness")
        self.source = source
        self.target = target
        self.matrix = matrix
        self.certificate = certificate

    @classmethod
    def identity(cls, G: FgAbGroup) -> GroupHom:
        return cls(G, G, IntMatrix.identity(G.ngens), IntMatrix.identity(G.relations.cols))

    @classmethod
    def zero(cls, G: FgAbGroup, H: FgAbGroup) -> GroupHom:
        return cls(G, H, IntMatrix.zeros(H.ngens, G.ngens), IntMatrix.zeros(H.relations.cols, G.relations.cols))

    @classmethod
    def from_images(cls, source: FgAbGroup, target: FgAbGroup, images: Sequence[GroupElement | Sequence[int]]) -> GroupHom:
        cols = [im.coords if isinstance(im, GroupElement) else tuple(im) for im in images]
        if len(cols) != source.ngens:
            raise InputError("need one image per source generator")
        return cls(source, target, IntMatrix.from_columns(cols, target.ngens))

    def __repr__(self):
        return f"GroupHom({self.source.literal()} -> {self.target.literal()}, {self.matrix.to_lists()})"

    def __call__(self, x: GroupElement | Sequence[int]) -> GroupElement:
        if isinstance(x, GroupElement):
            if x.owner != self.source:
                raise InputError("element does not belong to the source group")
            x = x.coords
        return GroupElement(self.target, self.matrix.apply(self.source._check_vec(x)))

    def __matmul__(self, other: GroupHom) -> GroupHom:
        """Composite ``self after other``."""
        if other.target != self.source:
            raise InputError("composition of non-composable homomorphisms")
        return GroupHom(other.source, self.target, self.matrix @ other.matrix, self.certificate @ other.certificate)

    def _parallel(self, other: GroupHom):
        if other.source != self.source or other.target != self.target:
            raise InputError("homomorphisms are not parallel")

    def __add__(self, other: GroupHom) -> GroupHom:
        self._parallel(other)
        return GroupHom(self.source, self.target, self.matrix + other.matrix, self.certificate + other.certificate)

    def __sub__(self, other: GroupHom) -> GroupHom:
        self._parallel(other)
        return GroupHom(self.source, self.target, self.matrix - other.matrix, self.certificate - other.certificate)

    def __neg__(self) -> GroupHom:
        return GroupHom(self.source, self.target, -self.matrix, -self.certificate)

    def scale(self, k: int) -> GroupHom:
        return GroupHom(self.source, self.target, self.matrix.scale(k), self.certificate.scale(k))

    def is_zero(self) -> bool:
        return self.target.in_span(IntMatrix.zeros(self.target.ngens, 0), self.matrix)

    def equals(self, other: GroupHom) -> bool:
        """Equality as maps (not as matrices)."""
        self._parallel(other)
        return (self - other).is_zero()

    def image_contains(self, vectors: IntMatrix) -> bool:
        return self.target.in_span(self.matrix, vectors)

    def preimage(self, y: GroupElement | Sequence[int]) -> Optional[tuple[int, ...]]:
        """Some ``x`` with ``self(x) == y``, or ``None`` when ``y`` is not in the image."""
        if isinstance(y, GroupElement):
            y = y.coords
        big = self.matrix.hstack(self.target.relations)
        sol = solve_integer(big, self.target._check_vec(y))
        if sol is None:
            return None
        return sol[0][:self.source.ngens]

    def is_surjective(self) -> bool:
        return self.image_contains(IntMatrix.identity(self.target.ngens))

    def is_injective(self) -> bool:
        return kernel(self).group.is_trivial

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()


def factor_through(f: GroupHom, mono: GroupHom) -> GroupHom:
    """The unique ``h`` with ``mono @ h == f`` for an injective ``mono``.

    Raises :class:`ContractError` if the image of ``f`` escapes ``mono``.
    """
    if f.target != mono.target:
        raise InputError("factor_through needs a common target")
    big = mono.matrix.hstack(mono.target.relations)
    sol = solve_integer_matrix(big, f.matrix)
    if sol is None:
        raise ContractError("image does not factor through the given monomorphism")
    return GroupHom(f.source, mono.source, sol.select_rows(range(mono.source.ngens)))


def factor_through_epi(f: GroupHom, epi: GroupHom) -> GroupHom:
    """The unique ``h`` with ``h @ epi == f`` for a surjective ``epi`` whose kernel ``f`` kills."""
    if f.source != epi.source:
        raise InputError("factor_through_epi needs a common source")
    cols = []
    for e in epi.target.generators():
        x = epi.preimage(e)
        if x is None:
            raise ContractError("map is not surjective")
        cols.append(f.matrix.apply(x))
    h = GroupHom(epi.target, f.target, IntMatrix.from_columns(cols, f.target.ngens))
    if not (h @ epi).equals(f):
        raise ContractError("map does not vanish on the kernel")
    return h


# limits and colimits ------------------------------------------------------


@dataclass(frozen=True)
class DirectSum:
    group: FgAbGroup
    injections: tuple[GroupHom, ...]
    projections: tuple[GroupHom, ...]


def direct_sum(*groups: FgAbGroup) -> DirectSum:
    S = FgAbGroup(block_diagonal(*(G.relations for G in groups)))
    injections, projections = [], []
    offset = 0
    for G in groups:
        g = G.ngens
        inj = [[int(i == j + offset) for j in range(g)] for i in range(S.ngens)]
        injections.append(GroupHom(G, S, IntMatrix.from_rows(inj, g)))
        projections.append(GroupHom(S, G, IntMatrix.from_rows(inj, g).T))
        offset += g
    return DirectSum(S, tuple(injections), tuple(projections))


@dataclass(frozen=True)
class Kernel:
    group: FgAbGroup
    inclusion: GroupHom


@dataclass(frozen=True)
class Cokernel:
    group: FgAbGroup
    projection: GroupHom


def kernel(f: GroupHom) -> Kernel:
    A, B = f.source, f.target
    big = f.matrix.hstack(-B.relations)
    gens = kernel_basis(big).select_rows(range(A.ngens))
    k = gens.cols
    rel = kernel_basis(gens.hstack(-A.relations)).select_rows(range(k))
    raw = FgAbGroup(rel)
    inc = GroupHom(raw, A, gens)
    s = raw.simplification
    return Kernel(s.group, inc @ s.from_canonical)


def cokernel(f: GroupHom) -> Cokernel:
    B = f.target
    raw = FgAbGroup(B.relations.hstack(f.matrix))
    proj = GroupHom(B, raw, IntMatrix.identity(B.ngens))
    s = raw.simplification
    return Cokernel(s.group, s.to_canonical @ proj)


def image(f: GroupHom) -> Kernel:
    """The image of ``f`` as a subgroup of the target (kernel of the cokernel map)."""
    return kernel(cokernel(f).projection)


def is_subgroup(sub: GroupHom, sup: GroupHom) -> bool:
    """Is image(sub) contained in image(sup)? Both map into the same group."""
    if sub.target != sup.target:
        raise InputError("subgroups of different groups")
    return sup.image_contains(sub.matrix)


@dataclass(frozen=True)
class Pullback:
    group: FgAbGroup
    alpha: GroupHom
    beta: GroupHom


def pullback(f: GroupHom, g: GroupHom) -> Pullback:
    if f.target != g.target:
        raise InputError("pullback needs maps with a common target")
    S = direct_sum(f.source, g.source)
    diff = f @ S.projections[0] - g @ S.projections[1]
    K = kernel(diff)
    return Pullback(K.group, S.projections[0] @ K.inclusion, S.projections[1] @ K.inclusion)


@dataclass(frozen=True)
class Pushout:
    group: FgAbGroup
    alpha: GroupHom
    beta: GroupHom


def pushout(f: GroupHom, g: GroupHom) -> Pushout:
    """``(A + B) / {(f(c), -g(c))}``."""
    if f.source != g.source:
        raise InputError("pushout needs maps with a common source")
    S = direct_sum(f.target, g.target)
    diag = S.injections[0] @ f - S.injections[1] @ g
    Q = cokernel(diag)
    return Pushout(Q.group, Q.projection @ S.injections[0], Q.projection @ S.injections[1])


def equalizer(f: GroupHom, g: GroupHom) -> Kernel:
    f._parallel(g)
    return kernel(f - g)


def coequalizer(f: GroupHom, g: GroupHom) -> Cokernel:
    """Cokernel of ``f - g`` (the categorical coequalizer)."""
    f._parallel(g)
    return cokernel(f - g)


# Hom and tensor -----------------------------------------------------------


class HomGroup:
    """``Hom(G, H)`` as a canonical group with explicit conversions.

    Built on the canonical forms ``G = (+) Z/a_i (+) Z^f`` and
    ``H = (+) Z/b_j (+) Z^h``: the pair (i, j) contributes
    ``Z/gcd(a_i, b_j)`` (generator ``1 -> b_j/gcd``), ``Z/b_j``, ``Z`` or
    nothing depending on which sides are free.
    """

    def __init__(self, G: FgAbGroup, H: FgAbGroup):
        self.source = G
        self.target = H
        sG, sH = G.simplification, H.simplification
        self._sG, self._sH = sG, sH
        mG, mH = sG.group.moduli, sH.group.moduli
        pairs, orders, steps = [], [], []
        for i, a in enumerate(mG):
            for j, b in enumerate(mH):
                if a and b:
                    d = gcd(a, b)
                    if d == 1:
                        continue
                    pairs.append((i, j)); orders.append(d); steps.append(b // d)
                elif a and not b:
                    continue
                else:
                    pairs.append((i, j)); orders.append(b); steps.append(1)
        self._pairs, self._steps, self._mH = pairs, steps, mH
        self._raw = FgAbGroup(IntMatrix.diagonal(orders))
        self.group = self._raw.simplification.group

    def __repr__(self):
        return f"HomGroup({self.source.literal()}, {self.target.literal()}) = {self.group.literal()}"

    def _raw_to_hom(self, raw: Sequence[int]) -> GroupHom:
        gG, gH = self._sG.group.ngens, self._sH.group.ngens
        X = [[0] * gG for _ in range(gH)]
        for c, (i, j), step in zip(raw, self._pairs, self._steps):
            X[j][i] += c * step
        core = GroupHom(self._sG.group, self._sH.group, IntMatrix.from_rows(X, gG))
        return self._sH.from_canonical @ core @ self._sG.to_canonical

    def to_hom(self, x: GroupElement | Sequence[int]) -> GroupHom:
        """The homomorphism represented by an element (or coordinate vector) of ``group``."""
        if isinstance(x, GroupElement):
            x = x.coords
        raw = self._raw.simplification.from_canonical.matrix.apply(self.group._check_vec(x))
        return self._raw_to_hom(raw)

    def from_hom(self, f: GroupHom) -> GroupElement:
        if f.source != self.source or f.target != self.target:
            raise InputError("homomorphism has the wrong source or target")
        X = (self._sH.to_canonical @ f @ self._sG.from_canonical).matrix
        raw = []
        for (i, j), step in zip(self._pairs, self._steps):
            x = X[j, i]
            b = self._mH[j]
            if b:
                x %= b
                if x % step:
                    raise ContractError("homomorphism entry incompatible with the source order")
                x //= step
            raw.append(x)
        return GroupElement(self.group, self._raw.simplification.to_canonical.matrix.apply(raw))

    @property
    def basis(self) -> list[GroupHom]:
        return [self.to_hom(e.coords) for e in self.group.generators()]

    def elements(self) -> Iterator[GroupHom]:
        for x in self.group.elements():
            yield self.to_hom(x)


def hom_group(G: FgAbGroup, H: FgAbGroup) -> HomGroup:
    return HomGroup(G, H)


def hom_precompose(f: GroupHom, C: FgAbGroup) -> tuple[HomGroup, HomGroup, GroupHom]:
    """``Hom(f, C): Hom(target f, C) -> Hom(source f, C)``, ``phi -> phi @ f``."""
    dom, cod = hom_group(f.target, C), hom_group(f.source, C)
    cols = [cod.from_hom(phi @ f).coords for phi in dom.basis]
    return dom, cod, GroupHom(dom.group, cod.group, IntMatrix.from_columns(cols, cod.group.ngens))


def hom_postcompose(C: FgAbGroup, f: GroupHom) -> tuple[HomGroup, HomGroup, GroupHom]:
    """``Hom(C, f): Hom(C, source f) -> Hom(C, target f)``, ``phi -> f @ phi``."""
    dom, cod = hom_group(C, f.source), hom_group(C, f.target)
    cols = [cod.from_hom(f @ phi).coords for phi in dom.basis]
    return dom, cod, GroupHom(dom.group, cod.group, IntMatrix.from_columns(cols, cod.group.ngens))


def dual(G: FgAbGroup) -> FgAbGroup:
    return hom_group(G, FgAbGroup.free(1)).group


def dual_hom(f: GroupHom) -> GroupHom:
    """``f^* = Hom(f, Z)``."""
    return hom_precompose(f, FgAbGroup.free(1))[2]


def tensor_presentation(G: FgAbGroup, H: FgAbGroup) -> FgAbGroup:
    """Quotient of ``Z^(g*h)`` by ``R_G (x) 1`` and ``1 (x) R_H``; basis index ``i*h + j``."""
    g, h = G.ngens, H.ngens
    rel = G.relations.kron(IntMatrix.identity(h)).hstack(IntMatrix.identity(g).kron(H.relations))
    return FgAbGroup(rel)


def tensor_map(f: GroupHom, g: GroupHom) -> GroupHom:
    """``f (x) g`` between the raw tensor presentations."""
    return GroupHom(
        tensor_presentation(f.source, g.source),
        tensor_presentation(f.target, g.target),
        f.matrix.kron(g.matrix),
    )


class TensorProduct:
    """``G (x) H`` in canonical form with its universal bilinear map."""

    def __init__(self, G: FgAbGroup, H: FgAbGroup):
        self.left, self.right = G, H
        self.raw = tensor_presentation(G, H)
        s = self.raw.simplification
        self.group = s.group
        self._to_canon = s.to_canonical
        self._from_canon = s.from_canonical

    def __repr__(self):
        return f"TensorProduct({self.left.literal()}, {self.right.literal()}) = {self.group.literal()}"

    def __call__(self, u: GroupElement | Sequence[int], v: GroupElement | Sequence[int]) -> GroupElement:
        u = u.coords if isinstance(u, GroupElement) else self.left._check_vec(u)
        v = v.coords if isinstance(v, GroupElement) else self.right._check_vec(v)
        pure = [a * b for a in u for b in v]
        return self._to_canon(pure)

    def from_raw(self, raw: Sequence[int]) -> GroupElement:
        return self._to_canon(raw)

    def to_raw(self, x: GroupElement) -> tuple[int, ...]:
        return self._from_canon(x).coords


def tensor(G: FgAbGroup, H: FgAbGroup) -> TensorProduct:
    return TensorProduct(G, H)


# exactness ---------------------------------------------------------------


def is_exact_at(f: GroupHom, g: GroupHom) -> bool:
    """``image(f) == kernel(g)`` inside the middle group."""
    if f.target != g.source:
        raise InputError("maps are not composable")
    if not (g @ f).is_zero():
        return False
    return is_subgroup(kernel(g).inclusion, f)


class ShortExactSeq:
    """``0 -> A --f--> B --g--> C -> 0``; validated on construction."""

    def __init__(self, f: GroupHom, g: GroupHom):
        if f.target != g.source:
            raise InputError("maps are not composable")
        if not f.is_injective():
            raise InputError("first map of a short exact sequence must be injective")
        if not g.is_surjective():
            raise InputError("second map of a short exact sequence must be surjective")
        if not is_exact_at(f, g):
            raise InputError("sequence is not exact in the middle")
        self.f, self.g = f, g

    @property
    def A(self) -> FgAbGroup:
        return self.f.source

    @property
    def B(self) -> FgAbGroup:
        return self.f.target

    @property
    def C(self) -> FgAbGroup:
        return self.g.target

    @classmethod
    def split(cls, A: FgAbGroup, C: FgAbGroup) -> ShortExactSeq:
        S = direct_sum(A, C)
        return cls(S.injections[0], S.projections[1])


@dataclass(frozen=True)
class Splitting:
    section: GroupHom
    retraction: GroupHom


def _solve_in_hom(candidates: list[GroupElement], goal: GroupElement) -> Optional[tuple[int, ...]]:
    """Integer coefficients c with sum c_k * candidates[k] == goal in a canonical group."""
    G = goal.owner
    cols = [x.canonical() for x in candidates]
    coeff = IntMatrix.from_columns(cols, len(G.moduli))
    return solve_congruence(CongruenceSystem(coeff, goal.canonical(), G.moduli))


def _combine(H: HomGroup, coeffs: Sequence[int]) -> GroupHom:
    x = H.group.zero_element()
    for c, e in zip(coeffs, H.group.generators()):
        x = x + c * e
    return H.to_hom(x)


def is_split(s: ShortExactSeq) -> Optional[Splitting]:
    """Section of ``g`` and retraction of ``f`` if the sequence splits, else ``None``."""
    A, B, C = s.A, s.B, s.C
    HCB, HCC = hom_group(C, B), hom_group(C, C)
    sec = _solve_in_hom([HCC.from_hom(s.g @ phi) for phi in HCB.basis], HCC.from_hom(GroupHom.identity(C)))
    HBA, HAA = hom_group(B, A), hom_group(A, A)
    ret = _solve_in_hom([HAA.from_hom(phi @ s.f) for phi in HBA.basis], HAA.from_hom(GroupHom.identity(A)))
    if (sec is None) != (ret is None):
        raise ContractError("section and retraction existence disagree")
    if sec is None:
        return None
    section, retraction = _combine(HCB, sec), _combine(HBA, ret)
    if not (s.g @ section).equals(GroupHom.identity(C)) or not (retraction @ s.f).equals(GroupHom.identity(A)):
        raise ContractError("splitting witnesses fail their equations")
    return Splitting(section, retraction)


def divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def is_pure(s: ShortExactSeq) -> bool:
    """Does ``f (x) Z/d`` stay injective for every ``d`` dividing the quotient's torsion exponent?

    A cyclic summand ``Z/n`` of ``C`` with a non-split extension class is
    detected by the probe ``d = n``, and every such ``n`` divides the
    exponent, so these finitely many probes decide purity.
    """
    for d in divisors(s.C.exponent()):
        if d == 1:
            continue
        Zd = FgAbGroup.cyclic(d)
        if not tensor_map(s.f, GroupHom.identity(Zd)).is_injective():
            return False
    return True


def hom_tensor_adjunction_check(A: FgAbGroup, B: FgAbGroup, C: FgAbGroup, bound: int = 10_000) -> bool:
    """Exhaustively check ``Hom(A (x) B, C) -> Hom(A, Hom(B, C))``, ``f -> (a -> f(a (x) -))``."""
    for G in (A, B, C):
        if not G.is_finite:
            raise InputError(f"exhaustive adjunction check needs finite groups, got {G.literal()}")
    T = tensor(A, B)
    left = hom_group(T.group, C)
    HBC = hom_group(B, C)
    right = hom_group(A, HBC.group)
    n_left, n_right = left.group.order(), right.group.order()
    if max(n_left, n_right) > bound:
        raise InputError(f"enumeration of {max(n_left, n_right)} homomorphisms exceeds bound {bound}")
    seen = set()
    for f in left.elements():
        cols = []
        for a in A.generators():
            images = [f(T(a, b)).coords for b in B.generators()]
            partial = GroupHom.from_images(B, C, images)
            cols.append(HBC.from_hom(partial).coords)
        try:
            adjoint = GroupHom(A, HBC.group, IntMatrix.from_columns(cols, HBC.group.ngens))
        except IllDefinedHomError:
            return False
        seen.add(right.from_hom(adjoint))
    return len(seen) == n_left == n_right


# literals -----------------------------------------------------------------

_TERM = re.compile(r"\s*(?:(Z)(?:\s*\^\s*(\d+)|\s*/\s*(\d+))?|(0))\s*")


def parse_group(text: str) -> FgAbGroup:
    """Parse ``"Z^r + Z/d1 + Z/d2"`` (whitespace-insensitive; ``0`` is the zero group)."""
    pos, factors, free = 0, [], 0
    if not text.strip():
        raise LiteralError("empty group literal", text, 0)
    while True:
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or not (m.group(1) or m.group(4)):
            raise LiteralError("expected 'Z', 'Z^r', 'Z/d' or '0'", text, len(text) - len(text[pos:].lstrip()))
        if m.group(1):
            if m.group(2) is not None:
                free += int(m.group(2))
            elif m.group(3) is not None:
                d = int(m.group(3))
                if d == 0:
                    free += 1
                elif d > 1:
                    factors.append(d)
            else:
                free += 1
        pos = m.end()
        if pos == len(text):
            break
        if text[pos] != "+":
            raise LiteralError("expected '+'", text, pos)
        pos += 1
    return FgAbGroup.from_invariant_factors(factors, free)


def hom_to_json(f: GroupHom) -> dict:
    """Serialize with source and target in canonical form, the matrix rewritten to match."""
    core = f.target.simplification.to_canonical @ f @ f.source.simplification.from_canonical
    return {"source": f.source.literal(), "target": f.target.literal(), "matrix": core.matrix.to_json()}


def hom_from_json(data: dict) -> GroupHom:
    src, tgt = parse_group(data["source"]), parse_group(data["target"])
    return GroupHom(src, tgt, IntMatrix.from_json(data["matrix"], src.ngens))
