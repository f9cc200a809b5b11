"""The torsion category Tor^Z(A, B) for finite A, B, truncated by rank.

Objects are triples ``(Z^n, eps, eta)`` with ``eps[i] = eps(e_i)`` in ``A`` and
``eta[i] = eta(e_i^*)`` in ``B``. A morphism ``(Z^n, eps_x, eta_x) ->
(Z^m, eps_y, eta_y)`` is an ``m x n`` integer matrix ``M`` with
``M^T eps_y = eps_x`` in ``A^n`` and ``M eta_x = eta_y`` in ``B^m``. Both
conditions are congruences modulo divisors of ``e = lcm(exp A, exp B)``, so
``M`` only matters modulo ``e``.

Elements of ``A`` and ``B`` are stored as coordinate tuples with respect to
their invariant-factor decompositions.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import gcd, prod
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .complexes import ChainComplex
from .errors import ContractError, InputError
from .fgab import FgAbGroup, GroupElement, GroupHom, TensorProduct, tensor
from .intlin import CongruenceSystem, IntMatrix, lcm, solve_congruence
from .torfun import tor

Element = tuple[int, ...]


@dataclass(frozen=True)
class TorTriple:
    """``(Z^n, eps, eta)``; ``eps`` and ``eta`` hold one element per basis vector."""

    eps: tuple[Element, ...]
    eta: tuple[Element, ...]

    def __post_init__(self):
        if len(self.eps) != len(self.eta):
            raise InputError("eps and eta must have one entry per basis vector")

    @property
    def rank(self) -> int:
        return len(self.eps)

    def __repr__(self):
        def show(v):
            return ",".join(str(x[0]) if len(x) == 1 else str(x) for x in v)
        return f"(Z^{self.rank}, ({show(self.eps)}), ({show(self.eta)}))"


class TorCategory:
    """``Tor^Z(A, B)`` for finite ``A``, ``B`` given up to isomorphism."""

    def __init__(self, A: FgAbGroup, B: FgAbGroup):
        for G in (A, B):
            if not G.is_finite:
                raise InputError(f"torsion category needs finite groups, got {G.literal()}")
        self.A = FgAbGroup.from_invariant_factors(A.canonical.factors)
        self.B = FgAbGroup.from_invariant_factors(B.canonical.factors)
        self.a = self.A.canonical.factors
        self.b = self.B.canonical.factors
        self.exponent = lcm(self.A.exponent(), self.B.exponent())
        self.order_A = prod(self.a)
        self.order_B = prod(self.b)
        self._tensor: Optional[TensorProduct] = None

    def __repr__(self):
        return f"TorCategory({self.A.literal()}, {self.B.literal()})"

    def __eq__(self, other):
        return isinstance(other, TorCategory) and (self.a, self.b) == (other.a, other.b)

    def __hash__(self):
        return hash((self.a, self.b))

    # objects ----------------------------------------------------------------

    def _element(self, x, moduli: tuple[int, ...]) -> Element:
        if isinstance(x, GroupElement):
            x = x.canonical()
        elif isinstance(x, int):
            if len(moduli) != 1:
                raise InputError("integer elements are only accepted for cyclic groups")
            x = (x,)
        x = tuple(int(v) for v in x)
        if len(x) != len(moduli):
            raise InputError(f"element {x} does not have {len(moduli)} coordinates")
        return tuple(v % m for v, m in zip(x, moduli))

    def triple(self, eps: Iterable, eta: Iterable) -> TorTriple:
        """Build an object; cyclic-group elements may be given as plain ints."""
        return TorTriple(
            tuple(self._element(x, self.a) for x in eps),
            tuple(self._element(y, self.b) for y in eta),
        )

    @property
    def zero(self) -> TorTriple:
        return TorTriple((), ())

    def validate(self, x: TorTriple):
        ok = all(len(v) == len(self.a) and all(0 <= c < m for c, m in zip(v, self.a)) for v in x.eps) and all(
            len(v) == len(self.b) and all(0 <= c < m for c, m in zip(v, self.b)) for v in x.eta
        )
        if not ok:
            raise InputError(f"{x} is not an object of {self}")

    def box(self, x: TorTriple, y: TorTriple) -> TorTriple:
        """``x [] y = (P_x + P_y, (eps_x, eps_y), (eta_x, eta_y))``."""
        return TorTriple(x.eps + y.eps, x.eta + y.eta)

    def scale(self, k: int, x: TorTriple) -> TorTriple:
        """``k x`` read as scaling the ``eps`` entries.

        ``(Z^n, k eps, eta) -> (Z^n, eps, k eta)`` via ``k * identity``, so
        scaling either side lands in the same component.
        """
        return TorTriple(tuple(self._element([k * c for c in v], self.a) for v in x.eps), x.eta)

    # morphisms -----------------------------------------------------------

    def is_morphism(self, M: IntMatrix, x: TorTriple, y: TorTriple) -> bool:
        if M.shape != (y.rank, x.rank):
            return False
        for i in range(x.rank):
            for c, a in enumerate(self.a):
                if (sum(M[j, i] * y.eps[j][c] for j in range(y.rank)) - x.eps[i][c]) % a:
                    return False
        for j in range(y.rank):
            for c, b in enumerate(self.b):
                if (sum(M[j, i] * x.eta[i][c] for i in range(x.rank)) - y.eta[j][c]) % b:
                    return False
        return True

    def morphism_system(self, x: TorTriple, y: TorTriple) -> CongruenceSystem:
        """The conditions on ``M`` (unknown ``M[j, i]`` at index ``j * n + i``)."""
        n, m = x.rank, y.rank
        rows, rhs, moduli = [], [], []
        for i in range(n):
            for c, a in enumerate(self.a):
                row = [0] * (m * n)
                for j in range(m):
                    row[j * n + i] = y.eps[j][c]
                rows.append(row); rhs.append(x.eps[i][c]); moduli.append(a)
        for j in range(m):
            for c, b in enumerate(self.b):
                row = [0] * (m * n)
                for i in range(n):
                    row[j * n + i] = x.eta[i][c]
                rows.append(row); rhs.append(y.eta[j][c]); moduli.append(b)
        return CongruenceSystem(IntMatrix.from_rows(rows, m * n), rhs, moduli)

    def morphism_exists(self, x: TorTriple, y: TorTriple, method: str = "solve") -> Optional[IntMatrix]:
        """A witness matrix for ``x -> y`` (entries reduced mod e), or ``None``.

        ``method="enumerate"`` scans all ``e^(mn)`` residue matrices instead
        of solving; it is the brute-force oracle for small cases.
        """
        self.validate(x)
        self.validate(y)
        n, m = x.rank, y.rank
        e = self.exponent
        if method == "enumerate":
            for entries in itertools.product(range(e), repeat=m * n):
                M = IntMatrix(m, n, entries)
                if self.is_morphism(M, x, y):
                    return M
            return None
        if method != "solve":
            raise InputError(f"unknown method {method!r}")
        sol = solve_congruence(self.morphism_system(x, y))
        if sol is None:
            return None
        M = IntMatrix(m, n, (v % e for v in sol))
        if not self.is_morphism(M, x, y):
            raise ContractError("congruence solution is not a morphism")
        return M

    # the chi invariant ---------------------------------------------------------

    @property
    def tensor(self) -> TensorProduct:
        if self._tensor is None:
            self._tensor = tensor(self.A, self.B)
        return self._tensor

    def chi(self, x: TorTriple) -> GroupElement:
        """``sum_i eps[i] (x) eta[i]`` in ``A (x) B``."""
        T = self.tensor
        out = T.group.zero_element()
        for u, v in zip(x.eps, x.eta):
            out = out + T(u, v)
        return out

    @property
    def _chi_moduli(self) -> list[tuple[int, int, int]]:
        """(A coordinate, B coordinate, gcd) for every nontrivial summand of A (x) B."""
        return [(c, d, gcd(a, b)) for c, a in enumerate(self.a) for d, b in enumerate(self.b) if gcd(a, b) > 1]


def classifying_invariant(cat: TorCategory, x: TorTriple) -> GroupElement:
    return cat.chi(x)


def box(cat: TorCategory, x: TorTriple, y: TorTriple) -> TorTriple:
    return cat.box(x, y)


def morphism_exists(cat: TorCategory, x: TorTriple, y: TorTriple, method: str = "solve") -> Optional[IntMatrix]:
    return cat.morphism_exists(x, y, method)


# truncation -----------------------------------------------------------------------


@dataclass
class Truncation:
    """All objects of rank at most ``max_rank``, ordered by rank then lexicographically."""

    category: TorCategory
    max_rank: int
    objects: list[TorTriple]
    index: dict[TorTriple, int] = field(repr=False)
    offsets: list[int] = field(repr=False)

    @property
    def A(self) -> FgAbGroup:
        return self.category.A

    @property
    def B(self) -> FgAbGroup:
        return self.category.B

    @property
    def exponent(self) -> int:
        return self.category.exponent

    def __len__(self):
        return len(self.objects)

    def id_of(self, x: TorTriple) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise InputError(f"{x} is not in this truncation") from None

    def rank_block(self, n: int) -> range:
        return range(self.offsets[n], self.offsets[n + 1])

    def arrays(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """``eps`` and ``eta`` of every rank-``n`` object, shapes (N, n, kA) and (N, n, kB)."""
        block = [self.objects[i] for i in self.rank_block(n)]
        kA, kB = len(self.category.a), len(self.category.b)
        eps = np.array([x.eps for x in block], dtype=np.int64).reshape(len(block), n, kA)
        eta = np.array([x.eta for x in block], dtype=np.int64).reshape(len(block), n, kB)
        return eps, eta


def shuffled(t: Truncation, seed: int) -> Truncation:
    """The same truncation with objects permuted inside each rank block."""
    rng = random.Random(seed)
    objects = []
    for n in range(t.max_rank + 1):
        block = t.objects[t.offsets[n]:t.offsets[n + 1]]
        rng.shuffle(block)
        objects.extend(block)
    return Truncation(t.category, t.max_rank, objects, {x: i for i, x in enumerate(objects)}, list(t.offsets))


def enumerate_objects(A: FgAbGroup, B: FgAbGroup, max_rank: int) -> Truncation:
    if max_rank < 0:
        raise InputError("truncation rank must be non-negative")
    cat = TorCategory(A, B)
    elems_A = list(itertools.product(*(range(a) for a in cat.a)))
    elems_B = list(itertools.product(*(range(b) for b in cat.b)))
    objects, offsets = [], []
    for n in range(max_rank + 1):
        offsets.append(len(objects))
        for eps in itertools.product(elems_A, repeat=n):
            for eta in itertools.product(elems_B, repeat=n):
                objects.append(TorTriple(eps, eta))
    offsets.append(len(objects))
    expected = sum((cat.order_A * cat.order_B) ** n for n in range(max_rank + 1))
    if len(objects) != expected:
        raise ContractError("object enumeration is incomplete")
    return Truncation(cat, max_rank, objects, {x: i for i, x in enumerate(objects)}, offsets)


# path components --------------------------------------------------------------------


class UnionFind:
    """Disjoint sets over ``0..n-1`` with union by size and path halving."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.size[rx] < self.size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]
        return True

    def labels(self) -> list[int]:
        return [self.find(i) for i in range(len(self.parent))]


@dataclass
class ComponentPartition:
    """Path components of the truncated classifying space.

    ``labels[i]`` numbers components by first appearance in object order,
    so ``representatives[c]`` is a lowest-rank object of component ``c``.
    ``parent`` is the flattened union-find forest (each object points at
    its representative). ``edge_count`` counts ordered pairs ``x != y``
    joined by at least one morphism, when known.
    """

    labels: list[int]
    count: int
    representatives: list[int]
    edge_count: Optional[int] = None
    method: str = "residue"

    @property
    def parent(self) -> list[int]:
        return [self.representatives[c] for c in self.labels]

    def same(self, i: int, j: int) -> bool:
        return self.labels[i] == self.labels[j]

    def as_sets(self) -> frozenset[frozenset[int]]:
        groups: dict[int, set[int]] = {}
        for i, c in enumerate(self.labels):
            groups.setdefault(c, set()).add(i)
        return frozenset(frozenset(g) for g in groups.values())


def _normalize_labels(raw: Sequence[int]) -> tuple[list[int], list[int]]:
    seen: dict[int, int] = {}
    labels, reps = [], []
    for i, r in enumerate(raw):
        if r not in seen:
            seen[r] = len(seen)
            reps.append(i)
        labels.append(seen[r])
    return labels, reps


def _encode(arr: np.ndarray, moduli: Sequence[int], n: int) -> np.ndarray:
    """Mixed-radix code of the trailing (n, k) axes of ``arr``."""
    k = len(moduli)
    radices = np.tile(np.asarray(moduli, dtype=np.int64), n) if n and k else np.zeros(0, dtype=np.int64)
    weights = np.ones(n * k, dtype=np.int64)
    for t in range(1, n * k):
        weights[t] = weights[t - 1] * radices[t - 1]
    flat = arr.reshape(arr.shape[:-2] + (n * k,))
    return flat @ weights if n * k else np.zeros(arr.shape[:-2], dtype=np.int64)


def chi_codes(t: Truncation) -> np.ndarray:
    """Integer code of chi for every object (equal codes iff equal chi)."""
    cat = t.category
    summands = cat._chi_moduli
    codes = np.zeros(len(t), dtype=np.int64)
    for n in range(t.max_rank + 1):
        eps, eta = t.arrays(n)
        block = t.rank_block(n)
        weight = 1
        out = np.zeros(len(block), dtype=np.int64)
        for c, d, g in summands:
            val = (eps[:, :, c] * eta[:, :, d]).sum(axis=1) % g if n else np.zeros(len(block), dtype=np.int64)
            out += weight * val
            weight *= g
        codes[block.start:block.stop] = out
    return codes


def residue_adjacency(t: Truncation, chunk_budget: int = 2_000_000) -> np.ndarray:
    """Boolean matrix ``adj[x, y]``: is there a morphism ``x -> y``?

    For every pair of ranks and every residue matrix ``M`` mod ``e`` the
    targets of ``x`` are exactly the ``y`` with ``eta_y = M eta_x`` and
    ``M^T eps_y = eps_x``; both sides are hashed and joined, so each residue
    matrix costs one sort instead of a scan over all pairs.
    """
    cat = t.category
    e = cat.exponent
    a = np.asarray(cat.a, dtype=np.int64)
    b = np.asarray(cat.b, dtype=np.int64)
    N = len(t)
    adj = np.zeros((N, N), dtype=bool)
    for n in range(t.max_rank + 1):
        epsX, etaX = t.arrays(n)
        bx = t.rank_block(n)
        codeEpsX = _encode(epsX, cat.a, n)
        for m in range(t.max_rank + 1):
            epsY, etaY = t.arrays(m)
            by = t.rank_block(m)
            codeEtaY = _encode(etaY, cat.b, m)
            SB = cat.order_B ** m
            SA = cat.order_A ** n
            Nx, Ny = len(bx), len(by)
            total = e ** (m * n)
            per = max(1, (Nx + Ny) * max(n, m, 1) * max(len(cat.a), len(cat.b), 1))
            chunk = max(1, chunk_budget // per)
            for start in range(0, total, chunk):
                idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
                c = len(idx)
                digits = np.empty((c, m * n), dtype=np.int64)
                rest = idx.copy()
                for p in range(m * n):
                    digits[:, p] = rest % e
                    rest //= e
                Ms = digits.reshape(c, m, n)
                E = np.einsum("cji,yjk->cyik", Ms, epsY) % a if n and m else np.zeros((c, Ny, n, len(cat.a)), np.int64)
                H = np.einsum("cji,xik->cxjk", Ms, etaX) % b if n and m else np.zeros((c, Nx, m, len(cat.b)), np.int64)
                local = np.arange(c, dtype=np.int64)[:, None]
                keyY = ((local * SA + _encode(E, cat.a, n)) * SB + codeEtaY[None, :]).ravel()
                keyX = ((local * SA + codeEpsX[None, :]) * SB + _encode(H, cat.b, m)).ravel()
                order = np.argsort(keyY, kind="stable")
                sortedY = keyY[order]
                lo = np.searchsorted(sortedY, keyX, side="left")
                hi = np.searchsorted(sortedY, keyX, side="right")
                counts = hi - lo
                hits = counts.nonzero()[0]
                if not len(hits):
                    continue
                counts = counts[hits]
                starts = lo[hits]
                xs = np.repeat(hits % Nx, counts)
                offs = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
                ys = order[np.repeat(starts, counts) + offs] % Ny
                adj[bx.start + xs, by.start + ys] = True
    return adj


def pi0(t: Truncation, method: str = "residue", seed: Optional[int] = None, skip_connected: bool = True) -> ComponentPartition:
    """Path components: weak closure of morphism existence over all object pairs.

    ``method="residue"`` builds the full adjacency by hashing residue
    matrices (fast, exact). ``method="solve"`` calls the congruence solver on
    every ordered pair, merging in a union-find; with ``seed`` the pair order
    is shuffled. Either way chi is checked on every edge used.
    """
    codes = chi_codes(t)
    if method == "residue":
        adj = residue_adjacency(t)
        xs, ys = np.nonzero(adj)
        if np.any(codes[xs] != codes[ys]):
            raise ContractError("chi differs across a morphism")
        _, raw = connected_components(csr_matrix(adj), directed=True, connection="weak")
        labels, reps = _normalize_labels(raw.tolist())
        edges = int(adj.sum() - np.trace(adj))
        return ComponentPartition(labels, len(reps), reps, edges, "residue")
    if method != "solve":
        raise InputError(f"unknown method {method!r}")
    N = len(t)
    pairs = [(i, j) for i in range(N) for j in range(N) if i != j]
    if seed is not None:
        random.Random(seed).shuffle(pairs)
    uf = UnionFind(N)
    edges = 0
    cat = t.category
    for i, j in pairs:
        if skip_connected and uf.find(i) == uf.find(j):
            continue
        if cat.morphism_exists(t.objects[i], t.objects[j]) is not None:
            if codes[i] != codes[j]:
                raise ContractError("chi differs across a morphism")
            edges += 1
            uf.union(i, j)
    # relabel by the smallest member so labels do not depend on merge order
    root_min: dict[int, int] = {}
    roots = uf.labels()
    for i, r in enumerate(roots):
        root_min.setdefault(r, i)
    labels, reps = _normalize_labels([root_min[r] for r in roots])
    return ComponentPartition(labels, len(reps), reps, None if skip_connected else edges, "solve")


# component group --------------------------------------------------------------------


@dataclass
class ComponentGroup:
    """Comparison of path components with ``A (x) B`` through chi.

    ``chi_bar[c]`` is the common chi value of component ``c``. When
    ``bijection`` holds, ``group`` is ``A (x) B``; otherwise the truncation
    is too small to separate or reach every element and ``group`` is ``None``.
    """

    chi_bar: list[GroupElement]
    injective: bool
    surjective: bool
    image_size: int
    tensor_order: int
    group: Optional[FgAbGroup]
    box_checks: int
    box_consistent: bool

    @property
    def bijection(self) -> bool:
        return self.injective and self.surjective

    def component_of_element(self, x: GroupElement) -> Optional[int]:
        for c, v in enumerate(self.chi_bar):
            if v == x:
                return c
        return None


def component_group(t: Truncation, p: ComponentPartition) -> ComponentGroup:
    cat = t.category
    codes = chi_codes(t)
    rep_codes = codes[np.asarray(p.representatives, dtype=np.int64)]
    if np.any(codes != rep_codes[np.asarray(p.labels, dtype=np.int64)]):
        raise ContractError("chi is not constant on a component")
    chi_bar = [cat.chi(t.objects[r]) for r in p.representatives]
    image = {x.canonical() for x in chi_bar}
    order = cat.tensor.group.order()
    injective = len(image) == p.count
    surjective = len(image) == order
    checks, consistent = 0, True
    for c1, r1 in enumerate(p.representatives):
        for c2, r2 in enumerate(p.representatives):
            x, y = t.objects[r1], t.objects[r2]
            if x.rank + y.rank > t.max_rank:
                continue
            z = t.id_of(cat.box(x, y))
            checks += 1
            if chi_bar[p.labels[z]] != chi_bar[c1] + chi_bar[c2]:
                consistent = False
    group = cat.tensor.group if injective and surjective else None
    return ComponentGroup(chi_bar, injective, surjective, len(image), order, group, checks, consistent)


def pi0_report(A: FgAbGroup, B: FgAbGroup, max_rank: int = 2, _run=None) -> dict:
    """The CLI/JSON summary of a truncated component computation."""
    if _run is None:
        t = enumerate_objects(A, B, max_rank)
        p = pi0(t)
    else:
        t, p = _run
    cg = component_group(t, p)
    return {
        "A": A.literal(),
        "B": B.literal(),
        "maxRank": str(max_rank),
        "objectCount": str(len(t)),
        "edgeCount": str(p.edge_count),
        "componentCount": str(p.count),
        "chiImageSize": str(cg.image_size),
        "bijection": cg.bijection,
        "componentGroup": {
            "literal": cg.group.literal() if cg.group is not None else None,
            "invariant_factors": [str(d) for d in cg.group.canonical.factors] if cg.group is not None else None,
            "free_rank": str(cg.group.canonical.free_rank) if cg.group is not None else None,
            "components": [
                {"representative": repr(t.objects[r]), "chi": [str(v) for v in cg.chi_bar[c].canonical()]}
                for c, r in enumerate(p.representatives)
            ],
        },
    }


def paper_example_report() -> dict:
    """Rerun the Z/4 (x) Z/6 computation and machine-check each step of its argument."""
    A, B = FgAbGroup.cyclic(4), FgAbGroup.cyclic(6)
    t = enumerate_objects(A, B, 2)
    p = pi0(t)
    runs = {1: pi0_report(A, B, 1), 2: pi0_report(A, B, 2, _run=(t, p))}
    cat = t.category
    comp = lambda x: p.labels[t.id_of(x)]  # noqa: E731
    zero = cat.zero
    gen = cat.triple([1], [1])

    # every object sits in the component of some k * (Z, 1, 1)
    multiples = {comp(cat.scale(k, gen)) for k in range(cat.exponent)}
    generator_ok = all(p.labels[i] in multiples for i in range(len(t)))
    # rank-one objects (Z, eps, eta) meet (0,0,0) by a morphism iff eps = 0 or eta = 0
    criterion_ok = True
    for x in t.objects[t.offsets[1]:t.offsets[2]]:
        linked = cat.morphism_exists(x, zero) is not None or cat.morphism_exists(zero, x) is not None
        if linked != (x.eps[0] == (0,) or x.eta[0] == (0,)):
            criterion_ok = False
    four, six, two = cat.scale(4, gen), cat.scale(6, gen), cat.scale(2, gen)
    relations = {
        "4(Z,1,1) = (Z,0,1) ~ (0,0,0)": four == cat.triple([0], [1]) and comp(four) == comp(zero),
        "6(Z,1,1) ~ (Z,1,0) ~ (0,0,0)": comp(six) == comp(cat.triple([1], [0])) == comp(zero),
        "2(Z,1,1) ~ (0,0,0)": comp(two) == comp(zero) and comp(cat.triple([2], [2])) == comp(zero),
        "(Z,1,1) [] (Z,1,1) ~ (0,0,0)": comp(cat.box(gen, gen)) == comp(zero),
        "(Z,1,1) not linked to (0,0,0) by a morphism": cat.morphism_exists(gen, zero) is None and cat.morphism_exists(zero, gen) is None,
        "(Z,1,1) not ~ (0,0,0)": comp(gen) != comp(zero),
    }
    return {
        "A": A.literal(),
        "B": B.literal(),
        "runs": {str(R): runs[R] for R in runs},
        "steps": {
            "generators": generator_ok,
            "connectivity_criterion": criterion_ok,
            "relations": relations,
        },
        "componentCount": runs[2]["componentCount"],
        "componentGroup": runs[2]["componentGroup"]["literal"],
        "tensor": tensor(A, B).group.literal(),
        "all_checks_pass": generator_ok and criterion_ok and all(relations.values()) and runs[2]["bijection"],
    }


# nerve experiment ---------------------------------------------------------------------


@dataclass
class FiniteCategory:
    """A finite category by its non-identity arrows.

    ``composites[(f, g)]`` is the arrow ``g o f`` for composable non-identity
    ``f: x -> y``, ``g: y -> z``, or ``None`` when the composite is an identity.
    """

    n_objects: int
    arrows: list[tuple[int, int]]
    composites: dict[tuple[int, int], Optional[int]]

    @classmethod
    def poset(cls, n: int) -> FiniteCategory:
        """``[n] = {0 <= 1 <= ... <= n}``."""
        arrows = [(i, j) for i in range(n + 1) for j in range(i + 1, n + 1)]
        idx = {a: k for k, a in enumerate(arrows)}
        comp = {}
        for f, (i, j) in enumerate(arrows):
            for g, (j2, k) in enumerate(arrows):
                if j2 == j:
                    comp[(f, g)] = idx[(i, k)]
        return cls(n + 1, arrows, comp)

    @classmethod
    def parallel_pair(cls) -> FiniteCategory:
        """Two objects, two parallel non-identity arrows."""
        return cls(2, [(0, 1), (0, 1)], {})


def nerve_complex(cat: FiniteCategory) -> ChainComplex:
    """Normalized chains of the nerve, degrees 0..2."""
    V, E = cat.n_objects, len(cat.arrows)
    pairs = sorted(cat.composites)
    d1 = [[0] * E for _ in range(V)]
    for k, (s, t) in enumerate(cat.arrows):
        d1[t][k] += 1
        d1[s][k] -= 1
    d2 = [[0] * len(pairs) for _ in range(E)]
    for k, (f, g) in enumerate(pairs):
        d2[g][k] += 1
        d2[f][k] += 1
        gf = cat.composites[(f, g)]
        if gf is not None:
            d2[gf][k] -= 1
    C0, C1, C2 = FgAbGroup.free(V), FgAbGroup.free(E), FgAbGroup.free(len(pairs))
    return ChainComplex(0, [C0, C1, C2], [
        GroupHom(C1, C0, IntMatrix.from_rows(d1, E)),
        GroupHom(C2, C1, IntMatrix.from_rows(d2, len(pairs))),
    ])


def nerve_h1(cat: FiniteCategory) -> FgAbGroup:
    return nerve_complex(cat).homology(1).group


def residue_category(t: Truncation) -> FiniteCategory:
    """Full subcategory on ``t``'s objects with morphisms taken modulo ``e``."""
    tc = t.category
    e = tc.exponent
    arrows, mats = [], []
    for i, x in enumerate(t.objects):
        for j, y in enumerate(t.objects):
            for entries in itertools.product(range(e), repeat=x.rank * y.rank):
                M = IntMatrix(y.rank, x.rank, entries)
                if i == j and M == IntMatrix(x.rank, x.rank, (int(r == c) % e for r in range(x.rank) for c in range(x.rank))):
                    continue
                if tc.is_morphism(M, x, y):
                    arrows.append((i, j))
                    mats.append(M)
    key = {(s, tgt, M): k for k, ((s, tgt), M) in enumerate(zip(arrows, mats))}
    out_of: dict[int, list[int]] = {}
    for k, (s, _) in enumerate(arrows):
        out_of.setdefault(s, []).append(k)
    comp = {}
    for f, (s, mid) in enumerate(arrows):
        for g in out_of.get(mid, []):
            tgt = arrows[g][1]
            P = mats[g] @ mats[f]
            P = IntMatrix(P.rows, P.cols, (v % e for v in P.entries))
            comp[(f, g)] = key.get((s, tgt, P))
    return FiniteCategory(len(t), arrows, comp)


def nerve_h1_experiment(A: FgAbGroup, B: FgAbGroup) -> dict:
    """H_1 of the nerve of the rank <= 1 residue category, next to Tor_1(A, B).

    Experimental: the comparison is reported, never asserted.
    """
    cat = TorCategory(A, B)
    if cat.order_A * cat.order_B > 30:
        raise InputError("nerve experiment is limited to |A|*|B| <= 30")
    t = enumerate_objects(A, B, 1)
    fc = residue_category(t)
    H1 = nerve_h1(fc)
    T1 = tor(cat.A, cat.B, 1).group
    return {
        "A": cat.A.literal(),
        "B": cat.B.literal(),
        "vertices": str(fc.n_objects),
        "edges": str(len(fc.arrows)),
        "triangles": str(len(fc.composites)),
        "H1": H1.literal(),
        "Tor1": T1.literal(),
        "agree": H1.canonical == T1.canonical,
    }
