"""Free resolutions over Z and the Tor functor.

Over the integers every projective module is free, so resolutions are
sequences of integer matrices. ``tor(A, B, n)`` is computed as homology of
the deleted resolution of ``A`` tensored with ``B``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Protocol, Sequence

from .complexes import (
    ChainComplex,
    ChainMap,
    ComplexSES,
    Homology,
    LongExactSequence,
    assemble_exact_sequence,
    long_exact_sequence,
)
from .errors import ContractError, InputError
from .fgab import (
    FgAbGroup,
    GroupHom,
    ShortExactSeq,
    direct_sum,
    is_exact_at,
    kernel,
    tensor,
    tensor_map,
    tensor_presentation,
)
from .intlin import IntMatrix, kernel_basis

_ZERO = FgAbGroup.zero()


@dataclass(frozen=True)
class FreeResolution:
    """``... -> Z^{r_1} --d_1--> Z^{r_0} --aug--> target -> 0``.

    ``boundaries[i]`` is ``d_{i+1}`` with shape ``r_i x r_{i+1}``.
    """

    target: FgAbGroup
    ranks: tuple[int, ...]
    boundaries: tuple[IntMatrix, ...]
    augmentation: GroupHom

    def __post_init__(self):
        if len(self.boundaries) != len(self.ranks) - 1:
            raise InputError("a resolution needs one boundary between consecutive free terms")
        for i, d in enumerate(self.boundaries):
            if d.shape != (self.ranks[i], self.ranks[i + 1]):
                raise InputError(f"d_{i + 1} has shape {d.shape}, expected {(self.ranks[i], self.ranks[i + 1])}")
        if self.augmentation.source != FgAbGroup.free(self.ranks[0]) or self.augmentation.target != self.target:
            raise InputError("augmentation must map Z^{r_0} to the target")

    @property
    def length(self) -> int:
        return len(self.ranks) - 1

    def term(self, i: int) -> FgAbGroup:
        return FgAbGroup.free(self.ranks[i] if 0 <= i < len(self.ranks) else 0)

    def d(self, i: int) -> GroupHom:
        if 1 <= i <= self.length:
            return GroupHom(self.term(i), self.term(i - 1), self.boundaries[i - 1])
        return GroupHom.zero(self.term(i), self.term(i - 1))

    def is_exact(self) -> bool:
        """Exact at every position of the augmented sequence, ending ``-> target -> 0``."""
        aug = self.augmentation
        if not aug.is_surjective():
            return False
        if not is_exact_at(self.d(1), aug):
            return False
        for i in range(1, self.length + 1):
            if not is_exact_at(self.d(i + 1), self.d(i)):
                return False
        return True


def free_resolution(G: FgAbGroup, style: str = "minimal", k: int = 0) -> FreeResolution:
    """Free resolution of ``G``.

    ``"minimal"``: ``0 -> Z^t --diag--> Z^{t+f} -> G`` from the invariant factors.
    ``"padded"``: the minimal one plus ``k`` cancelling ``Z --1--> Z`` pieces
    in degrees ``(i+1, i)`` for ``i = 1..k``.
    ``"presentation"``: read off the given relation matrix, with its kernel
    as a second step when the relations are dependent.
    """
    if style == "presentation":
        R = G.relations
        K = kernel_basis(R)
        aug = GroupHom(FgAbGroup.free(G.ngens), G, IntMatrix.identity(G.ngens))
        if R.cols == 0:
            return FreeResolution(G, (G.ngens,), (), aug)
        if K.cols == 0:
            return FreeResolution(G, (G.ngens, R.cols), (R,), aug)
        return FreeResolution(G, (G.ngens, R.cols, K.cols), (R, K), aug)
    if style not in ("minimal", "padded"):
        raise InputError(f"unknown resolution style {style!r}")
    s = G.simplification
    canon = s.group
    g, t = canon.ngens, canon.relations.cols
    aug = s.from_canonical @ GroupHom(FgAbGroup.free(g), canon, IntMatrix.identity(g))
    ranks = [g] + ([t] if t else [])
    bounds = [canon.relations] if t else []
    if style == "minimal" or k == 0:
        return FreeResolution(G, tuple(ranks), tuple(bounds), aug)
    if k < 0:
        raise InputError("padding must be non-negative")
    top = max(len(ranks) - 1, k + 1)
    # summands per degree: ("orig", rank) or (p, 1) for the piece in degrees p+1, p
    summands = {j: [("orig", ranks[j] if j < len(ranks) else 0)] for j in range(top + 1)}
    for p in range(1, k + 1):
        summands[p].insert(0, (p, 1))
        summands[p + 1].insert(0, (p, 1))
    ranks = [sum(size for _, size in summands[j]) for j in range(top + 1)]
    orig = bounds
    bounds = []
    for j in range(1, top + 1):
        rows = []
        for r_label, r_size in summands[j - 1]:
            blocks = []
            for c_label, c_size in summands[j]:
                if r_label == c_label == "orig" and j - 1 < len(orig):
                    blocks.append(orig[j - 1])
                elif r_label == c_label and r_label != "orig" and r_label == j - 1:
                    blocks.append(IntMatrix.identity(1))
                else:
                    blocks.append(IntMatrix.zeros(r_size, c_size))
            rows.append(blocks[0].hstack(*blocks[1:]))
        bounds.append(rows[0].vstack(*rows[1:]))
    return FreeResolution(G, tuple(ranks), tuple(bounds), aug)


def deleted(r: FreeResolution) -> ChainComplex:
    return ChainComplex(0, [r.term(i) for i in range(r.length + 1)], [r.d(i) for i in range(1, r.length + 1)])


def tensored(r: FreeResolution, B: FgAbGroup) -> ChainComplex:
    """The deleted resolution tensored with ``B``: ``P_i (x) B = B^{r_i}``."""
    idB = GroupHom.identity(B)
    groups = [tensor_presentation(r.term(i), B) for i in range(r.length + 1)]
    maps = [tensor_map(r.d(i), idB) for i in range(1, r.length + 1)]
    return ChainComplex(0, groups, maps)


@dataclass
class TorResult:
    degree: int
    group: FgAbGroup
    witness: Homology

    @property
    def invariant_factors(self) -> list[int]:
        return list(self.group.canonical.factors)

    @property
    def free_rank(self) -> int:
        return self.group.canonical.free_rank


def tor(A: FgAbGroup, B: FgAbGroup, n: int, resolution: Optional[FreeResolution] = None) -> TorResult:
    if n < 0:
        raise InputError("Tor degree must be non-negative")
    if resolution is None:
        resolution = free_resolution(A)
    elif resolution.target != A:
        raise InputError("resolution does not resolve the first argument")
    h = tensored(resolution, B).homology(n)
    return TorResult(n, h.group, h)


def tor_table(A: FgAbGroup, B: FgAbGroup, nmax: int = 2) -> dict:
    """Tor_0..Tor_nmax in the CLI JSON shape."""
    results = []
    for n in range(nmax + 1):
        T = tor(A, B, n)
        results.append({
            "n": str(n),
            "invariant_factors": [str(d) for d in T.invariant_factors],
            "free_rank": str(T.free_rank),
        })
    return {"A": A.literal(), "B": B.literal(), "results": results}


# long exact sequence ---------------------------------------------------------


def _extend(r: FreeResolution, length: int) -> FreeResolution:
    """Append zero free terms so the resolution has the given length."""
    ranks, bounds = list(r.ranks), list(r.boundaries)
    while len(ranks) <= length:
        bounds.append(IntMatrix.zeros(ranks[-1], 0))
        ranks.append(0)
    return FreeResolution(r.target, tuple(ranks), tuple(bounds), r.augmentation)


@dataclass
class Horseshoe:
    resolutions: tuple[FreeResolution, FreeResolution, FreeResolution]
    iota: list[IntMatrix]
    pi: list[IntMatrix]


def horseshoe(s: ShortExactSeq) -> Horseshoe:
    """Resolve ``0 -> A1 -> A2 -> A3 -> 0`` compatibly from minimal resolutions of the ends."""
    r1, r3 = free_resolution(s.A), free_resolution(s.C)
    length = max(r1.length, r3.length)
    ranks1 = list(r1.ranks) + [0] * (length + 1 - len(r1.ranks))
    ranks3 = list(r3.ranks) + [0] * (length + 1 - len(r3.ranks))
    if length > 1:
        raise ContractError("minimal resolutions over Z have length at most one")
    # lift the augmentation of A3 through g
    lam_cols = []
    for e in r3.term(0).generators():
        x = s.g.preimage(r3.augmentation(e))
        if x is None:
            raise ContractError("g is not surjective")
        lam_cols.append(x)
    lam = IntMatrix.from_columns(lam_cols, s.B.ngens)
    aug2 = GroupHom(FgAbGroup.free(ranks1[0] + ranks3[0]), s.B, (s.f.matrix @ r1.augmentation.matrix).hstack(lam))
    bounds = []
    if length == 1:
        D1 = r1.boundaries[0] if r1.length else IntMatrix.zeros(ranks1[0], 0)
        D3 = r3.boundaries[0] if r3.length else IntMatrix.zeros(ranks3[0], 0)
        T_cols = []
        for j in range(D3.cols):
            v = lam.apply(D3.col(j))
            a = s.f.preimage(v)
            if a is None:
                raise ContractError("lifted relation escapes the image of f")
            t = r1.augmentation.preimage([-x for x in a])
            if t is None:
                raise ContractError("augmentation of the left resolution is not surjective")
            T_cols.append(t)
        T = IntMatrix.from_columns(T_cols, ranks1[0])
        bounds.append(D1.hstack(T).vstack(IntMatrix.zeros(ranks3[0], D1.cols).hstack(D3)))
    r2 = FreeResolution(s.B, tuple(a + b for a, b in zip(ranks1, ranks3)), tuple(bounds), aug2)
    if not r2.is_exact():
        raise ContractError("horseshoe resolution is not exact")
    r1, r3 = _extend(r1, length), _extend(r3, length)
    iota, pi = [], []
    for i in range(length + 1):
        a, b = ranks1[i], ranks3[i]
        iota.append(IntMatrix.identity(a).vstack(IntMatrix.zeros(b, a)))
        pi.append(IntMatrix.zeros(b, a).hstack(IntMatrix.identity(b)))
    return Horseshoe((r1, r2, r3), iota, pi)


@dataclass
class TorLES:
    """Long exact Tor sequence of ``0 -> A1 -> A2 -> A3 -> 0`` against ``B``."""

    sequence: LongExactSequence
    complexes: ComplexSES
    horseshoe: Horseshoe

    @property
    def is_exact(self) -> bool:
        return self.sequence.is_exact

    def connecting(self, n: int = 1) -> GroupHom:
        label = f"Tor{n}(A3,B)"
        if n >= 1 and label not in self.sequence.labels:
            # beyond the resolution length Tor_n vanishes
            return GroupHom.zero(FgAbGroup.zero(), self.sequence.term(f"Tor{n - 1}(A1,B)"))
        return self.sequence.map_from(label)

    def homology(self, which: int, n: int) -> Homology:
        """Homology witness of ``Tor_n(A_which, B)`` (which in 1..3)."""
        return self.complexes.complexes[which - 1].homology(n)


def tor_les(s: ShortExactSeq, B: FgAbGroup) -> TorLES:
    hs = horseshoe(s)
    idB = GroupHom.identity(B)
    cx = [tensored(r, B) for r in hs.resolutions]
    length = hs.resolutions[1].length
    iota = ChainMap(cx[0], cx[1], {
        i: tensor_map(GroupHom(hs.resolutions[0].term(i), hs.resolutions[1].term(i), hs.iota[i]), idB)
        for i in range(length + 1)
    })
    pi = ChainMap(cx[1], cx[2], {
        i: tensor_map(GroupHom(hs.resolutions[1].term(i), hs.resolutions[2].term(i), hs.pi[i]), idB)
        for i in range(length + 1)
    })
    ses = ComplexSES(iota, pi)
    seq = long_exact_sequence(ses)
    # prepend the vanishing Tor_{length+1} terms is unnecessary: exactness at the
    # first term already encodes injectivity.
    seq.labels = [lbl.replace("H", "Tor").replace("(C", "(A").replace(")", ",B)") for lbl in seq.labels]
    return TorLES(seq, ses, hs)


# checks -------------------------------------------------------------------------


def tor_symmetry_check(A: FgAbGroup, B: FgAbGroup, n: int) -> bool:
    return tor(A, B, n).group.canonical == tor(B, A, n).group.canonical


def tor_additivity_check(A: FgAbGroup, Bs: Sequence[FgAbGroup], n: int) -> bool:
    total = direct_sum(*Bs).group
    pieces = direct_sum(*(tor(A, B, n).group for B in Bs)).group
    return tor(A, total, n).group.canonical == pieces.canonical


def schanuel_check(G: FgAbGroup, p1: GroupHom, p2: GroupHom) -> bool:
    """``ker p1 + F2 == ker p2 + F1`` for surjections ``p_i: F_i -> G`` from free groups."""
    for p in (p1, p2):
        if p.target != G:
            raise InputError("presentation does not map onto G")
        if p.source.relations.cols or not p.is_surjective():
            raise InputError("presentation must be a surjection from a free group")
    K1, K2 = kernel(p1).group, kernel(p2).group
    left = direct_sum(K1, p2.source).group
    right = direct_sum(K2, p1.source).group
    return left.canonical == right.canonical


# axiomatic characterization ------------------------------------------------------


class TorCandidate(Protocol):
    """A family ``T_n(-)`` with long exact sequences, to be tested against the Tor axioms.

    ``les(s)`` must return the sequence
    ``T_1(A1) -> T_1(A2) -> T_1(A3) -> T_0(A1) -> T_0(A2) -> T_0(A3)``.
    """

    def group(self, A: FgAbGroup, n: int) -> FgAbGroup: ...

    def les(self, s: ShortExactSeq) -> LongExactSequence: ...


class TorFunctor:
    """``Tor_n(-, M)`` as computed by this module."""

    def __init__(self, M: FgAbGroup):
        self.M = M

    def group(self, A: FgAbGroup, n: int) -> FgAbGroup:
        return tor(A, self.M, n).group

    def les(self, s: ShortExactSeq) -> LongExactSequence:
        return tor_les(s, self.M).sequence


def _standard_ses_battery() -> list[ShortExactSeq]:
    Z = FgAbGroup.free(1)
    out = []
    for m in (2, 3, 4):
        times = GroupHom(Z, Z, IntMatrix.from_rows([[m]]))
        Zm = FgAbGroup.cyclic(m)
        out.append(ShortExactSeq(times, GroupHom(Z, Zm, IntMatrix.from_rows([[1]]))))
    for a, b in ((2, 2), (3, 3), (2, 4)):
        Za, Zab, Zb = FgAbGroup.cyclic(a), FgAbGroup.cyclic(a * b), FgAbGroup.cyclic(b)
        out.append(ShortExactSeq(GroupHom(Za, Zab, IntMatrix.from_rows([[b]])), GroupHom(Zab, Zb, IntMatrix.from_rows([[1]]))))
    out.append(ShortExactSeq.split(FgAbGroup.cyclic(2), FgAbGroup.cyclic(3)))
    out.append(ShortExactSeq.split(Z, FgAbGroup.cyclic(4)))
    return out


def _standard_group_battery() -> list[FgAbGroup]:
    F = FgAbGroup.from_invariant_factors
    return [F([], 0), F([], 1), F([2]), F([3]), F([4]), F([6]), F([2, 2]), F([2, 4]), F([3], 1), F([], 2)]


@dataclass
class AxiomReport:
    les: bool
    degree_zero: bool
    vanishing: bool
    failures: list[str]

    @property
    def all_pass(self) -> bool:
        return self.les and self.degree_zero and self.vanishing


def tor_axiom_suite(candidate: TorCandidate, M: FgAbGroup) -> AxiomReport:
    failures = []
    les_ok = True
    for s in _standard_ses_battery():
        seq = candidate.les(s)
        ends = (s.A, s.B, s.C)
        expected = [candidate.group(G, n) for n in (1, 0) for G in ends]
        if len(seq.terms) != len(expected) or not seq.is_exact:
            les_ok = False
            failures.append(f"les: sequence for {s.A.literal()} -> {s.B.literal()} -> {s.C.literal()} is not exact")
            continue
        if any(t.canonical != e.canonical for t, e in zip(seq.terms, expected)):
            les_ok = False
            failures.append(f"les: terms for {s.A.literal()} -> {s.B.literal()} -> {s.C.literal()} disagree with T_n")
    deg0_ok = True
    for G in _standard_group_battery():
        if candidate.group(G, 0).canonical != tensor(G, M).group.canonical:
            deg0_ok = False
            failures.append(f"degree 0: T_0({G.literal()}) is not {G.literal()} (x) {M.literal()}")
    van_ok = True
    for k in range(3):
        for n in (1, 2):
            if not candidate.group(FgAbGroup.free(k), n).is_trivial:
                van_ok = False
                failures.append(f"vanishing: T_{n}(Z^{k}) is nonzero")
    return AxiomReport(les_ok, deg0_ok, van_ok, failures)


class ZeroCandidate:
    """Deliberately broken: the constant zero functor."""

    def group(self, A: FgAbGroup, n: int) -> FgAbGroup:
        return _ZERO

    def les(self, s: ShortExactSeq) -> LongExactSequence:
        terms = [_ZERO] * 6
        maps = [GroupHom.zero(_ZERO, _ZERO)] * 5
        return assemble_exact_sequence([f"T{k}" for k in range(6)], terms, maps)


class ShiftedCandidate:
    """Deliberately broken: ``T_n = Tor_{n-1}`` for ``n >= 1``."""

    def __init__(self, M: FgAbGroup):
        self.M = M

    def group(self, A: FgAbGroup, n: int) -> FgAbGroup:
        return tor(A, self.M, max(n - 1, 0)).group

    def les(self, s: ShortExactSeq) -> LongExactSequence:
        return tor_les(s, self.M).sequence
