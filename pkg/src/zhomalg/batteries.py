"""Seeded random families and the named property suites run by ``zhomalg check``."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Optional

from .complexes import ChainComplex, ChainMap, ComplexSES, connecting_morphism, long_exact_sequence
from .fgab import (
    FgAbGroup,
    GroupHom,
    ShortExactSeq,
    cokernel,
    direct_sum,
    factor_through,
    factor_through_epi,
    hom_group,
    image,
    is_pure,
    is_split,
    kernel,
)
from .intlin import IntMatrix, block_diagonal, solve_integer_matrix
from .torfun import (
    ShiftedCandidate,
    TorFunctor,
    ZeroCandidate,
    free_resolution,
    schanuel_check,
    tor,
    tor_axiom_suite,
    tor_les,
)


# random objects ----------------------------------------------------------------


def random_unimodular(n: int, rng: random.Random, steps: Optional[int] = None) -> IntMatrix:
    """A product of random elementary row operations (determinant +-1)."""
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if steps is not None else 2 * n):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        k = rng.choice([-2, -1, 1, 2])
        rows[i] = [a + k * b for a, b in zip(rows[i], rows[j])]
    if n and rng.random() < 0.5:
        rows[0] = [-a for a in rows[0]]
    return IntMatrix.from_rows(rows, n)


def random_matrix(rng: random.Random, max_dim: int = 8, max_entry: int = 100) -> IntMatrix:
    r, c = rng.randint(1, max_dim), rng.randint(1, max_dim)
    return IntMatrix(r, c, (rng.randint(-max_entry, max_entry) for _ in range(r * c)))


def random_factors(rng: random.Random, max_factor: int = 20, max_count: int = 3) -> list[int]:
    return [rng.randint(2, max_factor) for _ in range(rng.randint(0, max_count))]


def random_group(rng: random.Random, max_factor: int = 20, max_free: int = 2, max_count: int = 3) -> FgAbGroup:
    """A random group given by a scrambled (non-canonical) presentation."""
    factors = random_factors(rng, max_factor, max_count)
    free = rng.randint(0, max_free)
    return scramble(FgAbGroup.from_invariant_factors(factors, free), rng)


def random_finite_group(rng: random.Random, max_factor: int = 12, max_count: int = 2) -> FgAbGroup:
    return scramble(FgAbGroup.from_invariant_factors(random_factors(rng, max_factor, max_count)), rng)


def scramble(G: FgAbGroup, rng: random.Random) -> FgAbGroup:
    """``G`` re-presented through random basis changes of generators and relations."""
    g, r = G.relations.shape
    U, V = random_unimodular(g, rng), random_unimodular(r, rng)
    return FgAbGroup(U @ G.relations @ V)


def random_element(G: FgAbGroup, rng: random.Random, bound: int = 5) -> tuple[int, ...]:
    return tuple(rng.randint(-bound, bound) for _ in range(G.ngens))


def random_hom(G: FgAbGroup, H: FgAbGroup, rng: random.Random) -> GroupHom:
    Hm = hom_group(G, H)
    x = Hm.group.canonical_element([rng.randint(0, m - 1) if m else rng.randint(-3, 3) for m in Hm.group.moduli])
    return Hm.to_hom(x)


def _rebase(s: ShortExactSeq, rng: random.Random) -> ShortExactSeq:
    """The same sequence with the middle group's generators changed by a unimodular matrix."""
    B = s.B
    U = random_unimodular(B.ngens, rng)
    Uinv = _inverse(U)
    B2 = FgAbGroup(U @ B.relations)
    phi = GroupHom(B, B2, U)
    psi = GroupHom(B2, B, Uinv)
    return ShortExactSeq(phi @ s.f, s.g @ psi)


def _inverse(U: IntMatrix) -> IntMatrix:
    inv = solve_integer_matrix(U, IntMatrix.identity(U.rows))
    if inv is None:
        raise ValueError("matrix is not unimodular")
    return inv


def ses_sum(s: ShortExactSeq, t: ShortExactSeq) -> ShortExactSeq:
    """Degreewise direct sum of two short exact sequences."""
    A, B, C = (direct_sum(x, y).group for x, y in ((s.A, t.A), (s.B, t.B), (s.C, t.C)))
    f = GroupHom(A, B, block_diagonal(s.f.matrix, t.f.matrix))
    g = GroupHom(B, C, block_diagonal(s.g.matrix, t.g.matrix))
    return ShortExactSeq(f, g)


def _scalar(G: FgAbGroup, H: FgAbGroup, k: int) -> GroupHom:
    """``x -> k x`` between cyclic groups (either may be trivial, with no generator)."""
    return GroupHom(G, H, IntMatrix(H.ngens, G.ngens, [k] * (H.ngens * G.ngens)))


def multiplication_ses(m: int) -> ShortExactSeq:
    """``0 -> Z --m--> Z -> Z/m -> 0``."""
    Z = FgAbGroup.free(1)
    return ShortExactSeq(_scalar(Z, Z, m), _scalar(Z, FgAbGroup.cyclic(m), 1))


def cyclic_extension(a: int, b: int) -> ShortExactSeq:
    """``0 -> Z/a --b--> Z/ab -> Z/b -> 0``; split iff ``gcd(a, b) == 1``."""
    A, B, C = FgAbGroup.cyclic(a), FgAbGroup.cyclic(a * b), FgAbGroup.cyclic(b)
    return ShortExactSeq(_scalar(A, B, b), _scalar(B, C, 1))


@dataclass
class LabelledSES:
    sequence: ShortExactSeq
    split: bool
    description: str


def ses_family(seed: int, count: int = 100) -> list[LabelledSES]:
    """``count`` sequences, the first half split by construction, the rest not."""
    rng = random.Random(seed)
    out = []
    for k in range(count):
        if k < count // 2:
            A = random_group(rng, max_factor=12, max_free=1, max_count=2)
            C = random_group(rng, max_factor=12, max_free=1, max_count=2)
            s = _rebase(ShortExactSeq.split(A, C), rng)
            out.append(LabelledSES(s, True, f"split {A.literal()} + {C.literal()}"))
            continue
        kind = rng.randrange(3)
        if kind == 0:
            m = rng.randint(2, 12)
            s, desc = multiplication_ses(m), f"Z --{m}--> Z"
        else:
            while True:
                a, b = rng.randint(2, 8), rng.randint(2, 8)
                if gcd(a, b) > 1:
                    break
            s, desc = cyclic_extension(a, b), f"Z/{a} -> Z/{a * b} -> Z/{b}"
        if kind == 2:
            extra = ShortExactSeq.split(random_group(rng, 6, 1, 1), random_group(rng, 6, 1, 1))
            s = ses_sum(s, extra)
            desc += " plus a split summand"
        out.append(LabelledSES(_rebase(s, rng), False, desc))
    return out


def random_complex_ses(rng: random.Random, max_length: int = 4, max_gens: int = 3, max_order: int = 12) -> ComplexSES:
    """A degreewise short exact sequence of complexes ``C1 -> C2 -> C3``.

    ``C2`` has random boundaries (each landing in the kernel of the next),
    ``C1`` is the subcomplex generated by random elements closed under the
    boundary, and ``C3`` is the quotient.
    """
    length = rng.randint(1, max_length)
    lo = rng.randint(-1, 1)

    def small_group():
        while True:
            ngens = rng.randint(0, max_gens)
            factors, free = [], 0
            for _ in range(ngens):
                if rng.random() < 0.25:
                    free += 1
                else:
                    factors.append(rng.randint(2, 6))
            order = 1
            for f in factors:
                order *= f
            if order <= max_order:
                return scramble(FgAbGroup.from_invariant_factors(factors, free), rng)

    groups = [small_group() for _ in range(length)]
    maps = []
    for n in range(1, length):
        if n == 1:
            maps.append(random_hom(groups[1], groups[0], rng))
        else:
            K = kernel(maps[-1])
            maps.append(K.inclusion @ random_hom(groups[n], K.group, rng))
    C2 = ChainComplex(lo, groups, maps)

    # generators of the subcomplex, closed under d from the top down
    gens: list[list[tuple[int, ...]]] = [[random_element(G, rng, 3) for _ in range(rng.randint(0, 2))] for G in groups]
    for n in range(length - 1, 0, -1):
        gens[n - 1] += [maps[n - 1].matrix.apply(v) for v in gens[n]]
    incs = []
    for n, G in enumerate(groups):
        F = FgAbGroup.free(len(gens[n]))
        incs.append(image(GroupHom(F, G, IntMatrix.from_columns(gens[n], G.ngens))).inclusion)
    d1 = [factor_through(maps[n - 1] @ incs[n], incs[n - 1]) for n in range(1, length)]
    C1 = ChainComplex(lo, [i.source for i in incs], d1)
    projs = [cokernel(i).projection for i in incs]
    d3 = [factor_through_epi(projs[n - 1] @ maps[n - 1], projs[n]) for n in range(1, length)]
    C3 = ChainComplex(lo, [p.target for p in projs], d3)
    iota = ChainMap(C1, C2, {lo + n: incs[n] for n in range(length)})
    pi = ChainMap(C2, C3, {lo + n: projs[n] for n in range(length)})
    return ComplexSES(iota, pi)


def random_presentation(G: FgAbGroup, rng: random.Random, extra: int = 2) -> GroupHom:
    """A surjection ``Z^k -> G``: G's generators plus random elements, then a basis change."""
    cols = [tuple(int(i == j) for i in range(G.ngens)) for j in range(G.ngens)]
    cols += [random_element(G, rng) for _ in range(rng.randint(0, extra))]
    k = len(cols)
    p = IntMatrix.from_columns(cols, G.ngens) @ random_unimodular(k, rng)
    return GroupHom(FgAbGroup.free(k), G, p)


# suites ----------------------------------------------------------------------------


@dataclass
class SuiteReport:
    suite: str
    seed: int
    cases: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "seed": str(self.seed),
            "cases": str(self.cases),
            "failures": list(self.failures),
            "pass": self.passed,
        }


def splitting_suite(seed: int, count: int = 100) -> SuiteReport:
    rep = SuiteReport("splitting-lemma", seed)
    for k, item in enumerate(ses_family(seed, count)):
        rep.cases += 1
        s = item.sequence
        w = is_split(s)
        if (w is not None) != item.split:
            rep.failures.append(f"case {k} ({item.description}): is_split disagrees with construction")
            continue
        if w is not None:
            if not (s.g @ w.section).equals(GroupHom.identity(s.C)):
                rep.failures.append(f"case {k}: g o s != id")
            if not (w.retraction @ s.f).equals(GroupHom.identity(s.A)):
                rep.failures.append(f"case {k}: r o f != id")
    return rep


def purity_suite(seed: int, count: int = 100) -> SuiteReport:
    rep = SuiteReport("purity", seed)
    for k, item in enumerate(ses_family(seed, count)):
        rep.cases += 1
        if is_pure(item.sequence) != item.split:
            rep.failures.append(f"case {k} ({item.description}): purity disagrees with splitting")
    return rep


def schanuel_suite(seed: int, count: int = 50) -> SuiteReport:
    rng = random.Random(seed)
    rep = SuiteReport("schanuel", seed)
    for k in range(count):
        G = random_group(rng)
        p1, p2 = random_presentation(G, rng), random_presentation(G, rng)
        rep.cases += 1
        if not schanuel_check(G, p1, p2):
            rep.failures.append(f"case {k}: {G.literal()} fails")
    return rep


def les_suite(seed: int, count: int = 50) -> SuiteReport:
    rng = random.Random(seed)
    rep = SuiteReport("les-exactness", seed)
    for k in range(count):
        s = random_complex_ses(rng)
        rep.cases += 1
        seq = long_exact_sequence(s)
        if not seq.is_exact:
            bad = [seq.labels[i] for i, ok in enumerate(seq.exact) if not ok]
            rep.failures.append(f"case {k}: not exact at {', '.join(bad)}")
            continue
        for n in range(s.lo + 1, s.hi + 1):
            base = connecting_morphism(s, n)
            for trial in range(3):
                other = connecting_morphism(s, n, random.Random(rng.getrandbits(32)))
                if not other.equals(base):
                    rep.failures.append(f"case {k}: connecting map in degree {n} depends on lifts")
                    break
    return rep


def tor_axioms_suite(seed: int = 0) -> SuiteReport:
    """The real Tor must pass every axiom; the broken candidates must fail their designated one."""
    rep = SuiteReport("tor-axioms", seed)
    for M in (FgAbGroup.cyclic(2), FgAbGroup.cyclic(6), FgAbGroup.from_invariant_factors([2, 4])):
        rep.cases += 3
        real = tor_axiom_suite(TorFunctor(M), M)
        if not real.all_pass:
            rep.failures += [f"Tor(-, {M.literal()}): {f}" for f in real.failures]
        if tor_axiom_suite(ZeroCandidate(), M).degree_zero:
            rep.failures.append(f"zero candidate passes degree 0 against {M.literal()}")
        if tor_axiom_suite(ShiftedCandidate(M), M).vanishing:
            rep.failures.append(f"shifted candidate passes vanishing against {M.literal()}")
    return rep


def resolution_suite(seed: int, count: int = 100) -> SuiteReport:
    """Minimal and padded resolutions give the same Tor_n, n = 0, 1, 2."""
    rng = random.Random(seed)
    rep = SuiteReport("resolution-independence", seed)
    for k in range(count):
        A = random_group(rng)
        B = random_finite_group(rng)
        r1 = free_resolution(A, "minimal")
        r2 = free_resolution(A, "padded", k=rng.randint(1, 2))
        rep.cases += 1
        for n in range(3):
            if tor(A, B, n, r1).group.canonical != tor(A, B, n, r2).group.canonical:
                rep.failures.append(f"case {k}: Tor_{n}({A.literal()}, {B.literal()}) depends on the resolution")
    return rep


def tor_les_suite(seed: int = 0, bound: int = 10) -> SuiteReport:
    """For ``Z --m--> Z -> Z/m`` against ``Z/n`` the connecting map hits the m-torsion of Z/n."""
    rep = SuiteReport("tor-les", seed)
    for m in range(1, bound + 1):
        for n in range(1, bound + 1):
            rep.cases += 1
            les = tor_les(multiplication_ses(m), FgAbGroup.cyclic(n))
            if not les.is_exact:
                rep.failures.append(f"m={m}, n={n}: not exact")
                continue
            delta = les.connecting(1)
            target = delta.target
            torsion = {x.canonical() for x in target.elements() if (m * x).is_zero()}
            hit = {delta(x).canonical() for x in delta.source.elements()}
            if hit != torsion or not delta.is_injective() or delta.source.order() != gcd(m, n):
                rep.failures.append(f"m={m}, n={n}: connecting map image is not the m-torsion")
    return rep


SUITES: dict[str, Callable[[int], SuiteReport]] = {
    "splitting-lemma": splitting_suite,
    "purity": purity_suite,
    "schanuel": schanuel_suite,
    "les-exactness": les_suite,
    "tor-axioms": tor_axioms_suite,
    "resolution-independence": resolution_suite,
    "tor-les": tor_les_suite,
}


def run_suite(name: str, seed: int) -> SuiteReport:
    try:
        fn = SUITES[name]
    except KeyError:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}") from None
    return fn(seed)
