"""Independent brute-force oracles used by the tests.

Nothing here calls the package's Smith normal form or solvers; each oracle
recomputes its answer from definitions (minors, element enumeration,
residue search) so agreement is meaningful.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import reduce
from math import gcd


def det(rows):
    """Exact determinant by Gaussian elimination over the rationals."""
    n = len(rows)
    m = [[Fraction(x) for x in r] for r in rows]
    sign = 1
    out = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        out *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return int(sign * out)


def determinantal_divisors(rows):
    """``D_k`` = gcd of all k x k minors, until it vanishes."""
    if not rows or not rows[0]:
        return []
    r, c = len(rows), len(rows[0])
    out = []
    for k in range(1, min(r, c) + 1):
        g = 0
        for I in itertools.combinations(range(r), k):
            for J in itertools.combinations(range(c), k):
                g = gcd(g, det([[rows[i][j] for j in J] for i in I]))
                if g == 1:
                    break
            if g == 1:
                break
        if g == 0:
            break
        out.append(g)
    return out


def invariant_factors_by_minors(rows):
    """Nonzero SNF diagonal ``d_k = D_k / D_{k-1}``."""
    D = determinantal_divisors(rows)
    prev, out = 1, []
    for d in D:
        out.append(d // prev)
        prev = d
    return out


def rank_by_minors(rows):
    return len(determinantal_divisors(rows))


def tensor_bruteforce(a: int, b: int) -> tuple[int, bool]:
    """(order, is cyclic) of the free group on Z/a x Z/b modulo bilinearity.

    Generators are the pairs (x, y); relations are (x+x', y) - (x, y) - (x', y)
    and (x, y+y') - (x, y) - (x, y'). The relation lattice is brought to
    echelon form with extended-gcd row steps; the quotient order is the
    product of the pivots, and it is cyclic iff the class of (1, 1) has that
    order.
    """
    pairs = [(x, y) for x in range(a) for y in range(b)]
    idx = {p: i for i, p in enumerate(pairs)}
    lattice = EchelonLattice(len(pairs))
    for x, x2, y in itertools.product(range(a), range(a), range(b)):
        v = [0] * len(pairs)
        v[idx[((x + x2) % a, y)]] += 1
        v[idx[(x, y)]] -= 1
        v[idx[(x2, y)]] -= 1
        lattice.add(v)
    for x, y, y2 in itertools.product(range(a), range(b), range(b)):
        v = [0] * len(pairs)
        v[idx[(x, (y + y2) % b)]] += 1
        v[idx[(x, y)]] -= 1
        v[idx[(x, y2)]] -= 1
        lattice.add(v)
    order = lattice.index()
    if order is None:
        raise AssertionError("bilinear quotient of finite groups must be finite")
    gen = [0] * len(pairs)
    gen[idx[(1 % a, 1 % b)]] = 1
    k = 1
    while not lattice.contains([k * g for g in gen]):
        k += 1
    return order, k == order


class EchelonLattice:
    """A sublattice of Z^n kept as rows with strictly increasing pivots."""

    def __init__(self, n: int):
        self.n = n
        self.rows: dict[int, list[int]] = {}

    def add(self, v):
        v = list(v)
        while any(v):
            p = next(i for i, x in enumerate(v) if x)
            row = self.rows.get(p)
            if row is None:
                if v[p] < 0:
                    v = [-x for x in v]
                self.rows[p] = v
                return
            g, s, t = _xgcd(row[p], v[p])
            a, b = row[p] // g, v[p] // g
            # [[s, t], [b, -a]] has determinant -1, so the span is unchanged
            self.rows[p] = [s * x + t * y for x, y in zip(row, v)]
            v = [b * x - a * y for x, y in zip(row, v)]

    def contains(self, v) -> bool:
        v = list(v)
        for p in sorted(self.rows):
            row = self.rows[p]
            if v[p] % row[p]:
                return False
            q = v[p] // row[p]
            v = [x - q * y for x, y in zip(v, row)]
        return not any(v)

    def index(self):
        """``[Z^n : L]``, or ``None`` when ``L`` has lower rank."""
        if len(self.rows) < self.n:
            return None
        out = 1
        for p, row in self.rows.items():
            out *= abs(row[p])
        return out


def _xgcd(a, b):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, s, t = _xgcd(b, a % b)
    return (g, t, s - (a // b) * t)


def group_order_from_factors(factors):
    return reduce(lambda x, y: x * y, factors, 1)


def count_homs_cyclic(a: int, b: int) -> int:
    """Homomorphisms Z/a -> Z/b: images y with a*y = 0."""
    return sum(1 for y in range(b) if (a * y) % b == 0)


def count_homs_finite(src_factors, tgt_factors) -> int:
    """Homomorphisms between products of cyclic groups, by image enumeration."""
    tgt = list(itertools.product(*(range(m) for m in tgt_factors)))
    total = 1
    for a in src_factors:
        total *= sum(1 for y in tgt if all((a * c) % m == 0 for c, m in zip(y, tgt_factors)))
    return total


def torsion_count(n: int, factors) -> int:
    """|{x in prod Z/m : n*x = 0}|, the order of Tor_1(Z/n, prod Z/m)."""
    out = 1
    for m in factors:
        out *= gcd(n, m)
    return out


def congruence_bruteforce(coeffs, rhs, moduli):
    """All residue solutions modulo lcm of the moduli (few unknowns only)."""
    from math import lcm

    L = lcm(*moduli) if moduli else 1
    nvars = len(coeffs[0]) if coeffs else 0
    sols = []
    for x in itertools.product(range(L), repeat=nvars):
        if all((sum(c * v for c, v in zip(row, x)) - r) % m == 0 for row, r, m in zip(coeffs, rhs, moduli)):
            sols.append(x)
    return sols
