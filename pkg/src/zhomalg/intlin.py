"""Exact integer linear algebra.

Everything here works on Python ``int`` so there is no overflow at any size.
The Smith normal form is the workhorse: kernels, integer solving and
congruence solving are all derived from one decomposition ``U A V = D``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import InputError, LiteralError

__all__ = [
    "IntMatrix",
    "SmithDecomposition",
    "CongruenceSystem",
    "smith_normal_form",
    "kernel_basis",
    "solve_integer",
    "solve_integer_matrix",
    "solve_congruence",
    "block_diagonal",
    "lcm",
]


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        v = abs(v)
        if v == 0:
            return 0
        out = out * v // gcd(out, v)
    return out


class IntMatrix:
    """Immutable integer matrix, stored row-major.

    Shapes with zero rows or zero columns are legal and carry their other
    dimension, so ``IntMatrix.zeros(0, 3)`` is distinct from ``zeros(0, 0)``.
    """

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable[int]):
        data = tuple(int(x) for x in entries)
        if rows < 0 or cols < 0:
            raise InputError(f"negative shape {rows}x{cols}")
        if len(data) != rows * cols:
            raise InputError(f"{len(data)} entries for a {rows}x{cols} matrix")
        self.rows = rows
        self.cols = cols
        self._data = data
        self._hash = None

    # construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise InputError("ragged rows in matrix literal")
        return cls(len(rows), cols, (x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        columns = [list(c) for c in columns]
        for c in columns:
            if len(c) != rows:
                raise InputError("column length does not match row count")
        return cls(rows, len(columns), (columns[j][i] for i in range(rows) for j in range(len(columns))))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: Optional[int] = None, cols: Optional[int] = None) -> IntMatrix:
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            out[i][i] = v
        return cls.from_rows(out, cols)

    @classmethod
    def column(cls, values: Sequence[int]) -> IntMatrix:
        return cls(len(values), 1, values)

    # access ---------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self._data[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(self._data[i * self.cols + j] for i in range(self.rows))

    def to_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.cols)]

    @property
    def entries(self) -> tuple[int, ...]:
        return self._data

    def is_zero(self) -> bool:
        return not any(self._data)

    # arithmetic -----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols}, {self.to_lists()})"

    def _check_same_shape(self, other: IntMatrix):
        if self.shape != other.shape:
            raise InputError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: IntMatrix) -> IntMatrix:
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols, (a + b for a, b in zip(self._data, other._data)))

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols, (a - b for a, b in zip(self._data, other._data)))

    def __neg__(self) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, (-a for a in self._data))

    def scale(self, k: int) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, (k * a for a in self._data))

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise InputError(f"cannot multiply {self.shape} by {other.shape}")
        n, m, p = self.rows, self.cols, other.cols
        a, b = self._data, other._data
        bcols = [b[j::p] for j in range(p)] if p else []
        out = []
        for i in range(n):
            arow = a[i * m:(i + 1) * m]
            for j in range(p):
                out.append(sum(x * y for x, y in zip(arow, bcols[j])))
        return IntMatrix(n, p, out)

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product."""
        if len(vector) != self.cols:
            raise InputError(f"vector of length {len(vector)} for {self.shape} matrix")
        m = self.cols
        return tuple(sum(x * y for x, y in zip(self._data[i * m:(i + 1) * m], vector)) for i in range(self.rows))

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, (self._data[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)))

    def hstack(self, *others: IntMatrix) -> IntMatrix:
        mats = (self,) + others
        for m in others:
            if m.rows != self.rows:
                raise InputError("hstack row mismatch")
        cols = sum(m.cols for m in mats)
        return IntMatrix(self.rows, cols, (x for i in range(self.rows) for m in mats for x in m.row(i)))

    def vstack(self, *others: IntMatrix) -> IntMatrix:
        mats = (self,) + others
        for m in others:
            if m.cols != self.cols:
                raise InputError("vstack column mismatch")
        return IntMatrix(sum(m.rows for m in mats), self.cols, (x for m in mats for x in m._data))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> IntMatrix:
        return IntMatrix(len(rows), len(cols), (self[i, j] for i in rows for j in cols))

    def select_columns(self, cols: Sequence[int]) -> IntMatrix:
        return self.submatrix(range(self.rows), cols)

    def select_rows(self, rows: Sequence[int]) -> IntMatrix:
        return self.submatrix(rows, range(self.cols))

    def kron(self, other: IntMatrix) -> IntMatrix:
        """Kronecker product; index (i*p + k, j*q + l) holds a_ij * b_kl."""
        p, q = other.shape
        out = [0] * (self.rows * p * self.cols * q)
        width = self.cols * q
        for i in range(self.rows):
            for j in range(self.cols):
                a = self[i, j]
                if not a:
                    continue
                for k in range(p):
                    base = (i * p + k) * width + j * q
                    for l in range(q):
                        out[base + l] = a * other._data[k * q + l]
        return IntMatrix(self.rows * p, width, out)

    def det(self) -> int:
        """Determinant by fraction-free Bareiss elimination."""
        if self.rows != self.cols:
            raise InputError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_lists()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def rank(self) -> int:
        return smith_normal_form(self).rank

    # serialization ------------------------------------------------------

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in self.row(i)] for i in range(self.rows)]

    @classmethod
    def from_json(cls, value, cols: Optional[int] = None) -> IntMatrix:
        """Parse a JSON array of arrays of decimal strings (plain ints accepted)."""
        if isinstance(value, str):
            try:
                value = json.loads(value)
            except json.JSONDecodeError as exc:
                raise LiteralError(f"malformed matrix JSON: {exc.msg}", exc.doc, exc.pos) from None
        if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
            raise InputError("matrix literal must be an array of arrays")
        rows = []
        for r in value:
            row = []
            for x in r:
                if isinstance(x, bool) or not isinstance(x, (str, int)):
                    raise InputError(f"matrix entry {x!r} is not a decimal string")
                try:
                    row.append(int(x))
                except ValueError:
                    raise InputError(f"matrix entry {x!r} is not a decimal integer") from None
            rows.append(row)
        return cls.from_rows(rows, cols)


def block_diagonal(*blocks: IntMatrix) -> IntMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            out[r0 + i][c0:c0 + b.cols] = b.row(i)
        r0 += b.rows
        c0 += b.cols
    return IntMatrix.from_rows(out, cols)


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with unimodular ``U``, ``V``.

    ``U_inv`` and ``V_inv`` are tracked alongside so callers can map
    back from the diagonal basis without a separate inversion.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    rank: int
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]

    @property
    def invariants(self) -> list[int]:
        """The nonzero diagonal entries d_1 | d_2 | ... | d_rank."""
        return [self.D[i, i] for i in range(self.rank)]


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    m, n = A.shape
    D = A.to_lists()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    # Row op  "row_i += q * row_k" on D is mirrored on U; on U_inv it becomes
    # "col_k -= q * col_i". Column ops on D/V mirror onto rows of V_inv.
    def row_add(i, k, q):
        if not q:
            return
        Di, Dk = D[i], D[k]
        for j in range(n):
            if Dk[j]:
                Di[j] += q * Dk[j]
        Ui_, Uk = U[i], U[k]
        for j in range(m):
            if Uk[j]:
                Ui_[j] += q * Uk[j]
        for r in Ui:
            if r[i]:
                r[k] -= q * r[i]

    def col_add(j, k, q):
        if not q:
            return
        for r in D:
            if r[k]:
                r[j] += q * r[k]
        for r in V:
            if r[k]:
                r[j] += q * r[k]
        Vj, Vk = Vi[j], Vi[k]
        for c in range(n):
            if Vj[c]:
                Vk[c] -= q * Vj[c]

    def row_swap(i, k):
        if i == k:
            return
        D[i], D[k] = D[k], D[i]
        U[i], U[k] = U[k], U[i]
        for r in Ui:
            r[i], r[k] = r[k], r[i]

    def col_swap(j, k):
        if j == k:
            return
        for r in D:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]
        Vi[j], Vi[k] = Vi[k], Vi[j]

    t = 0
    while t < min(m, n):
        # smallest nonzero |entry| in the working block
        best = None
        for i in range(t, m):
            Di = D[i]
            for j in range(t, n):
                v = Di[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        row_swap(t, best[1])
        col_swap(t, best[2])
        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    row_add(i, t, -(D[i][t] // p))
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    col_add(j, t, -(D[t][j] // p))
                    if D[t][j]:
                        dirty = True
            if dirty:
                # a remainder smaller than the pivot survived; promote it
                best = (abs(p), t, t)
                for i in range(t + 1, m):
                    v = D[i][t]
                    if v and abs(v) < best[0]:
                        best = (abs(v), i, t)
                for j in range(t + 1, n):
                    v = D[t][j]
                    if v and abs(v) < best[0]:
                        best = (abs(v), t, j)
                row_swap(t, best[1])
                col_swap(t, best[2])
                continue
            bad = None
            for i in range(t + 1, m):
                Di = D[i]
                for j in range(t + 1, n):
                    if Di[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_add(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
            for r in Ui:
                r[t] = -r[t]
        t += 1

    def mat(rows, r, c):
        return IntMatrix(r, c, (x for row in rows for x in row))

    return SmithDecomposition(
        U=mat(U, m, m), D=mat(D, m, n), V=mat(V, n, n), rank=t, U_inv=mat(Ui, m, m), V_inv=mat(Vi, n, n)
    )


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of ``{x : A x = 0}``."""
    snf = smith_normal_form(A)
    return snf.V.select_columns(range(snf.rank, A.cols))


def solve_integer(A: IntMatrix, b: Sequence[int]) -> Optional[tuple[tuple[int, ...], IntMatrix]]:
    """Solve ``A x = b`` over Z.

    Returns ``(x, K)`` with a particular solution ``x`` and a kernel basis
    ``K`` (columns), or ``None`` when no integer solution exists.
    """
    if len(b) != A.rows:
        raise InputError(f"right-hand side of length {len(b)} for {A.rows} equations")
    snf = smith_normal_form(A)
    c = snf.U.apply(b)
    y = [0] * A.cols
    for i, ci in enumerate(c):
        if i < snf.rank:
            d = snf.D[i, i]
            if ci % d:
                return None
            y[i] = ci // d
        elif ci:
            return None
    x = snf.V.apply(y)
    return x, snf.V.select_columns(range(snf.rank, A.cols))


def solve_integer_matrix(A: IntMatrix, B: IntMatrix) -> Optional[IntMatrix]:
    """Solve ``A X = B`` column by column with one shared decomposition."""
    if B.rows != A.rows:
        raise InputError(f"right-hand side has {B.rows} rows, expected {A.rows}")
    snf = smith_normal_form(A)
    C = snf.U @ B
    Y = [[0] * B.cols for _ in range(A.cols)]
    for i in range(A.rows):
        row = C.row(i)
        if i < snf.rank:
            d = snf.D[i, i]
            for j, c in enumerate(row):
                if c % d:
                    return None
                Y[i][j] = c // d
        elif any(row):
            return None
    return snf.V @ IntMatrix.from_rows(Y, B.cols)


@dataclass(frozen=True)
class CongruenceSystem:
    """Rows ``coefficients[i] . x == rhs[i] (mod moduli[i])``; modulus 0 means over Z."""

    coefficients: IntMatrix
    rhs: tuple[int, ...]
    moduli: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rhs", tuple(int(x) for x in self.rhs))
        object.__setattr__(self, "moduli", tuple(int(x) for x in self.moduli))
        if len(self.rhs) != self.coefficients.rows or len(self.moduli) != self.coefficients.rows:
            raise InputError("rhs and moduli must have one entry per coefficient row")
        if any(mu < 0 for mu in self.moduli):
            raise InputError("moduli must be non-negative")

    def satisfied_by(self, x: Sequence[int]) -> bool:
        lhs = self.coefficients.apply(x)
        for v, r, mu in zip(lhs, self.rhs, self.moduli):
            if mu == 0:
                if v != r:
                    return False
            elif (v - r) % mu:
                return False
        return True


def solve_congruence(system: CongruenceSystem) -> Optional[tuple[int, ...]]:
    """Lift to an integer system with one auxiliary unknown per nonzero modulus."""
    C = system.coefficients
    aux = [i for i, mu in enumerate(system.moduli) if mu]
    lifted = [[0] * len(aux) for _ in range(C.rows)]
    for k, i in enumerate(aux):
        lifted[i][k] = -system.moduli[i]
    big = C.hstack(IntMatrix.from_rows(lifted, len(aux)))
    sol = solve_integer(big, system.rhs)
    if sol is None:
        return None
    x = sol[0][:C.cols]
    return x
