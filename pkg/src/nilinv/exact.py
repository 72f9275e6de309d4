"""Exact 2x2 / 3x3 matrices over the rationals.

Scalars are :class:`fractions.Fraction`.  Matrices are immutable values with
structural equality; every separation decision downstream is an exact
equality test, so no floating point path exists anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence, Union

from .errors import InputError

Scalar = Fraction
Number = Union[int, Fraction]

SIZES = (2, 3)


def as_scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InputError(f"not a rational entry: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational entry: {x!r}") from exc
    raise InputError(f"not a rational entry: {x!r}")


def _int_matmul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


class Matrix:
    """Square matrix of size 2 or 3 with Fraction entries (0-based ``rows``)."""

    __slots__ = ("rows", "_scaled", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(as_scalar(x) for x in r) for r in rows)
        n = len(rows)
        if n not in SIZES or any(len(r) != n for r in rows):
            raise InputError(f"expected a 2x2 or 3x3 grid, got {[len(r) for r in rows]}")
        self.rows = rows
        self._scaled = None
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, n: int = 3) -> "Matrix":
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def identity(cls, n: int = 3) -> "Matrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def _from_ints(cls, rows, den: int = 1) -> "Matrix":
        m = cls.__new__(cls)
        if den == 1:
            m.rows = tuple(tuple(Fraction(x) for x in r) for r in rows)
        else:
            m.rows = tuple(tuple(Fraction(x, den) for x in r) for r in rows)
        m._scaled = None
        m._hash = None
        return m

    # -- basic protocol -------------------------------------------------
    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def flat(self) -> tuple:
        return tuple(x for r in self.rows for x in r)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"Matrix([{body}])"

    def tolist(self) -> list:
        return [list(r) for r in self.rows]

    # -- arithmetic -------------------------------------------------------
    def scaled(self):
        """Return ``(den, int_rows)`` with ``self == int_rows / den``."""
        if self._scaled is None:
            den = lcm(*(x.denominator for x in self.flat()))
            ints = tuple(tuple(x.numerator * (den // x.denominator) for x in r) for r in self.rows)
            self._scaled = (den, ints)
        return self._scaled

    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise InputError(f"expected a Matrix, got {type(other).__name__}")
        if other.size != self.size:
            raise InputError(f"size mismatch: {self.size} vs {other.size}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        da, a = self.scaled()
        db, b = other.scaled()
        return Matrix._from_ints(_int_matmul(a, b), da * db)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix([[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix([[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "Matrix":
        return Matrix([[-x for x in r] for r in self.rows])

    def __mul__(self, c) -> "Matrix":
        if isinstance(c, Matrix):
            return NotImplemented
        c = as_scalar(c)
        return Matrix([[c * x for x in r] for r in self.rows])

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Matrix":
        if k < 0:
            raise InputError("negative matrix power")
        out = Matrix.identity(self.size)
        for _ in range(k):
            out = out @ self
        return out

    def transpose(self) -> "Matrix":
        return Matrix(list(zip(*self.rows)))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.flat())

    def trace(self) -> Fraction:
        return sum((self.rows[i][i] for i in range(self.size)), Fraction(0))

    def det(self) -> Fraction:
        r = self.rows
        if self.size == 2:
            return r[0][0] * r[1][1] - r[0][1] * r[1][0]
        # cofactor expansion along the first row
        return (
            r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
        )

    def rank(self) -> int:
        from .linalg import rank

        return rank(self.tolist())

    def adjugate(self) -> "Matrix":
        r = self.rows
        n = self.size
        if n == 2:
            return Matrix([[r[1][1], -r[0][1]], [-r[1][0], r[0][0]]])
        cof = [[None] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                ii = [k for k in range(3) if k != i]
                jj = [k for k in range(3) if k != j]
                minor = r[ii[0]][jj[0]] * r[ii[1]][jj[1]] - r[ii[0]][jj[1]] * r[ii[1]][jj[0]]
                cof[i][j] = minor if (i + j) % 2 == 0 else -minor
        return Matrix([[cof[j][i] for j in range(3)] for i in range(3)])

    def inverse(self) -> "Matrix":
        d = self.det()
        if d == 0:
            raise InputError("matrix is singular")
        return self.adjugate() * (1 / d)


def matrix(rows) -> Matrix:
    return rows if isinstance(rows, Matrix) else Matrix(rows)


def E(i: int, j: int, n: int = 3) -> Matrix:
    """Matrix unit with a single 1 at the 1-based position (i, j)."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise InputError(f"E({i},{j}) out of range for size {n}")
    return Matrix([[int((r, c) == (i - 1, j - 1)) for c in range(n)] for r in range(n)])


J1 = E(1, 2)
J2 = E(1, 2) + E(2, 3)


def sigma2(a: Matrix) -> Fraction:
    """Sum of the principal 2x2 minors of a 3x3 matrix."""
    if a.size != 3:
        raise InputError("sigma2 is defined here for 3x3 matrices only")
    r = a.rows
    return (
        r[0][0] * r[1][1] - r[0][1] * r[1][0]
        + r[0][0] * r[2][2] - r[0][2] * r[2][0]
        + r[1][1] * r[2][2] - r[1][2] * r[2][1]
    )


def trace_product(ms: Sequence[Matrix]) -> Fraction:
    """tr(m1 m2 ... mk), computed on integer-scaled copies."""
    if not ms:
        raise InputError("trace_product needs at least one matrix")
    n = ms[0].size
    for m in ms:
        if not isinstance(m, Matrix):
            raise InputError(f"expected a Matrix, got {type(m).__name__}")
        if m.size != n:
            raise InputError(f"size mismatch: {n} vs {m.size}")
    den, acc = ms[0].scaled()
    for m in ms[1:]:
        d, b = m.scaled()
        acc = _int_matmul(acc, b)
        den *= d
    return Fraction(sum(acc[i][i] for i in range(n)), den)


def nilpotency_defect(a: Matrix):
    """First nonvanishing characteristic coefficient as ``(name, value)``, else None.

    Size 3 checks tr, sigma2, det in that order; size 2 checks tr, det.
    """
    checks = [("tr", a.trace())]
    if a.size == 3:
        checks.append(("sigma2", sigma2(a)))
    checks.append(("det", a.det()))
    for name, value in checks:
        if value != 0:
            return name, value
    return None


def is_nilpotent(a: Matrix) -> bool:
    """True iff a**size == 0."""
    n = a.size
    _, m = a.scaled()
    p = m
    for _ in range(n - 1):
        p = _int_matmul(p, m)
    return all(x == 0 for r in p for x in r)


@dataclass(frozen=True)
class NilTuple:
    """Ordered tuple of nilpotent matrices of a common size (a point of N_n^d)."""

    mats: tuple

    def __post_init__(self):
        mats = tuple(matrix(m) for m in self.mats)
        object.__setattr__(self, "mats", mats)
        if not mats:
            return
        n = mats[0].size
        for k, m in enumerate(mats, start=1):
            if m.size != n:
                raise InputError(f"matrix {k}: size {m.size} differs from {n}")
            bad = nilpotency_defect(m)
            if bad is not None:
                name, value = bad
                raise InputError(f"matrix {k} is not nilpotent: {name} = {value} != 0")

    @classmethod
    def of(cls, *mats) -> "NilTuple":
        return cls(tuple(mats))

    @classmethod
    def zeros(cls, d: int, n: int = 3) -> "NilTuple":
        return cls(tuple(Matrix.zero(n) for _ in range(d)))

    @property
    def d(self) -> int:
        return len(self.mats)

    @property
    def size(self) -> int:
        return self.mats[0].size if self.mats else 3

    def __len__(self):
        return len(self.mats)

    def __iter__(self):
        return iter(self.mats)

    def __getitem__(self, k):
        return self.mats[k]


def conjugate(g: Matrix, a, g_inv: Matrix | None = None):
    """g a g^{-1} for a Matrix or, entrywise, a NilTuple."""
    if g.det() == 0:
        raise InputError("change of basis is singular")
    if g_inv is None:
        g_inv = g.inverse()
    if isinstance(a, NilTuple):
        for m in a.mats:
            g._check(m)
        return NilTuple(tuple(g @ m @ g_inv for m in a.mats))
    g._check(a)
    return g @ a @ g_inv
