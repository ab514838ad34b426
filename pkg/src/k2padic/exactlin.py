"""Exact integer linear algebra.

Smith normal form with unimodular transforms, cokernel structure of integer
matrices, and finitely presented abelian groups with normal-form reduction.

Everything is done with Python integers, so no entry can overflow.  Relation
matrices coming from group-ring presentations are very sparse and almost
block diagonal; :func:`smith_normal_form` exploits that by splitting the
matrix into connected blocks (rows and columns linked through nonzero
entries) and diagonalizing each block separately before assembling the
global transforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd, prod
from typing import Iterable, NamedTuple, Sequence


class IntMatrix:
    """Dense integer matrix stored row-major as a tuple of tuples."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Iterable[int]], cols: int | None = None):
        rows = tuple(tuple(int(a) for a in row) for row in data)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix rows")
        self.rows = len(rows)
        self.cols = cols
        self.data = rows

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> "IntMatrix":
        data = [[0] * len(columns) for _ in range(nrows)]
        for j, col in enumerate(columns):
            if len(col) != nrows:
                raise ValueError(f"column {j} has length {len(col)}, expected {nrows}")
            for i, a in enumerate(col):
                if a:
                    data[i][j] = a
        return cls(data, cols=len(columns))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.data)

    def to_list(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.data)) if other.rows else [()] * other.cols
        return IntMatrix(
            [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.data],
            cols=other.cols,
        )

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash((self.shape, self.data))

    def __repr__(self):
        return f"IntMatrix({self.to_list()!r})"


def _as_matrix(M) -> IntMatrix:
    return M if isinstance(M, IntMatrix) else IntMatrix(M)


@dataclass(frozen=True)
class InvariantFactorGroup:
    """Finitely generated abelian group ``Z^free_rank + Z/d1 + ... + Z/dr``.

    ``factors`` is a divisibility chain ``d1 | d2 | ... | dr`` with every
    ``di >= 2``, so two groups are isomorphic iff their values are equal.
    Use :meth:`from_orders` to canonicalize an arbitrary list of cyclic orders.
    """

    factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(d) for d in self.factors))
        if self.free_rank < 0:
            raise ValueError("free_rank must be nonnegative")
        fs = self.factors
        if any(d < 2 for d in fs):
            raise ValueError(f"invariant factors must be >= 2, got {fs}")
        if any(fs[i + 1] % fs[i] for i in range(len(fs) - 1)):
            raise ValueError(f"factors {fs} do not form a divisibility chain")

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> "InvariantFactorGroup":
        """Canonical form of a direct sum of cyclic groups ``Z/m``; ``m = 0`` means ``Z``."""
        ds = sorted((abs(int(m)) for m in orders if abs(int(m)) != 1),
                    key=lambda m: (m == 0, m))
        _chain_in_place(ds)
        free = sum(1 for d in ds if d == 0)
        return cls(tuple(d for d in ds if d > 1), free)

    @classmethod
    def trivial(cls) -> "InvariantFactorGroup":
        return cls()

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int:
        if self.free_rank:
            raise ValueError("group is infinite")
        return prod(self.factors)

    @property
    def exponent(self) -> int:
        if self.free_rank:
            raise ValueError("group is infinite")
        return self.factors[-1] if self.factors else 1

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "factors": list(self.factors)}

    @classmethod
    def from_json(cls, obj: dict) -> "InvariantFactorGroup":
        return cls(tuple(obj["factors"]), obj["free_rank"])

    def __str__(self):
        parts = [str(d) for d in self.factors]
        if not parts and not self.free_rank:
            return "0"
        s = "(" + ",".join(parts) + ")" if parts else ""
        if self.free_rank:
            z = "Z" if self.free_rank == 1 else f"Z^{self.free_rank}"
            s = z + (" + " + s if s else "")
        return s


def _chain_in_place(ds: list[int]) -> None:
    # (d_i, d_j) -> (gcd, lcm) for every i < j yields a divisibility chain
    n = len(ds)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = ds[i], ds[j]
            if a == 0 or (b % a == 0):
                continue
            g = gcd(a, b)
            ds[i], ds[j] = g, (a // g) * b if b else 0


def direct_sum(parts: Iterable[InvariantFactorGroup]) -> InvariantFactorGroup:
    orders: list[int] = []
    for part in parts:
        orders.extend(part.factors)
        orders.extend([0] * part.free_rank)
    return InvariantFactorGroup.from_orders(orders)


class SmithForm(NamedTuple):
    """``U @ M @ V == D`` where ``D`` carries ``diagonal`` on its main diagonal."""

    diagonal: tuple[int, ...]
    U: IntMatrix
    V: IntMatrix

    def D(self) -> IntMatrix:
        r, c = self.U.rows, self.V.rows
        data = [[0] * c for _ in range(r)]
        for t, d in enumerate(self.diagonal):
            data[t][t] = d
        return IntMatrix(data, cols=c)


def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _snf_block(A, track):
    """Diagonalize the dense block ``A`` in place.

    Returns ``(diag, U, V, Uinv)`` with ``U A0 V = diag`` on the leading
    diagonal; the transforms are ``None`` unless ``track``.  Pivot: smallest
    absolute value, ties broken by lowest (row, col).
    """
    m = len(A)
    n = len(A[0]) if m else 0
    U = _eye(m) if track else None
    Ui = _eye(m) if track else None
    V = _eye(n) if track else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if track:
            U[i], U[j] = U[j], U[i]
            for r in Ui:
                r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        if track:
            for r in V:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        rs = A[src]
        A[dst] = [a + q * b for a, b in zip(A[dst], rs)]
        if track:
            U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]
            for r in Ui:
                if r[dst]:
                    r[src] -= q * r[dst]

    def add_col(dst, src, q):
        for r in A:
            if r[src]:
                r[dst] += q * r[src]
        if track:
            for r in V:
                if r[src]:
                    r[dst] += q * r[src]

    diag = []
    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                row = A[i]
                for j in range(t, n):
                    a = row[j]
                    if a and (best is None or abs(a) < best[0]):
                        best = (abs(a), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                return diag + [0] * (min(m, n) - t), U, V, Ui
            _, i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            piv = A[t][t]
            clean = True
            for i in range(t + 1, m):
                a = A[i][t]
                if a:
                    add_row(i, t, -(a // piv))
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                a = A[t][j]
                if a:
                    add_col(j, t, -(a // piv))
                    if A[t][j]:
                        clean = False
            if not clean:
                continue
            bad = None
            for i in range(t + 1, m):
                row = A[i]
                for j in range(t + 1, n):
                    if row[j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is not None:
                add_row(t, bad, 1)
                continue
            break
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            if track:
                U[t] = [-a for a in U[t]]
                for r in Ui:
                    r[t] = -r[t]
        diag.append(A[t][t])
    return diag, U, V, Ui


def _blocks(M: IntMatrix):
    """Connected components of the row/column incidence graph of ``M``."""
    r, c = M.shape
    parent = list(range(r + c))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, row in enumerate(M.data):
        for j, a in enumerate(row):
            if a:
                a_, b_ = find(i), find(r + j)
                if a_ != b_:
                    parent[max(a_, b_)] = min(a_, b_)
    comps: dict[int, tuple[list[int], list[int]]] = {}
    for i in range(r):
        comps.setdefault(find(i), ([], []))[0].append(i)
    for j in range(c):
        comps.setdefault(find(r + j), ([], []))[1].append(j)
    return [comps[k] for k in sorted(comps)]


def _diagonal_pieces(M: IntMatrix, track: bool):
    out = []
    for rows, cols in _blocks(M):
        if not rows or not cols:
            out.append((rows, cols, [], None, None, None))
            continue
        A = [[M.data[i][j] for j in cols] for i in rows]
        diag, U, V, Ui = _snf_block(A, track)
        out.append((rows, cols, diag, U, V, Ui))
    return out


def invariant_factors(M) -> tuple[int, ...]:
    """Diagonal of the Smith normal form of ``M`` (length ``min(rows, cols)``)."""
    M = _as_matrix(M)
    ds = []
    for _, _, diag, *_ in _diagonal_pieces(M, track=False):
        ds.extend(diag)
    ds.extend([0] * (min(M.shape) - len(ds)))
    ds.sort(key=lambda d: (d == 0, d))
    _chain_in_place(ds)
    return tuple(ds)


def smith_normal_form(M) -> SmithForm:
    """Smith normal form ``U @ M @ V = D`` with ``d1 | d2 | ...`` and ``U``, ``V`` unimodular.

    Zeros of the diagonal come last.  Deterministic for a fixed input.
    """
    return _smith_with_inverse(_as_matrix(M))[0]


def _smith_with_inverse(M: IntMatrix):
    m, n = M.shape
    pieces = _diagonal_pieces(M, track=True)
    slots = []  # (value, block, local index)
    extra_rows, extra_cols = [], []
    for b, (rows, cols, diag, *_rest) in enumerate(pieces):
        for l, d in enumerate(diag):
            slots.append((d, b, l))
        k = len(diag)
        extra_rows.extend((b, l) for l in range(k, len(rows)))
        extra_cols.extend((b, l) for l in range(k, len(cols)))
    slots.sort(key=lambda s: (s[0] == 0, s[0], s[1], s[2]))

    row_order = [(b, l) for _, b, l in slots] + extra_rows
    col_order = [(b, l) for _, b, l in slots] + extra_cols

    U = [[0] * m for _ in range(m)]
    Ui = [[0] * m for _ in range(m)]
    for t, (b, l) in enumerate(row_order):
        rows, _, _, Ub, _, Uib = pieces[b]
        if Ub is None:
            # isolated zero row
            U[t][rows[l]] = 1
            Ui[rows[l]][t] = 1
            continue
        for a, gi in zip(Ub[l], rows):
            U[t][gi] = a
        for li, gi in enumerate(rows):
            Ui[gi][t] = Uib[li][l]
    V = [[0] * n for _ in range(n)]
    for t, (b, l) in enumerate(col_order):
        _, cols, _, _, Vb, _ = pieces[b]
        if Vb is None:
            V[cols[l]][t] = 1
            continue
        for li, gj in enumerate(cols):
            V[gj][t] = Vb[li][l]

    ds = [s[0] for s in slots] + [0] * (min(m, n) - len(slots))
    nz = sum(1 for d in ds if d)
    for i in range(nz):
        for j in range(i + 1, nz):
            a, b = ds[i], ds[j]
            if b % a == 0:
                continue
            g, x, y = _xgcd(a, b)
            ag, bg = a // g, b // g
            ds[i], ds[j] = g, ag * b
            ri, rj = U[i], U[j]
            U[i] = [x * p + y * q for p, q in zip(ri, rj)]
            U[j] = [-bg * p + ag * q for p, q in zip(ri, rj)]
            for r in Ui:
                ci, cj = r[i], r[j]
                r[i] = ag * ci + bg * cj
                r[j] = -y * ci + x * cj
            for r in V:
                ci, cj = r[i], r[j]
                r[i] = ci + cj
                r[j] = -y * bg * ci + x * ag * cj
    sf = SmithForm(tuple(ds), IntMatrix(U, cols=m), IntMatrix(V, cols=n))
    return sf, Ui


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def cokernel(M) -> InvariantFactorGroup:
    """Structure of ``Z^rows / (column span of M)``."""
    M = _as_matrix(M)
    ds = invariant_factors(M)
    rank = sum(1 for d in ds if d)
    return InvariantFactorGroup(tuple(d for d in ds if d > 1), M.rows - rank)


@dataclass(frozen=True, eq=False)
class PresentedAbGroup:
    """Abelian group ``Z^n / <relations>`` given by generators and relation columns.

    Elements are integer coordinate vectors over the generators.  The Smith
    transforms are computed on first use, so building a presentation only to
    read off its :attr:`structure` stays cheap.
    """

    labels: tuple
    relations: IntMatrix

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if self.relations.rows != len(self.labels):
            raise ValueError(
                f"relation matrix has {self.relations.rows} rows for {len(self.labels)} generators")

    @classmethod
    def from_relations(cls, labels, relation_vectors) -> "PresentedAbGroup":
        labels = tuple(labels)
        return cls(labels, IntMatrix.from_columns([list(v) for v in relation_vectors], len(labels)))

    @property
    def ngens(self) -> int:
        return len(self.labels)

    @cached_property
    def structure(self) -> InvariantFactorGroup:
        return cokernel(self.relations)

    @property
    def order(self) -> int:
        return self.structure.order

    @cached_property
    def _snf(self):
        sf, Ui = _smith_with_inverse(self.relations)
        ds = list(sf.diagonal) + [0] * (self.ngens - len(sf.diagonal))
        return sf, Ui, ds

    @property
    def smith(self) -> SmithForm:
        return self._snf[0]

    def _check(self, v) -> list[int]:
        v = [int(a) for a in v]
        if len(v) != self.ngens:
            raise ValueError(f"vector has length {len(v)}, expected {self.ngens}")
        return v

    def _transformed(self, v):
        sf, _, ds = self._snf
        v = self._check(v)
        w = [sum(a * b for a, b in zip(row, v) if b) for row in sf.U.data]
        return w, ds

    def coordinates(self, v) -> tuple[int, ...]:
        """Coordinates of ``v`` in the invariant-factor basis: torsion part reduced, then free part."""
        w, ds = self._transformed(v)
        tors = tuple(a % d for a, d in zip(w, ds) if d > 1)
        free = tuple(a for a, d in zip(w, ds) if d == 0)
        return tors + free

    def reduce(self, v) -> tuple[int, ...]:
        """Canonical representative of the class of ``v``, in generator coordinates."""
        w, ds = self._transformed(v)
        w = [0 if d == 1 else (a % d if d else a) for a, d in zip(w, ds)]
        Ui = self._snf[1]
        return tuple(sum(a * b for a, b in zip(row, w) if b) for row in Ui)

    def is_zero(self, v) -> bool:
        return not any(self.coordinates(v))

    def equal(self, v, w) -> bool:
        return self.is_zero([a - b for a, b in zip(self._check(v), self._check(w))])

    def element_order(self, v) -> int:
        """Order of the class of ``v``; raises ``ValueError`` if it has infinite order."""
        w, ds = self._transformed(v)
        o = 1
        for a, d in zip(w, ds):
            if d == 0:
                if a:
                    raise ValueError("element has infinite order")
            elif d > 1:
                k = d // gcd(a % d, d)
                o = o * k // gcd(o, k)
        return o

    def subgroup_order(self, gens) -> int:
        """Order of the subgroup generated by the classes of ``gens``.

        Raises ``ValueError`` when that subgroup is infinite.
        """
        gens = [self._check(g) for g in gens]
        if not gens:
            return 1
        cols = [list(self.relations.column(j)) for j in range(self.relations.cols)] + gens
        bigger = cokernel(IntMatrix.from_columns(cols, self.ngens))
        mine = self.structure
        if bigger.free_rank != mine.free_rank:
            raise ValueError("generated subgroup is infinite")
        return prod(mine.factors) // prod(bigger.factors)


def subgroup_order(P: PresentedAbGroup, gens) -> int:
    return P.subgroup_order(gens)


def reduce(P: PresentedAbGroup, v) -> tuple[int, ...]:
    return P.reduce(v)
