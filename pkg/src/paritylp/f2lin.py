"""Exact GF(2) linear algebra on bit-packed vectors and matrices.

A vector of F_2^n is a plain int: coordinate x_j lives in bit (j - 1), so
coordinate 1 is the least-significant bit.  ``vec_str`` renders coordinates
left to right (x_1 x_2 ... x_n).  Matrices are immutable tuples of row ints
with an explicit column count.  Everything here is pure and hashable, so
values double as dictionary keys throughout the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import BudgetError, RankDeficientError

# Enumeration budgets: subspace counts grow as Gaussian binomials, and the
# universality check walks every affine subspace of the given dimension.
CODE_ENUM_MAX_N = 8
UNIVERSAL_MAX_N = 6


def hamming_weight(v: int) -> int:
    return int(v).bit_count()


def dot(u: int, v: int) -> int:
    """Inner product of two vectors over F_2 (0 or 1)."""
    return (u & v).bit_count() & 1


def sign(u: int, v: int) -> int:
    """(-1)**(u.v) as a Python int."""
    return -1 if dot(u, v) else 1


def vec_str(v: int, n: int) -> str:
    """Render a vector as the coordinate string x_1 x_2 ... x_n."""
    return "".join("1" if (v >> j) & 1 else "0" for j in range(n))


def vec_from_str(s: str) -> int:
    """Parse a coordinate string (inverse of vec_str)."""
    v = 0
    for j, ch in enumerate(s):
        if ch == "1":
            v |= 1 << j
        elif ch != "0":
            raise ValueError(f"invalid coordinate string {s!r}")
    return v


def all_vectors(n: int) -> range:
    return range(1 << n)


def ball(n: int, d: int) -> tuple[int, ...]:
    """All vectors of Hamming weight <= d, ascending by integer encoding."""
    return tuple(v for v in all_vectors(n) if hamming_weight(v) <= d)


@dataclass(frozen=True)
class F2Matrix:
    """Matrix over F_2 stored as one int per row (bit j-1 = column j)."""

    n_cols: int
    rows: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.n_cols < 0:
            raise ValueError("n_cols must be nonnegative")
        limit = 1 << self.n_cols
        for r in self.rows:
            if not 0 <= r < limit:
                raise ValueError(f"row {r} out of range for {self.n_cols} columns")

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def is_empty(self) -> bool:
        return not self.rows

    def mul_vec(self, x: int) -> int:
        """Matrix-vector product M.x; bit j of the result is row_j . x."""
        y = 0
        for j, row in enumerate(self.rows):
            y |= ((row & x).bit_count() & 1) << j
        return y

    def transpose_mul(self, u: int) -> int:
        """Transpose-vector product Mᵀ.u, i.e. the row combination sum u_j row_j."""
        out = 0
        for j, row in enumerate(self.rows):
            if (u >> j) & 1:
                out ^= row
        return out

    def mul_transpose(self, other: F2Matrix) -> F2Matrix:
        """M . Nᵀ with entries row_i(M) . row_j(N)."""
        if other.n_cols != self.n_cols:
            raise ValueError("column counts differ")
        rows = []
        for r in self.rows:
            val = 0
            for j, s in enumerate(other.rows):
                val |= dot(r, s) << j
            rows.append(val)
        return F2Matrix(other.n_rows, tuple(rows))

    def row_space(self) -> list[int]:
        """All vectors in the span of the rows (deduplicated)."""
        reduced, _ = rref(self)
        return [reduced.transpose_mul(u) for u in range(1 << reduced.n_rows)]

    def to_strings(self) -> list[str]:
        return [vec_str(r, self.n_cols) for r in self.rows]

    @classmethod
    def from_strings(cls, rows: list[str]) -> F2Matrix:
        if not rows:
            raise ValueError("cannot infer column count from zero rows")
        n = len(rows[0])
        return cls(n, tuple(vec_from_str(r) for r in rows))


def identity(n: int) -> F2Matrix:
    return F2Matrix(n, tuple(1 << j for j in range(n)))


def rref(m: F2Matrix) -> tuple[F2Matrix, tuple[int, ...]]:
    """Reduced row-echelon form with pivot columns scanned in coordinate order.

    Zero rows are dropped, so the result has one row per pivot and rows come
    out sorted by pivot.  The RREF of a row space is unique, which is what
    makes it usable as a canonical form.
    """
    rows = list(m.rows)
    pivots: list[int] = []
    r = 0
    for col in range(m.n_cols):
        piv = next((i for i in range(r, len(rows)) if (rows[i] >> col) & 1), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and (rows[i] >> col) & 1:
                rows[i] ^= rows[r]
        pivots.append(col)
        r += 1
    return F2Matrix(m.n_cols, tuple(rows[:r])), tuple(pivots)


def rank(m: F2Matrix) -> int:
    """GF(2) row rank; 0 for the empty matrix."""
    return rref(m)[0].n_rows


def kernel_generator(h: F2Matrix) -> F2Matrix:
    """Canonical (n-k) x n generator G of Ker(H) for a full-rank k x n H.

    For k = 0 this is the identity (singleton cosets); for k = n it is the
    empty matrix (a single coset covering the whole space).  Raises
    RankDeficientError when H is not full rank.
    """
    reduced, pivots = rref(h)
    if reduced.n_rows != h.n_rows:
        raise RankDeficientError(
            f"matrix has rank {reduced.n_rows}, expected {h.n_rows}"
        )
    n = h.n_cols
    free = [c for c in range(n) if c not in pivots]
    kernel_rows = []
    for f in free:
        v = 1 << f
        for r, p in enumerate(pivots):
            if (reduced.rows[r] >> f) & 1:
                v |= 1 << p
        kernel_rows.append(v)
    reduced_kernel, _ = rref(F2Matrix(n, tuple(kernel_rows)))
    return reduced_kernel


def gaussian_binomial(n: int, k: int) -> int:
    """Number of k-dimensional subspaces of F_2^n."""
    if not 0 <= k <= n:
        return 0
    num = den = 1
    for i in range(k):
        num *= (1 << (n - i)) - 1
        den *= (1 << (k - i)) - 1
    assert num % den == 0
    return num // den


@dataclass(frozen=True)
class CosetPartition:
    """The 2^(n-k) dual cosets of a code, indexed by syndrome.

    ``members[s]`` lists the coset sorted ascending; leaders break weight
    ties by smallest integer encoding.
    """

    n: int
    k: int
    members: tuple[tuple[int, ...], ...]
    leaders_min: tuple[int, ...]
    leaders_max: tuple[int, ...]

    @property
    def n_syndromes(self) -> int:
        return len(self.members)

    def members_of(self, s: int) -> tuple[int, ...]:
        return self.members[s]

    def leader_min(self, s: int) -> int:
        return self.leaders_min[s]

    def leader_max(self, s: int) -> int:
        return self.leaders_max[s]


@dataclass(frozen=True)
class ParityCode:
    """A canonical full-rank k x n parity matrix with its dual-coset data.

    H is in reduced row-echelon form, so two codes with equal row space are
    the same record.  G generates Ker(H); the coset of syndrome s is
    {x : G.x = s}, a shift of the row space of H.
    """

    n: int
    k: int
    H: F2Matrix

    @classmethod
    def from_matrix(cls, m: F2Matrix) -> ParityCode:
        reduced, _ = rref(m)
        if reduced.n_rows != m.n_rows:
            raise RankDeficientError("parity matrix must have full rank")
        return cls(m.n_cols, reduced.n_rows, reduced)

    @classmethod
    def bottom(cls, n: int) -> ParityCode:
        """The rank-0 code backing the no-information outcome."""
        return cls(n, 0, F2Matrix(n, ()))

    @classmethod
    def full(cls, n: int) -> ParityCode:
        return cls(n, n, identity(n))

    @cached_property
    def G(self) -> F2Matrix:
        return kernel_generator(self.H)

    @cached_property
    def cosets(self) -> CosetPartition:
        return dual_cosets(self)

    def syndrome(self, x: int) -> int:
        """Coset label G.x of a vector."""
        return self.G.mul_vec(x)

    def parity(self, x: int) -> int:
        """The measured information y = H.x."""
        return self.H.mul_vec(x)

    def label(self) -> str:
        if self.k == 0:
            return "bottom"
        return "H[" + ";".join(self.H.to_strings()) + "]"


def dual_cosets(code: ParityCode) -> CosetPartition:
    """Partition F_2^n into the fibers of x -> G.x and pick both leaders."""
    n, k = code.n, code.k
    buckets: list[list[int]] = [[] for _ in range(1 << (n - k))]
    for x in all_vectors(n):
        buckets[code.syndrome(x)].append(x)
    members = tuple(tuple(b) for b in buckets)
    lead_min = tuple(min(b, key=lambda v: (hamming_weight(v), v)) for b in buckets)
    lead_max = tuple(min(b, key=lambda v: (-hamming_weight(v), v)) for b in buckets)
    return CosetPartition(n, k, members, lead_min, lead_max)


def enumerate_codes(n: int, k: int) -> list[ParityCode]:
    """One canonical code per k-dimensional row space of F_2^n.

    Enumerates reduced row-echelon forms directly: choose pivot columns,
    then fill the free positions (non-pivot columns right of each pivot).
    The count is the Gaussian binomial [n choose k]_2.
    """
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    if n > CODE_ENUM_MAX_N:
        raise BudgetError(f"code enumeration capped at n <= {CODE_ENUM_MAX_N}")
    out: list[ParityCode] = []
    for pivots in itertools.combinations(range(n), k):
        pivot_set = set(pivots)
        free_positions = [
            [c for c in range(p + 1, n) if c not in pivot_set] for p in pivots
        ]
        counts = [len(f) for f in free_positions]
        total_free = sum(counts)
        for bits in range(1 << total_free):
            rows = []
            t = 0
            for i in range(k):
                row = 1 << pivots[i]
                for c in free_positions[i]:
                    if (bits >> t) & 1:
                        row |= 1 << c
                    t += 1
                rows.append(row)
            out.append(ParityCode(n, k, F2Matrix(n, tuple(rows))))
    return out


def enumerate_all_codes(n: int) -> list[ParityCode]:
    """All canonical codes of every rank, rank-0 first."""
    return [code for k in range(n + 1) for code in enumerate_codes(n, k)]


def enumerate_identity_rows(n: int, k: int) -> list[F2Matrix]:
    """The C(n, k) ordered row-submatrices of the identity."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    return [
        F2Matrix(n, tuple(1 << i for i in combo))
        for combo in itertools.combinations(range(n), k)
    ]


def char_sum(generator: F2Matrix, v: int) -> int:
    """Sum of (-1)**(v.c) over the subspace spanned by the generator rows.

    Equals the subspace size when v is orthogonal to every generator row and
    0 otherwise; computed by direct summation so it can serve as an oracle.
    """
    return sum(sign(c, v) for c in generator.row_space())


def _check_universal_budget(tau: int, n: int) -> None:
    if not 1 <= tau <= n:
        raise ValueError("need 1 <= tau <= n")
    if n > UNIVERSAL_MAX_N:
        raise BudgetError(f"affine-subspace enumeration capped at n <= {UNIVERSAL_MAX_N}")


def uncovered_affine_subspaces(
    u: set[int] | frozenset[int], tau: int, n: int
) -> list[tuple[ParityCode, int]]:
    """All tau-dimensional affine subspaces disjoint from U, as (code, syndrome).

    The cosets of a rank-tau code's row space run over every affine
    tau-subspace exactly once as the code ranges over canonical forms.
    """
    _check_universal_budget(tau, n)
    missed: list[tuple[ParityCode, int]] = []
    n_syndromes = 1 << (n - tau)
    for code in enumerate_codes(n, tau):
        hit = {code.syndrome(x) for x in u}
        if len(hit) < n_syndromes:
            missed.extend((code, s) for s in range(n_syndromes) if s not in hit)
    return missed


def is_universal(u: set[int] | frozenset[int], tau: int, n: int) -> bool:
    """True iff U meets every affine subspace of dimension tau."""
    _check_universal_budget(tau, n)
    n_syndromes = 1 << (n - tau)
    for code in enumerate_codes(n, tau):
        hit = set()
        for x in u:
            hit.add(code.syndrome(x))
            if len(hit) == n_syndromes:
                break
        else:
            return False
    return True
