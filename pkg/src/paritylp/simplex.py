"""Dense two-phase simplex with Bland's rule.

Solves   min c.x   s.t.   A x = b,  x >= 0,  with b >= 0,
over exact `fractions.Fraction` entries or binary64 floats; the entry type
of the supplied data decides which.  Bland's anti-cycling rule is used for
both the entering and the leaving choice, so the method terminates on every
input.  The tableau is a plain list of lists, which is plenty for the
desk-scale models built elsewhere in this package.
"""

from __future__ import annotations

from dataclasses import dataclass

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class StandardResult:
    status: str
    objective: object | None
    x: list | None
    pivots: int
    # Phase-2 reduced costs per original column; the entries sitting on
    # slack columns are the optimal multipliers of the corresponding rows.
    reduced_costs: list | None = None


def _pivot(rows, rhs, obj_rows, obj_rhs, basis, r, j) -> None:
    prow = rows[r]
    piv = prow[j]
    if piv != 1:
        rows[r] = prow = [v / piv for v in prow]
        rhs[r] = rhs[r] / piv
    for i in range(len(rows)):
        if i == r:
            continue
        f = rows[i][j]
        if f:
            row = rows[i]
            rows[i] = [a - f * b if b else a for a, b in zip(row, prow)]
            rhs[i] = rhs[i] - f * rhs[r]
    for t in range(len(obj_rows)):
        f = obj_rows[t][j]
        if f:
            row = obj_rows[t]
            obj_rows[t] = [a - f * b if b else a for a, b in zip(row, prow)]
            obj_rhs[t] = obj_rhs[t] - f * rhs[r]
    basis[r] = j


# Degenerate pivots allowed under the steepest-coefficient rule before the
# iteration switches (permanently) to Bland's rule, which cannot cycle.
STALL_LIMIT = 30


def _iterate(rows, rhs, obj_rows, obj_rhs, basis, allowed, tol, pivots) -> tuple[str, int]:
    """Run simplex iterations on obj_rows[0] until optimal or unbounded.

    Entering variable: most negative reduced cost (fast in practice) until
    STALL_LIMIT consecutive degenerate steps, then lowest index (Bland) for
    guaranteed termination.  Leaving variable: minimum ratio, ties broken by
    lowest basis index.
    """
    obj = obj_rows[0]
    stall = 0
    bland = False
    while True:
        enter = -1
        if bland:
            for j in allowed:
                if obj[j] < -tol:
                    enter = j
                    break
        else:
            best_cost = -tol
            for j in allowed:
                if obj[j] < best_cost:
                    best_cost = obj[j]
                    enter = j
        if enter < 0:
            return OPTIMAL, pivots
        leave = -1
        best = None
        for i in range(len(rows)):
            a = rows[i][enter]
            if a > tol:
                ratio = rhs[i] / a
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            return UNBOUNDED, pivots
        if not bland:
            stall = stall + 1 if best == 0 else 0
            if stall > STALL_LIMIT:
                bland = True
        _pivot(rows, rhs, obj_rows, obj_rhs, basis, leave, enter)
        obj = obj_rows[0]
        pivots += 1


def simplex_min(a_rows, b, c, *, basis_seed=None, tol=0) -> StandardResult:
    """Two-phase simplex for min c.x, A x = b (b >= 0), x >= 0.

    Args:
        a_rows: list of dense rows, each of length len(c).
        b: nonnegative right-hand sides.
        c: objective coefficients.
        basis_seed: optional per-row column index whose column is the r-th
            identity vector; rows without a seed receive an artificial.
        tol: comparison tolerance (0 for exact data, ~1e-9 for floats).

    Returns:
        StandardResult; x has length len(c), and reduced_costs covers the
        original columns at phase-2 optimality.
    """
    m = len(a_rows)
    nv = len(c)
    zero = b[0] * 0 if m else 0
    one = zero + 1
    rows = [list(r) for r in a_rows]
    rhs = list(b)
    basis = [-1] * m
    if basis_seed:
        for i, col in enumerate(basis_seed):
            if col is not None:
                basis[i] = col

    artificial_cols: list[int] = []
    for i in range(m):
        if basis[i] < 0:
            col = nv + len(artificial_cols)
            artificial_cols.append(col)
            for t in range(m):
                rows[t].append(one if t == i else zero)
            basis[i] = col
    total_cols = nv + len(artificial_cols)

    cost_row = list(c) + [zero] * len(artificial_cols)
    cost_rhs = zero
    # Price out the seeded basis so reduced costs start consistent.
    for i in range(m):
        cb = cost_row[basis[i]]
        if cb:
            row = rows[i]
            cost_row = [a - cb * v if v else a for a, v in zip(cost_row, row)]
            cost_rhs = cost_rhs - cb * rhs[i]
    pivots = 0

    if artificial_cols:
        phase1 = [zero] * total_cols
        for col in artificial_cols:
            phase1[col] = one
        p1_rhs = zero
        for i in range(m):
            if basis[i] in artificial_cols:
                row = rows[i]
                phase1 = [a - v if v else a for a, v in zip(phase1, row)]
                p1_rhs = p1_rhs - rhs[i]
        obj_rows = [phase1, cost_row]
        obj_rhs = [p1_rhs, cost_rhs]
        allowed = range(total_cols)
        status, pivots = _iterate(rows, rhs, obj_rows, obj_rhs, basis, allowed, tol, pivots)
        if status != OPTIMAL:
            return StandardResult(status, None, None, pivots)
        infeas = -obj_rhs[0]
        if infeas > tol:
            return StandardResult(INFEASIBLE, None, None, pivots)
        # Drive leftover artificials out of the (degenerate) basis; rows
        # with no usable pivot are redundant and dropped.
        drop_rows = []
        for i in range(m):
            if basis[i] in artificial_cols:
                target = next(
                    (j for j in range(nv) if abs(rows[i][j]) > tol), None
                )
                if target is None:
                    drop_rows.append(i)
                else:
                    _pivot(rows, rhs, obj_rows, obj_rhs, basis, i, target)
                    pivots += 1
        for i in reversed(drop_rows):
            del rows[i], rhs[i], basis[i]
        cost_row = obj_rows[1]
        cost_rhs = obj_rhs[1]

    obj_rows = [cost_row]
    obj_rhs = [cost_rhs]
    allowed = range(nv)
    status, pivots = _iterate(rows, rhs, obj_rows, obj_rhs, basis, allowed, tol, pivots)
    if status != OPTIMAL:
        return StandardResult(status, None, None, pivots)

    x = [zero] * nv
    for i, col in enumerate(basis):
        if col < nv:
            x[col] = rhs[i]
    objective = sum((ci * xi for ci, xi in zip(c, x)), zero)
    return StandardResult(OPTIMAL, objective, x, pivots, obj_rows[0][:nv])
