"""Primal and dual linear programs for fine-grained unambiguous measurement.

The primal works on coset-reduced variables mu[(code, s)] = lambda * weight,
one per (canonical code, syndrome) whose coset avoids the zero-weight set;
the constancy of lambda * weight on each coset is thereby built into the
model instead of written as equalities.  The dual has one nonnegative
variable per index and one covering constraint per (code, syndrome).

Solving is exact over rationals by default (binary64 on request).  Wide
dual-shaped models are solved through their own LP dual, whose slack basis
is immediately feasible; the optimal multipliers are read off the final
reduced costs and re-verified against the original model.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

from . import simplex
from .errors import BudgetError, SolveError
from .f2lin import ParityCode, all_vectors, enumerate_all_codes, vec_str
from .profiles import AmplitudeProfile, CostFunction

LP_MAX_N = 5

EXACT = "exact"
FLOAT = "float"

FLOAT_FEAS_TOL = 1e-9


def _coerce(value, exact: bool):
    if exact:
        return value if isinstance(value, Fraction) else Fraction(value)
    return float(value)


def _is_exact(values) -> bool:
    return all(isinstance(v, Rational) for v in values)


@dataclass
class Constraint:
    coeffs: dict[int, object]
    rel: str
    rhs: object
    tag: tuple = ()


@dataclass
class LpModel:
    name: str
    sense: str
    labels: list
    objective: list
    constraints: list[Constraint]

    @property
    def n_vars(self) -> int:
        return len(self.labels)

    def to_text(self) -> str:
        """One line per constraint, for eyeballing small models."""
        def varname(j):
            lab = self.labels[j]
            if lab[0] == "mu":
                _, code, s = lab
                return f"mu[{code.label()},s={s}]"
            if lab[0] == "b":
                return f"b[{vec_str(lab[1], _label_n(lab))}]"
            return str(lab)

        lines = [f"# {self.name}: {self.sense} "
                 + " + ".join(f"{c}*{varname(j)}" for j, c in enumerate(self.objective) if c)]
        for con in self.constraints:
            terms = " + ".join(
                f"{c}*{varname(j)}" for j, c in sorted(con.coeffs.items()) if c
            )
            lines.append(f"{terms} {con.rel} {con.rhs}")
        return "\n".join(lines)


def _label_n(label) -> int:
    return label[2]


@dataclass
class SolveReport:
    status: str
    objective: object | None
    values: dict | None
    mode: str
    pivots: int
    wall_time: float
    strategy: str

    def to_json_dict(self) -> dict:
        def render(v):
            return str(v) if isinstance(v, Fraction) else v

        values = None
        if self.values is not None:
            values = {_label_str(k): render(v) for k, v in self.values.items()}
        return {
            "status": self.status,
            "objective": render(self.objective),
            "objective_float": None if self.objective is None else float(self.objective),
            "mode": self.mode,
            "pivots": self.pivots,
            "wall_time_s": self.wall_time,
            "strategy": self.strategy,
            "values": values,
        }


def _label_str(label) -> str:
    if label[0] == "mu":
        _, code, s = label
        return f"mu[{code.label()},s={s}]"
    if label[0] == "b":
        _, i, n = label
        return f"b[{vec_str(i, n)}]"
    return str(label)


def _check_budget(n: int) -> None:
    if n > LP_MAX_N:
        raise BudgetError(f"linear programs capped at n <= {LP_MAX_N}")


def build_primal(profile: AmplitudeProfile, cost: CostFunction) -> LpModel:
    """Coset-reduced maximization program for the measurement quality.

    Variables mu[(code, s)] >= 0 exist only for cosets inside the support;
    a coset touching a zero-weight index is pinned to zero by omission.  One
    equality per supported index i: sum over codes of mu[(code, s(i))] / w_i
    equals 1.
    """
    _check_budget(profile.n)
    exact = profile.rational
    codes = enumerate_all_codes(profile.n)
    support = set(profile.support)

    labels: list = []
    objective: list = []
    var_index: dict = {}
    for code in codes:
        cos = code.cosets
        ck = _coerce(cost.value(code.k), exact)
        scale = ck * (1 << code.k)
        for s in range(cos.n_syndromes):
            if all(i in support for i in cos.members_of(s)):
                var_index[(code, s)] = len(labels)
                labels.append(("mu", code, s))
                objective.append(scale)

    one = _coerce(1, exact)
    constraints = []
    for i in profile.support:
        w = profile.weight_exact(i) if exact else profile.weights_float[i]
        inv = one / w
        coeffs = {}
        for code in codes:
            idx = var_index.get((code, code.syndrome(i)))
            if idx is not None:
                coeffs[idx] = inv
        constraints.append(Constraint(coeffs, "=", one, tag=("index", i)))
    return LpModel("primal", "max", labels, objective, constraints)


def build_dual(profile: AmplitudeProfile, cost: CostFunction) -> LpModel:
    """Covering program: minimize sum b_i w_i subject to per-coset lower bounds."""
    _check_budget(profile.n)
    exact = profile.rational
    n = profile.n
    labels = [("b", i, n) for i in all_vectors(n)]
    objective = [
        profile.weight_exact(i) if exact else profile.weights_float[i]
        for i in all_vectors(n)
    ]
    one = _coerce(1, exact)
    constraints = []
    for code in enumerate_all_codes(n):
        cos = code.cosets
        rhs = _coerce(cost.value(code.k), exact) * (1 << code.k)
        for s in range(cos.n_syndromes):
            coeffs = {i: one for i in cos.members_of(s)}
            constraints.append(Constraint(coeffs, ">=", rhs, tag=("coset", code, s)))
    return LpModel("dual", "min", labels, objective, constraints)


def _dual_shaped(model: LpModel) -> bool:
    return (
        model.sense == "min"
        and len(model.constraints) > model.n_vars
        and all(c.rel == ">=" for c in model.constraints)
        and all(c.rhs >= 0 for c in model.constraints)
        and all(v >= 0 for v in model.objective)
    )


def _solve_dualized(model: LpModel, exact: bool, tol) -> simplex.StandardResult | None:
    """Solve a wide min/>= model through its own LP dual.

    The companion program max r.mu s.t. Aᵀ mu <= w starts from a feasible
    slack basis (w >= 0), and its optimal reduced costs on the slack columns
    are the original variables.  Returns None when the extracted point fails
    re-verification, in which case the caller falls back to two-phase.
    """
    m = len(model.constraints)
    nv = model.n_vars
    zero = _coerce(0, exact)
    one = _coerce(1, exact)
    rows = [[zero] * (m + nv) for _ in range(nv)]
    for j, con in enumerate(model.constraints):
        for i, coef in con.coeffs.items():
            rows[i][j] = _coerce(coef, exact)
    for i in range(nv):
        rows[i][m + i] = one
    rhs = [_coerce(v, exact) for v in model.objective]
    c = [-_coerce(con.rhs, exact) for con in model.constraints] + [zero] * nv
    result = simplex.simplex_min(
        rows, rhs, c, basis_seed=[m + i for i in range(nv)], tol=tol
    )
    if result.status != simplex.OPTIMAL:
        return None
    b = [result.reduced_costs[m + i] for i in range(nv)]
    objective = sum((w * bi for w, bi in zip(model.objective, b)), zero)
    check_tol = 0 if exact else 1e-7
    if abs(objective - (-result.objective)) > check_tol:
        return None
    for con in model.constraints:
        total = sum((con.coeffs[i] * b[i] for i in con.coeffs), zero)
        if total < con.rhs - check_tol:
            return None
    return simplex.StandardResult(
        simplex.OPTIMAL, objective, b, result.pivots, None
    )


def solve(model: LpModel, mode: str = EXACT) -> SolveReport:
    """Solve a model exactly (rational simplex) or in binary64.

    Bland's rule is used throughout, so runs are reproducible and exact-mode
    optima are bit-identical across invocations.
    """
    if mode not in (EXACT, FLOAT):
        raise SolveError(f"unknown mode {mode!r}")
    exact = mode == EXACT
    tol = 0 if exact else FLOAT_FEAS_TOL
    start = time.perf_counter()

    if _dual_shaped(model):
        result = _solve_dualized(model, exact, tol)
        if result is not None:
            values = dict(zip(model.labels, result.x))
            return SolveReport(
                status="optimal",
                objective=result.objective,
                values=values,
                mode=mode,
                pivots=result.pivots,
                wall_time=time.perf_counter() - start,
                strategy="dualized",
            )

    nv = model.n_vars
    zero = _coerce(0, exact)
    slack_count = sum(1 for c in model.constraints if c.rel != "=")
    total = nv + slack_count
    rows = []
    rhs = []
    seeds: list[int | None] = []
    slack_at = nv
    for con in model.constraints:
        row = [zero] * total
        for j, coef in con.coeffs.items():
            row[j] = _coerce(coef, exact)
        r = _coerce(con.rhs, exact)
        seed = None
        if con.rel == ">=":
            row[slack_at] = -(_coerce(1, exact))
            slack_col = slack_at
            slack_at += 1
        elif con.rel == "<=":
            row[slack_at] = _coerce(1, exact)
            slack_col = slack_at
            slack_at += 1
        elif con.rel == "=":
            slack_col = None
        else:
            raise SolveError(f"unknown relation {con.rel!r}")
        if r < 0:
            row = [-v for v in row]
            r = -r
        if slack_col is not None and row[slack_col] == 1 and r >= 0:
            seed = slack_col
        rows.append(row)
        rhs.append(r)
        seeds.append(seed)

    sense_flip = -1 if model.sense == "max" else 1
    c = [sense_flip * _coerce(v, exact) for v in model.objective] + [zero] * slack_count
    result = simplex.simplex_min(rows, rhs, c, basis_seed=seeds, tol=tol)
    elapsed = time.perf_counter() - start
    if result.status != simplex.OPTIMAL:
        return SolveReport(result.status, None, None, mode, result.pivots,
                           elapsed, "two-phase")
    values = dict(zip(model.labels, result.x[:nv]))
    objective = sum(
        (ci * xi for ci, xi in zip(model.objective, result.x[:nv])), zero
    )
    return SolveReport("optimal", objective, values, mode, result.pivots,
                       elapsed, "two-phase")


@dataclass
class PrimalSolution:
    """Coset-reduced mu values with their expansion lambda = mu / weight."""

    n: int
    mu: dict
    lam: dict
    objective: object
    codes: tuple = ()

    def lam_at(self, code: ParityCode, i: int):
        return self.lam.get((code, i), 0)

    def mu_at(self, code: ParityCode, s: int):
        return self.mu.get((code, s), 0)

    @classmethod
    def from_lp_values(cls, profile: AmplitudeProfile, values: dict,
                       objective) -> PrimalSolution:
        exact = _is_exact(values.values()) and profile.rational
        codes = tuple(enumerate_all_codes(profile.n))
        mu: dict = {}
        lam: dict = {}
        for label, v in values.items():
            _, code, s = label
            mu[(code, s)] = v
            for i in code.cosets.members_of(s):
                w = profile.weight_exact(i) if exact else profile.weights_float[i]
                lam[(code, i)] = v / w
        bottom = codes[0]
        one = _coerce(1, exact)
        for i in profile.zero_set:
            # Absorb unconstrained indices into the no-information outcome.
            lam[(bottom, i)] = one
            mu[(bottom, i)] = _coerce(0, exact)
        return cls(profile.n, mu, lam, objective, codes)

    def to_json_dict(self) -> dict:
        def render(v):
            return str(v) if isinstance(v, Fraction) else v

        return {
            "objective": render(self.objective),
            "mu": {
                f"{code.label()},s={s}": render(v)
                for (code, s), v in sorted(
                    self.mu.items(), key=lambda kv: (kv[0][0].k, kv[0][0].H.rows, kv[0][1])
                )
            },
        }


@dataclass
class DualSolution:
    """Per-index dual values b_i with an optional cached objective."""

    n: int
    b: dict
    objective: object | None = None
    family: str | None = None
    params: dict = field(default_factory=dict)

    def b_at(self, i: int):
        return self.b.get(i, 0)

    def evaluate(self, profile: AmplitudeProfile):
        exact = profile.rational and _is_exact(self.b.values())
        zero = _coerce(0, exact)
        total = zero
        for i in all_vectors(self.n):
            w = profile.weight_exact(i) if exact else profile.weights_float[i]
            total = total + _coerce(self.b_at(i), exact) * w
        return total

    def to_json_dict(self) -> dict:
        def render(v):
            return str(v) if isinstance(v, Fraction) else v

        out = {
            "b": {vec_str(i, self.n): render(self.b_at(i)) for i in all_vectors(self.n)},
            "objective": render(self.objective),
        }
        if self.family:
            out["family"] = self.family
            out["params"] = {k: render(v) for k, v in self.params.items()}
        return out


def solve_primal(profile: AmplitudeProfile, cost: CostFunction,
                 mode: str = EXACT) -> tuple[PrimalSolution, SolveReport]:
    report = solve(build_primal(profile, cost), mode)
    if report.status != "optimal":
        raise SolveError(f"primal solve ended with status {report.status}")
    sol = PrimalSolution.from_lp_values(profile, report.values, report.objective)
    return sol, report


def solve_dual(profile: AmplitudeProfile, cost: CostFunction,
               mode: str = EXACT) -> tuple[DualSolution, SolveReport]:
    report = solve(build_dual(profile, cost), mode)
    if report.status != "optimal":
        raise SolveError(f"dual solve ended with status {report.status}")
    b = {label[1]: v for label, v in report.values.items()}
    sol = DualSolution(profile.n, b, objective=report.objective)
    return sol, report


@dataclass
class FeasibilityReport:
    feasible: bool
    violations: list
    max_violation: object
    n_checked: int
    slacks: dict | None = None

    def to_json_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "n_checked": self.n_checked,
            "max_violation": float(self.max_violation),
            "violations": self.violations[:50],
        }


def _default_tol(exact: bool, tol):
    if tol is not None:
        return tol
    return 0 if exact else FLOAT_FEAS_TOL


def check_primal_feasible(sol: PrimalSolution, profile: AmplitudeProfile,
                          tol=None) -> FeasibilityReport:
    """Audit nonnegativity, the per-index normalization, and coset constancy."""
    exact = profile.rational and _is_exact(sol.lam.values())
    tol = _default_tol(exact, tol)
    violations = []
    max_v = 0
    checked = 0

    for (code, i), v in sol.lam.items():
        checked += 1
        if v < -tol:
            violations.append(
                {"constraint": f"lambda[{code.label()},{vec_str(i, sol.n)}] >= 0",
                 "violation": float(-v)}
            )
            max_v = max(max_v, -v)

    codes = sol.codes or tuple(enumerate_all_codes(sol.n))
    for i in profile.support:
        total = sum(sol.lam_at(code, i) for code in codes)
        gap = abs(total - 1)
        checked += 1
        if gap > tol:
            violations.append(
                {"constraint": f"sum_codes lambda[{vec_str(i, sol.n)}] = 1",
                 "violation": float(gap)}
            )
            max_v = max(max_v, gap)

    for code in codes:
        cos = code.cosets
        for s in range(cos.n_syndromes):
            products = []
            for i in cos.members_of(s):
                w = profile.weight_exact(i) if exact else profile.weights_float[i]
                products.append(sol.lam_at(code, i) * w)
            checked += 1
            spread = max(products) - min(products)
            if spread > tol:
                violations.append(
                    {"constraint": f"lambda*w constant on {code.label()},s={s}",
                     "violation": float(spread)}
                )
                max_v = max(max_v, spread)

    return FeasibilityReport(not violations, violations, max_v, checked)


def check_dual_feasible(sol: DualSolution, cost: CostFunction,
                        tol=None) -> FeasibilityReport:
    """Exhaustively audit every (code, syndrome) covering constraint."""
    exact = _is_exact(sol.b.values()) and _is_exact(cost.values)
    tol = _default_tol(exact, tol)
    violations = []
    slacks: dict = {}
    max_v = 0
    checked = 0

    for i in all_vectors(sol.n):
        checked += 1
        if sol.b_at(i) < -tol:
            violations.append(
                {"constraint": f"b[{vec_str(i, sol.n)}] >= 0",
                 "violation": float(-sol.b_at(i))}
            )
            max_v = max(max_v, -sol.b_at(i))

    for code in enumerate_all_codes(sol.n):
        cos = code.cosets
        rhs = cost.value(code.k) * (1 << code.k)
        for s in range(cos.n_syndromes):
            total = sum(sol.b_at(i) for i in cos.members_of(s))
            slack = total - rhs
            slacks[(code, s)] = slack
            checked += 1
            if slack < -tol:
                violations.append(
                    {"constraint": f"coset sum {code.label()},s={s} >= {rhs}",
                     "violation": float(-slack)}
                )
                max_v = max(max_v, -slack)

    return FeasibilityReport(not violations, violations, max_v, checked, slacks)


@dataclass
class SlacknessReport:
    certified: bool
    primal_feasible: bool
    dual_feasible: bool
    max_index_product: object
    max_coset_product: object
    primal_objective: object
    dual_objective: object
    violations: list

    def to_json_dict(self) -> dict:
        def render(v):
            return str(v) if isinstance(v, Fraction) else v

        return {
            "certified_optimal": self.certified,
            "primal_feasible": self.primal_feasible,
            "dual_feasible": self.dual_feasible,
            "max_index_product": float(self.max_index_product),
            "max_coset_product": float(self.max_coset_product),
            "primal_objective": render(self.primal_objective),
            "dual_objective": render(self.dual_objective),
            "violations": self.violations[:50],
        }


def complementary_slackness(primal: PrimalSolution, dual: DualSolution,
                            profile: AmplitudeProfile, cost: CostFunction,
                            tol=None) -> SlacknessReport:
    """Check the two product families and certify joint optimality.

    Products (sum_H lambda_i - 1) * b_i and mu[(code, s)] * constraint slack
    must all vanish; together with feasibility of both solutions this proves
    the pair optimal and the objectives equal.
    """
    exact = (profile.rational and _is_exact(primal.lam.values())
             and _is_exact(dual.b.values()))
    tol = _default_tol(exact, tol)
    p_report = check_primal_feasible(primal, profile, tol)
    d_report = check_dual_feasible(dual, cost, tol)

    violations = []
    codes = primal.codes or tuple(enumerate_all_codes(primal.n))
    max_index = 0
    for i in all_vectors(primal.n):
        total = sum(primal.lam_at(code, i) for code in codes)
        product = (total - 1) * dual.b_at(i)
        if abs(product) > tol:
            violations.append(
                {"product": f"index {vec_str(i, primal.n)}",
                 "value": float(product)}
            )
        max_index = max(max_index, abs(product))

    max_coset = 0
    for (code, s), slack in (d_report.slacks or {}).items():
        product = primal.mu_at(code, s) * slack
        if abs(product) > tol:
            violations.append(
                {"product": f"coset {code.label()},s={s}", "value": float(product)}
            )
        max_coset = max(max_coset, abs(product))

    p_obj = _objective_of(primal, profile, cost, exact)
    d_obj = dual.evaluate(profile)
    certified = (p_report.feasible and d_report.feasible and not violations
                 and abs(p_obj - d_obj) <= tol)
    return SlacknessReport(certified, p_report.feasible, d_report.feasible,
                           max_index, max_coset, p_obj, d_obj, violations)


def _objective_of(primal: PrimalSolution, profile: AmplitudeProfile,
                  cost: CostFunction, exact: bool):
    total = _coerce(0, exact)
    for (code, s), v in primal.mu.items():
        ck = _coerce(cost.value(code.k), exact)
        total = total + ck * (1 << code.k) * _coerce(v, exact)
    return total
