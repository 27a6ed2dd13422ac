"""Shared helpers: random rational profiles and independent brute-force oracles."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from paritylp.f2lin import F2Matrix, all_vectors, hamming_weight
from paritylp.lp import Constraint, LpModel
from paritylp.profiles import AmplitudeProfile


def rand_rational_profile(n: int, rng: random.Random, *, max_num: int = 30,
                          full_support: bool = True) -> AmplitudeProfile:
    low = 1 if full_support else 0
    while True:
        nums = [rng.randint(low, max_num) for _ in range(1 << n)]
        if sum(nums) > 0:
            break
    total = sum(nums)
    return AmplitudeProfile.from_weights(
        n, [Fraction(v, total) for v in nums]
    )


def brute_rank(m: F2Matrix) -> int:
    """Rank via the size of the row span; independent of elimination code."""
    span = {0}
    for bits in range(1 << m.n_rows):
        v = 0
        for j in range(m.n_rows):
            if (bits >> j) & 1:
                v ^= m.rows[j]
        span.add(v)
    return len(span).bit_length() - 1


def brute_row_spaces(n: int, k: int) -> set[frozenset]:
    """All k-dimensional row spaces from scanning every k x n matrix."""
    spaces: set[frozenset] = set()
    for rows in itertools.product(range(1 << n), repeat=k):
        m = F2Matrix(n, tuple(rows))
        if brute_rank(m) == k:
            spaces.add(frozenset(m.row_space()))
    return spaces


def full_rank_matrices(n: int, k: int) -> list[F2Matrix]:
    """Every full-rank k x n matrix, duplicates across row spaces included."""
    out = []
    for rows in itertools.product(range(1 << n), repeat=k):
        m = F2Matrix(n, tuple(rows))
        if brute_rank(m) == k:
            out.append(m)
    return out


def literal_lp_model(profile: AmplitudeProfile, cost, matrices) -> LpModel:
    """The per-index formulation with explicit coset-constancy equalities.

    One variable per (matrix, index).  Used as an oracle against the
    coset-reduced builder: matrices may repeat row spaces, which must not
    change the optimum.
    """
    from paritylp.f2lin import kernel_generator

    n = profile.n
    exact = profile.rational
    labels = []
    objective = []
    for mi, m in enumerate(matrices):
        ck = cost.value(m.n_rows)
        for i in all_vectors(n):
            labels.append(("lam", mi, i))
            w = profile.weight_exact(i) if exact else profile.weights_float[i]
            objective.append(ck * w)
    index = {lab: j for j, lab in enumerate(labels)}
    one = Fraction(1) if exact else 1.0

    constraints = []
    for i in profile.support:
        coeffs = {index[("lam", mi, i)]: one for mi in range(len(matrices))}
        constraints.append(Constraint(coeffs, "=", one, tag=("index", i)))
    for mi, m in enumerate(matrices):
        gen = kernel_generator(m)
        cosets: dict[int, list[int]] = {}
        for x in all_vectors(n):
            cosets.setdefault(gen.mul_vec(x), []).append(x)
        for members in cosets.values():
            for a, b in zip(members, members[1:]):
                wa = profile.weight_exact(a) if exact else profile.weights_float[a]
                wb = profile.weight_exact(b) if exact else profile.weights_float[b]
                coeffs = {index[("lam", mi, a)]: wa, index[("lam", mi, b)]: -wb}
                constraints.append(
                    Constraint(coeffs, "=", Fraction(0) if exact else 0.0)
                )
    return LpModel("literal", "max", labels, objective, constraints)


def ball_profile(n: int, d: int, rng: random.Random) -> AmplitudeProfile:
    """Random rational profile supported exactly on the radius-d ball."""
    idx = [i for i in all_vectors(n) if hamming_weight(i) <= d]
    nums = {i: rng.randint(1, 20) for i in idx}
    total = sum(nums.values())
    weights = [Fraction(nums.get(i, 0), total) for i in all_vectors(n)]
    return AmplitudeProfile.from_weights(n, weights)


def point_mass_profile(n: int, at: int) -> AmplitudeProfile:
    weights = [Fraction(1) if i == at else Fraction(0) for i in all_vectors(n)]
    return AmplitudeProfile.from_weights(n, weights)
