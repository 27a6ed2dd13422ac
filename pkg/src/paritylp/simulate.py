"""Measurement execution on a chosen hidden string.

Three mutually checking routes: the exact outcome law (the measured code
comes up with probability sum_i lambda_i w_i and always reports y = H.x),
a seeded ancestral sampler, and a state-vector oracle that materializes the
closed-form post-processing state and reads the distribution off its
register amplitudes.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import ProfileError
from .f2lin import ParityCode, dot, vec_str
from .lp import PrimalSolution
from .profiles import AmplitudeProfile

STATEVECTOR_MAX_N = 8
DISTRIBUTION_TOL = 1e-10
SAMPLE_CHUNK = 1 << 15


def exact_distribution(sol: PrimalSolution, profile: AmplitudeProfile,
                       x: int) -> dict:
    """Outcome law of the measurement run on the x-th family member.

    Each code H appears with probability sum_i lambda_i^H w_i, always paired
    with y = H.x; probabilities add to one through the normalization
    constraint.  Exact fractions are kept when both inputs are rational.
    """
    exact = profile.rational and all(
        isinstance(v, Rational) for v in sol.mu.values()
    )
    zero = Fraction(0) if exact else 0.0
    acc: dict[ParityCode, object] = {}
    for (code, s), v in sol.mu.items():
        value = v if exact else float(v)
        acc[code] = acc.get(code, zero) + (1 << code.k) * value
    bottom = ParityCode.bottom(profile.n)
    acc.setdefault(bottom, zero)
    dist = {}
    for code, p in acc.items():
        if p != 0 or code.k == 0:
            dist[(code, code.parity(x))] = p
    return dist


@dataclass(frozen=True)
class OutcomeRecord:
    code: ParityCode
    y: int
    count: int
    frequency: float

    def to_json_dict(self) -> dict:
        return {
            "H": self.code.label(),
            "k": self.code.k,
            "y": vec_str(self.y, self.code.k),
            "count": self.count,
            "frequency": self.frequency,
        }


def sample(sol: PrimalSolution, profile: AmplitudeProfile, x: int,
           shots: int, seed: int, chunk_size: int = SAMPLE_CHUNK) -> list[OutcomeRecord]:
    """Ancestral sampling: draw i from the weights, then a code from lambda_i.

    Shots are processed in fixed-size chunks whose generators come from
    spawned seed children, so the result is identical no matter how the
    chunks are scheduled.  Returns the aggregated histogram, deterministic
    given (solution, x, shots, seed).
    """
    if shots < 1:
        raise ValueError("need at least one shot")
    support = list(profile.support)
    weights = np.array([profile.weights_float[i] for i in support])
    weights = weights / weights.sum()
    codes = [c for c in sol.codes]
    lam = np.zeros((len(support), len(codes)))
    for row, i in enumerate(support):
        for col, code in enumerate(codes):
            lam[row, col] = float(sol.lam_at(code, i))
    row_sums = lam.sum(axis=1)
    if np.max(np.abs(row_sums - 1.0)) > 1e-9:
        raise ValueError("lambda rows must sum to 1 on the support")
    cum = np.cumsum(lam / row_sums[:, None], axis=1)

    n_chunks = (shots + chunk_size - 1) // chunk_size
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    counts: Counter = Counter()
    done = 0
    for child in children:
        take = min(chunk_size, shots - done)
        rng = np.random.default_rng(child)
        rows = rng.choice(len(support), size=take, p=weights)
        u = rng.random(take)
        picked = (cum[rows] < u[:, None]).sum(axis=1)
        picked = np.minimum(picked, len(codes) - 1)
        for col, c in zip(*np.unique(picked, return_counts=True)):
            counts[codes[int(col)]] += int(c)
        done += take

    records = []
    for code in codes:
        c = counts.get(code, 0)
        if c:
            records.append(OutcomeRecord(code, code.parity(x), c, c / shots))
    records.sort(key=lambda r: (r.code.k, r.code.H.rows, r.y))
    return records


@dataclass
class StatevectorReport:
    norm_deviation: float
    max_distribution_deviation: float
    wrong_outcome_mass: float
    n_amplitudes: int
    exact_match: bool | None

    @property
    def ok(self) -> bool:
        return (self.norm_deviation <= 1e-12
                and self.max_distribution_deviation <= DISTRIBUTION_TOL
                and self.wrong_outcome_mass == 0.0)

    def to_json_dict(self) -> dict:
        return {
            "norm_deviation": self.norm_deviation,
            "max_distribution_deviation": self.max_distribution_deviation,
            "wrong_outcome_mass": self.wrong_outcome_mass,
            "n_amplitudes": self.n_amplitudes,
            "exact_match": self.exact_match,
            "ok": self.ok,
        }


def statevector_check(sol: PrimalSolution, profile: AmplitudeProfile,
                      x: int) -> StatevectorReport:
    """Materialize the closed-form post-processing state and audit it.

    The state lives on registers (y, s, H) with amplitude
    (-1)^(x.v_s) sqrt(2^k mu[(code, s)]) at (H.x, s, H); weights-only
    profiles are accepted with the nonnegative-real amplitude convention.
    Verifies unit norm, that marginalizing s reproduces exact_distribution,
    and that the first register never disagrees with H.x.
    """
    if profile.n > STATEVECTOR_MAX_N:
        raise ValueError(f"state-vector oracle capped at n <= {STATEVECTOR_MAX_N}")
    if not profile.full_support:
        raise ProfileError("state-vector oracle requires full dual support")
    exact = profile.rational and all(
        isinstance(v, Rational) for v in sol.mu.values()
    )

    amplitudes: dict = {}
    probs: dict = {}
    zero = Fraction(0) if exact else 0.0
    for (code, s), v in sol.mu.items():
        if v == 0:
            continue
        y = code.parity(x)
        v_s = code.cosets.leader_min(s)
        amp = math.sqrt((1 << code.k) * float(v))
        if dot(x, v_s):
            amp = -amp
        amplitudes[(code, y, s)] = amp
        key = (code, y)
        probs[key] = probs.get(key, zero) + (1 << code.k) * (v if exact else float(v))

    norm_dev = abs(math.fsum(a * a for a in amplitudes.values()) - 1.0)

    dist = exact_distribution(sol, profile, x)
    keys = set(dist) | set(probs)
    max_dev = 0.0
    exact_match: bool | None = None
    if exact:
        exact_match = all(dist.get(k, 0) == probs.get(k, 0) for k in keys)
    for k in keys:
        max_dev = max(max_dev, abs(float(dist.get(k, 0)) - float(probs.get(k, 0))))

    wrong = math.fsum(
        a * a for (code, y, _), a in amplitudes.items() if y != code.parity(x)
    )
    return StatevectorReport(norm_dev, max_dev, wrong, len(amplitudes), exact_match)
