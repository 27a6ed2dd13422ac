"""Amplitude profiles of shift-symmetric state families and cost functions.

A profile holds the Fourier-side data of the reference state: squared
weights |a_i|^2 indexed by integer encoding, optionally with the complex
amplitudes themselves.  Weights given as fractions (or fraction strings)
put the profile in rational mode, where normalization is exact; everything
else lives in binary64 with a 1e-12 validation tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Rational

from .errors import ProfileError
from .f2lin import all_vectors, hamming_weight

FLOAT_TOL = 1e-12


def _as_exact(value) -> Fraction:
    """Exact Fraction view of a weight (floats convert losslessly)."""
    if isinstance(value, Rational):
        return Fraction(value)
    return Fraction(float(value))


@dataclass(frozen=True)
class AmplitudeProfile:
    """Normalized weights (and optional amplitudes) over F_2^n."""

    n: int
    weights: tuple
    amplitudes: tuple | None = None

    def __post_init__(self) -> None:
        size = 1 << self.n
        if len(self.weights) != size:
            raise ProfileError(f"expected {size} weights, got {len(self.weights)}")
        if any(w < 0 for w in self.weights):
            raise ProfileError("weights must be nonnegative")
        if self.rational:
            if sum(self.weights, Fraction(0)) != 1:
                raise ProfileError("rational weights must sum to exactly 1")
        else:
            if abs(math.fsum(self.weights) - 1.0) > FLOAT_TOL:
                raise ProfileError("weights must sum to 1 within 1e-12")
        if self.amplitudes is not None:
            if len(self.amplitudes) != size:
                raise ProfileError("amplitude count does not match 2^n")
            for a, w in zip(self.amplitudes, self.weights):
                if abs(abs(a) ** 2 - float(w)) > FLOAT_TOL:
                    raise ProfileError("|amplitude|^2 inconsistent with weight")

    @property
    def rational(self) -> bool:
        return all(isinstance(w, Rational) for w in self.weights)

    @cached_property
    def full_support(self) -> bool:
        return all(w != 0 for w in self.weights)

    @cached_property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i in all_vectors(self.n) if self.weights[i] != 0)

    @cached_property
    def zero_set(self) -> tuple[int, ...]:
        return tuple(i for i in all_vectors(self.n) if self.weights[i] == 0)

    def weight_exact(self, i: int) -> Fraction:
        return _as_exact(self.weights[i])

    @cached_property
    def weights_float(self) -> tuple[float, ...]:
        return tuple(float(w) for w in self.weights)

    def require_amplitudes(self) -> tuple[complex, ...]:
        if self.amplitudes is None:
            raise ProfileError(
                "profile carries weights only; supply amplitudes or use "
                "with_real_amplitudes() to assume nonnegative real ones"
            )
        return self.amplitudes

    def with_real_amplitudes(self) -> AmplitudeProfile:
        """Copy with amplitudes sqrt(w_i), i.e. the nonnegative real choice."""
        if self.amplitudes is not None:
            return self
        amps = tuple(complex(math.sqrt(float(w)), 0.0) for w in self.weights)
        return AmplitudeProfile(self.n, self.weights, amps)

    @classmethod
    def from_weights(cls, n: int, values) -> AmplitudeProfile:
        """Build from weights; str/int/Fraction entries select rational mode."""
        parsed = []
        exact = True
        for v in values:
            if isinstance(v, str):
                parsed.append(Fraction(v))
            elif isinstance(v, Rational):
                parsed.append(Fraction(v))
            else:
                parsed.append(float(v))
                exact = False
        if not exact:
            parsed = [float(v) for v in parsed]
        return cls(n, tuple(parsed))

    @classmethod
    def from_amplitudes(cls, n: int, amps) -> AmplitudeProfile:
        amps = tuple(complex(a) for a in amps)
        weights = tuple(abs(a) ** 2 for a in amps)
        return cls(n, weights, amps)

    @classmethod
    def from_json_dict(cls, data: dict) -> AmplitudeProfile:
        try:
            n = int(data["n"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ProfileError("profile JSON needs an integer field 'n'") from exc
        if "amplitudes" in data:
            amps = [complex(a["re"], a.get("im", 0.0)) for a in data["amplitudes"]]
            return cls.from_amplitudes(n, amps)
        if "weights" in data:
            return cls.from_weights(n, data["weights"])
        raise ProfileError("profile JSON needs 'weights' or 'amplitudes'")

    def to_json_dict(self) -> dict:
        out: dict = {"n": self.n}
        if self.rational:
            out["weights"] = [str(Fraction(w)) for w in self.weights]
        else:
            out["weights"] = list(self.weights_float)
        if self.amplitudes is not None:
            out["amplitudes"] = [
                {"re": a.real, "im": a.imag} for a in self.amplitudes
            ]
        return out


@dataclass(frozen=True)
class CostFunction:
    """Score C(0..n) attached to learning k parities."""

    n: int
    values: tuple
    kind: str = "custom"
    tau: int | None = None

    def __post_init__(self) -> None:
        if len(self.values) != self.n + 1:
            raise ValueError(f"need {self.n + 1} cost values")
        if any(v < 0 for v in self.values):
            raise ValueError("cost values must be nonnegative")

    @classmethod
    def average(cls, n: int) -> CostFunction:
        return cls(n, tuple(range(n + 1)), kind="average")

    @classmethod
    def threshold(cls, n: int, tau: int) -> CostFunction:
        if not 1 <= tau <= n:
            raise ValueError("threshold requires 1 <= tau <= n")
        return cls(n, tuple(1 if k >= tau else 0 for k in range(n + 1)),
                   kind="threshold", tau=tau)

    @classmethod
    def custom(cls, n: int, values) -> CostFunction:
        return cls(n, tuple(values), kind="custom")

    def value(self, k: int):
        return self.values[k]

    def value_exact(self, k: int) -> Fraction:
        return _as_exact(self.values[k])

    @property
    def c_max(self):
        return max(self.values)

    @classmethod
    def from_json_dict(cls, n: int, data: dict) -> CostFunction:
        kind = data.get("kind", "average")
        if kind == "average":
            return cls.average(n)
        if kind == "threshold":
            return cls.threshold(n, int(data["tau"]))
        if kind == "custom":
            return cls.custom(n, [float(v) for v in data["values"]])
        raise ValueError(f"unknown cost kind {kind!r}")

    def to_json_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "threshold":
            out["tau"] = self.tau
        if self.kind == "custom":
            out["values"] = [float(v) for v in self.values]
        return out


@dataclass(frozen=True)
class BernoulliParams:
    """Error rate t in [0, 1/2] and its dual rate 1/2 - sqrt(t(1-t))."""

    t: float
    t_perp: float = field(init=False)

    def __post_init__(self) -> None:
        if not 0.0 <= self.t <= 0.5:
            raise ValueError("need 0 <= t <= 1/2")
        object.__setattr__(self, "t_perp", 0.5 - math.sqrt(self.t * (1.0 - self.t)))


def bernoulli_profile(n: int, t: float) -> AmplitudeProfile:
    """Dual-side profile of n-fold Bernoulli(t) noise.

    The weight of index i is q^|i| (1-q)^(n-|i|) with q the dual rate, and
    all amplitudes are real nonnegative (sqrt(1-t) - sqrt(t) >= 0 for
    t <= 1/2, so the single-bit dual amplitudes are already nonnegative).
    """
    q = BernoulliParams(t).t_perp
    weights = []
    amps = []
    for i in all_vectors(n):
        w = (q ** hamming_weight(i)) * ((1.0 - q) ** (n - hamming_weight(i)))
        weights.append(w)
        amps.append(complex(math.sqrt(w), 0.0))
    return AmplitudeProfile(n, tuple(weights), tuple(amps))


def perturb_full_support(p: AmplitudeProfile, delta) -> AmplitudeProfile:
    """Blend mass delta onto the zero-weight set, restoring full support.

    Weights become (1-delta) w_i off the zero set and delta/|T| on it; a
    profile that already has full support is returned unchanged.  Exact in
    rational mode when delta is rational.
    """
    if not 0 < delta <= 1:
        raise ValueError("need 0 < delta <= 1")
    zero = p.zero_set
    if not zero:
        return p
    t_size = len(zero)
    if p.rational and isinstance(delta, Rational):
        one_minus = Fraction(1) - Fraction(delta)
        fill = Fraction(delta) / t_size
        new_weights = tuple(
            fill if w == 0 else one_minus * w for w in p.weights
        )
    else:
        one_minus = 1.0 - float(delta)
        fill = float(delta) / t_size
        new_weights = tuple(
            fill if w == 0 else one_minus * float(w) for w in p.weights
        )
    new_amps = None
    if p.amplitudes is not None:
        scale = math.sqrt(1.0 - float(delta))
        lift = math.sqrt(float(delta) / t_size)
        new_amps = tuple(
            complex(lift, 0.0) if p.weights[i] == 0 else scale * p.amplitudes[i]
            for i in all_vectors(p.n)
        )
    return AmplitudeProfile(p.n, new_weights, new_amps)


def average_dual_weight(p: AmplitudeProfile):
    """Mean Hamming weight of the dual distribution, sum |i| w_i."""
    if p.rational:
        return sum(
            (hamming_weight(i) * p.weights[i] for i in all_vectors(p.n)),
            Fraction(0),
        )
    return math.fsum(hamming_weight(i) * p.weights[i] for i in all_vectors(p.n))


def tail_mass(p: AmplitudeProfile, d: int):
    """Total weight on indices of Hamming weight > d."""
    if not 0 <= d <= p.n:
        raise ValueError("need 0 <= d <= n")
    if p.rational:
        return sum(
            (p.weights[i] for i in all_vectors(p.n) if hamming_weight(i) > d),
            Fraction(0),
        )
    return math.fsum(
        p.weights[i] for i in all_vectors(p.n) if hamming_weight(i) > d
    )
