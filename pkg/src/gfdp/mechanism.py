"""Differentially private streaming release of weighted running sums.

The release at step t is a_t = (M x)_t + (L z)_t where M = L R is a
factorization of the workload and z is i.i.d. Gaussian with standard
deviation sigma * colnorm(R).  Correlating the noise through L is what
buys the factorization norm instead of the raw workload norm.

With a triangular L the t-th noise coordinate only touches z_0..z_t, so
z can be extended lazily as the stream arrives; that keeps the privacy
argument valid even when inputs are chosen adaptively against earlier
outputs.  A non-triangular (pattern-derived) L needs the whole z drawn
up front, which is only safe for streams fixed in advance; states carry
an adaptive_safe flag so callers can tell the two apart.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import factorizer, weights
from .errors import ParameterError, StateError

SIGMA_VARIANTS = ("classic", "tight")


@dataclass(frozen=True)
class PrivacyParams:
    """(epsilon, delta) target with per-item clip bound."""

    epsilon: float
    delta: float
    clip: float = 1.0
    sigma_variant: str = "classic"

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise ParameterError("epsilon must be positive and finite")
        if not 0 < self.delta < 1:
            raise ParameterError("delta must lie in (0, 1)")
        if not (math.isfinite(self.clip) and self.clip > 0):
            raise ParameterError("clip bound must be positive and finite")
        if self.sigma_variant not in SIGMA_VARIANTS:
            raise ParameterError(
                f"sigma_variant must be one of {SIGMA_VARIANTS}, got {self.sigma_variant!r}"
            )


def sigma(params: PrivacyParams) -> float:
    """Gaussian multiplier per unit of encoder sensitivity.

    "classic" is the textbook (2 Delta / eps) sqrt(ln(1.25/delta)).
    "tight" uses (2 Delta / eps) sqrt(4/9 + ln(sqrt(2/pi)/delta)); its
    additive constant 4/9 - ln sqrt(pi/2) = 0.2186 undercuts the classic
    ln 1.25 = 0.2231, so it is smaller for every delta.
    """
    two_delta = 2.0 * params.clip
    if params.sigma_variant == "classic":
        return two_delta / params.epsilon * math.sqrt(math.log(1.25 / params.delta))
    return two_delta / params.epsilon * math.sqrt(
        4.0 / 9.0 + math.log(math.sqrt(2.0 / math.pi) / params.delta)
    )


class StreamState:
    """Mutable per-stream state: call step(x_t) exactly n times.

    Attributes of interest after stepping: outputs (noised sums),
    true_sums (exact sums of the clipped inputs), clipped (count of
    inputs that hit the clip bound), adaptive_safe.
    """

    def __init__(self, fact, params: PrivacyParams, seed, noise_scale: float | None = None):
        if isinstance(fact, factorizer.PatternFactorization):
            raise ParameterError(
                "pattern factorizations are complex; realify before streaming"
            )
        if not isinstance(fact, (factorizer.RealFactorization, factorizer.TriangularFactorization)):
            raise ParameterError(f"unsupported factorization type {type(fact).__name__}")
        self.factorization = fact
        self.params = params
        self.n = fact.n
        self.coeffs = np.asarray(fact.coeffs, dtype=float)
        self.left = fact.left_matrix()
        self.adaptive_safe = isinstance(fact, factorizer.TriangularFactorization)
        scale = sigma(params) if noise_scale is None else float(noise_scale)
        if scale < 0 or not math.isfinite(scale):
            raise ParameterError("noise scale must be finite and non-negative")
        self.noise_std = scale * fact.sensitivity()
        self.rng = np.random.default_rng(seed)
        self.t = 0
        self.clipped = 0
        self.xs = np.zeros(self.n)
        self.outputs: list[float] = []
        self.true_sums: list[float] = []
        if self.adaptive_safe:
            self.z = np.zeros(self.left.shape[1])  # filled lazily, one entry per step
        else:
            self.z = self.rng.standard_normal(self.left.shape[1]) * self.noise_std

    def step(self, x_t) -> float:
        if self.t >= self.n:
            raise StateError(f"stream exhausted after {self.n} steps")
        x = float(x_t)
        if not math.isfinite(x):
            raise ParameterError("stream values must be finite")
        clip = self.params.clip
        xc = min(max(x, -clip), clip)
        if xc != x:
            self.clipped += 1
        t = self.t
        self.xs[t] = xc
        true = float(np.dot(self.coeffs[t::-1], self.xs[: t + 1]))
        if self.adaptive_safe:
            self.z[t] = self.rng.standard_normal() * self.noise_std
            noise = float(np.dot(self.left[t, : t + 1], self.z[: t + 1]))
        else:
            noise = float(np.dot(self.left[t], self.z))
        self.t += 1
        out = true + noise
        self.true_sums.append(true)
        self.outputs.append(out)
        return out


def init(fact, params: PrivacyParams, seed, noise_scale: float | None = None) -> StreamState:
    """Fresh stream state; noise_scale overrides sigma(params), the main
    use being noise_scale=0 to check the noiseless path end to end."""
    return StreamState(fact, params, seed, noise_scale=noise_scale)


def step(state: StreamState, x_t) -> float:
    """Functional alias for StreamState.step."""
    return state.step(x_t)


def run(
    spec: weights.WeightSpec,
    params: PrivacyParams,
    x,
    seed,
    mode: str = "triangular",
    noise_scale: float | None = None,
) -> np.ndarray:
    """Factorize, stream the whole input, return the n outputs."""
    if mode == "triangular":
        fact = factorizer.factorize(spec, mode="triangular")
    elif mode in ("real", "pattern"):
        fact = factorizer.factorize(spec, mode="real")
    else:
        raise ParameterError(f"unknown mode {mode!r}")
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size != fact.n:
        raise ParameterError(
            f"stream length {x.size} does not match factorization n={fact.n}"
        )
    state = init(fact, params, seed, noise_scale=noise_scale)
    for v in x:
        state.step(v)
    return np.asarray(state.outputs)
