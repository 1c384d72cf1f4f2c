"""Weight-function catalog and workload construction.

A weight spec pairs a named family (or a raw table) with a stream horizon
n.  The induced workload is the lower-triangular Toeplitz matrix with
entries f(i - j): row t of the matrix computes the weighted running sum
sum_{i <= t} f(t - i) x_i.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import CapacityError, ParameterError

FAMILIES = ("counting", "sliding", "striped", "expdecay", "polydecay", "table")

# Dense n x n materialization above this size is almost certainly a mistake.
DENSE_CAP = 16384


@dataclass(frozen=True)
class WeightSpec:
    """A weight function together with the stream horizon n."""

    family: str
    n: int
    window: int | None = None  # sliding only
    stripe: int | None = None  # striped only
    alpha: float | None = None  # expdecay / polydecay only
    values: tuple[float, ...] | None = None  # table only

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown weight family {self.family!r}")
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise ParameterError("horizon n must be a positive integer")
        if self.family == "sliding":
            if self.window is None or not isinstance(self.window, int):
                raise ParameterError("sliding weights need an integer window")
            if not 1 <= self.window <= self.n:
                raise ParameterError(
                    f"window must satisfy 1 <= W <= n, got W={self.window} n={self.n}"
                )
        if self.family == "striped":
            if self.stripe is None or not isinstance(self.stripe, int):
                raise ParameterError("striped weights need an integer stripe")
            if not 1 <= self.stripe <= self.n:
                raise ParameterError(
                    f"stripe must satisfy 1 <= b <= n, got b={self.stripe} n={self.n}"
                )
        if self.family == "expdecay":
            if self.alpha is None or not 0.0 < self.alpha <= 1.0:
                raise ParameterError("expdecay needs alpha in (0, 1]")
        if self.family == "polydecay":
            if self.alpha is None or not self.alpha > 0.0:
                raise ParameterError("polydecay needs alpha > 0")
        if self.family == "table":
            if not self.values:
                raise ParameterError("table weights need at least one value")
            if not all(np.isfinite(v) for v in self.values):
                raise ParameterError("table weights must be finite")

    @property
    def label(self) -> str:
        """Short stable identifier used in reports and CSV output."""
        if self.family == "sliding":
            return f"sliding-w{self.window}"
        if self.family == "striped":
            return f"striped-b{self.stripe}"
        if self.family in ("expdecay", "polydecay"):
            return f"{self.family}-{self.alpha:g}"
        return self.family


def counting(n: int) -> WeightSpec:
    """f(k) = 1 for all k: plain running counts."""
    return WeightSpec("counting", n)


def sliding(window: int, n: int) -> WeightSpec:
    """f(k) = 1 for k < W, else 0: sums over the last W items."""
    return WeightSpec("sliding", n, window=window)


def striped(stripe: int, n: int) -> WeightSpec:
    """f(k) = 1 when b divides k, else 0."""
    return WeightSpec("striped", n, stripe=stripe)


def expdecay(alpha: float, n: int) -> WeightSpec:
    """f(k) = alpha^k with 0 < alpha <= 1."""
    return WeightSpec("expdecay", n, alpha=alpha)


def polydecay(alpha: float, n: int) -> WeightSpec:
    """f(k) = (k + 1)^(-alpha) with alpha > 0."""
    return WeightSpec("polydecay", n, alpha=alpha)


def table(values, n: int | None = None) -> WeightSpec:
    """Arbitrary finite weights, zero-padded or truncated to length n."""
    vals = tuple(float(v) for v in values)
    return WeightSpec("table", len(vals) if n is None else n, values=vals)


def coefficients(spec: WeightSpec) -> np.ndarray:
    """Return the weight vector f(0), ..., f(n-1) as a float array."""
    k = np.arange(spec.n)
    if spec.family == "counting":
        return np.ones(spec.n)
    if spec.family == "sliding":
        return (k < spec.window).astype(float)
    if spec.family == "striped":
        return (k % spec.stripe == 0).astype(float)
    if spec.family == "expdecay":
        return spec.alpha ** k.astype(float)
    if spec.family == "polydecay":
        return (k + 1.0) ** (-spec.alpha)
    out = np.zeros(spec.n)
    given = np.asarray(spec.values, dtype=float)[: spec.n]
    out[: given.size] = given
    return out


def has_negative_weights(spec: WeightSpec) -> bool:
    return bool((coefficients(spec) < 0).any())


def effective_spec(spec: WeightSpec) -> WeightSpec:
    """Round striped horizons up to a multiple of the stripe.

    The striped workload only matches a block structure when b divides n,
    so the factorization pipeline operates on the rounded horizon and the
    caller takes the leading n x n corner.  All other families pass
    through unchanged.
    """
    if spec.family == "striped" and spec.n % spec.stripe:
        rounded = spec.n + spec.stripe - spec.n % spec.stripe
        return replace(spec, n=rounded)
    return spec


@dataclass
class Workload:
    n: int
    entries: np.ndarray


def build_matrix(spec: WeightSpec, cap: int = DENSE_CAP) -> Workload:
    """Materialize the n x n lower-triangular Toeplitz workload."""
    if spec.n > cap:
        raise CapacityError(f"n={spec.n} exceeds dense cap {cap}")
    f = coefficients(spec)
    d = np.subtract.outer(np.arange(spec.n), np.arange(spec.n))
    entries = np.where(d >= 0, f[np.clip(d, 0, spec.n - 1)], 0.0)
    return Workload(n=spec.n, entries=entries)


def load_table(path) -> list[float]:
    """Read one weight per line; an optional leading `f` header is skipped."""
    vals = []
    with open(path) as fh:
        for i, line in enumerate(fh):
            s = line.strip()
            if not s:
                continue
            if i == 0 and s.lower() == "f":
                continue
            try:
                vals.append(float(s))
            except ValueError as exc:
                raise ParameterError(f"bad weight on line {i + 1} of {path}: {s!r}") from exc
    if not vals:
        raise ParameterError(f"no weights found in {path}")
    return vals


def save_matrix(workload: Workload, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"n={workload.n}\n")
        for row in workload.entries:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def load_matrix(path) -> Workload:
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("n="):
            raise ParameterError(f"{path}: missing n= header")
        try:
            n = int(header[2:])
        except ValueError as exc:
            raise ParameterError(f"{path}: bad n= header {header!r}") from exc
        rows = []
        for line in fh:
            s = line.strip()
            if s:
                rows.append([float(v) for v in s.split(",")])
    entries = np.asarray(rows, dtype=float)
    if entries.shape != (n, n):
        raise ParameterError(f"{path}: expected {n}x{n} entries, got {entries.shape}")
    return Workload(n=n, entries=entries)
