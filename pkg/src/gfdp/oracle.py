"""Self-contained correctness checks by direct summation.

Everything in this module recomputes quantities from their definitions
with explicit O(n^2) sums and materialized matrices, sharing no
transform code with the fast path.  It exists so the FFT-based pipeline
has something independent to disagree with.
"""

import numpy as np

from . import factorizer, polyeval, weights
from .errors import ParameterError

# Direct summation is quadratic; keep the suite bounded.
SUITE_CAP = 512


def naive_eval(f, n: int | None = None) -> np.ndarray:
    """m by definition: m[l] = sum_k f(k) exp(i pi k l / n)."""
    f = np.asarray(f, dtype=float)
    if n is None:
        n = f.size
    if f.size > n:
        raise ParameterError("weight vector longer than horizon")
    l = np.arange(2 * n)
    k = np.arange(f.size)
    return np.exp(1j * np.pi * np.outer(l, k) / n) @ f


def naive_b(zeta) -> np.ndarray:
    """b by definition: b[l] = (1/2n) sum_j zeta[j] exp(i pi j l / n)."""
    zeta = np.asarray(zeta, dtype=complex)
    n2 = zeta.size
    if n2 % 2:
        raise ParameterError("zeta must have even length 2n")
    n = n2 // 2
    j = np.arange(n2)
    l = np.arange(n2)
    return (np.exp(1j * np.pi * np.outer(l, j) / n) @ zeta) / n2


def verify_window(profile: polyeval.RootsProfile) -> float:
    """Worst interpolation error of a_f over all exponents in [-n, 2n-1].

    a_f(w^{-d}) must equal f(d) on 0 <= d < n and vanish elsewhere; the
    evaluation here is a direct sum over the 2n roots.
    """
    n = profile.n
    m = np.asarray(profile.m_vals, dtype=complex)
    d = np.arange(-n, 2 * n)
    l = np.arange(2 * n)
    vals = np.exp(-1j * np.pi * np.outer(d, l) / n) @ m / (2 * n)
    want = np.zeros(3 * n, dtype=complex)
    want[n : 2 * n] = profile.coeffs
    return float(np.abs(vals - want).max())


def verify_chalkley(profile: polyeval.RootsProfile, n: int | None = None) -> float:
    """Coefficientwise check of the group-convolution identity

        sum_k b_f(w^k) b_f(w^{-k} x) = a_f(x),

    where b_f has coefficients zeta_l / 2n (so its root values are
    b_vals) and a_f has coefficients m_l / 2n.  Coefficient l of the
    left side is (zeta_l / 2n) sum_k b_f(w^k) w^{-k l}, computed here
    by direct summation.
    """
    if n is not None and n != profile.n:
        raise ParameterError(f"profile has n={profile.n}, not {n}")
    n = profile.n
    n2 = 2 * n
    k = np.arange(n2)
    l = np.arange(n2)
    phases = np.exp(-1j * np.pi * np.outer(l, k) / n)
    left = profile.zeta * (phases @ profile.b_vals) / n2
    right = profile.m_vals / n2
    return float(np.abs(left - right).max())


def verify_reconstruction(fact, workload: weights.Workload) -> float:
    """max |(L R - M)_{ij}| with the factors fully materialized."""
    left = np.asarray(fact.left_matrix())
    right = np.asarray(fact.right_matrix())
    prod = left @ right
    n = workload.n
    if prod.shape[0] < n:
        raise ParameterError("factorization smaller than workload")
    # rounded striped horizons factor a larger matrix; compare the corner
    return float(np.abs(prod[:n, :n] - workload.entries).max())


def parseval_deviation(profile: polyeval.RootsProfile) -> float:
    """Relative gap between sum |b|^2 and (1/2n) sum |m|."""
    lhs = float((np.abs(profile.b_vals) ** 2).sum())
    rhs = float(np.abs(profile.m_vals).sum() / (2 * profile.n))
    scale = max(1.0, abs(rhs))
    return abs(lhs - rhs) / scale


def kron_striped_check(n: int, stripe: int) -> bool:
    """Striped workload == counting workload (n/b) tensor identity(b),
    entry for entry."""
    if n % stripe:
        raise ParameterError("stripe must divide n for the tensor identity")
    striped = weights.build_matrix(weights.striped(stripe, n)).entries
    blocks = weights.build_matrix(weights.counting(n // stripe)).entries
    return bool((striped == np.kron(blocks, np.eye(stripe))).all())


def verify_suite(n: int = 32, seed: int = 0, trials: int = 5) -> list[dict]:
    """Run the identity battery at horizon n; returns one row per check
    with keys name, deviation, tolerance, passed."""
    if n < 1 or n > SUITE_CAP:
        raise ParameterError(f"suite horizon must lie in [1, {SUITE_CAP}]")
    rng = np.random.default_rng(seed)
    rows: list[dict] = []

    def add(name, deviation, tolerance):
        rows.append(
            {
                "name": name,
                "deviation": float(deviation),
                "tolerance": float(tolerance),
                "passed": bool(deviation <= tolerance),
            }
        )

    specs = [
        weights.counting(n),
        weights.expdecay(0.9, n),
        weights.polydecay(1.0, n),
    ]
    if n >= 4:
        specs.append(weights.sliding(4, n))
        specs.append(weights.striped(2, n))
    for _ in range(trials):
        specs.append(weights.table(rng.uniform(0.0, 1.0, size=n)))

    for spec in specs:
        eff = weights.effective_spec(spec)
        f = weights.coefficients(eff)
        profile = polyeval.build_profile(f)
        scale = max(1.0, float(np.abs(f).max()))

        add(f"{spec.label}:transform", np.abs(profile.m_vals - naive_eval(f)).max(), 1e-8 * scale)
        add(f"{spec.label}:interp-window", verify_window(profile), 1e-8 * scale)
        add(f"{spec.label}:sqrt-convolution", verify_chalkley(profile), 1e-8 * scale)
        add(f"{spec.label}:parseval", parseval_deviation(profile), 1e-10)

        workload = weights.build_matrix(spec)
        pattern = factorizer.build_pattern(profile)
        add(
            f"{spec.label}:reconstruction-pattern",
            verify_reconstruction(pattern, workload),
            1e-8 * scale,
        )
        tri = factorizer.triangularize(factorizer.realify(pattern))
        add(
            f"{spec.label}:reconstruction-triangular",
            verify_reconstruction(tri, workload),
            1e-8 * scale,
        )
        upper = np.triu(tri.left_matrix()[:, : eff.n], k=1)
        add(f"{spec.label}:triangular-shape", np.abs(upper).max(), 0.0)

    if n >= 4 and n % 2 == 0:
        add("kron-striped", 0.0 if kron_striped_check(n, 2) else 1.0, 0.0)
    add("generator-sum-aligned", abs(polyeval.generator_sum(6, 3) - 3.0), 1e-9)
    add("generator-sum-offset", abs(polyeval.generator_sum(7, 3)), 1e-9)
    return rows
