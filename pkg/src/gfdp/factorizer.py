"""Factorizations of the weighted running-sum workload.

Three stages, each preserving the product exactly:

  pattern     M = Lc Rc with Lc, Rc complex circulant slices built from
              the square-root coefficients b (implicit, O(n) storage)
  real        the same product over the reals, by splitting real and
              imaginary parts (skipped when b is already real)
  triangular  M = L R with L lower triangular, via a QR rotation of the
              real stage; this is the streaming-friendly form

The rotation leaves L's row norms equal to the real stage's row norms
and can only shrink the largest column norm of R, so every norm bound
proved for the pattern stage transfers.
"""

import struct
from dataclasses import dataclass

import numpy as np

from . import polyeval, weights
from .errors import CapacityError, NumericError, ParameterError

# Dense triangularization above this size means an n x 4n QR; refuse it.
TRIANGULAR_CAP = 8192

_BINARY_MAGIC = b"GFDP"
_BINARY_VERSION = 1


def _pnorm_rows(rows_sq: np.ndarray, p) -> float:
    """(sum_i rows_sq[i]^{p/2})^{1/p}, with the max-row limit at p = inf."""
    if p == np.inf:
        return float(np.sqrt(rows_sq.max()))
    return float((rows_sq ** (p / 2.0)).sum() ** (1.0 / p))


def _check_p(p):
    if p != np.inf and not p >= 2:
        raise ParameterError(f"p must be in [2, inf], got {p}")


@dataclass
class PatternFactorization:
    """Implicit complex factorization; materialize only on demand."""

    n: int
    coeffs: np.ndarray
    b_vals: np.ndarray  # length 2n

    def left_matrix(self, cap: int = TRIANGULAR_CAP) -> np.ndarray:
        if self.n > cap:
            raise CapacityError(f"n={self.n} exceeds materialization cap {cap}")
        i = np.arange(self.n)[:, None]
        j = np.arange(2 * self.n)[None, :]
        return self.b_vals[(j - i) % (2 * self.n)]

    def right_matrix(self, cap: int = TRIANGULAR_CAP) -> np.ndarray:
        if self.n > cap:
            raise CapacityError(f"n={self.n} exceeds materialization cap {cap}")
        j = np.arange(2 * self.n)[:, None]
        k = np.arange(self.n)[None, :]
        return self.b_vals[(k - j) % (2 * self.n)]

    def row_norm_sq(self) -> float:
        """Common squared norm of every row of Lc and every column of Rc."""
        return float((np.abs(self.b_vals) ** 2).sum())

    def sensitivity(self) -> float:
        return float(np.sqrt(self.row_norm_sq()))

    def trace_p(self, p) -> float:
        _check_p(p)
        s = self.row_norm_sq()
        if p == np.inf:
            return float(np.sqrt(s))
        return float(self.n ** (1.0 / p) * np.sqrt(s))

    def achieved(self, p) -> float:
        """trace_p(Lc) * max column norm of Rc; all rows and columns share
        one norm, so this collapses to a closed form."""
        return self.trace_p(p) * self.sensitivity()


@dataclass
class RealFactorization:
    n: int
    coeffs: np.ndarray
    left: np.ndarray  # n x w
    right: np.ndarray  # w x n
    variant: str  # "thin" (w = 2n) or "full" (w = 4n)

    def left_matrix(self) -> np.ndarray:
        return self.left

    def right_matrix(self) -> np.ndarray:
        return self.right

    def sensitivity(self) -> float:
        return float(np.sqrt((self.right * self.right).sum(axis=0).max()))

    def trace_p(self, p) -> float:
        _check_p(p)
        return _pnorm_rows((self.left * self.left).sum(axis=1), p)

    def achieved(self, p) -> float:
        return self.trace_p(p) * self.sensitivity()


@dataclass
class TriangularFactorization:
    n: int
    coeffs: np.ndarray
    left: np.ndarray  # n x w, lower triangular in its leading n columns
    right: np.ndarray  # w x n
    sensitivity_value: float
    trace_profile: np.ndarray  # squared row norms of left

    def left_matrix(self) -> np.ndarray:
        return self.left

    def right_matrix(self) -> np.ndarray:
        return self.right

    def sensitivity(self) -> float:
        return self.sensitivity_value

    def trace_p(self, p) -> float:
        _check_p(p)
        return _pnorm_rows(self.trace_profile, p)

    def achieved(self, p) -> float:
        return self.trace_p(p) * self.sensitivity()


def build_pattern(profile: polyeval.RootsProfile) -> PatternFactorization:
    return PatternFactorization(n=profile.n, coeffs=profile.coeffs, b_vals=profile.b_vals)


def realify(pattern: PatternFactorization, tol: float = 1e-12, cap: int = TRIANGULAR_CAP) -> RealFactorization:
    """Rewrite the complex product over the reals.

    When b is real to within tol the complex factors are taken verbatim
    (variant "thin", width 2n).  Otherwise Lc Rc = Re(Lc) Re(Rc) -
    Im(Lc) Im(Rc) for a real product, giving [Re | Im] times
    [Re ; -Im] (variant "full", width 4n).  The product is unchanged
    either way because the workload itself is real.
    """
    lc = pattern.left_matrix(cap=cap)
    rc = pattern.right_matrix(cap=cap)
    if float(np.abs(pattern.b_vals.imag).max()) < tol:
        return RealFactorization(
            n=pattern.n,
            coeffs=pattern.coeffs,
            left=np.ascontiguousarray(lc.real),
            right=np.ascontiguousarray(rc.real),
            variant="thin",
        )
    left = np.hstack([lc.real, lc.imag])
    right = np.vstack([rc.real, -rc.imag])
    return RealFactorization(
        n=pattern.n, coeffs=pattern.coeffs, left=left, right=right, variant="full"
    )


def triangularize(real: RealFactorization) -> TriangularFactorization:
    """Rotate the real factorization into lower-triangular form.

    QR of left^T gives left^T = Q T; then L = T^T is lower triangular and
    R = Q^T right satisfies L R = left right.  Q is orthogonal, so rows of
    L keep the row norms of the real stage exactly, and column norms of R
    cannot exceed those of the real stage.  Diagonal signs are fixed to be
    non-negative for a canonical output.
    """
    if not (np.isfinite(real.left).all() and np.isfinite(real.right).all()):
        raise NumericError("factors contain non-finite values")
    q, t = np.linalg.qr(real.left.T)  # reduced: q is w x n, t is n x n
    sign = np.where(np.diag(t) < 0.0, -1.0, 1.0)
    q = q * sign
    t = sign[:, None] * t
    left = t.T  # exact zeros above the diagonal
    right = q.T @ real.right
    sens = float(np.sqrt((right * right).sum(axis=0).max()))
    profile = (left * left).sum(axis=1)
    return TriangularFactorization(
        n=real.n,
        coeffs=real.coeffs,
        left=left,
        right=right,
        sensitivity_value=sens,
        trace_profile=profile,
    )


def factorize(spec: weights.WeightSpec, mode: str = "triangular", cap: int = TRIANGULAR_CAP):
    """Full pipeline from a weight spec.

    mode "pattern" returns the implicit complex factorization (cheap at
    any n); mode "triangular" runs realify + QR and is capped.  Striped
    horizons are rounded up to a stripe multiple first, so the returned
    factorization may have a larger n than the spec; the leading corner
    of the product still reproduces the original workload.
    """
    eff = weights.effective_spec(spec)
    f = weights.coefficients(eff)
    pattern = build_pattern(polyeval.build_profile(f))
    if mode == "pattern":
        return pattern
    if mode == "real":
        return realify(pattern, cap=cap)
    if mode == "triangular":
        if eff.n > cap:
            raise CapacityError(f"n={eff.n} exceeds triangular cap {cap}")
        return triangularize(realify(pattern, cap=cap))
    raise ParameterError(f"unknown mode {mode!r}")


def save_factor_csv(mat, path) -> None:
    a = np.asarray(mat, dtype=float)
    if a.ndim != 2:
        raise ParameterError("factor must be a 2-d array")
    with open(path, "w") as fh:
        fh.write(f"rows={a.shape[0]},cols={a.shape[1]}\n")
        for row in a:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def load_factor_csv(path) -> np.ndarray:
    with open(path) as fh:
        header = fh.readline().strip()
        parts = dict(
            kv.split("=", 1) for kv in header.split(",") if "=" in kv
        )
        if "rows" not in parts or "cols" not in parts:
            raise ParameterError(f"{path}: missing rows=/cols= header")
        rows, cols = int(parts["rows"]), int(parts["cols"])
        data = []
        for line in fh:
            s = line.strip()
            if s:
                data.append([float(v) for v in s.split(",")])
    a = np.asarray(data, dtype=float)
    if a.shape != (rows, cols):
        raise ParameterError(f"{path}: expected {rows}x{cols}, got {a.shape}")
    return a


def save_factor_binary(mat, path) -> None:
    """Little-endian container: magic, u32 version, u64 rows, u64 cols,
    then row-major float64 payload."""
    a = np.ascontiguousarray(np.asarray(mat, dtype="<f8"))
    if a.ndim != 2:
        raise ParameterError("factor must be a 2-d array")
    with open(path, "wb") as fh:
        fh.write(_BINARY_MAGIC)
        fh.write(struct.pack("<IQQ", _BINARY_VERSION, a.shape[0], a.shape[1]))
        fh.write(a.tobytes())


def load_factor_binary(path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _BINARY_MAGIC:
            raise ParameterError(f"{path}: not a factor container")
        version, rows, cols = struct.unpack("<IQQ", fh.read(20))
        if version != _BINARY_VERSION:
            raise ParameterError(f"{path}: unsupported container version {version}")
        payload = fh.read(rows * cols * 8)
    data = np.frombuffer(payload, dtype="<f8")
    if data.size != rows * cols:
        raise ParameterError(f"{path}: truncated payload")
    return data.reshape(rows, cols).copy()
