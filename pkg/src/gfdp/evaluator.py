"""Monte Carlo error measurement against the theoretical envelope.

Draws fresh noise vectors, pushes them through the left factor, and
aggregates the p-norm of the resulting error column.  Per-trial seeds
come from splitting one root seed, so results are independent of thread
count and identical across repeat runs.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import factorizer, norms
from .errors import ParameterError
from .mechanism import sigma as privacy_sigma


@dataclass
class ErrorReport:
    spec_label: str
    n: int
    p: float
    trials: int
    seed: int
    empirical: float
    bound: float
    ratio: float
    trial_max: float | None = None  # largest per-trial value, p = inf only

    def to_json_dict(self) -> dict:
        return {
            "spec": self.spec_label,
            "n": self.n,
            "p": "inf" if self.p == np.inf else self.p,
            "trials": self.trials,
            "seed": self.seed,
            "empirical": self.empirical,
            "bound": self.bound,
            "ratio": self.ratio,
            "trial_max": self.trial_max,
        }


def trial_values(left, noise_std: float, p, trials: int, seed, threads: int = 1) -> np.ndarray:
    """Per-trial ||L z||_p^p values (per-trial max for p = inf)."""
    factorizer._check_p(p)
    if trials < 1:
        raise ParameterError("need at least one trial")
    left = np.asarray(left, dtype=float)
    width = left.shape[1]
    seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    children = seq.spawn(trials)
    out = np.empty(trials)

    def one(i):
        rng = np.random.default_rng(children[i])
        y = left @ (rng.standard_normal(width) * noise_std)
        if p == np.inf:
            out[i] = np.abs(y).max()
        else:
            out[i] = (np.abs(y) ** p).sum()

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(one, range(trials)))
    else:
        for i in range(trials):
            one(i)
    return out


def empirical_err(left, noise_std: float, p, trials: int, seed, threads: int = 1) -> float:
    """Monte Carlo estimate of the expected error size.

    For finite p this is (mean ||L z||_p^p)^{1/p}; for p = inf it is the
    mean over trials of the largest coordinate error.
    """
    vals = trial_values(left, noise_std, p, trials, seed, threads=threads)
    mean = float(np.mean(vals))  # pairwise summation, order fixed by trial index
    if p == np.inf:
        return mean
    return mean ** (1.0 / p)


def theoretical_bound(gamma_p: float, sigma_val: float, p, n: int) -> float:
    """Envelope sigma * gamma_p * min(p, sqrt(ln n)), with the min read
    as sqrt(ln n) at p = inf.  Degenerate (zero) at n = 1."""
    factorizer._check_p(p)
    if n < 1:
        raise ParameterError("n must be >= 1")
    root = math.sqrt(math.log(n))
    factor = root if p == np.inf else min(float(p), root)
    return sigma_val * gamma_p * factor


def compare(
    specs,
    n_grid,
    params,
    p_grid=(np.inf,),
    trials: int = 500,
    seed: int = 0,
    threads: int = 1,
    mode: str = "triangular",
    include_empirical: bool = True,
    cap: int = factorizer.TRIANGULAR_CAP,
) -> list[tuple[norms.BoundReport, ErrorReport | None]]:
    """Sweep specs x n_grid x p_grid; pair each bound report with a
    measured error report.

    Spec horizons are rebuilt per grid entry; combinations whose
    parameters are invalid at that horizon (window or stripe larger than
    n) are skipped.  Trial seeds derive from (seed, row index) so adding
    rows does not shift earlier rows' randomness.
    """
    rows: list[tuple[norms.BoundReport, ErrorReport | None]] = []
    sig = privacy_sigma(params) if include_empirical else 0.0
    row_index = 0
    for spec in specs:
        for n in n_grid:
            try:
                spec_n = replace(spec, n=int(n))
            except ParameterError:
                continue
            fact = None
            for p in p_grid:
                report = norms.build_report(spec_n, p=p, mode=mode, cap=cap)
                err = None
                if include_empirical:
                    if fact is None:
                        fact = factorizer.factorize(spec_n, mode=mode, cap=cap)
                    noise_std = sig * fact.sensitivity()
                    vals = trial_values(
                        fact.left_matrix(), noise_std, p, trials,
                        seed=np.random.SeedSequence((seed, row_index)),
                        threads=threads,
                    )
                    mean = float(np.mean(vals))
                    emp = mean if p == np.inf else mean ** (1.0 / p)
                    bound = theoretical_bound(report.formula_upper, sig, p, report.n)
                    err = ErrorReport(
                        spec_label=report.spec_label,
                        n=report.n,
                        p=float(p),
                        trials=trials,
                        seed=seed,
                        empirical=emp,
                        bound=bound,
                        ratio=emp / bound if bound > 0 else math.inf,
                        trial_max=float(vals.max()) if p == np.inf else None,
                    )
                rows.append((report, err))
                row_index += 1
    return rows
