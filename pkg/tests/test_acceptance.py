"""End-to-end acceptance gate.

One test per criterion, each printing its measured numbers, so a
verbose run reads as a pass/fail table.  Three criteria encode target
ranges that the mathematics does not actually meet (c05, c06, c11);
those tests compute the honest values and fail rather than loosening
the check, with the measured numbers in the assertion message.
"""

import math

import numpy as np
import pytest

from gfdp import cli, factorizer, mechanism, norms, oracle, polyeval, weights

N_GRID = list(range(1, 65)) + [128, 256, 512]
P_GRID = (2, 3, np.inf)


def catalog_specs(n):
    """Fixed verification panel at horizon n: every named family whose
    parameters fit, plus ten seeded random tables."""
    specs = [weights.counting(n)]
    for w in (1, 4, 16):
        if w <= n:
            specs.append(weights.sliding(w, n))
    for b in (2, 4):
        if b <= n:
            specs.append(weights.striped(b, n))
    specs.append(weights.expdecay(0.9, n))
    specs.append(weights.polydecay(1.0, n))
    for i in range(10):
        rng = np.random.default_rng(np.random.SeedSequence((1, n, i)))
        specs.append(weights.table(rng.uniform(0.0, 1.0, n)))
    return specs


@pytest.fixture(scope="module")
def catalog():
    """Scalar summaries of the full pipeline over the catalog grid."""
    rows = []
    for n in N_GRID:
        for spec in catalog_specs(n):
            eff = weights.effective_spec(spec)
            f = weights.coefficients(eff)
            profile = polyeval.build_profile(f)
            workload = weights.build_matrix(spec)
            pattern = factorizer.build_pattern(profile)
            real = factorizer.realify(pattern)
            tri = factorizer.triangularize(real)
            m_scale = max(1.0, float(np.abs(f).max()))
            rows.append(
                {
                    "label": spec.label,
                    "n": n,
                    "scale": m_scale,
                    "dev_pattern": oracle.verify_reconstruction(pattern, workload),
                    "dev_real": oracle.verify_reconstruction(real, workload),
                    "dev_triangular": oracle.verify_reconstruction(tri, workload),
                    "parseval": oracle.parseval_deviation(profile),
                    "achieved": {p: tri.achieved(p) for p in P_GRID},
                    "formula": {
                        p: norms.gamma_upper_formula(profile.m_vals, eff.n, p)
                        for p in P_GRID
                    },
                }
            )
    return rows


def test_c01_reconstruction_exact_at_every_stage(catalog):
    worst = {"dev_pattern": 0.0, "dev_real": 0.0, "dev_triangular": 0.0}
    for row in catalog:
        tol = 1e-8 * row["scale"]
        for key in worst:
            worst[key] = max(worst[key], row[key] / row["scale"])
            assert row[key] <= tol, (
                f"{row['label']} n={row['n']}: {key}={row[key]:.3e} exceeds {tol:.1e}"
            )
    print(f"\n  worst scaled deviations: {worst}")


def test_c02_row_norms_match_spectrum_mass(catalog):
    worst = max(row["parseval"] for row in catalog)
    print(f"\n  worst relative deviation: {worst:.3e}")
    assert worst <= 1e-10


def test_c03_formula_equals_closed_form_and_dominates_achieved(catalog):
    worst_eq = 0.0
    for n in range(1, 4097):
        formula = norms.gamma_upper_formula(polyeval.eval_m(np.ones(n)), n, np.inf)
        closed = norms.counting_closed_form(n)
        worst_eq = max(worst_eq, abs(formula - closed))
        assert abs(formula - closed) <= 1e-9, f"n={n}: |{formula!r} - {closed!r}|"
    for row in catalog:
        for p in P_GRID:
            assert row["achieved"][p] <= row["formula"][p] + 1e-9, (
                f"{row['label']} n={row['n']} p={p}: achieved {row['achieved'][p]!r} "
                f"above formula {row['formula'][p]!r}"
            )
    print(f"\n  worst |formula - closed| over n <= 4096: {worst_eq:.3e}")


def test_c04_two_step_counting_value():
    want = (1 + math.sqrt(2)) / 2
    closed = norms.counting_closed_form(2)
    formula = norms.gamma_upper_formula(polyeval.eval_m(np.ones(2)), 2, np.inf)
    print(f"\n  closed={closed!r} formula={formula!r} target={want!r}")
    assert abs(closed - want) <= 1e-12
    assert abs(formula - want) <= 1e-12


def test_c05_million_horizon_gap_targets():
    n = 10**6
    closed = norms.counting_closed_form(n)
    gap_lower = closed - norms.lower_matousek(n)
    gap_baseline = norms.baseline_sqrt_bound(n) - closed
    print(f"\n  closed-minus-matousek={gap_lower!r}  baseline-minus-closed={gap_baseline!r}")
    assert 0.33 <= gap_lower <= 0.36, (
        f"closed_form - matousek at n=1e6 is {gap_lower!r}, outside the stated "
        f"[0.33, 0.36]; the log envelope (not the closed form) sits that far above "
        f"matousek, and the measured gap is a genuine property of the formulas"
    )
    assert 0.31 <= gap_baseline <= 0.34, (
        f"baseline - closed_form at n=1e6 is {gap_baseline!r}, outside the stated "
        f"[0.31, 0.34]; the advertised ~0.33 advantage only holds against the log "
        f"envelope, which exceeds the closed form by ~0.125 at this scale"
    )


def test_c06_log_envelope_with_quadratic_correction():
    worst_c = 0.0
    worst_n = 0
    for n in range(64, 4097):
        excess = norms.counting_closed_form(n) - norms.counting_log_bound(n)
        needed = excess * n * n
        if needed > worst_c:
            worst_c, worst_n = needed, n
    print(f"\n  smallest admissible C: {worst_c:.4g} (at n={worst_n})")
    assert worst_c <= 10.0, (
        f"closed_form <= log_bound + C/n^2 needs C >= {worst_c:.4g} (attained at "
        f"n={worst_n}); the closed form exceeds the log envelope by an additive "
        f"constant ~0.125 that does not decay, so no C <= 10 can work"
    )


def test_c07_chord_length_identity():
    worst = 0.0
    for n in range(1, 257):
        l = np.arange(2 * n)
        chord = np.abs(1.0 - np.exp(1j * np.pi * l / n))
        target = 2.0 * np.sin(np.pi * l / (2 * n))
        worst = max(worst, float(np.abs(chord - target).max()))
    print(f"\n  worst deviation: {worst:.3e}")
    assert worst <= 1e-12


def test_c08_window_interpolation_identity():
    worst = 0.0
    for n in range(1, 65):
        rng = np.random.default_rng(np.random.SeedSequence((8, n)))
        for _ in range(20):
            f = rng.uniform(0.0, 1.0, n)
            dev = oracle.verify_window(polyeval.build_profile(f))
            worst = max(worst, dev)
            assert dev <= 1e-10, f"n={n}: window deviation {dev:.3e}"
    print(f"\n  worst deviation: {worst:.3e}")


def test_c09_square_root_convolution_identity():
    worst = 0.0
    for n in range(1, 33):
        specs = [weights.counting(n), weights.expdecay(0.9, n), weights.polydecay(1.0, n)]
        if n >= 4:
            specs += [weights.sliding(4, n), weights.striped(2, n)]
        rng = np.random.default_rng(np.random.SeedSequence((9, n)))
        specs += [weights.table(rng.uniform(0.0, 1.0, n)) for _ in range(3)]
        for spec in specs:
            f = weights.coefficients(weights.effective_spec(spec))
            dev = oracle.verify_chalkley(polyeval.build_profile(f))
            worst = max(worst, dev)
            assert dev <= 1e-10, f"{spec.label} n={n}: deviation {dev:.3e}"
    print(f"\n  worst deviation: {worst:.3e}")


def test_c10_striped_tensor_structure():
    for n, b in ((4, 2), (64, 4), (60, 5)):
        assert oracle.kron_striped_check(n, b), f"tensor identity failed at n={n}, b={b}"
    for n, b in ((4, 2), (64, 4), (60, 5), (512, 4)):
        upper = norms.striped_upper(n, b)
        closed = norms.counting_closed_form(n // b)
        assert upper == closed, f"striped_upper({n},{b})={upper!r} != closed({n // b})={closed!r}"
    print("\n  tensor identity and block closed form agree at all tested (n, b)")


def test_c11_streaming_max_error_within_envelope():
    n, trials = 256, 500
    spec = weights.counting(n)
    tri = factorizer.factorize(spec)
    params = mechanism.PrivacyParams(1.0, 1e-6, clip=1.0, sigma_variant="classic")
    sig = mechanism.sigma(params)
    gamma2 = norms.gamma_upper_formula(polyeval.eval_m(np.ones(n)), n, np.inf)
    bound = sig * gamma2 * math.sqrt(math.log(n))
    x = np.ones(n)
    maxima = np.empty(trials)
    for i, child in enumerate(np.random.SeedSequence(2026).spawn(trials)):
        state = mechanism.init(tri, params, child)
        for v in x:
            state.step(v)
        errs = np.asarray(state.outputs) - np.asarray(state.true_sums)
        maxima[i] = np.abs(errs).max()
    mean_max = float(maxima.mean())
    se = float(maxima.std(ddof=1) / math.sqrt(trials))
    print(
        f"\n  sigma={sig:.6f} gamma2={gamma2:.6f} envelope={bound:.4f} "
        f"mean_max={mean_max:.4f} (se {se:.3f}) ratio={mean_max / bound:.4f}"
    )
    assert mean_max <= bound, (
        f"mean over {trials} trials of the worst per-step error is {mean_max:.4f}, "
        f"{(mean_max - bound) / se:.1f} standard errors above the envelope "
        f"sigma*gamma2*sqrt(ln n) = {bound:.4f}; the expected maximum of 2n "
        f"correlated Gaussians needs a sqrt(2 ln 2n) factor, so the sqrt(ln n) "
        f"envelope with constant 1 is genuinely exceeded (measured ratio "
        f"{mean_max / bound:.3f}, not the advertised < 0.5)"
    )


def test_c12_noise_off_reproduces_weighted_sums():
    n = 128
    params = mechanism.PrivacyParams(1.0, 1e-6, clip=1.0)
    x = np.random.default_rng(12).uniform(-1.0, 1.0, n)
    worst = 0.0
    for spec in catalog_specs(n):
        out = mechanism.run(spec, params, x, seed=0, noise_scale=0.0)
        want = weights.build_matrix(spec).entries @ x
        dev = float(np.abs(out - want).max())
        worst = max(worst, dev)
        assert dev <= 1e-12, f"{spec.label}: noiseless deviation {dev:.3e}"
    print(f"\n  worst deviation: {worst:.3e}")


def test_c13_simulation_is_byte_deterministic(tmp_path):
    argv = [
        "simulate", "--weight", "sliding", "--window", "16", "--n", "256",
        "--eps", "1", "--delta", "1e-6", "--seed", "7",
    ]
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert cli.main(argv + ["--out", str(out)]) == 0
        outs.append((out / "steps.csv").read_bytes() + (out / "summary.json").read_bytes())
    assert outs[0] == outs[1]
    print("\n  two runs produced byte-identical steps.csv and summary.json")


def test_c14_sliding_upper_clears_window_lower_bounds():
    n = 128
    for w in (4, 16, 64):
        upper, lower = norms.sliding_bounds(n, w)
        floor = max(norms.lower_mathias(w), norms.lower_matousek(w))
        print(f"\n  W={w}: upper={upper:.6f} lower={floor:.6f}")
        assert lower == floor
        assert upper >= floor - 1e-9
