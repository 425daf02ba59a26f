"""End-to-end acceptance suite: one test per shipped guarantee.

Each test computes its quantities, prints a single PASS/FAIL scorecard line
(written to the real stdout so it survives capture), then asserts.  Heavy
evolutions are cached and shared between tests; every stochastic input is
seeded, so all reported numbers reproduce exactly.  Full suite is ~15 min
on one core; the braiding and transport protocols dominate.
"""

from __future__ import annotations

import functools
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from noisykitaev.analysis import (
    heating_rate_analytic,
    heating_rate_fit,
    quench_g_infinity,
    slow_noise_decay_model,
)
from noisykitaev.dynamics import (
    FastLimitSpec,
    MarginalEnsemble,
    bind_global_mu,
    bind_site_mu,
    edge_correlation_observable,
    energy_observable,
    evolve_lindblad_fast,
    evolve_marginal,
    evolve_quasi_static,
    evolve_trajectory_average,
)
from noisykitaev.experiments import PRESETS, preset_config, run_experiment
from noisykitaev.noise import (
    autocorrelation,
    constant,
    discretized_gaussian,
    noise_statistics,
    sample_autocorrelation,
    stationary_distribution,
    telegraph,
)
from noisykitaev.schedules import (
    build_tjunction,
    count_correlation_drops,
    run_braid,
    transport_fidelity_sweep,
)
from noisykitaev.wires import (
    build_hamiltonian,
    chain,
    ground_state_covariance,
    majorana_spectrum,
    validate_covariance,
    zero_modes,
)

REPO_ROOT = Path(__file__).resolve().parents[1]


def _report(number: int, name: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:02d} ({name}): {detail}"
    print(line, file=sys.__stdout__, flush=True)


def _assert_all(checks: list[tuple[bool, str]]) -> None:
    bad = [msg for ok, msg in checks if not ok]
    assert not bad, "; ".join(bad)


@functools.lru_cache(maxsize=None)
def _decay_curve(mu_b: float, rate: float, t_max: float):
    """Edge-correlation trace of the standard 60-site decay setup."""
    net = chain(60, 1.0, 0.8, 0.0)
    binding = bind_global_mu(net)
    noise = telegraph(0.2, mu_b, rate)
    h0 = binding.hamiltonian(0.2)
    gamma0 = ground_state_covariance(h0)
    observables = {"c": edge_correlation_observable(zero_modes(h0))}
    t = np.linspace(0.0, t_max, int(10 * t_max) + 1)
    ensemble = MarginalEnsemble.initial(binding, noise, gamma0)
    series = evolve_marginal(ensemble, t, observables=observables)
    return t, series.data["c"]


def test_01_marginal_matches_trajectory_sampling():
    net = chain(60, 1.0, 0.8, 0.0)
    binding = bind_global_mu(net)
    noise = telegraph(0.2, 1.0, 0.7)
    h0 = binding.hamiltonian(0.2)
    gamma0 = ground_state_covariance(h0)
    observables = {"c": edge_correlation_observable(zero_modes(h0))}
    t = np.linspace(0.0, 20.0, 201)
    _, exact = _decay_curve(1.0, 0.7, 20.0)
    sampled = evolve_trajectory_average(
        binding, noise, gamma0, t, n_trajectories=5000, seed=11,
        observables=observables,
    )
    diff = np.abs(sampled.data["c"] - exact)
    ratio = diff[1:] / sampled.errors["c"][1:]
    worst = float(ratio.max())
    checks = [
        (diff[0] < 1e-12, f"t=0 must agree exactly, got {diff[0]:.2e}"),
        (worst <= 3.0, f"max deviation {worst:.3f} standard errors exceeds 3"),
    ]
    _report(1, "marginal vs sampled trajectories", all(c for c, _ in checks),
            f"max |difference| = {worst:.2f} standard errors over t <= 20 "
            f"(bound 3, 5000 trajectories, exact agreement at t = 0)")
    _assert_all(checks)


def test_02_heating_rates_match_analytic():
    # The (2, 4) fit window sits on the golden-rule plateau: earlier times
    # still carry the noise-correlation transient, later times bend down as
    # the resonant quasiparticle shell depletes (worst at mu = 2 where the
    # band is gapless).  N = 120 halves the residual finite-size bias.
    kappas = (0.5, 1.0, 2.0, 4.0, 8.0)
    checks = []
    worst = 0.0
    mu0_rates = []
    for mu in (0.0, 2.0, 4.0):
        for kappa in kappas:
            net = chain(120, 1.0, 1.0, 0.0)
            binding = bind_global_mu(net)
            noise = telegraph(mu - 0.1, mu + 0.1, kappa)
            h_ave = binding.hamiltonian(mu)
            gamma0 = ground_state_covariance(h_ave, degenerate_ok=True)
            t = np.linspace(0.0, 4.0, 81)
            ensemble = MarginalEnsemble.initial(binding, noise, gamma0)
            series = evolve_marginal(
                ensemble, t, observables={"e": energy_observable(h_ave)})
            gain = (series.data["e"] - series.data["e"][0]) / 120
            fit = heating_rate_fit(t, gain, window=(2.0, 4.0))
            analytic = heating_rate_analytic(1.0, 1.0, mu, 0.1, kappa)
            rel = abs(fit.rate / analytic - 1.0)
            worst = max(worst, rel)
            checks.append(
                (rel < 0.05, f"mu={mu} kappa={kappa}: deviation {rel:.4f}"))
            if mu == 0.0:
                mu0_rates.append(fit.rate)
    peak = kappas[int(np.argmax(mu0_rates))]
    checks.append((2.0 <= peak <= 4.0, f"mu=0 rate peaks at kappa={peak}"))
    _report(2, "heating rates vs analytic", all(c for c, _ in checks),
            f"15 fitted rates within 5% of the analytic formula "
            f"(worst {worst:.4f}); mu=0 curve peaks at kappa={peak}")
    _assert_all(checks)


def test_03_quench_correlation_matches_overlap_formula():
    h0 = build_hamiltonian(chain(134, 1.0, 0.72, 0.3))
    modes0 = zero_modes(h0)
    gamma0 = ground_state_covariance(h0)
    # average over t in [40, 60]: past dephasing, before finite-size revivals
    window = np.linspace(40.0, 60.0, 81)
    worst = 0.0
    spots = {}
    for mu_f in np.linspace(0.0, 1.8, 37):
        hf = build_hamiltonian(chain(134, 1.0, 0.72, float(mu_f)))
        omega, v = majorana_spectrum(hf.mat)
        gt = v.conj().T @ gamma0 @ v
        a = v.T @ modes0.f_left
        b = v.conj().T @ modes0.f_right
        w = a[:, None] * gt * b[None, :]
        dphi = omega[:, None] - omega[None, :]
        evolved = float(np.mean(
            [-np.real(np.sum(w * np.exp(-1j * dphi * tv))) for tv in window]))
        worst = max(worst, abs(evolved - quench_g_infinity(h0, hf)))
        if np.isclose(mu_f, 0.8) or np.isclose(mu_f, 1.8):
            spots[round(float(mu_f), 1)] = evolved
    checks = [
        (worst < 0.02, f"worst |evolved - overlap formula| = {worst:.4f}"),
        # regression guards on two representative long-time values
        (abs(spots[0.8] - 0.81244) < 2e-3, f"mu_f=0.8 moved to {spots[0.8]:.5f}"),
        (abs(spots[1.8] - 0.03554) < 2e-3, f"mu_f=1.8 moved to {spots[1.8]:.5f}"),
    ]
    _report(3, "quench asymptotics vs overlap formula", all(c for c, _ in checks),
            f"worst deviation {worst:.4f} over mu_f in [0, 1.8] (bound 0.02)")
    _assert_all(checks)


def test_04_switching_rate_phenomenology():
    at10 = {}
    for mu_b in (1.0, 2.1, 4.0):
        for rate in (0.1, 0.7, 10.0):
            # runs shared with other criteria keep their longer horizon
            t_max = 20.0 if (mu_b, rate) in (
                (1.0, 0.1), (4.0, 0.1), (1.0, 10.0)) else 10.0
            t, c = _decay_curve(mu_b, rate, t_max)
            at10[(mu_b, rate)] = float(c[np.searchsorted(t, 10.0)])
    checks = []
    for mu_b in (1.0, 2.1):
        fastest = (at10[(mu_b, 0.7)] < at10[(mu_b, 0.1)]
                   and at10[(mu_b, 0.7)] < at10[(mu_b, 10.0)])
        checks.append((fastest, f"mu_b={mu_b}: kappa=0.7 must decay fastest"))
    checks.append((at10[(4.0, 0.1)] > 0.3,
                   f"mu_b=4 kappa=0.1: {at10[(4.0, 0.1)]:.4f} not above 0.3"))
    # the kappa=0.7 value is exact for this model (Monte Carlo cross-check
    # 0.0809 +- 0.0029, step-size independent); the 0.05 visibility bound
    # is not attainable -- it is only crossed near t = 12.
    checks.append((at10[(4.0, 0.7)] < 0.05,
                   f"mu_b=4 kappa=0.7: {at10[(4.0, 0.7)]:.4f} not below 0.05"))
    checks.append((at10[(4.0, 10.0)] < 0.05,
                   f"mu_b=4 kappa=10: {at10[(4.0, 10.0)]:.4f} not below 0.05"))
    _report(4, "switching-rate phenomenology", all(c for c, _ in checks),
            "t=10 correlations -- mu_b=1: "
            f"{at10[(1.0, 0.1)]:.3f}/{at10[(1.0, 0.7)]:.3f}/{at10[(1.0, 10.0)]:.3f}, "
            "mu_b=2.1: "
            f"{at10[(2.1, 0.1)]:.3f}/{at10[(2.1, 0.7)]:.3f}/{at10[(2.1, 10.0)]:.3f} "
            "(kappa=0.7 fastest), mu_b=4: "
            f"{at10[(4.0, 0.1)]:.3f}/{at10[(4.0, 0.7)]:.4f}/{at10[(4.0, 10.0)]:.4f} "
            "vs bounds >0.3 / <0.05 / <0.05")
    _assert_all(checks)


def test_05_slow_noise_decay_laws():
    g1 = quench_g_infinity(build_hamiltonian(chain(60, 1.0, 0.8, 0.2)),
                           build_hamiltonian(chain(60, 1.0, 0.8, 1.0)))
    rels = {}
    for mu_b, g_inf in ((4.0, 0.0), (1.0, g1)):
        t, c = _decay_curve(mu_b, 0.1, 20.0)
        model = slow_noise_decay_model(g_inf, 0.1)(t)
        rels[mu_b] = float(np.max(np.abs(c - model) / model))
    # The laws assume complete dephasing between switches and a fixed
    # overlap loss per switch; at kappa = 0.1 the exact dynamics decays
    # slower (recently-switched branches are not yet dephased, and part of
    # the bulk remnant returns coherently on the way back).  Sampled
    # trajectories agree with these curves to 1.1 standard errors, so the
    # 10% bound is a property the model does not have.
    checks = [
        (abs(g1 - 0.61636) < 1e-4, f"overlap factor moved to {g1:.5f}"),
        (rels[4.0] <= 0.10,
         f"bare exponential law off by {rels[4.0]:.4f} (bound 0.10)"),
        (rels[1.0] <= 0.10,
         f"overlap-reduced law off by {rels[1.0]:.4f} (bound 0.10)"),
    ]
    _report(5, "slow-noise decay laws", all(c for c, _ in checks),
            f"max relative deviation over t <= 20: {rels[4.0]:.3f} vs exp(-kt), "
            f"{rels[1.0]:.3f} vs exp(-k(1-G)t) with G = {g1:.4f} (bound 0.10)")
    _assert_all(checks)


def test_06_fast_and_quasi_static_limits():
    net = chain(60, 1.0, 0.8, 0.0)
    binding = bind_global_mu(net)
    h0 = binding.hamiltonian(0.2)
    gamma0 = ground_state_covariance(h0)
    observables = {"c": edge_correlation_observable(zero_modes(h0))}

    t20, c_marginal = _decay_curve(1.0, 10.0, 20.0)
    spec = FastLimitSpec.from_binding(binding, telegraph(0.2, 1.0, 10.0))
    c_fast = evolve_lindblad_fast(spec, gamma0, t20,
                                  observables=observables).data["c"]
    d_fast = float(np.max(np.abs(c_marginal - c_fast)))

    t10, c_slow = _decay_curve(1.0, 1e-3, 10.0)
    c_static = evolve_quasi_static(binding, telegraph(0.2, 1.0, 1e-3), gamma0,
                                   t10, observables=observables).data["c"]
    d_static = float(np.max(np.abs(c_slow - c_static)))
    checks = [
        (d_fast < 0.05, f"fast-limit generator off by {d_fast:.4f}"),
        (d_static < 1e-2, f"quasi-static average off by {d_static:.2e}"),
    ]
    _report(6, "fast and quasi-static limits", all(c for c, _ in checks),
            f"kappa=10 generator within {d_fast:.4f} (bound 0.05), "
            f"kappa=0.001 average within {d_static:.1e} (bound 0.01)")
    _assert_all(checks)


def test_07_local_noise_protection():
    corr = {}
    for d in (1, 3, 6):
        net = chain(60, 1.0, 0.4, 0.4)
        binding = bind_site_mu(net, d - 1)
        h0 = binding.hamiltonian(0.0)
        gamma0 = ground_state_covariance(h0)
        observables = {"c": edge_correlation_observable(zero_modes(h0))}
        t = np.linspace(0.0, 20.0, 201)
        ensemble = MarginalEnsemble.initial(binding, telegraph(0.0, 0.8, 0.7),
                                            gamma0)
        series = evolve_marginal(ensemble, t, observables=observables)
        corr[d] = float(series.data["c"][-1])
    frozen = {1: 0.47457, 3: 0.90234, 6: 0.98705}  # regression guard
    checks = [
        (corr[1] < corr[3] < corr[6],
         f"damage must decrease with distance, got {corr}"),
        (corr[6] > 0.95, f"site-6 noise leaves only {corr[6]:.4f}"),
    ]
    checks += [(abs(corr[d] - frozen[d]) < 2e-3, f"d={d} moved to {corr[d]:.5f}")
               for d in (1, 3, 6)]
    _report(7, "local-noise protection", all(c for c, _ in checks),
            f"t=20 correlation {corr[1]:.3f} < {corr[3]:.3f} < {corr[6]:.3f} "
            "with the distant site above 0.95")
    _assert_all(checks)


def test_08_ideal_chain_immunity():
    worst = 0.0
    for d in (2, 5, 9):
        net = chain(10, 1.0, 1.0, 0.0)
        binding = bind_site_mu(net, d - 1)
        h0 = binding.hamiltonian(0.0)
        gamma0 = ground_state_covariance(h0)
        observables = {"c": edge_correlation_observable(zero_modes(h0))}
        t = np.linspace(0.0, 20.0, 201)
        ensemble = MarginalEnsemble.initial(binding, telegraph(0.0, 4.0, 1.0),
                                            gamma0)
        series = evolve_marginal(ensemble, t, observables=observables)
        worst = max(worst, float(np.max(np.abs(series.data["c"] - 1.0))))
    ok = worst < 1e-10
    _report(8, "ideal-chain immunity", ok,
            f"edge correlation constant to {worst:.1e} under strong interior "
            "noise at three distances (bound 1e-10)")
    assert ok, f"ideal chain not immune: deviation {worst:.2e}"


def test_09_transport_optimum():
    durations = (5.0, 10.0, 15.0, 20.0, 25.0, 35.0, 50.0)
    rows = transport_fidelity_sweep(
        chain(40, 1.0, 0.8, 0.2), (0, 1, 2), durations,
        noise=telegraph(0.0, 0.8, 0.5), noise_site=1,
    )
    finals = np.array([r["final_correlation"] for r in rows])
    frozen = np.array([0.2243, 0.5695, 0.5920, 0.5290,
                       0.4572, 0.3363, 0.2115])  # regression guard
    k = int(np.argmax(finals))
    checks = [
        (0 < k < len(durations) - 1,
         f"optimum at endpoint T_f={durations[k]}"),
        (bool(np.allclose(finals, frozen, atol=1e-3)),
         f"fidelity curve moved: {np.round(finals, 4).tolist()}"),
    ]
    _report(9, "transport optimum", all(c for c, _ in checks),
            f"final correlation peaks at T_f={durations[k]:g} "
            f"({finals[k]:.3f}), endpoints {finals[0]:.3f} and {finals[-1]:.3f}")
    _assert_all(checks)


def test_10_braiding_exchange():
    tj = build_tjunction(8, 8, 8, pairing_x=0.7)
    clean = run_braid(tj)
    overlaps = clean.mode_overlaps
    product = float(overlaps[0, 1] * overlaps[1, 0])

    noisy = {}
    for rate in (0.6, 10.0):
        res = run_braid(tj, noise=telegraph(0.0, 0.7, rate),
                        noise_site=tj.junction, compute_overlaps=False)
        drops = count_correlation_drops(res.series.times,
                                        res.series.data["braid_correlation"],
                                        res.boundaries)
        noisy[rate] = (res.final_correlation, len(drops))

    checks = [
        (abs(clean.final_correlation - 1.0) <= 0.01,
         f"clean exchange returns {clean.final_correlation:.6f}"),
        (abs(overlaps[0, 1]) > 0.98 and abs(overlaps[1, 0]) > 0.98,
         "exchange must map each mode onto the other"),
        (product < -0.97,
         f"exchanged modes must pick up one sign, product {product:.4f}"),
        (noisy[0.6][1] == 3,
         f"kappa=0.6 trace shows {noisy[0.6][1]} drop events, expected 3"),
        (noisy[10.0][0] > noisy[0.6][0],
         "fast noise must preserve more correlation than resonant noise"),
        # regression guards
        (abs(clean.final_correlation - 0.998397) < 1e-3, "clean final moved"),
        (abs(noisy[0.6][0] - 0.0901) < 1e-3, "kappa=0.6 final moved"),
        (abs(noisy[10.0][0] - 0.6087) < 1e-3, "kappa=10 final moved"),
    ]
    _report(10, "braiding exchange", all(c for c, _ in checks),
            f"clean correlation {clean.final_correlation:.4f}, overlap product "
            f"{product:.3f}; junction noise: kappa=0.6 -> {noisy[0.6][0]:.3f} "
            f"with {noisy[0.6][1]} drop events, kappa=10 -> {noisy[10.0][0]:.3f}")
    _assert_all(checks)


def test_11_noise_model_statistics():
    noise = discretized_gaussian(0.0, 0.1, 1.0, 64)
    stats = noise_statistics(noise)
    taus = np.array([0.0, 1.0, 2.0, 4.0]) * stats.corr_time
    estimate, se = sample_autocorrelation(noise, taus, n_paths=4000, seed=11)
    ratio = np.abs(estimate - autocorrelation(noise, taus)) / np.where(
        se > 0, se, 1.0)
    residual = float(np.linalg.norm(noise.generator
                                    @ stationary_distribution(noise)))
    single = discretized_gaussian(0.75, 0.25, 0.2, 1)
    pair = telegraph(0.5, 1.0, 2.5)
    identical = (np.array_equal(single.values, pair.values)
                 and np.array_equal(single.generator, pair.generator))
    checks = [
        (bool(np.all(ratio <= 3.0)),
         f"sampled autocorrelation off by {ratio.max():.2f} standard errors"),
        (identical, "single-fluctuator lattice must equal a telegraph exactly"),
        (residual < 1e-12, f"stationary distribution residual {residual:.1e}"),
    ]
    _report(11, "noise-model statistics", all(c for c, _ in checks),
            f"sampled autocorrelation within {ratio.max():.2f} standard errors; "
            f"single-fluctuator = telegraph exactly; generator residual "
            f"{residual:.1e}")
    _assert_all(checks)


def test_12_invariants_across_presets(tmp_path):
    failures = []
    for name in sorted(PRESETS):
        cfg = preset_config(name, smoke=True,
                            overrides={"run.monitor_invariants": True})
        try:
            run_experiment(cfg, base_dir=str(tmp_path / name))
        except Exception as exc:  # noqa: BLE001 - any violation is a finding
            failures.append(f"{name}: {exc}")

    # noise-free evolution at the largest handled size must keep the state
    # pure over a long horizon: sigma_max <= 1 + 1e-8 at output times and
    # ||Gamma Gamma^T - I||_max < 1e-6 at t = 100 (measured 9.1e-8, with the
    # largest singular value 2.4e-10 BELOW one: the single-state step is a
    # strict contraction). Holding mu at 1.0 from the mu = 0.2 ground state
    # makes the evolution a genuine quench rather than a stationary no-op.
    net = chain(134, 1.0, 0.8, 0.2)
    binding = bind_global_mu(net)
    gamma0 = ground_state_covariance(binding.hamiltonian(0.2))
    ensemble = MarginalEnsemble.initial(binding, constant(1.0), gamma0)
    series = evolve_marginal(ensemble, np.linspace(0.0, 100.0, 11),
                             snapshot_times=(100.0,))
    try:
        pure = validate_covariance(series.snapshots[100.0], pure=True, tol=1e-6)
        purity = f"purity defect {pure['purity_defect']:.1e} at t=100, N=134"
    except ValueError as exc:
        failures.append(f"unitary purity: {exc}")
        purity = "purity violated"

    # per-trajectory parity is checked inside the sampler when enabled
    net10 = chain(10, 1.0, 0.8, 0.2)
    binding10 = bind_global_mu(net10)
    g10 = ground_state_covariance(binding10.hamiltonian(0.2))
    try:
        evolve_trajectory_average(
            binding10, telegraph(0.2, 1.0, 0.7), g10,
            np.linspace(0.0, 5.0, 11), n_trajectories=25, seed=3,
            observables={}, check_parity=True,
        )
    except Exception as exc:  # noqa: BLE001
        failures.append(f"trajectory parity: {exc}")

    ok = not failures
    _report(12, "invariant suite", ok,
            f"{len(PRESETS)} presets ran in smoke profile with invariant "
            f"monitors armed; {purity}; parity conserved over 25 trajectories"
            if ok else "; ".join(failures))
    assert ok, "; ".join(failures)


# each figure script: positional input CSVs, -o output, named error on a
# missing column; the synthetic inputs mirror the documented CSV schemas
FIGURE_CASES = {
    "fig2.py": (("slow.csv", "mid.csv", "fast.csv"), ("t", "edge_correlation")),
    "fig3.py": (("trace.csv",), ("t", "delta_e", "delta_e_per_site")),
    "fig4.py": (("d1.csv", "d3.csv", "d6.csv"), ("t", "edge_correlation")),
    "fig5.py": (("braid.csv",), ("t", "braid_correlation")),
    "fig7.py": (("transport.csv",), ("t", "moving_correlation")),
    "fig8.py": (("scan.csv",), ("mu_final", "g_infinity", "longtime_correlation")),
    "split.py": (("trace.csv",), ("t", "edge_correlation")),
}


def _write_columns(path: Path, header: tuple[str, ...], drop: str | None = None):
    cols = [c for c in header if c != drop]
    grid = np.linspace(0.0, 4.0, 9)
    table = {header[0]: grid}
    for j, name in enumerate(header[1:], start=1):
        table[name] = np.exp(-0.3 * j * grid)
    lines = [",".join(cols)]
    for i in range(grid.size):
        lines.append(",".join(f"{table[c][i]:.17g}" for c in cols))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def test_13_figure_scripts_render_deterministically(tmp_path):
    script_dir = REPO_ROOT / "figures" / "scripts"
    if not script_dir.is_dir():
        print("SKIP criterion 13 (figure scripts): secondary component not "
              "built; primary suite runs without it", file=sys.__stdout__,
              flush=True)
        pytest.skip("figure scripts not present")
    checks = []
    scripts = sorted(p.name for p in script_dir.glob("*.py"))
    checks.append((scripts == sorted(FIGURE_CASES),
                   f"script set changed: {scripts}"))
    for name, (inputs, header) in sorted(FIGURE_CASES.items()):
        script = script_dir / name
        if not script.is_file():
            checks.append((False, f"{name} missing"))
            continue
        work = tmp_path / name.replace(".py", "")
        work.mkdir()
        paths = []
        for fname in inputs:
            p = work / fname
            _write_columns(p, header)
            paths.append(str(p))

        def render(out: Path):
            return subprocess.run(
                [sys.executable, str(script), *paths, "-o", str(out)],
                capture_output=True, text=True, cwd=str(REPO_ROOT),
            )

        first, second = work / "a.png", work / "b.png"
        r1, r2 = render(first), render(second)
        rendered = (r1.returncode == 0 and r2.returncode == 0
                    and first.is_file())
        checks.append((rendered, f"{name} failed: {r1.stderr[-200:]}"))
        if rendered:
            checks.append((first.read_bytes() == second.read_bytes(),
                           f"{name} output not deterministic"))
        _write_columns(work / inputs[0], header, drop=header[1])
        bad = render(work / "c.png")
        checks.append(
            (bad.returncode != 0 and "MissingColumnError" in bad.stderr,
             f"{name} must name the missing column, stderr: {bad.stderr[-200:]}"))
    ok = all(c for c, _ in checks)
    _report(13, "figure scripts", ok,
            f"{len(FIGURE_CASES)} scripts render byte-identical images and "
            "fail by name on a missing column" if ok
            else "; ".join(msg for okc, msg in checks if not okc))
    _assert_all(checks)
