import csv

import numpy as np
import pytest

from polarbounds import bounds as bounds_mod
from polarbounds import experiments
from polarbounds.exceptions import (
    DomainError,
    NumericalError,
    SpectralOverlapError,
)
from polarbounds.experiments import (
    ComparisonTest,
    ExperimentConfig,
    SampleDistribution,
    run_example,
    run_montecarlo,
    run_perturb_sweep,
)


class TestRunExample:
    def test_frozen_values(self):
        rep = run_example()
        assert rep.x_norm == pytest.approx(1.249594699736542, abs=1e-12)
        assert rep.separation == pytest.approx(1.1832159566199232, abs=1e-12)
        assert rep.lam == pytest.approx(4.7912878474779195, abs=1e-12)
        assert rep.mu == pytest.approx(0.8091067115702212, abs=1e-12)
        expected_uppers = (
            1.4915469183406003,
            1.7648221138278717,
            1.2601818452517752,
            1.2578290804398122,
            1.2578290804398125,
        )
        for got, want in zip(rep.uppers, expected_uppers):
            assert got == pytest.approx(want, abs=1e-12)

    def test_relative_errors_follow_from_uppers(self):
        rep = run_example()
        for err, upper in zip(rep.relative_errors, rep.uppers):
            assert err == pytest.approx((upper - rep.x_norm) / rep.x_norm)
        assert rep.relative_errors[0] == pytest.approx(0.1936, abs=2e-4)

    def test_deterministic(self):
        assert run_example() == run_example()


class TestTrialData:
    @pytest.mark.parametrize("dist", list(SampleDistribution))
    def test_coefficients_are_gram_matrices(self, dist):
        rng = np.random.default_rng(601)
        A, B, C, D = experiments._trial_data(rng, ComparisonTest.INDEPENDENT, 3, dist)
        for M in (A, B):
            assert np.allclose(M, M.conj().T)
            assert np.linalg.eigvalsh(M)[0] > -1e-12

    def test_variant_relations(self):
        n = 3
        dist = SampleDistribution.UNIFORM_REAL

        def data(test):
            rng = np.random.default_rng(602)
            return experiments._trial_data(rng, test, n, dist)

        _, _, C, D = data(ComparisonTest.ZERO_D)
        assert np.any(C) and not np.any(D)
        _, _, C, D = data(ComparisonTest.ZERO_C)
        assert not np.any(C) and np.any(D)
        _, _, C, D = data(ComparisonTest.OPPOSITE)
        assert np.array_equal(D, -C)
        _, _, C, D = data(ComparisonTest.EQUAL)
        assert np.array_equal(D, C)

    def test_coefficient_draws_shared_across_variants(self):
        # A and B come from the first two draws, so they agree between
        # variants at the same substream regardless of how C and D follow.
        def coeffs(test):
            rng = np.random.default_rng(603)
            A, B, _, _ = experiments._trial_data(
                rng, test, 3, SampleDistribution.UNIFORM_REAL
            )
            return A, B

        A1, B1 = coeffs(ComparisonTest.ZERO_D)
        A2, B2 = coeffs(ComparisonTest.EQUAL)
        assert np.array_equal(A1, A2)
        assert np.array_equal(B1, B2)


class TestRunMontecarlo:
    def test_small_run_counts_are_sane(self):
        tally = run_montecarlo(ExperimentConfig(trials=200))
        assert tally.trials == 200
        for count in (tally.alpha, tally.beta, tally.gamma):
            assert 0 <= count <= 200
        assert tally.redraws >= 0

    def test_deterministic_across_runs(self):
        cfg = ExperimentConfig(test=ComparisonTest.EQUAL, trials=300)
        assert run_montecarlo(cfg) == run_montecarlo(cfg)

    def test_independent_of_chunking(self, monkeypatch):
        cfg = ExperimentConfig(test=ComparisonTest.OPPOSITE, trials=257)
        whole = run_montecarlo(cfg)
        monkeypatch.setattr(experiments, "_CHUNK", 37)
        assert run_montecarlo(cfg) == whole

    def test_complex_distribution_runs(self):
        tally = run_montecarlo(
            ExperimentConfig(trials=50, dist=SampleDistribution.COMPLEX_GAUSSIAN)
        )
        assert tally.trials == 50

    def test_tally_csv_schema(self, tmp_path):
        out = tmp_path / "tally.csv"
        tally = run_montecarlo(
            ExperimentConfig(test=ComparisonTest.ZERO_D, trials=40, out_path=str(out))
        )
        with open(out, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == experiments._TALLY_HEADER
        assert rows[1] == [
            "ii", "40", str(tally.seed),
            str(tally.alpha), str(tally.beta), str(tally.gamma), str(tally.redraws),
        ]

    def test_redraw_branch_counts(self, monkeypatch):
        monkeypatch.setenv(experiments.THREADS_ENV_VAR, "1")
        orig = bounds_mod.spectral_separation
        calls = {"n": 0}

        def flaky(omega, gamma, **kwargs):
            calls["n"] += 1
            if calls["n"] % 2 == 1:
                raise SpectralOverlapError("forced overlap")
            return orig(omega, gamma, **kwargs)

        monkeypatch.setattr(bounds_mod, "spectral_separation", flaky)
        tally = run_montecarlo(ExperimentConfig(trials=25))
        assert tally.redraws == 25

    def test_redraw_exhaustion_raises(self, monkeypatch):
        monkeypatch.setenv(experiments.THREADS_ENV_VAR, "1")
        monkeypatch.setattr(experiments, "_MAX_REDRAWS", 3)

        def always_overlapping(omega, gamma, **kwargs):
            raise SpectralOverlapError("forced overlap")

        monkeypatch.setattr(bounds_mod, "spectral_separation", always_overlapping)
        with pytest.raises(NumericalError):
            run_montecarlo(ExperimentConfig(trials=2))

    @pytest.mark.parametrize("bad", ["zero", "-3", "0"])
    def test_invalid_thread_env_rejected(self, monkeypatch, bad):
        monkeypatch.setenv(experiments.THREADS_ENV_VAR, bad)
        with pytest.raises(DomainError):
            run_montecarlo(ExperimentConfig(trials=10))

    def test_thread_env_accepted(self, monkeypatch):
        monkeypatch.setenv(experiments.THREADS_ENV_VAR, "2")
        assert run_montecarlo(ExperimentConfig(trials=10)).trials == 10

    @pytest.mark.parametrize(
        "kwargs", [{"trials": 0}, {"trials": -5}, {"size": 0}]
    )
    def test_config_validation(self, kwargs):
        with pytest.raises(DomainError):
            run_montecarlo(ExperimentConfig(**kwargs))


class TestRunPerturbSweep:
    def test_rows_and_determinism(self):
        rows = run_perturb_sweep(sizes=[2, 3], epsilons=[0.01], trials=2)
        assert len(rows) == 4
        assert rows == run_perturb_sweep(sizes=[2, 3], epsilons=[0.01], trials=2)
        for row in rows:
            assert 1 <= row.rank <= row.size
            assert row.actual_u <= row.subunitary_at_identity + 1e-9
            assert row.subunitary_optimized <= row.subunitary_at_identity

    def test_zero_epsilon_rows_are_exact(self):
        # inv(I) is exact, so every recorded quantity collapses to zero.
        for row in run_perturb_sweep(sizes=[3], epsilons=[0.0], trials=2):
            assert row.actual_u == 0.0 and row.actual_h == 0.0
            assert row.subunitary_at_identity == 0.0
            assert row.psd_at_identity == 0.0
            assert row.chen_li_sun == 0.0 and row.hong_meng_zheng == 0.0

    def test_sweep_csv_schema(self, tmp_path):
        out = tmp_path / "sweep.csv"
        rows = run_perturb_sweep(
            sizes=[2], epsilons=[0.1], trials=3, out_path=str(out)
        )
        with open(out, newline="") as fh:
            parsed = list(csv.reader(fh))
        assert parsed[0] == experiments._SWEEP_HEADER
        assert len(parsed) == 1 + len(rows)
        # Float cells are written as reprs, so they parse back exactly.
        assert float(parsed[1][4]) == rows[0].actual_u

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"sizes": [], "epsilons": [0.1], "trials": 1},
            {"sizes": [0], "epsilons": [0.1], "trials": 1},
            {"sizes": [2], "epsilons": [-0.1], "trials": 1},
            {"sizes": [2], "epsilons": [0.1], "trials": 0},
        ],
    )
    def test_argument_validation(self, kwargs):
        with pytest.raises(DomainError):
            run_perturb_sweep(**kwargs)

    def test_row_check_rejects_violation(self):
        good = run_perturb_sweep(sizes=[2], epsilons=[0.01], trials=1)[0]
        bad = type(good)(**{**good.__dict__, "actual_u": good.subunitary_at_identity + 1.0})
        with pytest.raises(NumericalError):
            experiments._check_sweep_row(bad)
