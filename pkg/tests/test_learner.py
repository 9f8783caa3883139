import numpy as np
import pytest

from gmmlearn import learner as learner_mod
from gmmlearn.candidates import CandidateMixture, GenerationBudget, Provenance, generate_all
from gmmlearn.distributions import Mixture, tv_numeric
from gmmlearn.evaluation import best_candidate
from gmmlearn.learner import MAX_EPS, ValidationError, check_accuracy, dedupe, learn
from gmmlearn.selection import TournamentConfig, TournamentResult, TournamentStats
from gmmlearn.sources import ArraySource, MixtureSource, SampleShortfallError

from .helpers import loglog_slope

SEPARATED = Mixture.two(0.5, -2, 1, 2, 1)
# coarse grids keep unit tests fast; the acceptance suite uses the defaults
CHEAP = dict(mean_eps_factor=40.0, sigma_eps_factor=12.0)


def cheap_learn(seed, mixture=SEPARATED, engine="fast", eps=0.125, delta=0.5):
    return learn(MixtureSource(mixture, seed=seed), eps, delta, TournamentConfig.parse_engine(engine, eps=eps, delta=delta, seed=seed),
                 GenerationBudget(eps, delta / 2, **CHEAP))


class TestValidation:
    def test_eps_too_large(self):
        with pytest.raises(ValidationError, match="1/8"):
            check_accuracy(0.3, 0.1)

    @pytest.mark.parametrize("eps, delta", [(0.0, 0.1), (-0.1, 0.1), (0.1, 0.0), (0.1, 1.0)])
    def test_invalid(self, eps, delta):
        with pytest.raises(ValidationError):
            learn(MixtureSource(SEPARATED, seed=0), eps, delta)

    def test_boundary_accepted(self):
        check_accuracy(MAX_EPS, 0.5)


class TestDedupe:
    def test_keeps_first_in_order(self):
        a, b = CandidateMixture(0.5, 0, 1, 1, 1), CandidateMixture(0.2, 0, 1, 1, 1)
        c = CandidateMixture(0.5, 0, 1, 1, 1, Provenance.SINGLE_COMPONENT)
        assert dedupe([b, a, b, c]) == [b, a]
        assert dedupe([]) == []


@pytest.fixture(scope="module")
def pair():
    return cheap_learn(3), cheap_learn(3)


class TestLearn:
    def test_deterministic(self, pair):
        a, b = pair
        assert a.mixture == b.mixture and a.samples_used == b.samples_used
        assert [c.params for c in a.candidates] == [c.params for c in b.candidates]

    def test_sample_accounting(self, pair):
        r = pair[0]
        d = r.diagnostics
        assert r.samples_used == d["generation_samples"] + d["selection_samples"]
        assert r.candidate_count == len(r.candidates) == len(dedupe(r.candidates))
        assert r.selection_engine == "fast" and not r.failed
        assert r.tournament.x_samples == d["selection_samples"]

    def test_budget_split(self, pair):
        r = pair[0]
        budget = GenerationBudget(0.125, 0.25, **CHEAP)
        assert r.diagnostics["generation_samples"] == budget.repetitions * budget.samples_per_repetition()

    def test_quality(self, pair):
        r = pair[0]
        tv = tv_numeric(SEPARATED, r.mixture.to_mixture()).value
        assert tv <= min(1.0, 512 * 0.125)
        assert r.mixture in r.candidates

    @pytest.mark.parametrize("engine", ["slow", "recursive:0.5", "fast:0.5"])
    def test_engines(self, engine):
        r = learn(MixtureSource(SEPARATED, seed=1), 0.125, 0.5, TournamentConfig.parse_engine(engine, eps=0.5, delta=0.9),
                  GenerationBudget(0.125, 0.25, mean_eps_factor=80.0, sigma_eps_factor=48.0))
        assert r.selection_engine == engine and not r.failed

    def test_no_winner(self, monkeypatch):
        monkeypatch.setattr(learner_mod, "select", lambda *a, **k: TournamentResult(None, None, TournamentStats(x_samples=0)))
        r = cheap_learn(0)
        assert r.failed and r.mixture is None and r.candidate_count > 0

    def test_shortfall(self):
        with pytest.raises(SampleShortfallError, match="needed"):
            learn(ArraySource(np.zeros(100)), 0.125, 0.5)

    def test_single_gaussian_candidates(self):
        # a single N(0, 1) written as a degenerate two-component mixture
        truth = Mixture.two(1.0, 0.0, 1.0, 5.0, 1.0)
        ok = 0
        for s in range(20):
            cands = generate_all(MixtureSource(truth, seed=s), GenerationBudget(0.1, 0.05))
            ok += best_candidate(Mixture.single(0, 1), cands).tv <= 0.1
        assert ok >= 18

    def test_sample_scaling(self):
        eps_values = (0.125, 0.1, 0.08)
        # coarse grids only shrink the tournament; sample counts keep their eps dependence
        used = [learn(MixtureSource(SEPARATED, seed=0), e, 0.2, budget=GenerationBudget(e, 0.1, **CHEAP)).samples_used
                for e in eps_values]
        slope = loglog_slope([1 / e for e in eps_values], used)
        print(f"samples_used={used} slope={slope:.3f}")
        assert 1.8 <= slope <= 2.3
