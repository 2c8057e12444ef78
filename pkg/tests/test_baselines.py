import numpy as np
import pytest
from helpers import StubRng

from nbde.baselines import (
    BaselineConfig,
    default_population_size,
    mutate_de_best_2,
    mutate_de_rand_1,
    mutate_wsa,
    run_baseline,
)
from nbde.core import ConfigurationError, Population, make_rng
from nbde.benchmarks import get_spec
from nbde.optimizer import crossover_binary


def test_population_schedule():
    assert default_population_size("de_rand_1", 10) == 30
    assert default_population_size("de_rand_1", 30) == 100
    assert default_population_size("de_best_2", 50) == 200
    assert default_population_size("wsa", 10) == 40
    assert default_population_size("wsa", 50) == 40
    assert default_population_size("nbde", 30) == 40
    # off-schedule dimensions fall into the nearest published band
    assert default_population_size("de_rand_1", 20) == 30
    assert default_population_size("de_rand_1", 40) == 100


def test_config_validation():
    with pytest.raises(ConfigurationError):
        BaselineConfig("simulated_annealing")
    with pytest.raises(ConfigurationError):
        BaselineConfig("de_rand_1", np=3)
    with pytest.raises(ConfigurationError):
        BaselineConfig("de_best_2", np=4)
    with pytest.raises(ConfigurationError):
        BaselineConfig("wsa", cr=1.5)
    config = BaselineConfig("de_rand_1")
    assert config.population_size(10) == 30
    assert config.budget(10) == 100_000


# --- DE/rand/1 ----------------------------------------------------------------


def _five_member_population():
    return Population(
        positions=np.array([[9.0, 9.0], [1.0, 1.0], [3.0, 0.0], [1.0, 0.0], [5.0, 5.0]]),
        fitness=np.array([5.0, 1.0, 2.0, 3.0, 4.0]),
    )


def test_de_rand_1_hand_value():
    pop = _five_member_population()
    # draws pick r1=1, r2=2, r3=3: [1,1] + 0.5*([3,0] - [1,0]) = [2,1]
    v = mutate_de_rand_1(pop, 0, 0.5, StubRng(randoms=[0.0, 0.0, 0.0]))
    assert np.array_equal(v, [2.0, 1.0])


def test_de_rand_1_zero_difference_returns_the_base():
    pop = _five_member_population()
    pop.positions[3] = pop.positions[2]
    v = mutate_de_rand_1(pop, 0, 0.7, StubRng(randoms=[0.0, 0.0, 0.0]))
    assert np.array_equal(v, pop.positions[1])


def test_de_rand_1_zero_scale_returns_a_population_row():
    pop = _five_member_population()
    rng = make_rng(2)
    for _ in range(50):
        v = mutate_de_rand_1(pop, 0, 0.0, rng)
        assert any(np.array_equal(v, row) for row in pop.positions[1:])


def test_de_rand_1_needs_four_members():
    pop = Population(np.zeros((3, 2)), np.arange(3.0))
    with pytest.raises(ConfigurationError):
        mutate_de_rand_1(pop, 0, 0.5, make_rng(0))


def test_de_rand_1_candidate_coordinates_come_from_parent_or_base():
    # with f = 0 the mutant is x_r1, so every candidate coordinate is
    # either parental or copied from that single population row
    pop = _five_member_population()
    rng = make_rng(31)
    for _ in range(50):
        mutant = mutate_de_rand_1(pop, 0, 0.0, rng)
        candidate = crossover_binary(pop.positions[0], mutant, 0.9, rng)
        for j, value in enumerate(candidate):
            assert value in (pop.positions[0][j], mutant[j])


# --- DE/best/2 ----------------------------------------------------------------


def test_de_best_2_hand_value():
    pop = Population(
        positions=np.array([[0.0], [1.0], [2.0], [0.0], [1.0], [7.0]]),
        fitness=np.array([0.0, 5.0, 5.0, 5.0, 5.0, 9.0]),
    )
    # best is member 0; draws pick r1..r4 = 1, 2, 3, 4
    v = mutate_de_best_2(pop, 5, 0.5, StubRng(randoms=[0.0, 0.0, 0.0, 0.0]))
    # [0] + 0.5*([1] + [2] - [0] - [1]) = [1]
    assert np.array_equal(v, [1.0])


def test_de_best_2_cancelling_pairs_return_the_best():
    pop = Population(
        positions=np.array([[0.5], [4.0], [6.0], [4.0], [6.0], [7.0]]),
        fitness=np.array([0.0, 5.0, 5.0, 5.0, 5.0, 9.0]),
    )
    v = mutate_de_best_2(pop, 5, 0.5, StubRng(randoms=[0.0, 0.0, 0.0, 0.0]))
    assert np.array_equal(v, [0.5])


def test_de_best_2_zero_scale_returns_the_best():
    pop = Population(
        positions=np.array([[0.5], [4.0], [6.0], [4.1], [6.2], [7.0]]),
        fitness=np.array([0.0, 5.0, 5.0, 5.0, 5.0, 9.0]),
    )
    for seed in range(20):
        assert np.array_equal(mutate_de_best_2(pop, 5, 0.0, make_rng(seed)), [0.5])


def test_de_best_2_draws_avoid_self_and_best():
    pop = Population(
        positions=np.arange(12.0).reshape(6, 2),
        fitness=np.array([3.0, 0.0, 4.0, 5.0, 6.0, 7.0]),
    )
    rng = make_rng(13)
    base = pop.positions[1]  # member 1 is the best
    for _ in range(200):
        v = mutate_de_best_2(pop, 0, 0.0, rng)
        assert np.array_equal(v, base)


def test_de_best_2_needs_enough_free_members():
    pop = Population(np.zeros((5, 1)), np.array([0.0, 1.0, 2.0, 3.0, 4.0]))
    # i = 1 plus best = 0 leaves only three free members for four picks
    with pytest.raises(ConfigurationError):
        mutate_de_best_2(pop, 1, 0.5, make_rng(0))


# --- WSA ------------------------------------------------------------------------


def test_wsa_zero_difference_returns_the_parent():
    pop = Population(np.tile([2.0, 3.0], (4, 1)), np.arange(4.0))
    assert np.array_equal(mutate_wsa(pop, 0, 1, make_rng(0)), [2.0, 3.0])


def test_wsa_hand_value_with_injected_draws():
    pop = Population(np.array([[0.0, 0.0], [1.0, 1.0], [5.0, 5.0], [6.0, 6.0]]), np.arange(4.0))
    v = mutate_wsa(pop, 0, 1, StubRng(uniforms=[[2.0, 0.0]]))
    assert np.array_equal(v, [2.0, 0.0])


def test_wsa_unit_draws_land_on_the_guide():
    pop = Population(np.array([[0.0, 0.0], [1.0, -1.0], [5.0, 5.0], [6.0, 6.0]]), np.arange(4.0))
    v = mutate_wsa(pop, 0, 1, StubRng(uniforms=[[1.0, 1.0]]))
    assert np.array_equal(v, [1.0, -1.0])


def test_wsa_draws_span_zero_to_two():
    pop = Population(np.array([[0.0], [1.0], [5.0], [6.0]]), np.array([4.0, 1.0, 5.0, 6.0]))
    rng = make_rng(6)
    values = np.array([mutate_wsa(pop, 0, 1, rng)[0] for _ in range(5000)])
    assert values.min() >= 0.0 and values.max() < 2.0
    assert values.max() > 1.9 and values.min() < 0.1


# --- full runs -------------------------------------------------------------------


@pytest.mark.parametrize("algorithm", ["de_rand_1", "de_best_2", "wsa"])
def test_run_baseline_is_seed_deterministic(algorithm):
    spec = get_spec("F7", 2)
    config = BaselineConfig(algorithm, np=6, max_evaluations=400)
    assert run_baseline(config, spec, seed=5) == run_baseline(config, spec, seed=5)


@pytest.mark.parametrize("algorithm", ["de_rand_1", "de_best_2", "wsa"])
def test_run_baseline_spends_the_budget_exactly(algorithm):
    spec = get_spec("F2", 2)
    config = BaselineConfig(algorithm, np=6, max_evaluations=6 + 17)
    record = run_baseline(config, spec, seed=2)
    assert record.evaluations_used == 23
    values = [fitness for _, fitness in record.best_so_far_trace]
    assert all(a >= b for a, b in zip(values, values[1:]))


def test_run_baseline_rejects_budget_below_population():
    spec = get_spec("F7", 2)
    with pytest.raises(ConfigurationError):
        run_baseline(BaselineConfig("wsa", max_evaluations=30), spec, seed=0)


def test_run_baseline_resolves_population_from_the_schedule():
    spec = get_spec("F7", 2)
    record = run_baseline(BaselineConfig("de_rand_1", max_evaluations=100), spec, seed=1)
    # schedule gives np = 30 below dimension 30; the trace starts there
    assert record.best_so_far_trace[0][0] == 30


@pytest.mark.slow
def test_de_best_2_rastrigin_d30_reproduction():
    # reference comparison credits DE/best/2 with solving Rastrigin at D=30;
    # known not to hold for the standard best/2 formula (see the slow-lane
    # note in the README), kept verbatim rather than weakened
    spec = get_spec("F7", 30)
    config = BaselineConfig("de_best_2")
    records = [run_baseline(config, spec, seed=s) for s in range(20)]
    sr = sum(r.success for r in records) / len(records)
    print(f"de_best_2 F7 D=30: SR={sr:.2f}")
    assert sr >= 0.9
