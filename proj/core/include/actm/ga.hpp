// Genetic algorithm over five-key-point beam shapes.
//
// A chromosome is the key-point list of a BeamDesign; the pins (first and
// last points) never move, the three middle points live inside the design
// box and stay sorted along the chord axis. One generation runs crossover,
// mutation, fitness evaluation, roulette culling and replenishment with
// fresh random immigrants. The best chromosome is never culled or mutated.
#pragma once

#include "actm/beam_fem.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace actm::ga {

using fem::DesignBox;
using fem::KeyPoints;
using fem::Vec2;

using Rng = std::mt19937_64;

inline constexpr double kWorstFitness = std::numeric_limits<double>::infinity();

struct Chromosome {
    KeyPoints points;
    std::optional<double> fitness;  // empty until evaluated
};

struct GAConfig {
    int population_size = 30;
    double crossover_probability = 0.30;
    double mutation_mu = 1.0;
    double mutation_sigma = 0.01;
    double cull_fraction = 0.40;
    /// Generations evaluated, counting the initial pool as generation 0.
    int max_generations = 100;
    /// Absolute stop criterion on the best fitness.
    double fitness_threshold = 0.0;
    std::uint64_t rng_seed = 1;
    double fitness_epsilon = 1e-12;
    /// Worker threads for fitness evaluation; 0 picks hardware concurrency.
    int threads = 0;

    /// Throws ConfigError when a field is out of range.
    void validate() const;
};

/// Fixed part of the search: the box and the two pins (box-local).
struct SearchSpace {
    DesignBox box;
    Vec2 pin_start;
    Vec2 pin_end;

    Vec2 chord_axis() const;
};

/// Sorts the three middle points along the chord axis.
void sort_middle(KeyPoints &points, const Vec2 &chord_axis);

/// True when pins sit at the search-space pins, every point is inside the
/// box and the middle points are ordered along the chord axis.
bool satisfies_invariants(const Chromosome &c, const SearchSpace &space);

std::vector<Chromosome> init_population(const SearchSpace &space, const GAConfig &config, Rng &rng);

/// Random chromosome: middle points uniform in the box, then sorted.
Chromosome random_chromosome(const SearchSpace &space, Rng &rng);

/// Exchanges every key point after the 1-based cut index (2, 3 or 4)
/// between the parents; children are re-sorted along the chord axis.
std::pair<Chromosome, Chromosome> crossover_at(const Chromosome &a, const Chromosome &b, int cut,
                                               const SearchSpace &space);

/// crossover_at with the cut drawn uniformly from {2, 3, 4}.
std::pair<Chromosome, Chromosome> crossover(const Chromosome &a, const Chromosome &b,
                                            const SearchSpace &space, Rng &rng);

struct PairingStats {
    int pairs = 0;
    int crossed = 0;
};

/// Shuffles `pool`, pairs neighbours and crosses each pair with
/// probability crossover_probability; children replace their parents.
PairingStats crossover_pass(std::vector<Chromosome> &pool, const SearchSpace &space,
                            const GAConfig &config, Rng &rng);

/// Multiplies each box-local coordinate of the middle (third) key point by
/// an independent Normal(mu, sigma) draw, clamps to the box and re-sorts.
Chromosome mutate(const Chromosome &c, const SearchSpace &space, const GAConfig &config, Rng &rng);

/// Index of the chromosome with the lowest fitness (all must be evaluated).
std::size_t best_index(const std::vector<Chromosome> &population);

/// Removes ceil(cull_fraction * size) chromosomes by repeated roulette draws
/// with removal share proportional to fitness + epsilon. Infinite-fitness
/// chromosomes are removed first. The best chromosome always survives.
std::vector<Chromosome> select(std::vector<Chromosome> population, Rng &rng, const GAConfig &config);

using FitnessFn = std::function<double(const KeyPoints &)>;

struct Problem {
    SearchSpace space;
    FitnessFn fitness;
    /// Optional extra stop rule checked against the best chromosome.
    std::function<bool(const Chromosome &)> satisfied;
};

struct GenerationStats {
    int generation;
    double best_fitness;   // best ever so far
    double mean_fitness;   // over finite fitnesses in the pool; inf if none
    long evaluations;      // cumulative fitness evaluations
};

struct RunResult {
    Chromosome best;
    std::vector<GenerationStats> history;
    bool satisfied;  // stop rule met before max_generations
};

/// Throws NoFeasibleCandidate when nothing finite was ever found (including
/// max_generations == 0).
RunResult run(const GAConfig &config, const Problem &problem);

/// Analytic test landscape: sum of squared distances (m^2) between the middle
/// key points and those of `optimum`. Its minimum is 0 at `optimum`.
Problem quadratic_surrogate(const SearchSpace &space, const KeyPoints &optimum);

/// Evaluates the unevaluated chromosomes, possibly in parallel. Exceptions
/// from the fitness function score kWorstFitness.
long evaluate_population(std::vector<Chromosome> &population, const FitnessFn &fitness, int threads);

} // namespace actm::ga
