#include "actm/ga.hpp"

#include "actm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

namespace actm::ga {

void GAConfig::validate() const {
    if (population_size < 4) {
        throw ConfigError("population_size must be at least 4");
    }
    if (!(crossover_probability >= 0.0 && crossover_probability <= 1.0)) {
        throw ConfigError("crossover_probability must lie in [0, 1]");
    }
    if (!(mutation_sigma >= 0.0) || !std::isfinite(mutation_mu)) {
        throw ConfigError("mutation parameters must be finite with sigma >= 0");
    }
    if (!(cull_fraction > 0.0 && cull_fraction < 1.0)) {
        throw ConfigError("cull_fraction must lie in (0, 1)");
    }
    if (max_generations < 0) {
        throw ConfigError("max_generations must be non-negative");
    }
    if (!(fitness_epsilon > 0.0)) {
        throw ConfigError("fitness_epsilon must be positive");
    }
    if (threads < 0) {
        throw ConfigError("threads must be non-negative");
    }
}

Vec2 SearchSpace::chord_axis() const {
    const Vec2 d = pin_end - pin_start;
    const double len = d.norm();
    if (!(len > 0.0)) {
        throw ShapeError("pins coincide");
    }
    return d / len;
}

void sort_middle(KeyPoints &points, const Vec2 &chord_axis) {
    std::sort(points.begin() + 1, points.end() - 1, [&](const Vec2 &a, const Vec2 &b) {
        return a.dot(chord_axis) < b.dot(chord_axis);
    });
}

bool satisfies_invariants(const Chromosome &c, const SearchSpace &space) {
    const auto &p = c.points;
    if (p.front() != space.pin_start || p.back() != space.pin_end) {
        return false;
    }
    for (const Vec2 &q : p) {
        if (!space.box.contains(q)) {
            return false;
        }
    }
    const Vec2 axis = space.chord_axis();
    for (std::size_t i = 2; i + 1 < p.size(); ++i) {
        if (p[i].dot(axis) < p[i - 1].dot(axis)) {
            return false;
        }
    }
    return true;
}

Chromosome random_chromosome(const SearchSpace &space, Rng &rng) {
    std::uniform_real_distribution<double> ux(0.0, space.box.width);
    std::uniform_real_distribution<double> uy(0.0, space.box.height);
    Chromosome c;
    c.points.front() = space.pin_start;
    c.points.back() = space.pin_end;
    for (std::size_t i = 1; i + 1 < c.points.size(); ++i) {
        const double x = ux(rng);
        const double y = uy(rng);
        c.points[i] = Vec2(x, y);
    }
    sort_middle(c.points, space.chord_axis());
    return c;
}

std::vector<Chromosome> init_population(const SearchSpace &space, const GAConfig &config, Rng &rng) {
    std::vector<Chromosome> pool;
    pool.reserve(static_cast<std::size_t>(config.population_size));
    for (int i = 0; i < config.population_size; ++i) {
        pool.push_back(random_chromosome(space, rng));
    }
    return pool;
}

std::pair<Chromosome, Chromosome> crossover_at(const Chromosome &a, const Chromosome &b, int cut,
                                               const SearchSpace &space) {
    if (cut < 2 || cut > 4) {
        throw DomainError("crossover cut index must be 2, 3 or 4");
    }
    Chromosome c1{a.points, std::nullopt};
    Chromosome c2{b.points, std::nullopt};
    for (std::size_t i = static_cast<std::size_t>(cut); i < fem::kKeyPoints; ++i) {
        c1.points[i] = b.points[i];
        c2.points[i] = a.points[i];
    }
    const Vec2 axis = space.chord_axis();
    sort_middle(c1.points, axis);
    sort_middle(c2.points, axis);
    // Unchanged children keep their parent's cached fitness.
    if (c1.points == a.points) {
        c1.fitness = a.fitness;
    }
    if (c2.points == b.points) {
        c2.fitness = b.fitness;
    }
    return {c1, c2};
}

std::pair<Chromosome, Chromosome> crossover(const Chromosome &a, const Chromosome &b,
                                            const SearchSpace &space, Rng &rng) {
    std::uniform_int_distribution<int> pick(2, 4);
    return crossover_at(a, b, pick(rng), space);
}

PairingStats crossover_pass(std::vector<Chromosome> &pool, const SearchSpace &space,
                            const GAConfig &config, Rng &rng) {
    PairingStats stats;
    std::shuffle(pool.begin(), pool.end(), rng);
    std::bernoulli_distribution coin(config.crossover_probability);
    for (std::size_t i = 0; i + 1 < pool.size(); i += 2) {
        ++stats.pairs;
        if (coin(rng)) {
            ++stats.crossed;
            auto [c1, c2] = crossover(pool[i], pool[i + 1], space, rng);
            pool[i] = std::move(c1);
            pool[i + 1] = std::move(c2);
        }
    }
    return stats;
}

Chromosome mutate(const Chromosome &c, const SearchSpace &space, const GAConfig &config, Rng &rng) {
    Chromosome out{c.points, std::nullopt};
    std::normal_distribution<double> factor(config.mutation_mu, config.mutation_sigma);
    Vec2 &mid = out.points[2];
    const double fx = config.mutation_sigma > 0.0 ? factor(rng) : config.mutation_mu;
    const double fy = config.mutation_sigma > 0.0 ? factor(rng) : config.mutation_mu;
    mid = space.box.clamp(Vec2(mid.x() * fx, mid.y() * fy));
    sort_middle(out.points, space.chord_axis());
    if (out.points == c.points) {
        out.fitness = c.fitness;
    }
    return out;
}

std::size_t best_index(const std::vector<Chromosome> &population) {
    if (population.empty()) {
        throw DomainError("empty population");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < population.size(); ++i) {
        if (population[i].fitness.value() < population[best].fitness.value()) {
            best = i;
        }
    }
    return best;
}

std::vector<Chromosome> select(std::vector<Chromosome> population, Rng &rng, const GAConfig &config) {
    const std::size_t n = population.size();
    const auto to_remove = static_cast<std::size_t>(std::ceil(config.cull_fraction * static_cast<double>(n) - 1e-9));
    const std::size_t elite = best_index(population);

    std::vector<std::size_t> alive(n);
    std::iota(alive.begin(), alive.end(), 0);
    alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(elite));
    std::vector<char> removed(n, 0);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t r = 0; r < to_remove && !alive.empty(); ++r) {
        std::vector<std::size_t> infinite;
        for (std::size_t k = 0; k < alive.size(); ++k) {
            if (!std::isfinite(population[alive[k]].fitness.value())) {
                infinite.push_back(k);
            }
        }
        std::size_t pick = 0;
        if (!infinite.empty()) {
            std::uniform_int_distribution<std::size_t> any(0, infinite.size() - 1);
            pick = infinite[any(rng)];
        } else {
            double total = 0.0;
            for (std::size_t idx : alive) {
                total += population[idx].fitness.value() + config.fitness_epsilon;
            }
            double ball = unit(rng) * total;
            pick = alive.size() - 1;
            for (std::size_t k = 0; k < alive.size(); ++k) {
                ball -= population[alive[k]].fitness.value() + config.fitness_epsilon;
                if (ball < 0.0) {
                    pick = k;
                    break;
                }
            }
        }
        removed[alive[pick]] = 1;
        alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(pick));
    }

    std::vector<Chromosome> survivors;
    survivors.reserve(n - to_remove);
    for (std::size_t i = 0; i < n; ++i) {
        if (!removed[i]) {
            survivors.push_back(std::move(population[i]));
        }
    }
    return survivors;
}

long evaluate_population(std::vector<Chromosome> &population, const FitnessFn &fitness, int threads) {
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < population.size(); ++i) {
        if (!population[i].fitness) {
            todo.push_back(i);
        }
    }
    auto eval_one = [&](std::size_t i) {
        double f = kWorstFitness;
        try {
            f = fitness(population[i].points);
        } catch (const std::exception &) {
            f = kWorstFitness;
        }
        if (std::isnan(f) || f < 0.0) {
            f = kWorstFitness;
        }
        population[i].fitness = f;
    };

    unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(todo.size())));
    if (workers <= 1) {
        for (std::size_t i : todo) {
            eval_one(i);
        }
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t k = w; k < todo.size(); k += workers) {
                    eval_one(todo[k]);
                }
            });
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    return static_cast<long>(todo.size());
}

namespace {

GenerationStats stats_for(int generation, const std::vector<Chromosome> &pool, double best_ever, long evals) {
    double sum = 0.0;
    int finite = 0;
    for (const auto &c : pool) {
        if (std::isfinite(*c.fitness)) {
            sum += *c.fitness;
            ++finite;
        }
    }
    return {generation, best_ever, finite > 0 ? sum / finite : kWorstFitness, evals};
}

} // namespace

RunResult run(const GAConfig &config, const Problem &problem) {
    config.validate();
    if (config.max_generations == 0) {
        throw NoFeasibleCandidate("max_generations is 0: no search performed");
    }
    Rng rng(config.rng_seed);
    RunResult result;
    result.satisfied = false;

    std::vector<Chromosome> pool = init_population(problem.space, config, rng);
    long evaluations = evaluate_population(pool, problem.fitness, config.threads);
    result.best = pool[best_index(pool)];
    result.history.push_back(stats_for(0, pool, *result.best.fitness, evaluations));

    auto stop = [&] {
        if (!std::isfinite(*result.best.fitness)) {
            return false;
        }
        if (*result.best.fitness <= config.fitness_threshold) {
            return true;
        }
        return problem.satisfied && problem.satisfied(result.best);
    };

    for (int gen = 1; gen < config.max_generations && !(result.satisfied = stop()); ++gen) {
        const std::size_t elite_idx = best_index(pool);
        Chromosome elite = pool[elite_idx];
        std::vector<Chromosome> others;
        others.reserve(pool.size() - 1);
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (i != elite_idx) {
                others.push_back(std::move(pool[i]));
            }
        }

        crossover_pass(others, problem.space, config, rng);
        for (auto &c : others) {
            c = mutate(c, problem.space, config, rng);
        }

        pool.clear();
        pool.push_back(std::move(elite));
        pool.insert(pool.end(), std::make_move_iterator(others.begin()), std::make_move_iterator(others.end()));
        evaluations += evaluate_population(pool, problem.fitness, config.threads);

        pool = select(std::move(pool), rng, config);
        while (static_cast<int>(pool.size()) < config.population_size) {
            pool.push_back(random_chromosome(problem.space, rng));
        }
        evaluations += evaluate_population(pool, problem.fitness, config.threads);

        const Chromosome &gen_best = pool[best_index(pool)];
        if (*gen_best.fitness < *result.best.fitness) {
            result.best = gen_best;
        }
        result.history.push_back(stats_for(gen, pool, *result.best.fitness, evaluations));
    }
    if (!result.satisfied) {
        result.satisfied = stop();
    }

    if (!std::isfinite(*result.best.fitness)) {
        throw NoFeasibleCandidate("every candidate in every generation scored the worst fitness");
    }
    return result;
}

Problem quadratic_surrogate(const SearchSpace &space, const KeyPoints &optimum) {
    Problem p;
    p.space = space;
    p.fitness = [optimum](const KeyPoints &k) {
        double sum = 0.0;
        for (std::size_t i = 1; i + 1 < k.size(); ++i) {
            sum += (k[i] - optimum[i]).squaredNorm();
        }
        return sum;
    };
    return p;
}

} // namespace actm::ga
