#include "basketcheck/engine.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace basketcheck {

const char* solve_method_name(SolveMethod method) {
    switch (method) {
        case SolveMethod::Exact: return "exact";
        case SolveMethod::Power: return "power";
        case SolveMethod::Jacobi: return "jacobi";
        case SolveMethod::GaussSeidel: return "gauss-seidel";
    }
    return "?";
}

std::optional<SolveMethod> solve_method_from_name(std::string_view name) {
    if (name == "exact") return SolveMethod::Exact;
    if (name == "power") return SolveMethod::Power;
    if (name == "jacobi") return SolveMethod::Jacobi;
    if (name == "gauss-seidel") return SolveMethod::GaussSeidel;
    return std::nullopt;
}

namespace {

// Backward reachability: all states with a path into `seeds`. When `absorbed`
// is given, those states keep no outgoing edges (goal-absorbing transform).
StateSet backward_reachable(const Dtmc& dtmc, const StateSet& seeds, const StateSet* absorbed) {
    const std::size_t n = dtmc.state_count();
    std::vector<std::vector<StateIndex>> preds(n);
    for (StateIndex s = 0; s < n; ++s) {
        if (absorbed && absorbed->contains(s)) continue;
        for (const Transition& t : dtmc.rows[s]) {
            preds[t.target].push_back(s);
        }
    }
    StateSet reached(n);
    std::deque<StateIndex> queue;
    for (StateIndex s : seeds.indices()) {
        reached.insert(s);
        queue.push_back(s);
    }
    while (!queue.empty()) {
        StateIndex s = queue.front();
        queue.pop_front();
        for (StateIndex p : preds[s]) {
            if (!reached.contains(p)) {
                reached.insert(p);
                queue.push_back(p);
            }
        }
    }
    return reached;
}

}  // namespace

StateSet prob0(const Dtmc& dtmc, const StateSet& goal) {
    return backward_reachable(dtmc, goal, nullptr).complement();
}

StateSet prob1(const Dtmc& dtmc, const StateSet& goal) {
    // P(F goal) = 1 iff, once the goal is absorbing, no path leads into the
    // set of states that cannot reach the goal at all.
    StateSet zero = prob0(dtmc, goal);
    return backward_reachable(dtmc, zero, &goal).complement();
}

QualitativeSets qualitative_sets(const Dtmc& dtmc, const StateSet& goal) {
    QualitativeSets q;
    q.prob0 = prob0(dtmc, goal);
    q.prob1 = prob1(dtmc, goal);
    q.unknown = (q.prob0 | q.prob1).complement();
    return q;
}

namespace {

// x = A·x + b restricted to the unknown states, in local numbering.
struct LinearSystem {
    std::vector<StateIndex> unknown;               // local -> global
    std::vector<int> local;                        // global -> local, -1 elsewhere
    std::vector<std::vector<std::pair<int, double>>> coeffs;
    std::vector<double> offset;
};

LinearSystem assemble(const Dtmc& dtmc, const QualitativeSets& q) {
    LinearSystem sys;
    sys.unknown = q.unknown.indices();
    sys.local.assign(dtmc.state_count(), -1);
    for (std::size_t i = 0; i < sys.unknown.size(); ++i) {
        sys.local[sys.unknown[i]] = static_cast<int>(i);
    }
    sys.coeffs.resize(sys.unknown.size());
    sys.offset.assign(sys.unknown.size(), 0.0);
    for (std::size_t i = 0; i < sys.unknown.size(); ++i) {
        for (const Transition& t : dtmc.rows[sys.unknown[i]]) {
            if (q.prob1.contains(t.target)) {
                sys.offset[i] += t.prob;
            } else if (int j = sys.local[t.target]; j >= 0) {
                sys.coeffs[i].push_back({j, t.prob});
            }
        }
    }
    return sys;
}

struct IterationOutcome {
    std::size_t iterations = 0;
    double residual = 0.0;
};

IterationOutcome iterate(const LinearSystem& sys, SolveMethod method,
                         const SolveOptions& options, std::vector<double>& x) {
    const std::size_t n = sys.unknown.size();
    x.assign(n, 0.0);

    // Jacobi and Gauss-Seidel solve the diagonal exactly each sweep. A
    // diagonal entry of 1 would mean an absorbing non-goal state, which
    // qualitative precomputation already moved into prob0.
    std::vector<double> diag(n, 0.0);
    if (method != SolveMethod::Power) {
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto& [j, p] : sys.coeffs[i]) {
                if (static_cast<std::size_t>(j) == i) diag[i] = p;
            }
        }
    }

    const bool relative = options.convergence == ConvergenceNorm::Relative;
    // Successive-iterate max-norm; relative mode divides each step by the
    // updated entry. Iterates grow monotonically from 0, so a zero entry
    // always has a zero step.
    auto step_measure = [&](double updated, double previous) {
        double d = std::abs(updated - previous);
        if (!relative) return d;
        return d == 0.0 ? 0.0 : d / std::max(std::abs(updated), 1e-300);
    };

    std::vector<double> next(n, 0.0);
    double diff = 0.0;
    for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
        diff = 0.0;
        switch (method) {
            case SolveMethod::Power:
                for (std::size_t i = 0; i < n; ++i) {
                    double v = sys.offset[i];
                    for (const auto& [j, p] : sys.coeffs[i]) v += p * x[j];
                    next[i] = v;
                    diff = std::max(diff, step_measure(v, x[i]));
                }
                x.swap(next);
                break;
            case SolveMethod::Jacobi:
                for (std::size_t i = 0; i < n; ++i) {
                    double v = sys.offset[i];
                    for (const auto& [j, p] : sys.coeffs[i]) {
                        if (static_cast<std::size_t>(j) != i) v += p * x[j];
                    }
                    v /= (1.0 - diag[i]);
                    next[i] = v;
                    diff = std::max(diff, step_measure(v, x[i]));
                }
                x.swap(next);
                break;
            case SolveMethod::GaussSeidel:
                for (std::size_t i = 0; i < n; ++i) {
                    double v = sys.offset[i];
                    for (const auto& [j, p] : sys.coeffs[i]) {
                        if (static_cast<std::size_t>(j) != i) v += p * x[j];
                    }
                    v /= (1.0 - diag[i]);
                    diff = std::max(diff, step_measure(v, x[i]));
                    x[i] = v;
                }
                break;
            case SolveMethod::Exact:
                assert(false && "exact method does not iterate");
                break;
        }
        if (diff <= options.epsilon) {
            return {iter, diff};
        }
    }

    throw SolveError("solver did not converge within " +
                         std::to_string(options.max_iterations) + " iterations (method " +
                         solve_method_name(method) + ", residual " + std::to_string(diff) + ")",
                     options.max_iterations, diff);
}

// Rational Gaussian elimination on I - A. The system is nonsingular after
// prob0/prob1 restriction.
std::vector<Rational> solve_exact(const Dtmc& dtmc, const QualitativeSets& q) {
    std::vector<StateIndex> unknown = q.unknown.indices();
    std::vector<int> local(dtmc.state_count(), -1);
    for (std::size_t i = 0; i < unknown.size(); ++i) local[unknown[i]] = static_cast<int>(i);

    const std::size_t n = unknown.size();
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(0)));
    std::vector<Rational> rhs(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        m[i][i] = 1;
        for (const Transition& t : dtmc.rows[unknown[i]]) {
            if (q.prob1.contains(t.target)) {
                rhs[i] += t.exact;
            } else if (int j = local[t.target]; j >= 0) {
                m[i][static_cast<std::size_t>(j)] -= t.exact;
            }
        }
    }

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0) ++pivot;
        if (pivot == n) {
            throw std::logic_error("singular reachability system after qualitative precomputation");
        }
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            std::swap(rhs[pivot], rhs[col]);
        }
        for (std::size_t row = col + 1; row < n; ++row) {
            if (m[row][col] == 0) continue;
            Rational factor = m[row][col] / m[col][col];
            m[row][col] = 0;
            for (std::size_t k = col + 1; k < n; ++k) {
                m[row][k] -= factor * m[col][k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }

    std::vector<Rational> x(n);
    for (std::size_t row = n; row-- > 0;) {
        Rational v = rhs[row];
        for (std::size_t k = row + 1; k < n; ++k) {
            v -= m[row][k] * x[k];
        }
        x[row] = v / m[row][row];
    }

    std::vector<Rational> full(dtmc.state_count(), Rational(0));
    for (StateIndex s : q.prob1.indices()) full[s] = 1;
    for (std::size_t i = 0; i < n; ++i) full[unknown[i]] = x[i];
    return full;
}

double clamp_unit(double v) {
    return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

}  // namespace

ReachResult reach_probabilities(const Dtmc& dtmc, const StateSet& goal,
                                const SolveOptions& options) {
    QualitativeSets q = qualitative_sets(dtmc, goal);

    ReachResult result;
    result.method = options.method;
    result.values.assign(dtmc.state_count(), 0.0);
    for (StateIndex s : q.prob1.indices()) result.values[s] = 1.0;

    if (options.method == SolveMethod::Exact) {
        result.exact = solve_exact(dtmc, q);
        for (StateIndex s = 0; s < dtmc.state_count(); ++s) {
            result.values[s] = to_double(result.exact[s]);
        }
        return result;
    }

    if (q.unknown.empty()) {
        return result;
    }

    LinearSystem sys = assemble(dtmc, q);
    std::vector<double> x;
    IterationOutcome outcome = iterate(sys, options.method, options, x);
    result.iterations = outcome.iterations;
    result.residual = outcome.residual;
    for (std::size_t i = 0; i < sys.unknown.size(); ++i) {
        result.values[sys.unknown[i]] = clamp_unit(x[i]);
    }
    return result;
}

ProbVector bounded_reach_probabilities(const Dtmc& dtmc, const StateSet& goal, std::size_t k) {
    const std::size_t n = dtmc.state_count();
    ProbVector y(n, 0.0);
    for (StateIndex s : goal.indices()) y[s] = 1.0;
    ProbVector next(n, 0.0);
    for (std::size_t step = 0; step < k; ++step) {
        for (StateIndex s = 0; s < n; ++s) {
            if (goal.contains(s)) {
                next[s] = 1.0;  // goal states absorb
                continue;
            }
            double v = 0.0;
            for (const Transition& t : dtmc.rows[s]) v += t.prob * y[t.target];
            next[s] = v;
        }
        y.swap(next);
    }
    for (double& v : y) v = clamp_unit(v);
    return y;
}

std::vector<Rational> bounded_reach_exact(const Dtmc& dtmc, const StateSet& goal,
                                          std::size_t k) {
    const std::size_t n = dtmc.state_count();
    std::vector<Rational> y(n, Rational(0));
    for (StateIndex s : goal.indices()) y[s] = 1;
    std::vector<Rational> next(n, Rational(0));
    for (std::size_t step = 0; step < k; ++step) {
        for (StateIndex s = 0; s < n; ++s) {
            if (goal.contains(s)) {
                next[s] = 1;
                continue;
            }
            Rational v = 0;
            for (const Transition& t : dtmc.rows[s]) v += t.exact * y[t.target];
            next[s] = std::move(v);
        }
        y.swap(next);
    }
    return y;
}

ProbVector transient_distribution(const Dtmc& dtmc, std::size_t n) {
    ProbVector pi(dtmc.state_count(), 0.0);
    pi[dtmc.init_state] = 1.0;
    ProbVector next(dtmc.state_count(), 0.0);
    for (std::size_t step = 0; step < n; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (StateIndex s = 0; s < dtmc.state_count(); ++s) {
            if (pi[s] == 0.0) continue;
            for (const Transition& t : dtmc.rows[s]) {
                next[t.target] += pi[s] * t.prob;
            }
        }
        pi.swap(next);
    }
    for (double& v : pi) v = clamp_unit(v);
    return pi;
}

std::vector<std::pair<std::size_t, double>> curve(const Dtmc& dtmc, const StateSet& goal,
                                                  StateIndex from, std::size_t k_max) {
    const std::size_t n = dtmc.state_count();
    std::vector<std::pair<std::size_t, double>> points;
    points.reserve(k_max + 1);

    ProbVector y(n, 0.0);
    for (StateIndex s : goal.indices()) y[s] = 1.0;
    points.push_back({0, y[from]});

    ProbVector next(n, 0.0);
    for (std::size_t k = 1; k <= k_max; ++k) {
        for (StateIndex s = 0; s < n; ++s) {
            if (goal.contains(s)) {
                next[s] = 1.0;
                continue;
            }
            double v = 0.0;
            for (const Transition& t : dtmc.rows[s]) v += t.prob * y[t.target];
            next[s] = v;
        }
        y.swap(next);
        points.push_back({k, clamp_unit(y[from])});
    }
    return points;
}

VerificationResult check_property(const Dtmc& dtmc, const Property& property,
                                  const SolveOptions& options) {
    VerificationResult result;
    result.property = property;
    result.is_query = property.is_query;
    result.method = options.method;

    StateSet goal = satisfaction_set(dtmc, property.path.target);

    if (property.path.kind == PathFormula::Kind::Eventually) {
        ReachResult reach = reach_probabilities(dtmc, goal, options);
        result.state_values = std::move(reach.values);
        result.state_values_exact = std::move(reach.exact);
        result.iterations = reach.iterations;
        result.residual = reach.residual;
    } else {
        std::size_t k = static_cast<std::size_t>(property.path.bound);
        result.state_values = bounded_reach_probabilities(dtmc, goal, k);
        if (options.method == SolveMethod::Exact) {
            result.state_values_exact = bounded_reach_exact(dtmc, goal, k);
        }
        result.iterations = k;
    }

    const bool exact = !result.state_values_exact.empty();

    if (property.filter) {
        StateSet filter_set = satisfaction_set(dtmc, property.filter);
        if (filter_set.empty()) {
            throw ModelError("filter matches no states: " + to_string(property.filter));
        }
        result.eval_states = filter_set.indices();
    } else {
        result.eval_states = {dtmc.init_state};
    }

    if (!property.is_query) {
        auto satisfies = [&](StateIndex s) {
            if (exact) {
                const Rational& v = result.state_values_exact[s];
                switch (property.op) {
                    case BoundOp::Less: return v < property.threshold;
                    case BoundOp::LessEq: return v <= property.threshold;
                    case BoundOp::Greater: return v > property.threshold;
                    case BoundOp::GreaterEq: return v >= property.threshold;
                }
            }
            double v = result.state_values[s];
            double t = to_double(property.threshold);
            switch (property.op) {
                case BoundOp::Less: return v < t;
                case BoundOp::LessEq: return v <= t;
                case BoundOp::Greater: return v > t;
                case BoundOp::GreaterEq: return v >= t;
            }
            return false;
        };

        result.satisfying = StateSet(dtmc.state_count());
        for (StateIndex s = 0; s < dtmc.state_count(); ++s) {
            if (satisfies(s)) result.satisfying.insert(s);
        }
        bool verdict = true;
        for (StateIndex s : result.eval_states) {
            verdict = verdict && result.satisfying.contains(s);
        }
        result.verdict = verdict;
        if (property.filter) {
            result.context = verdict ? "property satisfied in all filter states"
                                     : "property not satisfied in all filter states";
        } else {
            result.context = verdict ? "property satisfied in the initial state"
                                     : "property not satisfied in the initial state";
        }
        return result;
    }

    if (result.eval_states.size() == 1) {
        StateIndex s = result.eval_states.front();
        result.value = result.state_values[s];
        if (exact) result.value_exact = result.state_values_exact[s];
        result.context = property.filter ? "value in the filter state"
                                         : "value in the initial state";
        return result;
    }

    result.value_min = 1.0;
    result.value_max = 0.0;
    for (StateIndex s : result.eval_states) {
        double v = result.state_values[s];
        result.filter_values.push_back({s, v});
        result.value_min = std::min(result.value_min, v);
        result.value_max = std::max(result.value_max, v);
    }
    result.context = "values in the filter states";
    return result;
}

}  // namespace basketcheck
