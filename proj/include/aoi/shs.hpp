#pragma once

// Stochastic hybrid system (SHS) models of age-of-information queues and a
// dense numerical solver for their stationary quantities.
//
// A model couples a finite continuous-time Markov chain over discrete states
// 0..m with a continuous age vector x of length n+1. Each transition fires at
// one of three symbolic rates and maps x' = x * A through a binary reset
// matrix A. The average age of the tracked source is the sum over states of
// the first component of the stationary correlation vectors.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "aoi/errors.hpp"

namespace aoi {

enum class RateSymbol : std::uint8_t { Lambda1, Lambda2, Mu };

std::string to_string(RateSymbol rate);

/// Arrival rates of the two sources and the service rate, all per unit time.
class LoadPoint {
public:
    /// Throws NonPositiveRate unless every rate is strictly positive and finite.
    LoadPoint(double lambda1, double lambda2, double mu);

    /// Builds the load point with lambda_c = rho_c * mu.
    static LoadPoint from_loads(double rho1, double rho2, double mu);

    double lambda1() const { return lambda1_; }
    double lambda2() const { return lambda2_; }
    double mu() const { return mu_; }
    double rho1() const { return lambda1_ / mu_; }
    double rho2() const { return lambda2_ / mu_; }
    double rho() const { return rho1() + rho2(); }

    double rate(RateSymbol symbol) const;

    /// Same service rate, arrival rates of the two sources exchanged.
    LoadPoint swapped() const { return LoadPoint(lambda2_, lambda1_, mu_); }

    /// All three rates multiplied by factor (> 0).
    LoadPoint scaled(double factor) const;

    bool operator==(const LoadPoint&) const = default;

private:
    double lambda1_;
    double lambda2_;
    double mu_;
};

/// Square binary matrix applied as x' = x * A. Stored row-major with integer
/// entries so that malformed (non-binary) maps can be represented and
/// diagnosed rather than silently coerced.
class ResetMap {
public:
    /// Sentinel for from_sources: the component is reset to zero.
    static constexpr int kZero = -1;

    ResetMap() = default;
    ResetMap(std::size_t dim, std::vector<int> entries);

    /// Builds A from the "x' = [x_a x_b 0 ...]" notation: sources[j] is the
    /// index i with x'_j = x_i, or kZero.
    static ResetMap from_sources(std::initializer_list<int> sources);
    static ResetMap identity(std::size_t dim);

    std::size_t dim() const { return dim_; }
    int at(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
    const std::vector<int>& entries() const { return entries_; }
    bool is_binary() const;

    /// Computes x * A.
    std::vector<double> apply(const std::vector<double>& x) const;

    bool operator==(const ResetMap&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<int> entries_;
};

struct Transition {
    int index = 0;  ///< 1-based row label l, kept for traceability
    std::size_t from_state = 0;
    std::size_t to_state = 0;
    RateSymbol rate = RateSymbol::Mu;
    ResetMap reset;

    bool operator==(const Transition&) const = default;
};

struct ShsModel {
    std::string name;
    std::size_t num_states = 0;
    std::size_t age_dim = 0;
    std::vector<Transition> transitions;
    /// growth[q][j] == 1 when x_j grows at unit rate in state q.
    std::vector<std::vector<int>> growth;

    /// Model whose every age component grows in every state.
    static ShsModel with_unit_growth(std::string name, std::size_t num_states, std::size_t age_dim,
                                     std::vector<Transition> transitions);

    const Transition* find(int index) const;
};

enum class DiagnosticKind : std::uint8_t {
    BadDimension,
    StateOutOfRange,
    NonBinaryReset,
    NonBinaryGrowth,
    UnusedRate,
    Unreachable,
};

struct Diagnostic {
    DiagnosticKind kind;
    std::string message;
};

/// Structural checks: index ranges, dimensions, binary reset/growth entries,
/// unused rate symbols and strong connectivity of the state graph. Never
/// throws; an empty result means the model is well formed.
std::vector<Diagnostic> validate_model(const ShsModel& model);

struct StationaryDistribution {
    std::vector<double> probabilities;
};

/// Row q holds the stationary correlation vector v_q.
struct CorrelationMatrix {
    std::size_t num_states = 0;
    std::size_t age_dim = 0;
    std::vector<double> values;  ///< row-major, num_states x age_dim

    double at(std::size_t state, std::size_t component) const {
        return values[state * age_dim + component];
    }
    /// First column: v_q0 for every state.
    std::vector<double> first_column() const;
};

/// Absolute tolerance below zero tolerated (and clamped) in solutions.
inline constexpr double kNonnegativitySlack = 1e-9;

/// Solves the global balance equations with the state-0 equation replaced by
/// normalization. Throws SingularSystem for malformed or non-ergodic models.
StationaryDistribution stationary_distribution(const ShsModel& model, const LoadPoint& loads);

/// Solves the stationary correlation system for all v_q.
/// Throws SingularSystem or NegativeSolution.
CorrelationMatrix correlation_vectors(const ShsModel& model, const LoadPoint& loads,
                                      const StationaryDistribution& pi);

/// Sum of v_q0 over all states: the average age of the tracked source.
double average_aoi(const ShsModel& model, const LoadPoint& loads);

/// Largest relative residual of the balance equations at pi.
double balance_residual(const ShsModel& model, const LoadPoint& loads,
                        const StationaryDistribution& pi);

/// Largest relative residual of the correlation equations at v.
double correlation_residual(const ShsModel& model, const LoadPoint& loads,
                            const StationaryDistribution& pi, const CorrelationMatrix& v);

}  // namespace aoi
