#include "aoi/shs.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace aoi {

namespace {

// Reciprocal condition estimate below which a solve is treated as singular.
// Near-zero loads (e.g. lambda2 = 1e-12) legitimately give estimates around
// 1e-14 because the ages of never-reset components blow up like 1/lambda2;
// accuracy is then enforced by the residual checks instead.
constexpr double kMinRcond = 1e-20;
constexpr double kBalanceTolerance = 1e-12;
constexpr double kCorrelationTolerance = 1e-10;

bool is_positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

double total_outgoing_rate(const ShsModel& model, const LoadPoint& loads, std::size_t state) {
    double total = 0.0;
    for (const auto& t : model.transitions) {
        if (t.from_state == state) total += loads.rate(t.rate);
    }
    return total;
}

std::vector<bool> reachable_from(const ShsModel& model, std::size_t start, bool reverse) {
    std::vector<bool> seen(model.num_states, false);
    std::vector<std::size_t> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
        const std::size_t q = stack.back();
        stack.pop_back();
        for (const auto& t : model.transitions) {
            const std::size_t from = reverse ? t.to_state : t.from_state;
            const std::size_t to = reverse ? t.from_state : t.to_state;
            if (from == q && !seen[to]) {
                seen[to] = true;
                stack.push_back(to);
            }
        }
    }
    return seen;
}

void require_solvable(const ShsModel& model) {
    for (const auto& d : validate_model(model)) {
        switch (d.kind) {
            case DiagnosticKind::UnusedRate:
                break;
            case DiagnosticKind::Unreachable:
                throw SingularSystem(model.name + ": non-ergodic model: " + d.message);
            default:
                throw InvalidModel(model.name + ": " + d.message);
        }
    }
}

Eigen::VectorXd solve_dense(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                            const std::string& what) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond > kMinRcond)) {
        std::ostringstream os;
        os << what << ": singular linear system (rcond " << rcond << ")";
        throw SingularSystem(os.str());
    }
    Eigen::VectorXd x = lu.solve(b);
    if (!x.allFinite()) throw SingularSystem(what + ": non-finite solution");
    return x;
}

}  // namespace

std::string to_string(RateSymbol rate) {
    switch (rate) {
        case RateSymbol::Lambda1: return "lambda1";
        case RateSymbol::Lambda2: return "lambda2";
        case RateSymbol::Mu: return "mu";
    }
    return "?";
}

LoadPoint::LoadPoint(double lambda1, double lambda2, double mu)
    : lambda1_(lambda1), lambda2_(lambda2), mu_(mu) {
    if (!is_positive_finite(lambda1) || !is_positive_finite(lambda2) || !is_positive_finite(mu)) {
        std::ostringstream os;
        os << "rates must be positive and finite (lambda1=" << lambda1 << ", lambda2=" << lambda2
           << ", mu=" << mu << ")";
        throw NonPositiveRate(os.str());
    }
}

LoadPoint LoadPoint::from_loads(double rho1, double rho2, double mu) {
    return LoadPoint(rho1 * mu, rho2 * mu, mu);
}

double LoadPoint::rate(RateSymbol symbol) const {
    switch (symbol) {
        case RateSymbol::Lambda1: return lambda1_;
        case RateSymbol::Lambda2: return lambda2_;
        case RateSymbol::Mu: return mu_;
    }
    return 0.0;
}

LoadPoint LoadPoint::scaled(double factor) const {
    if (!is_positive_finite(factor)) throw NonPositiveRate("scale factor must be positive");
    return LoadPoint(lambda1_ * factor, lambda2_ * factor, mu_ * factor);
}

ResetMap::ResetMap(std::size_t dim, std::vector<int> entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (entries_.size() != dim_ * dim_) throw InvalidModel("reset map is not square");
}

ResetMap ResetMap::from_sources(std::initializer_list<int> sources) {
    const std::size_t n = sources.size();
    std::vector<int> entries(n * n, 0);
    std::size_t col = 0;
    for (int src : sources) {
        if (src != kZero) {
            if (src < 0 || static_cast<std::size_t>(src) >= n) {
                throw InvalidModel("reset source index out of range");
            }
            entries[static_cast<std::size_t>(src) * n + col] = 1;
        }
        ++col;
    }
    return ResetMap(n, std::move(entries));
}

ResetMap ResetMap::identity(std::size_t dim) {
    std::vector<int> entries(dim * dim, 0);
    for (std::size_t i = 0; i < dim; ++i) entries[i * dim + i] = 1;
    return ResetMap(dim, std::move(entries));
}

bool ResetMap::is_binary() const {
    return std::all_of(entries_.begin(), entries_.end(), [](int e) { return e == 0 || e == 1; });
}

std::vector<double> ResetMap::apply(const std::vector<double>& x) const {
    std::vector<double> out(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) out[j] += x[i] * at(i, j);
    }
    return out;
}

ShsModel ShsModel::with_unit_growth(std::string name, std::size_t num_states, std::size_t age_dim,
                                    std::vector<Transition> transitions) {
    ShsModel model;
    model.name = std::move(name);
    model.num_states = num_states;
    model.age_dim = age_dim;
    model.transitions = std::move(transitions);
    model.growth.assign(num_states, std::vector<int>(age_dim, 1));
    return model;
}

const Transition* ShsModel::find(int index) const {
    for (const auto& t : transitions) {
        if (t.index == index) return &t;
    }
    return nullptr;
}

std::vector<Diagnostic> validate_model(const ShsModel& model) {
    std::vector<Diagnostic> out;
    auto report = [&out](DiagnosticKind kind, std::string message) {
        out.push_back({kind, std::move(message)});
    };

    if (model.num_states == 0 || model.age_dim == 0) {
        report(DiagnosticKind::BadDimension, "model has no states or no age components");
        return out;
    }
    if (model.growth.size() != model.num_states) {
        report(DiagnosticKind::BadDimension, "growth vector count differs from state count");
    } else {
        for (std::size_t q = 0; q < model.num_states; ++q) {
            const auto& b = model.growth[q];
            if (b.size() != model.age_dim) {
                report(DiagnosticKind::BadDimension,
                       "growth vector of state " + std::to_string(q) + " has wrong length");
            } else if (!std::all_of(b.begin(), b.end(), [](int e) { return e == 0 || e == 1; })) {
                report(DiagnosticKind::NonBinaryGrowth,
                       "non-binary growth vector in state " + std::to_string(q));
            }
        }
    }

    bool indices_ok = true;
    std::array<bool, 3> used{};
    for (const auto& t : model.transitions) {
        const std::string label = "transition l=" + std::to_string(t.index);
        if (t.from_state >= model.num_states || t.to_state >= model.num_states) {
            report(DiagnosticKind::StateOutOfRange, label + " references a state out of range");
            indices_ok = false;
        }
        if (t.reset.dim() != model.age_dim) {
            report(DiagnosticKind::BadDimension, label + " has a reset map of wrong dimension");
        } else if (!t.reset.is_binary()) {
            report(DiagnosticKind::NonBinaryReset, label + " has a non-binary reset map");
        }
        used[static_cast<std::size_t>(t.rate)] = true;
    }
    for (auto symbol : {RateSymbol::Lambda1, RateSymbol::Lambda2, RateSymbol::Mu}) {
        if (!used[static_cast<std::size_t>(symbol)]) {
            report(DiagnosticKind::UnusedRate, "rate symbol " + to_string(symbol) + " is never used");
        }
    }
    if (!indices_ok) return out;

    // Strongly connected iff every state is reachable from state 0 and can
    // reach state 0.
    const auto forward = reachable_from(model, 0, false);
    const auto backward = reachable_from(model, 0, true);
    for (std::size_t q = 1; q < model.num_states; ++q) {
        if (!forward[q]) {
            report(DiagnosticKind::Unreachable,
                   "state " + std::to_string(q) + " unreachable from state 0");
        }
    }
    for (std::size_t q = 1; q < model.num_states; ++q) {
        if (!backward[q]) {
            report(DiagnosticKind::Unreachable,
                   "state 0 unreachable from state " + std::to_string(q));
        }
    }
    return out;
}

std::vector<double> CorrelationMatrix::first_column() const {
    std::vector<double> col(num_states);
    for (std::size_t q = 0; q < num_states; ++q) col[q] = at(q, 0);
    return col;
}

StationaryDistribution stationary_distribution(const ShsModel& model, const LoadPoint& loads) {
    require_solvable(model);
    const auto m = static_cast<Eigen::Index>(model.num_states);

    // Row q: pi_q * sum_{out} rate - sum_{in} rate * pi_from = 0.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    for (const auto& t : model.transitions) {
        const double r = loads.rate(t.rate);
        const auto from = static_cast<Eigen::Index>(t.from_state);
        const auto to = static_cast<Eigen::Index>(t.to_state);
        a(from, from) += r;
        a(to, from) -= r;
    }
    a.row(0).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    b(0) = 1.0;

    const Eigen::VectorXd x = solve_dense(a, b, model.name + " balance equations");

    StationaryDistribution pi;
    pi.probabilities.resize(model.num_states);
    for (Eigen::Index q = 0; q < m; ++q) {
        double p = x(q);
        if (p < -kNonnegativitySlack) {
            throw SingularSystem(model.name + ": negative stationary probability");
        }
        pi.probabilities[static_cast<std::size_t>(q)] = std::max(p, 0.0);
    }
    if (const double r = balance_residual(model, loads, pi); !(r <= kBalanceTolerance)) {
        std::ostringstream os;
        os << model.name << ": balance residual " << r << " exceeds tolerance";
        throw SingularSystem(os.str());
    }
    return pi;
}

CorrelationMatrix correlation_vectors(const ShsModel& model, const LoadPoint& loads,
                                      const StationaryDistribution& pi) {
    require_solvable(model);
    if (pi.probabilities.size() != model.num_states) {
        throw InvalidModel(model.name + ": stationary vector has wrong length");
    }
    const std::size_t n = model.age_dim;
    const auto size = static_cast<Eigen::Index>(model.num_states * n);
    auto unknown = [n](std::size_t q, std::size_t j) { return static_cast<Eigen::Index>(q * n + j); };

    // Row (q, j): v_qj * sum_{out} rate - sum_{in} rate * (v_from A)_j = b_qj pi_q.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size, size);
    Eigen::VectorXd rhs(size);
    for (std::size_t q = 0; q < model.num_states; ++q) {
        const double out = total_outgoing_rate(model, loads, q);
        for (std::size_t j = 0; j < n; ++j) {
            a(unknown(q, j), unknown(q, j)) += out;
            rhs(unknown(q, j)) = model.growth[q][j] * pi.probabilities[q];
        }
    }
    for (const auto& t : model.transitions) {
        const double r = loads.rate(t.rate);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (t.reset.at(i, j) != 0) {
                    a(unknown(t.to_state, j), unknown(t.from_state, i)) -= r * t.reset.at(i, j);
                }
            }
        }
    }

    const Eigen::VectorXd x = solve_dense(a, rhs, model.name + " correlation equations");

    CorrelationMatrix v;
    v.num_states = model.num_states;
    v.age_dim = n;
    v.values.resize(static_cast<std::size_t>(size));
    for (Eigen::Index k = 0; k < size; ++k) {
        const double value = x(k);
        if (value < -kNonnegativitySlack) {
            std::ostringstream os;
            os << model.name << ": correlation entry v_" << k / static_cast<Eigen::Index>(n)
               << k % static_cast<Eigen::Index>(n) << " = " << value << " is negative";
            throw NegativeSolution(os.str());
        }
        v.values[static_cast<std::size_t>(k)] = std::max(value, 0.0);
    }
    if (const double r = correlation_residual(model, loads, pi, v); !(r <= kCorrelationTolerance)) {
        std::ostringstream os;
        os << model.name << ": correlation residual " << r << " exceeds tolerance";
        throw SingularSystem(os.str());
    }
    return v;
}

double average_aoi(const ShsModel& model, const LoadPoint& loads) {
    const auto pi = stationary_distribution(model, loads);
    const auto v = correlation_vectors(model, loads, pi);
    double sum = 0.0;
    for (std::size_t q = 0; q < v.num_states; ++q) sum += v.at(q, 0);
    return sum;
}

double balance_residual(const ShsModel& model, const LoadPoint& loads,
                        const StationaryDistribution& pi) {
    double worst = 0.0;
    for (std::size_t q = 0; q < model.num_states; ++q) {
        const double lhs = pi.probabilities[q] * total_outgoing_rate(model, loads, q);
        double rhs = 0.0;
        double scale = std::abs(lhs);
        for (const auto& t : model.transitions) {
            if (t.to_state != q) continue;
            const double term = loads.rate(t.rate) * pi.probabilities[t.from_state];
            rhs += term;
            scale = std::max(scale, std::abs(term));
        }
        if (scale > 0.0) worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    return worst;
}

double correlation_residual(const ShsModel& model, const LoadPoint& loads,
                            const StationaryDistribution& pi, const CorrelationMatrix& v) {
    const std::size_t n = model.age_dim;
    double worst = 0.0;
    for (std::size_t q = 0; q < model.num_states; ++q) {
        const double out = total_outgoing_rate(model, loads, q);
        std::vector<double> rhs(n);
        std::vector<double> scale(n);
        for (std::size_t j = 0; j < n; ++j) {
            rhs[j] = model.growth[q][j] * pi.probabilities[q];
            scale[j] = std::max(std::abs(rhs[j]), std::abs(v.at(q, j) * out));
        }
        for (const auto& t : model.transitions) {
            if (t.to_state != q) continue;
            std::vector<double> from(v.values.begin() + static_cast<std::ptrdiff_t>(t.from_state * n),
                                     v.values.begin() + static_cast<std::ptrdiff_t>((t.from_state + 1) * n));
            const auto mapped = t.reset.apply(from);
            const double r = loads.rate(t.rate);
            for (std::size_t j = 0; j < n; ++j) {
                rhs[j] += r * mapped[j];
                scale[j] = std::max(scale[j], std::abs(r * mapped[j]));
            }
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (scale[j] > 0.0) {
                worst = std::max(worst, std::abs(v.at(q, j) * out - rhs[j]) / scale[j]);
            }
        }
    }
    return worst;
}

}  // namespace aoi
