#include "agrasst/testing.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "agrasst/rng.hpp"
#include "agrasst/stein.hpp"
#include "agrasst/threads.hpp"

namespace agrasst {

namespace {

// Order statistic index ceil(q*m), 1-based; the tiny shift keeps exact
// integer products (e.g. 0.95*200) from drifting up a slot in floating point.
std::size_t quantile_index(double q, std::size_t m) {
    auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(m) - 1e-9));
    return std::clamp<std::size_t>(idx, 1, m);
}

void check_mc_params(std::size_t m, double alpha) {
    if (m < 1) throw std::invalid_argument("null sample count m must be at least 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
}

// Shared one-sided assembly: reject for large tau.
TestReport one_sided_report(std::string method, double tau, std::vector<double> null_taus,
                            double alpha) {
    std::sort(null_taus.begin(), null_taus.end());
    std::size_t m = null_taus.size();
    TestReport report;
    report.method = std::move(method);
    report.tau = tau;
    report.alpha = alpha;
    report.gamma = null_taus[quantile_index(1.0 - alpha, m) - 1];
    std::size_t ge = 0;
    for (double t : null_taus)
        if (t >= tau) ++ge;
    report.p_value = static_cast<double>(ge) / static_cast<double>(m);
    report.reject = tau > report.gamma;
    report.null_taus = std::move(null_taus);
    return report;
}

double degree_variance(const Graph& g) {
    int n = g.vertex_count();
    if (n < 2) return 0.0;
    auto deg = degree_vector(g);
    double mean = 0.0;
    for (int d : deg) mean += d;
    mean /= n;
    double ss = 0.0;
    for (int d : deg) ss += (d - mean) * (d - mean);
    return ss / (n - 1);
}

Eigen::VectorXd histogram_vector(const Graph& g) {
    auto hist = degree_histogram(g);
    Eigen::VectorXd v(hist.size());
    for (std::size_t d = 0; d < hist.size(); ++d) v[d] = hist[d];
    return v;
}

void check_source(const Graph& x, GraphSource& generator) {
    if (generator.vertex_count() != x.vertex_count())
        throw std::invalid_argument("generator vertex count does not match observed graph");
}

}  // namespace

nlohmann::json TestReport::to_json() const {
    nlohmann::json diagnostics{{"unseen_k_hits", unseen_k_hits},
                               {"null_unseen_k_hits", null_unseen_k_hits},
                               {"degenerate_fits", degenerate_fits}};
    if (gamma_lower) diagnostics["gamma_lower"] = *gamma_lower;
    nlohmann::json s = nlohmann::json::object();
    for (const auto& [name, value] : seeds) s[name] = value;
    return nlohmann::json{{"method", method},
                          {"tau", tau},
                          {"null_taus", null_taus},
                          {"gamma", gamma},
                          {"alpha", alpha},
                          {"p_value", p_value},
                          {"reject", reject},
                          {"seeds", s},
                          {"diagnostics", diagnostics}};
}

std::string TestReport::summary() const {
    std::ostringstream out;
    out << method << ": tau=" << tau << " gamma=" << gamma << " p=" << p_value << " -> "
        << (reject ? "REJECT" : "no rejection") << " at alpha=" << alpha;
    return out.str();
}

TestReport run_agrasst_test(const Graph& x, GraphSource& generator,
                            const AgrasstConfig& config) {
    check_source(x, generator);
    check_mc_params(config.m, config.alpha);
    if (config.L < 1) throw std::invalid_argument("estimation sample count L must be >= 1");
    if (config.B < 0) throw std::invalid_argument("resampling size B must be >= 0");

    std::vector<Graph> training = generator.take(config.L);
    ConditionalEstimate estimate =
        ConditionalEstimate::fit(training, config.kind, config.mode);
    EstimatedConditionalSource source(std::move(estimate));

    auto score = [&](const Graph& g, std::uint64_t stream) {
        if (config.B == 0) return gkss_full(source, config.kernel, g);
        return agrasst_resampled(source, config.kernel, g, config.B,
                                 derive_seed(config.seed, stream));
    };

    SteinStatistic observed = score(x, 0);

    std::vector<Graph> fresh = generator.take(config.m);
    std::vector<double> null_taus(config.m);
    std::vector<std::uint64_t> null_hits(config.m);
    parallel_for(config.m, config.threads, [&](std::size_t i) {
        SteinStatistic stat = score(fresh[i], 1 + i);
        null_taus[i] = stat.value;
        null_hits[i] = stat.unseen_k_hits;
    });

    std::string method = "agrasst:" + stat_name(config.kind) + ":" + mode_name(config.mode)
                         + ":" + config.kernel.to_string();
    TestReport report =
        one_sided_report(std::move(method), observed.value, std::move(null_taus),
                         config.alpha);
    report.seeds = {{"master", config.seed}, {"tau_resample", derive_seed(config.seed, 0)}};
    report.unseen_k_hits = observed.unseen_k_hits;
    for (std::uint64_t h : null_hits) report.null_unseen_k_hits += h;
    return report;
}

nlohmann::json BatchReport::to_json() const {
    return nlohmann::json{{"batch", index},
                          {"first_sample", first_sample},
                          {"count", samples.size()},
                          {"p_value", p_value},
                          {"accepted", accepted},
                          {"threshold", threshold}};
}

std::vector<BatchReport> select_batches(const Graph& x, GraphSource& generator,
                                        std::size_t batch_size, std::size_t max_batches,
                                        double threshold, const AgrasstConfig& config) {
    check_source(x, generator);
    if (batch_size < 1) throw std::invalid_argument("batch size must be at least 1");
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw std::invalid_argument("threshold must be in [0,1]");

    std::vector<Graph> training = generator.take(config.L);
    ConditionalEstimate estimate =
        ConditionalEstimate::fit(training, config.kind, config.mode);
    EstimatedConditionalSource source(std::move(estimate));

    auto score = [&](const Graph& g, std::uint64_t stream) {
        if (config.B == 0) return gkss_full(source, config.kernel, g);
        return agrasst_resampled(source, config.kernel, g, config.B,
                                 derive_seed(config.seed, stream));
    };
    double tau = score(x, 0).value;

    std::vector<BatchReport> reports;
    std::size_t drawn = config.L;
    for (std::size_t b = 0; b < max_batches; ++b) {
        if (auto left = generator.remaining(); left && *left < batch_size)
            break;  // finite source ran dry: report what we have
        BatchReport report;
        report.index = b;
        report.first_sample = drawn;
        report.threshold = threshold;
        report.samples = generator.take(batch_size);
        drawn += batch_size;

        std::vector<double> taus(batch_size);
        parallel_for(batch_size, config.threads, [&](std::size_t i) {
            taus[i] = score(report.samples[i], 1 + b * batch_size + i).value;
        });
        std::size_t ge = 0;
        for (double t : taus)
            if (t >= tau) ++ge;
        report.p_value = static_cast<double>(ge) / static_cast<double>(batch_size);
        report.accepted = report.p_value >= threshold;
        bool stop = report.accepted;
        reports.push_back(std::move(report));
        if (stop) break;
    }
    return reports;
}

TestReport baseline_deg(const Graph& x, GraphSource& generator, std::size_t m,
                        double alpha, std::uint64_t seed) {
    check_source(x, generator);
    check_mc_params(m, alpha);
    double tau = degree_variance(x);
    std::vector<double> taus;
    taus.reserve(m);
    for (Graph& g : generator.take(m)) taus.push_back(degree_variance(g));
    std::sort(taus.begin(), taus.end());

    TestReport report;
    report.method = "deg";
    report.tau = tau;
    report.alpha = alpha;
    // Two-sided band: degree variance can deviate in either direction.
    std::size_t j = quantile_index(alpha / 2.0, m);
    report.gamma_lower = taus[j - 1];
    report.gamma = taus[m - j];
    std::size_t ge = 0, le = 0;
    for (double t : taus) {
        if (t >= tau) ++ge;
        if (t <= tau) ++le;
    }
    double frac_ge = static_cast<double>(ge) / m;
    double frac_le = static_cast<double>(le) / m;
    report.p_value = std::min(1.0, 2.0 * std::min(frac_ge, frac_le));
    report.reject = tau > report.gamma || tau < *report.gamma_lower;
    report.null_taus = std::move(taus);
    report.seeds = {{"master", seed}};
    return report;
}

TestReport baseline_tv_deg(const Graph& x, GraphSource& generator, std::size_t L,
                           std::size_t m, double alpha, std::uint64_t seed) {
    check_source(x, generator);
    check_mc_params(m, alpha);
    if (L < 1) throw std::invalid_argument("reference sample count L must be >= 1");
    int n = x.vertex_count();
    Eigen::VectorXd ref = Eigen::VectorXd::Zero(n);
    for (Graph& g : generator.take(L)) ref += histogram_vector(g) / n;
    ref /= static_cast<double>(L);

    auto tv = [&](const Graph& g) {
        Eigen::VectorXd h = histogram_vector(g) / n;
        return 0.5 * (h - ref).cwiseAbs().sum();
    };
    double tau = tv(x);
    std::vector<double> taus;
    taus.reserve(m);
    for (Graph& g : generator.take(m)) taus.push_back(tv(g));

    TestReport report = one_sided_report("tvdeg", tau, std::move(taus), alpha);
    report.seeds = {{"master", seed}};
    return report;
}

TestReport baseline_mddeg(const Graph& x, GraphSource& generator, std::size_t L,
                          std::size_t m, double alpha, std::uint64_t seed) {
    check_source(x, generator);
    check_mc_params(m, alpha);
    if (L < 2) throw std::invalid_argument("moment sample count L must be >= 2");
    int n = x.vertex_count();

    std::vector<Eigen::VectorXd> feats;
    feats.reserve(L);
    for (Graph& g : generator.take(L)) feats.push_back(histogram_vector(g));
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
    for (const auto& f : feats) mu += f;
    mu /= static_cast<double>(L);
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(n, n);
    for (const auto& f : feats) {
        Eigen::VectorXd d = f - mu;
        sigma += d * d.transpose();
    }
    sigma /= static_cast<double>(L - 1);
    sigma += 1e-6 * Eigen::MatrixXd::Identity(n, n);  // ridge keeps it invertible
    Eigen::LDLT<Eigen::MatrixXd> solver(sigma);

    auto mahalanobis = [&](const Graph& g) {
        Eigen::VectorXd d = histogram_vector(g) - mu;
        return d.dot(solver.solve(d));
    };
    double tau = mahalanobis(x);
    std::vector<double> taus;
    taus.reserve(m);
    for (Graph& g : generator.take(m)) taus.push_back(mahalanobis(g));

    TestReport report = one_sided_report("mddeg", tau, std::move(taus), alpha);
    report.seeds = {{"master", seed}};
    return report;
}

namespace {

double log1pexp(double eta) {
    return std::max(eta, 0.0) + std::log1p(std::exp(-std::abs(eta)));
}

constexpr double kBetaClamp = 50.0;

}  // namespace

MpleResult fit_mple(const Graph& g, const std::vector<TermKind>& terms) {
    if (terms.empty()) throw std::invalid_argument("MPLE needs at least one term");
    for (TermKind kind : terms)
        if (kind == TermKind::Pattern)
            throw std::invalid_argument("pattern terms not supported in MPLE");
    auto N = static_cast<Eigen::Index>(g.pair_count());
    auto k = static_cast<Eigen::Index>(terms.size());
    if (N == 0) throw std::invalid_argument("graph has no vertex pairs");

    Eigen::MatrixXd X(N, k);
    Eigen::VectorXd y(N);
    for (Eigen::Index s = 0; s < N; ++s) {
        auto ps = static_cast<PairIndex>(s);
        for (Eigen::Index c = 0; c < k; ++c) {
            ErgmTerm term{terms[static_cast<std::size_t>(c)], 1.0, std::nullopt};
            X(s, c) = term_change(term, g, ps);
        }
        y[s] = g.edge_bit(ps) ? 1.0 : 0.0;
    }

    auto loglik = [&](const Eigen::VectorXd& beta) {
        Eigen::VectorXd eta = X * beta;
        double total = 0.0;
        for (Eigen::Index s = 0; s < N; ++s) total += y[s] * eta[s] - log1pexp(eta[s]);
        return total;
    };

    MpleResult result;
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
        result.iterations = it + 1;
        Eigen::VectorXd eta = X * beta;
        Eigen::VectorXd mu(N), w(N);
        for (Eigen::Index s = 0; s < N; ++s) {
            double e = eta[s] >= 0 ? 1.0 / (1.0 + std::exp(-eta[s]))
                                   : std::exp(eta[s]) / (1.0 + std::exp(eta[s]));
            mu[s] = e;
            w[s] = e * (1.0 - e);
        }
        Eigen::VectorXd grad = X.transpose() * (y - mu);
        if (grad.lpNorm<Eigen::Infinity>() < 1e-8) {
            converged = true;
            break;
        }
        Eigen::MatrixXd hessian = X.transpose() * w.asDiagonal() * X;
        hessian += 1e-10 * Eigen::MatrixXd::Identity(k, k);  // separation guard
        Eigen::VectorXd step = hessian.ldlt().solve(grad);
        if (!step.allFinite()) {
            result.degenerate = true;
            break;
        }
        double base = loglik(beta);
        double scale = 1.0;
        for (int half = 0; half < 40 && loglik(beta + scale * step) < base - 1e-12; ++half)
            scale *= 0.5;
        beta += scale * step;
        for (Eigen::Index c = 0; c < k; ++c) {
            if (std::abs(beta[c]) > kBetaClamp) {
                beta[c] = std::clamp(beta[c], -kBetaClamp, kBetaClamp);
                result.degenerate = true;
            }
        }
    }
    if (!converged && !result.degenerate) result.degenerate = true;
    // Separated data can pass the gradient test with the coefficients still
    // running towards infinity.  The tell: every edge indicator is fitted
    // perfectly, i.e. the pseudo-log-likelihood is numerically zero.
    if (loglik(beta) > -1e-8 * static_cast<double>(N)) result.degenerate = true;
    result.beta.assign(beta.data(), beta.data() + k);
    return result;
}

TestReport baseline_param(const Graph& x, GraphSource& generator, std::size_t L,
                          std::size_t m, double alpha, std::uint64_t seed,
                          const std::vector<TermKind>& terms) {
    check_source(x, generator);
    check_mc_params(m, alpha);
    if (L < 2) throw std::invalid_argument("moment sample count L must be >= 2");
    auto k = static_cast<Eigen::Index>(terms.size());

    int degenerate = 0;
    auto coeffs = [&](const Graph& g) {
        MpleResult fit = fit_mple(g, terms);
        if (fit.degenerate) ++degenerate;
        return Eigen::Map<Eigen::VectorXd>(fit.beta.data(), k).eval();
    };

    std::vector<Eigen::VectorXd> fits;
    fits.reserve(L);
    for (Graph& g : generator.take(L)) fits.push_back(coeffs(g));
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(k);
    for (const auto& f : fits) mu += f;
    mu /= static_cast<double>(L);
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(k, k);
    for (const auto& f : fits) {
        Eigen::VectorXd d = f - mu;
        sigma += d * d.transpose();
    }
    sigma /= static_cast<double>(L - 1);
    sigma += 1e-6 * Eigen::MatrixXd::Identity(k, k);
    Eigen::LDLT<Eigen::MatrixXd> solver(sigma);

    auto mahalanobis = [&](const Graph& g) {
        Eigen::VectorXd d = coeffs(g) - mu;
        return d.dot(solver.solve(d));
    };
    double tau = mahalanobis(x);
    std::vector<double> taus;
    taus.reserve(m);
    for (Graph& g : generator.take(m)) taus.push_back(mahalanobis(g));

    std::string method = "param:";
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) method += ",";
        switch (terms[i]) {
            case TermKind::Edges: method += "edges"; break;
            case TermKind::TwoStars: method += "twostars"; break;
            case TermKind::Triangles: method += "triangles"; break;
            case TermKind::Pattern: method += "pattern"; break;
        }
    }
    TestReport report = one_sided_report(std::move(method), tau, std::move(taus), alpha);
    report.seeds = {{"master", seed}};
    report.degenerate_fits = degenerate;
    return report;
}

}  // namespace agrasst
