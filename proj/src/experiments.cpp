#include "envylab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "envylab/theory.hpp"

namespace envylab {

namespace {

std::uint64_t mechanism_id(Mechanism m) {
    switch (m) {
        case Mechanism::da: return 1;
        case Mechanism::rsd: return 2;
        case Mechanism::ttc: return 3;
    }
    return 0;
}

unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

struct Metrics {
    std::vector<index_t> ranks;
    EnvyDegrees degrees;
};

ReplicationRecord summarise(index_t n, Mechanism mechanism, std::uint64_t seed, const std::vector<index_t>& ranks,
                            const std::vector<std::size_t>& in_degrees, const std::vector<std::size_t>& out_degrees,
                            std::uint64_t proposals) {
    ReplicationRecord r;
    r.n = n;
    r.mechanism = mechanism;
    r.seed = seed;
    r.total_proposals = proposals;
    r.unenvied = static_cast<std::uint64_t>(std::count(in_degrees.begin(), in_degrees.end(), std::size_t{0}));
    r.envy_nobody = static_cast<std::uint64_t>(std::count(out_degrees.begin(), out_degrees.end(), std::size_t{0}));
    std::uint64_t rank_sum = 0;
    for (index_t k : ranks) {
        rank_sum += k;
        r.top_choice += k == 1;
    }
    r.mean_rank = static_cast<double>(rank_sum) / static_cast<double>(n);
    return r;
}

}  // namespace

std::string_view to_string(Metric m) {
    switch (m) {
        case Metric::unenvied: return "unenvied";
        case Metric::envy_nobody: return "envy_nobody";
        case Metric::mean_rank: return "mean_rank";
        case Metric::top_choice: return "top_choice";
    }
    return "?";
}

Metric parse_metric(std::string_view name) {
    for (auto m : {Metric::unenvied, Metric::envy_nobody, Metric::mean_rank, Metric::top_choice}) {
        if (to_string(m) == name) return m;
    }
    throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

std::vector<index_t> default_sizes() { return {10, 25, 50, 100, 250, 500, 1000}; }

void ExperimentConfig::validate() const {
    if (sizes.empty()) throw std::invalid_argument("sizes must be nonempty");
    for (auto n : sizes) {
        if (n < 1) throw std::invalid_argument("sizes must be ≥ 1");
    }
    if (replications < 1) throw std::invalid_argument("replications must be ≥ 1");
    if (mechanisms.empty()) throw std::invalid_argument("mechanisms must be nonempty");
    if (metrics.empty()) throw std::invalid_argument("metrics must be nonempty");
}

bool AggregateRecord::within_std_errors(double k) const {
    if (!std_error_defined()) return mean == prediction;
    return std::abs(mean - prediction) <= k * std_error;
}

bool operator==(const AggregateRecord& a, const AggregateRecord& b) {
    auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
    return a.n == b.n && a.mechanism == b.mechanism && a.metric == b.metric && same(a.mean, b.mean) &&
           same(a.std_error, b.std_error) && a.replications == b.replications && same(a.prediction, b.prediction) &&
           a.prediction_exact == b.prediction_exact;
}

double ReplicationRecord::value(Metric m) const {
    switch (m) {
        case Metric::unenvied: return static_cast<double>(unenvied);
        case Metric::envy_nobody: return static_cast<double>(envy_nobody);
        case Metric::mean_rank: return mean_rank;
        case Metric::top_choice: return static_cast<double>(top_choice);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

void RunningStats::add(double x) noexcept {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
}

double RunningStats::sample_variance() const noexcept {
    if (count_ < 2) return std::numeric_limits<double>::quiet_NaN();
    return m2_ / static_cast<double>(count_ - 1);
}

double RunningStats::std_error() const noexcept {
    if (count_ < 2) return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(sample_variance() / static_cast<double>(count_));
}

std::uint64_t replication_seed(std::uint64_t master, std::uint64_t n, Mechanism mechanism, std::uint64_t replication) {
    return derive_seed({master, n, mechanism_id(mechanism), replication});
}

ReplicationOutcome simulate_replication(index_t n, Mechanism mechanism, std::uint64_t seed,
                                        const ExperimentConfig& config) {
    const Seed s{seed, 0};
    ReplicationOutcome out;
    if (mechanism == Mechanism::da) {
        const auto run = sequential_da(n, s, config.queue);
        const auto prefixes = run.preferences.realized_profile();
        const auto ranks = ranks_from_prefixes(prefixes, run.matching);
        std::vector<std::size_t> in, outd(n);
        for (index_t i = 0; i < n; ++i) outd[i] = ranks[i] - 1;
        if (n <= config.graph_threshold) {
            in = envy_degrees(prefixes, run.matching).in;
        } else {
            in = in_degrees_from_proposals(run.log, run.matching);
        }
        out.record = summarise(n, mechanism, seed, ranks, in, outd, run.log.total_proposals());
        out.ranks = rank_histogram(ranks);
        return out;
    }

    const auto prefs = generate_student_preferences(n, s);
    const Matching m = mechanism == Mechanism::rsd ? rsd(prefs, random_serial_order(n, s))
                                                   : ttc(prefs, random_endowment(n, s));
    std::vector<index_t> ranks(n);
    for (index_t i = 0; i < n; ++i) ranks[i] = prefs.position_of(i, m.school_of(i)) + 1;
    const auto d = envy_degrees(prefs, m);
    out.record = summarise(n, mechanism, seed, ranks, d.in, d.out, 0);
    out.ranks = rank_histogram(ranks);
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    const unsigned threads = resolve_threads(config.threads);
    const bool keep_rows = config.emit_per_replication || config.per_replication_path.has_value();
    ExperimentResult result;

    for (index_t n : config.sizes) {
        for (Mechanism mech : config.mechanisms) {
            std::vector<ReplicationRecord> rows(config.replications);
            std::vector<RankHistogram> partial(threads);
            std::atomic<std::uint64_t> next{0};
            auto worker = [&](unsigned w) {
                for (std::uint64_t r; (r = next.fetch_add(1)) < config.replications;) {
                    auto o = simulate_replication(n, mech, replication_seed(config.master_seed, n, mech, r), config);
                    o.record.replication = r;
                    rows[r] = o.record;
                    partial[w] += o.ranks;
                }
            };
            if (threads == 1) {
                worker(0);
            } else {
                std::vector<std::jthread> pool;
                for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
            }

            RankHistogram pooled{std::vector<std::uint64_t>(n, 0)};
            for (const auto& h : partial) pooled += h;
            result.pooled_ranks.push_back(std::move(pooled));

            const Prediction p = predict(n, mech);
            for (Metric metric : config.metrics) {
                RunningStats stats;
                for (const auto& row : rows) stats.add(row.value(metric));
                AggregateRecord a;
                a.n = n;
                a.mechanism = mech;
                a.metric = metric;
                a.mean = stats.mean();
                a.std_error = stats.std_error();
                a.replications = stats.count();
                switch (metric) {
                    case Metric::unenvied:
                        a.prediction = p.unenvied_mean;
                        a.prediction_exact = p.unenvied_exact;
                        break;
                    case Metric::envy_nobody:
                    case Metric::top_choice:
                        a.prediction = p.envy_nobody_mean;
                        a.prediction_exact = p.envy_nobody_exact;
                        break;
                    case Metric::mean_rank:
                        a.prediction = p.mean_rank;
                        a.prediction_exact = p.mean_rank_exact;
                        break;
                }
                result.aggregates.push_back(a);
            }
            if (keep_rows) result.replications.insert(result.replications.end(), rows.begin(), rows.end());
        }
    }

    if (config.output_path) write_csv(result.aggregates, *config.output_path);
    if (config.per_replication_path) write_replication_csv(result.replications, *config.per_replication_path);
    return result;
}

std::vector<AggregateRecord> figure1_table(ExperimentConfig config) {
    config.mechanisms = {Mechanism::da};
    config.metrics = {Metric::unenvied, Metric::envy_nobody};
    return run_experiment(config).aggregates;
}

}  // namespace envylab
