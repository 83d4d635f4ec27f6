#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "envylab/envy.hpp"
#include "envylab/mechanisms.hpp"

namespace envylab {

enum class Metric { unenvied, envy_nobody, mean_rank, top_choice };

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view name);

/// Sizes swept when none are given.
std::vector<index_t> default_sizes();

struct ExperimentConfig {
    std::vector<index_t> sizes = default_sizes();
    std::uint64_t replications = 2000;
    std::vector<Mechanism> mechanisms = {Mechanism::da};
    std::vector<Metric> metrics = {Metric::unenvied, Metric::envy_nobody};
    std::uint64_t master_seed = 42;
    QueueDiscipline queue = QueueDiscipline::lifo();
    unsigned threads = 0;  // 0: hardware concurrency
    index_t graph_threshold = 2000;  // larger DA runs take in-degrees from proposal counts
    std::optional<std::filesystem::path> output_path;
    std::optional<std::filesystem::path> per_replication_path;
    bool emit_per_replication = false;

    /// Throws std::invalid_argument describing the first problem found.
    void validate() const;
};

struct AggregateRecord {
    std::uint64_t n = 0;
    Mechanism mechanism = Mechanism::da;
    Metric metric = Metric::unenvied;
    double mean = 0;
    double std_error = 0;  // NaN when replications < 2
    std::uint64_t replications = 0;
    double prediction = 0;
    bool prediction_exact = false;

    bool std_error_defined() const noexcept { return replications >= 2; }
    /// |mean - prediction| <= k standard errors.
    bool within_std_errors(double k) const;

    friend bool operator==(const AggregateRecord& a, const AggregateRecord& b);
};

struct ReplicationRecord {
    std::uint64_t n = 0;
    Mechanism mechanism = Mechanism::da;
    std::uint64_t replication = 0;
    std::uint64_t seed = 0;  // Seed{seed, 0} reproduces the replication
    std::uint64_t unenvied = 0;
    std::uint64_t envy_nobody = 0;
    std::uint64_t top_choice = 0;
    std::uint64_t total_proposals = 0;  // 0 for rsd and ttc
    double mean_rank = 0;

    double value(Metric m) const;
};

struct ExperimentResult {
    std::vector<AggregateRecord> aggregates;
    std::vector<ReplicationRecord> replications;  // filled when emitting per-replication rows
    /// Rank histograms pooled over replications, one per (n, mechanism) in
    /// sweep order.
    std::vector<RankHistogram> pooled_ranks;
};

/// Welford running mean and variance.
class RunningStats {
public:
    void add(double x) noexcept;
    std::uint64_t count() const noexcept { return count_; }
    double mean() const noexcept { return mean_; }
    double sample_variance() const noexcept;
    double std_error() const noexcept;

private:
    std::uint64_t count_ = 0;
    double mean_ = 0;
    double m2_ = 0;
};

/// Replication seed, a pure function of (master, n, mechanism, index).
std::uint64_t replication_seed(std::uint64_t master, std::uint64_t n, Mechanism mechanism, std::uint64_t replication);

struct ReplicationOutcome {
    ReplicationRecord record;
    RankHistogram ranks;
};

ReplicationOutcome simulate_replication(index_t n, Mechanism mechanism, std::uint64_t seed,
                                        const ExperimentConfig& config = {});

/// Runs every (n, mechanism) group in the sweep. Output is identical for any
/// thread count. Writes CSV files when paths are configured.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// DA-only sweep of the unenvied and envy-nobody metrics.
std::vector<AggregateRecord> figure1_table(ExperimentConfig config);

class CsvError : public std::runtime_error {
public:
    CsvError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

inline constexpr std::string_view kAggregateHeader =
    "n,mechanism,metric,mean,std_error,replications,prediction,prediction_exact";
inline constexpr std::string_view kReplicationHeader =
    "n,mechanism,replication,seed,unenvied,envy_nobody,total_proposals,mean_rank";

/// %.6g, with "nan" for undefined values.
std::string format_real(double x);

void write_csv(const std::vector<AggregateRecord>& records, std::ostream& out);
void write_csv(const std::vector<AggregateRecord>& records, const std::filesystem::path& path);
std::vector<AggregateRecord> read_csv(std::istream& in);
std::vector<AggregateRecord> read_csv(const std::filesystem::path& path);

void write_replication_csv(const std::vector<ReplicationRecord>& records, std::ostream& out);
void write_replication_csv(const std::vector<ReplicationRecord>& records, const std::filesystem::path& path);

}  // namespace envylab
