#include "envylab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "envylab/coupon.hpp"
#include "envylab/experiments.hpp"
#include "envylab/theory.hpp"

namespace envylab::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<index_t> parse_sizes(const std::string& s) {
    std::vector<index_t> out;
    for (const auto& item : split_list(s)) {
        long long v = 0;
        try {
            std::size_t used = 0;
            v = std::stoll(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("sizes must be a comma-separated list of integers");
        }
        if (v < 1) throw UsageError("sizes must be ≥ 1");
        if (v > 1'000'000) throw UsageError("sizes must be ≤ 1000000");
        out.push_back(static_cast<index_t>(v));
    }
    if (out.empty()) throw UsageError("sizes must be nonempty");
    return out;
}

template <class T, class Parse>
std::vector<T> parse_names(const std::string& s, Parse&& parse, const char* what) {
    std::vector<T> out;
    for (const auto& item : split_list(s)) {
        try {
            out.push_back(parse(item));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    if (out.empty()) throw UsageError(std::string(what) + " must be nonempty");
    return out;
}

std::string fixed6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

void print_summary(const std::vector<AggregateRecord>& records, std::ostream& out) {
    char line[160];
    std::snprintf(line, sizeof line, "%8s  %-4s  %-12s  %24s  %12s  %s\n", "n", "mech", "metric", "mean ± se",
                  "prediction", "kind");
    out << line;
    for (const auto& r : records) {
        const std::string mean = format_real(r.mean) + " ± " + format_real(r.std_error);
        std::snprintf(line, sizeof line, "%8llu  %-4s  %-12s  %24s  %12s  %s\n",
                      static_cast<unsigned long long>(r.n), std::string(to_string(r.mechanism)).c_str(),
                      std::string(to_string(r.metric)).c_str(), mean.c_str(), format_real(r.prediction).c_str(),
                      r.prediction_exact ? "exact" : "approx");
        out << line;
    }
}

struct SimulateFlags {
    std::string sizes;
    std::uint64_t reps = 2000;
    std::string mechanisms = "da";
    std::string metrics = "unenvied,envy_nobody";
    std::uint64_t seed = 42;
    std::string out;
    std::string per_replication;
    unsigned threads = 0;
    std::string queue = "lifo";
};

int cmd_simulate(const SimulateFlags& f, std::ostream& out) {
    ExperimentConfig config;
    if (!f.sizes.empty()) config.sizes = parse_sizes(f.sizes);
    if (f.reps < 1) throw UsageError("reps must be ≥ 1");
    config.replications = f.reps;
    config.mechanisms = parse_names<Mechanism>(f.mechanisms, parse_mechanism, "mechanisms");
    config.metrics = parse_names<Metric>(f.metrics, parse_metric, "metrics");
    config.master_seed = f.seed;
    config.threads = f.threads;
    try {
        config.queue = QueueDiscipline::parse(f.queue, derive_seed({f.seed, stream_tag::queue}));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (!f.per_replication.empty()) config.per_replication_path = f.per_replication;

    const auto result = run_experiment(config);

    // The summary is read back from the CSV text so it shows exactly what the
    // file holds.
    std::ostringstream csv;
    write_csv(result.aggregates, csv);
    if (!f.out.empty()) {
        std::ofstream file(f.out, std::ios::binary | std::ios::trunc);
        if (!(file << csv.str()) || !file.flush()) throw std::runtime_error("cannot write '" + f.out + "'");
    }
    std::istringstream back(csv.str());
    print_summary(read_csv(back), out);
    return kExitOk;
}

int cmd_predict(long long n, std::ostream& out) {
    if (n < 1) throw UsageError("n must be ≥ 1");
    const auto da = predict(static_cast<std::uint64_t>(n), Mechanism::da);
    const auto rs = predict(static_cast<std::uint64_t>(n), Mechanism::rsd);
    auto cell = [](double v, bool exact) { return fixed6(v) + (exact ? " (exact)" : " (approx)"); };
    char line[160];
    out << "n = " << n << "\n";
    std::snprintf(line, sizeof line, "%-22s  %-22s  %-22s\n", "", "da", "rsd");
    out << line;
    std::snprintf(line, sizeof line, "%-22s  %-22s  %-22s\n", "students envy nobody",
                  cell(da.envy_nobody_mean, da.envy_nobody_exact).c_str(),
                  cell(rs.envy_nobody_mean, rs.envy_nobody_exact).c_str());
    out << line;
    std::snprintf(line, sizeof line, "%-22s  %-22s  %-22s\n", "nobody envies student",
                  cell(da.unenvied_mean, da.unenvied_exact).c_str(), cell(rs.unenvied_mean, rs.unenvied_exact).c_str());
    out << line;
    out << "ttc with uniform random endowments matches rsd\n";
    return kExitOk;
}

int cmd_verify(long long max_n, bool allow_large, std::ostream& out, std::ostream& err, const Hooks& hooks) {
    EnumerationLimits limits;
    if (max_n < 1) throw UsageError("max-n must be ≥ 1");
    if (max_n > limits.max_profile_n) {
        if (!allow_large) {
            throw UsageError("max-n is capped at " + std::to_string(limits.max_profile_n) +
                             " (the profile space has (n!)^(2n) elements); pass --allow-large to override");
        }
        err << "warning: exhaustive enumeration at n = " << max_n << " visits (n!)^(2n) profiles and may not finish\n";
        limits.max_profile_n = static_cast<index_t>(max_n);
    }
    const auto report = run_verification(static_cast<index_t>(max_n), limits, hooks.deferred_acceptance);
    std::size_t failed = 0;
    for (const auto& c : report.checks) {
        out << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
        failed += !c.passed;
    }
    if (failed == 0) {
        out << "verify: all " << report.checks.size() << " checks passed\n";
        return kExitOk;
    }
    out << "verify: " << failed << " of " << report.checks.size() << " checks failed\n";
    return kExitFailure;
}

int cmd_coupon(long long n, long long reps, std::uint64_t seed, const std::string& path, std::ostream& out) {
    if (n < 1) throw UsageError("n must be ≥ 1");
    if (reps < 1) throw UsageError("reps must be ≥ 1");
    RunningStats singletons, stopping;
    for (long long r = 0; r < reps; ++r) {
        const auto run = run_collector(static_cast<index_t>(n), Seed{seed, static_cast<std::uint64_t>(r)});
        singletons.add(run.singleton_count);
        stopping.add(static_cast<double>(run.stopping_time));
    }
    const double h = harmonic(static_cast<std::uint64_t>(n));

    std::ostringstream csv;
    csv << "n,metric,mean,std_error,replications,reference\n";
    csv << n << ",singletons," << format_real(singletons.mean()) << ',' << format_real(singletons.std_error()) << ','
        << reps << ',' << format_real(h) << '\n';
    csv << n << ",stopping_time," << format_real(stopping.mean()) << ',' << format_real(stopping.std_error()) << ','
        << reps << ',' << format_real(static_cast<double>(n) * h) << '\n';
    if (!path.empty()) {
        std::ofstream file(path, std::ios::binary | std::ios::trunc);
        if (!(file << csv.str()) || !file.flush()) throw std::runtime_error("cannot write '" + path + "'");
    }
    out << "coupon collector, n = " << n << ", " << reps << " replications\n";
    out << "  singletons     " << format_real(singletons.mean()) << " ± " << format_real(singletons.std_error())
        << "   (H_n = " << format_real(h) << ")\n";
    out << "  stopping time  " << format_real(stopping.mean()) << " ± " << format_real(stopping.std_error())
        << "   (n H_n = " << format_real(static_cast<double>(n) * h) << ")\n";
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Hooks& hooks) {
    CLI::App app{"envylab: envy in random one-to-one matching markets"};
    app.name("envylab");
    app.require_subcommand(1);

    SimulateFlags sim;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo sweep over market sizes and mechanisms");
    simulate->add_option("--sizes", sim.sizes, "comma-separated market sizes (default 10,25,50,100,250,500,1000)");
    simulate->add_option("--reps", sim.reps, "replications per (n, mechanism)")->capture_default_str();
    simulate->add_option("--mechanisms", sim.mechanisms, "comma list of da|rsd|ttc")->capture_default_str();
    simulate->add_option("--metrics", sim.metrics, "comma list of unenvied|envy_nobody|mean_rank|top_choice")
        ->capture_default_str();
    simulate->add_option("--seed", sim.seed, "master seed")->capture_default_str();
    simulate->add_option("--out", sim.out, "aggregate CSV output path");
    simulate->add_option("--per-replication", sim.per_replication, "per-replication CSV output path");
    simulate->add_option("--threads", sim.threads, "worker threads (default: all cores)")->envname("ENVYLAB_THREADS");
    simulate->add_option("--queue", sim.queue, "DA queue discipline: fifo|lifo|random")->capture_default_str();

    long long predict_n = 0;
    auto* predict_cmd = app.add_subcommand("predict", "closed-form expectations for one market size");
    predict_cmd->add_option("--n", predict_n, "market size")->required();

    long long max_n = 3;
    bool allow_large = false;
    auto* verify = app.add_subcommand("verify", "exhaustive exact checks on small markets");
    verify->add_option("--max-n", max_n, "largest market size to enumerate")->capture_default_str();
    verify->add_flag("--allow-large", allow_large, "lift the enumeration cap (slow)");

    long long coupon_n = 0, coupon_reps = 2000;
    std::uint64_t coupon_seed = 42;
    std::string coupon_out;
    auto* coupon = app.add_subcommand("coupon", "coupon collector singleton statistics");
    coupon->add_option("--n", coupon_n, "number of coupon types")->required();
    coupon->add_option("--reps", coupon_reps, "replications")->capture_default_str();
    coupon->add_option("--seed", coupon_seed, "master seed")->capture_default_str();
    coupon->add_option("--out", coupon_out, "summary CSV output path");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim, out);
        if (predict_cmd->parsed()) return cmd_predict(predict_n, out);
        if (verify->parsed()) return cmd_verify(max_n, allow_large, out, err, hooks);
        if (coupon->parsed()) return cmd_coupon(coupon_n, coupon_reps, coupon_seed, coupon_out, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace envylab::cli
