#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "envylab/experiments.hpp"

namespace envylab {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::uint64_t parse_u64(const std::string& s, std::size_t line, const char* column) {
    try {
        std::size_t used = 0;
        if (s.empty() || s[0] == '-') throw std::invalid_argument(s);
        const auto v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw CsvError(line, std::string("bad integer in column ") + column + ": '" + s + "'");
    }
}

double parse_real(const std::string& s, std::size_t line, const char* column) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw CsvError(line, std::string("bad number in column ") + column + ": '" + s + "'");
    }
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

}  // namespace

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

void write_csv(const std::vector<AggregateRecord>& records, std::ostream& out) {
    out << kAggregateHeader << '\n';
    for (const auto& r : records) {
        out << r.n << ',' << to_string(r.mechanism) << ',' << to_string(r.metric) << ',' << format_real(r.mean) << ','
            << format_real(r.std_error) << ',' << r.replications << ',' << format_real(r.prediction) << ','
            << (r.prediction_exact ? "true" : "false") << '\n';
    }
}

void write_csv(const std::vector<AggregateRecord>& records, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    write_csv(records, out);
    if (!out.flush()) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::vector<AggregateRecord> read_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw CsvError(1, "missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kAggregateHeader) throw CsvError(1, "unexpected header '" + line + "'");

    std::vector<AggregateRecord> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != 8) {
            throw CsvError(line_no, "expected 8 columns, found " + std::to_string(f.size()));
        }
        AggregateRecord r;
        r.n = parse_u64(f[0], line_no, "n");
        try {
            r.mechanism = parse_mechanism(f[1]);
            r.metric = parse_metric(f[2]);
        } catch (const std::invalid_argument& e) {
            throw CsvError(line_no, e.what());
        }
        r.mean = parse_real(f[3], line_no, "mean");
        r.std_error = parse_real(f[4], line_no, "std_error");
        r.replications = parse_u64(f[5], line_no, "replications");
        r.prediction = parse_real(f[6], line_no, "prediction");
        if (f[7] == "true") {
            r.prediction_exact = true;
        } else if (f[7] == "false") {
            r.prediction_exact = false;
        } else {
            throw CsvError(line_no, "prediction_exact must be true or false");
        }
        out.push_back(r);
    }
    return out;
}

std::vector<AggregateRecord> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    return read_csv(in);
}

void write_replication_csv(const std::vector<ReplicationRecord>& records, std::ostream& out) {
    out << kReplicationHeader << '\n';
    for (const auto& r : records) {
        out << r.n << ',' << to_string(r.mechanism) << ',' << r.replication << ',' << r.seed << ',' << r.unenvied
            << ',' << r.envy_nobody << ',' << r.total_proposals << ',' << format_real(r.mean_rank) << '\n';
    }
}

void write_replication_csv(const std::vector<ReplicationRecord>& records, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    write_replication_csv(records, out);
    if (!out.flush()) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace envylab
