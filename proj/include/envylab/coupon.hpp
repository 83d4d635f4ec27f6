#pragma once

#include <cstdint>

#include "envylab/market.hpp"
#include "envylab/mechanisms.hpp"

namespace envylab {

/// One coupon collector run over n equally likely types.
struct CollectorRun {
    index_t n = 0;
    std::uint64_t stopping_time = 0;  // draws until every type has been seen
    index_t singleton_count = 0;      // types seen exactly once at that time
};

/// Throws std::invalid_argument for n == 0.
CollectorRun run_collector(index_t n, const Seed& seed);

/// Schools appearing exactly once among the raw draws of a completed
/// sequential DA run.
index_t singleton_count_from_da(const ProposalLog& log);

/// 1-based index of the draw at which all n schools have appeared, or 0 if
/// they never all do.
std::uint64_t collection_time(const DrawLog& draws, index_t n);

}  // namespace envylab
