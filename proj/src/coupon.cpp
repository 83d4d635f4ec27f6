#include "envylab/coupon.hpp"

#include <stdexcept>
#include <vector>

#include "envylab/envy.hpp"

namespace envylab {

CollectorRun run_collector(index_t n, const Seed& seed) {
    if (n == 0) throw std::invalid_argument("coupon collector needs at least one type");
    auto rng = seed.stream(stream_tag::coupon);
    std::vector<std::uint32_t> hits(n, 0);
    CollectorRun run{n, 0, 0};
    index_t distinct = 0;
    while (distinct < n) {
        const index_t t = uniform_index(rng, n);
        ++run.stopping_time;
        if (hits[t]++ == 0) ++distinct;
    }
    for (auto h : hits) run.singleton_count += h == 1;
    return run;
}

index_t singleton_count_from_da(const ProposalLog& log) {
    return static_cast<index_t>(schools_drawn_once(log.raw_draw_log).size());
}

std::uint64_t collection_time(const DrawLog& draws, index_t n) {
    std::vector<bool> seen(n, false);
    index_t distinct = 0;
    for (std::size_t t = 0; t < draws.size(); ++t) {
        const index_t s = draws[t].school;
        if (s < n && !seen[s]) {
            seen[s] = true;
            if (++distinct == n) return t + 1;
        }
    }
    return 0;
}

}  // namespace envylab
