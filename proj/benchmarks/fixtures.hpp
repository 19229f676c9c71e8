#pragma once

#include <map>

#include "socnet/graph.hpp"
#include "socnet/synthetic.hpp"

namespace bench {

// One synthetic CDR window of roughly the scale-run size.
inline const socnet::Snapshot& window_snapshot(std::size_t entities) {
    static std::map<std::size_t, socnet::Snapshot> cache;
    auto it = cache.find(entities);
    if (it != cache.end()) return it->second;
    socnet::SyntheticCdrParams p;
    p.entities = entities;
    p.interactions = entities * 2;
    p.seed = 42;
    socnet::InteractionStore store;
    store.add_interactions(socnet::to_interactions(socnet::generate_cdr(p).records));
    return cache.emplace(entities, store.full_snapshot()).first->second;
}

}  // namespace bench
