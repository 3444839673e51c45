#pragma once

#include "statfinder/finder.hpp"
#include "statfinder/stats.hpp"

namespace statfinder::reference {

// Serial search without caches or the fingerprint index: every candidate is
// checked with match_exact / match_distribution, which re-enumerate and
// re-evaluate from scratch. Engine::search must agree with it exactly.
SearchOutcome search(const Query& query, const Registry& registry, const EnumerationCaps& caps = {},
                     int depth_ceiling = kDefaultDepthCeiling);

}  // namespace statfinder::reference
