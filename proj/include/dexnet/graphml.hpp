#pragma once

#include <string>

#include "dexnet/centrality.hpp"
#include "dexnet/communities.hpp"
#include "dexnet/graph.hpp"

namespace dexnet {

/// Serializes a graph as GraphML: nodes identified by token address with a
/// symbol attribute (plus centrality/community when given), undirected edges
/// with an integer weight attribute. Nodes appear in address order and edges
/// in (source, target) order, so output is byte-deterministic. Optional
/// attribute vectors must cover exactly the nodes of g; anything else raises
/// MismatchError.
std::string to_graphml(const TokenGraph& g, const CentralityVector* centrality = nullptr,
                       const CommunityAssignment* communities = nullptr);

}  // namespace dexnet
