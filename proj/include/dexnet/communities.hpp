#pragma once

#include <cstdint>
#include <vector>

#include "dexnet/graph.hpp"

namespace dexnet {

/// Community labels for every node of a graph, parallel to the graph's node
/// order. Labels are dense: every value in 0..community_count-1 appears, and
/// communities are numbered by first appearance in node (address) order.
struct CommunityAssignment {
  std::vector<TokenId> tokens;
  std::vector<std::size_t> labels;
  std::size_t community_count = 0;
  double modularity = 0.0;
  std::uint64_t seed = 0;
};

/// Two-phase Louvain on the weighted graph: local moving with seeded visit
/// order, then community aggregation, repeated until a full pass yields no
/// move. The procedure restarts from a fixed set of seed-derived visit orders
/// and keeps the best-scoring partition, since a single greedy run is order
/// sensitive. Deterministic for a fixed seed. An edgeless graph comes back as
/// all singletons with modularity 0. Throws InvalidArgumentError on an
/// empty graph.
CommunityAssignment louvain(const TokenGraph& g, double resolution = 1.0, std::uint64_t seed = 0);

/// Weighted Newman modularity of an assignment over g:
/// Q = sum_c (w_in(c)/W - resolution * (w_tot(c)/2W)^2). Zero total weight
/// yields 0 by convention. Throws InvalidAssignmentError when the assignment
/// does not label exactly the nodes of g.
double modularity(const TokenGraph& g, const CommunityAssignment& assignment,
                  double resolution = 1.0);

}  // namespace dexnet
