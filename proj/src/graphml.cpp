#include "dexnet/graphml.hpp"

#include <fmt/core.h>

#include <charconv>

#include "dexnet/error.hpp"

namespace dexnet {

namespace {

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&apos;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void check_coverage(const TokenGraph& g, std::span<const TokenId> tokens, const char* what) {
  if (tokens.size() != g.node_count()) {
    throw MismatchError(fmt::format("{} covers {} tokens but the graph has {} nodes", what,
                                    tokens.size(), g.node_count()));
  }
  for (NodeIndex i = 0; i < g.node_count(); ++i) {
    if (tokens[i].address() != g.node(i).address()) {
      throw MismatchError(fmt::format("{} token {} does not match graph node {}", what,
                                      tokens[i].address(), g.node(i).address()));
    }
  }
}

}  // namespace

std::string to_graphml(const TokenGraph& g, const CentralityVector* centrality,
                       const CommunityAssignment* communities) {
  if (centrality != nullptr) {
    check_coverage(g, centrality->tokens, "centrality vector");
  }
  if (communities != nullptr) {
    check_coverage(g, communities->tokens, "community assignment");
  }

  std::string out;
  out +=
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\"\n"
      "         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\"\n"
      "         xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
      "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n";
  out += "  <key id=\"symbol\" for=\"node\" attr.name=\"symbol\" attr.type=\"string\"/>\n";
  if (centrality != nullptr) {
    out +=
        "  <key id=\"centrality\" for=\"node\" attr.name=\"centrality\" "
        "attr.type=\"double\"/>\n";
  }
  if (communities != nullptr) {
    out += "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"long\"/>\n";
  }
  out += "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n";
  out += "  <graph id=\"G\" edgedefault=\"undirected\">\n";

  for (NodeIndex i = 0; i < g.node_count(); ++i) {
    const TokenId& token = g.node(i);
    out += fmt::format("    <node id=\"{}\">", token.address());
    if (!token.symbol().empty()) {
      out += fmt::format("<data key=\"symbol\">{}</data>", xml_escape(token.symbol()));
    }
    if (centrality != nullptr) {
      out += fmt::format("<data key=\"centrality\">{}</data>",
                         format_double(centrality->scores[i]));
    }
    if (communities != nullptr) {
      out += fmt::format("<data key=\"community\">{}</data>", communities->labels[i]);
    }
    out += "</node>\n";
  }

  for (const auto& e : g.edges()) {
    out += fmt::format(
        "    <edge source=\"{}\" target=\"{}\"><data key=\"weight\">{}</data></edge>\n",
        g.node(e.a).address(), g.node(e.b).address(), e.weight);
  }

  out += "  </graph>\n</graphml>\n";
  return out;
}

}  // namespace dexnet
