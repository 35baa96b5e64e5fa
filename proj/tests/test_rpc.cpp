#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fmt/core.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <httplib.h>
#include <json.hpp>
#include <string>
#include <thread>

#include "dexnet/error.hpp"
#include "dexnet/keccak.hpp"
#include "dexnet/rpc.hpp"

using namespace dexnet;
using nlohmann::json;

namespace {

std::string word_uint(std::uint64_t v) { return fmt::format("0x{:064x}", v); }
std::string word_address(const std::string& addr_no_prefix) {
  return "0x" + std::string(24, '0') + addr_no_prefix;
}

std::string token_hex(unsigned i) { return fmt::format("{:040x}", 0xaa00u + i); }
std::string pool_hex(unsigned i) { return fmt::format("{:040x}", 0xbb00u + i); }
const std::string kFactory = fmt::format("0x{:040x}", 0xfac70000u);

/// In-process JSON-RPC stub modeling a factory with `n_pools` pools where
/// pool i pairs token 2i with token 2i+1. Failure injection knobs cover the
/// retry and decode paths.
class MockNode {
 public:
  explicit MockNode(unsigned n_pools) : n_pools_(n_pools) {
    server_.Post("/", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    REQUIRE(port_ > 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~MockNode() {
    server_.stop();
    thread_.join();
  }

  std::string endpoint() const { return fmt::format("http://127.0.0.1:{}", port_); }
  std::size_t requests_seen() const { return requests_; }

  // Respond 500 to this many requests before behaving normally.
  std::atomic<int> fail_first{0};
  // Respond 404 (non-transient) to every request.
  std::atomic<bool> always_404{false};
  // Return a truncated word for token0() calls.
  std::atomic<bool> truncate_token0{false};
  // Return a JSON-RPC error object for allPairs(0).
  std::atomic<bool> error_on_pair0{false};

 private:
  void handle(const httplib::Request& req, httplib::Response& res) {
    ++requests_;
    if (always_404) {
      res.status = 404;
      return;
    }
    if (fail_first.fetch_sub(1) > 0) {
      res.status = 500;
      return;
    }
    fail_first.store(0);

    json batch = json::parse(req.body);
    json replies = json::array();
    for (const auto& call : batch) {
      const std::string to = call["params"][0]["to"].get<std::string>();
      const std::string data = call["params"][0]["data"].get<std::string>();
      const std::string selector = data.substr(2, 8);

      json reply = {{"jsonrpc", "2.0"}, {"id", call["id"]}};
      if (to == kFactory && selector == function_selector("allPairsLength()")) {
        reply["result"] = word_uint(n_pools_);
      } else if (to == kFactory && selector == function_selector("allPairs(uint256)")) {
        const auto index = std::stoull(data.substr(10), nullptr, 16);
        if (error_on_pair0 && index == 0) {
          reply["error"] = {{"code", -32000}, {"message", "execution reverted"}};
        } else {
          reply["result"] = word_address(pool_hex(static_cast<unsigned>(index)));
        }
      } else if (selector == function_selector("token0()")) {
        if (truncate_token0) {
          reply["result"] = "0x1234";
        } else {
          reply["result"] = word_address(token_hex(2 * pool_index(to)));
        }
      } else if (selector == function_selector("token1()")) {
        reply["result"] = word_address(token_hex(2 * pool_index(to) + 1));
      } else {
        reply["error"] = {{"code", -32601}, {"message", "unknown call"}};
      }
      replies.push_back(std::move(reply));
    }
    // Replies go back in reverse order: correlation must rest on ids alone.
    std::reverse(replies.begin(), replies.end());
    res.set_content(replies.dump(), "application/json");
  }

  unsigned pool_index(const std::string& to) const {
    for (unsigned i = 0; i < n_pools_; ++i) {
      if (to == "0x" + pool_hex(i)) {
        return i;
      }
    }
    throw std::runtime_error("mock node: unknown pool " + to);
  }

  unsigned n_pools_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<std::size_t> requests_{0};
};

RpcOptions fast_options() {
  RpcOptions opts;
  opts.parallelism = 2;
  opts.batch_size = 2;
  opts.max_retries = 3;
  opts.retry_base_delay = std::chrono::milliseconds(1);
  opts.timeout = std::chrono::milliseconds(5000);
  return opts;
}

}  // namespace

TEST_CASE("function selectors follow the ABI hashing rule") {
  // First four bytes of keccak-256 of the canonical signature. These values
  // are fixed by the contract ABIs and must never drift.
  CHECK(function_selector("allPairsLength()") == "574f2ba3");
  CHECK(function_selector("allPairs(uint256)") == "1e3dd18b");
  CHECK(function_selector("token0()") == "0dfe1681");
  CHECK(function_selector("token1()") == "d21220a7");
  CHECK(keccak256_hex("") ==
        "c5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470");
}

TEST_CASE("fetch walks the factory and reconstructs every pool") {
  MockNode node(3);
  PoolRegistry registry =
      fetch_pool_registry(node.endpoint(), kFactory, Platform::uniswap(), fast_options());

  REQUIRE(registry.size() == 3);
  for (unsigned i = 0; i < 3; ++i) {
    const Pool* pool = registry.find("0x" + pool_hex(i));
    REQUIRE(pool != nullptr);
    CHECK(pool->token0.address() == "0x" + token_hex(2 * i));
    CHECK(pool->token1.address() == "0x" + token_hex(2 * i + 1));
    CHECK(pool->platform.name() == "uniswap");
  }
}

TEST_CASE("an empty factory comes back as an empty registry") {
  MockNode node(0);
  PoolRegistry registry =
      fetch_pool_registry(node.endpoint(), kFactory, Platform::uniswap(), fast_options());
  CHECK(registry.empty());
  // Only the single allPairsLength batch should ever hit the node.
  CHECK(node.requests_seen() == 1);
}

TEST_CASE("transient server errors are retried until success") {
  MockNode node(2);
  node.fail_first = 2;
  RpcOptions opts = fast_options();
  opts.parallelism = 1;  // deterministic request order while failures are live
  PoolRegistry registry =
      fetch_pool_registry(node.endpoint(), kFactory, Platform::uniswap(), opts);
  CHECK(registry.size() == 2);
}

TEST_CASE("exhausted retries surface as TransportError") {
  MockNode node(1);
  node.fail_first = 1000;
  RpcOptions opts = fast_options();
  opts.max_retries = 2;
  CHECK_THROWS_AS(fetch_pool_registry(node.endpoint(), kFactory, Platform::uniswap(), opts),
                  TransportError);
  // One initial attempt plus two retries.
  CHECK(node.requests_seen() == 3);
}

TEST_CASE("non-transient statuses fail without retrying") {
  MockNode node(1);
  node.always_404 = true;
  CHECK_THROWS_AS(
      fetch_pool_registry(node.endpoint(), kFactory, Platform::uniswap(), fast_options()),
      TransportError);
  CHECK(node.requests_seen() == 1);
}

TEST_CASE("truncated call results raise DecodeError naming the call") {
  MockNode node(1);
  node.truncate_token0 = true;
  try {
    fetch_pool_registry(node.endpoint(), kFactory, Platform::uniswap(), fast_options());
    FAIL("expected DecodeError");
  } catch (const DecodeError& e) {
    const std::string what = e.what();
    CHECK(what.find("token0()") != std::string::npos);
    CHECK(what.find("expected 64") != std::string::npos);
  }
}

TEST_CASE("node-side call errors surface as TransportError naming the call") {
  MockNode node(2);
  node.error_on_pair0 = true;
  try {
    fetch_pool_registry(node.endpoint(), kFactory, Platform::uniswap(), fast_options());
    FAIL("expected TransportError");
  } catch (const TransportError& e) {
    const std::string what = e.what();
    CHECK(what.find("allPairs(0)") != std::string::npos);
    CHECK(what.find("execution reverted") != std::string::npos);
  }
}

TEST_CASE("options and endpoint are validated before any request") {
  RpcOptions bad;
  bad.parallelism = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgumentError);
  bad = RpcOptions{};
  bad.batch_size = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgumentError);

  CHECK_THROWS_AS(
      fetch_pool_registry("127.0.0.1:8545", kFactory, Platform::uniswap(), fast_options()),
      InvalidArgumentError);
  CHECK_THROWS_AS(
      fetch_pool_registry("http://127.0.0.1:8545", "0x123", Platform::uniswap(), fast_options()),
      InvalidArgumentError);
}

TEST_CASE("an unreachable endpoint raises TransportError") {
  RpcOptions opts = fast_options();
  opts.max_retries = 0;
  opts.timeout = std::chrono::milliseconds(500);
  // Port 9 (discard) is reliably closed on loopback in the test environment.
  CHECK_THROWS_AS(fetch_pool_registry("http://127.0.0.1:9", kFactory, Platform::uniswap(), opts),
                  TransportError);
}
