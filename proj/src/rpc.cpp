#include "dexnet/rpc.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdint>
#include <mutex>
#include <json.hpp>
#include <span>
#include <thread>
#include <vector>

#include "dexnet/error.hpp"
#include "dexnet/keccak.hpp"

// httplib spawns no threads of its own; blocking clients only.
#include <httplib.h>

namespace dexnet {

namespace {

using nlohmann::json;

struct CallSpec {
  std::string to;
  std::string data;  // 0x-prefixed calldata
  std::string name;  // for error messages, e.g. "allPairs(3)"
};

struct Endpoint {
  std::string base;  // scheme://host:port for httplib
  std::string path;  // request path, "/" by default
};

Endpoint split_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw InvalidArgumentError(fmt::format("endpoint URL needs a scheme: {}", url));
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    return {url, "/"};
  }
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string encode_uint256(std::uint64_t value) {
  return fmt::format("{:064x}", value);
}

/// 32-byte ABI word from a call result. Accepts exactly one word.
std::string decode_word(const std::string& result, const std::string& call) {
  std::string hex = result;
  if (hex.rfind("0x", 0) == 0 || hex.rfind("0X", 0) == 0) {
    hex = hex.substr(2);
  }
  if (hex.size() != 64) {
    throw DecodeError(
        fmt::format("call {} returned {} hex chars, expected 64", call, hex.size()));
  }
  for (char c : hex) {
    if (!std::isxdigit(static_cast<unsigned char>(c))) {
      throw DecodeError(fmt::format("call {} returned non-hex data", call));
    }
  }
  return hex;
}

std::uint64_t decode_uint(const std::string& result, const std::string& call) {
  const std::string word = decode_word(result, call);
  // The value must fit 64 bits; factories with 2^64 pools do not exist.
  for (std::size_t i = 0; i < 48; ++i) {
    if (word[i] != '0') {
      throw DecodeError(fmt::format("call {} returned an implausibly large integer", call));
    }
  }
  return std::stoull(word.substr(48), nullptr, 16);
}

std::string decode_address(const std::string& result, const std::string& call) {
  const std::string word = decode_word(result, call);
  for (std::size_t i = 0; i < 24; ++i) {
    if (word[i] != '0') {
      throw DecodeError(fmt::format("call {} returned a malformed address word", call));
    }
  }
  return "0x" + word.substr(24);
}

bool transient_status(int status) {
  return status == 429 || (status >= 500 && status < 600);
}

/// POSTs one JSON-RPC batch with retries. `first_id` is the id of calls[0];
/// ids rise sequentially so responses can be matched back to requests.
std::vector<std::string> post_batch(const Endpoint& ep, std::span<const CallSpec> calls,
                                    std::size_t first_id, const RpcOptions& opts) {
  json batch = json::array();
  for (std::size_t i = 0; i < calls.size(); ++i) {
    batch.push_back({{"jsonrpc", "2.0"},
                     {"id", first_id + i},
                     {"method", "eth_call"},
                     {"params", json::array({{{"to", calls[i].to}, {"data", calls[i].data}},
                                             "latest"})}});
  }
  const std::string body = batch.dump();

  httplib::Client client(ep.base);
  client.set_connection_timeout(opts.timeout);
  client.set_read_timeout(opts.timeout);
  client.set_write_timeout(opts.timeout);

  std::string response_body;
  std::string last_error;
  bool got_response = false;
  for (std::size_t attempt = 0; attempt <= opts.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(opts.retry_base_delay * (1ULL << (attempt - 1)));
    }
    auto res = client.Post(ep.path, body, "application/json");
    if (!res) {
      last_error = fmt::format("transport failure ({})", httplib::to_string(res.error()));
      continue;
    }
    if (res->status == 200) {
      response_body = res->body;
      got_response = true;
      break;
    }
    last_error = fmt::format("HTTP status {}", res->status);
    if (!transient_status(res->status)) {
      throw TransportError(fmt::format("{} from {}", last_error, ep.base));
    }
  }
  if (!got_response) {
    throw TransportError(fmt::format("{} from {} after {} attempts", last_error, ep.base,
                                     opts.max_retries + 1));
  }

  json parsed = json::parse(response_body, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_array()) {
    throw DecodeError(fmt::format("batch response from {} is not a JSON array", ep.base));
  }
  std::vector<std::string> results(calls.size());
  std::vector<bool> seen(calls.size(), false);
  for (const auto& item : parsed) {
    if (!item.is_object() || !item.contains("id") || !item["id"].is_number_unsigned()) {
      throw DecodeError("batch response item lacks a usable id");
    }
    const std::uint64_t id = item["id"].get<std::uint64_t>();
    if (id < first_id || id >= first_id + calls.size()) {
      throw DecodeError(fmt::format("batch response has unknown id {}", id));
    }
    const std::size_t slot = id - first_id;
    if (item.contains("error")) {
      throw TransportError(fmt::format("call {} failed: {}", calls[slot].name,
                                       item["error"].dump()));
    }
    if (!item.contains("result") || !item["result"].is_string()) {
      throw DecodeError(fmt::format("call {} has no string result", calls[slot].name));
    }
    results[slot] = item["result"].get<std::string>();
    seen[slot] = true;
  }
  for (std::size_t i = 0; i < calls.size(); ++i) {
    if (!seen[i]) {
      throw DecodeError(fmt::format("no response for call {}", calls[i].name));
    }
  }
  return results;
}

/// Runs all calls in batch_size groups across a worker pool; result i always
/// corresponds to calls[i].
std::vector<std::string> execute_calls(const Endpoint& ep, const std::vector<CallSpec>& calls,
                                       const RpcOptions& opts) {
  std::vector<std::string> results(calls.size());
  if (calls.empty()) {
    return results;
  }
  const std::size_t n_batches = (calls.size() + opts.batch_size - 1) / opts.batch_size;
  const std::size_t n_threads = std::min(opts.parallelism, n_batches);

  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t b = cursor.fetch_add(1);
      if (b >= n_batches) {
        return;
      }
      const std::size_t begin = b * opts.batch_size;
      const std::size_t count = std::min(opts.batch_size, calls.size() - begin);
      try {
        auto batch_results =
            post_batch(ep, std::span<const CallSpec>(calls).subspan(begin, count), begin, opts);
        std::copy(batch_results.begin(), batch_results.end(), results.begin() + begin);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
        cursor.store(n_batches);  // stop handing out work
        return;
      }
    }
  };

  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) {
      pool.emplace_back(worker);
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return results;
}

}  // namespace

void RpcOptions::validate() const {
  if (parallelism == 0 || batch_size == 0) {
    throw InvalidArgumentError("parallelism and batch_size must be positive");
  }
}

PoolRegistry fetch_pool_registry(const std::string& endpoint, const std::string& factory,
                                 Platform platform, const RpcOptions& options) {
  options.validate();
  const Endpoint ep = split_endpoint(endpoint);
  const std::string factory_addr = canonical_address(factory);

  // Selectors derive from the ABI rule (first 4 bytes of keccak-256 of the
  // signature) instead of being hardcoded.
  const std::string sel_length = function_selector("allPairsLength()");
  const std::string sel_all_pairs = function_selector("allPairs(uint256)");
  const std::string sel_token0 = function_selector("token0()");
  const std::string sel_token1 = function_selector("token1()");

  const auto length_result = execute_calls(
      ep, {{factory_addr, "0x" + sel_length, "allPairsLength()"}}, options);
  const std::uint64_t length = decode_uint(length_result[0], "allPairsLength()");

  std::vector<CallSpec> pair_calls;
  pair_calls.reserve(length);
  for (std::uint64_t i = 0; i < length; ++i) {
    pair_calls.push_back({factory_addr, "0x" + sel_all_pairs + encode_uint256(i),
                          fmt::format("allPairs({})", i)});
  }
  const auto pair_results = execute_calls(ep, pair_calls, options);
  std::vector<std::string> pools(length);
  for (std::uint64_t i = 0; i < length; ++i) {
    pools[i] = decode_address(pair_results[i], pair_calls[i].name);
  }

  std::vector<CallSpec> token_calls;
  token_calls.reserve(2 * length);
  for (std::uint64_t i = 0; i < length; ++i) {
    token_calls.push_back({pools[i], "0x" + sel_token0, fmt::format("token0() on {}", pools[i])});
    token_calls.push_back({pools[i], "0x" + sel_token1, fmt::format("token1() on {}", pools[i])});
  }
  const auto token_results = execute_calls(ep, token_calls, options);

  PoolRegistry registry;
  for (std::uint64_t i = 0; i < length; ++i) {
    Pool pool;
    pool.address = pools[i];
    pool.token0 = TokenId::from_address(
        decode_address(token_results[2 * i], token_calls[2 * i].name));
    pool.token1 = TokenId::from_address(
        decode_address(token_results[2 * i + 1], token_calls[2 * i + 1].name));
    pool.platform = platform;
    registry.add(std::move(pool));
  }
  return registry;
}

}  // namespace dexnet
