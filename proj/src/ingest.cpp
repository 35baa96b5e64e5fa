#include "dexnet/ingest.hpp"

#include <fmt/core.h>
#include <zlib.h>

#include <algorithm>
#include <json.hpp>
#include <utility>

namespace dexnet {

namespace {

using nlohmann::json;

/// Reads lines from a plain or gzip-compressed file. zlib passes
/// non-gzip bytes through untouched, so one code path covers both.
class GzLineReader {
 public:
  explicit GzLineReader(const std::filesystem::path& path) {
    file_ = gzopen(path.string().c_str(), "rb");
    if (file_ == nullptr) {
      throw IoError(fmt::format("cannot open {}", path.string()));
    }
  }

  GzLineReader(const GzLineReader&) = delete;
  GzLineReader& operator=(const GzLineReader&) = delete;

  ~GzLineReader() {
    if (file_ != nullptr) {
      gzclose(file_);
    }
  }

  bool next(std::string& line) {
    line.clear();
    char buf[1 << 16];
    bool got_any = false;
    while (gzgets(file_, buf, sizeof(buf)) != nullptr) {
      got_any = true;
      line.append(buf);
      if (!line.empty() && line.back() == '\n') {
        line.pop_back();
        if (!line.empty() && line.back() == '\r') {
          line.pop_back();
        }
        return true;
      }
    }
    int err = 0;
    const char* msg = gzerror(file_, &err);
    if (err != Z_OK && err != Z_STREAM_END) {
      throw IoError(fmt::format("read error: {}", msg));
    }
    return got_any;
  }

 private:
  gzFile file_ = nullptr;
};

void record_issue(std::vector<ParseIssue>& errors, std::size_t line_no, std::string message,
                  const ParseOptions& opts) {
  errors.push_back(ParseIssue{line_no, std::move(message)});
  if (errors.size() > opts.max_errors) {
    throw ParseError(fmt::format("aborting after {} parse errors (line {}): {}", errors.size(),
                                 line_no, errors.back().message));
  }
}

/// Runs `fn` over every nonempty line of `source`, where `source` provides
/// bool next(std::string&).
template <typename Source, typename Fn>
void for_each_line(Source& source, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (source.next(line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    fn(line_no, line);
  }
}

struct IstreamSource {
  std::istream& in;
  bool next(std::string& line) { return static_cast<bool>(std::getline(in, line)); }
};

template <typename Source>
RegistryParseResult parse_pool_registry_impl(Source& source, const ParseOptions& opts) {
  RegistryParseResult result;
  for_each_line(source, [&](std::size_t line_no, const std::string& line) {
    json rec = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (rec.is_discarded() || !rec.is_object()) {
      record_issue(result.errors, line_no, "malformed JSON object", opts);
      return;
    }
    try {
      const auto& pool_field = rec.at("pool").get_ref<const std::string&>();
      const auto& token0 = rec.at("token0").get_ref<const std::string&>();
      const auto& token1 = rec.at("token1").get_ref<const std::string&>();
      const auto& platform = rec.at("platform").get_ref<const std::string&>();
      Pool pool;
      pool.address = canonical_address(pool_field);
      pool.token0 = TokenId::from_address(token0, rec.value("symbol0", ""));
      pool.token1 = TokenId::from_address(token1, rec.value("symbol1", ""));
      pool.platform = Platform::named(platform);
      result.registry.add(std::move(pool));
    } catch (const json::exception& e) {
      record_issue(result.errors, line_no, fmt::format("missing or mistyped field: {}", e.what()),
                   opts);
    } catch (const InvalidArgumentError& e) {
      record_issue(result.errors, line_no, e.what(), opts);
    }
  });
  return result;
}

template <typename Source>
TransferParseResult parse_transfers_impl(Source& source, const BlockRange& range,
                                         const ParseOptions& opts) {
  TransferParseResult result;
  for_each_line(source, [&](std::size_t line_no, const std::string& line) {
    json rec = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (rec.is_discarded() || !rec.is_object()) {
      record_issue(result.errors, line_no, "malformed JSON object", opts);
      return;
    }
    try {
      const json& block = rec.at("block");
      if (!block.is_number_unsigned()) {
        record_issue(result.errors, line_no, "non-numeric block", opts);
        return;
      }
      TransferRecord record;
      record.block = block.get<BlockHeight>();
      record.pool = canonical_address(rec.at("pool").get_ref<const std::string&>());
      record.platform = Platform::named(rec.at("platform").get_ref<const std::string&>());
      if (!range.contains(record.block)) {
        ++result.out_of_range;
        return;
      }
      result.records.push_back(std::move(record));
    } catch (const json::exception& e) {
      record_issue(result.errors, line_no, fmt::format("missing or mistyped field: {}", e.what()),
                   opts);
    } catch (const InvalidArgumentError& e) {
      record_issue(result.errors, line_no, e.what(), opts);
    }
  });
  std::stable_sort(result.records.begin(), result.records.end(),
                   [](const TransferRecord& a, const TransferRecord& b) {
                     return a.block < b.block;
                   });
  return result;
}

}  // namespace

PoolRegistry::AddResult PoolRegistry::add(Pool pool) {
  if (pool.token0 == pool.token1) {
    ++rejected_self_pairs_;
    return AddResult::rejected_self_pair;
  }
  auto [it, inserted] = pools_.insert_or_assign(pool.address, pool);
  if (inserted) {
    ++platform_counts_[pool.platform.name()];
    return AddResult::added;
  }
  ++duplicates_;
  return AddResult::replaced_duplicate;
}

const Pool* PoolRegistry::find(std::string_view address) const {
  auto it = pools_.find(std::string(address));
  return it == pools_.end() ? nullptr : &it->second;
}

EdgeEvent EdgeEvent::make(BlockHeight block, TokenId x, TokenId y, Platform platform) {
  if (x == y) {
    throw InvalidArgumentError("edge event requires two distinct tokens");
  }
  EdgeEvent event;
  event.block = block;
  event.platform = std::move(platform);
  if (y < x) {
    std::swap(x, y);
  }
  event.a = std::move(x);
  event.b = std::move(y);
  return event;
}

RegistryParseResult parse_pool_registry(std::istream& in, const ParseOptions& opts) {
  IstreamSource source{in};
  return parse_pool_registry_impl(source, opts);
}

RegistryParseResult load_pool_registry(const std::filesystem::path& path,
                                       const ParseOptions& opts) {
  GzLineReader source(path);
  return parse_pool_registry_impl(source, opts);
}

TransferParseResult parse_transfers(std::istream& in, const BlockRange& range,
                                    const ParseOptions& opts) {
  IstreamSource source{in};
  return parse_transfers_impl(source, range, opts);
}

TransferParseResult load_transfers(const std::filesystem::path& path, const BlockRange& range,
                                   const ParseOptions& opts) {
  GzLineReader source(path);
  return parse_transfers_impl(source, range, opts);
}

ResolveResult resolve_edge_events(std::span<const TransferRecord> records,
                                  const PoolRegistry& registry) {
  ResolveResult result;
  result.events.reserve(records.size());
  for (const TransferRecord& record : records) {
    const Pool* pool = registry.find(record.pool);
    if (pool == nullptr) {
      ++result.unknown_pools;
      continue;
    }
    result.events.push_back(
        EdgeEvent::make(record.block, pool->token0, pool->token1, record.platform));
  }
  return result;
}

}  // namespace dexnet
