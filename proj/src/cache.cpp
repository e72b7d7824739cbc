#include <atomic>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "weilscope/campaign.hpp"
#include "weilscope/digest.hpp"
#include "weilscope/error.hpp"

namespace weilscope {

namespace {

// Bumped whenever a check's payload layout changes, so stale records miss.
constexpr int kCacheVersion = 1;

nlohmann::json findings_json(const std::vector<Finding>& findings) {
  auto arr = nlohmann::json::array();
  for (const auto& f : findings) arr.push_back(to_json(f));
  return arr;
}

}  // namespace

ResultCache::ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::string ResultCache::make_key(std::string_view field, std::uint64_t s, std::string_view check, bool witness) {
  return "v" + std::to_string(kCacheVersion) + "|" + std::string(field) + "|" + std::to_string(s) + "|" +
         std::string(check) + (witness ? "|witness" : "");
}

std::filesystem::path ResultCache::path_for(std::string_view key) const {
  const std::string h = sha256_hex(key);
  return dir_ / h.substr(0, 2) / (h + ".json");
}

std::optional<std::vector<Finding>> ResultCache::get(std::string_view key) const {
  const auto path = path_for(key);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    const auto j = nlohmann::json::parse(buf.str());
    const auto& findings = j.at("findings");
    if (j.at("key").get<std::string>() != key || j.at("checksum").get<std::string>() != sha256_hex(findings.dump()))
      throw Error(Errc::CacheCorrupt, "checksum mismatch in " + path.string());
    std::vector<Finding> out;
    for (const auto& f : findings) out.push_back(finding_from_json(f));
    return out;
  } catch (const Error& e) {
    if (e.code() == Errc::CacheCorrupt) throw;
    throw Error(Errc::CacheCorrupt, "unreadable cache record " + path.string() + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(Errc::CacheCorrupt, "unreadable cache record " + path.string() + ": " + e.what());
  }
}

void ResultCache::put(std::string_view key, const std::vector<Finding>& findings) const {
  static std::atomic<std::uint64_t> counter{0};
  const auto path = path_for(key);
  std::filesystem::create_directories(path.parent_path());
  const auto arr = findings_json(findings);
  const nlohmann::json record{{"key", key}, {"checksum", sha256_hex(arr.dump())}, {"findings", arr}};
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << record.dump();
    if (!out.flush()) throw Error(Errc::InvalidArgument, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace weilscope
