#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dcx/profile.hpp"

#include "json.hpp"

namespace dcx {

struct ServiceConfig {
  std::filesystem::path lexicon_dir;
  std::string bind_address = "127.0.0.1";
  int port = 8080;
  std::size_t body_limit_bytes = 1 << 20;
};

ServiceConfig service_config_from_json(const nlohmann::json& j);
ServiceConfig load_service_config(const std::filesystem::path& path);

/// Immutable map of domain name to scoring assets, loaded once from a
/// directory of lexicon files (*.json).
class DomainRegistry {
 public:
  DomainRegistry() = default;

  static DomainRegistry load(const std::filesystem::path& lexicon_dir);

  void add(DomainProfile profile);
  std::vector<std::string> domains() const;
  const DomainProfile* find(const std::string& domain) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, DomainProfile> entries_;
};

/// Pure request core of POST /score/{domain}: validates the dialog body
/// against the corpus line schema and returns per-level scores. Throws
/// DataError with the offending field path on schema violations.
nlohmann::json score_dialog_request(const DomainProfile& profile,
                                    const nlohmann::json& body);

/// HTTP scoring endpoint over an immutable registry.
///   GET  /domains            list of registered domains
///   POST /score/{domain}     score one dialog (corpus line schema)
///   GET  /healthz            registry summary
/// All routes are also served under the /v1 prefix. Requests larger than the
/// body limit are rejected with 413.
class ScoringServer {
 public:
  ScoringServer(DomainRegistry registry, std::size_t body_limit_bytes);
  ~ScoringServer();

  ScoringServer(const ScoringServer&) = delete;
  ScoringServer& operator=(const ScoringServer&) = delete;

  /// Blocking listen on a fixed port.
  bool listen(const std::string& host, int port);

  /// Binds an ephemeral port and returns it, -1 on failure. Follow with
  /// listen_after_bind() (blocking) on a worker thread.
  int bind_any_port(const std::string& host);
  bool listen_after_bind();

  /// Drains in-flight requests and stops the listener.
  void stop();
  bool wait_until_ready(int timeout_ms = 5000) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dcx
