#include "dcx/service.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <thread>
#include <vector>

#include "dcx/complexity.hpp"
#include "dcx/detail/dialog_json.hpp"
#include "dcx/errors.hpp"

#include "httplib.h"

namespace dcx {

using nlohmann::json;

ServiceConfig service_config_from_json(const json& j) {
  if (!j.is_object()) {
    throw UsageError("service config must be a JSON object");
  }
  ServiceConfig config;
  try {
    config.lexicon_dir = j.at("lexicon_dir").get<std::string>();
    config.bind_address = j.value("bind_address", config.bind_address);
    config.port = j.value("port", config.port);
    config.body_limit_bytes =
        j.value("body_limit_bytes", config.body_limit_bytes);
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed service config: ") + e.what());
  }
  if (config.port < 0 || config.port > 65535) {
    throw UsageError("service port must lie in [0, 65535]");
  }
  if (config.body_limit_bytes == 0) {
    throw UsageError("body limit must be positive");
  }
  return config;
}

ServiceConfig load_service_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot open service config: " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw UsageError("malformed service config " + path.string() + ": " +
                     e.what());
  }
  return service_config_from_json(j);
}

DomainRegistry DomainRegistry::load(const std::filesystem::path& lexicon_dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(lexicon_dir, ec)) {
    throw UsageError("lexicon directory not found: " + lexicon_dir.string());
  }

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(lexicon_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  DomainRegistry registry;
  for (const auto& file : files) {
    registry.add(load_domain_profile(file));
  }
  return registry;
}

void DomainRegistry::add(DomainProfile profile) {
  const std::string name = profile.lexicon.domain;
  if (name.empty()) {
    throw DataError("registry: lexicon with an empty domain name");
  }
  auto [it, inserted] = entries_.emplace(name, std::move(profile));
  if (!inserted) {
    throw DataError("registry: duplicate domain \"" + name + "\"");
  }
}

std::vector<std::string> DomainRegistry::domains() const {
  std::vector<std::string> names;
  names.reserve(entries_.size());
  for (const auto& [name, _] : entries_) names.push_back(name);
  return names;
}

const DomainProfile* DomainRegistry::find(const std::string& domain) const {
  auto it = entries_.find(domain);
  return it == entries_.end() ? nullptr : &it->second;
}

json score_dialog_request(const DomainProfile& profile, const json& body) {
  ParseWarnings warnings;
  const Dialog dialog =
      detail::dialog_from_json(body, profile.role_mode, warnings, "body");
  if (dialog.turns.empty()) {
    throw DataError("body: field \"utterances\" must not be empty");
  }

  json response;
  response["domain"] = profile.lexicon.domain;
  response["dialog_id"] = dialog.id;
  response["max_turns"] = profile.max_turns;

  json utterances = json::array();
  json turns = json::array();
  int u_index = 0;
  for (const Turn& t : dialog.turns) {
    for (const Utterance& u : t.utterances) {
      utterances.push_back(
          {{"index", u_index++},
           {"score", utterance_complexity(u, profile.lexicon, profile.config)}});
    }
  }
  for (std::size_t i = 0; i < dialog.turns.size(); ++i) {
    turns.push_back({{"index", static_cast<int>(i)},
                     {"score", weighted_turn_complexity(
                                   dialog.turns[i], profile.lexicon,
                                   profile.config)}});
  }
  response["utterances"] = std::move(utterances);
  response["turns"] = std::move(turns);

  const ScoredDialog scored = dialog_complexity(
      dialog, profile.lexicon, profile.config, profile.max_turns);
  response["dialog"] = {{"content", scored.content},
                        {"structure", scored.structure},
                        {"score", scored.score},
                        {"structure_clamped", scored.structure_clamped}};
  return response;
}

struct ScoringServer::Impl {
  DomainRegistry registry;
  httplib::Server server;

  explicit Impl(DomainRegistry reg, std::size_t body_limit)
      : registry(std::move(reg)) {
    server.set_payload_max_length(body_limit);
    install_routes("");
    install_routes("/v1");
  }

  static void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  void install_routes(const std::string& prefix) {
    server.Get(prefix + "/domains",
               [this](const httplib::Request&, httplib::Response& res) {
                 send_json(res, 200, json(registry.domains()));
               });

    server.Get(prefix + "/healthz",
               [this](const httplib::Request&, httplib::Response& res) {
                 send_json(res, 200,
                           json{{"status", "ok"},
                                {"domains", registry.size()}});
               });

    server.Post(
        prefix + "/score/:domain",
        [this](const httplib::Request& req, httplib::Response& res) {
          const std::string domain = req.path_params.at("domain");
          const DomainProfile* profile = registry.find(domain);
          if (!profile) {
            send_json(res, 404,
                      json{{"error", "unknown domain \"" + domain + "\""}});
            return;
          }
          json body;
          try {
            body = json::parse(req.body);
          } catch (const json::parse_error& e) {
            send_json(res, 400,
                      json{{"error", std::string("malformed JSON body: ") +
                                         e.what()}});
            return;
          }
          try {
            send_json(res, 200, score_dialog_request(*profile, body));
          } catch (const DataError& e) {
            send_json(res, 400, json{{"error", e.what()}});
          }
        });
  }
};

ScoringServer::ScoringServer(DomainRegistry registry,
                             std::size_t body_limit_bytes)
    : impl_(std::make_unique<Impl>(std::move(registry), body_limit_bytes)) {}

ScoringServer::~ScoringServer() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool ScoringServer::listen(const std::string& host, int port) {
  return impl_->server.listen(host, port);
}

int ScoringServer::bind_any_port(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool ScoringServer::listen_after_bind() {
  return impl_->server.listen_after_bind();
}

void ScoringServer::stop() { impl_->server.stop(); }

bool ScoringServer::wait_until_ready(int timeout_ms) const {
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  while (!impl_->server.is_running()) {
    if (std::chrono::steady_clock::now() > deadline) return false;
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  return true;
}

}  // namespace dcx
