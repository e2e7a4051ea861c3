#include "revq/judge/client.hpp"

#include <cstdlib>
#include <fstream>
#include <random>
#include <thread>

#include <httplib.h>
#include <openssl/evp.h>

#include "revq/errors.hpp"
#include "revq/judge/schema.hpp"

namespace revq::judge {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string request_digest(const JudgeRequest& request,
                           const std::string& backend_id) {
  json canonical;
  canonical["phase"] = std::string(phase_id(request.phase));
  canonical["slots"] = json::object();
  for (const auto& [k, v] : request.slots) canonical["slots"][k] = v;
  canonical["params"] = {{"temperature", request.decode.temperature},
                         {"top_p", request.decode.top_p}};
  canonical["backend"] = backend_id;
  return sha256_hex(canonical.dump());
}

std::string_view cache_mode_name(CacheMode mode) {
  switch (mode) {
    case CacheMode::Record: return "record";
    case CacheMode::Replay: return "replay";
    case CacheMode::Passthrough: return "passthrough";
  }
  return "record";
}

CacheMode cache_mode_from_name(std::string_view name) {
  if (name == "record") return CacheMode::Record;
  if (name == "replay") return CacheMode::Replay;
  if (name == "passthrough") return CacheMode::Passthrough;
  throw InvalidArgument("unknown cache mode: " + std::string(name));
}

ReplayStore::ReplayStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

std::optional<std::string> ReplayStore::get(const std::string& digest) const {
  {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(digest);
    if (it != entries_.end()) return it->second;
  }
  if (dir_.empty()) return std::nullopt;
  std::filesystem::path path = dir_ / (digest + ".txt");
  if (!std::filesystem::exists(path)) return std::nullopt;
  std::string raw = read_file(path);
  std::unique_lock lock(mutex_);
  entries_[digest] = raw;
  return raw;
}

void ReplayStore::put(const std::string& digest, const std::string& raw,
                      const json& metadata) {
  std::unique_lock lock(mutex_);
  if (!dir_.empty()) {
    write_file_atomic(dir_ / (digest + ".txt"), raw);
    write_file_atomic(dir_ / (digest + ".meta.json"), metadata.dump(2) + "\n");
  }
  entries_[digest] = raw;
  metadata_[digest] = metadata;
}

std::optional<json> ReplayStore::metadata(const std::string& digest) const {
  {
    std::shared_lock lock(mutex_);
    auto it = metadata_.find(digest);
    if (it != metadata_.end()) return it->second;
  }
  if (dir_.empty()) return std::nullopt;
  std::filesystem::path path = dir_ / (digest + ".meta.json");
  if (!std::filesystem::exists(path)) return std::nullopt;
  json meta = json::parse(read_file(path), nullptr, false);
  if (meta.is_discarded()) return std::nullopt;
  std::unique_lock lock(mutex_);
  metadata_[digest] = meta;
  return meta;
}

std::vector<std::string> ReplayStore::digests() const {
  std::vector<std::string> out;
  {
    std::shared_lock lock(mutex_);
    for (const auto& [k, _] : entries_) out.push_back(k);
  }
  if (!dir_.empty() && std::filesystem::exists(dir_)) {
    for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
      const auto name = entry.path().filename().string();
      if (name.size() > 4 && name.ends_with(".txt"))
        out.push_back(name.substr(0, name.size() - 4));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

/// Talks to a generateContent-compatible HTTP JSON endpoint.
class HttpJudgeBackend : public JudgeBackend {
 public:
  explicit HttpJudgeBackend(HttpBackendConfig config) : config_(std::move(config)) {}

  std::string id() const override { return config_.model; }

  std::string complete(const JudgeRequest& request,
                       const std::string& prompt) override {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (key == nullptr || *key == '\0')
      throw TransportError("judge API key not set (env " + config_.api_key_env +
                           ")");

    json body = {
        {"contents", json::array({json{{"parts", json::array({json{
                                       {"text", prompt}}})}}})},
        {"generationConfig",
         {{"temperature", request.decode.temperature},
          {"topP", request.decode.top_p}}},
    };

    httplib::Client client(config_.base_url);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    std::string path = "/v1beta/models/" + config_.model +
                       ":generateContent?key=" + std::string(key);
    auto res = client.Post(path, body.dump(), "application/json");
    if (!res)
      throw TransportError("connection failure: " +
                           httplib::to_string(res.error()));
    if (res->status >= 500)
      throw TransportError("server error " + std::to_string(res->status));
    if (res->status != 200)
      throw TransportError("unexpected status " + std::to_string(res->status) +
                           " (not retried): " + res->body);

    json doc = json::parse(res->body, nullptr, false);
    if (doc.is_discarded())
      throw TransportError("malformed transport envelope");
    try {
      std::string out;
      for (const auto& part : doc.at("candidates").at(0).at("content").at("parts"))
        out += part.at("text").get<std::string>();
      return out;
    } catch (const json::exception& e) {
      throw TransportError(std::string("unexpected response envelope: ") +
                           e.what());
    }
  }

 private:
  HttpBackendConfig config_;
};

bool is_retryable(const TransportError& e) {
  // 4xx-class failures carry a "(not retried)" marker; everything else
  // (connection failures, 5xx) is considered transient.
  return std::string_view(e.what()).find("(not retried)") == std::string_view::npos;
}

}  // namespace

std::unique_ptr<JudgeBackend> make_http_backend(HttpBackendConfig config) {
  return std::make_unique<HttpJudgeBackend>(std::move(config));
}

void DigestTrace::add(const std::string& digest) {
  std::lock_guard lock(mutex_);
  digests_.push_back(digest);
}

std::vector<std::string> DigestTrace::sorted() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out = digests_;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

JudgeClient::JudgeClient(std::shared_ptr<JudgeBackend> backend,
                         std::shared_ptr<ReplayStore> store, CacheMode mode,
                         RetryPolicy retry, std::shared_ptr<DigestTrace> trace,
                         DecodeParams decode)
    : backend_(std::move(backend)),
      store_(std::move(store)),
      mode_(mode),
      retry_(std::move(retry)),
      backend_id_(backend_ ? backend_->id() : ""),
      trace_(std::move(trace)),
      decode_(decode) {
  if (!retry_.sleep)
    retry_.sleep = [](std::chrono::milliseconds d) {
      std::this_thread::sleep_for(d);
    };
}

std::string JudgeClient::complete_with_retries(const JudgeRequest& request,
                                               const std::string& prompt) const {
  std::mt19937 rng(retry_.jitter_seed);
  std::uniform_int_distribution<int> jitter(0, 100);
  for (int attempt = 1;; ++attempt) {
    try {
      return backend_->complete(request, prompt);
    } catch (const TransportError& e) {
      if (!is_retryable(e) || attempt >= retry_.max_attempts) throw;
      auto delay = retry_.base_delay * (1 << (attempt - 1)) +
                   std::chrono::milliseconds(jitter(rng));
      retry_.sleep(delay);
    }
  }
}

JudgeResponse JudgeClient::invoke(const JudgeRequest& request,
                                  const InvokeOptions& options) const {
  const std::string prompt = render_prompt(request.phase, request.slots);
  const std::string digest = request_digest(request, backend_id_);
  if (trace_) trace_->add(digest);

  JudgeResponse response;
  response.provenance.backend_id = backend_id_;
  response.provenance.digest = digest;

  std::optional<std::string> cached;
  if (mode_ != CacheMode::Passthrough && !options.bypass_cache)
    cached = store_->get(digest);

  if (cached) {
    response.raw_text = *cached;
    response.provenance.cache_hit = true;
    if (usage_) ++usage_->cache_hits;
  } else {
    if (mode_ == CacheMode::Replay) throw ReplayMissError(digest);
    response.raw_text = complete_with_retries(request, prompt);
    if (usage_) {
      ++usage_->backend_calls;
      usage_->prompt_bytes += static_cast<long>(prompt.size());
      usage_->response_bytes += static_cast<long>(response.raw_text.size());
    }
    if (mode_ == CacheMode::Record) {
      json meta = {
          {"digest", digest},
          {"phase", std::string(phase_id(request.phase))},
          {"backend", backend_id_},
          {"params",
           {{"temperature", request.decode.temperature},
            {"top_p", request.decode.top_p}}},
      };
      store_->put(digest, response.raw_text, meta);
    }
  }

  response.parsed = parse_strict_json(response.raw_text, request.phase);
  return response;
}

}  // namespace revq::judge
