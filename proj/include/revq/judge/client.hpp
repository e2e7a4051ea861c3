#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <atomic>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include <json.hpp>

#include "revq/judge/phase.hpp"

namespace revq::judge {

/// Pinned decoding configuration for every judge call.
struct DecodeParams {
  double temperature = 0.0;
  double top_p = 0.95;
  bool operator==(const DecodeParams&) const = default;
};

struct JudgeRequest {
  Phase phase;
  SlotMap slots;
  DecodeParams decode;
};

struct Provenance {
  std::string backend_id;
  std::string digest;
  bool cache_hit = false;
};

struct JudgeResponse {
  std::string raw_text;
  nlohmann::json parsed;
  Provenance provenance;
};

/// Content digest of a request: SHA-256 over the canonicalized
/// (phase id, sorted slots, decode params, backend id) tuple. The backend
/// identity is part of the digest so responses from different judge models
/// never poison each other's caches.
std::string request_digest(const JudgeRequest& request,
                           const std::string& backend_id);

/// SHA-256 hex digest of arbitrary bytes.
std::string sha256_hex(std::string_view bytes);

enum class CacheMode { Record, Replay, Passthrough };

std::string_view cache_mode_name(CacheMode mode);
CacheMode cache_mode_from_name(std::string_view name);

/// Content-addressed store of raw judge responses: one file per digest plus a
/// metadata sidecar. Concurrent reads, serialized writes. With an empty
/// directory path the store is memory-only.
class ReplayStore {
 public:
  ReplayStore() = default;
  explicit ReplayStore(std::filesystem::path dir);

  std::optional<std::string> get(const std::string& digest) const;
  void put(const std::string& digest, const std::string& raw,
           const nlohmann::json& metadata);
  std::optional<nlohmann::json> metadata(const std::string& digest) const;

  /// Digests present on disk / in memory, sorted.
  std::vector<std::string> digests() const;

  const std::filesystem::path& directory() const { return dir_; }

 private:
  std::filesystem::path dir_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::string, std::string> entries_;
  mutable std::map<std::string, nlohmann::json> metadata_;
};

/// Completion backend. The HTTP implementation talks to a generateContent
/// style endpoint; tests substitute deterministic stubs.
class JudgeBackend {
 public:
  virtual ~JudgeBackend() = default;
  /// Returns the raw response text. Throws TransportError on failure.
  virtual std::string complete(const JudgeRequest& request,
                               const std::string& prompt) = 0;
  virtual std::string id() const = 0;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds base_delay{250};
  /// Injectable sleep so tests can run without waiting.
  std::function<void(std::chrono::milliseconds)> sleep;
  /// Seed for backoff jitter; fixed default keeps runs reproducible.
  unsigned jitter_seed = 0x5eed;
};

struct HttpBackendConfig {
  std::string model = "gemini-2.5-flash-lite";
  std::string base_url = "https://generativelanguage.googleapis.com";
  std::string api_key_env = "REVQ_JUDGE_API_KEY";
  std::chrono::seconds timeout{120};
};

std::unique_ptr<JudgeBackend> make_http_backend(HttpBackendConfig config);

struct InvokeOptions {
  /// In record mode, skip the cache lookup and overwrite the stored entry
  /// (used for the one bounded re-ask after a length mismatch).
  bool bypass_cache = false;
};

/// Simple usage counter: judge calls issued and bytes moved. Cache hits are
/// counted separately from backend completions.
struct UsageCounter {
  std::atomic<long> backend_calls{0};
  std::atomic<long> cache_hits{0};
  std::atomic<long> prompt_bytes{0};
  std::atomic<long> response_bytes{0};
};

/// Collects the digests a pipeline granule touched, for profile provenance.
class DigestTrace {
 public:
  void add(const std::string& digest);
  std::vector<std::string> sorted() const;

 private:
  mutable std::mutex mutex_;
  std::vector<std::string> digests_;
};

/// Staged-judge gateway: renders the prompt, resolves the cache, invokes the
/// backend under the retry policy, validates the response and returns it with
/// provenance. Thread-safe for concurrent invocation.
class JudgeClient {
 public:
  JudgeClient(std::shared_ptr<JudgeBackend> backend,
              std::shared_ptr<ReplayStore> store, CacheMode mode,
              RetryPolicy retry = {},
              std::shared_ptr<DigestTrace> trace = nullptr,
              DecodeParams decode = {});

  JudgeResponse invoke(const JudgeRequest& request,
                       const InvokeOptions& options = {}) const;

  /// Convenience: builds the request with the client's pinned decode params.
  JudgeResponse invoke(Phase phase, SlotMap slots,
                       const InvokeOptions& options = {}) const {
    return invoke(JudgeRequest{phase, std::move(slots), decode_}, options);
  }

  CacheMode mode() const { return mode_; }
  const std::string& backend_id() const { return backend_id_; }
  const std::shared_ptr<ReplayStore>& store() const { return store_; }
  const DecodeParams& decode_params() const { return decode_; }

  /// Optional shared counter; pass the same instance to every client of a run.
  void set_usage_counter(std::shared_ptr<UsageCounter> counter) {
    usage_ = std::move(counter);
  }

 private:
  std::string complete_with_retries(const JudgeRequest& request,
                                    const std::string& prompt) const;

  std::shared_ptr<JudgeBackend> backend_;
  std::shared_ptr<ReplayStore> store_;
  CacheMode mode_;
  RetryPolicy retry_;
  std::string backend_id_;
  std::shared_ptr<DigestTrace> trace_;
  DecodeParams decode_;
  std::shared_ptr<UsageCounter> usage_;
};

}  // namespace revq::judge
