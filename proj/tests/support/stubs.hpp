#pragma once

#include <atomic>
#include <functional>
#include <string>
#include <utility>

#include "revq/errors.hpp"
#include "revq/judge/client.hpp"
#include "revq/retrieval/client.hpp"

namespace revq::testing {

/// Judge backend driven by a lambda; sees the full request (phase + slots).
class FnBackend : public judge::JudgeBackend {
 public:
  using Fn = std::function<std::string(const judge::JudgeRequest&,
                                       const std::string& prompt)>;
  explicit FnBackend(Fn fn, std::string id = "stub-judge")
      : fn_(std::move(fn)), id_(std::move(id)) {}

  std::string complete(const judge::JudgeRequest& request,
                       const std::string& prompt) override {
    ++calls;
    return fn_(request, prompt);
  }
  std::string id() const override { return id_; }

  std::atomic<int> calls{0};

 private:
  Fn fn_;
  std::string id_;
};

/// Backend that must never be reached (replay hermeticity checks).
class ThrowingBackend : public judge::JudgeBackend {
 public:
  explicit ThrowingBackend(std::string id = "gemini-2.5-flash-lite")
      : id_(std::move(id)) {}
  std::string complete(const judge::JudgeRequest&, const std::string&) override {
    ++calls;
    throw TransportError("network touched in replay mode");
  }
  std::string id() const override { return id_; }
  std::atomic<int> calls{0};

 private:
  std::string id_;
};

class FnTransport : public retrieval::SearchTransport {
 public:
  using Fn = std::function<std::string(const retrieval::SearchQuery&)>;
  explicit FnTransport(Fn fn) : fn_(std::move(fn)) {}
  std::string search(const retrieval::SearchQuery& query) override {
    ++calls;
    return fn_(query);
  }
  std::atomic<int> calls{0};

 private:
  Fn fn_;
};

class ThrowingTransport : public retrieval::SearchTransport {
 public:
  std::string search(const retrieval::SearchQuery&) override {
    ++calls;
    throw TransportError("network touched in replay mode");
  }
  std::atomic<int> calls{0};
};

/// Retry policy with no real sleeping, for fast tests.
inline judge::RetryPolicy instant_retries(int max_attempts = 3) {
  judge::RetryPolicy p;
  p.max_attempts = max_attempts;
  p.sleep = [](std::chrono::milliseconds) {};
  return p;
}

}  // namespace revq::testing
