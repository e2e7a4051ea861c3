#include "revq/retrieval/client.hpp"

#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "revq/errors.hpp"

namespace revq::retrieval {

namespace {

using nlohmann::json;

class HttpScholarTransport : public SearchTransport {
 public:
  explicit HttpScholarTransport(ScholarConfig config)
      : config_(std::move(config)), limiter_(config_.min_request_interval) {}

  std::string search(const SearchQuery& query) override {
    limiter_.acquire();
    httplib::Client client(config_.base_url);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);

    httplib::Headers headers;
    if (const char* key = std::getenv(config_.api_key_env.c_str());
        key != nullptr && *key != '\0')
      headers.emplace("x-api-key", key);

    std::string fields;
    for (const auto& f : query.fields) {
      if (!fields.empty()) fields += ",";
      fields += f;
    }
    httplib::Params params{{"query", query.text},
                           {"limit", std::to_string(query.limit)},
                           {"fields", fields}};
    auto res = client.Get("/graph/v1/paper/search", params, headers);
    if (!res)
      throw TransportError("scholar search connection failure: " +
                           httplib::to_string(res.error()));
    if (res->status != 200)
      throw TransportError("scholar search status " +
                           std::to_string(res->status));
    return res->body;
  }

 private:
  ScholarConfig config_;
  RateLimiter limiter_;
};

}  // namespace

void RateLimiter::acquire() {
  std::unique_lock lock(mutex_);
  auto now = std::chrono::steady_clock::now();
  if (last_.time_since_epoch().count() != 0) {
    auto next_ok = last_ + min_interval_;
    if (now < next_ok) {
      std::this_thread::sleep_for(next_ok - now);
      now = std::chrono::steady_clock::now();
    }
  }
  last_ = now;
}

std::unique_ptr<SearchTransport> make_scholar_transport(ScholarConfig config) {
  return std::make_unique<HttpScholarTransport>(std::move(config));
}

ScholarClient::ScholarClient(std::shared_ptr<SearchTransport> transport,
                             std::shared_ptr<judge::ReplayStore> cache,
                             judge::CacheMode mode,
                             std::shared_ptr<judge::DigestTrace> trace)
    : transport_(std::move(transport)),
      cache_(std::move(cache)),
      mode_(mode),
      trace_(std::move(trace)) {}

std::string ScholarClient::query_digest(const SearchQuery& query) {
  json canonical = {{"kind", "scholar-search"},
                    {"query", query.text},
                    {"limit", query.limit},
                    {"fields", query.fields}};
  return judge::sha256_hex(canonical.dump());
}

std::vector<CandidateWork> ScholarClient::parse_response(const std::string& body) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded())
    throw SchemaViolation("$", "search response is not valid JSON", body);
  std::vector<CandidateWork> out;
  const json& data = doc.value("data", json::array());
  std::size_t rank = 0;
  for (const auto& item : data) {
    ++rank;
    CandidateWork c;
    c.id = item.value("paperId", "");
    if (c.id.empty()) continue;
    c.title = item.value("title", "");
    if (item.contains("abstract") && item["abstract"].is_string())
      c.abstract = item["abstract"].get<std::string>();
    if (item.contains("year") && item["year"].is_number())
      c.year = item["year"].get<int>();
    if (item.contains("publicationTypes") && item["publicationTypes"].is_array())
      for (const auto& t : item["publicationTypes"])
        if (t.is_string()) c.publication_types.push_back(t.get<std::string>());
    if (item.contains("score") && item["score"].is_number())
      c.relevance = item["score"].get<double>();
    else
      c.relevance = 1.0 / static_cast<double>(rank);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<CandidateWork> ScholarClient::search(const SearchQuery& query) {
  const std::string digest = query_digest(query);
  if (trace_) trace_->add(digest);

  std::optional<std::string> cached;
  if (mode_ != judge::CacheMode::Passthrough) cached = cache_->get(digest);

  std::string body;
  if (cached) {
    body = *cached;
  } else {
    if (mode_ == judge::CacheMode::Replay) throw ReplayMissError(digest);
    body = transport_->search(query);
    if (mode_ == judge::CacheMode::Record) {
      json meta = {{"digest", digest},
                   {"kind", "scholar-search"},
                   {"query", query.text},
                   {"limit", query.limit}};
      cache_->put(digest, body, meta);
    }
  }
  return parse_response(body);
}

std::vector<CandidateWork> ScholarClient::search_all(
    const std::vector<SearchQuery>& queries) {
  std::vector<std::vector<CandidateWork>> per_query;
  per_query.reserve(queries.size());
  for (const auto& q : queries) per_query.push_back(search(q));
  return merge_by_id(per_query);
}

}  // namespace revq::retrieval
