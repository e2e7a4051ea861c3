#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace revq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A prompt slot required by the phase template was not supplied (or was empty).
class MissingSlotError : public Error {
 public:
  explicit MissingSlotError(const std::string& slot)
      : Error("missing or empty slot: " + slot), slot_(slot) {}
  const std::string& slot() const { return slot_; }

 private:
  std::string slot_;
};

class UnknownPhaseError : public Error {
 public:
  explicit UnknownPhaseError(const std::string& phase)
      : Error("unknown phase: " + phase) {}
};

/// A judge response failed strict-JSON validation. Carries the raw text for
/// audit plus a path to the first offending key.
class SchemaViolation : public Error {
 public:
  SchemaViolation(std::string path, const std::string& why, std::string raw = {})
      : Error("schema violation at " + path + ": " + why),
        path_(std::move(path)),
        raw_(std::move(raw)) {}
  const std::string& path() const { return path_; }
  const std::string& raw_text() const { return raw_; }

 private:
  std::string path_;
  std::string raw_;
};

/// Replay-mode cache lookup failed. Never falls through to the network.
class ReplayMissError : public Error {
 public:
  explicit ReplayMissError(const std::string& digest)
      : Error("replay miss for digest " + digest) {}
};

/// Transport-level failure that survived the retry policy.
class TransportError : public Error {
 public:
  explicit TransportError(const std::string& msg) : Error(msg) {}
};

/// The judge altered the review text during segmentation.
class ReconstructionMismatch : public Error {
 public:
  explicit ReconstructionMismatch(const std::string& msg) : Error(msg) {}
};

/// Precondition violations on pure operations (empty inputs, bad vectors...).
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

}  // namespace revq
