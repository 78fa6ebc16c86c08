#pragma once

// Clients for externally served models. Both roles speak UTF-8 JSON Lines,
// one request line answered by one response line:
//
//   target model:  {"pairs": [[[tokensP], [tokensQ]], ...]}
//               -> {"scores": [[p_positive, p_negative], ...]}
//   masked LM:     {"sentences": [[tokens], ...], "mask_indices": [int, ...]}
//               -> {"distributions": [{word: prob}, ...]}
//
// A response of the form {"error": "..."} reports a rejected request.
// [PAD] is sent verbatim; the serving side maps it to its native pad token.

#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "sharedword/maskedlm.h"
#include "sharedword/target.h"

namespace sharedword {

class LineTransport {
 public:
  virtual ~LineTransport() = default;
  // Sends one line (without trailing newline) and returns the reply line.
  // Throws TransportError on connection failures.
  virtual std::string round_trip(std::string_view request) = 0;
};

// Unix-domain socket when the address contains '/', otherwise HOST:PORT over
// TCP. Connects on first use.
class SocketTransport : public LineTransport {
 public:
  explicit SocketTransport(std::string address);
  ~SocketTransport() override;
  SocketTransport(const SocketTransport&) = delete;
  SocketTransport& operator=(const SocketTransport&) = delete;

  std::string round_trip(std::string_view request) override;

 private:
  void connect_once();

  std::string address_;
  int fd_ = -1;
  std::string buffer_;
};

// Spawns `/bin/sh -c command` and talks over its stdin/stdout.
class PipeTransport : public LineTransport {
 public:
  explicit PipeTransport(std::string command);
  ~PipeTransport() override;
  PipeTransport(const PipeTransport&) = delete;
  PipeTransport& operator=(const PipeTransport&) = delete;

  std::string round_trip(std::string_view request) override;

 private:
  std::string command_;
  int to_child_ = -1;
  int from_child_ = -1;
  int pid_ = -1;
  std::string buffer_;
};

// Memoizes request -> response pairs as files in a directory.
class CachingTransport : public LineTransport {
 public:
  CachingTransport(std::filesystem::path directory,
                   std::unique_ptr<LineTransport> inner);

  std::string round_trip(std::string_view request) override;

 private:
  std::filesystem::path directory_;
  std::unique_ptr<LineTransport> inner_;
};

// Environment variable naming the optional response cache directory.
inline constexpr const char* kCacheEnvVar = "SHAREDWORD_ATTACK_CACHE";

// kind is "socket" or "pipe". Wraps the transport in a CachingTransport when
// SHAREDWORD_ATTACK_CACHE is set.
std::unique_ptr<LineTransport> make_transport(std::string_view kind,
                                              std::string_view address);

// Requests on one connection are serialized with a mutex, so the adapter
// reports itself as not concurrent-safe and callers use one worker.
class AdapterModel : public TargetModel {
 public:
  explicit AdapterModel(std::unique_ptr<LineTransport> transport,
                        std::string description = "adapter");

  std::vector<ClassDistribution> predict(
      std::span<const PairView> pairs) const override;
  bool concurrent_safe() const override { return false; }
  std::string describe() const override { return description_; }

 private:
  std::unique_ptr<LineTransport> transport_;
  std::string description_;
  mutable std::mutex mutex_;
};

class AdapterLm : public MaskedLanguageModel {
 public:
  explicit AdapterLm(std::unique_ptr<LineTransport> transport);

  std::vector<MaskedDistribution> mask_distributions(
      std::span<const MaskQuery> queries) const override;
  bool concurrent_safe() const override { return false; }

 private:
  std::unique_ptr<LineTransport> transport_;
  mutable std::mutex mutex_;
};

// Wire encoders/decoders, exposed for serving-side code and tests.
std::string encode_predict_request(std::span<const PairView> pairs);
std::vector<ClassDistribution> decode_predict_response(std::string_view line,
                                                       std::size_t expected);
std::string encode_mask_request(std::span<const MaskQuery> queries);
std::vector<MaskedDistribution> decode_mask_response(std::string_view line,
                                                     std::size_t expected);

}  // namespace sharedword
