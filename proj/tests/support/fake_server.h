#pragma once

// Scripted adapter peer used by the pipe and socket transport tests.
//
// Predict requests get [0.75, 0.25] per pair; mask requests get
// {"alpha": 0.5, "beta": 0.5} per sentence. A token "ERROR" yields an error
// object, "GARBAGE" a non-JSON line, "SHORT" a response with one entry too
// few, "UNNORMALIZED" scores that do not sum to one.

#include <string>
#include <string_view>

namespace sharedword::testing {

std::string fake_adapter_reply(std::string_view request);

// Serves fake_adapter_reply on a unix socket from a background thread until
// destroyed.
class FakeSocketServer {
 public:
  explicit FakeSocketServer(std::string path);
  ~FakeSocketServer();
  FakeSocketServer(const FakeSocketServer&) = delete;
  FakeSocketServer& operator=(const FakeSocketServer&) = delete;

  const std::string& path() const { return path_; }
  int connections() const;

 private:
  struct Impl;
  std::string path_;
  Impl* impl_;
};

}  // namespace sharedword::testing
