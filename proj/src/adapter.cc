#include "sharedword/adapter.h"

#include <netdb.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/un.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sharedword/errors.h"
#include "sharedword/rng.h"

namespace sharedword {

namespace {

using nlohmann::json;

std::string errno_text() { return std::strerror(errno); }

void write_all(int fd, std::string_view data, bool is_socket) {
  while (!data.empty()) {
    const ssize_t n = is_socket ? ::send(fd, data.data(), data.size(), MSG_NOSIGNAL)
                                : ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError("adapter write failed: " + errno_text());
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

std::string read_line(int fd, std::string& buffer) {
  while (true) {
    if (auto nl = buffer.find('\n'); nl != std::string::npos) {
      std::string line = buffer.substr(0, nl);
      buffer.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    char chunk[4096];
    const ssize_t n = ::read(fd, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError("adapter read failed: " + errno_text());
    }
    if (n == 0) throw TransportError("adapter peer closed the connection");
    buffer.append(chunk, static_cast<std::size_t>(n));
  }
}

json parse_response(std::string_view line) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("adapter response is not JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ProtocolError("adapter response is not an object");
  if (auto it = doc.find("error"); it != doc.end()) {
    throw InvalidInputError("adapter rejected request: " + it->dump());
  }
  return doc;
}

}  // namespace

SocketTransport::SocketTransport(std::string address)
    : address_(std::move(address)) {}

SocketTransport::~SocketTransport() {
  if (fd_ >= 0) ::close(fd_);
}

void SocketTransport::connect_once() {
  if (fd_ >= 0) return;
  if (address_.find('/') != std::string::npos) {
    sockaddr_un addr{};
    addr.sun_family = AF_UNIX;
    if (address_.size() >= sizeof addr.sun_path) {
      throw TransportError("unix socket path too long: " + address_);
    }
    std::memcpy(addr.sun_path, address_.c_str(), address_.size() + 1);
    const int fd = ::socket(AF_UNIX, SOCK_STREAM, 0);
    if (fd < 0) throw TransportError("socket(): " + errno_text());
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
      const std::string why = errno_text();
      ::close(fd);
      throw TransportError("cannot connect to " + address_ + ": " + why);
    }
    fd_ = fd;
    return;
  }

  const auto colon = address_.rfind(':');
  if (colon == std::string::npos) {
    throw TransportError("socket address must be a path or HOST:PORT: " +
                         address_);
  }
  const std::string host = address_.substr(0, colon);
  const std::string port = address_.substr(colon + 1);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* found = nullptr;
  if (const int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &found);
      rc != 0) {
    throw TransportError("cannot resolve " + address_ + ": " + gai_strerror(rc));
  }
  for (addrinfo* ai = found; ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      fd_ = fd;
      break;
    }
    ::close(fd);
  }
  ::freeaddrinfo(found);
  if (fd_ < 0) throw TransportError("cannot connect to " + address_);
}

std::string SocketTransport::round_trip(std::string_view request) {
  connect_once();
  std::string line(request);
  line += '\n';
  try {
    write_all(fd_, line, /*is_socket=*/true);
    return read_line(fd_, buffer_);
  } catch (const TransportError&) {
    ::close(fd_);
    fd_ = -1;
    buffer_.clear();
    throw;
  }
}

PipeTransport::PipeTransport(std::string command) : command_(std::move(command)) {
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe(in_pipe) != 0) throw TransportError("pipe(): " + errno_text());
  if (::pipe(out_pipe) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw TransportError("pipe(): " + errno_text());
  }
  const pid_t pid = ::fork();
  if (pid < 0) throw TransportError("fork(): " + errno_text());
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    std::_Exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  pid_ = pid;
  // A dead child must surface as TransportError, not kill us with SIGPIPE.
  ::signal(SIGPIPE, SIG_IGN);
}

PipeTransport::~PipeTransport() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  if (pid_ > 0) {
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }
}

std::string PipeTransport::round_trip(std::string_view request) {
  std::string line(request);
  line += '\n';
  write_all(to_child_, line, /*is_socket=*/false);
  return read_line(from_child_, buffer_);
}

CachingTransport::CachingTransport(std::filesystem::path directory,
                                   std::unique_ptr<LineTransport> inner)
    : directory_(std::move(directory)), inner_(std::move(inner)) {
  std::error_code ec;
  std::filesystem::create_directories(directory_, ec);
  if (ec) {
    throw ConfigError("cannot create adapter cache directory " +
                      directory_.string() + ": " + ec.message());
  }
}

std::string CachingTransport::round_trip(std::string_view request) {
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.txt",
                static_cast<unsigned long long>(fnv1a64(request)));
  const auto path = directory_ / name;
  if (std::ifstream in(path, std::ios::binary); in) {
    std::string cached_request;
    std::string cached_response;
    if (std::getline(in, cached_request) && std::getline(in, cached_response) &&
        cached_request == request) {
      return cached_response;
    }
  }
  std::string response = inner_->round_trip(request);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << request << '\n' << response << '\n';
  return response;
}

std::unique_ptr<LineTransport> make_transport(std::string_view kind,
                                              std::string_view address) {
  std::unique_ptr<LineTransport> transport;
  if (kind == "socket") {
    transport = std::make_unique<SocketTransport>(std::string(address));
  } else if (kind == "pipe") {
    transport = std::make_unique<PipeTransport>(std::string(address));
  } else {
    throw ConfigError("unknown adapter transport '" + std::string(kind) +
                      "' (expected socket or pipe)");
  }
  if (const char* dir = std::getenv(kCacheEnvVar); dir != nullptr && *dir) {
    transport = std::make_unique<CachingTransport>(dir, std::move(transport));
  }
  return transport;
}

std::string encode_predict_request(std::span<const PairView> pairs) {
  json batch = json::array();
  for (const PairView& view : pairs) {
    if (view.p == nullptr || view.q == nullptr) {
      throw InvalidInputError("pair view references no sentence");
    }
    batch.push_back(json::array({view.p->surfaces(), view.q->surfaces()}));
  }
  return json{{"pairs", std::move(batch)}}.dump();
}

std::vector<ClassDistribution> decode_predict_response(std::string_view line,
                                                       std::size_t expected) {
  const json doc = parse_response(line);
  std::vector<ClassDistribution> out;
  try {
    const auto& scores = doc.at("scores");
    if (!scores.is_array() || scores.size() != expected) {
      throw ProtocolError("adapter returned " + std::to_string(scores.size()) +
                          " scores for " + std::to_string(expected) + " pairs");
    }
    for (const auto& row : scores) {
      if (!row.is_array() || row.size() != 2) {
        throw ProtocolError("score row must be [p_positive, p_negative]");
      }
      ClassDistribution dist{row[0].get<double>(), row[1].get<double>()};
      if (!dist.normalized()) {
        throw ProtocolError("adapter scores are not a normalized distribution: " +
                            row.dump());
      }
      out.push_back(dist);
    }
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed predict response: ") + e.what());
  }
  return out;
}

std::string encode_mask_request(std::span<const MaskQuery> queries) {
  json sentences = json::array();
  json indices = json::array();
  for (const MaskQuery& query : queries) {
    if (query.sentence == nullptr || query.index >= query.sentence->size()) {
      throw InvalidInputError("mask index out of range");
    }
    sentences.push_back(query.sentence->surfaces());
    indices.push_back(query.index);
  }
  return json{{"sentences", std::move(sentences)},
              {"mask_indices", std::move(indices)}}
      .dump();
}

std::vector<MaskedDistribution> decode_mask_response(std::string_view line,
                                                     std::size_t expected) {
  const json doc = parse_response(line);
  std::vector<MaskedDistribution> out;
  try {
    const auto& dists = doc.at("distributions");
    if (!dists.is_array() || dists.size() != expected) {
      throw ProtocolError("adapter returned " + std::to_string(dists.size()) +
                          " distributions for " + std::to_string(expected) +
                          " queries");
    }
    for (const auto& dist : dists) {
      std::vector<MaskedDistribution::Entry> entries;
      for (const auto& [word, prob] : dist.items()) {
        entries.emplace_back(word, prob.get<double>());
      }
      try {
        out.emplace_back(std::move(entries));
      } catch (const InvalidInputError& e) {
        throw ProtocolError(std::string("adapter distribution invalid: ") +
                            e.what());
      }
    }
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed mask response: ") + e.what());
  }
  return out;
}

AdapterModel::AdapterModel(std::unique_ptr<LineTransport> transport,
                           std::string description)
    : transport_(std::move(transport)), description_(std::move(description)) {}

std::vector<ClassDistribution> AdapterModel::predict(
    std::span<const PairView> pairs) const {
  if (pairs.empty()) return {};
  const std::string request = encode_predict_request(pairs);
  std::lock_guard lock(mutex_);
  return decode_predict_response(transport_->round_trip(request), pairs.size());
}

AdapterLm::AdapterLm(std::unique_ptr<LineTransport> transport)
    : transport_(std::move(transport)) {}

std::vector<MaskedDistribution> AdapterLm::mask_distributions(
    std::span<const MaskQuery> queries) const {
  if (queries.empty()) return {};
  const std::string request = encode_mask_request(queries);
  std::lock_guard lock(mutex_);
  return decode_mask_response(transport_->round_trip(request), queries.size());
}

}  // namespace sharedword
