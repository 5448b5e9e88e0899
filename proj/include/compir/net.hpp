// Copyright 2026 The compir Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COMPIR_NET_HPP_
#define COMPIR_NET_HPP_

// TCP transport for the wire protocol: a multi-threaded server and a
// client that talks to all k servers at once.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "compir/wire.hpp"

namespace compir {

struct ServerConfig {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;  // 0 picks a free port
  std::size_t workers = 2;
  std::size_t max_frame = kDefaultMaxFrame;
};

// Maps a request (type, payload) to a complete reply frame.
using RequestHandler =
    std::function<Bytes(std::uint8_t type, std::span<const std::uint8_t> payload)>;

// Connections stay open across requests and after ERROR replies, except
// for oversize frames, which are answered and then closed.
class Server {
 public:
  Server(RequestHandler handler, ServerConfig cfg);
  // Serves handle_request over `ctx`, which must outlive the server.
  Server(const ServerContext& ctx, ServerConfig cfg);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts the workers; returns the bound port.
  std::uint16_t start();
  void stop();
  // Blocks until stop() is called from another thread or a signal handler.
  void wait();
  std::uint16_t port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
  std::string str() const { return host + ":" + std::to_string(port); }
};

// "host:port,host:port". Throws std::invalid_argument.
std::vector<Endpoint> parse_endpoints(std::string_view list);

// COMPIR_TIMEOUT_MS if set and valid, else 30 s.
std::chrono::milliseconds default_timeout();

struct Exchange {
  bool ok = false;
  std::uint8_t type = 0;
  Bytes payload;
  std::string error;
  std::size_t bytes_sent = 0;
  std::size_t bytes_received = 0;
};

// Sends requests[j] to servers[j], one connection each, all in flight at
// once; results are indexed like the inputs. Anything not finished within
// `timeout` fails with "timeout".
std::vector<Exchange> exchange_all(std::span<const Endpoint> servers,
                                   std::span<const Bytes> requests,
                                   std::chrono::milliseconds timeout,
                                   std::size_t max_frame = kDefaultMaxFrame);

struct FetchOptions {
  std::chrono::milliseconds timeout = default_timeout();
  bool parallel_verify = false;
};

struct FetchReport {
  RetrievalResult result;
  std::vector<std::string> errors;  // per server, empty when fine
  std::vector<std::size_t> bytes_up;
  std::vector<std::size_t> bytes_down;
};

// Full client flow: queries, exchange, verification, reconstruction. Any
// server that cannot be reached or answers with garbage makes the
// outcome the rejection output.
FetchReport fetch(const CommitmentRecord& rec, const PublicParams& pp, std::size_t index,
                  std::span<const Endpoint> servers, Rng& rng, FetchOptions opts = {});

}  // namespace compir

#endif  // COMPIR_NET_HPP_
