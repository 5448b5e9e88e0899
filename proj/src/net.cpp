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

#include "compir/net.hpp"

#include <array>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include <boost/asio.hpp>

namespace compir {

namespace asio = boost::asio;
using asio::ip::tcp;

namespace {

asio::awaitable<void> serve_session(tcp::socket sock, RequestHandler& handler,
                                    std::size_t max_frame) {
  try {
    for (;;) {
      std::array<std::uint8_t, kFrameHeaderBytes> hdr;
      co_await asio::async_read(sock, asio::buffer(hdr), asio::use_awaitable);
      const FrameHeader h = decode_frame_header(hdr);
      if (h.length == 0) {
        const Bytes reply = encode_error(ErrorCode::kMalformed, "zero frame length");
        co_await asio::async_write(sock, asio::buffer(reply), asio::use_awaitable);
        co_return;  // stream position is lost
      }
      if (h.length > max_frame) {
        const Bytes reply = encode_error(ErrorCode::kOversize, "frame exceeds limit");
        co_await asio::async_write(sock, asio::buffer(reply), asio::use_awaitable);
        co_return;
      }
      Bytes payload(h.length - 1);
      co_await asio::async_read(sock, asio::buffer(payload), asio::use_awaitable);
      Bytes reply;
      try {
        reply = handler(h.type, payload);
      } catch (const WireError& e) {
        reply = encode_error(e.code(), e.what());
      } catch (const std::exception& e) {
        reply = encode_error(ErrorCode::kMalformed, e.what());
      }
      co_await asio::async_write(sock, asio::buffer(reply), asio::use_awaitable);
    }
  } catch (const std::exception&) {
    // Peer closed or reset; nothing to report.
  }
}

asio::awaitable<void> accept_loop(tcp::acceptor& acceptor, RequestHandler& handler,
                                  std::size_t max_frame) {
  for (;;) {
    tcp::socket sock = co_await acceptor.async_accept(asio::use_awaitable);
    sock.set_option(tcp::no_delay(true));
    asio::co_spawn(acceptor.get_executor(),
                   serve_session(std::move(sock), handler, max_frame), asio::detached);
  }
}

asio::awaitable<void> client_exchange(const Endpoint& ep, const Bytes& request,
                                      std::size_t max_frame, Exchange& out) {
  try {
    auto ex = co_await asio::this_coro::executor;
    tcp::resolver resolver(ex);
    const auto hosts =
        co_await resolver.async_resolve(ep.host, std::to_string(ep.port), asio::use_awaitable);
    tcp::socket sock(ex);
    co_await asio::async_connect(sock, hosts, asio::use_awaitable);
    sock.set_option(tcp::no_delay(true));
    co_await asio::async_write(sock, asio::buffer(request), asio::use_awaitable);
    out.bytes_sent = request.size();
    std::array<std::uint8_t, kFrameHeaderBytes> hdr;
    co_await asio::async_read(sock, asio::buffer(hdr), asio::use_awaitable);
    const FrameHeader h = decode_frame_header(hdr);
    if (h.length == 0 || h.length > max_frame) {
      out.error = "reply frame length " + std::to_string(h.length) + " out of range";
      co_return;
    }
    out.payload.resize(h.length - 1);
    co_await asio::async_read(sock, asio::buffer(out.payload), asio::use_awaitable);
    out.type = h.type;
    out.bytes_received = kFrameHeaderBytes + out.payload.size();
    out.ok = true;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
}

}  // namespace

struct Server::Impl {
  RequestHandler handler;
  ServerConfig cfg;
  asio::io_context io;
  std::optional<tcp::acceptor> acceptor;
  std::vector<std::thread> threads;
  std::uint16_t port = 0;

  std::mutex mu;
  std::condition_variable cv;
  bool running = false;
};

Server::Server(RequestHandler handler, ServerConfig cfg) : impl_(std::make_unique<Impl>()) {
  impl_->handler = std::move(handler);
  impl_->cfg = std::move(cfg);
}

Server::Server(const ServerContext& ctx, ServerConfig cfg)
    : Server(
          [&ctx, max = cfg.max_frame](std::uint8_t type, std::span<const std::uint8_t> p) {
            return handle_request(ctx, type, p, max);
          },
          cfg) {}

Server::~Server() { stop(); }

std::uint16_t Server::start() {
  auto& s = *impl_;
  if (s.running) return s.port;
  const auto addr = asio::ip::make_address(s.cfg.host);
  s.acceptor.emplace(s.io, tcp::endpoint(addr, s.cfg.port));
  s.port = s.acceptor->local_endpoint().port();
  asio::co_spawn(s.io, accept_loop(*s.acceptor, s.handler, s.cfg.max_frame),
                 asio::detached);
  const std::size_t workers = std::max<std::size_t>(1, s.cfg.workers);
  for (std::size_t i = 0; i < workers; ++i) {
    s.threads.emplace_back([&s] { s.io.run(); });
  }
  std::lock_guard lock(s.mu);
  s.running = true;
  return s.port;
}

void Server::stop() {
  auto& s = *impl_;
  {
    std::lock_guard lock(s.mu);
    if (!s.running) return;
    s.running = false;
  }
  asio::post(s.io, [&s] {
    boost::system::error_code ec;
    if (s.acceptor) s.acceptor->close(ec);
  });
  s.io.stop();
  for (auto& t : s.threads) t.join();
  s.threads.clear();
  s.cv.notify_all();
}

void Server::wait() {
  auto& s = *impl_;
  std::unique_lock lock(s.mu);
  s.cv.wait(lock, [&s] { return !s.running; });
}

std::uint16_t Server::port() const { return impl_->port; }

std::vector<Endpoint> parse_endpoints(std::string_view list) {
  std::vector<Endpoint> out;
  while (!list.empty()) {
    const auto comma = list.find(',');
    const std::string_view item = list.substr(0, comma);
    list = comma == std::string_view::npos ? std::string_view{} : list.substr(comma + 1);
    const auto colon = item.rfind(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == item.size()) {
      throw std::invalid_argument("expected host:port, got '" + std::string(item) + "'");
    }
    const std::string port_str(item.substr(colon + 1));
    char* end = nullptr;
    const long port = std::strtol(port_str.c_str(), &end, 10);
    if (*end != '\0' || port <= 0 || port > 65535) {
      throw std::invalid_argument("bad port in '" + std::string(item) + "'");
    }
    out.push_back({std::string(item.substr(0, colon)), static_cast<std::uint16_t>(port)});
  }
  return out;
}

std::chrono::milliseconds default_timeout() {
  if (const char* env = std::getenv("COMPIR_TIMEOUT_MS")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return std::chrono::milliseconds(v);
  }
  return std::chrono::seconds(30);
}

std::vector<Exchange> exchange_all(std::span<const Endpoint> servers,
                                   std::span<const Bytes> requests,
                                   std::chrono::milliseconds timeout,
                                   std::size_t max_frame) {
  if (servers.size() != requests.size()) {
    throw std::invalid_argument("need one request per server");
  }
  std::vector<Exchange> results(servers.size());
  {
    asio::io_context io;
    for (std::size_t j = 0; j < servers.size(); ++j) {
      asio::co_spawn(io, client_exchange(servers[j], requests[j], max_frame, results[j]),
                     asio::detached);
    }
    io.run_for(timeout);
    for (auto& r : results) {
      if (!r.ok && r.error.empty()) r.error = "timeout";
    }
  }
  return results;
}

FetchReport fetch(const CommitmentRecord& rec, const PublicParams& pp, std::size_t index,
                  std::span<const Endpoint> servers, Rng& rng, FetchOptions opts) {
  const auto& params = rec.params;
  if (servers.size() != params.k) {
    throw std::invalid_argument("need exactly k=" + std::to_string(params.k) + " servers");
  }
  if (pp.n() != params.columns()) {
    throw std::invalid_argument("public parameters do not match the commitment record");
  }
  const QuerySet qs = queries_gen(params, index, rng);
  std::vector<Bytes> requests;
  for (std::size_t j = 0; j < params.k; ++j) {
    requests.push_back(encode_query(params, j, rec.m, qs.queries[j]));
  }
  const auto exchanges = exchange_all(servers, requests, opts.timeout);

  FetchReport report;
  report.errors.resize(params.k);
  report.result.verdicts.assign(params.k, Verdict::kAccepted);
  std::vector<AnswerBundle> bundles(params.k);
  bool complete = true;
  for (std::size_t j = 0; j < params.k; ++j) {
    const auto& ex = exchanges[j];
    report.bytes_up.push_back(ex.bytes_sent);
    report.bytes_down.push_back(ex.bytes_received);
    if (!ex.ok) {
      report.errors[j] = ex.error;
      report.result.verdicts[j] = Verdict::kUnreachable;
      complete = false;
      continue;
    }
    if (ex.type == static_cast<std::uint8_t>(FrameType::kError)) {
      try {
        const auto err = decode_error_payload(ex.payload);
        report.errors[j] = "server error " + std::to_string(static_cast<int>(err.code)) +
                           ": " + err.message;
      } catch (const WireError& e) {
        report.errors[j] = e.what();
      }
      report.result.verdicts[j] = Verdict::kMalformed;
      complete = false;
      continue;
    }
    if (ex.type != static_cast<std::uint8_t>(FrameType::kAnswer)) {
      report.errors[j] = "unexpected reply type " + std::to_string(ex.type);
      report.result.verdicts[j] = Verdict::kMalformed;
      complete = false;
      continue;
    }
    try {
      bundles[j] = decode_answer_payload(ex.payload, rec.m);
    } catch (const WireError& e) {
      report.errors[j] = e.what();
      report.result.verdicts[j] = Verdict::kMalformed;
      complete = false;
    }
  }

  if (complete) {
    ExtractOptions eo;
    eo.parallel = opts.parallel_verify;
    report.result = compir_extract(params, pp, rec.com, rec.m, index, qs.queries, bundles,
                                   qs.aux, eo);
    return report;
  }
  // No reconstruction without all k answers; still grade what arrived.
  for (std::size_t j = 0; j < params.k; ++j) {
    if (report.result.verdicts[j] == Verdict::kAccepted) {
      report.result.verdicts[j] =
          verify_bundle(params, pp, rec.com, rec.m, qs.queries[j], bundles[j]);
    }
  }
  return report;
}

}  // namespace compir
