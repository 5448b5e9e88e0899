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

#include <cstdlib>
#include <thread>

#include <boost/asio.hpp>
#include <gtest/gtest.h>

#include "compir/net.hpp"

namespace compir {
namespace {

namespace asio = boost::asio;
using asio::ip::tcp;
using namespace std::chrono_literals;

class NetTest : public ::testing::Test {
 protected:
  void SetUp() override {
    Rng rng(1);
    params_ = SchemeParams::make(SchemeId::kCkgs2, 2, 1, 64);
    pp_.emplace(compir_setup(params_, rng));
    db_.emplace(Database::random(16, 64, rng));
    ctx_.emplace(*pp_, *db_);
    rec_ = CommitmentRecord{params_, 16, compir_commit(*pp_, *db_)};
  }

  std::unique_ptr<Server> start_honest(ServerConfig cfg = {}) {
    auto s = std::make_unique<Server>(*ctx_, cfg);
    s->start();
    return s;
  }

  std::vector<Scalar> column(std::size_t i) const {
    const auto c = db_->column(i - 1);
    return {c.begin(), c.end()};
  }

  SchemeParams params_;
  std::optional<PublicParams> pp_;
  std::optional<Database> db_;
  std::optional<ServerContext> ctx_;
  CommitmentRecord rec_;
};

Endpoint local(const Server& s) { return Endpoint{"127.0.0.1", s.port()}; }

// Blocking single-connection client for protocol-level checks.
struct RawClient {
  asio::io_context io;
  tcp::socket sock{io};

  explicit RawClient(std::uint16_t port) {
    sock.connect(tcp::endpoint(asio::ip::make_address("127.0.0.1"), port));
  }
  void send(const Bytes& b) { asio::write(sock, asio::buffer(b)); }
  Frame recv() {
    std::array<std::uint8_t, kFrameHeaderBytes> hdr;
    asio::read(sock, asio::buffer(hdr));
    const auto h = decode_frame_header(hdr);
    Frame f;
    f.type = h.type;
    f.payload.resize(h.length - 1);
    asio::read(sock, asio::buffer(f.payload));
    return f;
  }
  bool closed_by_peer() {
    std::uint8_t b;
    boost::system::error_code ec;
    sock.read_some(asio::buffer(&b, 1), ec);
    return ec == asio::error::eof || ec == asio::error::connection_reset;
  }
};

TEST(Endpoints, Parse) {
  const auto eps = parse_endpoints("127.0.0.1:7000,localhost:80");
  ASSERT_EQ(eps.size(), 2u);
  EXPECT_EQ(eps[0].host, "127.0.0.1");
  EXPECT_EQ(eps[0].port, 7000);
  EXPECT_EQ(eps[1].str(), "localhost:80");
  EXPECT_THROW(parse_endpoints("nohost"), std::invalid_argument);
  EXPECT_THROW(parse_endpoints("h:99999"), std::invalid_argument);
  EXPECT_THROW(parse_endpoints("h:"), std::invalid_argument);
}

TEST(Endpoints, TimeoutFromEnvironment) {
  ::unsetenv("COMPIR_TIMEOUT_MS");
  EXPECT_EQ(default_timeout(), std::chrono::milliseconds(30000));
  ::setenv("COMPIR_TIMEOUT_MS", "1500", 1);
  EXPECT_EQ(default_timeout(), std::chrono::milliseconds(1500));
  ::setenv("COMPIR_TIMEOUT_MS", "junk", 1);
  EXPECT_EQ(default_timeout(), std::chrono::milliseconds(30000));
  ::unsetenv("COMPIR_TIMEOUT_MS");
}

TEST_F(NetTest, HonestFetch) {
  auto s1 = start_honest();
  auto s2 = start_honest();
  const std::vector<Endpoint> eps = {local(*s1), local(*s2)};
  Rng rng(2);
  for (std::size_t i : {1u, 33u, 64u}) {
    const auto rep = fetch(rec_, *pp_, i, eps, rng);
    ASSERT_TRUE(rep.result.ok()) << rep.errors[0] << rep.errors[1];
    EXPECT_EQ((*rep.result.item)[0], column(i));
    EXPECT_EQ(rep.result.verdicts, std::vector<Verdict>(2, Verdict::kAccepted));
    // Query body n/8 bytes behind a 5-byte frame header and 12-byte query header.
    EXPECT_EQ(rep.bytes_up[0], 5 + 12 + 8u);
    EXPECT_EQ(rep.bytes_down[0], 5 + 4 + 16 * 32 + 32 + 1 + 96u);
  }
}

TEST_F(NetTest, TamperingServerFlagged) {
  auto honest = start_honest();
  const ServerContext& ctx = *ctx_;
  Server proxy(
      [&ctx](std::uint8_t type, std::span<const std::uint8_t> payload) {
        const Frame f = decode_frame(handle_request(ctx, type, payload));
        auto b = decode_answer_payload(f.payload, ctx.db().rows());
        b.hashes[0] += Scalar::one();
        return encode_answer(b);
      },
      ServerConfig{});
  proxy.start();
  const std::vector<Endpoint> eps = {local(*honest), local(proxy)};
  Rng rng(3);
  const auto rep = fetch(rec_, *pp_, 10, eps, rng);
  EXPECT_FALSE(rep.result.ok());
  EXPECT_EQ(rep.result.verdicts, (std::vector<Verdict>{Verdict::kAccepted, Verdict::kRejected}));

  // Same queries and tamper in process.
  Rng again(3);
  const auto qs = queries_gen(params_, 10, again);
  std::vector<AnswerBundle> bundles;
  for (const auto& q : qs.queries) bundles.push_back(compir_answer(ctx, params_, q));
  bundles[1].hashes[0] += Scalar::one();
  const auto local_res =
      compir_extract(params_, *pp_, rec_.com, 16, 10, qs.queries, bundles, qs.aux);
  EXPECT_EQ(local_res.verdicts, rep.result.verdicts);
  EXPECT_EQ(local_res.ok(), rep.result.ok());
}

TEST_F(NetTest, ServerDown) {
  auto up = start_honest();
  std::uint16_t dead_port;
  {
    auto gone = start_honest();
    dead_port = gone->port();
    gone->stop();
  }
  const std::vector<Endpoint> eps = {local(*up), Endpoint{"127.0.0.1", dead_port}};
  Rng rng(4);
  const auto rep = fetch(rec_, *pp_, 5, eps, rng);
  EXPECT_FALSE(rep.result.ok());
  EXPECT_FALSE(rep.result.hash_mismatch);
  EXPECT_EQ(rep.result.verdicts[0], Verdict::kAccepted);
  EXPECT_EQ(rep.result.verdicts[1], Verdict::kUnreachable);
  EXPECT_FALSE(rep.errors[1].empty());
}

TEST_F(NetTest, ErrorReplyIsMalformed) {
  auto up = start_honest();
  Server refusing(
      [](std::uint8_t, std::span<const std::uint8_t>) {
        return encode_error(ErrorCode::kDimension, "no");
      },
      ServerConfig{});
  refusing.start();
  const std::vector<Endpoint> eps = {local(refusing), local(*up)};
  Rng rng(5);
  const auto rep = fetch(rec_, *pp_, 5, eps, rng);
  EXPECT_FALSE(rep.result.ok());
  EXPECT_EQ(rep.result.verdicts[0], Verdict::kMalformed);
  EXPECT_NE(rep.errors[0].find("server error 2"), std::string::npos);
}

TEST_F(NetTest, ConnectionSurvivesErrorReply) {
  auto s = start_honest();
  RawClient c(s->port());
  c.send(encode_frame(0x42, Bytes{1, 2, 3}));
  Frame f = c.recv();
  EXPECT_EQ(f.type, 0x7F);
  EXPECT_EQ(decode_error_payload(f.payload).code, ErrorCode::kMalformed);
  // Dimension mismatch, same connection.
  const auto p8 = SchemeParams::make(SchemeId::kCkgs2, 2, 1, 8);
  c.send(encode_query(p8, 0, 16, Query{std::vector<Scalar>(8)}));
  f = c.recv();
  EXPECT_EQ(decode_error_payload(f.payload).code, ErrorCode::kDimension);
  Rng rng(6);
  const auto qs = queries_gen(params_, 3, rng);
  c.send(encode_query(params_, 0, 16, qs.queries[0]));
  f = c.recv();
  EXPECT_EQ(f.type, 0x02);
  EXPECT_EQ(decode_answer_payload(f.payload, 16), compir_answer(*ctx_, params_, qs.queries[0]));
}

TEST_F(NetTest, OversizeFrameClosesConnection) {
  ServerConfig cfg;
  cfg.max_frame = 1024;
  auto s = start_honest(cfg);
  RawClient c(s->port());
  c.send(Bytes{0, 0, 0x10, 0, 0x01});  // claims 4096 bytes
  const Frame f = c.recv();
  EXPECT_EQ(f.type, 0x7F);
  EXPECT_EQ(decode_error_payload(f.payload).code, ErrorCode::kOversize);
  EXPECT_TRUE(c.closed_by_peer());
}

TEST_F(NetTest, ZeroLengthFrameClosesConnection) {
  auto s = start_honest();
  RawClient c(s->port());
  c.send(Bytes{0, 0, 0, 0, 0x01});
  const Frame f = c.recv();
  EXPECT_EQ(decode_error_payload(f.payload).code, ErrorCode::kMalformed);
  EXPECT_TRUE(c.closed_by_peer());
}

TEST_F(NetTest, NetworkBytesEqualInProcessBytes) {
  auto s = start_honest();
  Rng rng(7);
  const auto qs = queries_gen(params_, 20, rng);
  std::vector<Bytes> requests;
  std::vector<Endpoint> eps;
  for (std::size_t j = 0; j < 2; ++j) {
    requests.push_back(encode_query(params_, j, 16, qs.queries[j]));
    eps.push_back(local(*s));
  }
  const auto ex = exchange_all(eps, requests, 10s);
  for (std::size_t j = 0; j < 2; ++j) {
    ASSERT_TRUE(ex[j].ok) << ex[j].error;
    const Frame req = decode_frame(requests[j]);
    const Bytes in_process = handle_request(*ctx_, req.type, req.payload);
    EXPECT_EQ(encode_frame(ex[j].type, ex[j].payload), in_process);
    EXPECT_EQ(ex[j].bytes_received, in_process.size());
    EXPECT_EQ(ex[j].bytes_sent, requests[j].size());
  }
}

TEST_F(NetTest, ConcurrentClientsMatchSequential) {
  ServerConfig cfg;
  cfg.workers = 3;
  auto s = start_honest(cfg);
  Rng rng(8);
  std::vector<Bytes> requests;
  std::vector<Bytes> expected;
  for (std::size_t c = 0; c < 4; ++c) {
    const auto qs = queries_gen(params_, 1 + c, rng);
    requests.push_back(encode_query(params_, 0, 16, qs.queries[0]));
    const Frame f = decode_frame(requests.back());
    expected.push_back(handle_request(*ctx_, f.type, f.payload));
  }
  std::vector<Bytes> got(requests.size());
  std::vector<std::thread> clients;
  for (std::size_t c = 0; c < requests.size(); ++c) {
    clients.emplace_back([&, c] {
      const std::vector<Endpoint> eps = {local(*s)};
      const std::vector<Bytes> one = {requests[c]};
      const auto ex = exchange_all(eps, one, 20s);
      if (ex[0].ok) got[c] = encode_frame(ex[0].type, ex[0].payload);
    });
  }
  for (auto& t : clients) t.join();
  EXPECT_EQ(got, expected);
}

TEST(Net, SlowServerTimesOut) {
  Server slow(
      [](std::uint8_t, std::span<const std::uint8_t>) {
        std::this_thread::sleep_for(1500ms);
        return encode_error(ErrorCode::kMalformed, "late");
      },
      ServerConfig{});
  slow.start();
  const std::vector<Endpoint> eps = {Endpoint{"127.0.0.1", slow.port()}};
  const std::vector<Bytes> req = {encode_frame(0x01, Bytes{0})};
  const auto start = std::chrono::steady_clock::now();
  const auto ex = exchange_all(eps, req, 200ms);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_FALSE(ex[0].ok);
  EXPECT_EQ(ex[0].error, "timeout");
  EXPECT_LT(elapsed, 1000ms);
}

TEST(Net, RequestCountMismatchThrows) {
  const std::vector<Endpoint> eps = {Endpoint{"127.0.0.1", 1}};
  EXPECT_THROW(exchange_all(eps, {}, 1s), std::invalid_argument);
}

}  // namespace
}  // namespace compir
