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

#include "compir/harness.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "compir/wire.hpp"

namespace compir {

// ---------------------------------------------------------------- experiment

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kTamperData: return "tamper_data";
    case Strategy::kTamperHash: return "tamper_hash";
    case Strategy::kTamperWitness: return "tamper_witness";
    case Strategy::kWrongDbConsistent: return "wrong_db_consistent";
    case Strategy::kReplay: return "replay";
    case Strategy::kRandomAll: return "random_all";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return c == '-' ? '_' : static_cast<char>(std::tolower(c));
  });
  for (auto st : all_strategies()) {
    if (strategy_name(st) == s) return st;
  }
  return std::nullopt;
}

std::vector<Strategy> all_strategies() {
  return {Strategy::kTamperData,        Strategy::kTamperHash, Strategy::kTamperWitness,
          Strategy::kWrongDbConsistent, Strategy::kReplay,     Strategy::kRandomAll};
}

ExperimentTally& ExperimentTally::operator+=(const ExperimentTally& o) {
  exp1 += o.exp1;
  bottom += o.bottom;
  correct += o.correct;
  noop += o.noop;
  tampered_accepted += o.tampered_accepted;
  verdict_mismatch += o.verdict_mismatch;
  // Chain the transcripts so the pooled digest still pins every run.
  Sha3Hasher h;
  h.update(transcript);
  h.update(o.transcript);
  transcript = h.finish();
  return *this;
}

namespace {

Scalar nonzero_scalar(Rng& rng) {
  for (;;) {
    Scalar s = rng.next_scalar();
    if (!s.is_zero()) return s;
  }
}

Item true_item(const SchemeParams& params, const Database& db, std::size_t index) {
  Item item;
  const std::size_t w = params.width();
  for (std::size_t c = 0; c < w; ++c) {
    const auto col = db.column((index - 1) * w + c);
    item.emplace_back(col.begin(), col.end());
  }
  return item;
}

// Honest answers over another database, opened against the real
// commitment wherever the opening depends on it.
AnswerBundle answer_over(const ServerContext& other, const SchemeParams& params,
                         const Commitment& com, const Query& q, WitnessMode mode) {
  AnswerBundle b;
  b.mode = mode;
  b.data = answer_gen(params, MatrixView::of(other.db()), q);
  for (const auto& row : answer_gen(params, MatrixView::row(other.hashes()), q)) {
    b.hashes.push_back(row[0]);
  }
  b.witnesses = compir_witnesses(other.pp(), other.hashes(), com,
                                 coeff_vectors(params, q), b.hashes, mode);
  return b;
}

struct Adversary {
  const ExperimentConfig& cfg;
  const ServerContext& honest;
  const ServerContext& wrong;

  AnswerBundle act(Strategy s, std::size_t server, const AnswerBundle& honest_bundle,
                   Rng& rng) const {
    const auto& params = cfg.params;
    AnswerBundle b = honest_bundle;
    switch (s) {
      case Strategy::kTamperData: {
        const auto u = rng.uniform(b.data.size());
        const auto r = rng.uniform(b.data[u].size());
        b.data[u][r] += nonzero_scalar(rng);
        break;
      }
      case Strategy::kTamperHash: {
        const auto u = rng.uniform(b.hashes.size());
        b.hashes[u] += nonzero_scalar(rng);
        break;
      }
      case Strategy::kTamperWitness: {
        const auto u = rng.uniform(b.witnesses.size());
        b.witnesses[u] = Witness{G2::generator() * nonzero_scalar(rng)};
        break;
      }
      case Strategy::kWrongDbConsistent: {
        // The adversary sees the queries sent to B.
        b = answer_over(wrong, params, honest.commitment(), current_queries->queries[server],
                        b.mode);
        break;
      }
      case Strategy::kReplay: {
        const QuerySet stale =
            queries_gen(params, 1 + rng.uniform(params.n), rng);
        b = compir_answer(honest, params, stale.queries[server], b.mode);
        break;
      }
      case Strategy::kRandomAll:
        throw std::logic_error("random_all must be resolved before acting");
    }
    return b;
  }

  const QuerySet* current_queries = nullptr;
};

void check_config(const ExperimentConfig& cfg) {
  const auto& p = cfg.params;
  if (cfg.index < 1 || cfg.index > p.n) throw std::invalid_argument("index out of range");
  if (cfg.m == 0) throw std::invalid_argument("m must be positive");
  std::set<std::size_t> seen;
  for (auto j : cfg.corrupt) {
    if (j >= p.k) throw std::invalid_argument("corrupt server id out of range");
    if (!seen.insert(j).second) throw std::invalid_argument("duplicate corrupt server id");
  }
  if (static_cast<std::uint8_t>(cfg.strategy) > static_cast<std::uint8_t>(Strategy::kRandomAll)) {
    throw std::invalid_argument("unknown strategy id");
  }
}

}  // namespace

ExperimentTally run_experiment(const ExperimentConfig& cfg) {
  check_config(cfg);
  const auto& params = cfg.params;
  Rng rng(cfg.seed);
  Rng setup_rng = rng.fork();
  const PublicParams pp = compir_setup(params, setup_rng);
  const Database db = Database::random(cfg.m, params.columns(), rng);
  const ServerContext ctx(pp, db);

  // x' differs from x in every column of the target item.
  Database alt = db;
  for (std::size_t c = 0; c < params.width(); ++c) {
    const std::size_t col = (cfg.index - 1) * params.width() + c;
    alt.at(rng.uniform(cfg.m), col) += nonzero_scalar(rng);
  }
  const ServerContext alt_ctx(pp, alt);
  const Item truth = true_item(params, db, cfg.index);

  Adversary adv{cfg, ctx, alt_ctx};
  const std::vector<Strategy> concrete = {Strategy::kTamperData, Strategy::kTamperHash,
                                          Strategy::kTamperWitness,
                                          Strategy::kWrongDbConsistent, Strategy::kReplay};
  ExperimentTally tally;
  Sha3Hasher transcript;
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    Rng trng = rng.fork();
    const QuerySet qs = queries_gen(params, cfg.index, trng);
    adv.current_queries = &qs;
    std::vector<AnswerBundle> honest;
    honest.reserve(params.k);
    for (const auto& q : qs.queries) honest.push_back(compir_answer(ctx, params, q));

    std::vector<AnswerBundle> bundles = honest;
    std::vector<bool> changed(params.k, false);
    bool tampered = false;
    bool only_opening_tampers = true;
    for (auto j : cfg.corrupt) {
      Strategy s = cfg.strategy;
      if (s == Strategy::kRandomAll) s = concrete[trng.uniform(concrete.size())];
      bundles[j] = adv.act(s, j, honest[j], trng);
      changed[j] = !(bundles[j] == honest[j]);
      tampered = tampered || changed[j];
      if (s != Strategy::kTamperHash && s != Strategy::kTamperWitness) {
        only_opening_tampers = false;
      }
    }

    const auto res = compir_extract(params, pp, ctx.commitment(), cfg.m, cfg.index,
                                    qs.queries, bundles, qs.aux);
    Outcome outcome;
    if (!res.item) {
      outcome = Outcome::kBottom;
    } else if (*res.item != truth) {
      outcome = Outcome::kExp1;
    } else if (!cfg.corrupt.empty() && !tampered) {
      outcome = Outcome::kNoop;
    } else {
      outcome = Outcome::kCorrect;
      if (tampered) ++tally.tampered_accepted;
    }
    switch (outcome) {
      case Outcome::kExp1: ++tally.exp1; break;
      case Outcome::kBottom: ++tally.bottom; break;
      case Outcome::kCorrect: ++tally.correct; break;
      case Outcome::kNoop: ++tally.noop; break;
    }
    if (tampered && only_opening_tampers) {
      for (std::size_t j = 0; j < params.k; ++j) {
        if ((res.verdicts[j] == Verdict::kRejected) != static_cast<bool>(changed[j])) {
          ++tally.verdict_mismatch;
          break;
        }
      }
    }

    for (const auto& b : bundles) transcript.update(encode_answer_payload(b));
    const std::uint8_t tag = static_cast<std::uint8_t>(outcome);
    transcript.update(std::span<const std::uint8_t>(&tag, 1));
  }
  tally.transcript = transcript.finish();
  return tally;
}

// ---------------------------------------------------------------- bench

namespace {

template <typename T>
std::vector<T> int_list(const toml::table& tbl, std::string_view key, std::vector<T> dflt) {
  const auto* arr = tbl[key].as_array();
  if (!arr) {
    if (auto v = tbl[key].value<std::int64_t>()) return {static_cast<T>(*v)};
    return dflt;
  }
  std::vector<T> out;
  for (const auto& e : *arr) {
    const auto v = e.template value<std::int64_t>();
    if (!v) throw std::invalid_argument("grid key '" + std::string(key) + "' must hold integers");
    out.push_back(static_cast<T>(*v));
  }
  return out;
}

std::size_t available_memory() {
  std::ifstream in("/proc/meminfo");
  std::string key;
  std::size_t kb = 0;
  std::string unit;
  while (in >> key >> kb >> unit) {
    if (key == "MemAvailable:") return kb * 1024;
  }
  return std::size_t{4} << 30;
}

std::int64_t median(std::vector<std::int64_t> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

std::string cell_scheme_label(const SchemeParams& p) {
  std::string s(scheme_name(p.scheme));
  if (p.scheme == SchemeId::kWy && p.d != (2 * p.k - 1) / p.t) s += "-d" + std::to_string(p.d);
  return s;
}

template <typename F>
std::int64_t time_ns(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
}

}  // namespace

BenchGrid BenchGrid::parse(std::string_view toml_text) {
  toml::table tbl;
  try {
    tbl = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    throw std::invalid_argument(std::string("grid: ") + std::string(e.description()));
  }
  BenchGrid g;
  if (const auto* arr = tbl["schemes"].as_array()) {
    for (const auto& e : *arr) {
      const auto name = e.template value<std::string>();
      const auto id = name ? parse_scheme(*name) : std::nullopt;
      if (!id) throw std::invalid_argument("grid: unknown scheme in 'schemes'");
      g.schemes.push_back(*id);
    }
  } else {
    g.schemes = {SchemeId::kCkgs2, SchemeId::kWy, SchemeId::kBe};
  }
  g.ks = int_list<std::size_t>(tbl, "k", {2});
  g.ts = int_list<long>(tbl, "t", {1});
  g.ns = int_list<std::size_t>(tbl, "n", {1024});
  g.ms = int_list<std::size_t>(tbl, "m", {1});
  g.wy_degrees = int_list<std::size_t>(tbl, "wy_d", {0});
  g.repetitions = tbl["repetitions"].value_or<std::int64_t>(5);
  g.warmup = tbl["warmup"].value_or<std::int64_t>(1);
  g.seed = tbl["seed"].value_or<std::int64_t>(1);
  g.memory_limit = static_cast<std::size_t>(tbl["memory_limit_mb"].value_or<std::int64_t>(0)) << 20;
  if (g.repetitions == 0) throw std::invalid_argument("grid: repetitions must be positive");
  return g;
}

BenchGrid BenchGrid::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open grid file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::vector<BenchCell> expand_grid(const BenchGrid& grid) {
  std::vector<BenchCell> cells;
  auto add = [&](const SchemeParams& p, std::size_t m) {
    for (const auto& c : cells) {
      if (c.params == p && c.m == m) return;
    }
    cells.push_back({p, m});
  };
  for (auto scheme : grid.schemes) {
    for (auto n : grid.ns) {
      for (auto m : grid.ms) {
        if (scheme == SchemeId::kCkgs2) {
          add(SchemeParams::make(scheme, 2, 1, n), m);
          continue;
        }
        for (auto k : grid.ks) {
          if (scheme == SchemeId::kCkgsK) {
            if (k >= 2) add(SchemeParams::make(scheme, k, k - 1, n), m);
            continue;
          }
          for (auto ts : grid.ts) {
            const long t = ts <= 0 ? static_cast<long>(k) + ts : ts;
            if (t < 1 || t >= static_cast<long>(k)) continue;
            const auto base = SchemeParams::make(scheme, k, static_cast<std::size_t>(t), n);
            if (scheme != SchemeId::kWy) {
              add(base, m);
              continue;
            }
            for (auto d : grid.wy_degrees) {
              if (d == 0) {
                add(base, m);
              } else if (d * base.t <= 2 * k - 1) {
                add(base.with_wy_degree(d), m);
              }
            }
          }
        }
      }
    }
  }
  return cells;
}

std::size_t estimate_cell_bytes(const BenchCell& cell) {
  const auto& p = cell.params;
  const std::size_t cols = p.columns();
  const std::size_t L = p.combinations();
  std::size_t bytes = 0;
  bytes += 2 * cell.m * cols * sizeof(Scalar);              // database + serialized copy headroom
  bytes += cols * (sizeof(blst_p1_affine) + 2 * sizeof(blst_p2_affine));
  bytes += p.k * (L + 1) * cell.m * sizeof(Scalar);         // answers
  bytes += p.k * L * cols * sizeof(Scalar);                 // coefficient vectors
  bytes += 2 * p.k * (L + 1) * cell.m * kScalarBytes;       // encoded frames
  return bytes;
}

std::vector<BenchRow> bench_cell(const BenchCell& cell, std::size_t repetitions,
                                 std::size_t warmup, std::uint64_t seed) {
  const auto& params = cell.params;
  Rng rng(seed);
  Rng setup_rng = rng.fork();
  const PublicParams pp = compir_setup(params, setup_rng);
  const Database db = Database::random(cell.m, params.columns(), rng);
  const ServerContext ctx(pp, db);
  const WitnessMode mode = default_witness_mode(params.scheme);
  const std::size_t index = 1 + rng.uniform(params.n);

  const char* phases[] = {"query", "answer", "witness", "verify", "extract", "total"};
  std::vector<std::vector<std::int64_t>> samples(6);
  std::size_t bytes_up = 0;
  std::size_t bytes_down = 0;
  const bool wire_ok = params.scheme != SchemeId::kWy || params.d == (2 * params.k - 1) / params.t;

  for (std::size_t rep = 0; rep < warmup + repetitions; ++rep) {
    QuerySet qs;
    std::int64_t t_query = time_ns([&] { qs = queries_gen(params, index, rng); });
    std::vector<AnswerBundle> bundles(params.k);
    std::int64_t t_answer = 0;
    std::int64_t t_witness = 0;
    for (std::size_t j = 0; j < params.k; ++j) {
      auto& b = bundles[j];
      b.mode = mode;
      t_answer += time_ns([&] {
        b.data = answer_gen(params, MatrixView::of(db), qs.queries[j]);
        for (const auto& row : answer_gen(params, MatrixView::row(ctx.hashes()), qs.queries[j])) {
          b.hashes.push_back(row[0]);
        }
      });
      t_witness += time_ns([&] {
        b.witnesses = compir_witnesses(pp, ctx.hashes(), ctx.commitment(),
                                       coeff_vectors(params, qs.queries[j]), b.hashes, mode);
      });
    }
    std::vector<Verdict> verdicts(params.k);
    const std::int64_t t_verify = time_ns([&] {
      for (std::size_t j = 0; j < params.k; ++j) {
        verdicts[j] = verify_bundle(params, pp, ctx.commitment(), cell.m, qs.queries[j], bundles[j]);
      }
    });
    RetrievalResult res;
    const std::int64_t t_extract =
        time_ns([&] { res = compir_decode(params, index, bundles, qs.aux); });
    if (!res.ok() || std::any_of(verdicts.begin(), verdicts.end(),
                                 [](Verdict v) { return v != Verdict::kAccepted; })) {
      throw std::runtime_error("bench: honest retrieval failed");
    }
    if (rep == 0) {
      for (std::size_t j = 0; j < params.k; ++j) {
        if (wire_ok) {
          bytes_up += encode_query(params, j, cell.m, qs.queries[j]).size();
        } else {
          bytes_up += kFrameHeaderBytes + 12 + query_body_bytes(params);
        }
        bytes_down += kFrameHeaderBytes + encode_answer_payload(bundles[j]).size();
      }
    }
    if (rep < warmup) continue;
    const std::int64_t vals[] = {t_query, t_answer, t_witness, t_verify, t_extract,
                                 t_query + t_answer + t_witness + t_verify + t_extract};
    for (std::size_t i = 0; i < 6; ++i) samples[i].push_back(vals[i]);
  }

  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < 6; ++i) {
    rows.push_back({params, cell.m, phases[i], bytes_up, bytes_down, median(samples[i])});
  }
  return rows;
}

std::vector<BenchRow> bench_sweep(const BenchGrid& grid, std::ostream* log) {
  const std::size_t limit = grid.memory_limit ? grid.memory_limit : available_memory() / 2;
  std::vector<BenchRow> rows;
  for (const auto& cell : expand_grid(grid)) {
    const std::size_t need = estimate_cell_bytes(cell);
    if (need > limit) {
      if (log) {
        *log << "skip " << cell_scheme_label(cell.params) << " k=" << cell.params.k
             << " t=" << cell.params.t << " n=" << cell.params.n << " m=" << cell.m
             << ": needs ~" << (need >> 20) << " MiB, limit " << (limit >> 20) << " MiB\n";
      }
      continue;
    }
    auto cell_rows = bench_cell(cell, grid.repetitions, grid.warmup, grid.seed);
    rows.insert(rows.end(), cell_rows.begin(), cell_rows.end());
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kBenchCsvHeader << '\n';
  for (const auto& r : rows) {
    out << cell_scheme_label(r.params) << ',' << r.params.k << ',' << r.params.t << ','
        << r.params.n << ',' << r.m << ',' << r.phase << ',' << r.bytes_up << ','
        << r.bytes_down << ',' << r.nanos << '\n';
  }
}

// ---------------------------------------------------------------- audit

OpTally tally_of(const OpCounters& c) {
  return OpTally{c.field_add, c.field_mul, c.g1_add + c.g2_add, c.g1_mul + c.g2_mul,
                 c.pairings};
}

namespace {

struct Predicted {
  OpTally server_data, server_ver, client_data, client_ver;
  std::string f_server_data, f_server_ver, f_client_data, f_client_ver;
  std::uint64_t upload_elems = 0;  // bits for ckgs2
  double rate = 0;
};

Predicted predict(const SchemeParams& p, std::uint64_t m) {
  const std::uint64_t n = p.n, k = p.k, t = p.t, d = p.d, l = p.ell, w = p.k - p.t;
  Predicted r;
  switch (p.scheme) {
    case SchemeId::kCkgs2:
      r.server_data = {m * n, 0, 0, 0, 0};
      r.server_ver = {n * n, n * n, n, n, 0};
      r.client_data = {m, 0, 0, 0, 0};
      r.client_ver = {0, 0, 2 * n, 2 * n, 6};
      r.f_server_data = "mn+";
      r.f_server_ver = "n^2+, n^2x, n G+, n Gx";
      r.f_client_data = "m+";
      r.f_client_ver = "2n G+, 2n Gx, 6 e";
      r.upload_elems = 2 * n;
      r.rate = 0.5;
      break;
    case SchemeId::kCkgsK:
      r.server_data = {m * n, m * n, 0, 0, 0};
      r.server_ver = {n * n, n * n, n, n, 0};
      r.client_data = {k * m, 0, 0, 0, 0};
      r.client_ver = {0, 0, k * n, k * n, 3 * k};
      r.f_server_data = "mn+, mnx";
      r.f_server_ver = "n^2+, n^2x, n G+, n Gx";
      r.f_client_data = "km+";
      r.f_client_ver = "kn G+, kn Gx, 3k e";
      r.upload_elems = k * n;
      r.rate = 1.0 / static_cast<double>(k);
      break;
    case SchemeId::kWy: {
      const std::uint64_t cl = m * t * (k * l + d * d * d * t * t);
      r.server_data = {l * m * n, l * m * n * d, 0, 0, 0};
      r.server_ver = {l * n * n, l * n * n, l * n, l * n, 0};
      r.client_data = {cl, cl, 0, 0, 0};
      r.client_ver = {0, 0, k * l * n, k * l * n, 3 * k};
      r.f_server_data = "l mn+, l mnd x";
      r.f_server_ver = "l n^2+, l n^2x, l n G+, l n Gx";
      r.f_client_data = "mt(kl+d^3t^2)+, mt(kl+d^3t^2)x";
      r.f_client_ver = "kln G+, kln Gx, 3k e";
      r.upload_elems = k * l;
      r.rate = 1.0 / static_cast<double>(k);
      break;
    }
    case SchemeId::kBe:
      r.server_data = {w * m * n, w * m * n, 0, 0, 0};
      r.server_ver = {w * w * n * n, w * w * n * n, w * n, w * n, 0};
      r.client_data = {k * (w * (k * n + m) + k * m), k * k * (w * n + m), 0, 0, 0};
      r.client_ver = {0, 0, k * w * n, k * w * n, 3 * k};
      r.f_server_data = "(k-t)mn+, (k-t)mnx";
      r.f_server_ver = "(k-t)^2n^2+, (k-t)^2n^2x, (k-t)n G+, (k-t)n Gx";
      r.f_client_data = "k((k-t)(kn+m)+km)+, k^2((k-t)n+m)x";
      r.f_client_ver = "k(k-t)n G+, k(k-t)n Gx, 3k e";
      r.upload_elems = k * w * n;
      r.rate = static_cast<double>(w) / static_cast<double>(k);
      break;
  }
  return r;
}

}  // namespace

CostReport cost_audit(const SchemeParams& params, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  Rng setup_rng = rng.fork();
  const PublicParams pp = compir_setup(params, setup_rng);
  const Database db = Database::random(m, params.columns(), rng);
  const ServerContext ctx(pp, db);
  const WitnessMode mode = default_witness_mode(params.scheme);
  const std::size_t index = 1 + rng.uniform(params.n);
  const QuerySet qs = queries_gen(params, index, rng);

  std::vector<AnswerBundle> bundles(params.k);
  OpCounters server_data, server_ver;
  for (std::size_t j = 0; j < params.k; ++j) {
    auto& b = bundles[j];
    b.mode = mode;
    CounterScope data_scope;
    b.data = answer_gen(params, MatrixView::of(db), qs.queries[j]);
    for (const auto& row : answer_gen(params, MatrixView::row(ctx.hashes()), qs.queries[j])) {
      b.hashes.push_back(row[0]);
    }
    const OpCounters d = data_scope.delta();
    CounterScope ver_scope;
    b.witnesses = compir_witnesses(pp, ctx.hashes(), ctx.commitment(),
                                   coeff_vectors(params, qs.queries[j]), b.hashes, mode);
    const OpCounters v = ver_scope.delta();
    if (j == 0) {
      server_data = d;
      server_ver = v;
    }
  }

  CounterScope client_ver_scope;
  for (std::size_t j = 0; j < params.k; ++j) {
    if (verify_bundle(params, pp, ctx.commitment(), m, qs.queries[j], bundles[j]) !=
        Verdict::kAccepted) {
      throw std::runtime_error("audit: honest bundle rejected");
    }
  }
  const OpCounters client_ver = client_ver_scope.delta();

  CounterScope client_data_scope;
  std::vector<Answer> data;
  for (const auto& b : bundles) data.push_back(b.data);
  const Item item = extract(params, index, data, qs.aux);
  const OpCounters client_data = client_data_scope.delta();
  (void)item;

  const Predicted pr = predict(params, m);
  CostReport rep;
  rep.params = params;
  rep.m = m;
  rep.lines = {
      {"server-data", tally_of(server_data), pr.server_data, pr.f_server_data},
      {"server-verification", tally_of(server_ver), pr.server_ver, pr.f_server_ver},
      {"client-data", tally_of(client_data), pr.client_data, pr.f_client_data},
      {"client-verification", tally_of(client_ver), pr.client_ver, pr.f_client_ver},
  };
  for (std::size_t j = 0; j < params.k; ++j) {
    rep.upload_bits += 8 * query_body_bytes(params);
  }
  rep.predicted_upload_bits =
      params.scheme == SchemeId::kCkgs2 ? pr.upload_elems : pr.upload_elems * 8 * kScalarBytes;
  const double item_bytes = static_cast<double>(params.width() * m * kScalarBytes);
  double data_bytes = 0;
  for (const auto& b : bundles) data_bytes += static_cast<double>(b.data.size() * m * kScalarBytes);
  rep.download_rate = item_bytes / data_bytes;
  rep.predicted_download_rate = pr.rate;
  return rep;
}

void print_cost_report(std::ostream& out, const CostReport& r) {
  const auto& p = r.params;
  out << "scheme=" << scheme_name(p.scheme) << " k=" << p.k << " t=" << p.t << " n=" << p.n
      << " m=" << r.m;
  if (p.scheme == SchemeId::kWy) out << " d=" << p.d << " ell=" << p.ell;
  out << "\n";
  out << std::left << std::setw(22) << "role" << std::setw(30) << "field + / x"
      << std::setw(24) << "group + / x" << std::setw(10) << "pairings"
      << "table formula\n";
  for (const auto& l : r.lines) {
    auto pair_str = [](std::uint64_t a, std::uint64_t b) {
      return std::to_string(a) + " / " + std::to_string(b);
    };
    out << std::setw(22) << l.role
        << std::setw(30) << pair_str(l.measured.field_add, l.measured.field_mul)
        << std::setw(24) << pair_str(l.measured.group_add, l.measured.group_mul)
        << std::setw(10) << l.measured.pairings << "measured\n";
    out << std::setw(22) << ""
        << std::setw(30) << pair_str(l.predicted.field_add, l.predicted.field_mul)
        << std::setw(24) << pair_str(l.predicted.group_add, l.predicted.group_mul)
        << std::setw(10) << l.predicted.pairings << l.formula << "\n";
  }
  out << "upload bits " << r.upload_bits << " (table: " << r.predicted_upload_bits << ")\n";
  out << "download rate " << r.download_rate << " (table: " << r.predicted_download_rate
      << ")\n";
}

}  // namespace compir
