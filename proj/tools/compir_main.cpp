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

// compir: command-line front end.
//
//   setup   generate public parameters
//   gendb   write a random database
//   commit  hash and commit a database
//   serve   answer queries over TCP
//   get     retrieve one item from k servers
//   exp     run the verifiability experiment
//   bench   benchmark sweep to CSV
//   audit   operation counts next to the asymptotic table
//
// Exit codes: 0 success, 1 usage or transport error, 2 retrieval rejected.

#include <pthread.h>

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "compir/compir.hpp"
#include "compir/harness.hpp"
#include "compir/net.hpp"
#include "compir/serial.hpp"

namespace {

using namespace compir;

struct SchemeOpts {
  std::string scheme = "ckgs2";
  std::size_t k = 2;
  std::size_t t = 0;  // 0: scheme default
  std::size_t n = 0;

  void add(CLI::App* app, bool need_n = true) {
    app->add_option("--scheme", scheme, "ckgs2 | ckgsk | wy | be")->capture_default_str();
    app->add_option("--k", k, "number of servers")->capture_default_str();
    app->add_option("--t", t, "privacy threshold (default: 1, or k-1 for ckgsk)");
    auto* opt = app->add_option("--n", n, "number of items (blocks for be)");
    if (need_n) opt->required();
  }

  SchemeParams make() const {
    const auto id = parse_scheme(scheme);
    if (!id) throw std::invalid_argument("unknown scheme '" + scheme + "'");
    std::size_t kk = k;
    std::size_t tt = t;
    if (*id == SchemeId::kCkgs2) {
      kk = 2;
      if (tt == 0) tt = 1;
    }
    if (tt == 0) tt = *id == SchemeId::kCkgsK ? kk - 1 : 1;
    return SchemeParams::make(*id, kk, tt, n);
  }
};

std::vector<std::size_t> parse_id_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const long v = std::stol(item);
    if (v < 1) throw std::invalid_argument("server ids are 1-based");
    out.push_back(static_cast<std::size_t>(v - 1));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verifiable multi-server private information retrieval"};
  app.require_subcommand(1);

  // setup
  auto* setup = app.add_subcommand("setup", "generate public parameters");
  SchemeOpts setup_s;
  setup_s.add(setup);
  std::string setup_out;
  std::optional<std::uint64_t> setup_seed;
  setup->add_option("--out", setup_out, "output file")->required();
  setup->add_option("--seed", setup_seed, "deterministic test setup (never for production)");

  // gendb
  auto* gendb = app.add_subcommand("gendb", "write a random database");
  SchemeOpts gendb_s;
  gendb_s.add(gendb);
  std::size_t gendb_m = 1;
  std::uint64_t gendb_seed = 1;
  std::string gendb_out;
  gendb->add_option("--m", gendb_m, "item size in scalars")->capture_default_str();
  gendb->add_option("--seed", gendb_seed)->capture_default_str();
  gendb->add_option("--out", gendb_out)->required();

  // commit
  auto* commit = app.add_subcommand("commit", "hash and commit a database");
  SchemeOpts commit_s;
  commit_s.add(commit, false);
  std::string commit_db, commit_pp, commit_out;
  commit->add_option("--db", commit_db)->required();
  commit->add_option("--pp", commit_pp)->required();
  commit->add_option("--out", commit_out)->required();

  // serve
  auto* serve = app.add_subcommand("serve", "answer queries over TCP");
  std::string serve_db, serve_pp, serve_listen = "127.0.0.1:7000";
  std::size_t serve_workers = 2;
  serve->add_option("--db", serve_db)->required();
  serve->add_option("--pp", serve_pp)->required();
  serve->add_option("--listen", serve_listen, "host:port")->capture_default_str();
  serve->add_option("--workers", serve_workers)->capture_default_str();

  // get
  auto* get = app.add_subcommand("get", "retrieve one item");
  std::size_t get_index = 0;
  std::string get_servers, get_pp, get_com, get_out;
  std::optional<std::uint64_t> get_seed;
  get->add_option("--index", get_index, "1-based item (block for be)")->required();
  get->add_option("--servers", get_servers, "host:port,host:port,...")->required();
  get->add_option("--pp", get_pp)->required();
  get->add_option("--commitment", get_com)->required();
  get->add_option("--out", get_out, "write the item as raw 32-byte scalars");
  get->add_option("--seed", get_seed, "query randomness seed (testing only)");

  // exp
  auto* exp = app.add_subcommand("exp", "verifiability experiment");
  SchemeOpts exp_s;
  exp_s.add(exp);
  std::size_t exp_m = 4, exp_index = 1, exp_trials = 100;
  std::string exp_strategy = "random_all", exp_corrupt = "1";
  std::uint64_t exp_seed = 1;
  exp->add_option("--m", exp_m)->capture_default_str();
  exp->add_option("--index", exp_index)->capture_default_str();
  exp->add_option("--strategy", exp_strategy,
                  "tamper_data | tamper_hash | tamper_witness | wrong_db_consistent | "
                  "replay | random_all")
      ->capture_default_str();
  exp->add_option("--corrupt", exp_corrupt, "1-based server ids, comma separated")
      ->capture_default_str();
  exp->add_option("--trials", exp_trials)->capture_default_str();
  exp->add_option("--seed", exp_seed)->capture_default_str();

  // bench
  auto* bench = app.add_subcommand("bench", "benchmark sweep");
  std::string bench_grid, bench_out;
  bench->add_option("--grid", bench_grid, "TOML grid file")->required();
  bench->add_option("--out", bench_out, "CSV output")->required();

  // audit
  auto* audit = app.add_subcommand("audit", "operation counts");
  SchemeOpts audit_s;
  audit_s.add(audit);
  std::size_t audit_m = 1;
  audit->add_option("--m", audit_m)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*setup) {
      const auto params = setup_s.make();
      Rng rng = setup_seed ? Rng(*setup_seed) : Rng::from_entropy();
      const auto pp = compir_setup(params, rng);
      pp.save(setup_out);
      std::cerr << "wrote public parameters for " << params.columns() << " columns to "
                << setup_out << "\n";
      if (!setup_seed) {
        std::cerr << "note: single-party setup; the secret existed in this process only\n";
      }
      return 0;
    }
    if (*gendb) {
      const auto params = gendb_s.make();
      Rng rng(gendb_seed);
      Database::random(gendb_m, params.columns(), rng).save(gendb_out);
      return 0;
    }
    if (*commit) {
      const auto db = Database::load(commit_db);
      const auto pp = PublicParams::load(commit_pp);
      SchemeOpts so = commit_s;
      const auto id = parse_scheme(so.scheme);
      if (!id) throw std::invalid_argument("unknown scheme '" + so.scheme + "'");
      if (so.n == 0) {
        // Derive n from the column count and the block width.
        SchemeOpts probe = so;
        probe.n = 1;
        so.n = pp.n() / probe.make().width();
      }
      CommitmentRecord rec;
      rec.params = so.make();
      rec.m = db.rows();
      if (rec.params.columns() != pp.n()) {
        throw std::invalid_argument("scheme parameters do not match the public parameters");
      }
      rec.com = compir_commit(pp, db);
      rec.save(commit_out);
      return 0;
    }
    if (*serve) {
      const auto db = Database::load(serve_db);
      const auto pp = PublicParams::load(serve_pp);
      const ServerContext ctx(pp, db);
      const auto ep = parse_endpoints(serve_listen);
      if (ep.size() != 1) throw std::invalid_argument("--listen takes one host:port");
      ServerConfig cfg;
      cfg.host = ep[0].host;
      cfg.port = ep[0].port;
      cfg.workers = serve_workers;
      // Block the stop signals before the workers start so that only the
      // sigwait below sees them.
      sigset_t stop_set;
      sigemptyset(&stop_set);
      sigaddset(&stop_set, SIGINT);
      sigaddset(&stop_set, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &stop_set, nullptr);
      Server server(ctx, cfg);
      const auto port = server.start();
      std::cerr << "serving m=" << db.rows() << " columns=" << db.cols() << " on "
                << cfg.host << ":" << port << std::endl;
      int sig = 0;
      sigwait(&stop_set, &sig);
      server.stop();
      return 0;
    }
    if (*get) {
      const auto rec = CommitmentRecord::load(get_com);
      const auto pp = PublicParams::load(get_pp);
      const auto servers = parse_endpoints(get_servers);
      Rng rng = get_seed ? Rng(*get_seed) : Rng::from_entropy();
      const auto report = fetch(rec, pp, get_index, servers, rng);
      bool transport_failure = false;
      for (std::size_t j = 0; j < servers.size(); ++j) {
        const auto v = report.result.verdicts[j];
        std::cerr << "server " << (j + 1) << " " << servers[j].str() << ": "
                  << verdict_name(v);
        if (!report.errors[j].empty()) std::cerr << " (" << report.errors[j] << ")";
        std::cerr << "\n";
        if (v == Verdict::kUnreachable) transport_failure = true;
      }
      if (!report.result.ok()) {
        if (report.result.hash_mismatch) std::cerr << "retrieved data failed the hash check\n";
        std::cerr << "rejected\n";
        return transport_failure ? 1 : 2;
      }
      const auto& item = *report.result.item;
      if (!get_out.empty()) {
        ByteWriter w;
        for (const auto& col : item) {
          for (const auto& s : col) w.scalar(s);
        }
        write_file(get_out, w.take());
      } else {
        for (const auto& col : item) {
          for (const auto& s : col) std::cout << s.to_hex() << "\n";
        }
      }
      return 0;
    }
    if (*exp) {
      ExperimentConfig cfg;
      cfg.params = exp_s.make();
      cfg.m = exp_m;
      cfg.index = exp_index;
      cfg.corrupt = parse_id_list(exp_corrupt);
      const auto st = parse_strategy(exp_strategy);
      if (!st) throw std::invalid_argument("unknown strategy '" + exp_strategy + "'");
      cfg.strategy = *st;
      cfg.trials = exp_trials;
      cfg.seed = exp_seed;
      const auto tally = run_experiment(cfg);
      std::cout << "trials=" << tally.trials() << " exp1=" << tally.exp1
                << " bottom=" << tally.bottom << " correct=" << tally.correct
                << " noop=" << tally.noop << " tampered_accepted=" << tally.tampered_accepted
                << " verdict_mismatch=" << tally.verdict_mismatch << "\n";
      return tally.exp1 == 0 ? 0 : 2;
    }
    if (*bench) {
      const auto grid = BenchGrid::load(bench_grid);
      const auto rows = bench_sweep(grid, &std::cerr);
      std::ofstream out(bench_out);
      if (!out) throw std::runtime_error("cannot write " + bench_out);
      write_bench_csv(out, rows);
      return 0;
    }
    if (*audit) {
      print_cost_report(std::cout, cost_audit(audit_s.make(), audit_m));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
