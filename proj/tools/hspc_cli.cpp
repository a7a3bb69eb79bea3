// Copyright 2026 The hspc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * hspc command-line driver: gen, train, compress, decompress, verify, bench
 * and state.  Every command writes a JSON report that echoes its resolved
 * configuration; passing that report back through --config replays the run.
 *
 * Exit codes: 0 success, 1 usage or I/O error, 2 training did not converge,
 * 3 verification failure.
 */

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hspc/compress_db.hpp"
#include "hspc/errors.hpp"
#include "hspc/group.hpp"
#include "hspc/hsp_exact.hpp"
#include "hspc/io.hpp"
#include "hspc/message.hpp"
#include "hspc/parallel.hpp"
#include "hspc/state_compress.hpp"
#include "hspc/var_hsp.hpp"

namespace {

using hspc::Element;
using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitUnconverged = 2;
constexpr int kExitVerify = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A failed integrity or verification step, reported as diagnostic JSON.
struct CheckFailure : std::runtime_error {
  std::string stage;
  CheckFailure(std::string stage_name, const std::string& what)
      : std::runtime_error(what), stage(std::move(stage_name)) {}
};

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_input(const std::string& path, const std::string& flag) {
  if (path.empty()) throw UsageError("--" + flag + " is required");
  if (!fs::is_regular_file(path)) throw hspc::IoError("--" + flag + ": no such file: " + path);
}

void check_output(const std::string& path, const std::string& flag) {
  if (path.empty()) throw UsageError("--" + flag + " is required");
  const auto parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent))
    throw hspc::IoError("--" + flag + ": directory does not exist: " + parent.string());
}

void write_json(const std::string& path, const json& j) { hspc::atomic_write(path, j.dump(2) + "\n"); }

json bits_list(const std::vector<Element>& elems, int n) {
  json out = json::array();
  for (Element e : elems) out.push_back(hspc::format_bits(e, n));
  return out;
}

hspc::GroupStructure group_arg(const std::string& text) {
  try {
    return hspc::parse_group_descriptor(text);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

Element element_arg(const std::string& text, int n, const std::string& flag) {
  if (text.empty()) return 0;
  if (static_cast<int>(text.size()) != n) throw UsageError("--" + flag + " must have exactly " + std::to_string(n) + " bits");
  try {
    return hspc::parse_bits(text);
  } catch (const std::exception& e) {
    throw UsageError("--" + flag + ": " + e.what());
  }
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

/// A subcommand whose options double as its echoed configuration.
class Command {
 public:
  Command(CLI::App& root, const std::string& name, const std::string& description) : name_(name) {
    app_ = root.add_subcommand(name, description);
    app_->add_option("--config", config_path_, "replay the configuration echoed in an earlier report");
  }
  virtual ~Command() = default;

  CLI::App* app() const { return app_; }
  const std::string& name() const { return name_; }

  int execute() {
    resolve();
    return run();
  }

 protected:
  virtual int run() = 0;

  template <class T>
  void option(const std::string& key, T& var, const std::string& description) {
    auto* opt = app_->add_option("--" + key, var, description);
    fields_.push_back({key, opt, [&var] { return json(var); }, [&var](const json& j) { var = j.get<T>(); }});
  }

  void flag(const std::string& key, bool& var, const std::string& description) {
    auto* opt = app_->add_flag("--" + key, var, description);
    fields_.push_back({key, opt, [&var] { return json(var); }, [&var](const json& j) { var = j.get<bool>(); }});
  }

  void train_options(hspc::TrainConfig& t) {
    option("beta", t.learning_rate, "learning rate");
    option("fd-step", t.fd_step, "finite-difference step on the switch probabilities");
    option("mc-samples", t.mc_samples, "Monte Carlo samples per expected-cost estimate");
    option("max-iters", t.max_iters, "iteration cap");
    option("grad-tol", t.grad_tol, "gradient-norm stopping threshold");
    option("resample-limit", t.resample_limit, "rejection rounds before the exact conditional draw");
    option("patience", t.patience, "small-gradient iterations required to stop at positive cost");
    option("max-step", t.max_step, "largest update length (0 = unlimited)");
    option("pretrain-lr", t.pretrain_lr, "pretraining learning rate");
    option("pretrain-fd-step", t.pretrain_fd_step, "pretraining finite-difference step");
    option("pretrain-iters", t.pretrain_iters, "pretraining iterations per restart");
    option("pretrain-restarts", t.pretrain_restarts, "pretraining restarts");
    flag("train-perm", t.train_perm, "also train the bit-permutation switches");
  }

  json echo() const {
    json c = json::object();
    for (const auto& f : fields_) c[f.key] = f.get();
    return c;
  }

  json report_header() const { return {{"command", name_}, {"config", echo()}}; }

 private:
  struct Field {
    std::string key;
    CLI::Option* opt;
    std::function<json()> get;
    std::function<void(const json&)> set;
  };

  void resolve() {
    if (config_path_.empty()) return;
    check_input(config_path_, "config");
    json j;
    try {
      j = json::parse(hspc::read_text(config_path_));
    } catch (const json::parse_error& e) {
      throw UsageError("--config: " + std::string(e.what()));
    }
    if (j.contains("command") && j["command"] != name_)
      throw UsageError("--config was written by '" + j["command"].get<std::string>() + "', not '" + name_ + "'");
    if (j.contains("config")) j = j["config"];
    if (!j.is_object()) throw UsageError("--config does not hold a configuration object");
    for (auto& f : fields_) {
      if (f.opt->count() > 0 || !j.contains(f.key)) continue;
      try {
        f.set(j[f.key]);
      } catch (const json::exception& e) {
        throw UsageError("--config field '" + f.key + "': " + e.what());
      }
    }
  }

  std::string name_;
  CLI::App* app_ = nullptr;
  std::string config_path_;
  std::vector<Field> fields_;
};

std::string default_path(const std::string& given, const std::string& base, const std::string& suffix) {
  return given.empty() ? base + suffix : given;
}

// ---------------------------------------------------------------------------

class GenCommand : public Command {
 public:
  explicit GenCommand(CLI::App& root) : Command(root, "gen", "generate a planted hidden-subgroup sequence") {
    option("group", group_, "group descriptor, e.g. Z8, Z4xZ2, Z2xZ2xZ2@perm=2,0,1");
    option("s", s_, "generator of the hidden subgroup as an n-bit string (default all zeros)");
    option("m", m_, "value width in bits (default n)");
    option("seed", seed_, "random seed");
    flag("ordered", ordered_, "label cosets 0, 1, 2, ... in order of their minima");
    option("out", out_, "oracle table file (.json for the JSON form)");
    option("report", report_, "JSON sidecar (default <out>.meta.json)");
  }

 protected:
  int run() override {
    if (group_.empty()) throw UsageError("--group is required");
    check_output(out_, "out");
    const auto g = group_arg(group_);
    const int n = g.n();
    const Element s = element_arg(s_, n, "s");
    const int m = m_ > 0 ? m_ : n;
    const auto h = hspc::subgroup_generated(g, s);
    hspc::Rng rng = hspc::Rng::stream({seed_, 0x6e6});
    const auto seq = hspc::generate_hsp_sequence({g, h, m, seed_}, rng, ordered_);
    hspc::save_oracle(out_, hspc::Oracle(n, m, seq));
    json rep = report_header();
    rep["group"] = g.descriptor();
    rep["n"] = n;
    rep["m"] = m;
    rep["generator"] = hspc::format_bits(s, n);
    rep["hidden_order"] = h.size();
    rep["hidden_generators"] = bits_list(h.generators(), n);
    rep["cosets"] = g.order() / h.size();
    write_json(default_path(report_, out_, ".meta.json"), rep);
    return kExitOk;
  }

 private:
  std::string group_, s_, out_, report_;
  int m_ = 0;
  std::uint64_t seed_ = 0;
  bool ordered_ = false;
};

// ---------------------------------------------------------------------------

class TrainCommand : public Command {
 public:
  explicit TrainCommand(CLI::App& root) : Command(root, "train", "variationally find a compressing group and subgroup") {
    option("in", in_, "oracle table or database file");
    option("out", out_, "compressed message (.json for the JSON form)");
    option("history", history_, "history CSV (default <out>.history.csv)");
    option("report", report_, "JSON report (default <out>.meta.json)");
    option("seed", cfg_.seed, "random seed");
    train_options(cfg_);
  }

 protected:
  int run() override {
    check_input(in_, "in");
    check_output(out_, "out");
    const auto history_path = default_path(history_, out_, ".history.csv");
    const auto report_path = default_path(report_, out_, ".meta.json");
    check_output(history_path, "history");
    check_output(report_path, "report");
    try {
      cfg_.validate();
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
    auto [db, m] = hspc::load_database(in_);
    const hspc::Oracle f(std::countr_zero(db.values.size()), m, db.values);

    hspc::Rng rng = hspc::Rng::stream({cfg_.seed, 0x7a1});
    const auto r = hspc::train(f, cfg_, rng);
    hspc::save_message(out_, r.message);

    std::ostringstream csv;
    csv << "iteration,expected_cost,grad_norm,stage\n";
    for (std::size_t k = 0; k < r.history.size(); ++k) {
      const auto& row = r.history[k];
      csv << row.iteration << ',' << fmt_double(row.expected_cost) << ',' << fmt_double(row.grad_norm) << ','
          << (k + 1 == r.history.size() ? "rounded" : "train") << '\n';
    }
    hspc::atomic_write(history_path, csv.str());

    const auto g = r.message.group();
    const auto h = r.message.subgroup();
    json rep = report_header();
    rep["converged"] = r.converged;
    rep["initial_cost"] = r.initial_cost;
    rep["final_cost"] = r.final_cost;
    rep["iterations"] = r.iterations;
    rep["group"] = g.descriptor();
    rep["generator"] = hspc::format_bits(r.message.generator, f.n);
    rep["hidden_order"] = h.size();
    rep["serialized_bits"] = hspc::serialized_bits(r.message);
    rep["kappa_bound"] = hspc::compression_ratio(f.n, m, h.size());
    write_json(report_path, rep);
    if (!r.converged) {
      std::cerr << "train: not converged; residual reconstruction cost " << fmt_double(r.final_cost) << "\n";
      return kExitUnconverged;
    }
    return kExitOk;
  }

 private:
  std::string in_, out_, history_, report_;
  hspc::TrainConfig cfg_;
};

// ---------------------------------------------------------------------------

hspc::CompressedMessage load_checked_message(const std::string& path) {
  try {
    auto msg = hspc::load_message(path);
    hspc::validate_message(msg);
    return msg;
  } catch (const hspc::IntegrityError& e) {
    throw CheckFailure("message", e.what());
  }
}

class CompressCommand : public Command {
 public:
  explicit CompressCommand(CLI::App& root) : Command(root, "compress", "mark the duplicated database slots free") {
    option("in", in_, "oracle table or database file");
    option("msg", msg_, "compressed message");
    option("out", out_, "compressed database file");
    option("report", report_, "JSON report (default <out>.meta.json)");
  }

 protected:
  int run() override {
    check_input(in_, "in");
    check_input(msg_, "msg");
    check_output(out_, "out");
    auto [db, m] = hspc::load_database(in_);
    const auto msg = load_checked_message(msg_);
    if (msg.m != m) throw CheckFailure("compress", "message value width does not match the database");
    hspc::Database packed;
    try {
      packed = hspc::compress_database(db, msg);
    } catch (const hspc::VerificationError& e) {
      throw CheckFailure("compress", e.what());
    } catch (const hspc::IntegrityError& e) {
      throw CheckFailure("decode", e.what());
    }
    hspc::save_database(out_, packed, m);
    json rep = report_header();
    rep["slots"] = packed.values.size();
    rep["occupied"] = packed.occupied();
    rep["free"] = packed.values.size() - packed.occupied();
    write_json(default_path(report_, out_, ".meta.json"), rep);
    return kExitOk;
  }

 private:
  std::string in_, msg_, out_, report_;
};

class DecompressCommand : public Command {
 public:
  explicit DecompressCommand(CLI::App& root) : Command(root, "decompress", "reconstruct the full sequence") {
    option("msg", msg_, "compressed message");
    option("in", in_, "compressed database to query (default: decode the message alone)");
    option("out", out_, "oracle table file");
    option("report", report_, "JSON report (default <out>.meta.json)");
  }

 protected:
  int run() override {
    check_input(msg_, "msg");
    if (!in_.empty()) check_input(in_, "in");
    check_output(out_, "out");
    const auto msg = load_checked_message(msg_);
    std::vector<std::uint64_t> values;
    try {
      if (in_.empty()) {
        values = hspc::decode(msg);
      } else {
        auto [db, m] = hspc::load_database(in_);
        if (m != msg.m || db.values.size() != (std::size_t{1} << msg.n))
          throw CheckFailure("decompress", "database shape does not match the message");
        const hspc::QueryIndex index(msg);
        values.resize(db.values.size());
        for (Element i = 0; i < values.size(); ++i) values[i] = index.query(db, i);
      }
    } catch (const hspc::IntegrityError& e) {
      throw CheckFailure("decode", e.what());
    }
    hspc::save_oracle(out_, hspc::Oracle(msg.n, msg.m, std::move(values)));
    json rep = report_header();
    rep["n"] = msg.n;
    rep["m"] = msg.m;
    write_json(default_path(report_, out_, ".meta.json"), rep);
    return kExitOk;
  }

 private:
  std::string msg_, in_, out_, report_;
};

class VerifyCommand : public Command {
 public:
  explicit VerifyCommand(CLI::App& root)
      : Command(root, "verify", "adversarial-overwrite round trip of a message against its database") {
    option("in", in_, "original oracle table or database file");
    option("msg", msg_, "compressed message");
    option("seed", seed_, "seed for the overwrite values");
    option("report", report_, "also write the JSON report here");
  }

  const std::string& report_path() const { return report_; }

 protected:
  int run() override {
    check_input(in_, "in");
    check_input(msg_, "msg");
    if (!report_.empty()) check_output(report_, "report");
    auto [db, m] = hspc::load_database(in_);
    hspc::CompressedMessage msg;
    try {
      msg = hspc::load_message(msg_);
    } catch (const hspc::IntegrityError& e) {
      throw CheckFailure("message", e.what());
    }
    if (msg.m != m || db.values.size() != (std::size_t{1} << msg.n))
      throw CheckFailure("shape", "message (n=" + std::to_string(msg.n) + ", m=" + std::to_string(msg.m) +
                                      ") does not match the database (2^n=" + std::to_string(db.values.size()) +
                                      ", m=" + std::to_string(m) + ")");
    std::vector<std::uint64_t> decoded;
    try {
      decoded = hspc::decode(msg);
    } catch (const hspc::IntegrityError& e) {
      throw CheckFailure("decode", e.what());
    }
    try {
      hspc::validate_message(msg);
    } catch (const hspc::IntegrityError& e) {
      throw CheckFailure("message", e.what());
    }
    for (Element i = 0; i < decoded.size(); ++i)
      if (decoded[i] != db.values[i])
        throw CheckFailure("values", "value mismatch at index " + hspc::format_bits(i, msg.n) + ": message gives " +
                                         std::to_string(decoded[i]) + ", database holds " +
                                         std::to_string(db.values[i]));
    hspc::Database packed;
    try {
      packed = hspc::compress_database(db, msg);
    } catch (const hspc::VerificationError& e) {
      throw CheckFailure("compress", e.what());
    }
    hspc::Rng rng = hspc::Rng::stream({seed_, 0xadd});
    const bool ok = hspc::adversarial_overwrite_check(packed, msg, db.values, rng);
    if (!ok) throw CheckFailure("overwrite", "a query changed after the free slots were overwritten");

    const auto h = msg.subgroup();
    const double raw = std::ldexp(static_cast<double>(m), msg.n);
    const auto bits = hspc::serialized_bits(msg);
    const auto header = hspc::header_bits(msg);
    json rep = report_header();
    rep["status"] = "pass";
    rep["n"] = msg.n;
    rep["m"] = m;
    rep["hidden_order"] = h.size();
    rep["serialized_bits"] = bits;
    rep["header_bits"] = header;
    rep["payload_bits"] = bits - header;
    rep["measured_ratio"] = static_cast<double>(bits) / raw;
    rep["payload_ratio"] = static_cast<double>(bits - header) / raw;
    rep["kappa_bound"] = hspc::compression_ratio(msg.n, m, h.size());
    std::cout << rep.dump(2) << "\n";
    if (!report_.empty()) write_json(report_, rep);
    return kExitOk;
  }

 private:
  std::string in_, msg_, report_;
  std::uint64_t seed_ = 0;
};

// ---------------------------------------------------------------------------

std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      if (n < 1 || n > 16) throw UsageError("--n values must lie in [1, 16]");
      out.push_back(n);
    } catch (const std::logic_error&) {
      throw UsageError("--n must be a comma-separated list of integers, got '" + text + "'");
    }
  }
  if (out.empty()) throw UsageError("--n is empty");
  return out;
}

class BenchCommand : public Command {
 public:
  explicit BenchCommand(CLI::App& root)
      : Command(root, "bench", "query counts of Fourier sampling against classical collision search") {
    option("n", n_list_, "comma-separated index widths");
    option("seeds", seeds_, "trials per n");
    option("seed", seed_, "base seed");
    option("family", family_, "simon (Z2^n, |H| = 2) or cyclic (Z_{2^n}, random H)");
    option("k-factor", k_factor_, "Fourier samples per index bit (K = k-factor * n)");
    flag("raw", raw_, "write one row per trial instead of per-n medians");
    option("out", out_, "CSV output");
    option("report", report_, "JSON report (default <out>.meta.json)");
  }

 protected:
  int run() override {
    const auto ns = parse_n_list(n_list_);
    if (seeds_ < 1) throw UsageError("--seeds must be positive");
    if (k_factor_ < 1) throw UsageError("--k-factor must be positive");
    if (family_ != "simon" && family_ != "cyclic") throw UsageError("--family must be simon or cyclic");
    check_output(out_, "out");
    const auto report_path = default_path(report_, out_, ".meta.json");
    check_output(report_path, "report");

    struct Trial {
      std::uint64_t classical_queries = 0, quantum_queries = 0, bound = 0;
      bool classical_ok = false, quantum_ok = false;
    };
    std::ostringstream csv;
    csv << (raw_ ? "trial,n,group_type,method,queries,success\n" : "n,group_type,method,queries,success\n");
    json summary = json::array();
    for (int n : ns) {
      const hspc::GroupStructure g(family_ == "simon" ? hspc::GroupType::elementary(n) : hspc::GroupType::cyclic(n));
      const int K = k_factor_ * n;
      auto trials = hspc::parallel_map<Trial>(static_cast<std::size_t>(seeds_), [&](std::size_t t) {
        hspc::Rng rng = hspc::Rng::stream({seed_, 0xbe7c, static_cast<std::uint64_t>(n), t});
        Element s;
        if (family_ == "simon") {
          s = 1 + rng.below(g.order() - 1);
        } else {
          s = std::uint64_t{1} << (1 + rng.below(static_cast<std::uint64_t>(n)));
          s %= g.order();
          if (s == 0) s = g.order() / 2;
        }
        const auto h = hspc::subgroup_generated(g, s);
        const hspc::Oracle f(n, n, hspc::generate_hsp_sequence({g, h, n, seed_}, rng));
        Trial tr;
        const auto c = hspc::classical_collision_baseline(f, g, rng);
        tr.classical_queries = c.queries;
        tr.classical_ok = c.collided && c.generator != 0 && h.contains(c.generator);
        const auto q = hspc::quantum_hsp_pipeline(f, g, K, rng);
        tr.quantum_queries = q.queries;
        tr.quantum_ok = q.hidden == h;
        tr.bound = static_cast<std::uint64_t>(K) + g.order() / h.size();
        return tr;
      });
      const std::string type = g.type().to_string();
      std::vector<double> cq, qq;
      double c_ok = 0, q_ok = 0;
      bool within = true;
      for (std::size_t t = 0; t < trials.size(); ++t) {
        const auto& tr = trials[t];
        cq.push_back(static_cast<double>(tr.classical_queries));
        qq.push_back(static_cast<double>(tr.quantum_queries));
        c_ok += tr.classical_ok;
        q_ok += tr.quantum_ok;
        within = within && tr.quantum_queries <= tr.bound;
        if (raw_) {
          csv << t << ',' << n << ',' << type << ",classical," << tr.classical_queries << ',' << tr.classical_ok << '\n';
          csv << t << ',' << n << ',' << type << ",quantum," << tr.quantum_queries << ',' << tr.quantum_ok << '\n';
        }
      }
      const double cmed = median(cq), qmed = median(qq);
      const double T = static_cast<double>(trials.size());
      if (!raw_) {
        csv << n << ',' << type << ",classical," << fmt_double(cmed) << ',' << fmt_double(c_ok / T) << '\n';
        csv << n << ',' << type << ",quantum," << fmt_double(qmed) << ',' << fmt_double(q_ok / T) << '\n';
      }
      summary.push_back({{"n", n},
                         {"group_type", type},
                         {"classical_median", cmed},
                         {"classical_reference", std::sqrt(2.0 * std::ldexp(1.0, n))},
                         {"classical_success", c_ok / T},
                         {"quantum_median", qmed},
                         {"quantum_success", q_ok / T},
                         {"quantum_within_bound", within}});
    }
    hspc::atomic_write(out_, csv.str());
    json rep = report_header();
    rep["rows"] = summary;
    write_json(report_path, rep);
    return kExitOk;
  }

 private:
  std::string n_list_ = "3,8,10,12";
  int seeds_ = 500;
  std::uint64_t seed_ = 0;
  std::string family_ = "simon";
  int k_factor_ = 4;
  bool raw_ = false;
  std::string out_, report_;
};

// ---------------------------------------------------------------------------

class StateCommand : public Command {
 public:
  explicit StateCommand(CLI::App& root)
      : Command(root, "state", "learn the translation symmetry of a quantum-state source") {
    option("n", n_, "qubits");
    option("group", group_, "group of the planted source (default Z_{2^n})");
    option("s", s_, "planted subgroup generator as an n-bit string");
    option("h0", h0_, "planted subgroup generator as an integer (alternative to --s)");
    option("source", source_, "invariant, uniform or fixture");
    option("fixture", fixture_, "state fixture JSON for --source fixture");
    option("copies", copies_, "copies drawn for the infidelity estimate");
    option("k", k_, "Fourier samples for the gcd protocol over Z_{2^n}");
    option("seed", cfg_.seed, "random seed");
    train_options(cfg_);
    option("out", out_, "JSON result");
    option("history", history_, "C_F history CSV (default <out>.history.csv)");
  }

 protected:
  int run() override {
    check_output(out_, "out");
    const auto history_path = default_path(history_, out_, ".history.csv");
    check_output(history_path, "history");
    if (copies_ < 1) throw UsageError("--copies must be positive");
    if (k_ < 1) throw UsageError("--k must be positive");
    try {
      cfg_.validate();
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }

    hspc::StateSource source;
    int n = n_;
    json planted;
    if (source_ == "fixture") {
      check_input(fixture_, "fixture");
      json j;
      try {
        j = json::parse(hspc::read_text(fixture_));
      } catch (const json::parse_error& e) {
        throw hspc::IoError(fixture_ + ": " + e.what());
      }
      auto states = std::make_shared<std::vector<hspc::StateVector>>(hspc::states_from_json(j));
      n = states->front().num_qubits();
      source = [states](hspc::Rng& r) { return (*states)[r.below(states->size())]; };
    } else {
      if (n < 1 || n > hspc::kMaxDensityBits)
        throw UsageError("--n must lie in [1, " + std::to_string(hspc::kMaxDensityBits) + "]");
      if (source_ == "uniform") {
        const std::size_t dim = std::size_t{1} << n;
        source = [dim](hspc::Rng&) {
          return hspc::StateVector::from_amplitudes(
              std::vector<hspc::Complex>(dim, hspc::Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0)));
        };
      } else if (source_ == "invariant") {
        const auto g = group_arg(group_.empty() ? "Z" + std::to_string(std::uint64_t{1} << n) : group_);
        if (g.n() != n) throw UsageError("--group does not have " + std::to_string(n) + " bits");
        if (!s_.empty() && h0_ != 0) throw UsageError("give --s or --h0, not both");
        const Element s = s_.empty() ? h0_ : element_arg(s_, n, "s");
        if (s >= g.order()) throw UsageError("--h0 does not fit in n bits");
        auto basis = std::make_shared<hspc::CosetBasis>(g, hspc::subgroup_generated(g, s));
        planted = {{"group", g.descriptor()},
                   {"generator", hspc::format_bits(s, n)},
                   {"hidden", bits_list(basis->hidden().elements(), n)}};
        source = [basis](hspc::Rng& r) { return hspc::random_invariant_state(*basis, r); };
      } else {
        throw UsageError("--source must be invariant, uniform or fixture");
      }
    }

    hspc::StateTrainConfig st{cfg_, copies_};
    hspc::Rng rng = hspc::Rng::stream({cfg_.seed, 0x57a7e});
    const auto r = hspc::variational_state_train(source, n, st, rng);

    std::ostringstream csv;
    csv << "iteration,C_F,grad_norm,stage\n";
    for (std::size_t k = 0; k < r.history.size(); ++k) {
      const auto& row = r.history[k];
      csv << row.iteration << ',' << fmt_double(row.expected_cost) << ',' << fmt_double(row.grad_norm) << ','
          << (k + 1 == r.history.size() ? "rounded" : "train") << '\n';
    }
    hspc::atomic_write(history_path, csv.str());

    json rep = report_header();
    if (!planted.is_null()) rep["planted"] = planted;
    rep["variational"] = {{"group", r.group.descriptor()},
                          {"hidden", bits_list(r.hidden.elements(), n)},
                          {"final_cost", r.final_cost},
                          {"iterations", r.iterations},
                          {"converged", r.converged}};
    const hspc::GroupStructure zn(hspc::GroupType::cyclic(n));
    if (source_ != "invariant" || group_.empty() || group_arg(group_) == zn) {
      hspc::Rng grng = hspc::Rng::stream({cfg_.seed, 0x9cd});
      const auto l = hspc::learn_h0_zn(source, n, k_, grng);
      const auto h = hspc::subgroup_generated(zn, l.h0 % zn.order());
      rep["gcd"] = {{"h0", l.h0},
                    {"sample_gcd", l.sample_gcd},
                    {"inconclusive", l.inconclusive},
                    {"samples", l.samples},
                    {"hidden", bits_list(h.elements(), n)}};
    }
    write_json(out_, rep);
    if (!r.converged) {
      std::cerr << "state: not converged; C_F = " << fmt_double(r.final_cost) << "\n";
      return kExitUnconverged;
    }
    return kExitOk;
  }

 private:
  int n_ = 3;
  std::string group_, s_, source_ = "invariant", fixture_, out_, history_;
  std::uint64_t h0_ = 0;
  int copies_ = 8;
  int k_ = 8;
  hspc::TrainConfig cfg_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hspc: hidden-subgroup data compression experiments"};
  app.require_subcommand(1);
  std::vector<std::unique_ptr<Command>> commands;
  commands.push_back(std::make_unique<GenCommand>(app));
  commands.push_back(std::make_unique<TrainCommand>(app));
  commands.push_back(std::make_unique<CompressCommand>(app));
  commands.push_back(std::make_unique<DecompressCommand>(app));
  auto verify = std::make_unique<VerifyCommand>(app);
  const VerifyCommand* verify_ptr = verify.get();
  commands.push_back(std::move(verify));
  commands.push_back(std::make_unique<BenchCommand>(app));
  commands.push_back(std::make_unique<StateCommand>(app));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  for (auto& cmd : commands) {
    if (!cmd->app()->parsed()) continue;
    try {
      return cmd->execute();
    } catch (const CheckFailure& e) {
      json diag = {{"command", cmd->name()}, {"status", "fail"}, {"stage", e.stage}, {"message", e.what()}};
      std::cout << diag.dump(2) << "\n";
      if (cmd.get() == verify_ptr && !verify_ptr->report_path().empty()) {
        try {
          write_json(verify_ptr->report_path(), diag);
        } catch (const std::exception& w) {
          std::cerr << cmd->name() << ": " << w.what() << "\n";
        }
      }
      std::cerr << cmd->name() << ": " << e.stage << " check failed: " << e.what() << "\n";
      return kExitVerify;
    } catch (const std::exception& e) {
      std::cerr << cmd->name() << ": " << e.what() << "\n";
      return kExitUsage;
    }
  }
  return kExitUsage;
}
